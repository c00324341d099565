/// Parses `3`, `2..5` (inclusive) or comma-separated mixtures of both.
pub fn parse_list(src: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in src.split(',') {
        let part = part.trim();
        let bad = || format!("'{part}' is not a number or an inclusive range a..b");
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(format!("range '{part}' is empty"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

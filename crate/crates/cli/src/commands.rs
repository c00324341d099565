use std::io::Read;

use serde_json::{json, Map, Value};

use flagpush::approx::{self, ApproxError, AuditOptions, WeightShape};
use flagpush::certify::{self, CertifyError, FiltrationCertificate, LimitStatus};
use flagpush::gysin::{coefficient_formula, FormulaVariant, GysinError, Ring, RootContext};
use flagpush::polyring::{fmt_rat, parse_rat, BigRational};

use crate::ranges::parse_list;
use crate::{CliError, Format, Output};

pub struct Settings {
    pub seed: u64,
    pub format: Option<Format>,
    pub dump_poly: bool,
}

impl From<GysinError> for CliError {
    fn from(e: GysinError) -> Self {
        match e {
            GysinError::Inconsistent(_) => CliError::Inconsistent(e.to_string()),
            GysinError::RankTooSmall(_) => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Gysin(g) => g.into(),
            ApproxError::InvalidWeights(_) | ApproxError::GrassmannIndex { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn context(r: usize) -> Result<RootContext, CliError> {
    Ok(RootContext::new(r)?)
}

fn flag_rat(name: &str, value: &str) -> Result<BigRational, CliError> {
    parse_rat(value).ok_or_else(|| CliError::Usage(format!("--{name}: '{value}' is not a rational p/q")))
}

/// Renders a flat report. `json` is used verbatim for the JSON format;
/// `flat` supplies the text lines and the single CSV row.
fn render(format: Format, json: Value, flat: Vec<(String, String)>) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("plain data serializes"),
        Format::Text => flat
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let keys: Vec<&str> = flat.iter().map(|(k, _)| k.as_str()).collect();
            let vals: Vec<&str> = flat.iter().map(|(_, v)| v.as_str()).collect();
            w.write_record(keys).and_then(|_| w.write_record(vals)).expect("in-memory csv");
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
        }
    }
}

fn caret(src: &str, pos: usize) -> String {
    let col = src[..pos.min(src.len())].chars().count();
    format!("{src}\n{}^", " ".repeat(col))
}

pub fn pushforward(s: &Settings, r: usize, src: &str, zero_c1: bool) -> Result<Output, CliError> {
    let ctx = context(r)?;
    let f = ctx
        .parse(src, Ring::Xi)
        .map_err(|e| CliError::Input(format!("{e}\n{}", caret(src, e.pos))))?;
    let tower = ctx.tower_pushforward_xi(&f)?;
    let dd = ctx.dd_pushforward_xi(&f)?;
    let agree = tower == dd;
    let shown = |c: &flagpush::SymmetricClass| {
        let mut c = c.clone();
        if zero_c1 {
            c.value = c.at_e1_zero();
        }
        c.to_text()
    };

    let fiber_only = f
        .terms()
        .all(|(m, _)| m[r - 1..].iter().all(|&e| e == 0));
    let mut formulas = Map::new();
    let mut flat = vec![
        ("r".to_string(), r.to_string()),
        ("seed".to_string(), s.seed.to_string()),
    ];
    let mut json = json!({
        "command": "pushforward",
        "r": r,
        "seed": s.seed,
        "zero_c1": zero_c1,
        "fiber_codrop": tower.fiber_codrop,
        "tower": shown(&tower),
        "divided_difference": shown(&dd),
        "oracles_agree": agree,
    });
    if s.dump_poly {
        let input = f.to_text(&ctx.var_names(Ring::Xi));
        let as_tower = ctx.xi_to_tower(&f)?.to_text(&ctx.var_names(Ring::Tower));
        let as_roots = ctx.xi_to_roots(&f)?.to_text(&ctx.var_names(Ring::Roots));
        flat.push(("input".into(), input.clone()));
        flat.push(("input_tower".into(), as_tower.clone()));
        flat.push(("input_roots".into(), as_roots.clone()));
        json["input"] = json!(input);
        json["input_tower"] = json!(as_tower);
        json["input_roots"] = json!(as_roots);
    }
    flat.push(("fiber_codrop".into(), tower.fiber_codrop.to_string()));
    flat.push(("tower".into(), shown(&tower)));
    flat.push(("divided_difference".into(), shown(&dd)));
    for v in FormulaVariant::ALL {
        let entry = if !fiber_only {
            json!({ "rejected": "the coefficient formula takes a polynomial in t1..t(r-1) only" })
        } else {
            let mapping: Vec<Option<usize>> = (0..2 * r).map(|i| (i < r - 1).then_some(i)).collect();
            let t = f.remap(r - 1, &mapping).map_err(GysinError::from)?;
            match coefficient_formula(&t, r, v) {
                Ok(out) => json!({ "value": fmt_rat(&out.value), "verdict": out.verdict }),
                Err(e @ GysinError::WrongDegree { .. }) => json!({ "rejected": e.to_string() }),
                Err(e) => return Err(e.into()),
            }
        };
        let text = entry
            .get("value")
            .or_else(|| entry.get("rejected"))
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string();
        flat.push((v.name().to_string(), text));
        formulas.insert(v.name().to_string(), entry);
    }
    json["formulas"] = Value::Object(formulas);
    flat.push(("oracles_agree".into(), agree.to_string()));
    Ok(Output {
        body: render(s.format.unwrap_or(Format::Json), json, flat),
        oracles_agree: agree,
    })
}

pub fn audit(s: &Settings, ranks: &str, samples: usize) -> Result<Output, CliError> {
    let ranks: Vec<usize> = parse_list(ranks)
        .map_err(|e| CliError::Usage(format!("--r: {e}")))?
        .into_iter()
        .map(|r| r as usize)
        .collect();
    if let Some(&r) = ranks.iter().find(|&&r| r < 2) {
        return Err(CliError::Usage(format!("--r: rank must be at least 2, got {r}")));
    }
    let report = approx::audit(&ranks, AuditOptions { seed: s.seed, samples })?;
    let body = match s.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv()?,
    };
    Ok(Output {
        body,
        oracles_agree: report.oracle_agreement,
    })
}

pub struct TableRequest<'a> {
    pub r: usize,
    pub weights: &'a str,
    pub m: &'a str,
    pub n: &'a str,
    pub certificate: bool,
    pub mu: &'a str,
    pub ah: &'a str,
    pub d: usize,
}

pub fn table(s: &Settings, req: &TableRequest<'_>) -> Result<Output, CliError> {
    if req.r < 2 {
        return Err(CliError::Usage(format!("--r: rank must be at least 2, got {}", req.r)));
    }
    let shape: WeightShape = req.weights.parse().map_err(|e: ApproxError| CliError::Usage(e.to_string()))?;
    let ms = parse_list(req.m).map_err(|e| CliError::Usage(format!("--m: {e}")))?;
    let ns = parse_list(req.n).map_err(|e| CliError::Usage(format!("--n: {e}")))?;
    if ms.contains(&0) || ns.contains(&0) {
        return Err(CliError::Usage("--m and --n must be positive".into()));
    }
    if req.certificate && ns.len() != 1 {
        return Err(CliError::Usage("--certificate needs a single --n".into()));
    }
    let rows = approx::table(req.r, &shape, &ms, &ns)?;
    if req.certificate {
        let mu = flag_rat("mu", req.mu)?;
        let ah = flag_rat("ah", req.ah)?;
        let cert = approx::certificate_from_rows(&rows, req.d, &mu, &ah)?;
        return Ok(Output {
            body: cert.to_json(),
            oracles_agree: true,
        });
    }
    let list = |v: &[BigRational]| v.iter().map(fmt_rat).collect::<Vec<_>>();
    let body = match s.format.unwrap_or(Format::Csv) {
        Format::Csv => approx::rows_to_csv(&rows)?,
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "m": row.weights.m_scale,
                        "n": row.weights.n,
                        "degree_coefficient": fmt_rat(&row.degree_coefficient),
                        "kappa": list(&row.kappa),
                        "ratio": list(&row.ratio),
                        "degenerate": row.degenerate(),
                    })
                })
                .collect();
            let json = json!({
                "command": "table",
                "seed": s.seed,
                "r": req.r,
                "weights": shape.weights(req.r)?,
                "rows": rows,
            });
            serde_json::to_string_pretty(&json).expect("plain data serializes")
        }
        Format::Text => {
            let mut out = format!("seed {} r {} weights {shape}\n", s.seed, req.r);
            for row in &rows {
                out.push_str(&format!(
                    "m={} n={} degree={} kappa=[{}] ratio=[{}]{}\n",
                    row.weights.m_scale,
                    row.weights.n,
                    fmt_rat(&row.degree_coefficient),
                    list(&row.kappa).join(", "),
                    list(&row.ratio).join(", "),
                    if row.degenerate() { " degenerate" } else { "" }
                ));
            }
            out
        }
    };
    Ok(Output {
        body,
        oracles_agree: true,
    })
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    }
}

pub fn certify(
    s: &Settings,
    path: Option<&str>,
    epsilon: Option<&str>,
    r: Option<usize>,
    frobenius: Option<(u64, u64)>,
) -> Result<Output, CliError> {
    if path.is_none() && r.is_none() {
        return Err(CliError::Usage("give a certificate file (or -) or --r for a gap check".into()));
    }
    let mut json = json!({ "command": "certify", "seed": s.seed });
    let mut flat = vec![("seed".to_string(), s.seed.to_string())];
    let mut rank = r;

    if let Some(path) = path {
        let mut cert = FiltrationCertificate::from_json(&read_source(path)?)?;
        if let Some(r) = r {
            if r != cert.r {
                return Err(CliError::Usage(format!("--r {r} differs from the certificate rank {}", cert.r)));
            }
        }
        rank = Some(cert.r);
        if let Some((p, n)) = frobenius {
            let n = u32::try_from(n).map_err(|_| CliError::Usage("--frobenius: exponent too large".into()))?;
            cert = certify::frobenius_scale(&cert, p, n)?;
            json["frobenius"] = json!({ "p": p, "n": n });
            flat.push(("frobenius".into(), format!("{p}^{n}")));
        }
        let report = certify::check_limit_hypothesis(&cert)?;
        let status = match report.status {
            LimitStatus::Holds => "HOLDS",
            LimitStatus::Fails => "FAILS",
        };
        let constant = report.constant.as_ref().map(fmt_rat);
        json["r"] = json!(cert.r);
        json["mu"] = json!(fmt_rat(&cert.mu));
        json["limit"] = json!({
            "status": status,
            "gaps": report.gaps.iter().map(fmt_rat).collect::<Vec<_>>(),
            "constant": constant,
            "violation": report.violation.as_ref().map(|(i, why)| json!({ "entry": i, "reason": why })),
        });
        flat.push(("r".into(), cert.r.to_string()));
        flat.push(("limit".into(), status.into()));
        flat.push(("constant".into(), constant.unwrap_or_default()));
        if let Some((i, why)) = &report.violation {
            flat.push(("violation".into(), format!("entry {i}: {why}")));
        }
    } else if frobenius.is_some() {
        return Err(CliError::Usage("--frobenius needs a certificate".into()));
    }

    if let Some(eps) = epsilon {
        let eps = flag_rat("epsilon", eps)?;
        let r = rank.expect("rank known from --r or the certificate");
        let v = certify::gap_check(&eps, r)?;
        json["gap"] = json!({
            "r": r,
            "epsilon": fmt_rat(&v.epsilon),
            "threshold": fmt_rat(&v.threshold),
            "accepted": v.accepted,
        });
        flat.push(("gap_threshold".into(), fmt_rat(&v.threshold)));
        flat.push(("gap_accepted".into(), v.accepted.to_string()));
    } else if path.is_none() {
        return Err(CliError::Usage("--r without a certificate needs --epsilon".into()));
    }
    Ok(Output {
        body: render(s.format.unwrap_or(Format::Json), json, flat),
        oracles_agree: true,
    })
}

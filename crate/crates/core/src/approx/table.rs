use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{approx_row, flag_dim, ApproxError, ApproxRow, WeightShape, WeightVector};
use crate::certify::{CertificateEntry, CertifyError, FiltrationCertificate};
use crate::gysin::RootContext;
use crate::polyring::fmt_rat;

/// Leading CSV columns; `kappa_i`, `ratio_i` and `degenerate` follow.
pub const CSV_HEADER_PREFIX: [&str; 5] = ["r", "weights", "m", "n", "degree_coefficient"];

/// Rows for every `m` in `ms` and `n` in `ns`, ordered by `(m, n)`.
pub fn table(r: usize, shape: &WeightShape, ms: &[u32], ns: &[u32]) -> Result<Vec<ApproxRow>, ApproxError> {
    let ctx = RootContext::new(r)?;
    let mut cells = Vec::new();
    for &m in ms {
        for &n in ns {
            cells.push(WeightVector::from_shape(r, shape, m, n)?);
        }
    }
    cells.sort();
    cells.dedup();
    cells.par_iter().map(|w| approx_row(&ctx, w)).collect()
}

/// Renders rows as CSV. All rows must share one rank.
pub fn rows_to_csv(rows: &[ApproxRow]) -> Result<String, ApproxError> {
    let r = rows.first().map(|row| row.weights.r).unwrap_or(0);
    let mut header: Vec<String> = CSV_HEADER_PREFIX.iter().map(|s| s.to_string()).collect();
    header.extend((1..=r).map(|i| format!("kappa_{i}")));
    header.extend((1..=r).map(|i| format!("ratio_{i}")));
    header.push("degenerate".into());

    let csv_err = |e: csv::Error| ApproxError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        if row.weights.r != r {
            return Err(ApproxError::InvalidWeights("rows of different ranks in one table".into()));
        }
        let mut rec = vec![
            r.to_string(),
            row.weights.label(),
            row.weights.m_scale.to_string(),
            row.weights.n.to_string(),
            fmt_rat(&row.degree_coefficient),
        ];
        rec.extend(row.kappa.iter().map(fmt_rat));
        if row.degenerate() {
            rec.extend(std::iter::repeat_n(String::new(), r));
        } else {
            rec.extend(row.ratio.iter().map(fmt_rat));
        }
        rec.push(row.degenerate().to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| ApproxError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Certificate built from rows with one weight shape and one `n`, ordered
/// by `m`: `deg_f = (n m)^C D` and
/// `qdeg_i = kappa_i n^C m^{C-1} ah + deg_f mu`, where `ah = c_1(A).H^{d-1}`.
pub fn certificate_from_rows(
    rows: &[ApproxRow],
    d: usize,
    mu: &BigRational,
    ah: &BigRational,
) -> Result<FiltrationCertificate, CertifyError> {
    let Some(first) = rows.first() else {
        return Err(CertifyError::Empty);
    };
    let r = first.weights.r;
    let c = flag_dim(r);
    let int = |x: u64, k: u32| BigRational::from_integer(BigInt::from(x).pow(k));
    let entries = rows
        .iter()
        .map(|row| {
            let (m, n) = (row.weights.m_scale as u64, row.weights.n as u64);
            let deg_f = int(n * m, c) * &row.degree_coefficient;
            let scale = int(n, c) * int(m, c - 1) * ah;
            let qdeg = row
                .kappa
                .iter()
                .map(|k| k * &scale + &deg_f * mu)
                .collect();
            CertificateEntry {
                m: row.weights.m_scale,
                deg_f,
                qdeg,
            }
        })
        .collect();
    FiltrationCertificate::new(r, d, mu.clone(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{check_limit_hypothesis, LimitStatus};
    use crate::polyring::{frac, rat};

    #[test]
    fn rank_two_table() {
        let rows = table(2, &WeightShape::Ones, &[1, 2, 3], &[1]).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert_eq!(row.kappa, vec![rat(-1), rat(1)]);
            let m = row.weights.m_scale as i64;
            assert_eq!(row.ratio, vec![frac(-1, m), frac(1, m)]);
        }
        let csv = rows_to_csv(&rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r,weights,m,n,degree_coefficient,kappa_1,kappa_2,ratio_1,ratio_2,degenerate"
        );
        assert_eq!(lines.next().unwrap(), "2,1,1,1,1,-1,1,-1,1,false");
        assert_eq!(lines.nth(1).unwrap(), "2,1,3,1,1,-1,1,-1/3,1/3,false");
    }

    #[test]
    fn literal_table_is_flagged() {
        let rows = table(3, &WeightShape::Literal, &[1, 2], &[1]).unwrap();
        let csv = rows_to_csv(&rows).unwrap();
        let row = csv.lines().nth(1).unwrap();
        assert!(row.starts_with("3,\"1,0\",1,1,0,"), "{row}");
        assert!(row.ends_with(",,,,true"), "{row}");
    }

    #[test]
    fn generated_certificates_hold() {
        let ms: Vec<u32> = (1..=8).collect();
        let rows = table(3, &WeightShape::Ones, &ms, &[2]).unwrap();
        let cert = certificate_from_rows(&rows, 2, &frac(1, 3), &rat(1)).unwrap();
        let report = check_limit_hypothesis(&cert).unwrap();
        assert_eq!(report.status, LimitStatus::Holds);
    }
}

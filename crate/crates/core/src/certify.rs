//! Numeric checks on filtration certificates.
//!
//! A certificate records, for a sequence of covers `f_m`, the degree of
//! `f_m` and the `H`-degrees of the line-bundle quotients of a full
//! filtration of the pulled-back bundle. All data are exact rationals
//! written as `p/q` strings.

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{fmt_rat, parse_rat, rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("field {field}: '{value}' is not a rational p/q")]
    Rational { field: String, value: String },
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("certificate has no entries")]
    Empty,
    #[error("entry {index}: deg_f must be positive, got {value}")]
    NonPositiveDegree { index: usize, value: String },
    #[error("entry {index}: expected {expected} quotient degrees, got {found}")]
    QdegLength { index: usize, expected: usize, found: usize },
    #[error("entry {index}: quotient degrees sum to {found}, expected deg_f * r * mu = {expected}")]
    SumMismatch { index: usize, expected: String, found: String },
    #[error("entry {index}: index m = {m} must be positive and increasing")]
    EntryIndex { index: usize, m: u32 },
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("s = {s} must satisfy 1 <= s <= r = {r}")]
    QuotientIndex { s: usize, r: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    /// Index of the cover in the sequence.
    pub m: u32,
    pub deg_f: BigRational,
    pub qdeg: Vec<BigRational>,
}

/// Slope data for a sequence of covers of a `d`-dimensional base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationCertificate {
    pub r: usize,
    pub d: usize,
    pub mu: BigRational,
    pub entries: Vec<CertificateEntry>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    deg_f: String,
    qdeg: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    r: usize,
    d: usize,
    mu: String,
    entries: Vec<EntryJson>,
}

fn read_rat(field: String, value: &str) -> Result<BigRational, CertifyError> {
    parse_rat(value).ok_or_else(|| CertifyError::Rational {
        field,
        value: value.to_string(),
    })
}

impl FiltrationCertificate {
    /// Builds a certificate and checks the ingestion invariants.
    pub fn new(
        r: usize,
        d: usize,
        mu: BigRational,
        entries: Vec<CertificateEntry>,
    ) -> Result<Self, CertifyError> {
        let cert = Self::new_unchecked(r, d, mu, entries);
        cert.validate()?;
        Ok(cert)
    }

    /// Skips validation; for probing the checks with inconsistent data.
    pub fn new_unchecked(r: usize, d: usize, mu: BigRational, entries: Vec<CertificateEntry>) -> Self {
        FiltrationCertificate { r, d, mu, entries }
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        if self.r < 2 {
            return Err(CertifyError::RankTooSmall(self.r));
        }
        if self.entries.is_empty() {
            return Err(CertifyError::Empty);
        }
        let r_mu = rat(self.r as i64) * &self.mu;
        let mut last_m = 0;
        for (index, e) in self.entries.iter().enumerate() {
            if e.m == 0 || e.m <= last_m {
                return Err(CertifyError::EntryIndex { index, m: e.m });
            }
            last_m = e.m;
            if !e.deg_f.is_positive() {
                return Err(CertifyError::NonPositiveDegree {
                    index,
                    value: fmt_rat(&e.deg_f),
                });
            }
            if e.qdeg.len() != self.r {
                return Err(CertifyError::QdegLength {
                    index,
                    expected: self.r,
                    found: e.qdeg.len(),
                });
            }
            let sum = e.qdeg.iter().fold(BigRational::zero(), |acc, q| acc + q);
            let expected = &e.deg_f * &r_mu;
            if sum != expected {
                return Err(CertifyError::SumMismatch {
                    index,
                    expected: fmt_rat(&expected),
                    found: fmt_rat(&sum),
                });
            }
        }
        Ok(())
    }

    /// Parses and validates the JSON form. Entries without an explicit `m`
    /// are numbered `1, 2, ...` by position.
    pub fn from_json(src: &str) -> Result<Self, CertifyError> {
        let raw: CertificateJson =
            serde_json::from_str(src).map_err(|e| CertifyError::Json(e.to_string()))?;
        let mu = read_rat("mu".into(), &raw.mu)?;
        let entries = raw
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let deg_f = read_rat(format!("entries[{i}].deg_f"), &e.deg_f)?;
                let qdeg = e
                    .qdeg
                    .iter()
                    .enumerate()
                    .map(|(j, q)| read_rat(format!("entries[{i}].qdeg[{j}]"), q))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CertificateEntry {
                    m: e.m.unwrap_or(i as u32 + 1),
                    deg_f,
                    qdeg,
                })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        Self::new(raw.r, raw.d, mu, entries)
    }

    pub fn to_json(&self) -> String {
        let raw = CertificateJson {
            r: self.r,
            d: self.d,
            mu: fmt_rat(&self.mu),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    deg_f: fmt_rat(&e.deg_f),
                    qdeg: e.qdeg.iter().map(fmt_rat).collect(),
                    m: Some(e.m),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LimitStatus {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    /// `g_m = max_i qdeg_i / deg_f - mu` per entry.
    pub gaps: Vec<BigRational>,
    /// The exhibited constant of the `C/m` bound, when one was fitted.
    pub constant: Option<BigRational>,
    pub status: LimitStatus,
    /// First violating entry and the reason.
    pub violation: Option<(usize, String)>,
}

/// Checks that the maximal quotient slope tends to `mu` along the
/// sequence, in the finite form `0 <= g_m <= C/m`.
///
/// `C` is fitted as the largest `m g_m` over the first half of the
/// entries; the remaining entries must stay below `C/m` and must not
/// increase.
pub fn check_limit_hypothesis(cert: &FiltrationCertificate) -> Result<LimitReport, CertifyError> {
    if cert.entries.is_empty() {
        return Err(CertifyError::Empty);
    }
    let mut gaps = Vec::with_capacity(cert.entries.len());
    for (index, e) in cert.entries.iter().enumerate() {
        if !e.deg_f.is_positive() {
            return Err(CertifyError::NonPositiveDegree {
                index,
                value: fmt_rat(&e.deg_f),
            });
        }
        let max = e
            .qdeg
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        gaps.push(max / &e.deg_f - &cert.mu);
    }
    let fail = |gaps: Vec<BigRational>, constant, index, why: String| LimitReport {
        gaps,
        constant,
        status: LimitStatus::Fails,
        violation: Some((index, why)),
    };
    if let Some(index) = gaps.iter().position(|g| g.is_negative()) {
        return Ok(fail(gaps, None, index, "maximal slope below mu".into()));
    }
    if gaps.len() < 2 {
        return Ok(fail(gaps, None, 0, "at least two entries are needed to fit a bound".into()));
    }
    let scaled: Vec<BigRational> = gaps
        .iter()
        .zip(&cert.entries)
        .map(|(g, e)| g * rat(e.m as i64))
        .collect();
    let half = gaps.len().div_ceil(2);
    let constant = scaled[..half].iter().max().cloned().expect("nonempty");
    for k in half..gaps.len() {
        if scaled[k] > constant {
            let why = format!("m g_m = {} exceeds C = {}", fmt_rat(&scaled[k]), fmt_rat(&constant));
            return Ok(fail(gaps, Some(constant), k, why));
        }
        if gaps[k] > gaps[k - 1] {
            return Ok(fail(gaps, Some(constant), k, "gap increased".into()));
        }
    }
    Ok(LimitReport {
        gaps,
        constant: Some(constant),
        status: LimitStatus::Holds,
        violation: None,
    })
}

/// `1 / (r (r - 1))`.
pub fn gap_threshold(r: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(r * (r - 1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapVerdict {
    pub epsilon: BigRational,
    pub threshold: BigRational,
    pub accepted: bool,
}

pub fn gap_check(epsilon: &BigRational, r: usize) -> Result<GapVerdict, CertifyError> {
    if r < 2 {
        return Err(CertifyError::RankTooSmall(r));
    }
    if !epsilon.is_positive() {
        return Err(CertifyError::NonPositiveEpsilon(fmt_rat(epsilon)));
    }
    let threshold = gap_threshold(r);
    Ok(GapVerdict {
        epsilon: epsilon.clone(),
        accepted: *epsilon < threshold,
        threshold,
    })
}

/// A class `c1a * c_1(A) + c1e * c_1(E)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalClass {
    pub c1a: BigRational,
    pub c1e: BigRational,
}

impl FormalClass {
    pub fn is_zero(&self) -> bool {
        self.c1a.is_zero() && self.c1e.is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "c1A": fmt_rat(&self.c1a), "c1E": fmt_rat(&self.c1e) })
    }
}

impl Add for &FormalClass {
    type Output = FormalClass;

    fn add(self, other: &FormalClass) -> FormalClass {
        FormalClass {
            c1a: &self.c1a + &other.c1a,
            c1e: &self.c1e + &other.c1e,
        }
    }
}

/// Twist of a rank-`s` quotient after composing with a cover:
/// `a c_1(A) + (s/r) c_1(E)`.
pub fn compose_cover(a: &BigRational, s: usize, r: usize) -> Result<FormalClass, CertifyError> {
    if s == 0 || s > r {
        return Err(CertifyError::QuotientIndex { s, r });
    }
    Ok(FormalClass {
        c1a: a.clone(),
        c1e: BigRational::new(BigInt::from(s), BigInt::from(r)),
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Certificate for the `n`-th Frobenius pull-back: `mu` and every quotient
/// degree multiplied by `p^n`.
pub fn frobenius_scale(cert: &FiltrationCertificate, p: u64, n: u32) -> Result<FiltrationCertificate, CertifyError> {
    if !is_prime(p) {
        return Err(CertifyError::NotPrime(p));
    }
    let factor = BigRational::from_integer(BigInt::from(p).pow(n));
    let entries = cert
        .entries
        .iter()
        .map(|e| CertificateEntry {
            m: e.m,
            deg_f: e.deg_f.clone(),
            qdeg: e.qdeg.iter().map(|q| q * &factor).collect(),
        })
        .collect();
    FiltrationCertificate::new(cert.r, cert.d, &cert.mu * &factor, entries)
}

/// Invariants of `E = L + L^{-1}` on a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    /// `c_1(E)` as a multiple of `L`.
    pub c1: BigRational,
    pub c2: BigRational,
    /// `2 r c_2 - (r - 1) c_1^2`.
    pub delta: BigRational,
    pub numerically_flat: bool,
    /// Hypotheses of the example that the input violates.
    pub violations: Vec<String>,
}

pub fn example_surface_invariants(l_sq: &BigRational, l_dot_h: &BigRational) -> SurfaceInvariants {
    let r = 2;
    let c1 = BigRational::zero();
    // c(L + L^{-1}) = (1 + L)(1 - L) = 1 - L^2.
    let c2 = -l_sq;
    let delta = rat(2 * r) * &c2 - rat(r - 1) * &c1 * &c1 * l_sq;
    let mut violations = Vec::new();
    if l_sq.is_zero() {
        violations.push("L^2 must be nonzero".to_string());
    }
    if !l_dot_h.is_zero() {
        violations.push(format!("L.H must be zero, got {}", fmt_rat(l_dot_h)));
    }
    SurfaceInvariants {
        c1,
        numerically_flat: c2.is_zero(),
        c2,
        delta,
        violations,
    }
}

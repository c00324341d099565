//! Degree constants, per-quotient slope coefficients and the formula audit.
//!
//! The covers `f_m: X_m -> X` are modelled by the line bundle
//! `L = n * (sum_s m_s tau_s + (r-1) a)` on the flag bundle; every quantity
//! here is a push-forward of a power of `L` times a tautological class,
//! evaluated with `e_1 = 0`.

mod audit;
mod sample;
mod table;

pub use audit::{audit, AuditOptions, AuditRecord, AuditReport, Verdict};
pub use sample::{random_t_input, random_xi_input};
pub use table::{certificate_from_rows, rows_to_csv, table, CSV_HEADER_PREFIX};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::gysin::{coefficient_formula, power_of_sum, FormulaVariant, GysinError, Ring, RootContext};
use crate::polyring::{binom, rat, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Gysin(#[from] GysinError),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("alpha is zero: the weighted degree vanishes and a_m is undefined")]
    DegenerateAlpha,
    #[error("grassmannian index s = {s} must satisfy 1 <= s < {r}")]
    GrassmannIndex { s: usize, r: usize },
    #[error("csv output failed: {0}")]
    Csv(String),
}

/// Weights `m_1..m_{r-1}` of the tautological quotients, the
/// very-ampleness multiple `n` and the sequence index `m_scale`.
///
/// The cover for index `m` uses the weights `m_scale * m_weights`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightVector {
    pub r: usize,
    pub m_weights: Vec<u32>,
    pub n: u32,
    pub m_scale: u32,
}

impl WeightVector {
    pub fn new(r: usize, m_weights: Vec<u32>, n: u32, m_scale: u32) -> Result<Self, ApproxError> {
        if r < 2 {
            return Err(GysinError::RankTooSmall(r).into());
        }
        if m_weights.len() != r - 1 {
            return Err(ApproxError::InvalidWeights(format!(
                "expected {} weights, got {}",
                r - 1,
                m_weights.len()
            )));
        }
        if m_weights.iter().all(|&w| w == 0) {
            return Err(ApproxError::InvalidWeights("all weights are zero".into()));
        }
        if n == 0 || m_scale == 0 {
            return Err(ApproxError::InvalidWeights("n and m must be positive".into()));
        }
        Ok(WeightVector {
            r,
            m_weights,
            n,
            m_scale,
        })
    }

    pub fn from_shape(r: usize, shape: &WeightShape, m_scale: u32, n: u32) -> Result<Self, ApproxError> {
        Self::new(r, shape.weights(r)?, n, m_scale)
    }

    /// Comma-separated shape, e.g. `1,0,0`.
    pub fn label(&self) -> String {
        join_weights(&self.m_weights)
    }
}

fn join_weights(w: &[u32]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// A weight pattern independent of the rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeightShape {
    /// `(1, ..., 1)`.
    Ones,
    /// `(1, 0, ..., 0)`: only the first quotient is weighted.
    Literal,
    Custom(Vec<u32>),
}

impl WeightShape {
    pub fn weights(&self, r: usize) -> Result<Vec<u32>, ApproxError> {
        if r < 2 {
            return Err(GysinError::RankTooSmall(r).into());
        }
        Ok(match self {
            WeightShape::Ones => vec![1; r - 1],
            WeightShape::Literal => {
                let mut w = vec![0; r - 1];
                w[0] = 1;
                w
            }
            WeightShape::Custom(w) => w.clone(),
        })
    }
}

impl FromStr for WeightShape {
    type Err = ApproxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "ones" => Ok(WeightShape::Ones),
            "literal" => Ok(WeightShape::Literal),
            other => other
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map(WeightShape::Custom)
                .map_err(|_| {
                    ApproxError::InvalidWeights(format!(
                        "'{other}' is not 'ones', 'literal' or a comma-separated list"
                    ))
                }),
        }
    }
}

impl fmt::Display for WeightShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightShape::Ones => f.write_str("ones"),
            WeightShape::Literal => f.write_str("literal"),
            WeightShape::Custom(w) => f.write_str(&join_weights(w)),
        }
    }
}

/// `alpha` and `beta_s` from each closed formula and from both oracles.
///
/// `alpha` is the push-forward of `(xi_1 + ... + xi_{r-1})^C` and `beta_s`
/// that of `(xi_1 + ... + xi_{r-1})^{C-1} xi_s`, `C = binom(r, 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantsRecord {
    pub r: usize,
    pub alpha_by_variant: BTreeMap<FormulaVariant, BigRational>,
    pub beta_by_variant: BTreeMap<FormulaVariant, Vec<BigRational>>,
    /// Tower route.
    pub alpha_oracle: BigRational,
    pub beta_oracle: Vec<BigRational>,
    /// Divided-difference route.
    pub alpha_dd: BigRational,
    pub beta_dd: Vec<BigRational>,
}

impl ConstantsRecord {
    pub fn oracles_agree(&self) -> bool {
        self.alpha_oracle == self.alpha_dd && self.beta_oracle == self.beta_dd
    }
}

pub(crate) fn flag_dim(r: usize) -> u32 {
    binom(r as u64, 2) as u32
}

fn constant_of(value: MultiPoly, what: &str) -> Result<BigRational, ApproxError> {
    value.as_constant().ok_or_else(|| {
        GysinError::Inconsistent(format!("{what}: expected a constant, got a class of positive degree"))
            .into()
    })
}

/// Push-forward of `f(xi)` (a polynomial in `t_1..t_{r-1}`) by both
/// oracles, with `e_1 = 0`. Returns `(tower, divided differences)`.
pub fn oracle_values(ctx: &RootContext, f: &MultiPoly) -> Result<(MultiPoly, MultiPoly), ApproxError> {
    let xi = ctx.t_to_xi(f)?;
    let tower = ctx.tower_pushforward_xi(&xi)?.at_e1_zero();
    let dd = ctx.dd_pushforward_xi(&xi)?.at_e1_zero();
    Ok((tower, dd))
}

pub fn constants(ctx: &RootContext) -> Result<ConstantsRecord, ApproxError> {
    let r = ctx.rank();
    let c = flag_dim(r);
    let alpha_f = power_of_sum(r, c);
    let head = power_of_sum(r, c - 1);
    let beta_f: Vec<MultiPoly> = (0..r - 1).map(|s| &head * &MultiPoly::var(r - 1, s)).collect();

    let mut alpha_by_variant = BTreeMap::new();
    let mut beta_by_variant = BTreeMap::new();
    for v in FormulaVariant::ALL {
        alpha_by_variant.insert(v, coefficient_formula(&alpha_f, r, v)?.value);
        let betas = beta_f
            .iter()
            .map(|f| coefficient_formula(f, r, v).map(|o| o.value))
            .collect::<Result<Vec<_>, _>>()?;
        beta_by_variant.insert(v, betas);
    }

    let (at, ad) = oracle_values(ctx, &alpha_f)?;
    let mut beta_oracle = Vec::new();
    let mut beta_dd = Vec::new();
    for f in &beta_f {
        let (bt, bd) = oracle_values(ctx, f)?;
        beta_oracle.push(constant_of(bt, "beta")?);
        beta_dd.push(constant_of(bd, "beta")?);
    }
    Ok(ConstantsRecord {
        r,
        alpha_by_variant,
        beta_by_variant,
        alpha_oracle: constant_of(at, "alpha")?,
        beta_oracle,
        alpha_dd: constant_of(ad, "alpha")?,
        beta_dd,
    })
}

/// `sum_s w_s tau_s` in the tower ring.
fn weighted_tau(ctx: &RootContext, weights: &[BigRational]) -> MultiPoly {
    weights
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(ctx.num_vars(Ring::Tower)), |acc, (s, w)| {
            &acc + &ctx.tau(s + 1).scale(w)
        })
}

fn as_rationals(w: &[u32]) -> Vec<BigRational> {
    w.iter().map(|&x| rat(x as i64)).collect()
}

fn check_weights(ctx: &RootContext, w: &[u32]) -> Result<(), ApproxError> {
    if w.len() != ctx.rank() - 1 {
        return Err(ApproxError::InvalidWeights(format!(
            "expected {} weights, got {}",
            ctx.rank() - 1,
            w.len()
        )));
    }
    Ok(())
}

/// Push-forward of `(sum_s m_s tau_s)^C` with `e_1 = 0`: the coefficient
/// `D` in `deg f_m = (n m)^C D`.
pub fn weighted_degree_with(ctx: &RootContext, m_weights: &[u32]) -> Result<BigRational, ApproxError> {
    check_weights(ctx, m_weights)?;
    let l = weighted_tau(ctx, &as_rationals(m_weights));
    let out = ctx.tower_pushforward(&l.pow(flag_dim(ctx.rank())))?;
    constant_of(out.at_e1_zero(), "weighted degree")
}

pub fn weighted_degree(w: &WeightVector) -> Result<BigRational, ApproxError> {
    weighted_degree_with(&RootContext::new(w.r)?, &w.m_weights)
}

/// `kappa_i = (r-1) C * pi_*((sum_s m_s tau_s)^{C-1} y_i)` with `e_1 = 0`,
/// for `i = 1..r`. The `a`-coefficient of `(f_m)_* c_1(S_i/S_{i-1})` is
/// `kappa_i n^C m^{C-1}`.
pub fn quotient_coefficients_with(
    ctx: &RootContext,
    m_weights: &[u32],
) -> Result<Vec<BigRational>, ApproxError> {
    check_weights(ctx, m_weights)?;
    let r = ctx.rank();
    let c = flag_dim(r);
    let head = weighted_tau(ctx, &as_rationals(m_weights)).pow(c - 1);
    let factor = rat(((r - 1) as u32 * c) as i64);
    (1..=r)
        .map(|i| {
            let yi = ctx.roots_to_tower(&ctx.y(i))?;
            let out = ctx.tower_pushforward(&(&head * &yi))?;
            Ok(constant_of(out.at_e1_zero(), "quotient coefficient")? * &factor)
        })
        .collect()
}

pub fn quotient_coefficients(w: &WeightVector) -> Result<Vec<BigRational>, ApproxError> {
    quotient_coefficients_with(&RootContext::new(w.r)?, &w.m_weights)
}

/// One `(r, weights, m, n)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRow {
    pub weights: WeightVector,
    pub degree_coefficient: BigRational,
    pub kappa: Vec<BigRational>,
    /// `a`-coefficient of `(f_m)_* c_1(S_i/S_{i-1})` divided by `deg f_m`;
    /// empty when the degree vanishes.
    pub ratio: Vec<BigRational>,
}

impl ApproxRow {
    pub fn degenerate(&self) -> bool {
        self.degree_coefficient.is_zero()
    }
}

/// Computes a row. The ratios come from the full line bundle
/// `n (m_scale sum m_s tau_s + (r-1) a)`, not from `kappa`, so the
/// relation `ratio_i = kappa_i / (m D)` is a check rather than a definition.
pub fn approx_row(ctx: &RootContext, w: &WeightVector) -> Result<ApproxRow, ApproxError> {
    if w.r != ctx.rank() {
        return Err(ApproxError::InvalidWeights(format!(
            "weights are for rank {}, context has rank {}",
            w.r,
            ctx.rank()
        )));
    }
    let r = w.r;
    let c = flag_dim(r);
    let degree_coefficient = weighted_degree_with(ctx, &w.m_weights)?;
    let kappa = quotient_coefficients_with(ctx, &w.m_weights)?;

    let scaled: Vec<BigRational> = w
        .m_weights
        .iter()
        .map(|&x| rat(x as i64 * w.m_scale as i64))
        .collect();
    let a_idx = ctx.a_index(Ring::Tower);
    let l = (&weighted_tau(ctx, &scaled) + &ctx.a(Ring::Tower).scale(&rat(r as i64 - 1)))
        .scale(&rat(w.n as i64));
    let lc = l.pow(c).truncate_var(a_idx, 1);
    let deg = constant_of(ctx.tower_pushforward(&lc)?.at_e1_zero(), "cover degree")?;

    let mut ratio = Vec::new();
    if !deg.is_zero() {
        for i in 1..=r {
            let yi = ctx.roots_to_tower(&ctx.y(i))?;
            let out = ctx.tower_pushforward(&(&lc * &yi).truncate_var(a_idx, 1))?;
            let at_zero = out.at_e1_zero();
            let a_coeff = a_coefficient(ctx, &at_zero)?;
            ratio.push(a_coeff / &deg);
        }
    }
    Ok(ApproxRow {
        weights: w.clone(),
        degree_coefficient,
        kappa,
        ratio,
    })
}

/// Rational `lambda` with `p = lambda * a` in the base ring.
fn a_coefficient(ctx: &RootContext, p: &MultiPoly) -> Result<BigRational, ApproxError> {
    let mut exps = vec![0; ctx.num_vars(Ring::Base)];
    let a = ctx.a_index(Ring::Base);
    exps[a] = 1;
    let lambda = p.coefficient_of(&exps).map_err(GysinError::from)?;
    let rest = p - &MultiPoly::monomial(lambda.clone(), exps);
    if !rest.is_zero() {
        return Err(GysinError::Inconsistent(format!(
            "expected a multiple of a, got a class with {} other terms",
            rest.len()
        ))
        .into());
    }
    Ok(lambda)
}

/// `a_m = (r-1) C beta / (m alpha)`.
pub fn am_value(r: usize, alpha: &BigRational, beta: &BigRational, m_scale: u32) -> Result<BigRational, ApproxError> {
    if alpha.is_zero() {
        return Err(ApproxError::DegenerateAlpha);
    }
    let c = flag_dim(r);
    Ok(rat(((r - 1) as u32 * c) as i64) * beta / (rat(m_scale as i64) * alpha))
}

/// `deg f_m = (n m)^C alpha`.
pub fn deg_fm_value(r: usize, alpha: &BigRational, m_scale: u32, n: u32) -> BigRational {
    let base = BigInt::from(n as u64 * m_scale as u64);
    BigRational::from_integer(base.pow(flag_dim(r))) * alpha
}

/// The `a`-coefficient of `(f_m)_* c_1(Q) / deg f_m` on the Grassmann
/// bundle `Gr(s, E)`, where `f_m` is cut out by `n (m xi + a)` and
/// `e_1 = 0`.
pub fn grassmann_ratio_with(ctx: &RootContext, s: usize, m_scale: u32, n: u32) -> Result<BigRational, ApproxError> {
    let r = ctx.rank();
    if s == 0 || s >= r {
        return Err(ApproxError::GrassmannIndex { s, r });
    }
    let d = ctx.gr_dim(s);
    let xi = ctx.gr_plucker(s);
    let a_idx = ctx.a_index(Ring::Roots);
    let l = (&xi.scale(&rat(m_scale as i64)) + &ctx.a(Ring::Roots)).scale(&rat(n as i64));
    let ld = l.pow(d).truncate_var(a_idx, 1);
    let deg = constant_of(ctx.gr_pushforward(&ld, s)?.at_e1_zero(), "grassmannian degree")?;
    if deg.is_zero() {
        return Err(ApproxError::DegenerateAlpha);
    }
    let num = ctx.gr_pushforward(&(&ld * &xi).truncate_var(a_idx, 1), s)?;
    Ok(a_coefficient(ctx, &num.at_e1_zero())? / deg)
}

pub fn grassmann_ratio(r: usize, s: usize, m_scale: u32, n: u32) -> Result<BigRational, ApproxError> {
    grassmann_ratio_with(&RootContext::new(r)?, s, m_scale, n)
}

/// `sum_i kappa_i`.
pub fn kappa_sum(kappa: &[BigRational]) -> BigRational {
    kappa.iter().fold(BigRational::zero(), |acc, k| acc + k)
}

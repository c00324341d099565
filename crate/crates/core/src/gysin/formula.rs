use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::GysinError;
use crate::polyring::{binom, Homogeneity, MultiPoly};

/// Closed coefficient-extraction formulas for the flag push-forward of a
/// polynomial `f(t_1, ..., t_{r-1})` evaluated at `t_i = xi_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    /// `[prod t_i^{r-1}] (f * prod_{i<j} (t_i - t_j))`.
    PrintedMinus,
    /// `[prod t_i^{r-1}] (f * prod_{i<j} (t_i + t_j))`.
    Plus,
    /// `[t_1^{r-1} t_2^{r-2} ... t_{r-1}] f`.
    StaircaseMonomial,
}

impl FormulaVariant {
    pub const ALL: [FormulaVariant; 3] = [
        FormulaVariant::PrintedMinus,
        FormulaVariant::Plus,
        FormulaVariant::StaircaseMonomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaVariant::PrintedMinus => "printed-minus",
            FormulaVariant::Plus => "plus",
            FormulaVariant::StaircaseMonomial => "staircase-monomial",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVerdict {
    /// Degree `C(r,2)`: the value is a multiple of the fundamental class.
    FundamentalClassMultiple,
    /// Degree `C(r,2)+1`: the push-forward is asserted to be a multiple of
    /// `c_1(E)`, hence zero once `c_1(E) = 0`.
    MultipleOfC1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaOutcome {
    pub variant: FormulaVariant,
    pub degree: u32,
    pub value: BigRational,
    pub verdict: FormulaVerdict,
}

/// Evaluates `variant` on a homogeneous `f` in `r - 1` variables of degree
/// `C(r,2)` or `C(r,2)+1`.
pub fn coefficient_formula(
    f: &MultiPoly,
    r: usize,
    variant: FormulaVariant,
) -> Result<FormulaOutcome, GysinError> {
    if r < 2 {
        return Err(GysinError::RankTooSmall(r));
    }
    let n = r - 1;
    if f.num_vars() != n {
        return Err(GysinError::WrongRing {
            ring: super::Ring::Xi,
            expected: n,
            found: f.num_vars(),
        });
    }
    let dim = binom(r as u64, 2) as u32;
    let degree = match f.homogeneous_degree() {
        Homogeneity::Degree(d) if d == dim || d == dim + 1 => d,
        // The zero polynomial is homogeneous of every degree.
        Homogeneity::Zero => dim,
        Homogeneity::Degree(d) => {
            return Err(GysinError::WrongDegree {
                expected: dim,
                found: d.to_string(),
            })
        }
        Homogeneity::Inhomogeneous => {
            return Err(GysinError::WrongDegree {
                expected: dim,
                found: "inhomogeneous".into(),
            })
        }
    };
    let t = |i: usize| MultiPoly::var(n, i);
    let value = match variant {
        FormulaVariant::PrintedMinus | FormulaVariant::Plus => {
            let mut factor = MultiPoly::one(n);
            for i in 0..n {
                for j in i + 1..n {
                    let pair = if variant == FormulaVariant::PrintedMinus {
                        &t(i) - &t(j)
                    } else {
                        &t(i) + &t(j)
                    };
                    factor = &factor * &pair;
                }
            }
            (f * &factor).coefficient_of(&vec![(r - 1) as u32; n])?
        }
        FormulaVariant::StaircaseMonomial => {
            let exps: Vec<u32> = (1..r).map(|i| (r - i) as u32).collect();
            f.coefficient_of(&exps)?
        }
    };
    let verdict = if degree == dim {
        FormulaVerdict::FundamentalClassMultiple
    } else {
        FormulaVerdict::MultipleOfC1
    };
    Ok(FormulaOutcome {
        variant,
        degree,
        value,
        verdict,
    })
}

/// `(t_1 + ... + t_{r-1})^k`, the integrand shape behind the alpha and
/// beta constants.
pub(crate) fn power_of_sum(r: usize, k: u32) -> MultiPoly {
    let n = r - 1;
    (0..n)
        .fold(MultiPoly::zero(n), |acc, i| &acc + &MultiPoly::var(n, i))
        .pow(k)
}

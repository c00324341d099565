//! Push-forward along `Flag(E) -> X` and `Gr(s, E) -> X`.
//!
//! Three independent routes compute the same Gysin map:
//!
//! * [`RootContext::tower_pushforward`] iterates projective-bundle steps
//!   using Segre classes; it fixes the sign conventions.
//! * [`RootContext::dd_pushforward`] applies divided differences along a
//!   reduced word of the longest permutation, then rewrites the symmetric
//!   result in elementary symmetric functions.
//! * [`coefficient_formula`] evaluates closed coefficient-extraction
//!   formulas, which are audited against the two routes above.
//!
//! All classes live in small fixed rings described by [`Ring`].

mod context;
mod divided;
mod formula;
mod grassmann;
mod perm;
mod tower;

pub use context::{Ring, RootContext};
pub use divided::divided_difference;
pub use formula::{coefficient_formula, FormulaOutcome, FormulaVariant, FormulaVerdict};
pub(crate) use formula::power_of_sum;
pub use perm::{Permutation, ReducedWord};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::polyring::{MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GysinError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("polynomial has {found} variables, the {ring:?} ring for this rank has {expected}")]
    WrongRing { ring: Ring, expected: usize, found: usize },
    #[error("degree in the base symbol a is {0}; only degree <= 1 is tracked")]
    ADegreeTooHigh(u32),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("not symmetric: changed by the transposition of y{0} and y{next}", next = .0 + 1)]
    NotSymmetric(usize),
    #[error("not block-symmetric for s = {s}: changed by the transposition of y{transposition} and y{next}", next = .transposition + 1)]
    NotBlockSymmetric { s: usize, transposition: usize },
    #[error("coefficient formula needs degree {expected} or {}, got {found}", .expected + 1)]
    WrongDegree { expected: u32, found: String },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// A push-forward result: a polynomial in `e_1..e_r` and `a` (the
/// [`Ring::Base`] ring), with at most linear dependence on `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricClass {
    pub value: MultiPoly,
    /// Cohomological degree of the input minus the relative dimension,
    /// i.e. the degree of the output class. For inputs that are not
    /// weighted-homogeneous this is taken from the top-degree part.
    pub fiber_codrop: i64,
}

impl SymmetricClass {
    pub fn rank(&self) -> usize {
        self.value.num_vars() - 1
    }

    fn a_index(&self) -> usize {
        self.value.num_vars() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// The value if it is a constant multiple of the fundamental class.
    pub fn constant(&self) -> Option<BigRational> {
        self.value.as_constant()
    }

    /// Value with `e_1 = 0` imposed.
    pub fn at_e1_zero(&self) -> MultiPoly {
        self.value.kill_var(0)
    }

    /// The part of the value not involving `a`.
    pub fn a_free_part(&self) -> MultiPoly {
        self.value.kill_var(self.a_index())
    }

    /// The coefficient of `a` (itself a polynomial in the `e_i`).
    pub fn a_part(&self) -> MultiPoly {
        let a = self.a_index();
        let n = self.value.num_vars();
        let terms = self
            .value
            .terms()
            .filter(|(m, _)| m[a] == 1)
            .map(|(m, c)| {
                let mut m = m.to_vec();
                m[a] = 0;
                (m, c.clone())
            });
        MultiPoly::from_terms(n, terms).expect("same ring")
    }

    /// If the value is `lambda * e_1` for a rational `lambda`, returns it.
    pub fn multiple_of_e1(&self) -> Option<BigRational> {
        let n = self.value.num_vars();
        if self.value.is_zero() {
            return Some(BigRational::zero());
        }
        let mut e1 = vec![0; n];
        e1[0] = 1;
        let lambda = self.value.coefficient_of(&e1).ok()?;
        (self.value.len() == 1 && !lambda.is_zero()).then_some(lambda)
    }

    pub fn a_degree(&self) -> u32 {
        self.value.degree_in(self.a_index())
    }

    pub fn to_text(&self) -> String {
        let r = self.rank();
        let mut names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
        names.push("a".into());
        self.value.to_text(&names)
    }
}

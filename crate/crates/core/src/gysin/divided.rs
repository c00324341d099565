use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;

use super::perm::{Permutation, ReducedWord};
use super::{GysinError, Ring, RootContext, SymmetricClass};
use crate::polyring::MultiPoly;

/// `d_i f = (f - f|_{y_i <-> y_{i+1}}) / (y_i - y_{i+1})`, where the first
/// `roots` variables of `f` are `y_1..y_roots` and the rest are scalars.
pub fn divided_difference(f: &MultiPoly, i: usize, roots: usize) -> Result<MultiPoly, GysinError> {
    if i == 0 || i >= roots || roots > f.num_vars() {
        return Err(GysinError::IndexOutOfRange {
            index: i,
            max: roots.saturating_sub(1),
        });
    }
    let swapped = f.apply_transposition(i - 1, i)?;
    Ok((f - &swapped).div_by_difference(i - 1, i)?)
}

impl RootContext {
    /// Applies `d_{a_1} o ... o d_{a_k}` for the word `[a_1, ..., a_k]`
    /// (rightmost letter acts first).
    pub fn apply_word(&self, f: &MultiPoly, word: &ReducedWord) -> Result<MultiPoly, GysinError> {
        self.check_ring(f, Ring::Roots)?;
        let mut g = f.clone();
        for &letter in word.letters().iter().rev() {
            if g.is_zero() {
                break;
            }
            g = divided_difference(&g, letter, self.rank())?;
        }
        Ok(g)
    }

    /// Divided-difference push-forward of a `Roots`-ring polynomial along a
    /// reduced word of `w_0`, with the calibrated sign.
    pub fn dd_pushforward(&self, f: &MultiPoly) -> Result<SymmetricClass, GysinError> {
        self.dd_pushforward_with_word(f, &self.w0_word)
    }

    pub fn dd_pushforward_with_word(
        &self,
        f: &MultiPoly,
        word: &ReducedWord,
    ) -> Result<SymmetricClass, GysinError> {
        let mut out = self.dd_pushforward_unsigned(f, word)?;
        if self.dd_sign < 0 {
            out.value = -&out.value;
        }
        Ok(out)
    }

    pub fn dd_pushforward_xi(&self, f: &MultiPoly) -> Result<SymmetricClass, GysinError> {
        let mut out = self.dd_pushforward(&self.xi_to_roots(f)?)?;
        out.fiber_codrop = self.codrop(f, Ring::Xi);
        Ok(out)
    }

    pub(super) fn dd_pushforward_unsigned(
        &self,
        f: &MultiPoly,
        word: &ReducedWord,
    ) -> Result<SymmetricClass, GysinError> {
        self.check_ring(f, Ring::Roots)?;
        let a_deg = f.degree_in(self.a_index(Ring::Roots));
        if a_deg > 1 {
            return Err(GysinError::ADegreeTooHigh(a_deg));
        }
        if word.len() != self.flag_dim() as usize
            || word.letters().iter().any(|&a| a == 0 || a >= self.rank())
            || Permutation::from_word(self.rank(), word) != Permutation::longest(self.rank())
        {
            return Err(GysinError::Inconsistent(format!(
                "word {word} is not reduced for the longest permutation"
            )));
        }
        let g = self.apply_word(f, word)?;
        let value = self.symmetric_reduce(&g).map_err(|e| {
            GysinError::Inconsistent(format!("divided-difference output not symmetric: {e}"))
        })?;
        Ok(SymmetricClass {
            value,
            fiber_codrop: self.codrop(f, Ring::Roots),
        })
    }

    /// Rewrites a symmetric `Roots`-ring polynomial in the elementary
    /// symmetric functions, merging with the scalar `e_i` already present.
    /// The result is in the `Base` ring.
    pub fn symmetric_reduce(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Roots)?;
        let r = self.rank();
        for i in 1..r {
            if p.apply_transposition(i - 1, i)? != *p {
                return Err(GysinError::NotSymmetric(i));
            }
        }
        let n = self.num_vars(Ring::Roots);
        let base_n = self.num_vars(Ring::Base);
        let mut work = p.clone();
        let mut out = MultiPoly::zero(base_n);
        let mut power_cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        while !work.is_zero() {
            // Leading root exponent in lex order on y_1..y_r.
            let lead: Vec<u32> = work
                .terms()
                .map(|(m, _)| m[..r].to_vec())
                .max()
                .expect("nonzero");
            if lead.windows(2).any(|w| w[0] < w[1]) {
                return Err(GysinError::Inconsistent(format!(
                    "leading exponent {lead:?} is not a partition"
                )));
            }
            // Scalar coefficient of y^lead, as a polynomial in e and a.
            let scalar_terms: Vec<(Vec<u32>, BigRational)> = work
                .terms()
                .filter(|(m, _)| m[..r] == lead[..])
                .map(|(m, c)| {
                    let mut s = m.to_vec();
                    s[..r].iter_mut().for_each(|x| *x = 0);
                    (s, c.clone())
                })
                .collect();
            let scalar = MultiPoly::from_terms(n, scalar_terms)?;

            let mut product = MultiPoly::one(n);
            let mut e_exps = vec![0u32; base_n];
            for i in 1..=r {
                let next = if i < r { lead[i] } else { 0 };
                let k = lead[i - 1] - next;
                if k == 0 {
                    continue;
                }
                e_exps[i - 1] = k;
                let pw = power_cache
                    .entry((i, k))
                    .or_insert_with(|| self.elementary[i - 1].pow(k));
                product = &product * pw;
            }
            work = &work - &(&scalar * &product);
            let e_mono = MultiPoly::monomial(BigRational::one(), e_exps);
            out = &out + &(&self.to_base(&scalar, Ring::Roots)? * &e_mono);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn divided_difference_examples() {
        let ctx = RootContext::new(2).unwrap();
        let (y1, y2) = (ctx.y(1), ctx.y(2));
        let n = ctx.num_vars(Ring::Roots);
        assert_eq!(divided_difference(&y1, 1, 2).unwrap(), MultiPoly::one(n));
        assert!(divided_difference(&(&y1 * &y2), 1, 2).unwrap().is_zero());
        assert_eq!(divided_difference(&y1.pow(2), 1, 2).unwrap(), &y1 + &y2);
        assert!(matches!(
            divided_difference(&y1, 2, 2),
            Err(GysinError::IndexOutOfRange { index: 2, max: 1 })
        ));
        assert!(divided_difference(&y1, 0, 2).is_err());
    }

    #[test]
    fn scalars_pass_through() {
        let ctx = RootContext::new(2).unwrap();
        let f = &ctx.y(1).pow(2) * &ctx.e(Ring::Roots, 2);
        let out = divided_difference(&f, 1, 2).unwrap();
        assert_eq!(out, &(&ctx.y(1) + &ctx.y(2)) * &ctx.e(Ring::Roots, 2));
    }

    #[test]
    fn symmetric_reduce_examples() {
        let ctx = RootContext::new(2).unwrap();
        let (y1, y2) = (ctx.y(1), ctx.y(2));
        let e1 = ctx.e(Ring::Base, 1);
        let e2 = ctx.e(Ring::Base, 2);
        assert_eq!(ctx.symmetric_reduce(&(&y1 + &y2)).unwrap(), e1);
        let newton = &y1.pow(2) + &y2.pow(2);
        assert_eq!(
            ctx.symmetric_reduce(&newton).unwrap(),
            &e1.pow(2) - &e2.scale(&rat(2))
        );
        assert_eq!(ctx.symmetric_reduce(&y1).unwrap_err(), GysinError::NotSymmetric(1));
    }

    #[test]
    fn symmetric_reduce_merges_scalar_e() {
        let ctx = RootContext::new(3).unwrap();
        let p = &(&(&ctx.y(1) + &ctx.y(2)) + &ctx.y(3)) * &ctx.e(Ring::Roots, 1);
        let e1 = ctx.e(Ring::Base, 1);
        assert_eq!(ctx.symmetric_reduce(&p).unwrap(), e1.pow(2));
    }

    #[test]
    fn dd_matches_tower_on_fixtures() {
        let ctx = RootContext::new(2).unwrap();
        let out = ctx.dd_pushforward_xi(&ctx.xi(1)).unwrap();
        assert_eq!(out.constant(), Some(rat(1)));

        let ctx = RootContext::new(3).unwrap();
        let sum = &ctx.tau(1) + &ctx.tau(2);
        let roots = ctx.tower_to_roots(&sum.pow(3)).unwrap();
        let out = ctx.dd_pushforward(&roots).unwrap();
        // tau in roots form differs from the tower form by multiples of e_1,
        // which cannot reach a degree-zero output.
        assert_eq!(out.constant(), Some(rat(6)));
    }

    #[test]
    fn square_of_divided_difference_vanishes() {
        let ctx = RootContext::new(3).unwrap();
        let f = &(&ctx.y(1).pow(3) * &ctx.y(2)) + &(&ctx.y(3).pow(2) * &ctx.e(Ring::Roots, 2));
        for i in 1..3 {
            let once = divided_difference(&f, i, 3).unwrap();
            assert!(divided_difference(&once, i, 3).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_non_reduced_words() {
        let ctx = RootContext::new(3).unwrap();
        let err = ctx
            .dd_pushforward_with_word(&ctx.y(1), &ReducedWord(vec![1, 2]))
            .unwrap_err();
        assert!(matches!(err, GysinError::Inconsistent(_)));
    }
}

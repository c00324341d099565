use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{GysinError, Ring, RootContext, SymmetricClass};
use crate::polyring::MultiPoly;

impl RootContext {
    /// Push-forward along the projective-bundle tower
    /// `Flag(E) = P(F_{r-2}) -> ... -> P(F_0) -> X`, `F_0 = E`.
    ///
    /// Step `k` pushes the hyperplane class `h_{k+1}` of `P(F_k)` (bundle
    /// rank `rho = r - k`) using `h^{rho-1+j} -> s_j(F_k)`. Input lives in
    /// the `Tower` ring; the output is in `e_1..e_r, a`.
    pub fn tower_pushforward(&self, f: &MultiPoly) -> Result<SymmetricClass, GysinError> {
        self.check_ring(f, Ring::Tower)?;
        let a = self.a_index(Ring::Tower);
        let a_deg = f.degree_in(a);
        if a_deg > 1 {
            return Err(GysinError::ADegreeTooHigh(a_deg));
        }
        let weights = self.weights(Ring::Tower);
        let top = f
            .weighted_degree_range(&weights)
            .map(|(_, hi)| hi as i64)
            .unwrap_or(0);
        let codrop = top - self.flag_dim() as i64;
        let base_zero = SymmetricClass {
            value: MultiPoly::zero(self.num_vars(Ring::Base)),
            fiber_codrop: codrop,
        };
        if codrop < 0 || f.is_zero() {
            return Ok(base_zero);
        }
        // Base-degree budget: pushing never lowers the e/a-degree of a term,
        // so anything above the output degree can be discarded early.
        let budget = codrop as u32;
        let r = self.rank();
        let base_weight = |m: &[u32]| -> u32 {
            m.iter()
                .zip(&weights)
                .skip(r - 1)
                .map(|(e, w)| e * w)
                .sum()
        };

        let mut current: HashMap<Vec<u32>, BigRational> = f
            .terms()
            .filter(|(m, _)| base_weight(m) <= budget)
            .map(|(m, c)| (m.to_vec(), c.clone()))
            .collect();

        for k in (0..r - 1).rev() {
            let rho = r - k;
            let var = k;
            let needed = current
                .keys()
                .map(|m| m[var] as usize)
                .max()
                .unwrap_or(0)
                .saturating_sub(rho - 1);
            let extended;
            let segre: &[MultiPoly] = if needed <= self.segre_cap {
                &self.segre[k]
            } else {
                extended = self.segre_series(k, needed);
                &extended
            };
            let mut next: HashMap<Vec<u32>, BigRational> = HashMap::new();
            for (m, c) in current {
                let d = m[var] as usize;
                if d + 1 < rho {
                    continue;
                }
                let j = d + 1 - rho;
                let mut rest = m;
                rest[var] = 0;
                let rest_weight = base_weight(&rest);
                for (sm, sc) in segre[j].terms() {
                    if rest_weight + base_weight(sm) > budget {
                        continue;
                    }
                    let key: Vec<u32> = rest.iter().zip(sm).map(|(x, y)| x + y).collect();
                    let add = &c * sc;
                    *next.entry(key).or_insert_with(BigRational::zero) += add;
                }
            }
            next.retain(|_, c| !c.is_zero());
            current = next;
        }
        let poly = MultiPoly::from_terms(self.num_vars(Ring::Tower), current)?;
        Ok(SymmetricClass {
            value: self.to_base(&poly, Ring::Tower)?,
            fiber_codrop: codrop,
        })
    }

    /// Tower push-forward of a polynomial written in the `Xi` ring.
    pub fn tower_pushforward_xi(&self, f: &MultiPoly) -> Result<SymmetricClass, GysinError> {
        let mut out = self.tower_pushforward(&self.xi_to_tower(f)?)?;
        out.fiber_codrop = self.codrop(f, Ring::Xi);
        Ok(out)
    }

    pub(super) fn codrop(&self, f: &MultiPoly, ring: Ring) -> i64 {
        let top = f
            .weighted_degree_range(&self.weights(ring))
            .map(|(_, hi)| hi as i64)
            .unwrap_or(0);
        top - self.flag_dim() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn constant(c: &SymmetricClass) -> BigRational {
        c.constant().expect("constant class")
    }

    #[test]
    fn rank_two_single_segre_step() {
        let ctx = RootContext::new(2).unwrap();
        // xi_1 = h_1 - e_1.
        let out = ctx.tower_pushforward_xi(&ctx.xi(1)).unwrap();
        assert_eq!(constant(&out), rat(1));
        assert_eq!(out.fiber_codrop, 0);
    }

    #[test]
    fn rank_two_cube_gives_second_segre_class() {
        let ctx = RootContext::new(2).unwrap();
        let out = ctx.tower_pushforward(&ctx.h(1).pow(3)).unwrap();
        let e1 = ctx.e(Ring::Base, 1);
        let e2 = ctx.e(Ring::Base, 2);
        assert_eq!(out.value, &e1.pow(2) - &e2);
    }

    #[test]
    fn rank_three_fixtures() {
        let ctx = RootContext::new(3).unwrap();
        let sum = &ctx.tau(1) + &ctx.tau(2);
        let out = ctx.tower_pushforward(&sum.pow(3)).unwrap();
        assert_eq!(constant(&out), rat(6));

        let xi_sum = &ctx.xi(1) + &ctx.xi(2);
        let out = ctx.tower_pushforward_xi(&xi_sum.pow(3)).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn below_fiber_dimension_vanishes() {
        for r in 2..=5 {
            let ctx = RootContext::new(r).unwrap();
            let f = (&ctx.h(1) + &ctx.e(Ring::Tower, 1)).pow(ctx.flag_dim() - 1);
            let out = ctx.tower_pushforward(&f).unwrap();
            assert!(out.is_zero());
            assert_eq!(out.fiber_codrop, -1);
        }
    }

    #[test]
    fn a_degree_two_is_rejected() {
        let ctx = RootContext::new(2).unwrap();
        let f = &ctx.a(Ring::Tower).pow(2) * &ctx.h(1);
        assert_eq!(ctx.tower_pushforward(&f).unwrap_err(), GysinError::ADegreeTooHigh(2));
    }

    #[test]
    fn projection_formula_for_a() {
        let ctx = RootContext::new(3).unwrap();
        let g = &ctx.h(1).pow(2) * &(&ctx.h(2) + &ctx.e(Ring::Tower, 1)).pow(2);
        let lhs = ctx.tower_pushforward(&(&g * &ctx.a(Ring::Tower))).unwrap();
        let rhs = ctx.tower_pushforward(&g).unwrap();
        assert_eq!(lhs.value, &rhs.value * &ctx.a(Ring::Base));
    }

    #[test]
    fn segre_beyond_cache() {
        let small = RootContext::with_segre_cap(3, 1).unwrap();
        let full = RootContext::new(3).unwrap();
        let f = (&small.h(1) + &small.h(2)).pow(6);
        assert_eq!(
            small.tower_pushforward(&f).unwrap(),
            full.tower_pushforward(&f).unwrap()
        );
    }
}

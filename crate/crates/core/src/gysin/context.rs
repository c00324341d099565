use num_traits::One;
use num_rational::BigRational;

use super::perm::{Permutation, ReducedWord};
use super::{GysinError, SymmetricClass};
use crate::polyring::{binom, parse_poly, MultiPoly, ParseError};

/// The variable layouts used for a fixed rank `r`.
///
/// | ring    | variables                          | count  |
/// |---------|------------------------------------|--------|
/// | `Xi`    | `xi_1..xi_{r-1}, e_1..e_r, a`      | `2r`   |
/// | `Tower` | `h_1..h_{r-1}, e_1..e_r, a`        | `2r`   |
/// | `Roots` | `y_1..y_r, e_1..e_r, a`            | `2r+1` |
/// | `Base`  | `e_1..e_r, a`                      | `r+1`  |
///
/// `y_j = c_1(S_j/S_{j-1})` for the universal flag, `h_k = y_{r-k+1}` is the
/// hyperplane class of the `k`-th projective-bundle step, `xi_i = -y_{r-i}`,
/// `e_i = c_i(E)` and `a = c_1(A)` for a line bundle `A` on the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Xi,
    Tower,
    Roots,
    Base,
}

/// Rank-dependent variable dictionaries plus the per-rank data the
/// push-forward routes share: Chern and Segre classes of the tower
/// bundles, the default reduced word of the longest permutation and the
/// calibrated divided-difference signs.
///
/// Immutable once constructed; share it freely across threads.
#[derive(Debug, Clone)]
pub struct RootContext {
    r: usize,
    /// `chern[k][i] = c_i(F_k)` in the tower ring, `i = 0..=r-k`.
    pub(super) chern: Vec<Vec<MultiPoly>>,
    /// `segre[k][j] = s_j(F_k)` for `j = 0..=segre_cap`.
    pub(super) segre: Vec<Vec<MultiPoly>>,
    pub(super) segre_cap: usize,
    /// `e_i(y_1..y_r)` in the roots ring, index `i - 1`.
    pub(super) elementary: Vec<MultiPoly>,
    pub(super) w0_word: ReducedWord,
    pub(super) dd_sign: i64,
    /// Sign for the Grassmannian divided-difference route, index `s - 1`.
    pub(super) gr_sign: Vec<i64>,
}

impl RootContext {
    /// Builds and calibrates the context for rank `r`.
    pub fn new(r: usize) -> Result<Self, GysinError> {
        Self::with_segre_cap(r, (binom(r as u64, 2) + 4) as usize)
    }

    /// Like [`RootContext::new`], precomputing Segre classes up to
    /// `segre_cap`. Higher degrees are still handled, just not cached.
    pub fn with_segre_cap(r: usize, segre_cap: usize) -> Result<Self, GysinError> {
        if r < 2 {
            return Err(GysinError::RankTooSmall(r));
        }
        let mut ctx = RootContext {
            r,
            chern: Vec::new(),
            segre: Vec::new(),
            segre_cap,
            elementary: Vec::new(),
            w0_word: Permutation::longest(r).reduced_word(),
            dd_sign: 1,
            gr_sign: vec![1; r - 1],
        };
        ctx.chern = ctx.tower_chern_classes();
        ctx.segre = (0..r - 1)
            .map(|k| ctx.segre_series(k, segre_cap))
            .collect();
        ctx.elementary = ctx.elementary_in_roots();
        ctx.calibrate()?;
        Ok(ctx)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Relative dimension `C(r, 2)` of the full flag bundle.
    pub fn flag_dim(&self) -> u32 {
        binom(self.r as u64, 2) as u32
    }

    pub fn dd_sign(&self) -> i64 {
        self.dd_sign
    }

    pub fn gr_sign(&self, s: usize) -> i64 {
        self.gr_sign[s - 1]
    }

    pub fn w0_word(&self) -> &ReducedWord {
        &self.w0_word
    }

    pub fn num_vars(&self, ring: Ring) -> usize {
        match ring {
            Ring::Xi | Ring::Tower => 2 * self.r,
            Ring::Roots => 2 * self.r + 1,
            Ring::Base => self.r + 1,
        }
    }

    pub fn var_names(&self, ring: Ring) -> Vec<String> {
        let r = self.r;
        let mut names: Vec<String> = match ring {
            Ring::Xi => (1..r).map(|i| format!("xi{i}")).collect(),
            Ring::Tower => (1..r).map(|i| format!("h{i}")).collect(),
            Ring::Roots => (1..=r).map(|i| format!("y{i}")).collect(),
            Ring::Base => Vec::new(),
        };
        names.extend((1..=r).map(|i| format!("e{i}")));
        names.push("a".into());
        names
    }

    /// Parses `src` in `ring`, using the names of [`RootContext::var_names`].
    /// In the `Xi` ring `t1, t2, ...` are accepted as aliases of `xi1, xi2, ...`.
    pub fn parse(&self, src: &str, ring: Ring) -> Result<MultiPoly, ParseError> {
        let names = self.var_names(ring);
        parse_poly(src, names.len(), |name| {
            let alias = match (ring, name.strip_prefix('t')) {
                (Ring::Xi, Some(rest)) => Some(format!("xi{rest}")),
                _ => None,
            };
            let name = alias.as_deref().unwrap_or(name);
            names.iter().position(|n| n == name)
        })
    }

    pub(super) fn check_ring(&self, p: &MultiPoly, ring: Ring) -> Result<(), GysinError> {
        let expected = self.num_vars(ring);
        if p.num_vars() != expected {
            return Err(GysinError::WrongRing {
                ring,
                expected,
                found: p.num_vars(),
            });
        }
        Ok(())
    }

    fn fiber_count(&self, ring: Ring) -> usize {
        match ring {
            Ring::Xi | Ring::Tower => self.r - 1,
            Ring::Roots => self.r,
            Ring::Base => 0,
        }
    }

    /// Index of `e_i` (1-based `i`) in `ring`.
    pub fn e_index(&self, ring: Ring, i: usize) -> usize {
        assert!((1..=self.r).contains(&i), "e_{i} out of range");
        self.fiber_count(ring) + i - 1
    }

    pub fn a_index(&self, ring: Ring) -> usize {
        self.num_vars(ring) - 1
    }

    /// Grading: fiber variables and `a` have degree 1, `e_i` degree `i`.
    pub fn weights(&self, ring: Ring) -> Vec<u32> {
        let mut w = vec![1; self.fiber_count(ring)];
        w.extend((1..=self.r as u32).collect::<Vec<_>>());
        w.push(1);
        w
    }

    pub fn e(&self, ring: Ring, i: usize) -> MultiPoly {
        MultiPoly::var(self.num_vars(ring), self.e_index(ring, i))
    }

    pub fn a(&self, ring: Ring) -> MultiPoly {
        MultiPoly::var(self.num_vars(ring), self.a_index(ring))
    }

    /// `xi_i` in the `Xi` ring, `i = 1..r-1`.
    pub fn xi(&self, i: usize) -> MultiPoly {
        assert!((1..self.r).contains(&i), "xi_{i} out of range");
        MultiPoly::var(self.num_vars(Ring::Xi), i - 1)
    }

    /// `h_k` in the `Tower` ring, `k = 1..r-1`.
    pub fn h(&self, k: usize) -> MultiPoly {
        assert!((1..self.r).contains(&k), "h_{k} out of range");
        MultiPoly::var(self.num_vars(Ring::Tower), k - 1)
    }

    /// `y_j` in the `Roots` ring, `j = 1..r`.
    pub fn y(&self, j: usize) -> MultiPoly {
        assert!((1..=self.r).contains(&j), "y_{j} out of range");
        MultiPoly::var(self.num_vars(Ring::Roots), j - 1)
    }

    /// `c_1(Q_s) = h_1 + ... + h_s` in the tower ring for `s = 1..r-1`;
    /// `tau_r` is zero by convention.
    pub fn tau(&self, s: usize) -> MultiPoly {
        assert!((1..=self.r).contains(&s), "tau_{s} out of range");
        let mut out = MultiPoly::zero(self.num_vars(Ring::Tower));
        if s < self.r {
            for k in 1..=s {
                out = &out + &self.h(k);
            }
        }
        out
    }

    /// `sum_{i=1}^{r-s} xi_{r-i}` in the `Xi` ring; zero for `s = r`.
    pub fn tau_from_xi(&self, s: usize) -> MultiPoly {
        assert!((1..=self.r).contains(&s), "tau_{s} out of range");
        let mut out = MultiPoly::zero(self.num_vars(Ring::Xi));
        for i in 1..=self.r - s {
            out = &out + &self.xi(self.r - i);
        }
        out
    }

    fn y1_in_tower(&self) -> MultiPoly {
        let mut out = self.e(Ring::Tower, 1);
        for k in 1..self.r {
            out = &out - &self.h(k);
        }
        out
    }

    fn images_with_scalars(&self, fiber: Vec<MultiPoly>, target: Ring) -> Vec<MultiPoly> {
        let mut images = fiber;
        images.extend((1..=self.r).map(|i| self.e(target, i)));
        images.push(self.a(target));
        images
    }

    /// `xi_i -> -h_{i+1}` for `i <= r-2` and `xi_{r-1} -> h_1+...+h_{r-1} - e_1`.
    pub fn xi_to_tower(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Xi)?;
        let r = self.r;
        let fiber = (1..r)
            .map(|i| if i + 1 < r { -&self.h(i + 1) } else { -&self.y1_in_tower() })
            .collect();
        Ok(p.substitute(&self.images_with_scalars(fiber, Ring::Tower))?)
    }

    /// `xi_i -> -y_{r-i}`.
    pub fn xi_to_roots(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Xi)?;
        let fiber = (1..self.r).map(|i| -&self.y(self.r - i)).collect();
        Ok(p.substitute(&self.images_with_scalars(fiber, Ring::Roots))?)
    }

    /// `h_k -> y_{r-k+1}`.
    pub fn tower_to_roots(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Tower)?;
        let fiber = (1..self.r).map(|k| self.y(self.r - k + 1)).collect();
        Ok(p.substitute(&self.images_with_scalars(fiber, Ring::Roots))?)
    }

    /// `y_j -> h_{r-j+1}` for `j >= 2`, `y_1 -> e_1 - (h_1+...+h_{r-1})`.
    pub fn roots_to_tower(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Roots)?;
        let fiber = (1..=self.r)
            .map(|j| if j == 1 { self.y1_in_tower() } else { self.h(self.r - j + 1) })
            .collect();
        Ok(p.substitute(&self.images_with_scalars(fiber, Ring::Tower))?)
    }

    /// Embeds a polynomial in `t_1..t_{r-1}` into the `Xi` ring (`t_i = xi_i`).
    pub fn t_to_xi(&self, p: &MultiPoly) -> Result<MultiPoly, GysinError> {
        if p.num_vars() != self.r - 1 {
            return Err(GysinError::WrongRing {
                ring: Ring::Xi,
                expected: self.r - 1,
                found: p.num_vars(),
            });
        }
        let mapping: Vec<Option<usize>> = (0..self.r - 1).map(Some).collect();
        Ok(p.remap(self.num_vars(Ring::Xi), &mapping)?)
    }

    /// Pulls a base-ring class back into `ring` (e and a map to themselves).
    pub fn base_to(&self, p: &MultiPoly, ring: Ring) -> Result<MultiPoly, GysinError> {
        self.check_ring(p, Ring::Base)?;
        let offset = self.fiber_count(ring);
        let mapping: Vec<Option<usize>> = (0..=self.r).map(|v| Some(offset + v)).collect();
        Ok(p.remap(self.num_vars(ring), &mapping)?)
    }

    /// Projects a polynomial with no fiber variables down to the base ring.
    pub(super) fn to_base(&self, p: &MultiPoly, ring: Ring) -> Result<MultiPoly, GysinError> {
        let offset = self.fiber_count(ring);
        let mapping: Vec<Option<usize>> = (0..self.num_vars(ring))
            .map(|v| v.checked_sub(offset))
            .collect();
        p.remap(self.num_vars(Ring::Base), &mapping)
            .map_err(|_| GysinError::Inconsistent("fiber variables survived a push-forward".into()))
    }

    /// Chern classes of the tower bundles: `F_0 = E` and
    /// `c(F_k) = c(F_{k-1}) / (1 + h_k)` truncated at rank `r - k`.
    fn tower_chern_classes(&self) -> Vec<Vec<MultiPoly>> {
        let r = self.r;
        let n = self.num_vars(Ring::Tower);
        let mut out = Vec::with_capacity(r - 1);
        let mut prev: Vec<MultiPoly> = std::iter::once(MultiPoly::one(n))
            .chain((1..=r).map(|i| self.e(Ring::Tower, i)))
            .collect();
        out.push(prev.clone());
        for k in 1..r - 1 {
            let minus_h = -&self.h(k);
            let rank = r - k;
            let mut powers = vec![MultiPoly::one(n)];
            for l in 1..=rank {
                powers.push(&powers[l - 1] * &minus_h);
            }
            let next: Vec<MultiPoly> = (0..=rank)
                .map(|i| {
                    (0..=i).fold(MultiPoly::zero(n), |acc, l| &acc + &(&prev[i - l] * &powers[l]))
                })
                .collect();
            out.push(next.clone());
            prev = next;
        }
        out
    }

    /// `s_0 = 1`, `s_j = sum_{i=1}^{j} (-1)^{i-1} c_i(F_k) s_{j-i}`.
    pub(super) fn segre_series(&self, k: usize, upto: usize) -> Vec<MultiPoly> {
        let n = self.num_vars(Ring::Tower);
        let chern = &self.chern[k];
        let rank = chern.len() - 1;
        let mut s = vec![MultiPoly::one(n)];
        for j in 1..=upto {
            let mut acc = MultiPoly::zero(n);
            for i in 1..=j.min(rank) {
                let term = &chern[i] * &s[j - i];
                acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            s.push(acc);
        }
        s
    }

    fn elementary_in_roots(&self) -> Vec<MultiPoly> {
        let n = self.num_vars(Ring::Roots);
        // Coefficients of prod_j (1 + y_j t).
        let mut e = vec![MultiPoly::one(n)];
        for j in 1..=self.r {
            let y = self.y(j);
            let mut next = e.clone();
            next.push(MultiPoly::zero(n));
            for i in 1..next.len() {
                next[i] = &next[i] + &(&e[i - 1] * &y);
            }
            e = next;
        }
        e.into_iter().skip(1).collect()
    }

    /// `y_2^1 y_3^2 ... y_r^{r-1}`, equivalently `prod_k h_k^{r-k}`: the
    /// class of a point in a fiber, which the tower sends to 1.
    pub fn staircase_roots(&self, from: usize, to: usize) -> MultiPoly {
        let n = self.num_vars(Ring::Roots);
        let mut exps = vec![0u32; n];
        for j in from..=to {
            exps[j - 1] = (j - from) as u32;
        }
        MultiPoly::monomial(BigRational::one(), exps)
    }

    fn calibrate(&mut self) -> Result<(), GysinError> {
        let point = self.staircase_roots(1, self.r);
        let tower = self.tower_pushforward(&self.roots_to_tower(&point)?)?;
        let dd = self.dd_pushforward_unsigned(&point, &self.w0_word.clone())?;
        self.dd_sign = sign_ratio(&tower, &dd)?;
        for s in 1..self.r {
            let xi = self.gr_plucker(s).pow((s * (self.r - s)) as u32);
            let via_flag = self.gr_pushforward_via_flag(&xi, s)?;
            let dd = self.gr_pushforward_unsigned(&xi, s)?;
            self.gr_sign[s - 1] = sign_ratio(&via_flag, &dd)?;
        }
        Ok(())
    }
}

fn sign_ratio(reference: &SymmetricClass, candidate: &SymmetricClass) -> Result<i64, GysinError> {
    if reference.value == candidate.value && !reference.is_zero() {
        Ok(1)
    } else if reference.value == -&candidate.value && !reference.is_zero() {
        Ok(-1)
    } else {
        Err(GysinError::Inconsistent(format!(
            "calibration classes differ beyond sign: {} vs {}",
            reference.to_text(),
            candidate.to_text()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_ring_names() {
        let ctx = RootContext::new(3).unwrap();
        let p = ctx.parse("t1*e2 + xi2 - a", Ring::Xi).unwrap();
        let want = &(&(&ctx.xi(1) * &ctx.e(Ring::Xi, 2)) + &ctx.xi(2)) - &ctx.a(Ring::Xi);
        assert_eq!(p, want);
        assert_eq!(ctx.parse("y3^2", Ring::Roots).unwrap(), ctx.y(3).pow(2));
        assert_eq!(ctx.parse("t3", Ring::Xi).unwrap_err().pos, 0);
        assert!(ctx.parse("t1", Ring::Tower).is_err());
    }

    #[test]
    fn rejects_rank_one() {
        assert_eq!(RootContext::new(1).unwrap_err(), GysinError::RankTooSmall(1));
    }

    /// Rewrites `e_1` as `y_1 + ... + y_r` in a roots-ring polynomial.
    fn expand_e1(ctx: &RootContext, p: &MultiPoly) -> MultiPoly {
        let n = ctx.num_vars(Ring::Roots);
        let sum_y = (1..=ctx.rank()).fold(MultiPoly::zero(n), |acc, j| &acc + &ctx.y(j));
        let images: Vec<MultiPoly> = (0..n)
            .map(|v| if v == ctx.e_index(Ring::Roots, 1) { sum_y.clone() } else { MultiPoly::var(n, v) })
            .collect();
        p.substitute(&images).unwrap()
    }

    #[test]
    fn dictionaries_agree_on_roots() {
        for r in 2..=5 {
            let ctx = RootContext::new(r).unwrap();
            for i in 1..r {
                let direct = ctx.xi_to_roots(&ctx.xi(i)).unwrap();
                let via_tower = ctx.tower_to_roots(&ctx.xi_to_tower(&ctx.xi(i)).unwrap()).unwrap();
                let diff = expand_e1(&ctx, &(&direct - &via_tower));
                assert!(diff.is_zero(), "r={r} i={i}: {diff}");
            }
            for j in 1..=r {
                let round = ctx.tower_to_roots(&ctx.roots_to_tower(&ctx.y(j)).unwrap()).unwrap();
                assert!(expand_e1(&ctx, &(&round - &ctx.y(j))).is_zero());
            }
        }
    }

    #[test]
    fn tau_identity_holds_with_e1_shift() {
        for r in 2..=6 {
            let ctx = RootContext::new(r).unwrap();
            for s in 1..r {
                let from_xi = ctx.xi_to_tower(&ctx.tau_from_xi(s)).unwrap();
                let lhs = &(&from_xi - &ctx.tau(s)) + &ctx.e(Ring::Tower, 1);
                assert!(lhs.is_zero(), "r={r} s={s}: {lhs}");
            }
        }
    }

    #[test]
    fn elementary_symmetric_functions() {
        let ctx = RootContext::new(3).unwrap();
        let e2 = &(&(&ctx.y(1) * &ctx.y(2)) + &(&ctx.y(1) * &ctx.y(3))) + &(&ctx.y(2) * &ctx.y(3));
        assert_eq!(ctx.elementary[1], e2);
        assert_eq!(ctx.elementary.len(), 3);
    }

    #[test]
    fn segre_of_e_low_degrees() {
        let ctx = RootContext::new(3).unwrap();
        let s = &ctx.segre[0];
        let e1 = ctx.e(Ring::Tower, 1);
        let e2 = ctx.e(Ring::Tower, 2);
        assert_eq!(s[1], e1);
        assert_eq!(s[2], &e1.pow(2) - &e2);
    }

    #[test]
    fn calibrated_signs() {
        for r in 2..=6 {
            let ctx = RootContext::new(r).unwrap();
            let expected = if binom(r as u64, 2).is_multiple_of(2) { 1 } else { -1 };
            assert_eq!(ctx.dd_sign(), expected, "r={r}");
            for s in 1..r {
                let expected = if (s * (r - s)) % 2 == 0 { 1 } else { -1 };
                assert_eq!(ctx.gr_sign(s), expected, "r={r} s={s}");
            }
        }
    }
}

use super::perm::Permutation;
use super::{GysinError, Ring, RootContext, SymmetricClass};
use crate::polyring::MultiPoly;

impl RootContext {
    fn check_grassmann_index(&self, s: usize) -> Result<(), GysinError> {
        if s == 0 || s >= self.rank() {
            return Err(GysinError::IndexOutOfRange {
                index: s,
                max: self.rank() - 1,
            });
        }
        Ok(())
    }

    /// `xi = c_1(Q) = y_{s+1} + ... + y_r` for the rank `r - s` universal
    /// quotient on `Gr(s, E)`, in the `Roots` ring.
    pub fn gr_plucker(&self, s: usize) -> MultiPoly {
        (s + 1..=self.rank()).fold(MultiPoly::zero(self.num_vars(Ring::Roots)), |acc, j| {
            &acc + &self.y(j)
        })
    }

    /// Relative dimension `s(r - s)` of `Gr(s, E)`.
    pub fn gr_dim(&self, s: usize) -> u32 {
        (s * (self.rank() - s)) as u32
    }

    fn check_block_symmetric(&self, f: &MultiPoly, s: usize) -> Result<(), GysinError> {
        for i in (1..self.rank()).filter(|&i| i != s) {
            if f.apply_transposition(i - 1, i)? != *f {
                return Err(GysinError::NotBlockSymmetric { s, transposition: i });
            }
        }
        Ok(())
    }

    /// Push-forward along `Gr(s, E) -> X` of a class symmetric separately in
    /// `y_1..y_s` and `y_{s+1}..y_r`: the divided difference for the
    /// minimal coset representative `w_0 w_{0,P}`, then e-basis reduction.
    pub fn gr_pushforward(&self, f: &MultiPoly, s: usize) -> Result<SymmetricClass, GysinError> {
        let mut out = self.gr_pushforward_unsigned(f, s)?;
        if self.gr_sign(s) < 0 {
            out.value = -&out.value;
        }
        Ok(out)
    }

    pub(super) fn gr_pushforward_unsigned(
        &self,
        f: &MultiPoly,
        s: usize,
    ) -> Result<SymmetricClass, GysinError> {
        self.check_ring(f, Ring::Roots)?;
        self.check_grassmann_index(s)?;
        self.check_block_symmetric(f, s)?;
        let a_deg = f.degree_in(self.a_index(Ring::Roots));
        if a_deg > 1 {
            return Err(GysinError::ADegreeTooHigh(a_deg));
        }
        let r = self.rank();
        let u = Permutation::longest(r).compose(&Permutation::longest_parabolic(r, s));
        let g = self.apply_word(f, &u.reduced_word())?;
        let value = self.symmetric_reduce(&g).map_err(|e| {
            GysinError::Inconsistent(format!("coset divided difference not symmetric: {e}"))
        })?;
        Ok(SymmetricClass {
            value,
            fiber_codrop: self.gr_codrop(f, s),
        })
    }

    /// Independent route through the full flag bundle: multiply by the
    /// fiber point classes of `Flag(S)` and `Flag(Q)` and push along the
    /// tower.
    pub fn gr_pushforward_via_flag(&self, f: &MultiPoly, s: usize) -> Result<SymmetricClass, GysinError> {
        self.check_ring(f, Ring::Roots)?;
        self.check_grassmann_index(s)?;
        self.check_block_symmetric(f, s)?;
        let fibers = &self.staircase_roots(1, s) * &self.staircase_roots(s + 1, self.rank());
        let lifted = self.roots_to_tower(&(f * &fibers))?;
        let mut out = self.tower_pushforward(&lifted)?;
        out.fiber_codrop = self.gr_codrop(f, s);
        Ok(out)
    }

    fn gr_codrop(&self, f: &MultiPoly, s: usize) -> i64 {
        let top = f
            .weighted_degree_range(&self.weights(Ring::Roots))
            .map(|(_, hi)| hi as i64)
            .unwrap_or(0);
        top - self.gr_dim(s) as i64
    }
}

use num_rational::BigRational;
use rand::Rng;

use crate::gysin::{Ring, RootContext};
use crate::polyring::{frac, MultiPoly};

fn random_coefficient<R: Rng>(rng: &mut R) -> BigRational {
    let mut num = 0;
    while num == 0 {
        num = rng.random_range(-6..=6);
    }
    frac(num, rng.random_range(1..=3))
}

/// Random exponent vector of `len` entries summing to `degree`.
fn random_composition<R: Rng>(rng: &mut R, len: usize, degree: u32) -> Vec<u32> {
    let mut exps = vec![0; len];
    for _ in 0..degree {
        exps[rng.random_range(0..len)] += 1;
    }
    exps
}

/// Random polynomial in `t_1..t_{r-1}`, homogeneous of `degree`, with at
/// most `terms` terms.
pub fn random_t_input<R: Rng>(r: usize, rng: &mut R, degree: u32, terms: usize) -> MultiPoly {
    let n = r - 1;
    let mut out = MultiPoly::zero(n);
    for _ in 0..terms {
        out = &out + &MultiPoly::monomial(random_coefficient(rng), random_composition(rng, n, degree));
    }
    out
}

/// Random `Xi`-ring polynomial of fiber degree `fiber_degree`. Every term
/// carries the same base factor weight `base_weight` (0, 1 or 2), drawn
/// from monomials in the `e_i` and `a` with `a`-degree at most one.
pub fn random_xi_input<R: Rng>(
    ctx: &RootContext,
    rng: &mut R,
    fiber_degree: u32,
    base_weight: u32,
    terms: usize,
) -> MultiPoly {
    let r = ctx.rank();
    let nv = ctx.num_vars(Ring::Xi);
    let e = |i: usize| ctx.e_index(Ring::Xi, i);
    let a = ctx.a_index(Ring::Xi);
    let choices: Vec<Vec<usize>> = match base_weight {
        0 => vec![vec![]],
        1 => vec![vec![e(1)], vec![a]],
        _ => vec![vec![e(2)], vec![e(1), e(1)], vec![e(1), a]],
    };
    let mut out = MultiPoly::zero(nv);
    for _ in 0..terms {
        let mut exps = random_composition(rng, r - 1, fiber_degree);
        exps.resize(nv, 0);
        for &v in &choices[rng.random_range(0..choices.len())] {
            exps[v] += 1;
        }
        out = &out + &MultiPoly::monomial(random_coefficient(rng), exps);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Homogeneity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_reproducible_and_homogeneous() {
        let ctx = RootContext::new(3).unwrap();
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            random_xi_input(&ctx, &mut rng, 4, 2, 5)
        };
        let p = draw();
        assert_eq!(p, draw());
        let w = ctx.weights(Ring::Xi);
        let (lo, hi) = p.weighted_degree_range(&w).unwrap();
        assert_eq!((lo, hi), (6, 6));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_t_input(4, &mut rng, 6, 4);
        assert!(matches!(t.homogeneous_degree(), Homogeneity::Degree(6) | Homogeneity::Zero));
    }
}

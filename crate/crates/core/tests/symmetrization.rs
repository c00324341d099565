//! Independent oracle: the flag push-forward as the symmetrizer
//! `sum_w w(f / prod_{i<j}(y_i - y_j))`, evaluated at rational points.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagpush::approx::random_xi_input;
use flagpush::polyring::{rat, BigRational, MultiPoly};
use flagpush::{Ring, RootContext};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn eval(p: &MultiPoly, point: &[BigRational]) -> BigRational {
    let images: Vec<MultiPoly> = point.iter().map(|v| MultiPoly::constant(0, v.clone())).collect();
    p.substitute(&images).unwrap().as_constant().unwrap_or_else(BigRational::zero)
}

fn elementary(ys: &[BigRational]) -> Vec<BigRational> {
    let mut e = vec![BigRational::one()];
    for y in ys {
        let mut next = e.clone();
        next.push(BigRational::zero());
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_else(BigRational::zero) + &(y * &e[k - 1]);
        }
        e = next;
    }
    e.into_iter().skip(1).collect()
}

/// Symmetrizer of a `Roots`-ring class at `y`, with `a = 0`.
fn symmetrize(ctx: &RootContext, f: &MultiPoly, ys: &[BigRational]) -> BigRational {
    let r = ctx.rank();
    let e = elementary(ys);
    let mut total = BigRational::zero();
    for w in permutations(r) {
        let wy: Vec<BigRational> = w.iter().map(|&k| ys[k].clone()).collect();
        let mut vandermonde = BigRational::one();
        for i in 0..r {
            for j in i + 1..r {
                vandermonde *= &wy[i] - &wy[j];
            }
        }
        let mut point = wy;
        point.extend(e.iter().cloned());
        point.push(BigRational::zero());
        total += eval(f, &point) / vandermonde;
    }
    total
}

fn distinct_point(rng: &mut ChaCha8Rng, r: usize) -> Vec<BigRational> {
    loop {
        let ys: Vec<i64> = (0..r).map(|_| rng.random_range(-20..=20)).collect();
        if (0..r).all(|i| (i + 1..r).all(|j| ys[i] != ys[j])) {
            return ys.into_iter().map(rat).collect();
        }
    }
}

#[test]
fn symmetrizer_fixes_the_point_class_sign() {
    for r in 2..=5 {
        let ctx = RootContext::new(r).unwrap();
        let point = ctx.staircase_roots(1, r);
        let mut rng = ChaCha8Rng::seed_from_u64(r as u64);
        let ys = distinct_point(&mut rng, r);
        let expected = if (r * (r - 1) / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        assert_eq!(symmetrize(&ctx, &point, &ys), expected, "r={r}");
    }
}

#[test]
fn library_routes_match_the_symmetrizer() {
    for r in 2..=5 {
        let ctx = RootContext::new(r).unwrap();
        let sign = if (r * (r - 1) / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        let mut rng = ChaCha8Rng::seed_from_u64(100 + r as u64);
        for k in 0..30 {
            let fiber = ctx.flag_dim() - 1 + (k % 4) as u32;
            let f = random_xi_input(&ctx, &mut rng, fiber, (k % 3) as u32, 3);
            let f = f.kill_var(ctx.a_index(Ring::Xi));
            let roots = ctx.xi_to_roots(&f).unwrap();
            let tower = ctx.tower_pushforward_xi(&f).unwrap().value;
            let dd = ctx.dd_pushforward_xi(&f).unwrap().value;
            for _ in 0..3 {
                let ys = distinct_point(&mut rng, r);
                let mut base_point = elementary(&ys);
                base_point.push(BigRational::zero());
                let expected = &sign * symmetrize(&ctx, &roots, &ys);
                assert_eq!(eval(&tower, &base_point), expected, "r={r} tower on {f}");
                assert_eq!(eval(&dd, &base_point), expected, "r={r} dd on {f}");
            }
        }
    }
}

//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flagpush::approx::{
    self, audit, certificate_from_rows, grassmann_ratio, random_xi_input, table, weighted_degree_with,
    AuditOptions, Verdict, WeightShape,
};
use flagpush::certify::{self, example_surface_invariants, frobenius_scale, gap_threshold, LimitStatus};
use flagpush::gysin::{coefficient_formula, FormulaVariant, Permutation};
use flagpush::polyring::{binom, frac, rat, BigRational, MultiPoly};
use flagpush::{Ring, RootContext};

const RANKS: [usize; 4] = [2, 3, 4, 5];

type Criterion = (&'static str, fn() -> String);

fn top(r: usize) -> u32 {
    binom(r as u64, 2) as u32
}

fn rng(r: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 ^ (salt << 8) ^ r as u64)
}

/// Every monomial in `n` variables of total degree `d`.
fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|k| {
            compositions(n - 1, d - k).into_iter().map(move |mut rest| {
                rest.insert(0, k);
                rest
            })
        })
        .collect()
}

fn oracle_equivalence() -> String {
    let mut total = 0;
    for r in RANKS {
        let ctx = RootContext::new(r).unwrap();
        let c = top(r);
        let mut rng = rng(r, 1);
        let mut count = 0;
        // 500 inputs per rank spread over fiber degrees C-1..C+2 and base
        // weights 0..2, with the e_i kept symbolic.
        for k in 0..500 {
            let fiber = c - 1 + (k % 4) as u32;
            let base = (k / 4 % 3) as u32;
            let f = random_xi_input(&ctx, &mut rng, fiber, base, 4);
            let tower = ctx.tower_pushforward_xi(&f).unwrap();
            let dd = ctx.dd_pushforward_xi(&f).unwrap();
            assert_eq!(tower, dd, "r={r} input {f}");
            count += 1;
        }
        total += count;
    }
    format!("{total} inputs, tower = divided differences")
}

fn word_independence() -> String {
    let mut summary = Vec::new();
    for r in RANKS {
        let ctx = RootContext::new(r).unwrap();
        let words = Permutation::longest(r).reduced_words(6);
        // w_0 has exactly one reduced word in S_2 and two in S_3.
        let available = [1, 2, 16, 768][r - 2];
        assert_eq!(words.len(), available.min(6));
        let mut rng = rng(r, 2);
        for k in 0..20 {
            let f = random_xi_input(&ctx, &mut rng, top(r) + (k % 2) as u32, (k % 3) as u32, 4);
            let roots = ctx.xi_to_roots(&f).unwrap();
            let first = ctx.dd_pushforward_with_word(&roots, &words[0]).unwrap();
            for w in &words[1..] {
                assert_eq!(ctx.dd_pushforward_with_word(&roots, w).unwrap(), first, "r={r} word {w:?}");
            }
        }
        summary.push(format!("r={r}:{}", words.len()));
    }
    format!("reduced words per rank {}", summary.join(" "))
}

fn dimension_vanishing() -> String {
    let mut checked = 0;
    for r in RANKS {
        let ctx = RootContext::new(r).unwrap();
        let nv = ctx.num_vars(Ring::Xi);
        for d in 0..top(r) {
            for mut exps in compositions(r - 1, d) {
                exps.resize(nv, 0);
                let f = MultiPoly::monomial(BigRational::one(), exps);
                assert!(ctx.tower_pushforward_xi(&f).unwrap().is_zero(), "r={r} {f}");
                assert!(ctx.dd_pushforward_xi(&f).unwrap().is_zero(), "r={r} {f}");
                checked += 1;
            }
        }
        for s in 1..r {
            let xi = ctx.gr_plucker(s);
            for k in 0..ctx.gr_dim(s) {
                assert!(ctx.gr_pushforward(&xi.pow(k), s).unwrap().is_zero(), "r={r} s={s} k={k}");
                checked += 1;
            }
        }
    }
    format!("{checked} low-degree classes push to 0")
}

fn c1_multiples() -> String {
    let mut lambdas = 0;
    for r in RANKS {
        let ctx = RootContext::new(r).unwrap();
        let mut rng = rng(r, 4);
        for _ in 0..100 {
            let f = random_xi_input(&ctx, &mut rng, top(r) + 1, 0, 4);
            for out in [ctx.tower_pushforward_xi(&f).unwrap(), ctx.dd_pushforward_xi(&f).unwrap()] {
                assert!(out.multiple_of_e1().is_some(), "r={r}: {}", out.to_text());
                assert!(out.at_e1_zero().is_zero());
            }
            if !ctx.tower_pushforward_xi(&f).unwrap().is_zero() {
                lambdas += 1;
            }
        }
    }
    format!("400 inputs, {lambdas} nonzero multiples of e1, all vanish at e1 = 0")
}

fn segre_anchors() -> String {
    for r in 2..=6 {
        let ctx = RootContext::new(r).unwrap();
        let s = r - 1;
        let xi = ctx.gr_plucker(s);
        let one = MultiPoly::one(ctx.num_vars(Ring::Base));
        let e1 = ctx.e(Ring::Base, 1);
        assert_eq!(ctx.gr_pushforward(&xi.pow(r as u32 - 1), s).unwrap().value, one, "r={r}");
        assert_eq!(ctx.gr_pushforward(&xi.pow(r as u32), s).unwrap().value, e1, "r={r}");
    }
    "xi^(r-1) -> 1 and xi^r -> e1 for r = 2..6".into()
}

fn flag_degree_anchor() -> String {
    let ones = |r: usize| WeightShape::Ones.weights(r).unwrap();
    let literal = |r: usize| WeightShape::Literal.weights(r).unwrap();
    let degree = |r: usize, w: &[u32]| weighted_degree_with(&RootContext::new(r).unwrap(), w).unwrap();
    assert_eq!(degree(3, &ones(3)), rat(6));
    let mut all_ones = Vec::new();
    for r in 2..=6 {
        let d = degree(r, &ones(r));
        assert!(d > BigRational::zero(), "r={r}: {d}");
        all_ones.push(d.to_string());
    }
    assert_eq!(degree(2, &literal(2)), rat(1));
    for r in [3, 4] {
        assert_eq!(degree(r, &literal(r)), rat(0), "r={r}");
    }
    format!(
        "all-ones degrees {} (r=2..6); literal weights give 1 at r=2 and 0 at r=3,4 (finding)",
        all_ones.join(",")
    )
}

fn decay_law() -> String {
    let ms: Vec<u32> = (1..=20).collect();
    let mut rows_checked = 0;
    for r in 2..=4 {
        let rows = table(r, &WeightShape::Ones, &ms, &[1, 2, 3]).unwrap();
        assert_eq!(rows.len(), 60);
        let scaled = |row: &approx::ApproxRow, i: usize| &row.ratio[i] * rat(row.weights.m_scale as i64);
        for i in 0..r {
            let first = scaled(&rows[0], i);
            for row in &rows {
                assert_eq!(scaled(row, i), first, "r={r} i={i} m={} n={}", row.weights.m_scale, row.weights.n);
            }
        }
        for row in &rows {
            assert!(approx::kappa_sum(&row.kappa).is_zero());
            rows_checked += 1;
        }
    }
    format!("{rows_checked} rows: ratio_i*m constant in m and n, sum of kappa = 0")
}

fn grassmann_ratios() -> String {
    let mut checked = 0;
    for r in RANKS {
        for s in 1..r {
            for m in [1u32, 2, 5, 10] {
                for n in [1u32, 2] {
                    let expected = frac((s * (r - s)) as i64, m as i64);
                    assert_eq!(grassmann_ratio(r, s, m, n).unwrap(), expected, "r={r} s={s} m={m} n={n}");
                    checked += 1;
                }
            }
        }
    }
    format!("{checked} cases equal s(r-s)/m")
}

fn audit_fixtures() -> String {
    let t1 = MultiPoly::var(1, 0);
    let value = coefficient_formula(&t1, 2, FormulaVariant::PrintedMinus).unwrap().value;
    assert_eq!(value, rat(1));
    let ctx = RootContext::new(2).unwrap();
    let pushed = ctx.tower_pushforward_xi(&ctx.xi(1)).unwrap();
    assert_eq!(pushed.constant(), Some(rat(1)));

    let report = audit(&[2, 3], AuditOptions { seed: 42, samples: 4 }).unwrap();
    let rec = report.find(2, "formula-vs-oracle", Some("printed-minus")).unwrap();
    assert_eq!(rec.verdict, Verdict::Match);
    let alpha = report.find(3, "alpha-positive", Some("printed-minus")).unwrap();
    assert_eq!(alpha.verdict, Verdict::Mismatch);
    assert_eq!(alpha.computed_values["alpha"], "0");
    let beta = report.find(3, "beta-independent-of-s", Some("printed-minus")).unwrap();
    assert_eq!(beta.verdict, Verdict::Mismatch);
    assert_eq!(beta.computed_values["beta_1"], "-1");
    assert_eq!(beta.computed_values["beta_2"], "1");
    "r=2 value 1 MATCH; r=3 alpha 0, beta (-1, 1) MISMATCH".into()
}

fn certificate_loop() -> String {
    let ms: Vec<u32> = (1..=12).collect();
    for r in 2..=4 {
        let rows = table(r, &WeightShape::Ones, &ms, &[2]).unwrap();
        let cert = certificate_from_rows(&rows, 2, &frac(1, 3), &rat(1)).unwrap();
        let report = certify::check_limit_hypothesis(&cert).unwrap();
        assert_eq!(report.status, LimitStatus::Holds, "r={r}: {:?}", report.violation);

        let twice = frobenius_scale(&frobenius_scale(&cert, 3, 1).unwrap(), 3, 2).unwrap();
        assert_eq!(twice, frobenius_scale(&cert, 3, 3).unwrap());
        let mixed = frobenius_scale(&frobenius_scale(&cert, 2, 1).unwrap(), 5, 1).unwrap();
        let other = frobenius_scale(&frobenius_scale(&cert, 5, 1).unwrap(), 2, 1).unwrap();
        assert_eq!(mixed, other);
    }
    for r in 2..=6 {
        assert_eq!(gap_threshold(r), frac(1, (r * (r - 1)) as i64));
    }
    let inv = example_surface_invariants(&rat(1), &rat(0));
    assert_eq!(inv.c2, rat(-1));
    assert_eq!(inv.delta, rat(-4));
    assert!(!inv.numerically_flat);
    "generated certificates hold; thresholds 1/(r(r-1)); Frobenius composes; c2 = -1, delta = -4".into()
}

fn determinism() -> String {
    let run = || audit(&[2, 3, 4, 5], AuditOptions { seed: 42, ..AuditOptions::default() }).unwrap().to_json();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    format!("{} identical bytes", a.len())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("reduced-word independence", word_independence),
        ("dimension vanishing", dimension_vanishing),
        ("degree C+1 gives multiples of e1", c1_multiples),
        ("Segre anchors", segre_anchors),
        ("flag-degree anchor", flag_degree_anchor),
        ("decay law", decay_law),
        ("Grassmannian ratio", grassmann_ratios),
        ("formula audit fixtures", audit_fixtures),
        ("certificate loop", certificate_loop),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

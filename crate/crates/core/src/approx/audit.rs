use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    approx_row, constants, flag_dim, grassmann_ratio_with, kappa_sum, oracle_values,
    quotient_coefficients_with, random_t_input, random_xi_input, weighted_degree_with, ApproxError,
    WeightShape, WeightVector,
};
use crate::gysin::{coefficient_formula, power_of_sum, FormulaVariant, GysinError, Ring, RootContext};
use crate::polyring::{fmt_rat, frac, rat, MultiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
        }
    }
}

/// One checked claim. `variant` names the formula variant, oracle or
/// weight choice the claim was evaluated under, when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub r: usize,
    pub variant: Option<String>,
    pub claim_id: String,
    pub paper_anchor: String,
    pub computed_values: BTreeMap<String, String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    pub seed: u64,
    /// Random inputs per fiber degree in the sampled checks.
    pub samples: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { seed: 42, samples: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub samples: usize,
    pub ranks: Vec<usize>,
    /// True iff the tower and divided-difference routes agreed everywhere.
    pub oracle_agreement: bool,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "seed {} samples {} oracle agreement {}\n",
            self.seed, self.samples, self.oracle_agreement
        );
        for rec in &self.records {
            let values: Vec<String> = rec.computed_values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "r={} {} {} [{}] {} {}\n",
                rec.r,
                rec.claim_id,
                rec.variant.as_deref().unwrap_or("-"),
                rec.paper_anchor,
                rec.verdict.as_str(),
                values.join(" ")
            ));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String, ApproxError> {
        let csv_err = |e: csv::Error| ApproxError::Csv(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "variant", "claim_id", "paper_anchor", "computed_values", "verdict"])
            .map_err(csv_err)?;
        for rec in &self.records {
            let values: Vec<String> = rec.computed_values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record([
                rec.r.to_string(),
                rec.variant.clone().unwrap_or_default(),
                rec.claim_id.clone(),
                rec.paper_anchor.clone(),
                values.join(";"),
                rec.verdict.as_str().to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| ApproxError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn find(&self, r: usize, claim_id: &str, variant: Option<&str>) -> Option<&AuditRecord> {
        self.records
            .iter()
            .find(|rec| rec.r == r && rec.claim_id == claim_id && rec.variant.as_deref() == variant)
    }
}

/// Runs every claim for every rank in `ranks`. Ranks are processed in
/// parallel; the record order depends only on `ranks` and `opts`.
pub fn audit(ranks: &[usize], opts: AuditOptions) -> Result<AuditReport, ApproxError> {
    let per_rank: Vec<Vec<AuditRecord>> = ranks
        .par_iter()
        .map(|&r| audit_rank(r, opts))
        .collect::<Result<_, _>>()?;
    let records: Vec<AuditRecord> = per_rank.into_iter().flatten().collect();
    let oracle_agreement = records
        .iter()
        .filter(|rec| rec.claim_id == "oracle-agreement")
        .all(|rec| rec.verdict == Verdict::Match);
    Ok(AuditReport {
        seed: opts.seed,
        samples: opts.samples,
        ranks: ranks.to_vec(),
        oracle_agreement,
        records,
    })
}

struct Recorder {
    r: usize,
    records: Vec<AuditRecord>,
}

impl Recorder {
    fn push(&mut self, claim_id: &str, variant: Option<&str>, anchor: &str, values: Vec<(String, String)>, ok: bool) {
        self.records.push(AuditRecord {
            r: self.r,
            variant: variant.map(str::to_string),
            claim_id: claim_id.into(),
            paper_anchor: anchor.into(),
            computed_values: values.into_iter().collect(),
            verdict: Verdict::from_bool(ok),
        });
    }
}

fn kv(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

fn indexed(prefix: &str, values: &[BigRational]) -> Vec<(String, String)> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| kv(format!("{prefix}_{}", i + 1), fmt_rat(v)))
        .collect()
}

fn rank_rng(seed: u64, r: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((r as u64) << 32))
}

fn audit_rank(r: usize, opts: AuditOptions) -> Result<Vec<AuditRecord>, ApproxError> {
    let ctx = RootContext::new(r)?;
    let mut rng = rank_rng(opts.seed, r);
    let mut rec = Recorder { r, records: Vec::new() };
    let c = flag_dim(r);
    let consts = constants(&ctx)?;

    // Oracle self-agreement on symbolic inputs around the fiber dimension.
    let mut compared = 0usize;
    let mut disagreements = 0usize;
    for degree in c.saturating_sub(1)..=c + 2 {
        for _ in 0..opts.samples {
            let base_weight = rng.random_range(0..=2);
            let f = random_xi_input(&ctx, &mut rng, degree, base_weight, 3);
            let tower = ctx.tower_pushforward_xi(&f)?;
            let dd = ctx.dd_pushforward_xi(&f)?;
            compared += 1;
            if tower != dd {
                disagreements += 1;
            }
        }
    }
    let constants_agree = consts.oracles_agree();
    rec.push(
        "oracle-agreement",
        None,
        "flag-gysin.oracles",
        vec![
            kv("samples", compared),
            kv("disagreements", disagreements),
            kv("constants_agree", constants_agree),
        ],
        disagreements == 0 && constants_agree,
    );

    // Closed formulas against the tower oracle on degree-C inputs.
    let head = power_of_sum(r, c - 1);
    let mut inputs = vec![power_of_sum(r, c)];
    inputs.extend((0..r - 1).map(|s| &head * &MultiPoly::var(r - 1, s)));
    inputs.extend((0..opts.samples).map(|_| random_t_input(r, &mut rng, c, 3)));
    let mut oracle_vals = Vec::with_capacity(inputs.len());
    for f in &inputs {
        let (tower, _) = oracle_values(&ctx, f)?;
        oracle_vals.push(tower.as_constant().ok_or_else(|| {
            GysinError::Inconsistent("degree-C push-forward is not a constant".into())
        })?);
    }
    for v in FormulaVariant::ALL {
        let mut agree = 0usize;
        let mut first_bad = None;
        for (f, want) in inputs.iter().zip(&oracle_vals) {
            let got = coefficient_formula(f, r, v)?.value;
            if got == *want {
                agree += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("formula {} vs oracle {}", fmt_rat(&got), fmt_rat(want)));
            }
        }
        let mut values = vec![kv("inputs", inputs.len()), kv("agreements", agree)];
        if let Some(bad) = first_bad {
            values.push(kv("first_disagreement", bad));
        }
        rec.push(
            "formula-vs-oracle",
            Some(v.name()),
            "flag-gysin.coefficient-formula",
            values,
            agree == inputs.len(),
        );
    }

    // Degree C+1: push-forwards are multiples of e_1.
    let mut tower_ok = 0usize;
    let mut dd_ok = 0usize;
    let mut lambdas = Vec::new();
    for _ in 0..opts.samples {
        let f = ctx.t_to_xi(&random_t_input(r, &mut rng, c + 1, 3))?;
        let tower = ctx.tower_pushforward_xi(&f)?;
        let dd = ctx.dd_pushforward_xi(&f)?;
        if let Some(l) = tower.multiple_of_e1() {
            tower_ok += 1;
            lambdas.push(l);
        }
        if dd.multiple_of_e1().is_some() && dd.at_e1_zero().is_zero() {
            dd_ok += 1;
        }
    }
    for (name, ok) in [("tower", tower_ok), ("divided-difference", dd_ok)] {
        let mut values = vec![kv("inputs", opts.samples), kv("multiples_of_e1", ok)];
        if let Some(l) = lambdas.first() {
            values.push(kv("first_lambda", fmt_rat(l)));
        }
        rec.push(
            "degree-plus-one-multiple-of-c1",
            Some(name),
            "flag-gysin.c1-multiple",
            values,
            ok == opts.samples,
        );
    }

    // alpha > 0 and beta_s independent of s.
    let mut alpha_sources: Vec<(&str, BigRational, Vec<BigRational>)> = FormulaVariant::ALL
        .iter()
        .map(|v| (v.name(), consts.alpha_by_variant[v].clone(), consts.beta_by_variant[v].clone()))
        .collect();
    alpha_sources.push(("tower", consts.alpha_oracle.clone(), consts.beta_oracle.clone()));
    alpha_sources.push(("divided-difference", consts.alpha_dd.clone(), consts.beta_dd.clone()));
    for (name, alpha, _) in &alpha_sources {
        rec.push(
            "alpha-positive",
            Some(name),
            "flag-degree.alpha-positive",
            vec![kv("alpha", fmt_rat(alpha))],
            alpha.is_positive(),
        );
    }
    for (name, _, betas) in &alpha_sources {
        rec.push(
            "beta-independent-of-s",
            Some(name),
            "flag-degree.beta-constant",
            indexed("beta", betas),
            betas.windows(2).all(|w| w[0] == w[1]),
        );
    }

    // Weighted degrees and per-quotient coefficients for both weight choices.
    for shape in [WeightShape::Literal, WeightShape::Ones] {
        let weights = shape.weights(r)?;
        let variant = format!("weights:{shape}");
        let degree = weighted_degree_with(&ctx, &weights)?;
        rec.push(
            "weighted-degree-positive",
            Some(&variant),
            "flag-degree.cover-degree",
            vec![kv("degree", fmt_rat(&degree))],
            degree.is_positive(),
        );
        let kappa = quotient_coefficients_with(&ctx, &weights)?;
        let sum = kappa_sum(&kappa);
        let mut values = indexed("kappa", &kappa);
        values.push(kv("sum", fmt_rat(&sum)));
        rec.push("quotient-sum-zero", Some(&variant), "quotient-slopes.sum", values, sum.is_zero());

        let mut values = Vec::new();
        let mut ok = !degree.is_zero();
        if ok {
            let mut reference: Option<Vec<BigRational>> = None;
            for m in [1u32, 2, 3, 5] {
                for n in [1u32, 2] {
                    let w = WeightVector::new(r, weights.clone(), n, m)?;
                    let row = approx_row(&ctx, &w)?;
                    let scaled: Vec<BigRational> =
                        row.ratio.iter().map(|q| q * rat(m as i64)).collect();
                    match &reference {
                        None => reference = Some(scaled),
                        Some(first) => ok &= *first == scaled,
                    }
                }
            }
            values.extend(indexed("ratio_times_m", reference.as_deref().unwrap_or(&[])));
        } else {
            values.push(kv("degenerate", true));
        }
        rec.push("quotient-decay", Some(&variant), "quotient-slopes.decay", values, ok);
    }

    // Flag conventions: tau_s against the xi sum, and the xi/tau difference.
    let mut exact = Vec::new();
    let mut modulo_ok = true;
    for s in 1..r {
        let from_xi = ctx.xi_to_tower(&ctx.tau_from_xi(s))?;
        let diff = &from_xi - &ctx.tau(s);
        modulo_ok &= diff.kill_var(ctx.e_index(Ring::Tower, 1)).is_zero();
        exact.push(kv(format!("difference_{s}"), diff.to_text(&ctx.var_names(Ring::Tower))));
    }
    rec.push("tau-equals-xi-sum", None, "flag-convention.tau-sum", exact, modulo_ok);

    let mut values = Vec::new();
    let mut ok = true;
    let names = ctx.var_names(Ring::Xi);
    for s in 1..r {
        let rhs = &ctx.tau_from_xi(r - s) - &ctx.tau_from_xi(r - s + 1);
        let diff = &ctx.xi(s) - &rhs;
        ok &= diff.is_zero();
        values.push(kv(format!("difference_{s}"), diff.to_text(&names)));
    }
    rec.push("xi-equals-tau-difference", None, "flag-convention.xi-difference", values, ok);

    // Factor in the push-forward of c_1(Q_s): s versus r - s.
    let beta = consts.beta_oracle[0].clone();
    let factor = rat(((r - 1) as u32 * c) as i64);
    let mut q_values = Vec::new();
    for s in 1..r {
        let integrand = &ctx.t_to_xi(&head)? * &ctx.tau_from_xi(s);
        let out = ctx.tower_pushforward_xi(&integrand)?.at_e1_zero();
        let q = out.as_constant().ok_or_else(|| {
            GysinError::Inconsistent("degree-C push-forward is not a constant".into())
        })? * &factor;
        q_values.push(q);
    }
    for (name, count) in [("factor-s", false), ("factor-r-minus-s", true)] {
        let mut values = indexed("q", &q_values);
        let mut ok = true;
        for s in 1..r {
            let k = if count { r - s } else { s };
            let predicted = rat(k as i64) * &factor * &beta;
            ok &= predicted == q_values[s - 1];
            values.push(kv(format!("predicted_{s}"), fmt_rat(&predicted)));
        }
        rec.push("quotient-bundle-factor", Some(name), "quotient-slopes.q-s-factor", values, ok);
    }

    // Grassmann bundles.
    for s in 1..r {
        let variant = format!("s={s}");
        let d = ctx.gr_dim(s);
        let xi = ctx.gr_plucker(s);
        let mut vanish = true;
        for k in 0..d {
            vanish &= ctx.gr_pushforward(&xi.pow(k), s)?.is_zero();
        }
        let top = ctx.gr_pushforward(&xi.pow(d + 1), s)?;
        let lambda = top.multiple_of_e1();
        rec.push(
            "grassmann-dimension-vanishing",
            Some(&variant),
            "grassmann.vanishing",
            vec![kv("below_dimension_zero", vanish)],
            vanish,
        );
        rec.push(
            "grassmann-degree-plus-one-multiple-of-c1",
            Some(&variant),
            "grassmann.c1-multiple",
            vec![kv("lambda", lambda.as_ref().map(fmt_rat).unwrap_or_else(|| top.to_text()))],
            lambda.is_some(),
        );
        let mut values = Vec::new();
        let mut ok = true;
        for m in [1u32, 2, 5] {
            for n in [1u32, 2] {
                let got = grassmann_ratio_with(&ctx, s, m, n)?;
                ok &= got == frac(d as i64, m as i64);
                values.push(kv(format!("m{m}_n{n}"), fmt_rat(&got)));
            }
        }
        rec.push("grassmann-ratio", Some(&variant), "grassmann.ratio", values, ok);
    }
    Ok(rec.records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_matches_everywhere() {
        let report = audit(&[2], AuditOptions { seed: 1, samples: 3 }).unwrap();
        assert!(report.oracle_agreement);
        for rec in &report.records {
            assert_eq!(rec.verdict, Verdict::Match, "{rec:?}");
        }
    }

    #[test]
    fn rank_three_findings() {
        let report = audit(&[3], AuditOptions { seed: 1, samples: 2 }).unwrap();
        let alpha = report.find(3, "alpha-positive", Some("printed-minus")).unwrap();
        assert_eq!(alpha.verdict, Verdict::Mismatch);
        assert_eq!(alpha.computed_values["alpha"], "0");
        let beta = report.find(3, "beta-independent-of-s", Some("printed-minus")).unwrap();
        assert_eq!(beta.verdict, Verdict::Mismatch);
        assert_eq!(beta.computed_values["beta_1"], "-1");
        assert_eq!(beta.computed_values["beta_2"], "1");
    }
}

//! Runs a selection of theorems on one system and assembles the JSON report.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{
    check_brownawell_masser, check_davenport, check_davenport_powers, check_divisor_chain, check_fermat_catalan,
    check_generalized_fermat, check_mason, check_radical_product, check_radical_sum, check_rho_bound,
    check_shapiro_sparer, check_sigma_bound, check_special_position, exact_root, BoundError, BoundReport, CheckConfig,
    PowerSum, TheoremId,
};
use crate::exec::Exec;
use crate::parse::render;
use crate::poly::radical_degree;
use crate::sumsystem::{
    divisor_chain, hypothesis_check, mp_counts, vanishing_subsums, Diagnostic, HypothesisMode, SumError, VanishingSum,
    CHAIN_LIMIT,
};

pub const TOOL: &str = "masonabc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A vanishing sum, optionally annotated with `f_i = g_i^{e_i}` exponents.
#[derive(Debug, Clone)]
pub struct SystemInput {
    pub sum: VanishingSum,
    pub exponents: Option<Vec<u32>>,
}

impl SystemInput {
    pub fn plain(sum: VanishingSum) -> Self {
        SystemInput { sum, exponents: None }
    }
}

fn exponents_for(id: TheoremId, input: &SystemInput) -> Result<&[u32], BoundError> {
    input
        .exponents
        .as_deref()
        .ok_or_else(|| BoundError::NotApplicable(format!("{id} needs exponent annotations")))
}

pub fn check_theorem(id: TheoremId, input: &SystemInput, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    let sum = &input.sum;
    match id {
        TheoremId::Mason => check_mason(sum, cfg),
        TheoremId::ShapiroSparer => check_shapiro_sparer(sum, cfg),
        TheoremId::RadicalSum => check_radical_sum(sum, cfg),
        TheoremId::RadicalProduct => check_radical_product(sum, cfg),
        TheoremId::RhoBound => check_rho_bound(sum, cfg),
        TheoremId::SigmaBound => check_sigma_bound(sum, cfg),
        TheoremId::Davenport => check_davenport(sum, cfg),
        TheoremId::BrownawellMasser => check_brownawell_masser(sum, cfg),
        TheoremId::DivisorChain => check_divisor_chain(sum, cfg),
        TheoremId::SpecialPosition => check_special_position(sum, cfg),
        TheoremId::FermatCatalan => {
            let ps = PowerSum::from_terms(sum.fs(), exponents_for(id, input)?)?;
            check_fermat_catalan(&ps, cfg)
        }
        TheoremId::DavenportPowers => {
            // The last term is the difference; the powers are the others.
            let es = exponents_for(id, input)?;
            let n = sum.n();
            if es[n - 1] != 1 {
                return Err(BoundError::NotApplicable("the last term must carry exponent 1".into()));
            }
            let ps = PowerSum::from_terms(&sum.fs()[..n - 1], &es[..n - 1])?;
            check_davenport_powers(&ps, cfg)
        }
        TheoremId::GeneralizedFermat => {
            let es = exponents_for(id, input)?;
            let e = es[0];
            if es.iter().any(|&x| x != e) {
                return Err(BoundError::NotApplicable("exponents differ".into()));
            }
            let gs = sum
                .fs()
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    exact_root(f, e)
                        .ok_or_else(|| BoundError::NotApplicable(format!("term {} is not an {e}-th power", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            check_generalized_fermat(&gs, e, cfg)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    HypothesisFailure,
    Violation,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::HypothesisFailure => 2,
            Verdict::Violation => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub theorem: TheoremId,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub evaluated: usize,
    pub skipped: usize,
    pub hypothesis_failures: Vec<TheoremId>,
    /// `theorem: key` for every failed required entry or assertion.
    pub violations: Vec<String>,
    pub equalities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub input_digest: String,
    pub summary: RunSummary,
    pub reports: Vec<BoundReport>,
    pub skipped: Vec<Skipped>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Hex SHA-256 of the raw input.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs `theorems` in order. Inputs outside a theorem's scope are listed as skipped.
pub fn run(input: &SystemInput, theorems: &[TheoremId], cfg: &CheckConfig, raw: &[u8]) -> RunReport {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut summary = RunSummary::default();
    for &id in theorems {
        match check_theorem(id, input, cfg) {
            Ok(rep) => {
                if !rep.hypotheses_hold() {
                    summary.hypothesis_failures.push(id);
                }
                summary
                    .violations
                    .extend(rep.violations().into_iter().map(|v| format!("{id}: {v}")));
                summary
                    .equalities
                    .extend(rep.equalities().into_iter().map(|v| format!("{id}: {v}")));
                reports.push(rep);
            }
            Err(e) => skipped.push(Skipped {
                theorem: id,
                reason: e.to_string(),
            }),
        }
    }
    summary.evaluated = reports.len();
    summary.skipped = skipped.len();
    let verdict = if !summary.violations.is_empty() {
        Verdict::Violation
    } else if !summary.hypothesis_failures.is_empty() {
        Verdict::HypothesisFailure
    } else {
        Verdict::Ok
    };
    RunReport {
        tool: TOOL,
        version: VERSION,
        seed: cfg.seed,
        input_digest: digest(raw),
        summary,
        reports,
        skipped,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentView {
    pub component: String,
    pub degree: u32,
    pub terms_not_divisible: usize,
}

/// Structural facts about a sum, independent of any theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub constants: usize,
    pub span_dimension: usize,
    pub variables: Vec<String>,
    pub degrees: Vec<u32>,
    pub radical_degrees: Vec<u32>,
    pub product_radical_degree: u32,
    pub gcd: String,
    /// 0-based index sets of the vanishing proper subsums.
    pub vanishing_subsums: Vec<Vec<usize>>,
    pub hypotheses: Vec<Diagnostic>,
    pub components: Vec<ComponentView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor_chain: Option<Vec<String>>,
}

pub fn analyze(sum: &VanishingSum, names: &[String], exec: Exec) -> Result<Analysis, SumError> {
    let show = |p: &crate::poly::Polynomial| render(p, names);
    let radical_degrees = sum.fs().iter().map(radical_degree).collect::<Result<Vec<_>, _>>()?;
    let hypotheses = [
        HypothesisMode::StrictGcd,
        HypothesisMode::DegBounded,
        HypothesisMode::Pairwise,
    ]
    .into_iter()
    .map(|m| hypothesis_check(sum, m, exec))
    .collect::<Result<Vec<_>, _>>()?;
    let components = mp_counts(sum.fs())?
        .into_iter()
        .map(|c| ComponentView {
            component: show(&c.component),
            degree: c.degree,
            terms_not_divisible: c.m,
        })
        .collect();
    let divisor_chain = if sum.n() <= CHAIN_LIMIT {
        Some(divisor_chain(sum.fs(), exec)?.iter().map(show).collect())
    } else {
        None
    };
    Ok(Analysis {
        n: sum.n(),
        constants: sum.k(),
        span_dimension: sum.d(),
        variables: sum
            .variables()
            .iter()
            .map(|&v| names.get(v).cloned().unwrap_or(format!("v{v}")))
            .collect(),
        degrees: sum.degrees(),
        radical_degrees,
        product_radical_degree: radical_degree(&sum.product())?,
        gcd: show(&sum.gcd()),
        vanishing_subsums: vanishing_subsums(sum, exec)?.into_iter().map(|s| s.indices).collect(),
        hypotheses,
        components,
        divisor_chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycloField;
    use crate::poly::Polynomial;

    fn u(cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(&CycloField::rationals(), 0, cs)
    }

    fn davenport() -> SystemInput {
        let f = u(&[2, 0, 1]).pow(3);
        let g = -u(&[0, 3, 0, 1]).pow(2);
        let sum = VanishingSum::new(vec![f, g, u(&[-8, 0, -3])]).unwrap();
        SystemInput {
            sum,
            exponents: Some(vec![3, 2, 1]),
        }
    }

    #[test]
    fn davenport_runs_clean() {
        let rep = run(&davenport(), &TheoremId::ALL, &CheckConfig::default(), b"x");
        assert_eq!(rep.verdict, Verdict::Ok, "{:#?}", rep.summary);
        assert!(rep.skipped.iter().any(|s| s.theorem == TheoremId::GeneralizedFermat));
        for key in ["mason: mason", "davenport: predav d'=2", "brownawell-masser: thA"] {
            assert!(
                rep.summary.equalities.iter().any(|e| e == key),
                "{key} missing in {:?}",
                rep.summary.equalities
            );
        }
    }

    #[test]
    fn gcd_failure_is_exit_two() {
        let x = u(&[0, 1]);
        let sum = VanishingSum::new(vec![&x * &x, &x * &u(&[1, 1]), -(&x * &u(&[1, 2]))]).unwrap();
        let rep = run(
            &SystemInput::plain(sum),
            &[TheoremId::RadicalSum],
            &CheckConfig::default(),
            b"",
        );
        assert_eq!(rep.verdict.exit_code(), 2);
        assert_eq!(rep.reports[0].hypotheses[1].witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn analysis_of_davenport() {
        let a = analyze(&davenport().sum, &["x".to_string()], Exec::Sequential).unwrap();
        assert_eq!((a.n, a.span_dimension, a.product_radical_degree), (3, 2, 7));
        assert_eq!(a.radical_degrees, vec![2, 3, 2]);
        assert!(a.vanishing_subsums.is_empty());
        assert_eq!(a.divisor_chain.unwrap()[0], "1");
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}

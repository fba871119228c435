//! Example generators and an exhaustive cross-check of the verifiers.

use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{BoundError, BoundReport, CheckConfig, TheoremId};
use crate::cycfield::{CycNumber, CycloField};
use crate::driver::{check_theorem, SystemInput};
use crate::exec::Exec;
use crate::parse::render;
use crate::poly::Polynomial;
use crate::sumsystem::{SumError, VanishingSum};

mod families;
mod fermat;
pub mod oracle;
pub mod random;

pub use families::{
    davenport_pair, davenport_square_free_samples, family_factor_tight, family_residual, family_residual_in,
    residual_conductor, DavenportPair, ResidualVariant, SquareFreeSample,
};
pub use fermat::{fermat_search, FermatOutcome, FermatSolution, FermatSolutionView, FermatSpace};
use oracle::{OracleEntry, OracleVerdict, ORACLE_THEOREMS};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search space has {needed} candidates, budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Sum(#[from] SumError),
}

/// Every nonzero polynomial in variable 0 of degree at most `cap` with
/// coefficients from `coeffs`, in odometer order.
pub fn coefficient_vectors(field: &CycloField, cap: u32, coeffs: &[CycNumber]) -> Vec<Polynomial> {
    let len = cap as usize + 1;
    let base = coeffs.len();
    let total = base.pow(len as u32);
    (0..total)
        .filter_map(|mut idx| {
            let mut cs = Vec::with_capacity(len);
            for _ in 0..len {
                cs.push(coeffs[idx % base].clone());
                idx /= base;
            }
            let p = Polynomial::from_coeffs_in(field, 0, &cs.into_iter().map(Polynomial::constant).collect::<Vec<_>>());
            (!p.is_zero()).then_some(p)
        })
        .collect()
}

/// Representative of a tuple up to a common scalar and reordering: the
/// smallest sorted tuple obtained by making one term's leading coefficient 1.
pub fn canonical_form(fs: &[Polynomial]) -> Vec<Polynomial> {
    fs.iter()
        .map(|anchor| {
            let inv = anchor.leading_coeff().expect("nonzero").inv().expect("nonzero");
            let mut scaled: Vec<Polynomial> = fs.iter().map(|f| f.scale(&inv)).collect();
            scaled.sort();
            scaled
        })
        .min()
        .expect("nonempty tuple")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogFilter {
    /// Keep every distinct system.
    All,
    /// Keep systems that meet the hypotheses of at least one theorem.
    #[default]
    HypothesisPassing,
}

#[derive(Debug, Clone)]
pub struct SearchSpace {
    pub field: CycloField,
    pub terms: usize,
    pub degree_cap: u32,
    pub coefficients: Vec<CycNumber>,
    pub filter: CatalogFilter,
    /// Upper limit on raw candidate tuples before deduplication.
    pub budget: u64,
    pub theorems: Vec<TheoremId>,
}

impl SearchSpace {
    /// Rational coefficients `lo..=hi`, every theorem the oracle covers.
    pub fn integers(terms: usize, degree_cap: u32, coeffs: std::ops::RangeInclusive<i64>) -> Self {
        let field = CycloField::rationals();
        SearchSpace {
            coefficients: coeffs.map(|c| field.integer(c)).collect(),
            field,
            terms,
            degree_cap,
            filter: CatalogFilter::default(),
            budget: 10_000_000,
            theorems: ORACLE_THEOREMS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlackEntry {
    pub key: String,
    #[serde(serialize_with = "ser_str")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_str")]
    pub rhs: BigRational,
    #[serde(serialize_with = "ser_str")]
    pub slack: BigRational,
    pub required: bool,
}

fn ser_str<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

impl SlackEntry {
    fn new(key: String, lhs: BigRational, rhs: BigRational, required: bool) -> Self {
        SlackEntry {
            key,
            slack: &rhs - &lhs,
            lhs,
            rhs,
            required,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "entries", rename_all = "kebab-case")]
pub enum Outcome {
    NotApplicable,
    HypothesesFailed,
    Evaluated(Vec<SlackEntry>),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremLine {
    pub theorem: TheoremId,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogLine {
    pub terms: Vec<String>,
    pub theorems: Vec<TheoremLine>,
    /// `theorem: key` of every entry holding with equality.
    pub equalities: Vec<String>,
}

impl CatalogLine {
    pub fn outcome(&self, id: TheoremId) -> Option<&Outcome> {
        self.theorems.iter().find(|t| t.theorem == id).map(|t| &t.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub terms: Vec<String>,
    pub theorem: TheoremId,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteForce {
    pub candidates: u64,
    pub distinct: usize,
    pub hypothesis_passing: usize,
    pub catalog: Vec<CatalogLine>,
    pub violations: Vec<Finding>,
    /// Systems on which the verifiers and the oracle disagree.
    pub mismatches: Vec<Finding>,
}

impl BruteForce {
    /// One JSON object per catalog line.
    pub fn catalog_jsonl(&self) -> String {
        self.catalog
            .iter()
            .map(|l| serde_json::to_string(l).expect("serializes") + "\n")
            .collect()
    }

    /// Catalog line for the class of `fs`, if it was enumerated and kept.
    pub fn find(&self, fs: &[Polynomial]) -> Option<&CatalogLine> {
        let names = ["x".to_string()];
        let want: Vec<String> = canonical_form(fs).iter().map(|f| render(f, &names)).collect();
        self.catalog.iter().find(|l| l.terms == want)
    }
}

fn suite_outcome(res: Result<BoundReport, BoundError>) -> Outcome {
    match res {
        Err(BoundError::NotApplicable(_)) => Outcome::NotApplicable,
        Err(e) => Outcome::Error(e.to_string()),
        Ok(rep) if !rep.hypotheses_hold() => Outcome::HypothesesFailed,
        Ok(rep) => Outcome::Evaluated(
            rep.entries
                .into_iter()
                .map(|e| SlackEntry::new(e.key(), e.lhs, e.rhs, e.required))
                .collect(),
        ),
    }
}

fn oracle_outcome(v: OracleVerdict) -> Outcome {
    match v {
        OracleVerdict::NotApplicable => Outcome::NotApplicable,
        OracleVerdict::HypothesesFailed => Outcome::HypothesesFailed,
        OracleVerdict::Entries(es) => Outcome::Evaluated(
            es.into_iter()
                .map(
                    |OracleEntry {
                         key,
                         lhs,
                         rhs,
                         required,
                     }| SlackEntry::new(key, lhs, rhs, required),
                )
                .collect(),
        ),
    }
}

fn sorted(o: &Outcome) -> Outcome {
    match o {
        Outcome::Evaluated(es) => {
            let mut es = es.clone();
            es.sort_by(|a, b| a.key.cmp(&b.key));
            Outcome::Evaluated(es)
        }
        other => other.clone(),
    }
}

struct Evaluated {
    line: CatalogLine,
    passing: bool,
    violations: Vec<Finding>,
    mismatches: Vec<Finding>,
}

fn evaluate_system(fs: &[Polynomial], theorems: &[TheoremId], cfg: &CheckConfig) -> Evaluated {
    let names = ["x".to_string()];
    let terms: Vec<String> = fs.iter().map(|f| render(f, &names)).collect();
    let input = SystemInput::plain(VanishingSum::new(fs.to_vec()).expect("filtered"));
    let unis: Vec<_> = fs.iter().map(|f| f.to_uni(0)).collect();
    let mut out = Evaluated {
        line: CatalogLine {
            terms: terms.clone(),
            theorems: Vec::new(),
            equalities: Vec::new(),
        },
        passing: false,
        violations: Vec::new(),
        mismatches: Vec::new(),
    };
    for &id in theorems {
        let res = check_theorem(id, &input, cfg);
        if let Ok(rep) = &res {
            if rep.hypotheses_hold() {
                for v in rep.violations() {
                    out.violations.push(Finding {
                        terms: terms.clone(),
                        theorem: id,
                        detail: v,
                    });
                }
            }
        }
        let suite = suite_outcome(res);
        if let Some(v) = oracle::evaluate(id, &unis) {
            let theirs = oracle_outcome(v);
            if let Outcome::Evaluated(es) = &theirs {
                for e in es.iter().filter(|e| e.required && e.lhs > e.rhs) {
                    out.violations.push(Finding {
                        terms: terms.clone(),
                        theorem: id,
                        detail: format!("oracle: {} has lhs {} > rhs {}", e.key, e.lhs, e.rhs),
                    });
                }
            }
            if sorted(&suite) != sorted(&theirs) {
                out.mismatches.push(Finding {
                    terms: terms.clone(),
                    theorem: id,
                    detail: format!("verifier {suite:?} vs oracle {theirs:?}"),
                });
            }
        }
        if let Outcome::Evaluated(es) = &suite {
            out.passing = true;
            for e in es.iter().filter(|e| e.lhs == e.rhs) {
                out.line.equalities.push(format!("{id}: {}", e.key));
            }
        }
        out.line.theorems.push(TheoremLine {
            theorem: id,
            outcome: suite,
        });
    }
    out
}

/// Enumerates `(f_1, ..., f_{n-1}, -(f_1 + ... + f_{n-1}))` over the space,
/// deduplicates, and evaluates every selected theorem twice: with the
/// verifiers (sweep only) and with the independent oracle.
pub fn brute_force_bounds(space: &SearchSpace, exec: Exec) -> Result<BruteForce, SearchError> {
    if space.terms < 2 {
        return Err(SearchError::Parameter("needs at least two terms".into()));
    }
    let polys = coefficient_vectors(&space.field, space.degree_cap, &space.coefficients);
    let free = space.terms as u32 - 1;
    let candidates = (polys.len() as u64)
        .checked_pow(free)
        .filter(|&c| c <= space.budget)
        .ok_or(SearchError::Budget {
            needed: (polys.len() as u64).saturating_pow(free),
            budget: space.budget,
        })?;

    const CHUNK: u64 = 4096;
    let chunks = candidates.div_ceil(CHUNK) as usize;
    let parts: Vec<BTreeSet<Vec<Polynomial>>> = exec.map_range(chunks, |c| {
        let mut seen = BTreeSet::new();
        let lo = c as u64 * CHUNK;
        for idx in lo..(lo + CHUNK).min(candidates) {
            let mut rest = idx;
            let mut fs: Vec<Polynomial> = (0..free)
                .map(|_| {
                    let p = polys[(rest % polys.len() as u64) as usize].clone();
                    rest /= polys.len() as u64;
                    p
                })
                .collect();
            let total = fs.iter().fold(Polynomial::zero(&space.field), |acc, f| &acc + f);
            if total.is_zero() {
                continue;
            }
            fs.push(-total);
            seen.insert(canonical_form(&fs));
        }
        seen
    });
    let distinct: Vec<Vec<Polynomial>> = parts
        .into_iter()
        .fold(BTreeSet::new(), |mut acc, p| {
            acc.extend(p);
            acc
        })
        .into_iter()
        .collect();

    let cfg = CheckConfig {
        exec: Exec::Sequential,
        ..CheckConfig::sweep_only()
    };
    let results = exec.map_slice(&distinct, |fs| evaluate_system(fs, &space.theorems, &cfg));
    let mut out = BruteForce {
        candidates,
        distinct: distinct.len(),
        hypothesis_passing: 0,
        catalog: Vec::new(),
        violations: Vec::new(),
        mismatches: Vec::new(),
    };
    for r in results {
        out.violations.extend(r.violations);
        out.mismatches.extend(r.mismatches);
        if r.passing {
            out.hypothesis_passing += 1;
        }
        if r.passing || space.filter == CatalogFilter::All {
            out.catalog.push(r.line);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(&CycloField::rationals(), 0, cs)
    }

    #[test]
    fn canonical_form_ignores_scale_and_order() {
        let a = vec![u(&[0, 0, 1]), u(&[1, 2]), u(&[-1, -2, -1])];
        let two = CycloField::rationals().integer(-2);
        let b = vec![a[2].scale(&two), a[0].scale(&two), a[1].scale(&two)];
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn tiny_space_agrees() {
        let space = SearchSpace::integers(3, 1, -1..=1);
        let bf = brute_force_bounds(&space, Exec::Parallel).unwrap();
        assert_eq!(bf.candidates, 64);
        assert!(bf.mismatches.is_empty(), "{:#?}", bf.mismatches);
        assert!(bf.violations.is_empty(), "{:#?}", bf.violations);
        assert!(bf.hypothesis_passing > 0);
    }

    #[test]
    fn budget_is_enforced() {
        let mut space = SearchSpace::integers(3, 2, -2..=2);
        space.budget = 100;
        assert!(matches!(
            brute_force_bounds(&space, Exec::Sequential),
            Err(SearchError::Budget { .. })
        ));
    }
}

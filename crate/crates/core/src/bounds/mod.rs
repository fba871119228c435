//! Verifiers for the degree bounds on vanishing sums, one per theorem.
//!
//! Every verifier returns a [`BoundReport`] holding the hypothesis
//! diagnostics and the exact left and right hand sides of each inequality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exec::Exec;
use crate::poly::PolyError;
use crate::sumsystem::{Consolidation, Diagnostic, SumError};
use crate::wronskian::WronskianError;

mod constructive;
mod powers;
mod verifiers;

pub use constructive::{compute_rho_sigma, reduce_to_univariate, Reduction, RhoSigma};
pub use powers::{check_davenport_powers, check_fermat_catalan, check_generalized_fermat, exact_root, PowerSum};
pub use verifiers::{
    check_brownawell_masser, check_davenport, check_divisor_chain, check_mason, check_radical_product,
    check_radical_sum, check_rho_bound, check_shapiro_sparer, check_sigma_bound, check_special_position,
};

#[derive(Debug, Error)]
pub enum BoundError {
    /// The input does not have the shape the theorem talks about.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no admissible substitution found in {0} attempts")]
    RetryBudget(u32),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Wronskian(#[from] WronskianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Mason,
    ShapiroSparer,
    RadicalSum,
    RadicalProduct,
    RhoBound,
    SigmaBound,
    FermatCatalan,
    GeneralizedFermat,
    Davenport,
    DavenportPowers,
    BrownawellMasser,
    DivisorChain,
    SpecialPosition,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::Mason,
        TheoremId::ShapiroSparer,
        TheoremId::RadicalSum,
        TheoremId::RadicalProduct,
        TheoremId::RhoBound,
        TheoremId::SigmaBound,
        TheoremId::FermatCatalan,
        TheoremId::GeneralizedFermat,
        TheoremId::Davenport,
        TheoremId::DavenportPowers,
        TheoremId::BrownawellMasser,
        TheoremId::DivisorChain,
        TheoremId::SpecialPosition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Mason => "mason",
            TheoremId::ShapiroSparer => "shapiro-sparer",
            TheoremId::RadicalSum => "radical-sum",
            TheoremId::RadicalProduct => "radical-product",
            TheoremId::RhoBound => "rho-bound",
            TheoremId::SigmaBound => "sigma-bound",
            TheoremId::FermatCatalan => "fermat-catalan",
            TheoremId::GeneralizedFermat => "generalized-fermat",
            TheoremId::Davenport => "davenport",
            TheoremId::DavenportPowers => "davenport-powers",
            TheoremId::BrownawellMasser => "brownawell-masser",
            TheoremId::DivisorChain => "divisor-chain",
            TheoremId::SpecialPosition => "special-position",
        }
    }

    /// Theorems that read the exponent annotations of a system.
    pub fn needs_exponents(self) -> bool {
        matches!(
            self,
            TheoremId::FermatCatalan | TheoremId::GeneralizedFermat | TheoremId::DavenportPowers
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown theorem `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub exec: Exec,
    /// Seeds the substitution search of the multivariate reduction.
    pub seed: u64,
    pub retry_budget: u32,
    /// Restricts every d' sweep to this inclusive range.
    pub dprime_range: Option<(usize, usize)>,
    /// Run the lift/Wronskian pipeline for the existential parameters.
    pub constructive: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            exec: Exec::default(),
            seed: 1,
            retry_budget: 32,
            dprime_range: None,
            constructive: true,
        }
    }
}

impl CheckConfig {
    /// Sweep-only checks: skips Wronskians entirely.
    pub fn sweep_only() -> Self {
        CheckConfig {
            constructive: false,
            ..Self::default()
        }
    }

    /// `lo..=hi` intersected with the configured d' range.
    pub(crate) fn dprime_sweep(&self, lo: usize, hi: usize) -> Vec<usize> {
        let (a, b) = self.dprime_range.unwrap_or((0, usize::MAX));
        (lo.max(a)..=hi.min(b)).collect()
    }
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// One evaluated inequality `lhs <= rhs` (or `lhs < rhs` when strict).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub strict: bool,
    pub holds: bool,
    pub equality: bool,
    /// False for entries reported for information only.
    pub required: bool,
}

impl BoundEntry {
    pub fn new(label: &str, lhs: BigRational, rhs: BigRational) -> Self {
        BoundEntry {
            label: label.to_string(),
            parameter: None,
            clause: None,
            holds: lhs <= rhs,
            equality: lhs == rhs,
            lhs,
            rhs,
            strict: false,
            required: true,
        }
    }

    pub fn with_parameter(mut self, p: impl Into<String>) -> Self {
        self.parameter = Some(p.into());
        self
    }

    pub fn with_clause(mut self, c: impl Into<String>) -> Self {
        self.clause = Some(c.into());
        self
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self.holds = self.lhs < self.rhs;
        self
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn slack(&self) -> BigRational {
        &self.rhs - &self.lhs
    }

    /// `label` plus the parameter, used to match entries across engines.
    pub fn key(&self) -> String {
        match &self.parameter {
            Some(p) => format!("{} {p}", self.label),
            None => self.label.clone(),
        }
    }
}

/// A yes/no claim that a verifier checked on the way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub holds: bool,
    pub required: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.to_string(),
            holds,
            required: true,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructiveSummary {
    pub rho: usize,
    pub sigma: usize,
    pub d: usize,
    /// Operators written with `y` and the auxiliary `z1, z2, ...`.
    pub deltas: Vec<String>,
    /// Original index of each lifted position.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstitutionTrace {
    pub vars: Vec<usize>,
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub attempts: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    /// Indices of the minimal vanishing subsum the construction ran on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsum: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substitution: Option<SubstitutionTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consolidation: Option<Consolidation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Diagnostic>,
    pub entries: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructive: Option<ConstructiveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionTrace>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(theorem: TheoremId) -> Self {
        BoundReport {
            theorem,
            hypotheses: Vec::new(),
            entries: Vec::new(),
            assertions: Vec::new(),
            constructive: None,
            reduction: None,
            notes: Vec::new(),
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|d| d.passed)
    }

    /// Required entries and assertions that failed.
    pub fn violations(&self) -> Vec<String> {
        let entries = self
            .entries
            .iter()
            .filter(|e| e.required && !e.holds)
            .map(BoundEntry::key);
        let asserts = self
            .assertions
            .iter()
            .filter(|a| a.required && !a.holds)
            .map(|a| a.name.clone());
        entries.chain(asserts).collect()
    }

    pub fn equalities(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| e.equality)
            .map(BoundEntry::key)
            .collect()
    }

    pub fn entry(&self, key: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.key() == key)
    }

    /// Records hypotheses; returns false (with a note) when one fails.
    pub(crate) fn admit(&mut self, diags: Vec<Diagnostic>) -> bool {
        self.hypotheses.extend(diags);
        let ok = self.hypotheses_hold();
        if !ok {
            self.notes.push("hypotheses not met; no bound evaluated".into());
        }
        ok
    }
}

pub(crate) fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub(crate) fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `a (a - 1) / 2`, zero for `a <= 1`.
pub(crate) fn choose2(a: usize) -> BigRational {
    int(if a < 2 { 0 } else { a * (a - 1) / 2 })
}

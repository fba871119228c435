use num_rational::BigRational;

use crate::linalg::linear_rank;
use crate::poly::{coprime_basis, CoprimeBasis, Polynomial};
use crate::sumsystem::{
    combinations, consolidate_constants, divisor_chain, hypothesis_check, mp_counts, similar, vanishing_subsums,
    Diagnostic, HypothesisMode, VanishingSum, CHAIN_LIMIT,
};

use super::constructive::{compute_rho_sigma, reduce_to_univariate, RhoSigma};
use super::{choose2, int, Assertion, BoundEntry, BoundError, BoundReport, CheckConfig, ReductionTrace, TheoremId};

/// Radical and power-free degrees read off a gcd-free basis of the terms.
pub(crate) struct DegreeProfile {
    basis: CoprimeBasis,
    degrees: Vec<u32>,
}

impl DegreeProfile {
    pub(crate) fn new(fs: &[Polynomial]) -> Result<Self, BoundError> {
        let basis = coprime_basis(fs)?;
        let degrees = basis.components.iter().map(|b| b.degree().unwrap_or(0)).collect();
        Ok(DegreeProfile { basis, degrees })
    }

    /// `r_e(f_i)`.
    pub(crate) fn r_e(&self, i: usize, e: u32) -> u32 {
        self.basis.valuations[i]
            .iter()
            .zip(&self.degrees)
            .map(|(&v, &deg)| v.min(e) * deg)
            .sum()
    }

    pub(crate) fn r(&self, i: usize) -> u32 {
        self.r_e(i, 1)
    }

    pub(crate) fn r_sum(&self, range: std::ops::Range<usize>) -> u32 {
        range.map(|i| self.r(i)).sum()
    }

    /// `r_e` of the product of all terms.
    pub(crate) fn r_product_e(&self, e: u32) -> u32 {
        (0..self.degrees.len())
            .map(|j| {
                let total: u32 = self.basis.valuations.iter().map(|v| v[j]).sum();
                total.min(e) * self.degrees[j]
            })
            .sum()
    }

    pub(crate) fn r_product(&self) -> u32 {
        self.r_product_e(1)
    }
}

pub(crate) fn not_all_constant(sum: &VanishingSum) -> Diagnostic {
    Diagnostic::check(
        "not-all-constant",
        !sum.all_constant(),
        format!("{} of {} terms constant", sum.k(), sum.n()),
    )
}

pub(crate) fn gcd_one(sum: &VanishingSum) -> Diagnostic {
    let g = sum.gcd();
    if g.is_one() {
        Diagnostic::pass("gcd-one", "the terms are coprime")
    } else {
        Diagnostic::fail(
            "gcd-one",
            Some((0..sum.n()).collect()),
            format!("common factor of degree {}", g.degree().unwrap_or(0)),
        )
    }
}

pub(crate) fn no_vanishing_subsum(sum: &VanishingSum, cfg: &CheckConfig) -> Result<Diagnostic, BoundError> {
    let subs = vanishing_subsums(sum, cfg.exec)?;
    Ok(match subs.first() {
        None => Diagnostic::pass("no-vanishing-proper-subsum", "no proper subsum vanishes"),
        Some(s) => Diagnostic::fail(
            "no-vanishing-proper-subsum",
            Some(s.indices.clone()),
            format!("{} proper subsums vanish", subs.len()),
        ),
    })
}

pub(crate) fn not_all_similar(sum: &VanishingSum) -> Diagnostic {
    let fs = sum.fs();
    Diagnostic::check(
        "not-all-similar",
        fs.iter().any(|f| !similar(f, &fs[0])),
        "some pair of terms is not proportional",
    )
}

fn strict_gcd(sum: &VanishingSum, cfg: &CheckConfig) -> Result<Diagnostic, BoundError> {
    Ok(hypothesis_check(sum, HypothesisMode::StrictGcd, cfg.exec)?)
}

fn require_terms(sum: &VanishingSum, min: usize) -> Result<(), BoundError> {
    if sum.n() < min {
        return Err(BoundError::NotApplicable(format!(
            "needs at least {min} terms, got {}",
            sum.n()
        )));
    }
    Ok(())
}

fn max_degree(sum: &VanishingSum) -> BigRational {
    int(sum.max_degree())
}

/// rho/sigma with the trace of how the sum was brought into the lift's regime.
pub(crate) struct Constructed {
    pub rs: RhoSigma,
    pub trace: ReductionTrace,
}

/// Restricts to the smallest vanishing subsum holding a term of maximal
/// degree, substitutes a generic line if it is multivariate, then runs the lift.
pub(crate) fn construct(sum: &VanishingSum, cfg: &CheckConfig) -> Result<Constructed, BoundError> {
    let top = sum.max_degree_index();
    let subs = vanishing_subsums(sum, cfg.exec)?;
    let mut trace = ReductionTrace::default();
    let inner = match subs.iter().find(|s| s.indices.contains(&top)) {
        Some(s) => {
            trace.subsum = Some(s.indices.clone());
            VanishingSum::new(s.indices.iter().map(|&i| sum.fs()[i].clone()).collect())?
        }
        None => sum.clone(),
    };
    let uni = if inner.univariate_variable().is_some() {
        inner
    } else {
        let red = reduce_to_univariate(&inner, cfg)?;
        trace.substitution = Some(red.trace());
        red.reduced
    };
    let rs = compute_rho_sigma(&uni, cfg.exec)?;
    Ok(Constructed { rs, trace })
}

pub fn check_mason(sum: &VanishingSum, _cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    if sum.n() != 3 {
        return Err(BoundError::NotApplicable("needs exactly three terms".into()));
    }
    if sum.univariate_variable().is_none() {
        return Err(BoundError::NotApplicable("needs univariate terms".into()));
    }
    let mut rep = BoundReport::new(TheoremId::Mason);
    let pair = hypothesis_check(sum, HypothesisMode::Pairwise, _cfg.exec)?;
    if !rep.admit(vec![not_all_constant(sum), pair]) {
        return Ok(rep);
    }
    let prof = DegreeProfile::new(sum.fs())?;
    rep.entries.push(BoundEntry::new(
        "mason",
        max_degree(sum),
        int(prof.r_product()) - int(1),
    ));
    Ok(rep)
}

pub fn check_shapiro_sparer(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::ShapiroSparer);
    let pair = hypothesis_check(sum, HypothesisMode::Pairwise, cfg.exec)?;
    if !rep.admit(vec![not_all_constant(sum), pair]) {
        return Ok(rep);
    }
    let (n, k) = (sum.n() as i64, sum.k() as i64);
    let r = int(DegreeProfile::new(sum.fs())?.r_product());
    let lhs = max_degree(sum);
    rep.entries.push(BoundEntry::new(
        "shapiro-sparer",
        lhs.clone(),
        int(n - 2) * (&r - int(1)),
    ));
    if k <= 1 {
        let rhs = int(n - 2) * (&r - super::ratio(n - 1, 2));
        rep.entries
            .push(BoundEntry::new("refined", lhs.clone(), rhs).with_parameter("k<=1"));
    }
    if k >= 1 {
        let rhs = int(n - k - 1) * (&r - super::ratio(n - k, 2));
        rep.entries
            .push(BoundEntry::new("refined", lhs, rhs).with_parameter("k>=1"));
    }
    Ok(rep)
}

pub fn check_radical_sum(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::RadicalSum);
    if !rep.admit(vec![not_all_constant(sum), strict_gcd(sum, cfg)?]) {
        return Ok(rep);
    }
    let prof = DegreeProfile::new(sum.fs())?;
    let rhs = int(sum.n() as i64 - 2) * (int(prof.r_sum(0..sum.n())) - int(1));
    rep.entries.push(BoundEntry::new("radical-sum", max_degree(sum), rhs));
    Ok(rep)
}

pub fn check_radical_product(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::RadicalProduct);
    if !rep.admit(vec![not_all_constant(sum), strict_gcd(sum, cfg)?]) {
        return Ok(rep);
    }
    let prof = DegreeProfile::new(sum.fs())?;
    let rhs = choose2(sum.n() - 1) * (int(prof.r_product()) - int(1));
    rep.entries
        .push(BoundEntry::new("radical-product", max_degree(sum), rhs));
    Ok(rep)
}

fn klhy_rhs(prof: &DegreeProfile, n: usize, rho: usize) -> BigRational {
    let total: u32 = (0..n).map(|i| prof.r_e(i, rho as u32 - 1)).sum();
    int(total) - choose2(rho)
}

fn klahy_rhs(prof: &DegreeProfile, sigma: usize) -> BigRational {
    int(prof.r_product_e(sigma as u32)) - int(sigma)
}

fn attach_construction(rep: &mut BoundReport, c: &Constructed, d: usize) {
    rep.assertions.extend(c.rs.assertions());
    rep.assertions.push(Assertion::new(
        "rho-within-span",
        c.rs.rho <= d,
        format!("rho {} <= d {d}", c.rs.rho),
    ));
    rep.constructive = Some(c.rs.summary());
    rep.reduction = Some(c.trace.clone());
}

/// Existential bound in rho, the d' sweep, and the constructive rho.
pub fn check_rho_bound(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::RhoBound);
    if !rep.admit(vec![not_all_constant(sum), strict_gcd(sum, cfg)?]) {
        return Ok(rep);
    }
    let (n, k, d) = (sum.n(), sum.k(), sum.d());
    let prof = DegreeProfile::new(sum.fs())?;
    let lhs = max_degree(sum);
    if cfg.constructive {
        let c = construct(sum, cfg)?;
        let rho = c.rs.rho;
        rep.entries
            .push(BoundEntry::new("klhy", lhs.clone(), klhy_rhs(&prof, n, rho)).with_parameter(format!("rho={rho}")));
        attach_construction(&mut rep, &c, d);
    }
    if let Some(best) = (2..=d).map(|rho| klhy_rhs(&prof, n, rho)).max() {
        rep.entries
            .push(BoundEntry::new("klhy-exists", lhs.clone(), best).with_parameter(format!("rho in [2,{d}]")));
    }
    let r = int(prof.r_sum(0..n));
    let sweep = cfg.dprime_sweep(d, n - k + 1);
    if sweep.is_empty() {
        rep.notes.push("range-empty: no admissible d'".into());
    }
    for dp in sweep {
        let rhs = int(dp as i64 - 1) * (&r - super::ratio(dp as i64, 2));
        let clause = if dp + k <= n { "d'<=n-k" } else { "d'=n-k+1" };
        rep.entries.push(
            BoundEntry::new("kl", lhs.clone(), rhs)
                .with_parameter(format!("d'={dp}"))
                .with_clause(clause),
        );
    }
    Ok(rep)
}

/// Existential bound in sigma, the d' = d case of the product bound, and the constructive sigma.
pub fn check_sigma_bound(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::SigmaBound);
    if !rep.admit(vec![not_all_constant(sum), strict_gcd(sum, cfg)?]) {
        return Ok(rep);
    }
    let d = sum.d();
    let prof = DegreeProfile::new(sum.fs())?;
    let lhs = max_degree(sum);
    if cfg.constructive {
        let c = construct(sum, cfg)?;
        let sigma = c.rs.sigma;
        rep.entries.push(
            BoundEntry::new("klahy", lhs.clone(), klahy_rhs(&prof, sigma)).with_parameter(format!("sigma={sigma}")),
        );
        attach_construction(&mut rep, &c, d);
    }
    let top = d * d.saturating_sub(1) / 2;
    if let Some(best) = (1..=top).map(|s| klahy_rhs(&prof, s)).max() {
        rep.entries
            .push(BoundEntry::new("klahy-exists", lhs.clone(), best).with_parameter(format!("sigma in [1,{top}]")));
    }
    let r = int(prof.r_product()) - int(1);
    let hi = cfg.dprime_range.map_or(d, |(_, b)| b.max(d));
    for dp in cfg.dprime_sweep(d, hi) {
        rep.entries
            .push(BoundEntry::new("kla", lhs.clone(), choose2(dp) * &r).with_parameter(format!("d'={dp}")));
    }
    Ok(rep)
}

fn predav_entries(
    sum: &VanishingSum,
    cfg: &CheckConfig,
    label: &str,
    required: bool,
) -> Result<(Vec<BoundEntry>, Vec<Assertion>), BoundError> {
    let (n, k, d) = (sum.n(), sum.k(), sum.d());
    let degs = sum.degrees();
    let head = *degs[..n - 1].iter().max().expect("n >= 2");
    let lhs = int(head as i64 - degs[n - 1] as i64);
    let prof = DegreeProfile::new(sum.fs())?;
    let r = int(prof.r_sum(0..n - 1));
    let coprime = sum.gcd().is_one();
    let mut entries = Vec::new();
    let mut asserts = Vec::new();
    for dp in cfg.dprime_sweep(d, n.saturating_sub(k)) {
        let rhs = int(dp as i64 - 1) * (&r - super::ratio(dp as i64, 2));
        let mut e = BoundEntry::new(label, lhs.clone(), rhs).with_parameter(format!("d'={dp}"));
        if !required {
            e = e.informational();
        }
        if e.equality {
            let mut a = Assertion::new("equality-needs-gcd-one", coprime, format!("equality at d'={dp}"));
            a.required = required;
            asserts.push(a);
        }
        entries.push(e);
    }
    Ok((entries, asserts))
}

pub fn check_davenport(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let mut rep = BoundReport::new(TheoremId::Davenport);
    let bounded = hypothesis_check(sum, HypothesisMode::DegBounded, cfg.exec)?;
    if !rep.admit(vec![not_all_similar(sum), bounded]) {
        return Ok(rep);
    }
    let (entries, asserts) = predav_entries(sum, cfg, "predav", true)?;
    if entries.is_empty() {
        rep.notes.push("range-empty: no admissible d'".into());
    }
    rep.entries.extend(entries);
    rep.assertions.extend(asserts);

    let n = sum.n();
    let has_constants = (0..n - 1).any(|i| sum.fs()[i].is_constant());
    if !sum.fs()[n - 1].is_constant() && has_constants {
        let (merged, consolidation) = consolidate_constants(sum)?;
        rep.reduction = Some(ReductionTrace {
            consolidation: Some(consolidation),
            ..ReductionTrace::default()
        });
        let ok = merged.n() >= 3
            && not_all_similar(&merged).passed
            && hypothesis_check(&merged, HypothesisMode::DegBounded, cfg.exec)?.passed;
        if ok {
            let (entries, asserts) = predav_entries(&merged, cfg, "predav-consolidated", false)?;
            rep.entries.extend(entries);
            rep.assertions.extend(asserts);
        } else {
            rep.notes.push("consolidated sum falls outside the hypotheses".into());
        }
    }
    Ok(rep)
}

pub fn check_brownawell_masser(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    if sum.univariate_variable().is_none() {
        return Err(BoundError::NotApplicable("needs univariate terms".into()));
    }
    let mut rep = BoundReport::new(TheoremId::BrownawellMasser);
    if !rep.admit(vec![
        not_all_constant(sum),
        gcd_one(sum),
        no_vanishing_subsum(sum, cfg)?,
    ]) {
        return Ok(rep);
    }
    let n = sum.n();
    let c = choose2(n - 1);
    let mut rhs = -c.clone();
    for b in mp_counts(sum.fs())? {
        rhs += int(b.degree) * (&c - choose2(b.m.saturating_sub(1)));
    }
    if n == 3 && hypothesis_check(sum, HypothesisMode::Pairwise, cfg.exec)?.passed {
        let r = int(DegreeProfile::new(sum.fs())?.r_product()) - int(1);
        rep.assertions.push(Assertion::new(
            "three-term-consistency",
            rhs == r,
            format!("rhs {rhs} against r(f1 f2 f3) - 1 = {r}"),
        ));
    }
    rep.entries.push(BoundEntry::new("thA", max_degree(sum), rhs));
    Ok(rep)
}

pub fn check_divisor_chain(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    if sum.univariate_variable().is_none() {
        return Err(BoundError::NotApplicable("needs univariate terms".into()));
    }
    let mut rep = BoundReport::new(TheoremId::DivisorChain);
    if !rep.admit(vec![
        not_all_constant(sum),
        gcd_one(sum),
        no_vanishing_subsum(sum, cfg)?,
    ]) {
        return Ok(rep);
    }
    let n = sum.n();
    let h = divisor_chain(sum.fs(), cfg.exec)?;
    let hp = DegreeProfile::new(&h)?;
    let fp = DegreeProfile::new(sum.fs())?;
    let c = choose2(n - 1);
    let weighted: i64 = (0..n).map(|i| (i as i64 - 1) * hp.r(i) as i64).sum();
    let power_free: u32 = (2..n).map(|i| hp.r_e(i, i as u32 - 1)).sum();
    let lhs = max_degree(sum);
    rep.entries
        .push(BoundEntry::new("thaa", lhs.clone(), int(weighted) - &c));
    rep.entries
        .push(BoundEntry::new("thaa-power-free", lhs, int(power_free) - &c));
    let chained = h.windows(2).all(|w| w[0].divides(&w[1]));
    rep.assertions
        .push(Assertion::new("chain-divides", chained, "h_1 | h_2 | ... | h_n"));
    let (rh, rf) = (hp.r_sum(0..n), fp.r_sum(0..n));
    rep.assertions.push(Assertion::new(
        "radical-sum-identity",
        rh == rf,
        format!("sum r(h_i) = {rh}, sum r(f_i) = {rf}"),
    ));
    Ok(rep)
}

pub fn check_special_position(sum: &VanishingSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    require_terms(sum, 3)?;
    let (n, d) = (sum.n(), sum.d());
    if n > CHAIN_LIMIT {
        return Err(BoundError::Sum(crate::sumsystem::SumError::SubsetLimit {
            n,
            limit: CHAIN_LIMIT,
        }));
    }
    if let Some(bad) = combinations(n, d).into_iter().find(|set| {
        let part: Vec<Polynomial> = set.iter().map(|&i| sum.fs()[i].clone()).collect();
        linear_rank(&part) < d
    }) {
        let shown: Vec<String> = bad.iter().map(|i| (i + 1).to_string()).collect();
        return Err(BoundError::NotApplicable(format!(
            "terms {{{}}} are dependent",
            shown.join(",")
        )));
    }
    let mut rep = BoundReport::new(TheoremId::SpecialPosition);
    if !rep.admit(vec![not_all_constant(sum), strict_gcd(sum, cfg)?]) {
        return Ok(rep);
    }
    let prof = DegreeProfile::new(sum.fs())?;
    let lhs = max_degree(sum);
    let scale = BigRational::new(1.into(), ((n - d) as i64).into());
    let classical_sigma = d * (d - 1) / 2;
    rep.entries
        .push(BoundEntry::new("dset", lhs.clone(), &scale * klhy_rhs(&prof, n, d)).with_parameter(format!("rho={d}")));
    rep.entries.push(
        BoundEntry::new("dseta", lhs.clone(), &scale * klahy_rhs(&prof, classical_sigma))
            .with_parameter(format!("sigma={classical_sigma}")),
    );
    if cfg.constructive {
        let c = construct(sum, cfg)?;
        let (rho, sigma) = (c.rs.rho, c.rs.sigma);
        if rho != d {
            rep.entries.push(
                BoundEntry::new("dset", lhs.clone(), &scale * klhy_rhs(&prof, n, rho))
                    .with_parameter(format!("rho={rho}"))
                    .informational(),
            );
        }
        if sigma != classical_sigma {
            rep.entries.push(
                BoundEntry::new("dseta", lhs, &scale * klahy_rhs(&prof, sigma))
                    .with_parameter(format!("sigma={sigma}"))
                    .informational(),
            );
        }
        attach_construction(&mut rep, &c, d);
    }
    Ok(rep)
}

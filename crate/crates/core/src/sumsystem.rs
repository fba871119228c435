//! Vanishing sums `f_1 + ... + f_n = 0` and the structures derived from them.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cycfield::{CycNumber, CycloField};
use crate::exec::Exec;
use crate::linalg::{coefficient_rows, express_in_span, linear_rank, linear_relations};
use crate::poly::{coprime_basis, gcd_many, lcm, PolyError, Polynomial};

pub const SUBSUM_LIMIT: usize = 20;
pub const CHAIN_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("a vanishing sum needs at least {min} terms, got {got}")]
    TooFewTerms { min: usize, got: usize },
    #[error("term {0} is the zero polynomial")]
    ZeroMember(usize),
    #[error("the terms do not sum to zero")]
    NonzeroSum,
    #[error("terms live in different fields")]
    MixedFields,
    #[error("{n} terms exceed the subset enumeration limit of {limit}")]
    SubsetLimit { n: usize, limit: usize },
    #[error("cannot lift: {0}")]
    InvalidLift(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingSum {
    fs: Vec<Polynomial>,
    k: usize,
    d: usize,
}

impl VanishingSum {
    pub fn new(fs: Vec<Polynomial>) -> Result<Self, SumError> {
        if fs.len() < 2 {
            return Err(SumError::TooFewTerms { min: 2, got: fs.len() });
        }
        let field = fs[0].field().clone();
        if fs.iter().any(|f| *f.field() != field) {
            return Err(SumError::MixedFields);
        }
        if let Some(i) = fs.iter().position(Polynomial::is_zero) {
            return Err(SumError::ZeroMember(i));
        }
        let total = fs.iter().fold(Polynomial::zero(&field), |acc, f| &acc + f);
        if !total.is_zero() {
            return Err(SumError::NonzeroSum);
        }
        let k = fs.iter().filter(|f| f.is_constant()).count();
        let d = linear_rank(&fs);
        Ok(VanishingSum { fs, k, d })
    }

    pub fn fs(&self) -> &[Polynomial] {
        &self.fs
    }

    pub fn n(&self) -> usize {
        self.fs.len()
    }

    /// Number of constant terms.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension of the span of the terms.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &CycloField {
        self.fs[0].field()
    }

    pub fn variables(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.fs.iter().flat_map(|f| f.variables()).collect();
        set.into_iter().collect()
    }

    /// The single variable of a univariate sum (`Some(None)` when all terms are constant).
    pub fn univariate_variable(&self) -> Option<Option<usize>> {
        match self.variables().as_slice() {
            [] => Some(None),
            [v] => Some(Some(*v)),
            _ => None,
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.fs.iter().map(|f| f.degree().expect("nonzero")).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().expect("nonempty")
    }

    /// First index attaining the maximal degree.
    pub fn max_degree_index(&self) -> usize {
        let m = self.max_degree();
        self.degrees().iter().position(|&d| d == m).expect("attained")
    }

    pub fn product(&self) -> Polynomial {
        self.fs.iter().fold(Polynomial::one(self.field()), |acc, f| &acc * f)
    }

    pub fn gcd(&self) -> Polynomial {
        gcd_many(&self.fs).expect("nonzero terms")
    }

    pub fn all_constant(&self) -> bool {
        self.k == self.n()
    }

    pub fn subset_gcd(&self, idx: &[usize]) -> Polynomial {
        gcd_many(idx.iter().map(|&i| &self.fs[i])).expect("nonzero terms")
    }
}

/// `a = c * b` for a nonzero scalar `c`.
pub fn similar(a: &Polynomial, b: &Polynomial) -> bool {
    match (a.leading_coeff(), b.leading_coeff()) {
        (Some(la), Some(lb)) => a.scale(lb) == b.scale(la),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subsum {
    pub indices: Vec<usize>,
    pub minimal: bool,
}

/// Nonempty proper index sets whose terms sum to zero, ordered by size then
/// lexicographically.
pub fn vanishing_subsums(sum: &VanishingSum, exec: Exec) -> Result<Vec<Subsum>, SumError> {
    let n = sum.n();
    if n > SUBSUM_LIMIT {
        return Err(SumError::SubsetLimit { n, limit: SUBSUM_LIMIT });
    }
    let rows = coefficient_rows(sum.field(), sum.fs());
    let width = rows[0].len();
    let low_bits = n.min(12);
    let high_count = 1usize << (n - low_bits);
    let zero = sum.field().zero();

    let chunks = exec.map_range(high_count, |high| {
        let mut acc: Vec<CycNumber> = vec![zero.clone(); width];
        for i in 0..n - low_bits {
            if high >> i & 1 == 1 {
                add_row(&mut acc, &rows[low_bits + i], false);
            }
        }
        let mut nonzero = acc.iter().filter(|c| !c.is_zero()).count();
        let mut found = Vec::new();
        let mut gray = 0usize;
        for step in 0usize..(1 << low_bits) {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                let removing = gray >> bit & 1 == 1;
                gray ^= 1 << bit;
                for (c, r) in acc.iter_mut().zip(&rows[bit]) {
                    if r.is_zero() {
                        continue;
                    }
                    let was = !c.is_zero();
                    *c = if removing { &*c - r } else { &*c + r };
                    match (was, c.is_zero()) {
                        (true, true) => nonzero -= 1,
                        (false, false) => nonzero += 1,
                        _ => {}
                    }
                }
            }
            let mask = gray | high << low_bits;
            if nonzero == 0 && mask != 0 && mask != (1 << n) - 1 {
                found.push(mask);
            }
        }
        found
    });
    let masks: Vec<usize> = chunks.into_iter().flatten().collect();
    let mut out: Vec<Subsum> = masks
        .iter()
        .map(|&m| Subsum {
            indices: (0..n).filter(|i| m >> i & 1 == 1).collect(),
            minimal: !masks.iter().any(|&o| o != m && o & m == o),
        })
        .collect();
    out.sort_by(|a, b| {
        a.indices
            .len()
            .cmp(&b.indices.len())
            .then_with(|| a.indices.cmp(&b.indices))
    });
    Ok(out)
}

fn add_row(acc: &mut [CycNumber], row: &[CycNumber], negate: bool) {
    for (c, r) in acc.iter_mut().zip(row) {
        if !r.is_zero() {
            *c = if negate { &*c - r } else { &*c + r };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisMode {
    /// Every vanishing subsum, the full sum included, has gcd 1.
    StrictGcd,
    /// Every vanishing subsum has gcd of degree at most `deg f_n`.
    DegBounded,
    /// All pairs of terms are coprime.
    Pairwise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub passed: bool,
    /// Offending index set (0-based) when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub detail: String,
}

impl Diagnostic {
    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        Diagnostic {
            name: name.to_string(),
            passed: true,
            witness: None,
            detail: detail.into(),
        }
    }

    pub fn fail(name: &str, witness: Option<Vec<usize>>, detail: impl Into<String>) -> Self {
        Diagnostic {
            name: name.to_string(),
            passed: false,
            witness,
            detail: detail.into(),
        }
    }

    pub fn check(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, None, detail)
        }
    }
}

fn one_based(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn hypothesis_check(sum: &VanishingSum, mode: HypothesisMode, exec: Exec) -> Result<Diagnostic, SumError> {
    let n = sum.n();
    match mode {
        HypothesisMode::Pairwise => {
            for i in 0..n {
                for j in i + 1..n {
                    let g = sum.subset_gcd(&[i, j]);
                    if !g.is_constant() {
                        return Ok(Diagnostic::fail(
                            "pairwise-coprime",
                            Some(vec![i, j]),
                            format!(
                                "terms {} share a factor of degree {}",
                                one_based(&[i, j]),
                                g.degree().unwrap_or(0)
                            ),
                        ));
                    }
                }
            }
            Ok(Diagnostic::pass("pairwise-coprime", "all pairs coprime"))
        }
        HypothesisMode::StrictGcd | HypothesisMode::DegBounded => {
            let mut sets: Vec<Vec<usize>> = vanishing_subsums(sum, exec)?.into_iter().map(|s| s.indices).collect();
            sets.push((0..n).collect());
            let bound = sum.fs()[n - 1].degree().expect("nonzero");
            let name = if mode == HypothesisMode::StrictGcd {
                "vanishing-subsums-coprime"
            } else {
                "vanishing-subsum-gcd-degree-bounded"
            };
            for set in &sets {
                let g = sum.subset_gcd(set);
                let deg = g.degree().unwrap_or(0);
                let bad = match mode {
                    HypothesisMode::StrictGcd => deg > 0,
                    _ => deg > bound,
                };
                if bad {
                    return Ok(Diagnostic::fail(
                        name,
                        Some(set.clone()),
                        format!("vanishing subsum {} has gcd of degree {deg}", one_based(set)),
                    ));
                }
            }
            Ok(Diagnostic::pass(
                name,
                format!("{} vanishing subsums checked", sets.len()),
            ))
        }
    }
}

/// Result of folding constant terms into the last term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Consolidation {
    /// Original indices (0-based) of the constants that were removed.
    pub removed: Vec<usize>,
    /// Original index of the term that absorbed them.
    pub absorbed_into: usize,
    /// Original index of each surviving term.
    pub kept: Vec<usize>,
}

/// Removes every constant term except the last one and adds it to the last term.
pub fn consolidate_constants(sum: &VanishingSum) -> Result<(VanishingSum, Consolidation), SumError> {
    let n = sum.n();
    let removed: Vec<usize> = (0..n - 1).filter(|&i| sum.fs()[i].is_constant()).collect();
    let mut last = sum.fs()[n - 1].clone();
    for &i in &removed {
        last = &last + &sum.fs()[i];
    }
    let kept: Vec<usize> = (0..n).filter(|i| !removed.contains(i)).collect();
    let fs: Vec<Polynomial> = kept
        .iter()
        .map(|&i| if i == n - 1 { last.clone() } else { sum.fs()[i].clone() })
        .collect();
    let out = VanishingSum::new(fs)?;
    Ok((
        out,
        Consolidation {
            removed,
            absorbed_into: n - 1,
            kept,
        },
    ))
}

/// A univariate vanishing sum with its linear relations removed by
/// multiplying each term with a linear form in auxiliary variables.
/// Layout: `y` is variable 0 and `z_t` (`t = 1..n-d`) is variable `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSystem {
    /// The univariate terms in lifted order, written in variable 0.
    pub base: Vec<Polynomial>,
    /// `order[p]` is the original index of lifted position `p`.
    pub order: Vec<usize>,
    /// Span dimension; positions `0..d` form a basis.
    pub d: usize,
    /// `lambda[j][i]`: coefficient of basis term `i` in term `d + j`.
    pub lambda: Vec<Vec<CycNumber>>,
    pub lifted: Vec<Polynomial>,
}

impl LiftedSystem {
    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Sums of the lambda columns; each should be -1.
    pub fn column_sums(&self) -> Vec<CycNumber> {
        let field = self.base[0].field();
        (0..self.d)
            .map(|i| self.lambda.iter().fold(field.zero(), |acc, row| &acc + &row[i]))
            .collect()
    }
}

/// Lifts a univariate sum with gcd 1 and no vanishing proper subsum.
/// A term of maximal degree is moved to the last position.
pub fn lift(sum: &VanishingSum, exec: Exec) -> Result<LiftedSystem, SumError> {
    let var = sum
        .univariate_variable()
        .ok_or_else(|| SumError::InvalidLift("the sum is not univariate".into()))?;
    if !sum.gcd().is_one() {
        return Err(SumError::InvalidLift("the terms have a common factor".into()));
    }
    if !vanishing_subsums(sum, exec)?.is_empty() {
        return Err(SumError::InvalidLift("a proper subsum vanishes".into()));
    }
    let n = sum.n();
    let to_y = |f: &Polynomial| match var {
        Some(v) => f.map_variables(|w| if w == v { 0 } else { w }),
        None => f.clone(),
    };
    let top = sum.max_degree_index();
    let mut pre: Vec<usize> = (0..n).filter(|&i| i != top).collect();
    pre.push(top);

    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Polynomial> = Vec::new();
    for &i in &pre {
        let mut trial = chosen.clone();
        trial.push(sum.fs()[i].clone());
        if linear_rank(&trial) == trial.len() {
            chosen = trial;
            basis.push(i);
        }
    }
    let d = basis.len();
    let mut order = basis.clone();
    order.extend(pre.iter().copied().filter(|i| !basis.contains(i)));

    let base: Vec<Polynomial> = order.iter().map(|&i| to_y(&sum.fs()[i])).collect();
    let field = sum.field().clone();
    let lambda: Vec<Vec<CycNumber>> = (d..n)
        .map(|j| express_in_span(&base[j], &base[..d]).expect("basis spans every term"))
        .collect();

    let z = |t: usize| Polynomial::var(&field, t);
    let mut lifted = Vec::with_capacity(n);
    for (i, b) in base.iter().enumerate() {
        let form = if i < d {
            lambda
                .iter()
                .enumerate()
                .fold(Polynomial::zero(&field), |acc, (j, row)| {
                    &acc + &z(j + 1).scale(&row[i])
                })
        } else {
            -&z(i - d + 1)
        };
        lifted.push(&form * b);
    }
    Ok(LiftedSystem {
        base,
        order,
        d,
        lambda,
        lifted,
    })
}

/// Checks of the three defining properties of a lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub sum_vanishes: bool,
    pub column_sums_minus_one: bool,
    pub only_all_ones_relation: bool,
}

impl LiftCheck {
    pub fn all(&self) -> bool {
        self.sum_vanishes && self.column_sums_minus_one && self.only_all_ones_relation
    }
}

pub fn check_lift(lifted: &LiftedSystem) -> LiftCheck {
    let field = lifted.base[0].field();
    let total = lifted.lifted.iter().fold(Polynomial::zero(field), |acc, f| &acc + f);
    let minus_one = field.integer(-1);
    let rels = linear_relations(&lifted.lifted);
    let all_ones = rels.len() == 1 && {
        let r = &rels[0];
        !r[0].is_zero() && r.iter().all(|c| *c == r[0])
    };
    LiftCheck {
        sum_vanishes: total.is_zero(),
        column_sums_minus_one: lifted.column_sums().iter().all(|c| *c == minus_one),
        only_all_ones_relation: all_ones,
    }
}

/// The bipartite graph joining basis position `i` to non-basis position
/// `d + j` whenever `lambda[j][i] != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<Vec<usize>>,
    pub connected: bool,
}

pub fn connectivity_witness(d: usize, lambda: &[Vec<CycNumber>]) -> Connectivity {
    let n = d + lambda.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (j, row) in lambda.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                edges.push((i, d + j));
                let (a, b) = (find(&mut parent, i), find(&mut parent, d + j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<usize> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        match root_of.iter().position(|&x| x == r) {
            Some(k) => components[k].push(v),
            None => {
                root_of.push(r);
                components.push(vec![v]);
            }
        }
    }
    Connectivity {
        edges,
        connected: components.len() <= 1,
        components,
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// `h_i` = gcd over all `i`-element subsets of the lcm of the subset, monic.
pub fn divisor_chain(fs: &[Polynomial], exec: Exec) -> Result<Vec<Polynomial>, SumError> {
    let n = fs.len();
    if n > CHAIN_LIMIT {
        return Err(SumError::SubsetLimit { n, limit: CHAIN_LIMIT });
    }
    if let Some(i) = fs.iter().position(Polynomial::is_zero) {
        return Err(SumError::ZeroMember(i));
    }
    let chain = exec.map_range(n, |i| -> Result<Polynomial, PolyError> {
        let mut g: Option<Polynomial> = None;
        for subset in combinations(n, i + 1) {
            let mut l = fs[subset[0]].monic();
            for &t in &subset[1..] {
                l = lcm(&l, &fs[t])?;
            }
            g = Some(match g {
                None => l,
                Some(g) => crate::poly::gcd(&g, &l)?,
            });
            if g.as_ref().is_some_and(Polynomial::is_one) {
                break;
            }
        }
        Ok(g.expect("at least one subset"))
    });
    chain.into_iter().map(|r| r.map_err(SumError::from)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentCount {
    pub component: Polynomial,
    pub degree: u32,
    /// Number of terms not divisible by the component.
    pub m: usize,
}

pub fn mp_counts(fs: &[Polynomial]) -> Result<Vec<ComponentCount>, SumError> {
    let basis = coprime_basis(fs)?;
    Ok(basis
        .components
        .iter()
        .enumerate()
        .map(|(j, b)| ComponentCount {
            component: b.clone(),
            degree: b.degree().unwrap_or(0),
            m: basis.valuations.iter().filter(|v| v[j] == 0).count(),
        })
        .collect())
}

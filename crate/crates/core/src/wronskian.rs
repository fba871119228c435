//! Classical and generalized Wronskians, and a constructive choice of
//! derivative operators for families that are linear in auxiliary variables.

use std::fmt;

use thiserror::Error;

use crate::linalg::{express_in_span, linear_rank};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WronskianError {
    #[error("the family is linearly dependent")]
    NotIndependent,
    #[error("member {0} is not linear in the auxiliary variables")]
    NotLinearInAux(usize),
    #[error("expected {expected} operators, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// A product of first-order partial derivatives, stored as a sorted multiset
/// of variable indices. The empty multiset is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DeltaOperator(Vec<usize>);

impl DeltaOperator {
    pub fn identity() -> Self {
        DeltaOperator(Vec::new())
    }

    pub fn new(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        DeltaOperator(vars)
    }

    /// `d^k / dv^k`.
    pub fn power(v: usize, k: usize) -> Self {
        DeltaOperator(vec![v; k])
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    /// Number of derivatives taken in `v`.
    pub fn count(&self, v: usize) -> usize {
        self.0.iter().filter(|&&w| w == v).count()
    }

    pub fn then(&self, v: usize) -> Self {
        let mut out = self.0.clone();
        out.push(v);
        Self::new(out)
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.0.iter().fold(f.clone(), |acc, &v| acc.partial_derivative(v))
    }

    pub fn describe(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "id".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let k = self.count(v);
            let name = names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
            parts.push(if k == 1 {
                format!("d/d{name}")
            } else {
                format!("d^{k}/d{name}^{k}")
            });
            i += k;
        }
        parts.join(" ")
    }
}

impl fmt::Display for DeltaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe(&[]))
    }
}

/// Determinant of a square matrix of polynomials: cofactor expansion for
/// n <= 4, fraction-free Bareiss elimination above that.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    if n <= 4 {
        cofactor(m)
    } else {
        bareiss(m.to_vec())
    }
}

fn cofactor(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let field = m[0][0].field().clone();
    let mut acc = Polynomial::zero(&field);
    for (c, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = a * &cofactor(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

pub fn bareiss(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut prev = Polynomial::one(&field);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    negate = !negate;
                }
                None => return Polynomial::zero(&field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Rows are operators, columns are functions.
pub fn generalized_wronskian(fs: &[Polynomial], deltas: &[DeltaOperator]) -> Result<Polynomial, WronskianError> {
    if fs.len() != deltas.len() {
        return Err(WronskianError::ArityMismatch {
            expected: fs.len(),
            got: deltas.len(),
        });
    }
    let m: Vec<Vec<Polynomial>> = deltas.iter().map(|d| fs.iter().map(|f| d.apply(f)).collect()).collect();
    Ok(determinant(&m))
}

/// `det (f_j^{(i)})` with derivatives in `var`.
pub fn classical_wronskian(fs: &[Polynomial], var: usize) -> Polynomial {
    let deltas: Vec<DeltaOperator> = (0..fs.len()).map(|i| DeltaOperator::power(var, i)).collect();
    generalized_wronskian(fs, &deltas).expect("arity matches")
}

/// Coefficient of the auxiliary variable `t` in a family member written as
/// `sum_t z_t * g_t(y)`, with `y` = variable 0 and `z_t` = variable `t >= 1`.
fn aux_coefficient(f: &Polynomial, t: usize) -> Polynomial {
    f.partial_derivative(t)
}

fn check_linear_in_aux(fs: &[Polynomial]) -> Result<(), WronskianError> {
    for (i, f) in fs.iter().enumerate() {
        let ok = f
            .terms()
            .iter()
            .all(|(m, _)| m.exponents().iter().skip(1).sum::<u32>() == 1);
        if !ok {
            return Err(WronskianError::NotLinearInAux(i));
        }
    }
    Ok(())
}

/// Operators `Delta_1..Delta_n` with `W_Delta(fs) != 0` for a linearly
/// independent family `f_i = sum_t z_t g_{t,i}(y)` (`y` is variable 0, `z_t`
/// is variable `t`). Every operator is `d/dz_t` or `d/dy` applied to the
/// previous operator.
pub fn construct_delta(fs: &[Polynomial]) -> Result<Vec<DeltaOperator>, WronskianError> {
    check_linear_in_aux(fs)?;
    build_deltas(fs.to_vec())
}

fn build_deltas(mut fs: Vec<Polynomial>) -> Result<Vec<DeltaOperator>, WronskianError> {
    if fs.is_empty() {
        return Ok(Vec::new());
    }
    if fs.iter().any(Polynomial::is_zero) {
        return Err(WronskianError::NotIndependent);
    }
    let last = fs.last().expect("nonempty");
    let j = (1..last.num_vars())
        .find(|&t| last.degree_in(t) > 0)
        .ok_or(WronskianError::NotIndependent)?;

    // Reduce until the d/dz_j images of the members that involve z_j are independent.
    let active = loop {
        let active: Vec<usize> = (0..fs.len()).filter(|&i| fs[i].degree_in(j) > 0).collect();
        let derivs: Vec<Polynomial> = active.iter().map(|&i| aux_coefficient(&fs[i], j)).collect();
        if linear_rank(&derivs) == derivs.len() {
            break active;
        }
        let (pos, mu) = (0..derivs.len())
            .find_map(|pos| express_in_span(&derivs[pos], &derivs[pos + 1..]).map(|mu| (pos, mu)))
            .expect("a dependent list has a member in the span of its successors");
        let t = active[pos];
        let mut replaced = fs[t].clone();
        for (k, c) in mu.iter().enumerate() {
            if !c.is_zero() {
                replaced = &replaced - &fs[active[pos + 1 + k]].scale(c);
            }
        }
        if replaced.is_zero() {
            return Err(WronskianError::NotIndependent);
        }
        fs[t] = replaced;
    };

    let rest: Vec<Polynomial> = (0..fs.len())
        .filter(|i| !active.contains(i))
        .map(|i| fs[i].clone())
        .collect();
    let mut deltas = build_deltas(rest)?;
    let zj = DeltaOperator::power(j, 1);
    deltas.extend((0..active.len()).map(|i| {
        let mut v = vec![0; i];
        v.extend(zj.vars());
        DeltaOperator::new(v)
    }));
    Ok(deltas)
}

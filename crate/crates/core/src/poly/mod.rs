//! Sparse multivariate polynomials over a cyclotomic field.

mod basis;
mod gcd;
mod monomial;
mod uni;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::cycfield::{CycNumber, CycloField, FieldError};

pub use basis::{coprime_basis, valuation, CoprimeBasis};
pub use gcd::{gcd, gcd_many, lcm, power_free_degree, power_free_part, radical, radical_degree};
pub use monomial::Monomial;
pub use uni::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor is not a factor")]
    NotAFactor,
    #[error("gcd(0, 0) is undefined")]
    UndefinedGcd,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Total degree; the zero polynomial sits strictly below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: CycloField,
    /// Strictly decreasing in graded-lex order, no zero coefficients.
    terms: Vec<(Monomial, CycNumber)>,
}

impl Polynomial {
    pub fn zero(field: &CycloField) -> Self {
        Polynomial {
            field: field.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(field: &CycloField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: CycNumber) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn integer(field: &CycloField, n: i64) -> Self {
        Self::constant(field.integer(n))
    }

    pub fn var(field: &CycloField, v: usize) -> Self {
        Self::monomial(field.one(), Monomial::var(v, 1))
    }

    pub fn monomial(c: CycNumber, m: Monomial) -> Self {
        let field = c.field().clone();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { field, terms }
    }

    /// Collects terms in any order, merging duplicates and dropping zeros.
    pub fn from_terms<I>(field: &CycloField, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, CycNumber)>,
    {
        let mut acc: BTreeMap<Monomial, CycNumber> = BTreeMap::new();
        for (m, c) in terms {
            field.check_same(c.field()).expect("mixed conductors in polynomial");
            match acc.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get() + &c;
                    *e.get_mut() = s;
                }
            }
        }
        Polynomial {
            field: field.clone(),
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Univariate polynomial in `v` from coefficients, lowest degree first.
    pub fn from_integer_coeffs(field: &CycloField, v: usize, coeffs: &[i64]) -> Self {
        Self::from_terms(
            field,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (Monomial::var(v, k as u32), field.integer(c))),
        )
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn terms(&self) -> &[(Monomial, CycNumber)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<CycNumber> {
        match self.terms.as_slice() {
            [] => Some(self.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, CycNumber)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&CycNumber> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Degree {
        match self.terms.first() {
            Some((m, _)) => Degree::Finite(m.total_degree()),
            None => Degree::NegInfinity,
        }
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.total_degree().finite()
    }

    /// Degree in one variable; zero for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Sorted list of variables that actually occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.terms.iter().flat_map(|(m, _)| m.support()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// One past the highest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.exponents().len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &CycNumber) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        Polynomial {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        if let Some(v) = self.sole_variable() {
            return Self::from_uni(&self.to_uni(v).pow(e), v);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, v: usize) -> Polynomial {
        Self::from_terms(
            &self.field,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exponent(v);
                (e > 0).then(|| (m.with_exponent(v, e - 1), c * &self.field.integer(e as i64)))
            }),
        )
    }

    /// The variable this polynomial is univariate in, if it mentions exactly one.
    pub fn sole_variable(&self) -> Option<usize> {
        match self.variables().as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn to_uni(&self, v: usize) -> UniPoly {
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![self.field.zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            debug_assert!(m.support().all(|u| u == v), "not univariate in x{v}");
            coeffs[m.exponent(v) as usize] = c.clone();
        }
        UniPoly::from_coeffs(&self.field, coeffs)
    }

    pub fn from_uni(u: &UniPoly, v: usize) -> Polynomial {
        Polynomial {
            field: u.field().clone(),
            terms: u
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Monomial::var(v, k as u32), c.clone()))
                .collect(),
        }
    }

    /// Coefficients with respect to `v`, index = power of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, CycNumber)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(v) as usize].push((m.with_exponent(v, 0), c.clone()));
        }
        buckets.into_iter().map(|t| Self::from_terms(&self.field, t)).collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(field: &CycloField, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        Self::from_terms(
            field,
            coeffs.iter().enumerate().flat_map(|(k, p)| {
                p.terms
                    .iter()
                    .map(move |(m, c)| (m.with_exponent(v, k as u32), c.clone()))
            }),
        )
    }

    pub fn evaluate(&self, point: &[CycNumber]) -> CycNumber {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[v].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Sum of the terms of maximal total degree.
    pub fn leading_form(&self) -> Polynomial {
        let Some(d) = self.degree() else {
            return self.clone();
        };
        Polynomial {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .take_while(|(m, _)| m.total_degree() == d)
                .cloned()
                .collect(),
        }
    }

    /// Renames variables: `v` becomes `map(v)`.
    pub fn map_variables(&self, map: impl Fn(usize) -> usize) -> Polynomial {
        Self::from_terms(
            &self.field,
            self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0u32; 0];
                for v in m.support() {
                    let w = map(v);
                    if exps.len() <= w {
                        exps.resize(w + 1, 0);
                    }
                    exps[w] += m.exponent(v);
                }
                (Monomial::from_exponents(exps), c.clone())
            }),
        )
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        let mut acc = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &images[v].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&c.inv()?));
        }
        let vars = union_vars(self, d);
        if let [v] = vars.as_slice() {
            let q = self.to_uni(*v).exact_div(&d.to_uni(*v))?;
            return Ok(Self::from_uni(&q, *v));
        }
        let (lm, lc) = d.leading_term().expect("nonzero divisor");
        let lc_inv = lc.inv()?;
        let mut rem: BTreeMap<Monomial, CycNumber> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.checked_div(lm).ok_or(PolyError::NotAFactor)?;
            let qc = &c * &lc_inv;
            for (dm, dc) in d.terms.iter().skip(1) {
                let key = dm.mul(&qm);
                let delta = &qc * dc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-&delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() - &delta;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
            quot.push((qm, qc));
        }
        Ok(Polynomial {
            field: self.field.clone(),
            terms: quot,
        })
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Polynomial) -> bool {
        !self.is_zero() && other.exact_div(self).is_ok()
    }
}

pub(crate) fn union_vars(a: &Polynomial, b: &Polynomial) -> Vec<usize> {
    let mut v = a.variables();
    v.extend(b.variables());
    v.sort_unstable();
    v.dedup();
    v
}

fn add_terms(a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
    a.field
        .check_same(&b.field)
        .expect("mixed conductors in polynomial arithmetic");
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let bcoef = |c: &CycNumber| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        match a.terms[i].0.cmp(&b.terms[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b.terms[j].0.clone(), bcoef(&b.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let s = if negate_b {
                    &a.terms[i].1 - &b.terms[j].1
                } else {
                    &a.terms[i].1 + &b.terms[j].1
                };
                if !s.is_zero() {
                    out.push((a.terms[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), bcoef(c))));
    Polynomial {
        field: a.field.clone(),
        terms: out,
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_terms(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_terms(self, rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let vars = union_vars(self, rhs);
        if let [v] = vars.as_slice() {
            return Polynomial::from_uni(&self.to_uni(*v).mul(&rhs.to_uni(*v)), *v);
        }
        Polynomial::from_terms(
            &self.field,
            self.terms
                .iter()
                .flat_map(|(ma, ca)| rhs.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Degree first, then terms from the top down. Used for canonical sorting.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .conductor()
            .cmp(&other.field.conductor())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| {
                for (a, b) in self.terms.iter().zip(&other.terms) {
                    let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
                    if o.is_ne() {
                        return o;
                    }
                }
                self.terms.len().cmp(&other.terms.len())
            })
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.num_vars()).map(|v| format!("x{v}")).collect();
        f.write_str(&crate::parse::render(self, &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn x() -> Polynomial {
        Polynomial::var(&q(), 0)
    }

    fn y() -> Polynomial {
        Polynomial::var(&q(), 1)
    }

    fn c(n: i64) -> Polynomial {
        Polynomial::integer(&q(), n)
    }

    #[test]
    fn ring_basics() {
        assert_eq!(&(&x() + &c(1)) * &(&x() - &c(1)), &(&x() * &x()) - &c(1));
        let f = &x().pow(2) + &c(2);
        assert_eq!(
            f.pow(3),
            Polynomial::from_integer_coeffs(&q(), 0, &[8, 0, 12, 0, 6, 0, 1])
        );
        assert_eq!((&x().pow(2) - &c(1)).exact_div(&(&x() + &c(1))).unwrap(), &x() - &c(1));
        assert!((&x() + &c(1)).exact_div(&x()).is_err());
        assert_eq!((&x() - &x()), Polynomial::zero(&q()));
    }

    #[test]
    fn degrees_and_derivatives() {
        let f = &(&c(3) * &x().pow(2)) + &c(8);
        assert_eq!(f.total_degree(), Degree::Finite(2));
        assert_eq!(Polynomial::zero(&q()).total_degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let x2y = &x().pow(2) * &y();
        assert_eq!(x2y.partial_derivative(0), &(&c(2) * &x()) * &y());
        let g = &x().pow(3) + &(&c(3) * &x());
        assert!(g.partial_derivative(1).is_zero());
    }

    #[test]
    fn multivariate_exact_division() {
        let a = &(&x() + &y()) * &(&(&x() * &y()) - &c(2));
        assert_eq!(a.exact_div(&(&x() + &y())).unwrap(), &(&x() * &y()) - &c(2));
        assert_eq!(a.exact_div(&(&x() - &y())), Err(PolyError::NotAFactor));
    }

    #[test]
    fn coefficient_split_roundtrip() {
        let f = &(&(&x().pow(2) * &y()) + &(&c(3) * &y().pow(3))) - &x();
        let cs = f.coeffs_in(1);
        assert_eq!(cs.len(), 4);
        assert_eq!(Polynomial::from_coeffs_in(&q(), 1, &cs), f);
    }

    #[test]
    fn leading_form_and_compose() {
        let f = &(&x().pow(2) + &(&x() * &y())) + &c(5);
        assert_eq!(f.leading_form(), &x().pow(2) + &(&x() * &y()));
        let g = f.compose(&[&x() + &c(1), c(0)]);
        assert_eq!(g, Polynomial::from_integer_coeffs(&q(), 0, &[6, 2, 1]));
    }
}

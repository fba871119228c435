//! Dense univariate polynomials over a cyclotomic field.
//!
//! This is the workhorse behind every univariate fast path of [`Polynomial`](super::Polynomial):
//! Euclidean division, gcd, derivatives and square-free decomposition.

use crate::cycfield::{CycNumber, CycloField};

use super::PolyError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    field: CycloField,
    /// Lowest degree first, no trailing zeros.
    coeffs: Vec<CycNumber>,
}

impl UniPoly {
    pub fn zero(field: &CycloField) -> Self {
        UniPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &CycloField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: CycNumber) -> Self {
        let field = c.field().clone();
        Self::from_coeffs(&field, vec![c])
    }

    /// `x`.
    pub fn x(field: &CycloField) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn from_coeffs(field: &CycloField, mut coeffs: Vec<CycNumber>) -> Self {
        while coeffs.last().is_some_and(CycNumber::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_integers(field: &CycloField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.integer(c)).collect())
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycNumber {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&CycNumber> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &CycNumber) -> UniPoly {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(&self.field, out)
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.integer(k as i64))
            .collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let lead_inv = d.coeffs[dd].inv()?;
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let c = top * &lead_inv;
            for (t, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + t] = &rem[k + t] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_coeffs(&self.field, quot),
            Self::from_coeffs(&self.field, rem),
        ))
    }

    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly, PolyError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotAFactor)
        }
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        !self.is_zero() && other.div_rem(self).is_ok_and(|(_, r)| r.is_zero())
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::UndefinedGcd);
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a)
    }

    pub fn eval(&self, x: &CycNumber) -> CycNumber {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Yun's square-free decomposition: `self = lc * prod s_j^j` with the
    /// `s_j` monic, square-free and pairwise coprime. Returns `(s_j, j)` for
    /// the nonconstant `s_j` only.
    pub fn square_free_decomposition(&self) -> Result<Vec<(UniPoly, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut j = 1;
        while !b.is_constant() {
            let a = b.gcd(&d)?;
            if !a.is_constant() {
                out.push((a.clone(), j));
            }
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = c.sub(&b.derivative());
            j += 1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_integers(&CycloField::rationals(), c)
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.exact_div(&b).unwrap(), p(&[-1, 1]));
        assert_eq!(a.gcd(&p(&[0, 1, 1])).unwrap(), b);
        assert_eq!(p(&[2, 0, 1]).gcd(&p(&[0, 3, 0, 1])).unwrap(), p(&[1]));
        assert_eq!(p(&[1, 1]).exact_div(&p(&[0, 1])), Err(PolyError::NotAFactor));
    }

    #[test]
    fn yun_decomposition() {
        // x^3 (x+1)^2 (x+2)
        let f = p(&[0, 1]).pow(3).mul(&p(&[1, 1]).pow(2)).mul(&p(&[2, 1]));
        let sf = f
            .scale(&CycloField::rationals().integer(5))
            .square_free_decomposition()
            .unwrap();
        assert_eq!(sf, vec![(p(&[2, 1]), 1), (p(&[1, 1]), 2), (p(&[0, 1]), 3)]);
    }
}

//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is stored as its coefficient vector with respect to the power
//! basis `1, zeta, ..., zeta^(phi(m)-1)`, reduced modulo the m-th cyclotomic
//! polynomial. The reduced representative is unique, so structural equality
//! is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible fields: conductor {left} vs conductor {right}")]
    IncompatibleContext { left: u32, right: u32 },
    #[error("conductor must be a positive integer")]
    InvalidConductor,
}

struct FieldData {
    conductor: u32,
    /// `Phi_m`, lowest degree first; monic.
    modulus: Vec<BigInt>,
}

/// Handle to the field `Q(zeta_m)`. Cheap to clone.
#[derive(Clone)]
pub struct CycloField(Arc<FieldData>);

impl CycloField {
    pub fn new(conductor: u32) -> Result<Self, FieldError> {
        if conductor == 0 {
            return Err(FieldError::InvalidConductor);
        }
        Ok(CycloField(Arc::new(FieldData {
            conductor,
            modulus: cyclotomic_coefficients(conductor),
        })))
    }

    /// The rational numbers, `m = 1`.
    pub fn rationals() -> Self {
        Self::new(1).expect("conductor 1 is valid")
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    /// Degree of the field over `Q`, i.e. Euler's phi of the conductor.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.0.modulus
    }

    pub fn zero(&self) -> CycNumber {
        CycNumber {
            field: self.clone(),
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, q: BigRational) -> CycNumber {
        let mut c = self.zero();
        c.coeffs[0] = q;
        c
    }

    pub fn integer(&self, n: i64) -> CycNumber {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `zeta_m^k`; negative exponents are allowed.
    pub fn root_of_unity(&self, k: i64) -> CycNumber {
        let m = i64::from(self.conductor());
        let k = k.rem_euclid(m) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        CycNumber::from_raw(self, raw)
    }

    /// The imaginary unit, available when `4 | m`.
    pub fn imaginary_unit(&self) -> Option<CycNumber> {
        let m = self.conductor();
        m.is_multiple_of(4).then(|| self.root_of_unity(i64::from(m / 4)))
    }

    pub fn check_same(&self, other: &CycloField) -> Result<(), FieldError> {
        if self.conductor() == other.conductor() {
            Ok(())
        } else {
            Err(FieldError::IncompatibleContext {
                left: self.conductor(),
                right: other.conductor(),
            })
        }
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor()
    }
}

impl Eq for CycloField {}

impl Hash for CycloField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor())
    }
}

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
///
/// Computed as `(x^m - 1) / prod_{d | m, d < m} Phi_d` by exact division.
pub fn cyclotomic_coefficients(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic polynomial of conductor 0");
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let phi_d = cyclotomic_coefficients(d);
        num = int_exact_div(&num, &phi_d);
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn int_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let mut rem = num.to_vec();
    let qlen = rem.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (t, dc) in den.iter().enumerate() {
                rem[k + t] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "non-exact cyclotomic division");
    quot
}

/// An element of `Q(zeta_m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    field: CycloField,
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    /// Reduce an arbitrary-length coefficient vector modulo `Phi_m`.
    pub fn from_raw(field: &CycloField, mut raw: Vec<BigRational>) -> Self {
        let deg = field.degree();
        let modulus = field.modulus();
        if raw.len() > deg {
            for k in (deg..raw.len()).rev() {
                let c = std::mem::replace(&mut raw[k], BigRational::zero());
                if c.is_zero() {
                    continue;
                }
                for (t, mc) in modulus.iter().enumerate().take(deg) {
                    if !mc.is_zero() {
                        raw[k - deg + t] -= &c * BigRational::from_integer(mc.clone());
                    }
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        CycNumber {
            field: field.clone(),
            coeffs: raw,
        }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Coefficients in the power basis, length `phi(m)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// Number of nonzero power-basis coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn checked_add(&self, rhs: &CycNumber) -> Result<CycNumber, FieldError> {
        self.field.check_same(&rhs.field)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycNumber {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, rhs: &CycNumber) -> Result<CycNumber, FieldError> {
        self.field.check_same(&rhs.field)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycNumber {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, rhs: &CycNumber) -> Result<CycNumber, FieldError> {
        self.field.check_same(&rhs.field)?;
        if self.coeffs.len() == 1 {
            return Ok(CycNumber {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            });
        }
        if let Some(q) = self.as_rational() {
            return Ok(rhs.scale(q));
        }
        if let Some(q) = rhs.as_rational() {
            return Ok(self.scale(q));
        }
        let mut raw = vec![BigRational::zero(); 2 * self.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(CycNumber::from_raw(&self.field, raw))
    }

    pub fn checked_div(&self, rhs: &CycNumber) -> Result<CycNumber, FieldError> {
        self.field.check_same(&rhs.field)?;
        self.checked_mul(&rhs.inv()?)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self) -> Result<CycNumber, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.rational(q.recip()));
        }
        let modulus: Vec<BigRational> = self
            .field
            .modulus()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let s = qpoly::inverse_mod(&self.coeffs, &modulus);
        Ok(CycNumber::from_raw(&self.field, s))
    }

    pub fn pow(&self, mut e: u32) -> CycNumber {
        let mut base = self.clone();
        let mut acc = self.field.one();
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

    /// Terms `(power, coefficient)` with nonzero coefficient, highest power first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero())
    }
}

impl PartialOrd for CycNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .conductor()
            .cmp(&other.field.conductor())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &'a CycNumber) -> CycNumber {
                self.$checked(rhs).expect("mixed conductors in field arithmetic")
            }
        }
        impl $trait<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

/// Formats as a polynomial in `zeta`, highest power first (`2*zeta^2 - zeta + 1/3`).
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if k == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "zeta")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.field)
    }
}

/// Dense rational polynomial helpers used for field inversion.
mod qpoly {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<BigRational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        let lead_inv = b[db].recip();
        if rem.len() < b.len() {
            return (vec![], rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        while rem.len() >= b.len() {
            let k = rem.len() - 1 - db;
            let c = rem.last().unwrap() * &lead_inv;
            for (t, bc) in b.iter().enumerate() {
                rem[k + t] -= &c * bc;
            }
            quot[k] = c;
            trim(&mut rem);
        }
        (quot, rem)
    }

    fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out: Vec<BigRational> = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x - y
            })
            .collect();
        trim(&mut out);
        out
    }

    /// `s` with `s * a = 1 mod modulus`; `a` must be coprime to `modulus`.
    pub(super) fn inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
        let mut r0 = modulus.to_vec();
        let mut r1 = a.to_vec();
        trim(&mut r1);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = div_rem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Phi_m is irreducible.
        let c = r1[0].recip();
        s1.iter().map(|x| x * &c).collect()
    }
}

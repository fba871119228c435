//! Explicit extremal examples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycfield::CycloField;
use crate::poly::{radical_degree, Polynomial};
use crate::sumsystem::VanishingSum;

use super::SearchError;

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn x_pow(field: &CycloField, e: u32) -> Polynomial {
    Polynomial::var(field, 0).pow(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DavenportPair {
    pub f: Polynomial,
    pub g: Polynomial,
    /// `f^3 - g^2`.
    pub difference: Polynomial,
}

impl DavenportPair {
    /// `f^3 - g^2 - (f^3 - g^2) = 0`.
    pub fn sum(&self) -> VanishingSum {
        VanishingSum::new(vec![self.f.pow(3), -self.g.pow(2), -self.difference.clone()]).expect("identity holds")
    }
}

/// `f = x^2 + 2`, `g = x^3 + 3x`, whose cube and square differ by `3x^2 + 8`.
pub fn davenport_pair() -> DavenportPair {
    let field = CycloField::rationals();
    let f = Polynomial::from_integer_coeffs(&field, 0, &[2, 0, 1]);
    let g = Polynomial::from_integer_coeffs(&field, 0, &[0, 3, 0, 1]);
    let difference = &f.pow(3) - &g.pow(2);
    assert_eq!(difference, Polynomial::from_integer_coeffs(&field, 0, &[8, 0, 3]));
    DavenportPair { f, g, difference }
}

/// `f_i = C(n-2, i-1) x^{N(i-1)}` for `i < n` and `f_n = -(x^N + 1)^{n-2}`.
pub fn family_factor_tight(n: usize, big_n: u32) -> Result<VanishingSum, SearchError> {
    if n < 3 || big_n == 0 {
        return Err(SearchError::Parameter(format!(
            "needs n >= 3 and N >= 1, got n={n}, N={big_n}"
        )));
    }
    let field = CycloField::rationals();
    let m = n as u32 - 2;
    let mut fs: Vec<Polynomial> = (0..=m)
        .map(|j| x_pow(&field, big_n * j).scale(&field.rational(BigRational::from_integer(binomial(m, j)))))
        .collect();
    let base = &x_pow(&field, big_n) + &Polynomial::one(&field);
    fs.push(-base.pow(m));
    Ok(VanishingSum::new(fs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualVariant {
    /// No term is constant.
    NoneConstant,
    /// The first term is constant.
    FirstConstant,
}

impl std::str::FromStr for ResidualVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none-constant" | "a" | "A" => Ok(ResidualVariant::NoneConstant),
            "first-constant" | "b" | "B" => Ok(ResidualVariant::FirstConstant),
            _ => Err(format!(
                "unknown residual variant `{s}` (expected none-constant or first-constant)"
            )),
        }
    }
}

/// Conductor used by [`family_residual`]: `lcm(ceil(n/2), 4)`.
pub fn residual_conductor(n: usize) -> u32 {
    (n.div_ceil(2) as u32).lcm(&4)
}

pub fn family_residual(n: usize, variant: ResidualVariant) -> Result<VanishingSum, SearchError> {
    if n < 3 {
        return Err(SearchError::Parameter(format!("needs n >= 3, got {n}")));
    }
    let field = CycloField::new(residual_conductor(n)).map_err(|e| SearchError::Parameter(e.to_string()))?;
    family_residual_in(&field, n, variant)
}

/// With `c = ceil(n/2)` and `h = floor(n/2)`, the first `h` terms are
/// monomials and the last `c` are `-zeta_c^i (x + zeta_c^i)^N`; the roots of
/// unity filter kills every power of `x` except the monomials.
pub fn family_residual_in(field: &CycloField, n: usize, variant: ResidualVariant) -> Result<VanishingSum, SearchError> {
    if n < 3 {
        return Err(SearchError::Parameter(format!("needs n >= 3, got {n}")));
    }
    let c = n.div_ceil(2) as u32;
    let h = n as u32 / 2;
    let m = field.conductor();
    if !m.is_multiple_of(c) {
        return Err(SearchError::Parameter(format!(
            "conductor {m} is not a multiple of {c}"
        )));
    }
    let zeta = |i: u32| field.root_of_unity(i64::from(m / c * (i % c)));
    type Exponents<'a> = Box<dyn Fn(u32) -> (u32, u32) + 'a>;
    let (power, mono): (u32, Exponents<'_>) = match variant {
        ResidualVariant::NoneConstant => (c * (h + 1) - 2, Box::new(|i| (c * i - 1, c * i - 1))),
        ResidualVariant::FirstConstant => (c * h - 1, Box::new(|i| (c * (i - 1), c * (i - 1)))),
    };
    let mut fs = Vec::with_capacity(n);
    for i in 1..=h {
        let (k, e) = mono(i);
        let coeff = BigRational::from_integer(binomial(power, k) * c);
        fs.push(x_pow(field, e).scale(&field.rational(coeff)));
    }
    for i in h + 1..=n as u32 {
        let w = zeta(i);
        let lin = &Polynomial::var(field, 0) + &Polynomial::constant(w.clone());
        fs.push(-lin.pow(power).scale(&w));
    }
    VanishingSum::new(fs).map_err(|e| SearchError::Parameter(format!("family does not vanish: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareFreeSample {
    pub lambda: i64,
    pub mu: i64,
    pub degree: u32,
    pub radical_degree: u32,
    pub square_free: bool,
}

/// Samples `lambda f^3 + mu g^2` for the Davenport pair with random nonzero
/// integers `lambda, mu` in `[-bound, bound]`.
pub fn davenport_square_free_samples(samples: usize, bound: i64, seed: u64) -> Vec<SquareFreeSample> {
    let pair = davenport_pair();
    let field = pair.f.field().clone();
    let (f3, g2) = (pair.f.pow(3), pair.g.pow(2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = || loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    };
    (0..samples)
        .map(|_| {
            let (lambda, mu) = (nonzero(), nonzero());
            let combo = &f3.scale(&field.integer(lambda)) + &g2.scale(&field.integer(mu));
            let degree = combo.degree().expect("f^3 and g^2 are independent");
            let radical_degree = radical_degree(&combo).expect("nonzero");
            SquareFreeSample {
                lambda,
                mu,
                degree,
                radical_degree,
                square_free: degree == radical_degree,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::render;

    fn show(sum: &VanishingSum) -> Vec<String> {
        sum.fs().iter().map(|f| render(f, &["x".to_string()])).collect()
    }

    #[test]
    fn factor_tight_small() {
        let s = family_factor_tight(4, 1).unwrap();
        assert_eq!(show(&s), ["1", "2*x", "x^2", "-x^2 - 2*x - 1"]);
        let s = family_factor_tight(5, 10).unwrap();
        assert_eq!((s.max_degree(), s.d(), s.k()), (30, 4, 1));
        let radicals: u32 = s.fs().iter().map(|f| radical_degree(f).unwrap()).sum();
        assert_eq!(radicals, 13);
    }

    #[test]
    fn residual_families_vanish() {
        let s = family_residual(3, ResidualVariant::NoneConstant).unwrap();
        assert_eq!(show(&s), ["4*x", "-x^2 - 2*x - 1", "x^2 - 2*x + 1"]);
        for n in 3..=8 {
            for v in [ResidualVariant::NoneConstant, ResidualVariant::FirstConstant] {
                let s = family_residual(n, v).unwrap();
                assert_eq!(s.n(), n);
                assert_eq!(s.fs()[0].is_constant(), v == ResidualVariant::FirstConstant);
            }
        }
        let q = CycloField::rationals();
        assert!(family_residual_in(&q, 6, ResidualVariant::NoneConstant).is_err());
    }

    #[test]
    fn davenport_combinations_square_free() {
        let samples = davenport_square_free_samples(40, 20, 7);
        assert!(samples.iter().all(|s| s.square_free), "{samples:?}");
    }
}

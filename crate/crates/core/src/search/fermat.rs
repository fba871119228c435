//! Exhaustive search for `g_1^{e_1} + g_2^{e_2} + g_3^{e_3} = 0`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bounds::exact_root;
use crate::cycfield::{CycNumber, CycloField};
use crate::exec::Exec;
use crate::parse::render;
use crate::poly::{gcd, Polynomial};

use super::{coefficient_vectors, SearchError};

#[derive(Debug, Clone)]
pub struct FermatSpace {
    pub field: CycloField,
    pub exponents: [u32; 3],
    pub degree_cap: u32,
    pub coefficients: Vec<CycNumber>,
    /// Upper limit on the number of `(g_1, g_2)` pairs.
    pub budget: u64,
}

impl FermatSpace {
    pub fn integers(exponents: [u32; 3], degree_cap: u32, coeffs: std::ops::RangeInclusive<i64>) -> Self {
        let field = CycloField::rationals();
        FermatSpace {
            coefficients: coeffs.map(|c| field.integer(c)).collect(),
            field,
            exponents,
            degree_cap,
            budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatSolution {
    /// `g_1, g_2, g_3` with `g_1^{e_1} + g_2^{e_2} + g_3^{e_3} = 0`.
    pub bases: [Polynomial; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct FermatSolutionView {
    pub bases: [String; 3],
}

impl FermatSolution {
    pub fn view(&self) -> FermatSolutionView {
        let names = ["x".to_string()];
        FermatSolutionView {
            bases: [0, 1, 2].map(|i| render(&self.bases[i], &names)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FermatOutcome {
    pub pairs: u64,
    /// Pairs that survived the evaluation filter and went to exact extraction.
    pub extractions: u64,
    pub solutions: Vec<FermatSolution>,
}

/// Integer coefficients of `p`, when every coefficient is an integer.
fn integer_coeffs(p: &Polynomial) -> Option<Vec<i128>> {
    let deg = p.degree()? as usize;
    let mut out = vec![0i128; deg + 1];
    for (m, c) in p.terms() {
        let r = c.as_rational()?;
        if !r.is_integer() {
            return None;
        }
        out[m.exponent(0) as usize] = r.numer().to_i128()?;
    }
    Some(out)
}

fn eval_big(coeffs: &[i128], t: i64) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * t + BigInt::from(c))
}

fn is_integer_power(v: &BigInt, e: u32) -> bool {
    if v.is_negative() && e.is_multiple_of(2) {
        return false;
    }
    let r = v.abs().nth_root(e);
    r.pow(e) == v.abs()
}

/// Sample points at which an integer `e`-th power must take `e`-th power values.
const SAMPLE_POINTS: [i64; 4] = [2, 3, 5, 11];

/// Necessary condition over the rationals: an integer polynomial that is an
/// `e`-th power of a rational polynomial is, by Gauss's lemma, `c h^e` with
/// `h` integral and `c` an `e`-th power up to sign, so its values are too.
fn passes_evaluation_filter(coeffs: &[i128], e: u32) -> bool {
    let c = *coeffs.last().expect("nonzero");
    let lead = BigInt::from(c);
    if !is_integer_power(&lead, e) {
        return false;
    }
    SAMPLE_POINTS.iter().all(|&t| is_integer_power(&eval_big(coeffs, t), e))
}

const PRIME: i128 = 2_147_483_647;

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inverse_mod(a: i128) -> i128 {
    let (mut base, mut exp, mut acc) = (a.rem_euclid(PRIME), PRIME - 2, 1i128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        exp >>= 1;
    }
    acc
}

/// True when `a` and `b` are certainly coprime over the rationals: their
/// images mod a prime not dividing either leading coefficient are coprime,
/// and reduction can only enlarge a gcd.
fn coprime_mod_prime(a: &[i128], b: &[i128]) -> bool {
    let reduce = |v: &[i128]| trim(v.iter().map(|c| c.rem_euclid(PRIME)).collect());
    let (mut x, mut y) = (reduce(a), reduce(b));
    if x.len() != a.len() || y.len() != b.len() {
        return false;
    }
    while !y.is_empty() {
        let inv = inverse_mod(*y.last().expect("nonempty"));
        while x.len() >= y.len() {
            let factor = x.last().expect("nonempty") * inv % PRIME;
            let shift = x.len() - y.len();
            for (k, &c) in y.iter().enumerate() {
                x[k + shift] = (x[k + shift] - factor * c).rem_euclid(PRIME);
            }
            x = trim(x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

pub fn fermat_search(space: &FermatSpace, exec: Exec) -> Result<FermatOutcome, SearchError> {
    let [e1, e2, e3] = space.exponents;
    if space.exponents.contains(&0) {
        return Err(SearchError::Parameter("exponents must be positive".into()));
    }
    let polys: Vec<Polynomial> = coefficient_vectors(&space.field, space.degree_cap, &space.coefficients)
        .into_iter()
        .filter(|p| !p.is_constant())
        .collect();
    let count = polys.len() as u64;
    let pairs = count * count;
    if pairs > space.budget {
        return Err(SearchError::Budget {
            needed: pairs,
            budget: space.budget,
        });
    }
    let rational = space.field.degree() == 1;
    let integral: Vec<Option<Vec<i128>>> = polys.iter().map(integer_coeffs).collect();
    let powers1: Vec<Polynomial> = exec.map_slice(&polys, |p| p.pow(e1));
    let powers2: Vec<Polynomial> = exec.map_slice(&polys, |p| p.pow(e2));
    let rows: Vec<(u64, Vec<FermatSolution>)> = exec.map_range(polys.len(), |i| {
        let mut found = Vec::new();
        let mut extractions = 0;
        for j in 0..polys.len() {
            let target = -(&powers1[i] + &powers2[j]);
            if target.is_zero() {
                continue;
            }
            if e3 > 1 {
                if !target.degree().expect("nonzero").is_multiple_of(e3) {
                    continue;
                }
                if rational {
                    match integer_coeffs(&target) {
                        Some(cs) if !passes_evaluation_filter(&cs, e3) => continue,
                        _ => {}
                    }
                }
            }
            extractions += 1;
            let screened = match (&integral[i], &integral[j]) {
                (Some(a), Some(b)) => coprime_mod_prime(a, b),
                _ => false,
            };
            if !screened && !gcd(&polys[i], &polys[j]).expect("nonzero").is_constant() {
                continue;
            }
            if let Some(g3) = exact_root(&target, e3) {
                found.push(FermatSolution {
                    bases: [polys[i].clone(), polys[j].clone(), g3],
                });
            }
        }
        (extractions, found)
    });
    let extractions = rows.iter().map(|r| r.0).sum();
    let solutions = rows.into_iter().flat_map(|r| r.1).collect();
    Ok(FermatOutcome {
        pairs,
        extractions,
        solutions,
    })
}

//! Seeded random systems for the randomized acceptance checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cycfield::CycloField;
use crate::exec::Exec;
use crate::poly::{Monomial, Polynomial};
use crate::sumsystem::{hypothesis_check, vanishing_subsums, HypothesisMode, VanishingSum};

/// Dense univariate polynomial in variable 0 with coefficients drawn from `-c..=c`.
pub fn random_univariate<R: Rng>(rng: &mut R, field: &CycloField, max_degree: u32, c: i64) -> Polynomial {
    let deg = rng.gen_range(0..=max_degree) as usize;
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-c..=c)).collect();
    Polynomial::from_integer_coeffs(field, 0, &coeffs)
}

fn random_sum<R: Rng>(rng: &mut R, n: usize, mut draw: impl FnMut(&mut R) -> Polynomial) -> Option<VanishingSum> {
    let mut fs: Vec<Polynomial> = (0..n - 1).map(|_| draw(rng)).collect();
    let total = fs.iter().fold(Polynomial::zero(fs[0].field()), |acc, f| &acc + f);
    fs.push(-total);
    VanishingSum::new(fs).ok()
}

/// Univariate vanishing sum with `3 <= n <= max_terms` that is not all
/// constant and whose vanishing subsums are all coprime.
pub fn random_admissible_univariate<R: Rng>(
    rng: &mut R,
    field: &CycloField,
    max_terms: usize,
    max_degree: u32,
    c: i64,
) -> VanishingSum {
    loop {
        let n = rng.gen_range(3..=max_terms.max(3));
        let Some(sum) = random_sum(rng, n, |r| random_univariate(r, field, max_degree, c)) else {
            continue;
        };
        if sum.all_constant() || sum.univariate_variable().is_none() {
            continue;
        }
        let strict = hypothesis_check(&sum, HypothesisMode::StrictGcd, Exec::Sequential).expect("small n");
        if strict.passed {
            return sum;
        }
    }
}

fn random_sparse<R: Rng>(rng: &mut R, field: &CycloField, vars: usize, max_degree: u32, c: i64) -> Polynomial {
    let terms = rng.gen_range(1..=3);
    let mut out = Polynomial::zero(field);
    for _ in 0..terms {
        let total = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; vars];
        for _ in 0..total {
            exps[rng.gen_range(0..vars)] += 1;
        }
        let coeff = loop {
            let v = rng.gen_range(-c..=c);
            if v != 0 {
                break v;
            }
        };
        out = &out + &Polynomial::monomial(field.integer(coeff), Monomial::from_exponents(exps));
    }
    out
}

/// Vanishing sum in `vars` variables (all of them used) with `3 <= n <= max_terms`,
/// gcd 1 and no vanishing proper subsum.
pub fn random_admissible_multivariate<R: Rng>(
    rng: &mut R,
    field: &CycloField,
    vars: usize,
    max_terms: usize,
    max_degree: u32,
    c: i64,
) -> VanishingSum {
    loop {
        let n = rng.gen_range(3..=max_terms.max(3));
        let Some(sum) = random_sum(rng, n, |r| random_sparse(r, field, vars, max_degree, c)) else {
            continue;
        };
        if sum.variables().len() != vars || !sum.gcd().is_one() {
            continue;
        }
        if vanishing_subsums(&sum, Exec::Sequential).expect("small n").is_empty() {
            return sum;
        }
    }
}

/// Products of powers of a few fixed small factors times a small constant, so
/// that the terms share factors with varied multiplicities.
pub fn random_factored_list<R: Rng>(rng: &mut R, field: &CycloField, n: usize) -> Vec<Polynomial> {
    let pool: Vec<Polynomial> = [&[0, 1][..], &[1, 1], &[-1, 1], &[1, 0, 1], &[2, 1, 1]]
        .iter()
        .map(|cs| Polynomial::from_integer_coeffs(field, 0, cs))
        .collect();
    (0..n)
        .map(|_| {
            let c = *[1i64, -1, 2, -3].choose(rng).expect("nonempty");
            let mut f = Polynomial::integer(field, c);
            for p in &pool {
                let e = rng.gen_range(0..=3u32).saturating_sub(1);
                f = &f * &p.pow(e);
            }
            f
        })
        .collect()
}

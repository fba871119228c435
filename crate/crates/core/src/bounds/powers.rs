//! Bounds on sums of powers `g_1^{e_1} + ... + g_n^{e_n}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::cycfield::CycNumber;
use crate::poly::{coprime_basis, gcd_many, Polynomial};
use crate::sumsystem::{hypothesis_check, similar, HypothesisMode, SumError, VanishingSum};

use super::verifiers::{no_vanishing_subsum, not_all_constant, not_all_similar};
use super::{int, Assertion, BoundEntry, BoundError, BoundReport, CheckConfig, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSum {
    pub gs: Vec<Polynomial>,
    pub es: Vec<u32>,
}

impl PowerSum {
    pub fn new(gs: Vec<Polynomial>, es: Vec<u32>) -> Result<Self, BoundError> {
        if gs.len() != es.len() || gs.is_empty() {
            return Err(BoundError::Precondition("one exponent per base is required".into()));
        }
        if es.contains(&0) {
            return Err(BoundError::Precondition("exponents must be positive".into()));
        }
        Ok(PowerSum { gs, es })
    }

    /// Recovers the bases of terms declared as perfect powers.
    pub fn from_terms(fs: &[Polynomial], es: &[u32]) -> Result<Self, BoundError> {
        let gs = fs
            .iter()
            .zip(es)
            .enumerate()
            .map(|(i, (f, &e))| {
                exact_root(f, e)
                    .ok_or_else(|| BoundError::Precondition(format!("term {} is not a perfect {e}-th power", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gs, es.to_vec())
    }

    pub fn terms(&self) -> Vec<Polynomial> {
        self.gs.iter().zip(&self.es).map(|(g, &e)| g.pow(e)).collect()
    }

    fn reciprocal_sum(&self) -> BigRational {
        self.es.iter().map(|&e| BigRational::new(1.into(), e.into())).sum()
    }
}

fn rational_root(t: &BigRational, e: u32) -> Option<BigRational> {
    if t.is_negative() && e.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(e);
        (r.pow(e) == n.abs()).then(|| if n.is_negative() { -r } else { r })
    };
    Some(BigRational::new(root(t.numer())?, root(t.denom())?))
}

/// Some `s` in the field with `s^e = c`, for `c` a rational multiple of a root of unity.
fn unit_root(c: &CycNumber, e: u32) -> Option<CycNumber> {
    let field = c.field();
    let m = field.conductor() as i64;
    let units: Vec<CycNumber> = (0..m)
        .flat_map(|j| {
            let w = field.root_of_unity(j);
            [w.clone(), -&w]
        })
        .collect();
    for w in &units {
        let Some(t) = (c * &w.inv().ok()?).as_rational().cloned() else {
            continue;
        };
        let Some(s) = rational_root(&t, e) else {
            continue;
        };
        if let Some(v) = units.iter().find(|v| v.pow(e) == *w) {
            return Some(v.scale(&s));
        }
    }
    None
}

/// `g` with `g^e = f`, when one exists over the field.
pub fn exact_root(f: &Polynomial, e: u32) -> Option<Polynomial> {
    if e == 1 || f.is_zero() {
        return Some(f.clone());
    }
    let basis = coprime_basis(std::slice::from_ref(f)).ok()?;
    let mut root = Polynomial::constant(unit_root(&basis.units[0], e)?);
    for (b, v) in basis.factors(0) {
        if v % e != 0 {
            return None;
        }
        root = &root * &b.pow(v / e);
    }
    (root.pow(e) == *f).then_some(root)
}

fn power_system(ps: &PowerSum) -> Result<VanishingSum, BoundError> {
    VanishingSum::new(ps.terms()).map_err(|e| match e {
        SumError::NonzeroSum => BoundError::Precondition("the powers do not sum to zero".into()),
        other => other.into(),
    })
}

pub fn check_fermat_catalan(ps: &PowerSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    let sum = power_system(ps)?;
    if sum.n() < 3 {
        return Err(BoundError::NotApplicable("needs at least three terms".into()));
    }
    let mut rep = BoundReport::new(TheoremId::FermatCatalan);
    let strict = hypothesis_check(&sum, HypothesisMode::StrictGcd, cfg.exec)?;
    if !rep.admit(vec![not_all_constant(&sum), strict]) {
        return Ok(rep);
    }
    let d = sum.d() as i64;
    if d < 2 {
        return Err(BoundError::Precondition("span dimension below 2".into()));
    }
    let inv = BigRational::new(1.into(), (d - 1).into());
    let recip = ps.reciprocal_sum();
    rep.entries
        .push(BoundEntry::new("fermat-catalan", inv.clone(), recip.clone()).strict());
    let rhs = (recip - inv) * int(sum.max_degree());
    rep.entries.push(BoundEntry::new("fchy", super::ratio(d, 2), rhs));
    Ok(rep)
}

/// Groups the bases into similarity classes and checks that each class's
/// powers cancel.
pub fn check_generalized_fermat(gs: &[Polynomial], e: u32, _cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    if gs.iter().all(Polynomial::is_zero) {
        return Err(BoundError::Precondition("all bases are zero".into()));
    }
    let field = gs[0].field();
    let powers: Vec<Polynomial> = gs.iter().map(|g| g.pow(e)).collect();
    if !powers.iter().fold(Polynomial::zero(field), |acc, p| &acc + p).is_zero() {
        return Err(BoundError::Precondition("the powers do not sum to zero".into()));
    }
    let n = gs.len();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let home = if g.is_zero() {
            None
        } else {
            classes.iter().position(|c| similar(&gs[c[0]], g))
        };
        match home {
            Some(k) => classes[k].push(i),
            None => classes.push(vec![i]),
        }
    }
    let mut rep = BoundReport::new(TheoremId::GeneralizedFermat);
    let premise = int(n * n.saturating_sub(2));
    let met = int(e) >= premise;
    rep.entries.push(
        BoundEntry::new("premise", premise, int(e))
            .with_parameter("n(n-2)<=e")
            .informational(),
    );
    if !met {
        rep.notes.push("premise unmet: exponent below n(n-2)".into());
    }
    for class in &classes {
        let s = class.iter().fold(Polynomial::zero(field), |acc, &i| &acc + &powers[i]);
        let shown: Vec<String> = class.iter().map(|i| (i + 1).to_string()).collect();
        let mut a = Assertion::new("class-vanishes", s.is_zero(), format!("{{{}}}", shown.join(",")));
        a.required = met;
        rep.assertions.push(a);
    }
    Ok(rep)
}

pub fn check_davenport_powers(ps: &PowerSum, cfg: &CheckConfig) -> Result<BoundReport, BoundError> {
    let field = ps.gs[0].field();
    let powers = ps.terms();
    let total = powers.iter().fold(Polynomial::zero(field), |acc, p| &acc + p);
    if total.is_zero() {
        return Err(BoundError::NotApplicable("the powers sum to zero".into()));
    }
    if powers.iter().any(Polynomial::is_zero) {
        return Err(BoundError::Precondition("a base is zero".into()));
    }
    let mut fs = powers.clone();
    fs.push(-&total);
    let sum = VanishingSum::new(fs)?;
    let mut rep = BoundReport::new(TheoremId::DavenportPowers);
    if !rep.admit(vec![no_vanishing_subsum(&sum, cfg)?, not_all_similar(&sum)]) {
        return Ok(rep);
    }
    let n = ps.gs.len();
    let (d, k) = (sum.d(), sum.k());
    let recip = ps.reciprocal_sum();
    let top = int(powers.iter().map(|p| p.degree().unwrap_or(0)).max().unwrap_or(0));
    let deg_total = int(total.degree().unwrap_or(0));
    let coprime = gcd_many(&ps.gs)?.is_one();
    let sweep = cfg.dprime_sweep(d.max(2), (n + 1).saturating_sub(k));
    if sweep.is_empty() {
        rep.notes.push("range-empty: no admissible d'".into());
    }
    for dp in sweep {
        let inv = BigRational::new(BigInt::one(), BigInt::from(dp - 1));
        let lhs = super::ratio(dp as i64, 2) - &deg_total * &inv;
        let rhs = (&recip - &inv) * &top;
        let e = BoundEntry::new("davenport-powers", lhs, rhs).with_parameter(format!("d'={dp}"));
        if e.equality {
            rep.assertions.push(Assertion::new(
                "equality-needs-coprime-bases",
                coprime,
                format!("equality at d'={dp}"),
            ));
        }
        rep.entries.push(e);
    }
    if n == 2 && ps.es == [3, 2] {
        let df = ps.gs[0].degree().unwrap_or(0);
        if df >= 1 {
            let lhs = super::ratio(df as i64, 2) + int(1);
            rep.entries.push(BoundEntry::new("classical", lhs, deg_total));
        } else {
            rep.notes.push("classical bound skipped: cubed base is constant".into());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycloField;

    fn f4() -> CycloField {
        CycloField::new(4).unwrap()
    }
    fn u(field: &CycloField, cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(field, 0, cs)
    }

    #[test]
    fn roots_with_units() {
        let f = f4();
        let g = u(&f, &[0, 3, 0, 1]);
        let minus_square = -&g.pow(2);
        let r = exact_root(&minus_square, 2).unwrap();
        assert_eq!(r.pow(2), minus_square);
        let c = &u(&f, &[2, 0, 1]).pow(3).scale(&f.integer(8));
        assert_eq!(exact_root(c, 3).unwrap().pow(3), *c);
        assert!(exact_root(&u(&f, &[0, 0, 1]), 3).is_none());
        assert!(exact_root(&u(&f, &[2]), 2).is_none());
    }

    #[test]
    fn davenport_as_powers() {
        let f = f4();
        let i = f.imaginary_unit().unwrap();
        let ps = PowerSum::new(vec![u(&f, &[2, 0, 1]), u(&f, &[0, 3, 0, 1]).scale(&i)], vec![3, 2]).unwrap();
        let rep = check_davenport_powers(&ps, &CheckConfig::default()).unwrap();
        let at2 = rep.entry("davenport-powers d'=2").unwrap();
        // -(1/6) * 6 >= 1 - 2.
        assert_eq!((at2.lhs.clone(), at2.rhs.clone()), (int(-1), int(-1)));
        let at3 = rep.entry("davenport-powers d'=3").unwrap();
        assert!(at3.holds && !at3.equality);
        let classical = rep.entry("classical").unwrap();
        assert_eq!((classical.lhs.clone(), classical.rhs.clone()), (int(2), int(2)));
        assert!(rep.violations().is_empty());
    }

    #[test]
    fn fermat_catalan_on_davenport_triple() {
        let f = f4();
        let ps = PowerSum::new(
            vec![-&u(&f, &[2, 0, 1]), u(&f, &[0, 3, 0, 1]), u(&f, &[8, 0, 3])],
            vec![3, 2, 1],
        )
        .unwrap();
        let rep = check_fermat_catalan(&ps, &CheckConfig::default()).unwrap();
        let e = rep.entry("fermat-catalan").unwrap();
        assert_eq!((e.lhs.clone(), e.rhs.clone()), (int(1), super::super::ratio(11, 6)));
        assert!(e.holds);
    }

    #[test]
    fn similarity_classes() {
        let f = f4();
        let x = u(&f, &[0, 1]);
        let y = u(&f, &[1, 1]);
        let gs = vec![x.clone(), -&x, y.clone(), -&y];
        let rep = check_generalized_fermat(&gs, 9, &CheckConfig::default()).unwrap();
        assert_eq!(rep.assertions.len(), 2);
        assert!(rep.assertions.iter().all(|a| a.holds && a.required));
        let low = check_generalized_fermat(&gs[..2], 1, &CheckConfig::default());
        assert!(low.is_ok());
    }

    #[test]
    fn cubic_fermat_over_ninth_roots() {
        let f = CycloField::new(9).unwrap();
        let x = u(&f, &[0, 1]);
        let z = f.root_of_unity(1);
        let gs = vec![x.clone(), x.scale(&z), x.scale(&z.pow(2))];
        let rep = check_generalized_fermat(&gs, 3, &CheckConfig::default()).unwrap();
        assert_eq!(rep.assertions.len(), 1);
        assert!(rep.assertions[0].holds);
    }
}

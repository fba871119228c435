//! The lift/Wronskian pipeline that produces rho and sigma, and the generic
//! linear substitution that turns a multivariate sum into a univariate one.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::poly::{gcd_many, power_free_part, Polynomial};
use crate::sumsystem::{
    check_lift, connectivity_witness, lift, vanishing_subsums, Connectivity, LiftCheck, LiftedSystem, VanishingSum,
};
use crate::wronskian::{construct_delta, generalized_wronskian, DeltaOperator};

use super::{Assertion, BoundError, CheckConfig, ConstructiveSummary, SubstitutionTrace};

#[derive(Debug, Clone)]
pub struct RhoSigma {
    pub lifted: LiftedSystem,
    pub lift_check: LiftCheck,
    pub connectivity: Connectivity,
    pub deltas: Vec<DeltaOperator>,
    /// `W_Delta` of the first `n - 1` lifted terms; a polynomial in `y` alone.
    pub wronskian: Polynomial,
    pub rho: usize,
    pub sigma: usize,
    pub order_one: usize,
    /// `prod f~_i | prod r_{rho-1}(f~_i) * W`.
    pub divides_with_rho: bool,
    /// `prod f~_i | r_sigma(prod f~_i) * W`.
    pub divides_with_sigma: bool,
    /// `deg W <= deg(f~_1 ... f~_{n-1}) - sigma`.
    pub degree_bound: bool,
}

impl RhoSigma {
    pub fn n(&self) -> usize {
        self.lifted.n()
    }

    pub fn d(&self) -> usize {
        self.lifted.d
    }

    pub fn assertions(&self) -> Vec<Assertion> {
        let (n, d, rho, sigma) = (self.n(), self.d(), self.rho, self.sigma);
        vec![
            Assertion::new(
                "lift-sum-vanishes",
                self.lift_check.sum_vanishes,
                "sum of lifted terms is zero",
            ),
            Assertion::new(
                "lift-column-sums",
                self.lift_check.column_sums_minus_one,
                "every lambda column sums to -1",
            ),
            Assertion::new(
                "lift-relations",
                self.lift_check.only_all_ones_relation,
                "the all-ones vector spans the relations of the lifted terms",
            ),
            Assertion::new(
                "lambda-graph-connected",
                self.connectivity.connected,
                format!("{} components", self.connectivity.components.len()),
            ),
            Assertion::new("wronskian-nonzero", !self.wronskian.is_zero(), "W_Delta != 0"),
            Assertion::new("rho-range", 2 <= rho && rho <= d, format!("2 <= {rho} <= {d}")),
            Assertion::new(
                "sigma-range",
                rho * (rho - 1) / 2 <= sigma && sigma <= d * (d - 1) / 2,
                format!("{} <= {sigma} <= {}", rho * (rho - 1) / 2, d * (d - 1) / 2),
            ),
            Assertion::new(
                "order-one-operators",
                self.order_one >= n - d,
                format!("{} operators of order 1, need {}", self.order_one, n - d),
            ),
            Assertion::new(
                "divisibility-rho",
                self.divides_with_rho,
                "product divides r_{rho-1} terms times W",
            ),
            Assertion::new(
                "divisibility-sigma",
                self.divides_with_sigma,
                "product divides r_sigma(product) times W",
            ),
            Assertion::new(
                "wronskian-degree",
                self.degree_bound,
                "deg W <= deg(f~_1..f~_{n-1}) - sigma",
            ),
        ]
    }

    pub fn summary(&self) -> ConstructiveSummary {
        let mut names = vec!["y".to_string()];
        names.extend((1..=self.n() - self.d()).map(|t| format!("z{t}")));
        ConstructiveSummary {
            rho: self.rho,
            sigma: self.sigma,
            d: self.d(),
            deltas: self.deltas.iter().map(|op| op.describe(&names)).collect(),
            order: self.lifted.order.clone(),
        }
    }
}

/// Lifts a univariate sum with gcd 1 and no vanishing proper subsum, builds
/// the operators and reads off rho (largest order) and sigma (sum of orders
/// minus one).
pub fn compute_rho_sigma(sum: &VanishingSum, exec: Exec) -> Result<RhoSigma, BoundError> {
    if sum.univariate_variable().is_none() {
        return Err(BoundError::Precondition("the sum is not univariate".into()));
    }
    if sum.all_constant() {
        return Err(BoundError::Precondition("all terms are constant".into()));
    }
    let lifted = lift(sum, exec)?;
    let lift_check = check_lift(&lifted);
    let connectivity = connectivity_witness(lifted.d, &lifted.lambda);
    let n = lifted.n();
    let members = &lifted.lifted[..n - 1];
    let deltas = construct_delta(members)?;
    let wronskian = generalized_wronskian(members, &deltas)?;
    let rho = deltas.iter().map(DeltaOperator::order).max().unwrap_or(0);
    let sigma = deltas.iter().map(|op| op.order() - 1).sum();
    let order_one = deltas.iter().filter(|op| op.order() == 1).count();

    let field = sum.field();
    let product = lifted.base.iter().fold(Polynomial::one(field), |acc, f| &acc * f);
    let mut with_rho = wronskian.clone();
    for f in &lifted.base {
        with_rho = &with_rho * &power_free_part(f, rho as u32 - 1)?;
    }
    let with_sigma = &power_free_part(&product, sigma as u32)? * &wronskian;
    let head_degree: u32 = lifted.base[..n - 1].iter().map(|f| f.degree().unwrap_or(0)).sum();
    let degree_bound =
        !wronskian.is_zero() && wronskian.degree().unwrap_or(0) as i64 <= head_degree as i64 - sigma as i64;
    Ok(RhoSigma {
        divides_with_rho: !with_rho.is_zero() && product.divides(&with_rho),
        divides_with_sigma: !with_sigma.is_zero() && product.divides(&with_sigma),
        degree_bound,
        lifted,
        lift_check,
        connectivity,
        deltas,
        wronskian,
        rho,
        sigma,
        order_one,
    })
}

/// Outcome of the substitution `x_v = p_v y + q_v` (`y` is variable 0).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub vars: Vec<usize>,
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
    pub attempts: u32,
    pub reduced: VanishingSum,
    pub degrees_preserved: bool,
    pub subsum_degrees_preserved: bool,
    pub gcd_one: bool,
}

impl Reduction {
    pub fn trace(&self) -> SubstitutionTrace {
        SubstitutionTrace {
            vars: self.vars.clone(),
            p: self.p.iter().map(ToString::to_string).collect(),
            q: self.q.iter().map(ToString::to_string).collect(),
            attempts: self.attempts,
        }
    }

    pub fn verified(&self) -> bool {
        self.degrees_preserved && self.subsum_degrees_preserved && self.gcd_one
    }
}

const SUBSTITUTION_RANGE: i64 = 8;

fn subset_sum(fs: &[Polynomial], mask: usize) -> Polynomial {
    fs.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(Polynomial::zero(fs[0].field()), |acc, (_, f)| &acc + f)
}

/// Substitutes a random line `x = p y + q`, retrying until the leading forms
/// of all proper subsums are nonzero at `p` and the reduced terms keep their
/// degrees and have gcd 1.
pub fn reduce_to_univariate(sum: &VanishingSum, cfg: &CheckConfig) -> Result<Reduction, BoundError> {
    if let Some(v) = sum.univariate_variable() {
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::from_integer(0.into());
        return Ok(Reduction {
            vars: v.into_iter().collect(),
            p: vec![one],
            q: vec![zero],
            attempts: 0,
            reduced: sum.clone(),
            degrees_preserved: true,
            subsum_degrees_preserved: true,
            gcd_one: sum.gcd().is_one(),
        });
    }
    if !sum.gcd().is_one() {
        return Err(BoundError::Precondition("the terms have a common factor".into()));
    }
    if !vanishing_subsums(sum, cfg.exec)?.is_empty() {
        return Err(BoundError::Precondition("a proper subsum vanishes".into()));
    }
    let field = sum.field().clone();
    let fs = sum.fs();
    let n = sum.n();
    let vars = sum.variables();
    let width = vars.iter().max().map_or(0, |&v| v + 1);
    let proper: Vec<usize> = (1..(1usize << n) - 1).collect();
    let subsums: Vec<Polynomial> = proper.iter().map(|&m| subset_sum(fs, m)).collect();
    let leading: Vec<Polynomial> = subsums.iter().map(Polynomial::leading_form).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for attempt in 1..=cfg.retry_budget {
        let p: Vec<i64> = vars
            .iter()
            .map(|_| rng.gen_range(-SUBSTITUTION_RANGE..=SUBSTITUTION_RANGE))
            .collect();
        let q: Vec<i64> = vars
            .iter()
            .map(|_| rng.gen_range(-SUBSTITUTION_RANGE..=SUBSTITUTION_RANGE))
            .collect();
        let mut point = vec![field.zero(); width];
        for (k, &v) in vars.iter().enumerate() {
            point[v] = field.integer(p[k]);
        }
        if leading.iter().any(|g| g.evaluate(&point).is_zero()) {
            continue;
        }
        let y = Polynomial::var(&field, 0);
        let mut images = vec![Polynomial::zero(&field); width];
        for (k, &v) in vars.iter().enumerate() {
            images[v] = &y.scale(&field.integer(p[k])) + &Polynomial::integer(&field, q[k]);
        }
        let reduced: Vec<Polynomial> = fs.iter().map(|f| f.compose(&images)).collect();
        if reduced.iter().any(Polynomial::is_zero) {
            continue;
        }
        let degrees_preserved = reduced.iter().zip(fs).all(|(r, f)| r.degree() == f.degree());
        let subsum_degrees_preserved = proper
            .iter()
            .zip(&subsums)
            .all(|(&m, g)| subset_sum(&reduced, m).degree() == g.degree());
        let gcd_one = gcd_many(&reduced)?.is_one();
        if !(degrees_preserved && subsum_degrees_preserved && gcd_one) {
            continue;
        }
        let big = |xs: &[i64]| xs.iter().map(|&a| BigRational::from_integer(a.into())).collect();
        return Ok(Reduction {
            p: big(&p),
            q: big(&q),
            vars,
            attempts: attempt,
            reduced: VanishingSum::new(reduced)?,
            degrees_preserved,
            subsum_degrees_preserved,
            gcd_one,
        });
    }
    Err(BoundError::RetryBudget(cfg.retry_budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycloField;

    fn q() -> CycloField {
        CycloField::rationals()
    }
    fn u(cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(&q(), 0, cs)
    }

    #[test]
    fn davenport_rho_sigma_pinch() {
        let s = VanishingSum::new(vec![-&u(&[2, 0, 1]).pow(3), u(&[0, 3, 0, 1]).pow(2), u(&[8, 0, 3])]).unwrap();
        let rs = compute_rho_sigma(&s, Exec::Sequential).unwrap();
        assert_eq!((rs.rho, rs.sigma), (2, 1));
        assert!(rs.assertions().iter().all(|a| a.holds), "{:?}", rs.assertions());
    }

    #[test]
    fn reduction_keeps_degrees() {
        let f = q();
        let (x1, x2) = (Polynomial::var(&f, 0), Polynomial::var(&f, 1));
        let one = Polynomial::one(&f);
        let a = &x1 * &x2;
        let b = &(&(-&a) + &x1) + &one;
        let c = -&(&x1 + &one);
        let s = VanishingSum::new(vec![a, b, c]).unwrap();
        let r = reduce_to_univariate(&s, &CheckConfig::default()).unwrap();
        assert!(r.verified());
        assert_eq!(r.reduced.degrees(), vec![2, 2, 1]);
        assert_eq!(r.reduced.univariate_variable(), Some(Some(0)));
    }

    #[test]
    fn univariate_reduction_is_identity() {
        let s = VanishingSum::new(vec![u(&[0, 1]), u(&[1]), u(&[-1, -1])]).unwrap();
        let r = reduce_to_univariate(&s, &CheckConfig::default()).unwrap();
        assert_eq!(r.attempts, 0);
        assert_eq!(r.reduced, s);
        assert_eq!(r.p[0], BigRational::from_integer(1.into()));
    }

    #[test]
    fn zero_direction_fails_leading_form_check() {
        let f = q();
        let (x1, x2) = (Polynomial::var(&f, 0), Polynomial::var(&f, 1));
        let a = &x1 * &x2;
        let g = (&a + &x1).leading_form();
        assert!(g.evaluate(&[f.zero(), f.zero()]).is_zero());
    }
}

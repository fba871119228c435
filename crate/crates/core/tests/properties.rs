use masonabc::parse::{parse_expression, render, Scope};
use masonabc::poly::{coprime_basis, gcd, power_free_degree, power_free_part, radical, radical_degree};
use masonabc::search::canonical_form;
use masonabc::wronskian::classical_wronskian;
use masonabc::{CycNumber, CycloField, Monomial, Polynomial};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn rationals() -> CycloField {
    CycloField::rationals()
}

fn univariate() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..6)
}

fn nonzero_univariate() -> impl Strategy<Value = Polynomial> {
    univariate()
        .prop_map(|cs| Polynomial::from_integer_coeffs(&rationals(), 0, &cs))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Small integer polynomials in x, y over Q(i) with Gaussian integer coefficients.
fn gaussian_bivariate() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..4, 0u32..4), (-5i64..=5, -5i64..=5)), 0..6).prop_map(|terms| {
        let field = CycloField::new(4).unwrap();
        Polynomial::from_terms(
            &field,
            terms.into_iter().map(|((a, b), (re, im))| {
                let raw = vec![
                    BigRational::from_integer(re.into()),
                    BigRational::from_integer(im.into()),
                ];
                (Monomial::from_exponents([a, b]), CycNumber::from_raw(&field, raw))
            }),
        )
    })
}

// Dense rational arithmetic, lowest degree first, used as a gcd oracle.
type Dense = Vec<BigRational>;

fn trim(v: &mut Dense) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn remainder(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let lead = b.last().unwrap();
    while r.len() >= b.len() {
        let factor = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &factor * c;
        }
        trim(&mut r);
    }
    r
}

fn euclid(a: &Dense, b: &Dense) -> Dense {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = remainder(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    let lead = x.last().cloned().unwrap();
    x.iter().map(|c| c / &lead).collect()
}

fn to_dense(p: &Polynomial) -> Dense {
    let mut v = vec![BigRational::zero(); p.degree().map_or(0, |d| d as usize + 1)];
    for (m, c) in p.terms() {
        v[m.exponent(0) as usize] = c.as_rational().unwrap().clone();
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_parse_is_identity(f in gaussian_bivariate()) {
        let names = vec!["x".to_string(), "y".to_string()];
        let text = render(&f, &names);
        let scope = Scope::new(f.field(), &["x", "y"]);
        prop_assert_eq!(parse_expression(&text, &scope).unwrap(), f);
    }

    #[test]
    fn gcd_matches_euclid(a in univariate(), b in univariate(), c in univariate()) {
        let field = rationals();
        let common = Polynomial::from_integer_coeffs(&field, 0, &c);
        let pa = &Polynomial::from_integer_coeffs(&field, 0, &a) * &common;
        let pb = &Polynomial::from_integer_coeffs(&field, 0, &b) * &common;
        prop_assume!(!pa.is_zero() && !pb.is_zero());
        let g = gcd(&pa, &pb).unwrap();
        prop_assert_eq!(to_dense(&g.monic()), euclid(&to_dense(&pa), &to_dense(&pb)));
        prop_assert!(g.divides(&pa) && g.divides(&pb));
    }

    #[test]
    fn radical_is_multiplicative_on_coprime_pairs(f in nonzero_univariate(), g in nonzero_univariate()) {
        prop_assume!(gcd(&f, &g).unwrap().is_constant());
        let product = &f * &g;
        prop_assert_eq!(radical_degree(&product).unwrap(), radical_degree(&f).unwrap() + radical_degree(&g).unwrap());
    }

    #[test]
    fn radical_ignores_powers(f in nonzero_univariate(), k in 1u32..4) {
        prop_assert_eq!(radical(&f.pow(k)).unwrap(), radical(&f).unwrap());
    }

    #[test]
    fn power_free_degree_is_at_most_e_times_radical(f in nonzero_univariate(), g in nonzero_univariate(), e in 1u32..5) {
        let h = &f * &g.pow(3);
        let part = power_free_part(&h, e).unwrap();
        prop_assert!(part.divides(&h));
        prop_assert!(power_free_degree(&h, e).unwrap() <= e * radical_degree(&h).unwrap());
        prop_assert!(power_free_degree(&h, e).unwrap() <= h.degree().unwrap());
    }

    #[test]
    fn coprime_basis_reconstructs_inputs(fs in prop::collection::vec(nonzero_univariate(), 1..5)) {
        let basis = coprime_basis(&fs).unwrap();
        for (i, f) in fs.iter().enumerate() {
            prop_assert_eq!(&basis.reconstruct(i), f);
        }
        for (a, p) in basis.components.iter().enumerate() {
            prop_assert!(!p.is_constant());
            prop_assert_eq!(radical(p).unwrap().degree(), p.degree());
            for q in &basis.components[a + 1..] {
                prop_assert!(gcd(p, q).unwrap().is_constant());
            }
        }
    }

    #[test]
    fn two_term_wronskian_is_f_dg_minus_df_g(f in nonzero_univariate(), g in nonzero_univariate()) {
        let w = classical_wronskian(&[f.clone(), g.clone()], 0);
        let expected = &(&f * &g.partial_derivative(0)) - &(&f.partial_derivative(0) * &g);
        prop_assert_eq!(&w, &expected);
        let swapped = classical_wronskian(&[g, f], 0);
        prop_assert_eq!(swapped, -w);
    }

    #[test]
    fn canonical_form_ignores_order_and_scale(
        fs in prop::collection::vec(nonzero_univariate(), 2..5),
        scale in prop_oneof![-7i64..=-1, 1i64..=7],
        rotate in 0usize..4,
    ) {
        let field = rationals();
        let c = field.integer(scale);
        let mut moved: Vec<Polynomial> = fs.iter().map(|f| f.scale(&c)).collect();
        let len = moved.len();
        moved.rotate_left(rotate % len);
        prop_assert_eq!(canonical_form(&moved), canonical_form(&fs));
    }
}

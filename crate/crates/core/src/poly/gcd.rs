//! Gcd, radicals and power-free parts.
//!
//! Multivariate gcd recurses on the lowest variable: split off the content
//! (gcd of coefficients, one variable fewer) and run a primitive remainder
//! sequence on the primitive parts.

use super::{union_vars, PolyError, Polynomial};

/// Monic gcd. `gcd(a, 0)` is `a` made monic; `gcd(0, 0)` is an error.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(PolyError::UndefinedGcd),
        (true, false) => Ok(b.monic()),
        (false, true) => Ok(a.monic()),
        (false, false) => Ok(gcd_nonzero(a, b)),
    }
}

pub fn gcd_many<'a, I>(polys: I) -> Result<Polynomial, PolyError>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) if g.is_zero() => p.monic(),
            Some(g) if g.is_one() => return Ok(g),
            Some(g) => gcd(&g, p)?,
        });
    }
    match acc {
        Some(g) if !g.is_zero() => Ok(g),
        _ => Err(PolyError::UndefinedGcd),
    }
}

pub fn lcm(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Ok(Polynomial::zero(a.field()));
    }
    Ok((a * b).exact_div(&gcd(a, b)?)?.monic())
}

fn gcd_nonzero(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.field());
    }
    let vars = union_vars(a, b);
    if let [v] = vars.as_slice() {
        let g = a.to_uni(*v).gcd(&b.to_uni(*v)).expect("nonzero operands");
        return Polynomial::from_uni(&g, *v);
    }
    let v = vars[0];
    if a.degree_in(v) == 0 {
        return gcd_nonzero(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd_nonzero(&content_in(a, v), b);
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let c = gcd_nonzero(&ca, &cb);
    let pa = divide_coeffs(a, v, &ca);
    let pb = divide_coeffs(b, v, &cb);
    (&c * &primitive_prs(pa, pb, v)).monic()
}

/// Gcd of the coefficients of `p` with respect to `v`.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut acc: Option<Polynomial> = None;
    for c in p.coeffs_in(v).iter().rev().filter(|c| !c.is_zero()) {
        let g = match acc {
            None => c.monic(),
            Some(g) => gcd_nonzero(&g, c),
        };
        if g.is_constant() {
            return g;
        }
        acc = Some(g);
    }
    acc.unwrap_or_else(|| Polynomial::one(p.field()))
}

fn divide_coeffs(p: &Polynomial, v: usize, d: &Polynomial) -> Polynomial {
    if d.is_one() {
        return p.clone();
    }
    let cs: Vec<Polynomial> = p
        .coeffs_in(v)
        .iter()
        .map(|c| c.exact_div(d).expect("content divides every coefficient"))
        .collect();
    Polynomial::from_coeffs_in(p.field(), v, &cs)
}

fn primitive_part(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    divide_coeffs(p, v, &c)
}

/// Gcd of two polynomials that are primitive in `v` and of positive degree in it.
fn primitive_prs(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&f, &g, v);
        if r.is_zero() {
            return g;
        }
        if r.degree_in(v) == 0 {
            return Polynomial::one(f.field());
        }
        f = g;
        g = primitive_part(&r, v);
    }
}

fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let field = a.field().clone();
    let mut r = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc.last().expect("nonzero divisor").clone();
    while r.len() >= bc.len() && !r.is_empty() {
        let k = r.len() - bc.len();
        let lr = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (t, bt) in bc.iter().enumerate() {
            r[k + t] = &r[k + t] - &(&lr * bt);
        }
        r.pop();
        while r.last().is_some_and(Polynomial::is_zero) {
            r.pop();
        }
    }
    Polynomial::from_coeffs_in(&field, v, &r)
}

/// The square-free part: `f / gcd(f, all partial derivatives)`, monic.
pub fn radical(f: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(Polynomial::one(f.field()));
    }
    if let Some(v) = f.sole_variable() {
        let u = f.to_uni(v);
        let g = u.gcd(&u.derivative())?;
        return Ok(Polynomial::from_uni(&u.exact_div(&g)?.monic(), v));
    }
    let mut parts = vec![f.clone()];
    parts.extend(f.variables().into_iter().map(|v| f.partial_derivative(v)));
    let g = gcd_many(&parts)?;
    Ok(f.exact_div(&g)?.monic())
}

pub fn radical_degree(f: &Polynomial) -> Result<u32, PolyError> {
    Ok(radical(f)?.degree().unwrap_or(0))
}

/// `gcd(f, radical(f)^e)`: every factor kept with multiplicity capped at `e`.
pub fn power_free_part(f: &Polynomial, e: u32) -> Result<Polynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if e == 0 {
        return Ok(Polynomial::one(f.field()));
    }
    let rad = radical(f)?;
    if e == 1 {
        return Ok(rad);
    }
    gcd(f, &rad.pow(e))
}

/// Degree of [`power_free_part`]; zero for `e == 0`.
pub fn power_free_degree(f: &Polynomial, e: u32) -> Result<u32, PolyError> {
    Ok(power_free_part(f, e)?.degree().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycloField;

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
    fn u(cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(&q(), 0, cs)
    }

    #[test]
    fn univariate_gcd() {
        assert!(gcd(&u(&[2, 0, 1]), &u(&[0, 3, 0, 1])).unwrap().is_one());
        let a = &x().pow(2) * &(&x() + &c(1));
        let b = &x() * &(&x() + &c(1)).pow(2);
        assert_eq!(gcd(&a, &b).unwrap(), u(&[0, 1, 1]));
        assert_eq!(gcd(&u(&[4, 2]), &Polynomial::zero(&q())).unwrap(), u(&[2, 1]));
        assert_eq!(
            gcd(&Polynomial::zero(&q()), &Polynomial::zero(&q())),
            Err(PolyError::UndefinedGcd)
        );
    }

    #[test]
    fn multivariate_gcd() {
        let a = &x() * &y();
        let b = &x() * &(&y() + &c(1));
        assert_eq!(gcd(&a, &b).unwrap(), x());
        let common = &(&x() * &y()) + &(&y().pow(2) - &c(3));
        let p = &common * &(&x() - &(&c(2) * &y()));
        let r = &common * &(&x().pow(2) + &y());
        assert_eq!(gcd(&p, &r).unwrap(), common.monic());
        assert_eq!(lcm(&a, &b).unwrap(), &(&x() * &y()) * &(&y() + &c(1)));
    }

    #[test]
    fn radicals_and_power_free_parts() {
        let f = &x().pow(3) * &(&x() + &c(1));
        assert_eq!(radical(&f).unwrap(), u(&[0, 1, 1]));
        assert_eq!(radical(&u(&[2, 0, 1]).pow(3)).unwrap(), u(&[2, 0, 1]));
        assert!(radical(&c(7)).unwrap().is_one());
        assert_eq!(power_free_part(&f, 2).unwrap(), &x().pow(2) * &(&x() + &c(1)));
        assert_eq!(power_free_degree(&f, 2).unwrap(), 3);
        let mv = &(&x() * &y()).pow(2) * &(&x() + &y());
        assert_eq!(radical(&mv).unwrap(), (&(&x() * &y()) * &(&x() + &y())).monic());
    }

    #[test]
    fn davenport_triple_radical_degree() {
        let g1 = u(&[2, 0, 1]);
        let g2 = u(&[0, 3, 0, 1]);
        let f3 = u(&[8, 0, 3]);
        let prod = &(&g1.pow(3) * &g2.pow(2)) * &f3;
        assert_eq!(power_free_degree(&prod, 1).unwrap(), 7);
    }
}

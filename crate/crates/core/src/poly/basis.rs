//! Gcd-free (coprime) bases by pairwise gcd refinement.

use crate::cycfield::CycNumber;

use super::gcd::{gcd, radical};
use super::{PolyError, Polynomial};

/// Pairwise coprime, square-free, monic components shared by a list of
/// polynomials, together with each input's factorization over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeBasis {
    pub components: Vec<Polynomial>,
    /// `valuations[i][j]`: exponent of component `j` in input `i`.
    pub valuations: Vec<Vec<u32>>,
    /// Input `i` equals `units[i] * prod components[j]^valuations[i][j]`.
    pub units: Vec<CycNumber>,
}

impl CoprimeBasis {
    /// The factors of input `i` as `(component, multiplicity)` pairs.
    pub fn factors(&self, i: usize) -> Vec<(&Polynomial, u32)> {
        self.components
            .iter()
            .zip(&self.valuations[i])
            .filter(|(_, &v)| v > 0)
            .map(|(c, &v)| (c, v))
            .collect()
    }

    /// Rebuilds input `i` from its factorization.
    pub fn reconstruct(&self, i: usize) -> Polynomial {
        self.factors(i)
            .into_iter()
            .fold(Polynomial::constant(self.units[i].clone()), |acc, (c, v)| {
                &acc * &c.pow(v)
            })
    }
}

/// Largest `e` with `b^e | f`.
pub fn valuation(f: &Polynomial, b: &Polynomial) -> Result<u32, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if b.is_constant() {
        return Err(PolyError::NotAFactor);
    }
    let mut rest = f.clone();
    let mut e = 0;
    while let Ok(q) = rest.exact_div(b) {
        rest = q;
        e += 1;
    }
    Ok(e)
}

pub fn coprime_basis(fs: &[Polynomial]) -> Result<CoprimeBasis, PolyError> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for f in fs {
        for layer in square_free_layers(f)? {
            insert(&mut basis, layer)?;
        }
    }
    let mut valuations: Vec<Vec<u32>> = fs
        .iter()
        .map(|f| basis.iter().map(|b| valuation(f, b)).collect())
        .collect::<Result<_, _>>()?;

    // Order by first input containing the component, then degree.
    let first_use = |j: usize| valuations.iter().position(|v| v[j] > 0).unwrap_or(usize::MAX);
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| first_use(a).cmp(&first_use(b)).then_with(|| basis[a].cmp(&basis[b])));
    let components: Vec<Polynomial> = order.iter().map(|&j| basis[j].clone()).collect();
    for v in valuations.iter_mut() {
        *v = order.iter().map(|&j| v[j]).collect();
    }

    let mut out = CoprimeBasis {
        components,
        valuations,
        units: Vec::new(),
    };
    for (i, f) in fs.iter().enumerate() {
        let monic_part = out
            .factors(i)
            .into_iter()
            .fold(Polynomial::one(f.field()), |acc, (c, v)| &acc * &c.pow(v));
        let rest = f.exact_div(&monic_part)?;
        out.units
            .push(rest.constant_value().expect("basis covers every factor"));
    }
    Ok(out)
}

/// Square-free polynomials `L_1, L_2, ...` whose product is `f` up to a unit:
/// `L_1` is the radical of `f`, `L_2` the radical of `f / L_1`, and so on.
fn square_free_layers(f: &Polynomial) -> Result<Vec<Polynomial>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut layers = Vec::new();
    let mut rest = f.clone();
    while !rest.is_constant() {
        let r = radical(&rest)?;
        rest = rest.exact_div(&r)?;
        layers.push(r);
    }
    Ok(layers)
}

/// Adds a monic square-free polynomial to a pairwise-coprime list, splitting
/// components that share factors with it.
fn insert(basis: &mut Vec<Polynomial>, x: Polynomial) -> Result<(), PolyError> {
    let mut x = x;
    let mut added = Vec::new();
    let mut i = 0;
    while i < basis.len() && !x.is_constant() {
        let g = gcd(&x, &basis[i])?;
        if g.is_constant() {
            i += 1;
            continue;
        }
        let b = basis.swap_remove(i);
        let b_rest = b.exact_div(&g)?;
        x = x.exact_div(&g)?;
        if !b_rest.is_constant() {
            added.push(b_rest.monic());
        }
        added.push(g);
    }
    if !x.is_constant() {
        basis.push(x.monic());
    }
    basis.extend(added);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycfield::CycloField;

    fn u(cs: &[i64]) -> Polynomial {
        Polynomial::from_integer_coeffs(&CycloField::rationals(), 0, cs)
    }

    #[test]
    fn simple_basis() {
        let x = u(&[0, 1]);
        let x1 = u(&[1, 1]);
        let b = coprime_basis(&[&x.pow(2) * &x1, &x * &x1.pow(2)]).unwrap();
        assert_eq!(b.components, vec![x, x1]);
        assert_eq!(b.valuations, vec![vec![2, 1], vec![1, 2]]);
    }

    #[test]
    fn davenport_triple_basis() {
        let fs = [u(&[2, 0, 1]).pow(3), u(&[0, 3, 0, 1]).pow(2), u(&[8, 0, 3])];
        let b = coprime_basis(&fs).unwrap();
        let field = CycloField::rationals();
        let eight_thirds = Polynomial::from_terms(
            &field,
            [
                (super::super::Monomial::var(0, 2), field.one()),
                (
                    super::super::Monomial::one(),
                    field.rational(num_rational::BigRational::new(8.into(), 3.into())),
                ),
            ],
        );
        // x and x^2 + 3 always occur together, so refinement keeps them joined.
        assert_eq!(b.components, vec![u(&[2, 0, 1]), u(&[0, 3, 0, 1]), eight_thirds]);
        assert_eq!(b.valuations, vec![vec![3, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]);
        for (i, f) in fs.iter().enumerate() {
            assert_eq!(&b.reconstruct(i), f);
        }
        assert_eq!(b.units[2], field.integer(3));
    }

    #[test]
    fn constants_have_empty_basis() {
        let b = coprime_basis(&[u(&[5]), u(&[7])]).unwrap();
        assert!(b.components.is_empty());
    }

    #[test]
    fn valuations() {
        let f = &u(&[0, 1]).pow(3) * &u(&[1, 1]);
        assert_eq!(valuation(&f, &u(&[0, 1])).unwrap(), 3);
        assert_eq!(valuation(&u(&[8, 0, 3]), &u(&[0, 1])).unwrap(), 0);
    }
}

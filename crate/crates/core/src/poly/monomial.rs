use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector indexed by variable. Trailing zeros are never stored, so
/// `x^2` has the same representation no matter how many variables are in scope.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: usize, exp: u32) -> Self {
        let mut e = SmallVec::from_elem(0, v + 1);
        e[v] = exp;
        Monomial(e).trimmed()
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        Monomial(exps.into_iter().collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exponent(i) + other.exponent(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, &e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(e)?;
        }
        Some(Monomial(out).trimmed())
    }

    /// Same monomial with the exponent of `v` replaced.
    pub fn with_exponent(&self, v: usize, exp: u32) -> Monomial {
        let mut out = self.0.clone();
        if out.len() <= v {
            out.resize(v + 1, 0);
        }
        out[v] = exp;
        Monomial(out).trimmed()
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, _)| v)
    }
}

/// Graded lexicographic order with `x_0 > x_1 > ...`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            (0..n)
                .map(|i| self.exponent(i).cmp(&other.exponent(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

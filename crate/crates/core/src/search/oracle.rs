//! Second implementation of the sweep-only bounds for univariate sums.
//!
//! Everything here runs on dense [`UniPoly`] values: radicals and power-free
//! parts come from Yun's decomposition, ranks from a local elimination, and
//! the per-factor counts from inclusion-exclusion over subset gcds. None of
//! the gcd-free basis machinery used by the verifiers is involved.

use num_rational::BigRational;

use crate::bounds::TheoremId;
use crate::cycfield::{CycNumber, CycloField};
use crate::poly::UniPoly;

/// One evaluated inequality, keyed like the verifiers' entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEntry {
    pub key: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    NotApplicable,
    HypothesesFailed,
    Entries(Vec<OracleEntry>),
}

/// Theorems the oracle knows how to evaluate.
pub const ORACLE_THEOREMS: [TheoremId; 10] = [
    TheoremId::Mason,
    TheoremId::ShapiroSparer,
    TheoremId::RadicalSum,
    TheoremId::RadicalProduct,
    TheoremId::RhoBound,
    TheoremId::SigmaBound,
    TheoremId::Davenport,
    TheoremId::BrownawellMasser,
    TheoremId::DivisorChain,
    TheoremId::SpecialPosition,
];

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn half(n: i64) -> BigRational {
    BigRational::new(n.into(), 2.into())
}

fn pairs(a: i64) -> i64 {
    if a < 2 {
        0
    } else {
        a * (a - 1) / 2
    }
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

fn entry(key: impl Into<String>, lhs: BigRational, rhs: BigRational) -> OracleEntry {
    OracleEntry {
        key: key.into(),
        lhs,
        rhs,
        required: true,
    }
}

/// Cached facts about one tuple.
pub struct Tuple {
    fs: Vec<UniPoly>,
    field: CycloField,
    yun: Vec<Vec<(usize, u32)>>,
    product_yun: Vec<(usize, u32)>,
}

fn yun_degrees(f: &UniPoly) -> Vec<(usize, u32)> {
    f.square_free_decomposition()
        .expect("nonzero")
        .into_iter()
        .map(|(s, j)| (s.degree().unwrap_or(0), j))
        .collect()
}

fn power_free(yun: &[(usize, u32)], e: u32) -> i64 {
    yun.iter().map(|&(deg, j)| deg as i64 * i64::from(j.min(e))).sum()
}

fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a UniPoly>, field: &CycloField) -> UniPoly {
    polys
        .into_iter()
        .fold(UniPoly::zero(field), |acc, f| acc.gcd(f).expect("gcd"))
}

fn lcm(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let g = a.gcd(b).expect("gcd");
    a.mul(b).exact_div(&g).expect("gcd divides").monic()
}

#[allow(clippy::needless_range_loop)]
fn rank(rows: &[Vec<CycNumber>], field: &CycloField) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<CycNumber>> = rows
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.resize(cols, field.zero());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..cols {
                let step = &factor * &m[r][j];
                m[i][j] = &m[i][j] - &step;
            }
        }
        r += 1;
    }
    r
}

impl Tuple {
    pub fn new(fs: Vec<UniPoly>) -> Self {
        let field = fs[0].field().clone();
        let yun = fs.iter().map(yun_degrees).collect();
        let product = fs.iter().fold(UniPoly::one(&field), |acc, f| acc.mul(f));
        let product_yun = yun_degrees(&product);
        Tuple {
            fs,
            field,
            yun,
            product_yun,
        }
    }

    fn n(&self) -> usize {
        self.fs.len()
    }

    fn degree(&self, i: usize) -> i64 {
        self.fs[i].degree().unwrap_or(0) as i64
    }

    fn max_degree(&self) -> BigRational {
        q((0..self.n()).map(|i| self.degree(i)).max().unwrap_or(0))
    }

    fn constants(&self) -> usize {
        self.fs.iter().filter(|f| f.is_constant()).count()
    }

    fn span(&self, idx: &[usize]) -> usize {
        let rows: Vec<Vec<CycNumber>> = idx.iter().map(|&i| self.fs[i].coeffs().to_vec()).collect();
        rank(&rows, &self.field)
    }

    fn d(&self) -> usize {
        self.span(&(0..self.n()).collect::<Vec<_>>())
    }

    fn r_e(&self, i: usize, e: u32) -> i64 {
        power_free(&self.yun[i], e)
    }

    fn r_product_e(&self, e: u32) -> i64 {
        power_free(&self.product_yun, e)
    }

    fn subset_gcd(&self, idx: &[usize]) -> UniPoly {
        gcd_all(idx.iter().map(|&i| &self.fs[i]), &self.field)
    }

    fn vanishes(&self, idx: &[usize]) -> bool {
        idx.iter()
            .fold(UniPoly::zero(&self.field), |acc, &i| acc.add(&self.fs[i]))
            .is_zero()
    }

    /// Vanishing subsets, the full index set included.
    fn vanishing_sets(&self) -> Vec<Vec<usize>> {
        subsets(self.n()).filter(|s| self.vanishes(s)).collect()
    }

    fn has_vanishing_proper_subsum(&self) -> bool {
        self.vanishing_sets().iter().any(|s| s.len() < self.n())
    }

    fn all_constant(&self) -> bool {
        self.constants() == self.n()
    }

    fn pairwise_coprime(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.subset_gcd(&[i, j]).is_constant()))
    }

    fn strict_gcd(&self) -> bool {
        self.vanishing_sets().iter().all(|s| self.subset_gcd(s).is_constant())
    }

    fn similar(&self, i: usize, j: usize) -> bool {
        self.span(&[i, j]) == 1
    }

    fn not_all_similar(&self) -> bool {
        (1..self.n()).any(|i| !self.similar(0, i))
    }

    fn deg_bounded(&self) -> bool {
        let bound = self.degree(self.n() - 1);
        self.vanishing_sets()
            .iter()
            .all(|s| self.subset_gcd(s).degree().unwrap_or(0) as i64 <= bound)
    }

    fn gcd_one(&self) -> bool {
        self.subset_gcd(&(0..self.n()).collect::<Vec<_>>()).is_constant()
    }

    /// `sum_p deg p * (C(n-1,2) - C(m_p - 1, 2)) - C(n-1,2)`, where `m_p`
    /// counts the terms `p` does not divide. The total degree of the primes
    /// dividing exactly `t` terms comes from the degrees of the radicals of
    /// all subset gcds by binomial inversion.
    fn brownawell_masser_rhs(&self) -> BigRational {
        let n = self.n();
        let c: Vec<i64> = (0..=n)
            .map(|j| {
                if j == 0 {
                    return 0;
                }
                subsets(n)
                    .filter(|s| s.len() == j)
                    .map(|s| power_free(&yun_degrees(&self.subset_gcd(&s)), 1))
                    .sum()
            })
            .collect();
        let top = pairs(n as i64 - 1);
        let mut rhs = -top;
        for t in 1..=n {
            let exact: i64 = (t..=n)
                .map(|j| if (j - t) % 2 == 0 { 1 } else { -1 } * binom(j, t) * c[j])
                .sum();
            let m = (n - t) as i64;
            rhs += exact * (top - pairs(m - 1));
        }
        q(rhs)
    }

    /// `h_i = gcd` over `i`-subsets of their lcm.
    fn divisor_chain(&self) -> Vec<UniPoly> {
        let n = self.n();
        (1..=n)
            .map(|i| {
                let lcms: Vec<UniPoly> = subsets(n)
                    .filter(|s| s.len() == i)
                    .map(|s| {
                        s.iter()
                            .fold(UniPoly::one(&self.field), |acc, &j| lcm(&acc, &self.fs[j]))
                    })
                    .collect();
                gcd_all(&lcms, &self.field)
            })
            .collect()
    }
}

fn sweep(lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    lo..=hi
}

fn predav(t: &Tuple, label: &str, required: bool) -> Vec<OracleEntry> {
    let n = t.n();
    let head = (0..n - 1).map(|i| t.degree(i)).max().unwrap_or(0);
    let lhs = q(head - t.degree(n - 1));
    let r: i64 = (0..n - 1).map(|i| t.r_e(i, 1)).sum();
    sweep(t.d(), n.saturating_sub(t.constants()))
        .map(|dp| {
            let rhs = q(dp as i64 - 1) * (q(r) - half(dp as i64));
            OracleEntry {
                key: format!("{label} d'={dp}"),
                lhs: lhs.clone(),
                rhs,
                required,
            }
        })
        .collect()
}

/// Evaluates `id` without Wronskians. `None` for theorems outside [`ORACLE_THEOREMS`].
pub fn evaluate(id: TheoremId, fs: &[UniPoly]) -> Option<OracleVerdict> {
    let t = Tuple::new(fs.to_vec());
    let n = t.n();
    let lhs = t.max_degree();
    let v = match id {
        TheoremId::Mason | TheoremId::ShapiroSparer => {
            if (id == TheoremId::Mason && n != 3) || n < 3 {
                return Some(OracleVerdict::NotApplicable);
            }
            if t.all_constant() || !t.pairwise_coprime() {
                return Some(OracleVerdict::HypothesesFailed);
            }
            let r = q(t.r_product_e(1));
            if id == TheoremId::Mason {
                vec![entry("mason", lhs, &r - q(1))]
            } else {
                let (nn, k) = (n as i64, t.constants() as i64);
                let mut out = vec![entry("shapiro-sparer", lhs.clone(), q(nn - 2) * (&r - q(1)))];
                if k <= 1 {
                    out.push(entry("refined k<=1", lhs.clone(), q(nn - 2) * (&r - half(nn - 1))));
                }
                if k >= 1 {
                    out.push(entry("refined k>=1", lhs, q(nn - k - 1) * (&r - half(nn - k))));
                }
                out
            }
        }
        TheoremId::RadicalSum | TheoremId::RadicalProduct | TheoremId::RhoBound | TheoremId::SigmaBound => {
            if n < 3 {
                return Some(OracleVerdict::NotApplicable);
            }
            if t.all_constant() || !t.strict_gcd() {
                return Some(OracleVerdict::HypothesesFailed);
            }
            let nn = n as i64;
            let d = t.d();
            let sum_r = |e: u32| (0..n).map(|i| t.r_e(i, e)).sum::<i64>();
            match id {
                TheoremId::RadicalSum => vec![entry("radical-sum", lhs, q(nn - 2) * q(sum_r(1) - 1))],
                TheoremId::RadicalProduct => {
                    vec![entry(
                        "radical-product",
                        lhs,
                        q(pairs(nn - 1)) * q(t.r_product_e(1) - 1),
                    )]
                }
                TheoremId::RhoBound => {
                    let mut out = Vec::new();
                    if let Some(best) = (2..=d).map(|rho| sum_r(rho as u32 - 1) - pairs(rho as i64)).max() {
                        out.push(entry(format!("klhy-exists rho in [2,{d}]"), lhs.clone(), q(best)));
                    }
                    let k = t.constants();
                    for dp in sweep(d, n - k + 1) {
                        let rhs = q(dp as i64 - 1) * (q(sum_r(1)) - half(dp as i64));
                        out.push(entry(format!("kl d'={dp}"), lhs.clone(), rhs));
                    }
                    out
                }
                _ => {
                    let top = pairs(d as i64);
                    let mut out = Vec::new();
                    if let Some(best) = (1..=top).map(|s| t.r_product_e(s as u32) - s).max() {
                        out.push(entry(format!("klahy-exists sigma in [1,{top}]"), lhs.clone(), q(best)));
                    }
                    out.push(entry(format!("kla d'={d}"), lhs, q(top) * q(t.r_product_e(1) - 1)));
                    out
                }
            }
        }
        TheoremId::Davenport => {
            if n < 3 {
                return Some(OracleVerdict::NotApplicable);
            }
            if !t.not_all_similar() || !t.deg_bounded() {
                return Some(OracleVerdict::HypothesesFailed);
            }
            let mut out = predav(&t, "predav", true);
            let has_constants = (0..n - 1).any(|i| t.fs[i].is_constant());
            if !t.fs[n - 1].is_constant() && has_constants {
                let mut last = t.fs[n - 1].clone();
                let mut kept = Vec::new();
                for f in &t.fs[..n - 1] {
                    if f.is_constant() {
                        last = last.add(f);
                    } else {
                        kept.push(f.clone());
                    }
                }
                kept.push(last);
                let merged = Tuple::new(kept);
                if merged.n() >= 3 && merged.not_all_similar() && merged.deg_bounded() {
                    out.extend(predav(&merged, "predav-consolidated", false));
                }
            }
            out
        }
        TheoremId::BrownawellMasser | TheoremId::DivisorChain => {
            if n < 3 {
                return Some(OracleVerdict::NotApplicable);
            }
            if t.all_constant() || !t.gcd_one() || t.has_vanishing_proper_subsum() {
                return Some(OracleVerdict::HypothesesFailed);
            }
            let c = pairs(n as i64 - 1);
            if id == TheoremId::BrownawellMasser {
                vec![entry("thA", lhs, t.brownawell_masser_rhs())]
            } else {
                let h: Vec<Vec<(usize, u32)>> = t.divisor_chain().iter().map(yun_degrees).collect();
                let weighted: i64 = (1..=n).map(|i| (i as i64 - 2) * power_free(&h[i - 1], 1)).sum();
                let trimmed: i64 = (3..=n).map(|i| power_free(&h[i - 1], i as u32 - 2)).sum();
                vec![
                    entry("thaa", lhs.clone(), q(weighted - c)),
                    entry("thaa-power-free", lhs, q(trimmed - c)),
                ]
            }
        }
        TheoremId::SpecialPosition => {
            if n < 3 {
                return Some(OracleVerdict::NotApplicable);
            }
            let d = t.d();
            let general = subsets(n).filter(|s| s.len() == d).all(|s| t.span(&s) == d);
            if !general {
                return Some(OracleVerdict::NotApplicable);
            }
            if t.all_constant() || !t.strict_gcd() {
                return Some(OracleVerdict::HypothesesFailed);
            }
            let scale = BigRational::new(1.into(), ((n - d) as i64).into());
            let rho_sum: i64 = (0..n).map(|i| t.r_e(i, d as u32 - 1)).sum();
            let sigma = pairs(d as i64);
            vec![
                entry(
                    format!("dset rho={d}"),
                    lhs.clone(),
                    &scale * q(rho_sum - pairs(d as i64)),
                ),
                entry(
                    format!("dseta sigma={sigma}"),
                    lhs,
                    &scale * q(t.r_product_e(sigma as u32) - sigma),
                ),
            ]
        }
        _ => return None,
    };
    Some(OracleVerdict::Entries(v))
}

//! Gaussian elimination over a cyclotomic field.

use std::collections::BTreeMap;

use crate::cycfield::{CycNumber, CycloField};
use crate::poly::{Monomial, Polynomial};

pub type Matrix = Vec<Vec<CycNumber>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    row_reduce(&mut m).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(field: &CycloField, m: &Matrix, cols: usize) -> Vec<Vec<CycNumber>> {
    let mut r = m.clone();
    let pivots = row_reduce(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[row][f];
            }
            v
        })
        .collect()
}

/// Some `x` with `a x = b`, if one exists.
pub fn solve(field: &CycloField, a: &Matrix, b: &[CycNumber]) -> Option<Vec<CycNumber>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect())
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Coefficient vectors of `fs` over the union of their monomials: one row per polynomial.
pub fn coefficient_rows(field: &CycloField, fs: &[Polynomial]) -> Matrix {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for f in fs {
        for (m, _) in f.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    fs.iter()
        .map(|f| {
            let mut row = vec![field.zero(); index.len()];
            for (m, c) in f.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect()
}

/// Same data transposed: one column per polynomial.
pub fn coefficient_columns(field: &CycloField, fs: &[Polynomial]) -> Matrix {
    let rows = coefficient_rows(field, fs);
    let height = rows.first().map_or(0, Vec::len);
    (0..height)
        .map(|r| rows.iter().map(|row| row[r].clone()).collect())
        .collect()
}

/// Dimension of the span of `fs` over the field.
pub fn linear_rank(fs: &[Polynomial]) -> usize {
    let Some(first) = fs.first() else {
        return 0;
    };
    rank(&coefficient_rows(first.field(), fs))
}

/// `mu` with `target = sum mu_k basis_k`, if `target` lies in the span.
pub fn express_in_span(target: &Polynomial, basis: &[Polynomial]) -> Option<Vec<CycNumber>> {
    let field = target.field();
    let mut all = basis.to_vec();
    all.push(target.clone());
    let cols = coefficient_columns(field, &all);
    let a: Matrix = cols.iter().map(|r| r[..basis.len()].to_vec()).collect();
    let b: Vec<CycNumber> = cols.iter().map(|r| r[basis.len()].clone()).collect();
    if a.is_empty() {
        return Some(vec![field.zero(); basis.len()]);
    }
    solve(field, &a, &b)
}

/// Relations `mu` with `sum mu_i fs_i = 0`, as a basis.
pub fn linear_relations(fs: &[Polynomial]) -> Vec<Vec<CycNumber>> {
    let Some(first) = fs.first() else {
        return Vec::new();
    };
    let field = first.field();
    nullspace(field, &coefficient_columns(field, fs), fs.len())
}

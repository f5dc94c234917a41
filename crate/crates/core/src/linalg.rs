//! Exact linear algebra over a field context: reduced echelon forms, kernels,
//! and an incremental row-span used for graded generator tests.

use crate::field::{Ctx, FieldElement};

/// Reduced row echelon form in place; returns the pivot column of each
/// surviving row. Pivot choice is deterministic: columns left to right,
/// first row with a nonzero entry top-down.
pub fn rref(rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let inv = rows[next_row][col]
            .inv()
            .expect("pivot entry is nonzero");
        for entry in rows[next_row].iter_mut() {
            if !entry.is_zero() {
                *entry = entry.mul(&inv);
            }
        }
        let pivot = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (a, b) in row.iter_mut().zip(&pivot) {
                if !b.is_zero() {
                    *a = a.sub(&factor.mul(b));
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(next_row);
    pivots
}

pub fn rank(mut rows: Vec<Vec<FieldElement>>) -> usize {
    rref(&mut rows).len()
}

/// Basis of the right kernel {v : Mv = 0}. One basis vector per free column,
/// in ascending free-column order.
pub fn kernel_basis(ctx: &Ctx, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![FieldElement::zero(ctx); ncols];
        v[free] = FieldElement::one(ctx);
        for (row, &pc) in m.iter().zip(&pivots) {
            // row reads: v[pc] + sum_{free cols c} row[c] * v[c] = 0
            if !row[free].is_zero() {
                v[pc] = row[free].neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained reduced row span, for exact membership tests.
#[derive(Debug, Clone)]
pub struct RowSpan {
    ncols: usize,
    /// Rows in reduced echelon form, sorted by pivot column.
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(_ctx: &Ctx, ncols: usize) -> Self {
        RowSpan {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Reduces `v` against the span; the result is zero iff `v` is a member.
    pub fn reduce(&self, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a = a.sub(&factor.mul(b));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v.to_vec()).iter().all(|c| c.is_zero())
    }

    /// Inserts a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: Vec<FieldElement>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero pivot");
        for c in v.iter_mut() {
            if !c.is_zero() {
                *c = c.mul(&inv);
            }
        }
        // Eliminate the new pivot column from existing rows to stay reduced.
        for row in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a = a.sub(&factor.mul(b));
                    }
                }
            }
        }
        let at = self
            .pivots
            .iter()
            .position(|&p| p > pivot)
            .unwrap_or(self.pivots.len());
        self.pivots.insert(at, pivot);
        self.rows.insert(at, v);
        true
    }
}

//! Dense and sparse row reduction over an exact [`Field`].
//!
//! [`rref`] is the reference contract: the unique reduced row echelon form.
//! The graded-piece computations only need ranks of spans of very sparse
//! vectors, so they go through [`Echelon`], an incremental sparse echelon
//! basis. [`subspace_dim`] uses the sparse route; tests cross-check it against
//! the dense one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A dense row-major matrix whose entries all lie in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

fn check_field(field: Field, s: &Scalar) -> Result<()> {
    if s.field() != field {
        return Err(Error::FieldMismatch {
            expected: field,
            found: s.field(),
        });
    }
    Ok(())
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            check_field(field, e)?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Stacks row vectors. The field is taken from the first entry; an empty
    /// row list needs it given explicitly.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} among rows of length {cols}",
                bad.len()
            )));
        }
        let n = rows.len();
        Matrix::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        Matrix {
            field,
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Reduced row echelon form and rank.
///
/// Gauss-Jordan elimination, pivot column scanned left to right, pivot row the
/// lowest-indexed candidate. The result does not depend on the tie-break since
/// the RREF of a matrix is unique.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(piv) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(piv, rank);
        let inv = a.get(rank, col).inv().expect("nonzero pivot");
        for c in col..a.cols {
            let v = a.get(rank, c).mul(&inv);
            a.entries[rank * a.cols + c] = v;
        }
        for r in 0..a.rows {
            if r == rank || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols {
                let v = a.get(r, c).sub(&factor.mul(a.get(rank, c)));
                a.entries[r * a.cols + c] = v;
            }
        }
        rank += 1;
    }
    (a, rank)
}

/// A sparse vector: `(column, nonzero value)` pairs sorted by column.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Dimension of the span of `rows`. Returns 0 for no rows.
pub fn subspace_dim(rows: &[Vec<Scalar>]) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    let len = first.len();
    let field = match first.first() {
        Some(s) => s.field(),
        None => return Ok(0),
    };
    let mut ech = Echelon::new(field);
    for row in rows {
        if row.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} among vectors of length {len}",
                row.len()
            )));
        }
        let mut sv = SparseVec::new();
        for (c, s) in row.iter().enumerate() {
            check_field(field, s)?;
            if !s.is_zero() {
                sv.push((c, s.clone()));
            }
        }
        ech.insert(sv);
    }
    Ok(ech.rank())
}

/// Incrementally built echelon basis of a subspace, stored sparsely.
///
/// Every stored row is monic at its leading (smallest) column, and no two rows
/// share a leading column.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the stored rows; the remainder (empty iff `v` lies
    /// in the span).
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        if v.is_empty() || self.pivots.is_empty() {
            return v;
        }
        let mut work: BTreeMap<usize, Scalar> = v.into_iter().collect();
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, s)| (*c, s.clone()));
            let Some((col, coef)) = next else { break };
            for (j, pv) in &self.pivots[&col] {
                let updated = match work.get(j) {
                    Some(old) => old.sub(&coef.mul(pv)),
                    None => coef.mul(pv).neg(),
                };
                if updated.is_zero() {
                    work.remove(j);
                } else {
                    work.insert(*j, updated);
                }
            }
            cursor = col + 1;
        }
        work.into_iter().collect()
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let rem = self.reduce(v);
        let Some((lead, lc)) = rem.first().cloned() else {
            return false;
        };
        let inv = lc.inv().expect("leading entry is nonzero");
        let row = if inv.is_one() {
            rem
        } else {
            rem.into_iter().map(|(c, s)| (c, s.mul(&inv))).collect()
        };
        self.pivots.insert(lead, row);
        true
    }
}

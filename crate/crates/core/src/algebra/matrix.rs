//! Dense square matrices over a finite field.

use std::fmt;
use std::sync::Arc;

use super::field::FiniteField;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct MatrixFF {
    field: Arc<FiniteField>,
    dim: usize,
    /// Row-major element codes.
    entries: Vec<u32>,
}

impl PartialEq for MatrixFF {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.dim == other.dim && self.entries == other.entries
    }
}
impl Eq for MatrixFF {}

impl std::hash::Hash for MatrixFF {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for MatrixFF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = self.entries.chunks(self.dim.max(1)).collect();
        write!(f, "{rows:?}")
    }
}

impl MatrixFF {
    pub fn new(field: &Arc<FiniteField>, dim: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&c| c >= field.order()) {
            return Err(Error::InvalidInput(format!(
                "element code {bad} out of range"
            )));
        }
        Ok(MatrixFF {
            field: Arc::clone(field),
            dim,
            entries,
        })
    }

    pub fn from_rows(field: &Arc<FiniteField>, rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        Self::new(field, dim, rows.concat())
    }

    pub fn identity(field: &Arc<FiniteField>, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        MatrixFF {
            field: Arc::clone(field),
            dim,
            entries,
        }
    }

    pub fn diagonal(field: &Arc<FiniteField>, diag: &[u32]) -> Self {
        let dim = diag.len();
        let mut m = Self::identity(field, dim);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = d;
        }
        m
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&c| c == 0)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.dim;
        let f = &self.field;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let slot = &mut entries[i * n + j];
                    *slot = f.add(*slot, f.mul(a, other.entries[k * n + j]));
                }
            }
        }
        Ok(MatrixFF {
            field: Arc::clone(f),
            dim: n,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(MatrixFF {
            field: Arc::clone(&self.field),
            dim: self.dim,
            entries,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(&self.field, self.dim);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).expect("same shape");
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u32>> = self
            .entries
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect();
        if self.dim == 0 {
            return 0;
        }
        row_reduce(&self.field, &mut rows, self.dim).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let f = &self.field;
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = self.entries[i * n..(i + 1) * n].to_vec();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let pivots = row_reduce(f, &mut rows, n);
        if pivots.len() != n {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        let entries = rows.iter().flat_map(|r| r[n..].to_vec()).collect();
        Ok(MatrixFF {
            field: Arc::clone(f),
            dim: n,
            entries,
        })
    }

    /// Multiplicative order, searching up to `cap`.
    pub fn order(&self, cap: u64) -> Result<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.mul(self)?;
        }
        Err(Error::SizeCapExceeded(format!(
            "matrix order exceeds {cap}"
        )))
    }

    /// Least `k >= 1` with `self^k = 0`, if nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut acc = self.clone();
        for k in 1..=self.dim.max(1) {
            if acc.is_zero() {
                return Some(k);
            }
            acc = acc.mul(self).expect("same shape");
        }
        None
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                (0..n).fold(0, |acc, j| {
                    self.field.add(acc, self.field.mul(self.get(i, j), v[j]))
                })
            })
            .collect()
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns, in place, to
/// reduced row echelon form. Returns the pivot columns; rows past the pivot
/// count are zero afterwards.
fn row_reduce(f: &FiniteField, rows: &mut [Vec<u32>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r][c]).expect("pivot nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let factor = rows[k][c];
                for j in 0..rows[k].len() {
                    let sub = f.mul(factor, rows[r][j]);
                    rows[k][j] = f.sub(rows[k][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Common fixed space `{v : Mv = v for all M}` of a set of matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSubspace {
    pub dimension: usize,
    /// Basis vectors read off the reduced echelon form: one per free
    /// column, with a 1 in that column.
    pub basis: Vec<Vec<u32>>,
}

/// Computes the common fixed space of `mats` acting on `F^r`. An empty
/// list needs the ambient dimension, so it is rejected.
pub fn fixed_subspace(mats: &[MatrixFF]) -> Result<FixedSubspace> {
    let first = mats
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no matrices given".into()))?;
    let n = first.dim;
    let f = Arc::clone(&first.field);
    let id = MatrixFF::identity(&f, n);
    let mut rows = Vec::with_capacity(mats.len() * n);
    for m in mats {
        first.compatible(m)?;
        let d = m.sub(&id)?;
        rows.extend(d.entries.chunks(n.max(1)).map(|r| r.to_vec()));
    }
    if n == 0 {
        return Ok(FixedSubspace {
            dimension: 0,
            basis: vec![],
        });
    }
    let pivots = row_reduce(&f, &mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u32; n];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[ri][fc]);
            }
            v
        })
        .collect();
    Ok(FixedSubspace {
        dimension: free.len(),
        basis,
    })
}

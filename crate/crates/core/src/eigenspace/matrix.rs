use std::sync::Arc;

use crate::error::{Error, Result};

use super::cyclotomic::{CyclotomicField, CyclotomicNumber, RationalJson};

pub type CycVector = Vec<CyclotomicNumber>;

/// Dense square-or-rectangular matrix over a cyclotomic field, row-major.
///
/// Acting on column vectors: column `j` is the image of the `j`-th basis vector.
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    field: Arc<CyclotomicField>,
    rows: usize,
    cols: usize,
    data: Vec<CyclotomicNumber>,
}

impl std::fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_struct("CycMatrix").field("rows", &rows).finish()
    }
}

impl CycMatrix {
    pub fn zero(field: &Arc<CyclotomicField>, rows: usize, cols: usize) -> Self {
        CycMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Arc<CyclotomicField>, d: usize) -> Self {
        let mut m = Self::zero(field, d, d);
        for i in 0..d {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn diagonal(field: &Arc<CyclotomicField>, entries: Vec<CyclotomicNumber>) -> Self {
        let mut m = Self::zero(field, entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_rows(field: &Arc<CyclotomicField>, rows: Vec<CycVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "matrix rows have different lengths".into(),
            ));
        }
        Ok(CycMatrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Arc<CyclotomicField>, dim: usize, columns: &[CycVector]) -> Self {
        let mut m = Self::zero(field, dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_json(
        field: &Arc<CyclotomicField>,
        rows: &[Vec<Vec<RationalJson>>],
    ) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| field.from_json(c))
                    .collect::<Result<CycVector>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, rows)
    }

    pub fn to_json(&self) -> Vec<Vec<Vec<RationalJson>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_json()).collect())
            .collect()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> CycVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.field, self.rows)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// `self - c * I`.
    pub fn shift(&self, c: &CyclotomicNumber) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = out.get(i, i).sub(c);
            out.set(i, i, v);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[CyclotomicNumber]) -> CycVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !x.is_zero() && !a.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in (0..m.rows).filter(|&i| i != r) {
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<CycVector> {
        let (m, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, f).neg();
            }
            v
        })
        .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let d = self.rows;
        let mut aug = Self::zero(&self.field, d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, d + i, self.field.one());
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < d || pivots[d - 1] != d - 1 {
            return None;
        }
        let mut out = Self::zero(&self.field, d, d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, m.get(i, d + j).clone());
            }
        }
        Some(out)
    }
}

pub fn is_zero_vector(v: &[CyclotomicNumber]) -> bool {
    v.iter().all(CyclotomicNumber::is_zero)
}

//! Dense matrices over a FieldSpec, row-major.
//!
//! Elimination over F_2 uses word-packed rows when the width fits in a
//! machine word; the packed and generic routes have identical observable
//! semantics (asserted in tests).

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    /// Element codes, row-major, length rows*cols.
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_codes(field: FieldSpec, rows: usize, cols: usize, codes: &[u64]) -> Result<Matrix> {
        if codes.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                codes.len()
            )));
        }
        for &c in codes {
            field.element(c)?;
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            data: codes.to_vec(),
        })
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            field,
            data: rows.iter().flatten().map(|e| e.code()).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.data[i * self.cols + j]).unwrap()
    }
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v.code();
    }
    pub(crate) fn codes(&self) -> &[u64] {
        &self.data
    }
    pub(crate) fn row_codes(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reinterpret prime-field entries inside an extension of the same
    /// characteristic; constants keep their codes.
    pub fn lifted(&self, ext: &FieldSpec) -> Result<Matrix> {
        if !self.field.is_prime_field() || ext.p() != self.field.p() {
            return Err(Error::FieldMismatch(format!(
                "cannot lift {:?} entries into {:?}",
                self.field, ext
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: ext.clone(),
            data: self.data.clone(),
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Vertical stack; fields and widths must agree.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("stack".into()));
        }
        if self.cols != other.cols {
            return Err(Error::Shape(format!("stack widths {} vs {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field.clone(),
            data,
        })
    }

    /// Horizontal concatenation; fields and heights must agree.
    pub fn augment(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("augment".into()));
        }
        if self.rows != other.rows {
            return Err(Error::Shape(format!("augment heights {} vs {}", self.rows, other.rows)));
        }
        let mut out = Matrix::zero(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols]
                .copy_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            out.data[i * out.cols + self.cols..(i + 1) * out.cols]
                .copy_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(out)
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("mat_mul".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "mat_mul inner dimensions {} vs {}",
                self.cols, other.rows
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.data[i * self.cols + t];
                if a == 0 {
                    continue;
                }
                let a = f.element(a).unwrap();
                for j in 0..other.cols {
                    let b = f.element(other.data[t * other.cols + j]).unwrap();
                    let cur = f.element(out.data[i * other.cols + j]).unwrap();
                    out.data[i * other.cols + j] = f.add(cur, f.mul(a, b)).code();
                }
            }
        }
        Ok(out)
    }

    fn gf2_packable(&self) -> bool {
        self.field.order() == 2 && self.cols <= 64
    }

    pub(crate) fn pack_gf2(&self) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                self.row_codes(i)
                    .iter()
                    .enumerate()
                    .fold(0u64, |w, (j, &c)| w | c << j)
            })
            .collect()
    }

    fn unpack_gf2(&self, words: &[u64]) -> Matrix {
        let mut out = Matrix::zero(self.field.clone(), words.len(), self.cols);
        for (i, &w) in words.iter().enumerate() {
            for j in 0..self.cols {
                out.data[i * self.cols + j] = w >> j & 1;
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        if self.gf2_packable() {
            let mut words = self.pack_gf2();
            let pivots = rref_gf2(&mut words, self.cols);
            (self.unpack_gf2(&words), pivots)
        } else {
            self.rref_generic()
        }
    }

    fn rref_generic(&self) -> (Matrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.data[i * m.cols + col] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(r * m.cols + j, pr * m.cols + j);
                }
            }
            let inv = f.inv(f.element(m.data[r * m.cols + col]).unwrap()).unwrap();
            for j in col..m.cols {
                let v = f.element(m.data[r * m.cols + j]).unwrap();
                m.data[r * m.cols + j] = f.mul(v, inv).code();
            }
            for i in 0..m.rows {
                if i == r || m.data[i * m.cols + col] == 0 {
                    continue;
                }
                let factor = f.element(m.data[i * m.cols + col]).unwrap();
                for j in col..m.cols {
                    let a = f.element(m.data[i * m.cols + j]).unwrap();
                    let b = f.element(m.data[r * m.cols + j]).unwrap();
                    m.data[i * m.cols + j] = f.sub(a, f.mul(factor, b)).code();
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.gf2_packable() {
            let mut words = self.pack_gf2();
            return rank_gf2(&mut words, self.cols);
        }
        self.rref().1.len()
    }

    /// Rows spanning the right null space { x : self * x^T = 0 }, one row per
    /// free column in ascending column order. A 0 x n matrix has kernel F^n.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Matrix::zero(f.clone(), free.len(), self.cols);
        for (row, &fc) in free.iter().enumerate() {
            out.data[row * self.cols + fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = f.element(r.data[i * self.cols + fc]).unwrap();
                out.data[row * self.cols + pc] = f.neg(v).code();
            }
        }
        out
    }

    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("det of {}x{}", self.rows, self.cols)));
        }
        let f = &self.field;
        match self.rows {
            0 => return Ok(f.one()),
            1 => return Ok(self.get(0, 0)),
            2 => {
                let (a, b, c, d) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
                return Ok(f.sub(f.mul(a, d), f.mul(b, c)));
            }
            _ => {}
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| m[i * n + col] != 0) else {
                return Ok(f.zero());
            };
            if pr != col {
                for j in 0..n {
                    m.swap(col * n + j, pr * n + j);
                }
                det = f.neg(det);
            }
            let pivot = f.element(m[col * n + col]).unwrap();
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for i in col + 1..n {
                if m[i * n + col] == 0 {
                    continue;
                }
                let factor = f.mul(f.element(m[i * n + col]).unwrap(), inv);
                for j in col..n {
                    let a = f.element(m[i * n + j]).unwrap();
                    let b = f.element(m[col * n + j]).unwrap();
                    m[i * n + j] = f.sub(a, f.mul(factor, b)).code();
                }
            }
        }
        Ok(det)
    }
}

pub(crate) fn rref_gf2(words: &mut [u64], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == words.len() {
            break;
        }
        let Some(pr) = (r..words.len()).find(|&i| words[i] >> col & 1 == 1) else {
            continue;
        };
        words.swap(r, pr);
        let row = words[r];
        for (i, w) in words.iter_mut().enumerate() {
            if i != r && *w >> col & 1 == 1 {
                *w ^= row;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub(crate) fn rank_gf2(words: &mut [u64], cols: usize) -> usize {
    let mut r = 0;
    for col in 0..cols {
        if r == words.len() {
            break;
        }
        let Some(pr) = (r..words.len()).find(|&i| words[i] >> col & 1 == 1) else {
            continue;
        };
        words.swap(r, pr);
        let row = words[r];
        for w in words.iter_mut().skip(r + 1) {
            if *w >> col & 1 == 1 {
                *w ^= row;
            }
        }
        r += 1;
    }
    r
}

/// Rank by forward elimination on a raw row-major code buffer; no
/// allocation, the buffer is clobbered. The slow-lane twin of rank_gf2 for
/// hot pairwise loops over odd-characteristic fields.
pub(crate) fn rank_generic_codes(
    field: &FieldSpec,
    data: &mut [u64],
    rows: usize,
    cols: usize,
) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + col] != 0) else {
            continue;
        };
        if pr != r {
            for j in col..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let pivot = field.element(data[r * cols + col]).unwrap();
        let inv = field.inv(pivot).unwrap();
        for i in r + 1..rows {
            let lead = data[i * cols + col];
            if lead == 0 {
                continue;
            }
            let factor = field.mul(field.element(lead).unwrap(), inv);
            for j in col..cols {
                let sub = field.mul(factor, field.element(data[r * cols + j]).unwrap());
                data[i * cols + j] = field
                    .sub(field.element(data[i * cols + j]).unwrap(), sub)
                    .code();
            }
        }
        r += 1;
    }
    r
}

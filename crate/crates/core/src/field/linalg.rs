//! Dense matrices over a [`FieldCtx`] and Gaussian elimination.

use super::{FieldCtx, FieldElem};

/// Row-major dense matrix of raw field values. The field is supplied by the
/// caller on every operation that needs arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn from_elems(rows: &[Vec<FieldElem>]) -> Self {
        let raw: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|e| e.raw()).collect()).collect();
        Self::from_rows(&raw)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let v = f.add_raw(out.get(r, c), f.mul_raw(a, b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldCtx, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, b))))
            .collect()
    }

    pub fn add_assign(&mut self, f: &FieldCtx, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add_raw(*a, b);
        }
    }

    pub fn scale(&mut self, f: &FieldCtx, s: u8) {
        for a in &mut self.data {
            *a = f.mul_raw(*a, s);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv_raw(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul_raw(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub_raw(self.get(i, j), f.mul_raw(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn kernel(&self, f: &FieldCtx) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u8; self.cols];
                x[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg_raw(m.get(r, fc));
                }
                x
            })
            .collect()
    }
}

/// Row rank of a matrix of field elements.
pub fn rank(f: &FieldCtx, m: &[Vec<FieldElem>]) -> usize {
    Matrix::from_elems(m).rank(f)
}

/// Incremental echelon basis used to pick independent candidates greedily.
///
/// Each stored row remembers its expression as a combination of the accepted
/// vectors, so a dependent vector can be written in the accepted basis.
#[derive(Debug, Clone)]
pub struct Echelon {
    width: usize,
    /// (pivot column, normalized row, combination over accepted vectors)
    rows: Vec<(usize, Vec<u8>, Vec<u8>)>,
    accepted: usize,
}

pub enum Reduction {
    /// The vector was independent and got index `n` among accepted vectors.
    Independent(usize),
    /// The vector equals this combination of accepted vectors.
    Dependent(Vec<u8>),
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new(), accepted: 0 }
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    pub fn insert(&mut self, f: &FieldCtx, v: &[u8]) -> Reduction {
        assert_eq!(v.len(), self.width);
        let mut residual = v.to_vec();
        // residual = v - sum coef_k row_k; track sum coef_k combo_k
        let mut combo = vec![0u8; self.accepted + 1];
        for (pc, row, rc) in &self.rows {
            let coef = residual[*pc];
            if coef == 0 {
                continue;
            }
            for (a, &b) in residual.iter_mut().zip(row) {
                *a = f.sub_raw(*a, f.mul_raw(coef, b));
            }
            for (a, &b) in combo.iter_mut().zip(rc) {
                *a = f.add_raw(*a, f.mul_raw(coef, b));
            }
        }
        match residual.iter().position(|&x| x != 0) {
            None => {
                combo.truncate(self.accepted);
                Reduction::Dependent(combo)
            }
            Some(pc) => {
                // residual = v_new - combo  =>  row = (v_new - combo) / lead
                let inv = f.inv_raw(residual[pc]);
                let idx = self.accepted;
                self.accepted += 1;
                for a in &mut residual {
                    *a = f.mul_raw(*a, inv);
                }
                let mut rc: Vec<u8> = combo.iter().map(|&c| f.mul_raw(f.neg_raw(c), inv)).collect();
                rc.resize(self.accepted, 0);
                rc[idx] = inv;
                for (_, _, c) in &mut self.rows {
                    c.resize(self.accepted, 0);
                }
                self.rows.push((pc, residual, rc));
                Reduction::Independent(idx)
            }
        }
    }
}

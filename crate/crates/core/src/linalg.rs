//! Dense exact linear algebra over a coefficient field.

use alloc::vec::Vec;

use crate::field::{CoefficientField, Coeff};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: CoefficientField,
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(field: &CoefficientField, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: alloc::vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &CoefficientField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &CoefficientField, cols: usize, rows: Vec<Vec<Coeff>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { field: field.clone(), rows: n, cols, data }
    }

    pub fn from_i64(field: &CoefficientField, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(field, cols, rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Coeff] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Coeff>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let k = &self.field;
        let mut out = Matrix::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        let v = k.add(out.get(i, j), &k.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Coeff]) -> Vec<Coeff> {
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = k.add(&acc, &k.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c));
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let b = self.get(r, j);
                    if !b.is_zero() {
                        let v = k.sub(self.get(i, j), &k.mul(&f, b));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Coeff>> {
        let k = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = alloc::vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = alloc::vec![k.zero(); self.cols];
            v[free] = k.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_space(&self) -> Matrix {
        let mut m = self.clone();
        let r = m.rref().len();
        m.data.truncate(r * self.cols);
        m.rows = r;
        m
    }

    pub fn det(&self) -> Coeff {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let k = self.field.clone();
        let mut m = self.clone();
        let mut det = k.one();
        for c in 0..self.cols {
            let Some(p) = (c..self.rows).find(|&i| !m.get(i, c).is_zero()) else { return k.zero() };
            if p != c {
                for j in 0..self.cols {
                    m.data.swap(p * self.cols + j, c * self.cols + j);
                }
                det = k.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = k.mul(&det, &piv);
            let inv = k.inv(&piv);
            for i in c + 1..self.rows {
                let f = k.mul(m.get(i, c), &inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = k.sub(m.get(i, j), &k.mul(&f, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[Coeff]) -> Option<Vec<Coeff>> {
        let k = &self.field;
        let mut aug = Matrix::zeros(k, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = alloc::vec![k.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Do two row spaces (same column count) coincide?
pub fn same_row_space(a: &Matrix, b: &Matrix) -> bool {
    a.row_space() == b.row_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nullspace_of_rank_one() {
        let k = CoefficientField::Rationals;
        let m = Matrix::from_i64(&k, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn determinant_and_solve() {
        let k = CoefficientField::Rationals;
        let m = Matrix::from_i64(&k, &[&[2, 1], &[1, 3]]);
        assert_eq!(m.det(), k.from_i64(5));
        let x = m.solve(&[k.from_i64(3), k.from_i64(4)]).unwrap();
        assert_eq!(m.mul_vec(&x), alloc::vec![k.from_i64(3), k.from_i64(4)]);
        let s = Matrix::from_i64(&k, &[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[k.from_i64(0), k.from_i64(1)]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 12)) {
            let k = CoefficientField::Rationals;
            let rows: Vec<&[i64]> = entries.chunks(4).collect();
            let m = Matrix::from_i64(&k, &rows);
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
            let t = m.transpose();
            prop_assert_eq!(t.rank(), m.rank());
        }

        #[test]
        fn det_multiplicative(a in proptest::collection::vec(-3i64..4, 9), b in proptest::collection::vec(-3i64..4, 9)) {
            let k = CoefficientField::Prime(101);
            let ma = Matrix::from_i64(&k, &a.chunks(3).collect::<Vec<_>>());
            let mb = Matrix::from_i64(&k, &b.chunks(3).collect::<Vec<_>>());
            prop_assert_eq!(ma.mul(&mb).det(), k.mul(&ma.det(), &mb.det()));
        }
    }
}

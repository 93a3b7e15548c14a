//! Dense matrices over a field: reduced row echelon form, rank and kernel.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Scalar>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F::Scalar]) -> Vec<F::Scalar> {
        assert_eq!(v.len(), self.cols);
        let k = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pr) = (lead..self.rows).find(|&r| !k.is_zero(self.get(r, c))) else {
                continue;
            };
            self.swap_rows(pr, lead);
            let inv = k.inv(self.get(lead, c));
            for j in c..self.cols {
                let v = k.mul(self.get(lead, j), &inv);
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                if r == lead || k.is_zero(self.get(r, c)) {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for j in c..self.cols {
                    let v = k.sub(self.get(r, j), &k.mul(&factor, self.get(lead, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel. Each vector has a 1 in its own free column
    /// and 0 in every other free column.
    pub fn kernel(&self) -> Vec<Vec<F::Scalar>> {
        let k = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![k.zero(); self.cols];
                v[free] = k.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = k.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

use crate::error::{Error, Result};
use crate::exactla::field::Field;

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// A particular solution (free variables set to zero) and a kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<E> {
    pub particular: Vec<E>,
    pub kernel: Vec<Vec<E>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix {
            data: vec![z; rows * cols],
            field,
            rows,
            cols,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, m.field.one());
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::dims("ragged rows"));
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: F, height: usize, cols: &[Vec<F::Elem>]) -> Result<Self> {
        let mut m = Self::zeros(field, height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != height {
                return Err(Error::dims("column height"));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims("matrix sum"));
        }
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::dims("hstack row count"));
        }
        let mut m = Self::zeros(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }

    /// Row reduces in place, pivoting only in the first `limit` columns.
    /// Pivots are the first nonzero entry scanning top-to-bottom within
    /// each column, columns taken left-to-right.
    pub fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut nz: Vec<(usize, F::Elem)> = Vec::new();
        for c in 0..limit.min(cols) {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(i, r);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            nz.clear();
            for j in c..cols {
                let v = self.get(r, j);
                if !f.is_zero(v) {
                    let s = f.mul(v, &inv);
                    self.set(r, j, s.clone());
                    nz.push((j, s));
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let base = i * cols;
                for (j, v) in &nz {
                    let cur = &self.data[base + j];
                    self.data[base + j] = f.sub_mul(cur, &factor, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Kernel basis read off the reduced form, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let Rref { reduced, pivots } = self.rref();
        kernel_from_rref(&reduced, &pivots, self.cols)
    }

    /// Basis of the column space: the nonzero rows of the reduced
    /// transpose, so the result is canonical.
    pub fn column_space(&self) -> Vec<Vec<F::Elem>> {
        let Rref { reduced, pivots } = self.transpose().rref();
        (0..pivots.len()).map(|i| reduced.row(i).to_vec()).collect()
    }

    /// Solves `self * x = b`; `Ok(None)` when inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Solution<F::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::dims(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place(self.cols);
        let rank = pivots.len();
        if (rank..self.rows).any(|i| !f.is_zero(aug.get(i, self.cols))) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(k, self.cols).clone();
        }
        Ok(Some(Solution {
            particular: x,
            kernel: kernel_from_rref(&aug, &pivots, self.cols),
        }))
    }
}

fn kernel_from_rref<F: Field>(r: &Matrix<F>, pivots: &[usize], ncols: usize) -> Vec<Vec<F::Elem>> {
    let f = r.field();
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); ncols];
            v[free] = f.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(k, free));
            }
            v
        })
        .collect()
}

/// Factorised coefficient matrix for repeated solves: stores `E` with
/// `E * A = R` in reduced form.
#[derive(Clone, Debug)]
pub struct Solver<F: Field> {
    reduced: Matrix<F>,
    transform: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Solver<F> {
    pub fn new(a: &Matrix<F>) -> Self {
        let f = a.field().clone();
        let aug = a.hstack(&Matrix::identity(f.clone(), a.rows())).expect("same rows");
        let mut aug = aug;
        let pivots = aug.rref_in_place(a.cols());
        let mut reduced = Matrix::zeros(f.clone(), a.rows(), a.cols());
        let mut transform = Matrix::zeros(f, a.rows(), a.rows());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                reduced.set(i, j, aug.get(i, j).clone());
            }
            for j in 0..a.rows() {
                transform.set(i, j, aug.get(i, a.cols() + j).clone());
            }
        }
        Solver {
            reduced,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &Matrix<F> {
        &self.reduced
    }

    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        kernel_from_rref(&self.reduced, &self.pivots, self.reduced.cols())
    }

    /// Particular solution of `A x = b` with free variables zero.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        let f = self.reduced.field();
        let y = self.transform.mul_vec(b)?;
        if y[self.rank()..].iter().any(|v| !f.is_zero(v)) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.reduced.cols()];
        for (k, &p) in self.pivots.iter().enumerate() {
            x[p] = y[k].clone();
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::field::{Fp, Rationals};
    use num_rational::BigRational;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn rref_of_rank_one_block() {
        let m = Matrix::from_rows(f5(), vec![vec![1, 2], vec![2, 4]]).unwrap();
        let r = m.rref();
        assert_eq!(r.reduced.row(0), &[1, 2]);
        assert_eq!(r.reduced.row(1), &[0, 0]);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn solve_returns_minimal_particular_and_kernel() {
        let m = Matrix::from_rows(f5(), vec![vec![1, 2], vec![2, 4]]).unwrap();
        let s = m.solve(&[1, 2]).unwrap().unwrap();
        assert_eq!(s.particular, vec![1, 0]);
        assert_eq!(s.kernel, vec![vec![3, 1]]);
        assert!(m.solve(&[1, 0]).unwrap().is_none());
    }

    #[test]
    fn solver_agrees_with_one_shot() {
        let m = Matrix::from_rows(f5(), vec![vec![0, 1, 3], vec![2, 4, 1], vec![2, 0, 4]]).unwrap();
        let s = Solver::new(&m);
        for b in [[1u32, 2, 3], [0, 0, 0], [4, 4, 1]] {
            let one = m.solve(&b).unwrap().map(|x| x.particular);
            assert_eq!(s.solve(&b).unwrap(), one);
        }
    }

    #[test]
    fn rationals_solve() {
        let q = Rationals;
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let m = Matrix::from_rows(q, vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]]).unwrap();
        let s = m.solve(&[r(1, 1), r(0, 1)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![r(3, 5), r(-1, 5)]);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn shape_errors() {
        let m = Matrix::from_rows(f5(), vec![vec![1, 2]]).unwrap();
        assert!(m.solve(&[1, 2]).is_err());
        assert!(m.mul(&m).is_err());
    }
}

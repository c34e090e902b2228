//! Dense exact matrices over the rationals: echelon forms, rank, kernels,
//! inverses, plus a sparse rank routine and the multiplication maps between
//! spaces of forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{monomial_basis, HomogPoly};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_vec(self.cols, self.rows, data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Matrix {
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().map(|a| a * k).collect(),
        )
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::from_vec(self.rows + other.rows, self.cols, data)
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
            .collect();
        Matrix::from_rows(rows)
    }

    /// Reduced row echelon form and the pivot columns.
    ///
    /// Within each column the pivot is the candidate entry with the largest
    /// absolute numerator.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, col).is_zero())
                .max_by(|&a, &b| {
                    m.get(a, col)
                        .numer()
                        .abs()
                        .cmp(&m.get(b, col).numer().abs())
                        .then(b.cmp(&a))
                });
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, col).recip();
            for j in col..m.cols {
                let v = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let sub = &f * m.get(r, j);
                    if !sub.is_zero() {
                        m.data[i * m.cols + j] -= sub;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = (0..n).map(|i| r.row(i)[n..].to_vec()).collect();
        Some(Matrix::from_rows(rows))
    }

    /// Basis of the row space, in reduced echelon form.
    pub fn row_space(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank and a kernel basis. Kernel vectors are read off the reduced echelon
/// form: one per free column, with a `1` in that column.
pub fn rank_kernel(m: &Matrix) -> (usize, Vec<Vec<Rational>>) {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols()).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rational::zero(); m.cols()];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        kernel.push(v);
    }
    (pivots.len(), kernel)
}

/// Echelon basis of the span of a list of equal-length vectors.
pub fn span_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_rows(vectors.to_vec()).row_space()
}

/// Matrix of multiplication by `f` from forms of degree `d_from` to forms
/// of degree `d_to` in `n + 1` variables. Rows index the target monomial
/// basis, columns the source basis, both in descending lexicographic order.
pub fn multiplication_matrix(f: &HomogPoly, n: usize, d_from: i64, d_to: i64) -> Result<Matrix> {
    if f.n_vars() != n + 1 {
        return Err(Error::VarCountMismatch {
            left: n + 1,
            right: f.n_vars(),
        });
    }
    if d_from < 0 || d_to < 0 {
        return Err(Error::DegreeMismatch(format!(
            "negative degree in multiplication map {d_from} -> {d_to}"
        )));
    }
    if !f.is_zero() && d_to - d_from != i64::from(f.degree()) {
        return Err(Error::DegreeMismatch(format!(
            "form of degree {} cannot map degree {d_from} to {d_to}",
            f.degree()
        )));
    }
    let src = monomial_basis(n + 1, d_from as u32);
    let tgt = monomial_basis(n + 1, d_to as u32);
    let index: HashMap<&[u32], usize> = tgt.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, s) in src.iter().enumerate() {
        for (e, c) in f.terms() {
            let prod: Vec<u32> = s.iter().zip(e).map(|(a, b)| a + b).collect();
            let i = index[prod.as_slice()];
            let v = m.get(i, j) + c;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Sparse row over the rationals.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Rank of a sparse matrix given by its rows. Uses plain forward elimination
/// keyed on the leading column; shares no code with [`Matrix::rref`].
pub fn sparse_rank(rows: Vec<SparseRow>) -> usize {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else { break };
            match pivots.get(&lead) {
                None => {
                    let inv = lead_val.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let f = lead_val.clone();
                    for (&j, pv) in p {
                        let e = row.entry(j).or_insert_with(Rational::zero);
                        *e -= &f * pv;
                        if e.is_zero() {
                            row.remove(&j);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

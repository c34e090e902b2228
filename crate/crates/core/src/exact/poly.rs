//! Homogeneous polynomials over the rationals and matrices of them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::matrix::Matrix;
use super::rational::{fmt_rational, qi, rational_from_json, Rational};
use crate::error::{Error, Result};

/// Exponent tuple of a monomial.
pub type Exponents = Vec<u32>;

/// All exponent tuples of `n_vars` variables summing to `degree`, in
/// descending lexicographic order (`x0^d` first, `x_{n}^d` last).
pub fn monomial_basis(n_vars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(prefix: &mut Exponents, remaining: usize, degree: u32, out: &mut Vec<Exponents>) {
        if remaining == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(prefix, remaining - 1, degree - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n_vars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut Vec::with_capacity(n_vars), n_vars, degree, &mut out);
    out
}

/// A homogeneous polynomial. Zero coefficients are never stored, and every
/// stored exponent tuple sums to `degree`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, Rational>,
}

impl HomogPoly {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        HomogPoly {
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(n_vars, 0);
        if !c.is_zero() {
            p.terms.insert(vec![0; n_vars], c);
        }
        p
    }

    /// The coordinate `x_i`.
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable index out of range");
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, coeff: Rational) -> Self {
        let degree = exps.iter().sum();
        let mut p = Self::zero(exps.len(), degree);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Linear form `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms(
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n_vars, degree);
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(Error::VarCountMismatch {
                    left: n_vars,
                    right: e.len(),
                });
            }
            let s: u32 = e.iter().sum();
            if s != degree {
                return Err(Error::DegreeMismatch(format!(
                    "monomial {e:?} has degree {s}, polynomial has degree {degree}"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same polynomial relabelled with a different declared degree; only
    /// meaningful for the zero polynomial.
    pub fn with_degree(mut self, degree: u32) -> Self {
        debug_assert!(self.is_zero() || self.degree == degree);
        self.degree = degree;
        self
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarCountMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        Ok(())
    }

    /// Sum. A zero operand adopts the degree of the other one.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        HomogPoly {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.n_vars, self.degree);
        }
        HomogPoly {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Product; the degree of the result is the sum of the degrees.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.n_vars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point with rational coordinates.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.n_vars {
            return Err(Error::VarCountMismatch {
                left: self.n_vars,
                right: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Sets the listed variables to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Self {
        HomogPoly {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the listed variables (in that order); all other variables
    /// must have been killed first.
    pub fn restrict_to_vars(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::zero(keep.len(), self.degree);
        for (e, c) in &self.terms {
            let kept: u32 = keep.iter().map(|&v| e[v]).sum();
            if kept != self.degree {
                return Err(Error::DegreeMismatch(
                    "term involves a dropped variable".into(),
                ));
            }
            out.add_term(keep.iter().map(|&v| e[v]).collect(), c.clone());
        }
        Ok(out)
    }

    /// JSON form: list of `{"coeff": "p/q", "exps": [...]}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"coeff": fmt_rational(c), "exps": e}))
                .collect(),
        )
    }

    /// Parses the JSON form. An empty list is the zero form of
    /// `default_degree`.
    pub fn from_json(v: &Value, n_vars: usize, default_degree: u32) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("polynomial must be a list, got {v}")))?;
        if arr.is_empty() {
            return Ok(Self::zero(n_vars, default_degree));
        }
        let mut terms = Vec::with_capacity(arr.len());
        let mut degree = None;
        for t in arr {
            let coeff = rational_from_json(
                t.get("coeff")
                    .ok_or_else(|| Error::Parse("term missing \"coeff\"".into()))?,
            )?;
            let exps: Exponents = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term missing \"exps\"".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|u| u32::try_from(u).ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent {x}")))
                })
                .collect::<Result<_>>()?;
            let d: u32 = exps.iter().sum();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::DegreeMismatch(format!(
                        "polynomial mixes degrees {d0} and {d}"
                    )))
                }
                _ => {}
            }
            terms.push((exps, coeff));
        }
        Self::from_terms(n_vars, degree.unwrap_or(default_degree), terms)
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest monomial first, matching the basis order.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        format!("x{v}")
                    } else {
                        format!("x{v}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Matrix of homogeneous forms in a common set of variables. Entries may have
/// different degrees (graded maps between sums of line bundles); use
/// [`PolyMatrix::uniform_degree`] where a single degree is required.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    n_vars: usize,
    entries: Vec<HomogPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, n_vars: usize, entries: Vec<HomogPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(p) = entries.iter().find(|p| p.n_vars() != n_vars) {
            return Err(Error::VarCountMismatch {
                left: n_vars,
                right: p.n_vars(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            n_vars,
            entries,
        })
    }

    pub fn from_rows(n_vars: usize, rows: Vec<Vec<HomogPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Self::new(r, c, n_vars, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize, n_vars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            n_vars,
            entries: vec![HomogPoly::zero(n_vars, 0); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn get(&self, i: usize, j: usize) -> &HomogPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: HomogPoly) {
        assert_eq!(p.n_vars(), self.n_vars);
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[HomogPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HomogPoly::is_zero)
    }

    /// The shared degree of all nonzero entries (`None` for the zero matrix).
    pub fn uniform_degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for (k, p) in self.entries.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(p.degree()),
                Some(d) if d != p.degree() => {
                    return Err(Error::DegreeMismatch(format!(
                        "entry ({}, {}) has degree {}, expected {d}",
                        k / self.cols,
                        k % self.cols,
                        p.degree()
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.n_vars != other.n_vars {
            return Err(Error::VarCountMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = HomogPoly::zero(self.n_vars, 0);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?).map_err(|_| {
                        Error::DegreeMismatch(format!(
                            "inhomogeneous product entry ({i}, {j})"
                        ))
                    })?;
                }
                out.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, self.n_vars, out)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            n_vars: self.n_vars,
            entries: out,
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().map(HomogPoly::neg).collect(),
            ..self.clone()
        }
    }

    /// Evaluates every entry at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Matrix> {
        let data = self
            .entries
            .iter()
            .map(|p| p.eval(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(self.rows, self.cols, data))
    }

    pub fn kill_vars(&self, vars: &[usize]) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().map(|p| p.kill_vars(vars)).collect(),
            ..self.clone()
        }
    }

    pub fn restrict_to_vars(&self, keep: &[usize]) -> Result<PolyMatrix> {
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            n_vars: keep.len(),
            entries: self
                .entries
                .iter()
                .map(|p| p.restrict_to_vars(keep))
                .collect::<Result<_>>()?,
        })
    }

    /// Coefficient matrix of the variable `x_v` in a matrix of linear forms.
    pub fn linear_coefficient(&self, v: usize) -> Matrix {
        let mut e = vec![0; self.n_vars];
        e[v] = 1;
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.entries.iter().map(|p| p.coeff(&e)).collect(),
        )
    }

    /// Builds `sum_v coeffs[v] x_v` from constant coefficient matrices.
    pub fn from_linear_coefficients(coeffs: &[Matrix]) -> Result<PolyMatrix> {
        let n_vars = coeffs.len();
        let (rows, cols) = coeffs.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        if coeffs.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::Shape("coefficient matrices differ in shape".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let lin: Vec<Rational> = coeffs.iter().map(|m| m.get(i, j).clone()).collect();
                entries.push(HomogPoly::linear(&lin));
            }
        }
        PolyMatrix::new(rows, cols, n_vars, entries)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    /// Parses a row-major list of polynomial lists; `default_degree(i, j)`
    /// gives the degree assigned to empty (zero) entries.
    pub fn from_json(
        v: &Value,
        n_vars: usize,
        default_degree: impl Fn(usize, usize) -> u32,
    ) -> Result<PolyMatrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be a list".into()))?;
            parsed.push(
                row.iter()
                    .enumerate()
                    .map(|(j, p)| HomogPoly::from_json(p, n_vars, default_degree(i, j)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        PolyMatrix::from_rows(n_vars, parsed)
    }
}

/// The constant `1` as a polynomial (for identity blocks).
pub fn one(n_vars: usize) -> HomogPoly {
    HomogPoly::constant(n_vars, qi(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn x(i: usize) -> HomogPoly {
        HomogPoly::var(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = x(0).add(&x(1)).unwrap();
        let m = x(0).sub(&x(1)).unwrap();
        let prod = p.mul(&m).unwrap();
        let expected = HomogPoly::from_terms(
            2,
            2,
            vec![(vec![2, 0], qi(1)), (vec![0, 2], qi(-1))],
        )
        .unwrap();
        assert_eq!(prod, expected);
        assert_eq!(prod.degree(), 2);
    }

    #[test]
    fn product_with_zero() {
        let p = x(0).add(&x(1)).unwrap();
        let z = HomogPoly::zero(2, 3);
        let prod = p.mul(&z).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prod.degree(), 4);
    }

    #[test]
    fn monomial_product() {
        let z0 = HomogPoly::var(3, 0);
        let z1 = HomogPoly::var(3, 1);
        let prod = z0.mul(&z1).unwrap();
        assert_eq!(prod.num_terms(), 1);
        assert_eq!(prod.coeff(&[1, 1, 0]), qi(1));
    }

    #[test]
    fn mismatched_variables() {
        let a = HomogPoly::var(2, 0);
        let b = HomogPoly::var(3, 0);
        assert!(matches!(a.mul(&b), Err(Error::VarCountMismatch { .. })));
    }

    #[test]
    fn inhomogeneous_sum_rejected() {
        let a = HomogPoly::var(2, 0);
        let b = a.mul(&a).unwrap();
        assert!(matches!(a.add(&b), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn basis_order() {
        assert_eq!(monomial_basis(2, 1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(
            monomial_basis(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(monomial_basis(4, 3).len(), 20);
        assert_eq!(monomial_basis(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn json_roundtrip() {
        let p = HomogPoly::from_terms(3, 2, vec![(vec![1, 1, 0], q(-1, 3)), (vec![0, 0, 2], qi(2))])
            .unwrap();
        let back = HomogPoly::from_json(&p.to_json(), 3, 0).unwrap();
        assert_eq!(p, back);
        let z = HomogPoly::from_json(&serde_json::json!([]), 3, 5).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 5);
    }

    #[test]
    fn eval_and_kill() {
        let p = HomogPoly::from_terms(3, 2, vec![(vec![1, 1, 0], qi(1)), (vec![0, 0, 2], qi(3))])
            .unwrap();
        assert_eq!(p.eval(&[qi(2), qi(3), qi(1)]).unwrap(), qi(9));
        assert_eq!(p.kill_vars(&[2]).num_terms(), 1);
    }

    #[test]
    fn poly_matrix_product() {
        // (x, y) * (y, -x)^T = 0
        let row = PolyMatrix::from_rows(2, vec![vec![x(0), x(1)]]).unwrap();
        let col = PolyMatrix::from_rows(2, vec![vec![x(1)], vec![x(0).neg()]]).unwrap();
        assert!(row.mul(&col).unwrap().is_zero());
        assert_eq!(row.uniform_degree().unwrap(), Some(1));
    }
}

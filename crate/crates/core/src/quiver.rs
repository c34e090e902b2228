//! Representations of the three-vertex quiver with `n + 1` arrows between
//! consecutive vertices, King stability vectors, and a search for
//! destabilizing subrepresentations.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::matrix::{span_basis, Matrix};
use crate::exact::poly::PolyMatrix;
use crate::exact::rational::{qi, rational_from_json, rational_to_json, Rational};
use crate::monad::LineBundleComplex;

/// `a[i]: V_{-1} -> V_0` and `b[i]: V_0 -> V_1`, one per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub n: usize,
    pub dims: [usize; 3],
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
}

fn matrix_to_json(m: &Matrix) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(rational_to_json).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::Shape(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == cols)
            .ok_or_else(|| Error::Shape(format!("row {i} must have {cols} entries")))?;
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, rational_from_json(x)?);
        }
    }
    Ok(m)
}

impl QuiverRep {
    pub fn new(n: usize, dims: [usize; 3], a: Vec<Matrix>, b: Vec<Matrix>) -> Result<Self> {
        let [u, v, w] = dims;
        if a.len() != n + 1 || b.len() != n + 1 {
            return Err(Error::Shape(format!("need {} matrices per arrow set", n + 1)));
        }
        if a.iter().any(|m| m.rows() != v || m.cols() != u) || b.iter().any(|m| m.rows() != w || m.cols() != v) {
            return Err(Error::Shape(format!("matrices do not fit dimension vector {dims:?}")));
        }
        Ok(QuiverRep { n, dims, a, b })
    }

    pub fn zero(n: usize, dims: [usize; 3]) -> Self {
        let [u, v, w] = dims;
        QuiverRep {
            n,
            dims,
            a: vec![Matrix::zeros(v, u); n + 1],
            b: vec![Matrix::zeros(w, v); n + 1],
        }
    }

    /// First pair `(i, j)` with `b_j a_i + b_i a_j != 0`, if any.
    pub fn relation_failure(&self) -> Option<(usize, usize)> {
        for i in 0..=self.n {
            for j in i..=self.n {
                let s = self.b[j].mul(&self.a[i]).add(&self.b[i].mul(&self.a[j]));
                if !s.is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn relations_hold(&self) -> bool {
        self.relation_failure().is_none()
    }

    /// Reassembles `alpha = sum a_i x_i`, `beta = sum b_i x_i`.
    pub fn to_monad(&self) -> Result<LineBundleComplex> {
        let [u, v, w] = self.dims;
        let lin = |ms: &[Matrix], rows: usize, cols: usize| -> Result<PolyMatrix> {
            if rows == 0 || cols == 0 {
                Ok(PolyMatrix::zeros(rows, cols, self.n + 1))
            } else {
                PolyMatrix::from_linear_coefficients(ms)
            }
        };
        LineBundleComplex::monad(self.n, u, v, w, lin(&self.a, v, u)?, lin(&self.b, w, v)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "dims": self.dims,
            "A": self.a.iter().map(matrix_to_json).collect::<Vec<_>>(),
            "B": self.b.iter().map(matrix_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("representation needs integer \"n\"".into()))? as usize;
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .filter(|d| d.len() == 3)
            .ok_or_else(|| Error::Parse("\"dims\" must be three natural numbers".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("bad dimension".into())))
            .collect::<Result<_>>()?;
        let dims = [dims[0], dims[1], dims[2]];
        let list = |key: &str, rows: usize, cols: usize| -> Result<Vec<Matrix>> {
            match v.get(key) {
                None => Ok(vec![Matrix::zeros(rows, cols); n + 1]),
                Some(l) => l
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("{key} must be a list of matrices")))?
                    .iter()
                    .map(|m| matrix_from_json(m, rows, cols))
                    .collect(),
            }
        };
        let a = list("A", dims[1], dims[0])?;
        let b = list("B", dims[2], dims[1])?;
        Self::new(n, dims, a, b)
    }
}

/// Coefficient extraction from a monad `O(-1)^u -> O^v -> O(1)^w`.
pub fn from_monad(c: &LineBundleComplex) -> Result<QuiverRep> {
    for (p, k) in [(-1, -1), (0, 0), (1, 1)] {
        if c.summands(p).iter().any(|&x| x != k) {
            return Err(Error::InvalidShape(format!("term in degree {p} must be a multiple of O({k})")));
        }
    }
    if let Some(p) = c.nonzero_degrees().into_iter().find(|p| !(-1..=1).contains(p)) {
        return Err(Error::InvalidShape(format!("nonzero term in degree {p}")));
    }
    let n = c.n();
    let alpha = c.differential(-1);
    let beta = c.differential(0);
    let rep = QuiverRep {
        n,
        dims: [c.rank_of(-1), c.rank_of(0), c.rank_of(1)],
        a: (0..=n).map(|i| alpha.linear_coefficient(i)).collect(),
        b: (0..=n).map(|i| beta.linear_coefficient(i)).collect(),
    };
    if let Some((i, j)) = rep.relation_failure() {
        return Err(Error::Relation(format!("b_{j} a_{i} + b_{i} a_{j} != 0")));
    }
    Ok(rep)
}

/// `(alpha, -(alpha + gamma) c / (r + 2c), gamma)`.
pub fn theta_vector(alpha: &Rational, gamma: &Rational, r: usize, c: usize) -> Result<[Rational; 3]> {
    let mid = r + 2 * c;
    if mid == 0 {
        return Err(Error::DegenerateDims("r + 2c = 0".into()));
    }
    let t0 = -(alpha + gamma) * qi(c as i64) / qi(mid as i64);
    Ok([alpha.clone(), t0, gamma.clone()])
}

pub fn theta_pairing(theta: &[Rational; 3], dims: [usize; 3]) -> Rational {
    theta.iter().zip(dims).map(|(t, d)| t * qi(d as i64)).sum()
}

/// Sign required of `theta . dim` for proper nonzero subrepresentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Subrepresentations must pair to `<= 0`.
    Le,
    /// Subrepresentations must pair to `>= 0`.
    Ge,
}

impl Convention {
    pub fn violated_by(self, value: &Rational) -> bool {
        match self {
            Convention::Le => value > &Rational::zero(),
            Convention::Ge => value < &Rational::zero(),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "le" => Ok(Convention::Le),
            "ge" => Ok(Convention::Ge),
            _ => Err(Error::Parse(format!("convention must be le or ge, got {s:?}"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Le => "le",
            Convention::Ge => "ge",
        })
    }
}

/// A subrepresentation given by bases at the three vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subrep {
    pub bases: [Vec<Vec<Rational>>; 3],
    pub theta_value: Rational,
}

impl Subrep {
    pub fn dims(&self) -> [usize; 3] {
        [self.bases[0].len(), self.bases[1].len(), self.bases[2].len()]
    }

    pub fn to_json(&self) -> Value {
        let basis = |b: &Vec<Vec<Rational>>| -> Value {
            b.iter()
                .map(|v| v.iter().map(rational_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        json!({
            "dims": self.dims(),
            "theta": rational_to_json(&self.theta_value),
            "bases": self.bases.iter().map(basis).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub convention: Convention,
    pub examined: usize,
    pub witness: Option<Subrep>,
}

impl SearchReport {
    pub fn verdict(&self) -> &'static str {
        if self.witness.is_some() {
            "unstable: destabilizing subrepresentation found"
        } else {
            "no witness found; this does not prove stability"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "convention": self.convention.to_string(),
            "examined": self.examined,
            "witness": self.witness.as_ref().map(Subrep::to_json),
            "verdict": self.verdict(),
        })
    }
}

fn images(ms: &[Matrix], basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let gens: Vec<Vec<Rational>> = basis
        .iter()
        .flat_map(|v| ms.iter().map(move |m| m.mul_vec(v)))
        .collect();
    span_basis(&gens)
}

/// The smallest subrepresentation containing `seed` at `vertex`.
pub fn generated_subrep(rep: &QuiverRep, vertex: usize, seed: &[Vec<Rational>]) -> [Vec<Vec<Rational>>; 3] {
    let mut bases: [Vec<Vec<Rational>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    bases[vertex] = span_basis(seed);
    if vertex == 0 {
        bases[1] = images(&rep.a, &bases[0]);
    }
    if vertex <= 1 {
        bases[2] = images(&rep.b, &bases[1]);
    }
    bases
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = qi(1);
    v
}

/// Largest vertex dimension for which every coordinate subspace is tried.
const SWEEP_LIMIT: usize = 10;

/// Looks for a proper nonzero subrepresentation whose `theta` pairing has
/// the wrong sign. Seeds are all coordinate subspaces at each vertex (up to
/// dimension [`SWEEP_LIMIT`]) plus `budget` seeded random subspaces.
pub fn subrep_search(rep: &QuiverRep, theta: &[Rational; 3], budget: usize, seed: u64, convention: Convention) -> SearchReport {
    let mut seeds: Vec<(usize, Vec<Vec<Rational>>)> = Vec::new();
    for vertex in 0..3 {
        let d = rep.dims[vertex];
        if d == 0 || d > SWEEP_LIMIT {
            continue;
        }
        for mask in 1u32..(1 << d) {
            let s = (0..d).filter(|i| mask & (1 << i) != 0).map(|i| unit(d, i)).collect();
            seeds.push((vertex, s));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let live: Vec<usize> = (0..3).filter(|&v| rep.dims[v] > 0).collect();
    if !live.is_empty() {
        for _ in 0..budget {
            let vertex = live[rng.gen_range(0..live.len())];
            let d = rep.dims[vertex];
            let k = rng.gen_range(1..=d);
            let s = (0..k)
                .map(|_| (0..d).map(|_| qi(rng.gen_range(-3..=3))).collect())
                .collect();
            seeds.push((vertex, s));
        }
    }
    let examined = seeds.len();
    let found: Vec<Option<Subrep>> = seeds
        .par_iter()
        .map(|(vertex, s)| {
            let bases = generated_subrep(rep, *vertex, s);
            let dims = [bases[0].len(), bases[1].len(), bases[2].len()];
            if dims == [0, 0, 0] || dims == rep.dims {
                return None;
            }
            let value = theta_pairing(theta, dims);
            convention.violated_by(&value).then_some(Subrep {
                bases,
                theta_value: value,
            })
        })
        .collect();
    SearchReport {
        convention,
        examined,
        witness: found.into_iter().flatten().next(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::{build_monad, random_adhm};
    use crate::exact::rational::q;
    use crate::monad::examples::{non_sheaf_p3, null_correlation};

    fn theta0() -> [Rational; 3] {
        [qi(-1), qi(0), qi(1)]
    }

    #[test]
    fn null_correlation_rep() {
        let c = null_correlation();
        let rep = from_monad(&c).unwrap();
        assert_eq!(rep.dims, [1, 4, 1]);
        assert!(rep.relations_hold());
        // alpha = (x, y, z1, -z0)^T in coordinates (z0, z1, x, y)
        assert_eq!(rep.a[0], Matrix::from_i64(&[&[0], &[0], &[0], &[-1]]));
        assert_eq!(rep.b[3], Matrix::from_i64(&[&[-1, 0, 0, 0]]));
        assert_eq!(rep.to_monad().unwrap(), c);
        assert_eq!(QuiverRep::from_json(&rep.to_json()).unwrap(), rep);
    }

    #[test]
    fn zero_maps() {
        let rep = QuiverRep::zero(3, [1, 3, 1]);
        assert!(rep.relations_hold());
        let back = from_monad(&rep.to_monad().unwrap()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn relations_match_composition() {
        for seed in 0..30 {
            let d = random_adhm(3, 1 + seed as usize % 3, seed as usize % 4, seed).unwrap();
            let rep = from_monad(&build_monad(&d).unwrap()).unwrap();
            assert_eq!(rep.dims, [d.c, d.r + 2 * d.c, d.c]);
            assert!(rep.relations_hold());
            let mut broken = rep.clone();
            let bumped = broken.b[0].get(0, 0) + qi(1);
            broken.b[0].set(0, 0, bumped);
            let m = broken.to_monad().unwrap();
            assert_eq!(broken.relations_hold(), m.verify().unwrap());
        }
        let rep = from_monad(&non_sheaf_p3()).unwrap();
        assert_eq!(rep.dims, [3, 6, 3]);
    }

    #[test]
    fn theta_examples() {
        for (r, c) in [(2, 1), (0, 3), (1, 1), (5, 0)] {
            assert_eq!(theta_vector(&qi(-1), &qi(1), r, c).unwrap(), theta0());
        }
        assert_eq!(theta_vector(&qi(1), &qi(1), 2, 1).unwrap(), [qi(1), q(-1, 2), qi(1)]);
        assert!(matches!(theta_vector(&qi(1), &qi(1), 0, 0), Err(Error::DegenerateDims(_))));
        assert_eq!(theta_pairing(&theta0(), [1, 3, 1]), qi(0));
        assert_eq!(theta_pairing(&theta0(), [0, 0, 1]), qi(1));
        assert_eq!(theta_pairing(&theta0(), [1, 0, 0]), qi(-1));
    }

    #[test]
    fn search_examples() {
        let rep = from_monad(&null_correlation()).unwrap();
        let ge = subrep_search(&rep, &theta0(), 50, 1, Convention::Ge);
        assert!(ge.witness.is_none());
        // under the opposite sign the vertex-0 seeds already destabilize
        let le = subrep_search(&rep, &theta0(), 0, 1, Convention::Le);
        assert_eq!(le.witness.unwrap().theta_value, qi(1));

        let zero = QuiverRep::zero(3, [1, 3, 1]);
        let w = subrep_search(&zero, &theta0(), 0, 0, Convention::Le).witness.unwrap();
        assert_eq!(w.dims(), [0, 0, 1]);
        assert_eq!(w.theta_value, qi(1));

        let flat = [qi(0), qi(0), qi(0)];
        for conv in [Convention::Le, Convention::Ge] {
            assert!(subrep_search(&rep, &flat, 20, 3, conv).witness.is_none());
        }
    }
}

//! ADHM data `(A, B, I, J)` and the monads they define on `P^n`.
//!
//! Coordinates on `P^n` are `(z_0, ..., z_{n-2}, x, y)`; the distinguished
//! line is `l = {z = 0}`. Linear forms are stored as one coefficient matrix
//! per `z` variable.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::matrix::{span_basis, Matrix};
use crate::exact::poly::{HomogPoly, PolyMatrix};
use crate::exact::rational::{qi, rational_from_json, rational_to_json, Rational};
use crate::monad::{hypercohomology, LineBundleComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhmData {
    pub n: usize,
    pub c: usize,
    pub r: usize,
    /// `a[k]` is the `z_k` coefficient of `A` (`c x c`).
    pub a: Vec<Matrix>,
    pub b: Vec<Matrix>,
    /// `c x r`.
    pub i: Vec<Matrix>,
    /// `r x c`.
    pub j: Vec<Matrix>,
}

fn check_shapes(name: &str, ms: &[Matrix], k: usize, rows: usize, cols: usize) -> Result<()> {
    if ms.len() != k {
        return Err(Error::Shape(format!("{name} has {} coefficient matrices, expected {k}", ms.len())));
    }
    if let Some(m) = ms.iter().find(|m| m.rows() != rows || m.cols() != cols) {
        return Err(Error::Shape(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl AdhmData {
    pub fn new(n: usize, c: usize, r: usize, a: Vec<Matrix>, b: Vec<Matrix>, i: Vec<Matrix>, j: Vec<Matrix>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Shape(format!("ADHM data needs n >= 2, got {n}")));
        }
        let k = n - 1;
        check_shapes("A", &a, k, c, c)?;
        check_shapes("B", &b, k, c, c)?;
        check_shapes("I", &i, k, c, r)?;
        check_shapes("J", &j, k, r, c)?;
        Ok(AdhmData { n, c, r, a, b, i, j })
    }

    /// All-zero data.
    pub fn zero(n: usize, c: usize, r: usize) -> Result<Self> {
        let k = n.saturating_sub(1);
        Self::new(
            n,
            c,
            r,
            vec![Matrix::zeros(c, c); k],
            vec![Matrix::zeros(c, c); k],
            vec![Matrix::zeros(c, r); k],
            vec![Matrix::zeros(r, c); k],
        )
    }

    /// Number of `z` variables.
    pub fn z_vars(&self) -> usize {
        self.n - 1
    }

    /// `g . (A, B, I, J) = (g A g^-1, g B g^-1, g I, J g^-1)`.
    pub fn act(&self, g: &Matrix) -> Result<Self> {
        let gi = g
            .inverse()
            .ok_or_else(|| Error::Shape("group element is not invertible".into()))?;
        if g.rows() != self.c {
            return Err(Error::Shape(format!("group element must be {0}x{0}", self.c)));
        }
        let conj = |m: &Matrix| g.mul(m).mul(&gi);
        Ok(AdhmData {
            n: self.n,
            c: self.c,
            r: self.r,
            a: self.a.iter().map(conj).collect(),
            b: self.b.iter().map(conj).collect(),
            i: self.i.iter().map(|m| g.mul(m)).collect(),
            j: self.j.iter().map(|m| m.mul(&gi)).collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        let forms = |ms: &[Matrix], rows: usize, cols: usize| -> Value {
            (0..rows)
                .map(|p| {
                    (0..cols)
                        .map(|q| ms.iter().map(|m| rational_to_json(m.get(p, q))).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
                .into()
        };
        json!({
            "n": self.n,
            "c": self.c,
            "r": self.r,
            "A": forms(&self.a, self.c, self.c),
            "B": forms(&self.b, self.c, self.c),
            "I": forms(&self.i, self.c, self.r),
            "J": forms(&self.j, self.r, self.c),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = |key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("ADHM data needs integer {key:?}")))
        };
        let (n, c, r) = (num("n")?, num("c")?, num("r")?);
        if n < 2 {
            return Err(Error::Shape(format!("ADHM data needs n >= 2, got {n}")));
        }
        let k = n - 1;
        let forms = |key: &str, rows: usize, cols: usize| -> Result<Vec<Matrix>> {
            let mut out = vec![Matrix::zeros(rows, cols); k];
            let Some(m) = v.get(key) else {
                return Ok(out);
            };
            let m = m
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{key} must be a list of rows")))?;
            if m.len() != rows {
                return Err(Error::Shape(format!("{key} has {} rows, expected {rows}", m.len())));
            }
            for (p, row) in m.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|row| row.len() == cols)
                    .ok_or_else(|| Error::Shape(format!("{key} row {p} must have {cols} entries")))?;
                for (q, form) in row.iter().enumerate() {
                    let form = form
                        .as_array()
                        .filter(|f| f.len() == k)
                        .ok_or_else(|| {
                            Error::Shape(format!("{key}[{p}][{q}] must list {k} coefficients of z_0..z_{}", k - 1))
                        })?;
                    for (z, x) in form.iter().enumerate() {
                        out[z].set(p, q, rational_from_json(x)?);
                    }
                }
            }
            Ok(out)
        };
        Self::new(
            n,
            c,
            r,
            forms("A", c, c)?,
            forms("B", c, c)?,
            forms("I", c, r)?,
            forms("J", r, c)?,
        )
    }
}

/// Whether `[A, B] + IJ = 0` as a matrix of quadratic forms.
pub fn check_adhm(d: &AdhmData) -> bool {
    let k = d.z_vars();
    let term = |p: usize, q: usize| -> Matrix {
        d.a[p]
            .mul(&d.b[q])
            .sub(&d.b[q].mul(&d.a[p]))
            .add(&d.i[p].mul(&d.j[q]))
    };
    (0..k).all(|p| {
        (p..k).all(|q| {
            let m = if p == q { term(p, p) } else { term(p, q).add(&term(q, p)) };
            m.is_zero()
        })
    })
}

/// The smallest subspace of `V` containing the images of all coefficients of
/// `I` and stable under all coefficients of `A` and `B`.
pub fn stable_closure(d: &AdhmData) -> Vec<Vec<Rational>> {
    let mut gens: Vec<Vec<Rational>> = d
        .i
        .iter()
        .flat_map(|m| (0..m.cols()).map(|q| m.column(q)).collect::<Vec<_>>())
        .collect();
    let mut basis = span_basis(&gens);
    loop {
        for v in &basis {
            for m in d.a.iter().chain(&d.b) {
                gens.push(m.mul_vec(v));
            }
        }
        let next = span_basis(&gens);
        if next.len() == basis.len() {
            return next;
        }
        basis = next;
    }
}

/// No proper subspace of `V` contains `I(W)` and is preserved by `A` and `B`.
pub fn git_stable(d: &AdhmData) -> bool {
    stable_closure(d).len() == d.c
}

/// `alpha = (A + x, B + y, J)^T` and `beta = (-B - y, A + x, I)` as a monad
/// `V(-1) -> V + V + W -> V(1)` in degrees `(-1, 0, 1)`.
pub fn build_monad(d: &AdhmData) -> Result<LineBundleComplex> {
    if !check_adhm(d) {
        return Err(Error::AdhmEquation);
    }
    let (c, r, k) = (d.c, d.r, d.z_vars());
    let one = Matrix::identity(c);
    let zc = Matrix::zeros(c, c);
    let mut alpha = Vec::with_capacity(k + 2);
    let mut beta = Vec::with_capacity(k + 2);
    for z in 0..k {
        alpha.push(d.a[z].vstack(&d.b[z]).vstack(&d.j[z]));
        beta.push(d.b[z].scale(&qi(-1)).hstack(&d.a[z]).hstack(&d.i[z]));
    }
    alpha.push(one.vstack(&zc).vstack(&Matrix::zeros(r, c)));
    beta.push(zc.hstack(&one).hstack(&Matrix::zeros(c, r)));
    alpha.push(zc.vstack(&one).vstack(&Matrix::zeros(r, c)));
    beta.push(one.scale(&qi(-1)).hstack(&zc).hstack(&Matrix::zeros(c, r)));
    let alpha = linear_matrix(&alpha, 2 * c + r, c)?;
    let beta = linear_matrix(&beta, c, 2 * c + r)?;
    LineBundleComplex::monad(d.n, c, 2 * c + r, c, alpha, beta)
}

fn linear_matrix(coeffs: &[Matrix], rows: usize, cols: usize) -> Result<PolyMatrix> {
    if rows == 0 || cols == 0 {
        return Ok(PolyMatrix::zeros(rows, cols, coeffs.len()));
    }
    PolyMatrix::from_linear_coefficients(coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberFailure {
    pub point: Vec<Rational>,
    pub alpha_rank: usize,
    pub beta_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub checked: usize,
    pub failures: Vec<FiberFailure>,
    pub warning: Option<String>,
}

impl FiberReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "checked": self.checked,
            "failures": self.failures.iter().map(|f| json!({
                "point": f.point.iter().map(rational_to_json).collect::<Vec<_>>(),
                "alpha_rank": f.alpha_rank,
                "beta_rank": f.beta_rank,
            })).collect::<Vec<_>>(),
            "warning": self.warning,
        })
    }
}

/// Seeded points of `P^n` with small integer coordinates, not all zero.
pub fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<i64> = (0..=n).map(|_| rng.gen_range(-5..=5)).collect();
        if p.iter().any(|&x| x != 0) {
            out.push(p.into_iter().map(qi).collect());
        }
    }
    out
}

/// Evaluates `alpha` and `beta` at each point and records every point where
/// `alpha` is not injective or `beta` not surjective.
pub fn fiberwise_check(monad: &LineBundleComplex, points: &[Vec<Rational>], samples: usize, seed: u64) -> Result<FiberReport> {
    let n = monad.n();
    let mut all: Vec<Vec<Rational>> = points.to_vec();
    all.extend(random_points(n, samples, seed));
    if let Some(p) = all.iter().find(|p| p.len() != n + 1) {
        return Err(Error::Shape(format!("point {p:?} needs {} coordinates", n + 1)));
    }
    if let Some(p) = all.iter().find(|p| p.iter().all(Zero::is_zero)) {
        return Err(Error::Shape(format!("{p:?} is not a point of projective space")));
    }
    let alpha = monad.differential(-1);
    let beta = monad.differential(0);
    let failures: Vec<Option<FiberFailure>> = all
        .par_iter()
        .map(|p| {
            let ar = alpha.eval(p)?.rank();
            let br = beta.eval(p)?.rank();
            Ok((ar < alpha.cols() || br < beta.rows()).then(|| FiberFailure {
                point: p.clone(),
                alpha_rank: ar,
                beta_rank: br,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(FiberReport {
        checked: all.len(),
        failures: failures.into_iter().flatten().collect(),
        warning: None,
    })
}

/// [`fiberwise_check`] on the monad of `d`, warning when the sampled points
/// all pass although the closure test fails.
pub fn fiberwise_check_data(d: &AdhmData, points: &[Vec<Rational>], samples: usize, seed: u64) -> Result<FiberReport> {
    let mut rep = fiberwise_check(&build_monad(d)?, points, samples, seed)?;
    if rep.pass() && !git_stable(d) {
        rep.warning = Some(
            "all sampled fibres are exact but the data is not GIT stable; sampling cannot prove surjectivity".into(),
        );
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramingReport {
    pub rank: usize,
    pub h0: usize,
    pub h0_minus_one: usize,
}

impl FramingReport {
    /// `E|l` is trivial of rank `r`.
    pub fn framed(&self) -> bool {
        self.h0 == self.rank && self.h0_minus_one == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "h0": self.h0,
            "h0_minus_one": self.h0_minus_one,
            "framed": self.framed(),
        })
    }
}

/// Restricts `monad` to `l = {z = 0}` and tests whether the middle
/// cohomology sheaf is trivial there.
pub fn framing_check(monad: &LineBundleComplex) -> Result<FramingReport> {
    let n = monad.n();
    if n < 2 {
        return Err(Error::UnsupportedComplex("framing needs n >= 2".into()));
    }
    if let Some(p) = monad.nonzero_degrees().into_iter().find(|p| !(-1..=1).contains(p)) {
        return Err(Error::UnsupportedComplex(format!("nonzero term in degree {p}")));
    }
    let line = monad.restrict(&[n - 1, n])?;
    if line.rank_of(-1) > 0 {
        full_rank_on_line(&line.differential(-1), "alpha")?;
    }
    if line.rank_of(1) > 0 {
        full_rank_on_line(&line.differential(0).transpose(), "beta")?;
    }
    let rank = line
        .character()
        .a[0]
        .to_integer()
        .try_into()
        .map_err(|_| Error::UnsupportedComplex("negative rank on the line".into()))?;
    let h = |t| -> Result<usize> { Ok(hypercohomology(&line, t)?.get(&0).copied().unwrap_or(0)) };
    Ok(FramingReport {
        rank,
        h0: h(0)?,
        h0_minus_one: h(-1)?,
    })
}

/// Checks that a tall matrix of binary forms has full column rank at every
/// point of `P^1`: its maximal minors share no root.
fn full_rank_on_line(m: &PolyMatrix, name: &str) -> Result<()> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols > rows {
        return Err(Error::NotFiberwiseExact(format!("{name} has more columns than rows")));
    }
    let mut g: Vec<Rational> = Vec::new();
    let mut at_infinity = false;
    for subset in subsets(rows, cols) {
        let sub: Vec<Vec<HomogPoly>> = subset
            .iter()
            .map(|&i| (0..cols).map(|j| m.get(i, j).clone()).collect())
            .collect();
        let minor = det(&sub)?;
        if minor.is_zero() {
            continue;
        }
        at_infinity |= !minor.eval(&[qi(1), qi(0)])?.is_zero();
        g = poly_gcd(&g, &dehomogenize(&minor));
    }
    if g.is_empty() {
        return Err(Error::NotFiberwiseExact(format!("{name} drops rank everywhere on the line")));
    }
    if g.len() > 1 || !at_infinity {
        return Err(Error::NotFiberwiseExact(format!("{name} drops rank at a point of the line")));
    }
    Ok(())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn det(m: &[Vec<HomogPoly>]) -> Result<HomogPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(HomogPoly::constant(2, Rational::one()));
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc: Option<HomogPoly> = None;
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<HomogPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(q, _)| q != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let mut t = m[0][j].mul(&det(&minor)?)?;
        if j % 2 == 1 {
            t = t.neg();
        }
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t)?,
        });
    }
    Ok(acc.unwrap_or_else(|| HomogPoly::zero(2, 0)))
}

/// `f(t, 1)` for a binary form `f(x, y)`, coefficients from degree 0 up.
fn dehomogenize(f: &HomogPoly) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.degree() as usize + 1];
    for (e, c) in f.terms() {
        out[e[0] as usize] += c;
    }
    trim(out)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty") / lead;
        let shift = r.len() - b.len();
        for (i, x) in b.iter().enumerate() {
            r[shift + i] -= &f * x;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Monic gcd; the empty vector is the zero polynomial.
fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        a.iter_mut().for_each(|x| *x /= &l);
    }
    a
}

/// `c = 1`, `r = 2` on `P^3`: `A = B = 0`, `I = (z0, z1)`, `J = (z1, -z0)^T`.
pub fn charge_one_example() -> AdhmData {
    AdhmData::new(
        3,
        1,
        2,
        vec![Matrix::zeros(1, 1); 2],
        vec![Matrix::zeros(1, 1); 2],
        vec![Matrix::from_i64(&[&[1, 0]]), Matrix::from_i64(&[&[0, 1]])],
        vec![Matrix::from_i64(&[&[0], &[-1]]), Matrix::from_i64(&[&[1], &[0]])],
    )
    .expect("well-formed data")
}

/// Seeded valid data: `B = mu A + nu(z) 1` commutes with `A`, and `I`, `J`
/// use complementary parts of `W` so that `IJ = 0`.
pub fn random_adhm(n: usize, c: usize, r: usize, seed: u64) -> Result<AdhmData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = n.saturating_sub(1);
    let small = |rng: &mut ChaCha8Rng| qi(rng.gen_range(-3..=3));
    let w1 = if r == 0 { 0 } else { rng.gen_range(1..=r) };
    let mu = small(&mut rng);
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    let mut i = Vec::with_capacity(k);
    let mut j = Vec::with_capacity(k);
    for _ in 0..k {
        let mut am = Matrix::zeros(c, c);
        for p in 0..c {
            for q in 0..c {
                am.set(p, q, small(&mut rng));
            }
        }
        let nu = small(&mut rng);
        b.push(am.scale(&mu).add(&Matrix::identity(c).scale(&nu)));
        a.push(am);
        let mut im = Matrix::zeros(c, r);
        for p in 0..c {
            for q in 0..w1 {
                im.set(p, q, small(&mut rng));
            }
        }
        i.push(im);
        let mut jm = Matrix::zeros(r, c);
        for p in w1..r {
            for q in 0..c {
                jm.set(p, q, small(&mut rng));
            }
        }
        j.push(jm);
    }
    AdhmData::new(n, c, r, a, b, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::examples::null_correlation;
    use crate::monad::predicates::perverse_shape_check;

    fn charge_one(j_sign: i64) -> AdhmData {
        let z = |a: i64, b: i64| Matrix::from_i64(&[&[a, b]]);
        let col = |a: i64, b: i64| Matrix::from_i64(&[&[a], &[b]]);
        // I = (z0, z1), J = (z1, j_sign z0)^T
        AdhmData::new(
            3,
            1,
            2,
            vec![Matrix::zeros(1, 1); 2],
            vec![Matrix::zeros(1, 1); 2],
            vec![z(1, 0), z(0, 1)],
            vec![col(0, j_sign), col(1, 0)],
        )
        .unwrap()
    }

    #[test]
    fn adhm_equation() {
        assert_eq!(charge_one_example(), charge_one(-1));
        assert!(check_adhm(&charge_one(-1)));
        assert!(!check_adhm(&charge_one(1)));
        assert!(check_adhm(&AdhmData::zero(3, 2, 2).unwrap()));
    }

    #[test]
    fn builds_null_correlation() {
        let m = build_monad(&charge_one(-1)).unwrap();
        assert_eq!(m, null_correlation());
        assert!(matches!(build_monad(&charge_one(1)), Err(Error::AdhmEquation)));
        let trivial = build_monad(&AdhmData::zero(3, 0, 2).unwrap()).unwrap();
        assert_eq!(trivial.character().a, vec![qi(2), qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn stability_closure() {
        assert!(git_stable(&charge_one(-1)));
        assert!(!git_stable(&AdhmData::zero(3, 1, 2).unwrap()));
        // V = k^2, A = diag(z0, 2 z0) preserves e1, I only hits e1
        let mut d = AdhmData::zero(3, 2, 1).unwrap();
        d.a[0] = Matrix::from_i64(&[&[1, 0], &[0, 2]]);
        d.i[0] = Matrix::from_i64(&[&[1], &[0]]);
        assert!(check_adhm(&d));
        assert!(!git_stable(&d));
        assert_eq!(stable_closure(&d).len(), 1);
    }

    #[test]
    fn fibres() {
        let m = build_monad(&charge_one(-1)).unwrap();
        let p = vec![qi(1), qi(0), qi(0), qi(1)];
        let rep = fiberwise_check(&m, &[p], 20, 7).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let bad = AdhmData::zero(3, 1, 2).unwrap();
        let rep = fiberwise_check_data(&bad, &[vec![qi(1), qi(0), qi(0), qi(0)]], 0, 0).unwrap();
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].beta_rank, 0);
        // on the line beta is always surjective
        let on_line: Vec<Vec<Rational>> = (-3..=3).map(|t| vec![qi(0), qi(0), qi(1), qi(t)]).collect();
        assert!(fiberwise_check(&build_monad(&bad).unwrap(), &on_line, 0, 0).unwrap().pass());
    }

    #[test]
    fn framing() {
        let rep = framing_check(&build_monad(&charge_one(-1)).unwrap()).unwrap();
        assert_eq!((rep.rank, rep.h0, rep.h0_minus_one), (2, 2, 0));
        assert!(rep.framed());
        let jumping = LineBundleComplex::single(3, 0, vec![(1, 1), (-1, 1)]);
        let rep = framing_check(&jumping).unwrap();
        assert_eq!(rep.h0_minus_one, 1);
        assert!(!rep.framed());
        let rank_zero = build_monad(&random_adhm(3, 2, 0, 3).unwrap()).unwrap();
        let rep = framing_check(&rank_zero).unwrap();
        assert_eq!(rep.rank, 0);
        assert!(rep.framed());
    }

    #[test]
    fn framing_rejects_degenerate_restriction() {
        // alpha = (z0, z1, z0, z1)^T vanishes on the line
        let v = |i| HomogPoly::var(4, i);
        let alpha = PolyMatrix::from_rows(4, vec![vec![v(0)], vec![v(1)], vec![v(0)], vec![v(1)]]).unwrap();
        let beta = PolyMatrix::from_rows(4, vec![vec![v(1), v(0).neg(), v(1).neg(), v(0)]]).unwrap();
        let m = LineBundleComplex::monad(3, 1, 4, 1, alpha, beta).unwrap();
        assert!(m.verify().unwrap());
        assert!(matches!(framing_check(&m), Err(Error::NotFiberwiseExact(_))));
        // alpha = (x, x, 0, 0)^T drops rank at [0:1] only
        let alpha = PolyMatrix::from_rows(4, vec![vec![v(2)], vec![v(2)], vec![v(0)], vec![v(1)]]).unwrap();
        let beta = PolyMatrix::from_rows(4, vec![vec![v(2), v(2).neg(), v(1), v(0).neg()]]).unwrap();
        let m = LineBundleComplex::monad(3, 1, 4, 1, alpha, beta).unwrap();
        assert!(m.verify().unwrap());
        assert!(matches!(framing_check(&m), Err(Error::NotFiberwiseExact(_))));
    }

    #[test]
    fn random_data_is_valid() {
        for seed in 0..40 {
            let d = random_adhm(3, 1 + (seed as usize % 3), seed as usize % 5, seed).unwrap();
            assert!(check_adhm(&d));
            let m = build_monad(&d).unwrap();
            assert!(m.verify().unwrap());
            let rep = perverse_shape_check(&m).unwrap();
            assert_eq!((rep.r, rep.c), (d.r, d.c));
        }
    }

    #[test]
    fn group_action_preserves_stability() {
        let g = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        for seed in 0..20 {
            let d = random_adhm(3, 2, 2, seed).unwrap();
            let gd = d.act(&g).unwrap();
            assert!(check_adhm(&gd));
            assert_eq!(git_stable(&d), git_stable(&gd));
        }
    }

    #[test]
    fn json_roundtrip() {
        let d = random_adhm(4, 2, 3, 11).unwrap();
        assert_eq!(AdhmData::from_json(&d.to_json()).unwrap(), d);
        let bad = json!({"n": 3, "c": 1, "r": 2, "I": [[[1], [0, 1]]]});
        assert!(matches!(AdhmData::from_json(&bad), Err(Error::Shape(_))));
    }
}

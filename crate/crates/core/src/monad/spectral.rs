//! Hypercohomology of short line-bundle complexes via the first-quadrant
//! spectral sequence `E_1^{p,q} = H^q(C^p(t))`.
//!
//! On `P^n` only the rows `q = 0` and `q = n` are nonzero. A higher
//! differential between them moves `p` by `n + 1`, which a complex of at
//! most three adjacent terms cannot accommodate once `n >= 2`, so `E_2` is
//! final and everything reduces to ranks of explicit matrices.

use std::collections::BTreeMap;

use super::bott::h0;
use super::complex::LineBundleComplex;
use crate::error::{Error, Result};
use crate::exact::matrix::{multiplication_matrix, Matrix};

/// Dimensions `dim H^i` indexed by total degree `i`.
pub type Hyper = BTreeMap<i64, usize>;

/// Checks the shape the spectral method relies on.
pub fn check_shape(c: &LineBundleComplex) -> Result<()> {
    let degs = c.nonzero_degrees();
    if degs.len() > 3 {
        return Err(Error::UnsupportedComplex(format!(
            "{} nonzero terms; at most 3 are supported",
            degs.len()
        )));
    }
    if degs.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::UnsupportedComplex(format!(
            "nonzero terms in non-adjacent degrees {degs:?}"
        )));
    }
    Ok(())
}

/// The `E_1` differential in row `q` from column `p` to `p + 1` at twist `t`.
fn row_map(c: &LineBundleComplex, p: i64, q: usize, t: i64) -> Result<Matrix> {
    let n = c.n();
    let n_i = n as i64;
    let src = c.summands(p);
    let tgt = c.summands(p + 1);
    let dim = |k: i64| -> usize {
        if q == 0 {
            h0(n, k + t)
        } else {
            h0(n, -(k + t) - n_i - 1)
        }
    };
    let row_dims: Vec<usize> = tgt.iter().map(|&k| dim(k)).collect();
    let col_dims: Vec<usize> = src.iter().map(|&k| dim(k)).collect();
    let mut out = Matrix::zeros(row_dims.iter().sum(), col_dims.iter().sum());
    let d = c.differential(p);
    let mut r0 = 0;
    for (i, &kt) in tgt.iter().enumerate() {
        let mut c0 = 0;
        for (j, &ks) in src.iter().enumerate() {
            let f = d.get(i, j);
            if row_dims[i] > 0 && col_dims[j] > 0 && !f.is_zero() {
                let block = if q == 0 {
                    multiplication_matrix(f, n, ks + t, kt + t)?
                } else {
                    // H^n(O(m)) is dual to H^0(O(-m-n-1)) on monomial bases
                    multiplication_matrix(f, n, -(kt + t) - n_i - 1, -(ks + t) - n_i - 1)?
                        .transpose()
                };
                for bi in 0..block.rows() {
                    for bj in 0..block.cols() {
                        out.set(r0 + bi, c0 + bj, block.get(bi, bj).clone());
                    }
                }
            }
            c0 += col_dims[j];
        }
        r0 += row_dims[i];
    }
    Ok(out)
}

fn row_dim(c: &LineBundleComplex, p: i64, q: usize, t: i64) -> usize {
    let n = c.n();
    c.summands(p)
        .iter()
        .map(|&k| {
            if q == 0 {
                h0(n, k + t)
            } else {
                h0(n, -(k + t) - n as i64 - 1)
            }
        })
        .sum()
}

/// `dim H^i(C(t))` for all total degrees touched by the complex.
pub fn hypercohomology_spectral(c: &LineBundleComplex, t: i64) -> Result<Hyper> {
    if c.n() < 2 {
        return Err(Error::UnsupportedComplex(
            "the spectral method needs n >= 2".into(),
        ));
    }
    check_shape(c)?;
    let n = c.n();
    let mut out = Hyper::new();
    let degs = c.nonzero_degrees();
    let (Some(&lo), Some(&hi)) = (degs.first(), degs.last()) else {
        return Ok(out);
    };
    for i in lo..=hi + n as i64 {
        out.insert(i, 0);
    }
    for q in [0, n] {
        let ranks: BTreeMap<i64, usize> = (lo - 1..=hi)
            .map(|p| Ok((p, row_map(c, p, q, t)?.rank())))
            .collect::<Result<_>>()?;
        for p in lo..=hi {
            let e2 = row_dim(c, p, q, t) - ranks[&p] - ranks[&(p - 1)];
            *out.entry(p + q as i64).or_insert(0) += e2;
        }
    }
    Ok(out)
}

/// Drops zero entries, for comparisons.
pub fn nonzero(h: &Hyper) -> Hyper {
    h.iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::complex::fixtures::null_correlation;
    use super::*;

    #[test]
    fn null_correlation_twists() {
        let c = null_correlation();
        assert_eq!(nonzero(&hypercohomology_spectral(&c, -1).unwrap()), BTreeMap::from([(1, 1)]));
        assert!(nonzero(&hypercohomology_spectral(&c, -2).unwrap()).is_empty());
        assert!(nonzero(&hypercohomology_spectral(&c, 0).unwrap()).is_empty());
        assert_eq!(nonzero(&hypercohomology_spectral(&c, 1).unwrap()), BTreeMap::from([(0, 5)]));
    }

    #[test]
    fn line_bundle_is_bott() {
        let c = LineBundleComplex::single(3, 0, vec![(0, 1)]);
        assert_eq!(nonzero(&hypercohomology_spectral(&c, 2).unwrap()), BTreeMap::from([(0, 10)]));
        assert_eq!(nonzero(&hypercohomology_spectral(&c, -4).unwrap()), BTreeMap::from([(3, 1)]));
    }
}

//! Hypercohomology through the full Čech double complex on the standard
//! affine cover of `P^n`.
//!
//! A Laurent monomial `x^a` of degree `s` lives on every chart intersection
//! `U_I` whose index set contains its negative support. Monomials whose
//! negative support is a proper nonempty subset span acyclic Čech pieces, so
//! keeping only exponents in `[L, U]` with `L = min(0, min s + n)` and
//! `U = max(0, max s)` does not change the cohomology: the discarded part
//! splits into a subcomplex and a quotient, both built from acyclic pieces.
//! Ranks use sparse elimination.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::complex::LineBundleComplex;
use super::spectral::Hyper;
use crate::error::Result;
use crate::exact::matrix::{sparse_rank, SparseRow};
use crate::exact::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Cell {
    summand: usize,
    chart: u32,
    exps: Vec<i64>,
}

/// Laurent monomials in `n + 1` variables of total degree `s` with every
/// exponent in `[lo, hi]`.
fn box_monomials(vars: usize, s: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, left: usize, s: i64, lo: i64, hi: i64, out: &mut Vec<Vec<i64>>) {
        if left == 1 {
            if (lo..=hi).contains(&s) {
                prefix.push(s);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let rest = left as i64 - 1;
        for e in lo..=hi {
            let r = s - e;
            if r < rest * lo || r > rest * hi {
                continue;
            }
            prefix.push(e);
            rec(prefix, left - 1, r, lo, hi, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(vars), vars, s, lo, hi, &mut out);
    out
}

fn neg_support(a: &[i64]) -> u32 {
    a.iter()
        .enumerate()
        .filter(|(_, &e)| e < 0)
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// `dim H^i(C(t))` computed from the Čech double complex.
pub fn hypercohomology_cech(c: &LineBundleComplex, t: i64) -> Result<Hyper> {
    let n = c.n();
    let vars = n + 1;
    let degs = c.nonzero_degrees();
    let mut out = Hyper::new();
    let (Some(&lo_p), Some(&hi_p)) = (degs.first(), degs.last()) else {
        return Ok(out);
    };
    let all_s: Vec<i64> = (lo_p..=hi_p)
        .flat_map(|p| c.summands(p))
        .map(|k| k + t)
        .collect();
    let min_s = *all_s.iter().min().expect("nonempty complex");
    let max_s = *all_s.iter().max().expect("nonempty complex");
    let lo = 0.min(min_s + n as i64);
    let hi = 0.max(max_s);

    let charts_of_size: Vec<Vec<u32>> = (0..=vars)
        .map(|k| {
            (1u32..(1 << vars))
                .filter(|m| m.count_ones() as usize == k)
                .collect()
        })
        .collect();

    // Basis of C^{p, j}: (summand, chart set I with |I| = j + 1, monomial).
    let mut bases: BTreeMap<(i64, usize), Vec<Cell>> = BTreeMap::new();
    let mut monos_cache: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    for p in lo_p..=hi_p {
        let summands = c.summands(p);
        for j in 0..vars {
            let mut cells = Vec::new();
            for (si, &k) in summands.iter().enumerate() {
                let s = k + t;
                let monos = monos_cache
                    .entry(s)
                    .or_insert_with(|| box_monomials(vars, s, lo, hi));
                for a in monos.iter() {
                    let neg = neg_support(a);
                    for &chart in &charts_of_size[j + 1] {
                        if neg & !chart == 0 {
                            cells.push(Cell {
                                summand: si,
                                chart,
                                exps: a.clone(),
                            });
                        }
                    }
                }
            }
            bases.insert((p, j), cells);
        }
    }
    let index: BTreeMap<(i64, usize), HashMap<&Cell, usize>> = bases
        .iter()
        .map(|(&key, cells)| (key, cells.iter().enumerate().map(|(i, c)| (c, i)).collect()))
        .collect();

    // Column images of the total differential out of total degree m,
    // keyed into a single coordinate space for degree m + 1.
    let offset_of = |m: i64| -> BTreeMap<(i64, usize), usize> {
        let mut off = BTreeMap::new();
        let mut acc = 0;
        for (&(p, j), cells) in &bases {
            if p + j as i64 == m {
                off.insert((p, j), acc);
                acc += cells.len();
            }
        }
        off
    };

    let total_lo = lo_p;
    let total_hi = hi_p + n as i64;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for m in total_lo..=total_hi {
        let dim: usize = bases
            .iter()
            .filter(|(&(p, j), _)| p + j as i64 == m)
            .map(|(_, v)| v.len())
            .sum();
        dims.insert(m, dim);
        let tgt_off = offset_of(m + 1);
        let mut columns: Vec<SparseRow> = Vec::new();
        for (&(p, j), cells) in bases.iter().filter(|(&(p, j), _)| p + j as i64 == m) {
            let sign_cech: Rational = if p.rem_euclid(2) == 0 {
                Rational::from_integer(1.into())
            } else {
                Rational::from_integer((-1).into())
            };
            let d = c.differential(p);
            for cell in cells {
                let mut col = SparseRow::new();
                // Čech part: (p, j) -> (p, j + 1)
                if j + 1 < vars {
                    let idx = &index[&(p, j + 1)];
                    let off = tgt_off[&(p, j + 1)];
                    for i in 0..vars as u32 {
                        if cell.chart & (1 << i) != 0 {
                            continue;
                        }
                        let pos = (cell.chart & ((1 << i) - 1)).count_ones();
                        let sign = if pos % 2 == 0 { sign_cech.clone() } else { -sign_cech.clone() };
                        let target = Cell {
                            summand: cell.summand,
                            chart: cell.chart | (1 << i),
                            exps: cell.exps.clone(),
                        };
                        let e = col.entry(off + idx[&target]).or_insert_with(Rational::zero);
                        *e += sign;
                    }
                }
                // complex part: (p, j) -> (p + 1, j)
                if let (Some(idx), Some(&off)) = (index.get(&(p + 1, j)), tgt_off.get(&(p + 1, j))) {
                    for row in 0..d.rows() {
                        let f = d.get(row, cell.summand);
                        for (b, coeff) in f.terms() {
                            let exps: Vec<i64> = cell
                                .exps
                                .iter()
                                .zip(b)
                                .map(|(x, y)| x + i64::from(*y))
                                .collect();
                            if exps.iter().any(|&e| e > hi) {
                                continue;
                            }
                            let target = Cell {
                                summand: row,
                                chart: cell.chart,
                                exps,
                            };
                            let e = col.entry(off + idx[&target]).or_insert_with(Rational::zero);
                            *e += coeff;
                        }
                    }
                }
                col.retain(|_, v| !v.is_zero());
                columns.push(col);
            }
        }
        ranks.insert(m, sparse_rank(columns));
    }
    for m in total_lo..=total_hi {
        let r_out = ranks[&m];
        let r_in = ranks.get(&(m - 1)).copied().unwrap_or(0);
        out.insert(m, dims[&m] - r_out - r_in);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::complex::fixtures::null_correlation;
    use super::super::spectral::{hypercohomology_spectral, nonzero};
    use super::*;
    use crate::monad::bott::bott_line;

    #[test]
    fn line_bundles_match_bott() {
        for n in 1..=3 {
            for k in -6..=3 {
                let c = LineBundleComplex::single(n, 0, vec![(k, 1)]);
                let h = hypercohomology_cech(&c, 0).unwrap();
                let b = bott_line(n, k);
                for i in 0..=n {
                    assert_eq!(h[&(i as i64)], b[i], "n={n} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn null_correlation_agrees_with_spectral() {
        let c = null_correlation();
        for t in -5..=1 {
            assert_eq!(
                nonzero(&hypercohomology_cech(&c, t).unwrap()),
                nonzero(&hypercohomology_spectral(&c, t).unwrap()),
                "t={t}"
            );
        }
    }
}

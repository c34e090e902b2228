//! Multiplicities of monad-type presentations of `E[1]` for characters
//! `v = (-R, 0, D, 0)` on `P^3` and `Q^3`.
//!
//! The counts are found by solving the linear system that matches the
//! alternating sum of the pieces' twisted characters against `-v`, and are
//! compared with the closed formulas.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::rational::{as_integer, qi, Rational};
use crate::fano::{spinor_minus_one, twist_character, ChernCharacter, FanoThreefold, IntegratedVector};

/// Exact nonnegative integer solution of `sum_j x_j cols[j] = rhs`.
fn solve_counts(cols: &[[Rational; 4]], rhs: &[Rational; 4]) -> Result<Vec<usize>> {
    let k = cols.len();
    let mut aug = Matrix::zeros(4, k + 1);
    for i in 0..4 {
        for (j, c) in cols.iter().enumerate() {
            aug.set(i, j, c[i].clone());
        }
        aug.set(i, k, rhs[i].clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.contains(&k) {
        return Err(Error::Multiplicity("no presentation of this shape has that character".into()));
    }
    if pivots.len() < k {
        return Err(Error::Multiplicity("multiplicities are not determined by the character".into()));
    }
    let mut out = vec![0; k];
    for (row, &p) in pivots.iter().enumerate() {
        let x = red.get(row, k);
        let n = as_integer(x)
            .filter(|n| !n.is_negative())
            .ok_or_else(|| Error::Multiplicity(format!("multiplicity {x} is not a natural number")))?;
        out[p] = (&n)
            .try_into()
            .map_err(|_| Error::Multiplicity(format!("multiplicity {n} is too large")))?;
    }
    Ok(out)
}

fn check_shape(x: &FanoThreefold, v: &IntegratedVector) -> Result<()> {
    if &v.beta != x.beta0() {
        return Err(Error::InvalidShape(format!(
            "vector must be twisted at beta = {}, got {}",
            x.beta0(),
            v.beta
        )));
    }
    if !v.v[1].is_zero() || !v.v[3].is_zero() {
        return Err(Error::InvalidShape("vector must have the shape (-R, 0, D, 0)".into()));
    }
    Ok(())
}

fn signed(x: &FanoThreefold, ch: &ChernCharacter, sign: i64) -> [Rational; 4] {
    let w = twist_character(x, ch, x.beta0());
    w.v.map(|c| c * qi(sign))
}

/// `(u, m, w)` with `E[1] = [O(-1)^u -> O^m -> O(1)^w]` on `P^3`.
pub fn p3_monad_counts(v: &IntegratedVector) -> Result<[usize; 3]> {
    let x = FanoThreefold::p3();
    check_shape(&x, v)?;
    let cols = [
        signed(&x, &ChernCharacter::line_bundle(-1), -1),
        signed(&x, &ChernCharacter::line_bundle(0), 1),
        signed(&x, &ChernCharacter::line_bundle(1), -1),
    ];
    let rhs = v.v.clone().map(|c| -c);
    let s = solve_counts(&cols, &rhs)?;
    Ok([s[0], s[1], s[2]])
}

/// `(D, 2D + R, D)`.
pub fn p3_counts_formula(r: &Rational, d: &Rational) -> [Rational; 3] {
    [d.clone(), qi(2) * d + r, d.clone()]
}

/// `(a, b, c, n)` with `E[1] = [O(-1)^a -> S(-1)^b -> O^c -> O(1)^n]` on `Q^3`.
pub fn q3_monad_counts(v: &IntegratedVector) -> Result<[usize; 4]> {
    let x = FanoThreefold::q3();
    check_shape(&x, v)?;
    let cols = [
        signed(&x, &ChernCharacter::line_bundle(-1), -1),
        signed(&x, &spinor_minus_one(), 1),
        signed(&x, &ChernCharacter::line_bundle(0), -1),
        signed(&x, &ChernCharacter::line_bundle(1), 1),
    ];
    let rhs = v.v.clone().map(|c| -c);
    let s = solve_counts(&cols, &rhs)?;
    Ok([s[0], s[1], s[2], s[3]])
}

/// `a = c = D - R/8`, `b = c + R/4`, `n = 0`.
pub fn q3_counts_formula(r: &Rational, d: &Rational) -> [Rational; 4] {
    let c = d - r / qi(8);
    [c.clone(), &c + r / qi(4), c, Rational::zero()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn shape(x: &FanoThreefold, r: Rational, d: Rational) -> IntegratedVector {
        IntegratedVector::new(-r, qi(0), d, qi(0), x.beta0().clone())
    }

    #[test]
    fn spinor_presentation() {
        let v = shape(&FanoThreefold::q3(), qi(4), q(1, 2));
        assert_eq!(q3_monad_counts(&v).unwrap(), [0, 1, 0, 0]);
        assert_eq!(q3_counts_formula(&qi(4), &q(1, 2)), [qi(0), qi(1), qi(0), qi(0)]);
    }

    #[test]
    fn formulas_agree_with_solver() {
        let x = FanoThreefold::q3();
        for r4 in 0..6i64 {
            for c in 0..5i64 {
                let r = qi(4 * r4);
                let d = qi(c) + &r / qi(8);
                let f = q3_counts_formula(&r, &d);
                let s = q3_monad_counts(&shape(&x, r, d)).unwrap();
                for i in 0..4 {
                    assert_eq!(qi(s[i] as i64), f[i]);
                }
            }
        }
        let p = FanoThreefold::p3();
        for r in 0..5i64 {
            for d in 0..5i64 {
                let s = p3_monad_counts(&shape(&p, qi(r), qi(d))).unwrap();
                let f = p3_counts_formula(&qi(r), &qi(d));
                for i in 0..3 {
                    assert_eq!(qi(s[i] as i64), f[i]);
                }
            }
        }
        assert_eq!(p3_monad_counts(&shape(&p, qi(2), qi(1))).unwrap(), [1, 4, 1]);
    }

    #[test]
    fn rejects_non_integral() {
        let v = shape(&FanoThreefold::q3(), qi(2), q(1, 2));
        assert!(matches!(q3_monad_counts(&v), Err(Error::Multiplicity(_))));
        let w = IntegratedVector::new(qi(-2), qi(1), qi(1), qi(0), qi(0));
        assert!(matches!(p3_monad_counts(&w), Err(Error::InvalidShape(_))));
    }
}

//! Chern characters on `P^n` and Riemann–Roch via the Todd series.

use std::fmt;

use num_traits::{One, Zero};

use crate::exact::rational::{factorial, qi, Rational};
use crate::fano::ChernCharacter;

/// `sum_i a[i] H^i` on `P^n`, with `H^n = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnCharacter {
    pub n: usize,
    pub a: Vec<Rational>,
}

impl PnCharacter {
    pub fn zero(n: usize) -> Self {
        PnCharacter {
            n,
            a: vec![Rational::zero(); n + 1],
        }
    }

    /// `ch(O(k)) = e^{kH}`.
    pub fn line_bundle(n: usize, k: i64) -> Self {
        let mut a = Vec::with_capacity(n + 1);
        let mut p = Rational::one();
        for i in 0..=n {
            a.push(&p / factorial(i as u32));
            p *= qi(k);
        }
        PnCharacter { n, a }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        PnCharacter {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        PnCharacter {
            n: self.n,
            a: self.a.iter().map(|x| x * k).collect(),
        }
    }

    /// Truncated product of two characters.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut a = vec![Rational::zero(); self.n + 1];
        for (i, x) in self.a.iter().enumerate() {
            for (j, y) in other.a.iter().enumerate().take(self.n + 1 - i) {
                a[i + j] += x * y;
            }
        }
        PnCharacter { n: self.n, a }
    }

    pub fn twist(&self, k: i64) -> Self {
        self.mul(&PnCharacter::line_bundle(self.n, k))
    }

    pub fn rank(&self) -> &Rational {
        &self.a[0]
    }

    /// `chi(E(k))`.
    pub fn euler_characteristic(&self, k: i64) -> Rational {
        let e = self.twist(k);
        let td = todd_pn(self.n);
        e.a.iter()
            .enumerate()
            .map(|(i, x)| x * &td[self.n - i])
            .sum()
    }

    /// The `P^3` character as a Fano-threefold character.
    pub fn to_threefold(&self) -> Option<ChernCharacter> {
        (self.n == 3).then(|| {
            ChernCharacter::new(
                self.a[0].clone(),
                self.a[1].clone(),
                self.a[2].clone(),
                self.a[3].clone(),
            )
        })
    }
}

impl fmt::Display for PnCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Coefficients of `(x / (1 - e^{-x}))^{n+1}` up to `x^n`.
pub fn todd_pn(n: usize) -> Vec<Rational> {
    // (1 - e^{-x}) / x = sum_j (-1)^j x^j / (j+1)!
    let g: Vec<Rational> = (0..=n)
        .map(|j| {
            let s = if j % 2 == 0 { qi(1) } else { qi(-1) };
            s / factorial(j as u32 + 1)
        })
        .collect();
    // reciprocal series
    let mut inv = vec![Rational::zero(); n + 1];
    inv[0] = Rational::one();
    for k in 1..=n {
        let s: Rational = (1..=k).map(|j| &g[j] * &inv[k - j]).sum();
        inv[k] = -s;
    }
    let mut out = vec![Rational::zero(); n + 1];
    out[0] = Rational::one();
    for _ in 0..=n {
        let mut next = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] += &out[i] * &inv[j];
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::binomial_poly;
    use crate::fano::{euler_characteristic, FanoThreefold};

    #[test]
    fn line_bundles_match_binomials() {
        for n in 1..=5 {
            for m in -8..=8 {
                let ch = PnCharacter::line_bundle(n, 0);
                assert_eq!(ch.euler_characteristic(m), binomial_poly(m, n as u32), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn agrees_with_threefold_formula() {
        let p3 = FanoThreefold::p3();
        let ch = PnCharacter {
            n: 3,
            a: vec![qi(2), qi(0), qi(-1), qi(0)],
        };
        for k in -4..=4 {
            assert_eq!(
                ch.euler_characteristic(k),
                euler_characteristic(&p3, &ch.to_threefold().unwrap(), k)
            );
        }
    }
}

//! The `(alpha, s)`-slice of stability conditions at fixed `beta`: slopes,
//! central charges and the parameter regions used for instanton walls.
//!
//! Only `alpha^2` is ever stored, so every quantity stays rational.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::{q, qi, Rational};
use crate::fano::{
    shift, spinor_minus_one, twist_character, ChernCharacter, FanoThreefold, IntegratedVector,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceParams {
    pub beta: Rational,
    pub alpha2: Rational,
    pub s: Rational,
}

impl SliceParams {
    pub fn new(beta: Rational, alpha2: Rational, s: Rational) -> Result<Self> {
        if !alpha2.is_positive() || !s.is_positive() {
            return Err(Error::OutsideRegion(format!(
                "need alpha^2 > 0 and s > 0, got alpha^2={alpha2}, s={s}"
            )));
        }
        Ok(SliceParams { beta, alpha2, s })
    }

    pub fn at_beta0(x: &FanoThreefold, alpha2: Rational, s: Rational) -> Result<Self> {
        Self::new(x.beta0().clone(), alpha2, s)
    }

    /// Level `k = (s + 1/6) alpha^2`; walls for `(-R,0,D,0)` are its level sets.
    pub fn k(&self) -> Rational {
        wall_level(&self.alpha2, &self.s)
    }
}

pub fn wall_level(alpha2: &Rational, s: &Rational) -> Rational {
    (s + q(1, 6)) * alpha2
}

/// A slope: a rational number or `+inf` when the denominator vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlopeValue {
    Finite(Rational),
    PosInfinity,
}

impl SlopeValue {
    fn ratio(num: Rational, den: Rational) -> Self {
        if den.is_zero() {
            SlopeValue::PosInfinity
        } else {
            SlopeValue::Finite(num / den)
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SlopeValue::Finite(v) => Some(v),
            SlopeValue::PosInfinity => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.finite().is_some_and(Zero::is_zero)
    }
}

impl Ord for SlopeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SlopeValue::Finite(a), SlopeValue::Finite(b)) => a.cmp(b),
            (SlopeValue::Finite(_), SlopeValue::PosInfinity) => Ordering::Less,
            (SlopeValue::PosInfinity, SlopeValue::Finite(_)) => Ordering::Greater,
            (SlopeValue::PosInfinity, SlopeValue::PosInfinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for SlopeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(v) => write!(f, "{v}"),
            SlopeValue::PosInfinity => write!(f, "+inf"),
        }
    }
}

/// `mu = v1 / v0`.
pub fn mu_slope(v: &IntegratedVector) -> SlopeValue {
    SlopeValue::ratio(v.v[1].clone(), v.v[0].clone())
}

fn tilt_numerator(v: &IntegratedVector, alpha2: &Rational) -> Rational {
    &v.v[2] - alpha2 * &v.v[0] / qi(2)
}

/// `nu = (v2 - alpha^2 v0 / 2) / v1`.
pub fn nu_slope(v: &IntegratedVector, alpha2: &Rational) -> SlopeValue {
    SlopeValue::ratio(tilt_numerator(v, alpha2), v.v[1].clone())
}

/// `lambda = (v3 - (s + 1/6) alpha^2 v1) / (v2 - alpha^2 v0 / 2)`.
pub fn lambda_slope(v: &IntegratedVector, alpha2: &Rational, s: &Rational) -> SlopeValue {
    SlopeValue::ratio(
        &v.v[3] - wall_level(alpha2, s) * &v.v[1],
        tilt_numerator(v, alpha2),
    )
}

/// `Z = -v3 + (s + 1/6) alpha^2 v1 + i (v2 - alpha^2 v0 / 2)`, returned as
/// `(re, im)`. With this real part `lambda = -re/im`.
pub fn central_charge(v: &IntegratedVector, alpha2: &Rational, s: &Rational) -> (Rational, Rational) {
    (
        -&v.v[3] + wall_level(alpha2, s) * &v.v[1],
        tilt_numerator(v, alpha2),
    )
}

/// `k_U = (1/6)(i_X/2)^2`.
pub fn region_u_bound(x: &FanoThreefold) -> Rational {
    let i = qi(i64::from(x.index()));
    &i * &i / qi(24)
}

/// Membership in `U = {(s + 1/6) alpha^2 < (1/6)(i_X/2)^2}`.
pub fn in_region_u(x: &FanoThreefold, alpha2: &Rational, s: &Rational) -> bool {
    alpha2.is_positive() && s.is_positive() && wall_level(alpha2, s) < region_u_bound(x)
}

fn v0(x: &FanoThreefold, ch: &ChernCharacter) -> IntegratedVector {
    twist_character(x, ch, x.beta0())
}

fn line(x: &FanoThreefold, k: i64, sh: i64) -> IntegratedVector {
    v0(x, &shift(&ChernCharacter::line_bundle(k), sh))
}

/// Membership test for the quiver region: `R` on `P3`, `R ∩ R0` on `Q3`.
#[derive(Clone, Debug)]
pub struct QuiverRegion {
    /// `v(O(-1)[2])` and `v(O(1))` on `Q3`.
    q3_lines: Option<(IntegratedVector, IntegratedVector)>,
}

impl QuiverRegion {
    pub fn new(x: &FanoThreefold) -> Result<Self> {
        if x.is_p3() {
            Ok(QuiverRegion { q3_lines: None })
        } else if x.is_q3() {
            Ok(QuiverRegion {
                q3_lines: Some((line(x, -1, 2), line(x, 1, 0))),
            })
        } else {
            Err(Error::UnsupportedVariety(format!(
                "quiver region is defined for P3 and Q3 only, not {x}"
            )))
        }
    }

    pub fn contains(&self, alpha2: &Rational, s: &Rational) -> bool {
        if !alpha2.is_positive() || !s.is_positive() {
            return false;
        }
        let w = (qi(6) * s + qi(1)) * alpha2;
        match &self.q3_lines {
            None => {
                if *alpha2 >= qi(1) {
                    return false;
                }
                let upper = (qi(4) - qi(3) * alpha2) / (qi(2) - alpha2);
                qi(1) < w && w < upper
            }
            Some((lo, hi)) => {
                if *alpha2 >= q(1, 4) || w <= q(1, 4) || w >= q(9, 4) {
                    return false;
                }
                lambda_slope(lo, alpha2, s) < lambda_slope(hi, alpha2, s)
            }
        }
    }
}

/// Membership in the quiver region: `R` on `P3`, `R ∩ R0` on `Q3`.
pub fn in_quiver_region(x: &FanoThreefold, alpha2: &Rational, s: &Rational) -> Result<bool> {
    Ok(QuiverRegion::new(x)?.contains(alpha2, s))
}

/// Evaluates the slope chain that holds throughout the quiver region.
///
/// `P3`: `lambda(O(-2)[2]) < lambda(O(1)) <= 0 = lambda(O[1]) <= lambda(O(-1)[2])`.
/// `Q3`: `lambda(O) < lambda(S(-1)[1]) = 0 < lambda(O(-1)[2])` and `lambda(O(1)) > 0`.
pub fn slope_chain_check(x: &FanoThreefold, alpha2: &Rational, s: &Rational) -> Result<bool> {
    if !in_quiver_region(x, alpha2, s)? {
        return Err(Error::OutsideRegion(format!(
            "(alpha^2, s) = ({alpha2}, {s}) is not in the quiver region of {x}"
        )));
    }
    let lam = |v: &IntegratedVector| lambda_slope(v, alpha2, s);
    let zero = SlopeValue::Finite(qi(0));
    if x.is_p3() {
        let a = lam(&line(x, -2, 2));
        let b = lam(&line(x, 1, 0));
        let c = lam(&line(x, 0, 1));
        let d = lam(&line(x, -1, 2));
        Ok(a < b && b <= zero && c == zero && zero <= d)
    } else {
        let a = lam(&line(x, 0, 0));
        let b = lam(&v0(x, &shift(&spinor_minus_one(), 1)));
        let c = lam(&line(x, -1, 2));
        let d = lam(&line(x, 1, 0));
        Ok(a < b && b == zero && zero < c && d > zero)
    }
}

/// Seeded rational sample points `(alpha^2, s)` of the quiver region.
pub fn sample_quiver_region(x: &FanoThreefold, count: usize, seed: u64) -> Result<Vec<(Rational, Rational)>> {
    let (a_max, w_lo) = if x.is_p3() {
        (qi(1), qi(1))
    } else if x.is_q3() {
        (q(1, 4), q(1, 4))
    } else {
        return Err(Error::UnsupportedVariety(format!("{x}")));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 100_000 {
            return Err(Error::OutsideRegion("sampler exhausted".into()));
        }
        let den: i64 = rng.gen_range(2..60);
        let alpha2 = &a_max * q(rng.gen_range(1..den), den);
        let w_hi = if x.is_p3() {
            (qi(4) - qi(3) * &alpha2) / (qi(2) - &alpha2)
        } else {
            q(9, 4)
        };
        let den2: i64 = rng.gen_range(2..60);
        let w = &w_lo + (&w_hi - &w_lo) * q(rng.gen_range(1..den2), den2);
        let s = (&w / &alpha2 - qi(1)) / qi(6);
        if in_quiver_region(x, &alpha2, &s)? {
            out.push((alpha2, s));
        }
    }
    Ok(out)
}

//! Arbitrary-precision rationals and the `p/q` text format used on every
//! interface of the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Builds `n/d` from machine integers. Panics on a zero denominator.
pub fn q(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"` or a bare integer. Decimal notation is rejected,
/// there is no floating-point path anywhere.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact fraction: {text:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        if t.is_empty()
            || !t
                .trim_start_matches(['-', '+'])
                .chars()
                .all(|c| c.is_ascii_digit())
            || t.trim_start_matches(['-', '+']).is_empty()
        {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

/// JSON form used in candidate listings: integers become numbers when they
/// fit in an `i64`, everything else is the `"p/q"` string.
pub fn rational_to_json(x: &Rational) -> serde_json::Value {
    if x.is_integer() {
        if let Some(v) = x.to_integer().to_i64() {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::from(fmt_rational(x))
}

/// Reads a rational from a JSON number (integers only) or a `"p/q"` string.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(qi(i)),
            None => Err(Error::Parse(format!(
                "non-integer JSON number {n}; use a \"p/q\" string"
            ))),
        },
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

/// Returns the integer value if `x` is integral.
pub fn as_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Returns the value as `i64` if `x` is an integer that fits.
pub fn as_i64(x: &Rational) -> Option<i64> {
    as_integer(x).and_then(|i| i.to_i64())
}

/// Non-negative greatest common divisor of a list of rationals, i.e. the
/// positive generator of the additive group they span (zero if all vanish).
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        // gcd(a/b, c/d) = gcd(a d, c b) / (b d), then reduce.
        let new_den = den.lcm(v.denom());
        let lhs = &num * (&new_den / &den);
        let rhs = v.numer().abs() * (&new_den / v.denom());
        num = lhs.gcd(&rhs);
        den = new_den;
    }
    Rational::new(num, den)
}

/// Floor of a rational as a `BigInt`.
pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of a rational as a `BigInt`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Display-only conversion used by the SVG renderer.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)` for `n, k >= 0`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The binomial polynomial `C(m + n, n)` evaluated at any integer `m`, i.e.
/// `(m+1)(m+2)...(m+n)/n!`. Equals the Euler characteristic of `O(m)` on `P^n`.
pub fn binomial_poly(m: i64, n: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=n as i64 {
        acc *= qi(m + i);
    }
    acc / factorial(n)
}

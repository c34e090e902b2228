//! Fano threefolds of Picard rank one and their Chern-character calculus.
//!
//! A variety is represented only by its degree `H^3` and index `i_X`; the
//! Todd class is pinned down by `c_1 = i_X H` and `c_1 c_2 / 24 = 1`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::rational::{factorial, fmt_rational, q, qi, rational_from_json, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoThreefold {
    degree: u32,
    index: u32,
    q: u32,
    e: u32,
    beta0: Rational,
    preset: bool,
}

/// Degrees `2g - 2` of the index-one families (genus 2..10 and 12).
pub const INDEX_ONE_DEGREES: [u32; 10] = [2, 4, 6, 8, 10, 12, 14, 16, 18, 22];

impl FanoThreefold {
    /// Any positive degree with index 1..=4. Pairs that are not one of the
    /// known families are accepted but flagged by [`Self::is_preset`].
    pub fn new(degree: u32, index: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::UnsupportedVariety("degree must be positive".into()));
        }
        if !(1..=4).contains(&index) {
            return Err(Error::UnsupportedVariety(format!(
                "index {index} is not in 1..=4"
            )));
        }
        let preset = match index {
            4 => degree == 1,
            3 => degree == 2,
            2 => (1..=5).contains(&degree),
            _ => INDEX_ONE_DEGREES.contains(&degree),
        };
        Ok(FanoThreefold {
            degree,
            index,
            q: index / 2,
            e: index % 2,
            beta0: q(-i64::from(index % 2), 2),
            preset,
        })
    }

    pub fn p3() -> Self {
        Self::new(1, 4).unwrap()
    }

    pub fn q3() -> Self {
        Self::new(2, 3).unwrap()
    }

    /// Index-two del Pezzo threefold of degree `d`.
    pub fn v(d: u32) -> Result<Self> {
        if !(1..=5).contains(&d) {
            return Err(Error::UnsupportedVariety(format!("V{d}: degree must be 1..=5")));
        }
        Self::new(d, 2)
    }

    /// Parses `P3`, `Q3`, `V1`..`V5` (index 2) or `X<deg>` (index 1).
    pub fn preset(name: &str) -> Result<Self> {
        let bad = || Error::UnsupportedVariety(format!("unknown preset {name:?}"));
        match name {
            "P3" => Ok(Self::p3()),
            "Q3" => Ok(Self::q3()),
            _ => {
                let (head, tail) = name.split_at(1.min(name.len()));
                let d: u32 = tail.parse().map_err(|_| bad())?;
                match head {
                    "V" => Self::v(d),
                    "X" if INDEX_ONE_DEGREES.contains(&d) => Self::new(d, 1),
                    _ => Err(bad()),
                }
            }
        }
    }

    /// Every known family.
    pub fn presets() -> Vec<Self> {
        let mut out = vec![Self::p3(), Self::q3()];
        out.extend((1..=5).map(|d| Self::new(d, 2).unwrap()));
        out.extend(INDEX_ONE_DEGREES.iter().map(|&d| Self::new(d, 1).unwrap()));
        out
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn beta0(&self) -> &Rational {
        &self.beta0
    }

    pub fn is_preset(&self) -> bool {
        self.preset
    }

    pub fn is_p3(&self) -> bool {
        self.degree == 1 && self.index == 4
    }

    pub fn is_q3(&self) -> bool {
        self.degree == 2 && self.index == 3
    }

    pub(crate) fn deg_q(&self) -> Rational {
        qi(i64::from(self.degree))
    }

    pub(crate) fn index_q(&self) -> Rational {
        qi(i64::from(self.index))
    }

    /// Short name: `P3`, `Q3`, `V<d>`, `X<d>` or `(d,i)` for other pairs.
    pub fn name(&self) -> String {
        match (self.preset, self.index) {
            (true, 4) => "P3".into(),
            (true, 3) => "Q3".into(),
            (true, 2) => format!("V{}", self.degree),
            (true, _) => format!("X{}", self.degree),
            (false, _) => format!("({},{})", self.degree, self.index),
        }
    }
}

impl fmt::Display for FanoThreefold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (H^3={}, i={})", self.name(), self.degree, self.index)
    }
}

/// Chern character `sum a_i H^i`, stored by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernCharacter {
    pub a: [Rational; 4],
}

impl ChernCharacter {
    pub fn new(a0: Rational, a1: Rational, a2: Rational, a3: Rational) -> Self {
        ChernCharacter { a: [a0, a1, a2, a3] }
    }

    pub fn zero() -> Self {
        ChernCharacter::new(qi(0), qi(0), qi(0), qi(0))
    }

    /// `ch(O(k)) = e^{kH}`.
    pub fn line_bundle(k: i64) -> Self {
        tensor_line_bundle(&ChernCharacter::new(qi(1), qi(0), qi(0), qi(0)), k)
    }

    pub fn add(&self, other: &Self) -> Self {
        ChernCharacter {
            a: std::array::from_fn(|i| &self.a[i] + &other.a[i]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&qi(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ChernCharacter {
            a: std::array::from_fn(|i| &self.a[i] * k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a0": fmt_rational(&self.a[0]),
            "a1": fmt_rational(&self.a[1]),
            "a2": fmt_rational(&self.a[2]),
            "a3": fmt_rational(&self.a[3]),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("character missing {k:?}")))
                .and_then(rational_from_json)
        };
        Ok(ChernCharacter::new(get("a0")?, get("a1")?, get("a2")?, get("a3")?))
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a[0], self.a[1], self.a[2], self.a[3])
    }
}

/// The vector `v_beta = (ch_0^b H^3, ch_1^b H^2, ch_2^b H, ch_3^b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegratedVector {
    pub v: [Rational; 4],
    pub beta: Rational,
}

impl IntegratedVector {
    pub fn new(v0: Rational, v1: Rational, v2: Rational, v3: Rational, beta: Rational) -> Self {
        IntegratedVector {
            v: [v0, v1, v2, v3],
            beta,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.beta, other.beta);
        IntegratedVector {
            v: std::array::from_fn(|i| &self.v[i] + &other.v[i]),
            beta: self.beta.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        IntegratedVector {
            v: std::array::from_fn(|i| &self.v[i] * k),
            beta: self.beta.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&qi(-1))
    }
}

impl fmt::Display for IntegratedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v[0], self.v[1], self.v[2], self.v[3])
    }
}

/// `ch * e^{tH}` for rational `t`.
fn exp_twist(ch: &ChernCharacter, t: &Rational) -> ChernCharacter {
    let mut out = ChernCharacter::zero();
    for i in 0..4 {
        let mut tp = Rational::one();
        for j in (0..=i).rev() {
            // j runs down so that tp = t^{i-j}
            out.a[i] += &ch.a[j] * &tp / factorial((i - j) as u32);
            tp *= t;
        }
    }
    out
}

/// `ch * e^{kH}`.
pub fn tensor_line_bundle(ch: &ChernCharacter, k: i64) -> ChernCharacter {
    exp_twist(ch, &qi(k))
}

/// `ch(E[m]) = (-1)^m ch(E)`.
pub fn shift(ch: &ChernCharacter, m: i64) -> ChernCharacter {
    if m.rem_euclid(2) == 0 {
        ch.clone()
    } else {
        ch.scale(&qi(-1))
    }
}

/// Twisted integrated vector `v_beta` of a character.
pub fn twist_character(x: &FanoThreefold, ch: &ChernCharacter, beta: &Rational) -> IntegratedVector {
    let t = exp_twist(ch, &-beta);
    let d = x.deg_q();
    IntegratedVector {
        v: std::array::from_fn(|i| &t.a[i] * &d),
        beta: beta.clone(),
    }
}

/// Inverse of [`twist_character`].
pub fn untwist_vector(x: &FanoThreefold, v: &IntegratedVector) -> ChernCharacter {
    let d = x.deg_q();
    let t = ChernCharacter {
        a: std::array::from_fn(|i| &v.v[i] / &d),
    };
    exp_twist(&t, &v.beta)
}

/// Re-expresses `v` at a different `beta`.
pub fn retwist(x: &FanoThreefold, v: &IntegratedVector, beta: &Rational) -> IntegratedVector {
    twist_character(x, &untwist_vector(x, v), beta)
}

/// `(v0, -v1, v2, -v3)`; satisfies `v_b(E)^dual = v_{-b}(E^dual)`.
pub fn dual_character(v: &IntegratedVector) -> IntegratedVector {
    IntegratedVector {
        v: [
            v.v[0].clone(),
            -&v.v[1],
            v.v[2].clone(),
            -&v.v[3],
        ],
        beta: -&v.beta,
    }
}

/// Character of the derived dual: odd coefficients change sign.
pub fn dual_ch(ch: &ChernCharacter) -> ChernCharacter {
    ChernCharacter::new(ch.a[0].clone(), -&ch.a[1], ch.a[2].clone(), -&ch.a[3])
}

/// Character of `E^D = RHom(E, O(-e_X))[2]`.
pub fn d_functor_character(x: &FanoThreefold, ch: &ChernCharacter) -> ChernCharacter {
    tensor_line_bundle(&dual_ch(ch), -i64::from(x.e()))
}

/// `chi(E(k))` by Hirzebruch–Riemann–Roch.
pub fn euler_characteristic(x: &FanoThreefold, ch: &ChernCharacter, k: i64) -> Rational {
    let b = tensor_line_bundle(ch, k);
    let d = x.deg_q();
    let i = x.index_q();
    let c2_term = (&i * &i * &d + qi(24) / &i) / qi(12);
    &d * &b.a[3] + &i * &d * &b.a[2] / qi(2) + &b.a[1] * c2_term + &b.a[0]
}

/// Result of the instanton-shape test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeCheck {
    pub is_instanton: bool,
    pub r: Rational,
    pub d: Rational,
}

/// Whether `v = (-R, 0, D, 0)` with `R >= 0` and `D > 0`.
pub fn is_instanton_shape(v: &IntegratedVector) -> ShapeCheck {
    let r = -&v.v[0];
    let d = v.v[2].clone();
    let is_instanton =
        v.v[1].is_zero() && v.v[3].is_zero() && !r.is_negative() && d.is_positive();
    ShapeCheck { is_instanton, r, d }
}

/// `v(O_X[1])` at `beta_0`.
pub fn shifted_structure_sheaf(x: &FanoThreefold) -> IntegratedVector {
    twist_character(x, &shift(&ChernCharacter::line_bundle(0), 1), x.beta0())
}

/// Character-level acyclic extension on an index-two variety:
/// `v + (D - R/H^3) v(O_X[1])`.
pub fn acyclic_extension_character(x: &FanoThreefold, v: &IntegratedVector) -> Result<IntegratedVector> {
    if x.index() != 2 {
        return Err(Error::WrongIndex {
            expected: 2,
            found: x.index(),
        });
    }
    let shape = is_instanton_shape(v);
    if !shape.is_instanton {
        return Err(Error::InvalidShape(format!("{v} is not of the form (-R,0,D,0)")));
    }
    let m = &shape.d - &shape.r / x.deg_q();
    if m.is_negative() {
        return Err(Error::Multiplicity(format!(
            "D - R/H^3 = {m} is negative"
        )));
    }
    if !m.is_integer() {
        return Err(Error::Multiplicity(format!(
            "D - R/H^3 = {m} is not an integer"
        )));
    }
    Ok(v.add(&shifted_structure_sheaf(x).scale(&m)))
}

/// `ch(S(-1)) = (2, -1, 0, 1/12)` for the spinor bundle on the quadric, from
/// `0 -> S(-1) -> O^4 -> S -> 0` and `S^dual = S(1)`.
pub fn spinor_minus_one() -> ChernCharacter {
    ChernCharacter::new(qi(2), qi(-1), qi(0), q(1, 12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn ch(a: [Rational; 4]) -> ChernCharacter {
        ChernCharacter { a }
    }

    #[test]
    fn index_arithmetic() {
        for x in FanoThreefold::presets() {
            assert_eq!(x.index(), 2 * x.q() + x.e());
            assert_eq!(*x.beta0(), q(-i64::from(x.e()), 2));
            assert!(x.is_preset());
        }
        assert!(!FanoThreefold::new(7, 2).unwrap().is_preset());
        assert!(FanoThreefold::new(1, 5).is_err());
        assert_eq!(FanoThreefold::preset("X22").unwrap().index(), 1);
        assert_eq!(FanoThreefold::preset("V4").unwrap().degree(), 4);
        assert!(FanoThreefold::preset("V6").is_err());
    }

    #[test]
    fn twist_of_o1_on_quadric() {
        let x = FanoThreefold::q3();
        let v = twist_character(&x, &ChernCharacter::line_bundle(1), &q(-1, 2));
        assert_eq!(v.v, [qi(2), qi(3), q(9, 4), q(9, 8)]);
    }

    #[test]
    fn spinor_twist() {
        let x = FanoThreefold::q3();
        let v = twist_character(&x, &shift(&spinor_minus_one(), 1), x.beta0());
        assert_eq!(v.v, [qi(-4), qi(0), q(1, 2), qi(0)]);
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(
            ChernCharacter::line_bundle(2),
            ch([qi(1), qi(2), qi(2), q(4, 3)])
        );
        let nc = ch([qi(2), qi(0), qi(-1), qi(0)]);
        assert_eq!(tensor_line_bundle(&nc, 0), nc);
        assert_eq!(
            tensor_line_bundle(&nc, -1),
            ch([qi(2), qi(-2), qi(0), q(2, 3)])
        );
    }

    #[test]
    fn shifts() {
        let o = ChernCharacter::line_bundle(0);
        assert_eq!(shift(&o, 1).a[0], qi(-1));
        assert_eq!(shift(&o, 2), o);
        assert_eq!(shift(&o, -1), shift(&o, 1));
    }

    #[test]
    fn duals() {
        let v = IntegratedVector::new(qi(2), qi(3), q(9, 4), q(9, 8), q(-1, 2));
        let d = dual_character(&v);
        assert_eq!(d.v, [qi(2), qi(-3), q(9, 4), q(-9, 8)]);
        assert_eq!(dual_character(&d), v);
    }

    #[test]
    fn d_functor_fixed_points() {
        let nc = ch([qi(2), qi(0), qi(-1), qi(0)]);
        assert_eq!(d_functor_character(&FanoThreefold::p3(), &nc), nc);
        let x = FanoThreefold::q3();
        let s = shift(&spinor_minus_one(), 1);
        assert_eq!(d_functor_character(&x, &s), s);
    }

    #[test]
    fn euler_characteristics() {
        let o = ChernCharacter::line_bundle(0);
        assert_eq!(euler_characteristic(&FanoThreefold::p3(), &o, 1), qi(4));
        assert_eq!(euler_characteristic(&FanoThreefold::q3(), &o, 1), qi(5));
        for x in FanoThreefold::presets() {
            assert_eq!(euler_characteristic(&x, &o, 0), qi(1), "{x}");
        }
        // spinor bundle S(-1) is acyclic
        assert_eq!(
            euler_characteristic(&FanoThreefold::q3(), &spinor_minus_one(), 0),
            qi(0)
        );
        // h^0(O_Q(2)) = 14
        assert_eq!(euler_characteristic(&FanoThreefold::q3(), &o, 2), qi(14));
    }

    #[test]
    fn shape_test() {
        let s = is_instanton_shape(&IntegratedVector::new(qi(-4), qi(0), q(1, 2), qi(0), q(-1, 2)));
        assert!(s.is_instanton);
        assert_eq!((s.r, s.d), (qi(4), q(1, 2)));
        let bad = is_instanton_shape(&IntegratedVector::new(qi(2), qi(0), qi(2), qi(0), qi(0)));
        assert!(!bad.is_instanton);
    }

    #[test]
    fn acyclic_extension_of_line() {
        for d in 1..=5 {
            let x = FanoThreefold::v(d).unwrap();
            let line = IntegratedVector::new(qi(0), qi(0), qi(1), qi(0), qi(0));
            let ext = acyclic_extension_character(&x, &line).unwrap();
            assert_eq!(ext.v, [qi(-i64::from(d)), qi(0), qi(1), qi(0)]);
            let same = acyclic_extension_character(&x, &ext).unwrap();
            assert_eq!(same, ext);
        }
        let q3 = FanoThreefold::q3();
        let v = IntegratedVector::new(qi(-4), qi(0), q(1, 2), qi(0), q(-1, 2));
        assert!(matches!(
            acyclic_extension_character(&q3, &v),
            Err(Error::WrongIndex { .. })
        ));
    }

    #[test]
    fn acyclic_extension_of_instanton() {
        // rank 2, charge n on V_d: ch = (2, 0, -n/d, 0), extension has ch (n, 0, -n/d, 0)
        for d in 1..=5u32 {
            let x = FanoThreefold::v(d).unwrap();
            for n in 2..6i64 {
                let e = ch([qi(2), qi(0), q(-n, i64::from(d)), qi(0)]);
                let v = twist_character(&x, &shift(&e, 1), x.beta0());
                let ext = acyclic_extension_character(&x, &v).unwrap();
                let back = shift(&untwist_vector(&x, &ext), 1);
                assert_eq!(back, ch([qi(n), qi(0), q(-n, i64::from(d)), qi(0)]));
            }
        }
    }
}

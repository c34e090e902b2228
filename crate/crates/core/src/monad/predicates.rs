//! Instanton conditions read off cohomology tables, and the numerical shape
//! of perverse instanton monads.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use super::character::PnCharacter;
use super::complex::LineBundleComplex;
use super::table::CohomologyTable;
use crate::error::{Error, Result};
use crate::exact::rational::{q, qi, Rational};
use crate::fano::{euler_characteristic, ChernCharacter, FanoThreefold};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Instanton sheaf on `P^n` with `c_1 = 0`.
    Pn,
    /// `h`-instanton with defect 0.
    HOrdinary,
    /// `h`-instanton with defect 1.
    HNonOrdinary,
}

impl Flavor {
    pub fn defect(self) -> Option<u8> {
        match self {
            Flavor::Pn => None,
            Flavor::HOrdinary => Some(0),
            Flavor::HNonOrdinary => Some(1),
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pn" | "pn-instanton" => Ok(Flavor::Pn),
            "h-ordinary" => Ok(Flavor::HOrdinary),
            "h-nonordinary" => Ok(Flavor::HNonOrdinary),
            _ => Err(Error::Parse(format!(
                "unknown flavor {s:?} (pn-instanton, h-ordinary, h-nonordinary)"
            ))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Pn => "pn-instanton",
            Flavor::HOrdinary => "h-ordinary",
            Flavor::HNonOrdinary => "h-nonordinary",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateReport {
    pub flavor: Flavor,
    pub pass: bool,
    /// `h^1(E(-1))`.
    pub charge: usize,
    pub defect: Option<u8>,
    pub conditions: Vec<(String, bool)>,
}

impl PredicateReport {
    pub fn failing(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(s, _)| s.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "flavor": self.flavor.to_string(),
            "pass": self.pass,
            "charge": self.charge,
            "defect": self.defect,
            "conditions": self.conditions.iter().map(|(s, ok)| json!({"condition": s, "holds": ok})).collect::<Vec<_>>(),
        })
    }
}

struct Checker<'a> {
    table: &'a CohomologyTable,
    conditions: Vec<(String, bool)>,
}

impl Checker<'_> {
    fn vanish(&mut self, label: &str, i: usize, t: i64) -> Result<()> {
        let h = self.table.get(i, t)?;
        self.conditions.push((format!("{label} h^{i}(E({t})) = 0"), h == 0));
        Ok(())
    }

    fn holds(&mut self, label: String, ok: bool) {
        self.conditions.push((label, ok));
    }
}

/// Evaluates the instanton conditions of `flavor` on `P^n`, `n = table.dim`.
///
/// Conditions quantified over all twists are checked on the whole window.
pub fn instanton_predicate(table: &CohomologyTable, ch: &PnCharacter, flavor: Flavor) -> Result<PredicateReport> {
    let n = table.dim;
    if ch.n != n {
        return Err(Error::Shape(format!("character on P^{} but table on P^{n}", ch.n)));
    }
    let ni = n as i64;
    let mut c = Checker {
        table,
        conditions: Vec::new(),
    };
    let charge = table.get(1, -1)?;
    let window: Vec<i64> = table.twists().collect();
    c.holds(
        "no cohomology outside degrees 0..=n".into(),
        window.iter().all(|t| !table.off_range.contains_key(t)),
    );
    match flavor {
        Flavor::Pn => {
            c.holds("c_1 = 0".into(), ch.a[1].is_zero());
            if n >= 2 {
                c.vanish("(1)", 0, -1)?;
                c.vanish("(1)", n, -ni)?;
            }
            if n >= 3 {
                c.vanish("(2)", 1, -2)?;
                c.vanish("(2)", n - 1, 1 - ni)?;
            }
            if n >= 4 {
                for p in 2..=n - 2 {
                    for &t in &window {
                        c.vanish("(3)", p, t)?;
                    }
                }
            }
            // c_2 = -ch_2 once c_1 = 0
            let c2 = -ch.a.get(2).cloned().unwrap_or_else(Rational::zero);
            c.holds(format!("h^1(E(-1)) = c_2 = {c2}"), qi(charge as i64) == c2);
        }
        Flavor::HOrdinary | Flavor::HNonOrdinary => {
            let d = i64::from(flavor.defect().expect("h flavor"));
            c.vanish("(1)", 0, -1)?;
            c.vanish("(1)", n, d - ni)?;
            for i in 1..n.saturating_sub(1) {
                let ii = i as i64;
                c.vanish("(2)", i, -(ii + 1))?;
                c.vanish("(2)", n - 1, d - ni + ii)?;
            }
            if d == 1 {
                for i in 2..n.saturating_sub(1) {
                    c.vanish("(3)", i, -(i as i64))?;
                }
            }
            if n >= 2 {
                let other = table.get(n - 1, d - ni)?;
                c.holds(
                    format!("(4) h^1(E(-1)) = h^{}(E({})) ({charge} vs {other})", n - 1, d - ni),
                    other == charge,
                );
            }
            let sign = if n.is_multiple_of(2) { qi(1) } else { qi(-1) };
            let defect_term = qi(d) * (ch.euler_characteristic(0) - sign * ch.euler_characteristic(-ni));
            c.holds("(5) d(chi(E) - (-1)^n chi(E(-n))) = 0".into(), defect_term.is_zero());
        }
    }
    let pass = c.conditions.iter().all(|(_, ok)| *ok);
    Ok(PredicateReport {
        flavor,
        pass,
        charge,
        defect: if pass { flavor.defect() } else { None },
        conditions: c.conditions,
    })
}

/// The defect for which the `h`-instanton conditions hold, preferring 0.
pub fn determine_defect(table: &CohomologyTable, ch: &PnCharacter) -> Result<Option<u8>> {
    for f in [Flavor::HOrdinary, Flavor::HNonOrdinary] {
        if instanton_predicate(table, ch, f)?.pass {
            return Ok(f.defect());
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerverseReport {
    pub r: usize,
    pub c: usize,
    /// Whether `c_1 = 0` agrees with the multiplicity pattern.
    pub c1_consistent: bool,
    /// Torsion-freeness of `H^0` and the codimension of `H^1` are never
    /// decided here.
    pub sheaf_conditions: &'static str,
}

impl PerverseReport {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "c": self.c,
            "c1_consistent": self.c1_consistent,
            "sheaf_conditions": self.sheaf_conditions,
        })
    }
}

/// Reads `(r, c)` off a monad `O(-1)^c -> O^{r+2c} -> O(1)^c`.
pub fn perverse_shape_check(cx: &LineBundleComplex) -> Result<PerverseReport> {
    let pure = |p: i64, k: i64| -> Result<usize> {
        let s = cx.summands(p);
        if s.iter().any(|&x| x != k) {
            return Err(Error::InvalidShape(format!(
                "term in degree {p} must be a multiple of O({k}), found twists {s:?}"
            )));
        }
        Ok(s.len())
    };
    if let Some(p) = cx.nonzero_degrees().into_iter().find(|p| !(-1..=1).contains(p)) {
        return Err(Error::InvalidShape(format!("nonzero term in degree {p}")));
    }
    let (u, v, w) = (pure(-1, -1)?, pure(0, 0)?, pure(1, 1)?);
    if u != w {
        return Err(Error::InvalidShape(format!("outer multiplicities differ: ({u}, {v}, {w})")));
    }
    if v < 2 * u {
        return Err(Error::InvalidShape(format!(
            "middle multiplicity {v} is below 2c = {}",
            2 * u
        )));
    }
    let c1_consistent = cx.character().a.get(1).is_none_or(Zero::is_zero);
    debug_assert!(c1_consistent);
    Ok(PerverseReport {
        r: v - 2 * u,
        c: u,
        c1_consistent,
        sheaf_conditions: "not decided",
    })
}

/// The known part of the cohomology table of a rank-2 instanton bundle of
/// charge `charge` on an index-two Fano threefold, `ch = (2, 0, -charge/d, 0)`.
///
/// Vanishings come from stability, the instanton condition and Serre
/// duality; a cell is filled from the Euler characteristic whenever it is
/// the only unknown in its column. Other cells stay `None`.
pub fn index_two_instanton_table(x: &FanoThreefold, charge: i64, t_lo: i64, t_hi: i64) -> Result<CohomologyTable> {
    if x.index() != 2 {
        return Err(Error::WrongIndex {
            expected: 2,
            found: x.index(),
        });
    }
    let ch = ChernCharacter::new(qi(2), qi(0), -q(charge, i64::from(x.degree())), qi(0));
    let mut table = CohomologyTable::empty(3);
    for t in t_lo..=t_hi {
        let known = [t <= 0, t <= -1, t >= -1, t >= -2];
        let mut col: Vec<Option<usize>> = known.iter().map(|&k| k.then_some(0)).collect();
        let unknown: Vec<usize> = (0..4).filter(|&i| col[i].is_none()).collect();
        if let [i] = unknown[..] {
            let chi = euler_characteristic(x, &ch, t);
            let v = if i % 2 == 0 { chi } else { -chi };
            let v = v
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidShape(format!("negative or huge cell h^{i}(E({t})) = {v}")))?;
            col[i] = Some(v);
        }
        table.columns.insert(t, col);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::examples::{non_sheaf_p3, null_correlation};
    use crate::monad::table::cohomology_table;

    #[test]
    fn null_correlation_is_instanton() {
        let c = null_correlation();
        let tab = cohomology_table(&c, -4, 1).unwrap();
        let rep = instanton_predicate(&tab, &c.character(), Flavor::Pn).unwrap();
        assert!(rep.pass, "{:?}", rep.failing());
        assert_eq!(rep.charge, 1);
        assert_eq!(determine_defect(&tab, &c.character()).unwrap(), Some(0));
    }

    #[test]
    fn trivial_bundle_has_charge_zero() {
        for n in 2..=4 {
            let c = LineBundleComplex::single(n, 0, vec![(0, 2)]);
            let tab = cohomology_table(&c, -(n as i64) - 1, 1).unwrap();
            let rep = instanton_predicate(&tab, &c.character(), Flavor::Pn).unwrap();
            assert!(rep.pass, "n={n}: {:?}", rep.failing());
            assert_eq!(rep.charge, 0);
        }
    }

    #[test]
    fn line_bundle_fails() {
        let c = LineBundleComplex::single(3, 0, vec![(1, 1)]);
        let tab = cohomology_table(&c, -4, 1).unwrap();
        let rep = instanton_predicate(&tab, &c.character(), Flavor::Pn).unwrap();
        assert!(!rep.pass);
        assert!(rep.failing().iter().any(|s| s.starts_with("(1) h^0")));
    }

    #[test]
    fn window_too_small() {
        let c = null_correlation();
        let tab = cohomology_table(&c, -1, 1).unwrap();
        assert!(matches!(
            instanton_predicate(&tab, &c.character(), Flavor::Pn),
            Err(Error::InsufficientWindow(_))
        ));
    }

    #[test]
    fn perverse_patterns() {
        let rep = perverse_shape_check(&null_correlation()).unwrap();
        assert_eq!((rep.r, rep.c), (2, 1));
        assert_eq!(rep.sheaf_conditions, "not decided");
        let rep = perverse_shape_check(&non_sheaf_p3()).unwrap();
        assert_eq!((rep.r, rep.c), (0, 3));
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(-1, vec![(-1, 1)]);
        terms.insert(0, vec![(0, 3)]);
        terms.insert(1, vec![(1, 1)]);
        let bare = LineBundleComplex::new(3, terms.clone(), Default::default()).unwrap();
        let rep = perverse_shape_check(&bare).unwrap();
        assert_eq!((rep.r, rep.c), (1, 1));
        terms.insert(1, vec![(1, 2)]);
        let bad = LineBundleComplex::new(3, terms, Default::default()).unwrap();
        assert!(matches!(perverse_shape_check(&bad), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn index_two_table_shape() {
        for d in 1..=5 {
            let x = FanoThreefold::v(d).unwrap();
            for n in 2..=6i64 {
                let tab = index_two_instanton_table(&x, n, -3, 1).unwrap();
                let m = (n - 2) as usize;
                assert_eq!(tab.get(2, -2).unwrap(), m);
                assert_eq!(tab.get(1, 0).unwrap(), m);
                for t in -2..=0 {
                    for i in 0..4 {
                        if (i, t) != (2, -2) && (i, t) != (1, 0) {
                            assert_eq!(tab.get(i, t).unwrap(), 0, "d={d} n={n} h^{i}({t})");
                        }
                    }
                }
                assert!(tab.get(3, -3).is_err());
                assert!(tab.get(2, -3).is_err());
                assert_eq!(tab.get(1, -3).unwrap(), 0);
                assert!(tab.get(0, 1).is_err());
                assert!(tab.get(1, 1).is_err());
            }
        }
        assert!(matches!(
            index_two_instanton_table(&FanoThreefold::p3(), 2, -3, 1),
            Err(Error::WrongIndex { .. })
        ));
    }
}

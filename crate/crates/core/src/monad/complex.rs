//! Complexes of sums of line bundles on `P^n` with polynomial differentials.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::character::PnCharacter;
use crate::error::{Error, Result};
use crate::exact::poly::PolyMatrix;
use crate::exact::rational::qi;
use crate::fano::ChernCharacter;

/// A bounded complex `... -> C^p -> C^{p+1} -> ...` on `P^n` where each
/// `C^p` is a sum of `O(k)`s.
///
/// `maps[p]` is the differential `C^p -> C^{p+1}`: rows index the summands
/// of `C^{p+1}`, columns those of `C^p`, and entry `(i, j)` is a form of
/// degree `k_i - k_j` (or zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleComplex {
    n: usize,
    terms: BTreeMap<i64, Vec<(i64, usize)>>,
    maps: BTreeMap<i64, PolyMatrix>,
}

impl LineBundleComplex {
    pub fn new(
        n: usize,
        terms: BTreeMap<i64, Vec<(i64, usize)>>,
        maps: BTreeMap<i64, PolyMatrix>,
    ) -> Result<Self> {
        let c = LineBundleComplex { n, terms, maps };
        c.validate()?;
        Ok(c)
    }

    /// The usual monad `U(-1) -> V -> W(1)` in degrees `(-1, 0, 1)`.
    pub fn monad(n: usize, u: usize, v: usize, w: usize, alpha: PolyMatrix, beta: PolyMatrix) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert(-1, vec![(-1, u)]);
        terms.insert(0, vec![(0, v)]);
        terms.insert(1, vec![(1, w)]);
        let mut maps = BTreeMap::new();
        maps.insert(-1, alpha);
        maps.insert(0, beta);
        Self::new(n, terms, maps)
    }

    /// A single term `O(k)^m` placed in degree `p`.
    pub fn single(n: usize, p: i64, summands: Vec<(i64, usize)>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, summands);
        LineBundleComplex {
            n,
            terms,
            maps: BTreeMap::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        for (&p, m) in &self.maps {
            let src = self.summands(p);
            let tgt = self.summands(p + 1);
            if m.rows() != tgt.len() || m.cols() != src.len() {
                return Err(Error::Shape(format!(
                    "map {p}->{} is {}x{}, expected {}x{}",
                    p + 1,
                    m.rows(),
                    m.cols(),
                    tgt.len(),
                    src.len()
                )));
            }
            if m.n_vars() != self.n + 1 {
                return Err(Error::VarCountMismatch {
                    left: self.n + 1,
                    right: m.n_vars(),
                });
            }
            for (i, kt) in tgt.iter().enumerate() {
                for (j, ks) in src.iter().enumerate() {
                    let f = m.get(i, j);
                    if f.is_zero() {
                        continue;
                    }
                    if i64::from(f.degree()) != kt - ks {
                        return Err(Error::DegreeMismatch(format!(
                            "map {p}->{}: entry ({i}, {j}) has degree {}, expected {}",
                            p + 1,
                            f.degree(),
                            kt - ks
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vec<(i64, usize)>> {
        &self.terms
    }

    pub fn maps(&self) -> &BTreeMap<i64, PolyMatrix> {
        &self.maps
    }

    pub fn map(&self, p: i64) -> Option<&PolyMatrix> {
        self.maps.get(&p)
    }

    /// Twists of the individual summands of `C^p`, multiplicities expanded.
    pub fn summands(&self, p: i64) -> Vec<i64> {
        self.terms
            .get(&p)
            .map(|t| {
                t.iter()
                    .flat_map(|&(k, m)| std::iter::repeat_n(k, m))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn rank_of(&self, p: i64) -> usize {
        self.summands(p).len()
    }

    /// Degrees carrying a nonzero term.
    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.terms
            .iter()
            .filter(|(_, t)| t.iter().any(|&(_, m)| m > 0))
            .map(|(&p, _)| p)
            .collect()
    }

    /// The differential `C^p -> C^{p+1}`, zero if none was given.
    pub fn differential(&self, p: i64) -> PolyMatrix {
        self.maps.get(&p).cloned().unwrap_or_else(|| {
            PolyMatrix::zeros(self.rank_of(p + 1), self.rank_of(p), self.n + 1)
        })
    }

    /// Whether all consecutive composites vanish.
    pub fn verify(&self) -> Result<bool> {
        for (&p, m) in &self.maps {
            if let Some(next) = self.maps.get(&(p + 1)) {
                if !next.mul(m)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `sum_p (-1)^p ch(C^p)` in the complex's own indexing.
    pub fn character(&self) -> PnCharacter {
        let mut ch = PnCharacter::zero(self.n);
        for (&p, t) in &self.terms {
            let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
            for &(k, m) in t {
                ch = ch.add(&PnCharacter::line_bundle(self.n, k).scale(&qi(sign * m as i64)));
            }
        }
        ch
    }

    /// Character as a threefold character (only for `n = 3`).
    pub fn chern_character(&self) -> Result<ChernCharacter> {
        self.character().to_threefold().ok_or_else(|| {
            Error::UnsupportedComplex(format!("complex lives on P^{}, not P^3", self.n))
        })
    }

    /// Sets the listed coordinates to zero in every differential.
    pub fn kill_vars(&self, vars: &[usize]) -> LineBundleComplex {
        LineBundleComplex {
            n: self.n,
            terms: self.terms.clone(),
            maps: self.maps.iter().map(|(&p, m)| (p, m.kill_vars(vars))).collect(),
        }
    }

    /// Restriction to the linear subspace where only `keep` coordinates are
    /// nonzero, as a complex on `P^{keep.len() - 1}`.
    pub fn restrict(&self, keep: &[usize]) -> Result<LineBundleComplex> {
        let drop: Vec<usize> = (0..=self.n).filter(|v| !keep.contains(v)).collect();
        let killed = self.kill_vars(&drop);
        let maps = killed
            .maps
            .iter()
            .map(|(&p, m)| Ok((p, m.restrict_to_vars(keep)?)))
            .collect::<Result<_>>()?;
        LineBundleComplex::new(keep.len() - 1, self.terms.clone(), maps)
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        for (p, t) in &self.terms {
            terms.insert(p.to_string(), json!(t.iter().map(|&(k, m)| json!([k, m])).collect::<Vec<_>>()));
        }
        let mut maps = Map::new();
        for (p, m) in &self.maps {
            maps.insert(format!("{}->{}", p, p + 1), m.to_json());
        }
        json!({"n": self.n, "terms": terms, "maps": maps})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("monad needs integer \"n\"".into()))? as usize;
        if n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        let mut terms = BTreeMap::new();
        let tv = v
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("monad needs object \"terms\"".into()))?;
        for (key, list) in tv {
            let p: i64 = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree key {key:?}")))?;
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse(format!("term {key} must be a list")))?;
            let mut summands = Vec::new();
            for s in list {
                let pair = s.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    Error::Parse(format!("term {key}: summands are [twist, multiplicity]"))
                })?;
                let k = pair[0]
                    .as_i64()
                    .ok_or_else(|| Error::Parse("twist must be an integer".into()))?;
                let m = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("multiplicity must be a natural number".into()))?;
                summands.push((k, m as usize));
            }
            terms.insert(p, summands);
        }
        let mut shell = LineBundleComplex {
            n,
            terms,
            maps: BTreeMap::new(),
        };
        if let Some(mv) = v.get("maps") {
            let mv = mv
                .as_object()
                .ok_or_else(|| Error::Parse("\"maps\" must be an object".into()))?;
            for (key, mat) in mv {
                let (a, b) = key
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("bad map key {key:?}")))?;
                let p: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad map key {key:?}")))?;
                let q: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad map key {key:?}")))?;
                if q != p + 1 {
                    return Err(Error::Parse(format!("map {key} must go from p to p+1")));
                }
                let src = shell.summands(p);
                let tgt = shell.summands(q);
                let m = PolyMatrix::from_json(mat, n + 1, |i, j| {
                    let d = tgt.get(i).copied().unwrap_or(0) - src.get(j).copied().unwrap_or(0);
                    d.max(0) as u32
                })?;
                if m.rows() == 0 && !tgt.is_empty() {
                    // an empty list stands for the zero map
                    shell.maps.insert(p, PolyMatrix::zeros(tgt.len(), src.len(), n + 1));
                } else {
                    shell.maps.insert(p, m);
                }
            }
        }
        shell.validate()?;
        Ok(shell)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    pub use crate::monad::examples::null_correlation;
}

#[cfg(test)]
mod tests {
    use super::fixtures::null_correlation;
    use super::*;
    use crate::exact::poly::HomogPoly;

    #[test]
    fn null_correlation_is_a_complex() {
        let c = null_correlation();
        assert!(c.verify().unwrap());
        assert_eq!(c.character().a, vec![qi(2), qi(0), qi(-1), qi(0)]);
    }

    #[test]
    fn broken_sign_is_detected() {
        let c = null_correlation();
        let mut beta = c.differential(0);
        beta.set(0, 3, HomogPoly::var(4, 1).neg());
        let mut maps = c.maps().clone();
        maps.insert(0, beta);
        let broken = LineBundleComplex::new(3, c.terms().clone(), maps).unwrap();
        assert!(!broken.verify().unwrap());
    }

    #[test]
    fn one_term_complex() {
        let c = LineBundleComplex::single(3, 0, vec![(0, 1)]);
        assert!(c.verify().unwrap());
        let empty = LineBundleComplex::new(3, BTreeMap::new(), BTreeMap::new()).unwrap();
        assert_eq!(empty.character(), PnCharacter::zero(3));
    }

    #[test]
    fn wrong_degree_reported() {
        let c = null_correlation();
        let mut alpha = c.differential(-1);
        let sq = HomogPoly::var(4, 0).mul(&HomogPoly::var(4, 0)).unwrap();
        alpha.set(2, 0, sq);
        let mut maps = c.maps().clone();
        maps.insert(-1, alpha);
        let err = LineBundleComplex::new(3, c.terms().clone(), maps).unwrap_err();
        assert!(err.to_string().contains("(2, 0)"), "{err}");
    }

    #[test]
    fn json_roundtrip() {
        let c = null_correlation();
        let back = LineBundleComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}

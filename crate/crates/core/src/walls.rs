//! Numerical wall candidates for instanton-shape characters `(-R, 0, D, 0)`
//! and the resulting chamber decomposition of the `k = (s + 1/6) alpha^2` axis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::intlat::{hermite_normal_form, integer_kernel};
use crate::exact::rational::{
    as_integer, ceil, floor, fmt_rational, qi, rational_gcd, rational_to_json, Rational,
};
use crate::fano::{
    euler_characteristic, retwist, untwist_vector, FanoThreefold,
    IntegratedVector,
};
use crate::slice::{region_u_bound, wall_level};

/// Allowed untwisted integrated vectors `(ch0 H^3, ch1 H^2, ch2 H, ch3)`.
///
/// Each entry must be a multiple of `steps[i]`, and `chi(E(k))` must be an
/// integer for every `k` in `chi_twists`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernLattice {
    pub variety: FanoThreefold,
    pub steps: [Rational; 4],
    pub chi_twists: Vec<i64>,
    basis: Vec<[Rational; 4]>,
}

impl ChernLattice {
    pub fn new(variety: FanoThreefold, steps: [Rational; 4], chi_twists: Vec<i64>) -> Result<Self> {
        if steps.iter().any(|s| !s.is_positive()) {
            return Err(Error::Parse("lattice steps must be positive".into()));
        }
        let basis = lattice_basis(&variety, &steps, &chi_twists);
        Ok(ChernLattice {
            variety,
            steps,
            chi_twists,
            basis,
        })
    }

    /// Hermite-reduced basis, in untwisted integrated coordinates.
    pub fn basis(&self) -> &[[Rational; 4]] {
        &self.basis
    }

    /// Index of the lattice inside the box lattice `prod steps[i] Z`.
    pub fn index_in_box(&self) -> BigInt {
        let mut det = BigInt::one();
        for (i, b) in self.basis.iter().enumerate() {
            det *= as_integer(&(&b[i] / &self.steps[i])).expect("basis in box lattice");
        }
        det.abs()
    }

    pub fn contains(&self, v: &[Rational; 4]) -> bool {
        if v.iter().zip(&self.steps).any(|(x, s)| !(x / s).is_integer()) {
            return false;
        }
        let ch = untwist_vector(
            &self.variety,
            &IntegratedVector {
                v: v.clone(),
                beta: qi(0),
            },
        );
        self.chi_twists
            .iter()
            .all(|&k| euler_characteristic(&self.variety, &ch, k).is_integer())
    }

    /// Whether a vector given at any `beta` lies in the lattice.
    pub fn contains_twisted(&self, v: &IntegratedVector) -> bool {
        let u = if v.beta.is_zero() {
            v.clone()
        } else {
            retwist(&self.variety, v, &qi(0))
        };
        self.contains(&u.v)
    }

    /// Positive generators `g_i` with `{v_beta(A)_i : A in lattice} = g_i Z`.
    pub fn twisted_images(&self, beta: &Rational) -> [Rational; 4] {
        let twisted: Vec<IntegratedVector> = self
            .basis
            .iter()
            .map(|b| {
                retwist(
                    &self.variety,
                    &IntegratedVector {
                        v: b.clone(),
                        beta: qi(0),
                    },
                    beta,
                )
            })
            .collect();
        std::array::from_fn(|i| rational_gcd(twisted.iter().map(|t| &t.v[i])))
    }
}

/// Default lattice: `ch0 in Z`, `ch1 H^2 in H^3 Z`, `2 ch2 H in Z`,
/// `6 ch3 in Z`, and `chi(E(k)) in Z` for `k = 0..3`.
pub fn lattice_constraints(x: &FanoThreefold) -> ChernLattice {
    let d = qi(i64::from(x.degree()));
    ChernLattice::new(
        x.clone(),
        [d.clone(), d, Rational::new(1.into(), 2.into()), Rational::new(1.into(), 6.into())],
        vec![0, 1, 2, 3],
    )
    .expect("default steps are positive")
}

fn lattice_basis(x: &FanoThreefold, steps: &[Rational; 4], twists: &[i64]) -> Vec<[Rational; 4]> {
    // chi_k(step_j e_j) as a rational matrix; clear denominators to N.
    let unit = |j: usize| {
        let mut v: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        v[j] = steps[j].clone();
        untwist_vector(x, &IntegratedVector { v, beta: qi(0) })
    };
    let m: Vec<Vec<Rational>> = twists
        .iter()
        .map(|&k| (0..4).map(|j| euler_characteristic(x, &unit(j), k)).collect())
        .collect();
    let mut n = BigInt::one();
    for row in &m {
        for c in row {
            n = num_integer::Integer::lcm(&n, c.denom());
        }
    }
    let nq = Rational::from_integer(n.clone());
    let t = twists.len();
    // [N M | -N I] y = 0, y = (coords, multipliers)
    let a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(row_i, row)| {
            let mut out: Vec<BigInt> = row.iter().map(|c| (c * &nq).to_integer()).collect();
            for j in 0..t {
                out.push(if j == row_i { -n.clone() } else { BigInt::zero() });
            }
            out
        })
        .collect();
    let ker = integer_kernel(&a, 4 + t);
    let proj: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..4].to_vec()).collect();
    hermite_normal_form(&proj)
        .into_iter()
        .map(|row| std::array::from_fn(|j| Rational::from_integer(row[j].clone()) * &steps[j]))
        .collect()
}

/// A numerical destabilizer `v_{beta_0}(A) = (r, c, d, e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateCharacter {
    pub d: Rational,
    pub c: Rational,
    pub e: Rational,
    pub r: Rational,
    pub wall_k: Rational,
    pub inside_u: bool,
}

impl CandidateCharacter {
    pub fn vector(&self) -> [Rational; 4] {
        [self.r.clone(), self.c.clone(), self.d.clone(), self.e.clone()]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": rational_to_json(&self.r),
            "c": rational_to_json(&self.c),
            "d": rational_to_json(&self.d),
            "e": rational_to_json(&self.e),
        })
    }
}

impl fmt::Display for CandidateCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.r, self.c, self.d, self.e)
    }
}

fn check_instanton_input(x: &FanoThreefold, lattice: &ChernLattice, r: &Rational, d: &Rational) -> Result<()> {
    if r.is_negative() || !d.is_positive() {
        return Err(Error::InvalidShape(format!(
            "need R >= 0 and D > 0, got R={r}, D={d}"
        )));
    }
    let v = IntegratedVector::new(-r, qi(0), d.clone(), qi(0), x.beta0().clone());
    if !lattice.contains_twisted(&v) {
        return Err(Error::InvalidShape(format!(
            "(-{r}, 0, {d}, 0) is not the character of an object on {x}"
        )));
    }
    Ok(())
}

/// All lattice points `(r, c, d, e)` with `0 < d < D`,
/// `0 < 6ce <= min((2d)^2, (2D-2d)^2)` and
/// `-(c/6e)(2D-2d) - R <= r <= (c/6e) 2d`, ordered by `(d, c, e, r)`.
pub fn enumerate_candidates(x: &FanoThreefold, r_big: &Rational, d_big: &Rational) -> Result<Vec<CandidateCharacter>> {
    enumerate_in_lattice(&lattice_constraints(x), r_big, d_big)
}

pub fn enumerate_in_lattice(
    lattice: &ChernLattice,
    r_big: &Rational,
    d_big: &Rational,
) -> Result<Vec<CandidateCharacter>> {
    let x = &lattice.variety;
    check_instanton_input(x, lattice, r_big, d_big)?;
    let beta0 = x.beta0().clone();
    let [gr, gc, gd, ge] = lattice.twisted_images(&beta0);
    let k_u = region_u_bound(x);
    let two = qi(2);
    let six = qi(6);

    let d_count = ceil(&(d_big / &gd))
        .to_i64()
        .ok_or_else(|| Error::InvalidShape(format!("D={d_big} is too large")))?
        - 1;
    let ds: Vec<Rational> = (1..=d_count).map(|m| &gd * qi(m)).collect();

    let per_d: Vec<Vec<CandidateCharacter>> = ds
        .par_iter()
        .map(|d| {
            let mut found = Vec::new();
            let left = (&two * d) * (&two * d);
            let right_side = &two * d_big - &two * d;
            let right = &right_side * &right_side;
            let bound = if left < right { left } else { right };
            let mut c = gc.clone();
            // smallest e is ge, so 6 c ge <= bound bounds c
            while &six * &c * &ge <= bound {
                let mut e = ge.clone();
                while &six * &c * &e <= bound {
                    let ratio = &c / (&six * &e);
                    let lo = -(&ratio * &right_side) - r_big;
                    let hi = &ratio * &two * d;
                    let m_lo = ceil(&(&lo / &gr));
                    let m_hi = floor(&(&hi / &gr));
                    let mut m = m_lo;
                    while m <= m_hi {
                        let r = &gr * Rational::from_integer(m.clone());
                        let v = IntegratedVector::new(
                            r.clone(),
                            c.clone(),
                            d.clone(),
                            e.clone(),
                            beta0.clone(),
                        );
                        if lattice.contains_twisted(&v) {
                            let wall_k = &e / &c;
                            found.push(CandidateCharacter {
                                d: d.clone(),
                                c: c.clone(),
                                e: e.clone(),
                                r,
                                inside_u: wall_k < k_u,
                                wall_k,
                            });
                        }
                        m += 1;
                    }
                    e += &ge;
                }
                c += &gc;
            }
            found
        })
        .collect();

    let mut all: Vec<CandidateCharacter> = per_d.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// Whether the candidate set is closed under `(r,c,d,e) -> (-R-r, c, D-d, e)`.
pub fn involution_closed(cands: &[CandidateCharacter], r_big: &Rational, d_big: &Rational) -> bool {
    let set: std::collections::HashSet<[Rational; 4]> = cands.iter().map(|c| c.vector()).collect();
    cands.iter().all(|c| {
        set.contains(&[
            -r_big - &c.r,
            c.c.clone(),
            d_big - &c.d,
            c.e.clone(),
        ])
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub k: Rational,
    pub inside_u: bool,
    pub candidates: Vec<CandidateCharacter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSet {
    pub variety: FanoThreefold,
    pub r: Rational,
    pub d: Rational,
    pub k_u: Rational,
    pub walls: Vec<Wall>,
}

/// Open interval `(lo, hi)` of the `k`-axis; `hi = None` means `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub index: usize,
    pub lo: Rational,
    pub hi: Option<Rational>,
    pub meets_u: bool,
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(h) => write!(f, "({}, {})", self.lo, h),
            None => write!(f, "({}, +inf)", self.lo),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChamberLocation {
    Inside(Chamber),
    OnWall(Rational),
    /// On the boundary curve of `U` (not itself a wall for `v`).
    OnUBoundary,
}

/// Groups the candidates of [`enumerate_candidates`] by wall constant.
pub fn walls(x: &FanoThreefold, r_big: &Rational, d_big: &Rational) -> Result<WallSet> {
    let cands = enumerate_candidates(x, r_big, d_big)?;
    Ok(group_walls(x, r_big, d_big, cands))
}

pub fn group_walls(x: &FanoThreefold, r_big: &Rational, d_big: &Rational, cands: Vec<CandidateCharacter>) -> WallSet {
    let k_u = region_u_bound(x);
    let mut by_k: BTreeMap<Rational, Vec<CandidateCharacter>> = BTreeMap::new();
    for c in cands {
        by_k.entry(c.wall_k.clone()).or_default().push(c);
    }
    let walls = by_k
        .into_iter()
        .map(|(k, candidates)| Wall {
            inside_u: k < k_u,
            k,
            candidates,
        })
        .collect();
    WallSet {
        variety: x.clone(),
        r: r_big.clone(),
        d: d_big.clone(),
        k_u,
        walls,
    }
}

impl WallSet {
    pub fn candidate_count(&self) -> usize {
        self.walls.iter().map(|w| w.candidates.len()).sum()
    }

    pub fn all_candidates(&self) -> Vec<CandidateCharacter> {
        self.walls.iter().flat_map(|w| w.candidates.iter().cloned()).collect()
    }

    /// The intervals cut out of `(0, +inf)` by all walls and by `k_U`.
    pub fn chambers(&self) -> Vec<Chamber> {
        let mut cuts: Vec<Rational> = self.walls.iter().map(|w| w.k.clone()).collect();
        cuts.push(self.k_u.clone());
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut lo = Rational::zero();
        for (index, hi) in cuts.into_iter().enumerate() {
            out.push(Chamber {
                index,
                meets_u: lo < self.k_u,
                lo,
                hi: Some(hi.clone()),
            });
            lo = hi;
        }
        out.push(Chamber {
            index: out.len(),
            meets_u: false,
            lo,
            hi: None,
        });
        out
    }

    pub fn chamber_of_level(&self, k: &Rational) -> Result<ChamberLocation> {
        if !k.is_positive() {
            return Err(Error::OutsideRegion(format!("level k={k} must be positive")));
        }
        if self.walls.iter().any(|w| &w.k == k) {
            return Ok(ChamberLocation::OnWall(k.clone()));
        }
        if *k == self.k_u {
            return Ok(ChamberLocation::OnUBoundary);
        }
        let ch = self
            .chambers()
            .into_iter()
            .find(|c| &c.lo < k && c.hi.as_ref().is_none_or(|h| k < h))
            .expect("chambers cover the positive axis");
        Ok(ChamberLocation::Inside(ch))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "variety": {"degree": self.variety.degree(), "index": self.variety.index()},
            "R": fmt_rational(&self.r),
            "D": fmt_rational(&self.d),
            "k_U": fmt_rational(&self.k_u),
            "walls": self.walls.iter().map(|w| json!({
                "k": fmt_rational(&w.k),
                "inside_U": w.inside_u,
                "candidates": w.candidates.iter().map(CandidateCharacter::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,inside_U,r,c,d,e\n");
        for w in &self.walls {
            for c in &w.candidates {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    w.k, w.inside_u, c.r, c.c, c.d, c.e
                ));
            }
        }
        out
    }
}

/// `chamber_of` for a slice point.
pub fn chamber_of(ws: &WallSet, alpha2: &Rational, s: &Rational) -> Result<ChamberLocation> {
    if !alpha2.is_positive() || !s.is_positive() {
        return Err(Error::OutsideRegion(format!(
            "need alpha^2 > 0 and s > 0, got ({alpha2}, {s})"
        )));
    }
    ws.chamber_of_level(&wall_level(alpha2, s))
}

/// Level of the potential wall of `O(q_X)`: `(1/6)(i_X/2)^2`.
pub fn instanton_wall_constant(x: &FanoThreefold) -> Rational {
    region_u_bound(x)
}

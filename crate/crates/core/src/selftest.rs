//! Built-in acceptance checks, run by `instanton-kit selftest`.
//!
//! Every check is exact. A check that errors counts as a failure and carries
//! the error text in its detail.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adhm::{build_monad, charge_one_example, framing_check, random_adhm};
use crate::error::Result;
use crate::exact::rational::{q, qi, Rational};
use crate::fano::{
    d_functor_character, euler_characteristic, twist_character, untwist_vector, ChernCharacter, FanoThreefold,
    IntegratedVector,
};
use crate::monad::cech::hypercohomology_cech;
use crate::monad::examples::{non_sheaf_p3, null_correlation};
use crate::monad::predicates::{instanton_predicate, Flavor};
use crate::monad::spectral::{hypercohomology_spectral, nonzero};
use crate::monad::{cohomology_table, Hyper, LineBundleComplex};
use crate::presentation::{q3_counts_formula, q3_monad_counts};
use crate::quiver::{from_monad, theta_vector};
use crate::slice::{sample_quiver_region, slope_chain_check};
use crate::walls::{involution_closed, lattice_constraints, walls, WallSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("{tag} [{:02}] {}: {}", self.id, self.name, self.detail)
    }

    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "name": self.name, "pass": self.pass, "detail": self.detail})
    }
}

/// `(variety, R, D)` inputs whose wall sets are re-derived by the checks.
pub fn regression_walls() -> Vec<(FanoThreefold, Rational, Rational)> {
    let mut out = vec![
        (FanoThreefold::q3(), qi(4), q(1, 2)),
        (FanoThreefold::p3(), qi(2), qi(1)),
        (FanoThreefold::p3(), qi(2), qi(2)),
        (FanoThreefold::p3(), qi(4), qi(3)),
        (FanoThreefold::q3(), qi(4), q(3, 2)),
        (FanoThreefold::q3(), qi(8), qi(2)),
    ];
    for d in 1..=5u32 {
        out.push((FanoThreefold::v(d).expect("preset"), qi(i64::from(d)), qi(1)));
        out.push((FanoThreefold::v(d).expect("preset"), qi(i64::from(d)), qi(2)));
    }
    out
}

/// Complexes on which the two hypercohomology methods are compared, with
/// their twist windows.
pub fn regression_corpus() -> Vec<(String, LineBundleComplex, i64, i64)> {
    let mut out = vec![
        ("null-correlation".to_string(), null_correlation(), -5, 2),
        ("non-sheaf".to_string(), non_sheaf_p3(), -3, 2),
        ("line bundle O(1) on P^2".to_string(), LineBundleComplex::single(2, 0, vec![(1, 1)]), -4, 1),
    ];
    if let Ok(m) = build_monad(&charge_one_example()) {
        out.push(("adhm c=1 r=2".to_string(), m, -3, 1));
    }
    for seed in 0..3u64 {
        if let Ok(m) = random_adhm(3, 2, 2, seed).and_then(|d| build_monad(&d)) {
            out.push((format!("adhm c=2 r=2 seed {seed}"), m, -2, 1));
        }
    }
    out
}

fn criterion(id: u8, name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let (pass, detail) = match run() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name, pass, detail }
}

fn spinor_wall() -> Result<(bool, String)> {
    let ws = walls(&FanoThreefold::q3(), &qi(4), &q(1, 2))?;
    let expected: BTreeSet<[Rational; 4]> = [
        [qi(-6), qi(1), q(1, 4), q(1, 24)],
        [qi(2), qi(1), q(1, 4), q(1, 24)],
    ]
    .into_iter()
    .collect();
    let pass = ws.walls.len() == 1
        && ws.walls[0].k == q(1, 24)
        && ws.walls[0].candidates.iter().map(|c| c.vector()).collect::<BTreeSet<_>>() == expected
        && ws.walls[0].candidates.len() == 2;
    let ks: Vec<String> = ws.walls.iter().map(|w| w.k.to_string()).collect();
    Ok((pass, format!("walls at k = [{}]", ks.join(", "))))
}

fn ideal_sheaf_empty() -> Result<(bool, String)> {
    let mut counts = Vec::new();
    for d in 2..=5u32 {
        let ws = walls(&FanoThreefold::v(d)?, &qi(i64::from(d)), &qi(1))?;
        counts.push(ws.candidate_count());
    }
    Ok((counts.iter().all(|&c| c == 0), format!("candidate counts d=2..5: {counts:?}")))
}

fn lattice_display() -> Result<(bool, String)> {
    let x = FanoThreefold::q3();
    let lat = lattice_constraints(&x);
    let untwisted = lat.twisted_images(&qi(0));
    let twisted = lat.twisted_images(x.beta0());
    // ch1 H^2 in 2Z, ch2 H in Z, then r in 2Z, 4d in Z, 24e in Z at beta_0
    let pass = untwisted[1] == qi(2)
        && untwisted[2] == qi(1)
        && twisted[0] == qi(2)
        && twisted[2] == q(1, 4)
        && twisted[3] == q(1, 24);
    let show = |v: &[Rational; 4]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    Ok((pass, format!("untwisted steps ({}), twisted steps ({})", show(&untwisted), show(&twisted))))
}

fn euler_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(68);
    let mut checked = 0;
    for d in 1..=5u32 {
        let x = FanoThreefold::v(d)?;
        let h3 = qi(i64::from(d));
        for _ in 0..500 {
            let r = q(rng.gen_range(0..200), rng.gen_range(1..13));
            let dd = q(rng.gen_range(1..200), rng.gen_range(1..13));
            let v = IntegratedVector::new(-r.clone(), qi(0), dd.clone(), qi(0), x.beta0().clone());
            let chi = euler_characteristic(&x, &untwist_vector(&x, &v), 0);
            if chi != &dd - &r / &h3 {
                return Ok((false, format!("{x}: R={r}, D={dd} gives chi={chi}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} vectors")))
}

fn line_bundle_character() -> Result<(bool, String)> {
    let mut seen = BTreeSet::new();
    for x in FanoThreefold::presets() {
        let h3 = qi(i64::from(x.degree()));
        let half = q(i64::from(x.index()), 2);
        let expected = [
            h3.clone(),
            &half * &h3,
            q(1, 2) * &half * &half * &h3,
            q(1, 6) * &half * &half * &half * &h3,
        ];
        let v = twist_character(&x, &ChernCharacter::line_bundle(i64::from(x.q())), x.beta0());
        if v.v != expected {
            return Ok((false, format!("{x}: got {:?}", v.v)));
        }
        seen.insert(x.index());
    }
    Ok((seen.len() == 4, format!("indices checked: {seen:?}")))
}

fn duality() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for x in FanoThreefold::presets() {
        for _ in 0..50 {
            let mut r = || q(rng.gen_range(-50..50), rng.gen_range(1..25));
            let ch = ChernCharacter::new(r(), r(), r(), r());
            if d_functor_character(&x, &d_functor_character(&x, &ch)) != ch {
                return Ok((false, format!("{x}: D(D(ch)) != ch for {ch}")));
            }
        }
    }
    let mut sets = 0;
    for (x, r, d) in regression_walls() {
        let ws: WallSet = walls(&x, &r, &d)?;
        if !involution_closed(&ws.all_candidates(), &r, &d) {
            return Ok((false, format!("{x} R={r} D={d}: candidates not closed")));
        }
        sets += 1;
    }
    Ok((true, format!("involution on all presets, {sets} candidate sets closed")))
}

fn same_hyper(c: &LineBundleComplex, t: i64) -> Result<(Hyper, bool)> {
    let s = nonzero(&hypercohomology_spectral(c, t)?);
    let e = nonzero(&hypercohomology_cech(c, t)?);
    let agree = s == e;
    Ok((s, agree))
}

fn adhm_pipeline() -> Result<(bool, String)> {
    let m = build_monad(&charge_one_example())?;
    let verified = m.verify()?;
    let ch = m.chern_character()?;
    let ch_ok = ch == ChernCharacter::new(qi(2), qi(0), qi(-1), qi(0));
    let (h, agree) = same_hyper(&m, -1)?;
    let h1 = h.get(&1).copied().unwrap_or(0);
    let table = cohomology_table(&m, -4, 1)?;
    let report = instanton_predicate(&table, &m.character(), Flavor::Pn)?;
    let hrr = table.euler_consistent(&m.character());
    let framing = framing_check(&m)?;
    let pass = verified
        && ch_ok
        && h == [(1, 1)].into_iter().collect()
        && agree
        && report.pass
        && report.charge == 1
        && hrr
        && framing.framed();
    Ok((
        pass,
        format!(
            "verify={verified}, ch={ch}, h1(E(-1))={h1}, cech agrees={agree}, predicate={} charge={}, euler={hrr}, framed={}",
            report.pass,
            report.charge,
            framing.framed()
        ),
    ))
}

fn non_sheaf() -> Result<(bool, String)> {
    let m = non_sheaf_p3();
    let verified = m.verify()?;
    let ch = m.chern_character()?;
    let (h, agree) = same_hyper(&m, 0)?;
    let pass = verified && ch == ChernCharacter::new(qi(0), qi(0), qi(-3), qi(0)) && agree && h == [(1, 6)].into_iter().collect();
    Ok((pass, format!("verify={verified}, ch={ch}, H(t=0)={h:?}, cech agrees={agree}")))
}

fn q3_counts() -> Result<(bool, String)> {
    let x = FanoThreefold::q3();
    let v = IntegratedVector::new(qi(-4), qi(0), q(1, 2), qi(0), x.beta0().clone());
    let counts = q3_monad_counts(&v)?;
    let formula = q3_counts_formula(&qi(4), &q(1, 2));
    let pass = counts == [0, 1, 0, 0] && formula == [qi(0), qi(1), qi(0), qi(0)];
    Ok((pass, format!("(a, b, c, n) = {counts:?}")))
}

fn quiver_theta() -> Result<(bool, String)> {
    let theta0 = [qi(-1), qi(0), qi(1)];
    for r in 0..6 {
        for c in 0..6 {
            if r + 2 * c == 0 {
                continue;
            }
            if theta_vector(&qi(-1), &qi(1), r, c)? != theta0 {
                return Ok((false, format!("theta(-1, 1, {r}, {c}) differs")));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let (mut holding, mut broken) = (0, 0);
    for seed in 0..100u64 {
        let c = rng.gen_range(1..=2);
        let r = rng.gen_range(0..=3);
        let mut rep = from_monad(&build_monad(&random_adhm(3, c, r, seed)?)?)?;
        if seed % 2 == 1 {
            let k = rng.gen_range(0..4);
            let i = rng.gen_range(0..rep.dims[1]);
            let j = rng.gen_range(0..rep.dims[0]);
            let bumped = rep.a[k].get(i, j) + qi(rng.gen_range(1..4));
            rep.a[k].set(i, j, bumped);
        }
        let rel = rep.relations_hold();
        if rel != rep.to_monad()?.verify()? {
            return Ok((false, format!("seed {seed}: relations and verify disagree")));
        }
        if rel {
            holding += 1;
        } else {
            broken += 1;
        }
    }
    Ok((true, format!("theta = (-1, 0, 1); 100 monads agree ({holding} complexes, {broken} not)")))
}

fn cross_validation() -> Result<(bool, String)> {
    let mut points = 0;
    for (name, c, lo, hi) in regression_corpus() {
        for t in lo..=hi {
            let (_, agree) = same_hyper(&c, t)?;
            if !agree {
                return Ok((false, format!("{name} at t={t}")));
            }
            points += 1;
        }
    }
    Ok((true, format!("{points} (complex, twist) pairs agree")))
}

fn slope_chains() -> Result<(bool, String)> {
    for x in [FanoThreefold::p3(), FanoThreefold::q3()] {
        for (a2, s) in sample_quiver_region(&x, 10, 12)? {
            if !slope_chain_check(&x, &a2, &s)? {
                return Ok((false, format!("{x} at alpha^2={a2}, s={s}")));
            }
        }
    }
    Ok((true, "10 points each on P3 and Q3".into()))
}

/// Runs all twelve checks in order.
pub fn run_selftest() -> Vec<CriterionResult> {
    vec![
        criterion(1, "spinor wall", spinor_wall),
        criterion(2, "ideal-sheaf emptiness", ideal_sheaf_empty),
        criterion(3, "lattice fidelity", lattice_display),
        criterion(4, "euler identity", euler_identity),
        criterion(5, "twisted character of O(q_X)", line_bundle_character),
        criterion(6, "duality", duality),
        criterion(7, "adhm pipeline", adhm_pipeline),
        criterion(8, "non-sheaf monad", non_sheaf),
        criterion(9, "Q3 monad counts", q3_counts),
        criterion(10, "quiver theta and relations", quiver_theta),
        criterion(11, "spectral vs cech", cross_validation),
        criterion(12, "slope chains", slope_chains),
    ]
}

//! Acceptance suite. One PASS/FAIL line per criterion, each checked against an
//! oracle written here from first principles (Riemann-Roch on the threefold,
//! brute-force lattice search, binomial Euler counts) rather than through the
//! code paths under test.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use instanton_kit::adhm::{build_monad, charge_one_example, framing_check, random_adhm};
use instanton_kit::exact::rational::{q, qi, Rational};
use instanton_kit::fano::{
    d_functor_character, euler_characteristic, spinor_minus_one, twist_character, untwist_vector, ChernCharacter,
    FanoThreefold, IntegratedVector,
};
use instanton_kit::monad::cech::hypercohomology_cech;
use instanton_kit::monad::examples::non_sheaf_p3;
use instanton_kit::monad::predicates::{instanton_predicate, Flavor};
use instanton_kit::monad::spectral::{hypercohomology_spectral, nonzero};
use instanton_kit::monad::{cohomology_table, LineBundleComplex};
use instanton_kit::presentation::{q3_counts_formula, q3_monad_counts};
use instanton_kit::quiver::{from_monad, theta_vector};
use instanton_kit::selftest::{regression_corpus, regression_walls, run_selftest};
use instanton_kit::slice::{sample_quiver_region, slope_chain_check};
use instanton_kit::walls::{involution_closed, lattice_constraints, walls};

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Hirzebruch-Riemann-Roch on a threefold of degree `d` and index `i`:
/// `td = 1 + (i/2)H + td_2 + [pt]` with `td_2 . H = (i^2 d + 24/i) / 12`.
fn hrr(deg: i64, index: i64, a: &[Rational; 4]) -> Rational {
    let d = qi(deg);
    let i = qi(index);
    let td2h = (&i * &i * &d + qi(24) / &i) / qi(12);
    &d * &a[3] + &i / qi(2) * &d * &a[2] + &a[1] * td2h + &a[0]
}

/// Coefficients of `ch * e^{tH}`.
fn times_exp(a: &[Rational; 4], t: &Rational) -> [Rational; 4] {
    let e = [qi(1), t.clone(), t * t / qi(2), t * t * t / qi(6)];
    std::array::from_fn(|k| (0..=k).map(|j| &a[j] * &e[k - j]).sum())
}

/// Untwisted coefficients from a vector integrated at `beta`.
fn untwist(deg: i64, beta: &Rational, v: &[Rational; 4]) -> [Rational; 4] {
    let b: [Rational; 4] = std::array::from_fn(|k| &v[k] / qi(deg));
    times_exp(&b, beta)
}

/// Integrated vector at `beta` of a character given by coefficients.
fn twist(deg: i64, beta: &Rational, a: &[Rational; 4]) -> [Rational; 4] {
    times_exp(a, &-beta).map(|x| x * qi(deg))
}

fn beta0(index: i64) -> Rational {
    q(-(index % 2), 2)
}

/// `ch0 in Z`, `c1 in Z H`, `2 ch2 H in Z`, `6 ch3 in Z`, `chi(E(k)) in Z` for `k = 0..3`.
fn in_lattice(deg: i64, index: i64, a: &[Rational; 4]) -> bool {
    let d = qi(deg);
    a[0].is_integer()
        && a[1].is_integer()
        && (qi(2) * &a[2] * &d).is_integer()
        && (qi(6) * &a[3] * &d).is_integer()
        && (0..4).all(|k| hrr(deg, index, &times_exp(a, &qi(k))).is_integer())
}

fn range(lo: Rational, hi: Rational, step: Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x.clone());
        x += &step;
    }
    out
}

/// Brute-force search for destabilizers of `(-R, 0, D, 0)`: a fine grid in
/// twisted coordinates, the candidate inequalities, and the lattice test.
/// Returns wall level `e/c` to candidates.
fn brute_walls(deg: i64, index: i64, r_big: &Rational, d_big: &Rational) -> BTreeMap<Rational, BTreeSet<[Rational; 4]>> {
    let b = beta0(index);
    let mut out: BTreeMap<Rational, BTreeSet<[Rational; 4]>> = BTreeMap::new();
    let (c_step, d_step, e_step) = (q(1, 2), q(1, 8), q(1, 48));
    for d in range(d_step.clone(), d_big - &d_step, d_step.clone()) {
        let cap = {
            let a = qi(2) * &d;
            let b2 = qi(2) * (d_big - &d);
            let m = if a < b2 { a } else { b2 };
            &m * &m
        };
        // 6ce <= cap with e >= e_step bounds c
        for c in range(c_step.clone(), &cap / (qi(6) * &e_step), c_step.clone()) {
            for e in range(e_step.clone(), &cap / (qi(6) * &c), e_step.clone()) {
                let slope = &c / (qi(6) * &e);
                let lo = -(&slope * qi(2) * (d_big - &d)) - r_big;
                let hi = &slope * qi(2) * &d;
                let mut r = lo.ceil();
                while r <= hi {
                    let v = [r.clone(), c.clone(), d.clone(), e.clone()];
                    if in_lattice(deg, index, &untwist(deg, &b, &v)) {
                        out.entry(&e / &c).or_default().insert(v);
                    }
                    r += qi(1);
                }
            }
        }
    }
    out
}

/// `chi(O(m))` on `P^n`.
fn chi_line(n: usize, m: i64) -> Rational {
    let mut num = qi(1);
    for j in 1..=n as i64 {
        num = num * qi(m + j) / qi(j);
    }
    num
}

/// `sum_p (-1)^p chi(C^p(t))`.
fn complex_euler(c: &LineBundleComplex, t: i64) -> Rational {
    c.terms()
        .iter()
        .flat_map(|(&p, ts)| ts.iter().map(move |&(k, m)| (p, k, m)))
        .map(|(p, k, m)| {
            let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_line(c.n(), k + t) * qi(sign * m as i64)
        })
        .sum()
}

fn alternating(h: &BTreeMap<i64, usize>) -> Rational {
    h.iter()
        .map(|(&i, &d)| qi(if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }))
        .sum()
}

/// `lambda` of an integrated vector, `None` for `+inf`.
fn lambda(v: &[Rational; 4], alpha2: &Rational, s: &Rational) -> Option<Rational> {
    let den = &v[2] - alpha2 * &v[0] / qi(2);
    if den.is_zero() {
        return None;
    }
    Some((&v[3] - (s + q(1, 6)) * alpha2 * &v[1]) / den)
}

fn lt(a: &Option<Rational>, b: &Option<Rational>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

fn line_shifted(deg: i64, index: i64, k: i64, shift: i64) -> [Rational; 4] {
    let sign = if shift % 2 == 0 { qi(1) } else { qi(-1) };
    twist(deg, &beta0(index), &times_exp(&[qi(1), qi(0), qi(0), qi(0)], &qi(k))).map(|x| x * &sign)
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn spinor_wall() -> Check {
    let ws = walls(&FanoThreefold::q3(), &qi(4), &q(1, 2)).map_err(|e| e.to_string())?;
    let expected: BTreeSet<[Rational; 4]> =
        [[qi(-6), qi(1), q(1, 4), q(1, 24)], [qi(2), qi(1), q(1, 4), q(1, 24)]].into_iter().collect();
    ensure(ws.walls.len() == 1, format!("{} walls", ws.walls.len()))?;
    ensure(ws.walls[0].k == q(1, 24), format!("k = {}", ws.walls[0].k))?;
    let got: BTreeSet<_> = ws.walls[0].candidates.iter().map(|c| c.vector()).collect();
    ensure(got == expected && ws.walls[0].candidates.len() == 2, format!("candidates {got:?}"))?;
    let oracle = brute_walls(2, 3, &qi(4), &q(1, 2));
    ensure(
        oracle.len() == 1 && oracle.get(&q(1, 24)) == Some(&expected),
        format!("brute force disagrees: {oracle:?}"),
    )?;
    Ok("one wall k=1/24 with {(-6,1,1/4,1/24), (2,1,1/4,1/24)}; brute force agrees".into())
}

fn ideal_sheaf_empty() -> Check {
    for d in 2..=5i64 {
        let ws = walls(&FanoThreefold::v(d as u32).unwrap(), &qi(d), &qi(1)).map_err(|e| e.to_string())?;
        ensure(ws.candidate_count() == 0, format!("d={d}: {} candidates", ws.candidate_count()))?;
        let oracle = brute_walls(d, 2, &qi(d), &qi(1));
        ensure(oracle.is_empty(), format!("d={d}: brute force finds {oracle:?}"))?;
    }
    Ok("no candidates for d = 2..5; brute force agrees".into())
}

fn lattice_fidelity() -> Check {
    let x = FanoThreefold::q3();
    let lat = lattice_constraints(&x);
    let tw = lat.twisted_images(x.beta0());
    let un = lat.twisted_images(&qi(0));
    ensure(
        tw == [qi(2), qi(1), q(1, 4), q(1, 24)],
        format!("twisted steps {tw:?}"),
    )?;
    ensure(un[1] == qi(2) && un[2] == qi(1), format!("untwisted steps {un:?}"))?;
    // oracle: gcd of each coordinate over lattice points in a box
    let gcd = |a: &Rational, b: &Rational| -> Rational {
        let (mut a, mut b) = (a.abs(), b.abs());
        while !b.is_zero() {
            let r = &a - (&a / &b).floor() * &b;
            a = b;
            b = r;
        }
        a
    };
    let mut g_tw = [qi(0), qi(0), qi(0), qi(0)];
    let mut g_un = [qi(0), qi(0), qi(0), qi(0)];
    for a0 in range(qi(-2), qi(2), qi(1)) {
        for a1 in range(qi(-2), qi(2), qi(1)) {
            for a2 in range(qi(-2), qi(2), q(1, 4)) {
                for a3 in range(qi(-1), qi(1), q(1, 12)) {
                    let a = [a0.clone(), a1.clone(), a2.clone(), a3];
                    if !in_lattice(2, 3, &a) {
                        continue;
                    }
                    let v = twist(2, &q(-1, 2), &a);
                    let u = twist(2, &qi(0), &a);
                    for k in 0..4 {
                        g_tw[k] = gcd(&g_tw[k], &v[k]);
                        g_un[k] = gcd(&g_un[k], &u[k]);
                    }
                }
            }
        }
    }
    ensure(g_tw == tw, format!("oracle twisted steps {g_tw:?}"))?;
    ensure(g_un[1] == qi(2) && g_un[2] == qi(1), format!("oracle untwisted steps {g_un:?}"))?;
    Ok("ch1(A)H^2 in 2Z, ch2(A)H in Z, r in 2Z, 4d in Z, 24e in Z".into())
}

fn euler_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for deg in 1..=5i64 {
        let x = FanoThreefold::v(deg as u32).unwrap();
        for _ in 0..500 {
            let r = q(rng.gen_range(0..300), rng.gen_range(1..20));
            let d = q(rng.gen_range(1..300), rng.gen_range(1..20));
            let v = IntegratedVector::new(-r.clone(), qi(0), d.clone(), qi(0), x.beta0().clone());
            let chi = euler_characteristic(&x, &untwist_vector(&x, &v), 0);
            let expected = &d - &r / qi(deg);
            let oracle = hrr(deg, 2, &untwist(deg, &qi(0), &v.v));
            ensure(chi == expected && oracle == expected, format!("V{deg}: R={r} D={d} chi={chi} oracle={oracle}"))?;
        }
    }
    Ok("2500 vectors satisfy chi = D - R/H^3".into())
}

fn line_bundle_vector() -> Check {
    let mut indices = BTreeSet::new();
    for x in [FanoThreefold::p3(), FanoThreefold::q3(), FanoThreefold::v(4).unwrap(), FanoThreefold::new(22, 1).unwrap()] {
        let (deg, i) = (i64::from(x.degree()), i64::from(x.index()));
        let h = q(i, 2);
        let h3 = qi(deg);
        let expected = [
            h3.clone(),
            &h * &h3,
            q(1, 2) * &h * &h * &h3,
            q(1, 6) * &h * &h * &h * &h3,
        ];
        let got = twist_character(&x, &ChernCharacter::line_bundle(i / 2), x.beta0()).v;
        let oracle = line_shifted(deg, i, i / 2, 0);
        ensure(got == expected && oracle == expected, format!("{x}: {got:?}"))?;
        indices.insert(i);
    }
    ensure(indices.len() == 4, "not all indices covered")?;
    Ok("v(O(q_X)) = (H^3, (i/2)H^3, (i/2)^2 H^3/2, (i/2)^3 H^3/6) for i = 1..4".into())
}

fn duality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for x in FanoThreefold::presets() {
        for _ in 0..50 {
            let mut r = || q(rng.gen_range(-40..40), rng.gen_range(1..30));
            let ch = ChernCharacter::new(r(), r(), r(), r());
            ensure(d_functor_character(&x, &d_functor_character(&x, &ch)) == ch, format!("{x}: not an involution"))?;
        }
    }
    let mut count = 0;
    for (x, r, d) in regression_walls() {
        let ws = walls(&x, &r, &d).map_err(|e| e.to_string())?;
        let cands = ws.all_candidates();
        ensure(involution_closed(&cands, &r, &d), format!("{x} ({r}, {d}) not closed"))?;
        let set: BTreeSet<_> = cands.iter().map(|c| c.vector()).collect();
        for c in &set {
            let image = [-&r - &c[0], c[1].clone(), &d - &c[2], c[3].clone()];
            ensure(set.contains(&image), format!("{x} ({r}, {d}): image of {c:?} missing"))?;
        }
        count += 1;
    }
    Ok(format!("D is an involution on all presets; {count} wall sets closed"))
}

fn adhm_pipeline() -> Check {
    let m = build_monad(&charge_one_example()).map_err(|e| e.to_string())?;
    ensure(m.verify().unwrap(), "monad does not verify")?;
    ensure(
        m.chern_character().unwrap() == ChernCharacter::new(qi(2), qi(0), qi(-1), qi(0)),
        "wrong character",
    )?;
    let cech = nonzero(&hypercohomology_cech(&m, -1).unwrap());
    ensure(cech == [(1, 1)].into_iter().collect(), format!("cech H(E(-1)) = {cech:?}"))?;
    let spectral = nonzero(&hypercohomology_spectral(&m, -1).unwrap());
    ensure(spectral == cech, "spectral disagrees with cech")?;
    let table = cohomology_table(&m, -4, 1).unwrap();
    for t in -4..=1 {
        ensure(qi(table.euler(t).unwrap()) == complex_euler(&m, t), format!("euler mismatch at t={t}"))?;
    }
    let report = instanton_predicate(&table, &m.character(), Flavor::Pn).unwrap();
    ensure(report.pass && report.charge == 1, format!("predicate fails: {:?}", report.failing()))?;
    ensure(framing_check(&m).unwrap().framed(), "framing fails")?;
    Ok("verify, ch=(2,0,-1,0), h1(E(-1))=1, Pn conditions with charge 1, framed".into())
}

fn non_sheaf() -> Check {
    let m = non_sheaf_p3();
    ensure(m.verify().unwrap(), "does not verify")?;
    ensure(
        m.chern_character().unwrap() == ChernCharacter::new(qi(0), qi(0), qi(-3), qi(0)),
        "wrong character",
    )?;
    let h = nonzero(&hypercohomology_cech(&m, 0).unwrap());
    ensure(h == [(1, 6)].into_iter().collect(), format!("cech H(t=0) = {h:?}"))?;
    ensure(nonzero(&hypercohomology_spectral(&m, 0).unwrap()) == h, "spectral disagrees")?;
    ensure(complex_euler(&m, 0) == qi(-6), "euler count")?;
    Ok("verifies, ch=(0,0,-3,0), H^1 = 6 at t=0".into())
}

fn q3_counts() -> Check {
    let x = FanoThreefold::q3();
    let v = IntegratedVector::new(qi(-4), qi(0), q(1, 2), qi(0), x.beta0().clone());
    let counts = q3_monad_counts(&v).map_err(|e| e.to_string())?;
    ensure(counts == [0, 1, 0, 0], format!("{counts:?}"))?;
    ensure(q3_counts_formula(&qi(4), &q(1, 2)) == [qi(0), qi(1), qi(0), qi(0)], "formula")?;
    // S(-1) alone: rank 2, c1 = -H, ch2 = 0, exceptional so chi = 0; then chi(S) = 4
    let mut s = [qi(2), qi(-1), qi(0), qi(0)];
    s[3] = -hrr(2, 3, &s) / qi(2);
    ensure(hrr(2, 3, &times_exp(&s, &qi(1))) == qi(4), "oracle spinor has chi(S) != 4")?;
    ensure(spinor_minus_one().a == s, "library spinor character")?;
    let w = twist(2, &q(-1, 2), &s);
    ensure(w == v.v.clone().map(|c| -c), format!("v(S(-1)) = {w:?}"))?;
    Ok("(a, b, c) = (0, 1, 0)".into())
}

fn quiver() -> Check {
    for r in 0..8 {
        for c in 0..8 {
            if r + 2 * c > 0 {
                ensure(
                    theta_vector(&qi(-1), &qi(1), r, c).unwrap() == [qi(-1), qi(0), qi(1)],
                    format!("theta at r={r} c={c}"),
                )?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut yes, mut no) = (0, 0);
    for seed in 0..100u64 {
        let d = random_adhm(3, rng.gen_range(1..=2), rng.gen_range(1..=3), seed).unwrap();
        let mut rep = from_monad(&build_monad(&d).unwrap()).unwrap();
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(0..4);
            let (i, j) = (rng.gen_range(0..rep.dims[2]), rng.gen_range(0..rep.dims[1]));
            let bumped = rep.b[k].get(i, j) + qi(1);
            rep.b[k].set(i, j, bumped);
        }
        let rel = rep.relations_hold();
        ensure(rel == rep.to_monad().unwrap().verify().unwrap(), format!("seed {seed}"))?;
        if rel {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, "sample did not exercise both outcomes")?;
    Ok(format!("theta = (-1,0,1); relations <=> verify on 100 monads ({yes} hold, {no} fail)"))
}

fn cross_validation() -> Check {
    let mut n = 0;
    for (name, c, lo, hi) in regression_corpus() {
        for t in lo..=hi {
            let s = nonzero(&hypercohomology_spectral(&c, t).unwrap());
            let e = nonzero(&hypercohomology_cech(&c, t).unwrap());
            ensure(s == e, format!("{name} t={t}: {s:?} vs {e:?}"))?;
            ensure(alternating(&e) == complex_euler(&c, t), format!("{name} t={t}: euler"))?;
            n += 1;
        }
    }
    Ok(format!("{n} (complex, twist) pairs agree"))
}

fn slope_chains() -> Check {
    for (a2, s) in sample_quiver_region(&FanoThreefold::p3(), 10, 5).unwrap() {
        ensure(slope_chain_check(&FanoThreefold::p3(), &a2, &s).unwrap(), "library chain fails on P3")?;
        let l = |k, sh| lambda(&line_shifted(1, 4, k, sh), &a2, &s);
        let zero = Some(qi(0));
        ensure(
            lt(&l(-2, 2), &l(1, 0)) && !lt(&zero, &l(1, 0)) && l(0, 1) == zero && !lt(&l(-1, 2), &zero),
            format!("P3 oracle chain at ({a2}, {s})"),
        )?;
    }
    let spinor_shift = {
        let mut s = [qi(2), qi(-1), qi(0), qi(0)];
        s[3] = -hrr(2, 3, &s) / qi(2);
        twist(2, &q(-1, 2), &s).map(|x| -x)
    };
    for (a2, s) in sample_quiver_region(&FanoThreefold::q3(), 10, 5).unwrap() {
        ensure(slope_chain_check(&FanoThreefold::q3(), &a2, &s).unwrap(), "library chain fails on Q3")?;
        let l = |k, sh| lambda(&line_shifted(2, 3, k, sh), &a2, &s);
        let zero = Some(qi(0));
        let sp = lambda(&spinor_shift, &a2, &s);
        ensure(
            lt(&l(0, 0), &sp) && sp == zero && lt(&zero, &l(-1, 2)) && lt(&zero, &l(1, 0)),
            format!("Q3 oracle chain at ({a2}, {s})"),
        )?;
    }
    Ok("10 points each on P3 and Q3".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("spinor wall reproduction", spinor_wall),
        ("ideal-sheaf emptiness", ideal_sheaf_empty),
        ("lattice fidelity", lattice_fidelity),
        ("euler identity", euler_identity),
        ("twisted character of O(q_X)", line_bundle_vector),
        ("duality suite", duality),
        ("ADHM pipeline", adhm_pipeline),
        ("non-sheaf instanton monad", non_sheaf),
        ("Q3 monad counts", q3_counts),
        ("quiver theta and relations", quiver),
        ("spectral vs Cech cross-validation", cross_validation),
        ("region slope chains", slope_chains),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    let builtin = run_selftest();
    let builtin_ok = builtin.iter().all(|r| r.pass);
    println!("{} built-in selftest", if builtin_ok { "PASS" } else { "FAIL" });
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(builtin_ok, "built-in selftest failed");
}

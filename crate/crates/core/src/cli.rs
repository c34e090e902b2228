//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a mathematical check failed, `2` bad input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::adhm::{
    build_monad, check_adhm, fiberwise_check_data, framing_check, git_stable, random_points, AdhmData,
};
use crate::error::{Error, Result};
use crate::exact::rational::{parse_rational, qi, rational_to_json, Rational};
use crate::fano::{
    d_functor_character, euler_characteristic, twist_character, untwist_vector, ChernCharacter, FanoThreefold,
    IntegratedVector,
};
use crate::monad::predicates::{instanton_predicate, perverse_shape_check, Flavor};
use crate::monad::{cohomology_table, LineBundleComplex};
use crate::quiver::{from_monad, subrep_search, theta_vector, Convention, QuiverRep};
use crate::selftest::run_selftest;
use crate::slice::{
    central_charge, in_quiver_region, in_region_u, lambda_slope, mu_slope, nu_slope, slope_chain_check,
};
use crate::svg::{render_walls_svg, SvgBounds};
use crate::walls::{chamber_of, walls, ChamberLocation};

pub const THREADS_VAR: &str = "INSTANTON_KIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "instanton-kit", version, about = "Exact wall-and-chamber and monad computations for instantons")]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct VarietyArgs {
    /// Preset name: P3, Q3, V1..V5 or X<degree>.
    #[arg(long, conflicts_with_all = ["degree", "index"])]
    variety: Option<String>,
    #[arg(long, requires = "index")]
    degree: Option<u32>,
    #[arg(long, requires = "degree")]
    index: Option<u32>,
}

impl VarietyArgs {
    fn resolve(&self) -> Result<FanoThreefold> {
        match (&self.variety, self.degree, self.index) {
            (Some(name), _, _) => FanoThreefold::preset(name),
            (None, Some(d), Some(i)) => FanoThreefold::new(d, i),
            _ => Err(Error::Parse("give --variety or both --degree and --index".into())),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct InstantonArgs {
    #[command(flatten)]
    variety: VarietyArgs,
    #[arg(long = "R", value_parser = rational_arg, allow_hyphen_values = true)]
    r: Rational,
    #[arg(long = "D", value_parser = rational_arg, allow_hyphen_values = true)]
    d: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// chi(E(t)) for the character (-R, 0, D, 0) at beta_0.
    Chi {
        #[command(flatten)]
        inst: InstantonArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Twisted integrated vector of a character.
    Twist {
        #[command(flatten)]
        variety: VarietyArgs,
        /// Coefficients a0,a1,a2,a3 of ch = sum a_i H^i.
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        ch: RatList,
        /// Defaults to beta_0.
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Character of the derived dual twisted by O(-e_X).
    #[command(name = "dualD")]
    DualD {
        #[command(flatten)]
        variety: VarietyArgs,
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        ch: RatList,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Slopes and central charge of a character at a slice point.
    Slope {
        #[command(flatten)]
        variety: VarietyArgs,
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        ch: RatList,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        alpha2: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Membership of a slice point in U and in the quiver region.
    Region {
        #[command(flatten)]
        variety: VarietyArgs,
        /// Must equal beta_0 if given.
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        alpha2: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Numerical walls for (-R, 0, D, 0).
    Walls {
        #[command(flatten)]
        inst: InstantonArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long = "alpha-max", value_parser = rational_arg)]
        alpha_max: Option<Rational>,
        #[arg(long = "s-max", value_parser = rational_arg)]
        s_max: Option<Rational>,
    },
    /// Chamber containing a slice point.
    Chamber {
        #[command(flatten)]
        inst: InstantonArgs,
        #[arg(long, value_parser = rational_arg)]
        alpha2: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Line-bundle complexes on P^n.
    Monad {
        #[command(subcommand)]
        cmd: MonadCmd,
    },
    /// ADHM data.
    Adhm {
        #[command(subcommand)]
        cmd: AdhmCmd,
    },
    /// Quiver representations.
    Quiver {
        #[command(subcommand)]
        cmd: QuiverCmd,
    },
    /// Runs the built-in acceptance checks.
    Selftest {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
struct TableArgs {
    /// Twist window `a..b`, both ends included.
    #[arg(long = "t", value_parser = window_arg, allow_hyphen_values = true, default_value = "-3..1")]
    t: (i64, i64),
    #[arg(long)]
    predicate: Option<Flavor>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum MonadCmd {
    /// Checks that consecutive maps compose to zero.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Hypercohomology table over a twist window.
    Table {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        table: TableArgs,
    },
}

#[derive(Subcommand, Debug)]
enum AdhmCmd {
    /// ADHM equation, GIT stability and a fiberwise spot check.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prints the associated monad as JSON.
    Build {
        #[arg(long)]
        file: PathBuf,
    },
    /// Hypercohomology table of the associated monad.
    Table {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Triviality of the monad on the line z = 0.
    Framing {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum QuiverCmd {
    /// theta = (alpha, -(alpha + gamma) c / (r + 2c), gamma).
    Theta {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        gamma: Rational,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
    },
    /// Seeded search for a theta-destabilizing subrepresentation.
    Search {
        /// A representation, or a monad O(-1)^u -> O^v -> O(1)^w.
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
        theta: RatList,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "ge")]
        convention: Convention,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Comma-separated exact fractions.
#[derive(Clone, Debug)]
struct RatList(Vec<Rational>);

fn rational_list(s: &str) -> std::result::Result<RatList, String> {
    s.split(',').map(rational_arg).collect::<std::result::Result<_, _>>().map(RatList)
}

fn window_arg(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("window must look like a..b, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
    if a > b {
        return Err(format!("empty window {s}"));
    }
    Ok((a, b))
}

/// What a subcommand produced: the artifact and whether its check passed.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }

    fn check(text: String, ok: bool) -> Self {
        Outcome { text, ok }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn four(ch: &[Rational]) -> Result<ChernCharacter> {
    match ch {
        [a0, a1, a2, a3] => Ok(ChernCharacter::new(a0.clone(), a1.clone(), a2.clone(), a3.clone())),
        _ => Err(Error::Parse(format!("need four coefficients, got {}", ch.len()))),
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn instanton_vector(x: &FanoThreefold, r: &Rational, d: &Rational) -> IntegratedVector {
    IntegratedVector::new(-r, qi(0), d.clone(), qi(0), x.beta0().clone())
}

fn vector_json(v: &IntegratedVector) -> Value {
    json!({
        "beta": rational_to_json(&v.beta),
        "v": v.v.iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

fn location_text(loc: &ChamberLocation) -> (String, Value) {
    match loc {
        ChamberLocation::Inside(c) => (
            format!("chamber {} {}", c.index, c),
            json!({
                "location": "chamber",
                "index": c.index,
                "lo": rational_to_json(&c.lo),
                "hi": c.hi.as_ref().map(rational_to_json),
                "meets_U": c.meets_u,
            }),
        ),
        ChamberLocation::OnWall(k) => (format!("on wall k={k}"), json!({"location": "wall", "k": rational_to_json(k)})),
        ChamberLocation::OnUBoundary => ("on the boundary of U".into(), json!({"location": "U boundary"})),
    }
}

fn table_outcome(c: &LineBundleComplex, args: &TableArgs) -> Result<Outcome> {
    let (lo, hi) = args.t;
    let table = cohomology_table(c, lo, hi)?;
    let report = match args.predicate {
        Some(f) => Some(instanton_predicate(&table, &c.character(), f)?),
        None => None,
    };
    let ok = report.as_ref().is_none_or(|r| r.pass);
    let text = match args.format {
        Format::Json => pretty(&json!({
            "table": table.to_json(),
            "predicate": report.as_ref().map(|r| r.to_json()),
        })),
        _ => {
            let mut s = table.to_string();
            if let Some(r) = &report {
                s.push_str(&format!("{} predicate: {}\n", r.flavor, if r.pass { "pass" } else { "fail" }));
                s.push_str(&format!("charge h^1(E(-1)) = {}\n", r.charge));
                for (cond, holds) in &r.conditions {
                    s.push_str(&format!("  [{}] {cond}\n", if *holds { "ok" } else { "FAIL" }));
                }
            }
            s
        }
    };
    Ok(Outcome::check(text, ok))
}

fn load_monad(path: &PathBuf) -> Result<LineBundleComplex> {
    LineBundleComplex::from_json(&read_json(path)?)
}

fn load_adhm(path: &PathBuf) -> Result<AdhmData> {
    AdhmData::from_json(&read_json(path)?)
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Chi { inst, twist } => {
            let x = inst.variety.resolve()?;
            let ch = untwist_vector(&x, &instanton_vector(&x, &inst.r, &inst.d));
            Ok(Outcome::ok(format!("{}\n", euler_characteristic(&x, &ch, twist))))
        }
        Command::Twist { variety, ch, beta, format } => {
            let x = variety.resolve()?;
            let beta = beta.unwrap_or_else(|| x.beta0().clone());
            let v = twist_character(&x, &four(&ch.0)?, &beta);
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&vector_json(&v)),
                _ => format!("{v}\n"),
            }))
        }
        Command::DualD { variety, ch, format } => {
            let x = variety.resolve()?;
            let d = d_functor_character(&x, &four(&ch.0)?);
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&d.to_json()),
                _ => format!("{d}\n"),
            }))
        }
        Command::Slope {
            variety,
            ch,
            beta,
            alpha2,
            s,
            format,
        } => {
            let x = variety.resolve()?;
            let beta = beta.unwrap_or_else(|| x.beta0().clone());
            let v = twist_character(&x, &four(&ch.0)?, &beta);
            let (mu, nu, lam) = (mu_slope(&v), nu_slope(&v, &alpha2), lambda_slope(&v, &alpha2, &s));
            let (re, im) = central_charge(&v, &alpha2, &s);
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&json!({
                    "v": vector_json(&v),
                    "mu": mu.to_string(),
                    "nu": nu.to_string(),
                    "lambda": lam.to_string(),
                    "Z": {"re": rational_to_json(&re), "im": rational_to_json(&im)},
                })),
                _ => format!("v = {v}\nmu = {mu}\nnu = {nu}\nlambda = {lam}\nZ = {re} + i({im})\n"),
            }))
        }
        Command::Region {
            variety,
            beta,
            alpha2,
            s,
            format,
        } => {
            let x = variety.resolve()?;
            if let Some(b) = beta {
                if &b != x.beta0() {
                    return Err(Error::OutsideRegion(format!("the slice is taken at beta_0 = {}, got {b}", x.beta0())));
                }
            }
            let in_u = in_region_u(&x, &alpha2, &s);
            let quiver = if x.is_p3() || x.is_q3() {
                Some(in_quiver_region(&x, &alpha2, &s)?)
            } else {
                None
            };
            let chain = match quiver {
                Some(true) => Some(slope_chain_check(&x, &alpha2, &s)?),
                _ => None,
            };
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&json!({"in_U": in_u, "in_quiver_region": quiver, "slope_chain": chain})),
                _ => {
                    let mut t = format!("in U: {in_u}\n");
                    if let Some(qr) = quiver {
                        t.push_str(&format!("in quiver region: {qr}\n"));
                    }
                    if let Some(c) = chain {
                        t.push_str(&format!("slope chain holds: {c}\n"));
                    }
                    t
                }
            }))
        }
        Command::Walls {
            inst,
            format,
            alpha_max,
            s_max,
        } => {
            let x = inst.variety.resolve()?;
            let ws = walls(&x, &inst.r, &inst.d)?;
            Ok(Outcome::ok(match format {
                Format::Csv => ws.to_csv(),
                Format::Svg => {
                    let mut b = SvgBounds::default_for(&ws);
                    if let Some(a) = alpha_max {
                        b.alpha_max = a;
                    }
                    if let Some(s) = s_max {
                        b.s_max = s;
                    }
                    if b.alpha_max <= qi(0) || b.s_max <= qi(0) {
                        return Err(Error::OutsideRegion("plot bounds must be positive".into()));
                    }
                    render_walls_svg(&ws, &b)
                }
                Format::Json | Format::Text => pretty(&ws.to_json()),
            }))
        }
        Command::Chamber {
            inst,
            alpha2,
            s,
            format,
        } => {
            let x = inst.variety.resolve()?;
            let ws = walls(&x, &inst.r, &inst.d)?;
            let (text, value) = location_text(&chamber_of(&ws, &alpha2, &s)?);
            Ok(Outcome::ok(match format {
                Format::Json => pretty(&value),
                _ => format!("{text}\n"),
            }))
        }
        Command::Monad { cmd } => match cmd {
            MonadCmd::Verify { file, format } => {
                let c = load_monad(&file)?;
                let ok = c.verify()?;
                let ch = c.character();
                let perverse = perverse_shape_check(&c).ok();
                Ok(Outcome::check(
                    match format {
                        Format::Json => pretty(&json!({
                            "complex": ok,
                            "character": ch.a.iter().map(rational_to_json).collect::<Vec<_>>(),
                            "perverse_shape": perverse.as_ref().map(|p| p.to_json()),
                        })),
                        _ => {
                            let mut t = format!("complex: {ok}\ncharacter: {ch}\n");
                            if let Some(p) = perverse {
                                t.push_str(&format!("perverse shape: r={}, c={}, c1 consistent: {}\n", p.r, p.c, p.c1_consistent));
                            }
                            t
                        }
                    },
                    ok,
                ))
            }
            MonadCmd::Table { file, table } => table_outcome(&load_monad(&file)?, &table),
        },
        Command::Adhm { cmd } => match cmd {
            AdhmCmd::Check {
                file,
                samples,
                seed,
                format,
            } => {
                let d = load_adhm(&file)?;
                let eq = check_adhm(&d);
                let stable = git_stable(&d);
                let fiber = if eq {
                    Some(fiberwise_check_data(&d, &random_points(d.n, samples, seed), samples, seed)?)
                } else {
                    None
                };
                let ok = eq && fiber.as_ref().is_some_and(|f| f.pass());
                Ok(Outcome::check(
                    match format {
                        Format::Json => pretty(&json!({
                            "adhm_equation": eq,
                            "git_stable": stable,
                            "fiberwise": fiber.as_ref().map(|f| f.to_json()),
                        })),
                        _ => {
                            let mut t = format!("ADHM equation: {eq}\nGIT stable: {stable}\n");
                            if let Some(f) = &fiber {
                                t.push_str(&format!("fiberwise: {} of {} points fail\n", f.failures.len(), f.checked));
                                if let Some(w) = &f.warning {
                                    t.push_str(&format!("warning: {w}\n"));
                                }
                            }
                            t
                        }
                    },
                    ok,
                ))
            }
            AdhmCmd::Build { file } => Ok(Outcome::ok(pretty(&build_monad(&load_adhm(&file)?)?.to_json()))),
            AdhmCmd::Table { file, table } => table_outcome(&build_monad(&load_adhm(&file)?)?, &table),
            AdhmCmd::Framing { file, format } => {
                let r = framing_check(&build_monad(&load_adhm(&file)?)?)?;
                Ok(Outcome::check(
                    match format {
                        Format::Json => pretty(&r.to_json()),
                        _ => format!(
                            "rank {}, h^0(E|l) = {}, h^0(E|l(-1)) = {}\nframed: {}\n",
                            r.rank,
                            r.h0,
                            r.h0_minus_one,
                            r.framed()
                        ),
                    },
                    r.framed(),
                ))
            }
        },
        Command::Quiver { cmd } => match cmd {
            QuiverCmd::Theta { alpha, gamma, r, c } => {
                let t = theta_vector(&alpha, &gamma, r, c)?;
                Ok(Outcome::ok(format!("({}, {}, {})\n", t[0], t[1], t[2])))
            }
            QuiverCmd::Search {
                file,
                theta,
                budget,
                seed,
                convention,
                format,
            } => {
                let v = read_json(&file)?;
                let rep = if v.get("terms").is_some() {
                    from_monad(&LineBundleComplex::from_json(&v)?)?
                } else {
                    QuiverRep::from_json(&v)?
                };
                let theta: [Rational; 3] = theta
                    .0
                    .try_into()
                    .map_err(|t: Vec<Rational>| Error::Parse(format!("theta needs three entries, got {}", t.len())))?;
                let report = subrep_search(&rep, &theta, budget, seed, convention);
                let found = report.witness.is_some();
                Ok(Outcome::check(
                    match format {
                        Format::Json => pretty(&report.to_json()),
                        _ => {
                            let mut t = format!("convention: {}\nexamined: {}\n{}\n", report.convention, report.examined, report.verdict());
                            if let Some(w) = &report.witness {
                                t.push_str(&format!("witness dims {:?}, theta pairing {}\n", w.dims(), w.theta_value));
                            }
                            t
                        }
                    },
                    !found,
                ))
            }
        },
        Command::Selftest { format } => {
            let results = run_selftest();
            let ok = results.iter().all(|r| r.pass);
            Ok(Outcome::check(
                match format {
                    Format::Json => pretty(&Value::from(results.iter().map(|r| r.to_json()).collect::<Vec<_>>())),
                    _ => results.iter().map(|r| r.line() + "\n").collect(),
                },
                ok,
            ))
        }
    }
}

/// Errors that report a failed mathematical check rather than bad input.
fn is_check_failure(e: &Error) -> bool {
    matches!(e, Error::AdhmEquation | Error::NotFiberwiseExact(_) | Error::Relation(_))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(o) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &o.text),
                None => out.write_all(o.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_check_failure(&e) {
                1
            } else {
                2
            }
        }
    }
}

/// Caps the rayon pool from `INSTANTON_KIT_THREADS`.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

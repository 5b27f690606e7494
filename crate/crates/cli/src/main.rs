//! `nrc`: TOML in, JSON out.
//!
//! Exit status: 0 on success, 1 on a computation error, 2 on an input
//! error, 3 when an example pipeline reports a failed check.

mod json;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use nrc_core::input::{load_any, load_ring, RingSpec, Spec};
use nrc_core::normform::{criterion_crosscheck, solve_norm_eq, CrossVerdict};
use nrc_core::picard::{picard_group, PicardGroup};
use nrc_core::pipeline::{example1_checks, example2_checks, TimedCheck};
use nrc_core::prime::decompose_prime;
use nrc_core::ray::{congruence_subgroup, is_excluded, split_scan, verify_splitting, SplitMode, SplitStatus};
use nrc_core::{Error, Result};

#[derive(Parser)]
#[command(name = "nrc", version, about = "Picard groups, ring class field data and norm equations for number rings")]
struct Cli {
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Search radius (T2 norm) for principal ideal tests.
    #[arg(long, global = true)]
    pip_radius: Option<f64>,
    /// Cap on worker threads.
    #[arg(long, global = true, env = "NRC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RangeArgs {
    /// Scan rational primes below this bound (default from the ring file).
    #[arg(long)]
    range: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants of a number field (field or ring file).
    Field { file: PathBuf },
    /// Decomposition of a rational prime.
    Factor {
        /// The rational prime.
        #[arg(long)]
        ell: BigInt,
        file: PathBuf,
    },
    /// Class group with generators and units.
    Classgroup { file: PathBuf },
    /// T-class group of the ring's set T.
    Tclassgroup { file: PathBuf },
    /// Picard group of the ring.
    Picard { file: PathBuf },
    /// Modulus and congruence subgroup of the ring class field.
    Congruence { file: PathBuf },
    /// Primes splitting completely in the ring class field.
    Split {
        #[command(flatten)]
        range: RangeArgs,
        /// Only ask for one degree-one prime with trivial class.
        #[arg(long)]
        degree_one_exists: bool,
        file: PathBuf,
    },
    /// Compare the split criterion with a claimed class field polynomial.
    VerifySplitting {
        /// Coefficients "c0,c1,...,cn" (default from the ring file).
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
        file: PathBuf,
    },
    /// Norm form equations.
    Normform {
        #[command(subcommand)]
        cmd: NormCmd,
    },
    /// Full run over the first shipped ring.
    Example1 {
        /// Directory holding fields/ and rings/.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Full run over the second shipped ring.
    Example2 {
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveBounds {
    /// Largest exponent m tried (default from the ring file).
    #[arg(long)]
    max_m: Option<u32>,
    /// Coordinate bound of the search box (default from the ring file).
    #[arg(long)]
    radius: Option<i64>,
}

#[derive(Subcommand)]
enum NormCmd {
    /// The expanded norm form over the order basis.
    Show { file: PathBuf },
    /// All solutions of f(x) = +-ell a^m inside the search box.
    Solve {
        /// Rational prime on the right-hand side.
        #[arg(long)]
        ell: BigInt,
        /// Defaults to the ring's a.
        #[arg(long)]
        a: Option<BigInt>,
        #[command(flatten)]
        bounds: SolveBounds,
        file: PathBuf,
    },
    /// Split criterion against bounded solver success for each prime.
    Check {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bounds: SolveBounds,
        file: PathBuf,
    },
}

enum Outcome {
    Report(Value),
    Checks(Vec<TimedCheck>),
}

fn ring_file(path: &Path) -> Result<RingSpec> {
    load_ring(path)
}

fn pic_with_reps(spec: &RingSpec, pip: Option<f64>) -> Result<(nrc_core::classgroup::ClassGroupData, PicardGroup)> {
    let k = spec.k();
    let cl = spec.classgroup(pip)?;
    let pic = picard_group(k, &spec.ring, &cl)?.with_representatives(k, &cl, &[])?;
    Ok((cl, pic))
}

fn parse_poly(s: &str) -> Result<Vec<BigInt>> {
    s.split(',').map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Input(format!("bad coefficient {t:?} in --poly")))).collect()
}

fn data_dir(given: Option<PathBuf>) -> PathBuf {
    if let Some(d) = given {
        return d;
    }
    if Path::new("rings/example1.toml").exists() {
        return PathBuf::from(".");
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn status_label(s: SplitStatus) -> &'static str {
    match s {
        SplitStatus::Split => "split",
        SplitStatus::NotSplit => "not split",
        SplitStatus::Excluded => "excluded",
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let pip = cli.pip_radius;
    let out = match &cli.cmd {
        Cmd::Field { file } => {
            let spec = load_any(file)?;
            let f = spec.field();
            let k = &f.field;
            let (r1, r2) = k.signature();
            json!({
                "name": f.name,
                "degree": k.degree(),
                "poly": json::ints(k.poly()),
                "basis": k.basis_power_coords().iter().map(|b| b.iter().map(|q| q.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "disc": json::int(k.disc()),
                "index": json::int(k.index()),
                "signature": [r1, r2],
                "unit_rank": k.unit_rank(),
                "totally_imaginary": k.is_totally_imaginary(),
                "irreducible_mod": k.irreducibility_witness(),
                "minkowski_bound": k.minkowski_bound(),
                "supplied_primes": k.supplied_all().keys().map(json::int).collect::<Vec<_>>(),
            })
        }
        Cmd::Factor { ell, file } => {
            let spec = load_any(file)?;
            let k = &spec.field().field;
            if !nrc_core::arith::is_prime(ell) {
                return Err(Error::Input(format!("{ell} is not prime")));
            }
            let primes = decompose_prime(k, ell)?;
            json!({ "ell": json::int(ell), "primes": primes.iter().map(json::prime).collect::<Vec<_>>() })
        }
        Cmd::Classgroup { file } => {
            let (k, cl) = match load_any(file)? {
                Spec::Ring(r) => {
                    let cl = r.classgroup(pip)?;
                    (r.field.field.clone(), cl)
                }
                Spec::Field(f) => {
                    let cl = nrc_core::classgroup::classgroup(&f.field, None, vec![], pip.unwrap_or(nrc_core::classgroup::DEFAULT_PIP_RADIUS))?;
                    (f.field, cl)
                }
            };
            json!({
                "invariants": json::ints(cl.group().invariants()),
                "order": json::int(&cl.order()),
                "generators": cl.gens().iter().map(|g| json::ideal(&k, g)).collect::<Vec<_>>(),
                "witnesses": cl.witnesses().iter().map(json::elem).collect::<Vec<_>>(),
                "units": cl.units().generators().iter().map(json::elem).collect::<Vec<_>>(),
                "exact": cl.is_exact(),
            })
        }
        Cmd::Tclassgroup { file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let (_, pic) = pic_with_reps(&spec, pip)?;
            let tc = pic.tclass();
            json!({
                "t": tc.t().iter().map(json::prime).collect::<Vec<_>>(),
                "invariants": json::ints(tc.group().invariants()),
                "generators": tc.gens().iter().map(|g| json::ideal(k, g)).collect::<Vec<_>>(),
                "t_units": pic.t_units().iter().map(json::elem).collect::<Vec<_>>(),
            })
        }
        Cmd::Picard { file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let (_, pic) = pic_with_reps(&spec, pip)?;
            let gens: Vec<Value> = pic.generator_ideals().iter().map(|g| g.as_ref().map_or(Value::Null, |g| json::ideal(k, g))).collect();
            json!({
                "invariants": json::ints(pic.group().invariants()),
                "order": json::int(&pic.order()),
                "generators": gens,
                "modulus": json::ideal(k, &spec.ring.modulus(k)),
                "conductor": json::ideal(k, spec.ring.order().conductor()),
                "order_index": json::int(spec.ring.order().index()),
                "t": spec.ring.t().iter().map(json::prime).collect::<Vec<_>>(),
            })
        }
        Cmd::Congruence { file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let (cl, pic) = pic_with_reps(&spec, pip)?;
            let cs = congruence_subgroup(k, &pic, &cl)?;
            json!({
                "modulus": json::ideal(k, cs.ray.modulus().finite()),
                "infinite": cs.ray.modulus().infinite(),
                "ray_invariants": json::ints(cs.ray.group().invariants()),
                "ray_order": json::int(&cs.ray.order()),
                "ray_generators": cs.ray.lifts().iter().map(|g| json::ideal(k, g)).collect::<Vec<_>>(),
                "M_R": json::matrix_rows(&cs.m_r),
                "index": json::int(&cs.index),
            })
        }
        Cmd::Split { range, degree_one_exists, file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let (cl, pic) = pic_with_reps(&spec, pip)?;
            let bound = range.range.unwrap_or(spec.solver.range);
            let mode = if *degree_one_exists { SplitMode::DegreeOneExists } else { SplitMode::Complete };
            let scan = split_scan(k, &pic, &cl, bound, mode)?;
            json!({
                "range": bound,
                "mode": if *degree_one_exists { "degree-one-exists" } else { "complete" },
                "split": scan.iter().filter(|(_, s)| *s == SplitStatus::Split).map(|(l, _)| *l).collect::<Vec<_>>(),
                "rows": scan.iter().map(|(l, s)| json!({ "ell": l, "status": status_label(*s) })).collect::<Vec<_>>(),
            })
        }
        Cmd::VerifySplitting { poly, range, file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let g = match (poly, &spec.class_field_poly) {
                (Some(p), _) => parse_poly(p)?,
                (None, Some(p)) => p.clone(),
                (None, None) => return Err(Error::Input("no --poly given and the ring file has no [class_field] block".into())),
            };
            let (cl, pic) = pic_with_reps(&spec, pip)?;
            let bound = range.range.unwrap_or(spec.solver.range);
            let rows = verify_splitting(k, &pic, &cl, &g, bound)?;
            let agree = rows.iter().all(|r| r.status != nrc_core::ray::RowStatus::Disagree);
            json!({
                "poly": json::ints(&g),
                "range": bound,
                "agree": agree,
                "rows": rows.iter().map(|r| json!({ "ell": r.ell, "criterion": r.criterion, "poly_splits": r.poly, "status": r.status.label() })).collect::<Vec<_>>(),
            })
        }
        Cmd::Normform { cmd } => normform(cmd, pip)?,
        Cmd::Example1 { data } => return Ok(Outcome::Checks(example1_checks(&load_ring(&data_dir(data.clone()).join("rings/example1.toml"))?)?)),
        Cmd::Example2 { data } => return Ok(Outcome::Checks(example2_checks(&load_ring(&data_dir(data.clone()).join("rings/example2.toml"))?)?)),
    };
    Ok(Outcome::Report(out))
}

fn solution_json(ell: &BigInt, s: &nrc_core::normform::NormSolution) -> Value {
    json!({ "ell": json::int(ell), "m": s.m, "sign": s.sign, "tuple": json::ints(&s.tuple), "value": json::int(&s.value) })
}

fn normform(cmd: &NormCmd, pip: Option<f64>) -> Result<Value> {
    Ok(match cmd {
        NormCmd::Show { file } => {
            let spec = ring_file(file)?;
            let nf = spec.norm_form()?;
            json!({
                "form": nf.display(),
                "basis": nf.basis().iter().map(json::elem).collect::<Vec<_>>(),
                "coefficients": nf.coefficients().iter().map(|(e, c)| json!({ "exponents": e, "coeff": json::int(c) })).collect::<Vec<_>>(),
            })
        }
        NormCmd::Solve { ell, a, bounds, file } => {
            let spec = ring_file(file)?;
            let nf = spec.norm_form()?;
            let a = a.clone().unwrap_or_else(|| spec.a.clone());
            let max_m = bounds.max_m.unwrap_or(spec.solver.max_m);
            let radius = bounds.radius.unwrap_or(spec.solver.radius);
            let sols = solve_norm_eq(spec.k(), &nf, ell, &a, max_m, radius)?;
            json!({
                "form": nf.display(),
                "a": json::int(&a),
                "max_m": max_m,
                "radius": radius,
                "solutions": sols.iter().map(|s| solution_json(ell, s)).collect::<Vec<_>>(),
            })
        }
        NormCmd::Check { range, bounds, file } => {
            let spec = ring_file(file)?;
            let k = spec.k();
            let nf = spec.norm_form()?;
            let (cl, pic) = pic_with_reps(&spec, pip)?;
            let bound = range.range.unwrap_or(spec.solver.range);
            let max_m = bounds.max_m.unwrap_or(spec.solver.max_m);
            let radius = bounds.radius.unwrap_or(spec.solver.radius);
            let mut rows = Vec::new();
            for ell in nrc_core::arith::primes_up_to(bound) {
                let l = BigInt::from(ell);
                if is_excluded(k, &pic, &l) || (&spec.a % &l) == BigInt::from(0) {
                    rows.push(json!({ "ell": ell, "criterion": Value::Null, "hit": Value::Null, "verdict": "excluded" }));
                    continue;
                }
                let c = criterion_crosscheck(k, &pic, &cl, &nf, &l, &spec.a, max_m, radius)?;
                let verdict = match c.verdict {
                    CrossVerdict::Agree => "agree",
                    CrossVerdict::AgreeNone => "agree (no solution)",
                    CrossVerdict::BoundedMiss => "miss at bound",
                    CrossVerdict::Fail => "FAIL",
                };
                rows.push(json!({
                    "ell": ell,
                    "criterion": c.criterion,
                    "hit": c.hit.as_ref().map(|s| solution_json(&l, s)),
                    "verdict": verdict,
                }));
            }
            let fail = rows.iter().any(|r| r["verdict"] == "FAIL");
            json!({ "range": bound, "max_m": max_m, "radius": radius, "consistent": !fail, "rows": rows })
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(Outcome::Report(v)) => {
            if cli.pretty {
                print!("{}", render::pretty(&v));
            } else {
                println!("{v}");
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Checks(checks)) => {
            let ok = checks.iter().all(TimedCheck::pass);
            if cli.pretty {
                for c in &checks {
                    println!("{} {}: {}", if c.pass() { "PASS" } else { "FAIL" }, c.check.name, c.timed_detail());
                }
            } else {
                // timings are left out so that reruns give identical output
                let rows: Vec<Value> = checks
                    .iter()
                    .map(|c| json!({ "check": c.check.name, "pass": c.pass(), "detail": c.check.detail, "limit_s": c.limit.as_secs() }))
                    .collect();
                println!("{}", json!({ "pass": ok, "checks": rows }));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

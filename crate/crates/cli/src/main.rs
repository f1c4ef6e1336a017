use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use reflquot::battery::{run_battery, BatteryOptions};
use reflquot::catalog::{DEFAULT_MAX_M, DEFAULT_MAX_ORDER};
use reflquot::quotient::{build_quotient, normal_reflection_subgroups, select_subgroup, NormalSubgroup, QuotientData, SubgroupSpec};
use reflquot::theorems::*;
use reflquot::{Cyclotomic, Error, GroupSpec, ReflectionGroup};

const AFTER_HELP: &str = "\
Groups: G(m,p,r) with p | m, or ST<n> for n in 4, 8, 12, 16, 19, 20, 22, 25, 26, 28.

Subgroups: classes=i,j,... is the normal subgroup generated by the listed reflection
classes; `all` and `trivial` are the obvious ones. Reflection classes are indexed in
canonical order: by class size, then by the smallest rendering of a member. The
`classes` command prints the indices.

Polynomials are printed in canonical form: terms by descending total degree, ties
broken by descending exponents in variable order (q before t, x before y before u),
coefficients as reduced rationals or in the power basis of zeta_n.

Exit status: 0 when every verification passes, 1 when one fails (its witness term is
printed), 2 on bad input. REFLQUOT_THREADS sets the worker count of `battery`.";

#[derive(Parser)]
#[command(name = "reflquot", version, about = "Exact computations with complex reflection groups and their reflection quotients", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, degrees, exponents and reflection counts.
    Info { group: String },
    /// Reflection classes in canonical order.
    Classes { group: String },
    /// Every normal subgroup generated by reflections.
    NormalSubgroups { group: String },
    /// The quotient G/N acting on the fundamental N-invariants.
    Quotient {
        group: String,
        #[arg(long, default_value = "all")]
        subgroup: String,
    },
    /// Check one identity. Without --subgroup, quotient identities run over every
    /// normal reflection subgroup.
    Verify {
        /// shephard-todd, solomon, numerology, main, bigraded, coset, coset-sum,
        /// orlik-solomon, main-twisted, factorizing or classification
        theorem: String,
        group: String,
        #[arg(long)]
        subgroup: Option<String>,
        /// Galois parameter k, a unit modulo the conductor (default 1).
        #[arg(long)]
        sigma: Option<i64>,
        /// Truncation degree for series identities.
        #[arg(long)]
        bound: Option<u32>,
        /// Coset index for coset identities (default: every coset).
        #[arg(long)]
        coset: Option<usize>,
        /// Hyperplane orbit for factorizing (default: every orbit).
        #[arg(long)]
        orbit: Option<usize>,
        /// Write the reports as a JSON array.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record elapsed times in the JSON reports.
        #[arg(long)]
        timings: bool,
    },
    /// Run every acceptance criterion over the catalog.
    Battery {
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_M)]
        max_m: u32,
        /// Write every kept report as a JSON array.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Show and record elapsed times (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(t) = std::env::var("REFLQUOT_THREADS") {
        match t.parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("error: REFLQUOT_THREADS must be a number, got '{t}'");
                return ExitCode::from(2);
            }
        }
    }
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("see `reflquot --help` for usage");
            ExitCode::from(2)
        }
    }
}

fn parse_group(s: &str) -> Result<ReflectionGroup, Failure> {
    let spec: GroupSpec = s.parse()?;
    Ok(ReflectionGroup::build(&spec)?)
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn io_err(e: io::Error) -> Failure {
    Failure::Input(format!("output: {e}"))
}

fn run(cmd: Command, out: &mut impl Write) -> Outcome {
    match cmd {
        Command::Info { group } => info(&parse_group(&group)?, out).map_err(io_err),
        Command::Classes { group } => classes(&parse_group(&group)?, out).map_err(io_err),
        Command::NormalSubgroups { group } => {
            let g = parse_group(&group)?;
            let subs = normal_reflection_subgroups(&g)?;
            writeln!(out, "{}: {} normal reflection subgroups", g.label(), subs.len()).map_err(io_err)?;
            for s in &subs {
                let n = s.group(&g)?;
                writeln!(out, "  {:<16} order {:<6} degrees {:<14} index {}", s.describe(), s.order(), join(&n.degrees()?), g.order() / s.order())
                    .map_err(io_err)?;
            }
            Ok(())
        }
        Command::Quotient { group, subgroup } => {
            let g = parse_group(&group)?;
            let spec: SubgroupSpec = subgroup.parse()?;
            let sub = select_subgroup(&g, &spec)?;
            let qd = build_quotient(&g, &sub)?;
            quotient(&qd, out).map_err(io_err)
        }
        Command::Verify { theorem, group, subgroup, sigma, bound, coset, orbit, json, timings } => {
            let theorem: Theorem = theorem.parse()?;
            let mut reports = verify(theorem, &group, subgroup.as_deref(), sigma, bound, coset, orbit)?;
            for r in &reports {
                print_report(r, out).map_err(io_err)?;
            }
            if let Some(path) = json {
                write_json(&path, &mut reports, timings)?;
            }
            if reports.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Battery { max_order, max_m, json, timings } => {
            let opts = BatteryOptions { max_order, max_m, ..Default::default() };
            let mut result = run_battery(&opts);
            for c in &result.criteria {
                writeln!(out, "{}", c.line(timings)).map_err(io_err)?;
                for f in c.failures.iter().skip(1).take(9) {
                    writeln!(out, "    {f}").map_err(io_err)?;
                }
            }
            let passed = result.criteria.iter().filter(|c| c.pass).count();
            writeln!(
                out,
                "{passed}/{} criteria pass; {} reports kept, {} passing coset series reports counted only",
                result.criteria.len(),
                result.reports.len(),
                result.dropped_coset_reports
            )
            .map_err(io_err)?;
            if let Some(path) = json {
                write_json(&path, &mut result.reports, timings)?;
            }
            if result.pass() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

/// Without timings the file is reproducible byte for byte.
fn write_json(path: &PathBuf, reports: &mut [VerificationReport], timings: bool) -> Outcome {
    if !timings {
        reports.par_iter_mut().for_each(|r| r.millis = 0);
    }
    let s = serde_json::to_string_pretty(reports).map_err(|e| Failure::Input(e.to_string()))?;
    fs::write(path, s + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn info(g: &ReflectionGroup, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "group {}", g.label())?;
    writeln!(out, "rank {}", g.rank())?;
    writeln!(out, "order {}", g.order())?;
    writeln!(out, "conductor {}", g.conductor())?;
    match g.degrees() {
        Ok(d) => {
            writeln!(out, "degrees {}", join(&d))?;
            writeln!(out, "exponents {}", join(&d.iter().map(|x| x - 1).collect::<Vec<_>>()))?;
        }
        Err(e) => writeln!(out, "degrees unavailable: {e}")?,
    }
    writeln!(out, "reflections {} in {} classes", g.reflections().len(), g.reflection_classes().len())?;
    writeln!(out, "hyperplanes {} in {} orbits", g.hyperplanes().len(), g.hyperplane_orbits().len())?;
    writeln!(out, "conjugacy classes {}", g.classes().len())
}

fn classes(g: &ReflectionGroup, out: &mut impl Write) -> io::Result<()> {
    let n = g.conductor();
    writeln!(out, "{}: {} reflection classes", g.label(), g.reflection_classes().len())?;
    writeln!(out, "  {:<6} {:<6} {:<6} {:<18} orbit", "index", "size", "order", "eigenvalue")?;
    for (i, c) in g.reflection_classes().iter().enumerate() {
        let s = c[0];
        let k = g.spectrum(s).iter().find(|(k, _)| *k != 0).map(|(k, _)| *k).unwrap_or(0);
        let orbit = g
            .hyperplane_of(s)
            .and_then(|h| g.hyperplane_orbits().iter().position(|o| o.contains(&h)))
            .map(|o| o.to_string())
            .unwrap_or_else(|| "-".into());
        let ev = Cyclotomic::root_of_unity(n, k as i64).to_string();
        writeln!(out, "  {:<6} {:<6} {:<6} {:<18} {}", i, c.len(), g.element_order(s), ev, orbit)?;
    }
    Ok(())
}

fn quotient(qd: &QuotientData, out: &mut impl Write) -> io::Result<()> {
    let ex = &qd.exponents;
    writeln!(out, "group {} order {}", qd.g.label(), qd.g.order())?;
    writeln!(out, "subgroup {} order {}", qd.subgroup.describe(), qd.subgroup.order())?;
    writeln!(out, "quotient order {}", qd.cosets())?;
    writeln!(out, "degrees of G {}", join(&ex.d_g))?;
    writeln!(out, "degrees of N {}", join(&ex.d_n))?;
    writeln!(out, "degrees of H {}", join(&ex.d_h))?;
    writeln!(out, "exponents of G on V {}", join(&ex.e_g_v))?;
    writeln!(out, "exponents of N on V {}", join(&ex.e_n_v))?;
    writeln!(out, "exponents of G on E {}", join(&ex.e_g_e))?;
    writeln!(out, "exponents of H on E {}", join(&ex.e_h_e))?;
    let pairs: Vec<String> = ex.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    writeln!(out, "pairs (e^G(E), e^N(V)) {}", pairs.join(" "))?;
    writeln!(out, "fundamental invariants of N:")?;
    for (d, f) in qd.e_star.degrees().into_iter().zip(qd.e_star.render()) {
        writeln!(out, "  [{d}] {f}")?;
    }
    Ok(())
}

fn print_report(r: &VerificationReport, out: &mut impl Write) -> io::Result<()> {
    let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "{} {}", r.theorem, p.join(" "))?;
    writeln!(out, "  lhs: {}", r.lhs)?;
    writeln!(out, "  rhs: {}", r.rhs)?;
    for (k, v) in &r.details {
        writeln!(out, "  {k}: {v}")?;
    }
    if let Some(w) = &r.witness {
        writeln!(out, "  witness: {w}")?;
    }
    writeln!(out, "  {}", if r.pass { "PASS" } else { "FAIL" })
}

fn subgroups(g: &ReflectionGroup, spec: Option<&str>) -> Result<Vec<NormalSubgroup>, Failure> {
    match spec {
        Some(s) => Ok(vec![select_subgroup(g, &s.parse::<SubgroupSpec>()?)?]),
        None => Ok(normal_reflection_subgroups(g)?),
    }
}

fn verify(
    theorem: Theorem,
    group: &str,
    subgroup: Option<&str>,
    sigma: Option<i64>,
    bound: Option<u32>,
    coset: Option<usize>,
    orbit: Option<usize>,
) -> Result<Vec<VerificationReport>, Failure> {
    if theorem == Theorem::Classification {
        let spec: GroupSpec = group.parse()?;
        let GroupSpec::Imprimitive { m, p, r } = spec else {
            return Err(Failure::Input("classification needs a group G(ab,b,r)".into()));
        };
        return Ok(vec![verify_classification(m / p, p, r)?]);
    }
    let g = parse_group(group)?;
    let k = sigma.unwrap_or(1);
    let mut reports = Vec::new();
    match theorem {
        Theorem::ShephardTodd => reports.push(verify_shephard_todd(&g)?),
        Theorem::Solomon => reports.push(verify_solomon(&g, bound)?),
        Theorem::OrlikSolomon => reports.push(verify_orlik_solomon(&g, k)?),
        Theorem::Factorizing => {
            let orbits: Vec<usize> = match orbit {
                Some(o) => vec![o],
                None => (0..g.hyperplane_orbits().len()).collect(),
            };
            for o in orbits {
                if o >= g.hyperplane_orbits().len() {
                    return Err(Failure::Input(format!("orbit {o} out of range ({} orbits)", g.hyperplane_orbits().len())));
                }
                reports.push(verify_factorizing(&g, o)?);
            }
        }
        _ => {
            for sub in subgroups(&g, subgroup)? {
                let qd = build_quotient(&g, &sub)?;
                let cosets: Vec<usize> = match coset {
                    Some(c) => vec![c],
                    None => (0..qd.cosets()).collect(),
                };
                match theorem {
                    Theorem::Main => reports.push(verify_main(&qd)?),
                    Theorem::Numerology => reports.push(verify_numerology(&qd)?),
                    Theorem::Bigraded => reports.push(verify_bigraded_series(&qd, bound)?),
                    Theorem::MainTwisted => reports.push(verify_main_twisted(&qd, k)?),
                    Theorem::Coset => {
                        for c in cosets {
                            reports.push(verify_coset(&qd, c, bound)?);
                        }
                    }
                    Theorem::CosetSum => {
                        for c in cosets {
                            reports.push(verify_coset_sum(&qd, c)?);
                        }
                    }
                    _ => unreachable!("group-level theorems handled above"),
                }
            }
        }
    }
    Ok(reports)
}

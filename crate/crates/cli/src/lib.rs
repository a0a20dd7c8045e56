//! The `secant` command line: argument parsing and the subcommands, usable
//! in-process through [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use secant_core::charwalk::{level_stats, range_law, LawOutcome};
use secant_core::construct::parse_residue;
use secant_core::legit::{verify_coloring, verify_legitimate, Verdict};
use secant_core::spectrum::plane_size;
use secant_core::sweep::to_csv_string;
use secant_core::{
    bounds_report, compute_spectrum, cor_ceiling, curve_count, ec_spectrum_scan, exhaustive_minmax,
    generate_linear_hypergraph, local_search, projection_profile, psi_walk, run_sweep,
    two_phase_coloring, verify_counting_identities, verify_projection_laws, Color,
    ConstructionSpec, Error, Field, GeneratorMode, LinearHypergraph, LocalSearchConfig,
    ParabolaParams, ProjectivePlane, SearchResult, SetFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// Full law verification builds the plane and its spectrum; above this order
/// only the profile and the range law are reported.
const FULL_LAW_LIMIT: u32 = 401;

#[derive(Debug, Parser)]
#[command(
    name = "secant",
    version,
    about = "Secant-size spectra of point sets in finite projective planes"
)]
pub struct Cli {
    /// Base seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plane summary, or a dump of all points or lines.
    Plane {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        dump: Option<Dump>,
    },
    /// Secant spectrum of a constructed or stored point set.
    Spectrum(SpectrumArgs),
    /// One spectrum row per (order, seed).
    Sweep {
        /// Comma-separated plane orders.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value = "random:density=1/2")]
        construction: ConstructionSpec,
        /// `A..B` or a comma list; defaults to the global seed.
        #[arg(long)]
        seeds: Option<String>,
    },
    /// Exact min-max mode frequency over all subsets (q <= 4).
    Exhaustive {
        #[arg(long)]
        q: u64,
    },
    /// Randomized upper bound on the min-max mode frequency.
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 20_000)]
        iters: u64,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
    },
    /// Partial sums of the Legendre symbol starting at `a`.
    Charwalk {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        /// Level occupancy instead of the walk.
        #[arg(long)]
        levels: bool,
    },
    /// Projection profile of a parabola region and its laws.
    Projection {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value = "0")]
        gamma: String,
        /// Slope of the profile to print.
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Also write the law report as JSON to this file (CSV mode).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Elliptic-curve point counts and the curve-region scan.
    Ec {
        #[command(subcommand)]
        command: EcCommand,
    },
    /// Linear hypergraphs and legitimate 2-colorings.
    Legit {
        #[command(subcommand)]
        command: LegitCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dump {
    Points,
    Lines,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    q: u64,
    #[arg(
        long,
        conflicts_with = "construction",
        required_unless_present = "construction"
    )]
    set_file: Option<PathBuf>,
    #[arg(long)]
    construction: Option<ConstructionSpec>,
    /// Save the point set as JSON.
    #[arg(long)]
    save_set: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EcCommand {
    /// Points on Y^2 = X^3 + aX + b over F_p.
    Count {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Spectrum of the curve region and the per-line curve relation.
    Scan {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum LegitCommand {
    /// Random n-uniform linear hypergraph with n edges.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "pairwise")]
        mode: GeneratorMode,
    },
    /// Two-phase legitimate coloring.
    Color {
        #[arg(long = "in")]
        input: PathBuf,
        /// Shuffle the edge order with this seed first.
        #[arg(long)]
        permute: Option<u64>,
    },
    /// Check a coloring for distinct multiplicity lists.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        permute: Option<u64>,
    },
}

/// What a command produced and whether its checks held.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub checks_passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            checks_passed: true,
        }
    }

    fn checked(text: String, passed: bool) -> Self {
        Output {
            text,
            checks_passed: passed,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> CliResult<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Core(Error::Input(format!("{}: {e}", path.display()))))
}

fn parse_seeds(s: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Usage(format!("bad seed list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

/// Parses arguments and runs; returns the process exit code. Output goes to
/// `--out` or stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = write_output(&cli, &out.text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if out.checks_passed {
                EXIT_OK
            } else {
                eprintln!("check failed");
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_output(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Plane { q, dump } => cmd_plane(
            *q,
            *dump,
            fmt(if dump.is_some() {
                Format::Csv
            } else {
                Format::Json
            }),
        ),
        Command::Spectrum(args) => cmd_spectrum(args, cli.seed, fmt(Format::Json)),
        Command::Sweep {
            primes,
            construction,
            seeds,
        } => {
            let seeds = match seeds {
                Some(s) => parse_seeds(s)?,
                None => vec![cli.seed],
            };
            let rows = run_sweep(primes, construction, &seeds);
            let identities_ok = rows
                .iter()
                .filter(|r| r.error.is_none())
                .all(|r| r.checks_passed());
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "q={} seed={}: {}",
                    r.q,
                    r.seed,
                    r.error.as_deref().unwrap_or("")
                );
            }
            let text = match fmt(Format::Csv) {
                Format::Csv => to_csv_string(&rows),
                Format::Json => to_json(&json!({
                    "schema": secant_core::sweep::SWEEP_SCHEMA,
                    "random_generator": secant_core::construct::RANDOM_SET_GENERATOR,
                    "rows": rows,
                })),
            };
            if identities_ok && rows.iter().any(|r| r.error.is_some()) {
                // rows are still emitted; the run as a whole counts as a usage error
                write_output(cli, &text)?;
                return Err(CliError::Usage("some rows could not be computed".into()));
            }
            Ok(Output::checked(text, identities_ok))
        }
        Command::Exhaustive { q } => {
            let plane = ProjectivePlane::of_order(*q)?;
            let r = exhaustive_minmax(&plane)?;
            Ok(search_output(&r, fmt(Format::Json)))
        }
        Command::Search { q, iters, restarts } => {
            let plane = ProjectivePlane::of_order(*q)?;
            let cfg = LocalSearchConfig {
                iters: *iters,
                restarts: *restarts,
                seed: cli.seed,
            };
            Ok(search_output(
                &local_search(&plane, &cfg),
                fmt(Format::Json),
            ))
        }
        Command::Charwalk { p, a, levels } => cmd_charwalk(*p, *a, *levels, fmt(Format::Csv)),
        Command::Projection {
            p,
            alpha,
            beta,
            gamma,
            d,
            report,
        } => cmd_projection(
            *p,
            [alpha, beta, gamma],
            *d,
            report.as_ref(),
            fmt(Format::Csv),
        ),
        Command::Ec { command } => match command {
            EcCommand::Count { p, a, b } => {
                let c = curve_count(*p, *a, *b)?;
                let text = match fmt(Format::Json) {
                    Format::Json => to_json(&c),
                    Format::Csv => format!(
                        "p,a,b,count,trace\n{},{},{},{},{}\n",
                        c.p, c.a, c.b, c.count, c.trace
                    ),
                };
                Ok(Output::checked(text, c.satisfies_hasse()))
            }
            EcCommand::Scan { p } => {
                let plane = ProjectivePlane::of_order(*p as u64)?;
                let r = ec_spectrum_scan(&plane)?;
                let passed =
                    r.relation_violations == 0 && r.identities.all_ok() && r.lower_bound_ok;
                let text = match fmt(Format::Json) {
                    Format::Json => to_json(&r),
                    Format::Csv => {
                        let mut s = String::from("k,count\n");
                        for (k, c) in r.histogram.iter().enumerate() {
                            let _ = writeln!(s, "{k},{c}");
                        }
                        s
                    }
                };
                Ok(Output::checked(text, passed))
            }
        },
        Command::Legit { command } => cmd_legit(command, cli.seed, fmt(Format::Json)),
    }
}

fn cmd_plane(q: u64, dump: Option<Dump>, format: Format) -> CliResult<Output> {
    let plane = ProjectivePlane::of_order(q)?;
    let f = plane.field();
    let Some(dump) = dump else {
        let summary = json!({
            "q": q,
            "N": plane.num_points(),
            "points_per_line": plane.order() + 1,
            "characteristic": f.characteristic(),
            "degree": f.degree(),
            "modulus": f.modulus(),
        });
        let text = match format {
            Format::Json => to_json(&summary),
            Format::Csv => format!(
                "q,N,points_per_line,characteristic,degree\n{q},{},{},{},{}\n",
                plane.num_points(),
                plane.order() + 1,
                f.characteristic(),
                f.degree()
            ),
        };
        return Ok(Output::ok(text));
    };
    let triples: Vec<[u32; 3]> = (0..plane.num_points())
        .map(|i| match dump {
            Dump::Points => plane.point(i),
            Dump::Lines => plane.line(i),
        })
        .collect();
    let text = match format {
        Format::Csv => {
            let mut s = String::from("idx,x,y,z\n");
            for (i, [x, y, z]) in triples.iter().enumerate() {
                let _ = writeln!(s, "{i},{x},{y},{z}");
            }
            s
        }
        Format::Json => to_json(
            &triples
                .iter()
                .enumerate()
                .map(|(i, t)| json!({"idx": i, "x": t[0], "y": t[1], "z": t[2]}))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Output::ok(text))
}

fn cmd_spectrum(args: &SpectrumArgs, seed: u64, format: Format) -> CliResult<Output> {
    let plane = ProjectivePlane::of_order(args.q)?;
    let (set, source) = match (&args.set_file, &args.construction) {
        (Some(path), _) => (
            read_json::<SetFile>(path)?.to_set(&plane)?,
            json!({"set_file": path.display().to_string()}),
        ),
        (None, Some(c)) => {
            let c = match c {
                ConstructionSpec::Random { seed: None, .. } => c.with_seed(seed),
                _ => c.clone(),
            };
            let mut source = json!({"construction": c.to_string()});
            if c.kind() == "random" {
                source["generator"] = json!(secant_core::construct::RANDOM_SET_GENERATOR);
            }
            (c.build(&plane, seed)?, source)
        }
        (None, None) => return Err(CliError::Usage("need --set-file or --construction".into())),
    };
    if let Some(path) = &args.save_set {
        std::fs::write(path, to_json(&SetFile::from_set(&plane, &set)))?;
    }
    let spec = compute_spectrum(&plane, &set);
    let checks = verify_counting_identities(&spec);
    let bounds = bounds_report(args.q, set.len() as u64);
    let passed = checks.all_ok() && spec.satisfies_lower_bound();
    let text = match format {
        Format::Json => to_json(&json!({
            "q": args.q,
            "N": plane_size(args.q),
            "set_size": set.len(),
            "histogram": spec.histogram().iter().enumerate()
                .map(|(k, c)| json!({"k": k, "count": c})).collect::<Vec<_>>(),
            "mode_k": spec.mode_k(),
            "mode_count": spec.mode_count(),
            "checks": {"eq1": checks.eq1, "eq2": checks.eq2, "var": checks.var},
            "bounds": {
                "prop": bounds.prop_bound,
                "cor": bounds.cor_bound,
                "cor_ceiling": cor_ceiling(args.q),
                "thm_lower": bounds.thm_lower,
            },
            "lower_bound_ok": spec.satisfies_lower_bound(),
            "source": source,
        })),
        Format::Csv => {
            let mut s = String::from("k,count\n");
            for (k, c) in spec.histogram().iter().enumerate() {
                let _ = writeln!(s, "{k},{c}");
            }
            s
        }
    };
    Ok(Output::checked(text, passed))
}

fn search_output(r: &SearchResult, format: Format) -> Output {
    let ceiling = cor_ceiling(r.q as u64);
    let witness: Vec<usize> = r.witness.iter().collect();
    let text = match format {
        Format::Json => to_json(&json!({
            "q": r.q,
            "method": r.method.as_str(),
            "best_mode_count": r.best_mode_count,
            "cor_ceiling": ceiling,
            "subsets_examined": r.subsets_examined,
            "witness": witness,
        })),
        Format::Csv => {
            let pts: Vec<String> = witness.iter().map(|p| p.to_string()).collect();
            format!(
                "q,method,best_mode_count,cor_ceiling,subsets_examined,witness\n{},{},{},{},{},{}\n",
                r.q,
                r.method.as_str(),
                r.best_mode_count,
                ceiling,
                r.subsets_examined,
                pts.join(" ")
            )
        }
    };
    Output::checked(text, r.best_mode_count >= ceiling)
}

fn cmd_charwalk(p: u32, a: u32, levels: bool, format: Format) -> CliResult<Output> {
    let walk = psi_walk(p, a)?;
    let text = if levels {
        let stats = level_stats(&walk);
        match format {
            Format::Json => to_json(&stats),
            Format::Csv => {
                let mut s = String::from("level,count\n");
                for c in &stats.counts {
                    let _ = writeln!(s, "{},{}", c.level, c.count);
                }
                s
            }
        }
    } else {
        match format {
            Format::Json => to_json(&walk),
            Format::Csv => {
                let mut s = String::from("t,psi\n");
                for (t, v) in walk.values.iter().enumerate() {
                    let _ = writeln!(s, "{t},{v}");
                }
                s
            }
        }
    };
    Ok(Output::ok(text))
}

fn cmd_projection(
    p: u32,
    coeffs: [&String; 3],
    d: u32,
    report: Option<&PathBuf>,
    format: Format,
) -> CliResult<Output> {
    let field = Field::new(p as u64)?;
    if !field.is_prime_field() {
        return Err(CliError::Usage(format!("{p} is not prime")));
    }
    let params = ParabolaParams::new(
        &field,
        parse_residue(&field, coeffs[0])?,
        parse_residue(&field, coeffs[1])?,
        parse_residue(&field, coeffs[2])?,
    )?;
    let profile = projection_profile(&field, &params, d)?;
    let (laws, passed) = if p <= FULL_LAW_LIMIT {
        let plane = ProjectivePlane::new(field);
        let r = verify_projection_laws(&plane, &params)?;
        let passed = r.all_passed();
        (serde_json::to_value(&r).expect("serializable"), passed)
    } else {
        let pr1 = projection_profile(&field, &params, 1)?;
        let l5: LawOutcome = range_law(&pr1);
        let passed = l5.passed;
        (
            json!({"p": p, "params": params, "l5_range": l5, "range": pr1.range(), "full": false}),
            passed,
        )
    };
    let text = match format {
        Format::Csv => {
            if let Some(path) = report {
                std::fs::write(path, to_json(&laws))?;
            }
            let mut s = String::from("b,pr\n");
            for (b, v) in profile.pr.iter().enumerate() {
                let _ = writeln!(s, "{b},{v}");
            }
            s
        }
        Format::Json => to_json(&json!({"d": d, "pr": profile.pr, "laws": laws})),
    };
    Ok(Output::checked(text, passed))
}

#[derive(Deserialize)]
struct ColoringFile {
    colors: Vec<Option<Color>>,
}

fn load_hypergraph(path: &PathBuf, permute: Option<u64>) -> CliResult<LinearHypergraph> {
    let raw: LinearHypergraph = read_json(path)?;
    let h = LinearHypergraph::new(raw.n, raw.num_vertices, raw.edges)?;
    Ok(match permute {
        Some(s) => h.permuted(s),
        None => h,
    })
}

fn verdict_output(v: &Verdict, format: Format) -> Output {
    let text = match format {
        Format::Json => to_json(v),
        Format::Csv => {
            let pair = v
                .violating_pair
                .map(|(i, j)| format!("{i} {j}"))
                .unwrap_or_default();
            format!("legitimate,violating_pair\n{},{pair}\n", v.legitimate)
        }
    };
    Output::checked(text, v.legitimate)
}

fn cmd_legit(cmd: &LegitCommand, seed: u64, format: Format) -> CliResult<Output> {
    match cmd {
        LegitCommand::Gen { n, mode } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            Ok(Output::ok(to_json(&generate_linear_hypergraph(
                *n, seed, *mode,
            ))))
        }
        LegitCommand::Color { input, permute } => {
            let h = load_hypergraph(input, *permute)?;
            match two_phase_coloring(&h) {
                Ok(c) => {
                    let passed = verify_coloring(&h, &c)?.legitimate
                        && c.diagnostics.iter().all(|d| d.feasible());
                    let text = match format {
                        Format::Json => to_json(&c),
                        Format::Csv => {
                            let mut s = String::from(
                                "edge,phase1_blue,target,private,captured,disjoint,recolored\n",
                            );
                            for d in &c.diagnostics {
                                let _ = writeln!(
                                    s,
                                    "{},{},{},{},{},{},{}",
                                    d.edge,
                                    d.phase1_blue,
                                    d.target,
                                    d.private,
                                    d.captured,
                                    d.disjoint,
                                    d.recolored
                                );
                            }
                            s
                        }
                    };
                    Ok(Output::checked(text, passed))
                }
                Err(e @ (Error::PhaseOneBound { .. } | Error::PhaseTwoInfeasible { .. })) => Ok(
                    Output::checked(to_json(&json!({"error": e.to_string()})), false),
                ),
                Err(e) => Err(e.into()),
            }
        }
        LegitCommand::Verify {
            input,
            coloring,
            permute,
        } => {
            let h = load_hypergraph(input, *permute)?;
            let colors: ColoringFile = read_json(coloring)?;
            Ok(verdict_output(
                &verify_legitimate(&h, &colors.colors)?,
                format,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> Output {
        let cli =
            Cli::try_parse_from(std::iter::once("secant").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("2..5").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_seeds("7, 1").unwrap(), vec![7, 1]);
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn plane_dump() {
        let out = capture(&["plane", "--q", "2", "--dump", "points"]);
        let lines: Vec<_> = out.text.lines().collect();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[0], "idx,x,y,z");
        assert_eq!(lines[1], "0,0,0,1");
        assert_eq!(lines[7], "6,1,1,1");
    }

    #[test]
    fn spectrum_json_fields() {
        let out = capture(&[
            "spectrum",
            "--q",
            "5",
            "--construction",
            "parabola:a=1,b=0,g=0",
        ]);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["set_size"], 10);
        assert_eq!(v["N"], 31);
        assert_eq!(v["checks"]["var"], 0);
        assert!(out.checks_passed);
    }

    #[test]
    fn exhaustive_usage_error() {
        let cli = Cli::try_parse_from(["secant", "exhaustive", "--q", "5"]).unwrap();
        assert!(matches!(
            execute(&cli),
            Err(CliError::Core(Error::ExhaustiveLimit(5)))
        ));
        assert_eq!(run(["secant", "exhaustive", "--q", "5"]), EXIT_USAGE);
        assert_eq!(run(["secant", "bogus"]), EXIT_USAGE);
    }

    #[test]
    fn failed_verification_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let h = dir.path().join("h.json");
        let c = dir.path().join("c.json");
        std::fs::write(&h, r#"{"n":2,"num_vertices":4,"edges":[[0,1],[2,3]]}"#).unwrap();
        std::fs::write(&c, r#"{"colors":["blue","blue","blue","blue"]}"#).unwrap();
        let out = dir.path().join("v.json");
        let code = run([
            "secant",
            "legit",
            "verify",
            "--in",
            h.to_str().unwrap(),
            "--coloring",
            c.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_CHECK_FAILED);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        assert_eq!(v["violating_pair"], serde_json::json!([1, 2]));
    }

    #[test]
    fn projection_profile_csv() {
        let out = capture(&[
            "projection",
            "--p",
            "5",
            "--alpha",
            "1/4",
            "--beta",
            "1",
            "--gamma",
            "1",
        ]);
        assert!(out.checks_passed);
        assert!(out.text.starts_with("b,pr\n"));
        assert_eq!(out.text.lines().count(), 6);
    }
}

//! Command-line front end: exact shell counts, averaged shelling tables,
//! covariograms, patch generation, theta coefficients, and the built-in
//! verification suites. Outputs are CSV, JSON (with a schema_version
//! field), or a human-readable pretty form; exact values are emitted in
//! their canonical text encoding alongside float approximations.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use shellkit::averaged::{averaged_shelling, table_to_csv, table_to_json, shelling_table, ShellRecord};
use shellkit::covariogram::{
    ball_covariogram, interval_covariogram, octagon_covariogram, octagon_covariogram_f64,
    reduce_to_sector,
};
use shellkit::cyclotomic::ExactPoint2;
use shellkit::enumerate::lattice_theta;
use shellkit::modelset::{generate_patch, patch_to_csv, patch_to_json, System};
use shellkit::verify::{
    all_passed, suite_all, suite_central, suite_central_invariance, suite_covariogram,
    suite_empirical, suite_table1, CheckResult,
};
use shellkit::{central_count, character_sum, enumerate_shell, parse_quadrat, Basis, QuadInt};

const DEFAULT_SEED: u64 = 17;
const CENTRAL_BOUND: f64 = 30.0;

#[derive(Parser)]
#[command(name = "shellkit", version, about = "Exact shelling and covariogram toolkit for planar quasiperiodic point sets")]
struct Cli {
    /// Output format for emitted data.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    output_format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for all randomised checks (Monte Carlo, property sampling).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; SHELLKIT_THREADS is the fallback, default all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Copy, Clone, ValueEnum)]
enum SystemArg {
    /// Octagonal vertex set (n = 8, regular octagon window).
    Ab,
    /// Fibonacci chain (golden ratio, half-open interval window).
    Fibonacci,
    /// Cyclotomic module with a circular window.
    Disk,
}

#[derive(Copy, Clone, ValueEnum)]
enum Shape {
    Interval,
    Ball,
    Octagon,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    Table1,
    Central,
    Covariogram,
    Empirical,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Number of module points at an exact squared distance from the origin.
    Central {
        /// Symmetry: 5, 8 or 12.
        #[arg(long)]
        n: u32,
        /// Exact squared distance, e.g. 3+0*rt2.
        #[arg(long)]
        rsq: String,
    },
    /// List the points at an exact squared distance from the origin.
    Shell {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rsq: String,
    },
    /// Averaged shell counts: one record or a table up to a radius bound.
    #[command(group(ArgGroup::new("query").required(true)))]
    Average {
        #[arg(long, value_enum)]
        system: SystemArg,
        /// Symmetry of the disk-window system.
        #[arg(long, default_value_t = 8)]
        disk_n: u32,
        /// Window radius of the disk-window system.
        #[arg(long, default_value_t = 1.0)]
        disk_radius: f64,
        /// Exact squared distance (single record).
        #[arg(long, group = "query")]
        rsq: Option<String>,
        /// Table of every admissible squared distance with r <= rmax.
        #[arg(long, group = "query")]
        rmax: Option<f64>,
    },
    /// Covariogram of a window: exact point values or plot-ready grids.
    Covariogram {
        #[arg(long, value_enum)]
        shape: Shape,
        /// Interval length (exact, e.g. 1+1*tau).
        #[arg(long)]
        length: Option<String>,
        /// Interval shift (exact).
        #[arg(long)]
        shift: Option<String>,
        /// Ball dimension.
        #[arg(long)]
        dim: Option<u32>,
        /// Ball radius.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Ball offset (float); use --grid for the whole curve.
        #[arg(long)]
        offset: Option<f64>,
        /// Octagon offset, exact x coordinate (e.g. 1+0*rt2/2).
        #[arg(long)]
        x: Option<String>,
        /// Octagon offset, exact y coordinate.
        #[arg(long)]
        y: Option<String>,
        /// Emit an N-step grid (curve for balls, contour data for the octagon).
        #[arg(long)]
        grid: Option<u32>,
    },
    /// Generate a circular patch of a model set.
    Generate {
        #[arg(long, value_enum)]
        system: SystemArg,
        #[arg(long, default_value_t = 8)]
        disk_n: u32,
        #[arg(long, default_value_t = 1.0)]
        disk_radius: f64,
        /// Physical cutoff radius of the patch.
        #[arg(long)]
        cutoff: f64,
        /// Overrides --output-format for this dump.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Theta coefficients N(k) of an integer quadratic form, k = 0..=kmax.
    Theta {
        /// Gram matrix, rows separated by ';', e.g. "2,0;0,2".
        #[arg(long)]
        gram: String,
        #[arg(long)]
        kmax: i64,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Patch cutoff for the empirical checks.
        #[arg(long, default_value_t = 100.0)]
        cutoff: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads(cli.threads)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let format = cli.output_format;
    let (text, code) = match cli.command {
        Command::Central { n, rsq } => (central_cmd(n, &rsq, format)?, ExitCode::SUCCESS),
        Command::Shell { n, rsq } => (shell_cmd(n, &rsq, format)?, ExitCode::SUCCESS),
        Command::Average {
            system,
            disk_n,
            disk_radius,
            rsq,
            rmax,
        } => {
            let system = resolve_system(system, disk_n, disk_radius);
            (average_cmd(&system, rsq.as_deref(), rmax, format)?, ExitCode::SUCCESS)
        }
        Command::Covariogram {
            shape,
            length,
            shift,
            dim,
            radius,
            offset,
            x,
            y,
            grid,
        } => (
            covariogram_cmd(shape, CovArgs {
                length,
                shift,
                dim,
                radius,
                offset,
                x,
                y,
                grid,
            }, format)?,
            ExitCode::SUCCESS,
        ),
        Command::Generate {
            system,
            disk_n,
            disk_radius,
            cutoff,
            format: override_format,
        } => {
            let system = resolve_system(system, disk_n, disk_radius);
            (
                generate_cmd(&system, cutoff, override_format.unwrap_or(format))?,
                ExitCode::SUCCESS,
            )
        }
        Command::Theta { gram, kmax } => (theta_cmd(&gram, kmax, format)?, ExitCode::SUCCESS),
        Command::Verify { suite, cutoff } => verify_cmd(suite, cutoff, seed, format)?,
    };
    emit(&cli.output, &text)?;
    Ok(code)
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var("SHELLKIT_THREADS") {
            Ok(v) => Some(v.parse().context("SHELLKIT_THREADS must be an integer")?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("initialising the worker pool")?;
    }
    Ok(())
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    let text = if text.ends_with('\n') || text.is_empty() {
        text.to_string()
    } else {
        format!("{text}\n")
    };
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn basis_for(n: u32) -> Result<Basis> {
    match n {
        8 => Ok(Basis::Rt2),
        12 => Ok(Basis::Rt3),
        5 => Ok(Basis::Tau),
        other => bail!("unsupported symmetry {other} (supported: 5, 8, 12)"),
    }
}

fn parse_rsq(text: &str, basis: Basis) -> Result<QuadInt> {
    let value = parse_quadrat(text).with_context(|| format!("parsing '{text}'"))?;
    if !value.is_integral() {
        bail!("'{text}' has a denominator; squared distances are ring integers");
    }
    if value.basis() != basis {
        bail!(
            "'{text}' uses basis {}, but this system needs {}",
            value.basis().symbol(),
            basis.symbol()
        );
    }
    Ok(value.num)
}

fn resolve_system(arg: SystemArg, disk_n: u32, disk_radius: f64) -> System {
    match arg {
        SystemArg::Ab => System::AmmannBeenker,
        SystemArg::Fibonacci => System::Fibonacci,
        SystemArg::Disk => System::DiskWindow {
            n: disk_n,
            radius: disk_radius,
        },
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

// ---------------------------------------------------------------------------
// central / shell
// ---------------------------------------------------------------------------

fn central_cmd(n: u32, rsq_text: &str, format: Format) -> Result<String> {
    let rsq = parse_rsq(rsq_text, basis_for(n)?)?;
    let count = central_count(&rsq, n)?;
    let chi = character_sum(&rsq, n)?;
    debug_assert_eq!(count, chi);
    Ok(match format {
        Format::Pretty => format!("c({rsq}) = {count}\ncharacter sum = {chi}\n"),
        Format::Csv => format!("r_sq,count,character_sum\n{rsq},{count},{chi}\n"),
        Format::Json => pretty_json(&serde_json::json!({
            "schema_version": 1,
            "n": n,
            "r_sq": rsq.to_string(),
            "count": count,
            "character_sum": chi,
        })),
    })
}

fn shell_cmd(n: u32, rsq_text: &str, format: Format) -> Result<String> {
    let rsq = parse_rsq(rsq_text, basis_for(n)?)?;
    let shell = enumerate_shell(&rsq, n)?;
    Ok(match format {
        Format::Pretty => {
            let mut out = format!("{} points with squared distance {rsq}\n", shell.count());
            for p in &shell.points {
                let phys = p.embed();
                let int = p.embed_internal();
                writeln!(
                    out,
                    "{p}  phys = ({:.6}, {:.6})  int = ({:.6}, {:.6})",
                    phys[0], phys[1], int[0], int[1]
                )?;
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("c0,c1,c2,c3,phys_x,phys_y,int_x,int_y\n");
            for p in &shell.points {
                let phys = p.embed();
                let int = p.embed_internal();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3],
                    phys[0], phys[1], int[0], int[1]
                )?;
            }
            out
        }
        Format::Json => {
            let points: Vec<serde_json::Value> = shell
                .points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "coords": p.to_string(),
                        "phys": p.embed(),
                        "int": p.embed_internal(),
                    })
                })
                .collect();
            pretty_json(&serde_json::json!({
                "schema_version": 1,
                "n": n,
                "r_sq": rsq.to_string(),
                "count": shell.count(),
                "points": points,
            }))
        }
    })
}

// ---------------------------------------------------------------------------
// average
// ---------------------------------------------------------------------------

fn average_cmd(
    system: &System,
    rsq: Option<&str>,
    rmax: Option<f64>,
    format: Format,
) -> Result<String> {
    let (records, rmax_used): (Vec<ShellRecord>, Option<f64>) = match (rsq, rmax) {
        (Some(text), None) => {
            let rsq = parse_rsq(text, system.basis()?)?;
            (vec![averaged_shelling(system, &rsq)?], None)
        }
        (None, Some(rmax)) => {
            if rmax <= 0.0 {
                bail!("--rmax must be positive");
            }
            // The r = 0 record is an identity, not a table row; give it
            // only when asked for explicitly via --rsq.
            let mut table = shelling_table(system, rmax)?;
            table.remove(0);
            (table, Some(rmax))
        }
        _ => unreachable!("clap enforces exactly one of --rsq/--rmax"),
    };
    Ok(match format {
        Format::Csv => table_to_csv(&records),
        Format::Json => pretty_json(&table_to_json(system, rmax_used, &records)),
        Format::Pretty => {
            let mut out = format!("{}\n", system.label());
            writeln!(
                out,
                "{:<14} {:>9} {:>9} {:>5}  {:<10} {:<20} {:>12}",
                "r^2", "r", "s", "c", "orbits", "a (exact)", "a"
            )?;
            for rec in &records {
                let orbit_lens = rec
                    .orbits
                    .iter()
                    .map(|o| o.orbit_length.to_string())
                    .collect::<Vec<_>>()
                    .join("+");
                let s = rec.orbits.first().map(|o| format!("{:.4}", o.s)).unwrap_or_default();
                let exact = rec
                    .a_exact
                    .as_ref()
                    .map(|a| a.to_string())
                    .unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{:<14} {:>9.4} {:>9} {:>5}  {:<10} {:<20} {:>12.6}",
                    rec.rsq.to_string(),
                    rec.r,
                    s,
                    rec.c,
                    orbit_lens,
                    exact,
                    rec.a_float
                )?;
            }
            out
        }
    })
}

// ---------------------------------------------------------------------------
// covariogram
// ---------------------------------------------------------------------------

struct CovArgs {
    length: Option<String>,
    shift: Option<String>,
    dim: Option<u32>,
    radius: f64,
    offset: Option<f64>,
    x: Option<String>,
    y: Option<String>,
    grid: Option<u32>,
}

fn covariogram_cmd(shape: Shape, args: CovArgs, format: Format) -> Result<String> {
    match shape {
        Shape::Interval => {
            let (Some(length), Some(shift)) = (&args.length, &args.shift) else {
                bail!("--shape interval needs --length and --shift");
            };
            let length = parse_quadrat(length).with_context(|| format!("parsing '{length}'"))?;
            let shift = parse_quadrat(shift).with_context(|| format!("parsing '{shift}'"))?;
            if length.basis() != shift.basis() {
                bail!("--length and --shift must use the same basis");
            }
            if length.sign_exact() <= 0 {
                bail!("--length must be positive");
            }
            let value = interval_covariogram(&length, &shift);
            Ok(match format {
                Format::Pretty => format!("f({length}; {shift}) = {value} = {}\n", value.to_f64()),
                Format::Csv => format!(
                    "length,shift,value,value_float\n{length},{shift},{value},{}\n",
                    value.to_f64()
                ),
                Format::Json => pretty_json(&serde_json::json!({
                    "schema_version": 1,
                    "shape": "interval",
                    "length": length.to_string(),
                    "shift": shift.to_string(),
                    "value": value.to_string(),
                    "value_float": value.to_f64(),
                })),
            })
        }
        Shape::Ball => {
            let Some(dim) = args.dim else {
                bail!("--shape ball needs --dim");
            };
            if let Some(steps) = args.grid {
                if steps == 0 {
                    bail!("--grid must be positive");
                }
                let mut rows = Vec::new();
                for j in 0..=steps {
                    let s = 2.0 * args.radius * j as f64 / steps as f64;
                    rows.push((s, ball_covariogram(dim, args.radius, s)?));
                }
                Ok(curve_output(format, "s,f", &rows, &format!("ball dim {dim} radius {}", args.radius)))
            } else {
                let Some(s) = args.offset else {
                    bail!("--shape ball needs --offset or --grid");
                };
                let value = ball_covariogram(dim, args.radius, s)?;
                Ok(match format {
                    Format::Pretty => format!("f_{dim}(R = {}; s = {s}) = {value}\n", args.radius),
                    Format::Csv => {
                        format!("dim,radius,s,f\n{dim},{},{s},{value}\n", args.radius)
                    }
                    Format::Json => pretty_json(&serde_json::json!({
                        "schema_version": 1,
                        "shape": "ball",
                        "dim": dim,
                        "radius": args.radius,
                        "s": s,
                        "value": value,
                    })),
                })
            }
        }
        Shape::Octagon => {
            if let Some(steps) = args.grid {
                if steps == 0 {
                    bail!("--grid must be positive");
                }
                let lambda = 1.0 + std::f64::consts::SQRT_2;
                let mut out = String::new();
                match format {
                    Format::Pretty => {
                        out.push_str("# octagon covariogram grid: x, y, f\n");
                    }
                    Format::Csv => out.push_str("x,y,f\n"),
                    Format::Json => {}
                }
                let mut rows = Vec::new();
                for i in 0..=steps {
                    for j in 0..=steps {
                        let x = lambda * i as f64 / steps as f64;
                        let y = lambda * j as f64 / steps as f64;
                        let f = octagon_covariogram_f64(x, y);
                        match format {
                            Format::Json => rows.push(serde_json::json!([x, y, f])),
                            _ => writeln!(out, "{x},{y},{f}")?,
                        }
                    }
                }
                if format == Format::Json {
                    out = pretty_json(&serde_json::json!({
                        "schema_version": 1,
                        "shape": "octagon",
                        "grid": steps,
                        "columns": ["x", "y", "f"],
                        "rows": rows,
                    }));
                }
                Ok(out)
            } else {
                let (Some(x), Some(y)) = (&args.x, &args.y) else {
                    bail!("--shape octagon needs --x and --y, or --grid");
                };
                let x = parse_quadrat(x).with_context(|| format!("parsing '{x}'"))?;
                let y = parse_quadrat(y).with_context(|| format!("parsing '{y}'"))?;
                if x.basis() != Basis::Rt2 || y.basis() != Basis::Rt2 {
                    bail!("octagon offsets live in the rt2 basis");
                }
                let sector = reduce_to_sector(&ExactPoint2 { u: x.clone(), v: y.clone() });
                let value = octagon_covariogram(&sector);
                Ok(match format {
                    Format::Pretty => format!(
                        "f({x}, {y}) = {value} = {}\nsector representative: ({}, {})\n",
                        value.to_f64(),
                        sector.x(),
                        sector.y()
                    ),
                    Format::Csv => format!(
                        "x,y,sector_x,sector_y,value,value_float\n{x},{y},{},{},{value},{}\n",
                        sector.x(),
                        sector.y(),
                        value.to_f64()
                    ),
                    Format::Json => pretty_json(&serde_json::json!({
                        "schema_version": 1,
                        "shape": "octagon",
                        "x": x.to_string(),
                        "y": y.to_string(),
                        "sector": [sector.x().to_string(), sector.y().to_string()],
                        "value": value.to_string(),
                        "value_float": value.to_f64(),
                    })),
                })
            }
        }
    }
}

fn curve_output(format: Format, header: &str, rows: &[(f64, f64)], label: &str) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{header}\n");
            for (s, f) in rows {
                out.push_str(&format!("{s},{f}\n"));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("# {label}: {header}\n");
            for (s, f) in rows {
                out.push_str(&format!("{s} {f}\n"));
            }
            out
        }
        Format::Json => pretty_json(&serde_json::json!({
            "schema_version": 1,
            "label": label,
            "columns": header.split(',').collect::<Vec<_>>(),
            "rows": rows.iter().map(|(s, f)| serde_json::json!([s, f])).collect::<Vec<_>>(),
        })),
    }
}

// ---------------------------------------------------------------------------
// generate / theta
// ---------------------------------------------------------------------------

fn generate_cmd(system: &System, cutoff: f64, format: Format) -> Result<String> {
    let patch = generate_patch(system, cutoff)?;
    Ok(match format {
        Format::Csv => patch_to_csv(&patch),
        Format::Json => serde_json::to_string(&patch_to_json(&patch)).expect("serialisable") + "\n",
        Format::Pretty => {
            let mut out = format!(
                "# {}, cutoff {cutoff}: {} points, density {:.6}\n",
                system.label(),
                patch.len(),
                patch.density()
            );
            out.push_str(&patch_to_csv(&patch));
            out
        }
    })
}

fn parse_gram(text: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|entry| {
                    entry
                        .trim()
                        .parse::<i64>()
                        .with_context(|| format!("bad matrix entry '{}'", entry.trim()))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        bail!("gram matrix must be square (rows separated by ';')");
    }
    for i in 0..n {
        for j in 0..n {
            if rows[i][j] != rows[j][i] {
                bail!("gram matrix must be symmetric");
            }
        }
    }
    Ok(rows)
}

fn theta_cmd(gram_text: &str, kmax: i64, format: Format) -> Result<String> {
    let gram = parse_gram(gram_text)?;
    let counts = lattice_theta(&gram, kmax)?;
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("k,count\n");
            for (k, c) in &counts {
                out.push_str(&format!("{k},{c}\n"));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("theta coefficients of {gram_text} up to k = {kmax}\n");
            for (k, c) in &counts {
                writeln!(out, "{k:>6} {c}")?;
            }
            out
        }
        Format::Json => pretty_json(&serde_json::json!({
            "schema_version": 1,
            "gram": gram,
            "kmax": kmax,
            "counts": counts,
        })),
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn verify_cmd(suite: Suite, cutoff: f64, seed: u64, format: Format) -> Result<(String, ExitCode)> {
    if cutoff <= 0.0 {
        bail!("--cutoff must be positive");
    }
    let (name, results) = match suite {
        Suite::Table1 => ("table1", suite_table1()?),
        Suite::Central => {
            let mut r = suite_central(CENTRAL_BOUND)?;
            r.extend(suite_central_invariance(1000, seed)?);
            ("central", r)
        }
        Suite::Covariogram => ("covariogram", suite_covariogram(seed)?),
        Suite::Empirical => ("empirical", suite_empirical(cutoff, seed)?),
        Suite::All => ("all", suite_all(CENTRAL_BOUND, cutoff, seed)?),
    };
    let ok = all_passed(&results);
    let passed = results.iter().filter(|r| r.passed).count();
    let text = match format {
        Format::Pretty => {
            let mut out = String::new();
            for r in &results {
                writeln!(
                    out,
                    "{} {} - {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                )?;
            }
            writeln!(out, "{passed}/{} checks passed", results.len())?;
            out
        }
        Format::Csv => {
            let mut out = String::from("name,passed,detail\n");
            for r in &results {
                out.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(&r.name),
                    r.passed,
                    csv_field(&r.detail)
                ));
            }
            out
        }
        Format::Json => pretty_json(&serde_json::json!({
            "schema_version": 1,
            "suite": name,
            "passed": ok,
            "checks": results
                .iter()
                .map(|r: &CheckResult| {
                    serde_json::json!({
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                    })
                })
                .collect::<Vec<_>>(),
        })),
    };
    Ok((text, if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }))
}

fn pretty_json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serialisable") + "\n"
}

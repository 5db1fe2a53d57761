//! The `dstk` command-line front end.
//!
//! Every command prints a report (text or JSON) to stdout. Commands that
//! produce systems write them with `-o`; when a command produces several
//! systems `-o` is a prefix and each file gets a role suffix such as
//! `.good.dss`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

pub mod io;

use crate::analysis::{self, StabilityRegion};
use crate::error::Error;
use crate::factor::{self, FactorPair};
use crate::linalg::{CMat, Mat};
use crate::ops;
use crate::pencil::{klf, KroneckerStructure};
use crate::solve;
use crate::system::{Config, DescriptorSystem, TimeDomain};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "dstk", version, about = "Descriptor-system toolkit")]
struct Cli {
    /// Absolute rank tolerance (default: scaled machine precision).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the random frequency probes (falls back to DSTK_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report format.
    #[arg(long = "out", value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Connection {
    /// `G1 G2` (the input enters G2).
    Series,
    Parallel,
    /// `[G1 G2]`
    Rowcat,
    /// `[G1; G2]`
    Colcat,
    Diag,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Poles, zeros, normal rank, McMillan degree and minimality tests.
    Info { file: PathBuf },
    /// Frequency response at one point, `--at re,im`.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        file: PathBuf,
    },
    /// Minimal realization.
    Minreal {
        file: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Couples two systems.
    Connect {
        kind: Connection,
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Additive split into good and bad parts.
    Decompose {
        #[arg(long, default_value = "stable", allow_hyphen_values = true)]
        region: String,
        file: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Left or right coprime factorization.
    Cf {
        side: Side,
        #[arg(long, default_value = "stable", allow_hyphen_values = true)]
        region: String,
        file: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Inner-outer (or with `--co`, co-outer-co-inner) factorization.
    Iofac {
        #[arg(long)]
        co: bool,
        file: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Proper rational nullspace basis.
    Nullspace {
        side: Side,
        file: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Solves `G X = F` (or `X G = F` with `--left`).
    Solve {
        #[arg(long)]
        left: bool,
        g: PathBuf,
        f: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// L2-optimal stable `X` minimizing `‖F − G X‖₂`.
    Match {
        g: PathBuf,
        f: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Kronecker structure of the pencil `M − λN` given as two matrix files.
    Klf {
        m: PathBuf,
        n: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs `dstk` on `argv` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = if matches!(e.kind(), DisplayHelp | DisplayVersion) { 0 } else { 1 };
            let msg = e.render().to_string();
            let _ = if code == 0 { write!(out, "{msg}") } else { write!(err, "{msg}") };
            return code;
        }
    };
    let seed = match resolve_seed(cli.seed) {
        Ok(s) => s,
        Err(msg) => {
            let _ = writeln!(err, "dstk: {msg}");
            return 1;
        }
    };
    let cfg = Config { tol: cli.tol, seed };
    match execute(&cli.cmd, &cfg) {
        Ok((command, inputs, results)) => {
            let report = json!({
                "command": command,
                "inputs": inputs,
                "results": results,
                "tolerances": { "rank_tol": cli.tol },
                "seed": seed,
            });
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap_or_default() + "\n",
                Format::Text => render_text(&report),
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "dstk: {msg}");
            1
        }
        Err(Failure::Numeric(e)) => {
            let code = if matches!(e, Error::Parse { .. }) { 1 } else { 2 };
            let _ = writeln!(err, "dstk: error[{}]: {e}", e.code());
            code
        }
    }
}

/// Entry point used by the binary.
pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("DSTK_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("DSTK_SEED is not an unsigned integer: `{v}`")),
        Err(_) => Ok(Config::default().seed),
    }
}

fn read_text(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Outcome<DescriptorSystem> {
    io::parse_system(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, col, msg } => Failure::Usage(format!(
            "error[E_PARSE]: {}:{line}:{col}: {msg}",
            path.display()
        )),
        other => Failure::Numeric(other),
    })
}

fn load_matrix(path: &Path) -> Outcome<Mat> {
    io::parse_matrix(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, col, msg } => Failure::Usage(format!(
            "error[E_PARSE]: {}:{line}:{col}: {msg}",
            path.display()
        )),
        other => Failure::Numeric(other),
    })
}

fn save(path: &Path, sys: &DescriptorSystem) -> Outcome<()> {
    std::fs::write(path, io::write_system(sys))
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!(".{suffix}.dss"));
    PathBuf::from(s)
}

/// Saves each `(suffix, system)` under the prefix and lists the written paths.
fn save_all(prefix: Option<&PathBuf>, parts: &[(&str, &DescriptorSystem)]) -> Outcome<Value> {
    let mut written = Vec::new();
    if let Some(p) = prefix {
        for (suffix, sys) in parts {
            let path = with_suffix(p, suffix);
            save(&path, sys)?;
            written.push(Value::String(path.display().to_string()));
        }
    }
    Ok(Value::Array(written))
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}

fn fmt_real(x: f64) -> String {
    match num(x) {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s,
        _ => unreachable!(),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else {
        format!("{}{}{}i", fmt_real(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_real(z.im.abs()))
    }
}

/// Sorted so that conjugate pairs are adjacent, positive imaginary part first.
fn complex_list(v: &[Complex64]) -> Value {
    let mut v = v.to_vec();
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.abs().partial_cmp(&b.im.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Value::Array(v.into_iter().map(|z| Value::String(fmt_complex(z))).collect())
}

fn cmat_value(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| Value::String(fmt_complex(m[(i, j)]))).collect()))
            .collect(),
    )
}

fn parse_region(s: &str, domain: TimeDomain) -> Outcome<StabilityRegion> {
    let bad = || Failure::Usage(format!("invalid region `{s}` (use stable, lhp, unit-disk, shift:<a> or disk:<r>)"));
    let r = match s {
        "stable" => StabilityRegion::for_domain(domain),
        "lhp" => StabilityRegion::ContinuousLeftHalfPlane,
        "unit-disk" => StabilityRegion::DiscreteUnitDisk,
        _ => {
            let (kind, val) = s.split_once(':').ok_or_else(bad)?;
            let v: f64 = val.parse().map_err(|_| bad())?;
            match kind {
                "shift" => StabilityRegion::ShiftedHalfPlane(v),
                "disk" => StabilityRegion::ScaledDisk(v),
                _ => return Err(bad()),
            }
        }
    };
    Ok(r)
}

fn parse_point(s: &str) -> Outcome<Complex64> {
    let bad = || Failure::Usage(format!("invalid point `{s}` (expected re,im)"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn shape(sys: &DescriptorSystem) -> Value {
    json!({ "order": sys.order(), "inputs": sys.inputs(), "outputs": sys.outputs(), "domain": sys.domain.name() })
}

fn structure_value(s: &KroneckerStructure) -> Value {
    json!({
        "right_indices": s.right_indices,
        "left_indices": s.left_indices,
        "finite_eigenvalues": complex_list(&s.finite_eigenvalues),
        "infinite_divisor_degrees": s.infinite_divisor_degrees,
        "normal_rank": s.normal_rank(),
    })
}

/// The report body shared by the library tests and `dstk info`.
pub fn info_results(sys: &DescriptorSystem, cfg: &Config) -> crate::Result<Value> {
    let p = analysis::poles(sys, cfg);
    let z = analysis::zeros(sys, cfg);
    let mr = analysis::minimality_report(sys, cfg);
    let reduced = analysis::minreal(sys, cfg);
    let (pm, pn) = reduced.system_pencil();
    let k = klf(&pm, &pn, cfg.tol)?;
    Ok(json!({
        "system": shape(sys),
        "poles": complex_list(&p.finite),
        "infinite_poles": p.infinite_count,
        "zeros": complex_list(&z.finite),
        "infinite_zeros": z.infinite_count,
        "normal_rank": analysis::normal_rank(sys, cfg),
        "mcmillan_degree": analysis::mcmillan_degree(sys, cfg),
        "right_kronecker_indices": k.structure.right_indices,
        "left_kronecker_indices": k.structure.left_indices,
        "stable": analysis::is_stable(sys, cfg),
        "minimality": {
            "finite_controllable": mr.finite_controllable,
            "infinite_controllable": mr.infinite_controllable,
            "finite_observable": mr.finite_observable,
            "infinite_observable": mr.infinite_observable,
            "no_nondynamic_modes": mr.no_nondynamic_modes,
            "minimal": mr.is_minimal(),
        },
    }))
}

fn pair_results(fp: &FactorPair, names: [&str; 2], output: Option<&PathBuf>) -> Outcome<Value> {
    let written = save_all(output, &[(names[0], &fp.first), (names[1], &fp.second)])?;
    let mut m = Map::new();
    m.insert(names[0].into(), shape(&fp.first));
    m.insert(names[1].into(), shape(&fp.second));
    m.insert("written".into(), written);
    Ok(Value::Object(m))
}

fn paths(ps: &[&PathBuf]) -> Value {
    Value::Array(ps.iter().map(|p| Value::String(p.display().to_string())).collect())
}

fn execute(cmd: &Cmd, cfg: &Config) -> Outcome<(&'static str, Value, Value)> {
    Ok(match cmd {
        Cmd::Info { file } => ("info", paths(&[file]), info_results(&load(file)?, cfg)?),
        Cmd::Eval { at, file } => {
            let s = parse_point(at)?;
            let g = load(file)?;
            let v = g.eval(s)?;
            ("eval", paths(&[file]), json!({ "at": fmt_complex(s), "value": cmat_value(&v) }))
        }
        Cmd::Minreal { file, output } => {
            let g = load(file)?;
            let r = analysis::minreal(&g, cfg);
            let written = match output {
                Some(p) => {
                    save(p, &r)?;
                    vec![p.display().to_string()]
                }
                None => vec![],
            };
            ("minreal", paths(&[file]), json!({ "original_order": g.order(), "system": shape(&r), "written": written }))
        }
        Cmd::Connect { kind, first, second, output } => {
            let (a, b) = (load(first)?, load(second)?);
            let r = match kind {
                Connection::Series => ops::series(&a, &b)?,
                Connection::Parallel => ops::parallel(&a, &b)?,
                Connection::Rowcat => ops::concat_row(&a, &b)?,
                Connection::Colcat => ops::concat_col(&a, &b)?,
                Connection::Diag => ops::diag_stack(&a, &b)?,
            };
            let written = match output {
                Some(p) => {
                    save(p, &r)?;
                    vec![p.display().to_string()]
                }
                None => vec![],
            };
            ("connect", paths(&[first, second]), json!({ "system": shape(&r), "written": written }))
        }
        Cmd::Decompose { region, file, output } => {
            let g = load(file)?;
            let fp = factor::additive_decompose(&g, parse_region(region, g.domain)?, cfg)?;
            let mut res = pair_results(&fp, ["good", "bad"], output.as_ref())?;
            res["good_poles"] = complex_list(&analysis::poles(&fp.first, cfg).finite);
            res["bad_poles"] = complex_list(&analysis::poles(&fp.second, cfg).finite);
            ("decompose", paths(&[file]), res)
        }
        Cmd::Cf { side, region, file, output } => {
            let g = load(file)?;
            let region = parse_region(region, g.domain)?;
            let fp = match side {
                Side::Right => factor::rcf(&g, region, None, cfg)?,
                Side::Left => factor::lcf(&g, region, None, cfg)?,
            };
            let mut res = pair_results(&fp, ["num", "den"], output.as_ref())?;
            res["factor_poles"] = complex_list(&analysis::poles(&fp.second, cfg).finite);
            ("cf", paths(&[file]), res)
        }
        Cmd::Iofac { co, file, output } => {
            let g = load(file)?;
            let (fp, names) = if *co {
                (factor::co_outer_co_inner(&g, cfg)?, ["outer", "inner"])
            } else {
                (factor::inner_outer(&g, cfg)?, ["inner", "outer"])
            };
            let mut res = pair_results(&fp, names, output.as_ref())?;
            res["inner_columns"] = json!(fp.inner_columns);
            ("iofac", paths(&[file]), res)
        }
        Cmd::Nullspace { side, file, output } => {
            let g = load(file)?;
            let nb = match side {
                Side::Right => solve::right_nullspace(&g, cfg)?,
                Side::Left => solve::left_nullspace(&g, cfg)?,
            };
            let written = match output {
                Some(p) => {
                    save(p, &nb)?;
                    vec![p.display().to_string()]
                }
                None => vec![],
            };
            let res = json!({
                "normal_rank": analysis::normal_rank(&g, cfg),
                "basis": shape(&nb),
                "basis_poles": complex_list(&analysis::poles(&nb, cfg).finite),
                "written": written,
            });
            ("nullspace", paths(&[file]), res)
        }
        Cmd::Solve { left, g, f, output } => {
            let (gs, fs) = (load(g)?, load(f)?);
            let r = if *left { solve::solve_left(&gs, &fs, cfg)? } else { solve::solve_right(&gs, &fs, cfg)? };
            let written = save_all(output.as_ref(), &[("x", &r.particular), ("null", &r.null_basis)])?;
            let res = json!({
                "particular": shape(&r.particular),
                "null_basis": shape(&r.null_basis),
                "written": written,
            });
            ("solve", paths(&[g, f]), res)
        }
        Cmd::Match { g, f, output } => {
            let (gs, fs) = (load(g)?, load(f)?);
            let (x, parts) = solve::l2_model_match(&gs, &fs, cfg)?;
            let written = match output {
                Some(p) => {
                    save(p, &x)?;
                    vec![p.display().to_string()]
                }
                None => vec![],
            };
            let res = json!({
                "solution": shape(&x),
                "error_norm": num(parts.error_norm),
                "written": written,
            });
            ("match", paths(&[g, f]), res)
        }
        Cmd::Klf { m, n } => {
            let (mm, nn) = (load_matrix(m)?, load_matrix(n)?);
            if mm.shape() != nn.shape() {
                return Err(Failure::Usage(format!("pencil matrices differ in shape: {:?} vs {:?}", mm.shape(), nn.shape())));
            }
            let k = klf(&mm, &nn, cfg.tol)?;
            ("klf", paths(&[m, n]), structure_value(&k.structure))
        }
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "auto".into(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn render_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                render_value(out, k, x, indent + 1);
            }
        }
        Value::Array(a) if a.iter().all(is_flat) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for x in a {
                let items: Vec<String> = match x {
                    Value::Array(r) => r.iter().map(scalar_text).collect(),
                    other => vec![scalar_text(other)],
                };
                out.push_str(&format!("{pad}  {}\n", items.join("  ")));
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(other))),
    }
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    for key in ["command", "inputs", "results", "tolerances", "seed"] {
        render_value(&mut out, key, &report[key], 0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("dstk").chain(args.iter().copied()).map(String::from).collect();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(&argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn formats_complex_numbers() {
        assert_eq!(fmt_complex(Complex64::new(1.0, 0.0)), "1.0");
        assert_eq!(fmt_complex(Complex64::new(-1.0, -2.5)), "-1.0-2.5i");
        let v = complex_list(&[Complex64::new(-1.0, -2.0), Complex64::new(-3.0, 0.0), Complex64::new(-1.0, 2.0)]);
        assert_eq!(v, json!(["-3.0", "-1.0+2.0i", "-1.0-2.0i"]));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["frobnicate"]).0, 1);
        assert_eq!(run_capture(&["info", "/nonexistent/file.dss"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn regions_parse() {
        assert!(matches!(parse_region("shift:-0.5", TimeDomain::Continuous), Ok(StabilityRegion::ShiftedHalfPlane(a)) if a == -0.5));
        assert!(matches!(parse_region("stable", TimeDomain::Discrete), Ok(StabilityRegion::DiscreteUnitDisk)));
        assert!(parse_region("disk", TimeDomain::Discrete).is_err());
    }
}

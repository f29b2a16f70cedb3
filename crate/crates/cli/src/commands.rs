//! Command definitions and their implementations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use wpvol::asymptotics::Suite;
use wpvol::scalar::{format_rational, parse_rational};
use wpvol::spectral::{a0, a1, geodesic_kernels, TestFunction};
use wpvol::volumes::{mz_ratio, volume, volume_at};
use wpvol::{intersection_number, MemoStore, PiPoly, TauIndex};

use crate::config::{Config, Format, Overrides};
use crate::error::{exit, CliError, CliResult};
use crate::report::{Report, SCHEMA_VERSION};
use crate::suites;

#[derive(Debug, Parser)]
#[command(name = "wpvol", version, about = "Exact Weil–Petersson volumes, asymptotic checks and trace-formula coefficients")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Memo cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// TOML config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output format, json or csv.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bits of precision for printed enclosures.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One intersection number [τ_d]_{g,n}.
    Intersect {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        /// Comma-separated exponents, n of them.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        d: Vec<u32>,
    },
    /// V_{g,n}, or V_{g,n}(x) with --at.
    Volume {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        /// Comma-separated rational lengths such as 1/2,3.
        #[arg(long, value_delimiter = ',')]
        at: Option<Vec<String>>,
    },
    /// CSV or JSON table of V_{g,n} for 3g − 3 + n ≤ K.
    Table {
        #[arg(long)]
        max_complexity: i64,
    },
    /// Run a verification suite; exit status 3 when any check fails.
    Verify {
        suite: VerifySuite,
        /// Restrict `expansions` to a3, a4, wpvols, corollary, algebra or simple.
        #[arg(long = "only", value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        gmin: Option<u32>,
        #[arg(long)]
        gmax: Option<u32>,
        /// Complexity bound of the recursion checks.
        #[arg(long, default_value_t = 8)]
        max_complexity: i64,
    },
    /// a₀ᵗ and a₁ᵗ for the built-in test function.
    TraceCoefficients {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 3, 4])]
        t: Vec<usize>,
    },
    /// Cache management.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Data files and a gnuplot script for f and the geodesic kernels.
    Plot {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifySuite {
    Recursions,
    Bounds,
    Mz,
    Expansions,
    Spectral,
    All,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Stats,
    Clear,
    /// Print every entry as CSV.
    Export,
}

impl GlobalArgs {
    fn overrides(&self) -> CliResult<Overrides> {
        Ok(Overrides {
            cache: self.cache.clone(),
            precision: self.precision,
            quad_tol: self.quad_tol,
            workers: self.workers,
            format: self.format.as_deref().map(Format::from_str).transpose()?,
            seed: self.seed,
            ..Default::default()
        })
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn value_json(v: &PiPoly, precision: u32) -> serde_json::Value {
    let iv = v.eval_interval(precision);
    json!({
        "value": v.to_string(),
        "interval": { "lo": iv.lo_f64(), "hi": iv.hi_f64(), "precision": precision },
    })
}

fn csv_value(v: &PiPoly, precision: u32) -> String {
    let iv = v.eval_interval(precision);
    format!("\"{v}\",{:e},{:e}", iv.lo_f64(), iv.hi_f64())
}

/// Runs one parsed invocation. Writes the primary output to `out` and
/// returns the exit code.
pub fn run(cli: Cli, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write) -> CliResult<i32> {
    let mut flags = cli.global.overrides()?;
    if let Command::Verify { gmin, gmax, .. } = &cli.command {
        flags.gmin = *gmin;
        flags.gmax = *gmax;
    }
    let cfg = Config::resolve(cli.global.config.as_deref(), env, &flags)?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();

    match cli.command {
        Command::Intersect { g, n, d } => {
            if d.len() != n {
                return Err(CliError::Usage(format!("--d has {} entries but n = {n}", d.len())));
            }
            let store = MemoStore::open(&cfg.cache)?;
            let idx = TauIndex::new(g, d.clone())?;
            let v = intersection_number(&idx, &store)?;
            match cfg.format {
                Format::Json => {
                    let mut j = json!({ "schema_version": SCHEMA_VERSION, "g": g, "n": n, "d": d });
                    merge(&mut j, value_json(&v, cfg.precision));
                    write!(out, "{}", to_json(&j))?;
                }
                Format::Csv => writeln!(out, "g,n,d,value,lo,hi\n{g},{n},\"{}\",{}", join(&d), csv_value(&v, cfg.precision))?,
            }
            store.save(&cfg.cache)?;
        }
        Command::Volume { g, n, at } => {
            let store = MemoStore::open(&cfg.cache)?;
            let v = match &at {
                Some(xs) => {
                    let x = xs.iter().map(|s| parse_rational(s)).collect::<wpvol::Result<Vec<_>>>()?;
                    if x.len() != n {
                        return Err(CliError::Usage(format!("--at has {} lengths but n = {n}", x.len())));
                    }
                    volume_at(g, n, &x, &store)?
                }
                None => volume(g, n, &store)?,
            };
            match cfg.format {
                Format::Json => {
                    let mut j = json!({ "schema_version": SCHEMA_VERSION, "g": g, "n": n, "at": at });
                    merge(&mut j, value_json(&v, cfg.precision));
                    write!(out, "{}", to_json(&j))?;
                }
                Format::Csv => writeln!(out, "g,n,value,lo,hi\n{g},{n},{}", csv_value(&v, cfg.precision))?,
            }
            store.save(&cfg.cache)?;
        }
        Command::Table { max_complexity } => table(&cfg, max_complexity, out)?,
        Command::Verify { suite, only, max_complexity, .. } => {
            let start = Instant::now();
            let report = verify(&cfg, suite, &only, max_complexity)?.finish(start.elapsed());
            match cfg.format {
                Format::Json => write!(out, "{}", to_json(&report))?,
                Format::Csv => write!(out, "{}", report.to_csv())?,
            }
            if !report.passed() {
                return Ok(exit::VERIFICATION_FAILED);
            }
        }
        Command::TraceCoefficients { t } => {
            let tf = TestFunction::default_grid()?;
            let mut rows = Vec::new();
            for &ti in &t {
                rows.push(json!({ "t": ti, "a0": a0(&tf, ti)?, "a1": a1(&tf, ti)? }));
            }
            match cfg.format {
                Format::Json => write!(out, "{}", to_json(&json!({ "schema_version": SCHEMA_VERSION, "rows": rows })))?,
                Format::Csv => {
                    writeln!(out, "t,a0,a0_r_route,a1,a1_tail_bound")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{:e},{:e},{:e},{:e}",
                            r["t"], r["a0"]["value"].as_f64().unwrap_or(f64::NAN),
                            r["a0"]["r_route"].as_f64().unwrap_or(f64::NAN),
                            r["a1"]["value"].as_f64().unwrap_or(f64::NAN),
                            r["a1"]["tail_bound"].as_f64().unwrap_or(f64::NAN),
                        )?;
                    }
                }
            }
        }
        Command::Cache { action } => cache(&cfg, action, out)?,
        Command::Plot { out: dir, t } => plot(&dir, t, out)?,
    }
    Ok(exit::OK)
}

fn merge(a: &mut serde_json::Value, b: serde_json::Value) {
    if let (Some(a), serde_json::Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
}

fn join(d: &[u32]) -> String {
    d.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Column order of `table`.
pub const TABLE_HEADER: &str = "g,n,complexity,coeff,pi_power,value,mz_ratio";

#[derive(Serialize)]
struct TableRow {
    g: u32,
    n: usize,
    complexity: i64,
    /// V_{g,n} = coeff · π^pi_power.
    coeff: String,
    pi_power: usize,
    value: String,
    /// 4π²(2g−2+n)V_{g,n}/V_{g,n+1}, exact.
    mz_ratio: String,
}

fn table_row(g: u32, n: usize, store: &MemoStore) -> CliResult<TableRow> {
    let v = volume(g, n, store)?;
    let (j, c) = v
        .as_monomial()
        .ok_or_else(|| CliError::Verification(format!("V_({g},{n}) is not a single power of pi")))?;
    let ratio = mz_ratio(g, n, store)?;
    let mz = ratio
        .as_rational()
        .map(|r| format_rational(&r))
        .unwrap_or_else(|| format!("{:e}", ratio.to_f64()));
    Ok(TableRow {
        g,
        n,
        complexity: 3 * g as i64 - 3 + n as i64,
        coeff: format_rational(c),
        pi_power: 2 * j,
        value: format!("{:.16e}", v.to_f64()),
        mz_ratio: mz,
    })
}

/// Rows are computed one complexity level at a time; the cache is saved
/// atomically after each level so an interrupted run keeps finished work.
fn table(cfg: &Config, max_c: i64, out: &mut dyn Write) -> CliResult<()> {
    if max_c < 0 {
        return Err(CliError::Usage("--max-complexity must be at least 0".into()));
    }
    let store = MemoStore::open(&cfg.cache)?;
    let pairs = suites::stable_pairs(max_c);
    let mut rows = Vec::with_capacity(pairs.len());
    for c in 0..=max_c {
        let level: Vec<(u32, usize)> = pairs.iter().copied().filter(|&(g, n)| 3 * g as i64 - 3 + n as i64 == c).collect();
        let done = level.par_iter().map(|&(g, n)| table_row(g, n, &store)).collect::<CliResult<Vec<_>>>()?;
        rows.extend(done);
        store.save(&cfg.cache)?;
    }
    match cfg.format {
        Format::Csv => {
            writeln!(out, "{TABLE_HEADER}")?;
            for r in &rows {
                writeln!(out, "{},{},{},{},{},{},{}", r.g, r.n, r.complexity, r.coeff, r.pi_power, r.value, r.mz_ratio)?;
            }
        }
        Format::Json => write!(out, "{}", to_json(&json!({ "schema_version": SCHEMA_VERSION, "rows": rows })))?,
    }
    Ok(())
}

const EXPANSION_PARTS: [&str; 6] = ["a3", "a4", "wpvols", "corollary", "algebra", "simple"];

/// Assembles the checks of one suite.
pub fn verify(cfg: &Config, suite: VerifySuite, only: &[String], max_c: i64) -> CliResult<Report> {
    for o in only {
        if !EXPANSION_PARTS.contains(&o.as_str()) {
            return Err(CliError::Usage(format!("unknown expansion part {o:?}")));
        }
    }
    let store = MemoStore::open(&cfg.cache)?;
    let name = format!("{suite:?}").to_lowercase();
    let mut report = Report::new(name);
    let all = suite == VerifySuite::All;
    if all || suite == VerifySuite::Recursions {
        report.extend(suites::cross_recursions(&store, max_c)?);
        report.extend(suites::vanishing_and_symmetry(&store, cfg.seed, max_c, 1000)?);
        report.extend(suites::normalization(&store, max_c.max(10))?);
    }
    if all || suite == VerifySuite::Bounds {
        report.extend(suites::expbound_sandwich(&store, cfg.seed, 100, 10)?);
        report.extend(suites::tail_zeta(20));
        report.extend(suites::coeff_products(12)?);
    }
    if all || suite == VerifySuite::Mz {
        report.extend(suites::mz_trend(&store, cfg.gmin + 1, cfg.gmax)?);
    }
    if all || suite == VerifySuite::Expansions {
        let wanted = |p: &str| only.is_empty() || only.iter().any(|o| o == p);
        for (part, s) in [("a3", Suite::A3), ("a4", Suite::A4), ("wpvols", Suite::WpVols), ("corollary", Suite::Corollary)] {
            if wanted(part) {
                report.extend(suites::envelope_suite(&store, s, cfg.gmin, cfg.gmax)?);
            }
        }
        if wanted("algebra") {
            report.extend(suites::expansion_algebra(cfg.seed, 100)?);
        }
        if wanted("simple") {
            report.extend(suites::simple_expectation_convergence(&store, cfg.gmin, cfg.gmax)?);
        }
    }
    if all || suite == VerifySuite::Spectral {
        let tf = TestFunction::default_grid()?;
        report.extend(suites::test_function_checks(&tf));
        report.extend(suites::trace_quadrature(&tf, cfg.quad_tol)?);
        report.extend(suites::nu_tilde_checks(&tf, cfg.seed, 10_000)?);
        report.extend(suites::window_scaling(&tf)?);
    }
    store.save(&cfg.cache)?;
    Ok(report)
}

fn cache(cfg: &Config, action: CacheAction, out: &mut dyn Write) -> CliResult<()> {
    match action {
        CacheAction::Stats => {
            let store = MemoStore::open(&cfg.cache)?;
            let s = store.stats();
            match cfg.format {
                Format::Json => write!(
                    out,
                    "{}",
                    to_json(&json!({ "schema_version": SCHEMA_VERSION, "path": cfg.cache, "stats": s }))
                )?,
                Format::Csv => writeln!(out, "entries,version\n{},{}", s.entries, s.version)?,
            }
        }
        CacheAction::Clear => {
            let store = MemoStore::new();
            store.save(&cfg.cache)?;
            writeln!(out, "cleared {}", cfg.cache.display())?;
        }
        CacheAction::Export => {
            let store = MemoStore::open(&cfg.cache)?;
            writeln!(out, "g,d,value")?;
            for (idx, v) in store.entries() {
                writeln!(out, "{},\"{}\",\"{v}\"", idx.g(), join(idx.d()))?;
            }
        }
    }
    Ok(())
}

fn plot(dir: &Path, t: usize, out: &mut dyn Write) -> CliResult<()> {
    std::fs::create_dir_all(dir)?;
    let tf = TestFunction::default_grid()?;
    let mut f = String::from("rho,f\n");
    for i in 0..=2000 {
        let r = -20.0 + 0.02 * i as f64;
        f.push_str(&format!("{r:.4},{:e}\n", tf.f_eval(r)));
    }
    std::fs::write(dir.join("f.csv"), f)?;
    let k = geodesic_kernels(&tf, t)?;
    let mut kc = String::from("ell,G,R\n");
    for i in 0..k.ell.len() {
        kc.push_str(&format!("{:e},{:e},{:e}\n", k.ell[i], k.g[i], k.r[i]));
    }
    std::fs::write(dir.join("kernels.csv"), kc)?;
    let script = format!(
        "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n\
         set output 'f.png'\nset xlabel 'rho'\nplot 'f.csv' using 1:2 with lines\n\
         set output 'kernels.png'\nset xlabel 'ell'\nset title 't = {t}'\n\
         plot 'kernels.csv' using 1:2 with lines, '' using 1:3 with lines\n"
    );
    std::fs::write(dir.join("plot.gp"), script)?;
    writeln!(out, "wrote f.csv, kernels.csv and plot.gp to {}", dir.display())?;
    Ok(())
}

/// Parses `args` and runs them, mapping errors to exit codes. Error text
/// goes to `err`.
pub fn main_with<I, T>(args: I, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match run(cli, env, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

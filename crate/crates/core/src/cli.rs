//! Command-line front end: series tables, theorem checks, partition tables.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Deserialize;

use crate::bigraded::PerversePolynomial;
use crate::decomp::{self, CheckKind, CheckOptions, CheckReport, Mode};
use crate::error::{Error, Result};
use crate::partitions::{conjugacy_class_size, enumerate_partitions};
use crate::surfaces::{SurfaceCase, SurfaceModel};

pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 3;
pub const DEFAULT_SAMPLED_BOUND: usize = 5;
pub const DEFAULT_SERIES_BOUND: usize = 12;
pub const MAX_N_VAR: &str = "KP_MAX_N";

#[derive(Debug, Parser)]
#[command(
    name = "kummer-perverse",
    version,
    about = "Perverse filtrations on Hilbert schemes and generalized Kummer varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a perverse Poincaré series as a (degree × perversity) table.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
    },
    /// Run a checker; exit status 0 iff no violations.
    Check {
        #[arg(value_enum)]
        kind: CheckArg,
    },
    /// Partitions of n with length, gcd, torsion count and class size.
    Partitions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Hilbert,
    Kummer,
    KummerQuotient,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Multiplicativity,
    StrongSplitting,
    Duality,
    Diagonal,
    RingAxioms,
    Frobenius,
}

impl From<CheckArg> for CheckKind {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Multiplicativity => CheckKind::Multiplicativity,
            CheckArg::StrongSplitting => CheckKind::StrongSplitting,
            CheckArg::Duality => CheckKind::Duality,
            CheckArg::Diagonal => CheckKind::Diagonal,
            CheckArg::RingAxioms => CheckKind::RingAxioms,
            CheckArg::Frobenius => CheckKind::Frobenius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`,
/// then to defaults.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// Surface model: abelian, e-times-line or e-times-torus-quotient.
    #[arg(long, global = true)]
    pub case: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Pairs (or triples, for ring-axioms) drawn in sampled mode.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Replace the torsion group by (Q/Z)^R.
    #[arg(long, global = true)]
    pub torsion_rank: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// TOML file with defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Defaults read from a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub case: Option<String>,
    pub n: Option<usize>,
    pub mode: Option<ModeArg>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub torsion_rank: Option<usize>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: SurfaceModel,
    pub n: usize,
    pub format: Format,
    pub mode: Mode,
    pub jobs: Option<usize>,
    pub bounds: FeasibilityBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityBounds {
    pub exhaustive: usize,
    pub sampled: usize,
    pub series: usize,
}

impl Default for FeasibilityBounds {
    fn default() -> Self {
        Self { exhaustive: DEFAULT_EXHAUSTIVE_BOUND, sampled: DEFAULT_SAMPLED_BOUND, series: DEFAULT_SERIES_BOUND }
    }
}

impl FeasibilityBounds {
    /// Defaults, or `KP_MAX_N` for all three bounds when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_N_VAR) {
            Ok(v) => {
                let n = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("{MAX_N_VAR} must be a nonnegative integer, got `{v}`")))?;
                Ok(Self { exhaustive: n, sampled: n, series: n })
            }
            Err(_) => Ok(Self::default()),
        }
    }

    fn ensure(what: &str, n: usize, bound: usize) -> Result<()> {
        if n > bound {
            return Err(Error::Infeasible { what: what.into(), n, bound });
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn resolve(options: &Options, bounds: FeasibilityBounds) -> Result<Self> {
        let file: FileConfig = match &options.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let case = options.case.clone().or(file.case).unwrap_or_else(|| "abelian".into());
        let mut model = SurfaceModel::new(
            SurfaceCase::from_slug(&case).map_err(|_| Error::Usage(format!("unknown surface case `{case}`")))?,
        );
        if let Some(r) = options.torsion_rank.or(file.torsion_rank) {
            model = model.with_torsion_rank(r);
        }
        let n = options.n.or(file.n).unwrap_or(1);
        if n == 0 {
            return Err(Error::Usage("--n must be at least 1".into()));
        }
        let mode = match options.mode.or(file.mode).unwrap_or(ModeArg::Exhaustive) {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sampled => Mode::Sampled {
                samples: options.samples.or(file.samples).unwrap_or(10_000),
                seed: options.seed.or(file.seed).unwrap_or(0),
            },
        };
        Ok(Self {
            model,
            n,
            format: options.format.or(file.format).unwrap_or(Format::Text),
            mode,
            jobs: options.jobs.or(file.jobs),
            bounds,
        })
    }
}

/// Rendered output and whether every assertion held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub success: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = RunConfig::resolve(&cli.options, FeasibilityBounds::from_env()?)?;
    match cli.command {
        Command::Series { kind } => cmd_series(&config, kind).map(|output| Outcome { output, success: true }),
        Command::Check { kind } => cmd_check(&config, kind.into()),
        Command::Partitions => cmd_partitions(&config).map(|output| Outcome { output, success: true }),
    }
}

fn big_json(x: &BigUint) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

fn series_name(kind: SeriesKind) -> &'static str {
    match kind {
        SeriesKind::Hilbert => "hilbert",
        SeriesKind::Kummer => "kummer",
        SeriesKind::KummerQuotient => "kummer-quotient",
        SeriesKind::Surface => "surface",
    }
}

pub fn compute_series(model: &SurfaceModel, kind: SeriesKind, n: usize) -> Result<PerversePolynomial> {
    match kind {
        SeriesKind::Hilbert => decomp::hilbert_pp(model, n),
        SeriesKind::Kummer => decomp::kummer_pp(model, n),
        SeriesKind::KummerQuotient => decomp::kummer_quotient_pp(model, n),
        SeriesKind::Surface => Ok(model.cohomology_pp()),
    }
}

pub fn cmd_series(config: &RunConfig, kind: SeriesKind) -> Result<String> {
    FeasibilityBounds::ensure("series", config.n, config.bounds.series)?;
    let series = compute_series(&config.model, kind, config.n)?;
    let n = if kind == SeriesKind::Surface { 1 } else { config.n };
    Ok(render_series(&series, series_name(kind), config.model.case.slug(), n, config.format))
}

/// Renders a series as a (d × p) table followed by its Betti row.
pub fn render_series(series: &PerversePolynomial, name: &str, case: &str, n: usize, format: Format) -> String {
    let betti = series.betti();
    let max_d = series.max_degree().unwrap_or(0);
    let max_p = series.max_perversity().unwrap_or(0);
    let cell = |d: u32, p: u32| series.coefficient(d, p);
    let betti_row = betti.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "series": name,
                "case": case,
                "n": n,
                "polynomial": series.to_json(),
                "betti": betti.iter().map(big_json).collect::<Vec<_>>(),
            });
            out = serde_json::to_string_pretty(&value).expect("json") + "\n";
        }
        Format::Csv => {
            out.push_str("d,p,count\n");
            for (d, p, c) in series.terms() {
                let _ = writeln!(out, "{d},{p},{c}");
            }
        }
        Format::Latex => {
            let _ = writeln!(out, "% {name}, case {case}, n = {n}");
            let _ = writeln!(out, "\\begin{{tabular}}{{r|{}}}", "c".repeat(max_p as usize + 1));
            let header: Vec<String> = (0..=max_p).map(|p| format!("$p={p}$")).collect();
            let _ = writeln!(out, "$d$ & {} \\\\\n\\hline", header.join(" & "));
            for d in 0..=max_d {
                let row: Vec<String> = (0..=max_p).map(|p| cell(d, p).to_string()).collect();
                let _ = writeln!(out, "$H^{{{d}}}$ & {} \\\\", row.join(" & "));
            }
            let _ = writeln!(out, "\\end{{tabular}}\n% betti: {betti_row}");
        }
        Format::Text => {
            let width = series.terms().map(|(_, _, c)| c.to_string().len()).max().unwrap_or(1).max(3);
            let _ = writeln!(out, "{name} (case {case}, n = {n})");
            let _ = write!(out, "{:>5}", "d\\p");
            for p in 0..=max_p {
                let _ = write!(out, " {p:>width$}");
            }
            out.push('\n');
            for d in 0..=max_d {
                let _ = write!(out, "{d:>5}");
                for p in 0..=max_p {
                    let c = cell(d, p);
                    let shown = if c == BigUint::ZERO { ".".to_string() } else { c.to_string() };
                    let _ = write!(out, " {shown:>width$}");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "betti: {betti_row}");
        }
    }
    out
}

pub fn cmd_check(config: &RunConfig, kind: CheckKind) -> Result<Outcome> {
    let options = CheckOptions { mode: config.mode, jobs: config.jobs };
    let bound = |b: usize, what: &str| FeasibilityBounds::ensure(what, config.n, b);
    let model = &config.model;
    let n = config.n;
    let report = match kind {
        CheckKind::Multiplicativity | CheckKind::StrongSplitting => {
            match config.mode {
                Mode::Exhaustive => bound(config.bounds.exhaustive, "exhaustive checks")?,
                Mode::Sampled { .. } => bound(config.bounds.sampled, "sampled checks")?,
            }
            if kind == CheckKind::Multiplicativity {
                decomp::check_multiplicativity(model, n, options)?
            } else {
                decomp::check_strong_splitting(model, n, options)?
            }
        }
        CheckKind::Duality => {
            bound(config.bounds.exhaustive, "exhaustive checks")?;
            decomp::check_duality(model, n)?
        }
        CheckKind::Diagonal => {
            bound(config.bounds.exhaustive, "exhaustive checks")?;
            decomp::check_diagonal(model, n)?
        }
        CheckKind::RingAxioms => {
            bound(config.bounds.sampled, "sampled checks")?;
            let (samples, seed) = match config.mode {
                Mode::Sampled { samples, seed } => (samples, seed),
                Mode::Exhaustive => (1000, 0),
            };
            decomp::check_ring_axioms(model, n, samples, seed)?
        }
        CheckKind::Frobenius => decomp::check_frobenius(model)?,
    };
    Ok(Outcome { success: report.passed(), output: render_report(&report, config.format)? })
}

/// Renders a report. Text and CSV omit timing so they are byte-stable.
pub fn render_report(report: &CheckReport, format: Format) -> Result<String> {
    let mut out = String::new();
    match format {
        Format::Json => out = serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["alpha", "beta", "lambda", "sigma_tau", "p_alpha", "p_beta", "p_gamma", "detail"])
                .and_then(|_| {
                    report.violations.iter().try_for_each(|v| {
                        w.write_record([
                            v.alpha.clone(),
                            v.beta.clone(),
                            v.lambda.clone(),
                            v.sigma_tau.clone(),
                            v.p_alpha.to_string(),
                            v.p_beta.to_string(),
                            v.p_gamma.to_string(),
                            v.detail.clone().unwrap_or_default(),
                        ])
                    })
                })
                .map_err(|e| Error::Io(e.to_string()))?;
            out = csv_string(w)?;
        }
        Format::Latex => return Err(Error::Usage("latex output is only available for tables".into())),
        Format::Text => {
            let _ = writeln!(out, "check: {}", report.check);
            let _ = writeln!(out, "model: {}", report.model);
            let _ = writeln!(out, "n: {}", report.n);
            let _ = write!(out, "mode: {}", report.mode);
            if let Some(seed) = report.seed {
                let _ = write!(out, " (seed {seed})");
            }
            out.push('\n');
            let _ = writeln!(out, "pairs checked: {}", report.pairs_checked);
            let _ = writeln!(out, "components checked: {}", report.components_checked);
            let _ = writeln!(out, "components vanished by torsion: {}", report.components_vanished);
            let _ = writeln!(out, "violations: {}", report.violation_count);
            for v in &report.violations {
                let _ = write!(
                    out,
                    "  {} * {} -> {} {}: p = {} + {} vs {}",
                    v.alpha, v.beta, v.lambda, v.sigma_tau, v.p_alpha, v.p_beta, v.p_gamma
                );
                if let Some(d) = &v.detail {
                    let _ = write!(out, " ({d})");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "result: {}", if report.passed() { "pass" } else { "FAIL" });
        }
    }
    Ok(out)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn cmd_partitions(config: &RunConfig) -> Result<String> {
    FeasibilityBounds::ensure("partition tables", config.n, config.bounds.series)?;
    let mut rows = Vec::new();
    for nu in enumerate_partitions(config.n)? {
        let torsion = config.model.torsion_count(nu.gcd() as u32)?;
        rows.push((nu.to_string(), nu.len(), nu.gcd(), torsion, conjugacy_class_size(&nu)));
    }
    let mut out = String::new();
    match config.format {
        Format::Json => {
            let value: Vec<_> = rows
                .iter()
                .map(|(nu, l, g, t, c)| {
                    serde_json::json!({"nu": nu, "length": l, "gcd": g, "torsion": big_json(t), "class_size": big_json(c)})
                })
                .collect();
            out = serde_json::to_string_pretty(&value).expect("json") + "\n";
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["nu", "length", "gcd", "torsion", "class_size"])
                .and_then(|_| {
                    rows.iter().try_for_each(|(nu, l, g, t, c)| {
                        w.write_record([nu.clone(), l.to_string(), g.to_string(), t.to_string(), c.to_string()])
                    })
                })
                .map_err(|e| Error::Io(e.to_string()))?;
            out = csv_string(w)?;
        }
        Format::Latex => {
            out.push_str(
                "\\begin{tabular}{lrrrr}\n$\\nu$ & $l(\\nu)$ & $\\gcd$ & $|A[\\gcd]|$ & class size \\\\\n\\hline\n",
            );
            for (nu, l, g, t, c) in &rows {
                let _ = writeln!(out, "${nu}$ & {l} & {g} & {t} & {c} \\\\");
            }
            out.push_str("\\end{tabular}\n");
        }
        Format::Text => {
            let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(2).max(2);
            let _ =
                writeln!(out, "{:<w$}  {:>6}  {:>4}  {:>10}  {:>10}", "nu", "length", "gcd", "torsion", "class size");
            for (nu, l, g, t, c) in &rows {
                let _ = writeln!(out, "{nu:<w$}  {l:>6}  {g:>4}  {:>10}  {:>10}", t.to_string(), c.to_string());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("kummer-perverse").chain(args.iter().copied())).unwrap()
    }

    fn config(args: &[&str]) -> RunConfig {
        RunConfig::resolve(&parse(args).options, FeasibilityBounds::default()).unwrap()
    }

    #[test]
    fn surface_table_text() {
        let out = cmd_series(&config(&["series", "surface", "--case", "abelian"]), SeriesKind::Surface).unwrap();
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows[2].split_whitespace().collect::<Vec<_>>(), ["0", "1", ".", "."]);
        assert_eq!(rows[3].split_whitespace().collect::<Vec<_>>(), ["1", "2", "2", "."]);
        assert_eq!(rows[4].split_whitespace().collect::<Vec<_>>(), ["2", "1", "4", "1"]);
        assert_eq!(rows[5].split_whitespace().collect::<Vec<_>>(), ["3", ".", "2", "2"]);
        assert_eq!(rows[6].split_whitespace().collect::<Vec<_>>(), ["4", ".", ".", "1"]);
        assert_eq!(rows[7], "betti: 1 4 6 4 1");
    }

    #[test]
    fn betti_rows() {
        let c = config(&["series", "kummer-quotient", "--n", "2"]);
        assert!(cmd_series(&c, SeriesKind::KummerQuotient).unwrap().ends_with("betti: 1 0 22 0 1\n"));
        let c = config(&["series", "hilbert", "--case", "e-times-line", "--n", "2"]);
        assert!(cmd_series(&c, SeriesKind::Hilbert).unwrap().ends_with("betti: 1 2 3 4 2\n"));
    }

    #[test]
    fn other_formats() {
        let c = config(&["series", "surface", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&cmd_series(&c, SeriesKind::Surface).unwrap()).unwrap();
        assert_eq!(v["betti"], serde_json::json!([1, 4, 6, 4, 1]));
        let c = config(&["series", "surface", "--format", "csv"]);
        let csv = cmd_series(&c, SeriesKind::Surface).unwrap();
        assert!(csv.starts_with("d,p,count\n0,0,1\n1,0,2\n"));
        let c = config(&["series", "surface", "--format", "latex"]);
        assert!(cmd_series(&c, SeriesKind::Surface).unwrap().contains("$H^{2}$ & 1 & 4 & 1 \\\\"));
    }

    #[test]
    fn partition_tables() {
        let out = cmd_partitions(&config(&["partitions", "--n", "2", "--format", "csv"])).unwrap();
        assert_eq!(out, "nu,length,gcd,torsion,class_size\n(2),1,2,16,1\n\"(1,1)\",2,1,1,1\n");
        let out = cmd_partitions(&config(&["partitions", "--n", "4"])).unwrap();
        assert_eq!(out.lines().count(), 6);
        let out = cmd_partitions(&config(&["partitions", "--n", "1", "--format", "csv"])).unwrap();
        assert_eq!(out.lines().nth(1), Some("(1),1,1,1,1"));
    }

    #[test]
    fn feasibility_and_usage_errors() {
        let c = config(&["check", "multiplicativity", "--n", "9"]);
        assert!(matches!(cmd_check(&c, CheckKind::Multiplicativity), Err(Error::Infeasible { n: 9, bound: 3, .. })));
        let c = config(&["check", "multiplicativity", "--n", "5", "--mode", "sampled"]);
        let raised = RunConfig { bounds: FeasibilityBounds { exhaustive: 3, sampled: 4, series: 12 }, ..c };
        assert!(matches!(cmd_check(&raised, CheckKind::Multiplicativity), Err(Error::Infeasible { .. })));
        assert!(
            RunConfig::resolve(&parse(&["partitions", "--case", "k3"]).options, FeasibilityBounds::default()).is_err()
        );
        assert!(RunConfig::resolve(&parse(&["partitions", "--n", "0"]).options, FeasibilityBounds::default()).is_err());
        assert!(Cli::try_parse_from(["kummer-perverse", "series", "moduli"]).is_err());
        assert!(Cli::try_parse_from(["kummer-perverse", "series", "surface", "--format", "xml"]).is_err());
    }

    #[test]
    fn check_outcomes() {
        let out = cmd_check(&config(&["check", "duality", "--n", "2"]), CheckKind::Duality).unwrap();
        assert!(out.success);
        assert!(out.output.ends_with("result: pass\n"));
        let out = cmd_check(&config(&["check", "frobenius", "--format", "json"]), CheckKind::Frobenius).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
        assert_eq!(v["violations"], serde_json::json!([]));
        let c =
            config(&["check", "strong-splitting", "--n", "2", "--mode", "sampled", "--samples", "50", "--seed", "3"]);
        let a = cmd_check(&c, CheckKind::StrongSplitting).unwrap();
        assert_eq!(a, cmd_check(&c, CheckKind::StrongSplitting).unwrap());
        assert!(a.output.contains("mode: sampled (seed 3)"));
    }

    #[test]
    fn config_file_supplies_defaults() {
        let dir = std::env::temp_dir().join(format!("kp-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "case = \"e-times-line\"\nn = 2\nformat = \"csv\"\n").unwrap();
        let p = path.to_str().unwrap();
        let c = config(&["series", "hilbert", "--config", p]);
        assert_eq!(c.model.case, SurfaceCase::EllipticTimesLine);
        assert_eq!((c.n, c.format), (2, Format::Csv));
        let c = config(&["series", "hilbert", "--config", p, "--n", "3"]);
        assert_eq!(c.n, 3);
        std::fs::write(&path, "colour = 1\n").unwrap();
        assert!(
            RunConfig::resolve(&parse(&["partitions", "--config", p]).options, FeasibilityBounds::default()).is_err()
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 not integrable,
//! 3 undecided within budget, 4 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{product_handle, FunctionHandle, FunctionSpec, Interval};
use crate::harness::{self, VerificationReport};
use crate::integrator::{
    decide_riemann_integrable, integrate_rs_reduced, Controls, IndefiniteIntegral,
    IntegrabilityVerdict, Provenance, DEFAULT_BUDGET, DEFAULT_TOL,
};
use crate::numeric::DEFAULT_SLACK;
use crate::partition::{tag, Partition, TagStrategy};
use crate::sums::{riemann_sum, rs_sum, rs_vs_riemann_gap_bound};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_INTEGRABLE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Options shared by every subcommand. Flags override `STIELTJES_*`
/// environment variables, which override the defaults.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Target radius of the certified enclosure.
    #[arg(long, global = true, env = "STIELTJES_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Maximum number of subintervals in a working partition.
    #[arg(long, global = true, env = "STIELTJES_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Seed for the random instances of `verify`.
    #[arg(long, global = true, env = "STIELTJES_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Rounding slack added per reduction to certified radii.
    #[arg(long, global = true, env = "STIELTJES_SLACK", default_value_t = DEFAULT_SLACK)]
    pub slack: f64,
    #[arg(long, global = true, env = "STIELTJES_FORMAT", value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write results here instead of standard output.
    #[arg(long, global = true, env = "STIELTJES_OUT")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn controls(&self) -> anyhow::Result<Controls> {
        let c = Controls {
            tol: self.tol,
            budget: self.budget,
            slack: self.slack,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "stieltjes",
    version,
    about = "Certified Riemann–Stieltjes integration"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enclose ∫ f dG for G = c + ∫ g.
    Integrate {
        /// Function spec: inline JSON or a path to a JSON file.
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c: f64,
        /// `lo,hi`; defaults to the domain declared by f, else [0, 1].
        #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
        domain: Option<Interval>,
    },
    /// Decide Riemann integrability of h.
    Decide {
        #[arg(long)]
        h: String,
        #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
        domain: Option<Interval>,
    },
    /// Run a verification corpus: a JSON file or `default`.
    Verify {
        #[arg(default_value = "default")]
        corpus: String,
    },
    /// Convergence table of |Riemann sum of f·g − RS sum| against its bound.
    Table {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
        domain: Option<Interval>,
        /// Comma-separated, positive and descending.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<f64>,
    },
}

fn parse_domain(s: &str) -> Result<Interval, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(format!("expected `lo,hi`, got {s:?}"));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: f64 = hi
        .parse()
        .map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    Interval::domain(lo, hi).map_err(|e| e.to_string())
}

fn load_spec(arg: &str) -> anyhow::Result<FunctionSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading function spec {arg}"))?
    };
    FunctionSpec::from_json(&text).with_context(|| format!("parsing function spec {arg}"))
}

fn resolve_domain(explicit: Option<Interval>, spec: &FunctionSpec) -> Interval {
    explicit
        .or_else(|| spec.declared_domain())
        .unwrap_or_else(Interval::unit)
}

/// `%.12g`-style rendering for human output.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Flat view of a verdict for printing.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mid: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_spent: Option<usize>,
}

impl VerdictRecord {
    pub fn from_verdict(v: &IntegrabilityVerdict) -> Self {
        let e = v.enclosure();
        let (gap_floor, best_gap, budget_spent) = match v {
            IntegrabilityVerdict::NotIntegrable(n) => (Some(n.gap_floor), None, None),
            IntegrabilityVerdict::Undecided(u) => (None, Some(u.best_gap), Some(u.budget_spent)),
            IntegrabilityVerdict::Integrable(_) => (None, None, None),
        };
        VerdictRecord {
            verdict: v.name(),
            mid: e.map(|e| e.mid),
            rad: e.map(|e| e.rad),
            provenance: e.map(|e| e.provenance),
            gap_floor,
            best_gap,
            budget_spent,
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("verdict", self.verdict.to_string())];
        let num = |k, v: Option<f64>| v.map(|v| (k, v.to_string()));
        out.extend(num("mid", self.mid));
        out.extend(num("rad", self.rad));
        out.extend(self.provenance.map(|p| ("provenance", p.to_string())));
        out.extend(num("gap_floor", self.gap_floor));
        out.extend(num("best_gap", self.best_gap));
        out.extend(self.budget_spent.map(|b| ("budget_spent", b.to_string())));
        out
    }

    /// `key=value` pairs with round-trip decimal numbers.
    pub fn machine_line(&self) -> String {
        self.fields()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn human(&self, what: &str) -> String {
        let head = match (self.mid, self.rad, self.gap_floor) {
            (Some(m), Some(r), _) => {
                format!("{what} = {} ± {} ({})", sig12(m), sig12(r), self.verdict)
            }
            (_, _, Some(g)) => format!(
                "{what}: not integrable (Darboux gap at least {} on every partition)",
                sig12(g)
            ),
            _ => format!("{what}: {}", self.verdict),
        };
        format!("{head}\n{}\n", self.machine_line())
    }

    fn csv(&self) -> String {
        let f = self.fields();
        let keys: Vec<_> = f.iter().map(|(k, _)| *k).collect();
        let vals: Vec<_> = f.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", keys.join(","), vals.join(","))
    }

    fn render(&self, format: Format, what: &str) -> String {
        match format {
            Format::Human => self.human(what),
            Format::Csv => self.csv(),
            Format::Json => format!(
                "{}\n",
                serde_json::to_string(self).expect("records serialize")
            ),
        }
    }
}

pub fn exit_code(v: &IntegrabilityVerdict) -> i32 {
    match v {
        IntegrabilityVerdict::Integrable(_) => EXIT_OK,
        IntegrabilityVerdict::NotIntegrable(_) => EXIT_NOT_INTEGRABLE,
        IntegrabilityVerdict::Undecided(_) => EXIT_UNDECIDED,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub mesh: f64,
    pub spread: f64,
    pub bound: f64,
}

const TABLE_TAGS: [TagStrategy; 5] = [
    TagStrategy::Left,
    TagStrategy::Right,
    TagStrategy::Midpoint,
    TagStrategy::InfSeeking,
    TagStrategy::SupSeeking,
];

/// One row per mesh on uniform partitions: the largest observed
/// `|riemann_sum(f·g) − rs_sum(f, G)|` over five taggings, and the bound
/// `sup|f|·Σ osc(g)·w`.
pub fn convergence_table(
    f: &FunctionHandle,
    g: &FunctionHandle,
    c: f64,
    meshes: &[f64],
    controls: &Controls,
) -> anyhow::Result<Vec<TableRow>> {
    if meshes.is_empty() {
        bail!("no meshes given");
    }
    if meshes.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        bail!("meshes must be positive and finite");
    }
    if meshes.windows(2).any(|w| w[1] >= w[0]) {
        bail!("meshes must be strictly descending");
    }
    let fg = product_handle(f, g)?;
    let big = IndefiniteIntegral::new(g, c, controls)?;
    let d = f.domain();
    let mut rows = Vec::with_capacity(meshes.len());
    for &m in meshes {
        let n = ((d.width() / m) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let p = Partition::uniform(d, n)?;
        let mut spread = 0.0f64;
        for strategy in TABLE_TAGS {
            let tp = tag(&p, strategy, Some(f))?;
            let a = riemann_sum(&fg, &tp)?.value;
            let b = rs_sum(f, &big, &tp)?.value;
            spread = spread.max((a - b).abs());
        }
        rows.push(TableRow {
            mesh: p.mesh(),
            spread,
            bound: rs_vs_riemann_gap_bound(f, g, &p)?,
        });
    }
    Ok(rows)
}

fn render_table(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(rows).expect("rows serialize")),
        Format::Csv => {
            let mut s = String::from("mesh,spread,bound\n");
            for r in rows {
                s.push_str(&format!("{},{},{}\n", r.mesh, r.spread, r.bound));
            }
            s
        }
        Format::Human => {
            let mut s = format!("{:>20} {:>20} {:>20}\n", "mesh", "spread", "bound");
            for r in rows {
                s.push_str(&format!(
                    "{:>20} {:>20} {:>20}\n",
                    sig12(r.mesh),
                    sig12(r.spread),
                    sig12(r.bound)
                ));
            }
            s
        }
    }
}

fn render_reports(reports: &[VerificationReport], format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => harness::to_jsonl(reports),
        Format::Csv => harness::to_csv(reports)?,
        Format::Human => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&format!(
                    "{} {} [{}] residual={} bound={}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.scenario,
                    r.statement_id,
                    sig12(r.residual),
                    sig12(r.bound)
                ));
                for f in &r.failures {
                    s.push_str(&format!("    {f}\n"));
                }
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            s.push_str(&format!(
                "passed={passed} failed={}\n",
                reports.len() - passed
            ));
            s
        }
    })
}

fn emit(config: &RunConfig, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    match &config.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn load_corpus(arg: &str) -> anyhow::Result<Vec<harness::Scenario>> {
    if arg == "default" {
        return Ok(harness::default_corpus());
    }
    harness::load_corpus(Path::new(arg)).with_context(|| format!("loading corpus {arg}"))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let config = &cli.config;
    let controls = config.controls()?;
    match &cli.command {
        Command::Integrate { f, g, c, domain } => {
            let fs = load_spec(f)?;
            let d = resolve_domain(*domain, &fs);
            let fh = fs.build(d)?;
            let gh = load_spec(g)?.build(d)?;
            let v = integrate_rs_reduced(&fh, &gh, *c, &controls)?;
            emit(
                config,
                &VerdictRecord::from_verdict(&v).render(config.format, "∫ f dG"),
                out,
            )?;
            Ok(exit_code(&v))
        }
        Command::Decide { h, domain } => {
            let hs = load_spec(h)?;
            let hh = hs.build(resolve_domain(*domain, &hs))?;
            let v = decide_riemann_integrable(&hh, &controls)?;
            emit(
                config,
                &VerdictRecord::from_verdict(&v).render(config.format, "∫ h"),
                out,
            )?;
            Ok(exit_code(&v))
        }
        Command::Verify { corpus } => {
            let scenarios = load_corpus(corpus)?;
            let summary = harness::run_all(&scenarios, config.seed, config.slack);
            emit(
                config,
                &render_reports(&summary.reports, config.format)?,
                out,
            )?;
            Ok(if summary.all_passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Table {
            f,
            g,
            c,
            domain,
            meshes,
        } => {
            let fs = load_spec(f)?;
            let d = resolve_domain(*domain, &fs);
            let rows = convergence_table(
                &fs.build(d)?,
                &load_spec(g)?.build(d)?,
                *c,
                meshes,
                &controls,
            )?;
            emit(config, &render_table(&rows, config.format), out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

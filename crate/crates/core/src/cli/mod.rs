//! Command-line front end.
//!
//! Every command writes plain text (CSV or wave records) preceded by one
//! `# effective config:` line. Exit status is 0 on success, 2 for bad
//! configuration and 3 for numerical failure.

mod config;

pub use config::{BetaSpec, Command, NormSpec, RunConfig, Settings, HEADER_PREFIX, KEYS};

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::gpw::{basis_direction, basis_set, design_gpw};
use crate::interp::{
    build_mn, build_mnc_with_directions, convergence_study, hd_csv, hd_sweep, ln_factorization, n_sweep,
    n_sweep_csv, rank_diagnostics, study_csv, Scenario, STUDY_HEADER,
};
use crate::special::airy_plane_solution;
use crate::uwvf::{
    airy_domain, assemble, build_mesh, center_error, field_dump_csv, uwvf_csv, ImpedanceTrace, UwvfParams, UwvfRow,
    UWVF_HEADER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "GPW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gpw", version, about = "Generalized plane wave design, interpolation studies and UWVF solves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Design one wave (with --theta) or a full basis and print the records.
    Design(Opts),
    /// Local interpolation convergence study of the Airy solution.
    InterpStudy(Opts),
    /// Numerical rank of the Taylor matrices and the triangular factor residual.
    RankCheck(Opts),
    /// Fit coefficients as the normalization |N| goes to zero.
    NSweep(Opts),
    /// UWVF solve of the Airy problem on a uniform mesh.
    UwvfSolve(Opts),
}

/// Flags shared by all commands. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// File of `key = value` lines using the flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// propagative, nonpropagative, toward-cutoff, on-cutoff or hd-sweep.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Approximation order of each wave (default n + 1).
    #[arg(long)]
    pub q: Option<String>,
    /// Number of directions (default 2n + 1).
    #[arg(long)]
    pub p: Option<String>,
    /// beta, const, custom:RE,IM or pw.
    #[arg(long)]
    pub norm: Option<String>,
    /// boole5, weddle7 or nc10.
    #[arg(long)]
    pub quad: Option<String>,
    /// Cell counts as NXxNY.
    #[arg(long)]
    pub mesh: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Boundary reflection coefficient in [0, 1).
    #[arg(long = "Q")]
    pub q_refl: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// affine, constant:C or cutoff:KAPPA.
    #[arg(long)]
    pub beta: Option<String>,
    /// Anchor as X,Y.
    #[arg(long = "G", allow_hyphen_values = true)]
    pub anchor: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Comma separated disk radii.
    #[arg(long)]
    pub h: Option<String>,
    /// Comma separated distances to the cut-off (hd-sweep).
    #[arg(long)]
    pub d: Option<String>,
    /// MAX,MIN of |N| for n-sweep.
    #[arg(long = "n-range")]
    pub n_range: Option<String>,
    /// Extra random anchors for rank-check.
    #[arg(long)]
    pub samples: Option<String>,
    /// Allow q < n + 1 and p != 2n + 1.
    #[arg(long = "override")]
    pub override_checks: bool,
    /// Write the cell-centre field of a UWVF solve to this file.
    #[arg(long)]
    pub dump: Option<String>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<String>,
}

impl Opts {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let pairs = [
            ("scenario", &self.scenario),
            ("n", &self.n),
            ("q", &self.q),
            ("p", &self.p),
            ("norm", &self.norm),
            ("quad", &self.quad),
            ("mesh", &self.mesh),
            ("gamma", &self.gamma),
            ("Q", &self.q_refl),
            ("seed", &self.seed),
            ("beta", &self.beta),
            ("G", &self.anchor),
            ("theta", &self.theta),
            ("h", &self.h),
            ("d", &self.d),
            ("n-range", &self.n_range),
            ("samples", &self.samples),
            ("dump", &self.dump),
            ("out", &self.out),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.as_str())?;
            }
        }
        if self.override_checks {
            s.set("override", "true")?;
        }
        Ok(s)
    }
}

/// Merges the config file (if any) under the flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let (command, opts) = match &cli.command {
        CliCommand::Design(o) => (Command::Design, o),
        CliCommand::InterpStudy(o) => (Command::InterpStudy, o),
        CliCommand::RankCheck(o) => (Command::RankCheck, o),
        CliCommand::NSweep(o) => (Command::NSweep, o),
        CliCommand::UwvfSolve(o) => (Command::UwvfSolve, o),
    };
    let mut base = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GpwError::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            Settings::parse_file(&text)?
        }
        None => Settings::default(),
    };
    base.set("command", command.id())?;
    base.merged(&opts.settings()?).resolve()
}

/// Output of one command: the main text and an optional field dump.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub dump: Option<String>,
}

/// Runs a resolved configuration. Some commands report a numerical failure
/// after producing their table; the table is then returned alongside it.
pub fn run(cfg: &RunConfig) -> (Option<RunOutput>, Option<GpwError>) {
    let mut text = cfg.header();
    text.push('\n');
    let body = match cfg.command {
        Command::Design => run_design(cfg).map(|b| (b, None)),
        Command::InterpStudy => run_interp_study(cfg).map(|b| (b, None)),
        Command::RankCheck => run_rank_check(cfg),
        Command::NSweep => run_n_sweep(cfg).map(|b| (b, None)),
        Command::UwvfSolve => return run_uwvf(cfg, text),
    };
    match body {
        Ok((b, err)) => {
            text.push_str(&b);
            (Some(RunOutput { text, dump: None }), err)
        }
        Err(e) => (None, Some(e)),
    }
}

fn require_airy(cfg: &RunConfig) -> Result<()> {
    if cfg.beta != BetaSpec::Affine {
        return Err(GpwError::InvalidArgument(format!(
            "{} uses the Airy solution, which needs beta = affine",
            cfg.command.id()
        )));
    }
    Ok(())
}

fn require_default_qp(cfg: &RunConfig) -> Result<()> {
    if cfg.q != cfg.n + 1 || cfg.p != 2 * cfg.n + 1 {
        return Err(GpwError::InvalidArgument(format!(
            "{} always uses q = n + 1 and p = 2n + 1",
            cfg.command.id()
        )));
    }
    Ok(())
}

fn run_design(cfg: &RunConfig) -> Result<String> {
    let field = cfg.beta.field();
    let norm = cfg.norm.normalization()?;
    let waves = match cfg.theta {
        Some(theta) => vec![design_gpw(field.as_ref(), cfg.anchor, cfg.q, theta, norm)?],
        None => basis_set(field.as_ref(), cfg.anchor, cfg.q, cfg.p, norm)?,
    };
    Ok(waves.iter().map(|w| w.to_record()).collect())
}

fn run_interp_study(cfg: &RunConfig) -> Result<String> {
    require_airy(cfg)?;
    require_default_qp(cfg)?;
    if cfg.scenario == Scenario::HdSweep {
        let sweep = hd_sweep(cfg.n, cfg.norm.normalization()?, &cfg.radii, &cfg.distances)?;
        return Ok(hd_csv(&sweep));
    }
    let basis = cfg.norm.study_basis();
    let rows = convergence_study(cfg.scenario, cfg.n, basis, &cfg.radii)?;
    Ok(format!("{STUDY_HEADER}\n{}", study_csv(cfg.scenario, cfg.n, basis, &rows)))
}

/// Anchor list: the configured one, then `samples` uniform draws on the
/// Airy domain (anchors with `|beta| < 1e-3` are redrawn).
fn rank_anchors(cfg: &RunConfig) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d = airy_domain();
    let field = cfg.beta.field();
    let mut out = vec![cfg.anchor];
    while out.len() < cfg.samples + 1 {
        let g = Point::new(rng.gen_range(d.x0..d.x1), rng.gen_range(d.y0..d.y1));
        if field.value(g).norm() >= 1e-3 {
            out.push(g);
        }
    }
    out
}

fn run_rank_check(cfg: &RunConfig) -> Result<(String, Option<GpwError>)> {
    let field = cfg.beta.field();
    let norm = cfg.norm.normalization()?;
    let required = 2 * cfg.n + 1;
    let mut s = String::from("x,y,norm,n,p,matrix,rank,required,sigma_max,sigma_min,condition,ln_residual\n");
    let mut failure = None;
    for g in rank_anchors(cfg) {
        let basis = basis_set(field.as_ref(), g, cfg.q, cfg.p, norm)?;
        let thetas: Vec<f64> = (0..cfg.p).map(|l| basis_direction(l, cfg.p)).collect();
        let mnc = build_mnc_with_directions(basis[0].n(), cfg.n, &thetas)?;
        let mn = build_mn(&basis, cfg.n)?;
        let residual = ln_factorization(&basis, cfg.n)?.1;
        for (name, m, res) in [("mnc", &mnc, None), ("mn", &mn, Some(residual))] {
            let diag = rank_diagnostics(m);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6e},{}",
                g.x,
                g.y,
                cfg.norm,
                cfg.n,
                cfg.p,
                name,
                diag.rank,
                required,
                diag.singular_values.first().copied().unwrap_or(0.0),
                diag.singular_values.last().copied().unwrap_or(0.0),
                diag.condition(),
                res.map(|r| format!("{r:.3e}")).unwrap_or_default()
            );
            if diag.rank < required && failure.is_none() {
                failure = Some(GpwError::RankDeficient { rank: diag.rank, required });
            }
        }
    }
    Ok((s, failure))
}

fn run_n_sweep(cfg: &RunConfig) -> Result<String> {
    require_airy(cfg)?;
    require_default_qp(cfg)?;
    let (max, min) = cfg.n_range;
    let mut values = Vec::new();
    let mut a = max;
    while a >= min * (1.0 - 1e-12) {
        values.push(Complex64::new(0.0, a));
        a *= 0.5;
    }
    let field = cfg.beta.field();
    let rows = n_sweep(field.as_ref(), &airy_plane_solution(), cfg.anchor, cfg.n, &values)?;
    Ok(n_sweep_csv(&rows))
}

fn run_uwvf(cfg: &RunConfig, mut text: String) -> (Option<RunOutput>, Option<GpwError>) {
    let solved = (|| {
        require_airy(cfg)?;
        require_default_qp(cfg)?;
        let params = UwvfParams {
            n: cfg.n,
            norm: cfg.norm.normalization()?,
            gamma: cfg.gamma,
            q: cfg.q_refl,
            quad: cfg.quad,
        };
        let mesh = build_mesh(airy_domain(), cfg.mesh.0, cfg.mesh.1, &[])?;
        let u = airy_plane_solution();
        let sys = assemble(&mesh, &crate::special::field_affine(), params, &ImpedanceTrace(&u))?;
        let sol = sys.solve()?;
        let row = UwvfRow {
            h: mesh.side(),
            dofs: sys.dofs(),
            error: center_error(&sys, &sol.x, &u)?,
            cond_estimate: sol.cond_estimate,
            saturated: false,
        };
        let dump = cfg.dump.as_ref().map(|_| field_dump_csv(&sys, &sol.x));
        Ok((format!("{UWVF_HEADER}\n{}", uwvf_csv(&params, &[row])), dump))
    })();
    match solved {
        Ok((body, dump)) => {
            text.push_str(&body);
            (Some(RunOutput { text, dump }), None)
        }
        Err(e) => (None, Some(e)),
    }
}

pub fn exit_code(err: &GpwError) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn write_output(cfg: &RunConfig, out: &RunOutput) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(out.text.as_bytes())?;
        }
    }
    if let (Some(path), Some(dump)) = (&cfg.dump, &out.dump) {
        std::fs::write(path, dump)?;
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| GpwError::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        // fails only if the pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cfg = match configure_threads().and_then(|_| resolve(&cli)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let (out, err) = run(&cfg);
    if let Some(out) = out {
        if let Err(e) = write_output(&cfg, &out) {
            eprintln!("error: cannot write output: {e}");
            return EXIT_CONFIG;
        }
    }
    match err {
        None => EXIT_OK,
        Some(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut v = vec!["gpw"];
        v.extend_from_slice(args);
        resolve(&Cli::try_parse_from(v).unwrap()).unwrap()
    }

    #[test]
    fn negative_values_parse() {
        let c = cfg(&["design", "--G", "-3,1", "--theta", "-0.5", "--q", "3"]);
        assert_eq!(c.anchor, Point::new(-3.0, 1.0));
        assert_eq!(c.theta, Some(-0.5));
    }

    #[test]
    fn design_record() {
        let c = cfg(&["design", "--beta", "affine", "--G", "2,1", "--q", "3", "--norm", "const", "--theta", "0"]);
        let (out, err) = run(&c);
        assert!(err.is_none());
        let text = out.unwrap().text;
        assert!(text.starts_with(HEADER_PREFIX));
        assert!(text.lines().any(|l| l == "lambda 2 0 1 0"));
        let w = crate::Gpw::from_record(&text).unwrap();
        assert_eq!(w.lambda(2, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rank_check_rows() {
        let c = cfg(&["rank-check", "--n", "2", "--G", "2,1", "--samples", "2", "--seed", "7"]);
        let (out, err) = run(&c);
        assert!(err.is_none());
        let text = out.unwrap().text;
        // header comment, column header, 2 matrices x 3 anchors
        assert_eq!(text.lines().count(), 2 + 6);
        assert!(text.lines().skip(2).all(|l| l.split(',').nth(6) == Some("5")));
    }

    #[test]
    fn rank_deficiency_is_numerical() {
        let c = cfg(&["rank-check", "--n", "2", "--p", "4", "--override"]);
        let (_, err) = run(&c);
        let e = err.unwrap();
        assert!(e.is_numerical());
        assert_eq!(exit_code(&e), EXIT_NUMERICAL);
    }

    #[test]
    fn config_errors_exit_two() {
        assert_eq!(main_with_args(["gpw", "design", "--norm", "nope"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["gpw", "interp-study", "--n", "3", "--q", "2"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["gpw", "frobnicate"]), EXIT_CONFIG);
    }

    #[test]
    fn pw_only_for_studies() {
        let c = cfg(&["design", "--norm", "pw", "--q", "2"]);
        assert!(matches!(run(&c).1, Some(GpwError::InvalidArgument(_))));
    }
}

//! Run configuration: defaults, `key = value` files, flags and the
//! effective-config header written on top of every output.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::gpw::{CoefficientField, Normalization};
use crate::interp::{Scenario, StudyBasis};
use crate::special::{field_affine, field_constant, field_cutoff_profile};
use crate::uwvf::QuadratureRule;

pub const HEADER_PREFIX: &str = "# effective config:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Design,
    InterpStudy,
    RankCheck,
    NSweep,
    UwvfSolve,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Design,
        Command::InterpStudy,
        Command::RankCheck,
        Command::NSweep,
        Command::UwvfSolve,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Command::Design => "design",
            Command::InterpStudy => "interp-study",
            Command::RankCheck => "rank-check",
            Command::NSweep => "n-sweep",
            Command::UwvfSolve => "uwvf-solve",
        }
    }
}

impl FromStr for Command {
    type Err = GpwError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| GpwError::Parse(format!("unknown command '{s}'")))
    }
}

/// Coefficient `beta`: `affine` (`x - 1`), `constant:c` or `cutoff:kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSpec {
    Affine,
    Constant(f64),
    Cutoff(f64),
}

impl BetaSpec {
    pub fn field(self) -> Box<dyn CoefficientField> {
        match self {
            BetaSpec::Affine => Box::new(field_affine()),
            BetaSpec::Constant(c) => Box::new(field_constant(c)),
            BetaSpec::Cutoff(k) => Box::new(field_cutoff_profile(k)),
        }
    }
}

impl fmt::Display for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSpec::Affine => f.write_str("affine"),
            BetaSpec::Constant(c) => write!(f, "constant:{c}"),
            BetaSpec::Cutoff(k) => write!(f, "cutoff:{k}"),
        }
    }
}

impl FromStr for BetaSpec {
    type Err = GpwError;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "affine" => Ok(BetaSpec::Affine),
            Some(("constant", c)) => Ok(BetaSpec::Constant(float(c)?)),
            Some(("cutoff", k)) => Ok(BetaSpec::Cutoff(float(k)?)),
            _ => Err(GpwError::Parse(format!("unknown beta '{s}' (affine, constant:c, cutoff:kappa)"))),
        }
    }
}

/// `beta`, `const`, `custom:re,im`, or `pw` (classical plane waves, studies only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Gpw(Normalization),
    PlaneWave,
}

impl NormSpec {
    pub fn normalization(self) -> Result<Normalization> {
        match self {
            NormSpec::Gpw(n) => Ok(n),
            NormSpec::PlaneWave => Err(GpwError::InvalidArgument(
                "norm 'pw' is only available for interp-study".into(),
            )),
        }
    }

    pub fn study_basis(self) -> StudyBasis {
        match self {
            NormSpec::Gpw(n) => StudyBasis::Gpw(n),
            NormSpec::PlaneWave => StudyBasis::PlaneWave,
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Gpw(Normalization::Custom(n)) => write!(f, "custom:{},{}", n.re, n.im),
            NormSpec::Gpw(n) => f.write_str(n.label()),
            NormSpec::PlaneWave => f.write_str("pw"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = GpwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(NormSpec::Gpw(Normalization::BetaLocal)),
            "const" => Ok(NormSpec::Gpw(Normalization::ConstantI)),
            "pw" => Ok(NormSpec::PlaneWave),
            _ => match s.strip_prefix("custom:") {
                Some(v) => {
                    let (re, im) = pair(v)?;
                    Ok(NormSpec::Gpw(Normalization::Custom(Complex64::new(re, im))))
                }
                None => Err(GpwError::Parse(format!("unknown norm '{s}' (beta, const, custom:re,im, pw)"))),
            },
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Scenario,
    pub n: usize,
    pub q: usize,
    pub p: usize,
    pub norm: NormSpec,
    pub quad: QuadratureRule,
    pub mesh: (usize, usize),
    pub gamma: f64,
    /// Boundary reflection coefficient.
    pub q_refl: f64,
    pub seed: u64,
    pub beta: BetaSpec,
    pub anchor: Point,
    /// Single direction for `design`; all `p` directions when absent.
    pub theta: Option<f64>,
    /// Disk radii for `interp-study`.
    pub radii: Vec<f64>,
    /// Distances to the cut-off for the h-d sweep.
    pub distances: Vec<f64>,
    /// `|N|` from the first value, halved down to the second (`n-sweep`).
    pub n_range: (f64, f64),
    /// Random anchors checked by `rank-check` besides `anchor`.
    pub samples: usize,
    pub override_checks: bool,
    pub dump: Option<String>,
    pub out: Option<String>,
}

/// Unresolved settings as given in a file, a header or on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub values: Vec<(String, String)>,
}

/// Keys in header order; `out` is last so it may contain spaces.
pub const KEYS: [&str; 21] = [
    "command", "scenario", "n", "q", "p", "norm", "quad", "mesh", "gamma", "Q", "seed", "beta", "G", "theta", "h",
    "d", "n-range", "samples", "override", "dump", "out",
];

impl Settings {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(GpwError::Parse(format!("unknown config key '{key}'")));
        }
        self.values.push((key.to_string(), value.into()));
        Ok(())
    }

    /// Entries of `over` replace those of `self`.
    pub fn merged(mut self, over: &Settings) -> Settings {
        self.values.extend(over.values.iter().cloned());
        self
    }

    /// `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_file(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| GpwError::Parse(format!("line {}: expected key = value", no + 1)))?;
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    /// Inverse of [`RunConfig::header`].
    pub fn parse_header(line: &str) -> Result<Settings> {
        let body = line
            .trim_end_matches(['\r', '\n'])
            .strip_prefix(HEADER_PREFIX)
            .ok_or_else(|| GpwError::Parse("missing effective config prefix".into()))?;
        let (body, out) = match body.split_once(" out=") {
            Some((b, o)) => (b, Some(o)),
            None => (body, None),
        };
        let mut s = Settings::default();
        for tok in body.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| GpwError::Parse(format!("bad header token '{tok}'")))?;
            s.set(k, v)?;
        }
        if let Some(o) = out {
            s.set("out", o)?;
        }
        Ok(s)
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let command: Command = self
            .get("command")
            .ok_or_else(|| GpwError::Parse("no command given".into()))?
            .parse()?;
        let scenario: Scenario = self.get("scenario").unwrap_or("propagative").parse()?;
        let q_given = self.get("q").map(int).transpose()?;
        let n = match (self.get("n"), q_given) {
            (Some(v), _) => int(v)?,
            (None, Some(q)) if command == Command::Design => q.saturating_sub(1).max(1),
            _ => 2,
        };
        let q = q_given.unwrap_or(n + 1);
        let p = self.get("p").map(int).transpose()?.unwrap_or(2 * n + 1);
        let quad = match self.get("quad") {
            Some(v) => v.parse()?,
            None => crate::uwvf::UwvfParams::new(n.max(1), Normalization::BetaLocal).quad,
        };
        let anchor = match self.get("G") {
            Some(v) => {
                let (x, y) = pair(v)?;
                Point::new(x, y)
            }
            None => scenario.anchor(0.0, 0.0),
        };
        let cfg = RunConfig {
            command,
            scenario,
            n,
            q,
            p,
            norm: self.get("norm").unwrap_or("beta").parse()?,
            quad,
            mesh: self.get("mesh").map(mesh).transpose()?.unwrap_or((18, 4)),
            gamma: self.get("gamma").map(float).transpose()?.unwrap_or(1.0),
            q_refl: self.get("Q").map(float).transpose()?.unwrap_or(0.0),
            seed: self.get("seed").map(|v| v.parse::<u64>().map_err(|_| bad("seed", v))).transpose()?.unwrap_or(0),
            beta: self.get("beta").unwrap_or("affine").parse()?,
            anchor,
            theta: match self.get("theta") {
                None | Some("") => None,
                Some(v) => Some(float(v)?),
            },
            radii: match self.get("h") {
                Some(v) => list(v)?,
                None => (1..=6).map(|k| 0.5f64.powi(k)).collect(),
            },
            distances: match self.get("d") {
                Some(v) => list(v)?,
                None => (1..=6).map(|k| 0.5f64.powi(k)).collect(),
            },
            n_range: self.get("n-range").map(pair).transpose()?.unwrap_or((1e-1, 1e-3)),
            samples: self.get("samples").map(int).transpose()?.unwrap_or(0),
            override_checks: match self.get("override") {
                None => false,
                Some(v) => v.parse().map_err(|_| bad("override", v))?,
            },
            dump: self.get("dump").filter(|v| !v.is_empty()).map(str::to_string),
            out: self.get("out").filter(|v| !v.is_empty()).map(str::to_string),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    /// Hypotheses of the interpolation theory, `q >= n + 1` and
    /// `p = 2n + 1`, unless overridden.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(GpwError::InvalidArgument("n must be >= 1".into()));
        }
        if !self.override_checks {
            if self.q < self.n + 1 {
                return Err(GpwError::InvalidArgument(format!(
                    "q = {} is below n + 1 = {} (use --override to allow)",
                    self.q,
                    self.n + 1
                )));
            }
            if self.p != 2 * self.n + 1 {
                return Err(GpwError::InvalidArgument(format!(
                    "p = {} differs from 2n + 1 = {} (use --override to allow)",
                    self.p,
                    2 * self.n + 1
                )));
            }
        }
        if self.mesh.0 == 0 || self.mesh.1 == 0 {
            return Err(GpwError::InvalidArgument("mesh needs at least one cell per direction".into()));
        }
        if !(self.n_range.0 > 0.0 && self.n_range.1 > 0.0 && self.n_range.1 <= self.n_range.0) {
            return Err(GpwError::InvalidArgument("n-range must be MAX,MIN with 0 < MIN <= MAX".into()));
        }
        Ok(())
    }

    /// One comment line listing every setting; parses back with
    /// [`Settings::parse_header`].
    pub fn header(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut s = format!(
            "{HEADER_PREFIX} command={} scenario={} n={} q={} p={} norm={} quad={} mesh={}x{} gamma={} Q={} seed={} \
             beta={} G={},{} theta={} h={} d={} n-range={},{} samples={} override={} dump={}",
            self.command.id(),
            self.scenario.id(),
            self.n,
            self.q,
            self.p,
            self.norm,
            self.quad,
            self.mesh.0,
            self.mesh.1,
            self.gamma,
            self.q_refl,
            self.seed,
            self.beta,
            self.anchor.x,
            self.anchor.y,
            self.theta.map(|t| t.to_string()).unwrap_or_default(),
            join(&self.radii),
            join(&self.distances),
            self.n_range.0,
            self.n_range.1,
            self.samples,
            self.override_checks,
            self.dump.as_deref().unwrap_or_default(),
        );
        s.push_str(" out=");
        s.push_str(self.out.as_deref().unwrap_or_default());
        s
    }
}

fn bad(key: &str, v: &str) -> GpwError {
    GpwError::Parse(format!("invalid value '{v}' for {key}"))
}

fn float(v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| bad("number", v))
}

fn int(v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| bad("integer", v))
}

fn pair(v: &str) -> Result<(f64, f64)> {
    let (a, b) = v.split_once(',').ok_or_else(|| bad("pair", v))?;
    Ok((float(a)?, float(b)?))
}

fn list(v: &str) -> Result<Vec<f64>> {
    v.split(',').map(float).collect()
}

fn mesh(v: &str) -> Result<(usize, usize)> {
    let (a, b) = v.split_once(['x', 'X']).ok_or_else(|| bad("mesh", v))?;
    Ok((int(a)?, int(b)?))
}

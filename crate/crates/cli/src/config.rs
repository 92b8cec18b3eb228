//! Command-line flags, the key-value config file and their merge into a
//! [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dunkl_kg::dunkl::{Parity, ParitySector, WignerParams};

use crate::error::{invalid, CliError};

#[derive(Debug, Parser)]
#[command(name = "dunkl-kg", version, about = "Spectra, densities and verification for the Dunkl-Klein-Gordon oscillator and Coulomb problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level table for the chosen problem.
    Spectrum(Flags),
    /// One-dimensional probability density profiles (uses --mu1).
    Density(Flags),
    /// Small-coupling expansion of the Coulomb levels.
    Finestructure(Flags),
    /// Run the verification suite and write a JSON report.
    Verify(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Self::Spectrum(f) | Self::Density(f) | Self::Finestructure(f) | Self::Verify(f) => f,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::Density(_) => "density",
            Self::Finestructure(_) => "finestructure",
            Self::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Cartesian,
    Spherical,
    Coulomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

macro_rules! impl_from_str_via_value_enum {
    ($t:ty) => {
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    };
}

impl_from_str_via_value_enum!(Problem);
impl_from_str_via_value_enum!(Format);

/// Every flag is optional so that config-file values can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Problem to solve [default: cartesian]
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Wigner parameter mu1 [default: 0]
    #[arg(long)]
    pub mu1: Option<f64>,
    /// Wigner parameter mu2 [default: 0]
    #[arg(long)]
    pub mu2: Option<f64>,
    /// Wigner parameter mu3 [default: 0]
    #[arg(long)]
    pub mu3: Option<f64>,
    /// Rest mass m [default: 1]
    #[arg(long)]
    pub mass: Option<f64>,
    /// Oscillator frequency omega [default: 1]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Coulomb coupling Ze^2 [default: 0.1]
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Largest total polynomial degree (oscillators) or radial n (Coulomb) [default: 2]
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Largest 2nu+2ell for Coulomb states [default: 2]
    #[arg(long)]
    pub angmax: Option<u32>,
    /// Comma-separated parity sectors such as "+++,--+", or "all"; one sign per entry for density [default: all]
    #[arg(long)]
    pub sectors: Option<String>,
    /// Keep only rows with E^2 at or below this value
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Density grid half-width, or oracle grid extent for verify [default: 5 for density]
    #[arg(long)]
    pub grid_xmax: Option<f64>,
    /// Density grid points, or coarsest oracle grid cells for verify [default: 1001 for density]
    #[arg(long)]
    pub grid_npts: Option<usize>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, or directory when density writes several profiles [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Key-value config file (key = value per line); flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated verification groups: spectrum-1d, orthonormality, ode-residual, degeneracy, finestructure
    #[arg(long)]
    pub only: Option<String>,
    /// Perturb every closed-form energy by 1e-2 before verifying
    #[arg(long)]
    pub negative_control: bool,
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub params: WignerParams,
    pub mass: f64,
    pub omega: f64,
    pub coupling: f64,
    pub nmax: u32,
    pub angmax: u32,
    pub sectors: Vec<ParitySector>,
    /// Present when `--sectors` uses single signs.
    pub parities: Vec<Parity>,
    pub cutoff: Option<f64>,
    pub grid_xmax: Option<f64>,
    pub grid_npts: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub only: Vec<String>,
    pub negative_control: bool,
}

const KEYS: &[&str] = &[
    "problem", "mu1", "mu2", "mu3", "mass", "omega", "coupling", "nmax", "angmax", "sectors", "cutoff",
    "grid-xmax", "grid-npts", "format", "out", "only", "negative-control",
];

/// Parses `key = value` lines; `#` starts a comment, underscores in keys are
/// read as dashes.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value, got {raw:?}", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn pick<T>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T: FromStr,
    T::Err: Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|e| invalid(format!("config value for {key}: {e}"))))
        .transpose()
}

/// Sector list from `"all"`, `"+++,--+"` or single signs `"+,-"`.
pub fn parse_sectors(text: &str) -> Result<(Vec<ParitySector>, Vec<Parity>), CliError> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("all") {
        return Ok((ParitySector::all().to_vec(), vec![Parity::Even, Parity::Odd]));
    }
    let mut sectors = Vec::new();
    let mut parities = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "+" => parities.push(Parity::Even),
            "-" => parities.push(Parity::Odd),
            _ => sectors.push(ParitySector::parse(item)?),
        }
    }
    if sectors.is_empty() && parities.is_empty() {
        return Err(invalid("no sectors selected"));
    }
    if !sectors.is_empty() && !parities.is_empty() {
        return Err(invalid("mix of one-sign and three-sign sectors"));
    }
    sectors.sort();
    sectors.dedup();
    parities.sort_by_key(|p| p.index());
    parities.dedup();
    Ok((sectors, parities))
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let mu1 = pick(flags.mu1, &file, "mu1")?.unwrap_or(0.0);
        let mu2 = pick(flags.mu2, &file, "mu2")?.unwrap_or(0.0);
        let mu3 = pick(flags.mu3, &file, "mu3")?.unwrap_or(0.0);
        let params = WignerParams::new(mu1, mu2, mu3)?;
        let sectors_text = pick(flags.sectors.clone(), &file, "sectors")?.unwrap_or_else(|| "all".into());
        let (mut sectors, mut parities) = parse_sectors(&sectors_text)?;
        if sectors.is_empty() {
            sectors = ParitySector::all().into_iter().filter(|s| parities.contains(&s.s1)).collect();
        }
        if parities.is_empty() {
            parities = vec![Parity::Even, Parity::Odd];
        }
        let negative_control = flags.negative_control
            || pick(None::<bool>, &file, "negative-control")?.unwrap_or(false);
        let cfg = Self {
            problem: pick(flags.problem, &file, "problem")?.unwrap_or(Problem::Cartesian),
            params,
            mass: pick(flags.mass, &file, "mass")?.unwrap_or(1.0),
            omega: pick(flags.omega, &file, "omega")?.unwrap_or(1.0),
            coupling: pick(flags.coupling, &file, "coupling")?.unwrap_or(0.1),
            nmax: pick(flags.nmax, &file, "nmax")?.unwrap_or(2),
            angmax: pick(flags.angmax, &file, "angmax")?.unwrap_or(2),
            sectors,
            parities,
            cutoff: pick(flags.cutoff, &file, "cutoff")?,
            grid_xmax: pick(flags.grid_xmax, &file, "grid-xmax")?,
            grid_npts: pick(flags.grid_npts, &file, "grid-npts")?,
            format: pick(flags.format, &file, "format")?.unwrap_or(Format::Csv),
            out: pick(flags.out.clone(), &file, "out")?,
            only: pick(flags.only.clone(), &file, "only")?
                .map(|s| s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect())
                .unwrap_or_default(),
            negative_control,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("mass", self.mass), ("omega", self.omega), ("coupling", self.coupling)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if let Some(c) = self.cutoff {
            if !c.is_finite() {
                return Err(invalid("cutoff must be finite"));
            }
        }
        if let Some(x) = self.grid_xmax {
            if !(x > 0.0 && x.is_finite()) {
                return Err(invalid(format!("grid-xmax must be finite and > 0, got {x}")));
            }
        }
        if let Some(n) = self.grid_npts {
            if n < 2 {
                return Err(invalid(format!("grid-npts must be at least 2, got {n}")));
            }
        }
        Ok(())
    }

    /// Inputs recorded in output headers.
    pub fn describe(&self, command: &str) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("command".into(), command.into());
        m.insert("problem".into(), format!("{:?}", self.problem).to_lowercase());
        m.insert("mu1".into(), self.params.mu1.to_string());
        m.insert("mu2".into(), self.params.mu2.to_string());
        m.insert("mu3".into(), self.params.mu3.to_string());
        m.insert("mass".into(), self.mass.to_string());
        m.insert("omega".into(), self.omega.to_string());
        m.insert("coupling".into(), self.coupling.to_string());
        m.insert("nmax".into(), self.nmax.to_string());
        m.insert("angmax".into(), self.angmax.to_string());
        m.insert("sectors".into(), self.sectors.iter().map(|s| s.label()).collect::<Vec<_>>().join(","));
        if let Some(c) = self.cutoff {
            m.insert("cutoff".into(), c.to_string());
        }
        if let Some(x) = self.grid_xmax {
            m.insert("grid-xmax".into(), x.to_string());
        }
        if let Some(n) = self.grid_npts {
            m.insert("grid-npts".into(), n.to_string());
        }
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m
    }
}

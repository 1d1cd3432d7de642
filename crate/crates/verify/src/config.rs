//! Command-line flags, the optional JSON config file, and their resolution
//! into validated settings. Flags override the config file.

use std::path::{Path, PathBuf};

use arithdiff::Prime;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::grid::IntList;

pub const DEFAULT_DEG_CAP: u32 = 12;
pub const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Exact verification suites for arithmetic differential operators on gl2 and blow-ups of P^1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// q-factorial units, integrality ratios, binomial ratios
    Arith(GridArgs),
    /// Pairing of distributions against centred coordinates
    DistPairing(GridArgs),
    /// Closure of the level-m basis under multiplication
    Closure(GridArgs),
    /// Integrality of the c_{nu,j} conversion coefficients
    Cnj(GridArgs),
    /// Coassociativity and transition maps of the group schemes G(n)
    Hopf(GridArgs),
    /// Chart counts and the tree of special-fiber components
    Charts(GridArgs),
    /// Ideal membership criteria and the extension test
    Ideal(GridArgs),
    /// Lattice inclusions for global sections of I_{n,d} T^d
    Sandwich(GridArgs),
    /// Chart rewrite certificates
    Rewrite(GridArgs),
    /// The map xi from distributions to differential operators
    Xi(GridArgs),
    /// Graded generation, the torsion bound N(m), and the graded comparison
    Theorem1(GridArgs),
    /// Both inclusions of the level-(m,n) comparison
    Theorem2(GridArgs),
    /// Every suite
    All(GridArgs),
    /// Write the component tree of the special fiber as JSON
    ExportTree(ExportTreeArgs),
    /// Write the lattice of global sections L(n,d) as JSON
    ExportLattice(ExportLatticeArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    /// Primes, e.g. `2,3`
    #[arg(long)]
    pub p: Option<IntList>,
    /// Blow-up depths, e.g. `0..3`
    #[arg(long)]
    pub n: Option<IntList>,
    /// Levels m
    #[arg(long)]
    pub m: Option<IntList>,
    /// Degrees d
    #[arg(long)]
    pub d: Option<IntList>,
    /// Degree bound D
    #[arg(long)]
    pub deg: Option<u32>,
    /// Hard cap on D
    #[arg(long)]
    pub deg_cap: Option<u32>,
    /// Output format
    #[arg(long, value_enum)]
    pub out: Option<Format>,
    /// Write the report to this file
    #[arg(long, short = 'o', conflicts_with = "out_dir")]
    pub output: Option<PathBuf>,
    /// Write one report per suite into this directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Small smoke grids
    #[arg(long)]
    pub quick: bool,
    /// Seed for sampled inputs
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON file with defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct ExportTreeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub n_cap: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ExportLatticeArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    p: Option<IntList>,
    n: Option<IntList>,
    m: Option<IntList>,
    d: Option<IntList>,
    deg: Option<u32>,
    deg_cap: Option<u32>,
    out: Option<Format>,
    output: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    jobs: Option<usize>,
    quick: Option<bool>,
    seed: Option<u64>,
}

/// What the suites see. `None` grids fall back to per-suite defaults.
#[derive(Clone, Debug)]
pub struct Settings {
    pub primes: Option<Vec<Prime>>,
    pub n: Option<Vec<u32>>,
    pub m: Option<Vec<u32>>,
    pub d: Option<Vec<u32>>,
    pub deg: Option<u32>,
    pub quick: bool,
    pub seed: u64,
    pub inject_fault: Option<u64>,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings { primes: None, n: None, m: None, d: None, deg: None, quick: false, seed: DEFAULT_SEED, inject_fault: None }
    }
}

#[derive(Clone, Debug)]
pub struct OutputSettings {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
}

fn read_config(path: &Path) -> Result<ConfigFile, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))
}

fn u32_list(name: &str, v: Option<IntList>) -> Result<Option<Vec<u32>>, UsageError> {
    v.map(|l| l.to_u32().map_err(|e| UsageError(format!("--{name}: {e}")))).transpose()
}

pub fn resolve(args: &GridArgs) -> Result<(Settings, OutputSettings), UsageError> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => ConfigFile::default(),
    };
    let primes = match args.p.clone().or(file.p) {
        None => None,
        Some(l) => Some(
            l.0.iter()
                .map(|&p| Prime::new(p).map_err(|_| UsageError(format!("--p: {p} is not prime"))))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let deg_cap = args.deg_cap.or(file.deg_cap).unwrap_or(DEFAULT_DEG_CAP);
    let deg = args.deg.or(file.deg);
    if let Some(deg) = deg {
        if deg > deg_cap {
            return usage(format!("--deg {deg} exceeds the cap {deg_cap}"));
        }
    }
    let d = u32_list("d", args.d.clone().or(file.d))?;
    if let Some(max) = d.as_ref().and_then(|v| v.iter().max()) {
        if *max > deg_cap {
            return usage(format!("--d {max} exceeds the cap {deg_cap}"));
        }
    }
    let n = u32_list("n", args.n.clone().or(file.n))?;
    if let Some(max) = n.as_ref().and_then(|v| v.iter().max()) {
        if *max > 8 {
            return usage(format!("--n {max} exceeds the cap 8"));
        }
    }
    let m = u32_list("m", args.m.clone().or(file.m))?;
    if let Some(max) = m.as_ref().and_then(|v| v.iter().max()) {
        if *max > 4 {
            return usage(format!("--m {max} exceeds the cap 4"));
        }
    }
    let jobs = args.jobs.or(file.jobs);
    if jobs == Some(0) {
        return usage("--jobs must be at least 1");
    }
    let output = args.output.clone().or(if args.out_dir.is_some() { None } else { file.output });
    let out_dir = args.out_dir.clone().or(if args.output.is_some() { None } else { file.out_dir });
    if output.is_some() && out_dir.is_some() {
        return usage("--output and --out-dir are mutually exclusive");
    }
    let settings = Settings {
        primes,
        n,
        m,
        d,
        deg,
        quick: args.quick || file.quick.unwrap_or(false),
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        inject_fault: args.inject_fault,
    };
    let out = OutputSettings { format: args.out.or(file.out).unwrap_or(Format::Text), output, out_dir, jobs };
    Ok((settings, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(f: impl FnOnce(&mut GridArgs)) -> GridArgs {
        let mut a = GridArgs::default();
        f(&mut a);
        a
    }

    #[test]
    fn rejects_bad_values() {
        assert!(resolve(&args(|a| a.p = Some(IntList(vec![4])))).is_err());
        assert!(resolve(&args(|a| a.deg = Some(13))).is_err());
        assert!(resolve(&args(|a| {
            a.deg = Some(13);
            a.deg_cap = Some(20);
        }))
        .is_ok());
        assert!(resolve(&args(|a| a.jobs = Some(0))).is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("verify-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"p": [5], "n": "0..2", "deg": 3, "out": "csv"}"#).unwrap();
        let (s, o) = resolve(&args(|a| {
            a.config = Some(path.clone());
            a.deg = Some(4);
        }))
        .unwrap();
        assert_eq!(s.primes.unwrap()[0].get(), 5);
        assert_eq!(s.n.unwrap(), vec![0, 1, 2]);
        assert_eq!(s.deg, Some(4));
        assert_eq!(o.format, Format::Csv);
        std::fs::write(&path, r#"{"primes": [5]}"#).unwrap();
        assert!(resolve(&args(|a| a.config = Some(path.clone()))).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

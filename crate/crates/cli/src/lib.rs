//! The `dlcusp` command line: verification suites, multiplicity tables and
//! character export.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dlcusp::dlchar::DlError;
use dlcusp::gf::GfError;
use dlcusp::groups::{Bounds, GroupError, GroupKind, MapKind, Seed, TorusKind};
use dlcusp::multiplicity::MultError;
use dlcusp::rootdata::RootDataError;
use dlcusp::Exec;

mod commands;
pub mod report;

pub use report::{Report, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "dlcusp", version, about = "Exact checks of distinction multiplicities for cuspidal representations of GL2 over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Suite),
    /// Multiplicity table over every named involution and cuspidal representation.
    Table(TableArgs),
    /// Write the character table of one cuspidal representation.
    ExportCharacter(ExportArgs),
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Four-way agreement of σ(G)σ(T) on root data.
    Sigma(DataArgs),
    /// det Ad against the Galois-orbit product for ε on T^θ.
    Epsilon(TorusGridArgs),
    /// σ of the θ-centralizer equals σ(G) when θ* fixes no root.
    #[command(name = "no-fixed-root", visible_alias = "lemma-4-4")]
    NoFixedRoot(DataArgs),
    /// Three descriptions of Φ_θ agree.
    PhiTheta(TorusGridArgs),
    /// lhs = rhs for every cuspidal representation.
    Theorem(TheoremArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Report zero wall times so that output bytes are reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    #[arg(long, default_value = "gl2")]
    pub group: String,
    /// Odd prime powers, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub q: Vec<u64>,
    /// diag, antidiag, transpose-inverse, swap or custom; every named seed
    /// of the group when absent.
    #[arg(long, value_delimiter = ',')]
    pub involution: Vec<String>,
    /// Witness `a,b,c,d` (row-major) for a custom involution.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Option<Vec<i64>>,
    /// inner or outer, for a custom involution.
    #[arg(long, default_value = "inner")]
    pub kind: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusChoice {
    Elliptic,
    Split,
    Both,
}

impl TorusChoice {
    pub fn kinds(self) -> Vec<TorusKind> {
        match self {
            TorusChoice::Elliptic => vec![TorusKind::Elliptic],
            TorusChoice::Split => vec![TorusKind::Split],
            TorusChoice::Both => vec![TorusKind::Elliptic, TorusKind::Split],
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// `all`, a shipped datum name or a path to a datum JSON file.
    #[arg(long, default_value = "all")]
    pub data: String,
    /// Number of additional random twists.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TorusGridArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub torus: TorusChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TheoremArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Keep representations whose Frobenius pairs contain these exponents;
    /// `k1;k2` for products.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub q: u64,
    /// Exponent k of λ(x) = exp(2πi k log x / (q² − 1)).
    #[arg(long)]
    pub lambda: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Config = 2,
    Resource = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Config(_) | CliError::Io(_) => Exit::Config,
            CliError::Resource(_) => Exit::Resource,
            CliError::Internal(_) => Exit::Failure,
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        match e {
            GfError::TooLarge { .. } => CliError::Resource(e.to_string()),
            GfError::EvenCharacteristic(_) | GfError::NotPrimePower(_) => CliError::Config(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<RootDataError> for CliError {
    fn from(e: RootDataError) -> Self {
        match e {
            RootDataError::Inconsistent(_) | RootDataError::NotASign => CliError::Internal(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Field(e) => e.into(),
            GroupError::RootData(e) => e.into(),
            GroupError::Resource { .. } => CliError::Resource(e.to_string()),
            GroupError::InvalidInvolution(_) | GroupError::SeedNotForGroup { .. } | GroupError::UnknownKind(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<DlError> for CliError {
    fn from(e: DlError) -> Self {
        match e {
            DlError::Field(e) => e.into(),
            DlError::Group(e) => e.into(),
            DlError::RootData(e) => e.into(),
            DlError::NotGeneralPosition(_) => CliError::Config(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<MultError> for CliError {
    fn from(e: MultError) -> Self {
        match e {
            MultError::Field(e) => e.into(),
            MultError::Group(e) => e.into(),
            MultError::RootData(e) => e.into(),
            MultError::Character(e) => e.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

/// Odd prime powers within the table limits.
pub fn validate_q(q: u64) -> Result<u64, CliError> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(CliError::Config(format!("q = {q} must be an odd prime power")));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    let p = if q.is_multiple_of(p) { p } else { q };
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    if r != 1 {
        return Err(CliError::Config(format!("q = {q} is not a prime power")));
    }
    Ok(q)
}

impl GroupArgs {
    pub fn kind(&self) -> Result<GroupKind, CliError> {
        Ok(GroupKind::from_str(&self.group)?)
    }

    pub fn qs(&self) -> Result<Vec<u64>, CliError> {
        if self.q.is_empty() {
            return Err(CliError::Config("no q given".into()));
        }
        self.q.iter().map(|&q| validate_q(q)).collect()
    }

    /// Seeds in command-line order, or every named seed of the group.
    pub fn seeds(&self) -> Result<Vec<Seed>, CliError> {
        let kind = self.kind()?;
        if self.involution.is_empty() {
            if self.matrix.is_some() {
                return Err(CliError::Config("--matrix needs --involution custom".into()));
            }
            return Ok(Seed::named_for(kind));
        }
        let mut out = Vec::new();
        for name in &self.involution {
            let seed = if name == "custom" {
                let m = self.matrix.as_ref().ok_or_else(|| CliError::Config("custom involution needs --matrix".into()))?;
                let matrix: [i64; 4] =
                    m.as_slice().try_into().map_err(|_| CliError::Config("--matrix takes four entries a,b,c,d".into()))?;
                Seed::Custom { matrix, kind: MapKind::from_str(&self.kind)? }
            } else {
                Seed::from_str(name)?
            };
            if seed == Seed::Swap && kind == GroupKind::Gl2 {
                return Err(GroupError::SeedNotForGroup { seed: seed.name(), group: kind }.into());
            }
            out.push(seed);
        }
        Ok(out)
    }
}

impl OutputArgs {
    pub fn exec(&self) -> Exec {
        if self.jobs == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

/// A parsed `--lambda` entry: one exponent per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFilter(pub Vec<u64>);

impl FromStr for LambdaFilter {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        s.split(';')
            .map(|k| k.trim().parse::<u64>().map_err(|_| CliError::Config(format!("bad λ exponent `{s}`"))))
            .collect::<Result<Vec<_>, _>>()
            .map(LambdaFilter)
    }
}

impl LambdaFilter {
    pub fn matches(&self, pairs: &[[u64; 2]]) -> bool {
        self.0.len() <= pairs.len() && self.0.iter().zip(pairs).all(|(k, p)| p.contains(k))
    }
}

pub fn parse_lambdas(v: &[String]) -> Result<Vec<LambdaFilter>, CliError> {
    v.iter().map(|s| s.parse()).collect()
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: Cli) -> Exit {
    let output = match &cli.command {
        Command::Verify(Suite::Sigma(a)) | Command::Verify(Suite::NoFixedRoot(a)) => a.output.clone(),
        Command::Verify(Suite::Epsilon(a)) | Command::Verify(Suite::PhiTheta(a)) => a.output.clone(),
        Command::Verify(Suite::Theorem(a)) => a.output.clone(),
        Command::Table(a) => a.output.clone(),
        Command::ExportCharacter(a) => a.output.clone(),
    };
    let result = if output.jobs > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(output.jobs).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command)),
            Err(e) => Err(CliError::Config(format!("cannot start {} workers: {e}", output.jobs))),
        }
    } else {
        commands::dispatch(&cli.command)
    };
    match result {
        Ok(report) => match report.emit(&output) {
            Ok(()) if report.failures.is_empty() => Exit::Ok,
            Ok(()) => {
                let failures = serde_json::to_string_pretty(&report.failures).unwrap_or_default();
                eprintln!("{} assertion failure(s):\n{failures}", report.failures.len());
                Exit::Failure
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit()
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    }
}

/// Enumeration caps from the environment, or the defaults.
pub fn bounds() -> Result<Bounds, CliError> {
    Bounds::from_env().map_err(CliError::Config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_validation() {
        assert!(validate_q(3).is_ok());
        assert!(validate_q(9).is_ok());
        assert!(validate_q(25).is_ok());
        assert!(matches!(validate_q(4), Err(CliError::Config(_))));
        assert!(matches!(validate_q(15), Err(CliError::Config(_))));
        assert!(matches!(validate_q(1), Err(CliError::Config(_))));
    }

    #[test]
    fn lambda_filters() {
        let f: LambdaFilter = "2".parse().unwrap();
        assert!(f.matches(&[[2, 6]]));
        assert!(!f.matches(&[[1, 3]]));
        let f: LambdaFilter = "2;6".parse().unwrap();
        assert!(f.matches(&[[2, 6], [6, 2]]));
        assert!(!f.matches(&[[2, 6], [1, 3]]));
        assert!("x".parse::<LambdaFilter>().is_err());
    }

    #[test]
    fn clap_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

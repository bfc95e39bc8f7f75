//! Command-line parsing into a validated [`RunPlan`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use hulthen::{PotentialSpec, Variant};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Real,
    #[value(alias = "pt-symmetric")]
    Pt,
    #[value(alias = "pseudo-hermitian")]
    Ph,
    #[value(alias = "exponential")]
    Exp,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Real => Variant::Real,
            VariantArg::Pt => Variant::PTSymmetric,
            VariantArg::Ph => Variant::PseudoHermitian,
            VariantArg::Exp => Variant::Exponential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    #[value(name = "V0")]
    V0,
    Alpha,
    Q,
    M,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::V0 => "V0",
            Param::Alpha => "alpha",
            Param::Q => "q",
            Param::M => "m",
        }
    }

    pub fn apply(self, spec: &PotentialSpec, value: f64) -> PotentialSpec {
        let mut s = *spec;
        match self {
            Param::V0 => s.v0 = value,
            Param::Alpha => s.alpha = value,
            Param::Q => s.q = value,
            Param::M => s.m = value,
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Parser, Debug)]
#[command(name = "hulthen", version, about = "Dirac bound states of the generalized Hulthén potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct PotentialArgs {
    /// real | pt | ph | exp
    #[arg(long, value_enum, default_value = "pt")]
    variant: VariantArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long = "V0", default_value_t = 2.5, allow_negative_numbers = true)]
    v0: f64,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form energies for the requested levels
    Spectrum {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Levels: `0..3` (inclusive), `0,1,2` or a single n
        #[arg(long, default_value = "0")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Energies along a parameter sweep
    Scan {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, value_enum)]
        vary: Param,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "0")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampled spinor components of one state
    Wavefunction {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value = "0")]
        n: String,
        #[arg(long, value_enum, default_value = "plus")]
        branch: BranchArg,
        /// Energy `re` or `re,im` (required for the exp variant)
        #[arg(long, allow_negative_numbers = true)]
        energy: Option<String>,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant suite
    Verify {
        /// Override a tolerance, `NAME=VALUE` (repeatable)
        #[arg(long = "tol")]
        tol: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-difference spectrum of the potential
    Oracle {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Number of cells (default 2000 for real potentials on the staggered grid, 400 when the dense solver is needed)
        #[arg(long)]
        cells: Option<usize>,
        /// Unstaggered central differences (shows doubling)
        #[arg(long)]
        collocated: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Range {
    /// Endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let d = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                (self.from * (d - i) + self.to * i) / d
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CommandKind {
    Spectrum,
    Scan(Range),
    Wavefunction { branch: BranchArg, energy: Option<hulthen::Complex64>, x_min: f64, x_max: f64, points: usize },
    Verify,
    Oracle { grid: hulthen::GridSpec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub command: CommandKind,
    pub spec: PotentialSpec,
    pub levels: Vec<u32>,
    pub output: Output,
    pub tolerances: BTreeMap<String, f64>,
    /// Invocation without the `--out` argument.
    pub command_line: String,
}

/// What the caller should do when parsing did not produce a plan.
#[derive(Debug)]
pub enum ParseOutcome {
    Plan(Box<RunPlan>),
    /// `--help` / `--version`: print and exit 0.
    Info(String),
    Usage(UsageError),
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

pub fn parse_levels(s: &str) -> Result<Vec<u32>, UsageError> {
    let bad = || usage(format!("invalid level list `{s}`"));
    let s = s.trim();
    let levels: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b < a {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    let mut levels = levels;
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() {
        return Err(bad());
    }
    Ok(levels)
}

fn parse_energy(s: &str) -> Result<hulthen::Complex64, UsageError> {
    let bad = || usage(format!("invalid energy `{s}`"));
    let mut parts = s.split(',');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(hulthen::Complex64::new(re, im))
}

fn build_spec(p: &PotentialArgs) -> Result<PotentialSpec, UsageError> {
    let variant: Variant = p.variant.into();
    let q = if variant == Variant::Exponential { 0.0 } else { p.q };
    PotentialSpec::new(variant, p.v0, q, p.alpha, p.m).map_err(|e| usage(e.to_string()))
}

/// Program name plus arguments, dropping `--out PATH` / `--out=PATH`.
fn provenance<S: AsRef<str>>(argv: &[S]) -> String {
    let mut out = vec!["hulthen".to_string()];
    let mut skip = false;
    for a in argv.iter().skip(1) {
        let a = a.as_ref();
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        out.push(a.to_string());
    }
    out.join(" ")
}

/// `argv[0]` is the program name.
pub fn parse_invocation<S: AsRef<str>>(argv: &[S]) -> ParseOutcome {
    let args: Vec<&str> = argv.iter().map(|s| s.as_ref()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
                _ => ParseOutcome::Usage(usage(e.to_string())),
            };
        }
    };
    match plan_from(cli, provenance(argv)) {
        Ok(p) => ParseOutcome::Plan(Box::new(p)),
        Err(e) => ParseOutcome::Usage(e),
    }
}

fn plan_from(cli: Cli, command_line: String) -> Result<RunPlan, UsageError> {
    let plan = |command, spec, levels, output: OutputArgs, tolerances| RunPlan {
        command,
        spec,
        levels,
        output: Output { path: output.out, format: output.format },
        tolerances,
        command_line: command_line.clone(),
    };
    match cli.command {
        Command::Spectrum { pot, n, output } => {
            let spec = build_spec(&pot)?;
            if spec.variant == Variant::Exponential {
                return Err(usage("spectrum has no closed form for the exp variant; use `oracle`"));
            }
            Ok(plan(CommandKind::Spectrum, spec, parse_levels(&n)?, output, BTreeMap::new()))
        }
        Command::Scan { pot, vary, from, to, steps, n, output } => {
            let spec = build_spec(&pot)?;
            if spec.variant == Variant::Exponential {
                return Err(usage("scan has no closed form for the exp variant"));
            }
            if steps < 2 {
                return Err(usage("--steps must be at least 2"));
            }
            if !(from.is_finite() && to.is_finite()) {
                return Err(usage("--from/--to must be finite"));
            }
            let range = Range { param: vary, from, to, steps };
            Ok(plan(CommandKind::Scan(range), spec, parse_levels(&n)?, output, BTreeMap::new()))
        }
        Command::Wavefunction { pot, n, branch, energy, x_min, x_max, points, output } => {
            let spec = build_spec(&pot)?;
            let levels = parse_levels(&n)?;
            if levels.len() != 1 {
                return Err(usage("wavefunction takes a single level"));
            }
            let energy = energy.as_deref().map(parse_energy).transpose()?;
            if spec.variant == Variant::Exponential && energy.is_none() {
                return Err(usage("the exp variant needs --energy"));
            }
            if !(x_min < x_max) || points < 2 {
                return Err(usage("need --x-min < --x-max and --points >= 2"));
            }
            let kind = CommandKind::Wavefunction { branch, energy, x_min, x_max, points };
            Ok(plan(kind, spec, levels, output, BTreeMap::new()))
        }
        Command::Verify { tol, output } => {
            let mut tolerances = BTreeMap::new();
            for t in &tol {
                let (k, v) = t.split_once('=').ok_or_else(|| usage(format!("--tol expects NAME=VALUE, got `{t}`")))?;
                if !hulthen::verify::CHECK_NAMES.contains(&k) {
                    return Err(usage(format!("unknown check `{k}`")));
                }
                let v: f64 = v.parse().map_err(|_| usage(format!("invalid tolerance `{v}`")))?;
                tolerances.insert(k.to_string(), v);
            }
            let spec = PotentialSpec { v0: 2.5, q: 1.0, alpha: 1.0, m: 1.0, variant: Variant::PTSymmetric };
            Ok(plan(CommandKind::Verify, spec, Vec::new(), output, tolerances))
        }
        Command::Oracle { pot, x_min, x_max, cells, collocated, output } => {
            let spec = build_spec(&pot)?;
            let (lo, hi) = if spec.variant == Variant::Exponential { (0.0, 40.0) } else { (-10.0, 10.0) };
            let dense = spec.variant.is_complexified() || collocated;
            let cells = cells.unwrap_or(if dense { 400 } else { 2000 });
            let grid = hulthen::GridSpec::new(x_min.unwrap_or(lo), x_max.unwrap_or(hi), cells, !collocated)
                .map_err(|e| usage(e.to_string()))?;
            Ok(plan(CommandKind::Oracle { grid }, spec, Vec::new(), output, BTreeMap::new()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(args: &str) -> RunPlan {
        let argv: Vec<&str> = std::iter::once("hulthen").chain(args.split_whitespace()).collect();
        match parse_invocation(&argv) {
            ParseOutcome::Plan(p) => *p,
            other => panic!("{other:?}"),
        }
    }

    fn usage_err(args: &str) -> bool {
        let argv: Vec<&str> = std::iter::once("hulthen").chain(args.split_whitespace()).collect();
        matches!(parse_invocation(&argv), ParseOutcome::Usage(_))
    }

    #[test]
    fn spectrum_plan() {
        let p = plan("spectrum --variant pt --m 1 --q 1 --alpha 2 --V0 2.5 --n 0..3 --format json");
        assert_eq!(p.command, CommandKind::Spectrum);
        assert_eq!(p.levels, vec![0, 1, 2, 3]);
        assert_eq!(p.output.format, Format::Json);
        assert_eq!(p.spec.variant, Variant::PTSymmetric);
        assert_eq!((p.spec.alpha, p.spec.v0), (2.0, 2.5));
    }

    #[test]
    fn scan_plans() {
        let p = plan("scan --variant pt --vary V0 --from 2.0 --to 6.0 --steps 200 --n 0 --q 1 --alpha 1");
        let CommandKind::Scan(r) = p.command else { panic!() };
        assert_eq!((r.param, r.steps), (Param::V0, 200));
        let v = r.values();
        assert_eq!((v[0], v[199]), (2.0, 6.0));
        let p = plan("scan --vary alpha --from 0.2 --to 4.5 --steps 400 --q -1 --V0 2.5 --n 0,1,2");
        assert_eq!(p.levels, vec![0, 1, 2]);
        assert_eq!(p.spec.q, -1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(usage_err("spectrum --bogus 1"));
        assert!(usage_err("scan --vary alpha --from 1 --to 2 --steps 1"));
        assert!(usage_err("spectrum --n 3..1"));
        assert!(usage_err("spectrum --variant real --q 0"));
        assert!(usage_err("verify --tol nonsense=1"));
        assert!(usage_err("verify --tol kummer"));
        assert!(usage_err("frobnicate"));
    }

    #[test]
    fn provenance_drops_out() {
        let p = plan("spectrum --out /tmp/a.json --n 0 --format json");
        assert_eq!(p.command_line, "hulthen spectrum --n 0 --format json");
        let p = plan("spectrum --out=/tmp/b.json --n 0");
        assert_eq!(p.command_line, "hulthen spectrum --n 0");
    }

    #[test]
    fn level_lists() {
        assert_eq!(parse_levels("2").unwrap(), vec![2]);
        assert_eq!(parse_levels("0..=2").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_levels("3,1,1").unwrap(), vec![1, 3]);
        assert!(parse_levels("a").is_err());
    }
}

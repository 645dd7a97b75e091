//! Command-line front end. The `ufp` binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 the criterion holds, 1 it fails, 2 parse error, 3 a cap
//! was exceeded, 4 a precondition failed.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::criteria::{self, CriterionReport, GroupKind};
use crate::error::Error;
use crate::group::{p_part, PermGroup, DEFAULT_GROUP_CAP};
use crate::perm::{parse_generators, Perm};
use crate::tree::FiniteSubtree;
use crate::universal::{p_part_big, TruncatedGroupSpec, DEFAULT_ENUM_CAP};

pub const SCHEMA: &str = "ufp/1";

#[derive(Debug, Parser)]
#[command(name = "ufp", version, about = "Local Sylow and localization checks for groups acting on regular trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order, orbits, regularity, Sylow subgroup and orbit closure of F.
    Info(RunConfig),
    /// Evaluate one criterion; exit 0 if it holds, 1 if not.
    Check {
        criterion: Criterion,
        #[command(flatten)]
        cfg: RunConfig,
        /// For prop31: check every Sylow subgroup, not just one.
        #[arg(long)]
        all_sylows: bool,
    },
    /// Truncated orders of U(F)_b and U(F(p))_b with their p-parts per depth.
    OrderTable(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Prop31,
    PropSymalt,
    PropOrbits,
    PropPpower,
    Thm45,
    Thm46,
    Remark44,
    Remark48,
    UfProperties,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Sym,
    Alt,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, short = 'd')]
    pub degree: usize,
    /// Generators of F in cycle notation, comma separated.
    #[arg(long, short = 'g', default_value = "")]
    pub gens: String,
    /// Generators of F' (defaults to F).
    #[arg(long)]
    pub gens_fprime: Option<String>,
    #[arg(long, short = 'p', default_value_t = 2)]
    pub prime: u64,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP, value_parser = clap::value_parser!(usize))]
    pub cap_group: usize,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    pub cap_ball: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Sym or Alt, for prop-symalt.
    #[arg(long, value_enum, default_value_t = KindArg::Sym)]
    pub kind: KindArg,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MalformedCycle(_)
        | Error::DegreeMismatch(..)
        | Error::DegreeOutOfRange(_)
        | Error::PointOutOfRange { .. }
        | Error::MalformedAddress(_)
        | Error::NotPrime(_)
        | Error::Json(_) => 2,
        Error::CapExceeded { .. } => 3,
        _ => 4,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::error(code, text)
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => out,
        Err(e) => Outcome::error(exit_code(&e), format!("error: {e}\n")),
    }
}

fn group(cfg: &RunConfig, gens: &str) -> Result<PermGroup, Error> {
    let gens: Vec<Perm> = parse_generators(gens, cfg.degree)?;
    PermGroup::generate(cfg.degree, &gens, cfg.cap_group)
}

fn with_schema(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn report_outcome(r: &CriterionReport, format: Format) -> Outcome {
    let stdout = match format {
        Format::Json => with_schema(serde_json::to_value(r).expect("reports serialize")),
        Format::Table => r.to_table(),
    };
    Outcome {
        code: if r.holds { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

fn execute(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Info(cfg) => info(cfg),
        Command::Check {
            criterion,
            cfg,
            all_sylows,
        } => check(*criterion, cfg, *all_sylows),
        Command::OrderTable(cfg) => order_table(cfg),
    }
}

fn info(cfg: &RunConfig) -> Result<Outcome, Error> {
    let f = group(cfg, &cfg.gens)?;
    let sylow = f.sylow_subgroup(cfg.prime)?;
    let orbits = f.orbits();
    let v = json!({
        "degree": f.degree(),
        "order": f.order().to_string(),
        "generators": f.generators().iter().map(Perm::to_cycle_string).collect::<Vec<_>>(),
        "orbits": orbits.one_based(),
        "transitive": f.is_transitive(),
        "semiregular": f.is_semiregular(),
        "regular": f.is_regular(),
        "sylow": {
            "p": cfg.prime,
            "order": sylow.order().to_string(),
            "generators": sylow.generators().iter().map(Perm::to_cycle_string).collect::<Vec<_>>(),
        },
        "hat": {
            "orbits": orbits.one_based(),
            "order": orbits.sym_product_order().to_string(),
        },
    });
    let stdout = match cfg.format {
        Format::Json => with_schema(v),
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "degree       {}", f.degree()).ok();
            writeln!(s, "order        {}", f.order()).ok();
            writeln!(s, "orbits       {:?}", orbits.one_based()).ok();
            writeln!(s, "transitive   {}", f.is_transitive()).ok();
            writeln!(s, "semiregular  {}", f.is_semiregular()).ok();
            writeln!(s, "regular      {}", f.is_regular()).ok();
            writeln!(s, "{}-Sylow order {}", cfg.prime, sylow.order()).ok();
            writeln!(s, "hat order    {}", orbits.sym_product_order()).ok();
            s
        }
    };
    Ok(Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    })
}

fn check(criterion: Criterion, cfg: &RunConfig, all_sylows: bool) -> Result<Outcome, Error> {
    let p = cfg.prime;
    let report = match criterion {
        Criterion::PropSymalt => {
            let kind = match cfg.kind {
                KindArg::Sym => GroupKind::Sym,
                KindArg::Alt => GroupKind::Alt,
            };
            criteria::symalt_report(cfg.degree, p, kind)?
        }
        _ => {
            let f = group(cfg, &cfg.gens)?;
            match criterion {
                Criterion::Prop31 if all_sylows => criteria::sylow_choice_sweep(&f, p)?,
                Criterion::Prop31 => criteria::stabilizer_sylow_condition(&f, &f.sylow_subgroup(p)?, p)?,
                Criterion::PropOrbits => criteria::orbit_equality_report(&f, p)?,
                Criterion::PropPpower => criteria::prime_power_degree_check(&f, p)?,
                Criterion::Thm45 => {
                    let fprime = match &cfg.gens_fprime {
                        Some(g) => group(cfg, g)?,
                        None => f.clone(),
                    };
                    criteria::thm45_hypotheses(&f, &fprime, p)?
                }
                Criterion::Thm46 => criteria::thm46_hypotheses(&f, p, cfg.cap_group)?,
                Criterion::Remark44 => criteria::remark44_check(&f, p)?,
                Criterion::Remark48 => criteria::remark48_check(&f, p)?,
                Criterion::UfProperties => criteria::uf_property_report(&f)?,
                Criterion::PropSymalt => unreachable!("handled above"),
            }
        }
    };
    Ok(report_outcome(&report, cfg.format))
}

fn p_exponent(n: &BigUint, p: u64) -> u32 {
    let mut part = p_part_big(n, p);
    let pb = BigUint::from(p);
    let mut e = 0;
    while part > BigUint::from(1u32) {
        part /= &pb;
        e += 1;
    }
    e
}

fn order_table(cfg: &RunConfig) -> Result<Outcome, Error> {
    let f = group(cfg, &cfg.gens)?;
    let p = cfg.prime;
    let fp = f.sylow_subgroup(p)?;
    if cfg.depth == 0 {
        return Err(Error::PreconditionFailed("depth must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut first_mismatch = None;
    for k in 1..=cfg.depth {
        let big = TruncatedGroupSpec::new(f.clone(), FiniteSubtree::base(), k)?.order();
        let small = TruncatedGroupSpec::new(fp.clone(), FiniteSubtree::base(), k)?.order();
        let (e1, e2) = (p_exponent(&big, p), p_exponent(&small, p));
        if e1 != e2 && first_mismatch.is_none() {
            first_mismatch = Some(k);
        }
        rows.push((k, big, e1, small, e2));
    }
    let stdout = match cfg.format {
        Format::Json => with_schema(json!({
            "p": p,
            "order_F": f.order().to_string(),
            "order_Fp": fp.order().to_string(),
            "stabilizer_p_parts": (0..f.degree()).map(|w| p_part(f.pointwise_stabilizer_order(&[w]), p)).collect::<Vec<_>>(),
            "rows": rows.iter().map(|(k, big, e1, small, e2)| json!({
                "depth": k,
                "order_U_F": big.to_string(),
                "p_part_U_F": p_part_big(big, p).to_string(),
                "p_exponent_U_F": e1,
                "order_U_Fp": small.to_string(),
                "p_part_U_Fp": p_part_big(small, p).to_string(),
                "p_exponent_U_Fp": e2,
                "equal": e1 == e2,
            })).collect::<Vec<_>>(),
            "first_mismatch": first_mismatch,
        })),
        Format::Table => {
            let mut s = String::new();
            writeln!(
                s,
                "{:>5}  {:>28}  {:>8}  {:>28}  {:>8}",
                "depth", "|U(F)_b|", "p-exp", "|U(F(p))_b|", "p-exp"
            )
            .ok();
            for (k, big, e1, small, e2) in &rows {
                let flag = if Some(*k) == first_mismatch { "  <- first mismatch" } else { "" };
                writeln!(s, "{k:>5}  {big:>28}  {e1:>8}  {small:>28}  {e2:>8}{flag}").ok();
            }
            s
        }
    };
    Ok(Outcome {
        code: if first_mismatch.is_none() { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    })
}

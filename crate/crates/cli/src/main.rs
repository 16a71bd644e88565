//! `bblab`: command-line front end to the backbone laboratory.
//!
//! Exit codes: 0 success, 1 usage, 2 unreadable input, 3 budget exceeded,
//! 4 a checked property is false (non-member, not a backbone, ...).

use bblab_core::backbone::{
    backbone_value, frozen_vars_brute, frozen_vars_sat, verify_backbone, BackboneConfig,
};
use bblab_core::frequency::{builtin_adapter, transfer_check, BUILTIN_ADAPTERS};
use bblab_core::gadget::{build, membership_test, parse_epsilon, ConstructionParams, FamilyParams};
use bblab_core::gen::{corpus, GenConfig};
use bblab_core::machine::parse_machine;
use bblab_core::reduction::{invert, reduce_with, Inverted, ReduceConfig};
use bblab_core::sat::{solve_exhaustive, solve_with, tseitin, SatConfig};
use bblab_core::{BitString, Error, Formula, MachineDescription, PartialAssignment, VarName};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "bblab", version, about = "Backbone laboratory: reductions, gadgets, backbones")]
struct Cli {
    /// Conflict budget per SAT call.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget_conflicts: u64,
    /// Largest variable count for a full truth table in brute-force mode.
    #[arg(long, global = true, default_value_t = 22)]
    brute_limit: usize,
    /// Seed for random test corpora (constructions are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce "machine accepts input" to a formula.
    Reduce {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: PathBuf,
        /// Largest clock bound to build a tableau for.
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Decode the machine tag and input from a reduction output.
    Invert {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Build a gadget formula.
    Build {
        #[command(subcommand)]
        family: BuildFamily,
    },
    /// Test whether a formula is a gadget for the given machines.
    Member {
        #[arg(long)]
        formula: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Compute the frozen variables (maximum backbone).
    Backbone {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Sat)]
        method: MethodArg,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the text report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract and verify the value of a backbone.
    BackboneValue {
        #[arg(long)]
        formula: PathBuf,
        #[command(flatten)]
        vars: VarsArgs,
        /// Also write the value here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that an assignment is the value of a backbone.
    Verify {
        #[arg(long)]
        formula: PathBuf,
        /// Comma-separated variables, in the order of --values.
        #[arg(long, requires = "values", conflicts_with = "assignment")]
        vars: Option<String>,
        /// One bit per variable of --vars.
        #[arg(long, requires = "vars")]
        values: Option<String>,
        /// File with `<var> <0|1>` lines (a backbone report or value file).
        #[arg(long, required_unless_present = "vars")]
        assignment: Option<PathBuf>,
    },
    /// Measure error transfer for a heuristic over a gadget family.
    Freq {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        max_n: usize,
        /// One of all-true, all-false, parity-of-length, oracle.
        #[arg(long)]
        heuristic: String,
    },
    /// Write the Tseitin CNF as DIMACS, with a `<out>.map` variable map.
    ExportDimacs {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check solver and backbone methods on random formulas.
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BuildFamily {
    /// z block of length k, positive in the Mi branch, negated in the Mj branch.
    A3k {
        #[command(flatten)]
        machines: MachineArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        target: BuildTarget,
    },
    /// Padded z/zp blocks sized from epsilon.
    Thm3 {
        #[command(flatten)]
        machines: MachineArgs,
        /// Rational in (0, 1], e.g. 1/2.
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        target: BuildTarget,
    },
}

#[derive(Args, Debug)]
struct MachineArgs {
    /// Machine whose acceptance the gadget encodes.
    #[arg(long)]
    mi: PathBuf,
    /// Complementary machine for the other branch.
    #[arg(long)]
    mj: PathBuf,
}

#[derive(Args, Debug)]
struct BuildTarget {
    /// Input bit string, e.g. 0110 (empty for the empty string).
    #[arg(long)]
    input: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[command(flatten)]
    machines: MachineArgs,
    #[arg(long, conflicts_with = "epsilon", required_unless_present = "epsilon")]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Args, Debug)]
struct VarsArgs {
    /// Comma-separated variable list (may be empty).
    #[arg(long, conflicts_with = "vars_from", required_unless_present = "vars_from")]
    vars: Option<String>,
    /// Take the variables from a backbone report.
    #[arg(long)]
    vars_from: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MethodArg {
    Brute,
    Sat,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
    /// A checked property is false; the message is already printed.
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Negative => Ok(()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(..) => 2,
            Failure::Core(e) if e.is_input() => 2,
            Failure::Core(e) if e.is_budget() => 3,
            Failure::Core(Error::NotABackbone) | Failure::Negative => 4,
            Failure::Core(_) => 1,
        }
    }
}

type Out<'a> = &'a mut dyn Write;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_formula(path: &Path) -> Result<Formula, Failure> {
    Ok(bblab_core::parse_formula(&read(path)?)?)
}

fn load_machine(path: &Path) -> Result<MachineDescription, Failure> {
    Ok(parse_machine(&read(path)?)?)
}

fn bits(s: &str) -> Result<BitString, Failure> {
    Ok(s.parse()?)
}

fn var_list(s: &str) -> Result<Vec<VarName>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Ok(t.parse()?))
        .collect()
}

/// Reads `<var> <0|1>` pairs from a backbone report or value file. Lines
/// may carry a leading keyword (`frozen`, `assign`); `SAT`, `UNSAT`,
/// blank and `#` lines are skipped.
fn read_assignment(path: &Path) -> Result<PartialAssignment, Failure> {
    let text = read(path)?;
    let mut a = PartialAssignment::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "SAT" || line == "UNSAT" {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (name, bit) = match toks.as_slice() {
            [_, name, bit] | [name, bit] => (*name, *bit),
            _ => {
                return Err(Failure::Core(Error::InvalidParams(format!(
                    "{}:{}: expected `<var> <0|1>`",
                    path.display(),
                    i + 1
                ))))
            }
        };
        let value = match bit {
            "0" => false,
            "1" => true,
            _ => return Err(Failure::Core(Error::InvalidBits(bit.to_string()))),
        };
        a.bind(name.parse()?, value);
    }
    Ok(a)
}

fn family_params(fa: &FamilyArgs) -> Result<ConstructionParams, Failure> {
    let mi = load_machine(&fa.machines.mi)?;
    let mj = load_machine(&fa.machines.mj)?;
    let family = match (&fa.k, &fa.epsilon) {
        (Some(k), None) => FamilyParams::A3k { k: *k },
        (None, Some(e)) => FamilyParams::Thm3 {
            epsilon: parse_epsilon(e)?,
        },
        _ => return Err(Failure::Usage("give exactly one of --k and --epsilon".into())),
    };
    Ok(ConstructionParams::new(mi, mj, family)?)
}

fn print_assignment(out: Out, a: &PartialAssignment) -> std::io::Result<String> {
    let mut text = String::new();
    for (v, b) in a.iter() {
        text.push_str(&format!("assign {v} {}\n", u8::from(b)));
    }
    writeln!(out, "value {}", if a.is_empty() { "ε".to_string() } else { a.bits() })?;
    out.write_all(text.as_bytes())?;
    Ok(text)
}

fn run(cli: Cli, out: Out) -> Result<(), Failure> {
    let cfg = BackboneConfig {
        brute_limit: cli.brute_limit,
        sat: SatConfig {
            conflict_budget: cli.budget_conflicts,
        },
    };
    let io = |e: std::io::Error| Failure::Io(PathBuf::from("<stdout>"), e);
    match cli.cmd {
        Command::Reduce {
            machine,
            input,
            out: dest,
            max_steps,
        } => {
            let m = load_machine(&machine)?;
            let a = reduce_with(&m, &bits(&input)?, ReduceConfig { max_steps })?;
            write(&dest, &(a.formula.serialize() + "\n"))?;
            write(&sidecar(&dest, ".meta.json"), &(a.meta().to_json() + "\n"))?;
            writeln!(out, "tag {}\np {}", a.machine_tag, a.p).map_err(io)?;
        }
        Command::Invert { formula } => match invert(&load_formula(&formula)?) {
            Inverted::Pair { tag, input } => {
                writeln!(out, "tag {tag}\ninput {input}").map_err(io)?;
            }
            Inverted::Junk => writeln!(out, "JUNK").map_err(io)?,
        },
        Command::Build { family } => {
            let (machines, family, target) = match family {
                BuildFamily::A3k { machines, k, target } => (machines, FamilyParams::A3k { k }, target),
                BuildFamily::Thm3 {
                    machines,
                    epsilon,
                    target,
                } => (
                    machines,
                    FamilyParams::Thm3 {
                        epsilon: parse_epsilon(&epsilon)?,
                    },
                    target,
                ),
            };
            let params = ConstructionParams::new(
                load_machine(&machines.mi)?,
                load_machine(&machines.mj)?,
                family,
            )?;
            let g = build(&params, &bits(&target.input)?)?;
            write(&target.out, &(g.formula.serialize() + "\n"))?;
            write(&sidecar(&target.out, ".meta.json"), &(g.meta().to_json() + "\n"))?;
            writeln!(
                out,
                "family {}\nblock {}\nnumvars {}",
                g.family.name(),
                g.family.block_len(),
                g.numvars()
            )
            .map_err(io)?;
        }
        Command::Member { formula, family } => {
            let params = family_params(&family)?;
            if membership_test(&load_formula(&formula)?, &params) {
                writeln!(out, "MEMBER").map_err(io)?;
            } else {
                writeln!(out, "NONMEMBER").map_err(io)?;
                return Err(Failure::Negative);
            }
        }
        Command::Backbone {
            formula,
            method,
            json,
            out: dest,
        } => {
            let f = load_formula(&formula)?;
            let report = match method {
                MethodArg::Brute => frozen_vars_brute(&f, cfg)?,
                MethodArg::Sat => frozen_vars_sat(&f, cfg)?,
            };
            if let Some(dest) = dest {
                write(&dest, &report.to_text())?;
            }
            if json {
                writeln!(out, "{}", report.to_json()).map_err(io)?;
            } else {
                out.write_all(report.to_text().as_bytes()).map_err(io)?;
            }
        }
        Command::BackboneValue {
            formula,
            vars,
            out: dest,
        } => {
            let f = load_formula(&formula)?;
            let set: BTreeSet<VarName> = match (&vars.vars, &vars.vars_from) {
                (Some(list), None) => var_list(list)?.into_iter().collect(),
                (None, Some(path)) => read_assignment(path)?.domain(),
                _ => return Err(Failure::Usage("give exactly one of --vars and --vars-from".into())),
            };
            match backbone_value(&f, &set, cfg) {
                Ok(a) => {
                    let text = print_assignment(out, &a).map_err(io)?;
                    if let Some(dest) = dest {
                        write(&dest, &text)?;
                    }
                }
                Err(Error::NotABackbone) => {
                    writeln!(out, "NOT A BACKBONE").map_err(io)?;
                    return Err(Failure::Negative);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify {
            formula,
            vars,
            values,
            assignment,
        } => {
            let f = load_formula(&formula)?;
            let a = match (vars, values, assignment) {
                (Some(vs), Some(bs), None) => {
                    let names = var_list(&vs)?;
                    let bs = bits(&bs)?;
                    if names.len() != bs.len() {
                        return Err(Failure::Usage(format!(
                            "{} variables but {} values",
                            names.len(),
                            bs.len()
                        )));
                    }
                    let a: PartialAssignment = names.iter().cloned().zip(bs.bits().iter().copied()).collect();
                    if a.len() != names.len() {
                        return Err(Failure::Usage("a variable is listed twice".into()));
                    }
                    a
                }
                (None, None, Some(path)) => read_assignment(&path)?,
                _ => return Err(Failure::Usage("give --vars with --values, or --assignment".into())),
            };
            if verify_backbone(&f, &a.domain(), &a, cfg)? {
                writeln!(out, "BACKBONE").map_err(io)?;
            } else {
                writeln!(out, "NOT A BACKBONE").map_err(io)?;
                return Err(Failure::Negative);
            }
        }
        Command::Freq {
            family,
            max_n,
            heuristic,
        } => {
            let params = family_params(&family)?;
            let adapter = builtin_adapter(&heuristic, cfg).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown heuristic `{heuristic}`; choose from {}",
                    BUILTIN_ADAPTERS.join(", ")
                ))
            })?;
            let report = transfer_check(&adapter, &params, max_n, cfg)?;
            out.write_all(report.to_tsv().as_bytes()).map_err(io)?;
            if !report.inequality_holds() {
                return Err(Failure::Negative);
            }
        }
        Command::ExportDimacs { formula, out: dest } => {
            let cnf = tseitin(&load_formula(&formula)?);
            write(&dest, &cnf.to_dimacs())?;
            write(&sidecar(&dest, ".map"), &cnf.origin_map_text())?;
            writeln!(out, "vars {}\nclauses {}", cnf.num_vars, cnf.clauses.len()).map_err(io)?;
        }
        Command::Selfcheck { count } => {
            let mut bad = 0usize;
            for (i, f) in corpus(cli.seed, count, GenConfig::default()).iter().enumerate() {
                let sat = solve_with(f, cfg.sat)?.is_sat();
                let oracle = solve_exhaustive(f, 20)?.is_sat();
                let same = frozen_vars_brute(f, cfg)?.frozen == frozen_vars_sat(f, cfg)?.frozen;
                if sat != oracle || !same {
                    bad += 1;
                    writeln!(out, "mismatch #{i}: {}", f.serialize()).map_err(io)?;
                }
            }
            writeln!(out, "checked {count} formulas, {bad} mismatches").map_err(io)?;
            if bad > 0 {
                return Err(Failure::Negative);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = lock.flush();
            if !matches!(f, Failure::Negative) {
                eprintln!("bblab: {f}");
            }
            ExitCode::from(f.code())
        }
    }
}

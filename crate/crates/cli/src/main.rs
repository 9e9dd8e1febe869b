//! Command-line surface for the branching-program toolkit: evaluation,
//! semantic conversion, circuit compilation, width-5 simulation,
//! decision-tree complexity, property checks, family generation, DOT
//! export, and a representation-size benchmark.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use zsbp::{
    barrington, circuit_to_dot, compile_zs_to_circuit, d_complexity, det_to_zs, gen_family,
    levelize_zs, program_to_dot, ro_det_to_zs, ro_zs_to_det, z_complexity, Assignment,
    BranchingProgram, Circuit, Family, Formula, Semantics, TruthTable,
};

/// Conversions and compilations re-check their output against the input
/// on every assignment up to this many variables unless `--no-verify`.
const VERIFY_CAP: usize = 12;

#[derive(Parser)]
#[command(
    name = "zsbp",
    version,
    about = "Branching programs under deterministic and zero-suppressed semantics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum SemanticsArg {
    Det,
    Zs,
}

impl From<SemanticsArg> for Semantics {
    fn from(arg: SemanticsArg) -> Semantics {
        match arg {
            SemanticsArg::Det => Semantics::Det,
            SemanticsArg::Zs => Semantics::Zs,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    /// Append a conversion chain: reads the input deterministically.
    Det2zs,
    /// Read-once to read-once, via don't-care chains.
    RoDet2zs,
    /// Read-once to read-once, via zero-check chains.
    RoZs2det,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Det2zs => "det2zs",
            ModeArg::RoDet2zs => "ro-det2zs",
            ModeArg::RoZs2det => "ro-zs2det",
        }
    }

    /// Semantics under which input and output compute the same function.
    fn semantics_pair(self) -> (Semantics, Semantics) {
        match self {
            ModeArg::Det2zs | ModeArg::RoDet2zs => (Semantics::Det, Semantics::Zs),
            ModeArg::RoZs2det => (Semantics::Zs, Semantics::Det),
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum MeasureArg {
    D,
    Z,
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    Const1,
    AndNeg,
    ExactlyK,
}

impl From<FamilyArg> for Family {
    fn from(arg: FamilyArg) -> Family {
        match arg {
            FamilyArg::Const1 => Family::Const1,
            FamilyArg::AndNeg => Family::AndOfNegations,
            FamilyArg::ExactlyK => Family::ExactlyK,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program on a single assignment
    Eval {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        /// Bit string, first character is x1
        #[arg(long)]
        assignment: String,
    },
    /// Print a program's full truth table
    Table {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
    },
    /// Rewrite a program so the other semantics computes the same function
    Convert {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Drop nodes unreachable from the start before writing
        #[arg(long)]
        prune: bool,
        /// Skip the built-in equivalence check
        #[arg(long)]
        no_verify: bool,
    },
    /// Compile a zero-suppressed program into a boolean circuit
    Compile {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Print size, depth, levels, and width
        #[arg(long)]
        report: bool,
        /// Skip the built-in equivalence check
        #[arg(long)]
        no_verify: bool,
    },
    /// Simulate a formula by a width-5 program
    Barrington {
        #[arg(long, value_name = "FILE")]
        formula: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Exact decision-tree complexity of a function given by its table
    Complexity {
        #[arg(long, value_enum)]
        measure: MeasureArg,
        /// Truth table bits, index 0 first
        #[arg(long)]
        table: String,
        #[arg(long)]
        vars: usize,
        /// Write an optimal decision tree here
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Verify a structural or semantic property of a program
    #[command(group(
        ArgGroup::new("property").required(true).args(["read_once", "equiv"])
    ))]
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// No path may test the same variable twice
        #[arg(long)]
        read_once: bool,
        /// Compare truth tables with this program
        #[arg(long, value_name = "FILE", requires = "semantics")]
        equiv: Option<PathBuf>,
        /// Semantics for the first program
        #[arg(long, value_enum)]
        semantics: Option<SemanticsArg>,
        /// Semantics for the second program (defaults to --semantics)
        #[arg(long, value_enum, requires = "equiv")]
        other_semantics: Option<SemanticsArg>,
    },
    /// Generate a standard function family
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        vars: usize,
        /// Required for exactly-k
        #[arg(long)]
        k: Option<usize>,
        /// Print the truth table (default)
        #[arg(long, conflicts_with = "as_dnf")]
        as_table: bool,
        /// Print a disjunctive-normal-form formula file instead
        #[arg(long)]
        as_dnf: bool,
    },
    /// Render a program or circuit as a DOT graph
    ExportDot {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Compare representation sizes over a range of variable counts
    Bench {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Inclusive range such as 2..8
        #[arg(long)]
        vars: String,
        /// Defaults to 1 for exactly-k
        #[arg(long)]
        k: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_program(path: &Path) -> Result<BranchingProgram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let bp =
        BranchingProgram::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    bp.validate()
        .with_context(|| format!("validating {}", path.display()))?;
    Ok(bp)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// First assignment on which the two tables disagree, as a bit string.
fn first_difference(a: &TruthTable, b: &TruthTable) -> Option<String> {
    (0..a.len()).find(|&i| a.bit(i) != b.bit(i)).map(|i| {
        (0..a.n())
            .map(|j| if i >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    })
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval {
            input,
            semantics,
            assignment,
        } => {
            let bp = read_program(&input)?;
            let a = Assignment::parse(&assignment)?;
            if a.n() != bp.n() {
                bail!(
                    "assignment has {} bits but the program reads {}",
                    a.n(),
                    bp.n()
                );
            }
            println!("{}", u8::from(bp.eval(semantics.into(), &a)));
        }
        Command::Table { input, semantics } => {
            let bp = read_program(&input)?;
            println!("{}", bp.truth_table(semantics.into())?.to_bit_string());
        }
        Command::Convert {
            mode,
            input,
            out,
            prune,
            no_verify,
        } => {
            let bp = read_program(&input)?;
            let converted = match mode {
                ModeArg::Det2zs => det_to_zs(&bp),
                ModeArg::RoDet2zs => ro_det_to_zs(&bp)?,
                ModeArg::RoZs2det => ro_zs_to_det(&bp)?,
            };
            let result = if prune { converted.pruned() } else { converted };
            if !no_verify && bp.n() <= VERIFY_CAP {
                let (in_sem, out_sem) = mode.semantics_pair();
                let want = bp.truth_table(in_sem)?;
                let got = result.truth_table(out_sem)?;
                if let Some(at) = first_difference(&want, &got) {
                    bail!(
                        "{} output differs from input at assignment {at}",
                        mode.name()
                    );
                }
                println!("verified: {} assignments", want.len());
            }
            write_file(&out, &result.to_text())?;
            println!("{}: {} -> {} nodes", mode.name(), bp.size(), result.size());
        }
        Command::Compile {
            input,
            out,
            report,
            no_verify,
        } => {
            let bp = read_program(&input)?;
            let lts = levelize_zs(&bp)?;
            let circuit = compile_zs_to_circuit(&bp)?;
            if !no_verify && bp.n() <= VERIFY_CAP {
                let want = bp.truth_table(Semantics::Zs)?;
                let got = circuit.truth_table()?;
                if let Some(at) = first_difference(&want, &got) {
                    bail!("compiled circuit differs from input at assignment {at}");
                }
                println!("verified: {} assignments", want.len());
            }
            write_file(&out, &circuit.to_text())?;
            if report {
                println!("size: {}", circuit.size());
                println!("depth: {}", circuit.depth());
                println!("levels: {}", lts.level_count());
                println!("width: {}", lts.width());
            }
        }
        Command::Barrington { formula, out } => {
            let text = fs::read_to_string(&formula)
                .with_context(|| format!("reading {}", formula.display()))?;
            let parsed = Formula::parse_file(&text)?;
            let bp = barrington(&parsed)?;
            write_file(&out, &bp.to_text())?;
            println!("width-5 program: {} nodes", bp.size());
        }
        Command::Complexity {
            measure,
            table,
            vars,
            witness,
        } => {
            let tt = TruthTable::parse_bits(vars, &table)?;
            let (label, result) = match measure {
                MeasureArg::D => ("D", d_complexity(&tt)?),
                MeasureArg::Z => ("Z", z_complexity(&tt)?),
            };
            println!("{label} = {}", result.value);
            if let Some(path) = witness {
                write_file(&path, &result.witness.program().to_text())?;
            }
        }
        Command::Check {
            input,
            read_once,
            equiv,
            semantics,
            other_semantics,
        } => {
            let bp = read_program(&input)?;
            if read_once {
                match bp.check_read_once() {
                    Ok(()) => println!("read-once: yes"),
                    Err(e) => {
                        println!("read-once: no ({e})");
                        return Ok(ExitCode::FAILURE);
                    }
                }
            } else {
                let other_path = equiv.expect("clap guarantees --equiv here");
                let other = read_program(&other_path)?;
                if other.n() != bp.n() {
                    bail!(
                        "programs read different variable counts ({} vs {})",
                        bp.n(),
                        other.n()
                    );
                }
                let sem: Semantics = semantics.expect("clap ties --semantics to --equiv").into();
                let other_sem = other_semantics.map_or(sem, Semantics::from);
                let mine = bp.truth_table(sem)?;
                let theirs = other.truth_table(other_sem)?;
                match first_difference(&mine, &theirs) {
                    None => println!("equivalent: yes"),
                    Some(at) => {
                        println!("equivalent: no (differ at assignment {at})");
                        return Ok(ExitCode::FAILURE);
                    }
                }
            }
        }
        Command::Gen {
            family,
            vars,
            k,
            as_table: _,
            as_dnf,
        } => {
            let table = gen_family(family.into(), vars, k)?;
            if as_dnf {
                print!("{}", Formula::dnf_of_table(&table)?.to_file_text());
            } else {
                println!("{}", table.to_bit_string());
            }
        }
        Command::ExportDot { input, out } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let dot = match input.extension().and_then(|e| e.to_str()) {
                Some("bp") => program_to_dot(&BranchingProgram::parse(&text)?),
                Some("circ") => circuit_to_dot(&Circuit::parse(&text)?),
                _ => match BranchingProgram::parse(&text) {
                    Ok(bp) => program_to_dot(&bp),
                    Err(_) => circuit_to_dot(
                        &Circuit::parse(&text)
                            .context("input is neither a program nor a circuit")?,
                    ),
                },
            };
            write_file(&out, &dot)?;
        }
        Command::Bench { family, vars, k } => {
            let (lo, hi) = parse_range(&vars)?;
            bench::run(family.into(), lo, hi, k)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses an inclusive `lo..hi` range of variable counts.
fn parse_range(text: &str) -> Result<(usize, usize)> {
    let (lo, hi) = text
        .split_once("..")
        .with_context(|| format!("range {text:?} is not of the form lo..hi"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .with_context(|| format!("bad range start {lo:?}"))?;
    let hi: usize = hi
        .trim()
        .parse()
        .with_context(|| format!("bad range end {hi:?}"))?;
    if lo < 1 || hi < lo {
        bail!("range must satisfy 1 <= lo <= hi");
    }
    Ok((lo, hi))
}

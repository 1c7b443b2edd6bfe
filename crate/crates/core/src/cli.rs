//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{ChainError, Result};
use crate::gen::{gen_benchmark, GenConfig, Noise, NoiseMode};
use crate::hardness::{build_reduction, parse_cnf};
use crate::ideal::{recognize_ideal, Recognition};
use crate::io::{read_instance, read_solution, write_instance_string, write_solution_string, SolutionFile};
use crate::model::{Instance, Mode, ProblemSpec, Side, Solution, Variant};
use crate::oracle::{oracle_solve_with, DEFAULT_CAP};
use crate::solver::solve;
use crate::verify::verify_solution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chainrank", version, about = "Exact chain editing solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve with the polynomial solver for the variant
    Solve(SolveArgs),
    /// Solve by exhaustive enumeration
    Oracle {
        #[command(flatten)]
        solve: SolveArgs,
        /// Maximum number of orderings to enumerate
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Decide whether the graph is already a chain graph
    Recognize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Verify a solution file against an instance
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Generate a noisy chain instance with perturbed base orders
    Gen(GenArgs),
    /// Build the 1-near editing instance of a CNF formula
    Reduce {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time a solver over generated instances and print CSV
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Constrained,
    Unconstrained,
    Both,
    FixedSide,
    FixedBoth,
    Imo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Students,
    Questions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Editing,
    Addition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseModeArg {
    Toggle,
    AddOnly,
    DeleteOnly,
}

#[derive(Debug, Clone, Args)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Fixed side for `--variant fixed-side`
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Allow the exponential solver for unconstrained editing
    #[arg(long)]
    exponential_ok: bool,
}

#[derive(Debug, Clone, Args)]
struct GenArgs {
    #[arg(long)]
    students: usize,
    #[arg(long)]
    questions: usize,
    /// Exact number of toggled pairs
    #[arg(long, conflicts_with = "flip_prob")]
    flips: Option<usize>,
    /// Independent toggle probability per pair
    #[arg(long)]
    flip_prob: Option<f64>,
    #[arg(long, value_enum, default_value = "toggle")]
    noise_mode: NoiseModeArg,
    /// Displacement bound for the base orders
    #[arg(long, default_value_t = 0)]
    k_perturb: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long, value_enum, default_value = "editing")]
    mode: ModeArg,
    /// Square instance sizes to sweep
    #[arg(long, value_delimiter = ',', required = true)]
    sweep: Vec<usize>,
    /// Displacement bounds to sweep
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    /// Number of seeds per point, starting at `--first-seed`
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long, default_value_t = 0.05)]
    flip_prob: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    exponential_ok: bool,
}

fn to_variant(v: VariantArg, side: Option<SideArg>) -> std::result::Result<Variant, String> {
    Ok(match v {
        VariantArg::Constrained => Variant::ConstrainedKnear,
        VariantArg::Unconstrained => Variant::UnconstrainedKnear,
        VariantArg::Both => Variant::BothKnear,
        VariantArg::FixedBoth => Variant::FixedBothCheck,
        VariantArg::Imo => Variant::ImoRecognize,
        VariantArg::FixedSide => match side {
            Some(SideArg::Students) => Variant::FixedOneSide(Side::StudentsFixed),
            Some(SideArg::Questions) => Variant::FixedOneSide(Side::QuestionsFixed),
            None => return Err("--variant fixed-side needs --side students|questions".into()),
        },
    })
}

fn to_mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Editing => Mode::Editing,
        ModeArg::Addition => Mode::Addition,
    }
}

impl ProblemArgs {
    fn merged(&self, fallback: Option<ProblemSpec>) -> std::result::Result<ProblemSpec, String> {
        let variant = match self.variant {
            Some(v) => to_variant(v, self.side)?,
            None => fallback.map(|s| s.variant).ok_or("--variant is required")?,
        };
        let mode = match self.mode {
            Some(m) => to_mode(m),
            None => fallback.map(|s| s.mode).unwrap_or(Mode::Editing),
        };
        let k = self.k.or(fallback.map(|s| s.k)).unwrap_or(0);
        Ok(ProblemSpec::new(variant, mode, k))
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &ChainError) -> i32 {
    match err {
        ChainError::Infeasible(_)
        | ChainError::NotIdeal(..)
        | ChainError::NotNested { .. }
        | ChainError::Unsatisfied(_)
        | ChainError::NotWithinBudget { .. } => EXIT_INFEASIBLE,
        ChainError::Internal(_) | ChainError::CorruptTable(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn dispatch<S: AsRef<str>>(argv: &[S]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|a| a.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

enum Failure {
    Usage(String),
    Lib(ChainError),
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        Failure::Lib(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl From<&str> for Failure {
    fn from(e: &str) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finish_solution(
    inst: &Instance,
    spec: ProblemSpec,
    sol: Solution,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let report = verify_solution(inst, &spec, &sol);
    let file = SolutionFile {
        solution: sol,
        spec: Some(spec),
        verified: Some(report.passed()),
    };
    emit(out, output, &write_solution_string(&file))?;
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        let _ = write!(err, "solver output failed verification:\n{report}");
        Ok(EXIT_INTERNAL)
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Solve(args) => {
            let spec = args.problem.merged(None)?;
            let inst = read_instance(&args.input)?;
            if spec.variant == Variant::UnconstrainedKnear && spec.mode == Mode::Editing && !args.exponential_ok {
                return Err(Failure::Usage(
                    "unconstrained k-near editing is NP-hard and has no polynomial solver; run `chainrank oracle` \
                     or pass --exponential-ok to use the exponential exact solver"
                        .into(),
                ));
            }
            let sol = solve(&inst, &spec, args.exponential_ok)?;
            finish_solution(&inst, spec, sol, args.output.as_deref(), out, err)
        }
        Command::Oracle { solve: args, cap } => {
            let spec = args.problem.merged(None)?;
            let inst = read_instance(&args.input)?;
            let sol = oracle_solve_with(&inst, &spec, cap)?;
            finish_solution(&inst, spec, sol, args.output.as_deref(), out, err)
        }
        Command::Recognize { input } => {
            let inst = read_instance(&input)?;
            match recognize_ideal(&inst) {
                Recognition::Ideal(cert) => {
                    let _ = writeln!(out, "ideal");
                    let _ = writeln!(out, "student_order: {}", join(cert.student_order.order()));
                    let _ = writeln!(out, "question_order: {}", join(cert.question_order.order()));
                    Ok(EXIT_OK)
                }
                Recognition::NotIdeal { witness } => {
                    let _ = writeln!(out, "not ideal");
                    let _ = writeln!(out, "witness: {} {}", witness.0, witness.1);
                    Ok(EXIT_INFEASIBLE)
                }
            }
        }
        Command::Check {
            input,
            solution,
            problem,
        } => {
            let inst = read_instance(&input)?;
            let file = read_solution(&solution)?;
            let spec = problem.merged(file.spec)?;
            let report = verify_solution(&inst, &spec, &file.solution);
            let _ = write!(out, "{report}");
            Ok(if report.passed() { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::Gen(args) => {
            let noise = match (args.flips, args.flip_prob) {
                (Some(f), _) => Noise::FlipCount(f),
                (None, Some(p)) => Noise::FlipProbability(p),
                (None, None) => Noise::FlipCount(0),
            };
            let cfg = GenConfig {
                num_students: args.students,
                num_questions: args.questions,
                noise,
                k_perturb: args.k_perturb,
                seed: args.seed,
                noise_mode: match args.noise_mode {
                    NoiseModeArg::Toggle => NoiseMode::Toggle,
                    NoiseModeArg::AddOnly => NoiseMode::AddOnly,
                    NoiseModeArg::DeleteOnly => NoiseMode::DeleteOnly,
                },
            };
            let g = gen_benchmark(&cfg)?;
            let mut text = format!(
                "# seed {} true students: {} true questions: {}\n",
                args.seed,
                join(g.true_student_order.order()),
                join(g.true_question_order.order())
            );
            text.push_str(&write_instance_string(&g.instance));
            emit(out, args.output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { cnf, output } => {
            let phi = parse_cnf(&std::fs::read_to_string(&cnf).map_err(ChainError::from)?)?;
            let red = build_reduction(&phi)?;
            let mut text = format!(
                "# unconstrained editing, k {}, budget t_phi {}\n# clause questions: {}\n",
                red.k,
                red.t_phi,
                join(&red.clause_question_ids)
            );
            text.push_str(&write_instance_string(&red.instance));
            emit(out, output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Bench(args) => bench(&args, out),
    }
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let variant = to_variant(args.variant, args.side)?;
    let mode = to_mode(args.mode);
    if variant == Variant::UnconstrainedKnear && mode == Mode::Editing && !args.exponential_ok {
        return Err("unconstrained k-near editing is NP-hard; pass --exponential-ok to bench the exact solver".into());
    }
    let mut csv = String::from("variant,mode,n_students,n_questions,k,seed,cost,wall_ms\n");
    for &n in &args.sweep {
        for &k in &args.k {
            for seed in args.first_seed..args.first_seed + args.seeds {
                let cfg = GenConfig {
                    num_students: n,
                    num_questions: n,
                    noise: Noise::FlipProbability(args.flip_prob),
                    k_perturb: k,
                    seed,
                    noise_mode: NoiseMode::Toggle,
                };
                let inst = gen_benchmark(&cfg)?.instance;
                let spec = ProblemSpec::new(variant, mode, k);
                let start = Instant::now();
                let cost = match solve(&inst, &spec, args.exponential_ok) {
                    Ok(sol) => sol.cost.to_string(),
                    Err(ChainError::Infeasible(_) | ChainError::NotIdeal(..)) => "infeasible".into(),
                    Err(e) => return Err(e.into()),
                };
                let ms = start.elapsed().as_secs_f64() * 1e3;
                csv.push_str(&format!(
                    "{},{},{n},{n},{k},{seed},{cost},{ms:.3}\n",
                    variant.name(),
                    mode.name()
                ));
            }
        }
    }
    emit(out, args.output.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

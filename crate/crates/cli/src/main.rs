use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use asp_embed::encodings;
use asp_embed::eval::{self, AnswerSet, EvaluationLimits, Interpretation};
use asp_embed::syntax::{parse_program, Program};
use asp_embed::systems::{
    self, filter_option, models_option, OptionDescriptor, SolverKind, SolverSpec,
};

/// Exit status when no answer set exists or a check fails.
const NO: u8 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "asp-embed",
    version,
    about = "Answer set programs: solve, check and ground"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the answer sets of the given program files.
    Solve(SolveArgs),
    /// Decide whether an interpretation is an answer set.
    Check(CheckArgs),
    /// Print the full ground instantiation.
    Ground(GroundArgs),
    /// Write the files of a bundled example.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum System {
    Ref,
    Clingo,
    Dlv,
}

impl System {
    fn kind(self) -> SolverKind {
        match self {
            System::Ref => SolverKind::Reference,
            System::Clingo => SolverKind::Clingo,
            System::Dlv => SolverKind::Dlv,
        }
    }
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Maximum number of atoms the search may branch on.
    #[arg(long, value_name = "N")]
    limit_atoms: Option<usize>,
    /// Maximum number of ground rules.
    #[arg(long, value_name = "N")]
    limit_rules: Option<usize>,
}

impl LimitArgs {
    fn limits(&self) -> EvaluationLimits {
        let mut l = EvaluationLimits::default();
        if let Some(n) = self.limit_atoms {
            l.max_candidate_atoms = n;
        }
        if let Some(n) = self.limit_rules {
            l.max_ground_rules = n;
        }
        l
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = System::Ref)]
    system: System,
    /// Stop after N answer sets; 0 prints all.
    #[arg(short = 'n', long = "models", value_name = "N", default_value_t = 0)]
    models: usize,
    /// Only print atoms of these predicates (ref and dlv).
    #[arg(long, value_delimiter = ',', value_name = "PRED,...")]
    filter: Vec<String>,
    /// Print only optimal answer sets, each followed by its cost.
    #[arg(long)]
    optimize: bool,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Ground facts, one per line.
    #[arg(short, long, value_name = "FILE")]
    interpretation: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct GroundArgs {
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct ExamplesArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(encodings::NAMES))]
    name: String,
    /// Directory to write into.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

fn read_sources(files: &[PathBuf]) -> Result<String> {
    let mut text = String::new();
    for f in files {
        let part =
            std::fs::read_to_string(f).with_context(|| format!("cannot read {}", f.display()))?;
        text.push_str(&part);
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }
    Ok(text)
}

fn read_program(files: &[PathBuf]) -> Result<Program> {
    Ok(parse_program(&read_sources(files)?)?)
}

fn read_interpretation(path: &Path) -> Result<Interpretation> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let p = parse_program(&text).with_context(|| format!("in {}", path.display()))?;
    if !p.weak_constraints.is_empty() || p.rules.iter().any(|r| !r.is_fact() || !r.is_ground()) {
        bail!(
            "{}: an interpretation lists ground facts only",
            path.display()
        );
    }
    Ok(p.facts().cloned().collect())
}

fn solve(args: &SolveArgs) -> Result<u8> {
    let kind = args.system.kind();
    let text = read_sources(&args.files)?;
    let mut options: Vec<OptionDescriptor> = Vec::new();
    if args.models > 0 {
        options.push(models_option(args.models, kind));
    } else if kind == SolverKind::Clingo {
        options.push(models_option(0, kind));
    }
    if !args.filter.is_empty() {
        options.push(filter_option(&args.filter)?);
    }
    if args.optimize && kind != SolverKind::Dlv {
        options.push(OptionDescriptor::flag("--opt-mode=optN"));
    }
    let spec = match kind {
        SolverKind::Reference => SolverSpec::reference().with_limits(args.limits.limits()),
        other => SolverSpec::from_env(other),
    };
    let (_, parsed) = systems::solve(&spec, &text, &options, None)?;

    let mut sets: Vec<AnswerSet> = if args.optimize {
        parsed.optimal()
    } else {
        parsed.sets
    };
    sets.sort_by_cached_key(|s| s.atoms.to_string());
    sets.dedup();
    if args.models > 0 {
        sets.truncate(args.models);
    }
    for s in &sets {
        println!("{}", s.atoms);
        if args.optimize {
            println!("Cost: {}", s.cost);
        }
    }
    Ok(if sets.is_empty() { NO } else { 0 })
}

fn check(args: &CheckArgs) -> Result<u8> {
    let p = read_program(&args.files)?;
    let i = read_interpretation(&args.interpretation)?;
    let verdict = eval::is_answer_set(&i, &p, &args.limits.limits())?;
    println!("{verdict}");
    Ok(if verdict == eval::Verdict::Yes { 0 } else { NO })
}

fn ground(args: &GroundArgs) -> Result<u8> {
    let p = read_program(&args.files)?;
    let gp = eval::ground_program(&p, &args.limits.limits())?;
    for line in gp.sorted_lines() {
        println!("{line}");
    }
    Ok(0)
}

fn examples(args: &ExamplesArgs) -> Result<u8> {
    let files = encodings::example(&args.name).expect("validated by clap");
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    for b in files {
        let path = args.out.join(b.file);
        std::fs::write(&path, b.text)
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Command::Solve(a) = &cli.command {
        if a.system == System::Clingo && !a.filter.is_empty() {
            Cli::command()
                .error(
                    ErrorKind::ArgumentConflict,
                    "--filter is not available with --system clingo",
                )
                .exit();
        }
    }
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Check(a) => check(a),
        Command::Ground(a) => ground(a),
        Command::Examples(a) => examples(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

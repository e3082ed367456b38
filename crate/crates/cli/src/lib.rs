//! The `morphplan` command line. `run` takes the argument list and output
//! streams so the binary and the tests share one code path.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use morphplan::changeops::resolve_operation_ids;
use morphplan::datasets::{
    builtin_configuration, builtin_documents, builtin_model, builtin_stage_plans, enterprise_model,
};
use morphplan::mckp::verify_selection;
use morphplan::planner::ChainDocument;
use morphplan::report::Style;
use morphplan::{
    diff_configurations, parse_model, plan_chain, render_strategy, solve, validate_configuration, ComponentTree,
    Configuration, Error, MckpInstance, SolverKind, StagePlan, StrategyReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Environment variable that turns off text styling.
pub const NO_COLOR_VAR: &str = "MORPHPLAN_NO_COLOR";

#[derive(Parser, Debug)]
#[command(
    name = "morphplan",
    version,
    about = "Morphological system models and staged improvement planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a model and optionally configurations against it.
    Validate {
        /// Model file, or a built-in model name (wireless, enterprise).
        model: String,
        /// Configuration files or built-in configuration ids.
        configs: Vec<String>,
    },
    /// Per-leaf changes between two configurations.
    Diff {
        #[arg(long)]
        model: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Solve a knapsack instance or an operation-set document.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solver: Option<SolverArg>,
    },
    /// Check a claimed selection against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated operation ids, or `group:item` pairs (1-based).
        #[arg(long, value_delimiter = ',')]
        selection: Vec<String>,
    },
    /// Plan a chain of improvement stages.
    Plan {
        #[arg(long, required_unless_present_any = ["paper_example", "chain"])]
        model: Option<String>,
        #[arg(long, required_unless_present_any = ["paper_example", "chain"])]
        initial: Option<String>,
        #[arg(long, value_delimiter = ',', required_unless_present_any = ["paper_example", "chain"])]
        stages: Vec<PathBuf>,
        /// Run the built-in two-stage wireless example.
        #[arg(long, conflicts_with_all = ["model", "initial", "stages", "chain"])]
        paper_example: bool,
        /// Chain document naming model, initial configuration and stages.
        #[arg(long, conflicts_with_all = ["model", "initial", "stages"])]
        chain: Option<PathBuf>,
        /// Override the solver of every stage.
        #[arg(long)]
        solver: Option<SolverArg>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Built-in datasets.
    Datasets {
        #[command(subcommand)]
        action: DatasetAction,
    },
    /// Print a saved strategy report.
    Report {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum DatasetAction {
    /// Write every built-in document into a directory.
    Export { dir: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SolverArg {
    Greedy,
    Dp,
    Exhaustive,
}

impl From<SolverArg> for SolverKind {
    fn from(arg: SolverArg) -> Self {
        match arg {
            SolverArg::Greedy => SolverKind::Greedy,
            SolverArg::Dp => SolverKind::Dp,
            SolverArg::Exhaustive => SolverKind::Exhaustive,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

/// A failed command: exit code plus a one-line diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("cannot read {}: {err}", path.display()),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Infeasible | Error::BudgetTooLarge(_) | Error::InstanceTooLarge(_) => EXIT_SOLVER,
            _ => EXIT_FINDINGS,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Output sinks plus styling choice for one invocation.
struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    style: Style,
}

impl Io<'_> {
    fn emit(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }

    fn emit_json(&mut self, value: &Value) {
        let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
        text.push('\n');
        self.emit(&text);
    }

    fn note(&mut self, message: &str) {
        let _ = writeln!(self.err, "morphplan: {message}");
    }
}

/// Runs the CLI without text styling. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_styled(args, out, err, false)
}

/// Like [`run`], with ANSI styling of text reports when `color` is set.
pub fn run_styled<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io {
        out,
        err,
        style: if color { Style::Ansi } else { Style::Plain },
    };
    let result = match cli.command {
        Command::Validate { model, configs } => cmd_validate(&mut io, &model, &configs),
        Command::Diff { model, from, to } => cmd_diff(&mut io, &model, &from, &to),
        Command::Solve { instance, solver } => cmd_solve(&mut io, &instance, solver.map(Into::into)),
        Command::Verify { instance, selection } => cmd_verify(&mut io, &instance, &selection),
        Command::Plan {
            model,
            initial,
            stages,
            paper_example,
            chain,
            solver,
            format,
        } => {
            let inputs = if paper_example {
                builtin_inputs()
            } else if let Some(chain) = chain {
                chain_inputs(&chain)
            } else {
                file_inputs(
                    model.as_deref().unwrap_or_default(),
                    initial.as_deref().unwrap_or_default(),
                    &stages,
                )
            };
            inputs.and_then(|inputs| cmd_plan(&mut io, inputs, solver.map(Into::into), format))
        }
        Command::Datasets {
            action: DatasetAction::Export { dir },
        } => cmd_export(&mut io, &dir),
        Command::Report { strategy, format } => cmd_report(&mut io, &strategy, format),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            io.note(&failure.message);
            failure.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// A model file path, or one of the built-in model names.
fn load_model(arg: &str) -> Result<ComponentTree, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(parse_model(&read(path)?)?);
    }
    match arg {
        "wireless" | "S" => Ok(builtin_model()),
        "enterprise" => Ok(enterprise_model()),
        _ => Err(Failure::usage(format!(
            "model {arg:?} is neither a readable file nor a built-in model"
        ))),
    }
}

/// A configuration file path, or a built-in configuration id such as S5G.
fn load_configuration(arg: &str) -> Result<Configuration, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(Configuration::parse(&read(path)?)?);
    }
    builtin_configuration(arg).ok_or_else(|| {
        Failure::usage(format!(
            "configuration {arg:?} is neither a readable file nor a built-in configuration"
        ))
    })
}

fn cmd_validate(io: &mut Io, model: &str, configs: &[String]) -> CmdResult {
    let tree = match load_model(model) {
        Ok(tree) => tree,
        Err(f) if f.code == EXIT_FINDINGS => {
            io.emit_json(&json!({ "model": model, "valid": false, "errors": [f.message] }));
            return Ok(EXIT_FINDINGS);
        }
        Err(f) => return Err(f),
    };
    let mut all_valid = true;
    let mut reports = Vec::new();
    for arg in configs {
        let config = load_configuration(arg);
        let (id, findings) = match config {
            Ok(config) => {
                let findings: Vec<String> = validate_configuration(&tree, &config)
                    .iter()
                    .map(ToString::to_string)
                    .collect();
                (config.id, findings)
            }
            Err(f) if f.code == EXIT_FINDINGS => (arg.clone(), vec![f.message]),
            Err(f) => return Err(f),
        };
        all_valid &= findings.is_empty();
        reports.push(json!({ "id": id, "valid": findings.is_empty(), "findings": findings }));
    }
    io.emit_json(&json!({
        "model": tree.id(),
        "valid": all_valid,
        "leaves": tree.leaves().len(),
        "alternatives": tree.alternative_count(),
        "depth": tree.depth(),
        "configurations": reports,
    }));
    Ok(if all_valid { EXIT_OK } else { EXIT_FINDINGS })
}

fn cmd_diff(io: &mut Io, model: &str, from: &str, to: &str) -> CmdResult {
    let tree = load_model(model)?;
    let from = load_configuration(from)?;
    let to = load_configuration(to)?;
    let deltas = diff_configurations(&tree, &from, &to)?;
    io.emit_json(&serde_json::to_value(&deltas).expect("deltas serialize"));
    Ok(EXIT_OK)
}

/// Either document shape accepted by `solve` and `verify`.
enum InstanceDoc {
    Plain(MckpInstance),
    Stage(StagePlan),
}

impl InstanceDoc {
    fn instance(&self) -> Result<MckpInstance, Failure> {
        match self {
            InstanceDoc::Plain(instance) => Ok(instance.clone()),
            InstanceDoc::Stage(plan) => Ok(plan.instance()?),
        }
    }
}

/// Operation-set documents carry a `stage_id`; anything else is read as a
/// plain instance.
fn load_instance(path: &Path) -> Result<InstanceDoc, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
    if value.get("stage_id").is_some() {
        Ok(InstanceDoc::Stage(StagePlan::parse(&text)?))
    } else {
        Ok(InstanceDoc::Plain(MckpInstance::parse(&text)?))
    }
}

fn cmd_solve(io: &mut Io, path: &Path, solver: Option<SolverKind>) -> CmdResult {
    let doc = load_instance(path)?;
    let kind = match (&doc, solver) {
        (_, Some(kind)) => kind,
        (InstanceDoc::Stage(plan), None) => plan.solver,
        (InstanceDoc::Plain(_), None) => SolverKind::Dp,
    };
    let solution = solve(&doc.instance()?, kind)?;
    io.emit(&solution.to_json_pretty());
    Ok(EXIT_OK)
}

fn parse_pair(token: &str) -> Option<(usize, usize)> {
    let (g, j) = token.split_once(':')?;
    let (g, j) = (g.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?);
    (g >= 1 && j >= 1).then(|| (g - 1, j - 1))
}

fn cmd_verify(io: &mut Io, path: &Path, selection: &[String]) -> CmdResult {
    let doc = load_instance(path)?;
    let instance = doc.instance()?;
    let tokens: Vec<&str> = selection.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    let picks = match &doc {
        InstanceDoc::Stage(plan) if tokens.iter().all(|t| !t.contains(':')) => {
            resolve_operation_ids(&plan.groups, &tokens)?
        }
        _ => tokens
            .iter()
            .map(|t| {
                parse_pair(t).ok_or_else(|| Failure::usage(format!("bad selection token {t:?}, expected group:item")))
            })
            .collect::<Result<_, _>>()?,
    };
    let (findings, profit, cost) = verify_selection(&instance, &picks);
    let messages: Vec<String> = findings.iter().map(ToString::to_string).collect();
    io.emit_json(&json!({
        "feasible": messages.is_empty(),
        "profit": profit,
        "cost": cost,
        "budget": instance.budget(),
        "comparator": instance.comparator(),
        "selection": picks.iter().map(|&(g, j)| format!("{}:{}", g + 1, j + 1)).collect::<Vec<_>>(),
        "findings": messages,
    }));
    if messages.is_empty() {
        Ok(EXIT_OK)
    } else {
        for message in &messages {
            io.note(message);
        }
        Ok(EXIT_SOLVER)
    }
}

struct PlanInputs {
    tree: ComponentTree,
    initial: Configuration,
    stages: Vec<StagePlan>,
}

fn builtin_inputs() -> Result<PlanInputs, Failure> {
    let (s1, s2) = builtin_stage_plans();
    Ok(PlanInputs {
        tree: builtin_model(),
        initial: builtin_configuration("S5G").expect("S5G is built in"),
        stages: vec![s1, s2],
    })
}

fn load_stages(paths: &[PathBuf]) -> Result<Vec<StagePlan>, Failure> {
    paths.iter().map(|p| Ok(StagePlan::parse(&read(p)?)?)).collect()
}

fn file_inputs(model: &str, initial: &str, stages: &[PathBuf]) -> Result<PlanInputs, Failure> {
    Ok(PlanInputs {
        tree: load_model(model)?,
        initial: load_configuration(initial)?,
        stages: load_stages(stages)?,
    })
}

fn chain_inputs(path: &Path) -> Result<PlanInputs, Failure> {
    let chain: ChainDocument = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let resolve = |rel: &str| base.join(rel).to_string_lossy().into_owned();
    let model = chain.model.as_deref().map(resolve).unwrap_or_else(|| "wireless".into());
    let stages: Vec<PathBuf> = chain.stages.iter().map(|s| base.join(s)).collect();
    file_inputs(&model, &resolve(&chain.initial), &stages)
}

fn cmd_plan(io: &mut Io, inputs: PlanInputs, solver: Option<SolverKind>, format: Format) -> CmdResult {
    let stages: Vec<StagePlan> = match solver {
        Some(kind) => inputs.stages.into_iter().map(|s| s.with_solver(kind)).collect(),
        None => inputs.stages,
    };
    let strategy = plan_chain(&inputs.tree, &inputs.initial, &stages)?;
    let report = render_strategy(&inputs.tree, &strategy)?;
    print_report(io, &report, format);
    match &strategy.failure {
        None => Ok(EXIT_OK),
        Some(failure) => {
            io.note(&format!("stage {} failed: {}", failure.stage_id, failure.message));
            Ok(if failure.message.starts_with("infeasible") {
                EXIT_SOLVER
            } else {
                EXIT_FINDINGS
            })
        }
    }
}

fn print_report(io: &mut Io, report: &StrategyReport, format: Format) {
    match format {
        Format::Json => io.emit(&report.to_json_pretty()),
        Format::Text => {
            let text = report.to_text(io.style);
            io.emit(&text);
        }
    }
}

fn cmd_export(io: &mut Io, dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    let mut names = Vec::new();
    for (name, content) in builtin_documents() {
        let path = dir.join(&name);
        fs::write(&path, content).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        names.push(name);
    }
    io.emit_json(&json!(names));
    Ok(EXIT_OK)
}

fn cmd_report(io: &mut Io, path: &Path, format: Format) -> CmdResult {
    let report = StrategyReport::parse(&read(path)?)?;
    print_report(io, &report, format);
    Ok(EXIT_OK)
}

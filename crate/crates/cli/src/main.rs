//! `defalliance`: batch front end for the alliance toolkit.
//!
//! Exit codes: 0 yes/success, 1 no, 2 usage or parse error, 3 budget
//! exceeded. Reports go to stdout as JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alliance_core::alliance::{is_defensive_alliance, is_solution, primal_graph};
use alliance_core::gen::{self, MmoParams};
use alliance_core::io::{self, AnyInstance, Format, StageDoc};
use alliance_core::mmo::{max_weighted_outdegree, solve_mmo};
use alliance_core::pipeline::{run_pipeline, PipelineOptions, DEFAULT_MAX_VERTICES};
use alliance_core::reductions::{
    apply_stage, lift_solution, mmo2fnc_stage, orientation_to_solution, project_solution, solution_to_orientation,
    tau_fn_auto,
};
use alliance_core::solver::{solve, Answer, Goal, SolveRequest, DEFAULT_BUDGET};
use alliance_core::treewidth::{heuristic_td, make_nice, transform_td, treewidth_exact_small};
use alliance_core::{AllianceInstance, Error, Graph, Mode, ReductionStage, StageTag, TreeDecomposition, VertexSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "defalliance", version, about = "Defensive alliances, MMO reductions and tree decompositions")]
struct Cli {
    /// Write DOT renderings of the graphs involved into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    dot: Option<PathBuf>,

    /// More log output on stderr (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Instance file (JSON, or an edge list together with --k).
    input: PathBuf,

    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Size bound; required for edge lists, overrides JSON otherwise.
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AtMost,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::AtMost => Mode::AtMost,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    Decide,
    Minimum,
    EnumerateAll,
    Count,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Goal {
        match g {
            GoalArg::Decide => Goal::Decide,
            GoalArg::Minimum => Goal::Minimum,
            GoalArg::EnumerateAll => Goal::EnumerateAll,
            GoalArg::Count => Goal::Count,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mmo,
    Fnc,
    Fn,
    F,
}

#[derive(Subcommand)]
enum Command {
    /// Check a candidate set against an alliance instance.
    Verify {
        /// Comma-separated vertices; pass "" for the empty set.
        #[arg(short = 'S', long = "set", value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Solve an alliance or MMO instance exhaustively.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "decide")]
        goal: GoalArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Unit propagation over gadget blocks; same answers, smaller search.
        #[arg(long)]
        propagate: bool,
    },
    /// Apply one reduction stage, or run the chain from an MMO instance.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, conflicts_with = "chain", required_unless_present = "chain")]
        stage: Option<StageTag>,
        /// Run the chain from an MMO instance.
        #[arg(long)]
        chain: bool,
        /// Last chain stage to build.
        #[arg(long, requires = "chain", default_value = "F2DA")]
        until: StageTag,
        /// Decomposition of the input structure to carry along.
        #[arg(long, value_name = "FILE")]
        td: Option<PathBuf>,
        /// Carry a heuristic decomposition along.
        #[arg(long, conflicts_with = "td")]
        auto_td: bool,
        /// Decide the last instance and map the witness back (chain only).
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        propagate: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
        /// Write each intermediate instance and decomposition here.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
    /// Tree decomposition of the instance's (primal) graph.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        nice: bool,
        /// Report the exact treewidth (at most 12 vertices).
        #[arg(long, conflicts_with = "nice")]
        exact: bool,
        /// Min-fill heuristic (the default).
        #[arg(long)]
        heuristic: bool,
    },
    /// Audit the solution bijection of one stage on an instance.
    Roundtrip {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        stage: StageTag,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        propagate: bool,
    },
    /// Seeded random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        seed: u64,
        /// Vertex count (alliance kinds) or maximum vertex count (mmo).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        pairs: usize,
    },
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Fail(3, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

type Outcome = Result<bool, Fail>;

fn emit_stdout(text: &str) {
    use std::io::Write;
    // a closed pipe (`| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(value: &serde_json::Value) {
    emit_stdout(&format!("{}\n", serde_json::to_string_pretty(value).expect("json values serialise")));
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn load(args: &InputArgs) -> Result<AnyInstance, Fail> {
    let text = read(&args.input)?;
    let format = match args.format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Edgelist) => Format::EdgeList,
        None if args.input.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{') => Format::Json,
        None => Format::EdgeList,
    };
    let mode = args.mode.map(Mode::from);
    let parsed = io::parse_instance(&text, format, args.k, mode.unwrap_or(Mode::AtMost))
        .map_err(|e| Fail(2, format!("{}: {e}", args.input.display())))?;
    Ok(match parsed {
        AnyInstance::Alliance(i) => {
            let i = if let (Format::Json, Some(k)) = (format, args.k) { i.with_k(k)? } else { i };
            let i = match mode {
                Some(m) => i.with_mode(m)?,
                None => i,
            };
            AnyInstance::Alliance(i)
        }
        other => other,
    })
}

fn load_alliance(args: &InputArgs) -> Result<AllianceInstance, Fail> {
    match load(args)? {
        AnyInstance::Alliance(i) => Ok(i),
        AnyInstance::Mmo(_) => Err(Fail(2, "expected an alliance instance, got an MMO instance".into())),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Fail> {
    fs::create_dir_all(dir).map_err(|e| Fail(2, format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn dot(cli_dot: &Option<PathBuf>, name: &str, g: &Graph) -> Result<(), Fail> {
    match cli_dot {
        Some(dir) => write_file(dir, &format!("{name}.dot"), &g.to_dot(name)),
        None => Ok(()),
    }
}

fn parse_set(items: &[String]) -> Result<VertexSet, Fail> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e: Error| Fail(2, e.to_string())))
        .collect()
}

fn verify(cli: &Cli, set: &[String], input: &InputArgs) -> Outcome {
    let inst = load_alliance(input)?;
    let s = parse_set(set)?;
    dot(&cli.dot, "instance", inst.graph())?;
    let verdict = is_defensive_alliance(inst.graph(), &s)?;
    let ok = is_solution(&inst, &s)?;
    let violators = match &verdict {
        alliance_core::Verdict::Yes => VertexSet::new(),
        alliance_core::Verdict::No { violators } => violators.clone(),
    };
    print(&json!({
        "solution": ok,
        "defensive_alliance": verdict.is_yes(),
        "violators": violators,
        "size": s.len(),
        "k": inst.k(),
        "mode": inst.mode(),
    }));
    Ok(ok)
}

fn solve_cmd(cli: &Cli, input: &InputArgs, goal: GoalArg, budget: usize, propagate: bool) -> Outcome {
    match load(input)? {
        AnyInstance::Mmo(m) => {
            dot(&cli.dot, "instance", m.graph())?;
            let o = solve_mmo(&m)?;
            let arcs = o.as_ref().map(|o| o.arcs().map(|(t, h)| (t.clone(), h.clone())).collect::<Vec<_>>());
            let outdeg = o.as_ref().map(|o| max_weighted_outdegree(&m, o)).transpose()?;
            print(&json!({ "yes": o.is_some(), "orientation": arcs, "max_outdegree": outdeg, "r": m.r() }));
            Ok(o.is_some())
        }
        AnyInstance::Alliance(inst) => {
            dot(&cli.dot, "instance", inst.graph())?;
            let report = solve(&SolveRequest::new(&inst, goal.into()).budget(budget).propagate(propagate))?;
            let yes = report.answer.is_yes();
            let mut value = serde_json::to_value(&report).expect("report serialises");
            value["yes"] = json!(yes);
            print(&value);
            Ok(yes)
        }
    }
}

fn load_td(path: &Path) -> Result<TreeDecomposition, Fail> {
    Ok(TreeDecomposition::parse_text(&read(path)?)?)
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    cli: &Cli,
    input: &InputArgs,
    stage: Option<StageTag>,
    chain: Option<StageTag>,
    td: &Option<PathBuf>,
    auto_td: bool,
    solve_last: bool,
    budget: usize,
    propagate: bool,
    max_vertices: usize,
    emit: &Option<PathBuf>,
) -> Outcome {
    let inst = load(input)?;
    let structure = match &inst {
        AnyInstance::Mmo(m) => m.graph().clone(),
        AnyInstance::Alliance(i) => primal_graph(i),
    };
    let decomposition = match td {
        Some(p) => Some(load_td(p)?),
        None if auto_td => Some(heuristic_td(&structure)),
        None => None,
    };
    if let Some(last) = chain {
        let AnyInstance::Mmo(m) = inst else {
            return Err(Fail(2, "--chain starts from an MMO instance".into()));
        };
        let upto = StageTag::CHAIN.iter().position(|&t| t == last).expect("tag in chain");
        let opts = PipelineOptions {
            stages: StageTag::CHAIN[..=upto].to_vec(),
            mode: input.mode.map(Mode::from).unwrap_or(Mode::AtMost),
            decomposition,
            solve: solve_last,
            budget,
            propagate,
            max_vertices,
        };
        let run = run_pipeline(&m, &opts)?;
        dot(&cli.dot, "source", m.graph())?;
        for (i, s) in run.stages.iter().enumerate() {
            dot(&cli.dot, &format!("stage{}_{}", i + 1, s.tag), s.output.graph())?;
            if let Some(dir) = emit {
                write_file(dir, &format!("stage{}_{}.json", i + 1, s.tag), &io::stage_to_json(s))?;
            }
        }
        if let Some(dir) = emit {
            for (i, (t, s)) in run.decompositions.iter().zip(&run.stages).enumerate() {
                write_file(dir, &format!("stage{}_{}.td", i + 1, s.tag), &t.to_text(None))?;
            }
        }
        let value = serde_json::to_value(&run.report).expect("report serialises");
        print(&value);
        if run.report.budget_exceeded {
            return Err(Fail(3, "final instance exceeds the solver budget; report above is partial".into()));
        }
        return Ok(run.report.decision.as_ref().is_none_or(|d| d.yes));
    }

    let tag = stage.expect("clap enforces --stage or --chain");
    let (built, input_td): (ReductionStage, Option<TreeDecomposition>) = match (&inst, tag) {
        (AnyInstance::Mmo(m), StageTag::Mmo2Fnc) => {
            (mmo2fnc_stage(m, input.mode.map(Mode::from).unwrap_or(Mode::AtMost))?, decomposition)
        }
        (AnyInstance::Alliance(i), StageTag::Fn2F) => match decomposition {
            Some(t) => {
                let nice = make_nice(&t);
                (tau_fn_auto(i, Some(&nice))?, Some(nice.into_td()))
            }
            None => (tau_fn_auto(i, None)?, None),
        },
        (AnyInstance::Alliance(i), t) if t != StageTag::Mmo2Fnc => (apply_stage(t, i, None)?, decomposition),
        _ => return Err(Fail(2, format!("{tag} does not accept this kind of instance"))),
    };
    dot(&cli.dot, "input", &structure)?;
    dot(&cli.dot, "output", built.output.graph())?;
    let mut value = serde_json::to_value(StageDoc::from_stage(&built)).expect("stage serialises");
    if let Some(t) = input_td {
        let out = transform_td(&built, &t)?;
        value["input_width"] = json!(t.width());
        value["output_width"] = json!(out.width());
        value["width_bound"] = json!(tag.width_bound(t.width()));
        if let Some(dir) = emit {
            write_file(dir, "output.td", &out.to_text(None))?;
        }
        if let Some(dir) = &cli.dot {
            write_file(dir, "output_td.dot", &out.to_dot("output_td"))?;
        }
    }
    if let Some(dir) = emit {
        write_file(dir, &format!("{tag}.json"), &io::stage_to_json(&built))?;
    }
    print(&value);
    Ok(true)
}

fn decompose(cli: &Cli, input: &InputArgs, nice: bool, exact: bool) -> Outcome {
    let g = match load(input)? {
        AnyInstance::Mmo(m) => m.graph().clone(),
        AnyInstance::Alliance(i) => primal_graph(&i),
    };
    dot(&cli.dot, "graph", &g)?;
    let td = heuristic_td(&g);
    if exact {
        let w = treewidth_exact_small(&g)?;
        print(&json!({ "treewidth": w, "heuristic_width": td.width() }));
        return Ok(true);
    }
    let text = if nice {
        let n = make_nice(&td);
        if let Some(dir) = &cli.dot {
            write_file(dir, "td.dot", &n.td().to_dot("td"))?;
        }
        n.to_text()
    } else {
        if let Some(dir) = &cli.dot {
            write_file(dir, "td.dot", &td.to_dot("td"))?;
        }
        td.to_text(None)
    };
    emit_stdout(&text);
    Ok(true)
}

fn enumerate(inst: &AllianceInstance, budget: usize, propagate: bool) -> Result<Vec<VertexSet>, Fail> {
    match solve(&SolveRequest::new(inst, Goal::EnumerateAll).budget(budget).propagate(propagate))?.answer {
        Answer::EnumerateAll { solutions } => Ok(solutions),
        _ => unreachable!("enumerate-all answers with a list"),
    }
}

fn roundtrip(input: &InputArgs, tag: StageTag, budget: usize, propagate: bool) -> Outcome {
    let inst = load(input)?;
    if let (AnyInstance::Mmo(m), StageTag::Mmo2Fnc) = (&inst, tag) {
        let stage = mmo2fnc_stage(m, input.mode.map(Mode::from).unwrap_or(Mode::AtMost))?;
        let sols = enumerate(&stage.output, budget, propagate)?;
        let mut problems = Vec::new();
        for s in &sols {
            let o = solution_to_orientation(m, s)?;
            if max_weighted_outdegree(m, &o)? > m.r() || &orientation_to_solution(m, &o)? != s {
                problems.push(format!("solution {s:?} does not round-trip"));
            }
        }
        let direct = solve_mmo(m)?.is_some();
        if direct == sols.is_empty() {
            problems.push("decisions differ".into());
        }
        print(&json!({ "stage": tag, "mmo_yes": direct, "output_solutions": sols.len(), "ok": problems.is_empty(), "problems": problems }));
        return Ok(problems.is_empty());
    }
    let AnyInstance::Alliance(i) = inst else {
        return Err(Fail(2, format!("{tag} does not accept an MMO instance")));
    };
    let stage = match tag {
        StageTag::Fn2F => tau_fn_auto(&i, Some(&make_nice(&heuristic_td(&primal_graph(&i)))))?,
        StageTag::Mmo2Fnc => return Err(Fail(2, "MMO2FNC needs an MMO instance".into())),
        t => apply_stage(t, &i, None)?,
    };
    let ins = enumerate(&i, budget, propagate)?;
    let outs = enumerate(&stage.output, budget, propagate)?;
    let mut problems = Vec::new();
    if ins.len() != outs.len() {
        problems.push(format!("{} input vs {} output solutions", ins.len(), outs.len()));
    }
    for s in &ins {
        let l = lift_solution(&stage, s)?;
        if l.len() as i64 != stage.size_fn.apply(s.len() as i64) {
            problems.push(format!("size of lift({s:?}) is off"));
        }
        if !outs.contains(&l) || project_solution(&stage, &l)? != *s {
            problems.push(format!("lift/project mismatch at {s:?}"));
        }
    }
    for t in &outs {
        if lift_solution(&stage, &project_solution(&stage, t)?)? != *t {
            problems.push(format!("lift(project) mismatch at {t:?}"));
        }
    }
    print(&json!({
        "stage": tag,
        "input_solutions": ins.len(),
        "output_solutions": outs.len(),
        "size_fn": stage.size_fn,
        "ok": problems.is_empty(),
        "problems": problems,
    }));
    Ok(problems.is_empty())
}

fn gen_cmd(kind: KindArg, seed: u64, n: Option<usize>, pairs: usize) -> Outcome {
    let mut rng = gen::rng(seed);
    let text = match kind {
        KindArg::Mmo => {
            let p = MmoParams { max_vertices: n.unwrap_or(4), ..MmoParams::default() };
            io::mmo_to_json(&gen::random_mmo(&mut rng, &p))
        }
        KindArg::Fnc => {
            let n = n.unwrap_or(4);
            if n < 2 || pairs == 0 || pairs > n * (n - 1) / 2 {
                return Err(Fail(2, format!("cannot place {pairs} pairs on {n} vertices")));
            }
            io::alliance_to_json(&gen::random_fnc(&mut rng, n, pairs))
        }
        KindArg::Fn => io::alliance_to_json(&gen::random_fn(&mut rng, n.unwrap_or(4).max(1))),
        KindArg::F => io::alliance_to_json(&gen::random_f(&mut rng, n.unwrap_or(4).max(1), 2)),
    };
    emit_stdout(&text);
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Verify { set, input } => verify(cli, set, input),
        Command::Solve { input, goal, budget, propagate } => solve_cmd(cli, input, *goal, *budget, *propagate),
        Command::Reduce { input, stage, chain, until, td, auto_td, solve, budget, propagate, max_vertices, emit } => reduce(
            cli,
            input,
            *stage,
            chain.then_some(*until),
            td,
            *auto_td,
            *solve,
            *budget,
            *propagate,
            *max_vertices,
            emit,
        ),
        Command::Decompose { input, nice, exact, heuristic: _ } => decompose(cli, input, *nice, *exact),
        Command::Roundtrip { input, stage, budget, propagate } => roundtrip(input, *stage, *budget, *propagate),
        Command::Gen { kind, seed, n, pairs } => gen_cmd(*kind, *seed, *n, *pairs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

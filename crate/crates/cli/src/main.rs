//! `passalloc`: allocate museum-pass revenue and check allocation rules.
//!
//! Exit status: 0 on success, 1 when a check fails (invalid problem, audit
//! failure, Owen mismatch, missing witness, reproduced violation), 2 on usage
//! or input errors.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use passalloc_core::axioms::{
    self, audit, independence_witnesses, replay, theorem_axioms, AuditConfig, AxiomId, IndependenceConfig, Witness,
};
use passalloc_core::games::{build_game, owen, DEFAULT_BOUND};
use passalloc_core::io::{parse_problem, parse_problem_data, problem_to_json, serialize_problem};
use passalloc_core::problem::validate;
use passalloc_core::randgen::{generate, GenConfig, PassMix, Span};
use passalloc_core::rules::{allocate, allocate_ee};
use passalloc_core::transforms::{
    reduce_problem, restrict, split_consortium, split_museum, ConsortiumSplitSpec, MuseumSplitSpec,
};
use passalloc_core::{parse_rational, ConsortiumId, MuseumId, PassId, Problem, Rational, RuleId};

#[derive(Parser)]
#[command(name = "passalloc", version, about = "Revenue allocation for museum passes sold by consortia")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem file against every invariant.
    Validate { file: PathBuf },
    /// Split the revenue of a problem with one rule.
    Allocate {
        #[arg(long)]
        rule: RuleId,
        file: PathBuf,
    },
    /// Check a rule against axioms on seeded random problems.
    Audit {
        #[arg(long)]
        rule: RuleId,
        /// Comma-separated axiom names, or `all`.
        #[arg(long, default_value = "all")]
        axioms: String,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[command(flatten)]
        generator: GenArgs,
        /// Witnesses kept per axiom.
        #[arg(long, default_value_t = 3)]
        max_witnesses: usize,
        /// Also write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search counterexamples showing the axioms of a characterisation are independent.
    Independence {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        theorem: u8,
        #[arg(long, default_value_t = 500)]
        budget: usize,
        /// Instances audited to confirm the remaining axioms (0 skips).
        #[arg(long, default_value_t = 100)]
        confirm: usize,
        #[command(flatten)]
        generator: GenArgs,
        /// Directory receiving one replayable witness file per rule.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare the Owen value of the problem's game with the egalitarian-egalitarian rule.
    Owen {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Generate a random problem.
    Gen {
        #[command(flatten)]
        generator: GenArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a transformation and print the resulting problem.
    Transform(TransformArgs),
    /// Re-run the check recorded in a witness file.
    Replay { file: PathBuf },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, env = "PASSALLOC_SEED", default_value_t = 0)]
    seed: u64,
    /// Museum count, `N` or `MIN..MAX`.
    #[arg(long, value_parser = parse_span, default_value = "1..6")]
    museums: Span,
    #[arg(long, value_parser = parse_span, default_value = "1..3")]
    consortia: Span,
    #[arg(long, value_parser = parse_span, default_value = "0..3")]
    holders_per_pass: Span,
    #[arg(long, default_value_t = 12)]
    max_holders: usize,
    #[arg(long, default_value_t = 12)]
    price_numerator_max: u32,
    #[arg(long, default_value_t = 4)]
    price_denominator_max: u32,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Only sell the general pass.
    #[arg(long)]
    general_only: bool,
    /// Make every consortium a single museum.
    #[arg(long)]
    singletons: bool,
}

impl GenArgs {
    fn config(&self) -> anyhow::Result<GenConfig> {
        let config = GenConfig {
            museums: self.museums,
            consortia: self.consortia,
            holders_per_pass: self.holders_per_pass,
            max_holders: self.max_holders,
            price_numerator_max: self.price_numerator_max,
            price_denominator_max: self.price_denominator_max,
            density: self.density,
            sales: if self.general_only { PassMix::GENERAL_ONLY } else { PassMix::ALL },
            singleton_partition: self.singletons,
            seed: self.seed,
        };
        config.check()?;
        Ok(config)
    }
}

fn parse_span(text: &str) -> Result<Span, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match text.split_once("..") {
        Some((lo, hi)) => Ok(Span::new(parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => {
            let n = parse(text)?;
            Ok(Span::new(n, n))
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    file: PathBuf,
    /// Museum to split.
    #[arg(long, requires = "prices", group = "op")]
    split_museum: Option<usize>,
    /// Piece prices for --split-museum, comma-separated.
    #[arg(long)]
    prices: Option<String>,
    /// Consortium to split.
    #[arg(long, requires_all = ["pass_prices", "museum_prices"], group = "op")]
    split_consortium: Option<usize>,
    /// Copy pass prices for --split-consortium, comma-separated.
    #[arg(long)]
    pass_prices: Option<String>,
    /// Member prices per copy for --split-consortium: `a,b;c,d` (copies separated by `;`).
    #[arg(long)]
    museum_prices: Option<String>,
    /// Collapse each consortium into one museum (general pass only).
    #[arg(long, group = "op")]
    reduce: bool,
    /// Keep only the holders of the pass with this sigma.
    #[arg(long, group = "op", allow_hyphen_values = true)]
    restrict: Option<i64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Errors that map to exit status 2.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

type Outcome = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { file } => cmd_validate(cli.format, file),
        Command::Allocate { rule, file } => cmd_allocate(cli.format, *rule, file),
        Command::Audit { rule, axioms, instances, generator, max_witnesses, out } => {
            let axioms = parse_axioms(*rule, axioms)?;
            let config = AuditConfig { instances: *instances, generator: generator.config()?, max_witnesses: *max_witnesses };
            cmd_audit(cli.format, *rule, &axioms, &config, out.as_deref())
        }
        Command::Independence { theorem, budget, confirm, generator, out_dir } => {
            let config = IndependenceConfig { budget: *budget, confirm_instances: *confirm, generator: generator.config()? };
            cmd_independence(cli.format, *theorem, &config, out_dir.as_deref())
        }
        Command::Owen { file, bound } => cmd_owen(cli.format, file, *bound),
        Command::Gen { generator, output } => {
            let problem = generate(&generator.config()?);
            emit_problem(cli.format, "gen", &problem, output.as_deref(), json!({ "seed": generator.seed }))
        }
        Command::Transform(args) => cmd_transform(cli.format, args),
        Command::Replay { file } => cmd_replay(cli.format, file),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Problem, UsageError> {
    let text = read(path)?;
    parse_problem(&text).map_err(|e| UsageError(anyhow!("{}: {e}", path.display())))
}

fn envelope(command: &str, meta: Value, body: Value) -> String {
    let mut header = json!({ "tool": "passalloc", "version": env!("CARGO_PKG_VERSION"), "command": command });
    if let (Value::Object(h), Value::Object(m)) = (&mut header, meta) {
        h.extend(m);
    }
    serde_json::to_string_pretty(&json!({ "header": header, "body": body })).expect("json values serialize")
}

fn cmd_validate(format: Format, path: &Path) -> Outcome {
    let text = read(path)?;
    let data = match parse_problem_data(&text) {
        Ok(d) => d,
        Err(e) => return Err(UsageError(anyhow!("{}: {e}", path.display()))),
    };
    let report = validate(&data);
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "validate",
                json!({ "file": path.display().to_string() }),
                json!({ "valid": report.is_ok(), "violations": report.violations.iter().map(|v| json!({
                    "invariant": v.invariant(),
                    "detail": v.to_string(),
                })).collect::<Vec<_>>() }),
            )
        ),
        Format::Table => {
            if report.is_ok() {
                println!("{}: valid", path.display());
            } else {
                println!("{}: {} violation(s)", path.display(), report.violations.len());
                for v in &report.violations {
                    println!("  {v}");
                }
            }
        }
    }
    Ok(report.is_ok())
}

fn cmd_allocate(format: Format, rule: RuleId, path: &Path) -> Outcome {
    let problem = load(path)?;
    let allocation = allocate(rule, &problem)?;
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "allocate",
                json!({ "rule": rule, "file": path.display().to_string() }),
                json!({
                    "payouts": allocation,
                    "total": render::fraction(&allocation.total()),
                    "revenue": render::fraction(&problem.revenue()),
                }),
            )
        ),
        Format::Table => print!("{}", render::allocation_table(rule, &problem, &allocation)),
    }
    Ok(true)
}

fn parse_axioms(rule: RuleId, text: &str) -> anyhow::Result<Vec<AxiomId>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(theorem_axioms(rule).map_or_else(|| AxiomId::ALL.to_vec(), <[AxiomId]>::to_vec));
    }
    let mut out: Vec<AxiomId> = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let axiom: AxiomId = part.parse()?;
        if !out.contains(&axiom) {
            out.push(axiom);
        }
    }
    if out.is_empty() {
        bail!("no axioms selected");
    }
    Ok(out)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_audit(format: Format, rule: RuleId, axioms: &[AxiomId], config: &AuditConfig, out: Option<&Path>) -> Outcome {
    let report = audit(rule, config, axioms);
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "audit",
                json!({ "rule": rule, "seed": config.generator.seed, "instances": config.instances }),
                serde_json::to_value(&report)?,
            )
        ),
        Format::Table => print!("{}", render::audit_table(&report)),
    }
    Ok(report.clean())
}

fn witness_file_name(theorem: u8, rule: RuleId, axiom: AxiomId) -> String {
    format!("theorem{theorem}-{rule}-{axiom}.json")
}

fn cmd_independence(format: Format, theorem: u8, config: &IndependenceConfig, out_dir: Option<&Path>) -> Outcome {
    let report = independence_witnesses(theorem, config)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for entry in &report.entries {
            if let Some(w) = &entry.witness {
                write_json(&dir.join(witness_file_name(theorem, entry.rule, entry.violates)), w)?;
            }
        }
    }
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "independence",
                json!({ "theorem": theorem, "seed": config.generator.seed, "budget": config.budget }),
                serde_json::to_value(&report)?,
            )
        ),
        Format::Table => print!("{}", render::independence_table(&report)),
    }
    Ok(report.entries.iter().all(|e| !e.exhausted()))
}

fn cmd_owen(format: Format, path: &Path, bound: usize) -> Outcome {
    let problem = load(path)?;
    let game = build_game(&problem, bound)?;
    let value = owen(&game, &problem.data().consortia)?;
    let ee = allocate_ee(&problem);
    let equal = value.as_slice() == ee.payouts();
    let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "owen",
                json!({ "file": path.display().to_string() }),
                json!({
                    "game": game,
                    "owen": value.iter().map(render::fraction).collect::<Vec<_>>(),
                    "ee": ee,
                    "verdict": verdict,
                }),
            )
        ),
        Format::Table => print!("{}", render::owen_table(&problem, &game, &value, &ee, verdict)),
    }
    Ok(equal)
}

fn emit_problem(format: Format, command: &str, problem: &Problem, output: Option<&Path>, meta: Value) -> Outcome {
    let text = serialize_problem(problem.data());
    if let Some(path) = output {
        fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    match (format, output) {
        (Format::Json, _) => println!("{}", envelope(command, meta, problem_to_json(problem.data()))),
        (Format::Table, None) => print!("{text}"),
        (Format::Table, Some(path)) => println!(
            "wrote {} ({} museums, {} consortia, {} holders, revenue {})",
            path.display(),
            problem.museum_count(),
            problem.consortium_count(),
            problem.holder_count(),
            render::with_approx(&problem.revenue()),
        ),
    }
    Ok(true)
}

fn price_list(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',').map(|p| parse_rational(p).map_err(|e| anyhow!("bad price `{p}`: {e}"))).collect()
}

fn cmd_transform(format: Format, args: &TransformArgs) -> Outcome {
    let problem = load(&args.file)?;
    let (result, relabel) = if let Some(target) = args.split_museum {
        let spec = MuseumSplitSpec { target: MuseumId(target), piece_prices: price_list(args.prices.as_deref().unwrap_or(""))? };
        let t = split_museum(&problem, &spec)?;
        (t.problem, Some(t.relabel))
    } else if let Some(target) = args.split_consortium {
        let copy_museum_prices = args
            .museum_prices
            .as_deref()
            .unwrap_or("")
            .split(';')
            .map(price_list)
            .collect::<anyhow::Result<Vec<_>>>()?;
        let spec = ConsortiumSplitSpec {
            target: ConsortiumId(target),
            copy_pass_prices: price_list(args.pass_prices.as_deref().unwrap_or(""))?,
            copy_museum_prices,
        };
        let t = split_consortium(&problem, &spec)?;
        (t.problem, Some(t.relabel))
    } else if args.reduce {
        (reduce_problem(&problem)?, None)
    } else if let Some(sigma) = args.restrict {
        (restrict(&problem, PassId::from_sigma(sigma))?, None)
    } else {
        return Err(UsageError(anyhow!(
            "choose one of --split-museum, --split-consortium, --reduce or --restrict"
        )));
    };
    if format == Format::Table {
        let delta = result.revenue() - problem.revenue();
        eprintln!(
            "revenue {} -> {} (change {})",
            render::with_approx(&problem.revenue()),
            render::with_approx(&result.revenue()),
            render::with_approx(&delta),
        );
    }
    let meta = json!({
        "file": args.file.display().to_string(),
        "relabel": relabel,
        "revenue_before": render::fraction(&problem.revenue()),
        "revenue_after": render::fraction(&result.revenue()),
    });
    emit_problem(format, "transform", &result, args.output.as_deref(), meta)
}

fn cmd_replay(format: Format, path: &Path) -> Outcome {
    let text = read(path)?;
    let witness: Witness = serde_json::from_str(&text).with_context(|| format!("{} is not a witness file", path.display()))?;
    let result = replay(&witness)?;
    match format {
        Format::Json => println!(
            "{}",
            envelope(
                "replay",
                json!({ "file": path.display().to_string(), "rule": witness.rule, "axiom": witness.axiom }),
                serde_json::to_value(&result)?,
            )
        ),
        Format::Table => {
            let allocation = axioms::witness_allocation(&witness)?;
            print!("{}", render::replay_table(&witness, &result, &allocation));
        }
    }
    Ok(!result.is_failed())
}

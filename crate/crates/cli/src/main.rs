use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use repchoice_core::enumeration::{for_each_representation, EnumerationBudget};
use repchoice_core::guarantee::Guarantee;
use repchoice_core::procedures::{instantiate_procedure, Procedure, ProcedureKind, ProcedureSpec};
use repchoice_core::properties::{CheckBudget, Checker, Property, Verdict};
use repchoice_core::rationality::{
    classify_procedure, induced_choice_function, rationalize_choice_function,
    rationalize_correspondence,
};
use repchoice_core::replication::run_replication_suite;
use repchoice_core::schema::{analyze_schema, parse_schema, AdtSchema};
use repchoice_core::universe::{AltSet, Universe};

#[derive(Parser)]
#[command(
    name = "repchoice",
    version,
    about = "Choice procedures over represented menus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of printing a table.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Grammar operations.
    Schema {
        #[command(subcommand)]
        command: SchemaCommand,
    },
    /// Procedure operations.
    Proc {
        #[command(subcommand)]
        command: ProcCommand,
    },
    /// List every representation of a menu within the budget.
    Enum(EnumArgs),
    /// Check one property of a procedure.
    Check(CheckArgs),
    /// Search for a preference relation behind a procedure's choices.
    Rationalize(RationalizeArgs),
    /// Check every property and decide rationalizability both ways.
    Classify(ProcArgs),
    /// Run the replication suite.
    Replicate {
        /// Only run cases whose id contains this text.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Subcommand)]
enum SchemaCommand {
    /// Parse a grammar and report its structural flags.
    Check {
        #[arg(long)]
        schema: String,
    },
}

#[derive(Subcommand)]
enum ProcCommand {
    /// Apply a procedure to one term.
    Run {
        #[command(flatten)]
        proc: ProcArgs,
        #[arg(long)]
        term: String,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Grammar file, or one of list, list2, tree, wines, search:<items>.
    #[arg(long)]
    schema: String,
    /// Universe JSON file: {"elements":[{"id":..,"attrs":{..}}]}.
    #[arg(long)]
    universe: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Leaf cap on enumerated terms (default: universe size + 2).
    #[arg(long)]
    max_leaves: Option<usize>,
    /// Abort when one menu has more representations than this.
    #[arg(long)]
    max_terms: Option<usize>,
    /// Represent a menu of k alternatives with at most k + slack leaves.
    #[arg(long)]
    slack: Option<usize>,
    /// Extra leaves allowed when searching for existential witnesses.
    #[arg(long)]
    extra_leaves: Option<usize>,
}

#[derive(Args)]
struct ProcArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Procedure kind, e.g. maximize, sat_list, first_list, table.
    #[arg(long)]
    procedure: String,
    /// Procedure parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// sorted_by:<attr>:<asc|desc> or no_duplicates.
    #[arg(long)]
    guarantee: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated menu; defines the universe when none is given.
    #[arg(long)]
    set: String,
    /// Only keep terms meeting this guarantee.
    #[arg(long)]
    guarantee: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    proc: ProcArgs,
    /// One of EXT, INT, SIND, TIIA, alphaE, gammaE.
    #[arg(long)]
    property: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Function,
    Correspondence,
}

#[derive(Args)]
struct RationalizeArgs {
    #[command(flatten)]
    proc: ProcArgs,
    /// What to rationalize: the induced choice function or the correspondence.
    #[arg(long, value_enum, default_value = "correspondence")]
    target: Target,
}

/// An input error, reported with exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// What a command produced.
struct Outcome {
    success: bool,
    results: Value,
    table: String,
}

#[derive(Default)]
struct Inputs {
    files: Vec<(String, PathBuf, String)>,
}

impl Inputs {
    fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let bytes =
            fs::read(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
        self.files.push((
            role.to_string(),
            path.to_path_buf(),
            hex::encode(Sha256::digest(&bytes)),
        ));
        String::from_utf8(bytes).map_err(|_| Failure(format!("{} is not UTF-8", path.display())))
    }

    fn to_json(&self) -> Value {
        self.files
            .iter()
            .map(|(role, path, digest)| {
                (
                    role.clone(),
                    json!({ "path": path.display().to_string(), "sha256": digest }),
                )
            })
            .collect::<serde_json::Map<_, _>>()
            .into()
    }
}

fn builtin_schema(name: &str) -> Option<AdtSchema> {
    match name {
        "list" => Some(AdtSchema::list()),
        "list2" => Some(AdtSchema::list2()),
        "tree" => Some(AdtSchema::tree()),
        "wines" => Some(AdtSchema::wines()),
        _ => name
            .strip_prefix("search:")
            .and_then(|n| n.parse().ok())
            .filter(|&n| n > 0)
            .map(AdtSchema::search_result),
    }
}

fn load_schema(inputs: &mut Inputs, spec: &str) -> Result<AdtSchema, Failure> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(s) = builtin_schema(spec) {
            return Ok(s);
        }
    }
    let text = inputs.read("schema", path)?;
    parse_schema(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_universe(inputs: &mut Inputs, path: Option<&Path>) -> Result<Universe, Failure> {
    let path = path.ok_or_else(|| Failure("--universe is required".into()))?;
    let text = inputs.read("universe", path)?;
    Universe::from_json(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn budget(args: &BudgetArgs, universe_size: usize) -> CheckBudget {
    let mut e = EnumerationBudget::new(args.max_leaves.unwrap_or(universe_size + 2));
    if let Some(n) = args.max_terms {
        e = e.with_max_terms(n);
    }
    if let Some(s) = args.slack {
        e = e.with_slack(s);
    }
    let mut b = CheckBudget::new(e);
    if let Some(x) = args.extra_leaves {
        b = b.with_extra_leaves(x);
    }
    b
}

fn procedure(inputs: &mut Inputs, args: &ProcArgs) -> Result<Procedure, Failure> {
    let schema = load_schema(inputs, &args.input.schema)?;
    let universe = load_universe(inputs, args.input.universe.as_deref())?;
    let kind: ProcedureKind = args.procedure.parse()?;
    let mut spec = ProcedureSpec::new(kind);
    for kv in &args.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure(format!("--param expects key=value, got `{kv}`")))?;
        spec = spec.param(k.trim(), v.trim());
    }
    let p = instantiate_procedure(&spec, &universe, &schema)?;
    match &args.guarantee {
        Some(g) => Ok(p.with_guarantee(g.parse::<Guarantee>()?, true)?),
        None => Ok(p),
    }
}

fn schema_check(inputs: &mut Inputs, spec: &str) -> Result<Outcome, Failure> {
    let schema = load_schema(inputs, spec)?;
    let flags = analyze_schema(&schema);
    let mut table = format!("schema {}\n", schema.name);
    for (name, v) in [
        ("flat", flags.flat),
        ("productive", flags.productive),
        ("substitutable", flags.substitutable),
        ("expandable", flags.expandable),
        ("representable", flags.representable),
    ] {
        table += &format!("  {name:<14} {v}\n");
    }
    if let Some(n) = flags.discrepancy_note() {
        table += &format!("  note: {n}\n");
    }
    Ok(Outcome {
        success: flags.representable,
        results: json!({
            "schema": schema.to_text(),
            "flags": flags,
            "discrepancy_note": flags.discrepancy_note(),
        }),
        table,
    })
}

fn proc_run(inputs: &mut Inputs, args: &ProcArgs, term: &str) -> Result<Outcome, Failure> {
    let p = procedure(inputs, args)?;
    let x = p.apply_text(term)?;
    let name = p.universe().name(x).to_string();
    Ok(Outcome {
        success: true,
        results: json!({ "procedure": p.spec().to_string(), "term": term, "choice": name }),
        table: format!("{name}\n"),
    })
}

fn enumerate(inputs: &mut Inputs, args: &EnumArgs) -> Result<Outcome, Failure> {
    let schema = load_schema(inputs, &args.input.schema)?;
    let universe = match &args.input.universe {
        Some(path) => load_universe(inputs, Some(path))?,
        None => {
            let ids: Vec<&str> = args.set.split(',').map(str::trim).collect();
            Universe::from_ids(&ids)?
        }
    };
    let set = universe.parse_set(&args.set)?;
    let b = budget(&args.budget, set.len()).enumeration;
    let resolved = match &args.guarantee {
        Some(g) => Some(g.parse::<Guarantee>()?.resolve(&universe)?),
        None => None,
    };
    let mut terms = Vec::new();
    for_each_representation(&schema, set, &b, resolved.as_ref(), |t| {
        terms.push(t.to_sexpr(&schema, &universe));
        std::ops::ControlFlow::Continue(())
    })?;
    let mut table = String::new();
    for t in &terms {
        table += t;
        table.push('\n');
    }
    table += &format!("{} term(s)\n", terms.len());
    Ok(Outcome {
        success: true,
        results: json!({
            "set": universe.format_set(set),
            "max_leaves": b.leaf_cap(set.len()),
            "count": terms.len(),
            "terms": terms,
        }),
        table,
    })
}

fn check(inputs: &mut Inputs, args: &CheckArgs) -> Result<Outcome, Failure> {
    let p = procedure(inputs, &args.proc)?;
    let property: Property = args.property.parse()?;
    let b = budget(&args.proc.budget, p.universe().len());
    let report = Checker::new(&p, &b).check(property)?;
    let mut table = format!(
        "{} {}: {} ({} terms checked, {} violation(s))\n",
        p.spec(),
        property.name(),
        verdict_name(report.verdict),
        report.terms_checked,
        report.violations
    );
    for w in report.witnesses.iter().take(3) {
        table += &format!("  witness {}\n", w.to_json(&p));
    }
    Ok(Outcome {
        success: report.verdict == Verdict::HoldsUpToBudget,
        results: report.to_json(&p),
        table,
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Falsified => "Falsified",
        Verdict::HoldsUpToBudget => "HoldsUpToBudget",
        Verdict::NoWitnessWithinBudget => "NoWitnessWithinBudget",
    }
}

fn menus_json(u: &Universe, pairs: impl Iterator<Item = (AltSet, Value)>) -> Value {
    pairs
        .map(|(a, v)| (u.format_set(a), v))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn rationalize(inputs: &mut Inputs, args: &RationalizeArgs) -> Result<Outcome, Failure> {
    let p = procedure(inputs, &args.proc)?;
    let u = p.universe();
    let b = budget(&args.proc.budget, u.len());
    match args.target {
        Target::Function => {
            let c = induced_choice_function(&p)?;
            let implements = Checker::new(&p, &b).implements(&c)?;
            let r = rationalize_choice_function(&c, u)?;
            let found = implements && r.found();
            let relation = r.relation.as_ref().map(|rel| rel.describe(u));
            let table = match (&relation, implements) {
                (_, false) => "no choice function: the procedure is not extensional\n".to_string(),
                (Some(rel), true) => format!("rationalized by {rel}\n"),
                (None, true) => "no strict order rationalizes the choice function\n".to_string(),
            };
            Ok(Outcome {
                success: found,
                results: json!({
                    "target": "function",
                    "implements_choice_function": implements,
                    "choice_function": menus_json(u, c.iter().map(|(a, x)| (a, u.name(x).into()))),
                    "relation": relation,
                    "candidates_checked": r.candidates_checked,
                    "found": found,
                }),
                table,
            })
        }
        Target::Correspondence => {
            let checker = Checker::new(&p, &b);
            let cc = checker.universal_correspondence(u)?;
            let r = rationalize_correspondence(&cc, u)?;
            let relation = r.relation.as_ref().map(|rel| rel.describe(u));
            let table = match &relation {
                Some(rel) => format!("rationalized by {rel}\n"),
                None => {
                    "no complete transitive relation rationalizes the correspondence\n".to_string()
                }
            };
            Ok(Outcome {
                success: r.found(),
                results: json!({
                    "target": "correspondence",
                    "correspondence": menus_json(u, cc.iter().map(|(a, c)| (a, u.format_set(c).into()))),
                    "relation": relation,
                    "candidates_checked": r.candidates_checked,
                    "found": r.found(),
                }),
                table,
            })
        }
    }
}

fn classify(inputs: &mut Inputs, args: &ProcArgs) -> Result<Outcome, Failure> {
    let p = procedure(inputs, args)?;
    let u = p.universe();
    let b = budget(&args.budget, u.len());
    let checker = Checker::new(&p, &b);
    let mut properties = serde_json::Map::new();
    let mut table = format!("{} on {}\n", p.spec(), p.schema().name);
    for prop in Property::ALL {
        let (text, value) = match checker.check(prop) {
            Ok(r) => (verdict_name(r.verdict).to_string(), r.to_json(&p)),
            Err(e) => (format!("n/a ({e})"), json!({ "error": e.to_string() })),
        };
        table += &format!("  {:<7} {text}\n", prop.name());
        properties.insert(prop.name().to_string(), value);
    }
    drop(checker);
    let v = classify_procedure(&p, &b)?;
    let describe = |r: &Option<repchoice_core::rationality::PreferenceRelation>| {
        r.as_ref().map(|r| r.describe(u))
    };
    table += &format!(
        "  choice function rationalizable: {}{}\n",
        v.cf_rationalizable(),
        describe(&v.cf_relation)
            .map(|r| format!(" ({r})"))
            .unwrap_or_default()
    );
    table += &format!(
        "  correspondence rationalizable:  {}{}\n",
        v.cc_rationalizable(),
        describe(&v.cc_relation)
            .map(|r| format!(" ({r})"))
            .unwrap_or_default()
    );
    let mut verdict = serde_json::to_value(&v)?;
    verdict["cf_relation"] = describe(&v.cf_relation).into();
    verdict["cc_relation"] = describe(&v.cc_relation).into();
    verdict["correspondence"] = menus_json(
        u,
        v.correspondence
            .iter()
            .map(|&(a, c)| (a, u.format_set(c).into())),
    );
    Ok(Outcome {
        success: true,
        results: json!({ "properties": properties, "classification": verdict }),
        table,
    })
}

fn replicate(filter: Option<&str>) -> Result<Outcome, Failure> {
    let report = run_replication_suite(filter);
    let mut table = String::new();
    for c in &report.cases {
        table += &format!(
            "{} {}\n",
            if c.outcome.passed { "PASS" } else { "FAIL" },
            c.id
        );
        for o in c
            .outcome
            .observed
            .iter()
            .filter(|o| o.ends_with("MISMATCH") || o.starts_with("error"))
        {
            table += &format!("    {o}\n");
        }
    }
    for id in &report.manifest_missing {
        table += &format!("MISSING {id}\n");
    }
    table += &format!("{} passed, {} failed\n", report.passed, report.failed);
    Ok(Outcome {
        success: report.all_passed(),
        results: serde_json::to_value(&report)?,
        table,
    })
}

fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut inputs = Inputs::default();
    let (name, result) = match &cli.command {
        Command::Schema {
            command: SchemaCommand::Check { schema },
        } => ("schema check", schema_check(&mut inputs, schema)),
        Command::Proc {
            command: ProcCommand::Run { proc, term },
        } => ("proc run", proc_run(&mut inputs, proc, term)),
        Command::Enum(a) => ("enum", enumerate(&mut inputs, a)),
        Command::Check(a) => ("check", check(&mut inputs, a)),
        Command::Rationalize(a) => ("rationalize", rationalize(&mut inputs, a)),
        Command::Classify(a) => ("classify", classify(&mut inputs, a)),
        Command::Replicate { filter } => ("replicate", replicate(filter.as_deref())),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let report = json!({
        "tool": "repchoice",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "inputs": inputs.to_json(),
        "success": outcome.success,
        "results": outcome.results,
        "timing": { "elapsed_ms": started.elapsed().as_secs_f64() * 1000.0 },
    });
    match &cli.out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            if let Err(e) = write_atomically(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.table),
    }
    if outcome.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

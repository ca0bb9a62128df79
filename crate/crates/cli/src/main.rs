//! Command line for exact ROC analysis of two-premise committee decisions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use paradox_core::analysis::{
    min_committee_size, weight_order_intervals, SizeMetric, ThresholdCurve, DEFAULT_SIZE_CAP,
};
use paradox_core::numeric::{exact_string, parse_exact, rational_grid, to_f64, Rational};
use paradox_core::rules::RuleSpec;
use paradox_core::{
    enumerate_admissible, estimate_rates, is_admissible, metrics, paradox_probability,
    simulate_votes, Admissibility, AdmissibilityViolation, BuiltinRule, CompetenceModel,
    DecisionRule, Error, StateOfNature, TableSpace,
};

mod output;
mod svg;

use output::{cell_10dp, cell_4dp, cell_exact, cell_float, write_out, Csv};

#[derive(Parser)]
#[command(
    name = "paradox",
    about = "Exact ROC analysis of majority decision rules for two-premise committee decisions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// TPR/FPR/AOT/WAOT metrics over a competence grid
    Rates(RatesArgs),
    /// Rule-crossing thresholds D(theta), C(w) and weight-order intervals
    Thresholds(ThresholdsArgs),
    /// Minimum committee size reaching a metric threshold
    Minsize(MinsizeArgs),
    /// ROC scatter plot with AOT triangles, as deterministic SVG
    RocPlot(RocPlotArgs),
    /// Probability that two rules disagree, per state of nature
    Paradox(ParadoxArgs),
    /// Monte Carlo oracle: simulate votes or estimate rates
    Simulate(SimulateArgs),
    /// Check admissibility of a rule or enumerate all admissible rules
    Rules(RulesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct RatesArgs {
    /// Committee size (odd, >= 3)
    #[arg(long)]
    n: u32,
    /// Homogeneous competence grid: comma list or start:stop:step
    #[arg(long, conflicts_with = "model")]
    theta: Option<String>,
    /// Competence model as JSON (or @file), for non-homogeneous committees
    #[arg(long)]
    model: Option<String>,
    /// Comma list of rule names or @file specs
    #[arg(long, default_value = "IbyI,PbyP,CbyC")]
    rules: String,
    /// Comma list of WAOT weights in (0,1)
    #[arg(long, default_value = "0.5")]
    w: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdsArgs {
    #[arg(long)]
    n: u32,
    /// Rule pair: R1R2, R1R3 or R2R3
    #[arg(long)]
    pair: Option<String>,
    /// Competences for --D / --intervals: comma list or start:stop:step
    #[arg(long)]
    theta: Option<String>,
    /// Weights for --C: comma list
    #[arg(long)]
    w: Option<String>,
    /// Emit D(theta), the weight where the pair swaps, per theta
    #[arg(long = "D", conflicts_with_all = ["c", "intervals"])]
    d: bool,
    /// Emit C(w), the largest competence where D crosses w, per w
    #[arg(long = "C", conflicts_with = "intervals")]
    c: bool,
    /// Emit the weight intervals with constant WAOT ranking, per theta
    #[arg(long)]
    intervals: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinsizeArgs {
    /// Built-in rule name
    #[arg(long, default_value = "IbyI")]
    rule: String,
    /// Competence grid: comma list or start:stop:step
    #[arg(long)]
    theta: String,
    /// Metric thresholds, e.g. TPR:0.95,TNR:0.95,AOT:0.45
    #[arg(long)]
    metrics: String,
    /// Largest committee size to try
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RocPlotArgs {
    /// Comma list of committee sizes
    #[arg(long)]
    n: String,
    /// Comma list of competences
    #[arg(long)]
    theta: String,
    #[arg(long, default_value = "IbyI,PbyP,CbyC")]
    rules: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParadoxArgs {
    #[arg(long)]
    n: u32,
    /// Homogeneous competence
    #[arg(long, conflicts_with = "model")]
    theta: Option<String>,
    /// Competence model as JSON (or @file)
    #[arg(long)]
    model: Option<String>,
    /// Exactly two rules to compare
    #[arg(long, default_value = "IbyI,CbyC")]
    rules: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, conflicts_with = "model")]
    theta: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Estimate rates of this rule over all four states
    #[arg(long)]
    rule: Option<String>,
    /// Tally tables under a single state instead
    #[arg(long, conflicts_with = "rule")]
    state: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RulesArgs {
    #[arg(long)]
    n: u32,
    /// Rule name or @file spec to check for admissibility
    #[arg(long, conflicts_with = "enumerate")]
    check: Option<String>,
    /// Enumerate every admissible rule (n <= 7)
    #[arg(long)]
    enumerate: bool,
    /// Print at most this many enumerated rules (default: count only)
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Domain(_)) | CliError::Core(Error::RuleSpec(_)) => 2,
            CliError::Core(Error::Capability(_)) => 3,
            CliError::Core(Error::NotAttained { .. }) => 4,
            CliError::Io(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rates(args) => cmd_rates(args),
        Command::Thresholds(args) => cmd_thresholds(args),
        Command::Minsize(args) => cmd_minsize(args),
        Command::RocPlot(args) => cmd_roc_plot(args),
        Command::Paradox(args) => cmd_paradox(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Rules(args) => cmd_rules(args),
    }
}

// ---- argument parsing helpers ----

fn parse_number_list(s: &str) -> Result<Vec<Rational>, Error> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::domain(format!(
                "grid must be start:stop:step, got {s:?}"
            )));
        }
        let start = parse_exact(parts[0])?;
        let stop = parse_exact(parts[1])?;
        let step = parse_exact(parts[2])?;
        rational_grid(&start, &stop, &step)
    } else {
        s.split(',').map(parse_exact).collect()
    }
}

fn read_arg_or_file(s: &str) -> Result<String, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(s.to_string())
    }
}

fn parse_rule(s: &str, n: u32) -> Result<DecisionRule, CliError> {
    if s.starts_with('@') || s.starts_with('{') {
        let text = read_arg_or_file(s)?;
        let spec: RuleSpec =
            serde_json::from_str(&text).map_err(|e| Error::RuleSpec(format!("{e}")))?;
        Ok(spec.into_rule(n)?)
    } else {
        Ok(DecisionRule::builtin(n, BuiltinRule::parse(s)?)?)
    }
}

fn parse_rule_list(s: &str, n: u32) -> Result<Vec<(String, DecisionRule)>, CliError> {
    s.split(',')
        .map(|name| parse_rule(name, n).map(|r| (display_name(name, &r), r)))
        .collect()
}

fn display_name(arg: &str, rule: &DecisionRule) -> String {
    match rule.builtin_kind() {
        Some(kind) => kind.label().to_string(),
        None => arg.to_string(),
    }
}

fn parse_model(
    theta: Option<&str>,
    model: Option<&str>,
    n: u32,
) -> Result<CompetenceModel, CliError> {
    match (theta, model) {
        (Some(t), None) => Ok(CompetenceModel::homogeneous(parse_exact(t)?)),
        (None, Some(m)) => {
            let text = read_arg_or_file(m)?;
            Ok(CompetenceModel::from_json(&text, n)?)
        }
        (None, None) => Err(Error::domain("either --theta or --model is required").into()),
        (Some(_), Some(_)) => unreachable!("clap marks them as conflicting"),
    }
}

fn parse_pair(s: &str) -> Result<(BuiltinRule, BuiltinRule), Error> {
    match s {
        "R1R2" => Ok((BuiltinRule::IssueByIssue, BuiltinRule::PathByPath)),
        "R1R3" => Ok((BuiltinRule::IssueByIssue, BuiltinRule::CaseByCase)),
        "R2R3" => Ok((BuiltinRule::PathByPath, BuiltinRule::CaseByCase)),
        other => Err(Error::domain(format!(
            "unknown pair {other:?}; expected R1R2, R1R3 or R2R3"
        ))),
    }
}

// ---- rates ----

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct RatesReport {
    rows: Vec<RatesRow>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct RatesRow {
    n: u32,
    theta: String,
    rule: String,
    w: String,
    tpr: String,
    fpr: String,
    fnr: String,
    tnr: String,
    aot: String,
    waot: String,
    tpr_exact: String,
    fpr_exact: String,
    fnr_exact: String,
    tnr_exact: String,
    aot_exact: String,
    waot_exact: String,
}

fn cmd_rates(args: RatesArgs) -> Result<(), CliError> {
    let weights: Vec<Rational> = args
        .w
        .split(',')
        .map(parse_exact)
        .collect::<Result<_, _>>()?;
    let rules = parse_rule_list(&args.rules, args.n)?;

    // (theta label, model) pairs: a homogeneous sweep or one fixed model
    let models: Vec<(String, CompetenceModel)> = match (&args.theta, &args.model) {
        (Some(grid), None) => parse_number_list(grid)?
            .into_iter()
            .map(|t| (exact_string(&t), CompetenceModel::homogeneous(t)))
            .collect(),
        _ => vec![(
            "-".to_string(),
            parse_model(args.theta.as_deref(), args.model.as_deref(), args.n)?,
        )],
    };

    let mut rows = Vec::new();
    for (theta_label, model) in &models {
        for (name, rule) in &rules {
            let m = metrics(args.n, model, rule, &weights)?;
            for (w, waot) in &m.waot {
                rows.push(RatesRow {
                    n: args.n,
                    theta: theta_label.clone(),
                    rule: name.clone(),
                    w: exact_string(w),
                    tpr: cell_4dp(&m.tpr),
                    fpr: cell_4dp(&m.fpr),
                    fnr: cell_4dp(&m.fnr),
                    tnr: cell_4dp(&m.tnr),
                    aot: cell_4dp(&m.aot),
                    waot: cell_4dp(waot),
                    tpr_exact: cell_exact(&m.tpr),
                    fpr_exact: cell_exact(&m.fpr),
                    fnr_exact: cell_exact(&m.fnr),
                    tnr_exact: cell_exact(&m.tnr),
                    aot_exact: cell_exact(&m.aot),
                    waot_exact: cell_exact(waot),
                });
            }
        }
    }

    let content = match args.format {
        OutputFormat::Json => {
            let mut json =
                serde_json::to_string_pretty(&RatesReport { rows }).expect("report serializes");
            json.push('\n');
            json
        }
        OutputFormat::Csv => {
            let mut csv = Csv::new(&[
                "n",
                "theta",
                "rule",
                "tpr",
                "fpr",
                "fnr",
                "tnr",
                "aot",
                "w",
                "waot",
                "tpr_exact",
                "fpr_exact",
                "fnr_exact",
                "tnr_exact",
                "aot_exact",
                "waot_exact",
            ]);
            for r in &rows {
                csv.row(&[
                    r.n.to_string(),
                    r.theta.clone(),
                    r.rule.clone(),
                    r.tpr.clone(),
                    r.fpr.clone(),
                    r.fnr.clone(),
                    r.tnr.clone(),
                    r.aot.clone(),
                    r.w.clone(),
                    r.waot.clone(),
                    r.tpr_exact.clone(),
                    r.fpr_exact.clone(),
                    r.fnr_exact.clone(),
                    r.tnr_exact.clone(),
                    r.aot_exact.clone(),
                    r.waot_exact.clone(),
                ]);
            }
            csv.finish()
        }
    };
    write_out(args.out.as_deref(), &content)?;
    Ok(())
}

// ---- thresholds ----

fn cmd_thresholds(args: ThresholdsArgs) -> Result<(), CliError> {
    let content = if args.intervals {
        let thetas = parse_number_list(
            args.theta
                .as_deref()
                .ok_or_else(|| Error::domain("--intervals needs --theta"))?,
        )?;
        let mut csv = Csv::new(&["n", "theta", "w_low", "w_high", "order"]);
        for theta in &thetas {
            for interval in weight_order_intervals(args.n, theta)? {
                csv.row(&[
                    args.n.to_string(),
                    exact_string(theta),
                    cell_4dp(&interval.lower),
                    cell_4dp(&interval.upper),
                    interval.ranking.to_string(),
                ]);
            }
        }
        csv.finish()
    } else if args.c {
        let (high, low) = parse_pair(
            args.pair
                .as_deref()
                .ok_or_else(|| Error::domain("--C needs --pair"))?,
        )?;
        let curve = ThresholdCurve::new(args.n, high, low)?;
        let ws = parse_number_list(
            args.w
                .as_deref()
                .ok_or_else(|| Error::domain("--C needs --w"))?,
        )?;
        let mut csv = Csv::new(&["n", "pair", "w", "C"]);
        for w in &ws {
            let c = curve.competence_threshold(w)?;
            csv.row(&[
                args.n.to_string(),
                format!(
                    "{}{}",
                    curve.pair().0.short_label(),
                    curve.pair().1.short_label()
                ),
                exact_string(w),
                cell_10dp(&c),
            ]);
        }
        csv.finish()
    } else if args.d {
        let (high, low) = parse_pair(
            args.pair
                .as_deref()
                .ok_or_else(|| Error::domain("--D needs --pair"))?,
        )?;
        let curve = ThresholdCurve::new(args.n, high, low)?;
        let thetas = parse_number_list(
            args.theta
                .as_deref()
                .ok_or_else(|| Error::domain("--D needs --theta"))?,
        )?;
        let mut csv = Csv::new(&["n", "pair", "theta", "D", "D_exact"]);
        for theta in &thetas {
            let d = curve.weight_threshold(theta)?;
            csv.row(&[
                args.n.to_string(),
                format!(
                    "{}{}",
                    curve.pair().0.short_label(),
                    curve.pair().1.short_label()
                ),
                exact_string(theta),
                cell_4dp(&d),
                cell_exact(&d),
            ]);
        }
        csv.finish()
    } else {
        return Err(Error::domain("choose one of --D, --C or --intervals").into());
    };
    write_out(args.out.as_deref(), &content)?;
    Ok(())
}

// ---- minsize ----

fn cmd_minsize(args: MinsizeArgs) -> Result<(), CliError> {
    let rule = BuiltinRule::parse(&args.rule)?;
    let thetas = parse_number_list(&args.theta)?;
    let specs: Vec<(SizeMetric, Rational)> = args
        .metrics
        .split(',')
        .map(|part| {
            let (metric, k) = part.split_once(':').ok_or_else(|| {
                Error::domain(format!("metric spec must be NAME:k, got {part:?}"))
            })?;
            Ok((SizeMetric::parse(metric)?, parse_exact(k)?))
        })
        .collect::<Result<_, Error>>()?;

    let mut header = vec!["metric".to_string(), "k".to_string()];
    header.extend(thetas.iter().map(exact_string));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header_refs);
    let mut missed = 0usize;
    for (metric, k) in &specs {
        let mut row = vec![metric.label().to_string(), exact_string(k)];
        for theta in &thetas {
            match min_committee_size(rule, theta, *metric, k, args.cap) {
                Ok(n) => row.push(n.to_string()),
                Err(Error::NotAttained { cap, .. }) => {
                    row.push(format!(">{cap}"));
                    missed += 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
        csv.row(&row);
    }
    write_out(args.out.as_deref(), &csv.finish())?;
    // the table is still written in full; the exit code flags the gaps
    if missed > 0 {
        return Err(Error::NotAttained {
            what: format!("{missed} table cell(s)"),
            cap: args.cap,
        }
        .into());
    }
    Ok(())
}

// ---- roc-plot ----

fn cmd_roc_plot(args: RocPlotArgs) -> Result<(), CliError> {
    let sizes: Vec<u32> = args
        .n
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::domain(format!("bad committee size {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let thetas = parse_number_list(&args.theta)?;

    let mut points = Vec::new();
    let mut legend: Vec<(String, &'static str)> = Vec::new();
    for n in &sizes {
        let rules = parse_rule_list(&args.rules, *n)?;
        for (name, _) in &rules {
            if !legend.iter().any(|(l, _)| l == name) {
                legend.push((name.clone(), svg::rule_color(name)));
            }
        }
        for theta in &thetas {
            let model = CompetenceModel::homogeneous(theta.clone());
            for (name, rule) in &rules {
                let m = metrics(*n, &model, rule, &[])?;
                points.push(svg::RocPoint {
                    label: format!(
                        "{name} n={n} theta={} AOT={}",
                        exact_string(theta),
                        cell_4dp(&m.aot)
                    ),
                    color: svg::rule_color(name),
                    fpr: to_f64(&m.fpr),
                    tpr: to_f64(&m.tpr),
                });
            }
        }
    }
    let content = svg::render_roc(&points, &legend);
    write_out(args.out.as_deref(), &content)?;
    Ok(())
}

// ---- paradox ----

fn cmd_paradox(args: ParadoxArgs) -> Result<(), CliError> {
    let rules = parse_rule_list(&args.rules, args.n)?;
    if rules.len() != 2 {
        return Err(Error::domain("--rules must name exactly two rules").into());
    }
    let model = parse_model(args.theta.as_deref(), args.model.as_deref(), args.n)?;
    let mut csv = Csv::new(&[
        "n",
        "state",
        "rule_a",
        "rule_b",
        "probability",
        "probability_exact",
        "probability_float",
    ]);
    for state in StateOfNature::ALL {
        let p = paradox_probability(args.n, &model, state, &rules[0].1, &rules[1].1)?;
        csv.row(&[
            args.n.to_string(),
            state.label().to_string(),
            rules[0].0.clone(),
            rules[1].0.clone(),
            cell_4dp(&p),
            cell_exact(&p),
            cell_float(&p),
        ]);
    }
    write_out(args.out.as_deref(), &csv.finish())?;
    Ok(())
}

// ---- simulate ----

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let model = parse_model(args.theta.as_deref(), args.model.as_deref(), args.n)?;
    let report = match (&args.rule, &args.state) {
        (Some(rule), None) => {
            let rule = parse_rule(rule, args.n)?;
            estimate_rates(args.n, &model, &rule, args.trials, args.seed)?
        }
        (None, Some(state)) => {
            let state = StateOfNature::parse(state)?;
            simulate_votes(args.n, &model, state, args.trials, args.seed)?
        }
        _ => return Err(Error::domain("pass exactly one of --rule or --state").into()),
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_out(args.out.as_deref(), &json)?;
    Ok(())
}

// ---- rules ----

fn cmd_rules(args: RulesArgs) -> Result<(), CliError> {
    let content = if let Some(spec) = &args.check {
        let rule = parse_rule(spec, args.n)?;
        let space = TableSpace::new(args.n)?;
        match is_admissible(&rule, &space)? {
            Admissibility::Admissible => format!("admissible: {spec} at n={}\n", args.n),
            Admissibility::Violation(AdmissibilityViolation::Asymmetric { table }) => format!(
                "not admissible: {spec} distinguishes {table} from its transpose {}\n",
                table.transposed()
            ),
            Admissibility::Violation(AdmissibilityViolation::NonMonotone { lower, upper }) => {
                format!(
                    "not admissible: {spec} accepts {lower} but rejects the larger table {upper}\n"
                )
            }
        }
    } else if args.enumerate {
        let rules = enumerate_admissible(args.n)?;
        let space = TableSpace::new(args.n)?;
        let mut s = format!("admissible rules for n={}: {}\n", args.n, rules.count());
        if let Some(limit) = args.limit {
            for rule in rules.iter().take(limit) {
                let accepted: Vec<[u32; 4]> = rule
                    .accept_set(&space)?
                    .iter_indices()
                    .map(|i| space.get(i).counts())
                    .collect();
                s.push_str(&serde_json::to_string(&accepted).expect("serializes"));
                s.push('\n');
            }
        }
        s
    } else {
        return Err(Error::domain("pass one of --check or --enumerate").into());
    };
    write_out(args.out.as_deref(), &content)?;
    Ok(())
}

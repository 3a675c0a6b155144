//! Command-line front end: solve instance files, re-check saved results,
//! and line up the methods side by side. Library form so the integration
//! tests can reuse the schema types.

pub mod schema;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use fairshare_core::bankruptcy::ClaimsProblem;
use fairshare_core::bargaining::DEFAULT_STEP_CAP;
use fairshare_core::multi_commodity::{
    ideal_profile, shared_commodity_count, MultiError, MultiProblem, MultiSolution, MultiTrace,
    DEFAULT_SHARE_TOL,
};
use fairshare_core::oracle::{cg_consistency_check, grid_pareto_check, OracleError};
use fairshare_core::registry::{find_bargaining, find_claims, SolveOptions};

use schema::{
    load_instance, load_result, to_json_string, BargainingCompareFile, BargainingInstance,
    BargainingResultFile, CheckJson, ClaimsCompareFile, ClaimsInstance, ClaimsResultFile,
    Disagreement, Instance, ResultFile, TraceJson, TraceStepJson, VerifyReportFile,
    SCHEMA_VERSION,
};

pub const MAX_PLAYERS: usize = 16;
pub const MAX_COMMODITIES: usize = 128;
pub const MAX_CLAIMANTS: usize = 10_000;

const STEP_CAP_VAR: &str = "FAIRSHARE_MAX_ITERS";

/// Failures carry their process exit code: 2 for anything wrong with the
/// input, 3 for solver breakdowns, 4 for instances past the size guards.
/// Failed verification is not an error; `verify` reports it as exit 1.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Solver(String),
    TooLarge(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Solver(_) => 3,
            CliError::TooLarge(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) | CliError::Solver(msg) | CliError::TooLarge(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fairshare",
    version,
    about = "Fair division of divisible commodities and contested estates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve an instance and print or save the result
    Solve {
        /// Instance file (JSON)
        instance: PathBuf,
        /// raiffa or aumann for commodity instances, talmud or cg for claims
        #[arg(long)]
        method: Option<String>,
        /// Convergence threshold override
        #[arg(long)]
        epsilon: Option<f64>,
        /// Include the iteration trace in table output
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the result JSON to this path
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check a saved result against its instance
    Verify {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Result file produced by solve --output
        result: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Solve with every applicable method and line the answers up
    Compare {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Convergence threshold override
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the comparison JSON to this path
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Solve {
            instance,
            method,
            epsilon,
            trace,
            format,
            output,
        } => {
            let text = match load_instance(instance)? {
                Instance::Bargaining(inst) => {
                    let res = solve_bargaining(&inst, method.as_deref(), *epsilon)?;
                    write_output(output.as_deref(), &res)?;
                    match format {
                        Format::Json => to_json_string(&res),
                        Format::Table => bargaining_table(&res, *trace),
                    }
                }
                Instance::Claims(inst) => {
                    let res = solve_claims(&inst, method.as_deref())?;
                    write_output(output.as_deref(), &res)?;
                    match format {
                        Format::Json => to_json_string(&res),
                        Format::Table => claims_table(&res),
                    }
                }
            };
            print!("{text}");
            Ok(0)
        }
        Command::Verify {
            instance,
            result,
            format,
        } => {
            let checks = match (load_instance(instance)?, load_result(result)?) {
                (Instance::Bargaining(i), ResultFile::Bargaining(r)) => verify_bargaining(&i, &r)?,
                (Instance::Claims(i), ResultFile::Claims(r)) => verify_claims(&i, &r),
                _ => {
                    return Err(CliError::Parse(
                        "instance and result are of different kinds".into(),
                    ))
                }
            };
            let report = VerifyReportFile {
                schema_version: SCHEMA_VERSION,
                overall: checks.iter().all(|c| c.passed),
                checks,
            };
            let text = match format {
                Format::Json => to_json_string(&report),
                Format::Table => verify_table(&report),
            };
            print!("{text}");
            Ok(if report.overall { 0 } else { 1 })
        }
        Command::Compare {
            instance,
            epsilon,
            format,
            output,
        } => {
            let text = match load_instance(instance)? {
                Instance::Bargaining(inst) => {
                    let results = ["raiffa", "aumann"]
                        .iter()
                        .map(|m| solve_bargaining(&inst, Some(m), *epsilon))
                        .collect::<Result<Vec<_>, _>>()?;
                    let doc = BargainingCompareFile {
                        schema_version: SCHEMA_VERSION,
                        results,
                    };
                    write_output(output.as_deref(), &doc)?;
                    match format {
                        Format::Json => to_json_string(&doc),
                        Format::Table => bargaining_compare_table(&doc),
                    }
                }
                Instance::Claims(inst) => {
                    let mut methods = vec!["talmud"];
                    if inst.claims.len() == 2 {
                        methods.push("cg");
                    }
                    let results = methods
                        .iter()
                        .map(|m| solve_claims(&inst, Some(m)))
                        .collect::<Result<Vec<_>, _>>()?;
                    let doc = ClaimsCompareFile {
                        schema_version: SCHEMA_VERSION,
                        results,
                    };
                    write_output(output.as_deref(), &doc)?;
                    match format {
                        Format::Json => to_json_string(&doc),
                        Format::Table => claims_compare_table(&doc),
                    }
                }
            };
            print!("{text}");
            Ok(0)
        }
    }
}

fn write_output<T: serde::Serialize>(path: Option<&Path>, doc: &T) -> Result<(), CliError> {
    if let Some(path) = path {
        fs::write(path, to_json_string(doc))
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn step_cap_from_env() -> Result<usize, CliError> {
    match std::env::var(STEP_CAP_VAR) {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(CliError::Parse(format!(
                "{STEP_CAP_VAR} must be a positive integer, got {text:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_STEP_CAP),
        Err(e) => Err(CliError::Parse(format!("{STEP_CAP_VAR}: {e}"))),
    }
}

fn resolve_epsilon(flag: Option<f64>, file: Option<f64>) -> Result<f64, CliError> {
    let epsilon = flag.or(file).unwrap_or(1e-4);
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(CliError::Parse(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    Ok(epsilon)
}

fn build_problem(inst: &BargainingInstance, epsilon: f64) -> Result<MultiProblem, CliError> {
    if inst.players > MAX_PLAYERS || inst.commodities > MAX_COMMODITIES {
        return Err(CliError::TooLarge(format!(
            "instance has {} players and {} commodities; the solver accepts up to {MAX_PLAYERS} and {MAX_COMMODITIES}",
            inst.players, inst.commodities
        )));
    }
    if inst.utilities.len() != inst.players {
        return Err(CliError::Parse(format!(
            "utilities has {} rows for {} players",
            inst.utilities.len(),
            inst.players
        )));
    }
    if inst.utilities.iter().any(|row| row.len() != inst.commodities) {
        return Err(CliError::Parse(format!(
            "every utilities row must list {} commodities",
            inst.commodities
        )));
    }
    let disagreement = match &inst.disagreement {
        Disagreement::Utilities(d) => {
            if d.len() != inst.players {
                return Err(CliError::Parse(format!(
                    "disagreement lists {} utilities for {} players",
                    d.len(),
                    inst.players
                )));
            }
            d.clone()
        }
        Disagreement::Bundles(rows) => {
            if rows.len() != inst.players
                || rows.iter().any(|row| row.len() != inst.commodities)
            {
                return Err(CliError::Parse(
                    "disagreement bundles must be one row of commodity shares per player".into(),
                ));
            }
            rows.iter()
                .zip(&inst.utilities)
                .map(|(bundle, values)| bundle.iter().zip(values).map(|(b, v)| b * v).sum())
                .collect()
        }
    };
    MultiProblem::new(inst.utilities.clone(), disagreement, epsilon)
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn solve_bargaining(
    inst: &BargainingInstance,
    method_flag: Option<&str>,
    epsilon_flag: Option<f64>,
) -> Result<BargainingResultFile, CliError> {
    let method = method_flag
        .or(inst.method.as_deref())
        .unwrap_or("raiffa")
        .to_string();
    let strategy = find_bargaining(&method).ok_or_else(|| {
        CliError::Parse(format!(
            "unknown bargaining method {method:?}, expected raiffa or aumann"
        ))
    })?;
    let epsilon = resolve_epsilon(epsilon_flag, inst.epsilon)?;
    let problem = build_problem(inst, epsilon)?;
    let options = SolveOptions {
        step_cap: step_cap_from_env()?,
    };
    let solution = strategy.solve(&problem, &options).map_err(|e| match e {
        MultiError::BadInput(_) => CliError::Parse(e.to_string()),
        other => CliError::Solver(other.to_string()),
    })?;
    result_from_solution(&problem, &method, epsilon, &solution)
}

fn result_from_solution(
    problem: &MultiProblem,
    method: &str,
    epsilon: f64,
    solution: &MultiSolution,
) -> Result<BargainingResultFile, CliError> {
    let trace = match &solution.trace {
        MultiTrace::Raiffa(steps) => TraceJson::Midpoints {
            steps: steps
                .iter()
                .map(|s| TraceStepJson {
                    step: s.step,
                    midpoint: s.midpoint.clone(),
                    ideals: s.ideals.clone(),
                    residual: s.residual,
                })
                .collect(),
        },
        MultiTrace::Aumann { rule, pivot, level } => {
            let (ideals, _) = ideal_profile(problem, problem.disagreement())
                .map_err(|e| CliError::Solver(e.to_string()))?;
            let claims = ideals
                .iter()
                .zip(problem.disagreement())
                .map(|(i, d)| i - d)
                .collect();
            TraceJson::Claims {
                rule: rule.label().to_string(),
                pivot: *pivot,
                level: *level,
                claims,
            }
        }
    };
    Ok(BargainingResultFile {
        schema_version: SCHEMA_VERSION,
        method: method.to_string(),
        players: problem.players(),
        commodities: problem.commodities(),
        epsilon,
        utilities: solution.utilities.clone(),
        allocation: solution.allocation.rows().to_vec(),
        shared_commodities: shared_commodity_count(&solution.allocation, DEFAULT_SHARE_TOL),
        trace,
    })
}

fn solve_claims(
    inst: &ClaimsInstance,
    method_flag: Option<&str>,
) -> Result<ClaimsResultFile, CliError> {
    let method = method_flag
        .or(inst.method.as_deref())
        .unwrap_or("talmud")
        .to_string();
    let strategy = find_claims(&method).ok_or_else(|| {
        CliError::Parse(format!(
            "unknown claims method {method:?}, expected talmud or cg"
        ))
    })?;
    if inst.claims.len() > MAX_CLAIMANTS {
        return Err(CliError::TooLarge(format!(
            "{} claimants exceed the limit of {MAX_CLAIMANTS}",
            inst.claims.len()
        )));
    }
    if inst.claims.iter().any(|c| !c.is_finite()) {
        return Err(CliError::Parse("claims must be finite numbers".into()));
    }

    // the rule wants ascending claims; divide there and map awards back
    let mut order: Vec<usize> = (0..inst.claims.len()).collect();
    order.sort_by(|&a, &b| {
        inst.claims[a]
            .partial_cmp(&inst.claims[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let sorted: Vec<f64> = order.iter().map(|&i| inst.claims[i]).collect();
    let problem =
        ClaimsProblem::new(sorted, inst.estate).map_err(|e| CliError::Parse(e.to_string()))?;
    let award = strategy
        .divide(&problem)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let mut awards = vec![0.0; inst.claims.len()];
    for (pos, &original) in order.iter().enumerate() {
        awards[original] = award.amounts[pos];
    }

    Ok(ClaimsResultFile {
        schema_version: SCHEMA_VERSION,
        method,
        claimants: inst.claims.len(),
        estate: inst.estate,
        total_claims: inst.claims.iter().sum(),
        applied_rule: award.applied_rule.label().to_string(),
        claims: inst.claims.clone(),
        awards,
    })
}

fn verify_bargaining(
    inst: &BargainingInstance,
    res: &BargainingResultFile,
) -> Result<Vec<CheckJson>, CliError> {
    if res.players != inst.players || res.commodities != inst.commodities {
        return Err(CliError::Parse(
            "result dimensions do not match the instance".into(),
        ));
    }
    if find_bargaining(&res.method).is_none() {
        return Err(CliError::Parse(format!(
            "result names unknown method {:?}",
            res.method
        )));
    }
    if !res.epsilon.is_finite() || res.epsilon <= 0.0 {
        return Err(CliError::Parse("result epsilon must be positive".into()));
    }
    let problem = build_problem(inst, res.epsilon)?;

    let finite = res.utilities.iter().all(|v| v.is_finite())
        && res.allocation.iter().flatten().all(|v| v.is_finite());
    if !finite {
        return Ok(vec![CheckJson {
            name: "finite-values".into(),
            passed: false,
            measured: f64::INFINITY,
            tolerance: 0.0,
        }]);
    }

    let mut checks = Vec::new();

    // fractions within [0, 1], no commodity handed out more than once
    let mut shape_excess = 0.0f64;
    if res.allocation.len() != res.players
        || res.allocation.iter().any(|r| r.len() != res.commodities)
    {
        shape_excess = f64::INFINITY;
    } else {
        for row in &res.allocation {
            for &v in row {
                shape_excess = shape_excess.max(-v).max(v - 1.0);
            }
        }
        for k in 0..res.commodities {
            let colsum: f64 = res.allocation.iter().map(|r| r[k]).sum();
            shape_excess = shape_excess.max(colsum - 1.0);
        }
        shape_excess = shape_excess.max(0.0);
    }
    checks.push(CheckJson {
        name: "allocation-shape".into(),
        passed: shape_excess <= 1e-9,
        measured: shape_excess,
        tolerance: 1e-9,
    });

    // the allocation must actually produce the recorded utilities
    let mut utility_dev = 0.0f64;
    if shape_excess.is_finite() {
        for (p, row) in res.allocation.iter().enumerate() {
            let total: f64 = row.iter().zip(&inst.utilities[p]).map(|(a, u)| a * u).sum();
            utility_dev = utility_dev.max((total - res.utilities[p]).abs());
        }
    } else {
        utility_dev = f64::INFINITY;
    }
    checks.push(CheckJson {
        name: "utilities-consistent".into(),
        passed: utility_dev <= 1e-6,
        measured: utility_dev,
        tolerance: 1e-6,
    });

    match (&res.method[..], &res.trace) {
        ("raiffa", TraceJson::Midpoints { steps }) => {
            let mut worst_rise = 0.0f64;
            for w in steps.windows(2) {
                worst_rise = worst_rise.max(w[1].residual - w[0].residual);
            }
            checks.push(CheckJson {
                name: "residuals-decreasing".into(),
                passed: worst_rise <= 1e-12,
                measured: worst_rise,
                tolerance: 1e-12,
            });
            let last = steps.last().map(|s| s.residual).unwrap_or(0.0);
            checks.push(CheckJson {
                name: "converged".into(),
                passed: last <= res.epsilon,
                measured: last,
                tolerance: res.epsilon,
            });
        }
        ("aumann", TraceJson::Claims { claims, .. }) => {
            let (ideals, _) = ideal_profile(&problem, problem.disagreement())
                .map_err(|e| CliError::Solver(e.to_string()))?;
            let fresh: Vec<f64> = ideals
                .iter()
                .zip(problem.disagreement())
                .map(|(i, d)| i - d)
                .collect();
            let claims_dev = fresh
                .iter()
                .zip(claims)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            checks.push(CheckJson {
                name: "declared-claims".into(),
                passed: claims_dev <= 1e-6,
                measured: claims_dev,
                tolerance: 1e-6,
            });
            let report =
                cg_consistency_check(&fresh, problem.disagreement(), &res.utilities, 1e-6);
            checks.extend(report.checks.into_iter().map(|c| CheckJson {
                name: c.name,
                passed: c.passed,
                measured: c.measured,
                tolerance: c.tolerance,
            }));
        }
        _ => {
            checks.push(CheckJson {
                name: "trace-kind".into(),
                passed: false,
                measured: 1.0,
                tolerance: 0.0,
            });
        }
    }

    // no allocation may grant everyone epsilon more
    let grid = grid_pareto_check(&problem, &res.utilities, res.epsilon).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::TooLarge(e.to_string()),
    })?;
    checks.extend(grid.checks.into_iter().map(|c| CheckJson {
        name: c.name,
        passed: c.passed,
        measured: c.measured,
        tolerance: c.tolerance,
    }));

    Ok(checks)
}

fn verify_claims(inst: &ClaimsInstance, res: &ClaimsResultFile) -> Vec<CheckJson> {
    if res.awards.iter().any(|v| !v.is_finite()) || inst.claims.iter().any(|v| !v.is_finite()) {
        return vec![CheckJson {
            name: "finite-values".into(),
            passed: false,
            measured: f64::INFINITY,
            tolerance: 0.0,
        }];
    }
    let mut checks = Vec::new();

    let echo_dev = if res.claims.len() == inst.claims.len() && res.claimants == inst.claims.len()
    {
        res.claims
            .iter()
            .zip(&inst.claims)
            .map(|(a, b)| (a - b).abs())
            .fold((res.estate - inst.estate).abs(), f64::max)
    } else {
        f64::INFINITY
    };
    checks.push(CheckJson {
        name: "instance-echo".into(),
        passed: echo_dev <= 1e-12,
        measured: echo_dev,
        tolerance: 1e-12,
    });
    if echo_dev.is_infinite() {
        return checks;
    }

    let balance = (res.awards.iter().sum::<f64>() - res.estate).abs();
    checks.push(CheckJson {
        name: "estate-balance".into(),
        passed: balance <= 1e-9,
        measured: balance,
        tolerance: 1e-9,
    });

    let bounds = res
        .awards
        .iter()
        .zip(&res.claims)
        .map(|(x, c)| (-x).max(x - c))
        .fold(0.0f64, f64::max);
    checks.push(CheckJson {
        name: "award-bounds".into(),
        passed: bounds <= 1e-9,
        measured: bounds,
        tolerance: 1e-9,
    });

    // every pair, or consecutive claim-sorted pairs once that gets quadratic
    let n = res.claims.len();
    let mut pair_dev = 0.0f64;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| res.claims[a].partial_cmp(&res.claims[b]).unwrap());
    let pairs: Vec<(usize, usize)> = if n <= 200 {
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect()
    } else {
        order.windows(2).map(|w| (w[0], w[1])).collect()
    };
    for (i, j) in pairs {
        let report = cg_consistency_check(
            &[res.claims[i], res.claims[j]],
            &[0.0, 0.0],
            &[res.awards[i], res.awards[j]],
            1e-6,
        );
        pair_dev = pair_dev.max(report.checks[0].measured);
    }
    checks.push(CheckJson {
        name: "pairwise-division".into(),
        passed: pair_dev <= 1e-6,
        measured: pair_dev,
        tolerance: 1e-6,
    });

    let expect_rule = if res.estate <= res.total_claims / 2.0 {
        "cea"
    } else {
        "cel"
    };
    let rule_ok = res.applied_rule == expect_rule
        && (res.total_claims - res.claims.iter().sum::<f64>()).abs() <= 1e-9;
    checks.push(CheckJson {
        name: "rule-tag".into(),
        passed: rule_ok,
        measured: if rule_ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });

    checks
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn render_rows(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, cell)| {
                    if i + 1 == row.len() {
                        cell.clone()
                    } else {
                        format!("{cell:<width$}", width = widths[i])
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn bargaining_table(res: &BargainingResultFile, show_trace: bool) -> String {
    let mut head = vec![
        vec!["method".to_string(), res.method.clone()],
        vec!["players".to_string(), res.players.to_string()],
        vec!["commodities".to_string(), res.commodities.to_string()],
        vec!["epsilon".to_string(), fmt6(res.epsilon)],
        vec!["shared".to_string(), res.shared_commodities.to_string()],
    ];
    if let TraceJson::Claims {
        rule, pivot, level, ..
    } = &res.trace
    {
        head.push(vec!["rule".to_string(), rule.clone()]);
        head.push(vec!["pivot".to_string(), pivot.to_string()]);
        head.push(vec!["level".to_string(), fmt6(*level)]);
    }
    let mut blocks = vec![render_rows(&head)];

    let utilities = match &res.trace {
        TraceJson::Claims { claims, .. } => {
            let mut rows = vec![vec![
                "player".to_string(),
                "claim".to_string(),
                "utility".to_string(),
            ]];
            for (p, (c, u)) in claims.iter().zip(&res.utilities).enumerate() {
                rows.push(vec![(p + 1).to_string(), fmt6(*c), fmt6(*u)]);
            }
            rows
        }
        _ => {
            let mut rows = vec![vec!["player".to_string(), "utility".to_string()]];
            for (p, u) in res.utilities.iter().enumerate() {
                rows.push(vec![(p + 1).to_string(), fmt6(*u)]);
            }
            rows
        }
    };
    blocks.push(render_rows(&utilities));

    blocks.push(render_rows(&allocation_rows(res)));

    if show_trace {
        if let TraceJson::Midpoints { steps } = &res.trace {
            let mut rows = vec![std::iter::once("step".to_string())
                .chain((1..=res.players).map(|p| format!("m_{p}")))
                .chain((1..=res.players).map(|p| format!("i_{p}")))
                .chain(std::iter::once("residual".to_string()))
                .collect::<Vec<_>>()];
            for s in steps {
                rows.push(
                    std::iter::once(s.step.to_string())
                        .chain(s.midpoint.iter().map(|v| fmt6(*v)))
                        .chain(s.ideals.iter().map(|v| fmt6(*v)))
                        .chain(std::iter::once(fmt6(s.residual)))
                        .collect(),
                );
            }
            blocks.push(render_rows(&rows));
        }
    }

    blocks.join("\n\n") + "\n"
}

fn claims_table(res: &ClaimsResultFile) -> String {
    let head = vec![
        vec!["method".to_string(), res.method.clone()],
        vec!["claimants".to_string(), res.claimants.to_string()],
        vec!["estate".to_string(), fmt6(res.estate)],
        vec!["total_claims".to_string(), fmt6(res.total_claims)],
        vec!["rule".to_string(), res.applied_rule.clone()],
    ];
    let mut body = vec![vec![
        "claimant".to_string(),
        "claim".to_string(),
        "award".to_string(),
    ]];
    for (i, (c, a)) in res.claims.iter().zip(&res.awards).enumerate() {
        body.push(vec![(i + 1).to_string(), fmt6(*c), fmt6(*a)]);
    }
    format!("{}\n\n{}\n", render_rows(&head), render_rows(&body))
}

fn verify_table(report: &VerifyReportFile) -> String {
    let mut rows = vec![vec![
        "check".to_string(),
        "status".to_string(),
        "measured".to_string(),
        "tolerance".to_string(),
    ]];
    for c in &report.checks {
        rows.push(vec![
            c.name.clone(),
            if c.passed { "pass" } else { "FAIL" }.to_string(),
            format!("{:.3e}", c.measured),
            format!("{:.3e}", c.tolerance),
        ]);
    }
    format!(
        "{}\n\noverall  {}\n",
        render_rows(&rows),
        if report.overall { "pass" } else { "FAIL" }
    )
}

fn allocation_rows(res: &BargainingResultFile) -> Vec<Vec<String>> {
    let mut rows = vec![std::iter::once("player".to_string())
        .chain((1..=res.commodities).map(|k| format!("k{k}")))
        .collect::<Vec<_>>()];
    for (p, row) in res.allocation.iter().enumerate() {
        rows.push(
            std::iter::once((p + 1).to_string())
                .chain(row.iter().map(|v| fmt6(*v)))
                .collect(),
        );
    }
    rows
}

fn bargaining_compare_table(doc: &BargainingCompareFile) -> String {
    let players = doc.results.first().map(|r| r.players).unwrap_or(0);
    let mut rows = vec![std::iter::once("method".to_string())
        .chain((1..=players).map(|p| format!("u_{p}")))
        .chain(std::iter::once("shared".to_string()))
        .collect::<Vec<_>>()];
    for res in &doc.results {
        rows.push(
            std::iter::once(res.method.clone())
                .chain(res.utilities.iter().map(|v| fmt6(*v)))
                .chain(std::iter::once(res.shared_commodities.to_string()))
                .collect(),
        );
    }
    let mut blocks = vec![render_rows(&rows)];
    for res in &doc.results {
        blocks.push(format!(
            "{} allocation\n{}",
            res.method,
            render_rows(&allocation_rows(res))
        ));
    }
    blocks.join("\n\n") + "\n"
}

fn claims_compare_table(doc: &ClaimsCompareFile) -> String {
    let claimants = doc.results.first().map(|r| r.claimants).unwrap_or(0);
    let mut rows = vec![std::iter::once("method".to_string())
        .chain((1..=claimants).map(|i| format!("award_{i}")))
        .chain(std::iter::once("rule".to_string()))
        .collect::<Vec<_>>()];
    for res in &doc.results {
        rows.push(
            std::iter::once(res.method.clone())
                .chain(res.awards.iter().map(|v| fmt6(*v)))
                .chain(std::iter::once(res.applied_rule.clone()))
                .collect(),
        );
    }
    render_rows(&rows) + "\n"
}

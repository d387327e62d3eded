//! `shootout`: winning probabilities of penalty-shootout order rules.
//!
//! Exit status is 0 on success, 1 when a verification fails or every
//! simulated shootout is unresolved, and 2 for invalid arguments.

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use shootout_core::analysis::{
    adjusted_rule_exposure, run_suite, InjectedFault, PropositionReport, SuiteConfig, Verdict,
};
use shootout_core::monte_carlo::{estimate_win_probability, SimConfig, DEFAULT_MAX_SD_ROUNDS};
use shootout_core::prob::{
    format_significant, near_rounding_boundary, parse_rational, round_half_up, round_half_up_exact,
};
use shootout_core::*;

use output::{Format, OutputTable};

#[derive(Debug, Parser)]
#[command(
    name = "shootout",
    version,
    about = "Winning probabilities of penalty-shootout order rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probability that A wins, every rule against regular-phase length.
    Table2(Table2Args),
    /// Probability of reaching sudden death, rule family against model.
    Table3(Table3Args),
    /// CSV of the winning probability over a range of q.
    Sweep(SweepArgs),
    /// Run the property checks and the Monte Carlo cross-check.
    Verify(VerifyArgs),
    /// Estimate the winning probability by simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct SkillArgs {
    /// Scoring probability without pressure (`0.75` or `3/4`).
    #[arg(long, default_value = "3/4", value_parser = rational)]
    p: BigRational,
    /// Scoring probability under pressure, at most p.
    #[arg(long, default_value = "2/3", value_parser = rational)]
    q: BigRational,
}

impl SkillArgs {
    fn params(&self) -> Result<Params<BigRational>> {
        Params::new(self.p.clone(), self.q.clone())
    }
}

#[derive(Debug, Args)]
struct Table2Args {
    #[arg(long, default_value = "m1")]
    model: PressureModelId,
    #[command(flatten)]
    skills: SkillArgs,
    #[arg(long, default_value_t = 8)]
    rounds_max: u32,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Decimal places, rounded half up.
    #[arg(long, default_value_t = 3)]
    digits: usize,
}

#[derive(Debug, Args)]
struct Table3Args {
    #[command(flatten)]
    skills: SkillArgs,
    #[arg(long, default_value_t = 5)]
    rounds: u32,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    #[arg(long, default_value_t = 3)]
    digits: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value = "m1")]
    model: PressureModelId,
    /// One or more rules, comma separated (`alternating,behind-first`).
    #[arg(long, required = true, value_delimiter = ',')]
    mechanism: Vec<MechanismId>,
    #[arg(long, value_parser = rational)]
    p: BigRational,
    #[arg(long, default_value = "0", value_parser = rational)]
    q_min: BigRational,
    /// Defaults to p.
    #[arg(long, value_parser = rational)]
    q_max: Option<BigRational>,
    #[arg(long, default_value = "0.01", value_parser = rational)]
    q_step: BigRational,
    #[arg(long, default_value_t = 5)]
    rounds: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridChoice {
    Default,
    Fast,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    grid: GridChoice,
    /// Swap in a broken rule to check that the suite notices.
    #[arg(long, hide = true)]
    inject_fault: Option<InjectedFault>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value = "standard")]
    mechanism: MechanismId,
    #[arg(long, default_value = "m1")]
    model: PressureModelId,
    #[command(flatten)]
    skills: SkillArgs,
    #[arg(long, default_value_t = 5)]
    rounds: u32,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shootouts still level after this many sudden-death rounds count as unresolved.
    #[arg(long, default_value_t = DEFAULT_MAX_SD_ROUNDS)]
    max_sd_rounds: u32,
}

fn rational(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Rounds a float result, falling back to exact arithmetic when the value
/// sits so close to a rounding boundary that float error could flip it.
fn round_cell(
    value: f64,
    digits: usize,
    exact: impl FnOnce() -> Result<BigRational>,
) -> Result<String> {
    if near_rounding_boundary(value, digits, 1e-9) {
        Ok(round_half_up_exact(&exact()?, digits))
    } else {
        Ok(round_half_up(value, digits))
    }
}

fn cmd_table2(args: &Table2Args) -> Result<String> {
    let exact = args.skills.params()?;
    let table = table2(args.model, &exact.to_float(), 1..=args.rounds_max)?;
    let mut header = vec!["mechanism".to_string()];
    header.extend(table.rounds.iter().map(u32::to_string));
    let mut rows = Vec::new();
    for (mech, values) in &table.rows {
        let cells = table
            .rounds
            .iter()
            .zip(values)
            .map(|(&n, &v)| {
                round_cell(v, args.digits, || {
                    Ok(total_win_probability(*mech, args.model, &exact, n)?.p_a_wins_total)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((mech.label().to_string(), cells));
    }
    Ok(OutputTable { header, rows }.render(args.format))
}

fn cmd_table3(args: &Table3Args) -> Result<String> {
    use MechanismId::*;
    let exact = args.skills.params()?;
    let float = exact.to_float();
    // Adjusted rules share their base rule's regular phase, hence its reach.
    let families = [
        ("ABAB", Standard),
        ("ABBA", Alternating),
        ("ABBA|BAAB", DoubleAlternating),
        ("(Adjusted) Catch-up", CatchUp),
        ("(Adjusted) Behind-first", BehindFirst),
    ];
    let mut header = vec!["mechanism".to_string()];
    header.extend(PressureModelId::ALL.iter().map(|m| m.to_string()));
    let mut rows = Vec::new();
    for (label, mech) in families {
        let cells = PressureModelId::ALL
            .iter()
            .map(|&model| {
                let reach =
                    regular_phase_distribution(mech, model, &float, args.rounds)?.reach_sd();
                round_cell(reach, args.digits, || {
                    Ok(regular_phase_distribution(mech, model, &exact, args.rounds)?.reach_sd())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((label.to_string(), cells));
    }
    Ok(OutputTable { header, rows }.render(args.format))
}

/// `q_min, q_min + step, ...` up to `q_max`, stepped exactly.
fn q_values(min: &BigRational, max: &BigRational, step: &BigRational) -> Result<Vec<BigRational>> {
    let zero = BigRational::from_ratio(0, 1);
    if *step <= zero || min > max {
        return Err(ShootoutError::BadLiteral(format!(
            "q range {min}..={max} step {step}"
        )));
    }
    let mut out = Vec::new();
    let mut q = min.clone();
    while q <= *max {
        out.push(q.clone());
        q += step.clone();
    }
    Ok(out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let q_max = args.q_max.clone().unwrap_or_else(|| args.p.clone());
    let qs = q_values(&args.q_min, &q_max, &args.q_step)?;
    let p = args.p.to_f64();
    let qs: Vec<f64> = qs.iter().map(Prob::to_f64).collect();
    let labelled = args.mechanism.len() > 1;
    let mut out = String::from(if labelled {
        "mechanism,p,q,win_probability\n"
    } else {
        "p,q,win_probability\n"
    });
    for mech in &args.mechanism {
        for pt in sweep_grid(*mech, args.model, &[p], &qs, args.rounds)? {
            if labelled {
                out.push_str(mech.slug());
                out.push(',');
            }
            out.push_str(&format!(
                "{},{},{}\n",
                format_significant(pt.p, 15),
                format_significant(pt.q, 15),
                format_significant(pt.win_probability, 15)
            ));
        }
    }
    Ok(out)
}

fn report_line(report: &PropositionReport) -> String {
    match &report.verdict {
        Verdict::Holds => format!(
            "HOLDS {}: max discrepancy {:.3e} over {} points",
            report.proposition_id,
            report.max_discrepancy,
            report.parameter_grid.len()
        ),
        Verdict::Fails(w) => format!("FAILS {}: {w}", report.proposition_id),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, bool)> {
    let mut cfg = match args.grid {
        GridChoice::Default => SuiteConfig::default_grid(),
        GridChoice::Fast => SuiteConfig::fast(),
    };
    if let Some(fault) = args.inject_fault {
        cfg.evaluator = analysis::Evaluator::with_fault(fault);
    }
    let report = run_suite(&cfg)?;
    let mut out = String::new();
    for r in &report.propositions {
        out.push_str(&report_line(r));
        out.push('\n');
    }
    let mc = &report.monte_carlo;
    let worst = mc
        .cells
        .iter()
        .max_by(|a, b| a.z_score().abs().total_cmp(&b.z_score().abs()));
    if let Some(c) = worst {
        out.push_str(&format!(
            "{} monte carlo: {} cells at {} trials, worst |z| {:.2} ({}, {}) against limit {}\n",
            if mc.holds() { "HOLDS" } else { "FAILS" },
            mc.cells.len(),
            cfg.mc_trials,
            c.z_score().abs(),
            c.mech,
            c.model,
            mc.z_limit
        ));
    }
    for r in adjusted_rule_exposure(&cfg.grid)? {
        if let Verdict::Fails(w) = &r.verdict {
            out.push_str(&format!("note: adjusted rule can be manipulated: {w}\n"));
        }
    }
    Ok((out, report.all_hold()))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let params = args.skills.params()?.to_float();
    let mut cfg = SimConfig::new(
        args.mechanism,
        args.model,
        params,
        args.rounds,
        args.trials,
        args.seed,
    );
    cfg.max_sd_rounds = args.max_sd_rounds;
    let r = estimate_win_probability(&cfg)?;
    Ok(format!(
        "mechanism: {}\nmodel: {}\ntrials: {}\nestimate: {}\nstd_error: {}\na_wins: {}\nb_wins: {}\nunresolved: {}\n",
        args.mechanism,
        args.model,
        r.trials(),
        format_significant(r.estimate, 15),
        format_significant(r.std_error, 6),
        r.a_wins,
        r.b_wins,
        r.unresolved
    ))
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ShootoutError>() {
        Some(ShootoutError::AllUnresolved { .. }) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let (text, ok) = match &cli.command {
        Command::Table2(a) => (cmd_table2(a)?, true),
        Command::Table3(a) => (cmd_table3(a)?, true),
        Command::Sweep(a) => (cmd_sweep(a)?, true),
        Command::Verify(a) => cmd_verify(a)?,
        Command::Simulate(a) => (cmd_simulate(a)?, true),
    };
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .context("writing output")?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

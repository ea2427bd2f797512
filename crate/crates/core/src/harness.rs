//! Experiment driver: single expansions, sweeps over D, and the stochastic
//! model, each rendered as CSV, JSON or Markdown.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::convergents::{
    classify_real_limit, convergent_at, ConvergentPair, LimitParams, RealLimitReport, Verdict,
};
use crate::decimal::round_significant;
use crate::engine::{
    complete_quotient_profile, expand, pure_periodicity_condition, AlgorithmKind, ExpansionResult,
    ExpansionStatus,
};
use crate::error::CfError;
use crate::field::{is_perfect_square, QuadIrr, Rational};
use crate::padic::{is_odd_prime, Branch, PadicContext};
use crate::stochastics::{
    approx, expected_abs, expected_abs_conditional, expected_abs_sampled, expected_abs_series,
    expected_valuation, sample_summary, valuation_pmf, DigitModel, MonteCarloEstimate,
};

pub const TABLE_COLUMNS: [&str; 7] = [
    "D",
    "status",
    "preperiod",
    "period",
    "squared_value",
    "limit_verdict",
    "limit_estimate",
];

/// Convergent indices listed by single mode.
pub const LISTED_INDICES: [usize; 5] = [10, 100, 1000, 5000, 10000];
/// Significant digits of listed convergents.
pub const LISTING_DIGITS: u32 = 15;
/// Longest unrolled period fed to the limit classifier.
pub const CLASSIFY_LENGTH_CAP: usize = 64_000;
/// Complete quotients inspected for the norm-sign summary.
pub const NORM_TRACE_LEN: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Single,
    #[default]
    Table,
    Stochastics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Arithmetic(#[from] CfError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Arithmetic(_) => 3,
            HarnessError::Io(_) => 1,
        }
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub prime: u64,
    pub d_values: Vec<u64>,
    pub algorithm: AlgorithmKind,
    /// Number of partial quotients computed per expansion.
    pub max_steps: usize,
    /// Significant digits of rendered squared values.
    pub report_digits: u32,
    pub branch: Branch,
    pub format: OutputFormat,
    pub seed: u64,
    pub mode: Mode,
    /// Monte-Carlo draws in stochastics mode.
    pub samples: usize,
    /// Partial quotients printed by single mode.
    pub print_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime: 5,
            d_values: vec![],
            algorithm: AlgorithmKind::BrowkinI,
            max_steps: 1000,
            report_digits: 6,
            branch: Branch::Default,
            format: OutputFormat::Csv,
            seed: 42,
            mode: Mode::Table,
            samples: 1_000_000,
            print_cap: 60,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> HarnessResult<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !is_odd_prime(self.prime) {
            return bad(format!("{} is not an odd prime", self.prime));
        }
        if self.max_steps == 0 {
            return bad("max-steps must be at least 1".into());
        }
        if !(1..=60).contains(&self.report_digits) {
            return bad(format!(
                "digits must lie in 1..=60, got {}",
                self.report_digits
            ));
        }
        match self.mode {
            Mode::Single if self.d_values.len() != 1 => bad(format!(
                "single mode needs exactly one D, got {}",
                self.d_values.len()
            )),
            Mode::Table if self.d_values.is_empty() => {
                bad("table mode needs at least one D".into())
            }
            Mode::Stochastics if self.samples < 1000 => {
                bad(format!("need at least 1000 samples, got {}", self.samples))
            }
            Mode::Stochastics if self.d_values.len() > 1 => {
                bad("stochastics mode takes at most one D for the digit histogram".into())
            }
            _ => Ok(()),
        }
    }

    /// Sorted, de-duplicated D values.
    pub fn sorted_d_values(&self) -> Vec<u64> {
        let mut d = self.d_values.clone();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Parses `LO:HI` (inclusive).
pub fn parse_d_range(s: &str) -> HarnessResult<Vec<u64>> {
    let err = || HarnessError::Config(format!("expected LO:HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(err)?;
    let lo: u64 = lo.trim().parse().map_err(|_| err())?;
    let hi: u64 = hi.trim().parse().map_err(|_| err())?;
    if lo > hi {
        return Err(err());
    }
    Ok((lo..=hi).collect())
}

fn csv_text<I>(header: &[&str], records: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

fn rational_json(q: &Rational) -> Value {
    json!({ "numerator": q.numer().to_string(), "denominator": q.denom().to_string() })
}

fn render_value(q: &Rational, digits: u32) -> String {
    round_significant(q, digits)
}

/// Feeds the classifier the computed quotients; periodic expansions are
/// unrolled further (×4 per round, up to [`CLASSIFY_LENGTH_CAP`]) while the
/// verdict stays undetermined.
pub fn classify_expansion(
    result: &ExpansionResult,
    d: u64,
    length: usize,
    params: LimitParams,
) -> crate::error::Result<RealLimitReport> {
    let mut n = length.max(1);
    loop {
        let qs = result
            .quotients(n)
            .unwrap_or_else(|| result.partial_quotients.clone());
        let report = classify_real_limit(&qs, d, params)?;
        if report.verdict != Verdict::Undetermined
            || !result.status.is_periodic()
            || n >= CLASSIFY_LENGTH_CAP
        {
            return Ok(report);
        }
        n = (n * 4).min(CLASSIFY_LENGTH_CAP);
    }
}

// ---------------------------------------------------------------- single

#[derive(Clone, Debug)]
pub struct ListedConvergent {
    pub index: usize,
    pub pair: ConvergentPair,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NormSignSummary {
    pub examined: usize,
    pub negative: usize,
    pub first: i8,
    pub longest_negative_run: usize,
    pub longest_negative_run_start: usize,
}

#[derive(Clone, Debug)]
pub struct SingleReport {
    pub config: RunConfig,
    pub d: u64,
    pub branch: Branch,
    pub expansion: ExpansionResult,
    pub listed: Vec<ListedConvergent>,
    pub last: ConvergentPair,
    pub limit: RealLimitReport,
    /// (where, holds) for α_0 and, when periodic, the first periodic α_h.
    pub pure_periodicity: Vec<(String, bool)>,
    pub norm_signs: NormSignSummary,
}

pub fn run_single(cfg: &RunConfig) -> HarnessResult<SingleReport> {
    cfg.validate()?;
    let d = cfg.d_values[0];
    let mut ctx = PadicContext::with_branch(cfg.prime, d, cfg.branch)?;
    let alpha0 = QuadIrr::sqrt(d)?;
    let expansion = expand(&mut ctx, &alpha0, cfg.algorithm, cfg.max_steps)?;
    let qs = expansion
        .quotients(cfg.max_steps)
        .unwrap_or_else(|| expansion.partial_quotients.clone());

    let mut listed = vec![];
    let mut last = None;
    for pair in crate::convergents::Convergents::new(&qs) {
        if LISTED_INDICES.contains(&pair.index) {
            listed.push(ListedConvergent {
                index: pair.index,
                pair: pair.clone(),
            });
        }
        last = Some(pair);
    }
    let last = last.ok_or_else(|| CfError::Domain("empty expansion".into()))?;
    let limit = classify_expansion(&expansion, d, qs.len(), LimitParams::default())?;

    let mut pure_periodicity = vec![(
        "alpha_0".to_string(),
        pure_periodicity_condition(&mut ctx, &alpha0, cfg.algorithm)?,
    )];
    if let ExpansionStatus::Periodic { preperiod, .. } = expansion.status {
        let mut alpha = alpha0.clone();
        for a in &expansion.partial_quotients[..preperiod] {
            alpha = alpha.sub_inv(a)?;
        }
        let holds = pure_periodicity_condition(&mut ctx, &alpha, cfg.algorithm)?;
        pure_periodicity.push((format!("alpha_{preperiod}"), holds));
    }

    let profile =
        complete_quotient_profile(&alpha0, cfg.prime, &qs[..qs.len().min(NORM_TRACE_LEN)])?;
    let trace: Vec<i8> = profile.iter().map(|&(s, _)| s).collect();
    let (run, start) = crate::engine::longest_negative_run(&trace);
    let norm_signs = NormSignSummary {
        examined: trace.len(),
        negative: trace.iter().filter(|&&s| s < 0).count(),
        first: trace.first().copied().unwrap_or(0),
        longest_negative_run: run,
        longest_negative_run_start: start,
    };

    Ok(SingleReport {
        config: cfg.clone(),
        d,
        branch: cfg.branch,
        expansion,
        listed,
        last,
        limit,
        pure_periodicity,
        norm_signs,
    })
}

fn status_fields(status: &ExpansionStatus) -> (String, String) {
    match status {
        ExpansionStatus::Periodic { preperiod, period } => {
            (preperiod.to_string(), period.to_string())
        }
        _ => (String::new(), String::new()),
    }
}

fn printed_bracket(exp: &ExpansionResult, cap: usize) -> String {
    if exp.partial_quotients.len() <= cap {
        return exp.bracket();
    }
    let head: Vec<String> = exp.partial_quotients[..cap]
        .iter()
        .map(|q| q.to_string())
        .collect();
    format!("[{}, …]", head.join(", "))
}

impl SingleReport {
    fn squared(&self) -> Option<Rational> {
        self.last.squared_value()
    }

    pub fn to_json(&self) -> Value {
        let listed: Vec<Value> = self
            .listed
            .iter()
            .map(|c| {
                json!({
                    "index": c.index,
                    "value": c.pair.value().map(|v| round_significant(&v, LISTING_DIGITS)),
                    "truncated": c.pair.truncated(14),
                    "exact": c.pair.value().map(|v| rational_json(&v)),
                })
            })
            .collect();
        let (pre, per) = status_fields(&self.expansion.status);
        json!({
            "config": self.config,
            "d": self.d,
            "branch": self.branch,
            "status": self.expansion.status,
            "preperiod": pre,
            "period": per,
            "partial_quotients": printed_bracket(&self.expansion, self.config.print_cap),
            "convergents": listed,
            "last_index": self.last.index,
            "squared_value": self.squared().map(|q| render_value(&q, self.config.report_digits)),
            "squared_value_exact": self.squared().map(|q| rational_json(&q)),
            "limit": self.limit,
            "pure_periodicity": self.pure_periodicity.iter().map(|(w, h)| json!({"at": w, "holds": h})).collect::<Vec<_>>(),
            "norm_signs": self.norm_signs,
        })
    }

    pub fn to_csv(&self) -> String {
        let (pre, per) = status_fields(&self.expansion.status);
        let mut kv: Vec<(String, String)> = vec![
            ("D".into(), self.d.to_string()),
            ("prime".into(), self.config.prime.to_string()),
            ("algorithm".into(), self.config.algorithm.cli_name().into()),
            ("branch".into(), self.branch.label().into()),
            ("status".into(), self.expansion.status.label().into()),
            ("preperiod".into(), pre),
            ("period".into(), per),
            (
                "partial_quotients".into(),
                printed_bracket(&self.expansion, self.config.print_cap),
            ),
        ];
        for c in &self.listed {
            let v = c
                .pair
                .value()
                .map(|v| round_significant(&v, LISTING_DIGITS))
                .unwrap_or_default();
            kv.push((format!("convergent_{}", c.index), v));
        }
        kv.push((
            format!("squared_value_{}", self.last.index),
            self.squared()
                .map(|q| render_value(&q, self.config.report_digits))
                .unwrap_or_default(),
        ));
        kv.push(("limit_verdict".into(), self.limit.verdict.label().into()));
        kv.push(("limit_estimate".into(), self.limit.limit_estimate.clone()));
        kv.push((
            "stabilized_at".into(),
            self.limit
                .stabilized_at
                .map(|s| s.to_string())
                .unwrap_or_default(),
        ));
        for (w, h) in &self.pure_periodicity {
            kv.push((format!("pure_periodicity_{w}"), h.to_string()));
        }
        kv.push((
            "norm_negative".into(),
            format!("{}/{}", self.norm_signs.negative, self.norm_signs.examined),
        ));
        kv.push((
            "norm_longest_negative_run".into(),
            self.norm_signs.longest_negative_run.to_string(),
        ));
        csv_text(&["key", "value"], kv.into_iter().map(|(k, v)| vec![k, v]))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# {} expansion of √{} in Q_{}\n",
            self.config.algorithm, self.d, self.config.prime
        );
        let _ = writeln!(out, "- branch: {}", self.branch.label());
        let _ = writeln!(out, "- status: {}", describe_status(&self.expansion.status));
        let _ = writeln!(
            out,
            "- partial quotients: {}",
            printed_bracket(&self.expansion, self.config.print_cap)
        );
        for (w, h) in &self.pure_periodicity {
            let _ = writeln!(out, "- pure-periodicity condition at {w}: {h}");
        }
        let _ = writeln!(
            out,
            "- negative norms: {}/{} (longest run {} from index {})\n",
            self.norm_signs.negative,
            self.norm_signs.examined,
            self.norm_signs.longest_negative_run,
            self.norm_signs.longest_negative_run_start
        );
        out.push_str("| n | A_n/B_n |\n|---|---|\n");
        for c in &self.listed {
            let v = c
                .pair
                .value()
                .map(|v| round_significant(&v, LISTING_DIGITS))
                .unwrap_or_else(|| "B_n = 0".into());
            let _ = writeln!(out, "| {} | {} |", c.index, v);
        }
        let _ = writeln!(
            out,
            "\n(A_{0}/B_{0})² = {1}; real limit: {2} ({3})",
            self.last.index,
            self.squared()
                .map(|q| render_value(&q, self.config.report_digits))
                .unwrap_or_default(),
            self.limit.verdict.label(),
            self.limit.limit_estimate
        );
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => pretty(&self.to_json()),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

fn describe_status(s: &ExpansionStatus) -> String {
    match s {
        ExpansionStatus::Finite => "finite".into(),
        ExpansionStatus::Periodic { preperiod, period } => {
            format!("periodic (preperiod {preperiod}, period {period})")
        }
        ExpansionStatus::Truncated { steps } => format!("no period within {steps} steps"),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

// ----------------------------------------------------------------- table

#[derive(Clone, Debug)]
pub struct ComputedRow {
    pub status: ExpansionStatus,
    pub branch: Branch,
    /// Index of the reported convergent (number of quotients − 1).
    pub index: usize,
    pub squared: Rational,
    pub limit: RealLimitReport,
}

#[derive(Clone, Debug)]
pub enum RowOutcome {
    Computed(Box<ComputedRow>),
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub d: u64,
    pub outcome: RowOutcome,
}

impl TableRow {
    pub fn computed(&self) -> Option<&ComputedRow> {
        match &self.outcome {
            RowOutcome::Computed(c) => Some(c),
            _ => None,
        }
    }

    fn status_label(&self) -> &'static str {
        match &self.outcome {
            RowOutcome::Computed(c) => c.status.label(),
            RowOutcome::Skipped { .. } => "skipped",
            RowOutcome::Failed { .. } => "error",
        }
    }
}

/// One row of a sweep under a fixed branch.
pub fn run_table_row(cfg: &RunConfig, d: u64, branch: Branch) -> RowOutcome {
    if d == 0 || is_perfect_square(d) {
        return RowOutcome::Skipped {
            reason: "perfect square".into(),
        };
    }
    let mut ctx = match PadicContext::with_branch(cfg.prime, d, branch) {
        Ok(c) => c,
        Err(CfError::NotAResidue { .. }) => {
            return RowOutcome::Skipped {
                reason: format!("not a quadratic residue mod {}", cfg.prime),
            }
        }
        Err(CfError::RamifiedPrime { .. }) => {
            return RowOutcome::Skipped {
                reason: format!("{} divides D", cfg.prime),
            }
        }
        Err(e) => {
            return RowOutcome::Failed {
                error: e.to_string(),
            }
        }
    };
    match compute_row(&mut ctx, cfg, d, branch) {
        Ok(row) => RowOutcome::Computed(Box::new(row)),
        Err(e) => RowOutcome::Failed {
            error: e.to_string(),
        },
    }
}

fn compute_row(
    ctx: &mut PadicContext,
    cfg: &RunConfig,
    d: u64,
    branch: Branch,
) -> crate::error::Result<ComputedRow> {
    let alpha0 = QuadIrr::sqrt(d)?;
    let expansion = expand(ctx, &alpha0, cfg.algorithm, cfg.max_steps)?;
    let qs = expansion
        .quotients(cfg.max_steps)
        .unwrap_or_else(|| expansion.partial_quotients.clone());
    let index = qs.len() - 1;
    let last = convergent_at(&qs, index).expect("index is in range");
    let squared = last
        .squared_value()
        .ok_or(CfError::ZeroDenominator { index })?;
    let limit = classify_expansion(&expansion, d, qs.len(), LimitParams::default())?;
    Ok(ComputedRow {
        status: expansion.status,
        branch,
        index,
        squared,
        limit,
    })
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub config: RunConfig,
    pub rows: Vec<TableRow>,
}

/// Rows run in parallel; a row that errors under the configured branch is
/// retried once under the other branch.
pub fn run_table(cfg: &RunConfig) -> HarnessResult<TableReport> {
    cfg.validate()?;
    let rows = cfg
        .sorted_d_values()
        .into_par_iter()
        .map(|d| {
            let outcome = match run_table_row(cfg, d, cfg.branch) {
                RowOutcome::Failed { error } => match run_table_row(cfg, d, cfg.branch.other()) {
                    RowOutcome::Failed { error: retry } => RowOutcome::Failed {
                        error: format!("{error}; {} branch: {retry}", cfg.branch.other().label()),
                    },
                    other => other,
                },
                other => other,
            };
            TableRow { d, outcome }
        })
        .collect();
    Ok(TableReport {
        config: cfg.clone(),
        rows,
    })
}

impl TableReport {
    pub fn periodic(&self) -> impl Iterator<Item = (u64, &ComputedRow)> {
        self.rows.iter().filter_map(|r| {
            r.computed()
                .filter(|c| c.status.is_periodic())
                .map(|c| (r.d, c))
        })
    }

    pub fn non_periodic(&self) -> impl Iterator<Item = (u64, &ComputedRow)> {
        self.rows.iter().filter_map(|r| {
            r.computed()
                .filter(|c| !c.status.is_periodic())
                .map(|c| (r.d, c))
        })
    }

    fn squared_text(&self, c: &ComputedRow) -> String {
        render_value(&c.squared, self.config.report_digits)
    }

    pub fn to_csv(&self) -> String {
        let records = self.rows.iter().map(|row| match row.computed() {
            Some(c) => {
                let (pre, per) = status_fields(&c.status);
                vec![
                    row.d.to_string(),
                    c.status.label().into(),
                    pre,
                    per,
                    self.squared_text(c),
                    c.limit.verdict.label().into(),
                    c.limit.limit_estimate.clone(),
                ]
            }
            None => {
                let mut r = vec![row.d.to_string(), row.status_label().into()];
                r.resize(7, String::new());
                r
            }
        });
        csv_text(&TABLE_COLUMNS, records)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| match &row.outcome {
                RowOutcome::Computed(c) => {
                    let (pre, per) = status_fields(&c.status);
                    json!({
                        "D": row.d,
                        "status": c.status.label(),
                        "preperiod": pre,
                        "period": per,
                        "branch": c.branch,
                        "index": c.index,
                        "squared_value": self.squared_text(c),
                        "squared_value_exact": rational_json(&c.squared),
                        "limit_verdict": c.limit.verdict.label(),
                        "limit_estimate": c.limit.limit_estimate,
                        "stabilized_at": c.limit.stabilized_at,
                    })
                }
                RowOutcome::Skipped { reason } => {
                    json!({ "D": row.d, "status": "skipped", "reason": reason })
                }
                RowOutcome::Failed { error } => {
                    json!({ "D": row.d, "status": "error", "error": error })
                }
            })
            .collect();
        json!({ "config": self.config, "rows": rows })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let (p, alg, n) = (
            self.config.prime,
            self.config.algorithm,
            self.config.max_steps,
        );
        let index = n.saturating_sub(1);
        let section = |out: &mut String, title: String, rows: Vec<(u64, &ComputedRow)>| {
            let _ = writeln!(out, "## {title}\n");
            let _ = writeln!(out, "| D | (A_{index}/B_{index})² | status | preperiod | period | limit verdict | limit estimate |");
            out.push_str("|---|---|---|---|---|---|---|\n");
            for (d, c) in rows {
                let (pre, per) = status_fields(&c.status);
                let _ = writeln!(
                    out,
                    "| {d} | {} | {} | {pre} | {per} | {} | {} |",
                    self.squared_text(c),
                    c.status.label(),
                    c.limit.verdict.label(),
                    c.limit.limit_estimate
                );
            }
            out.push('\n');
        };
        section(
            &mut out,
            format!("Non-periodic {alg} expansions within {n} steps in Q_{p}"),
            self.non_periodic().collect(),
        );
        section(
            &mut out,
            format!("Periodic {alg} expansions within {n} steps in Q_{p}"),
            self.periodic().collect(),
        );
        let others: Vec<&TableRow> = self
            .rows
            .iter()
            .filter(|r| r.computed().is_none())
            .collect();
        if !others.is_empty() {
            out.push_str("## Skipped or failed\n\n| D | status | reason |\n|---|---|---|\n");
            for r in others {
                let reason = match &r.outcome {
                    RowOutcome::Skipped { reason } => reason.as_str(),
                    RowOutcome::Failed { error } => error.as_str(),
                    RowOutcome::Computed(_) => unreachable!(),
                };
                let _ = writeln!(out, "| {} | {} | {} |", r.d, r.status_label(), reason);
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => pretty(&self.to_json()),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

// ----------------------------------------------------------- stochastics

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthCheck {
    pub k: usize,
    pub frequency: f64,
    pub std_error: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitHistogram {
    pub d: u64,
    pub digits: usize,
    /// counts[r] for residues r = 0, …, p−1.
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct StochasticsReport {
    pub config: RunConfig,
    pub pmf: Vec<(i64, Rational)>,
    pub expected_valuation: Rational,
    pub conditional: Vec<(i64, Rational)>,
    pub expected_abs: Rational,
    pub expected_abs_series: Rational,
    pub expected_abs_sampled: Rational,
    pub monte_carlo: MonteCarloEstimate,
    pub depth_checks: Vec<DepthCheck>,
    pub leading_digit_counts: Vec<u64>,
    pub digit_histogram: Option<DigitHistogram>,
}

/// Base-p digits 0..p−1 of the first `count` digits of the p-adic √D.
pub fn sqrt_digit_histogram(
    ctx: &mut PadicContext,
    count: usize,
) -> crate::error::Result<Vec<u64>> {
    let p = ctx.prime();
    let root = ctx.hensel_sqrt(count as u64)?;
    // peel off blocks of digits that fit in a u64
    let mut block = 1usize;
    while (p as u128).pow(block as u32 + 1) <= u64::MAX as u128 {
        block += 1;
    }
    let modulus = BigInt::from(p).pow(block as u32);
    let mut counts = vec![0u64; p as usize];
    let mut rest = root;
    let mut seen = 0usize;
    while seen < count {
        let (q, r) = rest.div_rem(&modulus);
        let mut chunk = r.to_u64().expect("remainder fits in u64");
        for _ in 0..block.min(count - seen) {
            counts[(chunk % p) as usize] += 1;
            chunk /= p;
            seen += 1;
        }
        rest = q;
        if rest.is_zero() && seen < count {
            counts[0] += (count - seen) as u64;
            break;
        }
    }
    Ok(counts)
}

pub fn run_stochastics(cfg: &RunConfig) -> HarnessResult<StochasticsReport> {
    cfg.validate()?;
    let p = cfg.prime;
    let model = DigitModel::new(p, cfg.seed)?;
    let summary = sample_summary(&model, cfg.samples);
    let pmf: Vec<(i64, Rational)> = (1..=8)
        .map(|k| (k, valuation_pmf(p, k).expect("k ≥ 1")))
        .collect();
    let conditional = (0..=5)
        .map(|k| (k, expected_abs_conditional(p, k).expect("k ≥ 0")))
        .collect();
    let depth_checks = (1..=5usize)
        .map(|k| {
            let (frequency, std_error) = summary.depth_frequency(k);
            DepthCheck {
                k,
                frequency,
                std_error,
                expected: approx(&pmf[k - 1].1),
            }
        })
        .collect();
    let digit_histogram = match cfg.d_values.first() {
        Some(&d) => {
            let mut ctx = PadicContext::with_branch(p, d, cfg.branch)?;
            let counts = sqrt_digit_histogram(&mut ctx, cfg.max_steps)?;
            Some(DigitHistogram {
                d,
                digits: cfg.max_steps,
                counts,
            })
        }
        None => None,
    };
    Ok(StochasticsReport {
        config: cfg.clone(),
        pmf,
        expected_valuation: expected_valuation(p),
        conditional,
        expected_abs: expected_abs(p),
        expected_abs_series: expected_abs_series(p),
        expected_abs_sampled: expected_abs_sampled(p),
        monte_carlo: summary.estimate(),
        depth_checks,
        leading_digit_counts: summary.leading_digit_counts,
        digit_histogram,
    })
}

impl StochasticsReport {
    /// (quantity, key, exact, decimal) lines shared by every renderer.
    fn lines(&self) -> Vec<(String, String, String, String)> {
        let dec = |q: &Rational| round_significant(q, 12);
        let mut v = vec![];
        for (k, q) in &self.pmf {
            v.push(("valuation_pmf".into(), k.to_string(), q.to_string(), dec(q)));
        }
        v.push((
            "expected_valuation".into(),
            String::new(),
            self.expected_valuation.to_string(),
            dec(&self.expected_valuation),
        ));
        for (k, q) in &self.conditional {
            v.push((
                "expected_abs_conditional".into(),
                k.to_string(),
                q.to_string(),
                dec(q),
            ));
        }
        v.push((
            "expected_abs".into(),
            "closed_form".into(),
            self.expected_abs.to_string(),
            dec(&self.expected_abs),
        ));
        v.push((
            "expected_abs".into(),
            "series".into(),
            self.expected_abs_series.to_string(),
            dec(&self.expected_abs_series),
        ));
        v.push((
            "expected_abs".into(),
            "sampler".into(),
            self.expected_abs_sampled.to_string(),
            dec(&self.expected_abs_sampled),
        ));
        let mc = &self.monte_carlo;
        v.push((
            "monte_carlo".into(),
            "mean".into(),
            String::new(),
            format!("{:.6}", mc.mean),
        ));
        v.push((
            "monte_carlo".into(),
            "std_error".into(),
            String::new(),
            format!("{:.6}", mc.std_error),
        ));
        v.push((
            "monte_carlo".into(),
            "samples".into(),
            String::new(),
            mc.samples.to_string(),
        ));
        for (key, target) in [
            ("z_closed_form", &self.expected_abs),
            ("z_series", &self.expected_abs_series),
            ("z_sampler", &self.expected_abs_sampled),
        ] {
            v.push((
                "monte_carlo".into(),
                key.into(),
                String::new(),
                format!("{:.3}", (mc.mean - approx(target)) / mc.std_error),
            ));
        }
        for c in &self.depth_checks {
            v.push((
                "depth_frequency".into(),
                c.k.to_string(),
                format!("{:.6}", c.expected),
                format!("{:.6}", c.frequency),
            ));
        }
        let half = (self.leading_digit_counts.len() / 2) as i64;
        for (i, n) in self.leading_digit_counts.iter().enumerate() {
            v.push((
                "leading_digit_count".into(),
                (i as i64 - half).to_string(),
                String::new(),
                n.to_string(),
            ));
        }
        if let Some(h) = &self.digit_histogram {
            for (r, n) in h.counts.iter().enumerate() {
                v.push((
                    format!("sqrt{}_digit_count", h.d),
                    r.to_string(),
                    String::new(),
                    n.to_string(),
                ));
            }
        }
        v
    }

    pub fn to_csv(&self) -> String {
        let config = [
            ("prime", self.config.prime.to_string()),
            ("seed", self.config.seed.to_string()),
            ("samples", self.config.samples.to_string()),
        ];
        let records = config
            .into_iter()
            .map(|(k, v)| vec!["config".to_string(), k.to_string(), String::new(), v])
            .chain(
                self.lines()
                    .into_iter()
                    .map(|(q, k, e, d)| vec![q, k, e, d]),
            );
        csv_text(&["quantity", "key", "exact", "decimal"], records)
    }

    pub fn to_json(&self) -> Value {
        let lines: Vec<Value> = self
            .lines()
            .into_iter()
            .map(|(q, k, e, d)| json!({ "quantity": q, "key": k, "exact": e, "decimal": d }))
            .collect();
        json!({
            "config": self.config,
            "values": lines,
            "monte_carlo": self.monte_carlo,
            "depth_checks": self.depth_checks,
            "digit_histogram": self.digit_histogram,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Partial-quotient statistics in Q_{} (seed {}, {} samples)\n\n| quantity | key | exact | decimal |\n|---|---|---|---|\n",
            self.config.prime, self.config.seed, self.config.samples
        );
        for (q, k, e, d) in self.lines() {
            let _ = writeln!(out, "| {q} | {k} | {e} | {d} |");
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => pretty(&self.to_json()),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

/// Runs the configured mode and renders it in the configured format.
pub fn run(cfg: &RunConfig) -> HarnessResult<String> {
    cfg.validate()?;
    Ok(match cfg.mode {
        Mode::Single => run_single(cfg)?.render(cfg.format),
        Mode::Table => run_table(cfg)?.render(cfg.format),
        Mode::Stochastics => run_stochastics(cfg)?.render(cfg.format),
    })
}

//! Browkin I, Browkin II and MR expansions with exact period detection.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CfError, Result};
use crate::field::{QuadIrr, Rational};
use crate::padic::PadicContext;
use crate::recurrence::Tail;

/// Default cap on the number of distinct complete quotients remembered.
pub const DEFAULT_ENTRY_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgorithmKind {
    BrowkinI,
    BrowkinII,
    #[serde(rename = "MR")]
    Mr,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 3] = [Self::BrowkinI, Self::BrowkinII, Self::Mr];

    /// Whether the step function depends on the parity of the index.
    pub fn parity_dependent(self) -> bool {
        !matches!(self, Self::BrowkinI)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            Self::BrowkinI => "browkin1",
            Self::BrowkinII => "browkin2",
            Self::Mr => "mr",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BrowkinI => "Browkin I",
            Self::BrowkinII => "Browkin II",
            Self::Mr => "MR",
        })
    }
}

/// Emitted partial quotient and the next complete quotient, absent when the
/// expansion terminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub quotient: Rational,
    pub next: Option<QuadIrr>,
}

fn finish(alpha: &QuadIrr, quotient: Rational) -> Result<Step> {
    if alpha.is_rational() && alpha.x() == &quotient {
        return Ok(Step {
            quotient,
            next: None,
        });
    }
    let next = alpha.sub_inv(&quotient)?;
    Ok(Step {
        quotient,
        next: Some(next),
    })
}

pub fn step_browkin1(ctx: &mut PadicContext, alpha: &QuadIrr) -> Result<Step> {
    let (s, t) = ctx.floors(alpha)?;
    finish(alpha, choose_quotient(AlgorithmKind::BrowkinI, 0, s, t)?)
}

/// Browkin II step at index `index`. Odd steps apply t and shift by −sign(t)
/// when the digit at exponent 0 vanishes.
pub fn step_browkin2(ctx: &mut PadicContext, alpha: &QuadIrr, index: usize) -> Result<Step> {
    let (s, t) = ctx.floors(alpha)?;
    finish(
        alpha,
        choose_quotient(AlgorithmKind::BrowkinII, index, s, t)?,
    )
}

pub fn step_mr(ctx: &mut PadicContext, alpha: &QuadIrr, index: usize) -> Result<Step> {
    let (s, t) = ctx.floors(alpha)?;
    finish(alpha, choose_quotient(AlgorithmKind::Mr, index, s, t)?)
}

/// Picks a_n from the two floors s(α_n), t(α_n).
fn choose_quotient(alg: AlgorithmKind, index: usize, s: Rational, t: Rational) -> Result<Rational> {
    let even = index.is_multiple_of(2);
    Ok(match alg {
        AlgorithmKind::BrowkinI => s,
        AlgorithmKind::Mr => {
            if even {
                s
            } else {
                t
            }
        }
        AlgorithmKind::BrowkinII => {
            if even {
                s
            } else if s != t {
                // s − t is the digit c_0, so v_p(α − t) = 0 exactly when s ≠ t
                t
            } else if t.is_zero() {
                return Err(CfError::SignOfZero { index });
            } else {
                let sign = t.signum();
                t - sign
            }
        }
    })
}

pub fn step(
    ctx: &mut PadicContext,
    alg: AlgorithmKind,
    alpha: &QuadIrr,
    index: usize,
) -> Result<Step> {
    match alg {
        AlgorithmKind::BrowkinI => step_browkin1(ctx, alpha),
        AlgorithmKind::BrowkinII => step_browkin2(ctx, alpha, index),
        AlgorithmKind::Mr => step_mr(ctx, alpha, index),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExpansionStatus {
    Finite,
    Periodic { preperiod: usize, period: usize },
    Truncated { steps: usize },
}

impl ExpansionStatus {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Finite => "finite",
            Self::Periodic { .. } => "periodic",
            Self::Truncated { .. } => "truncated",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub algorithm: AlgorithmKind,
    /// a_0, …, a_{m−1}. For periodic expansions this is exactly the
    /// preperiod followed by one period.
    pub partial_quotients: Vec<Rational>,
    pub status: ExpansionStatus,
    /// α_0, …, α_{m−1} when retention was requested.
    pub complete_quotients: Option<Vec<QuadIrr>>,
}

impl ExpansionResult {
    pub fn preperiod(&self) -> &[Rational] {
        match self.status {
            ExpansionStatus::Periodic { preperiod, .. } => &self.partial_quotients[..preperiod],
            _ => &self.partial_quotients,
        }
    }

    pub fn period(&self) -> &[Rational] {
        match self.status {
            ExpansionStatus::Periodic { preperiod, .. } => &self.partial_quotients[preperiod..],
            _ => &[],
        }
    }

    /// The first `n` partial quotients, unrolling the period when needed.
    /// `None` when the expansion is shorter than `n` and not periodic.
    pub fn quotients(&self, n: usize) -> Option<Vec<Rational>> {
        if n <= self.partial_quotients.len() {
            return Some(self.partial_quotients[..n].to_vec());
        }
        let ExpansionStatus::Periodic { preperiod, period } = self.status else {
            return None;
        };
        Some(
            (0..n)
                .map(|i| {
                    let j = if i < preperiod {
                        i
                    } else {
                        preperiod + (i - preperiod) % period
                    };
                    self.partial_quotients[j].clone()
                })
                .collect(),
        )
    }

    /// Bracket notation, with the period wrapped in `overline{…}`.
    pub fn bracket(&self) -> String {
        let join = |qs: &[Rational]| {
            qs.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self.status {
            ExpansionStatus::Periodic { .. } => {
                let pre = self.preperiod();
                if pre.is_empty() {
                    format!("[overline{{{}}}]", join(self.period()))
                } else {
                    format!("[{}, overline{{{}}}]", join(pre), join(self.period()))
                }
            }
            ExpansionStatus::Finite => format!("[{}]", join(&self.partial_quotients)),
            ExpansionStatus::Truncated { .. } => format!("[{}, …]", join(&self.partial_quotients)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExpandOptions {
    pub retain_complete_quotients: bool,
    pub entry_cap: usize,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            retain_complete_quotients: false,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }
}

pub fn expand(
    ctx: &mut PadicContext,
    alpha0: &QuadIrr,
    alg: AlgorithmKind,
    max_steps: usize,
) -> Result<ExpansionResult> {
    expand_with(ctx, alpha0, alg, max_steps, ExpandOptions::default())
}

/// Runs up to `max_steps` steps. A complete quotient that reappears at an
/// index of the same parity (any index for Browkin I) closes a period; the
/// first such repetition gives the minimal preperiod and period.
///
/// Irrational inputs go through the division-free recurrence; rational
/// inputs (and [`expand_reference`]) step the field elements directly.
pub fn expand_with(
    ctx: &mut PadicContext,
    alpha0: &QuadIrr,
    alg: AlgorithmKind,
    max_steps: usize,
    opts: ExpandOptions,
) -> Result<ExpansionResult> {
    validate(ctx, alpha0, max_steps)?;
    match Tail::from_quad(alpha0, ctx.prime()) {
        Some(tail) => expand_recurrence(ctx, tail, alg, max_steps, opts),
        None => expand_reference(ctx, alpha0, alg, max_steps, opts),
    }
}

fn validate(ctx: &PadicContext, alpha0: &QuadIrr, max_steps: usize) -> Result<()> {
    if alpha0.is_zero() {
        return Err(CfError::Domain("cannot expand zero".into()));
    }
    if max_steps == 0 {
        return Err(CfError::Domain("max_steps must be at least 1".into()));
    }
    if alpha0.radicand() != ctx.radicand() {
        return Err(CfError::Domain(format!(
            "element of Q(√{}) expanded in a context for √{}",
            alpha0.radicand(),
            ctx.radicand()
        )));
    }
    Ok(())
}

/// Expansion by repeated [`step`] on field elements, keyed on exact values.
/// Slower than [`expand_with`] on long irrational runs; kept as the
/// reference route.
pub fn expand_reference(
    ctx: &mut PadicContext,
    alpha0: &QuadIrr,
    alg: AlgorithmKind,
    max_steps: usize,
    opts: ExpandOptions,
) -> Result<ExpansionResult> {
    validate(ctx, alpha0, max_steps)?;
    let mut seen: HashMap<(bool, QuadIrr), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut retained = opts.retain_complete_quotients.then(Vec::new);
    let mut alpha = alpha0.clone();
    let result = |quotients, status, retained| ExpansionResult {
        algorithm: alg,
        partial_quotients: quotients,
        status,
        complete_quotients: retained,
    };

    for n in 0..max_steps {
        let key = (alg.parity_dependent() && n % 2 == 1, alpha);
        if let Some(&first) = seen.get(&key) {
            let status = ExpansionStatus::Periodic {
                preperiod: first,
                period: n - first,
            };
            return Ok(result(quotients, status, retained));
        }
        if seen.len() >= opts.entry_cap {
            return Err(CfError::MemoryBudgetExceeded {
                cap: opts.entry_cap,
            });
        }
        let step = step(ctx, alg, &key.1, n)?;
        check_reachable_shape(alg, n, &step.quotient)?;
        if let Some(r) = retained.as_mut() {
            r.push(key.1.clone());
        }
        quotients.push(step.quotient);
        match step.next {
            None => return Ok(result(quotients, ExpansionStatus::Finite, retained)),
            Some(next) => {
                seen.insert(key, n);
                alpha = next;
            }
        }
    }
    let status = ExpansionStatus::Truncated { steps: max_steps };
    Ok(result(quotients, status, retained))
}

/// The index map stores 64-bit fingerprints of (parity, P, Q); a fingerprint
/// hit is confirmed by replaying the recurrence from α_0 with the recorded
/// quotients and comparing exactly, so collisions cannot produce a false
/// period.
fn expand_recurrence(
    ctx: &mut PadicContext,
    start: Tail,
    alg: AlgorithmKind,
    max_steps: usize,
    opts: ExpandOptions,
) -> Result<ExpansionResult> {
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut quotients: Vec<Rational> = Vec::new();
    let mut retained = opts.retain_complete_quotients.then(Vec::new);
    let mut tail = start.clone();

    for n in 0..max_steps {
        let parity = alg.parity_dependent() && n % 2 == 1;
        let fp = tail.fingerprint(parity);
        if let Some(candidates) = seen.get(&fp) {
            for &first in candidates {
                if replay(&start, &quotients[..first])?.same_value(&tail) {
                    return Ok(ExpansionResult {
                        algorithm: alg,
                        partial_quotients: quotients,
                        status: ExpansionStatus::Periodic {
                            preperiod: first,
                            period: n - first,
                        },
                        complete_quotients: retained,
                    });
                }
            }
        }
        if n >= opts.entry_cap {
            return Err(CfError::MemoryBudgetExceeded {
                cap: opts.entry_cap,
            });
        }
        let (s, t) = tail.floors(ctx)?;
        let a = choose_quotient(alg, n, s, t)?;
        check_reachable_shape(alg, n, &a)?;
        if let Some(r) = retained.as_mut() {
            r.push(tail.to_quad());
        }
        tail.advance(&a)?;
        quotients.push(a);
        seen.entry(fp).or_default().push(n);
    }
    Ok(ExpansionResult {
        algorithm: alg,
        partial_quotients: quotients,
        status: ExpansionStatus::Truncated { steps: max_steps },
        complete_quotients: retained,
    })
}

fn replay(start: &Tail, quotients: &[Rational]) -> Result<Tail> {
    let mut t = start.clone();
    for a in quotients {
        t.advance(a)?;
    }
    Ok(t)
}

/// Streams complete quotients' norm signs and heights without keeping the
/// field elements: (sign(α_nᾱ_n), bit height of α_n) for n < max_steps.
pub fn complete_quotient_profile(
    alpha0: &QuadIrr,
    prime: u64,
    quotients: &[Rational],
) -> Result<Vec<(i8, u64)>> {
    let Some(mut tail) = Tail::from_quad(alpha0, prime) else {
        return Err(CfError::Domain("profile needs an irrational start".into()));
    };
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        out.push((tail.norm_sign(), tail.height_bits()));
        tail.advance(a)?;
    }
    Ok(out)
}

/// Shape constraints every reachable partial quotient satisfies; a violation
/// means the engine is wrong, not the input.
fn check_reachable_shape(alg: AlgorithmKind, n: usize, a: &Rational) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let ok = match alg {
        AlgorithmKind::BrowkinI => !a.is_integer(),
        AlgorithmKind::BrowkinII | AlgorithmKind::Mr => n.is_multiple_of(2) || !a.is_integer(),
    };
    if ok {
        Ok(())
    } else {
        Err(CfError::Invariant(format!(
            "{alg} partial quotient a_{n} = {a} should have negative valuation"
        )))
    }
}

/// Re-runs the step function from α_h for k steps and checks it lands on α_h
/// again (k = period, h = preperiod).
pub fn verify_period(
    ctx: &mut PadicContext,
    alpha0: &QuadIrr,
    result: &ExpansionResult,
) -> Result<bool> {
    let ExpansionStatus::Periodic { preperiod, period } = result.status else {
        return Ok(false);
    };
    let mut alpha = alpha0.clone();
    for n in 0..preperiod {
        match step(ctx, result.algorithm, &alpha, n)?.next {
            Some(next) => alpha = next,
            None => return Ok(false),
        }
    }
    let start = alpha.clone();
    for n in preperiod..preperiod + period {
        let st = step(ctx, result.algorithm, &alpha, n)?;
        if st.quotient != result.partial_quotients[n] {
            return Ok(false);
        }
        match st.next {
            Some(next) => alpha = next,
            None => return Ok(false),
        }
    }
    Ok(alpha == start)
}

/// Raw value of the pure-periodicity condition on |α|_p and |ᾱ|_p:
/// Browkin I/II need v_p(α) < 0, MR allows v_p(α) ≤ 0; all need v_p(ᾱ) > 0.
pub fn pure_periodicity_condition(
    ctx: &mut PadicContext,
    alpha: &QuadIrr,
    alg: AlgorithmKind,
) -> Result<bool> {
    if alpha.is_rational() {
        return Err(CfError::Domain(
            "condition is defined for irrationals only".into(),
        ));
    }
    let v = ctx.valuation(alpha)?;
    let v_conj = ctx.valuation(&alpha.conjugate())?;
    let own = match alg {
        AlgorithmKind::BrowkinI | AlgorithmKind::BrowkinII => v < 0,
        AlgorithmKind::Mr => v <= 0,
    };
    Ok(own && v_conj > 0)
}

/// sign(α_n·ᾱ_n) for each retained complete quotient.
pub fn norm_sign_trace(result: &ExpansionResult) -> Result<Vec<i8>> {
    let cq = result.complete_quotients.as_ref().ok_or_else(|| {
        CfError::Domain("norm-sign trace needs retained complete quotients".into())
    })?;
    Ok(cq
        .iter()
        .map(|alpha| {
            let n = alpha.norm();
            if n.is_zero() {
                0
            } else if n.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// Longest run of consecutive negative norms in a trace, with its start.
pub fn longest_negative_run(trace: &[i8]) -> (usize, usize) {
    let (mut best, mut best_start, mut cur, mut cur_start) = (0, 0, 0, 0);
    for (i, &s) in trace.iter().enumerate() {
        if s < 0 {
            if cur == 0 {
                cur_start = i;
            }
            cur += 1;
            if cur > best {
                best = cur;
                best_start = cur_start;
            }
        } else {
            cur = 0;
        }
    }
    (best, best_start)
}

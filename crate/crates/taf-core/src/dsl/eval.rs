//! Evaluation of scheme formulas on a truth grid.
//!
//! Formulas are first *compiled* against a grid and declared slot arities:
//! constants are pinned to grid degrees (off-grid constants are rejected,
//! they never round), slot indices are bounds-checked, and weighted-average
//! weights are brought to a common denominator. The compiled form then
//! evaluates infallibly, which keeps the per-labelling hot path free of
//! error plumbing.

use super::{ExprKind, SchemeExpr, Span};
use crate::rational::Rational;
use crate::truth::{TruthGrid, TruthValue};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("premise slot p{slot} exceeds the declared arity {arity}")]
    PremiseOutOfRange { slot: u32, arity: u32, span: Span },
    #[error("exception slot e{slot} exceeds the declared exception arity {arity}")]
    ExceptionOutOfRange { slot: u32, arity: u32, span: Span },
    #[error("constant {value} does not lie on the 1/{resolution} grid")]
    OffGridConstant { value: String, resolution: u32, span: Span },
    #[error("wavg weights are too fine for exact arithmetic")]
    WeightsTooFine { span: Span },
}

/// A formula compiled for one grid and one pair of slot arities.
#[derive(Debug, Clone)]
pub enum PreparedExpr {
    Const(TruthValue),
    /// 0-based premise index.
    Premise(usize),
    /// 0-based exception index.
    Exception(usize),
    Claim,
    Not(Box<PreparedExpr>),
    And(Box<PreparedExpr>, Box<PreparedExpr>),
    Or(Box<PreparedExpr>, Box<PreparedExpr>),
    Implies(Box<PreparedExpr>, Box<PreparedExpr>),
    Iff(Box<PreparedExpr>, Box<PreparedExpr>),
    Min(Vec<PreparedExpr>),
    Max(Vec<PreparedExpr>),
    /// Weights normalized to numerators over one shared denominator.
    WeightedAvg { terms: Vec<(u64, PreparedExpr)>, denominator: u64 },
}

/// Compiles a formula for `grid`, with `premise_arity` premise slots and
/// `exception_arity` exception slots available.
pub fn compile(
    expr: &SchemeExpr,
    grid: TruthGrid,
    premise_arity: u32,
    exception_arity: u32,
) -> Result<PreparedExpr, CompileError> {
    let prep = |x: &SchemeExpr| compile(x, grid, premise_arity, exception_arity);
    match &expr.kind {
        ExprKind::Const(r) => match grid.exact(r) {
            Some(v) => Ok(PreparedExpr::Const(v)),
            None => Err(CompileError::OffGridConstant {
                value: r.to_string(),
                resolution: grid.resolution(),
                span: expr.span,
            }),
        },
        ExprKind::Premise(i) => {
            if *i > premise_arity {
                return Err(CompileError::PremiseOutOfRange {
                    slot: *i,
                    arity: premise_arity,
                    span: expr.span,
                });
            }
            Ok(PreparedExpr::Premise(*i as usize - 1))
        }
        ExprKind::Exception(i) => {
            if *i > exception_arity {
                return Err(CompileError::ExceptionOutOfRange {
                    slot: *i,
                    arity: exception_arity,
                    span: expr.span,
                });
            }
            Ok(PreparedExpr::Exception(*i as usize - 1))
        }
        ExprKind::Claim => Ok(PreparedExpr::Claim),
        ExprKind::Not(x) => Ok(PreparedExpr::Not(Box::new(prep(x)?))),
        ExprKind::And(a, b) => Ok(PreparedExpr::And(Box::new(prep(a)?), Box::new(prep(b)?))),
        ExprKind::Or(a, b) => Ok(PreparedExpr::Or(Box::new(prep(a)?), Box::new(prep(b)?))),
        ExprKind::Implies(a, b) => Ok(PreparedExpr::Implies(Box::new(prep(a)?), Box::new(prep(b)?))),
        ExprKind::Iff(a, b) => Ok(PreparedExpr::Iff(Box::new(prep(a)?), Box::new(prep(b)?))),
        ExprKind::Min(xs) => Ok(PreparedExpr::Min(xs.iter().map(prep).collect::<Result<_, _>>()?)),
        ExprKind::Max(xs) => Ok(PreparedExpr::Max(xs.iter().map(prep).collect::<Result<_, _>>()?)),
        ExprKind::WeightedAvg(ws) => {
            let (denominator, numerators) =
                normalize_weights(ws.iter().map(|(w, _)| w)).ok_or(CompileError::WeightsTooFine { span: expr.span })?;
            let terms = numerators
                .into_iter()
                .zip(ws.iter())
                .map(|(n, (_, x))| Ok((n, prep(x)?)))
                .collect::<Result<_, CompileError>>()?;
            Ok(PreparedExpr::WeightedAvg { terms, denominator })
        }
    }
}

/// Rewrites weights `a_i/b_i` as numerators over `lcm(b_i)`.
fn normalize_weights<'a, I: Iterator<Item = &'a Rational>>(weights: I) -> Option<(u64, Vec<u64>)> {
    let parts: Vec<(u64, u64)> = weights
        .map(|w| (u64::try_from(*w.numer()).ok(), u64::try_from(*w.denom()).ok()))
        .map(|(n, d)| Some((n?, d?)))
        .collect::<Option<_>>()?;
    let mut lcm: u64 = 1;
    for &(_, d) in &parts {
        lcm = lcm.checked_mul(d / gcd(lcm, d))?;
    }
    let numerators = parts
        .iter()
        .map(|&(n, d)| n.checked_mul(lcm / d))
        .collect::<Option<_>>()?;
    Some((lcm, numerators))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl PreparedExpr {
    /// Evaluates with the given slot assignments. Slices must be at least as
    /// long as the arities the formula was compiled with.
    pub fn eval(
        &self,
        premises: &[TruthValue],
        exceptions: &[TruthValue],
        claim: TruthValue,
    ) -> TruthValue {
        match self {
            PreparedExpr::Const(v) => *v,
            PreparedExpr::Premise(i) => premises[*i],
            PreparedExpr::Exception(i) => exceptions[*i],
            PreparedExpr::Claim => claim,
            PreparedExpr::Not(x) => x.eval(premises, exceptions, claim).not(),
            PreparedExpr::And(a, b) => a
                .eval(premises, exceptions, claim)
                .and(b.eval(premises, exceptions, claim)),
            PreparedExpr::Or(a, b) => a
                .eval(premises, exceptions, claim)
                .or(b.eval(premises, exceptions, claim)),
            PreparedExpr::Implies(a, b) => a
                .eval(premises, exceptions, claim)
                .implies(b.eval(premises, exceptions, claim)),
            PreparedExpr::Iff(a, b) => a
                .eval(premises, exceptions, claim)
                .iff(b.eval(premises, exceptions, claim)),
            PreparedExpr::Min(xs) => xs
                .iter()
                .map(|x| x.eval(premises, exceptions, claim))
                .reduce(TruthValue::min)
                .expect("min has at least one argument"),
            PreparedExpr::Max(xs) => xs
                .iter()
                .map(|x| x.eval(premises, exceptions, claim))
                .reduce(TruthValue::max)
                .expect("max has at least one argument"),
            PreparedExpr::WeightedAvg { terms, denominator } => {
                // Σ nᵢ·vᵢ / (D·k) brought straight to the numerator scale of
                // the grid: times k it is Σ nᵢ·numᵢ / D. Round half-down.
                let total: u128 = terms
                    .iter()
                    .map(|(n, x)| {
                        u128::from(*n) * u128::from(x.eval(premises, exceptions, claim).numerator())
                    })
                    .sum();
                let den = u128::from(*denominator);
                let floor = total / den;
                let rem = total % den;
                let num = if 2 * rem > den { floor + 1 } else { floor };
                claim
                    .grid()
                    .value(num as u32)
                    .expect("a convex combination of grid degrees stays inside the unit interval")
            }
        }
    }
}

/// One-shot evaluation: compile against the slice lengths, then evaluate.
///
/// Slot references beyond the supplied vectors and constants that miss the
/// grid are reported as errors.
pub fn eval(
    expr: &SchemeExpr,
    grid: TruthGrid,
    premises: &[TruthValue],
    exceptions: &[TruthValue],
    claim: TruthValue,
) -> Result<TruthValue, CompileError> {
    let prepared = compile(expr, grid, premises.len() as u32, exceptions.len() as u32)?;
    Ok(prepared.eval(premises, exceptions, claim))
}

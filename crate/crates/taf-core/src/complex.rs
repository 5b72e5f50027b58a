//! Chaining scheme applications into composite ones.
//!
//! A support application whose conclusion feeds a premise slot of another
//! application can be folded into it: the outer slot is replaced by the inner
//! premises, the exception lists concatenate, and the interpretation of the
//! combination takes the best value over the bridged proposition's possible
//! degrees. Repeating the fold up to a depth bound yields the set of
//! composite applications the semantics evaluates alongside the atomic ones.

use crate::dsl::CompileError;
use crate::model::{PropositionId, SchemeKind, Taf};
use crate::truth::{TruthGrid, TruthValue};
use std::collections::BTreeSet;
use thiserror::Error;

/// An application assembled from one or more atomic applications.
///
/// `constituents` are indices into [`Taf::applications`], one per atomic
/// application used, with multiplicity; depth is that count minus one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComplexApplication {
    pub kind: SchemeKind,
    pub premises: Vec<PropositionId>,
    pub exceptions: Vec<PropositionId>,
    pub conclusion: PropositionId,
    pub constituents: Vec<usize>,
    plan: EvalPlan,
}

/// How to evaluate a complex application's interpretation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum EvalPlan {
    /// The atomic application at this index, exception-guarded.
    Atomic(usize),
    /// Inner support spliced into premise slot `slot` (0-based) of the outer
    /// plan: value = best over bridge degrees of inner(…, bridge) ⊓ outer
    /// with the slot fixed to bridge.
    Bridge { inner: Box<EvalPlan>, slot: usize, inner_premises: usize, inner_exceptions: usize, outer: Box<EvalPlan> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("only support applications can feed a premise slot")]
    InnerNotSupport,
    #[error("premise slot {slot} does not exist (outer application has {arity} premises)")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("inner conclusion `{conclusion}` does not match outer premise `{premise}`")]
    ConclusionMismatch { conclusion: PropositionId, premise: PropositionId },
}

impl ComplexApplication {
    /// Wraps one atomic application (depth 0). `index` must point at `app`
    /// within the framework's application list.
    pub fn atomic(taf: &Taf, index: usize) -> Self {
        let app = &taf.applications()[index];
        let scheme = taf.scheme(&app.scheme).expect("validated application");
        ComplexApplication {
            kind: scheme.kind(),
            premises: app.premises.clone(),
            exceptions: app.exceptions.clone(),
            conclusion: app.conclusion.clone(),
            constituents: vec![index],
            plan: EvalPlan::Atomic(index),
        }
    }

    pub fn depth(&self) -> usize {
        self.constituents.len() - 1
    }

    /// Splices `inner` (a support whose conclusion equals this application's
    /// premise at 1-based `slot`) into this application.
    pub fn compose(&self, slot: usize, inner: &ComplexApplication) -> Result<ComplexApplication, ComposeError> {
        if inner.kind != SchemeKind::Support {
            return Err(ComposeError::InnerNotSupport);
        }
        if slot == 0 || slot > self.premises.len() {
            return Err(ComposeError::SlotOutOfRange { slot, arity: self.premises.len() });
        }
        let slot0 = slot - 1;
        if inner.conclusion != self.premises[slot0] {
            return Err(ComposeError::ConclusionMismatch {
                conclusion: inner.conclusion.clone(),
                premise: self.premises[slot0].clone(),
            });
        }

        let mut premises = Vec::with_capacity(self.premises.len() - 1 + inner.premises.len());
        premises.extend_from_slice(&self.premises[..slot0]);
        premises.extend_from_slice(&inner.premises);
        premises.extend_from_slice(&self.premises[slot0 + 1..]);

        let mut exceptions = Vec::with_capacity(inner.exceptions.len() + self.exceptions.len());
        exceptions.extend_from_slice(&inner.exceptions);
        exceptions.extend_from_slice(&self.exceptions);

        let mut constituents = Vec::with_capacity(self.constituents.len() + inner.constituents.len());
        constituents.extend_from_slice(&inner.constituents);
        constituents.extend_from_slice(&self.constituents);
        constituents.sort_unstable();

        Ok(ComplexApplication {
            kind: self.kind,
            premises,
            exceptions,
            conclusion: self.conclusion.clone(),
            constituents,
            plan: EvalPlan::Bridge {
                inner: Box::new(inner.plan.clone()),
                slot: slot0,
                inner_premises: inner.premises.len(),
                inner_exceptions: inner.exceptions.len(),
                outer: Box::new(self.plan.clone()),
            },
        })
    }

    /// Key under which two assemblies count as the same application: kind,
    /// premise list, exception list, conclusion, and the multiset of atomic
    /// constituents. The splice order does not matter.
    fn identity(&self) -> (SchemeKind, Vec<PropositionId>, Vec<PropositionId>, PropositionId, Vec<usize>) {
        (
            self.kind,
            self.premises.clone(),
            self.exceptions.clone(),
            self.conclusion.clone(),
            self.constituents.clone(),
        )
    }

    /// Evaluates the composite interpretation at the given slot degrees.
    ///
    /// Lengths must match `premises` and `exceptions`.
    pub fn interpret(
        &self,
        evaluator: &ComplexEvaluator<'_>,
        premises: &[TruthValue],
        exceptions: &[TruthValue],
        claim: TruthValue,
    ) -> TruthValue {
        debug_assert_eq!(premises.len(), self.premises.len());
        debug_assert_eq!(exceptions.len(), self.exceptions.len());
        eval_plan(&self.plan, evaluator, premises, exceptions, claim)
    }
}

fn eval_plan(
    plan: &EvalPlan,
    evaluator: &ComplexEvaluator<'_>,
    premises: &[TruthValue],
    exceptions: &[TruthValue],
    claim: TruthValue,
) -> TruthValue {
    match plan {
        EvalPlan::Atomic(index) => evaluator.prepared[*index].eval(premises, exceptions, claim),
        EvalPlan::Bridge { inner, slot, inner_premises, inner_exceptions, outer } => {
            let (inner_prem, rest) = premises.split_at(*slot + *inner_premises);
            let inner_prem = &inner_prem[*slot..];
            let (inner_exc, outer_exc) = exceptions.split_at(*inner_exceptions);

            let mut outer_prem = Vec::with_capacity(premises.len() - inner_premises + 1);
            outer_prem.extend_from_slice(&premises[..*slot]);
            outer_prem.push(evaluator.grid.bottom());
            outer_prem.extend_from_slice(rest);

            let mut best = evaluator.grid.bottom();
            for bridge in evaluator.grid.values() {
                let inside = eval_plan(inner, evaluator, inner_prem, inner_exc, bridge);
                outer_prem[*slot] = bridge;
                let outside = eval_plan(outer, evaluator, &outer_prem, outer_exc, claim);
                best = best.max(inside.and(outside));
            }
            best
        }
    }
}

/// Compiled interpretations of a framework's atomic applications, shared by
/// all complex applications built over it.
pub struct ComplexEvaluator<'a> {
    grid: TruthGrid,
    prepared: Vec<crate::dsl::PreparedExpr>,
    _taf: &'a Taf,
}

impl<'a> ComplexEvaluator<'a> {
    pub fn new(taf: &'a Taf) -> Result<Self, CompileError> {
        let grid = taf.grid();
        let prepared = taf
            .applications()
            .iter()
            .map(|app| {
                let scheme = taf.scheme(&app.scheme).expect("validated application");
                scheme.compile(grid)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ComplexEvaluator { grid, prepared, _taf: taf })
    }
}

/// All complex applications of the framework with depth at most `max_depth`,
/// in a deterministic order. Depth 0 entries wrap the atomic applications.
///
/// Two assemblies with the same kind, slots, conclusion, and constituent
/// multiset are the same application; only one survives.
pub fn enumerate_complex(taf: &Taf, max_depth: usize) -> Vec<ComplexApplication> {
    let atoms: Vec<ComplexApplication> = (0..taf.applications().len())
        .map(|i| ComplexApplication::atomic(taf, i))
        .collect();

    let mut seen: BTreeSet<_> = atoms.iter().map(|c| c.identity()).collect();
    let mut result = atoms.clone();
    let mut frontier = atoms.clone();

    for _ in 0..max_depth {
        let mut next = Vec::new();
        // New composites at this level: splice an atom into the frontier, or
        // a frontier element into an atom, so every constituent count up to
        // the bound is reached while each pair is built from smaller parts.
        for outer in result.iter() {
            for inner in atoms.iter().chain(frontier.iter()) {
                if inner.kind != SchemeKind::Support {
                    continue;
                }
                for slot in 1..=outer.premises.len() {
                    if outer.premises[slot - 1] != inner.conclusion {
                        continue;
                    }
                    let composite = outer.compose(slot, inner).expect("slots pre-checked");
                    if composite.depth() > max_depth {
                        continue;
                    }
                    if seen.insert(composite.identity()) {
                        next.push(composite);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        result.extend(next.iter().cloned());
        frontier = next;
    }

    result.sort();
    result
}

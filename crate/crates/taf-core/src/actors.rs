//! Actor-level measures built on beliefs, trust, and commitment.
//!
//! Every entity holds a belief predicate about each proposition (defaulting
//! to no opinion). From those, labellings induce per-actor measures:
//! agreement with a labelling, similarity between actors, rationality
//! (whether some consistent labelling matches the actor's commitments),
//! justified trust (whether trusting whom the actor trusts can be squared
//! with a consistent labelling), and trust compliance (whether a labelling's
//! acceptance of each claim is vouched for by a trusted entity).
//!
//! Rationality and justified trust scan the whole labelling space and take
//! the same budget guard as the semantics searches.

use crate::model::{BeliefPredicate, PropositionId, PropositionKind};
use crate::semantics::{BudgetError, EvalContext, Labelling, Property};
use crate::truth::TruthValue;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActorError {
    #[error("unknown actor `{id}`")]
    UnknownActor { id: PropositionId },
    #[error("`{id}` is not an entity")]
    NotAnEntity { id: PropositionId },
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

/// An entity with its belief predicates aligned to the context's
/// proposition order.
struct Actor<'c> {
    index: usize,
    beliefs: Vec<&'c BeliefPredicate>,
}

fn bind<'c>(ctx: &'c EvalContext<'_>, id: &PropositionId) -> Result<Actor<'c>, ActorError> {
    let proposition = ctx
        .taf()
        .proposition(id)
        .ok_or_else(|| ActorError::UnknownActor { id: id.clone() })?;
    if proposition.kind != PropositionKind::Entity {
        return Err(ActorError::NotAnEntity { id: id.clone() });
    }
    let index = ctx
        .propositions()
        .binary_search(id)
        .expect("proposition exists in the context");
    let beliefs = ctx
        .propositions()
        .iter()
        .map(|p| ctx.taf().belief(id, p))
        .collect();
    Ok(Actor { index, beliefs })
}

fn bind_all_entities<'c>(ctx: &'c EvalContext<'_>) -> Vec<Actor<'c>> {
    ctx.propositions()
        .iter()
        .filter(|id| ctx.taf().proposition(id).map(|p| p.kind) == Some(PropositionKind::Entity))
        .map(|id| bind(ctx, id).expect("entity binds"))
        .collect()
}

fn illocution_indices(ctx: &EvalContext<'_>) -> Vec<usize> {
    ctx.propositions()
        .iter()
        .enumerate()
        .filter(|(_, id)| {
            ctx.taf().proposition(id).map(|p| p.kind) == Some(PropositionKind::Illocution)
        })
        .map(|(i, _)| i)
        .collect()
}

fn agreement_of(ctx: &EvalContext<'_>, actor: &Actor<'_>, labels: &[TruthValue]) -> TruthValue {
    let grid = ctx.grid();
    let mut acc = grid.top();
    for (belief, &label) in actor.beliefs.iter().zip(labels) {
        acc = acc.min(belief.eval(grid, label));
        if acc.is_bottom() {
            break;
        }
    }
    acc
}

/// How far `x`'s belief predicates coincide with `y`'s: the weakest
/// pointwise equivalence over all propositions and degrees.
pub fn similarity(
    ctx: &EvalContext<'_>,
    x: &PropositionId,
    y: &PropositionId,
) -> Result<TruthValue, ActorError> {
    let a = bind(ctx, x)?;
    let b = bind(ctx, y)?;
    let grid = ctx.grid();
    let mut acc = grid.top();
    for (bx, by) in a.beliefs.iter().zip(&b.beliefs) {
        for t in grid.values() {
            acc = acc.min(bx.eval(grid, t).iff(by.eval(grid, t)));
            if acc.is_bottom() {
                return Ok(acc);
            }
        }
    }
    Ok(acc)
}

/// How far the labelling matches `x`'s beliefs: the weakest belief value
/// over all propositions.
pub fn agreement(
    ctx: &EvalContext<'_>,
    l: &Labelling,
    x: &PropositionId,
) -> Result<TruthValue, ActorError> {
    let actor = bind(ctx, x)?;
    Ok(agreement_of(ctx, &actor, l.values()))
}

/// Best simultaneous consistency and agreement over all labellings: an
/// actor is rational to the degree its commitments fit a consistent view
/// of the discussion.
pub fn rationality(
    ctx: &EvalContext<'_>,
    x: &PropositionId,
    threads: usize,
    budget: u64,
) -> Result<TruthValue, ActorError> {
    let actor = bind(ctx, x)?;
    let consistency = ctx.enumerate_degrees(Property::Consistency, threads, budget)?;
    let grid = ctx.grid();
    let mut labels = vec![grid.bottom(); ctx.propositions().len()];
    let mut best = grid.bottom();
    for (rank, &co) in consistency.iter().enumerate() {
        if co.is_bottom() {
            continue;
        }
        ctx.decode_rank_into(rank as u128, &mut labels);
        best = best.max(co.and(agreement_of(ctx, &actor, &labels)));
        if best.is_top() {
            break;
        }
    }
    Ok(best)
}

/// Best degree over all labellings to which the entities `x` deems
/// trustworthy — and that the labelling accepts — actually agree with it,
/// while the labelling stays consistent.
pub fn justified_trust(
    ctx: &EvalContext<'_>,
    x: &PropositionId,
    threads: usize,
    budget: u64,
) -> Result<TruthValue, ActorError> {
    let actor = bind(ctx, x)?;
    let entity_actors = bind_all_entities(ctx);
    let consistency = ctx.enumerate_degrees(Property::Consistency, threads, budget)?;
    let grid = ctx.grid();
    let mut labels = vec![grid.bottom(); ctx.propositions().len()];
    let mut best = grid.bottom();
    for (rank, &co) in consistency.iter().enumerate() {
        if co.is_bottom() {
            continue;
        }
        ctx.decode_rank_into(rank as u128, &mut labels);
        let mut every_trusted_agrees = grid.top();
        for other in &entity_actors {
            let label = labels[other.index];
            let endorsed = actor.beliefs[other.index].eval(grid, label).and(label);
            let term = endorsed.implies(agreement_of(ctx, other, &labels));
            every_trusted_agrees = every_trusted_agrees.min(term);
            if every_trusted_agrees.is_bottom() {
                break;
            }
        }
        best = best.max(co.and(every_trusted_agrees));
        if best.is_top() {
            break;
        }
    }
    Ok(best)
}

/// How far every accepted claim is vouched for by some entity that `x`
/// deems trustworthy and the labelling accepts.
///
/// With no entities in the framework the inner disjunction is empty, so the
/// result does not depend on `x` at all: it is `1` when there are no
/// illocutions either (empty conjunction) and `0` otherwise. Any viewpoint id
/// is accepted in that case; otherwise `x` must name an entity.
pub fn trust_compliance(
    ctx: &EvalContext<'_>,
    l: &Labelling,
    x: &PropositionId,
) -> Result<TruthValue, ActorError> {
    let grid = ctx.grid();
    let entity_actors = bind_all_entities(ctx);
    if entity_actors.is_empty() {
        return Ok(if illocution_indices(ctx).is_empty() {
            grid.top()
        } else {
            grid.bottom()
        });
    }
    let actor = bind(ctx, x)?;
    let labels = l.values();

    let mut acc = grid.top();
    for &p in &illocution_indices(ctx) {
        let mut vouched = grid.bottom();
        for other in &entity_actors {
            let label = labels[other.index];
            let endorsed = actor.beliefs[other.index].eval(grid, label).and(label);
            let voucher = endorsed.and(other.beliefs[p].eval(grid, labels[p]));
            vouched = vouched.max(voucher);
            if vouched.is_top() {
                break;
            }
        }
        acc = acc.min(vouched);
        if acc.is_bottom() {
            break;
        }
    }
    Ok(acc)
}

/// Everything the actor analysis computes for one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityReport {
    pub id: PropositionId,
    pub rationality: TruthValue,
    pub justified_trust: TruthValue,
    /// Only when a labelling is given.
    pub agreement: Option<TruthValue>,
    /// Only when a labelling is given.
    pub trust_compliance: Option<TruthValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActorsReport {
    pub entities: Vec<EntityReport>,
    /// Pairwise similarities, each unordered pair once, ids ascending.
    pub similarities: Vec<(PropositionId, PropositionId, TruthValue)>,
}

/// Runs the full actor analysis: rationality and justified trust for every
/// entity, pairwise similarities, and, when a labelling is given, agreement
/// and trust compliance against it.
pub fn analyze(
    ctx: &EvalContext<'_>,
    labelling: Option<&Labelling>,
    threads: usize,
    budget: u64,
) -> Result<ActorsReport, ActorError> {
    let ids: Vec<PropositionId> = ctx.taf().entities().map(|e| e.id.clone()).collect();
    let mut entities = Vec::with_capacity(ids.len());
    for id in &ids {
        entities.push(EntityReport {
            id: id.clone(),
            rationality: rationality(ctx, id, threads, budget)?,
            justified_trust: justified_trust(ctx, id, threads, budget)?,
            agreement: labelling.map(|l| agreement(ctx, l, id)).transpose()?,
            trust_compliance: labelling.map(|l| trust_compliance(ctx, l, id)).transpose()?,
        });
    }
    let mut similarities = Vec::new();
    for (i, x) in ids.iter().enumerate() {
        for y in &ids[i + 1..] {
            similarities.push((x.clone(), y.clone(), similarity(ctx, x, y)?));
        }
    }
    Ok(ActorsReport { entities, similarities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_scheme, Proposition, Scheme, SchemeApplication, SchemeKind, Taf};
    use crate::truth::TruthGrid;
    use std::collections::BTreeMap;

    fn v(n: u32, k: u32) -> TruthValue {
        TruthValue::new(n, k).unwrap()
    }

    fn beliefs(
        entries: &[(&str, &str, BeliefPredicate)],
    ) -> BTreeMap<(PropositionId, PropositionId), BeliefPredicate> {
        entries
            .iter()
            .map(|(actor, prop, b)| ((PropositionId::from(*actor), PropositionId::from(*prop)), b.clone()))
            .collect()
    }

    #[test]
    fn similarity_is_reflexive_and_symmetric() {
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::entity("x"),
                Proposition::entity("y"),
                Proposition::illocution("p"),
            ],
            vec![],
            vec![],
            beliefs(&[
                ("x", "p", BeliefPredicate::Tent(v(2, 2))),
                ("y", "p", BeliefPredicate::Tent(v(1, 2))),
            ]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let x = PropositionId::from("x");
        let y = PropositionId::from("y");
        assert_eq!(similarity(&ctx, &x, &x).unwrap(), v(2, 2));
        assert_eq!(similarity(&ctx, &y, &y).unwrap(), v(2, 2));
        assert_eq!(
            similarity(&ctx, &x, &y).unwrap(),
            similarity(&ctx, &y, &x).unwrap()
        );
        // Peaks at 1 and 1/2 stay exactly 1/2 apart at every degree.
        assert_eq!(similarity(&ctx, &x, &y).unwrap(), v(1, 2));
    }

    #[test]
    fn agreement_reads_beliefs_pointwise() {
        let taf = Taf::new(
            TruthGrid::new(4).unwrap(),
            vec![Proposition::entity("x"), Proposition::illocution("p")],
            vec![],
            vec![],
            beliefs(&[("x", "p", BeliefPredicate::Tent(v(4, 4)))]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        // Proposition order is p, x; the peak sits at 1, p is labelled 3/4.
        let l = ctx.labelling_from_values(vec![v(3, 4), v(0, 4)]);
        assert_eq!(agreement(&ctx, &l, &"x".into()).unwrap(), v(3, 4));
        assert!(matches!(
            agreement(&ctx, &l, &"p".into()),
            Err(ActorError::NotAnEntity { .. })
        ));
        assert!(matches!(
            agreement(&ctx, &l, &"ghost".into()),
            Err(ActorError::UnknownActor { .. })
        ));
    }

    #[test]
    fn committing_to_both_of_two_exclusive_claims_halves_rationality() {
        // x is fully committed to two mutually exclusive claims; the best
        // consistent compromise labels both 1/2, and so rationality lands
        // exactly there.
        let attack = |from: &str, to: &str| SchemeApplication {
            scheme: "mutual-exclusion-attack".into(),
            premises: vec![from.into()],
            exceptions: vec![],
            conclusion: to.into(),
        };
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::entity("x"),
                Proposition::illocution("p"),
                Proposition::illocution("q"),
            ],
            vec![builtin_scheme("mutual-exclusion-attack").unwrap()],
            vec![attack("p", "q"), attack("q", "p")],
            beliefs(&[
                ("x", "p", BeliefPredicate::Tent(v(2, 2))),
                ("x", "q", BeliefPredicate::Tent(v(2, 2))),
            ]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let got = rationality(&ctx, &"x".into(), 1, 1 << 20).unwrap();
        assert_eq!(got, v(1, 2));
    }

    #[test]
    fn rationality_is_full_without_commitments() {
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![Proposition::entity("x"), Proposition::illocution("p")],
            vec![],
            vec![],
            BTreeMap::new(),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        assert_eq!(rationality(&ctx, &"x".into(), 1, 1 << 20).unwrap(), v(2, 2));
    }

    #[test]
    fn justified_trust_measures_trusted_agreement() {
        // Consistency forces y's label up and p's label down, while y is
        // fully committed to p: accepting y as trustworthy clashes with the
        // labelling, and the best compromise sits at 1/2.
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::entity("x"),
                Proposition::entity("y"),
                Proposition::illocution("p"),
            ],
            vec![
                Scheme::new("self-evident", SchemeKind::Support, 1, 0, "p1").unwrap(),
                Scheme::new("damper", SchemeKind::Attack, 1, 0, "!c").unwrap(),
            ],
            vec![
                SchemeApplication {
                    scheme: "self-evident".into(),
                    premises: vec!["y".into()],
                    exceptions: vec![],
                    conclusion: "y".into(),
                },
                SchemeApplication {
                    scheme: "damper".into(),
                    premises: vec!["y".into()],
                    exceptions: vec![],
                    conclusion: "p".into(),
                },
            ],
            beliefs(&[("y", "p", BeliefPredicate::Tent(v(2, 2)))]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        assert_eq!(justified_trust(&ctx, &"x".into(), 1, 1 << 20).unwrap(), v(1, 2));
        // Without constraints the supremum is reached by labelling every
        // entity to the bottom.
        let free = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![Proposition::entity("x"), Proposition::entity("y")],
            vec![],
            vec![],
            BTreeMap::new(),
        );
        let free_ctx = EvalContext::new(&free, 0).unwrap();
        assert_eq!(justified_trust(&free_ctx, &"x".into(), 1, 1 << 20).unwrap(), v(2, 2));
    }

    #[test]
    fn trust_compliance_requires_a_voucher_per_claim() {
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::entity("x"),
                Proposition::entity("y"),
                Proposition::illocution("p"),
            ],
            vec![],
            vec![],
            beliefs(&[
                ("x", "y", BeliefPredicate::Tent(v(2, 2))),
                ("y", "p", BeliefPredicate::Tent(v(2, 2))),
            ]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        // Proposition order is p, x, y. x is labelled 0 throughout so that
        // only y can act as a voucher (an accepted actor with no opinion
        // about a claim would vouch for it fully).
        // p=1, y=1: y is trusted, accepted, and fully endorses p.
        let l = ctx.labelling_from_values(vec![v(2, 2), v(0, 2), v(2, 2)]);
        assert_eq!(trust_compliance(&ctx, &l, &"x".into()).unwrap(), v(2, 2));
        // p accepted at 1/2: y's endorsement drops to 1/2.
        let l = ctx.labelling_from_values(vec![v(1, 2), v(0, 2), v(2, 2)]);
        assert_eq!(trust_compliance(&ctx, &l, &"x".into()).unwrap(), v(1, 2));
        // y rejected: nobody vouches for p at all.
        let l = ctx.labelling_from_values(vec![v(2, 2), v(0, 2), v(0, 2)]);
        assert_eq!(trust_compliance(&ctx, &l, &"x".into()).unwrap(), v(0, 2));
    }

    #[test]
    fn trust_compliance_with_no_claims_is_full() {
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![Proposition::entity("x")],
            vec![],
            vec![],
            BTreeMap::new(),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let l = ctx.labelling_from_values(vec![v(0, 2)]);
        assert_eq!(trust_compliance(&ctx, &l, &"x".into()).unwrap(), v(2, 2));
    }

    #[test]
    fn trust_compliance_without_entities_depends_only_on_claims() {
        // Claims but nobody to vouch for them: the inner disjunction is empty,
        // so compliance collapses to 0 for any viewpoint id.
        let with_claim = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![Proposition::illocution("p")],
            vec![],
            vec![],
            BTreeMap::new(),
        );
        let ctx = EvalContext::new(&with_claim, 0).unwrap();
        let l = ctx.labelling_from_values(vec![v(2, 2)]);
        assert_eq!(trust_compliance(&ctx, &l, &"anyone".into()).unwrap(), v(0, 2));

        // No claims either: the outer conjunction is empty as well, giving 1.
        let empty = Taf::new(TruthGrid::new(2).unwrap(), vec![], vec![], vec![], BTreeMap::new());
        let ctx = EvalContext::new(&empty, 0).unwrap();
        let l = ctx.labelling_from_values(vec![]);
        assert_eq!(trust_compliance(&ctx, &l, &"anyone".into()).unwrap(), v(2, 2));
    }

    #[test]
    fn analyze_covers_all_entities_and_pairs() {
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::entity("x"),
                Proposition::entity("y"),
                Proposition::illocution("p"),
            ],
            vec![],
            vec![],
            beliefs(&[("x", "p", BeliefPredicate::Tent(v(2, 2)))]),
        );
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let l = ctx.labelling_from_values(vec![v(2, 2), v(0, 2), v(0, 2)]);
        let report = analyze(&ctx, Some(&l), 1, 1 << 20).unwrap();
        assert_eq!(report.entities.len(), 2);
        assert_eq!(report.similarities.len(), 1);
        assert!(report.entities.iter().all(|e| e.agreement.is_some()));
        let no_labelling = analyze(&ctx, None, 1, 1 << 20).unwrap();
        assert!(no_labelling.entities.iter().all(|e| e.agreement.is_none()));
    }
}

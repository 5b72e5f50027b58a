//! Labelling semantics: grading assignments of truth degrees to propositions.
//!
//! A labelling maps every proposition to a grid degree. Against the
//! framework's applications (atomic and composite, up to a composition depth)
//! each labelling earns per-proposition attack, support, and defense degrees,
//! and from those a degree for each acceptability property:
//!
//! - consistency: every atomic application's interpretation holds;
//! - admissibility: consistent, and accepted propositions are defended;
//! - stability: consistent, and rejected propositions are attacked;
//! - completeness: admissible, and defended propositions are accepted;
//! - preference: admissible and maximal among admissible labellings;
//! - groundedness: complete and minimal among complete labellings.
//!
//! Preference and groundedness quantify over the whole labelling space, so
//! their evaluation cost is quadratic in the space size; budgets make that
//! explicit before any enumeration starts.

use crate::complex::{enumerate_complex, ComplexApplication};
use crate::dsl::{CompileError, PreparedExpr};
use crate::model::{PropositionId, SchemeId, SchemeKind, Taf};
use crate::rational::Rational;
use crate::truth::{TruthGrid, TruthValue};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// The acceptability properties a labelling can be graded by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Consistency,
    Admissibility,
    Stability,
    Completeness,
    Preference,
    Groundedness,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Consistency,
        Property::Admissibility,
        Property::Stability,
        Property::Completeness,
        Property::Preference,
        Property::Groundedness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Consistency => "consistency",
            Property::Admissibility => "admissibility",
            Property::Stability => "stability",
            Property::Completeness => "completeness",
            Property::Preference => "preference",
            Property::Groundedness => "groundedness",
        }
    }

    /// Whether grading one labelling requires comparing it against every
    /// other labelling.
    pub fn is_second_order(self) -> bool {
        matches!(self, Property::Preference | Property::Groundedness)
    }

    /// The first-order property a second-order one quantifies over.
    fn inner(self) -> Property {
        match self {
            Property::Preference => Property::Admissibility,
            Property::Groundedness => Property::Completeness,
            other => other,
        }
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                format!("unknown property `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A total assignment of grid degrees to the framework's propositions, in
/// the context's proposition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    values: Vec<TruthValue>,
}

impl Labelling {
    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabellingError {
    #[error("labelling misses proposition `{id}`")]
    Missing { id: PropositionId },
    #[error("labelling names unknown proposition `{id}`")]
    Unknown { id: PropositionId },
    #[error("labelling value {value} for `{id}` is not on the 1/{resolution} grid")]
    OffGrid { id: PropositionId, value: Rational, resolution: u32 },
}

/// Why an evaluation context could not be built.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContextError {
    #[error("duplicate proposition id `{id}`")]
    DuplicateProposition { id: PropositionId },
    #[error("application #{application} uses unknown scheme `{id}`")]
    UnknownScheme { application: usize, id: SchemeId },
    #[error("application #{application} references unknown proposition `{id}`")]
    UnknownProposition { application: usize, id: PropositionId },
    #[error("application #{application} does not match the arities of scheme `{scheme}`")]
    ArityMismatch { application: usize, scheme: SchemeId },
    #[error("scheme `{scheme}` cannot be evaluated on the 1/{resolution} grid: {error}")]
    Compile { scheme: SchemeId, resolution: u32, error: CompileError },
}

/// Evaluation exceeding its labelling-visit budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct BudgetError {
    pub base: u64,
    pub propositions: usize,
    pub labellings: Option<u128>,
    pub cost: Option<u128>,
    pub budget: u64,
}

impl fmt::Display for BudgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = match self.labellings {
            Some(n) => format!("{}^{} = {}", self.base, self.propositions, n),
            None => format!("{}^{} (beyond 2^128)", self.base, self.propositions),
        };
        let cost = match self.cost {
            Some(c) => c.to_string(),
            None => "more than 2^128".to_string(),
        };
        write!(
            f,
            "the labelling space holds {space} labellings and this evaluation would visit {cost}, exceeding the budget of {}",
            self.budget
        )
    }
}

/// One labelling with its rank in the enumeration order and its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedLabelling {
    pub rank: u128,
    pub labelling: Labelling,
    pub degree: TruthValue,
}

/// Per-proposition view of a labelling's evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionDegrees {
    pub id: PropositionId,
    pub label: TruthValue,
    pub attack: TruthValue,
    pub support: TruthValue,
    pub defense: TruthValue,
}

/// An application reduced to proposition indices for fast evaluation.
struct Link {
    kind: SchemeKind,
    premises: Vec<usize>,
    exceptions: Vec<usize>,
    conclusion: usize,
}

/// An atomic application with its compiled interpretation.
struct Atom {
    prepared: PreparedExpr,
    premises: Vec<usize>,
    exceptions: Vec<usize>,
    conclusion: usize,
}

/// A framework fixed for evaluation: compiled interpretations, composite
/// applications up to the composition depth, and index structures.
pub struct EvalContext<'a> {
    taf: &'a Taf,
    grid: TruthGrid,
    props: Vec<PropositionId>,
    atoms: Vec<Atom>,
    complexes: Vec<ComplexApplication>,
    links: Vec<Link>,
}

impl<'a> EvalContext<'a> {
    pub fn new(taf: &'a Taf, composition_depth: usize) -> Result<Self, ContextError> {
        let grid = taf.grid();
        let props: Vec<PropositionId> = taf.propositions().iter().map(|p| p.id.clone()).collect();
        for pair in props.windows(2) {
            if pair[0] == pair[1] {
                return Err(ContextError::DuplicateProposition { id: pair[0].clone() });
            }
        }
        let index_of = |id: &PropositionId| props.binary_search(id).ok();

        let mut atoms = Vec::with_capacity(taf.applications().len());
        for (i, app) in taf.applications().iter().enumerate() {
            let scheme = taf.scheme(&app.scheme).ok_or_else(|| ContextError::UnknownScheme {
                application: i,
                id: app.scheme.clone(),
            })?;
            if app.premises.len() != scheme.arity() as usize
                || app.exceptions.len() != scheme.exception_arity() as usize
            {
                return Err(ContextError::ArityMismatch { application: i, scheme: app.scheme.clone() });
            }
            let prepared = scheme.compile(grid).map_err(|error| ContextError::Compile {
                scheme: app.scheme.clone(),
                resolution: grid.resolution(),
                error,
            })?;
            let resolve = |ids: &[PropositionId]| -> Result<Vec<usize>, ContextError> {
                ids.iter()
                    .map(|id| {
                        index_of(id).ok_or_else(|| ContextError::UnknownProposition {
                            application: i,
                            id: id.clone(),
                        })
                    })
                    .collect()
            };
            atoms.push(Atom {
                prepared,
                premises: resolve(&app.premises)?,
                exceptions: resolve(&app.exceptions)?,
                conclusion: index_of(&app.conclusion).ok_or_else(|| {
                    ContextError::UnknownProposition { application: i, id: app.conclusion.clone() }
                })?,
            });
        }

        let complexes = enumerate_complex(taf, composition_depth);
        let links = complexes
            .iter()
            .map(|c| Link {
                kind: c.kind,
                premises: c.premises.iter().map(|id| index_of(id).expect("checked above")).collect(),
                exceptions: c.exceptions.iter().map(|id| index_of(id).expect("checked above")).collect(),
                conclusion: index_of(&c.conclusion).expect("checked above"),
            })
            .collect();

        Ok(EvalContext { taf, grid, props, atoms, complexes, links })
    }

    pub fn taf(&self) -> &'a Taf {
        self.taf
    }

    pub fn grid(&self) -> TruthGrid {
        self.grid
    }

    /// Proposition ids in enumeration order (ascending).
    pub fn propositions(&self) -> &[PropositionId] {
        &self.props
    }

    /// The composite applications in play, including the atomic ones at
    /// depth 0.
    pub fn complex_applications(&self) -> &[ComplexApplication] {
        &self.complexes
    }

    /// Size of the labelling space, `(k+1)^|propositions|`; `None` when it
    /// overflows 128 bits.
    pub fn labelling_count(&self) -> Option<u128> {
        u32::try_from(self.props.len())
            .ok()
            .and_then(|n| (self.grid.len() as u128).checked_pow(n))
    }

    /// Labelling visits needed to grade a single labelling.
    pub fn single_cost(&self, property: Property) -> Option<u128> {
        if property.is_second_order() {
            self.labelling_count()
        } else {
            Some(1)
        }
    }

    /// Labelling visits needed to grade the whole space.
    pub fn search_cost(&self, property: Property) -> Option<u128> {
        self.labelling_count()?.checked_mul(self.single_cost(property)?)
    }

    /// Errors if `cost` is unknown (overflowed) or exceeds `budget`.
    pub fn check_budget(&self, cost: Option<u128>, budget: u64) -> Result<(), BudgetError> {
        match cost {
            Some(c) if c <= budget as u128 => Ok(()),
            _ => Err(BudgetError {
                base: self.grid.len(),
                propositions: self.props.len(),
                labellings: self.labelling_count(),
                cost,
                budget,
            }),
        }
    }

    /// The labelling at `rank` in the enumeration order: ranks run through
    /// degree tuples lexicographically, first proposition most significant,
    /// each digit from bottom to top.
    pub fn labelling_from_rank(&self, rank: u128) -> Labelling {
        let mut values = vec![self.grid.bottom(); self.props.len()];
        self.decode_rank_into(rank, &mut values);
        Labelling { values }
    }

    pub(crate) fn decode_rank_into(&self, mut rank: u128, out: &mut [TruthValue]) {
        let base = self.grid.len() as u128;
        for slot in out.iter_mut().rev() {
            *slot = self.grid.value((rank % base) as u32).expect("digit on grid");
            rank /= base;
        }
        debug_assert_eq!(rank, 0, "rank beyond the labelling space");
    }

    /// Rank of a labelling (inverse of [`EvalContext::labelling_from_rank`]).
    pub fn rank_of(&self, labelling: &Labelling) -> u128 {
        let base = self.grid.len() as u128;
        labelling
            .values
            .iter()
            .fold(0u128, |acc, v| acc * base + v.numerator() as u128)
    }

    /// Builds a labelling from explicit per-proposition degrees. Every
    /// proposition must be present, on the grid, and known.
    pub fn labelling_from_map(
        &self,
        values: &BTreeMap<PropositionId, Rational>,
    ) -> Result<Labelling, LabellingError> {
        for id in values.keys() {
            if self.props.binary_search(id).is_err() {
                return Err(LabellingError::Unknown { id: id.clone() });
            }
        }
        let mut out = Vec::with_capacity(self.props.len());
        for id in &self.props {
            let value = values
                .get(id)
                .ok_or_else(|| LabellingError::Missing { id: id.clone() })?;
            let on_grid = self.grid.exact(value).ok_or_else(|| LabellingError::OffGrid {
                id: id.clone(),
                value: *value,
                resolution: self.grid.resolution(),
            })?;
            out.push(on_grid);
        }
        Ok(Labelling { values: out })
    }

    /// Builds a labelling from degrees already on the grid, in proposition
    /// order. Panics if the length does not match.
    pub fn labelling_from_values(&self, values: Vec<TruthValue>) -> Labelling {
        assert_eq!(values.len(), self.props.len(), "one degree per proposition");
        Labelling { values }
    }

    pub fn labelling_to_map(&self, labelling: &Labelling) -> BTreeMap<PropositionId, TruthValue> {
        self.props.iter().cloned().zip(labelling.values.iter().copied()).collect()
    }

    pub fn label(&self, labelling: &Labelling, id: &PropositionId) -> Option<TruthValue> {
        self.props.binary_search(id).ok().map(|i| labelling.values[i])
    }

    /// Attack, support, and defense degree of every proposition under `l`.
    pub fn proposition_degrees(&self, l: &Labelling) -> Vec<PropositionDegrees> {
        let mut bufs = self.buffers();
        bufs.labels.copy_from_slice(&l.values);
        self.fill_degrees(&mut bufs);
        self.props
            .iter()
            .enumerate()
            .map(|(i, id)| PropositionDegrees {
                id: id.clone(),
                label: bufs.labels[i],
                attack: bufs.att[i],
                support: bufs.sup[i],
                defense: bufs.def[i],
            })
            .collect()
    }

    /// Degree to which `l` satisfies `property`.
    ///
    /// For preference and groundedness this enumerates the entire labelling
    /// space once; gate with [`EvalContext::single_cost`] and
    /// [`EvalContext::check_budget`] when the framework is not known to be
    /// small.
    pub fn property_degree(&self, property: Property, l: &Labelling) -> TruthValue {
        let mut bufs = self.buffers();
        bufs.labels.copy_from_slice(&l.values);
        if property.is_second_order() {
            let inner = self
                .enumerate_degrees(property.inner(), 1, u64::MAX)
                .expect("labelling space too large to enumerate");
            self.second_order(property, &mut bufs, &inner)
        } else {
            self.first_order(property, &mut bufs)
        }
    }

    /// Degrees of every labelling for `property`, indexed by rank.
    ///
    /// The result is identical for every thread count; threads only split
    /// the rank range.
    pub fn enumerate_degrees(
        &self,
        property: Property,
        threads: usize,
        budget: u64,
    ) -> Result<Vec<TruthValue>, BudgetError> {
        self.check_budget(self.search_cost(property), budget)?;
        let n = usize::try_from(self.labelling_count().expect("within budget"))
            .expect("labelling space fits in memory");

        let inner: Option<Vec<TruthValue>> = if property.is_second_order() {
            Some(self.enumerate_first_order(property.inner(), threads, n))
        } else {
            None
        };

        let out = match &inner {
            Some(inner) => self.fill_ranks(n, threads, |bufs, _| {
                self.second_order(property, bufs, inner)
            }),
            None => self.enumerate_first_order(property, threads, n),
        };
        Ok(out)
    }

    fn enumerate_first_order(&self, property: Property, threads: usize, n: usize) -> Vec<TruthValue> {
        self.fill_ranks(n, threads, |bufs, _| self.first_order(property, bufs))
    }

    /// Runs `eval` for every rank with labels pre-decoded, writing results
    /// into a rank-indexed vector split into disjoint per-thread chunks.
    fn fill_ranks(
        &self,
        n: usize,
        threads: usize,
        eval: impl Fn(&mut Buffers, u128) -> TruthValue + Sync,
    ) -> Vec<TruthValue> {
        let mut out = vec![self.grid.bottom(); n];
        let chunk = n.div_ceil(threads.max(1)).max(1);
        std::thread::scope(|scope| {
            for (t, slice) in out.chunks_mut(chunk).enumerate() {
                let eval = &eval;
                scope.spawn(move || {
                    let mut bufs = self.buffers();
                    let start = t * chunk;
                    for (offset, slot) in slice.iter_mut().enumerate() {
                        let rank = (start + offset) as u128;
                        self.decode_rank_into(rank, &mut bufs.labels);
                        *slot = eval(&mut bufs, rank);
                    }
                });
            }
        });
        out
    }

    /// The labellings with the highest degrees for `property`, best first;
    /// among equal degrees, lower ranks win. At most `top_n` entries.
    pub fn best_labellings(
        &self,
        property: Property,
        top_n: usize,
        threads: usize,
        budget: u64,
    ) -> Result<Vec<RankedLabelling>, BudgetError> {
        let degrees = self.enumerate_degrees(property, threads, budget)?;
        let mut best: Vec<(TruthValue, usize)> = Vec::with_capacity(top_n.saturating_add(1));
        for (rank, &degree) in degrees.iter().enumerate() {
            if top_n == 0 {
                break;
            }
            if best.len() == top_n && degree <= best.last().expect("nonempty").0 {
                continue;
            }
            let pos = best.partition_point(|(d, _)| *d >= degree);
            best.insert(pos, (degree, rank));
            best.truncate(top_n);
        }
        Ok(best
            .into_iter()
            .map(|(degree, rank)| RankedLabelling {
                rank: rank as u128,
                labelling: self.labelling_from_rank(rank as u128),
                degree,
            })
            .collect())
    }

    fn buffers(&self) -> Buffers {
        let n = self.props.len();
        let max_slots = self
            .atoms
            .iter()
            .map(|a| a.premises.len().max(a.exceptions.len()))
            .max()
            .unwrap_or(0);
        Buffers {
            labels: vec![self.grid.bottom(); n],
            other: vec![self.grid.bottom(); n],
            att: vec![self.grid.bottom(); n],
            sup: vec![self.grid.bottom(); n],
            def: vec![self.grid.top(); n],
            slots: Vec::with_capacity(max_slots),
            slots2: Vec::with_capacity(max_slots),
        }
    }

    /// Computes per-proposition attack, support, and defense degrees from
    /// the labels in `bufs`.
    fn fill_degrees(&self, bufs: &mut Buffers) {
        let labels = &bufs.labels;
        bufs.att.fill(self.grid.bottom());
        bufs.sup.fill(self.grid.bottom());
        bufs.def.fill(self.grid.top());

        // An application's force is the weakest of its premise labels and
        // negated exception labels; a proposition's attack (support) degree
        // is the strongest force among attacks (supports) concluding in it.
        for link in &self.links {
            let mut force = self.grid.top();
            for &p in &link.premises {
                force = force.min(labels[p]);
            }
            for &e in &link.exceptions {
                force = force.min(labels[e].not());
            }
            let bucket = match link.kind {
                SchemeKind::Attack => &mut bufs.att,
                SchemeKind::Support => &mut bufs.sup,
            };
            bucket[link.conclusion] = bucket[link.conclusion].max(force);
        }

        // An attack is countered when a premise is attacked or an exception
        // is supported; a proposition is defended to the degree its weakest-
        // countered attacker is countered.
        for link in &self.links {
            if link.kind != SchemeKind::Attack {
                continue;
            }
            let mut countered = self.grid.bottom();
            for &p in &link.premises {
                countered = countered.max(bufs.att[p]);
            }
            for &e in &link.exceptions {
                countered = countered.max(bufs.sup[e]);
            }
            bufs.def[link.conclusion] = bufs.def[link.conclusion].min(countered);
        }
    }

    /// Weakest atomic application interpretation under the labels in `bufs`.
    fn consistency_of(&self, bufs: &mut Buffers) -> TruthValue {
        let mut co = self.grid.top();
        for atom in &self.atoms {
            bufs.slots.clear();
            bufs.slots.extend(atom.premises.iter().map(|&i| bufs.labels[i]));
            bufs.slots2.clear();
            bufs.slots2.extend(atom.exceptions.iter().map(|&i| bufs.labels[i]));
            let value = atom.prepared.eval(&bufs.slots, &bufs.slots2, bufs.labels[atom.conclusion]);
            co = co.min(value);
            if co.is_bottom() {
                break;
            }
        }
        co
    }

    fn first_order(&self, property: Property, bufs: &mut Buffers) -> TruthValue {
        let co = self.consistency_of(bufs);
        if property == Property::Consistency {
            return co;
        }
        if co.is_bottom() {
            // Every remaining property starts from co via the strong
            // conjunction, which is absorbed by bottom.
            return co;
        }
        self.fill_degrees(bufs);
        let n = self.props.len();
        match property {
            Property::Consistency => unreachable!("handled above"),
            Property::Admissibility => {
                let mut guard = self.grid.top();
                for i in 0..n {
                    guard = guard.min(bufs.labels[i].implies(bufs.def[i]));
                }
                co.and(guard)
            }
            Property::Stability => {
                let mut guard = self.grid.top();
                for i in 0..n {
                    guard = guard.min(bufs.labels[i].not().implies(bufs.att[i]));
                }
                co.and(guard)
            }
            Property::Completeness => {
                let mut accepted_defended = self.grid.top();
                let mut defended_accepted = self.grid.top();
                for i in 0..n {
                    accepted_defended = accepted_defended.min(bufs.labels[i].implies(bufs.def[i]));
                    defended_accepted = defended_accepted.min(bufs.def[i].implies(bufs.labels[i]));
                }
                co.and(accepted_defended).and(defended_accepted)
            }
            Property::Preference | Property::Groundedness => {
                unreachable!("second-order properties take the enumerated inner degrees")
            }
        }
    }

    /// Preference and groundedness: compare the labels in `bufs` against
    /// every labelling, whose `inner` (admissibility resp. completeness)
    /// degrees are precomputed by rank.
    fn second_order(&self, property: Property, bufs: &mut Buffers, inner: &[TruthValue]) -> TruthValue {
        let own = self.first_order(property.inner(), bufs);
        if own.is_bottom() {
            return own;
        }
        let n = self.props.len();
        let mut quantified = self.grid.top();
        for (rank, &inner_degree) in inner.iter().enumerate() {
            if inner_degree.is_bottom() {
                continue;
            }
            self.decode_rank_into(rank as u128, &mut bufs.other);
            let term = match property {
                Property::Preference => {
                    // other admissible → (self ≤ other → other ≤ self)
                    let mut forward = self.grid.top();
                    let mut backward = self.grid.top();
                    for i in 0..n {
                        forward = forward.min(bufs.labels[i].implies(bufs.other[i]));
                        backward = backward.min(bufs.other[i].implies(bufs.labels[i]));
                    }
                    inner_degree.implies(forward.implies(backward))
                }
                Property::Groundedness => {
                    // other complete → self ≤ other
                    let mut below = self.grid.top();
                    for i in 0..n {
                        below = below.min(bufs.labels[i].implies(bufs.other[i]));
                    }
                    inner_degree.implies(below)
                }
                _ => unreachable!("only second-order properties reach here"),
            };
            quantified = quantified.min(term);
            if quantified.is_bottom() {
                break;
            }
        }
        own.and(quantified)
    }
}

/// Reusable per-thread scratch space.
struct Buffers {
    labels: Vec<TruthValue>,
    other: Vec<TruthValue>,
    att: Vec<TruthValue>,
    sup: Vec<TruthValue>,
    def: Vec<TruthValue>,
    slots: Vec<TruthValue>,
    slots2: Vec<TruthValue>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_scheme, Proposition, SchemeApplication, Taf};
    use std::collections::BTreeMap;

    fn support_chain_taf(k: u32) -> Taf {
        Taf::new(
            TruthGrid::new(k).unwrap(),
            vec![Proposition::illocution("a"), Proposition::illocution("b")],
            vec![builtin_scheme("deductive-support").unwrap()],
            vec![SchemeApplication {
                scheme: "deductive-support".into(),
                premises: vec!["a".into()],
                exceptions: vec![],
                conclusion: "b".into(),
            }],
            BTreeMap::new(),
        )
    }

    fn mutual_attack_taf(k: u32) -> Taf {
        let attack = |from: &str, to: &str| SchemeApplication {
            scheme: "mutual-exclusion-attack".into(),
            premises: vec![from.into()],
            exceptions: vec![],
            conclusion: to.into(),
        };
        Taf::new(
            TruthGrid::new(k).unwrap(),
            vec![Proposition::illocution("a"), Proposition::illocution("b")],
            vec![builtin_scheme("mutual-exclusion-attack").unwrap()],
            vec![attack("a", "b"), attack("b", "a")],
            BTreeMap::new(),
        )
    }

    fn labelling(ctx: &EvalContext<'_>, nums: &[u32]) -> Labelling {
        let k = ctx.grid().resolution();
        ctx.labelling_from_values(nums.iter().map(|&n| TruthValue::new(n, k).unwrap()).collect())
    }

    #[test]
    fn rank_codec_round_trips() {
        let taf = support_chain_taf(2);
        let ctx = EvalContext::new(&taf, 0).unwrap();
        assert_eq!(ctx.labelling_count(), Some(9));
        for rank in 0..9u128 {
            let l = ctx.labelling_from_rank(rank);
            assert_eq!(ctx.rank_of(&l), rank);
        }
        // First proposition is the most significant digit.
        let l = ctx.labelling_from_rank(3);
        assert_eq!(l.values()[0], TruthValue::new(1, 2).unwrap());
        assert_eq!(l.values()[1], TruthValue::new(0, 2).unwrap());
    }

    #[test]
    fn degrees_on_a_single_support() {
        let taf = support_chain_taf(2);
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let l = labelling(&ctx, &[2, 1]); // a=1, b=1/2
        let degrees = ctx.proposition_degrees(&l);
        let a = &degrees[0];
        let b = &degrees[1];
        assert_eq!(a.attack, ctx.grid().bottom());
        assert_eq!(a.support, ctx.grid().bottom());
        assert_eq!(a.defense, ctx.grid().top());
        assert_eq!(b.support, TruthValue::new(2, 2).unwrap()); // premise label
        assert_eq!(b.defense, ctx.grid().top()); // unattacked

        // consistency = (a → b) = 1/2; stability = co ⊓ min label = 0.
        assert_eq!(ctx.property_degree(Property::Consistency, &l), TruthValue::new(1, 2).unwrap());
        assert_eq!(ctx.property_degree(Property::Stability, &l), TruthValue::new(0, 2).unwrap());
        let top = labelling(&ctx, &[2, 2]);
        assert_eq!(ctx.property_degree(Property::Stability, &top), ctx.grid().top());
    }

    #[test]
    fn crisp_mutual_attack_matches_classical_semantics() {
        let taf = mutual_attack_taf(1);
        let ctx = EvalContext::new(&taf, 0).unwrap();
        // Ranks (a,b): 0 = (0,0), 1 = (0,1), 2 = (1,0), 3 = (1,1).
        let expect = |property, wanted: [u32; 4]| {
            let degrees = ctx.enumerate_degrees(property, 1, 1 << 20).unwrap();
            let got: Vec<u32> = degrees.iter().map(|d| d.numerator()).collect();
            assert_eq!(got, wanted.to_vec(), "{property}");
        };
        expect(Property::Consistency, [1, 1, 1, 0]);
        expect(Property::Admissibility, [1, 1, 1, 0]);
        expect(Property::Stability, [0, 1, 1, 0]);
        expect(Property::Completeness, [1, 1, 1, 0]);
        expect(Property::Preference, [0, 1, 1, 0]);
        expect(Property::Groundedness, [1, 0, 0, 0]);
    }

    #[test]
    fn single_evaluation_agrees_with_enumeration() {
        for (taf, depth) in [(support_chain_taf(2), 1), (mutual_attack_taf(2), 2)] {
            let ctx = EvalContext::new(&taf, depth).unwrap();
            let n = ctx.labelling_count().unwrap() as usize;
            for property in Property::ALL {
                let all = ctx.enumerate_degrees(property, 1, 1 << 20).unwrap();
                assert_eq!(all.len(), n);
                for rank in 0..n {
                    let l = ctx.labelling_from_rank(rank as u128);
                    assert_eq!(
                        ctx.property_degree(property, &l),
                        all[rank],
                        "{property} at rank {rank}"
                    );
                }
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let taf = mutual_attack_taf(3);
        let ctx = EvalContext::new(&taf, 1).unwrap();
        for property in [Property::Consistency, Property::Completeness, Property::Groundedness] {
            let one = ctx.enumerate_degrees(property, 1, 1 << 20).unwrap();
            for threads in [2, 3, 8] {
                let many = ctx.enumerate_degrees(property, threads, 1 << 20).unwrap();
                assert_eq!(one, many, "{property} with {threads} threads");
            }
        }
    }

    #[test]
    fn best_labellings_rank_by_degree_then_rank() {
        let taf = mutual_attack_taf(1);
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let best = ctx.best_labellings(Property::Stability, 3, 1, 1 << 20).unwrap();
        assert_eq!(best.len(), 3);
        // Degree 1 at ranks 1 and 2; the tie among degree-0 labellings goes
        // to rank 0.
        assert_eq!(best[0].rank, 1);
        assert_eq!(best[1].rank, 2);
        assert_eq!(best[0].degree, ctx.grid().top());
        assert_eq!(best[1].degree, ctx.grid().top());
        assert_eq!(best[2].rank, 0);
        assert_eq!(best[2].degree, ctx.grid().bottom());

        assert!(ctx.best_labellings(Property::Stability, 0, 1, 1 << 20).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let taf = mutual_attack_taf(4);
        let ctx = EvalContext::new(&taf, 1).unwrap();
        assert_eq!(ctx.labelling_count(), Some(25));
        assert_eq!(ctx.search_cost(Property::Preference), Some(625));
        let err = ctx.enumerate_degrees(Property::Preference, 1, 624).unwrap_err();
        assert_eq!(err.cost, Some(625));
        assert!(err.to_string().contains("5^2"));
        assert!(ctx.enumerate_degrees(Property::Preference, 1, 625).is_ok());
    }

    #[test]
    fn labelling_io_checks() {
        let taf = support_chain_taf(2);
        let ctx = EvalContext::new(&taf, 0).unwrap();
        let mut map = BTreeMap::new();
        map.insert(PropositionId::from("a"), Rational::new(1, 2));
        assert!(matches!(
            ctx.labelling_from_map(&map),
            Err(LabellingError::Missing { .. })
        ));
        map.insert(PropositionId::from("b"), Rational::new(1, 3));
        assert!(matches!(
            ctx.labelling_from_map(&map),
            Err(LabellingError::OffGrid { .. })
        ));
        map.insert(PropositionId::from("b"), Rational::new(1, 1));
        map.insert(PropositionId::from("zzz"), Rational::new(0, 1));
        assert!(matches!(
            ctx.labelling_from_map(&map),
            Err(LabellingError::Unknown { .. })
        ));
        map.remove(&PropositionId::from("zzz"));
        let l = ctx.labelling_from_map(&map).unwrap();
        assert_eq!(ctx.label(&l, &"a".into()), Some(TruthValue::new(1, 2).unwrap()));
        assert_eq!(ctx.rank_of(&l), 1 * 3 + 2);
    }

    #[test]
    fn composite_attacks_extend_reach() {
        // a supports b, b attacks c: at depth 1 the composite a→(attack c)
        // exists, so raising a attacks c even when b is labelled low.
        let taf = Taf::new(
            TruthGrid::new(2).unwrap(),
            vec![
                Proposition::illocution("a"),
                Proposition::illocution("b"),
                Proposition::illocution("c"),
            ],
            vec![
                builtin_scheme("deductive-support").unwrap(),
                builtin_scheme("inhibiting-attack").unwrap(),
            ],
            vec![
                SchemeApplication {
                    scheme: "deductive-support".into(),
                    premises: vec!["a".into()],
                    exceptions: vec![],
                    conclusion: "b".into(),
                },
                SchemeApplication {
                    scheme: "inhibiting-attack".into(),
                    premises: vec!["b".into()],
                    exceptions: vec![],
                    conclusion: "c".into(),
                },
            ],
            BTreeMap::new(),
        );
        let shallow = EvalContext::new(&taf, 0).unwrap();
        let deep = EvalContext::new(&taf, 1).unwrap();
        assert_eq!(shallow.complex_applications().len(), 2);
        assert_eq!(deep.complex_applications().len(), 3);

        let l = deep.labelling_from_values(vec![
            TruthValue::new(2, 2).unwrap(), // a = 1
            TruthValue::new(0, 2).unwrap(), // b = 0
            TruthValue::new(0, 2).unwrap(), // c = 0
        ]);
        let l_shallow = shallow.labelling_from_values(l.values().to_vec());
        let att_c_shallow = shallow.proposition_degrees(&l_shallow)[2].attack;
        let att_c_deep = deep.proposition_degrees(&l)[2].attack;
        assert_eq!(att_c_shallow, TruthValue::new(0, 2).unwrap());
        assert_eq!(att_c_deep, TruthValue::new(2, 2).unwrap());
    }
}

//! The argumentation framework: propositions, schemes, applications, beliefs.
//!
//! Propositions split into illocutions (claims made in the discussion) and
//! entities (the actors themselves, whose label degree reads as
//! trustworthiness). Schemes carry a kind (attack or support), slot arities,
//! and an interpretation formula from [`crate::dsl`]; applications instantiate
//! a scheme over concrete propositions. Belief predicates attach an actor's
//! attitude toward a proposition as a function of that proposition's label.
//!
//! A [`Taf`] bundles all of it with the evaluation grid. Construction is
//! permissive; [`Taf::validate`] reports every broken invariant, including
//! schemes whose interpretation fails the monotonicity requirement for their
//! kind.

use crate::dsl::{self, CompileError, ParseError, PreparedExpr, SchemeExpr};
use crate::truth::{TruthGrid, TruthValue};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                $name(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

id_type! {
    /// Identifier of a proposition (illocution or entity).
    PropositionId
}
id_type! {
    /// Identifier of a scheme.
    SchemeId
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropositionKind {
    Illocution,
    Entity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proposition {
    pub id: PropositionId,
    pub kind: PropositionKind,
    /// Human-readable text; optional, display only.
    pub label: Option<String>,
}

impl Proposition {
    pub fn illocution(id: impl Into<PropositionId>) -> Self {
        Proposition { id: id.into(), kind: PropositionKind::Illocution, label: None }
    }

    pub fn entity(id: impl Into<PropositionId>) -> Self {
        Proposition { id: id.into(), kind: PropositionKind::Entity, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    Attack,
    Support,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Attack => "attack",
            SchemeKind::Support => "support",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "attack" => Ok(SchemeKind::Attack),
            "support" => Ok(SchemeKind::Support),
            other => Err(format!("unknown scheme kind `{other}`; expected `support` or `attack`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("scheme `{id}`: {source}")]
    Parse {
        id: SchemeId,
        #[source]
        source: ParseError,
    },
    #[error("scheme `{id}`: arity must be at least 1")]
    ZeroArity { id: SchemeId },
    #[error("scheme `{id}`: interpretation uses premise slot p{slot} but the arity is {arity}")]
    PremiseSlot { id: SchemeId, slot: u32, arity: u32 },
    #[error("scheme `{id}`: interpretation uses exception slot e{slot} but the exception arity is {arity}")]
    ExceptionSlot { id: SchemeId, slot: u32, arity: u32 },
}

/// An argumentation scheme: kind, slot arities, and interpretation formula.
///
/// The interpretation visible to the semantics is always the exception-guarded
/// form `(e1 | … | em) | body`; [`Scheme::interpretation`] returns that, while
/// [`Scheme::body`] is the formula as written.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    id: SchemeId,
    kind: SchemeKind,
    arity: u32,
    exception_arity: u32,
    body: SchemeExpr,
    guarded: SchemeExpr,
}

impl Scheme {
    pub fn new(
        id: impl Into<SchemeId>,
        kind: SchemeKind,
        arity: u32,
        exception_arity: u32,
        interpretation: &str,
    ) -> Result<Self, SchemeError> {
        let id = id.into();
        let body = dsl::parse(interpretation).map_err(|source| SchemeError::Parse { id: id.clone(), source })?;
        Scheme::from_expr(id, kind, arity, exception_arity, body)
    }

    pub fn from_expr(
        id: impl Into<SchemeId>,
        kind: SchemeKind,
        arity: u32,
        exception_arity: u32,
        body: SchemeExpr,
    ) -> Result<Self, SchemeError> {
        let id = id.into();
        if arity == 0 {
            return Err(SchemeError::ZeroArity { id });
        }
        if let Some((slot, _)) = body.find_slot_above(arity, |k| match k {
            dsl::ExprKind::Premise(i) => Some(*i),
            _ => None,
        }) {
            return Err(SchemeError::PremiseSlot { id, slot, arity });
        }
        if let Some((slot, _)) = body.find_slot_above(exception_arity, |k| match k {
            dsl::ExprKind::Exception(i) => Some(*i),
            _ => None,
        }) {
            return Err(SchemeError::ExceptionSlot { id, slot, arity: exception_arity });
        }
        let guarded = dsl::exception_guard(&body, exception_arity);
        Ok(Scheme { id, kind, arity, exception_arity, body, guarded })
    }

    pub fn id(&self) -> &SchemeId {
        &self.id
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn exception_arity(&self) -> u32 {
        self.exception_arity
    }

    /// The formula as written, without the exception escape.
    pub fn body(&self) -> &SchemeExpr {
        &self.body
    }

    /// The effective interpretation: exception-guarded body.
    pub fn interpretation(&self) -> &SchemeExpr {
        &self.guarded
    }

    /// Compiles the effective interpretation for a grid.
    pub fn compile(&self, grid: TruthGrid) -> Result<PreparedExpr, CompileError> {
        dsl::compile(&self.guarded, grid, self.arity, self.exception_arity)
    }
}

/// The seven schemes shipped with the library.
///
/// All of them are monotone at degree 1 for their kind; the names follow the
/// inference patterns they encode.
pub fn builtin_schemes() -> Vec<Scheme> {
    let mk = |id: &str, kind, arity, text: &str| {
        Scheme::new(id, kind, arity, 0, text).expect("built-in schemes are well-formed")
    };
    vec![
        mk("deductive-support", SchemeKind::Support, 1, "p1 -> c"),
        mk("default-inference", SchemeKind::Support, 1, "p1 -> c"),
        mk("necessary-support", SchemeKind::Support, 1, "!p1 -> !c"),
        mk("disjunctive-support", SchemeKind::Support, 1, "!p1 -> c"),
        mk("position-to-know", SchemeKind::Support, 3, "((p1 & p2) & p3) -> c"),
        mk("inhibiting-attack", SchemeKind::Attack, 1, "p1 -> !c"),
        mk("mutual-exclusion-attack", SchemeKind::Attack, 1, "!(p1 & c)"),
    ]
}

pub fn builtin_scheme(name: &str) -> Option<Scheme> {
    builtin_schemes().into_iter().find(|s| s.id().as_str() == name)
}

/// One use of a scheme over concrete propositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SchemeApplication {
    pub scheme: SchemeId,
    pub premises: Vec<PropositionId>,
    pub exceptions: Vec<PropositionId>,
    pub conclusion: PropositionId,
}

/// An actor's attitude toward one proposition, as a function of the degree
/// the labelling assigns to that proposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BeliefPredicate {
    /// Indifferent: every degree is fully acceptable.
    NoOpinion,
    /// Peaked commitment `1 − |t − w|` around the peak `w`.
    Tent(TruthValue),
    /// Crisp acceptance of degrees at or above the threshold.
    AtLeast(TruthValue),
    /// Crisp acceptance of degrees at or below the threshold.
    AtMost(TruthValue),
    /// Explicit value per grid degree, indexed by numerator.
    Table(Vec<TruthValue>),
}

impl BeliefPredicate {
    /// The predicate's value when the proposition is labelled `t`.
    pub fn eval(&self, grid: TruthGrid, t: TruthValue) -> TruthValue {
        match self {
            BeliefPredicate::NoOpinion => grid.top(),
            BeliefPredicate::Tent(peak) => t.iff(*peak),
            BeliefPredicate::AtLeast(threshold) => {
                if t >= *threshold {
                    grid.top()
                } else {
                    grid.bottom()
                }
            }
            BeliefPredicate::AtMost(threshold) => {
                if t <= *threshold {
                    grid.top()
                } else {
                    grid.bottom()
                }
            }
            BeliefPredicate::Table(values) => values[t.numerator() as usize],
        }
    }

    /// Checks the predicate is usable on `grid` (parameters on the grid,
    /// tables total). Returns a description of the defect if not.
    fn check(&self, grid: TruthGrid) -> Result<(), String> {
        let on_grid = |v: &TruthValue, what: &str| {
            if v.denominator() == grid.resolution() {
                Ok(())
            } else {
                Err(format!("{what} {v} is not on the 1/{} grid", grid.resolution()))
            }
        };
        match self {
            BeliefPredicate::NoOpinion => Ok(()),
            BeliefPredicate::Tent(peak) => on_grid(peak, "tent peak"),
            BeliefPredicate::AtLeast(t) => on_grid(t, "threshold"),
            BeliefPredicate::AtMost(t) => on_grid(t, "threshold"),
            BeliefPredicate::Table(values) => {
                if values.len() as u64 != grid.len() {
                    return Err(format!(
                        "table has {} entries but the grid has {} degrees",
                        values.len(),
                        grid.len()
                    ));
                }
                for v in values {
                    on_grid(v, "table value")?;
                }
                Ok(())
            }
        }
    }
}

/// A broken invariant found by [`Taf::validate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("duplicate proposition id `{id}`")]
    DuplicateProposition { id: PropositionId },
    #[error("duplicate scheme id `{id}`")]
    DuplicateScheme { id: SchemeId },
    #[error("application #{application} uses unknown scheme `{id}`")]
    UnknownScheme { application: usize, id: SchemeId },
    #[error("application #{application} ({role}) references unknown proposition `{id}`")]
    UnknownProposition { application: usize, role: String, id: PropositionId },
    #[error("application #{application} of `{scheme}` has {got} premises, scheme arity is {expected}")]
    PremiseArityMismatch { application: usize, scheme: SchemeId, expected: u32, got: usize },
    #[error("application #{application} of `{scheme}` has {got} exceptions, scheme exception arity is {expected}")]
    ExceptionArityMismatch { application: usize, scheme: SchemeId, expected: u32, got: usize },
    #[error("belief holder `{actor}` is not an entity")]
    BeliefActorNotEntity { actor: PropositionId },
    #[error("belief of `{actor}` references unknown proposition `{proposition}`")]
    BeliefUnknownProposition { actor: PropositionId, proposition: PropositionId },
    #[error("belief of `{actor}` on `{proposition}`: {detail}")]
    BeliefUnusable { actor: PropositionId, proposition: PropositionId, detail: String },
    #[error("scheme `{scheme}` cannot be evaluated on the 1/{resolution} grid: {error}")]
    SchemeNotEvaluable { scheme: SchemeId, resolution: u32, error: CompileError },
    #[error("scheme `{scheme}` is not monotone for its kind (degree {degree})")]
    NonMonotoneScheme { scheme: SchemeId, degree: TruthValue },
}

/// The framework: grid, propositions, schemes, applications, and beliefs.
///
/// Contents are normalized to a deterministic order at construction and
/// immutable afterwards; everything downstream (enumeration order, reports,
/// serialization) inherits that order.
#[derive(Debug, Clone)]
pub struct Taf {
    grid: TruthGrid,
    propositions: Vec<Proposition>,
    schemes: Vec<Scheme>,
    applications: Vec<SchemeApplication>,
    beliefs: BTreeMap<(PropositionId, PropositionId), BeliefPredicate>,
}

impl Taf {
    pub fn new(
        grid: TruthGrid,
        mut propositions: Vec<Proposition>,
        mut schemes: Vec<Scheme>,
        mut applications: Vec<SchemeApplication>,
        beliefs: BTreeMap<(PropositionId, PropositionId), BeliefPredicate>,
    ) -> Self {
        propositions.sort_by(|a, b| a.id.cmp(&b.id));
        schemes.sort_by(|a, b| a.id.cmp(&b.id));
        applications.sort();
        Taf { grid, propositions, schemes, applications, beliefs }
    }

    pub fn grid(&self) -> TruthGrid {
        self.grid
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn illocutions(&self) -> impl Iterator<Item = &Proposition> {
        self.propositions.iter().filter(|p| p.kind == PropositionKind::Illocution)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Proposition> {
        self.propositions.iter().filter(|p| p.kind == PropositionKind::Entity)
    }

    pub fn proposition(&self, id: &PropositionId) -> Option<&Proposition> {
        self.propositions
            .binary_search_by(|p| p.id.cmp(id))
            .ok()
            .map(|i| &self.propositions[i])
    }

    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    pub fn scheme(&self, id: &SchemeId) -> Option<&Scheme> {
        self.schemes
            .binary_search_by(|s| s.id.cmp(id))
            .ok()
            .map(|i| &self.schemes[i])
    }

    pub fn applications(&self) -> &[SchemeApplication] {
        &self.applications
    }

    pub fn beliefs(&self) -> &BTreeMap<(PropositionId, PropositionId), BeliefPredicate> {
        &self.beliefs
    }

    /// The belief predicate of `actor` about `proposition`; actors hold no
    /// opinion by default.
    pub fn belief(&self, actor: &PropositionId, proposition: &PropositionId) -> &BeliefPredicate {
        const NO_OPINION: BeliefPredicate = BeliefPredicate::NoOpinion;
        self.beliefs
            .get(&(actor.clone(), proposition.clone()))
            .unwrap_or(&NO_OPINION)
    }

    /// Checks every structural invariant and the monotonicity requirement of
    /// every scheme. Returns all findings; empty means well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        for pair in self.propositions.windows(2) {
            if pair[0].id == pair[1].id {
                out.push(Violation::DuplicateProposition { id: pair[0].id.clone() });
            }
        }
        for pair in self.schemes.windows(2) {
            if pair[0].id == pair[1].id {
                out.push(Violation::DuplicateScheme { id: pair[0].id.clone() });
            }
        }

        for (index, app) in self.applications.iter().enumerate() {
            let scheme = match self.scheme(&app.scheme) {
                Some(s) => s,
                None => {
                    out.push(Violation::UnknownScheme { application: index, id: app.scheme.clone() });
                    continue;
                }
            };
            if app.premises.len() != scheme.arity() as usize {
                out.push(Violation::PremiseArityMismatch {
                    application: index,
                    scheme: scheme.id().clone(),
                    expected: scheme.arity(),
                    got: app.premises.len(),
                });
            }
            if app.exceptions.len() != scheme.exception_arity() as usize {
                out.push(Violation::ExceptionArityMismatch {
                    application: index,
                    scheme: scheme.id().clone(),
                    expected: scheme.exception_arity(),
                    got: app.exceptions.len(),
                });
            }
            let roles = app
                .premises
                .iter()
                .enumerate()
                .map(|(i, id)| (format!("premise {}", i + 1), id))
                .chain(
                    app.exceptions
                        .iter()
                        .enumerate()
                        .map(|(i, id)| (format!("exception {}", i + 1), id)),
                )
                .chain(std::iter::once(("conclusion".to_string(), &app.conclusion)));
            for (role, id) in roles {
                if self.proposition(id).is_none() {
                    out.push(Violation::UnknownProposition { application: index, role, id: id.clone() });
                }
            }
        }

        for ((actor, proposition), predicate) in &self.beliefs {
            match self.proposition(actor) {
                Some(p) if p.kind == PropositionKind::Entity => {}
                _ => out.push(Violation::BeliefActorNotEntity { actor: actor.clone() }),
            }
            if self.proposition(proposition).is_none() {
                out.push(Violation::BeliefUnknownProposition {
                    actor: actor.clone(),
                    proposition: proposition.clone(),
                });
            }
            if let Err(detail) = predicate.check(self.grid) {
                out.push(Violation::BeliefUnusable {
                    actor: actor.clone(),
                    proposition: proposition.clone(),
                    detail,
                });
            }
        }

        for scheme in &self.schemes {
            match monotonicity_degree(scheme, self.grid) {
                Err(error) => out.push(Violation::SchemeNotEvaluable {
                    scheme: scheme.id().clone(),
                    resolution: self.grid.resolution(),
                    error,
                }),
                Ok(degree) if !degree.is_top() => {
                    out.push(Violation::NonMonotoneScheme { scheme: scheme.id().clone(), degree })
                }
                Ok(_) => {}
            }
        }

        out
    }
}

/// Degree to which a scheme's interpretation satisfies the monotonicity
/// requirement for its kind, with quantifiers read as infima/suprema over
/// the grid and exceptions fixed to the all-bottom vector.
///
/// For supports: raising premise degrees must allow the interpretation to be
/// met at least as well at some claim degree no lower. For attacks the
/// witness claim degree must be no higher instead.
pub fn monotonicity_degree(scheme: &Scheme, grid: TruthGrid) -> Result<TruthValue, CompileError> {
    let prepared = scheme.compile(grid)?;
    let arity = scheme.arity() as usize;
    let bottoms = vec![grid.bottom(); scheme.exception_arity() as usize];
    let k = grid.resolution();
    let degrees = grid.len() as usize;

    // σ(p̄, ⊥, c) for every premise tuple and claim degree, then the running
    // maximum over claims from above (supports) or below (attacks).
    let tuple_count = (grid.len() as u128).checked_pow(scheme.arity()).expect("tuple space fits") as usize;
    let mut sigma = vec![grid.bottom(); tuple_count * degrees];
    let mut witness = vec![grid.bottom(); tuple_count * degrees];
    let mut tuple = vec![grid.bottom(); arity];
    for index in 0..tuple_count {
        decode_tuple(index, k, &mut tuple);
        let row = &mut sigma[index * degrees..(index + 1) * degrees];
        for (c, claim) in grid.values().enumerate() {
            row[c] = prepared.eval(&tuple, &bottoms, claim);
        }
        let out = &mut witness[index * degrees..(index + 1) * degrees];
        match scheme.kind() {
            SchemeKind::Support => {
                let mut best = grid.bottom();
                for c in (0..degrees).rev() {
                    best = best.max(row[c]);
                    out[c] = best;
                }
            }
            SchemeKind::Attack => {
                let mut best = grid.bottom();
                for (c, item) in out.iter_mut().enumerate() {
                    best = best.max(row[c]);
                    *item = best;
                }
            }
        }
    }

    // Every pointwise-comparable pair p̄ ≤ q̄ must satisfy
    // σ(p̄, ⊥, c) ≤ max over admissible c' of σ(q̄, ⊥, c') for every c.
    // All comparisons are crisp, so the degree collapses to 0 or 1 and the
    // first counterexample decides.
    let mut lower = vec![0u32; arity];
    for p_index in 0..tuple_count {
        decode_digits(p_index, k, &mut lower);
        let p_row = &sigma[p_index * degrees..(p_index + 1) * degrees];
        let mut upper = lower.clone();
        loop {
            let q_index = encode_digits(&upper, k);
            let q_witness = &witness[q_index * degrees..(q_index + 1) * degrees];
            for c in 0..degrees {
                if p_row[c] > q_witness[c] {
                    return Ok(grid.bottom());
                }
            }
            if !advance_dominating(&mut upper, &lower, k) {
                break;
            }
        }
    }
    Ok(grid.top())
}

fn decode_tuple(index: usize, k: u32, out: &mut [TruthValue]) {
    let base = k as usize + 1;
    let mut rest = index;
    for slot in out.iter_mut() {
        *slot = TruthValue::new((rest % base) as u32, k).expect("digit within grid");
        rest /= base;
    }
}

fn decode_digits(index: usize, k: u32, out: &mut [u32]) {
    let base = k as usize + 1;
    let mut rest = index;
    for slot in out.iter_mut() {
        *slot = (rest % base) as u32;
        rest /= base;
    }
}

fn encode_digits(digits: &[u32], k: u32) -> usize {
    let base = k as usize + 1;
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * base + d as usize)
}

/// Steps `upper` through all tuples that dominate `lower` pointwise.
fn advance_dominating(upper: &mut [u32], lower: &[u32], k: u32) -> bool {
    for i in 0..upper.len() {
        if upper[i] < k {
            upper[i] += 1;
            return true;
        }
        upper[i] = lower[i];
    }
    false
}

//! On-disk interchange format for trichotomic argument graphs.
//!
//! A graph file (`"taif-version": 1`) records the full dialogue-bearing
//! structure: entity, locution, and illocution nodes, scheme definitions,
//! support/attack applications, weighted trust and commitment edges, and the
//! dialogue wiring (reply, transition, and illocutionary-force edges).
//! [`TaifGraph::project`] reduces all of that to a [`Taf`]: locutions and the
//! dialogue edges are dropped, and the trust/commitment weights become belief
//! predicates via a per-file (overridable) mapping.
//!
//! Weights are exact rationals read from the literal JSON text — `0.1` means
//! one tenth, never the nearest double — and may be written as JSON numbers,
//! decimal strings, or `a/b` fraction strings. [`TaifGraph::to_json`] emits a
//! canonical form (fixed key order, one object per line, weights as reduced
//! `n/d` strings), so save ∘ load ∘ save is byte-stable.

pub mod dot;
mod taf_json;

pub use taf_json::{taf_from_json, taf_to_json};

use crate::model::{
    builtin_scheme, BeliefPredicate, Proposition, Scheme, SchemeApplication, SchemeKind, Taf,
};
use crate::rational::{in_unit_interval, parse_rational, Rational};
use crate::truth::TruthGrid;
use serde_json::{Map, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A defect that makes a graph file unusable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaifError {
    /// The document disagrees with the schema; `path` points at the offending
    /// element, JSON-pointer style (`/applications/2/conclusion`).
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    /// Reply edges must form a cycle-free chain of references.
    #[error("reply edges form a cycle: {}", format_cycle(cycle))]
    CyclicReplies { cycle: Vec<String> },
    /// The text is not JSON at all.
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn format_cycle(cycle: &[String]) -> String {
    let mut text = cycle.join(" -> ");
    if let Some(first) = cycle.first() {
        text.push_str(" -> ");
        text.push_str(first);
    }
    text
}

impl From<serde_json::Error> for TaifError {
    fn from(err: serde_json::Error) -> Self {
        TaifError::Json(err.to_string())
    }
}

fn schema_err(path: impl Into<String>, message: impl Into<String>) -> TaifError {
    TaifError::Schema { path: path.into(), message: message.into() }
}

/// A recoverable oddity found while loading; the loader repairs it and
/// reports what it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaifWarning {
    pub path: String,
    pub message: String,
}

impl fmt::Display for TaifWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// How a scalar trust/commitment weight `w` becomes a belief predicate at
/// projection time. Declared per file (`"belief-mapping"` key, default
/// `tent`) and overridable by [`ProjectionConfig`]. Explicit table weights
/// pass through unchanged regardless of the mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BeliefMapping {
    /// `t ↦ 1 − |t − w|`: full endorsement exactly at the voiced strength.
    #[default]
    Tent,
    /// Crisp acceptance of degrees at or above `w`.
    AtLeast,
    /// Crisp acceptance of degrees at or below `w`.
    AtMost,
}

impl BeliefMapping {
    pub fn as_str(self) -> &'static str {
        match self {
            BeliefMapping::Tent => "tent",
            BeliefMapping::AtLeast => "at-least",
            BeliefMapping::AtMost => "at-most",
        }
    }
}

impl fmt::Display for BeliefMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BeliefMapping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tent" => Ok(BeliefMapping::Tent),
            "at-least" => Ok(BeliefMapping::AtLeast),
            "at-most" => Ok(BeliefMapping::AtMost),
            other => Err(format!(
                "unknown belief mapping `{other}`; expected `tent`, `at-least`, or `at-most`"
            )),
        }
    }
}

/// An entity or illocution node: an id plus optional display text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaifNode {
    pub id: String,
    pub label: Option<String>,
}

impl TaifNode {
    pub fn new(id: impl Into<String>) -> Self {
        TaifNode { id: id.into(), label: None }
    }

    pub fn labelled(id: impl Into<String>, label: impl Into<String>) -> Self {
        TaifNode { id: id.into(), label: Some(label.into()) }
    }
}

/// A locution node: one utterance in the recorded dialogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Locution {
    pub id: String,
    pub text: Option<String>,
}

/// A scheme definition carried by the file. Applications resolve against
/// these first and fall back to the built-in schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDef {
    pub id: String,
    pub kind: SchemeKind,
    pub arity: u32,
    pub exception_arity: u32,
    pub interpretation: String,
}

/// One support or attack node: a scheme instantiated with ordered premises,
/// exceptions, and a conclusion (entity or illocution ids only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicationDef {
    pub id: String,
    pub kind: SchemeKind,
    pub scheme: String,
    pub premises: Vec<String>,
    pub exceptions: Vec<String>,
    pub conclusion: String,
}

/// A trust or commitment strength: a single rational in `[0, 1]`, or an
/// explicit table of one value per grid degree (ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    Scalar(Rational),
    Table(Vec<Rational>),
}

/// A weighted edge: trust (entity → entity) or commitment (entity → illocution).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedEdge {
    pub from: String,
    pub to: String,
    pub weight: Weight,
}

/// An unlabelled dialogue edge: reply (locution → locution) or illocutionary
/// force (locution → illocution).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueEdge {
    pub from: String,
    pub to: String,
}

/// A dialogue-game transition between locutions, tagged with the move name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub to: String,
    /// Serialized under the key `move`.
    pub label: String,
}

/// A full trichotomic argument graph as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaifGraph {
    /// File-level scalar weight mapping; [`BeliefMapping::Tent`] when absent.
    pub belief_mapping: BeliefMapping,
    pub entities: Vec<TaifNode>,
    pub locutions: Vec<Locution>,
    pub illocutions: Vec<TaifNode>,
    pub schemes: Vec<SchemeDef>,
    pub applications: Vec<ApplicationDef>,
    pub trust: Vec<WeightedEdge>,
    pub commitments: Vec<WeightedEdge>,
    pub replies: Vec<DialogueEdge>,
    pub transitions: Vec<Transition>,
    pub force: Vec<DialogueEdge>,
}

/// Settings for reducing a graph to a framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionConfig {
    /// Truth-degree resolution of the resulting framework.
    pub grid: TruthGrid,
    /// Composition depth later evaluation should use; carried here so one
    /// value travels with the projection settings, not used by projection
    /// itself.
    pub composition_depth: usize,
    /// Override for the file's scalar weight mapping; `None` respects the
    /// file.
    pub belief_mapping: Option<BeliefMapping>,
}

impl ProjectionConfig {
    pub fn new(grid: TruthGrid) -> Self {
        ProjectionConfig { grid, composition_depth: 2, belief_mapping: None }
    }
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig::new(TruthGrid::new(4).expect("grid 4"))
    }
}

/// Why a graph could not be reduced to a framework.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectError {
    #[error(transparent)]
    Graph(#[from] TaifError),
    #[error(
        "{role} edge {from} -> {to}: table has {got} entries but the 1/{resolution} grid has {expected} degrees"
    )]
    TableLength { role: &'static str, from: String, to: String, expected: u64, got: usize, resolution: u32 },
    #[error("{role} edge {from} -> {to}: weight {weight} lies outside the unit interval")]
    WeightRange { role: &'static str, from: String, to: String, weight: String },
}

/// What kind of node an id refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeKind {
    Entity,
    Locution,
    Illocution,
}

impl NodeKind {
    fn describe(self) -> &'static str {
        match self {
            NodeKind::Entity => "an entity",
            NodeKind::Locution => "a locution",
            NodeKind::Illocution => "an illocution",
        }
    }
}

/// Everything semantic validation established about a graph.
struct Analysis {
    warnings: Vec<TaifWarning>,
    /// Earlier occurrences of re-asserted commitment edges, by index.
    drop_commitments: BTreeSet<usize>,
    /// Earlier occurrences of re-asserted trust edges, by index.
    drop_trust: BTreeSet<usize>,
}

impl TaifGraph {
    /// Parses and validates a graph document. Returns the graph in normalized
    /// form (re-asserted weighted edges collapsed to their latest occurrence)
    /// together with the warnings describing any repairs.
    pub fn from_json(text: &str) -> Result<(Self, Vec<TaifWarning>), TaifError> {
        let value: Value = serde_json::from_str(text)?;
        let mut graph = parse_graph(&value)?;
        let analysis = graph.analyze()?;
        retain_kept(&mut graph.commitments, &analysis.drop_commitments);
        retain_kept(&mut graph.trust, &analysis.drop_trust);
        Ok((graph, analysis.warnings))
    }

    /// Checks an in-memory graph against every format invariant: referential
    /// integrity, node-kind discipline on every edge, scheme resolution and
    /// arity agreement, weight bounds, and reply acyclicity. Returns the
    /// warnings a load would emit.
    pub fn validate(&self) -> Result<Vec<TaifWarning>, TaifError> {
        self.analyze().map(|analysis| analysis.warnings)
    }

    /// Serializes to the canonical text form: fixed key order, every section
    /// present, one element per line, weights as reduced `n/d` strings.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"taif-version\": 1");
        if self.belief_mapping != BeliefMapping::Tent {
            out.push_str(",\n  \"belief-mapping\": ");
            push_json_str(&mut out, self.belief_mapping.as_str());
        }
        write_section(&mut out, "entities", &self.entities, node_json);
        write_section(&mut out, "locutions", &self.locutions, locution_json);
        write_section(&mut out, "illocutions", &self.illocutions, node_json);
        write_section(&mut out, "schemes", &self.schemes, scheme_json);
        write_section(&mut out, "applications", &self.applications, application_json);
        write_section(&mut out, "trust", &self.trust, weighted_edge_json);
        write_section(&mut out, "commitments", &self.commitments, weighted_edge_json);
        write_section(&mut out, "replies", &self.replies, dialogue_edge_json);
        write_section(&mut out, "transitions", &self.transitions, transition_json);
        write_section(&mut out, "force", &self.force, dialogue_edge_json);
        out.push_str("\n}\n");
        out
    }

    /// Reduces the graph to a framework: entities and illocutions become the
    /// propositions, applications keep their schemes (file definitions first,
    /// built-ins as fallback), and trust/commitment weights turn into belief
    /// predicates. Locutions and all dialogue edges are dropped.
    pub fn project(&self, config: &ProjectionConfig) -> Result<Taf, ProjectError> {
        self.analyze()?;
        let grid = config.grid;
        let mapping = config.belief_mapping.unwrap_or(self.belief_mapping);

        let mut propositions = Vec::with_capacity(self.entities.len() + self.illocutions.len());
        for node in &self.entities {
            let mut prop = Proposition::entity(node.id.as_str());
            if let Some(label) = &node.label {
                prop = prop.with_label(label.clone());
            }
            propositions.push(prop);
        }
        for node in &self.illocutions {
            let mut prop = Proposition::illocution(node.id.as_str());
            if let Some(label) = &node.label {
                prop = prop.with_label(label.clone());
            }
            propositions.push(prop);
        }

        let mut schemes = Vec::new();
        let mut present: BTreeSet<&str> = BTreeSet::new();
        for def in &self.schemes {
            // Construction cannot fail: analyze() built the same scheme.
            let scheme = Scheme::new(
                def.id.as_str(),
                def.kind,
                def.arity,
                def.exception_arity,
                &def.interpretation,
            )
            .expect("validated scheme definition");
            present.insert(def.id.as_str());
            schemes.push(scheme);
        }
        for app in &self.applications {
            if !present.contains(app.scheme.as_str()) {
                let builtin = builtin_scheme(&app.scheme).expect("validated scheme reference");
                present.insert(app.scheme.as_str());
                schemes.push(builtin);
            }
        }

        let applications = self
            .applications
            .iter()
            .map(|app| SchemeApplication {
                scheme: app.scheme.as_str().into(),
                premises: app.premises.iter().map(|id| id.as_str().into()).collect(),
                exceptions: app.exceptions.iter().map(|id| id.as_str().into()).collect(),
                conclusion: app.conclusion.as_str().into(),
            })
            .collect();

        let mut beliefs = BTreeMap::new();
        // Later edges overwrite earlier ones, which is exactly the
        // keep-the-latest rule normalization applies on load.
        for edge in &self.trust {
            let predicate = belief_of(&edge.weight, mapping, grid, "trust", edge)?;
            beliefs.insert((edge.from.as_str().into(), edge.to.as_str().into()), predicate);
        }
        for edge in &self.commitments {
            let predicate = belief_of(&edge.weight, mapping, grid, "commitment", edge)?;
            beliefs.insert((edge.from.as_str().into(), edge.to.as_str().into()), predicate);
        }

        Ok(Taf::new(grid, propositions, schemes, applications, beliefs))
    }

    /// Runs every semantic check, in document order, so error paths are
    /// stable.
    fn analyze(&self) -> Result<Analysis, TaifError> {
        let mut nodes: BTreeMap<&str, NodeKind> = BTreeMap::new();
        let sections: [(&str, NodeKind); 3] = [
            ("entities", NodeKind::Entity),
            ("locutions", NodeKind::Locution),
            ("illocutions", NodeKind::Illocution),
        ];
        for (section, kind) in sections {
            let ids: Vec<&str> = match kind {
                NodeKind::Entity => self.entities.iter().map(|n| n.id.as_str()).collect(),
                NodeKind::Locution => self.locutions.iter().map(|n| n.id.as_str()).collect(),
                NodeKind::Illocution => self.illocutions.iter().map(|n| n.id.as_str()).collect(),
            };
            for (i, id) in ids.into_iter().enumerate() {
                let path = format!("/{section}/{i}/id");
                if id.is_empty() {
                    return Err(schema_err(path, "ids must be non-empty"));
                }
                if let Some(existing) = nodes.insert(id, kind) {
                    return Err(schema_err(
                        path,
                        format!("duplicate node id `{id}` (already used by {})", existing.describe()),
                    ));
                }
            }
        }

        let mut file_schemes: BTreeMap<&str, Scheme> = BTreeMap::new();
        for (i, def) in self.schemes.iter().enumerate() {
            if def.id.is_empty() {
                return Err(schema_err(format!("/schemes/{i}/id"), "ids must be non-empty"));
            }
            let scheme =
                Scheme::new(def.id.as_str(), def.kind, def.arity, def.exception_arity, &def.interpretation)
                    .map_err(|err| schema_err(format!("/schemes/{i}"), err.to_string()))?;
            if file_schemes.insert(def.id.as_str(), scheme).is_some() {
                return Err(schema_err(
                    format!("/schemes/{i}/id"),
                    format!("duplicate scheme id `{}`", def.id),
                ));
            }
        }

        let check_prop = |id: &str, path: String| -> Result<(), TaifError> {
            match nodes.get(id) {
                Some(NodeKind::Entity | NodeKind::Illocution) => Ok(()),
                Some(NodeKind::Locution) => Err(schema_err(
                    path,
                    format!("`{id}` is a locution; applications may only reference entities and illocutions"),
                )),
                None => Err(schema_err(path, format!("unknown id `{id}`"))),
            }
        };
        let mut app_ids: BTreeSet<&str> = BTreeSet::new();
        for (i, app) in self.applications.iter().enumerate() {
            if app.id.is_empty() {
                return Err(schema_err(format!("/applications/{i}/id"), "ids must be non-empty"));
            }
            if !app_ids.insert(app.id.as_str()) {
                return Err(schema_err(
                    format!("/applications/{i}/id"),
                    format!("duplicate application id `{}`", app.id),
                ));
            }
            let resolved_builtin;
            let scheme: &Scheme = match file_schemes.get(app.scheme.as_str()) {
                Some(scheme) => scheme,
                None => match builtin_scheme(&app.scheme) {
                    Some(builtin) => {
                        resolved_builtin = builtin;
                        &resolved_builtin
                    }
                    None => {
                        return Err(schema_err(
                            format!("/applications/{i}/scheme"),
                            format!("unknown scheme `{}` (not defined in the file, not a built-in)", app.scheme),
                        ))
                    }
                },
            };
            if scheme.kind() != app.kind {
                return Err(schema_err(
                    format!("/applications/{i}/kind"),
                    format!(
                        "application is declared as {} but scheme `{}` is {}",
                        app.kind,
                        app.scheme,
                        scheme.kind()
                    ),
                ));
            }
            if app.premises.len() as u32 != scheme.arity() {
                return Err(schema_err(
                    format!("/applications/{i}/premises"),
                    format!(
                        "scheme `{}` takes {} premises, found {}",
                        app.scheme,
                        scheme.arity(),
                        app.premises.len()
                    ),
                ));
            }
            if app.exceptions.len() as u32 != scheme.exception_arity() {
                return Err(schema_err(
                    format!("/applications/{i}/exceptions"),
                    format!(
                        "scheme `{}` takes {} exceptions, found {}",
                        app.scheme,
                        scheme.exception_arity(),
                        app.exceptions.len()
                    ),
                ));
            }
            for (j, id) in app.premises.iter().enumerate() {
                check_prop(id, format!("/applications/{i}/premises/{j}"))?;
            }
            for (j, id) in app.exceptions.iter().enumerate() {
                check_prop(id, format!("/applications/{i}/exceptions/{j}"))?;
            }
            check_prop(&app.conclusion, format!("/applications/{i}/conclusion"))?;
        }

        let expect_kind = |id: &str, want: NodeKind, path: String, role: &str| -> Result<(), TaifError> {
            match nodes.get(id) {
                Some(kind) if *kind == want => Ok(()),
                Some(kind) => Err(schema_err(
                    path,
                    format!("`{id}` is {}; {role}", kind.describe()),
                )),
                None => Err(schema_err(path, format!("unknown id `{id}`"))),
            }
        };

        let mut warnings = Vec::new();
        let mut drop_trust = BTreeSet::new();
        check_weighted(
            &self.trust,
            "trust",
            &mut warnings,
            &mut drop_trust,
            |edge, i| {
                expect_kind(
                    &edge.from,
                    NodeKind::Entity,
                    format!("/trust/{i}/from"),
                    "trust edges run between entities",
                )?;
                expect_kind(
                    &edge.to,
                    NodeKind::Entity,
                    format!("/trust/{i}/to"),
                    "trust edges run between entities",
                )
            },
        )?;
        let mut drop_commitments = BTreeSet::new();
        check_weighted(
            &self.commitments,
            "commitments",
            &mut warnings,
            &mut drop_commitments,
            |edge, i| {
                expect_kind(
                    &edge.from,
                    NodeKind::Entity,
                    format!("/commitments/{i}/from"),
                    "commitments are made by entities",
                )?;
                expect_kind(
                    &edge.to,
                    NodeKind::Illocution,
                    format!("/commitments/{i}/to"),
                    "commitments target illocutions; use a trust edge for entity-to-entity weights",
                )
            },
        )?;

        for (i, edge) in self.replies.iter().enumerate() {
            expect_kind(&edge.from, NodeKind::Locution, format!("/replies/{i}/from"), "reply edges connect locutions")?;
            expect_kind(&edge.to, NodeKind::Locution, format!("/replies/{i}/to"), "reply edges connect locutions")?;
        }
        for (i, edge) in self.transitions.iter().enumerate() {
            expect_kind(
                &edge.from,
                NodeKind::Locution,
                format!("/transitions/{i}/from"),
                "transitions connect locutions",
            )?;
            expect_kind(
                &edge.to,
                NodeKind::Locution,
                format!("/transitions/{i}/to"),
                "transitions connect locutions",
            )?;
        }
        for (i, edge) in self.force.iter().enumerate() {
            expect_kind(
                &edge.from,
                NodeKind::Locution,
                format!("/force/{i}/from"),
                "force edges run from a locution to the illocution it conveys",
            )?;
            expect_kind(
                &edge.to,
                NodeKind::Illocution,
                format!("/force/{i}/to"),
                "force edges run from a locution to the illocution it conveys",
            )?;
        }

        if let Some(cycle) = self.reply_cycle() {
            return Err(TaifError::CyclicReplies { cycle });
        }

        Ok(Analysis { warnings, drop_commitments, drop_trust })
    }

    /// Finds one cycle in the reply relation, as node ids in order, if any.
    fn reply_cycle(&self) -> Option<Vec<String>> {
        let index: BTreeMap<&str, usize> =
            self.locutions.iter().enumerate().map(|(i, l)| (l.id.as_str(), i)).collect();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.locutions.len()];
        for edge in &self.replies {
            // Endpoints were validated before this runs.
            adjacency[index[edge.from.as_str()]].push(index[edge.to.as_str()]);
        }

        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.locutions.len()];
        for start in 0..self.locutions.len() {
            if color[start] != WHITE {
                continue;
            }
            // Iterative DFS: (node, next child to visit), plus the gray path.
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = GRAY;
            while let Some(&(node, child)) = stack.last() {
                if child < adjacency[node].len() {
                    stack.last_mut().expect("nonempty stack").1 += 1;
                    let next = adjacency[node][child];
                    match color[next] {
                        WHITE => {
                            color[next] = GRAY;
                            stack.push((next, 0));
                        }
                        GRAY => {
                            let from = stack
                                .iter()
                                .position(|&(n, _)| n == next)
                                .expect("gray node is on the stack");
                            return Some(
                                stack[from..]
                                    .iter()
                                    .map(|&(n, _)| self.locutions[n].id.clone())
                                    .collect(),
                            );
                        }
                        _ => {}
                    }
                } else {
                    color[node] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Weight-bound checks plus re-assertion detection shared by trust and
/// commitment edges.
fn check_weighted(
    edges: &[WeightedEdge],
    section: &str,
    warnings: &mut Vec<TaifWarning>,
    drop: &mut BTreeSet<usize>,
    check_endpoints: impl Fn(&WeightedEdge, usize) -> Result<(), TaifError>,
) -> Result<(), TaifError> {
    let unit = |r: &Rational, path: String| -> Result<(), TaifError> {
        if in_unit_interval(r) {
            Ok(())
        } else {
            Err(schema_err(path, format!("weight {} lies outside the unit interval", weight_text(r))))
        }
    };
    let mut last_by_key: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (i, edge) in edges.iter().enumerate() {
        check_endpoints(edge, i)?;
        match &edge.weight {
            Weight::Scalar(r) => unit(r, format!("/{section}/{i}/weight"))?,
            Weight::Table(entries) => {
                if entries.is_empty() {
                    return Err(schema_err(
                        format!("/{section}/{i}/weight"),
                        "table weights need at least one entry",
                    ));
                }
                for (j, r) in entries.iter().enumerate() {
                    unit(r, format!("/{section}/{i}/weight/{j}"))?;
                }
            }
        }
        if let Some(earlier) = last_by_key.insert((edge.from.as_str(), edge.to.as_str()), i) {
            drop.insert(earlier);
            warnings.push(TaifWarning {
                path: format!("/{section}/{earlier}"),
                message: format!(
                    "`{}` re-asserts its weight on `{}`; keeping the later entry at /{section}/{i}",
                    edge.from, edge.to
                ),
            });
        }
    }
    Ok(())
}

fn retain_kept<T>(edges: &mut Vec<T>, drop: &BTreeSet<usize>) {
    if drop.is_empty() {
        return;
    }
    let mut index = 0;
    edges.retain(|_| {
        let keep = !drop.contains(&index);
        index += 1;
        keep
    });
}

fn belief_of(
    weight: &Weight,
    mapping: BeliefMapping,
    grid: TruthGrid,
    role: &'static str,
    edge: &WeightedEdge,
) -> Result<BeliefPredicate, ProjectError> {
    let out_of_range = |r: &Rational| ProjectError::WeightRange {
        role,
        from: edge.from.clone(),
        to: edge.to.clone(),
        weight: weight_text(r),
    };
    match weight {
        Weight::Scalar(r) => {
            let value = grid.round(r).map_err(|_| out_of_range(r))?;
            Ok(match mapping {
                BeliefMapping::Tent => BeliefPredicate::Tent(value),
                BeliefMapping::AtLeast => BeliefPredicate::AtLeast(value),
                BeliefMapping::AtMost => BeliefPredicate::AtMost(value),
            })
        }
        Weight::Table(entries) => {
            if entries.len() as u64 != grid.len() {
                return Err(ProjectError::TableLength {
                    role,
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                    expected: grid.len(),
                    got: entries.len(),
                    resolution: grid.resolution(),
                });
            }
            let values = entries
                .iter()
                .map(|r| grid.round(r).map_err(|_| out_of_range(r)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BeliefPredicate::Table(values))
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn parse_graph(value: &Value) -> Result<TaifGraph, TaifError> {
    let root = value.as_object().ok_or_else(|| schema_err("", "expected a JSON object"))?;
    const KNOWN: [&str; 12] = [
        "taif-version",
        "belief-mapping",
        "entities",
        "locutions",
        "illocutions",
        "schemes",
        "applications",
        "trust",
        "commitments",
        "replies",
        "transitions",
        "force",
    ];
    reject_unknown(root, &KNOWN, "")?;

    let version = root
        .get("taif-version")
        .ok_or_else(|| schema_err("", "missing required key `taif-version`"))?;
    if version.as_u64() != Some(1) {
        return Err(schema_err("/taif-version", "unsupported version; this reader understands version 1"));
    }

    let belief_mapping = match root.get("belief-mapping") {
        None => BeliefMapping::default(),
        Some(value) => as_str(value, "/belief-mapping")?
            .parse()
            .map_err(|message: String| schema_err("/belief-mapping", message))?,
    };

    Ok(TaifGraph {
        belief_mapping,
        entities: parse_section(root, "entities", parse_node)?,
        locutions: parse_section(root, "locutions", parse_locution)?,
        illocutions: parse_section(root, "illocutions", parse_node)?,
        schemes: parse_section(root, "schemes", parse_scheme)?,
        applications: parse_section(root, "applications", parse_application)?,
        trust: parse_section(root, "trust", parse_weighted_edge)?,
        commitments: parse_section(root, "commitments", parse_weighted_edge)?,
        replies: parse_section(root, "replies", parse_dialogue_edge)?,
        transitions: parse_section(root, "transitions", parse_transition)?,
        force: parse_section(root, "force", parse_dialogue_edge)?,
    })
}

fn parse_section<T>(
    root: &Map<String, Value>,
    key: &str,
    parse_item: impl Fn(&Value, &str) -> Result<T, TaifError>,
) -> Result<Vec<T>, TaifError> {
    let Some(value) = root.get(key) else {
        return Ok(Vec::new());
    };
    let path = format!("/{key}");
    let items = as_array(value, &path)?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| parse_item(item, &format!("{path}/{i}")))
        .collect()
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), TaifError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema_err(format!("{path}/{key}"), "unknown key"));
        }
    }
    Ok(())
}

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, TaifError> {
    value.as_object().ok_or_else(|| schema_err(path, "expected an object"))
}

fn as_array<'a>(value: &'a Value, path: &str) -> Result<&'a [Value], TaifError> {
    value
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| schema_err(path, "expected an array"))
}

fn as_str<'a>(value: &'a Value, path: &str) -> Result<&'a str, TaifError> {
    value.as_str().ok_or_else(|| schema_err(path, "expected a string"))
}

fn req<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, TaifError> {
    obj.get(key).ok_or_else(|| schema_err(path, format!("missing required key `{key}`")))
}

fn req_str(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String, TaifError> {
    as_str(req(obj, key, path)?, &format!("{path}/{key}")).map(str::to_owned)
}

fn opt_str(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<String>, TaifError> {
    match obj.get(key) {
        None => Ok(None),
        Some(value) => as_str(value, &format!("{path}/{key}")).map(|s| Some(s.to_owned())),
    }
}

fn req_kind(obj: &Map<String, Value>, path: &str) -> Result<SchemeKind, TaifError> {
    let text = req_str(obj, "kind", path)?;
    text.parse().map_err(|message: String| schema_err(format!("{path}/kind"), message))
}

fn req_u32(obj: &Map<String, Value>, key: &str, path: &str) -> Result<u32, TaifError> {
    let value = req(obj, key, path)?;
    let path = format!("{path}/{key}");
    value
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| schema_err(path, "expected a small non-negative integer"))
}

fn parse_node(value: &Value, path: &str) -> Result<TaifNode, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["id", "label"], path)?;
    Ok(TaifNode { id: req_str(obj, "id", path)?, label: opt_str(obj, "label", path)? })
}

fn parse_locution(value: &Value, path: &str) -> Result<Locution, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["id", "text"], path)?;
    Ok(Locution { id: req_str(obj, "id", path)?, text: opt_str(obj, "text", path)? })
}

fn parse_scheme(value: &Value, path: &str) -> Result<SchemeDef, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["id", "kind", "arity", "exception_arity", "interpretation"], path)?;
    Ok(SchemeDef {
        id: req_str(obj, "id", path)?,
        kind: req_kind(obj, path)?,
        arity: req_u32(obj, "arity", path)?,
        exception_arity: req_u32(obj, "exception_arity", path)?,
        interpretation: req_str(obj, "interpretation", path)?,
    })
}

fn parse_string_list(value: &Value, path: &str) -> Result<Vec<String>, TaifError> {
    as_array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, item)| as_str(item, &format!("{path}/{i}")).map(str::to_owned))
        .collect()
}

fn parse_application(value: &Value, path: &str) -> Result<ApplicationDef, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["id", "kind", "scheme", "premises", "exceptions", "conclusion"], path)?;
    let premises = parse_string_list(req(obj, "premises", path)?, &format!("{path}/premises"))?;
    let exceptions = match obj.get("exceptions") {
        None => Vec::new(),
        Some(value) => parse_string_list(value, &format!("{path}/exceptions"))?,
    };
    Ok(ApplicationDef {
        id: req_str(obj, "id", path)?,
        kind: req_kind(obj, path)?,
        scheme: req_str(obj, "scheme", path)?,
        premises,
        exceptions,
        conclusion: req_str(obj, "conclusion", path)?,
    })
}

fn parse_weight_scalar(value: &Value, path: &str) -> Result<Rational, TaifError> {
    let text = match value {
        // With exact number handling enabled, this is the literal digit text.
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema_err(path, "expected a number, a numeric string, or an array of those")),
    };
    parse_rational(&text).map_err(|err| schema_err(path, err.to_string()))
}

fn parse_weight(value: &Value, path: &str) -> Result<Weight, TaifError> {
    if let Value::Array(entries) = value {
        entries
            .iter()
            .enumerate()
            .map(|(i, entry)| parse_weight_scalar(entry, &format!("{path}/{i}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Weight::Table)
    } else {
        parse_weight_scalar(value, path).map(Weight::Scalar)
    }
}

fn parse_weighted_edge(value: &Value, path: &str) -> Result<WeightedEdge, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["from", "to", "weight"], path)?;
    Ok(WeightedEdge {
        from: req_str(obj, "from", path)?,
        to: req_str(obj, "to", path)?,
        weight: parse_weight(req(obj, "weight", path)?, &format!("{path}/weight"))?,
    })
}

fn parse_dialogue_edge(value: &Value, path: &str) -> Result<DialogueEdge, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["from", "to"], path)?;
    Ok(DialogueEdge { from: req_str(obj, "from", path)?, to: req_str(obj, "to", path)? })
}

fn parse_transition(value: &Value, path: &str) -> Result<Transition, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["from", "to", "move"], path)?;
    Ok(Transition {
        from: req_str(obj, "from", path)?,
        to: req_str(obj, "to", path)?,
        label: req_str(obj, "move", path)?,
    })
}

// ---------------------------------------------------------------------------
// Canonical writing
// ---------------------------------------------------------------------------

/// Reduced `n/d` text for a weight; the canonical serialized form.
fn weight_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn push_json_str(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_section<T>(out: &mut String, key: &str, items: &[T], item_json: impl Fn(&T) -> String) {
    out.push_str(",\n  ");
    push_json_str(out, key);
    out.push_str(": [");
    for (i, item) in items.iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        out.push_str(&item_json(item));
    }
    if !items.is_empty() {
        out.push_str("\n  ");
    }
    out.push(']');
}

fn field(out: &mut String, first: &mut bool, key: &str, write_value: impl FnOnce(&mut String)) {
    if !*first {
        out.push_str(", ");
    }
    *first = false;
    push_json_str(out, key);
    out.push_str(": ");
    write_value(out);
}

fn str_field(out: &mut String, first: &mut bool, key: &str, value: &str) {
    field(out, first, key, |out| push_json_str(out, value));
}

fn node_json(node: &TaifNode) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "id", &node.id);
    if let Some(label) = &node.label {
        str_field(&mut out, &mut first, "label", label);
    }
    out.push('}');
    out
}

fn locution_json(locution: &Locution) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "id", &locution.id);
    if let Some(text) = &locution.text {
        str_field(&mut out, &mut first, "text", text);
    }
    out.push('}');
    out
}

fn scheme_json(def: &SchemeDef) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "id", &def.id);
    str_field(&mut out, &mut first, "kind", def.kind.as_str());
    field(&mut out, &mut first, "arity", |out| out.push_str(&def.arity.to_string()));
    field(&mut out, &mut first, "exception_arity", |out| {
        out.push_str(&def.exception_arity.to_string());
    });
    str_field(&mut out, &mut first, "interpretation", &def.interpretation);
    out.push('}');
    out
}

fn string_list_json(out: &mut String, items: &[String]) {
    out.push('[');
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        push_json_str(out, item);
    }
    out.push(']');
}

fn application_json(app: &ApplicationDef) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "id", &app.id);
    str_field(&mut out, &mut first, "kind", app.kind.as_str());
    str_field(&mut out, &mut first, "scheme", &app.scheme);
    field(&mut out, &mut first, "premises", |out| string_list_json(out, &app.premises));
    field(&mut out, &mut first, "exceptions", |out| string_list_json(out, &app.exceptions));
    str_field(&mut out, &mut first, "conclusion", &app.conclusion);
    out.push('}');
    out
}

fn weight_json(out: &mut String, weight: &Weight) {
    match weight {
        Weight::Scalar(r) => push_json_str(out, &weight_text(r)),
        Weight::Table(entries) => {
            out.push('[');
            for (i, r) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                push_json_str(out, &weight_text(r));
            }
            out.push(']');
        }
    }
}

fn weighted_edge_json(edge: &WeightedEdge) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "from", &edge.from);
    str_field(&mut out, &mut first, "to", &edge.to);
    field(&mut out, &mut first, "weight", |out| weight_json(out, &edge.weight));
    out.push('}');
    out
}

fn dialogue_edge_json(edge: &DialogueEdge) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "from", &edge.from);
    str_field(&mut out, &mut first, "to", &edge.to);
    out.push('}');
    out
}

fn transition_json(edge: &Transition) -> String {
    let mut out = String::from("{");
    let mut first = true;
    str_field(&mut out, &mut first, "from", &edge.from);
    str_field(&mut out, &mut first, "to", &edge.to);
    str_field(&mut out, &mut first, "move", &edge.label);
    out.push('}');
    out
}

#[cfg(test)]
mod tests;

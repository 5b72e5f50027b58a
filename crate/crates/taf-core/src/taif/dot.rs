//! Deterministic DOT rendering of graphs and frameworks.
//!
//! Attacks are red, supports green; trust and commitment edges are dashed
//! with their weight as the label; dialogue structure (locutions and their
//! edges) is gray. Single-premise applications without exceptions draw as a
//! direct arrow; anything else gets a small join point so multiple premises
//! and exceptions visibly feed one application. All sections are emitted in
//! sorted order, so equal inputs render byte-identical text.

use super::{TaifGraph, Weight, WeightedEdge};
use crate::model::{BeliefPredicate, PropositionKind, SchemeKind, Taf};
use crate::rational::Rational;
use crate::truth::TruthValue;

/// Quotes and escapes arbitrary text as a DOT string literal.
fn quoted(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Short label for an exact weight: plain decimal when the denominator is a
/// product of twos and fives (`4/5` → `0.8`), `n/d` otherwise.
fn weight_label(r: &Rational) -> String {
    let num = *r.numer();
    let den = *r.denom();
    let fraction = format!("{num}/{den}");
    if num < 0 {
        return fraction;
    }
    if num == 0 {
        return "0".to_owned();
    }
    let mut rest = den;
    let mut twos = 0u32;
    let mut fives = 0u32;
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return fraction;
    }
    let exp = twos.max(fives);
    let scale = match 2i64
        .checked_pow(exp - twos)
        .and_then(|a| 5i64.checked_pow(exp - fives).map(|b| (a, b)))
        .and_then(|(a, b)| a.checked_mul(b))
    {
        Some(scale) => scale,
        None => return fraction,
    };
    let Some(scaled) = num.checked_mul(scale) else {
        return fraction;
    };
    if exp == 0 {
        return scaled.to_string();
    }
    let mut digits = scaled.to_string();
    let point = exp as usize;
    if digits.len() <= point {
        digits = format!("{}{}", "0".repeat(point + 1 - digits.len()), digits);
    }
    digits.insert(digits.len() - point, '.');
    digits
}

fn degree_label(value: TruthValue) -> String {
    weight_label(&value.to_rational())
}

fn kind_color(kind: SchemeKind) -> &'static str {
    match kind {
        SchemeKind::Attack => "red",
        SchemeKind::Support => "green4",
    }
}

/// One application's edges, shared by both renderers. `join` is the node
/// name to introduce when the application needs a join point.
fn application_lines(
    out: &mut String,
    kind: SchemeKind,
    premises: &[&str],
    exceptions: &[&str],
    conclusion: &str,
    join: &str,
) {
    let color = kind_color(kind);
    if premises.len() == 1 && exceptions.is_empty() {
        out.push_str(&format!(
            "  {} -> {} [color={color}];\n",
            quoted(premises[0]),
            quoted(conclusion)
        ));
        return;
    }
    out.push_str(&format!("  {} [shape=point, color={color}, width=0.08];\n", quoted(join)));
    for premise in premises {
        out.push_str(&format!(
            "  {} -> {} [color={color}, dir=none];\n",
            quoted(premise),
            quoted(join)
        ));
    }
    for exception in exceptions {
        out.push_str(&format!(
            "  {} -> {} [color={color}, style=dotted, arrowhead=odot];\n",
            quoted(exception),
            quoted(join)
        ));
    }
    out.push_str(&format!("  {} -> {} [color={color}];\n", quoted(join), quoted(conclusion)));
}

fn weighted_edge_lines(out: &mut String, edges: &[&WeightedEdge]) {
    for edge in edges {
        let label = match &edge.weight {
            Weight::Scalar(r) => weight_label(r),
            Weight::Table(_) => "table".to_owned(),
        };
        out.push_str(&format!(
            "  {} -> {} [style=dashed, label={}];\n",
            quoted(&edge.from),
            quoted(&edge.to),
            quoted(&label)
        ));
    }
}

/// Renders the full graph, dialogue included.
pub fn graph_to_dot(graph: &TaifGraph) -> String {
    let mut out = String::from("digraph taif {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");

    let mut entities: Vec<_> = graph.entities.iter().collect();
    entities.sort_by(|a, b| a.id.cmp(&b.id));
    for node in entities {
        out.push_str(&format!(
            "  {} [shape=circle, label={}];\n",
            quoted(&node.id),
            quoted(node.label.as_deref().unwrap_or(&node.id))
        ));
    }
    let mut illocutions: Vec<_> = graph.illocutions.iter().collect();
    illocutions.sort_by(|a, b| a.id.cmp(&b.id));
    for node in illocutions {
        out.push_str(&format!(
            "  {} [shape=box, style=rounded, label={}];\n",
            quoted(&node.id),
            quoted(node.label.as_deref().unwrap_or(&node.id))
        ));
    }
    let mut locutions: Vec<_> = graph.locutions.iter().collect();
    locutions.sort_by(|a, b| a.id.cmp(&b.id));
    for node in locutions {
        out.push_str(&format!(
            "  {} [shape=note, color=gray60, fontcolor=gray30, label={}];\n",
            quoted(&node.id),
            quoted(node.text.as_deref().unwrap_or(&node.id))
        ));
    }

    let mut applications: Vec<_> = graph.applications.iter().collect();
    applications.sort_by(|a, b| a.id.cmp(&b.id));
    for app in applications {
        let premises: Vec<&str> = app.premises.iter().map(String::as_str).collect();
        let exceptions: Vec<&str> = app.exceptions.iter().map(String::as_str).collect();
        application_lines(
            &mut out,
            app.kind,
            &premises,
            &exceptions,
            &app.conclusion,
            &format!("app:{}", app.id),
        );
    }

    let mut trust: Vec<_> = graph.trust.iter().collect();
    trust.sort_by_key(|e| (&e.from, &e.to));
    weighted_edge_lines(&mut out, &trust);
    let mut commitments: Vec<_> = graph.commitments.iter().collect();
    commitments.sort_by_key(|e| (&e.from, &e.to));
    weighted_edge_lines(&mut out, &commitments);

    let mut force: Vec<_> = graph.force.iter().collect();
    force.sort_by_key(|e| (&e.from, &e.to));
    for edge in force {
        out.push_str(&format!(
            "  {} -> {} [style=dotted, color=gray60];\n",
            quoted(&edge.from),
            quoted(&edge.to)
        ));
    }
    let mut replies: Vec<_> = graph.replies.iter().collect();
    replies.sort_by_key(|e| (&e.from, &e.to));
    for edge in replies {
        out.push_str(&format!(
            "  {} -> {} [color=gray60, label=\"reply\"];\n",
            quoted(&edge.from),
            quoted(&edge.to)
        ));
    }
    let mut transitions: Vec<_> = graph.transitions.iter().collect();
    transitions.sort_by_key(|e| (&e.from, &e.to, &e.label));
    for edge in transitions {
        out.push_str(&format!(
            "  {} -> {} [color=gray60, style=dashed, label={}];\n",
            quoted(&edge.from),
            quoted(&edge.to),
            quoted(&edge.label)
        ));
    }

    out.push_str("}\n");
    out
}

/// Renders a projected framework: propositions, applications, and belief
/// edges labelled by their predicate.
pub fn taf_to_dot(taf: &Taf) -> String {
    let mut out = String::from("digraph taf {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");

    for prop in taf.propositions() {
        let label = prop.label.as_deref().unwrap_or(prop.id.as_str());
        let shape = match prop.kind {
            PropositionKind::Entity => "shape=circle",
            PropositionKind::Illocution => "shape=box, style=rounded",
        };
        out.push_str(&format!("  {} [{shape}, label={}];\n", quoted(prop.id.as_str()), quoted(label)));
    }

    for (index, app) in taf.applications().iter().enumerate() {
        let kind = taf
            .scheme(&app.scheme)
            .map(|scheme| scheme.kind())
            // Unknown schemes only arise on frameworks that fail validation;
            // render them as attacks rather than refusing to draw.
            .unwrap_or(SchemeKind::Attack);
        let premises: Vec<&str> = app.premises.iter().map(|id| id.as_str()).collect();
        let exceptions: Vec<&str> = app.exceptions.iter().map(|id| id.as_str()).collect();
        application_lines(
            &mut out,
            kind,
            &premises,
            &exceptions,
            app.conclusion.as_str(),
            &format!("app:{index}"),
        );
    }

    for ((actor, target), predicate) in taf.beliefs() {
        let label = match predicate {
            BeliefPredicate::NoOpinion => "no-opinion".to_owned(),
            BeliefPredicate::Tent(peak) => degree_label(*peak),
            BeliefPredicate::AtLeast(threshold) => format!(">= {}", degree_label(*threshold)),
            BeliefPredicate::AtMost(threshold) => format!("<= {}", degree_label(*threshold)),
            BeliefPredicate::Table(_) => "table".to_owned(),
        };
        out.push_str(&format!(
            "  {} -> {} [style=dashed, label={}];\n",
            quoted(actor.as_str()),
            quoted(target.as_str()),
            quoted(&label)
        ));
    }

    out.push_str("}\n");
    out
}

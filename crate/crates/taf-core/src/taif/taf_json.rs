//! Canonical JSON form of a projected framework.
//!
//! This is the output of projection and the input the evaluation commands
//! accept when no graph file is involved: grid resolution, propositions,
//! scheme definitions, applications, and explicit belief predicates. Degrees
//! are written as unreduced `n/k` strings so the grid stays visible; readers
//! additionally accept any exact rational that lands on the grid.

use super::{as_array, as_object, reject_unknown, req, req_str, schema_err, string_list_json, TaifError};
use crate::model::{
    builtin_scheme, BeliefPredicate, Proposition, PropositionId, PropositionKind, Scheme,
    SchemeApplication, Taf,
};
use crate::rational::Rational;
use crate::truth::{TruthGrid, TruthValue};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};

/// Serializes a framework to its canonical text form: fixed key order, one
/// element per line, degrees as `n/k` strings, beliefs sorted by key.
pub fn taf_to_json(taf: &Taf) -> String {
    let mut out = String::from("{\n  \"taf-version\": 1,\n  \"grid\": ");
    out.push_str(&taf.grid().resolution().to_string());

    super::write_section(&mut out, "propositions", taf.propositions(), proposition_json);
    super::write_section(&mut out, "schemes", taf.schemes(), scheme_json);
    super::write_section(&mut out, "applications", taf.applications(), application_json);
    let beliefs: Vec<_> = taf.beliefs().iter().collect();
    super::write_section(&mut out, "beliefs", &beliefs, |entry| {
        belief_json(&entry.0.0, &entry.0.1, entry.1)
    });
    out.push_str("\n}\n");
    out
}

fn proposition_json(prop: &Proposition) -> String {
    let mut out = String::from("{");
    let mut first = true;
    super::str_field(&mut out, &mut first, "id", prop.id.as_str());
    let kind = match prop.kind {
        PropositionKind::Illocution => "illocution",
        PropositionKind::Entity => "entity",
    };
    super::str_field(&mut out, &mut first, "kind", kind);
    if let Some(label) = &prop.label {
        super::str_field(&mut out, &mut first, "label", label);
    }
    out.push('}');
    out
}

fn scheme_json(scheme: &Scheme) -> String {
    let mut out = String::from("{");
    let mut first = true;
    super::str_field(&mut out, &mut first, "id", scheme.id().as_str());
    super::str_field(&mut out, &mut first, "kind", scheme.kind().as_str());
    super::field(&mut out, &mut first, "arity", |out| out.push_str(&scheme.arity().to_string()));
    super::field(&mut out, &mut first, "exception_arity", |out| {
        out.push_str(&scheme.exception_arity().to_string());
    });
    super::str_field(&mut out, &mut first, "interpretation", &scheme.body().to_string());
    out.push('}');
    out
}

fn application_json(app: &SchemeApplication) -> String {
    let mut out = String::from("{");
    let mut first = true;
    super::str_field(&mut out, &mut first, "scheme", app.scheme.as_str());
    let ids = |list: &[PropositionId]| -> Vec<String> {
        list.iter().map(|id| id.as_str().to_owned()).collect()
    };
    super::field(&mut out, &mut first, "premises", |out| string_list_json(out, &ids(&app.premises)));
    super::field(&mut out, &mut first, "exceptions", |out| {
        string_list_json(out, &ids(&app.exceptions));
    });
    super::str_field(&mut out, &mut first, "conclusion", app.conclusion.as_str());
    out.push('}');
    out
}

fn belief_json(actor: &PropositionId, proposition: &PropositionId, predicate: &BeliefPredicate) -> String {
    let mut out = String::from("{");
    let mut first = true;
    super::str_field(&mut out, &mut first, "actor", actor.as_str());
    super::str_field(&mut out, &mut first, "proposition", proposition.as_str());
    super::field(&mut out, &mut first, "predicate", |out| predicate_json(out, predicate));
    out.push('}');
    out
}

fn predicate_json(out: &mut String, predicate: &BeliefPredicate) {
    out.push('{');
    let mut first = true;
    match predicate {
        BeliefPredicate::NoOpinion => {
            super::str_field(out, &mut first, "kind", "no-opinion");
        }
        BeliefPredicate::Tent(peak) => {
            super::str_field(out, &mut first, "kind", "tent");
            super::str_field(out, &mut first, "peak", &peak.to_string());
        }
        BeliefPredicate::AtLeast(threshold) => {
            super::str_field(out, &mut first, "kind", "at-least");
            super::str_field(out, &mut first, "threshold", &threshold.to_string());
        }
        BeliefPredicate::AtMost(threshold) => {
            super::str_field(out, &mut first, "kind", "at-most");
            super::str_field(out, &mut first, "threshold", &threshold.to_string());
        }
        BeliefPredicate::Table(values) => {
            super::str_field(out, &mut first, "kind", "table");
            super::field(out, &mut first, "values", |out| {
                let texts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                string_list_json(out, &texts);
            });
        }
    }
    out.push('}');
}

/// Parses the canonical framework form back into a [`Taf`].
///
/// Parsing is structural: shapes, scheme construction, and on-grid degrees
/// are enforced here, while referential integrity (unknown propositions,
/// duplicate ids, belief keys) is [`Taf::validate`]'s job, exactly as for
/// frameworks built in code. Applications may reference built-in schemes
/// without defining them; the built-ins are pulled in automatically.
pub fn taf_from_json(text: &str) -> Result<Taf, TaifError> {
    let value: Value = serde_json::from_str(text)?;
    let root = value.as_object().ok_or_else(|| schema_err("", "expected a JSON object"))?;
    reject_unknown(
        root,
        &["taf-version", "grid", "propositions", "schemes", "applications", "beliefs"],
        "",
    )?;
    let version = root
        .get("taf-version")
        .ok_or_else(|| schema_err("", "missing required key `taf-version`"))?;
    if version.as_u64() != Some(1) {
        return Err(schema_err("/taf-version", "unsupported version; this reader understands version 1"));
    }
    let resolution = req(root, "grid", "")?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| schema_err("/grid", "expected a small positive integer"))?;
    let grid = TruthGrid::new(resolution)
        .map_err(|err| schema_err("/grid", err.to_string()))?;

    let propositions = super::parse_section(root, "propositions", parse_proposition)?;
    let scheme_defs = super::parse_section(root, "schemes", super::parse_scheme)?;
    let mut schemes = Vec::with_capacity(scheme_defs.len());
    let mut defined: BTreeSet<String> = BTreeSet::new();
    for (i, def) in scheme_defs.iter().enumerate() {
        let scheme =
            Scheme::new(def.id.as_str(), def.kind, def.arity, def.exception_arity, &def.interpretation)
                .map_err(|err| schema_err(format!("/schemes/{i}"), err.to_string()))?;
        defined.insert(def.id.clone());
        schemes.push(scheme);
    }

    let applications = super::parse_section(root, "applications", parse_application)?;
    for app in &applications {
        if !defined.contains(app.scheme.as_str()) {
            if let Some(builtin) = builtin_scheme(app.scheme.as_str()) {
                defined.insert(app.scheme.as_str().to_owned());
                schemes.push(builtin);
            }
        }
    }

    let mut beliefs: BTreeMap<(PropositionId, PropositionId), BeliefPredicate> = BTreeMap::new();
    if let Some(value) = root.get("beliefs") {
        let items = as_array(value, "/beliefs")?;
        for (i, item) in items.iter().enumerate() {
            let path = format!("/beliefs/{i}");
            let obj = as_object(item, &path)?;
            reject_unknown(obj, &["actor", "proposition", "predicate"], &path)?;
            let actor: PropositionId = req_str(obj, "actor", &path)?.into();
            let proposition: PropositionId = req_str(obj, "proposition", &path)?.into();
            let predicate =
                parse_predicate(req(obj, "predicate", &path)?, &format!("{path}/predicate"), grid)?;
            if beliefs.insert((actor.clone(), proposition.clone()), predicate).is_some() {
                return Err(schema_err(
                    path,
                    format!("duplicate belief entry for actor `{actor}` on `{proposition}`"),
                ));
            }
        }
    }

    Ok(Taf::new(grid, propositions, schemes, applications, beliefs))
}

fn parse_proposition(value: &Value, path: &str) -> Result<Proposition, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["id", "kind", "label"], path)?;
    let id = req_str(obj, "id", path)?;
    let kind = req_str(obj, "kind", path)?;
    let mut prop = match kind.as_str() {
        "illocution" => Proposition::illocution(id.as_str()),
        "entity" => Proposition::entity(id.as_str()),
        other => {
            return Err(schema_err(
                format!("{path}/kind"),
                format!("unknown proposition kind `{other}`; expected `illocution` or `entity`"),
            ))
        }
    };
    if let Some(label) = super::opt_str(obj, "label", path)? {
        prop = prop.with_label(label);
    }
    Ok(prop)
}

fn parse_application(value: &Value, path: &str) -> Result<SchemeApplication, TaifError> {
    let obj = as_object(value, path)?;
    reject_unknown(obj, &["scheme", "premises", "exceptions", "conclusion"], path)?;
    let premises = super::parse_string_list(req(obj, "premises", path)?, &format!("{path}/premises"))?;
    let exceptions = match obj.get("exceptions") {
        None => Vec::new(),
        Some(value) => super::parse_string_list(value, &format!("{path}/exceptions"))?,
    };
    Ok(SchemeApplication {
        scheme: req_str(obj, "scheme", path)?.into(),
        premises: premises.into_iter().map(PropositionId::from).collect(),
        exceptions: exceptions.into_iter().map(PropositionId::from).collect(),
        conclusion: req_str(obj, "conclusion", path)?.into(),
    })
}

/// Parses a degree: any exact rational text or JSON number that lies on the
/// grid exactly. Off-grid values are an error, never rounded.
fn parse_degree(value: &Value, path: &str, grid: TruthGrid) -> Result<TruthValue, TaifError> {
    let rational = parse_exact(value, path)?;
    grid.exact(&rational).ok_or_else(|| {
        schema_err(
            path,
            format!(
                "{} does not lie on the 1/{} grid",
                super::weight_text(&rational),
                grid.resolution()
            ),
        )
    })
}

fn parse_exact(value: &Value, path: &str) -> Result<Rational, TaifError> {
    super::parse_weight_scalar(value, path)
}

fn parse_predicate(value: &Value, path: &str, grid: TruthGrid) -> Result<BeliefPredicate, TaifError> {
    let obj = as_object(value, path)?;
    let kind = req_str(obj, "kind", path)?;
    match kind.as_str() {
        "no-opinion" => {
            reject_unknown(obj, &["kind"], path)?;
            Ok(BeliefPredicate::NoOpinion)
        }
        "tent" => {
            reject_unknown(obj, &["kind", "peak"], path)?;
            let peak = parse_degree(req(obj, "peak", path)?, &format!("{path}/peak"), grid)?;
            Ok(BeliefPredicate::Tent(peak))
        }
        "at-least" => {
            reject_unknown(obj, &["kind", "threshold"], path)?;
            let threshold =
                parse_degree(req(obj, "threshold", path)?, &format!("{path}/threshold"), grid)?;
            Ok(BeliefPredicate::AtLeast(threshold))
        }
        "at-most" => {
            reject_unknown(obj, &["kind", "threshold"], path)?;
            let threshold =
                parse_degree(req(obj, "threshold", path)?, &format!("{path}/threshold"), grid)?;
            Ok(BeliefPredicate::AtMost(threshold))
        }
        "table" => {
            reject_unknown(obj, &["kind", "values"], path)?;
            let values_path = format!("{path}/values");
            let values = as_array(req(obj, "values", path)?, &values_path)?
                .iter()
                .enumerate()
                .map(|(i, entry)| parse_degree(entry, &format!("{values_path}/{i}"), grid))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BeliefPredicate::Table(values))
        }
        other => Err(schema_err(
            format!("{path}/kind"),
            format!("unknown predicate kind `{other}`; expected `no-opinion`, `tent`, `at-least`, `at-most`, or `table`"),
        )),
    }
}

/// Parses a labelling file: one flat JSON object mapping every proposition id
/// to a degree (number, decimal string, or `a/b` string). Totality and
/// on-grid checks happen when the map is bound to a framework.
pub fn labelling_map_from_json(text: &str) -> Result<BTreeMap<PropositionId, Rational>, TaifError> {
    let value: Value = serde_json::from_str(text)?;
    let root = value
        .as_object()
        .ok_or_else(|| schema_err("", "expected one flat JSON object of proposition: degree pairs"))?;
    let mut out = BTreeMap::new();
    for (key, entry) in root {
        let rational = parse_exact(entry, &format!("/{key}"))?;
        out.insert(PropositionId::from(key.as_str()), rational);
    }
    Ok(out)
}

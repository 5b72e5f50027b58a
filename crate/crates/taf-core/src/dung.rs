//! Classical abstract argumentation as the crisp special case.
//!
//! An abstract framework is a set of arguments with an attack relation.
//! Extensions under the standard semantics (conflict-free, admissible,
//! complete, preferred, grounded, stable) are computed by exhaustive subset
//! checking, sized for small frameworks. [`DungAf::embed`] turns a framework
//! into the two-valued fragment of the full model — one illocution per
//! argument, one mutual-exclusion attack per pair — where each extension
//! reappears as a crisp labelling of property degree 1.

use crate::model::{builtin_scheme, Proposition, SchemeApplication, Taf};
use crate::semantics::Property;
use crate::truth::TruthGrid;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Most arguments an exhaustive extension enumeration will accept.
pub const MAX_ENUMERABLE_ARGUMENTS: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DungError {
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(String),
    #[error("attack references unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("{arguments} arguments exceed the exhaustive enumeration limit of {limit}")]
    TooLarge { arguments: usize, limit: usize },
    #[error("malformed framework: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtensionKind {
    ConflictFree,
    Admissible,
    Complete,
    Preferred,
    Grounded,
    Stable,
}

impl ExtensionKind {
    pub const ALL: [ExtensionKind; 6] = [
        ExtensionKind::ConflictFree,
        ExtensionKind::Admissible,
        ExtensionKind::Complete,
        ExtensionKind::Preferred,
        ExtensionKind::Grounded,
        ExtensionKind::Stable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionKind::ConflictFree => "conflict-free",
            ExtensionKind::Admissible => "admissible",
            ExtensionKind::Complete => "complete",
            ExtensionKind::Preferred => "preferred",
            ExtensionKind::Grounded => "grounded",
            ExtensionKind::Stable => "stable",
        }
    }

    /// The labelling property whose degree-1 labellings are exactly this
    /// kind's extensions in the embedded framework.
    pub fn corresponding_property(self) -> Property {
        match self {
            ExtensionKind::ConflictFree => Property::Consistency,
            ExtensionKind::Admissible => Property::Admissibility,
            ExtensionKind::Complete => Property::Completeness,
            ExtensionKind::Preferred => Property::Preference,
            ExtensionKind::Grounded => Property::Groundedness,
            ExtensionKind::Stable => Property::Stability,
        }
    }
}

impl std::str::FromStr for ExtensionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExtensionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ExtensionKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown extension kind `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Serialize, Deserialize)]
struct DungFile {
    arguments: Vec<String>,
    attacks: Vec<(String, String)>,
}

/// An abstract argumentation framework: named arguments and attacks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DungAf {
    arguments: Vec<String>,
    /// Attacks as (attacker, target) index pairs, ordered.
    attacks: BTreeSet<(usize, usize)>,
}

impl DungAf {
    pub fn new(
        arguments: impl IntoIterator<Item = String>,
        attacks: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, DungError> {
        let mut names: Vec<String> = arguments.into_iter().collect();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(DungError::DuplicateArgument(pair[0].clone()));
            }
        }
        let index_of = |name: &str| {
            names
                .binary_search_by(|a| a.as_str().cmp(name))
                .map_err(|_| DungError::UnknownArgument(name.to_string()))
        };
        let mut edges = BTreeSet::new();
        for (from, to) in attacks {
            edges.insert((index_of(&from)?, index_of(&to)?));
        }
        Ok(DungAf { arguments: names, attacks: edges })
    }

    pub fn arguments(&self) -> &[String] {
        &self.arguments
    }

    pub fn attack_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.attacks
            .iter()
            .map(|&(a, b)| (self.arguments[a].as_str(), self.arguments[b].as_str()))
    }

    pub fn from_json(text: &str) -> Result<Self, DungError> {
        let file: DungFile = serde_json::from_str(text).map_err(|e| DungError::Json(e.to_string()))?;
        DungAf::new(file.arguments, file.attacks)
    }

    pub fn to_json(&self) -> String {
        let file = DungFile {
            arguments: self.arguments.clone(),
            attacks: self
                .attack_pairs()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    /// Bitmask machinery: for each argument, who attacks it and whom it
    /// attacks.
    fn masks(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.arguments.len();
        let mut attackers_of = vec![0u32; n];
        let mut targets_of = vec![0u32; n];
        for &(a, b) in &self.attacks {
            attackers_of[b] |= 1 << a;
            targets_of[a] |= 1 << b;
        }
        (attackers_of, targets_of)
    }

    fn set_from_mask(&self, mask: u32) -> BTreeSet<String> {
        (0..self.arguments.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.arguments[i].clone())
            .collect()
    }

    /// All extensions of the given kind, by exhaustive subset enumeration.
    ///
    /// Errors for frameworks with more than [`MAX_ENUMERABLE_ARGUMENTS`]
    /// arguments.
    pub fn extensions(&self, kind: ExtensionKind) -> Result<Vec<BTreeSet<String>>, DungError> {
        let n = self.arguments.len();
        if n > MAX_ENUMERABLE_ARGUMENTS {
            return Err(DungError::TooLarge { arguments: n, limit: MAX_ENUMERABLE_ARGUMENTS });
        }
        let (attackers_of, targets_of) = self.masks();
        let all: u32 = (1u32 << n) - 1;

        let attacked_by = |s: u32| -> u32 {
            (0..n)
                .filter(|i| s & (1 << i) != 0)
                .fold(0, |acc, i| acc | targets_of[i])
        };
        let conflict_free = |s: u32| (attacked_by(s) & s) == 0;
        // F(S): arguments whose every attacker is attacked by S.
        let defended = |s: u32| -> u32 {
            let countered = attacked_by(s);
            (0..n)
                .filter(|&i| attackers_of[i] & !countered == 0)
                .fold(0, |acc, i| acc | (1 << i))
        };

        let passing = |pred: &dyn Fn(u32) -> bool| -> Vec<u32> {
            (0..=all).filter(|&s| pred(s)).collect()
        };

        let masks = match kind {
            ExtensionKind::ConflictFree => passing(&conflict_free),
            ExtensionKind::Admissible => passing(&|s| conflict_free(s) && s & !defended(s) == 0),
            ExtensionKind::Complete => passing(&|s| conflict_free(s) && s == defended(s)),
            ExtensionKind::Stable => passing(&|s| conflict_free(s) && (s | attacked_by(s)) == all),
            ExtensionKind::Preferred => {
                let admissible = passing(&|s| conflict_free(s) && s & !defended(s) == 0);
                admissible
                    .iter()
                    .copied()
                    .filter(|&s| !admissible.iter().any(|&o| o != s && o & s == s))
                    .collect()
            }
            ExtensionKind::Grounded => {
                let complete = passing(&|s| conflict_free(s) && s == defended(s));
                complete
                    .iter()
                    .copied()
                    .filter(|&s| !complete.iter().any(|&o| o != s && o & s == o))
                    .collect()
            }
        };
        Ok(masks.into_iter().map(|m| self.set_from_mask(m)).collect())
    }

    /// The grounded extension as the least fixed point of the defense
    /// operator, iterated from the empty set. Works at any size.
    pub fn grounded_fixpoint(&self) -> BTreeSet<String> {
        let n = self.arguments.len();
        let mut current = vec![false; n];
        loop {
            let mut countered = vec![false; n];
            for &(a, b) in &self.attacks {
                if current[a] {
                    countered[b] = true;
                }
            }
            let mut next = vec![true; n];
            for &(a, b) in &self.attacks {
                if !countered[a] {
                    next[b] = false;
                }
            }
            if next == current {
                break;
            }
            current = next;
        }
        (0..n)
            .filter(|&i| current[i])
            .map(|i| self.arguments[i].clone())
            .collect()
    }

    /// The framework as a two-valued model: every argument becomes an
    /// illocution, every attack a mutual-exclusion attack application.
    pub fn embed(&self) -> Taf {
        let scheme = builtin_scheme("mutual-exclusion-attack").expect("built-in exists");
        let scheme_id = scheme.id().clone();
        Taf::new(
            TruthGrid::new(1).expect("two-valued grid"),
            self.arguments.iter().map(|a| Proposition::illocution(a.as_str())).collect(),
            vec![scheme],
            self.attack_pairs()
                .map(|(a, b)| SchemeApplication {
                    scheme: scheme_id.clone(),
                    premises: vec![a.into()],
                    exceptions: vec![],
                    conclusion: b.into(),
                })
                .collect(),
            BTreeMap::new(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::EvalContext;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn af(args: &[&str], attacks: &[(&str, &str)]) -> DungAf {
        DungAf::new(
            args.iter().map(|s| s.to_string()),
            attacks.iter().map(|(a, b)| (a.to_string(), b.to_string())),
        )
        .unwrap()
    }

    fn sets(raw: &[&[&str]]) -> Vec<BTreeSet<String>> {
        raw.iter()
            .map(|s| s.iter().map(|a| a.to_string()).collect())
            .collect()
    }

    #[test]
    fn chain_of_three() {
        let framework = af(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(
            framework.extensions(ExtensionKind::Complete).unwrap(),
            sets(&[&["a", "c"]])
        );
        assert_eq!(
            framework.extensions(ExtensionKind::Grounded).unwrap(),
            sets(&[&["a", "c"]])
        );
        assert_eq!(
            framework.extensions(ExtensionKind::Stable).unwrap(),
            sets(&[&["a", "c"]])
        );
        assert_eq!(framework.grounded_fixpoint(), sets(&[&["a", "c"]])[0]);
    }

    #[test]
    fn odd_cycle_has_no_stable_extension() {
        let framework = af(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(framework.extensions(ExtensionKind::Stable).unwrap(), sets(&[]));
        assert_eq!(framework.extensions(ExtensionKind::Admissible).unwrap(), sets(&[&[]]));
        assert_eq!(framework.extensions(ExtensionKind::Preferred).unwrap(), sets(&[&[]]));
        assert_eq!(framework.grounded_fixpoint(), BTreeSet::new());
    }

    #[test]
    fn mutual_attack_splits() {
        let framework = af(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(
            framework.extensions(ExtensionKind::Complete).unwrap(),
            sets(&[&[], &["a"], &["b"]])
        );
        assert_eq!(
            framework.extensions(ExtensionKind::Preferred).unwrap(),
            sets(&[&["a"], &["b"]])
        );
        assert_eq!(
            framework.extensions(ExtensionKind::Grounded).unwrap(),
            sets(&[&[]])
        );
        assert_eq!(
            framework.extensions(ExtensionKind::Stable).unwrap(),
            sets(&[&["a"], &["b"]])
        );
    }

    fn random_framework(rng: &mut ChaCha8Rng, max_args: usize) -> DungAf {
        let n = rng.gen_range(1..=max_args);
        let args: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let mut attacks = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.3) {
                    attacks.push((args[i].clone(), args[j].clone()));
                }
            }
        }
        DungAf::new(args, attacks).unwrap()
    }

    #[test]
    fn grounded_enumeration_matches_fixpoint_on_random_frameworks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..80 {
            let framework = random_framework(&mut rng, 7);
            let grounded = framework.extensions(ExtensionKind::Grounded).unwrap();
            assert_eq!(grounded.len(), 1, "grounded extension is unique");
            assert_eq!(grounded[0], framework.grounded_fixpoint());
        }
    }

    #[test]
    fn extension_families_nest_on_random_frameworks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let framework = random_framework(&mut rng, 6);
            let of = |kind| framework.extensions(kind).unwrap();
            let conflict_free = of(ExtensionKind::ConflictFree);
            let admissible = of(ExtensionKind::Admissible);
            let complete = of(ExtensionKind::Complete);
            let preferred = of(ExtensionKind::Preferred);
            let stable = of(ExtensionKind::Stable);
            let within = |small: &Vec<BTreeSet<String>>, big: &Vec<BTreeSet<String>>| {
                small.iter().all(|s| big.contains(s))
            };
            assert!(within(&stable, &preferred));
            assert!(within(&preferred, &complete));
            assert!(within(&complete, &admissible));
            assert!(within(&admissible, &conflict_free));
        }
    }

    #[test]
    fn embedding_reproduces_extensions_as_top_degree_labellings() {
        let frameworks = vec![
            af(&["a", "b"], &[("a", "b"), ("b", "a")]),
            af(&["a", "b", "c"], &[("a", "b"), ("b", "c")]),
            af(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
            af(&["a"], &[("a", "a")]),
        ];
        for framework in frameworks {
            let taf = framework.embed();
            assert!(taf.validate().is_empty());
            let ctx = EvalContext::new(&taf, 2).unwrap();
            let args = framework.arguments();
            for kind in ExtensionKind::ALL {
                let extensions = framework.extensions(kind).unwrap();
                let property = kind.corresponding_property();
                let n = ctx.labelling_count().unwrap();
                for rank in 0..n {
                    let labelling = ctx.labelling_from_rank(rank);
                    let set: BTreeSet<String> = args
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| labelling.values()[*i].is_top())
                        .map(|(_, a)| a.clone())
                        .collect();
                    let degree = ctx.property_degree(property, &labelling);
                    assert_eq!(
                        degree.is_top(),
                        extensions.contains(&set),
                        "{kind} vs {property} on {set:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn construction_and_json_round_trip() {
        let framework = af(&["b", "a"], &[("a", "b")]);
        assert_eq!(framework.arguments(), &["a".to_string(), "b".to_string()]);
        let text = framework.to_json();
        assert_eq!(DungAf::from_json(&text).unwrap(), framework);

        assert!(matches!(
            DungAf::new(["x".into(), "x".into()], []),
            Err(DungError::DuplicateArgument(_))
        ));
        assert!(matches!(
            DungAf::new(["x".into()], [("x".into(), "y".into())]),
            Err(DungError::UnknownArgument(_))
        ));
        assert!(DungAf::from_json("{").is_err());
    }

    #[test]
    fn enumeration_limit() {
        let args: Vec<String> = (0..16).map(|i| format!("a{i:02}")).collect();
        let framework = DungAf::new(args, []).unwrap();
        assert!(matches!(
            framework.extensions(ExtensionKind::Grounded),
            Err(DungError::TooLarge { arguments: 16, limit: 15 })
        ));
        // The fixpoint still works above the enumeration limit.
        assert_eq!(framework.grounded_fixpoint().len(), 16);
    }
}

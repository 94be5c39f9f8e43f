//! OWL subset: max-cardinality-driven sameAs merging, differentFrom
//! inconsistency detection, and symmetric/transitive property rules.
//!
//! Inconsistencies are reported, never fatal; derivation continues and the
//! store stays usable. Expects RDFS materialization to have run first so
//! the `rdf:type` facts the restrictions key on are present.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::rdfs::ReasonError;
use crate::store::TripleStore;
use crate::term::{PatternSlot, Term, Triple, TriplePattern};
use crate::vocab;

/// A parsed `owl:Restriction` attached to a class through `rdfs:subClassOf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Restriction {
    pub on_class: Term,
    pub on_property: Term,
    pub max_cardinality: u64,
}

/// Union-find over terms; reflexive, symmetric, transitive by
/// construction. The class representative is the least term of the class,
/// which keeps reporting deterministic.
#[derive(Debug, Clone, Default)]
pub struct SameAsPartition {
    parent: HashMap<Term, Term>,
}

impl SameAsPartition {
    pub fn new() -> SameAsPartition {
        SameAsPartition::default()
    }

    pub fn representative(&self, t: &Term) -> Term {
        let mut current = t.clone();
        while let Some(p) = self.parent.get(&current) {
            if *p == current {
                break;
            }
            current = p.clone();
        }
        current
    }

    pub fn union(&mut self, a: &Term, b: &Term) -> bool {
        let ra = self.representative(a);
        let rb = self.representative(b);
        if ra == rb {
            return false;
        }
        // Attach the larger representative under the smaller one.
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(child, root.clone());
        self.parent.entry(root.clone()).or_insert(root);
        true
    }

    pub fn same(&self, a: &Term, b: &Term) -> bool {
        a == b || self.representative(a) == self.representative(b)
    }

    /// Non-singleton classes, each sorted, sorted by representative.
    pub fn classes(&self) -> Vec<Vec<Term>> {
        let mut by_root: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
        for t in self.parent.keys() {
            by_root
                .entry(self.representative(t))
                .or_default()
                .push(t.clone());
        }
        by_root
            .into_values()
            .map(|mut class| {
                class.sort();
                class
            })
            .filter(|class| class.len() > 1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OwlRule {
    Symmetric,
    Transitive,
    CardinalityMerge,
}

impl OwlRule {
    pub fn name(self) -> &'static str {
        match self {
            OwlRule::Symmetric => "symmetric",
            OwlRule::Transitive => "transitive",
            OwlRule::CardinalityMerge => "cardinality-merge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub triple: Triple,
    pub rule: OwlRule,
    pub premises: Vec<Triple>,
}

impl Entailment {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triple": self.triple.to_ntriples(),
            "rule": self.rule.name(),
            "premises": self.premises.iter().map(|t| t.to_ntriples()).collect::<Vec<_>>(),
        })
    }
}

/// A cardinality clash: merged fillers that are asserted differentFrom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub restriction: Restriction,
    pub culprits: Vec<Triple>,
}

impl Inconsistency {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "cardinality-clash",
            "restriction": {
                "on_class": self.restriction.on_class.to_ntriples(),
                "on_property": self.restriction.on_property.to_ntriples(),
                "max_cardinality": self.restriction.max_cardinality,
            },
            "culprits": self.culprits.iter().map(|t| t.to_ntriples()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed restriction at {node}: {reason}")]
pub struct MalformedRestriction {
    pub node: Term,
    pub reason: String,
}

/// Extract well-formed restrictions; malformed ones are reported, skipped.
pub fn extract_restrictions(
    store: &TripleStore,
) -> (Vec<Restriction>, Vec<MalformedRestriction>) {
    let mut restrictions = Vec::new();
    let mut warnings = Vec::new();
    let nodes = store.match_pattern(&TriplePattern::new(
        PatternSlot::var("r"),
        vocab::uri(vocab::RDF_TYPE),
        vocab::uri(vocab::OWL_RESTRICTION),
    ));
    for binding in nodes {
        let node = binding["r"].clone();
        let classes = store.match_pattern(&TriplePattern::new(
            PatternSlot::var("c"),
            vocab::uri(vocab::RDFS_SUB_CLASS_OF),
            node.clone(),
        ));
        if classes.is_empty() {
            // Not reachable from any class; silently irrelevant.
            continue;
        }
        let property = single_object(store, &node, vocab::OWL_ON_PROPERTY);
        let cardinality = single_object(store, &node, vocab::OWL_MAX_CARDINALITY)
            .or_else(|| single_object(store, &node, vocab::OWL_CARDINALITY));
        let (property, cardinality) = match (property, cardinality) {
            (Some(p), Some(c)) => (p, c),
            (None, _) => {
                warnings.push(MalformedRestriction {
                    node,
                    reason: "missing owl:onProperty".into(),
                });
                continue;
            }
            (_, None) => {
                warnings.push(MalformedRestriction {
                    node,
                    reason: "missing owl:maxCardinality / owl:cardinality".into(),
                });
                continue;
            }
        };
        let max = match &cardinality {
            Term::Literal { lexical, .. } => lexical.parse::<u64>().ok(),
            _ => None,
        };
        let Some(max) = max else {
            warnings.push(MalformedRestriction {
                node,
                reason: format!("cardinality is not a natural number: {cardinality}"),
            });
            continue;
        };
        for class_binding in classes {
            restrictions.push(Restriction {
                on_class: class_binding["c"].clone(),
                on_property: property.clone(),
                max_cardinality: max,
            });
        }
    }
    restrictions.sort();
    restrictions.dedup();
    (restrictions, warnings)
}

fn single_object(store: &TripleStore, node: &Term, predicate: &str) -> Option<Term> {
    store
        .match_pattern(&TriplePattern::new(
            node.clone(),
            vocab::uri(predicate),
            PatternSlot::var("o"),
        ))
        .first()
        .map(|b| b["o"].clone())
}

#[derive(Debug)]
pub struct OwlOutcome {
    pub entailments: Vec<Entailment>,
    pub inconsistencies: Vec<Inconsistency>,
    pub partition: SameAsPartition,
}

pub fn materialize_owl(store: &mut TripleStore) -> Result<OwlOutcome, ReasonError> {
    materialize_owl_capped(store, crate::rdfs::DEFAULT_DERIVATION_CAP)
}

/// Run the four OWL rule families to fixpoint: symmetric, transitive,
/// max-cardinality-1 merging (sameAs asserted in both directions), and
/// clash detection over differentFrom facts.
pub fn materialize_owl_capped(
    store: &mut TripleStore,
    cap: usize,
) -> Result<OwlOutcome, ReasonError> {
    let (restrictions, _warnings) = extract_restrictions(store);
    let mut entailments: Vec<Entailment> = Vec::new();
    let mut partition = SameAsPartition::new();

    loop {
        let mut candidates: Vec<Entailment> = Vec::new();

        symmetric_rule(store, &mut candidates);
        transitive_rule(store, &mut candidates);

        // Seed the partition from every sameAs triple currently asserted.
        for t in sameas_triples(store) {
            partition.union(&t.s, &t.o);
        }

        cardinality_merge(store, &restrictions, &partition, &mut candidates);

        candidates.sort_by(|a, b| (&a.triple, a.rule).cmp(&(&b.triple, b.rule)));
        let mut changed = false;
        for cand in candidates {
            if store.insert(cand.triple.clone()) {
                if entailments.len() >= cap {
                    return Err(ReasonError::ResourceLimit { cap });
                }
                if cand.rule == OwlRule::CardinalityMerge {
                    partition.union(&cand.triple.s, &cand.triple.o);
                }
                entailments.push(cand);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let inconsistencies = detect_clashes(store, &restrictions, &partition);
    Ok(OwlOutcome {
        entailments,
        inconsistencies,
        partition,
    })
}

fn properties_typed(store: &TripleStore, class_uri: &str) -> Vec<Term> {
    store
        .match_pattern(&TriplePattern::new(
            PatternSlot::var("p"),
            vocab::uri(vocab::RDF_TYPE),
            vocab::uri(class_uri),
        ))
        .into_iter()
        .map(|b| b["p"].clone())
        .collect()
}

fn symmetric_rule(store: &TripleStore, out: &mut Vec<Entailment>) {
    for prop in properties_typed(store, vocab::OWL_SYMMETRIC_PROPERTY) {
        if !prop.is_uri() {
            continue;
        }
        let typing = Triple::new(
            prop.clone(),
            vocab::uri(vocab::RDF_TYPE),
            vocab::uri(vocab::OWL_SYMMETRIC_PROPERTY),
        )
        .expect("typing triple");
        for t in store.match_triples(&TriplePattern::new(
            PatternSlot::var("x"),
            prop.clone(),
            PatternSlot::var("z"),
        )) {
            if t.o.is_literal() {
                continue;
            }
            let flipped = Triple::new(t.o.clone(), t.p.clone(), t.s.clone()).expect("flip");
            if !store.contains(&flipped) {
                out.push(Entailment {
                    triple: flipped,
                    rule: OwlRule::Symmetric,
                    premises: vec![typing.clone(), t],
                });
            }
        }
    }
}

fn transitive_rule(store: &TripleStore, out: &mut Vec<Entailment>) {
    for prop in properties_typed(store, vocab::OWL_TRANSITIVE_PROPERTY) {
        if !prop.is_uri() {
            continue;
        }
        let typing = Triple::new(
            prop.clone(),
            vocab::uri(vocab::RDF_TYPE),
            vocab::uri(vocab::OWL_TRANSITIVE_PROPERTY),
        )
        .expect("typing triple");
        let edges = store.match_triples(&TriplePattern::new(
            PatternSlot::var("w"),
            prop.clone(),
            PatternSlot::var("x"),
        ));
        for left in &edges {
            if left.o.is_literal() {
                continue;
            }
            for right in store.match_triples(&TriplePattern::new(
                left.o.clone(),
                prop.clone(),
                PatternSlot::var("z"),
            )) {
                let derived =
                    Triple::new(left.s.clone(), prop.clone(), right.o.clone()).expect("chain");
                if !store.contains(&derived) {
                    out.push(Entailment {
                        triple: derived,
                        rule: OwlRule::Transitive,
                        premises: vec![typing.clone(), left.clone(), right],
                    });
                }
            }
        }
    }
}

fn sameas_triples(store: &TripleStore) -> Vec<Triple> {
    store.match_triples(&TriplePattern::new(
        PatternSlot::var("a"),
        vocab::uri(vocab::OWL_SAME_AS),
        PatternSlot::var("b"),
    ))
}

/// Fillers of `restriction.on_property` pointing at instance `i`, i.e. the
/// subjects s of (s, property, i): the restricted property points toward
/// the restricted instance, as in the president example.
fn fillers(store: &TripleStore, restriction: &Restriction, instance: &Term) -> Vec<Triple> {
    store.match_triples(&TriplePattern::new(
        PatternSlot::var("s"),
        restriction.on_property.clone(),
        instance.clone(),
    ))
}

fn restricted_instances(store: &TripleStore, restriction: &Restriction) -> Vec<Term> {
    store
        .match_pattern(&TriplePattern::new(
            PatternSlot::var("i"),
            vocab::uri(vocab::RDF_TYPE),
            restriction.on_class.clone(),
        ))
        .into_iter()
        .map(|b| b["i"].clone())
        .collect()
}

fn cardinality_merge(
    store: &TripleStore,
    restrictions: &[Restriction],
    partition: &SameAsPartition,
    out: &mut Vec<Entailment>,
) {
    let sameas = vocab::uri(vocab::OWL_SAME_AS);
    for restriction in restrictions {
        // Only max-cardinality 1 merges; higher bounds only count clashes.
        if restriction.max_cardinality != 1 {
            continue;
        }
        for instance in restricted_instances(store, restriction) {
            let filler_triples = fillers(store, restriction, &instance);
            for a in &filler_triples {
                for b in &filler_triples {
                    if a.s >= b.s || partition.same(&a.s, &b.s) {
                        continue;
                    }
                    // Merging is unconditional; fillers later found to be
                    // asserted differentFrom surface as inconsistencies.
                    for (x, y) in [(&a.s, &b.s), (&b.s, &a.s)] {
                        let derived = Triple::new(x.clone(), sameas.clone(), y.clone())
                            .expect("sameAs between non-literals");
                        if !store.contains(&derived) {
                            out.push(Entailment {
                                triple: derived,
                                rule: OwlRule::CardinalityMerge,
                                premises: vec![a.clone(), b.clone()],
                            });
                        }
                    }
                }
            }
        }
    }
}

/// After the fixpoint settles, report one clash per (restriction,
/// instance, unordered pair of merged fillers asserted differentFrom).
/// Keying on the final store and partition makes the report
/// insertion-order independent.
fn detect_clashes(
    store: &TripleStore,
    restrictions: &[Restriction],
    partition: &SameAsPartition,
) -> Vec<Inconsistency> {
    let different_triples = store.match_triples(&TriplePattern::new(
        PatternSlot::var("a"),
        vocab::uri(vocab::OWL_DIFFERENT_FROM),
        PatternSlot::var("b"),
    ));
    let mut seen: BTreeSet<(Restriction, Term, Term, Term)> = BTreeSet::new();
    let mut out = Vec::new();
    for restriction in restrictions {
        for instance in restricted_instances(store, restriction) {
            let filler_triples = fillers(store, restriction, &instance);
            let filler_subjects: BTreeMap<&Term, &Triple> =
                filler_triples.iter().map(|t| (&t.s, t)).collect();
            if restriction.max_cardinality == 1 {
                // Cardinality 1 merged every filler pair; any asserted
                // differentFrom between two fillers is a contradiction.
                for d in &different_triples {
                    let (Some(fa), Some(fb)) =
                        (filler_subjects.get(&d.s), filler_subjects.get(&d.o))
                    else {
                        continue;
                    };
                    if d.s == d.o || !partition.same(&d.s, &d.o) {
                        continue;
                    }
                    let (lo, hi) = if d.s <= d.o {
                        (d.s.clone(), d.o.clone())
                    } else {
                        (d.o.clone(), d.s.clone())
                    };
                    if !seen.insert((restriction.clone(), instance.clone(), lo, hi)) {
                        continue;
                    }
                    out.push(Inconsistency {
                        restriction: restriction.clone(),
                        culprits: vec![(*fa).clone(), (*fb).clone(), d.clone()],
                    });
                }
            } else {
                // Higher bounds never merge; clash when more than n
                // mutually different filler classes exist.
                let mut by_class: BTreeMap<Term, Vec<Triple>> = BTreeMap::new();
                for t in &filler_triples {
                    by_class
                        .entry(partition.representative(&t.s))
                        .or_default()
                        .push(t.clone());
                }
                let reps: Vec<Term> = by_class.keys().cloned().collect();
                if (reps.len() as u64) <= restriction.max_cardinality {
                    continue;
                }
                let pairwise_different = reps.iter().enumerate().all(|(i, a)| {
                    reps[i + 1..]
                        .iter()
                        .all(|b| different_evidence(store, partition, a, b).is_some())
                });
                if !pairwise_different {
                    continue;
                }
                let key = (
                    restriction.clone(),
                    instance.clone(),
                    reps[0].clone(),
                    reps[reps.len() - 1].clone(),
                );
                if !seen.insert(key) {
                    continue;
                }
                let mut culprits: Vec<Triple> = filler_triples.clone();
                for (i, a) in reps.iter().enumerate() {
                    for b in &reps[i + 1..] {
                        if let Some(evidence) = different_evidence(store, partition, a, b) {
                            culprits.push(evidence);
                        }
                    }
                }
                out.push(Inconsistency {
                    restriction: restriction.clone(),
                    culprits,
                });
            }
        }
    }
    out
}

fn different_evidence(
    store: &TripleStore,
    partition: &SameAsPartition,
    class_a: &Term,
    class_b: &Term,
) -> Option<Triple> {
    store
        .match_triples(&TriplePattern::new(
            PatternSlot::var("a"),
            vocab::uri(vocab::OWL_DIFFERENT_FROM),
            PatternSlot::var("b"),
        ))
        .into_iter()
        .find(|t| {
            let ra = partition.representative(&t.s);
            let rb = partition.representative(&t.o);
            (ra == *class_a && rb == *class_b) || (ra == *class_b && rb == *class_a)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntriples::parse_ntriples;
    use crate::rdfs::materialize_rdfs;

    fn uri(s: &str) -> Term {
        Term::uri(s).unwrap()
    }

    fn triple(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(uri(s), uri(p), uri(o)).unwrap()
    }

    /// The country/president ontology: at most one president per country.
    pub(crate) const PRESIDENT_ONTOLOGY: &str = "\
<lanl:Country> <rdf:type> <rdfs:Class> .
<lanl:Person> <rdf:type> <rdfs:Class> .
<lanl:president> <rdf:type> <rdf:Property> .
<lanl:president> <rdfs:domain> <lanl:Person> .
<lanl:president> <rdfs:range> <lanl:Country> .
<lanl:Country> <rdfs:subClassOf> _:1234 .
_:1234 <rdf:type> <owl:Restriction> .
_:1234 <owl:onProperty> <lanl:president> .
_:1234 <owl:maxCardinality> \"1\"^^<xsd:int> .
";

    fn store_of(doc: &str) -> TripleStore {
        parse_ntriples(doc).unwrap().into_iter().collect()
    }

    #[test]
    fn figure_restriction_extracts() {
        let store = store_of(PRESIDENT_ONTOLOGY);
        let (restrictions, warnings) = extract_restrictions(&store);
        assert!(warnings.is_empty());
        assert_eq!(
            restrictions,
            vec![Restriction {
                on_class: uri("lanl:Country"),
                on_property: uri("lanl:president"),
                max_cardinality: 1,
            }]
        );
    }

    #[test]
    fn no_restrictions_in_plain_store() {
        let store = store_of("<a:x> <a:p> <a:y> .");
        let (restrictions, warnings) = extract_restrictions(&store);
        assert!(restrictions.is_empty());
        assert!(warnings.is_empty());
    }

    #[test]
    fn missing_on_property_is_warned_and_skipped() {
        let store = store_of(
            "<a:C> <rdfs:subClassOf> _:r .\n\
             _:r <rdf:type> <owl:Restriction> .\n\
             _:r <owl:maxCardinality> \"1\"^^<xsd:int> .\n",
        );
        let (restrictions, warnings) = extract_restrictions(&store);
        assert!(restrictions.is_empty());
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].reason.contains("owl:onProperty"));
    }

    fn president_store_with_two_presidents() -> TripleStore {
        let mut store = store_of(PRESIDENT_ONTOLOGY);
        store.insert(triple("usa:barack", "lanl:president", "usa:United_States"));
        store.insert(triple("usa:obama", "lanl:president", "usa:United_States"));
        materialize_rdfs(&mut store).unwrap();
        store
    }

    #[test]
    fn max_cardinality_one_merges_presidents() {
        let mut store = president_store_with_two_presidents();
        let outcome = materialize_owl(&mut store).unwrap();
        assert!(store.contains(&triple("usa:barack", "owl:sameAs", "usa:obama")));
        assert!(store.contains(&triple("usa:obama", "owl:sameAs", "usa:barack")));
        assert!(outcome.inconsistencies.is_empty());
        assert!(outcome.partition.same(&uri("usa:barack"), &uri("usa:obama")));
    }

    #[test]
    fn different_from_president_is_one_clash() {
        let mut store = president_store_with_two_presidents();
        store.insert(triple("lanl:herbertv", "owl:differentFrom", "usa:barack"));
        store.insert(triple("lanl:herbertv", "lanl:president", "usa:United_States"));
        materialize_rdfs(&mut store).unwrap();
        let outcome = materialize_owl(&mut store).unwrap();
        assert_eq!(outcome.inconsistencies.len(), 1);
        assert_eq!(outcome.inconsistencies[0].restriction.max_cardinality, 1);
        // The merge itself is unconditional — the differentFrom assertion
        // surfaces as the clash, not as a merge veto.
        assert!(outcome.partition.same(&uri("usa:barack"), &uri("usa:obama")));
        // The clash culprits carry the differentFrom evidence.
        assert!(outcome.inconsistencies[0]
            .culprits
            .iter()
            .any(|t| t.p == uri("owl:differentFrom")));
    }

    #[test]
    fn transitive_property_chains() {
        let mut store = store_of(
            "<a:anc> <rdf:type> <owl:TransitiveProperty> .\n\
             <a:a> <a:anc> <a:b> .\n\
             <a:b> <a:anc> <a:c> .\n",
        );
        materialize_owl(&mut store).unwrap();
        assert!(store.contains(&triple("a:a", "a:anc", "a:c")));
    }

    #[test]
    fn symmetric_rule_is_involutive() {
        let mut store = store_of(
            "<a:knows> <rdf:type> <owl:SymmetricProperty> .\n\
             <a:x> <a:knows> <a:y> .\n",
        );
        let first = materialize_owl(&mut store).unwrap();
        assert!(store.contains(&triple("a:y", "a:knows", "a:x")));
        assert_eq!(first.entailments.len(), 1);
        let second = materialize_owl(&mut store).unwrap();
        assert!(second.entailments.is_empty());
    }

    #[test]
    fn partition_is_equivalence_relation() {
        let mut p = SameAsPartition::new();
        let a = uri("a:a");
        let b = uri("a:b");
        let c = uri("a:c");
        assert!(p.same(&a, &a)); // reflexive
        p.union(&a, &b);
        assert!(p.same(&b, &a)); // symmetric
        p.union(&b, &c);
        assert!(p.same(&a, &c)); // transitive
        assert_eq!(p.classes(), vec![vec![a, b, c]]);
    }
}

//! Forward-chaining RDFS materialization to fixpoint.
//!
//! Ten rules are implemented: four subsumption rules (class/datatype
//! lifting to `rdfs:Resource`/`rdfs:Literal`, subproperty and subclass
//! transitivity) and six realization rules (schema lifting of subjects,
//! predicates, and objects, type lifting through subclass edges, and
//! domain/range typing). Evaluation is semi-naive: each round only joins
//! the previous round's novel triples against the store, so quiescent
//! rules are never rescanned.

use serde::Serialize;
use thiserror::Error;

use crate::store::TripleStore;
use crate::term::{Bindings, PatternSlot, Term, Triple, TriplePattern};
use crate::vocab;

/// Identifies which rule produced an entailment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    SubClassResource,
    DatatypeLiteral,
    SubpropertyTrans,
    SubclassTrans,
    ResSubject,
    PropPredicate,
    ResObject,
    TypeLift,
    DomainType,
    RangeType,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::SubClassResource => "sub-class-resource",
            RuleId::DatatypeLiteral => "datatype-literal",
            RuleId::SubpropertyTrans => "subproperty-trans",
            RuleId::SubclassTrans => "subclass-trans",
            RuleId::ResSubject => "res-subject",
            RuleId::PropPredicate => "prop-predicate",
            RuleId::ResObject => "res-object",
            RuleId::TypeLift => "type-lift",
            RuleId::DomainType => "domain-type",
            RuleId::RangeType => "range-type",
        }
    }
}

/// A derived triple with its rule and the premises it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub triple: Triple,
    pub rule: RuleId,
    pub premises: Vec<Triple>,
}

impl Entailment {
    /// One JSON object per entailment, suitable for JSON-lines export.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triple": self.triple.to_ntriples(),
            "rule": self.rule.name(),
            "premises": self.premises.iter().map(|t| t.to_ntriples()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonError {
    #[error("derived-triple cap exceeded ({cap} triples)")]
    ResourceLimit { cap: usize },
}

/// Default cap on derived triples, a guard against statement bloat.
pub const DEFAULT_DERIVATION_CAP: usize = 1_000_000;

/// Materialize all RDFS entailments into `store`, returning the novel
/// derivations with provenance. Monotone: never removes triples.
pub fn materialize_rdfs(store: &mut TripleStore) -> Result<Vec<Entailment>, ReasonError> {
    materialize_rdfs_capped(store, DEFAULT_DERIVATION_CAP)
}

pub fn materialize_rdfs_capped(
    store: &mut TripleStore,
    cap: usize,
) -> Result<Vec<Entailment>, ReasonError> {
    let mut entailments: Vec<Entailment> = Vec::new();
    let mut delta: Vec<Triple> = store.iter().cloned().collect();

    while !delta.is_empty() {
        let mut candidates: Vec<Entailment> = Vec::new();
        for t in &delta {
            apply_rules_to(store, t, &mut candidates);
        }
        candidates.sort_by(|a, b| (&a.triple, a.rule).cmp(&(&b.triple, b.rule)));

        let mut next_delta = Vec::new();
        for cand in candidates {
            if store.insert(cand.triple.clone()) {
                if entailments.len() >= cap {
                    return Err(ReasonError::ResourceLimit { cap });
                }
                next_delta.push(cand.triple.clone());
                entailments.push(cand);
            }
        }
        delta = next_delta;
    }
    Ok(entailments)
}

/// All rule firings that have `t` as one of their premises.
fn apply_rules_to(store: &TripleStore, t: &Triple, out: &mut Vec<Entailment>) {
    let type_uri = vocab::uri(vocab::RDF_TYPE);
    let subclass = vocab::uri(vocab::RDFS_SUB_CLASS_OF);
    let subprop = vocab::uri(vocab::RDFS_SUB_PROPERTY_OF);

    let mut emit = |s: Term, p: Term, o: Term, rule: RuleId, premises: Vec<Triple>| {
        let triple = Triple::new(s, p, o).expect("rule conclusions respect triple constraints");
        if !store.contains(&triple) {
            out.push(Entailment { triple, rule, premises });
        }
    };

    // Schema lifting: every statement types its subject and object as
    // resources and its predicate as a property. Literal objects are
    // skipped (they cannot be subjects of the derived triple).
    emit(
        t.s.clone(),
        type_uri.clone(),
        vocab::uri(vocab::RDFS_RESOURCE),
        RuleId::ResSubject,
        vec![t.clone()],
    );
    emit(
        t.p.clone(),
        type_uri.clone(),
        vocab::uri(vocab::RDF_PROPERTY),
        RuleId::PropPredicate,
        vec![t.clone()],
    );
    if !t.o.is_literal() {
        emit(
            t.o.clone(),
            type_uri.clone(),
            vocab::uri(vocab::RDFS_RESOURCE),
            RuleId::ResObject,
            vec![t.clone()],
        );
    }

    if t.p == type_uri {
        if t.o == vocab::uri(vocab::RDFS_CLASS) {
            emit(
                t.s.clone(),
                subclass.clone(),
                vocab::uri(vocab::RDFS_RESOURCE),
                RuleId::SubClassResource,
                vec![t.clone()],
            );
        }
        if t.o == vocab::uri(vocab::RDFS_DATATYPE) {
            emit(
                t.s.clone(),
                subclass.clone(),
                vocab::uri(vocab::RDFS_LITERAL),
                RuleId::DatatypeLiteral,
                vec![t.clone()],
            );
        }
        // Type lifting with t as the instance premise:
        // (x, type, y) ∧ (y, subClassOf, z) ⟹ (x, type, z).
        for other in store.match_triples(&TriplePattern::new(
            t.o.clone(),
            subclass.clone(),
            PatternSlot::var("z"),
        )) {
            emit(
                t.s.clone(),
                type_uri.clone(),
                other.o.clone(),
                RuleId::TypeLift,
                vec![t.clone(), other],
            );
        }
    }

    if t.p == subclass {
        // Transitivity, with t on either side of the join.
        for other in store.match_triples(&TriplePattern::new(
            t.o.clone(),
            subclass.clone(),
            PatternSlot::var("z"),
        )) {
            emit(
                t.s.clone(),
                subclass.clone(),
                other.o.clone(),
                RuleId::SubclassTrans,
                vec![t.clone(), other],
            );
        }
        for other in store.match_triples(&TriplePattern::new(
            PatternSlot::var("w"),
            subclass.clone(),
            t.s.clone(),
        )) {
            emit(
                other.s.clone(),
                subclass.clone(),
                t.o.clone(),
                RuleId::SubclassTrans,
                vec![other, t.clone()],
            );
        }
        // Type lifting with t as the subclass premise.
        for other in store.match_triples(&TriplePattern::new(
            PatternSlot::var("x"),
            type_uri.clone(),
            t.s.clone(),
        )) {
            emit(
                other.s.clone(),
                type_uri.clone(),
                t.o.clone(),
                RuleId::TypeLift,
                vec![other, t.clone()],
            );
        }
    }

    if t.p == subprop {
        for other in store.match_triples(&TriplePattern::new(
            t.o.clone(),
            subprop.clone(),
            PatternSlot::var("z"),
        )) {
            emit(
                t.s.clone(),
                subprop.clone(),
                other.o.clone(),
                RuleId::SubpropertyTrans,
                vec![t.clone(), other],
            );
        }
        for other in store.match_triples(&TriplePattern::new(
            PatternSlot::var("w"),
            subprop.clone(),
            t.s.clone(),
        )) {
            emit(
                other.s.clone(),
                subprop.clone(),
                t.o.clone(),
                RuleId::SubpropertyTrans,
                vec![other, t.clone()],
            );
        }
    }

    // Domain and range typing, with t as either the schema premise or the
    // data premise.
    let domain = vocab::uri(vocab::RDFS_DOMAIN);
    let range = vocab::uri(vocab::RDFS_RANGE);
    if t.p == domain {
        for other in store.match_triples(&TriplePattern::new(
            PatternSlot::var("y"),
            t.s.clone(),
            PatternSlot::var("z"),
        )) {
            emit(
                other.s.clone(),
                type_uri.clone(),
                t.o.clone(),
                RuleId::DomainType,
                vec![t.clone(), other],
            );
        }
    }
    if t.p == range {
        for other in store.match_triples(&TriplePattern::new(
            PatternSlot::var("y"),
            t.s.clone(),
            PatternSlot::var("z"),
        )) {
            if !other.o.is_literal() {
                emit(
                    other.o.clone(),
                    type_uri.clone(),
                    t.o.clone(),
                    RuleId::RangeType,
                    vec![t.clone(), other],
                );
            }
        }
    }
    // t as the data premise of domain/range rules.
    for schema in store.match_triples(&TriplePattern::new(
        t.p.clone(),
        domain.clone(),
        PatternSlot::var("x"),
    )) {
        emit(
            t.s.clone(),
            type_uri.clone(),
            schema.o.clone(),
            RuleId::DomainType,
            vec![schema, t.clone()],
        );
    }
    if !t.o.is_literal() {
        for schema in store.match_triples(&TriplePattern::new(
            t.p.clone(),
            range.clone(),
            PatternSlot::var("x"),
        )) {
            emit(
                t.o.clone(),
                type_uri.clone(),
                schema.o.clone(),
                RuleId::RangeType,
                vec![schema, t.clone()],
            );
        }
    }
}

/// Query-time entailment: answers as if the store had been materialized,
/// without mutating it.
pub fn entails(store: &TripleStore, pattern: &TriplePattern) -> Result<Vec<Bindings>, ReasonError> {
    entails_capped(store, pattern, DEFAULT_DERIVATION_CAP)
}

pub fn entails_capped(
    store: &TripleStore,
    pattern: &TriplePattern,
    cap: usize,
) -> Result<Vec<Bindings>, ReasonError> {
    let mut snapshot = store.clone();
    materialize_rdfs_capped(&mut snapshot, cap)?;
    Ok(snapshot.match_pattern(pattern))
}

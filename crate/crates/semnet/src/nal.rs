//! Non-axiomatic inheritance judgments with ⟨frequency, confidence⟩ truth
//! values, their reified triple encoding, and the four syllogistic
//! inference rules.
//!
//! A simple judgment `x → y ⟨f,c⟩` reifies to three triples through a
//! statement-pointer URI; a product judgment `(x₁ × … × xₙ) → y ⟨f,c⟩`
//! reifies to n + 3 triples with ordered `nal:_i` component edges.
//! Saturation derives new judgments from premise pairs sharing a term;
//! a derived judgment whose (subject, predicate) pair already exists is
//! dropped (revision is out of scope), with a deterministic premise
//! ordering deciding which derivation wins.

use std::collections::BTreeMap;

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::term::{Term, Triple};
use crate::vocab;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NalError {
    #[error("truth value out of range: f={f}, c={c}")]
    TruthOutOfRange { f: f64, c: f64 },
    #[error("self-inheritance judgment rejected: {0}")]
    SelfInheritance(Term),
    #[error("premises do not share the term required by {rule:?}")]
    ShapeMismatch { rule: SyllogismRule },
    #[error("conclusion would be a self-inheritance {0} -> {0}")]
    DegenerateConclusion(Term),
    #[error("judgment cap exceeded ({cap})")]
    ResourceLimit { cap: usize },
    #[error("decode: {0}")]
    Decode(String),
}

/// Frequency of supporting evidence and confidence in its stability,
/// both in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TruthValue {
    pub f: f64,
    pub c: f64,
}

impl TruthValue {
    pub fn new(f: f64, c: f64) -> Result<TruthValue, NalError> {
        if !(0.0..=1.0).contains(&f) || !(0.0..=1.0).contains(&c) {
            return Err(NalError::TruthOutOfRange { f, c });
        }
        Ok(TruthValue { f, c })
    }
}

/// An inheritance judgment `subject → predicate ⟨f,c⟩`, reified by a
/// statement-pointer URI.
#[derive(Debug, Clone, PartialEq)]
pub struct Judgment {
    pub subject: Term,
    pub predicate_term: Term,
    pub tv: TruthValue,
    pub pointer: Term,
}

impl Judgment {
    pub fn new(
        subject: Term,
        predicate_term: Term,
        tv: TruthValue,
        pointer: Term,
    ) -> Result<Judgment, NalError> {
        if subject == predicate_term {
            return Err(NalError::SelfInheritance(subject));
        }
        Ok(Judgment {
            subject,
            predicate_term,
            tv,
            pointer,
        })
    }

    fn key(&self) -> (Term, Term) {
        (self.subject.clone(), self.predicate_term.clone())
    }
}

/// A product judgment `(c₁ × … × cₙ) → predicate ⟨f,c⟩` (n ≥ 2), with
/// significant component order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductJudgment {
    pub components: Vec<Term>,
    pub predicate_term: Term,
    pub tv: TruthValue,
    pub set_pointer: Term,
    pub stmt_pointer: Term,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyllogismRule {
    Deduction,
    Induction,
    Abduction,
    Exemplification,
}

impl SyllogismRule {
    pub const ALL: [SyllogismRule; 4] = [
        SyllogismRule::Deduction,
        SyllogismRule::Induction,
        SyllogismRule::Abduction,
        SyllogismRule::Exemplification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyllogismRule::Deduction => "deduction",
            SyllogismRule::Induction => "induction",
            SyllogismRule::Abduction => "abduction",
            SyllogismRule::Exemplification => "exemplification",
        }
    }
}

fn float_literal(value: f64) -> Term {
    Term::typed_literal(format!("{value}"), vocab::XSD_FLOAT)
}

/// Reify a simple judgment as three triples.
pub fn encode_judgment(j: &Judgment) -> Vec<Triple> {
    vec![
        Triple::new(j.subject.clone(), j.pointer.clone(), j.predicate_term.clone())
            .expect("judgment terms satisfy triple constraints"),
        Triple::new(
            j.pointer.clone(),
            vocab::uri(vocab::NAL_FREQUENCY),
            float_literal(j.tv.f),
        )
        .expect("pointer is a URI"),
        Triple::new(
            j.pointer.clone(),
            vocab::uri(vocab::NAL_CONFIDENCE),
            float_literal(j.tv.c),
        )
        .expect("pointer is a URI"),
    ]
}

/// Reify a product judgment as n + 3 triples.
pub fn encode_product_judgment(j: &ProductJudgment) -> Vec<Triple> {
    let mut out = Vec::with_capacity(j.components.len() + 3);
    for (idx, component) in j.components.iter().enumerate() {
        let predicate = vocab::uri(&format!("{}{}", vocab::NAL_COMPONENT_PREFIX, idx + 1));
        out.push(
            Triple::new(j.set_pointer.clone(), predicate, component.clone())
                .expect("set pointer is a URI"),
        );
    }
    out.push(
        Triple::new(
            j.set_pointer.clone(),
            j.stmt_pointer.clone(),
            j.predicate_term.clone(),
        )
        .expect("pointers are URIs"),
    );
    out.push(
        Triple::new(
            j.stmt_pointer.clone(),
            vocab::uri(vocab::NAL_FREQUENCY),
            float_literal(j.tv.f),
        )
        .expect("pointer is a URI"),
    );
    out.push(
        Triple::new(
            j.stmt_pointer.clone(),
            vocab::uri(vocab::NAL_CONFIDENCE),
            float_literal(j.tv.c),
        )
        .expect("pointer is a URI"),
    );
    out
}

/// Recover judgments from reified triples. Inverse of the encoders on
/// well-formed input.
pub fn decode_judgments(
    triples: &[Triple],
) -> Result<(Vec<Judgment>, Vec<ProductJudgment>), NalError> {
    let freq_uri = vocab::uri(vocab::NAL_FREQUENCY);
    let conf_uri = vocab::uri(vocab::NAL_CONFIDENCE);

    let mut freq: BTreeMap<Term, f64> = BTreeMap::new();
    let mut conf: BTreeMap<Term, f64> = BTreeMap::new();
    for t in triples {
        let target = if t.p == freq_uri {
            Some(&mut freq)
        } else if t.p == conf_uri {
            Some(&mut conf)
        } else {
            None
        };
        if let Some(map) = target {
            let Term::Literal { lexical, .. } = &t.o else {
                return Err(NalError::Decode(format!(
                    "non-literal truth component in {t}"
                )));
            };
            let value: f64 = lexical
                .parse()
                .map_err(|_| NalError::Decode(format!("bad float literal in {t}")))?;
            map.insert(t.s.clone(), value);
        }
    }

    // Ordered components per set pointer.
    let mut components: BTreeMap<Term, BTreeMap<usize, Term>> = BTreeMap::new();
    for t in triples {
        if let Term::Uri(p) = &t.p {
            if let Some(rest) = p.strip_prefix(vocab::NAL_COMPONENT_PREFIX) {
                if let Ok(idx) = rest.parse::<usize>() {
                    components
                        .entry(t.s.clone())
                        .or_default()
                        .insert(idx, t.o.clone());
                }
            }
        }
    }

    let mut simple = Vec::new();
    let mut products = Vec::new();
    for t in triples {
        let (Some(&f), Some(&c)) = (freq.get(&t.p), conf.get(&t.p)) else {
            continue;
        };
        let tv = TruthValue::new(f, c)?;
        if let Some(ordered) = components.get(&t.s) {
            let comps: Vec<Term> = ordered.values().cloned().collect();
            if comps.len() < 2 || !(1..=comps.len()).all(|i| ordered.contains_key(&i)) {
                return Err(NalError::Decode(format!(
                    "product set {} has malformed component indices",
                    t.s
                )));
            }
            products.push(ProductJudgment {
                components: comps,
                predicate_term: t.o.clone(),
                tv,
                set_pointer: t.s.clone(),
                stmt_pointer: t.p.clone(),
            });
        } else {
            simple.push(Judgment::new(
                t.s.clone(),
                t.o.clone(),
                tv,
                t.p.clone(),
            )?);
        }
    }
    Ok((simple, products))
}

fn conclusion_terms(
    rule: SyllogismRule,
    j1: &Judgment,
    j2: &Judgment,
) -> Result<(Term, Term), NalError> {
    let shared_ok = match rule {
        SyllogismRule::Deduction | SyllogismRule::Exemplification => {
            j1.predicate_term == j2.subject
        }
        SyllogismRule::Induction => j1.predicate_term == j2.predicate_term,
        SyllogismRule::Abduction => j1.subject == j2.subject,
    };
    if !shared_ok {
        return Err(NalError::ShapeMismatch { rule });
    }
    let (s, p) = match rule {
        SyllogismRule::Deduction => (j1.subject.clone(), j2.predicate_term.clone()),
        SyllogismRule::Induction => (j1.subject.clone(), j2.subject.clone()),
        SyllogismRule::Abduction => (j1.predicate_term.clone(), j2.predicate_term.clone()),
        SyllogismRule::Exemplification => (j2.predicate_term.clone(), j1.subject.clone()),
    };
    if s == p {
        return Err(NalError::DegenerateConclusion(s));
    }
    Ok((s, p))
}

fn conclusion_tv(rule: SyllogismRule, t1: TruthValue, t2: TruthValue, k: u32) -> TruthValue {
    let k = f64::from(k);
    let (f3, c3) = match rule {
        SyllogismRule::Deduction => (t1.f * t2.f, t1.f * t1.c * t2.f * t2.c),
        SyllogismRule::Induction => {
            let w = t1.f * t1.c * t2.c;
            (t1.f, w / (w + k))
        }
        SyllogismRule::Abduction => {
            let w = t2.f * t1.c * t2.c;
            (t2.f, w / (w + k))
        }
        SyllogismRule::Exemplification => {
            let w = t1.f * t1.c * t2.f * t2.c;
            (1.0, w / (w + k))
        }
    };
    TruthValue { f: f3, c: c3 }
}

/// Apply one syllogism to a premise pair, minting a fresh pointer derived
/// deterministically from the rule and premise pointers.
pub fn apply_syllogism(
    rule: SyllogismRule,
    j1: &Judgment,
    j2: &Judgment,
    k: u32,
) -> Result<Judgment, NalError> {
    let (subject, predicate_term) = conclusion_terms(rule, j1, j2)?;
    let tv = conclusion_tv(rule, j1.tv, j2.tv, k);
    let pointer = vocab::uri(&format!(
        "nal:drv|{}|{}|{}",
        rule.name(),
        pointer_text(&j1.pointer),
        pointer_text(&j2.pointer)
    ));
    Judgment::new(subject, predicate_term, tv, pointer)
}

fn pointer_text(t: &Term) -> String {
    match t {
        Term::Uri(u) => u.clone(),
        other => other.to_ntriples(),
    }
}

/// Default cap on the saturated knowledge-base size.
pub const DEFAULT_JUDGMENT_CAP: usize = 100_000;

/// Repeatedly apply the enabled rules to all premise pairs sharing a term
/// until quiescence or `max_rounds`. Derivations whose (subject,
/// predicate) key already exists are dropped; within a round candidates
/// merge in premise-key order, so results are run-to-run identical.
pub fn saturate(
    kb: &[Judgment],
    rules: &[SyllogismRule],
    k: u32,
    max_rounds: usize,
) -> Result<Vec<Judgment>, NalError> {
    saturate_capped(kb, rules, k, max_rounds, DEFAULT_JUDGMENT_CAP)
}

pub fn saturate_capped(
    kb: &[Judgment],
    rules: &[SyllogismRule],
    k: u32,
    max_rounds: usize,
    cap: usize,
) -> Result<Vec<Judgment>, NalError> {
    let mut sorted_input: Vec<Judgment> = kb.to_vec();
    sorted_input.sort_by(|a, b| {
        (&a.subject, &a.predicate_term, &a.pointer).cmp(&(
            &b.subject,
            &b.predicate_term,
            &b.pointer,
        ))
    });

    let mut by_key: BTreeMap<(Term, Term), Judgment> = BTreeMap::new();
    for j in sorted_input {
        by_key.entry(j.key()).or_insert(j);
    }

    for _round in 0..max_rounds {
        let current: Vec<Judgment> = by_key.values().cloned().collect();
        let mut candidates = derive_round(&current, rules, k);
        candidates.sort_by(|(key_a, _), (key_b, _)| key_a.cmp(key_b));

        let mut changed = false;
        for (_, j) in candidates {
            let at_cap = by_key.len() >= cap;
            if let std::collections::btree_map::Entry::Vacant(slot) = by_key.entry(j.key()) {
                if at_cap {
                    return Err(NalError::ResourceLimit { cap });
                }
                slot.insert(j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(by_key.into_values().collect())
}

type CandidateKey = ((Term, Term), (Term, Term), usize);

/// One round of pairwise derivation. Pairs are evaluated independently
/// (in parallel with the `parallel` feature); the key carries the premise
/// ordering used at the merge point.
fn derive_round(
    current: &[Judgment],
    rules: &[SyllogismRule],
    k: u32,
) -> Vec<(CandidateKey, Judgment)> {
    let pair_indices: Vec<(usize, usize)> = (0..current.len())
        .flat_map(|i| (0..current.len()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();

    let derive_pair = |&(i, j): &(usize, usize)| -> Vec<(CandidateKey, Judgment)> {
        let j1 = &current[i];
        let j2 = &current[j];
        rules
            .iter()
            .enumerate()
            .filter_map(|(rule_idx, &rule)| {
                apply_syllogism(rule, j1, j2, k)
                    .ok()
                    .map(|conclusion| ((j1.key(), j2.key(), rule_idx), conclusion))
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    {
        pair_indices.par_iter().flat_map_iter(derive_pair).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pair_indices.iter().flat_map(derive_pair).collect()
    }
}

//! Reserved vocabulary URIs used by the reasoning engines.
//!
//! The compact `prefix:name` form is used as the URI text itself; the
//! engines only ever compare these strings for equality.

use crate::term::Term;

pub const RDF_TYPE: &str = "rdf:type";
pub const RDF_PROPERTY: &str = "rdf:Property";

pub const RDFS_CLASS: &str = "rdfs:Class";
pub const RDFS_DATATYPE: &str = "rdfs:Datatype";
pub const RDFS_LITERAL: &str = "rdfs:Literal";
pub const RDFS_RESOURCE: &str = "rdfs:Resource";
pub const RDFS_SUB_CLASS_OF: &str = "rdfs:subClassOf";
pub const RDFS_SUB_PROPERTY_OF: &str = "rdfs:subPropertyOf";
pub const RDFS_DOMAIN: &str = "rdfs:domain";
pub const RDFS_RANGE: &str = "rdfs:range";

pub const OWL_RESTRICTION: &str = "owl:Restriction";
pub const OWL_ON_PROPERTY: &str = "owl:onProperty";
pub const OWL_MAX_CARDINALITY: &str = "owl:maxCardinality";
pub const OWL_CARDINALITY: &str = "owl:cardinality";
pub const OWL_SAME_AS: &str = "owl:sameAs";
pub const OWL_DIFFERENT_FROM: &str = "owl:differentFrom";
pub const OWL_SYMMETRIC_PROPERTY: &str = "owl:SymmetricProperty";
pub const OWL_TRANSITIVE_PROPERTY: &str = "owl:TransitiveProperty";

pub const NAL_FREQUENCY: &str = "nal:frequency";
pub const NAL_CONFIDENCE: &str = "nal:confidence";
/// Prefix for ordered product components: `nal:_1`, `nal:_2`, ...
pub const NAL_COMPONENT_PREFIX: &str = "nal:_";

pub const XSD_FLOAT: &str = "xsd:float";

/// Shorthand for a vocabulary URI term; panics only on malformed constants.
pub fn uri(value: &str) -> Term {
    Term::uri(value).expect("vocabulary URI")
}

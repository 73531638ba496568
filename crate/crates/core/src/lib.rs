//! Terminological entries in mainstream TBX and in a TEI blend: parsing,
//! registry-driven validation, conversion between the two, and generated
//! schema and documentation.

pub mod canonical;
pub mod diagnostics;
pub mod model;
pub mod pointer;
pub mod registry;
pub mod transform;
pub mod validate;
pub mod visit;
pub mod xml;

pub use canonical::{canonicalize, first_divergence};
pub use diagnostics::{
    Code, Diagnostic, Severity, SourceLocation, SourceMap, ValidationReport, Verdict,
};
pub use model::{Dialect, Document, NodePath, Origin};
pub use registry::{emit_docs, emit_schema, load_default, load_from_file, Registry, RegistryError};
pub use transform::{
    check_roundtrip, to_tbx, to_tei, ConvertError, ConvertOptions, ConvertResult, LossRecord,
    RoundTripReport,
};
pub use validate::{validate, validate_datacats, validate_pointers, validate_structure, Validator};
pub use xml::{parse, parse_named, serialize, serialize_to_string, ParseResult};

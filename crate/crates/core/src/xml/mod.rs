//! Reading and writing both dialects as XML.

mod parse;
mod serialize;

use thiserror::Error;

pub use parse::{detect_dialect, parse, parse_named, ParseResult};
pub use serialize::{serialize, serialize_to_string, SerializeError};

/// Namespace of every TBX element.
pub const TBX_NS: &str = "http://www.tbx.org";
/// Namespace of TEI elements; the blend takes `term`, `ref`, `hi`,
/// `foreign` (and `bibl`) from here.
pub const TEI_NS: &str = "http://www.tei-c.org/ns/1.0";
pub const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";
/// Prefix given to TEI elements inside entries on output.
pub const TEI_PREFIX: &str = "tei";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlError {
    #[error("unsupported encoding: {0}")]
    Encoding(String),
    #[error("{line}:{column}: {message}")]
    Malformed {
        line: u32,
        column: u32,
        byte_offset: usize,
        message: String,
    },
}

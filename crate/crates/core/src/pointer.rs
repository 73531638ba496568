//! Identifier census and URI pointer resolution.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Document, NodePath};
use crate::visit::walk;

/// Every `xml:id` in a document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdCensus {
    /// First bearer of each identifier.
    pub ids: BTreeMap<String, NodePath>,
    /// Identifiers declared more than once, in order of first repetition.
    pub duplicates: Vec<String>,
    /// All bearers of each identifier, in document order.
    pub occurrences: BTreeMap<String, Vec<NodePath>>,
}

impl IdCensus {
    pub fn get(&self, id: &str) -> Option<&NodePath> {
        self.ids.get(id)
    }
}

pub fn collect_ids(doc: &Document) -> IdCensus {
    let mut census = IdCensus::default();
    walk(doc, &mut |v| {
        if let Some(id) = &v.node.attrs().id {
            let all = census.occurrences.entry(id.clone()).or_default();
            all.push(v.path.clone());
            if all.len() == 2 {
                census.duplicates.push(id.clone());
            }
            census
                .ids
                .entry(id.clone())
                .or_insert_with(|| v.path.clone());
        }
    });
    census
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed URI reference {0:?}")]
pub struct MalformedUri(pub String);

/// How a pointer target relates to the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Bare fragment naming an element of this document.
    Local(NodePath),
    /// Bare fragment naming no element.
    Dangling(String),
    /// Anything that is not a bare fragment; never dereferenced.
    External,
}

impl Resolution {
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            Resolution::Local(p) => Some(p),
            _ => None,
        }
    }
}

pub fn resolve_pointer(doc: &Document, target: &str) -> Result<Resolution, MalformedUri> {
    resolve_in(&collect_ids(doc), target)
}

/// [`resolve_pointer`] against a precomputed census.
pub fn resolve_in(census: &IdCensus, target: &str) -> Result<Resolution, MalformedUri> {
    if !is_uri_reference(target) {
        return Err(MalformedUri(target.to_string()));
    }
    Ok(match target.strip_prefix('#') {
        Some(id) => match census.get(id) {
            Some(p) => Resolution::Local(p.clone()),
            None => Resolution::Dangling(id.to_string()),
        },
        None => Resolution::External,
    })
}

/// URI-reference syntax check (absolute or relative, IRI characters allowed).
pub fn is_uri_reference(s: &str) -> bool {
    let (before_frag, frag) = match s.split_once('#') {
        Some((a, f)) => (a, Some(f)),
        None => (s, None),
    };
    if let Some(f) = frag {
        if f.contains('#') || !valid_chars(f, true) {
            return false;
        }
    }
    if !valid_chars(before_frag, false) {
        return false;
    }
    // A colon before the first '/', '?' marks a scheme, which must be well formed.
    let head_end = before_frag.find(['/', '?']).unwrap_or(before_frag.len());
    if let Some(colon) = before_frag[..head_end].find(':') {
        let scheme = &before_frag[..colon];
        let mut chars = scheme.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return false;
        }
    }
    true
}

fn valid_chars(s: &str, fragment: bool) -> bool {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'%' {
            if !(bytes.get(i + 1).is_some_and(u8::is_ascii_hexdigit)
                && bytes.get(i + 2).is_some_and(u8::is_ascii_hexdigit))
            {
                return false;
            }
            i += 3;
            continue;
        }
        let ok = b >= 0x80
            || b.is_ascii_alphanumeric()
            || b"-._~!$&'()*+,;=:@/?".contains(&b)
            || (!fragment && (b == b'[' || b == b']'));
        if !ok {
            return false;
        }
        i += 1;
    }
    true
}

/// Bare fragment targets (`#X`) yield `X`.
pub fn fragment_id(target: &str) -> Option<&str> {
    target.strip_prefix('#')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn doc_with_ids(entry_id: &str, note_id: &str) -> Document {
        let mut note = Note::new("n");
        note.attrs.id = Some(note_id.to_string());
        let tig = TermSection {
            attrs: GlobalAttrs::with_id("t1"),
            children: vec![TigChild::Term(Term::new(Origin::Tbx, "x"))],
        };
        let entry = TermEntry {
            attrs: GlobalAttrs::with_id(entry_id),
            children: vec![
                EntryChild::Aux(AuxItem::Note(note)),
                EntryChild::LangSet(LangSet {
                    attrs: GlobalAttrs::with_lang("en"),
                    children: vec![LangSetChild::Tig(tig)],
                }),
            ],
        };
        Document::with_entries(Dialect::MainstreamTbx, vec![entry])
    }

    #[test]
    fn census_single_and_empty() {
        let doc = doc_with_ids("e1", "n1");
        let c = collect_ids(&doc);
        assert_eq!(
            c.get("t1").unwrap().as_str(),
            "/termEntry[1]/langSet[1]/tig[1]"
        );
        assert!(c.duplicates.is_empty());
        assert!(collect_ids(&Document::new(Dialect::TeiBlend))
            .ids
            .is_empty());
    }

    #[test]
    fn census_duplicates_keep_first() {
        let doc = doc_with_ids("e1", "e1");
        let c = collect_ids(&doc);
        assert_eq!(c.get("e1").unwrap().as_str(), "/termEntry[1]");
        assert_eq!(c.duplicates, vec!["e1".to_string()]);
        assert_eq!(c.occurrences["e1"].len(), 2);
    }

    #[test]
    fn resolution_classes() {
        let doc = doc_with_ids("e1", "n1");
        assert_eq!(
            resolve_pointer(&doc, "#t1")
                .unwrap()
                .path()
                .unwrap()
                .as_str(),
            "/termEntry[1]/langSet[1]/tig[1]"
        );
        assert_eq!(
            resolve_pointer(&doc, "http://example.org/x").unwrap(),
            Resolution::External
        );
        assert_eq!(
            resolve_pointer(&doc, "#missing").unwrap(),
            Resolution::Dangling("missing".into())
        );
        assert_eq!(
            resolve_pointer(&doc, "a b").unwrap_err(),
            MalformedUri("a b".into())
        );
    }

    #[test]
    fn uri_syntax() {
        for ok in [
            "#t1",
            "E12",
            "http://astm.org/E284",
            "../x/y.xml#frag",
            "urn:isbn:0451450523",
            "mailto:a@b.c",
            "caf%C3%A9",
            "München",
            "",
        ] {
            assert!(is_uri_reference(ok), "{ok}");
        }
        for bad in ["a b", "#a#b", "1http://x", "%zz", "%4", "a<b", "\"q\""] {
            assert!(!is_uri_reference(bad), "{bad}");
        }
    }
}

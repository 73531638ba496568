//! Registry-driven validation: structure, data categories and pointers.

use std::collections::{BTreeMap, HashMap};

use chrono::NaiveDate;

use crate::diagnostics::{Code, Diagnostic, ValidationReport};
use crate::model::*;
use crate::pointer::{collect_ids, resolve_in, Resolution};
use crate::registry::{Datatype, Host, Matcher, Registry, RegistryError, Token};
use crate::visit::{walk, Child, NodeRef};

/// A registry compiled once for any number of documents.
#[derive(Debug, Clone)]
pub struct Validator {
    registry: Registry,
    matchers: BTreeMap<String, Matcher>,
}

impl Validator {
    pub fn new(reg: &Registry) -> Result<Self, RegistryError> {
        Ok(Validator {
            registry: reg.resolve()?,
            matchers: reg.compile()?,
        })
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// Content models, namespaces, `xml:lang`, native-code pairing.
    pub fn structure(&self, doc: &Document) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if doc.entries.is_empty() {
            out.push(Diagnostic::new(
                Code::EmptyDocument,
                NodePath::root(),
                "no entries",
            ));
        }
        walk(doc, &mut |v| {
            let node = v.node;
            let name = node.name();
            let lookup = if name == "xref" { "ref" } else { name };
            let Some(spec) = self.registry.element(lookup) else {
                out.push(Diagnostic::new(
                    Code::UnknownElement,
                    v.path.clone(),
                    format!("<{name}> is not declared by the registry"),
                ));
                return;
            };

            if let Some(msg) = namespace_problem(doc.dialect, node, spec.namespace) {
                out.push(Diagnostic::new(Code::UnknownNamespace, v.path.clone(), msg));
            }

            let tokens = child_tokens(node);
            let matcher = &self.matchers[lookup];
            if !matcher.accepts(tokens.iter().copied()) {
                let seq: Vec<&str> = tokens
                    .iter()
                    .map(|t| match t {
                        Token::Elem(n) => *n,
                        Token::Text => "#text",
                    })
                    .collect();
                out.push(Diagnostic::new(
                    Code::ContentModel,
                    v.path.clone(),
                    format!(
                        "children ({}) of <{name}> do not match {lookup} = {}",
                        seq.join(", "),
                        matcher.rule()
                    ),
                ));
            }

            let attrs = node.attrs();
            match (&node, &attrs.lang) {
                (NodeRef::LangSet(_), None) => out.push(Diagnostic::new(
                    Code::MissingLang,
                    v.path.clone(),
                    "langSet without xml:lang",
                )),
                (_, Some(lang)) if !is_lang_tag(lang) => out.push(Diagnostic::new(
                    Code::MissingLang,
                    v.path.clone(),
                    format!("malformed xml:lang {lang:?}"),
                )),
                _ => {}
            }

            match node {
                NodeRef::Entry(e) => duplicate_languages(e, v.path, &mut out),
                NodeRef::Inline(_) => {}
                _ => {
                    if let Some(c) = node.own_content() {
                        check_pairing(c, v.path, &mut out);
                    }
                }
            }
        });
        out
    }

    /// Data-category names, levels and values.
    pub fn datacats(&self, doc: &Document) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        walk(doc, &mut |v| {
            if let NodeRef::Member(GroupMember::Date(d)) = v.node {
                if NaiveDate::parse_from_str(d.value.trim(), "%Y-%m-%d").is_err() {
                    out.push(Diagnostic::new(
                        Code::DataValue,
                        v.path.clone(),
                        format!("{:?} is not a YYYY-MM-DD date", d.value),
                    ));
                }
                return;
            }
            let Some(d) = v.node.data_element() else {
                return;
            };
            let Some(host) = Host::from_element(v.node.name()) else {
                return;
            };
            if d.ty.is_empty() {
                out.push(Diagnostic::new(
                    Code::UnknownDataCategory,
                    v.path.clone(),
                    format!("<{host}> without a type"),
                ));
                return;
            }
            let Some(spec) = self.registry.data_cat(host, &d.ty) else {
                out.push(Diagnostic::new(
                    Code::UnknownDataCategory,
                    v.path.clone(),
                    format!("unknown data category {host}/{}", d.ty),
                ));
                return;
            };
            if !spec.levels.contains(&v.level) {
                let allowed: Vec<&str> = spec.levels.iter().map(|l| l.as_str()).collect();
                out.push(Diagnostic::new(
                    Code::DataCategoryLevel,
                    v.path.clone(),
                    format!(
                        "{host}/{} used at {} level; allowed: {}",
                        d.ty,
                        v.level.as_str(),
                        allowed.join(", ")
                    ),
                ));
            }
            if let Datatype::Picklist(values) = &spec.datatype {
                let value = d.content.plain_text();
                if !values.iter().any(|p| p == value.trim()) {
                    out.push(Diagnostic::new(
                        Code::DataValue,
                        v.path.clone(),
                        format!(
                            "{:?} is not a permitted {} value ({})",
                            value.trim(),
                            d.ty,
                            values.join(", ")
                        ),
                    ));
                }
            }
        });
        out
    }

    pub fn validate(&self, doc: &Document) -> ValidationReport {
        let mut diags = self.structure(doc);
        diags.extend(self.datacats(doc));
        diags.extend(validate_pointers(doc));
        ValidationReport::new(diags)
    }
}

fn namespace_problem(dialect: Dialect, node: NodeRef, declared: Origin) -> Option<String> {
    let name = node.name();
    match (dialect, node.origin()) {
        (Dialect::MainstreamTbx, Origin::Tei) => {
            Some(format!("TEI <{name}> in a MainstreamTBX document"))
        }
        (Dialect::TeiBlend, Origin::Tbx) if declared == Origin::Tei || name == "xref" => Some(
            format!("<{name}> must be the TEI element in a TeiBlend document"),
        ),
        _ => None,
    }
}

fn child_tokens<'a>(node: NodeRef<'a>) -> Vec<Token<'a>> {
    let mut tokens = Vec::new();
    for c in node.children() {
        match c {
            Child::Text("") => {}
            Child::Text(_) => {
                if tokens.last() != Some(&Token::Text) {
                    tokens.push(Token::Text);
                }
            }
            Child::Node(n) => tokens.push(Token::Elem(match n.name() {
                "xref" => "ref",
                other => other,
            })),
        }
    }
    tokens
}

fn duplicate_languages(e: &TermEntry, path: &NodePath, out: &mut Vec<Diagnostic>) {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (k, ls) in e.lang_sets().enumerate() {
        let Some(lang) = ls.lang() else { continue };
        let key = lang.to_ascii_lowercase();
        if let Some(first) = seen.get(&key) {
            out.push(Diagnostic::new(
                Code::DuplicateLanguage,
                path.child("langSet", k + 1),
                format!(
                    "second langSet for {lang:?} (first is langSet[{}])",
                    first + 1
                ),
            ));
        } else {
            seen.insert(key, k);
        }
    }
}

/// Every `bpt` needs a later `ept` with the same `i` within one element's
/// content, and vice versa.
fn check_pairing(content: &MixedContent, path: &NodePath, out: &mut Vec<Diagnostic>) {
    let mut events = Vec::new();
    collect_codes(content, &mut events);
    let mut open: Vec<&str> = Vec::new();
    let mut problems = Vec::new();
    for (is_begin, i) in events {
        match (is_begin, i) {
            (_, None) => problems.push(format!(
                "<{}> without @i",
                if is_begin { "bpt" } else { "ept" }
            )),
            (true, Some(i)) => open.push(i),
            (false, Some(i)) => match open.iter().rposition(|o| *o == i) {
                Some(pos) => {
                    open.remove(pos);
                }
                None => problems.push(format!("<ept i={i:?}> without matching bpt")),
            },
        }
    }
    problems.extend(
        open.iter()
            .map(|i| format!("<bpt i={i:?}> without matching ept")),
    );
    for p in problems {
        out.push(Diagnostic::new(Code::ContentModel, path.clone(), p));
    }
}

fn collect_codes<'a>(content: &'a MixedContent, out: &mut Vec<(bool, Option<&'a str>)>) {
    for node in content.nodes() {
        match node {
            Inline::Bpt(m) => out.push((true, m.i.as_deref())),
            Inline::Ept(m) => out.push((false, m.i.as_deref())),
            other => {
                if let Some(c) = other.content() {
                    collect_codes(c, out);
                }
            }
        }
    }
}

pub fn validate_structure(
    doc: &Document,
    reg: &Registry,
) -> Result<Vec<Diagnostic>, RegistryError> {
    Ok(Validator::new(reg)?.structure(doc))
}

pub fn validate_datacats(doc: &Document, reg: &Registry) -> Result<Vec<Diagnostic>, RegistryError> {
    Ok(Validator::new(reg)?.datacats(doc))
}

/// Identifier uniqueness and pointer targets. In MainstreamTBX documents a
/// TBX `ref` or `hi` whose target is a bare NCName is read as an IDREF.
pub fn validate_pointers(doc: &Document) -> Vec<Diagnostic> {
    let census = collect_ids(doc);
    let mut out = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    walk(doc, &mut |v| {
        let node = v.node;
        if let Some(id) = &node.attrs().id {
            if !is_ncname(id) {
                out.push(Diagnostic::new(
                    Code::DuplicateId,
                    v.path.clone(),
                    format!("xml:id {id:?} is not an NCName"),
                ));
            }
            let count = seen.entry(id.clone()).or_insert(0);
            *count += 1;
            if *count == 2 {
                let all: Vec<String> = census.occurrences[id]
                    .iter()
                    .map(|p| p.to_string())
                    .collect();
                out.push(Diagnostic::new(
                    Code::DuplicateId,
                    v.path.clone(),
                    format!(
                        "xml:id {id:?} declared {} times: {}",
                        all.len(),
                        all.join(", ")
                    ),
                ));
            }
        }
        let Some(target) = node.target() else { return };
        let legacy = doc.dialect == Dialect::MainstreamTbx
            && node.origin() == Origin::Tbx
            && node.name() != "xref"
            && is_ncname(target);
        if legacy {
            if census.get(target).is_none() {
                out.push(Diagnostic::new(
                    Code::DanglingPointer,
                    v.path.clone(),
                    format!("IDREF {target:?} names no element"),
                ));
            }
            return;
        }
        match resolve_in(&census, target) {
            Err(e) => out.push(Diagnostic::new(
                Code::DanglingPointer,
                v.path.clone(),
                e.to_string(),
            )),
            Ok(Resolution::Local(_)) => {}
            Ok(Resolution::Dangling(id)) => out.push(Diagnostic::new(
                Code::DanglingPointer,
                v.path.clone(),
                format!("fragment #{id} names no element"),
            )),
            Ok(Resolution::External) => out.push(Diagnostic::new(
                Code::ExternalPointer,
                v.path.clone(),
                format!("external target {target:?} not checked"),
            )),
        }
    });
    out
}

pub fn validate(doc: &Document, reg: &Registry) -> Result<ValidationReport, RegistryError> {
    Ok(Validator::new(reg)?.validate(doc))
}

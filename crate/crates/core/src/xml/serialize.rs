use std::fmt::Write as _;

use thiserror::Error;

use super::{TBX_NS, TEI_NS, TEI_PREFIX};
use crate::model::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    /// A node cannot be written in the document's dialect.
    #[error("{path}: {message}")]
    Unrepresentable { path: NodePath, message: String },
}

pub fn serialize(doc: &Document) -> Result<Vec<u8>, SerializeError> {
    serialize_to_string(doc).map(String::into_bytes)
}

/// Writes `doc` as indented UTF-8 XML. A single entry without a base URI
/// becomes the root element; anything else is wrapped in `martif` (TBX) or
/// `TEI` (blend).
pub fn serialize_to_string(doc: &Document) -> Result<String, SerializeError> {
    let blend = doc.dialect == Dialect::TeiBlend;
    let mut w = Writer {
        out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
        blend,
    };
    let entry_decls = if blend {
        format!(" xmlns=\"{TBX_NS}\" xmlns:{TEI_PREFIX}=\"{TEI_NS}\"")
    } else {
        format!(" xmlns=\"{TBX_NS}\"")
    };
    let mut sib = Siblings::default();
    if doc.entries.len() == 1 && doc.base_uri.is_none() {
        let path = sib.next(&NodePath::root(), "termEntry");
        w.entry(&doc.entries[0], &path, 0, &entry_decls)?;
        return Ok(w.out);
    }
    let (root, root_ns, inner_decls) = if blend {
        ("TEI", TEI_NS, entry_decls.as_str())
    } else {
        ("martif", TBX_NS, "")
    };
    let _ = write!(w.out, "<{root} xmlns=\"{root_ns}\"");
    if let Some(base) = &doc.base_uri {
        let _ = write!(w.out, " xml:base=\"{}\"", escape_attr(base));
    }
    w.out.push_str(">\n  <text>\n    <body>\n");
    for e in &doc.entries {
        let path = sib.next(&NodePath::root(), "termEntry");
        w.entry(e, &path, 3, inner_decls)?;
    }
    let _ = write!(w.out, "    </body>\n  </text>\n</{root}>\n");
    Ok(w.out)
}

struct Writer {
    out: String,
    blend: bool,
}

#[derive(Default)]
struct Extra<'a> {
    decls: &'a str,
    ty: Option<&'a str>,
    target: Option<&'a str>,
    i: Option<&'a str>,
}

impl Writer {
    fn indent(&mut self, level: usize) {
        for _ in 0..level {
            self.out.push_str("  ");
        }
    }

    fn qname(&self, origin: Origin, name: &str, path: &NodePath) -> Result<String, SerializeError> {
        match origin {
            Origin::Tbx => Ok(name.to_string()),
            Origin::Tei if self.blend => Ok(format!("{TEI_PREFIX}:{name}")),
            Origin::Tei => Err(SerializeError::Unrepresentable {
                path: path.clone(),
                message: format!("TEI <{name}> cannot appear in a MainstreamTBX document"),
            }),
        }
    }

    fn start_tag(
        &mut self,
        qname: &str,
        attrs: &GlobalAttrs,
        extra: Extra,
        path: &NodePath,
    ) -> Result<(), SerializeError> {
        let _ = write!(self.out, "<{qname}{}", extra.decls);
        let mut first: Vec<(&str, &str)> = Vec::new();
        if let Some(v) = &attrs.id {
            first.push(("xml:id", v));
        }
        if let Some(v) = &attrs.lang {
            first.push(("xml:lang", v));
        }
        if let Some(v) = extra.ty {
            first.push(("type", v));
        }
        if let Some(v) = extra.target {
            first.push(("target", v));
        }
        let mut rest: Vec<(&str, &str)> = Vec::new();
        if let Some(v) = &attrs.base {
            rest.push(("xml:base", v));
        }
        if let Some(v) = attrs.space {
            rest.push(("xml:space", v.as_str()));
        }
        if let Some(v) = &attrs.n {
            rest.push(("n", v));
        }
        if let Some(v) = &attrs.rend {
            rest.push(("rend", v));
        }
        if let Some(v) = extra.i {
            rest.push(("i", v));
        }
        for (k, v) in &attrs.other {
            if rest.iter().chain(&first).any(|(n, _)| n == k) {
                return Err(SerializeError::Unrepresentable {
                    path: path.clone(),
                    message: format!("attribute {k} given twice"),
                });
            }
            rest.push((k, v));
        }
        rest.sort_by(|a, b| a.0.cmp(b.0));
        for (k, v) in first.into_iter().chain(rest) {
            check_chars(v, path)?;
            let _ = write!(self.out, " {k}=\"{}\"", escape_attr(v));
        }
        Ok(())
    }

    fn entry(
        &mut self,
        e: &TermEntry,
        path: &NodePath,
        level: usize,
        decls: &str,
    ) -> Result<(), SerializeError> {
        self.indent(level);
        let extra = Extra {
            decls,
            ..Default::default()
        };
        self.start_tag("termEntry", &e.attrs, extra, path)?;
        if e.children.is_empty() {
            self.out.push_str("/>\n");
            return Ok(());
        }
        self.out.push_str(">\n");
        let mut sib = Siblings::default();
        for c in &e.children {
            let p = sib.next(path, c.name());
            match c {
                EntryChild::Aux(a) => self.aux(a, &p, level + 1)?,
                EntryChild::LangSet(l) => self.lang_set(l, &p, level + 1)?,
            }
        }
        self.indent(level);
        self.out.push_str("</termEntry>\n");
        Ok(())
    }

    fn lang_set(
        &mut self,
        l: &LangSet,
        path: &NodePath,
        level: usize,
    ) -> Result<(), SerializeError> {
        self.indent(level);
        self.start_tag("langSet", &l.attrs, Extra::default(), path)?;
        if l.children.is_empty() {
            self.out.push_str("/>\n");
            return Ok(());
        }
        self.out.push_str(">\n");
        let mut sib = Siblings::default();
        for c in &l.children {
            let p = sib.next(path, c.name());
            match c {
                LangSetChild::Aux(a) => self.aux(a, &p, level + 1)?,
                LangSetChild::Tig(t) => self.tig(t, &p, level + 1)?,
            }
        }
        self.indent(level);
        self.out.push_str("</langSet>\n");
        Ok(())
    }

    fn tig(
        &mut self,
        t: &TermSection,
        path: &NodePath,
        level: usize,
    ) -> Result<(), SerializeError> {
        self.indent(level);
        self.start_tag("tig", &t.attrs, Extra::default(), path)?;
        if t.children.is_empty() {
            self.out.push_str("/>\n");
            return Ok(());
        }
        self.out.push_str(">\n");
        let mut sib = Siblings::default();
        for c in &t.children {
            let p = sib.next(path, c.name());
            match c {
                TigChild::Term(term) => {
                    self.indent(level + 1);
                    let q = self.qname(term.origin, "term", &p)?;
                    self.element(&q, &term.attrs, Extra::default(), &term.content, &p)?;
                    self.out.push('\n');
                }
                TigChild::TermNote(d) => self.data_line("termNote", d, &p, level + 1)?,
                TigChild::Aux(a) => self.aux(a, &p, level + 1)?,
            }
        }
        self.indent(level);
        self.out.push_str("</tig>\n");
        Ok(())
    }

    fn data_line(
        &mut self,
        name: &str,
        d: &DataElement,
        path: &NodePath,
        level: usize,
    ) -> Result<(), SerializeError> {
        self.indent(level);
        let extra = Extra {
            ty: Some(d.ty.as_str()).filter(|t| !t.is_empty()),
            ..Default::default()
        };
        self.element(name, &d.attrs, extra, &d.content, path)?;
        self.out.push('\n');
        Ok(())
    }

    fn aux(&mut self, a: &AuxItem, path: &NodePath, level: usize) -> Result<(), SerializeError> {
        match a {
            AuxItem::Admin(d) => self.data_line("admin", d, path, level),
            AuxItem::Descrip(d) => self.data_line("descrip", d, path, level),
            AuxItem::DescripGrp(g) => self.group("descripGrp", g, path, level),
            AuxItem::TransacGrp(g) => self.group("transacGrp", g, path, level),
            AuxItem::Note(n) => {
                self.indent(level);
                self.note(n, path)?;
                self.out.push('\n');
                Ok(())
            }
            AuxItem::Ref(p) => {
                self.indent(level);
                self.pointer(p, path)?;
                self.out.push('\n');
                Ok(())
            }
        }
    }

    fn group(
        &mut self,
        name: &str,
        g: &Group,
        path: &NodePath,
        level: usize,
    ) -> Result<(), SerializeError> {
        self.indent(level);
        self.start_tag(name, &g.attrs, Extra::default(), path)?;
        if g.members.is_empty() {
            self.out.push_str("/>\n");
            return Ok(());
        }
        self.out.push_str(">\n");
        let mut sib = Siblings::default();
        for m in &g.members {
            let p = sib.next(path, m.name());
            match m {
                GroupMember::Descrip(d) => self.data_line("descrip", d, &p, level + 1)?,
                GroupMember::Admin(d) => self.data_line("admin", d, &p, level + 1)?,
                GroupMember::Transac(d) => self.data_line("transac", d, &p, level + 1)?,
                GroupMember::TransacNote(d) => self.data_line("transacNote", d, &p, level + 1)?,
                GroupMember::Date(d) => {
                    self.indent(level + 1);
                    self.start_tag("date", &d.attrs, Extra::default(), &p)?;
                    self.close_text("date", &d.value, &p)?;
                    self.out.push('\n');
                }
                GroupMember::Note(n) => {
                    self.indent(level + 1);
                    self.note(n, &p)?;
                    self.out.push('\n');
                }
                GroupMember::Ref(r) => {
                    self.indent(level + 1);
                    self.pointer(r, &p)?;
                    self.out.push('\n');
                }
            }
        }
        self.indent(level);
        let _ = writeln!(self.out, "</{name}>");
        Ok(())
    }

    fn note(&mut self, n: &Note, path: &NodePath) -> Result<(), SerializeError> {
        let q = self.qname(n.origin, "note", path)?;
        self.element(&q, &n.attrs, Extra::default(), &n.content, path)
    }

    fn pointer(&mut self, p: &Pointer, path: &NodePath) -> Result<(), SerializeError> {
        let q = self.qname(p.flavor.origin(), p.flavor.name(), path)?;
        let extra = Extra {
            ty: p.ty.as_deref(),
            target: p.target.as_deref(),
            ..Default::default()
        };
        self.element(&q, &p.attrs, extra, &p.content, path)
    }

    /// Element with mixed content, written inline.
    fn element(
        &mut self,
        qname: &str,
        attrs: &GlobalAttrs,
        extra: Extra,
        content: &MixedContent,
        path: &NodePath,
    ) -> Result<(), SerializeError> {
        self.start_tag(qname, attrs, extra, path)?;
        if content.is_empty() {
            self.out.push_str("/>");
            return Ok(());
        }
        self.out.push('>');
        self.mixed(content, path)?;
        let _ = write!(self.out, "</{qname}>");
        Ok(())
    }

    /// Finishes an open start tag with text-only content.
    fn close_text(
        &mut self,
        qname: &str,
        text: &str,
        path: &NodePath,
    ) -> Result<(), SerializeError> {
        if text.is_empty() {
            self.out.push_str("/>");
        } else {
            check_chars(text, path)?;
            let _ = write!(self.out, ">{}</{qname}>", escape_text(text));
        }
        Ok(())
    }

    fn mixed(&mut self, content: &MixedContent, path: &NodePath) -> Result<(), SerializeError> {
        let mut sib = Siblings::default();
        for node in content.nodes() {
            let Some(name) = node.name() else {
                if let Inline::Text(t) = node {
                    check_chars(t, path)?;
                    self.out.push_str(&escape_text(t));
                }
                continue;
            };
            let p = sib.next(path, name);
            match node {
                Inline::Text(_) => unreachable!(),
                Inline::Hi(h) => {
                    if h.origin == Origin::Tei && h.target.is_some() {
                        return Err(SerializeError::Unrepresentable {
                            path: p,
                            message: "TEI <hi> cannot carry a target".into(),
                        });
                    }
                    let q = self.qname(h.origin, "hi", &p)?;
                    let extra = Extra {
                        target: h.target.as_deref(),
                        ..Default::default()
                    };
                    self.element(&q, &h.attrs, extra, &h.content, &p)?;
                }
                Inline::Foreign(f) => {
                    let q = self.qname(f.origin, "foreign", &p)?;
                    self.element(&q, &f.attrs, Extra::default(), &f.content, &p)?;
                }
                Inline::Ref(r) => self.pointer(r, &p)?,
                Inline::Bibl(b) => {
                    let q = self.qname(Origin::Tei, "bibl", &p)?;
                    self.element(&q, &b.attrs, Extra::default(), &b.content, &p)?;
                }
                Inline::Bpt(m) | Inline::Ept(m) | Inline::Ph(m) => {
                    let extra = Extra {
                        i: m.i.as_deref(),
                        ..Default::default()
                    };
                    self.start_tag(name, &m.attrs, extra, &p)?;
                    self.close_text(name, &m.content, &p)?;
                }
            }
        }
        Ok(())
    }
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

fn check_chars(s: &str, path: &NodePath) -> Result<(), SerializeError> {
    match s.chars().find(|c| !is_xml_char(*c)) {
        None => Ok(()),
        Some(c) => Err(SerializeError::Unrepresentable {
            path: path.clone(),
            message: format!("character U+{:04X} is not allowed in XML", c as u32),
        }),
    }
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

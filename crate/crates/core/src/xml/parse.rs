use roxmltree::{Node, NodeType};

use super::{XmlError, TBX_NS, TEI_NS, XML_NS};
use crate::diagnostics::{Code, Diagnostic, SourceLocation, SourceMap};
use crate::model::*;

/// Outcome of [`parse`]. `document` is `None` only after a fatal error,
/// which is then among the diagnostics.
#[derive(Debug, Clone)]
pub struct ParseResult {
    pub document: Option<Document>,
    pub diagnostics: Vec<Diagnostic>,
    pub source_map: SourceMap,
}

impl ParseResult {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

pub fn parse(input: &[u8], dialect_hint: Option<Dialect>) -> ParseResult {
    parse_named("", input, dialect_hint)
}

/// Parses `input`, recording `source_name` on the document.
pub fn parse_named(source_name: &str, input: &[u8], dialect_hint: Option<Dialect>) -> ParseResult {
    let fatal = |e: XmlError| {
        let loc = match &e {
            XmlError::Encoding(_) => SourceLocation {
                line: 1,
                column: 1,
                byte_offset: 0,
            },
            XmlError::Malformed {
                line,
                column,
                byte_offset,
                ..
            } => SourceLocation {
                line: *line,
                column: *column,
                byte_offset: *byte_offset,
            },
        };
        ParseResult {
            document: None,
            diagnostics: vec![
                Diagnostic::new(Code::NotXml, NodePath::root(), e.to_string()).at(Some(loc)),
            ],
            source_map: SourceMap::default(),
        }
    };
    let (text, offset) = match prepare(input) {
        Ok(p) => p,
        Err(e) => return fatal(e),
    };
    let xml = match roxmltree::Document::parse(text) {
        Ok(d) => d,
        Err(e) => return fatal(malformed(text, offset, &e)),
    };

    let dialect = dialect_hint.unwrap_or_else(|| detect(&xml));
    let mut b = Builder {
        xml: &xml,
        offset,
        diags: Vec::new(),
        map: SourceMap::default(),
    };
    let mut doc = Document::new(dialect);
    doc.source_name = source_name.to_string();
    let root = xml.root_element();
    let mut sib = Siblings::default();
    if is_tbx(root, "termEntry") {
        let path = sib.next(&NodePath::root(), "termEntry");
        doc.entries.push(b.entry(root, path));
    } else {
        doc.base_uri = root.attribute((XML_NS, "base")).map(str::to_string);
        b.scan_host(root, &mut sib, &mut doc.entries);
    }
    ParseResult {
        document: Some(doc),
        diagnostics: b.diags,
        source_map: b.map,
    }
}

/// TeiBlend iff some TEI element occurs inside a `termEntry`.
pub fn detect_dialect(input: &[u8]) -> Result<Dialect, XmlError> {
    let (text, offset) = prepare(input)?;
    let xml = roxmltree::Document::parse(text).map_err(|e| malformed(text, offset, &e))?;
    Ok(detect(&xml))
}

fn detect(xml: &roxmltree::Document) -> Dialect {
    let blend = xml
        .descendants()
        .filter(|n| is_tbx(*n, "termEntry"))
        .any(|e| {
            e.descendants()
                .any(|d| d.is_element() && d.tag_name().namespace() == Some(TEI_NS))
        });
    if blend {
        Dialect::TeiBlend
    } else {
        Dialect::MainstreamTbx
    }
}

fn is_tbx(n: Node, name: &str) -> bool {
    n.is_element() && n.tag_name().namespace() == Some(TBX_NS) && n.tag_name().name() == name
}

/// Strips a UTF-8 byte order mark and checks encoding; returns the text and
/// the number of bytes stripped.
fn prepare(input: &[u8]) -> Result<(&str, usize), XmlError> {
    if input.starts_with(&[0xFE, 0xFF]) || input.starts_with(&[0xFF, 0xFE]) {
        return Err(XmlError::Encoding("UTF-16 byte order mark".into()));
    }
    let (body, offset) = match input.strip_prefix(&[0xEF, 0xBB, 0xBF]) {
        Some(rest) => (rest, 3),
        None => (input, 0),
    };
    let text = std::str::from_utf8(body).map_err(|e| {
        let valid = e.valid_up_to();
        // valid_up_to is a char boundary by definition
        let prefix = std::str::from_utf8(&body[..valid]).unwrap_or_default();
        let (line, column) = line_col(prefix);
        XmlError::Malformed {
            line,
            column,
            byte_offset: valid + offset,
            message: "invalid UTF-8 byte sequence".into(),
        }
    })?;
    if let Some(enc) = declared_encoding(text) {
        if !enc.eq_ignore_ascii_case("utf-8") && !enc.eq_ignore_ascii_case("utf8") {
            return Err(XmlError::Encoding(enc.to_string()));
        }
    }
    Ok((text, offset))
}

fn declared_encoding(text: &str) -> Option<&str> {
    let decl = &text[..text.find("?>")?];
    if !decl.starts_with("<?xml") {
        return None;
    }
    let rest = decl[decl.find("encoding")? + "encoding".len()..].trim_start();
    let rest = rest.strip_prefix('=')?.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'')?;
    let rest = &rest[1..];
    Some(&rest[..rest.find(quote)?])
}

fn line_col(prefix: &str) -> (u32, u32) {
    let line = prefix.matches('\n').count() + 1;
    let col = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line as u32, col as u32)
}

fn malformed(text: &str, offset: usize, e: &roxmltree::Error) -> XmlError {
    let pos = e.pos();
    let line_start: usize = text
        .split_inclusive('\n')
        .take(pos.row.saturating_sub(1) as usize)
        .map(str::len)
        .sum();
    let in_line: usize = text[line_start.min(text.len())..]
        .chars()
        .take(pos.col.saturating_sub(1) as usize)
        .map(char::len_utf8)
        .sum();
    XmlError::Malformed {
        line: pos.row,
        column: pos.col,
        byte_offset: (line_start + in_line).min(text.len()) + offset,
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Kind {
    name: &'static str,
    origin: Origin,
}

const TBX_NAMES: &[&str] = &[
    "termEntry",
    "langSet",
    "tig",
    "term",
    "termNote",
    "admin",
    "descrip",
    "descripGrp",
    "transacGrp",
    "transac",
    "transacNote",
    "date",
    "note",
    "ref",
    "xref",
    "hi",
    "foreign",
    "bpt",
    "ept",
    "ph",
];

const TEI_NAMES: &[&str] = &["term", "ref", "hi", "foreign", "note", "bibl"];

const AUX_NAMES: &[&str] = &[
    "admin",
    "descrip",
    "descripGrp",
    "transacGrp",
    "note",
    "ref",
    "xref",
];

#[derive(Default)]
struct Special {
    ty: Option<String>,
    target: Option<String>,
    i: Option<String>,
}

struct Builder<'a, 'input> {
    xml: &'a roxmltree::Document<'input>,
    offset: usize,
    diags: Vec<Diagnostic>,
    map: SourceMap,
}

impl<'a, 'input> Builder<'a, 'input> {
    fn loc(&self, node: Node) -> SourceLocation {
        let start = node.range().start;
        let pos = self.xml.text_pos_at(start);
        SourceLocation {
            line: pos.row,
            column: pos.col,
            byte_offset: start + self.offset,
        }
    }

    fn report(&mut self, code: Code, path: NodePath, node: Node, message: String) {
        let d = Diagnostic::new(code, path, message).at(Some(self.loc(node)));
        self.diags.push(d);
    }

    /// Path for an element that is not kept in the model.
    fn stray_path(parent: &NodePath, node: Node) -> NodePath {
        let local = node.tag_name().name();
        let k = 1 + node
            .prev_siblings()
            .skip(1)
            .filter(|s| s.is_element() && s.tag_name().name() == local)
            .count();
        parent.child(local, k)
    }

    fn scan_host(&mut self, node: Node<'a, 'input>, sib: &mut Siblings, out: &mut Vec<TermEntry>) {
        for child in node.children().filter(Node::is_element) {
            if is_tbx(child, "termEntry") {
                let path = sib.next(&NodePath::root(), "termEntry");
                out.push(self.entry(child, path));
            } else if child.tag_name().name() == "termEntry" {
                let ns = child.tag_name().namespace().unwrap_or("");
                self.report(
                    Code::UnknownNamespace,
                    NodePath::root(),
                    child,
                    format!("termEntry in namespace {ns:?} is not a TBX entry"),
                );
            } else {
                self.scan_host(child, sib, out);
            }
        }
    }

    fn classify(&mut self, node: Node, parent: &NodePath) -> Option<Kind> {
        let tag = node.tag_name();
        let (names, origin) = match tag.namespace() {
            Some(TBX_NS) => (TBX_NAMES, Origin::Tbx),
            Some(TEI_NS) => (TEI_NAMES, Origin::Tei),
            ns => {
                let path = Self::stray_path(parent, node);
                let ns = ns.unwrap_or("");
                self.report(
                    Code::UnknownNamespace,
                    path,
                    node,
                    format!(
                        "element <{}> in unknown namespace {ns:?} skipped",
                        tag.name()
                    ),
                );
                return None;
            }
        };
        match names.iter().find(|n| **n == tag.name()) {
            Some(name) => Some(Kind { name, origin }),
            None => {
                let path = Self::stray_path(parent, node);
                self.report(
                    Code::UnknownElement,
                    path,
                    node,
                    format!("unknown element <{}> skipped with its content", tag.name()),
                );
                None
            }
        }
    }

    fn misplaced(&mut self, node: Node, parent: &NodePath, parent_name: &str) {
        let path = Self::stray_path(parent, node);
        self.report(
            Code::ContentModel,
            path,
            node,
            format!(
                "<{}> is not allowed inside <{parent_name}>; skipped",
                node.tag_name().name()
            ),
        );
    }

    /// Known element children of a structural element. Stray character
    /// data is reported; whitespace is dropped.
    fn structural_children(
        &mut self,
        node: Node<'a, 'input>,
        path: &NodePath,
        name: &str,
    ) -> Vec<(Node<'a, 'input>, Kind)> {
        let mut out = Vec::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Text => {
                    let t = child.text().unwrap_or("");
                    if !t.trim().is_empty() {
                        self.report(
                            Code::ContentModel,
                            path.clone(),
                            child,
                            format!("character data {:?} not allowed in <{name}>", t.trim()),
                        );
                    }
                }
                NodeType::Element => {
                    if let Some(kind) = self.classify(child, path) {
                        out.push((child, kind));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn attrs(&mut self, node: Node, special: &[&str]) -> (GlobalAttrs, Special) {
        let mut g = GlobalAttrs::default();
        let mut s = Special::default();
        for a in node.attributes() {
            let value = a.value().to_string();
            match a.namespace() {
                Some(XML_NS) => match a.name() {
                    "id" => g.id = Some(value),
                    "lang" => g.lang = Some(value),
                    "base" => g.base = Some(value),
                    "space" => match value.as_str() {
                        "default" => g.space = Some(XmlSpace::Default),
                        "preserve" => g.space = Some(XmlSpace::Preserve),
                        _ => {
                            g.other.insert("xml:space".into(), value);
                        }
                    },
                    other => {
                        g.other.insert(format!("xml:{other}"), value);
                    }
                },
                // attributes from other vocabularies are not modelled
                Some(_) => {}
                None => match a.name() {
                    name if special.contains(&name) => match name {
                        "type" => s.ty = Some(value),
                        "target" => s.target = Some(value),
                        "i" => s.i = Some(value),
                        _ => unreachable!(),
                    },
                    "n" => g.n = Some(value),
                    "rend" => g.rend = Some(value),
                    other => {
                        g.other.insert(other.to_string(), value);
                    }
                },
            }
        }
        (g, s)
    }

    fn entry(&mut self, node: Node<'a, 'input>, path: NodePath) -> TermEntry {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, _) = self.attrs(node, &[]);
        let mut sib = Siblings::default();
        let mut children = Vec::new();
        for (child, kind) in self.structural_children(node, &path, "termEntry") {
            if kind
                == (Kind {
                    name: "langSet",
                    origin: Origin::Tbx,
                })
            {
                let p = sib.next(&path, "langSet");
                children.push(EntryChild::LangSet(self.lang_set(child, p)));
            } else if let Some(a) = self.aux(child, kind, &path, &mut sib) {
                children.push(EntryChild::Aux(a));
            } else {
                self.misplaced(child, &path, "termEntry");
            }
        }
        TermEntry { attrs, children }
    }

    fn lang_set(&mut self, node: Node<'a, 'input>, path: NodePath) -> LangSet {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, _) = self.attrs(node, &[]);
        let mut sib = Siblings::default();
        let mut children = Vec::new();
        for (child, kind) in self.structural_children(node, &path, "langSet") {
            if kind
                == (Kind {
                    name: "tig",
                    origin: Origin::Tbx,
                })
            {
                let p = sib.next(&path, "tig");
                children.push(LangSetChild::Tig(self.tig(child, p)));
            } else if let Some(a) = self.aux(child, kind, &path, &mut sib) {
                children.push(LangSetChild::Aux(a));
            } else {
                self.misplaced(child, &path, "langSet");
            }
        }
        LangSet { attrs, children }
    }

    fn tig(&mut self, node: Node<'a, 'input>, path: NodePath) -> TermSection {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, _) = self.attrs(node, &[]);
        let mut sib = Siblings::default();
        let mut children = Vec::new();
        for (child, kind) in self.structural_children(node, &path, "tig") {
            match kind.name {
                "term" => {
                    let p = sib.next(&path, "term");
                    self.map.insert(p.clone(), self.loc(child));
                    let (attrs, _) = self.attrs(child, &[]);
                    let content = self.mixed(child, &p);
                    children.push(TigChild::Term(Term {
                        origin: kind.origin,
                        attrs,
                        content,
                    }));
                }
                "termNote" if kind.origin == Origin::Tbx => {
                    let p = sib.next(&path, "termNote");
                    children.push(TigChild::TermNote(self.data_element(child, &p)));
                }
                _ => match self.aux(child, kind, &path, &mut sib) {
                    Some(a) => children.push(TigChild::Aux(a)),
                    None => self.misplaced(child, &path, "tig"),
                },
            }
        }
        TermSection { attrs, children }
    }

    fn aux(
        &mut self,
        node: Node<'a, 'input>,
        kind: Kind,
        parent: &NodePath,
        sib: &mut Siblings,
    ) -> Option<AuxItem> {
        if !AUX_NAMES.contains(&kind.name)
            || (kind.origin == Origin::Tei && !matches!(kind.name, "note" | "ref"))
        {
            return None;
        }
        let path = sib.next(parent, kind.name);
        Some(match kind.name {
            "admin" => AuxItem::Admin(self.data_element(node, &path)),
            "descrip" => AuxItem::Descrip(self.data_element(node, &path)),
            "descripGrp" => AuxItem::DescripGrp(self.group(node, &path)),
            "transacGrp" => AuxItem::TransacGrp(self.group(node, &path)),
            "note" => AuxItem::Note(self.note(node, &path, kind.origin)),
            _ => AuxItem::Ref(self.pointer(node, &path, flavor(kind))),
        })
    }

    fn group(&mut self, node: Node<'a, 'input>, path: &NodePath) -> Group {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, _) = self.attrs(node, &[]);
        let name = node.tag_name().name().to_string();
        let mut sib = Siblings::default();
        let mut members = Vec::new();
        for (child, kind) in self.structural_children(node, path, &name) {
            let tbx = kind.origin == Origin::Tbx;
            let member = match kind.name {
                "descrip" | "admin" | "transac" | "transacNote" if tbx => {
                    let p = sib.next(path, kind.name);
                    let d = self.data_element(child, &p);
                    match kind.name {
                        "descrip" => GroupMember::Descrip(d),
                        "admin" => GroupMember::Admin(d),
                        "transac" => GroupMember::Transac(d),
                        _ => GroupMember::TransacNote(d),
                    }
                }
                "date" if tbx => {
                    let p = sib.next(path, "date");
                    self.map.insert(p.clone(), self.loc(child));
                    let (attrs, _) = self.attrs(child, &[]);
                    let value = self.text_only(child, &p);
                    GroupMember::Date(DateItem { attrs, value })
                }
                "note" => {
                    let p = sib.next(path, "note");
                    GroupMember::Note(self.note(child, &p, kind.origin))
                }
                "ref" | "xref" => {
                    let p = sib.next(path, kind.name);
                    GroupMember::Ref(self.pointer(child, &p, flavor(kind)))
                }
                _ => {
                    self.misplaced(child, path, &name);
                    continue;
                }
            };
            members.push(member);
        }
        Group { attrs, members }
    }

    fn data_element(&mut self, node: Node<'a, 'input>, path: &NodePath) -> DataElement {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, s) = self.attrs(node, &["type"]);
        DataElement {
            ty: s.ty.unwrap_or_default(),
            attrs,
            content: self.mixed(node, path),
        }
    }

    fn note(&mut self, node: Node<'a, 'input>, path: &NodePath, origin: Origin) -> Note {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, _) = self.attrs(node, &[]);
        Note {
            origin,
            attrs,
            content: self.mixed(node, path),
        }
    }

    fn pointer(&mut self, node: Node<'a, 'input>, path: &NodePath, flavor: RefFlavor) -> Pointer {
        self.map.insert(path.clone(), self.loc(node));
        let (attrs, s) = self.attrs(node, &["target", "type"]);
        Pointer {
            flavor,
            attrs,
            target: s.target,
            ty: s.ty,
            content: self.mixed(node, path),
        }
    }

    fn mixed(&mut self, node: Node<'a, 'input>, path: &NodePath) -> MixedContent {
        let parent_name = node.tag_name().name();
        let mut content = MixedContent::new();
        let mut sib = Siblings::default();
        for child in node.children() {
            match child.node_type() {
                NodeType::Text => content.push_text(child.text().unwrap_or("")),
                NodeType::Element => {
                    let Some(kind) = self.classify(child, path) else {
                        continue;
                    };
                    let inline = matches!(
                        (kind.origin, kind.name),
                        (
                            Origin::Tbx,
                            "hi" | "foreign" | "ref" | "xref" | "bpt" | "ept" | "ph"
                        ) | (Origin::Tei, "hi" | "foreign" | "ref" | "bibl")
                    );
                    if inline {
                        let p = sib.next(path, kind.name);
                        content.push(self.inline(child, kind, &p));
                    } else {
                        self.misplaced(child, path, parent_name);
                    }
                }
                _ => {}
            }
        }
        content
    }

    fn inline(&mut self, node: Node<'a, 'input>, kind: Kind, path: &NodePath) -> Inline {
        match kind.name {
            "ref" | "xref" => return Inline::Ref(self.pointer(node, path, flavor(kind))),
            _ => {}
        }
        self.map.insert(path.clone(), self.loc(node));
        match kind.name {
            "hi" => {
                let special: &[&str] = if kind.origin == Origin::Tbx {
                    &["target"]
                } else {
                    &[]
                };
                let (attrs, s) = self.attrs(node, special);
                Inline::Hi(Hi {
                    origin: kind.origin,
                    attrs,
                    target: s.target,
                    content: self.mixed(node, path),
                })
            }
            "foreign" => {
                let (attrs, _) = self.attrs(node, &[]);
                Inline::Foreign(Foreign {
                    origin: kind.origin,
                    attrs,
                    content: self.mixed(node, path),
                })
            }
            "bibl" => {
                let (attrs, _) = self.attrs(node, &[]);
                Inline::Bibl(Bibl {
                    attrs,
                    content: self.mixed(node, path),
                })
            }
            name => {
                let (attrs, s) = self.attrs(node, &["i"]);
                let m = MetaMarkup {
                    attrs,
                    i: s.i,
                    content: self.text_only(node, path),
                };
                match name {
                    "bpt" => Inline::Bpt(m),
                    "ept" => Inline::Ept(m),
                    _ => Inline::Ph(m),
                }
            }
        }
    }

    fn text_only(&mut self, node: Node<'a, 'input>, path: &NodePath) -> String {
        let mut out = String::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Text => out.push_str(child.text().unwrap_or("")),
                NodeType::Element if self.classify(child, path).is_some() => {
                    self.misplaced(child, path, node.tag_name().name());
                }
                _ => {}
            }
        }
        out
    }
}

fn flavor(kind: Kind) -> RefFlavor {
    match (kind.origin, kind.name) {
        (Origin::Tei, _) => RefFlavor::TeiRef,
        (_, "xref") => RefFlavor::Xref,
        _ => RefFlavor::Ref,
    }
}

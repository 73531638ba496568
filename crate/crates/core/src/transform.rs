//! Conversion between MainstreamTBX and the TEI blend.

use thiserror::Error;

use crate::canonical::{canonicalize, first_divergence};
use crate::diagnostics::{Code, Diagnostic};
use crate::model::*;
use crate::pointer::{fragment_id, is_uri_reference};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConvertOptions {
    /// to_tei: wrap the content of every `admin type="source"` in a TEI `bibl`.
    pub wrap_sources_as_bibl: bool,
    /// to_tbx: restore IDREF tokens, `xref` and `hi/@target`.
    pub strict_legacy: bool,
    /// Fail instead of returning a result with loss records.
    pub fail_on_loss: bool,
}

/// Something the conversion could not carry over faithfully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossRecord {
    /// Location in the input document.
    pub path: NodePath,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvertResult {
    pub document: Document,
    pub diagnostics: Vec<Diagnostic>,
    pub loss_records: Vec<LossRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("input is already {0}")]
    AlreadyInDialect(Dialect),
    #[error("conversion would lose {} construct(s)", .losses.len())]
    Loss {
        losses: Vec<LossRecord>,
        diagnostics: Vec<Diagnostic>,
    },
}

/// MainstreamTBX to TeiBlend.
pub fn to_tei(doc: &Document, opts: &ConvertOptions) -> Result<ConvertResult, ConvertError> {
    if doc.dialect != Dialect::MainstreamTbx {
        return Err(ConvertError::AlreadyInDialect(doc.dialect));
    }
    Converter::new(Dialect::TeiBlend, opts).run(doc)
}

/// TeiBlend to MainstreamTBX.
pub fn to_tbx(doc: &Document, opts: &ConvertOptions) -> Result<ConvertResult, ConvertError> {
    if doc.dialect != Dialect::TeiBlend {
        return Err(ConvertError::AlreadyInDialect(doc.dialect));
    }
    Converter::new(Dialect::MainstreamTbx, opts).run(doc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub equal: bool,
    /// First element at which the round-tripped document differs.
    pub divergence: Option<NodePath>,
    /// Loss records from both directions.
    pub loss_records: Vec<LossRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Converts to the other dialect and back (strict legacy on the TBX side)
/// and compares canonical forms. Sources are re-wrapped in `bibl` on the
/// way back when the blend input wraps any.
pub fn check_roundtrip(doc: &Document) -> RoundTripReport {
    let strict = ConvertOptions {
        strict_legacy: true,
        ..Default::default()
    };
    let defaults = ConvertOptions::default();
    let (there, back) = match doc.dialect {
        Dialect::MainstreamTbx => {
            let there = to_tei(doc, &defaults).expect("dialect checked");
            let back = to_tbx(&there.document, &strict).expect("dialect checked");
            (there, back)
        }
        Dialect::TeiBlend => {
            let there = to_tbx(doc, &strict).expect("dialect checked");
            let wrap = ConvertOptions {
                wrap_sources_as_bibl: has_wrapped_sources(doc),
                ..defaults
            };
            let back = to_tei(&there.document, &wrap).expect("dialect checked");
            (there, back)
        }
    };
    let expected = canonicalize(doc);
    let got = canonicalize(&back.document);
    let divergence = first_divergence(&expected, &got);
    let mut loss_records = there.loss_records;
    loss_records.extend(back.loss_records);
    let mut diagnostics = there.diagnostics;
    diagnostics.extend(back.diagnostics);
    RoundTripReport {
        equal: divergence.is_none(),
        divergence,
        loss_records,
        diagnostics,
    }
}

fn has_wrapped_sources(doc: &Document) -> bool {
    let mut found = false;
    crate::visit::walk(doc, &mut |v| {
        if let Some(d) = v.node.data_element() {
            found |= v.node.name() == "admin"
                && d.ty == "source"
                && matches!(d.content.nodes(), [Inline::Bibl(_)]);
        }
    });
    found
}

/// Percent-encodes whatever keeps `s` from being a URI reference.
pub fn encode_uri(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_fragment = false;
    let bytes = s.as_bytes();
    for (i, c) in s.char_indices() {
        let keep = match c {
            '%' => {
                bytes.get(i + 1).is_some_and(u8::is_ascii_hexdigit)
                    && bytes.get(i + 2).is_some_and(u8::is_ascii_hexdigit)
            }
            '#' if !in_fragment => {
                in_fragment = true;
                true
            }
            '[' | ']' => !in_fragment,
            c if !c.is_ascii() => !c.is_control(),
            c => c.is_ascii_alphanumeric() || "-._~!$&'()*+,;=:@/?".contains(c),
        };
        if keep {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        }
    }
    if !is_uri_reference(&out) {
        // a colon that does not follow a valid scheme
        let head_end = out.find(['/', '?', '#']).unwrap_or(out.len());
        out = format!(
            "{}{}",
            out[..head_end].replace(':', "%3A"),
            &out[head_end..]
        );
    }
    out
}

struct Converter<'o> {
    to: Dialect,
    opts: &'o ConvertOptions,
    diagnostics: Vec<Diagnostic>,
    losses: Vec<LossRecord>,
}

impl<'o> Converter<'o> {
    fn new(to: Dialect, opts: &'o ConvertOptions) -> Self {
        Converter {
            to,
            opts,
            diagnostics: Vec::new(),
            losses: Vec::new(),
        }
    }

    fn tei(&self) -> bool {
        self.to == Dialect::TeiBlend
    }

    fn run(mut self, doc: &Document) -> Result<ConvertResult, ConvertError> {
        let mut sib = Siblings::default();
        let entries = doc
            .entries
            .iter()
            .map(|e| {
                let p = sib.next(&NodePath::root(), "termEntry");
                self.entry(e, &p)
            })
            .collect();
        let document = Document {
            dialect: self.to,
            entries,
            base_uri: doc.base_uri.clone(),
            source_name: doc.source_name.clone(),
        };
        if self.opts.fail_on_loss && !self.losses.is_empty() {
            return Err(ConvertError::Loss {
                losses: self.losses,
                diagnostics: self.diagnostics,
            });
        }
        Ok(ConvertResult {
            document,
            diagnostics: self.diagnostics,
            loss_records: self.losses,
        })
    }

    fn loss(&mut self, path: &NodePath, description: impl Into<String>) {
        self.losses.push(LossRecord {
            path: path.clone(),
            description: description.into(),
        });
    }

    /// Namespace for term, hi and foreign in the output.
    fn phrase_origin(&self) -> Origin {
        if self.tei() {
            Origin::Tei
        } else {
            Origin::Tbx
        }
    }

    fn entry(&mut self, e: &TermEntry, path: &NodePath) -> TermEntry {
        let mut sib = Siblings::default();
        let children = e
            .children
            .iter()
            .map(|c| {
                let p = sib.next(path, c.name());
                match c {
                    EntryChild::Aux(a) => EntryChild::Aux(self.aux(a, &p)),
                    EntryChild::LangSet(l) => EntryChild::LangSet(self.lang_set(l, &p)),
                }
            })
            .collect();
        TermEntry {
            attrs: e.attrs.clone(),
            children,
        }
    }

    fn lang_set(&mut self, l: &LangSet, path: &NodePath) -> LangSet {
        let mut sib = Siblings::default();
        let children = l
            .children
            .iter()
            .map(|c| {
                let p = sib.next(path, c.name());
                match c {
                    LangSetChild::Aux(a) => LangSetChild::Aux(self.aux(a, &p)),
                    LangSetChild::Tig(t) => LangSetChild::Tig(self.tig(t, &p)),
                }
            })
            .collect();
        LangSet {
            attrs: l.attrs.clone(),
            children,
        }
    }

    fn tig(&mut self, t: &TermSection, path: &NodePath) -> TermSection {
        let mut sib = Siblings::default();
        let children = t
            .children
            .iter()
            .map(|c| {
                let p = sib.next(path, c.name());
                match c {
                    TigChild::Term(term) => TigChild::Term(Term {
                        origin: self.phrase_origin(),
                        attrs: term.attrs.clone(),
                        content: self.mixed(&term.content, &p),
                    }),
                    TigChild::TermNote(d) => TigChild::TermNote(self.data(d, &p, false)),
                    TigChild::Aux(a) => TigChild::Aux(self.aux(a, &p)),
                }
            })
            .collect();
        TermSection {
            attrs: t.attrs.clone(),
            children,
        }
    }

    fn aux(&mut self, a: &AuxItem, path: &NodePath) -> AuxItem {
        match a {
            AuxItem::Admin(d) => AuxItem::Admin(self.data(d, path, d.ty == "source")),
            AuxItem::Descrip(d) => AuxItem::Descrip(self.data(d, path, false)),
            AuxItem::DescripGrp(g) => AuxItem::DescripGrp(self.group(g, path)),
            AuxItem::TransacGrp(g) => AuxItem::TransacGrp(self.group(g, path)),
            AuxItem::Note(n) => AuxItem::Note(self.note(n, path)),
            AuxItem::Ref(p) => AuxItem::Ref(self.pointer(p, path)),
        }
    }

    fn group(&mut self, g: &Group, path: &NodePath) -> Group {
        let mut sib = Siblings::default();
        let members = g
            .members
            .iter()
            .map(|m| {
                let p = sib.next(path, m.name());
                match m {
                    GroupMember::Descrip(d) => GroupMember::Descrip(self.data(d, &p, false)),
                    GroupMember::Admin(d) => GroupMember::Admin(self.data(d, &p, d.ty == "source")),
                    GroupMember::Transac(d) => GroupMember::Transac(self.data(d, &p, false)),
                    GroupMember::TransacNote(d) => {
                        GroupMember::TransacNote(self.data(d, &p, false))
                    }
                    GroupMember::Date(d) => GroupMember::Date(d.clone()),
                    GroupMember::Note(n) => GroupMember::Note(self.note(n, &p)),
                    GroupMember::Ref(r) => GroupMember::Ref(self.pointer(r, &p)),
                }
            })
            .collect();
        Group {
            attrs: g.attrs.clone(),
            members,
        }
    }

    fn data(&mut self, d: &DataElement, path: &NodePath, source: bool) -> DataElement {
        let content = match d.content.nodes() {
            [Inline::Bibl(b)] if source && !self.tei() && b.attrs.is_empty() => {
                self.mixed(&b.content, &path.child("bibl", 1))
            }
            [Inline::Bibl(_)] => self.mixed(&d.content, path),
            nodes
                if source && self.tei() && self.opts.wrap_sources_as_bibl && !nodes.is_empty() =>
            {
                MixedContent(vec![Inline::Bibl(Bibl {
                    attrs: GlobalAttrs::default(),
                    content: self.mixed(&d.content, path),
                })])
            }
            _ => self.mixed(&d.content, path),
        };
        DataElement {
            ty: d.ty.clone(),
            attrs: d.attrs.clone(),
            content,
        }
    }

    /// Notes stay TBX in the blend; TEI notes come back as TBX notes.
    fn note(&mut self, n: &Note, path: &NodePath) -> Note {
        Note {
            origin: if self.tei() { n.origin } else { Origin::Tbx },
            attrs: n.attrs.clone(),
            content: self.mixed(&n.content, path),
        }
    }

    fn pointer(&mut self, r: &Pointer, path: &NodePath) -> Pointer {
        let content = self.mixed(&r.content, path);
        let (flavor, target) = if self.tei() {
            let target = match (r.flavor, r.target.as_deref()) {
                (RefFlavor::TeiRef, t) => t.map(str::to_string),
                (RefFlavor::Xref, None) => {
                    self.loss(path, "xref without target becomes a plain ref");
                    None
                }
                (RefFlavor::Xref, Some(t)) => {
                    if t.starts_with('#') {
                        self.loss(
                            path,
                            format!("xref target {t:?} is a fragment and returns as ref"),
                        );
                    }
                    Some(self.uri(t, path))
                }
                (RefFlavor::Ref, t) => t.map(|t| self.idref_to_uri(t, path)),
            };
            (RefFlavor::TeiRef, target)
        } else {
            match (r.flavor, r.target.as_deref()) {
                (RefFlavor::TeiRef, Some(t)) if self.opts.strict_legacy => match fragment_id(t) {
                    Some(id) => (RefFlavor::Ref, Some(id.to_string())),
                    None => (RefFlavor::Xref, Some(t.to_string())),
                },
                (RefFlavor::TeiRef, t) => (RefFlavor::Ref, t.map(str::to_string)),
                (f, t) => (f, t.map(str::to_string)),
            }
        };
        Pointer {
            flavor,
            attrs: r.attrs.clone(),
            target,
            ty: r.ty.clone(),
            content,
        }
    }

    /// Target of a TBX `ref` (or `hi`) as a URI.
    fn idref_to_uri(&mut self, t: &str, path: &NodePath) -> String {
        if is_ncname(t) {
            if t.contains('.') {
                self.diagnostics.push(Diagnostic::new(
                    Code::AmbiguousTarget,
                    path.clone(),
                    format!(
                        "target {t:?} read as an identifier, though it could be a relative URI"
                    ),
                ));
            }
            return format!("#{t}");
        }
        self.loss(
            path,
            format!("target {t:?} is not an IDREF and will not be restored as one"),
        );
        self.uri(t, path)
    }

    fn uri(&mut self, t: &str, path: &NodePath) -> String {
        if is_uri_reference(t) {
            return t.to_string();
        }
        let encoded = encode_uri(t);
        self.diagnostics.push(Diagnostic::new(
            Code::AmbiguousTarget,
            path.clone(),
            format!("target {t:?} is neither an IDREF nor a URI; percent-encoded as {encoded:?}"),
        ));
        encoded
    }

    fn mixed(&mut self, c: &MixedContent, path: &NodePath) -> MixedContent {
        let mut out = MixedContent::new();
        let mut sib = Siblings::default();
        for node in c.nodes() {
            let Some(name) = node.name() else {
                if let Inline::Text(t) = node {
                    out.push_text(t);
                }
                continue;
            };
            let p = sib.next(path, name);
            match node {
                Inline::Text(_) => unreachable!(),
                Inline::Hi(h) => out.push(self.hi(h, &p)),
                Inline::Foreign(f) => out.push(Inline::Foreign(Foreign {
                    origin: self.phrase_origin(),
                    attrs: f.attrs.clone(),
                    content: self.mixed(&f.content, &p),
                })),
                Inline::Ref(r) => out.push(self.inline_pointer(r, &p)),
                Inline::Bpt(_) | Inline::Ept(_) | Inline::Ph(_) => out.push(node.clone()),
                Inline::Bibl(b) => {
                    let inner = self.mixed(&b.content, &p);
                    if self.tei() {
                        out.push(Inline::Bibl(Bibl {
                            attrs: b.attrs.clone(),
                            content: inner,
                        }));
                    } else {
                        self.loss(&p, "bibl has no TBX counterpart; markup dropped, text kept");
                        for n in inner.0 {
                            match n {
                                Inline::Text(t) => out.push_text(&t),
                                other => out.push(other),
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn hi(&mut self, h: &Hi, path: &NodePath) -> Inline {
        let content = self.mixed(&h.content, path);
        match (&h.target, self.tei()) {
            (Some(t), true) => {
                let mut attrs = h.attrs.clone();
                if let Some(r) = attrs.rend.replace("hi".into()) {
                    self.loss(
                        path,
                        format!("rend {r:?} replaced by \"hi\" on migrated hi"),
                    );
                }
                let target = self.idref_to_uri(t, path);
                self.diagnostics.push(Diagnostic::new(
                    Code::HiTargetMigrated,
                    path.clone(),
                    format!("hi with target {t:?} became ref rend=\"hi\" target={target:?}"),
                ));
                Inline::Ref(Pointer {
                    flavor: RefFlavor::TeiRef,
                    attrs,
                    target: Some(target),
                    ty: None,
                    content,
                })
            }
            _ => Inline::Hi(Hi {
                origin: self.phrase_origin(),
                attrs: h.attrs.clone(),
                target: h.target.clone(),
                content,
            }),
        }
    }

    fn inline_pointer(&mut self, r: &Pointer, path: &NodePath) -> Inline {
        let highlight = r.attrs.rend.as_deref() == Some("hi");
        if self.tei() {
            if highlight && r.flavor != RefFlavor::TeiRef {
                self.loss(path, "inline ref with rend=\"hi\" returns as a hi");
            }
        } else if highlight && self.opts.strict_legacy && r.flavor == RefFlavor::TeiRef {
            let mut attrs = r.attrs.clone();
            attrs.rend = None;
            if r.ty.is_some() {
                self.loss(path, "type dropped: hi carries no type");
            }
            let target = r
                .target
                .as_deref()
                .map(|t| fragment_id(t).unwrap_or(t).to_string());
            return Inline::Hi(Hi {
                origin: Origin::Tbx,
                attrs,
                target,
                content: self.mixed(&r.content, path),
            });
        }
        Inline::Ref(self.pointer(r, path))
    }
}

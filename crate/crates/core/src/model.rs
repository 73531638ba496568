//! In-memory representation of terminological entries.
//!
//! The three structural levels (entry, language section, term section) keep
//! their children as ordered sequences so that out-of-order or incomplete
//! input survives parsing and is reported by the validator instead of being
//! silently repaired. Accessors such as [`TermSection::term`] give the
//! logical view.

use std::collections::BTreeMap;
use std::fmt;

/// Which serialization a [`Document`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dialect {
    /// Every element lives in the TBX namespace.
    MainstreamTbx,
    /// TBX entries whose `term`, `ref`, `hi` and `foreign` come from TEI.
    TeiBlend,
}

impl Dialect {
    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::MainstreamTbx => "tbx",
            Dialect::TeiBlend => "tei",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::MainstreamTbx => "MainstreamTBX",
            Dialect::TeiBlend => "TeiBlend",
        })
    }
}

/// Namespace an element was (or will be) serialized in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Tbx,
    Tei,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XmlSpace {
    Default,
    Preserve,
}

impl XmlSpace {
    pub fn as_str(self) -> &'static str {
        match self {
            XmlSpace::Default => "default",
            XmlSpace::Preserve => "preserve",
        }
    }
}

/// Attributes every element may carry.
///
/// Values are kept as written; lexical checks (NCName identifiers, language
/// tags) belong to the validator so that malformed input can still be
/// represented and reported.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlobalAttrs {
    pub id: Option<String>,
    pub lang: Option<String>,
    pub base: Option<String>,
    pub space: Option<XmlSpace>,
    pub n: Option<String>,
    pub rend: Option<String>,
    /// Unmodelled attributes in no namespace, keyed by local name.
    pub other: BTreeMap<String, String>,
}

impl GlobalAttrs {
    pub fn with_id(id: impl Into<String>) -> Self {
        GlobalAttrs {
            id: Some(id.into()),
            ..Default::default()
        }
    }

    pub fn with_lang(lang: impl Into<String>) -> Self {
        GlobalAttrs {
            lang: Some(lang.into()),
            ..Default::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == GlobalAttrs::default()
    }
}

/// Ordered text and inline elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MixedContent(pub Vec<Inline>);

impl MixedContent {
    pub fn new() -> Self {
        MixedContent(Vec::new())
    }

    pub fn text(s: impl Into<String>) -> Self {
        MixedContent(vec![Inline::Text(s.into())])
    }

    pub fn nodes(&self) -> &[Inline] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, node: Inline) {
        self.0.push(node);
    }

    /// Appends text, extending a trailing text node if there is one.
    pub fn push_text(&mut self, s: &str) {
        if s.is_empty() {
            return;
        }
        if let Some(Inline::Text(last)) = self.0.last_mut() {
            last.push_str(s);
        } else {
            self.0.push(Inline::Text(s.to_string()));
        }
    }

    /// Concatenated character data, descending into inline elements.
    pub fn plain_text(&self) -> String {
        let mut out = String::new();
        self.collect_text(&mut out);
        out
    }

    pub(crate) fn collect_text(&self, out: &mut String) {
        for node in &self.0 {
            match node {
                Inline::Text(t) => out.push_str(t),
                Inline::Bpt(m) | Inline::Ept(m) | Inline::Ph(m) => out.push_str(&m.content),
                other => {
                    if let Some(c) = other.content() {
                        c.collect_text(out);
                    }
                }
            }
        }
    }

    /// Merges adjacent text nodes and drops empty ones, recursively.
    pub fn canonicalize(&mut self) {
        let nodes = std::mem::take(&mut self.0);
        for mut node in nodes {
            match &mut node {
                Inline::Text(t) => {
                    let t = std::mem::take(t);
                    self.push_text(&t);
                    continue;
                }
                other => {
                    if let Some(c) = other.content_mut() {
                        c.canonicalize();
                    }
                }
            }
            self.0.push(node);
        }
    }
}

impl From<&str> for MixedContent {
    fn from(s: &str) -> Self {
        MixedContent::text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inline {
    Text(String),
    Hi(Hi),
    Foreign(Foreign),
    Ref(Pointer),
    Bpt(MetaMarkup),
    Ept(MetaMarkup),
    Ph(MetaMarkup),
    /// Unstructured bibliographic reference (TEI only).
    Bibl(Bibl),
}

impl Inline {
    /// Element name, or `None` for text.
    pub fn name(&self) -> Option<&'static str> {
        Some(match self {
            Inline::Text(_) => return None,
            Inline::Hi(_) => "hi",
            Inline::Foreign(_) => "foreign",
            Inline::Ref(p) => p.flavor.name(),
            Inline::Bpt(_) => "bpt",
            Inline::Ept(_) => "ept",
            Inline::Ph(_) => "ph",
            Inline::Bibl(_) => "bibl",
        })
    }

    pub fn content(&self) -> Option<&MixedContent> {
        match self {
            Inline::Hi(h) => Some(&h.content),
            Inline::Foreign(f) => Some(&f.content),
            Inline::Ref(p) => Some(&p.content),
            Inline::Bibl(b) => Some(&b.content),
            _ => None,
        }
    }

    pub fn content_mut(&mut self) -> Option<&mut MixedContent> {
        match self {
            Inline::Hi(h) => Some(&mut h.content),
            Inline::Foreign(f) => Some(&mut f.content),
            Inline::Ref(p) => Some(&mut p.content),
            Inline::Bibl(b) => Some(&mut b.content),
            _ => None,
        }
    }
}

/// Highlighted span. A `target` only exists on legacy TBX highlights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hi {
    pub origin: Origin,
    pub attrs: GlobalAttrs,
    pub target: Option<String>,
    pub content: MixedContent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Foreign {
    pub origin: Origin,
    pub attrs: GlobalAttrs,
    pub content: MixedContent,
}

/// Flavor of a pointing element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefFlavor {
    /// TBX `ref`, conventionally pointing inside the document by IDREF.
    Ref,
    /// TBX `xref`, pointing outside the document.
    Xref,
    /// TEI `ref`, pointing by URI.
    TeiRef,
}

impl RefFlavor {
    pub fn name(self) -> &'static str {
        match self {
            RefFlavor::Xref => "xref",
            RefFlavor::Ref | RefFlavor::TeiRef => "ref",
        }
    }

    pub fn origin(self) -> Origin {
        match self {
            RefFlavor::TeiRef => Origin::Tei,
            _ => Origin::Tbx,
        }
    }
}

/// `ref` / `xref`, either as auxiliary information or inline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pointer {
    pub flavor: RefFlavor,
    pub attrs: GlobalAttrs,
    pub target: Option<String>,
    pub ty: Option<String>,
    pub content: MixedContent,
}

impl Pointer {
    pub fn new(flavor: RefFlavor, target: impl Into<String>, content: MixedContent) -> Self {
        Pointer {
            flavor,
            attrs: GlobalAttrs::default(),
            target: Some(target.into()),
            ty: None,
            content,
        }
    }
}

/// `bpt`, `ept` or `ph`: opaque native markup carried as text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetaMarkup {
    pub attrs: GlobalAttrs,
    /// Pairing token linking a `bpt` to its `ept`.
    pub i: Option<String>,
    pub content: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bibl {
    pub attrs: GlobalAttrs,
    pub content: MixedContent,
}

/// A typed data-category element: `admin`, `descrip`, `termNote`,
/// `transac` or `transacNote`. The host is given by the enclosing variant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataElement {
    pub ty: String,
    pub attrs: GlobalAttrs,
    pub content: MixedContent,
}

impl DataElement {
    pub fn new(ty: impl Into<String>, content: impl Into<MixedContent>) -> Self {
        DataElement {
            ty: ty.into(),
            attrs: GlobalAttrs::default(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Note {
    pub origin: Origin,
    pub attrs: GlobalAttrs,
    pub content: MixedContent,
}

impl Note {
    pub fn new(content: impl Into<MixedContent>) -> Self {
        Note {
            origin: Origin::Tbx,
            attrs: GlobalAttrs::default(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DateItem {
    pub attrs: GlobalAttrs,
    pub value: String,
}

/// Child of a `descripGrp` or `transacGrp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupMember {
    Descrip(DataElement),
    Admin(DataElement),
    Transac(DataElement),
    TransacNote(DataElement),
    Date(DateItem),
    Note(Note),
    Ref(Pointer),
}

impl GroupMember {
    pub fn name(&self) -> &'static str {
        match self {
            GroupMember::Descrip(_) => "descrip",
            GroupMember::Admin(_) => "admin",
            GroupMember::Transac(_) => "transac",
            GroupMember::TransacNote(_) => "transacNote",
            GroupMember::Date(_) => "date",
            GroupMember::Note(_) => "note",
            GroupMember::Ref(p) => p.flavor.name(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Group {
    pub attrs: GlobalAttrs,
    pub members: Vec<GroupMember>,
}

/// Auxiliary information allowed at every structural level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxItem {
    Admin(DataElement),
    Descrip(DataElement),
    DescripGrp(Group),
    TransacGrp(Group),
    Note(Note),
    Ref(Pointer),
}

impl AuxItem {
    pub fn name(&self) -> &'static str {
        match self {
            AuxItem::Admin(_) => "admin",
            AuxItem::Descrip(_) => "descrip",
            AuxItem::DescripGrp(_) => "descripGrp",
            AuxItem::TransacGrp(_) => "transacGrp",
            AuxItem::Note(_) => "note",
            AuxItem::Ref(p) => p.flavor.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub origin: Origin,
    pub attrs: GlobalAttrs,
    pub content: MixedContent,
}

impl Term {
    pub fn new(origin: Origin, content: impl Into<MixedContent>) -> Self {
        Term {
            origin,
            attrs: GlobalAttrs::default(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TigChild {
    Term(Term),
    TermNote(DataElement),
    Aux(AuxItem),
}

impl TigChild {
    pub fn name(&self) -> &'static str {
        match self {
            TigChild::Term(_) => "term",
            TigChild::TermNote(_) => "termNote",
            TigChild::Aux(a) => a.name(),
        }
    }
}

/// Term section (`tig`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSection {
    pub attrs: GlobalAttrs,
    pub children: Vec<TigChild>,
}

impl TermSection {
    pub fn term(&self) -> Option<&Term> {
        self.children.iter().find_map(|c| match c {
            TigChild::Term(t) => Some(t),
            _ => None,
        })
    }

    pub fn term_notes(&self) -> impl Iterator<Item = &DataElement> {
        self.children.iter().filter_map(|c| match c {
            TigChild::TermNote(n) => Some(n),
            _ => None,
        })
    }

    pub fn aux(&self) -> impl Iterator<Item = &AuxItem> {
        self.children.iter().filter_map(|c| match c {
            TigChild::Aux(a) => Some(a),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LangSetChild {
    Aux(AuxItem),
    Tig(TermSection),
}

impl LangSetChild {
    pub fn name(&self) -> &'static str {
        match self {
            LangSetChild::Aux(a) => a.name(),
            LangSetChild::Tig(_) => "tig",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LangSet {
    pub attrs: GlobalAttrs,
    pub children: Vec<LangSetChild>,
}

impl LangSet {
    pub fn lang(&self) -> Option<&str> {
        self.attrs.lang.as_deref()
    }

    pub fn aux(&self) -> impl Iterator<Item = &AuxItem> {
        self.children.iter().filter_map(|c| match c {
            LangSetChild::Aux(a) => Some(a),
            _ => None,
        })
    }

    pub fn tigs(&self) -> impl Iterator<Item = &TermSection> {
        self.children.iter().filter_map(|c| match c {
            LangSetChild::Tig(t) => Some(t),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryChild {
    Aux(AuxItem),
    LangSet(LangSet),
}

impl EntryChild {
    pub fn name(&self) -> &'static str {
        match self {
            EntryChild::Aux(a) => a.name(),
            EntryChild::LangSet(_) => "langSet",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermEntry {
    pub attrs: GlobalAttrs,
    pub children: Vec<EntryChild>,
}

impl TermEntry {
    pub fn aux(&self) -> impl Iterator<Item = &AuxItem> {
        self.children.iter().filter_map(|c| match c {
            EntryChild::Aux(a) => Some(a),
            _ => None,
        })
    }

    pub fn lang_sets(&self) -> impl Iterator<Item = &LangSet> {
        self.children.iter().filter_map(|c| match c {
            EntryChild::LangSet(l) => Some(l),
            _ => None,
        })
    }
}

/// A sequence of entries in one dialect.
///
/// Equality ignores `source_name`.
#[derive(Debug, Clone)]
pub struct Document {
    pub dialect: Dialect,
    pub entries: Vec<TermEntry>,
    pub base_uri: Option<String>,
    pub source_name: String,
}

impl Document {
    pub fn new(dialect: Dialect) -> Self {
        Document {
            dialect,
            entries: Vec::new(),
            base_uri: None,
            source_name: String::new(),
        }
    }

    pub fn with_entries(dialect: Dialect, entries: Vec<TermEntry>) -> Self {
        Document {
            entries,
            ..Document::new(dialect)
        }
    }

    /// All character data in document order.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        crate::visit::walk(self, &mut |v| match v.node {
            crate::visit::NodeRef::Inline(_) => {}
            crate::visit::NodeRef::Member(GroupMember::Date(d)) => out.push_str(&d.value),
            node => {
                if let Some(c) = node.own_content() {
                    c.collect_text(&mut out);
                }
            }
        });
        out
    }
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.dialect == other.dialect
            && self.base_uri == other.base_uri
            && self.entries == other.entries
    }
}

impl Eq for Document {}

/// Structural location of an element, e.g. `/termEntry[1]/langSet[2]/tig[1]`.
///
/// Each step is the element name with its 1-based position among siblings
/// of the same name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(String);

impl NodePath {
    pub fn root() -> Self {
        NodePath(String::new())
    }

    pub fn child(&self, name: &str, position: usize) -> NodePath {
        NodePath(format!("{}/{}[{}]", self.0, name, position))
    }

    pub fn as_str(&self) -> &str {
        if self.0.is_empty() {
            "/"
        } else {
            &self.0
        }
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `self` equals `other` or lies beneath it.
    pub fn starts_with(&self, other: &NodePath) -> bool {
        other.0.is_empty()
            || self.0 == other.0
            || (self.0.starts_with(&other.0) && self.0[other.0.len()..].starts_with('/'))
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Hands out same-name sibling positions while children are enumerated.
#[derive(Debug, Default)]
pub(crate) struct Siblings {
    seen: BTreeMap<&'static str, usize>,
}

impl Siblings {
    pub(crate) fn next(&mut self, parent: &NodePath, name: &'static str) -> NodePath {
        let n = self.seen.entry(name).or_insert(0);
        *n += 1;
        parent.child(name, *n)
    }
}

/// Lexical check for `xml:id` values (NCName).
pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_name_start(c) => {}
        _ => return false,
    }
    chars
        .all(|c| is_name_start(c) || c == '-' || c == '.' || c.is_ascii_digit() || is_name_extra(c))
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic()
        || c == '_'
        || matches!(c,
            '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{2FF}'
            | '\u{370}'..='\u{37D}' | '\u{37F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
            | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
            | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

fn is_name_extra(c: char) -> bool {
    matches!(c, '\u{B7}' | '\u{300}'..='\u{36F}' | '\u{203F}'..='\u{2040}')
}

/// Lexical check for `xml:lang` values: non-empty ASCII letters, digits and hyphens.
pub fn is_lang_tag(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ncname_rules() {
        assert!(is_ncname("t1"));
        assert!(is_ncname("_x.y-z"));
        assert!(is_ncname("Überblick"));
        assert!(!is_ncname("1t"));
        assert!(!is_ncname("a:b"));
        assert!(!is_ncname("a b"));
        assert!(!is_ncname(""));
        assert!(!is_ncname("-a"));
    }

    #[test]
    fn lang_rules() {
        assert!(is_lang_tag("de"));
        assert!(is_lang_tag("en-GB"));
        assert!(!is_lang_tag(""));
        assert!(!is_lang_tag("en_GB"));
    }

    #[test]
    fn push_text_merges() {
        let mut c = MixedContent::new();
        c.push_text("a");
        c.push_text("b");
        assert_eq!(c, MixedContent::text("ab"));
    }

    #[test]
    fn canonicalize_merges_nested() {
        let mut c = MixedContent(vec![
            Inline::Text("a".into()),
            Inline::Text("".into()),
            Inline::Text("b".into()),
            Inline::Hi(Hi {
                origin: Origin::Tei,
                attrs: GlobalAttrs::default(),
                target: None,
                content: MixedContent(vec![Inline::Text("x".into()), Inline::Text("y".into())]),
            }),
        ]);
        c.canonicalize();
        assert_eq!(c.0[0], Inline::Text("ab".into()));
        assert_eq!(c.0[1].content().unwrap(), &MixedContent::text("xy"));
        assert_eq!(c.plain_text(), "abxy");
    }

    #[test]
    fn path_prefixes() {
        let p = NodePath::root().child("termEntry", 1);
        let q = p.child("langSet", 2);
        assert_eq!(q.as_str(), "/termEntry[1]/langSet[2]");
        assert!(q.starts_with(&p));
        assert!(!p.starts_with(&q));
        assert!(!NodePath::root().child("termEntry", 10).starts_with(&p));
        assert_eq!(NodePath::root().as_str(), "/");
    }
}

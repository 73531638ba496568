//! Read-only, path-aware traversal over every element of a [`Document`].

use crate::model::*;

/// Structural level an element belongs to: the nearest enclosing (or self)
/// `termEntry`, `langSet` or `tig`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Entry,
    LangSet,
    TermSection,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Entry => "entry",
            Level::LangSet => "langSet",
            Level::TermSection => "termSection",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "entry" => Some(Level::Entry),
            "langSet" => Some(Level::LangSet),
            "termSection" => Some(Level::TermSection),
            _ => None,
        }
    }

    pub const ALL: [Level; 3] = [Level::Entry, Level::LangSet, Level::TermSection];
}

/// A borrowed element of any kind.
#[derive(Debug, Clone, Copy)]
pub enum NodeRef<'a> {
    Entry(&'a TermEntry),
    LangSet(&'a LangSet),
    Tig(&'a TermSection),
    Term(&'a Term),
    TermNote(&'a DataElement),
    Aux(&'a AuxItem),
    Member(&'a GroupMember),
    /// Never `Inline::Text`.
    Inline(&'a Inline),
}

/// Child of an element: another element or a run of text.
#[derive(Debug, Clone, Copy)]
pub enum Child<'a> {
    Node(NodeRef<'a>),
    Text(&'a str),
}

impl<'a> NodeRef<'a> {
    pub fn name(&self) -> &'static str {
        match self {
            NodeRef::Entry(_) => "termEntry",
            NodeRef::LangSet(_) => "langSet",
            NodeRef::Tig(_) => "tig",
            NodeRef::Term(_) => "term",
            NodeRef::TermNote(_) => "termNote",
            NodeRef::Aux(a) => a.name(),
            NodeRef::Member(m) => m.name(),
            NodeRef::Inline(i) => i.name().unwrap_or("#text"),
        }
    }

    pub fn origin(&self) -> Origin {
        match self {
            NodeRef::Term(t) => t.origin,
            NodeRef::Aux(AuxItem::Note(n)) | NodeRef::Member(GroupMember::Note(n)) => n.origin,
            NodeRef::Aux(AuxItem::Ref(p)) | NodeRef::Member(GroupMember::Ref(p)) => {
                p.flavor.origin()
            }
            NodeRef::Inline(i) => match i {
                Inline::Hi(h) => h.origin,
                Inline::Foreign(f) => f.origin,
                Inline::Ref(p) => p.flavor.origin(),
                Inline::Bibl(_) => Origin::Tei,
                _ => Origin::Tbx,
            },
            _ => Origin::Tbx,
        }
    }

    pub fn attrs(&self) -> &'a GlobalAttrs {
        match *self {
            NodeRef::Entry(e) => &e.attrs,
            NodeRef::LangSet(l) => &l.attrs,
            NodeRef::Tig(t) => &t.attrs,
            NodeRef::Term(t) => &t.attrs,
            NodeRef::TermNote(d) => &d.attrs,
            NodeRef::Aux(a) => match a {
                AuxItem::Admin(d) | AuxItem::Descrip(d) => &d.attrs,
                AuxItem::DescripGrp(g) | AuxItem::TransacGrp(g) => &g.attrs,
                AuxItem::Note(n) => &n.attrs,
                AuxItem::Ref(p) => &p.attrs,
            },
            NodeRef::Member(m) => match m {
                GroupMember::Descrip(d)
                | GroupMember::Admin(d)
                | GroupMember::Transac(d)
                | GroupMember::TransacNote(d) => &d.attrs,
                GroupMember::Date(d) => &d.attrs,
                GroupMember::Note(n) => &n.attrs,
                GroupMember::Ref(p) => &p.attrs,
            },
            NodeRef::Inline(i) => match i {
                Inline::Hi(h) => &h.attrs,
                Inline::Foreign(f) => &f.attrs,
                Inline::Ref(p) => &p.attrs,
                Inline::Bpt(m) | Inline::Ept(m) | Inline::Ph(m) => &m.attrs,
                Inline::Bibl(b) => &b.attrs,
                Inline::Text(_) => unreachable!("text is not an element"),
            },
        }
    }

    /// The data-category element behind this node, if it is one.
    pub fn data_element(&self) -> Option<&'a DataElement> {
        match *self {
            NodeRef::TermNote(d) => Some(d),
            NodeRef::Aux(AuxItem::Admin(d) | AuxItem::Descrip(d)) => Some(d),
            NodeRef::Member(
                GroupMember::Descrip(d)
                | GroupMember::Admin(d)
                | GroupMember::Transac(d)
                | GroupMember::TransacNote(d),
            ) => Some(d),
            _ => None,
        }
    }

    pub fn pointer(&self) -> Option<&'a Pointer> {
        match *self {
            NodeRef::Aux(AuxItem::Ref(p))
            | NodeRef::Member(GroupMember::Ref(p))
            | NodeRef::Inline(Inline::Ref(p)) => Some(p),
            _ => None,
        }
    }

    /// The `target` attribute, on pointers and legacy highlights.
    pub fn target(&self) -> Option<&'a str> {
        match *self {
            NodeRef::Inline(Inline::Hi(h)) => h.target.as_deref(),
            n => n.pointer().and_then(|p| p.target.as_deref()),
        }
    }

    /// Mixed content held directly by this element.
    pub fn own_content(&self) -> Option<&'a MixedContent> {
        match *self {
            NodeRef::Term(t) => Some(&t.content),
            NodeRef::Aux(AuxItem::Note(n)) | NodeRef::Member(GroupMember::Note(n)) => {
                Some(&n.content)
            }
            NodeRef::Inline(i) => i.content(),
            n => n
                .data_element()
                .map(|d| &d.content)
                .or_else(|| n.pointer().map(|p| &p.content)),
        }
    }

    /// Whether this element holds text rather than structure.
    pub fn is_textual(&self) -> bool {
        !matches!(
            self,
            NodeRef::Entry(_)
                | NodeRef::LangSet(_)
                | NodeRef::Tig(_)
                | NodeRef::Aux(AuxItem::DescripGrp(_) | AuxItem::TransacGrp(_))
        )
    }

    /// Children in document order.
    pub fn children(&self) -> Vec<Child<'a>> {
        match *self {
            NodeRef::Entry(e) => e
                .children
                .iter()
                .map(|c| {
                    Child::Node(match c {
                        EntryChild::Aux(a) => NodeRef::Aux(a),
                        EntryChild::LangSet(l) => NodeRef::LangSet(l),
                    })
                })
                .collect(),
            NodeRef::LangSet(l) => l
                .children
                .iter()
                .map(|c| {
                    Child::Node(match c {
                        LangSetChild::Aux(a) => NodeRef::Aux(a),
                        LangSetChild::Tig(t) => NodeRef::Tig(t),
                    })
                })
                .collect(),
            NodeRef::Tig(t) => t
                .children
                .iter()
                .map(|c| {
                    Child::Node(match c {
                        TigChild::Term(t) => NodeRef::Term(t),
                        TigChild::TermNote(n) => NodeRef::TermNote(n),
                        TigChild::Aux(a) => NodeRef::Aux(a),
                    })
                })
                .collect(),
            NodeRef::Aux(AuxItem::DescripGrp(g) | AuxItem::TransacGrp(g)) => g
                .members
                .iter()
                .map(|m| Child::Node(NodeRef::Member(m)))
                .collect(),
            NodeRef::Member(GroupMember::Date(d)) => text_child(&d.value),
            NodeRef::Inline(Inline::Bpt(m) | Inline::Ept(m) | Inline::Ph(m)) => {
                text_child(&m.content)
            }
            n => match n.own_content() {
                Some(c) => c
                    .nodes()
                    .iter()
                    .map(|i| match i {
                        Inline::Text(t) => Child::Text(t),
                        other => Child::Node(NodeRef::Inline(other)),
                    })
                    .collect(),
                None => Vec::new(),
            },
        }
    }
}

fn text_child(s: &str) -> Vec<Child<'_>> {
    if s.is_empty() {
        Vec::new()
    } else {
        vec![Child::Text(s)]
    }
}

/// One element reached by [`walk`].
#[derive(Debug, Clone, Copy)]
pub struct Visit<'a, 'p> {
    pub path: &'p NodePath,
    pub node: NodeRef<'a>,
    pub level: Level,
}

/// Visits every element in document order, parents before children.
pub fn walk<'a, F>(doc: &'a Document, f: &mut F)
where
    F: FnMut(&Visit<'a, '_>),
{
    let root = NodePath::root();
    let mut sib = Siblings::default();
    for entry in &doc.entries {
        let path = sib.next(&root, "termEntry");
        walk_node(NodeRef::Entry(entry), &path, Level::Entry, f);
    }
}

fn walk_node<'a, F>(node: NodeRef<'a>, path: &NodePath, level: Level, f: &mut F)
where
    F: FnMut(&Visit<'a, '_>),
{
    let level = match node {
        NodeRef::LangSet(_) => Level::LangSet,
        NodeRef::Tig(_) => Level::TermSection,
        _ => level,
    };
    f(&Visit { path, node, level });
    let mut sib = Siblings::default();
    for child in node.children() {
        if let Child::Node(n) = child {
            let p = sib.next(path, n.name());
            walk_node(n, &p, level, f);
        }
    }
}

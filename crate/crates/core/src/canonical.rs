//! Canonical form and structural comparison of documents.

use std::fmt::Write;

use crate::model::*;
use crate::visit::{walk, Child, NodeRef};

/// Canonical copy of `doc`: adjacent text merged, empty text dropped.
///
/// Inter-element whitespace in structural elements has no representation in
/// the model, and attributes are held in fixed fields or a sorted map, so
/// those are canonical by construction. Mixed content is otherwise left
/// untouched.
pub fn canonicalize(doc: &Document) -> Document {
    let mut out = doc.clone();
    for_each_content_mut(&mut out, &mut MixedContent::canonicalize);
    out
}

/// Applies `f` to every top-level mixed content in the document.
pub(crate) fn for_each_content_mut(doc: &mut Document, f: &mut impl FnMut(&mut MixedContent)) {
    for entry in &mut doc.entries {
        for child in &mut entry.children {
            match child {
                EntryChild::Aux(a) => aux_contents(a, f),
                EntryChild::LangSet(ls) => {
                    for c in &mut ls.children {
                        match c {
                            LangSetChild::Aux(a) => aux_contents(a, f),
                            LangSetChild::Tig(tig) => {
                                for c in &mut tig.children {
                                    match c {
                                        TigChild::Term(t) => f(&mut t.content),
                                        TigChild::TermNote(n) => f(&mut n.content),
                                        TigChild::Aux(a) => aux_contents(a, f),
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn aux_contents(aux: &mut AuxItem, f: &mut impl FnMut(&mut MixedContent)) {
    match aux {
        AuxItem::Admin(d) | AuxItem::Descrip(d) => f(&mut d.content),
        AuxItem::Note(n) => f(&mut n.content),
        AuxItem::Ref(p) => f(&mut p.content),
        AuxItem::DescripGrp(g) | AuxItem::TransacGrp(g) => {
            for m in &mut g.members {
                match m {
                    GroupMember::Descrip(d)
                    | GroupMember::Admin(d)
                    | GroupMember::Transac(d)
                    | GroupMember::TransacNote(d) => f(&mut d.content),
                    GroupMember::Note(n) => f(&mut n.content),
                    GroupMember::Ref(p) => f(&mut p.content),
                    GroupMember::Date(_) => {}
                }
            }
        }
    }
}

/// Flattened description of every element: its path plus its own name,
/// origin, attributes and immediate children.
fn records(doc: &Document) -> Vec<(NodePath, String)> {
    let mut out = Vec::new();
    walk(doc, &mut |v| {
        let node = v.node;
        let mut d = format!("{} {:?} {:?}", node.name(), node.origin(), node.attrs());
        if let Some(t) = node.target() {
            let _ = write!(d, " target={t:?}");
        }
        if let Some(de) = node.data_element() {
            let _ = write!(d, " type={:?}", de.ty);
        }
        if let Some(p) = node.pointer() {
            let _ = write!(d, " type={:?}", p.ty);
        }
        if let NodeRef::Inline(Inline::Bpt(m) | Inline::Ept(m) | Inline::Ph(m)) = node {
            let _ = write!(d, " i={:?}", m.i);
        }
        d.push_str(" [");
        for c in node.children() {
            match c {
                Child::Text(t) => {
                    let _ = write!(d, "{t:?} ");
                }
                Child::Node(n) => {
                    let _ = write!(d, "<{}> ", n.name());
                }
            }
        }
        d.push(']');
        out.push((v.path.clone(), d));
    });
    out
}

/// First element at which two documents differ, or `None` when they are
/// structurally equal. Document-level differences report the root path.
pub fn first_divergence(a: &Document, b: &Document) -> Option<NodePath> {
    if a.dialect != b.dialect || a.base_uri != b.base_uri {
        return Some(NodePath::root());
    }
    let ra = records(a);
    let rb = records(b);
    for (x, y) in ra.iter().zip(&rb) {
        if x != y {
            // Same path means the element itself changed; otherwise the
            // sibling sets differ and the earlier path is the divergence.
            return Some(if x.0 <= y.0 { x.0.clone() } else { y.0.clone() });
        }
    }
    match ra.len().cmp(&rb.len()) {
        std::cmp::Ordering::Less => Some(rb[ra.len()].0.clone()),
        std::cmp::Ordering::Greater => Some(ra[rb.len()].0.clone()),
        std::cmp::Ordering::Equal => None,
    }
}

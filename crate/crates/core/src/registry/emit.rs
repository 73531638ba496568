//! Schema text and documentation generated from one registry.

use std::fmt::Write;

use super::*;
use crate::xml::{TBX_NS, TEI_NS};

/// One `name = expr` rule per element, sorted by name.
pub fn emit_schema(reg: &Registry) -> Result<String, RegistryError> {
    let resolved = reg.resolve()?;
    let mut out = String::new();
    for (name, spec) in &resolved.elements {
        let _ = writeln!(out, "{name} = {}", spec.content);
    }
    Ok(out)
}

/// Markdown reference with one `##` section per element, in the same order
/// as [`emit_schema`]. No other headings are emitted.
pub fn emit_docs(reg: &Registry) -> Result<String, RegistryError> {
    let resolved = reg.resolve()?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Element reference generated from registry `{}`.\n",
        reg.version
    );
    for (name, spec) in &resolved.elements {
        let _ = writeln!(out, "## {name}\n");
        let doc = spec.doc.trim();
        let _ = writeln!(
            out,
            "{}\n",
            if doc.is_empty() {
                "(undocumented)"
            } else {
                doc
            }
        );
        let (ns, label) = match spec.namespace {
            Origin::Tbx => (TBX_NS, "TBX"),
            Origin::Tei => (TEI_NS, "TEI"),
        };
        let _ = writeln!(out, "- Namespace: `{ns}` ({label})");
        let _ = writeln!(out, "- Content model: `{}`", spec.content);
        let unresolved = &reg.elements[name].content;
        if !unresolved.class_refs().is_empty() {
            let _ = writeln!(out, "- Declared as: `{unresolved}`");
        }
        let attrs: Vec<String> = reg
            .attributes_of(name)
            .into_iter()
            .map(|(a, class)| match class {
                Some(c) => format!("`{a}` ({c})"),
                None => format!("`{a}`"),
            })
            .collect();
        if !attrs.is_empty() {
            let _ = writeln!(out, "- Attributes: {}", attrs.join(", "));
        }
        let member_of = reg.classes_containing(name);
        if !member_of.is_empty() {
            let _ = writeln!(out, "- Member of: {}", member_of.join(", "));
        }
        out.push('\n');

        let cats: Vec<&DataCatSpec> = reg
            .data_cats
            .iter()
            .filter(|d| {
                d.host.element() == name
                    || match name.as_str() {
                        "termEntry" => d.levels.contains(&Level::Entry),
                        "langSet" => d.levels.contains(&Level::LangSet),
                        "tig" => d.levels.contains(&Level::TermSection),
                        _ => false,
                    }
            })
            .collect();
        if !cats.is_empty() {
            out.push_str("Data categories:\n\n| host | type | levels | values | remark |\n|---|---|---|---|---|\n");
            for d in cats {
                let levels: Vec<&str> = d.levels.iter().map(|l| l.as_str()).collect();
                let values = match &d.datatype {
                    Datatype::PlainText => "plain text".to_string(),
                    Datatype::Picklist(v) => v.join(", "),
                };
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    d.host,
                    d.name,
                    levels.join(", "),
                    values,
                    d.remark.as_deref().unwrap_or("")
                );
            }
            out.push('\n');
        }
        for ex in &spec.examples {
            let _ = writeln!(out, "Example:\n\n```xml\n{ex}\n```\n");
        }
    }
    Ok(out)
}

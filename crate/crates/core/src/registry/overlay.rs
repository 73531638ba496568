//! Line-oriented registry customization files.
//!
//! ```text
//! # comment
//! element <name> = <content-expr>      add or replace (tei:<name> for a new TEI element)
//! remove <name>                        drop an element
//! class <name> += <member>
//! class <name> -= <member>
//! datacat <host>/<name> @ <level>[,<level>...] [= <value>|<value>...]
//! ```

use super::*;

pub(super) fn apply(mut reg: Registry, text: &str) -> Result<Registry, RegistryError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| RegistryError::Parse { line, message };
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        let (keyword, rest) = body
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((body, ""));
        match keyword {
            "element" => {
                let (name, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `element <name> = <expr>`".into()))?;
                let name = name.trim();
                let (ns, name) = match name.strip_prefix("tei:") {
                    Some(n) => (Origin::Tei, n),
                    None => (Origin::Tbx, name.strip_prefix("tbx:").unwrap_or(name)),
                };
                check_name(name).map_err(err)?;
                let content = ContentExpr::parse(expr).map_err(err)?;
                match reg.elements.get_mut(name) {
                    Some(spec) => spec.content = content,
                    None => {
                        reg.elements.insert(
                            name.to_string(),
                            ElementSpec {
                                name: name.to_string(),
                                namespace: ns,
                                attr_classes: vec!["att.global".to_string()],
                                own_attrs: Vec::new(),
                                content,
                                doc: String::new(),
                                examples: Vec::new(),
                            },
                        );
                    }
                }
            }
            "remove" => {
                check_name(rest).map_err(err)?;
                if reg.elements.remove(rest).is_none() {
                    return Err(RegistryError::Dangling {
                        reference: rest.to_string(),
                        context: format!("remove directive on line {line}"),
                    });
                }
            }
            "class" => {
                let (name, op, member) = if let Some((n, m)) = rest.split_once("+=") {
                    (n.trim(), '+', m.trim())
                } else if let Some((n, m)) = rest.split_once("-=") {
                    (n.trim(), '-', m.trim())
                } else {
                    return Err(err("expected `class <name> += <member>` or `-=`".into()));
                };
                check_name(name).map_err(err)?;
                check_name(member).map_err(err)?;
                if op == '+' {
                    let kind = if name.starts_with("att.") {
                        ClassKind::Attribute
                    } else {
                        ClassKind::Model
                    };
                    reg.classes
                        .entry(name.to_string())
                        .or_insert_with(|| ClassSpec {
                            name: name.to_string(),
                            kind,
                            members: Vec::new(),
                            doc: String::new(),
                        })
                        .add(member);
                } else {
                    let class =
                        reg.classes
                            .get_mut(name)
                            .ok_or_else(|| RegistryError::Dangling {
                                reference: name.to_string(),
                                context: format!("class directive on line {line}"),
                            })?;
                    let before = class.members.len();
                    class.members.retain(|m| m != member);
                    if class.members.len() == before {
                        return Err(RegistryError::Dangling {
                            reference: member.to_string(),
                            context: format!("class {name} on line {line}"),
                        });
                    }
                }
            }
            "datacat" => {
                let (head, tail) = rest
                    .split_once('@')
                    .ok_or_else(|| err("expected `datacat <host>/<name> @ <levels>`".into()))?;
                let (host, name) = head
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| err("expected <host>/<name>".into()))?;
                let host = Host::from_element(host.trim())
                    .ok_or_else(|| err(format!("unknown data-category host {:?}", host.trim())))?;
                let name = name.trim();
                check_name(name).map_err(err)?;
                let (levels, values) = match tail.split_once('=') {
                    Some((l, v)) => (l, Some(v)),
                    None => (tail, None),
                };
                let levels = levels
                    .split(',')
                    .map(|l| {
                        Level::parse(l.trim())
                            .ok_or_else(|| err(format!("unknown level {:?}", l.trim())))
                    })
                    .collect::<Result<BTreeSet<_>, _>>()?;
                let datatype = match values {
                    None => Datatype::PlainText,
                    Some(v) => {
                        let values: Vec<String> = v
                            .split('|')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect();
                        if values.is_empty() {
                            return Err(err("empty picklist".into()));
                        }
                        Datatype::Picklist(values)
                    }
                };
                reg.data_cats
                    .retain(|d| !(d.host == host && d.name == name));
                reg.data_cats.push(DataCatSpec {
                    name: name.to_string(),
                    host,
                    levels,
                    datatype,
                    remark: None,
                });
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    Ok(reg)
}

fn check_name(name: &str) -> Result<(), String> {
    let ok = name
        .chars()
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | ':'));
    if ok {
        Ok(())
    } else {
        Err(format!("invalid name {name:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adds_data_category() {
        let r = load_default()
            .overlay("# TBX Basic extra\ndatacat termNote/administrativeStatus @ termSection\n")
            .unwrap();
        let d = r.data_cat(Host::TermNote, "administrativeStatus").unwrap();
        assert_eq!(d.levels, BTreeSet::from([Level::TermSection]));
        assert_eq!(d.datatype, Datatype::PlainText);
    }

    #[test]
    fn picklist_extension() {
        let r = load_default()
            .overlay("datacat transac/transactionType @ entry,langSet,termSection = origination | modification")
            .unwrap();
        assert_eq!(
            r.data_cat(Host::Transac, "transactionType")
                .unwrap()
                .datatype,
            Datatype::Picklist(vec!["origination".into(), "modification".into()])
        );
    }

    #[test]
    fn removes_class_member() {
        let r = load_default()
            .overlay("class model.auxInfo -= transacGrp")
            .unwrap();
        assert_eq!(
            r.resolve()
                .unwrap()
                .element("tig")
                .unwrap()
                .content
                .to_string(),
            "term, termNote*, (admin|descrip|descripGrp|note|ref)*"
        );
    }

    #[test]
    fn unknown_class_is_dangling() {
        for text in [
            "class model.bogus -= admin",
            "element note = (text | model.bogus)*",
        ] {
            match load_default().overlay(text) {
                Err(RegistryError::Dangling { reference, .. }) => {
                    assert_eq!(reference, "model.bogus")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn removing_referenced_element_fails() {
        match load_default().overlay("remove transacGrp") {
            Err(RegistryError::Dangling { reference, .. }) => assert_eq!(reference, "transacGrp"),
            other => panic!("{other:?}"),
        }
        // once unreferenced, removal is fine
        let r = load_default()
            .overlay("class model.auxInfo -= transacGrp\nremove transacGrp\nremove transac\nremove transacNote\nremove date")
            .unwrap();
        assert!(r.element("transacGrp").is_none());
    }

    #[test]
    fn parse_errors_carry_line() {
        match load_default().overlay("\n\nfrobnicate x") {
            Err(RegistryError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match load_default().overlay("element x = (a") {
            Err(RegistryError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_default().overlay("datacat descrip/x @ galaxy"),
            Err(RegistryError::Parse { .. })
        ));
    }

    #[test]
    fn empty_overlay_is_identity() {
        assert_eq!(
            load_default().overlay("# nothing\n\n").unwrap(),
            load_default()
        );
    }

    #[test]
    fn new_tei_element() {
        let r = load_default()
            .overlay("element tei:gloss = text*\nclass model.limitedPhrase += gloss")
            .unwrap();
        assert_eq!(r.element("gloss").unwrap().namespace, Origin::Tei);
    }
}

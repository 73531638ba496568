use std::collections::{BTreeMap, BTreeSet};

use super::*;

const TEXTUAL: &str = "(text | model.limitedPhrase | model.metaMarkup)*";

struct El {
    name: &'static str,
    ns: Origin,
    attr_classes: &'static [&'static str],
    own: &'static [&'static str],
    content: &'static str,
    doc: &'static str,
    examples: &'static [&'static str],
}

const ELEMENTS: &[El] = &[
    El {
        name: "termEntry",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "model.auxInfo*, langSet+",
        doc: "Terminological entry: everything recorded about one concept, \
              followed by one language section per language.",
        examples: &[r#"<termEntry xml:id="e1">
  <descrip type="subjectField">Industrie mécanique</descrip>
  <langSet xml:lang="de">…</langSet>
</termEntry>"#],
    },
    El {
        name: "langSet",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "model.auxInfo*, tig+",
        doc: "Language section: information about the concept in one language, \
              identified by the mandatory xml:lang, and the terms designating it.",
        examples: &[r#"<langSet xml:lang="fr">
  <tig><term>courroie trapézoïdale</term></tig>
</langSet>"#],
    },
    El {
        name: "tig",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "term, termNote*, model.auxInfo*",
        doc: "Term section: one term, the notes describing the term itself, \
              then auxiliary information.",
        examples: &[r#"<tig>
  <tei:term>Keilriemen</tei:term>
  <termNote type="grammaticalGender">masculine</termNote>
  <admin type="source">De Coster, …</admin>
</tig>"#],
    },
    El {
        name: "term",
        ns: Origin::Tei,
        attr_classes: &["att.global"],
        own: &[],
        content: "(text | hi)*",
        doc: "The term itself. Only highlighting is allowed inside it.",
        examples: &["<tei:term>Keilriemen</tei:term>"],
    },
    El {
        name: "termNote",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["type"],
        content: TEXTUAL,
        doc: "Information about the term, such as part of speech or \
              grammatical gender; the data category is named by @type.",
        examples: &[r#"<termNote type="partOfSpeech">noun</termNote>"#],
    },
    El {
        name: "admin",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["type"],
        content: "(text | model.limitedPhrase | model.metaMarkup | bibl)*",
        doc: "Administrative information (source, responsibility, project \
              subset, …); the data category is named by @type. A source may \
              be wrapped in an unstructured bibl.",
        examples: &[
            r#"<admin type="source">De Coster, Wörterbuch, Kraftfahrzeugtechnik, SAUR, München, 1982</admin>"#,
        ],
    },
    El {
        name: "descrip",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["type"],
        content: TEXTUAL,
        doc: "Descriptive information about the concept, such as a \
              definition or subject field; the data category is named by @type.",
        examples: &[
            r#"<descrip type="definition">endloser Riemen mit trapezförmigem Querschnitt</descrip>"#,
        ],
    },
    El {
        name: "descripGrp",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "descrip, (admin | note | ref)*",
        doc: "Groups a descrip with the information that qualifies it.",
        examples: &[r#"<descripGrp>
  <descrip type="definition">courroie sans fin …</descrip>
  <admin type="source">De Coster, …</admin>
</descripGrp>"#],
    },
    El {
        name: "transacGrp",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "transac, (transacNote | date | note | ref)*",
        doc: "Groups a transaction on the entry with its date and the \
              party responsible for it.",
        examples: &[r#"<transacGrp>
  <transac type="transactionType">origination</transac>
  <date>2013-11-04</date>
</transacGrp>"#],
    },
    El {
        name: "transac",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["type"],
        content: TEXTUAL,
        doc: "A transaction (origination, modification, …).",
        examples: &[],
    },
    El {
        name: "transacNote",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["type"],
        content: TEXTUAL,
        doc: "Qualifies a transaction, for instance with the responsible person.",
        examples: &[],
    },
    El {
        name: "date",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "text",
        doc: "Date of a transaction, as YYYY-MM-DD.",
        examples: &["<date>2013-11-04</date>"],
    },
    El {
        name: "note",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: TEXTUAL,
        doc: "Free-text note at any level.",
        examples: &["<note>wird zum Antrieb der Lichtmaschine benutzt</note>"],
    },
    El {
        name: "ref",
        ns: Origin::Tei,
        attr_classes: &["att.global", "att.pointing"],
        own: &["type"],
        content: TEXTUAL,
        doc: "Pointer by URI: a bare fragment for elements of the same \
              document, any other URI for external resources.",
        examples: &[
            r##"<tei:ref target="#t1">see Keilriemen</tei:ref>"##,
            r#"<tei:ref target="http://astm.org/E284">ASTM E284</tei:ref>"#,
        ],
    },
    El {
        name: "hi",
        ns: Origin::Tei,
        attr_classes: &["att.global"],
        own: &[],
        content: TEXTUAL,
        doc: "Highlighted span. Carries no pointer; cross-references use ref.",
        examples: &[r#"<tei:hi rend="italic">opacity</tei:hi>"#],
    },
    El {
        name: "foreign",
        ns: Origin::Tei,
        attr_classes: &["att.global"],
        own: &[],
        content: TEXTUAL,
        doc: "Word or phrase in another language than the surrounding text.",
        examples: &[r#"<tei:foreign xml:lang="en">V-belt</tei:foreign>"#],
    },
    El {
        name: "bpt",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["i"],
        content: "text?",
        doc: "Opening native code from a source format, paired with an ept by @i.",
        examples: &[r#"<bpt i="1">&lt;b&gt;</bpt>"#],
    },
    El {
        name: "ept",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &["i"],
        content: "text?",
        doc: "Closing native code, paired with a bpt by @i.",
        examples: &[r#"<ept i="1">&lt;/b&gt;</ept>"#],
    },
    El {
        name: "ph",
        ns: Origin::Tbx,
        attr_classes: &["att.global"],
        own: &[],
        content: "text?",
        doc: "Standalone native code.",
        examples: &["<ph>&lt;br/&gt;</ph>"],
    },
    El {
        name: "bibl",
        ns: Origin::Tei,
        attr_classes: &["att.global"],
        own: &[],
        content: TEXTUAL,
        doc: "Unstructured bibliographic citation.",
        examples: &[
            "<tei:bibl>De Coster, Wörterbuch, Kraftfahrzeugtechnik, SAUR, München, 1982</tei:bibl>",
        ],
    },
];

struct Class {
    name: &'static str,
    kind: ClassKind,
    members: &'static [&'static str],
    doc: &'static str,
}

const CLASSES: &[Class] = &[
    Class {
        name: "model.auxInfo",
        kind: ClassKind::Model,
        members: &[
            "admin",
            "descrip",
            "descripGrp",
            "transacGrp",
            "note",
            "ref",
        ],
        doc: "Auxiliary information allowed at every structural level.",
    },
    Class {
        name: "model.metaMarkup",
        kind: ClassKind::Model,
        members: &["bpt", "ept", "ph"],
        doc: "Encapsulated native markup.",
    },
    Class {
        name: "model.limitedPhrase",
        kind: ClassKind::Model,
        members: &["hi", "foreign", "ref"],
        doc: "Inline phrase-level elements.",
    },
    Class {
        name: "att.global",
        kind: ClassKind::Attribute,
        members: &["xml:id", "xml:lang", "xml:base", "xml:space", "n", "rend"],
        doc: "Attributes available on every element.",
    },
    Class {
        name: "att.pointing",
        kind: ClassKind::Attribute,
        members: &["target"],
        doc: "URI pointers.",
    },
];

pub(super) fn registry() -> Registry {
    use Level::*;
    let mut elements = BTreeMap::new();
    for e in ELEMENTS {
        elements.insert(
            e.name.to_string(),
            ElementSpec {
                name: e.name.to_string(),
                namespace: e.ns,
                attr_classes: e.attr_classes.iter().map(|s| s.to_string()).collect(),
                own_attrs: e.own.iter().map(|s| s.to_string()).collect(),
                content: ContentExpr::parse(e.content).expect("built-in content model"),
                doc: e.doc.to_string(),
                examples: e.examples.iter().map(|s| s.to_string()).collect(),
            },
        );
    }
    let classes = CLASSES
        .iter()
        .map(|c| {
            (
                c.name.to_string(),
                ClassSpec {
                    name: c.name.to_string(),
                    kind: c.kind,
                    members: c.members.iter().map(|s| s.to_string()).collect(),
                    doc: c.doc.to_string(),
                },
            )
        })
        .collect();
    let cat = |host, name: &str, levels: &[Level], datatype, remark: Option<&str>| DataCatSpec {
        name: name.to_string(),
        host,
        levels: levels.iter().copied().collect::<BTreeSet<_>>(),
        datatype,
        remark: remark.map(str::to_string),
    };
    let picklist = |v: &[&str]| Datatype::Picklist(v.iter().map(|s| s.to_string()).collect());
    let data_cats = vec![
        cat(
            Host::Descrip,
            "definition",
            &[Entry, LangSet],
            Datatype::PlainText,
            None,
        ),
        cat(
            Host::Descrip,
            "subjectField",
            &[Entry],
            Datatype::PlainText,
            None,
        ),
        cat(
            Host::Admin,
            "source",
            &Level::ALL,
            Datatype::PlainText,
            None,
        ),
        cat(
            Host::Admin,
            "responsibility",
            &Level::ALL,
            Datatype::PlainText,
            None,
        ),
        cat(
            Host::Admin,
            "projectSubset",
            &[Entry],
            Datatype::PlainText,
            Some("industrial: of doubtful relevance outside localization workflows"),
        ),
        cat(
            Host::TermNote,
            "partOfSpeech",
            &[TermSection],
            picklist(&["noun", "verb", "adjective", "adverb", "properNoun", "other"]),
            None,
        ),
        cat(
            Host::TermNote,
            "grammaticalGender",
            &[TermSection],
            picklist(&["masculine", "feminine", "neuter", "other"]),
            None,
        ),
        cat(
            Host::Transac,
            "transactionType",
            &Level::ALL,
            picklist(&["origination", "modification"]),
            None,
        ),
        cat(
            Host::TransacNote,
            "responsibility",
            &Level::ALL,
            Datatype::PlainText,
            None,
        ),
    ];
    Registry {
        elements,
        classes,
        data_cats,
        version: "termweave-default-1".to_string(),
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use common::{gen, oracle};
use termweave::model::{AuxItem, EntryChild, Inline, RefFlavor};
use termweave::pointer::{is_uri_reference, resolve_pointer, Resolution};
use termweave::registry::compile_content_model;
use termweave::visit::{walk, NodeRef};
use termweave::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strict() -> ConvertOptions {
    ConvertOptions {
        strict_legacy: true,
        ..Default::default()
    }
}

fn keilriemen_fidelity() -> Outcome {
    let parsed = common::parse_fixture("keilriemen.xml");
    ensure(!parsed.has_errors(), || {
        format!("parse errors: {:?}", parsed.diagnostics)
    })?;
    let doc = parsed.document.ok_or("no document")?;
    let report = validate(&doc, &load_default()).map_err(|e| e.to_string())?;
    ensure(report.is_valid(), || {
        format!("invalid: {:?}", report.diagnostics)
    })?;
    ensure(doc.entries.len() == 1, || {
        format!("{} entries", doc.entries.len())
    })?;
    let entry = &doc.entries[0];
    let descrips: Vec<_> = entry
        .aux()
        .filter_map(|a| match a {
            AuxItem::Descrip(d) => Some(d),
            _ => None,
        })
        .collect();
    ensure(entry.aux().count() == 1 && descrips.len() == 1, || {
        "expected exactly one entry-level descrip".into()
    })?;
    let d = descrips[0];
    ensure(
        d.ty == "subjectField" && d.content.plain_text() == "Industrie mécanique",
        || format!("entry descrip is {}={:?}", d.ty, d.content.plain_text()),
    )?;
    let langs: Vec<_> = entry.lang_sets().map(|l| l.lang().unwrap_or("")).collect();
    ensure(langs == ["de", "fr"], || format!("langSets {langs:?}"))?;
    let de = entry.lang_sets().next().unwrap();
    let terms: Vec<String> = de
        .tigs()
        .filter_map(|t| t.term())
        .map(|t| t.content.plain_text())
        .collect();
    ensure(terms == ["Keilriemen"], || {
        format!("German terms {terms:?}")
    })?;
    ensure(
        entry
            .children
            .iter()
            .filter(|c| matches!(c, EntryChild::LangSet(_)))
            .count()
            == 2,
        || "langSet count".into(),
    )?;
    Ok("1 entry, subjectField, de+fr, Keilriemen".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = gen::rng(0x7b3c_0001);
    let mut pairs = 0usize;
    let mut accepted = 0usize;
    while pairs < 10_000 {
        let e = gen::expr(&mut rng, 4);
        let m = compile_content_model(&e).map_err(|err| format!("{e}: {err}"))?;
        for _ in 0..10 {
            let s = gen::string(&mut rng, &e);
            let got = m.accepts(s.iter().copied());
            ensure(got == oracle::accepts(&e, &s), || {
                format!("disagreement on {e} with {s:?}: matcher says {got}")
            })?;
            accepted += got as usize;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree, {accepted} accepted"))
}

fn round_trip() -> Outcome {
    let mut rng = gen::rng(0x7b3c_0003);
    let n = 60;
    for i in 0..n {
        let d = gen::document(&mut rng);
        let tei = to_tei(&d, &ConvertOptions::default()).map_err(|e| e.to_string())?;
        ensure(tei.loss_records.is_empty(), || {
            format!("doc {i}: losses {:?}", tei.loss_records)
        })?;
        let back = to_tbx(&tei.document, &strict()).map_err(|e| e.to_string())?;
        ensure(back.loss_records.is_empty(), || {
            format!("doc {i}: losses {:?}", back.loss_records)
        })?;
        let (a, b) = (canonicalize(&back.document), canonicalize(&d));
        ensure(a == b, || {
            format!("doc {i}: diverges at {:?}", first_divergence(&a, &b))
        })?;
    }
    Ok(format!("{n}/{n} documents identical"))
}

fn reversible(rel: &str, d: &Document) -> Result<(), String> {
    let rt = check_roundtrip(d);
    ensure(rt.equal && rt.loss_records.is_empty(), || {
        format!("{rel}: not reversible: {:?}", rt.divergence)
    })
}

fn migration_rules() -> Outcome {
    let xref = common::load("rules/xref.xml");
    let out = to_tei(&xref, &ConvertOptions::default()).map_err(|e| e.to_string())?;
    let mut xrefs = 0;
    walk(&out.document, &mut |v| {
        if v.node
            .pointer()
            .is_some_and(|p| p.flavor == RefFlavor::Xref)
        {
            xrefs += 1;
        }
    });
    ensure(xrefs == 0, || format!("{xrefs} xref left"))?;
    reversible("xref", &xref)?;

    let idref = common::load("rules/idref.xml");
    let out = to_tei(&idref, &ConvertOptions::default()).map_err(|e| e.to_string())?;
    let mut targets = Vec::new();
    walk(&out.document, &mut |v| {
        targets.extend(v.node.target().map(str::to_string))
    });
    ensure(!targets.is_empty(), || "no targets".into())?;
    for t in &targets {
        ensure(is_uri_reference(t), || {
            format!("{t:?} is not a URI reference")
        })?;
        ensure(
            matches!(resolve_pointer(&out.document, t), Ok(Resolution::Local(_))),
            || format!("{t:?} does not resolve"),
        )?;
    }
    reversible("idref", &idref)?;

    let hi = common::load("rules/hi-target.xml");
    let out = to_tei(&hi, &ConvertOptions::default()).map_err(|e| e.to_string())?;
    let migrated = out
        .diagnostics
        .iter()
        .filter(|d| d.code == Code::HiTargetMigrated)
        .count();
    ensure(migrated == 1 && out.diagnostics.len() == 1, || {
        format!("diagnostics {:?}", out.diagnostics)
    })?;
    let mut refs = Vec::new();
    walk(&out.document, &mut |v| {
        if let NodeRef::Inline(Inline::Ref(p)) = v.node {
            refs.push((p.flavor, p.attrs.rend.clone(), p.target.clone()));
        }
        if let NodeRef::Inline(Inline::Hi(h)) = v.node {
            refs.push((RefFlavor::Ref, Some("leftover hi".into()), h.target.clone()));
        }
    });
    let want = vec![(
        RefFlavor::TeiRef,
        Some("hi".to_string()),
        Some("#fig1".to_string()),
    )];
    ensure(refs == want, || format!("converted highlights {refs:?}"))?;
    reversible("hi-target", &hi)?;
    Ok("xref, IDREF and hi@target rules hold and reverse".into())
}

/// Codes a mutant yields: parse, validation and, for migration codes, conversion.
fn observed(rel: &str) -> Vec<Diagnostic> {
    let parsed = common::parse_fixture(rel);
    let mut diags = parsed.diagnostics;
    if let Some(doc) = parsed.document {
        diags.extend(validate(&doc, &load_default()).unwrap().diagnostics);
        if let Ok(r) = to_tei(&doc, &ConvertOptions::default()) {
            diags.extend(r.diagnostics);
        }
    }
    diags
}

const MUTANTS: [(&str, Code); 15] = [
    ("mutants/not-well-formed.xml", Code::NotXml),
    ("mutants/unknown-element.xml", Code::UnknownElement),
    ("mutants/unknown-namespace.xml", Code::UnknownNamespace),
    ("mutants/empty.xml", Code::EmptyDocument),
    ("mutants/no-langset.xml", Code::ContentModel),
    ("mutants/missing-lang.xml", Code::MissingLang),
    ("mutants/unknown-datacat.xml", Code::UnknownDataCategory),
    ("mutants/wrong-level.xml", Code::DataCategoryLevel),
    ("mutants/bad-picklist.xml", Code::DataValue),
    ("mutants/duplicate-id.xml", Code::DuplicateId),
    ("mutants/dangling-pointer.xml", Code::DanglingPointer),
    ("mutants/external-pointer.xml", Code::ExternalPointer),
    ("mutants/duplicate-lang.xml", Code::DuplicateLanguage),
    ("mutants/hi-target.xml", Code::HiTargetMigrated),
    ("mutants/ambiguous-target.xml", Code::AmbiguousTarget),
];

fn mutation_matrix() -> Outcome {
    let mut killed = 0;
    for code in Code::ALL {
        ensure(MUTANTS.iter().any(|(_, c)| *c == code), || {
            format!("no mutant for {code}")
        })?;
    }
    for (rel, code) in MUTANTS {
        let diags = observed(rel);
        ensure(diags.iter().any(|d| d.code == code), || {
            format!("{rel}: {code} not raised, got {diags:?}")
        })?;
        let stray: Vec<_> = diags
            .iter()
            .filter(|d| d.code != code && d.is_error())
            .collect();
        ensure(stray.is_empty(), || {
            format!("{rel}: unrelated errors {stray:?}")
        })?;
        killed += 1;
    }
    let clean = observed("mainstream.xml");
    ensure(!clean.iter().any(Diagnostic::is_error), || {
        format!("clean fixture has errors {clean:?}")
    })?;
    Ok(format!("{killed}/{} mutants killed", MUTANTS.len()))
}

fn literate_coherence() -> Outcome {
    let overlay =
        load_from_file(common::fixture("registry/basic-extra.reg")).map_err(|e| e.to_string())?;
    for (label, reg) in [("default", load_default()), ("overlay", overlay)] {
        let schema = emit_schema(&reg).map_err(|e| e.to_string())?;
        let docs = emit_docs(&reg).map_err(|e| e.to_string())?;
        let rules: Vec<&str> = schema
            .lines()
            .map(|l| l.split(" = ").next().unwrap_or(l))
            .collect();
        let heads: Vec<&str> = docs.lines().filter_map(|l| l.strip_prefix("## ")).collect();
        ensure(!rules.is_empty() && rules == heads, || {
            format!("{label}: rules {rules:?} vs headings {heads:?}")
        })?;
        ensure(
            emit_schema(&reg).unwrap() == schema && emit_docs(&reg).unwrap() == docs,
            || format!("{label}: output differs between runs"),
        )?;
    }
    let again = load_from_file(common::fixture("registry/basic-extra.reg")).unwrap();
    let first = load_from_file(common::fixture("registry/basic-extra.reg")).unwrap();
    ensure(
        emit_docs(&again).unwrap() == emit_docs(&first).unwrap(),
        || "overlay reload differs".into(),
    )?;
    Ok("default and overlay registries coherent and deterministic".into())
}

fn text_conservation() -> Outcome {
    let mut docs = common::parsed_corpus();
    let mut rng = gen::rng(0x7b3c_0007);
    docs.extend((0..20).map(|i| (format!("generated-{i}"), gen::document(&mut rng))));
    let mut conversions = 0;
    for (name, d) in &docs {
        let want = d.text_content();
        let check =
            |label: &str, r: Result<ConvertResult, ConvertError>| -> Result<Document, String> {
                let r = r.map_err(|e| format!("{name} {label}: {e}"))?;
                let got = r.document.text_content();
                ensure(got == want, || {
                    format!("{name} {label}: {want:?} became {got:?}")
                })?;
                Ok(r.document)
            };
        match d.dialect {
            Dialect::MainstreamTbx => {
                let tei = check("to_tei", to_tei(d, &ConvertOptions::default()))?;
                let wrapped = ConvertOptions {
                    wrap_sources_as_bibl: true,
                    ..Default::default()
                };
                check("to_tei wrapped", to_tei(d, &wrapped))?;
                check("to_tbx strict", to_tbx(&tei, &strict()))?;
                check("to_tbx", to_tbx(&tei, &ConvertOptions::default()))?;
            }
            Dialect::TeiBlend => {
                let tbx = check("to_tbx strict", to_tbx(d, &strict()))?;
                check("to_tbx", to_tbx(d, &ConvertOptions::default()))?;
                check("to_tei", to_tei(&tbx, &ConvertOptions::default()))?;
            }
        }
        conversions += 1;
    }
    Ok(format!(
        "{conversions} documents conserve text in both directions"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "reference entry fidelity",
            keilriemen_fidelity,
            Duration::from_secs(1),
        ),
        (
            "content-model oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(30),
        ),
        (
            "round-trip isomorphism",
            round_trip,
            Duration::from_secs(10),
        ),
        ("migration rules", migration_rules, Duration::from_secs(60)),
        (
            "mutation kill matrix",
            mutation_matrix,
            Duration::from_secs(60),
        ),
        (
            "literate coherence",
            literate_coherence,
            Duration::from_secs(60),
        ),
        (
            "character-data conservation",
            text_conservation,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))?;
            Ok(msg)
        });
        match outcome {
            Ok(msg) => println!(
                "PASS  criterion {}: {name} ({msg}; {} ms)",
                i + 1,
                took.as_millis()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "FAIL  criterion {}: {name} ({msg}; {} ms)",
                    i + 1,
                    took.as_millis()
                );
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Seeded random content expressions and documents.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use termweave::model::*;
use termweave::registry::{ContentExpr, Token};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Element names available to random expressions; `text` is the fifth symbol.
pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn expr(rng: &mut ChaCha8Rng, depth: u32) -> ContentExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => ContentExpr::Text,
            1 => ContentExpr::Empty,
            _ => ContentExpr::elem(NAMES.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => ContentExpr::Seq(
            (0..rng.gen_range(1..=3))
                .map(|_| expr(rng, depth - 1))
                .collect(),
        ),
        1 => ContentExpr::Choice(
            (0..rng.gen_range(1..=3))
                .map(|_| expr(rng, depth - 1))
                .collect(),
        ),
        _ => {
            let child = expr(rng, depth - 1);
            match rng.gen_range(0..4) {
                0 => ContentExpr::star(child),
                1 => ContentExpr::plus(child),
                2 => ContentExpr::opt(child),
                _ => {
                    let min = rng.gen_range(0..=2);
                    let max = if rng.gen_bool(0.3) {
                        None
                    } else {
                        Some(min + rng.gen_range(0..=2))
                    };
                    ContentExpr::rep(child, min, max)
                }
            }
        }
    }
}

fn token(name: &str) -> Token<'static> {
    match NAMES.iter().find(|n| **n == name) {
        Some(n) => Token::Elem(n),
        None => Token::Text,
    }
}

/// Random member of the expression's language, if one is found within `budget` tokens.
fn sample(rng: &mut ChaCha8Rng, e: &ContentExpr, out: &mut Vec<Token<'static>>, budget: usize) {
    if out.len() > budget {
        return;
    }
    match e {
        ContentExpr::Empty | ContentExpr::Class(_) => {}
        ContentExpr::Text => out.push(Token::Text),
        ContentExpr::Elem(n) => out.push(token(n)),
        ContentExpr::Seq(v) => v.iter().for_each(|c| sample(rng, c, out, budget)),
        ContentExpr::Choice(v) => {
            let c = &v[rng.gen_range(0..v.len())];
            sample(rng, c, out, budget)
        }
        ContentExpr::Rep { child, min, max } => {
            let hi = max.unwrap_or(min + 3);
            for _ in 0..rng.gen_range(*min..=hi) {
                sample(rng, child, out, budget);
            }
        }
    }
}

/// A token string of length at most 8: half drawn from the language, half uniform.
pub fn string(rng: &mut ChaCha8Rng, e: &ContentExpr) -> Vec<Token<'static>> {
    if rng.gen_bool(0.5) {
        let mut out = Vec::new();
        sample(rng, e, &mut out, 8);
        if out.len() <= 8 {
            if rng.gen_bool(0.3) && !out.is_empty() {
                let i = rng.gen_range(0..out.len());
                out[i] = random_token(rng);
            }
            return out;
        }
    }
    (0..rng.gen_range(0..=8))
        .map(|_| random_token(rng))
        .collect()
}

fn random_token(rng: &mut ChaCha8Rng) -> Token<'static> {
    match rng.gen_range(0..5) {
        4 => Token::Text,
        i => Token::Elem(NAMES[i]),
    }
}

const WORDS: [&str; 12] = [
    "belt",
    "Keilriemen",
    "opacité",
    "a & b",
    "x < y",
    "\"quoted\"",
    "1 > 0",
    "中文",
    "  spaced  ",
    "line\nbreak",
    "it's",
    "ü",
];
const LANGS: [&str; 5] = ["en", "de", "fr", "es", "zh-Hans"];
const URLS: [&str; 3] = [
    "http://iate.europa.eu",
    "https://www.astm.org/e0284-17.html",
    "urn:isbn:0451450523",
];

struct DocGen<'r> {
    rng: &'r mut ChaCha8Rng,
    ids: Vec<String>,
    pairing: u32,
}

impl DocGen<'_> {
    fn text(&mut self) -> String {
        WORDS.choose(self.rng).unwrap().to_string()
    }

    fn idref(&mut self) -> String {
        self.ids.choose(self.rng).unwrap().clone()
    }

    fn mixed(&mut self, depth: u32, term: bool) -> MixedContent {
        let mut c = MixedContent::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let roll = if depth == 0 {
                0
            } else {
                self.rng.gen_range(0..10)
            };
            let pick = if term && roll >= 5 { 4 } else { roll };
            match pick {
                0..=3 => c.push_text(&self.text()),
                4 => c.push(Inline::Hi(Hi {
                    origin: Origin::Tbx,
                    attrs: if self.rng.gen_bool(0.5) {
                        GlobalAttrs {
                            rend: Some("italic".into()),
                            ..Default::default()
                        }
                    } else {
                        GlobalAttrs::default()
                    },
                    target: None,
                    content: self.mixed(depth - 1, term),
                })),
                5 => c.push(Inline::Hi(Hi {
                    origin: Origin::Tbx,
                    attrs: GlobalAttrs::default(),
                    target: Some(self.idref()),
                    content: self.mixed(depth - 1, false),
                })),
                6 => c.push(Inline::Foreign(Foreign {
                    origin: Origin::Tbx,
                    attrs: GlobalAttrs::with_lang(*LANGS.choose(self.rng).unwrap()),
                    content: self.mixed(depth - 1, false),
                })),
                7 => {
                    let target = self.idref();
                    c.push(Inline::Ref(Pointer::new(
                        RefFlavor::Ref,
                        target,
                        self.mixed(depth - 1, false),
                    )));
                }
                8 => {
                    let target = URLS.choose(self.rng).unwrap().to_string();
                    c.push(Inline::Ref(Pointer::new(
                        RefFlavor::Xref,
                        target,
                        self.mixed(depth - 1, false),
                    )));
                }
                _ => {
                    self.pairing += 1;
                    let i = Some(self.pairing.to_string());
                    if self.rng.gen_bool(0.5) {
                        c.push(Inline::Ph(MetaMarkup {
                            attrs: GlobalAttrs::default(),
                            i: None,
                            content: "<br/>".into(),
                        }));
                    } else {
                        c.push(Inline::Bpt(MetaMarkup {
                            attrs: GlobalAttrs::default(),
                            i: i.clone(),
                            content: "<b>".into(),
                        }));
                        c.push_text(&self.text());
                        c.push(Inline::Ept(MetaMarkup {
                            attrs: GlobalAttrs::default(),
                            i,
                            content: "</b>".into(),
                        }));
                    }
                }
            }
        }
        c
    }

    fn data(&mut self, ty: &str) -> DataElement {
        DataElement::new(ty, self.mixed(2, false))
    }

    fn pick(&mut self, ty: &str, values: &[&str]) -> DataElement {
        DataElement::new(ty, *values.choose(self.rng).unwrap())
    }

    fn transac_grp(&mut self) -> AuxItem {
        let mut members = vec![GroupMember::Transac(
            self.pick("transactionType", &["origination", "modification"]),
        )];
        if self.rng.gen_bool(0.7) {
            let d = format!(
                "20{:02}-{:02}-{:02}",
                self.rng.gen_range(0..30),
                self.rng.gen_range(1..=12),
                self.rng.gen_range(1..=28)
            );
            members.push(GroupMember::Date(DateItem {
                attrs: GlobalAttrs::default(),
                value: d,
            }));
        }
        if self.rng.gen_bool(0.5) {
            members.push(GroupMember::TransacNote(self.data("responsibility")));
        }
        AuxItem::TransacGrp(Group {
            attrs: GlobalAttrs::default(),
            members,
        })
    }

    fn shared_aux(&mut self) -> AuxItem {
        match self.rng.gen_range(0..6) {
            0 => AuxItem::Admin(self.data("source")),
            1 => AuxItem::Admin(self.data("responsibility")),
            2 => self.transac_grp(),
            3 => AuxItem::Note(Note::new(self.mixed(3, false))),
            4 => {
                let target = self.idref();
                AuxItem::Ref(Pointer::new(RefFlavor::Ref, target, self.mixed(1, false)))
            }
            _ => {
                let target = URLS.choose(self.rng).unwrap().to_string();
                AuxItem::Ref(Pointer::new(RefFlavor::Xref, target, self.mixed(1, false)))
            }
        }
    }

    fn entry_aux(&mut self) -> AuxItem {
        match self.rng.gen_range(0..10) {
            0 => AuxItem::Descrip(self.data("subjectField")),
            1 => AuxItem::Descrip(self.data("definition")),
            2 => AuxItem::Admin(self.data("projectSubset")),
            3 => self.descrip_grp(),
            _ => self.shared_aux(),
        }
    }

    fn lang_set_aux(&mut self) -> AuxItem {
        match self.rng.gen_range(0..8) {
            0 => AuxItem::Descrip(self.data("definition")),
            1 => self.descrip_grp(),
            _ => self.shared_aux(),
        }
    }

    fn descrip_grp(&mut self) -> AuxItem {
        let mut members = vec![GroupMember::Descrip(self.data("definition"))];
        if self.rng.gen_bool(0.6) {
            members.push(GroupMember::Admin(self.data("source")));
        }
        if self.rng.gen_bool(0.3) {
            members.push(GroupMember::Note(Note::new(self.mixed(1, false))));
        }
        AuxItem::DescripGrp(Group {
            attrs: GlobalAttrs::default(),
            members,
        })
    }

    fn tig(&mut self, id: Option<String>) -> TermSection {
        let mut children = vec![TigChild::Term(Term::new(Origin::Tbx, self.mixed(2, true)))];
        if self.rng.gen_bool(0.7) {
            children.push(TigChild::TermNote(
                self.pick("partOfSpeech", &["noun", "verb", "adjective", "other"]),
            ));
        }
        if self.rng.gen_bool(0.4) {
            children.push(TigChild::TermNote(
                self.pick("grammaticalGender", &["masculine", "feminine", "neuter"]),
            ));
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            children.push(TigChild::Aux(self.shared_aux()));
        }
        TermSection {
            attrs: GlobalAttrs {
                id,
                ..Default::default()
            },
            children,
        }
    }
}

/// A valid, loss-free MainstreamTBX document: 1 to 5 entries of 1 to 3
/// language sections of 1 to 3 term sections, with auxiliary items drawn
/// from the default registry.
pub fn document(rng: &mut ChaCha8Rng) -> Document {
    let shape: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| rng.gen_range(1..=3))
                .collect()
        })
        .collect();
    let mut ids = Vec::new();
    for (e, langs) in shape.iter().enumerate() {
        ids.push(format!("e{}", e + 1));
        for (l, tigs) in langs.iter().enumerate() {
            for t in 0..*tigs {
                ids.push(format!("t{}-{}-{}", e + 1, l + 1, t + 1));
            }
        }
    }
    let mut g = DocGen {
        rng,
        ids,
        pairing: 0,
    };
    let mut entries = Vec::new();
    for (e, langs) in shape.iter().enumerate() {
        let mut children = Vec::new();
        for _ in 0..g.rng.gen_range(0..=3) {
            children.push(EntryChild::Aux(g.entry_aux()));
        }
        let mut langs_left: Vec<&str> = LANGS.to_vec();
        langs_left.shuffle(g.rng);
        for (l, tigs) in langs.iter().enumerate() {
            let mut ls = LangSet {
                attrs: GlobalAttrs::with_lang(langs_left[l]),
                children: Vec::new(),
            };
            for _ in 0..g.rng.gen_range(0..=2) {
                ls.children.push(LangSetChild::Aux(g.lang_set_aux()));
            }
            for t in 0..*tigs {
                let id = g
                    .rng
                    .gen_bool(0.7)
                    .then(|| format!("t{}-{}-{}", e + 1, l + 1, t + 1));
                let tig = g.tig(id);
                ls.children.push(LangSetChild::Tig(tig));
            }
            children.push(EntryChild::LangSet(ls));
        }
        entries.push(TermEntry {
            attrs: GlobalAttrs::with_id(format!("e{}", e + 1)),
            children,
        });
    }
    // Only identifiers that were actually assigned may be pointed at.
    let mut doc = Document::with_entries(Dialect::MainstreamTbx, entries);
    retarget_dangling(&mut doc);
    doc
}

fn retarget_dangling(doc: &mut Document) {
    let census = termweave::pointer::collect_ids(doc);
    let fix = |t: &mut Option<String>, entry: &str| {
        if let Some(x) = t {
            if !x.contains(':') && census.get(x).is_none() {
                *x = entry.to_string();
            }
        }
    };
    for entry in &mut doc.entries {
        let id = entry.attrs.id.clone().unwrap();
        visit_inline_targets(entry, &mut |t| fix(t, &id));
    }
}

fn visit_inline_targets(entry: &mut TermEntry, f: &mut impl FnMut(&mut Option<String>)) {
    fn content(c: &mut MixedContent, f: &mut impl FnMut(&mut Option<String>)) {
        for n in &mut c.0 {
            match n {
                Inline::Hi(h) => f(&mut h.target),
                Inline::Ref(p) => f(&mut p.target),
                _ => {}
            }
            if let Some(c) = n.content_mut() {
                content(c, f);
            }
        }
    }
    fn aux(a: &mut AuxItem, f: &mut impl FnMut(&mut Option<String>)) {
        match a {
            AuxItem::Admin(d) | AuxItem::Descrip(d) => content(&mut d.content, f),
            AuxItem::Note(n) => content(&mut n.content, f),
            AuxItem::Ref(p) => {
                f(&mut p.target);
                content(&mut p.content, f)
            }
            AuxItem::DescripGrp(g) | AuxItem::TransacGrp(g) => {
                for m in &mut g.members {
                    match m {
                        GroupMember::Descrip(d)
                        | GroupMember::Admin(d)
                        | GroupMember::Transac(d)
                        | GroupMember::TransacNote(d) => content(&mut d.content, f),
                        GroupMember::Note(n) => content(&mut n.content, f),
                        GroupMember::Ref(p) => {
                            f(&mut p.target);
                            content(&mut p.content, f)
                        }
                        GroupMember::Date(_) => {}
                    }
                }
            }
        }
    }
    for c in &mut entry.children {
        match c {
            EntryChild::Aux(a) => aux(a, f),
            EntryChild::LangSet(ls) => {
                for c in &mut ls.children {
                    match c {
                        LangSetChild::Aux(a) => aux(a, f),
                        LangSetChild::Tig(t) => {
                            for c in &mut t.children {
                                match c {
                                    TigChild::Term(t) => content(&mut t.content, f),
                                    TigChild::TermNote(d) => content(&mut d.content, f),
                                    TigChild::Aux(a) => aux(a, f),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

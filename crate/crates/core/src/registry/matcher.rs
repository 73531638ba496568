//! Executable content models.
//!
//! A resolved [`ContentExpr`] is linearized into positions (one per symbol
//! occurrence, counted repetitions unrolled), the position automaton is
//! built from the first/last/follow sets, and the reachable position sets
//! are determinized into a transition table.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::ContentExpr;

/// One child of an element as seen by a content model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token<'a> {
    Elem(&'a str),
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unresolved class reference {0:?}")]
    UnresolvedClass(String),
    #[error("invalid expression: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Symbol {
    Elem(String),
    Text,
}

/// Deterministic acceptor for the child sequences of one content model.
#[derive(Debug, Clone)]
pub struct Matcher {
    rule: String,
    elems: HashMap<String, usize>,
    text: Option<usize>,
    width: usize,
    /// `states * width` entries; `DEAD` marks no transition.
    table: Vec<u32>,
    accepting: Vec<bool>,
}

const DEAD: u32 = u32::MAX;

enum Lin {
    Empty,
    Pos(usize),
    Seq(Vec<Lin>),
    Alt(Vec<Lin>),
    Star(Box<Lin>),
}

struct Linearizer {
    symbols: Vec<usize>,
    alphabet: HashMap<Symbol, usize>,
}

impl Linearizer {
    fn symbol(&mut self, s: Symbol) -> Lin {
        let n = self.alphabet.len();
        let id = *self.alphabet.entry(s).or_insert(n);
        self.symbols.push(id);
        Lin::Pos(self.symbols.len() - 1)
    }

    fn lin(&mut self, e: &ContentExpr) -> Result<Lin, CompileError> {
        Ok(match e {
            ContentExpr::Empty => Lin::Empty,
            ContentExpr::Text => self.symbol(Symbol::Text),
            ContentExpr::Elem(n) => self.symbol(Symbol::Elem(n.clone())),
            ContentExpr::Class(n) => return Err(CompileError::UnresolvedClass(n.clone())),
            ContentExpr::Seq(v) => {
                Lin::Seq(v.iter().map(|c| self.lin(c)).collect::<Result<_, _>>()?)
            }
            ContentExpr::Choice(v) => {
                Lin::Alt(v.iter().map(|c| self.lin(c)).collect::<Result<_, _>>()?)
            }
            ContentExpr::Rep { child, min, max } => {
                let mut parts = Vec::new();
                for _ in 0..*min {
                    parts.push(self.lin(child)?);
                }
                match max {
                    None => parts.push(Lin::Star(Box::new(self.lin(child)?))),
                    Some(max) => {
                        // e{0,k} = (e, (e, ...)?)?
                        let mut tail = Lin::Empty;
                        for _ in *min..*max {
                            let copy = self.lin(child)?;
                            tail = Lin::Alt(vec![Lin::Seq(vec![copy, tail]), Lin::Empty]);
                        }
                        parts.push(tail);
                    }
                }
                Lin::Seq(parts)
            }
        })
    }
}

struct Sets {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

fn sets(l: &Lin, follow: &mut [BTreeSet<usize>]) -> Sets {
    match l {
        Lin::Empty => Sets {
            nullable: true,
            first: BTreeSet::new(),
            last: BTreeSet::new(),
        },
        Lin::Pos(p) => Sets {
            nullable: false,
            first: BTreeSet::from([*p]),
            last: BTreeSet::from([*p]),
        },
        Lin::Seq(v) => {
            let mut acc = sets(&Lin::Empty, follow);
            for c in v {
                let s = sets(c, follow);
                for &p in &acc.last {
                    follow[p].extend(&s.first);
                }
                if acc.nullable {
                    acc.first.extend(&s.first);
                }
                let last = if s.nullable {
                    s.last.union(&acc.last).copied().collect()
                } else {
                    s.last
                };
                acc = Sets {
                    nullable: acc.nullable && s.nullable,
                    first: acc.first,
                    last,
                };
            }
            acc
        }
        Lin::Alt(v) => {
            let mut acc = Sets {
                nullable: false,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            };
            for c in v {
                let s = sets(c, follow);
                acc.nullable |= s.nullable;
                acc.first.extend(s.first);
                acc.last.extend(s.last);
            }
            acc
        }
        Lin::Star(c) => {
            let s = sets(c, follow);
            for &p in &s.last {
                follow[p].extend(&s.first);
            }
            Sets {
                nullable: true,
                first: s.first,
                last: s.last,
            }
        }
    }
}

fn count_positions(l: &Lin) -> usize {
    match l {
        Lin::Empty => 0,
        Lin::Pos(_) => 1,
        Lin::Seq(v) | Lin::Alt(v) => v.iter().map(count_positions).sum(),
        Lin::Star(c) => count_positions(c),
    }
}

/// Builds the matcher for a fully resolved expression.
pub fn compile_content_model(expr: &ContentExpr) -> Result<Matcher, CompileError> {
    expr.check().map_err(CompileError::Invalid)?;
    let mut lz = Linearizer {
        symbols: Vec::new(),
        alphabet: HashMap::new(),
    };
    let lin = lz.lin(expr)?;
    debug_assert_eq!(count_positions(&lin), lz.symbols.len());
    let mut follow = vec![BTreeSet::new(); lz.symbols.len()];
    let root = sets(&lin, &mut follow);

    let k = lz.alphabet.len();
    let mut table: Vec<u32> = Vec::new();
    let mut accepting = Vec::new();
    // State 0 is the initial state; every other state is a set of positions.
    let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
    let mut queue: Vec<Option<Vec<usize>>> = vec![None];
    table.resize(k, DEAD);
    accepting.push(root.nullable);
    let mut cursor = 0;
    while cursor < queue.len() {
        let successors: Vec<&BTreeSet<usize>> = match &queue[cursor] {
            None => vec![&root.first],
            Some(state) => state.iter().map(|&p| &follow[p]).collect(),
        };
        let mut by_symbol: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
        for set in successors {
            for &q in set {
                by_symbol[lz.symbols[q]].insert(q);
            }
        }
        for (sym, target) in by_symbol.into_iter().enumerate() {
            if target.is_empty() {
                continue;
            }
            let key: Vec<usize> = target.into_iter().collect();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = queue.len() as u32;
                    accepting.push(key.iter().any(|p| root.last.contains(p)));
                    index.insert(key.clone(), id);
                    queue.push(Some(key));
                    table.resize(table.len() + k, DEAD);
                    id
                }
            };
            table[cursor * k + sym] = id;
        }
        cursor += 1;
    }

    let mut elems = HashMap::new();
    let mut text = None;
    for (sym, id) in lz.alphabet {
        match sym {
            Symbol::Elem(n) => {
                elems.insert(n, id);
            }
            Symbol::Text => text = Some(id),
        }
    }
    Ok(Matcher {
        rule: expr.to_string(),
        elems,
        text,
        width: k,
        table,
        accepting,
    })
}

impl Matcher {
    /// Text form of the source expression.
    pub fn rule(&self) -> &str {
        &self.rule
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn accepts<'a, I>(&self, tokens: I) -> bool
    where
        I: IntoIterator<Item = Token<'a>>,
    {
        let k = self.width;
        let mut state = 0usize;
        for t in tokens {
            let sym = match t {
                Token::Text => self.text,
                Token::Elem(n) => self.elems.get(n).copied(),
            };
            let Some(sym) = sym else { return false };
            let next = self.table[state * k + sym];
            if next == DEAD {
                return false;
            }
            state = next as usize;
        }
        self.accepting[state]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ContentExpr as E;

    fn toks<'a>(names: &[&'a str]) -> Vec<Token<'a>> {
        names
            .iter()
            .map(|n| {
                if *n == "#text" {
                    Token::Text
                } else {
                    Token::Elem(n)
                }
            })
            .collect()
    }

    #[test]
    fn tig_shape() {
        let aux = E::Choice(vec![E::elem("admin"), E::elem("note")]);
        let m = compile_content_model(&E::Seq(vec![
            E::elem("term"),
            E::star(E::elem("termNote")),
            E::star(aux),
        ]))
        .unwrap();
        assert!(m.accepts(toks(&["term"])));
        assert!(m.accepts(toks(&["term", "termNote", "termNote", "admin", "note"])));
        assert!(!m.accepts(toks(&[])));
        assert!(!m.accepts(toks(&["term", "admin", "termNote"])));
        assert!(!m.accepts(toks(&["term", "term"])));
        assert!(!m.accepts(toks(&["term", "bogus"])));
    }

    #[test]
    fn counted_repetition() {
        let m = compile_content_model(&E::rep(E::elem("a"), 2, Some(4))).unwrap();
        for n in 0..7 {
            let v = vec!["a"; n];
            assert_eq!(m.accepts(toks(&v)), (2..=4).contains(&n), "{n}");
        }
        let m = compile_content_model(&E::rep(E::Text, 1, None)).unwrap();
        assert!(!m.accepts(toks(&[])));
        assert!(m.accepts(toks(&["#text", "#text"])));
    }

    #[test]
    fn empty_and_nested_star() {
        let m = compile_content_model(&E::Empty).unwrap();
        assert!(m.accepts(toks(&[])));
        assert!(!m.accepts(toks(&["a"])));
        let m = compile_content_model(&E::star(E::star(E::elem("a")))).unwrap();
        assert!(m.accepts(toks(&["a", "a", "a"])));
        let m = compile_content_model(&E::Seq(vec![E::Empty, E::elem("a"), E::Empty])).unwrap();
        assert!(m.accepts(toks(&["a"])));
    }

    #[test]
    fn rejects_unresolved_class() {
        let err = compile_content_model(&E::star(E::class("model.auxInfo"))).unwrap_err();
        assert_eq!(err, CompileError::UnresolvedClass("model.auxInfo".into()));
    }
}

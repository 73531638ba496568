//! Content-model expressions and their compact text syntax.
//!
//! ```text
//! expr    := seq ('|' seq)*
//! seq     := postfix (',' postfix)*
//! postfix := atom ('*' | '+' | '?' | '{' n ',' [m] '}')*
//! atom    := name | 'text' | 'empty' | '(' expr ')'
//! ```
//!
//! Names beginning with `model.` refer to model classes; any other name
//! refers to an element.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContentExpr {
    Seq(Vec<ContentExpr>),
    Choice(Vec<ContentExpr>),
    Rep {
        child: Box<ContentExpr>,
        min: u32,
        /// `None` is unbounded.
        max: Option<u32>,
    },
    Elem(String),
    Class(String),
    Text,
    Empty,
}

impl ContentExpr {
    pub fn elem(name: &str) -> Self {
        ContentExpr::Elem(name.to_string())
    }

    pub fn class(name: &str) -> Self {
        ContentExpr::Class(name.to_string())
    }

    pub fn rep(child: ContentExpr, min: u32, max: Option<u32>) -> Self {
        ContentExpr::Rep {
            child: Box::new(child),
            min,
            max,
        }
    }

    pub fn star(child: ContentExpr) -> Self {
        Self::rep(child, 0, None)
    }

    pub fn plus(child: ContentExpr) -> Self {
        Self::rep(child, 1, None)
    }

    pub fn opt(child: ContentExpr) -> Self {
        Self::rep(child, 0, Some(1))
    }

    pub fn is_class_name(name: &str) -> bool {
        name.starts_with("model.")
    }

    /// Checks `Rep` bounds and non-empty `Seq`/`Choice`.
    pub fn check(&self) -> Result<(), String> {
        match self {
            ContentExpr::Seq(v) | ContentExpr::Choice(v) => {
                if v.is_empty() {
                    return Err("empty sequence or choice".into());
                }
                v.iter().try_for_each(ContentExpr::check)
            }
            ContentExpr::Rep { child, min, max } => {
                if let Some(max) = max {
                    if min > max {
                        return Err(format!("repetition minimum {min} exceeds maximum {max}"));
                    }
                }
                child.check()
            }
            _ => Ok(()),
        }
    }

    /// Class names referenced anywhere in the expression.
    pub fn class_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.for_each_ref(&mut |e| {
            if let ContentExpr::Class(n) = e {
                out.push(n.as_str());
            }
        });
        out
    }

    /// Element names referenced anywhere in the expression.
    pub fn elem_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.for_each_ref(&mut |e| {
            if let ContentExpr::Elem(n) = e {
                out.push(n.as_str());
            }
        });
        out
    }

    fn for_each_ref<'a>(&'a self, f: &mut impl FnMut(&'a ContentExpr)) {
        match self {
            ContentExpr::Seq(v) | ContentExpr::Choice(v) => {
                v.iter().for_each(|c| c.for_each_ref(f))
            }
            ContentExpr::Rep { child, .. } => child.for_each_ref(f),
            other => f(other),
        }
    }

    pub fn parse(src: &str) -> Result<ContentExpr, String> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.choice()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected {:?}", p.tokens[p.pos]));
        }
        e.check()?;
        Ok(e)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: Ctx) -> fmt::Result {
        match self {
            ContentExpr::Seq(v) | ContentExpr::Choice(v) if v.len() == 1 => v[0].write(f, ctx),
            ContentExpr::Seq(v) => {
                let wrap = ctx != Ctx::Top;
                if wrap {
                    f.write_str("(")?;
                }
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    c.write(f, Ctx::Seq)?;
                }
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
            ContentExpr::Choice(v) => {
                let wrap = ctx != Ctx::Top;
                if wrap {
                    f.write_str("(")?;
                }
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    c.write(f, Ctx::Choice)?;
                }
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
            ContentExpr::Rep { child, min, max } => {
                child.write(f, Ctx::Rep)?;
                match (min, max) {
                    (0, None) => f.write_str("*"),
                    (1, None) => f.write_str("+"),
                    (0, Some(1)) => f.write_str("?"),
                    (m, None) => write!(f, "{{{m},}}"),
                    (m, Some(n)) => write!(f, "{{{m},{n}}}"),
                }
            }
            ContentExpr::Elem(n) | ContentExpr::Class(n) => f.write_str(n),
            ContentExpr::Text => f.write_str("text"),
            ContentExpr::Empty => f.write_str("empty"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Seq,
    Choice,
    Rep,
}

impl fmt::Display for ContentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Ctx::Top)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Num(u32),
    Punct(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if ",|*+?(){}".contains(c) {
            out.push(Tok::Punct(c));
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            let n = src[i..end]
                .parse()
                .map_err(|_| format!("number out of range: {}", &src[i..end]))?;
            out.push(Tok::Num(n));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_alphanumeric() || matches!(d, '_' | '.' | '-' | ':')) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push(Tok::Name(src[i..end].to_string()));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn choice(&mut self) -> Result<ContentExpr, String> {
        let mut items = vec![self.seq()?];
        while self.eat('|') {
            items.push(self.seq()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            ContentExpr::Choice(items)
        })
    }

    fn seq(&mut self) -> Result<ContentExpr, String> {
        let mut items = vec![self.postfix()?];
        while self.eat(',') {
            items.push(self.postfix()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            ContentExpr::Seq(items)
        })
    }

    fn postfix(&mut self) -> Result<ContentExpr, String> {
        let mut e = self.atom()?;
        loop {
            if self.eat('*') {
                e = ContentExpr::star(e);
            } else if self.eat('+') {
                e = ContentExpr::plus(e);
            } else if self.eat('?') {
                e = ContentExpr::opt(e);
            } else if self.eat('{') {
                let min = self.number()?;
                if !self.eat(',') {
                    return Err("expected ',' in counted repetition".into());
                }
                let max = match self.peek() {
                    Some(Tok::Num(_)) => Some(self.number()?),
                    _ => None,
                };
                if !self.eat('}') {
                    return Err("expected '}'".into());
                }
                e = ContentExpr::rep(e, min, max);
            } else {
                return Ok(e);
            }
        }
    }

    fn number(&mut self) -> Result<u32, String> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            other => Err(format!("expected number, found {other:?}")),
        }
    }

    fn atom(&mut self) -> Result<ContentExpr, String> {
        match self.peek().cloned() {
            Some(Tok::Punct('(')) => {
                self.pos += 1;
                let e = self.choice()?;
                if !self.eat(')') {
                    return Err("expected ')'".into());
                }
                Ok(e)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(match n.as_str() {
                    "text" => ContentExpr::Text,
                    "empty" => ContentExpr::Empty,
                    _ if ContentExpr::is_class_name(&n) => ContentExpr::Class(n),
                    _ => ContentExpr::Elem(n),
                })
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

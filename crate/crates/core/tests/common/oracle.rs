//! Brzozowski-derivative interpreter for content expressions.

use termweave::registry::{ContentExpr, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sym {
    Elem(String),
    Text,
}

impl Sym {
    fn matches(&self, t: Token<'_>) -> bool {
        match (self, t) {
            (Sym::Elem(a), Token::Elem(b)) => a == b,
            (Sym::Text, Token::Text) => true,
            _ => false,
        }
    }
}

/// Regular expression over child tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Re {
    Null,
    Eps,
    Sym(Sym),
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Rep {
        child: Box<Re>,
        min: u32,
        max: Option<u32>,
    },
}

fn cat(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Null, _) | (_, Re::Null) => Re::Null,
        (Re::Eps, x) | (x, Re::Eps) => x,
        (a, b) => Re::Cat(Box::new(a), Box::new(b)),
    }
}

fn alt(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Null, x) | (x, Re::Null) => x,
        (a, b) if a == b => a,
        (a, b) => Re::Alt(Box::new(a), Box::new(b)),
    }
}

fn rep(child: Re, min: u32, max: Option<u32>) -> Re {
    match (&child, max) {
        (_, Some(0)) | (Re::Eps, _) => Re::Eps,
        (Re::Null, _) => {
            if min == 0 {
                Re::Eps
            } else {
                Re::Null
            }
        }
        _ => Re::Rep {
            child: Box::new(child),
            min,
            max,
        },
    }
}

impl Re {
    /// Translation of a class-free expression.
    pub fn from_expr(e: &ContentExpr) -> Re {
        match e {
            ContentExpr::Empty => Re::Eps,
            ContentExpr::Text => Re::Sym(Sym::Text),
            ContentExpr::Elem(n) => Re::Sym(Sym::Elem(n.clone())),
            ContentExpr::Class(n) => panic!("oracle needs a resolved expression, found class {n}"),
            ContentExpr::Seq(v) => v.iter().map(Re::from_expr).fold(Re::Eps, cat),
            ContentExpr::Choice(v) => v.iter().map(Re::from_expr).fold(Re::Null, alt),
            ContentExpr::Rep { child, min, max } => rep(Re::from_expr(child), *min, *max),
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Re::Null | Re::Sym(_) => false,
            Re::Eps => true,
            Re::Cat(a, b) => a.nullable() && b.nullable(),
            Re::Alt(a, b) => a.nullable() || b.nullable(),
            Re::Rep { child, min, .. } => *min == 0 || child.nullable(),
        }
    }

    pub fn derive(&self, t: Token<'_>) -> Re {
        match self {
            Re::Null | Re::Eps => Re::Null,
            Re::Sym(s) => {
                if s.matches(t) {
                    Re::Eps
                } else {
                    Re::Null
                }
            }
            Re::Cat(a, b) => {
                let left = cat(a.derive(t), (**b).clone());
                if a.nullable() {
                    alt(left, b.derive(t))
                } else {
                    left
                }
            }
            Re::Alt(a, b) => alt(a.derive(t), b.derive(t)),
            Re::Rep { child, min, max } => cat(
                child.derive(t),
                rep((**child).clone(), min.saturating_sub(1), max.map(|m| m - 1)),
            ),
        }
    }
}

pub fn accepts(e: &ContentExpr, tokens: &[Token<'_>]) -> bool {
    let mut re = Re::from_expr(e);
    for &t in tokens {
        re = re.derive(t);
        if re == Re::Null {
            return false;
        }
    }
    re.nullable()
}

//! Declarative element, class and data-category registry.
//!
//! A single [`Registry`] drives both the validator (through compiled
//! [`Matcher`]s) and the generated schema text and documentation.

mod defaults;
mod emit;
mod expr;
mod matcher;
mod overlay;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::model::Origin;
use crate::visit::Level;

pub use emit::{emit_docs, emit_schema};
pub use expr::ContentExpr;
pub use matcher::{compile_content_model, CompileError, Matcher, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    Model,
    Attribute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    pub name: String,
    pub kind: ClassKind,
    /// Insertion-ordered and duplicate-free.
    pub members: Vec<String>,
    pub doc: String,
}

impl ClassSpec {
    pub fn add(&mut self, member: &str) {
        if !self.members.iter().any(|m| m == member) {
            self.members.push(member.to_string());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSpec {
    pub name: String,
    pub namespace: Origin,
    pub attr_classes: Vec<String>,
    pub own_attrs: Vec<String>,
    pub content: ContentExpr,
    pub doc: String,
    pub examples: Vec<String>,
}

/// Element that carries a data category in its `type` attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Host {
    Admin,
    Descrip,
    TermNote,
    Transac,
    TransacNote,
    Ref,
}

impl Host {
    pub const ALL: [Host; 6] = [
        Host::Admin,
        Host::Descrip,
        Host::TermNote,
        Host::Transac,
        Host::TransacNote,
        Host::Ref,
    ];

    pub fn element(self) -> &'static str {
        match self {
            Host::Admin => "admin",
            Host::Descrip => "descrip",
            Host::TermNote => "termNote",
            Host::Transac => "transac",
            Host::TransacNote => "transacNote",
            Host::Ref => "ref",
        }
    }

    pub fn from_element(name: &str) -> Option<Host> {
        Host::ALL.into_iter().find(|h| h.element() == name)
    }
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.element())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Datatype {
    PlainText,
    Picklist(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataCatSpec {
    pub name: String,
    pub host: Host,
    pub levels: BTreeSet<Level>,
    pub datatype: Datatype,
    /// Free-form remark rendered in the documentation.
    pub remark: Option<String>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dangling reference to {reference:?} in {context}")]
    Dangling { reference: String, context: String },
    #[error("cyclic class membership: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },
    #[error("class {0:?} has no members")]
    EmptyClass(String),
    #[error("invalid content model for {element:?}: {message}")]
    InvalidContent { element: String, message: String },
    #[error("invalid data category {name:?}: {message}")]
    InvalidDataCat { name: String, message: String },
    #[error("cannot read registry file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registry {
    pub elements: BTreeMap<String, ElementSpec>,
    pub classes: BTreeMap<String, ClassSpec>,
    pub data_cats: Vec<DataCatSpec>,
    pub version: String,
}

/// The compiled-in registry.
pub fn load_default() -> Registry {
    defaults::registry()
}

/// The default registry with the overlay file at `path` applied.
pub fn load_from_file(path: impl AsRef<Path>) -> Result<Registry, RegistryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_default().overlay(&text)
}

impl Registry {
    /// Applies overlay directives, then checks that the result resolves.
    pub fn overlay(&self, text: &str) -> Result<Registry, RegistryError> {
        let out = overlay::apply(self.clone(), text)?;
        out.resolve()?;
        Ok(out)
    }

    pub fn element(&self, name: &str) -> Option<&ElementSpec> {
        self.elements.get(name)
    }

    pub fn class(&self, name: &str) -> Option<&ClassSpec> {
        self.classes.get(name)
    }

    pub fn data_cat(&self, host: Host, name: &str) -> Option<&DataCatSpec> {
        self.data_cats
            .iter()
            .find(|d| d.host == host && d.name == name)
    }

    /// Copy with every class reference expanded into a choice over its
    /// members. Idempotent.
    pub fn resolve(&self) -> Result<Registry, RegistryError> {
        self.check_classes()?;
        for d in &self.data_cats {
            if d.levels.is_empty() {
                return Err(RegistryError::InvalidDataCat {
                    name: d.name.clone(),
                    message: "no levels".into(),
                });
            }
            if matches!(&d.datatype, Datatype::Picklist(v) if v.is_empty()) {
                return Err(RegistryError::InvalidDataCat {
                    name: d.name.clone(),
                    message: "empty picklist".into(),
                });
            }
        }
        let mut out = self.clone();
        for (name, spec) in &mut out.elements {
            spec.content
                .check()
                .map_err(|message| RegistryError::InvalidContent {
                    element: name.clone(),
                    message,
                })?;
            for c in &spec.attr_classes {
                match self.classes.get(c) {
                    Some(cs) if cs.kind == ClassKind::Attribute => {}
                    _ => {
                        return Err(RegistryError::Dangling {
                            reference: c.clone(),
                            context: format!("attribute classes of {name}"),
                        })
                    }
                }
            }
            spec.content = self.expand(&spec.content, name)?;
        }
        Ok(out)
    }

    /// Every model-class member names an element or a model class, no class
    /// is empty, and membership is acyclic.
    fn check_classes(&self) -> Result<(), RegistryError> {
        for class in self.classes.values() {
            if class.members.is_empty() {
                return Err(RegistryError::EmptyClass(class.name.clone()));
            }
            if class.kind == ClassKind::Model {
                for m in &class.members {
                    let is_class =
                        matches!(self.classes.get(m), Some(c) if c.kind == ClassKind::Model);
                    if !is_class && !self.elements.contains_key(m) {
                        return Err(RegistryError::Dangling {
                            reference: m.clone(),
                            context: format!("class {}", class.name),
                        });
                    }
                }
            }
        }
        let mut done = BTreeSet::new();
        for name in self.classes.keys() {
            let mut stack = Vec::new();
            self.visit_class(name, &mut stack, &mut done)?;
        }
        Ok(())
    }

    fn visit_class<'a>(
        &'a self,
        name: &'a str,
        stack: &mut Vec<&'a str>,
        done: &mut BTreeSet<&'a str>,
    ) -> Result<(), RegistryError> {
        if let Some(i) = stack.iter().position(|s| *s == name) {
            let mut cycle: Vec<String> = stack[i..].iter().map(|s| s.to_string()).collect();
            cycle.push(name.to_string());
            return Err(RegistryError::Cycle { cycle });
        }
        if done.contains(name) {
            return Ok(());
        }
        let Some(class) = self.classes.get(name) else {
            return Ok(());
        };
        stack.push(name);
        for m in &class.members {
            if self.classes.contains_key(m.as_str()) {
                self.visit_class(m, stack, done)?;
            }
        }
        stack.pop();
        done.insert(name);
        Ok(())
    }

    fn expand(&self, e: &ContentExpr, owner: &str) -> Result<ContentExpr, RegistryError> {
        Ok(match e {
            ContentExpr::Seq(v) => ContentExpr::Seq(
                v.iter()
                    .map(|c| self.expand(c, owner))
                    .collect::<Result<_, _>>()?,
            ),
            ContentExpr::Choice(v) => {
                let mut items = Vec::new();
                for c in v {
                    match self.expand(c, owner)? {
                        ContentExpr::Choice(inner) if matches!(c, ContentExpr::Class(_)) => {
                            items.extend(inner)
                        }
                        other => items.push(other),
                    }
                }
                ContentExpr::Choice(items)
            }
            ContentExpr::Rep { child, min, max } => ContentExpr::Rep {
                child: Box::new(self.expand(child, owner)?),
                min: *min,
                max: *max,
            },
            ContentExpr::Class(name) => {
                let class = match self.classes.get(name) {
                    Some(c) if c.kind == ClassKind::Model => c,
                    _ => {
                        return Err(RegistryError::Dangling {
                            reference: name.clone(),
                            context: format!("content of {owner}"),
                        })
                    }
                };
                let mut items = Vec::new();
                for m in &class.members {
                    if self.classes.contains_key(m) {
                        match self.expand(&ContentExpr::Class(m.clone()), owner)? {
                            ContentExpr::Choice(inner) => items.extend(inner),
                            other => items.push(other),
                        }
                    } else {
                        items.push(ContentExpr::Elem(m.clone()));
                    }
                }
                ContentExpr::Choice(items)
            }
            ContentExpr::Elem(name) => {
                if !self.elements.contains_key(name) {
                    return Err(RegistryError::Dangling {
                        reference: name.clone(),
                        context: format!("content of {owner}"),
                    });
                }
                e.clone()
            }
            ContentExpr::Text | ContentExpr::Empty => e.clone(),
        })
    }

    /// Attribute names an element accepts, class attributes first.
    pub fn attributes_of(&self, element: &str) -> Vec<(String, Option<String>)> {
        let mut out = Vec::new();
        if let Some(spec) = self.elements.get(element) {
            for c in &spec.attr_classes {
                if let Some(cs) = self.classes.get(c) {
                    out.extend(cs.members.iter().map(|m| (m.clone(), Some(c.clone()))));
                }
            }
            out.extend(spec.own_attrs.iter().map(|a| (a.clone(), None)));
        }
        out
    }

    /// Model classes that list `element` directly.
    pub fn classes_containing(&self, element: &str) -> Vec<&str> {
        self.classes
            .values()
            .filter(|c| c.kind == ClassKind::Model && c.members.iter().any(|m| m == element))
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Compiles every element's resolved content model.
    pub fn compile(&self) -> Result<BTreeMap<String, Matcher>, RegistryError> {
        let resolved = self.resolve()?;
        resolved
            .elements
            .iter()
            .map(|(name, spec)| {
                compile_content_model(&spec.content)
                    .map(|m| (name.clone(), m))
                    .map_err(|e| RegistryError::InvalidContent {
                        element: name.clone(),
                        message: e.to_string(),
                    })
            })
            .collect()
    }
}

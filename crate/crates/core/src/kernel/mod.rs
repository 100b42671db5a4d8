//! The lambda-calculus kernel.
//!
//! Terms are kept in β-normal η-long form at all times. Bound variables are
//! de Bruijn *levels* counted from the root of the enclosing term, which makes
//! α-equivalence structural equality and lets a subterm be re-closed over its
//! enclosing binders without any shifting.

mod parse;
mod print;
mod raw;
mod subst;
mod term;
mod types;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use parse::{parse_raw, parse_term, parse_term_in, parse_type};
pub use print::{print_at, print_term};
pub use raw::{beta_normalize, eta_long, Raw};
pub use subst::{apply, instantiate, substitute, substitute_many};
pub(crate) use subst::{plug_holes, subst_constants};
pub use term::{Head, Path, Term};
pub use types::SimpleType;

pub type Name = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("term is not closed")]
    NotClosed,
    #[error("term is not β-normal")]
    NotNormal,
    #[error("a bound variable would escape its scope")]
    Escape,
    #[error("path {0:?} does not address a subterm")]
    BadPath(Vec<usize>),
    #[error("invalid signature: {0}")]
    Signature(String),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered, non-empty list of distinct ground constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    names: Vec<Name>,
}

impl Signature {
    /// User-facing constructor: names must be plain identifiers.
    pub fn new<I, S>(names: I) -> Result<Signature>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let names: Vec<Name> = names.into_iter().map(|s| Name::from(s.as_ref())).collect();
        for n in &names {
            if !is_ident(n) {
                return Err(KernelError::Signature(format!(
                    "`{n}` is not a valid constant name"
                )));
            }
        }
        Signature::from_names(names)
    }

    fn from_names(names: Vec<Name>) -> Result<Signature> {
        if names.is_empty() {
            return Err(KernelError::Signature("no constants".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(KernelError::Signature(format!("duplicate constant `{n}`")));
            }
        }
        Ok(Signature { names })
    }

    /// Parses a comma separated list such as `a,b`.
    pub fn parse(text: &str) -> Result<Signature> {
        Signature::new(text.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    /// Appends generated constants (names starting with `#`).
    pub fn extended<I: IntoIterator<Item = Name>>(&self, fresh: I) -> Result<Signature> {
        let mut names = self.names.clone();
        for n in fresh {
            if !n.starts_with('#') {
                return Err(KernelError::Signature(format!(
                    "generated constant `{n}` must start with #"
                )));
            }
            names.push(n);
        }
        Signature::from_names(names)
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| &**n == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| &**n == name)
    }

    pub fn first(&self) -> &Name {
        &self.names[0]
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.names.iter().map(|n| &**n).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Types of free (named) variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingEnv {
    vars: BTreeMap<Name, SimpleType>,
}

impl TypingEnv {
    pub fn new() -> TypingEnv {
        TypingEnv::default()
    }

    pub fn with(mut self, name: &str, ty: SimpleType) -> TypingEnv {
        self.vars.insert(Name::from(name), ty);
        self
    }

    pub fn insert(&mut self, name: &str, ty: SimpleType) {
        self.vars.insert(Name::from(name), ty);
    }

    pub fn get(&self, name: &str) -> Option<&SimpleType> {
        self.vars.get(name)
    }
}

/// The Church type of `t`, checking every application along the way.
pub fn type_of(t: &Term, env: &TypingEnv) -> Result<SimpleType> {
    let mut ctx = Vec::new();
    check_node(t, &mut ctx, env)?;
    Ok(t.ty())
}

fn check_node(t: &Term, ctx: &mut Vec<SimpleType>, env: &TypingEnv) -> Result<()> {
    ctx.extend(t.binders().iter().cloned());
    let head_ty = match t.head() {
        Head::Var(l) => ctx
            .get(*l)
            .cloned()
            .ok_or_else(|| KernelError::Unbound(format!("level {l}")))?,
        Head::Free(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| KernelError::Unbound(n.to_string()))?,
        Head::Const(_) | Head::Hole(_) => SimpleType::Ground,
    };
    let expected = head_ty.args();
    if expected.len() != t.args().len() {
        return Err(KernelError::Type(format!(
            "head of type {head_ty} applied to {} arguments",
            t.args().len()
        )));
    }
    for (a, want) in t.args().iter().zip(&expected) {
        let got = a.ty();
        if &got != want {
            return Err(KernelError::Type(format!(
                "argument of type {got} where {want} was expected"
            )));
        }
        check_node(a, ctx, env)?;
    }
    ctx.truncate(ctx.len() - t.binders().len());
    Ok(())
}

/// α-equivalence. Levels make this structural equality.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

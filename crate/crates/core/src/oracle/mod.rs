//! Brute-force instruments used to cross-check the model module: exhaustive
//! enumeration of small terms, equivalence probing with enumerated arguments,
//! evaluation in the full finite type hierarchy and random term generation.
//!
//! Normalization here always goes through [`Raw`], not through the
//! hereditary substitution used by the model module.

mod full;
mod random;

use std::collections::HashMap;

use thiserror::Error;

use crate::kernel::{Head, KernelError, Name, Raw, Signature, SimpleType, Term, TypingEnv};

pub use full::{full_model_eval, FunctionTable, FullModel, MAX_ELEMENTS};
pub use random::{corpus, random_closed_term, random_type, TermGen};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: usize },
    #[error("type mismatch: {left} vs {right}")]
    TypeMismatch { left: SimpleType, right: SimpleType },
    #[error("term is not closed")]
    NotClosed,
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

/// All closed β-normal η-long terms of type `ty` over `sig` with at most
/// `bound` nodes, by increasing size. Within a size, constants come before
/// variables and variables are taken by increasing level.
pub fn enumerate_terms(ty: &SimpleType, sig: &Signature, bound: usize) -> Vec<Term> {
    let mut g = Enumerator {
        sig,
        memo: HashMap::new(),
    };
    (1..=bound)
        .flat_map(|s| g.nodes(ty, &[], s))
        .collect()
}

type MemoKey = (SimpleType, Vec<SimpleType>, usize);

struct Enumerator<'s> {
    sig: &'s Signature,
    memo: HashMap<MemoKey, Vec<Term>>,
}

impl Enumerator<'_> {
    /// Nodes of type `ty` under the binder types `ctx`, of size exactly `size`.
    fn nodes(&mut self, ty: &SimpleType, ctx: &[SimpleType], size: usize) -> Vec<Term> {
        let key = (ty.clone(), ctx.to_vec(), size);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let binders = ty.args();
        let mut out = Vec::new();
        if size > binders.len() {
            let mut inner = ctx.to_vec();
            inner.extend(binders.iter().cloned());
            for body in self.bodies(&inner, size - binders.len()) {
                out.push(Term::abstracted(binders.clone(), body));
            }
        }
        self.memo.insert(key, out.clone());
        out
    }

    fn bodies(&mut self, ctx: &[SimpleType], size: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if size == 1 {
            for c in self.sig.names() {
                out.push(Term::ground(Head::Const(c.clone()), vec![]));
            }
        }
        for (l, hty) in ctx.iter().enumerate() {
            let arg_tys = hty.args();
            let p = arg_tys.len();
            if size < 1 + p {
                continue;
            }
            for args in self.arg_lists(&arg_tys, ctx, size - 1 - p) {
                out.push(Term::ground(Head::Var(l), args));
            }
        }
        out
    }

    /// Argument lists for `tys` whose sizes add up to exactly `total`.
    fn arg_lists(&mut self, tys: &[SimpleType], ctx: &[SimpleType], total: usize) -> Vec<Vec<Term>> {
        let Some((first, rest)) = tys.split_first() else {
            return if total == 0 { vec![vec![]] } else { vec![] };
        };
        let mut out = Vec::new();
        for s in 1..=total {
            let heads = self.nodes(first, ctx, s);
            if heads.is_empty() {
                continue;
            }
            let tails = self.arg_lists(rest, ctx, total - s);
            for h in &heads {
                for t in &tails {
                    let mut v = Vec::with_capacity(tys.len());
                    v.push(h.clone());
                    v.extend(t.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Normalizes `t r1 .. rn` through the index-based reducer and reads off the
/// resulting constant.
pub fn eval_ground(t: &Term, args: &[Term]) -> Result<Name> {
    let raw = Raw::apps(t.to_raw(), args.iter().map(Term::to_raw));
    let nf = raw.canonical(&TypingEnv::new())?;
    match nf.head() {
        Head::Const(c) if nf.is_ground() && nf.args().is_empty() => Ok(c.clone()),
        _ => Err(OracleError::Kernel(KernelError::Type(
            "application is not of ground type".into(),
        ))),
    }
}

/// Outcome of a bounded search for a distinguishing argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedVerdict {
    Inequivalent {
        witness: Vec<Term>,
        left: Name,
        right: Name,
    },
    /// No tuple of arguments of at most `bound` nodes tells the terms apart.
    /// This is evidence, not a proof.
    EquivalentUpTo { bound: usize, tuples: usize },
}

impl BoundedVerdict {
    pub fn is_inequivalent(&self) -> bool {
        matches!(self, BoundedVerdict::Inequivalent { .. })
    }
}

/// Default ceiling on the argument tuples tried by [`brute_equiv`].
pub const MAX_TUPLES: usize = 200_000;

pub fn brute_equiv(t: &Term, u: &Term, sig: &Signature, bound: usize) -> Result<BoundedVerdict> {
    if !t.is_closed() || !u.is_closed() {
        return Err(OracleError::NotClosed);
    }
    let ty = t.ty();
    if ty != u.ty() {
        return Err(OracleError::TypeMismatch {
            left: ty,
            right: u.ty(),
        });
    }
    let lists: Vec<Vec<Term>> = ty.args().iter().map(|a| enumerate_terms(a, sig, bound)).collect();
    let mut tuples = 0;
    let outcome = for_each_tuple(&lists, MAX_TUPLES, |tuple| {
        tuples += 1;
        let l = eval_ground(t, tuple)?;
        let r = eval_ground(u, tuple)?;
        Ok((l != r).then(|| BoundedVerdict::Inequivalent {
            witness: tuple.to_vec(),
            left: l,
            right: r,
        }))
    })?;
    Ok(outcome.unwrap_or(BoundedVerdict::EquivalentUpTo { bound, tuples }))
}

/// Calls `f` on every tuple of the cartesian product (first list most
/// significant) until it returns `Some`.
fn for_each_tuple<T>(
    lists: &[Vec<Term>],
    limit: usize,
    mut f: impl FnMut(&[Term]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let total = lists
        .iter()
        .try_fold(1usize, |acc, l| acc.checked_mul(l.len()));
    if total.is_none_or(|c| c > limit) {
        return Err(OracleError::Budget {
            what: "argument tuples",
            limit,
        });
    }
    if lists.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut idx = vec![0; lists.len()];
    let mut buf: Vec<Term> = lists.iter().map(|l| l[0].clone()).collect();
    loop {
        if let Some(r) = f(&buf)? {
            return Ok(Some(r));
        }
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                buf[pos] = lists[pos][idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            buf[pos] = lists[pos][0].clone();
        }
    }
}

/// Groups the enumerated terms of type `ty` (at most `term_bound` nodes) by
/// their results on every tuple of enumerated arguments (at most `arg_bound`
/// nodes each). Classes come in order of their first member.
pub fn quotient_classes(
    ty: &SimpleType,
    sig: &Signature,
    term_bound: usize,
    arg_bound: usize,
) -> Result<Vec<Vec<Term>>> {
    let lists: Vec<Vec<Term>> = ty.args().iter().map(|a| enumerate_terms(a, sig, arg_bound)).collect();
    let mut classes: Vec<Vec<Term>> = Vec::new();
    let mut index: HashMap<Vec<Name>, usize> = HashMap::new();
    for t in enumerate_terms(ty, sig, term_bound) {
        let mut profile = Vec::new();
        for_each_tuple(&lists, MAX_TUPLES, |tuple| {
            profile.push(eval_ground(&t, tuple)?);
            Ok(None::<()>)
        })?;
        match index.get(&profile) {
            Some(&i) => classes[i].push(t),
            None => {
                index.insert(profile, classes.len());
                classes.push(vec![t]);
            }
        }
    }
    Ok(classes)
}

//! Hereditary substitution on canonical terms: substituting and immediately
//! contracting the redexes this creates, so results stay β-normal η-long.

use std::collections::BTreeSet;

use super::{Head, KernelError, Name, Result, SimpleType, Term};

#[derive(Clone, Copy)]
enum Bind<'a> {
    /// source level maps to this output level
    Level(usize),
    /// source level is replaced by a node whose free levels below `base` are
    /// shared with the output context
    Term(&'a Term, usize),
}

/// Replacements for named heads (constants, free variables, holes).
struct Named<'a> {
    items: Vec<(Head, &'a Term, usize)>,
}

impl<'a> Named<'a> {
    fn none() -> Named<'a> {
        Named { items: Vec::new() }
    }

    fn get(&self, h: &Head) -> Option<(&'a Term, usize)> {
        self.items
            .iter()
            .find(|(k, _, _)| k == h)
            .map(|(_, t, b)| (*t, *b))
    }
}

fn apply_node<'e>(
    t: &Term,
    env: &mut Vec<Bind<'e>>,
    named: &Named<'_>,
    out: usize,
) -> Result<Term> {
    let nb = t.binders.len();
    for j in 0..nb {
        env.push(Bind::Level(out + j));
    }
    let body = apply_body(&t.head, &t.args, env, named, out + nb);
    env.truncate(env.len() - nb);
    let body = body?;
    Ok(Term::new(t.binders.clone(), body.head, body.args))
}

fn apply_body<'e>(
    head: &Head,
    args: &[Term],
    env: &mut Vec<Bind<'e>>,
    named: &Named<'_>,
    depth: usize,
) -> Result<Term> {
    let args2 = args
        .iter()
        .map(|a| apply_node(a, env, named, depth))
        .collect::<Result<Vec<_>>>()?;
    match head {
        Head::Var(l) => match env.get(*l).copied() {
            Some(Bind::Level(m)) => Ok(Term::ground(Head::Var(m), args2)),
            Some(Bind::Term(r, base)) => beta(r, base, args2, depth),
            None => Err(KernelError::Unbound(format!("level {l}"))),
        },
        h => match named.get(h) {
            Some((r, base)) => beta(r, base, args2, depth),
            None => Ok(Term::ground(h.clone(), args2)),
        },
    }
}

/// Contracts `r args` where `r` is fully applied; `args` live at `depth`.
fn beta(r: &Term, base: usize, args: Vec<Term>, depth: usize) -> Result<Term> {
    if r.binders.len() != args.len() {
        return Err(KernelError::Type(format!(
            "replacement with {} binders applied to {} arguments",
            r.binders.len(),
            args.len()
        )));
    }
    let mut env: Vec<Bind<'_>> = (0..base).map(Bind::Level).collect();
    env.extend(args.iter().map(|a| Bind::Term(a, depth)));
    apply_body(&r.head, &r.args, &mut env, &Named::none(), depth)
}

/// Applies a closed term to closed arguments and normalizes. Fewer arguments
/// than binders yields an abstraction over the remaining ones.
pub fn apply(t: &Term, args: &[Term]) -> Result<Term> {
    let k = args.len();
    let nb = t.binders.len();
    if k > nb {
        return Err(KernelError::Type(format!(
            "term with {nb} binders applied to {k} arguments"
        )));
    }
    for (a, ty) in args.iter().zip(&t.binders) {
        if &a.ty() != ty {
            return Err(KernelError::Type(format!(
                "argument of type {} where {ty} was expected",
                a.ty()
            )));
        }
    }
    let mut env: Vec<Bind<'_>> = args.iter().map(|a| Bind::Term(a, 0)).collect();
    env.extend((0..nb - k).map(Bind::Level));
    let body = apply_body(&t.head, &t.args, &mut env, &Named::none(), nb - k)?;
    Ok(Term::abstracted(t.binders[k..].to_vec(), body))
}

/// Full application to closed arguments; the result is ground.
pub fn instantiate(t: &Term, args: &[Term]) -> Result<Term> {
    if args.len() != t.binders.len() {
        return Err(KernelError::Type(format!(
            "term of type {} needs {} arguments, got {}",
            t.ty(),
            t.binders.len(),
            args.len()
        )));
    }
    apply(t, args)
}

/// Simultaneous capture-avoiding substitution of named heads (free variables
/// or constants) by closed-over-levels terms.
pub fn substitute_many(t: &Term, map: &[(Name, Term)]) -> Result<Term> {
    let mut free = BTreeSet::new();
    t.free_names(&mut free);
    let mut items = Vec::new();
    for (name, s) in map {
        let head = if free.contains(name) {
            Head::Free(name.clone())
        } else {
            Head::Const(name.clone())
        };
        if let Some(expected) = occurrence_type(t, &head) {
            if expected != s.ty() {
                return Err(KernelError::Type(format!(
                    "cannot substitute a term of type {} for `{name}` of type {expected}",
                    s.ty()
                )));
            }
        }
        items.push((head, s, 0));
    }
    let named = Named { items };
    apply_node(t, &mut Vec::new(), &named, 0)
}

pub fn substitute(t: &Term, x: &str, s: &Term) -> Result<Term> {
    substitute_many(t, &[(Name::from(x), s.clone())])
}

/// Type of a named head read off any of its η-long occurrences.
fn occurrence_type(t: &Term, head: &Head) -> Option<SimpleType> {
    if &t.head == head {
        return Some(SimpleType::from_args(t.args.iter().map(Term::ty)));
    }
    t.args.iter().find_map(|a| occurrence_type(a, head))
}

/// Replaces ground constants inside a node living at `depth` by ground bodies
/// living at `depth` (free levels below `depth` shared).
pub(crate) fn subst_constants(node: &Term, depth: usize, map: &[(Name, &Term)]) -> Result<Term> {
    let named = Named {
        items: map
            .iter()
            .map(|(n, t)| (Head::Const(n.clone()), *t, depth))
            .collect(),
    };
    let mut env: Vec<Bind<'_>> = (0..depth).map(Bind::Level).collect();
    apply_node(node, &mut env, &named, depth)
}

/// Fills hole `k` of `ctx` (a node at `depth`) with `fillers[k] = (body, base)`:
/// a ground body living at depth `base` whose levels below `base` mean the
/// same thing at the hole.
pub(crate) fn plug_holes(ctx: &Term, depth: usize, fillers: &[(Term, usize)]) -> Result<Term> {
    let named = Named {
        items: fillers
            .iter()
            .enumerate()
            .map(|(k, (f, base))| (Head::Hole(k), f, *base))
            .collect(),
    };
    let mut env: Vec<Bind<'_>> = (0..depth).map(Bind::Level).collect();
    apply_node(ctx, &mut env, &named, depth)
}

use std::collections::BTreeSet;

use super::{KernelError, Name, Result, SimpleType};

/// Position of a subterm: a sequence of argument indices, starting at the
/// body of the root. Every path addresses a node; its ground body is the
/// subterm the path denotes.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    /// Bound variable, as a de Bruijn level from the root.
    Var(usize),
    /// Named free variable (only in open terms built through the API).
    Free(Name),
    Const(Name),
    /// Numbered ground hole; only appears inside multi-hole contexts.
    Hole(usize),
}

/// A β-normal η-long term `\x1..xn. h t1 .. tm` where the body has ground type.
///
/// The binders of a node occupy the levels `depth .. depth + n` where `depth`
/// is the number of binders above the node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub(crate) binders: Vec<SimpleType>,
    pub(crate) head: Head,
    pub(crate) args: Vec<Term>,
}

impl Term {
    pub(crate) fn new(binders: Vec<SimpleType>, head: Head, args: Vec<Term>) -> Term {
        Term {
            binders,
            head,
            args,
        }
    }

    pub(crate) fn ground(head: Head, args: Vec<Term>) -> Term {
        Term::new(Vec::new(), head, args)
    }

    pub fn constant(name: &str) -> Term {
        Term::ground(Head::Const(Name::from(name)), Vec::new())
    }

    /// The η-long expansion of the variable at `level`, placed at `depth`.
    pub fn eta_var(level: usize, ty: &SimpleType, depth: usize) -> Term {
        Term::eta_head(Head::Var(level), ty, depth)
    }

    pub(crate) fn eta_head(head: Head, ty: &SimpleType, depth: usize) -> Term {
        let binders = ty.args();
        let inner = depth + binders.len();
        let args = binders
            .iter()
            .enumerate()
            .map(|(j, b)| Term::eta_var(depth + j, b, inner))
            .collect();
        Term::new(binders, head, args)
    }

    /// Identity at any type, in η-long form.
    pub fn identity(ty: &SimpleType) -> Term {
        let body = Term::eta_var(0, ty, 1);
        Term::new(vec![ty.clone()], body.head, body.args)
            .with_more_binders(body.binders)
    }

    fn with_more_binders(mut self, extra: Vec<SimpleType>) -> Term {
        self.binders.extend(extra);
        self
    }

    pub fn binders(&self) -> &[SimpleType] {
        &self.binders
    }

    pub fn head(&self) -> &Head {
        &self.head
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn ty(&self) -> SimpleType {
        SimpleType::from_args(self.binders.iter().cloned())
    }

    /// Same head and arguments with the binders removed.
    pub fn body(&self) -> Term {
        Term::ground(self.head.clone(), self.args.clone())
    }

    /// `\binders. body` for a ground `body`.
    pub fn abstracted(binders: Vec<SimpleType>, body: Term) -> Term {
        debug_assert!(body.binders.is_empty());
        Term::new(binders, body.head, body.args)
    }

    /// Node count: abstractions, head occurrences and applications.
    pub fn size(&self) -> usize {
        self.binders.len() + 1 + self.args.len() + self.args.iter().map(Term::size).sum::<usize>()
    }

    pub fn is_ground(&self) -> bool {
        self.binders.is_empty()
    }

    /// No named free variables and no holes (levels are always bound in a
    /// well-formed root term).
    pub fn is_closed(&self) -> bool {
        !self.any_head(&|h| matches!(h, Head::Free(_) | Head::Hole(_)))
    }

    pub fn has_holes(&self) -> bool {
        self.any_head(&|h| matches!(h, Head::Hole(_)))
    }

    fn any_head(&self, p: &dyn Fn(&Head) -> bool) -> bool {
        p(&self.head) || self.args.iter().any(|a| a.any_head(p))
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<Name>) {
        if let Head::Const(c) = &self.head {
            out.insert(c.clone());
        }
        for a in &self.args {
            a.collect_constants(out);
        }
    }

    pub(crate) fn free_names(&self, out: &mut BTreeSet<Name>) {
        if let Head::Free(c) = &self.head {
            out.insert(c.clone());
        }
        for a in &self.args {
            a.free_names(out);
        }
    }

    /// Largest level referenced in this node that is bound outside it, i.e.
    /// below `depth` (the number of binders above the node).
    pub fn max_free_level(&self, depth: usize) -> Option<usize> {
        let mut best = None;
        self.scan_free(depth, &mut best);
        best
    }

    fn scan_free(&self, depth: usize, best: &mut Option<usize>) {
        if let Head::Var(l) = self.head {
            if l < depth && best.is_none_or(|b| l > b) {
                *best = Some(l);
            }
        }
        for a in &self.args {
            a.scan_free(depth, best);
        }
    }

    /// True when every level bound outside this node (at `depth`) is below `bound`.
    pub fn free_below(&self, depth: usize, bound: usize) -> bool {
        self.max_free_level(depth).is_none_or(|l| l < bound)
    }

    pub fn mentions_level(&self, level: usize) -> bool {
        self.any_head(&|h| *h == Head::Var(level))
    }

    /// Moves a node living at depth `from` to depth `to`. Levels below `keep`
    /// refer to a shared prefix and are left alone; levels at or above `from`
    /// are bound inside the node and are shifted. Anything in between would
    /// lose its binder and is reported as an escape.
    pub fn relocate(&self, keep: usize, from: usize, to: usize) -> Result<Term> {
        debug_assert!(keep <= from && keep <= to);
        if from == to {
            return Ok(self.clone());
        }
        let head = match &self.head {
            Head::Var(l) if *l < keep => Head::Var(*l),
            Head::Var(l) if *l >= from => Head::Var(*l - from + to),
            Head::Var(_) => return Err(KernelError::Escape),
            h => h.clone(),
        };
        let args = self
            .args
            .iter()
            .map(|a| a.relocate(keep, from, to))
            .collect::<Result<Vec<_>>>()?;
        Ok(Term::new(self.binders.clone(), head, args))
    }

    /// The node at `path` together with the depth of its body (binders above
    /// plus its own).
    pub fn node_at(&self, path: &[usize]) -> Result<(&Term, usize)> {
        let mut cur = self;
        let mut depth = self.binders.len();
        for &i in path {
            cur = cur
                .args
                .get(i)
                .ok_or_else(|| KernelError::BadPath(path.to_vec()))?;
            depth += cur.binders.len();
        }
        Ok((cur, depth))
    }

    /// Replaces the body of the node at `path` by the ground term `body`,
    /// which must already live at that node's body depth.
    pub fn replace_body(&self, path: &[usize], body: Term) -> Result<Term> {
        debug_assert!(body.binders.is_empty());
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur
                .args
                .get_mut(i)
                .ok_or_else(|| KernelError::BadPath(path.to_vec()))?;
        }
        cur.head = body.head;
        cur.args = body.args;
        Ok(out)
    }

    /// All paths in pre-order (leftmost-outermost).
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.collect_paths(&mut cur, &mut out);
        out
    }

    fn collect_paths(&self, cur: &mut Path, out: &mut Vec<Path>) {
        out.push(cur.clone());
        for (i, a) in self.args.iter().enumerate() {
            cur.push(i);
            a.collect_paths(cur, out);
            cur.pop();
        }
    }

    /// Renames holes through `f`.
    pub(crate) fn map_holes(&self, f: &dyn Fn(usize) -> Head) -> Term {
        let head = match &self.head {
            Head::Hole(k) => f(*k),
            h => h.clone(),
        };
        Term::new(
            self.binders.clone(),
            head,
            self.args.iter().map(|a| a.map_holes(f)).collect(),
        )
    }

    /// Largest hole index + 1.
    pub fn hole_count(&self) -> usize {
        let own = match self.head {
            Head::Hole(k) => k + 1,
            _ => 0,
        };
        self.args.iter().map(Term::hole_count).fold(own, usize::max)
    }
}

use std::fmt;

use crate::kernel::{plug_holes, print_at, Head, KernelError, Path, SimpleType, Term};

use super::{CellError, Result};

/// A ground subterm together with the depth it lives at and its path
/// relative to the node it was carved out of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub term: Term,
    pub depth: usize,
    pub path: Path,
}

impl Located {
    /// Moves the subterm to depth `to`, keeping levels below `keep` (which
    /// must cover every free level of the subterm).
    pub fn moved_to(&self, keep: usize, to: usize) -> Result<Term> {
        Ok(self.term.relocate(keep, self.depth, to)?)
    }
}

/// A ground term with numbered ground holes, living at `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiContext {
    pub skeleton: Term,
    pub depth: usize,
    pub holes: usize,
}

impl MultiContext {
    /// Fills hole `k` with `fillers[k] = (body, base)`, see [`Located`].
    pub fn plug(&self, fillers: &[(Term, usize)]) -> Result<Term> {
        check_fill_count(self.holes, fillers.len())?;
        Ok(plug_holes(&self.skeleton, self.depth, fillers)?)
    }
}

impl fmt::Display for MultiContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_at(&self.skeleton, self.depth))
    }
}

fn check_fill_count(holes: usize, given: usize) -> Result<()> {
    if holes != given {
        return Err(CellError::HoleOutOfRange {
            k: given,
            count: holes,
        });
    }
    Ok(())
}

/// `head C1 .. Cp` where every `Ci` is a closed context whose holes are
/// ground. Contexts are stored as if the cell sat at depth 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub head: usize,
    pub head_ty: SimpleType,
    pub args: Vec<Term>,
    pub hole_count: usize,
}

impl Cell {
    /// The cell as a ground skeleton at `depth`.
    pub fn skeleton(&self, depth: usize) -> Term {
        let args = self
            .args
            .iter()
            .map(|a| a.relocate(0, 0, depth).expect("cell contexts are closed"))
            .collect();
        Term::ground(Head::Var(self.head), args)
    }

    /// `Σ[f1]..[fK]` at `depth`; each filler is `(body, base)` as for
    /// [`MultiContext::plug`].
    pub fn plug(&self, depth: usize, fillers: &[(Term, usize)]) -> Result<Term> {
        check_fill_count(self.hole_count, fillers.len())?;
        Ok(plug_holes(&self.skeleton(depth), depth, fillers)?)
    }

    /// `\x1..xK. Cj[x1]..[xK]`, a closed term.
    pub fn context_closure(&self, j: usize) -> Term {
        let k = self.hole_count;
        let c = &self.args[j];
        let shifted = c.relocate(0, 0, k).expect("cell contexts are closed");
        let body = shifted.map_holes(&Head::Var);
        let mut binders = vec![SimpleType::Ground; k];
        binders.extend(body.binders().iter().cloned());
        Term::abstracted(binders, body.body())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_at(&self.skeleton(self.head + 1), self.head + 1))
    }
}

/// Replaces by holes the maximal proper subterms of the arguments of `body`
/// (a ground term at `depth`) selected by `is_hole(body, depth)`.
fn carve(
    body: &Term,
    depth: usize,
    is_hole: &dyn Fn(&Term, usize) -> bool,
) -> (Vec<Term>, Vec<Located>) {
    let mut holes = Vec::new();
    let mut path = Vec::new();
    let args = body
        .args()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            path.push(i);
            let r = carve_node(a, depth, is_hole, &mut holes, &mut path);
            path.pop();
            r
        })
        .collect();
    (args, holes)
}

fn carve_node(
    node: &Term,
    depth: usize,
    is_hole: &dyn Fn(&Term, usize) -> bool,
    holes: &mut Vec<Located>,
    path: &mut Path,
) -> Term {
    let d = depth + node.binders().len();
    let body = node.body();
    if is_hole(&body, d) {
        let k = holes.len();
        holes.push(Located {
            term: body,
            depth: d,
            path: path.clone(),
        });
        return Term::abstracted(node.binders().to_vec(), Term::ground(Head::Hole(k), vec![]));
    }
    let args = node
        .args()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            path.push(i);
            let r = carve_node(a, d, is_hole, holes, path);
            path.pop();
            r
        })
        .collect();
    Term::new(node.binders().to_vec(), node.head().clone(), args)
}

fn head_type(body: &Term) -> SimpleType {
    SimpleType::from_args(body.args().iter().map(Term::ty))
}

fn close_contexts(args: Vec<Term>, depth: usize) -> Result<Vec<Term>> {
    args.into_iter()
        .map(|a| {
            a.relocate(0, depth, 0).map_err(|_| {
                CellError::NotACell("an argument context keeps a free variable".into())
            })
        })
        .collect()
}

/// Factors a ground term `y v1 .. vp` living at `depth` as `Σ[w1]..[wL]`.
/// Levels below `outer` are the outer binders; the head must be one of them
/// and every filler may only use them. Holes sit at the maximal subterms of the arguments headed by an outer
/// binder, numbered leftmost-outermost.
pub fn factor_cell(t: &Term, depth: usize, outer: usize) -> Result<(Cell, Vec<Located>)> {
    let head = match t.head() {
        Head::Var(l) if *l < outer && t.is_ground() => *l,
        _ => return Err(CellError::HeadNotOuter),
    };
    let (args, fillers) = carve(t, depth, &|b, _| matches!(b.head(), Head::Var(l) if *l < outer));
    for f in &fillers {
        if !f.term.free_below(f.depth, outer) {
            return Err(CellError::NotACell(format!(
                "filler {} uses a variable that is not an outer binder",
                print_at(&f.term, f.depth)
            )));
        }
    }
    let args = close_contexts(args, depth)?;
    Ok((
        Cell {
            head,
            head_ty: head_type(t),
            hole_count: fillers.len(),
            args,
        },
        fillers,
    ))
}

/// The coarsest cell at a ground term `y v1 .. vp` living at `depth`: holes
/// at the maximal ground subterms of the arguments that use no variable bound
/// inside the cell.
pub fn shallow_cell(t: &Term, depth: usize) -> Result<(Cell, Vec<Located>)> {
    let head = match t.head() {
        Head::Var(l) if *l < depth && t.is_ground() => *l,
        _ => return Err(CellError::HeadNotOuter),
    };
    let (args, fillers) = carve(t, depth, &|b, d| b.free_below(d, depth));
    let args = close_contexts(args, depth)?;
    Ok((
        Cell {
            head,
            head_ty: head_type(t),
            hole_count: fillers.len(),
            args,
        },
        fillers,
    ))
}

/// The minimal context `M` with `u = M[t1]..[tK]` where the `tk` are the
/// maximal proper ground subterms of `u` headed by a level below `outer`.
pub fn minimal_shell(u: &Term, depth: usize, outer: usize) -> Result<(MultiContext, Vec<Located>)> {
    match u.head() {
        Head::Var(l) if *l < outer && u.is_ground() => {}
        _ => return Err(CellError::HeadNotOuter),
    }
    let (args, subterms) = carve(u, depth, &|b, _| matches!(b.head(), Head::Var(l) if *l < outer));
    Ok((
        MultiContext {
            skeleton: Term::ground(u.head().clone(), args),
            depth,
            holes: subterms.len(),
        },
        subterms,
    ))
}

impl From<KernelError> for CellError {
    fn from(e: KernelError) -> CellError {
        CellError::Kernel(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_term, Signature};

    fn sig() -> Signature {
        Signature::parse("a,b").unwrap()
    }

    #[test]
    fn factor_nested_identity() {
        let t = parse_term(
            "\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))",
            &sig(),
        )
        .unwrap();
        let (cell, fillers) = factor_cell(&t.body(), 2, 2).unwrap();
        assert_eq!(cell.hole_count, 1);
        assert_eq!(print_at(&cell.skeleton(2), 2), "y0 (\\y2:o. []1)");
        assert_eq!(fillers.len(), 1);
        assert_eq!(print_at(&fillers[0].term, 3), "y1 (y0 (\\y3:o. y3))");
        // round trip
        let back = cell
            .plug(2, &[(fillers[0].moved_to(2, 2).unwrap(), 2)])
            .unwrap();
        assert_eq!(back, t.body());
    }

    #[test]
    fn factor_without_holes() {
        let t = parse_term("\\y:(o->o)->o. y (\\z:o. z)", &sig()).unwrap();
        let (cell, fillers) = factor_cell(&t.body(), 1, 1).unwrap();
        assert_eq!(cell.hole_count, 0);
        assert!(fillers.is_empty());
        let t = parse_term("\\y:o->o. y a", &sig()).unwrap();
        let (cell, _) = factor_cell(&t.body(), 1, 1).unwrap();
        assert_eq!(cell.hole_count, 0);
        assert_eq!(cell.to_string(), "y0 a");
    }

    #[test]
    fn factor_rejects_orphans() {
        // y2 (y1 (\w. z)) inside \z: the filler y1 (\w. z) mentions z
        let t = parse_term(
            "\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 (y1 (\\w:o. z)))",
            &sig(),
        )
        .unwrap();
        let body = t.body();
        let (_, subs) = minimal_shell(&body, 2, 2).unwrap();
        let inner = &subs[0];
        assert!(matches!(
            factor_cell(&inner.term, inner.depth, 2),
            Err(CellError::NotACell(_))
        ));
        // with z in scope the factoring exists
        assert!(factor_cell(&inner.term, inner.depth, inner.depth).is_ok());
        assert_eq!(factor_cell(&Term::constant("a"), 0, 0).unwrap_err(), CellError::HeadNotOuter);
    }

    #[test]
    fn shells() {
        let t = parse_term("\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 z)", &sig()).unwrap();
        let (m, subs) = minimal_shell(&t.body(), 2, 2).unwrap();
        assert_eq!(m.to_string(), "y0 (\\y2:o. []1)");
        assert_eq!(subs.len(), 1);
        assert_eq!(print_at(&subs[0].term, 3), "y1 y2");

        let t = parse_term("\\y:o->o. y a", &sig()).unwrap();
        let (m, subs) = minimal_shell(&t.body(), 1, 1).unwrap();
        assert_eq!(m.holes, 0);
        assert!(subs.is_empty());

        let t = parse_term(
            "\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 (y1 (\\w:o. w)))",
            &sig(),
        )
        .unwrap();
        let (m, subs) = minimal_shell(&t.body(), 2, 2).unwrap();
        assert_eq!(m.to_string(), "y0 (\\y2:o. []1)");
        assert_eq!(print_at(&subs[0].term, 3), "y1 (y0 (\\y3:o. y3))");
    }

    #[test]
    fn shallow_cells() {
        let t = parse_term("\\y:o->o->o. y a (y b a)", &sig()).unwrap();
        let (cell, fillers) = shallow_cell(&t.body(), 1).unwrap();
        assert_eq!(cell.to_string(), "y0 []1 []2");
        assert_eq!(fillers.len(), 2);
        let t = parse_term("\\y:(o->o)->o. y (\\z:o. z)", &sig()).unwrap();
        let (cell, fillers) = shallow_cell(&t.body(), 1).unwrap();
        assert_eq!(cell.hole_count, 0);
        assert!(fillers.is_empty());
    }

    #[test]
    fn context_closures() {
        let t = parse_term(
            "\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))",
            &sig(),
        )
        .unwrap();
        let (cell, _) = factor_cell(&t.body(), 2, 2).unwrap();
        let c = cell.context_closure(0);
        assert_eq!(crate::kernel::print_term(&c), "\\y0:o. \\y1:o. y0");
    }
}

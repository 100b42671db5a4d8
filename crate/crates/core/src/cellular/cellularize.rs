use std::collections::HashMap;

use crate::kernel::{Head, Term};

use super::predicates::arg_closure;
use super::{factor_cell, is_cellular, is_semi_cellular, minimal_shell, CellError, Result};

/// A cellular term observationally equivalent to the closed term `t`.
pub fn cellularize(t: &Term) -> Result<Term> {
    if !t.is_closed() {
        return Err(CellError::NotClosed);
    }
    let mut memo = HashMap::new();
    let out = cellularize_rec(t, &mut memo)?;
    debug_assert!(is_cellular(&out)?);
    Ok(out)
}

fn cellularize_rec(t: &Term, memo: &mut HashMap<Term, Term>) -> Result<Term> {
    if !matches!(t.head(), Head::Var(_)) || is_cellular(t)? {
        return Ok(t.clone());
    }
    let n = t.binders().len();
    let mut args = Vec::with_capacity(t.args().len());
    for a in t.args() {
        let c = cellularize_rec(&arg_closure(t, a), memo)?;
        let own = c.binders()[n..].to_vec();
        args.push(Term::abstracted(own, c.body()));
    }
    let semi = Term::abstracted(
        t.binders().to_vec(),
        Term::ground(t.head().clone(), args),
    );
    semi_rec(&semi, memo)
}

/// A cellular term observationally equivalent to the semi-cellular `t`;
/// cellular input comes back unchanged.
pub fn cellularize_semi(t: &Term) -> Result<Term> {
    if !is_semi_cellular(t)? {
        return Err(CellError::NotSemiCellular);
    }
    semi_rec(t, &mut HashMap::new())
}

fn semi_rec(t: &Term, memo: &mut HashMap<Term, Term>) -> Result<Term> {
    if is_cellular(t)? {
        return Ok(t.clone());
    }
    if let Some(r) = memo.get(t) {
        return Ok(r.clone());
    }
    let n = t.binders().len();
    let body = t.body();
    let (shell, subs) = minimal_shell(&body, n, n)?;
    let originals: Vec<(Term, usize)> = subs.iter().map(|s| (s.term.clone(), s.depth)).collect();

    let mut plugged = Vec::with_capacity(subs.len());
    for (k, sub) in subs.iter().enumerate() {
        let dk = sub.depth;
        let (cell, fillers) = factor_cell(&sub.term, dk, dk)?;
        let mut parts = Vec::with_capacity(fillers.len());
        for w in &fillers {
            let mut fill = originals.clone();
            fill[k] = (w.moved_to(dk, dk)?, dk);
            let nkl = shell.plug(&fill)?;
            let closure = Term::abstracted(t.binders().to_vec(), nkl);
            if closure.size() >= t.size() {
                return Err(CellError::Internal("recursive instance is not smaller".into()));
            }
            let r = semi_rec(&closure, memo)?;
            parts.push((r.body(), n));
        }
        plugged.push((cell.plug(dk, &parts)?, dk));
    }
    let out = Term::abstracted(t.binders().to_vec(), shell.plug(&plugged)?);
    if !is_cellular(&out)? {
        return Err(CellError::Internal("assembled term is not cellular".into()));
    }
    memo.insert(t.clone(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_term, parse_type, Signature};

    fn p(s: &str) -> Term {
        parse_term(s, &Signature::parse("a,b").unwrap()).unwrap()
    }

    #[test]
    fn identity_example() {
        let t = p("\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y2 z)");
        let c = cellularize_semi(&t).unwrap();
        assert!(is_cellular(&c).unwrap());
        assert_eq!(
            c,
            p("\\y1:(o->o)->o. \\y2:o->o. y1 (\\d:o. y2 (y1 (\\z:o. z)))")
        );
        assert_eq!(cellularize(&t).unwrap(), c);
    }

    #[test]
    fn fixed_points() {
        for s in ["a", "\\y:(o->o)->o. y (\\z:o. z)", "\\y:o->o. \\x:o. b"] {
            let t = p(s);
            assert_eq!(cellularize(&t).unwrap(), t);
            assert_eq!(cellularize_semi(&t).unwrap(), t);
        }
    }

    #[test]
    fn rejects_non_semi_cellular() {
        let t = p("\\y1:(o->o)->o. \\y2:o->o. y1 (\\z:o. y1 (\\w:o. y2 (y1 (\\q:o. w))))");
        assert_eq!(cellularize_semi(&t), Err(CellError::NotSemiCellular));
        assert!(is_cellular(&cellularize(&t).unwrap()).unwrap());
    }

    #[test]
    fn identities_become_cellular() {
        for ty in [
            "((o->o)->o)->(o->o)->o",
            "((o->o->o)->o)->(o->o)->o",
            "(((o->o)->o)->o)->o",
        ] {
            let id = Term::identity(&parse_type(ty).unwrap());
            assert!(is_cellular(&cellularize(&id).unwrap()).unwrap(), "{ty}");
        }
    }
}

use crate::kernel::{Head, Term};

use super::{factor_cell, CellError, Result};

fn ensure_closed(t: &Term) -> Result<()> {
    if t.is_closed() {
        Ok(())
    } else {
        Err(CellError::NotClosed)
    }
}

pub fn is_cellular(t: &Term) -> Result<bool> {
    ensure_closed(t)?;
    let n = t.binders().len();
    Ok(body_ok(t.head(), t.args(), n, n))
}

/// Every subterm headed by a level below `n` has its free levels below `n`.
fn body_ok(head: &Head, args: &[Term], depth: usize, n: usize) -> bool {
    if let Head::Var(l) = head {
        if *l < n && !args.iter().all(|a| a.free_below(depth, n)) {
            return false;
        }
    }
    args.iter()
        .all(|a| body_ok(a.head(), a.args(), depth + a.binders().len(), n))
}

pub fn is_semi_cellular(t: &Term) -> Result<bool> {
    if is_cellular(t)? {
        return Ok(true);
    }
    let n = t.binders().len();
    match t.head() {
        Head::Var(l) if *l < n => {}
        _ => return Ok(false),
    }
    for a in t.args() {
        if !is_cellular(&arg_closure(t, a))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `\y1..yn. a` for an argument `a` of the body of `t`.
pub(crate) fn arg_closure(t: &Term, a: &Term) -> Term {
    let mut binders = t.binders().to_vec();
    binders.extend(a.binders().iter().cloned());
    Term::abstracted(binders, a.body())
}

/// Cellular, and for every cell of the decomposition each
/// `\x1..xK. Cj[x1]..[xK]` is again hereditary cellular.
pub fn is_hereditary_cellular(t: &Term) -> Result<bool> {
    if !is_cellular(t)? {
        return Ok(false);
    }
    hereditary(t)
}

fn hereditary(t: &Term) -> Result<bool> {
    let n = t.binders().len();
    if !matches!(t.head(), Head::Var(_)) {
        return Ok(true);
    }
    let (cell, fillers) = factor_cell(&t.body(), n, n)?;
    for j in 0..cell.args.len() {
        if !is_hereditary_cellular(&cell.context_closure(j))? {
            return Ok(false);
        }
    }
    for f in &fillers {
        let w = Term::abstracted(t.binders().to_vec(), f.moved_to(n, n)?);
        if !hereditary(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

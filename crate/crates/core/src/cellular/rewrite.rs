use serde::Serialize;

use crate::kernel::{Head, Path, Term};

use super::{shallow_cell, CellError, Result};

/// `\y1..yn. M[u]` to `\y1..yn. M[M[u]]`, where `u` is the subterm at `path`
/// and `M` the surrounding one-hole context.
pub fn stretch(t: &Term, path: &[usize]) -> Result<Term> {
    if !t.is_closed() {
        return Err(CellError::NotClosed);
    }
    let (_, depth) = t.node_at(path)?;
    if path.is_empty() {
        return Ok(t.clone());
    }
    let n = t.binders().len();
    let whole = t.body().relocate(n, n, depth)?;
    Ok(t.replace_body(path, whole)?)
}

/// Where a shrink applies: two occurrences of the same cell, the inner one
/// inside the `k`-th hole (1-based) of the outer one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrinkSite {
    pub outer: Path,
    pub inner: Path,
    pub k: usize,
}

/// Replaces the inner occurrence `Σ[v1]..[vK]` by `vk`.
pub fn shrink(t: &Term, outer: &[usize], inner: &[usize], k: usize) -> Result<Term> {
    if !t.is_closed() {
        return Err(CellError::NotClosed);
    }
    let n = t.binders().len();
    let (onode, od) = t.node_at(outer)?;
    let (cell, fillers) = outer_cell(onode, od, n)?;
    if k == 0 || k > fillers.len() {
        return Err(CellError::HoleOutOfRange {
            k,
            count: fillers.len(),
        });
    }
    let mut hole_path = outer.to_vec();
    hole_path.extend(&fillers[k - 1].path);
    if !inner.starts_with(&hole_path) {
        return Err(CellError::NotNested);
    }
    let (inode, id) = t.node_at(inner)?;
    let (icell, ifillers) = shallow_cell(&inode.body(), id)?;
    if icell != cell {
        return Err(CellError::CellMismatch);
    }
    let v = &ifillers[k - 1];
    Ok(t.replace_body(inner, v.moved_to(id, id)?)?)
}

fn outer_cell(node: &Term, depth: usize, n: usize) -> Result<(super::Cell, Vec<super::Located>)> {
    match node.head() {
        Head::Var(l) if *l < n => shallow_cell(&node.body(), depth),
        _ => Err(CellError::HeadNotOuter),
    }
}

/// Every place where [`shrink`] applies, in pre-order of the outer occurrence.
pub fn shrink_sites(t: &Term) -> Vec<ShrinkSite> {
    let n = t.binders().len();
    let mut out = Vec::new();
    for p in t.paths() {
        let Ok((node, d)) = t.node_at(&p) else { continue };
        let Ok((cell, fillers)) = outer_cell(node, d, n) else { continue };
        for (k, f) in fillers.iter().enumerate() {
            let mut hole = p.clone();
            hole.extend(&f.path);
            let Ok((sub, _)) = t.node_at(&hole) else { continue };
            for rel in sub.paths() {
                let mut q = hole.clone();
                q.extend(rel);
                let Ok((inode, id)) = t.node_at(&q) else { continue };
                if !matches!(inode.head(), Head::Var(l) if *l == cell.head) {
                    continue;
                }
                if shallow_cell(&inode.body(), id).is_ok_and(|(c, _)| c == cell) {
                    out.push(ShrinkSite {
                        outer: p.clone(),
                        inner: q,
                        k: k + 1,
                    });
                }
            }
        }
    }
    out
}

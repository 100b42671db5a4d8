use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Head, Term};

const PREFIXES: [&str; 5] = ["y", "x", "v", "w", "u"];

/// Canonical text of a term: the binder at level `l` is named `y<l>` (or the
/// first prefix that cannot clash with a name already occurring in the term).
pub fn print_term(t: &Term) -> String {
    print_at(t, 0)
}

/// Prints a node whose binders start at level `depth`; levels below `depth`
/// print with the same naming scheme.
pub fn print_at(t: &Term, depth: usize) -> String {
    let mut names = BTreeSet::new();
    t.free_names(&mut names);
    names.extend(t.constants());
    let clashes = |p: &str| {
        names.iter().any(|n| {
            n.strip_prefix(p)
                .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
        })
    };
    let prefix = PREFIXES
        .iter()
        .copied()
        .find(|p| !clashes(p))
        .unwrap_or("y_");
    let mut out = String::new();
    write_node(&mut out, t, depth, prefix);
    out
}

fn write_node(out: &mut String, t: &Term, depth: usize, p: &str) {
    for (j, ty) in t.binders.iter().enumerate() {
        let _ = write!(out, "\\{p}{}:{ty}. ", depth + j);
    }
    let inner = depth + t.binders.len();
    write_head(out, &t.head, p);
    for a in &t.args {
        out.push(' ');
        if a.binders.is_empty() && a.args.is_empty() {
            write_head(out, &a.head, p);
        } else {
            out.push('(');
            write_node(out, a, inner, p);
            out.push(')');
        }
    }
}

fn write_head(out: &mut String, h: &Head, p: &str) {
    let _ = match h {
        Head::Var(l) => write!(out, "{p}{l}"),
        Head::Free(n) | Head::Const(n) => write!(out, "{n}"),
        Head::Hole(k) => write!(out, "[]{}", k + 1),
    };
}

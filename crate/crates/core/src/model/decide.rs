use std::sync::Arc;

use serde_json::{json, Value};

use crate::kernel::{instantiate, print_term, Head, Name, Signature, Term};

use super::{Classified, Model, ModelError, Profile, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// `t r1..rn` and `u r1..rn` normalize to the two different constants.
    Inequivalent {
        witness: Vec<Term>,
        left: Name,
        right: Name,
    },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Equivalent => json!({ "verdict": "equivalent" }),
            Verdict::Inequivalent {
                witness,
                left,
                right,
            } => json!({
                "verdict": "inequivalent",
                "witness": witness.iter().map(print_term).collect::<Vec<_>>(),
                "left": &**left,
                "right": &**right,
            }),
        }
    }
}

/// Index tuples over lists of the given lengths, first position most
/// significant.
pub(crate) struct Tuples {
    lens: Vec<usize>,
    cur: Option<Vec<usize>>,
}

impl Tuples {
    pub(crate) fn new(lens: Vec<usize>) -> Tuples {
        let cur = if lens.contains(&0) {
            None
        } else {
            Some(vec![0; lens.len()])
        };
        Tuples { lens, cur }
    }

    pub(crate) fn count(lens: &[usize]) -> Option<usize> {
        lens.iter().try_fold(1usize, |acc, &l| acc.checked_mul(l))
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.cur = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.lens[pos] {
                self.cur = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

fn check_tuples(model: &Model, lens: &[usize]) -> Result<()> {
    let limit = model.config().max_tuples;
    match Tuples::count(lens) {
        Some(c) if c <= limit => Ok(()),
        _ => Err(ModelError::Budget {
            what: "argument tuples",
            limit,
        }),
    }
}

fn ground_value(r: &Term, sig: &Signature) -> Result<u32> {
    match r.head() {
        Head::Const(c) if r.is_ground() && r.args().is_empty() => sig
            .index_of(c)
            .map(|i| i as u32)
            .ok_or_else(|| ModelError::ForeignConstant(c.to_string())),
        _ => Err(ModelError::Internal(format!(
            "closed ground term {} is not a constant",
            print_term(r)
        ))),
    }
}

pub(crate) fn profile(
    model: &Model,
    t: &Term,
    args: &[Arc<Classified>],
    sig: &Signature,
) -> Result<Profile> {
    let lens: Vec<usize> = args.iter().map(|c| c.reps.len()).collect();
    check_tuples(model, &lens)?;
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(args.len());
    for (n, idx) in Tuples::new(lens).enumerate() {
        if n % 4096 == 4095 {
            model.check_time()?;
        }
        buf.clear();
        buf.extend(idx.iter().zip(args).map(|(&k, c)| c.reps[k].clone()));
        out.push(ground_value(&instantiate(t, &buf)?, sig)?);
    }
    Ok(out)
}

fn check_input(t: &Term, sig: &Signature) -> Result<()> {
    if !t.is_closed() {
        return Err(ModelError::NotClosed);
    }
    if let Some(c) = t.constants().into_iter().find(|c| !sig.contains(c)) {
        return Err(ModelError::ForeignConstant(c.to_string()));
    }
    Ok(())
}

pub(crate) fn decide(model: &Model, t: &Term, u: &Term, sig: &Signature) -> Result<Verdict> {
    check_input(t, sig)?;
    check_input(u, sig)?;
    let ty = t.ty();
    if ty != u.ty() {
        return Err(ModelError::TypeMismatch {
            left: ty,
            right: u.ty(),
        });
    }
    let args = model.arg_classes(&ty, sig)?;
    let lens: Vec<usize> = args.iter().map(|c| c.reps.len()).collect();
    check_tuples(model, &lens)?;
    for idx in Tuples::new(lens) {
        model.check_time()?;
        let tuple: Vec<Term> = idx.iter().zip(&args).map(|(&k, c)| c.reps[k].clone()).collect();
        let l = instantiate(t, &tuple)?;
        let r = instantiate(u, &tuple)?;
        let (li, ri) = (ground_value(&l, sig)?, ground_value(&r, sig)?);
        if li != ri {
            let names = sig.names();
            return Ok(Verdict::Inequivalent {
                witness: tuple,
                left: names[li as usize].clone(),
                right: names[ri as usize].clone(),
            });
        }
    }
    Ok(Verdict::Equivalent)
}

pub(crate) fn canonical(model: &Model, t: &Term, sig: &Signature) -> Result<Term> {
    check_input(t, sig)?;
    let ty = t.ty();
    let table = model.classified(&ty, sig)?;
    let args = model.arg_classes(&ty, sig)?;
    let p = profile(model, t, &args, sig)?;
    match table.index.get(&p) {
        Some(&i) => Ok(table.reps[i].clone()),
        None => Err(ModelError::Internal(format!(
            "no representative matches {}",
            print_term(t)
        ))),
    }
}

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde_json::{json, Value};

use crate::kernel::{print_term, subst_constants, Head, Name, Signature, SimpleType, Term};

use super::decide::{profile, Tuples};
use super::{Model, ModelError, Profile, Result, Strategy};

/// Identifier of the `index`-th candidate of argument `arg` (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VId {
    pub arg: usize,
    pub index: usize,
}

impl fmt::Display for VId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}.{}", self.arg, self.index)
    }
}

/// `\y1..yn. yi w1..wp`, possibly mentioning the fresh constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub id: VId,
    pub term: Term,
    /// Positions (into the argument's fresh names) of the fresh constants
    /// that occur in the term.
    pub holes: Vec<usize>,
}

/// Everything built for one argument position `yi : Ai`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgFamily {
    pub index: usize,
    pub ty: SimpleType,
    pub bound: usize,
    pub fresh: Vec<Name>,
    /// One list of representatives per argument type of `Ai`, over the
    /// constants extended with `fresh`.
    pub families: Vec<Vec<Term>>,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepEntry {
    pub term: Term,
    pub used: BTreeSet<VId>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepTable {
    pub for_type: SimpleType,
    pub constants: Signature,
    pub strategy: Strategy,
    pub arguments: Vec<ArgFamily>,
    pub entries: Vec<RepEntry>,
}

impl RepTable {
    pub fn candidate_count(&self) -> usize {
        self.arguments.iter().map(|a| a.candidates.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let arguments: Vec<Value> = self
            .arguments
            .iter()
            .map(|a| {
                json!({
                    "index": a.index,
                    "type": a.ty.to_string(),
                    "bound": a.bound,
                    "fresh": a.fresh.iter().map(|n| &**n).collect::<Vec<_>>(),
                    "families": a.families.iter()
                        .map(|f| f.iter().map(print_term).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "candidates": a.candidates.iter()
                        .map(|c| json!({ "id": c.id.to_string(), "term": print_term(&c.term) }))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "term": print_term(&e.term),
                    "used": e.used.iter().map(VId::to_string).collect::<Vec<_>>(),
                    "depth": e.depth,
                })
            })
            .collect();
        json!({
            "type": self.for_type.to_string(),
            "constants": self.constants.names().iter().map(|n| &**n).collect::<Vec<_>>(),
            "strategy": self.strategy.to_string(),
            "arguments": arguments,
            "entries": entries,
        })
    }
}

pub(crate) struct Built {
    pub table: RepTable,
    /// Class profiles of the entries when the strategy computed them anyway.
    pub profiles: Option<Vec<Profile>>,
}

/// Fresh constants are `#d<n>_<i>_<k>` where `n` is one more than the
/// deepest such constant already in the signature.
fn fresh_depth(sig: &Signature) -> usize {
    1 + sig
        .names()
        .iter()
        .filter_map(|n| n.strip_prefix("#d")?.split('_').next()?.parse::<usize>().ok())
        .max()
        .unwrap_or(0)
}

fn families(model: &Model, ty: &SimpleType, sig: &Signature) -> Result<Vec<ArgFamily>> {
    let cfg = model.config();
    let binders = ty.args();
    let n = binders.len();
    let depth = fresh_depth(sig);
    let mut out = Vec::with_capacity(n);
    for (i, ai) in binders.iter().enumerate() {
        let bs = ai.args();
        let fresh_budget = ModelError::Budget {
            what: "fresh constants",
            limit: cfg.max_fresh,
        };
        let mut exp = 1usize;
        for b in &bs {
            exp = exp
                .checked_mul(model.count_classes(b, sig)?)
                .ok_or_else(|| fresh_budget.clone())?;
        }
        let bound = u32::try_from(exp)
            .ok()
            .and_then(|e| sig.len().checked_pow(e))
            .and_then(|v| v.checked_add(1))
            .filter(|&k| k <= cfg.max_fresh)
            .ok_or(fresh_budget)?;
        let fresh: Vec<Name> = (1..=bound)
            .map(|k| Name::from(format!("#d{depth}_{}_{k}", i + 1)))
            .collect();
        let ext = sig.extended(fresh.iter().cloned())?;
        let fams = bs
            .iter()
            .map(|b| model.class_reps(b, &ext))
            .collect::<Result<Vec<_>>>()?;
        let lens: Vec<usize> = fams.iter().map(Vec::len).collect();
        if Tuples::count(&lens).is_none_or(|c| c > cfg.max_candidates) {
            return Err(ModelError::Budget {
                what: "candidates",
                limit: cfg.max_candidates,
            });
        }
        let candidates = Tuples::new(lens)
            .enumerate()
            .map(|(m, idx)| {
                let args = idx
                    .iter()
                    .zip(&fams)
                    .map(|(&k, fam)| fam[k].relocate(0, 0, n))
                    .collect::<crate::kernel::Result<Vec<_>>>()?;
                let body = Term::ground(Head::Var(i), args);
                let cs = body.constants();
                let holes = (0..fresh.len()).filter(|&k| cs.contains(&fresh[k])).collect();
                Ok(Candidate {
                    id: VId {
                        arg: i + 1,
                        index: m + 1,
                    },
                    term: Term::abstracted(binders.clone(), body),
                    holes,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(ArgFamily {
            index: i + 1,
            ty: ai.clone(),
            bound,
            fresh,
            families: fams,
            candidates,
        });
    }
    Ok(out)
}

pub(crate) fn build(model: &Model, ty: &SimpleType, sig: &Signature) -> Result<Built> {
    let cfg = model.config();
    let arguments = families(model, ty, sig)?;
    let run = |strategy, limit| match strategy {
        Strategy::Exact => Saturation::new(model, ty, sig, limit, true).run(&arguments),
        _ => Saturation::new(model, ty, sig, limit, false).run(&arguments),
    };
    let (strategy, (entries, profiles)) = match cfg.strategy {
        Strategy::Exact => (Strategy::Exact, run(Strategy::Exact, cfg.max_entries)?),
        Strategy::ByClass => (Strategy::ByClass, run(Strategy::ByClass, cfg.max_entries)?),
        Strategy::Auto => match run(Strategy::Exact, cfg.exact_entries.min(cfg.max_entries)) {
            Ok(r) => (Strategy::Exact, r),
            Err(ModelError::Budget { .. }) => {
                (Strategy::ByClass, run(Strategy::ByClass, cfg.max_entries)?)
            }
            Err(e) => return Err(e),
        },
    };
    Ok(Built {
        table: RepTable {
            for_type: ty.clone(),
            constants: sig.clone(),
            strategy,
            arguments,
            entries,
        },
        profiles,
    })
}

struct Pair {
    body: Term,
    used: BTreeSet<VId>,
    depth: usize,
    alive: bool,
}

/// Least-fixpoint computation of the two closure clauses.
///
/// In exact mode a term is kept once per minimal used-set and a candidate may
/// not be plugged with entries that already used it. In class mode a term is
/// kept only if its profile is new, and the side condition is dropped.
struct Saturation<'m> {
    model: &'m Model,
    sig: &'m Signature,
    binders: Vec<SimpleType>,
    exact: bool,
    entry_limit: usize,
    pairs: Vec<Pair>,
    alive: usize,
    nodes: usize,
    steps: usize,
    by_term: HashMap<Term, Vec<usize>>,
    by_profile: HashMap<Profile, usize>,
    profiles: Vec<Profile>,
    tried: HashSet<Term>,
    arg_classes: Vec<std::sync::Arc<super::Classified>>,
}

type Entries = (Vec<RepEntry>, Option<Vec<Profile>>);

impl<'m> Saturation<'m> {
    fn new(
        model: &'m Model,
        ty: &SimpleType,
        sig: &'m Signature,
        entry_limit: usize,
        exact: bool,
    ) -> Saturation<'m> {
        Saturation {
            model,
            sig,
            binders: ty.args(),
            exact,
            entry_limit,
            pairs: Vec::new(),
            alive: 0,
            nodes: 0,
            steps: 0,
            by_term: HashMap::new(),
            by_profile: HashMap::new(),
            profiles: Vec::new(),
            tried: HashSet::new(),
            arg_classes: Vec::new(),
        }
    }

    fn run(mut self, arguments: &[ArgFamily]) -> Result<Entries> {
        let ty = SimpleType::from_args(self.binders.iter().cloned());
        if !self.exact {
            self.arg_classes = self.model.arg_classes(&ty, self.sig)?;
        }
        for c in self.sig.names() {
            self.insert(Term::ground(Head::Const(c.clone()), vec![]), BTreeSet::new(), 0)?;
        }
        let n = self.binders.len();
        let active = self.active_candidates(arguments, n)?;
        let mut delta_start = 0;
        let mut first = true;
        loop {
            let end = self.pairs.len();
            let alive: Vec<usize> = (0..end).filter(|&p| self.pairs[p].alive).collect();
            for fam in arguments {
                for cand in fam.candidates.iter().filter(|c| active.contains(&c.id)) {
                    let body = cand.term.body();
                    let m = cand.holes.len();
                    if m == 0 {
                        if first {
                            self.insert(body, BTreeSet::from([cand.id]), 1)?;
                        }
                        continue;
                    }
                    for idx in Tuples::new(vec![alive.len(); m]) {
                        self.step()?;
                        let comps: Vec<usize> = idx.iter().map(|&k| alive[k]).collect();
                        if comps.iter().all(|&p| p < delta_start) {
                            continue;
                        }
                        if self.exact && comps.iter().any(|&p| self.pairs[p].used.contains(&cand.id)) {
                            continue;
                        }
                        let map: Vec<(Name, &Term)> = cand
                            .holes
                            .iter()
                            .zip(&comps)
                            .map(|(&h, &p)| (fam.fresh[h].clone(), &self.pairs[p].body))
                            .collect();
                        let new_body = subst_constants(&body, n, &map)?;
                        let mut used = BTreeSet::from([cand.id]);
                        let mut depth = 0;
                        for &p in &comps {
                            used.extend(self.pairs[p].used.iter().copied());
                            depth = depth.max(self.pairs[p].depth);
                        }
                        self.insert(new_body, used, depth + 1)?;
                    }
                }
            }
            if self.pairs.len() == end {
                break;
            }
            delta_start = end;
            first = false;
        }
        let binders = self.binders.clone();
        let mut entries = Vec::with_capacity(self.alive);
        for p in self.pairs.into_iter().filter(|p| p.alive) {
            entries.push(RepEntry {
                term: Term::abstracted(binders.clone(), p.body),
                used: p.used,
                depth: p.depth,
            });
        }
        let profiles = (!self.exact).then_some(self.profiles);
        Ok((entries, profiles))
    }

    /// Without the side condition, two candidates that only differ by a
    /// renaming of the fresh constants yield the same results, so only the
    /// first of them is saturated.
    fn active_candidates(&self, arguments: &[ArgFamily], n: usize) -> Result<HashSet<VId>> {
        let mut out = HashSet::new();
        let mut seen = HashSet::new();
        for fam in arguments {
            for cand in &fam.candidates {
                if self.exact {
                    out.insert(cand.id);
                    continue;
                }
                let body = cand.term.body();
                let mut order = Vec::new();
                first_occurrences(&body, &fam.fresh, &mut order);
                let targets: Vec<Term> = (0..order.len())
                    .map(|j| Term::ground(Head::Const(fam.fresh[j].clone()), vec![]))
                    .collect();
                let map: Vec<(Name, &Term)> = order.iter().cloned().zip(&targets).collect();
                if seen.insert(subst_constants(&body, n, &map)?) {
                    out.insert(cand.id);
                }
            }
        }
        Ok(out)
    }

    fn step(&mut self) -> Result<()> {
        self.steps += 1;
        let limit = self.model.config().max_steps;
        if self.steps > limit {
            return Err(ModelError::Budget {
                what: "saturation steps",
                limit,
            });
        }
        if self.steps % 1024 == 0 {
            self.model.check_time()?;
        }
        Ok(())
    }

    fn insert(&mut self, body: Term, used: BTreeSet<VId>, depth: usize) -> Result<()> {
        if self.exact {
            if let Some(list) = self.by_term.get(&body) {
                if list
                    .iter()
                    .any(|&p| self.pairs[p].alive && self.pairs[p].used.is_subset(&used))
                {
                    return Ok(());
                }
                for &p in list {
                    if self.pairs[p].alive && used.is_subset(&self.pairs[p].used) {
                        self.pairs[p].alive = false;
                        self.alive -= 1;
                    }
                }
            }
            self.by_term.entry(body.clone()).or_default().push(self.pairs.len());
        } else {
            if !self.tried.insert(body.clone()) {
                return Ok(());
            }
            let closed = Term::abstracted(self.binders.clone(), body.clone());
            let p = profile(self.model, &closed, &self.arg_classes, self.sig)?;
            if self.by_profile.contains_key(&p) {
                return Ok(());
            }
            self.by_profile.insert(p.clone(), self.pairs.len());
            self.profiles.push(p);
        }
        self.nodes += body.size() + self.binders.len();
        self.pairs.push(Pair {
            body,
            used,
            depth,
            alive: true,
        });
        self.alive += 1;
        let cfg = self.model.config();
        if self.alive > self.entry_limit {
            return Err(ModelError::Budget {
                what: "table entries",
                limit: self.entry_limit,
            });
        }
        if self.nodes > cfg.max_nodes {
            return Err(ModelError::Budget {
                what: "term nodes",
                limit: cfg.max_nodes,
            });
        }
        Ok(())
    }
}

/// Fresh constants of `t` in pre-order of first occurrence.
fn first_occurrences(t: &Term, fresh: &[Name], out: &mut Vec<Name>) {
    if let Head::Const(c) = t.head() {
        if fresh.contains(c) && !out.contains(c) {
            out.push(c.clone());
        }
    }
    for a in t.args() {
        first_occurrences(a, fresh, out);
    }
}

impl Model {
    /// Re-applies both closure clauses once to a finished table and reports
    /// whether anything new would appear: a (term, used-set) pair not
    /// dominated by an entry for exact tables, a new class for class tables.
    pub fn is_saturated(&self, table: &RepTable) -> Result<bool> {
        let n = table.for_type.arity();
        let exact = table.strategy == Strategy::Exact;
        let args = self.arg_classes(&table.for_type, &table.constants)?;
        let mut classes = HashSet::new();
        let mut by_term: HashMap<&Term, Vec<&BTreeSet<VId>>> = HashMap::new();
        for e in &table.entries {
            if exact {
                by_term.entry(&e.term).or_default().push(&e.used);
            } else {
                classes.insert(profile(self, &e.term, &args, &table.constants)?);
            }
        }
        let covered = |term: &Term, used: &BTreeSet<VId>| -> Result<bool> {
            if exact {
                Ok(by_term
                    .get(term)
                    .is_some_and(|l| l.iter().any(|u| u.is_subset(used))))
            } else {
                Ok(classes.contains(&profile(self, term, &args, &table.constants)?))
            }
        };
        for c in table.constants.names() {
            let t = Term::abstracted(
                table.for_type.args(),
                Term::ground(Head::Const(c.clone()), vec![]),
            );
            if !covered(&t, &BTreeSet::new())? {
                return Ok(false);
            }
        }
        for fam in &table.arguments {
            for cand in &fam.candidates {
                let body = cand.term.body();
                for idx in Tuples::new(vec![table.entries.len(); cand.holes.len()]) {
                    self.check_time()?;
                    let comps: Vec<&RepEntry> = idx.iter().map(|&k| &table.entries[k]).collect();
                    if exact && comps.iter().any(|e| e.used.contains(&cand.id)) {
                        continue;
                    }
                    let bodies: Vec<Term> = comps.iter().map(|e| e.term.body()).collect();
                    let map: Vec<(Name, &Term)> = cand
                        .holes
                        .iter()
                        .zip(&bodies)
                        .map(|(&h, b)| (fam.fresh[h].clone(), b))
                        .collect();
                    let t = Term::abstracted(
                        table.for_type.args(),
                        subst_constants(&body, n, &map)?,
                    );
                    let mut used = BTreeSet::from([cand.id]);
                    for e in &comps {
                        used.extend(e.used.iter().copied());
                    }
                    if !covered(&t, &used)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

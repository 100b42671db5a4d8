//! Finite representative sets for observational equivalence, and the decider,
//! class counter and canonical selector built on top of them.
//!
//! Everything goes through a [`Model`], which owns the resource limits and a
//! cache of the tables computed so far. The free functions at the bottom of
//! this module use a fresh default model per call.

mod decide;
mod reps;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelError, Signature, SimpleType, Term};

pub use decide::Verdict;
pub use reps::{ArgFamily, Candidate, RepEntry, RepTable, VId};

/// How the least set of representatives is saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Keeps every (term, used-set) pair up to antichain pruning and enforces
    /// the side condition on candidates.
    Exact,
    /// Keeps one term per class and drops the side condition.
    ByClass,
    /// `Exact` within its own entry budget, otherwise `ByClass`.
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exact => "exact",
            Strategy::ByClass => "by-class",
            Strategy::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConfig {
    pub strategy: Strategy,
    /// Ceiling on the number of fresh constants `K_i` of one argument.
    pub max_fresh: usize,
    /// Ceiling on `|V_i|`.
    pub max_candidates: usize,
    /// Ceiling on the entries of one table.
    pub max_entries: usize,
    /// Entry ceiling for the exact attempt made by [`Strategy::Auto`].
    pub exact_entries: usize,
    /// Ceiling on the summed size of the entries of one table.
    pub max_nodes: usize,
    /// Ceiling on candidate combinations examined while saturating one table.
    pub max_steps: usize,
    /// Ceiling on the number of argument tuples used to compare two terms.
    pub max_tuples: usize,
    pub time_limit: Option<Duration>,
}

impl Default for ModelConfig {
    fn default() -> ModelConfig {
        ModelConfig {
            strategy: Strategy::Auto,
            max_fresh: 64,
            max_candidates: 4096,
            max_entries: 20_000,
            exact_entries: 2_000,
            max_nodes: 2_000_000,
            max_steps: 2_000_000,
            max_tuples: 100_000,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: usize },
    #[error("time limit exceeded")]
    Timeout,
    #[error("type mismatch: {left} vs {right}")]
    TypeMismatch { left: SimpleType, right: SimpleType },
    #[error("constant `{0}` is not in the signature")]
    ForeignConstant(String),
    #[error("term is not closed")]
    NotClosed,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

/// Results of a term on every tuple of argument representatives, as indices
/// into the signature.
pub(crate) type Profile = Vec<u32>;

/// A table together with its deduplicated entries.
pub(crate) struct Classified {
    pub table: Arc<RepTable>,
    pub reps: Vec<Term>,
    pub index: HashMap<Profile, usize>,
}

type Key = (SimpleType, Signature);

/// Resource limits plus a cache of the tables computed so far. The cache
/// only avoids recomputation: results are the same with a fresh model.
pub struct Model {
    config: ModelConfig,
    deadline: Option<Instant>,
    cache: Mutex<HashMap<Key, Arc<Classified>>>,
}

impl Default for Model {
    fn default() -> Model {
        Model::new(ModelConfig::default())
    }
}

impl Model {
    /// The time limit, if any, starts counting now.
    pub fn new(config: ModelConfig) -> Model {
        Model {
            deadline: config.time_limit.map(|d| Instant::now() + d),
            config,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub(crate) fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(ModelError::Timeout),
            _ => Ok(()),
        }
    }

    pub(crate) fn classified(&self, ty: &SimpleType, sig: &Signature) -> Result<Arc<Classified>> {
        let key = (ty.clone(), sig.clone());
        if let Some(c) = self.lock().get(&key) {
            return Ok(c.clone());
        }
        self.check_time()?;
        let built = reps::build(self, ty, sig)?;
        let args = self.arg_classes(ty, sig)?;
        let mut reps = Vec::new();
        let mut index = HashMap::new();
        for (i, e) in built.table.entries.iter().enumerate() {
            let p = match &built.profiles {
                Some(ps) => ps[i].clone(),
                None => decide::profile(self, &e.term, &args, sig)?,
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(p) {
                slot.insert(reps.len());
                reps.push(e.term.clone());
            }
        }
        let c = Arc::new(Classified {
            table: Arc::new(built.table),
            reps,
            index,
        });
        Ok(self.lock().entry(key).or_insert(c).clone())
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<Key, Arc<Classified>>> {
        self.cache.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Classified tables of the argument types of `ty`.
    pub(crate) fn arg_classes(&self, ty: &SimpleType, sig: &Signature) -> Result<Vec<Arc<Classified>>> {
        ty.args().iter().map(|a| self.classified(a, sig)).collect()
    }

    /// Every table computed so far, including the nested ones built for
    /// argument types and extended signatures, sorted by type then constants.
    pub fn cached_tables(&self) -> Vec<Arc<RepTable>> {
        let mut all: Vec<(Key, Arc<RepTable>)> = self
            .lock()
            .iter()
            .map(|(k, c)| (k.clone(), c.table.clone()))
            .collect();
        all.sort_by(|a, b| a.0.cmp(&b.0));
        all.into_iter().map(|(_, t)| t).collect()
    }

    pub fn representatives(&self, ty: &SimpleType, sig: &Signature) -> Result<Arc<RepTable>> {
        Ok(self.classified(ty, sig)?.table.clone())
    }

    /// The first entry of each class, in entry order.
    pub fn dedup(&self, table: &RepTable) -> Result<Vec<Term>> {
        let args = self.arg_classes(&table.for_type, &table.constants)?;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for e in &table.entries {
            if seen.insert(decide::profile(self, &e.term, &args, &table.constants)?) {
                out.push(e.term.clone());
            }
        }
        Ok(out)
    }

    /// One representative per class, in entry order.
    pub fn class_reps(&self, ty: &SimpleType, sig: &Signature) -> Result<Vec<Term>> {
        Ok(self.classified(ty, sig)?.reps.clone())
    }

    pub fn count_classes(&self, ty: &SimpleType, sig: &Signature) -> Result<usize> {
        Ok(self.classified(ty, sig)?.reps.len())
    }

    pub fn decide_equiv(&self, t: &Term, u: &Term, sig: &Signature) -> Result<Verdict> {
        decide::decide(self, t, u, sig)
    }

    pub fn canonical_rep(&self, t: &Term, sig: &Signature) -> Result<Term> {
        decide::canonical(self, t, sig)
    }
}

pub fn representatives(ty: &SimpleType, sig: &Signature) -> Result<Arc<RepTable>> {
    Model::default().representatives(ty, sig)
}

pub fn dedup(table: &RepTable) -> Result<Vec<Term>> {
    Model::default().dedup(table)
}

pub fn count_classes(ty: &SimpleType, sig: &Signature) -> Result<usize> {
    Model::default().count_classes(ty, sig)
}

pub fn decide_equiv(t: &Term, u: &Term, sig: &Signature) -> Result<Verdict> {
    Model::default().decide_equiv(t, u, sig)
}

pub fn canonical_rep(t: &Term, sig: &Signature) -> Result<Term> {
    Model::default().canonical_rep(t, sig)
}

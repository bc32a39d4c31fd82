//! Exact maxima by exhaustive search.
//!
//! Both weak incompleteness and weak zero-sum-freeness are hereditary, so the
//! search is a depth-first walk over sets in lexicographic order of their
//! sorted index lists. A branch is entered only if the set stays valid, and
//! abandoned once it cannot beat the best size found so far. With this order
//! the first maximum-size set reached is the lexicographically smallest one,
//! which makes witnesses reproducible.

mod harness;
mod oracle;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::group::{CayleyTable, ElementSet, GroupSpec};
use crate::sumset::{restricted_sumset_with, unrestricted_sumset_with, LayeredSumState, SumMode};

pub use harness::{
    verify_range, verify_range_with, CacheKey, Claim, EntryStatus, ExactCache, VerificationEntry,
    VerificationReport,
};
pub use oracle::{
    avoiding_sum_oracle, max_weak_sidon, max_weak_sidon_with, zero_sum_subset_oracle,
};

/// Groups above this order are only searched with an explicit node limit.
pub const UNBOUNDED_ORDER_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("fold {h} out of range for order {n}")]
    FoldOutOfRange { h: usize, n: usize },
    #[error("invalid search option: {0}")]
    InvalidOption(&'static str),
    #[error("refusing unbounded search in a group of order {order}; set a node limit")]
    NodeLimitExceeded { order: usize },
    #[error("internal error: search witness {witness:?} fails the {what} check")]
    WitnessCheckFailed {
        what: &'static str,
        witness: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Only search sets containing 0. Sound for `C_h` and `c_h` (translation
    /// covariance); rejected for `Z_h`.
    pub normalize_translation: bool,
    /// A size known to be attainable. Branches that cannot reach it are cut.
    pub initial_lower_bound: Option<usize>,
    pub node_limit: Option<u64>,
    pub thread_count: usize,
    /// Return the lexicographically smallest maximal witness. Parallel runs
    /// prune slightly less to guarantee it.
    pub deterministic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            normalize_translation: false,
            initial_lower_bound: None,
            node_limit: None,
            thread_count: 1,
            deterministic: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    AbortedAtLimit,
}

/// A maximum with its witness. For aborted runs, the best found so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: usize,
    pub witness: ElementSet,
    pub nodes_explored: u64,
    pub status: SearchStatus,
}

impl ExactResult {
    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Complete
    }
}

#[derive(Serialize, Deserialize)]
struct ExactResultWire {
    value: usize,
    order: usize,
    witness: Vec<usize>,
    nodes_explored: u64,
    status: SearchStatus,
}

impl Serialize for ExactResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExactResultWire {
            value: self.value,
            order: self.witness.universe(),
            witness: self.witness.to_vec(),
            nodes_explored: self.nodes_explored,
            status: self.status,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactResult {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ExactResultWire::deserialize(deserializer)?;
        let witness =
            ElementSet::from_indices(wire.order, wire.witness).map_err(serde::de::Error::custom)?;
        if witness.len() != wire.value {
            return Err(serde::de::Error::custom("witness size differs from value"));
        }
        Ok(ExactResult {
            value: wire.value,
            witness,
            nodes_explored: wire.nodes_explored,
            status: wire.status,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// `h^A != G`
    Incomplete,
    /// `0` not in `h^A`
    ZeroSumFree,
    /// `hA != G`
    UnrestrictedIncomplete,
}

impl Target {
    fn mode(self) -> SumMode {
        match self {
            Target::UnrestrictedIncomplete => SumMode::Unrestricted,
            _ => SumMode::Restricted,
        }
    }

    fn accepts(self, state: &LayeredSumState<'_>) -> bool {
        match self {
            Target::ZeroSumFree => !state.top_contains(0),
            _ => !state.top_is_full(),
        }
    }
}

/// `C_h(G)`: largest `A` with `h^A != G`.
pub fn exact_c(
    group: &GroupSpec,
    h: usize,
    opts: &SearchOptions,
) -> Result<ExactResult, SearchError> {
    run_search(group, h, Target::Incomplete, opts)
}

/// `Z_h(G)`: largest `A` with `0` not in `h^A`.
pub fn exact_z(
    group: &GroupSpec,
    h: usize,
    opts: &SearchOptions,
) -> Result<ExactResult, SearchError> {
    if opts.normalize_translation {
        return Err(SearchError::InvalidOption(
            "translation normalization does not preserve zero-sum-freeness",
        ));
    }
    run_search(group, h, Target::ZeroSumFree, opts)
}

/// `c_h(G)`: largest `A` with `hA != G`.
pub fn exact_c_unrestricted(
    group: &GroupSpec,
    h: usize,
    opts: &SearchOptions,
) -> Result<ExactResult, SearchError> {
    run_search(group, h, Target::UnrestrictedIncomplete, opts)
}

struct Shared {
    nodes: AtomicU64,
    aborted: AtomicBool,
    best: AtomicUsize,
}

struct Engine<'a> {
    table: &'a CayleyTable,
    h: usize,
    target: Target,
    node_limit: Option<u64>,
    deterministic: bool,
    shared: &'a Shared,
}

#[derive(Clone)]
struct Best {
    /// size to beat; `None` accepts the first valid set
    size: Option<usize>,
    set: Option<Vec<usize>>,
}

impl Engine<'_> {
    fn tick(&self) -> bool {
        let seen = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.node_limit.is_some_and(|limit| seen > limit) {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn hopeless(&self, reachable: usize, local: &Best) -> bool {
        if local.size.is_some_and(|b| reachable <= b) {
            return true;
        }
        let shared = self.shared.best.load(Ordering::Relaxed);
        if self.deterministic {
            reachable < shared
        } else {
            reachable <= shared && shared > 0
        }
    }

    /// Explores every set whose sorted list extends `prefix`. With
    /// `children == false` only the prefix itself is considered.
    fn run_job(&self, prefix: &[usize], children: bool, floor: Option<usize>) -> Best {
        let mut local = Best {
            size: floor,
            set: None,
        };
        if self.shared.aborted.load(Ordering::Relaxed) {
            return local;
        }
        let mut state = LayeredSumState::new(self.table, self.h, self.target.mode());
        for &x in prefix {
            state.push(x);
            if !self.target.accepts(&state) {
                return local;
            }
        }
        let next = prefix.last().map_or(0, |&x| x + 1);
        if children {
            self.dfs(&mut state, next, &mut local);
        } else if self.tick() {
            self.record(&state, &mut local);
        }
        local
    }

    fn record(&self, state: &LayeredSumState<'_>, local: &mut Best) {
        let size = state.chosen().len();
        if local.size.is_none_or(|b| size > b) {
            local.size = Some(size);
            local.set = Some(state.chosen().to_vec());
            self.shared.best.fetch_max(size, Ordering::Relaxed);
        }
    }

    fn dfs(&self, state: &mut LayeredSumState<'_>, next: usize, local: &mut Best) {
        if !self.tick() {
            return;
        }
        self.record(state, local);
        let n = self.table.order();
        let size = state.chosen().len();
        for x in next..n {
            if self.hopeless(size + (n - x), local) {
                break;
            }
            state.push(x);
            if self.target.accepts(state) {
                self.dfs(state, x + 1, local);
            }
            state.pop();
            if self.shared.aborted.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

fn run_search(
    group: &GroupSpec,
    h: usize,
    target: Target,
    opts: &SearchOptions,
) -> Result<ExactResult, SearchError> {
    let n = group.order();
    if h == 0 || (target != Target::UnrestrictedIncomplete && h > n) {
        return Err(SearchError::FoldOutOfRange { h, n });
    }
    if n > UNBOUNDED_ORDER_LIMIT && opts.node_limit.is_none() {
        return Err(SearchError::NodeLimitExceeded { order: n });
    }
    if n > CayleyTable::MAX_ORDER {
        return Err(SearchError::NodeLimitExceeded { order: n });
    }
    let table = CayleyTable::new(group);

    let mut total_nodes = 0;
    let mut floor = opts.initial_lower_bound.filter(|&b| b > 0).map(|b| b - 1);
    loop {
        let (best, nodes, aborted) = search_once(&table, h, target, opts, floor);
        total_nodes += nodes;
        match best {
            Some(set) => {
                let witness = ElementSet::from_indices(n, set).expect("indices < n");
                check_witness(&table, h, target, &witness)?;
                return Ok(ExactResult {
                    value: witness.len(),
                    witness,
                    nodes_explored: total_nodes,
                    status: if aborted {
                        SearchStatus::AbortedAtLimit
                    } else {
                        SearchStatus::Complete
                    },
                });
            }
            None if aborted => {
                return Ok(ExactResult {
                    value: 0,
                    witness: ElementSet::empty(n),
                    nodes_explored: total_nodes,
                    status: SearchStatus::AbortedAtLimit,
                });
            }
            // the hinted size was not attainable; search again from scratch
            None => floor = None,
        }
        if floor.is_none() && opts.initial_lower_bound.is_none() {
            unreachable!("an unseeded search always finds the empty set");
        }
    }
}

fn search_once(
    table: &CayleyTable,
    h: usize,
    target: Target,
    opts: &SearchOptions,
    floor: Option<usize>,
) -> (Option<Vec<usize>>, u64, bool) {
    let n = table.order();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        best: AtomicUsize::new(0),
    };
    let engine = Engine {
        table,
        h,
        target,
        node_limit: opts.node_limit,
        deterministic: opts.deterministic,
        shared: &shared,
    };

    // jobs in lexicographic order of their prefixes
    let mut jobs: Vec<(Vec<usize>, bool)> = vec![(Vec::new(), false)];
    if opts.normalize_translation {
        jobs.push((vec![0], false));
        jobs.extend((1..n).map(|x| (vec![0, x], true)));
    } else {
        jobs.extend((0..n).map(|x| (vec![x], true)));
    }

    let results: Vec<Best> = if opts.thread_count <= 1 {
        jobs.iter()
            .map(|(prefix, children)| engine.run_job(prefix, *children, floor))
            .collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.thread_count)
            .build()
            .expect("thread pool");
        pool.install(|| {
            jobs.par_iter()
                .map(|(prefix, children)| engine.run_job(prefix, *children, floor))
                .collect()
        })
    };

    // largest size wins; ties go to the earliest job, i.e. the smallest set
    let mut best: Option<Vec<usize>> = None;
    for set in results.into_iter().filter_map(|b| b.set) {
        if best.as_ref().is_none_or(|b| set.len() > b.len()) {
            best = Some(set);
        }
    }
    (
        best,
        shared.nodes.load(Ordering::Relaxed),
        shared.aborted.load(Ordering::Relaxed),
    )
}

fn check_witness(
    table: &CayleyTable,
    h: usize,
    target: Target,
    witness: &ElementSet,
) -> Result<(), SearchError> {
    let ok = match target {
        Target::Incomplete => !restricted_sumset_with(table, witness, h).is_full(),
        Target::ZeroSumFree => !restricted_sumset_with(table, witness, h).contains(0),
        Target::UnrestrictedIncomplete => match unrestricted_sumset_with(table, witness, h) {
            Ok(s) => !s.is_full(),
            // the empty set has an empty sumset
            Err(_) => true,
        },
    };
    if ok {
        Ok(())
    } else {
        Err(SearchError::WitnessCheckFailed {
            what: match target {
                Target::Incomplete => "weakly h-incomplete",
                Target::ZeroSumFree => "weakly h-zero-sum-free",
                Target::UnrestrictedIncomplete => "h-incomplete",
            },
            witness: witness.to_vec(),
        })
    }
}

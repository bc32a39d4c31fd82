//! Brute-force oracles. These deliberately avoid the bitset sumset code so
//! they can be used to check it.

use crate::group::{ElementSet, GroupSpec};
use crate::sumset::is_weak_sidon;

use super::{ExactResult, SearchError, SearchOptions, SearchStatus, UNBOUNDED_ORDER_LIMIT};

/// Subset-count DP: is there an `m`-subset of `pool` summing to `target`?
fn subset_sum_reaches(
    group: &GroupSpec,
    pool: impl Iterator<Item = usize>,
    m: usize,
    target: usize,
) -> bool {
    let n = group.order();
    // reach[c][g]: some c-subset of the elements seen so far sums to g
    let mut reach = vec![vec![false; n]; m + 1];
    reach[0][group.zero()] = true;
    let mut seen = 0;
    for x in pool {
        seen += 1;
        for c in (1..=m.min(seen)).rev() {
            let (lower, upper) = reach.split_at_mut(c);
            let (from, to) = (&lower[c - 1], &mut upper[0]);
            for g in 0..n {
                if from[g] {
                    to[group.add_index(g, x)] = true;
                }
            }
        }
    }
    reach[m][target]
}

/// Does `G` (or `G \ {0}` with `exclude_zero`) have an `m`-subset with sum 0?
pub fn zero_sum_subset_oracle(group: &GroupSpec, m: usize, exclude_zero: bool) -> bool {
    let zero = group.zero();
    subset_sum_reaches(
        group,
        group.elements().filter(|&x| !(exclude_zero && x == zero)),
        m,
        zero,
    )
}

/// Is there an `m`-subset `A` with `s(A)` not in `A`?
pub fn avoiding_sum_oracle(group: &GroupSpec, m: usize) -> bool {
    // for each target t, look for an m-subset of G \ {t} summing to t
    group
        .elements()
        .any(|t| subset_sum_reaches(group, group.elements().filter(|&x| x != t), m, t))
}

/// Size of a largest weak Sidon set, with the lexicographically smallest
/// witness.
pub fn max_weak_sidon(group: &GroupSpec) -> Result<ExactResult, SearchError> {
    max_weak_sidon_with(group, &SearchOptions::default())
}

/// As [`max_weak_sidon`], honouring `node_limit`. Other options are ignored.
pub fn max_weak_sidon_with(
    group: &GroupSpec,
    opts: &SearchOptions,
) -> Result<ExactResult, SearchError> {
    let n = group.order();
    if n > UNBOUNDED_ORDER_LIMIT && opts.node_limit.is_none() {
        return Err(SearchError::NodeLimitExceeded { order: n });
    }
    let mut walk = SidonWalk {
        group,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        limit: opts.node_limit,
        aborted: false,
    };
    walk.dfs(0, &ElementSet::empty(n));
    if walk.best.len() >= 2
        && !is_weak_sidon(
            group,
            &ElementSet::from_indices(n, walk.best.clone()).expect("in range"),
        )
        .unwrap_or(false)
    {
        return Err(SearchError::WitnessCheckFailed {
            what: "weak Sidon",
            witness: walk.best,
        });
    }
    let witness = ElementSet::from_indices(n, walk.best).expect("in range");
    Ok(ExactResult {
        value: witness.len(),
        witness,
        nodes_explored: walk.nodes,
        status: if walk.aborted {
            SearchStatus::AbortedAtLimit
        } else {
            SearchStatus::Complete
        },
    })
}

struct SidonWalk<'g> {
    group: &'g GroupSpec,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    limit: Option<u64>,
    aborted: bool,
}

impl SidonWalk<'_> {
    fn dfs(&mut self, next: usize, pair_sums: &ElementSet) {
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            self.aborted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let n = self.group.order();
        let size = self.chosen.len();
        // m(m-1)/2 distinct sums must fit in G
        if (size + 1) * size / 2 > n {
            return;
        }
        for x in next..n {
            if size + (n - x) <= self.best.len() {
                break;
            }
            let mut sums = pair_sums.clone();
            let fresh = self
                .chosen
                .iter()
                .all(|&a| sums.insert(self.group.add_index(a, x)));
            if fresh {
                self.chosen.push(x);
                self.dfs(x + 1, &sums);
                self.chosen.pop();
                if self.aborted {
                    return;
                }
            }
        }
    }
}

//! Restricted and unrestricted h-fold sumsets.
//!
//! Both flavours are computed by a layered recurrence over the elements of
//! `A`: layer `j` holds the sums of `j` chosen elements. Inserting `x` updates
//! `layer_j |= layer_{j-1} + x`. Walking the layers from the top down uses each
//! element at most once (restricted sums); walking bottom up lets it repeat.

use thiserror::Error;

use crate::group::{CayleyTable, ElementSet, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumsetError {
    #[error("unrestricted {0}-fold sumset of the empty set")]
    EmptySetPositiveFold(usize),
    #[error("weak Sidon test needs at least two elements, got {0}")]
    SetTooSmall(usize),
    #[error("fold {h} exceeds set size {m}")]
    FoldExceedsSize { h: usize, m: usize },
    #[error("fold must be positive")]
    ZeroFold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    /// sums of distinct elements
    Restricted,
    /// repetition allowed
    Unrestricted,
}

/// Incremental sumset layers with snapshot-based undo.
///
/// Single-owner mutable state; each search thread keeps its own.
pub struct LayeredSumState<'t> {
    table: &'t CayleyTable,
    mode: SumMode,
    h: usize,
    words_per_layer: usize,
    layers: Vec<u64>,
    trail: Vec<u64>,
    chosen: Vec<usize>,
}

impl<'t> LayeredSumState<'t> {
    pub fn new(table: &'t CayleyTable, h: usize, mode: SumMode) -> Self {
        let n = table.order();
        let words_per_layer = n.div_ceil(64);
        let mut layers = vec![0u64; (h + 1) * words_per_layer];
        layers[0] = 1; // layer 0 = {0}
        LayeredSumState {
            table,
            mode,
            h,
            words_per_layer,
            layers,
            trail: Vec::new(),
            chosen: Vec::new(),
        }
    }

    pub fn fold(&self) -> usize {
        self.h
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn layer_words(&self, j: usize) -> &[u64] {
        &self.layers[j * self.words_per_layer..(j + 1) * self.words_per_layer]
    }

    pub fn layer(&self, j: usize) -> ElementSet {
        ElementSet::from_words(self.table.order(), self.layer_words(j).to_vec())
    }

    /// The current `h`-fold sumset.
    pub fn top(&self) -> ElementSet {
        self.layer(self.h)
    }

    pub fn top_contains(&self, x: usize) -> bool {
        self.layer_words(self.h)[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn top_is_full(&self) -> bool {
        let n = self.table.order();
        let top = self.layer_words(self.h);
        let full_words = n / 64;
        top[..full_words].iter().all(|&w| w == u64::MAX)
            && (n.is_multiple_of(64) || top[full_words] == (1u64 << (n % 64)) - 1)
    }

    /// Adds `x` to the chosen set, saving the previous layers for [`pop`].
    ///
    /// [`pop`]: LayeredSumState::pop
    pub fn push(&mut self, x: usize) {
        self.trail.extend_from_slice(&self.layers);
        self.absorb(x);
        self.chosen.push(x);
    }

    pub fn pop(&mut self) -> Option<usize> {
        let x = self.chosen.pop()?;
        let len = self.layers.len();
        let start = self.trail.len() - len;
        self.layers.copy_from_slice(&self.trail[start..]);
        self.trail.truncate(start);
        Some(x)
    }

    fn absorb(&mut self, x: usize) {
        let w = self.words_per_layer;
        let update = |j: usize, layers: &mut Vec<u64>| {
            let (lower, upper) = layers.split_at_mut(j * w);
            self.table
                .translate_into(&lower[(j - 1) * w..], x, &mut upper[..w]);
        };
        match self.mode {
            SumMode::Restricted => {
                // layers above chosen+1 are still empty
                let top = self.h.min(self.chosen.len() + 1);
                for j in (1..=top).rev() {
                    update(j, &mut self.layers);
                }
            }
            SumMode::Unrestricted => {
                for j in 1..=self.h {
                    update(j, &mut self.layers);
                }
            }
        }
    }
}

/// `h^A`: all sums of `h` distinct elements of `A`. `{0}` for `h = 0`, empty
/// for `h > |A|`.
pub fn restricted_sumset(group: &GroupSpec, set: &ElementSet, h: usize) -> ElementSet {
    let table = CayleyTable::new(group);
    restricted_sumset_with(&table, set, h)
}

pub fn restricted_sumset_with(table: &CayleyTable, set: &ElementSet, h: usize) -> ElementSet {
    assert_eq!(set.universe(), table.order(), "set from a different group");
    if h > set.len() {
        return ElementSet::empty(table.order());
    }
    let mut state = LayeredSumState::new(table, h, SumMode::Restricted);
    for x in set {
        state.absorb(x);
        state.chosen.push(x);
    }
    state.top()
}

/// `hA`, by folding `A` onto the running result `h` times.
pub fn unrestricted_sumset(
    group: &GroupSpec,
    set: &ElementSet,
    h: usize,
) -> Result<ElementSet, SumsetError> {
    let table = CayleyTable::new(group);
    unrestricted_sumset_with(&table, set, h)
}

pub fn unrestricted_sumset_with(
    table: &CayleyTable,
    set: &ElementSet,
    h: usize,
) -> Result<ElementSet, SumsetError> {
    assert_eq!(set.universe(), table.order(), "set from a different group");
    if h > 0 && set.is_empty() {
        return Err(SumsetError::EmptySetPositiveFold(h));
    }
    let n = table.order();
    let mut result = ElementSet::from_indices(n, [0]).expect("0 < n");
    for _ in 0..h {
        let mut words = vec![0u64; n.div_ceil(64)];
        for a in set {
            table.translate_into(result.words(), a, &mut words);
        }
        result = ElementSet::from_words(n, words);
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub weakly_h_incomplete: bool,
    pub weakly_h_zero_sum_free: bool,
}

pub fn classify_set(group: &GroupSpec, set: &ElementSet, h: usize) -> Classification {
    let sums = restricted_sumset(group, set, h);
    Classification {
        weakly_h_incomplete: !sums.is_full(),
        weakly_h_zero_sum_free: !sums.contains(0),
    }
}

/// True iff the pairwise sums of distinct elements are all different.
pub fn is_weak_sidon(group: &GroupSpec, set: &ElementSet) -> Result<bool, SumsetError> {
    let m = set.len();
    if m < 2 {
        return Err(SumsetError::SetTooSmall(m));
    }
    Ok(restricted_sumset(group, set, 2).len() == m * (m - 1) / 2)
}

/// `min(p, h*m - h^2 + 1)`, the least possible size of `h^A` for an `m`-set
/// `A` in `Z_p`.
pub fn erdos_heilbronn_bound(p: usize, m: usize, h: usize) -> Result<usize, SumsetError> {
    if h == 0 {
        return Err(SumsetError::ZeroFold);
    }
    if h > m {
        return Err(SumsetError::FoldExceedsSize { h, m });
    }
    Ok(p.min(h * m - h * h + 1))
}

/// `s(A)`
pub fn set_sum(group: &GroupSpec, set: &ElementSet) -> usize {
    group.sum_of(set.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[usize]) -> GroupSpec {
        GroupSpec::new(f).unwrap()
    }

    fn set(grp: &GroupSpec, xs: &[usize]) -> ElementSet {
        grp.set_from(xs).unwrap()
    }

    #[test]
    fn restricted_examples() {
        let z7 = g(&[7]);
        assert_eq!(
            restricted_sumset(&z7, &set(&z7, &[1, 2, 4]), 3).to_vec(),
            vec![0]
        );
        let z5 = g(&[5]);
        assert!(restricted_sumset(&z5, &set(&z5, &[0, 1, 2, 3]), 2).is_full());
        let a = set(&z7, &[1, 3, 5, 6]);
        assert_eq!(
            restricted_sumset(&z7, &a, 4).to_vec(),
            vec![set_sum(&z7, &a)]
        );
        assert!(restricted_sumset(&z7, &a, 5).is_empty());
        assert_eq!(restricted_sumset(&z7, &a, 0).to_vec(), vec![0]);
    }

    #[test]
    fn unrestricted_examples() {
        let z5 = g(&[5]);
        assert_eq!(
            unrestricted_sumset(&z5, &set(&z5, &[0, 1]), 3)
                .unwrap()
                .to_vec(),
            vec![0, 1, 2, 3]
        );
        let z12 = g(&[12]);
        let sub = set(&z12, &[0, 4, 8]);
        for h in 1..6 {
            assert_eq!(unrestricted_sumset(&z12, &sub, h).unwrap(), sub);
        }
        let z7 = g(&[7]);
        assert_eq!(
            unrestricted_sumset(&z7, &set(&z7, &[1]), 3)
                .unwrap()
                .to_vec(),
            vec![3]
        );
        assert_eq!(
            unrestricted_sumset(&z7, &z7.empty_set(), 2),
            Err(SumsetError::EmptySetPositiveFold(2))
        );
        assert_eq!(
            unrestricted_sumset(&z7, &z7.empty_set(), 0)
                .unwrap()
                .to_vec(),
            vec![0]
        );
    }

    #[test]
    fn classify_examples() {
        let z7 = g(&[7]);
        let c = classify_set(&z7, &set(&z7, &[1, 2, 4]), 3);
        assert!(c.weakly_h_incomplete && !c.weakly_h_zero_sum_free);

        // index-2 subgroup of Z_2^3 plus one outside element: g misses 3^A,
        // but 2 + 4 + 6 = 0 inside the subgroup
        let e = g(&[2, 2, 2]);
        let a = set(&e, &[0, 2, 4, 6, 1]);
        let c = classify_set(&e, &a, 3);
        assert!(c.weakly_h_incomplete && !c.weakly_h_zero_sum_free);
        assert!(!restricted_sumset(&e, &a, 3).contains(1));

        for f in [&[5][..], &[2, 4], &[3, 3], &[12]] {
            let grp = g(f);
            let c = classify_set(&grp, &grp.full_set(), grp.order() - 1);
            assert!(!c.weakly_h_incomplete);
        }
    }

    #[test]
    fn weak_sidon_examples() {
        let e = g(&[2, 2, 2]);
        assert!(is_weak_sidon(&e, &set(&e, &[0, 1, 2, 4])).unwrap());
        let z7 = g(&[7]);
        assert!(is_weak_sidon(&z7, &set(&z7, &[0, 1, 3])).unwrap());
        assert!(!is_weak_sidon(&z7, &set(&z7, &[0, 1, 2, 3])).unwrap());
        assert_eq!(
            is_weak_sidon(&z7, &set(&z7, &[4])),
            Err(SumsetError::SetTooSmall(1))
        );
    }

    #[test]
    fn erdos_heilbronn_examples() {
        assert_eq!(erdos_heilbronn_bound(7, 4, 2), Ok(5));
        assert_eq!(erdos_heilbronn_bound(7, 7, 3), Ok(7));
        assert_eq!(erdos_heilbronn_bound(13, 5, 1), Ok(5));
        assert_eq!(
            erdos_heilbronn_bound(7, 2, 3),
            Err(SumsetError::FoldExceedsSize { h: 3, m: 2 })
        );
    }

    #[test]
    fn push_pop_restores_layers() {
        let grp = g(&[2, 6]);
        let table = CayleyTable::new(&grp);
        let mut st = LayeredSumState::new(&table, 3, SumMode::Restricted);
        st.push(1);
        st.push(5);
        let before: Vec<_> = (0..=3).map(|j| st.layer(j)).collect();
        st.push(7);
        st.push(10);
        st.pop();
        st.pop();
        let after: Vec<_> = (0..=3).map(|j| st.layer(j)).collect();
        assert_eq!(before, after);
        assert_eq!(st.chosen(), &[1, 5]);
    }

    #[test]
    fn unrestricted_state_matches_fold() {
        let grp = g(&[3, 6]);
        let table = CayleyTable::new(&grp);
        let a = set(&grp, &[1, 4, 9, 11]);
        let mut st = LayeredSumState::new(&table, 4, SumMode::Unrestricted);
        for x in &a {
            st.push(x);
        }
        for j in 0..=4 {
            assert_eq!(st.layer(j), unrestricted_sumset(&grp, &a, j).unwrap());
        }
    }
}

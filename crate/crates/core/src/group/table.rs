use super::{ElementSet, GroupSpec};

/// Precomputed addition table, `n * n` entries.
///
/// Hot loops in the sumset and search code translate sets element by
/// element; a table lookup is much cheaper than mixed-radix decoding.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    sums: Vec<u32>,
}

impl CayleyTable {
    /// Largest order for which a table is built.
    pub const MAX_ORDER: usize = 2048;

    pub fn new(group: &GroupSpec) -> Self {
        let n = group.order();
        assert!(
            n <= Self::MAX_ORDER,
            "addition table requested for order {n} > {}",
            Self::MAX_ORDER
        );
        let mut sums = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                sums.push(group.add_index(a, b) as u32);
            }
        }
        CayleyTable { n, sums }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.sums[a * self.n + b] as usize
    }

    #[inline]
    pub fn row(&self, a: usize) -> &[u32] {
        &self.sums[a * self.n..(a + 1) * self.n]
    }

    /// `out |= src + x`, operating on raw words.
    #[inline]
    pub fn translate_into(&self, src: &[u64], x: usize, out: &mut [u64]) {
        let row = self.row(x);
        for (wi, &word) in src.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                let y = row[wi * 64 + bit] as usize;
                out[y / 64] |= 1u64 << (y % 64);
            }
        }
    }

    /// `set + x`
    pub fn translate(&self, set: &ElementSet, x: usize) -> ElementSet {
        let mut words = vec![0u64; set.words().len()];
        self.translate_into(set.words(), x, &mut words);
        ElementSet::from_words(self.n, words)
    }
}

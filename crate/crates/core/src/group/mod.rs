//! Finite abelian groups in invariant-factor form.
//!
//! Elements are addressed by a mixed-radix index: the element with
//! coordinates `(c_1, ..., c_r)` has index `c_1 + c_2*d_1 + c_3*d_1*d_2 + ...`.
//! Every set and sumset in the crate is a bit vector over these indices.

mod parse;
mod set;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use set::{ElementSet, Iter};
pub use table::CayleyTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("factor list is empty")]
    EmptyFactorList,
    #[error("invariant factor {0} is below 2")]
    FactorBelowTwo(usize),
    #[error("{smaller} does not divide {larger}; factors must form a divisibility chain")]
    BrokenDivisibilityChain { smaller: usize, larger: usize },
    #[error("group order {0} is below 2")]
    OrderBelowTwo(usize),
    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("coordinate {value} at position {position} out of range for modulus {modulus}")]
    CoordOutOfRange {
        position: usize,
        value: usize,
        modulus: usize,
    },
    #[error("element does not belong to group {0}")]
    GroupMismatch(String),
    #[error("cannot parse group literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
}

/// A finite abelian group `Z_{d_1} x ... x Z_{d_r}` with `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GroupSpec {
    factors: Vec<usize>,
    order: usize,
    involutions: usize,
}

/// Coordinates of a group element, `coords[i]` in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coords: Vec<usize>,
}

impl GroupElement {
    pub fn new(coords: Vec<usize>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl GroupSpec {
    /// Builds a group from its invariant factors. The list must already be a
    /// divisibility chain; it is never reordered.
    pub fn new(factors: &[usize]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::EmptyFactorList);
        }
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::FactorBelowTwo(d));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(GroupError::BrokenDivisibilityChain {
                    smaller: w[0],
                    larger: w[1],
                });
            }
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| GroupError::Parse {
                literal: format!("{factors:?}"),
                reason: "group order overflows".into(),
            })?;
        let involutions = 1usize << factors.iter().filter(|&&d| d % 2 == 0).count();
        Ok(GroupSpec {
            factors: factors.to_vec(),
            order,
            involutions,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::new(&[n])
    }

    /// `Z_q^r`.
    pub fn homocyclic(q: usize, r: usize) -> Result<Self, GroupError> {
        Self::new(&vec![q; r])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// `n`
    pub fn order(&self) -> usize {
        self.order
    }

    /// `q`, the largest invariant factor.
    pub fn exponent(&self) -> usize {
        *self.factors.last().expect("nonempty factor list")
    }

    /// `r`, the number of invariant factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// `l`, the order of the subgroup of elements of order at most 2.
    pub fn involution_order(&self) -> usize {
        self.involutions
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// True for `Z_p^r` with `p` the given prime (including `r = 1`).
    pub fn is_elementary_abelian(&self, p: usize) -> bool {
        self.exponent() == p
    }

    pub fn is_prime_cyclic(&self) -> bool {
        self.is_cyclic() && is_prime(self.order)
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.order)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn set_from(&self, indices: &[usize]) -> Result<ElementSet, GroupError> {
        ElementSet::from_indices(self.order, indices.iter().copied())
    }

    pub fn element_at(&self, index: usize) -> Result<GroupElement, GroupError> {
        if index >= self.order {
            return Err(GroupError::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        let mut rest = index;
        let coords = self
            .factors
            .iter()
            .map(|&d| {
                let c = rest % d;
                rest /= d;
                c
            })
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn index_of(&self, element: &GroupElement) -> Result<usize, GroupError> {
        if element.coords.len() != self.factors.len() {
            return Err(GroupError::GroupMismatch(self.to_string()));
        }
        let mut index = 0;
        let mut stride = 1;
        for (position, (&value, &modulus)) in element.coords.iter().zip(&self.factors).enumerate() {
            if value >= modulus {
                return Err(GroupError::CoordOutOfRange {
                    position,
                    value,
                    modulus,
                });
            }
            index += value * stride;
            stride *= modulus;
        }
        Ok(index)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        self.check_member(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, d)| (d - x) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    fn check_member(&self, a: &GroupElement) -> Result<(), GroupError> {
        if a.coords.len() != self.factors.len()
            || a.coords.iter().zip(&self.factors).any(|(c, d)| c >= d)
        {
            return Err(GroupError::GroupMismatch(self.to_string()));
        }
        Ok(())
    }

    /// Sum of two elements given by index. Indices must be in range.
    #[inline]
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut stride = 1;
        for &d in &self.factors {
            let s = a % d + b % d;
            out += if s >= d { s - d } else { s } * stride;
            a /= d;
            b /= d;
            stride *= d;
        }
        out
    }

    #[inline]
    pub fn neg_index(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &d in &self.factors {
            let c = a % d;
            out += ((d - c) % d) * stride;
            a /= d;
            stride *= d;
        }
        out
    }

    #[inline]
    pub fn sub_index(&self, a: usize, b: usize) -> usize {
        self.add_index(a, self.neg_index(b))
    }

    /// `k * a` for a nonnegative integer multiplier.
    pub fn mul_index(&self, k: usize, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &d in &self.factors {
            let c = a % d;
            out += ((k % d) * c % d) * stride;
            a /= d;
            stride *= d;
        }
        out
    }

    /// Order of the element with the given index.
    pub fn element_order(&self, a: usize) -> usize {
        let mut a = a;
        let mut ord = 1;
        for &d in &self.factors {
            let c = a % d;
            a /= d;
            ord = lcm(ord, d / gcd(c, d));
        }
        ord
    }

    pub fn sum_of<I: IntoIterator<Item = usize>>(&self, elements: I) -> usize {
        elements
            .into_iter()
            .fold(0, |acc, x| self.add_index(acc, x))
    }

    /// `L = {x : 2x = 0}`.
    pub fn involution_subgroup(&self) -> ElementSet {
        let mut set = self.empty_set();
        for x in self.elements() {
            if self.add_index(x, x) == 0 {
                set.insert(x);
            }
        }
        set
    }

    /// Generators of `L`: for every even factor `d_i`, the element with
    /// `d_i / 2` in position `i` and zero elsewhere. Bit `j` of a mask over
    /// `Z_2^s` maps to the `j`-th generator.
    pub fn involution_basis(&self) -> Vec<usize> {
        let mut stride = 1;
        let mut basis = Vec::new();
        for &d in &self.factors {
            if d % 2 == 0 {
                basis.push((d / 2) * stride);
            }
            stride *= d;
        }
        basis
    }

    /// `s(G)`: the unique involution when `l = 2`, zero otherwise.
    pub fn group_sum(&self) -> usize {
        if self.involutions == 2 {
            self.involution_basis()[0]
        } else {
            0
        }
    }

    /// `L_g = {x : 2x = g}`; either empty or a coset of `L`.
    pub fn doubling_preimages(&self, g: usize) -> ElementSet {
        let mut set = self.empty_set();
        for x in self.elements() {
            if self.add_index(x, x) == g {
                set.insert(x);
            }
        }
        set
    }

    /// Splits `G` into `L`, `K` and `-K`. `K` keeps the smaller index of every
    /// pair `{x, -x}` with `x != -x`.
    pub fn half_decomposition(&self) -> (ElementSet, ElementSet) {
        let mut involutions = self.empty_set();
        let mut half = self.empty_set();
        for x in self.elements() {
            let nx = self.neg_index(x);
            if nx == x {
                involutions.insert(x);
            } else if x < nx {
                half.insert(x);
            }
        }
        (involutions, half)
    }

    /// The caret/product literal, e.g. `Z8`, `Z2^3`, `Z2^2xZ4`.
    pub fn literal(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let d = self.factors[i];
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z{d}"));
            } else {
                parts.push(format!("Z{d}^{}", j - i));
            }
            i = j;
        }
        parts.join("x")
    }

    /// Formats an element as its coordinate tuple, or a bare integer for
    /// cyclic groups.
    pub fn format_element(&self, index: usize) -> String {
        if self.is_cyclic() {
            index.to_string()
        } else {
            self.element_at(index)
                .map(|e| e.to_string())
                .unwrap_or_else(|_| format!("#{index}"))
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupSpec({}; n={}, q={}, r={}, l={})",
            self.literal(),
            self.order,
            self.exponent(),
            self.rank(),
            self.involutions
        )
    }
}

impl TryFrom<Vec<usize>> for GroupSpec {
    type Error = GroupError;
    fn try_from(factors: Vec<usize>) -> Result<Self, Self::Error> {
        GroupSpec::new(&factors)
    }
}

impl From<GroupSpec> for Vec<usize> {
    fn from(g: GroupSpec) -> Self {
        g.factors
    }
}

/// All abelian groups of order `n` up to isomorphism, cyclic first: ordered
/// by rank, then lexicographically by factor list.
pub fn enumerate_groups_of_order(n: usize) -> Result<Vec<GroupSpec>, GroupError> {
    if n < 2 {
        return Err(GroupError::OrderBelowTwo(n));
    }
    let primes = factorize(n);
    // every combination of one partition per prime
    let mut chains: Vec<Vec<usize>> = vec![Vec::new()];
    for &(p, k) in &primes {
        let mut next = Vec::new();
        for partial in &chains {
            for part in partitions(k) {
                // partial: invariant factors listed largest first
                let len = partial.len().max(part.len());
                let mut merged = vec![1usize; len];
                for (i, slot) in merged.iter_mut().enumerate() {
                    if let Some(&d) = partial.get(i) {
                        *slot *= d;
                    }
                    if let Some(&e) = part.get(i) {
                        *slot *= p.pow(e as u32);
                    }
                }
                next.push(merged);
            }
        }
        chains = next;
    }
    let mut groups: Vec<GroupSpec> = chains
        .into_iter()
        .map(|mut c| {
            c.reverse();
            GroupSpec::new(&c)
        })
        .collect::<Result<_, _>>()?;
    groups.sort_by(|a, b| {
        a.rank()
            .cmp(&b.rank())
            .then_with(|| a.factors.cmp(&b.factors))
    });
    Ok(groups)
}

/// Integer partitions of `k`, parts in nonincreasing order.
fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Prime factorization as `(p, exponent)` pairs, ascending.
pub fn factorize(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

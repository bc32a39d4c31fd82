//! Explicit witness sets for every existence claim.
//!
//! Each builder follows a constructive argument and then re-checks its output
//! with the sumset module before returning. A failed re-check is reported as
//! [`ConstructionError::VerificationFailed`]; it means a transcription bug in
//! the case analysis, never a user error.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formulas::{self, Clause, FormulaError};
use crate::group::{is_prime, ElementSet, GroupSpec};
use crate::sumset::{is_weak_sidon, restricted_sumset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no {property} set of size {size} exists in {group}")]
    NotRepresentable {
        group: String,
        property: &'static str,
        size: usize,
    },
    #[error("no exact prediction for {quantity}_{h}({group})")]
    NoExactPrediction {
        group: String,
        quantity: &'static str,
        h: usize,
    },
    #[error("fold {h} out of range ({reason})")]
    FoldOutOfRange { h: usize, reason: &'static str },
    #[error("{0} is not an elementary abelian 2-group")]
    NotElementaryAbelian2Group(String),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("internal error: {method} produced {set:?} in {group}, which is not {property}")]
    VerificationFailed {
        group: String,
        method: &'static str,
        property: String,
        set: Vec<usize>,
    },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// What a witness set certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// `h^A != G`
    HIncomplete(usize),
    /// `0` not in `h^A`
    HZeroSumFree(usize),
    /// `s(A) = 0`
    ZeroSum,
    /// `s(A)` not in `A`
    SumAvoiding,
    WeakSidon,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::HIncomplete(h) => write!(f, "h_incomplete({h})"),
            Property::HZeroSumFree(h) => write!(f, "h_zero_sum_free({h})"),
            Property::ZeroSum => f.write_str("zero_sum"),
            Property::SumAvoiding => f.write_str("sum_avoiding"),
            Property::WeakSidon => f.write_str("weak_sidon"),
        }
    }
}

impl Property {
    /// Checks the property by direct sumset computation.
    pub fn holds(&self, group: &GroupSpec, set: &ElementSet) -> bool {
        match *self {
            Property::HIncomplete(h) => !restricted_sumset(group, set, h).is_full(),
            Property::HZeroSumFree(h) => !restricted_sumset(group, set, h).contains(0),
            // the |A|-fold restricted sumset is {s(A)}
            Property::ZeroSum => restricted_sumset(group, set, set.len()).contains(0),
            Property::SumAvoiding => {
                let total = restricted_sumset(group, set, set.len());
                total.first().is_some_and(|s| !set.contains(s))
            }
            Property::WeakSidon => is_weak_sidon(group, set).unwrap_or(false),
        }
    }
}

/// A certified set: `verified` is the outcome of an independent sumset check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub group: GroupSpec,
    pub set: ElementSet,
    pub property: Property,
    pub verified: bool,
    pub method: &'static str,
}

impl WitnessReport {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    /// Re-runs the sumset check on the stored set.
    pub fn recheck(&self) -> bool {
        self.property.holds(&self.group, &self.set)
    }
}

impl Serialize for WitnessReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("WitnessReport", 6)?;
        st.serialize_field("group", &self.group.literal())?;
        st.serialize_field("set", &self.set)?;
        st.serialize_field("property", &self.property.to_string())?;
        st.serialize_field("size", &self.set.len())?;
        st.serialize_field("method", self.method)?;
        st.serialize_field("verified", &self.verified)?;
        st.end()
    }
}

fn certify(
    group: &GroupSpec,
    elements: &[usize],
    property: Property,
    method: &'static str,
) -> Result<WitnessReport, ConstructionError> {
    let set = group
        .set_from(elements)
        .expect("builders only emit in-range indices");
    let fail = || ConstructionError::VerificationFailed {
        group: group.literal(),
        method,
        property: property.to_string(),
        set: elements.to_vec(),
    };
    if set.len() != elements.len() {
        // repeated element
        return Err(fail());
    }
    if !property.holds(group, &set) {
        return Err(fail());
    }
    Ok(WitnessReport {
        group: group.clone(),
        set,
        property,
        verified: true,
        method,
    })
}

fn not_representable(group: &GroupSpec, property: &'static str, size: usize) -> ConstructionError {
    ConstructionError::NotRepresentable {
        group: group.literal(),
        property,
        size,
    }
}

/// An interval `{c, ..., c+m-1}` in `Z_p` of size `floor((p-2)/h) + h` whose
/// `h`-fold restricted sumset avoids zero.
pub fn build_interval_witness_zp(p: usize, h: usize) -> Result<WitnessReport, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    if h == 0 || h + 2 > p {
        return Err(ConstructionError::FoldOutOfRange {
            h,
            reason: "interval witness needs 1 <= h <= p-2",
        });
    }
    let group = GroupSpec::cyclic(p).expect("p >= 2");
    let m = formulas::zp_extremal_value(p, h)?;
    // h^A is the interval of length h*m - h^2 + 1 starting at h*c + h(h-1)/2
    let len = h * m - h * h + 1;
    let offset = h * (h - 1) / 2;
    let c = (0..p)
        .find(|&c| {
            let start = (h * c + offset) % p;
            start != 0 && start + len <= p
        })
        .expect("len < p leaves room for a zero-free window");
    let elements: Vec<usize> = (0..m).map(|i| (c + i) % p).collect();
    certify(
        &group,
        &elements,
        Property::HZeroSumFree(h),
        "interval with zero-free restricted sumset",
    )
}

/// `A = L ∪ K`, of size `(n+l)/2`; two distinct elements of `A` never sum
/// to zero.
pub fn build_weakly_2zsf(group: &GroupSpec) -> Result<WitnessReport, ConstructionError> {
    let (l, k) = group.half_decomposition();
    let elements = l.union(&k).to_vec();
    certify(
        group,
        &elements,
        Property::HZeroSumFree(2),
        "involutions plus one of each inverse pair",
    )
}

/// `H ∪ {g}` in `Z_2^r`: `H` the kernel of the first coordinate, `g` the
/// first element outside it. Size `n/2 + 1`, and `g` is not in `3^A`.
pub fn build_c3_witness_2group(group: &GroupSpec) -> Result<WitnessReport, ConstructionError> {
    if group.exponent() != 2 || group.order() < 4 {
        return Err(ConstructionError::NotElementaryAbelian2Group(
            group.literal(),
        ));
    }
    // first coordinate is the lowest bit of the index
    let mut elements: Vec<usize> = group.elements().filter(|x| x % 2 == 0).collect();
    elements.push(1);
    certify(
        group,
        &elements,
        Property::HIncomplete(3),
        "index-2 subgroup plus one outside element",
    )
}

/// Zero-sum subsets of `Z_2^k \ {0}` as bitmasks, by recursion on the rank.
///
/// Sizes `3..=2^k-4` and `2^k-1` are representable (`k >= 2`). The recursion
/// uses complements within `Z_2^k \ {0}`, embedding from rank `k-1`, and
/// adjoining the coset `{1} x H` with `H` spanned by the first two coordinates.
fn two_group_zero_sum(k: u32, m: usize) -> Option<Vec<usize>> {
    let top = (1usize << k) - 1; // |Z_2^k \ {0}|
    if k < 2 || m == 0 || m > top {
        return None;
    }
    if m == top {
        return Some((1..=top).collect());
    }
    if m < 3 || m + 3 > top {
        return None;
    }
    let complement = |m: usize| -> Option<Vec<usize>> {
        let inner = two_group_zero_sum(k, top - m)?;
        Some((1..=top).filter(|x| !inner.contains(x)).collect())
    };
    match k {
        // top = 7: only 3 and 4
        3 => match m {
            3 => two_group_zero_sum(2, 3),
            _ => complement(m),
        },
        4 => match m {
            3 | 4 | 7 => two_group_zero_sum(3, m),
            // e_1, e_2, e_3, e_4 and e_1+e_2+e_3+e_4
            5 => Some(vec![1, 2, 4, 8, 15]),
            // e_1, e_2, e_3, e_4, e_1+e_2, e_3+e_4
            6 => Some(vec![1, 2, 4, 8, 3, 12]),
            _ => complement(m),
        },
        _ => {
            let half = 1usize << (k - 1);
            if m + 4 <= half {
                two_group_zero_sum(k - 1, m)
            } else if m < half {
                // m in {2^(k-1)-3, -2, -1}: add {1} x H, |H| = 4
                let mut base = two_group_zero_sum(k - 1, m - 4)?;
                base.extend((0..4).map(|h| half + h));
                Some(base)
            } else {
                complement(m)
            }
        }
    }
}

/// Nonzero zero-sum subsets for groups that are not elementary abelian
/// 2-groups, following the split `G = {0} ∪ Ord(G,2) ∪ K ∪ -K`.
fn mixed_zero_sum(group: &GroupSpec, m: usize) -> Option<(Vec<usize>, &'static str)> {
    let n = group.order();
    let l = group.involution_order();
    let (_, k_set) = group.half_decomposition();
    let k: Vec<usize> = k_set.to_vec();
    let pairs = |ks: &[usize], count: usize| -> Vec<usize> {
        ks.iter()
            .take(count)
            .flat_map(|&x| [x, group.neg_index(x)])
            .collect()
    };
    if m == n - 1 && l != 2 {
        return Some(((1..n).collect(), "all nonzero elements"));
    }
    match l {
        1 | 2 if m.is_multiple_of(2) => (m / 2 <= k.len()).then(|| (pairs(&k, m / 2), "inverse pairs")),
        1 if n == 7 && m == 3 => Some((vec![1, 2, 4], "base set {1,2,4} in Z_7")),
        2 if n == 8 && m == 3 => Some((vec![1, 3, 4], "base set {1,3,4} in Z_8")),
        2 if m + 3 == n => {
            // G \ {0, g, e - g} with g of order q
            let e = group.group_sum();
            let q = group.exponent();
            let g1 = group.elements().find(|&x| group.element_order(x) == q)?;
            let g2 = group.sub_index(e, g1);
            let set = (1..n).filter(|&x| x != g1 && x != g2).collect();
            Some((set, "complement of {0, g, e-g} with g of order q"))
        }
        1 | 2 => triple_with_pairs(group, &k, m)
            .map(|s| (s, "triple g1, g2, -(g1+g2) plus inverse pairs")),
        _ => involution_composition(group, &k, m),
    }
}

/// `{g1, g2, -(g1+g2)} ∪ K1 ∪ -K1` for odd `m`. `g1` is the first element of
/// `K`, `g2` the next one for which the six elements `±g1, ±g2, ±(g1+g2)` are
/// pairwise distinct and `g1+g2` is not an involution.
fn triple_with_pairs(group: &GroupSpec, k: &[usize], m: usize) -> Option<Vec<usize>> {
    if m.is_multiple_of(2) || m < 3 {
        return None;
    }
    let need = (m - 3) / 2;
    for (i, &g1) in k.iter().enumerate() {
        for &g2 in &k[i + 1..] {
            let s = group.add_index(g1, g2);
            let ns = group.neg_index(s);
            let six = [g1, group.neg_index(g1), g2, group.neg_index(g2), s, ns];
            let distinct = six
                .iter()
                .enumerate()
                .all(|(a, x)| *x != 0 && six[a + 1..].iter().all(|y| y != x));
            if !distinct {
                continue;
            }
            let rest: Vec<usize> = k
                .iter()
                .copied()
                .filter(|&x| x != g1 && x != g2 && x != s && x != ns)
                .collect();
            if rest.len() < need {
                return None;
            }
            let mut out = vec![g1, g2, ns];
            for &x in &rest[..need] {
                out.push(x);
                out.push(group.neg_index(x));
            }
            return Some(out);
        }
    }
    None
}

/// `l > 2`: combine a zero-sum subset of `Ord(G,2)` with inverse pairs.
fn involution_composition(
    group: &GroupSpec,
    k: &[usize],
    m: usize,
) -> Option<(Vec<usize>, &'static str)> {
    let n = group.order();
    let l = group.involution_order();
    let basis = group.involution_basis();
    let s = basis.len() as u32;
    let to_group = |mask: usize| -> usize {
        group.sum_of(
            basis
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &b)| b),
        )
    };
    let with_pairs = |masks: Vec<usize>, count: usize| -> Option<Vec<usize>> {
        if count > k.len() {
            return None;
        }
        let mut out: Vec<usize> = masks.into_iter().map(to_group).collect();
        for &x in &k[..count] {
            out.push(x);
            out.push(group.neg_index(x));
        }
        Some(out)
    };
    let ord2 = l - 1;
    if m + 3 > n {
        return None;
    }
    if ord2 == 3 {
        // the three involutions sum to zero
        let all: Vec<usize> = (1..=3).collect();
        return if m % 2 == 1 {
            with_pairs(all, (m - 3) / 2).map(|v| (v, "involutions plus inverse pairs"))
        } else {
            with_pairs(Vec::new(), m / 2).map(|v| (v, "inverse pairs"))
        };
    }
    if m == 2 {
        return with_pairs(Vec::new(), 1).map(|v| (v, "inverse pairs"));
    }
    if m + 3 == n {
        let all: Vec<usize> = (1..=ord2).collect();
        return with_pairs(all, k.len() - 1).map(|v| (v, "involutions plus inverse pairs"));
    }
    if m + 3 <= ord2 {
        let masks = two_group_zero_sum(s, m)?;
        return with_pairs(masks, 0).map(|v| (v, "zero-sum set of involutions"));
    }
    let m1 = if m.is_multiple_of(2) { ord2 - 3 } else { ord2 - 4 };
    let masks = two_group_zero_sum(s, m1)?;
    with_pairs(masks, (m - m1) / 2).map(|v| (v, "zero-sum involutions plus inverse pairs"))
}

/// An `m`-subset of `G \ {0}` with sum zero.
pub fn build_zero_sum_nonzero(
    group: &GroupSpec,
    m: usize,
) -> Result<WitnessReport, ConstructionError> {
    if !formulas::zero_sum_nonzero_exists(group, m)? {
        return Err(not_representable(group, "nonzero zero-sum", m));
    }
    let (elements, method) = if group.exponent() == 2 {
        // indices of Z_2^r are bitmasks
        let k = group.rank() as u32;
        (
            two_group_zero_sum(k, m)
                .ok_or_else(|| not_representable(group, "nonzero zero-sum", m))?,
            "rank recursion in Z_2^r",
        )
    } else {
        mixed_zero_sum(group, m).ok_or_else(|| not_representable(group, "nonzero zero-sum", m))?
    };
    let report = certify(group, &elements, Property::ZeroSum, method)?;
    if report.set.contains(0) || report.size() != m {
        return Err(ConstructionError::VerificationFailed {
            group: group.literal(),
            method,
            property: format!("nonzero zero-sum of size {m}"),
            set: elements,
        });
    }
    Ok(report)
}

/// An `m`-subset of `G` (zero allowed) with sum zero.
pub fn build_zero_sum(group: &GroupSpec, m: usize) -> Result<WitnessReport, ConstructionError> {
    if !formulas::zero_sum_exists(group, m)? {
        return Err(not_representable(group, "zero-sum", m));
    }
    let n = group.order();
    let (elements, method) = if m == 1 {
        (vec![0], "{0}")
    } else if m < n && formulas::zero_sum_nonzero_exists(group, m)? {
        let r = build_zero_sum_nonzero(group, m)?;
        (r.set.to_vec(), r.method)
    } else {
        let r = build_zero_sum_nonzero(group, m - 1)?;
        let mut v = r.set.to_vec();
        v.push(0);
        (v, "nonzero zero-sum set plus 0")
    };
    let report = certify(group, &elements, Property::ZeroSum, method)?;
    debug_assert_eq!(report.size(), m);
    Ok(report)
}

/// An `m`-subset `A` with `s(A)` not in `A`.
pub fn build_avoiding_sum_set(
    group: &GroupSpec,
    m: usize,
) -> Result<WitnessReport, ConstructionError> {
    if !formulas::avoiding_sum_exists(group, m)? {
        return Err(not_representable(group, "sum-avoiding", m));
    }
    let n = group.order();
    let l = group.involution_order();
    let (elements, method): (Vec<usize>, &'static str) =
        if formulas::zero_sum_nonzero_exists(group, m)? {
            // s(A) = 0 and 0 is not in A
            let r = build_zero_sum_nonzero(group, m)?;
            (r.set.to_vec(), "nonzero zero-sum set")
        } else if group.exponent() == 2 && m == 2 {
            (vec![1, 2], "two nonzero elements of Z_2^r")
        } else if m + 2 == n && l != 2 {
            // G \ {a, -2a} with 3a != 0 has sum a
            let a1 = group
                .elements()
                .find(|&a| group.mul_index(3, a) != 0)
                .ok_or_else(|| not_representable(group, "sum-avoiding", m))?;
            let a2 = group.neg_index(group.mul_index(2, a1));
            let v = group.elements().filter(|&x| x != a1 && x != a2).collect();
            (v, "complement of {a, -2a}")
        } else if m + 1 == n && l == 2 {
            // G \ {a} with 2a = e has sum e - a = a
            let e = group.group_sum();
            let a = group
                .elements()
                .find(|&a| group.add_index(a, a) == e)
                .ok_or_else(|| not_representable(group, "sum-avoiding", m))?;
            let v = group.elements().filter(|&x| x != a).collect();
            (v, "complement of a with 2a = e")
        } else {
            return Err(not_representable(group, "sum-avoiding", m));
        };
    let report = certify(group, &elements, Property::SumAvoiding, method)?;
    debug_assert_eq!(report.size(), m);
    Ok(report)
}

/// An `h`-subset with nonzero sum: the first `h` elements, with the largest
/// swapped for the smallest unused one if their sum is zero.
pub fn build_nonzero_sum_set(
    group: &GroupSpec,
    h: usize,
) -> Result<WitnessReport, ConstructionError> {
    let n = group.order();
    if h == 0 || h >= n {
        return Err(ConstructionError::FoldOutOfRange {
            h,
            reason: "nonzero-sum set needs 1 <= h <= n-1",
        });
    }
    let mut elements: Vec<usize> = (0..h).collect();
    let mut method = "first h elements";
    if group.sum_of(elements.iter().copied()) == 0 {
        elements[h - 1] = h;
        method = "first h elements with one swap";
    }
    certify(group, &elements, Property::HZeroSumFree(h), method)
}

fn relabel(
    group: &GroupSpec,
    report: WitnessReport,
    property: Property,
) -> Result<WitnessReport, ConstructionError> {
    certify(group, &report.set.to_vec(), property, report.method)
}

/// A weakly `h`-zero-sum-free set of size `Z_h(G)`, when that value is known.
pub fn build_extremal_zsf(group: &GroupSpec, h: usize) -> Result<WitnessReport, ConstructionError> {
    let predicted = formulas::predicted_z(group, h)?;
    let value = predicted
        .value()
        .ok_or_else(|| ConstructionError::NoExactPrediction {
            group: group.literal(),
            quantity: "Z",
            h,
        })?;
    let n = group.order();
    let property = Property::HZeroSumFree(h);
    let report = match predicted.source {
        Clause::EasyFold if h == n => {
            // l = 2: n^G = {e}; otherwise any (n-1)-set has empty n^A
            let v: Vec<usize> = (0..value).collect();
            certify(group, &v, property, "whole group or any (n-1)-set")?
        }
        Clause::EasyFold if h == 1 => {
            let v: Vec<usize> = (1..n).collect();
            certify(group, &v, property, "all nonzero elements")?
        }
        Clause::SecondFold => relabel(group, build_weakly_2zsf(group)?, property)?,
        Clause::PrimeCyclic if h + 2 <= n => {
            relabel(group, build_interval_witness_zp(n, h)?, property)?
        }
        Clause::LargeFold => {
            // every h-subset of an (h+1)-set A misses zero iff s(A) is not in A
            relabel(group, build_avoiding_sum_set(group, h + 1)?, property)?
        }
        Clause::TwoGroupLargeFold => {
            // h-subsets of a zero-sum (h+2)-set sum to a1 + a2 != 0
            relabel(group, build_zero_sum(group, h + 2)?, property)?
        }
        _ if value == h => build_nonzero_sum_set(group, h)?,
        _ => {
            return Err(ConstructionError::NoExactPrediction {
                group: group.literal(),
                quantity: "Z",
                h,
            })
        }
    };
    check_size(group, report, value)
}

/// A weakly `h`-incomplete set of size `C_h(G)`, when that value is known.
pub fn build_extremal_incomplete(
    group: &GroupSpec,
    h: usize,
) -> Result<WitnessReport, ConstructionError> {
    let predicted = formulas::predicted_c(group, h)?;
    let value = predicted
        .value()
        .ok_or_else(|| ConstructionError::NoExactPrediction {
            group: group.literal(),
            quantity: "C",
            h,
        })?;
    let n = group.order();
    let property = Property::HIncomplete(h);
    let first = |k: usize| -> Vec<usize> { (0..k).collect() };
    let report = match predicted.source {
        Clause::EasyFold => certify(group, &first(value), property, "first elements (easy h)")?,
        Clause::SecondFold => relabel(group, build_weakly_2zsf(group)?, property)?,
        Clause::ThirdFoldTwoGroup => build_c3_witness_2group(group)?,
        Clause::PrimeCyclic if h + 2 <= n => {
            relabel(group, build_interval_witness_zp(n, h)?, property)?
        }
        // any (h+1)-set has |h^A| = h+1 < n
        Clause::LargeFold => certify(group, &first(h + 1), property, "any (h+1)-set")?,
        // h^A = s(A) - 2^A misses s(A) since 0 is not in 2^A
        Clause::TwoGroupLargeFold => {
            certify(group, &first(h + 2), property, "any (h+2)-set in Z_2^r")?
        }
        _ => {
            return Err(ConstructionError::NoExactPrediction {
                group: group.literal(),
                quantity: "C",
                h,
            })
        }
    };
    check_size(group, report, value)
}

fn check_size(
    group: &GroupSpec,
    report: WitnessReport,
    expected: usize,
) -> Result<WitnessReport, ConstructionError> {
    if report.size() != expected {
        return Err(ConstructionError::VerificationFailed {
            group: group.literal(),
            method: report.method,
            property: format!("{} of size {expected}", report.property),
            set: report.set.to_vec(),
        });
    }
    Ok(report)
}

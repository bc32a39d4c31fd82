//! Checks shared by the property tests and the acceptance run. Each returns a
//! description of the first counterexample.

#![allow(dead_code)]

use sumsetlab::group::CayleyTable;
use sumsetlab::search::{exact_c, exact_z};
use sumsetlab::sumset::{erdos_heilbronn_bound, set_sum};
use sumsetlab::{restricted_sumset, ElementSet, GroupSpec, SearchOptions};

pub type Check = Result<(), String>;

pub fn set_of(g: &GroupSpec, mask: u64) -> ElementSet {
    g.set_from(
        &(0..g.order())
            .filter(|&i| mask >> i & 1 == 1)
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

pub fn monotone(g: &GroupSpec, a: &ElementSet, b: &ElementSet, h: usize) -> Check {
    let sub = a.intersection(b);
    let small = restricted_sumset(g, &sub, h);
    let big = restricted_sumset(g, a, h);
    if small.is_subset(&big) {
        Ok(())
    } else {
        Err(format!(
            "{g}: {h}^{:?} not inside {h}^{:?}",
            sub.to_vec(),
            a.to_vec()
        ))
    }
}

pub fn translation_covariant(g: &GroupSpec, a: &ElementSet, t: usize, h: usize) -> Check {
    let table = CayleyTable::new(g);
    let shifted = table.translate(a, t);
    let lhs = restricted_sumset(g, &shifted, h);
    let rhs = table.translate(&restricted_sumset(g, a, h), g.mul_index(h, t));
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{g}: A={:?} t={t} h={h}", a.to_vec()))
    }
}

/// `h^A = s(A) - (m-h)^A`
pub fn complement_dual(g: &GroupSpec, a: &ElementSet, h: usize) -> Check {
    let m = a.len();
    let s = set_sum(g, a);
    let lhs = restricted_sumset(g, a, h);
    let other = restricted_sumset(g, a, m - h);
    let rhs = g
        .set_from(&other.iter().map(|x| g.sub_index(s, x)).collect::<Vec<_>>())
        .unwrap();
    if lhs == rhs && lhs.len() == other.len() {
        Ok(())
    } else {
        Err(format!("{g}: A={:?} h={h}", a.to_vec()))
    }
}

/// Every subset of `Z_p`, every `h <= |A|`.
pub fn erdos_heilbronn(p: usize) -> Check {
    let g = GroupSpec::cyclic(p).unwrap();
    for mask in 1u64..(1 << p) {
        let a = set_of(&g, mask);
        let m = a.len();
        let interval = (mask >> mask.trailing_zeros()).count_ones() as usize == m
            && (mask >> mask.trailing_zeros()) == (1 << m) - 1;
        for h in 1..=m {
            let size = restricted_sumset(&g, &a, h).len();
            let bound = erdos_heilbronn_bound(p, m, h).unwrap();
            if size < bound {
                return Err(format!("Z{p}: |{h}^{:?}|={size} < {bound}", a.to_vec()));
            }
            if interval && size < p && size != bound {
                return Err(format!(
                    "Z{p}: interval {:?} h={h} size {size} != {bound}",
                    a.to_vec()
                ));
            }
        }
    }
    Ok(())
}

/// `|L_g|` is 0 or `l` for every `g`.
pub fn doubling_fibres(g: &GroupSpec) -> Check {
    let l = g.involution_order();
    for x in g.elements() {
        let size = g.doubling_preimages(x).len();
        if size != 0 && size != l {
            return Err(format!("{g}: |L_{x}|={size}, l={l}"));
        }
    }
    Ok(())
}

/// The largest set with the property, by trying every subset.
pub fn naive_max(g: &GroupSpec, h: usize, zero_sum_free: bool) -> usize {
    let n = g.order();
    assert!(n <= 16);
    let mut best = 0;
    for mask in 0u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sums = restricted_sumset(g, &set_of(g, mask), h);
        let ok = if zero_sum_free {
            !sums.contains(0)
        } else {
            !sums.is_full()
        };
        if ok {
            best = size;
        }
    }
    best
}

pub fn pruned_matches_naive(g: &GroupSpec, h: usize) -> Check {
    let opts = SearchOptions::default();
    let normalized = SearchOptions {
        normalize_translation: true,
        ..SearchOptions::default()
    };
    let c = exact_c(g, h, &opts).unwrap().value;
    let c_norm = exact_c(g, h, &normalized).unwrap().value;
    let z = exact_z(g, h, &opts).unwrap().value;
    let (nc, nz) = (naive_max(g, h, false), naive_max(g, h, true));
    if c == nc && z == nz && c_norm == nc {
        Ok(())
    } else {
        Err(format!(
            "{g} h={h}: search C={c} (normalized {c_norm}) Z={z}, naive C={nc} Z={nz}"
        ))
    }
}

/// Weak Sidon iff 4-zero-sum-free, for a set in an elementary abelian 2-group.
/// Sets with fewer than two elements count as Sidon.
pub fn sidon_equivalence(g: &GroupSpec, a: &ElementSet) -> Check {
    let sidon = a.len() < 2 || sumsetlab::sumset::is_weak_sidon(g, a).unwrap();
    let zsf = !restricted_sumset(g, a, 4).contains(0);
    if sidon == zsf {
        Ok(())
    } else {
        Err(format!("{g}: A={:?} sidon={sidon} 4-zsf={zsf}", a.to_vec()))
    }
}

//! Closed forms, bounds and existence predicates.
//!
//! Every exact value carries the [`Clause`] that produced it. When no clause
//! pins a value down, a [`PredictedValue`] holds bounds instead.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::{is_prime, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("fold {h} out of range for order {n}")]
    FoldOutOfRange { h: usize, n: usize },
    #[error("size {m} outside [{lo}, {hi}]")]
    SizeOutOfRange { m: usize, lo: usize, hi: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
}

/// The result that a predicted value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `h` in `{1, n-1, n}`
    EasyFold,
    /// `C_2(G) = Z_2(G) = (n+l)/2`
    SecondFold,
    /// `C_3(Z_2^r) = n/2 + 1`
    ThirdFoldTwoGroup,
    /// `C_h(Z_p) = Z_h(Z_p) = floor((p-2)/h) + h`
    PrimeCyclic,
    /// `h+1` for `(n+l)/2 - 1 <= h <= n-2`
    LargeFold,
    /// `Z_h = h` at `h = n-3`, `q = 3`
    LargeFoldCubicException,
    /// `Z_h = h` at `h = n-2`, `l = 2`, `q = 2 mod 4`
    LargeFoldInvolutionException,
    /// `h+2` in `Z_2^r` for `n/2 - 1 <= h <= n-2`
    TwoGroupLargeFold,
    /// `Z_h = h` in `Z_2^r` at `h = n-4`
    TwoGroupException,
    /// `n/2 <= C_h(Z_2^r) <= n/2 + h - 2` for `4 <= h <= n/2 - 2`
    TwoGroupMidBounds,
    /// generic lower bounds, trivial upper bound
    GeneralBounds,
}

impl Clause {
    pub fn describe(self) -> &'static str {
        match self {
            Clause::EasyFold => "easy-h proposition (h in {1, n-1, n})",
            Clause::SecondFold => "h=2 theorem, (n+l)/2",
            Clause::ThirdFoldTwoGroup => "2-group h=3 theorem, n/2+1",
            Clause::PrimeCyclic => "prime cyclic theorem, floor((p-2)/h)+h",
            Clause::LargeFold => "large-h theorem, h+1",
            Clause::LargeFoldCubicException => "large-h theorem, exception h=n-3 and q=3",
            Clause::LargeFoldInvolutionException => {
                "large-h theorem, exception h=n-2, l=2, q=2 mod 4"
            }
            Clause::TwoGroupLargeFold => "2-group theorem, h+2",
            Clause::TwoGroupException => "2-group theorem, exception h=n-4",
            Clause::TwoGroupMidBounds => "2-group bounds n/2..n/2+h-2",
            Clause::GeneralBounds => "bounds",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// Either an exact value (`lower == upper`, `exact`) or a bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedValue {
    pub exact: bool,
    pub lower: usize,
    pub upper: usize,
    pub source: Clause,
}

impl PredictedValue {
    pub fn exact(value: usize, source: Clause) -> Self {
        PredictedValue {
            exact: true,
            lower: value,
            upper: value,
            source,
        }
    }

    pub fn bounds(lower: usize, upper: usize, source: Clause) -> Self {
        debug_assert!(lower <= upper);
        PredictedValue {
            exact: false,
            lower,
            upper,
            source,
        }
    }

    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }

    pub fn admits(&self, v: usize) -> bool {
        self.lower <= v && v <= self.upper
    }
}

impl fmt::Display for PredictedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "{}..{}", self.lower, self.upper)
        }
    }
}

/// `c_h` for any group of order `n`: the maximum over divisors `d` of `n` of
/// `(floor((d-2)/h) + 1) * n/d`.
///
/// Panics if `h == 0`.
pub fn c_h_closed_form(n: usize, h: usize) -> usize {
    assert!(h >= 1, "c_h needs h >= 1");
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            // d = 1 contributes 0
            let steps = if d >= 2 { (d - 2) / h + 1 } else { 0 };
            steps * (n / d)
        })
        .max()
        .unwrap_or(0)
}

/// `floor((p-2)/h) + h`, for `1 <= h <= p-1`.
pub fn zp_extremal_value(p: usize, h: usize) -> Result<usize, FormulaError> {
    if !is_prime(p) {
        return Err(FormulaError::NotPrime(p));
    }
    if h == 0 || h > p - 1 {
        return Err(FormulaError::FoldOutOfRange { h, n: p });
    }
    Ok((p - 2) / h + h)
}

fn check_fold(group: &GroupSpec, h: usize) -> Result<(), FormulaError> {
    let n = group.order();
    if h == 0 || h > n {
        Err(FormulaError::FoldOutOfRange { h, n })
    } else {
        Ok(())
    }
}

/// Bounds of the large-h range: `(n+l)/2 - 1 <= h <= n-2` (empty for `Z_2^r`).
fn in_large_range(group: &GroupSpec, h: usize) -> bool {
    let n = group.order();
    let l = group.involution_order();
    (n + l) / 2 - 1 <= h && h + 2 <= n
}

fn in_two_group_large_range(group: &GroupSpec, h: usize) -> bool {
    let n = group.order();
    group.exponent() == 2 && n / 2 <= h + 1 && h + 2 <= n
}

/// Every exact clause that applies to `C_h(G)`, in priority order.
pub fn exact_clauses_c(group: &GroupSpec, h: usize) -> Result<Vec<PredictedValue>, FormulaError> {
    check_fold(group, h)?;
    let n = group.order();
    let l = group.involution_order();
    let q = group.exponent();
    let mut out = Vec::new();
    if h == 1 || h == n - 1 {
        out.push(PredictedValue::exact(n - 1, Clause::EasyFold));
    }
    if h == n {
        out.push(PredictedValue::exact(n, Clause::EasyFold));
    }
    if h == 2 {
        out.push(PredictedValue::exact((n + l) / 2, Clause::SecondFold));
    }
    if q == 2 && h == 3 && n >= 4 {
        out.push(PredictedValue::exact(n / 2 + 1, Clause::ThirdFoldTwoGroup));
    }
    if group.is_prime_cyclic() && h < n {
        out.push(PredictedValue::exact((n - 2) / h + h, Clause::PrimeCyclic));
    }
    if in_large_range(group, h) {
        out.push(PredictedValue::exact(h + 1, Clause::LargeFold));
    }
    if in_two_group_large_range(group, h) {
        out.push(PredictedValue::exact(h + 2, Clause::TwoGroupLargeFold));
    }
    Ok(out)
}

/// `C_h(G)`: the first applicable exact clause, otherwise bounds.
pub fn predicted_c(group: &GroupSpec, h: usize) -> Result<PredictedValue, FormulaError> {
    if let Some(first) = exact_clauses_c(group, h)?.into_iter().next() {
        return Ok(first);
    }
    let n = group.order();
    if group.exponent() == 2 && h >= 4 && h + 2 <= n / 2 {
        return Ok(PredictedValue::bounds(
            n / 2,
            n / 2 + h - 2,
            Clause::TwoGroupMidBounds,
        ));
    }
    // no set of size h+1 has a full h-fold restricted sumset, and every set
    // with hA != G also has h^A != G
    let mut lower = c_h_closed_form(n, h);
    if h + 2 <= n {
        lower = lower.max(h + 1);
    }
    Ok(PredictedValue::bounds(lower, n, Clause::GeneralBounds))
}

/// Every exact clause that applies to `Z_h(G)`, in priority order.
pub fn exact_clauses_z(group: &GroupSpec, h: usize) -> Result<Vec<PredictedValue>, FormulaError> {
    check_fold(group, h)?;
    let n = group.order();
    let l = group.involution_order();
    let q = group.exponent();
    let mut out = Vec::new();
    if h == 1 || h == n - 1 {
        out.push(PredictedValue::exact(n - 1, Clause::EasyFold));
    }
    if h == n {
        let v = if l == 2 { n } else { n - 1 };
        out.push(PredictedValue::exact(v, Clause::EasyFold));
    }
    if h == 2 {
        out.push(PredictedValue::exact((n + l) / 2, Clause::SecondFold));
    }
    if group.is_prime_cyclic() && h < n {
        out.push(PredictedValue::exact((n - 2) / h + h, Clause::PrimeCyclic));
    }
    if in_large_range(group, h) {
        if h + 3 == n && q == 3 {
            out.push(PredictedValue::exact(h, Clause::LargeFoldCubicException));
        } else if h + 2 == n && l == 2 && q % 4 == 2 {
            out.push(PredictedValue::exact(
                h,
                Clause::LargeFoldInvolutionException,
            ));
        } else {
            out.push(PredictedValue::exact(h + 1, Clause::LargeFold));
        }
    }
    if in_two_group_large_range(group, h) {
        if h + 4 == n {
            out.push(PredictedValue::exact(h, Clause::TwoGroupException));
        } else {
            out.push(PredictedValue::exact(h + 2, Clause::TwoGroupLargeFold));
        }
    }
    Ok(out)
}

/// `Z_h(G)`: the first applicable exact clause, otherwise `[h, upper(C_h)]`.
pub fn predicted_z(group: &GroupSpec, h: usize) -> Result<PredictedValue, FormulaError> {
    if let Some(first) = exact_clauses_z(group, h)?.into_iter().next() {
        return Ok(first);
    }
    let upper = predicted_c(group, h)?.upper;
    Ok(PredictedValue::bounds(h, upper, Clause::GeneralBounds))
}

fn check_size(m: usize, lo: usize, hi: usize) -> Result<(), FormulaError> {
    if m < lo || m > hi {
        Err(FormulaError::SizeOutOfRange { m, lo, hi })
    } else {
        Ok(())
    }
}

/// Does `G \ {0}` contain an `m`-subset with sum zero? `1 <= m <= n-1`.
pub fn zero_sum_nonzero_exists(group: &GroupSpec, m: usize) -> Result<bool, FormulaError> {
    let n = group.order();
    check_size(m, 1, n - 1)?;
    let l = group.involution_order();
    Ok(if group.exponent() == 2 {
        // Z_2 has no nonzero zero-sum subset at all
        n >= 4 && ((3 <= m && m + 4 <= n) || m == n - 1)
    } else {
        (2 <= m && m + 3 <= n) || (m == n - 2 && l == 2) || (m == n - 1 && l != 2)
    })
}

/// Does `G` contain an `m`-subset (zero allowed) with sum zero? `1 <= m <= n`.
pub fn zero_sum_exists(group: &GroupSpec, m: usize) -> Result<bool, FormulaError> {
    let n = group.order();
    check_size(m, 1, n)?;
    let elementary_two = group.exponent() == 2;
    let excluded =
        (elementary_two && (m == 2 || m + 2 == n)) || (group.involution_order() == 2 && m == n);
    Ok(!excluded)
}

/// Does `G` contain an `m`-subset `A` with `s(A)` not in `A`? `1 <= m <= n`.
pub fn avoiding_sum_exists(group: &GroupSpec, m: usize) -> Result<bool, FormulaError> {
    let n = group.order();
    check_size(m, 1, n)?;
    if m == 1 || m == n {
        return Ok(false);
    }
    let q = group.exponent();
    let l = group.involution_order();
    Ok((m + 4 <= n)
        || (m + 3 == n && q != 2)
        || (m + 2 == n && q != 3)
        || (m + 1 == n && (l != 2 || q.is_multiple_of(4))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[usize]) -> GroupSpec {
        GroupSpec::new(f).unwrap()
    }

    #[test]
    fn c_h_examples() {
        assert_eq!(c_h_closed_form(10, 2), 5);
        assert_eq!(c_h_closed_form(9, 2), 4);
        assert_eq!(c_h_closed_form(9, 8), 3);
        assert_eq!(c_h_closed_form(7, 1), 6);
        assert_eq!(c_h_closed_form(15, 4), 5);
    }

    #[test]
    fn zp_examples() {
        assert_eq!(zp_extremal_value(7, 2), Ok(4));
        assert_eq!(zp_extremal_value(13, 3), Ok(6));
        assert_eq!(zp_extremal_value(7, 6), Ok(6));
        assert_eq!(
            zp_extremal_value(7, 7),
            Err(FormulaError::FoldOutOfRange { h: 7, n: 7 })
        );
        assert_eq!(zp_extremal_value(9, 2), Err(FormulaError::NotPrime(9)));
    }

    #[test]
    fn predicted_c_examples() {
        let p = predicted_c(&g(&[9]), 4).unwrap();
        assert_eq!((p.value(), p.source), (Some(5), Clause::LargeFold));
        let z2_4 = g(&[2, 2, 2, 2]);
        let p = predicted_c(&z2_4, 13).unwrap();
        assert_eq!((p.value(), p.source), (Some(15), Clause::TwoGroupLargeFold));
        let p = predicted_c(&z2_4, 3).unwrap();
        assert_eq!((p.value(), p.source), (Some(9), Clause::ThirdFoldTwoGroup));
        let p = predicted_c(&z2_4, 5).unwrap();
        assert_eq!((p.exact, p.lower, p.upper), (false, 8, 11));
        let p = predicted_c(&g(&[15]), 4).unwrap();
        assert_eq!((p.exact, p.lower, p.upper), (false, 5, 15));
        assert!(predicted_c(&g(&[15]), 16).is_err());
        assert!(predicted_c(&g(&[15]), 0).is_err());
    }

    #[test]
    fn predicted_z_examples() {
        let cases: [(&[usize], usize, usize, Clause); 5] = [
            (&[3, 3], 6, 6, Clause::LargeFoldCubicException),
            (&[6], 4, 4, Clause::LargeFoldInvolutionException),
            (&[2, 2, 2], 4, 4, Clause::TwoGroupException),
            (&[2, 2, 2], 5, 7, Clause::TwoGroupLargeFold),
            (&[12], 12, 12, Clause::EasyFold),
        ];
        for (f, h, v, clause) in cases {
            let p = predicted_z(&g(f), h).unwrap();
            assert_eq!((p.value(), p.source), (Some(v), clause), "{f:?} h={h}");
        }
        assert_eq!(predicted_z(&g(&[9]), 9).unwrap().value(), Some(8));
    }

    #[test]
    fn zero_sum_nonzero_examples() {
        assert_eq!(zero_sum_nonzero_exists(&g(&[2, 2, 2]), 5), Ok(false));
        assert_eq!(zero_sum_nonzero_exists(&g(&[12]), 10), Ok(true));
        assert_eq!(zero_sum_nonzero_exists(&g(&[7]), 6), Ok(true));
        assert_eq!(zero_sum_nonzero_exists(&g(&[7]), 5), Ok(false));
        assert_eq!(zero_sum_nonzero_exists(&g(&[2]), 1), Ok(false));
        assert!(zero_sum_nonzero_exists(&g(&[7]), 7).is_err());
        assert!(zero_sum_nonzero_exists(&g(&[7]), 0).is_err());
    }

    #[test]
    fn zero_sum_examples() {
        assert_eq!(zero_sum_exists(&g(&[2, 2, 2]), 2), Ok(false));
        assert_eq!(zero_sum_exists(&g(&[12]), 12), Ok(false));
        assert_eq!(zero_sum_exists(&g(&[7]), 5), Ok(true));
        assert!(zero_sum_exists(&g(&[7]), 8).is_err());
    }

    #[test]
    fn avoiding_sum_examples() {
        assert_eq!(avoiding_sum_exists(&g(&[2, 2, 2]), 5), Ok(false));
        assert_eq!(avoiding_sum_exists(&g(&[3, 3]), 7), Ok(false));
        assert_eq!(avoiding_sum_exists(&g(&[4]), 3), Ok(true));
        assert_eq!(avoiding_sum_exists(&g(&[6]), 5), Ok(false));
        assert_eq!(avoiding_sum_exists(&g(&[9]), 1), Ok(false));
        assert_eq!(avoiding_sum_exists(&g(&[9]), 9), Ok(false));
    }
}

use std::str::FromStr;

use super::{GroupError, GroupSpec};

/// Accepts `Z8`, `Z2xZ4`, `Z2^3`, mixed forms such as `Z2^2xZ4`, and raw
/// factor lists `[2,4]`. The factors must already form a divisibility chain.
impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let literal = s.trim();
        let fail = |reason: &str| GroupError::Parse {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let factors = if let Some(inner) = literal.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| fail("missing ']'"))?;
            inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| fail("bad factor")))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            let mut factors = Vec::new();
            for term in literal.split(['x', 'X', '×', '*']) {
                let term = term.trim();
                let body = term
                    .strip_prefix('Z')
                    .or_else(|| term.strip_prefix('z'))
                    .ok_or_else(|| fail("terms must look like Zd or Zd^k"))?;
                let body = body.strip_prefix('_').unwrap_or(body);
                let (base, power) = match body.split_once('^') {
                    Some((b, p)) => (
                        b,
                        p.trim()
                            .parse::<usize>()
                            .map_err(|_| fail("bad exponent"))?,
                    ),
                    None => (body, 1),
                };
                let d = base
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| fail("bad modulus"))?;
                if power == 0 {
                    return Err(fail("exponent must be positive"));
                }
                factors.extend(std::iter::repeat_n(d, power));
            }
            factors
        };
        GroupSpec::new(&factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let f = |s: &str| s.parse::<GroupSpec>().unwrap().factors().to_vec();
        assert_eq!(f("Z8"), vec![8]);
        assert_eq!(f("Z2xZ4"), vec![2, 4]);
        assert_eq!(f("Z2^3"), vec![2, 2, 2]);
        assert_eq!(f("[2,4]"), vec![2, 4]);
        assert_eq!(f("[ 3, 3 ]"), vec![3, 3]);
        assert_eq!(f("Z2^2xZ4"), vec![2, 2, 4]);
        assert_eq!(f("Z_3^2"), vec![3, 3]);
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            "Z4xZ2".parse::<GroupSpec>(),
            Err(GroupError::BrokenDivisibilityChain { .. })
        ));
        assert!("Q8".parse::<GroupSpec>().is_err());
        assert!("[2,".parse::<GroupSpec>().is_err());
        assert!("Z2^0".parse::<GroupSpec>().is_err());
        assert!(matches!(
            "Z1".parse::<GroupSpec>(),
            Err(GroupError::FactorBelowTwo(1))
        ));
    }

    #[test]
    fn emitted_literal_reparses() {
        for n in 2..=48 {
            for g in super::super::enumerate_groups_of_order(n).unwrap() {
                assert_eq!(g.to_string().parse::<GroupSpec>().unwrap(), g);
            }
        }
    }
}

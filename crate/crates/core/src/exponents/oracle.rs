//! Brute-force reference for the minimal exponents, used to cross-check the
//! congruence solver.

use crate::action::GroupSpec;
use crate::error::{Error, Result};

/// Exhaustive search over exponents in `[0, L)` with the leading exponent in
/// `1..=L`, where `L` is the lcm of the group orders. Returns the
/// lexicographically smallest invariant exponent vector on `subset`.
pub fn oracle_minimal(group: &GroupSpec, subset: &[usize]) -> Result<Vec<u64>> {
    if subset.is_empty() || subset.len() > 3 {
        return Err(Error::InvalidArgument(format!(
            "oracle supports subsets of size 1 to 3, got {}",
            subset.len()
        )));
    }
    if let Some(&k) = subset.iter().find(|&&k| k >= group.dim()) {
        return Err(Error::InvalidArgument(format!("coordinate {k} out of range")));
    }
    let l = group.exponent_lcm();
    let mut current = vec![0u64; subset.len()];
    for lead in 1..=l {
        current[0] = lead;
        if let Some(found) = search(group, subset, &mut current, 1, l) {
            return Ok(found);
        }
    }
    unreachable!("x^L is invariant for every coordinate")
}

fn search(group: &GroupSpec, subset: &[usize], current: &mut [u64], pos: usize, l: u64) -> Option<Vec<u64>> {
    if pos == subset.len() {
        let terms: Vec<(usize, i64)> = subset.iter().zip(current.iter()).map(|(&k, &e)| (k, e as i64)).collect();
        return group.is_invariant_monomial(&terms).then(|| current.to_vec());
    }
    for e in 0..l {
        current[pos] = e;
        if let Some(found) = search(group, subset, current, pos + 1, l) {
            return Some(found);
        }
    }
    None
}

//! Size guards for the exhaustive computations.
//!
//! `NARY_SIZE_GUARD` (a positive integer) replaces every default budget.

use crate::Error;

pub const DEFAULT_ASSOC_BUDGET: u64 = 100_000_000;
pub const DEFAULT_COORD_BUDGET: u64 = 5_000_000;

fn env_override() -> Option<u64> {
    std::env::var("NARY_SIZE_GUARD").ok()?.trim().parse().ok().filter(|&v| v > 0)
}

/// Budget on the number of (2n−1)-tuples enumerated by associativity checks.
pub fn assoc_budget() -> u64 {
    env_override().unwrap_or(DEFAULT_ASSOC_BUDGET)
}

/// Budget on the number of coordinates of any tensor power that gets enumerated.
pub fn coord_budget() -> u64 {
    env_override().unwrap_or(DEFAULT_COORD_BUDGET)
}

/// `base^exp`, saturating instead of overflowing.
pub fn power(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

pub(crate) fn check(what: impl Into<String>, size: u128, limit: u64) -> Result<(), Error> {
    if size > limit as u128 {
        return Err(Error::SizeGuard { what: what.into(), size, limit });
    }
    Ok(())
}

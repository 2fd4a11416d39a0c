//! Enumeration budgets.

use crate::error::{Error, Result};

/// Universes above this size are refused unless the run is forced.
pub const HARD_GUARD: u64 = 1 << 31;

/// Default ceiling for operations that walk the whole frequency spectrum.
pub const SPECTRUM_DEFAULT: u64 = 10_000_000;

/// Default ceiling for enumeration-only counts.
pub const ENUMERATION_DEFAULT: u64 = 1_000_000_000;

/// Environment variable overriding the default ceilings.
pub const BUDGET_ENV: &str = "FFPRIME_BUDGET";

/// How much enumeration an operation may do, and how to split it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_universe: u64,
    pub force: bool,
    pub shards: usize,
}

impl Limits {
    pub fn new(max_universe: u64) -> Self {
        Limits {
            max_universe,
            force: false,
            shards: default_shards(),
        }
    }

    pub fn spectrum() -> Self {
        Self::new(env_override().unwrap_or(SPECTRUM_DEFAULT))
    }

    pub fn enumeration() -> Self {
        Self::new(env_override().unwrap_or(ENUMERATION_DEFAULT))
    }

    pub fn forced(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards.max(1);
        self
    }

    /// Fails when a universe of `size` elements is over budget.
    pub fn check(&self, size: u128) -> Result<()> {
        if self.force {
            return Ok(());
        }
        let limit = self.max_universe.min(HARD_GUARD);
        if size > limit as u128 {
            return Err(Error::BudgetExceeded { size, limit });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::spectrum()
    }
}

fn default_shards() -> usize {
    rayon::current_num_threads().max(1) * 4
}

fn env_override() -> Option<u64> {
    std::env::var(BUDGET_ENV).ok()?.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_and_force() {
        let l = Limits::new(100);
        assert!(l.check(100).is_ok());
        assert!(matches!(l.check(101), Err(Error::BudgetExceeded { size: 101, limit: 100 })));
        let big = Limits::new(u64::MAX);
        assert!(big.check(HARD_GUARD as u128 + 1).is_err());
        assert!(big.forced(true).check(HARD_GUARD as u128 + 1).is_ok());
    }
}

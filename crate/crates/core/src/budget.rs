use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default node budget shared by enumerations and searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A node-count budget.
///
/// Enumerations charge one unit per generated element and searches one unit
/// per candidate tried. The counter is atomic so a budget can be shared by
/// concurrent checks.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Charge `n` units of search work.
    pub fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before.saturating_add(n) > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Check that an enumeration of `needed` elements fits in the limit.
    ///
    /// Unlike [`Budget::charge`] this does not consume anything; it guards
    /// against attempting an enumeration whose size is known up front.
    pub fn admit(&self, needed: u128, what: impl FnOnce() -> String) -> Result<()> {
        if needed > self.limit as u128 {
            Err(Error::SizeLimitExceeded {
                what: what(),
                needed,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

//! Work limits shared by the iterative algorithms.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    /// Maximum number of critical pairs treated by Buchberger.
    pub max_pairs: usize,
    /// Maximum number of terms in any intermediate polynomial.
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 10_000, max_terms: 100_000 }
    }
}

impl Budget {
    pub fn check_terms(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_terms {
            Err(Error::BudgetExceeded(format!("{what}: {n} terms > max_terms {}", self.max_terms)))
        } else {
            Ok(())
        }
    }
}

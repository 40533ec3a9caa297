use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Soft resource limits for constructions whose size grows exponentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest free rank any constructed module or algebra may have. Linear
    /// maps between algebras of rank `d` are checked through `d × d` matrices.
    pub max_rank: usize,
    pub max_group_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rank: 4096, max_group_order: crate::groups::DEFAULT_MAX_GROUP_ORDER }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits { max_rank: usize::MAX, max_group_order: usize::MAX }
    }

    /// `base^exp` if it stays within `max_rank`.
    pub fn check_power(&self, construction: &str, base: usize, exp: usize) -> Result<usize> {
        let rank = u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).unwrap_or(usize::MAX);
        self.check_rank(construction, rank)
    }

    pub fn check_rank(&self, construction: &str, rank: usize) -> Result<usize> {
        if rank > self.max_rank {
            return Err(Error::SizeLimit { construction: construction.into(), rank, limit: self.max_rank });
        }
        Ok(rank)
    }
}

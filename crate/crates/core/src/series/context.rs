use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::FrequencyVector;

/// Shared data of a ring `SD_alpha[[tau, q, p]] / O(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingContext {
    alpha: FrequencyVector,
    trunc: u32,
}

impl RingContext {
    /// Certifies `alpha` as non-resonant up to `|J|₁ ≤ trunc` before accepting it.
    pub fn new(alpha: FrequencyVector, trunc: u32) -> Result<Arc<Self>> {
        if trunc < 3 {
            return Err(Error::Invalid(format!("truncation order {trunc} is below 3")));
        }
        let alpha = alpha.certify(trunc)?;
        Ok(Arc::new(RingContext { alpha, trunc }))
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &FrequencyVector {
        &self.alpha
    }

    /// Series are kept modulo weighted degree `>= trunc`.
    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_trunc(&self, trunc: u32) -> Result<Arc<Self>> {
        RingContext::new(self.alpha.clone(), trunc)
    }
}

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::birkhoff::check_quadratic;
use crate::error::{Error, Result};
use crate::scalars::{parse_scalar, FrequencyVector, SdElement};
use crate::series::{Monomial, RingContext, Series};

/// The anharmonic oscillator `pq + p^3 + q^3`.
pub const ANHARMONIC: &str = include_str!("../../data/anharmonic.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    /// Exact coefficient, e.g. `"3"`, `"-1/2"`, `"1+√2"`.
    pub coef: String,
}

/// A Hamiltonian `Σ alpha_i p_i q_i + ...` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub d: usize,
    pub alpha: Vec<String>,
    pub hamiltonian: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

impl ProblemSpec {
    pub fn from_json(s: &str) -> Result<ProblemSpec> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<ProblemSpec> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        ProblemSpec::from_json(&s)
    }

    pub fn anharmonic() -> ProblemSpec {
        ProblemSpec::from_json(ANHARMONIC).expect("bundled spec parses")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn frequency(&self) -> Result<FrequencyVector> {
        if self.alpha.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: self.alpha.len() });
        }
        FrequencyVector::new(self.alpha.iter().map(|s| parse_scalar(s)).collect::<Result<_>>()?)
    }

    /// The Hamiltonian in a ring truncated at `trunc`; its quadratic part is checked.
    pub fn hamiltonian(&self, trunc: u32) -> Result<Series> {
        let ctx = RingContext::new(self.frequency()?, trunc)?;
        let h = self.hamiltonian_in(&ctx)?;
        check_quadratic(&h)?;
        Ok(h)
    }

    fn hamiltonian_in(&self, ctx: &Arc<RingContext>) -> Result<Series> {
        let d = self.d;
        let mut terms = Vec::with_capacity(self.hamiltonian.len());
        for t in &self.hamiltonian {
            if t.p.len() != d || t.q.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: t.p.len().max(t.q.len()) });
            }
            let c = SdElement::constant(d, parse_scalar(&t.coef)?);
            terms.push((Monomial::new(t.p.clone(), t.q.clone(), vec![0; d]), c));
        }
        Ok(Series::from_terms(ctx, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::anharmonic_oscillator;

    #[test]
    fn bundled_spec() {
        let spec = ProblemSpec::anharmonic();
        assert_eq!(spec.hamiltonian(10).unwrap(), anharmonic_oscillator(10).unwrap());
        assert_eq!(ProblemSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_quadratic() {
        let mut spec = ProblemSpec::anharmonic();
        spec.hamiltonian[0].coef = "2".into();
        assert!(matches!(spec.hamiltonian(10), Err(Error::MalformedQuadratic(_))));
    }
}

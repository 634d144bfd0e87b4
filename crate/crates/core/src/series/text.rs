use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, RingContext, Series};
use crate::error::{Error, Result};
use crate::scalars::parse_sd;

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.iter() {
            let cs = c.to_string();
            let cs = if c.denominator().is_empty() && c.numerator().terms().len() > 1 { format!("({cs})") } else { cs };
            // a leading minus is pulled out only when nothing else could bind to it
            let (neg, cs) = match cs.strip_prefix('-') {
                Some(rest) if !has_top_level_sign(rest) => (true, rest.to_string()),
                _ => (false, cs),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if m.weighted_degree() == 0 {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{cs} * {m}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.trunc())
    }
}

fn has_top_level_sign(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

/// One stored term; `coef` uses the textual small-denominator format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    pub t: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub d: usize,
    pub trunc: u32,
    pub terms: Vec<TermJson>,
}

impl Series {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            d: self.dim(),
            trunc: self.trunc(),
            terms: self
                .iter()
                .map(|(m, c)| TermJson { p: m.p().to_vec(), q: m.q().to_vec(), t: m.t().to_vec(), coef: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(ctx: &Arc<RingContext>, js: &SeriesJson) -> Result<Series> {
        let d = ctx.dim();
        if js.d != d {
            return Err(Error::DimensionMismatch { expected: d, got: js.d });
        }
        let mut terms = Vec::with_capacity(js.terms.len());
        for t in &js.terms {
            if t.p.len() != d || t.q.len() != d || t.t.len() != d {
                return Err(Error::Parse(format!("term exponents must have length {d}")));
            }
            let c = parse_sd(&t.coef, d, Some(ctx.alpha()))?;
            terms.push((Monomial::new(t.p.clone(), t.q.clone(), t.t.clone()), c));
        }
        Ok(Series::from_terms(ctx, terms).truncate(js.trunc))
    }
}

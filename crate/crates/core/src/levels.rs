//! Exact bookkeeping of oscillator levels.
//!
//! Every oscillator level has `E² − m² = 2mω·B` where the bracket `B` is an
//! integer plus `2Σ_j c_j μ_j` with `c_j ∈ {0, 1}`. Floats are exact dyadic
//! rationals, so `B` is carried as a big rational and degeneracies are
//! counted without any tolerance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::dunkl::{ParitySector, WignerParams};
use crate::error::{invalid, Result};

pub type ExactBracket = BigRational;

/// `integer + Σ_j μ_j (1 − s_j)`, exactly.
pub fn exact_bracket(integer: u64, sector: &ParitySector, params: &WignerParams) -> ExactBracket {
    let mut b = BigRational::from_integer(BigInt::from(integer));
    for (p, mu) in sector.as_array().iter().zip(params.as_array()) {
        if p.index() == 1 {
            let mu = BigRational::from_float(mu).expect("Wigner parameters are finite");
            b += &mu + &mu;
        }
    }
    b
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    /// `(E² − m²)/(2mω)`.
    #[serde(skip)]
    pub bracket: ExactBracket,
    pub bracket_value: f64,
    pub e_squared: f64,
    pub degeneracy: usize,
}

/// Levels with multiplicities, ascending in energy.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LevelMultiset {
    pub levels: Vec<Level>,
}

impl LevelMultiset {
    pub fn total_states(&self) -> usize {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    /// First level where the two multisets disagree, if any.
    pub fn first_mismatch<'a>(&'a self, other: &'a Self) -> Option<(Option<&'a Level>, Option<&'a Level>)> {
        let n = self.levels.len().max(other.levels.len());
        (0..n).find_map(|i| {
            let a = self.levels.get(i);
            let b = other.levels.get(i);
            match (a, b) {
                (Some(x), Some(y)) if x.bracket == y.bracket && x.degeneracy == y.degeneracy => None,
                _ => Some((a, b)),
            }
        })
    }
}

/// Accumulates states into levels keyed by the exact bracket.
#[derive(Debug, Default)]
pub(crate) struct LevelCounter {
    counts: BTreeMap<ExactBracket, usize>,
}

impl LevelCounter {
    pub fn add(&mut self, bracket: ExactBracket) {
        *self.counts.entry(bracket).or_insert(0) += 1;
    }

    pub fn finish(self, mass: f64, two_m_omega: f64) -> LevelMultiset {
        let levels = self
            .counts
            .into_iter()
            .map(|(bracket, degeneracy)| {
                let value = bracket.to_f64().unwrap_or(f64::NAN);
                Level {
                    bracket_value: value,
                    e_squared: mass * mass + two_m_omega * value,
                    bracket,
                    degeneracy,
                }
            })
            .collect();
        LevelMultiset { levels }
    }
}

/// Largest bracket allowed by an `E²` cutoff, with a relative slack of 1e-12
/// so that cutoffs placed exactly on a level include it.
pub(crate) fn bracket_limit(cutoff: f64, mass: f64, two_m_omega: f64) -> Result<ExactBracket> {
    if !(cutoff > mass * mass) || !cutoff.is_finite() {
        return Err(invalid(format!("E^2 cutoff {cutoff} must exceed m^2 = {}", mass * mass)));
    }
    let limit = (cutoff - mass * mass) / two_m_omega;
    let limit = limit + 1e-12 * limit.abs().max(1.0);
    Ok(BigRational::from_float(limit).unwrap_or_else(BigRational::zero))
}

//! Deterministic family generators.

pub mod caterpillar;
pub mod grid;
pub mod lines;
pub mod three_n;
pub mod wiring;

use thiserror::Error;

use crate::curve::Family;

pub use caterpillar::gen_caterpillar;
pub use grid::{gen_grid_incidence, validate_relaxed, RelaxedFamily, RelaxedReport};
pub use lines::gen_lines;
pub use three_n::gen_3n4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Lines { n: usize, seed: u64 },
    Caterpillar { blue: usize, red: usize },
    ThreeNMinus4 { n: usize },
    GridIncidence { k: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown generator {0:?} (lines, caterpillar, three-n-minus-4, grid-incidence)")]
    Unknown(String),
    #[error("{0}")]
    Parameter(String),
}

impl GeneratorSpec {
    /// `n` doubles as nBlue and `k` as nRed for the caterpillar.
    pub fn from_parts(name: &str, n: Option<usize>, k: Option<usize>, seed: u64) -> Result<Self, GenError> {
        let need = |v: Option<usize>, flag: &str, min: usize| match v {
            Some(v) if v >= min => Ok(v),
            Some(v) => Err(GenError::Parameter(format!("{name}: --{flag} {v} is below the minimum {min}"))),
            None => Err(GenError::Parameter(format!("{name}: --{flag} is required"))),
        };
        Ok(match name {
            "lines" => GeneratorSpec::Lines { n: need(n, "n", 2)?, seed },
            "caterpillar" => GeneratorSpec::Caterpillar { blue: need(n, "n", 1)?, red: need(k, "k", 1)? },
            "three-n-minus-4" => GeneratorSpec::ThreeNMinus4 { n: need(n, "n", 1)? },
            "grid-incidence" => GeneratorSpec::GridIncidence { k: need(k.or(n), "k", 2)? },
            other => return Err(GenError::Unknown(other.to_string())),
        })
    }

    pub fn relaxed(&self) -> bool {
        matches!(self, GeneratorSpec::GridIncidence { .. })
    }

    pub fn generate(&self) -> Family {
        match *self {
            GeneratorSpec::Lines { n, seed } => gen_lines(n, seed),
            GeneratorSpec::Caterpillar { blue, red } => gen_caterpillar(blue, red),
            GeneratorSpec::ThreeNMinus4 { n } => gen_3n4(n),
            GeneratorSpec::GridIncidence { k } => gen_grid_incidence(k).family,
        }
    }
}

//! Normalized bar cochains, cocycle and coboundary tests, and cohomology groups.
//!
//! `H^n(G, 𝕜ˣ)` is computed as `H^{n+1}(G, ℤ)`, the torsion of the cokernel of
//! the integral differential `dₙ`. Twisted coefficients go through a local
//! Smith form at each prime dividing the exponent of the carrier.

mod cochain;
mod complex;
mod groups;

use std::fmt;

use thiserror::Error;

use crate::gmodule::GModule;
use crate::group::FiniteGroup;
use crate::guards::GuardError;
use crate::qz::QZ;

pub use cochain::{Cochain, CochainJson};
pub use groups::{
    coboundary_witness_at_level, cohomology_group, cohomology_group_with, kx_cohomology, kx_cohomology_exact,
    module_cohomology, reduced_h1, CohomologyClass, CohomologyCoefficients, Complex, ModuleCohomology,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error("not a cocycle: the coboundary is nonzero at ({})", .witness.join(","))]
    NotACocycle { witness: Vec<String> },
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("value of order {order} does not lie in μ_{level}")]
    InvalidLevel { level: u64, order: u64 },
    #[error("malformed cochain: {0}")]
    Malformed(String),
    #[error(transparent)]
    TooLarge(#[from] GuardError),
}

/// Coefficients of a cochain: an abelian group with a left action of the group.
pub trait Coefficients: fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn act(&self, g: usize, a: &Self::Elem) -> Self::Elem;
    /// Whether these coefficients can be used for cochains on `group`.
    fn compatible(&self, group: &FiniteGroup) -> bool;
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem, String>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The torsion of `𝕜ˣ` as `ℚ/ℤ` with trivial action, usable over any group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TorsionUnits;

impl Coefficients for TorsionUnits {
    type Elem = QZ;

    fn zero(&self) -> QZ {
        QZ::ZERO
    }

    fn add(&self, a: &QZ, b: &QZ) -> QZ {
        *a + *b
    }

    fn neg(&self, a: &QZ) -> QZ {
        -*a
    }

    fn act(&self, _g: usize, a: &QZ) -> QZ {
        *a
    }

    fn compatible(&self, _group: &FiniteGroup) -> bool {
        true
    }

    fn elem_to_json(&self, a: &QZ) -> serde_json::Value {
        serde_json::Value::String(a.to_string())
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<QZ, String> {
        v.as_str()
            .ok_or_else(|| "expected a fraction string".to_string())?
            .parse::<QZ>()
            .map_err(|e| e.to_string())
    }
}

impl Coefficients for GModule {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        GModule::zero(self)
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        GModule::add(self, a, b)
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        GModule::neg(self, a)
    }

    fn act(&self, g: usize, a: &Vec<u64>) -> Vec<u64> {
        GModule::act(self, g, a)
    }

    fn compatible(&self, group: &FiniteGroup) -> bool {
        **self.group() == *group
    }

    /// Coordinates as fractions `xᵢ/dᵢ`.
    fn elem_to_json(&self, a: &Vec<u64>) -> serde_json::Value {
        let d = self.carrier().invariant_factors();
        serde_json::Value::Array(
            a.iter()
                .zip(d)
                .map(|(&x, &di)| serde_json::Value::String(QZ::new(x as i64, di).to_string()))
                .collect(),
        )
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Vec<u64>, String> {
        let d = self.carrier().invariant_factors();
        let arr = v.as_array().ok_or_else(|| "expected an array of fractions".to_string())?;
        if arr.len() != d.len() {
            return Err(format!("expected {} coordinates, got {}", d.len(), arr.len()));
        }
        arr.iter()
            .zip(d)
            .map(|(x, &di)| {
                let q: QZ = x
                    .as_str()
                    .ok_or_else(|| "expected a fraction string".to_string())?
                    .parse()
                    .map_err(|e: crate::qz::ParseQzError| e.to_string())?;
                q.at_level(di).ok_or_else(|| format!("{q} is not of order dividing {di}"))
            })
            .collect()
    }
}

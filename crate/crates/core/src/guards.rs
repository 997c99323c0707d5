//! Size guards for the exhaustive and cochain-level computations.
//!
//! Defaults can be raised through `PIVEXT_GUARD_*` environment variables for
//! experiments; results beyond the defaults are not covered by the test suite.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{what}: size {size} exceeds the limit {limit}")]
pub struct GuardError {
    pub what: String,
    pub size: usize,
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guards {
    /// Largest `|G|` for `H¹`, `H²` with `𝕜ˣ` coefficients.
    pub kx_low_degree_order: usize,
    /// Largest `|G|` for `H³(G, 𝕜ˣ)`.
    pub kx_degree3_order: usize,
    /// Largest dense matrix (cells) for twisted-coefficient cohomology.
    pub dense_cells: usize,
    /// Largest `|A|` for the hyperbolic space on `A × Â`.
    pub hyperbolic_base: usize,
    /// Largest carrier for the general orthogonal-group scan.
    pub orthogonal_carrier: usize,
    /// Largest carrier for the elementary abelian 2-group scan.
    pub orthogonal_carrier_elementary2: usize,
    /// Largest `|Z¹(G, M)|` enumerated element by element.
    pub crossed_homs: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            kx_low_degree_order: 32,
            kx_degree3_order: 16,
            dense_cells: 3_000_000,
            hyperbolic_base: 16,
            orthogonal_carrier: 16,
            orthogonal_carrier_elementary2: 64,
            crossed_homs: 4096,
        }
    }
}

impl Guards {
    /// Defaults overridden by `PIVEXT_GUARD_KX_LOW_DEGREE_ORDER`, `PIVEXT_GUARD_KX_DEGREE3_ORDER`,
    /// `PIVEXT_GUARD_DENSE_CELLS`, `PIVEXT_GUARD_HYPERBOLIC_BASE`,
    /// `PIVEXT_GUARD_ORTHOGONAL_CARRIER`, `PIVEXT_GUARD_ORTHOGONAL_CARRIER_ELEMENTARY2`,
    /// `PIVEXT_GUARD_CROSSED_HOMS`.
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        let read = |name: &str, slot: &mut usize| {
            if let Some(v) = std::env::var(format!("PIVEXT_GUARD_{name}")).ok().and_then(|s| s.parse().ok()) {
                *slot = v;
            }
        };
        read("KX_LOW_DEGREE_ORDER", &mut g.kx_low_degree_order);
        read("KX_DEGREE3_ORDER", &mut g.kx_degree3_order);
        read("DENSE_CELLS", &mut g.dense_cells);
        read("HYPERBOLIC_BASE", &mut g.hyperbolic_base);
        read("ORTHOGONAL_CARRIER", &mut g.orthogonal_carrier);
        read("ORTHOGONAL_CARRIER_ELEMENTARY2", &mut g.orthogonal_carrier_elementary2);
        read("CROSSED_HOMS", &mut g.crossed_homs);
        g
    }

    /// Process-wide guards, read from the environment once.
    pub fn current() -> &'static Guards {
        static GUARDS: OnceLock<Guards> = OnceLock::new();
        GUARDS.get_or_init(Guards::from_env)
    }

    pub fn check(what: &str, size: usize, limit: usize) -> Result<(), GuardError> {
        if size > limit {
            Err(GuardError {
                what: what.to_string(),
                size,
                limit,
            })
        } else {
            Ok(())
        }
    }
}

//! Tambara–Yamagami data `(A, χ, τ)` and the pivotal analysis of the
//! `ℤ/2`-graded extension of `Vec_A` it defines.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianDecomposition, AbelianGroup};
use crate::cohomology::{cohomology_group, CohomologyCoefficients, CohomologyError};
use crate::gmodule::Character;
use crate::group::{make_standard, FiniteGroup, GroupError, StandardSpec};
use crate::pivotal::characters_of;
use crate::qz::QZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("bicharacter table has the wrong shape: {0}")]
    Shape(String),
    #[error("not biadditive: chi({a}+{b}, {c}) != chi({a}, {c}) + chi({b}, {c})")]
    NotBiadditive { a: String, b: String, c: String },
    #[error("not symmetric: chi({a}, {b}) != chi({b}, {a})")]
    NotSymmetric { a: String, b: String },
    #[error("degenerate: {kernel} pairs trivially with every element")]
    Degenerate { kernel: String },
    #[error("phi is not a character of A")]
    PhiDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TauSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for TauSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauSign::Plus => "+",
            TauSign::Minus => "-",
        })
    }
}

impl std::str::FromStr for TauSign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(TauSign::Plus),
            "-" | "-1" => Ok(TauSign::Minus),
            other => Err(format!("tau sign must be + or -, got {other:?}")),
        }
    }
}

/// Validated data: `bichar[a][b] = χ(a, b)`, `τ = sign·|A|^{−1/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TYData {
    a: Arc<FiniteGroup>,
    bichar: Vec<Vec<QZ>>,
    tau: TauSign,
}

impl TYData {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.a
    }

    pub fn bichar(&self, a: usize, b: usize) -> QZ {
        self.bichar[a][b]
    }

    pub fn tau_sign(&self) -> TauSign {
        self.tau
    }

    /// `τ² = 1/|A|`.
    pub fn tau_squared_inverse(&self) -> u64 {
        self.a.order() as u64
    }
}

/// Checks shape, biadditivity, symmetry and nondegeneracy, in that order.
pub fn validate_ty(a: Arc<FiniteGroup>, bichar: Vec<Vec<QZ>>, tau: TauSign) -> Result<TYData, TyError> {
    a.require_abelian()?;
    let n = a.order();
    if bichar.len() != n || bichar.iter().any(|r| r.len() != n) {
        return Err(TyError::Shape(format!("expected a {n}x{n} table")));
    }
    let label = |x: usize| a.label(x).to_string();
    for x in a.elements() {
        for y in a.elements() {
            for z in a.elements() {
                if bichar[a.mul(x, y)][z] != bichar[x][z] + bichar[y][z] {
                    return Err(TyError::NotBiadditive {
                        a: label(x),
                        b: label(y),
                        c: label(z),
                    });
                }
            }
        }
    }
    for x in a.elements() {
        for y in 0..x {
            if bichar[x][y] != bichar[y][x] {
                return Err(TyError::NotSymmetric { a: label(x), b: label(y) });
            }
        }
    }
    if let Some(k) = a.non_identity().find(|&x| bichar[x].iter().all(QZ::is_zero)) {
        return Err(TyError::Degenerate { kernel: label(k) });
    }
    Ok(TYData { a, bichar, tau })
}

/// `χ(a, b) = Σ aᵢbᵢ/dᵢ` in an invariant-factor basis of `A`.
pub fn standard_bichar(a: &FiniteGroup) -> Result<Vec<Vec<QZ>>, TyError> {
    a.require_abelian()?;
    let dec = AbelianDecomposition::new(a).expect("abelian");
    let d = dec.factors().invariant_factors().to_vec();
    Ok(a.elements()
        .map(|x| {
            a.elements()
                .map(|y| {
                    dec.coords(x)
                        .iter()
                        .zip(dec.coords(y))
                        .zip(&d)
                        .map(|((&s, &t), &di)| QZ::new((s * t % di) as i64, di))
                        .sum()
                })
                .collect()
        })
        .collect())
}

/// The biadditive extension of `m[i][j] = χ(eᵢ, eⱼ)` for the invariant-factor
/// basis `eᵢ` of `A` (see [`AbelianDecomposition::basis`]).
pub fn bichar_from_basis_matrix(a: &FiniteGroup, m: &[Vec<QZ>]) -> Result<Vec<Vec<QZ>>, TyError> {
    a.require_abelian()?;
    let dec = AbelianDecomposition::new(a).expect("abelian");
    let d = dec.factors().invariant_factors().to_vec();
    let k = d.len();
    if m.len() != k || m.iter().any(|r| r.len() != k) {
        return Err(TyError::Shape(format!("expected a {k}x{k} matrix on the basis of {}", dec.factors())));
    }
    for i in 0..k {
        for j in 0..k {
            if !m[i][j].times(d[i] as i64).is_zero() || !m[i][j].times(d[j] as i64).is_zero() {
                let b = dec.basis();
                return Err(TyError::NotBiadditive {
                    a: a.label(b[i]).to_string(),
                    b: a.label(b[i]).to_string(),
                    c: a.label(b[j]).to_string(),
                });
            }
        }
    }
    Ok(a.elements()
        .map(|x| {
            a.elements()
                .map(|y| {
                    let (cx, cy) = (dec.coords(x), dec.coords(y));
                    let mut s = QZ::ZERO;
                    for i in 0..k {
                        for j in 0..k {
                            s += m[i][j].times((cx[i] * cy[j]) as i64);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect())
}

/// Pivotal analysis of `𝒞(A, χ, τ)` over `Vec_A` with pivotal structure `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TyReport {
    pub order_a: u64,
    pub tau_sign: TauSign,
    /// The odd component is pivotalizable exactly when `φ = 0`.
    pub d1_pivotalizable: bool,
    /// `H²(ℤ/2, 𝕜ˣ)`, computed.
    pub o2_group: AbelianGroup,
    /// `|Hom(ℤ/2, ℚ/ℤ)|`, computed.
    pub h1_order: u64,
    /// Number of pivotal structures on the extension restricting to `φ`.
    pub pivotal_count: u64,
}

pub fn ty_pivotal_report(ty: &TYData, phi: &Character) -> Result<TyReport, TyError> {
    if **phi.domain() != *ty.a {
        return Err(TyError::PhiDomain);
    }
    let z2 = Arc::new(make_standard(&StandardSpec::Cyclic(2))?);
    let o2_group = cohomology_group(2, &z2, CohomologyCoefficients::Kx)?;
    let h1_order = characters_of(&z2).len() as u64;
    let d1_pivotalizable = phi.is_trivial();
    let pivotal_count = if d1_pivotalizable && o2_group.is_trivial() { h1_order } else { 0 };
    Ok(TyReport {
        order_a: ty.a.order() as u64,
        tau_sign: ty.tau,
        d1_pivotalizable,
        o2_group,
        h1_order,
        pivotal_count,
    })
}

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::cochain::Cochain;
use super::complex::{differential_matrix, local_subquotient, SparseRows};
use super::{Coefficients, CohomologyError, TorsionUnits};
use crate::abelian::{factorize, lcm_all, valuation, AbelianGroup};
use crate::gmodule::{mu_module, GModule};
use crate::group::FiniteGroup;
use crate::guards::Guards;
use crate::modlin::{crt_pair, local_solve, sparse_local_valuations, LocalRing};
use crate::qz::QZ;
use crate::smith;

/// Which bar complex to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Complex {
    /// Cochains vanishing on tuples with an identity entry.
    Normalized,
    /// All cochains.
    Full,
}

/// Coefficients for [`cohomology_group`].
#[derive(Debug, Clone, Copy)]
pub enum CohomologyCoefficients<'a> {
    /// `𝕜ˣ` with trivial action.
    Kx,
    Module(&'a Arc<GModule>),
}

/// A cohomology group of a module, with one cocycle per invariant factor.
#[derive(Debug, Clone)]
pub struct ModuleCohomology {
    pub degree: usize,
    pub group: AbelianGroup,
    /// `generators[i]` represents a class of order `group.invariant_factors()[i]`.
    pub generators: Vec<Cochain<GModule>>,
}

/// `Hⁿ(G, 𝕜ˣ) = H^{n+1}(G, ℤ)`: the torsion of `coker dₙ` on the integral bar complex.
/// No size guard; see [`cohomology_group`].
pub fn kx_cohomology(n: usize, g: &FiniteGroup, complex: Complex) -> AbelianGroup {
    let d = differential_matrix(g, None, n, complex == Complex::Normalized);
    let mut orders = Vec::new();
    for (p, e) in factorize(g.order() as u64) {
        // The torsion is killed by |G|, so valuations stay below e + 1.
        let ring = LocalRing::new(p, e + 1);
        for v in sparse_local_valuations(&d.rows, d.ncols, &ring) {
            if v > 0 {
                orders.push(p.pow(v));
            }
        }
    }
    AbelianGroup::from_cyclic_orders(&orders)
}

type KxCache = Mutex<HashMap<(usize, Vec<Vec<usize>>), AbelianGroup>>;

/// [`kx_cohomology`] on the normalized complex, memoized by multiplication table.
fn kx_cohomology_cached(n: usize, g: &FiniteGroup) -> AbelianGroup {
    static CACHE: OnceLock<KxCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (n, g.table());
    if let Some(h) = cache.lock().expect("cache lock").get(&key) {
        return h.clone();
    }
    let h = kx_cohomology(n, g, Complex::Normalized);
    let mut c = cache.lock().expect("cache lock");
    if c.len() >= 4096 {
        c.clear();
    }
    c.insert(key, h.clone());
    h
}

/// Same as [`kx_cohomology`] on the normalized complex, by a Smith form over ℤ
/// in arbitrary precision. Only practical for small matrices.
pub fn kx_cohomology_exact(n: usize, g: &FiniteGroup) -> AbelianGroup {
    let d = differential_matrix(g, None, n, true);
    let orders: Vec<u64> = smith::cokernel_torsion(&dense_rows(&d))
        .into_iter()
        .map(|x| x.to_u64().expect("torsion fits in u64"))
        .collect();
    AbelianGroup::from_cyclic_orders(&orders)
}

fn dense_rows(d: &SparseRows) -> Vec<Vec<i64>> {
    d.rows
        .iter()
        .map(|r| {
            let mut row = vec![0; d.ncols];
            for &(c, x) in r {
                row[c as usize] = x;
            }
            row
        })
        .collect()
}

/// `Hⁿ(G, M)` for `1 ≤ n ≤ 3` under the process-wide guards.
pub fn cohomology_group(
    n: usize,
    g: &Arc<FiniteGroup>,
    coeffs: CohomologyCoefficients<'_>,
) -> Result<AbelianGroup, CohomologyError> {
    cohomology_group_with(n, g, coeffs, Guards::current())
}

pub fn cohomology_group_with(
    n: usize,
    g: &Arc<FiniteGroup>,
    coeffs: CohomologyCoefficients<'_>,
    guards: &Guards,
) -> Result<AbelianGroup, CohomologyError> {
    if !(1..=3).contains(&n) {
        return Err(CohomologyError::UnsupportedDegree(n));
    }
    match coeffs {
        CohomologyCoefficients::Kx => {
            let limit = if n == 3 {
                guards.kx_degree3_order
            } else {
                guards.kx_low_degree_order
            };
            Guards::check(&format!("|G| for H^{n}(G, kx)"), g.order(), limit)?;
            Ok(kx_cohomology_cached(n, g))
        }
        CohomologyCoefficients::Module(m) => {
            if **m.group() != **g {
                return Err(CohomologyError::CoefficientMismatch(
                    "module is over a different group".into(),
                ));
            }
            Ok(module_cohomology(n, m, guards)?.group)
        }
    }
}

/// `Hⁿ(G, M)` with representative cocycles, `1 ≤ n ≤ 3`.
pub fn module_cohomology(n: usize, m: &Arc<GModule>, guards: &Guards) -> Result<ModuleCohomology, CohomologyError> {
    if !(1..=3).contains(&n) {
        return Err(CohomologyError::UnsupportedDegree(n));
    }
    subquotient(n, m, true, guards)
}

/// The group `Z¹(G, M)` of crossed homomorphisms `f(gh) = f(g) + g·f(h)`, with a basis.
pub fn reduced_h1(m: &Arc<GModule>) -> Result<ModuleCohomology, CohomologyError> {
    subquotient(1, m, false, Guards::current())
}

fn cells(d: &SparseRows) -> usize {
    d.rows.len().saturating_mul(d.ncols)
}

fn subquotient(n: usize, m: &Arc<GModule>, quotient: bool, guards: &Guards) -> Result<ModuleCohomology, CohomologyError> {
    let g = m.group();
    let k = m.rank();
    if k == 0 {
        return Ok(ModuleCohomology {
            degree: n,
            group: AbelianGroup::trivial(),
            generators: Vec::new(),
        });
    }
    let next = differential_matrix(g, Some(m), n, true);
    Guards::check("dense cochain matrix", cells(&next), guards.dense_cells)?;
    let prev = if quotient {
        let p = differential_matrix(g, Some(m), n - 1, true);
        Guards::check("dense cochain matrix", cells(&p), guards.dense_cells)?;
        Some(p)
    } else {
        None
    };
    let d = m.carrier().invariant_factors();
    let dim = next.ncols;

    // Per prime: valuations (nonincreasing) and cochain values of representatives.
    let mut per_prime: Vec<(u64, Vec<u32>, Vec<Vec<u64>>)> = Vec::new();
    for (p, e) in factorize(m.carrier().exponent()) {
        let ring = LocalRing::new(p, e);
        let a: Vec<u32> = d.iter().map(|&di| valuation(di, p)).collect();
        let a_in: Vec<u32> = (0..dim).map(|c| a[c % k]).collect();
        let a_out: Vec<u32> = (0..next.rows.len()).map(|r| a[r % k]).collect();
        let piece = local_subquotient(prev.as_ref(), &next, &a_in, &a_out, &ring);
        let values = piece
            .generators
            .iter()
            .map(|x| {
                (0..dim)
                    .map(|c| {
                        let (di, pa) = (d[c % k], p.pow(a[c % k]));
                        crt_pair(x[c] % pa, pa, 0, di / pa)
                    })
                    .collect()
            })
            .collect();
        per_prime.push((p, piece.valuations, values));
    }
    let rank = per_prime.iter().map(|pp| pp.1.len()).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(rank);
    let mut generators = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut order = 1u64;
        let mut flat = vec![0u64; dim];
        for (p, vals, gens) in &per_prime {
            if let Some(&v) = vals.get(i) {
                order *= p.pow(v);
                for (c, slot) in flat.iter_mut().enumerate() {
                    *slot = (*slot + gens[i][c]) % d[c % k];
                }
            }
        }
        factors.push(order);
        generators.push(cochain_from_flat(n, m, &flat)?);
    }
    factors.reverse();
    generators.reverse();
    let group = AbelianGroup::from_invariant_factors(factors).expect("local pieces combine to invariant factors");
    Ok(ModuleCohomology {
        degree: n,
        group,
        generators,
    })
}

fn cochain_from_flat(n: usize, m: &Arc<GModule>, flat: &[u64]) -> Result<Cochain<GModule>, CohomologyError> {
    let k = m.rank();
    let mut pos = 0;
    Cochain::from_fn(n, m.group().clone(), m.clone(), |_| {
        let v = flat[pos * k..(pos + 1) * k].to_vec();
        pos += 1;
        Some(v)
    })
}

impl Cochain<GModule> {
    /// An `(n−1)`-cochain `c` with `dc = self`, or `None` when the class is nontrivial.
    /// The witness is verified before it is returned.
    pub fn coboundary_witness(&self) -> Result<Option<Cochain<GModule>>, CohomologyError> {
        self.coboundary_witness_with(Guards::current())
    }

    pub fn coboundary_witness_with(&self, guards: &Guards) -> Result<Option<Cochain<GModule>>, CohomologyError> {
        let n = self.degree();
        if n == 0 {
            return Err(CohomologyError::UnsupportedDegree(0));
        }
        self.require_cocycle()?;
        let m = self.coefficients().clone();
        let k = m.rank();
        if k == 0 || self.is_zero() {
            return Cochain::zero(n - 1, self.group().clone(), m).map(Some);
        }
        let dmat = differential_matrix(self.group(), Some(&m), n - 1, true);
        Guards::check("dense cochain matrix", cells(&dmat), guards.dense_cells)?;
        let d = m.carrier().invariant_factors();
        let rhs: Vec<u64> = self.values().iter().flatten().copied().collect();
        let mut sol = vec![0u64; dmat.ncols];
        for (p, e) in factorize(m.carrier().exponent()) {
            let ring = LocalRing::new(p, e);
            let a: Vec<u32> = d.iter().map(|&di| valuation(di, p)).collect();
            let scale: Vec<u64> = (0..rhs.len()).map(|r| ring.pow_p(e - a[r % k])).collect();
            let mat = dmat.to_dense(&ring, Some(&scale));
            let b: Vec<u64> = rhs.iter().zip(&scale).map(|(&x, &s)| ring.mul(x % ring.modulus(), s)).collect();
            let Some(x) = local_solve(&mat, &b, &ring) else {
                return Ok(None);
            };
            for (c, slot) in sol.iter_mut().enumerate() {
                let (di, pa) = (d[c % k], p.pow(a[c % k]));
                *slot = (*slot + crt_pair(x[c] % pa, pa, 0, di / pa)) % di;
            }
        }
        let witness = cochain_from_flat(n - 1, &m, &sol)?;
        assert!(witness.differential() == *self, "coboundary witness failed verification");
        Ok(Some(witness))
    }
}

impl Cochain<TorsionUnits> {
    /// An `(n−1)`-cochain `c` with `dc = self` and values in `μ_level`, or `None`
    /// when there is none. The default level is `m·|G|` for `m` the lcm of the
    /// value denominators. The witness is verified before it is returned.
    pub fn coboundary_witness(&self, level: Option<u64>) -> Result<Option<Cochain<TorsionUnits>>, CohomologyError> {
        coboundary_witness_at_level(self, level, Guards::current())
    }
}

pub fn coboundary_witness_at_level(
    f: &Cochain<TorsionUnits>,
    level: Option<u64>,
    guards: &Guards,
) -> Result<Option<Cochain<TorsionUnits>>, CohomologyError> {
    if f.degree() == 0 {
        return Err(CohomologyError::UnsupportedDegree(0));
    }
    f.require_cocycle()?;
    let m = lcm_all(f.values().iter().map(QZ::denominator));
    let level = level.unwrap_or(m * f.group().order() as u64);
    if level == 0 || !level.is_multiple_of(m) {
        return Err(CohomologyError::InvalidLevel { level, order: m });
    }
    let mu = Arc::new(mu_module(f.group().clone(), level));
    let lifted = f.map_values(mu.clone(), |q| {
        if mu.rank() == 0 {
            Vec::new()
        } else {
            vec![q.at_level(level).expect("level checked")]
        }
    })?;
    let Some(w) = lifted.coboundary_witness_with(guards)? else {
        return Ok(None);
    };
    let back = w.map_values(Arc::new(TorsionUnits), |v| QZ::new(v.first().copied().unwrap_or(0) as i64, level))?;
    assert!(back.differential() == *f, "coboundary witness failed verification");
    Ok(Some(back))
}

/// A cohomology class given by a representative cocycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyClass<M: Coefficients> {
    representative: Cochain<M>,
}

impl<M: Coefficients> CohomologyClass<M> {
    pub fn new(representative: Cochain<M>) -> Result<Self, CohomologyError> {
        representative.require_cocycle()?;
        Ok(CohomologyClass { representative })
    }

    pub fn representative(&self) -> &Cochain<M> {
        &self.representative
    }

    pub fn degree(&self) -> usize {
        self.representative.degree()
    }
}

impl CohomologyClass<TorsionUnits> {
    /// Triviality in `Hⁿ(G, ℚ/ℤ)`, witnessed at the default level.
    pub fn is_trivial(&self) -> Result<bool, CohomologyError> {
        Ok(self.representative.coboundary_witness(None)?.is_some())
    }
}

impl CohomologyClass<GModule> {
    pub fn is_trivial(&self) -> Result<bool, CohomologyError> {
        Ok(self.representative.coboundary_witness()?.is_some())
    }
}

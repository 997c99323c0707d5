//! The metric group `A × Â` with `q(a, χ) = χ(a)`, its isometries, the stabilizer of
//! the central object `Z_φ = (0, φ)`, and the order table of the long exact sequence
//! through `π₁` of the monoidal functors into `BrPic`.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::cohomology::{
    coboundary_witness_at_level, cohomology_group_with, reduced_h1, Cochain, CohomologyCoefficients,
    CohomologyError, ModuleCohomology, TorsionUnits,
};
use crate::gmodule::{dual_group, inv_center_module, Character, DualGroup, GModule, GModuleError};
use crate::group::{make_standard, FiniteGroup, GroupError, StandardSpec, Subgroup};
use crate::guards::{GuardError, Guards};
use crate::qz::QZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Module(#[from] GModuleError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    TooLarge(#[from] GuardError),
    #[error("phi is not a character of the base group")]
    PhiDomain,
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),
}

/// `A × Â` in coordinates `(a₁, …, a_k, c₁, …, c_k)` over the invariant factors
/// `d₁ | … | d_k` of `A`, indexed lexicographically with the last coordinate fastest.
#[derive(Debug, Clone)]
pub struct QuadraticSpace {
    base: Arc<FiniteGroup>,
    dual: DualGroup,
    factors: Vec<u64>,
    q: Vec<QZ>,
    sum: Vec<u32>,
    order_of: Vec<u64>,
}

impl QuadraticSpace {
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn dual(&self) -> &DualGroup {
        &self.dual
    }

    /// `d₁, …, d_k, d₁, …, d_k`.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.q.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn q(&self, x: usize) -> QZ {
        self.q[x]
    }

    pub fn q_values(&self) -> &[QZ] {
        &self.q
    }

    /// `b(x, y) = q(x + y) − q(x) − q(y)`.
    pub fn b(&self, x: usize, y: usize) -> QZ {
        self.q[self.add(x, y)] - self.q[x] - self.q[y]
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.sum[x * self.order() + y] as usize
    }

    pub fn element_order(&self, x: usize) -> u64 {
        self.order_of[x]
    }

    pub fn coords(&self, mut x: usize) -> Vec<u64> {
        let mut v = vec![0; self.factors.len()];
        for (slot, &d) in v.iter_mut().zip(&self.factors).rev() {
            *slot = x as u64 % d;
            x /= d as usize;
        }
        v
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        lex_index(coords, &self.factors)
    }

    /// The `i`-th coordinate vector.
    pub fn unit(&self, i: usize) -> usize {
        let mut v = vec![0; self.factors.len()];
        v[i] = 1;
        self.index(&v)
    }

    pub fn is_elementary2(&self) -> bool {
        self.factors.iter().all(|&d| d == 2)
    }

    /// The element of `A` and the dual coordinates of the character.
    pub fn split(&self, x: usize) -> (usize, Vec<u64>) {
        let c = self.coords(x);
        let k = c.len() / 2;
        (self.dual.decomposition().element(&c[..k]), c[k..].to_vec())
    }

    /// `(a; c₁,…,c_k)` with `a` a label of `A`.
    pub fn label(&self, x: usize) -> String {
        let (a, chi) = self.split(x);
        let chi: Vec<String> = chi.iter().map(u64::to_string).collect();
        format!("({}; {})", self.base.label(a), chi.join(","))
    }
}

fn lex_index(coords: &[u64], factors: &[u64]) -> usize {
    coords.iter().zip(factors).fold(0, |acc, (&c, &d)| acc * d as usize + (c % d) as usize)
}

pub fn hyperbolic_space(a: &Arc<FiniteGroup>) -> Result<QuadraticSpace, PicardError> {
    hyperbolic_space_with(a, Guards::current())
}

pub fn hyperbolic_space_with(a: &Arc<FiniteGroup>, guards: &Guards) -> Result<QuadraticSpace, PicardError> {
    a.require_abelian()?;
    Guards::check("|A| for the hyperbolic space A x A^", a.order(), guards.hyperbolic_base)?;
    let dual = dual_group(a)?;
    let d = dual.shape().invariant_factors().to_vec();
    let k = d.len();
    let factors: Vec<u64> = d.iter().chain(&d).copied().collect();
    let n: usize = factors.iter().product::<u64>() as usize;
    let decode = |mut x: usize| {
        let mut v = vec![0u64; factors.len()];
        for (slot, &f) in v.iter_mut().zip(&factors).rev() {
            *slot = x as u64 % f;
            x /= f as usize;
        }
        v
    };
    let coords: Vec<Vec<u64>> = (0..n).map(decode).collect();
    let q = coords
        .iter()
        .map(|c| (0..k).map(|i| QZ::new((c[i] * c[k + i] % d[i]) as i64, d[i])).sum())
        .collect();
    let mut sum = Vec::with_capacity(n * n);
    for x in &coords {
        for y in &coords {
            let s: Vec<u64> = x.iter().zip(y).zip(&factors).map(|((a, b), f)| (a + b) % f).collect();
            sum.push(lex_index(&s, &factors) as u32);
        }
    }
    let order_of = coords
        .iter()
        .map(|c| {
            c.iter()
                .zip(&factors)
                .map(|(&x, &f)| f / num_integer::gcd(x, f))
                .fold(1, num_integer::lcm)
        })
        .collect();
    Ok(QuadraticSpace {
        base: Arc::clone(a),
        dual,
        factors,
        q,
        sum,
        order_of,
    })
}

/// An automorphism of the carrier, as the image of every element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Isometry {
    images: Vec<usize>,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry { images: (0..n).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Isometry { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }
}

/// The order in which generator images are chosen during the scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    Forward,
    Reverse,
}

pub fn orthogonal_group(sp: &QuadraticSpace) -> Result<Vec<Isometry>, PicardError> {
    orthogonal_group_with(sp, ScanOrder::Forward, Guards::current())
}

/// Every automorphism preserving `q`, sorted. Images of the coordinate vectors are
/// chosen one at a time among elements of the right order and `q`-value, keeping
/// `b` on the chosen images equal to `b` on the coordinate vectors.
pub fn orthogonal_group_with(sp: &QuadraticSpace, scan: ScanOrder, guards: &Guards) -> Result<Vec<Isometry>, PicardError> {
    let n = sp.order();
    if sp.is_elementary2() {
        Guards::check("carrier of the orthogonal group scan", n, guards.orthogonal_carrier_elementary2)?;
    } else {
        Guards::check("carrier of the orthogonal group scan", n, guards.orthogonal_carrier)?;
    }
    let r = sp.factors.len();
    if r == 0 {
        return Ok(vec![Isometry::identity(1)]);
    }
    let units: Vec<usize> = (0..r).map(|i| sp.unit(i)).collect();
    let candidates: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            (0..n)
                .filter(|&y| sp.factors[i].is_multiple_of(sp.order_of[y]) && sp.q[y] == sp.q[units[i]])
                .collect()
        })
        .collect();
    let mut seq: Vec<usize> = (0..r).collect();
    if scan == ScanOrder::Reverse {
        seq.reverse();
    }
    let scan = Scan {
        sp,
        seq: &seq,
        units: &units,
        candidates: &candidates,
    };
    let mut found: Vec<Isometry> = candidates[seq[0]]
        .par_iter()
        .flat_map_iter(|&y0| {
            let mut images = vec![usize::MAX; r];
            images[seq[0]] = y0;
            let mut out = Vec::new();
            scan.extend(1, &mut images, &mut out);
            out
        })
        .collect();
    found.sort();
    verify_group(&found, n);
    Ok(found)
}

struct Scan<'a> {
    sp: &'a QuadraticSpace,
    seq: &'a [usize],
    units: &'a [usize],
    candidates: &'a [Vec<usize>],
}

impl Scan<'_> {
    fn extend(&self, pos: usize, images: &mut [usize], out: &mut Vec<Isometry>) {
        if pos == self.seq.len() {
            if let Some(iso) = self.realize(images) {
                out.push(iso);
            }
            return;
        }
        let i = self.seq[pos];
        for &y in &self.candidates[i] {
            let fits = self.seq[..pos]
                .iter()
                .all(|&j| self.sp.b(y, images[j]) == self.sp.b(self.units[i], self.units[j]));
            if fits {
                images[i] = y;
                self.extend(pos + 1, images, out);
            }
        }
        images[i] = usize::MAX;
    }

    fn realize(&self, gens: &[usize]) -> Option<Isometry> {
        let sp = self.sp;
        let n = sp.order();
        let mut images = vec![0usize; n];
        let mut seen = vec![false; n];
        for (x, slot) in images.iter_mut().enumerate() {
            let mut y = 0;
            for (c, &g) in sp.coords(x).iter().zip(gens) {
                for _ in 0..*c {
                    y = sp.add(y, g);
                }
            }
            if seen[y] {
                return None;
            }
            seen[y] = true;
            *slot = y;
        }
        assert!(
            (0..n).all(|x| sp.q[images[x]] == sp.q[x]),
            "isometry fails to preserve q pointwise"
        );
        Some(Isometry { images })
    }
}

/// Identity, inverses and composition; exhaustive up to 10⁶ products, sampled beyond.
fn verify_group(list: &[Isometry], n: usize) {
    let set: HashSet<&Isometry> = list.iter().collect();
    assert!(set.contains(&Isometry::identity(n)), "orthogonal group lacks the identity");
    assert!(list.iter().all(|a| set.contains(&a.inverse())), "orthogonal group not closed under inverses");
    let m = list.len();
    let total = m * m;
    let mut step = total / 1_000_000 + 1;
    while step > 1 && num_integer::gcd(step, m) != 1 {
        step += 1;
    }
    for k in (0..total).step_by(step) {
        let c = list[k / m].compose(&list[k % m]);
        assert!(set.contains(&c), "orthogonal group not closed under composition");
    }
}

/// `Z_φ = (0, φ)`.
pub fn z_phi(sp: &QuadraticSpace, phi: &Character) -> Result<usize, PicardError> {
    if **phi.domain() != *sp.base {
        return Err(PicardError::PhiDomain);
    }
    let mut coords = vec![0; sp.factors.len() / 2];
    coords.extend(sp.dual.coords_of(phi));
    Ok(sp.index(&coords))
}

pub fn stabilizer(group: &[Isometry], z: usize) -> Vec<Isometry> {
    group.iter().filter(|a| a.apply(z) == z).cloned().collect()
}

/// Isometries mapping `⟨z⟩` onto itself.
pub fn line_stabilizer(sp: &QuadraticSpace, group: &[Isometry], z: usize) -> Vec<Isometry> {
    let mut line = vec![0];
    let mut y = z;
    while y != 0 {
        line.push(y);
        y = sp.add(y, z);
    }
    group.iter().filter(|a| line.contains(&a.apply(z))).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub base: AbelianGroup,
    pub carrier_order: usize,
    pub z_phi: String,
    pub z_phi_order: u64,
    pub z_phi_q: QZ,
    pub orthogonal_order: usize,
    /// `|{α ∈ O(q) : α(Z_φ) = Z_φ}|`, the image of `π₀(PivBrPic(Vec_A, 𝔭^φ))` in `π₀(BrPic(Vec_A))`.
    pub stabilizer_order: usize,
    /// `|{α ∈ O(q) : α⟨Z_φ⟩ = ⟨Z_φ⟩}|`.
    pub line_stabilizer_order: usize,
}

pub fn stabilizer_pivotal_image(a: &Arc<FiniteGroup>, phi: &Character) -> Result<StabilizerReport, PicardError> {
    stabilizer_pivotal_image_with(a, phi, Guards::current())
}

pub fn stabilizer_pivotal_image_with(
    a: &Arc<FiniteGroup>,
    phi: &Character,
    guards: &Guards,
) -> Result<StabilizerReport, PicardError> {
    let sp = hyperbolic_space_with(a, guards)?;
    let z = z_phi(&sp, phi)?;
    let o = orthogonal_group_with(&sp, ScanOrder::Forward, guards)?;
    let stab = stabilizer(&o, z).len();
    let line = line_stabilizer(&sp, &o, z).len();
    assert!(o.len() % stab == 0 && o.len() % line == 0 && line.is_multiple_of(stab), "stabilizer orders violate Lagrange");
    Ok(StabilizerReport {
        base: sp.dual.shape().clone(),
        carrier_order: sp.order(),
        z_phi: sp.label(z),
        z_phi_order: sp.element_order(z),
        z_phi_q: sp.q(z),
        orthogonal_order: o.len(),
        stabilizer_order: stab,
        line_stabilizer_order: line,
    })
}

/// The connecting map `H̃¹(G, Inv(𝒵(Vec_C))) → H³(G, 𝕜ˣ)` given a 3-cocycle `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConnectingMap {
    NotEvaluated,
    Evaluated {
        /// Crossed homomorphisms `f` with `f*α` trivial in `H³(G, 𝕜ˣ)`.
        kernel_size: u64,
        pi1_order: u64,
        in_window: bool,
    },
}

/// Orders in `0 → H²(G, 𝕜ˣ) → π₁ → H̃¹(G, Inv(𝒵(Vec_C))) → H³(G, 𝕜ˣ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesReport {
    pub quotient_order: usize,
    pub h2: AbelianGroup,
    pub h2_order: u64,
    /// `H̃¹ = Z¹`, the crossed homomorphisms.
    pub z1: AbelianGroup,
    pub z1_order: u64,
    pub h3: AbelianGroup,
    pub h3_order: u64,
    /// Possible values of `|π₁|`: `|H²|·k` for `k` dividing `|Z¹|`.
    pub window: Vec<u64>,
    pub connecting: ConnectingMap,
}

/// The carrier of `m` as a group, with coordinates over its invariant factors in
/// lexicographic order. A user-supplied `α` lives on this group.
pub fn carrier_group(m: &GModule) -> Result<Arc<FiniteGroup>, PicardError> {
    Ok(Arc::new(make_standard(&StandardSpec::Abelian(
        m.carrier().invariant_factors().to_vec(),
    ))?))
}

pub fn les_report(
    d: &Arc<FiniteGroup>,
    c: &Subgroup,
    alpha: Option<&Cochain<TorsionUnits>>,
) -> Result<LesReport, PicardError> {
    let m = Arc::new(inv_center_module(d, c)?);
    les_report_for_module(&m, alpha, Guards::current())
}

/// As [`les_report`] for a user-declared `Inv(𝒵(𝒞))` given as a module over `G`.
pub fn les_report_for_module(
    m: &Arc<GModule>,
    alpha: Option<&Cochain<TorsionUnits>>,
    guards: &Guards,
) -> Result<LesReport, PicardError> {
    let g = m.group();
    let h2 = cohomology_group_with(2, g, CohomologyCoefficients::Kx, guards)?;
    let h3 = cohomology_group_with(3, g, CohomologyCoefficients::Kx, guards)?;
    let z1 = reduced_h1(m)?;
    let (h2_order, z1_order) = (h2.order(), z1.group.order());
    let window: Vec<u64> = (1..=z1_order).filter(|k| z1_order % k == 0).map(|k| h2_order * k).collect();
    let connecting = match alpha {
        None => ConnectingMap::NotEvaluated,
        Some(alpha) => {
            let kernel_size = connecting_kernel(m, &z1, alpha, guards)?;
            let pi1_order = h2_order * kernel_size;
            ConnectingMap::Evaluated {
                kernel_size,
                pi1_order,
                in_window: window.contains(&pi1_order),
            }
        }
    };
    Ok(LesReport {
        quotient_order: g.order(),
        h2_order,
        h2,
        z1_order,
        z1: z1.group,
        h3_order: h3.order(),
        h3,
        window,
        connecting,
    })
}

/// Checks that `α` is a `G`-invariant 3-cocycle on the carrier of `m`.
pub fn validate_alpha(m: &GModule, alpha: &Cochain<TorsionUnits>) -> Result<(), PicardError> {
    let mg = carrier_group(m)?;
    if alpha.degree() != 3 {
        return Err(PicardError::InvalidAlpha(format!("expected degree 3, got {}", alpha.degree())));
    }
    if **alpha.group() != *mg {
        return Err(PicardError::InvalidAlpha(format!(
            "expected a cochain on abelian:{}",
            join(m.carrier().invariant_factors())
        )));
    }
    if let Some(w) = alpha.cocycle_failure() {
        let w: Vec<&str> = w.iter().map(|&x| mg.label(x)).collect();
        return Err(PicardError::InvalidAlpha(format!("not a cocycle at ({})", w.join(","))));
    }
    let elems = m.elements();
    let act: Vec<Vec<usize>> = m
        .group()
        .elements()
        .map(|g| elems.iter().map(|v| lex_index(&m.act(g, v), m.carrier().invariant_factors())).collect())
        .collect();
    for (g, perm) in act.iter().enumerate() {
        for x in mg.elements() {
            for y in mg.elements() {
                for z in mg.elements() {
                    if alpha.value(&[perm[x], perm[y], perm[z]]) != alpha.value(&[x, y, z]) {
                        return Err(PicardError::InvalidAlpha(format!(
                            "not invariant under {} at ({},{},{})",
                            m.group().label(g),
                            mg.label(x),
                            mg.label(y),
                            mg.label(z)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Counts `f ∈ Z¹` whose pullback `(g, h, k) ↦ α(f(g), g·f(h), gh·f(k))` is a coboundary.
fn connecting_kernel(
    m: &Arc<GModule>,
    z1: &ModuleCohomology,
    alpha: &Cochain<TorsionUnits>,
    guards: &Guards,
) -> Result<u64, PicardError> {
    validate_alpha(m, alpha)?;
    Guards::check("crossed homomorphisms to enumerate", z1.group.order() as usize, guards.crossed_homs)?;
    let g = m.group();
    let d = m.carrier().invariant_factors();
    let units = Arc::new(TorsionUnits);
    let mut kernel = 0;
    for coeffs in z1.group.elements() {
        let f: Vec<Vec<u64>> = g
            .elements()
            .map(|x| {
                let mut v = m.zero();
                for (gen, &k) in z1.generators.iter().zip(&coeffs) {
                    let w = gen.value(&[x]);
                    for _ in 0..k {
                        v = m.add(&v, &w);
                    }
                }
                v
            })
            .collect();
        let pulled = Cochain::from_fn(3, Arc::clone(g), Arc::clone(&units), |t| {
            let a = lex_index(&f[t[0]], d);
            let b = lex_index(&m.act(t[0], &f[t[1]]), d);
            let c = lex_index(&m.act(g.mul(t[0], t[1]), &f[t[2]]), d);
            Some(alpha.value(&[a, b, c]))
        })?;
        if coboundary_witness_at_level(&pulled, None, guards)?.is_some() {
            kernel += 1;
        }
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generated_subgroup;
    use crate::pivotal::characters_of;

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(make_standard(&spec.parse::<StandardSpec>().unwrap()).unwrap())
    }

    // Every assignment of the coordinate vectors to elements of the right order,
    // without pruning; kept when bijective and q-preserving at every element.
    fn unpruned_oracle(sp: &QuadraticSpace) -> Vec<Vec<usize>> {
        let n = sp.order();
        let r = sp.factors().len();
        let mut out = Vec::new();
        let mut gens = vec![0; r];
        loop {
            let ok_orders = gens.iter().zip(sp.factors()).all(|(&y, &f)| {
                let mut acc = 0;
                for _ in 0..f {
                    acc = sp.add(acc, y);
                }
                acc == 0
            });
            if ok_orders {
                let images: Vec<usize> = (0..n)
                    .map(|x| {
                        sp.coords(x)
                            .iter()
                            .zip(&gens)
                            .fold(0, |acc, (&c, &y)| (0..c).fold(acc, |a, _| sp.add(a, y)))
                    })
                    .collect();
                let distinct: HashSet<usize> = images.iter().copied().collect();
                if distinct.len() == n && (0..n).all(|x| sp.q(images[x]) == sp.q(x)) {
                    out.push(images);
                }
            }
            let mut i = 0;
            while i < r {
                gens[i] += 1;
                if gens[i] < n {
                    break;
                }
                gens[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn hyperbolic_examples() {
        let sp = hyperbolic_space(&group("cyclic:2")).unwrap();
        assert_eq!(sp.q_values(), &[QZ::ZERO, QZ::ZERO, QZ::ZERO, QZ::new(1, 2)]);
        let sp = hyperbolic_space(&group("cyclic:3")).unwrap();
        assert_eq!(sp.order(), 9);
        assert_eq!(sp.q(sp.index(&[1, 1])), QZ::new(1, 3));
        let sp = hyperbolic_space(&group("cyclic:1")).unwrap();
        assert_eq!(sp.q_values(), &[QZ::ZERO]);
        assert_eq!(orthogonal_group(&sp).unwrap().len(), 1);
        assert!(matches!(hyperbolic_space(&group("symmetric:3")), Err(PicardError::Group(_))));
        assert!(matches!(hyperbolic_space(&group("cyclic:17")), Err(PicardError::TooLarge(_))));
    }

    #[test]
    fn form_is_quadratic() {
        for spec in ["cyclic:4", "cyclic:2 x cyclic:2", "cyclic:6", "cyclic:2 x cyclic:4"] {
            let sp = hyperbolic_space(&group(spec)).unwrap();
            assert_eq!(sp.q(0), QZ::ZERO);
            for x in 0..sp.order() {
                for y in 0..sp.order() {
                    for z in 0..sp.order() {
                        assert_eq!(sp.b(sp.add(x, y), z), sp.b(x, z) + sp.b(y, z));
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonal_orders_match_unpruned_scan() {
        for (spec, expected) in [("cyclic:2", 2), ("cyclic:3", 4), ("elementary_abelian:2,2", 72)] {
            let sp = hyperbolic_space(&group(spec)).unwrap();
            let oracle = unpruned_oracle(&sp);
            assert_eq!(oracle.len(), expected, "{spec}");
            let fwd = orthogonal_group(&sp).unwrap();
            let rev = orthogonal_group_with(&sp, ScanOrder::Reverse, Guards::current()).unwrap();
            assert_eq!(fwd, rev);
            let imgs: Vec<Vec<usize>> = fwd.iter().map(|a| a.images().to_vec()).collect();
            assert_eq!(imgs, oracle);
        }
    }

    #[test]
    fn orthogonal_guards() {
        let sp = hyperbolic_space(&group("cyclic:5")).unwrap();
        assert!(matches!(orthogonal_group(&sp), Err(PicardError::TooLarge(_))));
        let sp = hyperbolic_space(&group("elementary_abelian:2,3")).unwrap();
        assert_eq!(orthogonal_group(&sp).unwrap().len(), 40320);
    }

    #[test]
    fn z_phi_examples() {
        let a = group("cyclic:4");
        let sp = hyperbolic_space(&a).unwrap();
        assert_eq!(z_phi(&sp, &Character::trivial(a.clone())).unwrap(), sp.identity());
        let phi = Character::from_generators(a.clone(), &[(1, QZ::new(1, 4))]).unwrap();
        let z = z_phi(&sp, &phi).unwrap();
        assert_eq!(sp.element_order(z), 4);
        assert_eq!(sp.split(z), (0, vec![1]));
        for spec in ["cyclic:2", "cyclic:6", "cyclic:2 x cyclic:4", "elementary_abelian:3,2"] {
            let a = group(spec);
            let sp = hyperbolic_space(&a).unwrap();
            for phi in characters_of(&a) {
                assert_eq!(sp.q(z_phi(&sp, &phi).unwrap()), QZ::ZERO);
            }
        }
    }

    #[test]
    fn stabilizers() {
        for spec in ["cyclic:2", "cyclic:3", "elementary_abelian:2,2"] {
            let a = group(spec);
            let sp = hyperbolic_space(&a).unwrap();
            let oracle = unpruned_oracle(&sp);
            for phi in characters_of(&a) {
                let r = stabilizer_pivotal_image(&a, &phi).unwrap();
                let z = z_phi(&sp, &phi).unwrap();
                let fixed = oracle.iter().filter(|imgs| imgs[z] == z).count();
                assert_eq!(r.stabilizer_order, fixed, "{spec} {:?}", phi.values());
                assert_eq!(r.orthogonal_order, oracle.len());
                if phi.is_trivial() {
                    assert_eq!(r.stabilizer_order, r.orthogonal_order);
                }
            }
        }
        let a = group("cyclic:2");
        let phi = Character::from_generators(a.clone(), &[(1, QZ::new(1, 2))]).unwrap();
        assert_eq!(stabilizer_pivotal_image(&a, &phi).unwrap().stabilizer_order, 1);
        let a = group("cyclic:3");
        let phi = Character::from_generators(a.clone(), &[(1, QZ::new(1, 3))]).unwrap();
        let r = stabilizer_pivotal_image(&a, &phi).unwrap();
        assert_eq!((r.stabilizer_order, r.line_stabilizer_order), (1, 2));
    }

    #[test]
    fn les_examples() {
        let z4 = group("cyclic:4");
        let r = les_report(&z4, &generated_subgroup(&z4, &[1]), None).unwrap();
        assert_eq!((r.quotient_order, r.h2_order, r.z1_order, r.h3_order), (1, 1, 1, 1));
        assert_eq!(r.window, vec![1]);

        let d8 = group("dihedral:8");
        let rot = generated_subgroup(&d8, &[d8.generators()[0]]);
        assert_eq!(rot.order(), 4);
        let r = les_report(&d8, &rot, None).unwrap();
        assert_eq!((r.quotient_order, r.h2_order, r.h3_order), (2, 1, 2));
        assert_eq!(r.connecting, ConnectingMap::NotEvaluated);
        assert!(r.window.iter().all(|w| r.z1_order.is_multiple_of(*w)));

        let v4 = group("elementary_abelian:2,2");
        let m = Arc::new(GModule::trivial(v4, AbelianGroup::cyclic(2)));
        let r = les_report_for_module(&m, None, Guards::current()).unwrap();
        assert_eq!(r.h2_order, 2);
        assert_eq!(r.z1_order, 4);
        assert_eq!(r.window, vec![2, 4, 8]);
    }

    #[test]
    fn trivial_inv_center_gives_trivial_window() {
        let z2 = group("cyclic:2");
        let m = Arc::new(GModule::trivial(z2, AbelianGroup::trivial()));
        let r = les_report_for_module(&m, None, Guards::current()).unwrap();
        assert_eq!(r.h2_order, 1);
        assert_eq!(r.window, vec![1]);
    }

    #[test]
    fn connecting_map_with_alpha() {
        let d = group("cyclic:2 x cyclic:2");
        let c = generated_subgroup(&d, &[d.generators()[0]]);
        let m = Arc::new(inv_center_module(&d, &c).unwrap());
        let mg = carrier_group(&m).unwrap();
        let units = Arc::new(TorsionUnits);
        let zero = Cochain::zero(3, mg.clone(), units.clone()).unwrap();
        let r = les_report(&d, &c, Some(&zero)).unwrap();
        assert_eq!(r.z1_order, 4);
        assert_eq!(
            r.connecting,
            ConnectingMap::Evaluated {
                kernel_size: 4,
                pi1_order: 4,
                in_window: true
            }
        );
        // (x, y, z) ↦ x₁y₁z₁/2 pulls back to a³·ghk/2, nontrivial exactly when a = 1.
        let cubic = Cochain::from_fn(3, mg.clone(), units.clone(), |t| {
            Some(QZ::new(t.iter().map(|&x| (x / 2) as i64).product(), 2))
        })
        .unwrap();
        let r = les_report(&d, &c, Some(&cubic)).unwrap();
        assert_eq!(
            r.connecting,
            ConnectingMap::Evaluated {
                kernel_size: 2,
                pi1_order: 2,
                in_window: true
            }
        );
        let bad = Cochain::from_fn(3, mg, units, |t| (t == [1, 1, 1]).then(|| QZ::new(1, 2))).unwrap();
        assert!(matches!(les_report(&d, &c, Some(&bad)), Err(PicardError::InvalidAlpha(_))));
    }
}

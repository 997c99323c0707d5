//! Extending a pivotal structure of `Vec_C` to `Vec_D` for `C ⊴ D` abelian.
//!
//! A pivotal structure on `Vec_C` is a character `χ` of `C`. The first obstruction
//! `O₁` is the twisted 1-cocycle `g ↦ g·χ − χ` with values in `Ĉ`; when it vanishes,
//! the second obstruction is the class of the transgression
//! `(x, y) ↦ χ(s(x)s(y)s(xy)⁻¹)` in `H²(D/C, 𝕜ˣ)`. Unobstructed extensions form a
//! torsor over `Hom(D/C, 𝕜ˣ)`.

use std::sync::Arc;

use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::cohomology::{
    coboundary_witness_at_level, cohomology_group_with, Cochain, CohomologyClass, CohomologyCoefficients,
    CohomologyError, TorsionUnits,
};
use crate::gmodule::{conj_character_module, dual_group, Character, DualGroup, GModule, GModuleError};
use crate::group::{abelianization, quotient_with_section, FiniteGroup, GroupError, QuotientData, Subgroup};
use crate::guards::Guards;
use crate::qz::QZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PivotalError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Module(#[from] GModuleError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("the first obstruction does not vanish: the character is not invariant under conjugation")]
    O1Obstructed,
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("character is not defined on the subgroup: {0}")]
    CharacterDomain(String),
}

pub const NOTE_O1_NORMALIZATION: &str = "O1 is computed as the ratio g -> chi^g * chi^-1, which satisfies the twisted \
1-cocycle law O1(gh) = O1(g) + g.O1(h); the unpacked formula g -> chi(s(g)^-1 (-) s(g)) does not. Both vanish \
exactly when chi is invariant under conjugation.";
pub const NOTE_O2_TRANSGRESSION: &str =
    "O2 is taken to be the transgression class (x,y) -> chi(s(x)s(y)s(xy)^-1) in H^2(D/C, k^x).";

/// A character `χ` of an abelian normal subgroup `C ⊴ D` to be extended to `D`.
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    d: Arc<FiniteGroup>,
    c: Subgroup,
    c_group: Arc<FiniteGroup>,
    embedding: Vec<usize>,
    local: Vec<usize>,
    dual: DualGroup,
    chi: Character,
    quotient: QuotientData,
    module: Arc<GModule>,
    invariant: bool,
}

impl ExtensionProblem {
    /// `chi` must be a character of `c.to_group().0`.
    pub fn new(d: Arc<FiniteGroup>, c: Subgroup, chi: Character) -> Result<Self, PivotalError> {
        c.require_normal()?;
        c.require_abelian()?;
        if !Arc::ptr_eq(c.parent(), &d) && **c.parent() != *d {
            return Err(PivotalError::CharacterDomain("subgroup of a different group".into()));
        }
        let (cg, embedding) = c.to_group();
        if **chi.domain() != cg {
            return Err(PivotalError::CharacterDomain("character domain differs from the subgroup".into()));
        }
        let c_group = chi.domain().clone();
        let mut local = vec![usize::MAX; d.order()];
        for (i, &m) in embedding.iter().enumerate() {
            local[m] = i;
        }
        let dual = dual_group(&c_group)?;
        let quotient = quotient_with_section(&d, &c)?;
        let module = Arc::new(conj_character_module(&d, &c)?);
        let invariant = d
            .elements()
            .all(|x| embedding.iter().all(|&c| chi.value(local[d.conj(x, c)]) == chi.value(local[c])));
        Ok(ExtensionProblem {
            d,
            c,
            c_group,
            embedding,
            local,
            dual,
            chi,
            quotient,
            module,
            invariant,
        })
    }

    /// `χ` given by its values on elements of `D` that generate `C`.
    pub fn from_generator_values(d: Arc<FiniteGroup>, c: Subgroup, values: &[(usize, QZ)]) -> Result<Self, PivotalError> {
        let (cg, embedding) = c.to_group();
        let cg = Arc::new(cg);
        let mut pairs = Vec::with_capacity(values.len());
        for &(x, v) in values {
            let i = embedding
                .iter()
                .position(|&m| m == x)
                .ok_or_else(|| PivotalError::CharacterDomain(format!("{} is not in the subgroup", d.label(x))))?;
            pairs.push((i, v));
        }
        let chi = Character::from_generators(cg, &pairs)?;
        ExtensionProblem::new(d, c, chi)
    }

    pub fn d(&self) -> &Arc<FiniteGroup> {
        &self.d
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.c
    }

    pub fn subgroup_group(&self) -> &Arc<FiniteGroup> {
        &self.c_group
    }

    /// Subgroup index → index in `D`.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    /// `χ` at an element of `D` lying in `C`.
    pub fn chi_at(&self, x: usize) -> QZ {
        self.chi.value(self.local[x])
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    /// `Ĉ` as a module over `G = D/C`.
    pub fn character_module(&self) -> &Arc<GModule> {
        &self.module
    }
}

/// `O₁(g) = g·χ − χ`, i.e. `c ↦ χ(s(g)⁻¹ c s(g)) − χ(c)`, as coordinates in `Ĉ`.
pub fn o1_cocycle(prob: &ExtensionProblem) -> Cochain<GModule> {
    let d = &prob.d;
    let g = prob.module.group().clone();
    Cochain::from_fn(1, g, prob.module.clone(), |t| {
        let s = prob.quotient.lift(t[0]);
        let values = prob
            .embedding
            .iter()
            .map(|&c| prob.chi_at(d.conj(s, c)) - prob.chi_at(c))
            .collect();
        let ratio = Character::new(prob.c_group.clone(), values).expect("difference of characters");
        Some(prob.dual.coords_of(&ratio))
    })
    .expect("module over the quotient")
}

/// Whether `χ(d⁻¹cd) = χ(c)` for all `d ∈ D`, `c ∈ C`.
pub fn chi_is_invariant(prob: &ExtensionProblem) -> bool {
    prob.invariant
}

/// Vanishing of `O₁`, decided both on the cochain and by direct invariance.
pub fn o1_vanishes(prob: &ExtensionProblem) -> bool {
    let by_cochain = o1_cocycle(prob).is_zero();
    let direct = chi_is_invariant(prob);
    assert_eq!(by_cochain, direct, "O1 vanishing disagrees with invariance of chi");
    by_cochain
}

/// The transgression `(x, y) ↦ χ(s(x)s(y)s(xy)⁻¹)` for the problem's section.
pub fn o2_transgression(prob: &ExtensionProblem) -> Result<Cochain<TorsionUnits>, PivotalError> {
    o2_transgression_with_section(prob, prob.quotient.section())
}

/// The transgression for another normalized section `s` (coset index → element of `D`).
pub fn o2_transgression_with_section(prob: &ExtensionProblem, s: &[usize]) -> Result<Cochain<TorsionUnits>, PivotalError> {
    let d = &prob.d;
    let q = &prob.quotient;
    let g = q.quotient();
    if s.len() != g.order()
        || s.iter().enumerate().any(|(x, &y)| y >= d.order() || q.project(y) != x)
        || s[g.identity()] != d.identity()
    {
        return Err(PivotalError::InvalidSection(
            "must be a right inverse of the projection fixing the identity".into(),
        ));
    }
    if !chi_is_invariant(prob) {
        return Err(PivotalError::O1Obstructed);
    }
    let f = Cochain::from_fn(2, g.clone(), Arc::new(TorsionUnits), |t| {
        let (x, y) = (t[0], t[1]);
        let c = d.mul(d.mul(s[x], s[y]), d.inv(s[g.mul(x, y)]));
        Some(prob.chi_at(c))
    })?;
    Ok(f)
}

/// Result of the extension pipeline.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub o1_trivial: bool,
    pub o1_cocycle: Cochain<GModule>,
    /// Present exactly when `O₁` vanishes.
    pub o2_class: Option<CohomologyClass<TorsionUnits>>,
    pub o2_trivial: Option<bool>,
    /// `H²(D/C, 𝕜ˣ)`, when within the guards.
    pub o2_ambient: Option<AbelianGroup>,
    /// A 1-cochain `c` with `dc = O₂`, when `O₂` is trivial.
    pub o2_witness: Option<Cochain<TorsionUnits>>,
    /// All extensions of `χ` to `D`, sorted by their value vectors.
    pub extensions: Vec<Character>,
    /// `|Hom(D/C, ℚ/ℤ)|`.
    pub torsor_size: u64,
    pub notes: Vec<String>,
}

/// `Hom(G, ℚ/ℤ)` as characters of `G`.
pub fn characters_of(g: &Arc<FiniteGroup>) -> Vec<Character> {
    let (ab, projection) = abelianization(g);
    let dual = dual_group(&ab).expect("abelianization is abelian");
    dual.all_characters()
        .into_iter()
        .map(|chi| chi.pullback(g.clone(), &projection))
        .collect()
}

/// Runs the obstruction pipeline and enumerates all extensions when unobstructed.
pub fn extend_character(prob: &ExtensionProblem) -> Result<ObstructionReport, PivotalError> {
    extend_character_with(prob, None, Guards::current())
}

/// As [`extend_character`], looking for the `O₂` witness in `μ_level` (default `m·|D/C|`
/// for `m` the order of `O₂`) and with explicit guards.
pub fn extend_character_with(
    prob: &ExtensionProblem,
    level: Option<u64>,
    guards: &Guards,
) -> Result<ObstructionReport, PivotalError> {
    let g = prob.quotient.quotient().clone();
    let hom_g = characters_of(&g);
    let torsor_size = hom_g.len() as u64;
    let mut notes = vec![NOTE_O1_NORMALIZATION.to_string()];
    let o1 = o1_cocycle(prob);
    debug_assert!(o1.is_cocycle());
    let o1_trivial = o1_vanishes(prob);
    let mut report = ObstructionReport {
        o1_trivial,
        o1_cocycle: o1,
        o2_class: None,
        o2_trivial: None,
        o2_ambient: None,
        o2_witness: None,
        extensions: Vec::new(),
        torsor_size,
        notes: Vec::new(),
    };
    if !o1_trivial {
        report.notes = notes;
        return Ok(report);
    }
    notes.push(NOTE_O2_TRANSGRESSION.to_string());
    let f = o2_transgression(prob)?;
    let class = CohomologyClass::new(f.clone())?;
    match cohomology_group_with(2, &g, CohomologyCoefficients::Kx, guards) {
        Ok(h2) => report.o2_ambient = Some(h2),
        Err(CohomologyError::TooLarge(e)) => notes.push(format!("H^2(D/C, k^x) not computed: {e}")),
        Err(e) => return Err(e.into()),
    }
    let witness = coboundary_witness_at_level(&f, level, guards)?;
    report.o2_class = Some(class);
    report.o2_trivial = Some(witness.is_some());
    if let Some(c) = witness {
        report.extensions = torsor(prob, &c, &hom_g);
        report.o2_witness = Some(c);
    }
    report.notes = notes;
    Ok(report)
}

/// `ψ(c·s(x)) = χ(c) + c̃(x)`, twisted by every character of `G`.
fn torsor(prob: &ExtensionProblem, witness: &Cochain<TorsionUnits>, hom_g: &[Character]) -> Vec<Character> {
    let d = &prob.d;
    let q = &prob.quotient;
    let base: Vec<QZ> = d
        .elements()
        .map(|x| {
            let coset = q.project(x);
            let c = d.mul(x, d.inv(q.lift(coset)));
            prob.chi_at(c) + witness.value(&[coset])
        })
        .collect();
    let base = Character::new(d.clone(), base).expect("extension built from a coboundary witness is a character");
    let mut out: Vec<Character> = hom_g
        .iter()
        .map(|phi| base.add(&phi.pullback(d.clone(), q.projection())))
        .collect();
    out.sort_by(|a, b| a.values().cmp(b.values()));
    out.dedup();
    out
}

/// Outcome of the pivotalizability test for the module category over `G/H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePivotalVerdict {
    pub pivotalizable: bool,
    /// First `h ∈ H` with `φ(h) ≠ 0`, when not pivotalizable.
    pub witness: Option<usize>,
    /// When pivotalizable: `f(xH) − f(H) = φ(x)` per coset (cosets ordered as in the quotient);
    /// all solutions are these values shifted by one free scalar `f(H) ∈ 𝕜ˣ`.
    pub solution: Option<Vec<QZ>>,
}

/// Solvability of `φ(g) + f(xH) = f(gxH)` for `f: G/H → 𝕜ˣ`, which holds iff `φ|_H = 0`.
pub fn module_pivotalizable(phi: &Character, h: &Subgroup) -> Result<ModulePivotalVerdict, PivotalError> {
    let g = phi.domain();
    g.require_abelian()?;
    if **h.parent() != **g {
        return Err(PivotalError::CharacterDomain("subgroup of a different group".into()));
    }
    if let Some(&w) = h.members().iter().find(|&&x| !phi.value(x).is_zero()) {
        return Ok(ModulePivotalVerdict {
            pivotalizable: false,
            witness: Some(w),
            solution: None,
        });
    }
    let q = quotient_with_section(g, h)?;
    let solution = q.section().iter().map(|&x| phi.value(x)).collect();
    Ok(ModulePivotalVerdict {
        pivotalizable: true,
        witness: None,
        solution: Some(solution),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, generated_subgroup, make_standard, StandardSpec};

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(make_standard(&spec.parse::<StandardSpec>().unwrap()).unwrap())
    }

    fn problem(spec: &str, gens: &[&str], values: &[QZ]) -> ExtensionProblem {
        let d = group(spec);
        let gs: Vec<usize> = gens.iter().map(|s| d.element_by_label(s).unwrap()).collect();
        let c = generated_subgroup(&d, &gs);
        let pairs: Vec<(usize, QZ)> = gs.iter().copied().zip(values.iter().copied()).collect();
        ExtensionProblem::from_generator_values(d, c, &pairs).unwrap()
    }

    #[test]
    fn dihedral_first_obstruction() {
        let prob = problem("dihedral:8", &["r"], &[QZ::new(1, 4)]);
        let o1 = o1_cocycle(&prob);
        assert!(o1.is_cocycle());
        assert!(!o1_vanishes(&prob));
        let g = prob.quotient().quotient();
        let x = g.non_identity().next().unwrap();
        // O₁(x)(r) = χ(r³) − χ(r) = 1/2.
        let ratio = prob.dual.character(&o1.value(&[x]));
        let r_local = prob.embedding.iter().position(|&m| m == prob.d().element_by_label("r").unwrap()).unwrap();
        assert_eq!(ratio.value(r_local), QZ::new(1, 2));
        let rep = extend_character(&prob).unwrap();
        assert!(!rep.o1_trivial && rep.extensions.is_empty() && rep.o2_class.is_none());
        assert!(matches!(o2_transgression(&prob), Err(PivotalError::O1Obstructed)));
    }

    #[test]
    fn quaternion_transgression_values() {
        let d = group("quaternion:8");
        let c = center(&d);
        let minus = d.element_by_label("-1").unwrap();
        let prob = ExtensionProblem::from_generator_values(d.clone(), c, &[(minus, QZ::new(1, 2))]).unwrap();
        assert!(o1_vanishes(&prob));
        let f = o2_transgression(&prob).unwrap();
        assert!(f.is_cocycle());
        let q = prob.quotient();
        let xi = q.project(d.element_by_label("i").unwrap());
        let xj = q.project(d.element_by_label("j").unwrap());
        assert_eq!(f.value(&[xi, xj]), QZ::ZERO);
        assert_eq!(f.value(&[xj, xi]), QZ::new(1, 2));
        assert!(f.coboundary_witness(None).unwrap().is_none());
        let rep = extend_character(&prob).unwrap();
        assert_eq!(rep.o2_trivial, Some(false));
        assert_eq!(rep.o2_ambient.as_ref().map(AbelianGroup::order), Some(2));
        assert!(rep.extensions.is_empty());
    }

    #[test]
    fn cyclic_extension_values() {
        let prob = problem("cyclic:8", &["2"], &[QZ::new(1, 4)]);
        let rep = extend_character(&prob).unwrap();
        let one = prob.d().element_by_label("1").unwrap();
        let vals: Vec<QZ> = rep.extensions.iter().map(|psi| psi.value(one)).collect();
        assert_eq!(vals, vec![QZ::new(1, 8), QZ::new(5, 8)]);
        assert_eq!(rep.torsor_size, 2);
    }

    #[test]
    fn trivial_character_on_quaternion_center() {
        let d = group("quaternion:8");
        let c = center(&d);
        let (cg, _) = c.to_group();
        let prob = ExtensionProblem::new(d, c, Character::trivial(Arc::new(cg))).unwrap();
        let rep = extend_character(&prob).unwrap();
        assert_eq!(rep.extensions.len(), 4);
        assert!(o2_transgression(&prob).unwrap().is_zero());
    }

    #[test]
    fn degenerate_subgroups() {
        let d = group("cyclic:6");
        let prob = problem("cyclic:6", &["1"], &[QZ::new(1, 6)]);
        let rep = extend_character(&prob).unwrap();
        assert_eq!(rep.extensions.len(), 1);
        assert_eq!(rep.extensions[0].value(1), QZ::new(1, 6));
        let triv = generated_subgroup(&d, &[]);
        let (cg, _) = triv.to_group();
        let prob = ExtensionProblem::new(d.clone(), triv, Character::trivial(Arc::new(cg))).unwrap();
        assert_eq!(extend_character(&prob).unwrap().extensions.len(), 6);
    }

    #[test]
    fn split_extension_has_zero_transgression() {
        // ℤ/2 × ℤ/3 over ℤ/2 × 0 with the section landing in 0 × ℤ/3.
        let prob = problem("cyclic:2 x cyclic:3", &["(1,0)"], &[QZ::new(1, 2)]);
        let f = o2_transgression(&prob).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn module_pivotal_examples() {
        let z4 = group("cyclic:4");
        let phi = Character::from_generators(z4.clone(), &[(1, QZ::new(1, 4))]).unwrap();
        let h = generated_subgroup(&z4, &[2]);
        let v = module_pivotalizable(&phi, &h).unwrap();
        assert!(!v.pivotalizable);
        assert_eq!(v.witness, Some(2));
        let all = generated_subgroup(&z4, &[1]);
        assert!(!module_pivotalizable(&phi, &all).unwrap().pivotalizable);
        let zero = Character::trivial(z4.clone());
        assert!(module_pivotalizable(&zero, &h).unwrap().pivotalizable);
        let triv = generated_subgroup(&z4, &[]);
        let v = module_pivotalizable(&phi, &triv).unwrap();
        assert_eq!(v.solution.unwrap(), vec![QZ::ZERO, QZ::new(1, 4), QZ::new(1, 2), QZ::new(3, 4)]);
    }
}

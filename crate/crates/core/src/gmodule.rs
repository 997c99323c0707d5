//! Linear characters, dual groups, and finite G-modules used as twisted coefficients.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianDecomposition, AbelianGroup};
use crate::group::{quotient_with_section, FiniteGroup, GroupError, QuotientData, Subgroup};
use crate::qz::QZ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GModuleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid action: {0}")]
    BadAction(String),
}

/// A linear character `G → ℚ/ℤ`, stored as its value on every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    domain: Arc<FiniteGroup>,
    values: Vec<QZ>,
}

impl Character {
    pub fn new(domain: Arc<FiniteGroup>, values: Vec<QZ>) -> Result<Self, GModuleError> {
        if values.len() != domain.order() {
            return Err(GModuleError::InvalidCharacter(format!(
                "expected {} values, got {}",
                domain.order(),
                values.len()
            )));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if values[domain.mul(a, b)] != values[a] + values[b] {
                    return Err(GModuleError::InvalidCharacter(format!(
                        "value({}·{}) != value({}) + value({})",
                        domain.label(a),
                        domain.label(b),
                        domain.label(a),
                        domain.label(b)
                    )));
                }
            }
        }
        Ok(Character { domain, values })
    }

    pub fn trivial(domain: Arc<FiniteGroup>) -> Self {
        let values = vec![QZ::ZERO; domain.order()];
        Character { domain, values }
    }

    /// Extends prescribed values on generators multiplicatively, then validates.
    pub fn from_generators(domain: Arc<FiniteGroup>, gens: &[(usize, QZ)]) -> Result<Self, GModuleError> {
        let n = domain.order();
        let mut values: Vec<Option<QZ>> = vec![None; n];
        values[domain.identity()] = Some(QZ::ZERO);
        let mut frontier = vec![domain.identity()];
        while let Some(x) = frontier.pop() {
            let vx = values[x].expect("assigned before push");
            for &(g, vg) in gens {
                let y = domain.mul(x, g);
                match values[y] {
                    None => {
                        values[y] = Some(vx + vg);
                        frontier.push(y);
                    }
                    Some(vy) if vy != vx + vg => {
                        return Err(GModuleError::InvalidCharacter(format!(
                            "generator values are inconsistent at {}",
                            domain.label(y)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        if values.iter().any(Option::is_none) {
            return Err(GModuleError::InvalidCharacter("generators do not generate the group".into()));
        }
        Character::new(domain, values.into_iter().map(Option::unwrap).collect())
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn values(&self) -> &[QZ] {
        &self.values
    }

    pub fn value(&self, g: usize) -> QZ {
        self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(QZ::is_zero)
    }

    /// Pulls back along a homomorphism given as an index map into this character's domain.
    pub fn pullback(&self, domain: Arc<FiniteGroup>, map: &[usize]) -> Character {
        let values = map.iter().map(|&x| self.values[x]).collect();
        Character { domain, values }
    }

    /// Restriction along an embedding `sub[i] ↦ embedding[i]`.
    pub fn restrict(&self, sub: Arc<FiniteGroup>, embedding: &[usize]) -> Character {
        self.pullback(sub, embedding)
    }

    pub fn add(&self, other: &Character) -> Character {
        debug_assert_eq!(self.domain.order(), other.domain.order());
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Character {
            domain: Arc::clone(&self.domain),
            values,
        }
    }

    /// Least common multiple of the value orders.
    pub fn order(&self) -> u64 {
        crate::abelian::lcm_all(self.values.iter().map(QZ::denominator))
    }

    pub fn to_json(&self) -> CharacterJson {
        CharacterJson::OnElements {
            on_elements: self.values.clone(),
        }
    }
}

/// `{"on_generators": ["1/4", ...]}` or `{"on_elements": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterJson {
    OnGenerators { on_generators: Vec<QZ> },
    OnElements { on_elements: Vec<QZ> },
}

impl CharacterJson {
    /// `gens` are the domain elements that `on_generators` refers to.
    pub fn build(&self, domain: Arc<FiniteGroup>, gens: &[usize]) -> Result<Character, GModuleError> {
        match self {
            CharacterJson::OnElements { on_elements } => Character::new(domain, on_elements.clone()),
            CharacterJson::OnGenerators { on_generators } => {
                if on_generators.len() != gens.len() {
                    return Err(GModuleError::InvalidCharacter(format!(
                        "expected {} generator values, got {}",
                        gens.len(),
                        on_generators.len()
                    )));
                }
                let pairs: Vec<(usize, QZ)> = gens.iter().copied().zip(on_generators.iter().copied()).collect();
                Character::from_generators(domain, &pairs)
            }
        }
    }
}

/// `Hom(A, ℚ/ℤ)` for an abelian group, with a basis dual to an invariant-factor basis of `A`.
#[derive(Debug, Clone)]
pub struct DualGroup {
    domain: Arc<FiniteGroup>,
    decomposition: AbelianDecomposition,
}

impl DualGroup {
    pub fn shape(&self) -> &AbelianGroup {
        self.decomposition.factors()
    }

    pub fn decomposition(&self) -> &AbelianDecomposition {
        &self.decomposition
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    /// `⟨χ, a⟩` for the character with coordinates `chi` in the dual basis.
    pub fn pair(&self, chi: &[u64], a: usize) -> QZ {
        let d = self.decomposition.factors().invariant_factors();
        self.decomposition
            .coords(a)
            .iter()
            .zip(chi)
            .zip(d)
            .map(|((&x, &c), &di)| QZ::new((x * c % di) as i64, di))
            .sum()
    }

    pub fn character(&self, chi: &[u64]) -> Character {
        let values = self.domain.elements().map(|a| self.pair(chi, a)).collect();
        Character {
            domain: Arc::clone(&self.domain),
            values,
        }
    }

    /// The dual basis characters `χᵢ(bⱼ) = δᵢⱼ/dᵢ`.
    pub fn basis(&self) -> Vec<Character> {
        let k = self.shape().rank();
        (0..k)
            .map(|i| {
                let mut c = vec![0; k];
                c[i] = 1;
                self.character(&c)
            })
            .collect()
    }

    /// Coordinates of a character of the domain: `cᵢ = dᵢ·χ(bᵢ)`.
    pub fn coords_of(&self, chi: &Character) -> Vec<u64> {
        self.decomposition
            .basis()
            .iter()
            .zip(self.shape().invariant_factors())
            .map(|(&b, &d)| chi.value(b).at_level(d).expect("character value order divides basis order"))
            .collect()
    }

    /// Every character, in lexicographic coordinate order.
    pub fn all_characters(&self) -> Vec<Character> {
        self.shape().elements().map(|c| self.character(&c)).collect()
    }
}

pub fn dual_group(a: &Arc<FiniteGroup>) -> Result<DualGroup, GModuleError> {
    a.require_abelian()?;
    let decomposition = AbelianDecomposition::new(a).expect("abelian");
    Ok(DualGroup {
        domain: Arc::clone(a),
        decomposition,
    })
}

/// A finite abelian group `⊕ ℤ/dᵢ` with a left action of `G` by integer matrices.
/// `action[g][i * k + j]` is the coefficient of `eᵢ` in `g·eⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    carrier: AbelianGroup,
    action: Vec<Vec<u64>>,
}

impl GModule {
    pub fn new(group: Arc<FiniteGroup>, carrier: AbelianGroup, action: Vec<Vec<u64>>) -> Result<Self, GModuleError> {
        let k = carrier.rank();
        let d = carrier.invariant_factors().to_vec();
        if action.len() != group.order() || action.iter().any(|m| m.len() != k * k) {
            return Err(GModuleError::BadAction("action matrices have the wrong shape".into()));
        }
        let mut action = action;
        for m in &mut action {
            for i in 0..k {
                for j in 0..k {
                    m[i * k + j] %= d[i];
                    // g·eⱼ must have order dividing dⱼ.
                    if !(m[i * k + j] as u128 * d[j] as u128).is_multiple_of(d[i] as u128) {
                        return Err(GModuleError::BadAction(format!("image of generator {j} has the wrong order")));
                    }
                }
            }
        }
        let module = GModule { group, carrier, action };
        let g = &module.group;
        for j in 0..k {
            let mut e = vec![0; k];
            e[j] = 1;
            if module.act(g.identity(), &e) != e {
                return Err(GModuleError::BadAction("identity does not act trivially".into()));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if module.act(a, &module.act(b, &e)) != module.act(g.mul(a, b), &e) {
                        return Err(GModuleError::BadAction(format!(
                            "action({})·action({}) != action({})",
                            g.label(a),
                            g.label(b),
                            g.label(g.mul(a, b))
                        )));
                    }
                }
            }
        }
        Ok(module)
    }

    pub fn trivial(group: Arc<FiniteGroup>, carrier: AbelianGroup) -> Self {
        let k = carrier.rank();
        let mut id = vec![0; k * k];
        for i in 0..k {
            id[i * k + i] = 1;
        }
        let action = vec![id; group.order()];
        GModule { group, carrier, action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn carrier(&self) -> &AbelianGroup {
        &self.carrier
    }

    pub fn rank(&self) -> usize {
        self.carrier.rank()
    }

    pub fn matrix(&self, g: usize) -> &[u64] {
        &self.action[g]
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = self.group.identity();
        self.action.iter().all(|m| *m == self.action[id])
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(self.carrier.invariant_factors())
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(self.carrier.invariant_factors())
            .map(|(&x, &d)| (d - x % d) % d)
            .collect()
    }

    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        let k = self.rank();
        let m = &self.action[g];
        let d = self.carrier.invariant_factors();
        (0..k)
            .map(|i| {
                let s: u128 = (0..k).map(|j| m[i * k + j] as u128 * v[j] as u128).sum();
                (s % d[i] as u128) as u64
            })
            .collect()
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.carrier.elements().collect()
    }
}

/// `μ_N ⊂ 𝕜ˣ` as `ℤ/N` with trivial action.
pub fn mu_module(group: Arc<FiniteGroup>, n: u64) -> GModule {
    GModule::trivial(group, AbelianGroup::cyclic(n.max(1)))
}

/// Shared setup for modules built from a normal abelian subgroup `C ⊴ D`.
struct NormalAbelian {
    quotient: QuotientData,
    embedding: Vec<usize>,
    local: Vec<usize>,
    dual: DualGroup,
}

fn normal_abelian(d: &FiniteGroup, c: &Subgroup) -> Result<NormalAbelian, GModuleError> {
    c.require_normal()?;
    c.require_abelian()?;
    let quotient = quotient_with_section(d, c)?;
    let (cg, embedding) = c.to_group();
    let c_group = Arc::new(cg);
    let mut local = vec![usize::MAX; d.order()];
    for (i, &m) in embedding.iter().enumerate() {
        local[m] = i;
    }
    let dual = dual_group(&c_group)?;
    Ok(NormalAbelian {
        quotient,
        embedding,
        local,
        dual,
    })
}

impl NormalAbelian {
    /// Coordinates of `g·χⱼ` for each dual basis vector, `(g·χ)(c) = χ(s(g)⁻¹ c s(g))`.
    fn dual_action(&self, d: &FiniteGroup, coset: usize) -> Vec<Vec<u64>> {
        let s = self.quotient.lift(coset);
        let k = self.dual.shape().rank();
        let basis = self.dual.decomposition().basis();
        let orders = self.dual.shape().invariant_factors();
        (0..k)
            .map(|j| {
                let mut chi = vec![0; k];
                chi[j] = 1;
                (0..k)
                    .map(|i| {
                        let ci = self.embedding[basis[i]];
                        let moved = self.local[d.conj(s, ci)];
                        self.dual.pair(&chi, moved).at_level(orders[i]).expect("order divides")
                    })
                    .collect()
            })
            .collect()
    }

    /// Coordinates of `s(g) cⱼ s(g)⁻¹` for each basis vector of `C`.
    fn subgroup_action(&self, d: &FiniteGroup, coset: usize) -> Vec<Vec<u64>> {
        let s = self.quotient.lift(coset);
        let basis = self.dual.decomposition().basis();
        basis
            .iter()
            .map(|&b| {
                let moved = d.conj(d.inv(s), self.embedding[b]);
                self.dual.decomposition().coords(self.local[moved]).to_vec()
            })
            .collect()
    }

    fn check_representative_independence(&self, d: &FiniteGroup) -> Result<(), GModuleError> {
        for x in d.elements() {
            let coset = self.quotient.project(x);
            let s = self.quotient.lift(coset);
            for &c in &self.embedding {
                if d.conj(x, c) != d.conj(s, c) {
                    return Err(GModuleError::BadAction("conjugation depends on the coset representative".into()));
                }
            }
        }
        Ok(())
    }
}

/// `Ĉ` as a module over `G = D/C`, `(g·χ)(c) = χ(s(g)⁻¹ c s(g))`.
pub fn conj_character_module(d: &FiniteGroup, c: &Subgroup) -> Result<GModule, GModuleError> {
    let na = normal_abelian(d, c)?;
    na.check_representative_independence(d)?;
    let g = Arc::clone(na.quotient.quotient());
    let k = na.dual.shape().rank();
    let action = g
        .elements()
        .map(|coset| {
            let cols = na.dual_action(d, coset);
            let mut m = vec![0; k * k];
            for (j, col) in cols.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    m[i * k + j] = v;
                }
            }
            m
        })
        .collect();
    GModule::new(g, na.dual.shape().clone(), action)
}

/// The invertible objects of the center of `Vec_C` for abelian `C`, as `C × Ĉ` with the
/// simultaneous conjugation action of `G = D/C`. Basis order interleaves `c₁, χ₁, c₂, χ₂, …`
/// so that the carrier factors `d₁, d₁, d₂, d₂, …` already form a divisibility chain.
pub fn inv_center_module(d: &FiniteGroup, c: &Subgroup) -> Result<GModule, GModuleError> {
    let na = normal_abelian(d, c)?;
    na.check_representative_independence(d)?;
    let g = Arc::clone(na.quotient.quotient());
    let orders = na.dual.shape().invariant_factors();
    let k = orders.len();
    let doubled: Vec<u64> = orders.iter().flat_map(|&o| [o, o]).collect();
    let carrier = AbelianGroup::from_invariant_factors(doubled).expect("interleaved chain");
    let action = g
        .elements()
        .map(|coset| {
            let sub = na.subgroup_action(d, coset);
            let dual = na.dual_action(d, coset);
            let mut m = vec![0; 4 * k * k];
            for j in 0..k {
                for i in 0..k {
                    m[(2 * i) * (2 * k) + 2 * j] = sub[j][i];
                    m[(2 * i + 1) * (2 * k) + 2 * j + 1] = dual[j][i];
                }
            }
            m
        })
        .collect();
    GModule::new(g, carrier, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{all_subgroups, center, generated_subgroup, make_standard};

    fn std(s: &str) -> Arc<FiniteGroup> {
        Arc::new(make_standard(&s.parse().unwrap()).unwrap())
    }

    #[test]
    fn duals() {
        let c4 = std("cyclic:4");
        let dual = dual_group(&c4).unwrap();
        assert_eq!(dual.shape().invariant_factors(), &[4]);
        assert_eq!(dual.basis()[0].value(1), QZ::new(1, 4));
        assert_eq!(dual_group(&std("elementary_abelian:2,2")).unwrap().shape().invariant_factors(), &[2, 2]);
        assert!(dual_group(&std("cyclic:1")).unwrap().shape().is_trivial());
        assert!(matches!(dual_group(&std("symmetric:3")), Err(GModuleError::Group(GroupError::NotAbelian { .. }))));
    }

    #[test]
    fn dual_has_order_of_group() {
        // Full enumeration of candidate homomorphisms on generators, valued in μ_exp.
        for s in ["cyclic:6", "abelian:2,4", "elementary_abelian:2,3", "cyclic:3 x cyclic:3", "abelian:2,2,4", "abelian:4,8"] {
            let a = std(s);
            let e = a.exponent();
            let gens = a.generators().to_vec();
            let mut count = 0;
            let total = (e as usize).pow(gens.len() as u32);
            for mut idx in 0..total {
                let vals: Vec<(usize, QZ)> = gens
                    .iter()
                    .map(|&g| {
                        let v = QZ::new((idx % e as usize) as i64, e);
                        idx /= e as usize;
                        (g, v)
                    })
                    .collect();
                if Character::from_generators(Arc::clone(&a), &vals).is_ok() {
                    count += 1;
                }
            }
            let dual = dual_group(&a).unwrap();
            assert_eq!(count as u64, a.order() as u64, "{s}");
            assert_eq!(dual.shape().order(), a.order() as u64);
            assert_eq!(dual.all_characters().len(), a.order());
        }
    }

    #[test]
    fn characters() {
        let c4 = std("cyclic:4");
        let chi = Character::from_generators(Arc::clone(&c4), &[(1, QZ::new(1, 4))]).unwrap();
        assert_eq!(chi.value(3), QZ::new(3, 4));
        assert!(Character::from_generators(Arc::clone(&c4), &[(1, QZ::new(1, 3))]).is_err());
        assert!(Character::new(c4, vec![QZ::ZERO, QZ::new(1, 2), QZ::ZERO, QZ::ZERO]).is_err());
    }

    #[test]
    fn mu() {
        let z2 = std("cyclic:2");
        let m = mu_module(Arc::clone(&z2), 2);
        assert_eq!(m.carrier().invariant_factors(), &[2]);
        assert!(m.is_trivial_action());
        assert!(mu_module(z2, 1).carrier().is_trivial());
    }

    #[test]
    fn conj_modules() {
        let d8 = std("dihedral:8");
        let rot = generated_subgroup(&d8, &[d8.element_by_label("r").unwrap()]);
        let m = conj_character_module(&d8, &rot).unwrap();
        assert_eq!(m.carrier().invariant_factors(), &[4]);
        let g = m.group();
        let nontrivial = g.non_identity().next().unwrap();
        assert_eq!(m.act(nontrivial, &[1]), vec![3]);

        let q8 = std("quaternion:8");
        let m = conj_character_module(&q8, &center(&q8)).unwrap();
        assert_eq!(m.carrier().invariant_factors(), &[2]);
        assert!(m.is_trivial_action());

        for s in ["cyclic:8", "abelian:2,4", "elementary_abelian:2,3"] {
            let a = std(s);
            for c in all_subgroups(&a) {
                assert!(conj_character_module(&a, &c).unwrap().is_trivial_action());
            }
        }
    }

    #[test]
    fn inv_center() {
        let d8 = std("dihedral:8");
        let rot = generated_subgroup(&d8, &[d8.element_by_label("r").unwrap()]);
        let m = inv_center_module(&d8, &rot).unwrap();
        assert_eq!(m.carrier().invariant_factors(), &[4, 4]);
        let sigma = m.group().non_identity().next().unwrap();
        assert_eq!(m.act(sigma, &[1, 0]), vec![3, 0]);
        assert_eq!(m.act(sigma, &[0, 1]), vec![0, 3]);
        let c4 = std("cyclic:4");
        let two = generated_subgroup(&c4, &[2]);
        assert!(inv_center_module(&c4, &two).unwrap().is_trivial_action());
        let triv = generated_subgroup(&d8, &[]);
        assert!(inv_center_module(&d8, &triv).unwrap().carrier().is_trivial());
    }

    #[test]
    fn bad_actions_rejected() {
        let z2 = std("cyclic:2");
        // Doubling on ℤ/4 is not invertible, so the homomorphism law fails at σ².
        let carrier = AbelianGroup::cyclic(4);
        assert!(GModule::new(Arc::clone(&z2), carrier.clone(), vec![vec![1], vec![2]]).is_err());
        assert!(GModule::new(z2, carrier, vec![vec![1], vec![3]]).is_ok());
    }
}

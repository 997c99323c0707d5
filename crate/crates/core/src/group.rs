//! Finite groups given by validated multiplication tables, with subgroups,
//! quotients carrying normalized sections, abelianizations and conjugation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::AbelianDecomposition;

/// Largest group order accepted anywhere in the library.
pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty or non-square multiplication table")]
    NotSquare,
    #[error("table is not closed: entry ({row}, {col}) = {value} is out of range")]
    NotClosed { row: usize, col: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("associativity fails at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("group of order {order} exceeds the limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("not normal: {conjugator}^-1 {element} {conjugator} = {conjugate} escapes the subgroup")]
    NotNormal {
        conjugator: String,
        element: String,
        conjugate: String,
    },
    #[error("group is not abelian: {a} and {b} do not commute")]
    NotAbelian { a: String, b: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("labels: {0}")]
    BadLabels(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
}

/// A finite group stored as a flat multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
    generators: Vec<usize>,
    standard: Option<StandardSpec>,
}

impl FiniteGroup {
    /// Validates a multiplication table. The identity need not be element 0.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::NotSquare);
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge {
                order: n,
                limit: MAX_GROUP_ORDER,
            });
        }
        for (row, r) in table.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::NotClosed { row, col, value });
                }
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = vec![0; n];
        for (x, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NoInverse { element: x })?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(GroupError::BadLabels(format!("expected {n} labels, got {}", l.len())));
                }
                let mut sorted = l.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(GroupError::BadLabels("duplicate label".into()));
                }
                l
            }
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let mut g = FiniteGroup {
            order: n,
            table: flat,
            identity,
            inverses,
            labels,
            generators: Vec::new(),
            standard: None,
        };
        g.generators = g.greedy_generators(&(0..n).collect::<Vec<_>>());
        Ok(g)
    }

    fn from_parts(table: Vec<Vec<usize>>, labels: Vec<String>, generators: Vec<usize>, spec: StandardSpec) -> Self {
        let mut g = FiniteGroup::from_table(table, Some(labels)).expect("standard constructions are valid groups");
        g.generators = generators;
        g.standard = Some(spec);
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `a^k`, negative exponents allowed.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut out = self.identity;
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    /// `g⁻¹ n g`.
    pub fn conj(&self, g: usize, n: usize) -> usize {
        self.mul(self.mul(self.inv(g), n), g)
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by label, or by `#index`.
    pub fn element_by_label(&self, s: &str) -> Option<usize> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('#') {
            return idx.parse().ok().filter(|&i| i < self.order);
        }
        self.labels.iter().position(|l| l == s)
    }

    /// The canonical generating set (family generators for standard groups).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn standard_spec(&self) -> Option<&StandardSpec> {
        self.standard.as_ref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Non-identity elements in index order.
    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&x| x != self.identity)
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        for a in 0..self.order {
            for b in a + 1..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn require_abelian(&self) -> Result<(), GroupError> {
        match self.noncommuting_pair() {
            None => Ok(()),
            Some((a, b)) => Err(GroupError::NotAbelian {
                a: self.labels[a].clone(),
                b: self.labels[b].clone(),
            }),
        }
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        crate::abelian::lcm_all(self.elements().map(|x| self.element_order(x) as u64))
    }

    fn greedy_generators(&self, members: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        for &x in members {
            if !span[x] {
                gens.push(x);
                span = self.closure_mask(&gens);
            }
        }
        gens
    }

    fn closure_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    frontier.push(y);
                }
            }
        }
        mask
    }

    /// Emits the group in the JSON schema accepted by [`GroupInput`].
    pub fn to_input(&self) -> GroupInput {
        match &self.standard {
            Some(spec) => GroupInput::Standard {
                standard: spec.to_json(),
            },
            None => GroupInput::Table {
                table: self.table(),
                labels: Some(self.labels.clone()),
            },
        }
    }
}

/// A subgroup, stored as a sorted member list with the generators it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    mask: Vec<bool>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    /// The generators this subgroup was built from (non-identity, duplicates removed).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// First `(g, n)` with `g⁻¹ n g ∉ self`, if any.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        let g = &self.parent;
        for x in g.elements() {
            for &n in &self.members {
                if !self.mask[g.conj(x, n)] {
                    return Some((x, n));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn require_normal(&self) -> Result<(), GroupError> {
        match self.normality_witness() {
            None => Ok(()),
            Some((x, n)) => {
                let g = &self.parent;
                Err(GroupError::NotNormal {
                    conjugator: g.label(x).to_string(),
                    element: g.label(n).to_string(),
                    conjugate: g.label(g.conj(x, n)).to_string(),
                })
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    pub fn require_abelian(&self) -> Result<(), GroupError> {
        let g = &self.parent;
        for &a in &self.members {
            for &b in &self.members {
                if g.mul(a, b) != g.mul(b, a) {
                    return Err(GroupError::NotAbelian {
                        a: g.label(a).to_string(),
                        b: g.label(b).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The subgroup as a group in its own right, with labels inherited from the parent.
    /// Returns the group and the embedding (subgroup index → parent index).
    pub fn to_group(&self) -> (FiniteGroup, Vec<usize>) {
        let g = &self.parent;
        let mut local = vec![usize::MAX; g.order()];
        for (i, &m) in self.members.iter().enumerate() {
            local[m] = i;
        }
        let table: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|&a| self.members.iter().map(|&b| local[g.mul(a, b)]).collect())
            .collect();
        let labels = self.members.iter().map(|&m| g.label(m).to_string()).collect();
        let mut sub = FiniteGroup::from_table(table, Some(labels)).expect("subgroup table is a group");
        sub.generators = self.generators.iter().map(|&x| local[x]).collect();
        (sub, self.members.clone())
    }
}

/// Smallest subgroup containing `gens`.
pub fn generated_subgroup(g: &Arc<FiniteGroup>, gens: &[usize]) -> Subgroup {
    let mut clean: Vec<usize> = Vec::new();
    for &x in gens {
        if x != g.identity() && !clean.contains(&x) {
            clean.push(x);
        }
    }
    let mask = g.closure_mask(&clean);
    let members = (0..g.order()).filter(|&x| mask[x]).collect();
    Subgroup {
        parent: Arc::clone(g),
        members,
        mask,
        generators: clean,
    }
}

/// Subgroup from an explicit member set; the set must be closed (checked).
pub fn subgroup_from_members(g: &Arc<FiniteGroup>, members: &[usize]) -> Option<Subgroup> {
    let mut mask = vec![false; g.order()];
    for &m in members {
        *mask.get_mut(m)? = true;
    }
    if !mask[g.identity()] {
        return None;
    }
    let sorted: Vec<usize> = (0..g.order()).filter(|&x| mask[x]).collect();
    for &a in &sorted {
        for &b in &sorted {
            if !mask[g.mul(a, b)] {
                return None;
            }
        }
    }
    let generators = g.greedy_generators(&sorted);
    Some(Subgroup {
        parent: Arc::clone(g),
        members: sorted,
        mask,
        generators,
    })
}

pub fn center(g: &Arc<FiniteGroup>) -> Subgroup {
    let members: Vec<usize> = g
        .elements()
        .filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    subgroup_from_members(g, &members).expect("center is a subgroup")
}

pub fn commutator_subgroup(g: &Arc<FiniteGroup>) -> Subgroup {
    let mut comms = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if !comms.contains(&c) {
                comms.push(c);
            }
        }
    }
    comms.sort_unstable();
    let mut sub = generated_subgroup(g, &comms);
    sub.generators = g.greedy_generators(&sub.members);
    sub
}

/// Every subgroup of `g`, each once, ordered by (order, members).
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut seen: Vec<Vec<bool>> = Vec::new();
    let mut out = Vec::new();
    let mut stack = vec![generated_subgroup(g, &[])];
    while let Some(h) = stack.pop() {
        if seen.contains(&h.mask) {
            continue;
        }
        seen.push(h.mask.clone());
        for x in g.elements() {
            if !h.mask[x] {
                let mut gens = h.members.clone();
                gens.push(x);
                let k = g.closure_mask(&gens);
                if !seen.contains(&k) {
                    let members: Vec<usize> = (0..g.order()).filter(|&y| k[y]).collect();
                    let generators = g.greedy_generators(&members);
                    stack.push(Subgroup {
                        parent: Arc::clone(g),
                        members,
                        mask: k,
                        generators,
                    });
                }
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    for h in &mut out {
        h.generators = g.greedy_generators(&h.members);
    }
    out
}

/// `G/N` with its projection and a normalized set-theoretic section.
#[derive(Debug, Clone)]
pub struct QuotientData {
    quotient: Arc<FiniteGroup>,
    projection: Vec<usize>,
    section: Vec<usize>,
}

impl QuotientData {
    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn lift(&self, coset: usize) -> usize {
        self.section[coset]
    }

    /// Replaces the section. It must be a right inverse of the projection
    /// sending the identity coset to the identity.
    pub fn with_section(&self, section: Vec<usize>, parent: &FiniteGroup) -> Option<QuotientData> {
        let ok = section.len() == self.quotient.order()
            && section.iter().enumerate().all(|(c, &x)| x < parent.order() && self.projection[x] == c)
            && section[self.quotient.identity()] == parent.identity();
        ok.then(|| QuotientData {
            quotient: Arc::clone(&self.quotient),
            projection: self.projection.clone(),
            section,
        })
    }
}

/// Cosets are ordered by their least element; the section picks that least element,
/// except on the identity coset where it is the identity.
pub fn quotient_with_section(g: &FiniteGroup, n: &Subgroup) -> Result<QuotientData, GroupError> {
    n.require_normal()?;
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] == usize::MAX {
            let c = reps.len();
            for &m in n.members() {
                projection[g.mul(x, m)] = c;
            }
            reps.push(x);
        }
    }
    let k = reps.len();
    let table: Vec<Vec<usize>> = (0..k)
        .map(|a| (0..k).map(|b| projection[g.mul(reps[a], reps[b])]).collect())
        .collect();
    let id_coset = projection[g.identity()];
    let mut section = reps.clone();
    section[id_coset] = g.identity();
    let labels = section.iter().map(|&x| format!("[{}]", g.label(x))).collect();
    let quotient = FiniteGroup::from_table(table, Some(labels)).expect("quotient of a group by a normal subgroup");
    Ok(QuotientData {
        quotient: Arc::new(quotient),
        projection,
        section,
    })
}

/// `G/[G,G]` with elements in lexicographic invariant-factor coordinate order,
/// together with the projection.
pub fn abelianization(g: &Arc<FiniteGroup>) -> (Arc<FiniteGroup>, Vec<usize>) {
    let comm = commutator_subgroup(g);
    let q = quotient_with_section(g, &comm).expect("commutator subgroup is normal");
    let dec = AbelianDecomposition::new(q.quotient()).expect("abelianization is abelian");
    let factors = dec.factors().invariant_factors().to_vec();
    let ab = abelian_product(&factors);
    let projection = g
        .elements()
        .map(|x| lex_index(dec.coords(q.project(x)), &factors))
        .collect();
    (Arc::new(ab), projection)
}

fn lex_index(coords: &[u64], factors: &[u64]) -> usize {
    coords.iter().zip(factors).fold(0u64, |acc, (&c, &d)| acc * d + c) as usize
}

/// `ℤ/d₁ × … × ℤ/d_k` in lexicographic coordinate order.
fn abelian_product(factors: &[u64]) -> FiniteGroup {
    let elems: Vec<Vec<u64>> = if factors.is_empty() {
        vec![vec![]]
    } else {
        let n: u64 = factors.iter().product();
        (0..n)
            .map(|mut i| {
                let mut v = vec![0; factors.len()];
                for (slot, &d) in v.iter_mut().zip(factors).rev() {
                    *slot = i % d;
                    i /= d;
                }
                v
            })
            .collect()
    };
    let table = elems
        .iter()
        .map(|a| {
            elems
                .iter()
                .map(|b| {
                    let s: Vec<u64> = a.iter().zip(b).zip(factors).map(|((x, y), d)| (x + y) % d).collect();
                    lex_index(&s, factors)
                })
                .collect()
        })
        .collect();
    let labels = elems.iter().map(|v| tuple_label(v)).collect();
    let generators = (0..factors.len())
        .map(|i| {
            let mut v = vec![0; factors.len()];
            v[i] = 1;
            lex_index(&v, factors)
        })
        .collect();
    FiniteGroup::from_parts(table, labels, generators, StandardSpec::Abelian(factors.to_vec()))
}

fn tuple_label(v: &[u64]) -> String {
    if v.len() == 1 {
        return v[0].to_string();
    }
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// `n ↦ g⁻¹ n g` on the members of a normal subgroup; entry `i` is the image of `members()[i]`.
pub fn conjugation_map(g: &FiniteGroup, n: &Subgroup, x: usize) -> Result<Vec<usize>, GroupError> {
    n.require_normal()?;
    Ok(n.members().iter().map(|&m| g.conj(x, m)).collect())
}

/// Names of the built-in families. Element orderings are fixed per family:
/// cyclic by residue, dihedral as `rᵃsᵇ` ordered by `(a, b)`, quaternion of
/// order 8 as `1, -1, i, -i, j, -j, k, -k` (larger dicyclic groups as `aᵏxᵇ`
/// ordered by `(b, k)`), symmetric by lexicographic image tuple, elementary
/// abelian and `abelian` by lexicographic coordinates, direct products by
/// `(left, right)` pairs with the right factor varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StandardSpec {
    Cyclic(u64),
    Dihedral(u64),
    Quaternion(u64),
    Symmetric(u64),
    ElementaryAbelian { p: u64, k: u32 },
    Abelian(Vec<u64>),
    DirectProduct(Box<StandardSpec>, Box<StandardSpec>),
}

impl StandardSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StandardSpec::Cyclic(_) => "cyclic",
            StandardSpec::Dihedral(_) => "dihedral",
            StandardSpec::Quaternion(_) => "quaternion",
            StandardSpec::Symmetric(_) => "symmetric",
            StandardSpec::ElementaryAbelian { .. } => "elementary_abelian",
            StandardSpec::Abelian(_) => "abelian",
            StandardSpec::DirectProduct(..) => "direct_product",
        }
    }

    pub fn to_json(&self) -> StandardJson {
        let params = match self {
            StandardSpec::Cyclic(n)
            | StandardSpec::Dihedral(n)
            | StandardSpec::Quaternion(n)
            | StandardSpec::Symmetric(n) => vec![Param::Int(*n)],
            StandardSpec::ElementaryAbelian { p, k } => vec![Param::Int(*p), Param::Int(*k as u64)],
            StandardSpec::Abelian(f) => f.iter().map(|&d| Param::Int(d)).collect(),
            StandardSpec::DirectProduct(a, b) => vec![Param::Group(Box::new(a.to_json())), Param::Group(Box::new(b.to_json()))],
        };
        StandardJson {
            kind: self.kind().to_string(),
            params,
        }
    }

    pub fn from_json(j: &StandardJson) -> Result<StandardSpec, GroupError> {
        let ints = || -> Result<Vec<u64>, GroupError> {
            j.params
                .iter()
                .map(|p| match p {
                    Param::Int(n) => Ok(*n),
                    Param::Group(_) => Err(GroupError::UnsupportedParameter(format!("{}: expected integers", j.kind))),
                })
                .collect()
        };
        let one = || -> Result<u64, GroupError> {
            match ints()?.as_slice() {
                [n] => Ok(*n),
                _ => Err(GroupError::UnsupportedParameter(format!("{}: expected one integer", j.kind))),
            }
        };
        Ok(match j.kind.as_str() {
            "cyclic" => StandardSpec::Cyclic(one()?),
            "dihedral" => StandardSpec::Dihedral(one()?),
            "quaternion" => StandardSpec::Quaternion(one()?),
            "symmetric" => StandardSpec::Symmetric(one()?),
            "elementary_abelian" => match ints()?.as_slice() {
                [p, k] => StandardSpec::ElementaryAbelian { p: *p, k: *k as u32 },
                _ => return Err(GroupError::UnsupportedParameter("elementary_abelian: expected [p, k]".into())),
            },
            "abelian" => StandardSpec::Abelian(ints()?),
            "direct_product" => match j.params.as_slice() {
                [Param::Group(a), Param::Group(b)] => StandardSpec::DirectProduct(
                    Box::new(StandardSpec::from_json(a)?),
                    Box::new(StandardSpec::from_json(b)?),
                ),
                _ => return Err(GroupError::UnsupportedParameter("direct_product: expected two groups".into())),
            },
            other => return Err(GroupError::UnknownGroup(other.to_string())),
        })
    }
}

impl fmt::Display for StandardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardSpec::ElementaryAbelian { p, k } => write!(f, "elementary_abelian:{p},{k}"),
            StandardSpec::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(u64::to_string).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            StandardSpec::DirectProduct(a, b) => {
                let wrap = |s: &StandardSpec| match s {
                    StandardSpec::DirectProduct(..) => format!("({s})"),
                    _ => s.to_string(),
                };
                write!(f, "{} x {}", wrap(a), wrap(b))
            }
            StandardSpec::Cyclic(n) | StandardSpec::Dihedral(n) | StandardSpec::Quaternion(n) | StandardSpec::Symmetric(n) => {
                write!(f, "{}:{n}", self.kind())
            }
        }
    }
}

impl FromStr for StandardSpec {
    type Err = GroupError;

    /// `kind:params` with comma-separated integer parameters; ` x ` builds
    /// left-associated direct products; parentheses group.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let s = s.trim();
        let bad = || GroupError::UnknownGroup(s.to_string());
        // Split on a top-level " x ".
        let mut depth = 0i32;
        let bytes = s.as_bytes();
        let mut split_at = None;
        for i in 0..bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'x' if depth == 0 && i > 0 && bytes[i - 1] == b' ' && bytes.get(i + 1) == Some(&b' ') => split_at = Some(i),
                _ => {}
            }
        }
        if let Some(i) = split_at {
            let a: StandardSpec = s[..i].parse()?;
            let b: StandardSpec = s[i + 1..].parse()?;
            return Ok(StandardSpec::DirectProduct(Box::new(a), Box::new(b)));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            return inner.parse();
        }
        let (kind, params) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = params
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let j = StandardJson {
            kind: kind.trim().to_string(),
            params: nums.into_iter().map(Param::Int).collect(),
        };
        StandardSpec::from_json(&j)
    }
}

/// `{"kind": "...", "params": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardJson {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<Param>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(u64),
    Group(Box<StandardJson>),
}

/// Group input schema: `{"standard": {...}}` or `{"table": [[...]], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Standard {
        standard: StandardJson,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl GroupInput {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupInput::Standard { standard } => make_standard(&StandardSpec::from_json(standard)?),
            GroupInput::Table { table, labels } => FiniteGroup::from_table(table.clone(), labels.clone()),
        }
    }
}

fn predicted_order(spec: &StandardSpec) -> Result<u64, GroupError> {
    let unsupported = |m: &str| Err(GroupError::UnsupportedParameter(format!("{spec}: {m}")));
    let n = match spec {
        StandardSpec::Cyclic(n) => {
            if *n == 0 {
                return unsupported("order must be positive");
            }
            *n
        }
        StandardSpec::Dihedral(n) => {
            if *n < 2 || n % 2 != 0 {
                return unsupported("dihedral order must be even and at least 2");
            }
            *n
        }
        StandardSpec::Quaternion(n) => {
            if *n < 8 || n % 4 != 0 {
                return unsupported("quaternion order must be a multiple of 4, at least 8");
            }
            *n
        }
        StandardSpec::Symmetric(n) => {
            if *n == 0 || *n > 5 {
                return unsupported("symmetric degree must be in 1..=5");
            }
            (1..=*n).product()
        }
        StandardSpec::ElementaryAbelian { p, k } => {
            if *p < 2 || crate::abelian::factorize(*p).len() != 1 || crate::abelian::factorize(*p)[0].1 != 1 {
                return unsupported("p must be prime");
            }
            p.checked_pow(*k).unwrap_or(u64::MAX)
        }
        StandardSpec::Abelian(f) => {
            if f.contains(&0) {
                return unsupported("factors must be positive");
            }
            f.iter().try_fold(1u64, |a, &d| a.checked_mul(d)).unwrap_or(u64::MAX)
        }
        StandardSpec::DirectProduct(a, b) => predicted_order(a)?.saturating_mul(predicted_order(b)?),
    };
    if n > MAX_GROUP_ORDER as u64 {
        return Err(GroupError::TooLarge {
            order: n.min(usize::MAX as u64) as usize,
            limit: MAX_GROUP_ORDER,
        });
    }
    Ok(n)
}

/// Builds a named group with its documented element ordering.
pub fn make_standard(spec: &StandardSpec) -> Result<FiniteGroup, GroupError> {
    predicted_order(spec)?;
    Ok(match spec {
        StandardSpec::Cyclic(n) => {
            let n = *n as usize;
            let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
            let labels = (0..n).map(|a| a.to_string()).collect();
            let gens = if n > 1 { vec![1] } else { vec![] };
            FiniteGroup::from_parts(table, labels, gens, spec.clone())
        }
        StandardSpec::Dihedral(order) => dihedral(*order as usize, spec),
        StandardSpec::Quaternion(order) => dicyclic(*order as usize, spec),
        StandardSpec::Symmetric(n) => symmetric(*n as usize, spec),
        StandardSpec::ElementaryAbelian { p, k } => {
            let mut g = abelian_product(&vec![*p; *k as usize]);
            g.standard = Some(spec.clone());
            g
        }
        StandardSpec::Abelian(f) => {
            let mut g = abelian_product(f);
            g.standard = Some(spec.clone());
            g
        }
        StandardSpec::DirectProduct(a, b) => {
            let ga = make_standard(a)?;
            let gb = make_standard(b)?;
            direct_product(&ga, &gb, spec.clone())
        }
    })
}

fn dihedral(order: usize, spec: &StandardSpec) -> FiniteGroup {
    let n = order / 2;
    let idx = |a: usize, b: usize| 2 * a + b;
    let mut table = vec![vec![0; order]; order];
    for a in 0..n {
        for b in 0..2 {
            for c in 0..n {
                for d in 0..2 {
                    let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                    table[idx(a, b)][idx(c, d)] = idx(rot, (b + d) % 2);
                }
            }
        }
    }
    let labels = (0..n)
        .flat_map(|a| {
            (0..2).map(move |b| {
                let r = match a {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r^{a}"),
                };
                match (r.is_empty(), b) {
                    (true, 0) => "e".to_string(),
                    (true, _) => "s".to_string(),
                    (false, 0) => r,
                    (false, _) => format!("{r}s"),
                }
            })
        })
        .collect();
    let gens = if n > 1 { vec![idx(1, 0), idx(0, 1)] } else { vec![idx(0, 1)] };
    FiniteGroup::from_parts(table, labels, gens, spec.clone())
}

fn dicyclic(order: usize, spec: &StandardSpec) -> FiniteGroup {
    let m = order / 4;
    let n = 2 * m;
    // (k, b) stands for aᵏxᵇ with a^{2m} = 1, x² = aᵐ, x a x⁻¹ = a⁻¹.
    let mul = |(k, b): (usize, usize), (l, c): (usize, usize)| -> (usize, usize) {
        if b == 0 {
            ((k + l) % n, c)
        } else if c == 0 {
            ((k + n - l) % n, 1)
        } else {
            ((k + n - l + m) % n, 0)
        }
    };
    let (elems, labels): (Vec<(usize, usize)>, Vec<String>) = if m == 2 {
        let e = vec![(0, 0), (2, 0), (1, 0), (3, 0), (0, 1), (2, 1), (1, 1), (3, 1)];
        let l = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        (e, l)
    } else {
        let e: Vec<(usize, usize)> = (0..2).flat_map(|b| (0..n).map(move |k| (k, b))).collect();
        let l = e
            .iter()
            .map(|&(k, b)| {
                let a = match k {
                    0 => String::new(),
                    1 => "a".to_string(),
                    _ => format!("a^{k}"),
                };
                match (a.is_empty(), b) {
                    (true, 0) => "1".to_string(),
                    (true, _) => "x".to_string(),
                    (false, 0) => a,
                    (false, _) => format!("{a}x"),
                }
            })
            .collect();
        (e, l)
    };
    let pos = |x: (usize, usize)| elems.iter().position(|&y| y == x).expect("closed");
    let table = elems
        .iter()
        .map(|&a| elems.iter().map(|&b| pos(mul(a, b))).collect())
        .collect();
    let gens = vec![pos((1, 0)), pos((0, 1))];
    FiniteGroup::from_parts(table, labels, gens, spec.clone())
}

fn symmetric(n: usize, spec: &StandardSpec) -> FiniteGroup {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let pos = |q: &[usize]| perms.iter().position(|x| x.as_slice() == q).expect("closed");
    // (στ)(i) = σ(τ(i)): apply τ first.
    let table = perms
        .iter()
        .map(|s| perms.iter().map(|t| pos(&t.iter().map(|&i| s[i]).collect::<Vec<_>>())).collect())
        .collect();
    let labels = perms.iter().map(|q| cycle_label(q)).collect();
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(pos(&t));
    }
    if n >= 3 {
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        gens.push(pos(&c));
    }
    FiniteGroup::from_parts(table, labels, gens, spec.clone())
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

fn direct_product(a: &FiniteGroup, b: &FiniteGroup, spec: StandardSpec) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let table = (0..n)
        .map(|x| (0..n).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
        .collect();
    let labels = (0..n).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))).collect();
    let gens = a
        .generators()
        .iter()
        .map(|&g| g * nb + b.identity())
        .chain(b.generators().iter().map(|&h| a.identity() * nb + h))
        .collect();
    FiniteGroup::from_parts(table, labels, gens, spec)
}

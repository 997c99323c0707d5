use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Coefficients, CohomologyError};
use crate::group::FiniteGroup;

/// Enumerates `n`-tuples of group elements, either all of them or only those
/// without an identity entry. Tuples are ordered lexicographically by element index.
#[derive(Debug, Clone)]
pub(crate) struct TupleIndex {
    base: usize,
    rank: Vec<Option<usize>>,
    elems: Vec<usize>,
}

impl TupleIndex {
    pub(crate) fn new(group: &FiniteGroup, normalized: bool) -> Self {
        let elems: Vec<usize> = if normalized {
            group.non_identity().collect()
        } else {
            group.elements().collect()
        };
        let mut rank = vec![None; group.order()];
        for (i, &x) in elems.iter().enumerate() {
            rank[x] = Some(i);
        }
        TupleIndex {
            base: elems.len(),
            rank,
            elems,
        }
    }

    pub(crate) fn count(&self, n: usize) -> usize {
        self.base.pow(n as u32)
    }

    /// `None` when the tuple has an entry outside the index (the identity, when normalized).
    pub(crate) fn index(&self, t: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &x in t {
            idx = idx * self.base + self.rank[x]?;
        }
        Some(idx)
    }

    pub(crate) fn tuple_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = self.elems[idx % self.base];
            idx /= self.base;
        }
    }

    pub(crate) fn tuple(&self, idx: usize, n: usize) -> Vec<usize> {
        let mut t = vec![0; n];
        self.tuple_into(idx, &mut t);
        t
    }
}

/// A normalized `n`-cochain `Gⁿ → M`: values are stored for tuples without an
/// identity entry and are zero elsewhere.
#[derive(Debug, Clone)]
pub struct Cochain<M: Coefficients> {
    degree: usize,
    group: Arc<FiniteGroup>,
    coeffs: Arc<M>,
    index: Arc<TupleIndex>,
    values: Vec<M::Elem>,
}

impl<M: Coefficients> PartialEq for Cochain<M> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && *self.group == *other.group
            && *self.coeffs == *other.coeffs
            && self.values == other.values
    }
}

impl<M: Coefficients> Cochain<M> {
    pub fn zero(degree: usize, group: Arc<FiniteGroup>, coeffs: Arc<M>) -> Result<Self, CohomologyError> {
        Cochain::from_fn(degree, group, coeffs, |_| None)
    }

    /// Builds a cochain from `f` evaluated on each tuple without an identity
    /// entry; `None` means zero.
    pub fn from_fn(
        degree: usize,
        group: Arc<FiniteGroup>,
        coeffs: Arc<M>,
        mut f: impl FnMut(&[usize]) -> Option<M::Elem>,
    ) -> Result<Self, CohomologyError> {
        if !coeffs.compatible(&group) {
            return Err(CohomologyError::CoefficientMismatch(
                "coefficients are a module over a different group".into(),
            ));
        }
        let index = Arc::new(TupleIndex::new(&group, true));
        let mut t = vec![0; degree];
        let values = (0..index.count(degree))
            .map(|i| {
                index.tuple_into(i, &mut t);
                f(&t).unwrap_or_else(|| coeffs.zero())
            })
            .collect();
        Ok(Cochain {
            degree,
            group,
            coeffs,
            index,
            values,
        })
    }

    fn with_values(&self, degree: usize, values: Vec<M::Elem>) -> Self {
        Cochain {
            degree,
            group: self.group.clone(),
            coeffs: self.coeffs.clone(),
            index: self.index.clone(),
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coefficients(&self) -> &Arc<M> {
        &self.coeffs
    }

    /// The value at an arbitrary tuple of length `degree`.
    pub fn value(&self, t: &[usize]) -> M::Elem {
        assert_eq!(t.len(), self.degree, "tuple length differs from the degree");
        match self.index.index(t) {
            Some(i) => self.values[i].clone(),
            None => self.coeffs.zero(),
        }
    }

    /// Stored values, in lexicographic order of identity-free tuples.
    pub fn values(&self) -> &[M::Elem] {
        &self.values
    }

    /// Identity-free tuples paired with their values.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &M::Elem)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (self.index.tuple(i, self.degree), v))
    }

    pub fn is_zero(&self) -> bool {
        let z = self.coeffs.zero();
        self.values.iter().all(|v| *v == z)
    }

    fn check_same(&self, other: &Self) -> Result<(), CohomologyError> {
        if self.degree != other.degree {
            return Err(CohomologyError::CoefficientMismatch(format!(
                "degrees {} and {}",
                self.degree, other.degree
            )));
        }
        if *self.group != *other.group || *self.coeffs != *other.coeffs {
            return Err(CohomologyError::CoefficientMismatch(
                "cochains live on different groups or coefficients".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.coeffs.add(a, b))
            .collect();
        Ok(self.with_values(self.degree, values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CohomologyError> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.coeffs.sub(a, b))
            .collect();
        Ok(self.with_values(self.degree, values))
    }

    pub fn neg(&self) -> Self {
        let values = self.values.iter().map(|a| self.coeffs.neg(a)).collect();
        self.with_values(self.degree, values)
    }

    /// Pointwise image under a coefficient map into other coefficients.
    pub fn map_values<N: Coefficients>(
        &self,
        target: Arc<N>,
        mut f: impl FnMut(&M::Elem) -> N::Elem,
    ) -> Result<Cochain<N>, CohomologyError> {
        if !target.compatible(&self.group) {
            return Err(CohomologyError::CoefficientMismatch(
                "target coefficients are a module over a different group".into(),
            ));
        }
        Ok(Cochain {
            degree: self.degree,
            group: self.group.clone(),
            coeffs: target,
            index: self.index.clone(),
            values: self.values.iter().map(&mut f).collect(),
        })
    }

    /// `(df)(g₁,…,g_{n+1}) = g₁·f(g₂,…) + Σᵢ (−1)ⁱ f(…,gᵢg_{i+1},…) + (−1)^{n+1} f(g₁,…,gₙ)`.
    pub fn differential(&self) -> Self {
        let n = self.degree;
        let mut t = vec![0; n + 1];
        let mut merged = vec![0; n];
        let values = (0..self.index.count(n + 1))
            .map(|i| {
                self.index.tuple_into(i, &mut t);
                self.differential_at(&t, &mut merged)
            })
            .collect();
        self.with_values(n + 1, values)
    }

    fn differential_at(&self, t: &[usize], merged: &mut [usize]) -> M::Elem {
        let n = self.degree;
        let c = &self.coeffs;
        let g = &self.group;
        let mut acc = c.act(t[0], &self.value(&t[1..]));
        for i in 1..=n {
            merged[..i - 1].copy_from_slice(&t[..i - 1]);
            merged[i - 1] = g.mul(t[i - 1], t[i]);
            merged[i..].copy_from_slice(&t[i + 1..]);
            let v = self.value(merged);
            acc = if i % 2 == 0 { c.add(&acc, &v) } else { c.sub(&acc, &v) };
        }
        let last = self.value(&t[..n]);
        if (n + 1).is_multiple_of(2) {
            c.add(&acc, &last)
        } else {
            c.sub(&acc, &last)
        }
    }

    /// The first identity-free tuple at which `df` is nonzero, if any.
    pub fn cocycle_failure(&self) -> Option<Vec<usize>> {
        let n = self.degree;
        let zero = self.coeffs.zero();
        let mut t = vec![0; n + 1];
        let mut merged = vec![0; n];
        for i in 0..self.index.count(n + 1) {
            self.index.tuple_into(i, &mut t);
            if self.differential_at(&t, &mut merged) != zero {
                return Some(t);
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_failure().is_none()
    }

    pub(crate) fn require_cocycle(&self) -> Result<(), CohomologyError> {
        match self.cocycle_failure() {
            None => Ok(()),
            Some(t) => Err(CohomologyError::NotACocycle {
                witness: t.iter().map(|&x| self.group.label(x).to_string()).collect(),
            }),
        }
    }

    /// `{"degree": n, "values": {"g1,g2": value}}` keyed by element labels, zeros omitted.
    pub fn to_json(&self) -> CochainJson {
        let zero = self.coeffs.zero();
        let values = self
            .entries()
            .filter(|(_, v)| **v != zero)
            .map(|(t, v)| {
                let key: Vec<&str> = t.iter().map(|&x| self.group.label(x)).collect();
                (key.join(","), self.coeffs.elem_to_json(v))
            })
            .collect();
        CochainJson {
            degree: self.degree,
            values,
        }
    }

    pub fn from_json(json: &CochainJson, group: Arc<FiniteGroup>, coeffs: Arc<M>) -> Result<Self, CohomologyError> {
        let n = json.degree;
        let mut parsed: BTreeMap<Vec<usize>, M::Elem> = BTreeMap::new();
        for (key, v) in &json.values {
            let parts = split_top_level(key);
            let parts: Vec<&str> = if n == 0 && key.is_empty() { Vec::new() } else { parts };
            if parts.len() != n {
                return Err(CohomologyError::Malformed(format!("key {key:?} is not a {n}-tuple")));
            }
            let t = parts
                .iter()
                .map(|s| {
                    group
                        .element_by_label(s.trim())
                        .ok_or_else(|| CohomologyError::Malformed(format!("unknown element {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let value = coeffs
                .elem_from_json(v)
                .map_err(|e| CohomologyError::Malformed(format!("value at {key:?}: {e}")))?;
            if t.contains(&group.identity()) && value != coeffs.zero() {
                return Err(CohomologyError::Malformed(format!(
                    "nonzero value at {key:?}, which has an identity entry"
                )));
            }
            parsed.insert(t, value);
        }
        Cochain::from_fn(n, group, coeffs, |t| parsed.get(t).cloned())
    }
}

/// Splits at commas outside parentheses, so labels such as `(r,s)` survive.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub degree: usize,
    pub values: BTreeMap<String, serde_json::Value>,
}

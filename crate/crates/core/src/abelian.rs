//! Finite abelian groups by invariant factors, and explicit invariant-factor
//! bases of abelian groups given by multiplication tables.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;

/// A finite abelian group `ℤ/d₁ × … × ℤ/d_k` with `d₁ | d₂ | … | d_k`, all `dᵢ ≥ 2`.
/// The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    pub fn cyclic(n: u64) -> Self {
        AbelianGroup::from_cyclic_orders(&[n])
    }

    /// Normalizes an arbitrary product of cyclic groups to invariant factors.
    /// Orders `0` are rejected by panicking; orders `1` are dropped.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &n in orders {
            assert!(n > 0, "cyclic factor of order 0");
            for (p, e) in factorize(n) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                factors[i] *= q;
            }
        }
        factors.reverse();
        AbelianGroup {
            invariant_factors: factors,
        }
    }

    /// Builds from a list that must already satisfy the divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Option<Self> {
        let ok = factors.iter().all(|&d| d >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        ok.then_some(AbelianGroup {
            invariant_factors: factors,
        })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Direct sum, renormalized.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut all = self.invariant_factors.clone();
        all.extend_from_slice(&other.invariant_factors);
        AbelianGroup::from_cyclic_orders(&all)
    }

    /// Enumerates all coordinate vectors in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.order();
        (0..total).map(move |mut idx| {
            let mut v = vec![0u64; self.rank()];
            for (slot, &d) in v.iter_mut().zip(&self.invariant_factors).rev() {
                *slot = idx % d;
                idx /= d;
            }
            v
        })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// An explicit isomorphism between an abelian table group and `ℤ/d₁ × … × ℤ/d_k`.
#[derive(Debug, Clone)]
pub struct AbelianDecomposition {
    factors: AbelianGroup,
    basis: Vec<usize>,
    coords: Vec<Vec<u64>>,
    by_coords: BTreeMap<Vec<u64>, usize>,
}

impl AbelianDecomposition {
    /// Decomposes an abelian group. Returns `None` when `g` is not abelian.
    pub fn new(g: &FiniteGroup) -> Option<Self> {
        if !g.is_abelian() {
            return None;
        }
        let n = g.order() as u64;
        // Per prime, a basis of the p-primary part chosen greedily by maximal order modulo the span so far.
        let mut prime_bases: Vec<Vec<(usize, u64)>> = Vec::new();
        for (p, _) in factorize(n) {
            let primary: Vec<usize> = (0..g.order())
                .filter(|&x| is_power_of(g.element_order(x) as u64, p))
                .collect();
            let mut span = vec![false; g.order()];
            span[g.identity()] = true;
            let mut span_size = 1usize;
            let mut basis = Vec::new();
            while span_size < primary.len() {
                let mut best: Option<(usize, u64)> = None;
                for &y in &primary {
                    let ord = g.element_order(y) as u64;
                    let rel = order_modulo(g, y, &span);
                    if rel == ord && best.is_none_or(|(_, b)| rel > b) {
                        best = Some((y, rel));
                    }
                }
                let (y, ord) = best.expect("greedy basis step always finds a lift");
                basis.push((y, ord));
                span = closure_with(g, &span, y);
                span_size = span.iter().filter(|&&b| b).count();
            }
            basis.sort_by_key(|a| std::cmp::Reverse(a.1));
            prime_bases.push(basis);
        }
        let rank = prime_bases.iter().map(Vec::len).max().unwrap_or(0);
        let mut basis = Vec::with_capacity(rank);
        let mut orders = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut elem = g.identity();
            let mut ord = 1u64;
            for pb in &prime_bases {
                if let Some(&(y, o)) = pb.get(i) {
                    elem = g.mul(elem, y);
                    ord *= o;
                }
            }
            basis.push(elem);
            orders.push(ord);
        }
        basis.reverse();
        orders.reverse();
        let factors = AbelianGroup::from_invariant_factors(orders.clone()).expect("divisibility chain by construction");

        let mut coords = vec![Vec::new(); g.order()];
        let mut by_coords = BTreeMap::new();
        for c in factors.elements() {
            let mut x = g.identity();
            for (&b, &k) in basis.iter().zip(&c) {
                x = g.mul(x, g.pow(b, k as i64));
            }
            assert!(coords[x].is_empty(), "basis is not independent");
            coords[x] = c.clone();
            by_coords.insert(c, x);
        }
        Some(AbelianDecomposition {
            factors,
            basis,
            coords,
            by_coords,
        })
    }

    pub fn factors(&self) -> &AbelianGroup {
        &self.factors
    }

    /// Basis elements, `basis()[i]` of order `invariant_factors()[i]`.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    pub fn element(&self, coords: &[u64]) -> usize {
        let reduced: Vec<u64> = coords
            .iter()
            .zip(self.factors.invariant_factors())
            .map(|(&c, &d)| c % d)
            .collect();
        self.by_coords[&reduced]
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn order_modulo(g: &FiniteGroup, y: usize, span: &[bool]) -> u64 {
    let mut x = y;
    let mut k = 1;
    while !span[x] {
        x = g.mul(x, y);
        k += 1;
    }
    k
}

fn closure_with(g: &FiniteGroup, span: &[bool], y: usize) -> Vec<bool> {
    let mut out = span.to_vec();
    let members: Vec<usize> = (0..g.order()).filter(|&x| span[x]).collect();
    let mut power = y;
    while power != g.identity() {
        for &m in &members {
            out[g.mul(m, power)] = true;
        }
        power = g.mul(power, y);
    }
    out
}

/// `lcm` over a slice, `1` when empty.
pub fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1, |a, b| a.lcm(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_standard, StandardSpec};

    #[test]
    fn normalization() {
        assert_eq!(AbelianGroup::from_cyclic_orders(&[2, 3]).invariant_factors(), &[6]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[4, 2]).invariant_factors(), &[2, 4]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[6, 4]).invariant_factors(), &[2, 12]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[1, 1]).invariant_factors(), &[] as &[u64]);
        assert!(AbelianGroup::from_invariant_factors(vec![4, 2]).is_none());
        assert_eq!(AbelianGroup::from_cyclic_orders(&[2, 2]).to_string(), "Z/2 x Z/2");
    }

    #[test]
    fn decomposes_catalog_abelian_groups() {
        for spec in ["cyclic:12", "elementary_abelian:2,3", "cyclic:2 x cyclic:4", "cyclic:4 x cyclic:6", "cyclic:1"] {
            let g = make_standard(&spec.parse::<StandardSpec>().unwrap()).unwrap();
            let dec = AbelianDecomposition::new(&g).unwrap();
            assert_eq!(dec.factors().order(), g.order() as u64, "{spec}");
            for (i, &b) in dec.basis().iter().enumerate() {
                assert_eq!(g.element_order(b) as u64, dec.factors().invariant_factors()[i]);
            }
            for x in 0..g.order() {
                assert_eq!(dec.element(dec.coords(x)), x);
            }
        }
        let g = make_standard(&"cyclic:4 x cyclic:6".parse::<StandardSpec>().unwrap()).unwrap();
        assert_eq!(AbelianDecomposition::new(&g).unwrap().factors().invariant_factors(), &[2, 12]);
    }
}

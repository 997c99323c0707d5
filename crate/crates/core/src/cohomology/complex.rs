//! Integer matrices of the bar differential and the local subquotient computation.

use crate::gmodule::GModule;
use crate::group::FiniteGroup;
use crate::modlin::{local_snf, DenseMat, LocalRing, Track};

use super::cochain::TupleIndex;

/// Rows of an integer matrix with sorted, merged `(column, value)` entries.
#[derive(Debug, Clone)]
pub(crate) struct SparseRows {
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, i64)>>,
}

impl SparseRows {
    /// Dense reduction over `ring`, with row `r` multiplied by `row_scale[r]`.
    pub(crate) fn to_dense(&self, ring: &LocalRing, row_scale: Option<&[u64]>) -> DenseMat {
        let mut m = DenseMat::zeros(self.rows.len(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let s = row_scale.map_or(1, |s| s[r]);
            if s == 0 {
                continue;
            }
            for &(c, x) in row {
                m.set(r, c as usize, ring.mul(ring.reduce(x), s));
            }
        }
        m
    }
}

/// The matrix of `dₙ: Cⁿ(G, ℤᵏ) → C^{n+1}(G, ℤᵏ)` where `G` acts on `ℤᵏ` through
/// the integer matrices `action` (`None` for the trivial action on `ℤ`).
/// Coordinate `(tuple, i)` sits at `tuple_index · k + i`.
pub(crate) fn differential_matrix(
    group: &FiniteGroup,
    module: Option<&GModule>,
    n: usize,
    normalized: bool,
) -> SparseRows {
    let k = module.map_or(1, GModule::rank);
    let index = TupleIndex::new(group, normalized);
    let nrows = index.count(n + 1) * k;
    let ncols = index.count(n) * k;
    let mut rows = Vec::with_capacity(nrows);
    let mut t = vec![0; n + 1];
    let mut merged = vec![0; n];
    let mut entries: Vec<(u32, i64)> = Vec::new();
    for ti in 0..index.count(n + 1) {
        index.tuple_into(ti, &mut t);
        for i in 0..k {
            entries.clear();
            if let Some(c) = index.index(&t[1..]) {
                match module {
                    Some(m) => {
                        let a = m.matrix(t[0]);
                        for j in 0..k {
                            if a[i * k + j] != 0 {
                                entries.push(((c * k + j) as u32, a[i * k + j] as i64));
                            }
                        }
                    }
                    None => entries.push((c as u32, 1)),
                }
            }
            for s in 1..=n {
                merged[..s - 1].copy_from_slice(&t[..s - 1]);
                merged[s - 1] = group.mul(t[s - 1], t[s]);
                merged[s..].copy_from_slice(&t[s + 1..]);
                if let Some(c) = index.index(&merged) {
                    entries.push(((c * k + i) as u32, if s % 2 == 0 { 1 } else { -1 }));
                }
            }
            if let Some(c) = index.index(&t[..n]) {
                entries.push(((c * k + i) as u32, if (n + 1).is_multiple_of(2) { 1 } else { -1 }));
            }
            rows.push(merge(&mut entries));
        }
    }
    SparseRows { ncols, rows }
}

fn merge(entries: &mut [(u32, i64)]) -> Vec<(u32, i64)> {
    entries.sort_unstable_by_key(|&(c, _)| c);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(entries.len());
    for &(c, x) in entries.iter() {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|&(_, x)| x != 0);
    out
}

/// The `p`-primary part of a subquotient `Z/B` of `Cⁿ` over `R = ℤ/pᴱ`.
#[derive(Debug, Clone)]
pub(crate) struct LocalPiece {
    /// Cyclic summands `ℤ/pᵛ`, as `v`, nonincreasing.
    pub valuations: Vec<u32>,
    /// One representative per summand, in coordinates of `Rᵈⁱᵐ`.
    pub generators: Vec<Vec<u64>>,
}

/// Computes `Z̃/B̃` where `Cⁿ = Rᵈⁱᵐ/K` with `K = ⊕ p^{a_in[c]}R`,
/// `Z̃ = {x : dₙx ∈ K_{n+1}}` and `B̃ = im d_{n−1} + K`.
///
/// `Z̃` is the kernel of `diag(p^{E−a_out})·dₙ`. After the Smith form `U·D'·V`,
/// `V⁻¹Z̃ = ⊕ p^{cₜ}R`, and the quotient is presented by the images of `B̃`
/// in those coordinates together with the relations `p^{E−cₜ}`.
pub(crate) fn local_subquotient(
    prev: Option<&SparseRows>,
    next: &SparseRows,
    a_in: &[u32],
    a_out: &[u32],
    ring: &LocalRing,
) -> LocalPiece {
    let dim = next.ncols;
    let e = ring.exponent();
    let scale: Vec<u64> = a_out.iter().map(|&a| ring.pow_p(e - a)).collect();
    let d_scaled = next.to_dense(ring, Some(&scale));
    let snf = local_snf(
        d_scaled,
        ring,
        Track {
            u_inv: false,
            v: true,
            v_inv: true,
        },
    );
    let c: Vec<u32> = (0..dim)
        .map(|t| if t < snf.rank() { e - snf.valuations[t] } else { 0 })
        .collect();
    let v = snf.v.expect("tracked");
    let v_inv = snf.v_inv.expect("tracked");
    let active: Vec<usize> = (0..dim).filter(|&t| c[t] < e).collect();
    if active.is_empty() {
        return LocalPiece {
            valuations: Vec::new(),
            generators: Vec::new(),
        };
    }

    // Images of the generators of B̃ in the coordinates of V⁻¹Z̃.
    let mut gens: Vec<Vec<u64>> = Vec::new();
    if let Some(prev) = prev {
        let dp = prev.to_dense(ring, None);
        for col in 0..dp.cols() {
            gens.push(dp.column(col));
        }
    }
    for (cc, &a) in a_in.iter().enumerate() {
        if a < e {
            let mut b = vec![0; dim];
            b[cc] = ring.pow_p(a);
            gens.push(b);
        }
    }
    let nrel = active.len();
    let mut pres = DenseMat::zeros(nrel, gens.len() + nrel);
    for (j, b) in gens.iter().enumerate() {
        if b.iter().all(|&x| x == 0) {
            continue;
        }
        let w = v_inv.mul_vec(b, ring);
        for (row, &t) in active.iter().enumerate() {
            let pc = ring.pow_p(c[t]);
            debug_assert_eq!(w[t] % pc, 0, "boundary outside the cycles");
            pres.set(row, j, (w[t] / pc) % ring.modulus());
        }
    }
    for (row, &t) in active.iter().enumerate() {
        pres.set(row, gens.len() + row, ring.pow_p(e - c[t]));
    }
    let snf2 = local_snf(
        pres,
        ring,
        Track {
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let rank2 = snf2.rank();
    let valuations2 = snf2.valuations;
    let u_inv = snf2.u_inv.expect("tracked");
    let mut pieces: Vec<(u32, Vec<u64>)> = Vec::new();
    for t in 0..nrel {
        let val = if t < rank2 { valuations2[t] } else { e };
        if val == 0 {
            continue;
        }
        let z = u_inv.column(t);
        let mut y = vec![0u64; dim];
        for (row, &s) in active.iter().enumerate() {
            y[s] = ring.mul(z[row], ring.pow_p(c[s]));
        }
        pieces.push((val, v.mul_vec(&y, ring)));
    }
    pieces.sort_by_key(|a| std::cmp::Reverse(a.0));
    LocalPiece {
        valuations: pieces.iter().map(|p| p.0).collect(),
        generators: pieces.into_iter().map(|p| p.1).collect(),
    }
}

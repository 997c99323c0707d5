//! Linear algebra over the local rings `ℤ/pᵉ`.
//!
//! Every finite computation in the crate factors through these routines: a
//! problem over `ℤ/N` is split into its prime-power parts, solved over each
//! chain ring `ℤ/pᵉ` (where the ideals are totally ordered, so a pivot of
//! least valuation divides its whole column), and glued back by CRT.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use crate::abelian::factorize;

/// `ℤ/pᵉ` with `pᵉ < 2³²` so products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRing {
    p: u64,
    e: u32,
    q: u64,
}

impl LocalRing {
    pub fn new(p: u64, e: u32) -> Self {
        let q = p.checked_pow(e).expect("modulus overflow");
        assert!(q < (1 << 32), "modulus {q} too large");
        LocalRing { p, e, q }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    /// Valuation, `e` for zero.
    #[inline]
    pub fn val(&self, mut x: u64) -> u32 {
        x %= self.q;
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    /// Inverse of a unit.
    pub fn inv(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i64, (u % self.q) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "not a unit");
        self.reduce(t0)
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.e {
            0
        } else {
            self.p.pow(k)
        }
    }
}

/// Dense row-major matrix over some `ℤ/q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMat {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += f·row[src]`.
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: u64, ring: &LocalRing) {
        if f == 0 {
            return;
        }
        let cols = self.cols;
        let (d, s) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        for (x, &y) in d.iter_mut().zip(s) {
            if y != 0 {
                *x = (*x + f * y) % ring.q;
            }
        }
    }

    /// `col[dst] += f·col[src]`.
    fn add_col_multiple(&mut self, dst: usize, src: usize, f: u64, ring: &LocalRing) {
        if f == 0 {
            return;
        }
        for r in 0..self.rows {
            let y = self.data[r * self.cols + src];
            if y != 0 {
                let x = &mut self.data[r * self.cols + dst];
                *x = (*x + f * y) % ring.q;
            }
        }
    }

    /// `self · v` over the ring.
    pub fn mul_vec(&self, v: &[u64], ring: &LocalRing) -> Vec<u64> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b % ring.q) % ring.q)
            })
            .collect()
    }
}

/// Which transforms [`local_snf`] should accumulate.
#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

/// `U·A·V = diag(p^{v₀}·u₀, …, p^{v_{r-1}}·u_{r-1}, 0, …)` with units `uₜ`.
#[derive(Debug, Clone)]
pub struct LocalSnf {
    pub valuations: Vec<u32>,
    /// The pivots `pᵛ·u` themselves.
    pub diagonal: Vec<u64>,
    pub u_inv: Option<DenseMat>,
    pub v: Option<DenseMat>,
    pub v_inv: Option<DenseMat>,
}

impl LocalSnf {
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }
}

/// Smith form over `ℤ/pᵉ` by full pivoting on least valuation.
pub fn local_snf(mut a: DenseMat, ring: &LocalRing, track: Track) -> LocalSnf {
    let (m, n) = (a.rows, a.cols);
    let mut u_inv = track.u_inv.then(|| DenseMat::identity(m));
    let mut v = track.v.then(|| DenseMat::identity(n));
    let mut v_inv = track.v_inv.then(|| DenseMat::identity(n));
    let mut valuations = Vec::new();
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for r in t..m {
            for c in t..n {
                let x = a.get(r, c);
                if x != 0 {
                    let val = ring.val(x);
                    if best.is_none_or(|(_, _, b)| val < b) {
                        best = Some((r, c, val));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((r, c, val)) = best else { break };
        a.swap_rows(t, r);
        if let Some(ui) = u_inv.as_mut() {
            ui.swap_cols(t, r);
        }
        a.swap_cols(t, c);
        if let Some(vm) = v.as_mut() {
            vm.swap_cols(t, c);
        }
        if let Some(vi) = v_inv.as_mut() {
            vi.swap_rows(t, c);
        }
        let pv = ring.p.pow(val);
        let unit = a.get(t, t) / pv;
        let unit_inv = ring.inv(unit);
        for i in t + 1..m {
            let x = a.get(i, t);
            if x != 0 {
                let f = ring.mul(x / pv, unit_inv);
                // row_i -= f·row_t  ⇒  U⁻¹: col_t += f·col_i
                a.add_row_multiple(i, t, ring.q - f, ring);
                if let Some(ui) = u_inv.as_mut() {
                    ui.add_col_multiple(t, i, f, ring);
                }
            }
        }
        for j in t + 1..n {
            let x = a.get(t, j);
            if x != 0 {
                let f = ring.mul(x / pv, unit_inv);
                // col_j -= f·col_t  ⇒  V: col_j -= f·col_t, V⁻¹: row_t += f·row_j
                a.set(t, j, 0);
                if let Some(vm) = v.as_mut() {
                    vm.add_col_multiple(j, t, ring.q - f, ring);
                }
                if let Some(vi) = v_inv.as_mut() {
                    vi.add_row_multiple(t, j, f, ring);
                }
            }
        }
        valuations.push(val);
        diagonal.push(a.get(t, t));
    }
    LocalSnf {
        valuations,
        diagonal,
        u_inv,
        v,
        v_inv,
    }
}

/// Solves `A x = b` over `ℤ/pᵉ`; `None` when inconsistent.
pub fn local_solve(a: &DenseMat, b: &[u64], ring: &LocalRing) -> Option<Vec<u64>> {
    let (m, n) = (a.rows, a.cols);
    let mut aug = DenseMat::zeros(m, n + 1);
    for r in 0..m {
        for c in 0..n {
            aug.set(r, c, a.get(r, c) % ring.q);
        }
        aug.set(r, n, b[r] % ring.q);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<u32> = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for r in t..m {
            for c in t..n {
                let x = aug.get(r, c);
                if x != 0 {
                    let val = ring.val(x);
                    if best.is_none_or(|(_, _, bv)| val < bv) {
                        best = Some((r, c, val));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((r, c, val)) = best else { break };
        aug.swap_rows(t, r);
        aug.swap_cols(t, c);
        perm.swap(t, c);
        let pv = ring.p.pow(val);
        let unit_inv = ring.inv(aug.get(t, t) / pv);
        for i in t + 1..m {
            let x = aug.get(i, t);
            if x != 0 {
                let f = ring.mul(x / pv, unit_inv);
                aug.add_row_multiple(i, t, ring.q - f, ring);
            }
        }
        pivots.push(val);
    }
    let rank = pivots.len();
    if (rank..m).any(|r| aug.get(r, n) != 0) {
        return None;
    }
    let mut y = vec![0u64; n];
    for t in (0..rank).rev() {
        let mut rhs = aug.get(t, n);
        for j in t + 1..n {
            rhs = ring.sub(rhs, ring.mul(aug.get(t, j), y[j]));
        }
        let pv = ring.p.pow(pivots[t]);
        if !rhs.is_multiple_of(pv) {
            return None;
        }
        let unit_inv = ring.inv(aug.get(t, t) / pv);
        y[t] = ring.mul(rhs / pv, unit_inv);
    }
    let mut x = vec![0u64; n];
    for (t, &col) in perm.iter().enumerate() {
        x[col] = y[t];
    }
    Some(x)
}

/// Valuations of the nonzero Smith invariants of a sparse integer matrix over
/// `ℤ/pᵉ`. Level by level: eliminate every unit pivot, then divide the
/// (necessarily `p`-divisible) Schur complement by `p`.
pub fn sparse_local_valuations(rows: &[Vec<(u32, i64)>], ncols: usize, ring: &LocalRing) -> Vec<u32> {
    let mut current: Vec<Vec<(u32, u64)>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<(u32, u64)> = r
                .iter()
                .map(|&(c, x)| (c, ring.reduce(x)))
                .filter(|&(_, x)| x != 0)
                .collect();
            v.sort_unstable_by_key(|&(c, _)| c);
            v
        })
        .filter(|r| !r.is_empty())
        .collect();
    let mut out = Vec::new();
    let mut work = vec![0u64; ncols];
    let mut in_heap = vec![false; ncols];
    for level in 0..ring.e {
        if current.is_empty() {
            break;
        }
        let lr = LocalRing::new(ring.p, ring.e - level);
        let mut count = vec![0u32; ncols];
        for row in &current {
            for &(c, _) in row {
                count[c as usize] += 1;
            }
        }
        current.sort_by_key(Vec::len);
        let mut pivot_at: Vec<u32> = vec![u32::MAX; ncols];
        let mut pivots: Vec<Vec<(u32, u64)>> = Vec::new();
        let mut rest: Vec<Vec<(u32, u64)>> = Vec::new();
        for row in current.drain(..) {
            let reduced = reduce_sparse(row, &pivots, &pivot_at, &mut work, &mut in_heap, &lr);
            if reduced.is_empty() {
                continue;
            }
            match reduced
                .iter()
                .filter(|&&(_, x)| x % lr.p != 0)
                .min_by_key(|&&(c, _)| count[c as usize])
            {
                Some(&(col, x)) => {
                    let inv = lr.inv(x);
                    let normalized: Vec<(u32, u64)> = reduced.iter().map(|&(c, y)| (c, lr.mul(y, inv))).collect();
                    pivot_at[col as usize] = pivots.len() as u32;
                    pivots.push(normalized);
                }
                None => rest.push(reduced),
            }
        }
        out.extend(std::iter::repeat_n(level, pivots.len()));
        for row in rest {
            let reduced = reduce_sparse(row, &pivots, &pivot_at, &mut work, &mut in_heap, &lr);
            let divided: Vec<(u32, u64)> = reduced
                .into_iter()
                .map(|(c, x)| {
                    debug_assert_eq!(x % lr.p, 0);
                    (c, x / lr.p)
                })
                .filter(|&(_, x)| x != 0)
                .collect();
            if !divided.is_empty() {
                current.push(divided);
            }
        }
    }
    out
}

fn reduce_sparse(
    row: Vec<(u32, u64)>,
    pivots: &[Vec<(u32, u64)>],
    pivot_at: &[u32],
    work: &mut [u64],
    in_heap: &mut [bool],
    ring: &LocalRing,
) -> Vec<(u32, u64)> {
    if pivots.is_empty() {
        return row;
    }
    let mut touched: Vec<u32> = Vec::with_capacity(row.len() * 4);
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
    for &(c, x) in &row {
        work[c as usize] = x;
        touched.push(c);
        let pi = pivot_at[c as usize];
        if pi != u32::MAX {
            heap.push(Reverse((pi, c)));
            in_heap[c as usize] = true;
        }
    }
    while let Some(Reverse((pi, c))) = heap.pop() {
        in_heap[c as usize] = false;
        let f = work[c as usize];
        if f == 0 {
            continue;
        }
        let neg = ring.q - f;
        for &(cc, y) in &pivots[pi as usize] {
            let slot = &mut work[cc as usize];
            if *slot == 0 {
                touched.push(cc);
            }
            *slot = (*slot + neg * y) % ring.q;
            let pj = pivot_at[cc as usize];
            if pj != u32::MAX && pj > pi && *slot != 0 && !in_heap[cc as usize] {
                heap.push(Reverse((pj, cc)));
                in_heap[cc as usize] = true;
            }
        }
    }
    touched.sort_unstable();
    touched.dedup();
    let mut out = Vec::new();
    for c in touched {
        let x = std::mem::take(&mut work[c as usize]);
        if x != 0 {
            out.push((c, x));
        }
    }
    out
}

/// Solves `A x ≡ b (mod N)` for an integer matrix by CRT over the prime powers of `N`.
pub fn solve_mod(a_rows: &[Vec<i64>], ncols: usize, b: &[i64], modulus: u64) -> Option<Vec<u64>> {
    let mut solution = vec![0u64; ncols];
    let mut acc_mod = 1u64;
    for (p, e) in factorize(modulus) {
        let ring = LocalRing::new(p, e);
        let mut a = DenseMat::zeros(a_rows.len(), ncols);
        for (r, row) in a_rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                a.set(r, c, ring.reduce(x));
            }
        }
        let rhs: Vec<u64> = b.iter().map(|&x| ring.reduce(x)).collect();
        let part = local_solve(&a, &rhs, &ring)?;
        for (s, &x) in solution.iter_mut().zip(&part) {
            *s = crt_pair(*s, acc_mod, x, ring.q);
        }
        acc_mod *= ring.q;
    }
    Some(solution)
}

/// The unique `x mod m·n` with `x ≡ a (mod m)`, `x ≡ b (mod n)` for coprime `m`, `n`.
pub fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if m == 1 {
        return b % n;
    }
    let mn = m as u128 * n as u128;
    // x = a + m·k with m·k ≡ b − a (mod n)
    let minv = LocalRing::inverse_mod(m % n, n);
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u128;
    let k = diff * minv as u128 % n as u128;
    ((a as u128 + m as u128 * k) % mn) as u64
}

impl LocalRing {
    fn inverse_mod(u: u64, n: u64) -> u64 {
        if n == 1 {
            return 0;
        }
        let (mut r0, mut r1) = (n as i128, u as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        assert_eq!(r0, 1, "moduli are not coprime");
        t0.rem_euclid(n as i128) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smith;
    use proptest::prelude::*;

    fn to_dense(m: &[Vec<i64>], ring: &LocalRing) -> DenseMat {
        let cols = m.first().map_or(0, Vec::len);
        let mut d = DenseMat::zeros(m.len(), cols);
        for (r, row) in m.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                d.set(r, c, ring.reduce(x));
            }
        }
        d
    }

    /// p-adic valuations of the nonzero invariant factors, truncated at e.
    fn oracle_valuations(m: &[Vec<i64>], p: u64, e: u32) -> Vec<u32> {
        let mut v: Vec<u32> = smith::invariant_factors(m)
            .iter()
            .map(|d| {
                let mut d = d.clone();
                let mut k = 0;
                let pb = num_bigint::BigInt::from(p);
                while k < e && (&d % &pb) == num_bigint::BigInt::from(0) {
                    d /= &pb;
                    k += 1;
                }
                k
            })
            .filter(|&k| k < e)
            .collect();
        v.sort_unstable();
        v
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r))
    }

    proptest! {
        #[test]
        fn dense_matches_integer_smith(m in arb_matrix(), pe in prop::sample::select(vec![(2u64, 3u32), (3, 2), (2, 1), (5, 1)])) {
            let ring = LocalRing::new(pe.0, pe.1);
            let snf = local_snf(to_dense(&m, &ring), &ring, Track::default());
            let mut got = snf.valuations.clone();
            got.sort_unstable();
            prop_assert_eq!(got, oracle_valuations(&m, pe.0, pe.1));
        }

        #[test]
        fn sparse_matches_integer_smith(m in arb_matrix(), pe in prop::sample::select(vec![(2u64, 3u32), (3, 2), (2, 2)])) {
            let ring = LocalRing::new(pe.0, pe.1);
            let rows: Vec<Vec<(u32, i64)>> = m.iter().map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c as u32, x)).collect()).collect();
            let mut got = sparse_local_valuations(&rows, m[0].len(), &ring);
            got.sort_unstable();
            prop_assert_eq!(got, oracle_valuations(&m, pe.0, pe.1));
        }

        #[test]
        fn transforms_are_consistent(m in arb_matrix()) {
            let ring = LocalRing::new(2, 3);
            let a = to_dense(&m, &ring);
            let snf = local_snf(a.clone(), &ring, Track { u_inv: true, v: true, v_inv: true });
            let v = snf.v.unwrap();
            let vi = snf.v_inv.unwrap();
            let n = a.cols();
            for i in 0..n {
                let col: Vec<u64> = vi.column(i);
                let back = v.mul_vec(&col, &ring);
                for (j, &x) in back.iter().enumerate() {
                    prop_assert_eq!(x, u64::from(i == j));
                }
            }
            // A·V = U⁻¹·diag
            let ui = snf.u_inv.unwrap();
            for (t, &d) in snf.diagonal.iter().enumerate() {
                let av = a.mul_vec(&v.column(t), &ring);
                let expect: Vec<u64> = ui.column(t).iter().map(|&x| ring.mul(x, d)).collect();
                prop_assert_eq!(av, expect);
            }
            for t in snf.valuations.len()..n {
                let av = a.mul_vec(&v.column(t), &ring);
                prop_assert!(av.iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn solve_finds_solutions_of_consistent_systems(m in arb_matrix(), seed in proptest::collection::vec(0u64..36, 7)) {
            let n = m[0].len();
            let modulus = 36u64;
            let x: Vec<i64> = seed.iter().take(n).map(|&s| s as i64).collect();
            let x = if x.len() < n { [x, vec![0; n]].concat()[..n].to_vec() } else { x };
            let b: Vec<i64> = m.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
            let sol = solve_mod(&m, n, &b, modulus).expect("consistent by construction");
            for (r, row) in m.iter().enumerate() {
                let lhs: i64 = row.iter().zip(&sol).map(|(&a, &y)| a * y as i64).sum();
                prop_assert_eq!(lhs.rem_euclid(36), b[r].rem_euclid(36));
            }
        }
    }

    #[test]
    fn inconsistent_system() {
        // 2x = 1 mod 4
        assert!(solve_mod(&[vec![2]], 1, &[1], 4).is_none());
        assert_eq!(solve_mod(&[vec![2]], 1, &[2], 4).map(|x| x[0] % 2), Some(1));
        assert!(solve_mod(&[vec![0], vec![0]], 1, &[0, 3], 6).is_none());
    }

    #[test]
    fn crt() {
        assert_eq!(crt_pair(1, 4, 2, 9), 29);
        assert_eq!(crt_pair(0, 1, 5, 7), 5);
    }
}

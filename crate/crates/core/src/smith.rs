//! Exact Smith normal form over ℤ with arbitrary-precision entries.
//!
//! Used for small matrices where exactness matters more than speed, and as an
//! independent check on the local elimination in [`crate::modlin`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors `d₁ | d₂ | …` of an integer matrix.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot on the smallest nonzero magnitude in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(t) {
            for (c, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        a.swap(t, r);
        for row in a.iter_mut() {
            row.swap(t, c);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                clean &= a[i][t].is_zero();
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                clean &= a[t][j].is_zero();
            }
        }
        if clean {
            diag.push(a[t][t].abs());
            t += 1;
        }
    }
    // Enforce the divisibility chain.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Invariant factors greater than one: the torsion of the cokernel.
pub fn cokernel_torsion(m: &[Vec<i64>]) -> Vec<BigInt> {
    invariant_factors(m).into_iter().filter(|d| !d.is_one()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn known_forms() {
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]), ints(&[1, 6]));
        assert_eq!(invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&[vec![0, 0], vec![0, 0]]), ints(&[]));
        assert_eq!(cokernel_torsion(&[vec![1, 2], vec![3, 4]]), ints(&[2]));
    }
}

//! Built-in groups for regression runs, and the extension problems they carry.

use std::sync::Arc;

use crate::group::{all_subgroups, make_standard, FiniteGroup, StandardSpec};
use crate::pivotal::{characters_of, ExtensionProblem};

fn spec(s: &str) -> StandardSpec {
    s.parse().expect("catalog spec")
}

/// Cyclic up to 16, dihedral and quaternion up to 16, symmetric up to degree 4,
/// elementary abelian up to 16.
pub fn base_catalog() -> Vec<StandardSpec> {
    let mut out: Vec<StandardSpec> = (1..=16).map(StandardSpec::Cyclic).collect();
    out.extend([4, 6, 8, 10, 12, 14, 16].map(StandardSpec::Dihedral));
    out.extend([8, 12, 16].map(StandardSpec::Quaternion));
    out.extend([3, 4].map(StandardSpec::Symmetric));
    out.extend([(2, 2), (2, 3), (2, 4), (3, 2)].map(|(p, k)| StandardSpec::ElementaryAbelian { p, k }));
    out
}

/// Base groups of order at least 2 times small factors, up to order 64.
pub fn product_catalog() -> Vec<StandardSpec> {
    let right = ["cyclic:2", "cyclic:3", "cyclic:4", "elementary_abelian:2,2", "symmetric:3"];
    let mut out = Vec::new();
    for left in base_catalog() {
        let lo = make_standard(&left).expect("catalog group").order();
        for r in right {
            let r = spec(r);
            let ro = make_standard(&r).expect("catalog group").order();
            if lo >= 2 && lo * ro <= 64 {
                out.push(StandardSpec::DirectProduct(Box::new(left.clone()), Box::new(r)));
            }
        }
    }
    out
}

pub fn catalog() -> Vec<StandardSpec> {
    let mut out = base_catalog();
    out.extend(product_catalog());
    out
}

/// Catalog groups of order at most `max_order`.
pub fn catalog_groups(max_order: usize) -> Vec<(StandardSpec, Arc<FiniteGroup>)> {
    catalog()
        .into_iter()
        .filter_map(|s| {
            let g = make_standard(&s).expect("catalog group");
            (g.order() <= max_order).then(|| (s, Arc::new(g)))
        })
        .collect()
}

/// Every `(D, C, χ)` with `D` in the catalog, `C` normal abelian and `χ ∈ Ĉ`.
pub fn catalog_problems(max_order: usize) -> Vec<(StandardSpec, ExtensionProblem)> {
    let mut out = Vec::new();
    for (s, d) in catalog_groups(max_order) {
        for c in all_subgroups(&d) {
            if !c.is_normal() || !c.is_abelian() {
                continue;
            }
            let cg = Arc::new(c.to_group().0);
            for chi in characters_of(&cg) {
                let prob = ExtensionProblem::new(Arc::clone(&d), c.clone(), chi).expect("catalog problem");
                out.push((s.clone(), prob));
            }
        }
    }
    out
}

/// Products of cyclic groups of order at most `max_order`, one per isomorphism class.
pub fn abelian_groups_up_to(max_order: u64) -> Vec<StandardSpec> {
    fn chains(rest: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        let mut d = min;
        while d <= rest {
            if rest.is_multiple_of(d) && acc.last().is_none_or(|&l| d.is_multiple_of(l)) {
                acc.push(d);
                chains(rest / d, d, acc, out);
                acc.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    for n in 1..=max_order {
        let mut found = Vec::new();
        chains(n, 2, &mut Vec::new(), &mut found);
        out.extend(found.into_iter().map(StandardSpec::Abelian));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds() {
        let all = catalog();
        assert!(all.iter().all(|s| make_standard(s).unwrap().order() <= 64));
        assert!(all.iter().any(|s| s.to_string() == "dihedral:8 x cyclic:3"));
    }

    #[test]
    fn abelian_classes() {
        let counts: Vec<usize> = (1..=12)
            .map(|n| abelian_groups_up_to(n).len() - abelian_groups_up_to(n - 1).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2]);
    }
}

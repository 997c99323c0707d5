use std::collections::BTreeSet;
use std::time::Instant;

use pivext::catalog::catalog_problems;
use pivext::pivotal::extend_character;
use pivext::{FiniteGroup, QZ};

// Hom(D, ℚ/ℤ) by trying every assignment of μ_exp values to the generators and
// keeping those that spread consistently along right multiplication.
fn hom_oracle(d: &FiniteGroup) -> Vec<Vec<QZ>> {
    let gens = d.generators().to_vec();
    let e = d.exponent();
    let mut out = Vec::new();
    let mut assign = vec![0u64; gens.len()];
    loop {
        let mut val: Vec<Option<QZ>> = vec![None; d.order()];
        val[d.identity()] = Some(QZ::ZERO);
        let mut queue = vec![d.identity()];
        let mut ok = true;
        while let Some(x) = queue.pop() {
            for (&g, &a) in gens.iter().zip(&assign) {
                let y = d.mul(x, g);
                let v = val[x].unwrap() + QZ::new(a as i64, e);
                match val[y] {
                    None => {
                        val[y] = Some(v);
                        queue.push(y);
                    }
                    Some(w) if w != v => ok = false,
                    _ => {}
                }
            }
        }
        if ok {
            out.push(val.into_iter().map(Option::unwrap).collect());
        }
        let mut i = 0;
        while i < assign.len() {
            assign[i] += 1;
            if assign[i] < e {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == assign.len() {
            break;
        }
    }
    out
}

#[test]
fn extensions_form_a_torsor_matching_the_oracle() {
    let t = Instant::now();
    let problems = catalog_problems(24);
    let mut unobstructed = 0;
    let mut cache: Vec<(String, Vec<Vec<QZ>>)> = Vec::new();
    for (spec, prob) in &problems {
        let r = extend_character(prob).unwrap();
        if !(r.o1_trivial && r.o2_trivial == Some(true)) {
            assert!(r.extensions.is_empty());
            continue;
        }
        unobstructed += 1;
        let key = spec.to_string();
        if cache.last().is_none_or(|(k, _)| *k != key) {
            cache.push((key.clone(), hom_oracle(prob.d())));
        }
        let homs = &cache.last().unwrap().1;
        let embedding = prob.embedding();
        let expected: BTreeSet<Vec<QZ>> = homs
            .iter()
            .filter(|psi| embedding.iter().enumerate().all(|(i, &x)| psi[x] == prob.chi().value(i)))
            .cloned()
            .collect();
        let got: BTreeSet<Vec<QZ>> = r.extensions.iter().map(|c| c.values().to_vec()).collect();
        assert_eq!(got.len(), r.extensions.len());
        assert_eq!(r.extensions.len() as u64, r.torsor_size, "{key}");
        assert_eq!(got, expected, "{key}");
    }
    eprintln!("{} problems, {unobstructed} unobstructed, {:?}", problems.len(), t.elapsed());
    assert!(unobstructed > 0);
}

use std::collections::BTreeSet;

use crate::ternary::{Meta, TernaryWord, TruthTable};

/// All prime implicants of `f`, as cubes whose `M` digits mark absent
/// variables, in canonical order. Quine–McCluskey: merge implicants that
/// differ in one literal until nothing merges; the unmerged ones are prime.
pub fn prime_implicants(f: &TruthTable) -> Vec<TernaryWord> {
    let m = f.arity();
    let mut level: BTreeSet<TernaryWord> = (0..1u64 << m)
        .filter(|&x| f.eval(x))
        .map(|x| TernaryWord::from_bits(m, x))
        .collect();
    let mut primes = BTreeSet::new();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        for a in &level {
            for p in 0..m {
                if a.get(p) == Meta {
                    continue;
                }
                let b = a.clone().with(p, !a.get(p));
                if level.contains(&b) {
                    next.insert(a.clone().with(p, Meta));
                    merged.insert(a.clone());
                }
            }
        }
        primes.extend(level.into_iter().filter(|a| !merged.contains(a)));
        level = next;
    }
    primes.into_iter().collect()
}

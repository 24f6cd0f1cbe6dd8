use std::collections::BTreeMap;

use crate::error::{Budget, Error, Result};
use crate::executor::{implements, Verdict};
use crate::function::FunctionSpec;
use crate::netlist::{Circuit, GateKind, Netlist, RegisterType};
use crate::ternary::{Meta, One, TernaryWord, TruthTable, Zero};

use super::{is_natural, prime_implicants};

/// Builds a one-round circuit with simple registers implementing the
/// natural specification `h`. Inputs are `x0..`, outputs `y0..`.
///
/// Each output bit is a constant gate if its entries are all `0`, all `1`
/// or all "any"; otherwise an OR over one AND per prime implicant of the
/// Boolean function that is 1 exactly where `h` demands 1 on stable inputs.
/// Negated literals come from shared NOT gates.
pub fn synthesize(h: &FunctionSpec, budget: &Budget) -> Result<Circuit> {
    if !is_natural(h) {
        return Err(Error::NotNatural);
    }
    let h = h.to_natural_form().expect("natural");
    let (m, n) = (h.inputs(), h.outputs());
    let mut net = Netlist::new("synth");
    for j in 0..m {
        net.input(format!("x{j}"), RegisterType::Simple);
    }
    for i in 0..n {
        net.output(format!("y{i}"), RegisterType::Simple, Zero);
    }

    let values: Vec<TernaryWord> = TernaryWord::all(m)
        .map(|x| h.natural_value(&x).expect("natural").clone())
        .collect();
    let mut negated: BTreeMap<usize, String> = BTreeMap::new();
    for i in 0..n {
        let first = values[0].get(i);
        let driver = if values.iter().all(|v| v.get(i) == first) {
            let kind = if first == One {
                GateKind::Const1
            } else {
                GateKind::Const0
            };
            constant(&mut net, i, kind)
        } else {
            let f_b = TruthTable::from_fn(m, |y| {
                values[TernaryWord::from_bits(m, y).ternary_index()].get(i) == One
            });
            two_level(&mut net, i, &f_b, &mut negated)
        };
        net.drive(format!("y{i}"), driver);
    }
    // NOT gates are created on demand; move them to the front for
    // readability of the emitted netlist.
    net.gates.sort_by_key(|g| !g.0.starts_with('n'));
    let c = net.build()?;
    match implements(&c, 1, &h, budget)? {
        Verdict::Implements => Ok(c),
        Verdict::Counterexample { input, output } => Err(Error::Internal(format!(
            "synthesized circuit outputs {output} on {input}"
        ))),
    }
}

fn constant(net: &mut Netlist, bit: usize, kind: GateKind) -> String {
    let id = format!("c{bit}");
    net.gate(&id, kind, &[] as &[&str]);
    id
}

fn two_level(net: &mut Netlist, bit: usize, f: &TruthTable, negated: &mut BTreeMap<usize, String>) -> String {
    let primes = prime_implicants(f);
    if primes.is_empty() {
        return constant(net, bit, GateKind::Const0);
    }
    if primes.iter().any(|p| p.meta_count() == p.width()) {
        return constant(net, bit, GateKind::Const1);
    }
    let mut terms = Vec::with_capacity(primes.len());
    for (t, p) in primes.iter().enumerate() {
        let literals: Vec<String> = (0..p.width())
            .filter(|&j| p.get(j) != Meta)
            .map(|j| {
                if p.get(j) == One {
                    format!("x{j}")
                } else {
                    negated
                        .entry(j)
                        .or_insert_with(|| {
                            let id = format!("n{j}");
                            net.gate(&id, GateKind::Not, &[format!("x{j}")]);
                            id
                        })
                        .clone()
                }
            })
            .collect();
        if literals.len() == 1 {
            terms.push(literals[0].clone());
        } else {
            let id = format!("a{bit}_{t}");
            net.gate(&id, GateKind::And, &literals);
            terms.push(id);
        }
    }
    if terms.len() == 1 {
        return terms.pop().expect("one term");
    }
    let id = format!("o{bit}");
    net.gate(&id, GateKind::Or, &terms);
    id
}

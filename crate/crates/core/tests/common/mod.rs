//! Shared helpers for the integration suites: a seeded random-circuit
//! generator and a two-valued reference evaluator.
#![allow(dead_code)]

use mc_core::netlist::{Circuit, GateKind, Netlist, RegisterType, Source};
use mc_core::ternary::{Ternary, TernaryWord};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod invariants;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_registers: usize,
    pub max_inputs: usize,
    pub max_gates: usize,
    pub masking: bool,
}

impl Shape {
    pub fn simple(max_registers: usize) -> Self {
        Shape {
            max_registers,
            max_inputs: 4,
            max_gates: 6,
            masking: false,
        }
    }

    pub fn masking(max_registers: usize) -> Self {
        Shape {
            masking: true,
            ..Shape::simple(max_registers)
        }
    }
}

const KINDS: [GateKind; 7] = [
    GateKind::And,
    GateKind::Or,
    GateKind::Nand,
    GateKind::Nor,
    GateKind::Xor,
    GateKind::Not,
    GateKind::Buf,
];

fn register_type(rng: &mut ChaCha8Rng, masking: bool) -> RegisterType {
    if masking {
        *[RegisterType::Simple, RegisterType::Mask0, RegisterType::Mask1]
            .choose(rng)
            .expect("nonempty")
    } else {
        RegisterType::Simple
    }
}

/// A random valid circuit with at least one output register.
pub fn random_circuit(rng: &mut ChaCha8Rng, shape: Shape) -> Circuit {
    assert!(shape.max_registers >= 1);
    let total = rng.gen_range(1..=shape.max_registers);
    let n = rng.gen_range(1..=total);
    let m = rng.gen_range(0..=(total - n).min(shape.max_inputs));
    let k = total - n - m;
    let gates = rng.gen_range(0..=shape.max_gates);
    build(rng, [m, k, n], gates, shape.masking)
}

/// A random all-simple circuit with exactly `m` inputs and `n` outputs and
/// no local registers.
pub fn random_combinational(rng: &mut ChaCha8Rng, m: usize, n: usize, max_gates: usize) -> Circuit {
    let gates = rng.gen_range(0..=max_gates);
    build(rng, [m, 0, n], gates, false)
}

fn build(rng: &mut ChaCha8Rng, [m, k, n]: [usize; 3], gates: usize, masking: bool) -> Circuit {
    let mut nl = Netlist::new("random");
    let mut pool: Vec<String> = Vec::new();
    for i in 0..m {
        let t = register_type(rng, masking);
        nl.input(format!("i{i}"), t);
        pool.push(format!("i{i}"));
    }
    for i in 0..k {
        let (t, init) = (
            register_type(rng, masking),
            *Ternary::ALL.choose(rng).expect("nonempty"),
        );
        nl.local(format!("l{i}"), t, init);
        pool.push(format!("l{i}"));
    }
    for i in 0..n {
        let (t, init) = (
            register_type(rng, masking),
            *Ternary::ALL.choose(rng).expect("nonempty"),
        );
        nl.output(format!("o{i}"), t, init);
    }
    for g in 0..gates {
        let id = format!("g{g}");
        if pool.is_empty() {
            let kind = if rng.gen_bool(0.5) {
                GateKind::Const0
            } else {
                GateKind::Const1
            };
            nl.gate(&id, kind, &[] as &[&str]);
        } else {
            let kind = KINDS.choose(rng).expect("nonempty").clone();
            let arity = kind.fan_in().unwrap_or_else(|| rng.gen_range(2..=3));
            let sources: Vec<&String> = (0..arity).map(|_| pool.choose(rng).expect("nonempty")).collect();
            nl.gate(&id, kind, &sources);
        }
        pool.push(id);
    }
    if pool.is_empty() {
        nl.gate("c", GateKind::Const0, &[] as &[&str]);
        pool.push("c".into());
    }
    for name in (0..k).map(|i| format!("l{i}")).chain((0..n).map(|i| format!("o{i}"))) {
        let src = pool.choose(rng).expect("nonempty").clone();
        nl.drive(name, src);
    }
    nl.build().expect("generated circuits are valid")
}

/// Two-valued evaluation of the combinational logic, independent of the
/// library's topological order.
pub fn bool_eval(c: &Circuit, read: &[bool]) -> Vec<bool> {
    fn value(c: &Circuit, read: &[bool], memo: &mut [Option<bool>], s: Source) -> bool {
        match s {
            Source::Register(i) => read[i],
            Source::Gate(g) => {
                if let Some(v) = memo[g] {
                    return v;
                }
                let gate = &c.gates()[g];
                let args: Vec<bool> = gate.inputs.iter().map(|&s| value(c, read, memo, s)).collect();
                let v = match &gate.kind {
                    GateKind::And => args.iter().all(|&b| b),
                    GateKind::Or => args.iter().any(|&b| b),
                    GateKind::Nand => !args.iter().all(|&b| b),
                    GateKind::Nor => !args.iter().any(|&b| b),
                    GateKind::Xor => args[0] ^ args[1],
                    GateKind::Not => !args[0],
                    GateKind::Buf => args[0],
                    GateKind::Const0 => false,
                    GateKind::Const1 => true,
                    GateKind::Table(t) => {
                        let idx = args.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
                        t.eval(idx)
                    }
                };
                memo[g] = Some(v);
                v
            }
        }
    }
    let mut memo = vec![None; c.gates().len()];
    c.drives().iter().map(|&s| value(c, read, &mut memo, s)).collect()
}

pub fn to_bools(w: &TernaryWord) -> Vec<bool> {
    w.iter().map(|d| d.to_bool().expect("stable")).collect()
}

pub fn from_bools(bits: &[bool]) -> TernaryWord {
    TernaryWord::from_digits(bits.iter().map(|&b| Ternary::from_bool(b)))
}

mod common;

use common::{invariants, random_circuit, rng, Shape};
use mc_core::executor::{outputs, reach};
use mc_core::netlist::Circuit;
use mc_core::ternary::TernaryWord;
use mc_core::Budget;

const CIRCUITS: u64 = 120;

fn budget() -> Budget {
    Budget::default()
}

fn circuits(seed: u64, shape: Shape) -> impl Iterator<Item = Circuit> {
    let mut r = rng(seed);
    (0..CIRCUITS).map(move |_| random_circuit(&mut r, shape))
}

fn holds(check: fn(&Circuit, &Budget) -> mc_core::Result<invariants::Check>, seed: u64, shape: Shape) {
    for c in circuits(seed, shape) {
        if let Err(e) = check(&c, &budget()).unwrap() {
            panic!("{e}");
        }
    }
}

#[test]
fn simple_reads_are_deterministic() {
    holds(invariants::simple_reads, 1, Shape::simple(6));
}

#[test]
fn reads_include_the_state_and_refine_it() {
    holds(invariants::reads_refine_state, 2, Shape::masking(6));
}

#[test]
fn masking_registers_write_like_simple_ones() {
    holds(invariants::writes_match_simple_copy, 3, Shape::masking(6));
}

#[test]
fn one_round_outputs_are_a_single_cube() {
    holds(invariants::single_cube_outputs, 4, Shape::simple(6));
}

#[test]
fn one_round_outputs_are_specific() {
    holds(invariants::specific_outputs, 5, Shape::masking(6));
}

#[test]
fn one_round_ignores_masking() {
    holds(invariants::masking_irrelevant_in_one_round, 6, Shape::masking(6));
}

#[test]
fn exploration_is_deterministic() {
    for c in circuits(7, Shape::masking(5)).take(30) {
        for iota in TernaryWord::all(c.input_count()) {
            let a = reach(&c, &iota, 3, &budget()).unwrap();
            let b = reach(&c, &iota, 3, &budget()).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_string(), b.to_string());
        }
    }
}

#[test]
fn multi_round_outputs_grow_with_input_metastability() {
    for c in circuits(8, Shape::masking(5)).take(40) {
        let m = c.input_count();
        for iota in TernaryWord::all(m) {
            let coarse = outputs(&c, &iota, 2, &budget()).unwrap();
            for finer in iota.res_full(&budget()).unwrap() {
                assert!(outputs(&c, &finer, 2, &budget()).unwrap().is_subset_of(&coarse));
            }
        }
    }
}

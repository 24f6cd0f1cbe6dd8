//! Exhaustive per-circuit checks of the executor invariants. Each returns
//! a description of the first violation.

use mc_core::executor::{outputs, read_outcomes, successors, StateSet};
use mc_core::netlist::Circuit;
use mc_core::ternary::{CubeSet, TernaryWord};
use mc_core::{Budget, Result};

pub type Check = std::result::Result<(), String>;

fn same_set(a: &CubeSet, b: &CubeSet) -> bool {
    a.is_subset_of(b) && b.is_subset_of(a)
}

/// Projection of a state set onto the non-input registers.
fn written(s: &StateSet, m: usize, width: usize) -> CubeSet {
    CubeSet::new(width - m, s.entries().iter().map(|e| e.slice(m, width))).expect("common width")
}

fn fail(c: &Circuit, what: String) -> Check {
    Err(format!("{what}\n{}", c.emit()))
}

/// All-simple circuits read exactly `In ∘ Loc` of the state.
pub fn simple_reads(c: &Circuit, budget: &Budget) -> Result<Check> {
    let rw = c.read_width();
    for s in TernaryWord::all(c.state_width()) {
        let outcomes = read_outcomes(c, &s, budget)?;
        if outcomes.len() != 1 || outcomes[0].read != s.slice(0, rw) {
            return Ok(fail(c, format!("state {s}: {} read outcomes", outcomes.len())));
        }
    }
    Ok(Ok(()))
}

/// The verbatim read is possible and every read refines it.
pub fn reads_refine_state(c: &Circuit, budget: &Budget) -> Result<Check> {
    let rw = c.read_width();
    for s in TernaryWord::all(c.state_width()) {
        let own = s.slice(0, rw);
        let outcomes = read_outcomes(c, &s, budget)?;
        if !outcomes.iter().any(|o| o.read == own) {
            return Ok(fail(c, format!("state {s}: verbatim read missing")));
        }
        if let Some(o) = outcomes.iter().find(|o| !own.covers(&o.read)) {
            return Ok(fail(c, format!("state {s}: read {} outside Res_M", o.read)));
        }
    }
    Ok(Ok(()))
}

/// Masking registers write the same state set as simple ones.
pub fn writes_match_simple_copy(c: &Circuit, budget: &Budget) -> Result<Check> {
    let simple = c.simple_copy();
    let (m, width) = (c.input_count(), c.state_width());
    for s in TernaryWord::all(width) {
        let a = written(&successors(c, &s, budget)?, m, width);
        let b = written(&successors(&simple, &s, budget)?, m, width);
        if !same_set(&a, &b) {
            return Ok(fail(c, format!("state {s}: {a} vs {b}")));
        }
    }
    Ok(Ok(()))
}

/// One-round outputs of an all-simple circuit form one cube.
pub fn single_cube_outputs(c: &Circuit, budget: &Budget) -> Result<Check> {
    for iota in TernaryWord::all(c.input_count()) {
        let out = outputs(c, &iota, 1, budget)?;
        if out.len() != 1 {
            return Ok(fail(c, format!("input {iota}: {out}")));
        }
    }
    Ok(Ok(()))
}

/// Stabilizing inputs never widens the one-round output set.
pub fn specific_outputs(c: &Circuit, budget: &Budget) -> Result<Check> {
    let m = c.input_count();
    let table: Vec<CubeSet> = TernaryWord::all(m)
        .map(|iota| outputs(c, &iota, 1, budget))
        .collect::<Result<_>>()?;
    for iota in TernaryWord::all(m) {
        for finer in iota.res_partial(budget)? {
            if !table[finer.ternary_index()].is_subset_of(&table[iota.ternary_index()]) {
                return Ok(fail(c, format!("{finer} widens {iota}")));
            }
        }
    }
    Ok(Ok(()))
}

/// One-round outputs are unchanged when masking registers become simple.
pub fn masking_irrelevant_in_one_round(c: &Circuit, budget: &Budget) -> Result<Check> {
    let simple = c.simple_copy();
    for iota in TernaryWord::all(c.input_count()) {
        let a = outputs(c, &iota, 1, budget)?;
        let b = outputs(&simple, &iota, 1, budget)?;
        if !same_set(&a, &b) {
            return Ok(fail(c, format!("input {iota}: {a} vs {b}")));
        }
    }
    Ok(Ok(()))
}

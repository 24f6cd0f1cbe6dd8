use crate::error::{Budget, Error, Result};
use crate::function::FunctionSpec;
use crate::ternary::{BooleanFunction, One, TernaryWord, Zero};

use super::closure_bool;

/// Whether `f` is bit-wise, closed and specific: every value is a single
/// product of `{0}`, `{1}` and `T`, and stabilizing an input never widens
/// the value.
pub fn is_natural(f: &FunctionSpec) -> bool {
    let Some(nat) = f.to_natural_form() else {
        return false;
    };
    let m = f.inputs();
    let value = |x: &TernaryWord| nat.natural_value(x).expect("natural form");
    // joined[x] = join of the values at all stable resolutions of x.
    let mut joined: Vec<TernaryWord> = Vec::with_capacity(3usize.pow(m as u32));
    for x in TernaryWord::all(m) {
        let j = match x.meta_positions().next() {
            None => value(&x).clone(),
            Some(p) => {
                let lo = &joined[x.clone().with(p, Zero).ternary_index()];
                let hi = &joined[x.clone().with(p, One).ternary_index()];
                lo.join(hi)
            }
        };
        if !value(&x).covers(&j) {
            return false;
        }
        joined.push(j);
    }
    true
}

/// Searches for a natural `h ⊆ g`. Such an `h` exists iff some Boolean `f`
/// with `f(y) ∈ g(y)` on stable `y` has `closure_bool(f) ⊆ g`; the search
/// backtracks over `f` and prunes as soon as the partial closure at some
/// input leaves `g`.
pub fn find_natural_subfunction(g: &FunctionSpec, budget: &Budget) -> Result<Option<FunctionSpec>> {
    const MAX_INPUTS: usize = 8;
    let m = g.inputs();
    let n = g.outputs();
    if m > MAX_INPUTS {
        return Err(Error::InvalidArgument(format!(
            "natural subfunction search supports at most {MAX_INPUTS} inputs, got {m}"
        )));
    }
    if n >= 64 {
        return Err(Error::InvalidArgument(format!("{n} outputs is too many")));
    }
    let stable: Vec<TernaryWord> = TernaryWord::all_stable(m).collect();
    let candidates: Vec<Vec<TernaryWord>> = stable
        .iter()
        .map(|y| g.stable_values(y, budget))
        .collect::<Result<_>>()?;
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    // Ternary words covering each stable point.
    let covering: Vec<Vec<usize>> = stable
        .iter()
        .map(|y| {
            (0..1usize << m)
                .map(|mask| {
                    let mut x = y.clone();
                    for p in 0..m {
                        if mask >> p & 1 == 1 {
                            x.set(p, crate::ternary::Meta);
                        }
                    }
                    x.ternary_index()
                })
                .collect()
        })
        .collect();
    let all_inputs: Vec<TernaryWord> = TernaryWord::all(m).collect();

    let mut search = Search {
        g,
        candidates: &candidates,
        covering: &covering,
        all_inputs: &all_inputs,
        partial: vec![None; all_inputs.len()],
        undo: Vec::new(),
        choice: Vec::with_capacity(stable.len()),
        nodes: 0,
        budget,
    };
    if !search.run(0)? {
        return Ok(None);
    }
    let table = search.choice.clone();
    let f = BooleanFunction::new(m, n, table)?;
    Ok(Some(closure_bool(&f)))
}

struct Search<'a> {
    g: &'a FunctionSpec,
    candidates: &'a [Vec<TernaryWord>],
    covering: &'a [Vec<usize>],
    all_inputs: &'a [TernaryWord],
    /// Join of the chosen outputs over the assigned stable resolutions.
    partial: Vec<Option<TernaryWord>>,
    undo: Vec<(usize, Option<TernaryWord>)>,
    choice: Vec<TernaryWord>,
    nodes: usize,
    budget: &'a Budget,
}

impl Search<'_> {
    fn run(&mut self, y: usize) -> Result<bool> {
        if y == self.candidates.len() {
            return Ok(true);
        }
        for out in &self.candidates[y] {
            self.nodes += 1;
            self.budget.check_states(self.nodes)?;
            let mark = self.undo.len();
            if self.assign(y, out) {
                self.choice.push(out.clone());
                if self.run(y + 1)? {
                    return Ok(true);
                }
                self.choice.pop();
            }
            while self.undo.len() > mark {
                let (x, old) = self.undo.pop().expect("nonempty");
                self.partial[x] = old;
            }
        }
        Ok(false)
    }

    /// Records `f(y) = out`; false if some partial closure leaves `g`.
    fn assign(&mut self, y: usize, out: &TernaryWord) -> bool {
        for &x in &self.covering[y] {
            let next = match &self.partial[x] {
                None => out.clone(),
                Some(p) => p.join(out),
            };
            if self.partial[x].as_ref() == Some(&next) {
                continue;
            }
            let ok = self.g.uncovered(&self.all_inputs[x], &next).is_none();
            self.undo.push((x, self.partial[x].replace(next)));
            if !ok {
                return false;
            }
        }
        true
    }
}

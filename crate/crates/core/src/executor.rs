//! Round semantics: register automata, read/evaluate/write, reachable state
//! sets and the implements check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Budget, Error, Result};
use crate::function::FunctionSpec;
use crate::netlist::{Circuit, RegisterType};
use crate::ternary::{significant_lines, CubeSet, Meta, One, Ternary, TernaryWord, Zero};

/// Solid transitions of a register automaton: `(value read, next state)`.
pub fn transitions(rtype: RegisterType, state: Ternary) -> &'static [(Ternary, Ternary)] {
    match (rtype, state) {
        (_, Zero) => &[(Zero, Zero)],
        (_, One) => &[(One, One)],
        (RegisterType::Simple, Meta) => &[(Meta, Meta)],
        (RegisterType::Mask0, Meta) => &[(Zero, Meta), (Meta, One)],
        (RegisterType::Mask1, Meta) => &[(One, Meta), (Meta, Zero)],
    }
}

/// One way the read phase can go: the word read from `In ∘ Loc` and the
/// resulting state of the input registers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReadOutcome {
    pub read: TernaryWord,
    pub next_inputs: TernaryWord,
}

/// All read outcomes of `state` (a full `In ∘ Loc ∘ Out` word), in
/// lexicographic order of the per-register choices.
pub fn read_outcomes(c: &Circuit, state: &TernaryWord, budget: &Budget) -> Result<Vec<ReadOutcome>> {
    if state.width() != c.state_width() {
        return Err(Error::WidthMismatch {
            expected: c.state_width(),
            found: state.width(),
        });
    }
    let m = c.input_count();
    let choices: Vec<&[(Ternary, Ternary)]> = c.registers()[..c.read_width()]
        .iter()
        .enumerate()
        .map(|(i, r)| transitions(r.rtype, state.get(i)))
        .collect();
    let branching = choices.iter().filter(|c| c.len() > 1).count();
    budget.check_meta(branching)?;

    let mut out = Vec::with_capacity(1 << branching);
    let mut pick = vec![0usize; choices.len()];
    loop {
        out.push(ReadOutcome {
            read: TernaryWord::from_digits(pick.iter().zip(&choices).map(|(&p, c)| c[p].0)),
            next_inputs: TernaryWord::from_digits(pick[..m].iter().zip(&choices[..m]).map(|(&p, c)| c[p].1)),
        });
        // Odometer increment, last register fastest.
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// A successor cube: the state set `{next_inputs} × Res_M(eval)`, reached
/// through `read`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub read: TernaryWord,
    pub next_inputs: TernaryWord,
    pub eval: TernaryWord,
}

fn steps(c: &Circuit, state: &TernaryWord, budget: &Budget) -> Result<Vec<Step>> {
    read_outcomes(c, state, budget)?
        .into_iter()
        .map(|o| {
            Ok(Step {
                eval: c.eval_dag(&o.read)?,
                read: o.read,
                next_inputs: o.next_inputs,
            })
        })
        .collect()
}

/// A set of circuit states, grouped by the exact state of the input
/// registers. Each group denotes `{ι} × ⋃ Res_M(w)` over the cubes `w` of
/// its cube set (over `Loc ∘ Out`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateSet {
    inputs: usize,
    writes: usize,
    groups: BTreeMap<TernaryWord, CubeSet>,
    /// Set for the initial layer: entries then denote exactly one state
    /// each, even if the initialization contains `M`.
    exact: bool,
}

impl StateSet {
    fn new(inputs: usize, writes: usize) -> Self {
        StateSet {
            inputs,
            writes,
            groups: BTreeMap::new(),
            exact: false,
        }
    }

    pub fn contains(&self, state: &TernaryWord) -> bool {
        if state.width() != self.inputs + self.writes {
            return false;
        }
        let (iota, rest) = (state.slice(0, self.inputs), state.slice(self.inputs, state.width()));
        self.groups.get(&iota).is_some_and(|cs| {
            if self.exact {
                cs.cubes().contains(&rest)
            } else {
                cs.contains(&rest)
            }
        })
    }

    /// Maximal entries as full state words `ι ∘ w`, in canonical order.
    pub fn entries(&self) -> Vec<TernaryWord> {
        self.groups
            .iter()
            .flat_map(|(iota, cs)| cs.cubes().iter().map(move |w| iota.concat(w)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(CubeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Projection onto the output registers, the last `n` positions.
    pub fn outputs(&self, n: usize) -> CubeSet {
        let cubes = self
            .groups
            .values()
            .flat_map(|cs| cs.cubes().iter().map(|w| w.slice(self.writes - n, self.writes)))
            .collect();
        CubeSet::canonical(n, cubes)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Successor states of one state, as a canonical cube set over full state
/// words. Input positions of each cube are exact (see [`StateSet`]).
pub fn successors(c: &Circuit, state: &TernaryWord, budget: &Budget) -> Result<StateSet> {
    let mut set = StateSet::new(c.input_count(), c.write_width());
    let mut raw: BTreeMap<TernaryWord, Vec<TernaryWord>> = BTreeMap::new();
    for s in steps(c, state, budget)? {
        raw.entry(s.next_inputs).or_default().push(s.eval);
    }
    for (iota, ws) in raw {
        set.groups.insert(iota, CubeSet::canonical(c.write_width(), ws));
    }
    Ok(set)
}

/// Where an entry of a layer came from.
#[derive(Clone, Debug)]
struct Origin {
    parent: usize,
    read: TernaryWord,
}

/// Layer-by-layer exploration from `ι ∘ x_0`. Successors of a cube entry
/// are those of its top element, which is exact by monotonicity.
pub struct Exploration<'c> {
    circuit: &'c Circuit,
    /// `layers[t]` lists the entries of `S_t` as `(ι ∘ w, origin)`.
    layers: Vec<Vec<(TernaryWord, Option<Origin>)>>,
}

impl<'c> Exploration<'c> {
    pub fn run(c: &'c Circuit, iota: &TernaryWord, rounds: usize, budget: &Budget) -> Result<Self> {
        if iota.width() != c.input_count() {
            return Err(Error::WidthMismatch {
                expected: c.input_count(),
                found: iota.width(),
            });
        }
        let m = c.input_count();
        let mut memo: HashMap<TernaryWord, Vec<Step>> = HashMap::new();
        let mut layers = vec![vec![(iota.concat(&c.initial()), None)]];
        for _ in 0..rounds {
            let prev = layers.last().expect("nonempty");
            // First origin wins for each generated cube; the order is fixed
            // by the previous layer and the read enumeration.
            let mut generated: BTreeMap<TernaryWord, BTreeMap<TernaryWord, Origin>> = BTreeMap::new();
            for (idx, (state, _)) in prev.iter().enumerate() {
                if !memo.contains_key(state) {
                    budget.check_states(memo.len() + 1)?;
                    memo.insert(state.clone(), steps(c, state, budget)?);
                }
                for s in &memo[state] {
                    generated
                        .entry(s.next_inputs.clone())
                        .or_default()
                        .entry(s.eval.clone())
                        .or_insert(Origin {
                            parent: idx,
                            read: s.read.clone(),
                        });
                }
            }
            let mut layer = Vec::new();
            for (iota, evals) in generated {
                let kept = CubeSet::canonical(c.write_width(), evals.keys().cloned().collect());
                for w in kept.cubes() {
                    layer.push((iota.concat(w), Some(evals[w].clone())));
                }
            }
            budget.check_states(layer.len())?;
            debug_assert!(layer.iter().all(|(s, _)| s.width() == m + c.write_width()));
            layers.push(layer);
        }
        Ok(Exploration { circuit: c, layers })
    }

    pub fn rounds(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, t: usize) -> StateSet {
        let c = self.circuit;
        let m = c.input_count();
        let mut raw: BTreeMap<TernaryWord, Vec<TernaryWord>> = BTreeMap::new();
        for (s, _) in &self.layers[t] {
            raw.entry(s.slice(0, m)).or_default().push(s.slice(m, s.width()));
        }
        let mut set = StateSet::new(m, c.write_width());
        set.exact = t == 0;
        for (iota, ws) in raw {
            set.groups.insert(iota, CubeSet::canonical(c.write_width(), ws));
        }
        set
    }

    /// Entries of the final layer, as full state words.
    pub fn final_entries(&self) -> impl Iterator<Item = &TernaryWord> {
        self.layers.last().expect("nonempty").iter().map(|(s, _)| s)
    }

    /// An execution ending in entry `index` of the final layer. Each round
    /// writes its evaluation unchanged.
    pub fn trace_to(&self, index: usize) -> ExecutionTrace {
        let c = self.circuit;
        let mut rounds = Vec::new();
        let mut t = self.rounds();
        let mut idx = index;
        let final_state = self.layers[t][idx].0.clone();
        while let Some(origin) = &self.layers[t][idx].1 {
            let state = &self.layers[t][idx].0;
            let eval = state.slice(c.input_count(), state.width());
            let parent = self.layers[t - 1][origin.parent].0.clone();
            rounds.push(TraceRound {
                state: parent,
                read: origin.read.clone(),
                eval: eval.clone(),
                write: eval,
            });
            idx = origin.parent;
            t -= 1;
        }
        rounds.reverse();
        ExecutionTrace { rounds, final_state }
    }
}

/// `S_r(ι ∘ x_0)`.
pub fn reach(c: &Circuit, iota: &TernaryWord, rounds: usize, budget: &Budget) -> Result<StateSet> {
    Ok(Exploration::run(c, iota, rounds, budget)?.layer(rounds))
}

/// `C_r(ι)`, the outputs of all `r`-round executions.
pub fn outputs(c: &Circuit, iota: &TernaryWord, rounds: usize, budget: &Budget) -> Result<CubeSet> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("outputs need at least one round".into()));
    }
    Ok(reach(c, iota, rounds, budget)?.outputs(c.output_count()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Implements,
    /// `output ∈ C_r(input) \ f(input)`.
    Counterexample {
        input: TernaryWord,
        output: TernaryWord,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Implements)
    }
}

/// Whether `r` rounds of `c` implement `f`, checked for every input in
/// `T^m`. The reported counterexample is the first failing input in
/// lexicographic order.
pub fn implements(c: &Circuit, rounds: usize, f: &FunctionSpec, budget: &Budget) -> Result<Verdict> {
    if f.inputs() != c.input_count() || f.outputs() != c.output_count() {
        return Err(Error::ArityMismatch(format!(
            "circuit has {} inputs and {} outputs, specification is {} -> {}",
            c.input_count(),
            c.output_count(),
            f.inputs(),
            f.outputs()
        )));
    }
    let m = c.input_count();
    let count = 3usize.checked_pow(m as u32).unwrap_or(usize::MAX);
    budget.check_states(count)?;
    let first = (0..count).into_par_iter().find_map_first(|i| {
        let iota = TernaryWord::from_ternary_index(m, i);
        match outputs(c, &iota, rounds, budget) {
            Err(e) => Some(Err(e)),
            Ok(out) => out
                .cubes()
                .iter()
                .find_map(|cube| f.uncovered(&iota, cube))
                .map(|output| Ok(Verdict::Counterexample { input: iota, output })),
        }
    });
    first.unwrap_or(Ok(Verdict::Implements))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRound {
    pub state: TernaryWord,
    pub read: TernaryWord,
    pub eval: TernaryWord,
    pub write: TernaryWord,
}

/// An `r`-round execution: one record per round and the final state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub rounds: Vec<TraceRound>,
    pub final_state: TernaryWord,
}

impl ExecutionTrace {
    pub fn states(&self) -> impl Iterator<Item = &TernaryWord> {
        self.rounds
            .iter()
            .map(|r| &r.state)
            .chain(std::iter::once(&self.final_state))
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for (r, round) in self.rounds.iter().enumerate() {
            out.push_str(&format!(
                "{r} | {} | {} | {} | {}\n",
                round.state, round.read, round.eval, round.write
            ));
        }
        out.push_str(&format!("{} | {} | - | - | -\n", self.rounds.len(), self.final_state));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rounds = Vec::new();
        let mut final_state = None;
        for (line, content) in significant_lines(text) {
            if final_state.is_some() {
                return Err(Error::parse(line, "rows after the final state"));
            }
            let fields: Vec<&str> = content.split('|').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(Error::parse(line, "expected `r | state | read | eval | write`"));
            }
            let r: usize = fields[0]
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid round `{}`", fields[0])))?;
            if r != rounds.len() {
                return Err(Error::parse(
                    line,
                    format!("expected round {}, found {r}", rounds.len()),
                ));
            }
            let w =
                |s: &str| -> Result<TernaryWord> { s.parse().map_err(|e: Error| Error::parse(line, e.to_string())) };
            if fields[2..].iter().all(|f| *f == "-") {
                final_state = Some(w(fields[1])?);
            } else {
                rounds.push(TraceRound {
                    state: w(fields[1])?,
                    read: w(fields[2])?,
                    eval: w(fields[3])?,
                    write: w(fields[4])?,
                });
            }
        }
        let final_state =
            final_state.ok_or_else(|| Error::parse(0, "missing final state row `r | state | - | - | -`"))?;
        Ok(ExecutionTrace { rounds, final_state })
    }
}

impl fmt::Display for ExecutionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// Whether the trace is an execution of `c` from an initial state: the
/// first state carries the initialization, every read is a solid read
/// outcome, every evaluation is the DAG's, every write resolves the
/// evaluation, and the next state is the read's input follow-up state
/// followed by the write.
pub fn trace_check(c: &Circuit, t: &ExecutionTrace) -> bool {
    let m = c.input_count();
    let budget = Budget::default();
    let first = t.rounds.first().map_or(&t.final_state, |r| &r.state);
    if first.width() != c.state_width() || first.slice(m, first.width()) != c.initial() {
        return false;
    }
    let next_states = t
        .rounds
        .iter()
        .skip(1)
        .map(|r| &r.state)
        .chain(std::iter::once(&t.final_state));
    for (round, next) in t.rounds.iter().zip(next_states) {
        if round.state.width() != c.state_width() || next.width() != c.state_width() {
            return false;
        }
        let Ok(outcomes) = read_outcomes(c, &round.state, &budget) else {
            return false;
        };
        let Some(outcome) = outcomes
            .iter()
            .find(|o| o.read == round.read && o.next_inputs == next.slice(0, m))
        else {
            return false;
        };
        let Ok(eval) = c.eval_dag(&outcome.read) else {
            return false;
        };
        if eval != round.eval || !eval.covers(&round.write) || next.slice(m, next.width()) != round.write {
            return false;
        }
    }
    true
}

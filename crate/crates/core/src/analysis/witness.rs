use crate::error::{Budget, Error, Result};
use crate::executor::{outputs, ExecutionTrace, Exploration};
use crate::netlist::Circuit;
use crate::ternary::{Meta, TernaryWord};

/// A sequence from `x` to `y` in which consecutive words differ in one
/// position, with `M` on one side of every change. Positions are handled
/// from the last to the first; a change between stable values passes
/// through `M`.
pub fn pivotal_sequence(x: &TernaryWord, y: &TernaryWord) -> Result<Vec<TernaryWord>> {
    if x.width() != y.width() {
        return Err(Error::WidthMismatch {
            expected: x.width(),
            found: y.width(),
        });
    }
    let mut seq = vec![x.clone()];
    let mut cur = x.clone();
    for p in (0..x.width()).rev() {
        let (a, b) = (cur.get(p), y.get(p));
        if a == b {
            continue;
        }
        if a != Meta && b != Meta {
            cur.set(p, Meta);
            seq.push(cur.clone());
        }
        cur.set(p, b);
        seq.push(cur.clone());
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `C_r(ι) ∩ C_r(ι') ≠ ∅`; nothing to show.
    Overlap,
    /// An `r`-round execution from input `input` whose final state has a
    /// metastable output register.
    Trace { input: TernaryWord, trace: ExecutionTrace },
}

/// For inputs with disjoint output sets, finds an execution in which an
/// output register becomes metastable. Inputs along the pivotal sequence
/// from `iota` to `iota2` are tried in order; the first final-layer state
/// with an `M` output is returned.
pub fn metastable_witness(
    c: &Circuit,
    rounds: usize,
    iota: &TernaryWord,
    iota2: &TernaryWord,
    budget: &Budget,
) -> Result<Witness> {
    let a = outputs(c, iota, rounds, budget)?;
    let b = outputs(c, iota2, rounds, budget)?;
    if a.intersects(&b) {
        return Ok(Witness::Overlap);
    }
    let first_output = c.state_width() - c.output_count();
    for input in pivotal_sequence(iota, iota2)? {
        let e = Exploration::run(c, &input, rounds, budget)?;
        let hit = e
            .final_entries()
            .position(|s| (first_output..s.width()).any(|i| s.get(i) == Meta));
        if let Some(index) = hit {
            return Ok(Witness::Trace {
                trace: e.trace_to(index),
                input,
            });
        }
    }
    Err(Error::Internal(format!(
        "outputs of {iota} and {iota2} are disjoint but no metastable output was found"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::executor::trace_check;
    use crate::netlist::parse_netlist;
    use crate::ternary::word;

    fn one_gate(kind: &str) -> Circuit {
        let src = if kind.starts_with("CONST") { "" } else { " I" };
        parse_netlist(&format!(
            "circuit t\ninput I simple\noutput O simple init 0\ngate g {kind}{src}\ndrive O g\n"
        ))
        .unwrap()
    }

    #[test]
    fn pivotal_examples() {
        let seq = pivotal_sequence(&word("00"), &word("11")).unwrap();
        assert_eq!(seq, ["00", "0M", "01", "M1", "11"].map(word));
        assert_eq!(pivotal_sequence(&word("1M0"), &word("1M0")).unwrap(), vec![word("1M0")]);
        assert_eq!(pivotal_sequence(&word("0"), &word("M")).unwrap(), ["0", "M"].map(word));
        assert!(pivotal_sequence(&word("0"), &word("00")).is_err());
    }

    #[test]
    fn pivotal_sequences_are_valid() {
        for x in TernaryWord::all(3) {
            for y in TernaryWord::all(3) {
                let seq = pivotal_sequence(&x, &y).unwrap();
                assert_eq!(seq.first(), Some(&x));
                assert_eq!(seq.last(), Some(&y));
                for w in seq.windows(2) {
                    let diff: Vec<usize> = (0..3).filter(|&i| w[0].get(i) != w[1].get(i)).collect();
                    assert_eq!(diff.len(), 1);
                    assert!(w[0].get(diff[0]) == Meta || w[1].get(diff[0]) == Meta);
                }
            }
        }
    }

    #[test]
    fn buffer_and_inverter_witnesses() {
        for kind in ["BUF", "NOT"] {
            let c = one_gate(kind);
            let w = metastable_witness(&c, 1, &word("0"), &word("1"), &Budget::default()).unwrap();
            let Witness::Trace { input, trace } = w else {
                panic!("{kind}: expected a trace");
            };
            assert_eq!(input, word("M"));
            assert_eq!(trace.final_state, word("MM"));
            assert!(trace_check(&c, &trace));
        }
    }

    #[test]
    fn constant_outputs_overlap() {
        let c = one_gate("CONST0");
        assert_eq!(
            metastable_witness(&c, 1, &word("0"), &word("1"), &Budget::default()).unwrap(),
            Witness::Overlap
        );
    }
}

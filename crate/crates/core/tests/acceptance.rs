//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::{invariants, random_circuit, rng, Shape};
use mc_core::analysis::{closure_bool, find_natural_subfunction, metastable_witness, synthesize, unroll, Witness};
use mc_core::components::{
    build_brgc_to_tc, build_cmux_clocked, build_cmux_combinational, build_fanout_buffer, build_mux, build_tc_to_brgc,
    build_two_sort, tdc_reading, ClockSync, TdcReading,
};
use mc_core::executor::{implements, outputs, reach, trace_check, ExecutionTrace, Verdict};
use mc_core::function::{cmux, detector, masking_fanout, mm_example, resolver};
use mc_core::netlist::{parse_netlist, Circuit, GateKind, Netlist, RegisterType};
use mc_core::ternary::{kleene_extend, word, BooleanFunction, Code, CubeSet, Meta, TernaryWord, TruthTable};
use mc_core::Budget;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn budget() -> Budget {
    Budget::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: mc_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn kleene_tables() -> Outcome {
    // Rows a, columns b, both in order 0, 1, M.
    let expected = [
        ("AND", "0001", ["000", "01M", "0MM"]),
        ("OR", "0111", ["01M", "111", "M1M"]),
    ];
    for (name, bits, rows) in expected {
        let table = TruthTable::parse(bits).map_err(|e| e.to_string())?;
        let closure = closure_bool(&BooleanFunction::from_fn(2, 1, |x| table.eval(x) as u64));
        let gate: GateKind = name.parse()?;
        for (i, a) in ["0", "1", "M"].iter().enumerate() {
            for (j, b) in ["0", "1", "M"].iter().enumerate() {
                let x = word(&format!("{a}{b}"));
                let want = rows[i].as_bytes()[j] as char;
                let got = [
                    lift(kleene_extend(&table, &x))?.to_char(),
                    gate.eval(&[x.get(0), x.get(1)]).to_char(),
                    closure.natural_value(&x).expect("natural").get(0).to_char(),
                ];
                ensure(got.iter().all(|&g| g == want), || {
                    format!("{name}({a},{b}) = {got:?}, expected {want}")
                })?;
            }
        }
    }
    Ok("AND and OR agree on 9/9 entries".into())
}

const LATCH: &str = "\
circuit latch
input I1 mask0
input I2 simple
local L1 simple init 1
output O1 simple init 1
gate g_or OR I2 I1
gate g_and AND L1 g_or
drive L1 g_or
drive O1 g_and
";

const LATCH_TRACE: &str = "\
0 | MM11 | 0M1 | MM | 1M
1 | MM1M | MM1 | MM | MM
2 | 1MMM | 1MM | 1M | 10
3 | 1M10 | 1M1 | 11 | 11
4 | 1M11 | - | - | -
";

fn latch_replay() -> Outcome {
    let c = lift(parse_netlist(LATCH))?;
    let t = lift(ExecutionTrace::parse(LATCH_TRACE))?;
    ensure(trace_check(&c, &t), || "trace_check rejects the table".into())?;
    let states: Vec<&TernaryWord> = t.states().collect();
    for (r, s) in states.iter().enumerate() {
        let layer = lift(reach(&c, &word("MM"), r, &budget()))?;
        ensure(layer.contains(s), || format!("s_{r} = {s} not reachable"))?;
    }
    Ok(format!("trace accepted; s_0..s_{} reachable", states.len() - 1))
}

fn executor_invariants() -> Outcome {
    type CheckFn = fn(&Circuit, &Budget) -> mc_core::Result<invariants::Check>;
    let simple: [CheckFn; 2] = [invariants::simple_reads, invariants::single_cube_outputs];
    let any: [CheckFn; 4] = [
        invariants::reads_refine_state,
        invariants::writes_match_simple_copy,
        invariants::specific_outputs,
        invariants::masking_irrelevant_in_one_round,
    ];
    let mut r = rng(2024);
    let mut count = 0;
    for shape in [Shape::simple(6), Shape::masking(6)] {
        for _ in 0..100 {
            let c = random_circuit(&mut r, shape);
            let checks = any.iter().chain(if c.is_all_simple() { &simple[..] } else { &[] });
            for check in checks {
                lift(check(&c, &budget()))??;
            }
            count += 1;
        }
    }
    Ok(format!("{count} random circuits, all inputs exhaustively"))
}

fn cmux_checks() -> Outcome {
    let b = budget();
    ensure(
        lift(implements(&build_cmux_combinational(), 1, &cmux(), &b))?.holds(),
        || "combinational CMUX fails".into(),
    )?;
    ensure(lift(implements(&build_cmux_clocked(), 2, &cmux(), &b))?.holds(), || {
        "clocked CMUX fails at r=2".into()
    })?;
    match lift(implements(&build_mux(), 1, &cmux(), &b))? {
        Verdict::Counterexample { input, output } if input == word("11M") => {
            Ok(format!("plain MUX fails at (1,1,M) with output {output}"))
        }
        v => Err(format!("plain MUX: expected counterexample at 11M, got {v:?}")),
    }
}

fn unroll_equivalence() -> Outcome {
    let mut r = rng(7);
    let mut count = 0;
    while count < 50 {
        let c = random_circuit(&mut r, Shape::simple(5));
        for rounds in [2, 3] {
            let u = lift(unroll(&c, rounds))?;
            for iota in TernaryWord::all(c.input_count()) {
                let (a, b) = (
                    lift(outputs(&u, &iota, 1, &budget()))?,
                    lift(outputs(&c, &iota, rounds, &budget()))?,
                );
                ensure(a == b, || format!("{} r={rounds} at {iota}: {a} vs {b}", c.emit()))?;
            }
        }
        count += 1;
    }
    Ok(format!("{count} circuits, r in {{2,3}}, exact cube-set equality"))
}

fn single_gate(kind: GateKind) -> Circuit {
    let mut n = Netlist::new(kind.to_string().to_lowercase());
    n.input("I", RegisterType::Simple)
        .output("O", RegisterType::Simple, mc_core::ternary::Zero);
    n.gate("g", kind, &["I"]).drive("O", "g");
    n.build().expect("valid")
}

/// Two-bit comparator `a > b` on inputs `a1 a0 b1 b0`.
fn comparator() -> Circuit {
    let gt = TruthTable::from_fn(4, |x| (x >> 2) > (x & 3));
    let mut n = Netlist::new("gt2");
    for name in ["a1", "a0", "b1", "b0"] {
        n.input(name, RegisterType::Simple);
    }
    n.output("O", RegisterType::Simple, mc_core::ternary::Zero);
    n.gate("g", GateKind::Table(gt), &["a1", "a0", "b1", "b0"])
        .drive("O", "g");
    n.build().expect("valid")
}

fn impossibility() -> Outcome {
    let b = budget();
    let mut pairs = 0;
    for c in [single_gate(GateKind::Buf), single_gate(GateKind::Not), comparator()] {
        let m = c.input_count();
        let first_output = c.state_width() - c.output_count();
        for x in TernaryWord::all_stable(m) {
            for y in TernaryWord::all_stable(m) {
                match lift(metastable_witness(&c, 1, &x, &y, &b))? {
                    Witness::Overlap => {}
                    Witness::Trace { trace, .. } => {
                        let meta = (first_output..c.state_width()).any(|i| trace.final_state.get(i) == Meta);
                        ensure(meta && trace_check(&c, &trace), || {
                            format!("{}: bad witness {x} {y}", c.name())
                        })?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    for (name, g) in [
        ("detector", detector()),
        ("resolver", resolver()),
        ("mm-example", mm_example()),
    ] {
        ensure(lift(find_natural_subfunction(&g, &b))?.is_none(), || {
            format!("{name} has a natural subfunction")
        })?;
    }
    for code in 0..16u64 {
        let g = closure_bool(&BooleanFunction::from_fn(2, 1, |x| code >> x & 1));
        ensure(lift(find_natural_subfunction(&g, &b))?.is_some(), || {
            format!("no witness for f={code:04b}")
        })?;
    }
    Ok(format!(
        "{pairs} disjoint pairs witnessed; 3 specs refuted; 16/16 closures found"
    ))
}

fn synthesis_round_trip() -> Outcome {
    let functions: Vec<(usize, usize, u64)> = (0..=3usize)
        .flat_map(|m| (1..=2usize).flat_map(move |n| (0..1u64 << (n << m)).map(move |code| (m, n, code))))
        .collect();
    functions.par_iter().try_for_each(|&(m, n, code)| {
        let f = BooleanFunction::from_fn(m, n, |x| code >> (x as usize * n) & ((1 << n) - 1));
        let h = closure_bool(&f);
        let c = lift(synthesize(&h, &budget()))?;
        ensure(lift(implements(&c, 1, &h, &budget()))?.holds(), || {
            format!("m={m} n={n} f={code:x}")
        })?;
        for (i, y) in TernaryWord::all_stable(m).enumerate() {
            let got = lift(outputs(&c, &y, 1, &budget()))?;
            ensure(got == CubeSet::singleton(f.eval(i as u64).clone()), || {
                format!("m={m} n={n} f={code:x} at {y}: {got}")
            })?;
        }
        Ok::<_, String>(())
    })?;
    Ok(format!("{} functions", functions.len()))
}

fn fanout() -> Outcome {
    for r in 2..=4 {
        let c = lift(build_fanout_buffer(r))?;
        ensure(lift(implements(&c, r, &masking_fanout(r), &budget()))?.holds(), || {
            format!("r={r} fails")
        })?;
        let first_output = c.state_width() - c.output_count();
        for iota in TernaryWord::all(1) {
            for t in 0..=r {
                for s in lift(reach(&c, &iota, t, &budget()))?.entries() {
                    ensure(s.slice(first_output, s.width()).meta_count() <= 1, || {
                        format!("r={r} t={t}: {s}")
                    })?;
                }
            }
        }
    }
    Ok("r = 2, 3, 4".into())
}

/// Codewords and joins of adjacent codewords.
fn precision_one(code: &Code) -> Result<Vec<TernaryWord>, String> {
    let words: Vec<TernaryWord> = (0..code.range())
        .map(|v| code.encode(v))
        .collect::<mc_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    let joins = words.windows(2).map(|w| w[0].join(&w[1]));
    Ok(words.iter().cloned().chain(joins).collect())
}

fn join_all(words: impl IntoIterator<Item = TernaryWord>) -> TernaryWord {
    words.into_iter().reduce(|a, b| a.join(&b)).expect("nonempty")
}

fn decoded(code: &Code, w: &TernaryWord) -> Result<Vec<usize>, String> {
    lift(w.res_full(&budget()))?
        .iter()
        .map(|r| lift(code.decode(r)))
        .collect()
}

fn section_components() -> Outcome {
    // Thermometer (ones first) to BRGC, rows 0..7.
    let gray_table = ["000", "001", "011", "010", "110", "111", "101", "100"];
    let to_brgc = lift(build_tc_to_brgc(3))?;
    let (tc7, gray3) = (Code::tc_leading(7), Code::brgc(3));
    for (v, want) in gray_table.iter().enumerate() {
        let got = lift(to_brgc.eval_dag(&lift(tc7.encode(v))?))?;
        ensure(got == word(want), || format!("TC({v}) -> {got}, expected {want}"))?;
    }
    for v in 0..7 {
        let x = lift(tc7.encode(v))?.with(v, Meta);
        let y = lift(to_brgc.eval_dag(&x))?;
        ensure(lift(gray3.precision(&y, &budget()))? <= 1, || format!("{x} -> {y}"))?;
    }

    let mut pairs = 0;
    for k in 1..=3 {
        let code = Code::brgc(k);
        let sorter = lift(build_two_sort(k, &budget()))?;
        let words = precision_one(&code)?;
        for x in &words {
            for y in &words {
                let (xs, ys) = (decoded(&code, x)?, decoded(&code, y)?);
                let pairs_xy: Vec<(usize, usize)> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b))).collect();
                let enc = |v: usize| code.encode(v).expect("in range");
                let lo = join_all(pairs_xy.iter().map(|&(a, b)| enc(a.min(b))));
                let hi = join_all(pairs_xy.iter().map(|&(a, b)| enc(a.max(b))));
                let got = lift(sorter.eval_dag(&x.concat(y)))?;
                ensure(got == lo.concat(&hi), || format!("2-sort k={k} ({x},{y}) -> {got}"))?;
                pairs += 1;
            }
        }
        let back = lift(build_brgc_to_tc(k, &budget()))?;
        let tc = Code::tc((1 << k) - 1);
        for x in &words {
            let y = lift(back.eval_dag(x))?;
            ensure(lift(tc.precision(&y, &budget()))? <= 1, || {
                format!("BRGC->TC k={k}: {x} -> {y}")
            })?;
        }
    }
    Ok(format!("8 table rows, 7 single-Meta inputs, {pairs} 2-sort pairs"))
}

fn pipeline() -> Outcome {
    let cs = lift(ClockSync::build(4, 1, 2, &budget()))?;
    let w = cs.reading_width();
    let (tc, leading) = (Code::tc(w), Code::tc_leading(w));
    let mut all: Vec<TdcReading> = (0..=w)
        .map(|v| tdc_reading(w, v, false))
        .collect::<mc_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    for v in 0..w {
        all.push(lift(tdc_reading(w, v, true))?);
    }
    let mut count = 0;
    for code in 0..all.len().pow(4) {
        let chosen: Vec<TdcReading> = (0..4)
            .map(|i| all[code / all.len().pow(i) % all.len()].clone())
            .collect();
        let s = lift(cs.select(&chosen))?;
        for out in [&s.upper, &s.lower] {
            ensure(lift(tc.precision(out, &budget()))? <= 1, || {
                format!("{chosen:?} -> {out}")
            })?;
        }
        if chosen.iter().all(|r| r.word().is_stable()) {
            let mut v: Vec<usize> = chosen
                .iter()
                .map(|r| leading.decode(r.word()).expect("stable reading"))
                .collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            let got = (lift(tc.decode(&s.upper))?, lift(tc.decode(&s.lower))?);
            ensure(got == (v[1], v[2]), || format!("{v:?}: selected {got:?}"))?;
        }
        count += 1;
    }
    Ok(format!("{count} reading assignments"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Kleene gate tables", kleene_tables),
        ("execution replay", latch_replay),
        ("executor invariants on random circuits", executor_invariants),
        ("CMUX implementations", cmux_checks),
        ("unrolling equivalence", unroll_equivalence),
        ("impossibility witnesses", impossibility),
        ("synthesis round trip", synthesis_round_trip),
        ("masking fan-out buffer", fanout),
        ("code converters and 2-sort", section_components),
        ("clock-sync pipeline", pipeline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

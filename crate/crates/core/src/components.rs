//! Metastability-containing components and the clock-synchronization
//! datapath assembled from them.

use crate::analysis::{closure_bool, synthesize};
use crate::error::{Budget, Error, Result};
use crate::netlist::{Circuit, GateKind, Netlist, RegisterType};
use crate::ternary::{BooleanFunction, Code, Meta, One, TernaryWord, TruthTable, Zero};

use RegisterType::{Mask0, Mask1, Simple};

fn cap(what: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::OutOfRange {
            value,
            reason: format!("{what} must be in {lo}..={hi}"),
        });
    }
    Ok(())
}

/// Standard multiplexer `o = (¬s ∧ a) ∨ (s ∧ b)`; inputs `a, b, s`.
pub fn build_mux() -> Circuit {
    let mut n = Netlist::new("mux");
    n.input("a", Simple).input("b", Simple).input("s", Simple);
    n.output("o", Simple, Zero);
    n.gate("ns", GateKind::Not, &["s"])
        .gate("t0", GateKind::And, &["ns", "a"])
        .gate("t1", GateKind::And, &["s", "b"])
        .gate("or", GateKind::Or, &["t0", "t1"])
        .drive("o", "or");
    n.build().expect("valid")
}

/// Multiplexer with the consensus term: `o = (¬s ∧ a) ∨ (s ∧ b) ∨ (a ∧ b)`.
pub fn build_cmux_combinational() -> Circuit {
    let mut n = Netlist::new("cmux");
    n.input("a", Simple).input("b", Simple).input("s", Simple);
    n.output("o", Simple, Zero);
    n.gate("ns", GateKind::Not, &["s"])
        .gate("t0", GateKind::And, &["ns", "a"])
        .gate("t1", GateKind::And, &["s", "b"])
        .gate("t2", GateKind::And, &["a", "b"])
        .gate("or", GateKind::Or, &["t0", "t1", "t2"])
        .drive("o", "or");
    n.build().expect("valid")
}

/// Two-round multiplexer reading `s` from a mask-1 register:
/// `s' ← s; o ← (¬s ∧ a) ∨ (s' ∧ b)`. Only the second round's output is
/// specified.
pub fn build_cmux_clocked() -> Circuit {
    let mut n = Netlist::new("cmux_clocked");
    n.input("a", Simple).input("b", Simple).input("s", Mask1);
    n.local("s1", Simple, Zero);
    n.output("o", Simple, Zero);
    n.gate("ns", GateKind::Not, &["s"])
        .gate("t0", GateKind::And, &["ns", "a"])
        .gate("t1", GateKind::And, &["s1", "b"])
        .gate("or", GateKind::Or, &["t0", "t1"])
        .drive("s1", "s")
        .drive("o", "or");
    n.build().expect("valid")
}

/// `r`-copy fan-out buffer: a mask-0 input `R{r-1}` shifted through locals
/// `R{r-2} .. R0`; output `O{i}` receives the value read from `R{i}`.
/// Outputs are ordered `O0 .. O{r-1}`.
pub fn build_fanout_buffer(r: usize) -> Result<Circuit> {
    cap("fan-out rounds", r, 1, 16)?;
    let mut n = Netlist::new(format!("fanout{r}"));
    n.input(format!("R{}", r - 1), Mask0);
    for i in (0..r - 1).rev() {
        n.local(format!("R{i}"), Simple, Zero);
    }
    for i in 0..r {
        n.output(format!("O{i}"), Simple, Zero);
    }
    for i in 0..r - 1 {
        n.drive(format!("R{i}"), format!("R{}", i + 1));
    }
    for i in 0..r {
        n.drive(format!("O{i}"), format!("R{i}"));
    }
    n.build()
}

/// Adds an `r`-round counter to `n`: locals `R0 .. R{r-1}` with `R0` held
/// at 1 and `R{i+1} ← R{i}`. Returns the combinational signals that are 1
/// exactly in round `1 ..= r`.
fn add_counter(n: &mut Netlist, r: usize) -> Vec<String> {
    n.gate("one", GateKind::Const1, &[] as &[&str]);
    for i in 0..r {
        n.local(format!("R{i}"), Simple, if i == 0 { One } else { Zero });
    }
    n.drive("R0", "one");
    for i in 1..r {
        n.drive(format!("R{i}"), format!("R{}", i - 1));
    }
    let mut signals = Vec::with_capacity(r);
    for i in 0..r - 1 {
        let id = format!("c{}", i + 1);
        n.gate(&id, GateKind::Xor, &[format!("R{i}"), format!("R{}", i + 1)]);
        signals.push(id);
    }
    signals.push(format!("R{}", r - 1));
    signals
}

/// Counter without inputs whose output `O{i}` is 1 exactly in round `i`.
pub fn build_counter(r: usize) -> Result<Circuit> {
    cap("counter rounds", r, 1, 16)?;
    let mut n = Netlist::new(format!("counter{r}"));
    let signals = add_counter(&mut n, r);
    for (i, s) in signals.iter().enumerate() {
        n.output(format!("O{}", i + 1), Simple, Zero);
        n.drive(format!("O{}", i + 1), s);
    }
    n.build()
}

/// Selector with inputs `x0 .. x{r-1}` whose output in round `i` is a
/// copy of `x{i-1}`.
pub fn build_selector(r: usize) -> Result<Circuit> {
    cap("selector rounds", r, 1, 16)?;
    let mut n = Netlist::new(format!("selector{r}"));
    for i in 0..r {
        n.input(format!("x{i}"), Simple);
    }
    n.output("O", Simple, Zero);
    let signals = add_counter(&mut n, r);
    let mut terms = Vec::with_capacity(r);
    for (i, s) in signals.iter().enumerate() {
        let id = format!("t{i}");
        n.gate(&id, GateKind::And, &[format!("x{i}"), s.clone()]);
        terms.push(id);
    }
    if r == 1 {
        n.drive("O", "t0");
    } else {
        n.gate("or", GateKind::Or, &terms).drive("O", "or");
    }
    n.build()
}

/// Balanced tree of 2-input ORs; returns the root.
fn or_tree(n: &mut Netlist, prefix: &str, mut level: Vec<String>) -> String {
    let mut depth = 0;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for (j, pair) in level.chunks(2).enumerate() {
            if let [a, b] = pair {
                let id = format!("{prefix}or{depth}_{j}");
                n.gate(&id, GateKind::Or, &[a, b]);
                next.push(id);
            } else {
                next.push(pair[0].clone());
            }
        }
        level = next;
        depth += 1;
    }
    level.pop().expect("nonempty")
}

/// Thermometer (ones first, inputs `I1 .. I{2^k-1}`) to `k`-bit BRGC
/// (outputs `O1 .. O{k}`, MSB first). Every input drives exactly one
/// output; gate depth is `⌊log2(2^k - 1)⌋`.
pub fn build_tc_to_brgc(k: usize) -> Result<Circuit> {
    cap("BRGC width", k, 1, 5)?;
    let width = (1usize << k) - 1;
    let mut n = Netlist::new(format!("tc2brgc{k}"));
    for j in 1..=width {
        n.input(format!("I{j}"), Simple);
    }
    for o in 1..=k {
        n.output(format!("O{o}"), Simple, Zero);
    }
    // a ∧ ¬b
    let and_not = GateKind::Table(TruthTable::parse("0010").expect("valid table"));
    n.drive("O1", format!("I{}", 1 << (k - 1)));
    for o in 2..=k {
        // Bit of weight 2^p toggles on at 2^p + t·2^(p+2) and off at
        // 3·2^p + t·2^(p+2).
        let p = k - o;
        let mut terms = Vec::new();
        let mut t = 0;
        while (1 << p) + t * (1 << (p + 2)) <= width {
            let on = (1 << p) + t * (1 << (p + 2));
            let off = 3 * (1 << p) + t * (1 << (p + 2));
            let id = format!("d{o}_{t}");
            n.gate(&id, and_not.clone(), &[format!("I{on}"), format!("I{off}")]);
            terms.push(id);
            t += 1;
        }
        let root = or_tree(&mut n, &format!("b{o}_"), terms);
        n.drive(format!("O{o}"), root);
    }
    n.build()
}

/// Synthesized closure of `f`, with registers renamed.
fn synthesized(name: &str, f: &BooleanFunction, registers: &[String], budget: &Budget) -> Result<Circuit> {
    synthesize(&closure_bool(f), budget)?.renamed(name, registers)
}

fn bits_of(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (0..k).map(move |i| format!("{prefix}{i}"))
}

/// 2-sort on `k`-bit BRGC words: inputs `a0.. b0..`, outputs `min0..
/// max0..`, realized as the synthesized closure of (min, max).
pub fn build_two_sort(k: usize, budget: &Budget) -> Result<Circuit> {
    cap("2-sort word width", k, 1, 3)?;
    let code = Code::brgc(k);
    let mask = (1u64 << k) - 1;
    let f = BooleanFunction::from_fn(2 * k, 2 * k, |x| {
        let decode = |w: u64| code.decode(&TernaryWord::from_bits(k, w)).expect("codeword") as u64;
        let encode = |v: u64| code.encode(v as usize).expect("in range").to_bits().expect("stable");
        let (a, b) = (decode(x >> k), decode(x & mask));
        (encode(a.min(b)) << k) | encode(a.max(b))
    });
    let names: Vec<String> = bits_of("a", k)
        .chain(bits_of("b", k))
        .chain(bits_of("min", k))
        .chain(bits_of("max", k))
        .collect();
    synthesized(&format!("sort2_{k}"), &f, &names, budget)
}

/// `k`-bit BRGC to thermometer code `0^(n-v) 1^v` of width `2^k - 1`.
pub fn build_brgc_to_tc(k: usize, budget: &Budget) -> Result<Circuit> {
    cap("BRGC width", k, 1, 4)?;
    let width = (1usize << k) - 1;
    let (gray, tc) = (Code::brgc(k), Code::tc(width));
    let f = BooleanFunction::from_fn(k, width, |x| {
        let v = gray.decode(&TernaryWord::from_bits(k, x)).expect("codeword");
        tc.encode(v).expect("in range").to_bits().expect("stable")
    });
    let names: Vec<String> = bits_of("g", k).chain(bits_of("t", width)).collect();
    synthesized(&format!("brgc2tc{k}"), &f, &names, budget)
}

/// Comparator layers of a sorting network; each pair `(i, j)`, `i < j`,
/// puts the minimum on channel `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortingNetwork {
    pub channels: usize,
    pub word_bits: usize,
    pub layers: Vec<Vec<(usize, usize)>>,
}

impl SortingNetwork {
    /// Batcher's odd-even merge sort for the next power of two, with
    /// comparators touching channels `≥ channels` removed.
    pub fn batcher(channels: usize, word_bits: usize) -> Self {
        let size = channels.next_power_of_two();
        let mut layers = Vec::new();
        let mut p = 1;
        while p < size {
            let mut k = p;
            while k >= 1 {
                let mut layer = Vec::new();
                let mut j = k % p;
                while j + k < size {
                    for i in 0..k.min(size - j - k) {
                        let (a, b) = (i + j, i + j + k);
                        if a / (2 * p) == b / (2 * p) && b < channels {
                            layer.push((a, b));
                        }
                    }
                    j += 2 * k;
                }
                if !layer.is_empty() {
                    layers.push(layer);
                }
                k /= 2;
            }
            p *= 2;
        }
        SortingNetwork {
            channels,
            word_bits,
            layers,
        }
    }

    pub fn comparators(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Applies the network to integers.
    pub fn apply<T: Ord + Copy>(&self, values: &mut [T]) {
        for layer in &self.layers {
            for &(a, b) in layer {
                if values[a] > values[b] {
                    values.swap(a, b);
                }
            }
        }
    }
}

/// Adds the network's comparators to `n`, reading channel words from
/// `wires` and replacing them with the outputs.
fn add_network(n: &mut Netlist, net: &SortingNetwork, sorter: &Circuit, wires: &mut [Vec<String>]) -> Result<()> {
    let k = net.word_bits;
    for (l, layer) in net.layers.iter().enumerate() {
        for &(a, b) in layer {
            let inputs: Vec<String> = wires[a].iter().chain(&wires[b]).cloned().collect();
            let outs = n.instantiate(sorter, &format!("s{l}_{a}_{b}_"), &inputs)?;
            wires[a] = outs[..k].to_vec();
            wires[b] = outs[k..].to_vec();
        }
    }
    Ok(())
}

/// Sorting network on `n` channels of `k`-bit BRGC words. Inputs are
/// `x{c}_{bit}`, outputs `y{c}_{bit}`; channel 0 receives the minimum.
pub fn build_sorting_network(n: usize, k: usize, budget: &Budget) -> Result<(SortingNetwork, Circuit)> {
    cap("channels", n, 1, 8)?;
    cap("word width", k, 1, 3)?;
    let net = SortingNetwork::batcher(n, k);
    let sorter = build_two_sort(k, budget)?;
    let mut nl = Netlist::new(format!("sortnet{n}x{k}"));
    let mut wires: Vec<Vec<String>> = Vec::with_capacity(n);
    for c in 0..n {
        let names: Vec<String> = (0..k).map(|b| format!("x{c}_{b}")).collect();
        for name in &names {
            nl.input(name, Simple);
        }
        wires.push(names);
    }
    add_network(&mut nl, &net, &sorter, &mut wires)?;
    for (c, w) in wires.iter().enumerate() {
        for (b, src) in w.iter().enumerate() {
            nl.output(format!("y{c}_{b}"), Simple, Zero);
            nl.drive(format!("y{c}_{b}"), src);
        }
    }
    Ok((net, nl.build()?))
}

/// A thermometer reading `1^v 0^(n-v)`, or `1^v M 0^(n-v-1)` if the
/// sampled edge fell between latches `v` and `v + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TdcReading(TernaryWord);

impl TdcReading {
    pub fn word(&self) -> &TernaryWord {
        &self.0
    }

    /// Accepts words of one of the two shapes above.
    pub fn new(word: TernaryWord) -> Result<Self> {
        let digits: Vec<_> = word.iter().collect();
        let ones = digits.iter().take_while(|&&d| d == One).count();
        let rest = &digits[ones..];
        let rest = match rest.first() {
            Some(&Meta) => &rest[1..],
            _ => rest,
        };
        if rest.iter().all(|&d| d == Zero) {
            Ok(TdcReading(word))
        } else {
            Err(Error::NotACodeword {
                word: word.to_string(),
                code: "TDC reading".into(),
            })
        }
    }
}

pub fn tdc_reading(n: usize, v: usize, meta: bool) -> Result<TdcReading> {
    let limit = if meta { n.saturating_sub(1) } else { n };
    if v > limit || (meta && n == 0) {
        return Err(Error::OutOfRange {
            value: v,
            reason: if meta {
                format!("a metastable reading of width {n} needs v < {n}")
            } else {
                format!("a reading of width {n} needs v <= {n}")
            },
        });
    }
    let mut w = Code::tc_leading(n).encode(v)?;
    if meta {
        w.set(v, Meta);
    }
    Ok(TdcReading(w))
}

/// Clock-synchronization datapath for `n` nodes tolerating `f` faults:
/// TDC readings (`2^k - 1` bits each) are converted to BRGC, sorted, the
/// `(f+1)`-th and `(n-f)`-th largest are tapped and converted back to
/// thermometer code `0^(w-v) 1^v`.
#[derive(Clone, Debug)]
pub struct ClockSync {
    pub nodes: usize,
    pub faults: usize,
    pub word_bits: usize,
    pub network: SortingNetwork,
    pub circuit: Circuit,
}

/// The two selected values: `upper` is the `(f+1)`-th largest reading and
/// `lower` the `(n-f)`-th largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selected {
    pub upper: TernaryWord,
    pub lower: TernaryWord,
}

impl ClockSync {
    pub fn build(n: usize, f: usize, k: usize, budget: &Budget) -> Result<Self> {
        if n <= 3 * f {
            return Err(Error::InvalidArgument(format!("need n > 3f, got n={n}, f={f}")));
        }
        cap("nodes", n, 1, 8)?;
        cap("word width", k, 1, 3)?;
        let width = (1usize << k) - 1;
        let to_brgc = build_tc_to_brgc(k)?;
        let sorter = build_two_sort(k, budget)?;
        let to_tc = build_brgc_to_tc(k, budget)?;
        let network = SortingNetwork::batcher(n, k);

        let mut nl = Netlist::new(format!("clocksync_n{n}_f{f}_k{k}"));
        let mut wires = Vec::with_capacity(n);
        for c in 0..n {
            let inputs: Vec<String> = (1..=width).map(|j| format!("r{c}_{j}")).collect();
            for name in &inputs {
                nl.input(name, Simple);
            }
            wires.push(nl.instantiate(&to_brgc, &format!("c{c}_"), &inputs)?);
        }
        add_network(&mut nl, &network, &sorter, &mut wires)?;
        for (label, channel) in [("upper", n - 1 - f), ("lower", f)] {
            let outs = nl.instantiate(&to_tc, &format!("{label}_"), &wires[channel])?;
            for (j, src) in outs.iter().enumerate() {
                let reg = format!("{label}{j}");
                nl.output(&reg, Simple, Zero);
                nl.drive(&reg, src);
            }
        }
        Ok(ClockSync {
            nodes: n,
            faults: f,
            word_bits: k,
            network,
            circuit: nl.build()?,
        })
    }

    pub fn reading_width(&self) -> usize {
        (1 << self.word_bits) - 1
    }

    pub fn select(&self, readings: &[TdcReading]) -> Result<Selected> {
        if readings.len() != self.nodes {
            return Err(Error::ArityMismatch(format!(
                "{} readings for {} nodes",
                readings.len(),
                self.nodes
            )));
        }
        let width = self.reading_width();
        if let Some(r) = readings.iter().find(|r| r.word().width() != width) {
            return Err(Error::WidthMismatch {
                expected: width,
                found: r.word().width(),
            });
        }
        let input = readings
            .iter()
            .fold(TernaryWord::zeros(0), |acc, r| acc.concat(r.word()));
        let out = self.circuit.eval_dag(&input)?;
        Ok(Selected {
            upper: out.slice(0, width),
            lower: out.slice(width, 2 * width),
        })
    }
}

/// Builds the datapath and selects from one set of readings.
pub fn clock_sync_select(n: usize, f: usize, k: usize, readings: &[TdcReading], budget: &Budget) -> Result<Selected> {
    ClockSync::build(n, f, k, budget)?.select(readings)
}

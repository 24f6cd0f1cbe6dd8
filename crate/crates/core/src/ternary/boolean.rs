use std::fmt;

use super::word::{Meta, Ternary, TernaryWord};
use crate::error::{Error, Result};

/// Single-output Boolean function of fixed arity, stored as the list of
/// outputs for inputs in ascending binary order (first input is the MSB).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != 1 << arity {
            return Err(Error::ArityMismatch(format!(
                "truth table of arity {arity} needs {} entries, got {}",
                1 << arity,
                bits.len()
            )));
        }
        Ok(TruthTable { arity, bits })
    }

    pub fn from_fn(arity: usize, f: impl Fn(u64) -> bool) -> Self {
        TruthTable {
            arity,
            bits: (0..1u64 << arity).map(f).collect(),
        }
    }

    /// Parses a string such as `0001` (2-input AND).
    pub fn parse(bits: &str) -> Result<Self> {
        let len = bits.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::ArityMismatch(format!(
                "truth table length {len} is not a power of two"
            )));
        }
        let bits = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidWord(bits.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        TruthTable::new(len.trailing_zeros() as usize, bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, input: u64) -> bool {
        self.bits[input as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Kleene extension of a Boolean gate function: the common value of `f`
/// over `Res(x)` if there is one, otherwise `M`.
pub fn kleene_extend(f: &TruthTable, x: &TernaryWord) -> Result<Ternary> {
    if x.width() != f.arity {
        return Err(Error::ArityMismatch(format!(
            "function of arity {} applied to {} inputs",
            f.arity,
            x.width()
        )));
    }
    let mut base = 0u64;
    let mut free = Vec::new();
    for (i, d) in x.iter().enumerate() {
        let bit = 1u64 << (f.arity - 1 - i);
        match d {
            Ternary::One => base |= bit,
            Ternary::Meta => free.push(bit),
            Ternary::Zero => {}
        }
    }
    let first = f.eval(base);
    for mask in 1..1u64 << free.len() {
        let mut input = base;
        for (j, bit) in free.iter().enumerate() {
            if mask >> j & 1 == 1 {
                input |= bit;
            }
        }
        if f.eval(input) != first {
            return Ok(Meta);
        }
    }
    Ok(Ternary::from_bool(first))
}

/// Boolean function `B^m → B^n`, one stable output word per input in
/// ascending binary order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BooleanFunction {
    inputs: usize,
    outputs: usize,
    table: Vec<TernaryWord>,
}

impl BooleanFunction {
    pub fn new(inputs: usize, outputs: usize, table: Vec<TernaryWord>) -> Result<Self> {
        if table.len() != 1 << inputs {
            return Err(Error::ArityMismatch(format!(
                "{} rows for {inputs} inputs",
                table.len()
            )));
        }
        for row in &table {
            if row.width() != outputs {
                return Err(Error::WidthMismatch {
                    expected: outputs,
                    found: row.width(),
                });
            }
            if !row.is_stable() {
                return Err(Error::InvalidArgument(format!(
                    "Boolean function output {row} is not stable"
                )));
            }
        }
        Ok(BooleanFunction { inputs, outputs, table })
    }

    /// Builds the table from a function on input/output bit patterns (MSB
    /// first).
    pub fn from_fn(inputs: usize, outputs: usize, f: impl Fn(u64) -> u64) -> Self {
        BooleanFunction {
            inputs,
            outputs,
            table: (0..1u64 << inputs)
                .map(|x| TernaryWord::from_bits(outputs, f(x)))
                .collect(),
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn eval(&self, input: u64) -> &TernaryWord {
        &self.table[input as usize]
    }

    /// Output bit `bit` as a single-output truth table.
    pub fn component(&self, bit: usize) -> TruthTable {
        TruthTable {
            arity: self.inputs,
            bits: self.table.iter().map(|w| w.get(bit) == Ternary::One).collect(),
        }
    }

    /// Parses the truth-table file format:
    ///
    /// ```text
    /// table m=2 n=1
    /// 00 -> 0
    /// 01 -> 0
    /// 10 -> 0
    /// 11 -> 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = significant_lines(text);
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `table m=<m> n=<n>` header"))?;
        let (m, n) = parse_header(header, "table", hline)?;
        if m > 20 {
            return Err(Error::parse(hline, format!("m={m} is too large")));
        }
        let mut rows: Vec<Option<TernaryWord>> = vec![None; 1 << m];
        for (line, content) in lines {
            let (lhs, rhs) = content
                .split_once("->")
                .ok_or_else(|| Error::parse(line, "expected `<input> -> <output>`"))?;
            let input: TernaryWord = lhs
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(line, e.to_string()))?;
            let output: TernaryWord = rhs
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(line, e.to_string()))?;
            if input.width() != m || output.width() != n {
                return Err(Error::parse(line, format!("expected {m} input and {n} output bits")));
            }
            let idx = input
                .to_bits()
                .ok_or_else(|| Error::parse(line, "inputs must be stable"))?;
            if !output.is_stable() {
                return Err(Error::parse(line, "outputs must be stable"));
            }
            if rows[idx as usize].replace(output).is_some() {
                return Err(Error::parse(line, format!("duplicate row for {input}")));
            }
        }
        let table = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| Error::parse(0, format!("missing row for {}", TernaryWord::from_bits(m, i as u64))))
            })
            .collect::<Result<Vec<_>>>()?;
        BooleanFunction::new(m, n, table)
    }

    pub fn emit(&self) -> String {
        let mut out = format!("table m={} n={}\n", self.inputs, self.outputs);
        for (i, row) in self.table.iter().enumerate() {
            out.push_str(&format!("{} -> {row}\n", TernaryWord::from_bits(self.inputs, i as u64)));
        }
        out
    }
}

/// Non-empty lines with `#` comments stripped, paired with 1-based line
/// numbers.
pub(crate) fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parses `<keyword> m=<m> n=<n>` and returns `(m, n)`. Trailing tokens are
/// rejected.
pub(crate) fn parse_header(header: &str, keyword: &str, line: usize) -> Result<(usize, usize)> {
    let toks: Vec<&str> = header.split_whitespace().collect();
    let usage = || Error::parse(line, format!("expected `{keyword} m=<m> n=<n>`"));
    if toks.len() != 3 || toks[0] != keyword {
        return Err(usage());
    }
    let field = |tok: &str, key: &str| -> Result<usize> {
        tok.strip_prefix(key).and_then(|v| v.parse().ok()).ok_or_else(usage)
    };
    Ok((field(toks[1], "m=")?, field(toks[2], "n=")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ternary::word;
    use crate::ternary::{One, Zero};

    fn and2() -> TruthTable {
        TruthTable::parse("0001").unwrap()
    }

    fn or2() -> TruthTable {
        TruthTable::parse("0111").unwrap()
    }

    #[test]
    fn kleene_examples() {
        assert_eq!(kleene_extend(&and2(), &word("M0")).unwrap(), Zero);
        assert_eq!(kleene_extend(&and2(), &word("M1")).unwrap(), Meta);
        assert_eq!(kleene_extend(&or2(), &word("M1")).unwrap(), One);
        assert!(kleene_extend(&and2(), &word("M")).is_err());
    }

    #[test]
    fn kleene_agrees_with_boolean_on_stable_inputs() {
        for arity in 0..=3 {
            for code in 0..1u64 << (1 << arity) {
                let f = TruthTable::from_fn(arity, |x| code >> x & 1 == 1);
                for x in 0..1u64 << arity {
                    let w = TernaryWord::from_bits(arity, x);
                    assert_eq!(kleene_extend(&f, &w).unwrap(), Ternary::from_bool(f.eval(x)));
                }
            }
        }
    }

    #[test]
    fn kleene_is_monotone_for_all_two_input_gates() {
        for code in 0..16u64 {
            let f = TruthTable::from_fn(2, |x| code >> x & 1 == 1);
            for x in TernaryWord::all(2) {
                let fx = kleene_extend(&f, &x).unwrap();
                for y in TernaryWord::all(2).filter(|y| x.covers(y)) {
                    assert!(fx.covers(kleene_extend(&f, &y).unwrap()), "{f} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn table_file_round_trip() {
        let f = BooleanFunction::from_fn(2, 2, |x| x ^ 1);
        let parsed = BooleanFunction::parse(&f.emit()).unwrap();
        assert_eq!(parsed, f);
        assert_eq!(f.component(1), TruthTable::parse("1010").unwrap());
    }

    #[test]
    fn table_file_rejects_missing_rows() {
        let err = BooleanFunction::parse("table m=1 n=1\n0 -> 1\n").unwrap_err();
        assert!(err.to_string().contains("missing row"), "{err}");
        assert!(BooleanFunction::parse("table m=1 n=1\nM -> 1\n1 -> 0\n").is_err());
    }
}

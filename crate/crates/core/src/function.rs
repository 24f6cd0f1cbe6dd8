//! Specifications `f: T^m → Pow(T^n)` and the spec-table file format.

use std::fmt;

use crate::error::{Budget, Error, Result};
use crate::ternary::{parse_header, significant_lines, CubeSet, Meta, One, Ternary, TernaryWord, Zero};

/// One output bit of a natural specification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    One,
    Any,
}

impl Entry {
    /// The cube digit denoting the same set of values.
    pub fn as_ternary(self) -> Ternary {
        match self {
            Entry::Zero => Zero,
            Entry::One => One,
            Entry::Any => Meta,
        }
    }

    pub fn from_ternary(t: Ternary) -> Self {
        match t {
            Zero => Entry::Zero,
            One => Entry::One,
            Meta => Entry::Any,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Entry::Zero => '0',
            Entry::One => '1',
            Entry::Any => '*',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Form {
    General(Vec<CubeSet>),
    /// A natural value is a product of `{0}`, `{1}` and `T`, i.e. exactly
    /// `Res_M` of one cube, where `M` stands for "any".
    Natural(Vec<TernaryWord>),
}

/// A specification, tabulated over every input in `T^m` (indexed by
/// [`TernaryWord::ternary_index`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    inputs: usize,
    outputs: usize,
    form: Form,
}

/// Tables larger than this are refused outright.
const MAX_TABULATED_INPUTS: usize = 12;

fn check_arity(m: usize) -> Result<()> {
    if m > MAX_TABULATED_INPUTS {
        return Err(Error::InvalidArgument(format!(
            "specifications are tabulated over T^m; m={m} exceeds {MAX_TABULATED_INPUTS}"
        )));
    }
    Ok(())
}

impl FunctionSpec {
    pub fn general(inputs: usize, outputs: usize, values: Vec<CubeSet>) -> Result<Self> {
        check_arity(inputs)?;
        if values.len() != 3usize.pow(inputs as u32) {
            return Err(Error::ArityMismatch(format!(
                "{} values for {inputs} inputs",
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.width() != outputs {
                return Err(Error::WidthMismatch {
                    expected: outputs,
                    found: v.width(),
                });
            }
            if v.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "empty value at input {}",
                    TernaryWord::from_ternary_index(inputs, i)
                )));
            }
        }
        Ok(FunctionSpec {
            inputs,
            outputs,
            form: Form::General(values),
        })
    }

    /// `values[i]` is a cube whose `M` digits mean "any value".
    pub fn natural(inputs: usize, outputs: usize, values: Vec<TernaryWord>) -> Result<Self> {
        check_arity(inputs)?;
        if values.len() != 3usize.pow(inputs as u32) {
            return Err(Error::ArityMismatch(format!(
                "{} values for {inputs} inputs",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.width() != outputs) {
            return Err(Error::WidthMismatch {
                expected: outputs,
                found: v.width(),
            });
        }
        Ok(FunctionSpec {
            inputs,
            outputs,
            form: Form::Natural(values),
        })
    }

    pub fn general_from_fn(inputs: usize, outputs: usize, f: impl Fn(&TernaryWord) -> CubeSet) -> Result<Self> {
        check_arity(inputs)?;
        Self::general(inputs, outputs, TernaryWord::all(inputs).map(|x| f(&x)).collect())
    }

    pub fn natural_from_fn(inputs: usize, outputs: usize, f: impl Fn(&TernaryWord) -> TernaryWord) -> Result<Self> {
        check_arity(inputs)?;
        Self::natural(inputs, outputs, TernaryWord::all(inputs).map(|x| f(&x)).collect())
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn is_natural_form(&self) -> bool {
        matches!(self.form, Form::Natural(_))
    }

    /// `f(x)` as a cube set.
    pub fn value(&self, x: &TernaryWord) -> CubeSet {
        match &self.form {
            Form::General(v) => v[x.ternary_index()].clone(),
            Form::Natural(v) => CubeSet::singleton(v[x.ternary_index()].clone()),
        }
    }

    /// The natural-form cube at `x`, if this spec is stored in natural form.
    pub fn natural_value(&self, x: &TernaryWord) -> Option<&TernaryWord> {
        match &self.form {
            Form::General(_) => None,
            Form::Natural(v) => Some(&v[x.ternary_index()]),
        }
    }

    pub fn entry(&self, x: &TernaryWord, bit: usize) -> Option<Entry> {
        self.natural_value(x).map(|c| Entry::from_ternary(c.get(bit)))
    }

    /// `y ∈ f(x)`.
    pub fn allows(&self, x: &TernaryWord, y: &TernaryWord) -> bool {
        match &self.form {
            Form::General(v) => v[x.ternary_index()].contains(y),
            Form::Natural(v) => y.width() == self.outputs && v[x.ternary_index()].covers(y),
        }
    }

    /// `Res_M(cube) ⊆ f(x)`, or a member of the cube outside `f(x)`.
    pub fn uncovered(&self, x: &TernaryWord, cube: &TernaryWord) -> Option<TernaryWord> {
        match &self.form {
            Form::General(v) => v[x.ternary_index()].find_uncovered(cube),
            Form::Natural(v) => {
                let allowed = &v[x.ternary_index()];
                if cube.width() == self.outputs && allowed.covers(cube) {
                    None
                } else {
                    Some(cube.clone())
                }
            }
        }
    }

    /// The same spec in natural form if every value is a product of
    /// `{0}`, `{1}` and `T`; does not check specificity.
    pub fn to_natural_form(&self) -> Option<FunctionSpec> {
        match &self.form {
            Form::Natural(_) => Some(self.clone()),
            Form::General(v) => {
                let cubes = v.iter().map(|s| s.as_single().cloned()).collect::<Option<Vec<_>>>()?;
                Some(FunctionSpec {
                    inputs: self.inputs,
                    outputs: self.outputs,
                    form: Form::Natural(cubes),
                })
            }
        }
    }

    /// The same spec in general form.
    pub fn to_general_form(&self) -> FunctionSpec {
        match &self.form {
            Form::General(_) => self.clone(),
            Form::Natural(v) => FunctionSpec {
                inputs: self.inputs,
                outputs: self.outputs,
                form: Form::General(v.iter().cloned().map(CubeSet::singleton).collect()),
            },
        }
    }

    /// `self(x) ⊆ other(x)` for every `x`.
    pub fn is_subfunction_of(&self, other: &FunctionSpec) -> bool {
        self.inputs == other.inputs
            && self.outputs == other.outputs
            && TernaryWord::all(self.inputs)
                .all(|x| self.value(&x).cubes().iter().all(|c| other.uncovered(&x, c).is_none()))
    }

    /// Same denotation at every input.
    pub fn same_as(&self, other: &FunctionSpec) -> bool {
        self.is_subfunction_of(other) && other.is_subfunction_of(self)
    }

    /// Parses the spec-table format. A file is read in natural form when it
    /// uses `*` and neither `M` nor `,` on any right-hand side.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = significant_lines(text);
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `spec m=<m> n=<n>` header"))?;
        let (m, n) = parse_header(header, "spec", hline)?;
        check_arity(m).map_err(|e| Error::parse(hline, e.to_string()))?;
        let rows: Vec<(usize, &str, &str)> = lines
            .map(|(line, content)| {
                content
                    .split_once("->")
                    .map(|(l, r)| (line, l.trim(), r.trim()))
                    .ok_or_else(|| Error::parse(line, "expected `<input> -> <value>`"))
            })
            .collect::<Result<_>>()?;
        let natural = rows.iter().any(|r| r.2.contains('*')) && !rows.iter().any(|r| r.2.contains(['M', ',']));

        let count = 3usize.pow(m as u32);
        let mut general: Vec<Option<CubeSet>> = vec![None; count];
        let mut cubes: Vec<Option<TernaryWord>> = vec![None; count];
        for (line, lhs, rhs) in rows {
            let x: TernaryWord = lhs.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
            if x.width() != m {
                return Err(Error::parse(line, format!("input {x} does not have {m} bits")));
            }
            let idx = x.ternary_index();
            if general[idx].is_some() || cubes[idx].is_some() {
                return Err(Error::parse(line, format!("duplicate row for {x}")));
            }
            let parse_cube = |s: &str, star_is_any: bool| -> Result<TernaryWord> {
                let digits = s
                    .chars()
                    .map(|c| match c {
                        '*' if star_is_any => Some(Meta),
                        _ => Ternary::from_char(c),
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::parse(line, format!("invalid value `{s}`")))?;
                if digits.len() != n {
                    return Err(Error::parse(line, format!("value `{s}` does not have {n} bits")));
                }
                Ok(TernaryWord::from_digits(digits))
            };
            if natural {
                cubes[idx] = Some(parse_cube(rhs, true)?);
            } else {
                let members = rhs
                    .split(',')
                    .map(|s| parse_cube(s.trim(), false))
                    .collect::<Result<Vec<_>>>()?;
                general[idx] = Some(CubeSet::new(n, members)?);
            }
        }
        let missing = |i: usize| {
            Error::parse(
                0,
                format!("missing row for input {}", TernaryWord::from_ternary_index(m, i)),
            )
        };
        if natural {
            let values = cubes
                .into_iter()
                .enumerate()
                .map(|(i, c)| c.ok_or_else(|| missing(i)))
                .collect::<Result<Vec<_>>>()?;
            FunctionSpec::natural(m, n, values)
        } else {
            let values = general
                .into_iter()
                .enumerate()
                .map(|(i, c)| c.ok_or_else(|| missing(i)))
                .collect::<Result<Vec<_>>>()?;
            FunctionSpec::general(m, n, values)
        }
    }

    pub fn emit(&self) -> String {
        let mut out = format!("spec m={} n={}\n", self.inputs, self.outputs);
        for x in TernaryWord::all(self.inputs) {
            let value = match &self.form {
                Form::Natural(v) => v[x.ternary_index()]
                    .iter()
                    .map(|t| Entry::from_ternary(t).to_char())
                    .collect::<String>(),
                Form::General(v) => v[x.ternary_index()]
                    .cubes()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            };
            out.push_str(&format!("{x} -> {value}\n"));
        }
        out
    }

    /// Every stable word in `f(x)`, sorted.
    pub(crate) fn stable_values(&self, x: &TernaryWord, budget: &Budget) -> Result<Vec<TernaryWord>> {
        self.value(x).stable_members(budget)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

fn cube_of(x: &TernaryWord) -> CubeSet {
    CubeSet::singleton(x.clone())
}

/// 1-bit multiplexer `(a, b, s)`: `Res_M(a)` if `s = 0`, `Res_M(b)` if
/// `s = 1`, anything if `s = M`.
pub fn mux() -> FunctionSpec {
    FunctionSpec::general_from_fn(3, 1, |x| match x.get(2) {
        Zero => cube_of(&x.slice(0, 1)),
        One => cube_of(&x.slice(1, 2)),
        Meta => CubeSet::full(1),
    })
    .expect("well-formed")
}

/// Metastability-containing multiplexer: as [`mux`], but `Res_M(a)` also
/// whenever `a = b`.
pub fn cmux() -> FunctionSpec {
    FunctionSpec::general_from_fn(3, 1, |x| {
        let (a, b, s) = (x.get(0), x.get(1), x.get(2));
        if s == Zero || a == b {
            cube_of(&x.slice(0, 1))
        } else if s == One {
            cube_of(&x.slice(1, 2))
        } else {
            CubeSet::full(1)
        }
    })
    .expect("well-formed")
}

/// Fan-out buffer with `r` copies: `{x^r}` for stable `x`, otherwise
/// `⋃_i Res_M(0^i M 1^(r-i-1))`.
pub fn masking_fanout(r: usize) -> FunctionSpec {
    FunctionSpec::general_from_fn(1, r, |x| match x.get(0) {
        Meta => CubeSet::new(
            r,
            (0..r).map(|i| {
                TernaryWord::from_digits((0..r).map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => Zero,
                    std::cmp::Ordering::Equal => Meta,
                    std::cmp::Ordering::Greater => One,
                }))
            }),
        )
        .expect("common width"),
        b => cube_of(&TernaryWord::filled(r, b)),
    })
    .expect("well-formed")
}

/// Metastability detector: `{1}` on `M`, `{0}` otherwise.
pub fn detector() -> FunctionSpec {
    FunctionSpec::general_from_fn(1, 1, |x| {
        cube_of(&TernaryWord::filled(1, if x.get(0) == Meta { One } else { Zero }))
    })
    .expect("well-formed")
}

/// Metastability resolver: `{0, 1}` on `M`, `{x}` otherwise.
pub fn resolver() -> FunctionSpec {
    FunctionSpec::general_from_fn(1, 1, |x| match x.get(0) {
        Meta => CubeSet::new(1, [TernaryWord::filled(1, Zero), TernaryWord::filled(1, One)]).expect("width 1"),
        _ => cube_of(x),
    })
    .expect("well-formed")
}

/// 2-bit copy that may resolve metastability to anything but `MM`:
/// `Res_M(x) \ {MM}`.
pub fn mm_example() -> FunctionSpec {
    FunctionSpec::general_from_fn(2, 2, |x| {
        let members = x
            .res_partial(&Budget::default())
            .expect("two bits")
            .into_iter()
            .filter(|y| y.meta_count() < 2);
        CubeSet::new(2, members).expect("width 2")
    })
    .expect("well-formed")
}

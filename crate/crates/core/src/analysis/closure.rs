use crate::error::{Budget, Result};
use crate::function::FunctionSpec;
use crate::ternary::{BooleanFunction, Meta, One, Ternary, TernaryWord, Zero};

/// Metastable closure of a Boolean function: bit `i` at `x` is `b` if every
/// stable resolution of `x` maps bit `i` to `b`, and "any" otherwise.
pub fn closure_bool(f: &BooleanFunction) -> FunctionSpec {
    let m = f.inputs();
    let mut values: Vec<TernaryWord> = Vec::with_capacity(3usize.pow(m as u32));
    for (i, x) in TernaryWord::all(m).enumerate() {
        debug_assert_eq!(x.ternary_index(), i);
        let v = match x.meta_positions().next() {
            None => f.eval(x.to_bits().expect("stable")).clone(),
            // Both children precede `x` in ternary index order.
            Some(p) => {
                let lo = &values[x.clone().with(p, Zero).ternary_index()];
                let hi = &values[x.clone().with(p, One).ternary_index()];
                lo.join(hi)
            }
        };
        values.push(v);
    }
    FunctionSpec::natural(m, f.outputs(), values).expect("one value per input")
}

/// `Zero`/`One` if bit `i` of every member of `f(x)` is that value, `Meta`
/// otherwise.
fn bit_projection(f: &FunctionSpec, x: &TernaryWord) -> TernaryWord {
    let value = f.value(x);
    TernaryWord::from_digits((0..f.outputs()).map(|i| {
        let mut digits = value.cubes().iter().map(|c| c.get(i));
        let first = digits.next().unwrap_or(Meta);
        if first != Meta && digits.all(|d| d == first) {
            first
        } else {
            Meta
        }
    }))
}

/// Metastable closure of a specification, quantifying over all partial
/// resolutions of the input.
pub fn closure_general(f: &FunctionSpec, budget: &Budget) -> Result<FunctionSpec> {
    let m = f.inputs();
    let count = 3usize.pow(m as u32);
    budget.check_states(count)?;
    let mut values: Vec<TernaryWord> = Vec::with_capacity(count);
    // Every x' ≠ x in Res_M(x) lies in Res_M(x[p := b]) for some M position
    // p of x and some stable b, and those words precede x.
    for x in TernaryWord::all(m) {
        let mut v = bit_projection(f, &x);
        for p in x.meta_positions() {
            for b in [Zero, One] {
                v = meet(&v, &values[x.clone().with(p, b).ternary_index()]);
            }
        }
        values.push(v);
    }
    FunctionSpec::natural(m, f.outputs(), values)
}

fn meet(a: &TernaryWord, b: &TernaryWord) -> TernaryWord {
    TernaryWord::from_digits(
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| if x == y { x } else { Ternary::Meta }),
    )
}

//! Ternary values, words, cube sets, codes and Boolean tables.

mod boolean;
mod code;
mod cube;
mod word;

pub use boolean::{kleene_extend, BooleanFunction, TruthTable};
pub(crate) use boolean::{parse_header, significant_lines};
pub use code::{Code, CodeKind};
pub use cube::CubeSet;
pub use word::{word, Meta, One, Ternary, TernaryWord, Zero};

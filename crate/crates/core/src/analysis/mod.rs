//! Classification and synthesis: metastable closure, natural functions,
//! two-level synthesis, unrolling and impossibility witnesses.

mod closure;
mod implicants;
mod natural;
mod synth;
mod unroll;
mod witness;

pub use closure::{closure_bool, closure_general};
pub use implicants::prime_implicants;
pub use natural::{find_natural_subfunction, is_natural};
pub use synth::synthesize;
pub use unroll::unroll;
pub use witness::{metastable_witness, pivotal_sequence, Witness};

pub mod chars;
pub mod check;
pub mod constructible;
pub mod error;
pub mod freegroup;
pub mod groupoid;
pub mod hull;
pub mod matrix;
pub mod periodic;
pub mod regset;
pub mod shift;
pub mod specfile;
pub mod tightness;
pub mod word;

pub use error::{Error, Result};
pub use matrix::{IntOp, SparseOp};
pub use periodic::EvPeriodicWord;
pub use regset::{Cardinality, RegularSet};
pub use shift::{compile, PatternAtom, ShiftAutomaton, State, SubshiftSpec};
pub use word::{Alphabet, ExtWord, Letter, Word};

//! Certified real arithmetic built from natural-number function classes.
//!
//! Reals are approximation oracles `x ↦ q` with an explicit modulus, built
//! from F-sequences (triples of natural-number functions) and tagged with the
//! function class their construction stays inside.

pub mod class;
pub mod creal;
pub mod exact;
pub mod expansions;
pub mod fseq;
pub mod semialg;
pub mod series;
pub mod term;

//! Exact symbolic computation of logarithms of Itô flow maps.
//!
//! Iterated Itô integrals of semimartingales multiply according to the
//! quasi-shuffle product, and the quasi-shuffle product is in turn governed by
//! the algebra of surjections. This crate implements that chain end to end:
//!
//! * [`word`], [`expansion`], [`qshuffle`]: bracket words, their linear
//!   combinations with exact rational coefficients, and the quasi-shuffle
//!   product (recursive and surjection-indexed).
//! * [`surjection`]: the algebra `(Sj, ◇)`, descent sets, the embedding of
//!   noncommutative symmetric functions, and the logarithm of the identity
//!   series with coefficients `(-1)^d / (n C(n-1, d))`.
//! * [`ito`]: the Itô analogue of the Chen–Strichartz formula for driver
//!   systems, and entry-wise logarithms of the Itô–Taylor series of linear
//!   matrix equations `dX = X_- dM`.
//! * [`numeric`]: discrete sample paths on which every symbolic identity holds
//!   exactly (left-point sums, increment-product brackets), plus Monte Carlo
//!   flow comparisons.
//! * [`verify`]: the verification suites behind the `itolog verify` command.

pub mod coeff;
pub mod error;
pub mod expansion;
pub mod ito;
pub mod limits;
pub mod numeric;
pub mod qshuffle;
pub mod surjection;
pub mod verify;
pub mod word;

pub use coeff::{rat, Coeff};
pub use error::{Error, Result};
pub use expansion::Expansion;
pub use qshuffle::{bullet, half_down, half_up, qsh, qsh_via_surjections, shuffle_projection};
pub use surjection::{Surjection, SurjElement};
pub use word::{block_product, bracket_words, Block, BracketWord, Letter};

//! Exact computation of mapping class group representations on the rational
//! cohomology of unordered configuration spaces of a one-boundary surface.
//!
//! Everything is computed over `Q` with arbitrary-precision rational
//! arithmetic; there is no floating point anywhere in this crate.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line surface live in the companion `confrep-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cohomology;
pub mod extalg;
pub mod freegroup;
pub mod johnson;
pub mod matrix;
pub mod mcg;
pub mod rng;

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;
/// Exact integer scalar used throughout.
pub type Int = num_bigint::BigInt;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// `n choose k`, exact (the dimension tables stay well inside `usize`).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

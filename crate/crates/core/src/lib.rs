//! Invariants and decision procedures for compact Stein 4-manifolds given as
//! combinatorial handlebodies.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function on immutable values; file formats and the command-line front end
//! live in the `steinx` crate.
//!
//! Layout, bottom-up:
//!
//! - [`intlinalg`]: big-integer matrices, Smith normal form, kernels, form invariants
//! - [`legendrian`]: Thurston–Bennequin and rotation numbers of front data
//! - [`stein`]: the handlebody model, its chain complex and π₁ presentation
//! - [`chern`]: first Chern class, divisibility, rotation divisor
//! - [`contact`]: the (n, r) classification of the supported contact 5-manifolds
//! - [`acmoves`]: bounded Andrews–Curtis search for pages with 1-handles
//! - [`genus`]: adjunction genus bounds and the intersection genus
//! - [`enumeration`]: finite candidate sets for the first Chern class
//! - [`exotica`]: detection of pairwise non-diffeomorphic subfamilies
//! - [`families`]: generators for the standard example families
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod acmoves;
pub mod chern;
pub mod contact;
pub mod enumeration;
pub mod exotica;
pub mod families;
pub mod genus;
pub mod intlinalg;
pub mod legendrian;
pub mod stein;

pub use num_bigint::BigInt;

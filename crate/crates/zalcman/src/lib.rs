//! Sharp coefficient-functional bounds for classes of normalized analytic
//! functions, with the machinery to verify and stress-test them numerically.
//!
//! The object of study is the generalized Zalcman functional
//!
//! ```text
//! phi(f, n, m; lambda) = |lambda a_n a_m - a_{n+m-1}|
//! ```
//!
//! for f(z) = z + a_2 z^2 + ... on the unit disc.  For seven classes --
//! hulls of starlike and convex functions of order alpha, functions with
//! Re f' > beta or Re(f/z) > beta, typically real functions, univalent
//! functions with real coefficients, and two close-to-convex subclasses --
//! the crate provides:
//!
//! - the piecewise closed-form bound for every (n, m, lambda), with branch
//!   labels, validity domain, and the extremal expected to attain it
//!   ([`bounds`]);
//! - class members generated from finite Herglotz measures and the full
//!   extremal catalog ([`classes`]);
//! - positivity forms, Toeplitz membership signals, and brute-force grid
//!   oracles that replay the inequalities behind the bounds ([`verify`]);
//! - seeded multistart maximization of phi over the measure space, for
//!   sharpness confirmation and violation hunting ([`search`]);
//! - assembled pass/fail batteries ([`suite`]) and a batch CLI ([`cli`]).
//!
//! # Quick start
//!
//! ```
//! use zalcman::bounds::{bound, BoundResult};
//! use zalcman::classes::ClassSpec;
//! use zalcman::series::FunctionalQuery;
//!
//! let spec = ClassSpec::R { beta: 0.0 };
//! let q = FunctionalQuery::new(2, 2, 2.0)?;
//! match bound(&spec, &q)? {
//!     BoundResult::Valid(v) => assert!((v.value - 4.0 / 3.0).abs() < 1e-15),
//!     BoundResult::OutsideDomain(code) => panic!("uncovered: {code}"),
//! }
//! # Ok::<(), zalcman::Error>(())
//! ```
//!
//! All computation is double precision; the bounds at desk scale (n, m up
//! to 32 or so) stay far below the range where that matters.  Everything is
//! a pure function on immutable data, safe to call concurrently; the one
//! internal cache (weight tables) is locked and deterministic.

pub mod bounds;
pub mod classes;
pub mod cli;
pub mod error;
pub mod search;
pub mod series;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};

// The guide's code blocks double as doctests: each chapter becomes a rustdoc
// page here, so `cargo test --doc` keeps book and library in sync.  One
// module per chapter makes a failing snippet name its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/functional.md")]
    mod functional {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
}

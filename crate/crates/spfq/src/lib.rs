//! Sparse secret sharing over prime fields for private, straggler-tolerant
//! distributed sparse matrix multiplication.
//!
//! Masking a sparse matrix with uniform randomness hides it perfectly but
//! destroys its sparsity. This crate implements the alternative: padding
//! matrices drawn *dependently* on the source so that every share
//! `A + alpha_i * R` keeps a prescribed fraction of zeros, with the leakage
//! (mutual information per entry, in q-ary units) provably minimized for
//! that sparsity. Products of two encoded matrices lie on a degree-2 matrix
//! polynomial, so any three worker results reconstruct `A * B` exactly and
//! slow workers are tolerated by adding evaluations.
//!
//! The layers, bottom up:
//!
//! * [`field`] — exact arithmetic in F_q (prime `q`, checked).
//! * [`spmat`] — sparse matrices, sparse products, source sampling, the
//!   `SPFQ 1` text format.
//! * [`model`] — the conditional padding distributions and their sparsity
//!   accounting.
//! * [`leakage`] — entropy, KL divergence, closed-form per-share leakage
//!   and the brute-force mutual-information oracles that certify it.
//! * [`optimizer`] — leakage-optimal parameters: root-finding for the
//!   n-share scheme, the asymmetric two-share optimum, tradeoff sweeps and
//!   an exhaustive grid oracle.
//! * [`sharing`] — padding samplers, share generation, Lagrange
//!   reconstruction, the fixed four-task/three-task schemes, share-set
//!   serialization.
//! * [`simulator`] — hermetic worker/straggler simulation and scheme
//!   comparison.
//! * [`checks`] — the named verification batteries behind `spfq verify`.
//!
//! ```
//! use spfq::field::PrimeField;
//! use spfq::optimizer::tradeoff_point;
//!
//! // best 2-share encoding of a 95%-sparse matrix over F_89 with
//! // 90%-sparse shares: each share reveals ~23% of an entry's entropy
//! let field = PrimeField::new(89)?;
//! let point = tradeoff_point(0.95, 0.9, field, 2)?;
//! assert!((point.relative_leakage - 0.2334759514).abs() < 1e-10);
//! # Ok::<(), spfq::Error>(())
//! ```
//!
//! The narrative guide with runnable examples lives in `book/` (rendered
//! with mdbook); its code blocks are doc-tested alongside this crate.

pub mod checks;
pub mod error;
pub mod field;
pub mod golden;
pub mod leakage;
pub mod model;
pub mod optimizer;
pub mod rng;
pub mod sharing;
pub mod simulator;
pub mod spmat;

#[cfg(doctest)]
mod book_tests;

pub use error::{Error, Result};

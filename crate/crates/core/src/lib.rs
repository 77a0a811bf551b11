//! Exact-arithmetic combinatorics of decorated planar terms.
//!
//! The crate implements, over an arbitrary finite signature:
//!
//! * terms as decorated ordered rooted trees, with preorder node addressing,
//!   a textual grammar, and the usual structural statistics;
//! * connection words (dyadic rational coordinates of terms) and the
//!   easterly-wind partial order they induce, together with its covering
//!   rewrite rule, terminal-interval lattices, joins and brute-force meets;
//! * tilting maps (closure operators of the order), tilted subposets, and
//!   the scope-sequence description of fully tilted terms;
//! * an edge labeling of the Hasse diagram with unique increasing chains,
//!   and exact Möbius computation with a closure-theoretic cross-check;
//! * balanced forests, Fuss-Catalan and rooted-tree lattices with their
//!   bijections to trees with fixed arity and to the Tamari order;
//! * leaning forests and the natural Hopf algebra of the free nonsymmetric
//!   operad, with elementary, fundamental and homogeneous bases, products,
//!   the admissible-pair coproduct, basis changes, and the specialization
//!   to noncommutative symmetric functions.
//!
//! All arithmetic is exact: order coordinates are dyadic rationals and Hopf
//! coefficients are arbitrary-precision rationals.
//!
//! With the default `parallel` feature the breadth-first poset constructions
//! fan out over rayon; disabling the feature yields the sequential fallback.
//! Output ordering is canonical (sorted by rendered text) in both modes.

pub mod dyadic;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod hopf;
pub mod order;
pub mod poset;
pub mod shell;
pub mod signature;
pub mod term;
pub mod tilt;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use poset::Poset;
pub use signature::Signature;
pub use term::{Edge, Term};
pub use tilt::TiltSet;

/// Default cap on the number of elements a poset construction may collect.
pub const DEFAULT_CEILING: usize = 1_000_000;

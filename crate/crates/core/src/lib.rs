//! Spatial-behavioral logics derived from calculus presentations.
//!
//! A [`Presentation`] lists sorts, term constructors, structural equations and
//! rewrite rules. From it this crate derives:
//!
//! * canonical terms modulo structural congruence ([`term`]),
//! * one-step rewriting closed under contexts, with replayable traces ([`rewrite`]),
//! * a per-sort formula language with lifted constructors, context-parametric
//!   modalities and greatest fixed points ([`formula`]),
//! * a three-valued membership checker ([`checker`]) and an independent
//!   set-based denotation used to validate it ([`oracle`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod budget;
pub mod builtin;
pub mod checker;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod oracle;
pub mod pattern;
pub mod rewrite;
pub mod sexpr;
pub mod signature;
pub mod term;

pub use budget::Budget;
pub use checker::{check, denote, Checker, Denotation, Evidence, Stats, Verdict};
pub use enumerate::{enumerate_terms, GeneratorSet};
pub use error::{Error, Result};
pub use formula::{parse_formula, Formula};
pub use pattern::{Context, Pattern, Subst};
pub use rewrite::{normalize, reachable, replay, step, Trace, TraceStep};
pub use signature::{parse_presentation, validate, Presentation};
pub use term::{canonicalize, parse_term, Term};

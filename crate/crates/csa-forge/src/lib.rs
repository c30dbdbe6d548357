//! Exact computer algebra for central simple algebras in characteristic p.
//!
//! The crate builds and certifies:
//! - finite fields, multivariate rational function fields, and Artin-Schreier
//!   ring towers with exact scalar arithmetic (`exactfield`),
//! - structure-constant algebras with tensor products, centralizers, an exact
//!   central-simplicity test, and idempotent splitting (`algcore`),
//! - symbol p-algebras and characteristic-2 quaternions with norm-witnessed
//!   splitting isomorphisms (`symbols`),
//! - witnessed rewriting of Brauer symbol words and replay of a degree-8
//!   exponent-2 decomposition chain (`brauer`),
//! - a 13-coordinate classifying chart with 10 free parameters whose points
//!   produce degree-8 algebras together with machine-checkable certificates
//!   (`rowen`),
//! - additive-polynomial descent for tuples of Artin-Schreier classes
//!   (`descent`).
//!
//! Every runnable capability has an example under `examples/`; the `csa-forge`
//! binary exposes the same operations as subcommands.

pub mod algcore;
pub mod brauer;
pub mod cli;
pub mod descent;
pub mod exactfield;
pub mod linalg;
pub mod rowen;
pub mod symbols;
pub mod textio;

//! Product bases exhibiting nonlocality without entanglement, generated by
//! circuits of commuting control-DFT gates, together with the unextendible
//! product bases and bound-entangled states derived from them.
//!
//! The modules build on each other:
//!
//! - [`linalg`]: dense complex vectors and matrices, DFT, Gram matrices,
//!   Jacobi eigenvalues, partial transpose, spans and complements.
//! - [`circuit`]: control-DFT gates, exclusivity and commutation checks,
//!   symbolic and dense application.
//! - [`ensembles`]: the named presets and the cyclic `n`-party construction.
//! - [`upb`]: UPB extraction and the exhaustive extendibility search.
//! - [`bound_ent`]: complement mixtures, PPT reports, separability completion.
//! - [`lemma`]: the single-party measurement constraint.
//! - [`io`] and [`cli`]: file formats and the `nlwe` command.
//!
//! ```
//! use nlwe::ensembles::shift_ensemble;
//!
//! let basis = shift_ensemble();
//! assert_eq!(basis.len(), 8);
//! assert!(basis.gram_deviation().unwrap() < 1e-12);
//! ```

pub mod bound_ent;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod lemma;
pub mod linalg;
pub mod report;
pub mod state;
pub mod upb;

pub use error::{Error, Result};

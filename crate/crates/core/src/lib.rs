//! Exact integer homology of Morse-Bott-Smale multicomplexes built from
//! finite flow presentations.
//!
//! The pipeline is: a [`FlowPresentation`] (critical sets, moduli components
//! with evaluation maps and signs) is assembled into a [`Multicomplex`],
//! checked against the anticommutation identity, totalized, and its homology
//! computed over `Z` with Smith normal form.

pub mod chain;
pub mod corpus;
pub mod error;
pub mod exactalg;
pub mod file;
pub mod flowdata;
pub mod morse;
pub mod multicomplex;
pub mod simplicial;

pub use chain::{ChainComplex, ChainMap, HomologyGroup};
pub use error::{Error, Result};
pub use exactalg::{IntMatrix, SmithDecomposition};
pub use flowdata::{build_multicomplex, FlowPresentation};
pub use morse::{verify_morse_mb, MorseData};
pub use multicomplex::{homology_table, totalize, validate_multicomplex, Multicomplex};
pub use simplicial::{SimplicialComplexData, SimplicialMap};

//! Trace functions over F_q[u]: characters, hyper-Kloosterman sums and
//! value-set indicators modulo a squarefree `g`, with their short-interval
//! sums, Fourier transforms, variances and autocorrelations, and drivers
//! that check explicit cancellation bounds against exhaustive computation.

pub mod catalog;
pub mod characters;
pub mod config;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod field;
pub mod poly;
pub mod report;
pub mod residue;
pub mod runner;
pub mod tracefn;
pub mod transforms;

pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{Field, FieldElem, FieldSpec};
pub use poly::{Poly, PolyRing};
pub use residue::{ResidueField, ResidueRing};
pub use tracefn::TraceFunction;

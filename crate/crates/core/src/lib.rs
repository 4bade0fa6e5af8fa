//! Intersection calculus on relative Hilbert schemes of families of nodal curves.
//!
//! Classes are formal combinations of polyblock diagonals, node scrolls and node
//! sections; multiplication by the discriminant, the flag transfer and the
//! evaluation into numerical characters are exact over Q.

pub mod basering;
pub mod chern;
pub mod descriptor;
pub mod error;
pub mod expr;
pub mod oracle;
pub mod partitions;
pub mod rational;
pub mod serial;
pub mod tautmod;
pub mod tensym;
pub mod transfer;

pub use basering::{BaseClass, BaseSymbol, CharacterTable, FamilyDescriptor, Mono, NodeDescriptor, Ring, Stratum, SymbolKind};
pub use error::{EngineError, ParseError, ValidationError};
pub use expr::Expr;
pub use partitions::{BPartition, Distribution};
pub use rational::Q;
pub use tautmod::{Family, ScrollIndex, TautClass};
pub use tensym::{TKey, TensorClass};

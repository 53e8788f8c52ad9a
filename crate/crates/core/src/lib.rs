//! Weil representations of unitary groups over finite rings with involution.

pub mod character;
pub mod cyclotomic;
pub mod data;
pub mod error;
pub mod group;
pub mod linalg;
pub mod heisenberg;
pub mod hermitian;
pub mod matrix;
pub mod operator;
pub mod report;
pub mod weil;
pub mod ring;

pub use character::{find_character, AdditiveCharacter, Sign};
pub use cyclotomic::{embed_complex, Cyclotomic, RootCode, Roots};
pub use error::{Error, Result};
pub use heisenberg::{HeisenbergElement, Schrodinger};
pub use hermitian::{Bruhat, Columns, HermitianSpace};
pub use matrix::{Mat, MatrixRing};
pub use operator::Operator;
pub use ring::{build_ring, Elem, Family, FiniteRing, RingConfig};

/// Cyclotomic integers with machine coefficients.
pub type Cyc = Cyclotomic<i64>;
/// Cyclotomic rationals: the field in which normalizations and intertwiners live.
pub type CycQ = Cyclotomic<num_rational::BigRational>;
pub use weil::{WeilConfig, Transversal, TransversalRule};

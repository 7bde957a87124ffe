//! Exact computations in quantum cluster algebras of finite type and with
//! quantum cluster characters of quiver representations over prime fields.

pub mod ccmap;
pub mod error;
pub mod hallverify;
pub mod linalg;
pub mod matrix;
pub mod qscalar;
pub mod qtorus;
pub mod repmod;
pub mod seeds;

pub use ccmap::{cc_character, CCObject, FramedData};
pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use qscalar::{qbinomial, LaurentScalar, SqrtValue};
pub use qtorus::{CommLaurent, SkewForm, TorusElement};
pub use repmod::{Catalog, IsoClass, Quiver, Rep};
pub use seeds::{ExchangeMatrix, QuantumSeed};

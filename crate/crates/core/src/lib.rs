//! Exact characters of simple bounded weight modules over the type I
//! classical Lie superalgebras and the Cartan type superalgebra W(n).

pub mod lab;
pub mod charformula;
pub mod linalg;
pub mod mult;
pub mod rational;
pub mod rootdata;
pub mod weights;

pub use rational::Q;
pub use rootdata::{AlgebraDescriptor, AlgebraKind, Parabolic, Parity, RootBasis, SuperRootSystem, Weight};

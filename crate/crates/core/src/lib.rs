//! Exact symbolic Darboux transformations of generalized Airy operators.
//!
//! Everything is computed over ℚ with no floating point anywhere: the
//! bordered-determinant operator K̄ of a cusp divisor, its image under the
//! ♭ anti-automorphism, stabilizer rings, the commutative ring of
//! conjugated operators, and the spectral involution β, each verified by
//! exact operator identities.

pub mod construct;
pub mod diffop;
pub mod divisor;
pub mod error;
pub mod involution;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod report;
pub mod series;
pub mod stabilizer;
pub mod tripoly;
pub mod weyl;

pub use diffop::{AiryVacuum, DiffOp};
pub use divisor::{Cusp, CuspDivisor};
pub use error::Error;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use tripoly::TriPoly;
pub use weyl::WeylOp;

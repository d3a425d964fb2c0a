//! Exact representation theory of SL(2,p) and PSL(2,p), equivariant Picard
//! data of the modular curves X(p), flat unitary moduli of the (2,3,p)
//! triangle group, and symbolic checks of a few determinantal identities.

pub mod arith;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod golden;
pub mod group;
pub mod moduli;
pub mod picard;
pub mod poly;
pub mod repring;
pub mod solver;

pub use error::{Error, Result};

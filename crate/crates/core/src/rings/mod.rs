//! Concrete commutative local rings with exact arithmetic.
//!
//! Four families are supported: Z/p^k, the localization Z_(p), p-adic
//! integers at fixed precision, and truncated power series over any of
//! these (nested for several variables). In every family an element is
//! either a unit or lies in the maximal ideal, never both.

mod elem;
pub(crate) mod literal;
mod spec;

pub use elem::Elem;
pub(crate) use elem::{ratio_is_local, ratio_sqrt};
pub use spec::{Ring, RingSpec};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Applies a ring operation; `Neg` ignores `b` apart from the ring check.
pub fn arith(op: ArithOp, a: &Elem, b: &Elem) -> Result<Elem> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Neg => {
            a.check_ring(b.ring())?;
            Ok(-a)
        }
    }
}

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// `zeta_N^exponent` for a fixed primitive `N`-th root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitScalar {
  modulus:  u32,
  exponent: u32,
}

impl UnitScalar {
  pub fn new(modulus: u32, exponent: i64) -> Self {
    assert!(modulus >= 1, "modulus must be positive");
    Self { modulus, exponent: exponent.rem_euclid(modulus as i64) as u32 }
  }

  pub fn one(modulus: u32) -> Self { Self::new(modulus, 0) }

  pub fn modulus(self) -> u32 { self.modulus }

  pub fn exponent(self) -> u32 { self.exponent }

  pub fn is_one(self) -> bool { self.exponent == 0 }

  pub fn inverse(self) -> Self { Self::new(self.modulus, -(self.exponent as i64)) }

  /// `self^sign` with `sign` in `{+1, -1}`.
  pub fn pow_sign(self, sign: i8) -> Self { if sign < 0 { self.inverse() } else { self } }
}

impl Mul for UnitScalar {
  type Output = Self;

  fn mul(self, rhs: Self) -> Self {
    assert_eq!(self.modulus, rhs.modulus, "unit scalars from different moduli");
    Self::new(self.modulus, self.exponent as i64 + rhs.exponent as i64)
  }
}

impl fmt::Display for UnitScalar {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "zeta_{}^{}", self.modulus, self.exponent)
  }
}

//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`.
//!
//! Elements are kept in the power basis `1, zeta, ..., zeta^(d-1)` where `d = deg Phi_N`, reduced
//! modulo the `N`-th cyclotomic polynomial. Since `Phi_N` is the minimal polynomial of `zeta_N`
//! this representation is canonical: two elements are equal iff their coefficient vectors are.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::scalar::UnitScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
  #[error("operands live in Q(zeta_{0}) and Q(zeta_{1})")]
  ModulusMismatch(u32, u32),
}

/// Dense polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
  coeffs: Vec<BigRational>,
}

impl Polynomial {
  pub fn new(mut coeffs: Vec<BigRational>) -> Self {
    while coeffs.last().is_some_and(Zero::is_zero) {
      coeffs.pop();
    }
    Self { coeffs }
  }

  pub fn from_ints(coeffs: &[i64]) -> Self {
    Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
  }

  pub fn coeffs(&self) -> &[BigRational] { &self.coeffs }

  pub fn is_zero(&self) -> bool { self.coeffs.is_empty() }

  /// Degree; the zero polynomial reports `None`.
  pub fn degree(&self) -> Option<usize> { self.coeffs.len().checked_sub(1) }

  pub fn mul(&self, other: &Self) -> Self {
    if self.is_zero() || other.is_zero() {
      return Self::new(Vec::new());
    }
    let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
    for (i, a) in self.coeffs.iter().enumerate() {
      if a.is_zero() {
        continue;
      }
      for (j, b) in other.coeffs.iter().enumerate() {
        out[i + j] += a * b;
      }
    }
    Self::new(out)
  }

  /// Euclidean division; returns `(quotient, remainder)`.
  pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
    let d = divisor.degree().expect("division by the zero polynomial");
    let lead = &divisor.coeffs[d];
    let mut rem = self.coeffs.clone();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(d)];
    while rem.len() > d {
      let k = rem.len() - 1 - d;
      let c = &rem[rem.len() - 1] / lead;
      for (i, b) in divisor.coeffs.iter().enumerate() {
        rem[k + i] -= &c * b;
      }
      quot[k] = c;
      rem.pop();
      while rem.last().is_some_and(Zero::is_zero) {
        rem.pop();
      }
    }
    (Self::new(quot), Self::new(rem))
  }
}

impl fmt::Display for Polynomial {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if self.is_zero() {
      return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in self.coeffs.iter().enumerate().rev() {
      if c.is_zero() {
        continue;
      }
      let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
      let mag = c.abs();
      let coeff = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
      let var = match k {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{k}"),
      };
      write!(f, "{sign}{coeff}{var}")?;
      first = false;
    }
    Ok(())
  }
}

fn divisors(n: u32) -> Vec<u32> { (1..=n).filter(|d| n.is_multiple_of(*d)).collect() }

/// The `n`-th cyclotomic polynomial, obtained by dividing `x^n - 1` by `Phi_d` for every proper
/// divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u32) -> Polynomial {
  assert!(n >= 1, "cyclotomic index must be positive");
  static CACHE: OnceLock<Mutex<HashMap<u32, Polynomial>>> = OnceLock::new();
  let cache = CACHE.get_or_init(Default::default);
  if let Some(p) = cache.lock().expect("cache poisoned").get(&n) {
    return p.clone();
  }
  let mut numerator = vec![BigRational::zero(); n as usize + 1];
  numerator[0] = -BigRational::one();
  numerator[n as usize] = BigRational::one();
  let mut phi = Polynomial::new(numerator);
  for d in divisors(n) {
    if d == n {
      continue;
    }
    let (q, r) = phi.div_rem(&cyclotomic_polynomial(d));
    assert!(r.is_zero(), "x^{n}-1 is not divisible by Phi_{d}");
    phi = q;
  }
  cache.lock().expect("cache poisoned").insert(n, phi.clone());
  phi
}

/// Shared context for `Q(zeta_N)`: the modulus polynomial and the reduced powers of `zeta`.
#[derive(Debug)]
pub struct CyclotomicField {
  modulus: u32,
  phi:     Polynomial,
  /// `powers[k]` is the power-basis vector of `zeta^k`, for `k < N`.
  powers:  Vec<Vec<BigRational>>,
}

impl CyclotomicField {
  pub fn new(modulus: u32) -> Arc<Self> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(Default::default);
    if let Some(f) = fields.lock().expect("field cache poisoned").get(&modulus) {
      return f.clone();
    }
    let phi = cyclotomic_polynomial(modulus);
    let degree = phi.degree().expect("cyclotomic polynomials are nonzero");
    let powers = (0..modulus as usize)
      .map(|k| {
        let mut mono = vec![BigRational::zero(); k + 1];
        mono[k] = BigRational::one();
        let (_, r) = Polynomial::new(mono).div_rem(&phi);
        pad(r.coeffs, degree)
      })
      .collect();
    let field = Arc::new(Self { modulus, phi, powers });
    fields.lock().expect("field cache poisoned").insert(modulus, field.clone());
    field
  }

  pub fn modulus(&self) -> u32 { self.modulus }

  pub fn degree(&self) -> usize { self.phi.degree().expect("nonzero") }

  pub fn minimal_polynomial(&self) -> &Polynomial { &self.phi }
}

fn pad(mut v: Vec<BigRational>, len: usize) -> Vec<BigRational> {
  v.resize(len, BigRational::zero());
  v
}

/// An element of `Q(zeta_N)` in canonical reduced form.
#[derive(Clone)]
pub struct CyclotomicNumber {
  field:  Arc<CyclotomicField>,
  coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
  pub fn zero(modulus: u32) -> Self {
    let field = CyclotomicField::new(modulus);
    let coeffs = vec![BigRational::zero(); field.degree()];
    Self { field, coeffs }
  }

  pub fn from_rational(modulus: u32, q: BigRational) -> Self {
    let mut z = Self::zero(modulus);
    z.coeffs[0] = q;
    z
  }

  pub fn one(modulus: u32) -> Self { Self::from_rational(modulus, BigRational::one()) }

  /// Embeds `zeta_N^k`.
  pub fn from_unit(u: UnitScalar) -> Self {
    let field = CyclotomicField::new(u.modulus());
    let coeffs = field.powers[u.exponent() as usize].clone();
    Self { field, coeffs }
  }

  /// `sum_k counts[k] * zeta^k`, the shape in which state sums are accumulated.
  pub fn from_exponent_counts(modulus: u32, counts: &[u64]) -> Self {
    assert_eq!(counts.len(), modulus as usize, "one count per exponent");
    let mut z = Self::zero(modulus);
    for (k, &c) in counts.iter().enumerate() {
      if c == 0 {
        continue;
      }
      let c = BigRational::from_integer(BigInt::from(c));
      for (acc, p) in z.coeffs.iter_mut().zip(&z.field.powers[k]) {
        if !p.is_zero() {
          *acc += &c * p;
        }
      }
    }
    z
  }

  pub fn modulus(&self) -> u32 { self.field.modulus }

  pub fn coeffs(&self) -> &[BigRational] { &self.coeffs }

  fn check(&self, other: &Self) -> Result<(), CyclotomicError> {
    if self.modulus() == other.modulus() {
      Ok(())
    } else {
      Err(CyclotomicError::ModulusMismatch(self.modulus(), other.modulus()))
    }
  }

  pub fn try_add(&self, other: &Self) -> Result<Self, CyclotomicError> {
    self.check(other)?;
    let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
    Ok(Self { field: self.field.clone(), coeffs })
  }

  pub fn try_mul(&self, other: &Self) -> Result<Self, CyclotomicError> {
    self.check(other)?;
    let product = Polynomial::new(self.coeffs.clone()).mul(&Polynomial::new(other.coeffs.clone()));
    let (_, r) = product.div_rem(&self.field.phi);
    Ok(Self { field: self.field.clone(), coeffs: pad(r.coeffs, self.field.degree()) })
  }

  pub fn scale(&self, q: &BigRational) -> Self {
    Self { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
  }

  pub fn is_zero(&self) -> bool { self.coeffs.iter().all(Zero::is_zero) }

  /// The value as a rational number, if it lies in `Q`.
  pub fn as_rational(&self) -> Option<BigRational> {
    if self.coeffs[1..].iter().all(Zero::is_zero) {
      Some(self.coeffs[0].clone())
    } else {
      None
    }
  }

  /// Complex value under `zeta_N = exp(2 pi i / N)`.
  pub fn to_complex(&self) -> (f64, f64) {
    let n = self.modulus() as f64;
    self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
      let c = c.to_f64().unwrap_or(f64::NAN);
      let t = std::f64::consts::TAU * k as f64 / n;
      (re + c * t.cos(), im + c * t.sin())
    })
  }

  /// Decimal rendering with 15 significant digits.
  pub fn to_decimal_string(&self) -> String {
    let (re, im) = self.to_complex();
    let scale = re.abs().max(im.abs()).max(1e-300);
    if im.abs() <= 1e-12 * scale.max(1.0) {
      sig_digits(re, 15)
    } else {
      let sign = if im < 0.0 { "-" } else { "+" };
      format!("{} {sign} {}i", sig_digits(re, 15), sig_digits(im.abs(), 15))
    }
  }
}

/// Formats `x` in plain decimal notation with `digits` significant digits.
pub fn sig_digits(x: f64, digits: usize) -> String {
  if x == 0.0 || !x.is_finite() {
    return format!("{x}");
  }
  let magnitude = x.abs().log10().floor() as i64;
  let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
  format!("{x:.decimals$}")
}

impl PartialEq for CyclotomicNumber {
  fn eq(&self, other: &Self) -> bool { self.modulus() == other.modulus() && self.coeffs == other.coeffs }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.debug_struct("CyclotomicNumber").field("modulus", &self.modulus()).field("coeffs", &self.coeffs).finish()
  }
}

impl fmt::Display for CyclotomicNumber {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(q) = self.as_rational() {
      return write!(f, "{q}");
    }
    let terms: Vec<String> = self
      .coeffs
      .iter()
      .enumerate()
      .filter(|(_, c)| !c.is_zero())
      .map(|(k, c)| match k {
        0 => c.to_string(),
        1 => format!("({c})*z"),
        _ => format!("({c})*z^{k}"),
      })
      .collect();
    write!(f, "{} [z = zeta_{}]", terms.join(" + "), self.modulus())
  }
}

impl Add for &CyclotomicNumber {
  type Output = CyclotomicNumber;

  /// Panics on a modulus mismatch; use [`CyclotomicNumber::try_add`] to handle it.
  fn add(self, rhs: Self) -> CyclotomicNumber { self.try_add(rhs).expect("cyclotomic modulus mismatch") }
}

impl Mul for &CyclotomicNumber {
  type Output = CyclotomicNumber;

  fn mul(self, rhs: Self) -> CyclotomicNumber { self.try_mul(rhs).expect("cyclotomic modulus mismatch") }
}

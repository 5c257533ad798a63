//! Exact Laurent polynomials in one variable `A` with big-integer coefficients.
//!
//! These carry the exact state sums of the bracket oracle; no floating point
//! enters until [`LaurentPolynomial::eval`] is called.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer-coefficient Laurent polynomial `sum_e c_e A^e`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The polynomial `c * A^e`.
    pub fn monomial(exponent: i64, coefficient: impl Into<BigInt>) -> Self {
        let mut coeffs = BTreeMap::new();
        let c: BigInt = coefficient.into();
        if !c.is_zero() {
            coeffs.insert(exponent, c);
        }
        Self { coeffs }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    /// The loop value `d = -A^2 - A^{-2}`.
    pub fn loop_value() -> Self {
        Self::from_pairs([(2, -1), (-2, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, exponent: i64, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exponent).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exchange `A <-> A^{-1}`.
    pub fn mirror(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Evaluate at a nonzero complex base.
    ///
    /// Coefficients are converted to `f64`; exactness is a property of the
    /// arithmetic, evaluation is numeric by nature.
    pub fn eval(&self, base: Complex64) -> Result<Complex64> {
        if base.norm() == 0.0 {
            return Err(Error::ZeroBase);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.coeffs {
            let cf = c.to_f64().unwrap_or(f64::INFINITY);
            acc += cf * base.powi(*e as i32);
        }
        Ok(acc)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// Serialization: sorted `exponent:coefficient` pairs, e.g. `-2:-1,2:-1`
/// for `-A^2 - A^{-2}`. The zero polynomial serializes as `0`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| format!("{}:{}", e, c))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LaurentPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for part in s.split(',') {
            let (e, c) = part.split_once(':').ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("bad term '{part}', expected 'exponent:coefficient'"),
            })?;
            let e: i64 = e.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad exponent '{e}'"),
            })?;
            let c: BigInt = c.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad coefficient '{c}'"),
            })?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathmodel::root_of_unity_base;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn loop_value_at_k5_is_golden_ratio() {
        // d = 2 cos(pi/k) at A = i e^{-i pi/(2k)}
        let d = LaurentPolynomial::loop_value();
        let v = d.eval(root_of_unity_base(5)).unwrap();
        assert!((v.re - 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        assert!((v.re - 1.6180339887).abs() < 1e-9);
    }

    #[test]
    fn constant_evaluates_to_itself() {
        let one = LaurentPolynomial::one();
        let v = one.eval(Complex64::new(0.3, -2.2)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn monomial_at_unit_modulus_base() {
        // -A^3 at A = i e^{-i pi/14} (k = 7): direct substitution, modulus 1.
        let p = LaurentPolynomial::monomial(3, -1);
        let a = root_of_unity_base(7);
        let v = p.eval(a).unwrap();
        let direct = -a * a * a;
        assert!((v - direct).norm() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_zero_base() {
        let p = LaurentPolynomial::monomial(-1, 4);
        assert!(matches!(
            p.eval(Complex64::new(0.0, 0.0)),
            Err(Error::ZeroBase)
        ));
    }

    #[test]
    fn product_evaluation_is_multiplicative() {
        // (p*q)(a) = p(a) * q(a) for 100 random p, q, a.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let rand_poly = |rng: &mut ChaCha8Rng| {
                let mut p = LaurentPolynomial::zero();
                for _ in 0..rng.random_range(1..6) {
                    p.add_term(rng.random_range(-6..=6), BigInt::from(rng.random_range(-9i64..=9)));
                }
                p
            };
            let p = rand_poly(&mut rng);
            let q = rand_poly(&mut rng);
            let a = Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
            let lhs = (&p * &q).eval(a).unwrap();
            let rhs = p.eval(a).unwrap() * q.eval(a).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn display_matches_documented_format() {
        let d = LaurentPolynomial::loop_value();
        assert_eq!(d.to_string(), "-2:-1,2:-1");
        let back: LaurentPolynomial = "-2:-1,2:-1".parse().unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn no_zero_coefficients_survive_arithmetic() {
        let d = LaurentPolynomial::loop_value();
        let diff = &d - &d;
        assert!(diff.is_zero());
        assert_eq!(diff.terms().count(), 0);
    }
}

//! Exact rational arithmetic. No floating point anywhere: every comparison
//! the workbench makes is an exact inequality between rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// An exact rational in canonical form (reduced, positive denominator).
///
/// Serializes as `numerator/denominator` in decimal, e.g. `-3/4`, `5/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactNumber(BigRational);

impl ExactNumber {
    pub fn zero() -> Self {
        ExactNumber(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactNumber(BigRational::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ExactNumber(BigRational::from_integer(n.into()))
    }

    /// `num/den`; panics on a zero denominator (a construction bug, not data).
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        ExactNumber(BigRational::new(num.into(), den))
    }

    /// 2^exp, exact for any integer exponent.
    pub fn pow2(exp: i64) -> Self {
        if exp >= 0 {
            ExactNumber(BigRational::from_integer(BigInt::one() << exp as usize))
        } else {
            ExactNumber(BigRational::new(
                BigInt::one(),
                BigInt::one() << (-exp) as usize,
            ))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactNumber(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactNumber(self.0.recip())
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Fractional part in [0, 1): self − ⌊self⌋.
    pub fn frac(&self) -> Self {
        self.clone() - ExactNumber::from_int(self.floor_int())
    }

    /// Exact integer power (negative exponents via reciprocal).
    pub fn pow_int(&self, exp: i64) -> Self {
        if exp < 0 {
            assert!(!self.is_zero(), "negative power of zero");
        }
        ExactNumber(self.0.pow(exp as i32))
    }

    /// Truncated decimal expansion with `digits` fractional digits,
    /// deterministic (rounds toward zero). Supplementary output only; the
    /// `num/den` form is the lossless contract.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.is_negative();
        let a = self.abs();
        let int_part = a.floor_int();
        let mut frac = a.frac();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                frac = frac * ExactNumber::from_int(10);
                let d = frac.floor_int();
                out.push_str(&d.to_string());
                frac = frac - ExactNumber::from_int(d);
            }
        }
        out
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Value of `0.s` for a finite word s (the dyadic rational named by s).
    pub fn from_point_bits(s: &BitString) -> Self {
        let num = BigInt::from_biguint(Sign::Plus, s.dyadic_value());
        if s.is_empty() {
            return ExactNumber::zero();
        }
        ExactNumber(BigRational::new(num, BigInt::one() << s.len() as usize))
    }
}

/// First `n` bits of the base-two expansion of `alpha − ⌊alpha⌋`, taking the
/// terminating ("infinitely many zeros") expansion for dyadic rationals.
/// Returns λ for any non-positive `n`.
pub fn binary_prefix(alpha: &ExactNumber, n: i64) -> BitString {
    if n <= 0 {
        return BitString::empty();
    }
    let mut frac = alpha.frac();
    let two = ExactNumber::from_int(2);
    let one = ExactNumber::one();
    let mut out = BitString::empty();
    for _ in 0..n {
        frac = frac * two.clone();
        if frac >= one {
            out.push(1);
            frac = frac - one.clone();
        } else {
            out.push(0);
        }
    }
    out
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExactNumber {
    type Err = Error;

    /// Accepts `num/den` or a bare integer.
    fn from_str(s: &str) -> Result<ExactNumber> {
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("invalid integer {:?}", t),
            })
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::Parse {
                        line: 0,
                        message: "zero denominator".into(),
                    });
                }
                Ok(ExactNumber(BigRational::new(num, den)))
            }
            None => Ok(ExactNumber(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b ExactNumber> for &'a ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &'b ExactNumber) -> ExactNumber {
                ExactNumber((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

macro_rules! forward_mixed_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &'a ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_mixed_binop!(Add, add);
forward_mixed_binop!(Sub, sub);
forward_mixed_binop!(Mul, mul);

impl<'a> Div<&'a ExactNumber> for ExactNumber {
    type Output = ExactNumber;
    fn div(self, rhs: &'a ExactNumber) -> ExactNumber {
        assert!(!rhs.is_zero(), "division by zero");
        ExactNumber(self.0 / &rhs.0)
    }
}

impl Div for ExactNumber {
    type Output = ExactNumber;
    fn div(self, rhs: ExactNumber) -> ExactNumber {
        assert!(!rhs.is_zero(), "division by zero");
        ExactNumber(self.0 / rhs.0)
    }
}

impl<'a, 'b> Div<&'b ExactNumber> for &'a ExactNumber {
    type Output = ExactNumber;
    fn div(self, rhs: &'b ExactNumber) -> ExactNumber {
        assert!(!rhs.is_zero(), "division by zero");
        ExactNumber(&self.0 / &rhs.0)
    }
}

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-self.0)
    }
}

impl AddAssign for ExactNumber {
    fn add_assign(&mut self, rhs: ExactNumber) {
        self.0 += rhs.0;
    }
}

impl SubAssign for ExactNumber {
    fn sub_assign(&mut self, rhs: ExactNumber) {
        self.0 -= rhs.0;
    }
}

/// Exact Σ 2^{−l} over a list of lengths.
pub fn sum_pow2_neg(lengths: impl IntoIterator<Item = u64>) -> ExactNumber {
    let mut acc = ExactNumber::zero();
    for l in lengths {
        acc += ExactNumber::pow2(-(l as i64));
    }
    acc
}

/// ⌊q · log2(m)⌋ for rational q ≥ 0 and integer m ≥ 1, computed exactly:
/// the largest k with 2^(k·den) ≤ m^num.
pub fn floor_mul_log2(q: &ExactNumber, m: u64) -> u64 {
    assert!(m >= 1 && !q.is_negative());
    if m == 1 || q.is_zero() {
        return 0;
    }
    let num = q.numer().to_u64().expect("small rational") as u32;
    let den = q.denom().to_u64().expect("small rational") as u64;
    let target: BigUint = BigUint::from(m).pow(num);
    let mut k = (target.bits() - 1) / den;
    while (BigUint::one() << ((k + 1) * den)) <= target {
        k += 1;
    }
    while k > 0 && (BigUint::one() << (k * den)) > target {
        k -= 1;
    }
    k
}

impl PartialOrd<i64> for ExactNumber {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.partial_cmp(&ExactNumber::from_int(*other))
    }
}

impl PartialEq<i64> for ExactNumber {
    fn eq(&self, other: &i64) -> bool {
        *self == ExactNumber::from_int(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    #[test]
    fn display_and_parse_round_trip() {
        let x = ExactNumber::ratio(-6, 8);
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!("-3/4".parse::<ExactNumber>().unwrap(), x);
        assert_eq!("7".parse::<ExactNumber>().unwrap(), ExactNumber::from_int(7));
        assert_eq!(ExactNumber::from_int(5).to_string(), "5/1");
    }

    #[test]
    fn binary_prefix_paper_example() {
        // α = 5/8 ⇒ α↾6 = 101000
        assert_eq!(binary_prefix(&ExactNumber::ratio(5, 8), 6), bs("101000"));
        assert_eq!(binary_prefix(&ExactNumber::ratio(7, 4), -3), bs(""));
        assert_eq!(binary_prefix(&ExactNumber::ratio(1, 3), 4), bs("0101"));
        // integer part is discarded
        assert_eq!(binary_prefix(&ExactNumber::ratio(13, 8), 3), bs("101"));
    }

    #[test]
    fn binary_prefix_consistency() {
        let alphas = [
            ExactNumber::ratio(5, 8),
            ExactNumber::ratio(1, 3),
            ExactNumber::ratio(22, 7),
            ExactNumber::ratio(-3, 5),
        ];
        for alpha in &alphas {
            let long = binary_prefix(alpha, 24);
            for n in 0..=24i64 {
                assert_eq!(binary_prefix(alpha, n), long.prefix(n as u64));
            }
        }
    }

    #[test]
    fn dyadic_expansion_terminates_in_zeros() {
        // k/2^j expansions end in zeros from position j+1 on
        let alpha = ExactNumber::ratio(11, 16);
        let p = binary_prefix(&alpha, 12);
        assert_eq!(p.prefix(4), bs("1011"));
        for i in 4..12 {
            assert_eq!(p.bit(i), 0);
        }
    }

    #[test]
    fn point_bits_value() {
        assert_eq!(ExactNumber::from_point_bits(&bs("11")), ExactNumber::ratio(3, 4));
        assert_eq!(ExactNumber::from_point_bits(&bs("")), ExactNumber::zero());
        assert_eq!(ExactNumber::from_point_bits(&bs("0010")), ExactNumber::ratio(1, 8));
    }

    #[test]
    fn floor_mul_log2_exact() {
        // ⌊2·log2(3)⌋ = 3, ⌊1.5·log2(1001)⌋ = 14
        assert_eq!(floor_mul_log2(&ExactNumber::from_int(2), 3), 3);
        assert_eq!(floor_mul_log2(&ExactNumber::ratio(3, 2), 1001), 14);
        assert_eq!(floor_mul_log2(&ExactNumber::from_int(2), 4), 4);
        assert_eq!(floor_mul_log2(&ExactNumber::ratio(1, 1), 1), 0);
    }

    #[test]
    fn decimal_string_truncates() {
        assert_eq!(ExactNumber::ratio(1, 3).to_decimal_string(4), "0.3333");
        assert_eq!(ExactNumber::ratio(-1, 2).to_decimal_string(2), "-0.50");
        assert_eq!(ExactNumber::from_int(3).to_decimal_string(0), "3");
    }
}

//! Closed rational intervals enclosing the irrational quantities (2^{−k/T},
//! log₂ Z, ln 2) that the thermodynamic formulas produce. Rationals stay
//! exact point intervals; widths are the caller's precision contract.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::ExactNumber;

/// A closed interval [lo, hi] with rational endpoints, lo ≤ hi.
#[derive(Clone, PartialEq, Debug)]
pub struct NumberInterval {
    lo: ExactNumber,
    hi: ExactNumber,
}

impl NumberInterval {
    pub fn new(lo: ExactNumber, hi: ExactNumber) -> Self {
        assert!(lo <= hi, "inverted interval: {} > {}", lo, hi);
        NumberInterval { lo, hi }
    }

    pub fn point(x: ExactNumber) -> Self {
        NumberInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(ExactNumber::zero())
    }

    pub fn lo(&self) -> &ExactNumber {
        &self.lo
    }

    pub fn hi(&self) -> &ExactNumber {
        &self.hi
    }

    pub fn width(&self) -> ExactNumber {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &ExactNumber) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn intersects(&self, other: &NumberInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> ExactNumber {
        (&self.lo + &self.hi) * ExactNumber::ratio(1, 2)
    }

    pub fn add(&self, other: &NumberInterval) -> NumberInterval {
        NumberInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &NumberInterval) -> NumberInterval {
        NumberInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> NumberInterval {
        NumberInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &NumberInterval) -> NumberInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        NumberInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &ExactNumber) -> NumberInterval {
        if c.is_negative() {
            NumberInterval::new(&self.hi * c, &self.lo * c)
        } else {
            NumberInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Division; the divisor must be sign-definite (not contain 0).
    pub fn div(&self, other: &NumberInterval) -> NumberInterval {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "divisor interval contains zero"
        );
        let quotients = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = quotients.iter().min().unwrap().clone();
        let hi = quotients.iter().max().unwrap().clone();
        NumberInterval::new(lo, hi)
    }

    pub fn square(&self) -> NumberInterval {
        self.mul(self)
    }
}

/// 2^q for rational q, enclosed to width ≤ 2^{−precision}. Integer exponents
/// give an exact point interval.
///
/// Small exponent denominators go through one integer nth-root; large ones
/// (log₂ endpoints carry dyadic denominators far too big for a root of that
/// degree) go through a product of iterated square roots of 2 over the
/// exponent's leading expansion bits.
pub fn interval_pow2(q: &ExactNumber, precision: u32) -> NumberInterval {
    if q.is_integer() {
        let e = q.numer().to_i64().expect("desk-scale exponent");
        return NumberInterval::point(ExactNumber::pow2(e));
    }
    let floor = q.floor_int().to_i64().expect("desk-scale exponent");
    let frac = q.frac(); // c/b with 0 < c < b
    let b = frac.denom().to_u64().unwrap_or(u64::MAX);
    let eff_precision = precision + floor.max(0) as u32;
    let frac_part = if b <= 512 {
        pow2_frac_by_root(&frac, eff_precision)
    } else {
        pow2_frac_by_bits(&frac, eff_precision)
    };
    frac_part.scale(&ExactNumber::pow2(floor))
}

/// 2^(c/b) for 0 < c/b < 1 via one b-th root: 2^(c/b)·2^m = (2^(c+m·b))^(1/b).
fn pow2_frac_by_root(frac: &ExactNumber, precision: u32) -> NumberInterval {
    let c = frac.numer().to_u64().expect("reduced fraction");
    let b = frac.denom().to_u64().expect("small denominator");
    let m = precision as u64 + 1;
    let n = BigInt::one() << (c + m * b) as usize;
    let r = n.nth_root(b as u32);
    let scale = ExactNumber::pow2(-(m as i64));
    NumberInterval::new(
        ExactNumber::from_int(r.clone()) * scale.clone(),
        ExactNumber::from_int(r + BigInt::one()) * scale,
    )
}

/// 2^x for 0 < x < 1 as Π 2^(2^{−i}) over the set bits of a truncated
/// expansion of x, each factor an iterated square root of 2 with directed
/// rounding. The truncation error is absorbed by the bound 2^ε ≤ 1 + ε.
fn pow2_frac_by_bits(frac: &ExactNumber, precision: u32) -> NumberInterval {
    let m = precision as u64 + 6; // expansion bits of the exponent
    let scale_bits = precision as u64 + 14; // working fixed-point scale
    let unit: BigInt = BigInt::one() << scale_bits as usize;
    let x_bits = crate::exact::binary_prefix(frac, m as i64);

    // iterated square roots of 2, scaled by 2^scale_bits
    let isqrt_lo = |v: &BigInt| (v << scale_bits as usize).sqrt();
    let mut pow_lo: BigInt = isqrt_lo(&(&unit << 1usize)); // √2
    let mut pow_hi: BigInt = &pow_lo + BigInt::one();
    let mut acc_lo = unit.clone();
    let mut acc_hi = unit.clone();
    for i in 0..m {
        if x_bits.bit(i) == 1 {
            acc_lo = (&acc_lo * &pow_lo) >> scale_bits as usize;
            acc_hi = ((&acc_hi * &pow_hi) >> scale_bits as usize) + BigInt::one();
        }
        pow_hi = isqrt_lo(&pow_hi) + BigInt::one();
        pow_lo = isqrt_lo(&pow_lo);
    }
    let lo = ExactNumber::from_int(acc_lo) * ExactNumber::pow2(-(scale_bits as i64));
    let hi = ExactNumber::from_int(acc_hi)
        * ExactNumber::pow2(-(scale_bits as i64))
        * (ExactNumber::one() + ExactNumber::pow2(-(m as i64)));
    NumberInterval::new(lo, hi)
}

/// x^t for rational x > 0 and rational t, enclosed to width ≤ 2^{−precision}.
pub fn rational_pow_interval(x: &ExactNumber, t: &ExactNumber, precision: u32) -> NumberInterval {
    assert!(x.is_positive(), "power base must be positive");
    if t.is_negative() {
        return rational_pow_interval(&x.recip(), &(-t.clone()), precision);
    }
    if t.is_zero() {
        return NumberInterval::point(ExactNumber::one());
    }
    let u = t.numer().to_i64().expect("small exponent") as i64;
    let v = t.denom().to_u64().expect("small exponent");
    let y = x.pow_int(u); // y = P/Q > 0
    if v == 1 {
        return NumberInterval::point(y);
    }
    let p = y.numer().to_biguint().unwrap();
    let q = y.denom().to_biguint().unwrap();
    let m = precision as u64;
    // y^(1/v) · Q·2^m = (P · Q^(v−1) · 2^(v·m))^(1/v)
    let n = BigInt::from(&p * q.pow(v as u32 - 1)) << (v * m) as usize;
    let r = n.nth_root(v as u32);
    let denom = ExactNumber::from_int(BigInt::from(q)) * ExactNumber::pow2(m as i64);
    if r.pow(v as u32) == n {
        return NumberInterval::point(ExactNumber::from_int(r) / denom);
    }
    NumberInterval::new(
        ExactNumber::from_int(r.clone()) / denom.clone(),
        ExactNumber::from_int(r + BigInt::one()) / denom,
    )
}

/// log₂ x for rational x > 0, enclosed to width ≤ 2^{−precision}.
///
/// Digit extraction by repeated squaring on dyadic bounds with directed
/// rounding: the lower run only claims a digit it can prove, the upper run
/// claims every digit it cannot refute. A small pad absorbs the bounded
/// drift of the truncated squarings.
pub fn log2_interval(x: &ExactNumber, precision: u32) -> NumberInterval {
    assert!(x.is_positive(), "log2 of non-positive value");
    let two = ExactNumber::from_int(2);
    let one = ExactNumber::one();
    // normalize into [1, 2)
    let mut e: i64 = 0;
    let mut z = x.clone();
    while z >= two {
        z = z * ExactNumber::ratio(1, 2);
        e += 1;
    }
    while z < one {
        z = z * two.clone();
        e -= 1;
    }
    if z == one {
        return NumberInterval::point(ExactNumber::from_int(e));
    }

    let p = precision as u64 + 2; // digits to extract
    let m = 2 * p + 16; // working fractional bits
    let scale_num = |v: &ExactNumber, round_up: bool| -> BigInt {
        // v · 2^m, floored or ceiled
        let scaled = v * &ExactNumber::pow2(m as i64);
        if round_up {
            scaled.ceil_int()
        } else {
            scaled.floor_int()
        }
    };
    let extract = |start: BigInt, round_up: bool| -> ExactNumber {
        let unit: BigInt = BigInt::one() << m as usize;
        let threshold: BigInt = &unit << 1usize;
        let mut w = start;
        let mut digits = BigInt::zero();
        for _ in 0..p {
            let sq = &w * &w;
            w = if round_up {
                // ceil(sq / 2^m)
                (&sq + (&unit - BigInt::one())) >> m as usize
            } else {
                sq >> m as usize
            };
            digits <<= 1;
            if w >= threshold {
                digits += 1;
                // halve, with directed rounding
                w = if round_up { (&w + BigInt::one()) >> 1usize } else { w >> 1usize };
            }
        }
        ExactNumber::ratio(digits, BigInt::one() << p as usize)
    };

    // the extracted digit word D satisfies D/2^p ≤ log2(z) < (D+1)/2^p up to
    // the bounded drift of the truncated squarings, which the pad absorbs
    let pad = ExactNumber::pow2(-((p + 8) as i64));
    let granule = ExactNumber::pow2(-(p as i64));
    let lo_frac = extract(scale_num(&z, false), false) - pad.clone();
    let hi_frac = extract(scale_num(&z, true), true) + granule + pad;
    let e = ExactNumber::from_int(e);
    NumberInterval::new(&e + &lo_frac, &e + &hi_frac)
}

/// ln 2 enclosed to width ≤ 2^{−precision}, from Σ 1/(n·2^n) with an exact
/// tail bound 2^{−N}/(N+1).
pub fn ln2_interval(precision: u32) -> NumberInterval {
    let n_terms = precision as u64 + 4;
    let mut partial = ExactNumber::zero();
    for n in 1..=n_terms {
        partial += ExactNumber::ratio(1, BigInt::from(n) * (BigInt::one() << n as usize));
    }
    let tail = ExactNumber::ratio(1, BigInt::from(n_terms + 1) * (BigInt::one() << n_terms as usize));
    NumberInterval::new(partial.clone(), partial + tail)
}

//! Halting probability, partition function, and the thermodynamic quantities
//! over certified domain truncations.
//!
//! The true Ω and Z(T) are limits of exactly these monotone truncated sums;
//! the workbench computes the truncations with certificates instead of
//! pretending to reach the limits. Base 2 throughout: the Boltzmann constant
//! is fixed at 1/ln 2, which turns every ln into log₂.

use num_bigint::BigInt;

use crate::bits::BitString;
use crate::enumerate::{dovetail, length_census, Enumeration};
use crate::error::{Error, Result};
use crate::exact::ExactNumber;
use crate::interval::{interval_pow2, ln2_interval, log2_interval, rational_pow_interval, NumberInterval};
use crate::machine::Machine;

/// A strictly positive rational temperature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Temperature(ExactNumber);

impl Temperature {
    pub fn new(value: ExactNumber) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::Parse { line: 0, message: "temperature must be > 0".into() });
        }
        Ok(Temperature(value))
    }

    pub fn value(&self) -> &ExactNumber {
        &self.0
    }

    pub fn one() -> Self {
        Temperature(ExactNumber::one())
    }
}

impl std::str::FromStr for Temperature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Temperature::new(s.parse()?)
    }
}

impl std::fmt::Display for Temperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How much of the domain an approximation provably covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxScope {
    /// The whole domain: the value is the exact Ω / Z(T).
    FullDomain,
    /// All programs of length ≤ the stated horizon.
    LengthComplete(u64),
    /// A certified subset only: the value is a lower bound.
    LowerBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaApprox {
    pub value: ExactNumber,
    pub scope: ApproxScope,
}

fn scope_of(m: &Machine, e: &Enumeration) -> ApproxScope {
    if !e.complete {
        return ApproxScope::LowerBound;
    }
    match m {
        Machine::Table(t) if t.max_key_len() <= e.max_len => ApproxScope::FullDomain,
        _ => ApproxScope::LengthComplete(e.max_len),
    }
}

/// Σ 2^{−|p|} over the certified enumeration — exact, and equal to Ω when
/// the certificate covers the whole domain.
pub fn omega_approx(m: &Machine, max_len: u64, max_steps: u64) -> OmegaApprox {
    let e = dovetail(m, max_len, max_steps);
    let value = crate::exact::sum_pow2_neg(e.programs().map(|p| p.len()));
    OmegaApprox { value, scope: scope_of(m, &e) }
}

/// Σ over a (length, count) census of count · 2^{−len/T}, enclosed.
fn z_from_census(
    census: &[(u64, num_bigint::BigUint)],
    t: &Temperature,
    precision: u32,
) -> NumberInterval {
    let terms = census.len().max(1) as u32;
    let per_term = precision + 1 + (64 - u32::leading_zeros(terms));
    let mut acc = NumberInterval::zero();
    for (len, count) in census {
        let exp = -(ExactNumber::from_int(*len) / t.value());
        let term = interval_pow2(&exp, per_term);
        let c = ExactNumber::from_int(BigInt::from(count.clone()));
        acc = acc.add(&term.scale(&c));
    }
    acc
}

/// Interval enclosing the truncated partition sum Σ 2^{−|p|/T}. The lo
/// endpoint is a valid lower bound of the true Z(T) and never decreases as
/// the truncation grows; exponents that land on integers keep the sum an
/// exact point.
pub fn z_approx(
    m: &Machine,
    t: &Temperature,
    max_len: u64,
    max_steps: u64,
    precision: u32,
) -> NumberInterval {
    let census = length_census(m, max_len, max_steps);
    z_from_census(&census, t, precision)
}

/// Z(T; s): the partition sum restricted to programs whose output is
/// exactly s.
pub fn z_restricted(
    m: &Machine,
    t: &Temperature,
    s: &BitString,
    max_len: u64,
    max_steps: u64,
    precision: u32,
) -> NumberInterval {
    let e = dovetail(m, max_len, max_steps);
    let lens: Vec<u64> = e
        .events
        .iter()
        .filter(|ev| ev.output == *s)
        .map(|ev| ev.program.len())
        .collect();
    let census: Vec<(u64, num_bigint::BigUint)> = {
        let mut by_len: std::collections::BTreeMap<u64, num_bigint::BigUint> = Default::default();
        for l in lens {
            *by_len.entry(l).or_default() += 1u32;
        }
        by_len.into_iter().collect()
    };
    z_from_census(&census, t, precision)
}

/// The thermodynamic quantities over one truncated domain, all as enclosing
/// intervals. Division and log₂ amplify widths; the report carries whatever
/// width came out rather than hiding it.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermoReport {
    pub z: NumberInterval,
    pub f: NumberInterval,
    pub e: NumberInterval,
    pub s: NumberInterval,
    pub c: NumberInterval,
    pub truncation: (u64, u64),
    pub precision: u32,
}

/// Z, F = −T·log₂Z, E = (Σ|p|·2^{−|p|/T})/Z, S = (E−F)/T, and
/// C = dE/dT by exact termwise differentiation of the truncated sum:
/// C = (ln2 / T²) · (⟨|p|²⟩ − ⟨|p|⟩²).
pub fn thermo_suite(
    m: &Machine,
    t: &Temperature,
    max_len: u64,
    max_steps: u64,
    precision: u32,
) -> Result<ThermoReport> {
    let census = length_census(m, max_len, max_steps);
    if census.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let work = precision + 12;
    let terms = census.len() as u32;
    let per_term = work + 1 + (64 - u32::leading_zeros(terms));

    let mut z = NumberInterval::zero();
    let mut a = NumberInterval::zero(); // Σ |p|·w
    let mut m2 = NumberInterval::zero(); // Σ |p|²·w
    for (len, count) in &census {
        let exp = -(ExactNumber::from_int(*len) / t.value());
        let w = interval_pow2(&exp, per_term);
        let c = ExactNumber::from_int(BigInt::from(count.clone()));
        z = z.add(&w.scale(&c));
        a = a.add(&w.scale(&(&c * &ExactNumber::from_int(*len))));
        m2 = m2.add(&w.scale(&(&c * &ExactNumber::from_int(*len * *len))));
    }

    // F = −T·log₂ Z, with log over the interval via monotonicity
    let log_lo = log2_interval(z.lo(), work);
    let log_hi = log2_interval(z.hi(), work);
    let log_z = NumberInterval::new(log_lo.lo().clone(), log_hi.hi().clone());
    let f = log_z.scale(t.value()).neg();

    let e = a.div(&z);
    let s = e.sub(&f).scale(&t.value().recip());

    let variance = m2.div(&z).sub(&e.square());
    let t_sq = t.value() * t.value();
    let c = ln2_interval(work).mul(&variance).scale(&t_sq.recip());

    Ok(ThermoReport {
        z,
        f,
        e,
        s,
        c,
        truncation: (max_len, max_steps),
        precision,
    })
}

/// One cell of a phase sweep: the certified truncation of Z at temperature
/// `t` over programs of length ≤ `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub t: Temperature,
    pub l: u64,
    pub z: NumberInterval,
}

/// Z truncations over a (T, L) grid, computed from the exact length census
/// so the horizon can grow far beyond enumerable size. Columns at fixed T
/// are non-decreasing in L; for the interp machine and T > 1 the growth is
/// unbounded in L (observable here, not asserted as a limit).
pub fn phase_sweep(
    m: &Machine,
    t_grid: &[Temperature],
    l_grid: &[u64],
    max_steps: u64,
    precision: u32,
) -> Vec<SweepCell> {
    let mut cells = Vec::with_capacity(t_grid.len() * l_grid.len());
    for t in t_grid {
        for &l in l_grid {
            let census = length_census(m, l, max_steps);
            let z = z_from_census(&census, t, precision);
            cells.push(SweepCell { t: t.clone(), l, z });
        }
    }
    cells
}

/// Partial sum Σ (a_{i+1} − a_i)^T over a finite window of a strictly
/// increasing rational sequence — the T-convergence observable. No limit
/// claim.
pub fn t_convergence_partial(
    seq: &[ExactNumber],
    t: &Temperature,
    precision: u32,
) -> Result<NumberInterval> {
    for (i, w) in seq.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
    }
    if seq.len() < 2 {
        return Ok(NumberInterval::zero());
    }
    let terms = (seq.len() - 1) as u32;
    let per_term = precision + 1 + (64 - u32::leading_zeros(terms));
    let mut acc = NumberInterval::zero();
    for w in seq.windows(2) {
        let diff = &w[1] - &w[0];
        acc = acc.add(&rational_pow_interval(&diff, t.value(), per_term));
    }
    Ok(acc)
}

/// Extracts the first `n` expansion bits of the value enclosed by `iv`, if
/// the interval is tight enough to determine them: it must not straddle (or,
/// for a non-point interval, touch) a multiple of 2^{−n}. The bits are those
/// of iv − ⌊iv⌋.
pub fn bits_from_interval(iv: &NumberInterval, n: u64) -> Option<BitString> {
    if iv.is_point() {
        return Some(crate::exact::binary_prefix(iv.lo(), n as i64));
    }
    let scale = ExactNumber::pow2(n as i64);
    let lo_cell = (iv.lo() * &scale).floor_int();
    let hi_scaled = iv.hi() * &scale;
    if hi_scaled.is_integer() || hi_scaled.floor_int() != lo_cell {
        return None;
    }
    let cell_value = ExactNumber::from_int(lo_cell) / &scale;
    Some(crate::exact::binary_prefix(&cell_value, n as i64))
}

/// Genuine leading bits of Z(T) for a machine whose domain the truncation
/// provably exhausts. Fails with `PrecisionUnreachable` when the requested
/// precision cannot pin the bits.
pub fn z_bits_certified(
    m: &Machine,
    t: &Temperature,
    max_len: u64,
    max_steps: u64,
    n_bits: u64,
    precision: u32,
) -> Result<BitString> {
    let z = z_approx(m, t, max_len, max_steps, precision);
    bits_from_interval(&z, n_bits).ok_or(Error::PrecisionUnreachable)
}

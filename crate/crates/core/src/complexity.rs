//! Machine-relative program-size complexity, partial-randomness ledgers, and
//! the finite search probes behind the extension/padding lemma.
//!
//! Nothing here computes the complexity of the theory's optimal machine:
//! every value is relative to a concrete machine and stamped with the
//! enumeration certificate that produced it. Witness constants are
//! horizon-relative minima, reported as evidence, never as theorems.

use crate::bits::{strings_of_length, BitString};
use crate::enumerate::dovetail;
use crate::error::{Error, Result};
use crate::exact::ExactNumber;
use crate::machine::{Machine, TableMachine};
use crate::order::OrderFunction;
use crate::thermo::Temperature;

/// H_m(s): None is ∞ (no producing program within the stated scope).
pub type HValue = Option<u64>;

/// Exact H over a full table.
pub fn h_exact(m: &TableMachine, s: &BitString) -> HValue {
    m.entries()
        .filter(|(_, out, _)| *out == s)
        .map(|(p, _, _)| p.len())
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCertified {
    pub value: HValue,
    /// True when the certificate covers every length ≤ the returned value,
    /// i.e. the value equals the true machine-relative H.
    pub definitive: bool,
    pub max_len: u64,
    pub max_steps: u64,
}

/// H restricted to a certified enumeration. The value is an upper bound on
/// the true H_m(s) in general and equals it exactly when `definitive`.
pub fn h_certified(m: &Machine, s: &BitString, max_len: u64, max_steps: u64) -> HCertified {
    let e = dovetail(m, max_len, max_steps);
    let value = e
        .events
        .iter()
        .filter(|ev| ev.output == *s)
        .map(|ev| ev.program.len())
        .min();
    let definitive = match (e.complete, value) {
        (true, Some(v)) => v <= max_len,
        (true, None) => match m {
            Machine::Table(t) => t.max_key_len() <= max_len,
            Machine::Interp(_) => false,
        },
        (false, _) => false,
    };
    HCertified { value, definitive, max_len, max_steps }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerRow {
    pub n: u64,
    pub h: HValue,
    pub t_times_n: ExactNumber,
    /// H − T·n; None when H = ∞.
    pub slack: Option<ExactNumber>,
}

/// Per-prefix complexity ledger with the horizon-relative witness constants
/// for weak Chaitin T-randomness (c) and strict T-compressibility (d).
#[derive(Clone, Debug, PartialEq)]
pub struct RandomnessLedger {
    pub rows: Vec<LedgerRow>,
    /// Least c ∈ ℕ with T·n − c ≤ H(α↾n) for all covered n.
    pub c_horizon: u64,
    /// Least d ∈ ℕ with H(α↾n) ≤ T·n + d for all covered n; None when some
    /// H = ∞ within the horizon.
    pub d_horizon: Option<u64>,
    /// The worst lower-bound slack sits on the last row — a hint that no
    /// bounded witness is in sight.
    pub c_at_horizon_edge: bool,
}

/// Builds the ledger from caller-supplied per-n complexity values
/// (h_values[i] = H(α↾(i+1))).
pub fn randomness_ledger(
    alpha_bits: &BitString,
    t: &Temperature,
    h_values: &[HValue],
) -> Result<RandomnessLedger> {
    let horizon = alpha_bits.len();
    if (h_values.len() as u64) < horizon {
        return Err(Error::MissingH { n: h_values.len() as u64 + 1 });
    }
    let mut rows = Vec::with_capacity(horizon as usize);
    let mut worst_c = ExactNumber::zero();
    let mut worst_c_n = 0u64;
    let mut worst_d: Option<ExactNumber> = Some(ExactNumber::zero());
    for n in 1..=horizon {
        let h = h_values[(n - 1) as usize];
        let t_times_n = t.value() * &ExactNumber::from_int(n);
        let slack = h.map(|hv| ExactNumber::from_int(hv) - t_times_n.clone());
        match &slack {
            Some(s) => {
                let deficit = -s.clone();
                if deficit > worst_c {
                    worst_c = deficit;
                    worst_c_n = n;
                }
                if let Some(w) = &worst_d {
                    if *s > *w {
                        worst_d = Some(s.clone());
                    }
                }
            }
            None => {
                worst_d = None; // H = ∞: no upper-bound witness exists
            }
        }
        rows.push(LedgerRow { n, h, t_times_n, slack });
    }
    let to_nat = |x: &ExactNumber| -> u64 {
        if x.is_positive() {
            num_traits::ToPrimitive::to_u64(&x.ceil_int()).unwrap_or(u64::MAX)
        } else {
            0
        }
    };
    Ok(RandomnessLedger {
        c_horizon: to_nat(&worst_c),
        d_horizon: worst_d.as_ref().map(to_nat),
        c_at_horizon_edge: worst_c_n == horizon && horizon > 0,
        rows,
    })
}

/// Exact partial sum Σ_{n=1}^{N} 2^{n−H(α↾n)}; terms with H = ∞ contribute 0.
/// Instrumentation for the ample-excess observable — no convergence claim.
pub fn ample_excess_partial(
    alpha_bits: &BitString,
    h_values: &[HValue],
    n_max: u64,
) -> Result<ExactNumber> {
    assert!(n_max <= alpha_bits.len(), "N exceeds the supplied prefix");
    if (h_values.len() as u64) < n_max {
        return Err(Error::MissingH { n: h_values.len() as u64 + 1 });
    }
    let mut acc = ExactNumber::zero();
    for n in 1..=n_max {
        if let Some(h) = h_values[(n - 1) as usize] {
            acc += ExactNumber::pow2(n as i64 - h as i64);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eq5Check {
    pub lhs: ExactNumber,
    pub rhs: ExactNumber,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepsumProbe {
    /// Σ_{n=0}^{N} 2^{n−f(n)}, exact.
    pub partial_sum: ExactNumber,
    /// The step points of f below N: { n < N | f(n) < f(n+1) }.
    pub steppoints: Vec<u64>,
    /// The window inequality Σ_{n=h₀+1}^{h_k} 2^{n−f(n)} < 2·Σ_{j=1}^{k}
    /// 2^{h_j−f(h_j)}, when at least two step points exist.
    pub eq5: Option<Eq5Check>,
}

pub fn stepsum_probe(f: &OrderFunction, n_max: u64) -> StepsumProbe {
    let mut partial_sum = ExactNumber::zero();
    for n in 0..=n_max {
        partial_sum += ExactNumber::pow2(n as i64 - f.eval(n) as i64);
    }
    let steppoints: Vec<u64> = (0..n_max).filter(|&n| f.eval(n) < f.eval(n + 1)).collect();
    let eq5 = if steppoints.len() >= 2 {
        let h0 = steppoints[0];
        let hk = *steppoints.last().unwrap();
        let mut lhs = ExactNumber::zero();
        for n in h0 + 1..=hk {
            lhs += ExactNumber::pow2(n as i64 - f.eval(n) as i64);
        }
        let mut rhs = ExactNumber::zero();
        for &hj in &steppoints[1..] {
            rhs += ExactNumber::pow2(hj as i64 - f.eval(hj) as i64);
        }
        rhs = rhs * ExactNumber::from_int(2);
        let holds = lhs < rhs;
        Some(Eq5Check { lhs, rhs, holds })
    } else {
        None
    };
    StepsumProbe { partial_sum, steppoints, eq5 }
}

/// Least t ∈ {0,1}^c with H(st) ≥ H(s) + T·c. H(st) = ∞ always qualifies;
/// a finite H(st) never beats H(s) = ∞. None is a legal outcome for a toy
/// machine — the underlying lemma holds for optimal machines only.
pub fn find_extension(
    m: &TableMachine,
    s: &BitString,
    c: u64,
    t: &Temperature,
) -> Option<BitString> {
    let h_s = h_exact(m, s);
    let threshold = h_s.map(|h| ExactNumber::from_int(h) + t.value() * &ExactNumber::from_int(c));
    strings_of_length(c).find(|ext| {
        match (h_exact(m, &s.concat(ext)), &threshold) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(h_st), Some(thr)) => ExactNumber::from_int(h_st) >= *thr,
        }
    })
}

/// Whether both padding inequalities H(s0^c) ≤ H(s) + T·c − 1 and
/// H(s1^c) ≤ H(s) + T·c − 1 hold on this machine. An infinite left side
/// fails regardless of the right side.
pub fn padding_probe(m: &TableMachine, s: &BitString, c: u64, t: &Temperature) -> bool {
    let h_s = h_exact(m, s);
    let check = |bit: u8| -> bool {
        let padded = s.concat(&BitString::repeated(bit, c));
        match (h_exact(m, &padded), h_s) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(lhs), Some(h)) => {
                ExactNumber::from_int(lhs)
                    <= ExactNumber::from_int(h) + t.value() * &ExactNumber::from_int(c)
                        - ExactNumber::one()
            }
        }
    };
    check(0) && check(1)
}

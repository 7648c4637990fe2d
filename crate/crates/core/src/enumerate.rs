//! Dovetailed enumeration of machine domains and busy-beaver tables.
//!
//! Every set that stands in for "the domain up to length n" carries a
//! completeness certificate; incomplete enumerations are a distinct, typed
//! outcome, never a silent truncation.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::{strings_up_to, BitString};
use crate::error::{Error, Result};
use crate::machine::{Machine, RunResult};

/// One discovered halting program, in canonical enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainEvent {
    pub program: BitString,
    pub output: BitString,
    pub runtime: u64,
    pub event_index: u64,
}

/// The result of a bounded dovetail: exactly
/// { p ∈ Dom m : |p| ≤ max_len, T(p) ≤ max_steps }, ordered by
/// (runtime, program order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub events: Vec<DomainEvent>,
    pub complete: bool,
    pub max_len: u64,
    pub max_steps: u64,
}

impl Enumeration {
    pub fn programs(&self) -> impl Iterator<Item = &BitString> {
        self.events.iter().map(|e| &e.program)
    }

    pub fn program_set(&self) -> BTreeSet<BitString> {
        self.programs().cloned().collect()
    }
}

/// Canonical bounded dovetail. Runs every string of length ≤ max_len through
/// the machine with the step budget and sorts the halts by
/// (runtime, program order), so downstream constructions are reproducible
/// bit for bit.
pub fn dovetail(m: &Machine, max_len: u64, max_steps: u64) -> Enumeration {
    let mut found: Vec<(u64, BitString, BitString)> = Vec::new();
    for p in strings_up_to(max_len) {
        if let RunResult::Halted { output, steps } = m.run(&p, max_steps) {
            found.push((steps, p, output));
        }
    }
    found.sort();
    let events = found
        .into_iter()
        .enumerate()
        .map(|(i, (runtime, program, output))| DomainEvent {
            program,
            output,
            runtime,
            event_index: i as u64,
        })
        .collect();
    let complete = max_steps >= m.exhaustion_budget(max_len);
    Enumeration { events, complete, max_len, max_steps }
}

/// Why a [`domain_upto`] result is exhaustive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertReason {
    /// Every table entry halts within the budget.
    TableExhausted,
    /// The interp domain is syntactic and runtimes are ≤ |p| + 2^w.
    InterpRuntimeBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessCertificate {
    pub max_len: u64,
    pub step_budget: u64,
    pub reason: CertReason,
}

/// Dom m ↾ n, exactly, with the certificate that makes it exact.
pub fn domain_upto(m: &Machine, n: u64) -> (BTreeSet<BitString>, CompletenessCertificate) {
    let budget = m.exhaustion_budget(n);
    let enumeration = dovetail(m, n, budget);
    debug_assert!(enumeration.complete);
    let reason = match m {
        Machine::Table(_) => CertReason::TableExhausted,
        Machine::Interp(_) => CertReason::InterpRuntimeBound,
    };
    (
        enumeration.program_set(),
        CompletenessCertificate { max_len: n, step_budget: budget, reason },
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BusyBeaverRow {
    pub n: u64,
    /// T_M^n: maximum runtime over halting programs of length ≤ n.
    pub t_max: u64,
    /// I_M^n: all programs of length ≤ n achieving t_max (ties kept).
    pub deepest: BTreeSet<BitString>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BusyBeaverTable {
    /// L_M: minimum halting-program length.
    pub l_m: u64,
    pub rows: Vec<BusyBeaverRow>,
}

impl BusyBeaverTable {
    pub fn row(&self, n: u64) -> Option<&BusyBeaverRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// The exact busy-beaver table for lengths L_M ..= n_max.
pub fn busy_beaver(m: &Machine, n_max: u64) -> Result<BusyBeaverTable> {
    let budget = m.exhaustion_budget(n_max);
    let enumeration = dovetail(m, n_max, budget);
    if enumeration.events.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let l_m = enumeration.programs().map(|p| p.len()).min().unwrap();
    let mut rows = Vec::new();
    for n in l_m..=n_max {
        let mut t_max = 0;
        let mut deepest = BTreeSet::new();
        for e in &enumeration.events {
            if e.program.len() > n {
                continue;
            }
            if e.runtime > t_max {
                t_max = e.runtime;
                deepest.clear();
            }
            if e.runtime == t_max {
                deepest.insert(e.program.clone());
            }
        }
        rows.push(BusyBeaverRow { n, t_max, deepest });
    }
    Ok(BusyBeaverTable { l_m, rows })
}

/// Recovers Dom m ↾ n from a single deepest program p ∈ I_M^n by running
/// every candidate of length ≤ n for exactly T_M(p) steps — the machine's
/// domain is never consulted for the result. The precondition (p really is
/// deepest) is validated separately and its violation reported as
/// `NotDeepest`.
pub fn dom_from_deep_program(m: &Machine, n: u64, p: &BitString) -> Result<BTreeSet<BitString>> {
    assert!(p.len() <= n, "deep program longer than the horizon");
    let t = m.runtime(p).ok_or(Error::BadEnumeration { program: p.clone() })?;
    let mut recovered = BTreeSet::new();
    for q in strings_up_to(n) {
        if m.run(&q, t).halted() {
            recovered.insert(q);
        }
    }
    // precondition check: nothing of length ≤ n outruns p
    let (truth, _) = domain_upto(m, n);
    if let Some(witness) = truth.difference(&recovered).next() {
        return Err(Error::NotDeepest { program: p.clone(), witness: witness.clone() });
    }
    Ok(recovered)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lemma26Outcome {
    /// Least d such that every program p with |p| + d ≤ n_max has a witness q
    /// with |q| ≤ |p| + d and T(q) > T(p), with at least one p covered.
    Found { d: u64 },
    /// No d works within the horizon.
    NoWitness,
}

/// Finite probe of the longer-running-time lemma. Instrumentation only: the
/// value is horizon-relative and no asymptotic claim is made.
pub fn lemma26_probe(m: &Machine, n_max: u64) -> Result<Lemma26Outcome> {
    let budget = m.exhaustion_budget(n_max);
    let enumeration = dovetail(m, n_max, budget);
    if enumeration.events.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let dom: Vec<(&BitString, u64)> = enumeration
        .events
        .iter()
        .map(|e| (&e.program, e.runtime))
        .collect();
    for d in 0..=n_max {
        let covered: Vec<&(&BitString, u64)> =
            dom.iter().filter(|(p, _)| p.len() + d <= n_max).collect();
        if covered.is_empty() {
            continue;
        }
        let all_witnessed = covered.iter().all(|(p, t)| {
            dom.iter()
                .any(|(q, tq)| q.len() <= p.len() + d && *tq > *t)
        });
        if all_witnessed {
            return Ok(Lemma26Outcome::Found { d });
        }
    }
    Ok(Lemma26Outcome::NoWitness)
}

/// Exact (length, count) census of halting programs with |p| ≤ max_len and
/// T(p) ≤ max_steps. Closed-form for the interp machine, so truncations far
/// beyond enumerable size stay exact.
pub fn length_census(m: &Machine, max_len: u64, max_steps: u64) -> Vec<(u64, BigUint)> {
    match m {
        Machine::Table(t) => {
            let mut by_len: std::collections::BTreeMap<u64, BigUint> = Default::default();
            for (p, _, steps) in t.entries() {
                if p.len() <= max_len && steps <= max_steps {
                    *by_len.entry(p.len()).or_default() += BigUint::one();
                }
            }
            by_len.into_iter().collect()
        }
        Machine::Interp(im) => {
            let w = im.window() as u64;
            let mut rows = Vec::new();
            let mut a = 1u64;
            loop {
                let l = crate::machine::InterpMachine::program_len(a);
                if l > max_len {
                    break; // program length is strictly increasing in a
                }
                // bodies whose first min(a,w) bits read ≤ max_steps − l
                let count = if max_steps < l {
                    BigUint::ZERO
                } else {
                    let slack = max_steps - l;
                    let k = a.min(w);
                    let prefixes = if k >= 63 || slack >= (1u64 << k) - 1 {
                        BigUint::one() << k
                    } else {
                        BigUint::from(slack + 1)
                    };
                    prefixes << (a - k)
                };
                if count > BigUint::ZERO {
                    rows.push((l, count));
                }
                a += 1;
            }
            rows.sort();
            rows
        }
    }
}

//! Concrete prefix-free machines with step-bounded execution.
//!
//! The computation convention is enforced by the abstraction itself: a
//! machine halts on an input iff the input is in its domain and its runtime
//! fits the supplied budget, and it cannot halt outside its domain.
//! Consumers are expected to treat machines as black boxes through
//! [`Machine::run`]; the syntactic decidability of the two built-in kinds is
//! quarantined here.

use std::collections::BTreeMap;

use crate::bits::{prefix_free_violation, BitString};
use crate::error::{Error, Result};

/// A finite prefix-free machine given by an explicit table
/// program → (output, runtime).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMachine {
    entries: BTreeMap<BitString, (BitString, u64)>,
}

impl TableMachine {
    /// Validates prefix-freeness of the key set and positivity of runtimes.
    pub fn new(entries: impl IntoIterator<Item = (BitString, BitString, u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, out, t) in entries {
            if t == 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("runtime of {} must be positive", p),
                });
            }
            map.insert(p, (out, t));
        }
        let keys: Vec<BitString> = map.keys().cloned().collect();
        if let Some((shorter, longer)) = prefix_free_violation(&keys) {
            return Err(Error::NotPrefixFree { shorter, longer });
        }
        Ok(TableMachine { entries: map })
    }

    pub fn empty() -> Self {
        TableMachine { entries: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in quasi-lexicographic key order.
    pub fn entries(&self) -> impl Iterator<Item = (&BitString, &BitString, u64)> {
        self.entries.iter().map(|(p, (out, t))| (p, out, *t))
    }

    pub fn domain(&self) -> impl Iterator<Item = &BitString> {
        self.entries.keys()
    }

    pub fn contains(&self, p: &BitString) -> bool {
        self.entries.contains_key(p)
    }

    pub fn lookup(&self, p: &BitString) -> Option<(&BitString, u64)> {
        self.entries.get(p).map(|(out, t)| (out, *t))
    }

    pub fn max_key_len(&self) -> u64 {
        self.entries.keys().map(|p| p.len()).max().unwrap_or(0)
    }

    pub fn max_runtime(&self) -> u64 {
        self.entries.values().map(|&(_, t)| t).max().unwrap_or(0)
    }
}

/// A machine with an unbounded prefix-free domain: programs are
/// `gamma(a) ++ body` with `|body| = a`, where `gamma` is the Elias-gamma
/// code. The output is the body; the runtime is
/// `|p| + value(first min(a, w) bits of body)`, so runtimes vary with
/// content but stay below `|p| + 2^w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpMachine {
    runtime_window: u32,
}

impl InterpMachine {
    pub fn new(runtime_window: u32) -> Self {
        InterpMachine { runtime_window }
    }

    pub fn window(&self) -> u32 {
        self.runtime_window
    }

    /// gamma(a) = 0^{b−1} ++ binary(a), b = bit length of a. Requires a ≥ 1.
    pub fn gamma(a: u64) -> BitString {
        assert!(a >= 1);
        let b = 64 - a.leading_zeros() as u64;
        let mut bits = Vec::with_capacity((2 * b - 1) as usize);
        bits.resize((b - 1) as usize, 0u8);
        for i in (0..b).rev() {
            bits.push(((a >> i) & 1) as u8);
        }
        BitString::from_bits(bits)
    }

    /// Length of the program gamma(a) ++ body: a + 2⌊log₂ a⌋ + 1.
    pub fn program_len(a: u64) -> u64 {
        assert!(a >= 1);
        let b = 64 - a.leading_zeros() as u64;
        a + 2 * b - 1
    }

    /// Splits p into (a, body) when p is exactly gamma(a) ++ body with
    /// |body| = a; None otherwise.
    fn parse(&self, p: &BitString) -> Option<(u64, BitString)> {
        let n = p.len();
        let mut zeros = 0u64;
        while zeros < n && p.bit(zeros) == 0 {
            zeros += 1;
        }
        if zeros >= n {
            return None; // no leading 1 found
        }
        let b = zeros + 1; // bit length of a
        if zeros + b > n {
            return None;
        }
        let mut a = 0u64;
        for i in 0..b {
            a = (a << 1) | p.bit(zeros + i) as u64;
        }
        if n != zeros + b + a {
            return None;
        }
        let body = BitString::from_bits((zeros + b..n).map(|i| p.bit(i)));
        Some((a, body))
    }

    fn runtime_of(&self, p_len: u64, a: u64, body: &BitString) -> u64 {
        let k = a.min(self.runtime_window as u64);
        let mut v = 0u64;
        for i in 0..k {
            v = (v << 1) | body.bit(i) as u64;
        }
        p_len + v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Table(TableMachine),
    Interp(InterpMachine),
}

/// Outcome of running a machine for a bounded number of steps. `Running` is
/// a value, not an error: at a bigger budget the same input may halt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunResult {
    Halted { output: BitString, steps: u64 },
    Running,
}

impl RunResult {
    pub fn halted(&self) -> bool {
        matches!(self, RunResult::Halted { .. })
    }
}

impl Machine {
    pub fn table(entries: impl IntoIterator<Item = (BitString, BitString, u64)>) -> Result<Self> {
        Ok(Machine::Table(TableMachine::new(entries)?))
    }

    pub fn interp(window: u32) -> Self {
        Machine::Interp(InterpMachine::new(window))
    }

    /// Runs p for at most `budget` steps.
    pub fn run(&self, p: &BitString, budget: u64) -> RunResult {
        match self {
            Machine::Table(t) => match t.lookup(p) {
                Some((out, steps)) if steps <= budget => RunResult::Halted {
                    output: out.clone(),
                    steps,
                },
                _ => RunResult::Running,
            },
            Machine::Interp(m) => match m.parse(p) {
                Some((a, body)) => {
                    let steps = m.runtime_of(p.len(), a, &body);
                    if steps <= budget {
                        RunResult::Halted { output: body, steps }
                    } else {
                        RunResult::Running
                    }
                }
                None => RunResult::Running,
            },
        }
    }

    /// T_M(p) when p is in the domain; None otherwise. Decidable for both
    /// built-in kinds (table lookup; syntactic parse).
    pub fn runtime(&self, p: &BitString) -> Option<u64> {
        match self {
            Machine::Table(t) => t.lookup(p).map(|(_, steps)| steps),
            Machine::Interp(m) => m
                .parse(p)
                .map(|(a, body)| m.runtime_of(p.len(), a, &body)),
        }
    }

    pub fn output(&self, p: &BitString) -> Option<BitString> {
        match self.run(p, u64::MAX) {
            RunResult::Halted { output, .. } => Some(output),
            RunResult::Running => None,
        }
    }

    /// A step budget that exhausts the domain up to program length `max_len`:
    /// every halting program of length ≤ max_len halts within it. Exact for
    /// both kinds (for the interp machine, the worst body value at each
    /// parameter).
    pub fn exhaustion_budget(&self, max_len: u64) -> u64 {
        match self {
            Machine::Table(t) => t.max_runtime(),
            Machine::Interp(m) => {
                let w = m.runtime_window as u64;
                let mut worst = 0u64;
                let mut a = 1u64;
                loop {
                    let l = InterpMachine::program_len(a);
                    if l > max_len {
                        break;
                    }
                    worst = worst.max(l + (1u64 << a.min(w).min(62)) - 1);
                    a += 1;
                }
                worst
            }
        }
    }
}

impl From<TableMachine> for Machine {
    fn from(t: TableMachine) -> Self {
        Machine::Table(t)
    }
}

/// V^{(l)}: the table machine whose domain is exactly the first `l` programs
/// of the supplied enumeration, agreeing with `m` there.
pub fn truncate_machine(m: &Machine, enum_order: &[BitString], l: usize) -> Result<TableMachine> {
    assert!(l <= enum_order.len(), "l exceeds the enumeration prefix");
    let mut entries = Vec::with_capacity(l);
    for p in &enum_order[..l] {
        let steps = m.runtime(p).ok_or(Error::BadEnumeration { program: p.clone() })?;
        let output = m.output(p).expect("runtime implies halting");
        entries.push((p.clone(), output, steps));
    }
    TableMachine::new(entries)
}

/// Parses the machine-definition text format:
/// one `entry <program> <output> <runtime>` per line, `#` comments, or a
/// single `interp w=<decimal>` line. `-` denotes the empty string.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut entries = Vec::new();
    let mut interp: Option<u32> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("entry") => {
                let err = |message: String| Error::Parse { line: line_no, message };
                let p: BitString = fields
                    .next()
                    .ok_or_else(|| err("missing program field".into()))?
                    .parse()
                    .map_err(|e| relocate(e, line_no))?;
                let out: BitString = fields
                    .next()
                    .ok_or_else(|| err("missing output field".into()))?
                    .parse()
                    .map_err(|e| relocate(e, line_no))?;
                let t: u64 = fields
                    .next()
                    .ok_or_else(|| err("missing runtime field".into()))?
                    .parse()
                    .map_err(|_| err("invalid runtime".into()))?;
                if fields.next().is_some() {
                    return Err(err("trailing fields".into()));
                }
                entries.push((p, out, t));
            }
            Some("interp") => {
                let spec = fields.next().unwrap_or("");
                let w = spec
                    .strip_prefix("w=")
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "expected interp w=<decimal>".into(),
                    })?;
                interp = Some(w);
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown directive {:?}", other),
                })
            }
            None => unreachable!(),
        }
    }
    match (interp, entries.is_empty()) {
        (Some(w), true) => Ok(Machine::interp(w)),
        (Some(_), false) => Err(Error::Parse {
            line: 0,
            message: "a file declares either an interp machine or table entries, not both".into(),
        }),
        (None, _) => Machine::table(entries).map_err(|e| relocate(e, 0)),
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } if line > 0 => Error::Parse { line, message },
        other => other,
    }
}

/// Serializes a machine in the text format parsed by [`parse_machine`].
pub fn format_machine(m: &Machine) -> String {
    match m {
        Machine::Interp(im) => format!("interp w={}\n", im.window()),
        Machine::Table(t) => {
            let mut out = String::new();
            for (p, o, steps) in t.entries() {
                let p_s = if p.is_empty() { "-".to_string() } else { p.to_string() };
                let o_s = if o.is_empty() { "-".to_string() } else { o.to_string() };
                out.push_str(&format!("entry {} {} {}\n", p_s, o_s, steps));
            }
            out
        }
    }
}

//! Order functions: total, non-decreasing, unbounded bounds on oracle query
//! sizes. A closed family of parameterized shapes covers every bound the
//! workbench's procedures declare; values are always computed pointwise with
//! exact integer arithmetic, never algebraically simplified.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{floor_mul_log2, ExactNumber};
use crate::interval::{interval_pow2, rational_pow_interval};

#[derive(Clone, Debug, PartialEq)]
pub enum OrderFunction {
    /// n ↦ n + c
    Identity { c: u64 },
    /// n ↦ ⌊T·n⌋ + c, T > 0
    Linear { t: ExactNumber, c: u64 },
    /// n ↦ ⌈n/T⌉ + c, T > 0
    InvLinear { t: ExactNumber, c: u64 },
    /// n ↦ n + ⌊(1+ε)·log₂(n+1)⌋ + c, ε ≥ 0
    LogAdjusted { eps: ExactNumber, c: u64 },
    /// Explicit values on 0..table.len(), then n ↦ n + ext_c
    TableDefined { table: Vec<u64>, ext_c: u64 },
    /// Pointwise composition outer∘inner (from [`compose_bound`])
    Compose { inner: Box<OrderFunction>, outer: Box<OrderFunction> },
}

impl OrderFunction {
    pub fn identity(c: u64) -> Self {
        OrderFunction::Identity { c }
    }

    pub fn linear(t: ExactNumber, c: u64) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Parse { line: 0, message: "Linear needs T > 0".into() });
        }
        Ok(OrderFunction::Linear { t, c })
    }

    pub fn inv_linear(t: ExactNumber, c: u64) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Parse { line: 0, message: "InvLinear needs T > 0".into() });
        }
        Ok(OrderFunction::InvLinear { t, c })
    }

    pub fn log_adjusted(eps: ExactNumber, c: u64) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::Parse { line: 0, message: "LogAdjusted needs ε ≥ 0".into() });
        }
        Ok(OrderFunction::LogAdjusted { eps, c })
    }

    /// The table must be non-decreasing and mesh with the n + ext_c tail.
    pub fn table_defined(table: Vec<u64>, ext_c: u64) -> Result<Self> {
        for w in table.windows(2) {
            if w[0] > w[1] {
                return Err(Error::Parse {
                    line: 0,
                    message: "table values must be non-decreasing".into(),
                });
            }
        }
        if let Some(&last) = table.last() {
            if last > table.len() as u64 + ext_c {
                return Err(Error::Parse {
                    line: 0,
                    message: "table tail exceeds its identity extension".into(),
                });
            }
        }
        Ok(OrderFunction::TableDefined { table, ext_c })
    }

    pub fn eval(&self, n: u64) -> u64 {
        match self {
            OrderFunction::Identity { c } => n + c,
            OrderFunction::Linear { t, c } => {
                let v = (ExactNumber::from_int(n) * t.clone()).floor_int();
                v.to_u64().expect("desk-scale bound") + c
            }
            OrderFunction::InvLinear { t, c } => {
                let v = (ExactNumber::from_int(n) / t).ceil_int();
                v.to_u64().expect("desk-scale bound") + c
            }
            OrderFunction::LogAdjusted { eps, c } => {
                let factor = ExactNumber::one() + eps.clone();
                n + floor_mul_log2(&factor, n + 1) + c
            }
            OrderFunction::TableDefined { table, ext_c } => match table.get(n as usize) {
                Some(&v) => v,
                None => n + ext_c,
            },
            OrderFunction::Compose { inner, outer } => outer.eval(inner.eval(n)),
        }
    }

    /// Same shape with `d` added to the constant term, so f+d stays in the
    /// family.
    pub fn plus_const(&self, d: u64) -> OrderFunction {
        match self {
            OrderFunction::Identity { c } => OrderFunction::Identity { c: c + d },
            OrderFunction::Linear { t, c } => OrderFunction::Linear { t: t.clone(), c: c + d },
            OrderFunction::InvLinear { t, c } => {
                OrderFunction::InvLinear { t: t.clone(), c: c + d }
            }
            OrderFunction::LogAdjusted { eps, c } => {
                OrderFunction::LogAdjusted { eps: eps.clone(), c: c + d }
            }
            OrderFunction::TableDefined { table, ext_c } => OrderFunction::TableDefined {
                table: table.iter().map(|v| v + d).collect(),
                ext_c: ext_c + d,
            },
            OrderFunction::Compose { inner, outer } => OrderFunction::Compose {
                inner: inner.clone(),
                outer: Box::new(outer.plus_const(d)),
            },
        }
    }

    /// Exact rational upper bound on the tail Σ_{n>horizon} 2^{n−f(n)} for
    /// the families whose series converge; None when the series diverges or
    /// no closed form ships (Identity, TableDefined, Compose).
    pub fn tail_bound(&self, horizon: u64) -> Option<ExactNumber> {
        match self {
            OrderFunction::Linear { t, c } => {
                if *t <= ExactNumber::one() {
                    return None;
                }
                // 2^{n−⌊tn⌋−c} ≤ 2^{1−c}·ρ^n with ρ = 2^{−(t−1)} < 1
                let rho = interval_pow2(&(ExactNumber::one() - t.clone()), 16)
                    .hi()
                    .clone();
                Some(geometric_tail(&rho, horizon, *c as i64 - 1))
            }
            OrderFunction::InvLinear { t, c } => {
                if *t >= ExactNumber::one() {
                    return None;
                }
                // 2^{n−⌈n/t⌉−c} ≤ 2^{−c}·ρ^n with ρ = 2^{1−1/t} < 1
                let exp = ExactNumber::one() - t.recip();
                let rho = interval_pow2(&exp, 16).hi().clone();
                Some(geometric_tail(&rho, horizon, *c as i64))
            }
            OrderFunction::LogAdjusted { eps, c } => {
                if !eps.is_positive() {
                    return None;
                }
                // 2^{−⌊(1+ε)log₂(n+1)⌋−c} ≤ 2^{1−c}·(n+1)^{−(1+ε)} and
                // Σ_{n>h} (n+1)^{−(1+ε)} ≤ (1/ε)·(h+1)^{−ε}
                let h1 = ExactNumber::from_int(horizon + 1);
                let pow = rational_pow_interval(&h1.recip(), eps, 16).hi().clone();
                Some(ExactNumber::pow2(1 - *c as i64) * eps.recip() * pow)
            }
            _ => None,
        }
    }
}

/// Σ_{n>h} 2^k·ρ^n = 2^k·ρ^{h+1}/(1−ρ) for rational 0 < ρ < 1.
fn geometric_tail(rho: &ExactNumber, horizon: u64, k: i64) -> ExactNumber {
    assert!(rho.is_positive() && *rho < ExactNumber::one());
    let lead = rho.pow_int(horizon as i64 + 1);
    ExactNumber::pow2(-k) * lead / (ExactNumber::one() - rho.clone())
}

/// g∘f, evaluated pointwise. The composition of order functions is an order
/// function, so the invariants hold by construction.
pub fn compose_bound(f: &OrderFunction, g: &OrderFunction) -> OrderFunction {
    OrderFunction::Compose { inner: Box::new(f.clone()), outer: Box::new(g.clone()) }
}

impl fmt::Display for OrderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderFunction::Identity { c } => write!(f, "identity:{}", c),
            OrderFunction::Linear { t, c } => write!(f, "linear:{}:{}", t, c),
            OrderFunction::InvLinear { t, c } => write!(f, "invlinear:{}:{}", t, c),
            OrderFunction::LogAdjusted { eps, c } => write!(f, "logadj:{}:{}", eps, c),
            OrderFunction::TableDefined { table, ext_c } => {
                let vals: Vec<String> = table.iter().map(|v| v.to_string()).collect();
                write!(f, "table:{}:{}", vals.join(","), ext_c)
            }
            OrderFunction::Compose { inner, outer } => write!(f, "compose[{};{}]", inner, outer),
        }
    }
}

impl FromStr for OrderFunction {
    type Err = Error;

    /// `identity:c`, `linear:T:c`, `invlinear:T:c`, `logadj:eps:c`,
    /// `table:v0,v1,...:ext_c` (T and eps as `num/den`).
    fn from_str(s: &str) -> Result<OrderFunction> {
        let bad = |msg: &str| Error::Parse { line: 0, message: format!("bound spec: {}", msg) };
        let parts: Vec<&str> = s.split(':').collect();
        let parse_c = |t: &str| t.parse::<u64>().map_err(|_| bad("invalid constant"));
        match parts.as_slice() {
            ["identity", c] => Ok(OrderFunction::identity(parse_c(c)?)),
            ["linear", t, c] => OrderFunction::linear(t.parse()?, parse_c(c)?),
            ["invlinear", t, c] => OrderFunction::inv_linear(t.parse()?, parse_c(c)?),
            ["logadj", eps, c] => OrderFunction::log_adjusted(eps.parse()?, parse_c(c)?),
            ["table", vals, ext] => {
                let table = vals
                    .split(',')
                    .filter(|v| !v.is_empty())
                    .map(|v| v.parse::<u64>().map_err(|_| bad("invalid table value")))
                    .collect::<Result<Vec<u64>>>()?;
                OrderFunction::table_defined(table, parse_c(ext)?)
            }
            _ => Err(bad("unknown family")),
        }
    }
}

/// Exact table of g(f(n)) − n for n ≤ n_max, with its running maximum —
/// the quantity whose unboundedness defines unidirectionality. Finite
/// instrumentation only; no asymptotic verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnidirectionalityProbe {
    pub values: Vec<i64>,
    pub running_max: Vec<i64>,
}

pub fn unidirectionality_probe(
    f: &OrderFunction,
    g: &OrderFunction,
    n_max: u64,
) -> UnidirectionalityProbe {
    let mut values = Vec::with_capacity(n_max as usize + 1);
    let mut running_max = Vec::with_capacity(n_max as usize + 1);
    let mut max = i64::MIN;
    for n in 0..=n_max {
        let v = g.eval(f.eval(n)) as i64 - n as i64;
        max = max.max(v);
        values.push(v);
        running_max.push(max);
    }
    UnidirectionalityProbe { values, running_max }
}

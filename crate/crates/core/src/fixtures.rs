//! Canned table machines for experiments and the verification suite.
//!
//! All fixtures are deterministic. Domains come out of the Kraft allocator
//! (so they are prefix-free by construction), entry lengths stay ≤ 8 and
//! runtimes ≤ 8 + entry index spread, keeping exhaustive ground-truth
//! comparisons cheap. Every fixture leaves Kraft headroom, so Ω < 1 and the
//! expansion conventions stay non-degenerate.

use crate::bits::{nat_to_string_u64, BitString};
use crate::kraft::allocate_stream;
use crate::machine::TableMachine;

/// Tiny deterministic generator (splitmix64) for shaping fixture entries.
fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// The two-entry machine with Ω = 3/4 that the examples use throughout.
pub fn three_quarter() -> TableMachine {
    TableMachine::new([
        ("0".parse().unwrap(), BitString::empty(), 1),
        ("11".parse().unwrap(), "1".parse().unwrap(), 2),
    ])
    .unwrap()
}

/// A deterministic family of ≥ `count` table machines with ≤ 64 entries,
/// entry lengths ≤ 8, runtimes ≤ 8, varied outputs, and Ω strictly below 1.
pub fn fixture_machines(count: usize) -> Vec<TableMachine> {
    let mut out = Vec::with_capacity(count);
    out.push(three_quarter());
    // a singleton and a deeper handcrafted machine
    out.push(TableMachine::new([("1".parse().unwrap(), "0".parse().unwrap(), 3)]).unwrap());
    out.push(
        TableMachine::new([
            ("00".parse().unwrap(), BitString::empty(), 1),
            ("010".parse().unwrap(), "0".parse().unwrap(), 2),
            ("011".parse().unwrap(), "1".parse().unwrap(), 4),
            ("10".parse().unwrap(), "00".parse().unwrap(), 3),
            ("110".parse().unwrap(), "01".parse().unwrap(), 5),
        ])
        .unwrap(),
    );
    let mut seed = 0x00c0ffee;
    let mut salt = 0u64;
    while out.len() < count {
        salt += 1;
        let mut state = seed ^ salt.wrapping_mul(0x5851f42d4c957f2d);
        // between 3 and 24 entries, lengths 2..=8, leaving Kraft headroom
        let n_entries = 3 + (splitmix(&mut state) % 22) as usize;
        let mut lengths = Vec::with_capacity(n_entries);
        let mut budget = crate::exact::ExactNumber::ratio(7, 8);
        for _ in 0..n_entries {
            let l = 2 + (splitmix(&mut state) % 7);
            let weight = crate::exact::ExactNumber::pow2(-(l as i64));
            if weight <= budget {
                budget = budget - weight;
                lengths.push(l);
            }
        }
        let codes = match allocate_stream(&lengths) {
            Ok(codes) => codes,
            Err(_) => continue,
        };
        let entries: Vec<(BitString, BitString, u64)> = codes
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                // runtimes loosely increase with length so deeper programs
                // exist at every horizon (keeps the busy-beaver probes alive)
                let runtime = p.len() + (splitmix(&mut state) % 3);
                let output = nat_to_string_u64(splitmix(&mut state) % (2 * (i as u64 + 1)));
                (p, output, runtime.max(1))
            })
            .collect();
        match TableMachine::new(entries) {
            Ok(m) if !m.is_empty() => out.push(m),
            _ => {}
        }
        seed = seed.wrapping_add(1);
    }
    out.truncate(count);
    out
}

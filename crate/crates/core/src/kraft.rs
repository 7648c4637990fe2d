//! Online Kraft–Chaitin codeword allocation and the weight-shift constant
//! used to turn a convergent Σ 2^{n−f(n)} into a Kraft-compatible length
//! assignment.
//!
//! The allocator keeps the free part of the unit interval as a set of
//! maximal disjoint dyadic intervals, each named by the bit string whose
//! extensions it contains. Serving a request from the lexicographically
//! least node of admissible length preserves the invariant that free node
//! lengths are pairwise distinct, which is what makes the allocator complete:
//! a request fails exactly when the running Kraft sum would exceed 1.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exact::ExactNumber;
use crate::order::OrderFunction;

/// Exact Σ 2^{−l} over a list of lengths.
pub fn kraft_sum(lengths: &[u64]) -> ExactNumber {
    crate::exact::sum_pow2_neg(lengths.iter().copied())
}

#[derive(Clone, Debug)]
pub struct Allocator {
    /// Free interval nodes, kept sorted lexicographically.
    free: Vec<BitString>,
    issued: Vec<BitString>,
}

impl Default for Allocator {
    fn default() -> Self {
        Self::new()
    }
}

impl Allocator {
    pub fn new() -> Self {
        Allocator { free: vec![BitString::empty()], issued: Vec::new() }
    }

    pub fn issued(&self) -> &[BitString] {
        &self.issued
    }

    pub fn free_measure(&self) -> ExactNumber {
        crate::exact::sum_pow2_neg(self.free.iter().map(|w| w.len()))
    }

    pub fn issued_measure(&self) -> ExactNumber {
        crate::exact::sum_pow2_neg(self.issued.iter().map(|w| w.len()))
    }

    /// Issues a fresh codeword of exactly the requested length,
    /// prefix-incomparable with everything issued before.
    pub fn allocate(&mut self, length: u64) -> Result<BitString> {
        let pos = self
            .free
            .iter()
            .position(|w| w.len() <= length)
            .ok_or_else(|| Error::KraftOverflow {
                index: None,
                requested: length,
                kraft_sum: self.issued_measure() + ExactNumber::pow2(-(length as i64)),
            })?;
        let node = self.free.remove(pos);
        // carve the all-zeros subinterval; the 1-siblings along the path stay free
        let mut code = node;
        for _ in 0..(length - code.len()) {
            let mut sibling = code.clone();
            sibling.push(1);
            let at = self
                .free
                .binary_search_by(|w| w.lex_cmp(&sibling))
                .expect_err("sibling cannot already be free");
            self.free.insert(at, sibling);
            code.push(0);
        }
        self.issued.push(code.clone());
        Ok(code)
    }
}

/// Folds [`Allocator::allocate`] over a length list. On overflow the error
/// carries the failing index and the exact Kraft sum that would have been
/// reached.
pub fn allocate_stream(lengths: &[u64]) -> Result<Vec<BitString>> {
    let mut alloc = Allocator::new();
    let mut out = Vec::with_capacity(lengths.len());
    for (i, &l) in lengths.iter().enumerate() {
        match alloc.allocate(l) {
            Ok(code) => out.push(code),
            Err(Error::KraftOverflow { requested, kraft_sum, .. }) => {
                return Err(Error::KraftOverflow {
                    index: Some(i),
                    requested,
                    kraft_sum,
                })
            }
            Err(other) => return Err(other),
        }
    }
    Ok(out)
}

/// The weight-shift constant d₀: least d₀ with
/// (Σ_{n≤horizon} 2^{n−f(n)} + tail) · 2^{−d₀} ≤ 1.
///
/// The head is exact; the tail is the caller's certificate (an exact upper
/// bound on Σ_{n>horizon} 2^{n−f(n)}, available in closed form for the
/// built-in order-function families). Without a certificate the result is
/// head-only and flagged provisional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightShift {
    pub d0: u64,
    pub provisional: bool,
}

pub fn weight_shift(
    f: &OrderFunction,
    horizon: u64,
    tail_certificate: Option<&ExactNumber>,
) -> WeightShift {
    let mut total = ExactNumber::zero();
    for n in 0..=horizon {
        total += ExactNumber::pow2(n as i64 - f.eval(n) as i64);
    }
    if let Some(tail) = tail_certificate {
        total += tail.clone();
    }
    let mut d0 = 0u64;
    while total > ExactNumber::pow2(d0 as i64) {
        d0 += 1;
    }
    WeightShift { d0, provisional: tail_certificate.is_none() }
}

/// Codeword lengths |g(n)| = f(n) − n + d₀ for n = 0..=horizon, the lengths
/// the comparison-machine construction feeds to the allocator. The weight
/// shift guarantees they are non-negative and Kraft-compatible.
pub fn comparison_code_lengths(f: &OrderFunction, d0: u64, horizon: u64) -> Vec<u64> {
    (0..=horizon)
        .map(|n| {
            let fv = f.eval(n) + d0;
            assert!(fv >= n, "weight shift too small at n = {}", n);
            fv - n
        })
        .collect()
}

/// Brute-force reference: is there any prefix-free code with these lengths?
/// (Kraft's inequality is exact at dyadic scale, so this is just the sum
/// check — kept as an independent oracle for tests.)
pub fn kraft_feasible(lengths: &[u64]) -> bool {
    kraft_sum(lengths) <= ExactNumber::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bs, is_prefix_free};
    use proptest::prelude::*;

    #[test]
    fn kraft_sum_examples() {
        assert_eq!(kraft_sum(&[]), ExactNumber::zero());
        assert_eq!(kraft_sum(&[1, 2, 2]), ExactNumber::one());
        assert_eq!(kraft_sum(&[3; 8]), ExactNumber::one());
    }

    #[test]
    fn least_interval_policy() {
        let mut a = Allocator::new();
        assert_eq!(a.allocate(1).unwrap(), bs("0"));
        assert_eq!(a.allocate(2).unwrap(), bs("10"));
        assert_eq!(a.allocate(2).unwrap(), bs("11"));
        let err = a.allocate(5).unwrap_err();
        assert!(matches!(err, Error::KraftOverflow { .. }));
    }

    #[test]
    fn conservation_invariant() {
        let mut a = Allocator::new();
        for l in [3, 1, 4, 4, 3, 5] {
            a.allocate(l).unwrap();
            assert_eq!(a.free_measure() + a.issued_measure(), ExactNumber::one());
        }
    }

    #[test]
    fn stream_examples() {
        assert_eq!(allocate_stream(&[1, 2, 2]).unwrap(), vec![bs("0"), bs("10"), bs("11")]);
        assert_eq!(allocate_stream(&[]).unwrap(), Vec::<BitString>::new());
        let codes = allocate_stream(&[2, 2, 2, 3, 3]).unwrap();
        assert!(is_prefix_free(&codes));
        assert_eq!(codes.len(), 5);
        // overflow reports the failing index and exact sum
        match allocate_stream(&[1, 1, 5]) {
            Err(Error::KraftOverflow { index: Some(2), requested: 5, kraft_sum }) => {
                assert_eq!(kraft_sum, ExactNumber::one() + ExactNumber::pow2(-5));
            }
            other => panic!("expected overflow, got {:?}", other),
        }
    }

    #[test]
    fn unsorted_presentation_that_fragments_naive_policies() {
        // [3,2,1] fragments a shortest-first allocator; best-fit succeeds
        let codes = allocate_stream(&[3, 2, 1]).unwrap();
        assert!(is_prefix_free(&codes));
        assert_eq!(codes.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![3, 2, 1]);
    }

    #[test]
    fn weight_shift_examples() {
        // f(n) = 2n, horizon 20, exact tail 2^{−20}: head+tail = 2, d₀ = 1
        let f = OrderFunction::linear(ExactNumber::from_int(2), 0).unwrap();
        let tail = ExactNumber::pow2(-20);
        let ws = weight_shift(&f, 20, Some(&tail));
        assert_eq!(ws, WeightShift { d0: 1, provisional: false });

        // identity: head = horizon + 1 terms of 1 each, provisional
        let id = OrderFunction::identity(0);
        let ws = weight_shift(&id, 10, None);
        assert_eq!(ws.d0, 4); // least d with 11 ≤ 2^d
        assert!(ws.provisional);

        // f(n) = n + ⌊2·log₂(n+2)⌋ via table over the head, closed-form tail
        // Σ_{n>10} 2^{−⌊2log₂(n+2)⌋} ≤ Σ 2·(n+2)^{−2} ≤ 2/12
        let table: Vec<u64> = (0..=11u64)
            .map(|n| n + crate::exact::floor_mul_log2(&ExactNumber::from_int(2), n + 2))
            .collect();
        let f = OrderFunction::table_defined(table, 8).unwrap();
        let tail = ExactNumber::ratio(2, 12);
        let ws = weight_shift(&f, 10, Some(&tail));
        assert_eq!(ws.d0, 0);
        // verify Σ·2^{−d₀} ≤ 1 exactly on the head
        let mut head = ExactNumber::zero();
        for n in 0..=10u64 {
            head += ExactNumber::pow2(n as i64 - f.eval(n) as i64);
        }
        assert!((head + tail) * ExactNumber::pow2(-(ws.d0 as i64)) <= ExactNumber::one());
    }

    #[test]
    fn comparison_lengths_are_kraft_feasible() {
        let f = OrderFunction::log_adjusted(ExactNumber::one(), 0).unwrap();
        let tail = f.tail_bound(12).unwrap();
        let ws = weight_shift(&f, 12, Some(&tail));
        let lengths = comparison_code_lengths(&f, ws.d0, 12);
        assert!(kraft_feasible(&lengths));
        let codes = allocate_stream(&lengths).unwrap();
        assert!(is_prefix_free(&codes));
    }

    proptest! {
        #[test]
        fn feasible_streams_allocate_prefix_free(lengths in proptest::collection::vec(1u64..=24, 0..60)) {
            prop_assume!(kraft_feasible(&lengths));
            let codes = allocate_stream(&lengths).unwrap();
            prop_assert!(is_prefix_free(&codes));
            prop_assert_eq!(
                codes.iter().map(|c| c.len()).collect::<Vec<_>>(),
                lengths.clone()
            );
            // injectivity
            let set: std::collections::HashSet<_> = codes.iter().collect();
            prop_assert_eq!(set.len(), codes.len());
        }

        #[test]
        fn infeasible_streams_fail_with_exact_witness(lengths in proptest::collection::vec(1u64..=8, 1..40)) {
            prop_assume!(!kraft_feasible(&lengths));
            match allocate_stream(&lengths) {
                Err(Error::KraftOverflow { index: Some(i), kraft_sum, .. }) => {
                    // the reported sum is the first prefix sum that crosses 1
                    prop_assert!(kraft_sum > ExactNumber::one());
                    prop_assert!(kraft_feasible(&lengths[..i]));
                }
                other => prop_assert!(false, "expected overflow, got {:?}", other),
            }
        }
    }

    #[test]
    fn free_nodes_stay_lex_sorted_and_length_distinct() {
        let mut a = Allocator::new();
        for l in [4, 2, 6, 3, 6, 1] {
            a.allocate(l).unwrap();
            let mut lens: Vec<u64> = a.free.iter().map(|w| w.len()).collect();
            for w in a.free.windows(2) {
                assert_eq!(w[0].lex_cmp(&w[1]), std::cmp::Ordering::Less);
            }
            lens.sort();
            lens.dedup();
            assert_eq!(lens.len(), a.free.len(), "duplicate free lengths");
        }
    }
}

//! The four-block lower-bound construction, its codegree audit, and its
//! parity-based no-decomposition certificate.
//!
//! Vertices split into one even block V_0 and three odd blocks V_1, V_2, V_3.
//! A triple is admitted exactly when it has two vertices in V_0, or one in
//! V_0 and one each in two distinct odd blocks, or all three in one odd
//! block, or a 2-1 split across two odd blocks. The excluded patterns force a
//! parity obstruction: no perfect triangle decomposition can live inside the
//! admitted triples, certified by an odd counting invariant.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypercore::{DegreeReport, TripleSystem};

/// Errors from spec validation.
#[derive(Debug, Error)]
pub enum ExtremalError {
    #[error("invalid block spec: {reason}")]
    SpecViolation { reason: String },
}

fn violation(reason: impl Into<String>) -> ExtremalError {
    ExtremalError::SpecViolation {
        reason: reason.into(),
    }
}

/// A validated block-size vector (|V_0|, |V_1|, |V_2|, |V_3|) summing to `n`.
///
/// Blocks take consecutive vertex ranges in index order: V_0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    n: u32,
    sizes: [u32; 4],
}

impl ExtremalSpec {
    pub fn new(n: u32, sizes: [u32; 4]) -> Result<Self, ExtremalError> {
        if n % 6 != 1 && n % 6 != 3 {
            return Err(violation(format!("n = {n} is not 1 or 3 (mod 6)")));
        }
        if sizes.iter().map(|&s| s as u64).sum::<u64>() != n as u64 {
            return Err(violation(format!("sizes {sizes:?} do not sum to {n}")));
        }
        if sizes[0] % 2 != 0 {
            return Err(violation(format!("|V_0| = {} must be even", sizes[0])));
        }
        for i in 1..4 {
            if sizes[i] % 2 != 1 {
                return Err(violation(format!("|V_{i}| = {} must be odd", sizes[i])));
            }
        }
        for (i, &s) in sizes.iter().enumerate() {
            // s >= n/4 - 8, kept in integers as 4s >= n - 32.
            if 4 * s as i64 - n as i64 + 32 < 0 {
                return Err(violation(format!("|V_{i}| = {s} is below n/4 - 8")));
            }
        }
        Ok(ExtremalSpec { n, sizes })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sizes(&self) -> [u32; 4] {
        self.sizes
    }

    /// Which block a vertex belongs to, 0 through 3.
    pub fn block_of(&self, v: u32) -> u8 {
        assert!(v < self.n, "vertex {v} out of range");
        let mut acc = 0;
        for (i, &s) in self.sizes.iter().enumerate() {
            acc += s;
            if v < acc {
                return i as u8;
            }
        }
        unreachable!("sizes sum to n")
    }

    /// The consecutive vertex range of block `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<u32> {
        let start: u32 = self.sizes[..i].iter().sum();
        start..start + self.sizes[i]
    }
}

/// The lexicographically least valid size vector minimizing the total
/// imbalance sum over blocks of |4 size - n|.
pub fn default_spec(n: u32) -> Result<ExtremalSpec, ExtremalError> {
    if n % 6 != 1 && n % 6 != 3 {
        return Err(violation(format!("n = {n} is not 1 or 3 (mod 6)")));
    }
    let imbalance = |sizes: [u32; 4]| -> u64 {
        sizes
            .iter()
            .map(|&s| (4 * s as i64 - n as i64).unsigned_abs())
            .sum()
    };
    let mut best: Option<(u64, [u32; 4])> = None;
    let mut s0 = 0;
    while s0 <= n {
        for s1 in (1..=n.saturating_sub(s0)).step_by(2) {
            for s2 in (1..=n.saturating_sub(s0 + s1)).step_by(2) {
                let rest = n as i64 - s0 as i64 - s1 as i64 - s2 as i64;
                if rest < 1 {
                    break;
                }
                let sizes = [s0, s1, s2, rest as u32];
                if ExtremalSpec::new(n, sizes).is_err() {
                    continue;
                }
                let key = (imbalance(sizes), sizes);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        s0 += 2;
    }
    let (_, sizes) = best.ok_or_else(|| violation(format!("no valid size vector for n = {n}")))?;
    ExtremalSpec::new(n, sizes)
}

/// The admitted class of a triple under `spec`, or None when excluded.
///
/// Classes: 0 = two vertices in V_0; 1 = one each in V_0 and two distinct odd
/// blocks; 2 = inside one odd block; 3 = a 2-1 split across two odd blocks.
pub fn classify(spec: &ExtremalSpec, t: [u32; 3]) -> Option<u8> {
    let blocks = [
        spec.block_of(t[0]),
        spec.block_of(t[1]),
        spec.block_of(t[2]),
    ];
    let zeros = blocks.iter().filter(|&&b| b == 0).count();
    let mut odd: Vec<u8> = blocks.iter().copied().filter(|&b| b != 0).collect();
    odd.sort_unstable();
    odd.dedup();
    match (zeros, odd.len()) {
        (2, 1) => Some(0),
        (1, 2) => Some(1),
        (0, 1) => Some(2),
        (0, 2) => Some(3),
        // Excluded: all three in V_0, one in V_0 with a pair from a single
        // odd block, and three distinct odd blocks with no V_0 vertex.
        _ => None,
    }
}

/// Builds the admitted triple system block by block.
pub fn build_extremal(spec: &ExtremalSpec) -> TripleSystem {
    let mut h = TripleSystem::new(spec.n());
    let v0 = spec.block_range(0);
    let odd = [spec.block_range(1), spec.block_range(2), spec.block_range(3)];

    // Two vertices in V_0, one in an odd block.
    for a in v0.clone() {
        for b in (a + 1)..v0.end {
            for r in &odd {
                for w in r.clone() {
                    h.insert([a, b, w]);
                }
            }
        }
    }
    // One vertex in V_0, one each in two distinct odd blocks.
    for a in v0.clone() {
        for i in 0..3 {
            for j in (i + 1)..3 {
                for u in odd[i].clone() {
                    for w in odd[j].clone() {
                        h.insert([a, u, w]);
                    }
                }
            }
        }
    }
    // Three vertices in one odd block.
    for r in &odd {
        for a in r.clone() {
            for b in (a + 1)..r.end {
                for c in (b + 1)..r.end {
                    h.insert([a, b, c]);
                }
            }
        }
    }
    // A pair in one odd block, a third vertex in a different odd block.
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for a in odd[i].clone() {
                for b in (a + 1)..odd[i].end {
                    for w in odd[j].clone() {
                        h.insert([a, b, w]);
                    }
                }
            }
        }
    }
    h
}

/// Number of admitted triples per class, in class order.
pub fn class_counts(spec: &ExtremalSpec) -> [u64; 4] {
    let s = spec.sizes();
    let c2 = |x: u32| (x as u64) * (x as u64).saturating_sub(1) / 2;
    let c3 = |x: u64| {
        if x < 3 {
            0
        } else {
            x * (x - 1) * (x - 2) / 6
        }
    };
    let odd_sum = (s[1] + s[2] + s[3]) as u64;
    let e0 = c2(s[0]) * odd_sum;
    let e1 = s[0] as u64
        * ((s[1] as u64 * s[2] as u64) + (s[2] as u64 * s[3] as u64) + (s[3] as u64 * s[1] as u64));
    let e2 = c3(s[1] as u64) + c3(s[2] as u64) + c3(s[3] as u64);
    let mut e3 = 0;
    for i in 1..4 {
        for j in 1..4 {
            if i != j {
                e3 += c2(s[i]) * s[j] as u64;
            }
        }
    }
    [e0, e1, e2, e3]
}

/// The parity certificate
/// P = (|V_1||V_2| + |V_2||V_3| + |V_3||V_1|) - (|V_0|/2)(n - 2|V_0| + 1).
///
/// P is odd for every valid spec: the first term is a sum of three odd
/// products and the second is even because n + 1 is even. An odd P certifies
/// that no perfect triangle decomposition exists within the admitted triples.
pub fn parity_certificate(spec: &ExtremalSpec) -> i64 {
    let s = spec.sizes().map(|x| x as i64);
    let n = spec.n() as i64;
    (s[1] * s[2] + s[2] * s[3] + s[3] * s[1]) - (s[0] / 2) * (n - 2 * s[0] + 1)
}

/// Exact degree report of the construction, asserted against the codegree
/// lower bound ceil(3n/4 - 10).
pub fn audit_extremal(spec: &ExtremalSpec) -> DegreeReport {
    let h = build_extremal(spec);
    let report = h.degree_report();
    let n = spec.n() as i64;
    let bound = (3 * n - 40).div_euclid(4) + i64::from((3 * n - 40).rem_euclid(4) != 0);
    assert!(
        report.min_codegree as i64 >= bound,
        "min codegree {} fell below the bound {bound} for n = {n}",
        report.min_codegree
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_counts_for_the_nine_point_construction() {
        let spec = ExtremalSpec::new(9, [0, 3, 3, 3]).unwrap();
        let h = build_extremal(&spec);
        assert_eq!(h.total_len(), 57);
        assert_eq!(class_counts(&spec), [0, 0, 3, 54]);
        assert_eq!(parity_certificate(&spec), 27);
    }

    #[test]
    fn spec_validation_accepts_and_rejects_the_pinned_cases() {
        assert!(ExtremalSpec::new(9, [2, 3, 3, 1]).is_ok());
        assert!(matches!(
            ExtremalSpec::new(9, [1, 3, 3, 2]),
            Err(ExtremalError::SpecViolation { .. })
        ));
        assert!(ExtremalSpec::new(9, [0, 3, 3, 4]).is_err());
        assert!(ExtremalSpec::new(8, [2, 1, 2, 3]).is_err());
        assert!(ExtremalSpec::new(33, [8, 9, 9, 7]).is_ok());
        // A block far below n/4 - 8 is rejected even with good parities.
        assert!(ExtremalSpec::new(63, [40, 1, 1, 21]).is_err());
    }

    #[test]
    fn frozen_parity_values() {
        let spec = ExtremalSpec::new(15, [4, 3, 3, 5]).unwrap();
        assert_eq!(parity_certificate(&spec), 23);
        let spec = ExtremalSpec::new(9, [2, 3, 3, 1]).unwrap();
        assert_eq!(parity_certificate(&spec), 9);
    }

    #[test]
    fn parity_certificate_is_odd_for_every_valid_spec_up_to_99() {
        let mut checked = 0u64;
        for n in (3..=99).filter(|n| n % 6 == 1 || n % 6 == 3) {
            for s0 in (0..=n).step_by(2) {
                for s1 in (1..=n.saturating_sub(s0)).step_by(2) {
                    for s2 in (1..=n.saturating_sub(s0 + s1)).step_by(2) {
                        let rest = n as i64 - (s0 + s1 + s2) as i64;
                        if rest < 1 {
                            break;
                        }
                        let Ok(spec) = ExtremalSpec::new(n, [s0, s1, s2, rest as u32]) else {
                            continue;
                        };
                        assert_eq!(
                            parity_certificate(&spec).rem_euclid(2),
                            1,
                            "even certificate at n = {n}, sizes {:?}",
                            spec.sizes()
                        );
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000, "spec sweep was unexpectedly small");
    }

    #[test]
    fn block_build_matches_direct_classification() {
        for (n, sizes) in [(9u32, [2, 1, 3, 3]), (15, [4, 3, 3, 5])] {
            let spec = ExtremalSpec::new(n, sizes).unwrap();
            let h = build_extremal(&spec);
            let mut direct = TripleSystem::new(n);
            let mut per_class = [0u64; 4];
            for a in 0..n {
                for b in (a + 1)..n {
                    for c in (b + 1)..n {
                        if let Some(k) = classify(&spec, [a, b, c]) {
                            direct.insert([a, b, c]);
                            per_class[k as usize] += 1;
                        }
                    }
                }
            }
            assert_eq!(h, direct);
            assert_eq!(per_class, class_counts(&spec));
            // No admitted triple lies inside V_0.
            let v0 = spec.block_range(0);
            for (t, _) in h.iter() {
                assert!(!t.iter().all(|&v| v0.contains(&v)));
            }
        }
    }

    #[test]
    fn audits_meet_the_codegree_bound() {
        let spec = ExtremalSpec::new(33, [8, 9, 9, 7]).unwrap();
        let report = audit_extremal(&spec);
        assert!(report.min_codegree >= 15);

        let spec = default_spec(63).unwrap();
        let report = audit_extremal(&spec);
        assert!(report.min_codegree >= 38);

        // Bound is negative at n = 9, passes trivially.
        let spec = ExtremalSpec::new(9, [0, 3, 3, 3]).unwrap();
        audit_extremal(&spec);
    }

    #[test]
    fn default_spec_is_balanced_and_deterministic() {
        let spec = default_spec(33).unwrap();
        assert_eq!(spec.sizes().iter().sum::<u32>(), 33);
        assert_eq!(spec, default_spec(33).unwrap());
        let spread = spec
            .sizes()
            .iter()
            .map(|&s| (4 * s as i64 - 33).abs())
            .max()
            .unwrap();
        assert!(spread <= 8, "default sizes {:?} too lopsided", spec.sizes());
        assert!(default_spec(8).is_err());
    }
}

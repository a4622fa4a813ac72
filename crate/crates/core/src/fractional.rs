//! Fractional triangle decompositions over exact rational arithmetic.
//!
//! A [`WeightFn`] assigns a nonnegative rational to each triple of a vertex
//! set. The module builds perfect fractional matchings four ways: the uniform
//! weighting, a flow-based correction of the uniform weighting, an exact
//! phase-1 simplex with Farkas certificates, and a boosting loop that drives
//! the maximum weight down toward a target while avoiding forbidden triples.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::hypercore::{rank3, unrank3};

/// A rational weighting of triples on `[n]`. Absent triples weigh zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFn {
    n: u32,
    w: BTreeMap<u64, BigRational>,
}

impl WeightFn {
    pub fn new(n: u32) -> Self {
        WeightFn {
            n,
            w: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of triples with nonzero weight.
    pub fn support_len(&self) -> u64 {
        self.w.len() as u64
    }

    /// Sets the weight of a triple, dropping it from the support when zero.
    pub fn set(&mut self, t: [u32; 3], value: BigRational) {
        let r = rank3(t);
        if value.is_zero() {
            self.w.remove(&r);
        } else {
            self.w.insert(r, value);
        }
    }

    pub fn get(&self, t: [u32; 3]) -> BigRational {
        self.get_rank(rank3(t))
    }

    pub fn get_rank(&self, r: u64) -> BigRational {
        self.w.get(&r).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_to(&mut self, t: [u32; 3], delta: &BigRational) {
        let r = rank3(t);
        let next = self.get_rank(r) + delta;
        if next.is_zero() {
            self.w.remove(&r);
        } else {
            self.w.insert(r, next);
        }
    }

    /// Support iteration in colex order of triples.
    pub fn iter(&self) -> impl Iterator<Item = ([u32; 3], BigRational)> + '_ {
        self.w.iter().map(|(&r, v)| (unrank3(r), v.clone()))
    }

    pub fn iter_ranked(&self) -> impl Iterator<Item = (u64, &BigRational)> + '_ {
        self.w.iter().map(|(&r, v)| (r, v))
    }

    pub fn max_weight(&self) -> BigRational {
        self.w
            .values()
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn min_weight(&self) -> BigRational {
        self.w
            .values()
            .min()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.w.values().all(|v| !v.is_negative())
    }

    /// Pointwise average of two weightings on the same vertex set.
    pub fn average(&self, other: &WeightFn) -> WeightFn {
        assert_eq!(self.n, other.n, "averaging weightings on different orders");
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut out = WeightFn::new(self.n);
        for (&r, v) in &self.w {
            out.w.insert(r, v * &half);
        }
        for (&r, v) in &other.w {
            let next = out.w.remove(&r).unwrap_or_else(BigRational::zero) + v * &half;
            if !next.is_zero() {
                out.w.insert(r, next);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn weight_fn_support_and_average() {
        let mut a = WeightFn::new(5);
        a.set([0, 1, 2], rat(1, 2));
        a.set([1, 2, 3], rat(1, 1));
        let mut b = WeightFn::new(5);
        b.set([0, 1, 2], rat(1, 2));
        b.set([2, 3, 4], rat(1, 3));
        let avg = a.average(&b);
        assert_eq!(avg.get([0, 1, 2]), rat(1, 2));
        assert_eq!(avg.get([1, 2, 3]), rat(1, 2));
        assert_eq!(avg.get([2, 3, 4]), rat(1, 6));
        assert_eq!(avg.get([0, 1, 4]), rat(0, 1));
        a.set([1, 2, 3], rat(0, 1));
        assert_eq!(a.support_len(), 1);
        a.add_to([0, 1, 2], &rat(-1, 2));
        assert_eq!(a.support_len(), 0);
    }
}

//! Core hypergraph and graph representations with degree machinery.
//!
//! Vertices are dense integers `0..n`. Unordered pairs and triples are
//! addressed by their colexicographic rank, which is independent of the
//! vertex count, so indices stay stable when a structure is embedded in a
//! larger universe. Triple storage is a bitmask keyed by rank at desk scale
//! and a sorted map beyond it; both iterate in the same canonical order.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest vertex count for which triple membership is kept as a bitmask.
pub const DENSE_TRIPLE_LIMIT: u32 = 512;

/// Hard cap on triple-system universes; keeps colex ranks well inside `u64`.
pub const VERTEX_LIMIT: u32 = 200_000;

/// Hard cap on pair-graph universes; bounds the adjacency bitmask footprint.
pub const PAIR_VERTEX_LIMIT: u32 = 8_192;

/// Errors from constructing or combining the core carriers.
#[derive(Debug, Error)]
pub enum HyperError {
    #[error("vertex {v} out of range for a universe of {n} vertices")]
    VertexOutOfRange { v: u32, n: u32 },
    #[error("universe of {n} vertices exceeds the supported limit {limit}")]
    UniverseTooLarge { n: u32, limit: u32 },
    #[error("triple {0:?} has a repeated vertex")]
    DegenerateTriple([u32; 3]),
    #[error("operation requires a simple hypergraph but multiplicities exceed 1")]
    NotSimple,
}

/// `x choose 2` without overflow for `x` up to the vertex limit.
#[inline]
pub fn c2(x: u64) -> u64 {
    x * x.wrapping_sub(1) / 2
}

/// `x choose 3` without overflow for `x` up to the vertex limit.
#[inline]
pub fn c3(x: u64) -> u64 {
    if x < 3 {
        0
    } else {
        x * (x - 1) / 2 * (x - 2) / 3
    }
}

/// Colex rank of the unordered pair `{u, v}`.
#[inline]
pub fn rank2(u: u32, v: u32) -> u64 {
    debug_assert_ne!(u, v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    c2(b as u64) + a as u64
}

/// Inverse of [`rank2`]; returns the pair in increasing order.
pub fn unrank2(r: u64) -> [u32; 2] {
    // Solve c2(b) <= r by inverting the quadratic, then correct for rounding.
    let mut b = ((2.0 * r as f64).sqrt() as u64).max(1);
    while c2(b + 1) <= r {
        b += 1;
    }
    while c2(b) > r {
        b -= 1;
    }
    let a = r - c2(b);
    [a as u32, b as u32]
}

/// Colex rank of a triple with three distinct vertices, in any order.
#[inline]
pub fn rank3(t: [u32; 3]) -> u64 {
    let [a, b, c] = sort3(t);
    c3(c as u64) + c2(b as u64) + a as u64
}

/// Inverse of [`rank3`]; returns the triple in increasing order.
pub fn unrank3(r: u64) -> [u32; 3] {
    let mut c = ((6.0 * r as f64).cbrt() as u64).max(2);
    while c3(c + 1) <= r {
        c += 1;
    }
    while c3(c) > r {
        c -= 1;
    }
    let rest = r - c3(c);
    let [a, b] = unrank2(rest);
    [a, b, c as u32]
}

/// Sorts a triple of vertices in place and returns it.
#[inline]
pub fn sort3(mut t: [u32; 3]) -> [u32; 3] {
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    if t[1] > t[2] {
        t.swap(1, 2);
    }
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    t
}

/// Fixed-capacity bitmask over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    /// All-zeros mask over `0..len`.
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Mask with every bit in `0..len` set.
    pub fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.set(i);
        }
        b
    }

    /// Number of addressable positions.
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when no bit is set.
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions set in both masks.
    pub fn intersection_count(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// True when every set position of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Iterates set positions in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// A simple graph on vertices `0..n` with canonical pair storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGraph {
    n: u32,
    adj: Vec<Bits>,
    m: u64,
}

impl PairGraph {
    /// Empty graph on `n` vertices.
    ///
    /// # Panics
    /// Panics when `n` exceeds [`PAIR_VERTEX_LIMIT`].
    pub fn new(n: u32) -> Self {
        assert!(
            n <= PAIR_VERTEX_LIMIT,
            "pair graph on {n} vertices exceeds the supported limit {PAIR_VERTEX_LIMIT}"
        );
        PairGraph {
            n,
            adj: vec![Bits::new(n as usize); n as usize],
            m: 0,
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: u32) -> Self {
        let mut g = PairGraph::new(n);
        for v in 1..n {
            for u in 0..v {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Inserts the edge `{u, v}`; returns false when it was already present.
    ///
    /// # Panics
    /// Panics on self-loops or out-of-range vertices.
    pub fn insert(&mut self, u: u32, v: u32) -> bool {
        assert!(u != v, "self-loop at vertex {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        if self.adj[u as usize].get(v as usize) {
            return false;
        }
        self.adj[u as usize].set(v as usize);
        self.adj[v as usize].set(u as usize);
        self.m += 1;
        true
    }

    /// Removes the edge `{u, v}`; returns false when it was absent.
    pub fn remove(&mut self, u: u32, v: u32) -> bool {
        if u == v || u >= self.n || v >= self.n || !self.adj[u as usize].get(v as usize) {
            return false;
        }
        self.adj[u as usize].clear(v as usize);
        self.adj[v as usize].clear(u as usize);
        self.m -= 1;
        true
    }

    #[inline]
    pub fn contains(&self, u: u32, v: u32) -> bool {
        u != v && u < self.n && v < self.n && self.adj[u as usize].get(v as usize)
    }

    pub fn degree(&self, v: u32) -> u64 {
        self.adj[v as usize].count() as u64
    }

    /// Neighborhood mask of `v`.
    pub fn neighbors(&self, v: u32) -> &Bits {
        &self.adj[v as usize]
    }

    /// Iterates edges as `[u, v]` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = [u32; 2]> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u as usize]
                .iter_ones()
                .filter(move |&v| v > u as usize)
                .map(move |v| [u, v as u32])
        })
    }

    /// Vertices with at least one incident edge, ascending.
    pub fn touched_vertices(&self) -> Vec<u32> {
        (0..self.n)
            .filter(|&v| !self.adj[v as usize].is_empty())
            .collect()
    }

    /// True when every degree is even and the edge count is divisible by 3,
    /// which is necessary for a triangle decomposition.
    pub fn k3_divisible(&self) -> bool {
        self.m % 3 == 0 && (0..self.n).all(|v| self.degree(v) % 2 == 0)
    }

    /// Subgraph induced on the vertices in `keep`, preserving vertex labels.
    pub fn induced(&self, keep: &Bits) -> PairGraph {
        let mut g = PairGraph::new(self.n);
        for [u, v] in self.edges() {
            if keep.get(u as usize) && keep.get(v as usize) {
                g.insert(u, v);
            }
        }
        g
    }

    /// Edge-set union; both graphs must share the vertex count.
    pub fn union(&self, other: &PairGraph) -> PairGraph {
        assert_eq!(self.n, other.n, "vertex count mismatch in union");
        let mut g = self.clone();
        for [u, v] in other.edges() {
            g.insert(u, v);
        }
        g
    }

    /// Edges of `self` that are not in `other`.
    pub fn minus(&self, other: &PairGraph) -> PairGraph {
        let mut g = PairGraph::new(self.n);
        for [u, v] in self.edges() {
            if !other.contains(u, v) {
                g.insert(u, v);
            }
        }
        g
    }

    /// True when every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &PairGraph) -> bool {
        self.edges().all(|[u, v]| other.contains(u, v))
    }
}

/// Triple multiplicities beyond the dense bitmask regime.
#[derive(Clone, Debug, PartialEq, Eq)]
enum TripleStore {
    /// Bitmask of present triples plus a side map of multiplicities above 1.
    Dense { bits: Bits, extra: BTreeMap<u64, u32> },
    /// Sorted map from colex rank to full multiplicity.
    Sparse(BTreeMap<u64, u32>),
}

/// A 3-uniform multi-hypergraph on vertices `0..n`.
///
/// Triples are unordered and canonically sorted; each carries an integer
/// multiplicity of at least 1. Simple hypergraphs are the multiplicity-1
/// special case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    n: u32,
    store: TripleStore,
    distinct: u64,
    total: u64,
}

impl TripleSystem {
    /// Empty system on `n` vertices.
    ///
    /// # Panics
    /// Panics when `n` exceeds [`VERTEX_LIMIT`].
    pub fn new(n: u32) -> Self {
        assert!(
            n <= VERTEX_LIMIT,
            "triple system on {n} vertices exceeds the supported limit {VERTEX_LIMIT}"
        );
        let store = if n <= DENSE_TRIPLE_LIMIT {
            TripleStore::Dense {
                bits: Bits::new(c3(n as u64) as usize),
                extra: BTreeMap::new(),
            }
        } else {
            TripleStore::Sparse(BTreeMap::new())
        };
        TripleSystem {
            n,
            store,
            distinct: 0,
            total: 0,
        }
    }

    /// Complete 3-graph on `n` vertices.
    pub fn complete(n: u32) -> Self {
        let mut h = TripleSystem::new(n);
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    h.insert([a, b, c]);
                }
            }
        }
        h
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct triples.
    pub fn distinct_len(&self) -> u64 {
        self.distinct
    }

    /// Number of triples counted with multiplicity.
    pub fn total_len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.distinct == 0
    }

    pub fn is_simple(&self) -> bool {
        self.distinct == self.total
    }

    fn check_triple(&self, t: [u32; 3]) -> [u32; 3] {
        let s = sort3(t);
        assert!(
            s[0] != s[1] && s[1] != s[2],
            "triple {t:?} has a repeated vertex"
        );
        assert!(s[2] < self.n, "triple {t:?} out of range for n={}", self.n);
        s
    }

    /// Adds one copy of the triple.
    ///
    /// # Panics
    /// Panics on repeated or out-of-range vertices.
    pub fn insert(&mut self, t: [u32; 3]) {
        let s = self.check_triple(t);
        let r = rank3(s);
        match &mut self.store {
            TripleStore::Dense { bits, extra } => {
                if bits.get(r as usize) {
                    *extra.entry(r).or_insert(1) += 1;
                } else {
                    bits.set(r as usize);
                    self.distinct += 1;
                }
            }
            TripleStore::Sparse(map) => {
                let e = map.entry(r).or_insert(0);
                if *e == 0 {
                    self.distinct += 1;
                }
                *e += 1;
            }
        }
        self.total += 1;
    }

    /// Adds the triple only when absent; returns whether it was added.
    pub fn insert_once(&mut self, t: [u32; 3]) -> bool {
        if self.contains(t) {
            false
        } else {
            self.insert(t);
            true
        }
    }

    /// Adds `mult` copies of the triple.
    pub fn insert_with_multiplicity(&mut self, t: [u32; 3], mult: u32) {
        for _ in 0..mult {
            self.insert(t);
        }
    }

    /// Removes one copy; returns false when the triple was absent.
    pub fn remove_one(&mut self, t: [u32; 3]) -> bool {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] || s[2] >= self.n {
            return false;
        }
        let r = rank3(s);
        match &mut self.store {
            TripleStore::Dense { bits, extra } => {
                if !bits.get(r as usize) {
                    return false;
                }
                if let Some(m) = extra.get_mut(&r) {
                    *m -= 1;
                    if *m == 1 {
                        extra.remove(&r);
                    }
                } else {
                    bits.clear(r as usize);
                    self.distinct -= 1;
                }
            }
            TripleStore::Sparse(map) => match map.get_mut(&r) {
                None => return false,
                Some(m) => {
                    *m -= 1;
                    if *m == 0 {
                        map.remove(&r);
                        self.distinct -= 1;
                    }
                }
            },
        }
        self.total -= 1;
        true
    }

    #[inline]
    pub fn contains(&self, t: [u32; 3]) -> bool {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] || s[2] >= self.n {
            return false;
        }
        self.contains_rank(rank3(s))
    }

    #[inline]
    pub fn contains_rank(&self, r: u64) -> bool {
        match &self.store {
            TripleStore::Dense { bits, .. } => bits.get(r as usize),
            TripleStore::Sparse(map) => map.contains_key(&r),
        }
    }

    /// Multiplicity of the triple, 0 when absent.
    pub fn multiplicity(&self, t: [u32; 3]) -> u32 {
        let s = sort3(t);
        if s[0] == s[1] || s[1] == s[2] || s[2] >= self.n {
            return 0;
        }
        let r = rank3(s);
        match &self.store {
            TripleStore::Dense { bits, extra } => {
                if !bits.get(r as usize) {
                    0
                } else {
                    extra.get(&r).copied().unwrap_or(1)
                }
            }
            TripleStore::Sparse(map) => map.get(&r).copied().unwrap_or(0),
        }
    }

    /// Iterates distinct triples in colex order with their multiplicities.
    pub fn iter(&self) -> Box<dyn Iterator<Item = ([u32; 3], u32)> + '_> {
        match &self.store {
            TripleStore::Dense { bits, extra } => Box::new(bits.iter_ones().map(move |r| {
                let r = r as u64;
                (unrank3(r), extra.get(&r).copied().unwrap_or(1))
            })),
            TripleStore::Sparse(map) => Box::new(map.iter().map(|(&r, &m)| (unrank3(r), m))),
        }
    }

    /// Distinct triples in colex order, ignoring multiplicity.
    pub fn triples(&self) -> Vec<[u32; 3]> {
        self.iter().map(|(t, _)| t).collect()
    }

    /// Copy with all multiplicities clamped to 1.
    pub fn simplify(&self) -> TripleSystem {
        let mut h = TripleSystem::new(self.n);
        for (t, _) in self.iter() {
            h.insert(t);
        }
        h
    }

    /// Union of two systems on the same universe, adding multiplicities.
    pub fn union(&self, other: &TripleSystem) -> TripleSystem {
        assert_eq!(self.n, other.n, "vertex count mismatch in union");
        let mut h = self.clone();
        for (t, m) in other.iter() {
            h.insert_with_multiplicity(t, m);
        }
        h
    }

    /// The 2-shadow: every pair contained in some triple, multiplicity ignored.
    pub fn shadow(&self) -> PairGraph {
        let mut g = PairGraph::new(self.n);
        for (t, _) in self.iter() {
            g.insert(t[0], t[1]);
            g.insert(t[0], t[2]);
            g.insert(t[1], t[2]);
        }
        g
    }

    /// Codegree of the pair `{u, v}`, counted with multiplicity.
    pub fn codegree(&self, u: u32, v: u32) -> u64 {
        let mut d = 0u64;
        for w in 0..self.n {
            if w != u && w != v {
                d += self.multiplicity([u, v, w]) as u64;
            }
        }
        d
    }

    /// Codegree of `{u, v}` restricted to completions inside `allowed`.
    pub fn restricted_codegree(&self, pair: [u32; 2], allowed: &Bits) -> u64 {
        let mut d = 0u64;
        for w in allowed.iter_ones() {
            let w = w as u32;
            if w != pair[0] && w != pair[1] {
                d += self.multiplicity([pair[0], pair[1], w]) as u64;
            }
        }
        d
    }

    /// Vertex degree, counted with multiplicity.
    pub fn vertex_degree(&self, v: u32) -> u64 {
        self.iter()
            .filter(|(t, _)| t.contains(&v))
            .map(|(_, m)| m as u64)
            .sum()
    }

    /// Maximum vertex degree, counted with multiplicity.
    pub fn max_vertex_degree(&self) -> u64 {
        let mut deg = vec![0u64; self.n as usize];
        for (t, m) in self.iter() {
            for v in t {
                deg[v as usize] += m as u64;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// True when no triple induces a full triangle of `g`.
    pub fn k3_disjoint(&self, g: &PairGraph) -> bool {
        self.iter().all(|(t, _)| {
            !(g.contains(t[0], t[1]) && g.contains(t[0], t[2]) && g.contains(t[1], t[2]))
        })
    }

    /// Codegree profile over all pairs, indexed by pair rank.
    ///
    /// The sequential and parallel variants compute identical output; the
    /// dispatching wrapper picks the parallel one when the feature is on.
    pub fn codegree_profile(&self) -> Vec<u64> {
        #[cfg(feature = "parallel")]
        {
            return self.codegree_profile_par();
        }
        #[allow(unreachable_code)]
        self.codegree_profile_seq()
    }

    /// Single-threaded codegree profile.
    pub fn codegree_profile_seq(&self) -> Vec<u64> {
        let mut prof = vec![0u64; c2(self.n as u64) as usize];
        for v in 1..self.n {
            self.codegree_row(v, &mut prof);
        }
        prof
    }

    /// Multi-threaded codegree profile; identical output to the sequential one.
    #[cfg(feature = "parallel")]
    pub fn codegree_profile_par(&self) -> Vec<u64> {
        let rows: Vec<Vec<u64>> = (1..self.n)
            .into_par_iter()
            .map(|v| {
                let mut row = vec![0u64; v as usize];
                for u in 0..v {
                    row[u as usize] = self.codegree(u, v);
                }
                row
            })
            .collect();
        let mut prof = vec![0u64; c2(self.n as u64) as usize];
        for (i, row) in rows.into_iter().enumerate() {
            let v = i as u64 + 1;
            prof[c2(v) as usize..(c2(v) + v) as usize].copy_from_slice(&row);
        }
        prof
    }

    fn codegree_row(&self, v: u32, prof: &mut [u64]) {
        for u in 0..v {
            prof[rank2(u, v) as usize] = self.codegree(u, v);
        }
    }

    /// Degree statistics; minimums over all pairs, the essential minimum over
    /// shadow pairs only, and the shadow's minimum vertex degree.
    pub fn degree_report(&self) -> DegreeReport {
        let prof = self.codegree_profile();
        self.degree_report_from_profile(&prof)
    }

    /// Degree statistics computed strictly single-threaded.
    pub fn degree_report_seq(&self) -> DegreeReport {
        let prof = self.codegree_profile_seq();
        self.degree_report_from_profile(&prof)
    }

    fn degree_report_from_profile(&self, prof: &[u64]) -> DegreeReport {
        let mut min_all = u64::MAX;
        let mut min_ess = u64::MAX;
        let mut max_all = 0u64;
        let mut shadow_deg = vec![0u64; self.n as usize];
        for (r, &d) in prof.iter().enumerate() {
            min_all = min_all.min(d);
            max_all = max_all.max(d);
            if d > 0 {
                min_ess = min_ess.min(d);
                let [u, v] = unrank2(r as u64);
                shadow_deg[u as usize] += 1;
                shadow_deg[v as usize] += 1;
            }
        }
        let min_shadow = shadow_deg.into_iter().min().unwrap_or(0);
        DegreeReport {
            min_codegree: if min_all == u64::MAX { 0 } else { min_all },
            essential_min_codegree: if min_ess == u64::MAX { 0 } else { min_ess },
            min_shadow_degree: min_shadow,
            max_codegree: max_all,
        }
    }
}

/// Degree statistics of a triple system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    /// Minimum codegree over all pairs of the universe.
    pub min_codegree: u64,
    /// Minimum codegree over shadow pairs only; at least `min_codegree`.
    pub essential_min_codegree: u64,
    /// Minimum vertex degree of the 2-shadow.
    pub min_shadow_degree: u64,
    /// Maximum codegree over all pairs.
    pub max_codegree: u64,
}

/// An indexed, colored collection of triple systems on a shared universe.
#[derive(Clone, Debug)]
pub struct Family {
    n: u32,
    members: Vec<TripleSystem>,
}

impl Family {
    pub fn new(n: u32) -> Self {
        Family {
            n,
            members: Vec::new(),
        }
    }

    /// Builds a family from members that must all share the vertex count.
    pub fn from_members(members: Vec<TripleSystem>) -> Self {
        let n = members.first().map(|h| h.n()).unwrap_or(0);
        assert!(
            members.iter().all(|h| h.n() == n),
            "family members must share a vertex count"
        );
        Family { n, members }
    }

    pub fn push(&mut self, h: TripleSystem) {
        assert_eq!(h.n(), self.n, "family members must share a vertex count");
        self.members.push(h);
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of colors.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, color: usize) -> &TripleSystem {
        &self.members[color]
    }

    pub fn members(&self) -> &[TripleSystem] {
        &self.members
    }
}

/// The auxiliary linear 3-graph of a simple triple system.
///
/// Its vertices are the shadow edges in canonical pair-rank order, and each
/// triple of the source contributes the triple of its three shadow edges.
/// Perfect fractional matchings of the auxiliary graph correspond exactly to
/// perfect fractional decompositions of the source.
#[derive(Clone, Debug)]
pub struct AuxSystem {
    aux: TripleSystem,
    shadow_edges: Vec<u64>,
}

impl AuxSystem {
    /// The auxiliary hypergraph itself, on `shadow_edge_count` vertices.
    pub fn aux(&self) -> &TripleSystem {
        &self.aux
    }

    /// Shadow edges by pair rank, ascending; index equals aux vertex id.
    pub fn shadow_edges(&self) -> &[u64] {
        &self.shadow_edges
    }

    /// Aux vertex id of a shadow pair, if the pair is in the shadow.
    pub fn aux_vertex_of_pair(&self, pair: [u32; 2]) -> Option<u32> {
        let r = rank2(pair[0], pair[1]);
        self.shadow_edges.binary_search(&r).ok().map(|i| i as u32)
    }

    /// Shadow pair of an aux vertex id.
    pub fn pair_of_aux_vertex(&self, v: u32) -> [u32; 2] {
        unrank2(self.shadow_edges[v as usize])
    }

    /// Aux triple corresponding to a source triple.
    pub fn aux_triple_of(&self, t: [u32; 3]) -> Option<[u32; 3]> {
        let s = sort3(t);
        let e0 = self.aux_vertex_of_pair([s[0], s[1]])?;
        let e1 = self.aux_vertex_of_pair([s[0], s[2]])?;
        let e2 = self.aux_vertex_of_pair([s[1], s[2]])?;
        Some(sort3([e0, e1, e2]))
    }

    /// Source triple corresponding to an aux triple.
    pub fn source_triple_of(&self, t: [u32; 3]) -> [u32; 3] {
        let mut verts = Vec::with_capacity(3);
        for e in t {
            for v in self.pair_of_aux_vertex(e) {
                if !verts.contains(&v) {
                    verts.push(v);
                }
            }
        }
        assert_eq!(verts.len(), 3, "aux triple {t:?} does not span three vertices");
        sort3([verts[0], verts[1], verts[2]])
    }
}

/// Builds the auxiliary linear 3-graph of a simple system.
///
/// # Panics
/// Panics when the source carries multiplicities above 1.
pub fn build_aux(h: &TripleSystem) -> AuxSystem {
    assert!(h.is_simple(), "auxiliary construction requires a simple hypergraph");
    let shadow = h.shadow();
    let shadow_edges: Vec<u64> = shadow.edges().map(|[u, v]| rank2(u, v)).collect();
    let mut sorted = shadow_edges.clone();
    sorted.sort_unstable();
    let mut aux = TripleSystem::new(sorted.len() as u32);
    let lookup = |pair: [u32; 2]| -> u32 {
        let r = rank2(pair[0], pair[1]);
        sorted.binary_search(&r).expect("shadow pair must be indexed") as u32
    };
    for (t, _) in h.iter() {
        let e0 = lookup([t[0], t[1]]);
        let e1 = lookup([t[0], t[2]]);
        let e2 = lookup([t[1], t[2]]);
        aux.insert(sort3([e0, e1, e2]));
    }
    AuxSystem {
        aux,
        shadow_edges: sorted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_round_trip() {
        for r in 0..c3(40) {
            assert_eq!(rank3(unrank3(r)), r);
        }
        for r in 0..c2(60) {
            let [a, b] = unrank2(r);
            assert!(a < b);
            assert_eq!(rank2(a, b), r);
        }
    }

    #[test]
    fn shadow_of_single_triple_is_its_triangle() {
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2]);
        let g = h.shadow();
        assert_eq!(g.m(), 3);
        assert!(g.contains(0, 1) && g.contains(0, 2) && g.contains(1, 2));
        assert!(!g.contains(0, 3));
    }

    #[test]
    fn shadow_of_complete_four_is_k4() {
        let h = TripleSystem::complete(4);
        assert_eq!(h.shadow().m(), 6);
    }

    #[test]
    fn shadow_of_two_triples_overlapping() {
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2]);
        h.insert([0, 1, 3]);
        let g = h.shadow();
        let expect = [[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]];
        assert_eq!(g.m(), 5);
        for [u, v] in expect {
            assert!(g.contains(u, v));
        }
    }

    #[test]
    fn degree_report_on_complete_graphs() {
        for n in 3..=12u32 {
            let h = TripleSystem::complete(n);
            let rep = h.degree_report();
            assert_eq!(rep.min_codegree, (n - 2) as u64);
            assert_eq!(rep.max_codegree, (n - 2) as u64);
            assert_eq!(rep.essential_min_codegree, (n - 2) as u64);
            assert_eq!(rep.min_shadow_degree, (n - 1) as u64);
        }
    }

    #[test]
    fn degree_report_single_triple() {
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2]);
        let rep = h.degree_report();
        assert_eq!(rep.min_codegree, 0);
        assert_eq!(rep.essential_min_codegree, 1);
    }

    #[test]
    fn essential_at_least_min() {
        let mut h = TripleSystem::new(6);
        h.insert([0, 1, 2]);
        h.insert([1, 2, 3]);
        h.insert([3, 4, 5]);
        let rep = h.degree_report();
        assert!(rep.essential_min_codegree >= rep.min_codegree);
    }

    #[test]
    fn multiplicity_round_trip() {
        let mut h = TripleSystem::new(5);
        h.insert([0, 1, 2]);
        h.insert([2, 1, 0]);
        h.insert([0, 1, 3]);
        assert_eq!(h.multiplicity([0, 1, 2]), 2);
        assert_eq!(h.distinct_len(), 2);
        assert_eq!(h.total_len(), 3);
        assert_eq!(h.codegree(0, 1), 3);
        let s = h.simplify();
        assert!(s.is_simple());
        assert_eq!(s.total_len(), 2);
        assert_eq!(s.simplify(), s);
        assert!(h.remove_one([0, 1, 2]));
        assert_eq!(h.multiplicity([0, 1, 2]), 1);
        assert!(h.remove_one([0, 1, 2]));
        assert!(!h.contains([0, 1, 2]));
    }

    #[test]
    fn sparse_store_behaves_like_dense() {
        let mut h = TripleSystem::new(2_000);
        h.insert([0, 1, 2]);
        h.insert([1500, 1999, 3]);
        h.insert([1500, 1999, 3]);
        assert_eq!(h.multiplicity([1999, 3, 1500]), 2);
        assert_eq!(h.distinct_len(), 2);
        assert_eq!(h.codegree(1500, 1999), 2);
        let got: Vec<_> = h.iter().collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].0, [0, 1, 2]);
    }

    #[test]
    fn restricted_codegree_full_set_matches_codegree() {
        let h = TripleSystem::complete(10);
        let all = Bits::full(10);
        assert_eq!(h.restricted_codegree([0, 1], &all), 8);
        assert_eq!(h.restricted_codegree([0, 1], &all), h.codegree(0, 1));
        let mut small = Bits::new(10);
        small.set(3);
        let mut single = TripleSystem::new(10);
        single.insert([0, 1, 2]);
        assert_eq!(single.restricted_codegree([0, 1], &small), 0);
    }

    #[test]
    fn k3_divisibility_matches_admissible_orders() {
        for n in 3..=50u32 {
            let g = PairGraph::complete(n);
            let admissible = n % 6 == 1 || n % 6 == 3;
            assert_eq!(g.k3_divisible(), admissible, "n={n}");
        }
    }

    #[test]
    fn k3_disjointness() {
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2]);
        let mut tri = PairGraph::new(4);
        tri.insert(0, 1);
        tri.insert(0, 2);
        tri.insert(1, 2);
        assert!(!h.k3_disjoint(&tri));
        let mut path = PairGraph::new(4);
        path.insert(0, 1);
        path.insert(0, 2);
        assert!(h.k3_disjoint(&path));
        let empty = TripleSystem::new(4);
        assert!(empty.k3_disjoint(&tri));
    }

    #[test]
    fn aux_of_k4_is_linear() {
        let h = TripleSystem::complete(4);
        let aux = build_aux(&h);
        assert_eq!(aux.aux().n(), 6);
        assert_eq!(aux.aux().total_len(), 4);
        // Linearity: no two aux triples share more than one vertex.
        let ts = aux.aux().triples();
        for i in 0..ts.len() {
            for j in 0..i {
                let shared = ts[i].iter().filter(|v| ts[j].contains(v)).count();
                assert!(shared <= 1);
            }
        }
    }

    #[test]
    fn aux_degree_matches_codegree() {
        let h = TripleSystem::complete(6);
        let aux = build_aux(&h);
        assert_eq!(aux.aux().total_len(), h.total_len());
        for e in 0..aux.aux().n() {
            let [u, v] = aux.pair_of_aux_vertex(e);
            assert_eq!(aux.aux().vertex_degree(e), h.codegree(u, v));
        }
    }

    #[test]
    fn aux_triple_correspondence_round_trips() {
        let h = TripleSystem::complete(6);
        let aux = build_aux(&h);
        for (t, _) in h.iter() {
            let a = aux.aux_triple_of(t).unwrap();
            assert!(aux.aux().contains(a));
            assert_eq!(aux.source_triple_of(a), t);
        }
    }

    #[test]
    #[cfg(feature = "parallel")]
    fn parallel_profile_matches_sequential() {
        let mut h = TripleSystem::complete(20);
        h.remove_one([0, 1, 2]);
        h.remove_one([3, 7, 11]);
        assert_eq!(h.codegree_profile_par(), h.codegree_profile_seq());
    }
}

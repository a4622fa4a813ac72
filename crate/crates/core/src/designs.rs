//! Construction and search for triangle decompositions.
//!
//! The exact-cover engine treats each pair of the host graph as a column and
//! each admissible triangle as a row covering three columns. Column selection
//! is minimum-remaining-candidates with smallest-index tie breaking and rows
//! are visited in canonical order, so both witnesses and Unsat verdicts are
//! reproducible. The rainbow variant layers an injective triple-to-color
//! assignment on top, pruned by periodic bipartite matching checks.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::hypercore::{rank2, rank3, Family, PairGraph, TripleSystem};

/// Errors from construction and search entry points.
#[derive(Debug, Error)]
pub enum DesignError {
    #[error("no Steiner triple system on {n} vertices: need n = 1 or 3 (mod 6)")]
    DivisibilityViolation { n: u32 },
    #[error("{supplied} colors supplied but at least {required} are needed")]
    InfeasibleColorCount { supplied: usize, required: u64 },
    #[error("search budget exhausted after {nodes} nodes")]
    TimedOut { nodes: u64 },
}

/// A set of pairwise pair-disjoint triples, optionally colored.
///
/// When `colors` is present it has the same length as `triples` and the
/// assignment is injective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub triples: Vec<[u32; 3]>,
    pub colors: Option<Vec<u32>>,
}

impl Decomposition {
    pub fn new(triples: Vec<[u32; 3]>) -> Self {
        Decomposition {
            triples,
            colors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Collects the triples into a triple system on `n` vertices.
    pub fn to_triple_system(&self, n: u32) -> TripleSystem {
        let mut h = TripleSystem::new(n);
        for &t in &self.triples {
            h.insert(t);
        }
        h
    }
}

/// How a search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    Found,
    Unsat,
    TimedOut,
}

fn duration_secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Result of an exact-cover or rainbow search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Present exactly when `status` is `Found`.
    pub witness: Option<Decomposition>,
    pub nodes_explored: u64,
    #[serde(serialize_with = "duration_secs")]
    pub elapsed: Duration,
    /// Candidate triples dropped because they do not induce triangles of the
    /// host graph.
    pub filtered_rows: u64,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// Node and wall-time limits for a search.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(300),
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

/// Options for the rainbow search.
#[derive(Debug, Clone, Copy)]
pub struct RainbowOptions {
    /// Run the bipartite Hall prune after this many search nodes.
    pub hall_check_every: u64,
}

impl Default for RainbowOptions {
    fn default() -> Self {
        RainbowOptions {
            hall_check_every: 64,
        }
    }
}

/// All triangles of `g`, each listed once.
pub fn all_triangles(g: &PairGraph) -> TripleSystem {
    let mut out = TripleSystem::new(g.n());
    for [u, v] in g.edges() {
        for w in g.neighbors(u).iter_ones() {
            if w > v && g.contains(v, w) {
                out.insert([u, v, w]);
            }
        }
    }
    out
}

/// Checks that a decomposition is a Steiner triple system on `[n]`: every
/// pair of distinct vertices is covered exactly once.
pub fn verify_sts(s: &Decomposition, n: u32) -> bool {
    if n < 3 {
        return false;
    }
    let npairs = crate::hypercore::c2(n as u64) as usize;
    let mut cover = vec![0u32; npairs];
    for &t in &s.triples {
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t.iter().any(|&v| v >= n) {
            return false;
        }
        cover[rank2(t[0], t[1]) as usize] += 1;
        cover[rank2(t[0], t[2]) as usize] += 1;
        cover[rank2(t[1], t[2]) as usize] += 1;
    }
    cover.iter().all(|&c| c == 1)
}

/// Checks that `s` pair-partitions exactly the edge set of `g`.
///
/// Independent of the search engine: recounts coverage from scratch.
pub fn verify_cover(g: &PairGraph, s: &Decomposition) -> bool {
    let mut seen: BTreeMap<u64, u32> = BTreeMap::new();
    for &t in &s.triples {
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for &(a, b) in &[(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            if !g.contains(a, b) {
                return false;
            }
            *seen.entry(rank2(a, b)).or_insert(0) += 1;
        }
    }
    seen.len() as u64 == g.m() && seen.values().all(|&c| c == 1)
}

/// Checks a rainbow witness: a proper cover of `g` whose colors are distinct,
/// drawn from `colors`, and admissible for their triples in `fam`.
pub fn verify_rainbow(g: &PairGraph, fam: &Family, colors: &[u32], s: &Decomposition) -> bool {
    if !verify_cover(g, s) {
        return false;
    }
    let Some(assigned) = &s.colors else {
        return false;
    };
    if assigned.len() != s.triples.len() {
        return false;
    }
    let mut used = std::collections::BTreeSet::new();
    for (&t, &c) in s.triples.iter().zip(assigned.iter()) {
        if !colors.contains(&c) || !used.insert(c) {
            return false;
        }
        match fam.member(c as usize) {
            Some(member) if member.contains(t) => {}
            _ => return false,
        }
    }
    true
}

/// Builds a Steiner triple system on `n` points.
///
/// Uses the quasigroup constructions: for n = 6t+3 a point set Z_m x {0,1,2}
/// with m = 2t+1 and the half-sum operation, for n = 6t+1 a half-idempotent
/// operation on Z_2t together with a fixed point adjoined.
pub fn construct_sts(n: u32) -> Result<Decomposition, DesignError> {
    if n < 3 || (n % 6 != 1 && n % 6 != 3) {
        return Err(DesignError::DivisibilityViolation { n });
    }
    let mut triples = Vec::new();
    if n % 6 == 3 {
        // Points (i, k) for i in Z_m, k in {0,1,2}, indexed k*m + i.
        let m = n / 3;
        let half = (m + 1) / 2;
        let pt = |i: u32, k: u32| k * m + i;
        for i in 0..m {
            triples.push([pt(i, 0), pt(i, 1), pt(i, 2)]);
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let s = ((i + j) as u64 * half as u64 % m as u64) as u32;
                for k in 0..3 {
                    triples.push(sorted3([pt(i, k), pt(j, k), pt(s, (k + 1) % 3)]));
                }
            }
        }
    } else {
        // Points (i, k) for i in Z_2t, k in {0,1,2}, indexed k*2t + i, plus a
        // fixed point 6t. The operation is x o y = h(x + y mod 2t) with
        // h(2k) = k and h(2k+1) = t + k, which is commutative and maps the
        // first half of the diagonal identically.
        let t = n / 6;
        let q = 2 * t;
        let pt = |i: u32, k: u32| k * q + i;
        let inf = 6 * t;
        let h = |x: u32| if x % 2 == 0 { x / 2 } else { t + x / 2 };
        for i in 0..t {
            triples.push([pt(i, 0), pt(i, 1), pt(i, 2)]);
        }
        for i in 0..t {
            for k in 0..3 {
                triples.push(sorted3([inf, pt(t + i, k), pt(i, (k + 1) % 3)]));
            }
        }
        for i in 0..q {
            for j in (i + 1)..q {
                let s = h((i + j) % q);
                for k in 0..3 {
                    triples.push(sorted3([pt(i, k), pt(j, k), pt(s, (k + 1) % 3)]));
                }
            }
        }
    }
    triples.sort_by_key(|&t| rank3(t));
    Ok(Decomposition::new(triples))
}

fn sorted3(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

/// The column/row incidence structure for one cover instance.
struct CoverMatrix {
    /// Colex ranks of the host edges, sorted; position = column index.
    col_ranks: Vec<u64>,
    /// Row index -> the triple it represents.
    row_triples: Vec<[u32; 3]>,
    /// Row index -> its three column indices.
    row_cols: Vec<[u32; 3]>,
    /// Column index -> row indices through it, ascending.
    rows_by_col: Vec<Vec<u32>>,
    /// Candidates dropped for not being triangles of the host.
    filtered: u64,
}

impl CoverMatrix {
    /// `candidates` must be deduplicated and in canonical (colex) order.
    fn build(g: &PairGraph, candidates: impl Iterator<Item = [u32; 3]>) -> Self {
        let mut col_ranks: Vec<u64> = g.edges().into_iter().map(|[u, v]| rank2(u, v)).collect();
        col_ranks.sort_unstable();
        let col_of = |a: u32, b: u32| -> Option<u32> {
            col_ranks
                .binary_search(&rank2(a, b))
                .ok()
                .map(|i| i as u32)
        };
        let mut row_triples = Vec::new();
        let mut row_cols = Vec::new();
        let mut filtered = 0u64;
        for t in candidates {
            let cols = (
                col_of(t[0], t[1]),
                col_of(t[0], t[2]),
                col_of(t[1], t[2]),
            );
            match cols {
                (Some(a), Some(b), Some(c)) => {
                    row_triples.push(t);
                    row_cols.push([a, b, c]);
                }
                _ => filtered += 1,
            }
        }
        let mut rows_by_col = vec![Vec::new(); col_ranks.len()];
        for (r, cols) in row_cols.iter().enumerate() {
            for &c in cols {
                rows_by_col[c as usize].push(r as u32);
            }
        }
        CoverMatrix {
            col_ranks,
            row_triples,
            row_cols,
            rows_by_col,
            filtered,
        }
    }

    fn ncols(&self) -> usize {
        self.col_ranks.len()
    }
}

/// What the search driver should do after a full cover is reported.
enum AfterSolution {
    Stop,
    KeepGoing,
    /// The current leaf is not acceptable (rainbow coloring failed); treat it
    /// as a dead end and keep searching.
    Reject,
}

struct Searcher<'a> {
    mat: &'a CoverMatrix,
    covered: Vec<bool>,
    alive: Vec<bool>,
    /// Active-row count per column; only read while the column is uncovered.
    count: Vec<u32>,
    chosen: Vec<u32>,
    uncovered: usize,
    nodes: u64,
    max_nodes: u64,
    start: Instant,
    max_time: Duration,
    timed_out: bool,
}

impl<'a> Searcher<'a> {
    fn new(mat: &'a CoverMatrix, budget: Budget) -> Self {
        let mut count = vec![0u32; mat.ncols()];
        for cols in &mat.row_cols {
            for &c in cols {
                count[c as usize] += 1;
            }
        }
        Searcher {
            mat,
            covered: vec![false; mat.ncols()],
            alive: vec![true; mat.row_triples.len()],
            count,
            chosen: Vec::new(),
            uncovered: mat.ncols(),
            nodes: 0,
            max_nodes: budget.max_nodes,
            start: Instant::now(),
            max_time: budget.max_time,
            timed_out: false,
        }
    }

    fn choose(&mut self, row: u32) -> Vec<u32> {
        let mut killed = Vec::new();
        for &c in &self.mat.row_cols[row as usize] {
            for &r in &self.mat.rows_by_col[c as usize] {
                if self.alive[r as usize] {
                    self.alive[r as usize] = false;
                    killed.push(r);
                }
            }
        }
        for &r in &killed {
            for &c in &self.mat.row_cols[r as usize] {
                self.count[c as usize] -= 1;
            }
        }
        for &c in &self.mat.row_cols[row as usize] {
            self.covered[c as usize] = true;
            self.uncovered -= 1;
        }
        self.chosen.push(row);
        killed
    }

    fn unchoose(&mut self, row: u32, killed: Vec<u32>) {
        self.chosen.pop();
        for &c in &self.mat.row_cols[row as usize] {
            self.covered[c as usize] = false;
            self.uncovered += 1;
        }
        for &r in &killed {
            for &c in &self.mat.row_cols[r as usize] {
                self.count[c as usize] += 1;
            }
            self.alive[r as usize] = true;
        }
    }

    /// Exhausts the subtree below the current state. `on_node` runs after
    /// every row choice and may veto the branch. Returns true when the caller
    /// should stop unwinding (found-and-stop or budget exhausted).
    fn run(
        &mut self,
        on_node: &mut dyn FnMut(&Searcher) -> bool,
        on_solution: &mut dyn FnMut(&Searcher) -> AfterSolution,
    ) -> bool {
        if self.uncovered == 0 {
            return match on_solution(self) {
                AfterSolution::Stop => true,
                AfterSolution::KeepGoing | AfterSolution::Reject => false,
            };
        }
        // Minimum-remaining-candidates column, smallest index on ties.
        let mut best: Option<(u32, u32)> = None;
        for c in 0..self.mat.ncols() {
            if self.covered[c] {
                continue;
            }
            let cnt = self.count[c];
            if cnt == 0 {
                return false;
            }
            if best.map_or(true, |(_, bc)| cnt < bc) {
                best = Some((c as u32, cnt));
            }
        }
        let col = best.expect("uncovered > 0 means an uncovered column exists").0;
        let rows = self.mat.rows_by_col[col as usize].clone();
        for row in rows {
            if !self.alive[row as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes
                || (self.nodes % 1024 == 0 && self.start.elapsed() > self.max_time)
            {
                self.timed_out = true;
                return true;
            }
            let killed = self.choose(row);
            let stop = if on_node(self) {
                self.run(on_node, on_solution)
            } else {
                false
            };
            self.unchoose(row, killed);
            if stop {
                return true;
            }
        }
        false
    }

    fn chosen_triples(&self) -> Vec<[u32; 3]> {
        let mut out: Vec<[u32; 3]> = self
            .chosen
            .iter()
            .map(|&r| self.mat.row_triples[r as usize])
            .collect();
        out.sort_by_key(|&t| rank3(t));
        out
    }
}

/// Searches for a triangle decomposition of `g` using only triples of
/// `allowed`.
///
/// Candidates that do not induce triangles of `g` are dropped and counted in
/// `filtered_rows`; duplicate candidates collapse to one row. An `Unsat`
/// verdict is an exhaustive proof within the budget.
pub fn exact_cover_k3(g: &PairGraph, allowed: &TripleSystem, budget: Budget) -> SearchOutcome {
    let start = Instant::now();
    let mat = CoverMatrix::build(g, allowed.iter().map(|(t, _)| t));
    if g.m() % 3 != 0 {
        return SearchOutcome {
            status: SearchStatus::Unsat,
            witness: None,
            nodes_explored: 0,
            elapsed: start.elapsed(),
            filtered_rows: mat.filtered,
        };
    }
    let mut searcher = Searcher::new(&mat, budget);
    let mut witness = None;
    let stopped = searcher.run(&mut |_| true, &mut |s| {
        witness = Some(Decomposition::new(s.chosen_triples()));
        AfterSolution::Stop
    });
    let status = if searcher.timed_out {
        SearchStatus::TimedOut
    } else if stopped && witness.is_some() {
        SearchStatus::Found
    } else {
        SearchStatus::Unsat
    };
    SearchOutcome {
        status,
        witness: if status == SearchStatus::Found {
            witness
        } else {
            None
        },
        nodes_explored: searcher.nodes,
        elapsed: start.elapsed(),
        filtered_rows: mat.filtered,
    }
}

/// Counts distinct labeled triangle decompositions of `g` within `allowed`,
/// stopping early once `cap` is reached.
pub fn count_decompositions(
    g: &PairGraph,
    allowed: &TripleSystem,
    cap: u64,
) -> Result<u64, DesignError> {
    count_decompositions_with_budget(g, allowed, cap, Budget::default())
}

/// As [`count_decompositions`] with an explicit search budget.
pub fn count_decompositions_with_budget(
    g: &PairGraph,
    allowed: &TripleSystem,
    cap: u64,
    budget: Budget,
) -> Result<u64, DesignError> {
    if g.m() % 3 != 0 || cap == 0 {
        return Ok(0);
    }
    let mat = CoverMatrix::build(g, allowed.iter().map(|(t, _)| t));
    let mut searcher = Searcher::new(&mat, budget);
    let mut found = 0u64;
    searcher.run(&mut |_| true, &mut |_| {
        found += 1;
        if found >= cap {
            AfterSolution::Stop
        } else {
            AfterSolution::KeepGoing
        }
    });
    if searcher.timed_out {
        return Err(DesignError::TimedOut {
            nodes: searcher.nodes,
        });
    }
    Ok(found)
}

/// Kuhn augmenting-path matching between row positions and color slots.
///
/// `admissible[i]` lists the color slots usable by row position `i`. Returns
/// the matched slot per position when a perfect matching on positions exists.
fn match_positions(admissible: &[&[u32]], ncolors: usize) -> Option<Vec<u32>> {
    let mut slot_of_pos: Vec<Option<u32>> = vec![None; admissible.len()];
    let mut pos_of_slot: Vec<Option<u32>> = vec![None; ncolors];
    fn augment(
        pos: usize,
        admissible: &[&[u32]],
        pos_of_slot: &mut [Option<u32>],
        slot_of_pos: &mut [Option<u32>],
        visited: &mut [bool],
    ) -> bool {
        for &slot in admissible[pos] {
            if visited[slot as usize] {
                continue;
            }
            visited[slot as usize] = true;
            let vacant = match pos_of_slot[slot as usize] {
                None => true,
                Some(other) => augment(
                    other as usize,
                    admissible,
                    pos_of_slot,
                    slot_of_pos,
                    visited,
                ),
            };
            if vacant {
                pos_of_slot[slot as usize] = Some(pos as u32);
                slot_of_pos[pos] = Some(slot);
                return true;
            }
        }
        false
    }
    for pos in 0..admissible.len() {
        let mut visited = vec![false; ncolors];
        if !augment(
            pos,
            admissible,
            &mut pos_of_slot,
            &mut slot_of_pos,
            &mut visited,
        ) {
            return None;
        }
    }
    Some(slot_of_pos.into_iter().map(|s| s.unwrap()).collect())
}

/// Searches for a triangle decomposition of `g` with an injective color
/// assignment, where triple `t` may receive color `c` only if `t` is a member
/// triple of `fam[c]`.
///
/// Colors are assigned lazily: the search branches on triples and runs a
/// bipartite matching feasibility check every [`RainbowOptions::hall_check_every`]
/// nodes and at every full cover.
pub fn rainbow_exact_cover(
    g: &PairGraph,
    fam: &Family,
    colors: &[u32],
    budget: Budget,
) -> Result<SearchOutcome, DesignError> {
    rainbow_exact_cover_with(g, fam, colors, budget, RainbowOptions::default())
}

/// As [`rainbow_exact_cover`] with explicit search options.
pub fn rainbow_exact_cover_with(
    g: &PairGraph,
    fam: &Family,
    colors: &[u32],
    budget: Budget,
    opts: RainbowOptions,
) -> Result<SearchOutcome, DesignError> {
    let start = Instant::now();
    let required = g.m() / 3 + u64::from(g.m() % 3 != 0);
    if (colors.len() as u64) < required {
        return Err(DesignError::InfeasibleColorCount {
            supplied: colors.len(),
            required,
        });
    }

    // Admissible color slots per candidate triple, slots indexing `colors`.
    let mut by_triple: BTreeMap<u64, ([u32; 3], Vec<u32>)> = BTreeMap::new();
    let mut filtered_sources = 0u64;
    for (slot, &color) in colors.iter().enumerate() {
        let Some(member) = fam.member(color as usize) else {
            continue;
        };
        for (t, _) in member.iter() {
            if g.contains(t[0], t[1]) && g.contains(t[0], t[2]) && g.contains(t[1], t[2]) {
                by_triple
                    .entry(rank3(t))
                    .or_insert_with(|| (t, Vec::new()))
                    .1
                    .push(slot as u32);
            } else {
                filtered_sources += 1;
            }
        }
    }
    let triples: Vec<[u32; 3]> = by_triple.values().map(|(t, _)| *t).collect();
    let palette: Vec<Vec<u32>> = by_triple.into_values().map(|(_, s)| s).collect();

    let mat = CoverMatrix::build(g, triples.into_iter());
    if g.m() % 3 != 0 {
        return Ok(SearchOutcome {
            status: SearchStatus::Unsat,
            witness: None,
            nodes_explored: 0,
            elapsed: start.elapsed(),
            filtered_rows: mat.filtered + filtered_sources,
        });
    }

    let admissible_of = |rows: &[u32]| -> Vec<&[u32]> {
        rows.iter()
            .map(|&r| palette[r as usize].as_slice())
            .collect()
    };

    // A matching over all candidate rows at least `required` large is
    // necessary for any witness; bail out early when even that fails.
    {
        let all_rows: Vec<u32> = (0..mat.row_triples.len() as u32).collect();
        let mut best = 0usize;
        let adm = admissible_of(&all_rows);
        // Greedy lower bound first, then full matching only if needed.
        let mut pos_of_slot: Vec<Option<u32>> = vec![None; colors.len()];
        for (i, slots) in adm.iter().enumerate() {
            if let Some(&slot) = slots.iter().find(|&&s| pos_of_slot[s as usize].is_none()) {
                pos_of_slot[slot as usize] = Some(i as u32);
                best += 1;
            }
        }
        if (best as u64) < required {
            let full = max_matching_size(&adm, colors.len());
            if (full as u64) < required {
                return Ok(SearchOutcome {
                    status: SearchStatus::Unsat,
                    witness: None,
                    nodes_explored: 0,
                    elapsed: start.elapsed(),
                    filtered_rows: mat.filtered + filtered_sources,
                });
            }
        }
    }

    let mut searcher = Searcher::new(&mat, budget);
    let mut witness: Option<Decomposition> = None;
    let check_every = opts.hall_check_every.max(1);
    let mut next_check = check_every;
    searcher.run(
        // Periodic Hall prune on the partial assignment. Sound because adding
        // triples only shrinks color freedom.
        &mut |s| {
            if s.nodes < next_check {
                return true;
            }
            next_check = s.nodes + check_every;
            let adm = admissible_of(&s.chosen);
            match_positions(&adm, colors.len()).is_some()
        },
        &mut |s| {
            let adm = admissible_of(&s.chosen);
            match match_positions(&adm, colors.len()) {
                Some(slots) => {
                    let mut pairs: Vec<([u32; 3], u32)> = s
                        .chosen
                        .iter()
                        .zip(slots.iter())
                        .map(|(&r, &slot)| (s.mat.row_triples[r as usize], colors[slot as usize]))
                        .collect();
                    pairs.sort_by_key(|&(t, _)| rank3(t));
                    witness = Some(Decomposition {
                        triples: pairs.iter().map(|&(t, _)| t).collect(),
                        colors: Some(pairs.iter().map(|&(_, c)| c).collect()),
                    });
                    AfterSolution::Stop
                }
                None => AfterSolution::Reject,
            }
        },
    );

    let status = if searcher.timed_out {
        SearchStatus::TimedOut
    } else if witness.is_some() {
        SearchStatus::Found
    } else {
        SearchStatus::Unsat
    };
    Ok(SearchOutcome {
        status,
        witness,
        nodes_explored: searcher.nodes,
        elapsed: start.elapsed(),
        filtered_rows: mat.filtered + filtered_sources,
    })
}

fn max_matching_size(admissible: &[&[u32]], ncolors: usize) -> usize {
    let mut pos_of_slot: Vec<Option<u32>> = vec![None; ncolors];
    let mut slot_of_pos: Vec<Option<u32>> = vec![None; admissible.len()];
    let mut size = 0;
    fn augment(
        pos: usize,
        admissible: &[&[u32]],
        pos_of_slot: &mut [Option<u32>],
        slot_of_pos: &mut [Option<u32>],
        visited: &mut [bool],
    ) -> bool {
        for &slot in admissible[pos] {
            if visited[slot as usize] {
                continue;
            }
            visited[slot as usize] = true;
            let vacant = match pos_of_slot[slot as usize] {
                None => true,
                Some(other) => augment(
                    other as usize,
                    admissible,
                    pos_of_slot,
                    slot_of_pos,
                    visited,
                ),
            };
            if vacant {
                pos_of_slot[slot as usize] = Some(pos as u32);
                slot_of_pos[pos] = Some(slot);
                return true;
            }
        }
        false
    }
    for pos in 0..admissible.len() {
        let mut visited = vec![false; ncolors];
        if augment(
            pos,
            admissible,
            &mut pos_of_slot,
            &mut slot_of_pos,
            &mut visited,
        ) {
            size += 1;
        }
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::Bits;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constructed_systems_verify_for_all_admissible_orders() {
        for n in (3..=99).filter(|n| n % 6 == 1 || n % 6 == 3) {
            let s = construct_sts(n).unwrap();
            assert_eq!(s.len() as u64, (n as u64) * (n as u64 - 1) / 6);
            assert!(verify_sts(&s, n), "construction failed at n = {n}");
        }
        assert!(matches!(
            construct_sts(8),
            Err(DesignError::DivisibilityViolation { n: 8 })
        ));
    }

    #[test]
    fn verify_sts_rejects_mutilated_systems() {
        let mut s = construct_sts(7).unwrap();
        s.triples.pop();
        assert!(!verify_sts(&s, 7));
        let mut s = construct_sts(7).unwrap();
        s.triples.push(s.triples[0]);
        assert!(!verify_sts(&s, 7));
    }

    #[test]
    fn triangle_and_k4_base_cases() {
        let mut g = PairGraph::new(3);
        g.insert(0, 1);
        g.insert(0, 2);
        g.insert(1, 2);
        let out = exact_cover_k3(&g, &all_triangles(&g), Budget::default());
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.witness.unwrap().triples, vec![[0, 1, 2]]);

        // Any two triangles of K_4 share an edge, so no decomposition.
        let g = PairGraph::complete(4);
        let out = exact_cover_k3(&g, &all_triangles(&g), Budget::default());
        assert_eq!(out.status, SearchStatus::Unsat);
    }

    #[test]
    fn k7_decomposes_and_witness_is_an_sts() {
        let g = PairGraph::complete(7);
        let out = exact_cover_k3(&g, &all_triangles(&g), Budget::default());
        assert_eq!(out.status, SearchStatus::Found);
        let w = out.witness.unwrap();
        assert!(verify_cover(&g, &w));
        assert!(verify_sts(&w, 7));
    }

    #[test]
    fn labeled_decomposition_counts_match_frozen_values() {
        let g = PairGraph::complete(7);
        assert_eq!(
            count_decompositions(&g, &all_triangles(&g), u64::MAX).unwrap(),
            30
        );
        let g = PairGraph::complete(9);
        assert_eq!(
            count_decompositions(&g, &all_triangles(&g), u64::MAX).unwrap(),
            840
        );
    }

    #[test]
    fn count_respects_cap() {
        let g = PairGraph::complete(7);
        assert_eq!(count_decompositions(&g, &all_triangles(&g), 5).unwrap(), 5);
    }

    #[test]
    fn tiny_node_budget_times_out() {
        let g = PairGraph::complete(9);
        let out = exact_cover_k3(&g, &all_triangles(&g), Budget::nodes(3));
        assert_eq!(out.status, SearchStatus::TimedOut);
        assert!(out.witness.is_none());
    }

    #[test]
    fn rows_outside_the_host_are_filtered() {
        let mut g = PairGraph::new(4);
        g.insert(0, 1);
        g.insert(0, 2);
        g.insert(1, 2);
        let mut allowed = TripleSystem::new(4);
        allowed.insert([0, 1, 2]);
        allowed.insert([0, 1, 3]);
        allowed.insert([1, 2, 3]);
        let out = exact_cover_k3(&g, &allowed, Budget::default());
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.filtered_rows, 2);
    }

    /// Independent brute-force oracle: include/exclude each triangle in index
    /// order, keeping only pairwise pair-disjoint subsets that cover every
    /// edge. Branches per row, unlike the engine's per-column branching.
    fn brute_force_count(g: &PairGraph, allowed: &TripleSystem) -> u64 {
        let cols: Vec<u64> = g.edges().into_iter().map(|[u, v]| rank2(u, v)).collect();
        let index_of = |a: u32, b: u32| cols.binary_search(&rank2(a, b)).ok();
        let mut rows: Vec<Bits> = Vec::new();
        for (t, _) in allowed.iter() {
            let (Some(a), Some(b), Some(c)) = (
                index_of(t[0], t[1]),
                index_of(t[0], t[2]),
                index_of(t[1], t[2]),
            ) else {
                continue;
            };
            let mut mask = Bits::new(cols.len() as u32);
            mask.set(a as u32);
            mask.set(b as u32);
            mask.set(c as u32);
            rows.push(mask);
        }
        fn recurse(rows: &[Bits], at: usize, used: &Bits, remaining: usize) -> u64 {
            if remaining == 0 {
                return 1;
            }
            if at == rows.len() {
                return 0;
            }
            let mut total = recurse(rows, at + 1, used, remaining);
            if used.intersection_count(&rows[at]) == 0 {
                let mut next = used.clone();
                for i in rows[at].iter_ones() {
                    next.set(i);
                }
                total += recurse(rows, at + 1, &next, remaining - 3);
            }
            total
        }
        if cols.len() % 3 != 0 {
            return 0;
        }
        recurse(&rows, 0, &Bits::new(cols.len() as u32), cols.len())
    }

    #[test]
    fn engine_agrees_with_subset_oracle_on_small_hosts() {
        let mut hosts: Vec<PairGraph> = Vec::new();
        hosts.push(PairGraph::complete(4));
        hosts.push(PairGraph::complete(5));
        // Bowtie: two triangles sharing vertex 0.
        let mut bowtie = PairGraph::new(5);
        for &(u, v) in &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)] {
            bowtie.insert(u, v);
        }
        hosts.push(bowtie);
        // Octahedron: K_6 minus a perfect matching.
        let mut octa = PairGraph::complete(6);
        octa.remove(0, 1);
        octa.remove(2, 3);
        octa.remove(4, 5);
        hosts.push(octa);
        // Disjoint union of a triangle and an edge: indivisible edge count.
        let mut lop = PairGraph::new(5);
        for &(u, v) in &[(0, 1), (0, 2), (1, 2), (3, 4)] {
            lop.insert(u, v);
        }
        hosts.push(lop);

        for g in &hosts {
            assert!(g.m() <= 15);
            let allowed = all_triangles(g);
            let oracle = brute_force_count(g, &allowed);
            let engine = count_decompositions(g, &allowed, u64::MAX).unwrap();
            assert_eq!(engine, oracle, "count mismatch on host with m = {}", g.m());
            let search = exact_cover_k3(g, &allowed, Budget::default());
            assert_eq!(search.found(), oracle > 0);
            if let Some(w) = &search.witness {
                assert!(verify_cover(g, w));
            }
        }
    }

    fn full_family(n: u32, copies: usize) -> Family {
        let g = PairGraph::complete(n);
        let tri = all_triangles(&g);
        Family::from_members(n, vec![tri; copies])
    }

    #[test]
    fn rainbow_with_unconstrained_colors_matches_plain_search() {
        let g = PairGraph::complete(7);
        let fam = full_family(7, 7);
        let colors: Vec<u32> = (0..7).collect();
        let out = rainbow_exact_cover(&g, &fam, &colors, Budget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let w = out.witness.unwrap();
        assert!(verify_rainbow(&g, &fam, &colors, &w));
    }

    #[test]
    fn rainbow_detects_hall_violation_from_an_empty_member() {
        let g = PairGraph::complete(7);
        let mut members = vec![all_triangles(&g); 6];
        members.push(TripleSystem::new(7));
        let fam = Family::from_members(7, members);
        let colors: Vec<u32> = (0..7).collect();
        let out = rainbow_exact_cover(&g, &fam, &colors, Budget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Unsat);
    }

    #[test]
    fn rainbow_rejects_too_few_colors() {
        let g = PairGraph::complete(7);
        let fam = full_family(7, 7);
        let colors: Vec<u32> = (0..6).collect();
        assert!(matches!(
            rainbow_exact_cover(&g, &fam, &colors, Budget::default()),
            Err(DesignError::InfeasibleColorCount { .. })
        ));
    }

    #[test]
    fn rainbow_survives_random_member_gaps() {
        let g = PairGraph::complete(7);
        let full = all_triangles(&g);
        let every: Vec<[u32; 3]> = full.iter().map(|(t, _)| t).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let members: Vec<TripleSystem> = (0..7)
            .map(|_| {
                let mut keep = every.clone();
                keep.shuffle(&mut rng);
                let mut h = TripleSystem::new(7);
                for &t in keep.iter().skip(3) {
                    h.insert(t);
                }
                h
            })
            .collect();
        let fam = Family::from_members(7, members);
        let colors: Vec<u32> = (0..7).collect();
        let out = rainbow_exact_cover(&g, &fam, &colors, Budget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert!(verify_rainbow(&g, &fam, &colors, &out.witness.unwrap()));
    }
}

//! Core combinatorial types: loopless multigraphs, 2-regular graphs (disjoint
//! unions of cycles, where a double edge is a legal 2-cycle "bubble"), perfect
//! matchings, canonical cycle orders, edge-disjoint unions, and the
//! brute-force hamiltonian-decomposition oracles that define compatibility.
//!
//! Vertices are labelled `1..=n`. Edges are unordered pairs of distinct
//! labels, stored as `(min, max)` with a multiplicity counter so iteration
//! is deterministic and multiplicity queries are O(log n).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Vertex label, 1-based.
pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex label {0} out of range 1..={1}")]
    LabelOutOfRange(u32, usize),
    #[error("loop edge at vertex {0} is not allowed")]
    LoopEdge(u32),
    #[error("label {0} appears {1} times, expected exactly once")]
    BadLabelCount(u32, usize),
    #[error("cycle of length {0} (cycles must have length >= 2)")]
    ShortCycle(usize),
    #[error("malformed graph notation: {0}")]
    Malformed(String),
    #[error("vertex {0} has degree {1}, expected {2}")]
    WrongDegree(u32, u32, u32),
    #[error("vertex counts differ: {0} vs {1}")]
    MismatchedN(usize, usize),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("need n >= {0}, got {1}")]
    TooSmall(usize, usize),
    #[error("vertex count {0} is odd, expected even")]
    OddVertexCount(usize),
    #[error("graph has {0} cycles, expected at most 2")]
    TooManyCycles(usize),
}

pub(crate) fn norm_edge(a: Vertex, b: Vertex) -> Result<(Vertex, Vertex), GraphError> {
    if a == b {
        return Err(GraphError::LoopEdge(a));
    }
    Ok(if a < b { (a, b) } else { (b, a) })
}

// ---------------------------------------------------------------------------
// Multigraph
// ---------------------------------------------------------------------------

/// Loopless multigraph on vertices `1..=n`, stored as a sorted edge multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multigraph {
    n: usize,
    edges: BTreeMap<(Vertex, Vertex), u32>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_label(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v as usize > self.n {
            Err(GraphError::LabelOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<(), GraphError> {
        self.add_edge_mult(a, b, 1)
    }

    pub fn add_edge_mult(&mut self, a: Vertex, b: Vertex, mult: u32) -> Result<(), GraphError> {
        self.check_label(a)?;
        self.check_label(b)?;
        let key = norm_edge(a, b)?;
        if mult > 0 {
            *self.edges.entry(key).or_insert(0) += mult;
        }
        Ok(())
    }

    /// Remove one copy of the edge; `false` if it is not present.
    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) -> bool {
        let Ok(key) = norm_edge(a, b) else { return false };
        match self.edges.get_mut(&key) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.edges.remove(&key);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, a: Vertex, b: Vertex) -> u32 {
        norm_edge(a, b).map_or(0, |key| self.edges.get(&key).copied().unwrap_or(0))
    }

    /// Distinct edges with multiplicities, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = ((Vertex, Vertex), u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    /// The edge multiset expanded copy-by-copy, sorted.
    pub fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (&e, &m) in &self.edges {
            for _ in 0..m {
                out.push(e);
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    pub fn degree(&self, v: Vertex) -> u32 {
        let mut d = 0;
        for (&(a, b), &m) in &self.edges {
            if a == v || b == v {
                d += m;
            }
        }
        d
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n + 1];
        for (&(a, b), &m) in &self.edges {
            d[a as usize] += m;
            d[b as usize] += m;
        }
        d.drain(..1);
        d
    }

    pub fn is_regular(&self, k: u32) -> bool {
        self.degrees().iter().all(|&d| d == k)
    }

    /// Edge-disjoint union: multiplicities add.
    pub fn union(&self, other: &Multigraph) -> Result<Multigraph, GraphError> {
        if self.n != other.n {
            return Err(GraphError::MismatchedN(self.n, other.n));
        }
        let mut out = self.clone();
        for (&e, &m) in &other.edges {
            *out.edges.entry(e).or_insert(0) += m;
        }
        Ok(out)
    }

    /// Multiset difference; `None` if `other` is not contained in `self`.
    pub fn difference(&self, other: &Multigraph) -> Option<Multigraph> {
        if self.n != other.n {
            return None;
        }
        let mut out = self.clone();
        for (&e, &m) in &other.edges {
            let have = out.edges.get_mut(&e)?;
            if *have < m {
                return None;
            }
            *have -= m;
            if *have == 0 {
                out.edges.remove(&e);
            }
        }
        Some(out)
    }

    /// Apply a relabelling; `perm[old - 1]` is the new label.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Multigraph, GraphError> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(GraphError::NotAPermutation(self.n));
        }
        let mut out = Multigraph::new(self.n);
        for (&(a, b), &m) in &self.edges {
            out.add_edge_mult(perm[a as usize - 1], perm[b as usize - 1], m)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct MultigraphRepr {
    n: usize,
    edges: Vec<(Vertex, Vertex, u32)>,
}

impl Serialize for Multigraph {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let edges = self.edges.iter().map(|(&(a, b), &m)| (a, b, m)).collect();
        MultigraphRepr { n: self.n, edges }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Multigraph {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = MultigraphRepr::deserialize(de)?;
        let mut g = Multigraph::new(repr.n);
        for (a, b, m) in repr.edges {
            g.add_edge_mult(a, b, m).map_err(D::Error::custom)?;
        }
        Ok(g)
    }
}

pub(crate) fn is_permutation(perm: &[Vertex]) -> bool {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p == 0 || p as usize > n || seen[p as usize] {
            return false;
        }
        seen[p as usize] = true;
    }
    true
}

// ---------------------------------------------------------------------------
// CycleOrder
// ---------------------------------------------------------------------------

/// Canonical cyclic ordering of all `n` labels: the representative of a
/// hamiltonian cycle under rotation and reflection, fixed by `ω(1) = 1` and
/// `ω(2) < ω(n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CycleOrder(Vec<Vertex>);

impl<'de> Deserialize<'de> for CycleOrder {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let seq = Vec::<Vertex>::deserialize(de)?;
        CycleOrder::canonical(&seq).map_err(D::Error::custom)
    }
}

impl CycleOrder {
    /// Canonicalize an arbitrary traversal of a hamiltonian cycle.
    pub fn canonical(seq: &[Vertex]) -> Result<CycleOrder, GraphError> {
        let n = seq.len();
        if n < 3 {
            return Err(GraphError::TooSmall(3, n));
        }
        if !is_permutation(seq) {
            return Err(GraphError::NotAPermutation(n));
        }
        let pos = seq.iter().position(|&v| v == 1).unwrap();
        let forward: Vec<Vertex> = (0..n).map(|i| seq[(pos + i) % n]).collect();
        if forward[1] < forward[n - 1] {
            return Ok(CycleOrder(forward));
        }
        let backward: Vec<Vertex> = (0..n).map(|i| seq[(pos + n - i) % n]).collect();
        Ok(CycleOrder(backward))
    }

    /// The identity ordering `(1, 2, ..., n)`.
    pub fn identity(n: usize) -> CycleOrder {
        assert!(n >= 3);
        CycleOrder((1..=n as Vertex).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    /// The n cycle edges, each normalized to `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| {
            let a = self.0[i];
            let b = self.0[(i + 1) % n];
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
    }

    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n());
        for (a, b) in self.edges() {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    pub fn to_graph(&self) -> TwoRegularGraph {
        TwoRegularGraph::from_multigraph(self.to_multigraph()).unwrap()
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Result<CycleOrder, GraphError> {
        if perm.len() != self.n() || !is_permutation(perm) {
            return Err(GraphError::NotAPermutation(self.n()));
        }
        let seq: Vec<Vertex> = self.0.iter().map(|&v| perm[v as usize - 1]).collect();
        CycleOrder::canonical(&seq)
    }
}

impl fmt::Display for CycleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for CycleOrder {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let labels = parse_labels(s)?;
        CycleOrder::canonical(&labels)
    }
}

fn parse_labels(s: &str) -> Result<Vec<Vertex>, GraphError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<Vertex>()
                .map_err(|_| GraphError::Malformed(format!("bad label {t:?}")))
        })
        .collect()
}

/// Classic in-place next lexicographic permutation.
fn next_permutation(v: &mut [Vertex]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All `(n-1)!/2` canonical cycle orders on `n` labels, emitted lazily in
/// lexicographic order of the tail `(ω(2), ..., ω(n))`.
pub fn all_cycles(n: usize) -> Result<impl Iterator<Item = CycleOrder>, GraphError> {
    if n < 3 {
        return Err(GraphError::TooSmall(3, n));
    }
    let first: Vec<Vertex> = (2..=n as Vertex).collect();
    Ok(AllCycles { tail: first, fresh: true })
}

struct AllCycles {
    tail: Vec<Vertex>,
    fresh: bool,
}

impl Iterator for AllCycles {
    type Item = CycleOrder;

    fn next(&mut self) -> Option<CycleOrder> {
        loop {
            if self.fresh {
                self.fresh = false;
            } else if !next_permutation(&mut self.tail) {
                return None;
            }
            // reflection representative: ω(2) < ω(n)
            if self.tail[0] < self.tail[self.tail.len() - 1] {
                let mut seq = Vec::with_capacity(self.tail.len() + 1);
                seq.push(1);
                seq.extend_from_slice(&self.tail);
                return Some(CycleOrder(seq));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// PerfectMatching
// ---------------------------------------------------------------------------

/// 1-regular graph on `1..=n` (n even): a set of n/2 disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PerfectMatching {
    n: usize,
    partner: Vec<Vertex>, // 1-based; partner[v] is the vertex matched to v
}

impl PerfectMatching {
    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if !n.is_multiple_of(2) {
            return Err(GraphError::OddVertexCount(n));
        }
        if pairs.len() != n / 2 {
            return Err(GraphError::Malformed(format!(
                "{} edges cannot perfectly match {n} vertices",
                pairs.len()
            )));
        }
        let mut partner = vec![0 as Vertex; n + 1];
        for &(a, b) in pairs {
            let (a, b) = norm_edge(a, b)?;
            if b as usize > n || a == 0 {
                return Err(GraphError::LabelOutOfRange(b, n));
            }
            if partner[a as usize] != 0 {
                return Err(GraphError::BadLabelCount(a, 2));
            }
            if partner[b as usize] != 0 {
                return Err(GraphError::BadLabelCount(b, 2));
            }
            partner[a as usize] = b;
            partner[b as usize] = a;
        }
        Ok(PerfectMatching { n, partner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, v: Vertex) -> Vertex {
        self.partner[v as usize]
    }

    /// Edges sorted by smaller endpoint.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.n / 2);
        for v in 1..=self.n as Vertex {
            let p = self.partner[v as usize];
            if v < p {
                out.push((v, p));
            }
        }
        out
    }

    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n);
        for (a, b) in self.pairs() {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    /// Do this matching and `other` together form a single hamiltonian cycle?
    ///
    /// Any shared edge gives a 2-cycle, so the union is hamiltonian only for
    /// n = 2 in that case.
    pub fn union_is_hamiltonian(&self, other: &PerfectMatching) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut seen = 0usize;
        let mut v: Vertex = 1;
        loop {
            let u = self.partner(v);
            let w = other.partner(u);
            seen += 2;
            if w == 1 {
                return seen == self.n;
            }
            if seen > self.n {
                return false;
            }
            v = w;
        }
    }

    /// The hamiltonian cycle formed with `other`, when there is one.
    pub fn union_cycle(&self, other: &PerfectMatching) -> Option<CycleOrder> {
        if !self.union_is_hamiltonian(other) {
            return None;
        }
        let mut seq = Vec::with_capacity(self.n);
        let mut v: Vertex = 1;
        loop {
            seq.push(v);
            let u = self.partner(v);
            seq.push(u);
            let w = other.partner(u);
            if w == 1 {
                break;
            }
            v = w;
        }
        Some(CycleOrder::canonical(&seq).unwrap())
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Result<PerfectMatching, GraphError> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(GraphError::NotAPermutation(self.n));
        }
        let pairs: Vec<(Vertex, Vertex)> = self
            .pairs()
            .iter()
            .map(|&(a, b)| (perm[a as usize - 1], perm[b as usize - 1]))
            .collect();
        PerfectMatching::from_pairs(self.n, &pairs)
    }
}

/// Every perfect matching on an arbitrary even label set, in deterministic
/// order ((2k-1)!! of them for 2k labels). Labels here need not be 1..=n, and
/// 0 is allowed; this is shared by the breakpoint-graph counting code.
pub fn all_perfect_matchings(labels: &[u32]) -> Vec<Vec<(u32, u32)>> {
    assert!(labels.len().is_multiple_of(2), "matching needs an even label set");
    let mut sorted: Vec<u32> = labels.to_vec();
    sorted.sort_unstable();
    fn rec(rest: &[u32], current: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if rest.is_empty() {
            out.push(current.clone());
            return;
        }
        let first = rest[0];
        for i in 1..rest.len() {
            let mate = rest[i];
            let mut remaining = Vec::with_capacity(rest.len() - 2);
            remaining.extend_from_slice(&rest[1..i]);
            remaining.extend_from_slice(&rest[i + 1..]);
            current.push((first, mate));
            rec(&remaining, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(&sorted, &mut current, &mut out);
    out
}

// ---------------------------------------------------------------------------
// TwoRegularGraph
// ---------------------------------------------------------------------------

/// Loopless multigraph with every vertex of degree exactly 2, together with
/// its unique decomposition into cycles of length >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoRegularGraph {
    graph: Multigraph,
    cycles: Vec<Vec<Vertex>>,
}

impl TwoRegularGraph {
    /// Parse parenthesized cycle notation, e.g. `"(1 2)(3 4 5)"`.
    pub fn parse(text: &str, n: usize) -> Result<TwoRegularGraph, GraphError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() || !rest.starts_with('(') {
            return Err(GraphError::Malformed("expected '(' to open a cycle".into()));
        }
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(GraphError::Malformed(format!(
                    "expected '(' at {:?}",
                    rest.chars().take(8).collect::<String>()
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| GraphError::Malformed("unbalanced '('".into()))?;
            let inner = &rest[1..close];
            if inner.contains('(') {
                return Err(GraphError::Malformed("nested '('".into()));
            }
            let labels = parse_labels(inner)?;
            if labels.len() < 2 {
                return Err(GraphError::ShortCycle(labels.len()));
            }
            cycles.push(labels);
            rest = rest[close + 1..].trim_start();
        }
        TwoRegularGraph::from_cycles(n, cycles)
    }

    /// Build from explicit vertex-disjoint cycles covering 1..=n.
    #[allow(clippy::needless_range_loop)]
    pub fn from_cycles(n: usize, cycles: Vec<Vec<Vertex>>) -> Result<TwoRegularGraph, GraphError> {
        let mut count = vec![0usize; n + 1];
        for cyc in &cycles {
            if cyc.len() < 2 {
                return Err(GraphError::ShortCycle(cyc.len()));
            }
            for &v in cyc {
                if v == 0 || v as usize > n {
                    return Err(GraphError::LabelOutOfRange(v, n));
                }
                count[v as usize] += 1;
            }
        }
        for v in 1..=n {
            if count[v] != 1 {
                return Err(GraphError::BadLabelCount(v as Vertex, count[v]));
            }
        }
        let mut graph = Multigraph::new(n);
        for cyc in &cycles {
            if cyc.len() == 2 {
                graph.add_edge_mult(cyc[0], cyc[1], 2)?;
            } else {
                for i in 0..cyc.len() {
                    graph.add_edge(cyc[i], cyc[(i + 1) % cyc.len()])?;
                }
            }
        }
        // normalize the stored decomposition regardless of input ordering
        Ok(TwoRegularGraph { cycles: decompose_two_regular(&graph)?, graph })
    }

    /// Validate an arbitrary multigraph as 2-regular and decompose it.
    pub fn from_multigraph(graph: Multigraph) -> Result<TwoRegularGraph, GraphError> {
        let cycles = decompose_two_regular(&graph)?;
        Ok(TwoRegularGraph { graph, cycles })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn multigraph(&self) -> &Multigraph {
        &self.graph
    }

    /// The cycle decomposition; each cycle starts at its minimum label and
    /// runs toward that vertex's smaller neighbour, cycles sorted by minimum.
    pub fn cycles(&self) -> &[Vec<Vertex>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn all_even(&self) -> bool {
        self.cycles.iter().all(|c| c.len() % 2 == 0)
    }

    pub fn odd_cycles(&self) -> Vec<usize> {
        (0..self.cycles.len()).filter(|&i| self.cycles[i].len() % 2 == 1).collect()
    }

    /// Cycle notation, re-emitted canonically, e.g. `"(1 2)(3 4 5)"`.
    pub fn notation(&self) -> String {
        let mut out = String::new();
        for cyc in &self.cycles {
            out.push('(');
            for (i, v) in cyc.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
            }
            out.push(')');
        }
        out
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Result<TwoRegularGraph, GraphError> {
        TwoRegularGraph::from_multigraph(self.graph.relabel(perm)?)
    }
}

impl fmt::Display for TwoRegularGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Decompose a 2-regular multigraph into its cycles. Deterministic: each walk
/// starts at the smallest unvisited vertex and moves toward its smaller
/// available neighbour.
fn decompose_two_regular(graph: &Multigraph) -> Result<Vec<Vec<Vertex>>, GraphError> {
    let n = graph.n();
    if n < 2 {
        return Err(GraphError::TooSmall(2, n));
    }
    for (i, d) in graph.degrees().iter().enumerate() {
        if *d != 2 {
            return Err(GraphError::WrongDegree(i as Vertex + 1, *d, 2));
        }
    }
    let mut remaining = graph.clone();
    let mut visited = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n as Vertex {
        if visited[start as usize] {
            continue;
        }
        let mut cyc = vec![start];
        visited[start as usize] = true;
        let mut current = start;
        loop {
            let next = (1..=n as Vertex)
                .find(|&u| remaining.multiplicity(current, u) > 0)
                .expect("degree-2 walk cannot dead-end");
            remaining.remove_edge(current, next);
            if next == start {
                break;
            }
            visited[next as usize] = true;
            cyc.push(next);
            current = next;
        }
        cycles.push(cyc);
    }
    Ok(cycles)
}

// ---------------------------------------------------------------------------
// Hamiltonian decompositions and compatibility oracles
// ---------------------------------------------------------------------------

/// All hamiltonian cycles of a multigraph, as canonical cycle orders.
/// Backtracking over vertex sequences fixed to start at 1 with the
/// reflection killed by `ω(2) < ω(n)`.
pub fn hamiltonian_cycles(h: &Multigraph) -> Vec<CycleOrder> {
    let n = h.n();
    if n < 3 {
        return Vec::new();
    }
    fn rec(
        h: &Multigraph,
        path: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        out: &mut Vec<CycleOrder>,
    ) {
        let n = h.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            if h.multiplicity(last, 1) > 0 && path[1] < path[n - 1] {
                out.push(CycleOrder(path.clone()));
            }
            return;
        }
        for v in 2..=n as Vertex {
            if !used[v as usize] && h.multiplicity(last, v) > 0 {
                used[v as usize] = true;
                path.push(v);
                rec(h, path, used, out);
                path.pop();
                used[v as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut path: Vec<Vertex> = vec![1];
    let mut used = vec![false; n + 1];
    used[1] = true;
    rec(h, &mut path, &mut used, &mut out);
    out
}

/// Is this multiset of edges exactly one hamiltonian cycle?
fn is_hamiltonian_cycle_multiset(g: &Multigraph) -> bool {
    let n = g.n();
    if g.edge_count() != n || !g.is_regular(2) {
        return false;
    }
    if n > 2 && g.edges().any(|(_, m)| m > 1) {
        return false;
    }
    decompose_two_regular(g).is_ok_and(|cycles| cycles.len() == 1)
}

/// Every unordered pair `{C1, C2}` of hamiltonian cycles whose edge-disjoint
/// union equals `h` exactly, each pair listed once. Exhaustive search.
pub fn hamiltonian_decompositions(
    h: &Multigraph,
) -> Result<Vec<(CycleOrder, CycleOrder)>, GraphError> {
    for (i, d) in h.degrees().iter().enumerate() {
        if *d != 4 {
            return Err(GraphError::WrongDegree(i as Vertex + 1, *d, 4));
        }
    }
    if h.edges().any(|(_, m)| m > 2) {
        return Ok(Vec::new()); // a triple edge cannot split across two simple cycles
    }
    let mut pairs = std::collections::BTreeSet::new();
    for c1 in hamiltonian_cycles(h) {
        let complement = h
            .difference(&c1.to_multigraph())
            .expect("hamiltonian cycle drawn from h's edges");
        if is_hamiltonian_cycle_multiset(&complement) {
            let c2 =
                CycleOrder::canonical(&decompose_two_regular(&complement).unwrap()[0]).unwrap();
            let pair = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            pairs.insert(pair);
        }
    }
    Ok(pairs.into_iter().collect())
}

/// Early-exit variant of [`hamiltonian_decompositions`].
pub fn has_hamiltonian_decomposition(h: &Multigraph) -> Result<bool, GraphError> {
    for (i, d) in h.degrees().iter().enumerate() {
        if *d != 4 {
            return Err(GraphError::WrongDegree(i as Vertex + 1, *d, 4));
        }
    }
    if h.edges().any(|(_, m)| m > 2) {
        return Ok(false);
    }
    let n = h.n();
    if n < 3 {
        return Ok(false);
    }
    fn rec(h: &Multigraph, path: &mut Vec<Vertex>, used: &mut Vec<bool>) -> bool {
        let n = h.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            if h.multiplicity(last, 1) == 0 || path[1] > path[n - 1] {
                return false;
            }
            let mut g = Multigraph::new(n);
            for i in 0..n {
                g.add_edge(path[i], path[(i + 1) % n]).unwrap();
            }
            let complement = h.difference(&g).expect("cycle drawn from h's edges");
            return is_hamiltonian_cycle_multiset(&complement);
        }
        for v in 2..=n as Vertex {
            if !used[v as usize] && h.multiplicity(last, v) > 0 {
                used[v as usize] = true;
                path.push(v);
                let found = rec(h, path, used);
                path.pop();
                used[v as usize] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let mut path = vec![1];
    let mut used = vec![false; n + 1];
    used[1] = true;
    Ok(rec(h, &mut path, &mut used))
}

/// Every labelled 2-regular graph on `1..=n`, in deterministic order: all
/// ways to partition the labels into cycles of length >= 2 with all cyclic
/// arrangements of each block.
pub fn all_two_regular_graphs(n: usize) -> Result<Vec<TwoRegularGraph>, GraphError> {
    if n < 2 {
        return Err(GraphError::TooSmall(2, n));
    }
    fn arrangements(block: &[Vertex]) -> Vec<Vec<Vertex>> {
        // cyclic orders of the block up to rotation and reflection: fix the
        // first label, permute the rest, keep one of each reflected pair
        if block.len() == 2 {
            return vec![block.to_vec()];
        }
        let mut rest: Vec<Vertex> = block[1..].to_vec();
        let mut out = Vec::new();
        loop {
            if rest.len() < 2 || rest[0] < rest[rest.len() - 1] {
                let mut cyc = vec![block[0]];
                cyc.extend_from_slice(&rest);
                out.push(cyc);
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        out
    }
    fn rec(labels: &[Vertex], acc: &mut Vec<Vec<Vertex>>, out: &mut Vec<Vec<Vec<Vertex>>>) {
        if labels.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = labels[0];
        // choose the block containing the smallest remaining label
        let rest: Vec<Vertex> = labels[1..].to_vec();
        for size in 2..=rest.len() + 1 {
            for combo in combinations(&rest, size - 1) {
                let mut block = vec![first];
                block.extend_from_slice(&combo);
                let remaining: Vec<Vertex> =
                    rest.iter().copied().filter(|v| !combo.contains(v)).collect();
                for arr in arrangements(&block) {
                    acc.push(arr);
                    rec(&remaining, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let labels: Vec<Vertex> = (1..=n as Vertex).collect();
    let mut out = Vec::new();
    rec(&labels, &mut Vec::new(), &mut out);
    out.into_iter().map(|cycles| TwoRegularGraph::from_cycles(n, cycles)).collect()
}

/// k-subsets of a slice in lexicographic order.
pub fn combinations(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    if k > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
        }
        if idx[i] == i + items.len() - k {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Definition of compatibility: `G ∪ C` admits a hamiltonian decomposition.
pub fn is_compatible(g: &TwoRegularGraph, c: &CycleOrder) -> Result<bool, GraphError> {
    if g.n() != c.n() {
        return Err(GraphError::MismatchedN(g.n(), c.n()));
    }
    let union = g.multigraph().union(&c.to_multigraph())?;
    has_hamiltonian_decomposition(&union)
}

/// The relaxed compatibility predicate for graphs with one or two cycles:
/// `G ∪ B = B1 ∪ B2` with each `Bi` 2-regular having one or two cycles.
/// Exhaustive search over 2-regular sub-multigraphs.
pub fn is_compatible_graph(g: &TwoRegularGraph, b: &TwoRegularGraph) -> Result<bool, GraphError> {
    if g.n() != b.n() {
        return Err(GraphError::MismatchedN(g.n(), b.n()));
    }
    if b.cycle_count() > 2 {
        return Err(GraphError::TooManyCycles(b.cycle_count()));
    }
    let union = g.multigraph().union(b.multigraph())?;
    let n = union.n();
    let entries: Vec<((Vertex, Vertex), u32)> = union.edges().collect();
    // Assign 0..=mult copies of each distinct edge to B1; prune on degrees.
    fn rec(
        entries: &[((Vertex, Vertex), u32)],
        idx: usize,
        deg1: &mut Vec<u32>,
        picked: &mut Vec<u32>,
        union: &Multigraph,
    ) -> bool {
        if idx == entries.len() {
            let n = union.n();
            if deg1[1..=n].iter().any(|&d| d != 2) {
                return false;
            }
            let mut b1 = Multigraph::new(n);
            for (i, &((a, b), _)) in entries.iter().enumerate() {
                b1.add_edge_mult(a, b, picked[i]).unwrap();
            }
            let b2 = union.difference(&b1).expect("picked copies from union");
            let ok =
                |m: &Multigraph| decompose_two_regular(m).is_ok_and(|cyc| cyc.len() <= 2);
            return ok(&b1) && ok(&b2);
        }
        let ((a, b), mult) = entries[idx];
        for take in 0..=mult {
            let (da, db) = (deg1[a as usize] + take, deg1[b as usize] + take);
            if da <= 2 && db <= 2 {
                deg1[a as usize] = da;
                deg1[b as usize] = db;
                picked.push(take);
                let found = rec(entries, idx + 1, deg1, picked, union);
                picked.pop();
                deg1[a as usize] -= take;
                deg1[b as usize] -= take;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let mut deg1 = vec![0u32; n + 1];
    let mut picked = Vec::new();
    Ok(rec(&entries, 0, &mut deg1, &mut picked, &union))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str, n: usize) -> TwoRegularGraph {
        TwoRegularGraph::parse(text, n).unwrap()
    }

    fn cycle(seq: &[Vertex]) -> CycleOrder {
        CycleOrder::canonical(seq).unwrap()
    }

    #[test]
    fn parse_two_bubbles() {
        let g = graph("(1 2)(3 4)", 4);
        assert_eq!(g.multigraph().multiplicity(1, 2), 2);
        assert_eq!(g.multigraph().multiplicity(3, 4), 2);
        assert_eq!(g.cycle_count(), 2);
        assert_eq!(g.notation(), "(1 2)(3 4)");
    }

    #[test]
    fn parse_five_cycle() {
        let g = graph("(1 2 3 4 5)", 5);
        assert_eq!(g.cycle_count(), 1);
        assert_eq!(g.cycles()[0].len(), 5);
        assert_eq!(g.multigraph().edge_count(), 5);
    }

    #[test]
    fn parse_triangle_plus_bubble() {
        let g = graph("(1 2 3)(4 5)", 5);
        assert_eq!(g.cycle_count(), 2);
        assert!(!g.all_even());
        assert_eq!(g.odd_cycles(), vec![0]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(TwoRegularGraph::parse("(1 2)(2 3)", 3).is_err()); // duplicate label
        assert!(TwoRegularGraph::parse("(1 2)", 3).is_err()); // missing label
        assert!(TwoRegularGraph::parse("(1)(2 3)", 3).is_err()); // short cycle
        assert!(TwoRegularGraph::parse("(1 2(3 4)", 4).is_err()); // malformed
        assert!(TwoRegularGraph::parse("1 2 3", 3).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(cycle(&[4, 3, 2, 1]).as_slice(), &[1, 2, 3, 4]);
        assert_eq!(cycle(&[1, 3, 2, 4]).as_slice(), &[1, 3, 2, 4]);
        // all ten equivalent traversals of this 5-cycle map to the same
        // representative, which has ω(2) < ω(n)
        assert_eq!(cycle(&[2, 3, 1, 5, 4]).as_slice(), &[1, 3, 2, 4, 5]);
    }

    #[test]
    fn canonical_is_constant_on_equivalence_class() {
        let seq = [3u32, 1, 4, 6, 2, 5];
        let n = seq.len();
        let canon = cycle(&seq);
        assert_eq!(canon.as_slice()[0], 1);
        assert!(canon.as_slice()[1] < canon.as_slice()[n - 1]);
        for r in 0..n {
            let rot: Vec<Vertex> = (0..n).map(|i| seq[(r + i) % n]).collect();
            assert_eq!(cycle(&rot), canon);
            let mut refl = rot.clone();
            refl.reverse();
            assert_eq!(cycle(&refl), canon);
        }
        // idempotent
        assert_eq!(cycle(canon.as_slice()), canon);
    }

    #[test]
    fn canonical_rejects_non_permutations() {
        assert!(CycleOrder::canonical(&[1, 2, 2, 4]).is_err());
        assert!(CycleOrder::canonical(&[1, 2]).is_err());
    }

    #[test]
    fn union_multiplicity_addition() {
        let mut bubble = Multigraph::new(2);
        bubble.add_edge_mult(1, 2, 2).unwrap();
        let mut single = Multigraph::new(2);
        single.add_edge(1, 2).unwrap();
        let u = bubble.union(&single).unwrap();
        assert_eq!(u.multiplicity(1, 2), 3);
    }

    #[test]
    fn union_of_two_cycles_is_4_regular() {
        let c1 = cycle(&[1, 2, 3, 4]).to_multigraph();
        let c2 = cycle(&[1, 3, 2, 4]).to_multigraph();
        let u = c1.union(&c2).unwrap();
        assert_eq!(u.edge_count(), 8);
        assert!(u.is_regular(4));
    }

    #[test]
    fn union_of_matching_with_itself_is_bubbles() {
        let m = PerfectMatching::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        let u = m.to_multigraph().union(&m.to_multigraph()).unwrap();
        let g = TwoRegularGraph::from_multigraph(u).unwrap();
        assert_eq!(g.notation(), "(1 2)(3 4)");
    }

    #[test]
    fn union_degree_additive_and_commutative() {
        let a = graph("(1 2 3)(4 5)", 5).multigraph().clone();
        let b = graph("(1 4 2 5 3)", 5).multigraph().clone();
        let ab = a.union(&b).unwrap();
        assert_eq!(ab, b.union(&a).unwrap());
        for v in 1..=5 {
            assert_eq!(ab.degree(v), a.degree(v) + b.degree(v));
        }
    }

    #[test]
    fn union_rejects_mismatched_n() {
        let a = Multigraph::new(4);
        let b = Multigraph::new(5);
        assert!(a.union(&b).is_err());
    }

    #[test]
    fn all_cycles_small_counts() {
        let four: Vec<CycleOrder> = all_cycles(4).unwrap().collect();
        assert_eq!(
            four,
            vec![cycle(&[1, 2, 3, 4]), cycle(&[1, 2, 4, 3]), cycle(&[1, 3, 2, 4])]
        );
        assert_eq!(all_cycles(5).unwrap().count(), 12);
        assert_eq!(all_cycles(6).unwrap().count(), 60);
        assert!(all_cycles(2).is_err());
    }

    #[test]
    fn all_cycles_are_canonical_and_distinct() {
        let mut seen = std::collections::BTreeSet::new();
        for c in all_cycles(6).unwrap() {
            assert_eq!(CycleOrder::canonical(c.as_slice()).unwrap(), c);
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn decomposition_pair_for_bubbles_and_crossing_cycle() {
        let g = graph("(1 2)(3 4)", 4);
        let h = g.multigraph().union(&cycle(&[1, 3, 2, 4]).to_multigraph()).unwrap();
        let pairs = hamiltonian_decompositions(&h).unwrap();
        assert_eq!(pairs, vec![(cycle(&[1, 2, 3, 4]), cycle(&[1, 2, 4, 3]))]);
    }

    #[test]
    fn decomposition_of_doubled_cycle_is_itself_twice() {
        let c = cycle(&[1, 2, 3, 4]);
        let h = c.to_multigraph().union(&c.to_multigraph()).unwrap();
        let pairs = hamiltonian_decompositions(&h).unwrap();
        assert_eq!(pairs, vec![(c.clone(), c)]);
    }

    #[test]
    fn decomposition_of_two_bubble_pairs() {
        // (1 2)(3 4) ∪ (1 3)(2 4) = two copies of the 4-cycle 1-2-4-3, so the
        // union decomposes as that cycle twice.
        let g = graph("(1 2)(3 4)", 4);
        let b = graph("(1 3)(2 4)", 4);
        let h = g.multigraph().union(b.multigraph()).unwrap();
        let pairs = hamiltonian_decompositions(&h).unwrap();
        assert_eq!(pairs, vec![(cycle(&[1, 2, 4, 3]), cycle(&[1, 2, 4, 3]))]);
    }

    #[test]
    fn decompositions_reunite_to_h() {
        let g = graph("(1 2 3 4 5 6)", 6);
        let c = cycle(&[1, 4, 2, 6, 3, 5]);
        let h = g.multigraph().union(&c.to_multigraph()).unwrap();
        for (c1, c2) in hamiltonian_decompositions(&h).unwrap() {
            let reunion = c1.to_multigraph().union(&c2.to_multigraph()).unwrap();
            assert_eq!(reunion, h);
        }
    }

    #[test]
    fn decomposition_rejects_non_4_regular() {
        let g = graph("(1 2)(3 4)", 4);
        assert!(hamiltonian_decompositions(g.multigraph()).is_err());
        assert!(has_hamiltonian_decomposition(g.multigraph()).is_err());
    }

    #[test]
    fn exists_agrees_with_full_enumeration() {
        let g = graph("(1 2 3)(4 5 6)", 6);
        for c in all_cycles(6).unwrap() {
            let h = g.multigraph().union(&c.to_multigraph()).unwrap();
            assert_eq!(
                has_hamiltonian_decomposition(&h).unwrap(),
                !hamiltonian_decompositions(&h).unwrap().is_empty()
            );
        }
    }

    #[test]
    fn compatibility_examples() {
        let g = graph("(1 2)(3 4)", 4);
        assert!(is_compatible(&g, &cycle(&[1, 3, 2, 4])).unwrap());
        // triple edge {1,2} cannot be split across two simple cycles
        assert!(!is_compatible(&g, &cycle(&[1, 2, 3, 4])).unwrap());
        let c4 = graph("(1 2 3 4)", 4);
        assert!(is_compatible(&c4, &cycle(&[1, 2, 3, 4])).unwrap());
    }

    #[test]
    fn compatibility_rejects_mismatched_n() {
        let g = graph("(1 2)(3 4)", 4);
        assert!(is_compatible(&g, &cycle(&[1, 2, 3, 4, 5])).is_err());
    }

    #[test]
    fn compatibility_is_relabel_invariant() {
        let g = graph("(1 2)(3 4 5 6)", 6);
        let perms = [[3u32, 1, 6, 2, 5, 4], [6, 5, 4, 3, 2, 1], [2, 4, 6, 1, 3, 5]];
        for perm in perms {
            let gp = g.relabel(&perm).unwrap();
            for c in all_cycles(6).unwrap() {
                let cp = c.relabel(&perm).unwrap();
                assert_eq!(is_compatible(&g, &c).unwrap(), is_compatible(&gp, &cp).unwrap());
            }
        }
    }

    #[test]
    fn compatible_graph_examples() {
        let g = graph("(1 2)(3 4)", 4);
        let single = graph("(1 3 2 4)", 4);
        assert!(is_compatible_graph(&g, &single).unwrap());
        let b = graph("(1 3)(2 4)", 4);
        assert!(is_compatible_graph(&g, &b).unwrap());
        let c4 = graph("(1 2 3 4)", 4);
        assert!(is_compatible_graph(&c4, &c4).unwrap());
    }

    #[test]
    fn compatible_graph_rejects_three_cycles() {
        let g = graph("(1 2)(3 4)(5 6)", 6);
        let b = graph("(1 2)(3 4)(5 6)", 6);
        assert!(is_compatible_graph(&g, &b).is_err());
    }

    #[test]
    fn compatible_cycle_implies_compatible_graph() {
        let g = graph("(1 2)(3 4 5 6)", 6);
        for c in all_cycles(6).unwrap() {
            if is_compatible(&g, &c).unwrap() {
                assert!(is_compatible_graph(&g, &c.to_graph()).unwrap());
            }
        }
    }

    #[test]
    fn matching_rejects_bad_input() {
        assert!(PerfectMatching::from_pairs(5, &[(1, 2), (3, 4)]).is_err());
        assert!(PerfectMatching::from_pairs(4, &[(1, 2), (1, 3)]).is_err());
        assert!(PerfectMatching::from_pairs(4, &[(1, 1), (2, 3)]).is_err());
        assert!(PerfectMatching::from_pairs(4, &[(1, 2)]).is_err());
    }

    #[test]
    fn matching_union_cycle_detection() {
        let a = PerfectMatching::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        let b = PerfectMatching::from_pairs(4, &[(1, 3), (2, 4)]).unwrap();
        assert!(a.union_is_hamiltonian(&b));
        assert_eq!(a.union_cycle(&b).unwrap(), cycle(&[1, 2, 4, 3]));
        assert!(!a.union_is_hamiltonian(&a));
        let c = PerfectMatching::from_pairs(6, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let d = PerfectMatching::from_pairs(6, &[(1, 2), (3, 5), (4, 6)]).unwrap();
        assert!(!c.union_is_hamiltonian(&d)); // shared edge -> 2-cycle component
    }

    #[test]
    fn matching_enumeration_counts() {
        assert_eq!(all_perfect_matchings(&[1, 2, 3, 4]).len(), 3);
        assert_eq!(all_perfect_matchings(&[0, 1, 2, 3, 4, 5]).len(), 15);
        assert_eq!(all_perfect_matchings(&[1, 2, 3, 4, 5, 6, 7, 8]).len(), 105);
    }

    #[test]
    fn two_regular_graph_enumeration_counts() {
        // 3 four-cycles + 3 bubble pairs; 12 five-cycles + 10 triangle+bubble;
        // 60 + 45 + 10 + 15 at n = 6
        assert_eq!(all_two_regular_graphs(4).unwrap().len(), 6);
        assert_eq!(all_two_regular_graphs(5).unwrap().len(), 22);
        let six = all_two_regular_graphs(6).unwrap();
        assert_eq!(six.len(), 130);
        let distinct: std::collections::BTreeSet<_> = six.iter().collect();
        assert_eq!(distinct.len(), 130);
    }

    #[test]
    fn combinations_basic() {
        assert_eq!(combinations(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(combinations(&[1, 2, 3], 0), vec![Vec::<Vertex>::new()]);
        assert_eq!(combinations(&[1, 2], 3), Vec::<Vec<Vertex>>::new());
    }

    #[test]
    fn multigraph_json_round_trip() {
        let g = graph("(1 2)(3 4 5)", 5).multigraph().clone();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":5,"edges":[[1,2,2],[3,4,1],[3,5,1],[4,5,1]]}"#);
        let back: Multigraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}

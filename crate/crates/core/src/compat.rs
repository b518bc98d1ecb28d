//! Constructive generation of compatible cycles.
//!
//! For a 2-regular `G` with only even cycles, fix an alternating split
//! `G = A ∪ B` into perfect matchings. Every perfect matching `P` closing `A`
//! into a hamiltonian cycle ((n-2)!! of them, by path extension) combined
//! with every `Q` making both `Q ∪ B` and `P ∪ Q` hamiltonian (at least
//! (n-3)!! by recursion, and the recursion in fact reaches all of them)
//! yields the compatible cycle `P ∪ Q` with witness decomposition
//! `G ∪ C = (A ∪ P) ∪ (B ∪ Q)`. Deduplication gives at least (n-2)!/2
//! distinct cycles.
//!
//! Odd cycles are handled by bandaging: contract one edge at a chosen vertex
//! of each odd cycle, generate on the all-even contraction, then re-insert
//! each bandaged vertex into an edge of `Q` (when its marked edge lies in
//! `A`) or of `P` (when in `B`), every current edge being a legal target.
//! This yields at least (n-2)!/4 distinct compatible cycles.
//!
//! [`enumerate_compatible`] is the independent brute-force oracle: it filters
//! all (n-1)!/2 cycle orders through the hamiltonian-decomposition test.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graphs::{
    all_cycles, all_perfect_matchings, is_compatible, CycleOrder, GraphError, Multigraph,
    PerfectMatching, TwoRegularGraph, Vertex,
};

/// Default vertex-count cap for the exhaustive oracle.
pub const ENUMERATE_CAP: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has an odd cycle: {0:?}")]
    OddCycle(Vec<Vertex>),
    #[error("picks must select exactly one vertex in each odd cycle: {0}")]
    BadPicks(String),
    #[error("n = {0} exceeds the enumeration cap {1}; pass allow_large to override")]
    OverCap(usize, usize),
    #[error("generated cycle {cycle} fails the compatibility oracle for {graph}")]
    GeneratedIncompatible { graph: String, cycle: String },
}

/// An edge-disjoint split of an all-even 2-regular graph into two perfect
/// matchings that alternate along every cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSplit {
    pub a: PerfectMatching,
    pub b: PerfectMatching,
}

/// One bandaged odd-cycle vertex: the original vertex and the edge of the
/// contracted graph (in contracted labels) it must be re-inserted into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandageRecord {
    pub vertex: Vertex,
    pub marked_edge: (Vertex, Vertex),
}

/// Result of contracting one edge at a chosen vertex of every odd cycle:
/// an all-even 2-regular graph on `n - k` vertices relabelled `1..=n-k`
/// order-preservingly, plus the data to undo the contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandagedGraph {
    pub gp: TwoRegularGraph,
    pub bandaged: Vec<BandageRecord>,
    /// old label -> new label; `None` for bandaged-away vertices.
    pub old_to_new: Vec<Option<Vertex>>,
    /// new label -> old label.
    pub new_to_old: Vec<Vertex>,
}

/// A set of compatible cycles for a graph, with the lower bound the
/// construction promises and whether members were re-checked by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleSet {
    pub graph: TwoRegularGraph,
    pub cycles: BTreeSet<CycleOrder>,
    pub bound: u64,
    pub verified: bool,
}

impl CompatibleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn meets_bound(&self) -> bool {
        self.cycles.len() as u64 >= self.bound
    }

    /// Run the hamiltonian-decomposition oracle over every member.
    pub fn verify(&mut self) -> Result<(), CompatError> {
        for c in &self.cycles {
            if !is_compatible(&self.graph, c)? {
                return Err(CompatError::GeneratedIncompatible {
                    graph: self.graph.notation(),
                    cycle: c.to_string(),
                });
            }
        }
        self.verified = true;
        Ok(())
    }
}

impl Serialize for CompatibleSet {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("CompatibleSet", 5)?;
        s.serialize_field("graph", &self.graph.notation())?;
        s.serialize_field("count", &self.cycles.len())?;
        s.serialize_field("bound", &self.bound)?;
        s.serialize_field("verified", &self.verified)?;
        let cycles: Vec<String> = self.cycles.iter().map(|c| c.to_string()).collect();
        s.serialize_field("cycles", &cycles)?;
        s.end()
    }
}

pub fn factorial(n: u64) -> u64 {
    (2..=n).product()
}

pub fn double_factorial(n: u64) -> u64 {
    let mut out = 1;
    let mut k = n;
    while k > 1 {
        out *= k;
        k -= 2;
    }
    out
}

/// The theorem's lower bound: (n-2)!/2 when all cycles are even, else
/// ceil((n-2)!/4).
pub fn generation_bound(n: usize, all_even: bool) -> u64 {
    let f = factorial(n as u64 - 2);
    if all_even {
        f / 2
    } else {
        f.div_ceil(4)
    }
}

// ---------------------------------------------------------------------------
// Pairings on arbitrary label subsets
//
// The bandaged graph lives on a subset of the original labels, so the split /
// completion / third-matching machinery works over sorted label slices with
// involution maps rather than over PerfectMatching (which is pinned to 1..=n).
// ---------------------------------------------------------------------------

type Pairing = BTreeMap<Vertex, Vertex>;

fn pairing_from_pairs(pairs: &[(Vertex, Vertex)]) -> Pairing {
    let mut map = Pairing::new();
    for &(a, b) in pairs {
        map.insert(a, b);
        map.insert(b, a);
    }
    map
}

fn pairing_pairs(p: &Pairing) -> Vec<(Vertex, Vertex)> {
    p.iter().filter(|&(&a, &b)| a < b).map(|(&a, &b)| (a, b)).collect()
}

/// Walk the union of two pairings on `labels` starting from the smallest
/// label; true iff it is a single cycle covering every label.
fn union_single_cycle_on(labels: &[Vertex], m1: &Pairing, m2: &Pairing) -> bool {
    let start = labels[0];
    let mut seen = 0usize;
    let mut v = start;
    loop {
        let u = m1[&v];
        let w = m2[&u];
        seen += 2;
        if w == start {
            return seen == labels.len();
        }
        if seen > labels.len() {
            return false;
        }
        v = w;
    }
}

/// Alternating 2-colouring of vertex-disjoint cycles. Each cycle is a closed
/// vertex walk; a 2-cycle is a bubble whose two copies always land on
/// opposite sides. `orient[i]` flips which colour class the cycle's leading
/// edge joins.
fn split_for_orientation(cycles: &[Vec<Vertex>], orient: &[bool]) -> (Pairing, Pairing) {
    let mut a = Pairing::new();
    let mut b = Pairing::new();
    for (cyc, &flip) in cycles.iter().zip(orient) {
        let len = cyc.len();
        if len == 2 {
            a.insert(cyc[0], cyc[1]);
            a.insert(cyc[1], cyc[0]);
            b.insert(cyc[0], cyc[1]);
            b.insert(cyc[1], cyc[0]);
            continue;
        }
        for i in (0..len).step_by(2) {
            let (x, y) = (cyc[i], cyc[(i + 1) % len]);
            let (p, q) = (cyc[(i + 1) % len], cyc[(i + 2) % len]);
            let (first, second) = if flip { (&mut b, &mut a) } else { (&mut a, &mut b) };
            first.insert(x, y);
            first.insert(y, x);
            second.insert(p, q);
            second.insert(q, p);
        }
    }
    (a, b)
}

/// All alternating splits up to the global A <-> B swap: the first non-bubble
/// cycle's orientation is pinned, the rest vary freely.
fn all_splits(cycles: &[Vec<Vertex>]) -> Vec<(Pairing, Pairing)> {
    let flippable: Vec<usize> = (0..cycles.len()).filter(|&i| cycles[i].len() > 2).collect();
    let free = flippable.len().saturating_sub(1);
    let mut out = Vec::with_capacity(1 << free);
    for mask in 0..(1u32 << free) {
        let mut orient = vec![false; cycles.len()];
        for (j, &ci) in flippable.iter().skip(1).enumerate() {
            orient[ci] = mask >> j & 1 == 1;
        }
        out.push(split_for_orientation(cycles, &orient));
    }
    out
}

/// Path-extension stream over all pairings `P` on `labels` such that
/// `P ∪ A` is a single hamiltonian cycle. Exactly (n-2)!! items, generated
/// lazily from a mixed-radix choice counter so callers may stop early.
struct CompletionsOn {
    labels: Vec<Vertex>,
    a: Pairing,
    choices: Vec<usize>,
    radix: Vec<usize>,
    exhausted: bool,
}

fn completions_on(labels: &[Vertex], a: &Pairing) -> CompletionsOn {
    let n = labels.len();
    let levels = n / 2 - 1;
    let radix: Vec<usize> = (0..levels).map(|i| n - 2 - 2 * i).collect();
    CompletionsOn {
        labels: labels.to_vec(),
        a: a.clone(),
        choices: vec![0; levels],
        radix,
        exhausted: n < 4,
    }
}

impl Iterator for CompletionsOn {
    type Item = Vec<(Vertex, Vertex)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        // materialize the matching for the current choice vector
        let start = self.labels[0];
        let mut used: BTreeSet<Vertex> = BTreeSet::new();
        used.insert(start);
        let mut end = self.a[&start];
        used.insert(end);
        let mut p_edges = Vec::with_capacity(self.labels.len() / 2);
        for &c in &self.choices {
            let pick = *self
                .labels
                .iter()
                .filter(|v| !used.contains(v))
                .nth(c)
                .expect("choice index within radix");
            p_edges.push((end, pick));
            used.insert(pick);
            let mate = self.a[&pick];
            used.insert(mate);
            end = mate;
        }
        p_edges.push((end, start));
        // odometer advance
        let mut i = self.choices.len();
        loop {
            if i == 0 {
                self.exhausted = true;
                break;
            }
            i -= 1;
            self.choices[i] += 1;
            if self.choices[i] < self.radix[i] {
                break;
            }
            self.choices[i] = 0;
        }
        Some(p_edges)
    }
}

/// Recursive stream of pairings `Q` on `labels` with both `Q ∪ B` and
/// `Q ∪ P` single hamiltonian cycles. Descends on the smallest label; the
/// base case on four labels is exhaustive, so the stream emits every valid
/// `Q` (at least (n-3)!! of them) without repetition.
fn third_on(
    labels: Vec<Vertex>,
    b: Pairing,
    p: Pairing,
) -> Box<dyn Iterator<Item = Vec<(Vertex, Vertex)>>> {
    if labels.len() == 4 {
        let valid: Vec<Vec<(Vertex, Vertex)>> = all_perfect_matchings(&labels)
            .into_iter()
            .filter(|q| {
                let qm = pairing_from_pairs(q);
                union_single_cycle_on(&labels, &qm, &b) && union_single_cycle_on(&labels, &qm, &p)
            })
            .collect();
        return Box::new(valid.into_iter());
    }
    let v = labels[0];
    let bv = b[&v];
    let pv = p[&v];
    let candidates: Vec<Vertex> =
        labels.iter().copied().filter(|&q| q != v && q != bv && q != pv).collect();
    Box::new(candidates.into_iter().flat_map(move |q| {
        let beta = b[&q];
        let pi = p[&q];
        let sub_labels: Vec<Vertex> =
            labels.iter().copied().filter(|&x| x != v && x != q).collect();
        let mut b2 = b.clone();
        let mut p2 = p.clone();
        b2.remove(&v);
        b2.remove(&q);
        p2.remove(&v);
        p2.remove(&q);
        b2.insert(bv, beta);
        b2.insert(beta, bv);
        p2.insert(pv, pi);
        p2.insert(pi, pv);
        third_on(sub_labels, b2, p2).map(move |mut q_edges| {
            q_edges.push((v, q));
            q_edges
        })
    }))
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Deterministic alternating split of an all-even graph: in every cycle the
/// edge from the cycle's minimum vertex toward its smaller neighbour goes to
/// `A`.
pub fn matching_split(g: &TwoRegularGraph) -> Result<MatchingSplit, CompatError> {
    if let Some(&i) = g.odd_cycles().first() {
        return Err(CompatError::OddCycle(g.cycles()[i].clone()));
    }
    let orient = vec![false; g.cycle_count()];
    let (a, b) = split_for_orientation(g.cycles(), &orient);
    let n = g.n();
    Ok(MatchingSplit {
        a: PerfectMatching::from_pairs(n, &pairing_pairs(&a))?,
        b: PerfectMatching::from_pairs(n, &pairing_pairs(&b))?,
    })
}

/// All (n-2)!! perfect matchings `P` with `P ∪ A` a hamiltonian cycle,
/// generated lazily by path extension from vertex 1.
pub fn cycle_completions(
    a: &PerfectMatching,
) -> Result<impl Iterator<Item = PerfectMatching>, CompatError> {
    let n = a.n();
    if n < 4 {
        return Err(CompatError::Graph(GraphError::TooSmall(4, n)));
    }
    let labels: Vec<Vertex> = (1..=n as Vertex).collect();
    let map = pairing_from_pairs(&a.pairs());
    Ok(completions_on(&labels, &map)
        .map(move |pairs| PerfectMatching::from_pairs(n, &pairs).expect("valid by construction")))
}

/// All perfect matchings `Q` such that `Q ∪ B` and `P ∪ Q` are hamiltonian
/// cycles, generated lazily by the shrinking recursion; at least (n-3)!!.
pub fn third_matchings(
    b: &PerfectMatching,
    p: &PerfectMatching,
) -> Result<impl Iterator<Item = PerfectMatching>, CompatError> {
    let n = b.n();
    if n != p.n() {
        return Err(CompatError::Graph(GraphError::MismatchedN(n, p.n())));
    }
    if n < 4 {
        return Err(CompatError::Graph(GraphError::TooSmall(4, n)));
    }
    let labels: Vec<Vertex> = (1..=n as Vertex).collect();
    let bm = pairing_from_pairs(&b.pairs());
    let pm = pairing_from_pairs(&p.pairs());
    Ok(third_on(labels, bm, pm)
        .map(move |pairs| PerfectMatching::from_pairs(n, &pairs).expect("valid by construction")))
}

/// Contract one edge at the chosen vertex of every odd cycle (default: the
/// cycle's minimum-label vertex, contracting toward its smaller neighbour)
/// and relabel the remaining vertices order-preservingly.
pub fn bandage(
    g: &TwoRegularGraph,
    picks: Option<&[Vertex]>,
) -> Result<BandagedGraph, CompatError> {
    let n = g.n();
    let odd = g.odd_cycles();
    let default_picks: Vec<Vertex> = odd.iter().map(|&i| g.cycles()[i][0]).collect();
    let picks: Vec<Vertex> = match picks {
        Some(p) => p.to_vec(),
        None => default_picks,
    };
    if picks.len() != odd.len() {
        return Err(CompatError::BadPicks(format!(
            "{} picks for {} odd cycles",
            picks.len(),
            odd.len()
        )));
    }
    let mut pick_of_cycle: BTreeMap<usize, Vertex> = BTreeMap::new();
    for &v in &picks {
        let Some(&ci) = odd.iter().find(|&&i| g.cycles()[i].contains(&v)) else {
            return Err(CompatError::BadPicks(format!("vertex {v} is not in an odd cycle")));
        };
        if pick_of_cycle.insert(ci, v).is_some() {
            return Err(CompatError::BadPicks(format!(
                "two picks in the odd cycle {:?}",
                g.cycles()[ci]
            )));
        }
    }
    // contracted cycles on original labels, and the surviving edge at each pick
    let mut new_cycles: Vec<Vec<Vertex>> = Vec::new();
    let mut marked_orig: Vec<(Vertex, Vertex)> = Vec::new();
    let mut picks_ordered: Vec<Vertex> = Vec::new();
    let mut removed: BTreeSet<Vertex> = BTreeSet::new();
    for (ci, cyc) in g.cycles().iter().enumerate() {
        match pick_of_cycle.get(&ci) {
            None => new_cycles.push(cyc.clone()),
            Some(&v) => {
                let pos = cyc.iter().position(|&x| x == v).unwrap();
                let len = cyc.len();
                let shrunk: Vec<Vertex> = (1..len).map(|off| cyc[(pos + off) % len]).collect();
                let u = shrunk[0];
                let w = shrunk[len - 2];
                new_cycles.push(shrunk);
                marked_orig.push(if u < w { (u, w) } else { (w, u) });
                picks_ordered.push(v);
                removed.insert(v);
            }
        }
    }
    let mut old_to_new: Vec<Option<Vertex>> = vec![None; n];
    let mut new_to_old: Vec<Vertex> = Vec::with_capacity(n - removed.len());
    let mut next: Vertex = 1;
    for old in 1..=n as Vertex {
        if !removed.contains(&old) {
            old_to_new[old as usize - 1] = Some(next);
            new_to_old.push(old);
            next += 1;
        }
    }
    let compress = |v: Vertex| old_to_new[v as usize - 1].unwrap();
    let gp_cycles: Vec<Vec<Vertex>> =
        new_cycles.iter().map(|cyc| cyc.iter().map(|&v| compress(v)).collect()).collect();
    let gp = TwoRegularGraph::from_cycles(n - removed.len(), gp_cycles)?;
    debug_assert!(gp.all_even(), "contraction must leave only even cycles");
    let bandaged = picks_ordered
        .iter()
        .zip(&marked_orig)
        .map(|(&v, &(x, y))| {
            let (a, b) = (compress(x), compress(y));
            BandageRecord { vertex: v, marked_edge: if a < b { (a, b) } else { (b, a) } }
        })
        .collect();
    Ok(BandagedGraph { gp, bandaged, old_to_new, new_to_old })
}

#[derive(Debug, Clone, Default)]
pub struct GenerateOptions {
    /// One vertex per odd cycle; defaults to each odd cycle's minimum label.
    pub picks: Option<Vec<Vertex>>,
    /// Re-check every member with the hamiltonian-decomposition oracle.
    pub verify: bool,
}

/// Even-cycle construction only; errors if `g` has an odd cycle.
pub fn generate_even(g: &TwoRegularGraph) -> Result<CompatibleSet, CompatError> {
    if let Some(&i) = g.odd_cycles().first() {
        return Err(CompatError::OddCycle(g.cycles()[i].clone()));
    }
    generate(g)
}

/// Construct compatible cycles for any 2-regular graph (n >= 4): the
/// even-cycle split construction, with bandaging when odd cycles are
/// present. The result is deduplicated by canonical form and carries the
/// theorem bound.
pub fn generate(g: &TwoRegularGraph) -> Result<CompatibleSet, CompatError> {
    generate_with(g, &GenerateOptions::default())
}

pub fn generate_with(
    g: &TwoRegularGraph,
    opts: &GenerateOptions,
) -> Result<CompatibleSet, CompatError> {
    let n = g.n();
    if n < 4 {
        return Err(CompatError::Graph(GraphError::TooSmall(4, n)));
    }
    let bg = bandage(g, opts.picks.as_deref())?;
    // work on the surviving original labels
    let labels: Vec<Vertex> = bg.new_to_old.clone();
    let uncompress = |v: Vertex| bg.new_to_old[v as usize - 1];
    let cycles_orig: Vec<Vec<Vertex>> = bg
        .gp
        .cycles()
        .iter()
        .map(|cyc| cyc.iter().map(|&v| uncompress(v)).collect())
        .collect();
    let marked: Vec<(Vertex, Vertex)> = bg
        .bandaged
        .iter()
        .map(|r| {
            let (x, y) = (uncompress(r.marked_edge.0), uncompress(r.marked_edge.1));
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    let picks: Vec<Vertex> = bg.bandaged.iter().map(|r| r.vertex).collect();

    let mut set: BTreeSet<CycleOrder> = BTreeSet::new();
    for (a_map, b_map) in all_splits(&cycles_orig) {
        // which side each marked edge sits on; bubbles hold one copy of each
        let sides: Vec<Vec<bool>> = marked
            .iter()
            .map(|&(x, y)| {
                let mut opts_v = Vec::new();
                if a_map.get(&x) == Some(&y) {
                    opts_v.push(true);
                }
                if b_map.get(&x) == Some(&y) {
                    opts_v.push(false);
                }
                opts_v
            })
            .collect();
        debug_assert!(sides.iter().all(|s| !s.is_empty()));
        let mut sigma_choices: Vec<Vec<bool>> = vec![Vec::new()];
        for side in &sides {
            let mut next_choices = Vec::new();
            for sigma in &sigma_choices {
                for &s in side {
                    let mut ext = sigma.clone();
                    ext.push(s);
                    next_choices.push(ext);
                }
            }
            sigma_choices = next_choices;
        }
        for p_edges in completions_on(&labels, &a_map) {
            let p_map = pairing_from_pairs(&p_edges);
            for q_edges in third_on(labels.clone(), b_map.clone(), p_map.clone()) {
                for sigma in &sigma_choices {
                    insert_bandaged(n, &picks, sigma, &p_edges, &q_edges, &mut set);
                }
            }
        }
    }
    let mut out = CompatibleSet {
        graph: g.clone(),
        cycles: set,
        bound: generation_bound(n, g.all_even()),
        verified: false,
    };
    if opts.verify {
        out.verify()?;
    }
    Ok(out)
}

/// Re-insert the bandaged vertices in order; `sigma[i]` true means the
/// marked edge of `picks[i]` lies in A, so the vertex subdivides an edge of
/// Q (else of P). Every current edge of the target is a branch.
fn insert_bandaged(
    n: usize,
    picks: &[Vertex],
    sigma: &[bool],
    p_edges: &[(Vertex, Vertex)],
    q_edges: &[(Vertex, Vertex)],
    set: &mut BTreeSet<CycleOrder>,
) {
    fn rec(
        n: usize,
        i: usize,
        picks: &[Vertex],
        sigma: &[bool],
        p: &mut Vec<(Vertex, Vertex)>,
        q: &mut Vec<(Vertex, Vertex)>,
        set: &mut BTreeSet<CycleOrder>,
    ) {
        if i == picks.len() {
            let mut m = Multigraph::new(n);
            for &(a, b) in p.iter().chain(q.iter()) {
                m.add_edge(a, b).expect("cycle edges stay in range");
            }
            let c = TwoRegularGraph::from_multigraph(m).expect("P ∪ Q stays 2-regular");
            assert_eq!(c.cycle_count(), 1, "P ∪ Q must stay a single cycle");
            set.insert(CycleOrder::canonical(&c.cycles()[0]).expect("hamiltonian cycle"));
            return;
        }
        let v = picks[i];
        let target_len = if sigma[i] { q.len() } else { p.len() };
        for j in 0..target_len {
            let target = if sigma[i] { &mut *q } else { &mut *p };
            let (w, w2) = target[j];
            target[j] = (w, v);
            target.push((v, w2));
            rec(n, i + 1, picks, sigma, p, q, set);
            let target = if sigma[i] { &mut *q } else { &mut *p };
            target.pop();
            target[j] = (w, w2);
        }
    }
    let mut p = p_edges.to_vec();
    let mut q = q_edges.to_vec();
    rec(n, 0, picks, sigma, &mut p, &mut q, set);
}

/// Exhaustive oracle: every canonical cycle passing [`is_compatible`].
pub fn enumerate_compatible(g: &TwoRegularGraph) -> Result<CompatibleSet, CompatError> {
    enumerate_compatible_with(g, false)
}

pub fn enumerate_compatible_with(
    g: &TwoRegularGraph,
    allow_large: bool,
) -> Result<CompatibleSet, CompatError> {
    let n = g.n();
    if n > ENUMERATE_CAP && !allow_large {
        return Err(CompatError::OverCap(n, ENUMERATE_CAP));
    }
    let mut cycles = BTreeSet::new();
    for c in all_cycles(n)? {
        if is_compatible(g, &c)? {
            cycles.insert(c);
        }
    }
    let bound = cycles.len() as u64;
    Ok(CompatibleSet { graph: g.clone(), cycles, bound, verified: true })
}

//! Expansion of graph vectors in cycle bases over solved scattering
//! equations.
//!
//! Fixing the standard basis A = {(γ, n-2, n-1, n) : γ ∈ S_{n-3}} of cycle
//! orders, the vector of any 2-regular graph G can be written
//! φ(G) = Σ_α c_α φ(C_α). Pairing both sides with compatible cycles C_β of G
//! produces a linear system whose right side is computable pairing data, so
//! the coefficients — and with them m(G₁|G₂) as a double sum over basis
//! amplitudes — never require knowing φ(G) directly. Whether enough
//! compatible cycles are independent under φ is exactly the open
//! linear-independence question, so rank deficiencies are reported as data,
//! not failures.

use nalgebra::{Complex, DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::chy::{graph_vector, pairing, pairing_cycles, ChyError, SolutionSet};
use crate::compat::{enumerate_compatible_with, factorial, generate, CompatError};
use crate::graphs::{is_compatible, CycleOrder, GraphError, TwoRegularGraph, Vertex};

/// Singular values below this multiple of the largest count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

type C64 = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpandError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error(transparent)]
    Chy(#[from] ChyError),
    #[error("need n >= 4, got {0}")]
    TooSmall(usize),
    #[error("probe {0} is not compatible with the graph")]
    ProbeNotCompatible(String),
    #[error("{got} probes cannot determine {need} coefficients")]
    TooFewProbes { need: usize, got: usize },
    #[error("pairing matrix is rank deficient: achieved {achieved} of {need}")]
    RankDeficient { achieved: usize, need: usize },
    #[error("expansions use different bases or solution sets")]
    BasisMismatch,
    #[error("no items to rank")]
    NoItems,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    StandardA,
    Custom,
}

/// An ordered list of (n-3)! cycle orders used as an expansion basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub orderings: Vec<CycleOrder>,
    pub kind: BasisKind,
}

/// The standard basis: fix the last three labels as (n-2, n-1, n) and let a
/// permutation γ of 1..n-3 run ahead of them, all canonicalized.
pub fn standard_basis(n: usize) -> Result<CycleBasis, ExpandError> {
    if n < 4 {
        return Err(ExpandError::TooSmall(n));
    }
    let mut head: Vec<Vertex> = (1..=n as Vertex - 3).collect();
    let mut orderings = Vec::with_capacity(factorial(n as u64 - 3) as usize);
    loop {
        let mut seq = head.clone();
        seq.extend([n as Vertex - 2, n as Vertex - 1, n as Vertex]);
        orderings.push(CycleOrder::canonical(&seq).expect("permutation by construction"));
        if !next_perm(&mut head) {
            break;
        }
    }
    orderings.sort();
    orderings.dedup();
    debug_assert_eq!(orderings.len(), factorial(n as u64 - 3) as usize);
    Ok(CycleBasis { orderings, kind: BasisKind::StandardA })
}

fn next_perm(v: &mut [Vertex]) -> bool {
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

/// The Kleiss–Kuijf orderings (1, 2, ω) with ω a permutation of 3..n.
pub fn kk_orderings(n: usize) -> Result<Vec<CycleOrder>, ExpandError> {
    if n < 4 {
        return Err(ExpandError::TooSmall(n));
    }
    let mut tail: Vec<Vertex> = (3..=n as Vertex).collect();
    let mut out = Vec::new();
    loop {
        let mut seq = vec![1, 2];
        seq.extend_from_slice(&tail);
        out.push(CycleOrder::canonical(&seq).expect("permutation by construction"));
        if !next_perm(&mut tail) {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Expansion coefficients of φ(G) in the basis, solved from pairings with
/// the compatible-cycle probes.
#[derive(Debug, Clone)]
pub struct ExpansionResult {
    pub graph: TwoRegularGraph,
    pub basis: CycleBasis,
    pub probes: Vec<CycleOrder>,
    pub coefficients: Vec<C64>,
    pub condition: f64,
    pub residual: f64,
}

impl Serialize for ExpansionResult {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("ExpansionResult", 6)?;
        s.serialize_field("graph", &self.graph.notation())?;
        let basis: Vec<String> = self.basis.orderings.iter().map(|c| c.to_string()).collect();
        s.serialize_field("basis", &basis)?;
        let probes: Vec<String> = self.probes.iter().map(|c| c.to_string()).collect();
        s.serialize_field("probes", &probes)?;
        let coeffs: Vec<(f64, f64)> = self.coefficients.iter().map(|c| (c.re, c.im)).collect();
        s.serialize_field("coefficients", &coeffs)?;
        s.serialize_field("condition", &self.condition)?;
        s.serialize_field("residual", &self.residual)?;
        s.end()
    }
}

/// Solve Σ_α c_α φ(C_α)·φ(C_β) = φ(G)·φ(C_β) over all probes β in the least
/// squares sense. Probes must pass the compatibility oracle — that is the
/// point: each right side is then a pairing of plain cycles.
pub fn expansion_coefficients(
    g: &TwoRegularGraph,
    basis: &CycleBasis,
    probes: &[CycleOrder],
    sols: &SolutionSet,
) -> Result<ExpansionResult, ExpandError> {
    let dim = basis.orderings.len();
    if probes.len() < dim {
        return Err(ExpandError::TooFewProbes { need: dim, got: probes.len() });
    }
    for probe in probes {
        if !is_compatible(g, probe)? {
            return Err(ExpandError::ProbeNotCompatible(probe.to_string()));
        }
    }
    let mut m = DMatrix::<C64>::zeros(probes.len(), dim);
    let mut rhs = DVector::<C64>::zeros(probes.len());
    for (r, beta) in probes.iter().enumerate() {
        for (c, alpha) in basis.orderings.iter().enumerate() {
            m[(r, c)] = pairing_cycles(alpha, beta, sols)?;
        }
        rhs[r] = pairing(g, &beta.to_graph(), sols)?;
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let achieved = svd
        .singular_values
        .iter()
        .filter(|&&s| s > DEFAULT_RANK_TOL * smax)
        .count();
    if achieved < dim {
        return Err(ExpandError::RankDeficient { achieved, need: dim });
    }
    let coeff = svd
        .solve(&rhs, DEFAULT_RANK_TOL * smax)
        .expect("svd computed with singular vectors");
    let residual_vec = &m * &coeff - &rhs;
    let scale = rhs.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1e-300);
    let residual = residual_vec.iter().map(|v| v.norm()).fold(0.0f64, f64::max) / scale;
    Ok(ExpansionResult {
        graph: g.clone(),
        basis: basis.clone(),
        probes: probes.to_vec(),
        coefficients: coeff.iter().copied().collect(),
        condition: smax / smin.max(1e-300),
        residual,
    })
}

/// Pairings of all basis cycles against each other, for reconstruction.
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub basis: CycleBasis,
    pub values: Vec<Vec<C64>>,
}

pub fn amplitude_table(basis: &CycleBasis, sols: &SolutionSet) -> Result<AmplitudeTable, ExpandError> {
    let dim = basis.orderings.len();
    let mut values = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for (i, alpha) in basis.orderings.iter().enumerate() {
        for (j, beta) in basis.orderings.iter().enumerate() {
            values[i][j] = pairing_cycles(alpha, beta, sols)?;
        }
    }
    Ok(AmplitudeTable { basis: basis.clone(), values })
}

/// m(G₁|G₂) = Σ_{α,β} c₁_α c₂_β m(α|β), using only basis amplitudes and the
/// two expansions.
pub fn reconstruct_pairing(
    e1: &ExpansionResult,
    e2: &ExpansionResult,
    amp: &AmplitudeTable,
) -> Result<C64, ExpandError> {
    if e1.basis != e2.basis || e1.basis != amp.basis {
        return Err(ExpandError::BasisMismatch);
    }
    let mut total = C64::new(0.0, 0.0);
    for (i, c1) in e1.coefficients.iter().enumerate() {
        for (j, c2) in e2.coefficients.iter().enumerate() {
            total += c1 * c2 * amp.values[i][j];
        }
    }
    Ok(total)
}

/// Numerical rank of a family of component vectors.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub items: Vec<String>,
    pub rank: usize,
    pub tolerance: f64,
    pub singular_values: Vec<f64>,
}

/// Rank of a raw component matrix (rows of per-solution values) at a
/// relative singular-value threshold. Rows and columns are equilibrated to
/// unit maximum first — component scales vary over many orders of magnitude
/// between solutions, and diagonal scaling cannot change the rank.
pub fn component_rank(rows: &[Vec<C64>], tol: f64) -> (usize, Vec<f64>) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = DMatrix::<C64>::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    for c in 0..ncols {
        let top = (0..nrows).map(|r| m[(r, c)].norm()).fold(0.0f64, f64::max);
        if top > 0.0 {
            for r in 0..nrows {
                m[(r, c)] /= top;
            }
        }
    }
    for r in 0..nrows {
        let top = (0..ncols).map(|c| m[(r, c)].norm()).fold(0.0f64, f64::max);
        if top > 0.0 {
            for c in 0..ncols {
                m[(r, c)] /= top;
            }
        }
    }
    let svd = m.svd(false, false);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = if smax == 0.0 {
        0
    } else {
        singular_values.iter().filter(|&&s| s > tol * smax).count()
    };
    (rank, singular_values)
}

/// Rank of the matrix whose rows are the per-solution components v(·)_I.
/// Weights are omitted: they are a common nonzero column scaling.
pub fn numerical_rank(
    items: &[TwoRegularGraph],
    sols: &SolutionSet,
    tol: f64,
) -> Result<RankReport, ExpandError> {
    if items.is_empty() {
        return Err(ExpandError::NoItems);
    }
    let mut rows = Vec::with_capacity(items.len());
    for g in items {
        rows.push(graph_vector(g, sols)?.components);
    }
    let (rank, singular_values) = component_rank(&rows, tol);
    Ok(RankReport {
        items: items.iter().map(|g| g.notation()).collect(),
        rank,
        tolerance: tol,
        singular_values,
    })
}

/// Rank of a set of cycle orders under the same map.
pub fn rank_of_cycles(
    cycles: &[CycleOrder],
    sols: &SolutionSet,
    tol: f64,
) -> Result<RankReport, ExpandError> {
    let graphs: Vec<TwoRegularGraph> = cycles.iter().map(|c| c.to_graph()).collect();
    numerical_rank(&graphs, sols, tol)
}

/// Outcome of the greedy compatible-basis search.
#[derive(Debug, Clone, Serialize)]
pub enum BasisSearch {
    /// (n-3)! compatible cycles whose vectors have full numerical rank.
    Found { cycles: Vec<String>, rank: usize },
    /// Every candidate tried; the rank never reached (n-3)!.
    Partial { cycles: Vec<String>, rank: usize, candidates_tried: usize },
}

/// Greedily grow a full-rank set of compatible cycles: candidates come from
/// the constructive generator first, then from the exhaustive oracle.
/// Failure to reach rank (n-3)! is a structured report, never an error —
/// whether compatible cycles always span is open.
pub fn find_compatible_basis(
    g: &TwoRegularGraph,
    sols: &SolutionSet,
    tol: f64,
) -> Result<BasisSearch, ExpandError> {
    let n = g.n();
    let need = factorial(n as u64 - 3) as usize;
    let generated = generate(g)?;
    let oracle = enumerate_compatible_with(g, n > crate::compat::ENUMERATE_CAP)?;
    let mut candidates: Vec<CycleOrder> = generated.cycles.iter().cloned().collect();
    for c in &oracle.cycles {
        if !generated.cycles.contains(c) {
            candidates.push(c.clone());
        }
    }
    let mut picked: Vec<CycleOrder> = Vec::new();
    let mut rank = 0usize;
    let mut tried = 0usize;
    for cand in candidates {
        tried += 1;
        let mut attempt = picked.clone();
        attempt.push(cand.clone());
        let report = rank_of_cycles(&attempt, sols, tol)?;
        if report.rank > rank {
            rank = report.rank;
            picked = attempt;
            if rank == need {
                return Ok(BasisSearch::Found {
                    cycles: picked.iter().map(|c| c.to_string()).collect(),
                    rank,
                });
            }
        }
    }
    Ok(BasisSearch::Partial {
        cycles: picked.iter().map(|c| c.to_string()).collect(),
        rank,
        candidates_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chy::{generic_solved_point, GaugeFixing, SolverConfig};
    use crate::feyn::KinematicPoint;
    use crate::graphs::all_cycles;

    fn solved(n: usize, seed: u64) -> (KinematicPoint, SolutionSet) {
        generic_solved_point(n, seed, &GaugeFixing::default(), &SolverConfig::default()).unwrap()
    }

    fn graph(text: &str, n: usize) -> TwoRegularGraph {
        TwoRegularGraph::parse(text, n).unwrap()
    }

    #[test]
    fn standard_basis_shapes() {
        let b4 = standard_basis(4).unwrap();
        assert_eq!(b4.orderings, vec![CycleOrder::identity(4)]);
        let b5 = standard_basis(5).unwrap();
        assert_eq!(b5.orderings.len(), 2);
        assert_eq!(standard_basis(6).unwrap().orderings.len(), 6);
        assert_eq!(standard_basis(7).unwrap().orderings.len(), 24);
        assert!(standard_basis(3).is_err());
    }

    #[test]
    fn kk_orderings_count() {
        let kk = kk_orderings(6).unwrap();
        assert_eq!(kk.len(), 24);
        for c in &kk {
            assert_eq!(c.as_slice()[0], 1);
        }
    }

    #[test]
    fn identity_expansion_is_an_indicator() {
        let (_, sols) = solved(5, 71);
        let basis = standard_basis(5).unwrap();
        for (k, alpha) in basis.orderings.iter().enumerate() {
            let g = alpha.to_graph();
            let probes: Vec<CycleOrder> =
                generate(&g).unwrap().cycles.into_iter().collect();
            let result = expansion_coefficients(&g, &basis, &probes, &sols).unwrap();
            assert!(result.residual < 1e-8, "residual {}", result.residual);
            for (j, c) in result.coefficients.iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (c - C64::new(expected, 0.0)).norm() < 1e-8,
                    "coefficient {j} of basis element {k} is {c}"
                );
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn expansion_reproduces_graph_components() {
        let (_, sols) = solved(5, 73);
        let basis = standard_basis(5).unwrap();
        let g = graph("(1 2)(3 4 5)", 5);
        let probes: Vec<CycleOrder> = generate(&g).unwrap().cycles.into_iter().collect();
        let result = expansion_coefficients(&g, &basis, &probes, &sols).unwrap();
        let gv = graph_vector(&g, &sols).unwrap();
        let basis_vectors: Vec<Vec<C64>> = basis
            .orderings
            .iter()
            .map(|c| graph_vector(&c.to_graph(), &sols).unwrap().components)
            .collect();
        for i in 0..sols.count() {
            let mut acc = C64::new(0.0, 0.0);
            for (alpha, c) in result.coefficients.iter().enumerate() {
                acc += c * basis_vectors[alpha][i];
            }
            let scale = gv.components[i].norm().max(1e-12);
            assert!(
                (acc - gv.components[i]).norm() < 1e-8 * scale,
                "component {i}: {acc} vs {}",
                gv.components[i]
            );
        }
    }

    #[test]
    fn expansion_rejects_incompatible_probes() {
        let (_, sols) = solved(4, 79);
        let basis = standard_basis(4).unwrap();
        let g = graph("(1 2)(3 4)", 4);
        // (1 2 3 4) makes a triple edge with the bubble (1 2): incompatible
        let bad = vec![CycleOrder::identity(4)];
        assert!(matches!(
            expansion_coefficients(&g, &basis, &bad, &sols),
            Err(ExpandError::ProbeNotCompatible(_))
        ));
        assert!(matches!(
            expansion_coefficients(&g, &basis, &[], &sols),
            Err(ExpandError::TooFewProbes { .. })
        ));
    }

    #[test]
    fn reconstruction_matches_direct_pairing_n5() {
        let (_, sols) = solved(5, 83);
        let basis = standard_basis(5).unwrap();
        let amp = amplitude_table(&basis, &sols).unwrap();
        let g1 = graph("(1 2)(3 4 5)", 5);
        let g2 = graph("(1 2 3 4 5)", 5);
        let p1: Vec<CycleOrder> = generate(&g1).unwrap().cycles.into_iter().collect();
        let p2: Vec<CycleOrder> = generate(&g2).unwrap().cycles.into_iter().collect();
        let e1 = expansion_coefficients(&g1, &basis, &p1, &sols).unwrap();
        let e2 = expansion_coefficients(&g2, &basis, &p2, &sols).unwrap();
        let reconstructed = reconstruct_pairing(&e1, &e2, &amp).unwrap();
        let direct = pairing(&g1, &g2, &sols).unwrap();
        let scale = direct.norm().max(1e-12);
        assert!(
            (reconstructed - direct).norm() < 1e-7 * scale,
            "{reconstructed} vs {direct}"
        );
    }

    #[test]
    fn expansion_and_reconstruction_n6() {
        let (_, sols) = solved(6, 109);
        let basis = standard_basis(6).unwrap();
        assert_eq!(basis.orderings.len(), 6);
        let amp = amplitude_table(&basis, &sols).unwrap();
        let g1 = graph("(1 2)(3 4 5 6)", 6);
        let g2 = graph("(1 2 3)(4 5 6)", 6);
        // coefficients reproduce the component vector of (1 2 3)(4 5 6)
        let p2: Vec<CycleOrder> = generate(&g2).unwrap().cycles.into_iter().collect();
        let e2 = expansion_coefficients(&g2, &basis, &p2, &sols).unwrap();
        let gv = graph_vector(&g2, &sols).unwrap();
        let basis_vectors: Vec<Vec<C64>> = basis
            .orderings
            .iter()
            .map(|c| graph_vector(&c.to_graph(), &sols).unwrap().components)
            .collect();
        for (i, target) in gv.components.iter().enumerate() {
            let acc: C64 = e2
                .coefficients
                .iter()
                .zip(&basis_vectors)
                .map(|(c, v)| c * v[i])
                .sum();
            assert!((acc - target).norm() < 1e-8 * target.norm().max(1e-12));
        }
        // and the double sum over basis amplitudes rebuilds the pairing
        let p1: Vec<CycleOrder> = generate(&g1).unwrap().cycles.into_iter().collect();
        let e1 = expansion_coefficients(&g1, &basis, &p1, &sols).unwrap();
        let reconstructed = reconstruct_pairing(&e1, &e2, &amp).unwrap();
        let direct = pairing(&g1, &g2, &sols).unwrap();
        assert!((reconstructed - direct).norm() <= 1e-7 * direct.norm().max(1e-9));
    }

    #[test]
    fn reconstruction_identity_case() {
        let (_, sols) = solved(4, 89);
        let basis = standard_basis(4).unwrap();
        let amp = amplitude_table(&basis, &sols).unwrap();
        let id = CycleOrder::identity(4).to_graph();
        let probes: Vec<CycleOrder> = generate(&id).unwrap().cycles.into_iter().collect();
        let e = expansion_coefficients(&id, &basis, &probes, &sols).unwrap();
        let rec = reconstruct_pairing(&e, &e, &amp).unwrap();
        let direct = pairing(&id, &id, &sols).unwrap();
        assert!((rec - direct).norm() < 1e-8 * direct.norm());
    }

    #[test]
    fn rank_of_all_cycles() {
        for (n, expected, seed) in [(4usize, 1usize, 91u64), (5, 2, 93), (6, 6, 95)] {
            let (_, sols) = solved(n, seed);
            let cycles: Vec<CycleOrder> = all_cycles(n).unwrap().collect();
            let report = rank_of_cycles(&cycles, &sols, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(report.rank, expected, "n = {n}");
            assert_eq!(report.singular_values.len(), cycles.len().min(sols.count()));
        }
    }

    #[test]
    fn rank_is_monotone_under_extension() {
        let (_, sols) = solved(5, 97);
        let cycles: Vec<CycleOrder> = all_cycles(5).unwrap().collect();
        let mut prev = 0usize;
        for k in 1..=cycles.len() {
            let r = rank_of_cycles(&cycles[..k], &sols, DEFAULT_RANK_TOL).unwrap().rank;
            assert!(r >= prev);
            prev = r;
        }
        assert_eq!(prev, 2);
    }

    #[test]
    fn basis_search_small_cases() {
        let (_, sols) = solved(4, 101);
        let g = graph("(1 2)(3 4)", 4);
        match find_compatible_basis(&g, &sols, DEFAULT_RANK_TOL).unwrap() {
            BasisSearch::Found { cycles, rank } => {
                assert_eq!(rank, 1);
                assert_eq!(cycles, vec!["1 3 2 4".to_string()]);
            }
            BasisSearch::Partial { .. } => panic!("expected a basis"),
        }
        let (_, sols5) = solved(5, 103);
        let g5 = graph("(1 2)(3 4 5)", 5);
        match find_compatible_basis(&g5, &sols5, DEFAULT_RANK_TOL).unwrap() {
            BasisSearch::Found { rank, .. } => assert_eq!(rank, 2),
            BasisSearch::Partial { .. } => panic!("expected a basis"),
        }
    }

    #[test]
    fn reconstruct_rejects_basis_mismatch() {
        let (_, sols) = solved(5, 107);
        let basis = standard_basis(5).unwrap();
        let mut other = basis.clone();
        other.orderings.reverse();
        other.kind = BasisKind::Custom;
        let amp = amplitude_table(&basis, &sols).unwrap();
        let g = graph("(1 2 3 4 5)", 5);
        let probes: Vec<CycleOrder> = generate(&g).unwrap().cycles.into_iter().collect();
        let e1 = expansion_coefficients(&g, &basis, &probes, &sols).unwrap();
        let e2 = expansion_coefficients(&g, &other, &probes, &sols).unwrap();
        assert!(matches!(
            reconstruct_pairing(&e1, &e2, &amp),
            Err(ExpandError::BasisMismatch)
        ));
    }
}

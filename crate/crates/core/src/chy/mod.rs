//! Numerical scattering-equation solving and the graph pairing.
//!
//! With three punctures gauge-fixed to finite positions, the remaining n-3
//! scattering equations have (n-3)! solutions. Each solution I carries a
//! weight w_I, the reciprocal reduced Hessian determinant; the paper's
//! per-cycle factor K_I obeys K_I² ∝ 1/det′Φ, so pairings are computed
//! bilinearly with w_I and no square root is ever taken. For 2-regular
//! graphs G₁, G₂ the pairing
//!
//! ```text
//! m(G₁|G₂) = Σ_I w_I Π_{{a,b} ∈ G₁∪G₂} 1/(x_a - x_b)   (a < b)
//! ```
//!
//! is evaluated over the literal edge multiset of the 4-regular union, which
//! makes decomposition invariance exact: identical unions produce identical
//! floating-point sums. Against the Feynman-diagram module only absolute
//! values are compared, since every edge factor is orientation-fixed.

mod solver;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compat::factorial;
use crate::feyn::{FeynError, KinematicPoint};
use crate::graphs::{CycleOrder, GraphError, TwoRegularGraph, Vertex};
use solver::{determinant, track_path, ScatteringSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Kinematics(#[from] FeynError),
    #[error("failed to sample generic kinematics after {0} attempts")]
    ExhaustedResamples(u32),
    #[error("gauge fixing is invalid: {0}")]
    BadGauge(String),
    #[error("solver supports n <= 8, got {0}")]
    TooLarge(usize),
    #[error("expected {expected} solutions, found {found} (after {attempts} attempts)")]
    WrongSolutionCount { expected: usize, found: usize, attempts: u32 },
    #[error("reduced Hessian is singular at a solution (non-generic kinematics)")]
    SingularHessian,
    #[error("monodromy subset invalid: {0}")]
    BadSubset(String),
    #[error("solution set is for n = {0}, graph has n = {1}")]
    MismatchedN(usize, usize),
}

/// Three fixed labels with their finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFixing {
    pub labels: [Vertex; 3],
    pub coords: [(f64, f64); 3],
}

impl Default for GaugeFixing {
    fn default() -> Self {
        GaugeFixing { labels: [1, 2, 3], coords: [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)] }
    }
}

impl GaugeFixing {
    fn coord(&self, i: usize) -> Complex64 {
        Complex64::new(self.coords[i].0, self.coords[i].1)
    }

    fn validate(&self, n: usize) -> Result<(), ChyError> {
        for &l in &self.labels {
            if l == 0 || l as usize > n {
                return Err(ChyError::BadGauge(format!("label {l} out of range")));
            }
        }
        if self.labels[0] == self.labels[1]
            || self.labels[1] == self.labels[2]
            || self.labels[0] == self.labels[2]
        {
            return Err(ChyError::BadGauge("labels must be distinct".into()));
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if (self.coord(i) - self.coord(j)).norm() < 1e-12 {
                    return Err(ChyError::BadGauge("coordinates must be distinct".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Scaled-residual bound every returned solution must satisfy.
    pub residual_tol: f64,
    /// Minimum pairwise distance between distinct solutions.
    pub separation: f64,
    /// Homotopy restarts with fresh random data before giving up.
    pub max_attempts: u32,
    /// Seed for the start-system randomness; fixed seed, fixed output.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { residual_tol: 1e-12, separation: 1e-8, max_attempts: 6, seed: 0x5ca7 }
    }
}

/// The (n-3)! gauge-fixed solutions with their reciprocal reduced-Hessian
/// weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionSet {
    pub n: usize,
    pub gauge: GaugeFixing,
    /// Unfixed labels, ascending; coordinates below follow this order.
    pub unfixed: Vec<Vertex>,
    /// One coordinate vector per solution, as (re, im) pairs.
    pub solutions: Vec<Vec<(f64, f64)>>,
    /// w_I = 1/det′Φ per solution, as (re, im).
    pub weights: Vec<(f64, f64)>,
    /// Largest scaled residual over all n equations and all solutions.
    pub residual: f64,
    #[serde(rename = "s")]
    s_f64: Vec<Vec<f64>>,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    /// Full puncture vector x_1..x_n at solution I.
    pub fn coords(&self, i: usize) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.n];
        for (k, &l) in self.gauge.labels.iter().enumerate() {
            x[l as usize - 1] = self.gauge.coord(k);
        }
        for (&l, &(re, im)) in self.unfixed.iter().zip(&self.solutions[i]) {
            x[l as usize - 1] = Complex64::new(re, im);
        }
        x
    }

    pub fn weight(&self, i: usize) -> Complex64 {
        Complex64::new(self.weights[i].0, self.weights[i].1)
    }

    pub fn s(&self, a: Vertex, b: Vertex) -> f64 {
        self.s_f64[a as usize - 1][b as usize - 1]
    }
}

/// Sample an exact-rational kinematic point: integer invariants in
/// [-9, 9] \ {0} on the free entries, the rest fixed by momentum
/// conservation, re-sampled until generic (no vanishing invariant or channel
/// sum). Deterministic per seed.
pub fn random_kinematics(n: usize, seed: u64) -> Result<KinematicPoint, ChyError> {
    if n < 4 {
        return Err(ChyError::Kinematics(FeynError::TooSmall(n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = n * (n - 3) / 2;
    // single-digit entries make vanishing channel sums common at larger n
    const BUDGET: u32 = 4096;
    for _ in 0..BUDGET {
        let free: Vec<BigRational> = (0..dim)
            .map(|_| {
                let mut v = 0i64;
                while v == 0 {
                    v = rng.gen_range(-9..=9);
                }
                BigRational::from_integer(v.into())
            })
            .collect();
        let kin = KinematicPoint::from_free_entries(n, &free)?;
        if kin.is_generic() {
            return Ok(kin);
        }
    }
    Err(ChyError::ExhaustedResamples(BUDGET))
}

/// A generic point together with its solved scattering equations.
///
/// Algebraic genericity does not rule out a solution escaping to infinity in
/// the chosen gauge chart (at n = 4 this happens whenever s24 = s34 with the
/// default gauge); such points are degenerate for the numerical pipeline, so
/// this walks derived seeds until the solve contract holds. Deterministic
/// per seed.
pub fn generic_solved_point(
    n: usize,
    seed: u64,
    gauge: &GaugeFixing,
    config: &SolverConfig,
) -> Result<(KinematicPoint, SolutionSet), ChyError> {
    let mut last = None;
    for attempt in 0..16u64 {
        let kin = random_kinematics(n, seed.wrapping_add(attempt << 32))?;
        match solve_scattering(&kin, gauge, config) {
            Ok(sols) => return Ok((kin, sols)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn kin_to_f64(kin: &KinematicPoint) -> Vec<Vec<f64>> {
    let n = kin.n();
    (1..=n as Vertex)
        .map(|a| {
            (1..=n as Vertex)
                .map(|b| kin.s(a, b).to_f64().expect("rational fits in f64"))
                .collect()
        })
        .collect()
}

fn build_system(kin: &KinematicPoint, gauge: &GaugeFixing) -> Result<ScatteringSystem, ChyError> {
    let n = kin.n();
    gauge.validate(n)?;
    let unfixed: Vec<Vertex> =
        (1..=n as Vertex).filter(|l| !gauge.labels.contains(l)).collect();
    Ok(ScatteringSystem {
        n,
        s: kin_to_f64(kin),
        fixed_labels: gauge.labels,
        fixed_coords: [gauge.coord(0), gauge.coord(1), gauge.coord(2)],
        unfixed,
    })
}

/// Solve the gauge-fixed scattering equations by total-degree homotopy
/// continuation, polish on the rational system, and validate the count,
/// separation, and residual contracts. Deterministic for fixed config.
pub fn solve_scattering(
    kin: &KinematicPoint,
    gauge: &GaugeFixing,
    config: &SolverConfig,
) -> Result<SolutionSet, ChyError> {
    let n = kin.n();
    if n > 8 {
        return Err(ChyError::TooLarge(n));
    }
    let sys = build_system(kin, gauge)?;
    let m = n - 3;
    let degree = n - 2;
    let expected = factorial(m as u64) as usize;
    let mut found_last = 0usize;
    for attempt in 0..config.max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(attempt as u64));
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let gamma = Complex64::from_polar(1.0, theta);
        let start_consts: Vec<Complex64> = (0..m)
            .map(|_| {
                Complex64::from_polar(
                    rng.gen_range(0.6..1.4),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        // all roots of z_a^degree = r_a
        let paths = degree.pow(m as u32);
        let mut roots: Vec<Vec<Complex64>> = Vec::new();
        for path in 0..paths {
            let mut idx = path;
            let mut start = Vec::with_capacity(m);
            for r in &start_consts {
                let j = idx % degree;
                idx /= degree;
                let (mag, arg) = r.to_polar();
                start.push(Complex64::from_polar(
                    mag.powf(1.0 / degree as f64),
                    (arg + std::f64::consts::TAU * j as f64) / degree as f64,
                ));
            }
            let Some(endpoint) = track_path(&sys, gamma, &start_consts, start) else {
                continue;
            };
            let Some(polished) = sys.polish(endpoint, config.residual_tol) else {
                continue;
            };
            if !roots.iter().any(|r| max_dist(r, &polished) < config.separation) {
                roots.push(polished);
            }
        }
        found_last = roots.len();
        if roots.len() != expected {
            continue;
        }
        // deterministic presentation order
        roots.sort_by(|a, b| {
            for (x, y) in a.iter().zip(b) {
                match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        });
        let mut weights = Vec::with_capacity(expected);
        let mut worst = 0.0f64;
        let mut ok = true;
        for z in &roots {
            worst = worst.max(sys.full_scaled_residual(z));
            match reduced_weight_at(&sys, z) {
                Some(w) if w.norm() > 0.0 => weights.push((w.re, w.im)),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || worst > config.residual_tol {
            continue;
        }
        return Ok(SolutionSet {
            n,
            gauge: gauge.clone(),
            unfixed: sys.unfixed.clone(),
            solutions: roots
                .iter()
                .map(|z| z.iter().map(|c| (c.re, c.im)).collect())
                .collect(),
            weights,
            residual: worst,
            s_f64: sys.s.clone(),
        });
    }
    Err(ChyError::WrongSolutionCount {
        expected,
        found: found_last,
        attempts: config.max_attempts,
    })
}

fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// w = 1/det′Φ: the Hessian Φ_ab = s_ab/(x_a-x_b)² (off-diagonal),
/// Φ_aa = -Σ_b Φ_ab, with the three gauge rows and columns deleted and the
/// determinant divided by the squared Vandermonde factor of the fixed
/// coordinates.
fn reduced_weight_at(sys: &ScatteringSystem, z: &[Complex64]) -> Option<Complex64> {
    let x = sys.coords(z);
    let n = sys.n;
    let mut phi = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let diff = x[a] - x[b];
                phi[a][b] = sys.s[a][b] / (diff * diff);
            }
        }
        let diag = -(0..n).filter(|&b| b != a).map(|b| phi[a][b]).sum::<Complex64>();
        phi[a][a] = diag;
    }
    let keep: Vec<usize> = (0..n)
        .filter(|&i| !sys.fixed_labels.contains(&(i as u32 + 1)))
        .collect();
    let reduced: Vec<Vec<Complex64>> =
        keep.iter().map(|&r| keep.iter().map(|&c| phi[r][c]).collect()).collect();
    let det = determinant(reduced);
    let (i, j, k) = (
        sys.fixed_labels[0] as usize - 1,
        sys.fixed_labels[1] as usize - 1,
        sys.fixed_labels[2] as usize - 1,
    );
    let vandermonde = (x[i] - x[j]) * (x[j] - x[k]) * (x[k] - x[i]);
    let det_prime = det / (vandermonde * vandermonde);
    if det_prime.norm() < 1e-300 {
        None
    } else {
        Some(1.0 / det_prime)
    }
}

/// Reciprocal reduced Hessian weight at one already-solved point.
pub fn reduced_weight(
    kin: &KinematicPoint,
    gauge: &GaugeFixing,
    solution: &[Complex64],
) -> Result<Complex64, ChyError> {
    let sys = build_system(kin, gauge)?;
    reduced_weight_at(&sys, solution).ok_or(ChyError::SingularHessian)
}

/// Per-solution components v(G)_I = Π_edges 1/(x_min - x_max), every edge
/// oriented from smaller to larger label; weights are not included.
#[derive(Debug, Clone)]
pub struct GraphVector {
    pub graph: TwoRegularGraph,
    pub components: Vec<Complex64>,
}

pub fn graph_vector(g: &TwoRegularGraph, sols: &SolutionSet) -> Result<GraphVector, ChyError> {
    if g.n() != sols.n {
        return Err(ChyError::MismatchedN(sols.n, g.n()));
    }
    let components = (0..sols.count())
        .map(|i| {
            let x = sols.coords(i);
            let mut prod = Complex64::new(1.0, 0.0);
            for ((a, b), mult) in g.multigraph().edges() {
                let f = 1.0 / (x[a as usize - 1] - x[b as usize - 1]);
                for _ in 0..mult {
                    prod *= f;
                }
            }
            prod
        })
        .collect();
    Ok(GraphVector { graph: g.clone(), components })
}

/// Cycle-order convenience for [`graph_vector`].
pub fn cycle_vector(c: &CycleOrder, sols: &SolutionSet) -> Result<GraphVector, ChyError> {
    graph_vector(&c.to_graph(), sols)
}

/// The bilinear pairing m(G₁|G₂) = Σ_I w_I Π_{G₁∪G₂} 1/(x_a - x_b).
///
/// The product runs over the sorted edge multiset of the union, so any two
/// pairs of graphs with the same union produce bit-identical sums.
pub fn pairing(
    g1: &TwoRegularGraph,
    g2: &TwoRegularGraph,
    sols: &SolutionSet,
) -> Result<Complex64, ChyError> {
    if g1.n() != sols.n || g2.n() != sols.n {
        return Err(ChyError::MismatchedN(sols.n, g1.n().max(g2.n())));
    }
    let union = g1.multigraph().union(g2.multigraph())?;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..sols.count() {
        let x = sols.coords(i);
        let mut prod = sols.weight(i);
        for ((a, b), mult) in union.edges() {
            let f = 1.0 / (x[a as usize - 1] - x[b as usize - 1]);
            for _ in 0..mult {
                prod *= f;
            }
        }
        total += prod;
    }
    Ok(total)
}

/// Pairing of two cycle orders.
pub fn pairing_cycles(
    alpha: &CycleOrder,
    beta: &CycleOrder,
    sols: &SolutionSet,
) -> Result<Complex64, ChyError> {
    pairing(&alpha.to_graph(), &beta.to_graph(), sols)
}

/// Per-solution deviation of the cross-ratio monodromy identity
///
/// ```text
/// 1 = (1/s_A) Σ_{c∈A, d∉A} s_cd (x_a-x_c)(x_d-x_b) / ((x_c-x_d)(x_a-x_b))
/// ```
///
/// for `a ∈ A`, `b ∉ A`, where s_A = Σ_{c<c'∈A} s_cc'. Terms with c = a or
/// d = b vanish identically. On the support of the scattering equations the
/// sum telescopes to s_A exactly (partial fractions in x_c collapse the
/// c-sum onto the equation at each d, and the antisymmetrized d-sum leaves
/// s_A (x_b - x_a)/(x_b - x_a)); the residual returned is |Σ/s_A - 1|.
pub fn monodromy_residual(
    sols: &SolutionSet,
    subset: &[Vertex],
    a: Vertex,
    b: Vertex,
) -> Result<Vec<f64>, ChyError> {
    let n = sols.n;
    let in_a = |v: Vertex| subset.contains(&v);
    if subset.len() < 2 || subset.len() > n - 2 {
        return Err(ChyError::BadSubset(format!("|A| = {} out of range", subset.len())));
    }
    if subset.iter().any(|&v| v == 0 || v as usize > n) {
        return Err(ChyError::BadSubset("label out of range".into()));
    }
    let mut dedup = subset.to_vec();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != subset.len() {
        return Err(ChyError::BadSubset("duplicate labels".into()));
    }
    if !in_a(a) {
        return Err(ChyError::BadSubset(format!("a = {a} not in A")));
    }
    if in_a(b) || b == 0 || b as usize > n {
        return Err(ChyError::BadSubset(format!("b = {b} must lie outside A")));
    }
    let complement: Vec<Vertex> = (1..=n as Vertex).filter(|&v| !in_a(v)).collect();
    let mut s_a = 0.0f64;
    for (i, &c) in dedup.iter().enumerate() {
        for &c2 in &dedup[i + 1..] {
            s_a += sols.s(c, c2);
        }
    }
    if s_a == 0.0 {
        return Err(ChyError::BadSubset("channel invariant s_A vanishes".into()));
    }
    let mut out = Vec::with_capacity(sols.count());
    for i in 0..sols.count() {
        let x = sols.coords(i);
        let xi = |v: Vertex| x[v as usize - 1];
        let mut rhs = Complex64::new(0.0, 0.0);
        for &c in &dedup {
            if c == a {
                continue;
            }
            for &d in &complement {
                if d == b {
                    continue;
                }
                let num = (xi(a) - xi(c)) * (xi(d) - xi(b));
                let den = (xi(c) - xi(d)) * (xi(a) - xi(b));
                rhs += sols.s(c, d) * num / den;
            }
        }
        out.push((rhs / s_a - Complex64::new(1.0, 0.0)).norm());
    }
    Ok(out)
}

//! Total-degree homotopy continuation for the gauge-fixed scattering
//! equations.
//!
//! The rational equations E_a = Σ_{b≠a} s_ab/(x_a - x_b) = 0 (a unfixed) are
//! cleared of denominators to polynomials of degree n-2,
//!
//! ```text
//! F_a = Σ_{b≠a} s_ab Π_{c≠a,b} (x_a - x_c),
//! ```
//!
//! and every root of the start system z_a^(n-2) = r_a is tracked along
//! H(z,t) = γ(1-t)(z^(n-2) - r) + t F(z) with an Euler predictor and Newton
//! corrector. Most of the (n-2)^(n-3) paths run off to infinity (the true
//! root count is (n-3)!); finite endpoints are polished with Newton on the
//! rational system, which also rejects the spurious denominator-collision
//! roots that clearing introduces.

#![allow(clippy::needless_range_loop)] // lockstep elimination indexing

use num_complex::Complex64;

/// Dense complex linear solve by LU with partial pivoting; `None` when the
/// pivot collapses. Sizes here are at most n-3.
pub(crate) fn solve_linear(mut a: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let m = a.len();
    for col in 0..m {
        let (pivot, mag) = (col..m)
            .map(|r| (r, a[r][col].norm_sqr()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            for c in col..m {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
            let sub = f * rhs[col];
            rhs[r] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for r in (0..m).rev() {
        let mut acc = rhs[r];
        for c in r + 1..m {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Determinant by the same elimination.
pub(crate) fn determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let m = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..m {
        let (pivot, mag) = (col..m)
            .map(|r| (r, a[r][col].norm_sqr()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            for c in col..m {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// The gauge-fixed system for one kinematic point.
pub(crate) struct ScatteringSystem {
    pub n: usize,
    pub s: Vec<Vec<f64>>,
    /// positions of the three fixed labels (1-based labels).
    pub fixed_labels: [u32; 3],
    pub fixed_coords: [Complex64; 3],
    /// the unfixed labels, ascending; the unknowns in order.
    pub unfixed: Vec<u32>,
}

impl ScatteringSystem {
    /// Full coordinate vector x_1..x_n from the unknown vector.
    pub fn coords(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.n];
        for (lab, c) in self.fixed_labels.iter().zip(self.fixed_coords) {
            x[*lab as usize - 1] = c;
        }
        for (lab, &v) in self.unfixed.iter().zip(z) {
            x[*lab as usize - 1] = v;
        }
        x
    }

    /// Cleared polynomial F_a for each unfixed a.
    fn eval_cleared(&self, z: &[Complex64]) -> Vec<Complex64> {
        let x = self.coords(z);
        self.unfixed
            .iter()
            .map(|&a| {
                let ai = a as usize - 1;
                let mut total = Complex64::new(0.0, 0.0);
                for b in 0..self.n {
                    if b == ai {
                        continue;
                    }
                    let mut prod = Complex64::new(self.s[ai][b], 0.0);
                    for c in 0..self.n {
                        if c != ai && c != b {
                            prod *= x[ai] - x[c];
                        }
                    }
                    total += prod;
                }
                total
            })
            .collect()
    }

    /// Jacobian of the cleared system with respect to the unknowns.
    fn jac_cleared(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let x = self.coords(z);
        let m = self.unfixed.len();
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); m]; m];
        for (row, &a) in self.unfixed.iter().enumerate() {
            let ai = a as usize - 1;
            for b in 0..self.n {
                if b == ai {
                    continue;
                }
                let sab = Complex64::new(self.s[ai][b], 0.0);
                // d/dx_a: sum over dropped factors
                for drop in 0..self.n {
                    if drop == ai || drop == b {
                        continue;
                    }
                    let mut prod = sab;
                    for c in 0..self.n {
                        if c != ai && c != b && c != drop {
                            prod *= x[ai] - x[c];
                        }
                    }
                    jac[row][row] += prod;
                }
                // d/dx_d for unfixed d != a appearing as a factor
                for (col, &dlab) in self.unfixed.iter().enumerate() {
                    let d = dlab as usize - 1;
                    if d == ai || d == b {
                        continue;
                    }
                    let mut prod = -sab;
                    for c in 0..self.n {
                        if c != ai && c != b && c != d {
                            prod *= x[ai] - x[c];
                        }
                    }
                    jac[row][col] += prod;
                }
            }
        }
        jac
    }

    /// Rational residuals E_a for the unfixed labels.
    pub fn eval_rational(&self, z: &[Complex64]) -> Vec<Complex64> {
        let x = self.coords(z);
        self.unfixed
            .iter()
            .map(|&a| {
                let ai = a as usize - 1;
                let mut total = Complex64::new(0.0, 0.0);
                for b in 0..self.n {
                    if b != ai {
                        total += self.s[ai][b] / (x[ai] - x[b]);
                    }
                }
                total
            })
            .collect()
    }

    fn jac_rational(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let x = self.coords(z);
        let m = self.unfixed.len();
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); m]; m];
        for (row, &a) in self.unfixed.iter().enumerate() {
            let ai = a as usize - 1;
            for (col, &dlab) in self.unfixed.iter().enumerate() {
                let d = dlab as usize - 1;
                if d == ai {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..self.n {
                        if b != ai {
                            let diff = x[ai] - x[b];
                            acc -= self.s[ai][b] / (diff * diff);
                        }
                    }
                    jac[row][col] = acc;
                } else {
                    let diff = x[ai] - x[d];
                    jac[row][col] = self.s[ai][d] / (diff * diff);
                }
            }
        }
        jac
    }

    /// Scaled residual over ALL n equations (the three gauge-label equations
    /// are dependent on the rest and act as a consistency check): each |E_a|
    /// is divided by 1 + Σ|terms| so the measure is insensitive to kinematic
    /// scale.
    pub fn full_scaled_residual(&self, z: &[Complex64]) -> f64 {
        let x = self.coords(z);
        let mut worst: f64 = 0.0;
        for a in 0..self.n {
            let mut total = Complex64::new(0.0, 0.0);
            let mut scale = 1.0f64;
            for b in 0..self.n {
                if b != a {
                    let term = self.s[a][b] / (x[a] - x[b]);
                    total += term;
                    scale += term.norm();
                }
            }
            worst = worst.max(total.norm() / scale);
        }
        worst
    }

    /// Newton on the rational system; `None` if it fails to converge or the
    /// point collides with a puncture.
    pub fn polish(&self, mut z: Vec<Complex64>, tol: f64) -> Option<Vec<Complex64>> {
        for _ in 0..60 {
            if self.min_separation(&z) < 1e-12 {
                return None;
            }
            let e = self.eval_rational(&z);
            let jac = self.jac_rational(&z);
            let step = solve_linear(jac, e)?;
            let mut norm: f64 = 0.0;
            for (zi, si) in z.iter_mut().zip(&step) {
                *zi -= si;
                norm = norm.max(si.norm());
            }
            let scale = 1.0 + z.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            if norm < 1e-14 * scale {
                break;
            }
        }
        if self.min_separation(&z) < 1e-10 {
            return None;
        }
        (self.full_scaled_residual(&z) <= tol).then_some(z)
    }

    /// Smallest pairwise distance among all n punctures.
    pub fn min_separation(&self, z: &[Complex64]) -> f64 {
        let x = self.coords(z);
        let mut best = f64::INFINITY;
        for i in 0..self.n {
            for j in i + 1..self.n {
                best = best.min((x[i] - x[j]).norm());
            }
        }
        best
    }
}

const DIVERGENCE_RADIUS: f64 = 1e8;
const MIN_STEP: f64 = 1e-11;

/// Track one start root from t = 0 to t = 1 along the convex homotopy.
/// Returns the unpolished endpoint, or `None` for divergent/stalled paths.
pub(crate) fn track_path(
    sys: &ScatteringSystem,
    gamma: Complex64,
    start_consts: &[Complex64],
    start: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let m = start.len();
    let degree = (sys.n - 2) as i32;
    let g = |z: &[Complex64]| -> Vec<Complex64> {
        z.iter().zip(start_consts).map(|(&zi, &ri)| zi.powi(degree) - ri).collect()
    };
    let h = |z: &[Complex64], t: f64| -> Vec<Complex64> {
        let f = sys.eval_cleared(z);
        let gv = g(z);
        (0..m).map(|i| gamma * (1.0 - t) * gv[i] + t * f[i]).collect()
    };
    let h_jac = |z: &[Complex64], t: f64| -> Vec<Vec<Complex64>> {
        let mut jac = sys.jac_cleared(z);
        for row in jac.iter_mut() {
            for v in row.iter_mut() {
                *v *= t;
            }
        }
        for (i, row) in jac.iter_mut().enumerate() {
            row[i] += gamma * (1.0 - t) * degree as f64 * z[i].powi(degree - 1);
        }
        jac
    };
    // dH/dt = F - γ G
    let h_t = |z: &[Complex64]| -> Vec<Complex64> {
        let f = sys.eval_cleared(z);
        let gv = g(z);
        (0..m).map(|i| f[i] - gamma * gv[i]).collect()
    };

    let mut z = start;
    let mut t = 0.0f64;
    let mut dt = 0.05f64;
    let mut streak = 0u32;
    while t < 1.0 {
        if z.iter().any(|v| v.norm() > DIVERGENCE_RADIUS) {
            return None;
        }
        let t_next = (t + dt).min(1.0);
        // Euler predictor on the Davidenko flow
        let rhs: Vec<Complex64> = h_t(&z).iter().map(|&v| v * (t_next - t)).collect();
        let predicted = match solve_linear(h_jac(&z, t), rhs) {
            Some(step) => z.iter().zip(&step).map(|(&zi, &si)| zi - si).collect::<Vec<_>>(),
            None => z.clone(),
        };
        // Newton corrector at t_next
        let mut w = predicted;
        let mut converged = false;
        for _ in 0..3 {
            if w.iter().any(|v| v.norm() > DIVERGENCE_RADIUS || !v.is_finite()) {
                break;
            }
            let Some(step) = solve_linear(h_jac(&w, t_next), h(&w, t_next)) else { break };
            let mut norm: f64 = 0.0;
            for (wi, si) in w.iter_mut().zip(&step) {
                *wi -= si;
                norm = norm.max(si.norm());
            }
            let scale = 1.0 + w.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            if norm < 1e-9 * scale {
                converged = true;
                break;
            }
        }
        if converged {
            z = w;
            t = t_next;
            streak += 1;
            if streak >= 3 {
                dt = (dt * 1.5).min(0.1);
                streak = 0;
            }
        } else {
            dt *= 0.5;
            streak = 0;
            if dt < MIN_STEP {
                return None;
            }
        }
    }
    Some(z)
}

trait IsFiniteExt {
    fn is_finite(&self) -> bool;
}

impl IsFiniteExt for Complex64 {
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

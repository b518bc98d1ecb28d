//! Exact enumerative counts, all in arbitrary-precision arithmetic: signed
//! Hultman numbers (closed formula and brute force over breakpoint-graph
//! configurations), the exact compatible-cycle count for all-bubbles graphs,
//! Schröder–Hipparchus polygon-subdivision numbers, and orthogonal-set sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::graphs::all_perfect_matchings;

pub type ExactInteger = BigInt;
pub type ExactRational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("need {what} >= {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("n = {0} must be even")]
    OddN(usize),
    #[error("m = {0} exceeds the brute-force cap {1}")]
    OverCap(usize, usize),
    #[error("formula produced a non-integer value {0} (transcription bug)")]
    NonInteger(BigRational),
}

/// Brute-force cap: matchings on {0,...,2m+1} grow as (2m+1)!!.
pub const HULTMAN_BRUTEFORCE_CAP: usize = 6;

fn big_factorial(n: u64) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n {
        out *= k;
    }
    out
}

fn big_double_factorial(n: u64) -> BigInt {
    let mut out = BigInt::one();
    let mut k = n;
    while k > 1 {
        out *= k;
        k -= 2;
    }
    out
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        let mut out = BigRational::one();
        for _ in 0..e {
            out *= &two;
        }
        out
    } else {
        let mut out = BigRational::one();
        for _ in 0..-e {
            out /= &two;
        }
        out
    }
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from_integer(i.clone())
}

// ---------------------------------------------------------------------------
// Breakpoint-graph configurations and signed Hultman numbers
// ---------------------------------------------------------------------------

/// Union of a variable matching `delta_b` with the fixed matching
/// `delta_g = {{2i, 2i+1}}` on the points {0, ..., 2m+1}. Its complement
/// replaces `delta_g` by `{{2i-1, 2i}} ∪ {{2m+1, 0}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub m: usize,
    pub delta_b: Vec<(u32, u32)>,
}

impl Configuration {
    pub fn new(m: usize, delta_b: Vec<(u32, u32)>) -> Self {
        Configuration { m, delta_b }
    }

    pub fn delta_g(&self) -> Vec<(u32, u32)> {
        (0..=self.m as u32).map(|i| (2 * i, 2 * i + 1)).collect()
    }

    pub fn delta_g_bar(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> =
            (1..=self.m as u32).map(|i| (2 * i - 1, 2 * i)).collect();
        out.push((0, 2 * self.m as u32 + 1));
        out
    }

    /// Is the union of `delta_b` with the given matching a single cycle
    /// through all 2m+2 points?
    pub fn union_is_single_cycle(&self, other: &[(u32, u32)]) -> bool {
        let total = 2 * self.m + 2;
        let mut b_mate = vec![u32::MAX; total];
        let mut o_mate = vec![u32::MAX; total];
        for &(x, y) in &self.delta_b {
            b_mate[x as usize] = y;
            b_mate[y as usize] = x;
        }
        for &(x, y) in other {
            o_mate[x as usize] = y;
            o_mate[y as usize] = x;
        }
        let mut seen = 0usize;
        let mut v = 0u32;
        loop {
            let u = b_mate[v as usize];
            let w = o_mate[u as usize];
            seen += 2;
            if w == 0 {
                return seen == total;
            }
            if seen > total {
                return false;
            }
            v = w;
        }
    }

    /// Valid breakpoint graph (union with the complement matching is one
    /// cycle) whose own union with `delta_g` also has exactly one cycle.
    pub fn is_single_cycle_breakpoint_graph(&self) -> bool {
        self.union_is_single_cycle(&self.delta_g_bar())
            && self.union_is_single_cycle(&self.delta_g())
    }
}

/// Count matchings `delta_b` on {0,...,2m+1} such that both
/// `delta_b ∪ complement(delta_g)` and `delta_b ∪ delta_g` are single cycles.
/// This is the signed Hultman number S(m, 1) by the breakpoint-graph
/// reformulation.
pub fn hultman_bruteforce(m: usize) -> Result<ExactInteger, CountError> {
    if m < 1 {
        return Err(CountError::TooSmall { what: "m", min: 1, got: m });
    }
    if m > HULTMAN_BRUTEFORCE_CAP {
        return Err(CountError::OverCap(m, HULTMAN_BRUTEFORCE_CAP));
    }
    let labels: Vec<u32> = (0..2 * m as u32 + 2).collect();
    let mut count = BigInt::zero();
    for delta_b in all_perfect_matchings(&labels) {
        if Configuration::new(m, delta_b).is_single_cycle_breakpoint_graph() {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed formula for the one-cycle signed Hultman number S(s-1, 1):
///
/// ```text
/// 2^(3s-2) s! (s-1)!^2 / (2s)!
///   + sum_{a=1}^{s-1} (-1)^(s+1) s sum_{b=1}^{min(a, s-a)} (-1)^(a-b) T(a,b,s)
/// ```
///
/// with
///
/// ```text
/// T(a,b,s) = 2^(3(a-b)-1) (2a-2b+1) (a-1)! ((2b)! (a-1)! (s-a-b+1)!)^2
///          / ((s^2-(a-b+1)^2) (s^2-(a-b)^2) (s-a-b)! (2a-1)! (b-1)! ((2b-1) b!)^2)
/// ```
///
/// evaluated exactly; the rational total must have denominator one.
pub fn hultman_formula(s: usize) -> Result<ExactInteger, CountError> {
    if s < 2 {
        return Err(CountError::TooSmall { what: "s", min: 2, got: s });
    }
    let s_i = s as u64;
    let first = pow2(3 * s as i64 - 2) * rat(&big_factorial(s_i))
        * rat(&(big_factorial(s_i - 1).pow(2)))
        / rat(&big_factorial(2 * s_i));
    let mut total = first;
    let outer_sign = if (s + 1).is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    for a in 1..=s - 1 {
        for b in 1..=a.min(s - a) {
            let inner_sign =
                if (a - b) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            total += &outer_sign
                * rat(&BigInt::from(s))
                * inner_sign
                * hultman_term(a as u64, b as u64, s_i);
        }
    }
    if !total.is_integer() {
        return Err(CountError::NonInteger(total));
    }
    Ok(total.to_integer())
}

fn hultman_term(a: u64, b: u64, s: u64) -> BigRational {
    let diff = a as i64 - b as i64; // a >= b in the summation range
    let num = pow2(3 * diff - 1)
        * rat(&BigInt::from(2 * a - 2 * b + 1))
        * rat(&big_factorial(a - 1))
        * rat(&(big_factorial(2 * b) * big_factorial(a - 1) * big_factorial(s - a - b + 1))
            .pow(2));
    let s2 = BigInt::from(s * s);
    let d1 = &s2 - BigInt::from((diff + 1) * (diff + 1));
    let d2 = &s2 - BigInt::from(diff * diff);
    let den = rat(&d1)
        * rat(&d2)
        * rat(&big_factorial(s - a - b))
        * rat(&big_factorial(2 * a - 1))
        * rat(&big_factorial(b - 1))
        * rat(&(BigInt::from(2 * b - 1) * big_factorial(b)).pow(2));
    num / den
}

/// Exact number of compatible cycles for the graph of n/2 disjoint bubbles:
/// (n-2)!!/2 times the one-cycle signed Hultman number on n/2 - 1 elements.
pub fn bubbles_exact_count(n: usize) -> Result<ExactInteger, CountError> {
    if !n.is_multiple_of(2) {
        return Err(CountError::OddN(n));
    }
    if n < 4 {
        return Err(CountError::TooSmall { what: "n", min: 4, got: n });
    }
    let hultman = hultman_formula(n / 2)?;
    Ok(big_double_factorial(n as u64 - 2) * hultman / 2)
}

// ---------------------------------------------------------------------------
// Schröder–Hipparchus numbers and orthogonal counts
// ---------------------------------------------------------------------------

/// Number of subdivisions of a convex n-gon by non-crossing diagonals,
/// including the empty subdivision: 1, 3, 11, 45, 197, ... for n = 3, 4, ...
/// Computed by the little-Schröder three-term recurrence.
pub fn super_catalan(n: usize) -> Result<ExactInteger, CountError> {
    if n < 3 {
        return Err(CountError::TooSmall { what: "n", min: 3, got: n });
    }
    // d(k): subdivisions of a (k+1)-gon, d(2) = d(3)-gon... anchored by
    // d(2) = 1 (triangle), d(3) = 3 (square); (k+1) d(k+1) = 3(2k-1) d(k) - (k-2) d(k-1)
    let mut prev = BigInt::one(); // d(2), triangle
    let mut cur = BigInt::from(3); // d(3), square
    if n == 3 {
        return Ok(prev);
    }
    if n == 4 {
        return Ok(cur);
    }
    for k in 3..(n - 1) as u64 {
        let next: BigInt =
            (BigInt::from(3 * (2 * k - 1)) * &cur - BigInt::from(k - 2) * &prev) / (k + 1);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Number of cycle orders orthogonal to a fixed order under the pairing:
/// (n-1)!/2 minus the Schröder–Hipparchus count of orders sharing a diagram.
pub fn orthogonal_count(n: usize) -> Result<ExactInteger, CountError> {
    if n < 4 {
        return Err(CountError::TooSmall { what: "n", min: 4, got: n });
    }
    let all = big_factorial(n as u64 - 1) / 2;
    Ok(all - super_catalan(n)?)
}

/// Diagnostic ratio of the exact all-bubbles count to its asymptotic form
/// (π/4) n (n-3)!.
pub fn bubbles_asymptotic_ratio(n: usize) -> Result<f64, CountError> {
    let exact = bubbles_exact_count(n)?;
    let asym = std::f64::consts::FRAC_PI_4
        * n as f64
        * big_factorial(n as u64 - 3).to_f64().expect("fits f64 at desk scale");
    Ok(rat(&exact).to_f64().expect("fits f64 at desk scale") / asym)
}

//! Exact partial amplitudes from Feynman diagrams.
//!
//! A tree-level diagram for n massless scalars is an unrooted trivalent tree
//! with n leaves; it is determined by the n-3 leaf bipartitions its internal
//! edges induce (channels). Diagrams planar with respect to a cycle order
//! correspond to triangulations of an n-gon whose sides carry the order's
//! labels, so each order admits Catalan(n-2) planar diagrams. The unsigned
//! partial amplitude m(α|β) sums, over diagrams planar in both orders, the
//! product of reciprocal channel invariants, evaluated exactly over rational
//! kinematics.
//!
//! Channel invariants use the unordered-pair sum Σ_{a<b∈L} s_ab; the paper's
//! "trivial factors of 2" are eliminated.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::CycleOrder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeynError {
    #[error("need n >= 4, got {0}")]
    TooSmall(usize),
    #[error("orderings have different sizes: {0} vs {1}")]
    MismatchedN(usize, usize),
    #[error("kinematic matrix is invalid: {0}")]
    BadKinematics(String),
    #[error("channel invariant vanishes on channel {0:?}")]
    DegenerateChannel(Vec<u32>),
    #[error("expected {0} free entries for n = {1}, got {2}")]
    WrongFreeCount(usize, usize, usize),
}

// ---------------------------------------------------------------------------
// Kinematics
// ---------------------------------------------------------------------------

/// Symmetric n x n matrix of exact rational Mandelstam invariants with zero
/// diagonal and zero row sums; the free dimension is n(n-3)/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KinematicPoint {
    n: usize,
    s: Vec<Vec<BigRational>>, // 0-indexed [a-1][b-1]
}

impl KinematicPoint {
    /// Validate a full matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn from_matrix(s: Vec<Vec<BigRational>>) -> Result<KinematicPoint, FeynError> {
        let n = s.len();
        if n < 4 {
            return Err(FeynError::TooSmall(n));
        }
        for (i, row) in s.iter().enumerate() {
            if row.len() != n {
                return Err(FeynError::BadKinematics(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if !row[i].is_zero() {
                return Err(FeynError::BadKinematics(format!("s[{0}][{0}] != 0", i + 1)));
            }
            let sum: BigRational = row.iter().sum();
            if !sum.is_zero() {
                return Err(FeynError::BadKinematics(format!("row {} sums to {sum}", i + 1)));
            }
            for j in 0..n {
                if s[i][j] != s[j][i] {
                    return Err(FeynError::BadKinematics(format!(
                        "s[{}][{}] != s[{}][{}]",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(KinematicPoint { n, s })
    }

    /// Build from the n(n-3)/2 free invariants s_ab for 2 <= a < b <= n,
    /// (a,b) != (n-1,n), in row-major order. The remaining entries are fixed
    /// by momentum conservation: s_{n-1,n} kills the lower-block total and
    /// the first row kills each remaining row sum.
    pub fn from_free_entries(n: usize, free: &[BigRational]) -> Result<KinematicPoint, FeynError> {
        if n < 4 {
            return Err(FeynError::TooSmall(n));
        }
        let expect = n * (n - 3) / 2;
        if free.len() != expect {
            return Err(FeynError::WrongFreeCount(expect, n, free.len()));
        }
        let mut s = vec![vec![BigRational::zero(); n]; n];
        let mut it = free.iter();
        for a in 2..=n {
            for b in a + 1..=n {
                if (a, b) == (n - 1, n) {
                    continue;
                }
                let v = it.next().unwrap().clone();
                s[a - 1][b - 1] = v.clone();
                s[b - 1][a - 1] = v;
            }
        }
        let mut lower_total = BigRational::zero();
        for a in 2..=n {
            for b in a + 1..=n {
                if (a, b) != (n - 1, n) {
                    lower_total += &s[a - 1][b - 1];
                }
            }
        }
        s[n - 2][n - 1] = -lower_total.clone();
        s[n - 1][n - 2] = -lower_total;
        for b in 2..=n {
            let mut row_sum = BigRational::zero();
            for c in 2..=n {
                if c != b {
                    row_sum += &s[b - 1][c - 1];
                }
            }
            s[0][b - 1] = -row_sum.clone();
            s[b - 1][0] = -row_sum;
        }
        KinematicPoint::from_matrix(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The invariant s_ab (1-based labels).
    pub fn s(&self, a: u32, b: u32) -> &BigRational {
        &self.s[a as usize - 1][b as usize - 1]
    }

    /// Σ_{a<b ∈ L} s_ab over a label bitmask (bit v-1 set means label v).
    pub fn channel_sum(&self, mask: u32) -> BigRational {
        let mut total = BigRational::zero();
        let labels = mask_labels(mask);
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                total += self.s(a, b);
            }
        }
        total
    }

    /// Permute particle labels: new label of old `v` is `perm[v-1]`.
    pub fn relabel(&self, perm: &[u32]) -> KinematicPoint {
        let n = self.n;
        let mut s = vec![vec![BigRational::zero(); n]; n];
        for a in 1..=n {
            for b in 1..=n {
                s[perm[a - 1] as usize - 1][perm[b - 1] as usize - 1] =
                    self.s[a - 1][b - 1].clone();
            }
        }
        KinematicPoint { n, s }
    }

    /// All off-diagonal entries and all channel invariants (sizes 2..=n-2)
    /// nonzero — the genericity required by tree values and the solver.
    pub fn is_generic(&self) -> bool {
        let n = self.n;
        for a in 1..=n as u32 {
            for b in a + 1..=n as u32 {
                if self.s(a, b).is_zero() {
                    return false;
                }
            }
        }
        // canonical channels: subsets without label n, sizes 2..=n-2
        let full: u32 = (1 << (n - 1)) - 1; // labels 1..n-1
        for mask in 1u32..=full {
            let size = mask.count_ones() as usize;
            if (2..=n - 2).contains(&size) && self.channel_sum(mask).is_zero() {
                return false;
            }
        }
        true
    }
}

fn mask_labels(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_string(text: &str) -> Result<BigRational, String> {
    let parse_int =
        |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad integer {t:?}: {e}"));
    match text.split_once('/') {
        Some((p, q)) => Ok(BigRational::new(parse_int(p)?, parse_int(q)?)),
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

#[derive(Serialize, Deserialize)]
struct KinematicRepr {
    n: usize,
    s: Vec<Vec<String>>,
}

impl Serialize for KinematicPoint {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let s = self
            .s
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect();
        KinematicRepr { n: self.n, s }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for KinematicPoint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = KinematicRepr::deserialize(de)?;
        let mut s = Vec::with_capacity(repr.s.len());
        for row in &repr.s {
            let parsed: Result<Vec<BigRational>, String> =
                row.iter().map(|t| rational_from_string(t)).collect();
            s.push(parsed.map_err(D::Error::custom)?);
        }
        KinematicPoint::from_matrix(s).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

/// Trivalent tree with n labelled leaves in canonical form: the sorted list
/// of its n-3 channels, each channel a label bitmask canonicalized to the
/// side not containing label n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeynmanTree {
    channels: Vec<u32>,
}

impl FeynmanTree {
    pub fn channels(&self) -> &[u32] {
        &self.channels
    }

    /// Channels as label lists, for display and errors.
    pub fn channel_labels(&self) -> Vec<Vec<u32>> {
        self.channels.iter().map(|&m| mask_labels(m)).collect()
    }
}

pub fn catalan(k: u64) -> u64 {
    // C(k) = (2k)! / (k! (k+1)!)
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= 2 * k - i;
        den *= i + 1;
    }
    num / den / (k + 1)
}

/// Triangulations of a convex polygon with `n` corners, each triangulation a
/// list of diagonals (corner index pairs). Shapes depend only on n, so they
/// are computed once and shared; orderings instantiate them per call.
type ShapeCache = Mutex<HashMap<usize, std::sync::Arc<Vec<Vec<(u8, u8)>>>>>;

fn triangulation_shapes(n: usize) -> std::sync::Arc<Vec<Vec<(u8, u8)>>> {
    static CACHE: OnceLock<ShapeCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("shape cache poisoned");
    if let Some(hit) = guard.get(&n) {
        return hit.clone();
    }
    fn rec(corners: &[u8], diags: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        let len = corners.len();
        if len < 3 {
            out.push(diags.clone());
            return;
        }
        // the triangle resting on the edge (first, last) has every possible apex
        let (first, last) = (corners[0], corners[len - 1]);
        for k in 1..len - 1 {
            let apex = corners[k];
            let mut added = 0;
            if k != 1 {
                diags.push((first, apex));
                added += 1;
            }
            if k != len - 2 {
                diags.push((apex, last));
                added += 1;
            }
            // split into the two sub-polygons flanking the triangle
            let left = &corners[..=k];
            let right = &corners[k..];
            fn sub(
                part: &[u8],
                other: &[u8],
                diags: &mut Vec<(u8, u8)>,
                out: &mut Vec<Vec<(u8, u8)>>,
            ) {
                // enumerate triangulations of `part`, then of `other`, by
                // chaining the recursions through the shared diagonal list
                let mut partials = Vec::new();
                rec(part, diags, &mut partials);
                for p in partials {
                    let mut d = p;
                    rec(other, &mut d, out);
                }
            }
            sub(left, right, diags, out);
            for _ in 0..added {
                diags.pop();
            }
        }
    }
    let corners: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    rec(&corners, &mut Vec::new(), &mut out);
    let arc = std::sync::Arc::new(out);
    guard.insert(n, arc.clone());
    arc
}

/// All Catalan(n-2) trees planar with respect to `alpha`: instantiate each
/// polygon-triangulation shape with the ordering's side labels.
pub fn planar_trees(alpha: &CycleOrder) -> BTreeSet<FeynmanTree> {
    let n = alpha.n();
    let labels = alpha.as_slice();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let n_bit: u32 = 1 << (n - 1);
    let side_bit: Vec<u32> = labels.iter().map(|&v| 1u32 << (v - 1)).collect();
    let mut out = BTreeSet::new();
    for shape in triangulation_shapes(n).iter() {
        let mut channels: Vec<u32> = shape
            .iter()
            .map(|&(i, j)| {
                // the diagonal (i, j) cuts off the sides i..j
                let mut mask = 0u32;
                for c in i..j {
                    mask |= side_bit[c as usize];
                }
                if mask & n_bit != 0 {
                    full ^ mask
                } else {
                    mask
                }
            })
            .collect();
        channels.sort_unstable();
        out.insert(FeynmanTree { channels });
    }
    out
}

/// Trees planar with respect to both orderings.
pub fn common_trees(
    alpha: &CycleOrder,
    beta: &CycleOrder,
) -> Result<BTreeSet<FeynmanTree>, FeynError> {
    if alpha.n() != beta.n() {
        return Err(FeynError::MismatchedN(alpha.n(), beta.n()));
    }
    let a = planar_trees(alpha);
    let b = planar_trees(beta);
    Ok(a.intersection(&b).cloned().collect())
}

/// Π over internal edges of the reciprocal channel invariant.
pub fn tree_value(tree: &FeynmanTree, kin: &KinematicPoint) -> Result<BigRational, FeynError> {
    let mut out = BigRational::from_integer(BigInt::from(1));
    for &mask in &tree.channels {
        let inv = kin.channel_sum(mask);
        if inv.is_zero() {
            return Err(FeynError::DegenerateChannel(mask_labels(mask)));
        }
        out /= inv;
    }
    Ok(out)
}

/// Unsigned partial amplitude: Σ over diagrams planar in both orderings of
/// the product of reciprocal channel invariants; zero when no diagram is
/// shared.
pub fn partial_amplitude_unsigned(
    alpha: &CycleOrder,
    beta: &CycleOrder,
    kin: &KinematicPoint,
) -> Result<BigRational, FeynError> {
    let mut total = BigRational::zero();
    for tree in common_trees(alpha, beta)? {
        total += tree_value(&tree, kin)?;
    }
    Ok(total)
}

/// Do the two orderings share at least one planar diagram?
pub fn shares_diagram(alpha: &CycleOrder, beta: &CycleOrder) -> Result<bool, FeynError> {
    Ok(!common_trees(alpha, beta)?.is_empty())
}

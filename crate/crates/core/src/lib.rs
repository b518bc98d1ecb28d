//! Compatible cycles of 2-regular graphs and the scattering-equation pairing.
//!
//! A 2-regular loopless multigraph `G` on `n` labelled vertices is a disjoint
//! union of cycles (a double edge counts as a 2-cycle, a "bubble"). A
//! hamiltonian cycle `C` is *compatible* with `G` when the 4-regular union
//! `G ∪ C` splits into two hamiltonian cycles. This crate provides
//!
//! * [`graphs`] — the combinatorial types (multigraphs, matchings, canonical
//!   cycle orders) and brute-force compatibility oracles,
//! * [`compat`] — constructive generators for compatible cycles from matching
//!   decompositions and bandaging, plus an exhaustive enumerator,
//! * [`counting`] — exact counts: signed Hultman numbers, the all-bubbles
//!   compatible-cycle count, Schröder–Hipparchus numbers, orthogonal-set sizes,
//! * [`feyn`] — exact partial amplitudes over rational kinematics by planar
//!   trivalent tree enumeration,
//! * [`chy`] — a numerical scattering-equation solver and the bilinear pairing
//!   of 2-regular graphs over its solutions,
//! * [`expand`] — expansion of graph vectors in cycle bases, amplitude
//!   reconstruction, and numerical rank / matroid probes.

pub mod chy;
pub mod compat;
pub mod counting;
pub mod expand;
pub mod feyn;
pub mod graphs;

pub use graphs::{CycleOrder, Multigraph, PerfectMatching, TwoRegularGraph};

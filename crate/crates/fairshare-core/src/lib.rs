//! Fair division of divisible, non-transferable commodities.
//!
//! N players split K divisible goods. Utilities are additive (a fraction of
//! a good is worth that fraction of its value to you) and non-transferable
//! (your utility units are not mine). The crate offers two axiomatic
//! answers to "what is a fair split", both driven by a small dense LP core:
//!
//! - the discrete Raiffa solution: repeatedly move the disagreement point to
//!   the midpoint between it and each player's ideal point, until the gap to
//!   the Pareto frontier is below a tolerance;
//! - the Aumann solution: treat the players' negotiable surpluses as
//!   bankruptcy claims and award them by the Talmud rule (constrained equal
//!   awards below half the total claim, constrained equal losses above),
//!   water-filling against the feasible set.
//!
//! Modules:
//! - [`lp`]: dense two-phase simplex, the only optimizer used anywhere.
//! - [`bargaining`]: single-commodity bargaining sets as half-space
//!   intersections; ideal points, midpoints, the Raiffa iteration.
//! - [`bankruptcy`]: contested-garment and Talmud rules; the Aumann
//!   bargaining solution over a half-space set.
//! - [`multi_commodity`]: the multi-commodity Raiffa and Aumann solvers over
//!   allocation matrices, plus a two-player fast path.
//! - [`oracle`]: independent brute-force verifiers (Pareto grid search,
//!   pairwise consistency, frontier sampling, optimality structure checks).
//! - [`registry`]: name-keyed strategy tables the CLI dispatches through.

pub mod bankruptcy;
pub mod bargaining;
pub mod lp;
pub mod multi_commodity;
pub mod oracle;
pub mod registry;

mod search;

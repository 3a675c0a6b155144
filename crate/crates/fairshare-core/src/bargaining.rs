//! Single-commodity bargaining over a convex feasible set of utility
//! vectors, given as an intersection of half-spaces.
//!
//! The set is compact and convex; each player has a disagreement utility
//! they can guarantee alone. The stepwise solution repeatedly computes each
//! player's ideal point (the best they can get with everyone else pinned at
//! the current disagreement point), moves the disagreement point to the
//! midpoint rule combination, and stops once nobody's ideal exceeds the
//! current point by more than a tolerance.

use crate::lp::{self, LinearProgram, LpError, LpStatus, Relation};
use thiserror::Error;

/// Default limit on midpoint steps; geometric contraction means any sane
/// tolerance is reached far earlier.
pub const DEFAULT_STEP_CAP: usize = 200;

/// Membership slack for points tested against the half-space system.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// One linear inequality `normal . x <= offset`.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset }
    }
}

/// Convex set of jointly achievable utility vectors, `{x : A x <= b}`
/// intersected with `x_n >= 0` on axes where nonnegativity is enabled.
/// Construction verifies the set is bounded above in every coordinate and
/// caches those maxima.
#[derive(Debug, Clone)]
pub struct BargainingSet {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    nonneg: Vec<bool>,
    axis_max: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DisagreementPoint(pub Vec<f64>);

#[derive(Debug, Clone)]
pub struct IdealVector(pub Vec<f64>);

#[derive(Debug, Clone)]
pub struct RaiffaStep {
    pub step: usize,
    pub midpoint: Vec<f64>,
    pub ideal: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Default)]
pub struct RaiffaTrace {
    pub steps: Vec<RaiffaStep>,
}

#[derive(Debug, Error)]
pub enum BargainError {
    #[error("axis {0} is unbounded above; bargaining sets must be compact")]
    UnboundedAxis(usize),
    #[error("the half-space system has no feasible point")]
    EmptySet,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("disagreement point lies outside the set")]
    DisagreementOutside,
    #[error("no convergence within {steps} steps (residual {residual})")]
    NoConvergence {
        steps: usize,
        residual: f64,
        trace: RaiffaTrace,
    },
    #[error("ideal-point solve failed: {0}")]
    SolveFailed(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl BargainingSet {
    /// Builds a set with nonnegativity on every axis.
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, BargainError> {
        Self::with_axis_bounds(dim, halfspaces, vec![true; dim])
    }

    /// Builds a set with nonnegativity enabled per axis; axes with the flag
    /// off are only constrained by the half-spaces.
    pub fn with_axis_bounds(
        dim: usize,
        halfspaces: Vec<Halfspace>,
        nonneg: Vec<bool>,
    ) -> Result<Self, BargainError> {
        if dim == 0 {
            return Err(BargainError::Dimension("set dimension is zero".into()));
        }
        if nonneg.len() != dim {
            return Err(BargainError::Dimension(format!(
                "{} nonnegativity flags for dimension {dim}",
                nonneg.len()
            )));
        }
        for (i, h) in halfspaces.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(BargainError::Dimension(format!(
                    "half-space {i} has {} coefficients for dimension {dim}",
                    h.normal.len()
                )));
            }
            if h.normal.iter().any(|a| !a.is_finite()) || !h.offset.is_finite() {
                return Err(BargainError::Dimension(format!(
                    "half-space {i} has a non-finite entry"
                )));
            }
        }
        let set = BargainingSet {
            dim,
            halfspaces,
            nonneg,
            axis_max: Vec::new(),
        };
        let mut axis_max = Vec::with_capacity(dim);
        for n in 0..dim {
            let mut objective = vec![0.0; dim];
            objective[n] = 1.0;
            let solution = lp::solve(&set.lp_over_set(objective))?;
            match solution.status {
                LpStatus::Optimal => axis_max.push(solution.objective_value.unwrap()),
                LpStatus::Unbounded => return Err(BargainError::UnboundedAxis(n)),
                LpStatus::Infeasible => return Err(BargainError::EmptySet),
            }
        }
        Ok(BargainingSet { axis_max, ..set })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Per-axis maxima over the whole set, computed at construction.
    pub fn axis_max(&self) -> &[f64] {
        &self.axis_max
    }

    /// Direct half-space membership test (no LP needed for an explicit
    /// intersection representation).
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        for (n, &v) in x.iter().enumerate() {
            if self.nonneg[n] && v < -MEMBERSHIP_TOL {
                return false;
            }
        }
        self.halfspaces.iter().all(|h| {
            let lhs: f64 = h.normal.iter().zip(x).map(|(a, v)| a * v).sum();
            lhs <= h.offset + MEMBERSHIP_TOL
        })
    }

    /// An LP whose feasible region is this set, ready for an objective.
    fn lp_over_set(&self, objective: Vec<f64>) -> LinearProgram {
        let mut lp = LinearProgram::maximize(objective);
        for h in &self.halfspaces {
            lp.constrain(h.normal.clone(), Relation::Le, h.offset);
        }
        for n in 0..self.dim {
            if !self.nonneg[n] {
                lp.lower[n] = f64::NEG_INFINITY;
            }
        }
        lp
    }
}

/// Best utility each player can reach while everyone else sits at the
/// disagreement point: one LP per player with the other coordinates pinned.
pub fn ideal_point(
    set: &BargainingSet,
    d: &DisagreementPoint,
) -> Result<IdealVector, BargainError> {
    if d.0.len() != set.dim() {
        return Err(BargainError::Dimension(format!(
            "disagreement point has {} coordinates for dimension {}",
            d.0.len(),
            set.dim()
        )));
    }
    if !set.contains(&d.0) {
        return Err(BargainError::DisagreementOutside);
    }
    let mut ideal = Vec::with_capacity(set.dim());
    for n in 0..set.dim() {
        let mut objective = vec![0.0; set.dim()];
        objective[n] = 1.0;
        let mut lp = set.lp_over_set(objective);
        for (p, &dp) in d.0.iter().enumerate() {
            if p != n {
                let mut pin = vec![0.0; set.dim()];
                pin[p] = 1.0;
                lp.constrain(pin, Relation::Eq, dp);
            }
        }
        let solution = lp::solve(&lp)?;
        match solution.status {
            LpStatus::Optimal => ideal.push(solution.objective_value.unwrap()),
            status => {
                return Err(BargainError::SolveFailed(format!(
                    "pinned maximization for player {n} returned {status:?}"
                )))
            }
        }
    }
    Ok(IdealVector(ideal))
}

/// Midpoint rule: one part ideal, N-1 parts status quo.
pub fn midpoint(ideal: &IdealVector, d: &DisagreementPoint) -> Vec<f64> {
    let n = ideal.0.len() as f64;
    ideal
        .0
        .iter()
        .zip(&d.0)
        .map(|(i, dn)| i / n + (1.0 - 1.0 / n) * dn)
        .collect()
}

/// Upper bound on the distance from `m` to the Pareto frontier: the largest
/// per-player gap to the ideal point computed at `m`. A true frontier
/// projection over a polytope boundary is a non-convex problem; this bound
/// is cheap and certifies the same termination guarantee.
pub fn frontier_residual(set: &BargainingSet, m: &[f64], ideal: &IdealVector) -> f64 {
    debug_assert!(set.contains(m), "residual queried outside the set");
    ideal
        .0
        .iter()
        .zip(m)
        .map(|(i, v)| (i - v).abs())
        .fold(0.0, f64::max)
}

pub fn raiffa_solve(
    set: &BargainingSet,
    d: &DisagreementPoint,
    epsilon: f64,
) -> Result<(Vec<f64>, RaiffaTrace), BargainError> {
    raiffa_solve_with_cap(set, d, epsilon, DEFAULT_STEP_CAP)
}

/// Runs the midpoint iteration from `d` until the residual drops to
/// `epsilon`, recording every step. Also stops if the midpoint fixes (the
/// solution landed on a face rather than an edge intersection).
pub fn raiffa_solve_with_cap(
    set: &BargainingSet,
    d: &DisagreementPoint,
    epsilon: f64,
    step_cap: usize,
) -> Result<(Vec<f64>, RaiffaTrace), BargainError> {
    let mut m = d.0.clone();
    let mut ideal = ideal_point(set, d)?;
    let mut residual = frontier_residual(set, &m, &ideal);
    let mut trace = RaiffaTrace::default();

    let mut step = 0;
    while residual > epsilon {
        if step == step_cap {
            return Err(BargainError::NoConvergence {
                steps: step_cap,
                residual,
                trace,
            });
        }
        step += 1;
        let next = midpoint(&ideal, &DisagreementPoint(m.clone()));
        let moved = next
            .iter()
            .zip(&m)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        m = next;
        ideal = ideal_point(set, &DisagreementPoint(m.clone()))?;
        residual = frontier_residual(set, &m, &ideal);
        trace.steps.push(RaiffaStep {
            step,
            midpoint: m.clone(),
            ideal: ideal.0.clone(),
            residual,
        });
        if moved <= 1e-12 {
            break;
        }
    }
    Ok((m, trace))
}

//! Division of divisible commodities among players with additive utilities.
//!
//! An allocation matrix assigns each player a fraction of each commodity.
//! The achievable utility vectors form a convex set, and the two
//! single-commodity solutions lift to it: the stepwise midpoint process
//! re-solves one pinned maximization per player each round, and the
//! claims-based selection searches the water level of the capped
//! equal-awards or equal-losses structure with feasibility probes. Both
//! run on linear programs over the allocation variables.

use crate::bankruptcy::AppliedRule;
use crate::bargaining::DEFAULT_STEP_CAP;
use crate::lp::{self, Constraint, Feasibility, LinearProgram, LpError, LpStatus, Relation};
use thiserror::Error;

/// Allocation entries below this are treated as "not sharing" a commodity.
pub const DEFAULT_SHARE_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum MultiError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("midpoint utilities for player {player} are not jointly achievable")]
    InconsistentMidpoint { player: usize },
    #[error("no convergence within {step_cap} steps (residual {residual})")]
    NoConvergence { step_cap: usize, residual: f64 },
    #[error("target {target} outside [0, {max}]")]
    BadTarget { target: f64, max: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Players, their per-commodity utilities, the utility each can secure
/// alone, and the convergence tolerance for the stepwise method.
#[derive(Debug, Clone)]
pub struct MultiProblem {
    players: usize,
    commodities: usize,
    utilities: Vec<Vec<f64>>,
    disagreement: Vec<f64>,
    epsilon: f64,
}

impl MultiProblem {
    pub fn new(
        utilities: Vec<Vec<f64>>,
        disagreement: Vec<f64>,
        epsilon: f64,
    ) -> Result<Self, MultiError> {
        let players = utilities.len();
        if players == 0 {
            return Err(MultiError::BadInput("no players".into()));
        }
        let commodities = utilities[0].len();
        if commodities == 0 {
            return Err(MultiError::BadInput("no commodities".into()));
        }
        for (n, row) in utilities.iter().enumerate() {
            if row.len() != commodities {
                return Err(MultiError::BadInput(format!(
                    "utility row {n} has {} entries, expected {commodities}",
                    row.len()
                )));
            }
            if row.iter().any(|u| !u.is_finite() || *u < 0.0) {
                return Err(MultiError::BadInput(format!(
                    "utility row {n} has a negative or non-finite entry"
                )));
            }
        }
        if disagreement.len() != players {
            return Err(MultiError::BadInput(format!(
                "{} disagreement utilities for {players} players",
                disagreement.len()
            )));
        }
        if disagreement.iter().any(|d| !d.is_finite()) {
            return Err(MultiError::BadInput(
                "disagreement utilities must be finite".into(),
            ));
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(MultiError::BadInput(format!(
                "tolerance must be positive, got {epsilon}"
            )));
        }
        Ok(MultiProblem {
            players,
            commodities,
            utilities,
            disagreement,
            epsilon,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn commodities(&self) -> usize {
        self.commodities
    }

    pub fn utilities(&self) -> &[Vec<f64>] {
        &self.utilities
    }

    pub fn disagreement(&self) -> &[f64] {
        &self.disagreement
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Players whose disagreement utility already meets or beats an equal
    /// split of everything. A solution still exists for many such problems,
    /// but the guarantee that one does no longer applies.
    pub fn disagreement_above_equal_split(&self) -> Vec<usize> {
        let n = self.players as f64;
        (0..self.players)
            .filter(|&p| {
                let row_sum: f64 = self.utilities[p].iter().sum();
                self.disagreement[p] >= row_sum / n - 1e-12
            })
            .collect()
    }
}

/// Fraction of each commodity held by each player. Rows are players.
#[derive(Debug, Clone)]
pub struct AllocationMatrix {
    rows: Vec<Vec<f64>>,
}

impl AllocationMatrix {
    /// Accepts entries within 1e-9 of the [0, 1] range (solver dust) and
    /// clamps them; anything further out or an overfull column is an error.
    pub fn new(mut rows: Vec<Vec<f64>>) -> Result<Self, MultiError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(MultiError::BadInput("empty allocation".into()));
        }
        let k = rows[0].len();
        for row in &mut rows {
            if row.len() != k {
                return Err(MultiError::BadInput("ragged allocation".into()));
            }
            for a in row.iter_mut() {
                if *a > -1e-9 && *a < 0.0 {
                    *a = 0.0;
                }
                if *a > 1.0 && *a < 1.0 + 1e-9 {
                    *a = 1.0;
                }
                if !a.is_finite() || *a < 0.0 || *a > 1.0 {
                    return Err(MultiError::BadInput(format!(
                        "allocation entry {a} outside [0, 1]"
                    )));
                }
            }
        }
        for col in 0..k {
            let sum: f64 = rows.iter().map(|r| r[col]).sum();
            if sum > 1.0 + 1e-9 {
                return Err(MultiError::BadInput(format!(
                    "commodity {col} allocated {sum} times over"
                )));
            }
        }
        Ok(AllocationMatrix { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn entry(&self, player: usize, commodity: usize) -> f64 {
        self.rows[player][commodity]
    }

    pub fn column_sum(&self, commodity: usize) -> f64 {
        self.rows.iter().map(|r| r[commodity]).sum()
    }

    /// Utility each player draws from this allocation under `valuations`.
    pub fn utility_totals(&self, valuations: &[Vec<f64>]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(valuations)
            .map(|(row, vals)| row.iter().zip(vals).map(|(a, u)| a * u).sum())
            .collect()
    }
}

/// Entrywise average, used to merge the per-player matrices of one step.
pub fn average_allocations(mats: &[AllocationMatrix]) -> Result<AllocationMatrix, MultiError> {
    if mats.is_empty() {
        return Err(MultiError::BadInput("nothing to average".into()));
    }
    let shape = (mats[0].rows.len(), mats[0].rows[0].len());
    let mut rows = vec![vec![0.0; shape.1]; shape.0];
    for m in mats {
        if (m.rows.len(), m.rows[0].len()) != shape {
            return Err(MultiError::BadInput("allocation shapes differ".into()));
        }
        for (acc, row) in rows.iter_mut().zip(&m.rows) {
            for (a, b) in acc.iter_mut().zip(row) {
                *a += b;
            }
        }
    }
    let count = mats.len() as f64;
    for row in &mut rows {
        for a in row.iter_mut() {
            *a /= count;
        }
    }
    AllocationMatrix::new(rows)
}

/// How many commodities are held by two or more players above `tol`.
pub fn shared_commodity_count(allocation: &AllocationMatrix, tol: f64) -> usize {
    let k = allocation.rows[0].len();
    (0..k)
        .filter(|&col| allocation.rows.iter().filter(|r| r[col] > tol).count() >= 2)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Raiffa,
    Aumann,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Raiffa => "raiffa",
            Method::Aumann => "aumann",
        }
    }
}

/// One round of the stepwise method: the midpoint it moved to, the pinned
/// maxima seen from there, and the matrices realizing them.
#[derive(Debug, Clone)]
pub struct RaiffaMultiStep {
    pub step: usize,
    pub midpoint: Vec<f64>,
    pub ideals: Vec<f64>,
    pub residual: f64,
    pub per_player: Vec<AllocationMatrix>,
}

#[derive(Debug, Clone)]
pub enum MultiTrace {
    Raiffa(Vec<RaiffaMultiStep>),
    Aumann {
        rule: AppliedRule,
        pivot: usize,
        level: f64,
    },
}

#[derive(Debug, Clone)]
pub struct MultiSolution {
    pub method: Method,
    pub utilities: Vec<f64>,
    pub allocation: AllocationMatrix,
    pub trace: MultiTrace,
}

/// Row of coefficients selecting player `n`'s utility, padded to
/// `extra` trailing variables.
fn utility_coeffs(problem: &MultiProblem, player: usize, extra: usize) -> Vec<f64> {
    let k = problem.commodities;
    let mut coeffs = vec![0.0; problem.players * k + extra];
    for (c, u) in coeffs[player * k..(player + 1) * k]
        .iter_mut()
        .zip(&problem.utilities[player])
    {
        *c = *u;
    }
    coeffs
}

/// One row per commodity tying its fractions across players to 1.
fn column_constraints(problem: &MultiProblem, relation: Relation, extra: usize) -> Vec<Constraint> {
    let k = problem.commodities;
    (0..k)
        .map(|col| {
            let mut coeffs = vec![0.0; problem.players * k + extra];
            for p in 0..problem.players {
                coeffs[p * k + col] = 1.0;
            }
            Constraint::new(coeffs, relation, 1.0)
        })
        .collect()
}

/// Whether some allocation grants every player exactly `target` utility.
/// Commodities may be left unallocated, so this is membership of `target`
/// in the achievable set.
pub fn achievable(problem: &MultiProblem, target: &[f64]) -> Result<bool, MultiError> {
    if target.len() != problem.players {
        return Err(MultiError::BadInput(format!(
            "{} target utilities for {} players",
            target.len(),
            problem.players
        )));
    }
    let mut rows = column_constraints(problem, Relation::Le, 0);
    for (n, &t) in target.iter().enumerate() {
        rows.push(Constraint::new(
            utility_coeffs(problem, n, 0),
            Relation::Eq,
            t,
        ));
    }
    match lp::solve_feasibility(problem.players * problem.commodities, &rows)? {
        Feasibility::Feasible(_) => Ok(true),
        Feasibility::Infeasible => Ok(false),
    }
}

fn matrix_from_values(problem: &MultiProblem, values: &[f64]) -> Result<AllocationMatrix, MultiError> {
    let k = problem.commodities;
    AllocationMatrix::new(
        (0..problem.players)
            .map(|p| values[p * k..(p + 1) * k].to_vec())
            .collect(),
    )
}

/// Best utility `player` can reach while every other player is held exactly
/// at their midpoint utility. Every commodity is fully handed out: whatever
/// pinned players cannot absorb flows to `player` or to players who value
/// it at zero, so the optimum is unchanged and the matrix is complete.
pub fn ideal_allocation(
    problem: &MultiProblem,
    player: usize,
    midpoint: &[f64],
) -> Result<(f64, AllocationMatrix), MultiError> {
    if player >= problem.players || midpoint.len() != problem.players {
        return Err(MultiError::BadInput("player or midpoint out of shape".into()));
    }
    let mut lp = LinearProgram::maximize(utility_coeffs(problem, player, 0));
    for c in column_constraints(problem, Relation::Eq, 0) {
        lp.constraints.push(c);
    }
    for (p, &m) in midpoint.iter().enumerate() {
        let relation = if p == player { Relation::Ge } else { Relation::Eq };
        lp.constraints
            .push(Constraint::new(utility_coeffs(problem, p, 0), relation, m));
    }
    let solution = lp::solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => {
            let values = solution.values.unwrap();
            Ok((
                solution.objective_value.unwrap(),
                matrix_from_values(problem, &values)?,
            ))
        }
        LpStatus::Infeasible => Err(MultiError::InconsistentMidpoint { player }),
        LpStatus::Unbounded => Err(MultiError::Internal(
            "bounded allocation problem reported unbounded".into(),
        )),
    }
}

/// Pinned maxima for all players at once, with their matrices.
pub fn ideal_profile(
    problem: &MultiProblem,
    midpoint: &[f64],
) -> Result<(Vec<f64>, Vec<AllocationMatrix>), MultiError> {
    let mut ideals = Vec::with_capacity(problem.players);
    let mut mats = Vec::with_capacity(problem.players);
    for n in 0..problem.players {
        let (ideal, mat) = ideal_allocation(problem, n, midpoint)?;
        ideals.push(ideal);
        mats.push(mat);
    }
    Ok((ideals, mats))
}

fn check_disagreement_achievable(problem: &MultiProblem) -> Result<(), MultiError> {
    if !achievable(problem, &problem.disagreement)? {
        return Err(MultiError::BadInput(
            "disagreement utilities are not jointly achievable".into(),
        ));
    }
    Ok(())
}

pub fn raiffa_multi(problem: &MultiProblem) -> Result<MultiSolution, MultiError> {
    raiffa_multi_with_cap(problem, DEFAULT_STEP_CAP)
}

/// Stepwise midpoint process over the achievable utility set. Each round
/// computes every player's pinned maximum at the current point, moves to
/// one part maximum plus N-1 parts current, and stops when no player's
/// maximum exceeds the point by more than the problem tolerance. The final
/// matrix is the average of the round's per-player matrices; its utilities
/// are exactly the midpoint the process would move to next.
pub fn raiffa_multi_with_cap(
    problem: &MultiProblem,
    step_cap: usize,
) -> Result<MultiSolution, MultiError> {
    check_disagreement_achievable(problem)?;
    let n = problem.players as f64;
    let mut m = problem.disagreement.to_vec();
    let (mut ideals, mut mats) = ideal_profile(problem, &m)?;
    let residual_of = |ideals: &[f64], m: &[f64]| {
        ideals
            .iter()
            .zip(m)
            .map(|(i, v)| (i - v).abs())
            .fold(0.0, f64::max)
    };
    let mut residual = residual_of(&ideals, &m);
    let mut steps = Vec::new();
    let mut step = 0;

    while residual > problem.epsilon {
        if step == step_cap {
            return Err(MultiError::NoConvergence { step_cap, residual });
        }
        step += 1;
        let next: Vec<f64> = ideals
            .iter()
            .zip(&m)
            .map(|(i, v)| i / n + (1.0 - 1.0 / n) * v)
            .collect();
        let moved = next
            .iter()
            .zip(&m)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        m = next;
        let (i2, m2) = ideal_profile(problem, &m)?;
        ideals = i2;
        mats = m2;
        residual = residual_of(&ideals, &m);
        steps.push(RaiffaMultiStep {
            step,
            midpoint: m.clone(),
            ideals: ideals.clone(),
            residual,
            per_player: mats.clone(),
        });
        if moved <= 1e-12 {
            break;
        }
    }

    let allocation = average_allocations(&mats)?;
    let utilities = allocation.utility_totals(&problem.utilities);
    Ok(MultiSolution {
        method: Method::Raiffa,
        utilities,
        allocation,
        trace: MultiTrace::Raiffa(steps),
    })
}

fn probe_level(
    mut lo: f64,
    mut hi: f64,
    feasible: impl Fn(f64) -> Result<bool, MultiError>,
) -> Result<f64, MultiError> {
    // feasible at lo, infeasible at hi; returns the highest level confirmed
    // feasible
    for _ in 0..100 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn smallest_count(
    mut lo: usize,
    mut hi: usize,
    pred: impl Fn(usize) -> Result<bool, MultiError>,
) -> Result<usize, MultiError> {
    // pred is monotone in the count and holds at hi
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Solves for the full allocation on the selected segment: pinned players
/// get their capped utility exactly, flexible players get base plus a
/// common offset, and the offset is pushed as high as the commodities
/// allow. A basic optimum spends one basis slot on the offset, so at most
/// K + N - 1 allocation entries are positive and at most N - 1 commodities
/// end up shared.
fn frontier_allocation(
    problem: &MultiProblem,
    pinned: &[(usize, f64)],
    flexible: &[(usize, f64)],
    offset_lo: f64,
    offset_hi: f64,
) -> Result<(AllocationMatrix, f64), MultiError> {
    let nk = problem.players * problem.commodities;
    let mut objective = vec![0.0; nk + 1];
    objective[nk] = 1.0;
    let mut lp = LinearProgram::maximize(objective);
    lp.lower[nk] = offset_lo;
    lp.upper[nk] = Some(offset_hi);
    for c in column_constraints(problem, Relation::Eq, 1) {
        lp.constraints.push(c);
    }
    for &(p, value) in pinned {
        lp.constraints
            .push(Constraint::new(utility_coeffs(problem, p, 1), Relation::Eq, value));
    }
    for &(p, base) in flexible {
        let mut coeffs = utility_coeffs(problem, p, 1);
        coeffs[nk] = -1.0;
        lp.constraints.push(Constraint::new(coeffs, Relation::Eq, base));
    }
    let solution = lp::solve(&lp)?;
    if solution.status == LpStatus::Optimal {
        let values = solution.values.unwrap();
        return Ok((matrix_from_values(problem, &values)?, values[nk]));
    }

    // Numerical fallback: realize the lower end of the segment with slack
    // columns, then dump each leftover onto a player who values it at zero.
    let mut rows = column_constraints(problem, Relation::Le, 0);
    for &(p, value) in pinned {
        rows.push(Constraint::new(utility_coeffs(problem, p, 0), Relation::Eq, value));
    }
    for &(p, base) in flexible {
        rows.push(Constraint::new(
            utility_coeffs(problem, p, 0),
            Relation::Eq,
            base + offset_lo,
        ));
    }
    let witness = match lp::solve_feasibility(nk, &rows)? {
        Feasibility::Feasible(values) => values,
        Feasibility::Infeasible => {
            return Err(MultiError::Internal(
                "confirmed level rejected by the allocation solve".into(),
            ))
        }
    };
    let mut mat = matrix_from_values(problem, &witness)?;
    for col in 0..problem.commodities {
        let mut slack = 1.0 - mat.column_sum(col);
        if slack <= 0.0 {
            continue;
        }
        for p in 0..problem.players {
            if problem.utilities[p][col] == 0.0 {
                let room = 1.0 - mat.rows[p][col];
                let take = slack.min(room);
                mat.rows[p][col] += take;
                slack -= take;
                if slack <= 1e-15 {
                    break;
                }
            }
        }
        if slack > 1e-9 {
            return Err(MultiError::Internal(format!(
                "commodity {col} cannot be fully allocated at the solution level"
            )));
        }
    }
    Ok((mat, offset_lo))
}

/// Claims-based selection over the achievable set. Claims are the pinned
/// maxima minus the disagreement utilities; whether the half-claims vector
/// is achievable decides between capping losses or capping awards, and the
/// pivot rank plus water level are found by bisection with feasibility
/// probes. The reported utilities come from the final matrix itself.
pub fn aumann_multi(problem: &MultiProblem) -> Result<MultiSolution, MultiError> {
    check_disagreement_achievable(problem)?;
    let n = problem.players;
    let d = &problem.disagreement;
    let (ideals, _) = ideal_profile(problem, d)?;
    let claims: Vec<f64> = ideals.iter().zip(d).map(|(i, dn)| i - dn).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| claims[a].partial_cmp(&claims[b]).unwrap().then(a.cmp(&b)));
    let cs: Vec<f64> = order.iter().map(|&i| claims[i]).collect();
    let dr: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let ir: Vec<f64> = order.iter().map(|&i| ideals[i]).collect();
    let hr: Vec<f64> = (0..n).map(|r| dr[r] + cs[r] / 2.0).collect();

    let scatter = |xr: &[f64]| {
        let mut x = vec![0.0; n];
        for (r, &i) in order.iter().enumerate() {
            x[i] = xr[r];
        }
        x
    };
    let feasible = |xr: &[f64]| achievable(problem, &scatter(xr));

    let (rule, pivot, pinned, flexible, lo, hi) = if feasible(&hr)? {
        // losses side: the first p ranks cap at half-claims
        let at_pivot = |p: usize| -> Vec<f64> {
            (0..n)
                .map(|r| if r < p { hr[r] } else { ir[r] - cs[p - 1] / 2.0 })
                .collect()
        };
        let p = smallest_count(1, n, |p| feasible(&at_pivot(p)))?;
        let hi = if p == 1 {
            cs[0] / 2.0
        } else {
            (cs[p - 1] - cs[p - 2]) / 2.0
        };
        let pinned: Vec<(usize, f64)> = (0..p - 1).map(|r| (order[r], hr[r])).collect();
        let flexible: Vec<(usize, f64)> = (p - 1..n)
            .map(|r| (order[r], ir[r] - cs[p - 1] / 2.0))
            .collect();
        (AppliedRule::Cel, p, pinned, flexible, 0.0, hi)
    } else {
        // awards side: p is the first rank count whose capped point overshoots
        let at_pivot = |p: usize| -> Vec<f64> {
            (0..n)
                .map(|r| if r < p { hr[r] } else { dr[r] + cs[p - 1] / 2.0 })
                .collect()
        };
        let p = smallest_count(1, n, |p| Ok(!feasible(&at_pivot(p))?))?;
        if p == 1 {
            let flexible: Vec<(usize, f64)> = (0..n).map(|r| (order[r], dr[r])).collect();
            (AppliedRule::Cea, p, Vec::new(), flexible, 0.0, cs[0] / 2.0)
        } else {
            let lo = (cs[p - 2] - cs[p - 1]) / 2.0;
            let pinned: Vec<(usize, f64)> = (0..p - 1).map(|r| (order[r], hr[r])).collect();
            let flexible: Vec<(usize, f64)> = (p - 1..n)
                .map(|r| (order[r], dr[r] + cs[p - 1] / 2.0))
                .collect();
            (AppliedRule::Cea, p, pinned, flexible, lo, 0.0)
        }
    };

    // keep a confirmed-feasible lower end for the numerical fallback
    let along = |y: f64| -> Vec<f64> {
        let mut xr = vec![0.0; n];
        for &(player, value) in &pinned {
            xr[order.iter().position(|&i| i == player).unwrap()] = value;
        }
        for &(player, base) in &flexible {
            xr[order.iter().position(|&i| i == player).unwrap()] = base + y;
        }
        xr
    };
    let confirmed_lo = if feasible(&along(hi))? {
        hi
    } else {
        probe_level(lo, hi, |y| feasible(&along(y)))?
    };

    let (allocation, level) = frontier_allocation(problem, &pinned, &flexible, confirmed_lo, hi)?;
    let utilities = allocation.utility_totals(&problem.utilities);
    Ok(MultiSolution {
        method: Method::Aumann,
        utilities,
        allocation,
        trace: MultiTrace::Aumann { rule, pivot, level },
    })
}

/// Two-player pinned maximum without linear programming. Commodities are
/// ordered so the pinned player consumes utility where the other player
/// loses least per unit; walking that order until `target` is met splits
/// at most one commodity, and the rest go to the other player.
pub fn two_player_ideal(
    problem: &MultiProblem,
    pinned: usize,
    target: f64,
) -> Result<(f64, AllocationMatrix), MultiError> {
    if problem.players != 2 || pinned > 1 {
        return Err(MultiError::BadInput(
            "fast pinned maximum needs exactly two players".into(),
        ));
    }
    let other = 1 - pinned;
    let up = &problem.utilities[pinned];
    let uo = &problem.utilities[other];
    let max: f64 = up.iter().sum();
    if !(0.0..=max + 1e-9).contains(&target) {
        return Err(MultiError::BadTarget { target, max });
    }
    let target = target.min(max);

    // ascending in uo/up, by cross-multiplication; zero-up commodities sink
    // to the end, ties stay in index order
    let mut order: Vec<usize> = (0..problem.commodities).collect();
    order.sort_by(|&a, &b| {
        (uo[a] * up[b])
            .partial_cmp(&(uo[b] * up[a]))
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut rows = vec![vec![0.0; problem.commodities]; 2];
    let mut remaining = target;
    for &k in &order {
        if remaining > 0.0 && up[k] > 0.0 {
            let take = (remaining / up[k]).min(1.0);
            rows[pinned][k] = take;
            remaining -= take * up[k];
            if remaining < 0.0 {
                remaining = 0.0;
            }
        }
        rows[other][k] = 1.0 - rows[pinned][k];
    }
    if remaining > 1e-9 {
        return Err(MultiError::BadTarget { target, max });
    }
    let allocation = AllocationMatrix::new(rows)?;
    let ideal = allocation.rows[other]
        .iter()
        .zip(uo)
        .map(|(a, u)| a * u)
        .sum();
    Ok((ideal, allocation))
}

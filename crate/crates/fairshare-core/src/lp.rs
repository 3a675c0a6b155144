//! Dense two-phase simplex.
//!
//! Every optimization in the crate funnels through here: restricted-ideal
//! LPs, set-membership probes, and the final allocation solves. Problems are
//! desk-scale (tens of rows and columns), so a dense tableau wins over any
//! sparse cleverness, and Bland's rule makes pivoting cycle-free and
//! deterministic: identical inputs yield identical solutions, basis included.

use thiserror::Error;

/// Absolute tolerance on row residuals and on the phase-1 optimum.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reduced-cost threshold below which a column no longer improves.
const COST_TOL: f64 = 1e-9;
/// Smallest acceptable pivot magnitude.
const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// A maximization problem over real variables with per-variable bounds.
///
/// Lower bounds default to 0. A lower bound of `f64::NEG_INFINITY` marks the
/// variable as free downward (handled internally by a sign split).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![None; n],
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of [`solve`]. `values` and `objective_value` are present exactly
/// when the status is `Optimal`; `basis` lists the basic columns of the
/// internal standard form (sorted), which pins down the vertex reached.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    pub basis: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    BadShape(String),
    #[error("simplex stalled: pivot limit {0} exceeded before reaching an optimum")]
    Stalled(usize),
}

#[derive(Debug, Clone)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible,
}

/// Solves the constraint system with a zero objective and reports a witness
/// point if one exists. Variables are nonnegative, as everywhere in the
/// crate's allocation systems.
pub fn solve_feasibility(
    num_vars: usize,
    constraints: &[Constraint],
) -> Result<Feasibility, LpError> {
    let mut lp = LinearProgram::maximize(vec![0.0; num_vars]);
    lp.constraints = constraints.to_vec();
    let solution = solve(&lp)?;
    Ok(match solution.status {
        LpStatus::Optimal => Feasibility::Feasible(solution.values.unwrap()),
        LpStatus::Infeasible => Feasibility::Infeasible,
        // A zero objective cannot improve along any ray.
        LpStatus::Unbounded => unreachable!("zero objective reported unbounded"),
    })
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_with_pivot_cap(lp, default_pivot_cap(lp))
}

/// Default pivot budget: generous for desk-scale problems, small enough to
/// surface a genuine stall quickly.
pub fn default_pivot_cap(lp: &LinearProgram) -> usize {
    50 * (lp.constraints.len() + lp.objective.len() + 1)
}

pub fn solve_with_pivot_cap(lp: &LinearProgram, pivot_cap: usize) -> Result<LpSolution, LpError> {
    validate(lp)?;
    let mut tableau = Tableau::build(lp, pivot_cap);

    if tableau.phase_one()? {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            values: None,
            objective_value: None,
            basis: tableau.sorted_basis(),
        });
    }

    if tableau.phase_two(lp)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: None,
            objective_value: None,
            basis: tableau.sorted_basis(),
        });
    }

    let values = tableau.extract(lp);
    let objective_value = lp
        .objective
        .iter()
        .zip(&values)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values: Some(values),
        objective_value: Some(objective_value),
        basis: tableau.sorted_basis(),
    })
}

fn validate(lp: &LinearProgram) -> Result<(), LpError> {
    let n = lp.objective.len();
    if n == 0 {
        return Err(LpError::BadShape("objective has no variables".into()));
    }
    if lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(LpError::BadShape("objective coefficient is not finite".into()));
    }
    if lp.lower.len() != n || lp.upper.len() != n {
        return Err(LpError::BadShape(format!(
            "bounds cover {} / {} variables, objective has {}",
            lp.lower.len(),
            lp.upper.len(),
            n
        )));
    }
    for (j, (&lo, up)) in lp.lower.iter().zip(&lp.upper).enumerate() {
        if lo.is_nan() || lo == f64::INFINITY {
            return Err(LpError::BadShape(format!("variable {j} has lower bound {lo}")));
        }
        if let Some(hi) = up {
            if !hi.is_finite() {
                return Err(LpError::BadShape(format!("variable {j} has upper bound {hi}")));
            }
            if lo > *hi {
                return Err(LpError::BadShape(format!(
                    "variable {j} has lower bound {lo} above upper bound {hi}"
                )));
            }
        }
    }
    for (i, row) in lp.constraints.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(LpError::BadShape(format!(
                "constraint {i} has {} coefficients, objective has {n}",
                row.coeffs.len()
            )));
        }
        if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
            return Err(LpError::BadShape(format!("constraint {i} has a non-finite entry")));
        }
    }
    Ok(())
}

/// How an original variable maps onto standard-form columns.
#[derive(Clone, Copy)]
enum VarMap {
    /// x = lower + z, with column `col` holding z >= 0.
    Shifted { col: usize, lower: f64 },
    /// Free-downward variable: x = z+ - z-.
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    cost_rhs: f64,
    basis: Vec<usize>,
    var_map: Vec<VarMap>,
    /// Columns >= this index are artificial and may never re-enter in phase 2.
    art_start: usize,
    pivots: usize,
    pivot_cap: usize,
}

enum RunOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram, pivot_cap: usize) -> Tableau {
        let n = lp.objective.len();

        // Assign structural columns, splitting free-downward variables.
        let mut var_map = Vec::with_capacity(n);
        let mut next_col = 0;
        for j in 0..n {
            if lp.lower[j] == f64::NEG_INFINITY {
                var_map.push(VarMap::Split { pos: next_col, neg: next_col + 1 });
                next_col += 2;
            } else {
                var_map.push(VarMap::Shifted { col: next_col, lower: lp.lower[j] });
                next_col += 1;
            }
        }
        let structural = next_col;

        // Rewrite constraints over the shifted columns; upper bounds become
        // extra <= rows in the shifted space.
        let mut std_rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![0.0; structural];
            let mut rhs = c.rhs;
            for (j, &a) in c.coeffs.iter().enumerate() {
                match var_map[j] {
                    VarMap::Shifted { col, lower } => {
                        row[col] += a;
                        rhs -= a * lower;
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] += a;
                        row[neg] -= a;
                    }
                }
            }
            std_rows.push((row, c.relation, rhs));
        }
        for j in 0..n {
            if let Some(hi) = lp.upper[j] {
                let mut row = vec![0.0; structural];
                let rhs = match var_map[j] {
                    VarMap::Shifted { col, lower } => {
                        row[col] = 1.0;
                        hi - lower
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] = 1.0;
                        row[neg] = -1.0;
                        hi
                    }
                };
                std_rows.push((row, Relation::Le, rhs));
            }
        }

        // Normalize to nonnegative right-hand sides, then attach slack,
        // surplus, and artificial columns.
        let m = std_rows.len();
        let mut slack_count = 0;
        let mut art_count = 0;
        for (_, rel, rhs) in std_rows.iter_mut() {
            // flipping the row flips the relation
            if *rhs < 0.0 {
                *rel = match *rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            match *rel {
                Relation::Le => slack_count += 1,
                Relation::Ge => {
                    slack_count += 1;
                    art_count += 1;
                }
                Relation::Eq => art_count += 1,
            }
        }
        let art_start = structural + slack_count;
        let total = art_start + art_count;

        let mut rows = Vec::with_capacity(m);
        let mut rhs_col = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_slack = structural;
        let mut next_art = art_start;
        for (mut row, rel, mut rhs) in std_rows {
            if rhs < 0.0 {
                rhs = -rhs;
                for a in row.iter_mut() {
                    *a = -*a;
                }
            }
            row.resize(total, 0.0);
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
            rhs_col.push(rhs);
        }

        Tableau {
            rows,
            rhs: rhs_col,
            cost: vec![0.0; total],
            cost_rhs: 0.0,
            basis,
            var_map,
            art_start,
            pivots: 0,
            pivot_cap,
        }
    }

    fn num_cols(&self) -> usize {
        self.cost.len()
    }

    /// Loads a minimization cost row and prices out the current basis.
    fn load_cost(&mut self, cost: Vec<f64>) {
        self.cost = cost;
        self.cost_rhs = 0.0;
        for i in 0..self.rows.len() {
            let f = self.cost[self.basis[i]];
            if f != 0.0 {
                for j in 0..self.num_cols() {
                    self.cost[j] -= f * self.rows[i][j];
                }
                self.cost_rhs -= f * self.rhs[i];
            }
        }
    }

    /// Minimization objective value at the current basis.
    fn objective(&self) -> f64 {
        -self.cost_rhs
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for j in 0..self.num_cols() {
            self.rows[r][j] /= p;
        }
        self.rhs[r] /= p;
        self.rows[r][c] = 1.0;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f != 0.0 {
                for j in 0..self.num_cols() {
                    self.rows[i][j] -= f * self.rows[r][j];
                }
                self.rows[i][c] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
                // sweep roundoff dust so the ratio test stays honest
                if self.rhs[i] < 0.0 && self.rhs[i] > -1e-12 {
                    self.rhs[i] = 0.0;
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for j in 0..self.num_cols() {
                self.cost[j] -= f * self.rows[r][j];
            }
            self.cost[c] = 0.0;
            self.cost_rhs -= f * self.rhs[r];
        }
        self.basis[r] = c;
    }

    /// Bland's rule: enter the lowest-index improving column, leave on the
    /// smallest ratio breaking ties toward the lowest basis index.
    fn run(&mut self, enterable: usize) -> Result<RunOutcome, LpError> {
        loop {
            let entering = (0..enterable).find(|&j| self.cost[j] < -COST_TOL);
            let Some(c) = entering else {
                return Ok(RunOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i] / a;
                    let better = match leave {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - 1e-12
                                || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Ok(RunOutcome::Unbounded);
            };
            self.pivots += 1;
            if self.pivots > self.pivot_cap {
                return Err(LpError::Stalled(self.pivot_cap));
            }
            self.pivot(r, c);
        }
    }

    /// Runs phase 1. Returns true when the program is infeasible.
    fn phase_one(&mut self) -> Result<bool, LpError> {
        if self.art_start == self.num_cols() {
            return Ok(false); // all rows were <= with nonnegative rhs
        }
        let mut cost = vec![0.0; self.num_cols()];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = 1.0;
        }
        self.load_cost(cost);
        match self.run(self.num_cols())? {
            RunOutcome::Unbounded => unreachable!("phase 1 objective is bounded below by zero"),
            RunOutcome::Optimal => {}
        }
        if self.objective() > FEASIBILITY_TOL {
            return Ok(true);
        }
        self.expel_artificials();
        Ok(false)
    }

    /// Pivots residual artificials out of the basis; rows that cannot release
    /// theirs are redundant and get dropped.
    fn expel_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.art_start {
                let col = (0..self.art_start).find(|&j| self.rows[r][j].abs() > PIVOT_TOL);
                match col {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    /// Runs phase 2. Returns true when the program is unbounded.
    fn phase_two(&mut self, lp: &LinearProgram) -> Result<bool, LpError> {
        let mut cost = vec![0.0; self.num_cols()];
        for (j, &c) in lp.objective.iter().enumerate() {
            match self.var_map[j] {
                // maximize c.x == minimize -c.x
                VarMap::Shifted { col, .. } => cost[col] -= c,
                VarMap::Split { pos, neg } => {
                    cost[pos] -= c;
                    cost[neg] += c;
                }
            }
        }
        self.load_cost(cost);
        match self.run(self.art_start)? {
            RunOutcome::Unbounded => Ok(true),
            RunOutcome::Optimal => Ok(false),
        }
    }

    fn extract(&self, lp: &LinearProgram) -> Vec<f64> {
        let mut z = vec![0.0; self.num_cols()];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i];
        }
        lp.objective
            .iter()
            .enumerate()
            .map(|(j, _)| match self.var_map[j] {
                VarMap::Shifted { col, lower } => lower + z[col],
                VarMap::Split { pos, neg } => z[pos] - z[neg],
            })
            .collect()
    }

    fn sorted_basis(&self) -> Vec<usize> {
        let mut basis = self.basis.clone();
        basis.sort_unstable();
        basis
    }
}

//! Name-indexed strategy objects so embedders and the command line can pick
//! a solution concept at runtime.

use once_cell::sync::Lazy;

use crate::bankruptcy::{cg_rule, talmud_rule, AppliedRule, Award, ClaimsError, ClaimsProblem};
use crate::bargaining::DEFAULT_STEP_CAP;
use crate::multi_commodity::{
    aumann_multi, raiffa_multi_with_cap, MultiError, MultiProblem, MultiSolution,
};

/// Knobs shared by every bargaining strategy.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Upper bound on midpoint rounds for iterative methods.
    pub step_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            step_cap: DEFAULT_STEP_CAP,
        }
    }
}

/// A way of picking one utility vector from a multi-commodity problem.
pub trait BargainingStrategy: Sync + Send {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn solve(
        &self,
        problem: &MultiProblem,
        options: &SolveOptions,
    ) -> Result<MultiSolution, MultiError>;
}

/// A way of dividing an estate among claimants.
pub trait ClaimsStrategy: Sync + Send {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn divide(&self, problem: &ClaimsProblem) -> Result<Award, ClaimsError>;
}

struct StepwiseMidpoints;

impl BargainingStrategy for StepwiseMidpoints {
    fn name(&self) -> &'static str {
        "raiffa"
    }
    fn describe(&self) -> &'static str {
        "repeatedly moves the disagreement point to the midpoint of the ideal utilities"
    }
    fn solve(
        &self,
        problem: &MultiProblem,
        options: &SolveOptions,
    ) -> Result<MultiSolution, MultiError> {
        raiffa_multi_with_cap(problem, options.step_cap)
    }
}

struct ClaimsSelection;

impl BargainingStrategy for ClaimsSelection {
    fn name(&self) -> &'static str {
        "aumann"
    }
    fn describe(&self) -> &'static str {
        "treats ideal gains as claims and awards each player the Talmud share of what is achievable"
    }
    fn solve(
        &self,
        problem: &MultiProblem,
        _options: &SolveOptions,
    ) -> Result<MultiSolution, MultiError> {
        aumann_multi(problem)
    }
}

struct TalmudDivision;

impl ClaimsStrategy for TalmudDivision {
    fn name(&self) -> &'static str {
        "talmud"
    }
    fn describe(&self) -> &'static str {
        "equal award on half-claims up to the half-way estate, equal loss beyond it"
    }
    fn divide(&self, problem: &ClaimsProblem) -> Result<Award, ClaimsError> {
        Ok(talmud_rule(problem))
    }
}

struct GarmentDivision;

impl ClaimsStrategy for GarmentDivision {
    fn name(&self) -> &'static str {
        "cg"
    }
    fn describe(&self) -> &'static str {
        "concedes the uncontested parts, splits the contested remainder equally (two claimants)"
    }
    fn divide(&self, problem: &ClaimsProblem) -> Result<Award, ClaimsError> {
        let claims = problem.claims();
        if claims.len() != 2 {
            return Err(ClaimsError::NotTwoClaimants(claims.len()));
        }
        let (x1, x2) = cg_rule(claims[0], claims[1], problem.estate())?;
        let applied_rule = if problem.estate() <= problem.total_claims() / 2.0 {
            AppliedRule::Cea
        } else {
            AppliedRule::Cel
        };
        Ok(Award {
            amounts: vec![x1, x2],
            applied_rule,
        })
    }
}

static BARGAINING: Lazy<Vec<Box<dyn BargainingStrategy>>> =
    Lazy::new(|| vec![Box::new(StepwiseMidpoints), Box::new(ClaimsSelection)]);

static CLAIMS: Lazy<Vec<Box<dyn ClaimsStrategy>>> =
    Lazy::new(|| vec![Box::new(TalmudDivision), Box::new(GarmentDivision)]);

pub fn bargaining_strategies() -> &'static [Box<dyn BargainingStrategy>] {
    &BARGAINING
}

pub fn claims_strategies() -> &'static [Box<dyn ClaimsStrategy>] {
    &CLAIMS
}

pub fn find_bargaining(name: &str) -> Option<&'static dyn BargainingStrategy> {
    BARGAINING
        .iter()
        .find(|s| s.name() == name)
        .map(|s| s.as_ref())
}

pub fn find_claims(name: &str) -> Option<&'static dyn ClaimsStrategy> {
    CLAIMS.iter().find(|s| s.name() == name).map(|s| s.as_ref())
}

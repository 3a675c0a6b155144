//! The release gate. Each test covers one numbered criterion and prints a
//! single PASS line, so `cargo test --test acceptance -- --nocapture`
//! reads as a checklist.

mod common;

use std::time::{Duration, Instant};

use fairshare_core::bankruptcy::{aumann_bargaining_single, talmud_rule, ClaimsProblem};
use fairshare_core::bargaining::{raiffa_solve, DisagreementPoint};
use fairshare_core::multi_commodity::{
    aumann_multi, ideal_allocation, ideal_profile, raiffa_multi, shared_commodity_count,
    two_player_ideal, MultiProblem, MultiTrace, DEFAULT_SHARE_TOL,
};
use fairshare_core::oracle::{cg_consistency_check, grid_pareto_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_close(actual: &[f64], expected: &[f64], tol: f64, what: &str) {
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!(
            (a - e).abs() <= tol,
            "{what}: coordinate {i} is {a}, expected {e} within {tol}"
        );
    }
}

#[test]
fn criterion_01_two_player_trace_is_exact_and_fast() {
    let set = common::linear_production_set();
    let d = DisagreementPoint(vec![0.0, 0.0]);
    let started = Instant::now();
    let (solution, trace) = raiffa_solve(&set, &d, 1e-6).unwrap();
    let elapsed = started.elapsed();

    let expected_midpoints = [[35.0, 80.0], [44.5, 108.75], [45.5, 111.25]];
    assert_eq!(trace.steps.len(), expected_midpoints.len());
    for (row, want) in trace.steps.iter().zip(&expected_midpoints) {
        assert_close(&row.midpoint, want, 1e-9, "trace midpoint");
    }
    assert_close(&solution, &[45.5, 111.25], 1e-9, "solution");
    assert!(elapsed < Duration::from_millis(10), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS - two-player midpoint trace reproduced to 1e-9 in {elapsed:?}"
    );
}

#[test]
fn criterion_02_two_player_claims_selection_is_exact_and_fast() {
    let set = common::linear_production_set();
    let d = DisagreementPoint(vec![0.0, 0.0]);
    let started = Instant::now();
    let point = aumann_bargaining_single(&set, &d).unwrap();
    let elapsed = started.elapsed();

    assert_close(&point, &[270.0 / 7.0, 900.0 / 7.0], 1e-6, "selection");
    assert!(elapsed < Duration::from_millis(10), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 PASS - two-player claims selection hits (270/7, 900/7) in {elapsed:?}"
    );
}

#[test]
fn criterion_03_three_claimant_estates_match_the_rulings() {
    let claims = vec![100.0, 200.0, 300.0];
    let rulings = [
        (100.0, [100.0 / 3.0, 100.0 / 3.0, 100.0 / 3.0]),
        (200.0, [50.0, 75.0, 75.0]),
        (300.0, [50.0, 100.0, 150.0]),
    ];
    for (estate, expected) in rulings {
        let problem = ClaimsProblem::new(claims.clone(), estate).unwrap();
        let award = talmud_rule(&problem);
        assert_close(&award.amounts, &expected, 1e-9, "award");
    }
    println!("ACCEPTANCE 3 PASS - the three recorded estate divisions match to 1e-9");
}

#[test]
fn criterion_04_worked_pair_in_commodity_form() {
    let problem = common::worked_pair(1e-4);
    let raiffa = raiffa_multi(&problem).unwrap();
    assert_close(&raiffa.utilities, &[45.5, 111.25], 1e-3, "midpoint method");
    let aumann = aumann_multi(&problem).unwrap();
    assert_close(
        &aumann.utilities,
        &[270.0 / 7.0, 900.0 / 7.0],
        5e-2,
        "claims method",
    );
    println!("ACCEPTANCE 4 PASS - commodity form of the worked pair agrees with both methods");
}

#[test]
fn criterion_05_overlapping_tastes_scenario() {
    let problem = common::scenario_one(1e-6);
    let raiffa = raiffa_multi(&problem).unwrap();
    assert_close(
        &raiffa.utilities,
        &[11.793, 37.5995, 46.1966],
        5e-2,
        "midpoint method",
    );
    let aumann = aumann_multi(&problem).unwrap();
    assert_close(
        &aumann.utilities,
        &[12.100, 41.218, 41.218],
        5e-2,
        "claims method",
    );
    assert!((aumann.utilities[0] - 12.1).abs() <= 1e-3, "half-claim cap");
    assert!(
        (aumann.utilities[1] - aumann.utilities[2]).abs() <= 1e-3,
        "uncapped players split equally"
    );
    println!("ACCEPTANCE 5 PASS - overlapping-tastes scenario matches both methods");
}

#[test]
fn criterion_06_disjoint_tastes_scenario() {
    let problem = common::scenario_two(1e-6);
    let raiffa = raiffa_multi(&problem).unwrap();
    assert_close(
        &raiffa.utilities,
        &[17.477, 46.3581, 62.3611],
        5e-2,
        "midpoint method",
    );
    let aumann = aumann_multi(&problem).unwrap();
    assert_close(
        &aumann.utilities,
        &[13.0017, 43.2017, 65.8017],
        5e-2,
        "claims method",
    );
    let (claims, _) = ideal_profile(&problem, problem.disagreement()).unwrap();
    let losses: Vec<f64> = claims
        .iter()
        .zip(&aumann.utilities)
        .map(|(c, u)| c - u)
        .collect();
    for loss in &losses[1..] {
        assert!((loss - losses[0]).abs() <= 1e-3, "losses {losses:?}");
    }
    println!("ACCEPTANCE 6 PASS - disjoint-tastes scenario matches and losses equalize");
}

#[test]
fn criterion_07_slacks_contract_at_the_predicted_rate() {
    let mut worst_step: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    for problem in common::random_suite() {
        let n = problem.players();
        let factor = 1.0 - 1.0 / n as f64;
        let solution = raiffa_multi(&problem).unwrap();
        let MultiTrace::Raiffa(steps) = &solution.trace else {
            panic!("midpoint method must leave a step trace")
        };

        // slack rows: per-player I_p - m_p, starting from the disagreement point
        let (ideals, _) = ideal_profile(&problem, problem.disagreement()).unwrap();
        let mut slacks = vec![ideals
            .iter()
            .zip(problem.disagreement())
            .map(|(i, d)| i - d)
            .collect::<Vec<_>>()];
        slacks.extend(steps.iter().map(|s| {
            s.ideals
                .iter()
                .zip(&s.midpoint)
                .map(|(i, m)| i - m)
                .collect()
        }));

        for w in slacks.windows(2) {
            for p in 0..n {
                if w[0][p] > 1e-9 {
                    let ratio = w[1][p] / w[0][p];
                    worst_step = worst_step.max(ratio - factor);
                    assert!(
                        ratio <= factor + 1e-6,
                        "player {p} step ratio {ratio} over {factor}"
                    );
                }
            }
        }

        let per_round = factor.powi(n as i32);
        let totals: Vec<f64> = slacks.iter().map(|row| row.iter().sum()).collect();
        for i in 0..totals.len().saturating_sub(n) {
            if totals[i] > 1e-9 {
                let ratio = totals[i + n] / totals[i];
                worst_round = worst_round.max(ratio - per_round);
                assert!(
                    ratio <= per_round + 1e-6,
                    "round ratio {ratio} over {per_round}"
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 7 PASS - contraction held on 100 seeded instances \
         (worst step excess {worst_step:.2e}, worst round excess {worst_round:.2e})"
    );
}

#[test]
fn criterion_08_solutions_share_few_commodities() {
    let mut worst = 0usize;
    for problem in common::random_suite() {
        let cap = problem.players() - 1;
        for solution in [
            raiffa_multi(&problem).unwrap(),
            aumann_multi(&problem).unwrap(),
        ] {
            let shared = shared_commodity_count(&solution.allocation, DEFAULT_SHARE_TOL);
            worst = worst.max(shared);
            assert!(
                shared <= cap,
                "{} shared commodities for {} players ({})",
                shared,
                problem.players(),
                solution.method.label(),
            );
        }
    }
    println!(
        "ACCEPTANCE 8 PASS - at most players-minus-one commodities split \
         on 100 seeded instances (worst {worst})"
    );
}

#[test]
fn criterion_09_greedy_pinned_maximum_matches_the_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51de_ca11);
    for round in 0..200 {
        let k = rng.random_range(1..=12usize);
        let utilities: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..k).map(|_| 10.0 - 10.0 * rng.random::<f64>()).collect())
            .collect();
        let problem = MultiProblem::new(utilities, vec![0.0, 0.0], 1e-6).unwrap();
        let pinned = rng.random_range(0..2usize);
        let total: f64 = problem.utilities()[pinned].iter().sum();
        let target = rng.random::<f64>() * total;

        let (fast, matrix) = two_player_ideal(&problem, pinned, target).unwrap();
        let mut midpoint = [0.0, 0.0];
        midpoint[pinned] = target;
        let (solved, _) = ideal_allocation(&problem, 1 - pinned, &midpoint).unwrap();
        assert!(
            (fast - solved).abs() <= 1e-8,
            "round {round}: greedy {fast} vs solver {solved}"
        );
        assert!(shared_commodity_count(&matrix, DEFAULT_SHARE_TOL) <= 1);
    }
    println!(
        "ACCEPTANCE 9 PASS - greedy two-player maxima agree with the solver \
         to 1e-8 on 200 seeded instances"
    );
}

#[test]
fn criterion_10_pairwise_division_consistency() {
    // claims-based bargaining output on the named economies and the seeded suite
    let named = [
        common::worked_pair(1e-4),
        common::scenario_one(1e-6),
        common::scenario_two(1e-6),
    ];
    for problem in named.into_iter().chain(common::random_suite()) {
        let d = problem.disagreement().to_vec();
        let (ideals, _) = ideal_profile(&problem, &d).unwrap();
        let claims: Vec<f64> = ideals.iter().zip(&d).map(|(i, dn)| i - dn).collect();
        let solution = aumann_multi(&problem).unwrap();
        let report = cg_consistency_check(&claims, &d, &solution.utilities, 1e-6);
        assert!(report.overall, "{:?}", report.checks);
    }

    // estate divisions across the whole estate range
    let claims = vec![100.0, 200.0, 300.0];
    for estate in [100.0, 200.0, 300.0, 420.0, 500.0] {
        let problem = ClaimsProblem::new(claims.clone(), estate).unwrap();
        let award = talmud_rule(&problem);
        let report = cg_consistency_check(&claims, &[0.0; 3], &award.amounts, 1e-6);
        assert!(report.overall, "estate {estate}: {:?}", report.checks);
    }

    // random estates with random claim vectors
    let mut rng = ChaCha8Rng::seed_from_u64(0xe57a7e);
    for _ in 0..100 {
        let n = rng.random_range(2..=6usize);
        let mut claims: Vec<f64> =
            (0..n).map(|_| 100.0 - 100.0 * rng.random::<f64>()).collect();
        claims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total: f64 = claims.iter().sum();
        let estate = total * rng.random::<f64>();
        let problem = ClaimsProblem::new(claims.clone(), estate).unwrap();
        let award = talmud_rule(&problem);
        let report = cg_consistency_check(&claims, &vec![0.0; n], &award.amounts, 1e-6);
        assert!(report.overall, "claims {claims:?} estate {estate}");
    }
    println!(
        "ACCEPTANCE 10 PASS - every pair receives its two-claimant division \
         in bargaining and estate outputs, named and seeded"
    );
}

#[test]
fn criterion_11_no_dominating_allocation_exists() {
    let started = Instant::now();
    let mut checked = 0usize;
    for problem in common::random_suite() {
        if problem.players() > 3 || problem.commodities() > 8 {
            continue;
        }
        for solution in [
            raiffa_multi(&problem).unwrap(),
            aumann_multi(&problem).unwrap(),
        ] {
            let report = grid_pareto_check(&problem, &solution.utilities, problem.epsilon())
                .unwrap();
            assert!(
                report.overall,
                "{} dominated by {:.3e}",
                solution.method.label(),
                report.checks[0].measured,
            );
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(checked > 0);
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 11 PASS - exhaustive search found no dominator over \
         {checked} solutions in {elapsed:?}"
    );
}

//! Fixtures shared by the integration suites: the worked two-player
//! economy in both representations, the two seven-commodity scenarios,
//! and a seeded random instance pool.

#![allow(dead_code)]

use fairshare_core::bargaining::{BargainingSet, Halfspace};
use fairshare_core::multi_commodity::MultiProblem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The two-player utility set cut out by three production constraints.
pub fn linear_production_set() -> BargainingSet {
    BargainingSet::new(
        2,
        vec![
            Halfspace::new(vec![1.0 / 3.0, 1.0], 160.0),
            Halfspace::new(vec![2.5, 1.0], 225.0),
            Halfspace::new(vec![5.0, 1.0], 350.0),
        ],
    )
    .unwrap()
}

/// The same economy as [`linear_production_set`], stated as three
/// commodities valued by two players.
pub fn worked_pair(epsilon: f64) -> MultiProblem {
    MultiProblem::new(
        vec![vec![20.0, 20.0, 30.0], vec![100.0, 50.0, 10.0]],
        vec![0.0, 0.0],
        epsilon,
    )
    .unwrap()
}

/// Three players, seven commodities, broadly overlapping tastes.
pub fn scenario_one(epsilon: f64) -> MultiProblem {
    MultiProblem::new(
        vec![
            vec![3.0, 4.7, 2.3, 8.4, 1.9, 2.2, 1.7],
            vec![8.7, 6.2, 18.4, 8.6, 3.7, 18.1, 19.6],
            vec![3.9, 9.0, 14.3, 20.8, 9.2, 21.1, 24.9],
        ],
        vec![0.0; 3],
        epsilon,
    )
    .unwrap()
}

/// Three players, seven commodities, nearly disjoint tastes.
pub fn scenario_two(epsilon: f64) -> MultiProblem {
    MultiProblem::new(
        vec![
            vec![8.4, 8.7, 3.0, 0.1, 0.2, 0.5, 0.3],
            vec![0.3, 0.2, 18.5, 12.1, 19.6, 0.5, 0.2],
            vec![0.2, 0.7, 10.5, 0.1, 1.0, 31.1, 30.4],
        ],
        vec![0.0; 3],
        epsilon,
    )
    .unwrap()
}

/// One hundred seeded instances, two to four players, three to eight
/// commodities, valuations uniform on (0, 10].
pub fn random_suite() -> Vec<MultiProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0fa1_c0de);
    (0..100)
        .map(|_| {
            let n = rng.random_range(2..=4usize);
            let k = rng.random_range(3..=8usize);
            let utilities = (0..n)
                .map(|_| (0..k).map(|_| 10.0 - 10.0 * rng.random::<f64>()).collect())
                .collect();
            MultiProblem::new(utilities, vec![0.0; n], 1e-6).unwrap()
        })
        .collect()
}

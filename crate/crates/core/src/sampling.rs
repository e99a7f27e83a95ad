//! Seeded random measures, kernels, and systems for harnesses and tests.
//!
//! Everything here is deterministic given the caller's RNG; the library
//! never seeds from ambient entropy.

use std::sync::Arc;

use rand::Rng;

use crate::measures::{MarkovOperator, MarkovSystem, SignedMeasure, StateSpace, DEFAULT_TOLERANCE};

/// Random probability measure (normalized uniform entries).
pub fn random_probability<R: Rng>(space: &Arc<StateSpace>, rng: &mut R) -> SignedMeasure<f64> {
    let raw: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    SignedMeasure::new(space, raw.into_iter().map(|v| v / total).collect()).expect("finite")
}

/// Random signed measure with entries in `(−1, 1)`.
pub fn random_signed<R: Rng>(space: &Arc<StateSpace>, rng: &mut R) -> SignedMeasure<f64> {
    let mass: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SignedMeasure::new(space, mass).expect("finite")
}

/// Random zero-charge measure (mean-centered uniform entries).
pub fn random_zero_charge<R: Rng>(space: &Arc<StateSpace>, rng: &mut R) -> SignedMeasure<f64> {
    let mut mass: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = mass.iter().sum::<f64>() / mass.len() as f64;
    for m in &mut mass {
        *m -= mean;
    }
    SignedMeasure::new(space, mass).expect("finite")
}

/// Random row-stochastic kernel.
pub fn random_kernel<R: Rng>(space: &Arc<StateSpace>, rng: &mut R) -> MarkovOperator<f64> {
    let n = space.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    MarkovOperator::stochastic(space, rows, &DEFAULT_TOLERANCE).expect("rows normalized")
}

/// Random kernel with every entry at least `floor` (requires `n·floor ≤ 1`);
/// such kernels satisfy Condition D₀ with `c⋆ ≥ n·floor`.
pub fn random_kernel_with_floor<R: Rng>(
    space: &Arc<StateSpace>,
    floor: f64,
    rng: &mut R,
) -> MarkovOperator<f64> {
    let n = space.len();
    let slack = 1.0 - n as f64 * floor;
    assert!(slack >= 0.0, "floor too large for {n} cells");
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
            raw.into_iter().map(|v| floor + slack * v / total).collect()
        })
        .collect();
    MarkovOperator::stochastic(space, rows, &DEFAULT_TOLERANCE).expect("rows normalized")
}

/// Random system with `k` symbols (`a`, `b`, …) and a random initial
/// distribution.
pub fn random_system<R: Rng>(
    space: &Arc<StateSpace>,
    k: usize,
    rng: &mut R,
) -> MarkovSystem<f64> {
    let alphabet = symbol_names(k);
    let operators = (0..k).map(|_| random_kernel(space, rng)).collect();
    let initial = random_probability(space, rng);
    MarkovSystem::new(alphabet, operators, initial, DEFAULT_TOLERANCE).expect("valid")
}

/// Random system whose every letter mixes with weight `floor_weight` toward
/// a letter-specific profile: rows are `floor_weight·φ_u + (1−floor_weight)·
/// random`, so each letter has `δ ≤ 1 − floor_weight` and the system is
/// weakly ergodic at `r = 1`.
pub fn random_mixing_system<R: Rng>(
    space: &Arc<StateSpace>,
    k: usize,
    floor_weight: f64,
    rng: &mut R,
) -> MarkovSystem<f64> {
    assert!((0.0..=1.0).contains(&floor_weight));
    let n = space.len();
    let operators: Vec<MarkovOperator<f64>> = (0..k)
        .map(|_| {
            let profile = random_probability(space, rng);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                    let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
                    raw.iter()
                        .zip(profile.mass())
                        .map(|(v, p)| floor_weight * p + (1.0 - floor_weight) * v / total)
                        .collect()
                })
                .collect();
            MarkovOperator::stochastic(space, rows, &DEFAULT_TOLERANCE).expect("rows normalized")
        })
        .collect();
    let initial = random_probability(space, rng);
    MarkovSystem::new(symbol_names(k), operators, initial, DEFAULT_TOLERANCE).expect("valid")
}

/// Fit a cut-point recognizer to a system: collect `μ_w(F)` over all words
/// up to the horizon, find the widest gap the values leave, and center the
/// cut there with isolation `0.4·gap` (so every sampled word keeps slack
/// `0.1·gap`). Returns `None` when the widest gap is below `min_gap` —
/// the system's margins don't support a cut-point recognizer over `F`.
pub fn fit_recognizer(
    sys: &MarkovSystem<f64>,
    accepting: std::collections::BTreeSet<usize>,
    horizon: usize,
    min_gap: f64,
    word_budget: u128,
) -> crate::Result<Option<crate::recognition::Recognizer<f64>>> {
    let need = crate::words::words_up_to_count(sys.alphabet_len(), horizon)
        .ok_or(crate::Error::WordBudget { need: u128::MAX, budget: word_budget })?;
    if need > word_budget {
        return Err(crate::Error::WordBudget { need, budget: word_budget });
    }
    let mut values = Vec::new();
    for len in 0..=horizon {
        crate::measures::walk_word_distributions(sys, len, &mut |_, mu| {
            values.push(mu.mass_of(accepting.iter()));
            Ok(true)
        })?;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite masses"));
    let mut best: Option<(f64, f64)> = None; // (low edge, width)
    for pair in values.windows(2) {
        let width = pair[1] - pair[0];
        if best.is_none_or(|(_, w)| width > w) {
            best = Some((pair[0], width));
        }
    }
    match best {
        Some((low, width)) if width >= min_gap => {
            let cut = low + width / 2.0;
            let isolation = 0.4 * width;
            Ok(Some(crate::recognition::Recognizer::new(
                sys.space(),
                accepting,
                cut,
                isolation,
            )?))
        }
        _ => Ok(None),
    }
}

/// `a`, `b`, …, `z`, `t26`, `t27`, … for larger alphabets.
pub fn symbol_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("t{i}")
            }
        })
        .collect()
}

//! Dobrushin coefficients, Condition D₀ certificates, weak-ergodicity
//! certification, and geometric decay bounds.
//!
//! The Dobrushin coefficient `δ(P) = sup_{μ,ν} ½‖Pμ − Pν‖₁` measures how much
//! a kernel contracts pairs of distributions; `δ = 0` is one-step forgetting,
//! `δ = 1` gives no guaranteed contraction. On a finite space the supremum is
//! attained at point masses, so `δ` is computed exactly over row pairs.
//! Equivalently `δ(P) = sup ‖Pλ‖₁/‖λ‖₁` over zero-charge `λ ≠ 0`, which is
//! what makes `δ` submultiplicative over composition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measures::{walk_word_operators, MarkovOperator, MarkovSystem, SignedMeasure};
use crate::scalar::Scalar;
use crate::words::{words_of_length_count, Word};
use crate::{Error, Result};

/// The contraction coefficient `δ(P)`, exact over row pairs.
pub fn dobrushin<S: Scalar>(op: &MarkovOperator<S>) -> S {
    dobrushin_argmax(op).delta
}

/// `δ(P)` together with the pair of rows attaining it.
#[derive(Debug, Clone)]
pub struct DobrushinArgmax<S: Scalar> {
    pub delta: S,
    /// Cell pair `(x, x')` whose rows are furthest apart.
    pub rows: (usize, usize),
}

pub fn dobrushin_argmax<S: Scalar>(op: &MarkovOperator<S>) -> DobrushinArgmax<S> {
    let n = op.len();
    let mut best = S::zero();
    let mut pair = (0, 0);
    for x in 0..n {
        for y in (x + 1)..n {
            let dist = op
                .row(x)
                .iter()
                .zip(op.row(y))
                .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
            if dist > best {
                best = dist;
                pair = (x, y);
            }
        }
    }
    DobrushinArgmax {
        delta: best.half(),
        rows: pair,
    }
}

/// Samples random zero-charge measures and returns the largest observed
/// ratio `‖Pλ‖₁/‖λ‖₁`. The contract (checked by the test suite, not here)
/// is that no ratio exceeds `dobrushin(P)`.
pub fn dobrushin_nullspace_check(op: &MarkovOperator<f64>, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = op.len();
    if n < 2 {
        return 0.0; // the only zero-charge measure on one cell is zero
    }
    let mut worst: f64 = 0.0;
    let mut drawn = 0;
    while drawn < samples {
        let mut mass: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = mass.iter().sum::<f64>() / n as f64;
        for m in &mut mass {
            *m -= mean;
        }
        let lambda = SignedMeasure::new(op.space(), mass).expect("finite sample");
        let norm = lambda.tv_norm();
        if norm < 1e-12 {
            continue; // degenerate draw, resample
        }
        drawn += 1;
        let image = op.apply(&lambda).expect("same space");
        worst = worst.max(image.tv_norm() / norm);
    }
    worst
}

/// Condition D₀ certificate: `P(x,·) ≥ c⋆ φ(·)` for every cell `x`, with the
/// maximal constant `c⋆ = Σ_y min_x P(x,y)`. `c⋆ = 0` signals that D₀ fails;
/// `c⋆ > 0` guarantees `δ(P) ≤ 1 − c⋆`.
#[derive(Debug, Clone)]
pub struct D0Certificate<S: Scalar> {
    pub c_star: S,
    /// The dominated probability profile; present iff `c_star > 0`.
    pub phi: Option<SignedMeasure<S>>,
}

pub fn d0_certificate<S: Scalar>(op: &MarkovOperator<S>) -> D0Certificate<S> {
    let n = op.len();
    let mins: Vec<S> = (0..n)
        .map(|y| {
            (0..n)
                .map(|x| op.entry(x, y).clone())
                .fold(None::<S>, |acc, v| match acc {
                    None => Some(v),
                    Some(m) => Some(if v < m { v } else { m }),
                })
                .expect("n ≥ 1")
        })
        .collect();
    let c_star = mins.iter().fold(S::zero(), |acc, v| acc + v.clone());
    let phi = if c_star > S::zero() {
        let mass: Vec<S> = mins.into_iter().map(|v| v / c_star.clone()).collect();
        Some(SignedMeasure::new(op.space(), mass).expect("finite"))
    } else {
        None
    };
    D0Certificate { c_star, phi }
}

/// A weak-ergodicity certificate: every word of length `r` composes to an
/// operator with `δ(P_w) ≤ delta_bar < 1`.
#[derive(Debug, Clone)]
pub struct ErgodicityCertificate<S: Scalar> {
    pub r: usize,
    pub delta_bar: S,
    /// Per-word coefficients at level `r`, retained on request.
    pub per_word: Option<Vec<(Word, S)>>,
}

#[derive(Debug, Clone)]
pub enum ErgodicityOutcome<S: Scalar> {
    Certified(ErgodicityCertificate<S>),
    /// No level up to `r_max` contracted below the cap; the witness is the
    /// first word (in lexicographic order) attaining the worst coefficient
    /// at `r_max`.
    Failed { r_max: usize, witness: Word, delta: S },
}

impl<S: Scalar> ErgodicityOutcome<S> {
    pub fn certificate(&self) -> Option<&ErgodicityCertificate<S>> {
        match self {
            ErgodicityOutcome::Certified(c) => Some(c),
            ErgodicityOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Accept level `r` iff `max_w δ(P_w) < delta_cap`. The default cap of
    /// `1.0` is the weak-ergodicity definition itself; tighter caps ask for
    /// a prescribed contraction level.
    pub delta_cap: f64,
    /// Total enumeration budget in words across all levels.
    pub word_budget: u128,
    /// Retain the per-word coefficients of the certified level.
    pub retain_per_word: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            delta_cap: 1.0,
            word_budget: 1_000_000,
            retain_per_word: false,
        }
    }
}

/// Finds the smallest `r ≤ r_max` with `max_{w ∈ Σ^r} δ(P_w) < delta_cap`,
/// enumerating `Σ^r` exhaustively. Exhaustive enumeration is deliberate:
/// weak ergodicity can hold at `r` even when every single letter has δ = 1.
pub fn certify_weak_ergodicity<S: Scalar>(
    sys: &MarkovSystem<S>,
    r_max: usize,
    opts: &CertifyOptions,
) -> Result<ErgodicityOutcome<S>> {
    if r_max < 1 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    let cap = S::from_f64_nearest(opts.delta_cap);
    let mut spent: u128 = 0;
    let mut last_worst: Option<(Word, S)> = None;
    for r in 1..=r_max {
        let level = words_of_length_count(sys.alphabet_len(), r)
            .ok_or(Error::WordBudget { need: u128::MAX, budget: opts.word_budget })?;
        spent = spent.saturating_add(level);
        if spent > opts.word_budget {
            return Err(Error::WordBudget { need: spent, budget: opts.word_budget });
        }
        let mut worst: Option<(Word, S)> = None;
        let mut per_word = opts.retain_per_word.then(Vec::new);
        walk_word_operators(sys, r, &mut |word, op| {
            let delta = dobrushin(op);
            if let Some(pw) = per_word.as_mut() {
                pw.push((word.clone(), delta.clone()));
            }
            match &worst {
                Some((_, d)) if delta <= *d => {}
                _ => worst = Some((word.clone(), delta)),
            }
            Ok(true)
        })?;
        let (witness, delta_bar) = worst.expect("non-empty alphabet");
        if delta_bar < cap {
            return Ok(ErgodicityOutcome::Certified(ErgodicityCertificate {
                r,
                delta_bar,
                per_word,
            }));
        }
        last_worst = Some((witness, delta_bar));
    }
    let (witness, delta) = last_worst.expect("r_max ≥ 1");
    Ok(ErgodicityOutcome::Failed { r_max, witness, delta })
}

/// Geometric decay bound `delta_bar^⌊n/r⌋` on `δ(P_w)` for any word of
/// length `n`: split `w` into `⌊n/r⌋` blocks of length `r` (each with
/// `δ ≤ delta_bar`) plus a remainder (with `δ ≤ 1`) and use
/// submultiplicativity.
pub fn decay_bound<S: Scalar>(cert: &ErgodicityCertificate<S>, n: usize) -> S {
    cert.delta_bar.powu(n / cert.r)
}

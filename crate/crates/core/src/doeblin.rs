//! Condition D checks, the bounded-density criterion, the kernel
//! decomposition `P = Q + R`, and quasi-compactness bounds.
//!
//! Condition D says: sets of reference mass at least θ receive kernel mass
//! at least η from every state. It is checked exhaustively over cell subsets
//! for small spaces; beyond that only the bounded-density sufficient
//! condition is offered, since `P(x,A) ≤ K·μ(A)` forces
//! `P(x,A) ≥ 1 − K·(1−θ)` whenever `μ(A) ≥ θ`.

use crate::measures::{walk_word_operators, MarkovOperator, MarkovSystem, SignedMeasure};
use crate::scalar::{smin, Scalar};
use crate::words::{words_of_length_count, Word};
use crate::{Error, Result};

/// Hard cap for exhaustive subset scans (2^20 subsets).
pub const SUBSET_SCAN_CAP: usize = 20;

/// Result of the bounded-density test `P(x,·) ≤ K·μ(·)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityBound<S: Scalar> {
    /// The least constant `K = max_{x,y: μ(y)>0} P(x,y)/μ(y)`.
    Bounded(S),
    /// Some transition moves mass onto a cell the reference measure misses.
    Unbounded { row: usize, cell: usize },
}

impl<S: Scalar> DensityBound<S> {
    pub fn bound(&self) -> Option<&S> {
        match self {
            DensityBound::Bounded(k) => Some(k),
            DensityBound::Unbounded { .. } => None,
        }
    }
}

pub fn bounded_density<S: Scalar>(
    op: &MarkovOperator<S>,
    mu: &SignedMeasure<S>,
) -> Result<DensityBound<S>> {
    if !crate::measures::same_space(op.space(), mu.space()) {
        return Err(Error::SpaceMismatch);
    }
    let n = op.len();
    let mut worst = S::zero();
    for x in 0..n {
        for y in 0..n {
            let p = op.entry(x, y);
            let m = &mu.mass()[y];
            if m.is_zero() {
                if !p.is_zero() {
                    return Ok(DensityBound::Unbounded { row: x, cell: y });
                }
                continue;
            }
            let ratio = p.clone() / m.clone();
            if ratio > worst {
                worst = ratio;
            }
        }
    }
    Ok(DensityBound::Bounded(worst))
}

/// How a Condition D check arrived at its η.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Exact minimum over all qualifying cell subsets.
    Exhaustive,
    /// Lower bound `max(0, 1 − K(1−θ))` from the bounded-density constant.
    DensityBound,
}

/// Mode selection for [`condition_d_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckStrategy {
    /// Exhaustive when the space is small enough, density bound otherwise.
    #[default]
    Auto,
    Exhaustive,
    DensityBound,
}

#[derive(Debug, Clone)]
pub struct ConditionD<S: Scalar> {
    pub theta: S,
    pub eta: S,
    pub mode: CheckMode,
}

impl<S: Scalar> ConditionD<S> {
    /// Condition D holds (usefully) iff `0 < η < 1`; η = 0 means some
    /// qualifying set is missed entirely, η = 1 means only vacuous sets
    /// qualify.
    pub fn holds(&self) -> bool {
        self.eta > S::zero() && self.eta < S::one()
    }
}

/// `η(θ) = min { P(x,A) : μ(A) ≥ θ, x ∈ Ω }`, the exact Condition D constant.
pub fn condition_d_check<S: Scalar>(
    op: &MarkovOperator<S>,
    mu: &SignedMeasure<S>,
    theta: &S,
    strategy: CheckStrategy,
) -> Result<ConditionD<S>> {
    Ok(condition_d_scan(op, mu, std::slice::from_ref(theta), strategy)?
        .pop()
        .expect("one theta in, one report out"))
}

/// Scan several θ values in one subset sweep.
pub fn condition_d_scan<S: Scalar>(
    op: &MarkovOperator<S>,
    mu: &SignedMeasure<S>,
    thetas: &[S],
    strategy: CheckStrategy,
) -> Result<Vec<ConditionD<S>>> {
    if !crate::measures::same_space(op.space(), mu.space()) {
        return Err(Error::SpaceMismatch);
    }
    for theta in thetas {
        if *theta <= S::zero() || *theta > S::one() {
            return Err(Error::InvalidParameter(format!("theta {theta} outside (0, 1]")));
        }
    }
    let n = op.len();
    let exhaustive = match strategy {
        CheckStrategy::Exhaustive => {
            if n > SUBSET_SCAN_CAP {
                return Err(Error::SubsetBudget { n, cap: SUBSET_SCAN_CAP });
            }
            true
        }
        CheckStrategy::DensityBound => false,
        CheckStrategy::Auto => n <= SUBSET_SCAN_CAP,
    };
    if !exhaustive {
        let k = match bounded_density(op, mu)? {
            DensityBound::Bounded(k) => k,
            DensityBound::Unbounded { .. } => {
                // No density constant: the bound degenerates to η = 0.
                return Ok(thetas
                    .iter()
                    .map(|theta| ConditionD {
                        theta: theta.clone(),
                        eta: S::zero(),
                        mode: CheckMode::DensityBound,
                    })
                    .collect());
            }
        };
        return Ok(thetas
            .iter()
            .map(|theta| {
                let raw = S::one() - k.clone() * (S::one() - theta.clone());
                let eta = if raw > S::zero() { raw } else { S::zero() };
                ConditionD { theta: theta.clone(), eta, mode: CheckMode::DensityBound }
            })
            .collect());
    }

    // Subset masses μ(A) and min_x P(x,A) by lowest-set-bit recurrences.
    let subsets = 1usize << n;
    let mut subset_mu = vec![S::zero(); subsets];
    for mask in 1..subsets {
        let low = mask.trailing_zeros() as usize;
        subset_mu[mask] = subset_mu[mask & (mask - 1)].clone() + mu.mass()[low].clone();
    }
    let mut min_p = vec![S::zero(); subsets];
    let mut row_p = vec![S::zero(); subsets];
    for x in 0..n {
        let row = op.row(x);
        for mask in 1..subsets {
            let low = mask.trailing_zeros() as usize;
            row_p[mask] = row_p[mask & (mask - 1)].clone() + row[low].clone();
        }
        if x == 0 {
            min_p.clone_from(&row_p);
        } else {
            for (m, r) in min_p.iter_mut().zip(&row_p) {
                if r < m {
                    *m = r.clone();
                }
            }
        }
    }

    Ok(thetas
        .iter()
        .map(|theta| {
            // Ω always qualifies (μ(Ω) = 1 ≥ θ by contract), so seed with
            // it rather than trusting the float sum to reach θ = 1 exactly.
            let mut eta = min_p[subsets - 1].clone();
            for mask in 1..subsets - 1 {
                if subset_mu[mask] >= *theta && min_p[mask] < eta {
                    eta = min_p[mask].clone();
                }
            }
            ConditionD {
                theta: theta.clone(),
                eta,
                mode: CheckMode::Exhaustive,
            }
        })
        .collect())
}

/// A Condition D certificate for one kernel: every cell subset of
/// reference mass at least θ receives at least η from every state, with
/// the bounded-density constant attached when it exists.
#[derive(Debug, Clone)]
pub struct DoeblinCertificate<S: Scalar> {
    pub reference: SignedMeasure<S>,
    pub theta: S,
    pub eta: S,
    pub mode: CheckMode,
    /// `P(x,·) ≤ k·μ(·)` when finite.
    pub k: Option<S>,
}

/// Certify Condition D for a kernel at one θ; `None` when the constant is
/// unusable (η = 0 misses a qualifying set, η = 1 only holds vacuously).
pub fn doeblin_certificate<S: Scalar>(
    op: &MarkovOperator<S>,
    mu: &SignedMeasure<S>,
    theta: &S,
    strategy: CheckStrategy,
) -> Result<Option<DoeblinCertificate<S>>> {
    let report = condition_d_check(op, mu, theta, strategy)?;
    if !report.holds() {
        return Ok(None);
    }
    let k = bounded_density(op, mu)?.bound().cloned();
    Ok(Some(DoeblinCertificate {
        reference: mu.clone(),
        theta: report.theta,
        eta: report.eta,
        mode: report.mode,
        k,
    }))
}

/// The decomposition `P = Q + R` with `Q` truncated at density `C` with
/// respect to `μ`: `Q(x,y) = min(P(x,y), C·μ(y))`.
#[derive(Debug, Clone)]
pub struct Decomposition<S: Scalar> {
    pub q: MarkovOperator<S>,
    pub r: MarkovOperator<S>,
    /// Density cap the truncation used.
    pub c: S,
    /// `1 − max_x R(x,Ω)`: the mass the density-bounded part is guaranteed
    /// to keep, i.e. `‖R‖₁ ≤ 1 − eta_resid`.
    pub eta_resid: S,
}

pub fn yosida_decompose<S: Scalar>(
    op: &MarkovOperator<S>,
    mu: &SignedMeasure<S>,
    c: &S,
) -> Result<Decomposition<S>> {
    if !crate::measures::same_space(op.space(), mu.space()) {
        return Err(Error::SpaceMismatch);
    }
    if *c < S::zero() {
        return Err(Error::InvalidParameter("density cap C must be nonnegative".into()));
    }
    let n = op.len();
    for y in 0..n {
        if mu.mass()[y].is_zero() {
            for x in 0..n {
                if !op.entry(x, y).is_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "reference measure has no mass on cell {y} but row {x} moves mass there"
                    )));
                }
            }
        }
    }
    let mut q_rows = Vec::with_capacity(n);
    let mut r_rows = Vec::with_capacity(n);
    let mut max_r_mass = S::zero();
    for x in 0..n {
        let mut q_row = Vec::with_capacity(n);
        let mut r_row = Vec::with_capacity(n);
        let mut r_mass = S::zero();
        for y in 0..n {
            let cap = c.clone() * mu.mass()[y].clone();
            let q = smin(op.entry(x, y).clone(), cap);
            let r = op.entry(x, y).clone() - q.clone();
            r_mass = r_mass + r.clone();
            q_row.push(q);
            r_row.push(r);
        }
        if r_mass > max_r_mass {
            max_r_mass = r_mass;
        }
        q_rows.push(q_row);
        r_rows.push(r_row);
    }
    let tol = S::from_f64_nearest(crate::measures::DEFAULT_TOLERANCE);
    Ok(Decomposition {
        q: MarkovOperator::sub_stochastic(op.space(), q_rows, &tol)?,
        r: MarkovOperator::sub_stochastic(op.space(), r_rows, &tol)?,
        c: c.clone(),
        eta_resid: S::one() - max_r_mass,
    })
}

/// The quasi-compactness defect bound `(m+2)·(1−η)^m` for words made of
/// `m+1` Condition-D blocks. Values of 2 or more carry no information
/// (any two Markov operators are within distance 2).
pub fn quasi_compact_bound<S: Scalar>(m: usize, eta: &S) -> S {
    S::from_usize(m + 2).expect("small integer") * (S::one() - eta.clone()).powu(m)
}

/// Quasi-compactness certificate built from Condition D on all length-`n`
/// word operators: every word of length `r = n·blocks` is within
/// `defect_bound < 1` of a density-bounded (hence compact) operator.
#[derive(Debug, Clone)]
pub struct QuasiCompactCertificate<S: Scalar> {
    pub n_compose: usize,
    pub theta: S,
    /// Worst Condition D constant over all length-`n_compose` words.
    pub eta: S,
    /// Worst bounded-density constant, when every word had one.
    pub k_star: Option<S>,
    pub mode: CheckMode,
    /// Number of length-`n_compose` blocks needed to push the defect
    /// below one.
    pub blocks: usize,
    /// Word length `n_compose·blocks` at which the defect bound holds.
    pub r: usize,
    /// `(blocks+1)·(1−η)^(blocks−1) < 1`.
    pub defect_bound: S,
    /// `1 − defect_bound`, the margin in the quasi-compactness definition.
    pub delta: S,
}

#[derive(Debug, Clone)]
pub enum QuasiCompactOutcome<S: Scalar> {
    Certified(QuasiCompactCertificate<S>),
    Failed { witness: Word, detail: QuasiCompactFailure<S> },
}

#[derive(Debug, Clone)]
pub enum QuasiCompactFailure<S: Scalar> {
    /// Some word operator moves mass where the reference measure has none.
    UnboundedDensity { row: usize, cell: usize },
    /// No θ in the grid produced 0 < η < 1 for every word.
    NoUsableEta { k_star: S },
}

impl<S: Scalar> QuasiCompactOutcome<S> {
    pub fn certificate(&self) -> Option<&QuasiCompactCertificate<S>> {
        match self {
            QuasiCompactOutcome::Certified(c) => Some(c),
            QuasiCompactOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuasiCompactOptions {
    /// θ grid to scan; the best (θ, η) pair is the one maximizing η.
    pub theta_grid: Vec<f64>,
    pub word_budget: u128,
    pub strategy: CheckStrategy,
}

impl Default for QuasiCompactOptions {
    fn default() -> Self {
        QuasiCompactOptions {
            theta_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            word_budget: 1_000_000,
            strategy: CheckStrategy::Auto,
        }
    }
}

pub fn certify_quasi_compact<S: Scalar>(
    sys: &MarkovSystem<S>,
    mu: &SignedMeasure<S>,
    n_compose: usize,
    opts: &QuasiCompactOptions,
) -> Result<QuasiCompactOutcome<S>> {
    if n_compose < 1 {
        return Err(Error::InvalidParameter("n_compose must be at least 1".into()));
    }
    let need = words_of_length_count(sys.alphabet_len(), n_compose)
        .ok_or(Error::WordBudget { need: u128::MAX, budget: opts.word_budget })?;
    if need > opts.word_budget {
        return Err(Error::WordBudget { need, budget: opts.word_budget });
    }
    let thetas: Vec<S> = opts.theta_grid.iter().map(|t| S::from_f64_nearest(*t)).collect();

    let mut k_star: Option<S> = None;
    // Worst η per θ across all words; None until the first word lands.
    let mut eta_floor: Vec<Option<(S, CheckMode)>> = vec![None; thetas.len()];
    let mut failure: Option<(Word, QuasiCompactFailure<S>)> = None;
    walk_word_operators(sys, n_compose, &mut |word, op| {
        match bounded_density(op, mu)? {
            DensityBound::Bounded(k) => {
                if k_star.as_ref().is_none_or(|k0| k > *k0) {
                    k_star = Some(k);
                }
            }
            DensityBound::Unbounded { row, cell } => {
                failure = Some((
                    word.clone(),
                    QuasiCompactFailure::UnboundedDensity { row, cell },
                ));
                return Ok(false);
            }
        }
        for (slot, report) in eta_floor
            .iter_mut()
            .zip(condition_d_scan(op, mu, &thetas, opts.strategy)?)
        {
            match slot {
                Some((eta, _)) if *eta <= report.eta => {}
                _ => *slot = Some((report.eta, report.mode)),
            }
        }
        Ok(true)
    })?;
    if let Some((witness, detail)) = failure {
        return Ok(QuasiCompactOutcome::Failed { witness, detail });
    }
    let k_star = k_star.expect("at least one word");

    // Best usable (θ, η): maximize η subject to 0 < η < 1.
    let mut best: Option<(S, S, CheckMode)> = None;
    for (theta, slot) in thetas.iter().zip(&eta_floor) {
        let (eta, mode) = slot.clone().expect("scanned");
        if eta > S::zero() && eta < S::one() {
            match &best {
                Some((_, e, _)) if *e >= eta => {}
                _ => best = Some((theta.clone(), eta, mode)),
            }
        }
    }
    let Some((theta, eta, mode)) = best else {
        // Report against the first word in lexicographic order.
        return Ok(QuasiCompactOutcome::Failed {
            witness: first_word(sys, n_compose)?,
            detail: QuasiCompactFailure::NoUsableEta { k_star },
        });
    };

    let mut blocks = 1;
    let defect_bound = loop {
        let bound = quasi_compact_bound(blocks - 1, &eta);
        if bound < S::one() {
            break bound;
        }
        blocks += 1;
    };
    Ok(QuasiCompactOutcome::Certified(QuasiCompactCertificate {
        n_compose,
        theta,
        delta: S::one() - defect_bound.clone(),
        eta,
        k_star: Some(k_star),
        mode,
        blocks,
        r: n_compose * blocks,
        defect_bound,
    }))
}

fn first_word<S: Scalar>(sys: &MarkovSystem<S>, len: usize) -> Result<Word> {
    let mut first = Word::empty();
    walk_word_operators(sys, len, &mut |word, _| {
        first = word.clone();
        Ok(false)
    })?;
    Ok(first)
}

//! Perturbation margins, perturbation generation, and language-preservation
//! verification for weakly ergodic systems.
//!
//! The stability story: pick `r` with `δ(P_w) ≤ β/7` on all length-`r` words
//! and perturb every letter by at most `ε = β/r`. Short words drift linearly
//! (`‖P_w − P̃_w‖₁ ≤ |w|·ε`), and for long words the last `r` symbols
//! dominate: with `v` the trailing block,
//! `‖P_w − P̃_w‖₁ ≤ 4δ(P_v) + 3‖P_v − P̃_v‖₁`. Both chains are checked
//! empirically per enumerated word, alongside oracle-verdict agreement and
//! DFA equivalence. Language equality is verified to a stated horizon, not
//! proven.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ergodicity::dobrushin;
use crate::extraction::{dfa_equiv, extract_dfa, Equivalence, ExtractOptions};
use crate::measures::{MarkovOperator, MarkovSystem, walk_word_operators};
use crate::recognition::{oracle_scan, OracleOptions, Recognizer};
use crate::words::{words_of_length_count, Word};
use crate::{Error, Result};

/// A perturbation budget: letters may move by `epsilon = beta / r` while all
/// length-`r` words keep `δ(P_w) ≤ beta / 7`.
#[derive(Debug, Clone)]
pub struct StabilityMargin {
    pub beta: f64,
    pub r: usize,
    pub epsilon: f64,
    /// `max_{w ∈ Σ^r} δ(P_w)`, at most `beta / 7`.
    pub worst_delta: f64,
}

#[derive(Debug, Clone)]
pub enum MarginOutcome {
    Found(StabilityMargin),
    /// The system never contracted to `beta / 7` within the search depth.
    Failed { r_max: usize, witness: Word, delta: f64 },
}

impl MarginOutcome {
    pub fn margin(&self) -> Option<&StabilityMargin> {
        match self {
            MarginOutcome::Found(m) => Some(m),
            MarginOutcome::Failed { .. } => None,
        }
    }
}

/// Smallest `r ≤ r_max` with `max_{w ∈ Σ^r} δ(P_w) ≤ beta/7`, exhaustive
/// per level.
pub fn stability_margin(
    sys: &MarkovSystem<f64>,
    beta: f64,
    r_max: usize,
    word_budget: u128,
) -> Result<MarginOutcome> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidParameter("beta must be positive".into()));
    }
    if r_max < 1 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    let target = beta / 7.0;
    let mut spent: u128 = 0;
    let mut last_worst: Option<(Word, f64)> = None;
    for r in 1..=r_max {
        let level = words_of_length_count(sys.alphabet_len(), r)
            .ok_or(Error::WordBudget { need: u128::MAX, budget: word_budget })?;
        spent = spent.saturating_add(level);
        if spent > word_budget {
            return Err(Error::WordBudget { need: spent, budget: word_budget });
        }
        let mut worst: Option<(Word, f64)> = None;
        walk_word_operators(sys, r, &mut |word, op| {
            let delta = dobrushin(op);
            match &worst {
                Some((_, d)) if delta <= *d => {}
                _ => worst = Some((word.clone(), delta)),
            }
            Ok(true)
        })?;
        let (witness, worst_delta) = worst.expect("non-empty alphabet");
        if worst_delta <= target {
            return Ok(MarginOutcome::Found(StabilityMargin {
                beta,
                r,
                epsilon: beta / r as f64,
                worst_delta,
            }));
        }
        last_worst = Some((witness, worst_delta));
    }
    let (witness, delta) = last_worst.expect("r_max ≥ 1");
    Ok(MarginOutcome::Failed { r_max, witness, delta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbMode {
    /// Perturb every row of every letter.
    Dense,
    /// Perturb one seeded row per letter.
    Sparse,
}

/// A perturbed system with its re-measured distances (the noise is scaled
/// back wherever the simplex got in the way, so realized distances are
/// measured, never assumed).
#[derive(Debug, Clone)]
pub struct Perturbed {
    pub system: MarkovSystem<f64>,
    /// `‖P_u − P̃_u‖₁` per letter.
    pub per_letter_distance: Vec<f64>,
    /// Max over letters.
    pub realized_distance: f64,
}

/// Randomly perturb each letter by at most `epsilon` in the induced norm.
/// Each perturbed row stays on the probability simplex: a zero-sum noise
/// row scaled to the target distance is added, then pulled back toward the
/// original row just enough to keep every entry nonnegative.
pub fn perturb(
    sys: &MarkovSystem<f64>,
    epsilon: f64,
    seed: u64,
    mode: PerturbMode,
) -> Result<Perturbed> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidParameter("epsilon must be nonnegative".into()));
    }
    let n = sys.space().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut operators = Vec::with_capacity(sys.alphabet_len());
    let mut per_letter = Vec::with_capacity(sys.alphabet_len());
    for u in 0..sys.alphabet_len() {
        let op = sys.operator(u)?;
        let mut rows: Vec<Vec<f64>> = op.rows().map(<[f64]>::to_vec).collect();
        if epsilon > 0.0 {
            let targets: Vec<usize> = match mode {
                PerturbMode::Dense => (0..n).collect(),
                PerturbMode::Sparse => vec![rng.gen_range(0..n)],
            };
            for x in targets {
                perturb_row(&mut rows[x], epsilon, &mut rng);
            }
        }
        let perturbed = MarkovOperator::stochastic(sys.space(), rows, sys.tolerance())?;
        per_letter.push(perturbed.op_distance(op)?);
        operators.push(perturbed);
    }
    let realized_distance = per_letter.iter().cloned().fold(0.0, f64::max);
    Ok(Perturbed {
        system: sys.with_operators(operators)?,
        per_letter_distance: per_letter,
        realized_distance,
    })
}

fn perturb_row<R: Rng>(row: &mut [f64], epsilon: f64, rng: &mut R) {
    let n = row.len();
    let mut noise: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = noise.iter().sum::<f64>() / n as f64;
    for g in &mut noise {
        *g -= mean;
    }
    let norm: f64 = noise.iter().map(|g| g.abs()).sum();
    if norm < 1e-12 {
        return; // degenerate draw; leave the row untouched
    }
    for g in &mut noise {
        *g *= epsilon / norm;
    }
    // Largest step along the noise ray that keeps the row nonnegative.
    let mut scale: f64 = 1.0;
    for (p, g) in row.iter().zip(&noise) {
        if *g < 0.0 {
            scale = scale.min(p / -g);
        }
    }
    for (p, g) in row.iter_mut().zip(&noise) {
        *p = (*p + scale * g).max(0.0);
    }
}

/// One side of a stability comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Original,
    Perturbed,
}

/// Outcome of the optional DFA comparison inside [`verify_stability`].
#[derive(Debug, Clone)]
pub enum DfaCheck {
    Equal,
    Counterexample(Word),
    /// Extraction found an undecided distribution on this side — a finding,
    /// since stability asserts the perturbed system remains a recognizer.
    NotARecognizer { side: Side, word: String },
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub horizon: usize,
    pub tol: f64,
    /// Block length for the trailing-block chain check (a stability margin's
    /// `r`); skipped when absent.
    pub block_r: Option<usize>,
    /// Assert the enumerated max distance stays within this budget.
    pub beta: Option<f64>,
    /// Extract and compare DFAs at this merge radius.
    pub extract_radius: Option<f64>,
    pub word_budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            horizon: 8,
            tol: 1e-9,
            block_r: None,
            beta: None,
            extract_radius: None,
            word_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub horizon: usize,
    pub per_letter_distance: Vec<f64>,
    /// Measured per-letter max, the ε̂ the linear chain uses.
    pub max_letter_distance: f64,
    pub max_word_distance: f64,
    pub argmax_word: Word,
    /// `‖P_w − P̃_w‖₁ ≤ |w|·ε̂ + tol` for every enumerated word.
    pub linear_chain_ok: bool,
    /// `‖P_w − P̃_w‖₁ ≤ 4δ(P_v) + 3‖P_v − P̃_v‖₁ + tol` with `v` the last
    /// `block_r` symbols, for every enumerated word of length ≥ `block_r`.
    pub block_chain_ok: Option<bool>,
    /// `max_word_distance ≤ beta + tol`, when a budget was given.
    pub within_beta: Option<bool>,
    /// `δ(P̃_w) ≤ δ(P_w) + ‖P_w − P̃_w‖₁ + tol` for every enumerated word.
    pub delta_transfer_ok: bool,
    /// Words whose verdicts differ between the two systems.
    pub verdict_disagreements: Vec<Word>,
    /// First undecided word per side, if any.
    pub undecided_witness: Vec<(Side, Word)>,
    pub dfa_check: Option<DfaCheck>,
}

impl StabilityReport {
    pub fn languages_agree(&self) -> bool {
        self.verdict_disagreements.is_empty() && self.undecided_witness.is_empty()
    }
}

/// Enumerates all words up to the horizon on a pair of similar systems
/// (same space, alphabet, and recognizer) and reports distances, chain
/// inequalities, verdict agreement, and optionally DFA equivalence.
pub fn verify_stability(
    original: &MarkovSystem<f64>,
    perturbed: &MarkovSystem<f64>,
    rec: &Recognizer<f64>,
    opts: &VerifyOptions,
) -> Result<StabilityReport> {
    if original.alphabet() != perturbed.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !crate::measures::same_space(original.space(), perturbed.space()) {
        return Err(Error::SpaceMismatch);
    }

    let mut per_letter = Vec::with_capacity(original.alphabet_len());
    for u in 0..original.alphabet_len() {
        per_letter.push(original.operator(u)?.op_distance(perturbed.operator(u)?)?);
    }
    let max_letter_distance = per_letter.iter().cloned().fold(0.0, f64::max);

    // Trailing-block data per suffix v ∈ Σ^block_r: (δ(P_v), ‖P_v − P̃_v‖₁).
    let block_data: Option<std::collections::BTreeMap<Word, (f64, f64)>> =
        match opts.block_r {
            None => None,
            Some(r) => {
                let mut map = std::collections::BTreeMap::new();
                walk_word_operators(original, r, &mut |word, op| {
                    map.insert(word.clone(), (dobrushin(op), 0.0));
                    Ok(true)
                })?;
                walk_word_operators(perturbed, r, &mut |word, op| {
                    let entry = map.get_mut(word).expect("same alphabet");
                    entry.1 = original.compose_word(word)?.op_distance(op)?;
                    Ok(true)
                })?;
                Some(map)
            }
        };

    // Depth-first over word pairs, carrying both composed operators.
    struct Walk<'a> {
        original: &'a MarkovSystem<f64>,
        perturbed: &'a MarkovSystem<f64>,
        opts: &'a VerifyOptions,
        max_letter_distance: f64,
        block_data: Option<std::collections::BTreeMap<Word, (f64, f64)>>,
        max_word_distance: f64,
        argmax_word: Word,
        linear_chain_ok: bool,
        block_chain_ok: Option<bool>,
        delta_transfer_ok: bool,
    }
    impl Walk<'_> {
        fn visit(
            &mut self,
            word: &mut Vec<usize>,
            p: &MarkovOperator<f64>,
            pt: &MarkovOperator<f64>,
        ) -> Result<()> {
            let d = p.op_distance(pt)?;
            if d > self.max_word_distance {
                self.max_word_distance = d;
                self.argmax_word = Word::from_indices(word.iter().copied());
            }
            if d > word.len() as f64 * self.max_letter_distance + self.opts.tol {
                self.linear_chain_ok = false;
            }
            if dobrushin(pt) > dobrushin(p) + d + self.opts.tol {
                self.delta_transfer_ok = false;
            }
            if let (Some(map), Some(r)) = (&self.block_data, self.opts.block_r) {
                if word.len() >= r {
                    let v = Word::from_indices(word[word.len() - r..].iter().copied());
                    let (delta_v, dist_v) = map[&v];
                    if d > 4.0 * delta_v + 3.0 * dist_v + self.opts.tol {
                        self.block_chain_ok = Some(false);
                    }
                }
            }
            if word.len() < self.opts.horizon {
                for s in 0..self.original.alphabet_len() {
                    word.push(s);
                    let np = p.then(self.original.operator(s)?)?;
                    let npt = pt.then(self.perturbed.operator(s)?)?;
                    self.visit(word, &np, &npt)?;
                    word.pop();
                }
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        original,
        perturbed,
        opts,
        max_letter_distance,
        block_data,
        max_word_distance: 0.0,
        argmax_word: Word::empty(),
        linear_chain_ok: true,
        block_chain_ok: opts.block_r.map(|_| true),
        delta_transfer_ok: true,
    };
    let identity = MarkovOperator::identity(original.space());
    walk.visit(&mut Vec::new(), &identity, &identity.clone())?;

    // Oracle verdict comparison (scan mode: undecided is a finding).
    let oracle_opts = OracleOptions { word_budget: opts.word_budget, ..OracleOptions::default() };
    let run_original = oracle_scan(original, rec, opts.horizon, &oracle_opts)?;
    let run_perturbed = oracle_scan(perturbed, rec, opts.horizon, &oracle_opts)?;
    let mut disagreements = Vec::new();
    for (a, b) in run_original.entries.iter().zip(&run_perturbed.entries) {
        debug_assert_eq!(a.word, b.word);
        if a.classification.verdict != b.classification.verdict {
            disagreements.push(a.word.clone());
        }
    }
    let mut undecided_witness = Vec::new();
    if let Some(&i) = run_original.undecided.first() {
        undecided_witness.push((Side::Original, run_original.entries[i].word.clone()));
    }
    if let Some(&i) = run_perturbed.undecided.first() {
        undecided_witness.push((Side::Perturbed, run_perturbed.entries[i].word.clone()));
    }

    let dfa_check = match opts.extract_radius {
        None => None,
        Some(radius) => Some(compare_dfas(original, perturbed, rec, radius)?),
    };

    Ok(StabilityReport {
        horizon: opts.horizon,
        per_letter_distance: per_letter,
        max_letter_distance,
        max_word_distance: walk.max_word_distance,
        argmax_word: walk.argmax_word,
        linear_chain_ok: walk.linear_chain_ok,
        block_chain_ok: walk.block_chain_ok,
        within_beta: opts.beta.map(|beta| walk.max_word_distance <= beta + opts.tol),
        delta_transfer_ok: walk.delta_transfer_ok,
        verdict_disagreements: disagreements,
        undecided_witness,
        dfa_check,
    })
}

fn compare_dfas(
    original: &MarkovSystem<f64>,
    perturbed: &MarkovSystem<f64>,
    rec: &Recognizer<f64>,
    radius: f64,
) -> Result<DfaCheck> {
    let opts = ExtractOptions::default();
    let a = match extract_dfa(original, rec, radius, &opts) {
        Ok(out) => out,
        Err(Error::NotARecognizer { word }) => {
            return Ok(DfaCheck::NotARecognizer { side: Side::Original, word })
        }
        Err(e) => return Err(e),
    };
    let b = match extract_dfa(perturbed, rec, radius, &opts) {
        Ok(out) => out,
        Err(Error::NotARecognizer { word }) => {
            return Ok(DfaCheck::NotARecognizer { side: Side::Perturbed, word })
        }
        Err(e) => return Err(e),
    };
    Ok(match dfa_equiv(&a.dfa, &b.dfa)? {
        Equivalence::Equal => DfaCheck::Equal,
        Equivalence::Counterexample(w) => DfaCheck::Counterexample(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{SignedMeasure, StateSpace, DEFAULT_TOLERANCE};
    use crate::recognition::{AcceptancePredicate, Verdict};
    use crate::scalar::Scalar;

    /// One letter with δ exactly 0.125 (dyadic, so the arithmetic is exact):
    /// rows are `0.875·φ + 0.125·eₓ`.
    fn contracting_one_letter() -> MarkovSystem<f64> {
        let space = StateSpace::with_size(3);
        let phi = [0.5, 0.25, 0.25];
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|x| {
                (0..3)
                    .map(|y| 0.875 * phi[y] + if x == y { 0.125 } else { 0.0 })
                    .collect()
            })
            .collect();
        let op = MarkovOperator::stochastic(&space, rows, &DEFAULT_TOLERANCE).unwrap();
        MarkovSystem::new(
            vec!["a".into()],
            vec![op],
            SignedMeasure::point_mass(&space, 0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap()
    }

    #[test]
    fn margin_at_level_one_for_contracting_letter() {
        let sys = contracting_one_letter();
        assert_eq!(dobrushin(&sys.operators()[0]), 0.125);
        // β/7 = 0.875/7 = 0.125 exactly, so r = 1 and ε = β.
        match stability_margin(&sys, 0.875, 4, 1_000_000).unwrap() {
            MarginOutcome::Found(m) => {
                assert_eq!(m.r, 1);
                assert_eq!(m.epsilon, 0.875);
                assert_eq!(m.worst_delta, 0.125);
            }
            MarginOutcome::Failed { .. } => panic!("margin exists"),
        }
    }

    #[test]
    fn identity_letter_has_no_margin() {
        let space = StateSpace::with_size(2);
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::identity(&space)],
            SignedMeasure::uniform(&space),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        match stability_margin(&sys, 0.7, 5, 1_000_000).unwrap() {
            MarginOutcome::Failed { witness, delta, .. } => {
                assert_eq!(witness, Word::repeated(0, 5));
                assert_eq!(delta, 1.0);
            }
            MarginOutcome::Found(_) => panic!("identity never contracts"),
        }
    }

    #[test]
    fn margin_search_depth_matches_submultiplicative_estimate() {
        // Two letters with δ = 0.6 each: 0.6^5 ≈ 0.078 ≤ 0.7/7, so r ≤ 5.
        let space = StateSpace::with_size(3);
        let phi = SignedMeasure::new(&space, vec![0.4, 0.3, 0.3]).unwrap();
        let blend = |other: &MarkovOperator<f64>| {
            let rows = (0..3)
                .map(|x| {
                    (0..3)
                        .map(|y| 0.4 * phi.mass()[y] + 0.6 * other.entry(x, y))
                        .collect()
                })
                .collect();
            MarkovOperator::stochastic(&space, rows, &DEFAULT_TOLERANCE).unwrap()
        };
        let ident = blend(&MarkovOperator::identity(&space));
        let swap = blend(
            &MarkovOperator::stochastic(
                &space,
                vec![
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                    vec![1.0, 0.0, 0.0],
                ],
                &DEFAULT_TOLERANCE,
            )
            .unwrap(),
        );
        assert!((dobrushin(&ident) - 0.6).abs() < 1e-12);
        assert!((dobrushin(&swap) - 0.6).abs() < 1e-12);
        let sys = MarkovSystem::new(
            vec!["a".into(), "b".into()],
            vec![ident, swap],
            SignedMeasure::uniform(&space),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        match stability_margin(&sys, 0.7, 6, 1_000_000).unwrap() {
            MarginOutcome::Found(m) => {
                assert!(m.r <= 5, "submultiplicativity caps r at 5, got {}", m.r);
                assert!(m.worst_delta <= 0.1);
                assert!((m.epsilon - 0.7 / m.r as f64).abs() < 1e-15);
            }
            MarginOutcome::Failed { .. } => panic!("margin exists by submultiplicativity"),
        }
    }

    #[test]
    fn zero_perturbation_is_the_identity() {
        let sys = contracting_one_letter();
        let p = perturb(&sys, 0.0, 42, PerturbMode::Dense).unwrap();
        assert_eq!(p.realized_distance, 0.0);
        assert_eq!(p.system.operators()[0], sys.operators()[0]);
    }

    #[test]
    fn perturbations_stay_within_epsilon_and_on_the_simplex() {
        let sys = contracting_one_letter();
        for seed in 0..20 {
            for mode in [PerturbMode::Dense, PerturbMode::Sparse] {
                let p = perturb(&sys, 0.3, seed, mode).unwrap();
                assert!(p.realized_distance <= 0.3 + 1e-12);
                for op in p.system.operators() {
                    assert!(op.validate(&DEFAULT_TOLERANCE).is_valid());
                }
                // Postcondition re-measured from scratch.
                let d = p.system.operators()[0]
                    .op_distance(&sys.operators()[0])
                    .unwrap();
                assert!((d - p.realized_distance).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perturbation_is_deterministic_in_the_seed() {
        let sys = contracting_one_letter();
        let a = perturb(&sys, 0.2, 42, PerturbMode::Dense).unwrap();
        let b = perturb(&sys, 0.2, 42, PerturbMode::Dense).unwrap();
        assert_eq!(a.system.operators(), b.system.operators());
        let c = perturb(&sys, 0.2, 43, PerturbMode::Dense).unwrap();
        assert_ne!(a.system.operators(), c.system.operators());
    }

    fn recognizer_for(sys: &MarkovSystem<f64>) -> Recognizer<f64> {
        Recognizer::new(sys.space(), [0].into(), 0.35, 0.06).unwrap()
    }

    #[test]
    fn self_comparison_is_clean() {
        let sys = contracting_one_letter();
        let rec = recognizer_for(&sys);
        let report = verify_stability(&sys, &sys, &rec, &VerifyOptions::default()).unwrap();
        assert_eq!(report.max_word_distance, 0.0);
        assert!(report.linear_chain_ok);
        assert!(report.delta_transfer_ok);
        assert!(report.languages_agree());
    }

    #[test]
    fn certified_perturbation_preserves_the_language() {
        let sys = contracting_one_letter();
        let rec = recognizer_for(&sys);
        let beta = 0.05;
        let margin = stability_margin(&sys, beta, 4, 1_000_000)
            .unwrap()
            .margin()
            .cloned()
            .expect("contracting letter has a margin");
        let p = perturb(&sys, margin.epsilon, 7, PerturbMode::Dense).unwrap();
        let opts = VerifyOptions {
            horizon: 10,
            block_r: Some(margin.r),
            beta: Some(beta),
            extract_radius: Some(rec.induced_gap().half()),
            ..VerifyOptions::default()
        };
        let report = verify_stability(&sys, &p.system, &rec, &opts).unwrap();
        assert!(report.within_beta.unwrap());
        assert!(report.linear_chain_ok);
        assert_eq!(report.block_chain_ok, Some(true));
        assert!(report.delta_transfer_ok);
        assert!(report.languages_agree(), "{:?}", report.verdict_disagreements);
        assert!(matches!(report.dfa_check, Some(DfaCheck::Equal)));
    }

    #[test]
    fn oversized_perturbation_produces_a_disagreement_witness() {
        // Shift mass off the accepting cell in every row: every nonempty
        // word flips from Accept to Reject.
        let sys = contracting_one_letter();
        let rec = recognizer_for(&sys);
        let shifted_rows: Vec<Vec<f64>> = sys.operators()[0]
            .rows()
            .map(|row| vec![row[0] - 0.4, row[1] + 0.4, row[2]])
            .collect();
        let shifted = MarkovOperator::stochastic(
            sys.space(),
            shifted_rows,
            &DEFAULT_TOLERANCE,
        )
        .unwrap();
        let adversarial = sys.with_operators(vec![shifted]).unwrap();
        // Sanity: the shifted one-step image now rejects.
        let mu = adversarial.distribution(&Word::from_indices([0])).unwrap();
        assert_eq!(rec.classify(&mu).unwrap().verdict, Verdict::Reject);

        let report =
            verify_stability(&sys, &adversarial, &rec, &VerifyOptions::default()).unwrap();
        assert!(!report.verdict_disagreements.is_empty());
        assert_eq!(report.verdict_disagreements[0], Word::from_indices([0]));
    }
}

//! Language extraction: the computational payoff.
//!
//! If two words drive the initial distribution to within the recognizer's
//! gap ρ, they are language-equivalent — pushing both distributions through
//! any continuation operator cannot separate them again, so opposite
//! verdicts would need a distance the gap forbids. A finite ε-net of the
//! orbit therefore yields a finite automaton. [`extract_dfa`] builds that
//! automaton breadth-first at a merge radius `t < ρ`; [`definite_order`] and
//! [`definite_language_table`] do the analogous construction for weakly
//! ergodic systems, where the last `r` symbols determine membership; and
//! [`orbit_cover`]/[`operator_cover`] report greedy covering numbers, the
//! empirical stand-in for the Kuratowski measure of non-compactness (a
//! finite greedy ε-net certifies α ≤ 2ε; net sizes are reported, exact α is
//! never claimed).

pub mod dfa;

pub use dfa::{dfa_equiv, minimize, Dfa, Equivalence};

use std::collections::{BTreeMap, VecDeque};

use crate::ergodicity::dobrushin;
use crate::measures::{
    walk_word_distributions, walk_word_operators, MarkovSystem, SignedMeasure,
};
use crate::recognition::{AcceptancePredicate, OracleRun, Verdict};
use crate::scalar::Scalar;
use crate::words::{words_of_length, words_of_length_count, words_up_to_count, Word};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    /// Hitting this is reported as "no finite extraction at this radius";
    /// termination is only guaranteed for quasi-compact systems.
    pub max_states: usize,
    /// Cap on representative word length (frontier depth).
    pub max_word_len: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { max_states: 10_000, max_word_len: 256 }
    }
}

/// How an [`ExtractedDfa`] was produced.
#[derive(Debug, Clone)]
pub enum Provenance<S: Scalar> {
    /// Orbit covering at a merge radius below the recognizer gap.
    RabinReduction { merge_radius: S },
    /// Suffix table of a definite-order certificate.
    DefiniteSuffix { order: usize, worst_delta: S },
}

/// One extracted state: the first word (in shortlex order) that reached it
/// and the distribution that word produces.
#[derive(Debug, Clone)]
pub struct Representative<S: Scalar> {
    pub word: Word,
    pub distribution: SignedMeasure<S>,
    pub verdict: Verdict,
}

/// A DFA with per-state provenance.
#[derive(Debug, Clone)]
pub struct ExtractedDfa<S: Scalar> {
    pub dfa: Dfa,
    pub representatives: Vec<Representative<S>>,
    pub provenance: Provenance<S>,
}

/// Breadth-first right-congruence construction. Each new word's distribution
/// is matched against existing representatives; within `merge_radius` it
/// joins that state (the merge radius is below the gap, so the words are
/// genuinely equivalent and the greedy first-match assignment is safe),
/// otherwise it becomes a new state whose one-letter extensions enter the
/// frontier. Terminates when the frontier empties.
pub fn extract_dfa<S: Scalar, P: AcceptancePredicate<S>>(
    sys: &MarkovSystem<S>,
    pred: &P,
    merge_radius: S,
    opts: &ExtractOptions,
) -> Result<ExtractedDfa<S>> {
    let gap = pred.gap();
    if merge_radius <= S::zero() || merge_radius >= gap {
        return Err(Error::InvalidParameter(format!(
            "merge radius must satisfy 0 < t < ρ (t = {merge_radius}, ρ = {gap})"
        )));
    }
    if opts.max_states == 0 {
        return Err(Error::InvalidParameter("max_states must be positive".into()));
    }

    let decisive = |word: &Word, mu: &SignedMeasure<S>| -> Result<Verdict> {
        let verdict = pred.classify(mu)?.verdict;
        if verdict.is_decisive() {
            Ok(verdict)
        } else {
            Err(Error::NotARecognizer { word: word.display(sys.alphabet()) })
        }
    };

    let mut states: Vec<Representative<S>> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let initial = sys.initial().clone();
    states.push(Representative {
        verdict: decisive(&Word::empty(), &initial)?,
        word: Word::empty(),
        distribution: initial,
    });
    transitions.push(vec![usize::MAX; sys.alphabet_len()]);

    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while let Some(q) = frontier.pop_front() {
        for s in 0..sys.alphabet_len() {
            let mu = sys.operator(s)?.apply(&states[q].distribution)?;
            let matched = states
                .iter()
                .position(|rep| {
                    rep.distribution
                        .distance(&mu)
                        .expect("one space throughout")
                        < merge_radius
                })
                .map(Ok::<usize, Error>)
                .unwrap_or_else(|| {
                    // New equivalence class representative.
                    if states.len() >= opts.max_states {
                        return Err(Error::StateBudget { max_states: opts.max_states });
                    }
                    let word = states[q].word.extended(s);
                    if word.len() > opts.max_word_len {
                        return Err(Error::DepthBudget { max_len: opts.max_word_len });
                    }
                    states.push(Representative {
                        verdict: decisive(&word, &mu)?,
                        word,
                        distribution: mu,
                    });
                    transitions.push(vec![usize::MAX; sys.alphabet_len()]);
                    frontier.push_back(states.len() - 1);
                    Ok(states.len() - 1)
                })?;
            transitions[q][s] = matched;
        }
    }

    let accepting = states.iter().map(|rep| rep.verdict == Verdict::Accept).collect();
    let dfa = Dfa::new(sys.alphabet().to_vec(), 0, accepting, transitions)?;
    Ok(ExtractedDfa {
        dfa,
        representatives: states,
        provenance: Provenance::RabinReduction { merge_radius },
    })
}

/// Words (of length within the oracle horizon) on which a DFA disagrees
/// with an oracle run.
pub fn oracle_cross_check<S: Scalar>(dfa: &Dfa, run: &OracleRun<S>) -> Vec<Word> {
    run.entries
        .iter()
        .filter(|entry| {
            let expected = entry.classification.verdict == Verdict::Accept;
            dfa.accepts(&entry.word) != expected
        })
        .map(|entry| entry.word.clone())
        .collect()
}

/// Certificate that every length-`r_star` word operator contracts to within
/// half the recognizer gap: membership is then determined by the last
/// `r_star` symbols.
#[derive(Debug, Clone)]
pub struct DefiniteCertificate<S: Scalar> {
    pub r_star: usize,
    /// `max_{u ∈ Σ^{r_star}} δ(P_u) < gap/2`.
    pub worst_delta: S,
    pub gap: S,
    /// Anchor distribution `P_u(uniform)` per suffix; any `P_u ν` lies
    /// within `2·worst_delta` of its anchor.
    pub suffix_profiles: Vec<(Word, SignedMeasure<S>)>,
}

#[derive(Debug, Clone)]
pub enum DefiniteOutcome<S: Scalar> {
    Certified(DefiniteCertificate<S>),
    Failed { r_max: usize, witness: Word, delta: S },
}

impl<S: Scalar> DefiniteOutcome<S> {
    pub fn certificate(&self) -> Option<&DefiniteCertificate<S>> {
        match self {
            DefiniteOutcome::Certified(c) => Some(c),
            DefiniteOutcome::Failed { .. } => None,
        }
    }
}

/// Smallest `r ≤ r_max` with `max_{u ∈ Σ^r} δ(P_u) < gap/2`, exhaustive
/// over `Σ^r`. The halved gap is what forbids opposite verdicts for `wu`
/// versus `u`: `‖P_u(μ − ν)‖₁ ≤ 2δ(P_u) < ρ`.
pub fn definite_order<S: Scalar>(
    sys: &MarkovSystem<S>,
    gap: S,
    r_max: usize,
    word_budget: u128,
) -> Result<DefiniteOutcome<S>> {
    if r_max < 1 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    if gap <= S::zero() {
        return Err(Error::InvalidParameter("gap must be positive".into()));
    }
    let threshold = gap.clone().half();
    let mut spent: u128 = 0;
    let mut last_worst: Option<(Word, S)> = None;
    for r in 1..=r_max {
        let level = words_of_length_count(sys.alphabet_len(), r)
            .ok_or(Error::WordBudget { need: u128::MAX, budget: word_budget })?;
        spent = spent.saturating_add(level);
        if spent > word_budget {
            return Err(Error::WordBudget { need: spent, budget: word_budget });
        }
        let mut worst: Option<(Word, S)> = None;
        let mut profiles = Vec::new();
        let uniform = SignedMeasure::uniform(sys.space());
        walk_word_operators(sys, r, &mut |word, op| {
            let delta = dobrushin(op);
            match &worst {
                Some((_, d)) if delta <= *d => {}
                _ => worst = Some((word.clone(), delta)),
            }
            profiles.push((word.clone(), op.apply(&uniform)?));
            Ok(true)
        })?;
        let (witness, worst_delta) = worst.expect("non-empty alphabet");
        if worst_delta < threshold {
            return Ok(DefiniteOutcome::Certified(DefiniteCertificate {
                r_star: r,
                worst_delta,
                gap,
                suffix_profiles: profiles,
            }));
        }
        last_worst = Some((witness, worst_delta));
    }
    let (witness, delta) = last_worst.expect("r_max ≥ 1");
    Ok(DefiniteOutcome::Failed { r_max, witness, delta })
}

/// The canonical suffix automaton of a definite language: a prefix tree for
/// words shorter than `r_star` plus one class per length-`r_star` suffix.
/// Words of length ≥ `r_star` are classified by their own suffix orbit point
/// `P_u μ₀`, sound because `wu` and `u` get equal verdicts under the
/// certificate.
pub fn definite_language_table<S: Scalar, P: AcceptancePredicate<S>>(
    sys: &MarkovSystem<S>,
    pred: &P,
    cert: &DefiniteCertificate<S>,
) -> Result<ExtractedDfa<S>> {
    let r = cert.r_star;
    let k = sys.alphabet_len();
    let decisive = |word: &Word, mu: &SignedMeasure<S>| -> Result<Verdict> {
        let verdict = pred.classify(mu)?.verdict;
        if verdict.is_decisive() {
            Ok(verdict)
        } else {
            Err(Error::NotARecognizer { word: word.display(sys.alphabet()) })
        }
    };

    // Prefix-tree states for words of length < r, in shortlex order.
    let mut reps: Vec<Representative<S>> = Vec::new();
    let mut prefix_index: BTreeMap<Word, usize> = BTreeMap::new();
    for len in 0..r {
        for word in words_of_length(k, len) {
            let mu = sys.distribution(&word)?;
            prefix_index.insert(word.clone(), reps.len());
            reps.push(Representative {
                verdict: decisive(&word, &mu)?,
                word,
                distribution: mu,
            });
        }
    }
    // One state per length-r suffix class.
    let mut suffix_index: BTreeMap<Word, usize> = BTreeMap::new();
    for word in words_of_length(k, r) {
        let mu = sys.distribution(&word)?;
        suffix_index.insert(word.clone(), reps.len());
        reps.push(Representative {
            verdict: decisive(&word, &mu)?,
            word,
            distribution: mu,
        });
    }

    let mut transitions = vec![vec![usize::MAX; k]; reps.len()];
    for (word, &q) in &prefix_index {
        for (s, slot) in transitions[q].iter_mut().enumerate() {
            let next = word.extended(s);
            *slot = if next.len() < r {
                prefix_index[&next]
            } else {
                suffix_index[&next]
            };
        }
    }
    for (word, &q) in &suffix_index {
        for (s, slot) in transitions[q].iter_mut().enumerate() {
            *slot = suffix_index[&word.extended(s).suffix(r)];
        }
    }

    let accepting = reps.iter().map(|rep| rep.verdict == Verdict::Accept).collect();
    let dfa = Dfa::new(sys.alphabet().to_vec(), 0, accepting, transitions)?;
    Ok(ExtractedDfa {
        dfa,
        representatives: reps,
        provenance: Provenance::DefiniteSuffix {
            order: r,
            worst_delta: cert.worst_delta.clone(),
        },
    })
}

/// Greedy ε-net sizes of orbit or operator sets, level by level.
#[derive(Debug, Clone)]
pub struct CoveringReport<S: Scalar> {
    pub epsilon: S,
    /// `counts[L]` is the net size after all words of length ≤ L; the net
    /// persists across levels, so counts are nondecreasing.
    pub counts: Vec<usize>,
    /// Least level from which counts stay constant through the horizon;
    /// `None` when the net was still growing at the final level.
    pub stabilized_at: Option<usize>,
}

fn stabilization(counts: &[usize]) -> Option<usize> {
    let last = *counts.last()?;
    if counts.len() >= 2 && counts[counts.len() - 2] < last {
        return None;
    }
    let mut level = counts.len() - 1;
    while level > 0 && counts[level - 1] == last {
        level -= 1;
    }
    Some(level)
}

/// Greedy ε-net over the orbit `{P_w μ₀ : |w| ≤ L}` for each `L` up to
/// `max_len`, processed in shortlex order.
pub fn orbit_cover<S: Scalar>(
    sys: &MarkovSystem<S>,
    epsilon: S,
    max_len: usize,
    word_budget: u128,
) -> Result<CoveringReport<S>> {
    if epsilon <= S::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let need = words_up_to_count(sys.alphabet_len(), max_len)
        .ok_or(Error::WordBudget { need: u128::MAX, budget: word_budget })?;
    if need > word_budget {
        return Err(Error::WordBudget { need, budget: word_budget });
    }
    let mut net: Vec<SignedMeasure<S>> = Vec::new();
    let mut counts = Vec::with_capacity(max_len + 1);
    for len in 0..=max_len {
        walk_word_distributions(sys, len, &mut |_, mu| {
            let covered = net.iter().any(|center| {
                center.distance(mu).expect("one space throughout") < epsilon
            });
            if !covered {
                net.push(mu.clone());
            }
            Ok(true)
        })?;
        counts.push(net.len());
    }
    Ok(CoveringReport { epsilon, stabilized_at: stabilization(&counts), counts })
}

/// Greedy ε-net over the operator set `{P_w : |w| ≤ L}` under the induced
/// (max-row) norm.
pub fn operator_cover<S: Scalar>(
    sys: &MarkovSystem<S>,
    epsilon: S,
    max_len: usize,
    word_budget: u128,
) -> Result<CoveringReport<S>> {
    if epsilon <= S::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let need = words_up_to_count(sys.alphabet_len(), max_len)
        .ok_or(Error::WordBudget { need: u128::MAX, budget: word_budget })?;
    if need > word_budget {
        return Err(Error::WordBudget { need, budget: word_budget });
    }
    let mut net: Vec<crate::measures::MarkovOperator<S>> = Vec::new();
    let mut counts = Vec::with_capacity(max_len + 1);
    for len in 0..=max_len {
        walk_word_operators(sys, len, &mut |_, op| {
            let covered = net.iter().any(|center| {
                center.op_distance(op).expect("one space throughout") < epsilon
            });
            if !covered {
                net.push(op.clone());
            }
            Ok(true)
        })?;
        counts.push(net.len());
    }
    Ok(CoveringReport { epsilon, stabilized_at: stabilization(&counts), counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{MarkovOperator, StateSpace, DEFAULT_TOLERANCE};
    use crate::recognition::{enumerate_classify, OracleOptions, Recognizer};
    use std::sync::Arc;

    fn recognizer(
        space: &Arc<StateSpace>,
        cells: &[usize],
        cut: f64,
        isolation: f64,
    ) -> Recognizer<f64> {
        Recognizer::new(space, cells.iter().copied().collect(), cut, isolation).unwrap()
    }

    /// 0/1 kernels embedding the two-state automaton for "ends in a".
    fn ends_in_a() -> (MarkovSystem<f64>, Recognizer<f64>) {
        let space = StateSpace::with_size(2);
        let ka = MarkovOperator::stochastic(
            &space,
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            &DEFAULT_TOLERANCE,
        )
        .unwrap();
        let kb = MarkovOperator::stochastic(
            &space,
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            &DEFAULT_TOLERANCE,
        )
        .unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into(), "b".into()],
            vec![ka, kb],
            crate::measures::SignedMeasure::point_mass(&space, 0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let rec = recognizer(&space, &[1], 0.5, 0.4);
        (sys, rec)
    }

    #[test]
    fn extraction_recovers_embedded_two_state_automaton() {
        let (sys, rec) = ends_in_a();
        let radius = rec.induced_gap().half();
        let out = extract_dfa(&sys, &rec, radius, &ExtractOptions::default()).unwrap();
        assert_eq!(out.dfa.state_count(), 2);
        // Pairwise representative separation at least the merge radius.
        for (i, a) in out.representatives.iter().enumerate() {
            for b in &out.representatives[i + 1..] {
                assert!(a.distribution.distance(&b.distribution).unwrap() >= radius);
            }
        }
        // Agreement with the oracle on every word up to length 12.
        let run = enumerate_classify(&sys, &rec, 12, &OracleOptions::default()).unwrap();
        assert!(oracle_cross_check(&out.dfa, &run).is_empty());
        // Isomorphic to the known minimal automaton.
        let known = Dfa::new(
            vec!["a".into(), "b".into()],
            0,
            vec![false, true],
            vec![vec![1, 0], vec![1, 0]],
        )
        .unwrap();
        assert_eq!(minimize(&out.dfa), minimize(&known));
    }

    #[test]
    fn constant_kernel_orbit_has_at_most_two_states() {
        let space = StateSpace::with_size(3);
        let phi = crate::measures::SignedMeasure::new(&space, vec![0.8, 0.1, 0.1]).unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::constant(&phi)],
            crate::measures::SignedMeasure::point_mass(&space, 2).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let rec = recognizer(&space, &[0], 0.5, 0.2);
        let out = extract_dfa(&sys, &rec, 0.4, &ExtractOptions::default()).unwrap();
        assert!(out.dfa.state_count() <= 2);
        // ε rejects (mass 0 on cell 0), everything else accepts: Σ⁺.
        let run = enumerate_classify(&sys, &rec, 8, &OracleOptions::default()).unwrap();
        assert!(oracle_cross_check(&out.dfa, &run).is_empty());
        assert!(!out.dfa.accepts(&Word::empty()));
        assert!(out.dfa.accepts(&Word::from_indices([0])));
    }

    #[test]
    fn undecided_representative_is_not_a_recognizer() {
        let space = StateSpace::with_size(2);
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::identity(&space)],
            crate::measures::SignedMeasure::new(&space, vec![0.5, 0.5]).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let rec = recognizer(&space, &[0], 0.5, 0.25);
        let err = extract_dfa(&sys, &rec, 0.5, &ExtractOptions::default());
        assert!(matches!(err, Err(Error::NotARecognizer { .. })));
    }

    #[test]
    fn state_budget_is_reported_not_fatal() {
        // A slowly drifting one-letter orbit with a tiny radius needs more
        // states than allowed.
        let space = StateSpace::with_size(2);
        let drift = MarkovOperator::stochastic(
            &space,
            vec![vec![0.99, 0.01], vec![0.0, 1.0]],
            &DEFAULT_TOLERANCE,
        )
        .unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![drift],
            crate::measures::SignedMeasure::point_mass(&space, 0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        // F covers everything so every orbit point is decisively accepted;
        // the budget, not the recognizer, is what trips.
        let rec = recognizer(&space, &[0, 1], 0.5, 0.25);
        let opts = ExtractOptions { max_states: 5, ..ExtractOptions::default() };
        let err = extract_dfa(&sys, &rec, 1e-6, &opts);
        assert!(matches!(err, Err(Error::StateBudget { max_states: 5 })));
    }

    #[test]
    fn depth_budget_only_trips_when_a_deeper_state_is_needed() {
        // The constant kernel closes at depth 1: its lone depth-1 state's
        // extension merges back, so a depth cap of 1 still succeeds.
        let space = StateSpace::with_size(3);
        let phi = crate::measures::SignedMeasure::new(&space, vec![0.8, 0.1, 0.1]).unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::constant(&phi)],
            crate::measures::SignedMeasure::point_mass(&space, 2).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let rec = recognizer(&space, &[0], 0.5, 0.2);
        let opts = ExtractOptions { max_word_len: 1, ..ExtractOptions::default() };
        let out = extract_dfa(&sys, &rec, 0.4, &opts).unwrap();
        assert_eq!(out.dfa.state_count(), 2);
        // A cap of zero forbids the depth-1 representative it needs.
        let opts = ExtractOptions { max_word_len: 0, ..ExtractOptions::default() };
        let err = extract_dfa(&sys, &rec, 0.4, &opts);
        assert!(matches!(err, Err(Error::DepthBudget { max_len: 0 })));
    }

    /// One-letter system with `c⋆ = 0.9` (rows `0.9·φ + 0.1·eₓ`), so each
    /// word operator has δ ≤ 0.1.
    fn strongly_mixing_one_letter() -> (MarkovSystem<f64>, Recognizer<f64>) {
        let space = StateSpace::with_size(3);
        let phi = [0.7, 0.2, 0.1];
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|x| {
                (0..3)
                    .map(|y| 0.9 * phi[y] + if x == y { 0.1 } else { 0.0 })
                    .collect()
            })
            .collect();
        let op = MarkovOperator::stochastic(&space, rows, &DEFAULT_TOLERANCE).unwrap();
        let cert = crate::ergodicity::d0_certificate(&op);
        assert!((cert.c_star - 0.9).abs() < 1e-12);
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![op],
            crate::measures::SignedMeasure::point_mass(&space, 0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let rec = recognizer(&space, &[0], 0.5, 0.2);
        (sys, rec)
    }

    #[test]
    fn definite_order_one_at_strong_mixing() {
        let (sys, rec) = strongly_mixing_one_letter();
        match definite_order(&sys, rec.induced_gap(), 4, 1_000_000).unwrap() {
            DefiniteOutcome::Certified(cert) => {
                assert_eq!(cert.r_star, 1);
                assert!(cert.worst_delta <= 0.1 + 1e-12);
                assert_eq!(cert.suffix_profiles.len(), 1);
                // Anchor within 2δ of the image of any probability measure.
                let anchor = &cert.suffix_profiles[0].1;
                let e2 = crate::measures::SignedMeasure::point_mass(sys.space(), 2).unwrap();
                let image = sys.operators()[0].apply(&e2).unwrap();
                assert!(
                    anchor.distance(&image).unwrap() <= 2.0 * cert.worst_delta + 1e-12
                );
            }
            DefiniteOutcome::Failed { .. } => panic!("should certify at r = 1"),
        }
    }

    #[test]
    fn identity_letter_never_definite() {
        let space = StateSpace::with_size(2);
        let sys = MarkovSystem::new(
            vec!["a".into(), "b".into()],
            vec![
                MarkovOperator::constant(&crate::measures::SignedMeasure::uniform(&space)),
                MarkovOperator::identity(&space),
            ],
            crate::measures::SignedMeasure::point_mass(&space, 0).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        match definite_order(&sys, 0.8, 3, 1_000_000).unwrap() {
            DefiniteOutcome::Failed { witness, delta, .. } => {
                assert_eq!(witness, Word::repeated(1, 3));
                assert_eq!(delta, 1.0);
            }
            DefiniteOutcome::Certified(_) => panic!("identity letter cannot be definite"),
        }
    }

    #[test]
    fn definite_table_agrees_with_extraction() {
        let (sys, rec) = strongly_mixing_one_letter();
        let cert = definite_order(&sys, rec.induced_gap(), 4, 1_000_000)
            .unwrap()
            .certificate()
            .cloned()
            .unwrap();
        let table = definite_language_table(&sys, &rec, &cert).unwrap();
        assert_eq!(table.dfa.state_count(), 2); // ε plus one suffix class
        let extracted =
            extract_dfa(&sys, &rec, rec.induced_gap().half(), &ExtractOptions::default())
                .unwrap();
        assert!(dfa_equiv(&table.dfa, &extracted.dfa).unwrap().is_equal());
        let run = enumerate_classify(&sys, &rec, 10, &OracleOptions::default()).unwrap();
        assert!(oracle_cross_check(&table.dfa, &run).is_empty());
    }

    #[test]
    fn orbit_cover_of_constant_kernel_is_tiny() {
        let space = StateSpace::with_size(3);
        let phi = crate::measures::SignedMeasure::new(&space, vec![0.8, 0.1, 0.1]).unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::constant(&phi)],
            crate::measures::SignedMeasure::point_mass(&space, 2).unwrap(),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let report = orbit_cover(&sys, 0.05, 6, 1_000_000).unwrap();
        assert!(report.counts.iter().all(|&c| c <= 2));
        assert_eq!(report.stabilized_at, Some(1));
        for pair in report.counts.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn orbit_of_identity_letter_is_a_single_point() {
        let space = StateSpace::with_size(3);
        let sys = MarkovSystem::new(
            vec!["a".into()],
            vec![MarkovOperator::identity(&space)],
            crate::measures::SignedMeasure::uniform(&space),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let report = orbit_cover(&sys, 1e-6, 5, 1_000_000).unwrap();
        assert!(report.counts.iter().all(|&c| c == 1));
        assert_eq!(report.stabilized_at, Some(0));
    }

    #[test]
    fn operator_cover_of_constant_kernels_is_alphabet_plus_identity() {
        let space = StateSpace::with_size(3);
        let phi_a = crate::measures::SignedMeasure::new(&space, vec![0.8, 0.1, 0.1]).unwrap();
        let phi_b = crate::measures::SignedMeasure::new(&space, vec![0.1, 0.1, 0.8]).unwrap();
        let sys = MarkovSystem::new(
            vec!["a".into(), "b".into()],
            vec![MarkovOperator::constant(&phi_a), MarkovOperator::constant(&phi_b)],
            crate::measures::SignedMeasure::uniform(&space),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        // Any word collapses to the constant operator of its last letter.
        let report = operator_cover(&sys, 0.05, 5, 1_000_000).unwrap();
        assert!(report.counts.iter().all(|&c| c <= 3));
        assert_eq!(*report.counts.last().unwrap(), 3);
        assert_eq!(report.stabilized_at, Some(1));
    }

    #[test]
    fn covering_counts_shrink_as_epsilon_grows() {
        let (sys, _) = strongly_mixing_one_letter();
        let fine = orbit_cover(&sys, 0.01, 6, 1_000_000).unwrap();
        let coarse = orbit_cover(&sys, 0.5, 6, 1_000_000).unwrap();
        for (f, c) in fine.counts.iter().zip(&coarse.counts) {
            assert!(c <= f);
        }
    }
}

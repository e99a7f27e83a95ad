//! Cut-point recognizers, word classification, and the brute-force
//! enumeration oracle.
//!
//! A recognizer splits the probability simplex into an accept set
//! `𝒜 = {μ : μ(F) ≥ λ+ι}` and a reject set `ℛ = {μ : μ(F) ≤ λ−ι}`. Any
//! `μ ∈ 𝒜` and `ν ∈ ℛ` satisfy `‖μ−ν‖₁ ≥ 4ι`, so the induced gap is
//! `ρ = 4ι` in this crate's norm scale. A measure in neither set is
//! `Undecided` — a first-class verdict, because a system whose reachable
//! distributions escape `𝒜 ∪ ℛ` does not recognize a language at all and
//! that is a finding, not a crash.
//!
//! The oracle enumerates every word up to a length bound by exact
//! composition from the initial distribution. Instantiated at
//! `BigRational` it is an exact referee for the double-precision path; the
//! rational mode is deliberately capped (it is a referee, not a workhorse).

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::measures::{MarkovSystem, SignedMeasure, StateSpace};
use crate::scalar::Scalar;
use crate::words::{words_up_to_count, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    Undecided,
}

impl Verdict {
    pub fn is_decisive(self) -> bool {
        self != Verdict::Undecided
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::Undecided => "undecided",
        }
    }
}

/// Verdict plus the signed margin `μ(F) − λ` that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<S: Scalar> {
    pub verdict: Verdict,
    pub margin: S,
}

/// Anything that can classify state distributions with a guaranteed gap
/// between its accept and reject sets. [`Recognizer`] computes its gap in
/// closed form; plug-in predicates declare theirs, and the declared value
/// is trusted and recorded in reports.
pub trait AcceptancePredicate<S: Scalar> {
    fn classify(&self, mu: &SignedMeasure<S>) -> Result<Classification<S>>;

    /// The gap ρ between the accept and reject sets.
    fn gap(&self) -> S;

    /// Isolation width for margin-based predicates; enables slack reports.
    fn isolation(&self) -> Option<S> {
        None
    }
}

/// Cut-point acceptance: accepting cell set `F`, cut `λ`, isolation `ι`.
#[derive(Debug, Clone)]
pub struct Recognizer<S: Scalar> {
    space: Arc<StateSpace>,
    accepting: BTreeSet<usize>,
    cut: S,
    isolation: S,
}

impl<S: Scalar> Recognizer<S> {
    pub fn new(
        space: &Arc<StateSpace>,
        accepting: BTreeSet<usize>,
        cut: S,
        isolation: S,
    ) -> Result<Self> {
        if let Some(&cell) = accepting.iter().find(|&&c| c >= space.len()) {
            return Err(Error::InvalidRecognizer(format!(
                "accepting cell {cell} out of range for {} cells",
                space.len()
            )));
        }
        if cut <= S::zero() || cut >= S::one() {
            return Err(Error::InvalidRecognizer("cut λ must lie in (0, 1)".into()));
        }
        if isolation <= S::zero() {
            return Err(Error::InvalidRecognizer("isolation ι must be positive".into()));
        }
        // Both half-spaces must be reachable by probability masses.
        if cut.clone() - isolation.clone() < S::zero()
            || cut.clone() + isolation.clone() > S::one()
        {
            return Err(Error::InvalidRecognizer(
                "λ−ι and λ+ι must stay within [0, 1]".into(),
            ));
        }
        Ok(Recognizer {
            space: Arc::clone(space),
            accepting,
            cut,
            isolation,
        })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn cut(&self) -> &S {
        &self.cut
    }

    pub fn isolation(&self) -> &S {
        &self.isolation
    }

    /// The gap `ρ = 4ι`: accept and reject measures differ by at least `2ι`
    /// on `F` and, being probabilities, by the same amount on the
    /// complement.
    pub fn induced_gap(&self) -> S {
        let two = S::from_u8(2).expect("2 converts");
        two.clone() * two * self.isolation.clone()
    }

    /// Per-entry scalar conversion through `f64` (exact for dyadic values).
    pub fn convert<T: Scalar>(&self) -> Recognizer<T> {
        Recognizer {
            space: Arc::clone(&self.space),
            accepting: self.accepting.clone(),
            cut: T::from_f64_nearest(self.cut.to_f64_lossy()),
            isolation: T::from_f64_nearest(self.isolation.to_f64_lossy()),
        }
    }
}

impl<S: Scalar> AcceptancePredicate<S> for Recognizer<S> {
    fn classify(&self, mu: &SignedMeasure<S>) -> Result<Classification<S>> {
        if !crate::measures::same_space(&self.space, mu.space()) {
            return Err(Error::SpaceMismatch);
        }
        let margin = mu.mass_of(self.accepting.iter()) - self.cut.clone();
        let verdict = if margin >= self.isolation {
            Verdict::Accept
        } else if margin <= -self.isolation.clone() {
            Verdict::Reject
        } else {
            Verdict::Undecided
        };
        Ok(Classification { verdict, margin })
    }

    fn gap(&self) -> S {
        self.induced_gap()
    }

    fn isolation(&self) -> Option<S> {
        Some(self.isolation.clone())
    }
}

/// A classification closure with a user-declared gap, for acceptance
/// geometries beyond cut points. The declared ρ is trusted.
pub struct DeclaredGapPredicate<S: Scalar, F> {
    pub classify_fn: F,
    pub declared_gap: S,
}

impl<S, F> AcceptancePredicate<S> for DeclaredGapPredicate<S, F>
where
    S: Scalar,
    F: Fn(&SignedMeasure<S>) -> Classification<S>,
{
    fn classify(&self, mu: &SignedMeasure<S>) -> Result<Classification<S>> {
        Ok((self.classify_fn)(mu))
    }

    fn gap(&self) -> S {
        self.declared_gap.clone()
    }
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// Total enumeration budget in words.
    pub word_budget: u128,
    /// Exact-rational mode refuses spaces larger than this.
    pub exact_cells_cap: usize,
    /// Exact-rational mode refuses horizons deeper than this.
    pub exact_len_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            word_budget: 1_000_000,
            exact_cells_cap: 8,
            exact_len_cap: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleEntry<S: Scalar> {
    pub word: Word,
    pub classification: Classification<S>,
}

/// Every word of length ≤ the horizon, classified, in shortlex order.
#[derive(Debug, Clone)]
pub struct OracleRun<S: Scalar> {
    pub entries: Vec<OracleEntry<S>>,
    /// Indices into `entries` of undecided words.
    pub undecided: Vec<usize>,
    /// `min |margin| − ι` over all words, when the predicate has an
    /// isolation width; negative iff some word is undecided.
    pub min_slack: Option<S>,
}

impl<S: Scalar> OracleRun<S> {
    pub fn verdict_of(&self, index: usize) -> Verdict {
        self.entries[index].classification.verdict
    }
}

/// Classify every word of length ≤ `max_len`, undecided verdicts included.
pub fn oracle_scan<S: Scalar, P: AcceptancePredicate<S>>(
    sys: &MarkovSystem<S>,
    pred: &P,
    max_len: usize,
    opts: &OracleOptions,
) -> Result<OracleRun<S>> {
    let need = words_up_to_count(sys.alphabet_len(), max_len)
        .ok_or(Error::WordBudget { need: u128::MAX, budget: opts.word_budget })?;
    if need > opts.word_budget {
        return Err(Error::WordBudget { need, budget: opts.word_budget });
    }
    if S::EXACT {
        if sys.space().len() > opts.exact_cells_cap {
            return Err(Error::ExactCap(format!(
                "{} cells exceeds the rational-mode cap of {}",
                sys.space().len(),
                opts.exact_cells_cap
            )));
        }
        if max_len > opts.exact_len_cap {
            return Err(Error::ExactCap(format!(
                "horizon {max_len} exceeds the rational-mode cap of {}",
                opts.exact_len_cap
            )));
        }
    }

    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    let mut min_slack: Option<S> = None;
    let iota = pred.isolation();

    // Breadth-first levels keep the output in shortlex order and reuse each
    // prefix distribution.
    let mut level: Vec<(Word, SignedMeasure<S>)> = vec![(Word::empty(), sys.initial().clone())];
    for depth in 0..=max_len {
        for (word, mu) in &level {
            let classification = pred.classify(mu)?;
            if let Some(iota) = &iota {
                let slack = classification.margin.abs() - iota.clone();
                match &min_slack {
                    Some(s) if *s <= slack => {}
                    _ => min_slack = Some(slack),
                }
            }
            if classification.verdict == Verdict::Undecided {
                undecided.push(entries.len());
            }
            entries.push(OracleEntry { word: word.clone(), classification });
        }
        if depth == max_len {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * sys.alphabet_len());
        for (word, mu) in &level {
            for s in 0..sys.alphabet_len() {
                next.push((word.extended(s), sys.operator(s)?.apply(mu)?));
            }
        }
        level = next;
    }
    Ok(OracleRun { entries, undecided, min_slack })
}

/// The oracle proper: like [`oracle_scan`] but a system that leaves any word
/// undecided is rejected as not being a recognizer (witness: the first such
/// word in shortlex order).
pub fn enumerate_classify<S: Scalar, P: AcceptancePredicate<S>>(
    sys: &MarkovSystem<S>,
    pred: &P,
    max_len: usize,
    opts: &OracleOptions,
) -> Result<OracleRun<S>> {
    let run = oracle_scan(sys, pred, max_len, opts)?;
    if let Some(&first) = run.undecided.first() {
        return Err(Error::NotARecognizer {
            word: run.entries[first].word.display(sys.alphabet()),
        });
    }
    Ok(run)
}

/// Report from [`validate_recognizer`].
#[derive(Debug, Clone)]
pub struct RecognizerValidation<S: Scalar> {
    pub words: usize,
    pub undecided: usize,
    /// First undecided word, if any.
    pub witness: Option<Word>,
    pub min_slack: Option<S>,
}

impl<S: Scalar> RecognizerValidation<S> {
    pub fn is_recognizer(&self) -> bool {
        self.undecided == 0
    }
}

/// Checks that the accept/reject dichotomy is total over all distributions
/// reachable within the horizon.
pub fn validate_recognizer<S: Scalar, P: AcceptancePredicate<S>>(
    sys: &MarkovSystem<S>,
    pred: &P,
    max_len: usize,
    opts: &OracleOptions,
) -> Result<RecognizerValidation<S>> {
    let run = oracle_scan(sys, pred, max_len, opts)?;
    Ok(RecognizerValidation {
        words: run.entries.len(),
        undecided: run.undecided.len(),
        witness: run.undecided.first().map(|&i| run.entries[i].word.clone()),
        min_slack: run.min_slack,
    })
}

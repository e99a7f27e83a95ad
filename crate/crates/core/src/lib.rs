//! Markov computational systems: probabilistic automata over finite (or
//! discretized-continuous) state spaces.
//!
//! A *Markov system* assigns one row-stochastic kernel per input symbol; read
//! together with an initial distribution and a cut-point recognizer it becomes
//! a language recognition device. This crate simulates such systems, certifies
//! ergodic properties of their operator families (Dobrushin coefficients,
//! Doeblin conditions, quasi-compactness bounds), and extracts the regular or
//! definite languages they recognize, cross-checking every extraction against
//! a brute-force enumeration oracle.
//!
//! Everything arithmetic is generic over a [`Scalar`], so the same code drives
//! the double-precision pipeline ([`Measure`], [`Kernel`], [`System`]) and the
//! exact-rational referee ([`RationalMeasure`], [`RationalKernel`],
//! [`RationalSystem`]).
//!
//! Module map:
//!
//! - [`measures`] — state spaces, signed measures, total variation, kernels,
//!   word composition.
//! - [`ergodicity`] — Dobrushin coefficients, Condition D₀, weak-ergodicity
//!   certificates, geometric decay bounds.
//! - [`doeblin`] — Condition D checks, bounded densities, the Q+R kernel
//!   decomposition, quasi-compactness bounds.
//! - [`recognition`] — cut-point recognizers and the enumeration oracle.
//! - [`extraction`] — DFA extraction by orbit covering, definite-order
//!   extraction, covering-number reports, DFA utilities.
//! - [`stability`] — perturbation margins and language-preservation checks.
//! - [`discretize`] — building finite systems from noisy interval maps.
//! - [`sampling`] — seeded random measures, kernels and systems for testing.

pub mod discretize;
pub mod doeblin;
pub mod ergodicity;
pub mod extraction;
pub mod measures;
pub mod recognition;
pub mod sampling;
pub mod scalar;
pub mod stability;
pub mod words;

pub use measures::{MarkovOperator, MarkovSystem, SignedMeasure, StateSpace};
pub use recognition::{Classification, Recognizer, Verdict};
pub use scalar::Scalar;
pub use words::Word;

use num_rational::BigRational;

/// Double-precision signed measure, the workhorse representation.
pub type Measure = SignedMeasure<f64>;
/// Double-precision Markov operator.
pub type Kernel = MarkovOperator<f64>;
/// Double-precision Markov system.
pub type System = MarkovSystem<f64>;
/// Exact-rational signed measure, used by the oracle referee.
pub type RationalMeasure = SignedMeasure<BigRational>;
/// Exact-rational Markov operator.
pub type RationalKernel = MarkovOperator<BigRational>;
/// Exact-rational Markov system.
pub type RationalSystem = MarkovSystem<BigRational>;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("state spaces do not match")]
    SpaceMismatch,
    #[error("invalid state space: {0}")]
    InvalidSpace(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid recognizer: {0}")]
    InvalidRecognizer(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("word enumeration budget exceeded: {need} words needed, budget {budget}")]
    WordBudget { need: u128, budget: u128 },
    #[error("exhaustive subset scan infeasible: n = {n} exceeds cap {cap}")]
    SubsetBudget { n: usize, cap: usize },
    #[error("exact-rational oracle cap exceeded: {0}")]
    ExactCap(String),
    #[error("not a recognizer: word `{word}` is undecided")]
    NotARecognizer { word: String },
    #[error("state budget exhausted: {max_states} states without closure (no finite extraction at this radius)")]
    StateBudget { max_states: usize },
    #[error("frontier depth exhausted at word length {max_len}")]
    DepthBudget { max_len: usize },
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("row {row} loses mass {defect} to discretization (limit {limit}); refine the grid")]
    RenormalizationDefect { row: usize, defect: f64, limit: f64 },
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

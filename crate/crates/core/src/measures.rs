//! Finite state spaces, signed measures, the total variation norm, Markov
//! operators, and word composition.
//!
//! Measures and kernels are stored dense over cells. The total variation
//! norm here is `‖μ‖₁ = Σᵢ |μᵢ|`, which equals `sup_A μ(A) − inf_A μ(A)`
//! over cell subsets; differences of probability measures therefore range
//! over `[0, 2]`, and every threshold in this crate is stated in that scale.
//!
//! Word composition follows the convention that the *first* letter of a word
//! acts first: `P_w μ = P_{w_n} ∘ … ∘ P_{w_0} (μ)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::words::Word;
use crate::{Error, Result};

/// Default stochasticity tolerance τ_s. Quadrature-built kernels carry
/// rounding defects, so row sums and nonnegativity are checked within this.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An ordered finite set of cells, optionally carrying interval geometry
/// when it came from discretizing a continuous state space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    labels: Vec<String>,
    geometry: Option<Vec<(f64, f64)>>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Result<Arc<Self>> {
        if labels.is_empty() {
            return Err(Error::InvalidSpace("no cells".into()));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(Error::InvalidSpace(format!("duplicate cell label `{label}`")));
            }
        }
        Ok(Arc::new(StateSpace { labels, geometry: None }))
    }

    /// Space with `n` anonymous cells `s0..s{n-1}`.
    pub fn with_size(n: usize) -> Arc<Self> {
        StateSpace::new((0..n.max(1)).map(|i| format!("s{i}")).collect())
            .expect("generated labels are unique")
    }

    /// Space of `n` equal-width cells partitioning `[a, b)`.
    pub fn discretized(a: f64, b: f64, n: usize) -> Result<Arc<Self>> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidSpace(format!("bad interval [{a}, {b})")));
        }
        if n == 0 {
            return Err(Error::InvalidSpace("no cells".into()));
        }
        let width = (b - a) / n as f64;
        let geometry: Vec<(f64, f64)> = (0..n)
            .map(|i| (a + i as f64 * width, a + (i + 1) as f64 * width))
            .collect();
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        Ok(Arc::new(StateSpace { labels, geometry: Some(geometry) }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn geometry(&self) -> Option<&[(f64, f64)]> {
        self.geometry.as_deref()
    }

    pub fn cell_centers(&self) -> Option<Vec<f64>> {
        self.geometry
            .as_ref()
            .map(|g| g.iter().map(|(l, r)| 0.5 * (l + r)).collect())
    }
}

pub(crate) fn same_space(a: &Arc<StateSpace>, b: &Arc<StateSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A charge assignment over the cells of a [`StateSpace`]. Probability
/// measures are the nonnegative, unit-charge special case.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure<S: Scalar> {
    space: Arc<StateSpace>,
    mass: Vec<S>,
}

impl<S: Scalar> SignedMeasure<S> {
    pub fn new(space: &Arc<StateSpace>, mass: Vec<S>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} masses for {} cells",
                mass.len(),
                space.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| !m.is_finite_scalar()) {
            return Err(Error::InvalidMeasure(format!("non-finite mass in cell {i}")));
        }
        Ok(SignedMeasure { space: Arc::clone(space), mass })
    }

    pub fn zero(space: &Arc<StateSpace>) -> Self {
        SignedMeasure {
            space: Arc::clone(space),
            mass: vec![S::zero(); space.len()],
        }
    }

    pub fn point_mass(space: &Arc<StateSpace>, cell: usize) -> Result<Self> {
        if cell >= space.len() {
            return Err(Error::InvalidMeasure(format!(
                "cell {cell} out of range for {} cells",
                space.len()
            )));
        }
        let mut mass = vec![S::zero(); space.len()];
        mass[cell] = S::one();
        Ok(SignedMeasure { space: Arc::clone(space), mass })
    }

    pub fn uniform(space: &Arc<StateSpace>) -> Self {
        let n = S::from_usize(space.len()).expect("cell count converts");
        SignedMeasure {
            space: Arc::clone(space),
            mass: vec![S::one() / n; space.len()],
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self) -> &[S] {
        &self.mass
    }

    /// Total charge `Σᵢ μᵢ`.
    pub fn total(&self) -> S {
        self.mass.iter().fold(S::zero(), |acc, m| acc + m.clone())
    }

    /// Total variation norm `Σᵢ |μᵢ|`, equal to `sup_A μ(A) − inf_A μ(A)`.
    pub fn tv_norm(&self) -> S {
        self.mass.iter().fold(S::zero(), |acc, m| acc + m.abs())
    }

    /// Charge of a cell subset, `μ(A)`.
    pub fn mass_of<'a, I: IntoIterator<Item = &'a usize>>(&self, cells: I) -> S {
        cells
            .into_iter()
            .fold(S::zero(), |acc, &c| acc + self.mass[c].clone())
    }

    pub fn is_probability(&self, tol: &S) -> bool {
        self.mass.iter().all(|m| *m >= -tol.clone())
            && (self.total() - S::one()).abs() <= *tol
    }

    pub fn is_zero_charge(&self, tol: &S) -> bool {
        self.total().abs() <= *tol
    }

    /// `‖μ − ν‖₁`.
    pub fn distance(&self, other: &Self) -> Result<S> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .mass
            .iter()
            .zip(&other.mass)
            .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(SignedMeasure {
            space: Arc::clone(&self.space),
            mass: self
                .mass
                .iter()
                .zip(&other.mass)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Lossy conversion for reports.
    pub fn to_f64(&self) -> SignedMeasure<f64> {
        SignedMeasure {
            space: Arc::clone(&self.space),
            mass: self.mass.iter().map(|m| m.to_f64_lossy()).collect(),
        }
    }

    /// Exact per-entry conversion between scalar types through `f64`.
    pub fn convert<T: Scalar>(&self) -> SignedMeasure<T> {
        SignedMeasure {
            space: Arc::clone(&self.space),
            mass: self
                .mass
                .iter()
                .map(|m| T::from_f64_nearest(m.to_f64_lossy()))
                .collect(),
        }
    }
}

/// One row's validation defects.
#[derive(Debug, Clone)]
pub struct RowDefect<S: Scalar> {
    pub row: usize,
    /// `row sum − 1` when it exceeds tolerance in absolute value.
    pub sum_defect: Option<S>,
    /// Entries below `−tol`.
    pub negative_entries: Vec<(usize, S)>,
}

/// Report from [`MarkovOperator::validate`].
#[derive(Debug, Clone)]
pub struct KernelValidation<S: Scalar> {
    pub defects: Vec<RowDefect<S>>,
}

impl<S: Scalar> KernelValidation<S> {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// A kernel on a finite state space: `kernel[x][y]` is the probability of
/// moving from cell `x` to cell `y`. Stochastic kernels have unit row sums;
/// sub-stochastic ones (the remainder parts of decompositions) relax the row
/// sums to at most one and are flagged as such.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovOperator<S: Scalar> {
    space: Arc<StateSpace>,
    data: Vec<S>, // row-major n×n
    sub_stochastic: bool,
}

impl<S: Scalar> MarkovOperator<S> {
    /// Validated row-stochastic kernel.
    pub fn stochastic(space: &Arc<StateSpace>, rows: Vec<Vec<S>>, tol: &S) -> Result<Self> {
        let op = Self::assemble(space, rows, false)?;
        let report = op.validate(tol);
        if let Some(defect) = report.defects.first() {
            return Err(Error::InvalidKernel(format!(
                "row {} violates stochasticity (sum defect {:?}, {} negative entries)",
                defect.row,
                defect.sum_defect.as_ref().map(|d| d.to_f64_lossy()),
                defect.negative_entries.len()
            )));
        }
        Ok(op)
    }

    /// Validated sub-stochastic kernel (row sums at most one).
    pub fn sub_stochastic(space: &Arc<StateSpace>, rows: Vec<Vec<S>>, tol: &S) -> Result<Self> {
        let op = Self::assemble(space, rows, true)?;
        for x in 0..op.space.len() {
            let row = op.row(x);
            let sum = row.iter().fold(S::zero(), |acc, v| acc + v.clone());
            if sum > S::one() + tol.clone() {
                return Err(Error::InvalidKernel(format!("row {x} exceeds unit mass")));
            }
            if row.iter().any(|v| *v < -tol.clone()) {
                return Err(Error::InvalidKernel(format!("row {x} has a negative entry")));
            }
        }
        Ok(op)
    }

    fn assemble(space: &Arc<StateSpace>, rows: Vec<Vec<S>>, sub: bool) -> Result<Self> {
        let n = space.len();
        if rows.len() != n {
            return Err(Error::InvalidKernel(format!("{} rows for {} cells", rows.len(), n)));
        }
        let mut data = Vec::with_capacity(n * n);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidKernel(format!("row {x} has wrong width")));
            }
            if let Some(y) = row.iter().position(|v| !v.is_finite_scalar()) {
                return Err(Error::InvalidKernel(format!("non-finite entry at ({x}, {y})")));
            }
            data.extend(row);
        }
        Ok(MarkovOperator {
            space: Arc::clone(space),
            data,
            sub_stochastic: sub,
        })
    }

    pub fn identity(space: &Arc<StateSpace>) -> Self {
        let n = space.len();
        let mut data = vec![S::zero(); n * n];
        for x in 0..n {
            data[x * n + x] = S::one();
        }
        MarkovOperator {
            space: Arc::clone(space),
            data,
            sub_stochastic: false,
        }
    }

    /// Kernel with every row equal to `profile` (a one-step forgetting
    /// operator).
    pub fn constant(profile: &SignedMeasure<S>) -> Self {
        let n = profile.len();
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n {
            data.extend(profile.mass().iter().cloned());
        }
        MarkovOperator {
            space: Arc::clone(profile.space()),
            data,
            sub_stochastic: false,
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn is_sub_stochastic(&self) -> bool {
        self.sub_stochastic
    }

    pub fn row(&self, x: usize) -> &[S] {
        let n = self.space.len();
        &self.data[x * n..(x + 1) * n]
    }

    pub fn entry(&self, x: usize, y: usize) -> &S {
        &self.data[x * self.space.len() + y]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.space.len())
    }

    /// Lists rows violating nonnegativity or `|row sum − 1| > tol`.
    pub fn validate(&self, tol: &S) -> KernelValidation<S> {
        let mut defects = Vec::new();
        for x in 0..self.space.len() {
            let row = self.row(x);
            let sum = row.iter().fold(S::zero(), |acc, v| acc + v.clone());
            let sum_defect = sum - S::one();
            let sum_bad = sum_defect.abs() > *tol;
            let negative_entries: Vec<(usize, S)> = row
                .iter()
                .enumerate()
                .filter(|(_, v)| **v < -tol.clone())
                .map(|(y, v)| (y, v.clone()))
                .collect();
            if sum_bad || !negative_entries.is_empty() {
                defects.push(RowDefect {
                    row: x,
                    sum_defect: sum_bad.then_some(sum_defect),
                    negative_entries,
                });
            }
        }
        KernelValidation { defects }
    }

    /// Push a measure through the kernel: `(Pμ)(y) = Σₓ μ(x) P(x, y)`.
    pub fn apply(&self, m: &SignedMeasure<S>) -> Result<SignedMeasure<S>> {
        if !same_space(&self.space, &m.space) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.space.len();
        let mut out = vec![S::zero(); n];
        for (x, coeff) in m.mass.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let row = self.row(x);
            for (o, v) in out.iter_mut().zip(row) {
                *o = o.clone() + coeff.clone() * v.clone();
            }
        }
        Ok(SignedMeasure {
            space: Arc::clone(&self.space),
            mass: out,
        })
    }

    /// Composition in reading order: `self` acts first, `next` second, so
    /// `then(A, B).apply(μ) = B.apply(A.apply(μ))`.
    pub fn then(&self, next: &MarkovOperator<S>) -> Result<MarkovOperator<S>> {
        if !same_space(&self.space, &next.space) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.space.len();
        let mut data = vec![S::zero(); n * n];
        for x in 0..n {
            let lhs = self.row(x);
            let out = &mut data[x * n..(x + 1) * n];
            for (z, coeff) in lhs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let rhs = next.row(z);
                for (o, v) in out.iter_mut().zip(rhs) {
                    *o = o.clone() + coeff.clone() * v.clone();
                }
            }
        }
        Ok(MarkovOperator {
            space: Arc::clone(&self.space),
            data,
            sub_stochastic: self.sub_stochastic || next.sub_stochastic,
        })
    }

    /// Induced operator distance `max_x Σ_y |P(x,y) − Q(x,y)|`, the norm the
    /// kernel difference has as an operator on signed measures.
    pub fn op_distance(&self, other: &MarkovOperator<S>) -> Result<S> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.space.len();
        let mut worst = S::zero();
        for x in 0..n {
            let d = self
                .row(x)
                .iter()
                .zip(other.row(x))
                .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    pub fn to_f64(&self) -> MarkovOperator<f64> {
        MarkovOperator {
            space: Arc::clone(&self.space),
            data: self.data.iter().map(|v| v.to_f64_lossy()).collect(),
            sub_stochastic: self.sub_stochastic,
        }
    }

    /// Per-entry conversion between scalar types through `f64` (exact when
    /// entries are representable, e.g. f64 → rational).
    pub fn convert<T: Scalar>(&self) -> MarkovOperator<T> {
        MarkovOperator {
            space: Arc::clone(&self.space),
            data: self
                .data
                .iter()
                .map(|v| T::from_f64_nearest(v.to_f64_lossy()))
                .collect(),
            sub_stochastic: self.sub_stochastic,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_raw(space: &Arc<StateSpace>, data: Vec<S>, sub: bool) -> Self {
        debug_assert_eq!(data.len(), space.len() * space.len());
        MarkovOperator {
            space: Arc::clone(space),
            data,
            sub_stochastic: sub,
        }
    }
}

/// Alphabet, one Markov operator per symbol, and an initial distribution.
#[derive(Debug, Clone)]
pub struct MarkovSystem<S: Scalar> {
    alphabet: Vec<String>,
    operators: Vec<MarkovOperator<S>>,
    initial: SignedMeasure<S>,
    tolerance: S,
}

impl<S: Scalar> MarkovSystem<S> {
    pub fn new(
        alphabet: Vec<String>,
        operators: Vec<MarkovOperator<S>>,
        initial: SignedMeasure<S>,
        tolerance: S,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        if alphabet.len() > u16::MAX as usize {
            return Err(Error::InvalidSystem("alphabet larger than 65535 symbols".into()));
        }
        if alphabet.len() != operators.len() {
            return Err(Error::InvalidSystem(format!(
                "{} symbols but {} operators",
                alphabet.len(),
                operators.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for symbol in &alphabet {
            if symbol.is_empty() || symbol == "ε" || symbol.chars().any(char::is_whitespace) {
                return Err(Error::InvalidSystem(format!("unusable symbol `{symbol}`")));
            }
            if !seen.insert(symbol.clone()) {
                return Err(Error::InvalidSystem(format!("duplicate symbol `{symbol}`")));
            }
        }
        let space = initial.space();
        for (i, op) in operators.iter().enumerate() {
            if !same_space(op.space(), space) {
                return Err(Error::InvalidSystem(format!(
                    "operator for `{}` lives on a different space",
                    alphabet[i]
                )));
            }
        }
        if !initial.is_probability(&tolerance) {
            return Err(Error::InvalidSystem("initial distribution is not a probability measure".into()));
        }
        Ok(MarkovSystem { alphabet, operators, initial, tolerance })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.initial.space()
    }

    pub fn initial(&self) -> &SignedMeasure<S> {
        &self.initial
    }

    pub fn tolerance(&self) -> &S {
        &self.tolerance
    }

    pub fn operator(&self, symbol: usize) -> Result<&MarkovOperator<S>> {
        self.operators
            .get(symbol)
            .ok_or_else(|| Error::UnknownSymbol(format!("#{symbol}")))
    }

    pub fn operators(&self) -> &[MarkovOperator<S>] {
        &self.operators
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Parse a word. Single-character alphabets read contiguously
    /// (`"aba"`); any alphabet accepts comma- or dot-separated symbols
    /// (`"a,b,a"`). The empty string and `"ε"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        if text.contains(',') || text.contains('.') {
            let mut symbols = Vec::new();
            for part in text.split([',', '.']) {
                let part = part.trim();
                if !part.is_empty() {
                    symbols.push(self.symbol_index(part)?);
                }
            }
            return Ok(Word::from_indices(symbols));
        }
        if self.alphabet.iter().all(|s| s.chars().count() == 1) {
            let mut symbols = Vec::new();
            for ch in text.chars() {
                symbols.push(self.symbol_index(&ch.to_string())?);
            }
            return Ok(Word::from_indices(symbols));
        }
        self.symbol_index(text).map(|s| Word::from_indices([s]))
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        for s in word.symbols() {
            if s >= self.alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
        }
        Ok(())
    }

    /// The composed operator `P_w`; the empty word gives the identity.
    pub fn compose_word(&self, word: &Word) -> Result<MarkovOperator<S>> {
        self.check_word(word)?;
        let mut acc = MarkovOperator::identity(self.space());
        for s in word.symbols() {
            acc = acc.then(&self.operators[s])?;
        }
        Ok(acc)
    }

    /// The state distribution `P_w μ₀` after reading `word`.
    pub fn distribution(&self, word: &Word) -> Result<SignedMeasure<S>> {
        self.check_word(word)?;
        let mut mu = self.initial.clone();
        for s in word.symbols() {
            mu = self.operators[s].apply(&mu)?;
        }
        Ok(mu)
    }

    pub fn to_f64(&self) -> MarkovSystem<f64> {
        MarkovSystem {
            alphabet: self.alphabet.clone(),
            operators: self.operators.iter().map(|op| op.to_f64()).collect(),
            initial: self.initial.to_f64(),
            tolerance: self.tolerance.to_f64_lossy(),
        }
    }

    /// Per-entry scalar conversion through `f64`.
    pub fn convert<T: Scalar>(&self) -> MarkovSystem<T> {
        MarkovSystem {
            alphabet: self.alphabet.clone(),
            operators: self.operators.iter().map(|op| op.convert()).collect(),
            initial: self.initial.convert(),
            tolerance: T::from_f64_nearest(self.tolerance.to_f64_lossy()),
        }
    }

    /// Same alphabet and space with different operators (used by
    /// perturbation harnesses).
    pub fn with_operators(&self, operators: Vec<MarkovOperator<S>>) -> Result<Self> {
        MarkovSystem::new(
            self.alphabet.clone(),
            operators,
            self.initial.clone(),
            self.tolerance.clone(),
        )
    }
}

/// Visit `(w, P_w)` for every word `w` of length exactly `len`, in
/// lexicographic order, sharing prefix products along a depth-first walk.
/// The callback returns `false` to stop early.
pub fn walk_word_operators<S, F>(sys: &MarkovSystem<S>, len: usize, f: &mut F) -> Result<()>
where
    S: Scalar,
    F: FnMut(&Word, &MarkovOperator<S>) -> Result<bool>,
{
    fn rec<S, F>(
        sys: &MarkovSystem<S>,
        prefix: &mut Vec<usize>,
        op: &MarkovOperator<S>,
        len: usize,
        f: &mut F,
    ) -> Result<bool>
    where
        S: Scalar,
        F: FnMut(&Word, &MarkovOperator<S>) -> Result<bool>,
    {
        if prefix.len() == len {
            return f(&Word::from_indices(prefix.iter().copied()), op);
        }
        for s in 0..sys.alphabet_len() {
            prefix.push(s);
            let next = op.then(sys.operator(s)?)?;
            let keep_going = rec(sys, prefix, &next, len, f)?;
            prefix.pop();
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
    let identity = MarkovOperator::identity(sys.space());
    rec(sys, &mut Vec::with_capacity(len), &identity, len, f).map(|_| ())
}

/// Visit `(w, P_w μ₀)` for every word of length exactly `len`, in
/// lexicographic order.
pub fn walk_word_distributions<S, F>(sys: &MarkovSystem<S>, len: usize, f: &mut F) -> Result<()>
where
    S: Scalar,
    F: FnMut(&Word, &SignedMeasure<S>) -> Result<bool>,
{
    fn rec<S, F>(
        sys: &MarkovSystem<S>,
        prefix: &mut Vec<usize>,
        mu: &SignedMeasure<S>,
        len: usize,
        f: &mut F,
    ) -> Result<bool>
    where
        S: Scalar,
        F: FnMut(&Word, &SignedMeasure<S>) -> Result<bool>,
    {
        if prefix.len() == len {
            return f(&Word::from_indices(prefix.iter().copied()), mu);
        }
        for s in 0..sys.alphabet_len() {
            prefix.push(s);
            let next = sys.operator(s)?.apply(mu)?;
            let keep_going = rec(sys, prefix, &next, len, f)?;
            prefix.pop();
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
    rec(sys, &mut Vec::with_capacity(len), sys.initial(), len, f).map(|_| ())
}

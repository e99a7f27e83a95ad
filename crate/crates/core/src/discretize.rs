//! Building finite Markov systems from continuous-state kernels: noisy
//! one-dimensional maps with Gaussian noise, discretized by quadrature.
//!
//! Each symbol carries a piecewise-linear map `f_u : [a,b] → [a,b]`. The
//! kernel row for source cell `x` is the mass a Gaussian centered at
//! `f_u(center of x)` assigns to each target cell (midpoint rule in the
//! source, exact error-function differences in the target), folded back
//! into the domain by the boundary policy. Rows are renormalized and the
//! defect is reported; a defect beyond the limit means the discretization
//! is too coarse for the requested noise width and the build refuses.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::measures::{MarkovOperator, MarkovSystem, SignedMeasure, StateSpace, DEFAULT_TOLERANCE};
use crate::recognition::{oracle_scan, OracleOptions, Recognizer};
use crate::{ergodicity, Error, Result};

/// Default cap on the per-row renormalization defect.
pub const DEFAULT_DEFECT_LIMIT: f64 = 0.01;

/// What happens to noise mass that leaves the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Fold the mass back by mirror reflection (the default; preserves
    /// smooth densities).
    Reflect,
    /// Drop it and renormalize the row.
    TruncateRenormalize,
}

/// Noise attached to the maps. Gaussian is the only kind built in; the enum
/// is the hook for others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    Gaussian { sigma: f64 },
}

/// A piecewise-linear map given by breakpoints, constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("map needs at least one breakpoint".into()));
        }
        if points.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing in x".into(),
            ));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidParameter("non-finite breakpoint".into()));
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn constant(value: f64) -> Self {
        PiecewiseLinear { points: vec![(0.0, value)] }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let i = pts.partition_point(|(px, _)| *px <= x);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// A continuous-kernel specification: domain, per-symbol maps, noise,
/// boundary policy, and grid resolution.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub domain: (f64, f64),
    pub maps: Vec<(String, PiecewiseLinear)>,
    pub noise: Noise,
    pub boundary: Boundary,
    pub grid_n: usize,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("bad domain [{a}, {b}]")));
        }
        if self.grid_n < 2 {
            return Err(Error::InvalidParameter("grid_n must be at least 2".into()));
        }
        if self.maps.is_empty() {
            return Err(Error::InvalidParameter("no symbol maps".into()));
        }
        let Noise::Gaussian { sigma } = self.noise;
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter("sigma must be positive".into()));
        }
        for (symbol, map) in &self.maps {
            if map.points.iter().any(|(_, y)| *y < a || *y > b) {
                return Err(Error::InvalidParameter(format!(
                    "map for `{symbol}` leaves the domain"
                )));
            }
        }
        Ok(())
    }

    fn refined(&self) -> KernelSpec {
        KernelSpec { grid_n: self.grid_n * 2, ..self.clone() }
    }
}

/// Initial distribution for a discretized system.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Uniform,
    /// Explicit per-cell masses at the kernel spec's grid resolution.
    Explicit(Vec<f64>),
}

impl InitialSpec {
    fn realize(&self, space: &Arc<StateSpace>) -> Result<SignedMeasure<f64>> {
        match self {
            InitialSpec::Uniform => Ok(SignedMeasure::uniform(space)),
            InitialSpec::Explicit(mass) => SignedMeasure::new(space, mass.clone()),
        }
    }

    fn refined(&self) -> InitialSpec {
        match self {
            InitialSpec::Uniform => InitialSpec::Uniform,
            InitialSpec::Explicit(mass) => InitialSpec::Explicit(
                mass.iter().flat_map(|&m| [0.5 * m, 0.5 * m]).collect(),
            ),
        }
    }
}

/// A built system with its discretization diagnostics.
#[derive(Debug, Clone)]
pub struct BuiltSystem {
    pub system: MarkovSystem<f64>,
    /// Implied density bound `max P(x,y)/μ(y)` with μ the uniform cell
    /// measure; finite for every Gaussian spec with full-support rows.
    pub k_hat: f64,
    /// Worst per-row mass defect absorbed by renormalization.
    pub max_defect: f64,
}

pub fn build_system(spec: &KernelSpec, initial: &InitialSpec) -> Result<BuiltSystem> {
    build_system_with(spec, initial, DEFAULT_DEFECT_LIMIT)
}

pub fn build_system_with(
    spec: &KernelSpec,
    initial: &InitialSpec,
    defect_limit: f64,
) -> Result<BuiltSystem> {
    spec.validate()?;
    let (a, b) = spec.domain;
    let n = spec.grid_n;
    let space = StateSpace::discretized(a, b, n)?;
    let centers = space.cell_centers().expect("discretized space has geometry");
    let geometry: Vec<(f64, f64)> = space.geometry().expect("geometry").to_vec();
    let Noise::Gaussian { sigma } = spec.noise;

    let mut max_defect: f64 = 0.0;
    let mut max_entry: f64 = 0.0;
    let mut operators = Vec::with_capacity(spec.maps.len());
    let mut alphabet = Vec::with_capacity(spec.maps.len());
    for (symbol, map) in &spec.maps {
        alphabet.push(symbol.clone());
        let mut rows = Vec::with_capacity(n);
        for (x, &center) in centers.iter().enumerate() {
            let mean = map.eval(center);
            let mut row: Vec<f64> = geometry
                .iter()
                .map(|&(l, r)| cell_mass(l, r, mean, sigma, a, b, spec.boundary))
                .collect();
            let sum: f64 = row.iter().sum();
            let defect = (1.0 - sum).abs();
            if defect > defect_limit {
                return Err(Error::RenormalizationDefect { row: x, defect, limit: defect_limit });
            }
            max_defect = max_defect.max(defect);
            for v in &mut row {
                *v /= sum;
                max_entry = max_entry.max(*v);
            }
            rows.push(row);
        }
        operators.push(MarkovOperator::stochastic(&space, rows, &DEFAULT_TOLERANCE)?);
    }
    let system = MarkovSystem::new(
        alphabet,
        operators,
        initial.realize(&space)?,
        DEFAULT_TOLERANCE,
    )?;
    Ok(BuiltSystem {
        system,
        k_hat: max_entry * n as f64,
        max_defect,
    })
}

fn normal_cdf(t: f64, mean: f64, sigma: f64) -> f64 {
    0.5 * (1.0 + libm::erf((t - mean) / (sigma * std::f64::consts::SQRT_2)))
}

/// Mass a Gaussian `N(mean, sigma²)` assigns to the cell `[l, r]` under the
/// boundary policy. Reflection folds the real line onto `[a, b]`: the
/// preimages of `s` are `s + 2kL` and `2a − s + 2kL`.
fn cell_mass(l: f64, r: f64, mean: f64, sigma: f64, a: f64, b: f64, boundary: Boundary) -> f64 {
    match boundary {
        Boundary::TruncateRenormalize => {
            normal_cdf(r, mean, sigma) - normal_cdf(l, mean, sigma)
        }
        Boundary::Reflect => {
            let period = 2.0 * (b - a);
            // Enough image periods to cover mean ± 8σ.
            let images = ((8.0 * sigma + (b - a)) / period).ceil() as i64 + 1;
            let mut mass = 0.0;
            for k in -images..=images {
                let shift = k as f64 * period;
                mass += normal_cdf(r + shift, mean, sigma) - normal_cdf(l + shift, mean, sigma);
                mass += normal_cdf(2.0 * a - l + shift, mean, sigma)
                    - normal_cdf(2.0 * a - r + shift, mean, sigma);
            }
            mass
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefinementOptions {
    /// Compare verdicts and margins on all words up to this length.
    pub word_len: usize,
    /// Pass iff every numeric deviation stays within this and no verdict
    /// flips.
    pub threshold: f64,
    pub word_budget: u128,
}

impl Default for RefinementOptions {
    fn default() -> Self {
        RefinementOptions { word_len: 6, threshold: 0.02, word_budget: 1_000_000 }
    }
}

/// Stability-under-refinement report: the same spec built at `grid_n` and
/// `2·grid_n`, compared on per-letter contraction coefficients, Doeblin
/// floors, and word margins/verdicts.
#[derive(Debug, Clone)]
pub struct RefinementReport {
    pub grid_n: usize,
    /// `(coarse, refined)` Dobrushin coefficient per letter.
    pub per_letter_delta: Vec<(f64, f64)>,
    /// `(coarse, refined)` D₀ constant per letter.
    pub per_letter_c_star: Vec<(f64, f64)>,
    pub max_margin_deviation: f64,
    pub verdict_mismatches: usize,
    /// Max over all compared quantities.
    pub max_deviation: f64,
    pub threshold: f64,
}

impl RefinementReport {
    pub fn passes(&self) -> bool {
        self.max_deviation <= self.threshold && self.verdict_mismatches == 0
    }
}

/// Builds the kernel spec at its grid and at double resolution and reports
/// how far the certified quantities and word classifications move.
pub fn refinement_check(
    spec: &KernelSpec,
    initial: &InitialSpec,
    accepting: &BTreeSet<usize>,
    cut: f64,
    isolation: f64,
    opts: &RefinementOptions,
) -> Result<RefinementReport> {
    let coarse = build_system(spec, initial)?;
    let fine = build_system(&spec.refined(), &initial.refined())?;

    let mut per_letter_delta = Vec::new();
    let mut per_letter_c_star = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for (c_op, f_op) in coarse.system.operators().iter().zip(fine.system.operators()) {
        let dc = ergodicity::dobrushin(c_op);
        let df = ergodicity::dobrushin(f_op);
        max_deviation = max_deviation.max((dc - df).abs());
        per_letter_delta.push((dc, df));
        let cc = ergodicity::d0_certificate(c_op).c_star;
        let cf = ergodicity::d0_certificate(f_op).c_star;
        max_deviation = max_deviation.max((cc - cf).abs());
        per_letter_c_star.push((cc, cf));
    }

    let rec_coarse = Recognizer::new(coarse.system.space(), accepting.clone(), cut, isolation)?;
    let accepting_fine: BTreeSet<usize> =
        accepting.iter().flat_map(|&c| [2 * c, 2 * c + 1]).collect();
    let rec_fine = Recognizer::new(fine.system.space(), accepting_fine, cut, isolation)?;
    let oracle_opts = OracleOptions { word_budget: opts.word_budget, ..OracleOptions::default() };
    let run_coarse = oracle_scan(&coarse.system, &rec_coarse, opts.word_len, &oracle_opts)?;
    let run_fine = oracle_scan(&fine.system, &rec_fine, opts.word_len, &oracle_opts)?;

    let mut max_margin_deviation: f64 = 0.0;
    let mut verdict_mismatches = 0;
    for (c, f) in run_coarse.entries.iter().zip(&run_fine.entries) {
        debug_assert_eq!(c.word, f.word);
        max_margin_deviation =
            max_margin_deviation.max((c.classification.margin - f.classification.margin).abs());
        if c.classification.verdict != f.classification.verdict {
            verdict_mismatches += 1;
        }
    }
    max_deviation = max_deviation.max(max_margin_deviation);

    Ok(RefinementReport {
        grid_n: spec.grid_n,
        per_letter_delta,
        per_letter_c_star,
        max_margin_deviation,
        verdict_mismatches,
        max_deviation,
        threshold: opts.threshold,
    })
}

/// The two-map fixture used across the test suites: one letter pulls left,
/// the other pulls right, both under the same Gaussian noise.
pub fn two_map_spec(sigma: f64, grid_n: usize) -> KernelSpec {
    KernelSpec {
        domain: (0.0, 1.0),
        maps: vec![
            (
                "a".into(),
                PiecewiseLinear::new(vec![(0.0, 0.2), (1.0, 0.45)]).expect("sorted"),
            ),
            (
                "b".into(),
                PiecewiseLinear::new(vec![(0.0, 0.55), (1.0, 0.8)]).expect("sorted"),
            ),
        ],
        noise: Noise::Gaussian { sigma },
        boundary: Boundary::Reflect,
        grid_n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodicity::{d0_certificate, dobrushin};

    fn identity_spec(sigma: f64, grid_n: usize, boundary: Boundary) -> KernelSpec {
        KernelSpec {
            domain: (0.0, 1.0),
            maps: vec![(
                "a".into(),
                PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap(),
            )],
            noise: Noise::Gaussian { sigma },
            boundary,
            grid_n,
        }
    }

    #[test]
    fn piecewise_linear_interpolates_and_clamps() {
        let f = PiecewiseLinear::new(vec![(0.0, 0.2), (0.5, 0.4), (1.0, 0.3)]).unwrap();
        assert_eq!(f.eval(0.0), 0.2);
        assert!((f.eval(0.25) - 0.3).abs() < 1e-15);
        assert!((f.eval(0.75) - 0.35).abs() < 1e-15);
        assert_eq!(f.eval(-1.0), 0.2);
        assert_eq!(f.eval(2.0), 0.3);
        assert!(PiecewiseLinear::new(vec![(0.5, 0.1), (0.5, 0.2)]).is_err());
    }

    #[test]
    fn identity_map_reflect_builds_a_symmetric_kernel() {
        let built = build_system(&identity_spec(0.3, 32, Boundary::Reflect), &InitialSpec::Uniform)
            .unwrap();
        let op = &built.system.operators()[0];
        assert!(op.validate(&DEFAULT_TOLERANCE).is_valid());
        assert!(built.max_defect < 1e-9, "reflection loses {}", built.max_defect);
        for x in 0..32 {
            for y in 0..32 {
                assert!((op.entry(x, y) - op.entry(y, x)).abs() < 1e-9);
            }
        }
        assert!(built.k_hat.is_finite());
    }

    #[test]
    fn truncation_refuses_heavy_boundary_loss() {
        // Identity map at the boundary loses half the Gaussian mass.
        let err = build_system(&identity_spec(0.3, 32, Boundary::TruncateRenormalize),
            &InitialSpec::Uniform);
        assert!(matches!(err, Err(Error::RenormalizationDefect { .. })));
    }

    #[test]
    fn truncation_accepts_interior_maps() {
        let spec = KernelSpec {
            domain: (0.0, 1.0),
            maps: vec![(
                "a".into(),
                PiecewiseLinear::new(vec![(0.0, 0.45), (1.0, 0.55)]).unwrap(),
            )],
            noise: Noise::Gaussian { sigma: 0.1 },
            boundary: Boundary::TruncateRenormalize,
            grid_n: 32,
        };
        let built = build_system(&spec, &InitialSpec::Uniform).unwrap();
        assert!(built.max_defect < 1e-4);
    }

    #[test]
    fn two_map_system_satisfies_d0_per_letter() {
        let built = build_system(&two_map_spec(0.3, 64), &InitialSpec::Uniform).unwrap();
        for op in built.system.operators() {
            let cert = d0_certificate(op);
            assert!(cert.c_star > 0.0, "Gaussian rows overlap everywhere");
            assert!(dobrushin(op) <= 1.0 - cert.c_star + 1e-12);
        }
        assert!(built.k_hat.is_finite() && built.k_hat > 1.0);
    }

    #[test]
    fn wider_noise_mixes_harder() {
        // δ per letter should fall and c⋆ rise along σ ∈ {0.5, 1, 2}.
        let sigmas = [0.5, 1.0, 2.0];
        let mut deltas = Vec::new();
        let mut c_stars = Vec::new();
        for &sigma in &sigmas {
            let built = build_system(&two_map_spec(sigma, 32), &InitialSpec::Uniform).unwrap();
            let op = &built.system.operators()[0];
            deltas.push(dobrushin(op));
            c_stars.push(d0_certificate(op).c_star);
        }
        assert!(deltas[0] >= deltas[1] && deltas[1] >= deltas[2], "{deltas:?}");
        assert!(c_stars[0] <= c_stars[1] && c_stars[1] <= c_stars[2], "{c_stars:?}");
    }

    #[test]
    fn refinement_of_constant_map_is_exact() {
        let spec = KernelSpec {
            domain: (0.0, 1.0),
            maps: vec![("a".into(), PiecewiseLinear::constant(0.5))],
            noise: Noise::Gaussian { sigma: 0.3 },
            boundary: Boundary::Reflect,
            grid_n: 16,
        };
        let report = refinement_check(
            &spec,
            &InitialSpec::Uniform,
            &[0, 1, 2, 3, 4, 5, 6, 7].into(),
            0.5,
            0.1,
            &RefinementOptions::default(),
        )
        .unwrap();
        assert!(report.max_deviation < 1e-6, "{report:?}");
        assert!(report.passes());
    }

    #[test]
    fn refinement_holds_at_smooth_noise_and_fails_near_deterministic() {
        // A parity-striped accepting set is maximally sensitive to which
        // cell the kernel mass lands in.
        let stripes: BTreeSet<usize> = (0..32usize).filter(|c| c % 2 == 0).collect();
        let smooth = refinement_check(
            &two_map_spec(0.3, 32),
            &InitialSpec::Uniform,
            &stripes,
            0.4,
            0.05,
            &RefinementOptions::default(),
        )
        .unwrap();
        assert!(smooth.passes(), "{smooth:?}");

        // At σ = 0.01 a grid of width 1/32 is far too coarse: the midpoint
        // centers shift by most of a noise width under refinement.
        let sharp = refinement_check(
            &two_map_spec(0.01, 32),
            &InitialSpec::Uniform,
            &stripes,
            0.4,
            0.05,
            &RefinementOptions::default(),
        )
        .unwrap();
        assert!(!sharp.passes(), "{sharp:?}");
    }

    #[test]
    fn explicit_initial_refines_by_splitting_cells() {
        let coarse = InitialSpec::Explicit(vec![0.5, 0.25, 0.25, 0.0]);
        match coarse.refined() {
            InitialSpec::Explicit(v) => {
                assert_eq!(v, vec![0.25, 0.25, 0.125, 0.125, 0.125, 0.125, 0.0, 0.0]);
            }
            InitialSpec::Uniform => panic!(),
        }
    }
}

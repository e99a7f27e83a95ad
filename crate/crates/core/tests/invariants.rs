//! Property suite for the norm and coefficient identities everything else
//! leans on: contraction, charge conservation, composition associativity,
//! Dobrushin submultiplicativity, the composition/perturbation inequalities,
//! the D₀ bound, and the zero-charge characterization of δ.

use mcs_core::doeblin::{
    bounded_density, condition_d_check, quasi_compact_bound, yosida_decompose, CheckStrategy,
    DensityBound,
};
use mcs_core::ergodicity::{d0_certificate, dobrushin, dobrushin_nullspace_check};
use mcs_core::measures::{MarkovOperator, SignedMeasure, StateSpace, DEFAULT_TOLERANCE};
use mcs_core::{Kernel, Measure};
use proptest::prelude::*;

fn measure_strategy(max_n: usize) -> impl Strategy<Value = Measure> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n).prop_map(move |mass| {
            SignedMeasure::new(&StateSpace::with_size(n), mass).unwrap()
        })
    })
}

fn kernel_rows(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.001f64..1.0, n), n).prop_map(|raw| {
        raw.into_iter()
            .map(|row| {
                let total: f64 = row.iter().sum();
                row.into_iter().map(|v| v / total).collect()
            })
            .collect()
    })
}

fn kernel_strategy(max_n: usize) -> impl Strategy<Value = Kernel> {
    (2..=max_n).prop_flat_map(|n| {
        kernel_rows(n).prop_map(move |rows| {
            MarkovOperator::stochastic(&StateSpace::with_size(n), rows, &DEFAULT_TOLERANCE)
                .unwrap()
        })
    })
}

/// A kernel/measure pair on one space.
fn kernel_and_measure(max_n: usize) -> impl Strategy<Value = (Kernel, Measure)> {
    (2..=max_n).prop_flat_map(|n| {
        (kernel_rows(n), prop::collection::vec(-1.0f64..1.0, n)).prop_map(move |(rows, mass)| {
            let space = StateSpace::with_size(n);
            (
                MarkovOperator::stochastic(&space, rows, &DEFAULT_TOLERANCE).unwrap(),
                SignedMeasure::new(&space, mass).unwrap(),
            )
        })
    })
}

/// Kernel triples on one space.
fn kernel_triple(max_n: usize) -> impl Strategy<Value = (Kernel, Kernel, Kernel)> {
    (2..=max_n).prop_flat_map(|n| {
        (kernel_rows(n), kernel_rows(n), kernel_rows(n)).prop_map(move |(a, b, c)| {
            let space = StateSpace::with_size(n);
            (
                MarkovOperator::stochastic(&space, a, &DEFAULT_TOLERANCE).unwrap(),
                MarkovOperator::stochastic(&space, b, &DEFAULT_TOLERANCE).unwrap(),
                MarkovOperator::stochastic(&space, c, &DEFAULT_TOLERANCE).unwrap(),
            )
        })
    })
}

fn tv_norm_subset_oracle(m: &Measure) -> f64 {
    let n = m.len();
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let total: f64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| m.mass()[i])
            .sum();
        sup = sup.max(total);
        inf = inf.min(total);
    }
    sup - inf
}

proptest! {
    #[test]
    fn tv_norm_equals_exhaustive_sup_minus_inf(m in measure_strategy(12)) {
        let direct = m.tv_norm();
        let oracle = tv_norm_subset_oracle(&m);
        prop_assert!((direct - oracle).abs() <= 1e-12);
    }

    #[test]
    fn markov_operators_contract_and_conserve_charge((op, m) in kernel_and_measure(8)) {
        let image = op.apply(&m).unwrap();
        prop_assert!(image.tv_norm() <= m.tv_norm() + 1e-12);
        let n = m.len() as f64;
        prop_assert!((image.total() - m.total()).abs() <= 1e-12 * n);
    }

    #[test]
    fn composition_is_associative((a, b, c) in kernel_triple(8)) {
        let left = a.then(&b).unwrap().then(&c).unwrap();
        let right = a.then(&b.then(&c).unwrap()).unwrap();
        let n = a.len() as f64;
        prop_assert!(left.op_distance(&right).unwrap() <= 2.0 * 1e-12 * n);
    }

    #[test]
    fn dobrushin_is_submultiplicative((a, b, _) in kernel_triple(8)) {
        let composed = a.then(&b).unwrap();
        prop_assert!(dobrushin(&composed) <= dobrushin(&a) * dobrushin(&b) + 1e-9);
    }

    /// `‖PQ − PR‖₁ ≤ δ(P)·‖Q − R‖₁` with P applied after Q or R.
    #[test]
    fn post_composition_contracts_kernel_differences((p, q, r) in kernel_triple(8)) {
        let pq = q.then(&p).unwrap();
        let pr = r.then(&p).unwrap();
        let lhs = pq.op_distance(&pr).unwrap();
        prop_assert!(lhs <= dobrushin(&p) * q.op_distance(&r).unwrap() + 1e-9);
    }

    /// `δ(P̃) ≤ δ(P) + ‖P − P̃‖₁`.
    #[test]
    fn dobrushin_is_stable_under_kernel_perturbation((p, p_tilde, _) in kernel_triple(8)) {
        prop_assert!(
            dobrushin(&p_tilde) <= dobrushin(&p) + p.op_distance(&p_tilde).unwrap() + 1e-9
        );
    }

    #[test]
    fn d0_constant_bounds_dobrushin(op in kernel_strategy(8)) {
        let cert = d0_certificate(&op);
        prop_assert!(cert.c_star >= 0.0);
        prop_assert!(dobrushin(&op) <= 1.0 - cert.c_star + 1e-12);
    }

    /// Sampled zero-charge ratios `‖Pλ‖₁/‖λ‖₁` never exceed δ(P).
    #[test]
    fn nullspace_ratios_stay_below_delta(op in kernel_strategy(6), seed in 0u64..1000) {
        let worst = dobrushin_nullspace_check(&op, 50, seed);
        prop_assert!(worst <= dobrushin(&op) + 1e-12);
    }

    /// The decomposition splits exactly and respects the density cap.
    #[test]
    fn decomposition_is_exact((op, _) in kernel_and_measure(8), c in 0.0f64..3.0) {
        let mu = SignedMeasure::uniform(op.space());
        let d = yosida_decompose(&op, &mu, &c).unwrap();
        let n = op.len();
        for x in 0..n {
            for y in 0..n {
                let (q, r) = (*d.q.entry(x, y), *d.r.entry(x, y));
                prop_assert!((q + r - op.entry(x, y)).abs() <= 1e-12);
                prop_assert!(q >= 0.0 && r >= 0.0);
                prop_assert!(q <= c * mu.mass()[y] + 1e-12);
            }
        }
        prop_assert!(d.eta_resid <= 1.0 + 1e-12);
    }

    /// For density-bounded kernels, `η(θ) ≥ 1 − K(1−θ)` whenever positive.
    #[test]
    fn condition_d_dominates_density_estimate(op in kernel_strategy(8), theta in 0.1f64..0.95) {
        let mu = SignedMeasure::uniform(op.space());
        let k = match bounded_density(&op, &mu).unwrap() {
            DensityBound::Bounded(k) => k,
            DensityBound::Unbounded { .. } => unreachable!("uniform reference"),
        };
        let eta = condition_d_check(&op, &mu, &theta, CheckStrategy::Exhaustive)
            .unwrap()
            .eta;
        let estimate = 1.0 - k * (1.0 - theta);
        if estimate > 0.0 {
            prop_assert!(eta >= estimate - 1e-12);
        }
    }

    #[test]
    fn quasi_compact_bound_formula(m in 0usize..40, eta in 0.01f64..1.0) {
        let expected = (m as f64 + 2.0) * (1.0 - eta).powi(m as i32);
        prop_assert!((quasi_compact_bound(m, &eta) - expected).abs() <= 1e-15);
    }
}

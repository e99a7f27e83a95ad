//! Command implementations: each returns structured results plus an
//! outcome; `main` handles report emission and exit codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use mcs_core::doeblin::{
    bounded_density, certify_quasi_compact, condition_d_scan, CheckStrategy, DensityBound,
    QuasiCompactFailure, QuasiCompactOptions, QuasiCompactOutcome,
};
use mcs_core::ergodicity::{
    certify_weak_ergodicity, d0_certificate, dobrushin, CertifyOptions, ErgodicityOutcome,
};
use mcs_core::extraction::{
    definite_language_table, definite_order, extract_dfa, operator_cover, oracle_cross_check,
    orbit_cover, DefiniteOutcome, ExtractOptions, ExtractedDfa,
};
use mcs_core::measures::SignedMeasure;
use mcs_core::recognition::{oracle_scan, AcceptancePredicate, OracleOptions, OracleRun, Verdict};
use mcs_core::scalar::Scalar;
use mcs_core::stability::{
    perturb, stability_margin, verify_stability, DfaCheck, MarginOutcome, PerturbMode,
    VerifyOptions,
};
use mcs_core::{Error as CoreError, Measure};
use num_traits::Signed;

use crate::report::Outcome;
use crate::systemfile::LoadedSystem;

pub struct CliError {
    pub message: String,
    pub outcome: Outcome,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { message: message.into(), outcome: Outcome::InvalidInput }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let outcome = match &err {
            CoreError::NotARecognizer { .. } => Outcome::NotARecognizer,
            CoreError::StateBudget { .. } | CoreError::DepthBudget { .. } => {
                Outcome::CertificationFailure
            }
            _ => Outcome::InvalidInput,
        };
        CliError { message: err.to_string(), outcome }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::invalid(message)
    }
}

pub struct CommandOutput {
    pub params: Value,
    pub results: Value,
    pub outcome: Outcome,
}

fn mass_json(m: &Measure) -> Value {
    json!(m.mass().to_vec())
}

pub fn simulate(loaded: &LoadedSystem, word_text: &str) -> Result<CommandOutput, CliError> {
    let word = loaded.system.parse_word(word_text)?;
    let mu = loaded.system.distribution(&word)?;
    let classification = loaded.recognizer.classify(&mu)?;
    let alphabet = loaded.system.alphabet();
    println!("word: {}", word.display(alphabet));
    for (label, mass) in loaded.system.space().labels().iter().zip(mu.mass()) {
        println!("  {label}: {mass}");
    }
    println!("margin: {}", classification.margin);
    println!("verdict: {}", classification.verdict.as_str());
    Ok(CommandOutput {
        params: json!({ "word": word.display(alphabet) }),
        results: json!({
            "distribution": mass_json(&mu),
            "margin": classification.margin,
            "verdict": classification.verdict.as_str(),
        }),
        outcome: Outcome::Success,
    })
}

pub fn dobrushin_cmd(
    loaded: &LoadedSystem,
    word_text: Option<&str>,
) -> Result<CommandOutput, CliError> {
    let alphabet = loaded.system.alphabet();
    if let (Some(k_hat), Some(defect)) = (loaded.k_hat, loaded.max_defect) {
        println!("discretized system: density bound k_hat = {k_hat}, max row defect = {defect}");
    }
    let mut per_letter = BTreeMap::new();
    for (symbol, op) in alphabet.iter().zip(loaded.system.operators()) {
        let delta = dobrushin(op);
        let c_star = d0_certificate(op).c_star;
        println!("letter {symbol}: delta = {delta}, d0 c_star = {c_star}");
        per_letter.insert(symbol.clone(), json!({ "delta": delta, "c_star": c_star }));
    }
    let word_result = match word_text {
        None => Value::Null,
        Some(text) => {
            let word = loaded.system.parse_word(text)?;
            let delta = dobrushin(&loaded.system.compose_word(&word)?);
            println!("word {}: delta = {delta}", word.display(alphabet));
            json!({ "word": word.display(alphabet), "delta": delta })
        }
    };
    Ok(CommandOutput {
        params: json!({ "word": word_text }),
        results: json!({ "per_letter": per_letter, "word": word_result }),
        outcome: Outcome::Success,
    })
}

pub fn certify_ergodic(
    loaded: &LoadedSystem,
    r_max: usize,
    delta_cap: f64,
    budget: u128,
) -> Result<CommandOutput, CliError> {
    let opts = CertifyOptions { delta_cap, word_budget: budget, ..CertifyOptions::default() };
    let params = json!({ "rmax": r_max, "delta_cap": delta_cap, "budget": budget as u64 });
    match certify_weak_ergodicity(&loaded.system, r_max, &opts)? {
        ErgodicityOutcome::Certified(cert) => {
            println!("weakly ergodic: r = {}, delta_bar = {}", cert.r, cert.delta_bar);
            Ok(CommandOutput {
                params,
                results: json!({ "certified": true, "r": cert.r, "delta_bar": cert.delta_bar }),
                outcome: Outcome::Success,
            })
        }
        ErgodicityOutcome::Failed { r_max, witness, delta } => {
            let witness = witness.display(loaded.system.alphabet());
            println!("not certified up to r = {r_max}: worst word {witness} has delta = {delta}");
            Ok(CommandOutput {
                params,
                results: json!({
                    "certified": false, "r_max": r_max, "witness": witness, "delta": delta,
                }),
                outcome: Outcome::CertificationFailure,
            })
        }
    }
}

pub fn certify_doeblin(
    loaded: &LoadedSystem,
    theta_grid: &[f64],
) -> Result<CommandOutput, CliError> {
    let mu = SignedMeasure::uniform(loaded.system.space());
    let mut letters = Vec::new();
    let mut all_certified = true;
    for (symbol, op) in loaded.system.alphabet().iter().zip(loaded.system.operators()) {
        let k = match bounded_density(op, &mu)? {
            DensityBound::Bounded(k) => Some(k),
            DensityBound::Unbounded { .. } => None,
        };
        let scans = condition_d_scan(op, &mu, theta_grid, CheckStrategy::Auto)?;
        let mut etas = BTreeMap::new();
        let mut best: Option<(f64, f64)> = None;
        for report in &scans {
            etas.insert(format!("{}", report.theta), json!(report.eta));
            if report.holds() && best.is_none_or(|(_, eta)| report.eta > eta) {
                best = Some((report.theta, report.eta));
            }
        }
        match best {
            Some((theta, eta)) => {
                println!("letter {symbol}: condition D holds, best theta = {theta}, eta = {eta}");
            }
            None => {
                all_certified = false;
                println!("letter {symbol}: condition D fails on the whole theta grid");
            }
        }
        letters.push(json!({
            "symbol": symbol,
            "density_bound": k,
            "etas": etas,
            "best": best.map(|(theta, eta)| json!({ "theta": theta, "eta": eta })),
        }));
    }
    Ok(CommandOutput {
        params: json!({ "theta_grid": theta_grid, "reference": "uniform" }),
        results: json!({ "per_letter": letters, "certified": all_certified }),
        outcome: if all_certified { Outcome::Success } else { Outcome::CertificationFailure },
    })
}

pub fn certify_quasicompact(
    loaded: &LoadedSystem,
    n_compose: usize,
) -> Result<CommandOutput, CliError> {
    let mu = SignedMeasure::uniform(loaded.system.space());
    let opts = QuasiCompactOptions::default();
    let params = json!({ "n": n_compose, "reference": "uniform" });
    match certify_quasi_compact(&loaded.system, &mu, n_compose, &opts)? {
        QuasiCompactOutcome::Certified(cert) => {
            println!(
                "quasi-compact: theta = {}, eta = {}, blocks = {}, r = {}, defect bound = {}",
                cert.theta, cert.eta, cert.blocks, cert.r, cert.defect_bound
            );
            Ok(CommandOutput {
                params,
                results: json!({
                    "certified": true,
                    "theta": cert.theta,
                    "eta": cert.eta,
                    "k_star": cert.k_star,
                    "blocks": cert.blocks,
                    "r": cert.r,
                    "defect_bound": cert.defect_bound,
                    "delta": cert.delta,
                }),
                outcome: Outcome::Success,
            })
        }
        QuasiCompactOutcome::Failed { witness, detail } => {
            let witness = witness.display(loaded.system.alphabet());
            let detail = match detail {
                QuasiCompactFailure::UnboundedDensity { row, cell } => {
                    println!("not quasi-compact via condition D: word {witness} moves mass from row {row} onto unsupported cell {cell}");
                    json!({ "kind": "unbounded-density", "row": row, "cell": cell })
                }
                QuasiCompactFailure::NoUsableEta { k_star } => {
                    println!("not quasi-compact via condition D: no usable eta on the theta grid (witness {witness}, density ratio {k_star})");
                    json!({ "kind": "no-usable-eta", "k_star": k_star })
                }
            };
            Ok(CommandOutput {
                params,
                results: json!({ "certified": false, "witness": witness, "detail": detail }),
                outcome: Outcome::CertificationFailure,
            })
        }
    }
}

fn dfa_json(extracted: &ExtractedDfa<f64>, alphabet: &[String]) -> Value {
    json!({
        "states": extracted.dfa.state_count(),
        "text": extracted.dfa.to_text(),
        "representatives": extracted
            .representatives
            .iter()
            .map(|rep| {
                json!({
                    "word": rep.word.display(alphabet),
                    "verdict": rep.verdict.as_str(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn extract_dfa_cmd(
    loaded: &LoadedSystem,
    radius: Option<f64>,
    max_states: usize,
    oracle_horizon: usize,
    out: Option<&Path>,
) -> Result<CommandOutput, CliError> {
    let rho = loaded.recognizer.induced_gap();
    let radius = radius.unwrap_or(rho / 2.0);
    let params = json!({
        "radius": radius,
        "max_states": max_states,
        "oracle_horizon": oracle_horizon,
    });
    let opts = ExtractOptions { max_states, ..ExtractOptions::default() };
    let extracted = match extract_dfa(&loaded.system, &loaded.recognizer, radius, &opts) {
        Ok(out) => out,
        Err(CoreError::NotARecognizer { word }) => {
            println!("not a recognizer: word {word} is undecided");
            return Ok(CommandOutput {
                params,
                results: json!({ "not_a_recognizer": word }),
                outcome: Outcome::NotARecognizer,
            });
        }
        Err(CoreError::StateBudget { max_states }) => {
            println!("no finite extraction at radius {radius} within {max_states} states");
            return Ok(CommandOutput {
                params,
                results: json!({ "state_budget": max_states }),
                outcome: Outcome::CertificationFailure,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let text = extracted.dfa.to_text();
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut mismatches = Value::Null;
    let mut outcome = Outcome::Success;
    if oracle_horizon > 0 {
        match mcs_core::recognition::enumerate_classify(
            &loaded.system,
            &loaded.recognizer,
            oracle_horizon,
            &OracleOptions::default(),
        ) {
            Ok(run) => {
                let bad = oracle_cross_check(&extracted.dfa, &run);
                println!(
                    "oracle cross-check to length {oracle_horizon}: {} mismatches over {} words",
                    bad.len(),
                    run.entries.len()
                );
                if !bad.is_empty() {
                    outcome = Outcome::CertificationFailure;
                }
                mismatches = json!(bad
                    .iter()
                    .map(|w| w.display(loaded.system.alphabet()))
                    .collect::<Vec<_>>());
            }
            Err(CoreError::NotARecognizer { word }) => {
                println!("oracle found an undecided word: {word}");
                return Ok(CommandOutput {
                    params,
                    results: json!({ "dfa": dfa_json(&extracted, loaded.system.alphabet()), "not_a_recognizer": word }),
                    outcome: Outcome::NotARecognizer,
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    println!("states: {}", extracted.dfa.state_count());
    Ok(CommandOutput {
        params,
        results: json!({
            "dfa": dfa_json(&extracted, loaded.system.alphabet()),
            "oracle_mismatches": mismatches,
        }),
        outcome,
    })
}

pub fn extract_definite(
    loaded: &LoadedSystem,
    r_max: usize,
    out: Option<&Path>,
) -> Result<CommandOutput, CliError> {
    let gap = loaded.recognizer.induced_gap();
    let params = json!({ "rmax": r_max, "gap": gap });
    match definite_order(&loaded.system, gap, r_max, 1_000_000)? {
        DefiniteOutcome::Failed { r_max, witness, delta } => {
            let witness = witness.display(loaded.system.alphabet());
            println!("not definite up to r = {r_max}: word {witness} keeps delta = {delta}");
            Ok(CommandOutput {
                params,
                results: json!({
                    "certified": false, "r_max": r_max, "witness": witness, "delta": delta,
                }),
                outcome: Outcome::CertificationFailure,
            })
        }
        DefiniteOutcome::Certified(cert) => {
            println!(
                "definite of order {}: worst delta = {} < gap/2 = {}",
                cert.r_star,
                cert.worst_delta,
                gap / 2.0
            );
            let table = match definite_language_table(&loaded.system, &loaded.recognizer, &cert) {
                Ok(table) => table,
                Err(CoreError::NotARecognizer { word }) => {
                    println!("not a recognizer: word {word} is undecided");
                    return Ok(CommandOutput {
                        params,
                        results: json!({ "certified": true, "r_star": cert.r_star, "not_a_recognizer": word }),
                        outcome: Outcome::NotARecognizer,
                    });
                }
                Err(e) => return Err(e.into()),
            };
            let text = table.dfa.to_text();
            print!("{text}");
            if let Some(path) = out {
                std::fs::write(path, &text).map_err(|e| {
                    CliError::invalid(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(CommandOutput {
                params,
                results: json!({
                    "certified": true,
                    "r_star": cert.r_star,
                    "worst_delta": cert.worst_delta,
                    "dfa": dfa_json(&table, loaded.system.alphabet()),
                }),
                outcome: Outcome::Success,
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn stability_cmd(
    loaded: &LoadedSystem,
    beta: f64,
    trials: usize,
    seed: Option<u64>,
    horizon: usize,
    r_max: usize,
) -> Result<CommandOutput, CliError> {
    let seed = seed.unwrap_or_else(|| loaded.seed());
    let params = json!({
        "beta": beta, "trials": trials, "seed": seed, "horizon": horizon, "rmax": r_max,
    });
    let margin = match stability_margin(&loaded.system, beta, r_max, 1_000_000)? {
        MarginOutcome::Found(m) => m,
        MarginOutcome::Failed { r_max, witness, delta } => {
            let witness = witness.display(loaded.system.alphabet());
            println!("no stability margin: delta = {delta} at r = {r_max} (witness {witness})");
            return Ok(CommandOutput {
                params,
                results: json!({
                    "margin": null, "witness": witness, "delta": delta, "r_max": r_max,
                }),
                outcome: Outcome::CertificationFailure,
            });
        }
    };
    println!(
        "margin: r = {}, epsilon = {}, worst delta at r = {}",
        margin.r, margin.epsilon, margin.worst_delta
    );
    let iota = *loaded.recognizer.isolation();
    let beta_within_isolation = beta <= iota;
    if !beta_within_isolation {
        println!("note: beta = {beta} exceeds the isolation {iota}; language equality is not guaranteed");
    }

    let verify_opts = VerifyOptions {
        horizon,
        block_r: Some(margin.r),
        beta: Some(beta),
        extract_radius: Some(loaded.recognizer.induced_gap() / 2.0),
        ..VerifyOptions::default()
    };
    let mut rows = Vec::new();
    let mut all_clean = true;
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial as u64);
        let perturbed = perturb(&loaded.system, margin.epsilon, trial_seed, PerturbMode::Dense)?;
        let report = verify_stability(&loaded.system, &perturbed.system, &loaded.recognizer, &verify_opts)?;
        let dfa_check = match &report.dfa_check {
            Some(DfaCheck::Equal) => json!("equal"),
            Some(DfaCheck::Counterexample(w)) => {
                json!({ "counterexample": w.display(loaded.system.alphabet()) })
            }
            Some(DfaCheck::NotARecognizer { word, .. }) => {
                json!({ "not_a_recognizer": word })
            }
            None => Value::Null,
        };
        let clean = report.languages_agree()
            && report.within_beta.unwrap_or(true)
            && report.linear_chain_ok
            && report.block_chain_ok.unwrap_or(true)
            && matches!(report.dfa_check, Some(DfaCheck::Equal) | None);
        all_clean &= clean;
        println!(
            "trial {trial} (seed {trial_seed}): realized = {}, max word distance = {}, disagreements = {}, clean = {clean}",
            perturbed.realized_distance,
            report.max_word_distance,
            report.verdict_disagreements.len()
        );
        rows.push(json!({
            "trial": trial,
            "seed": trial_seed,
            "realized_distance": perturbed.realized_distance,
            "max_word_distance": report.max_word_distance,
            "argmax_word": report.argmax_word.display(loaded.system.alphabet()),
            "within_beta": report.within_beta,
            "linear_chain_ok": report.linear_chain_ok,
            "block_chain_ok": report.block_chain_ok,
            "delta_transfer_ok": report.delta_transfer_ok,
            "disagreements": report
                .verdict_disagreements
                .iter()
                .map(|w| w.display(loaded.system.alphabet()))
                .collect::<Vec<_>>(),
            "dfa_check": dfa_check,
        }));
    }
    println!("stability: {}", if all_clean { "preserved" } else { "violated" });
    Ok(CommandOutput {
        params,
        results: json!({
            "margin": {
                "beta": margin.beta, "r": margin.r,
                "epsilon": margin.epsilon, "worst_delta": margin.worst_delta,
            },
            "beta_within_isolation": beta_within_isolation,
            "trials": rows,
            "preserved": all_clean,
        }),
        outcome: if all_clean { Outcome::Success } else { Outcome::CertificationFailure },
    })
}

pub fn orbit_cmd(
    loaded: &LoadedSystem,
    epsilon: f64,
    max_len: usize,
    operators: bool,
) -> Result<CommandOutput, CliError> {
    let report = if operators {
        operator_cover(&loaded.system, epsilon, max_len, 1_000_000)?
    } else {
        orbit_cover(&loaded.system, epsilon, max_len, 1_000_000)?
    };
    for (len, count) in report.counts.iter().enumerate() {
        println!("length <= {len}: net size {count}");
    }
    match report.stabilized_at {
        Some(level) => println!("stabilized at length {level}"),
        None => println!("still growing at the horizon"),
    }
    Ok(CommandOutput {
        params: json!({ "epsilon": epsilon, "maxlen": max_len }),
        results: json!({
            "counts": report.counts,
            "stabilized_at": report.stabilized_at,
        }),
        outcome: Outcome::Success,
    })
}

fn dump_lines<S: Scalar>(run: &OracleRun<S>, alphabet: &[String]) -> String {
    let mut text = String::new();
    for entry in &run.entries {
        text.push_str(&format!(
            "{} {} {}\n",
            entry.word.display(alphabet),
            entry.classification.verdict.as_str(),
            entry.classification.margin
        ));
    }
    text
}

pub fn oracle_cmd(
    loaded: &LoadedSystem,
    max_len: usize,
    exact: bool,
    dump: Option<&Path>,
) -> Result<CommandOutput, CliError> {
    let params = json!({ "maxlen": max_len, "exact": exact });
    let opts = OracleOptions::default();
    let run = oracle_scan(&loaded.system, &loaded.recognizer, max_len, &opts)?;
    let alphabet = loaded.system.alphabet().to_vec();

    let mut results = BTreeMap::new();
    let accepts = run
        .entries
        .iter()
        .filter(|e| e.classification.verdict == Verdict::Accept)
        .count();
    println!(
        "{} words: {} accept, {} reject, {} undecided; min slack = {:?}",
        run.entries.len(),
        accepts,
        run.entries.len() - accepts - run.undecided.len(),
        run.undecided.len(),
        run.min_slack
    );
    results.insert("words".to_string(), json!(run.entries.len()));
    results.insert("accepts".to_string(), json!(accepts));
    results.insert("undecided".to_string(), json!(run.undecided.len()));
    results.insert("min_slack".to_string(), json!(run.min_slack));
    let witness = run
        .undecided
        .first()
        .map(|&i| run.entries[i].word.display(&alphabet));
    results.insert("undecided_witness".to_string(), json!(witness));

    let mut dump_text = dump_lines(&run, &alphabet);
    let mut outcome = if run.undecided.is_empty() {
        Outcome::Success
    } else {
        Outcome::NotARecognizer
    };

    if exact {
        let (rational, rational_rec) = loaded.file.load_rational()?;
        let exact_run = oracle_scan(&rational, &rational_rec, max_len, &opts)?;
        dump_text = dump_lines(&exact_run, &alphabet);
        let iota = rational_rec.isolation().clone();
        let slack_floor = mcs_core::scalar::ratio(1, 1_000_000);
        let mut disagreements = Vec::new();
        for (approx, exact_entry) in run.entries.iter().zip(&exact_run.entries) {
            let slack =
                (exact_entry.classification.margin.abs() - iota.clone()).abs();
            if slack > slack_floor
                && approx.classification.verdict != exact_entry.classification.verdict
            {
                disagreements.push(approx.word.display(&alphabet));
            }
        }
        println!(
            "exact referee: {} verdict disagreements beyond slack 1e-6",
            disagreements.len()
        );
        results.insert("exact_undecided".to_string(), json!(exact_run.undecided.len()));
        results.insert(
            "exact_min_slack".to_string(),
            json!(exact_run.min_slack.as_ref().map(|s| s.to_string())),
        );
        results.insert("referee_disagreements".to_string(), json!(disagreements));
        if !exact_run.undecided.is_empty() {
            outcome = Outcome::NotARecognizer;
        }
    }

    if let Some(path) = dump {
        std::fs::write(path, &dump_text)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    } else if run.entries.len() <= 64 {
        print!("{dump_text}");
    }
    Ok(CommandOutput {
        params,
        results: json!(results),
        outcome,
    })
}

pub fn out_path(path: &Option<PathBuf>) -> Option<&Path> {
    path.as_deref()
}

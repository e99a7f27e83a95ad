//! The `mcs-v1` system-definition file.
//!
//! A system file carries either explicit per-symbol kernels (entries as
//! decimals or rational strings `"p/q"`) or a continuous kernel
//! specification to be discretized, plus the initial distribution, the
//! recognizer, and optional tolerance and seed defaults. Parsing is strict:
//! a file that loads produces a system and recognizer that pass every
//! library validator.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use mcs_core::discretize::{
    build_system, Boundary, InitialSpec, KernelSpec, Noise, PiecewiseLinear,
};
use mcs_core::measures::{MarkovOperator, MarkovSystem, SignedMeasure, StateSpace, DEFAULT_TOLERANCE};
use mcs_core::recognition::Recognizer;
use mcs_core::scalar::Scalar;
use mcs_core::{RationalSystem, System};

pub const SCHEMA: &str = "mcs-v1";

/// A kernel or measure entry: a JSON number or a rational string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

impl Entry {
    pub fn to_f64(&self) -> Result<f64, String> {
        match self {
            Entry::Number(v) if v.is_finite() => Ok(*v),
            Entry::Number(v) => Err(format!("non-finite entry {v}")),
            Entry::Text(s) => {
                let q = parse_rational(s)?;
                Ok(q.to_f64_lossy())
            }
        }
    }

    /// Exact rational value: rational strings verbatim, numbers through
    /// their exact binary value.
    pub fn to_rational(&self) -> Result<BigRational, String> {
        match self {
            Entry::Number(v) if v.is_finite() => Ok(BigRational::from_f64_nearest(*v)),
            Entry::Number(v) => Err(format!("non-finite entry {v}")),
            Entry::Text(s) => parse_rational(s),
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("bad rational `{text}`"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("bad rational `{text}`"))?;
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecognizerSpec {
    pub accepting: Vec<usize>,
    pub cut: Entry,
    pub isolation: Entry,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: String,
    pub sigma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuousSpec {
    pub domain: [f64; 2],
    /// Per-symbol piecewise-linear maps as `[x, f(x)]` breakpoints.
    pub maps: BTreeMap<String, Vec<[f64; 2]>>,
    pub noise: NoiseSpec,
    /// `"reflect"` or `"truncate_renormalize"`.
    pub boundary: String,
    pub grid_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialField {
    Named(String),
    Masses(Vec<Entry>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub schema: String,
    pub alphabet: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernels: Option<BTreeMap<String, Vec<Vec<Entry>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuous: Option<ContinuousSpec>,
    pub initial: InitialField,
    pub recognizer: RecognizerSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A file realized as in-memory objects.
pub struct LoadedSystem {
    pub file: SystemFile,
    pub system: System,
    pub recognizer: Recognizer<f64>,
    /// Discretization diagnostics when built from a continuous spec.
    pub k_hat: Option<f64>,
    pub max_defect: Option<f64>,
}

impl LoadedSystem {
    pub fn seed(&self) -> u64 {
        self.file.seed.unwrap_or(0)
    }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<SystemFile, String> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| format!("unparseable system file: {e}"))?;
        if file.schema != SCHEMA {
            return Err(format!("unsupported schema `{}` (expected {SCHEMA})", file.schema));
        }
        Ok(file)
    }

    pub fn from_path(path: &Path) -> Result<SystemFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        SystemFile::parse(&text)
    }

    #[cfg(test)]
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// The continuous half of the file as a library kernel spec.
    pub fn kernel_spec(&self) -> Result<Option<KernelSpec>, String> {
        let Some(continuous) = &self.continuous else {
            return Ok(None);
        };
        let boundary = match continuous.boundary.as_str() {
            "reflect" => Boundary::Reflect,
            "truncate_renormalize" => Boundary::TruncateRenormalize,
            other => return Err(format!("unknown boundary policy `{other}`")),
        };
        if continuous.noise.kind != "gaussian" {
            return Err(format!("unknown noise kind `{}`", continuous.noise.kind));
        }
        let mut maps = Vec::new();
        for symbol in &self.alphabet {
            let points = continuous
                .maps
                .get(symbol)
                .ok_or_else(|| format!("no map for symbol `{symbol}`"))?;
            let map = PiecewiseLinear::new(points.iter().map(|p| (p[0], p[1])).collect())
                .map_err(|e| e.to_string())?;
            maps.push((symbol.clone(), map));
        }
        if continuous.maps.len() != self.alphabet.len() {
            return Err("continuous maps do not match the alphabet".into());
        }
        Ok(Some(KernelSpec {
            domain: (continuous.domain[0], continuous.domain[1]),
            maps,
            noise: Noise::Gaussian { sigma: continuous.noise.sigma },
            boundary,
            grid_n: continuous.grid_n,
        }))
    }

    pub fn initial_spec(&self) -> Result<InitialSpec, String> {
        match &self.initial {
            InitialField::Named(name) if name == "uniform" => Ok(InitialSpec::Uniform),
            InitialField::Named(name) => Err(format!("unknown initial `{name}`")),
            InitialField::Masses(entries) => Ok(InitialSpec::Explicit(
                entries.iter().map(Entry::to_f64).collect::<Result<_, _>>()?,
            )),
        }
    }

    pub fn load(&self) -> Result<LoadedSystem, String> {
        let tolerance = self.tolerance();
        let (system, k_hat, max_defect) = if let Some(spec) = self.kernel_spec()? {
            if self.kernels.is_some() {
                return Err("both `kernels` and `continuous` present".into());
            }
            let built =
                build_system(&spec, &self.initial_spec()?).map_err(|e| e.to_string())?;
            (built.system, Some(built.k_hat), Some(built.max_defect))
        } else {
            let kernels = self
                .kernels
                .as_ref()
                .ok_or("a system file needs `kernels` or `continuous`")?;
            let n = self.infer_n(kernels)?;
            let space = StateSpace::with_size(n);
            let mut operators = Vec::new();
            for symbol in &self.alphabet {
                let rows = kernels
                    .get(symbol)
                    .ok_or_else(|| format!("no kernel for symbol `{symbol}`"))?;
                let rows: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|row| row.iter().map(Entry::to_f64).collect())
                    .collect::<Result<_, _>>()?;
                operators.push(
                    MarkovOperator::stochastic(&space, rows, &tolerance)
                        .map_err(|e| format!("kernel for `{symbol}`: {e}"))?,
                );
            }
            if kernels.len() != self.alphabet.len() {
                return Err("kernels do not match the alphabet".into());
            }
            let initial = match self.initial_spec()? {
                InitialSpec::Uniform => SignedMeasure::uniform(&space),
                InitialSpec::Explicit(mass) => {
                    SignedMeasure::new(&space, mass).map_err(|e| e.to_string())?
                }
            };
            let system = MarkovSystem::new(self.alphabet.clone(), operators, initial, tolerance)
                .map_err(|e| e.to_string())?;
            (system, None, None)
        };

        let recognizer = Recognizer::new(
            system.space(),
            self.recognizer.accepting.iter().copied().collect::<BTreeSet<_>>(),
            self.recognizer.cut.to_f64()?,
            self.recognizer.isolation.to_f64()?,
        )
        .map_err(|e| e.to_string())?;
        Ok(LoadedSystem {
            file: self.clone(),
            system,
            recognizer,
            k_hat,
            max_defect,
        })
    }

    fn infer_n(&self, kernels: &BTreeMap<String, Vec<Vec<Entry>>>) -> Result<usize, String> {
        let from_kernel = kernels
            .values()
            .next()
            .map(Vec::len)
            .ok_or("empty kernel table")?;
        match self.n {
            Some(n) if n != from_kernel => {
                Err(format!("declared n = {n} but kernels are {from_kernel}×{from_kernel}"))
            }
            _ => Ok(from_kernel),
        }
    }

    /// Exact-rational realization; requires explicit kernels.
    pub fn load_rational(&self) -> Result<(RationalSystem, Recognizer<BigRational>), String> {
        if self.continuous.is_some() {
            return Err("exact mode needs explicit rational kernels, not a continuous spec".into());
        }
        let kernels = self
            .kernels
            .as_ref()
            .ok_or("a system file needs `kernels` or `continuous`")?;
        let n = self.infer_n(kernels)?;
        let space = StateSpace::with_size(n);
        let zero = BigRational::from_f64_nearest(0.0);
        let mut operators = Vec::new();
        for symbol in &self.alphabet {
            let rows = kernels
                .get(symbol)
                .ok_or_else(|| format!("no kernel for symbol `{symbol}`"))?;
            let rows: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|row| row.iter().map(Entry::to_rational).collect())
                .collect::<Result<_, _>>()?;
            operators.push(
                MarkovOperator::stochastic(&space, rows, &zero)
                    .map_err(|e| format!("kernel for `{symbol}` is not exactly stochastic: {e}"))?,
            );
        }
        let initial = match &self.initial {
            InitialField::Named(name) if name == "uniform" => SignedMeasure::uniform(&space),
            InitialField::Named(name) => return Err(format!("unknown initial `{name}`")),
            InitialField::Masses(entries) => {
                let mass: Vec<BigRational> = entries
                    .iter()
                    .map(Entry::to_rational)
                    .collect::<Result<_, _>>()?;
                SignedMeasure::new(&space, mass).map_err(|e| e.to_string())?
            }
        };
        let system = MarkovSystem::new(self.alphabet.clone(), operators, initial, zero)
            .map_err(|e| e.to_string())?;
        let recognizer = Recognizer::new(
            system.space(),
            self.recognizer.accepting.iter().copied().collect::<BTreeSet<_>>(),
            self.recognizer.cut.to_rational()?,
            self.recognizer.isolation.to_rational()?,
        )
        .map_err(|e| e.to_string())?;
        Ok((system, recognizer))
    }
}

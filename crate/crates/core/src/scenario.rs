//! Scenario files: a system, a reservoir, a process and the checks to run.
//!
//! ```toml
//! name = "qubit swap"
//!
//! [system]
//! spectrum = [0.8, 0.2]
//!
//! [reservoir]
//! energies = [0.0, 1.0]
//! beta = 0.5
//!
//! [process]
//! kind = "swap"
//!
//! [[check]]
//! name = "equality"
//! tol = 1e-8
//!
//! [[check]]
//! quantity = "delta_q"
//! expect = -0.1
//! tol = 1e-6
//! ```
//!
//! Without any `[[check]]` entries every check that applies to the process
//! kind runs at its default tolerance.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::bounds::compute_m;
use crate::processes::{
    build_kstep_process, build_tight_process, check_equality_case, controlled_shift, integral_version_check,
    kstep_dense_oracle, lift_system_memory, lift_system_reservoir, memory_process_report, pure_erasure_required_depth,
    pure_erasure_truncated, pureness_bound_check, run_process, swap_closed_forms, KStepSpec, MemoryProcessSpec,
    ProcessSpec, ERASURE_TAIL_TOL,
};
use crate::quantum::{
    haar_unitary, random_hamiltonian, random_state, swap_unitary, von_neumann_entropy, CMatrix, HermitianOp, QState,
    Unitary,
};
use crate::thermo::{InverseTemp, Reservoir};

/// Joint dimension up to which `kstep-dense` builds the full process.
pub const KSTEP_DENSE_LIMIT: usize = 512;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error("invalid scenario: {0}")]
    Invalid(String),

    #[error(transparent)]
    Numeric(#[from] crate::error::Error),
}

type Result<T> = std::result::Result<T, ScenarioError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ScenarioError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    #[default]
    Computational,
    /// Haar-random eigenbasis from `seed`.
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatePreset {
    MaximallyMixed,
    Ground,
    /// Random state of rank `rank` (default full) from `seed`.
    Random,
    /// Maximally entangled state on two factors of dimension `dim`.
    MaxEntangled,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub spectrum: Option<Vec<f64>>,
    pub preset: Option<StatePreset>,
    pub dim: Option<usize>,
    pub rank: Option<usize>,
    #[serde(default)]
    pub basis: Basis,
    pub seed: Option<u64>,
    pub factors: Option<Vec<usize>>,
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.map_or_else(|| invalid(format!("{what} needs a seed")), Ok)
}

fn spectral_state(spectrum: &[f64], basis: Basis, seed: Option<u64>) -> Result<QState<f64>> {
    Ok(match basis {
        Basis::Computational => QState::diagonal(spectrum)?,
        Basis::Haar => {
            let u = haar_unitary(spectrum.len(), need_seed(seed, "a Haar basis")?);
            QState::from_spectrum(spectrum, &u)?
        }
    })
}

impl StateSpec {
    pub fn build(&self) -> Result<QState<f64>> {
        let state = match (&self.spectrum, self.preset) {
            (Some(_), Some(_)) => return invalid("system: give either spectrum or preset"),
            (None, None) => return invalid("system: spectrum or preset required"),
            (Some(p), None) => spectral_state(p, self.basis, self.seed)?,
            (None, Some(preset)) => {
                let Some(d) = self.dim else {
                    return invalid("system: preset needs dim");
                };
                match preset {
                    StatePreset::MaximallyMixed => QState::maximally_mixed(d),
                    StatePreset::Ground => QState::basis_state(d, 0)?,
                    StatePreset::Random => random_state(d, self.rank.unwrap_or(d), need_seed(self.seed, "preset random")?)?,
                    StatePreset::MaxEntangled => crate::processes::entangled_memory(d),
                }
            }
        };
        Ok(match &self.factors {
            Some(f) => state.with_dims(f.clone())?,
            None => state,
        })
    }
}

/// A reservoir given by a Hamiltonian and inverse temperature, by its thermal
/// state, or drawn at random.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirSpec {
    /// Energy levels; `inf` marks a level that is never populated.
    pub energies: Option<Vec<f64>>,
    /// Full-rank state taken as thermal for `H = -log rho` at `beta = 1`.
    pub state: Option<Vec<f64>>,
    /// Dimension of a random Hamiltonian with levels in `energy_range`.
    pub random_dim: Option<usize>,
    pub energy_range: Option<[f64; 2]>,
    pub beta: Option<f64>,
    #[serde(default)]
    pub basis: Basis,
    pub seed: Option<u64>,
    pub factors: Option<Vec<usize>>,
}

impl ReservoirSpec {
    pub fn build(&self) -> Result<Reservoir<f64>> {
        let given = [self.energies.is_some(), self.state.is_some(), self.random_dim.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return invalid("reservoir: give exactly one of energies, state, random_dim");
        }
        let beta = || match self.beta {
            Some(b) => Ok(InverseTemp::new(b)?),
            None => invalid("reservoir: beta required"),
        };
        let reservoir = if let Some(p) = &self.state {
            if self.beta.is_some() {
                return invalid("reservoir: a reservoir given by its state has beta = 1");
            }
            Reservoir::from_state(&spectral_state(p, self.basis, self.seed)?)?
        } else if let Some(d) = self.random_dim {
            let [lo, hi] = self.energy_range.unwrap_or([0.0, 2.0]);
            Reservoir::new(random_hamiltonian(d, lo, hi, need_seed(self.seed, "a random reservoir")?), beta()?)
        } else {
            let e = self.energies.as_deref().unwrap_or_default();
            if e.iter().any(|x| x.is_nan() || *x == f64::NEG_INFINITY) {
                return invalid("reservoir: energies must be finite or +inf");
            }
            if e.iter().any(|x| x.is_infinite() && *x > 0.0) {
                if self.basis != Basis::Computational {
                    return invalid("reservoir: masked levels need the computational basis");
                }
                let levels: Vec<Option<f64>> = e.iter().map(|&x| x.is_finite().then_some(x)).collect();
                Reservoir::masked(&levels, beta()?)?
            } else {
                let h = match self.basis {
                    Basis::Computational => HermitianOp::diagonal(e),
                    Basis::Haar => {
                        HermitianOp::from_spectrum(e, &haar_unitary(e.len(), need_seed(self.seed, "a Haar basis")?))?
                    }
                };
                Reservoir::new(h, beta()?)
            }
        };
        Ok(match &self.factors {
            Some(f) => reservoir.with_factor_dims(f.clone())?,
            None => reservoir,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemoryPreset {
    Classical,
    Entangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemoryOperation {
    /// Controlled shift on system and memory.
    Erase,
    /// Exchange of system and reservoir.
    Swap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProcessSection {
    Identity {},
    Haar {
        seed: u64,
    },
    /// Exchange of the leading `swap_dim`-dimensional factors (default: the
    /// whole system).
    Swap {
        swap_dim: Option<usize>,
    },
    /// Unitary read from a file with `re` and optional `im` row arrays; the
    /// path is relative to the scenario file.
    UnitaryMatrix {
        file: PathBuf,
    },
    /// `k` steps from the system state to a target spectrum.
    Kstep {
        k: usize,
        target: Vec<f64>,
    },
    /// Swap attaining the finite-size bound at `delta_s`.
    Tight {
        delta_s: f64,
        d: usize,
    },
    Memory {
        memory: MemoryPreset,
        d: usize,
        operation: MemoryOperation,
    },
    PureErasure {
        s1: f64,
        epsilon: f64,
        depth: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Equality,
    SecondLaw,
    Landauer,
    FiniteSize,
    Sharpened,
    Pureness,
    Integral,
    EqualityCase,
    Tight,
    SwapClosedForm,
    KstepBounds,
    KstepDirect,
    KstepDense,
    MemorySecondLaw,
    MemoryLandauer,
    MemoryIdentity,
    ErasureRelent,
    ErasurePurity,
    ErasureEquality,
}

impl CheckName {
    pub fn label(self) -> &'static str {
        match self {
            Self::Equality => "equality",
            Self::SecondLaw => "second-law",
            Self::Landauer => "landauer",
            Self::FiniteSize => "finite-size",
            Self::Sharpened => "sharpened",
            Self::Pureness => "pureness",
            Self::Integral => "integral",
            Self::EqualityCase => "equality-case",
            Self::Tight => "tight",
            Self::SwapClosedForm => "swap-closed-form",
            Self::KstepBounds => "kstep-bounds",
            Self::KstepDirect => "kstep-direct",
            Self::KstepDense => "kstep-dense",
            Self::MemorySecondLaw => "memory-second-law",
            Self::MemoryLandauer => "memory-landauer",
            Self::MemoryIdentity => "memory-identity",
            Self::ErasureRelent => "erasure-relent",
            Self::ErasurePurity => "erasure-purity",
            Self::ErasureEquality => "erasure-equality",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Self::SecondLaw | Self::SwapClosedForm | Self::KstepBounds | Self::KstepDirect => 1e-9,
            Self::Pureness => 1e-10,
            Self::Integral | Self::ErasureRelent | Self::EqualityCase => 1e-6,
            Self::Tight => 1e-5,
            _ => 1e-8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: Option<CheckName>,
    pub quantity: Option<String>,
    pub expect: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: Option<String>,
    pub system: Option<StateSpec>,
    pub reservoir: Option<ReservoirSpec>,
    pub process: ProcessSection,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
    #[serde(skip)]
    base_dir: PathBuf,
}

/// How a check value is judged against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Measure {
    /// Passes when at most `tol`.
    Residual(f64),
    /// Passes when at least `-tol`.
    Margin(f64),
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::NotApplicable => "N/A",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub label: String,
    /// Residual, margin or deviation from the expected value.
    pub value: f64,
    pub tol: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub quantities: Vec<(&'static str, f64)>,
    pub checks: Vec<CheckResult>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|(n, _)| *n == name).map(|q| q.1)
    }
}

struct Evaluation {
    quantities: Vec<(&'static str, f64)>,
    measures: Vec<(CheckName, Measure)>,
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(*x))
}

impl Scenario {
    pub fn parse(text: &str, base_dir: &Path) -> std::result::Result<Self, toml::de::Error> {
        let mut s: Scenario = toml::from_str(text)?;
        s.base_dir = base_dir.to_path_buf();
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.into(), source })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir).map_err(|source| ScenarioError::Parse { path: path.into(), source })
    }

    fn system(&self) -> Result<QState<f64>> {
        self.system.as_ref().map_or_else(|| invalid("a [system] section is required"), StateSpec::build)
    }

    fn reservoir(&self) -> Result<Reservoir<f64>> {
        self.reservoir.as_ref().map_or_else(|| invalid("a [reservoir] section is required"), ReservoirSpec::build)
    }

    fn no_sections(&self, kind: &str) -> Result<()> {
        if self.system.is_some() || self.reservoir.is_some() {
            return invalid(format!("process kind {kind} takes no [system] or [reservoir] section"));
        }
        Ok(())
    }

    fn read_unitary(&self, file: &Path) -> Result<Unitary<f64>> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct MatrixFile {
            re: Vec<Vec<f64>>,
            im: Option<Vec<Vec<f64>>>,
        }
        let path = self.base_dir.join(file);
        let text = std::fs::read_to_string(&path).map_err(|source| ScenarioError::Io { path: path.clone(), source })?;
        let m: MatrixFile = toml::from_str(&text).map_err(|source| ScenarioError::Parse { path: path.clone(), source })?;
        let n = m.re.len();
        let square = |rows: &[Vec<f64>]| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !square(&m.re) || !m.im.as_deref().is_none_or(square) {
            return invalid(format!("{}: re and im must be {n}x{n}", path.display()));
        }
        let mat = CMatrix::from_fn(n, n, |i, j| {
            nalgebra::Complex::new(m.re[i][j], m.im.as_ref().map_or(0.0, |im| im[i][j]))
        });
        Ok(Unitary::new(mat)?)
    }

    fn evaluate(&self) -> Result<Evaluation> {
        match &self.process {
            ProcessSection::Identity {} => {
                let (rho, res) = (self.system()?, self.reservoir()?);
                let u = Unitary::identity(rho.dim() * res.dim());
                general(&ProcessSpec::new(rho, res, u)?, None)
            }
            ProcessSection::Haar { seed } => {
                let (rho, res) = (self.system()?, self.reservoir()?);
                let u = haar_unitary(rho.dim() * res.dim(), *seed);
                general(&ProcessSpec::new(rho, res, u)?, None)
            }
            ProcessSection::UnitaryMatrix { file } => {
                let spec = ProcessSpec::new(self.system()?, self.reservoir()?, self.read_unitary(file)?)?;
                general(&spec, None)
            }
            ProcessSection::Swap { swap_dim } => {
                let (rho, res) = (self.system()?, self.reservoir()?);
                let k = swap_dim.unwrap_or(rho.dim());
                if k == 0 || rho.dim() % k != 0 || res.dim() % k != 0 {
                    return invalid(format!("swap_dim {k} must divide {} and {}", rho.dim(), res.dim()));
                }
                let dims = [k, rho.dim() / k, k, res.dim() / k];
                let rho = rho.with_dims(vec![k, dims[1]])?;
                let rho_r = res.state().with_dims(vec![k, dims[3]])?;
                let closed_applies = !res.is_masked() && res.beta().is_finite();
                let spec = ProcessSpec::new(rho, res.with_factor_dims(vec![k, dims[3]])?, swap_unitary(&dims, 0, 2)?)?;
                let mut ev = general(&spec, None)?;
                let m = if closed_applies {
                    let c = swap_closed_forms(spec.system(), &rho_r, k)?;
                    let r = run_process(&spec)?;
                    // the closed-form heat is measured in units of 1/beta
                    let dev = [c.delta_s - r.delta_s, c.delta - r.delta, c.mutual_info - r.mutual_info, c.delta_q - r.beta_delta_q];
                    Measure::Residual(max_of(&dev.map(f64::abs)))
                } else {
                    Measure::NotApplicable
                };
                ev.measures.push((CheckName::SwapClosedForm, m));
                Ok(ev)
            }
            ProcessSection::Tight { delta_s, d } => {
                self.no_sections("tight")?;
                let (spec, m) = build_tight_process(*delta_s, *d)?;
                general(&spec, Some(m.value))
            }
            ProcessSection::Kstep { k, target } => {
                if self.reservoir.is_some() {
                    return invalid("process kind kstep builds its own reservoirs");
                }
                let spec = KStepSpec::linear(self.system()?, QState::diagonal(target)?, *k);
                let r = build_kstep_process(&spec)?;
                let upper = r.upper_bound.unwrap_or(f64::INFINITY);
                let mut measures = vec![
                    (CheckName::KstepBounds, Measure::Margin((r.gap - r.lower_bound).min(upper - r.gap))),
                    (CheckName::KstepDirect, Measure::Residual((r.beta_delta_q - r.beta_delta_q_direct).abs())),
                ];
                let joint = spec.rho_s.dim() as f64 * (r.rank as f64).powi(*k as i32);
                let dense = if joint <= KSTEP_DENSE_LIMIT as f64 {
                    let (_, dr) = kstep_dense_oracle(&spec)?;
                    Measure::Residual((dr.beta_delta_q - r.beta_delta_q).abs().max((dr.delta_s - r.delta_s).abs()))
                } else {
                    Measure::NotApplicable
                };
                measures.push((CheckName::KstepDense, dense));
                Ok(Evaluation {
                    quantities: vec![
                        ("k", r.k as f64),
                        ("rank", r.rank as f64),
                        ("delta_s", r.delta_s),
                        ("beta_delta_q", r.beta_delta_q),
                        ("beta_delta_q_direct", r.beta_delta_q_direct),
                        ("gap", r.gap),
                        ("upper_bound", r.upper_bound.unwrap_or(f64::NAN)),
                        ("lower_bound", r.lower_bound),
                    ],
                    measures,
                })
            }
            ProcessSection::Memory { memory, d, operation } => {
                if self.system.is_some() {
                    return invalid("process kind memory builds its own system");
                }
                let rho_sm = match memory {
                    MemoryPreset::Classical => crate::processes::classical_memory(*d),
                    MemoryPreset::Entangled => crate::processes::entangled_memory(*d),
                };
                let res = self.reservoir()?;
                let dims = [*d, res.dim(), *d];
                let u = match operation {
                    MemoryOperation::Erase => lift_system_memory(&controlled_shift(*d), dims)?,
                    MemoryOperation::Swap => lift_system_reservoir(&swap_unitary(&[*d, res.dim()], 0, 1)?, dims)?,
                };
                let r = memory_process_report(&MemoryProcessSpec::new(&rho_sm, *d, res, u)?)?;
                Ok(Evaluation {
                    quantities: vec![
                        ("delta_s_cond", r.delta_s_cond),
                        ("delta_q", r.delta_q),
                        ("beta_delta_q", r.beta_delta_q),
                        ("delta", r.delta),
                        ("mutual_info", r.mutual_info),
                        ("rel_ent", r.rel_ent),
                        ("final_system_entropy", von_neumann_entropy(&r.final_sm.partial_trace(&[0])?)),
                        ("memory_entropy_before", r.memory_entropy_before),
                        ("memory_entropy_after", r.memory_entropy_after),
                        ("sm_mutual_info_before", r.sm_mutual_info_before),
                        ("sm_mutual_info_after", r.sm_mutual_info_after),
                        ("entropy_production", r.entropy_production),
                    ],
                    measures: vec![
                        (CheckName::MemorySecondLaw, Measure::Margin(r.second_law_margin)),
                        (CheckName::MemoryLandauer, Measure::Margin(r.landauer_margin)),
                        (CheckName::MemoryIdentity, Measure::Residual(r.identity_residual)),
                    ],
                })
            }
            ProcessSection::PureErasure { s1, epsilon, depth } => {
                self.no_sections("pure-erasure")?;
                let depth = depth.unwrap_or_else(|| pure_erasure_required_depth(*epsilon, ERASURE_TAIL_TOL));
                let r = pure_erasure_truncated(*s1, *epsilon, depth)?;
                Ok(Evaluation {
                    quantities: vec![
                        ("depth", r.depth as f64),
                        ("tail_mass", r.tail_mass),
                        ("delta_s", r.delta_s),
                        ("beta_delta_q", r.beta_delta_q),
                        ("rel_ent", r.rel_ent),
                        ("entropy_change", r.entropy_change),
                        ("reservoir_entropy", r.reservoir_entropy),
                        ("reservoir_entropy_closed_form", r.reservoir_entropy_closed_form),
                        ("final_impurity", r.final_impurity),
                    ],
                    measures: vec![
                        (CheckName::ErasureRelent, Measure::Residual((r.rel_ent + (1.0 - epsilon).ln()).abs())),
                        (CheckName::ErasurePurity, Measure::Residual(r.final_impurity)),
                        (CheckName::ErasureEquality, Measure::Residual(r.equality_residual)),
                    ],
                })
            }
        }
    }

    /// Runs the process and the requested checks. Errors mean the scenario
    /// could not be evaluated; failed checks are reported in the outcome.
    pub fn run(&self) -> Result<Outcome> {
        let ev = self.evaluate()?;
        let specs: Vec<CheckSpec> = if self.checks.is_empty() {
            ev.measures.iter().map(|(n, _)| CheckSpec { name: Some(*n), quantity: None, expect: None, tol: None }).collect()
        } else {
            self.checks.clone()
        };
        let mut checks = Vec::with_capacity(specs.len());
        for c in &specs {
            checks.push(match (&c.name, &c.quantity, c.expect) {
                (Some(name), None, None) => {
                    let Some((_, m)) = ev.measures.iter().find(|(n, _)| n == name) else {
                        return invalid(format!("check {} does not apply to this process kind", name.label()));
                    };
                    judge(name.label().to_string(), *m, c.tol.unwrap_or(name.default_tol()))
                }
                (None, Some(q), Some(expect)) => {
                    let Some(&(_, v)) = ev.quantities.iter().find(|(n, _)| n == q) else {
                        let known: Vec<&str> = ev.quantities.iter().map(|q| q.0).collect();
                        return invalid(format!("unknown quantity {q:?}; this process reports {}", known.join(", ")));
                    };
                    let dev = if v == expect { 0.0 } else { (v - expect).abs() };
                    let dev = if dev.is_nan() { f64::INFINITY } else { dev };
                    judge(format!("{q} = {}", crate::curve::fmt_num(expect)), Measure::Residual(dev), c.tol.unwrap_or(1e-8))
                }
                _ => return invalid("each check needs either a name, or a quantity with an expected value"),
            });
        }
        Ok(Outcome { name: self.name.clone().unwrap_or_default(), quantities: ev.quantities, checks })
    }
}

fn judge(label: String, m: Measure, tol: f64) -> CheckResult {
    let (value, status) = match m {
        Measure::Residual(r) => (r, if r <= tol { Status::Pass } else { Status::Fail }),
        Measure::Margin(g) => (g, if g >= -tol { Status::Pass } else { Status::Fail }),
        Measure::NotApplicable => (f64::NAN, Status::NotApplicable),
    };
    CheckResult { label, value, tol, status }
}

/// Quantities and checks of a plain system-reservoir process. `bound` is the
/// value of `M` the process is built to attain, if any.
fn general(spec: &ProcessSpec<f64>, bound: Option<f64>) -> Result<Evaluation> {
    let r = run_process(spec)?;
    let opt = |c: crate::bounds::BoundCheck<f64>| c.margin().map_or(Measure::NotApplicable, Measure::Margin);
    let integral = match integral_version_check(spec, &r) {
        Ok(c) => Measure::Residual(c.residual),
        Err(crate::error::Error::Argument(_)) if spec.reservoir().is_masked() => Measure::NotApplicable,
        Err(e) => return Err(e.into()),
    };
    let eq = check_equality_case(&r, spec);
    let mut measures = vec![
        (CheckName::Equality, Measure::Residual(r.equality_residual)),
        (CheckName::SecondLaw, Measure::Residual(r.second_law_residual)),
        (CheckName::Landauer, Measure::Margin(r.margins.landauer)),
        (CheckName::FiniteSize, Measure::Margin(r.margins.finite_size)),
        (CheckName::Sharpened, opt(r.margins.sharpened)),
        (CheckName::Pureness, opt(pureness_bound_check(spec, &r))),
        (CheckName::Integral, integral),
        (
            CheckName::EqualityCase,
            if eq.is_equality {
                Measure::Residual(eq.reservoir_change.max(eq.mutual_info).max(eq.spectrum_change))
            } else {
                Measure::NotApplicable
            },
        ),
    ];
    let mut quantities = vec![
        ("delta_s", r.delta_s),
        ("delta_q", r.delta_q),
        ("delta", r.delta),
        ("mutual_info", r.mutual_info),
        ("rel_ent", r.rel_ent),
        ("beta", r.beta.value()),
        ("beta_delta_q", r.beta_delta_q),
        ("equality_residual", r.equality_residual),
        ("second_law_residual", r.second_law_residual),
        ("landauer_margin", r.margins.landauer),
        ("finite_size_margin", r.margins.finite_size),
        ("sharpened_margin", r.margins.sharpened.margin().unwrap_or(f64::NAN)),
        ("reservoir_dim", r.reservoir_dim as f64),
        ("final_system_entropy", von_neumann_entropy(&r.final_system)),
        ("final_system_lambda_min", r.final_system.lambda_min()),
    ];
    if let Some(m) = bound {
        let gap = r.beta_delta_q - r.delta_s;
        quantities.push(("m_value", m));
        quantities.push(("m_check", compute_m(r.delta_s, r.reservoir_dim)?.value));
        measures.push((CheckName::Tight, Measure::Residual((gap - m).abs())));
    }
    Ok(Evaluation { quantities, measures })
}

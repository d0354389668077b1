//! Command implementations. Every function builds its full CSV output as a
//! string so runs are deterministic and byte-identical for identical flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_complex::Complex64;

use qfactor::dynamics::{self, ChainParams, DynamicsError};
use qfactor::factorization::{
    self, c_measure_coeffs, c_measure_density, extract_factors, is_factorizable, ConditionSet,
    FactorError,
};
use qfactor::io::{self, IoError};
use qfactor::statevec::{self, PureState, StateError};

/// Environment variable holding a default parameter-file path for `evolve`.
pub const PARAMS_ENV: &str = "QFACTOR_DEFAULT_PARAMS";

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Arity or domain violation (exit 3).
    Domain(String),
    /// Numerical divergence during integration (exit 4).
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Diverged(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(msg) | CliError::Domain(msg) | CliError::Diverged(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<IoError> for CliError {
    fn from(err: IoError) -> Self {
        CliError::Parse(err.to_string())
    }
}

impl From<StateError> for CliError {
    fn from(err: StateError) -> Self {
        CliError::Parse(err.to_string())
    }
}

impl From<FactorError> for CliError {
    fn from(err: FactorError) -> Self {
        match err {
            FactorError::UnsupportedArity { .. } | FactorError::ArityMismatch { .. } => {
                CliError::Domain(err.to_string())
            }
            FactorError::PositivityViolation { .. } => CliError::Parse(err.to_string()),
            FactorError::NotFactorizable { .. } => CliError::Domain(err.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(err: DynamicsError) -> Self {
        match err {
            DynamicsError::Diverged { .. } => CliError::Diverged(err.to_string()),
            _ => CliError::Domain(err.to_string()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetChoice {
    /// The curated list (n = 2, 3, 4)
    Paper,
    /// All deduplicated single-qubit reshaping minors (n up to 8)
    Generated,
}

impl SetChoice {
    fn resolve(self, n: usize) -> Result<ConditionSet, CliError> {
        let set = match self {
            SetChoice::Paper => factorization::paper_conditions(n)?,
            SetChoice::Generated => factorization::generate_minor_conditions(n)?,
        };
        Ok(set)
    }
}

const MEASURE_HEADER: &str = "state_id,n,set_provenance,c_coeffs,c_density,diff\n";

fn measure_row(state_id: &str, state: &PureState, set: &ConditionSet) -> Result<String, CliError> {
    let c_coeffs = c_measure_coeffs(state, set)?;
    let c_density = c_measure_density(&state.density(), set)?;
    let diff = (c_coeffs - c_density).abs();
    Ok(format!(
        "{},{},{},{},{},{}\n",
        state_id,
        state.n_qubits(),
        set.provenance().as_str(),
        c_coeffs,
        c_density,
        diff
    ))
}

pub fn measure_csv(input: &Path, n: Option<usize>, set: SetChoice) -> Result<String, CliError> {
    let state = io::read_state(input)?;
    if let Some(expected) = n {
        if expected != state.n_qubits() {
            return Err(CliError::Domain(format!(
                "state file has {} qubits, --n asked for {expected}",
                state.n_qubits()
            )));
        }
    }
    let set = set.resolve(state.n_qubits())?;
    let state_id = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "state".to_string());
    let mut csv = String::from(MEASURE_HEADER);
    csv.push_str(&measure_row(&state_id, &state, &set)?);
    Ok(csv)
}

pub fn conditions_csv(n: usize, set: SetChoice) -> Result<(String, usize), CliError> {
    let set = set.resolve(n)?;
    Ok((io::conditions_csv(&set), set.len()))
}

pub fn factorize_csv(input: &Path, tol: f64) -> Result<(String, String), CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Domain(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let state = io::read_state(input)?;
    let mut csv = String::from("qubit,a_re,a_im,b_re,b_im\n");
    if is_factorizable(&state, tol) {
        let factors = extract_factors(&state, tol)?;
        for (index, f) in factors.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                index + 1,
                f.a.re,
                f.a.im,
                f.b.re,
                f.b.im
            ));
        }
        Ok((csv, "factorizable: true".to_string()))
    } else {
        Ok((csv, "factorizable: false".to_string()))
    }
}

/// Lattice sweep of the real W family: `(C2, C3)` on a `grid x grid` lattice
/// over `[-1, 1]^2`, keeping points inside the unit disk and emitting both
/// sheets `C5 = +-sqrt(1 - C2^2 - C3^2)`.
pub fn sweep_w_csv(grid: usize) -> Result<String, CliError> {
    if grid < 3 {
        return Err(CliError::Domain(format!("grid {grid} must be at least 3")));
    }
    let set = factorization::paper_conditions(3)?;
    let coord = |step: usize| -1.0 + 2.0 * step as f64 / (grid - 1) as f64;
    let mut csv = String::from("c2,c3,c5,c3_measure\n");
    for row in 0..grid {
        let c2 = coord(row);
        for col in 0..grid {
            let c3 = coord(col);
            let remainder = 1.0 - c2 * c2 - c3 * c3;
            if remainder < -1e-12 {
                continue;
            }
            let c5 = remainder.max(0.0).sqrt();
            for sign in [1.0, -1.0] {
                if sign < 0.0 && c5 == 0.0 {
                    break;
                }
                let state = statevec::w_state(
                    Complex64::new(c2, 0.0),
                    Complex64::new(c3, 0.0),
                    Complex64::new(sign * c5, 0.0),
                )?;
                let value = c_measure_coeffs(&state, &set)?;
                csv.push_str(&format!("{},{},{},{}\n", c2, c3, sign * c5, value));
            }
        }
    }
    Ok(csv)
}

/// Angle sweep of the GHZ family `C1 = cos t, C8 = sin t` over `[0, 2*pi]`.
pub fn sweep_ghz_csv(grid: usize) -> Result<String, CliError> {
    if grid < 3 {
        return Err(CliError::Domain(format!("grid {grid} must be at least 3")));
    }
    let set = factorization::paper_conditions(3)?;
    let mut csv = String::from("t,c1,c8,c3_measure\n");
    for step in 0..grid {
        let t = 2.0 * std::f64::consts::PI * step as f64 / (grid - 1) as f64;
        let (c1, c8) = (t.cos(), t.sin());
        let state = statevec::ghz_state(Complex64::new(c1, 0.0), Complex64::new(c8, 0.0))?;
        let value = c_measure_coeffs(&state, &set)?;
        csv.push_str(&format!("{},{},{},{}\n", t, c1, c8, value));
    }
    Ok(csv)
}

pub fn random_audit_csv(
    n: usize,
    count: usize,
    seed: u64,
    set: SetChoice,
) -> Result<(String, f64), CliError> {
    if count == 0 {
        return Err(CliError::Domain("count must be at least 1".to_string()));
    }
    let set = set.resolve(n)?;
    let mut csv = String::from(MEASURE_HEADER);
    let mut max_diff = 0.0_f64;
    for index in 0..count {
        let state = statevec::random_pure_state(n, seed.wrapping_add(index as u64));
        let c_coeffs = c_measure_coeffs(&state, &set)?;
        let c_density = c_measure_density(&state.density(), &set)?;
        let diff = (c_coeffs - c_density).abs();
        max_diff = max_diff.max(diff);
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            index,
            n,
            set.provenance().as_str(),
            c_coeffs,
            c_density,
            diff
        ));
    }
    Ok((csv, max_diff))
}

pub enum InitialState {
    W,
    Ghz,
    Psi1,
    File(PathBuf),
}

impl InitialState {
    fn resolve(self) -> Result<PureState, CliError> {
        let r3 = Complex64::new(1.0 / 3.0_f64.sqrt(), 0.0);
        let r2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        match self {
            InitialState::W => Ok(statevec::w_state(r3, r3, r3)?),
            InitialState::Ghz => Ok(statevec::ghz_state(r2, r2)?),
            InitialState::Psi1 => Ok(statevec::psi1_state()),
            InitialState::File(path) => {
                let state = io::read_state(&path)?;
                if state.n_qubits() != dynamics::CHAIN_LEN {
                    return Err(CliError::Domain(format!(
                        "evolve needs a {}-qubit state, file has {}",
                        dynamics::CHAIN_LEN,
                        state.n_qubits()
                    )));
                }
                Ok(state)
            }
        }
    }
}

fn resolve_params(path: Option<&Path>) -> Result<ChainParams, CliError> {
    if let Some(path) = path {
        return Ok(io::read_params(path)?);
    }
    if let Ok(env_path) = std::env::var(PARAMS_ENV) {
        return Ok(io::read_params(Path::new(&env_path))?);
    }
    Ok(ChainParams::default())
}

pub fn evolve_csv(
    initial: InitialState,
    params: Option<&Path>,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<String, CliError> {
    let state = initial.resolve()?;
    let params = resolve_params(params)?;
    let set = factorization::paper_conditions(3)?;
    let traj = dynamics::integrate(&state.density(), &params, t_end, dt, sample_every)?;
    let series = dynamics::observables(&traj, &set)?;
    Ok(io::trajectory_csv(&series))
}

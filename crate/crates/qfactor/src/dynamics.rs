//! Open-system decay of a 3-spin Ising chain with independent
//! zero-temperature amplitude damping on each site.
//!
//! Everything runs in the interaction picture. Each dissipator dresses the
//! per-site lowering operator with the diagonal phase `exp(-i Omega_k t)`,
//! where `Omega_k` collects the site's Larmor frequency plus first- and
//! second-neighbor Ising shifts; inside a dissipator the Larmor part cancels,
//! so only couplings at the `J`/`J'` scale survive in the dynamics.
//!
//! Two independent routes are provided: closed-form solutions for the 27
//! analytically tractable density-matrix elements, and a fixed-step RK4
//! integrator for the full master equation. They are cross-validated against
//! each other in the test suites.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorization::{c_measure_density, ConditionSet, FactorError};
use crate::statevec::DensityMatrix;

/// Number of spins in the chain.
pub const CHAIN_LEN: usize = 3;

/// Dimension of the chain's Hilbert space.
pub const CHAIN_DIM: usize = 1 << CHAIN_LEN;

/// Hard upper bound on the integrator step; resolves the fastest surviving
/// frequency `2J = 20` (period about 0.314) with ample margin.
pub const MAX_DT: f64 = 0.01;

/// Default integrator step.
pub const DEFAULT_DT: f64 = 0.005;

/// Trace drift that aborts a run.
pub const TRACE_DRIFT_ABORT: f64 = 1e-6;

/// Eigenvalue floor that aborts a run; drift in `[-1e-7, 0)` is tolerated.
pub const EIGENVALUE_ABORT: f64 = -1e-5;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("time step {dt} outside (0, {MAX_DT}]")]
    InvalidTimeStep { dt: f64 },
    #[error("end time {t_end} must be nonnegative")]
    InvalidTimeSpan { t_end: f64 },
    #[error("sample_every must be at least 1")]
    InvalidSampleStride,
    #[error("invalid chain parameters: {reason}")]
    InvalidParams { reason: &'static str },
    #[error("integration diverged at t = {t}: {reason}")]
    Diverged { t: f64, reason: String },
}

/// Larmor frequencies, Ising couplings and decay rates of the chain, all in
/// units of 2*pi MHz. Time is normalized by the same factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub omega: [f64; 3],
    #[serde(rename = "J")]
    pub j_coupling: f64,
    #[serde(rename = "Jp")]
    pub j2_coupling: f64,
    pub gamma: [f64; 3],
}

impl Default for ChainParams {
    /// The reference parameter set: omega = (400, 200, 100), J = 10,
    /// J' = 0.4, gamma_k = 0.05.
    fn default() -> Self {
        Self {
            omega: [400.0, 200.0, 100.0],
            j_coupling: 10.0,
            j2_coupling: 0.4,
            gamma: [0.05, 0.05, 0.05],
        }
    }
}

impl ChainParams {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.omega.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(DynamicsError::InvalidParams {
                reason: "Larmor frequencies must be positive",
            });
        }
        if self.gamma.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(DynamicsError::InvalidParams {
                reason: "decay rates must be nonnegative",
            });
        }
        if !self.j_coupling.is_finite() || !self.j2_coupling.is_finite() {
            return Err(DynamicsError::InvalidParams {
                reason: "couplings must be finite",
            });
        }
        Ok(())
    }
}

/// One basis configuration `|xi_3 xi_2 xi_1>` of the 3-spin register.
///
/// Spin `k` occupies bit `k - 1` of the index, matching the state-vector
/// convention (spin 1 is the rightmost ket slot).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinConfig(u8);

impl SpinConfig {
    pub fn from_index(index: usize) -> Self {
        assert!(index < CHAIN_DIM);
        Self(index as u8)
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    /// Bit value of spin `k` (1-based).
    pub fn xi(&self, k: usize) -> u8 {
        assert!((1..=CHAIN_LEN).contains(&k));
        (self.0 >> (k - 1)) & 1
    }

    /// `(-1)^xi_k`: +1 for `|0>`, -1 for `|1>`.
    pub fn sign(&self, k: usize) -> f64 {
        if self.xi(k) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Diagonal Hamiltonian eigenvalue `E_xi / hbar` in 2*pi MHz units:
/// Zeeman term plus first- and second-neighbor Ising shifts.
pub fn hamiltonian_eigenvalue(config: SpinConfig, p: &ChainParams) -> f64 {
    let mut e = 0.0;
    for k in 1..=CHAIN_LEN {
        e -= 0.5 * config.sign(k) * p.omega[k - 1];
    }
    for k in 1..CHAIN_LEN {
        e -= 0.5 * p.j_coupling * config.sign(k) * config.sign(k + 1);
    }
    for k in 1..=(CHAIN_LEN - 2) {
        e -= 0.5 * p.j2_coupling * config.sign(k) * config.sign(k + 2);
    }
    e
}

/// Eigenvalue of the dressing frequency operator for spin `k`:
/// `omega_k + (J/2) * sum over existing first neighbors of (-1)^xi
///          + (J'/2) * sum over existing second neighbors of (-1)^xi`.
pub fn omega_k_eigenvalue(k: usize, config: SpinConfig, p: &ChainParams) -> f64 {
    assert!((1..=CHAIN_LEN).contains(&k));
    let mut value = p.omega[k - 1];
    for m in [k.wrapping_sub(1), k + 1] {
        if (1..=CHAIN_LEN).contains(&m) {
            value += 0.5 * p.j_coupling * config.sign(m);
        }
    }
    for m in [k.wrapping_sub(2), k + 2] {
        if (1..=CHAIN_LEN).contains(&m) {
            value += 0.5 * p.j2_coupling * config.sign(m);
        }
    }
    value
}

/// The five arctangent phase offsets appearing in the closed-form coherence
/// solutions, each in (-pi/2, pi/2]. A vanishing decay rate degenerates to
/// `atan(+-inf) = +-pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiAngles {
    pub phi14: f64,
    pub phi16: f64,
    pub phi17: f64,
    pub phi23: f64,
    pub phi35: f64,
}

pub fn phi_angles(p: &ChainParams) -> PhiAngles {
    let j = p.j_coupling;
    let jp = p.j2_coupling;
    let atan = |num: f64, den: f64| num.atan2(den);
    PhiAngles {
        phi14: atan(j + jp, p.gamma[0]),
        phi16: atan(2.0 * j, p.gamma[1]),
        phi17: atan(j + jp, p.gamma[2]),
        phi23: atan(j - jp, p.gamma[0]),
        phi35: atan(j - jp, p.gamma[2]),
    }
}

// ---------------------------------------------------------------------------
// Closed-form solution table
// ---------------------------------------------------------------------------

/// The 27 density-matrix elements (1-based, upper triangle) with closed-form
/// solutions: all 8 populations and the 19 coherences whose equations close
/// on at most one source element.
pub const LISTED_ELEMENTS: [(usize, usize); 27] = [
    (1, 1),
    (1, 4),
    (1, 6),
    (1, 7),
    (1, 8),
    (2, 2),
    (2, 3),
    (2, 5),
    (2, 7),
    (2, 8),
    (3, 3),
    (3, 5),
    (3, 6),
    (3, 8),
    (4, 4),
    (4, 5),
    (4, 6),
    (4, 7),
    (4, 8),
    (5, 5),
    (5, 8),
    (6, 6),
    (6, 7),
    (6, 8),
    (7, 7),
    (7, 8),
    (8, 8),
];

/// Inflow data for a coherence fed by a single source element.
///
/// The solved form is
/// `rho(t) = [rho(0) + g * src(0) * (1 - e^{(i*mu - g) t}) / (g - i*mu)] * e^{-Gamma t}`
/// with `mu` the signed surviving phase frequency; the complex prefactor
/// `1/(g - i*mu)` carries the corresponding arctangent offset from
/// [`PhiAngles`].
struct Inflow {
    element: (usize, usize),
    source: (usize, usize),
    /// index into `gamma` for the jump rate `g`
    rate_slot: usize,
    /// `mu = j_weight * J + j2_weight * J'`
    j_weight: f64,
    j2_weight: f64,
}

const INFLOWS: [Inflow; 6] = [
    Inflow {
        element: (1, 4),
        source: (5, 8),
        rate_slot: 0,
        j_weight: -1.0,
        j2_weight: -1.0,
    },
    Inflow {
        element: (1, 6),
        source: (3, 8),
        rate_slot: 1,
        j_weight: -2.0,
        j2_weight: 0.0,
    },
    Inflow {
        element: (1, 7),
        source: (2, 8),
        rate_slot: 2,
        j_weight: -1.0,
        j2_weight: -1.0,
    },
    Inflow {
        element: (2, 3),
        source: (6, 7),
        rate_slot: 0,
        j_weight: -1.0,
        j2_weight: 1.0,
    },
    Inflow {
        element: (2, 5),
        source: (4, 7),
        rate_slot: 1,
        j_weight: 0.0,
        j2_weight: 0.0,
    },
    Inflow {
        element: (3, 5),
        source: (4, 6),
        rate_slot: 2,
        j_weight: 1.0,
        j2_weight: -1.0,
    },
];

/// Decay rate attached to bit `b` in the solution table, which labels spins
/// by ket slot from the left: bit 2 (the most significant) carries
/// `gamma[0]`, bit 0 carries `gamma[2]`.
fn table_rate(b: usize, p: &ChainParams) -> f64 {
    p.gamma[CHAIN_LEN - 1 - b]
}

/// Closed-form value of a listed element at time `t`.
///
/// Indices are 1-based; `(i, j)` with `i > j` returns the conjugate of the
/// mirrored element. Returns `None` for elements without a closed form.
pub fn analytic_element(
    i: usize,
    j: usize,
    t: f64,
    rho0: &DensityMatrix,
    p: &ChainParams,
) -> Option<Complex64> {
    assert_eq!(rho0.n_qubits(), CHAIN_LEN);
    if i > j {
        return analytic_element(j, i, t, rho0, p).map(|z| z.conj());
    }
    if !LISTED_ELEMENTS.contains(&(i, j)) {
        return None;
    }
    let (x, y) = (i - 1, j - 1);
    if i == j {
        // Populations factor over independent per-site decays: an excited
        // bit survives with probability e^{-g t}, otherwise it has relaxed.
        let mut total = 0.0;
        for src in 0..CHAIN_DIM {
            let mut weight = 1.0;
            for b in 0..CHAIN_LEN {
                let decayed = 1.0 - (-table_rate(b, p) * t).exp();
                weight *= match ((src >> b) & 1, (x >> b) & 1) {
                    (0, 0) => 1.0,
                    (0, 1) => 0.0,
                    (1, 0) => decayed,
                    (1, 1) => 1.0 - decayed,
                    _ => unreachable!(),
                };
                if weight == 0.0 {
                    break;
                }
            }
            total += weight * rho0.elem(src, src).re;
        }
        return Some(Complex64::new(total, 0.0));
    }
    let mut half_rate = 0.0;
    for b in 0..CHAIN_LEN {
        half_rate += 0.5 * table_rate(b, p) * (((x >> b) & 1) + ((y >> b) & 1)) as f64;
    }
    let mut value = rho0.elem(x, y);
    if let Some(inflow) = INFLOWS.iter().find(|f| f.element == (i, j)) {
        let g = p.gamma[inflow.rate_slot];
        if g > 0.0 {
            let mu = inflow.j_weight * p.j_coupling + inflow.j2_weight * p.j2_coupling;
            let src0 = rho0.elem(inflow.source.0 - 1, inflow.source.1 - 1);
            let growth = Complex64::new(1.0, 0.0) - (Complex64::new(-g, mu) * t).exp();
            value += g * src0 * growth / Complex64::new(g, -mu);
        }
    }
    Some(value * (-half_rate * t).exp())
}

/// How an element of an [`analytic_rho`] result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementSource {
    Analytic,
    Numeric,
}

/// A full density matrix at time `t` with per-element provenance.
#[derive(Debug, Clone)]
pub struct AnalyticRho {
    pub rho: DensityMatrix,
    pub source: Array2<ElementSource>,
}

/// Full state at time `t`: listed elements from the closed forms, the
/// remaining coherences filled in by the numerical integrator.
pub fn analytic_rho(
    t: f64,
    rho0: &DensityMatrix,
    p: &ChainParams,
) -> Result<AnalyticRho, DynamicsError> {
    assert_eq!(rho0.n_qubits(), CHAIN_LEN);
    if t < 0.0 {
        return Err(DynamicsError::InvalidTimeSpan { t_end: t });
    }
    let mut source = Array2::from_elem((CHAIN_DIM, CHAIN_DIM), ElementSource::Numeric);
    let mut elems = if t == 0.0 {
        rho0.elems().clone()
    } else {
        let steps = (t / DEFAULT_DT).ceil().max(1.0);
        let traj = integrate(rho0, p, t, t / steps, steps as usize)?;
        traj.rhos().last().unwrap().elems().clone()
    };
    for &(i, j) in LISTED_ELEMENTS.iter() {
        let value = analytic_element(i, j, t, rho0, p).unwrap();
        elems[(i - 1, j - 1)] = value;
        elems[(j - 1, i - 1)] = value.conj();
        source[(i - 1, j - 1)] = ElementSource::Analytic;
        source[(j - 1, i - 1)] = ElementSource::Analytic;
    }
    Ok(AnalyticRho {
        rho: DensityMatrix::from_parts(CHAIN_LEN, elems),
        source,
    })
}

// ---------------------------------------------------------------------------
// Numerical integration
// ---------------------------------------------------------------------------

/// Precomputed dressing frequencies: `freq[b][m]` is the eigenvalue of the
/// spin-(b+1) dressing operator on basis state `m`.
struct DressingTable {
    freq: [[f64; CHAIN_DIM]; CHAIN_LEN],
    gamma: [f64; CHAIN_LEN],
}

impl DressingTable {
    fn new(p: &ChainParams) -> Self {
        let mut freq = [[0.0; CHAIN_DIM]; CHAIN_LEN];
        for (b, row) in freq.iter_mut().enumerate() {
            for (m, slot) in row.iter_mut().enumerate() {
                *slot = omega_k_eigenvalue(b + 1, SpinConfig::from_index(m), p);
            }
        }
        Self {
            freq,
            gamma: p.gamma,
        }
    }

    /// `d rho/dt` at time `t`, written into `out`.
    fn rhs(&self, t: f64, rho: &Array2<Complex64>, out: &mut Array2<Complex64>) {
        for m in 0..CHAIN_DIM {
            for mp in 0..CHAIN_DIM {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..CHAIN_LEN {
                    let g = self.gamma[b];
                    if g == 0.0 {
                        continue;
                    }
                    let excited = ((m >> b) & 1) + ((mp >> b) & 1);
                    if excited > 0 {
                        acc -= 0.5 * g * excited as f64 * rho[(m, mp)];
                    }
                    if (m >> b) & 1 == 0 && (mp >> b) & 1 == 0 {
                        // jump inflow, dressed by the surviving phase
                        // difference (the Larmor part cancels exactly)
                        let delta = self.freq[b][m] - self.freq[b][mp];
                        let phase = Complex64::from_polar(1.0, -delta * t);
                        acc += g * phase * rho[(m | (1 << b), mp | (1 << b))];
                    }
                }
                out[(m, mp)] = acc;
            }
        }
    }
}

/// Master-equation right-hand side `d rho/dt` at time `t`.
///
/// The result is traceless and maps Hermitian inputs to Hermitian outputs.
pub fn lindblad_rhs(t: f64, rho: &DensityMatrix, p: &ChainParams) -> Array2<Complex64> {
    assert_eq!(rho.n_qubits(), CHAIN_LEN);
    let table = DressingTable::new(p);
    let mut out = Array2::zeros((CHAIN_DIM, CHAIN_DIM));
    table.rhs(t, rho.elems(), &mut out);
    out
}

/// Time-sampled interaction-picture trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    rhos: Vec<DensityMatrix>,
    min_eigenvalue: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rhos(&self) -> &[DensityMatrix] {
        &self.rhos
    }

    /// Most negative eigenvalue seen across the sampled snapshots.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(self.rhos.iter())
    }
}

/// Classic fixed-step fourth-order integration of the master equation.
///
/// Snapshots are taken at `t = 0`, every `sample_every` steps, and at the
/// final step. Each step re-symmetrizes `rho <- (rho + rho^dagger)/2`; trace
/// drift beyond [`TRACE_DRIFT_ABORT`] or a sampled eigenvalue below
/// [`EIGENVALUE_ABORT`] aborts with [`DynamicsError::Diverged`].
pub fn integrate(
    rho0: &DensityMatrix,
    p: &ChainParams,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory, DynamicsError> {
    assert_eq!(rho0.n_qubits(), CHAIN_LEN);
    p.validate()?;
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(DynamicsError::InvalidTimeStep { dt });
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidTimeSpan { t_end });
    }
    if sample_every == 0 {
        return Err(DynamicsError::InvalidSampleStride);
    }

    let table = DressingTable::new(p);
    let n_steps = (t_end / dt).round() as usize;

    let mut rho = rho0.elems().clone();
    let mut times = Vec::new();
    let mut rhos = Vec::new();
    let mut min_eigenvalue = f64::INFINITY;

    let mut k1 = Array2::zeros((CHAIN_DIM, CHAIN_DIM));
    let mut k2 = Array2::zeros((CHAIN_DIM, CHAIN_DIM));
    let mut k3 = Array2::zeros((CHAIN_DIM, CHAIN_DIM));
    let mut k4 = Array2::zeros((CHAIN_DIM, CHAIN_DIM));
    let mut stage = Array2::zeros((CHAIN_DIM, CHAIN_DIM));

    let sample = |step: usize,
                  rho: &Array2<Complex64>,
                  times: &mut Vec<f64>,
                  rhos: &mut Vec<DensityMatrix>,
                  min_ev: &mut f64|
     -> Result<(), DynamicsError> {
        let t = step as f64 * dt;
        let snapshot = DensityMatrix::from_parts(CHAIN_LEN, rho.clone());
        let ev = snapshot.min_eigenvalue();
        *min_ev = min_ev.min(ev);
        if ev < EIGENVALUE_ABORT {
            return Err(DynamicsError::Diverged {
                t,
                reason: format!("eigenvalue {ev} below {EIGENVALUE_ABORT}"),
            });
        }
        times.push(t);
        rhos.push(snapshot);
        Ok(())
    };

    sample(0, &rho, &mut times, &mut rhos, &mut min_eigenvalue)?;

    for step in 0..n_steps {
        let t = step as f64 * dt;

        table.rhs(t, &rho, &mut k1);
        stage.assign(&rho);
        stage.scaled_add(Complex64::new(dt / 2.0, 0.0), &k1);
        table.rhs(t + dt / 2.0, &stage, &mut k2);
        stage.assign(&rho);
        stage.scaled_add(Complex64::new(dt / 2.0, 0.0), &k2);
        table.rhs(t + dt / 2.0, &stage, &mut k3);
        stage.assign(&rho);
        stage.scaled_add(Complex64::new(dt, 0.0), &k3);
        table.rhs(t + dt, &stage, &mut k4);

        let w = dt / 6.0;
        for m in 0..CHAIN_DIM {
            for mp in 0..CHAIN_DIM {
                rho[(m, mp)] +=
                    w * (k1[(m, mp)] + 2.0 * k2[(m, mp)] + 2.0 * k3[(m, mp)] + k4[(m, mp)]);
            }
        }
        // enforce Hermiticity, halving antisymmetric rounding noise
        for m in 0..CHAIN_DIM {
            for mp in (m + 1)..CHAIN_DIM {
                let sym = 0.5 * (rho[(m, mp)] + rho[(mp, m)].conj());
                rho[(m, mp)] = sym;
                rho[(mp, m)] = sym.conj();
            }
            rho[(m, m)] = Complex64::new(rho[(m, m)].re, 0.0);
        }

        let trace: f64 = (0..CHAIN_DIM).map(|i| rho[(i, i)].re).sum();
        if (trace - 1.0).abs() > TRACE_DRIFT_ABORT {
            return Err(DynamicsError::Diverged {
                t: t + dt,
                reason: format!("trace drift {}", trace - 1.0),
            });
        }

        let done = step + 1 == n_steps;
        if (step + 1) % sample_every == 0 || done {
            sample(step + 1, &rho, &mut times, &mut rhos, &mut min_eigenvalue)?;
        }
    }

    Ok(Trajectory {
        times,
        rhos,
        min_eigenvalue,
    })
}

/// Derived observables along a trajectory.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub c3_rho: Vec<f64>,
    pub purity: Vec<f64>,
    pub populations: Vec<[f64; CHAIN_DIM]>,
}

/// Per-snapshot `C_rho^(3)` (with the given 3-qubit set), purity and
/// populations. Purity and populations are picture-invariant; the measure is
/// evaluated on the interaction-picture state.
pub fn observables(traj: &Trajectory, set: &ConditionSet) -> Result<ObservableSeries, FactorError> {
    let mut series = ObservableSeries {
        times: traj.times().to_vec(),
        c3_rho: Vec::with_capacity(traj.len()),
        purity: Vec::with_capacity(traj.len()),
        populations: Vec::with_capacity(traj.len()),
    };
    for rho in traj.rhos() {
        series.c3_rho.push(c_measure_density(rho, set)?);
        series.purity.push(rho.purity());
        let pops = rho.populations();
        series
            .populations
            .push(pops.try_into().expect("3-qubit trajectory"));
    }
    Ok(series)
}

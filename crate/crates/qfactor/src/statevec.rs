//! Dense pure states and density matrices for small qubit registers.
//!
//! Coefficient indexing follows the 1-based convention used everywhere in
//! this crate: coefficient `C_i` lives at vector slot `i - 1`, and `i - 1`
//! read in binary is the ket string left-to-right. Qubit `k` therefore
//! occupies bit `k - 1` (qubit 1 is the rightmost ket slot / least
//! significant bit). For three qubits `|001>` is `C_2` and `|100>` is `C_5`.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg;

/// Largest register size the dense representation supports.
pub const MAX_QUBITS: usize = 8;

/// Normalization tolerance for stored states.
pub const NORM_TOL: f64 = 1e-12;

/// Slack accepted from external inputs before renormalizing.
const INPUT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("zero-norm coefficient vector cannot be normalized")]
    ZeroNorm,
    #[error("coefficient vector is not normalized: sum of |c|^2 is {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("expected {expected} coefficients for {n_qubits} qubits, got {actual}")]
    DimensionMismatch {
        n_qubits: usize,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite amplitude at slot {index}")]
    NonFinite { index: usize },
    #[error("{n} qubits outside the supported range 1..={MAX_QUBITS}")]
    UnsupportedQubitCount { n: usize },
    #[error("invalid basis label {label:?}")]
    BadBasisLabel { label: String },
    #[error("matrix is not Hermitian: max |rho_nm - conj(rho_mn)| = {deviation}")]
    NotHermitian { deviation: f64 },
    #[error("trace {trace} differs from 1 beyond tolerance")]
    BadTrace { trace: f64 },
    #[error("matrix has eigenvalue {eigenvalue} below the positivity tolerance")]
    NotPositiveSemidefinite { eigenvalue: f64 },
}

/// A single qubit `a|0> + b|1>` with `|a|^2 + |b|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitFactor {
    pub a: Complex64,
    pub b: Complex64,
}

impl QubitFactor {
    /// Requires the pair to be normalized within [`NORM_TOL`].
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, StateError> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() {
            return Err(StateError::NonFinite { index: 0 });
        }
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(Self { a, b })
    }

    /// Rescales an arbitrary nonzero pair onto the unit sphere.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self, StateError> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !norm.is_finite() {
            return Err(StateError::NonFinite { index: 0 });
        }
        if norm == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
        })
    }

    /// Amplitude for the bit value of this qubit: `a` for 0, `b` for 1.
    pub fn amplitude(&self, bit: u8) -> Complex64 {
        if bit == 0 {
            self.a
        } else {
            self.b
        }
    }
}

/// Normalized pure state of `n` qubits as a dense vector of `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    coeffs: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from already-normalized coefficients.
    ///
    /// Accepts up to 1e-9 drift (covering round-tripped files). Input within
    /// [`NORM_TOL`] is kept bit-for-bit; larger drift is rescaled away, so
    /// stored states always satisfy the invariant.
    pub fn new(n_qubits: usize, coeffs: Vec<Complex64>) -> Result<Self, StateError> {
        let norm_sqr = Self::check_shape(n_qubits, &coeffs)?;
        if (norm_sqr - 1.0).abs() <= NORM_TOL {
            return Ok(Self { n_qubits, coeffs });
        }
        if (norm_sqr - 1.0).abs() > INPUT_NORM_TOL {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(Self::rescaled(n_qubits, coeffs, norm_sqr.sqrt()))
    }

    /// Normalizes an arbitrary nonzero coefficient vector (direction kept).
    pub fn normalized(n_qubits: usize, coeffs: Vec<Complex64>) -> Result<Self, StateError> {
        let norm_sqr = Self::check_shape(n_qubits, &coeffs)?;
        if norm_sqr == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        Ok(Self::rescaled(n_qubits, coeffs, norm_sqr.sqrt()))
    }

    /// The computational basis state with the given 0-based index.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n_qubits));
        assert!(index < (1 << n_qubits));
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        coeffs[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, coeffs }
    }

    fn check_shape(n_qubits: usize, coeffs: &[Complex64]) -> Result<f64, StateError> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(StateError::UnsupportedQubitCount { n: n_qubits });
        }
        let expected = 1usize << n_qubits;
        if coeffs.len() != expected {
            return Err(StateError::DimensionMismatch {
                n_qubits,
                expected,
                actual: coeffs.len(),
            });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(StateError::NonFinite { index });
        }
        Ok(coeffs.iter().map(|c| c.norm_sqr()).sum())
    }

    fn rescaled(n_qubits: usize, mut coeffs: Vec<Complex64>, norm: f64) -> Self {
        if norm != 1.0 {
            for c in &mut coeffs {
                *c /= norm;
            }
        }
        Self { n_qubits, coeffs }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Amplitude at a 0-based basis index.
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.coeffs[index]
    }

    /// Tensor product with `self` as the more significant qubits.
    pub fn kron(&self, low: &PureState) -> PureState {
        let n_qubits = self.n_qubits + low.n_qubits;
        assert!(n_qubits <= MAX_QUBITS);
        let mut coeffs = Vec::with_capacity(self.dim() * low.dim());
        for hi in &self.coeffs {
            for lo in &low.coeffs {
                coeffs.push(hi * lo);
            }
        }
        PureState { n_qubits, coeffs }
    }

    /// Projector `|psi><psi|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut elems = Array2::zeros((dim, dim));
        for n in 0..dim {
            for m in 0..dim {
                elems[(n, m)] = self.coeffs[n] * self.coeffs[m].conj();
            }
        }
        DensityMatrix {
            n_qubits: self.n_qubits,
            elems,
        }
    }

    /// Largest coefficient deviation after aligning global phase.
    ///
    /// The phase is fixed at `self`'s largest-magnitude coefficient, so states
    /// equal up to a global phase compare as distance 0.
    pub fn max_coeff_distance_up_to_phase(&self, other: &PureState) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits);
        let pivot = self
            .coeffs
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        if other.coeffs[pivot].norm() == 0.0 {
            // no overlap on the pivot: states differ by at least the pivot weight
            return self.coeffs[pivot].norm();
        }
        let phase = self.coeffs[pivot] / other.coeffs[pivot];
        let phase = phase / phase.norm();
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// Product state built as `factors[n-1] (x) ... (x) factors[0]`.
///
/// `factors[k]` is qubit `k + 1`, i.e. bit `k` of the basis index, so the
/// last factor occupies the leftmost ket slot.
pub fn tensor_product(factors: &[QubitFactor]) -> PureState {
    assert!(
        (1..=MAX_QUBITS).contains(&factors.len()),
        "tensor_product needs 1..={MAX_QUBITS} factors"
    );
    let n_qubits = factors.len();
    let dim = 1usize << n_qubits;
    let mut coeffs = Vec::with_capacity(dim);
    for index in 0..dim {
        let mut c = Complex64::new(1.0, 0.0);
        for (bit, factor) in factors.iter().enumerate() {
            c *= factor.amplitude(((index >> bit) & 1) as u8);
        }
        coeffs.push(c);
    }
    // each factor is unit-norm, so the product is normalized up to rounding
    PureState::new(n_qubits, coeffs).expect("product of normalized factors")
}

/// `C_2|001> + C_3|010> + C_5|100>`.
pub fn w_state(c2: Complex64, c3: Complex64, c5: Complex64) -> Result<PureState, StateError> {
    let norm_sqr = c2.norm_sqr() + c3.norm_sqr() + c5.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(StateError::NotNormalized { norm_sqr });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
    coeffs[1] = c2;
    coeffs[2] = c3;
    coeffs[4] = c5;
    PureState::new(3, coeffs)
}

/// `C_1|000> + C_8|111>`.
pub fn ghz_state(c1: Complex64, c8: Complex64) -> Result<PureState, StateError> {
    let norm_sqr = c1.norm_sqr() + c8.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(StateError::NotNormalized { norm_sqr });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
    coeffs[0] = c1;
    coeffs[7] = c8;
    PureState::new(3, coeffs)
}

/// `(|000> + |111> + |001> + |110>) / 2`.
pub fn psi1_state() -> PureState {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
    for index in [0, 1, 6, 7] {
        coeffs[index] = Complex64::new(0.5, 0.0);
    }
    PureState::new(3, coeffs).expect("constant state is normalized")
}

/// Haar-style random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. Deterministic for a fixed seed.
pub fn random_pure_state(n_qubits: usize, seed: u64) -> PureState {
    assert!((1..=MAX_QUBITS).contains(&n_qubits));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = gaussian_vector(&mut rng, 1 << n_qubits);
    PureState::normalized(n_qubits, coeffs).expect("gaussian vector is nonzero")
}

/// A random product state together with the factors that built it.
#[derive(Debug, Clone)]
pub struct ProductSample {
    pub state: PureState,
    pub factors: Vec<QubitFactor>,
}

/// Tensor product of independently sampled random qubits. The factors are
/// returned alongside the state so round-trip tests can compare against them.
pub fn random_product_state(n_qubits: usize, seed: u64) -> ProductSample {
    assert!((1..=MAX_QUBITS).contains(&n_qubits));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors: Vec<QubitFactor> = (0..n_qubits)
        .map(|_| {
            let v = gaussian_vector(&mut rng, 2);
            QubitFactor::normalized(v[0], v[1]).expect("gaussian pair is nonzero")
        })
        .collect();
    ProductSample {
        state: tensor_product(&factors),
        factors,
    }
}

fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

/// Hermitian, unit-trace, positive-semidefinite `2^n x 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elems: Array2<Complex64>,
}

/// Validation tolerances for density matrices built from external data.
pub const DENSITY_TRACE_TOL: f64 = 1e-9;
pub const DENSITY_HERMITICITY_TOL: f64 = 1e-9;
pub const DENSITY_EIGENVALUE_TOL: f64 = 1e-9;

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn try_new(n_qubits: usize, elems: Array2<Complex64>) -> Result<Self, StateError> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(StateError::UnsupportedQubitCount { n: n_qubits });
        }
        let dim = 1usize << n_qubits;
        if elems.nrows() != dim || elems.ncols() != dim {
            return Err(StateError::DimensionMismatch {
                n_qubits,
                expected: dim,
                actual: elems.nrows(),
            });
        }
        if let Some(index) = elems
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(StateError::NonFinite { index });
        }
        let mut deviation = 0.0_f64;
        for n in 0..dim {
            for m in n..dim {
                deviation = deviation.max((elems[(n, m)] - elems[(m, n)].conj()).norm());
            }
        }
        if deviation > DENSITY_HERMITICITY_TOL {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace: Complex64 = (0..dim).map(|i| elems[(i, i)]).sum();
        if (trace.re - 1.0).abs() > DENSITY_TRACE_TOL || trace.im.abs() > DENSITY_TRACE_TOL {
            return Err(StateError::BadTrace { trace: trace.re });
        }
        let min_ev = linalg::min_hermitian_eigenvalue(&elems);
        if min_ev < -DENSITY_EIGENVALUE_TOL {
            return Err(StateError::NotPositiveSemidefinite { eigenvalue: min_ev });
        }
        Ok(Self { n_qubits, elems })
    }

    /// Wraps a matrix whose invariants the caller has already established
    /// (used by the integrator, which re-symmetrizes and checks drift itself).
    pub(crate) fn from_parts(n_qubits: usize, elems: Array2<Complex64>) -> Self {
        Self { n_qubits, elems }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n_qubits));
        let dim = 1usize << n_qubits;
        let mut elems = Array2::zeros((dim, dim));
        for i in 0..dim {
            elems[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { n_qubits, elems }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.elems.nrows()
    }

    pub fn elems(&self) -> &Array2<Complex64> {
        &self.elems
    }

    /// Element `rho_nm` at 0-based indices.
    pub fn elem(&self, n: usize, m: usize) -> Complex64 {
        self.elems[(n, m)]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.elems[(i, i)]).sum()
    }

    /// `tr(rho^2)`; 1 for pure states, `1/2^n` for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum_{nm} rho_nm rho_mn = sum_{nm} |rho_nm|^2 for Hermitian rho
        self.elems.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Populations `rho_ii` in index order.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.elems[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.elems)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.elems)
    }

    pub fn max_hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut deviation = 0.0_f64;
        for n in 0..dim {
            for m in n..dim {
                deviation = deviation.max((self.elems[(n, m)] - self.elems[(m, n)].conj()).norm());
            }
        }
        deviation
    }
}

/// Ket string for a 0-based basis index, e.g. `basis_label(3, 4) == "100"`.
pub fn basis_label(n_qubits: usize, index: usize) -> String {
    assert!(index < (1 << n_qubits));
    (0..n_qubits)
        .rev()
        .map(|bit| if (index >> bit) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// 0-based basis index for a ket string, e.g. `basis_index("100") == 4`.
pub fn basis_index(label: &str) -> Result<usize, StateError> {
    if label.is_empty() || label.len() > MAX_QUBITS || !label.chars().all(|c| c == '0' || c == '1')
    {
        return Err(StateError::BadBasisLabel {
            label: label.to_string(),
        });
    }
    Ok(usize::from_str_radix(label, 2).unwrap())
}

//! Minor conditions for full factorizability and the entanglement
//! characterization `C^(n)` built on them.
//!
//! A minor condition `C_i C_j - C_k C_l = 0` holds on every product state
//! exactly when, for every qubit position, the multiset of that qubit's bit
//! values over `{i-1, j-1}` equals the one over `{k-1, l-1}`. The curated
//! lists for n = 2, 3, 4 define the measure; the generated single-bit minors
//! (all 2x2 minors of each one-qubit reshaping of the coefficient vector)
//! define the factorizability decision.

use num_complex::Complex64;
use thiserror::Error;

use crate::statevec::{DensityMatrix, PureState, QubitFactor};

/// Default residual tolerance for the factorizability decision. Clears the
/// rounding accumulated on normalized 4-qubit states while rejecting weakly
/// entangled inputs (residuals at or above 1e-6).
pub const DEFAULT_FACTOR_TOL: f64 = 1e-9;

/// Radicands of density terms may sit this far below zero before the input
/// is treated as an invalid density matrix rather than rounding noise.
pub const RADICAND_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("no condition list for {n}-qubit states")]
    UnsupportedArity { n: usize },
    #[error("condition set is for {set_n} qubits but the state has {state_n}")]
    ArityMismatch { set_n: usize, state_n: usize },
    #[error("density term radicand {radicand} is negative beyond rounding tolerance")]
    PositivityViolation { radicand: f64 },
    #[error("state is not factorizable: max minor residual {max_residual}")]
    NotFactorizable { max_residual: f64 },
}

/// The constraint `C_i C_j - C_k C_l = 0` on 1-based coefficient indices.
///
/// Stored in canonical form: both pairs ascending and the pair containing
/// the smallest index first, using commutativity and the overall sign flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorCondition {
    i: u16,
    j: u16,
    k: u16,
    l: u16,
}

impl MinorCondition {
    /// Canonicalizes the given index quadruple.
    pub fn new(i: u16, j: u16, k: u16, l: u16) -> Self {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let (k, l) = if k <= l { (k, l) } else { (l, k) };
        if (i, j) <= (k, l) {
            Self { i, j, k, l }
        } else {
            Self {
                i: k,
                j: l,
                k: i,
                l: j,
            }
        }
    }

    /// The 1-based indices `(i, j, k, l)` of `C_i C_j - C_k C_l`.
    pub fn indices(&self) -> (u16, u16, u16, u16) {
        (self.i, self.j, self.k, self.l)
    }

    /// Per-bit multiset rule: for every qubit position the bit values over
    /// `{i-1, j-1}` and `{k-1, l-1}` agree as multisets. Exactly the
    /// conditions that vanish on every product state.
    pub fn is_valid(&self, n_qubits: usize) -> bool {
        if [self.i, self.j, self.k, self.l]
            .iter()
            .any(|&x| x == 0 || x as usize > (1 << n_qubits))
        {
            return false;
        }
        let (i, j, k, l) = (self.i - 1, self.j - 1, self.k - 1, self.l - 1);
        for b in 0..n_qubits {
            let left = ((i >> b) & 1) + ((j >> b) & 1);
            let right = ((k >> b) & 1) + ((l >> b) & 1);
            if left != right {
                return false;
            }
        }
        true
    }

    /// `2 |C_i C_j - C_k C_l|` on a raw coefficient slice (not necessarily
    /// normalized; scales as `|alpha|^2` under `C -> alpha C`).
    pub fn residual_raw(&self, coeffs: &[Complex64]) -> f64 {
        let c = |idx: u16| coeffs[idx as usize - 1];
        2.0 * (c(self.i) * c(self.j) - c(self.k) * c(self.l)).norm()
    }

    /// `2 |C_i C_j - C_k C_l|` on a normalized state.
    pub fn residual(&self, state: &PureState) -> f64 {
        self.residual_raw(state.coeffs())
    }

    /// The density-matrix form of this condition.
    pub fn density_form(&self) -> DensityTerm {
        DensityTerm {
            ii: self.i,
            jj: self.j,
            kk: self.k,
            ll: self.l,
            ik: (self.i, self.k),
            jl: (self.j, self.l),
        }
    }
}

/// Index layout of the density-matrix term
/// `2 sqrt(rho_ii rho_jj + rho_kk rho_ll - 2 Re(rho_ik rho_jl))`.
///
/// For pure states `rho_nm = C_n conj(C_m)` the radicand equals
/// `|C_i C_j - C_k C_l|^2`, so the term reproduces the coefficient residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityTerm {
    pub ii: u16,
    pub jj: u16,
    pub kk: u16,
    pub ll: u16,
    pub ik: (u16, u16),
    pub jl: (u16, u16),
}

impl DensityTerm {
    /// The radicand `rho_ii rho_jj + rho_kk rho_ll - 2 Re(rho_ik rho_jl)`.
    pub fn radicand(&self, rho: &DensityMatrix) -> f64 {
        let e = |n: u16, m: u16| rho.elem(n as usize - 1, m as usize - 1);
        let pop = e(self.ii, self.ii).re * e(self.jj, self.jj).re
            + e(self.kk, self.kk).re * e(self.ll, self.ll).re;
        let coh = (e(self.ik.0, self.ik.1) * e(self.jl.0, self.jl.1)).re;
        pop - 2.0 * coh
    }

    /// `2 sqrt(max(0, radicand))`, clamping rounding-level negatives and
    /// rejecting anything below `-`[`RADICAND_TOL`].
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64, FactorError> {
        let radicand = self.radicand(rho);
        if radicand < -RADICAND_TOL {
            return Err(FactorError::PositivityViolation { radicand });
        }
        Ok(2.0 * radicand.max(0.0).sqrt())
    }
}

/// Where a condition list came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// The curated reference list for n = 2, 3, 4.
    PaperList,
    /// All deduplicated 2x2 minors of the single-qubit reshapings.
    Generated,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::PaperList => "paper",
            Provenance::Generated => "generated",
        }
    }
}

/// An ordered, duplicate-free list of valid minor conditions for one arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSet {
    n_qubits: usize,
    conditions: Vec<MinorCondition>,
    provenance: Provenance,
}

impl ConditionSet {
    fn new(n_qubits: usize, conditions: Vec<MinorCondition>, provenance: Provenance) -> Self {
        debug_assert!(conditions.iter().all(|c| c.is_valid(n_qubits)));
        debug_assert!({
            let mut sorted = conditions.clone();
            sorted.sort();
            sorted.windows(2).all(|w| w[0] != w[1])
        });
        Self {
            n_qubits,
            conditions,
            provenance,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn conditions(&self) -> &[MinorCondition] {
        &self.conditions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MinorCondition> {
        self.conditions.iter()
    }

    pub fn contains(&self, cond: &MinorCondition) -> bool {
        self.conditions.contains(cond)
    }
}

/// The curated condition list defining `C^(n)` for n = 2, 3, 4.
///
/// The 4-qubit list repairs two transcription typos that would break the
/// product-state rule: `C_9 C_14 - C_10 C_11` becomes `C_9 C_14 - C_10 C_13`
/// (the unique valid partner of that leading pair) and
/// `C_6 C_15 - C_16 C_8` becomes `C_6 C_15 - C_13 C_8` (the partner that
/// completes the pairing pattern of its index class). Every returned
/// condition passes [`MinorCondition::is_valid`].
pub fn paper_conditions(n_qubits: usize) -> Result<ConditionSet, FactorError> {
    let raw: &[(u16, u16, u16, u16)] = match n_qubits {
        2 => &[(1, 4, 2, 3)],
        3 => &[
            (1, 4, 2, 3),
            (1, 6, 2, 5),
            (1, 8, 2, 7),
            (3, 6, 4, 5),
            (3, 8, 4, 7),
            (5, 8, 6, 7),
            (1, 7, 3, 5),
            (2, 8, 4, 6),
        ],
        4 => &[
            (1, 4, 2, 3),
            (4, 13, 7, 10),
            (1, 6, 2, 5),
            (4, 14, 6, 12),
            (1, 8, 3, 6),
            (4, 15, 3, 16),
            (1, 10, 2, 9),
            (4, 16, 8, 12),
            (1, 11, 3, 9),
            (5, 8, 6, 7),
            (1, 12, 2, 11),
            (5, 14, 6, 13),
            (1, 14, 9, 6),
            (5, 15, 7, 13),
            (1, 15, 5, 11),
            (5, 16, 7, 14),
            (2, 8, 4, 6),
            (6, 11, 5, 12),
            (2, 12, 4, 10),
            (6, 15, 13, 8),
            (2, 13, 5, 10),
            (6, 16, 8, 14),
            (2, 14, 6, 10),
            (7, 16, 8, 15),
            (2, 16, 10, 8),
            (7, 12, 8, 11),
            (3, 8, 4, 7),
            (9, 12, 10, 11),
            (3, 15, 7, 11),
            (9, 14, 10, 13),
            (3, 13, 11, 5),
            (9, 15, 11, 13),
            (10, 16, 12, 14),
            (11, 16, 12, 15),
            (10, 15, 11, 14),
            (13, 16, 14, 15),
        ],
        n => return Err(FactorError::UnsupportedArity { n }),
    };
    let conditions = raw
        .iter()
        .map(|&(i, j, k, l)| MinorCondition::new(i, j, k, l))
        .collect();
    Ok(ConditionSet::new(
        n_qubits,
        conditions,
        Provenance::PaperList,
    ))
}

/// All distinct 2x2 minors of the single-qubit reshapings.
///
/// For each qubit position `b` the coefficients form a `2 x 2^(n-1)` array
/// (rows indexed by bit `b`, columns by the remaining bits in ascending
/// order); every pair of columns yields one minor. Duplicates across bit
/// positions are removed via the canonical form. The zero set of the result
/// is exactly the set of fully factorizable states.
pub fn generate_minor_conditions(n_qubits: usize) -> Result<ConditionSet, FactorError> {
    if !(1..=crate::statevec::MAX_QUBITS).contains(&n_qubits) {
        return Err(FactorError::UnsupportedArity { n: n_qubits });
    }
    let mut conditions: Vec<MinorCondition> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let ncols = 1usize << (n_qubits - 1);
    for b in 0..n_qubits {
        // insert the row bit at position b of the column index
        let slot = |row: usize, col: usize| -> u16 {
            let low = col & ((1 << b) - 1);
            let high = col >> b;
            ((high << (b + 1)) | (row << b) | low) as u16 + 1
        };
        for c1 in 0..ncols {
            for c2 in (c1 + 1)..ncols {
                let cond = MinorCondition::new(slot(0, c1), slot(1, c2), slot(0, c2), slot(1, c1));
                if seen.insert(cond) {
                    conditions.push(cond);
                }
            }
        }
    }
    Ok(ConditionSet::new(
        n_qubits,
        conditions,
        Provenance::Generated,
    ))
}

/// `C^(n)` from coefficients: the sum of `2 |C_i C_j - C_k C_l|` over the set.
pub fn c_measure_coeffs(state: &PureState, set: &ConditionSet) -> Result<f64, FactorError> {
    if state.n_qubits() != set.n_qubits() {
        return Err(FactorError::ArityMismatch {
            set_n: set.n_qubits(),
            state_n: state.n_qubits(),
        });
    }
    Ok(set.iter().map(|cond| cond.residual(state)).sum())
}

/// `C^(n)` from density-matrix elements: the sum of the mapped square-root
/// terms. Coincides with [`c_measure_coeffs`] on pure-state densities.
pub fn c_measure_density(rho: &DensityMatrix, set: &ConditionSet) -> Result<f64, FactorError> {
    if rho.n_qubits() != set.n_qubits() {
        return Err(FactorError::ArityMismatch {
            set_n: set.n_qubits(),
            state_n: rho.n_qubits(),
        });
    }
    let mut total = 0.0;
    for cond in set.iter() {
        total += cond.density_form().evaluate(rho)?;
    }
    Ok(total)
}

/// True when every generated minor residual is at most `tol`.
pub fn is_factorizable(state: &PureState, tol: f64) -> bool {
    max_minor_residual(state) <= tol
}

fn max_minor_residual(state: &PureState) -> f64 {
    let set = generate_minor_conditions(state.n_qubits()).expect("state arity is supported");
    set.iter()
        .map(|cond| cond.residual(state))
        .fold(0.0, f64::max)
}

/// Recovers the single-qubit factors of a factorizable state.
///
/// For each qubit the coefficient vector is reshaped to `2 x 2^(n-1)` and the
/// dominant left singular direction of that array (computed from its 2x2
/// Gram matrix in closed form) gives `(a_k, b_k)`. Factor phases are
/// individually arbitrary; the tensor product reconstructs the input up to a
/// global phase.
pub fn extract_factors(state: &PureState, tol: f64) -> Result<Vec<QubitFactor>, FactorError> {
    let max_residual = max_minor_residual(state);
    if max_residual > tol {
        return Err(FactorError::NotFactorizable { max_residual });
    }
    let n = state.n_qubits();
    let coeffs = state.coeffs();
    let mut factors = Vec::with_capacity(n);
    for b in 0..n {
        let mut g00 = 0.0_f64;
        let mut g11 = 0.0_f64;
        let mut g01 = Complex64::new(0.0, 0.0);
        let ncols = 1usize << (n - 1);
        for col in 0..ncols {
            let low = col & ((1 << b) - 1);
            let high = col >> b;
            let row0 = (high << (b + 1)) | low;
            let row1 = row0 | (1 << b);
            let m0 = coeffs[row0];
            let m1 = coeffs[row1];
            g00 += m0.norm_sqr();
            g11 += m1.norm_sqr();
            g01 += m0 * m1.conj();
        }
        // leading eigenvector of [[g00, g01], [conj(g01), g11]]
        let mid = (g00 + g11) / 2.0;
        let rad = (((g00 - g11) / 2.0).powi(2) + g01.norm_sqr()).sqrt();
        let lambda = mid + rad;
        let (a, bamp) = if g01.norm() > 1e-300 {
            (g01, Complex64::new(lambda - g00, 0.0))
        } else if g00 >= g11 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
        };
        let factor = QubitFactor::normalized(a, bamp)
            .expect("leading singular direction of a unit vector is nonzero");
        factors.push(factor);
    }
    Ok(factors)
}

//! Factorizability analysis and open-system decay of few-qubit states.
//!
//! The crate has three layers:
//!
//! - [`statevec`]: dense pure states and density matrices for up to 8 qubits,
//!   with the 1-based coefficient indexing used throughout (`C_i` sits at
//!   vector slot `i - 1`, whose binary value reads the ket left-to-right,
//!   most significant qubit first).
//! - [`factorization`]: minor conditions `C_i C_j - C_k C_l = 0` that cut out
//!   the product states, the entanglement characterization `C^(n)` built from
//!   them (in both coefficient and density-matrix form), a factorizability
//!   decision, and single-qubit factor extraction.
//! - [`dynamics`]: a 3-spin Ising chain with independent zero-temperature
//!   amplitude damping on each site, integrated in the interaction picture,
//!   plus the closed-form solutions for the analytically tractable
//!   density-matrix elements.
//!
//! File formats (JSON states and parameter sets, CSV reports) live in [`io`].

pub mod dynamics;
pub mod factorization;
pub mod io;
pub mod linalg;
pub mod statevec;

pub use dynamics::{ChainParams, ObservableSeries, PhiAngles, SpinConfig, Trajectory};
pub use factorization::{ConditionSet, DensityTerm, MinorCondition, Provenance};
pub use statevec::{DensityMatrix, ProductSample, PureState, QubitFactor};

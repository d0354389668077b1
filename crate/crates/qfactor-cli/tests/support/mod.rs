//! Shared helpers for the CLI and acceptance suites.

use num_complex::Complex64;
use qfactor::statevec::PureState;

/// Independent factorizability oracle: every single-qubit `2 x 2^(n-1)`
/// reshaping of the coefficient vector must be numerically rank one, judged
/// by the smallest singular value (from the 2x2 Gram matrix in closed form).
///
/// This shares no code path with the minor-residual decision it is used to
/// cross-check.
#[allow(dead_code)] // only the acceptance target uses the oracle
pub fn reshaping_is_rank_one(state: &PureState, sigma_tol: f64) -> bool {
    let n = state.n_qubits();
    let coeffs = state.coeffs();
    for b in 0..n {
        let mut g00 = 0.0_f64;
        let mut g11 = 0.0_f64;
        let mut g01 = Complex64::new(0.0, 0.0);
        for col in 0..(1usize << (n - 1)) {
            let low = col & ((1 << b) - 1);
            let high = col >> b;
            let r0 = (high << (b + 1)) | low;
            let r1 = r0 | (1 << b);
            g00 += coeffs[r0].norm_sqr();
            g11 += coeffs[r1].norm_sqr();
            g01 += coeffs[r0] * coeffs[r1].conj();
        }
        let mid = (g00 + g11) / 2.0;
        let rad = (((g00 - g11) / 2.0).powi(2) + g01.norm_sqr()).sqrt();
        let sigma_min_sqr = (mid - rad).max(0.0);
        if sigma_min_sqr > sigma_tol * sigma_tol {
            return false;
        }
    }
    true
}

/// Parses CSV text into a header and rows of f64 columns; non-numeric
/// fields (like provenance labels) come back as NaN.
pub fn parse_numeric_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("csv has a header")
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|v| v.parse::<f64>().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (header, rows)
}

/// Runs the `qfactor` binary with the given arguments.
pub fn run_qfactor(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_qfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

//! Minimal dense Hermitian linear algebra for the tiny matrices (at most
//! 16x16) this crate works with. A cyclic Jacobi eigensolver keeps the crate
//! free of system BLAS/LAPACK dependencies.

use ndarray::Array2;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses cyclic Jacobi rotations with complex Givens transforms. Convergence
/// is quadratic; for the 8x8 and 16x16 matrices used here a handful of sweeps
/// reaches machine precision.
pub fn hermitian_eigenvalues(matrix: &Array2<Complex64>) -> Vec<f64> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    let mut h = matrix.clone();

    let off_norm_sqr = |h: &Array2<Complex64>| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += h[(p, q)].norm_sqr();
            }
        }
        s
    };

    let scale: f64 = (0..n).map(|i| h[(i, i)].re.abs()).sum::<f64>().max(1.0);
    let tol = (scale * 1e-15).powi(2) * (n * n) as f64;

    for _sweep in 0..60 {
        if off_norm_sqr(&h) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                if hpq.norm_sqr() <= tol / (n * n) as f64 {
                    continue;
                }
                // Unitary 2x2 that zeroes the (p,q) entry:
                //   [ c        s*e^{i phi} ]
                //   [ -s*e^{-i phi}      c ]
                let phi = hpq.arg();
                let apq = hpq.norm();
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();

                for r in 0..n {
                    let hrp = h[(r, p)];
                    let hrq = h[(r, q)];
                    h[(r, p)] = c * hrp - s * e_neg * hrq;
                    h[(r, q)] = s * e_pos * hrp + c * hrq;
                }
                for r in 0..n {
                    let hpr = h[(p, r)];
                    let hqr = h[(q, r)];
                    h[(p, r)] = c * hpr - s * e_pos * hqr;
                    h[(q, r)] = s * e_neg * hpr + c * hqr;
                }
                h[(p, q)] = Complex64::new(0.0, 0.0);
                h[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut evs: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(matrix: &Array2<Complex64>) -> f64 {
    hermitian_eigenvalues(matrix)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let m = array![[c(3.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[a, z], [conj(z), b]] are (a+b)/2 +- sqrt(((a-b)/2)^2 + |z|^2)
        let (a, b) = (0.7, -0.2);
        let z = c(0.3, -0.4);
        let m = array![[c(a, 0.0), z], [z.conj(), c(b, 0.0)]];
        let mid = (a + b) / 2.0;
        let rad = (((a - b) / 2.0).powi(2) + z.norm_sqr()).sqrt();
        let evs = hermitian_eigenvalues(&m);
        assert!((evs[0] - (mid - rad)).abs() < 1e-14);
        assert!((evs[1] - (mid + rad)).abs() < 1e-14);
    }

    #[test]
    fn rank_one_projector_has_single_unit_eigenvalue() {
        let v = [c(0.5, 0.1), c(-0.3, 0.2), c(0.0, 0.7), c(0.2, -0.2)];
        let norm_sqr: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let mut m = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = v[i] * v[j].conj() / norm_sqr;
            }
        }
        let evs = hermitian_eigenvalues(&m);
        assert!(evs[..3].iter().all(|e| e.abs() < 1e-13));
        assert!((evs[3] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn trace_and_frobenius_norm_are_preserved() {
        // deterministic pseudo-random Hermitian 8x8
        let mut m: Array2<Complex64> = Array2::zeros((8, 8));
        let mut x = 0.123_f64;
        let mut next = move || {
            x = (x * 997.0 + 0.731).fract();
            x - 0.5
        };
        for i in 0..8 {
            m[(i, i)] = c(next(), 0.0);
            for j in (i + 1)..8 {
                let z = c(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let evs = hermitian_eigenvalues(&m);
        let tr: f64 = (0..8).map(|i| m[(i, i)].re).sum();
        let fro: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        assert!((evs.iter().sum::<f64>() - tr).abs() < 1e-12);
        assert!((evs.iter().map(|e| e * e).sum::<f64>() - fro).abs() < 1e-11);
    }
}

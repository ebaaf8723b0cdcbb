//! Eigendecomposition of small complex Hermitian matrices.
//!
//! A cyclic Jacobi sweep with complex Givens rotations; plenty for the
//! matrices that show up here (4x4 tomographic estimates, reduced density
//! matrices up to a few qubits).

use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;
const OFF_TOL: f64 = 1e-26;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix given in row-major order.
///
/// The input is symmetrized first, so tiny Hermiticity violations are
/// averaged away rather than amplified.
pub fn hermitian_eigen(dim: usize, matrix: &[Complex64]) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    assert_eq!(matrix.len(), dim * dim, "matrix shape");
    let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            a[r * dim + c] = (matrix[r * dim + c] + matrix[c * dim + r].conj()) * 0.5;
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        v[r * dim + r] = Complex64::new(1.0, 0.0);
    }

    let scale: f64 = a
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..dim)
            .flat_map(|p| ((p + 1)..dim).map(move |q| (p, q)))
            .map(|(p, q)| a[p * dim + q].norm_sqr())
            .sum();
        if off <= OFF_TOL * scale {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                let r = apq.norm();
                if r < 1e-300 {
                    a[p * dim + q] = Complex64::new(0.0, 0.0);
                    a[q * dim + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / r;
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // J is identity apart from:
                //   J[p][p] = phase*c   J[p][q] = phase*s
                //   J[q][p] = -s        J[q][q] = c
                let jpp = phase * c;
                let jpq = phase * s;

                // A <- A J  (columns p, q)
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = akp * jpp - akq * s;
                    a[k * dim + q] = akp * jpq + akq * c;
                }
                // A <- J† A  (rows p, q)
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = apk * jpp.conj() - aqk * s;
                    a[q * dim + k] = apk * jpq.conj() + aqk * c;
                }
                a[p * dim + q] = Complex64::new(0.0, 0.0);
                a[q * dim + p] = Complex64::new(0.0, 0.0);
                a[p * dim + p] = Complex64::new(a[p * dim + p].re, 0.0);
                a[q * dim + q] = Complex64::new(a[q * dim + q].re, 0.0);

                // V <- V J
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = vkp * jpp - vkq * s;
                    v[k * dim + q] = vkp * jpq + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        a[i * dim + i]
            .re
            .partial_cmp(&a[j * dim + j].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues = order.iter().map(|&i| a[i * dim + i].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| (0..dim).map(|row| v[row * dim + col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

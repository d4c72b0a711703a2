//! Singular value decomposition by QR preconditioning and one-sided Jacobi rotations.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values in descending order, with right singular vectors when requested.
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    /// Columns are right singular vectors, ordered like `sigma`.
    pub v: Option<DMatrix<Complex64>>,
}

const MAX_SWEEPS: usize = 80;

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

fn norm_sq(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum()
}

/// Rotates columns `i < j` so that they become orthogonal. Returns whether a rotation happened.
fn rotate(cols: &mut [Vec<Complex64>], v: &mut Option<Vec<Vec<Complex64>>>, norms: &mut [f64], i: usize, j: usize) -> bool {
    let (alpha, beta) = (norms[i], norms[j]);
    if alpha == 0.0 || beta == 0.0 {
        return false;
    }
    let gamma = dot(&cols[i], &cols[j]);
    let g = gamma.norm();
    if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
        return false;
    }
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let e = gamma / g;
    let se = e * s;
    let sec = e.conj() * s;
    let apply = |m: &mut [Vec<Complex64>]| {
        let (lo, hi) = m.split_at_mut(j);
        let (ci, cj) = (&mut lo[i], &mut hi[0]);
        for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
            let (xi, yj) = (*x, *y);
            *x = xi * c - sec * yj;
            *y = se * xi + yj * c;
        }
    };
    apply(cols);
    if let Some(vm) = v.as_mut() {
        apply(vm);
    }
    norms[i] = (alpha - t * g).max(0.0);
    norms[j] = beta + t * g;
    true
}

/// Jacobi SVD of `a`.
pub fn svd(a: &DMatrix<Complex64>, want_v: bool) -> Svd {
    let (m, n) = a.shape();
    if n == 0 {
        return Svd { sigma: Vec::new(), v: want_v.then(|| DMatrix::zeros(0, 0)) };
    }
    let work = if m > n { a.clone().qr().r() } else { a.clone() };
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| work.column(j).iter().copied().collect()).collect();
    let mut v: Option<Vec<Vec<Complex64>>> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect()
    });
    for _ in 0..MAX_SWEEPS {
        let mut norms: Vec<f64> = cols.iter().map(|c| norm_sq(c)).collect();
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                rotated |= rotate(&mut cols, &mut v, &mut norms, i, j);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (norm_sq(c).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal).then(x.1.cmp(&y.1)));
    let sigma = order.iter().map(|x| x.0).collect();
    let v = v.map(|vm| DMatrix::from_fn(n, n, |r, k| vm[order[k].1][r]));
    Svd { sigma, v }
}

pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    svd(a, false).sigma
}

/// Orthonormal basis of the column space of `a` (columns with relative size above `rel`).
pub fn orthonormal_columns(a: &DMatrix<Complex64>, rel: f64) -> DMatrix<Complex64> {
    let (m, n) = a.shape();
    if n == 0 || m == 0 {
        return DMatrix::zeros(m, 0);
    }
    let s = svd(a, true);
    let v = s.v.expect("requested");
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..n).filter(|&k| s.sigma[k] > rel * smax && s.sigma[k] > 0.0).collect();
    let mut q = DMatrix::zeros(m, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        let u = a * v.column(k) / Complex64::new(s.sigma[k], 0.0);
        q.set_column(c, &u);
    }
    q
}

/// Sine of the largest principal angle between the column spaces of two
/// matrices with orthonormal columns.
pub fn max_principal_sine(qa: &DMatrix<Complex64>, qb: &DMatrix<Complex64>) -> f64 {
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    let proj = qa * (qa.adjoint() * qb);
    let resid = qb - proj;
    singular_values(&resid).first().copied().unwrap_or(0.0).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, -3.0), c(2.0, 0.0)]));
        let s = singular_values(&a);
        assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 2.0).abs() < 1e-15 && (s[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_from_vectors() {
        let a = DMatrix::from_fn(7, 4, |i, j| c((i * 3 + j) as f64 % 5.0 - 2.0, ((i + 2 * j) % 3) as f64));
        let s = svd(&a, true);
        let v = s.v.unwrap();
        // ‖A v_k‖ = σ_k and V is unitary.
        for k in 0..4 {
            assert!(((&a * v.column(k)).norm() - s.sigma[k]).abs() < 1e-12);
        }
        assert!((v.adjoint() * &v - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-12);
        // Frobenius norm matches.
        let fro: f64 = s.sigma.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((fro - a.norm()).abs() < 1e-12);
    }

    #[test]
    fn rank_one_matrix() {
        let u = nalgebra::DVector::from_vec(vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)]);
        let w = nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.0, 1.0)]);
        let a = &u * w.adjoint();
        let s = singular_values(&a);
        assert!(s[1] < 1e-15 * s[0]);
    }

    #[test]
    fn principal_angles() {
        let e = |k: usize| {
            let mut m = DMatrix::<Complex64>::zeros(3, 1);
            m[(k, 0)] = c(1.0, 0.0);
            m
        };
        assert!(max_principal_sine(&e(0), &e(0)) < 1e-15);
        assert!((max_principal_sine(&e(0), &e(1)) - 1.0).abs() < 1e-15);
    }
}

//! Hermitian eigensolver by cyclic complex Jacobi rotations.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_traits::{Float, Zero};
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance for `f64` inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which a sweep counts as converged.
pub const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
}

/// Eigenvalues in ascending order with eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Float + nalgebra::Scalar> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Float + nalgebra::Scalar> HermitianEigen<T> {
    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn trace_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |s, v| s + v.abs())
    }

    pub fn positive_sum(&self) -> T {
        self.values.iter().filter(|v| **v > T::zero()).fold(T::zero(), |s, &v| s + v)
    }

    /// Projector onto the span of eigenvectors with eigenvalue above `cut`.
    pub fn projector_above(&self, cut: T) -> DMatrix<Complex<T>> {
        let n = self.values.len();
        let mut p = DMatrix::from_element(n, n, Complex::zero());
        for (k, v) in self.values.iter().enumerate() {
            if *v <= cut {
                continue;
            }
            let col = self.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] = p[(i, j)] + col[i] * col[j].conj();
                }
            }
        }
        p
    }
}

pub fn hermitian_deviation<T: Float + nalgebra::Scalar>(h: &DMatrix<Complex<T>>) -> T {
    let n = h.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Full decomposition with the default `f64`-scale tolerances.
pub fn eigh<T: Float + nalgebra::Scalar>(h: &DMatrix<Complex<T>>) -> Result<HermitianEigen<T>, LinalgError> {
    let tol = T::from(HERMITIAN_TOL).unwrap().max(T::epsilon().sqrt());
    eigh_with(h, tol, T::from(JACOBI_TOL).unwrap())
}

pub fn eigh_with<T: Float + nalgebra::Scalar>(
    h: &DMatrix<Complex<T>>,
    hermitian_tol: T,
    converge_tol: T,
) -> Result<HermitianEigen<T>, LinalgError> {
    let (n, cols) = h.shape();
    if n != cols {
        return Err(LinalgError::NotSquare { rows: n, cols });
    }
    let dev = hermitian_deviation(h);
    if dev > hermitian_tol {
        return Err(LinalgError::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
    }
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * T::from(0.5).unwrap();
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v: DMatrix<Complex<T>> = DMatrix::identity(n, n);
    let norm = a.iter().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt();
    let floor = converge_tol.max(T::epsilon() * norm * T::from(8.0).unwrap());
    for _ in 0..MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[(i, j)].norm_sqr())
            .sqrt();
        if off < floor {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| v[(i, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Zeroes `a[p][q]` with a phase on column `q` followed by a real rotation.
fn rotate<T: Float + nalgebra::Scalar>(a: &mut DMatrix<Complex<T>>, v: &mut DMatrix<Complex<T>>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let phase = apq / mag; // e^{iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = T::one() + T::one();
    let tau = (aqq - app) / (two * mag);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let n = a.nrows();
    let back = phase.conj(); // e^{-iα}
    for k in 0..n {
        let hp = a[(k, p)];
        let hq = a[(k, q)] * back;
        a[(k, p)] = hp * c - hq * s;
        a[(k, q)] = hp * s + hq * c;
        let vp = v[(k, p)];
        let vq = v[(k, q)] * back;
        v[(k, p)] = vp * c - vq * s;
        v[(k, q)] = vp * s + vq * c;
    }
    for k in 0..n {
        let hp = a[(p, k)];
        let hq = a[(q, k)] * phase;
        a[(p, k)] = hp * c - hq * s;
        a[(q, k)] = hp * s + hq * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * mag, T::zero());
    a[(q, q)] = Complex::new(aqq + t * mag, T::zero());
}

/// `Σ|λ|` of a Hermitian matrix.
pub fn trace_norm(h: &CMatrix) -> Result<f64, LinalgError> {
    Ok(eigh(h)?.trace_norm())
}

pub fn min_eigenvalue(h: &CMatrix) -> Result<f64, LinalgError> {
    Ok(eigh(h)?.min())
}

/// Eigenvalues of a Hermitian 3×3 matrix by the trigonometric cubic
/// formula, ascending. Used in inner loops of phase scans.
pub fn eigenvalues_3x3(h: &[[Complex64; 3]; 3]) -> [f64; 3] {
    let (a, b, c) = (h[0][0].re, h[1][1].re, h[2][2].re);
    let (d, e, f) = (h[0][1], h[1][2], h[0][2]);
    let p1 = d.norm_sqr() + e.norm_sqr() + f.norm_sqr();
    let q = (a + b + c) / 3.0;
    let (a2, b2, c2) = (a - q, b - q, c - q);
    let p2 = a2 * a2 + b2 * b2 + c2 * c2 + 2.0 * p1;
    if p2 <= 1e-300 {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();
    // det((H − qI)/p)
    let det = a2 * b2 * c2 + 2.0 * (d * e * f.conj()).re - a2 * e.norm_sqr() - b2 * f.norm_sqr() - c2 * d.norm_sqr();
    let r = (det / (p * p * p) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}

pub fn complex_identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn outer(u: &[Complex64], v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

//! Small dense linear algebra for 2×2 and 4×4 matrices.
//!
//! Hermitian eigenproblems use a closed form at dimension 2 and cyclic
//! complex Jacobi sweeps at dimension 4. Everything here is allocation-light
//! and deterministic: the same input always produces bit-identical output.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|m_ij - conj(m_ji)|` accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues above `-PSD_CLAMP` are clamped to zero before square roots.
pub const PSD_CLAMP: f64 = 1e-12;
/// Determinants below this magnitude are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

fn check_dim(dim: usize, len: usize) -> Result<()> {
    if dim != 2 && dim != 4 {
        return Err(Error::Unsupported(format!(
            "matrix dimension {dim} (only 2 and 4 are supported)"
        )));
    }
    if len != dim * dim {
        return Err(Error::Dimension {
            expected: dim * dim,
            got: len,
        });
    }
    Ok(())
}

/// Complex square matrix stored row-major. Hermiticity is checked by the
/// operations that need it rather than enforced at construction, so that
/// intermediate products can live in the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim, entries.len())?;
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![Complex64::new(0.0, 0.0); dim * dim])
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn outer(psi: &[Complex64]) -> Result<Self> {
        let n = psi.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in psi {
            for b in psi {
                entries.push(a * b.conj());
            }
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Symmetrizes as `(M + M†)/2`, removing round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&adj.entries)
                .map(|(a, b)| (a + b) * 0.5)
                .collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for HermitianMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Real symmetric matrix (covariance matrices), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix, rejecting entries that are not symmetric to 1e-12.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(dim, entries.len())?;
        let m = Self { dim, entries };
        let dev = m.symmetry_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(m)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self::new(dim, entries)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut entries = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    fn symmetry_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += v[i] * self[(i, j)] * v[j];
            }
        }
        acc
    }

    /// Product with another matrix as a plain row-major buffer (the product of
    /// two symmetric matrices is generally not symmetric).
    pub fn matmul_raw(&self, rhs: &Self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.dim + j]
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns of `vectors` (row-major, `dim × dim`).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: HermitianMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let mut out = HermitianMatrix {
            dim: n,
            entries: vec![Complex64::new(0.0, 0.0); n * n],
        };
        for k in 0..n {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (values, vectors) = match m.dim {
        2 => eig2(m),
        _ => jacobi(m),
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let n = m.dim;
    let mut sorted = HermitianMatrix {
        dim: n,
        entries: vec![Complex64::new(0.0, 0.0); n * n],
    };
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            sorted[(i, new_k)] = vectors[(i, old_k)];
        }
    }
    Ok(EigenDecomposition {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: sorted,
    })
}

fn eig2(m: &HermitianMatrix) -> (Vec<f64>, HermitianMatrix) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    let mean = 0.5 * (a + d);
    let values = vec![mean - radius, mean + radius];
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut vectors = HermitianMatrix {
        dim: 2,
        entries: vec![one, zero, zero, one],
    };
    if b.norm() == 0.0 {
        if a > d {
            vectors.entries = vec![zero, one, one, zero];
        }
        return (values, vectors);
    }
    for (k, &lambda) in values.iter().enumerate() {
        // Two candidate null vectors of (M - λ); keep the better conditioned.
        let u = [b, Complex64::new(lambda - a, 0.0)];
        let w = [Complex64::new(lambda - d, 0.0), b.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        let (v, norm) = if nu >= nw { (u, nu) } else { (w, nw) };
        vectors[(0, k)] = v[0] / norm;
        vectors[(1, k)] = v[1] / norm;
    }
    (values, vectors)
}

fn off_diagonal_norm(a: &HermitianMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// and then applies a real Givens rotation, `A ← U† A U`, `V ← V U`.
fn jacobi(m: &HermitianMatrix) -> (Vec<f64>, HermitianMatrix) {
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = HermitianMatrix::identity(n).expect("supported dimension");
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-17 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U restricted to (p, q) = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(m)?;
    let min = eig.values[0];
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// LU determinant with partial pivoting, generic over real and complex
/// scalars. `a` is row-major `n × n` and is consumed as scratch.
fn lu_det<T>(mut a: Vec<T>, n: usize, abs: impl Fn(&T) -> f64) -> T
where
    T: Copy
        + std::ops::Mul<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Div<Output = T>
        + std::ops::Neg<Output = T>
        + From<f64>,
{
    let mut det = T::from(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| abs(&a[x * n + col]).total_cmp(&abs(&a[y * n + col])))
            .unwrap_or(col);
        if abs(&a[pivot * n + col]) == 0.0 {
            return T::from(0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            for j in col..n {
                a[row * n + j] = a[row * n + j] - f * a[col * n + j];
            }
        }
    }
    det
}

/// Determinant of a general real row-major `n × n` buffer.
pub fn det_real(entries: &[f64], n: usize) -> f64 {
    debug_assert_eq!(entries.len(), n * n);
    lu_det(entries.to_vec(), n, |x| x.abs())
}

/// Determinant of a general complex row-major `n × n` buffer.
pub fn det_complex(entries: &[Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(entries.len(), n * n);
    lu_det(entries.to_vec(), n, |z| z.norm())
}

pub fn det_sym(m: &SymmetricMatrix) -> f64 {
    match m.dim {
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        n => det_real(&m.entries, n),
    }
}

/// Inverse via Gauss–Jordan elimination with partial pivoting.
pub fn inv_sym(m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let n = m.dim;
    let det = det_sym(m);
    if det.abs() < SINGULAR_TOL {
        return Err(Error::Singular { det });
    }
    if n == 2 {
        let entries = vec![m[(1, 1)] / det, -m[(0, 1)] / det, -m[(1, 0)] / det, m[(0, 0)] / det];
        return Ok(SymmetricMatrix { dim: 2, entries });
    }
    let mut a = m.entries.clone();
    let mut inv = SymmetricMatrix::identity(n)?.entries;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .unwrap_or(col);
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[row * n + j] -= f * a[col * n + j];
                inv[row * n + j] -= f * inv[col * n + j];
            }
        }
    }
    // Restore exact symmetry lost to round-off.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = avg;
            inv[j * n + i] = avg;
        }
    }
    Ok(SymmetricMatrix { dim: n, entries: inv })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_error(m: &HermitianMatrix, eig: &EigenDecomposition) -> f64 {
        eig.reconstruct_with(|x| x).sub(m).unwrap().max_abs()
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_hermitian(&HermitianMatrix::identity(4).unwrap()).unwrap();
        for v in eig.values {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pauli_z() {
        let z = HermitianMatrix::diagonal(&[1.0, -1.0]).unwrap();
        let eig = eig_hermitian(&z).unwrap();
        assert_eq!(eig.values, vec![-1.0, 1.0]);
        assert!(reconstruction_error(&z, &eig) < 1e-15);
    }

    #[test]
    fn symmetric_2x2_matches_quadratic_formula() {
        let (a, b, d) = (0.7, -0.35, -1.2);
        let m = HermitianMatrix::from_real(2, &[a, b, b, d]).unwrap();
        let eig = eig_hermitian(&m).unwrap();
        // roots of λ² - (a+d)λ + (ad - b²)
        let tr = a + d;
        let disc = (tr * tr - 4.0 * (a * d - b * b)).sqrt();
        assert!((eig.values[0] - (tr - disc) / 2.0).abs() < 1e-14);
        assert!((eig.values[1] - (tr + disc) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn complex_4x4_reconstructs() {
        let m = HermitianMatrix::new(
            4,
            vec![
                c(1.0, 0.0),
                c(0.2, 0.3),
                c(0.0, -0.1),
                c(0.5, 0.0),
                c(0.2, -0.3),
                c(-0.4, 0.0),
                c(0.7, 0.2),
                c(0.0, 0.0),
                c(0.0, 0.1),
                c(0.7, -0.2),
                c(0.3, 0.0),
                c(-0.2, 0.6),
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(-0.2, -0.6),
                c(2.0, 0.0),
            ],
        )
        .unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert!(reconstruction_error(&m, &eig) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let vv = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
        assert!(vv.sub(&HermitianMatrix::identity(4).unwrap()).unwrap().max_abs() < 1e-12);
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_diagonal_inputs() {
        let m = HermitianMatrix::diagonal(&[3.0, 1.0, 3.0, 2.0]).unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0, 3.0]);
        assert!(reconstruction_error(&m, &eig) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.4, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(HermitianMatrix::identity(3).is_err());
        assert!(matches!(
            HermitianMatrix::new(2, vec![c(1.0, 0.0); 3]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let s = sqrt_psd(&HermitianMatrix::diagonal(&[4.0, 9.0]).unwrap()).unwrap();
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!((s[(1, 1)].re - 3.0).abs() < 1e-15);
        assert!(s[(0, 1)].norm() < 1e-15);
        let id = HermitianMatrix::identity(4).unwrap();
        assert!(sqrt_psd(&id).unwrap().sub(&id).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn sqrt_clamps_tiny_negatives_and_rejects_real_ones() {
        let tiny = HermitianMatrix::diagonal(&[1.0, -1e-13]).unwrap();
        let s = sqrt_psd(&tiny).unwrap();
        assert_eq!(s[(1, 1)].re, 0.0);
        let bad = HermitianMatrix::diagonal(&[1.0, -1e-6]).unwrap();
        assert!(matches!(sqrt_psd(&bad), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn det_and_inverse() {
        let id = SymmetricMatrix::identity(2).unwrap();
        assert_eq!(det_sym(&id), 1.0);
        assert_eq!(inv_sym(&id).unwrap(), id);
        let d = SymmetricMatrix::diagonal(&[2.5, -4.0]).unwrap();
        assert_eq!(det_sym(&d), -10.0);
        let d4 = SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((det_sym(&d4) - 24.0).abs() < 1e-14);
        let singular = SymmetricMatrix::new(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(inv_sym(&singular), Err(Error::Singular { .. })));
    }

    #[test]
    fn symmetric_constructor_rejects_asymmetry() {
        assert!(SymmetricMatrix::new(2, vec![1.0, 0.1, 0.2, 1.0]).is_err());
    }

    #[test]
    fn complex_determinant_of_triangular() {
        let m = vec![c(2.0, 1.0), c(5.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)];
        let det = det_complex(&m, 2);
        assert!((det - c(2.0, 1.0) * c(0.0, -1.0)).norm() < 1e-15);
    }
}

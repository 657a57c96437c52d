//! Two-qubit Pauli-diagonal states, general density-matrix fidelity, and the
//! single-qubit Bloch-sphere fidelity.
//!
//! A Pauli-diagonal (PD) state is `ρ = ¼(I⊗I + Σ_j c_j σ_j⊗σ_j)`. It is
//! diagonal in the Bell basis, so fidelity, negativity and discord all have
//! closed forms in terms of its four Bell-basis weights. The general-matrix
//! routines in this module ([`uhlmann_fidelity`], [`partial_transpose`],
//! [`discord_by_measurement`]) do not assume that structure and serve as
//! independent cross-checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, sqrt_psd, HermitianMatrix, PSD_CLAMP};

/// Eigenvalues above `-PHYSICAL_TOL` count as non-negative.
pub const PHYSICAL_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

/// `x log₂ x` with `0 log 0 = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Correlation coefficients of a Pauli-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliDiagonalCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl PauliDiagonalCoeffs {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn require_physical(&self) -> Result<PDEigenvalues> {
        let lambda = pd_eigenvalues(*self);
        if lambda.min() < -PHYSICAL_TOL {
            return Err(Error::Unphysical(format!(
                "Pauli-diagonal coefficients ({}, {}, {}) lie outside the tetrahedron",
                self.c1, self.c2, self.c3
            )));
        }
        Ok(lambda)
    }
}

/// Bell-basis weights `λ0..λ3` of a PD state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PDEigenvalues(pub [f64; 4]);

impl PDEigenvalues {
    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

pub fn pd_eigenvalues(c: PauliDiagonalCoeffs) -> PDEigenvalues {
    let PauliDiagonalCoeffs { c1, c2, c3 } = c;
    PDEigenvalues([
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    ])
}

pub fn is_physical_pd(c: PauliDiagonalCoeffs) -> bool {
    pd_eigenvalues(c).min() >= -PHYSICAL_TOL
}

fn pauli(j: usize) -> [Complex64; 4] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match j {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -i, i, z],
        _ => [one, z, z, -one],
    }
}

fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[2 * i + j] * b[2 * k + l];
                }
            }
        }
    }
    out
}

/// Explicit 4×4 matrix of a physical PD state in the computational basis
/// `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn pd_to_density_matrix(c: PauliDiagonalCoeffs) -> Result<HermitianMatrix> {
    c.require_physical()?;
    let mut entries = kron2(&pauli(0), &pauli(0));
    for (j, cj) in [(1, c.c1), (2, c.c2), (3, c.c3)] {
        for (e, t) in entries.iter_mut().zip(kron2(&pauli(j), &pauli(j))) {
            *e += t * cj;
        }
    }
    HermitianMatrix::new(4, entries.into_iter().map(|z| z * 0.25).collect())
}

/// Fidelity between two PD states from their Bell-basis weights.
pub fn pd_fidelity(a: PauliDiagonalCoeffs, b: PauliDiagonalCoeffs) -> Result<f64> {
    let la = a.require_physical()?;
    let lb = b.require_physical()?;
    Ok(classical_fidelity(&la.0, &lb.0))
}

/// `(Σ √(p_k q_k))²` for two probability vectors (negatives clamped to 0).
pub fn classical_fidelity(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(&x, &y)| (x.max(0.0) * y.max(0.0)).sqrt()).sum();
    (s * s).min(1.0)
}

/// Rejects anything that is not a unit-trace positive semidefinite matrix.
pub fn check_state(rho: &HermitianMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotAState(format!("trace {tr}")));
    }
    let eig = eig_hermitian(rho)?;
    if eig.values[0] < -PSD_CLAMP {
        return Err(Error::NotAState(format!("negative eigenvalue {:e}", eig.values[0])));
    }
    Ok(())
}

/// Uhlmann fidelity `(Tr √(√ρ1 ρ2 √ρ1))²`.
pub fn uhlmann_fidelity(r1: &HermitianMatrix, r2: &HermitianMatrix) -> Result<f64> {
    check_state(r1)?;
    check_state(r2)?;
    let s1 = sqrt_psd(r1)?;
    let inner = s1.matmul(r2)?.matmul(&s1)?.hermitian_part();
    let eig = eig_hermitian(&inner)?;
    if eig.values[0] < -PSD_CLAMP {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.values[0],
        });
    }
    let root_sum: f64 = eig.values.iter().map(|&x| x.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// `½ ‖ρ1 − ρ2‖₁`.
pub fn trace_distance(r1: &HermitianMatrix, r2: &HermitianMatrix) -> Result<f64> {
    check_state(r1)?;
    check_state(r2)?;
    let eig = eig_hermitian(&r1.sub(r2)?.hermitian_part())?;
    Ok(0.5 * eig.values.iter().map(|x| x.abs()).sum::<f64>())
}

/// `√(2[1 − √F])`.
pub fn bures_distance(r1: &HermitianMatrix, r2: &HermitianMatrix) -> Result<f64> {
    let f = uhlmann_fidelity(r1, r2)?;
    Ok((2.0 * (1.0 - f.sqrt())).max(0.0).sqrt())
}

/// Partial transpose with respect to the first qubit of a 4×4 matrix.
pub fn partial_transpose(rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    if rho.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    let mut out = rho.clone();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = rho[(2 * j + k, 2 * i + l)];
                }
            }
        }
    }
    Ok(out)
}

/// `−2 Σ η` over the negative eigenvalues of the partial transpose, computed
/// on an arbitrary two-qubit density matrix.
pub fn negativity_of_matrix(rho: &HermitianMatrix) -> Result<f64> {
    check_state(rho)?;
    let eig = eig_hermitian(&partial_transpose(rho)?)?;
    Ok(-2.0 * eig.values.iter().filter(|&&x| x < 0.0).sum::<f64>())
}

/// Negativity of a PD state. Transposing qubit A flips the sign of `c2`, so
/// the partial transpose is the PD form at `(c1, −c2, c3)`.
pub fn negativity(c: PauliDiagonalCoeffs) -> Result<f64> {
    c.require_physical()?;
    let pt = pd_eigenvalues(PauliDiagonalCoeffs::new(c.c1, -c.c2, c.c3));
    let n = -2.0 * pt.0.iter().filter(|&&x| x < 0.0).sum::<f64>();
    Ok(n.max(0.0))
}

/// PPT test: the partial transpose has no eigenvalue below `−1e−12`.
pub fn is_separable_pd(c: PauliDiagonalCoeffs) -> Result<bool> {
    c.require_physical()?;
    Ok(pd_eigenvalues(PauliDiagonalCoeffs::new(c.c1, -c.c2, c.c3)).min() >= -PHYSICAL_TOL)
}

/// Closed-form discord of a PD state, in bits.
pub fn pd_discord(c: PauliDiagonalCoeffs) -> Result<f64> {
    let lambda = c.require_physical()?;
    let mutual = 2.0 + lambda.0.iter().map(|&x| xlog2x(x)).sum::<f64>();
    let cmax = c.c1.abs().max(c.c2.abs()).max(c.c3.abs()).min(1.0);
    let classical = 0.5 * xlog2x(1.0 - cmax) + 0.5 * xlog2x(1.0 + cmax);
    Ok((mutual - classical).max(0.0))
}

/// Werner state `c1 = c2 = c3 = −cw`.
pub fn werner(cw: f64) -> Result<PauliDiagonalCoeffs> {
    if !(0.0..=1.0).contains(&cw) {
        return Err(Error::InvalidParameter {
            name: "cw",
            value: cw,
            reason: "Werner weight must lie in [0, 1]",
        });
    }
    Ok(PauliDiagonalCoeffs::new(-cw, -cw, -cw))
}

/// Which subsystem the local measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredSide {
    A,
    B,
}

fn entropy2(m: &[Complex64; 4]) -> f64 {
    // eigenvalues of a 2×2 Hermitian block, already normalized to trace 1
    let a = m[0].re;
    let d = m[3].re;
    let r = (0.5 * (a - d)).hypot(m[1].norm());
    let mean = 0.5 * (a + d);
    -(xlog2x(mean + r) + xlog2x(mean - r))
}

fn von_neumann_bits(rho: &HermitianMatrix) -> Result<f64> {
    let eig = eig_hermitian(rho)?;
    Ok(-eig.values.iter().map(|&x| xlog2x(x)).sum::<f64>())
}

fn swap_qubits(rho: &HermitianMatrix) -> HermitianMatrix {
    let perm = [0, 2, 1, 3];
    let mut out = rho.clone();
    for i in 0..4 {
        for j in 0..4 {
            out[(perm[i], perm[j])] = rho[(i, j)];
        }
    }
    out
}

fn reduced(rho: &HermitianMatrix, keep_first: bool) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[2 * i + j] += if keep_first {
                    rho[(2 * i + k, 2 * j + k)]
                } else {
                    rho[(2 * k + i, 2 * k + j)]
                };
            }
        }
    }
    out
}

/// Average conditional entropy of A after a projective measurement of B
/// along the Bloch direction `(θ, φ)`.
fn conditional_entropy(rho: &HermitianMatrix, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        // Π = (I + sign n·σ)/2
        let proj = [
            Complex64::new(0.5 * (1.0 + sign * n[2]), 0.0),
            Complex64::new(0.5 * sign * n[0], -0.5 * sign * n[1]),
            Complex64::new(0.5 * sign * n[0], 0.5 * sign * n[1]),
            Complex64::new(0.5 * (1.0 - sign * n[2]), 0.0),
        ];
        let mut cond = [Complex64::new(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        cond[2 * i + j] += rho[(2 * i + k, 2 * j + l)] * proj[2 * l + k];
                    }
                }
            }
        }
        let p = cond[0].re + cond[3].re;
        if p > 1e-15 {
            for z in cond.iter_mut() {
                *z /= p;
            }
            total += p * entropy2(&cond);
        }
    }
    total
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Discord of an arbitrary two-qubit state by direct minimization of the
/// post-measurement conditional entropy over projective measurements.
///
/// A 91 (polar) × 181 (azimuth) grid locates the basin, then alternating
/// golden-section searches refine both angles to 1e−8.
pub fn discord_by_measurement(rho: &HermitianMatrix, side: MeasuredSide) -> Result<f64> {
    check_state(rho)?;
    let rho = match side {
        MeasuredSide::B => rho.clone(),
        MeasuredSide::A => swap_qubits(rho),
    };
    let pi = std::f64::consts::PI;
    let (n_theta, n_phi) = (91, 181);
    let d_theta = pi / (n_theta - 1) as f64;
    let d_phi = 2.0 * pi / (n_phi - 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n_theta {
        let theta = i as f64 * d_theta;
        for j in 0..n_phi {
            let phi = j as f64 * d_phi;
            let s = conditional_entropy(&rho, theta, phi);
            if s < best.0 {
                best = (s, theta, phi);
            }
        }
    }
    let (mut s_min, mut theta, mut phi) = best;
    for _ in 0..40 {
        let (t, st) = golden_section(
            |t| conditional_entropy(&rho, t, phi),
            theta - d_theta,
            theta + d_theta,
            1e-8,
        );
        let (p, sp) = golden_section(|p| conditional_entropy(&rho, t, p), phi - d_phi, phi + d_phi, 1e-8);
        let improved = st.min(sp);
        let moved = (t - theta).abs().max((p - phi).abs());
        if improved < s_min {
            s_min = improved;
            theta = t;
            phi = p;
        }
        if moved < 1e-8 {
            break;
        }
    }
    let rho_b = reduced(&rho, false);
    let s_b = entropy2(&rho_b);
    let s_ab = von_neumann_bits(&rho)?;
    Ok((s_b - s_ab + s_min).max(0.0))
}

/// Single-qubit Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub const fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.rx * self.rx + self.ry * self.ry + self.rz * self.rz
    }

    pub fn is_physical(&self) -> bool {
        self.norm_sqr() <= 1.0 + PHYSICAL_TOL
    }

    /// `½(I + r·σ)`.
    pub fn density_matrix(&self) -> Result<HermitianMatrix> {
        if !self.is_physical() {
            return Err(Error::Unphysical(format!(
                "Bloch vector length {} exceeds 1",
                self.norm_sqr().sqrt()
            )));
        }
        HermitianMatrix::new(
            2,
            vec![
                Complex64::new(0.5 * (1.0 + self.rz), 0.0),
                Complex64::new(0.5 * self.rx, -0.5 * self.ry),
                Complex64::new(0.5 * self.rx, 0.5 * self.ry),
                Complex64::new(0.5 * (1.0 - self.rz), 0.0),
            ],
        )
    }
}

/// Fidelity of the qubit `ρ(r)` to the pure state `|0⟩`, i.e. `⟨0|ρ|0⟩`.
pub fn qubit_fidelity_to_zero(r: BlochVector) -> Result<f64> {
    if !r.is_physical() {
        return Err(Error::Unphysical(format!(
            "Bloch vector length {} exceeds 1",
            r.norm_sqr().sqrt()
        )));
    }
    Ok(0.5 * (1.0 + r.rz))
}

/// Fidelity between two single-qubit states,
/// `½(1 + r·t + √(1−|r|²)√(1−|t|²))`.
pub fn qubit_fidelity(r: BlochVector, t: BlochVector) -> Result<f64> {
    for v in [r, t] {
        if !v.is_physical() {
            return Err(Error::Unphysical(format!(
                "Bloch vector length {} exceeds 1",
                v.norm_sqr().sqrt()
            )));
        }
    }
    let dot = r.rx * t.rx + r.ry * t.ry + r.rz * t.rz;
    let mixed = (1.0 - r.norm_sqr()).max(0.0).sqrt() * (1.0 - t.norm_sqr()).max(0.0).sqrt();
    Ok((0.5 * (1.0 + dot + mixed)).clamp(0.0, 1.0))
}

/// Fidelity to a target together with the resources of a PD state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceReport {
    pub fidelity_to_target: f64,
    pub negativity: f64,
    pub discord: f64,
    pub separable: bool,
}

pub fn resource_report(state: PauliDiagonalCoeffs, target: PauliDiagonalCoeffs) -> Result<ResourceReport> {
    Ok(ResourceReport {
        fidelity_to_target: pd_fidelity(state, target)?,
        negativity: negativity(state)?,
        discord: pd_discord(state)?,
        separable: is_separable_pd(state)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(c1: f64, c2: f64, c3: f64) -> PauliDiagonalCoeffs {
        PauliDiagonalCoeffs::new(c1, c2, c3)
    }

    #[test]
    fn eigenvalues_known_points() {
        assert_eq!(pd_eigenvalues(pd(0.0, 0.0, 0.0)).0, [0.25; 4]);
        assert_eq!(pd_eigenvalues(pd(-1.0, -1.0, -1.0)).0, [1.0, 0.0, 0.0, 0.0]);
        let w = pd_eigenvalues(pd(-0.45, -0.45, -0.45)).0;
        for (x, y) in w.iter().zip([0.5875, 0.1375, 0.1375, 0.1375]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn werner_eigenvalues_match_explicit_matrix() {
        let rho = pd_to_density_matrix(pd(-0.45, -0.45, -0.45)).unwrap();
        let eig = eig_hermitian(&rho).unwrap();
        let mut expected = pd_eigenvalues(pd(-0.45, -0.45, -0.45)).0;
        expected.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn physicality() {
        assert!(is_physical_pd(pd(0.0, 0.0, 0.0)));
        assert!(!is_physical_pd(pd(1.0, 1.0, 1.0)));
        assert!(is_physical_pd(pd(0.3, -0.3, 0.1)));
        assert!(pd_to_density_matrix(pd(1.0, 1.0, 1.0)).is_err());
        assert!(negativity(pd(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn density_matrix_known_points() {
        let mixed = pd_to_density_matrix(pd(0.0, 0.0, 0.0)).unwrap();
        let quarter = HermitianMatrix::identity(4).unwrap().scale(0.25);
        assert!(mixed.sub(&quarter).unwrap().max_abs() < 1e-15);

        let singlet = pd_to_density_matrix(pd(-1.0, -1.0, -1.0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [0.0, s, -s, 0.0].map(|x| Complex64::new(x, 0.0));
        let proj = HermitianMatrix::outer(&psi).unwrap();
        assert!(singlet.sub(&proj).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn marginals_are_maximally_mixed() {
        let rho = pd_to_density_matrix(pd(0.2, -0.5, 0.1)).unwrap();
        for keep_first in [true, false] {
            let r = reduced(&rho, keep_first);
            assert!((r[0].re - 0.5).abs() < 1e-15 && (r[3].re - 0.5).abs() < 1e-15);
            assert!(r[1].norm() < 1e-15);
        }
    }

    #[test]
    fn fidelity_special_cases() {
        let a = pd(0.2, -0.1, 0.4);
        assert!((pd_fidelity(a, a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(pd_fidelity(pd(-1.0, -1.0, -1.0), pd(1.0, 1.0, -1.0)).unwrap(), 0.0);
    }

    #[test]
    fn fidelity_matches_uhlmann_for_werner_vs_separable() {
        let a = pd(-0.45, -0.45, -0.45);
        let b = pd(0.3, -0.3, 0.1);
        let closed = pd_fidelity(a, b).unwrap();
        let general = uhlmann_fidelity(&pd_to_density_matrix(a).unwrap(), &pd_to_density_matrix(b).unwrap()).unwrap();
        assert!((closed - general).abs() < 1e-10);
    }

    #[test]
    fn uhlmann_pure_and_classical() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let phi = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
        let f = uhlmann_fidelity(
            &HermitianMatrix::outer(&psi).unwrap(),
            &HermitianMatrix::outer(&phi).unwrap(),
        )
        .unwrap();
        assert!((f - 0.5).abs() < 1e-12);

        let p = [0.1, 0.2, 0.3, 0.4];
        let q = [0.4, 0.3, 0.2, 0.1];
        let f = uhlmann_fidelity(
            &HermitianMatrix::diagonal(&p).unwrap(),
            &HermitianMatrix::diagonal(&q).unwrap(),
        )
        .unwrap();
        assert!((f - classical_fidelity(&p, &q)).abs() < 1e-12);
    }

    #[test]
    fn distances_for_equal_and_orthogonal_states() {
        let rho = pd_to_density_matrix(pd(0.1, 0.2, -0.3)).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
        assert!(bures_distance(&rho, &rho).unwrap() < 1e-6);

        let up = BlochVector::new(0.0, 0.0, 1.0).density_matrix().unwrap();
        let down = BlochVector::new(0.0, 0.0, -1.0).density_matrix().unwrap();
        assert!((trace_distance(&up, &down).unwrap() - 1.0).abs() < 1e-12);
        assert!(uhlmann_fidelity(&up, &down).unwrap() < 1e-12);
        assert!((bures_distance(&up, &down).unwrap() - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_states() {
        let bad = HermitianMatrix::diagonal(&[0.7, 0.7]).unwrap();
        let ok = HermitianMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(uhlmann_fidelity(&bad, &ok), Err(Error::NotAState(_))));
        let neg = HermitianMatrix::diagonal(&[1.1, -0.1]).unwrap();
        assert!(matches!(trace_distance(&neg, &ok), Err(Error::NotAState(_))));
    }

    #[test]
    fn negativity_known_points() {
        assert_eq!(negativity(pd(0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert!((negativity(pd(-1.0, -1.0, -1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((negativity(pd(-0.45, -0.45, -0.45)).unwrap() - 0.175).abs() < 1e-15);
    }

    #[test]
    fn negativity_matches_explicit_partial_transpose() {
        for c in [
            pd(-1.0, -1.0, -1.0),
            pd(-0.45, -0.45, -0.45),
            pd(0.3, -0.3, 0.1),
            pd(0.6, -0.7, 0.5),
        ] {
            let rho = pd_to_density_matrix(c).unwrap();
            let oracle = negativity_of_matrix(&rho).unwrap();
            assert!((negativity(c).unwrap() - oracle).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn werner_threshold() {
        assert_eq!(negativity(werner(0.0).unwrap()).unwrap(), 0.0);
        assert_eq!(negativity(werner(1.0 / 3.0).unwrap()).unwrap(), 0.0);
        assert!(negativity(werner(1.0 / 3.0 + 1e-9).unwrap()).unwrap() > 0.0);
        assert!((negativity(werner(0.45).unwrap()).unwrap() - 0.175).abs() < 1e-15);
        assert!(werner(1.2).is_err());
        assert!(werner(-0.1).is_err());
    }

    #[test]
    fn discord_known_points() {
        assert_eq!(pd_discord(pd(0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert!((pd_discord(pd(-1.0, -1.0, -1.0)).unwrap() - 1.0).abs() < 1e-15);
        let singlet = pd_to_density_matrix(pd(-1.0, -1.0, -1.0)).unwrap();
        let brute = discord_by_measurement(&singlet, MeasuredSide::B).unwrap();
        assert!((brute - 1.0).abs() < 1e-6);
    }

    #[test]
    fn werner_discord_matches_measurement_search() {
        let c = pd(-0.45, -0.45, -0.45);
        let rho = pd_to_density_matrix(c).unwrap();
        let closed = pd_discord(c).unwrap();
        for side in [MeasuredSide::A, MeasuredSide::B] {
            let brute = discord_by_measurement(&rho, side).unwrap();
            assert!((closed - brute).abs() < 1e-6, "{side:?}: {closed} vs {brute}");
        }
    }

    #[test]
    fn discord_vanishes_continuously_at_origin() {
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let eps = 10f64.powi(-k);
            let d = pd_discord(pd(eps, -eps / 2.0, eps / 3.0)).unwrap();
            assert!(d >= 0.0 && d < prev);
            prev = d;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn bloch_fidelity() {
        assert_eq!(qubit_fidelity_to_zero(BlochVector::new(0.0, 0.0, 1.0)).unwrap(), 1.0);
        assert!((qubit_fidelity_to_zero(BlochVector::new(0.0, 0.0, 0.8)).unwrap() - 0.9).abs() < 1e-15);
        let r = BlochVector::new(0.3, 0.0, 0.85);
        let closed = qubit_fidelity_to_zero(r).unwrap();
        assert!((closed - 0.925).abs() < 1e-15);
        let zero = BlochVector::new(0.0, 0.0, 1.0).density_matrix().unwrap();
        let oracle = uhlmann_fidelity(&r.density_matrix().unwrap(), &zero).unwrap();
        assert!((closed - oracle).abs() < 1e-10);
        assert!(qubit_fidelity_to_zero(BlochVector::new(0.8, 0.0, 0.8)).is_err());
    }

    #[test]
    fn general_qubit_fidelity_matches_uhlmann() {
        let r = BlochVector::new(0.2, -0.4, 0.5);
        let t = BlochVector::new(-0.1, 0.3, 0.6);
        let oracle = uhlmann_fidelity(&r.density_matrix().unwrap(), &t.density_matrix().unwrap()).unwrap();
        assert!((qubit_fidelity(r, t).unwrap() - oracle).abs() < 1e-10);
        let up = BlochVector::new(0.0, 0.0, 1.0);
        assert_eq!(qubit_fidelity(r, up).unwrap(), qubit_fidelity_to_zero(r).unwrap());
    }

    #[test]
    fn report_flags_separability() {
        let r = resource_report(pd(0.3, -0.3, 0.1), pd(0.3, -0.3, 0.1)).unwrap();
        assert!(r.separable);
        assert!((r.fidelity_to_target - 1.0).abs() < 1e-15);
        let r = resource_report(werner(0.45).unwrap(), pd(0.3, -0.3, 0.1)).unwrap();
        assert!(!r.separable);
    }
}

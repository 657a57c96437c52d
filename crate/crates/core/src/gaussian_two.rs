//! Two-mode squeezed thermal states parametrized by total photon number `N`,
//! two-mode squeezing fraction `β` and thermal fraction `γ`.
//!
//! The covariance matrix is `½[[A·I, C·σz], [C·σz, B·I]]` (vacuum = `I/2`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian_single::{fidelity_sts1, STS1Params};
use crate::matrix::{det_complex, det_real, det_sym, SymmetricMatrix};

const SPECTRUM_TOL: f64 = 1e-12;
/// Separability threshold slack on the partial-transpose eigenvalue.
pub const SEPARABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct STS2Params {
    pub n_tot: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl STS2Params {
    pub fn new(n_tot: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self { n_tot, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_tot >= 0.0 && self.n_tot.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "n",
                value: self.n_tot,
                reason: "total photon number must be non-negative",
            });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: self.beta,
                reason: "squeezing fraction must lie in [0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                reason: "thermal fraction must lie in [0, 1]",
            });
        }
        Ok(())
    }

    /// The same state with the two modes' thermal photons exchanged.
    pub fn gamma_swapped(&self) -> Self {
        Self {
            gamma: 1.0 - self.gamma,
            ..*self
        }
    }

    /// `sinh² r = βN/2`.
    pub fn squeezing(&self) -> f64 {
        (0.5 * self.beta * self.n_tot).sqrt().asinh()
    }

    /// Thermal photons `(n1, n2)` of the two modes before squeezing.
    pub fn thermal_photons(&self) -> (f64, f64) {
        let thermal = (1.0 - self.beta) * self.n_tot / (1.0 + self.beta * self.n_tot);
        (self.gamma * thermal, (1.0 - self.gamma) * thermal)
    }
}

/// The `A`, `B`, `C` coefficients of the block covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CMCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CMCoeffs {
    pub fn covariance_matrix(&self) -> SymmetricMatrix {
        let (a, b, c) = (0.5 * self.a, 0.5 * self.b, 0.5 * self.c);
        #[rustfmt::skip]
        let entries = vec![
            a,   0.0, c,   0.0,
            0.0, a,   0.0, -c,
            c,   0.0, b,   0.0,
            0.0, -c,  0.0, b,
        ];
        SymmetricMatrix::new(4, entries).expect("block form is symmetric")
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }
}

pub fn sts2_coeffs(p: STS2Params) -> Result<CMCoeffs> {
    p.validate()?;
    let STS2Params { n_tot: n, beta, gamma } = p;
    let bn = beta * n;
    let denom = 1.0 + bn;
    Ok(CMCoeffs {
        a: 1.0 + (2.0 * gamma * (1.0 - beta) * n + bn * (1.0 + n)) / denom,
        b: 1.0 + (2.0 * (1.0 - gamma) * (1.0 - beta) * n + bn * (1.0 + n)) / denom,
        c: (1.0 + n) * (bn * (2.0 + bn)).sqrt() / denom,
    })
}

pub fn sts2_cm(p: STS2Params) -> Result<SymmetricMatrix> {
    Ok(sts2_coeffs(p)?.covariance_matrix())
}

/// Symplectic eigenvalues of the covariance matrix and of its partial
/// transpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub d_minus: f64,
    pub d_plus: f64,
    pub dt_minus: f64,
    pub dt_plus: f64,
}

/// `d±² = (Δ ± √(Δ² − 4 det σ))/2`, with `Δ = (A² + B² ∓ 2C²)/4` for the
/// plain and partially transposed matrices and `det σ = (AB − C²)²/16`.
pub fn symplectic_spectrum(m: CMCoeffs) -> Result<SymplecticSpectrum> {
    let det = (m.a * m.b - m.c * m.c).powi(2) / 16.0;
    let pair = |delta: f64| -> Result<(f64, f64)> {
        let disc = delta * delta - 4.0 * det;
        if disc < -SPECTRUM_TOL * delta.abs().max(1.0) {
            return Err(Error::Unphysical(format!("negative symplectic discriminant {disc:e}")));
        }
        let root = disc.max(0.0).sqrt();
        let plus = 0.5 * (delta + root);
        // minus via det/plus, accurate even when the two roots are far apart
        let minus = if plus > 0.0 { det / plus } else { 0.0 };
        Ok((minus.max(0.0).sqrt(), plus.sqrt()))
    };
    let (d_minus, d_plus) = pair(0.25 * (m.a * m.a + m.b * m.b - 2.0 * m.c * m.c))?;
    let (dt_minus, dt_plus) = pair(0.25 * (m.a * m.a + m.b * m.b + 2.0 * m.c * m.c))?;
    if d_minus < 0.5 - SPECTRUM_TOL {
        return Err(Error::Unphysical(format!("symplectic eigenvalue {d_minus} below 1/2")));
    }
    Ok(SymplecticSpectrum {
        d_minus,
        d_plus,
        dt_minus,
        dt_plus,
    })
}

/// PPT separability: `d̃− ≥ ½`.
pub fn is_separable(p: STS2Params) -> Result<bool> {
    let spec = symplectic_spectrum(sts2_coeffs(p)?)?;
    Ok(spec.dt_minus >= 0.5 - SEPARABILITY_TOL)
}

/// `h(x) = (x+½) ln(x+½) − (x−½) ln(x−½)`, with `h(½) = 0`.
pub fn gaussian_entropy(x: f64) -> f64 {
    let plus = x + 0.5;
    let minus = x - 0.5;
    let lead = plus * plus.ln();
    let tail = if minus > 0.0 { minus * minus.ln() } else { 0.0 };
    lead - tail
}

/// Gaussian discord with Gaussian measurements on mode B, in nats:
/// `h(B/2) − h(d−) − h(d+) + h((A − C²/(B+1))/2)`.
pub fn gaussian_b_discord(p: STS2Params) -> Result<f64> {
    let m = sts2_coeffs(p)?;
    let spec = symplectic_spectrum(m)?;
    let conditional = 0.5 * (m.a - m.c * m.c / (m.b + 1.0));
    let d = gaussian_entropy(0.5 * m.b) - gaussian_entropy(spec.d_minus) - gaussian_entropy(spec.d_plus)
        + gaussian_entropy(conditional);
    Ok(d.max(0.0))
}

fn symplectic_form() -> [f64; 16] {
    #[rustfmt::skip]
    let omega = [
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    ];
    omega
}

fn mul4(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 16];
    for i in 0..4 {
        for k in 0..4 {
            let a = x[i * 4 + k];
            for j in 0..4 {
                out[i * 4 + j] += a * y[k * 4 + j];
            }
        }
    }
    out
}

/// `det(σ + iΩ/2)`.
fn det_plus_half_omega(sigma: &SymmetricMatrix) -> f64 {
    let omega = symplectic_form();
    let m: Vec<Complex64> = sigma
        .entries()
        .iter()
        .zip(omega)
        .map(|(&s, w)| Complex64::new(s, 0.5 * w))
        .collect();
    det_complex(&m, 4).re
}

/// Zero-mean two-mode Gaussian fidelity from determinant invariants:
/// `F = (√X + √(X−1))² / √Δ` with `Δ = det(σ1+σ2)`,
/// `X = 2√E1 + 2√E2 + ½`, `E1 = det(Ωσ1Ωσ2 − I/4)/Δ` and
/// `E2 = det(σ1 + iΩ/2) det(σ2 + iΩ/2)/Δ`.
pub fn fidelity_two_mode(s1: &SymmetricMatrix, s2: &SymmetricMatrix) -> Result<f64> {
    if s1.dim() != 4 || s2.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: if s1.dim() != 4 { s1.dim() } else { s2.dim() },
        });
    }
    let omega = symplectic_form();
    let delta = det_sym(&s1.add(s2)?);
    let mut prod = mul4(&mul4(&omega, s1.entries()), &mul4(&omega, s2.entries()));
    for i in 0..4 {
        prod[i * 5] -= 0.25;
    }
    let e1 = (det_real(&prod, 4) / delta).max(0.0);
    let e2 = (det_plus_half_omega(s1) * det_plus_half_omega(s2) / delta).max(0.0);
    let x = 2.0 * e1.sqrt() + 2.0 * e2.sqrt() + 0.5;
    let root = (x.sqrt() + (x - 1.0).max(0.0).sqrt()).powi(2);
    Ok((root / delta.sqrt()).min(1.0))
}

pub fn fidelity_sts2(p1: STS2Params, p2: STS2Params) -> Result<f64> {
    fidelity_two_mode(&sts2_cm(p1)?, &sts2_cm(p2)?)
}

/// Total photon number recovered from the covariance matrix, `(Tr σ − 2)/2`.
pub fn photons_from_cm(m: CMCoeffs) -> f64 {
    0.5 * (m.covariance_matrix().trace() - 2.0)
}

pub fn mean_total_photons(p: STS2Params) -> f64 {
    p.n_tot
}

fn thermal_fock(n: f64, cutoff: usize) -> Vec<f64> {
    let ratio = n / (n + 1.0);
    let mut p = 1.0 / (n + 1.0);
    (0..cutoff)
        .map(|_| {
            let cur = p;
            p *= ratio;
            cur
        })
        .collect()
}

/// Fock-truncation fidelity for the two sub-families with known sparse
/// structure: two-mode squeezed vacua (`β = 1`, pure and diagonal in the
/// pair basis `|n, n⟩`) and thermal products (`β = 0`, diagonal).
pub fn two_mode_fock_fidelity(p1: STS2Params, p2: STS2Params, cutoff: usize) -> Result<f64> {
    p1.validate()?;
    p2.validate()?;
    let is_tmsv = |p: &STS2Params| p.beta == 1.0 || p.n_tot == 0.0;
    if is_tmsv(&p1) && is_tmsv(&p2) {
        // |ψ⟩ = Σ tanhⁿ r / cosh r |n, n⟩
        let amps = |p: &STS2Params| -> Vec<f64> {
            let r = p.squeezing();
            let t = r.tanh();
            (0..cutoff).map(|n| t.powi(n as i32) / r.cosh()).collect()
        };
        let overlap: f64 = amps(&p1).iter().zip(amps(&p2)).map(|(a, b)| a * b).sum();
        return Ok(overlap * overlap);
    }
    if p1.beta == 0.0 && p2.beta == 0.0 {
        let (a1, b1) = p1.thermal_photons();
        let (a2, b2) = p2.thermal_photons();
        let (pa1, pb1) = (thermal_fock(a1, cutoff), thermal_fock(b1, cutoff));
        let (pa2, pb2) = (thermal_fock(a2, cutoff), thermal_fock(b2, cutoff));
        let mut s = 0.0;
        for i in 0..cutoff {
            for j in 0..cutoff {
                s += (pa1[i] * pb1[j] * pa2[i] * pb2[j]).sqrt();
            }
        }
        return Ok(s * s);
    }
    Err(Error::Unsupported(
        "two-mode Fock oracle covers beta = 1 or beta = 0 pairs only".into(),
    ))
}

/// Single-mode thermal parameters of one mode of a `β = 0` state.
pub fn thermal_mode(n: f64) -> Result<STS1Params> {
    STS1Params::new(1.0, 1.0 / (2.0 * n + 1.0))
}

/// Product of the per-mode single-mode fidelities of two `β = 0` states.
pub fn thermal_product_fidelity(p1: STS2Params, p2: STS2Params) -> Result<f64> {
    if p1.beta != 0.0 || p2.beta != 0.0 {
        return Err(Error::Unsupported("thermal product requires beta = 0".into()));
    }
    let (a1, b1) = p1.thermal_photons();
    let (a2, b2) = p2.thermal_photons();
    Ok(fidelity_sts1(thermal_mode(a1)?, thermal_mode(a2)?)? * fidelity_sts1(thermal_mode(b1)?, thermal_mode(b2)?)?)
}

//! Single-mode squeezed thermal states and their displaced versions.
//!
//! Convention: the vacuum covariance matrix is `I/2` and a coherent state
//! `|α⟩` has mean vector `(Re α, Im α)`. Under this convention the coherent
//! overlap is `exp{−|α1 − α2|²}` and the mean photon number of `|α⟩` is `|α|²`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{det_sym, inv_sym, SymmetricMatrix};

const UNCERTAINTY_TOL: f64 = 1e-12;
/// Mean photon numbers below this make the Fano factor undefined.
pub const FANO_MEAN_FLOOR: f64 = 1e-12;
/// Fock truncation stops growing once the captured trace reaches `1 − this`.
pub const FOCK_TRACE_DEFICIT: f64 = 1e-8;
/// Bound on `cutoff² · deficit` for the adaptive oracle.
pub const FOCK_MOMENT_TAIL: f64 = 1e-9;
const FOCK_START_CUTOFF: usize = 30;
const FOCK_MAX_CUTOFF: usize = 960;

/// Squeezing factor `s = e^{−2r}` and purity `μ = 1/(2N+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct STS1Params {
    pub s: f64,
    pub mu: f64,
}

impl STS1Params {
    pub fn new(s: f64, mu: f64) -> Result<Self> {
        let p = Self { s, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "s",
                value: self.s,
                reason: "squeezing factor must be positive",
            });
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: self.mu,
                reason: "purity must lie in (0, 1]",
            });
        }
        Ok(())
    }

    /// Mean thermal photon number before squeezing.
    pub fn thermal_photons(&self) -> f64 {
        0.5 * (1.0 / self.mu - 1.0)
    }

    /// Squeezing parameter `r = −½ ln s`.
    pub fn squeezing(&self) -> f64 {
        -0.5 * self.s.ln()
    }
}

/// Mean vector and 2×2 covariance matrix of a single-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeGaussian {
    pub mean: [f64; 2],
    pub cm: SymmetricMatrix,
}

impl SingleModeGaussian {
    pub fn new(mean: [f64; 2], cm: SymmetricMatrix) -> Result<Self> {
        let g = Self { mean, cm };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cm.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: self.cm.dim(),
            });
        }
        let det = det_sym(&self.cm);
        if self.cm[(0, 0)] <= 0.0 || det < 0.25 - UNCERTAINTY_TOL {
            return Err(Error::Unphysical(format!(
                "covariance matrix violates the uncertainty relation (det = {det})"
            )));
        }
        Ok(())
    }

    /// `(2√det σ)^{−1}`.
    pub fn purity(&self) -> f64 {
        1.0 / (2.0 * det_sym(&self.cm).sqrt())
    }
}

pub fn sts1_cm(p: STS1Params) -> Result<SingleModeGaussian> {
    p.validate()?;
    let k = 1.0 / (2.0 * p.mu);
    Ok(SingleModeGaussian {
        mean: [0.0, 0.0],
        cm: SymmetricMatrix::diagonal(&[k / p.s, k * p.s])?,
    })
}

/// Glauber-P nonclassicality of a squeezed thermal state: `s < μ` or `s > 1/μ`.
pub fn is_nonclassical_sts1(p: STS1Params) -> bool {
    p.s < p.mu || p.s > 1.0 / p.mu
}

/// Covariance part of the single-mode Gaussian fidelity,
/// `1/(√(Δ+δ) − √δ)` with `Δ = det(σ1+σ2)`, `δ = 4Π(det σ_k − ¼)`.
fn covariance_fidelity(s1: &SymmetricMatrix, s2: &SymmetricMatrix) -> Result<f64> {
    let big = det_sym(&s1.add(s2)?);
    let small = 4.0 * (det_sym(s1) - 0.25).max(0.0) * (det_sym(s2) - 0.25).max(0.0);
    // 1/(√(Δ+δ) − √δ) = (√(Δ+δ) + √δ)/Δ, free of cancellation
    Ok(((big + small).sqrt() + small.sqrt()) / big)
}

pub fn fidelity_sts1(a: STS1Params, b: STS1Params) -> Result<f64> {
    let ga = sts1_cm(a)?;
    let gb = sts1_cm(b)?;
    Ok(covariance_fidelity(&ga.cm, &gb.cm)?.min(1.0))
}

/// Squeezed thermal state displaced along the x quadrature, mean `(x, 0)`.
pub fn displaced_sts1(p: STS1Params, x: f64) -> Result<SingleModeGaussian> {
    let mut g = sts1_cm(p)?;
    g.mean = [x, 0.0];
    Ok(g)
}

pub fn fidelity_gaussian1(g1: &SingleModeGaussian, g2: &SingleModeGaussian) -> Result<f64> {
    g1.validate()?;
    g2.validate()?;
    let sum = g1.cm.add(&g2.cm)?;
    let inv = inv_sym(&sum)?;
    let d = [g1.mean[0] - g2.mean[0], g1.mean[1] - g2.mean[1]];
    let displacement = (-inv.quadratic_form(&d)).exp();
    Ok((displacement * covariance_fidelity(&g1.cm, &g2.cm)?).min(1.0))
}

/// First two photon-number moments and the Fano factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonStatistics {
    pub mean_n: f64,
    pub var_n: f64,
    /// `None` when the mean photon number vanishes.
    pub fano: Option<f64>,
}

impl PhotonStatistics {
    fn from_moments(mean_n: f64, var_n: f64) -> Self {
        let fano = (mean_n >= FANO_MEAN_FLOOR).then(|| var_n / mean_n);
        Self { mean_n, var_n, fano }
    }
}

/// Closed-form moments: `⟨n⟩ = (Tr σ − 1)/2 + |X|²` and
/// `⟨Δn²⟩ = ½(Tr σ² − ½) + 2 Xᵀσ X`.
pub fn photon_stats(g: &SingleModeGaussian) -> Result<PhotonStatistics> {
    g.validate()?;
    let sigma = &g.cm;
    let tr = sigma.trace();
    let tr_sq: f64 = sigma.entries().iter().map(|x| x * x).sum();
    let x2 = g.mean[0] * g.mean[0] + g.mean[1] * g.mean[1];
    let mean_n = (0.5 * (tr - 1.0) + x2).max(0.0);
    let var_n = (0.5 * (tr_sq - 0.5) + 2.0 * sigma.quadratic_form(&g.mean)).max(0.0);
    Ok(PhotonStatistics::from_moments(mean_n, var_n))
}

/// Sub-Poissonian photon statistics (`R < 1`).
pub fn is_subpoissonian(g: &SingleModeGaussian) -> Result<bool> {
    let stats = photon_stats(g)?;
    stats
        .fano
        .map(|r| r < 1.0)
        .ok_or_else(|| Error::Unsupported("Fano factor undefined for zero mean photon number".into()))
}

/// Truncated Fock-space representation of a displaced squeezed thermal state,
/// kept as an explicit mixture `ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|` with
/// `|ψ_k⟩ = D(x) S(r) |k⟩`.
#[derive(Debug, Clone)]
pub struct FockState {
    pub cutoff: usize,
    weights: Vec<f64>,
    /// `cutoff × K` matrix whose columns are the truncated `|ψ_k⟩`.
    vectors: DMatrix<f64>,
    pub trace_deficit: f64,
}

impl FockState {
    /// Dense `cutoff × cutoff` density matrix.
    pub fn density_matrix(&self) -> DMatrix<f64> {
        let scaled = self.scaled_factor();
        &scaled * scaled.transpose()
    }

    /// `A` with `ρ = A Aᵀ`.
    fn scaled_factor(&self) -> DMatrix<f64> {
        let mut a = self.vectors.clone();
        for (k, w) in self.weights.iter().enumerate() {
            a.column_mut(k).scale_mut(w.sqrt());
        }
        a
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.cutoff)
            .map(|n| {
                self.weights
                    .iter()
                    .enumerate()
                    .map(|(k, w)| w * self.vectors[(n, k)].powi(2))
                    .sum()
            })
            .collect()
    }

    pub fn photon_stats(&self) -> PhotonStatistics {
        let pops = self.populations();
        let norm: f64 = pops.iter().sum();
        let m1: f64 = pops.iter().enumerate().map(|(n, p)| n as f64 * p).sum::<f64>() / norm;
        let m2: f64 = pops.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum::<f64>() / norm;
        PhotonStatistics::from_moments(m1, m2 - m1 * m1)
    }

    fn resized(&self, cutoff: usize) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(cutoff, self.vectors.ncols());
        let rows = cutoff.min(self.cutoff);
        a.view_mut((0, 0), (rows, self.vectors.ncols()))
            .copy_from(&self.scaled_factor().rows(0, rows));
        a
    }
}

/// Uhlmann fidelity of two truncated Fock states, computed as the squared
/// nuclear norm of `A1ᵀ A2` where `ρ_i = A_i A_iᵀ`.
pub fn fock_fidelity(a: &FockState, b: &FockState) -> f64 {
    let cutoff = a.cutoff.max(b.cutoff);
    let overlap = a.resized(cutoff).transpose() * b.resized(cutoff);
    let nuclear: f64 = overlap.singular_values().iter().sum();
    nuclear * nuclear
}

fn diagonal_params(g: &SingleModeGaussian) -> Result<(f64, f64, f64)> {
    g.validate()?;
    let (a, b) = (g.cm[(0, 0)], g.cm[(1, 1)]);
    if g.cm[(0, 1)].abs() > 1e-14 || g.mean[1].abs() > 1e-14 {
        return Err(Error::Unsupported(
            "Fock oracle handles diagonal covariance matrices with mean (x, 0) only".into(),
        ));
    }
    let mu = 1.0 / (2.0 * (a * b).sqrt());
    let s = (b / a).sqrt();
    Ok((s, mu.min(1.0), g.mean[0]))
}

fn apply_ladder(v: &[f64], cosh: f64, sinh: f64, x: f64, out: &mut [f64]) {
    // L = cosh r (a† − x) − sinh r (a − x)
    let n = v.len();
    let shift = x * (sinh - cosh);
    for m in 0..n {
        let mut acc = shift * v[m];
        if m > 0 {
            acc += cosh * (m as f64).sqrt() * v[m - 1];
        }
        if m + 1 < n {
            acc -= sinh * ((m + 1) as f64).sqrt() * v[m + 1];
        }
        out[m] = acc;
    }
}

/// `exp{x(a† − a)} v` by scaled Taylor steps. The generator is real
/// antisymmetric in the truncated space, so the map stays norm preserving.
fn displace(v: &[f64], x: f64) -> Vec<f64> {
    if x == 0.0 {
        return v.to_vec();
    }
    let n = v.len();
    let steps = (2.0 * x.abs() * (n as f64).sqrt()).ceil().max(1.0) as usize;
    let h = x / steps as f64;
    let mut cur = v.to_vec();
    let mut term = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        term.copy_from_slice(&cur);
        let mut acc = cur.clone();
        for order in 1..60 {
            for m in 0..n {
                let mut t = 0.0;
                if m > 0 {
                    t += (m as f64).sqrt() * term[m - 1];
                }
                if m + 1 < n {
                    t -= ((m + 1) as f64).sqrt() * term[m + 1];
                }
                next[m] = t * h / order as f64;
            }
            std::mem::swap(&mut term, &mut next);
            let mut size = 0.0_f64;
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
                size = size.max(t.abs());
            }
            if size < 1e-18 {
                break;
            }
        }
        cur = acc;
    }
    cur
}

fn build_fock(s: f64, mu: f64, x: f64, cutoff: usize) -> FockState {
    let work = 2 * cutoff + 20;
    let r = -0.5 * s.ln();
    let (cosh, sinh, tanh) = (r.cosh(), r.sinh(), r.tanh());
    let n_th = 0.5 * (1.0 / mu - 1.0);

    // thermal weights p_k = N^k/(N+1)^{k+1}, truncated once the tail is negligible
    let mut weights = Vec::new();
    let ratio = n_th / (n_th + 1.0);
    let mut p = 1.0 / (n_th + 1.0);
    let mut captured = 0.0;
    while weights.len() < work / 2 {
        weights.push(p);
        captured += p;
        if 1.0 - captured < 1e-14 || p == 0.0 {
            break;
        }
        p *= ratio;
    }

    // S(r)|0⟩ = (cosh r)^{-1/2} Σ (tanh r / 2)^n √(2n)!/n! |2n⟩
    let mut vacuum = vec![0.0; work];
    let mut c = 1.0 / cosh.sqrt();
    let mut m = 0;
    while m < work {
        vacuum[m] = c;
        let n = (m / 2) as f64;
        c *= tanh * ((2.0 * n + 1.0) / (2.0 * n + 2.0)).sqrt();
        m += 2;
    }
    let seed = displace(&vacuum, x);

    let k_count = weights.len();
    let mut vectors = DMatrix::zeros(cutoff, k_count);
    let mut cur = seed;
    let mut next = vec![0.0; work];
    let mut inside = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        if k > 0 {
            apply_ladder(&cur, cosh, sinh, x, &mut next);
            let inv = 1.0 / (k as f64).sqrt();
            for v in next.iter_mut() {
                *v *= inv;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        let kept: f64 = cur[..cutoff].iter().map(|v| v * v).sum();
        inside += w * kept;
        vectors
            .column_mut(k)
            .copy_from(&DVector::from_column_slice(&cur[..cutoff]));
    }
    FockState {
        cutoff,
        weights,
        vectors,
        trace_deficit: (1.0 - inside).max(0.0),
    }
}

/// Fock-basis representation at a fixed cutoff. Fails when the captured trace
/// falls short of `1 − 1e−8`.
pub fn fock_oracle(g: &SingleModeGaussian, cutoff: usize) -> Result<FockState> {
    let (s, mu, x) = diagonal_params(g)?;
    let state = build_fock(s, mu, x, cutoff.max(1));
    if state.trace_deficit >= FOCK_TRACE_DEFICIT {
        return Err(Error::InsufficientCutoff {
            cutoff,
            captured_trace: 1.0 - state.trace_deficit,
        });
    }
    Ok(state)
}

/// Fock representation with a cutoff that starts at 30 and doubles until the
/// trace deficit drops below 1e−8 and `cutoff² · deficit` drops below 1e−9.
/// The second condition bounds the truncation error of the photon-number
/// variance, which weighs the missing tail by `n²`.
pub fn fock_oracle_adaptive(g: &SingleModeGaussian) -> Result<FockState> {
    let (s, mu, x) = diagonal_params(g)?;
    let mut cutoff = FOCK_START_CUTOFF;
    loop {
        let state = build_fock(s, mu, x, cutoff);
        let tail = state.trace_deficit * (cutoff * cutoff) as f64;
        if state.trace_deficit < FOCK_TRACE_DEFICIT && tail < FOCK_MOMENT_TAIL {
            return Ok(state);
        }
        if cutoff >= FOCK_MAX_CUTOFF {
            return Err(Error::InsufficientCutoff {
                cutoff,
                captured_trace: 1.0 - state.trace_deficit,
            });
        }
        cutoff *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sts(s: f64, mu: f64) -> STS1Params {
        STS1Params::new(s, mu).unwrap()
    }

    #[test]
    fn covariance_matrices() {
        let vac = sts1_cm(sts(1.0, 1.0)).unwrap();
        assert_eq!(vac.cm, SymmetricMatrix::diagonal(&[0.5, 0.5]).unwrap());
        let th = sts1_cm(sts(1.0, 1.0 / 3.0)).unwrap();
        assert!((th.cm[(0, 0)] - 1.5).abs() < 1e-15 && (th.cm[(1, 1)] - 1.5).abs() < 1e-15);
        let g = sts1_cm(sts(0.6, 0.7)).unwrap();
        assert!((g.cm[(0, 0)] - 1.0 / 0.84).abs() < 1e-14);
        assert!((g.cm[(1, 1)] - 0.6 / 1.4).abs() < 1e-15);
        assert!((g.purity() - 0.7).abs() < 1e-14);
        assert!((det_sym(&g.cm) - 1.0 / (4.0 * 0.49)).abs() < 1e-14);
    }

    #[test]
    fn parameter_validation() {
        assert!(STS1Params::new(0.0, 0.5).is_err());
        assert!(STS1Params::new(-1.0, 0.5).is_err());
        assert!(STS1Params::new(1.0, 0.0).is_err());
        assert!(STS1Params::new(1.0, 1.2).is_err());
        assert!(fidelity_sts1(STS1Params { s: 1.0, mu: 2.0 }, sts(1.0, 1.0)).is_err());
    }

    #[test]
    fn nonclassicality_criterion() {
        assert!(!is_nonclassical_sts1(sts(1.0, 0.9)));
        assert!(is_nonclassical_sts1(sts(0.6, 0.7)));
        assert!(is_nonclassical_sts1(sts(1.6, 0.7)));
        assert!(!is_nonclassical_sts1(sts(1.0, 1.0)));
    }

    #[test]
    fn squeezed_vacuum_fidelity_reduction() {
        for (s1, s2) in [(0.5, 2.0), (0.8, 1.3), (1.0, 0.4)] {
            let f = fidelity_sts1(sts(s1, 1.0), sts(s2, 1.0)).unwrap();
            let expected = 2.0 * (s1 * s2).sqrt() / (s1 + s2);
            assert!((f - expected).abs() < 1e-14);
        }
        let a = sts(0.7, 0.4);
        assert!((fidelity_sts1(a, a).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_overlap() {
        let vac = sts(1.0, 1.0);
        let g1 = displaced_sts1(vac, 0.3).unwrap();
        let g2 = displaced_sts1(vac, 1.1).unwrap();
        let f = fidelity_gaussian1(&g1, &g2).unwrap();
        assert!((f - (-(0.8f64).powi(2)).exp()).abs() < 1e-14);
        assert_eq!(g1.mean, [0.3, 0.0]);
        assert_eq!(
            displaced_sts1(sts(0.6, 0.7), 0.0).unwrap(),
            sts1_cm(sts(0.6, 0.7)).unwrap()
        );
    }

    #[test]
    fn photon_statistics_closed_forms() {
        let vac = photon_stats(&sts1_cm(sts(1.0, 1.0)).unwrap()).unwrap();
        assert_eq!((vac.mean_n, vac.var_n, vac.fano), (0.0, 0.0, None));
        for n in [0.5, 1.0, 3.0] {
            let st = photon_stats(&sts1_cm(sts(1.0, 1.0 / (2.0 * n + 1.0))).unwrap()).unwrap();
            assert!((st.mean_n - n).abs() < 1e-12);
            assert!((st.var_n - n * (n + 1.0)).abs() < 1e-12);
            assert!((st.fano.unwrap() - (n + 1.0)).abs() < 1e-12);
        }
        let coh = photon_stats(&displaced_sts1(sts(1.0, 1.0), 1.7).unwrap()).unwrap();
        assert!((coh.mean_n - 1.7 * 1.7).abs() < 1e-12);
        assert!((coh.fano.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fano_classification() {
        assert!(!is_subpoissonian(&displaced_sts1(sts(1.0, 1.0), 1.0).unwrap()).unwrap());
        assert!(is_subpoissonian(&displaced_sts1(sts(1.4, 0.9), 0.5).unwrap()).unwrap());
        assert!(!is_subpoissonian(&displaced_sts1(sts(1.2, 0.7), 1.5).unwrap()).unwrap());
        assert!(is_subpoissonian(&sts1_cm(sts(1.0, 1.0)).unwrap()).is_err());
    }

    #[test]
    fn fock_vacuum_and_thermal() {
        let vac = fock_oracle(&sts1_cm(sts(1.0, 1.0)).unwrap(), 10).unwrap();
        let rho = vac.density_matrix();
        assert!((rho[(0, 0)] - 1.0).abs() < 1e-15);
        assert!(rho.iter().enumerate().all(|(i, &v)| i == 0 || v.abs() < 1e-15));

        let th = fock_oracle(&sts1_cm(sts(1.0, 1.0 / 3.0)).unwrap(), 60).unwrap();
        let rho = th.density_matrix();
        for n in 0..60 {
            let expected = 0.5f64.powi(n as i32 + 1);
            assert!((rho[(n, n)] - expected).abs() < 1e-14);
        }
        assert!((th.photon_stats().mean_n - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fock_squeezed_vacuum_identity() {
        let st = fock_oracle(&sts1_cm(sts(0.5, 1.0)).unwrap(), 60)
            .unwrap()
            .photon_stats();
        assert!((st.var_n - 2.0 * st.mean_n * (st.mean_n + 1.0)).abs() < 1e-6);
    }

    #[test]
    fn fock_cutoff_too_small() {
        let g = displaced_sts1(sts(1.0, 0.5), 2.0).unwrap();
        assert!(matches!(fock_oracle(&g, 5), Err(Error::InsufficientCutoff { .. })));
        let adaptive = fock_oracle_adaptive(&g).unwrap();
        assert!(adaptive.trace_deficit < FOCK_TRACE_DEFICIT);
    }

    #[test]
    fn fock_oracle_rejects_rotated_states() {
        let cm = SymmetricMatrix::new(2, vec![1.0, 0.2, 0.2, 1.0]).unwrap();
        let g = SingleModeGaussian::new([0.0, 0.0], cm).unwrap();
        assert!(matches!(fock_oracle(&g, 30), Err(Error::Unsupported(_))));
    }

    #[test]
    fn uncertainty_violation_rejected() {
        let cm = SymmetricMatrix::diagonal(&[0.2, 0.5]).unwrap();
        assert!(SingleModeGaussian::new([0.0, 0.0], cm).is_err());
    }
}

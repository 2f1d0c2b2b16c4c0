//! Qubit coupled to a harmonic oscillator under the Jaynes-Cummings
//! Hamiltonian `H = Δ/2 σz + g(σ+ a + σ- a†)` (ħ = 1, frame rotating at the
//! oscillator frequency). `σ+ = |1><0|`, so `N = a†a + σz/2` is conserved
//! and the dynamics splits into blocks `{|1,n>, |0,n+1>}` with frequency
//! `Ω_n = sqrt(g²(n+1) + Δ²/4)`.
//!
//! Coefficients are reported in the frame co-rotating with the detuning
//! term, i.e. the propagator is `e^{iΔtσz/2} e^{-iHt}`.

use serde::Serialize;

use crate::choi::ChoiState;
use crate::error::{Error, Result};
use crate::linalg::{c, expm_herm, herm_eig, kron, pauli, re, singular_values, sqrt_psd, CMatrix, C64};

/// Normalization tolerance on the oscillator amplitudes.
pub const AMPLITUDE_TOL: f64 = 1e-12;
/// Norm drift that signals a truncation problem.
pub const NORM_DRIFT_TOL: f64 = 1e-8;
/// Convergence threshold for the Fock-truncation doubling of the propagator.
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Disagreement between measure-based and closed-form witness that flags a fault.
pub const WITNESS_DISCREPANCY_TOL: f64 = 1e-7;
/// Default Fock truncation for general oscillator states.
pub const DEFAULT_N_MAX: usize = 8;

const MAX_FOCK_DIM: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct JCModel {
    /// Coupling rate (rad/s).
    pub g: f64,
    /// Detuning `ω_a - ω` (rad/s).
    pub delta: f64,
    /// Oscillator state `Σ c_n |n>`, `n = 0..=n_max`.
    pub oscillator_amplitudes: Vec<C64>,
}

impl JCModel {
    pub fn new(g: f64, delta: f64, oscillator_amplitudes: Vec<C64>) -> Result<Self> {
        let m = JCModel { g, delta, oscillator_amplitudes };
        m.validate()?;
        Ok(m)
    }

    /// Oscillator in its ground state, truncated at `n_max = 2`.
    pub fn ground(g: f64, delta: f64) -> Result<Self> {
        Self::new(g, delta, vec![re(1.0), re(0.0), re(0.0)])
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g.is_finite() || !self.delta.is_finite() {
            return Err(Error::InvalidParameter("g and delta must be finite".into()));
        }
        if self.oscillator_amplitudes.len() < 2 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        let norm: f64 = self.oscillator_amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::NonPhysical(format!("oscillator amplitudes have norm² {norm}")));
        }
        Ok(())
    }

    pub fn n_max(&self) -> usize {
        self.oscillator_amplitudes.len() - 1
    }

    /// `κ = sqrt(g² + Δ²/4)`.
    pub fn kappa(&self) -> f64 {
        kappa(self.g, self.delta)
    }

    /// `Ω_n = sqrt(g²(n+1) + Δ²/4)`; `n = -1` gives `|Δ|/2`.
    pub fn omega(&self, n: i64) -> f64 {
        (self.g * self.g * (n + 1) as f64 + self.delta * self.delta / 4.0).sqrt()
    }
}

pub fn kappa(g: f64, delta: f64) -> f64 {
    (g * g + delta * delta / 4.0).sqrt()
}

/// `sin(Ωt)/Ω`, continuous at `Ω = 0`.
fn sinc_t(omega: f64, t: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

/// Amplitudes of `Σ_n (c1[n] |1,n> + c0[n] |0,n>)`, both of length `n_max + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct JcCoefficients {
    pub c1: Vec<C64>,
    pub c0: Vec<C64>,
}

impl JcCoefficients {
    pub fn norm_sqr(&self) -> f64 {
        self.c1.iter().chain(&self.c0).map(|a| a.norm_sqr()).sum()
    }

    /// `<a†a + σz/2>`.
    pub fn excitation_number(&self) -> f64 {
        let n1: f64 = self.c1.iter().enumerate().map(|(n, a)| (n as f64 + 0.5) * a.norm_sqr()).sum();
        let n0: f64 = self.c0.iter().enumerate().map(|(n, a)| (n as f64 - 0.5) * a.norm_sqr()).sum();
        n1 + n0
    }

    /// Amplitude of output qubit state `k` with `n` quanta.
    pub fn amplitude(&self, k: usize, n: usize) -> C64 {
        if k == 1 {
            self.c1[n]
        } else {
            self.c0[n]
        }
    }

    /// Joint state vector ordered qubit ⊗ oscillator.
    pub fn to_ket(&self) -> CMatrix {
        let amps: Vec<C64> = self.c0.iter().chain(&self.c1).copied().collect();
        CMatrix::ket(&amps)
    }
}

/// Closed-form evolution of `|initial_qubit> ⊗ Σ c_n |n>`.
pub fn jc_coefficients(initial_qubit: u8, model: &JCModel, t: f64) -> Result<JcCoefficients> {
    model.validate()?;
    let len = model.n_max() + 2;
    let (g, d) = (model.g, model.delta);
    let up = C64::from_polar(1.0, d * t / 2.0);
    let down = up.conj();
    let mut c1 = vec![re(0.0); len];
    let mut c0 = vec![re(0.0); len];
    for (n, &cn) in model.oscillator_amplitudes.iter().enumerate() {
        match initial_qubit {
            1 => {
                let om = model.omega(n as i64);
                let s = sinc_t(om, t);
                c1[n] = cn * c((om * t).cos(), -d / 2.0 * s) * up;
                c0[n + 1] = cn * c(0.0, -g * ((n + 1) as f64).sqrt() * s) * down;
            }
            0 => {
                let om = model.omega(n as i64 - 1);
                let s = sinc_t(om, t);
                c0[n] = cn * c((om * t).cos(), d / 2.0 * s) * down;
                if n > 0 {
                    c1[n - 1] = cn * c(0.0, -g * (n as f64).sqrt() * s) * up;
                }
            }
            other => {
                return Err(Error::InvalidParameter(format!("initial qubit must be 0 or 1, got {other}")))
            }
        }
    }
    let out = JcCoefficients { c1, c0 };
    let drift = (out.norm_sqr() - 1.0).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Truncation { drift });
    }
    Ok(out)
}

/// `a` on `n_fock` levels.
pub fn annihilation(n_fock: usize) -> CMatrix {
    CMatrix::from_fn(n_fock, n_fock, |i, j| if j == i + 1 { re((j as f64).sqrt()) } else { re(0.0) })
}

/// `Δ/2 σz ⊗ 1 + g(σ+ ⊗ a + σ- ⊗ a†)` on qubit ⊗ `n_fock` levels.
pub fn jc_hamiltonian(g: f64, delta: f64, n_fock: usize) -> CMatrix {
    let a = annihilation(n_fock);
    let free = kron(&pauli::z(), &CMatrix::identity(n_fock)).scale_re(delta / 2.0);
    let hop = &kron(&pauli::plus(), &a) + &kron(&pauli::minus(), &a.adjoint());
    &free + &hop.scale_re(g)
}

/// Full Rabi Hamiltonian `ω a†a + ω_a σz/2 + g σx (a + a†)` in the lab frame.
/// Not used by the rotating-wave dynamics above.
pub fn rabi_hamiltonian(omega: f64, omega_a: f64, g: f64, n_fock: usize) -> CMatrix {
    let a = annihilation(n_fock);
    let num = &a.adjoint() * &a;
    let osc = kron(&CMatrix::identity(2), &num).scale_re(omega);
    let atom = kron(&pauli::z(), &CMatrix::identity(n_fock)).scale_re(omega_a / 2.0);
    let coupling = kron(&pauli::x(), &(&a + &a.adjoint())).scale_re(g);
    &(&osc + &atom) + &coupling
}

/// Numerical propagation `e^{iΔtσz/2} e^{-iHt}` on `n_fock` levels; oracle for
/// [`jc_coefficients`]. Amplitudes beyond the truncation are zero.
pub fn propagate_coefficients(initial_qubit: u8, model: &JCModel, t: f64, n_fock: usize) -> Result<JcCoefficients> {
    model.validate()?;
    if initial_qubit > 1 {
        return Err(Error::InvalidParameter(format!("initial qubit must be 0 or 1, got {initial_qubit}")));
    }
    if n_fock < model.oscillator_amplitudes.len() {
        return Err(Error::InvalidParameter("Fock truncation below the initial state support".into()));
    }
    let h = jc_hamiltonian(model.g, model.delta, n_fock);
    let frame = kron(
        &CMatrix::diag(&[C64::from_polar(1.0, -model.delta * t / 2.0), C64::from_polar(1.0, model.delta * t / 2.0)]),
        &CMatrix::identity(n_fock),
    );
    let u = &frame * &expm_herm(&h, t)?;
    let mut psi = CMatrix::zeros(2 * n_fock, 1);
    for (n, &cn) in model.oscillator_amplitudes.iter().enumerate() {
        psi[(initial_qubit as usize * n_fock + n, 0)] = cn;
    }
    let out = &u * &psi;
    let len = n_fock.max(model.n_max() + 2);
    let mut c1 = vec![re(0.0); len];
    let mut c0 = vec![re(0.0); len];
    for n in 0..n_fock {
        c0[n] = out[(n, 0)];
        c1[n] = out[(n_fock + n, 0)];
    }
    Ok(JcCoefficients { c1, c0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiMode {
    ClosedFormGround,
    Propagated,
}

#[derive(Debug, Clone)]
pub struct JCChoi {
    pub choi: ChoiState,
    pub t: f64,
    pub mode: ChoiMode,
}

impl JCChoi {
    /// Unit-trace version, ready for the entanglement measures.
    pub fn normalized(&self) -> CMatrix {
        self.choi.matrix().scale_re(0.5)
    }
}

/// `χ = Σ c^{(i)}_{k,n} c^{(j)*}_{l,n} |ik><jl|`.
pub fn choi_from_coefficients(branches: [&JcCoefficients; 2]) -> CMatrix {
    let len = branches[0].c0.len().min(branches[1].c0.len());
    CMatrix::from_fn(4, 4, |row, col| {
        let (i, k) = (row / 2, row % 2);
        let (j, l) = (col / 2, col % 2);
        (0..len)
            .map(|n| branches[i].amplitude(k, n) * branches[j].amplitude(l, n).conj())
            .sum()
    })
}

pub fn jc_choi(model: &JCModel, t: f64) -> Result<JCChoi> {
    let b0 = jc_coefficients(0, model, t)?;
    let b1 = jc_coefficients(1, model, t)?;
    let choi = ChoiState::from_matrix(choi_from_coefficients([&b0, &b1]), 2, 2)?;
    Ok(JCChoi { choi, t, mode: ChoiMode::Propagated })
}

/// Choi state from numerical propagation, doubling the Fock truncation
/// (starting at `n_max + 1` levels) until it changes by less than 1e-10.
pub fn jc_choi_propagated(model: &JCModel, t: f64) -> Result<JCChoi> {
    let at = |n_fock: usize| -> Result<CMatrix> {
        let b0 = propagate_coefficients(0, model, t, n_fock)?;
        let b1 = propagate_coefficients(1, model, t, n_fock)?;
        Ok(choi_from_coefficients([&b0, &b1]))
    };
    let mut n_fock = model.n_max() + 1;
    let mut prev = at(n_fock)?;
    loop {
        let next_dim = 2 * n_fock;
        let next = at(next_dim)?;
        let drift = next.max_abs_diff(&prev);
        if drift < TRUNCATION_TOL {
            let choi = ChoiState::from_matrix(next, 2, 2)?;
            return Ok(JCChoi { choi, t, mode: ChoiMode::Propagated });
        }
        if next_dim >= MAX_FOCK_DIM {
            return Err(Error::Truncation { drift });
        }
        n_fock = next_dim;
        prev = next;
    }
}

/// Exact Choi state for the oscillator ground state:
/// `E_t = (2g²+Δ²+2g²cos2κt)/(4κ²)|11><11| + |00><00| + g²sin²κt/κ² |10><10|`
/// `+ e^{-iΔt/2}(2κ cos κt + iΔ sin κt)/(2κ) |00><11| + h.c.`
pub fn jc_choi_ground_closed_form(g: f64, delta: f64, t: f64) -> Result<JCChoi> {
    let k = kappa(g, delta);
    if !(k > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("need (g, delta) != (0, 0) and finite t".into()));
    }
    let (g2, d2, k2) = (g * g, delta * delta, k * k);
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = re(1.0);
    m[(2, 2)] = re(g2 * (k * t).sin().powi(2) / k2);
    m[(3, 3)] = re((2.0 * g2 + d2 + 2.0 * g2 * (2.0 * k * t).cos()) / (4.0 * k2));
    let off = C64::from_polar(1.0, -delta * t / 2.0) * c(2.0 * k * (k * t).cos(), delta * (k * t).sin()) / (2.0 * k);
    m[(0, 3)] = off;
    m[(3, 0)] = off.conj();
    Ok(JCChoi { choi: ChoiState::from_matrix(m, 2, 2)?, t, mode: ChoiMode::ClosedFormGround })
}

fn validate_two_qubit_state(rho: &CMatrix) -> Result<()> {
    if rho.shape() != (4, 4) {
        return Err(Error::DimensionMismatch("concurrence needs a 4x4 density matrix".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NonPhysical(format!("trace {tr} differs from 1")));
    }
    let min = herm_eig(rho)?.min();
    if min < -1e-10 {
        return Err(Error::NonPhysical(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Descending `λ_i`: square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`,
/// computed as singular values of `√ρ (σy⊗σy) √ρ*`.
pub fn spin_flip_spectrum(rho: &CMatrix) -> Result<Vec<f64>> {
    validate_two_qubit_state(rho)?;
    let root = sqrt_psd(rho)?;
    let yy = kron(&pauli::y(), &pauli::y());
    Ok(singular_values(&(&(&root * &yy) * &root.conj())))
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    let l = spin_flip_spectrum(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Concurrence of assistance `λ1 + λ2 + λ3 + λ4`.
pub fn concurrence_assistance(rho: &CMatrix) -> Result<f64> {
    Ok(spin_flip_spectrum(rho)?.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcWitness {
    pub g: f64,
    pub delta: f64,
    /// `C♯[E(t1)/2] - C[E(t2)/2]` with `t1 = π/(2κ)`, `t2 = 2 t1`.
    pub measured: f64,
    /// `|Δ|/sqrt(4g² + Δ²) - 1`.
    pub closed_form: f64,
    pub discrepancy: f64,
}

pub fn jc_witness_closed_form(g: f64, delta: f64) -> f64 {
    delta.abs() / (4.0 * g * g + delta * delta).sqrt() - 1.0
}

/// Leading-order `-2g²/Δ²` for `g ≪ |Δ|`.
pub fn jc_witness_quadratic(g: f64, delta: f64) -> f64 {
    -2.0 * g * g / (delta * delta)
}

/// Concurrence-based witness for the ground-state oscillator.
pub fn jc_witness(g: f64, delta: f64) -> Result<JcWitness> {
    let k = kappa(g, delta);
    if !(k > 0.0) {
        return Err(Error::InvalidParameter("need (g, delta) != (0, 0)".into()));
    }
    let model = JCModel::ground(g, delta)?;
    let t1 = std::f64::consts::PI / (2.0 * k);
    let e1 = jc_choi(&model, t1)?;
    let e2 = jc_choi(&model, 2.0 * t1)?;
    let measured = concurrence_assistance(&e1.normalized())? - concurrence(&e2.normalized())?;
    let closed_form = jc_witness_closed_form(g, delta);
    let discrepancy = (measured - closed_form).abs();
    if discrepancy > WITNESS_DISCREPANCY_TOL {
        return Err(Error::Discrepancy { discrepancy });
    }
    Ok(JcWitness { g, delta, measured, closed_form, discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::CHANNEL_TOL;
    use std::f64::consts::PI;

    fn coherent(alpha: f64, n_max: usize) -> Vec<C64> {
        let mut amps: Vec<C64> = (0..=n_max)
            .map(|n| {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                re(alpha.powi(n as i32) / fact.sqrt())
            })
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        amps
    }

    #[test]
    fn decoupled_limit_only_changes_phases() {
        let m = JCModel::new(0.0, 1.3, coherent(0.8, 6)).unwrap();
        for i in 0..2u8 {
            let c = jc_coefficients(i, &m, 2.7).unwrap();
            for (n, amp) in m.oscillator_amplitudes.iter().enumerate() {
                assert!((c.amplitude(i as usize, n).norm() - amp.norm()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn resonant_vacuum_transfers_excitation() {
        let m = JCModel::ground(0.7, 0.0).unwrap();
        let c = jc_coefficients(1, &m, PI / (2.0 * m.kappa())).unwrap();
        assert!((c.c0[1].norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_coefficients_match_propagator() {
        for (g, d, t) in [(0.3, 1.0, 0.7), (1.0, 0.2, 2.3), (0.5, -1.3, 4.0), (0.4, 0.0, 1.9)] {
            let m = JCModel::new(g, d, coherent(0.9, 5)).unwrap();
            for i in 0..2u8 {
                let a = jc_coefficients(i, &m, t).unwrap();
                let b = propagate_coefficients(i, &m, t, m.n_max() + 2).unwrap();
                let diff = a.c0.iter().zip(&b.c0).chain(a.c1.iter().zip(&b.c1));
                let worst = diff.map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                assert!(worst < 1e-8, "g={g} d={d} qubit {i}: {worst:e}");
            }
        }
    }

    #[test]
    fn excitation_number_is_conserved() {
        let m = JCModel::new(0.45, -0.8, coherent(1.1, 7)).unwrap();
        for i in 0..2u8 {
            let n0 = jc_coefficients(i, &m, 0.0).unwrap().excitation_number();
            for t in [0.3, 1.7, 9.2] {
                let c = jc_coefficients(i, &m, t).unwrap();
                assert!((c.excitation_number() - n0).abs() < 1e-10);
                assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn choi_at_zero_time_is_identity() {
        let m = JCModel::new(0.6, 0.4, coherent(0.5, 4)).unwrap();
        let e = jc_choi(&m, 0.0).unwrap();
        assert!(e.choi.matrix().max_abs_diff(ChoiState::identity(2).matrix()) < 1e-14);
    }

    #[test]
    fn ground_choi_matches_closed_form_and_is_a_channel() {
        for &g in &[0.1, 0.5, 1.3] {
            for &d in &[-0.9, 0.0, 0.35, 2.0] {
                for &t in &[0.0, 0.4, 1.7, 6.1] {
                    let num = jc_choi(&JCModel::ground(g, d).unwrap(), t).unwrap();
                    let cf = jc_choi_ground_closed_form(g, d, t).unwrap();
                    assert!(num.choi.matrix().max_abs_diff(cf.choi.matrix()) < 1e-8);
                    assert!(cf.choi.is_cptp(CHANNEL_TOL));
                }
            }
        }
    }

    #[test]
    fn propagated_choi_converges_for_coherent_input() {
        let m = JCModel::new(0.3, 0.5, coherent(1.0, 8)).unwrap();
        let a = jc_choi(&m, 1.4).unwrap();
        let b = jc_choi_propagated(&m, 1.4).unwrap();
        assert!(a.choi.matrix().max_abs_diff(b.choi.matrix()) < 1e-8);
        assert!(a.choi.is_cptp(CHANNEL_TOL));
    }

    #[test]
    fn closed_form_special_times() {
        let (g, d) = (0.8, 0.6);
        let k = kappa(g, d);
        let e = jc_choi_ground_closed_form(g, d, PI / k).unwrap();
        let m = e.choi.matrix();
        assert!(m[(2, 2)].norm() < 1e-14);
        assert!((m[(0, 3)].norm() - 1.0).abs() < 1e-14);
        assert!((concurrence(&e.normalized()).unwrap() - 1.0).abs() < 1e-7);
        let e = jc_choi_ground_closed_form(g, d, PI / (2.0 * k)).unwrap();
        let m = e.choi.matrix();
        assert!((m[(3, 3)].re - d * d / (4.0 * k * k)).abs() < 1e-14);
        assert!((m[(2, 2)].re - g * g / (k * k)).abs() < 1e-14);
        assert!(jc_choi_ground_closed_form(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn decoupled_choi_is_maximally_entangled() {
        let e = jc_choi(&JCModel::ground(0.0, 1.1).unwrap(), 3.3).unwrap();
        assert!((concurrence(&e.normalized()).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn concurrence_reference_states() {
        let bell = ChoiState::identity(2).into_matrix().scale_re(0.5);
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-7);
        let prod = CMatrix::projector(&kron(
            &CMatrix::ket(&[re(0.6), c(0.0, 0.8)]),
            &CMatrix::ket(&[re(1.0 / 2f64.sqrt()), re(-1.0 / 2f64.sqrt())]),
        ));
        assert!(concurrence(&prod).unwrap() < 1e-7);
        let mixed = CMatrix::identity(4).scale_re(0.25);
        assert!(concurrence(&mixed).unwrap() < 1e-12);
        assert!((concurrence_assistance(&mixed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn werner_states() {
        let bell = ChoiState::identity(2).into_matrix().scale_re(0.5);
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let rho = &bell.scale_re(p) + &CMatrix::identity(4).scale_re((1.0 - p) / 4.0);
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho).unwrap() - want).abs() < 1e-7, "p = {p}");
        }
    }

    #[test]
    fn concurrence_rejects_unphysical_input() {
        assert!(concurrence(&CMatrix::identity(4)).is_err());
        assert!(concurrence(&CMatrix::real_diag(&[1.2, -0.2, 0.0, 0.0])).is_err());
        assert!(concurrence(&CMatrix::identity(2)).is_err());
    }

    #[test]
    fn witness_values() {
        let w = jc_witness(0.0, 1.0).unwrap();
        assert!(w.measured.abs() < 1e-7);
        let w = jc_witness(0.5, 1.0).unwrap();
        assert!((w.measured - (1.0 / 2f64.sqrt() - 1.0)).abs() < 1e-7);
        let w = jc_witness(0.05, 1.0).unwrap();
        let quad = jc_witness_quadratic(0.05, 1.0);
        assert!(((w.closed_form - quad) / w.closed_form).abs() < 0.01);
        assert!(jc_witness(0.0, 0.0).is_err());
    }

    #[test]
    fn rabi_hamiltonian_is_hermitian_and_contains_jc_terms() {
        let h = rabi_hamiltonian(1.0, 1.2, 0.1, 5);
        assert!(h.is_hermitian(1e-15));
        assert_eq!(h.shape(), (10, 10));
        // σx(a + a†) couples |0,0> to |1,1>, which the rotating-wave form drops
        assert!((h[(0, 6)].re - 0.1).abs() < 1e-15);
        assert!(jc_hamiltonian(0.1, 0.2, 5)[(0, 6)].norm() == 0.0);
    }
}

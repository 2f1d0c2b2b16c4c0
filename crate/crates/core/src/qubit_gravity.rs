//! Two-qubit gravitational protocol: probe `S` and memory `M` evolve under
//! `U = exp(-iθ σx⊗σx)` with `θ = gτ`, interleaved with local phase gates
//! `S = exp(-iπσz/4)` and a mid-sequence `σz` on the probe.
//!
//! `V = U (S⊗S) U` takes the pair to `t1 = 2τ`; `V (Z⊗1) V` to `t2 = 4τ`.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::choi::{ChoiState, CHANNEL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, partial_trace, pauli, CMatrix, C64};

/// Tolerance for validating the memory state.
pub const STATE_TOL: f64 = 1e-12;

/// Phase gate `exp(-iπσz/4) = diag(e^{iπ/4}, e^{-iπ/4})`.
pub fn phase_gate() -> CMatrix {
    CMatrix::diag(&[C64::from_polar(1.0, FRAC_PI_4), C64::from_polar(1.0, -FRAC_PI_4)])
}

/// `exp(-iθ σx⊗σx) = cos θ · 1 - i sin θ · σx⊗σx`.
pub fn grav_unitary(theta: f64) -> CMatrix {
    let xx = kron(&pauli::x(), &pauli::x());
    &CMatrix::identity(4).scale_re(theta.cos()) - &xx.scale(c(0.0, theta.sin()))
}

/// `V = U (S⊗S) U`.
pub fn sequence_v(theta: f64) -> CMatrix {
    let u = grav_unitary(theta);
    let s = phase_gate();
    &(&u * &kron(&s, &s)) * &u
}

/// The full four-step sequence `V (Z⊗1) V`.
pub fn echo_unitary(theta: f64) -> CMatrix {
    let v = sequence_v(theta);
    &(&v * &kron(&pauli::z(), &pauli::identity())) * &v
}

/// `|1><1|`, the memory state the protocol is designed around.
pub fn default_memory_state() -> CMatrix {
    CMatrix::real_diag(&[0.0, 1.0])
}

#[derive(Debug, Clone)]
pub struct TwoQubitProtocol {
    /// Dimensionless phase `gτ` in radians.
    pub theta: f64,
    pub memory_state: CMatrix,
}

impl TwoQubitProtocol {
    pub fn new(theta: f64) -> Self {
        TwoQubitProtocol { theta, memory_state: default_memory_state() }
    }

    pub fn with_memory_state(theta: f64, memory_state: CMatrix) -> Result<Self> {
        let p = TwoQubitProtocol { theta, memory_state };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter(format!("theta must be finite, got {}", self.theta)));
        }
        validate_density_matrix(&self.memory_state, 2, STATE_TOL)
    }
}

/// Checks shape, Hermiticity, unit trace and positivity of a density matrix.
pub fn validate_density_matrix(rho: &CMatrix, dim: usize, tol: f64) -> Result<()> {
    if rho.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "density matrix must be {dim}x{dim}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let herm = rho.hermiticity_residual();
    if herm >= tol {
        return Err(Error::NonPhysical(format!("state not Hermitian (residual {herm:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() >= tol || tr.im.abs() >= tol {
        return Err(Error::NonPhysical(format!("state trace {tr} differs from 1")));
    }
    let min = crate::linalg::min_eigenvalue(rho)?;
    if min < -tol {
        return Err(Error::NonPhysical(format!("state has negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Parameters that generated a [`DynamicsPair`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PairOrigin {
    TwoQubit { theta: f64 },
    ClassicalRealization { branches: usize },
    Custom,
}

/// Choi states of the probe maps at the two readout times.
#[derive(Debug, Clone)]
pub struct DynamicsPair {
    pub e1: ChoiState,
    pub e2: ChoiState,
    pub origin: PairOrigin,
}

impl DynamicsPair {
    pub fn new(e1: ChoiState, e2: ChoiState, origin: PairOrigin) -> Result<Self> {
        if (e1.d_in(), e1.d_out(), e2.d_in(), e2.d_out()) != (2, 2, 2, 2) {
            return Err(Error::DimensionMismatch("dynamics pairs are qubit-to-qubit".into()));
        }
        Ok(DynamicsPair { e1, e2, origin })
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        self.e1.is_cptp(tol) && self.e2.is_cptp(tol)
    }
}

/// Reduced probe map `ρ ↦ tr_M[W (ρ ⊗ ρ_M) W†]` as a Choi state.
pub fn reduced_choi(joint: &CMatrix, memory_state: &CMatrix) -> ChoiState {
    let dm = memory_state.rows();
    let ds = joint.rows() / dm;
    ChoiState::from_map(ds, |rho| {
        let evolved = kron(rho, memory_state).conjugate_by(joint);
        partial_trace(&evolved, &[ds, dm], &[0]).expect("register dims are consistent")
    })
}

/// Simulates the protocol and returns the probe Choi states at `t1` and `t2`.
pub fn dynamics_pair(protocol: &TwoQubitProtocol) -> Result<DynamicsPair> {
    protocol.validate()?;
    let e1 = reduced_choi(&sequence_v(protocol.theta), &protocol.memory_state);
    let e2 = reduced_choi(&echo_unitary(protocol.theta), &protocol.memory_state);
    let pair = DynamicsPair::new(e1, e2, PairOrigin::TwoQubit { theta: protocol.theta })?;
    debug_assert!(pair.is_cptp(CHANNEL_TOL));
    Ok(pair)
}

/// Closed-form Kraus operators `{S K0, S K1}` of the first map, valid for `ρ_M = |1><1|`:
/// `K0 = σ+σ- + cos(2θ) σ-σ+`, `K1 = sin(2θ) σ+`.
pub fn kraus_e1_closed_form(theta: f64) -> Vec<CMatrix> {
    let s = phase_gate();
    let up = &pauli::plus() * &pauli::minus();
    let down = &pauli::minus() * &pauli::plus();
    let k0 = &up + &down.scale_re((2.0 * theta).cos());
    let k1 = pauli::plus().scale_re((2.0 * theta).sin());
    vec![&s * &k0, &s * &k1]
}

/// Purity `tr ρ²` of the first map's output on the maximally mixed input.
pub fn e1_output_purity(pair: &DynamicsPair) -> Result<f64> {
    let out = pair.e1.apply(&CMatrix::identity(2).scale_re(0.5))?;
    Ok((&out * &out).trace().re)
}

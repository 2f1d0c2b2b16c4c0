//! Quantum-memory witnesses built from three probe correlators.
//!
//! A witness is a pair of Hermitian operators `(W1, W2)` evaluated as
//! `w = tr[W1 E1] + tr[W2 E2]` on the Choi states of the two probe maps.
//! It is valid when `w >= 0` for every dynamics that only uses classical
//! memory. Validity is certified by a decomposition on four qubits ordered
//! `A, D, D', B`:
//!
//! ```text
//! W1^{AD} ⊗ 1^{D'B}/2 + W2^{AB} ⊗ Φ+^{DD'} = Q + R^{T_{D'B}} + Y^{ADD'} ⊗ 1^B
//! ```
//!
//! with `Q, R ⪰ 0` and `tr_{D'} Y = Z^A ⊗ 1^D`, `tr Z >= 0`. The `Y` term is
//! the dual of trace preservation of the conditional maps; without it no
//! negative witness of this family can be certified.

use serde::Serialize;

use crate::choi::ChoiState;
use crate::error::{Error, Result};
use crate::linalg::{
    herm_eig, kron, kron_all, partial_trace, partial_transpose, permute_subsystems, pauli, re,
    CMatrix,
};
use crate::qubit_gravity::DynamicsPair;

/// Eigenvalue tolerance for certificate validity.
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// Imaginary residue allowed on a correlator before the Choi input is rejected.
pub const CORRELATOR_IMAG_TOL: f64 = 1e-10;

/// Subsystem dimensions of the `A, D, D', B` register.
pub const ADDB_DIMS: [usize; 4] = [2, 2, 2, 2];

/// Partially transposed slots `D', B`.
pub const TRANSPOSED_SLOTS: [usize; 2] = [2, 3];

/// Coefficients of the four-term witness family
/// `W1 = w11 1⊗1 + w1z 1⊗σz`, `W2 = wxx σx⊗σx + wzz σz⊗σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessOperators {
    pub w11: f64,
    pub w1z: f64,
    pub wxx: f64,
    pub wzz: f64,
}

impl WitnessOperators {
    pub fn new(w11: f64, w1z: f64, wxx: f64, wzz: f64) -> Self {
        WitnessOperators { w11, w1z, wxx, wzz }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w11, self.w1z, self.wxx, self.wzz]
    }

    /// The analytical witness `4 - tr σz E1[1] - (2/3)(tr σx E2[σx] + tr σz E2[σz])`.
    pub fn analytical() -> Self {
        Self::new(2.0, -1.0, -2.0 / 3.0, -2.0 / 3.0)
    }

    pub fn w1(&self) -> CMatrix {
        let id = CMatrix::identity(4);
        let iz = kron(&pauli::identity(), &pauli::z());
        &id.scale_re(self.w11) + &iz.scale_re(self.w1z)
    }

    pub fn w2(&self) -> CMatrix {
        let xx = kron(&pauli::x(), &pauli::x());
        let zz = kron(&pauli::z(), &pauli::z());
        &xx.scale_re(self.wxx) + &zz.scale_re(self.wzz)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(s * self.w11, s * self.w1z, s * self.wxx, s * self.wzz)
    }

    /// `tr W1 + tr W2`.
    pub fn trace_norm_constraint(&self) -> f64 {
        4.0 * self.w11
    }

    /// Rescaled so that `tr W1 + tr W2 = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace_norm_constraint();
        if t <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize a witness with tr W1 + tr W2 = {t}"
            )));
        }
        Ok(self.scaled(1.0 / t))
    }

    /// `tr[W1 E1] + tr[W2 E2]`.
    pub fn evaluate(&self, pair: &DynamicsPair) -> f64 {
        self.w1().trace_product(pair.e1.matrix()).re + self.w2().trace_product(pair.e2.matrix()).re
    }
}

/// The three correlators entering the analytical witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorSet {
    /// `tr σz E1[1]`
    pub c_z1: f64,
    /// `tr σx E2[σx]`
    pub c_xx2: f64,
    /// `tr σz E2[σz]`
    pub c_zz2: f64,
}

impl CorrelatorSet {
    pub fn from_pair(pair: &DynamicsPair) -> Result<Self> {
        let set = CorrelatorSet {
            c_z1: correlator(&pair.e1, &pauli::identity(), &pauli::z())?,
            c_xx2: correlator(&pair.e2, &pauli::x(), &pauli::x())?,
            c_zz2: correlator(&pair.e2, &pauli::z(), &pauli::z())?,
        };
        set.validate()?;
        Ok(set)
    }

    /// Pauli bounds for trace-2 Choi states.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c_z1", self.c_z1), ("c_xx2", self.c_xx2), ("c_zz2", self.c_zz2)] {
            if !(v.abs() <= 2.0 + 1e-9) {
                return Err(Error::NonPhysical(format!("{name} = {v} violates |c| <= 2")));
            }
        }
        Ok(())
    }
}

/// `tr[(σ_in ⊗ σ_out) E] = tr σ_out 𝓔[σ_in^T]`.
///
/// `σ_in` must be transpose-invariant so the correlator is the measured
/// quantity `tr σ_out 𝓔[σ_in]`; `σy` inputs are rejected.
pub fn correlator(e: &ChoiState, sigma_in: &CMatrix, sigma_out: &CMatrix) -> Result<f64> {
    if e.d_in() != 2 || e.d_out() != 2 {
        return Err(Error::DimensionMismatch("correlators are defined for qubit maps".into()));
    }
    for (name, s) in [("input", sigma_in), ("output", sigma_out)] {
        if s.shape() != (2, 2) || !s.is_hermitian(CORRELATOR_IMAG_TOL) {
            return Err(Error::InvalidParameter(format!("{name} observable must be Hermitian 2x2")));
        }
    }
    if sigma_in.max_abs_diff(&sigma_in.transpose()) > 0.0 {
        return Err(Error::InvalidParameter(
            "input observable is not transpose-invariant (e.g. sigma_y); \
             tr[(s_in ⊗ s_out) E] would measure s_in^T instead of s_in"
                .into(),
        ));
    }
    let v = kron(sigma_in, sigma_out).trace_product(e.matrix());
    if v.im.abs() > CORRELATOR_IMAG_TOL {
        return Err(Error::NonPhysical(format!(
            "correlator has imaginary part {:e}; Choi input is not Hermitian",
            v.im
        )));
    }
    Ok(v.re)
}

/// `λ [4 - c_z1 - (2/3)(c_xx2 + c_zz2)]`.
pub fn analytical_witness(corrs: &CorrelatorSet, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(lambda * (4.0 - corrs.c_z1 - 2.0 / 3.0 * (corrs.c_xx2 + corrs.c_zz2)))
}

/// `λ [1/3 + cos 4θ]`, the value of the analytical witness on the two-qubit protocol.
pub fn analytical_closed_form(theta: f64, lambda: f64) -> f64 {
    lambda * (1.0 / 3.0 + (4.0 * theta).cos())
}

/// Unnormalized `|φ+><φ+|` on two qubits.
pub fn bell_projector() -> CMatrix {
    ChoiState::identity(2).into_matrix()
}

/// Left-hand side `W1^{AD} ⊗ 1^{D'B}/2 + W2^{AB} ⊗ Φ+^{DD'}` in `A, D, D', B` order.
pub fn decomposition_lhs(w: &WitnessOperators) -> CMatrix {
    let first = kron(&w.w1(), &CMatrix::identity(4).scale_re(0.5));
    // W2 ⊗ Φ+ is ordered (A, B, D, D'); move B to the last slot.
    let second = permute_subsystems(&kron(&w.w2(), &bell_projector()), &ADDB_DIMS, &[0, 3, 1, 2])
        .expect("fixed 4-qubit register");
    &first + &second
}

/// `Y^{ADD'} ⊗ 1^B`.
pub fn lift_tp_term(y: &CMatrix) -> CMatrix {
    kron(y, &CMatrix::identity(2))
}

/// Splits `tr_{D'} Y` into `Z^A ⊗ 1^D` plus a remainder.
/// Returns `(Z, max |tr_{D'} Y - Z ⊗ 1|)`.
pub fn tp_term_marginal(y: &CMatrix) -> Result<(CMatrix, f64)> {
    let y_ad = partial_trace(y, &[2, 2, 2], &[0, 1])?;
    let z = partial_trace(&y_ad, &[2, 2], &[0])?.scale_re(0.5);
    let residual = y_ad.max_abs_diff(&kron(&z, &CMatrix::identity(2)));
    Ok((z, residual))
}

/// `R` and `Y` proposed for a certificate; `Q` follows by subtraction.
#[derive(Debug, Clone)]
pub struct CertificateCandidate {
    /// 16x16 on `A, D, D', B`.
    pub r: CMatrix,
    /// 8x8 on `A, D, D'`.
    pub y: CMatrix,
}

impl CertificateCandidate {
    pub fn zero() -> Self {
        CertificateCandidate { r: CMatrix::zeros(16, 16), y: CMatrix::zeros(8, 8) }
    }

    /// `R = |κ><κ|` with `|κ> = (|0111> - |1110>)/√2` and
    /// `Y = 1^A ⊗ [-(σz⊗σz)/2 - (σx⊗σx - σy⊗σy)/2]^{DD'}`.
    pub fn analytical() -> Self {
        let s = 1.0 / 2f64.sqrt();
        let mut kappa = CMatrix::zeros(16, 1);
        kappa[(0b0111, 0)] = re(s);
        kappa[(0b1110, 0)] = re(-s);
        let zz = kron(&pauli::z(), &pauli::z());
        let xx = kron(&pauli::x(), &pauli::x());
        let yy = kron(&pauli::y(), &pauli::y());
        let y_dd = (&zz + &(&xx - &yy)).scale_re(-0.5);
        CertificateCandidate { r: CMatrix::projector(&kappa), y: kron(&pauli::identity(), &y_dd) }
    }

    pub fn scaled(&self, s: f64) -> Self {
        CertificateCandidate { r: self.r.scale_re(s), y: self.y.scale_re(s) }
    }
}

/// Result of checking a validity decomposition.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub valid: bool,
    pub q: CMatrix,
    pub r: CMatrix,
    pub y: CMatrix,
    pub min_eig_q: f64,
    pub min_eig_r: f64,
    /// Hermiticity residual of the left-hand side.
    pub residual: f64,
    /// How far `tr_{D'} Y` is from the form `Z ⊗ 1`.
    pub tp_residual: f64,
    /// `tr Z`: lower bound of the witness on classical-memory dynamics.
    pub classical_floor: f64,
}

/// Checks the analytical candidate (scaled to the witness) against `w_ops`.
///
/// The candidate is exact for multiples of [`WitnessOperators::analytical`];
/// for other operators it falls back to `R = 0, Y = 0`.
pub fn certify_witness(w_ops: &WitnessOperators) -> Result<Certificate> {
    let reference = WitnessOperators::analytical();
    let s = w_ops.w11 / reference.w11;
    let proportional = s > 0.0
        && w_ops
            .to_array()
            .iter()
            .zip(reference.to_array())
            .all(|(a, b)| (a - s * b).abs() < 1e-12 * s.max(1.0));
    let candidate = if proportional {
        CertificateCandidate::analytical().scaled(s)
    } else {
        CertificateCandidate::zero()
    };
    certify_with(w_ops, &candidate)
}

/// `Q = LHS - R^{T_{D'B}} - Y ⊗ 1`, then spectral checks on `Q` and `R`.
pub fn certify_with(w_ops: &WitnessOperators, candidate: &CertificateCandidate) -> Result<Certificate> {
    if candidate.r.shape() != (16, 16) || candidate.y.shape() != (8, 8) {
        return Err(Error::DimensionMismatch("certificate needs R: 16x16 and Y: 8x8".into()));
    }
    let lhs = decomposition_lhs(w_ops);
    let residual = lhs.hermiticity_residual();
    let r_pt = partial_transpose(&candidate.r, &ADDB_DIMS, &TRANSPOSED_SLOTS)?;
    let q = &(&lhs - &r_pt) - &lift_tp_term(&candidate.y);
    let min_eig_q = herm_eig(&q)?.min();
    let min_eig_r = herm_eig(&candidate.r)?.min();
    let (z, tp_residual) = tp_term_marginal(&candidate.y)?;
    let classical_floor = z.trace().re;
    let valid = min_eig_q >= -CERTIFICATE_TOL
        && min_eig_r >= -CERTIFICATE_TOL
        && tp_residual < CERTIFICATE_TOL
        && classical_floor >= -CERTIFICATE_TOL
        && residual < 1e-12;
    Ok(Certificate {
        valid,
        q,
        r: candidate.r.clone(),
        y: candidate.y.clone(),
        min_eig_q,
        min_eig_r,
        residual,
        tp_residual,
        classical_floor,
    })
}

/// Four-qubit operator from a list of single-qubit factors, convenience for tests.
pub fn four_qubit(a: &CMatrix, d: &CMatrix, dp: &CMatrix, b: &CMatrix) -> CMatrix {
    kron_all(&[a, d, dp, b])
}

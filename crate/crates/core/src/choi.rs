//! Choi states in the unnormalized-Bell convention
//! `E = (1 ⊗ 𝓔)[|φ+><φ+|]` with `|φ+> = Σ_i |ii>`. Input factor first,
//! output factor second; the trace equals the input dimension.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, partial_trace, re, CMatrix};

/// Default tolerance for the PSD / trace / marginal checks.
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    matrix: CMatrix,
    d_in: usize,
    d_out: usize,
}

/// Outcome of checking a Choi state for complete positivity and trace preservation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCheck {
    pub min_eigenvalue: f64,
    pub trace: f64,
    /// `max |tr_out E - 1|`.
    pub marginal_error: f64,
    pub hermiticity: f64,
}

impl ChannelCheck {
    pub fn is_cptp(&self, d_in: usize, tol: f64) -> bool {
        self.min_eigenvalue >= -tol
            && (self.trace - d_in as f64).abs() < tol
            && self.marginal_error < tol
            && self.hermiticity < tol
    }
}

impl ChoiState {
    /// Wraps a raw `(d_in*d_out)`-square matrix. No physicality check.
    pub fn from_matrix(matrix: CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if matrix.rows() != d_in * d_out || !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {0}x{0}, got {1}x{2}",
                d_in * d_out,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(ChoiState { matrix, d_in, d_out })
    }

    /// Choi state of a linear map given as a closure on `d_in`-dimensional operators.
    pub fn from_map(d_in: usize, map: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let mut d_out = 0;
        let mut acc: Option<CMatrix> = None;
        for i in 0..d_in {
            for j in 0..d_in {
                let mut eij = CMatrix::zeros(d_in, d_in);
                eij[(i, j)] = re(1.0);
                let out = map(&eij);
                d_out = out.rows();
                let term = kron(&eij, &out);
                match acc.as_mut() {
                    Some(a) => *a += &term,
                    None => acc = Some(term),
                }
            }
        }
        ChoiState { matrix: acc.expect("d_in > 0"), d_in, d_out }
    }

    /// Choi state of `ρ ↦ Σ K ρ K†`.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self::from_map(d_in, |rho| apply_kraus(kraus, rho)))
    }

    /// Choi state of `ρ ↦ U ρ U†`.
    pub fn from_unitary(u: &CMatrix) -> Self {
        Self::from_kraus(std::slice::from_ref(u)).expect("single operator")
    }

    /// `|φ+><φ+|` for dimension `d`.
    pub fn identity(d: usize) -> Self {
        Self::from_unitary(&CMatrix::identity(d))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `𝓔[ρ] = tr_in[(ρ^T ⊗ 1) E]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "input operator must be {0}x{0}",
                self.d_in
            )));
        }
        let lifted = kron(&rho.transpose(), &CMatrix::identity(self.d_out));
        partial_trace(&(&lifted * &self.matrix), &[self.d_in, self.d_out], &[1])
    }

    /// Unit-trace density matrix `E / tr E`.
    pub fn normalized(&self) -> CMatrix {
        self.matrix.scale_re(1.0 / self.matrix.trace().re)
    }

    pub fn check(&self) -> Result<ChannelCheck> {
        let hermiticity = self.matrix.hermiticity_residual();
        let min_eigenvalue = herm_eig(&self.matrix)?.min();
        let marginal = partial_trace(&self.matrix, &[self.d_in, self.d_out], &[0])?;
        Ok(ChannelCheck {
            min_eigenvalue,
            trace: self.matrix.trace().re,
            marginal_error: marginal.max_abs_diff(&CMatrix::identity(self.d_in)),
            hermiticity,
        })
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        self.check().map(|c| c.is_cptp(self.d_in, tol)).unwrap_or(false)
    }
}

/// `Σ K ρ K†`.
pub fn apply_kraus(kraus: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(kraus[0].rows(), kraus[0].rows());
    for k in kraus {
        out += &rho.conjugate_by(k);
    }
    out
}

/// `max |Σ K†K - 1|`.
pub fn completeness_error(kraus: &[CMatrix]) -> f64 {
    let d = kraus[0].cols();
    let mut acc = CMatrix::zeros(d, d);
    for k in kraus {
        acc += &k.gram();
    }
    acc.max_abs_diff(&CMatrix::identity(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, pauli};

    #[test]
    fn identity_choi_is_bell_projector() {
        let e = ChoiState::identity(2);
        let want = CMatrix::from_real_rows(
            4,
            4,
            &[1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1.],
        );
        assert_eq!(e.matrix(), &want);
        assert!(e.is_cptp(CHANNEL_TOL));
    }

    #[test]
    fn apply_recovers_channel_action() {
        let h = CMatrix::from_real_rows(2, 2, &[1., 1., 1., -1.]).scale_re(1.0 / 2f64.sqrt());
        let kraus = vec![h.scale_re(0.8f64.sqrt()), pauli::y().scale_re(0.2f64.sqrt())];
        let e = ChoiState::from_kraus(&kraus).unwrap();
        let rho = CMatrix::from_row_slice(2, 2, &[re(0.6), c(0.1, -0.2), c(0.1, 0.2), re(0.4)]);
        let direct = apply_kraus(&kraus, &rho);
        assert!(e.apply(&rho).unwrap().max_abs_diff(&direct) < 1e-14);
        assert!(e.is_cptp(CHANNEL_TOL));
    }

    #[test]
    fn non_trace_preserving_map_is_flagged() {
        let e = ChoiState::from_kraus(&[pauli::plus()]).unwrap();
        let chk = e.check().unwrap();
        assert!(chk.marginal_error > 0.5);
        assert!(!e.is_cptp(CHANNEL_TOL));
    }

    #[test]
    fn from_matrix_checks_shape() {
        assert!(ChoiState::from_matrix(CMatrix::identity(3), 2, 2).is_err());
    }
}

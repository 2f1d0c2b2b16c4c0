//! Optimal witness search.
//!
//! For a fixed dynamics pair, minimize `tr[W1 E1] + tr[W2 E2]` over the
//! four-term witness family subject to the validity decomposition of
//! [`crate::witness`] and the normalization `tr W1 + tr W2 = 1`.
//!
//! Solved with ADMM on the real coordinates
//! `x = (w ∈ R^4, y ∈ R^51, vec Q ∈ R^256, vec R ∈ R^256)`: the affine
//! constraint set is handled by an exact projection, the PSD cones by
//! eigenvalue clamping.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron_all, partial_transpose, pauli, project_psd, c, re, CMatrix};
use crate::qubit_gravity::{dynamics_pair, DynamicsPair, TwoQubitProtocol};
use crate::witness::{
    decomposition_lhs, lift_tp_term, tp_term_marginal, WitnessOperators, ADDB_DIMS,
    TRANSPOSED_SLOTS,
};

/// Acceptance threshold for equality residuals and eigenvalues in [`verify_solution`].
pub const VERIFY_TOL: f64 = 1e-7;
/// Acceptance threshold for the normalization in [`verify_solution`].
pub const NORMALIZATION_TOL: f64 = 1e-8;

const N_W: usize = 4;
const N_Y: usize = 51;
const N_H: usize = 256;
const DIM: usize = 16;
const Q_OFF: usize = N_W + N_Y;
const R_OFF: usize = Q_OFF + N_H;
const N_X: usize = R_OFF + N_H;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// ADMM penalty.
    pub rho: f64,
    /// Over-relaxation in `(0, 2)`.
    pub alpha: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol: 1e-8, max_iter: 50_000, rho: 1.0, alpha: 1.6 }
    }
}

impl SolverSettings {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 || !(self.rho > 0.0) || !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(Error::InvalidParameter(format!("bad solver settings {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::MaxIter => "max_iter",
            SolverStatus::Infeasible => "infeasible",
        })
    }
}

/// Isometric coordinates of a Hermitian matrix: diagonal entries, then
/// `√2 Re m_ij`, `√2 Im m_ij` for `i < j`.
pub fn herm_to_coords(m: &CMatrix) -> Vec<f64> {
    let n = m.rows();
    let s = 2f64.sqrt();
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        v.push(m[(i, i)].re);
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            v.push(s * z.re);
            v.push(s * z.im);
        }
    }
    v
}

/// Inverse of [`herm_to_coords`].
pub fn coords_to_herm(v: &[f64], n: usize) -> CMatrix {
    let s = 1.0 / 2f64.sqrt();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = re(v[i]);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = c(v[k] * s, v[k + 1] * s);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Orthonormal basis of the allowed `Y^{ADD'}`: Pauli strings with a
/// non-identity factor on `D'`, plus `σk ⊗ 1 ⊗ 1`.
pub fn tp_basis() -> Vec<CMatrix> {
    let paulis = [pauli::identity(), pauli::x(), pauli::y(), pauli::z()];
    let norm = 1.0 / 8f64.sqrt();
    let mut out = Vec::with_capacity(N_Y);
    for a in 0..4 {
        for d in 0..4 {
            for dp in 0..4 {
                if dp != 0 || (d == 0 && a != 0) {
                    out.push(kron_all(&[&paulis[a], &paulis[d], &paulis[dp]]).scale_re(norm));
                }
            }
        }
    }
    out
}

fn basis_term(k: usize) -> WitnessOperators {
    let mut c = [0.0; 4];
    c[k] = 1.0;
    WitnessOperators::from_array(c)
}

/// Constraint data shared by every instance: `A x = b` and the projector onto it.
struct Structure {
    tp_basis: Vec<CMatrix>,
    /// `I - A^T (A A^T)^{-1} A`
    proj: DMatrix<f64>,
    /// `A^T (A A^T)^{-1} b`
    offset: DVector<f64>,
}

fn structure() -> &'static Structure {
    static S: OnceLock<Structure> = OnceLock::new();
    S.get_or_init(|| {
        let tp = tp_basis();
        let mut a = DMatrix::<f64>::zeros(N_H + 1, N_X);
        let mut set_col = |col: usize, coords: &[f64]| {
            for (row, &v) in coords.iter().enumerate() {
                a[(row, col)] = v;
            }
        };
        for k in 0..N_W {
            let l = decomposition_lhs(&basis_term(k));
            let neg: Vec<f64> = herm_to_coords(&l).iter().map(|v| -v).collect();
            set_col(k, &neg);
        }
        for (j, y) in tp.iter().enumerate() {
            set_col(N_W + j, &herm_to_coords(&lift_tp_term(y)));
        }
        for i in 0..N_H {
            let mut e = vec![0.0; N_H];
            e[i] = 1.0;
            set_col(Q_OFF + i, &e);
            let pt = partial_transpose(&coords_to_herm(&e, DIM), &ADDB_DIMS, &TRANSPOSED_SLOTS)
                .expect("fixed register");
            set_col(R_OFF + i, &herm_to_coords(&pt));
        }
        // tr W1 + tr W2 = 4 w11 = 1
        a[(N_H, 0)] = 4.0;
        let mut b = DVector::<f64>::zeros(N_H + 1);
        b[N_H] = 1.0;

        let gram = (&a * a.transpose()).cholesky().expect("constraint rows are independent");
        let solve_a = gram.solve(&a);
        let proj = DMatrix::<f64>::identity(N_X, N_X) - a.transpose() * &solve_a;
        let offset = a.transpose() * gram.solve(&b);
        Structure { tp_basis: tp, proj, offset }
    })
}

/// Witness-search instance for one dynamics pair.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub pair: DynamicsPair,
    /// `tr[B_k E]` for `B = (1⊗1 on E1, 1⊗σz on E1, σx⊗σx on E2, σz⊗σz on E2)`.
    pub objective: [f64; 4],
}

pub fn build_witness_sdp(pair: &DynamicsPair) -> SdpProblem {
    let mut objective = [0.0; 4];
    for (k, o) in objective.iter_mut().enumerate() {
        *o = basis_term(k).evaluate(pair);
    }
    SdpProblem { pair: pair.clone(), objective }
}

impl SdpProblem {
    /// `Q + R^{T_{D'B}} + Y ⊗ 1 - LHS(w)`.
    pub fn constraint_residual(
        &self,
        w: &WitnessOperators,
        q: &CMatrix,
        r: &CMatrix,
        y: &CMatrix,
    ) -> Result<CMatrix> {
        let r_pt = partial_transpose(r, &ADDB_DIMS, &TRANSPOSED_SLOTS)?;
        Ok(&(&(q + &r_pt) + &lift_tp_term(y)) - &decomposition_lhs(w))
    }

    pub fn objective_value(&self, w: &WitnessOperators) -> f64 {
        self.objective.iter().zip(w.to_array()).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolverStatus,
    pub w: WitnessOperators,
    pub q: CMatrix,
    pub r: CMatrix,
    /// Trace-preservation term on `A, D, D'`.
    pub y: CMatrix,
    pub objective: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

fn project_cones(z: &mut DVector<f64>) {
    for off in [Q_OFF, R_OFF] {
        let block = coords_to_herm(&z.as_slice()[off..off + N_H], DIM);
        let p = herm_to_coords(&project_psd(&block));
        z.as_mut_slice()[off..off + N_H].copy_from_slice(&p);
    }
}

/// ADMM; `w`, `Q`, `R`, `Y` are read from the cone-projected iterate.
pub fn solve_sdp(problem: &SdpProblem, settings: &SolverSettings) -> Result<SdpSolution> {
    settings.validate()?;
    let st = structure();
    let mut cost = DVector::<f64>::zeros(N_X);
    for k in 0..N_W {
        cost[k] = problem.objective[k];
    }
    let mut z = DVector::<f64>::zeros(N_X);
    let mut u = DVector::<f64>::zeros(N_X);
    let mut x = DVector::<f64>::zeros(N_X);
    let mut status = SolverStatus::MaxIter;
    let (mut rp, mut rd) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    for it in 1..=settings.max_iter {
        iterations = it;
        let v = &z - &u - &cost / settings.rho;
        st.proj.mul_to(&v, &mut x);
        x += &st.offset;
        let xh = &x * settings.alpha + &z * (1.0 - settings.alpha);
        let z_old = std::mem::replace(&mut z, &xh + &u);
        project_cones(&mut z);
        u += &xh - &z;
        rp = (&x - &z).norm();
        rd = settings.rho * (&z - &z_old).norm();
        if !rp.is_finite() || !rd.is_finite() || u.norm() > 1e12 {
            status = SolverStatus::Infeasible;
            break;
        }
        if rp < settings.tol && rd < settings.tol {
            status = SolverStatus::Optimal;
            break;
        }
    }

    let mut coeffs = [z[0], z[1], z[2], z[3]];
    let mut scale = 1.0;
    // w11 absorbs the normalization; rescaling keeps the cones and the
    // homogeneous equalities intact and makes 4 w11 = 1 exact.
    if status != SolverStatus::Infeasible && coeffs[0] > 0.0 {
        scale = 0.25 / coeffs[0];
        coeffs.iter_mut().for_each(|c| *c *= scale);
    }
    let w = WitnessOperators::from_array(coeffs);
    let zs = z.as_slice();
    let mut y = CMatrix::zeros(8, 8);
    for (j, b) in st.tp_basis.iter().enumerate() {
        y += &b.scale_re(zs[N_W + j] * scale);
    }
    let q = coords_to_herm(&zs[Q_OFF..Q_OFF + N_H], DIM).scale_re(scale);
    let r = coords_to_herm(&zs[R_OFF..R_OFF + N_H], DIM).scale_re(scale);
    Ok(SdpSolution {
        status,
        objective: problem.objective_value(&w),
        w,
        q,
        r,
        y,
        iterations,
        primal_residual: rp,
        dual_residual: rd,
    })
}

/// Independent re-check of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verification {
    pub feasible: bool,
    /// `tr[W1 E1] + tr[W2 E2]` recomputed from the Choi states.
    pub certified_w: f64,
    /// `max |Q + R^Γ + Y⊗1 - LHS|`.
    pub equality_residual: f64,
    pub min_eig_q: f64,
    pub min_eig_r: f64,
    pub normalization_error: f64,
    pub tp_residual: f64,
    /// `tr Z`, must be non-negative.
    pub classical_floor: f64,
}

pub fn verify_solution(problem: &SdpProblem, sol: &SdpSolution) -> Result<Verification> {
    let equality_residual = problem.constraint_residual(&sol.w, &sol.q, &sol.r, &sol.y)?.max_abs();
    let min_eig_q = herm_eig(&sol.q)?.min();
    let min_eig_r = herm_eig(&sol.r)?.min();
    let normalization_error = (sol.w.trace_norm_constraint() - 1.0).abs();
    let (z, tp_residual) = tp_term_marginal(&sol.y)?;
    let classical_floor = z.trace().re;
    let feasible = equality_residual <= VERIFY_TOL
        && min_eig_q >= -VERIFY_TOL
        && min_eig_r >= -VERIFY_TOL
        && normalization_error <= NORMALIZATION_TOL
        && tp_residual <= VERIFY_TOL
        && classical_floor >= -VERIFY_TOL;
    Ok(Verification {
        feasible,
        certified_w: sol.w.evaluate(&problem.pair),
        equality_residual,
        min_eig_q,
        min_eig_r,
        normalization_error,
        tp_residual,
        classical_floor,
    })
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub theta: f64,
    pub solution: SdpSolution,
    pub verification: Verification,
}

/// Solves the two-qubit protocol at each `θ` in parallel; output order follows input.
pub fn sweep(thetas: &[f64], settings: &SolverSettings) -> Result<Vec<SweepPoint>> {
    thetas
        .par_iter()
        .map(|&theta| {
            let problem = build_witness_sdp(&dynamics_pair(&TwoQubitProtocol::new(theta))?);
            let solution = solve_sdp(&problem, settings)?;
            let verification = verify_solution(&problem, &solution)?;
            Ok(SweepPoint { theta, solution, verification })
        })
        .collect()
}

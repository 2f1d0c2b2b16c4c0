//! Separable, memoryless global dynamics and their classical-memory realization.
//!
//! If both steps of the probe-memory evolution have product Kraus operators,
//! `Ξ1 = Σ_i (A_i ⊗ B_i) · (A_i ⊗ B_i)†` and
//! `Ξ2 = Σ_ij (C_j^i A_i ⊗ D_j^i B_i) · (…)†`, the reduced probe dynamics is
//! `E1[ρ] = Σ K_i ρ K_i†`, `E2[ρ] = Σ_i Φ_i[K_i ρ K_i†]` with
//! `K_i = sqrt(p_i) A_i`, `p_i = tr[B_i†B_i ρ_M]` and
//! `Φ_i` with Kraus operators `sqrt(tr[B_i†D_j^i†D_j^i B_i ρ_M]/p_i) C_j^i`.
//! Such pairs never need quantum memory, so every valid witness is
//! non-negative on them.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::choi::{apply_kraus, completeness_error, ChoiState};
use crate::error::{Error, Result};
use crate::linalg::{c, func_herm, kron, partial_trace, pauli, re, CMatrix, C64};
use crate::qubit_gravity::{phase_gate, validate_density_matrix, DynamicsPair, PairOrigin};

/// Completeness tolerance for Kraus sets.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Branches with `p_i` below this are dropped.
pub const BRANCH_CUTOFF: f64 = 1e-14;

/// Operator pair `(probe, memory)`.
pub type ProductOp = (CMatrix, CMatrix);

#[derive(Debug, Clone)]
pub struct SeparableDynamics {
    pub first_step: Vec<ProductOp>,
    /// `second_step[i]` follows first-step branch `i`.
    pub second_step: Vec<Vec<ProductOp>>,
    pub memory_state: CMatrix,
}

fn product_completeness(ops: &[ProductOp]) -> f64 {
    let joint: Vec<CMatrix> = ops.iter().map(|(a, b)| kron(a, b)).collect();
    completeness_error(&joint)
}

impl SeparableDynamics {
    pub fn validate(&self) -> Result<()> {
        if self.first_step.is_empty() || self.first_step.len() != self.second_step.len() {
            return Err(Error::DimensionMismatch(
                "second step needs one Kraus list per first-step branch".into(),
            ));
        }
        if self.first_step[0].0.shape() != (2, 2) {
            return Err(Error::DimensionMismatch("probe operators must be 2x2".into()));
        }
        let dm = self.memory_state.rows();
        validate_density_matrix(&self.memory_state, dm, 1e-10)?;
        let shapes_ok = self
            .first_step
            .iter()
            .chain(self.second_step.iter().flatten())
            .all(|(a, b)| a.shape() == (2, 2) && b.shape() == (dm, dm));
        if !shapes_ok {
            return Err(Error::DimensionMismatch("operator shapes differ from (probe, memory) dims".into()));
        }
        let err = product_completeness(&self.first_step);
        if err > COMPLETENESS_TOL {
            return Err(Error::NonPhysical(format!("first step is not trace preserving ({err:e})")));
        }
        for (i, step) in self.second_step.iter().enumerate() {
            if step.is_empty() {
                return Err(Error::InvalidParameter(format!("empty second step for branch {i}")));
            }
            let err = product_completeness(step);
            if err > COMPLETENESS_TOL {
                return Err(Error::NonPhysical(format!(
                    "second step of branch {i} is not trace preserving ({err:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn memory_dim(&self) -> usize {
        self.memory_state.rows()
    }
}

#[derive(Debug, Clone)]
pub struct ClassicalRealization {
    pub kraus_first: Vec<CMatrix>,
    /// Kraus lists of the conditional maps `Φ_i`.
    pub conditional_maps: Vec<Vec<CMatrix>>,
    /// `p_i = tr[B_i†B_i ρ_M]` of the retained branches.
    pub branch_probabilities: Vec<f64>,
}

impl ClassicalRealization {
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.kraus_first.is_empty() || self.kraus_first.len() != self.conditional_maps.len() {
            return Err(Error::DimensionMismatch("one conditional map per Kraus operator".into()));
        }
        let err = completeness_error(&self.kraus_first);
        if err > tol {
            return Err(Error::NonPhysical(format!("first map not trace preserving ({err:e})")));
        }
        for (i, phi) in self.conditional_maps.iter().enumerate() {
            let err = completeness_error(phi);
            if err > tol {
                return Err(Error::NonPhysical(format!("conditional map {i} not trace preserving ({err:e})")));
            }
        }
        Ok(())
    }
}

/// `K_i`, `G_j^i` from a separable dynamics; zero-probability branches are pruned.
pub fn classical_decomposition(sep: &SeparableDynamics) -> Result<ClassicalRealization> {
    sep.validate()?;
    let rho_m = &sep.memory_state;
    let mut kraus_first = Vec::new();
    let mut conditional_maps = Vec::new();
    let mut branch_probabilities = Vec::new();
    for ((a, b), step) in sep.first_step.iter().zip(&sep.second_step) {
        let branch_state = rho_m.conjugate_by(b);
        let p = branch_state.trace().re;
        if p < BRANCH_CUTOFF {
            continue;
        }
        kraus_first.push(a.scale_re(p.sqrt()));
        let phi = step
            .iter()
            .map(|(cj, dj)| {
                let q = branch_state.conjugate_by(dj).trace().re.max(0.0);
                cj.scale_re((q / p).sqrt())
            })
            .collect();
        conditional_maps.push(phi);
        branch_probabilities.push(p);
    }
    let real = ClassicalRealization { kraus_first, conditional_maps, branch_probabilities };
    real.validate(COMPLETENESS_TOL)?;
    Ok(real)
}

/// Choi states of `E1[ρ] = Σ K_i ρ K_i†` and `E2[ρ] = Σ_i Φ_i[K_i ρ K_i†]`.
pub fn realize_dynamics_pair(real: &ClassicalRealization) -> Result<DynamicsPair> {
    let e1 = ChoiState::from_kraus(&real.kraus_first)?;
    let e2 = ChoiState::from_map(2, |rho| {
        let mut out = CMatrix::zeros(2, 2);
        for (k, phi) in real.kraus_first.iter().zip(&real.conditional_maps) {
            out += &apply_kraus(phi, &rho.conjugate_by(k));
        }
        out
    });
    DynamicsPair::new(e1, e2, PairOrigin::ClassicalRealization { branches: real.kraus_first.len() })
}

/// Reference pair by evolving probe ⊗ memory and tracing out the memory.
pub fn trace_out_dynamics_pair(sep: &SeparableDynamics) -> Result<DynamicsPair> {
    sep.validate()?;
    let dm = sep.memory_dim();
    let reduce = |ops: &[CMatrix], rho: &CMatrix| {
        let joint = apply_kraus(ops, &kron(rho, &sep.memory_state));
        partial_trace(&joint, &[2, dm], &[0]).expect("register dims are consistent")
    };
    let first: Vec<CMatrix> = sep.first_step.iter().map(|(a, b)| kron(a, b)).collect();
    let second: Vec<CMatrix> = sep
        .first_step
        .iter()
        .zip(&sep.second_step)
        .flat_map(|((a, b), step)| {
            let ab = kron(a, b);
            step.iter().map(move |(cj, dj)| &kron(cj, dj) * &ab).collect::<Vec<_>>()
        })
        .collect();
    let e1 = ChoiState::from_map(2, |rho| reduce(&first, rho));
    let e2 = ChoiState::from_map(2, |rho| reduce(&second, rho));
    DynamicsPair::new(e1, e2, PairOrigin::Custom)
}

/// The two-qubit protocol without interaction as product steps:
/// `S ⊗ S`, then `SZ ⊗ S`.
pub fn no_interaction_protocol(memory_state: CMatrix) -> SeparableDynamics {
    let s = phase_gate();
    SeparableDynamics {
        first_step: vec![(s.clone(), s.clone())],
        second_step: vec![vec![(&s * &pauli::z(), s)]],
        memory_state,
    }
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `diag R` removed.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let qr = ginibre(rng, n).into_nalgebra().qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<C64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 { d / d.norm() } else { re(1.0) }
        })
        .collect();
    CMatrix::from_nalgebra(q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases)))
}

/// Random Kraus set `G_k (Σ G†G)^{-1/2}` with Ginibre `G_k`.
pub fn random_kraus_set(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<CMatrix> {
    let gs: Vec<CMatrix> = (0..count).map(|_| ginibre(rng, n)).collect();
    let mut s = CMatrix::zeros(n, n);
    for g in &gs {
        s += &g.gram();
    }
    let inv_sqrt = func_herm(&s.symmetrized(), |v| re(1.0 / v.sqrt())).expect("Gram sum is Hermitian");
    gs.iter().map(|g| g * &inv_sqrt).collect()
}

/// Random density matrix `G G† / tr`.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = ginibre(rng, n);
    let rho = (&g * &g.adjoint()).symmetrized();
    let tr = rho.trace().re;
    rho.scale_re(1.0 / tr)
}

/// One product step: memory Kraus set paired with probe unitaries, or probe
/// Kraus set paired with one memory unitary.
fn random_product_step(rng: &mut ChaCha8Rng, dm: usize, count: usize, memory_measured: bool) -> Vec<ProductOp> {
    if memory_measured {
        random_kraus_set(rng, dm, count)
            .into_iter()
            .map(|b| (haar_unitary(rng, 2), b))
            .collect()
    } else {
        let u = haar_unitary(rng, dm);
        random_kraus_set(rng, 2, count).into_iter().map(|a| (a, u.clone())).collect()
    }
}

/// Deterministic random separable dynamics with `n_first` first-step branches,
/// `n_second` conditional branches each, and a random memory state.
pub fn random_separable(seed: u64, n_first: usize, n_second: usize, memory_dim: usize) -> SeparableDynamics {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let memory_state = random_state(&mut rng, memory_dim);
    let first_step = random_product_step(&mut rng, memory_dim, n_first, true);
    let second_step = (0..n_first)
        .map(|i| random_product_step(&mut rng, memory_dim, n_second, i % 2 == 0))
        .collect();
    SeparableDynamics { first_step, second_step, memory_state }
}

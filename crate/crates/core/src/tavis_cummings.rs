// SPDX-License-Identifier: Apache-2.0

//! Two spins resonantly coupled to one truncated cavity mode.
//!
//! Subsystems are ordered `(S, M, E)`: the system spin, the field (the
//! memory) and the environment spin. With `σ = |0⟩⟨1|` and a truncated
//! annihilation operator `a|n⟩ = √n|n−1⟩` on `n_max` Fock levels,
//!
//! `H = ε(σ_S†σ_S + a†a + σ_E†σ_E) + g(a σ_S† + a σ_E† + h.c.)`.
//!
//! Both parts conserve the excitation number exactly, also after truncation.
//! The memory state is the fixed point of one interaction cycle of length
//! `τ`, `Λ_τ(ω) = tr_SE[U(τ)(ρ_S ⊗ ω ⊗ γ_E)U(τ)†]`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, tensor_product_all, ComplexMatrix, Spectrum, C64};
use crate::state::{partial_trace_matrix, DensityMatrix, Hamiltonian};
use crate::thermo::{check_beta, gibbs_state, trace_norm_hermitian};

/// Truncated annihilation operator on `n` Fock levels.
pub fn annihilation(n: usize) -> ComplexMatrix {
    let m =
        DMatrix::from_fn(n, n, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) });
    ComplexMatrix::from_matrix(m).expect("square")
}

/// Spin lowering operator `|0⟩⟨1|`.
pub fn spin_lowering() -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    ComplexMatrix::from_row_major(2, &[z, C64::new(1.0, 0.0), z, z]).expect("2x2")
}

#[derive(Clone, Debug)]
pub struct TcModel {
    pub epsilon: f64,
    pub g: f64,
    pub n_max: usize,
    pub beta: f64,
    free: ComplexMatrix,
    interaction: ComplexMatrix,
    total: ComplexMatrix,
    spectrum: Spectrum,
    system_number: ComplexMatrix,
    environment_number: ComplexMatrix,
}

pub fn build_tc_model(epsilon: f64, g: f64, n_max: usize, beta: f64) -> Result<TcModel> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be at least 2, got {n_max}")));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("ε must be positive, got {epsilon}")));
    }
    if !g.is_finite() || g < 0.0 {
        return Err(Error::Domain(format!("g must be nonnegative, got {g}")));
    }
    check_beta(beta)?;
    let (i2, im) = (ComplexMatrix::identity(2), ComplexMatrix::identity(n_max));
    let sigma = spin_lowering();
    let num2 = &sigma.adjoint() * &sigma;
    let a = annihilation(n_max);
    let a_full = tensor_product_all(&[&i2, &a, &i2]);
    let s_full = tensor_product_all(&[&sigma, &im, &i2]);
    let e_full = tensor_product_all(&[&i2, &im, &sigma]);
    let system_number = tensor_product_all(&[&num2, &im, &i2]);
    let environment_number = tensor_product_all(&[&i2, &im, &num2]);
    let field_number = &a_full.adjoint() * &a_full;

    let free = (&(&system_number + &field_number) + &environment_number).scale(epsilon);
    let hop = &(&a_full * &s_full.adjoint()) + &(&a_full * &e_full.adjoint());
    let interaction = (&hop + &hop.adjoint()).scale(g);
    let total = (&free + &interaction).hermitian_part();
    let spectrum = hermitian_spectrum(&total)?;
    Ok(TcModel { epsilon, g, n_max, beta, free, interaction, total, spectrum, system_number, environment_number })
}

impl TcModel {
    pub fn dims(&self) -> Vec<usize> {
        vec![2, self.n_max, 2]
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.total
    }

    pub fn free_hamiltonian(&self) -> &ComplexMatrix {
        &self.free
    }

    pub fn interaction(&self) -> &ComplexMatrix {
        &self.interaction
    }

    /// `σ_S†σ_S + a†a + σ_E†σ_E`.
    pub fn excitation_number(&self) -> ComplexMatrix {
        self.free.scale(1.0 / self.epsilon)
    }

    /// Thermal state of the environment spin, `H_E = ε σ†σ`.
    pub fn environment_gibbs(&self) -> DensityMatrix {
        let h = Hamiltonian::from_levels(&[0.0, self.epsilon]).expect("valid levels");
        gibbs_state(&h, self.beta).expect("finite β")
    }

    /// Thermal state of the field, `H_M = ε a†a`.
    pub fn field_gibbs(&self) -> DensityMatrix {
        let levels: Vec<f64> = (0..self.n_max).map(|n| self.epsilon * n as f64).collect();
        let h = Hamiltonian::from_levels(&levels).expect("valid levels");
        gibbs_state(&h, self.beta).expect("finite β")
    }

    /// `e^{−iHt}`.
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite, got {t}")));
        }
        Ok(self.spectrum.map(|l| C64::from_polar(1.0, -l * t)))
    }

    fn check_inputs(&self, rho_s: &DensityMatrix, omega: &ComplexMatrix) -> Result<()> {
        if rho_s.dim() != 2 {
            return Err(Error::Dimension(format!("system state must be a qubit, got dim {}", rho_s.dim())));
        }
        if omega.dim() != self.n_max {
            return Err(Error::Dimension(format!(
                "field state has dim {}, model has n_max {}",
                omega.dim(),
                self.n_max
            )));
        }
        Ok(())
    }

    fn joint(&self, rho_s: &DensityMatrix, omega: &ComplexMatrix) -> ComplexMatrix {
        tensor_product_all(&[rho_s.matrix(), omega, self.environment_gibbs().matrix()])
    }

    /// `Λ(ω) = tr_SE[U(ρ_S ⊗ ω ⊗ γ_E)U†]`, for any (not necessarily positive) `ω`.
    pub fn memory_map(
        &self,
        rho_s: &DensityMatrix,
        unitary: &ComplexMatrix,
        omega: &ComplexMatrix,
    ) -> Result<ComplexMatrix> {
        self.check_inputs(rho_s, omega)?;
        let evolved = self.joint(rho_s, omega).conjugate_by(unitary);
        Ok(partial_trace_matrix(&evolved, &self.dims(), &[1])?.0)
    }
}

pub fn propagator(model: &TcModel, t: f64) -> Result<ComplexMatrix> {
    model.propagator(t)
}

/// `(|0⟩ + e^{−βε/2}|1⟩)/√(1 + e^{−βε})`; its dephased form is the spin Gibbs state.
pub fn coherent_input_state(beta: f64, epsilon: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!("β must be finite and nonnegative, got {beta}")));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Domain(format!("ε must be positive, got {epsilon}")));
    }
    let w = (-beta * epsilon / 2.0).exp();
    let norm = (1.0 + w * w).sqrt();
    DensityMatrix::from_pure(&[C64::new(1.0 / norm, 0.0), C64::new(w / norm, 0.0)], vec![2])
}

/// Population of the top two Fock levels of a field state, or of the field
/// marginal of a state on `(S, M, E)`.
pub fn leakage_check(model: &TcModel, state: &DensityMatrix) -> Result<f64> {
    let field = if state.dims() == [model.n_max] {
        state.matrix().clone()
    } else if state.dims() == model.dims().as_slice() {
        partial_trace_matrix(state.matrix(), state.dims(), &[1])?.0
    } else {
        return Err(Error::Dimension(format!("state dims {:?} match neither the field nor the model", state.dims())));
    };
    Ok(field_leakage(&field))
}

fn field_leakage(field: &ComplexMatrix) -> f64 {
    let p = field.diagonal_real();
    p[p.len() - 2..].iter().sum()
}

#[derive(Clone, Copy, Debug)]
pub struct FixedPointOptions {
    /// Power iteration stops once `‖ω_{k+1} − ω_k‖₁` is at most this.
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Required `‖Λ(ω) − ω‖₁` of the returned state.
    pub residual_tol: f64,
    /// Largest accepted population of the top two Fock levels.
    pub max_leakage: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self { step_tol: 1e-12, max_iterations: 100_000, residual_tol: 1e-10, max_leakage: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub state: DensityMatrix,
    pub residual: f64,
    pub iterations: usize,
    /// The spectral fallback produced the state.
    pub spectral: bool,
    /// Singular values of `L − 1` below `1e-8`, `L` the matrix of `Λ`.
    pub unit_multiplicity: usize,
    pub leakage: f64,
}

/// Matrix of `Λ` acting on row-major vectorised field operators.
pub fn memory_superoperator(model: &TcModel, rho_s: &DensityMatrix, unitary: &ComplexMatrix) -> Result<DMatrix<C64>> {
    let n = model.n_max;
    let mut sup = DMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut basis = DMatrix::zeros(n, n);
            basis[(i, j)] = C64::new(1.0, 0.0);
            let image = model.memory_map(rho_s, unitary, &ComplexMatrix::from_matrix(basis)?)?;
            for (k, z) in image.to_row_major().into_iter().enumerate() {
                sup[(k, i * n + j)] = z;
            }
        }
    }
    Ok(sup)
}

/// Hermitian, positive, unit-trace matrix nearest in spirit to `m`.
fn to_density(m: &ComplexMatrix, dims: Vec<usize>) -> Result<DensityMatrix> {
    let spec = hermitian_spectrum(&m.hermitian_part())?;
    let total: f64 = spec.eigenvalues.iter().sum();
    // The null vector is defined up to sign.
    let sign = if total < 0.0 { -1.0 } else { 1.0 };
    let clamped: Vec<f64> = spec.eigenvalues.iter().map(|&l| (sign * l).max(0.0)).collect();
    let norm: f64 = clamped.iter().sum();
    if norm <= 0.0 {
        return Err(Error::Numerical("fixed-point vector has no positive part".into()));
    }
    let w: Vec<C64> = clamped.iter().map(|&l| C64::new(l / norm, 0.0)).collect();
    DensityMatrix::new(spec.with_weights(&w).hermitian_part(), dims)
}

/// Field state returned unchanged by one interaction cycle of length `tau`.
pub fn memory_fixed_point(
    model: &TcModel,
    rho_s: &DensityMatrix,
    tau: f64,
    opts: &FixedPointOptions,
) -> Result<FixedPoint> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Domain(format!("τ must be positive, got {tau}")));
    }
    let u = model.propagator(tau)?;
    let apply = |w: &ComplexMatrix| model.memory_map(rho_s, &u, w);
    let residual_of = |w: &ComplexMatrix| -> Result<f64> { Ok(trace_norm_hermitian(&(&apply(w)? - w))) };

    let mut omega = model.field_gibbs().matrix().clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        let next = apply(&omega)?.hermitian_part();
        let step = trace_norm_hermitian(&(&next - &omega));
        omega = next;
        iterations += 1;
        if step <= opts.step_tol {
            converged = true;
            break;
        }
    }

    let sup = memory_superoperator(model, rho_s, &u)?;
    let n2 = sup.nrows();
    let shifted = &sup - DMatrix::<C64>::identity(n2, n2);
    let svd = shifted.svd(false, true);
    let unit_multiplicity = svd.singular_values.iter().filter(|&&s| s < 1e-8).count();

    let mut spectral = false;
    let mut state = DensityMatrix::new(omega.scale(1.0 / omega.trace().re), vec![model.n_max]);
    let mut residual = match &state {
        Ok(s) => residual_of(s.matrix())?,
        Err(_) => f64::INFINITY,
    };
    if !converged || residual > opts.residual_tol {
        let v_t = svd.v_t.ok_or_else(|| Error::Numerical("singular vectors unavailable".into()))?;
        let k = (0..svd.singular_values.len())
            .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
            .expect("nonempty");
        // Rows of Vᵀ hold conjugated right singular vectors.
        let v: Vec<C64> = v_t.row(k).iter().map(|z| z.conj()).collect();
        let candidate = to_density(&ComplexMatrix::from_row_major(model.n_max, &v)?, vec![model.n_max])?;
        residual = residual_of(candidate.matrix())?;
        state = Ok(candidate);
        spectral = true;
    }
    let state = state?;
    if residual > opts.residual_tol {
        return Err(Error::FixedPoint { residual, iterations });
    }
    let leakage = field_leakage(state.matrix());
    if leakage > opts.max_leakage {
        return Err(Error::Truncation { leakage, limit: opts.max_leakage });
    }
    Ok(FixedPoint { state, residual, iterations, spectral, unit_multiplicity, leakage })
}

/// Heat and memory trajectories on a uniform grid over `[0, τ]`.
#[derive(Clone, Debug, Serialize)]
pub struct TcTrajectory {
    pub times: Vec<f64>,
    /// Heat into the environment spin, `ε tr[σ†σ(η_E(t) − γ_E)]`.
    pub q: Vec<f64>,
    /// `‖ω − η_M(t)‖₁`.
    pub delta: Vec<f64>,
    /// `tr[H η(t)] − tr[H η(0)]`.
    pub energy_drift: Vec<f64>,
    /// Top-two Fock-level population of `η_M(t)`.
    pub leakage: Vec<f64>,
    /// `tr[N η(t)] − tr[N η(0)]`, `N` the excitation number.
    pub number_drift: Vec<f64>,
    /// `ε tr[σ†σ(η_S(t) − ρ_S)]`.
    pub system_energy_change: Vec<f64>,
    pub fixed_point_residual: f64,
    pub fixed_point_iterations: usize,
    pub fixed_point_spectral: bool,
    pub unit_multiplicity: usize,
}

impl TcTrajectory {
    pub fn max_q(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn final_delta(&self) -> f64 {
        *self.delta.last().expect("at least two points")
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_abs_energy_drift(&self) -> f64 {
        self.energy_drift.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Solves for the memory fixed point at `tau`, then evolves
/// `ρ_S ⊗ ω ⊗ γ_E` over `steps` grid points `t_k = kτ/(steps−1)`.
pub fn run_trajectory(
    model: &TcModel,
    rho_s: &DensityMatrix,
    tau: f64,
    steps: usize,
    opts: &FixedPointOptions,
) -> Result<TcTrajectory> {
    if steps < 2 {
        return Err(Error::Validation(format!("trajectory needs at least 2 time points, got {steps}")));
    }
    let fp = memory_fixed_point(model, rho_s, tau, opts)?;
    let omega = fp.state.matrix();
    let initial = model.joint(rho_s, omega);
    let dims = model.dims();
    let number = model.excitation_number();
    let e0 = initial.trace_product(model.hamiltonian()).re;
    let n0 = initial.trace_product(&number).re;
    let env_energy0 = model.epsilon * initial.trace_product(&model.environment_number).re;
    let sys_energy0 = model.epsilon * initial.trace_product(&model.system_number).re;

    let times: Vec<f64> =
        (0..steps).map(|k| if k == steps - 1 { tau } else { tau * k as f64 / (steps - 1) as f64 }).collect();
    let points: Vec<[f64; 6]> = times
        .par_iter()
        .map(|&t| {
            let eta = initial.conjugate_by(&model.propagator(t)?);
            let field = partial_trace_matrix(&eta, &dims, &[1])?.0;
            Ok([
                model.epsilon * eta.trace_product(&model.environment_number).re - env_energy0,
                trace_norm_hermitian(&(omega - &field)),
                eta.trace_product(model.hamiltonian()).re - e0,
                field_leakage(&field),
                eta.trace_product(&number).re - n0,
                model.epsilon * eta.trace_product(&model.system_number).re - sys_energy0,
            ])
        })
        .collect::<Result<_>>()?;

    let worst = points.iter().map(|p| p[3]).fold(0.0, f64::max);
    if worst > opts.max_leakage {
        return Err(Error::Truncation { leakage: worst, limit: opts.max_leakage });
    }
    let column = |i: usize| points.iter().map(|p| p[i]).collect::<Vec<f64>>();
    let mut q = column(0);
    let mut delta = column(1);
    // The initial state is exact; remove rounding from the t = 0 point.
    q[0] = 0.0;
    delta[0] = 0.0;
    Ok(TcTrajectory {
        times,
        q,
        delta,
        energy_drift: column(2),
        leakage: column(3),
        number_drift: column(4),
        system_energy_change: column(5),
        fixed_point_residual: fp.residual,
        fixed_point_iterations: fp.iterations,
        fixed_point_spectral: fp.spectral,
        unit_multiplicity: fp.unit_multiplicity,
    })
}

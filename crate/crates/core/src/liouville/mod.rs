//! Driven-dissipative steady state of a single metamolecule on the truncated
//! Fock ⊗ qubit space.
//!
//! The rotating-frame generator is
//!
//! ```text
//! L(ρ) = -(i/ℏ)[H, ρ] + Σ_j (γ_j/2)(2 ĉ_j ρ ĉ_j† − {ĉ_j†ĉ_j, ρ})
//! H    = ℏΔ₀ â†â + ℏΔ_x σ̂†σ̂ + iℏg(â†σ̂ − âσ̂†)
//!        − μ(E₀σ̂† + E₀*σ̂) − (E₀χ â† + (E₀χ)* â)
//! ```
//!
//! with ĉ₀ = â (rate γ₀) and ĉ_x = σ̂ (rate γ_x). Its expectation dynamics
//! reproduce the weak-field Maxwell-Bloch equations without factorization, so
//! it remains valid at arbitrary drive strength where the two-level
//! saturation washes out the Fano dip.
//!
//! The steady state solves L(ρ_SS) = 0 with Tr ρ_SS = 1 on the vectorized
//! (column-stacked) space: dense trace-replaced LU for superoperator
//! dimensions below [`DENSE_SUPEROP_LIMIT`], shifted inverse iteration with
//! BiCGSTAB inner solves above it.

pub mod sparse;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::metamolecule::MetamoleculeParams;
use crate::spectrum::{validate_grid, ComplexSpectrum};
use sparse::{bicgstab_shifted, CsrMatrix};

/// Truncation of the bosonic (LSP) Hilbert space; the qubit factor is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    /// Fock-space dimension (photon numbers 0..fock_dim-1). 15 is the
    /// validated lower bound for the drives studied here; convergence is
    /// checked against fock_dim + 5.
    pub fock_dim: usize,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        Self { fock_dim: 15 }
    }
}

impl HilbertConfig {
    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < 2 {
            return Err(Error::domain(format!("fock_dim must be at least 2, got {fock_dim}")));
        }
        Ok(Self { fock_dim })
    }

    /// Joint Hilbert-space dimension, 2 × fock_dim.
    pub fn total_dim(&self) -> usize {
        2 * self.fock_dim
    }
}

/// Basis index of |n_fock, q⟩ with q = 0 (ground) or 1 (excited).
#[inline]
fn idx(n_fock: usize, q: usize) -> usize {
    2 * n_fock + q
}

/// Annihilation operator of the LSP mode, â ⊗ 1₂.
pub fn mnp_annihilation(cfg: &HilbertConfig) -> DMatrix<C64> {
    let n = cfg.total_dim();
    let mut a = DMatrix::<C64>::zeros(n, n);
    for nf in 1..cfg.fock_dim {
        for q in 0..2 {
            a[(idx(nf - 1, q), idx(nf, q))] = C64::new((nf as f64).sqrt(), 0.0);
        }
    }
    a
}

/// Lowering operator of the QD, 1 ⊗ σ̂ with σ̂ = |g⟩⟨e|.
pub fn qd_lowering(cfg: &HilbertConfig) -> DMatrix<C64> {
    let n = cfg.total_dim();
    let mut s = DMatrix::<C64>::zeros(n, n);
    for nf in 0..cfg.fock_dim {
        s[(idx(nf, 0), idx(nf, 1))] = C64::new(1.0, 0.0);
    }
    s
}

/// Largest deviation from hermiticity relative to the largest entry.
fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut max_entry = 0.0f64;
    let mut max_defect = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            max_entry = max_entry.max(m[(r, c)].norm());
            max_defect = max_defect.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    if max_entry == 0.0 {
        0.0
    } else {
        max_defect / max_entry
    }
}

/// Rotating-frame Hamiltonian of the driven metamolecule (J units).
///
/// Fails hard if the construction loses hermiticity.
pub fn build_hamiltonian(p: &MetamoleculeParams, omega: f64, cfg: &HilbertConfig) -> Result<DMatrix<C64>> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    let e0 = C64::new(p.field_amplitude()?, 0.0);
    let (delta_0, delta_x) = p.detunings(omega);
    let a = mnp_annihilation(cfg);
    let s = qd_lowering(cfg);
    let ad = a.adjoint();
    let sd = s.adjoint();
    let i = C64::i();
    let mut h = &ad * &a * C64::new(HBAR * delta_0, 0.0);
    h += &sd * &s * C64::new(HBAR * delta_x, 0.0);
    h += (&ad * &s - &a * &sd) * (i * HBAR * p.g);
    h -= &sd * (e0 * p.qd.mu) + &s * (e0.conj() * p.qd.mu);
    h -= &ad * (e0 * p.chi) + &a * (e0 * p.chi).conj();
    let defect = hermiticity_defect(&h);
    if defect > 1e-12 {
        return Err(Error::invariant(format!(
            "rotating-frame Hamiltonian lost hermiticity (relative defect {defect:.3e})"
        )));
    }
    Ok(h)
}

/// Sparse Lindblad generator acting on column-stacked density matrices
/// (units rad/s; dimension n² × n²).
#[derive(Debug, Clone)]
pub struct SuperOperator {
    hilbert_dim: usize,
    mat: CsrMatrix,
}

impl SuperOperator {
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn dim(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.mat
    }

    /// L applied to a vectorized density matrix.
    pub fn apply(&self, rho_vec: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.mat.matvec(rho_vec, &mut out);
        out
    }

    /// L† applied to a vectorized operator; L†(1) = 0 expresses trace
    /// preservation.
    pub fn apply_adjoint(&self, op_vec: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.mat.adjoint_matvec(op_vec, &mut out);
        out
    }

    /// Spectral scale used to normalize residuals (max diagonal magnitude,
    /// falling back to the largest entry).
    pub fn scale(&self) -> f64 {
        let d = self.mat.diagonal().iter().map(|v| v.norm()).fold(0.0, f64::max);
        if d > 0.0 {
            d
        } else {
            self.mat.max_abs().max(1.0)
        }
    }

    pub fn dense(&self) -> DMatrix<C64> {
        let nn = self.dim();
        let mut m = DMatrix::<C64>::zeros(nn, nn);
        for (r, c, v) in self.mat.iter_entries() {
            m[(r, c)] = v;
        }
        m
    }
}

/// Vectorization index of ρ[r, c] under column stacking.
#[inline]
fn vec_idx(n: usize, r: usize, c: usize) -> usize {
    c * n + r
}

/// Builds the Lindblad superoperator for Hamiltonian `h` and the two decay
/// channels (ĉ₀ = â, γ₀) and (ĉ_x = σ̂, γ_x).
pub fn build_liouvillian(h: &DMatrix<C64>, rates: (f64, f64), cfg: &HilbertConfig) -> Result<SuperOperator> {
    let n = cfg.total_dim();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::invariant(format!(
            "Hamiltonian dimension {}x{} does not match Hilbert dimension {n}",
            h.nrows(),
            h.ncols()
        )));
    }
    let (gamma_0, gamma_x) = rates;
    if gamma_0 < 0.0 || gamma_x < 0.0 {
        return Err(Error::domain("decay rates must be non-negative".to_string()));
    }
    if hermiticity_defect(h) > 1e-12 {
        return Err(Error::invariant("Liouvillian construction needs a Hermitian H".to_string()));
    }

    let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
    let minus_i_over_hbar = C64::new(0.0, -1.0 / HBAR);

    // -(i/hbar) (H rho - rho H)
    for r in 0..n {
        for s in 0..n {
            let hv = h[(r, s)];
            if hv == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                // vec(H rho): [(r,c) <- (s,c)] gets H[r,s]
                triplets.push((vec_idx(n, r, c), vec_idx(n, s, c), minus_i_over_hbar * hv));
            }
        }
    }
    for t in 0..n {
        for c in 0..n {
            let hv = h[(t, c)];
            if hv == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..n {
                // vec(rho H): [(r,c) <- (r,t)] gets H[t,c]
                triplets.push((vec_idx(n, r, c), vec_idx(n, r, t), -minus_i_over_hbar * hv));
            }
        }
    }

    let mut add_dissipator = |c_op: &DMatrix<C64>, rate: f64| {
        if rate == 0.0 {
            return;
        }
        let half = 0.5 * rate;
        let cd_c = c_op.adjoint() * c_op;
        // 2 c rho c^dag -> (conj(c) ⊗ c)
        for r in 0..n {
            for s in 0..n {
                let cv = c_op[(r, s)];
                if cv == C64::new(0.0, 0.0) {
                    continue;
                }
                for cc in 0..n {
                    for t in 0..n {
                        let cw = c_op[(cc, t)];
                        if cw == C64::new(0.0, 0.0) {
                            continue;
                        }
                        triplets.push((
                            vec_idx(n, r, cc),
                            vec_idx(n, s, t),
                            C64::new(2.0 * half, 0.0) * cv * cw.conj(),
                        ));
                    }
                }
            }
        }
        // -(c†c rho + rho c†c)
        for r in 0..n {
            for s in 0..n {
                let m = cd_c[(r, s)];
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    triplets.push((vec_idx(n, r, c), vec_idx(n, s, c), C64::new(-half, 0.0) * m));
                    triplets.push((vec_idx(n, c, r), vec_idx(n, c, s), C64::new(-half, 0.0) * m.conj()));
                }
            }
        }
    };
    add_dissipator(&mnp_annihilation(cfg), gamma_0);
    add_dissipator(&qd_lowering(cfg), gamma_x);

    Ok(SuperOperator {
        hilbert_dim: n,
        mat: CsrMatrix::from_triplets(n * n, n * n, triplets),
    })
}

/// Steady-state solver tolerances.
const RESIDUAL_TOL: f64 = 1e-9;
const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const MIN_EIG_TOL: f64 = -1e-8;

/// Superoperator dimension below which the dense trace-replaced solve is
/// used; above it the sparse inverse-iteration path takes over.
pub const DENSE_SUPEROP_LIMIT: usize = 2500;

/// Normalized stationary density matrix with its solver diagnostics.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// ρ_SS, Hermitized and trace-normalized.
    pub rho: DMatrix<C64>,
    /// ‖L vec(ρ)‖₂ / (scale · ‖vec(ρ)‖₂).
    pub residual: f64,
    /// Smallest eigenvalue of ρ (≥ −1e-8 within solver tolerance).
    pub min_eigenvalue: f64,
    /// Relative hermiticity defect of the raw solver output.
    pub hermiticity_defect: f64,
}

impl SteadyState {
    pub fn trace(&self) -> C64 {
        self.rho.diagonal().iter().sum()
    }

    /// ⟨A⟩ = Tr[ρ A].
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        let n = self.rho.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                acc += self.rho[(r, c)] * op[(c, r)];
            }
        }
        acc
    }

    /// Copy of ρ with negative eigenvalues clamped to zero and the trace
    /// renormalized, for reporting.
    pub fn clamped_positive(&self) -> DMatrix<C64> {
        let eig = self.rho.clone().symmetric_eigen();
        let clamped = eig.eigenvalues.map(|x| x.max(0.0));
        let basis = &eig.eigenvectors;
        let mut out = basis * DMatrix::from_diagonal(&clamped.map(|x| C64::new(x, 0.0))) * basis.adjoint();
        let tr: C64 = out.diagonal().iter().sum();
        if tr.norm() > 0.0 {
            out /= tr;
        }
        out
    }
}

fn finalize_steady_state(l: &SuperOperator, raw: Vec<C64>, residual_history: &mut Vec<f64>) -> Result<SteadyState> {
    let n = l.hilbert_dim();
    if raw.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::singular("steady-state solve produced non-finite entries".to_string()));
    }
    let mut rho = DMatrix::<C64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            rho[(r, c)] = raw[vec_idx(n, r, c)];
        }
    }
    let defect = hermiticity_defect(&rho);
    if defect > HERMITICITY_TOL {
        return Err(Error::invariant(format!(
            "steady state is not Hermitian (relative defect {defect:.3e})"
        )));
    }
    let herm = (rho.adjoint() + &rho) * C64::new(0.5, 0.0);
    let tr: C64 = herm.diagonal().iter().sum();
    if tr.norm() < 1e-8 {
        return Err(Error::singular(format!("steady-state trace collapsed ({tr})")));
    }
    let mut rho = herm / tr;
    let tr1: C64 = rho.diagonal().iter().sum();
    if (tr1 - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::invariant(format!("trace normalization failed: {tr1}")));
    }
    // exact unit trace for downstream consumers
    rho /= tr1;

    let rho_vec: Vec<C64> = (0..n * n)
        .map(|i| {
            let (c, r) = (i / n, i % n);
            rho[(r, c)]
        })
        .collect();
    let lr = l.apply(&rho_vec);
    let num: f64 = lr.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = rho_vec.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let residual = num / (l.scale() * den);
    residual_history.push(residual);
    if residual > RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            reason: format!("steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL:.1e}"),
            history: residual_history.clone(),
        });
    }

    let eig = rho.clone().symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < MIN_EIG_TOL {
        return Err(Error::invariant(format!(
            "steady state lost positivity: min eigenvalue {min_eigenvalue:.3e}"
        )));
    }
    Ok(SteadyState { rho, residual, min_eigenvalue, hermiticity_defect: defect })
}

/// Dense path: replace the ρ₀₀ row of L with the trace functional and solve
/// the resulting nonsingular system by LU.
pub fn steady_state_dense(l: &SuperOperator) -> Result<SteadyState> {
    use faer::prelude::*;
    let n = l.hilbert_dim();
    let nn = l.dim();
    let mut m = faer::Mat::<faer::c64>::zeros(nn, nn);
    for (r, c, v) in l.matrix().iter_entries() {
        if r == 0 {
            continue;
        }
        m[(r, c)] = faer::c64::new(v.re, v.im);
    }
    for k in 0..n {
        m[(0, vec_idx(n, k, k))] = faer::c64::new(1.0, 0.0);
    }
    let mut b = faer::Mat::<faer::c64>::zeros(nn, 1);
    b[(0, 0)] = faer::c64::new(1.0, 0.0);
    let x = m.partial_piv_lu().solve(&b);
    let raw: Vec<C64> = (0..nn).map(|i| C64::new(x[(i, 0)].re, x[(i, 0)].im)).collect();
    finalize_steady_state(l, raw, &mut Vec::new())
}

/// Sparse path: shifted inverse iteration x ← (L − σ)⁻¹x with σ a small
/// positive real shift; inner systems are solved inexactly by BiCGSTAB.
pub fn steady_state_sparse(l: &SuperOperator) -> Result<SteadyState> {
    let n = l.hilbert_dim();
    let nn = l.dim();
    let scale = l.scale();
    let shift = C64::new(1e-8 * scale, 0.0);
    let mut x: Vec<C64> = (0..nn)
        .map(|i| {
            let (c, r) = (i / n, i % n);
            if r == c {
                C64::new(1.0 / n as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    for _ in 0..16 {
        let (y, _inner_res) = bicgstab_shifted(l.matrix(), shift, &x, 1e-12, 300 * nn);
        let norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::singular("inverse iteration collapsed to zero vector".to_string()));
        }
        x = y.into_iter().map(|v| v / norm).collect();
        let lx = l.apply(&x);
        let res = lx.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() / scale;
        history.push(res);
        let improved = res < 0.5 * best;
        best = best.min(res);
        // iterate well past the contract tolerance so the state itself is
        // resolved, then stop once progress stalls
        if res < 1e-13 || (!improved && history.len() >= 2) {
            break;
        }
    }
    finalize_steady_state(l, x, &mut history)
}

/// Solves L(ρ_SS) = 0, dispatching on the superoperator dimension.
pub fn steady_state(l: &SuperOperator) -> Result<SteadyState> {
    if l.dim() < DENSE_SUPEROP_LIMIT {
        steady_state_dense(l)
    } else {
        steady_state_sparse(l)
    }
}

/// Intensity-dependent polarizability from the master-equation steady state:
/// α = (χ*⟨â⟩ + μ⟨σ̂⟩)/E₀.
pub fn nonlinear_polarizability(p: &MetamoleculeParams, omega: f64, cfg: &HilbertConfig) -> Result<C64> {
    let e0 = p.field_amplitude()?;
    if e0 == 0.0 {
        return Err(Error::domain("polarizability is undefined at zero drive".to_string()));
    }
    let h = build_hamiltonian(p, omega, cfg)?;
    let l = build_liouvillian(&h, (p.mnp.gamma_0, p.qd.gamma_x), cfg)?;
    let ss = steady_state(&l)?;
    let a = ss.expectation(&mnp_annihilation(cfg));
    let s = ss.expectation(&qd_lowering(cfg));
    Ok((p.chi.conj() * a + p.qd.mu * s) / e0)
}

/// Sweeps [`nonlinear_polarizability`] over a strictly increasing grid;
/// points are independent and evaluated in parallel.
pub fn nonlinear_polarizability_spectrum(
    p: &MetamoleculeParams,
    grid: &[f64],
    cfg: &HilbertConfig,
) -> Result<ComplexSpectrum> {
    validate_grid(grid)?;
    let values = grid
        .par_iter()
        .map(|&w| nonlinear_polarizability(p, w, cfg))
        .collect::<Result<Vec<_>>>()?;
    ComplexSpectrum::new(grid.to_vec(), values)
}

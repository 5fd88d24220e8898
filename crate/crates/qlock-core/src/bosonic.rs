//! Analytic bosonic formulas and Fock-truncated numerics: thermal entropy
//! g(N), Wehrl entropy by quadrature, coherent-state locking bounds,
//! thermal-maximizer verification, heterodyne information.
//!
//! The infinite-dimensional mode is truncated to a Fock cutoff; states carry
//! a "well-truncated" flag (tail mass above cutoff−2 below 1e-6) and the
//! quadrature grid covers radius max(6√(N̄+1), √cutoff), where Gaussian decay
//! makes the neglected tail irrelevant at the 1e-4 accuracy target.

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::{self, cr, CMat, CVec, DensityOperator, C64};
use crate::quad::gauss_legendre_on;

pub const LOG2_E: f64 = std::f64::consts::LOG2_E;
/// Tail mass threshold for the well-truncated flag.
pub const TAIL_TOL: f64 = 1e-6;
/// Default Fock cutoff; doubled automatically until the tail condition holds.
pub const DEFAULT_CUTOFF: usize = 40;

// ---------------------------------------------------------------------------
// Closed-form bounds
// ---------------------------------------------------------------------------

/// Entropy of a thermal state with mean photon number N:
/// g(N) = (N+1)·log2(N+1) − N·log2 N, with g(0) = 0.
pub fn g_func(n: f64) -> Result<f64> {
    if n < 0.0 {
        return Err(Error::Domain(format!("g(N): N = {n} negative")));
    }
    if n == 0.0 {
        return Ok(0.0);
    }
    // ln_1p keeps the (N+1)·log2(N+1) term accurate for small N.
    Ok((n + 1.0) * n.ln_1p() * LOG2_E - n * n.log2())
}

/// Strong locking bound for coherent-state encodings at mean photon number
/// N_S: g(N_S) − log2(1+N_S). Bounded by log2(e) for every N_S.
pub fn strong_lock_bound_cs(n_s: f64) -> Result<f64> {
    if n_s < 0.0 {
        return Err(Error::Domain(format!("strong bound: N_S = {n_s} negative")));
    }
    if n_s == 0.0 {
        return Ok(0.0);
    }
    // Cancellation-free form: g(N) − log2(1+N) = N·log2(1 + 1/N).
    let v = n_s * (1.0 / n_s).ln_1p() * LOG2_E;
    debug_assert!(v <= LOG2_E + 1e-12);
    Ok(v)
}

/// Private (= quantum) capacity of the pure-loss channel with transmissivity
/// η and mean input photon number N_S: max{0, g(ηN_S) − g((1−η)N_S)}.
pub fn pure_loss_private_capacity(eta: f64, n_s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("η = {eta} outside [0,1]")));
    }
    Ok((g_func(eta * n_s)? - g_func((1.0 - eta) * n_s)?).max(0.0))
}

/// Weak locking bound for coherent-state encodings over the pure-loss
/// channel: private capacity plus g((1−η)N_S) − log2(1+(1−η)N_S). The excess
/// over the private capacity never exceeds log2(e).
pub fn weak_lock_bound_pure_loss(eta: f64, n_s: f64) -> Result<f64> {
    let excess = strong_lock_bound_cs((1.0 - eta) * n_s)?;
    Ok(pure_loss_private_capacity(eta, n_s)? + excess)
}

/// Small-N_S expansions of g, log2(1+N_S) and the strong bound.
#[derive(Debug, Clone, Copy)]
pub struct SmallNsExpansion {
    /// (−N_S ln N_S + N_S + N_S²/2)·log2 e
    pub g_approx: f64,
    /// (N_S − N_S²/2)·log2 e
    pub log_approx: f64,
    /// (−N_S ln N_S + N_S²)·log2 e
    pub bound_approx: f64,
    /// False when N_S ≥ 0.1, outside the expansion's intended range.
    pub within_validity: bool,
}

pub fn small_ns_expansion(n_s: f64) -> Result<SmallNsExpansion> {
    if n_s <= 0.0 {
        return Err(Error::Domain("expansion needs N_S > 0".into()));
    }
    let ln = n_s.ln();
    Ok(SmallNsExpansion {
        g_approx: (-n_s * ln + n_s + n_s * n_s / 2.0) * LOG2_E,
        log_approx: (n_s - n_s * n_s / 2.0) * LOG2_E,
        bound_approx: (-n_s * ln + n_s * n_s) * LOG2_E,
        within_validity: n_s < 0.1,
    })
}

// ---------------------------------------------------------------------------
// Fock-space operators
// ---------------------------------------------------------------------------

/// Single-mode state in the number basis with an explicit cutoff.
#[derive(Debug, Clone)]
pub struct FockOperator {
    op: DensityOperator,
    cutoff: usize,
}

impl FockOperator {
    pub fn new(op: DensityOperator) -> Self {
        let cutoff = op.dim();
        Self { op, cutoff }
    }

    /// Thermal state with mean photon number `nbar`; the cutoff starts at
    /// `DEFAULT_CUTOFF` and doubles until the tail condition holds.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if nbar < 0.0 {
            return Err(Error::Domain("thermal: negative mean photon number".into()));
        }
        let mut cutoff = DEFAULT_CUTOFF;
        loop {
            let s = Self::thermal_at_cutoff(nbar, cutoff)?;
            if s.well_truncated() {
                return Ok(s);
            }
            cutoff *= 2;
            if cutoff > qcore::MAX_DIM {
                return Err(Error::Capability(format!(
                    "thermal state at N = {nbar} does not truncate within {}",
                    qcore::MAX_DIM
                )));
            }
        }
    }

    pub fn thermal_at_cutoff(nbar: f64, cutoff: usize) -> Result<Self> {
        let mut diag = CVec::zeros(cutoff);
        if nbar == 0.0 {
            diag[0] = cr(1.0);
        } else {
            let r = nbar / (nbar + 1.0);
            let mut p = 1.0 / (nbar + 1.0);
            let mut total = 0.0;
            for n in 0..cutoff {
                diag[n] = cr(p);
                total += p;
                p *= r;
            }
            // Renormalize the truncated tail into the distribution.
            for n in 0..cutoff {
                diag[n] /= cr(total);
            }
        }
        Ok(Self { op: DensityOperator::new(CMat::from_diagonal(&diag))?, cutoff })
    }

    /// Coherent state |α⟩ truncated to `cutoff`.
    pub fn coherent(alpha: C64, cutoff: usize) -> Result<Self> {
        let v = coherent_vector(alpha, cutoff);
        let n2 = v.norm_squared();
        if (1.0 - n2).abs() > TAIL_TOL {
            return Err(Error::Validation(format!(
                "coherent state |α|²={} poorly truncated at cutoff {cutoff}",
                alpha.norm_sqr()
            )));
        }
        let v = v.scale(1.0 / n2.sqrt());
        Ok(Self { op: DensityOperator::from_pure(&v)?, cutoff })
    }

    /// Number state |n⟩.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::DimMismatch(format!("|{n}⟩ outside cutoff {cutoff}")));
        }
        Ok(Self {
            op: DensityOperator::from_pure(&qcore::basis_vec(cutoff, n))?,
            cutoff,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn density(&self) -> &DensityOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMat {
        self.op.matrix()
    }

    /// Mean photon number Σ n ρ_nn.
    pub fn mean_photon(&self) -> f64 {
        (0..self.cutoff)
            .map(|n| n as f64 * self.matrix()[(n, n)].re)
            .sum()
    }

    /// First moment Tr[aρ] = Σ √(n+1)·ρ_{n+1,n}.
    pub fn first_moment(&self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for n in 0..self.cutoff - 1 {
            acc += self.matrix()[(n + 1, n)] * cr(((n + 1) as f64).sqrt());
        }
        acc
    }

    /// Tail mass at or above cutoff−2 stays below the tolerance.
    pub fn well_truncated(&self) -> bool {
        let tail: f64 = (self.cutoff.saturating_sub(2)..self.cutoff)
            .map(|n| self.matrix()[(n, n)].re)
            .sum();
        tail <= TAIL_TOL
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        qcore::von_neumann_entropy(&self.op)
    }
}

/// Coherent-state coefficient vector ⟨n|α⟩ = e^{−|α|²/2} αⁿ/√(n!).
pub fn coherent_vector(alpha: C64, cutoff: usize) -> CVec {
    let mut v = CVec::zeros(cutoff);
    let mut amp = cr((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..cutoff {
        v[n] = amp;
        amp = amp * alpha / cr(((n + 1) as f64).sqrt());
    }
    v
}

/// Quantum relative entropy D(ρ‖σ) in bits (σ must dominate ρ's support).
pub fn quantum_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch("relative entropy: unequal dims".into()));
    }
    let (svals, svecs) = qcore::hermitian_eigen(sigma.matrix());
    let mut tr_rho_log_sigma = 0.0;
    for (k, &s) in svals.iter().enumerate() {
        let v = svecs.column(k);
        let overlap = (v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0);
        if overlap > 1e-14 {
            if s <= 1e-14 {
                return Err(Error::Degenerate(
                    "relative entropy infinite: support mismatch".into(),
                ));
            }
            tr_rho_log_sigma += overlap * s.log2();
        }
    }
    let neg_h = -qcore::von_neumann_entropy(rho);
    Ok(neg_h - tr_rho_log_sigma)
}

// ---------------------------------------------------------------------------
// Husimi Q function and Wehrl entropy
// ---------------------------------------------------------------------------

/// Polar quadrature grid with precomputed coherent vectors: Gauss-Legendre
/// radial nodes, uniform angles, weights absorbing r dr dθ / π.
#[derive(Debug, Clone)]
pub struct QFunctionGrid {
    points: Vec<C64>,
    weights: Vec<f64>,
    coherent: Vec<CVec>,
    cutoff: usize,
    radius: f64,
}

impl QFunctionGrid {
    pub fn new(radius: f64, n_radial: usize, n_angular: usize, cutoff: usize) -> Self {
        let (r_nodes, r_weights) = gauss_legendre_on(n_radial, 0.0, radius);
        let dtheta = 2.0 * std::f64::consts::PI / n_angular as f64;
        let mut points = Vec::with_capacity(n_radial * n_angular);
        let mut weights = Vec::with_capacity(n_radial * n_angular);
        let mut coherent = Vec::with_capacity(n_radial * n_angular);
        for (r, wr) in r_nodes.iter().zip(&r_weights) {
            for a in 0..n_angular {
                let th = dtheta * a as f64;
                let beta = C64::new(r * th.cos(), r * th.sin());
                points.push(beta);
                weights.push(r * wr * dtheta / std::f64::consts::PI);
                coherent.push(coherent_vector(beta, cutoff));
            }
        }
        Self { points, weights, coherent, cutoff, radius }
    }

    /// Grid sized for a state: radius max(6√(N̄+1), √cutoff), 160 radial and
    /// 128 angular nodes.
    pub fn for_state(rho: &FockOperator) -> Self {
        let radius = (6.0 * (rho.mean_photon() + 1.0).sqrt()).max((rho.cutoff() as f64).sqrt());
        Self::new(radius, 160, 128, rho.cutoff())
    }

    /// Grid extended to cover displaced states out to |α| = offset.
    pub fn for_state_with_offset(rho: &FockOperator, offset: f64) -> Self {
        let radius = (6.0 * (rho.mean_photon() + 1.0).sqrt() + offset)
            .max((rho.cutoff() as f64).sqrt());
        Self::new(radius, 160, 128, rho.cutoff())
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Husimi values Q(β) = ⟨β|ρ|β⟩ on the grid.
    pub fn husimi(&self, rho: &FockOperator) -> Result<Vec<f64>> {
        if rho.cutoff() != self.cutoff {
            return Err(Error::DimMismatch(format!(
                "grid cutoff {} vs state cutoff {}",
                self.cutoff,
                rho.cutoff()
            )));
        }
        Ok(self
            .coherent
            .iter()
            .map(|v| {
                let rv = rho.matrix() * v;
                v.dotc(&rv).re.clamp(0.0, 1.0)
            })
            .collect())
    }

    /// ∫ f(β) d²β/π by the grid weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Total Husimi mass; equals 1 within 1e-4 for well-truncated states.
    pub fn mass(&self, rho: &FockOperator) -> Result<f64> {
        Ok(self.integrate(&self.husimi(rho)?))
    }
}

/// Wehrl entropy −∫ (d²β/π) Q log2 Q by quadrature.
pub fn wehrl_entropy(rho: &FockOperator, grid: &QFunctionGrid) -> Result<f64> {
    if !rho.well_truncated() {
        return Err(Error::Validation(
            "state is not well-truncated at its cutoff".into(),
        ));
    }
    if grid.radius() + 1e-9 < (rho.cutoff() as f64).sqrt() {
        return Err(Error::Validation(format!(
            "grid radius {} below √cutoff = {}",
            grid.radius(),
            (rho.cutoff() as f64).sqrt()
        )));
    }
    let q = grid.husimi(rho)?;
    let integrand: Vec<f64> = q
        .iter()
        .map(|&v| if v > 1e-300 { -v * v.log2() } else { 0.0 })
        .collect();
    Ok(grid.integrate(&integrand))
}

/// Result of the thermal-maximizer comparison.
#[derive(Debug, Clone, Copy)]
pub struct HwCheck {
    /// [H(ρ̃)−W(ρ̃)] − [H(ρ)−W(ρ)]; nonnegative up to quadrature tolerance.
    pub entropy_form: f64,
    /// D(ρ‖ρ̃) − D(Q_ρ‖Q_ρ̃); equals `entropy_form` up to the vanishing
    /// moment-matching terms.
    pub relative_entropy_form: f64,
}

/// Verify that the thermal state maximizes H−W among states with zero first
/// moment and the same mean photon number. Both computed forms of the defect
/// are returned; each must be ≥ −1e-3 and they must agree within 2e-3.
pub fn hw_thermal_maximizer_check(
    rho: &FockOperator,
    n_s: f64,
    grid: &QFunctionGrid,
) -> Result<HwCheck> {
    let fm = rho.first_moment().norm();
    if fm > 1e-6 {
        return Err(Error::Validation(format!("Tr[aρ] = {fm:.2e} ≠ 0")));
    }
    let mean = rho.mean_photon();
    if (mean - n_s).abs() > 1e-6 {
        return Err(Error::Validation(format!(
            "mean photon {mean} differs from N_S = {n_s}"
        )));
    }
    let thermal = FockOperator::thermal_at_cutoff(n_s, rho.cutoff())?;

    let h_rho = rho.von_neumann_entropy();
    let h_th = thermal.von_neumann_entropy();
    let w_rho = wehrl_entropy(rho, grid)?;
    let w_th = wehrl_entropy(&thermal, grid)?;
    let entropy_form = (h_th - w_th) - (h_rho - w_rho);

    // Quantum relative entropy (the thermal reference is full rank) minus
    // the classical relative entropy of the Husimi functions.
    let d_q = quantum_relative_entropy(rho.density(), thermal.density())?;
    let q_rho = grid.husimi(rho)?;
    let q_th = grid.husimi(&thermal)?;
    let mut d_c = 0.0;
    for ((qr, qt), w) in q_rho.iter().zip(&q_th).zip(grid.weights()) {
        if *qr > 1e-300 && *qt > 1e-300 {
            d_c += w * qr * (qr / qt).log2();
        }
    }
    Ok(HwCheck { entropy_form, relative_entropy_form: d_q - d_c })
}

/// Sample a random state with Tr[aρ] = 0 and mean photon number `n_s`:
/// Ginibre density on a low Fock block, parity-averaged to kill odd
/// coherences, then mixed with the vacuum or a number state to hit the mean.
pub fn sample_constrained_state<R: Rng>(
    rng: &mut R,
    n_s: f64,
    support: usize,
    cutoff: usize,
) -> Result<FockOperator> {
    if support > cutoff {
        return Err(Error::DimMismatch("support exceeds cutoff".into()));
    }
    let seed_rho = qcore::random_density(rng, support);
    let mut m = CMat::zeros(cutoff, cutoff);
    for i in 0..support {
        for j in 0..support {
            // Phase averaging over {0, π}: entries with odd n-difference die.
            if (i + j) % 2 == 0 {
                m[(i, j)] = seed_rho.matrix()[(i, j)];
            }
        }
    }
    let mean: f64 = (0..support).map(|n| n as f64 * m[(n, n)].re).sum();
    // Mix toward the target mean with a diagonal partner state.
    let (partner, t) = if mean >= n_s {
        (0usize, n_s / mean)
    } else {
        let k = (n_s.ceil() as usize + 2).min(cutoff - 1);
        let t = (k as f64 - n_s) / (k as f64 - mean);
        (k, t)
    };
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Degenerate("mean-photon rescaling failed".into()));
    }
    let mut mixed = m.scale(t);
    mixed[(partner, partner)] += cr(1.0 - t);
    Ok(FockOperator::new(DensityOperator::new(mixed)?))
}

/// Heterodyne information W(ρ̄) − log2 e of a finite coherent-state ensemble
/// {(p_i, α_i)}; ρ̄ is formed at a cutoff adequate for the largest amplitude.
pub fn heterodyne_mutual_info_coherent(ensemble: &[(f64, C64)]) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::Validation("empty amplitude ensemble".into()));
    }
    let psum: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (psum - 1.0).abs() > 1e-9 {
        return Err(Error::Validation("amplitude probabilities must sum to 1".into()));
    }
    let max_n = ensemble
        .iter()
        .map(|(_, a)| a.norm_sqr())
        .fold(0.0, f64::max);
    // Poisson tails: keep the cutoff comfortably above the largest mean.
    let cutoff = ((max_n + 6.0 * max_n.sqrt() + 12.0).ceil() as usize).max(DEFAULT_CUTOFF);
    let mut m = CMat::zeros(cutoff, cutoff);
    for (p, alpha) in ensemble {
        let v = coherent_vector(*alpha, cutoff);
        let n2 = v.norm_squared();
        let v = v.scale(1.0 / n2.sqrt());
        m += (&v * v.adjoint()).scale(*p);
    }
    let avg = FockOperator::new(DensityOperator::new(m)?);
    let grid = QFunctionGrid::for_state_with_offset(&avg, max_n.sqrt());
    let w = wehrl_entropy(&avg, &grid)?;
    let v = w - LOG2_E;
    debug_assert!(v >= -1e-4);
    Ok(v)
}

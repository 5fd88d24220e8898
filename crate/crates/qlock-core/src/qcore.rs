//! Dense complex-matrix quantum kernel: states, channels, entropies,
//! distances, random sampling.
//!
//! Everything here is dense and double precision; the supported dimension is
//! capped at [`MAX_DIM`]. Operators are validated at construction and
//! immutable afterwards, so values are safe to share across threads.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Largest Hilbert-space dimension handled by the dense kernel.
pub const MAX_DIM: usize = 256;

/// Hermiticity / positivity / trace tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;
/// POVM completeness tolerance.
pub const POVM_SUM_TOL: f64 = 1e-9;
/// Eigenvalues below this threshold contribute nothing to entropies.
pub const ENTROPY_EIG_FLOOR: f64 = 1e-14;

pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn ci(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Max-norm distance from Hermiticity.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    // Symmetrize first: SymmetricEigen reads the full matrix, and tiny
    // anti-Hermitian noise from upstream arithmetic would otherwise leak in.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// f(M) for Hermitian M through its spectral decomposition.
pub fn hermitian_matrix_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        let v = vecs.column(k);
        let fv = f(lam);
        if fv != 0.0 {
            out += (v * v.adjoint()).scale(fv);
        }
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Standard basis column vector.
pub fn basis_vec(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = cr(1.0);
    v
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// Hermitian, positive, unit-trace complex matrix.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: CMat,
    dim: usize,
}

impl DensityOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim {
            return Err(Error::DimMismatch(format!(
                "density operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Capability(format!(
                "dimension {dim} outside supported range 1..={MAX_DIM}"
            )));
        }
        let herm = hermiticity_defect(&mat);
        if herm > STATE_TOL {
            return Err(Error::Validation(format!(
                "not Hermitian: defect {herm:.3e} > {STATE_TOL:.0e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Validation(format!("trace {tr} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&mat)[0];
        if min_eig < -STATE_TOL {
            return Err(Error::Validation(format!(
                "negative eigenvalue {min_eig:.3e} beyond tolerance"
            )));
        }
        Ok(Self { mat, dim })
    }

    pub fn from_pure(psi: &CVec) -> Result<Self> {
        let n2 = psi.norm_squared();
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("state vector norm² {n2} differs from 1")));
        }
        let psi = psi.scale(1.0 / n2.sqrt());
        Self::new(&psi * psi.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(identity(dim).scale(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Spectrum with the clipping rule applied: eigenvalues in
    /// `[-1e-10, 0]` are clipped to zero (diagonalization noise).
    pub fn clipped_spectrum(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
            .into_iter()
            .map(|l| if l < 0.0 { 0.0 } else { l })
            .collect()
    }

    /// Mean value of a Hermitian observable.
    pub fn expectation(&self, obs: &CMat) -> f64 {
        (obs * &self.mat).trace().re
    }
}

/// Shannon entropy in bits of a nonnegative vector (need not be normalized;
/// zeros contribute nothing).
pub fn shannon_entropy(p: &[f64]) -> f64 {
    let mut h = 0.0;
    for &x in p {
        if x > ENTROPY_EIG_FLOOR {
            h -= x * x.log2();
        }
    }
    h
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let h = shannon_entropy(&rho.clipped_spectrum());
    debug_assert!(h >= -1e-9 && h <= (rho.dim as f64).log2() + 1e-9);
    h.max(0.0)
}

/// Trace distance ‖ρ−σ‖₁ (sum of singular values, no 1/2 factor).
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim != sigma.dim {
        return Err(Error::DimMismatch(format!(
            "trace_distance: {} vs {}",
            rho.dim, sigma.dim
        )));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum())
}

/// Binary entropy h2(p) in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary_entropy: p={p} outside [0,1]")));
    }
    Ok(shannon_entropy(&[p, 1.0 - p]))
}

/// Quantum mutual information I(A;B) of a bipartite state, in bits.
pub fn mutual_information(rho_ab: &DensityOperator, dim_a: usize, dim_b: usize) -> Result<f64> {
    if dim_a * dim_b != rho_ab.dim {
        return Err(Error::DimMismatch(format!(
            "mutual_information: {}·{} != {}",
            dim_a, dim_b, rho_ab.dim
        )));
    }
    let rho_a = partial_trace(rho_ab, &[dim_a, dim_b], &[1])?;
    let rho_b = partial_trace(rho_ab, &[dim_a, dim_b], &[0])?;
    let i = von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b)
        - von_neumann_entropy(rho_ab);
    debug_assert!(i >= -1e-9);
    Ok(i.max(0.0))
}

/// Mutual information of a finite joint distribution p(x,y), in bits.
pub fn mutual_information_classical(joint: &[Vec<f64>]) -> f64 {
    let nx = joint.len();
    if nx == 0 {
        return 0.0;
    }
    let ny = joint[0].len();
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for (x, row) in joint.iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            px[x] += p;
            py[y] += p;
        }
    }
    let mut i = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            if p > 1e-300 {
                i += p * (p / (px[x] * py[y])).log2();
            }
        }
    }
    i.max(0.0)
}

// ---------------------------------------------------------------------------
// Random sampling
// ---------------------------------------------------------------------------

/// Standard normal via Box-Muller (keeps the crate off heavyweight
/// distribution deps and pinned to the seeded stream).
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Square complex Ginibre matrix (i.i.d. standard complex Gaussians).
pub fn ginibre<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(dim, dim, |_, _| {
        C64::new(
            standard_normal(rng) * inv_sqrt2,
            standard_normal(rng) * inv_sqrt2,
        )
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix of
/// Mezzadri: U = Q·diag(r_ii/|r_ii|).
pub fn haar_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    assert!(dim >= 1);
    let g = ginibre(rng, dim);
    let qr = g.qr();
    let r_diag: Vec<C64> = (0..dim).map(|i| qr.r()[(i, i)]).collect();
    let q = qr.q();
    let mut u = q;
    for (j, r) in r_diag.iter().enumerate() {
        let phase = if r.norm() > 0.0 { r / r.norm() } else { cr(1.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-random pure state vector.
pub fn random_pure<R: Rng>(rng: &mut R, dim: usize) -> CVec {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVec::from_fn(dim, |_, _| {
        C64::new(
            standard_normal(rng) * inv_sqrt2,
            standard_normal(rng) * inv_sqrt2,
        )
    });
    let n = v.norm();
    v.unscale_mut(n);
    v
}

/// Random full-rank density operator from the Hilbert-Schmidt ensemble.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale(1.0 / tr)).expect("Ginibre construction is PSD")
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// Completely positive trace-preserving map as a Kraus-operator list.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<CMat>,
    in_dim: usize,
    out_dim: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Validation("channel needs at least one Kraus operator".into()));
        }
        let out_dim = kraus[0].nrows();
        let in_dim = kraus[0].ncols();
        if in_dim == 0 || in_dim > MAX_DIM || out_dim == 0 || out_dim > MAX_DIM {
            return Err(Error::Capability(format!(
                "channel dims {in_dim}->{out_dim} outside supported range"
            )));
        }
        for a in &kraus {
            if a.nrows() != out_dim || a.ncols() != in_dim {
                return Err(Error::DimMismatch("inconsistent Kraus operator shapes".into()));
            }
        }
        let mut sum = CMat::zeros(in_dim, in_dim);
        for a in &kraus {
            sum += a.adjoint() * a;
        }
        let defect = max_abs(&(&sum - identity(in_dim)));
        if defect > STATE_TOL {
            return Err(Error::Validation(format!(
                "Kraus completeness defect {defect:.3e} > {STATE_TOL:.0e}"
            )));
        }
        Ok(Self { kraus, in_dim, out_dim })
    }

    pub fn identity_channel(dim: usize) -> Result<Self> {
        Self::new(vec![identity(dim)])
    }

    pub fn kraus_ops(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Channel action on a raw matrix (no revalidation).
    pub fn apply_mat(&self, m: &CMat) -> CMat {
        let mut out = CMat::zeros(self.out_dim, self.out_dim);
        for a in &self.kraus {
            out += a * m * a.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.in_dim {
            return Err(Error::DimMismatch(format!(
                "channel expects dim {}, state has {}",
                self.in_dim,
                rho.dim()
            )));
        }
        DensityOperator::new(self.apply_mat(rho.matrix()))
    }

    /// n-fold tensor power N^{⊗n}; the output dimension must stay within
    /// the dense cap.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("tensor_power: n must be ≥ 1".into()));
        }
        if self.in_dim.pow(n as u32) > MAX_DIM || self.out_dim.pow(n as u32) > MAX_DIM {
            return Err(Error::Capability(format!(
                "tensor power {n} exceeds dense dimension cap {MAX_DIM}"
            )));
        }
        let mut ops = self.kraus.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(ops.len() * self.kraus.len());
            for a in &ops {
                for b in &self.kraus {
                    next.push(kron(a, b));
                }
            }
            ops = next;
        }
        Self::new(ops)
    }
}

/// Isometric (Stinespring) extension V: A → B⊗E.
#[derive(Debug, Clone)]
pub struct IsometricExtension {
    isometry: CMat,
    out_dim: usize,
    env_dim: usize,
}

impl IsometricExtension {
    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// VρV† on the joint B⊗E space (B-major index ordering).
    pub fn conjugate(&self, m: &CMat) -> CMat {
        &self.isometry * m * self.isometry.adjoint()
    }
}

/// Isometric extension V|ψ⟩ = Σ_i (A_i|ψ⟩)⊗|i⟩_E with env dimension equal
/// to the number of Kraus operators.
pub fn isometric_extension(ch: &KrausChannel) -> Result<IsometricExtension> {
    let ne = ch.kraus.len();
    let (din, dout) = (ch.in_dim, ch.out_dim);
    if dout * ne > MAX_DIM * MAX_DIM {
        return Err(Error::Capability("isometric extension too large".into()));
    }
    let mut v = CMat::zeros(dout * ne, din);
    for (i, a) in ch.kraus.iter().enumerate() {
        for b in 0..dout {
            for col in 0..din {
                v[(b * ne + i, col)] = a[(b, col)];
            }
        }
    }
    let defect = max_abs(&(v.adjoint() * &v - identity(din)));
    if defect > STATE_TOL {
        return Err(Error::Validation(format!(
            "isometry defect {defect:.3e} > {STATE_TOL:.0e}"
        )));
    }
    Ok(IsometricExtension { isometry: v, out_dim: dout, env_dim: ne })
}

/// Channel to the environment: output = Tr_B{VρV†}.
///
/// The complementary Kraus operators are read off the extension by
/// transposing the roles of the output and environment indices.
pub fn complementary_channel(ch: &KrausChannel) -> Result<KrausChannel> {
    let ne = ch.kraus.len();
    let (din, dout) = (ch.in_dim, ch.out_dim);
    let mut comp = Vec::with_capacity(dout);
    for b in 0..dout {
        let mut k = CMat::zeros(ne, din);
        for (e, a) in ch.kraus.iter().enumerate() {
            for col in 0..din {
                k[(e, col)] = a[(b, col)];
            }
        }
        comp.push(k);
    }
    KrausChannel::new(comp)
}

// ---------------------------------------------------------------------------
// Partial trace
// ---------------------------------------------------------------------------

/// Trace out the subsystems listed in `traced` (indices into `dims`); the
/// result lives on the remaining factors in their original order.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: &[usize],
    traced: &[usize],
) -> Result<DensityOperator> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimMismatch(format!(
            "partial_trace: dims product {} != state dim {}",
            total,
            rho.dim()
        )));
    }
    for &t in traced {
        if t >= dims.len() {
            return Err(Error::DimMismatch(format!("partial_trace: no subsystem {t}")));
        }
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|i| !traced.contains(i)).collect();
    let kept_dim: usize = kept.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();
    let mat = rho.matrix();

    // Mixed-radix index helpers over the subsystem factors.
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut digits = vec![0usize; dims.len()];
        let mut k = kept_idx;
        for &i in kept.iter().rev() {
            digits[i] = k % dims[i];
            k /= dims[i];
        }
        let mut t = traced_idx;
        for &i in traced.iter().rev() {
            digits[i] = t % dims[i];
            t /= dims[i];
        }
        let mut full = 0usize;
        for (i, &d) in dims.iter().enumerate() {
            full = full * d + digits[i];
        }
        full
    };

    let mut out = CMat::zeros(kept_dim, kept_dim);
    for r in 0..kept_dim {
        for c in 0..kept_dim {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..traced_dim {
                acc += mat[(compose(r, t), compose(c, t))];
            }
            out[(r, c)] = acc;
        }
    }
    DensityOperator::new(out)
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Classical label probabilities paired with states on a common space.
#[derive(Debug, Clone)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimMismatch(format!(
                "ensemble: {} probabilities vs {} states",
                probs.len(),
                states.len()
            )));
        }
        if probs.is_empty() {
            return Err(Error::Validation("empty ensemble".into()));
        }
        if probs.iter().any(|&p| p < -1e-15) {
            return Err(Error::Validation("negative probability".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("probabilities sum to {sum}, not 1")));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::DimMismatch("ensemble states on unequal spaces".into()));
        }
        Ok(Self { probs, states })
    }

    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let n = states.len();
        Self::new(vec![1.0 / n as f64; n], states)
    }

    pub fn uniform_pure(vecs: &[CVec]) -> Result<Self> {
        let states = vecs
            .iter()
            .map(DensityOperator::from_pure)
            .collect::<Result<Vec<_>>>()?;
        Self::uniform(states)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn average_state(&self) -> DensityOperator {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (p, s) in self.probs.iter().zip(&self.states) {
            m += s.matrix().scale(*p);
        }
        DensityOperator::new(m).expect("convex mixture of states is a state")
    }

    /// Push every state through a channel.
    pub fn through(&self, ch: &KrausChannel) -> Result<Ensemble> {
        let states = self
            .states
            .iter()
            .map(|s| ch.apply(s))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(self.probs.clone(), states)
    }
}

// ---------------------------------------------------------------------------
// POVMs
// ---------------------------------------------------------------------------

/// Measurement: positive elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMat>,
    dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Validation("POVM needs at least one element".into()));
        }
        let dim = elements[0].nrows();
        let mut sum = CMat::zeros(dim, dim);
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimMismatch("POVM elements on unequal spaces".into()));
            }
            if hermiticity_defect(e) > STATE_TOL {
                return Err(Error::Validation("POVM element not Hermitian".into()));
            }
            let min_eig = hermitian_eigenvalues(e)[0];
            if min_eig < -STATE_TOL {
                return Err(Error::Validation(format!(
                    "POVM element has eigenvalue {min_eig:.3e}"
                )));
            }
            sum += e;
        }
        let defect = max_abs(&(&sum - identity(dim)));
        if defect > POVM_SUM_TOL {
            return Err(Error::Validation(format!(
                "POVM completeness defect {defect:.3e} > {POVM_SUM_TOL:.0e}"
            )));
        }
        Ok(Self { elements, dim })
    }

    /// The trivial one-outcome measurement {I}.
    pub fn trivial(dim: usize) -> Self {
        Self { elements: vec![identity(dim)], dim }
    }

    /// Projective measurement onto the standard basis.
    pub fn standard_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let v = basis_vec(dim, i);
                &v * v.adjoint()
            })
            .collect();
        Self { elements, dim }
    }

    /// Projective measurement onto the discrete Fourier basis.
    pub fn fourier_basis(dim: usize) -> Self {
        Self::from_orthonormal_columns(&fourier_matrix(dim))
    }

    /// Projectors onto the columns of a unitary.
    pub fn from_orthonormal_columns(u: &CMat) -> Self {
        let dim = u.nrows();
        let elements = (0..dim)
            .map(|i| {
                let v = u.column(i);
                &v * v.adjoint()
            })
            .collect();
        Self { elements, dim }
    }

    /// Rank-one POVM μ_y |φ_y⟩⟨φ_y| from weights and unit vectors
    /// (completeness validated).
    pub fn rank_one(weighted_dirs: &[(f64, CVec)]) -> Result<Self> {
        let elements = weighted_dirs
            .iter()
            .map(|(mu, phi)| (phi * phi.adjoint()).scale(*mu))
            .collect();
        Self::new(elements)
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome probabilities on a state.
    pub fn outcome_probs(&self, rho: &DensityOperator) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| (e * rho.matrix()).trace().re.max(0.0))
            .collect()
    }

    /// Merge outcomes into groups (classical post-processing); `groups[i]`
    /// is the new outcome of old element i.
    pub fn coarse_grain(&self, groups: &[usize]) -> Result<Povm> {
        if groups.len() != self.elements.len() {
            return Err(Error::DimMismatch("coarse_grain: wrong group list length".into()));
        }
        let n_new = groups.iter().max().map_or(0, |m| m + 1);
        let mut elements = vec![CMat::zeros(self.dim, self.dim); n_new];
        for (e, &g) in self.elements.iter().zip(groups) {
            elements[g] += e;
        }
        Povm::new(elements)
    }
}

/// d-dimensional discrete Fourier unitary F[j,k] = e^{2πi jk/d}/√d.
pub fn fourier_matrix(d: usize) -> CMat {
    let norm = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |j, k| {
        let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64;
        C64::new(phase.cos(), phase.sin()).scale(norm)
    })
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

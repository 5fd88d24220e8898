//! Lower- and upper-bound engines for the accessible information of finite
//! ensembles.
//!
//! Accessible-information maximization is nonconvex, so the optimizer here
//! reports a certified *lower* bound (the best rank-1 POVM found by see-saw
//! ascent over a pool of starts) paired with the Holevo upper bound. It never
//! claims global optimality.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::locking::LockingScheme;
use crate::qcore::{
    hermitian_eigen, hermitian_matrix_function, identity, max_abs, mutual_information_classical,
    shannon_entropy, CMat, CVec, Ensemble, Povm,
};
use crate::{qcore, rng};

/// Largest ensemble dimension accepted by the optimizer.
pub const OPTIMIZER_DIM_CAP: usize = 64;
/// Rank-1 elements with weight below this are pruned from final POVMs.
pub const WEIGHT_PRUNE_TOL: f64 = 1e-8;

/// Result of an accessible-information optimization run.
#[derive(Debug, Clone)]
pub struct AccInfoResult {
    /// Best I(X;Y) found; a lower bound on the accessible information.
    pub lower_bits: f64,
    /// Holevo χ of the ensemble; an upper bound on the accessible information.
    pub upper_bits: f64,
    pub achieving_povm: Povm,
    pub lower_method: String,
    pub upper_method: String,
    pub restarts_used: usize,
    pub iterations: usize,
}

/// I(X;Y) of the joint distribution p(x)·Tr{Γ_y ρ_x}; a lower bound on the
/// accessible information for any fixed POVM.
pub fn acc_info_of_measurement(ens: &Ensemble, povm: &Povm) -> Result<f64> {
    if povm.dim() != ens.dim() {
        return Err(Error::DimMismatch(format!(
            "POVM on dim {} vs ensemble on dim {}",
            povm.dim(),
            ens.dim()
        )));
    }
    let joint: Vec<Vec<f64>> = ens
        .probs()
        .iter()
        .zip(ens.states())
        .map(|(p, rho)| povm.outcome_probs(rho).iter().map(|w| p * w).collect())
        .collect();
    Ok(mutual_information_classical(&joint))
}

/// Holevo information χ = H(Σ p_x ρ_x) − Σ p_x H(ρ_x).
pub fn holevo_chi(ens: &Ensemble) -> f64 {
    let avg = qcore::von_neumann_entropy(&ens.average_state());
    let cond: f64 = ens
        .probs()
        .iter()
        .zip(ens.states())
        .map(|(p, s)| p * qcore::von_neumann_entropy(s))
        .sum();
    (avg - cond).max(0.0)
}

/// Pretty-good measurement Γ_x = ρ̄^{-1/2} p_x ρ_x ρ̄^{-1/2} with the
/// pseudo-inverse on the support of ρ̄, completed to the identity with an
/// off-support projector when needed.
pub fn pretty_good_measurement(ens: &Ensemble) -> Povm {
    let d = ens.dim();
    let avg = ens.average_state();
    let inv_sqrt = hermitian_matrix_function(avg.matrix(), |l| {
        if l > 1e-12 {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    });
    let mut elements: Vec<CMat> = ens
        .probs()
        .iter()
        .zip(ens.states())
        .map(|(p, s)| (&inv_sqrt * s.matrix() * &inv_sqrt).scale(*p))
        .collect();
    let mut sum = CMat::zeros(d, d);
    for e in &elements {
        sum += e;
    }
    let rest = identity(d) - sum;
    if max_abs(&rest) > 1e-12 {
        elements.push(rest);
    }
    Povm::new(elements).expect("PGM construction yields a valid POVM")
}

// ---------------------------------------------------------------------------
// Rank-1 see-saw optimizer
// ---------------------------------------------------------------------------

/// Rank-1 POVM {μ_y, |φ_y⟩} with Σ μ_y |φ_y⟩⟨φ_y| = I.
#[derive(Debug, Clone)]
struct RankOneMeas {
    weights: Vec<f64>,
    dirs: Vec<CVec>,
}

impl RankOneMeas {
    fn to_povm(&self) -> Result<Povm> {
        Povm::rank_one(
            &self
                .weights
                .iter()
                .copied()
                .zip(self.dirs.iter().cloned())
                .collect::<Vec<_>>(),
        )
    }

    /// S^{-1/2} renormalization of arbitrary weighted directions into a valid
    /// rank-1 POVM; directions in the kernel of S are appended as projector
    /// pieces.
    fn complete(raw: Vec<(f64, CVec)>) -> Option<RankOneMeas> {
        let d = raw.first()?.1.len();
        let mut s = CMat::zeros(d, d);
        for (w, v) in &raw {
            s += (v * v.adjoint()).scale(*w);
        }
        let (vals, vecs) = hermitian_eigen(&s);
        let mut extra: Vec<CVec> = Vec::new();
        let mut s_fix = s;
        for (k, &l) in vals.iter().enumerate() {
            if l < 1e-10 {
                let v: CVec = vecs.column(k).into();
                s_fix += &v * v.adjoint();
                extra.push(v);
            }
        }
        let inv_sqrt = hermitian_matrix_function(&s_fix, |l| {
            if l > 1e-14 {
                1.0 / l.sqrt()
            } else {
                0.0
            }
        });
        let mut weights = Vec::with_capacity(raw.len() + extra.len());
        let mut dirs = Vec::with_capacity(raw.len() + extra.len());
        for (w, v) in &raw {
            let t = &inv_sqrt * v;
            let n2 = t.norm_squared();
            if w * n2 > 1e-16 {
                weights.push(w * n2);
                dirs.push(t.scale(1.0 / n2.sqrt()));
            }
        }
        for v in extra {
            weights.push(1.0);
            dirs.push(v);
        }
        Some(RankOneMeas { weights, dirs })
    }

    /// Drop near-zero weights and restore exact completeness.
    fn pruned(&self) -> RankOneMeas {
        let kept: Vec<(f64, CVec)> = self
            .weights
            .iter()
            .zip(&self.dirs)
            .filter(|(w, _)| **w >= WEIGHT_PRUNE_TOL)
            .map(|(w, v)| (*w, v.clone()))
            .collect();
        if kept.len() == self.weights.len() {
            return self.clone();
        }
        RankOneMeas::complete(kept).unwrap_or_else(|| self.clone())
    }
}

/// Decompose a POVM into rank-1 pieces (λ_k, v_k) per element; completeness
/// is inherited from the source POVM. Refinement never lowers I(X;Y).
fn rank_one_pieces(povm: &Povm) -> RankOneMeas {
    let mut weights = Vec::new();
    let mut dirs = Vec::new();
    for e in povm.elements() {
        let (vals, vecs) = hermitian_eigen(e);
        for (k, &l) in vals.iter().enumerate() {
            if l > 1e-12 {
                weights.push(l);
                dirs.push(vecs.column(k).into());
            }
        }
    }
    RankOneMeas { weights, dirs }
}

/// Joint distribution p(x,y) for a rank-1 measurement.
fn joint_dist(ens: &Ensemble, meas: &RankOneMeas) -> Vec<Vec<f64>> {
    ens.probs()
        .iter()
        .zip(ens.states())
        .map(|(p, rho)| {
            meas.weights
                .iter()
                .zip(&meas.dirs)
                .map(|(mu, phi)| {
                    let v = rho.matrix() * phi;
                    (p * mu * phi.dotc(&v).re).max(0.0)
                })
                .collect()
        })
        .collect()
}

fn objective(ens: &Ensemble, meas: &RankOneMeas) -> f64 {
    mutual_information_classical(&joint_dist(ens, meas))
}

/// One see-saw sweep: gradient-eigenvector element update followed by a
/// multiplicative weight update, each accepted only on improvement.
fn seesaw_step(ens: &Ensemble, meas: &RankOneMeas, current: f64) -> Option<(RankOneMeas, f64)> {
    let n_y = meas.weights.len();
    let joint = joint_dist(ens, meas);
    let mut p_y = vec![0.0; n_y];
    for row in &joint {
        for (y, &p) in row.iter().enumerate() {
            p_y[y] += p;
        }
    }

    // Gradient operators G_y = Σ_x p_x ρ_x log2(q(x|y)/p_x), log clamped.
    let d = ens.dim();
    let mut grads: Vec<CMat> = Vec::with_capacity(n_y);
    for y in 0..n_y {
        let mut g = CMat::zeros(d, d);
        for (x, rho) in ens.states().iter().enumerate() {
            let px = ens.probs()[x];
            if px <= 0.0 {
                continue;
            }
            let q = if p_y[y] > 1e-300 { joint[x][y] / p_y[y] } else { 0.0 };
            let coeff = px * (q.max(1e-18) / px).log2();
            g += rho.matrix().scale(coeff);
        }
        grads.push(g);
    }

    let mut best: Option<(RankOneMeas, f64)> = None;

    // Element update: blend each direction toward the top eigenvector of its
    // gradient operator, with damping.
    for &t in &[1.0, 0.5, 0.25] {
        let mut raw = Vec::with_capacity(n_y);
        for y in 0..n_y {
            let (vals, vecs) = hermitian_eigen(&grads[y]);
            let top: CVec = vecs.column(vals.len() - 1).into();
            // Align the blend phase to avoid cancellation.
            let ov = meas.dirs[y].dotc(&top);
            let phase = if ov.norm() > 1e-14 {
                ov / ov.norm()
            } else {
                qcore::cr(1.0)
            };
            let mut w = meas.dirs[y].scale(1.0 - t) + (&top * phase.conj()).scale(t);
            let n = w.norm();
            if n < 1e-12 {
                w = top;
            } else {
                w.unscale_mut(n);
            }
            raw.push((meas.weights[y], w));
        }
        if let Some(cand) = RankOneMeas::complete(raw) {
            let val = objective(ens, &cand);
            if val > current + 1e-12 {
                best = Some((cand, val));
                break;
            }
        }
    }

    // Weight update on top of whichever measurement is currently best.
    let (base_meas, base_val) = match &best {
        Some((m, v)) => (m.clone(), *v),
        None => (meas.clone(), current),
    };
    let joint_b = joint_dist(ens, &base_meas);
    let mut p_yb = vec![0.0; base_meas.weights.len()];
    for row in &joint_b {
        for (y, &p) in row.iter().enumerate() {
            p_yb[y] += p;
        }
    }
    let mut dw = vec![0.0; base_meas.weights.len()];
    for (x, row) in joint_b.iter().enumerate() {
        let px = ens.probs()[x];
        for (y, &pxy) in row.iter().enumerate() {
            if pxy > 1e-300 && base_meas.weights[y] > 1e-300 {
                let q = pxy / p_yb[y];
                dw[y] += pxy / base_meas.weights[y] * (q / px).log2();
            }
        }
    }
    let gmax = dw.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if gmax > 1e-14 {
        for &s in &[0.5, 0.125] {
            let raw: Vec<(f64, CVec)> = base_meas
                .weights
                .iter()
                .zip(&base_meas.dirs)
                .zip(&dw)
                .map(|((w, v), g)| (w * (s * g / gmax).exp(), v.clone()))
                .collect();
            if let Some(cand) = RankOneMeas::complete(raw) {
                let val = objective(ens, &cand);
                if val > base_val + 1e-12 {
                    return Some((cand, val));
                }
            }
        }
    }

    best
}

fn ascend(ens: &Ensemble, start: RankOneMeas, iters: usize) -> (RankOneMeas, f64, usize) {
    let mut meas = start;
    let mut val = objective(ens, &meas);
    let mut used = 0;
    let mut stalls = 0;
    for _ in 0..iters {
        used += 1;
        match seesaw_step(ens, &meas, val) {
            Some((m, v)) => {
                meas = m;
                val = v;
                stalls = 0;
            }
            None => {
                stalls += 1;
                if stalls >= 2 {
                    break;
                }
            }
        }
    }
    (meas, val, used)
}

/// Build the start pool: baseline bases, the pretty-good measurement when it
/// stays small, any caller-provided POVMs, and Haar-random bases.
fn start_pool(ens: &Ensemble, extra: &[Povm], restarts: usize, seed: u64) -> Vec<RankOneMeas> {
    let d = ens.dim();
    let mut pool = vec![
        rank_one_pieces(&Povm::standard_basis(d)),
        rank_one_pieces(&Povm::fourier_basis(d)),
    ];
    let pgm_pieces = rank_one_pieces(&pretty_good_measurement(ens));
    if pgm_pieces.weights.len() <= 4 * d {
        pool.push(pgm_pieces);
    }
    for povm in extra {
        let pieces = rank_one_pieces(povm);
        if pieces.weights.len() <= d * d {
            pool.push(pieces);
        }
    }
    for i in 0..restarts {
        let mut r = rng::stream(seed, 1000 + i as u64);
        let u = qcore::haar_unitary(&mut r, d);
        pool.push(rank_one_pieces(&Povm::from_orthonormal_columns(&u)));
    }
    pool
}

/// Maximize I(X;Y) over rank-1 POVMs by multistart see-saw ascent.
///
/// `lower_bits` is the best objective reached (monotone in the iterations),
/// `upper_bits` is the Holevo bound. Fixed seed ⇒ identical result.
pub fn acc_info_optimize(
    ens: &Ensemble,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<AccInfoResult> {
    acc_info_optimize_with_starts(ens, &[], restarts, iters, seed)
}

/// Same as [`acc_info_optimize`] with extra POVMs added to the start pool
/// (e.g. the key bases of a locking scheme). The result is never worse than
/// any pool member's direct mutual information.
pub fn acc_info_optimize_with_starts(
    ens: &Ensemble,
    extra_starts: &[Povm],
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<AccInfoResult> {
    let d = ens.dim();
    if d > OPTIMIZER_DIM_CAP {
        return Err(Error::Capability(format!(
            "optimizer supports dim ≤ {OPTIMIZER_DIM_CAP}, got {d}"
        )));
    }
    let pool = start_pool(ens, extra_starts, restarts, seed);
    let runs: Vec<(RankOneMeas, f64, usize)> = pool
        .into_par_iter()
        .map(|start| ascend(ens, start, iters))
        .collect();
    let restarts_used = runs.len();
    let mut best_idx = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 > runs[best_idx].1 + 1e-15 {
            best_idx = i;
        }
    }
    let (meas, val, iterations) = runs.into_iter().nth(best_idx).expect("nonempty pool");
    let pruned = meas.pruned();
    let pruned_val = objective(ens, &pruned);
    let (final_meas, final_val) = if pruned_val + 1e-9 >= val {
        (pruned, pruned_val.max(val))
    } else {
        (meas, val)
    };
    debug_assert!(final_meas.weights.len() <= d * d + d, "Davies cap exceeded");
    Ok(AccInfoResult {
        lower_bits: final_val,
        upper_bits: holevo_chi(ens),
        achieving_povm: final_meas.to_povm()?,
        lower_method: "see-saw-rank1".into(),
        upper_method: "holevo-chi".into(),
        restarts_used,
        iterations,
    })
}

// ---------------------------------------------------------------------------
// Entropy-minimization objective for locked ensembles
// ---------------------------------------------------------------------------

/// log2|M| − Σ_y (μ_y/(|M||K|)) Σ_k H(q_yk) with q_yk^m = |⟨φ_y|U_k|m⟩|².
///
/// This is the locked-ensemble form of the measured information: it equals
/// `acc_info_of_measurement` on the scheme's uniform (m,k)-labeled pure-state
/// ensemble, and is the objective the rank-1 entropy minimization acts on.
pub fn entropy_min_objective(scheme: &LockingScheme, povm: &Povm) -> Result<f64> {
    let m_dim = scheme.msg_dim();
    if povm.dim() != m_dim {
        return Err(Error::DimMismatch(format!(
            "POVM on dim {} vs scheme on dim {}",
            povm.dim(),
            m_dim
        )));
    }
    // Extract rank-1 structure; any element of higher rank is rejected.
    let mut weighted_dirs: Vec<(f64, CVec)> = Vec::with_capacity(povm.len());
    for e in povm.elements() {
        let (vals, vecs) = hermitian_eigen(e);
        let significant: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 1e-10).collect();
        if significant.len() > 1 {
            return Err(Error::Validation(
                "entropy_min_objective requires a rank-1 POVM".into(),
            ));
        }
        if let Some(&k) = significant.first() {
            weighted_dirs.push((vals[k], vecs.column(k).into()));
        }
    }
    let keys = scheme.key_unitaries();
    let k_count = keys.len();
    let norm = 1.0 / (m_dim as f64 * k_count as f64);
    let mut ent_sum = 0.0;
    for (mu, phi) in &weighted_dirs {
        for u in keys {
            // q_yk over m: |⟨φ_y|U_k|m⟩|² = |(U_k†|φ_y⟩)_m|²
            let row = u.adjoint() * phi;
            let q: Vec<f64> = row.iter().map(|z| z.norm_sqr()).collect();
            ent_sum += mu * norm * shannon_entropy(&q);
        }
    }
    Ok((m_dim as f64).log2() - ent_sum)
}

/// Two equiprobable real qubit pure states with the given overlap, the
/// standard hard instance for accessible-information engines.
pub fn two_state_ensemble(overlap: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::Domain(format!("overlap {overlap} outside [0,1]")));
    }
    let a = 0.5 * overlap.acos();
    let v1 = CVec::from_vec(vec![qcore::cr(a.cos()), qcore::cr(a.sin())]);
    let v2 = CVec::from_vec(vec![qcore::cr(a.cos()), qcore::cr(-a.sin())]);
    Ensemble::uniform_pure(&[v1, v2])
}

/// Brute-force reference: maximum measured information over projective
/// qubit measurements in the real plane of a two-state ensemble, on a grid
/// of `n_angles` angles. Independent of the see-saw ascent; used to
/// cross-check the optimizer.
pub fn two_state_grid_oracle(ens: &Ensemble, n_angles: usize) -> Result<f64> {
    if ens.dim() != 2 {
        return Err(Error::DimMismatch("grid oracle is for qubit ensembles".into()));
    }
    let mut best = 0.0f64;
    for i in 0..n_angles {
        let th = std::f64::consts::PI * i as f64 / n_angles as f64;
        let e0 = CVec::from_vec(vec![qcore::cr(th.cos()), qcore::cr(th.sin())]);
        let e1 = CVec::from_vec(vec![qcore::cr(-th.sin()), qcore::cr(th.cos())]);
        let povm = Povm::rank_one(&[(1.0, e0), (1.0, e1)])?;
        best = best.max(acc_info_of_measurement(ens, &povm)?);
    }
    Ok(best)
}

/// One named measurement's performance against an ensemble.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub name: String,
    pub mutual_info_bits: f64,
}

/// Outcome of running the baseline adversary suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub entries: Vec<SuiteEntry>,
    pub best_bits: f64,
    pub best_name: String,
    /// Absent when the ensemble dimension exceeds the optimizer cap; the
    /// suite then reports baseline measurements only.
    pub optimized: Option<AccInfoResult>,
}

/// Run the baseline adversary suite: standard basis, Fourier basis, pretty
/// good measurement, any named extra measurements, and the optimized rank-1
/// POVM (extras also join the optimizer start pool). A heterodyne-style
/// member only exists for coherent-amplitude ensembles and is added by the
/// bosonic layer where applicable.
pub fn adversary_suite(
    ens: &Ensemble,
    extras: &[(String, Povm)],
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<SuiteResult> {
    let d = ens.dim();
    let mut entries = vec![
        SuiteEntry {
            name: "standard-basis".into(),
            mutual_info_bits: acc_info_of_measurement(ens, &Povm::standard_basis(d))?,
        },
        SuiteEntry {
            name: "fourier-basis".into(),
            mutual_info_bits: acc_info_of_measurement(ens, &Povm::fourier_basis(d))?,
        },
        SuiteEntry {
            name: "pretty-good".into(),
            mutual_info_bits: acc_info_of_measurement(ens, &pretty_good_measurement(ens))?,
        },
    ];
    for (name, povm) in extras {
        entries.push(SuiteEntry {
            name: name.clone(),
            mutual_info_bits: acc_info_of_measurement(ens, povm)?,
        });
    }
    let optimized = if d <= OPTIMIZER_DIM_CAP {
        let extra_povms: Vec<Povm> = extras.iter().map(|(_, p)| p.clone()).collect();
        let res = acc_info_optimize_with_starts(ens, &extra_povms, restarts, iters, seed)?;
        entries.push(SuiteEntry {
            name: "optimized-rank1".into(),
            mutual_info_bits: res.lower_bits,
        });
        Some(res)
    } else {
        None
    };
    let mut best = 0usize;
    for (i, e) in entries.iter().enumerate() {
        if e.mutual_info_bits > entries[best].mutual_info_bits {
            best = i;
        }
    }
    Ok(SuiteResult {
        best_bits: entries[best].mutual_info_bits,
        best_name: entries[best].name.clone(),
        entries,
        optimized,
    })
}

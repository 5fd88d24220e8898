//! Locking-scheme construction, end-to-end protocol evaluation, security
//! criteria, ratios, and composition bounds.
//!
//! A scheme is a message basis plus a short list of key-indexed unitaries.
//! Security is always reported against an explicit adversary suite plus the
//! optimizer's best rank-1 POVM; universal-measurement claims are made only
//! where structure forces them (Eve's state independent of the message).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{
    basis_vec, binary_entropy, haar_unitary, identity, max_abs, mutual_information_classical,
    CMat, CVec, DensityOperator, Ensemble, KrausChannel, Povm,
};
use crate::{qcore, rng};

/// Cap on |M|·|K| for materialized classical-quantum states.
pub const CQ_SIZE_CAP: usize = 4096;
/// Conditional distributions with p(y) at or below this are excluded from
/// the security maximum (and recorded as skipped).
pub const OUTCOME_PROB_FLOOR: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

/// Message basis and key-indexed unitary list; the encoder maps (m, k) to
/// U_k|m⟩ on the |M|-dimensional message space.
#[derive(Debug, Clone)]
pub struct LockingScheme {
    msg_dim: usize,
    key_unitaries: Vec<CMat>,
}

impl LockingScheme {
    pub fn new(msg_dim: usize, key_unitaries: Vec<CMat>) -> Result<Self> {
        if key_unitaries.is_empty() {
            return Err(Error::Validation("scheme needs at least one key".into()));
        }
        for u in &key_unitaries {
            if u.nrows() != msg_dim || u.ncols() != msg_dim {
                return Err(Error::DimMismatch("key unitary has wrong shape".into()));
            }
            let defect = max_abs(&(u.adjoint() * u - identity(msg_dim)));
            if defect > 1e-10 {
                return Err(Error::Validation(format!(
                    "key unitary defect {defect:.3e} > 1e-10"
                )));
            }
        }
        Ok(Self { msg_dim, key_unitaries })
    }

    /// Identity-keyed scheme (|K| = 1, U = I).
    pub fn trivial(msg_dim: usize) -> Self {
        Self { msg_dim, key_unitaries: vec![identity(msg_dim)] }
    }

    /// Haar-random keys drawn from per-key streams of `seed`.
    pub fn haar(msg_dim: usize, num_keys: usize, seed: u64) -> Result<Self> {
        if num_keys == 0 {
            return Err(Error::Validation("scheme needs at least one key".into()));
        }
        let keys = (0..num_keys)
            .map(|k| haar_unitary(&mut rng::stream(seed, k as u64), msg_dim))
            .collect();
        Self::new(msg_dim, keys)
    }

    /// Cyclic-shift keys X^k with |K| = |M|: the quantum one-time pad on
    /// basis states (full twirl of the message label).
    pub fn shift_one_time_pad(msg_dim: usize) -> Self {
        let keys = (0..msg_dim)
            .map(|k| {
                CMat::from_fn(msg_dim, msg_dim, |i, j| {
                    if i == (j + k) % msg_dim {
                        qcore::cr(1.0)
                    } else {
                        qcore::cr(0.0)
                    }
                })
            })
            .collect();
        Self { msg_dim, key_unitaries: keys }
    }

    pub fn msg_dim(&self) -> usize {
        self.msg_dim
    }

    pub fn key_count(&self) -> usize {
        self.key_unitaries.len()
    }

    pub fn key_bits(&self) -> f64 {
        (self.key_count() as f64).log2()
    }

    pub fn key_unitaries(&self) -> &[CMat] {
        &self.key_unitaries
    }

    /// Encoder state U_k|m⟩.
    pub fn encoder_state(&self, m: usize, k: usize) -> CVec {
        self.key_unitaries[k].column(m).into()
    }

    /// Measurement in the basis {U_k|m⟩}_m (Bob's decode for key k over a
    /// noiseless channel).
    pub fn key_basis_povm(&self, k: usize) -> Povm {
        Povm::from_orthonormal_columns(&self.key_unitaries[k])
    }

    /// Uniform ensemble over (m,k) pairs of pure encoder states.
    pub fn pair_ensemble(&self) -> Ensemble {
        let mut vecs = Vec::with_capacity(self.msg_dim * self.key_count());
        for k in 0..self.key_count() {
            for m in 0..self.msg_dim {
                vecs.push(self.encoder_state(m, k));
            }
        }
        Ensemble::uniform_pure(&vecs).expect("encoder states are unit vectors")
    }

    /// Eve's ensemble: uniform over m, states averaged over the key.
    pub fn eve_ensemble(&self) -> Ensemble {
        let d = self.msg_dim;
        let kc = self.key_count() as f64;
        let states = (0..d)
            .map(|m| {
                let mut acc = CMat::zeros(d, d);
                for k in 0..self.key_count() {
                    let v = self.encoder_state(m, k);
                    acc += (&v * v.adjoint()).scale(1.0 / kc);
                }
                DensityOperator::new(acc).expect("key average of pure states")
            })
            .collect();
        Ensemble::uniform(states).expect("uniform ensemble")
    }
}

// ---------------------------------------------------------------------------
// Classical-quantum states
// ---------------------------------------------------------------------------

/// Tripartite cq state ρ_MKQ, uniform over (m,k), Q holding U_k|m⟩⟨m|U_k†.
///
/// Stored as the family of pure encoder states; dense materialization is
/// available when the joint dimension stays within the size cap.
#[derive(Debug, Clone)]
pub struct CqStateWithKey {
    m_dim: usize,
    k_dim: usize,
    states: Vec<Vec<CVec>>, // [k][m]
}

/// Bipartite cq state ρ_MQ with the key traced out.
#[derive(Debug, Clone)]
pub struct CqStateWithoutKey {
    m_dim: usize,
    states: Vec<DensityOperator>,
}

/// ρ_MKQ of Eq.-style uniform locking form.
pub fn cq_state_with_key(scheme: &LockingScheme) -> Result<CqStateWithKey> {
    let (m, k) = (scheme.msg_dim(), scheme.key_count());
    if m * k > CQ_SIZE_CAP {
        return Err(Error::Capability(format!(
            "|M||K| = {} exceeds cap {CQ_SIZE_CAP}",
            m * k
        )));
    }
    let states = (0..k)
        .map(|ki| (0..m).map(|mi| scheme.encoder_state(mi, ki)).collect())
        .collect();
    Ok(CqStateWithKey { m_dim: m, k_dim: k, states })
}

/// ρ_MQ obtained by tracing the key register of ρ_MKQ.
pub fn cq_state_without_key(scheme: &LockingScheme) -> Result<CqStateWithoutKey> {
    let (m, k) = (scheme.msg_dim(), scheme.key_count());
    if m * k > CQ_SIZE_CAP {
        return Err(Error::Capability(format!(
            "|M||K| = {} exceeds cap {CQ_SIZE_CAP}",
            m * k
        )));
    }
    let ens = scheme.eve_ensemble();
    Ok(CqStateWithoutKey { m_dim: m, states: ens.states().to_vec() })
}

impl CqStateWithKey {
    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    pub fn k_dim(&self) -> usize {
        self.k_dim
    }

    /// Marginal on the quantum register: (1/|M||K|) Σ ψ_mk.
    pub fn marginal_q(&self) -> DensityOperator {
        let mut acc = CMat::zeros(self.m_dim, self.m_dim);
        let norm = 1.0 / (self.m_dim * self.k_dim) as f64;
        for row in &self.states {
            for v in row {
                acc += (v * v.adjoint()).scale(norm);
            }
        }
        DensityOperator::new(acc).expect("uniform mixture of pure states")
    }

    /// Quantum mutual information I(M;KQ) from the cq structure:
    /// H(M) + H(KQ) − H(MKQ) with the classical registers expanded
    /// entropically.
    pub fn mutual_info_m_kq(&self) -> f64 {
        let m = self.m_dim as f64;
        let k = self.k_dim as f64;
        let h_m = m.log2();
        // H(KQ) = log2|K| + avg_k H(ρ̄_k)
        let mut h_kq = k.log2();
        for row in &self.states {
            let mut rho_k = CMat::zeros(self.m_dim, self.m_dim);
            for v in row {
                rho_k += (v * v.adjoint()).scale(1.0 / m);
            }
            h_kq += qcore::von_neumann_entropy(
                &DensityOperator::new(rho_k).expect("uniform mixture"),
            ) / k;
        }
        // H(MKQ) = log2|M||K| + avg H(pure) and the conditionals are pure.
        let h_mkq = (m * k).log2();
        (h_m + h_kq - h_mkq).max(0.0)
    }

    /// Classical mutual information I(M; K Ŷ) of Bob's decode-then-measure
    /// strategy (apply U_k†, measure the standard basis).
    pub fn decode_then_measure_info(&self, scheme: &LockingScheme) -> f64 {
        let m = self.m_dim;
        let k = self.k_dim;
        // Joint over (m, (k, m̂)).
        let mut joint = vec![vec![0.0; m * k]; m];
        for (ki, row) in self.states.iter().enumerate() {
            let u = &scheme.key_unitaries()[ki];
            for (mi, v) in row.iter().enumerate() {
                let decoded = u.adjoint() * v;
                for mh in 0..m {
                    joint[mi][ki * m + mh] +=
                        decoded[mh].norm_sqr() / (m * k) as f64;
                }
            }
        }
        mutual_information_classical(&joint)
    }

    /// Dense ρ_MKQ on M⊗K⊗Q (dimension |M|²|K|); available at small sizes.
    pub fn dense(&self) -> Result<DensityOperator> {
        let dim = self.m_dim * self.k_dim * self.m_dim;
        if dim > qcore::MAX_DIM {
            return Err(Error::Capability(format!(
                "dense cq state dim {dim} exceeds {}",
                qcore::MAX_DIM
            )));
        }
        let mut acc = CMat::zeros(dim, dim);
        let norm = 1.0 / (self.m_dim * self.k_dim) as f64;
        for (ki, row) in self.states.iter().enumerate() {
            for (mi, v) in row.iter().enumerate() {
                let label = basis_vec(self.m_dim, mi).kronecker(&basis_vec(self.k_dim, ki));
                let full = label.kronecker(v);
                acc += (&full * full.adjoint()).scale(norm);
            }
        }
        DensityOperator::new(acc)
    }
}

impl CqStateWithoutKey {
    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    /// Key-averaged conditional states.
    pub fn conditional_states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn marginal_q(&self) -> DensityOperator {
        let mut acc = CMat::zeros(self.m_dim, self.m_dim);
        for s in &self.states {
            acc += s.matrix().scale(1.0 / self.m_dim as f64);
        }
        DensityOperator::new(acc).expect("uniform mixture")
    }

    pub fn ensemble(&self) -> Ensemble {
        Ensemble::uniform(self.states.clone()).expect("uniform ensemble")
    }

    /// Quantum mutual information I(M;Q) = Holevo χ of the key-averaged
    /// ensemble.
    pub fn mutual_info_m_q(&self) -> f64 {
        crate::accinfo::holevo_chi(&self.ensemble())
    }
}

// ---------------------------------------------------------------------------
// Protocols
// ---------------------------------------------------------------------------

/// An (n, R, ε) locking protocol instance: encoder-state family over M×K and
/// |K| decoding POVMs.
#[derive(Debug, Clone)]
pub struct LockingProtocolSpec {
    pub n: usize,
    pub msg_dim: usize,
    pub key_count: usize,
    encoder: Vec<DensityOperator>, // indexed k*msg_dim + m
    decoder_povms: Vec<Povm>,
    pub epsilon: f64,
}

impl LockingProtocolSpec {
    pub fn new(
        n: usize,
        msg_dim: usize,
        key_count: usize,
        encoder: Vec<DensityOperator>,
        decoder_povms: Vec<Povm>,
        epsilon: f64,
    ) -> Result<Self> {
        if encoder.len() != msg_dim * key_count {
            return Err(Error::DimMismatch(format!(
                "encoder family has {} states, expected |M||K| = {}",
                encoder.len(),
                msg_dim * key_count
            )));
        }
        if decoder_povms.len() != key_count {
            return Err(Error::DimMismatch(format!(
                "decoder count {} differs from |K| = {}",
                decoder_povms.len(),
                key_count
            )));
        }
        for povm in &decoder_povms {
            if povm.len() < msg_dim {
                return Err(Error::Validation(
                    "decoder POVM needs at least |M| outcomes".into(),
                ));
            }
        }
        Ok(Self { n, msg_dim, key_count, encoder, decoder_povms, epsilon })
    }

    /// Rate R = log2|M| / n.
    pub fn rate(&self) -> f64 {
        (self.msg_dim as f64).log2() / self.n as f64
    }

    pub fn encoder_state(&self, m: usize, k: usize) -> &DensityOperator {
        &self.encoder[k * self.msg_dim + m]
    }

    pub fn decoder_povm(&self, k: usize) -> &Povm {
        &self.decoder_povms[k]
    }

    /// One channel use, encoder U_k|m⟩, decoder "apply U_k† and measure the
    /// standard basis".
    pub fn canonical_noiseless(scheme: &LockingScheme, epsilon: f64) -> Result<Self> {
        let m = scheme.msg_dim();
        let k = scheme.key_count();
        let mut encoder = Vec::with_capacity(m * k);
        for ki in 0..k {
            for mi in 0..m {
                encoder.push(DensityOperator::from_pure(&scheme.encoder_state(mi, ki))?);
            }
        }
        let decoders = (0..k).map(|ki| scheme.key_basis_povm(ki)).collect();
        Self::new(1, m, k, encoder, decoders, epsilon)
    }

    /// Decoder for the d-dimensional erasure channel: decode in the key basis
    /// on a click, guess uniformly on the erasure flag.
    pub fn canonical_erasure(scheme: &LockingScheme, epsilon: f64) -> Result<Self> {
        let m = scheme.msg_dim();
        let k = scheme.key_count();
        let mut encoder = Vec::with_capacity(m * k);
        for ki in 0..k {
            for mi in 0..m {
                encoder.push(DensityOperator::from_pure(&scheme.encoder_state(mi, ki))?);
            }
        }
        let flag = basis_vec(m + 1, m);
        let flag_proj = &flag * flag.adjoint();
        let mut decoders = Vec::with_capacity(k);
        for ki in 0..k {
            let elements: Vec<CMat> = (0..m)
                .map(|mi| {
                    let v = scheme.encoder_state(mi, ki);
                    let mut e = CMat::zeros(m + 1, m + 1);
                    e.view_mut((0, 0), (m, m)).copy_from(&(&v * v.adjoint()));
                    e += flag_proj.scale(1.0 / m as f64);
                    e
                })
                .collect();
            decoders.push(Povm::new(elements)?);
        }
        Self::new(1, m, k, encoder, decoders, epsilon)
    }
}

/// Average decode probability (1/|M||K|) Σ Tr{Λ_m^{(k)} N^{⊗n}(ρ_{m,k})}.
pub fn decode_success_probability(
    proto: &LockingProtocolSpec,
    ch: &KrausChannel,
) -> Result<f64> {
    let chn = if proto.n == 1 { ch.clone() } else { ch.tensor_power(proto.n)? };
    let mut acc = 0.0;
    for k in 0..proto.key_count {
        let povm = proto.decoder_povm(k);
        if povm.dim() != chn.out_dim() {
            return Err(Error::DimMismatch(format!(
                "decoder on dim {} vs channel output {}",
                povm.dim(),
                chn.out_dim()
            )));
        }
        for m in 0..proto.msg_dim {
            let out = chn.apply(proto.encoder_state(m, k))?;
            acc += (povm.elements()[m].clone() * out.matrix()).trace().re;
        }
    }
    Ok((acc / (proto.msg_dim * proto.key_count) as f64).clamp(0.0, 1.0))
}

/// Classical mutual information I(M; K M̂) of the full decode (key known to
/// Bob), the operational with-key information of the protocol.
pub fn decode_mutual_info(proto: &LockingProtocolSpec, ch: &KrausChannel) -> Result<f64> {
    let chn = if proto.n == 1 { ch.clone() } else { ch.tensor_power(proto.n)? };
    let m = proto.msg_dim;
    let kc = proto.key_count;
    let mut joint = vec![vec![0.0; 0]; m];
    for row in joint.iter_mut() {
        row.resize(kc * m, 0.0);
    }
    let norm = 1.0 / (m * kc) as f64;
    for k in 0..kc {
        let povm = proto.decoder_povm(k);
        for mi in 0..m {
            let out = chn.apply(proto.encoder_state(mi, k))?;
            let probs = povm.outcome_probs(&out);
            for (mh, p) in probs.iter().enumerate().take(m) {
                joint[mi][k * m + mh] += norm * p;
            }
            // outcomes beyond |M| (if any) are failure outcomes mapped to m̂=0
            for p in probs.iter().skip(m) {
                joint[mi][k * m] += norm * p;
            }
        }
    }
    Ok(mutual_information_classical(&joint))
}

/// Per-outcome security data for one adversary measurement.
#[derive(Debug, Clone, Serialize)]
pub struct SecurityFragment {
    /// (outcome index, p(y), Σ_m |p_M(m) − p_{M|Y}(m|y)|)
    pub per_outcome: Vec<(usize, f64, f64)>,
    /// Outcomes skipped because p(y) ≤ the probability floor.
    pub skipped: Vec<usize>,
    /// Criterion value: max over kept outcomes of the variational distance.
    pub max_var_dist: f64,
    /// I(M;Y) of the induced joint distribution.
    pub mutual_info_bits: f64,
}

/// Evaluate the variational-distance security criterion for one adversary
/// POVM. Eve's states are the key-averaged encoder states pushed through
/// `eve_channel` (identity channel for strong locking, the complementary
/// channel for weak locking), with `n` channel uses.
pub fn eve_security_eval(
    proto: &LockingProtocolSpec,
    eve_channel: &KrausChannel,
    adversary: &Povm,
) -> Result<SecurityFragment> {
    let chn = if proto.n == 1 {
        eve_channel.clone()
    } else {
        eve_channel.tensor_power(proto.n)?
    };
    let m = proto.msg_dim;
    let kc = proto.key_count as f64;
    // Eve's conditional states σ_m.
    let mut sigma: Vec<DensityOperator> = Vec::with_capacity(m);
    for mi in 0..m {
        let mut acc = CMat::zeros(chn.out_dim(), chn.out_dim());
        for k in 0..proto.key_count {
            acc += chn.apply(proto.encoder_state(mi, k))?.matrix().scale(1.0 / kc);
        }
        sigma.push(DensityOperator::new(acc)?);
    }
    if adversary.dim() != chn.out_dim() {
        return Err(Error::DimMismatch(format!(
            "adversary POVM on dim {} vs Eve output dim {}",
            adversary.dim(),
            chn.out_dim()
        )));
    }
    let p_m = 1.0 / m as f64;
    let n_y = adversary.len();
    let mut joint = vec![vec![0.0; n_y]; m];
    for (mi, s) in sigma.iter().enumerate() {
        for (y, w) in adversary.outcome_probs(s).iter().enumerate() {
            joint[mi][y] = p_m * w;
        }
    }
    let mut per_outcome = Vec::new();
    let mut skipped = Vec::new();
    let mut max_var = 0.0f64;
    for y in 0..n_y {
        let p_y: f64 = (0..m).map(|mi| joint[mi][y]).sum();
        if p_y <= OUTCOME_PROB_FLOOR {
            skipped.push(y);
            continue;
        }
        let dist: f64 = (0..m).map(|mi| (p_m - joint[mi][y] / p_y).abs()).sum();
        max_var = max_var.max(dist);
        per_outcome.push((y, p_y, dist));
    }
    Ok(SecurityFragment {
        per_outcome,
        skipped,
        max_var_dist: max_var,
        mutual_info_bits: mutual_information_classical(&joint),
    })
}

// ---------------------------------------------------------------------------
// Bounds and ratios
// ---------------------------------------------------------------------------

/// Accessible-information bound implied by the variational-distance
/// criterion: h2(min(ε/2, 1)) + ε·n·R/2.
pub fn fannes_audenaert_acc_bound(epsilon: f64, n: usize, rate: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "variational distance ε = {epsilon} outside [0,2]"
        )));
    }
    let h = binary_entropy((epsilon / 2.0).min(1.0))?;
    Ok(h + epsilon * n as f64 * rate / 2.0)
}

/// Accessible-information key-growth bound for the n-fold parallel
/// composition of protocols each with variational distance γ:
/// (γn)·log2(d_E^n) + h2(min(γn, 1)).
pub fn composed_acc_info_bound(gamma: f64, n: usize, env_dim: usize) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::Domain("γ must be nonnegative".into()));
    }
    let gn = gamma * n as f64;
    Ok(gn * (n as f64) * (env_dim as f64).log2() + binary_entropy(gn.min(1.0))?)
}

/// Security and key-efficiency ratios.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ratios {
    /// I_acc without key / I_acc with key; `None` when the with-key
    /// information vanishes.
    pub r1: Option<f64>,
    /// key bits / (I_acc with key − I_acc without key); `None` when the
    /// unlocked information is not positive.
    pub r2: Option<f64>,
}

/// r1 = without/with, r2 = key_bits/(with − without); degenerate
/// denominators are flagged as undefined rather than returned as ±∞.
pub fn ratios_r1_r2(acc_without_key: f64, acc_with_key: f64, key_bits: f64) -> Ratios {
    let r1 = if acc_with_key > 1e-12 {
        Some(acc_without_key / acc_with_key)
    } else {
        None
    };
    let unlocked = acc_with_key - acc_without_key;
    let r2 = if unlocked > 1e-12 { Some(key_bits / unlocked) } else { None };
    Ratios { r1, r2 }
}

/// Verify the classical key-removal inequality
/// I(M;YK) − I(M;Y) ≤ log2|K| on a finite joint distribution p[m][y][k].
/// Returns (holds, slack) with slack = log2|K| − (I(M;YK) − I(M;Y)).
pub fn classical_inequality_check(joint: &[Vec<Vec<f64>>]) -> (bool, f64) {
    let n_m = joint.len();
    let n_y = joint.first().map_or(0, |v| v.len());
    let n_k = joint.first().and_then(|v| v.first()).map_or(0, |v| v.len());
    if n_m == 0 || n_y == 0 || n_k == 0 {
        return (true, 0.0);
    }
    // I(M;YK): treat (y,k) as one variable.
    let flat: Vec<Vec<f64>> = joint
        .iter()
        .map(|per_m| per_m.iter().flatten().copied().collect())
        .collect();
    let i_myk = mutual_information_classical(&flat);
    // I(M;Y): marginalize k.
    let marg: Vec<Vec<f64>> = joint
        .iter()
        .map(|per_m| per_m.iter().map(|row| row.iter().sum()).collect())
        .collect();
    let i_my = mutual_information_classical(&marg);
    let slack = (n_k as f64).log2() - (i_myk - i_my);
    (slack >= -1e-9, slack)
}

/// Parallel composition of two locking protocols: variational distances add.
pub fn parallel_compose_security(eps1: f64, eps2: f64) -> Result<f64> {
    if eps1 < 0.0 || eps2 < 0.0 {
        return Err(Error::Domain("ε must be nonnegative".into()));
    }
    Ok(eps1 + eps2)
}

/// Key length 4·log2(1/ε) + c·log2(log2(1/ε)) sufficient for Haar-sampled
/// locking at security ε (planning/reporting aid, not a security proof; the
/// log-log constant is not pinned down and is exposed as `c_loglog`).
pub fn fhs_key_length(epsilon: f64, c_loglog: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} outside (0,1)")));
    }
    let l = (1.0 / epsilon).log2();
    Ok(4.0 * l + c_loglog * l.log2())
}

// ---------------------------------------------------------------------------
// Serializable security report (assembled by the CLI lock-sim command)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryEntry {
    pub name: String,
    pub mutual_info_bits: f64,
    pub max_var_dist: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecurityReport {
    pub success_prob: f64,
    pub per_outcome_var_dist: Vec<f64>,
    pub max_var_dist: f64,
    pub fa_acc_bound_bits: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub acc_with_key_bits: f64,
    pub acc_without_key_bits: f64,
    pub key_bits: f64,
    pub adversary_suite: Vec<AdversaryEntry>,
    pub skipped_outcomes: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accinfo;

    #[test]
    fn cq_with_key_trivial_scheme() {
        // |M|=2, |K|=1, U=I: classically correlated state over M and Q.
        let scheme = LockingScheme::trivial(2);
        let cq = cq_state_with_key(&scheme).unwrap();
        assert!((cq.mutual_info_m_kq() - 1.0).abs() < 1e-10);
        let dense = cq.dense().unwrap();
        // I(M;KQ) on the dense state (K is trivial): marginal over (M),(KQ).
        let i = qcore::mutual_information(&dense, 2, 2).unwrap();
        assert!((i - 1.0).abs() < 1e-10);
    }

    #[test]
    fn marginal_q_is_maximally_mixed() {
        for seed in 0..3 {
            let scheme = LockingScheme::haar(4, 2, seed).unwrap();
            let cq = cq_state_with_key(&scheme).unwrap();
            let q = cq.marginal_q();
            let defect = max_abs(&(q.matrix() - &identity(4).scale(0.25)));
            assert!(defect < 1e-10, "defect {defect}");
        }
    }

    #[test]
    fn with_key_information_is_maximal() {
        let scheme = LockingScheme::haar(4, 2, 11).unwrap();
        let cq = cq_state_with_key(&scheme).unwrap();
        assert!((cq.mutual_info_m_kq() - 2.0).abs() < 1e-9);
        assert!((cq.decode_then_measure_info(&scheme) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn without_key_reduces_to_with_key_when_single_key() {
        let scheme = LockingScheme::haar(3, 1, 5).unwrap();
        let no_key = cq_state_without_key(&scheme).unwrap();
        // One key: Eve's conditional states are pure, χ = log2 3.
        assert!((no_key.mutual_info_m_q() - 3f64.log2()).abs() < 1e-9);
        let q = no_key.marginal_q();
        assert!(max_abs(&(q.matrix() - &identity(3).scale(1.0 / 3.0))) < 1e-10);
    }

    #[test]
    fn bb84_like_two_key_scheme() {
        // U_1 = I, U_2 = Hadamard: Eve's states are the BB84 pairs averaged.
        let h = CMat::from_row_slice(
            2,
            2,
            &[
                qcore::cr(std::f64::consts::FRAC_1_SQRT_2),
                qcore::cr(std::f64::consts::FRAC_1_SQRT_2),
                qcore::cr(std::f64::consts::FRAC_1_SQRT_2),
                qcore::cr(-std::f64::consts::FRAC_1_SQRT_2),
            ],
        );
        let scheme = LockingScheme::new(2, vec![identity(2), h]).unwrap();
        let no_key = cq_state_without_key(&scheme).unwrap();
        // σ_0 = (|0><0| + |+><+|)/2, σ_1 = (|1><1| + |-><-|)/2.
        let s0 = &no_key.conditional_states()[0];
        assert!((s0.matrix()[(0, 0)].re - 0.75).abs() < 1e-12);
        assert!((s0.matrix()[(0, 1)].re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn size_cap_enforced() {
        let scheme = LockingScheme::haar(64, 65, 0).unwrap();
        assert!(matches!(
            cq_state_with_key(&scheme),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn noiseless_decode_is_perfect() {
        let scheme = LockingScheme::haar(4, 2, 3).unwrap();
        let proto = LockingProtocolSpec::canonical_noiseless(&scheme, 0.1).unwrap();
        let ch = KrausChannel::identity_channel(4).unwrap();
        let p = decode_success_probability(&proto, &ch).unwrap();
        assert!((p - 1.0).abs() < 1e-10);
        assert!((decode_mutual_info(&proto, &ch).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn full_erasure_decodes_at_chance() {
        let scheme = LockingScheme::haar(4, 2, 7).unwrap();
        let proto = LockingProtocolSpec::canonical_erasure(&scheme, 0.1).unwrap();
        let ch = crate::channels::erasure(4, 1.0).unwrap();
        let p = decode_success_probability(&proto, &ch).unwrap();
        assert!((p - 0.25).abs() < 1e-10);
    }

    #[test]
    fn erasure_decode_interpolates() {
        // Success = (1-p)·1 + p/|M|, the lossy-PPM formula with η = 1-p.
        let scheme = LockingScheme::haar(4, 1, 9).unwrap();
        let proto = LockingProtocolSpec::canonical_erasure(&scheme, 0.1).unwrap();
        let ch = crate::channels::erasure(4, 0.3).unwrap();
        let p = decode_success_probability(&proto, &ch).unwrap();
        assert!((p - (0.7 + 0.3 * 0.25)).abs() < 1e-10);
    }

    #[test]
    fn one_time_pad_twirl_hides_everything() {
        let scheme = LockingScheme::shift_one_time_pad(4);
        let proto = LockingProtocolSpec::canonical_noiseless(&scheme, 0.0).unwrap();
        let eve = KrausChannel::identity_channel(4).unwrap();
        for povm in [Povm::standard_basis(4), Povm::fourier_basis(4)] {
            let frag = eve_security_eval(&proto, &eve, &povm).unwrap();
            assert!(frag.max_var_dist < 1e-9, "dist {}", frag.max_var_dist);
        }
    }

    #[test]
    fn weak_locking_over_identity_channel_is_blind() {
        // Complement of the identity channel is constant: Eve sees nothing.
        let scheme = LockingScheme::haar(3, 2, 13).unwrap();
        let proto = LockingProtocolSpec::canonical_noiseless(&scheme, 0.0).unwrap();
        let eve = qcore::complementary_channel(&KrausChannel::identity_channel(3).unwrap())
            .unwrap();
        let frag = eve_security_eval(&proto, &eve, &Povm::trivial(1)).unwrap();
        assert!(frag.max_var_dist < 1e-12);
        assert!(frag.mutual_info_bits < 1e-12);
    }

    #[test]
    fn fa_bound_values() {
        assert!(fannes_audenaert_acc_bound(0.0, 10, 1.0).unwrap().abs() < 1e-15);
        let v = fannes_audenaert_acc_bound(1.0, 1, 1.0).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        let v = fannes_audenaert_acc_bound(0.01, 100, 1.0).unwrap();
        let expected = binary_entropy(0.005).unwrap() + 0.5;
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn ratios_basics() {
        let r = ratios_r1_r2(0.0, 2.0, 2.0);
        assert_eq!(r.r1, Some(0.0));
        assert_eq!(r.r2, Some(1.0));

        let r = ratios_r1_r2(1.0, 2.0, 2.0);
        assert_eq!(r.r1, Some(0.5));
        assert_eq!(r.r2, Some(2.0));

        let r = ratios_r1_r2(2.0, 2.0, 1.0);
        assert!(r.r2.is_none());
    }

    #[test]
    fn classical_inequality_independent_key() {
        // K independent of (M,Y): slack is exactly log2|K|.
        let n_k = 4;
        let joint: Vec<Vec<Vec<f64>>> = (0..2)
            .map(|m| {
                (0..2)
                    .map(|y| {
                        (0..n_k)
                            .map(|_| if m == y { 0.5 / n_k as f64 } else { 0.0 })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let (ok, slack) = classical_inequality_check(&joint);
        assert!(ok);
        assert!((slack - 2.0).abs() < 1e-9);
    }

    #[test]
    fn classical_inequality_one_time_pad_equality() {
        // Y = M ⊕ K with uniform M, K: removing the key erases everything,
        // I(M;YK) − I(M;Y) = log2|K|.
        let d = 4;
        let mut joint = vec![vec![vec![0.0; d]; d]; d];
        for (m, per_m) in joint.iter_mut().enumerate() {
            for k in 0..d {
                per_m[(m + k) % d][k] = 1.0 / (d * d) as f64;
            }
        }
        let (ok, slack) = classical_inequality_check(&joint);
        assert!(ok);
        assert!(slack.abs() < 1e-9, "slack {slack}");
    }

    #[test]
    fn compose_and_fhs_formulas() {
        assert_eq!(parallel_compose_security(0.0, 0.25).unwrap(), 0.25);
        assert!((parallel_compose_security(0.1, 0.2).unwrap() - 0.3).abs() < 1e-15);

        assert!((fhs_key_length(1.0 / 16.0, 0.0).unwrap() - 16.0).abs() < 1e-12);
        assert!((fhs_key_length(0.5, 0.0).unwrap() - 4.0).abs() < 1e-12);
        // monotone decreasing in ε
        let a = fhs_key_length(0.01, 1.0).unwrap();
        let b = fhs_key_length(0.02, 1.0).unwrap();
        assert!(a > b);
    }

    #[test]
    fn entropy_min_objective_matches_measured_information() {
        // Standard basis on the trivial scheme reveals everything.
        let scheme = LockingScheme::trivial(4);
        let v = accinfo::entropy_min_objective(&scheme, &Povm::standard_basis(4)).unwrap();
        assert!((v - 2.0).abs() < 1e-12);

        // Fourier basis on the identity-keyed scheme reveals nothing.
        let v = accinfo::entropy_min_objective(&scheme, &Povm::fourier_basis(4)).unwrap();
        assert!(v.abs() < 1e-12);

        // Cross-implementation identity on a random rank-1 POVM.
        let scheme = LockingScheme::haar(4, 2, 21).unwrap();
        let u = qcore::haar_unitary(&mut rng::root(99), 4);
        let povm = Povm::from_orthonormal_columns(&u);
        let via_objective = accinfo::entropy_min_objective(&scheme, &povm).unwrap();
        let via_joint =
            accinfo::acc_info_of_measurement(&scheme.pair_ensemble(), &povm).unwrap();
        assert!(
            (via_objective - via_joint).abs() < 1e-9,
            "{via_objective} vs {via_joint}"
        );

        // Non-rank-1 elements are rejected.
        assert!(accinfo::entropy_min_objective(&scheme, &Povm::trivial(4)).is_err());
    }

    #[test]
    fn locked_ensemble_shows_a_gap() {
        // d=16, |K|=4 Haar keys: the optimizer's lower bound stays clearly
        // below log2 16 and below χ, over 5 seeds.
        for seed in 0..5u64 {
            let scheme = LockingScheme::haar(16, 4, 40 + seed).unwrap();
            let ens = scheme.eve_ensemble();
            let res = accinfo::acc_info_optimize_with_starts(
                &ens,
                &[scheme.key_basis_povm(0)],
                2,
                12,
                seed,
            )
            .unwrap();
            let chi = accinfo::holevo_chi(&ens);
            assert!(
                res.lower_bits < 4.0 - 0.1,
                "seed {seed}: {} not locked",
                res.lower_bits
            );
            assert!(res.lower_bits <= chi + 1e-6);
        }
    }

    #[test]
    fn data_processing_under_key_discard() {
        for seed in 0..3 {
            let scheme = LockingScheme::haar(4, 2, 70 + seed).unwrap();
            let with = cq_state_with_key(&scheme).unwrap().mutual_info_m_kq();
            let without = cq_state_without_key(&scheme).unwrap().mutual_info_m_q();
            assert!(without <= with + 1e-9);
        }
    }

    use crate::rng;
}

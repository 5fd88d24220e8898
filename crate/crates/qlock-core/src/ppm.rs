//! Quantum enigma machine simulators: single-photon pulse-position
//! modulation with loss and feedback, and the weak-coherent PPM variant with
//! its photon-number adversary and key-efficiency region.
//!
//! The feedback simulation assumes the eavesdropper attacks each PPM block
//! independently; reports carry that assumption explicitly. The ≥2-photon
//! sector of the coherent variant is lumped into a single projector whose
//! information content is budgeted at the worst case N_tot²·log2 n.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::accinfo::{self, acc_info_optimize_with_starts};
use crate::error::{Error, Result};
use crate::locking::LockingScheme;
use crate::qcore::{basis_vec, cr, CMat, CVec, DensityOperator, Ensemble, Povm, C64};
use crate::rng;

/// Mode cap for the single-photon scheme (dense optimizer limit).
pub const SINGLE_PHOTON_MODE_CAP: usize = 64;
/// Mode cap for the coherent scheme's truncated simulation.
pub const COHERENT_MODE_CAP: usize = 32;
/// Largest total mean photon number with an honest truncation guarantee.
pub const COHERENT_NTOT_CAP: f64 = 0.5;

/// Configuration of a PPM enigma-machine run.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PpmConfig {
    pub n_modes: usize,
    pub eta: f64,
    pub num_keys: usize,
    /// Coherent-variant amplitude; `None` runs the single-photon variant.
    pub alpha: Option<(f64, f64)>,
    pub trials: usize,
    pub rng_seed: u64,
    /// Security parameter used for the r2 estimate.
    pub epsilon: f64,
}

impl PpmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 2 {
            return Err(Error::Validation("PPM needs at least 2 modes".into()));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::Domain(format!("η = {} outside [0,1]", self.eta)));
        }
        if self.trials == 0 {
            return Err(Error::Validation("trials must be ≥ 1".into()));
        }
        if self.num_keys == 0 {
            return Err(Error::Validation("need at least one key".into()));
        }
        if !(0.0 < self.epsilon && self.epsilon < 1.0) {
            return Err(Error::Domain(format!(
                "ε = {} outside (0,1)",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Monte-Carlo report for a PPM run.
#[derive(Debug, Clone, Serialize)]
pub struct PpmReport {
    pub throughput_bits_per_block: f64,
    pub throughput_stderr: f64,
    pub resend_rate: f64,
    pub r2_estimate: f64,
    /// Coherent variant only.
    pub i_num_bits: Option<f64>,
    pub i_num_remainder_bound_bits: Option<f64>,
    pub trials: usize,
    pub clicks: usize,
    pub decode_errors: usize,
    /// Security of the feedback loop presumes independent per-block attacks.
    pub assumes_independent_block_attacks: bool,
}

/// Single-photon PPM scheme: the message space is the n-dimensional
/// single-photon subspace and the keys are Haar mode unitaries (which act on
/// that subspace exactly as their n×n mode matrices).
pub fn single_photon_scheme(n_modes: usize, num_keys: usize, seed: u64) -> Result<LockingScheme> {
    if n_modes < 2 || n_modes > SINGLE_PHOTON_MODE_CAP {
        return Err(Error::Capability(format!(
            "single-photon PPM supports 2..={SINGLE_PHOTON_MODE_CAP} modes, got {n_modes}"
        )));
    }
    LockingScheme::haar(n_modes, num_keys, seed)
}

/// Simulate the lossy feedback protocol: each block survives with
/// probability η (click ⇒ decode after U_k†; no click ⇒ resend request).
/// The throughput estimator converges to η·log2 n bits per block.
pub fn lossy_feedback_simulate(cfg: &PpmConfig) -> Result<PpmReport> {
    cfg.validate()?;
    if cfg.alpha.is_some() {
        return Err(Error::Validation(
            "lossy_feedback_simulate runs the single-photon variant".into(),
        ));
    }
    let scheme = single_photon_scheme(cfg.n_modes, cfg.num_keys, cfg.rng_seed)?;
    let n = cfg.n_modes;
    let keys = scheme.key_unitaries().to_vec();
    let decoders: Vec<CMat> = keys.iter().map(|u| u.adjoint()).collect();

    let chunk = 4096usize;
    let n_chunks = cfg.trials.div_ceil(chunk);
    let per_chunk: Vec<(usize, usize)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::stream(cfg.rng_seed, 10_000 + c as u64);
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(cfg.trials);
            let mut clicks = 0usize;
            let mut errors = 0usize;
            for _ in lo..hi {
                let m = r.gen_range(0..n);
                let k = r.gen_range(0..keys.len());
                let survived = r.gen::<f64>() < cfg.eta;
                if !survived {
                    continue;
                }
                clicks += 1;
                // Bob undoes the key unitary and photodetects the mode.
                let encoded: CVec = keys[k].column(m).into();
                let decoded = &decoders[k] * encoded;
                let mhat = sample_outcome(&mut r, &decoded);
                if mhat != m {
                    errors += 1;
                }
            }
            (clicks, errors)
        })
        .collect();
    let clicks: usize = per_chunk.iter().map(|x| x.0).sum();
    let errors: usize = per_chunk.iter().map(|x| x.1).sum();

    let p_click = clicks as f64 / cfg.trials as f64;
    let bits = (n as f64).log2();
    let stderr = bits * (p_click * (1.0 - p_click) / cfg.trials as f64).sqrt();
    Ok(PpmReport {
        throughput_bits_per_block: p_click * bits,
        throughput_stderr: stderr,
        resend_rate: 1.0 - p_click,
        r2_estimate: ppm_r2_estimate(cfg.eta.max(f64::MIN_POSITIVE), n as f64, cfg.epsilon)?,
        i_num_bits: None,
        i_num_remainder_bound_bits: None,
        trials: cfg.trials,
        clicks,
        decode_errors: errors,
        assumes_independent_block_attacks: true,
    })
}

fn sample_outcome<R: Rng>(r: &mut R, amplitudes: &CVec) -> usize {
    let u: f64 = r.gen();
    let mut acc = 0.0;
    for (i, a) in amplitudes.iter().enumerate() {
        acc += a.norm_sqr();
        if u < acc {
            return i;
        }
    }
    amplitudes.len() - 1
}

/// Key-efficiency estimate r2 ≈ 4·log2(1/ε) / (η·log2 n). The mode count
/// is a float so that planning values far beyond any simulable size (2^100
/// modes) can be plugged in.
pub fn ppm_r2_estimate(eta: f64, n_modes: f64, epsilon: f64) -> Result<f64> {
    if eta <= 0.0 || n_modes < 2.0 || !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::Domain(
            "r2 estimate needs η > 0, n ≥ 2, ε ∈ (0,1)".into(),
        ));
    }
    Ok(4.0 * (1.0 / epsilon).log2() / (eta * n_modes.log2()))
}

// ---------------------------------------------------------------------------
// Weak-coherent PPM
// ---------------------------------------------------------------------------

/// Coherent PPM scheme in the truncated representation
/// vacuum ⊕ single-photon sector ⊕ lumped remainder (dimension n+2).
#[derive(Debug, Clone)]
pub struct CoherentPpmScheme {
    n_modes: usize,
    alpha: C64,
    subscheme: LockingScheme,
}

impl CoherentPpmScheme {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn n_tot(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// The locked scheme on the single-photon subspace.
    pub fn single_photon_subscheme(&self) -> &LockingScheme {
        &self.subscheme
    }

    /// Norms of the (vacuum, single-photon, remainder) sectors; they sum to
    /// one within 1e-9 by construction.
    pub fn sector_norms(&self, k: usize) -> (f64, f64, f64) {
        let nt = self.n_tot();
        let vac = (-nt).exp();
        let col: CVec = self.subscheme.key_unitaries()[k].column(0).into();
        let single = vac * nt * col.norm_squared();
        let rem = 1.0 - vac - vac * nt;
        (vac, single, rem)
    }

    /// Truncated encoder state for (m, k) on the (n+2)-dimensional space:
    /// index 0 = vacuum, 1..=n = single-photon modes, n+1 = remainder lump.
    pub fn truncated_state(&self, m: usize, k: usize) -> CVec {
        let n = self.n_modes;
        let nt = self.n_tot();
        let vac_amp = (-nt / 2.0).exp();
        let mut v = CVec::zeros(n + 2);
        v[0] = cr(vac_amp);
        let col = self.subscheme.encoder_state(m, k);
        for i in 0..n {
            v[1 + i] = col[i] * self.alpha * cr(vac_amp);
        }
        let rem = (1.0 - vac_amp * vac_amp * (1.0 + nt)).max(0.0);
        v[n + 1] = cr(rem.sqrt());
        v
    }

    /// Eve's truncated ensemble: uniform over m, key-averaged.
    pub fn truncated_eve_ensemble(&self) -> Result<Ensemble> {
        let n = self.n_modes;
        let kc = self.subscheme.key_count();
        let mut states = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = CMat::zeros(n + 2, n + 2);
            for k in 0..kc {
                let v = self.truncated_state(m, k);
                acc += (&v * v.adjoint()).scale(1.0 / kc as f64);
            }
            states.push(DensityOperator::new(acc)?);
        }
        Ensemble::uniform(states)
    }
}

/// Build a coherent PPM scheme: n-mode PPM of amplitude α, keys sampled as
/// Haar mode unitaries and lifted to the single-photon sector.
pub fn coherent_ppm_scheme(
    n_modes: usize,
    alpha: C64,
    num_keys: usize,
    seed: u64,
) -> Result<CoherentPpmScheme> {
    if n_modes < 2 || n_modes > COHERENT_MODE_CAP {
        return Err(Error::Capability(format!(
            "coherent PPM supports 2..={COHERENT_MODE_CAP} modes, got {n_modes}"
        )));
    }
    let nt = alpha.norm_sqr();
    if nt > COHERENT_NTOT_CAP {
        return Err(Error::Capability(format!(
            "N_tot = {nt} exceeds the truncation guarantee cap {COHERENT_NTOT_CAP}"
        )));
    }
    Ok(CoherentPpmScheme {
        n_modes,
        alpha,
        subscheme: LockingScheme::haar(n_modes, num_keys, seed)?,
    })
}

/// Estimate of the photon-number adversary's information.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct INumEstimate {
    /// N_tot·[log2 n − minimized average entropy] from the single-photon
    /// sector optimization.
    pub bits: f64,
    /// Worst-case information of the lumped ≥2-photon sector:
    /// N_tot²·log2 n, reported separately.
    pub remainder_bound_bits: f64,
}

/// Photon-number adversary's information estimate: the single-photon-sector
/// bracket is maximized with the rank-1 optimizer seeded by the key bases,
/// then cross-checked against the locked-ensemble entropy objective.
pub fn i_num_estimate(
    scheme: &CoherentPpmScheme,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<INumEstimate> {
    let sub = scheme.single_photon_subscheme();
    let n = scheme.n_modes();
    let nt = scheme.n_tot();
    if nt == 0.0 {
        return Ok(INumEstimate { bits: 0.0, remainder_bound_bits: 0.0 });
    }
    let key_bases: Vec<Povm> = (0..sub.key_count().min(4))
        .map(|k| sub.key_basis_povm(k))
        .collect();
    let res = acc_info_optimize_with_starts(&sub.pair_ensemble(), &key_bases, restarts, iters, seed)?;
    // The optimizer maximizes the measured information of the (m,k)-labeled
    // ensemble, which equals the locked-ensemble entropy objective.
    let bracket = accinfo::entropy_min_objective(sub, &res.achieving_povm)?;
    debug_assert!((bracket - res.lower_bits).abs() < 1e-6);
    Ok(INumEstimate {
        bits: nt * bracket.max(res.lower_bits),
        remainder_bound_bits: nt * nt * (n as f64).log2(),
    })
}

/// Key-efficiency region for the weak-coherent protocol:
/// N_tot must be ≪ 1 (threshold) yet exceed 4·log2(1/ε)/log2 n.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionCheck {
    pub inside: bool,
    /// threshold − N_tot  (the "≪ 1" side, threshold 0.1 by default)
    pub upper_margin: f64,
    /// N_tot − 4·log2(1/ε)/log2 n
    pub lower_margin: f64,
    pub threshold: f64,
}

pub fn key_efficiency_region(n_tot: f64, epsilon: f64, n_modes: f64) -> Result<RegionCheck> {
    key_efficiency_region_with_threshold(n_tot, epsilon, n_modes, 0.1)
}

pub fn key_efficiency_region_with_threshold(
    n_tot: f64,
    epsilon: f64,
    n_modes: f64,
    threshold: f64,
) -> Result<RegionCheck> {
    if n_tot <= 0.0 || !(0.0 < epsilon && epsilon <= 1.0) || n_modes < 2.0 {
        return Err(Error::Domain(
            "region check needs N_tot > 0, ε ∈ (0,1], n ≥ 2".into(),
        ));
    }
    let lower = 4.0 * (1.0 / epsilon).log2() / n_modes.log2();
    let check = RegionCheck {
        inside: n_tot <= threshold && n_tot > lower,
        upper_margin: threshold - n_tot,
        lower_margin: n_tot - lower,
        threshold,
    };
    Ok(check)
}

/// Photon-number adversary POVM on the truncated space: the vacuum
/// projector, optimizer-chosen rank-1 elements lifted into the
/// single-photon sector, and the remainder projector.
pub fn photon_number_adversary(
    scheme: &CoherentPpmScheme,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<Povm> {
    let sub = scheme.single_photon_subscheme();
    let n = scheme.n_modes();
    let key_bases: Vec<Povm> = (0..sub.key_count().min(4))
        .map(|k| sub.key_basis_povm(k))
        .collect();
    let res = acc_info_optimize_with_starts(&sub.pair_ensemble(), &key_bases, restarts, iters, seed)?;
    let dim = n + 2;
    let mut elements = Vec::with_capacity(res.achieving_povm.len() + 2);
    let vac = basis_vec(dim, 0);
    elements.push(&vac * vac.adjoint());
    for e in res.achieving_povm.elements() {
        let mut lifted = CMat::zeros(dim, dim);
        lifted.view_mut((1, 1), (n, n)).copy_from(e);
        elements.push(lifted);
    }
    let rem = basis_vec(dim, n + 1);
    elements.push(&rem * rem.adjoint());
    Povm::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accinfo::acc_info_of_measurement;

    fn cfg(n_modes: usize, eta: f64, trials: usize, seed: u64) -> PpmConfig {
        PpmConfig {
            n_modes,
            eta,
            num_keys: 4,
            alpha: None,
            trials,
            rng_seed: seed,
            epsilon: 1.0 / 16.0,
        }
    }

    #[test]
    fn trivial_two_mode_scheme() {
        let scheme = single_photon_scheme(2, 1, 0).unwrap();
        assert_eq!(scheme.msg_dim(), 2);
        // Encoded amplitudes are the columns of the mode unitary.
        let u = &scheme.key_unitaries()[0];
        let enc = scheme.encoder_state(1, 0);
        for i in 0..2 {
            assert_eq!(enc[i], u[(i, 1)]);
        }
        assert!((enc.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn feedback_throughput_no_loss() {
        let report = lossy_feedback_simulate(&cfg(8, 1.0, 2000, 1)).unwrap();
        assert_eq!(report.clicks, 2000);
        assert_eq!(report.decode_errors, 0);
        assert!((report.throughput_bits_per_block - 3.0).abs() < 1e-12);
        assert_eq!(report.resend_rate, 0.0);
    }

    #[test]
    fn feedback_throughput_full_loss() {
        let report = lossy_feedback_simulate(&cfg(8, 0.0, 500, 2)).unwrap();
        assert_eq!(report.clicks, 0);
        assert_eq!(report.throughput_bits_per_block, 0.0);
        assert_eq!(report.resend_rate, 1.0);
    }

    #[test]
    fn feedback_throughput_half_loss_within_three_sigma() {
        let report = lossy_feedback_simulate(&cfg(16, 0.5, 100_000, 3)).unwrap();
        let expect = 0.5 * 4.0;
        assert!(
            (report.throughput_bits_per_block - expect).abs() <= 3.0 * report.throughput_stderr,
            "estimate {} vs {expect} (σ {})",
            report.throughput_bits_per_block,
            report.throughput_stderr
        );
        assert_eq!(report.decode_errors, 0);
    }

    #[test]
    fn feedback_simulation_is_deterministic() {
        let a = lossy_feedback_simulate(&cfg(8, 0.7, 20_000, 9)).unwrap();
        let b = lossy_feedback_simulate(&cfg(8, 0.7, 20_000, 9)).unwrap();
        assert_eq!(a.clicks, b.clicks);
        assert_eq!(a.throughput_bits_per_block, b.throughput_bits_per_block);
    }

    #[test]
    fn r2_estimate_formula() {
        assert!((ppm_r2_estimate(1.0, 16.0, 0.5).unwrap() - 1.0).abs() < 1e-12);
        // Doubling log2 n halves the estimate.
        let a = ppm_r2_estimate(0.5, 16.0, 0.1).unwrap();
        let b = ppm_r2_estimate(0.5, 256.0, 0.1).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        // ε = 1/16, η = 0.5, n = 2^32: 4·4/(0.5·32) = 1.
        let v = ppm_r2_estimate(0.5, (2.0f64).powi(32), 1.0 / 16.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_sectors_sum_to_one() {
        let scheme = coherent_ppm_scheme(8, C64::new(0.3, 0.1), 2, 5).unwrap();
        for k in 0..2 {
            let (v, s, r) = scheme.sector_norms(k);
            assert!((v + s + r - 1.0).abs() < 1e-9);
        }
        for m in 0..8 {
            let st = scheme.truncated_state(m, 1);
            assert!((st.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coherent_vacuum_probability() {
        let nt: f64 = 0.2;
        let scheme = coherent_ppm_scheme(8, C64::new(nt.sqrt(), 0.0), 2, 7).unwrap();
        let povm = photon_number_adversary(&scheme, 1, 5, 0).unwrap();
        let ens = scheme.truncated_eve_ensemble().unwrap();
        // Vacuum outcome (element 0) probability is e^{−N_tot} exactly in
        // the truncated representation.
        for st in ens.states() {
            let p = povm.outcome_probs(st)[0];
            assert!((p - (-nt).exp()).abs() < 2.0 * nt * nt);
        }
    }

    #[test]
    fn zero_amplitude_carries_no_information() {
        let scheme = coherent_ppm_scheme(4, C64::new(0.0, 0.0), 2, 3).unwrap();
        let est = i_num_estimate(&scheme, 1, 5, 0).unwrap();
        assert_eq!(est.bits, 0.0);
    }

    #[test]
    fn single_key_inum_reveals_the_basis() {
        // |K| = 1: the optimizer finds the decoding basis, bracket = log2 n.
        let scheme = coherent_ppm_scheme(8, C64::new(0.3, 0.0), 1, 11).unwrap();
        let est = i_num_estimate(&scheme, 2, 12, 1).unwrap();
        let expect = 0.09 * 3.0;
        assert!(
            (est.bits - expect).abs() < 1e-6,
            "bits {} vs {expect}",
            est.bits
        );
        assert!((est.remainder_bound_bits - 0.09 * 0.09 * 3.0).abs() < 1e-12);
    }

    #[test]
    fn region_check_cases() {
        // N_tot = 0.05, ε = 0.5, n = 2^100: inside (4/100 = 0.04 < 0.05).
        let n = (2.0f64).powi(100);
        let r = key_efficiency_region(0.05, 0.5, n).unwrap();
        assert!(r.inside, "margins {r:?}");
        assert!((r.lower_margin - 0.01).abs() < 1e-12);

        let r = key_efficiency_region(0.5, 0.5, n).unwrap();
        assert!(!r.inside && r.upper_margin < 0.0);

        // ε → 1 sends the lower boundary to zero.
        let r = key_efficiency_region(0.05, 1.0, (2.0f64).powi(20)).unwrap();
        assert!(r.lower_margin > 0.0 && (r.lower_margin - 0.05).abs() < 1e-12);
    }

    #[test]
    fn region_monotone_in_n() {
        let mut prev_inside = false;
        for &n in &[4.0f64, 16.0, 256.0, 65_536.0, (2.0f64).powi(40)] {
            let r = key_efficiency_region(0.09, 0.25, n).unwrap();
            if prev_inside {
                assert!(r.inside, "inside flipped off at n = {n}");
            }
            prev_inside = r.inside;
        }
    }

    #[test]
    fn photon_number_adversary_completeness_and_strength() {
        let scheme = coherent_ppm_scheme(6, C64::new(0.25, 0.2), 2, 17).unwrap();
        let povm = photon_number_adversary(&scheme, 2, 10, 3).unwrap();
        let ens = scheme.truncated_eve_ensemble().unwrap();
        let via_num = acc_info_of_measurement(&ens, &povm).unwrap();
        let via_std = acc_info_of_measurement(&ens, &Povm::standard_basis(8)).unwrap();
        assert!(
            via_num + 1e-9 >= via_std,
            "photon-number {via_num} < standard {via_std}"
        );
    }
}

//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! and enforcing its stated tolerance and runtime budget.

use std::time::Instant;

use qlock_core::accinfo::{
    acc_info_optimize, adversary_suite, holevo_chi, two_state_ensemble, two_state_grid_oracle,
};
use qlock_core::bosonic::{
    g_func, hw_thermal_maximizer_check, pure_loss_private_capacity, sample_constrained_state,
    strong_lock_bound_cs, weak_lock_bound_pure_loss, wehrl_entropy, FockOperator, QFunctionGrid,
    LOG2_E,
};
use qlock_core::channels::{
    degraded_product_additivity_check, depolarizing_rank_one, eb_zero_capacity_certificate,
    random_measure_prepare, weak_lock_upper_single_letter, WiretapChannel,
};
use qlock_core::locking::{
    classical_inequality_check, cq_state_with_key, decode_success_probability,
    LockingProtocolSpec, LockingScheme,
};
use qlock_core::ppm::{self, PpmConfig};
use qlock_core::qcore::{random_density, CVec, DensityOperator, Ensemble, KrausChannel, C64};
use qlock_core::{channels, qcore, rng};
use rand::Rng;
use rayon::prelude::*;

struct Criterion {
    id: usize,
    name: &'static str,
    budget_secs: f64,
    started: Instant,
}

impl Criterion {
    fn start(id: usize, name: &'static str, budget_secs: f64) -> Self {
        Self { id, name, budget_secs, started: Instant::now() }
    }

    fn finish(self, passed: bool, detail: String) {
        let elapsed = self.started.elapsed().as_secs_f64();
        println!(
            "ACCEPTANCE {:>2} {:<28} {} ({detail}; {elapsed:.1}s / {:.0}s budget)",
            self.id,
            self.name,
            if passed { "PASS" } else { "FAIL" },
            self.budget_secs
        );
        assert!(passed, "criterion {} {}: {detail}", self.id, self.name);
        assert!(
            elapsed < self.budget_secs,
            "criterion {} exceeded its runtime budget: {elapsed:.1}s ≥ {}s",
            self.id,
            self.budget_secs
        );
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn criterion_01_noiseless_decode() {
    let c = Criterion::start(1, "noiseless-decode", 10.0);
    let mut ok = true;
    let mut detail = String::new();
    for &d in &[4usize, 16, 64] {
        for &k in &[1usize, 4] {
            let scheme = LockingScheme::haar(d, k, 1000 + (d * 10 + k) as u64).unwrap();
            let proto = LockingProtocolSpec::canonical_noiseless(&scheme, 0.01).unwrap();
            let ch = KrausChannel::identity_channel(d).unwrap();
            let p = decode_success_probability(&proto, &ch).unwrap();
            let i = cq_state_with_key(&scheme).unwrap().mutual_info_m_kq();
            let target = (d as f64).log2();
            ok &= (p - 1.0).abs() < 1e-10 && (i - target).abs() < 1e-9;
            detail = format!("last d={d} |K|={k}: p={p:.12}, I={i:.10}");
        }
    }
    c.finish(ok, detail);
}

#[test]
fn criterion_02_accinfo_oracle() {
    let c = Criterion::start(2, "accinfo-grid-oracle", 60.0);
    let results: Vec<(f64, f64, f64, f64)> = (1..=20)
        .into_par_iter()
        .map(|j| {
            let overlap = j as f64 / 21.0;
            let ens = two_state_ensemble(overlap).unwrap();
            let oracle = two_state_grid_oracle(&ens, 10_000).unwrap();
            let res = acc_info_optimize(&ens, 4, 40, 2000 + j as u64).unwrap();
            (overlap, oracle, res.lower_bits, res.upper_bits)
        })
        .collect();
    let mut ok = true;
    let mut worst = 0.0f64;
    for (_, oracle, lower, upper) in &results {
        let diff = (lower - oracle).abs();
        worst = worst.max(diff);
        ok &= diff < 1e-4 && *lower <= upper + 1e-6;
    }
    c.finish(ok, format!("20 overlaps, worst |optimizer−oracle| = {worst:.2e}"));
}

#[test]
fn criterion_03_locking_trend() {
    let c = Criterion::start(3, "locking-effect-trend", 600.0);
    let ks = [1usize, 2, 4, 8, 16];
    let d = 32;
    let seeds: Vec<u64> = (0..10).collect();
    // Suite-best mutual information per (|K|, seed).
    let per_k: Vec<Vec<f64>> = ks
        .iter()
        .map(|&k| {
            seeds
                .par_iter()
                .map(|&s| {
                    let scheme = LockingScheme::haar(d, k, 3000 + 100 * s + k as u64).unwrap();
                    let extras: Vec<(String, qcore::Povm)> = (0..k.min(4))
                        .map(|i| (format!("key-basis-{i}"), scheme.key_basis_povm(i)))
                        .collect();
                    let suite =
                        adversary_suite(&scheme.eve_ensemble(), &extras, 2, 12, 7000 + s).unwrap();
                    suite.best_bits
                })
                .collect()
        })
        .collect();

    let stats: Vec<(f64, f64)> = per_k.iter().map(|xs| mean_and_se(xs)).collect();
    let mut decreasing = true;
    for w in stats.windows(2) {
        let gap = w[0].0 - w[1].0;
        let se = (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
        decreasing &= gap > 3.0 * se;
    }
    // |K| = 16: key bits 4, locked bits log2 32 = 5.
    let with_key = 5.0;
    let key_bits = 4.0;
    let without = stats.last().unwrap().0;
    let r1 = without / with_key;
    let r2 = key_bits / (with_key - without);
    let ok = decreasing && r1 < 0.5 && r2 < 1.0;
    let means: Vec<String> = stats.iter().map(|(m, _)| format!("{m:.3}")).collect();
    c.finish(
        ok,
        format!(
            "means over |K|∈{{1,2,4,8,16}}: [{}]; r1 = {r1:.3}, r2 = {r2:.3}",
            means.join(", ")
        ),
    );
}

#[test]
fn criterion_04_eb_zero_capacity() {
    let c = Criterion::start(4, "eb-zero-capacity", 300.0);
    let mut zoo: Vec<(String, KrausChannel)> = vec![
        ("depol-2/3".into(), depolarizing_rank_one(2.0 / 3.0).unwrap()),
        ("depol-0.8".into(), depolarizing_rank_one(0.8).unwrap()),
        ("depol-1.0".into(), depolarizing_rank_one(1.0).unwrap()),
    ];
    for i in 0..5 {
        let mut r = rng::stream(4000, i);
        zoo.push((
            format!("measure-prepare-{i}"),
            random_measure_prepare(&mut r, 2).to_channel().unwrap(),
        ));
    }
    let outcomes: Vec<(f64, f64)> = zoo
        .par_iter()
        .enumerate()
        .map(|(idx, (_, ch))| {
            let mut r = rng::stream(4100, idx as u64);
            let mut max_slack = f64::NEG_INFINITY;
            for _ in 0..50 {
                let states: Vec<DensityOperator> =
                    (0..4).map(|_| random_density(&mut r, 2)).collect();
                let ens = Ensemble::uniform(states).unwrap();
                max_slack = max_slack.max(eb_zero_capacity_certificate(ch, &ens).unwrap());
            }
            let interval = weak_lock_upper_single_letter(ch, 6, 4200 + idx as u64).unwrap();
            (max_slack, interval.upper_bits)
        })
        .collect();
    let worst_slack = outcomes.iter().map(|o| o.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_upper = outcomes.iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
    let ok = worst_slack <= 1e-6 && worst_upper <= 1e-4;
    c.finish(
        ok,
        format!("8 channels × 50 ensembles: max cert slack {worst_slack:.2e}, max upper endpoint {worst_upper:.2e}"),
    );
}

#[test]
fn criterion_05_bosonic_bounds() {
    let c = Criterion::start(5, "bosonic-closed-forms", 10.0);
    let mut ok = true;
    // 10^4 sampled N_S values across 12 decades.
    let mut max_bound = 0.0f64;
    for i in 0..10_000 {
        let n_s = 1e-4 * (10f64).powf(8.0 * i as f64 / 9_999.0);
        let b = strong_lock_bound_cs(n_s).unwrap();
        max_bound = max_bound.max(b);
        ok &= b <= LOG2_E;
    }
    ok &= (g_func(1.0).unwrap() - 2.0).abs() < 1e-12;
    let mut max_excess = 0.0f64;
    for i in 0..=60 {
        for j in 0..=60 {
            let eta = i as f64 / 60.0;
            let n_s = 1e-3 * (10f64).powf(4.0 * j as f64 / 60.0);
            let excess = weak_lock_bound_pure_loss(eta, n_s).unwrap()
                - pure_loss_private_capacity(eta, n_s).unwrap();
            max_excess = max_excess.max(excess);
            ok &= excess <= 1.4427;
        }
    }
    c.finish(
        ok,
        format!(
            "g(1) = {:.15}, max strong bound {max_bound:.6} ≤ log2 e, max excess {max_excess:.4}",
            g_func(1.0).unwrap()
        ),
    );
}

#[test]
fn criterion_06_wehrl_closed_forms() {
    let c = Criterion::start(6, "wehrl-closed-forms", 30.0);
    let vac = FockOperator::coherent(C64::new(0.0, 0.0), 40).unwrap();
    let grid = QFunctionGrid::for_state(&vac);
    let w_vac = wehrl_entropy(&vac, &grid).unwrap();
    let mut ok = (w_vac - LOG2_E).abs() < 1e-4;
    let mut detail = format!("vacuum {w_vac:.6} vs {LOG2_E:.6}");
    for &n in &[0.5, 1.0, 2.0] {
        let th = FockOperator::thermal(n).unwrap();
        let grid = QFunctionGrid::for_state(&th);
        let w = wehrl_entropy(&th, &grid).unwrap();
        let expect = (n + 1.0).log2() + LOG2_E;
        ok &= (w - expect).abs() < 1e-4;
        detail = format!("{detail}; N={n}: {w:.6} vs {expect:.6}");
    }
    c.finish(ok, detail);
}

#[test]
fn criterion_07_thermal_maximizer() {
    let c = Criterion::start(7, "thermal-maximizer", 300.0);
    let mut ok = true;
    let mut worst_slack = f64::INFINITY;
    let mut worst_agree = 0.0f64;
    for (ni, &n_s) in [0.2, 0.5, 1.0].iter().enumerate() {
        let cutoff = 32;
        let radius = (6.0 * (n_s + 1.0f64).sqrt()).max((cutoff as f64).sqrt());
        let grid = QFunctionGrid::new(radius, 160, 128, cutoff);
        let mut r = rng::stream(7000, ni as u64);
        let states: Vec<FockOperator> = (0..100)
            .map(|_| sample_constrained_state(&mut r, n_s, 8, cutoff).unwrap())
            .collect();
        let checks: Vec<_> = states
            .par_iter()
            .map(|rho| hw_thermal_maximizer_check(rho, n_s, &grid).unwrap())
            .collect();
        for ch in checks {
            worst_slack = worst_slack.min(ch.entropy_form);
            let agree = (ch.entropy_form - ch.relative_entropy_form).abs();
            worst_agree = worst_agree.max(agree);
            ok &= ch.entropy_form >= -1e-3 && ch.relative_entropy_form >= -1e-3 && agree < 2e-3;
        }
    }
    c.finish(
        ok,
        format!("300 states: min slack {worst_slack:.2e}, worst form disagreement {worst_agree:.2e}"),
    );
}

#[test]
fn criterion_08_ppm_throughput() {
    let c = Criterion::start(8, "ppm-feedback-throughput", 60.0);
    let mut ok = true;
    let mut detail = String::new();
    for (i, &eta) in [0.3, 0.5, 0.9].iter().enumerate() {
        for (j, &n) in [8usize, 16].iter().enumerate() {
            let cfg = PpmConfig {
                n_modes: n,
                eta,
                num_keys: 4,
                alpha: None,
                trials: 100_000,
                rng_seed: 8000 + (10 * i + j) as u64,
                epsilon: 1.0 / 16.0,
            };
            let rep = ppm::lossy_feedback_simulate(&cfg).unwrap();
            let expect = eta * (n as f64).log2();
            let dev = (rep.throughput_bits_per_block - expect).abs();
            ok &= dev <= 3.0 * rep.throughput_stderr && rep.decode_errors == 0;
            detail = format!(
                "last η={eta} n={n}: {:.4} vs {expect:.4} (3σ = {:.4})",
                rep.throughput_bits_per_block,
                3.0 * rep.throughput_stderr
            );
        }
    }
    c.finish(ok, detail);
}

#[test]
fn criterion_09_coherent_ppm() {
    let c = Criterion::start(9, "coherent-ppm", 600.0);
    let n_modes = 16;
    let alpha = C64::new(0.1f64.sqrt(), 0.0); // N_tot = 0.1
    let mut ok = true;

    // Sector norms and vacuum probability.
    let scheme = ppm::coherent_ppm_scheme(n_modes, alpha, 4, 9000).unwrap();
    let nt = scheme.n_tot();
    for k in 0..4 {
        let (v, s, r) = scheme.sector_norms(k);
        ok &= (v + s + r - 1.0).abs() < 1e-9;
    }
    let povm = ppm::photon_number_adversary(&scheme, 1, 8, 1).unwrap();
    let ens = scheme.truncated_eve_ensemble().unwrap();
    for st in ens.states() {
        let p_vac = povm.outcome_probs(st)[0];
        ok &= (p_vac - (-nt).exp()).abs() <= 2.0 * nt * nt;
    }

    // i_num nonincreasing in |K| at 3σ over 10 seeds.
    let ks = [1usize, 2, 4, 8];
    let per_k: Vec<Vec<f64>> = ks
        .iter()
        .map(|&k| {
            (0..10u64)
                .into_par_iter()
                .map(|s| {
                    let sch =
                        ppm::coherent_ppm_scheme(n_modes, alpha, k, 9100 + 100 * s + k as u64)
                            .unwrap();
                    ppm::i_num_estimate(&sch, 2, 12, 9200 + s).unwrap().bits
                })
                .collect()
        })
        .collect();
    let stats: Vec<(f64, f64)> = per_k.iter().map(|xs| mean_and_se(xs)).collect();
    let mut decreasing = true;
    for w in stats.windows(2) {
        let gap = w[0].0 - w[1].0;
        let se = (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
        decreasing &= gap > 3.0 * se;
    }
    ok &= decreasing;
    let means: Vec<String> = stats.iter().map(|(m, _)| format!("{m:.4}")).collect();
    c.finish(
        ok,
        format!("sector norms 1e-9; vacuum ±2N²; i_num means over |K|: [{}]", means.join(", ")),
    );
}

#[test]
fn criterion_10_degraded_additivity() {
    let c = Criterion::start(10, "degraded-additivity", 600.0);
    let pairs: Vec<(WiretapChannel, WiretapChannel)> = vec![
        (ad_wiretap(0.1), ad_wiretap(0.3)),
        (ad_wiretap(0.2), dephasing_wiretap(0.3)),
        (dephasing_wiretap(0.2), dephasing_wiretap(0.4)),
        (ad_wiretap(0.25), dephasing_wiretap(0.5)),
        (ad_wiretap(0.4), ad_wiretap(0.45)),
    ];
    let slacks: Vec<f64> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (w1, w2))| {
            let mut r = rng::stream(10_000, i as u64);
            let s1: Vec<CVec> = (0..4).map(|_| qcore::random_pure(&mut r, 2)).collect();
            let s2: Vec<CVec> = (0..4).map(|_| qcore::random_pure(&mut r, 2)).collect();
            degraded_product_additivity_check(w1, w2, &s1, &s2, 200, 10_100 + i as u64).unwrap()
        })
        .collect();
    let worst = slacks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    c.finish(
        worst <= 1e-4,
        format!("5 pairs × 200 priors: max slack {worst:.2e}"),
    );
}

fn ad_wiretap(gamma: f64) -> WiretapChannel {
    WiretapChannel::degradable(
        &channels::amplitude_damping(gamma).unwrap(),
        channels::amplitude_damping_degrading(gamma).unwrap(),
    )
    .unwrap()
}

fn dephasing_wiretap(q: f64) -> WiretapChannel {
    WiretapChannel::degradable(
        &channels::dephasing(q).unwrap(),
        channels::dephasing_degrading(q).unwrap(),
    )
    .unwrap()
}

#[test]
fn criterion_11_classical_inequality() {
    let c = Criterion::start(11, "classical-inequality", 60.0);
    let mut r = rng::root(11_000);
    let mut ok = true;
    for _ in 0..1000 {
        let (nm, ny, nk) = (
            r.gen_range(2..6usize),
            r.gen_range(2..6usize),
            r.gen_range(2..6usize),
        );
        let mut joint = vec![vec![vec![0.0f64; nk]; ny]; nm];
        let mut total = 0.0;
        for m in joint.iter_mut() {
            for y in m.iter_mut() {
                for k in y.iter_mut() {
                    *k = -(r.gen_range(1e-12f64..1.0)).ln();
                    total += *k;
                }
            }
        }
        for m in joint.iter_mut() {
            for y in m.iter_mut() {
                for k in y.iter_mut() {
                    *k /= total;
                }
            }
        }
        let (holds, _) = classical_inequality_check(&joint);
        ok &= holds;
    }
    // One-time pad: Y = M ⊕ K reaches equality.
    let d = 8;
    let mut joint = vec![vec![vec![0.0; d]; d]; d];
    for (m, per_m) in joint.iter_mut().enumerate() {
        for k in 0..d {
            per_m[(m + k) % d][k] = 1.0 / (d * d) as f64;
        }
    }
    let (holds, slack) = classical_inequality_check(&joint);
    ok &= holds && slack.abs() < 1e-9;
    c.finish(ok, format!("10³ random joints hold; OTP slack {slack:.2e}"));
}

//! Experiment implementations behind the CLI subcommands.

use qlock_core::accinfo::{
    self, acc_info_of_measurement, adversary_suite, holevo_chi, pretty_good_measurement,
};
use qlock_core::bosonic::{
    self, g_func, pure_loss_private_capacity, small_ns_expansion, strong_lock_bound_cs,
    weak_lock_bound_pure_loss, wehrl_entropy, FockOperator, QFunctionGrid, LOG2_E,
};
use qlock_core::channels::{
    self, amplitude_damping_degrading, dephasing_degrading, eb_zero_capacity_certificate,
    is_entanglement_breaking, rank_one_kraus_form, weak_lock_upper_single_letter, ChoiMatrix,
    EbVerdict, WiretapChannel,
};
use qlock_core::config::{
    AccinfoConfig, AttackModel, BosonicBoundsConfig, ChannelSpec, EbCheckConfig,
    ExperimentConfig, LockSimConfig, PpmSimConfig, WiretapBase, WiretapConfig,
};
use qlock_core::locking::{
    self, classical_inequality_check, cq_state_with_key, decode_mutual_info,
    decode_success_probability, eve_security_eval, fannes_audenaert_acc_bound, ratios_r1_r2,
    AdversaryEntry, LockingProtocolSpec, LockingScheme, SecurityReport,
};
use qlock_core::ppm::{self, PpmConfig};
use qlock_core::qcore::{
    self, complementary_channel, identity, max_abs, random_pure, CVec, DensityOperator,
    Ensemble, KrausChannel, Povm, C64,
};
use qlock_core::report::{write_csv, InvariantOutcome, Measured, RunReport};
use qlock_core::{rng, Error, Result};
use rand::Rng;

/// Extra artifact files (name, content) written next to the report.
pub type ExtraFiles = Vec<(String, String)>;

pub fn dispatch(cfg: &ExperimentConfig) -> Result<(RunReport, ExtraFiles)> {
    match cfg {
        ExperimentConfig::LockSim(c) => lock_sim(c),
        ExperimentConfig::BosonicBounds(c) => bosonic_bounds(c),
        ExperimentConfig::PpmSim(c) => ppm_sim(c),
        ExperimentConfig::EbCheck(c) => eb_check(c),
        ExperimentConfig::Wiretap(c) => wiretap(c),
        ExperimentConfig::Accinfo(c) => accinfo_cmd(c),
    }
}

fn echo<T: serde::Serialize>(cfg: &T) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::Config(e.to_string()))
}

// ---------------------------------------------------------------------------
// lock-sim
// ---------------------------------------------------------------------------

fn lock_sim(cfg: &LockSimConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("lock-sim", cfg.seed, echo(cfg)?);
    if cfg.msg_dim < 2 || cfg.msg_dim > 64 {
        return Err(Error::Config(format!(
            "lock-sim supports msg_dim 2..=64, got {}",
            cfg.msg_dim
        )));
    }
    if cfg.num_keys == 0 || cfg.num_keys > 256 {
        return Err(Error::Config(format!("num_keys {} outside 1..=256", cfg.num_keys)));
    }
    let ch = cfg.channel.build().map_err(|e| Error::Config(e.to_string()))?;
    if ch.in_dim() != cfg.msg_dim {
        return Err(Error::Config(format!(
            "channel input dim {} differs from msg_dim {}",
            ch.in_dim(),
            cfg.msg_dim
        )));
    }
    let scheme = LockingScheme::haar(cfg.msg_dim, cfg.num_keys, cfg.seed)?;
    let proto = match cfg.channel {
        ChannelSpec::Erasure { .. } => LockingProtocolSpec::canonical_erasure(&scheme, cfg.epsilon)?,
        _ if ch.out_dim() == cfg.msg_dim => {
            LockingProtocolSpec::canonical_noiseless(&scheme, cfg.epsilon)?
        }
        _ => {
            return Err(Error::Config(
                "no canonical decoder for this channel shape".into(),
            ))
        }
    };

    let success = decode_success_probability(&proto, &ch)?;
    let acc_with = decode_mutual_info(&proto, &ch)?;

    let eve_channel = match cfg.attack {
        AttackModel::Strong => KrausChannel::identity_channel(cfg.msg_dim)?,
        AttackModel::Weak => complementary_channel(&ch)?,
    };
    // Eve's ensemble: key-averaged encoder states through her channel.
    let mut eve_states = Vec::with_capacity(cfg.msg_dim);
    for m in 0..cfg.msg_dim {
        let mut acc = qcore::CMat::zeros(eve_channel.out_dim(), eve_channel.out_dim());
        for k in 0..cfg.num_keys {
            acc += eve_channel
                .apply(proto.encoder_state(m, k))?
                .matrix()
                .scale(1.0 / cfg.num_keys as f64);
        }
        eve_states.push(DensityOperator::new(acc)?);
    }
    let eve_ens = Ensemble::uniform(eve_states)?;

    let mut extras: Vec<(String, Povm)> = Vec::new();
    if eve_channel.out_dim() == cfg.msg_dim {
        for k in 0..cfg.num_keys.min(4) {
            extras.push((format!("key-basis-{k}"), scheme.key_basis_povm(k)));
        }
    }
    let suite = adversary_suite(
        &eve_ens,
        &extras,
        cfg.optimizer_restarts,
        cfg.optimizer_iters,
        cfg.seed,
    )?;

    // Variational-distance criterion for each suite member.
    let d = eve_ens.dim();
    let mut named_povms: Vec<(String, Povm)> = vec![
        ("standard-basis".into(), Povm::standard_basis(d)),
        ("fourier-basis".into(), Povm::fourier_basis(d)),
        ("pretty-good".into(), pretty_good_measurement(&eve_ens)),
    ];
    named_povms.extend(extras.iter().cloned());
    if let Some(opt) = &suite.optimized {
        named_povms.push(("optimized-rank1".into(), opt.achieving_povm.clone()));
    }
    let mut suite_entries = Vec::new();
    let mut max_var = 0.0f64;
    let mut best_fragment: Option<locking::SecurityFragment> = None;
    let mut best_mi = f64::NEG_INFINITY;
    let mut skipped_total = 0usize;
    for (name, povm) in &named_povms {
        let frag = eve_security_eval(&proto, &eve_channel, povm)?;
        max_var = max_var.max(frag.max_var_dist);
        skipped_total += frag.skipped.len();
        suite_entries.push(AdversaryEntry {
            name: name.clone(),
            mutual_info_bits: frag.mutual_info_bits,
            max_var_dist: frag.max_var_dist,
        });
        if frag.mutual_info_bits > best_mi {
            best_mi = frag.mutual_info_bits;
            best_fragment = Some(frag);
        }
    }

    let key_bits = scheme.key_bits();
    let ratios = ratios_r1_r2(suite.best_bits, acc_with, key_bits);
    let fa_bound = fannes_audenaert_acc_bound(max_var.min(2.0), 1, proto.rate())?;
    let best_fragment = best_fragment.expect("suite is nonempty");

    let security = SecurityReport {
        success_prob: success,
        per_outcome_var_dist: best_fragment.per_outcome.iter().map(|o| o.2).collect(),
        max_var_dist: max_var,
        fa_acc_bound_bits: fa_bound,
        r1: ratios.r1,
        r2: ratios.r2,
        acc_with_key_bits: acc_with,
        acc_without_key_bits: suite.best_bits,
        key_bits,
        adversary_suite: suite_entries,
        skipped_outcomes: skipped_total,
    };

    report.push_result("success_prob", Measured::new(success, 1e-10, "exact-trace"));
    report.push_result(
        "acc_with_key_bits",
        Measured::new(acc_with, 1e-9, "decode-mutual-info"),
    );
    report.push_result(
        "acc_without_key_bits",
        Measured::new(suite.best_bits, 1e-6, format!("suite-best:{}", suite.best_name)),
    );
    report.push_result("max_var_dist", Measured::new(max_var, 1e-9, "suite-max"));
    report.push_result(
        "fa_acc_bound_bits",
        Measured::new(fa_bound, 1e-12, "fannes-audenaert"),
    );
    if let Some(r1) = ratios.r1 {
        report.push_result("r1", Measured::new(r1, 1e-6, "ratio"));
    }
    if let Some(r2) = ratios.r2 {
        report.push_result("r2", Measured::new(r2, 1e-6, "ratio"));
    }
    report.push_detail("security", &security)?;

    // Structural invariants of the locked state.
    let cq = cq_state_with_key(&scheme)?;
    let q_defect = max_abs(
        &(cq.marginal_q().matrix() - &identity(cfg.msg_dim).scale(1.0 / cfg.msg_dim as f64)),
    );
    report.push_invariant(
        "q-marginal-maximally-mixed",
        q_defect < 1e-10,
        format!("defect {q_defect:.2e}"),
    );
    report.push_invariant(
        "suite-best-below-log-dim",
        suite.best_bits <= (cfg.msg_dim as f64).log2() + 1e-9,
        format!("{} vs {}", suite.best_bits, (cfg.msg_dim as f64).log2()),
    );
    report.push_invariant(
        "success-prob-in-range",
        (0.0..=1.0).contains(&success),
        format!("{success}"),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// bosonic-bounds
// ---------------------------------------------------------------------------

fn bosonic_bounds(cfg: &BosonicBoundsConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("bosonic-bounds", cfg.seed, echo(cfg)?);
    if !(cfg.n_s_min > 0.0 && cfg.n_s_max > cfg.n_s_min && cfg.n_s_steps >= 2) {
        return Err(Error::Config(
            "need 0 < n_s_min < n_s_max and n_s_steps ≥ 2".into(),
        ));
    }
    for eta in &cfg.etas {
        if !(0.0..=1.0).contains(eta) {
            return Err(Error::Config(format!("η = {eta} outside [0,1]")));
        }
    }
    let ratio = cfg.n_s_max / cfg.n_s_min;
    let grid: Vec<f64> = (0..cfg.n_s_steps)
        .map(|i| cfg.n_s_min * ratio.powf(i as f64 / (cfg.n_s_steps - 1) as f64))
        .collect();

    let mut strong_rows = Vec::with_capacity(grid.len());
    let mut g_monotone = true;
    let mut bound_ok = true;
    let mut prev_g = -1.0;
    for &n_s in &grid {
        let g = g_func(n_s)?;
        let exp = small_ns_expansion(n_s)?;
        let bound = strong_lock_bound_cs(n_s)?;
        g_monotone &= g > prev_g;
        bound_ok &= bound <= LOG2_E + 1e-12;
        prev_g = g;
        strong_rows.push(vec![n_s, g, exp.bound_approx, bound]);
    }

    let mut weak_rows = Vec::new();
    let mut max_excess = 0.0f64;
    let mut eta_one_exact = true;
    for &eta in &cfg.etas {
        for &n_s in &grid {
            let p = pure_loss_private_capacity(eta, n_s)?;
            let w = weak_lock_bound_pure_loss(eta, n_s)?;
            let excess = w - p;
            max_excess = max_excess.max(excess);
            if eta == 1.0 {
                eta_one_exact &= excess == 0.0;
            }
            weak_rows.push(vec![eta, n_s, p, w, excess]);
        }
    }

    for &n in &cfg.wehrl_thermal {
        let th = FockOperator::thermal(n)?;
        let grid_q = QFunctionGrid::for_state(&th);
        let w = wehrl_entropy(&th, &grid_q)?;
        let expect = (n + 1.0).log2() + LOG2_E;
        report.push_result(
            format!("wehrl_thermal_{n}"),
            Measured::new(w, 1e-4, "polar-quadrature"),
        );
        report.push_invariant(
            format!("wehrl-closed-form-{n}"),
            (w - expect).abs() < 1e-4,
            format!("{w} vs {expect}"),
        );
    }

    report.push_result("g_at_1", Measured::new(g_func(1.0)?, 1e-12, "closed-form"));
    report.push_result(
        "max_strong_bound",
        Measured::new(
            strong_rows.iter().map(|r| r[3]).fold(0.0, f64::max),
            1e-12,
            "closed-form",
        ),
    );
    report.push_result("max_excess", Measured::new(max_excess, 1e-12, "closed-form"));
    report.push_invariant("g-monotone", g_monotone, "strictly increasing over grid".into());
    report.push_invariant(
        "strong-bound-at-most-log2e",
        bound_ok,
        format!("max {}", strong_rows.iter().map(|r| r[3]).fold(0.0, f64::max)),
    );
    report.push_invariant(
        "excess-at-most-log2e",
        max_excess <= 1.4427,
        format!("max excess {max_excess}"),
    );
    report.push_invariant(
        "eta-one-weak-equals-private",
        eta_one_exact || !cfg.etas.contains(&1.0),
        "exact equality at η = 1".into(),
    );

    let strong_csv = write_csv(&["n_s", "g_exact", "bound_expansion", "strong_bound"], &strong_rows);
    let weak_csv = write_csv(
        &["eta", "n_s", "private_capacity", "weak_bound", "excess"],
        &weak_rows,
    );
    report.push_detail("strong_rows", &strong_rows.len())?;
    report.push_detail("weak_rows", &weak_rows.len())?;
    Ok((
        report,
        vec![
            ("bosonic_strong.csv".into(), strong_csv),
            ("bosonic_weak.csv".into(), weak_csv),
        ],
    ))
}

// ---------------------------------------------------------------------------
// ppm-sim
// ---------------------------------------------------------------------------

fn ppm_sim(cfg: &PpmSimConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("ppm-sim", cfg.seed, echo(cfg)?);
    let pcfg = PpmConfig {
        n_modes: cfg.n_modes,
        eta: cfg.eta,
        num_keys: cfg.num_keys,
        alpha: cfg.alpha,
        trials: cfg.trials,
        rng_seed: cfg.seed,
        epsilon: cfg.epsilon,
    };
    pcfg.validate().map_err(|e| Error::Config(e.to_string()))?;

    match cfg.alpha {
        None => {
            let sim = ppm::lossy_feedback_simulate(&pcfg)?;
            let expect = cfg.eta * (cfg.n_modes as f64).log2();
            report.push_result(
                "throughput_bits_per_block",
                Measured::new(
                    sim.throughput_bits_per_block,
                    3.0 * sim.throughput_stderr,
                    "monte-carlo",
                ),
            );
            report.push_result(
                "resend_rate",
                Measured::new(sim.resend_rate, 3.0 * sim.throughput_stderr, "monte-carlo"),
            );
            report.push_result(
                "r2_estimate",
                Measured::new(sim.r2_estimate, 1e-12, "closed-form"),
            );
            report.push_invariant(
                "throughput-within-3-sigma",
                (sim.throughput_bits_per_block - expect).abs()
                    <= 3.0 * sim.throughput_stderr.max(1e-12),
                format!("{} vs η·log2 n = {expect}", sim.throughput_bits_per_block),
            );
            report.push_invariant(
                "no-decode-errors-on-click",
                sim.decode_errors == 0,
                format!("{} errors", sim.decode_errors),
            );
            report.push_detail("simulation", &sim)?;
        }
        Some((re, im)) => {
            let alpha = C64::new(re, im);
            let scheme = ppm::coherent_ppm_scheme(cfg.n_modes, alpha, cfg.num_keys, cfg.seed)?;
            let mut norm_defect = 0.0f64;
            for k in 0..cfg.num_keys {
                let (v, s, r) = scheme.sector_norms(k);
                norm_defect = norm_defect.max((v + s + r - 1.0).abs());
            }
            let est = ppm::i_num_estimate(
                &scheme,
                cfg.optimizer_restarts,
                cfg.optimizer_iters,
                cfg.seed,
            )?;
            let povm = ppm::photon_number_adversary(
                &scheme,
                cfg.optimizer_restarts,
                cfg.optimizer_iters,
                cfg.seed,
            )?;
            let ens = scheme.truncated_eve_ensemble()?;
            let via_num = acc_info_of_measurement(&ens, &povm)?;
            let via_std = acc_info_of_measurement(&ens, &Povm::standard_basis(cfg.n_modes + 2))?;
            let region = ppm::key_efficiency_region(
                scheme.n_tot(),
                cfg.epsilon,
                cfg.n_modes as f64,
            )?;
            let vac_prob = ens
                .states()
                .iter()
                .map(|s| povm.outcome_probs(s)[0])
                .fold(f64::NEG_INFINITY, f64::max);

            report.push_result(
                "i_num_bits",
                Measured::new(est.bits, 1e-6, "seesaw-single-photon-sector"),
            );
            report.push_result(
                "i_num_remainder_bound_bits",
                Measured::new(est.remainder_bound_bits, 1e-12, "worst-case-lump"),
            );
            report.push_result(
                "photon_number_adversary_bits",
                Measured::new(via_num, 1e-9, "measured-mi"),
            );
            report.push_result(
                "vacuum_outcome_prob",
                Measured::new(vac_prob, 2.0 * scheme.n_tot().powi(2), "truncated-poisson"),
            );
            report.push_invariant(
                "sector-norms-sum-to-one",
                norm_defect < 1e-9,
                format!("defect {norm_defect:.2e}"),
            );
            report.push_invariant(
                "photon-number-beats-standard-basis",
                via_num + 1e-9 >= via_std,
                format!("{via_num} vs {via_std}"),
            );
            report.push_invariant(
                "vacuum-prob-matches-poisson",
                (vac_prob - (-scheme.n_tot()).exp()).abs() <= 2.0 * scheme.n_tot().powi(2),
                format!("{vac_prob} vs {}", (-scheme.n_tot()).exp()),
            );
            report.push_detail("key_efficiency_region", &region)?;
        }
    }
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// eb-check
// ---------------------------------------------------------------------------

fn eb_check(cfg: &EbCheckConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("eb-check", cfg.seed, echo(cfg)?);
    let ch = cfg.channel.build().map_err(|e| Error::Config(e.to_string()))?;
    let verdict = is_entanglement_breaking(&ch);
    let (verdict_name, witness) = match &verdict {
        EbVerdict::EntanglementBreaking => ("EntanglementBreaking", 0.0),
        EbVerdict::NotEb { witness_eigenvalue } => ("NotEB", *witness_eigenvalue),
        EbVerdict::Undecided => ("Undecided", 0.0),
    };
    report.push_detail("verdict", &verdict_name)?;
    report.push_result(
        "ppt_witness_eigenvalue",
        Measured::new(witness, 1e-9, "choi-partial-transpose"),
    );

    if cfg.certificate_ensembles > 0 {
        let form_ok = rank_one_kraus_form(&ch).is_ok();
        if !form_ok {
            return Err(Error::Validation(
                "certificates need a rank-one Kraus form for this channel".into(),
            ));
        }
        let mut r = rng::stream(cfg.seed, 1);
        let states_per = cfg.ensemble_states.max(2);
        let mut max_slack = f64::NEG_INFINITY;
        for _ in 0..cfg.certificate_ensembles {
            let states: Vec<DensityOperator> = (0..states_per)
                .map(|_| qcore::random_density(&mut r, ch.in_dim()))
                .collect();
            let ens = Ensemble::uniform(states)?;
            max_slack = max_slack.max(eb_zero_capacity_certificate(&ch, &ens)?);
        }
        report.push_result(
            "max_certificate_slack",
            Measured::new(max_slack, 1e-6, "env-simulation"),
        );
        report.push_invariant(
            "certificate-slack-nonpositive",
            max_slack <= 1e-6,
            format!("max slack {max_slack:.2e}"),
        );
    }

    if ch.in_dim() <= 16 && ch.out_dim() <= 16 && ch.kraus_ops().len() <= 64 {
        let interval = weak_lock_upper_single_letter(&ch, 6, cfg.seed)?;
        report.push_result(
            "weak_lock_upper_lo",
            Measured::new(interval.lower_bits, 1e-6, "ensemble-search-chi"),
        );
        report.push_result(
            "weak_lock_upper_hi",
            Measured::new(interval.upper_bits, 1e-4, "ensemble-search-acc"),
        );
        report.push_invariant(
            "interval-ordered",
            interval.lower_bits <= interval.upper_bits + 1e-9,
            format!("[{}, {}]", interval.lower_bits, interval.upper_bits),
        );
        if matches!(verdict, EbVerdict::EntanglementBreaking) {
            report.push_invariant(
                "eb-upper-endpoint-nonpositive",
                interval.upper_bits <= 1e-4,
                format!("upper {}", interval.upper_bits),
            );
        }
    }
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// wiretap
// ---------------------------------------------------------------------------

fn build_wiretap(base: &WiretapBase) -> Result<WiretapChannel> {
    match base {
        WiretapBase::AmplitudeDamping { gamma } => {
            let ch = channels::amplitude_damping(*gamma)?;
            let deg = amplitude_damping_degrading(*gamma)
                .map_err(|e| Error::Config(e.to_string()))?;
            WiretapChannel::degradable(&ch, deg)
        }
        WiretapBase::Dephasing { q } => {
            let ch = channels::dephasing(*q)?;
            WiretapChannel::degradable(&ch, dephasing_degrading(*q)?)
        }
        WiretapBase::ConstantEve { channel } => {
            WiretapChannel::constant_eve(&channel.build()?)
        }
    }
}

fn wiretap(cfg: &WiretapConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("wiretap", cfg.seed, echo(cfg)?);
    if cfg.signal_states < 1 || cfg.signal_states > 16 {
        return Err(Error::Config("signal_states must be 1..=16".into()));
    }
    if cfg.priors == 0 {
        return Err(Error::Config("priors must be positive".into()));
    }
    let wt = build_wiretap(&cfg.base)?;
    let mut r = rng::stream(cfg.seed, 0);
    let signals: Vec<CVec> = (0..cfg.signal_states)
        .map(|_| random_pure(&mut r, wt.in_dim()))
        .collect();

    let mut max_private = f64::NEG_INFINITY;
    let mut chi_ok = true;
    for _ in 0..cfg.priors {
        let mut p: Vec<f64> = (0..signals.len())
            .map(|_| -(r.gen_range(1e-12f64..1.0)).ln())
            .collect();
        let s: f64 = p.iter().sum();
        for x in &mut p {
            *x /= s;
        }
        let states: Vec<DensityOperator> = signals
            .iter()
            .map(DensityOperator::from_pure)
            .collect::<Result<Vec<_>>>()?;
        let ens = Ensemble::new(p, states)?;
        let pi = channels::private_information(&wt, &ens)?;
        let chi_b = holevo_chi(&ens.through(wt.channel_to_b())?);
        chi_ok &= pi <= chi_b + 1e-9;
        max_private = max_private.max(pi);
    }
    let slack = channels::degraded_product_additivity_check(
        &wt,
        &wt,
        &signals,
        &signals,
        cfg.priors,
        cfg.seed ^ 0x5eed,
    )?;

    report.push_result(
        "max_private_info_bits",
        Measured::new(max_private, 1e-9, "holevo-difference"),
    );
    report.push_result(
        "additivity_slack",
        Measured::new(slack, 1e-4, "product-prior-search"),
    );
    report.push_invariant(
        "constructively-degraded",
        wt.is_constructively_degraded(),
        "degrading map verified at construction".into(),
    );
    report.push_invariant(
        "private-at-most-chi-b",
        chi_ok,
        "I(X;B)−I(X;E) ≤ χ(X;B) for all priors".into(),
    );
    report.push_invariant(
        "additivity-slack-nonpositive",
        slack <= 1e-4,
        format!("slack {slack:.2e}"),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// accinfo
// ---------------------------------------------------------------------------

fn accinfo_cmd(cfg: &AccinfoConfig) -> Result<(RunReport, ExtraFiles)> {
    let mut report = RunReport::new("accinfo", cfg.seed, echo(cfg)?);
    let ens = accinfo::two_state_ensemble(cfg.overlap)
        .map_err(|e| Error::Config(e.to_string()))?;
    let angles = if cfg.oracle_angles == 0 { 10_000 } else { cfg.oracle_angles };
    let oracle = accinfo::two_state_grid_oracle(&ens, angles)?;
    let res = accinfo::acc_info_optimize(
        &ens,
        cfg.optimizer_restarts,
        cfg.optimizer_iters,
        cfg.seed,
    )?;
    report.push_result(
        "optimizer_lower_bits",
        Measured::new(res.lower_bits, 1e-4, &*res.lower_method),
    );
    report.push_result(
        "oracle_bits",
        Measured::new(oracle, 1e-6, format!("projective-grid-{angles}")),
    );
    report.push_result(
        "holevo_upper_bits",
        Measured::new(res.upper_bits, 1e-9, &*res.upper_method),
    );
    report.push_invariant(
        "optimizer-matches-oracle",
        (res.lower_bits - oracle).abs() < 1e-4,
        format!("{} vs {oracle}", res.lower_bits),
    );
    report.push_invariant(
        "lower-at-most-upper",
        res.lower_bits <= res.upper_bits + 1e-6,
        format!("{} ≤ {}", res.lower_bits, res.upper_bits),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// --check invariant suites
// ---------------------------------------------------------------------------

fn outcome(name: &str, passed: bool, detail: String) -> InvariantOutcome {
    InvariantOutcome { name: name.into(), passed, detail }
}

pub fn check_suite(kind: &str) -> Result<Vec<InvariantOutcome>> {
    match kind {
        "lock-sim" => check_lock_sim(),
        "bosonic-bounds" => check_bosonic(),
        "ppm-sim" => check_ppm(),
        "eb-check" => check_eb(),
        "wiretap" => check_wiretap(),
        "accinfo" => check_accinfo(),
        _ => Err(Error::Config(format!("no check suite for {kind}"))),
    }
}

fn check_lock_sim() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let mut r = rng::root(0xC0FFEE);

    // Channel action preserves trace and positivity.
    let zoo = [
        channels::depolarizing(3, 0.3)?,
        channels::erasure(2, 0.4)?,
        channels::amplitude_damping(0.25)?,
    ];
    let mut worst_tr = 0.0f64;
    let mut worst_eig = 0.0f64;
    for ch in &zoo {
        for _ in 0..30 {
            let rho = qcore::random_density(&mut r, ch.in_dim());
            let img = ch.apply_mat(rho.matrix());
            worst_tr = worst_tr.max((img.trace().re - 1.0).abs());
            worst_eig = worst_eig.min(qcore::hermitian_eigenvalues(&img)[0]);
        }
    }
    out.push(outcome(
        "channel-trace-positivity",
        worst_tr < 1e-9 && worst_eig > -1e-9,
        format!("trace defect {worst_tr:.2e}, min eig {worst_eig:.2e}"),
    ));

    // Trace-distance triangle inequality and unitary invariance.
    let mut tri_ok = true;
    let mut unit_ok = true;
    for _ in 0..10 {
        let a = qcore::random_density(&mut r, 4);
        let b = qcore::random_density(&mut r, 4);
        let c = qcore::random_density(&mut r, 4);
        let dab = qcore::trace_distance(&a, &b)?;
        let dbc = qcore::trace_distance(&b, &c)?;
        let dac = qcore::trace_distance(&a, &c)?;
        tri_ok &= dac <= dab + dbc + 1e-10;
        let u = qcore::haar_unitary(&mut r, 4);
        let ua = DensityOperator::new(&u * a.matrix() * u.adjoint())?;
        let ub = DensityOperator::new(&u * b.matrix() * u.adjoint())?;
        unit_ok &= (qcore::trace_distance(&ua, &ub)? - dab).abs() < 1e-9;
    }
    out.push(outcome("trace-distance-triangle", tri_ok, "10 random triples".into()));
    out.push(outcome("trace-distance-unitary-invariance", unit_ok, "10 random pairs".into()));

    // Double complement preserves the Choi spectrum (minimal Kraus).
    let mut spec_ok = true;
    for ch in [channels::depolarizing(2, 0.3)?, channels::amplitude_damping(0.25)?] {
        let minimal = channels::kraus_from_choi(&ChoiMatrix::of_channel(&ch))?;
        let cc = complementary_channel(&complementary_channel(&minimal)?)?;
        let mut s1 = ChoiMatrix::of_channel(&minimal).spectrum();
        let mut s2 = ChoiMatrix::of_channel(&cc).spectrum();
        while s1.len() < s2.len() {
            s1.insert(0, 0.0);
        }
        while s2.len() < s1.len() {
            s2.insert(0, 0.0);
        }
        for (a, b) in s1.iter().zip(&s2) {
            spec_ok &= (a - b).abs() < 1e-8;
        }
    }
    out.push(outcome(
        "double-complement-choi-spectrum",
        spec_ok,
        "depolarizing and amplitude damping".into(),
    ));

    // Haar moment E|U_11|² = 1/d.
    let d = 8;
    let n = 2000;
    let mean: f64 = (0..n)
        .map(|_| qcore::haar_unitary(&mut r, d)[(0, 0)].norm_sqr())
        .sum::<f64>()
        / n as f64;
    let se = ((d as f64 - 1.0) / ((d * d) as f64 * (d as f64 + 1.0)) / n as f64).sqrt();
    out.push(outcome(
        "haar-diagonal-moment",
        (mean - 1.0 / d as f64).abs() < 3.0 * se,
        format!("mean {mean:.5} vs 1/{d} (3σ = {:.1e})", 3.0 * se),
    ));

    // Classical key-removal inequality on random joints.
    let mut cls_ok = true;
    for _ in 0..100 {
        let (nm, ny, nk) = (
            r.gen_range(2..5usize),
            r.gen_range(2..5usize),
            r.gen_range(2..5usize),
        );
        let mut joint = vec![vec![vec![0.0; nk]; ny]; nm];
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
        let (ok, _) = classical_inequality_check(&joint);
        cls_ok &= ok;
    }
    out.push(outcome("classical-key-removal-inequality", cls_ok, "100 random joints".into()));

    // Data processing under key discard.
    let mut dp_ok = true;
    for seed in 0..3u64 {
        let scheme = LockingScheme::haar(4, 2, 900 + seed)?;
        let with = cq_state_with_key(&scheme)?.mutual_info_m_kq();
        let without = locking::cq_state_without_key(&scheme)?.mutual_info_m_q();
        dp_ok &= without <= with + 1e-9;
    }
    out.push(outcome("key-discard-data-processing", dp_ok, "3 Haar schemes".into()));
    Ok(out)
}

fn check_bosonic() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let mut mono = true;
    let mut conc = true;
    let mut prev = -1.0;
    let mut prev2 = None::<(f64, f64)>;
    for i in 1..400 {
        let x = i as f64 * 0.025;
        let g = g_func(x)?;
        mono &= g > prev;
        if let Some((a, b)) = prev2 {
            conc &= g - 2.0 * b + a < 1e-12;
        }
        prev2 = Some((prev, g));
        prev = g;
    }
    out.push(outcome("g-monotone", mono, "grid step 0.025".into()));
    out.push(outcome("g-concave", conc, "second differences".into()));

    let mut bound_ok = true;
    for i in 0..10_000 {
        let n = 1e-3 * (1.002f64).powi(i);
        bound_ok &= strong_lock_bound_cs(n)? <= LOG2_E + 1e-12;
    }
    out.push(outcome("strong-bound-at-most-log2e", bound_ok, "10^4 samples".into()));

    let vac = FockOperator::coherent(C64::new(0.0, 0.0), 40)?;
    let grid = QFunctionGrid::for_state(&vac);
    let w = wehrl_entropy(&vac, &grid)?;
    out.push(outcome(
        "wehrl-vacuum",
        (w - LOG2_E).abs() < 1e-4,
        format!("{w} vs {LOG2_E}"),
    ));

    let th = FockOperator::thermal_at_cutoff(0.5, 32)?;
    let grid = QFunctionGrid::for_state(&th);
    let check = bosonic::hw_thermal_maximizer_check(&th, 0.5, &grid)?;
    out.push(outcome(
        "thermal-self-slack-zero",
        check.entropy_form.abs() < 1e-6,
        format!("slack {:.2e}", check.entropy_form),
    ));
    Ok(out)
}

fn check_ppm() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let cfg = PpmConfig {
        n_modes: 8,
        eta: 1.0,
        num_keys: 2,
        alpha: None,
        trials: 2000,
        rng_seed: 5,
        epsilon: 1.0 / 16.0,
    };
    let sim = ppm::lossy_feedback_simulate(&cfg)?;
    out.push(outcome(
        "lossless-throughput-exact",
        (sim.throughput_bits_per_block - 3.0).abs() < 1e-12 && sim.decode_errors == 0,
        format!("{} bits/block", sim.throughput_bits_per_block),
    ));

    let scheme = ppm::coherent_ppm_scheme(8, C64::new(0.3, 0.0), 2, 6)?;
    let mut defect = 0.0f64;
    for k in 0..2 {
        let (v, s, r2) = scheme.sector_norms(k);
        defect = defect.max((v + s + r2 - 1.0).abs());
    }
    out.push(outcome(
        "coherent-sector-norms",
        defect < 1e-9,
        format!("defect {defect:.2e}"),
    ));

    let mut prev_inside = false;
    let mut mono = true;
    for &n in &[4.0f64, 64.0, 4096.0, (2.0f64).powi(30)] {
        let r = ppm::key_efficiency_region(0.09, 0.25, n)?;
        if prev_inside && !r.inside {
            mono = false;
        }
        prev_inside = r.inside;
    }
    out.push(outcome("region-monotone-in-n", mono, "n from 4 to 2^30".into()));
    Ok(out)
}

fn check_eb() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let ch = channels::depolarizing(2, 0.8)?;
    let v1 = is_entanglement_breaking(&ch);
    let v2 = is_entanglement_breaking(&channels::kraus_from_choi(&ChoiMatrix::of_channel(&ch))?);
    out.push(outcome(
        "verdict-stable-under-kraus-change",
        v1 == v2 && v1 == EbVerdict::EntanglementBreaking,
        format!("{v1:?} vs {v2:?}"),
    ));

    let id = KrausChannel::identity_channel(2)?;
    out.push(outcome(
        "identity-is-not-eb",
        matches!(is_entanglement_breaking(&id), EbVerdict::NotEb { .. }),
        "maximally entangled Choi".into(),
    ));

    let mut r = rng::root(77);
    let mp = channels::random_measure_prepare(&mut r, 2).to_channel()?;
    let mut max_slack = f64::NEG_INFINITY;
    for _ in 0..3 {
        let states: Vec<DensityOperator> =
            (0..3).map(|_| qcore::random_density(&mut r, 2)).collect();
        max_slack = max_slack.max(eb_zero_capacity_certificate(&mp, &Ensemble::uniform(states)?)?);
    }
    out.push(outcome(
        "measure-prepare-certificate",
        max_slack <= 1e-9,
        format!("max slack {max_slack:.2e}"),
    ));
    Ok(out)
}

fn check_wiretap() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let ad_ok = WiretapChannel::degradable(
        &channels::amplitude_damping(0.2)?,
        amplitude_damping_degrading(0.2)?,
    )
    .is_ok();
    let deph_ok =
        WiretapChannel::degradable(&channels::dephasing(0.3)?, dephasing_degrading(0.3)?).is_ok();
    out.push(outcome(
        "zoo-degrading-maps-verify",
        ad_ok && deph_ok,
        "amplitude damping and dephasing".into(),
    ));

    let mut r = rng::root(13);
    let wt = WiretapChannel::constant_eve(&channels::amplitude_damping(0.2)?)?;
    let states: Vec<DensityOperator> = (0..3).map(|_| qcore::random_density(&mut r, 2)).collect();
    let ens = Ensemble::uniform(states)?;
    let p = channels::private_information(&wt, &ens)?;
    let chi = holevo_chi(&ens.through(wt.channel_to_b())?);
    out.push(outcome(
        "constant-eve-private-equals-chi",
        (p - chi).abs() < 1e-10,
        format!("{p} vs {chi}"),
    ));

    let meas: Vec<(f64, CVec)> = (0..2).map(|i| (1.0, qcore::basis_vec(2, i))).collect();
    let sym = WiretapChannel::measure_broadcast(&meas)?;
    let p = channels::private_information(&sym, &ens)?;
    out.push(outcome(
        "symmetric-broadcast-private-zero",
        p.abs() < 1e-10,
        format!("{p}"),
    ));
    Ok(out)
}

fn check_accinfo() -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let mut match_ok = true;
    let mut detail = String::new();
    for (i, overlap) in [0.2, std::f64::consts::FRAC_1_SQRT_2].iter().enumerate() {
        let ens = accinfo::two_state_ensemble(*overlap)?;
        let oracle = accinfo::two_state_grid_oracle(&ens, 10_000)?;
        let res = accinfo::acc_info_optimize(&ens, 3, 30, 50 + i as u64)?;
        match_ok &= (res.lower_bits - oracle).abs() < 1e-4;
        detail.push_str(&format!("c={overlap}: Δ={:.1e}; ", (res.lower_bits - oracle).abs()));
    }
    out.push(outcome("optimizer-matches-grid-oracle", match_ok, detail));

    let ens = accinfo::two_state_ensemble(0.6)?;
    let a = accinfo::acc_info_optimize(&ens, 2, 10, 7)?;
    let b = accinfo::acc_info_optimize(&ens, 2, 10, 7)?;
    out.push(outcome(
        "optimizer-deterministic",
        a.lower_bits == b.lower_bits,
        format!("{} vs {}", a.lower_bits, b.lower_bits),
    ));

    let mut r = rng::root(3);
    let mut mono_ok = true;
    for _ in 0..5 {
        let states: Vec<DensityOperator> =
            (0..4).map(|_| qcore::random_density(&mut r, 3)).collect();
        let ens = Ensemble::uniform(states)?;
        let u = qcore::haar_unitary(&mut r, 3);
        let povm = Povm::from_orthonormal_columns(&u);
        let fine = acc_info_of_measurement(&ens, &povm)?;
        let coarse = acc_info_of_measurement(&ens, &povm.coarse_grain(&[0, 0, 1])?)?;
        mono_ok &= coarse <= fine + 1e-9;
    }
    out.push(outcome(
        "coarse-graining-monotone",
        mono_ok,
        "5 random mergers".into(),
    ));
    Ok(out)
}

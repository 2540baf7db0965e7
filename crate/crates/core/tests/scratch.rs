use leafvib_core::harness::{
    mae_with_miss_penalty, recovery_chirp, run_ablation, run_noisy_grid, run_pipeline,
    single_leaf_scene, standard_chirp, standard_noise, two_leaf_noise, two_leaf_scene, BandLabel,
    PipelineConfig, PipelineVariant, TrialOutcome, STANDARD_BAND_HZ, STANDARD_RANGE_LIMITS,
};
use leafvib_core::simulator::{synthesize_cube, NoiseSpec};

#[test]
#[ignore]
fn probe_noiseless_recovery() {
    let cfg = recovery_chirp();
    let t0 = std::time::Instant::now();
    let mut worst: f64 = 0.0;
    for (i, &freq) in [1.2, 2.03, 2.78, 3.5, 4.25].iter().enumerate() {
        for seed in 0..3u64 {
            let seed = seed + 10 * i as u64;
            let scene = single_leaf_scene(&cfg, freq, 2.5e-3, 1.0, 6.0, seed);
            let cube = synthesize_cube(&scene, &cfg, &NoiseSpec::none(), seed).unwrap();
            let pc = PipelineConfig::new(
                PipelineVariant::Full,
                STANDARD_BAND_HZ,
                STANDARD_RANGE_LIMITS,
            )
            .with_seed(seed);
            let est = run_pipeline(&cube, &pc).unwrap();
            assert_eq!(est.len(), 1, "f={freq} seed={seed}: {est:?}");
            let err = (est[0].frequency_hz - freq).abs();
            worst = worst.max(err);
            eprintln!("f={freq} seed={seed}: est={:.5} err={err:.6}", est[0].frequency_hz);
        }
    }
    eprintln!("worst error {worst:.6} Hz; elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_noisy_grid() {
    let t0 = std::time::Instant::now();
    let seeds: Vec<u64> = (0..6).collect();
    let report = run_noisy_grid(&seeds, &standard_noise(), PipelineVariant::Full).unwrap();
    for row in &report.rows {
        eprintln!(
            "band {}: mae={:.5} stderr={:.5} n={} misses={}",
            row.band.name(),
            row.mae_hz,
            row.stderr_hz,
            row.n_trials,
            row.misses
        );
    }
    eprintln!("elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_ablation_single() {
    let t0 = std::time::Instant::now();
    let seeds: Vec<u64> = (0..6).collect();
    let rows = run_ablation(&seeds, &standard_noise(), false).unwrap();
    for r in &rows {
        eprintln!(
            "{} {}: matched={:.5} penalized={:.5} misses={}",
            r.scene,
            r.variant.name(),
            r.matched_mae_hz,
            r.penalized_mae_hz,
            r.misses
        );
    }
    eprintln!("elapsed {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_two_leaf() {
    let t0 = std::time::Instant::now();
    let cfg = standard_chirp();
    let noise = two_leaf_noise();
    let mut full_hits = 0;
    let mut pd_outcomes = Vec::new();
    let n_seeds = 8u64;
    for seed in 0..n_seeds {
        let trial = two_leaf_scene(&cfg, 6.0, seed);
        let cube = synthesize_cube(&trial.scene, &cfg, &noise, seed).unwrap();
        let full = run_pipeline(
            &cube,
            &PipelineConfig::new(
                PipelineVariant::Full,
                STANDARD_BAND_HZ,
                STANDARD_RANGE_LIMITS,
            )
            .with_seed(seed),
        )
        .unwrap();
        let freqs: Vec<f64> = full.iter().map(|e| e.frequency_hz).collect();
        let hit1 = freqs.iter().any(|f| (f - 2.78).abs() < 0.05);
        let hit2 = freqs.iter().any(|f| (f - 4.25).abs() < 0.05);
        if hit1 && hit2 {
            full_hits += 1;
        }
        let pd = run_pipeline(
            &cube,
            &PipelineConfig::new(
                PipelineVariant::PhaseDiff,
                STANDARD_BAND_HZ,
                STANDARD_RANGE_LIMITS,
            )
            .with_seed(seed),
        )
        .unwrap();
        eprintln!(
            "seed {seed}: full={freqs:?} (hit {hit1}/{hit2}), phasediff={:?}",
            pd.iter().map(|e| e.frequency_hz).collect::<Vec<_>>()
        );
        pd_outcomes.push(TrialOutcome {
            truths_hz: trial.truths_hz.clone(),
            estimates_hz: pd.iter().map(|e| e.frequency_hz).collect(),
        });
    }
    eprintln!(
        "full both-hit rate {full_hits}/{n_seeds}; phasediff penalized mae {:.4}; elapsed {:?}",
        mae_with_miss_penalty(&pd_outcomes, STANDARD_BAND_HZ),
        t0.elapsed()
    );
}

#[test]
#[ignore]
fn probe_band_report() {
    // Does the noisy grid show its worst band at 3-4 Hz?
    let seeds: Vec<u64> = (0..10).collect();
    let report = run_noisy_grid(&seeds, &standard_noise(), PipelineVariant::Full).unwrap();
    let get = |b: BandLabel| report.band(b).map(|r| r.mae_hz).unwrap_or(f64::NAN);
    eprintln!(
        "1-2: {:.5}  2-3: {:.5}  3-4: {:.5}  4-5: {:.5}",
        get(BandLabel::B1to2),
        get(BandLabel::B2to3),
        get(BandLabel::B3to4),
        get(BandLabel::B4to5)
    );
}

//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance` (add `-- --nocapture` to see the
//! pass lines on success).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nfs_entangle::event_sim::{end_to_end_concurrence, ExperimentConfig};
use nfs_entangle::interferometer::{fringe_scan, propagate_chain};
use nfs_entangle::nuclear::{scattered_wavepacket, switched_pair};
use nfs_entangle::rate::{chi2_111, heralded_rate, XPDCParams};
use nfs_entangle::tomography::{assemble_rho, concurrence};
use nfs_entangle::{SampleParams, TimeGrid, TwoModeField, Visibility};

fn report(name: &str, ok: bool) {
    println!("acceptance {name}: {}", if ok { "pass" } else { "FAIL" });
    assert!(ok, "acceptance criterion failed: {name}");
}

fn fe57() -> SampleParams {
    SampleParams::fe57_default()
}

fn grid() -> TimeGrid {
    TimeGrid::new(0.0, 600.0, 0.02).unwrap()
}

#[test]
fn criterion_1_fringe_law_and_period() {
    let start = Instant::now();
    let s = fe57();
    let g = grid();
    let step = 0.5;
    let scan: Vec<f64> = (0..=120).map(|k| k as f64 * step).collect();
    let points = fringe_scan(&s, &g, &scan).unwrap();
    let mut max_dev = 0.0f64;
    for p in &points {
        let law = (s.delta_b() * p.t_phi).sin().powi(2);
        max_dev = max_dev.max((p.q_b_norm() - law).abs());
    }
    // first minimum after the origin sits one beat period out
    let period = std::f64::consts::PI / s.delta_b();
    let min_t = points
        .iter()
        .filter(|p| p.t_phi > period / 2.0 && p.t_phi < 3.0 * period / 2.0)
        .min_by(|a, b| a.q_b_norm().partial_cmp(&b.q_b_norm()).unwrap())
        .unwrap()
        .t_phi;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "1 fringe follows the switching law with the beat period",
        max_dev < 0.05 && (min_t - period).abs() <= step && elapsed < 10.0,
    );
}

#[test]
fn criterion_2_chain_preserves_norm_pointwise() {
    let s = fe57();
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ok = true;
    for _ in 0..10 {
        let t_phi: f64 = rng.gen::<f64>() * 40.0;
        let input = TwoModeField::single_photon_input(&g);
        let out = propagate_chain(&s, t_phi, &g, &input).unwrap();
        let (psi_r, psi_l) = switched_pair(&s, t_phi, &g).unwrap();
        for _ in 0..10 {
            let i = rng.gen_range(0..g.len());
            let lhs = out.a[i].norm_sqr() + out.b[i].norm_sqr();
            let rhs = (psi_r.amplitude[i].powi(2) + psi_l.amplitude[i].powi(2)) / 2.0;
            let scale = lhs.abs().max(rhs.abs()).max(1e-300);
            if (lhs - rhs).abs() / scale > 1e-12 {
                ok = false;
            }
        }
    }
    report("2 output intensities preserve the input norm pointwise", ok);
}

#[test]
fn criterion_3_beat_nodes() {
    let s = fe57();
    let g = TimeGrid::new(0.0, 200.0, 0.01).unwrap();
    let wp = scattered_wavepacket(&s, &g).unwrap();
    let mut ok = true;
    for n in 0..=10u32 {
        let expected = (2.0 * n as f64 + 1.0) * std::f64::consts::FRAC_PI_2 / s.delta_b();
        // nearest sign change of psi around the expected node
        let i0 = ((expected - g.t_start()) / g.dt()) as usize;
        let found = (i0.saturating_sub(3)..i0 + 3)
            .find(|&i| wp.amplitude[i] * wp.amplitude[i + 1] <= 0.0)
            .map(|i| g.time(i));
        match found {
            Some(t) => {
                if (t - expected).abs() > g.dt() {
                    ok = false;
                }
            }
            None => ok = false,
        }
    }
    let first = std::f64::consts::FRAC_PI_2 / fe57().delta_b();
    report(
        "3 wavepacket nodes sit at the odd beat quarter-periods",
        ok && (first - 7.383).abs() < 5e-3,
    );
}

#[test]
fn criterion_4_end_to_end_concurrence() {
    let start = Instant::now();
    let s = fe57();
    let g = grid();
    let quarter = std::f64::consts::FRAC_PI_2 / s.delta_b();
    let scan: Vec<f64> = (0..=4).map(|k| k as f64 * quarter / 2.0).collect();
    let ideal = ExperimentConfig::ideal(s, g, quarter, 100_000, 2024);
    let c_ideal = end_to_end_concurrence(&ideal, &scan).unwrap();
    let mut noisy = ideal.clone();
    noisy.n_events = 10_000;
    noisy.eps_inc = 1.0;
    let c_noise = end_to_end_concurrence(&noisy, &scan).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "4 simulated tomography recovers the ideal and fully dephased limits",
        (c_ideal - 1.0).abs() < 0.02 && c_noise == 0.0 && elapsed < 120.0,
    );
}

#[test]
fn criterion_5_worked_concurrence_value() {
    let v = Visibility::new(0.9).unwrap();
    let rho = assemble_rho(Some(0.15), 0.4, 0.4, 0.05, v).unwrap();
    let c = concurrence(&rho).unwrap();
    report(
        "5 mixed-state concurrence matches the worked value 0.5468",
        (c - 0.5468).abs() < 5e-5,
    );
}

#[test]
fn criterion_6_susceptibility_magnitude() {
    let chi = chi2_111(&XPDCParams::diamond_default()).unwrap();
    report(
        "6 diamond susceptibility lands in [1e-21, 1e-19] C/N",
        (1e-21..=1e-19).contains(&chi),
    );
}

#[test]
fn criterion_7_heralded_rate_with_discrepancy_flag() {
    let r = heralded_rate(2.9e6, 29.3e-9, 1.0).unwrap();
    let claimed = 1.0; // order-one rate quoted for the same inputs
    let flagged = r < claimed / 10.0;
    if flagged {
        println!("note: computed heralded rate {r:.4} Hz, quoted ~{claimed} Hz");
    }
    report(
        "7 heralded rate is 0.0850 Hz and the order-one quote is flagged",
        (r - 0.0850).abs() < 5e-5 && flagged,
    );
}

#[test]
fn criterion_8_byte_identical_outputs() {
    let bin = env!("CARGO_BIN_EXE_nfs-entangle");
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[experiment]\nn_events = 20000\nseed = 7\n\n[grid]\nt_end = 300.0\ndt = 0.05\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "4")] {
        let out = dir.path().join(format!("events_{tag}.csv"));
        let status = std::process::Command::new(bin)
            .args(["simulate", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        let events = std::fs::read(&out).unwrap();
        let summary = std::fs::read(dir.path().join(format!("events_{tag}_summary.csv"))).unwrap();
        outputs.push((events, summary));
    }
    report(
        "8 identical config and seed give byte-identical files across worker counts",
        outputs[0] == outputs[1] && !outputs[0].0.is_empty(),
    );
}

use proxres_core::doublewell::{
    barrier_kappa, doublet, fd_box_halfwidth, fd_oracle, fd_oracle_levels, fit_sweep_splitting, parity_residual,
    solve_level, sweep_distance, DoubleWellSpec, Parity, FD_DEFAULT_STEP,
};
use proxres_core::numerics::brent;
use proxres_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lossy_well(vb: f64, d: f64) -> DoubleWellSpec {
    DoubleWellSpec::new(900.0, -27.0, -0.0027, vb, d).unwrap()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn oracle_pair(spec: &DoubleWellSpec) -> (Complex64, Complex64, [f64; 2]) {
    let r = doublet(spec, 1).unwrap();
    let x = fd_box_halfwidth(spec, r.level_s.eigenvalue());
    let fd = fd_oracle_levels(spec, 2, FD_DEFAULT_STEP, x).unwrap();
    (fd[0].energy, fd[1].energy, [fd[0].parity_score, fd[1].parity_score])
}

#[test]
fn fd_matches_merged_square_well() {
    let spec = DoubleWellSpec::new(900.0, 0.0, 0.0, 900.0, 0.0).unwrap();
    let g = |e: f64| {
        let k = e.sqrt();
        k * k.sin() - (900.0 - e).sqrt() * k.cos()
    };
    let exact = brent(g, 1.0, 2.4, 1e-15, 200).unwrap();
    let fd = fd_oracle(&spec, 1, FD_DEFAULT_STEP, fd_box_halfwidth(&spec, Complex64::new(exact, 0.0))).unwrap();
    assert!((fd[0].re - exact).abs() / exact < 1e-6, "{} vs {exact}", fd[0]);
    assert!(fd[0].im.abs() < 1e-12);
}

#[test]
fn fd_approaches_infinite_well() {
    let spec = DoubleWellSpec::new(1e6, 0.0, 0.0, 1e6, 0.0).unwrap();
    let e = match fd_oracle(&spec, 1, 5e-4, 1.05) {
        Ok(v) => v[0].re,
        Err(err) => panic!("{err}"),
    };
    let limit = std::f64::consts::PI.powi(2) / 4.0;
    assert!((e - limit).abs() / limit < 5e-3, "{e} vs {limit}");
}

#[test]
fn transcendental_matches_fd_on_reference_family() {
    for vb in [900.0, 225.0, 100.0] {
        for d in [0.05, 0.3] {
            let spec = lossy_well(vb, d);
            let r = doublet(&spec, 1).unwrap();
            let (s, a, parity) = oracle_pair(&spec);
            assert!(rel(r.level_s.eigenvalue(), s) < 1e-4, "Vb {vb} d {d}: S {} vs {s}", r.level_s.eigenvalue());
            assert!(rel(r.level_a.eigenvalue(), a) < 1e-4, "Vb {vb} d {d}: A {} vs {a}", r.level_a.eigenvalue());
            assert!(parity[0] > 0.999 && parity[1] < -0.999, "parity scores {parity:?}");
        }
    }
}

#[test]
fn transcendental_matches_fd_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let v0 = rng.gen_range(300.0..1500.0);
        let vb = v0 * rng.gen_range(0.1..1.0);
        let v1 = -v0 * rng.gen_range(0.0..0.05);
        let v2 = -rng.gen_range(0.0..0.05);
        let d = rng.gen_range(0.02..0.6);
        let spec = DoubleWellSpec::new(v0, v1, v2, vb, d).unwrap();
        let r = doublet(&spec, 1).unwrap();
        let (s, a, parity) = oracle_pair(&spec);
        assert!(rel(r.level_s.eigenvalue(), s) < 1e-4, "{spec:?}");
        assert!(rel(r.level_a.eigenvalue(), a) < 1e-4, "{spec:?}");
        assert!(parity[0] > 0.999 && parity[1] < -0.999, "{spec:?}: {parity:?}");
    }
}

#[test]
fn second_doublet_matches_fd() {
    let spec = lossy_well(225.0, 0.2);
    let s2 = solve_level(&spec, Parity::Even, 2).unwrap();
    let a2 = solve_level(&spec, Parity::Odd, 2).unwrap();
    let fd = fd_oracle(&spec, 4, FD_DEFAULT_STEP, fd_box_halfwidth(&spec, a2.eigenvalue())).unwrap();
    assert!(rel(s2.eigenvalue(), fd[2]) < 1e-4);
    assert!(rel(a2.eigenvalue(), fd[3]) < 1e-4);
}

#[test]
fn full_line_eigenvectors_carry_the_half_line_parity() {
    let spec = lossy_well(225.0, 0.25);
    let s = solve_level(&spec, Parity::Even, 1).unwrap().eigenvalue();
    let a = solve_level(&spec, Parity::Odd, 1).unwrap().eigenvalue();
    let (fs, fa, parity) = oracle_pair(&spec);
    assert!(rel(s, fs) < 1e-4 && rel(a, fa) < 1e-4);
    assert!(parity[0] > 0.999 && parity[1] < -0.999);
    // an even root is not an odd root
    assert!(parity_residual(&spec, Parity::Odd, s).norm() > 1e3 * parity_residual(&spec, Parity::Even, s).norm());
}

#[test]
fn high_barrier_ratio_stays_small() {
    let sweep = sweep_distance(&lossy_well(900.0, 0.0), &grid(0.02, 0.5, 49), 1).unwrap();
    let (_, peak) = sweep.peak_ratio().unwrap();
    assert!((2.0..=5.0).contains(&peak), "peak {peak}");
}

#[test]
fn ratio_peaks_are_ordered_by_barrier_height() {
    let ds = grid(0.02, 0.5, 49);
    let peaks: Vec<(f64, f64)> = [900.0, 225.0, 100.0]
        .iter()
        .map(|&vb| sweep_distance(&lossy_well(vb, 0.0), &ds, 1).unwrap().peak_ratio().unwrap())
        .collect();
    let (d_c, ratio_c) = peaks[2];
    assert!((30.0..=70.0).contains(&ratio_c), "Vb = 100 peak {ratio_c}");
    assert!(d_c > ds[0] && d_c < ds[ds.len() - 1], "peak at endpoint d = {d_c}");
    assert!(peaks[0].1 < peaks[1].1 && peaks[1].1 < peaks[2].1, "{peaks:?}");
}

#[test]
fn ratio_returns_to_one_when_decoupled() {
    for vb in [900.0, 225.0, 100.0] {
        let spec = lossy_well(vb, 0.0);
        let e = doublet(&spec.with_d(1.0).unwrap(), 1).unwrap().mean_energy();
        let kr = barrier_kappa(&spec, Complex64::new(e, 0.0)).re;
        let d = 25.0 / kr;
        let r = doublet(&spec.with_d(d).unwrap(), 1).unwrap();
        assert!((0.9..=1.1).contains(&r.width_ratio), "Vb {vb}, d {d}: ratio {}", r.width_ratio);
    }
}

#[test]
fn splitting_decays_at_barrier_kappa() {
    let spec = lossy_well(100.0, 0.0);
    let sweep = sweep_distance(&spec, &grid(0.02, 0.5, 49), 1).unwrap();
    let fit = fit_sweep_splitting(&spec, &sweep).unwrap();
    let ratio = fit.fit.decay_constant / fit.kappa_bar;
    assert!((ratio - 1.0).abs() <= 0.1, "decay {} vs kappa {}", fit.fit.decay_constant, fit.kappa_bar);
    assert!(fit.fit.decay_constant > 0.0);
}

#[test]
fn splitting_ripples_at_low_barrier() {
    // with Vb = 100 the oscillating part of the barrier wavevector drives Δε
    // through zero near d ≈ 1, and the pure exponential misfits with
    // alternating sign along the approach
    let spec = lossy_well(100.0, 0.0);
    let ds = grid(0.1, 1.6, 76);
    let sweep = sweep_distance(&spec, &ds, 1).unwrap();
    let des: Vec<(f64, f64)> = sweep.successes().map(|(d, r)| (d, r.delta_eps)).collect();
    assert!(des.iter().any(|(_, e)| *e < 0.0), "no sign change in the splitting");
    let positive: Vec<(f64, f64)> = des.iter().copied().take_while(|(_, e)| *e > 0.0).collect();
    let d: Vec<f64> = positive.iter().map(|p| p.0).collect();
    let e: Vec<f64> = positive.iter().map(|p| p.1).collect();
    let fit = proxres_core::doublewell::fit_splitting(&d, &e, (d[0], d[d.len() - 1])).unwrap();
    let sign_changes = fit.residuals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert!(sign_changes >= 2, "residual sign changes {sign_changes}");
}

#[test]
fn absorbing_levels_ordering_and_width_asymmetry() {
    let ds = grid(0.02, 0.5, 13);
    for vb in [900.0, 225.0, 100.0] {
        let sweep = sweep_distance(&lossy_well(vb, 0.0), &ds, 1).unwrap();
        assert_eq!(sweep.success_fraction(), 1.0);
        for (d, r) in sweep.successes() {
            assert!(r.level_s.width_gamma > 0.0 && r.level_a.width_gamma > 0.0);
            assert!(r.level_s.energy_eps < r.level_a.energy_eps, "Vb {vb} d {d}: eps_S >= eps_A");
            assert!(r.level_s.width_gamma > r.level_a.width_gamma, "Vb {vb} d {d}: gamma_S <= gamma_A");
        }
    }
}

#[test]
fn splitting_decreases_in_tunnelling_regime() {
    let spec = lossy_well(900.0, 0.0);
    let ds = grid(0.05, 0.6, 23);
    let sweep = sweep_distance(&spec, &ds, 1).unwrap();
    let e = sweep.successes().map(|(_, r)| r.mean_energy()).sum::<f64>() / ds.len() as f64;
    let kr = barrier_kappa(&spec, Complex64::new(e, 0.0)).re;
    let des: Vec<f64> = sweep.successes().filter(|(d, _)| kr * d >= 1.0).map(|(_, r)| r.delta_eps).collect();
    assert!(des.len() > 5);
    assert!(des.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_is_deterministic() {
    let ds = grid(0.02, 0.3, 8);
    let a = sweep_distance(&lossy_well(225.0, 0.0), &ds, 1).unwrap();
    let b = sweep_distance(&lossy_well(225.0, 0.0), &ds, 1).unwrap();
    assert_eq!(a, b);
}

#[test]
fn warm_started_sweep_tracks_cold_solves() {
    let ds = grid(0.02, 0.5, 25);
    let sweep = sweep_distance(&lossy_well(100.0, 0.0), &ds, 1).unwrap();
    for (d, r) in sweep.successes().step_by(6) {
        let cold = doublet(&lossy_well(100.0, d), 1).unwrap();
        assert!(rel(r.level_s.eigenvalue(), cold.level_s.eigenvalue()) < 1e-10);
        assert!(rel(r.level_a.eigenvalue(), cold.level_a.eigenvalue()) < 1e-10);
    }
}

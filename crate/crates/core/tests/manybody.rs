use lrhsr::manybody::{
    chi_squared_series, kmc_simulate, kmc_trajectory, occupation_evolution, occupation_evolution_ode,
    SpinConfiguration,
};
use lrhsr::{Boundary, ModelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(alpha: f64, n: usize) -> ModelParams {
    ModelParams::chain(alpha, 1.0, 10.0, n, Boundary::Open).unwrap()
}

#[test]
fn ensembles_are_reproducible() {
    let p = params(1.5, 40);
    let c0 = SpinConfiguration::domain_wall(40);
    let a = kmc_simulate(&c0, &p, &[1.0, 4.0], 500, 7).unwrap();
    let b = kmc_simulate(&c0, &p, &[1.0, 4.0], 500, 7).unwrap();
    let c = kmc_simulate(&c0, &p, &[1.0, 4.0], 500, 8).unwrap();
    assert_eq!(a.counts, b.counts);
    assert_ne!(a.counts, c.counts);
}

#[test]
fn trajectories_conserve_particles() {
    let p = params(2.0, 50);
    let c0 = SpinConfiguration::domain_wall(50);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for cfg in kmc_trajectory(&c0, &p, &[0.0, 1.0, 10.0, 100.0], &mut rng).unwrap() {
        assert_eq!(cfg.count(), 25);
    }
}

#[test]
fn ensemble_mean_follows_linear_equation() {
    let p = params(2.0, 32);
    let t = 2.5;
    let ens = kmc_simulate(&SpinConfiguration::domain_wall(32), &p, &[t], 4000, 11).unwrap();
    let lin = occupation_evolution(&p, &[t]).unwrap();
    let (mean, se) = (ens.mean(0), ens.stderr(0));
    let zs: Vec<f64> = (0..32)
        .filter(|&i| se[i] > 0.0)
        .map(|i| (mean[i] - lin.n[0][i]) / se[i])
        .collect();
    let rms = (zs.iter().map(|z| z * z).sum::<f64>() / zs.len() as f64).sqrt();
    assert!(rms < 1.5, "rms z {rms}");
}

#[test]
fn eigen_and_ode_solutions_agree() {
    let p = params(1.0, 60);
    let times = [0.0, 1.0, 10.0, 100.0];
    let a = occupation_evolution(&p, &times).unwrap();
    let b = occupation_evolution_ode(&p, &times).unwrap();
    for (x, y) in a.n.iter().zip(&b.n) {
        for (u, v) in x.iter().zip(y) {
            assert!((u - v).abs() < 1e-8);
        }
    }
}

#[test]
fn chi_squared_never_grows() {
    let p = params(3.0, 80);
    let times: Vec<f64> = (0..50).map(|k| k as f64 * 20.0).collect();
    let series = chi_squared_series(&occupation_evolution(&p, &times).unwrap());
    for w in series.windows(2) {
        assert!(w[1].1 <= w[0].1 * (1.0 + 1e-12), "{w:?}");
    }
}

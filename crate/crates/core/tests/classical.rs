use lrhsr::classical::{cme_integrate, cme_spectral_solve, moments, DensityProfile};
use lrhsr::model::LatticeIndex;
use lrhsr::{Boundary, ModelParams};
use proptest::prelude::*;

#[test]
fn square_ring_profile_is_symmetric() {
    let p = ModelParams::new(2, 2.0, 1.0, 10.0, 16, Boundary::Periodic).unwrap();
    let prof = cme_spectral_solve(&p, 3.0).unwrap();
    let lattice = p.lattice();
    for x in 0..16 {
        for y in 0..16 {
            let a = lattice.flatten(&LatticeIndex::new(&[x, y])).unwrap();
            let b = lattice.flatten(&LatticeIndex::new(&[y, x])).unwrap();
            assert!((prof.values[a] - prof.values[b]).abs() < 1e-14);
        }
    }
}

#[test]
fn open_and_ring_agree_early() {
    // before the packet feels the ends only the folded tail differs
    let ring = ModelParams::chain(3.0, 1.0, 10.0, 400, Boundary::Periodic).unwrap();
    let open = ModelParams::chain(3.0, 1.0, 10.0, 400, Boundary::Open).unwrap();
    let t = 2.0;
    let a = cme_spectral_solve(&ring, t).unwrap();
    let b = cme_integrate(&DensityProfile::centered_delta(&open), &open, &[t]).unwrap().pop().unwrap();
    let err = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}

#[test]
fn mixed_regime_variance_is_diffusive() {
    let p = ModelParams::chain(3.0, 1.0, 10.0, 512, Boundary::Periodic).unwrap();
    let kappa = p.kappa().unwrap();
    let (m1, v1) = moments(&cme_spectral_solve(&p, 5.0).unwrap());
    let (_, v2) = moments(&cme_spectral_solve(&p, 10.0).unwrap());
    assert!(m1.iter().all(|m| m.abs() < 1e-10));
    // 2 D t with D = κ ζ(4)
    let slope = (v2 - v1) / 5.0;
    let expect = 2.0 * kappa * std::f64::consts::PI.powi(4) / 90.0;
    assert!((slope / expect - 1.0).abs() < 1e-3, "{slope} {expect}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn ode_conserves_mass(alpha in 0.6f64..3.5, n in 8usize..80, open in any::<bool>(), start in 0usize..8) {
        let bc = if open { Boundary::Open } else { Boundary::Periodic };
        let p = ModelParams::chain(alpha, 1.0, 10.0, n, bc).unwrap();
        let n0 = DensityProfile::delta(p.lattice(), start.min(n - 1)).unwrap();
        for prof in cme_integrate(&n0, &p, &[0.5, 5.0, 50.0]).unwrap() {
            prop_assert!((prof.total() - 1.0).abs() < 1e-9);
            prop_assert!(prof.values.iter().all(|&x| x > -1e-12));
        }
    }
}

mod common;

use common::{dilation, g, heisenberg, quadric};
use crjet::manifold::ManifoldModel;
use crjet::reflection::{box_grid, reconstruct_map, CompleteSystem, Integrator};
use crjet::series::Complex64;

fn system() -> (ManifoldModel, CompleteSystem) {
    let m = quadric(12);
    let sys = CompleteSystem::new(&m, &m, 1, 19, 7).unwrap();
    (m, sys)
}

#[test]
fn phi_prolongs_automorphism_jets() {
    let (m, sys) = system();
    let maps = [dilation(&m, 3, 2), heisenberg(&m, &g(1, 3, -1, 2))];
    let xs = [[g(1, 10, 0, 1), g(-1, 20, 0, 1), g(1, 30, 0, 1)], [g(0, 1, 0, 1), g(1, 7, 0, 1), g(-2, 9, 0, 1)]];
    for f in &maps {
        for x in &xs {
            let p = sys.chart.point(x).unwrap();
            let j4 = f.jet_at(&p, 4);
            let j5 = f.jet_at(&p, 5);
            let phi = sys.phi_exact(x, &j4).unwrap();
            for (a, b) in phi.iter().zip(&j5) {
                assert!(a.try_sub(b).unwrap().is_zero(), "{a} vs {b}");
            }
            // Below the top order Φ returns its input.
            for (a, b) in phi.iter().zip(&j4) {
                assert!(a.truncate(4).try_sub(b).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn small_k_is_reported() {
    let m = quadric(12);
    let err = CompleteSystem::new(&m, &m, 1, 10, 7).err().unwrap().to_string();
    assert!(err.contains("need k ≥ 19"), "{err}");
}

#[test]
fn reconstructs_dilation_and_identity() {
    let (m, sys) = system();
    let grid = box_grid(3, &g(1, 10, 0, 1), &g(1, 10, 0, 1));
    let h = g(1, 50, 0, 1);
    for (t, s, tol) in [(3, 2, 1e-6), (1, 1, 1e-10)] {
        let f = dilation(&m, t, s);
        let lam = t as f64 / s as f64;
        let out = reconstruct_map(&sys, &common::jet0(&f.jet(4), 2, 4), &grid, &h).unwrap();
        assert_eq!(out.len(), 27);
        for smp in &out {
            let p = sys.chart.point(&grid[out.iter().position(|q| q.x == smp.x).unwrap()]).unwrap();
            let z = p[0].to_complex64() * lam;
            let w = p[1].to_complex64() * lam * lam;
            assert!((Complex64::new(smp.value[0].0, smp.value[0].1) - z).norm() < tol);
            assert!((Complex64::new(smp.value[1].0, smp.value[1].1) - w).norm() < tol);
            assert!(smp.jet_residuals < 1e-9);
        }
    }
}

#[test]
fn reversed_path_agrees() {
    let (m, sys) = system();
    let f = dilation(&m, 5, 4);
    let x = vec![g(1, 10, 0, 1), g(-1, 10, 0, 1), g(1, 10, 0, 1)];
    let h = g(1, 40, 0, 1);
    let mut a = Integrator::new(&sys, common::jet0(&f.jet(4), 2, 4), h.clone(), vec![0, 1, 2]);
    let mut b = Integrator::new(&sys, common::jet0(&f.jet(4), 2, 4), h, vec![2, 1, 0]);
    let (ya, yb) = (a.jet_at(&x).unwrap(), b.jet_at(&x).unwrap());
    let diff = ya.iter().zip(&yb).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-9, "{diff}");
}

#[test]
fn perturbed_jet_is_flagged() {
    let (m, sys) = system();
    let mut jet = common::jet0(&dilation(&m, 1, 1).jet(4), 2, 4);
    // Second-order coefficient of the first component.
    jet[3] += Complex64::new(0.5, 0.0);
    let grid = vec![vec![g(1, 20, 0, 1), g(0, 1, 0, 1), g(0, 1, 0, 1)]];
    let out = reconstruct_map(&sys, &jet, &grid, &g(1, 100, 0, 1)).unwrap();
    assert!(out[0].jet_residuals > 1e-3, "{}", out[0].jet_residuals);
}

#[test]
fn leaving_the_box_is_an_error() {
    let (m, sys) = system();
    let grid = vec![vec![g(1, 2, 0, 1), g(0, 1, 0, 1), g(0, 1, 0, 1)]];
    assert!(reconstruct_map(&sys, &common::jet0(&dilation(&m, 1, 1).jet(4), 2, 4), &grid, &g(1, 10, 0, 1)).is_err());
}

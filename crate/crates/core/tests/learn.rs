use nalgebra::DMatrix;
use piezoloc_core::dataset::{self, CollectOptions, Dataset, ProtocolSpec};
use piezoloc_core::forward_sim::{LatticeModel, Simulator};
use piezoloc_core::learn::{self, laplacian_kernel, GridSearchSpec, KrrOptions, Predictor};
use piezoloc_core::Point2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rows(seed: u64, n: usize, p: usize) -> (Vec<Vec<f64>>, Vec<[f64; 2]>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n).map(|_| (0..p).map(|_| rng.random_range(-100.0..100.0)).collect()).collect();
    let y = (0..n).map(|_| [rng.random_range(0.0..16.0), rng.random_range(0.0..10.0)]).collect();
    (x, y)
}

fn noiseless_grid() -> Dataset {
    let sim = Simulator::new(LatticeModel::default()).unwrap();
    dataset::collect_protocol(&ProtocolSpec::grid(2.0, 3.0, 1, 0), &sim, &CollectOptions::ideal(0.0, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gram_matrix_is_pd_with_unit_diagonal(seed in any::<u64>(), n in 1usize..25, sigma in 1e-3..1.0f64) {
        let (x, _) = random_rows(seed, n, 6);
        let k = DMatrix::from_fn(n, n, |i, j| laplacian_kernel(&x[i], &x[j], sigma).unwrap());
        for i in 0..n {
            prop_assert_eq!(k[(i, i)], 1.0);
            for j in 0..n {
                prop_assert_eq!(k[(i, j)], k[(j, i)]);
            }
        }
        prop_assert!(k.cholesky().is_some());
    }

    #[test]
    fn training_error_grows_with_lambda(seed in any::<u64>(), sigma in 1e-3..1e-1f64) {
        let (x, y) = random_rows(seed, 20, 6);
        let xr: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let mut prev = 0.0;
        for lambda in learn::log_space(1e-6, 1e2, 9) {
            let m = learn::fit_krr_rows(&xr, &y, lambda, sigma, KrrOptions::default()).unwrap();
            let mse = xr
                .iter()
                .zip(&y)
                .map(|(r, l)| m.predict(r).unwrap().distance(&Point2::new(l[0], l[1])).powi(2))
                .sum::<f64>()
                / 20.0;
            prop_assert!(mse >= prev - 1e-9, "lambda {lambda}: {mse} < {prev}");
            prev = mse;
        }
    }

    #[test]
    fn linear_model_ignores_feature_order(seed in any::<u64>()) {
        let (x, y) = random_rows(seed, 30, 6);
        let perm = [3, 0, 5, 1, 4, 2];
        let xp: Vec<Vec<f64>> = x.iter().map(|r| perm.iter().map(|&k| r[k]).collect()).collect();
        let xr: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let xpr: Vec<&[f64]> = xp.iter().map(Vec::as_slice).collect();
        let a = learn::fit_linear_rows(&xr, &y, 6).unwrap();
        let b = learn::fit_linear_rows(&xpr, &y, 6).unwrap();
        for (r, rp) in xr.iter().zip(&xpr) {
            let (pa, pb) = (a.predict(r).unwrap(), b.predict(rp).unwrap());
            prop_assert!(pa.distance(&pb) < 1e-8, "{pa:?} vs {pb:?}");
        }
    }
}

#[test]
fn grid_search_is_deterministic() {
    let data = noiseless_grid();
    let spec = GridSearchSpec {
        lambda_grid: learn::log_space(1e-4, 1e0, 5),
        sigma_grid: learn::log_space(1e-5, 1e-2, 4),
        ..GridSearchSpec::default()
    };
    let a = learn::grid_search(&data, &spec).unwrap();
    let b = learn::grid_search(&data, &spec).unwrap();
    assert_eq!((a.lambda, a.sigma, a.calibration_error), (b.lambda, b.sigma, b.calibration_error));
    assert_eq!(a.model, b.model);
    assert_eq!(a.cells, b.cells);
}

/// Mirroring x swaps electrodes 0<->1 and 2<->3, which permutes the pairs.
#[test]
fn mirrored_features_give_mirrored_predictions() {
    const MIRROR_X: [usize; 6] = [0, 4, 3, 2, 1, 5];
    let data = noiseless_grid();
    let model = learn::fit_krr(&data, 1e-3, 1e-4, KrrOptions::default()).unwrap();
    let sim = Simulator::new(LatticeModel::default()).unwrap();
    for (x, y) in [(3.3, 2.7), (11.0, 6.1), (7.5, 9.0)] {
        let rec = sim.simulate_record(&piezoloc_core::Indentation::new(Point2::new(x, y), 3.0)).unwrap();
        let mirrored: Vec<f64> = (0..6).map(|k| rec.dr[MIRROR_X[k]]).collect();
        let p = model.predict(&rec.dr).unwrap();
        let q = model.predict(&mirrored).unwrap();
        assert!(((16.0 - p.x) - q.x).abs() < 1e-6 && (p.y - q.y).abs() < 1e-6, "{p:?} vs {q:?}");
    }
}

//! Platform-independent demo state; the wasm bindings wrap this.

use piezoloc_core::dataset::{self, CollectOptions, ProtocolSpec};
use piezoloc_core::forward_sim::{LatticeModel, Simulator};
use piezoloc_core::learn::{self, GridSearchSpec, KrrModel, Predictor};
use piezoloc_core::{Indentation, Point2, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// A simulated sensor plus a KRR localizer trained on its 2 mm grid.
pub struct Engine {
    sim: Simulator,
    model: KrrModel,
    noise_sd: f64,
    rng: ChaCha8Rng,
}

/// Sensitivity of one pair sampled on a regular lattice, row-major from
/// `y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityMap {
    pub columns: usize,
    pub rows: usize,
    pub step: f64,
    /// Relative resistance change `dr / r0`.
    pub values: Vec<f64>,
}

impl Engine {
    pub fn new(seed: u64) -> Result<Self> {
        let sim = Simulator::new(LatticeModel::default())?;
        let noise_sd = dataset::default_ideal_noise(&sim, 3.0)?;
        let train = dataset::collect_protocol(
            &ProtocolSpec::grid(2.0, 3.0, 2, seed),
            &sim,
            &CollectOptions::ideal(noise_sd, seed.wrapping_add(1)),
        )?;
        let spec = GridSearchSpec {
            lambda_grid: learn::log_space(1e-4, 1e0, 5),
            sigma_grid: learn::log_space(1e-5, 1e-2, 7),
            ..GridSearchSpec::default()
        };
        let model = learn::grid_search(&train, &spec)?.model;
        Ok(Engine {
            sim,
            model,
            noise_sd,
            rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(2)),
        })
    }

    pub fn width(&self) -> f64 {
        self.sim.geometry().width
    }

    pub fn height(&self) -> f64 {
        self.sim.geometry().height
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    pub fn lambda(&self) -> f64 {
        self.model.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.model.sigma
    }

    pub fn rest_resistances(&self) -> &[f64] {
        self.sim.rest_resistances()
    }

    pub fn pair_labels(&self) -> Vec<String> {
        self.sim.pairs().iter().map(|p| format!("{}-{}", p.a(), p.b())).collect()
    }

    /// Noise-free resistance change per pair, ohms.
    pub fn simulate(&self, x: f64, y: f64, depth: f64) -> Result<Vec<f64>> {
        Ok(self.sim.simulate_record(&Indentation::new(Point2::new(x, y), depth))?.dr)
    }

    /// Simulates a press, adds measurement noise scaled by `noise_scale`
    /// and localizes it.
    pub fn localize(&mut self, x: f64, y: f64, depth: f64, noise_scale: f64) -> Result<Point2> {
        let mut dr = self.simulate(x, y, depth)?;
        let sd = self.noise_sd * noise_scale.max(0.0);
        if sd > 0.0 {
            let n = Normal::new(0.0, sd).expect("positive finite sd");
            for v in &mut dr {
                *v += n.sample(&mut self.rng);
            }
        }
        self.model.predict(&dr)
    }

    pub fn sensitivity_map(&self, pair: usize, depth: f64, step: f64) -> Result<SensitivityMap> {
        let r0 = *self.rest_resistances().get(pair).ok_or_else(|| {
            piezoloc_core::Error::Range {
                value: pair as f64,
                min: 0.0,
                max: (self.rest_resistances().len() - 1) as f64,
            }
        })?;
        let columns = (self.width() / step).floor() as usize + 1;
        let rows = (self.height() / step).floor() as usize + 1;
        let mut values = Vec::with_capacity(columns * rows);
        for r in 0..rows {
            for c in 0..columns {
                let p = Point2::new(c as f64 * step, r as f64 * step);
                let loaded = self.sim.indented_resistances(&Indentation::new(p, depth))?;
                values.push((loaded[pair] - r0) / r0);
            }
        }
        Ok(SensitivityMap {
            columns,
            rows,
            step,
            values,
        })
    }
}

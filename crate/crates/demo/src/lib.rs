//! Browser bindings for the piezoresistive localization demo.

pub mod engine;

pub use engine::{Engine, SensitivityMap};

use wasm_bindgen::prelude::*;

fn js_err(e: piezoloc_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo {
    engine: Engine,
}

#[wasm_bindgen]
impl Demo {
    /// Builds the sensor and trains the localizer; takes a moment.
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32) -> Result<Demo, JsValue> {
        Ok(Demo {
            engine: Engine::new(u64::from(seed)).map_err(js_err)?,
        })
    }

    pub fn width(&self) -> f64 {
        self.engine.width()
    }

    pub fn height(&self) -> f64 {
        self.engine.height()
    }

    pub fn lambda(&self) -> f64 {
        self.engine.lambda()
    }

    pub fn sigma(&self) -> f64 {
        self.engine.sigma()
    }

    pub fn noise_sd(&self) -> f64 {
        self.engine.noise_sd()
    }

    #[wasm_bindgen(js_name = pairLabels)]
    pub fn pair_labels(&self) -> Vec<String> {
        self.engine.pair_labels()
    }

    #[wasm_bindgen(js_name = restResistances)]
    pub fn rest_resistances(&self) -> Vec<f64> {
        self.engine.rest_resistances().to_vec()
    }

    /// Resistance change per pair, ohms.
    pub fn simulate(&self, x: f64, y: f64, depth: f64) -> Result<Vec<f64>, JsValue> {
        self.engine.simulate(x, y, depth).map_err(js_err)
    }

    /// `[x, y]` estimated from a noisy simulated press.
    pub fn localize(&mut self, x: f64, y: f64, depth: f64, noise_scale: f64) -> Result<Vec<f64>, JsValue> {
        let p = self.engine.localize(x, y, depth, noise_scale).map_err(js_err)?;
        Ok(vec![p.x, p.y])
    }

    /// Row-major `dr / r0` for one pair; the lattice has
    /// `floor(width / step) + 1` columns.
    #[wasm_bindgen(js_name = sensitivityMap)]
    pub fn sensitivity_map(&self, pair: usize, depth: f64, step: f64) -> Result<Vec<f64>, JsValue> {
        Ok(self.engine.sensitivity_map(pair, depth, step).map_err(js_err)?.values)
    }
}

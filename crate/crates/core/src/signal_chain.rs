//! Emulation of the two-stage resistance measurement circuit.
//!
//! Stage one is an inverting amplifier whose output is
//! `V1 = Vcc - Vcc·R1/Rs`. A DAC holds the rest value of `V1` for each pair;
//! stage two amplifies `V1 - Vref` around mid-rail, and the result is read by
//! the microcontroller ADC. A switching matrix routes each electrode pair to
//! the amplifier in turn, completing one frame per `frame_period_ms`.
//!
//! Both converters quantize with round-half-up (`floor(x + 0.5)`).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitConfig {
    pub vcc: f64,
    /// Stage-one reference resistor in ohms. `None` resolves to half the
    /// smallest rest pair resistance.
    pub r1: Option<f64>,
    pub gain: f64,
    /// Stage-two output offset; `vcc / 2` when absent.
    pub offset: Option<f64>,
    pub dac_bits: u32,
    pub adc_bits: u32,
    pub frame_period_ms: f64,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        CircuitConfig {
            vcc: 5.0,
            r1: None,
            gain: 50.0,
            offset: None,
            dac_bits: 12,
            adc_bits: 10,
            frame_period_ms: 25.0,
        }
    }
}

impl CircuitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.vcc.is_finite() && self.vcc > 0.0) {
            return Err(Error::Config("circuit.vcc must be positive".into()));
        }
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(Error::Config("circuit.gain must be positive".into()));
        }
        for (name, bits) in [("dac_bits", self.dac_bits), ("adc_bits", self.adc_bits)] {
            if !(8..=16).contains(&bits) {
                return Err(Error::Config(format!("circuit.{name} must be in [8, 16], got {bits}")));
            }
        }
        if !(self.frame_period_ms.is_finite() && self.frame_period_ms > 0.0) {
            return Err(Error::Config("circuit.frame_period_ms must be positive".into()));
        }
        if let Some(r1) = self.r1 {
            if !(r1.is_finite() && r1 > 0.0) {
                return Err(Error::Config("circuit.r1 must be positive".into()));
            }
        }
        if let Some(off) = self.offset {
            if !(0.0..=self.vcc).contains(&off) {
                return Err(Error::Config("circuit.offset must lie in [0, vcc]".into()));
            }
        }
        Ok(())
    }

    /// Fixes `r1` against the sensor's rest resistances and checks that it
    /// stays below every one of them.
    pub fn resolve(&self, rest_resistances: &[f64]) -> Result<Circuit> {
        self.validate()?;
        let min_rest = rest_resistances.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min_rest.is_finite() && min_rest > 0.0) {
            return Err(Error::Config("rest resistances must be positive".into()));
        }
        let r1 = self.r1.unwrap_or(0.5 * min_rest);
        if r1 >= min_rest {
            return Err(Error::Config(format!(
                "circuit.r1 = {r1} must be below the smallest rest resistance {min_rest}"
            )));
        }
        Ok(Circuit {
            vcc: self.vcc,
            r1,
            gain: self.gain,
            offset: self.offset.unwrap_or(self.vcc / 2.0),
            dac_bits: self.dac_bits,
            adc_bits: self.adc_bits,
            frame_period_ms: self.frame_period_ms,
        })
    }
}

/// Circuit with every parameter resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub vcc: f64,
    pub r1: f64,
    pub gain: f64,
    pub offset: f64,
    pub dac_bits: u32,
    pub adc_bits: u32,
    pub frame_period_ms: f64,
}

fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

impl Circuit {
    pub fn dac_full_scale(&self) -> u32 {
        (1u32 << self.dac_bits) - 1
    }

    pub fn adc_full_scale(&self) -> u32 {
        (1u32 << self.adc_bits) - 1
    }

    pub fn first_stage(&self, rs: f64) -> Result<f64> {
        if !(rs > 0.0) {
            return Err(Error::Domain(format!("pair resistance must be positive, got {rs}")));
        }
        Ok((self.vcc - self.vcc * (self.r1 / rs)).clamp(0.0, self.vcc))
    }

    pub fn dac_code(&self, v: f64) -> u32 {
        let fs = f64::from(self.dac_full_scale());
        round_half_up(v / self.vcc * fs).clamp(0.0, fs) as u32
    }

    pub fn dac_voltage(&self, code: u32) -> f64 {
        f64::from(code) / f64::from(self.dac_full_scale()) * self.vcc
    }

    /// DAC codes reproducing the rest stage-one voltage of every pair.
    pub fn capture_baseline(&self, rest_resistances: &[f64]) -> Result<Vec<u32>> {
        rest_resistances
            .iter()
            .map(|&rs| Ok(self.dac_code(self.first_stage(rs)?)))
            .collect()
    }

    pub fn second_stage(&self, v1: f64, vref: f64) -> f64 {
        (self.gain * (v1 - vref) + self.offset).clamp(0.0, self.vcc)
    }

    /// Quantizes `v` plus a pre-drawn noise sample.
    pub fn adc_quantize(&self, v: f64, noise: f64) -> u32 {
        let fs = f64::from(self.adc_full_scale());
        round_half_up((v + noise) / self.vcc * fs).clamp(0.0, fs) as u32
    }

    pub fn adc_voltage(&self, count: u32) -> f64 {
        f64::from(count) / f64::from(self.adc_full_scale()) * self.vcc
    }

    /// ADC count for one routed pair. Infallible apart from the stage-one
    /// domain check.
    pub fn pair_count(&self, rs: f64, baseline_code: u32, noise: f64) -> Result<u32> {
        let v1 = self.first_stage(rs)?;
        let v2 = self.second_stage(v1, self.dac_voltage(baseline_code));
        Ok(self.adc_quantize(v2, noise))
    }

    /// Resistance that produces stage-one output `v1`, or `None` when `v1`
    /// is at the upper rail where the inverse diverges.
    pub fn resistance_for_v1(&self, v1: f64) -> Option<f64> {
        let ratio = v1 / self.vcc;
        if ratio >= 1.0 - 1e-9 {
            None
        } else {
            Some(self.r1 / (1.0 - ratio.max(0.0)))
        }
    }

    /// Inverts ADC count, stage-two gain and stage one to estimate the pair
    /// resistance change relative to the DAC-held baseline.
    pub fn count_to_feature(&self, count: u32, baseline_code: u32) -> Feature {
        let vref = self.dac_voltage(baseline_code);
        let v1 = vref + (self.adc_voltage(count) - self.offset) / self.gain;
        let rs_base = self.resistance_for_v1(vref);
        let rs = self.resistance_for_v1(v1);
        let pinned = count == 0 || count == self.adc_full_scale();
        let guard = self.r1 * 1e9;
        let dr = rs.unwrap_or(guard) - rs_base.unwrap_or(guard);
        Feature {
            dr,
            saturated: pinned || rs.is_none() || rs_base.is_none(),
        }
    }

    pub fn counts_to_features(&self, frame: &Frame) -> Result<Vec<Feature>> {
        if frame.counts.len() != frame.baseline_refs.len() {
            return Err(Error::LengthMismatch {
                expected: frame.baseline_refs.len(),
                actual: frame.counts.len(),
            });
        }
        if let Some(&c) = frame.counts.iter().find(|&&c| c > self.adc_full_scale()) {
            return Err(Error::Range {
                value: f64::from(c),
                min: 0.0,
                max: f64::from(self.adc_full_scale()),
            });
        }
        Ok(frame
            .counts
            .iter()
            .zip(&frame.baseline_refs)
            .map(|(&c, &b)| self.count_to_feature(c, b))
            .collect())
    }
}

/// Estimated resistance change for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub dr: f64,
    pub saturated: bool,
}

/// One pass of the switching matrix over all pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub timestamp_ms: f64,
    pub counts: Vec<u32>,
    pub baseline_refs: Vec<u32>,
}

/// JSON-lines representation of a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameLine {
    pub t_ms: f64,
    pub counts: Vec<u32>,
    pub saturated: Vec<bool>,
}

/// Seeded frame generator for one simulated sensor.
#[derive(Debug, Clone)]
pub struct Scanner {
    circuit: Circuit,
    baselines: Vec<u32>,
    noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
    next_frame: u64,
}

impl Scanner {
    pub fn new(circuit: Circuit, baselines: Vec<u32>, noise_sd: f64, seed: u64) -> Result<Self> {
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(Error::Domain(format!("noise_sd must be non-negative, got {noise_sd}")));
        }
        let noise = if noise_sd > 0.0 {
            Some(Normal::new(0.0, noise_sd).map_err(|e| Error::Domain(e.to_string()))?)
        } else {
            None
        };
        Ok(Scanner {
            circuit,
            baselines,
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_frame: 0,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn baselines(&self) -> &[u32] {
        &self.baselines
    }

    /// Reads one frame at the next slot of the frame clock.
    pub fn scan(&mut self, resistances: &[f64]) -> Result<Frame> {
        let t = self.next_frame as f64 * self.circuit.frame_period_ms;
        let frame = self.scan_at(resistances, t)?;
        self.next_frame += 1;
        Ok(frame)
    }

    /// Reads one frame stamped with `t_ms`, pairs in canonical order.
    pub fn scan_at(&mut self, resistances: &[f64], t_ms: f64) -> Result<Frame> {
        if resistances.len() != self.baselines.len() {
            return Err(Error::LengthMismatch {
                expected: self.baselines.len(),
                actual: resistances.len(),
            });
        }
        let mut counts = Vec::with_capacity(resistances.len());
        for (&rs, &code) in resistances.iter().zip(&self.baselines) {
            let eps = match &self.noise {
                Some(n) => n.sample(&mut self.rng),
                None => 0.0,
            };
            counts.push(self.circuit.pair_count(rs, code, eps)?);
        }
        Ok(Frame {
            timestamp_ms: t_ms,
            counts,
            baseline_refs: self.baselines.clone(),
        })
    }

    pub fn frame_line(&self, frame: &Frame) -> Result<FrameLine> {
        let saturated = self
            .circuit
            .counts_to_features(frame)?
            .iter()
            .map(|f| f.saturated)
            .collect();
        Ok(FrameLine {
            t_ms: frame.timestamp_ms,
            counts: frame.counts.clone(),
            saturated,
        })
    }
}

/// Single ADC read with its own noise draw.
pub fn adc_read(circuit: &Circuit, v: f64, noise_sd: f64, rng: &mut ChaCha8Rng) -> u32 {
    let eps = if noise_sd > 0.0 {
        Normal::new(0.0, noise_sd).map_or(0.0, |n| n.sample(rng))
    } else {
        0.0
    };
    circuit.adc_quantize(v, eps)
}

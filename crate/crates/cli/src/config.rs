//! The run configuration: one TOML document with a default for every field.

use std::path::{Path, PathBuf};

use piezoloc_core::dataset::{FeatureSource, ProtocolKind, ProtocolSpec};
use piezoloc_core::forward_sim::{LatticeModel, StrainProfile};
use piezoloc_core::learn::GridSearchSpec;
use piezoloc_core::signal_chain::CircuitConfig;
use piezoloc_core::SensorGeometry;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 2019;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub geometry: SensorGeometry,
    pub model: ModelConfig,
    pub circuit: CircuitConfig,
    pub features: FeatureConfig,
    pub train: ProtocolConfig,
    pub test: ProtocolConfig,
    pub learning: GridSearchSpec,
    pub seeds: SeedConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            geometry: SensorGeometry::default(),
            model: ModelConfig::default(),
            circuit: CircuitConfig::default(),
            features: FeatureConfig::default(),
            train: ProtocolConfig::default(),
            test: ProtocolConfig::default(),
            learning: GridSearchSpec::default(),
            seeds: SeedConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Lattice parameters; the geometry lives in its own section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub node_spacing: f64,
    pub base_conductance: Option<f64>,
    pub rest_band_ohms: [f64; 2],
    pub piezo_coefficient: f64,
    pub indenter_radius: f64,
    pub strain_profile: StrainProfile,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let m = LatticeModel::default();
        ModelConfig {
            node_spacing: m.node_spacing,
            base_conductance: m.base_conductance,
            rest_band_ohms: m.rest_band_ohms,
            piezo_coefficient: m.piezo_coefficient,
            indenter_radius: m.indenter_radius,
            strain_profile: m.strain_profile,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeatureConfig {
    pub source: FeatureSource,
    /// Ohms (ideal) or volts (circuit). Ideal default: 1% of the median
    /// centre-indentation resistance change; circuit default: 0.
    pub noise_sd: Option<f64>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            source: FeatureSource::Ideal,
            noise_sd: None,
        }
    }
}

/// Protocol section. Unset fields fall back to the role defaults: the
/// training set is a 2 mm grid repeated 4 times, the test set 60 random
/// locations, both at 3 mm depth.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolConfig {
    pub kind: Option<ProtocolKind>,
    pub spacing: Option<f64>,
    pub count: Option<usize>,
    pub depth: Option<f64>,
    pub repeats: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Train,
    Test,
}

impl ProtocolConfig {
    pub fn resolve(&self, role: Role, seed: u64) -> ProtocolSpec {
        let kind = self.kind.unwrap_or(match role {
            Role::Train => ProtocolKind::Grid,
            Role::Test => ProtocolKind::Random,
        });
        let depth = self.depth.unwrap_or(3.0);
        match kind {
            ProtocolKind::Grid => ProtocolSpec::grid(
                self.spacing.unwrap_or(2.0),
                depth,
                self.repeats.unwrap_or(match role {
                    Role::Train => 4,
                    Role::Test => 1,
                }),
                seed,
            ),
            ProtocolKind::Random => {
                let mut spec = ProtocolSpec::random(self.count.unwrap_or(60), depth, seed);
                spec.repeats = self.repeats.unwrap_or(1);
                spec
            }
        }
    }
}

/// Per-stream seeds; unset entries derive from the master seed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeedConfig {
    pub train_protocol: Option<u64>,
    pub test_protocol: Option<u64>,
    pub train_noise: Option<u64>,
    pub test_noise: Option<u64>,
    pub random_baseline: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    pub train_protocol: u64,
    pub test_protocol: u64,
    pub train_noise: u64,
    pub test_noise: u64,
    pub random_baseline: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out") }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("run config serializes to TOML")
    }

    pub fn seeds(&self) -> Seeds {
        let s = &self.seeds;
        let derive = |k: u64| self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k);
        Seeds {
            train_protocol: s.train_protocol.unwrap_or_else(|| derive(1)),
            test_protocol: s.test_protocol.unwrap_or_else(|| derive(2)),
            train_noise: s.train_noise.unwrap_or_else(|| derive(3)),
            test_noise: s.test_noise.unwrap_or_else(|| derive(4)),
            random_baseline: s.random_baseline.unwrap_or_else(|| derive(5)),
        }
    }

    pub fn lattice_model(&self) -> LatticeModel {
        let m = &self.model;
        LatticeModel {
            geometry: self.geometry.clone(),
            node_spacing: m.node_spacing,
            base_conductance: m.base_conductance,
            rest_band_ohms: m.rest_band_ohms,
            piezo_coefficient: m.piezo_coefficient,
            indenter_radius: m.indenter_radius,
            strain_profile: m.strain_profile,
        }
    }

    pub fn train_protocol(&self) -> ProtocolSpec {
        self.train.resolve(Role::Train, self.seeds().train_protocol)
    }

    pub fn test_protocol(&self) -> ProtocolSpec {
        self.test.resolve(Role::Test, self.seeds().test_protocol)
    }

    /// Checks every section, reporting the offending field path.
    pub fn validate(&self) -> Result<(), CliError> {
        let section = |name: &str, r: piezoloc_core::Result<()>| {
            r.map_err(|e| CliError::Config(format!("[{name}] {e}")))
        };
        section("geometry", self.geometry.validate())?;
        section("model", self.lattice_model().validate())?;
        section("circuit", self.circuit.validate())?;
        section("learning", self.learning.validate())?;
        for (name, spec) in [("train", self.train_protocol()), ("test", self.test_protocol())] {
            let field = |f: &str, msg: String| CliError::Config(format!("{name}.{f}: {msg}"));
            if !(0.0..=self.geometry.thickness).contains(&spec.depth) {
                return Err(field("depth", format!("{} mm exceeds the sensor thickness", spec.depth)));
            }
            match spec.kind {
                ProtocolKind::Grid => {
                    piezoloc_core::dataset::grid_points(&self.geometry, spec.spacing)
                        .map_err(|e| field("spacing", e.to_string()))?;
                    if spec.repeats == 0 {
                        return Err(field("repeats", "must be at least 1".into()));
                    }
                }
                ProtocolKind::Random => {
                    if spec.count == 0 {
                        return Err(field("count", "must be at least 1".into()));
                    }
                }
            }
        }
        if let Some(n) = self.features.noise_sd {
            if !(n.is_finite() && n >= 0.0) {
                return Err(CliError::Config(format!("features.noise_sd: must be non-negative, got {n}")));
            }
        }
        Ok(())
    }

    /// Stable digest of everything that influences artifact contents. The
    /// output directory is excluded so reruns elsewhere hash identically.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputConfig::default();
        let json = serde_json::to_string(&canonical).expect("run config serializes to JSON");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults_resolve_to_the_bench_protocols() {
        let cfg = RunConfig::default();
        let train = cfg.train_protocol();
        assert_eq!((train.kind, train.spacing, train.repeats, train.depth), (ProtocolKind::Grid, 2.0, 4, 3.0));
        let test = cfg.test_protocol();
        assert_eq!((test.kind, test.count, test.depth), (ProtocolKind::Random, 60, 3.0));
        assert_eq!(cfg.geometry.width, 16.0);
        assert_eq!(cfg.circuit.gain, 50.0);
        assert_eq!(cfg.learning.lambda_grid.len(), 16);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("[model]\nnode_spacng = 0.5\n").unwrap_err();
        assert!(err.to_string().contains("node_spacng"), "{err}");
        assert!(RunConfig::from_toml("bogus = 1\n").is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let err = RunConfig::from_toml("[train]\nspacing = 3.0\n").unwrap_err();
        assert!(err.to_string().starts_with("invalid configuration: train.spacing"), "{err}");
        let err = RunConfig::from_toml("[test]\ndepth = 9.0\n").unwrap_err();
        assert!(err.to_string().contains("test.depth"), "{err}");
        let err = RunConfig::from_toml("[circuit]\nadc_bits = 20\n").unwrap_err();
        assert!(err.to_string().contains("[circuit]"), "{err}");
    }

    #[test]
    fn toml_round_trip_and_hash_stability() {
        let cfg = RunConfig::default();
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        let mut moved = cfg.clone();
        moved.output.dir = PathBuf::from("elsewhere");
        assert_eq!(moved.hash(), cfg.hash());
        let mut reseeded = cfg.clone();
        reseeded.seed += 1;
        assert_ne!(reseeded.hash(), cfg.hash());
    }

    #[test]
    fn explicit_seeds_override_derivation() {
        let cfg = RunConfig::from_toml("[seeds]\ntrain_protocol = 7\n").unwrap();
        assert_eq!(cfg.seeds().train_protocol, 7);
        assert_eq!(cfg.seeds().test_protocol, RunConfig::default().seeds().test_protocol);
    }
}

//! Indentation protocols, synthetic data collection and the JSON-lines
//! dataset format.
//!
//! File layout: the first line is a metadata object carrying
//! `schema_version`, the geometry and provenance; every following line is
//! one record `{"x_mm", "y_mm", "depth_mm", "dr"}`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward_sim::{LatticeModel, Simulator};
use crate::geometry::{Indentation, IndentationRecord, Point2, SensorGeometry};
use crate::signal_chain::{CircuitConfig, FrameLine, Scanner};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Grid,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    /// Lattice pitch in mm (grid only).
    pub spacing: f64,
    /// Number of locations (random only).
    pub count: usize,
    pub depth: f64,
    pub seed: u64,
    pub repeats: usize,
}

impl ProtocolSpec {
    pub fn grid(spacing: f64, depth: f64, repeats: usize, seed: u64) -> Self {
        ProtocolSpec {
            kind: ProtocolKind::Grid,
            spacing,
            count: 0,
            depth,
            seed,
            repeats,
        }
    }

    pub fn random(count: usize, depth: f64, seed: u64) -> Self {
        ProtocolSpec {
            kind: ProtocolKind::Random,
            spacing: 0.0,
            count,
            depth,
            seed,
            repeats: 1,
        }
    }

    pub fn generate(&self, geometry: &SensorGeometry) -> Result<Vec<Indentation>> {
        match self.kind {
            ProtocolKind::Grid => grid_protocol(geometry, self),
            ProtocolKind::Random => random_protocol(geometry, self),
        }
    }
}

fn check_depth(geometry: &SensorGeometry, depth: f64) -> Result<()> {
    if !(0.0..=geometry.thickness).contains(&depth) {
        return Err(Error::Config(format!(
            "protocol depth {depth} mm outside [0, {}]",
            geometry.thickness
        )));
    }
    Ok(())
}

/// Unshuffled lattice points, row by row (y outer, x inner).
pub fn grid_points(geometry: &SensorGeometry, spacing: f64) -> Result<Vec<Point2>> {
    let steps = |len: f64, axis: &str| -> Result<usize> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got {spacing}")));
        }
        let n = (len / spacing).round();
        if ((n * spacing - len) / len).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "grid spacing {spacing} mm does not tile the {len} mm {axis} side"
            )));
        }
        Ok(n as usize)
    };
    let nx = steps(geometry.width, "width")?;
    let ny = steps(geometry.height, "height")?;
    let mut points = Vec::with_capacity((nx + 1) * (ny + 1));
    for iy in 0..=ny {
        for ix in 0..=nx {
            // Last row/column pinned to the edge so rounding never leaves
            // the rectangle.
            let x = if ix == nx { geometry.width } else { ix as f64 * spacing };
            let y = if iy == ny { geometry.height } else { iy as f64 * spacing };
            points.push(Point2::new(x, y));
        }
    }
    Ok(points)
}

/// Every lattice point once per repeat, each repeat in a fresh seeded
/// random order.
pub fn grid_protocol(geometry: &SensorGeometry, spec: &ProtocolSpec) -> Result<Vec<Indentation>> {
    if spec.kind != ProtocolKind::Grid {
        return Err(Error::Config("grid_protocol called with a non-grid spec".into()));
    }
    check_depth(geometry, spec.depth)?;
    let lattice = grid_points(geometry, spec.spacing)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(lattice.len() * spec.repeats);
    for _ in 0..spec.repeats {
        let mut order = lattice.clone();
        order.shuffle(&mut rng);
        out.extend(order.into_iter().map(|p| Indentation::new(p, spec.depth)));
    }
    Ok(out)
}

pub fn random_protocol(geometry: &SensorGeometry, spec: &ProtocolSpec) -> Result<Vec<Indentation>> {
    if spec.kind != ProtocolKind::Random {
        return Err(Error::Config("random_protocol called with a non-random spec".into()));
    }
    if spec.count == 0 {
        return Err(Error::Config("random protocol count must be positive".into()));
    }
    check_depth(geometry, spec.depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.count * spec.repeats.max(1);
    Ok((0..total)
        .map(|_| {
            let x = rng.random_range(0.0..=geometry.width);
            let y = rng.random_range(0.0..=geometry.height);
            Indentation::new(Point2::new(x, y), spec.depth)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSource {
    /// Resistance changes straight from the lattice solve.
    Ideal,
    /// Resistance changes recovered from emulated ADC counts.
    Circuit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<LatticeModel>,
    pub source: FeatureSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitConfig>,
    /// Ohms for ideal features, volts for circuit features.
    pub noise_sd: f64,
    pub noise_seed: u64,
    #[serde(default)]
    pub saturated_features: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl Provenance {
    pub fn bare(source: FeatureSource) -> Self {
        Provenance {
            protocol: None,
            model: None,
            source,
            circuit: None,
            noise_sd: 0.0,
            noise_seed: 0,
            saturated_features: 0,
            config_hash: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub geometry: SensorGeometry,
    pub records: Vec<IndentationRecord>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn new(geometry: SensorGeometry, records: Vec<IndentationRecord>, provenance: Provenance) -> Result<Self> {
        geometry.validate()?;
        let pairs = geometry.pair_count();
        for (i, r) in records.iter().enumerate() {
            if r.dr.len() != pairs {
                return Err(Error::LengthMismatch {
                    expected: pairs,
                    actual: r.dr.len(),
                });
            }
            r.indentation
                .validate(&geometry)
                .map_err(|e| Error::Domain(format!("record {i}: {e}")))?;
        }
        Ok(Dataset {
            geometry,
            records,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn feature_len(&self) -> usize {
        self.geometry.pair_count()
    }

    /// Dataset over a subset of records, keeping geometry and provenance.
    pub fn with_records(&self, records: Vec<IndentationRecord>) -> Dataset {
        Dataset {
            geometry: self.geometry.clone(),
            records,
            provenance: self.provenance.clone(),
        }
    }

    /// Splits a multi-repeat grid collection back into its repeats.
    pub fn split_repeats(&self) -> Result<Vec<Dataset>> {
        let repeats = match &self.provenance.protocol {
            Some(p) if p.kind == ProtocolKind::Grid => p.repeats,
            _ => return Err(Error::Shape("dataset was not collected with a grid protocol".into())),
        };
        if repeats == 0 || !self.records.len().is_multiple_of(repeats) {
            return Err(Error::Shape(format!(
                "{} records do not divide into {repeats} repeats",
                self.records.len()
            )));
        }
        let chunk = self.records.len() / repeats;
        Ok(self
            .records
            .chunks(chunk)
            .map(|c| {
                let mut d = self.with_records(c.to_vec());
                if let Some(p) = d.provenance.protocol.as_mut() {
                    p.repeats = 1;
                }
                d
            })
            .collect())
    }
}

/// How dr features are produced during collection.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectOptions {
    pub source: FeatureSource,
    pub circuit: Option<CircuitConfig>,
    pub noise_sd: f64,
    pub noise_seed: u64,
}

impl CollectOptions {
    pub fn ideal(noise_sd: f64, noise_seed: u64) -> Self {
        CollectOptions {
            source: FeatureSource::Ideal,
            circuit: None,
            noise_sd,
            noise_seed,
        }
    }

    pub fn circuit(circuit: CircuitConfig, noise_sd: f64, noise_seed: u64) -> Self {
        CollectOptions {
            source: FeatureSource::Circuit,
            circuit: Some(circuit),
            noise_sd,
            noise_seed,
        }
    }
}

/// Default ideal-feature noise: 1% of the median per-pair resistance change
/// for a centre indentation at `depth`.
pub fn default_ideal_noise(sim: &Simulator, depth: f64) -> Result<f64> {
    let rec = sim.simulate_record(&Indentation::new(sim.geometry().center(), depth))?;
    let mut mags: Vec<f64> = rec.dr.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let n = mags.len();
    let median = if n % 2 == 1 {
        mags[n / 2]
    } else {
        0.5 * (mags[n / 2 - 1] + mags[n / 2])
    };
    Ok(0.01 * median)
}

/// Runs `protocol` through the simulator and measurement path.
pub fn collect(protocol: &[Indentation], sim: &Simulator, options: &CollectOptions) -> Result<Dataset> {
    if !(options.noise_sd.is_finite() && options.noise_sd >= 0.0) {
        return Err(Error::Domain(format!(
            "noise_sd must be non-negative, got {}",
            options.noise_sd
        )));
    }
    let geometry = sim.geometry().clone();
    let loaded: Vec<Result<Vec<f64>>> =
        crate::par::map_ordered(protocol, |ind| sim.indented_resistances(ind));
    let rest = sim.rest_resistances();

    let mut saturated = 0;
    let mut records = Vec::with_capacity(protocol.len());
    match options.source {
        FeatureSource::Ideal => {
            let mut rng = ChaCha8Rng::seed_from_u64(options.noise_seed);
            let noise = (options.noise_sd > 0.0)
                .then(|| Normal::new(0.0, options.noise_sd))
                .transpose()
                .map_err(|e| Error::Domain(e.to_string()))?;
            for (ind, r) in protocol.iter().zip(loaded) {
                let r = r?;
                let dr = r
                    .iter()
                    .zip(rest)
                    .map(|(a, b)| a - b + noise.as_ref().map_or(0.0, |n| n.sample(&mut rng)))
                    .collect();
                records.push(IndentationRecord::new(&geometry, *ind, dr)?);
            }
        }
        FeatureSource::Circuit => {
            let cfg = options
                .circuit
                .as_ref()
                .ok_or_else(|| Error::Config("circuit feature source requires a circuit config".into()))?;
            let circuit = cfg.resolve(rest)?;
            let baselines = circuit.capture_baseline(rest)?;
            let mut scanner = Scanner::new(circuit, baselines, options.noise_sd, options.noise_seed)?;
            for (ind, r) in protocol.iter().zip(loaded) {
                let r = r?;
                // Each location is read at the surface and at depth.
                let at_rest = circuit.counts_to_features(&scanner.scan(rest)?)?;
                let at_depth = circuit.counts_to_features(&scanner.scan(&r)?)?;
                let dr = at_depth
                    .iter()
                    .zip(&at_rest)
                    .map(|(d, z)| {
                        if d.saturated || z.saturated {
                            saturated += 1;
                        }
                        d.dr - z.dr
                    })
                    .collect();
                records.push(IndentationRecord::new(&geometry, *ind, dr)?);
            }
        }
    }
    let provenance = Provenance {
        protocol: None,
        model: Some(sim.model().clone()),
        source: options.source,
        circuit: options.circuit.clone(),
        noise_sd: options.noise_sd,
        noise_seed: options.noise_seed,
        saturated_features: saturated,
        config_hash: None,
    };
    Dataset::new(geometry, records, provenance)
}

/// Generates the protocol and collects it, recording the protocol in the
/// provenance.
pub fn collect_protocol(spec: &ProtocolSpec, sim: &Simulator, options: &CollectOptions) -> Result<Dataset> {
    let protocol = spec.generate(sim.geometry())?;
    let mut ds = collect(&protocol, sim, options)?;
    ds.provenance.protocol = Some(spec.clone());
    Ok(ds)
}

/// Frame stream the switching matrix would deliver for `protocol`: a rest
/// frame followed by a loaded frame at every location.
pub fn scan_protocol(
    protocol: &[Indentation],
    sim: &Simulator,
    circuit: &CircuitConfig,
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<FrameLine>> {
    let rest = sim.rest_resistances();
    let resolved = circuit.resolve(rest)?;
    let baselines = resolved.capture_baseline(rest)?;
    let mut scanner = Scanner::new(resolved, baselines, noise_sd, seed)?;
    let mut lines = Vec::with_capacity(2 * protocol.len());
    for ind in protocol {
        let loaded = sim.indented_resistances(ind)?;
        for r in [rest, loaded.as_slice()] {
            let frame = scanner.scan(r)?;
            lines.push(scanner.frame_line(&frame)?);
        }
    }
    Ok(lines)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetadataLine {
    schema_version: u32,
    geometry: SensorGeometry,
    record_count: usize,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    x_mm: f64,
    y_mm: f64,
    depth_mm: f64,
    dr: Vec<f64>,
}

pub fn write_dataset<W: Write>(dataset: &Dataset, mut w: W) -> std::io::Result<()> {
    let meta = MetadataLine {
        schema_version: SCHEMA_VERSION,
        geometry: dataset.geometry.clone(),
        record_count: dataset.records.len(),
        provenance: dataset.provenance.clone(),
    };
    serde_json::to_writer(&mut w, &meta)?;
    w.write_all(b"\n")?;
    for r in &dataset.records {
        let line = RecordLine {
            x_mm: r.indentation.location.x,
            y_mm: r.indentation.location.y,
            depth_mm: r.indentation.depth,
            dr: r.dr.clone(),
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn save(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset(dataset, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_dataset<R: BufRead>(reader: R, path: &Path) -> Result<Dataset> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = reader.lines().enumerate();
    let meta: MetadataLine = match lines.next() {
        Some((_, Ok(text))) => {
            let version: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| parse_err(1, format!("metadata: {e}")))?;
            match version.get("schema_version").and_then(|v| v.as_u64()) {
                Some(v) if v == u64::from(SCHEMA_VERSION) => {}
                Some(v) => return Err(parse_err(1, format!("unsupported schema_version {v}"))),
                None => return Err(parse_err(1, "metadata line lacks schema_version".into())),
            }
            serde_json::from_value(version).map_err(|e| parse_err(1, format!("metadata: {e}")))?
        }
        Some((_, Err(e))) => return Err(Error::io(path, e)),
        None => return Err(parse_err(1, "empty file".into())),
    };
    meta.geometry
        .validate()
        .map_err(|e| parse_err(1, e.to_string()))?;

    let mut records = Vec::with_capacity(meta.record_count);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let text = line.map_err(|e| Error::io(path, e))?;
        if text.trim().is_empty() {
            continue;
        }
        let r: RecordLine = serde_json::from_str(&text).map_err(|e| parse_err(lineno, e.to_string()))?;
        let ind = Indentation::new(Point2::new(r.x_mm, r.y_mm), r.depth_mm);
        let rec = IndentationRecord::new(&meta.geometry, ind, r.dr).map_err(|e| parse_err(lineno, e.to_string()))?;
        records.push(rec);
    }
    if records.len() != meta.record_count {
        return Err(parse_err(
            records.len() + 2,
            format!(
                "expected {} records, found {} (file truncated?)",
                meta.record_count,
                records.len()
            ),
        ));
    }
    Dataset::new(meta.geometry, records, meta.provenance)
}

pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(BufReader::new(file), path)
}

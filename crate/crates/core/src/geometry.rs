//! Shared domain types: sensor geometry, electrode pairs, indentations and
//! the per-indentation measurement record.
//!
//! Coordinates are in millimetres with the origin at one corner of the
//! effective sensing rectangle, `x` along the long side and `y` along the
//! short side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Effective sensing area of the sample plus the lead attachment points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorGeometry {
    pub width: f64,
    pub height: f64,
    pub thickness: f64,
    pub electrodes: Vec<Point2>,
}

impl Default for SensorGeometry {
    fn default() -> Self {
        SensorGeometry::with_corner_electrodes(16.0, 10.0, 6.0)
    }
}

impl SensorGeometry {
    /// Rectangle with one electrode on each corner, ordered
    /// `(0,0), (w,0), (0,h), (w,h)`.
    pub fn with_corner_electrodes(width: f64, height: f64, thickness: f64) -> Self {
        SensorGeometry {
            width,
            height,
            thickness,
            electrodes: vec![
                Point2::new(0.0, 0.0),
                Point2::new(width, 0.0),
                Point2::new(0.0, height),
                Point2::new(width, height),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("width", self.width),
            ("height", self.height),
            ("thickness", self.thickness),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("geometry.{name} must be positive, got {v}")));
            }
        }
        if self.electrodes.len() < 2 {
            return Err(Error::Config(format!(
                "geometry.electrodes needs at least 2 entries, got {}",
                self.electrodes.len()
            )));
        }
        for (i, e) in self.electrodes.iter().enumerate() {
            if !e.is_finite() || !self.contains(e) {
                return Err(Error::Config(format!(
                    "geometry.electrodes[{i}] = ({}, {}) lies outside the sensor",
                    e.x, e.y
                )));
            }
            if self.electrodes[..i].iter().any(|o| o == e) {
                return Err(Error::Config(format!(
                    "geometry.electrodes[{i}] duplicates an earlier electrode"
                )));
            }
        }
        Ok(())
    }

    /// Inclusive point-in-rectangle test.
    pub fn contains(&self, p: &Point2) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.width / 2.0, self.height / 2.0)
    }

    pub fn electrode_count(&self) -> usize {
        self.electrodes.len()
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.electrodes.len())
    }

    pub fn pairs(&self) -> Vec<ElectrodePair> {
        enumerate_pairs(self.electrodes.len())
    }
}

/// Unordered electrode pair stored canonically with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElectrodePair {
    a: usize,
    b: usize,
}

impl ElectrodePair {
    /// Canonicalizes the order; returns `None` when both ends coincide.
    pub fn new(i: usize, j: usize) -> Option<Self> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(ElectrodePair { a: i, b: j }),
            std::cmp::Ordering::Greater => Some(ElectrodePair { a: j, b: i }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All unordered pairs of `n` electrodes in lexicographic `(a, b)` order.
pub fn enumerate_pairs(n: usize) -> Vec<ElectrodePair> {
    let mut pairs = Vec::with_capacity(pair_count(n));
    for a in 0..n {
        for b in (a + 1)..n {
            pairs.push(ElectrodePair { a, b });
        }
    }
    pairs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Indentation {
    pub location: Point2,
    pub depth: f64,
}

impl Indentation {
    pub fn new(location: Point2, depth: f64) -> Self {
        Indentation { location, depth }
    }

    pub fn validate(&self, geometry: &SensorGeometry) -> Result<()> {
        if !self.location.is_finite() || !geometry.contains(&self.location) {
            return Err(Error::Domain(format!(
                "indentation at ({}, {}) is outside the {}x{} mm sensor",
                self.location.x, self.location.y, geometry.width, geometry.height
            )));
        }
        if !(0.0..=geometry.thickness).contains(&self.depth) {
            return Err(Error::Range {
                value: self.depth,
                min: 0.0,
                max: geometry.thickness,
            });
        }
        Ok(())
    }
}

/// One labelled sample: where and how deep the sensor was pressed, and the
/// resistance change (ohms) seen on every canonical electrode pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndentationRecord {
    pub indentation: Indentation,
    pub dr: Vec<f64>,
}

impl IndentationRecord {
    pub fn new(geometry: &SensorGeometry, indentation: Indentation, dr: Vec<f64>) -> Result<Self> {
        let expected = geometry.pair_count();
        if dr.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: dr.len(),
            });
        }
        if let Some(k) = dr.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("dr[{k}] is not finite")));
        }
        indentation.validate(geometry)?;
        Ok(IndentationRecord { indentation, dr })
    }

    pub fn location(&self) -> Point2 {
        self.indentation.location
    }
}

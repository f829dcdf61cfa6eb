//! Baselines, localization error statistics and figure-data export.
//!
//! Exported file schemas:
//!
//! * vector field CSV: `truth_x,truth_y,pred_x,pred_y,err_mm`, one row per
//!   test point, values in mm written at full round-trip precision;
//! * heatmap CSV: header `y_mm,<x_0>,<x_1>,…`, then one row per lattice
//!   row in ascending `y`, first column the row's `y`, remaining columns the
//!   error magnitude at each `x`;
//! * SVG renderings of both, self-contained, with the canvas aspect equal to
//!   the sensor aspect.

use std::cell::RefCell;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{Point2, SensorGeometry};
use crate::learn::Predictor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub truth: Point2,
    pub predicted: Point2,
    pub error: f64,
}

impl PointError {
    pub fn new(truth: Point2, predicted: Point2) -> Self {
        PointError {
            truth,
            predicted,
            error: truth.distance(&predicted),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub median: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
    pub per_point: Vec<PointError>,
}

impl ErrorStats {
    pub fn from_points(per_point: Vec<PointError>) -> Result<Self> {
        if per_point.is_empty() {
            return Err(Error::Domain("cannot summarize an empty test set".into()));
        }
        let mut errs: Vec<f64> = per_point.iter().map(|p| p.error).collect();
        let (median, mean, std_dev) = summarize(&mut errs);
        Ok(ErrorStats {
            median,
            mean,
            std_dev,
            per_point,
        })
    }
}

/// Median (midpoint of the central pair for even counts), mean and
/// population standard deviation. Sorts `values` in place.
pub fn summarize(values: &mut [f64]) -> (f64, f64, f64) {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    };
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    (median, mean, var.sqrt())
}

pub fn evaluate(predictor: &dyn Predictor, test: &Dataset) -> Result<ErrorStats> {
    if test.is_empty() {
        return Err(Error::Domain("test set is empty".into()));
    }
    if let Some(p) = predictor.feature_len() {
        if p != test.feature_len() {
            return Err(Error::LengthMismatch {
                expected: p,
                actual: test.feature_len(),
            });
        }
    }
    let per_point = test
        .records
        .iter()
        .map(|r| Ok(PointError::new(r.location(), predictor.predict(&r.dr)?)))
        .collect::<Result<Vec<_>>>()?;
    ErrorStats::from_points(per_point)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    Center,
    Random,
}

/// Feature-blind predictor. The random variant draws a fresh uniform
/// location on every call from a generator seeded at construction.
#[derive(Debug)]
pub struct Baseline {
    kind: BaselineKind,
    geometry: SensorGeometry,
    seed: u64,
    rng: RefCell<ChaCha8Rng>,
}

impl Baseline {
    pub fn center(geometry: SensorGeometry) -> Self {
        Baseline::new(BaselineKind::Center, geometry, 0)
    }

    pub fn random(geometry: SensorGeometry, seed: u64) -> Self {
        Baseline::new(BaselineKind::Random, geometry, seed)
    }

    pub fn new(kind: BaselineKind, geometry: SensorGeometry, seed: u64) -> Self {
        Baseline {
            kind,
            geometry,
            seed,
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    pub fn kind(&self) -> BaselineKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn baseline_predict(&self) -> Point2 {
        match self.kind {
            BaselineKind::Center => self.geometry.center(),
            BaselineKind::Random => {
                let mut rng = self.rng.borrow_mut();
                let x = rng.random_range(0.0..=self.geometry.width);
                let y = rng.random_range(0.0..=self.geometry.height);
                Point2::new(x, y)
            }
        }
    }
}

impl Predictor for Baseline {
    fn predict(&self, _features: &[f64]) -> Result<Point2> {
        Ok(self.baseline_predict())
    }

    fn feature_len(&self) -> Option<usize> {
        None
    }
}

/// Training set from every grid except `index`, which becomes the test set.
pub fn leave_one_grid_out(grids: &[Dataset], index: usize) -> Result<(Dataset, Dataset)> {
    if grids.len() < 2 {
        return Err(Error::Domain(format!("need at least 2 grids, got {}", grids.len())));
    }
    if index >= grids.len() {
        return Err(Error::Range {
            value: index as f64,
            min: 0.0,
            max: (grids.len() - 1) as f64,
        });
    }
    let records = grids
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .flat_map(|(_, g)| g.records.iter().cloned())
        .collect();
    Ok((grids[0].with_records(records), grids[index].clone()))
}

fn fmt_f64(v: f64) -> String {
    // `Display` on f64 prints the shortest string that parses back exactly.
    format!("{v}")
}

pub const VECTOR_FIELD_HEADER: &str = "truth_x,truth_y,pred_x,pred_y,err_mm";

pub fn vector_field_csv(stats: &ErrorStats) -> String {
    let mut out = String::from(VECTOR_FIELD_HEADER);
    out.push('\n');
    for p in &stats.per_point {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(p.truth.x),
            fmt_f64(p.truth.y),
            fmt_f64(p.predicted.x),
            fmt_f64(p.predicted.y),
            fmt_f64(p.error)
        );
    }
    out
}

pub fn parse_vector_field_csv(text: &str) -> Result<Vec<PointError>> {
    let path = Path::new("<vector field>");
    let skipped = text.lines().take_while(|l| l.starts_with('#')).count();
    let mut lines = text.lines().skip(skipped);
    if lines.next() != Some(VECTOR_FIELD_HEADER) {
        return Err(Error::Parse {
            path: path.into(),
            line: skipped + 1,
            message: "unexpected header".into(),
        });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cols: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            match cols {
                Ok(c) if c.len() == 5 => Ok(PointError {
                    truth: Point2::new(c[0], c[1]),
                    predicted: Point2::new(c[2], c[3]),
                    error: c[4],
                }),
                _ => Err(Error::Parse {
                    path: path.into(),
                    line: skipped + i + 2,
                    message: format!("malformed row {line:?}"),
                }),
            }
        })
        .collect()
}

const SVG_SCALE: f64 = 40.0;

struct Canvas {
    geometry: SensorGeometry,
    margin_x: f64,
    margin_y: f64,
}

impl Canvas {
    fn new(geometry: &SensorGeometry) -> Self {
        Canvas {
            geometry: geometry.clone(),
            margin_x: 0.05 * geometry.width,
            margin_y: 0.05 * geometry.height,
        }
    }

    fn size(&self) -> (f64, f64) {
        (
            (self.geometry.width + 2.0 * self.margin_x) * SVG_SCALE,
            (self.geometry.height + 2.0 * self.margin_y) * SVG_SCALE,
        )
    }

    /// Sensor mm to canvas px with y pointing up.
    fn map(&self, p: Point2) -> (f64, f64) {
        (
            (p.x + self.margin_x) * SVG_SCALE,
            (self.geometry.height - p.y + self.margin_y) * SVG_SCALE,
        )
    }

    fn open(&self, out: &mut String, title: &str) {
        let (w, h) = self.size();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
        );
        let _ = writeln!(out, "<title>{title}</title>");
    }

    fn outline(&self, out: &mut String) {
        let (x0, y0) = self.map(Point2::new(0.0, self.geometry.height));
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333" stroke-width="1.5"/>"##,
            self.geometry.width * SVG_SCALE,
            self.geometry.height * SVG_SCALE
        );
    }
}

/// Arrows from ground truth to prediction over the sensor outline.
pub fn vector_field_svg(stats: &ErrorStats, geometry: &SensorGeometry, title: &str) -> String {
    let c = Canvas::new(geometry);
    let mut out = String::new();
    c.open(&mut out, title);
    out.push_str(
        r##"<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker></defs>"##,
    );
    out.push('\n');
    c.outline(&mut out);
    for e in &geometry.electrodes {
        let (x, y) = c.map(*e);
        let _ = writeln!(out, r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="#b8860b"/>"##, x - 4.0, y - 4.0);
    }
    for p in &stats.per_point {
        let (x0, y0) = c.map(p.truth);
        let (x1, y1) = c.map(p.predicted);
        let _ = writeln!(out, r##"<circle cx="{x0:.2}" cy="{y0:.2}" r="2.5" fill="#2c3e50"/>"##);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#c0392b" stroke-width="1.5" marker-end="url(#head)"/>"##
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Prefixes CSV text with a `# note` line.
fn annotate_csv(csv: String, note: Option<&str>) -> String {
    match note {
        Some(n) => format!("# {n}\n{csv}"),
        None => csv,
    }
}

/// Inserts an XML comment after the opening `<svg>` line.
fn annotate_svg(svg: String, note: Option<&str>) -> String {
    match (note, svg.find('\n')) {
        (Some(n), Some(k)) => format!("{}<!-- {} -->\n{}", &svg[..=k], n.replace("--", "- -"), &svg[k + 1..]),
        _ => svg,
    }
}

/// Writes the vector-field CSV and optionally its SVG rendering. `note`
/// becomes a leading comment in both files.
pub fn export_vector_field(
    stats: &ErrorStats,
    geometry: &SensorGeometry,
    csv_path: &Path,
    svg_path: Option<&Path>,
    note: Option<&str>,
) -> Result<()> {
    fs::write(csv_path, annotate_csv(vector_field_csv(stats), note)).map_err(|e| Error::io(csv_path, e))?;
    if let Some(svg) = svg_path {
        let body = vector_field_svg(stats, geometry, "Localization error vectors");
        fs::write(svg, annotate_svg(body, note)).map_err(|e| Error::io(svg, e))?;
    }
    Ok(())
}

/// Per-point errors arranged on the test lattice; `values[row][col]` is the
/// error at `(xs[col], ys[row])`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn distinct_sorted(mut v: Vec<f64>, tol: f64) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
    v
}

fn check_uniform(axis: &[f64], name: &str) -> Result<()> {
    if axis.len() < 2 {
        return Ok(());
    }
    let step = axis[1] - axis[0];
    for w in axis.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-6 * step.abs().max(1.0) {
            return Err(Error::Shape(format!("{name} coordinates are not evenly spaced")));
        }
    }
    Ok(())
}

impl ErrorGrid {
    /// Validates that the test points form a complete regular lattice with
    /// each cell visited exactly once.
    pub fn from_stats(stats: &ErrorStats) -> Result<Self> {
        let tol = 1e-9;
        let xs = distinct_sorted(stats.per_point.iter().map(|p| p.truth.x).collect(), tol);
        let ys = distinct_sorted(stats.per_point.iter().map(|p| p.truth.y).collect(), tol);
        check_uniform(&xs, "x")?;
        check_uniform(&ys, "y")?;
        if xs.len() * ys.len() != stats.per_point.len() {
            return Err(Error::Shape(format!(
                "{} points do not form a {}x{} lattice",
                stats.per_point.len(),
                xs.len(),
                ys.len()
            )));
        }
        let find = |axis: &[f64], v: f64| axis.iter().position(|a| (a - v).abs() <= tol);
        let mut values = vec![vec![f64::NAN; xs.len()]; ys.len()];
        for p in &stats.per_point {
            let (Some(c), Some(r)) = (find(&xs, p.truth.x), find(&ys, p.truth.y)) else {
                return Err(Error::Shape("point off the lattice".into()));
            };
            if !values[r][c].is_nan() {
                return Err(Error::Shape(format!(
                    "lattice cell ({}, {}) appears more than once",
                    xs[c], ys[r]
                )));
            }
            values[r][c] = p.error;
        }
        Ok(ErrorGrid { xs, ys, values })
    }

    pub fn rows(&self) -> usize {
        self.ys.len()
    }

    pub fn columns(&self) -> usize {
        self.xs.len()
    }

    /// Mean error over the outer ring of cells and over the rest.
    pub fn boundary_interior_means(&self) -> (f64, Option<f64>) {
        let (mut b, mut nb, mut i, mut ni) = (0.0, 0usize, 0.0, 0usize);
        for (r, row) in self.values.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let edge = r == 0 || c == 0 || r + 1 == self.rows() || c + 1 == self.columns();
                if edge {
                    b += v;
                    nb += 1;
                } else {
                    i += v;
                    ni += 1;
                }
            }
        }
        (b / nb as f64, (ni > 0).then(|| i / ni as f64))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("y_mm");
        for x in &self.xs {
            let _ = write!(out, ",{}", fmt_f64(*x));
        }
        out.push('\n');
        for (y, row) in self.ys.iter().zip(&self.values) {
            out.push_str(&fmt_f64(*y));
            for v in row {
                let _ = write!(out, ",{}", fmt_f64(*v));
            }
            out.push('\n');
        }
        out
    }

    /// One rectangle per lattice cell, coloured by [`ramp`] on
    /// `[0, max error]`.
    pub fn to_svg(&self, geometry: &SensorGeometry, title: &str) -> String {
        let c = Canvas::new(geometry);
        let max = self.values.iter().flatten().copied().fold(0.0, f64::max);
        let half = |axis: &[f64]| if axis.len() > 1 { 0.5 * (axis[1] - axis[0]) } else { 0.5 };
        let (hx, hy) = (half(&self.xs), half(&self.ys));
        let mut out = String::new();
        c.open(&mut out, title);
        for (y, row) in self.ys.iter().zip(&self.values) {
            for (x, v) in self.xs.iter().zip(row) {
                let (px, py) = c.map(Point2::new(x - hx, y + hy));
                let t = if max > 0.0 { v / max } else { 0.0 };
                let _ = writeln!(
                    out,
                    r#"<rect x="{px:.2}" y="{py:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>({x}, {y}): {v:.3} mm</title></rect>"#,
                    2.0 * hx * SVG_SCALE,
                    2.0 * hy * SVG_SCALE,
                    ramp(t)
                );
            }
        }
        c.outline(&mut out);
        let _ = writeln!(
            out,
            r##"<text x="4" y="14" font-family="sans-serif" font-size="12" fill="#000">max {max:.2} mm</text>"##
        );
        out.push_str("</svg>\n");
        out
    }
}

const RAMP_STOPS: [(u8, u8, u8); 5] = [
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
];

/// Viridis-like colour ramp sampled at five stops and linearly
/// interpolated; perceived lightness increases monotonically with `t`.
pub fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (RAMP_STOPS.len() - 1) as f64;
    let k = (t.floor() as usize).min(RAMP_STOPS.len() - 2);
    let f = t - k as f64;
    let (a, b) = (RAMP_STOPS[k], RAMP_STOPS[k + 1]);
    let lerp = |x: u8, y: u8| (f64::from(x) + (f64::from(y) - f64::from(x)) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(a.0, b.0), lerp(a.1, b.1), lerp(a.2, b.2))
}

pub fn export_heatmap(
    stats: &ErrorStats,
    geometry: &SensorGeometry,
    csv_path: &Path,
    svg_path: Option<&Path>,
    note: Option<&str>,
) -> Result<ErrorGrid> {
    let grid = ErrorGrid::from_stats(stats)?;
    fs::write(csv_path, annotate_csv(grid.to_csv(), note)).map_err(|e| Error::io(csv_path, e))?;
    if let Some(svg) = svg_path {
        let body = grid.to_svg(geometry, "Localization error magnitude");
        fs::write(svg, annotate_svg(body, note)).map_err(|e| Error::io(svg, e))?;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FeatureSource, Provenance};
    use crate::geometry::{Indentation, IndentationRecord};

    fn stats_from(points: &[(Point2, Point2)]) -> ErrorStats {
        ErrorStats::from_points(points.iter().map(|&(t, p)| PointError::new(t, p)).collect()).unwrap()
    }

    fn test_set(points: &[Point2]) -> Dataset {
        let g = SensorGeometry::default();
        let records = points
            .iter()
            .map(|p| IndentationRecord::new(&g, Indentation::new(*p, 3.0), vec![p.x, p.y, 0.0, 0.0, 0.0, 0.0]).unwrap())
            .collect();
        Dataset::new(g, records, Provenance::bare(FeatureSource::Ideal)).unwrap()
    }

    struct Oracle;
    impl Predictor for Oracle {
        fn predict(&self, f: &[f64]) -> Result<Point2> {
            Ok(Point2::new(f[0], f[1]))
        }
        fn feature_len(&self) -> Option<usize> {
            Some(6)
        }
    }

    #[test]
    fn perfect_predictor_scores_zero() {
        let ds = test_set(&[Point2::new(1.0, 2.0), Point2::new(5.0, 5.0), Point2::new(16.0, 0.0)]);
        let s = evaluate(&Oracle, &ds).unwrap();
        assert_eq!((s.median, s.mean, s.std_dev), (0.0, 0.0, 0.0));
    }

    #[test]
    fn summary_arithmetic() {
        let (med, mean, sd) = summarize(&mut [3.0, 1.0, 2.0]);
        assert_eq!((med, mean), (2.0, 2.0));
        assert!((sd - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let (med, _, _) = summarize(&mut [4.0, 1.0, 2.0, 3.0]);
        assert_eq!(med, 2.5);
        assert!(ErrorStats::from_points(vec![]).is_err());
    }

    #[test]
    fn empty_test_set_is_an_error() {
        let ds = test_set(&[]);
        assert!(evaluate(&Oracle, &ds).is_err());
    }

    #[test]
    fn center_baseline_matches_distance_to_center() {
        let pts: Vec<Point2> = (0..30).map(|i| Point2::new((i % 9) as f64 * 2.0, (i % 6) as f64 * 2.0)).collect();
        let ds = test_set(&pts);
        let s = evaluate(&Baseline::center(SensorGeometry::default()), &ds).unwrap();
        for (p, e) in pts.iter().zip(&s.per_point) {
            assert_eq!(e.predicted, Point2::new(8.0, 5.0));
            assert_eq!(e.error, (p.x - 8.0).hypot(p.y - 5.0));
        }
    }

    #[test]
    fn random_baseline_is_in_bounds_and_reproducible() {
        let g = SensorGeometry::default();
        let b = Baseline::random(g.clone(), 42);
        let draws: Vec<Point2> = (0..500).map(|_| b.baseline_predict()).collect();
        assert!(draws.iter().all(|p| g.contains(p)));
        let again = Baseline::random(g, 42);
        assert_eq!(again.baseline_predict(), draws[0]);
    }

    #[test]
    fn leave_one_out_partitions_records() {
        let a = test_set(&[Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)]);
        let b = test_set(&[Point2::new(4.0, 0.0), Point2::new(6.0, 0.0)]);
        let c = test_set(&[Point2::new(8.0, 0.0)]);
        let grids = vec![a, b, c];
        let (train, test) = leave_one_grid_out(&grids, 1).unwrap();
        assert_eq!((train.len(), test.len()), (3, 2));
        assert_eq!(test, grids[1]);
        assert!(leave_one_grid_out(&grids, 3).is_err());
        assert!(leave_one_grid_out(&grids[..1], 0).is_err());
    }

    #[test]
    fn vector_field_rows_and_round_trip() {
        let s = stats_from(&[
            (Point2::new(1.0, 1.0), Point2::new(1.0, 1.0)),
            (Point2::new(0.1 + 0.2, 7.0), Point2::new(1.0 / 3.0, 2.0f64.sqrt())),
        ]);
        let csv = vector_field_csv(&s);
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().nth(1).unwrap(), "1,1,1,1,0");
        assert_eq!(parse_vector_field_csv(&csv).unwrap(), s.per_point);
        let noted = annotate_csv(csv, Some("config_hash=abc"));
        assert!(noted.starts_with("# config_hash=abc\n"));
        assert_eq!(parse_vector_field_csv(&noted).unwrap(), s.per_point);
    }

    #[test]
    fn svg_note_is_a_comment() {
        let g = SensorGeometry::default();
        let s = stats_from(&[(Point2::new(1.0, 1.0), Point2::new(2.0, 2.0))]);
        let svg = annotate_svg(vector_field_svg(&s, &g, "t"), Some("config_hash=abc"));
        assert_eq!(svg.lines().nth(1), Some("<!-- config_hash=abc -->"));
    }

    #[test]
    fn svg_canvas_keeps_sensor_aspect() {
        let g = SensorGeometry::default();
        let s = stats_from(&[(Point2::new(1.0, 1.0), Point2::new(2.0, 2.0))]);
        let svg = vector_field_svg(&s, &g, "t");
        assert!(svg.contains(r#"width="704.0" height="440.0""#), "{}", &svg[..200]);
        assert!((704.0f64 / 440.0 - 1.6).abs() < 1e-12);
    }

    #[test]
    fn heatmap_shape_and_uniform_field() {
        let pts: Vec<(Point2, Point2)> = crate::dataset::grid_points(&SensorGeometry::default(), 2.0)
            .unwrap()
            .into_iter()
            .map(|p| (p, Point2::new(p.x + 0.3, p.y - 0.4)))
            .collect();
        let s = stats_from(&pts);
        let grid = ErrorGrid::from_stats(&s).unwrap();
        assert_eq!((grid.rows(), grid.columns()), (6, 9));
        assert!(grid.values.iter().flatten().all(|&v| (v - 0.5).abs() < 1e-12));
        let csv = grid.to_csv();
        assert_eq!(csv.lines().count(), 7);
        assert_eq!(csv.lines().next().unwrap(), "y_mm,0,2,4,6,8,10,12,14,16");
        assert!(grid.to_svg(&SensorGeometry::default(), "h").matches("<rect").count() >= 54);
    }

    #[test]
    fn heatmap_rejects_non_lattice() {
        let s = stats_from(&[
            (Point2::new(0.0, 0.0), Point2::new(0.0, 0.0)),
            (Point2::new(2.0, 0.0), Point2::new(0.0, 0.0)),
            (Point2::new(0.0, 2.0), Point2::new(0.0, 0.0)),
        ]);
        assert!(matches!(ErrorGrid::from_stats(&s), Err(Error::Shape(_))));
        let s = stats_from(&[
            (Point2::new(0.0, 0.0), Point2::new(0.0, 0.0)),
            (Point2::new(1.0, 0.0), Point2::new(0.0, 0.0)),
            (Point2::new(3.0, 0.0), Point2::new(0.0, 0.0)),
        ]);
        assert!(matches!(ErrorGrid::from_stats(&s), Err(Error::Shape(_))));
    }

    #[test]
    fn ramp_is_monotone_in_lightness() {
        let luma = |hex: &str| {
            let v = u32::from_str_radix(&hex[1..], 16).unwrap();
            let (r, g, b) = ((v >> 16) & 255, (v >> 8) & 255, v & 255);
            0.2126 * r as f64 + 0.7152 * g as f64 + 0.0722 * b as f64
        };
        let samples: Vec<f64> = (0..=100).map(|i| luma(&ramp(i as f64 / 100.0))).collect();
        assert!(samples.windows(2).all(|w| w[1] >= w[0] - 1.0));
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
    }
}

//! Resistor-lattice surrogate for the piezoresistive sample.
//!
//! The sensing volume is discretized as a 4-connected grid of conductances.
//! An indentation compresses the material near the contact, which raises the
//! local resistance: each edge conductance `g0` becomes `g0 / (1 + α·s̄)`,
//! with `s̄` the mean strain at its endpoints. Electrode leads are ideal, so
//! each electrode is a single lattice node and pair resistances are
//! two-terminal effective resistances of the network.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ElectrodePair, Indentation, IndentationRecord, Point2, SensorGeometry};
use crate::solver::{BandedCholesky, SymmetricBanded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrainProfile {
    Gaussian,
    ParabolicCap,
}

impl StrainProfile {
    /// Radial shape `φ(u)` with `u = ρ / a`.
    pub fn shape(self, u: f64) -> f64 {
        match self {
            StrainProfile::Gaussian => (-0.5 * u * u).exp(),
            StrainProfile::ParabolicCap => (1.0 - u * u).max(0.0),
        }
    }
}

/// Parameters of the lattice surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeModel {
    pub geometry: SensorGeometry,
    /// Grid pitch in mm.
    pub node_spacing: f64,
    /// Per-edge conductance in siemens. When absent it is derived so the
    /// rest pair resistances straddle `rest_band_ohms`.
    pub base_conductance: Option<f64>,
    pub rest_band_ohms: [f64; 2],
    pub piezo_coefficient: f64,
    /// Indenter tip radius in mm.
    pub indenter_radius: f64,
    pub strain_profile: StrainProfile,
}

impl Default for LatticeModel {
    fn default() -> Self {
        LatticeModel {
            geometry: SensorGeometry::default(),
            node_spacing: 0.5,
            base_conductance: None,
            rest_band_ohms: [10e3, 100e3],
            piezo_coefficient: 1.5,
            indenter_radius: 3.0,
            strain_profile: StrainProfile::Gaussian,
        }
    }
}

impl LatticeModel {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        grid_divisions(&self.geometry, self.node_spacing)?;
        if let Some(g) = self.base_conductance {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::Config(format!(
                    "model.base_conductance must be positive, got {g}"
                )));
            }
        }
        let [lo, hi] = self.rest_band_ohms;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Config(format!(
                "model.rest_band_ohms must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if !(self.indenter_radius.is_finite() && self.indenter_radius > 0.0) {
            return Err(Error::Config("model.indenter_radius must be positive".into()));
        }
        if !self.piezo_coefficient.is_finite() {
            return Err(Error::Config("model.piezo_coefficient must be finite".into()));
        }
        // Strain is bounded by 1 (reached at full depth under the tip), so
        // positivity over all admissible indentations reduces to 1 + α > 0.
        if 1.0 + self.piezo_coefficient <= 0.0 {
            return Err(Error::Model(format!(
                "piezo_coefficient {} drives edge conductance non-positive at full depth",
                self.piezo_coefficient
            )));
        }
        Ok(())
    }

    /// Contact radius of the tip: spherical-cap chord radius, floored at the
    /// grid pitch. Past one tip radius the hemisphere is fully embedded and
    /// the footprint stays at the tip radius.
    pub fn contact_radius(&self, depth: f64) -> f64 {
        let r = self.indenter_radius;
        let d = depth.clamp(0.0, r);
        (2.0 * r * d - d * d).max(0.0).sqrt().max(self.node_spacing)
    }

    /// Dimensionless compressive strain at `p` caused by `ind`.
    pub fn strain_at(&self, ind: &Indentation, p: &Point2) -> f64 {
        if ind.depth <= 0.0 {
            return 0.0;
        }
        let a = self.contact_radius(ind.depth);
        let rho = ind.location.distance(p);
        (ind.depth / self.geometry.thickness) * self.strain_profile.shape(rho / a)
    }
}

fn grid_divisions(geometry: &SensorGeometry, spacing: f64) -> Result<(usize, usize)> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::Config(format!("node spacing must be positive, got {spacing}")));
    }
    let snap = |len: f64, axis: &str| -> Result<usize> {
        let n = (len / spacing).round();
        if n < 1.0 || ((n * spacing - len) / len).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "spacing {spacing} mm does not tile the {len} mm {axis} side"
            )));
        }
        Ok(n as usize)
    };
    Ok((snap(geometry.width, "width")?, snap(geometry.height, "height")?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Siemens.
    pub conductance: f64,
}

/// Weighted undirected graph of conductances with designated terminal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistorNetwork {
    node_count: usize,
    edges: Vec<Edge>,
    terminals: Vec<usize>,
}

impl ResistorNetwork {
    pub fn new(node_count: usize, edges: Vec<Edge>, terminals: Vec<usize>) -> Result<Self> {
        for (k, e) in edges.iter().enumerate() {
            if e.u >= node_count || e.v >= node_count || e.u == e.v {
                return Err(Error::Config(format!("edge {k} ({}, {}) is invalid", e.u, e.v)));
            }
            if !(e.conductance.is_finite() && e.conductance > 0.0) {
                return Err(Error::Model(format!(
                    "edge {k} conductance {} is not positive",
                    e.conductance
                )));
            }
        }
        if let Some(&t) = terminals.iter().find(|&&t| t >= node_count) {
            return Err(Error::Config(format!("terminal node {t} does not exist")));
        }
        Ok(ResistorNetwork {
            node_count,
            edges,
            terminals,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    count += 1;
                    stack.push(m);
                }
            }
        }
        count == self.node_count
    }

    /// Factorizes the Laplacian with `ground` removed.
    fn grounded_factor(&self, ground: usize) -> Result<BandedCholesky> {
        let reduce = |i: usize| if i > ground { i - 1 } else { i };
        let bw = self
            .edges
            .iter()
            .filter(|e| e.u != ground && e.v != ground)
            .map(|e| reduce(e.u).abs_diff(reduce(e.v)))
            .max()
            .unwrap_or(0);
        let mut lap = SymmetricBanded::zeros(self.node_count - 1, bw);
        for e in &self.edges {
            let g = e.conductance;
            match (e.u == ground, e.v == ground) {
                (false, false) => {
                    let (u, v) = (reduce(e.u), reduce(e.v));
                    lap.add(u, u, g);
                    lap.add(v, v, g);
                    lap.add(u, v, -g);
                }
                (true, false) => lap.add(reduce(e.v), reduce(e.v), g),
                (false, true) => lap.add(reduce(e.u), reduce(e.u), g),
                (true, true) => unreachable!("self loops rejected at construction"),
            }
        }
        lap.cholesky().map_err(|e| match e {
            Error::Solver(msg) => Error::Solver(format!(
                "grounded Laplacian is singular, network is likely disconnected ({msg})"
            )),
            other => other,
        })
    }

    fn resistance_with(&self, factor: &BandedCholesky, source: usize, ground: usize) -> f64 {
        let reduced = if source > ground { source - 1 } else { source };
        let mut rhs = vec![0.0; factor.dim()];
        rhs[reduced] = 1.0;
        factor.solve_in_place(&mut rhs);
        rhs[reduced]
    }

    /// Two-terminal effective resistance between nodes `source` and `sink`:
    /// unit current injected at `source`, `sink` grounded, potential at
    /// `source` returned.
    pub fn node_resistance(&self, source: usize, sink: usize) -> Result<f64> {
        if source >= self.node_count || sink >= self.node_count {
            return Err(Error::Config("node index out of range".into()));
        }
        if source == sink {
            return Ok(0.0);
        }
        let factor = self.grounded_factor(sink)?;
        Ok(self.resistance_with(&factor, source, sink))
    }

    /// Effective resistance between the terminals of `pair`.
    pub fn pair_resistance(&self, pair: ElectrodePair) -> Result<f64> {
        let (a, b) = self.terminal_nodes(pair)?;
        self.node_resistance(a, b)
    }

    /// Resistances for many pairs, sharing one factorization per distinct
    /// grounded terminal.
    pub fn pair_resistances(&self, pairs: &[ElectrodePair]) -> Result<Vec<f64>> {
        let mut by_ground: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (k, &pair) in pairs.iter().enumerate() {
            let (a, b) = self.terminal_nodes(pair)?;
            by_ground.entry(b).or_default().push((k, a));
        }
        let mut out = vec![0.0; pairs.len()];
        for (ground, sources) in by_ground {
            let factor = self.grounded_factor(ground)?;
            for (k, a) in sources {
                out[k] = if a == ground {
                    0.0
                } else {
                    self.resistance_with(&factor, a, ground)
                };
            }
        }
        Ok(out)
    }

    fn terminal_nodes(&self, pair: ElectrodePair) -> Result<(usize, usize)> {
        let get = |i: usize| {
            self.terminals
                .get(i)
                .copied()
                .ok_or_else(|| Error::Config(format!("electrode {i} has no terminal node")))
        };
        Ok((get(pair.a())?, get(pair.b())?))
    }

    fn with_conductances(&self, g: impl Fn(&Edge) -> f64) -> ResistorNetwork {
        ResistorNetwork {
            node_count: self.node_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    conductance: g(e),
                    ..*e
                })
                .collect(),
            terminals: self.terminals.clone(),
        }
    }
}

/// Grid discretization of the sensing area.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph {
    columns: usize,
    rows: usize,
    nodes: Vec<Point2>,
    network: ResistorNetwork,
}

impl LatticeGraph {
    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    /// Nodes per row (along x).
    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Nodes per column (along y).
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn network(&self) -> &ResistorNetwork {
        &self.network
    }

    pub fn electrode_nodes(&self) -> &[usize] {
        self.network.terminals()
    }

    pub fn pair_resistance(&self, pair: ElectrodePair) -> Result<f64> {
        self.network.pair_resistance(pair)
    }
}

/// Builds the 4-connected grid with every edge at `conductance`.
pub fn build_lattice_with(model: &LatticeModel, conductance: f64) -> Result<LatticeGraph> {
    model.geometry.validate()?;
    let (nx, ny) = grid_divisions(&model.geometry, model.node_spacing)?;
    let (columns, rows) = (nx + 1, ny + 1);
    let (dx, dy) = (model.geometry.width / nx as f64, model.geometry.height / ny as f64);
    let index = |ix: usize, iy: usize| iy * columns + ix;

    let mut nodes = Vec::with_capacity(columns * rows);
    for iy in 0..rows {
        for ix in 0..columns {
            nodes.push(Point2::new(ix as f64 * dx, iy as f64 * dy));
        }
    }
    let mut edges = Vec::with_capacity(nx * rows + ny * columns);
    for iy in 0..rows {
        for ix in 0..columns {
            if ix + 1 < columns {
                edges.push(Edge {
                    u: index(ix, iy),
                    v: index(ix + 1, iy),
                    conductance,
                });
            }
            if iy + 1 < rows {
                edges.push(Edge {
                    u: index(ix, iy),
                    v: index(ix, iy + 1),
                    conductance,
                });
            }
        }
    }
    let terminals = model
        .geometry
        .electrodes
        .iter()
        .map(|e| nearest_node(&nodes, e))
        .collect();
    Ok(LatticeGraph {
        columns,
        rows,
        nodes,
        network: ResistorNetwork::new(columns * rows, edges, terminals)?,
    })
}

fn nearest_node(nodes: &[Point2], p: &Point2) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, n) in nodes.iter().enumerate() {
        let d = n.distance(p);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Builds the lattice at the model's resolved base conductance.
pub fn build_lattice(model: &LatticeModel) -> Result<LatticeGraph> {
    let g = resolve_base_conductance(model)?;
    build_lattice_with(model, g)
}

/// Uses the configured conductance, or picks the one that centres the rest
/// pair resistances (geometric mean of min and max) in the rest band.
pub fn resolve_base_conductance(model: &LatticeModel) -> Result<f64> {
    model.validate()?;
    if let Some(g) = model.base_conductance {
        return Ok(g);
    }
    let unit = build_lattice_with(model, 1.0)?;
    let rest = unit.network.pair_resistances(&model.geometry.pairs())?;
    let (min, max) = min_max(&rest);
    let [lo, hi] = model.rest_band_ohms;
    if max / min > hi / lo {
        return Err(Error::Config(format!(
            "rest resistance spread {:.3} exceeds the band ratio {:.3}",
            max / min,
            hi / lo
        )));
    }
    Ok((min * max).sqrt() / (lo * hi).sqrt())
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Piezoresistive coupling law: compression raises edge resistance.
pub fn coupled_conductance(rest_conductance: f64, piezo_coefficient: f64, mean_strain: f64) -> f64 {
    rest_conductance / (1.0 + piezo_coefficient * mean_strain)
}

/// Copy of `graph` with every edge softened by the local strain of `ind`.
pub fn apply_indentation(graph: &LatticeGraph, model: &LatticeModel, ind: &Indentation) -> Result<LatticeGraph> {
    let alpha = model.piezo_coefficient;
    let strain: Vec<f64> = graph.nodes.iter().map(|p| model.strain_at(ind, p)).collect();
    let network = graph
        .network
        .with_conductances(|e| coupled_conductance(e.conductance, alpha, 0.5 * (strain[e.u] + strain[e.v])));
    if let Some(e) = network
        .edges
        .iter()
        .find(|e| !(e.conductance.is_finite() && e.conductance > 0.0))
    {
        return Err(Error::Model(format!(
            "edge ({}, {}) conductance became {}",
            e.u, e.v, e.conductance
        )));
    }
    Ok(LatticeGraph {
        network,
        ..graph.clone()
    })
}

/// Prepared forward model: validated parameters, the rest lattice and its
/// cached pair resistances.
#[derive(Debug, Clone)]
pub struct Simulator {
    model: LatticeModel,
    base_conductance: f64,
    rest: LatticeGraph,
    pairs: Vec<ElectrodePair>,
    rest_resistances: Vec<f64>,
}

impl Simulator {
    pub fn new(model: LatticeModel) -> Result<Self> {
        let base_conductance = resolve_base_conductance(&model)?;
        let rest = build_lattice_with(&model, base_conductance)?;
        if !rest.network.is_connected() {
            return Err(Error::Model("lattice is disconnected".into()));
        }
        let pairs = model.geometry.pairs();
        let rest_resistances = rest.network.pair_resistances(&pairs)?;
        Ok(Simulator {
            model,
            base_conductance,
            rest,
            pairs,
            rest_resistances,
        })
    }

    pub fn model(&self) -> &LatticeModel {
        &self.model
    }

    pub fn geometry(&self) -> &SensorGeometry {
        &self.model.geometry
    }

    pub fn base_conductance(&self) -> f64 {
        self.base_conductance
    }

    pub fn rest_graph(&self) -> &LatticeGraph {
        &self.rest
    }

    pub fn pairs(&self) -> &[ElectrodePair] {
        &self.pairs
    }

    pub fn rest_resistances(&self) -> &[f64] {
        &self.rest_resistances
    }

    /// Absolute pair resistances under `ind`.
    pub fn indented_resistances(&self, ind: &Indentation) -> Result<Vec<f64>> {
        ind.validate(self.geometry())?;
        if ind.depth == 0.0 || self.model.piezo_coefficient == 0.0 {
            return Ok(self.rest_resistances.clone());
        }
        let graph = apply_indentation(&self.rest, &self.model, ind)?;
        graph.network.pair_resistances(&self.pairs)
    }

    /// Per-pair resistance change between `ind.depth` and zero depth.
    pub fn simulate_record(&self, ind: &Indentation) -> Result<IndentationRecord> {
        let loaded = self.indented_resistances(ind)?;
        let dr = loaded
            .iter()
            .zip(&self.rest_resistances)
            .map(|(r, r0)| r - r0)
            .collect();
        IndentationRecord::new(self.geometry(), *ind, dr)
    }
}

/// Loading branch of the depth-to-force curve, piecewise linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadCurve {
    breakpoints: Vec<(f64, f64)>,
}

impl Default for LoadCurve {
    fn default() -> Self {
        LoadCurve {
            breakpoints: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0), (3.0, 6.0), (4.0, 10.0), (5.0, 16.0)],
        }
    }
}

impl LoadCurve {
    /// Breakpoints as `(depth mm, load N)`; must start at the origin with
    /// strictly increasing depth and non-decreasing load.
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.first() != Some(&(0.0, 0.0)) {
            return Err(Error::Config("load curve must start at (0, 0)".into()));
        }
        for w in breakpoints.windows(2) {
            if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 || !w[1].0.is_finite() || !w[1].1.is_finite() {
                return Err(Error::Config(format!(
                    "load curve breakpoints must be strictly increasing in depth and non-decreasing in load near {:?}",
                    w[1]
                )));
            }
        }
        Ok(LoadCurve { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn max_depth(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.0)
    }

    pub fn load_for_depth(&self, depth: f64) -> Result<f64> {
        let max = self.max_depth();
        if !(0.0..=max).contains(&depth) {
            return Err(Error::Range {
                value: depth,
                min: 0.0,
                max,
            });
        }
        let k = self
            .breakpoints
            .partition_point(|&(d, _)| d <= depth)
            .clamp(1, self.breakpoints.len().max(2) - 1);
        if self.breakpoints.len() == 1 {
            return Ok(self.breakpoints[0].1);
        }
        let (d0, l0) = self.breakpoints[k - 1];
        let (d1, l1) = self.breakpoints[k];
        if depth == d1 {
            return Ok(l1);
        }
        Ok(l0 + (l1 - l0) * (depth - d0) / (d1 - d0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rect_model(w: f64, h: f64, spacing: f64) -> LatticeModel {
        LatticeModel {
            geometry: SensorGeometry::with_corner_electrodes(w, h, 6.0),
            node_spacing: spacing,
            base_conductance: Some(1.0),
            ..LatticeModel::default()
        }
    }

    fn net(n: usize, edges: &[(usize, usize, f64)], terminals: Vec<usize>) -> ResistorNetwork {
        let edges = edges.iter().map(|&(u, v, conductance)| Edge { u, v, conductance }).collect();
        ResistorNetwork::new(n, edges, terminals).unwrap()
    }

    #[test]
    fn grid_combinatorics() {
        let g = build_lattice(&rect_model(16.0, 10.0, 2.0)).unwrap();
        assert_eq!(g.nodes().len(), 54);
        assert_eq!(g.network().edges().len(), 93);
        let g = build_lattice(&rect_model(2.0, 2.0, 1.0)).unwrap();
        assert_eq!(g.nodes().len(), 9);
        assert_eq!(g.network().edges().len(), 12);
    }

    #[test]
    fn electrodes_snap_to_nodes() {
        let g = build_lattice(&rect_model(16.0, 10.0, 2.0)).unwrap();
        assert_eq!(g.electrode_nodes(), &[0, 8, 45, 53]);
        let mut m = rect_model(16.0, 10.0, 2.0);
        // Equidistant from nodes 0 and 1: lowest index wins.
        m.geometry.electrodes[0] = Point2::new(1.0, 0.0);
        let g = build_lattice(&m).unwrap();
        assert_eq!(g.electrode_nodes()[0], 0);
    }

    #[test]
    fn spacing_must_tile() {
        assert!(matches!(build_lattice(&rect_model(16.0, 10.0, 3.0)), Err(Error::Config(_))));
        assert!(build_lattice(&rect_model(16.0, 10.0, 0.1)).is_ok());
    }

    #[test]
    fn elementary_resistances() {
        let single = net(2, &[(0, 1, 0.5)], vec![0, 1]);
        assert_relative_eq!(single.node_resistance(0, 1).unwrap(), 2.0, max_relative = 1e-12);
        let chain = net(3, &[(0, 1, 1.0), (1, 2, 1.0)], vec![0, 2]);
        assert_relative_eq!(chain.node_resistance(0, 2).unwrap(), 2.0, max_relative = 1e-12);
        let square = net(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)], vec![0, 2]);
        assert_relative_eq!(square.node_resistance(0, 2).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(square.node_resistance(2, 0).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn disconnected_network_fails_to_solve() {
        let n = net(4, &[(0, 1, 1.0), (2, 3, 1.0)], vec![0, 3]);
        assert!(!n.is_connected());
        assert!(matches!(n.node_resistance(0, 3), Err(Error::Solver(_))));
    }

    #[test]
    fn non_positive_conductance_rejected() {
        let edges = vec![Edge { u: 0, v: 1, conductance: 0.0 }];
        assert!(ResistorNetwork::new(2, edges, vec![0, 1]).is_err());
    }

    #[test]
    fn strain_profile_examples() {
        let m = LatticeModel::default();
        let c = Point2::new(8.0, 5.0);
        assert_relative_eq!(m.strain_at(&Indentation::new(c, 3.0), &c), 0.5);
        assert_eq!(m.strain_at(&Indentation::new(c, 0.0), &Point2::new(8.5, 5.0)), 0.0);
        let cap = LatticeModel {
            strain_profile: StrainProfile::ParabolicCap,
            ..m
        };
        // depth 3 with a 3 mm tip gives a 3 mm contact radius.
        assert_eq!(cap.strain_at(&Indentation::new(c, 3.0), &Point2::new(11.0, 5.0)), 0.0);
        assert_eq!(cap.strain_at(&Indentation::new(c, 3.0), &Point2::new(13.0, 5.0)), 0.0);
        assert!(cap.strain_at(&Indentation::new(c, 3.0), &Point2::new(10.9, 5.0)) > 0.0);
    }

    #[test]
    fn contact_radius_saturates_at_tip_radius() {
        let m = LatticeModel::default();
        assert_relative_eq!(m.contact_radius(3.0), 3.0);
        assert_relative_eq!(m.contact_radius(6.0), 3.0);
        assert_relative_eq!(m.contact_radius(0.0), m.node_spacing);
    }

    #[test]
    fn zero_coupling_or_depth_leaves_graph_unchanged() {
        let model = rect_model(4.0, 2.0, 1.0);
        let g = build_lattice(&model).unwrap();
        let ind = Indentation::new(Point2::new(2.0, 1.0), 3.0);
        let zero_alpha = LatticeModel {
            piezo_coefficient: 0.0,
            ..model.clone()
        };
        assert_eq!(apply_indentation(&g, &zero_alpha, &ind).unwrap(), g);
        let flat = Indentation::new(Point2::new(2.0, 1.0), 0.0);
        assert_eq!(apply_indentation(&g, &model, &flat).unwrap(), g);
    }

    #[test]
    fn unit_strain_halves_conductance() {
        assert_eq!(coupled_conductance(0.5, 1.0, 1.0), 0.25);
        assert_eq!(coupled_conductance(0.5, 0.0, 1.0), 0.5);
        // Full-depth indentation right on an edge whose endpoints both sit
        // at the contact centre is not possible, so check the law on the
        // edge nearest a full-thickness press with a wide parabolic cap.
        let model = LatticeModel {
            geometry: SensorGeometry::with_corner_electrodes(1.0, 1.0, 1.0),
            node_spacing: 1.0,
            base_conductance: Some(2.0),
            piezo_coefficient: 1.0,
            indenter_radius: 1000.0,
            strain_profile: StrainProfile::ParabolicCap,
            ..LatticeModel::default()
        };
        let g = build_lattice(&model).unwrap();
        let ind = Indentation::new(Point2::new(0.0, 0.0), 1.0);
        let loaded = apply_indentation(&g, &model, &ind).unwrap();
        // Edge (0,1): strains are 1 and 1 - (1/a)^2 with a = sqrt(2000 - 1).
        let a2 = 2.0 * 1000.0 - 1.0;
        let s_bar = 0.5 * (1.0 + (1.0 - 1.0 / a2));
        let e = loaded.network().edges()[0];
        assert_eq!((e.u, e.v), (0, 1));
        assert_relative_eq!(e.conductance, 2.0 / (1.0 + s_bar), max_relative = 1e-14);
        assert!((e.conductance - 1.0).abs() < 1e-3);
        // The original is untouched.
        assert_eq!(g.network().edges()[0].conductance, 2.0);
    }

    #[test]
    fn negative_alpha_guard() {
        let model = LatticeModel {
            piezo_coefficient: -1.0,
            ..LatticeModel::default()
        };
        assert!(matches!(model.validate(), Err(Error::Model(_))));
        let ok = LatticeModel {
            piezo_coefficient: -0.5,
            ..LatticeModel::default()
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn derived_conductance_centres_rest_band() {
        let sim = Simulator::new(LatticeModel::default()).unwrap();
        let (min, max) = min_max(sim.rest_resistances());
        assert!(min >= 10e3 && max <= 100e3, "rest range [{min}, {max}]");
        assert_relative_eq!((min * max).sqrt(), (10e3f64 * 100e3).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn zero_depth_record_is_zero() {
        let sim = Simulator::new(LatticeModel::default()).unwrap();
        let rec = sim.simulate_record(&Indentation::new(Point2::new(3.0, 7.0), 0.0)).unwrap();
        assert!(rec.dr.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn load_curve_interpolation() {
        let c = LoadCurve::default();
        assert_eq!(c.load_for_depth(0.0).unwrap(), 0.0);
        assert_eq!(c.load_for_depth(3.0).unwrap(), 6.0);
        assert_eq!(c.load_for_depth(5.0).unwrap(), 16.0);
        assert_relative_eq!(c.load_for_depth(2.5).unwrap(), 4.5);
        assert_relative_eq!(c.load_for_depth(0.5).unwrap(), 0.5);
        assert!(matches!(c.load_for_depth(5.5), Err(Error::Range { .. })));
        assert!(LoadCurve::new(vec![(0.0, 0.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(LoadCurve::new(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).is_err());
        assert!(LoadCurve::new(vec![(0.5, 0.0)]).is_err());
    }
}

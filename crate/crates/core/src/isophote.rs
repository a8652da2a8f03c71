//! Isophote and silhouette extraction: level sets of the shading field
//! `⟨n(u1, u2), d⟩` over the parameter rectangle of a surface.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::galilean::{GVec3, UNIT_TOL};
use crate::surface::{unit_normal, SurfaceSpec};

pub const DEFAULT_GRID: (usize, usize) = (256, 256);
pub const DEFAULT_REFINE_TOL: f64 = 1e-9;
pub const DEFAULT_BISECTION_STEPS: usize = 30;
/// Polyline endpoints closer than this in parameter space are joined.
pub const CLOSE_TOL: f64 = 1e-9;

/// The shading field: Euclidean yz-dot of the unit normal with `axis`.
///
/// For a unit isotropic axis this is the cosine of the angle between `n`
/// and `d`; for a unit non-isotropic axis it is the mixed-angle measure.
/// The value is linear in `axis`, so non-unit axes scale it.
pub fn field(surface: &SurfaceSpec, axis: &GVec3, u1: f64, u2: f64) -> Result<f64> {
    Ok(unit_normal(surface, u1, u2)?.yz_dot(axis))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LevelKind {
    /// Angle β ∈ [0, π/2] to an isotropic axis; level `cos β`.
    Angle(f64),
    /// Raw level; for a non-isotropic axis this is the mixed-angle measure.
    Measure(f64),
    Silhouette,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsophoteQuery {
    pub axis: GVec3,
    pub level: LevelKind,
    pub grid: (usize, usize),
    pub refine_tol: f64,
    pub bisection_steps: usize,
}

impl IsophoteQuery {
    pub fn new(axis: GVec3, level: LevelKind) -> Self {
        IsophoteQuery {
            axis,
            level,
            grid: DEFAULT_GRID,
            refine_tol: DEFAULT_REFINE_TOL,
            bisection_steps: DEFAULT_BISECTION_STEPS,
        }
    }

    pub fn with_grid(mut self, n1: usize, n2: usize) -> Self {
        self.grid = (n1, n2);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.refine_tol = tol;
        self
    }

    /// Validates the query and returns the numeric level.
    pub fn level_value(&self) -> Result<f64> {
        let d = &self.axis;
        let unit = if d.is_isotropic() {
            (d.yz_norm() - 1.0).abs() <= UNIT_TOL
        } else {
            (d.x - 1.0).abs() <= UNIT_TOL
        };
        if !unit {
            return Err(GeomError::Precondition(format!(
                "axis {:?} is not unit; normalize it first",
                d.to_array()
            )));
        }
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return Err(GeomError::Precondition(format!(
                "grid {}x{} must be at least 2x2",
                self.grid.0, self.grid.1
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(GeomError::Precondition("refine_tol must be positive".into()));
        }
        let level = match self.level {
            LevelKind::Angle(beta) => {
                if !d.is_isotropic() {
                    return Err(GeomError::Precondition(
                        "an angle level needs an isotropic axis; use a raw measure level".into(),
                    ));
                }
                if !(0.0..=FRAC_PI_2).contains(&beta) {
                    return Err(GeomError::Precondition(format!("beta = {beta} is outside [0, pi/2]")));
                }
                beta.cos()
            }
            LevelKind::Measure(v) => v,
            LevelKind::Silhouette => 0.0,
        };
        if d.is_isotropic() && !(-1.0..=1.0).contains(&level) {
            return Err(GeomError::Precondition(format!(
                "level {level} is outside [-1, 1] for an isotropic axis"
            )));
        }
        Ok(level)
    }
}

/// A vertex of an extracted polyline; serialized as `[u1, u2, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 5]", into = "[f64; 5]")]
pub struct IsoVertex {
    pub u1: f64,
    pub u2: f64,
    pub point: GVec3,
}

impl From<[f64; 5]> for IsoVertex {
    fn from(a: [f64; 5]) -> Self {
        IsoVertex {
            u1: a[0],
            u2: a[1],
            point: GVec3::new(a[2], a[3], a[4]),
        }
    }
}

impl From<IsoVertex> for [f64; 5] {
    fn from(v: IsoVertex) -> Self {
        [v.u1, v.u2, v.point.x, v.point.y, v.point.z]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub closed: bool,
    /// For closed polylines the first vertex is not repeated at the end.
    pub vertices: Vec<IsoVertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantField {
    pub value: f64,
    pub spread: f64,
    /// The whole surface is the requested isophote.
    pub matches_level: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IsophoteStats {
    pub cells: usize,
    pub crossing_cells: usize,
    pub saddle_cells: usize,
    pub singular_nodes: usize,
    pub skipped_cells: usize,
    pub field_evaluations: usize,
    pub refinement_iterations: usize,
    /// Vertices whose residual still exceeds the tolerance after bisection.
    pub unconverged: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsophoteSet {
    pub level: f64,
    pub domain: [[f64; 2]; 2],
    pub grid: (usize, usize),
    pub refine_tol: f64,
    pub polylines: Vec<Polyline>,
    pub constant_field: Option<ConstantField>,
    pub stats: IsophoteStats,
    #[serde(skip)]
    crossing_cells: Vec<(usize, usize)>,
}

impl IsophoteSet {
    /// Cells `(i, j)` (u1 index, u2 index) whose corner signs differ.
    pub fn crossing_cells(&self) -> &[(usize, usize)] {
        &self.crossing_cells
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(|p| p.vertices.len()).sum()
    }
}

/// Field samples on the `(n1 + 1) × (n2 + 1)` node grid; `None` marks a
/// singular normal.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub n1: usize,
    pub n2: usize,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    values: Vec<Option<f64>>,
}

impl FieldGrid {
    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * (self.n1 + 1) + i]
    }

    fn valid(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }
}

/// Samples the field on a regular grid over the surface domain, in parallel.
pub fn sample_field(surface: &SurfaceSpec, axis: &GVec3, n1: usize, n2: usize) -> Result<FieldGrid> {
    let [[a1, b1], [a2, b2]] = surface.domain;
    let u1 = crate::linspace(a1, b1, n1 + 1);
    let u2 = crate::linspace(a2, b2, n2 + 1);
    let rows = u2
        .par_iter()
        .map(|&v| {
            u1.iter()
                .map(|&u| match field(surface, axis, u, v) {
                    Ok(f) => Ok(Some(f)),
                    Err(GeomError::SingularNormal { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldGrid {
        n1,
        n2,
        u1,
        u2,
        values: rows.into_iter().flatten().collect(),
    })
}

/// Grid edges: horizontal edges run along u1 from node (i, j), vertical
/// ones along u2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

impl Edge {
    fn ends(self) -> ((usize, usize), (usize, usize)) {
        match self {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }
}

struct Refiner<'a> {
    surface: &'a SurfaceSpec,
    axis: GVec3,
    level: f64,
    tol: f64,
    steps: usize,
}

struct Crossing {
    vertex: IsoVertex,
    residual: f64,
    iterations: usize,
    evaluations: usize,
}

impl Refiner<'_> {
    fn eval(&self, u: (f64, f64)) -> Result<f64> {
        Ok(field(self.surface, &self.axis, u.0, u.1)? - self.level)
    }

    /// Linear interpolation, then bisection on the bracketing sub-interval.
    fn refine(&self, p: (f64, f64), fp: f64, q: (f64, f64), fq: f64) -> Result<Crossing> {
        let at = |t: f64| (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
        let (mut lo, mut hi, mut flo) = (0.0, 1.0, fp);
        let mut t = if fp == fq { 0.5 } else { (fp / (fp - fq)).clamp(0.0, 1.0) };
        let mut f = self.eval(at(t))?;
        let (mut iterations, mut evaluations) = (0, 1);
        let mut best = (t, f);
        while f.abs() > self.tol && iterations < self.steps {
            if (f >= 0.0) == (flo >= 0.0) {
                lo = t;
                flo = f;
            } else {
                hi = t;
            }
            t = 0.5 * (lo + hi);
            f = self.eval(at(t))?;
            iterations += 1;
            evaluations += 1;
            if f.abs() < best.1.abs() {
                best = (t, f);
            }
        }
        let (u1, u2) = at(best.0);
        Ok(Crossing {
            vertex: IsoVertex {
                u1,
                u2,
                point: self.surface.point(u1, u2)?,
            },
            residual: best.1.abs(),
            iterations,
            evaluations,
        })
    }
}

/// Extracts the isophote `⟨n, d⟩ = level` by marching squares.
pub fn extract(surface: &SurfaceSpec, query: &IsophoteQuery) -> Result<IsophoteSet> {
    let level = query.level_value()?;
    let (n1, n2) = query.grid;
    let grid = sample_field(surface, &query.axis, n1, n2)?;
    let mut stats = IsophoteStats {
        cells: n1 * n2,
        singular_nodes: grid.values.iter().filter(|v| v.is_none()).count(),
        field_evaluations: grid.values.len(),
        ..Default::default()
    };
    let mut set = IsophoteSet {
        level,
        domain: surface.domain,
        grid: query.grid,
        refine_tol: query.refine_tol,
        polylines: Vec::new(),
        constant_field: None,
        stats,
        crossing_cells: Vec::new(),
    };

    let (min, max) = grid
        .valid()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if min > max {
        // every node singular
        set.stats.skipped_cells = stats.cells;
        return Ok(set);
    }
    if max - min <= query.refine_tol {
        let value = 0.5 * (max + min);
        set.constant_field = Some(ConstantField {
            value,
            spread: max - min,
            matches_level: (value - level).abs() <= query.refine_tol,
        });
        return Ok(set);
    }

    let sign = |i: usize, j: usize| grid.value(i, j).map(|v| v - level >= 0.0);
    let node = |(i, j): (usize, usize)| (grid.u1[i], grid.u2[j]);

    // classify cells and collect their segments as edge pairs
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..n2 {
        for i in 0..n1 {
            let corners = [sign(i, j), sign(i + 1, j), sign(i + 1, j + 1), sign(i, j + 1)];
            let Some(c) = corners.iter().copied().collect::<Option<Vec<bool>>>() else {
                stats.skipped_cells += 1;
                continue;
            };
            let edges = [Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j)];
            let cut = [c[0] != c[1], c[1] != c[2], c[3] != c[2], c[0] != c[3]];
            let crossing: Vec<Edge> = (0..4).filter(|&k| cut[k]).map(|k| edges[k]).collect();
            match crossing.len() {
                0 => continue,
                2 => segments.push((crossing[0], crossing[1])),
                _ => {
                    stats.saddle_cells += 1;
                    let center = ((grid.u1[i] + grid.u1[i + 1]) / 2.0, (grid.u2[j] + grid.u2[j + 1]) / 2.0);
                    stats.field_evaluations += 1;
                    let fc = match field(surface, &query.axis, center.0, center.1) {
                        Ok(v) => v - level,
                        Err(GeomError::SingularNormal { .. }) => {
                            let corner_sum: f64 = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                                .iter()
                                .filter_map(|&(a, b)| grid.value(a, b))
                                .sum();
                            corner_sum / 4.0 - level
                        }
                        Err(e) => return Err(e),
                    };
                    if (fc >= 0.0) == c[0] {
                        // c0 and c2 joined through the centre: isolate c1 and c3
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
            }
            set.crossing_cells.push((i, j));
        }
    }
    stats.crossing_cells = set.crossing_cells.len();

    // refine each crossing edge once, in parallel
    let mut edges: Vec<Edge> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    edges.sort_unstable();
    edges.dedup();
    let refiner = Refiner {
        surface,
        axis: query.axis,
        level,
        tol: query.refine_tol,
        steps: query.bisection_steps,
    };
    let crossings = edges
        .par_iter()
        .map(|&e| {
            let (p, q) = e.ends();
            let fp = grid.value(p.0, p.1).expect("crossing edges join valid nodes") - level;
            let fq = grid.value(q.0, q.1).expect("crossing edges join valid nodes") - level;
            refiner.refine(node(p), fp, node(q), fq)
        })
        .collect::<Result<Vec<_>>>()?;
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    for c in &crossings {
        stats.refinement_iterations += c.iterations;
        stats.field_evaluations += c.evaluations;
        stats.max_residual = stats.max_residual.max(c.residual);
        if c.residual > query.refine_tol {
            stats.unconverged += 1;
        }
    }

    let links: Vec<(usize, usize)> = segments.iter().map(|(a, b)| (index[a], index[b])).collect();
    set.polylines = link(&links, crossings.len())
        .into_iter()
        .map(|(ids, closed)| close_if_coincident(ids.iter().map(|&k| crossings[k].vertex).collect(), closed))
        .collect();
    set.stats = stats;
    Ok(set)
}

/// Chains segments (pairs of vertex ids) into vertex sequences. Open chains
/// start at degree-one vertices; the rest are loops.
fn link(segments: &[(usize, usize)], vertices: usize) -> Vec<(Vec<usize>, bool)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for (k, &(a, b)) in segments.iter().enumerate() {
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut chain = vec![start];
        let mut at = start;
        while let Some(&(next, k)) = adj[at].iter().find(|&&(_, k)| !used[k]) {
            used[k] = true;
            at = next;
            chain.push(at);
        }
        chain
    };
    for v in (0..vertices).filter(|&v| adj[v].len() == 1) {
        if !used[adj[v][0].1] {
            out.push((walk(v, &mut used), false));
        }
    }
    for (v, edges) in adj.iter().enumerate() {
        if edges.iter().any(|&(_, k)| !used[k]) {
            let mut chain = walk(v, &mut used);
            chain.pop();
            out.push((chain, true));
        }
    }
    out
}

fn close_if_coincident(mut vertices: Vec<IsoVertex>, closed: bool) -> Polyline {
    if !closed && vertices.len() > 2 {
        let (a, b) = (vertices[0], vertices[vertices.len() - 1]);
        if (a.u1 - b.u1).abs() <= CLOSE_TOL && (a.u2 - b.u2).abs() <= CLOSE_TOL {
            vertices.pop();
            return Polyline { closed: true, vertices };
        }
    }
    Polyline { closed, vertices }
}

/// Level-0 isophote.
pub fn silhouette(surface: &SurfaceSpec, axis: GVec3, grid: (usize, usize), tol: f64) -> Result<IsophoteSet> {
    extract(surface, &IsophoteQuery::new(axis, LevelKind::Silhouette).with_grid(grid.0, grid.1).with_tol(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn cylinder() -> SurfaceSpec {
        SurfaceSpec::parse("u1", "sin(u2)", "cos(u2)", [[0.0, 1.0], [0.0, 2.0 * PI]], &BTreeMap::new()).unwrap()
    }

    fn plane() -> SurfaceSpec {
        SurfaceSpec::parse("u1", "u2", "0", [[-1.0, 1.0], [-1.0, 1.0]], &BTreeMap::new()).unwrap()
    }

    fn assert_lines_at(set: &IsophoteSet, targets: &[f64]) {
        assert_eq!(set.polylines.len(), targets.len());
        for p in &set.polylines {
            assert!(!p.closed);
            let u2 = p.vertices[0].u2;
            assert!(targets.iter().any(|t| (u2 - t).abs() < 1e-6), "line at {u2}");
            for v in &p.vertices {
                assert!((v.u2 - u2).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cylinder_isophote() {
        let q = IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Angle(FRAC_PI_3)).with_grid(32, 64);
        let set = extract(&cylinder(), &q).unwrap();
        assert_lines_at(&set, &[FRAC_PI_3, 5.0 * FRAC_PI_3]);
        assert_eq!(set.stats.unconverged, 0);
        assert!(set.stats.max_residual <= 1e-9);
    }

    #[test]
    fn cylinder_silhouettes() {
        let set = silhouette(&cylinder(), GVec3::new(0.0, 0.0, 1.0), (16, 64), 1e-9).unwrap();
        assert_lines_at(&set, &[FRAC_PI_2, 3.0 * FRAC_PI_2]);
        // sin u2 = 0 at both ends of the domain: grid nodes at 0 and 2π are exact zeros (≥ 0)
        let set = silhouette(&cylinder(), GVec3::new(0.0, 1.0, 0.0), (16, 64), 1e-9).unwrap();
        assert!(set.polylines.iter().any(|p| (p.vertices[0].u2 - PI).abs() < 1e-6));
    }

    #[test]
    fn plane_constant_fields() {
        let set = silhouette(&plane(), GVec3::new(0.0, 0.0, 1.0), (8, 8), 1e-9).unwrap();
        let c = set.constant_field.unwrap();
        assert_eq!((c.value, c.matches_level), (1.0, false));
        assert!(set.polylines.is_empty());
        let set = silhouette(&plane(), GVec3::new(0.0, 1.0, 0.0), (8, 8), 1e-9).unwrap();
        assert!(set.constant_field.unwrap().matches_level);
    }

    #[test]
    fn closed_loop_on_paraboloid() {
        // the normal only sees z_u2 = r², so n_z = 1/√(1 + r⁴) has circular level sets
        let s = SurfaceSpec::parse("u1", "u2", "u2*u1^2 + u2^3/3", [[-1.0, 1.0], [-1.0, 1.0]], &BTreeMap::new())
            .unwrap();
        let q = IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Measure(0.8)).with_grid(40, 40);
        let set = extract(&s, &q).unwrap();
        assert_eq!(set.polylines.len(), 1);
        assert!(set.polylines[0].closed);
        let r_expected = (1.0f64 / 0.64 - 1.0).sqrt().sqrt();
        for v in &set.polylines[0].vertices {
            assert!((v.u1.hypot(v.u2) - r_expected).abs() < 1e-8);
        }
    }

    #[test]
    fn query_validation() {
        let q = IsophoteQuery::new(GVec3::new(0.0, 0.0, 2.0), LevelKind::Silhouette);
        assert!(q.level_value().is_err());
        let q = IsophoteQuery::new(GVec3::new(1.0, 0.0, 0.0), LevelKind::Angle(0.3));
        assert!(q.level_value().is_err());
        let q = IsophoteQuery::new(GVec3::new(0.0, 1.0, 0.0), LevelKind::Measure(1.5));
        assert!(q.level_value().is_err());
        let q = IsophoteQuery::new(GVec3::new(1.0, 5.0, 0.0), LevelKind::Measure(1.5));
        assert_eq!(q.level_value().unwrap(), 1.5);
    }

    #[test]
    fn link_handles_open_and_closed_chains() {
        let chains = link(&[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)], 6);
        assert_eq!(chains, vec![(vec![0, 1, 2], false), (vec![3, 4, 5], true)]);
    }

    #[test]
    fn polyline_json_shape() {
        let v = IsoVertex {
            u1: 1.0,
            u2: 2.0,
            point: GVec3::new(3.0, 4.0, 5.0),
        };
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0,2.0,3.0,4.0,5.0]");
    }
}

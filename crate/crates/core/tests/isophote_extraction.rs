//! Level-set extraction: vertex accuracy, an independent crossing-cell
//! oracle, refinement stability and rotation equivariance.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_3, PI, TAU};

use g3iso::corpus;
use g3iso::galilean::apply_motion;
use g3iso::isophote::{extract, field, IsophoteQuery, IsophoteSet, LevelKind};
use g3iso::surface::SurfaceSpec;
use g3iso::{linspace, GVec3, GalileanMotion};

fn axes() -> Vec<GVec3> {
    [0.3f64, 1.4, 2.9, 4.4].iter().map(|t| GVec3::new(0.0, t.cos(), t.sin())).collect()
}

/// A level that the field actually attains: the median node value.
fn median_level(surface: &SurfaceSpec, d: &GVec3) -> f64 {
    let [[a1, b1], [a2, b2]] = surface.domain;
    let mut v: Vec<f64> = linspace(a1, b1, 9)
        .into_iter()
        .flat_map(|u| linspace(a2, b2, 9).into_iter().map(move |w| (u, w)))
        .map(|(u, w)| field(surface, d, u, w).unwrap())
        .collect();
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn run(surface: &SurfaceSpec, d: GVec3, level: f64, n: usize) -> IsophoteSet {
    extract(surface, &IsophoteQuery::new(d, LevelKind::Measure(level)).with_grid(n, n)).unwrap()
}

/// Evaluates the field at every node and scans the four edges of each
/// cell for a change of sign of `field − level`.
fn brute_force_crossings(surface: &SurfaceSpec, d: &GVec3, level: f64, n: usize) -> BTreeSet<(usize, usize)> {
    let [[a1, b1], [a2, b2]] = surface.domain;
    let (u1, u2) = (linspace(a1, b1, n + 1), linspace(a2, b2, n + 1));
    let above = |i: usize, j: usize| field(surface, d, u1[i], u2[j]).unwrap() - level >= 0.0;
    let mut out = BTreeSet::new();
    for j in 0..n {
        for i in 0..n {
            let edges = [
                ((i, j), (i + 1, j)),
                ((i + 1, j), (i + 1, j + 1)),
                ((i, j + 1), (i + 1, j + 1)),
                ((i, j), (i, j + 1)),
            ];
            if edges.iter().any(|&((a, b), (c, e))| above(a, b) != above(c, e)) {
                out.insert((i, j));
            }
        }
    }
    out
}

#[test]
fn crossing_cells_match_the_edge_scan_oracle() {
    let mut nonempty = 0;
    for e in corpus::surface_traces(77, 20) {
        for d in axes() {
            let level = median_level(&e.surface, &d);
            let set = run(&e.surface, d, level, 16);
            let got: BTreeSet<_> = set.crossing_cells().iter().copied().collect();
            let want = brute_force_crossings(&e.surface, &d, level, 16);
            assert_eq!(got, want, "{} with axis {d:?}", e.name);
            nonempty += usize::from(!want.is_empty());
        }
    }
    assert!(nonempty >= 60, "the corpus should produce real contours ({nonempty})");
}

#[test]
fn every_vertex_satisfies_the_level_equation() {
    for e in corpus::surface_traces(78, 20) {
        for d in axes() {
            let level = median_level(&e.surface, &d);
            for n in [16, 64] {
                let set = run(&e.surface, d, level, n);
                assert_eq!(set.stats.unconverged, 0, "{}", e.name);
                for p in &set.polylines {
                    for v in &p.vertices {
                        let r = (field(&e.surface, &d, v.u1, v.u2).unwrap() - level).abs();
                        assert!(r <= set.refine_tol, "{}: residual {r:e} at ({}, {})", e.name, v.u1, v.u2);
                        assert!(v.point.max_abs_diff(&e.surface.point(v.u1, v.u2).unwrap()) <= 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn doubling_the_grid_keeps_every_contour() {
    for e in corpus::surface_traces(79, 20) {
        for d in axes() {
            let level = median_level(&e.surface, &d);
            let coarse = run(&e.surface, d, level, 24);
            let fine = run(&e.surface, d, level, 48);
            let [[a1, b1], [a2, b2]] = e.surface.domain;
            let reach = 2.0 * ((b1 - a1).hypot(b2 - a2) / 24.0);
            for p in &coarse.polylines {
                let v = &p.vertices[p.vertices.len() / 2];
                let near = fine
                    .polylines
                    .iter()
                    .flat_map(|q| &q.vertices)
                    .any(|w| (w.u1 - v.u1).hypot(w.u2 - v.u2) <= reach);
                assert!(near, "{}: contour through ({}, {}) lost on refinement", e.name, v.u1, v.u2);
            }
        }
    }
}

#[test]
fn rotating_surface_and_axis_together_leaves_the_field_unchanged() {
    for e in corpus::surface_traces(80, 10) {
        for phi in [0.4, -1.3, 2.7] {
            let m = GalileanMotion::rotation(phi);
            let moved = e.surface.transformed(&m).unwrap();
            for d in axes() {
                let dm = apply_motion(&m, &d, true);
                for u1 in linspace(-2.0, 2.0, 7) {
                    for u2 in linspace(-2.0, 2.0, 7) {
                        let a = field(&e.surface, &d, u1, u2).unwrap();
                        let b = field(&moved, &dm, u1, u2).unwrap();
                        assert!((a - b).abs() <= 1e-12, "{}: {a} vs {b}", e.name);
                    }
                }
            }
        }
    }
}

#[test]
fn cylinder_isophotes_are_the_two_rulings() {
    let cyl = SurfaceSpec::parse("u1", "sin(u2)", "cos(u2)", [[0.0, 1.0], [0.0, TAU]], &BTreeMap::new()).unwrap();
    let q = IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Angle(FRAC_PI_3));
    let set = extract(&cyl, &q).unwrap();
    assert_eq!(set.polylines.len(), 2);
    for p in &set.polylines {
        for v in &p.vertices {
            let off = (v.u2 - FRAC_PI_3).abs().min((v.u2 - 5.0 * FRAC_PI_3).abs());
            assert!(off <= 1e-6, "vertex at u2 = {}", v.u2);
        }
    }
    // the silhouette of the same axis is cos u2 = 0
    let sil = extract(&cyl, &IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Silhouette)).unwrap();
    let mut at: Vec<f64> = sil.polylines.iter().map(|p| p.vertices[0].u2).collect();
    at.sort_by(f64::total_cmp);
    assert_eq!(at.len(), 2);
    assert!((at[0] - PI / 2.0).abs() <= 1e-6 && (at[1] - 1.5 * PI).abs() <= 1e-6);
}

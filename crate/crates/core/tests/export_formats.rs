//! OBJ, CSV and SVG writers: round trips, determinism and well-formedness.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, TAU};

use common::xml::{check_well_formed, count_elements};
use g3iso::curve::{sample_frenet, CurveSpec};
use g3iso::export::{
    read_obj, tessellate, write_frenet_csv, write_isophote_svg, write_obj_mesh, write_obj_polylines, write_svg,
};
use g3iso::isophote::{extract, IsoVertex, IsophoteQuery, LevelKind, Polyline};
use g3iso::surface::SurfaceSpec;
use g3iso::surfrev::{revolve, ProfileSpec};
use g3iso::GVec3;

fn quadratic_surface() -> SurfaceSpec {
    revolve(&ProfileSpec::quadratic(1.0, 0.0, [1e-3, 5.0]).unwrap()).unwrap()
}

#[test]
fn mesh_obj_round_trips_exactly() {
    let mesh = tessellate(&quadratic_surface(), 64, 64).unwrap();
    assert_eq!(mesh.vertices.len(), 65 * 65);
    assert_eq!(mesh.faces.len(), 2 * 64 * 64);
    let mut bytes = Vec::new();
    write_obj_mesh(&mesh, &mut bytes).unwrap();
    let back = read_obj(bytes.as_slice()).unwrap();
    assert_eq!(back.vertices, mesh.vertices, "17 significant digits must round-trip bit for bit");
    assert_eq!(back.faces, mesh.faces);
    assert!(back.lines.is_empty());

    let mut again = Vec::new();
    write_obj_mesh(&tessellate(&quadratic_surface(), 64, 64).unwrap(), &mut again).unwrap();
    assert_eq!(bytes, again);
    assert!(bytes.is_ascii() && !bytes.contains(&b'\r'));
}

#[test]
fn unit_plane_mesh_has_four_vertices_and_two_faces() {
    let plane = SurfaceSpec::parse("u1", "u2", "0", [[0.0, 1.0], [0.0, 1.0]], &BTreeMap::new()).unwrap();
    let mut out = Vec::new();
    write_obj_mesh(&tessellate(&plane, 1, 1).unwrap(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);
}

fn vertex(u1: f64, u2: f64) -> IsoVertex {
    IsoVertex {
        u1,
        u2,
        point: GVec3::new(u1, u2, u1 * u2),
    }
}

#[test]
fn polyline_obj_round_trips_and_closes_loops() {
    let polys = vec![
        Polyline {
            closed: false,
            vertices: vec![vertex(0.0, 0.0), vertex(0.5, 0.1), vertex(1.0, 0.3)],
        },
        Polyline {
            closed: true,
            vertices: vec![vertex(0.1, 0.1), vertex(0.2, 0.1), vertex(0.2, 0.2)],
        },
    ];
    let mut out = Vec::new();
    write_obj_polylines(&polys, &mut out).unwrap();
    let back = read_obj(out.as_slice()).unwrap();
    assert_eq!(back.vertices.len(), 6);
    assert_eq!(back.lines, vec![vec![0, 1, 2], vec![3, 4, 5, 3]]);
    assert_eq!(back.vertices[4], polys[1].vertices[1].point.to_array());

    let mut empty = Vec::new();
    write_obj_polylines(&[], &mut empty).unwrap();
    assert_eq!(String::from_utf8(empty).unwrap(), "# g3iso polylines\n");
}

#[test]
fn frenet_csv_has_named_columns() {
    let c = CurveSpec::parse("s^2/2", "s^3/6", [0.0, 1.0], &BTreeMap::new()).unwrap();
    let mut out = Vec::new();
    write_frenet_csv(&sample_frenet(&c, 5).unwrap(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("s,kappa,tau"));
    let last: Vec<f64> = rows.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 2f64.sqrt()).abs() <= 1e-12 && (last[2] - 0.5).abs() <= 1e-12);
}

#[test]
fn cylinder_isophote_svg_is_well_formed_with_two_lines() {
    let cyl = SurfaceSpec::parse("u1", "sin(u2)", "cos(u2)", [[0.0, 1.0], [0.0, TAU]], &BTreeMap::new()).unwrap();
    let set = extract(&cyl, &IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Angle(FRAC_PI_3))).unwrap();
    let mut out = Vec::new();
    write_isophote_svg(&set, &mut out).unwrap();
    let svg = String::from_utf8(out).unwrap();
    check_well_formed(&svg).unwrap();
    assert_eq!(count_elements(&svg, "polyline"), 2);
    assert!(svg.contains(r#"viewBox="0 0 800 800""#));
    assert_eq!(count_elements(&svg, "title"), 1);
}

#[test]
fn constant_field_svg_shades_the_domain() {
    let set = extract(
        &quadratic_surface(),
        &IsophoteQuery::new(GVec3::new(0.0, 0.0, 1.0), LevelKind::Angle(FRAC_PI_4)).with_grid(32, 32),
    )
    .unwrap();
    assert!(set.polylines.is_empty() && set.constant_field.is_some());
    let mut out = Vec::new();
    write_isophote_svg(&set, &mut out).unwrap();
    let svg = String::from_utf8(out).unwrap();
    check_well_formed(&svg).unwrap();
    assert!(svg.contains("fill-opacity"));
    assert_eq!(count_elements(&svg, "polyline"), 0);
}

#[test]
fn titles_are_escaped() {
    let mut out = Vec::new();
    write_svg(&[vec![(0.0, 0.0), (1.0, 1.0)]], [[0.0, 1.0], [0.0, 1.0]], "a < b & \"c\"", Some("x > y"), &mut out)
        .unwrap();
    check_well_formed(&String::from_utf8(out).unwrap()).unwrap();
}

#[test]
fn checker_rejects_broken_documents() {
    for bad in ["<a><b></a></b>", "<a>", "<a x=1/>", "<a>&nope;</a>", "<a/><b/>", "<a x=\"1\" x=\"2\"/>"] {
        assert!(check_well_formed(bad).is_err(), "{bad}");
    }
    check_well_formed("<?xml version=\"1.0\"?><a x='1'><!-- c --><b/>t &amp; u</a>").unwrap();
}

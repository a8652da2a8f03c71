//! Interchange formats: Wavefront OBJ meshes and polylines, CSV sample
//! tables, and SVG plots of isophotes in the parameter domain.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::curve::FrenetSample;
use crate::error::{GeomError, Result};
use crate::isophote::{IsophoteSet, Polyline};
use crate::linspace;
use crate::surface::{DarbouxSample, SurfaceSpec};

/// Triangle mesh over a regular parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    /// Cell counts `(n1, n2)` of the grid the mesh was built from.
    pub grid: (usize, usize),
}

impl TriMesh {
    pub fn validate(&self) -> Result<()> {
        for (k, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i >= self.vertices.len()) {
                return Err(GeomError::Invalid(format!("face {k} indexes past {} vertices", self.vertices.len())));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(GeomError::Invalid(format!("face {k} is degenerate: {f:?}")));
            }
        }
        Ok(())
    }
}

/// `(n1 + 1) × (n2 + 1)` vertices, row-major with u1 varying fastest, and
/// two triangles per cell.
pub fn tessellate(surface: &SurfaceSpec, n1: usize, n2: usize) -> Result<TriMesh> {
    if n1 == 0 || n2 == 0 {
        return Err(GeomError::Precondition(format!("grid {n1}x{n2} has no cells")));
    }
    let [[a1, b1], [a2, b2]] = surface.domain;
    let (us, vs) = (linspace(a1, b1, n1 + 1), linspace(a2, b2, n2 + 1));
    let mut vertices = Vec::with_capacity(us.len() * vs.len());
    for &v in &vs {
        for &u in &us {
            let p = surface
                .point(u, v)
                .map_err(|e| GeomError::Invalid(format!("at (u1, u2) = ({u}, {v}): {e}")))?;
            vertices.push(p.to_array());
        }
    }
    let idx = |i: usize, j: usize| j * (n1 + 1) + i;
    let mut faces = Vec::with_capacity(2 * n1 * n2);
    for j in 0..n2 {
        for i in 0..n1 {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Ok(TriMesh {
        vertices,
        faces,
        grid: (n1, n2),
    })
}

/// 17 significant digits: enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_vertex(out: &mut String, p: [f64; 3]) {
    let _ = writeln!(out, "v {} {} {}", num(p[0]), num(p[1]), num(p[2]));
}

pub fn write_obj_mesh<W: Write>(mesh: &TriMesh, mut w: W) -> Result<()> {
    mesh.validate()?;
    let mut out = String::new();
    let _ = writeln!(out, "# g3iso mesh {}x{}", mesh.grid.0, mesh.grid.1);
    for &v in &mesh.vertices {
        write_vertex(&mut out, v);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// Polylines as `l` elements; closed polylines repeat their first index.
pub fn write_obj_polylines<W: Write>(polylines: &[Polyline], mut w: W) -> Result<()> {
    let mut out = String::from("# g3iso polylines\n");
    for p in polylines {
        for v in &p.vertices {
            write_vertex(&mut out, v.point.to_array());
        }
    }
    let mut base = 1;
    for p in polylines {
        if p.vertices.is_empty() {
            continue;
        }
        out.push('l');
        for k in 0..p.vertices.len() {
            let _ = write!(out, " {}", base + k);
        }
        if p.closed {
            let _ = write!(out, " {base}");
        }
        out.push('\n');
        base += p.vertices.len();
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// Vertices, faces and line elements read back from OBJ text, with
/// 0-based indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjData {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub lines: Vec<Vec<usize>>,
}

/// Reads the subset of OBJ this module writes (`v`, `f` with three
/// indices, `l`, comments).
pub fn read_obj<R: BufRead>(r: R) -> Result<ObjData> {
    let mut data = ObjData::default();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        let bad = |what: &str| GeomError::Invalid(format!("OBJ line {}: {what}: {line:?}", n + 1));
        let mut it = line.split_whitespace();
        let index = |tok: &str| -> Option<usize> { tok.split('/').next()?.parse::<usize>().ok()?.checked_sub(1) };
        match it.next() {
            None => {}
            Some(t) if t.starts_with('#') => {}
            Some("v") => {
                let xs: Vec<f64> = it.map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad("bad number"))?;
                if xs.len() != 3 {
                    return Err(bad("expected 3 coordinates"));
                }
                data.vertices.push([xs[0], xs[1], xs[2]]);
            }
            Some("f") => {
                let ix: Vec<usize> = it.map(index).collect::<Option<_>>().ok_or_else(|| bad("bad index"))?;
                if ix.len() != 3 {
                    return Err(bad("expected a triangle"));
                }
                data.faces.push([ix[0], ix[1], ix[2]]);
            }
            Some("l") => {
                let ix: Vec<usize> = it.map(index).collect::<Option<_>>().ok_or_else(|| bad("bad index"))?;
                data.lines.push(ix);
            }
            Some(_) => return Err(bad("unsupported element")),
        }
    }
    Ok(data)
}

fn csv_error(e: csv::Error) -> GeomError {
    GeomError::Io(e.to_string())
}

/// Writes a header row followed by numeric rows.
pub fn write_csv<W: Write>(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header).map_err(csv_error)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(GeomError::Invalid(format!(
                "row has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        wr.write_record(row.iter().map(|x| x.to_string())).map_err(csv_error)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_frenet_csv<W: Write>(samples: &[FrenetSample], w: W) -> Result<()> {
    write_csv(&["s", "kappa", "tau"], samples.iter().map(|f| vec![f.s, f.kappa, f.tau]), w)
}

pub fn write_darboux_csv<W: Write>(samples: &[DarbouxSample], w: W) -> Result<()> {
    write_csv(
        &["s", "kg", "kn", "taug", "kappa"],
        samples.iter().map(|d| vec![d.s, d.kg, d.kn, d.tau_g, d.kappa()]),
        w,
    )
}

/// One row per polyline vertex, with the polyline index first.
pub fn write_polylines_csv<W: Write>(polylines: &[Polyline], w: W) -> Result<()> {
    let rows = polylines.iter().enumerate().flat_map(|(k, p)| {
        p.vertices
            .iter()
            .map(move |v| vec![k as f64, v.u1, v.u2, v.point.x, v.point.y, v.point.z])
    });
    write_csv(&["polyline", "u1", "u2", "x", "y", "z"], rows, w)
}

const VIEW: f64 = 800.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Plots parameter-space polylines over `domain` in an 800×800 viewBox.
/// When `constant` is given the whole domain is shaded and annotated.
pub fn write_svg<W: Write>(
    polylines: &[Vec<(f64, f64)>],
    domain: [[f64; 2]; 2],
    title: &str,
    constant: Option<&str>,
    mut w: W,
) -> Result<()> {
    let [[a1, b1], [a2, b2]] = domain;
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let plot = VIEW - 2.0 * MARGIN;
    let px = |u: f64| MARGIN + (u - a1) / span(a1, b1) * plot;
    // u2 grows upwards
    let py = |v: f64| VIEW - MARGIN - (v - a2) / span(a2, b2) * plot;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}" width="{VIEW}" height="{VIEW}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="black"/>"#
    );
    if let Some(note) = constant {
        let _ = writeln!(
            out,
            r##"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="#f2c14e" fill-opacity="0.4"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="18">{}</text>"#,
            VIEW / 2.0,
            VIEW / 2.0,
            escape(note)
        );
    }
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="14">{}</text>"#,
            escape(&text)
        );
    };
    label(&mut out, VIEW / 2.0, VIEW - 15.0, "middle", "u1".into());
    label(&mut out, 20.0, VIEW / 2.0, "middle", "u2".into());
    label(&mut out, px(a1), VIEW - MARGIN + 20.0, "start", format!("{a1:.4}"));
    label(&mut out, px(b1), VIEW - MARGIN + 20.0, "end", format!("{b1:.4}"));
    label(&mut out, MARGIN - 5.0, py(a2), "end", format!("{a2:.4}"));
    label(&mut out, MARGIN - 5.0, py(b2) + 10.0, "end", format!("{b2:.4}"));
    for line in polylines {
        let pts: Vec<String> = line.iter().map(|&(u, v)| format!("{:.3},{:.3}", px(u), py(v))).collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#1f4e79" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    w.write_all(out.as_bytes())?;
    Ok(())
}

/// SVG of an extracted isophote set in its parameter domain.
pub fn write_isophote_svg<W: Write>(set: &IsophoteSet, w: W) -> Result<()> {
    let lines: Vec<Vec<(f64, f64)>> = set
        .polylines
        .iter()
        .map(|p| {
            let mut l: Vec<(f64, f64)> = p.vertices.iter().map(|v| (v.u1, v.u2)).collect();
            if p.closed {
                if let Some(&first) = l.first() {
                    l.push(first);
                }
            }
            l
        })
        .collect();
    let note = set.constant_field.map(|c| {
        format!(
            "constant field {:.12} (spread {:.1e}){}",
            c.value,
            c.spread,
            if c.matches_level { ": whole surface is the isophote" } else { "" }
        )
    });
    write_svg(&lines, set.domain, &format!("isophote level {}", set.level), note.as_deref(), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galilean::GVec3;
    use crate::isophote::IsoVertex;
    use std::collections::BTreeMap;

    fn plane() -> SurfaceSpec {
        SurfaceSpec::parse("u1", "u2", "0", [[0.0, 1.0], [0.0, 1.0]], &BTreeMap::new()).unwrap()
    }

    #[test]
    fn mesh_counts() {
        let m = tessellate(&plane(), 1, 1).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (4, 2));
        let cyl = SurfaceSpec::parse("u1", "sin(u2)", "cos(u2)", [[0.0, 1.0], [0.0, 6.0]], &BTreeMap::new()).unwrap();
        let m = tessellate(&cyl, 2, 4).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (15, 16));
        m.validate().unwrap();
    }

    #[test]
    fn obj_mesh_lines() {
        let mut buf = Vec::new();
        write_obj_mesh(&tessellate(&plane(), 1, 1).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);
        assert!(text.contains("v 1.0000000000000000e0 0.0000000000000000e0"));
    }

    #[test]
    fn empty_polylines_are_header_only() {
        let mut buf = Vec::new();
        write_obj_polylines(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# g3iso polylines\n");
    }

    #[test]
    fn closed_polyline_repeats_first_index() {
        let v = |x: f64| IsoVertex {
            u1: x,
            u2: 0.0,
            point: GVec3::new(x, 0.0, 0.0),
        };
        let p = Polyline {
            closed: true,
            vertices: vec![v(0.0), v(1.0), v(2.0)],
        };
        let mut buf = Vec::new();
        write_obj_polylines(&[p], &mut buf).unwrap();
        let data = read_obj(buf.as_slice()).unwrap();
        assert_eq!(data.lines, vec![vec![0, 1, 2, 0]]);
    }

    #[test]
    fn frenet_csv_header() {
        let f = FrenetSample {
            s: 0.5,
            tangent: GVec3::new(1.0, 0.0, 0.0),
            normal: GVec3::new(0.0, 1.0, 0.0),
            binormal: GVec3::new(0.0, 0.0, 1.0),
            kappa: 1.0,
            tau: 0.25,
        };
        let mut buf = Vec::new();
        write_frenet_csv(&[f], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "s,kappa,tau\n0.5,1,0.25\n");
    }

    #[test]
    fn read_obj_rejects_garbage() {
        assert!(read_obj("v 1 2\n".as_bytes()).is_err());
        assert!(read_obj("f 0 1 2\n".as_bytes()).is_err());
        assert!(read_obj("vt 0 0\n".as_bytes()).is_err());
    }
}

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use g3iso::curve::{sample_frenet, CurveSpec};
use g3iso::export;
use g3iso::isophote::{self, IsophoteQuery, LevelKind, DEFAULT_BISECTION_STEPS, DEFAULT_REFINE_TOL};
use g3iso::scene::{Scene, SCHEMA_VERSION};
use g3iso::surface::{
    axis_isotropic, axis_nonisotropic, classify_trace, sample_darboux, verify_theorems, AxisConfig, SurfaceSpec,
    TheoremConfig, TraceSpec,
};
use g3iso::surfrev::{self, Mode, ProfileSpec, DEFAULT_S_MIN};
use g3iso::verify::{self, SuiteConfig};
use g3iso::{Expr, GVec3, GeomError, ANALYTIC_TOL, FD_TOL};

/// Differential geometry of curves, surfaces and isophotes in Galilean 3-space.
#[derive(Parser)]
#[command(name = "g3iso", version)]
struct Cli {
    /// JSON scene file; object names given to other flags are looked up here
    /// before being parsed as inline expressions.
    #[arg(long, global = true)]
    scene: Option<PathBuf>,
    /// Parameter binding for inline expressions, `name=value` (repeatable).
    #[arg(long = "param", global = true, value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JsonOut {
    /// Machine-readable output; to stdout unless a path is given.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
}

#[derive(Args)]
struct SurfaceTrace {
    /// Surface name or inline `x,y,z` in u1, u2.
    #[arg(long)]
    surface: String,
    /// Trace name or inline `u1,u2` in s.
    #[arg(long)]
    trace: String,
    /// Parameter domain of an inline surface: `u1lo,u1hi,u2lo,u2hi`.
    #[arg(long, default_value = "-1,1,-1,1", allow_hyphen_values = true)]
    udomain: String,
    /// Domain of an inline trace: `lo,hi`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    domain: String,
}

#[derive(Subcommand)]
enum Command {
    /// Frenet apparatus (T, N, B, kappa, tau) of a curve (s, f(s), g(s)).
    Frenet {
        /// Curve name or inline `f,g`.
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        domain: String,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Darboux frame and curvatures of a trace on a surface.
    Darboux {
        #[command(flatten)]
        st: SurfaceTrace,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Geodesic / asymptotic / line-of-curvature classification.
    Classify {
        #[command(flatten)]
        st: SurfaceTrace,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = ANALYTIC_TOL)]
        tol: f64,
        /// Also evaluate every isophote theorem on the trace; exits 1 when a
        /// theorem whose hypothesis holds fails its conclusion.
        #[arg(long)]
        theorems: bool,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Reconstruct the axis of an isophote trace.
    Axis {
        #[arg(long = "case", value_enum)]
        case: AxisCase,
        #[command(flatten)]
        st: SurfaceTrace,
        /// Theta (isotropic) or phi (non-isotropic); constant expressions
        /// such as `pi/4` are accepted.
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = ANALYTIC_TOL)]
        tol: f64,
        #[arg(long, default_value_t = FD_TOL)]
        residual_tol: f64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Extract isophote curves as level sets of the shading field.
    #[command(group(ArgGroup::new("lvl").args(["beta", "level", "silhouette", "query"]).required(true)))]
    Isophote {
        /// Surface name or inline `x,y,z`.
        #[arg(long, required_unless_present = "query")]
        surface: Option<String>,
        #[arg(long, default_value = "-1,1,-1,1", allow_hyphen_values = true)]
        udomain: String,
        /// Axis name or `x,y,z`; normalized before use.
        #[arg(long, required_unless_present = "query", allow_hyphen_values = true)]
        axis: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<String>,
        #[arg(long)]
        silhouette: bool,
        /// Named query from the scene file.
        #[arg(long, conflicts_with_all = ["surface", "axis"])]
        query: Option<String>,
        #[arg(long, default_value = "256x256")]
        grid: String,
        #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
        refine_tol: f64,
        #[arg(long)]
        obj: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Surface of revolution of a profile (s, 0, g(s)).
    Revolve {
        /// Profile name or inline `g`.
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum)]
        mode: Option<CliMode>,
        /// Radius of the isotropic circles.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value = "0,2", allow_hyphen_values = true)]
        domain: String,
        #[arg(long, default_value_t = DEFAULT_S_MIN)]
        s_min: f64,
        #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
        t_range: String,
        /// Tessellation `N1xN2`.
        #[arg(long)]
        mesh: Option<String>,
        #[arg(long, requires = "mesh")]
        obj: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Run the reproduction suite; exits 1 if any check fails.
    Verify {
        /// Run only checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Grid for the constant-field checks, `N1xN2`.
        #[arg(long, default_value = "256x256")]
        grid: String,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisCase {
    Isotropic,
    Nonisotropic,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Euclidean,
    Isotropic,
}

/// Bad input, as opposed to a failed computation or check.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<GeomError>() {
        Some(GeomError::Expr(_) | GeomError::Invalid(_) | GeomError::Precondition(_) | GeomError::Io(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("G3_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| usage(format!("G3_THREADS must be a count, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// Inputs resolved against the optional scene.
struct Ctx {
    scene: Option<Scene>,
    params: BTreeMap<String, f64>,
}

impl Ctx {
    fn new(cli: &Cli) -> anyhow::Result<Ctx> {
        let scene = cli.scene.as_deref().map(Scene::load).transpose()?;
        let mut params = BTreeMap::new();
        for p in &cli.params {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--param expects NAME=VALUE, got '{p}'")))?;
            params.insert(k.trim().to_string(), constant(v)?);
        }
        Ok(Ctx { scene, params })
    }

    fn scene_has<T>(&self, pick: impl Fn(&Scene) -> &BTreeMap<String, T>, name: &str) -> bool {
        self.scene.as_ref().is_some_and(|s| pick(s).contains_key(name))
    }

    fn curve(&self, text: &str, domain: &str) -> anyhow::Result<CurveSpec> {
        if self.scene_has(|s| &s.curves, text) {
            return Ok(self.scene.as_ref().unwrap().curve(text)?.clone());
        }
        let [f, g] = fields::<2>(text, "curve", "f,g")?;
        Ok(CurveSpec::parse(f, g, interval(domain)?, &self.params)?)
    }

    fn surface(&self, text: &str, udomain: &str) -> anyhow::Result<SurfaceSpec> {
        if self.scene_has(|s| &s.surfaces, text) {
            return Ok(self.scene.as_ref().unwrap().surface(text)?.clone());
        }
        let [x, y, z] = fields::<3>(text, "surface", "x,y,z")?;
        let [a, b, c, d] = numbers::<4>(udomain, "u1lo,u1hi,u2lo,u2hi")?;
        Ok(SurfaceSpec::parse(x, y, z, [[a, b], [c, d]], &self.params)?)
    }

    fn trace(&self, text: &str, domain: &str) -> anyhow::Result<TraceSpec> {
        if self.scene_has(|s| &s.traces, text) {
            return Ok(self.scene.as_ref().unwrap().trace(text)?.clone());
        }
        let [u1, u2] = fields::<2>(text, "trace", "u1,u2")?;
        Ok(TraceSpec::parse(u1, u2, interval(domain)?, &self.params)?)
    }

    fn surface_trace(&self, st: &SurfaceTrace) -> anyhow::Result<(SurfaceSpec, TraceSpec)> {
        Ok((self.surface(&st.surface, &st.udomain)?, self.trace(&st.trace, &st.domain)?))
    }

    fn axis(&self, text: &str) -> anyhow::Result<GVec3> {
        if self.scene_has(|s| &s.axes, text) {
            return Ok(self.scene.as_ref().unwrap().axis(text)?);
        }
        let [x, y, z] = numbers::<3>(text, "x,y,z")?;
        Ok(g3iso::galilean::normalize_axis(&GVec3::new(x, y, z))?)
    }

    fn profile(&self, text: &str, domain: &str, mode: Option<CliMode>, c: Option<f64>) -> anyhow::Result<ProfileSpec> {
        let mut p = if self.scene_has(|s| &s.profiles, text) {
            self.scene.as_ref().unwrap().profile(text)?.clone()
        } else {
            ProfileSpec::parse(text, interval(domain)?, Mode::Euclidean, 1.0, &self.params)?
        };
        if let Some(m) = mode {
            p.mode = match m {
                CliMode::Euclidean => Mode::Euclidean,
                CliMode::Isotropic => Mode::Isotropic,
            };
        }
        if let Some(c) = c {
            p.c = c;
        }
        Ok(p)
    }
}

/// Splits on commas outside parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

fn fields<'a, const N: usize>(text: &'a str, what: &str, shape: &str) -> anyhow::Result<[&'a str; N]> {
    let parts = split_top_level(text);
    let n = parts.len();
    parts.try_into().map_err(|_| {
        usage(format!(
            "{what} '{text}' is neither a scene name nor an inline '{shape}' ({n} comma-separated field(s), expected {N})"
        ))
    })
}

/// A constant expression such as `2*pi/3`.
fn constant(text: &str) -> anyhow::Result<f64> {
    let e = Expr::parse_in(text.trim(), &[]).map_err(|e| usage(format!("'{text}': {e}")))?;
    Ok(e.eval(&[])?)
}

fn numbers<const N: usize>(text: &str, shape: &str) -> anyhow::Result<[f64; N]> {
    let vals = split_top_level(text).into_iter().map(constant).collect::<anyhow::Result<Vec<f64>>>()?;
    vals.try_into().map_err(|_| usage(format!("expected '{shape}', got '{text}'")))
}

fn interval(text: &str) -> anyhow::Result<[f64; 2]> {
    numbers::<2>(text, "lo,hi")
}

fn grid(text: &str) -> anyhow::Result<(usize, usize)> {
    let bad = || usage(format!("grid must look like 256x256, got '{text}'"));
    let (a, b) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display())).map_err(|e| usage(format!("{e:#}")))?))
}

fn envelope(command: &str, settings: Value, result: impl Serialize) -> anyhow::Result<Value> {
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "settings": settings,
        "result": serde_json::to_value(result)?,
    }))
}

/// Writes JSON to the requested destination. Returns true when it went to
/// stdout, in which case the text report is suppressed.
fn emit(out: &JsonOut, value: &Value) -> anyhow::Result<bool> {
    match out.json.as_deref() {
        None => Ok(false),
        Some("-") => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", serde_json::to_string_pretty(value)?) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(true),
            }
        }
        Some(path) => {
            let mut w = create(Path::new(path))?;
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
            Ok(false)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let ctx = Ctx::new(&cli)?;
    match cli.command {
        Command::Frenet { curve, domain, samples, csv, out } => {
            let curve = ctx.curve(&curve, &domain)?;
            let frames = sample_frenet(&curve, samples)?;
            if let Some(p) = csv {
                let mut w = create(&p)?;
                export::write_frenet_csv(&frames, &mut w)?;
                w.flush()?;
            }
            let doc = envelope("frenet", json!({"samples": samples, "curve": curve}), &frames)?;
            if !emit(&out, &doc)? {
                println!("{:>12} {:>22} {:>22}", "s", "kappa", "tau");
                for f in &frames {
                    println!("{:>12.6} {:>22.15e} {:>22.15e}", f.s, f.kappa, f.tau);
                }
            }
        }
        Command::Darboux { st, samples, csv, out } => {
            let (surface, trace) = ctx.surface_trace(&st)?;
            let ds = sample_darboux(&surface, &trace, samples)?;
            if let Some(p) = csv {
                let mut w = create(&p)?;
                export::write_darboux_csv(&ds, &mut w)?;
                w.flush()?;
            }
            let doc = envelope("darboux", json!({"samples": samples, "surface": surface, "trace": trace}), &ds)?;
            if !emit(&out, &doc)? {
                println!("{:>12} {:>22} {:>22} {:>22}", "s", "kg", "kn", "tau_g");
                for d in &ds {
                    println!("{:>12.6} {:>22.15e} {:>22.15e} {:>22.15e}", d.s, d.kg, d.kn, d.tau_g);
                }
            }
        }
        Command::Classify { st, samples, tol, theorems, out } => {
            let (surface, trace) = ctx.surface_trace(&st)?;
            let class = classify_trace(&surface, &trace, samples, tol)?;
            let report = if theorems {
                let cfg = TheoremConfig { samples, tol, ..Default::default() };
                Some(verify_theorems(&surface, &trace, &cfg)?)
            } else {
                None
            };
            let failed = report.as_ref().is_some_and(|r| !r.all_passed());
            let doc = envelope(
                "classify",
                json!({"samples": samples, "tol": tol, "surface": surface, "trace": trace}),
                json!({"classification": class, "theorems": report}),
            )?;
            if !emit(&out, &doc)? {
                println!("geodesic:          {} (max |kg|    = {:.3e})", class.geodesic, class.max_abs_kg);
                println!("asymptotic:        {} (max |kn|    = {:.3e})", class.asymptotic, class.max_abs_kn);
                println!("line of curvature: {} (max |tau_g| = {:.3e})", class.line_of_curvature, class.max_abs_tau_g);
                for c in report.iter().flat_map(|r| &r.checks) {
                    let status = match (c.hypothesis_met, c.conclusion_verified) {
                        (false, _) => "n/a ",
                        (true, Some(true)) => "PASS",
                        (true, Some(false)) => "FAIL",
                        (true, None) => "----",
                    };
                    println!("{status} {:<8} {}", c.id, c.statement);
                }
            }
            if failed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Axis { case, st, angle, samples, tol, residual_tol, out } => {
            let (surface, trace) = ctx.surface_trace(&st)?;
            let angle = constant(&angle)?;
            let cfg = AxisConfig { samples, tol, residual_tol };
            let r = match case {
                AxisCase::Isotropic => axis_isotropic(&surface, &trace, angle, &cfg)?,
                AxisCase::Nonisotropic => axis_nonisotropic(&surface, &trace, angle, &cfg)?,
            };
            let doc = envelope("axis", json!({"config": cfg, "surface": surface, "trace": trace}), r)?;
            if !emit(&out, &doc)? {
                println!("d        = ({:.15}, {:.15}, {:.15})", r.d.x, r.d.y, r.d.z);
                println!("branch   = {}", serde_json::to_value(r.branch)?.as_str().unwrap_or_default());
                if let Some(s) = r.sign {
                    println!("sign     = {s:+}");
                }
                println!("residual = {:.3e}", r.residual);
            }
        }
        Command::Isophote { surface, udomain, axis, beta, level, silhouette, query, grid: g, refine_tol, obj, svg, csv, out } => {
            let (surface, q) = match query {
                Some(name) => {
                    let scene = ctx.scene.as_ref().ok_or_else(|| usage("--query needs --scene"))?;
                    let (s, q) = scene.query(&name)?;
                    (s.clone(), q)
                }
                None => {
                    let surface = ctx.surface(surface.as_deref().unwrap(), &udomain)?;
                    let axis = ctx.axis(axis.as_deref().unwrap())?;
                    let kind = match (beta, level, silhouette) {
                        (Some(b), _, _) => LevelKind::Angle(constant(&b)?),
                        (_, Some(v), _) => LevelKind::Measure(constant(&v)?),
                        _ => LevelKind::Silhouette,
                    };
                    let (n1, n2) = grid(&g)?;
                    (surface, IsophoteQuery::new(axis, kind).with_grid(n1, n2).with_tol(refine_tol))
                }
            };
            let set = isophote::extract(&surface, &q)?;
            if let Some(p) = obj {
                let mut w = create(&p)?;
                export::write_obj_polylines(&set.polylines, &mut w)?;
                w.flush()?;
            }
            if let Some(p) = svg {
                let mut w = create(&p)?;
                export::write_isophote_svg(&set, &mut w)?;
                w.flush()?;
            }
            if let Some(p) = csv {
                let mut w = create(&p)?;
                export::write_polylines_csv(&set.polylines, &mut w)?;
                w.flush()?;
            }
            let settings = json!({
                "axis": q.axis,
                "level": q.level,
                "grid": q.grid,
                "refine_tol": q.refine_tol,
                "bisection_steps": DEFAULT_BISECTION_STEPS,
                "surface": surface,
            });
            let doc = envelope("isophote", settings, &set)?;
            if !emit(&out, &doc)? {
                println!("level     = {:.15}", set.level);
                match &set.constant_field {
                    Some(c) => println!(
                        "constant field {:.16} (spread {:.3e}); level {}",
                        c.value,
                        c.spread,
                        if c.matches_level { "matches: the whole surface is the isophote" } else { "not attained" }
                    ),
                    None => {
                        println!("polylines = {}", set.polylines.len());
                        for (i, p) in set.polylines.iter().enumerate() {
                            println!("  #{i}: {} vertices{}", p.vertices.len(), if p.closed { ", closed" } else { "" });
                        }
                    }
                }
                println!("max residual = {:.3e}", set.stats.max_residual);
            }
        }
        Command::Revolve { profile, mode, c, domain, s_min, t_range, mesh, obj, out } => {
            let p = ctx.profile(&profile, &domain, mode, c)?;
            let t_range = interval(&t_range)?;
            let surface = match p.mode {
                Mode::Euclidean => surfrev::revolve_euclidean(&p)?,
                Mode::Isotropic => surfrev::revolve_isotropic(&p, s_min, t_range)?,
            };
            let tri = match mesh.as_deref().map(grid).transpose()? {
                Some((n1, n2)) => Some(export::tessellate(&surface, n1, n2)?),
                None => None,
            };
            if let (Some(path), Some(m)) = (&obj, &tri) {
                let mut w = create(path)?;
                export::write_obj_mesh(m, &mut w)?;
                w.flush()?;
            }
            let counts = tri.as_ref().map(|m| json!({"grid": m.grid, "vertices": m.vertices.len(), "faces": m.faces.len()}));
            let doc = envelope(
                "revolve",
                json!({"profile": p, "s_min": s_min, "t_range": t_range}),
                json!({"surface": surface, "mesh": counts}),
            )?;
            if !emit(&out, &doc)? {
                let x = serde_json::to_value(&surface)?;
                println!("x = {}", x["x"].as_str().unwrap_or_default());
                println!("y = {}", x["y"].as_str().unwrap_or_default());
                println!("z = {}", x["z"].as_str().unwrap_or_default());
                println!("domain = {:?}", surface.domain);
                if let Some(m) = &tri {
                    println!("mesh {}x{}: {} vertices, {} triangles", m.grid.0, m.grid.1, m.vertices.len(), m.faces.len());
                }
            }
        }
        Command::Verify { filter, grid: g, out } => {
            if let Some(f) = &filter {
                if !verify::check_names().iter().any(|n| n.contains(f.as_str())) {
                    return Err(usage(format!("no check matches '{f}'; checks: {}", verify::check_names().join(", "))));
                }
            }
            let cfg = SuiteConfig { prop43_grid: grid(&g)?, ..Default::default() };
            let report = verify::run_suite(&cfg, filter.as_deref());
            let doc = serde_json::to_value(&report)?;
            if !emit(&out, &doc)? {
                for c in &report.checks {
                    println!("{} {:<20} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.title);
                    for (k, v) in &c.measurements {
                        println!("       {k:<42} {v:.16e}");
                    }
                    if let Some(n) = &c.note {
                        println!("       note: {n}");
                    }
                }
                println!("{} passed, {} failed", report.passed, report.failed);
            }
            if !report.all_passed() {
                for c in report.checks.iter().filter(|c| !c.passed) {
                    eprintln!("verification failed: {}", c.name);
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

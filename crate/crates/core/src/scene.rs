//! JSON scene documents: named curves, surfaces, traces, profiles, axes and
//! isophote queries in one file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::error::{GeomError, Result};
use crate::galilean::{normalize_axis, GVec3};
use crate::isophote::{IsophoteQuery, LevelKind, DEFAULT_BISECTION_STEPS, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use crate::surface::{SurfaceSpec, TraceSpec};
use crate::surfrev::ProfileSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// An isophote query that refers to a surface and an axis by name. Exactly
/// one of `beta`, `level`, `silhouette` selects the level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDef {
    pub surface: String,
    pub axis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub silhouette: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_tol: Option<f64>,
}

impl QueryDef {
    pub fn level_kind(&self) -> Result<LevelKind> {
        match (self.beta, self.level, self.silhouette) {
            (Some(b), None, false) => Ok(LevelKind::Angle(b)),
            (None, Some(v), false) => Ok(LevelKind::Measure(v)),
            (None, None, true) => Ok(LevelKind::Silhouette),
            _ => Err(GeomError::Invalid(
                "a query needs exactly one of beta, level, silhouette".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub curves: BTreeMap<String, CurveSpec>,
    #[serde(default)]
    pub surfaces: BTreeMap<String, SurfaceSpec>,
    #[serde(default)]
    pub traces: BTreeMap<String, TraceSpec>,
    #[serde(default)]
    pub profiles: BTreeMap<String, ProfileSpec>,
    #[serde(default)]
    pub axes: BTreeMap<String, GVec3>,
    #[serde(default)]
    pub queries: BTreeMap<String, QueryDef>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| {
        let known: Vec<&str> = map.keys().map(String::as_str).collect();
        GeomError::Invalid(format!("unknown {kind} '{name}' (known: {})", known.join(", ")))
    })
}

impl Scene {
    /// Parses and validates a scene: unknown keys are rejected and every
    /// cross-reference must resolve.
    pub fn from_json(text: &str) -> Result<Scene> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| GeomError::Invalid(format!("scene: {e}")))?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn load(path: &Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::Io(format!("{}: {e}", path.display())))?;
        Scene::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(GeomError::Invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        for name in self.queries.keys() {
            self.query(name).map_err(|e| GeomError::Invalid(format!("query '{name}': {e}")))?;
        }
        Ok(())
    }

    pub fn curve(&self, name: &str) -> Result<&CurveSpec> {
        lookup(&self.curves, "curve", name)
    }

    pub fn surface(&self, name: &str) -> Result<&SurfaceSpec> {
        lookup(&self.surfaces, "surface", name)
    }

    pub fn trace(&self, name: &str) -> Result<&TraceSpec> {
        lookup(&self.traces, "trace", name)
    }

    pub fn profile(&self, name: &str) -> Result<&ProfileSpec> {
        lookup(&self.profiles, "profile", name)
    }

    /// The named axis, normalized.
    pub fn axis(&self, name: &str) -> Result<GVec3> {
        normalize_axis(lookup(&self.axes, "axis", name)?)
    }

    /// Resolves a named query into its surface and an extraction query.
    pub fn query(&self, name: &str) -> Result<(&SurfaceSpec, IsophoteQuery)> {
        let q = lookup(&self.queries, "query", name)?;
        let surface = self.surface(&q.surface)?;
        let [n1, n2] = q.grid.unwrap_or([DEFAULT_GRID.0, DEFAULT_GRID.1]);
        let query = IsophoteQuery {
            axis: self.axis(&q.axis)?,
            level: q.level_kind()?,
            grid: (n1, n2),
            refine_tol: q.refine_tol.unwrap_or(DEFAULT_REFINE_TOL),
            bisection_steps: DEFAULT_BISECTION_STEPS,
        };
        query.level_value()?;
        Ok((surface, query))
    }
}

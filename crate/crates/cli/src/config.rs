//! Experiment configuration (JSON).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use fractalqm::curve::{
    build_cantor_dust, build_cantor_time, build_dyadic_line, build_from_generator, build_koch, build_line, AffineMap,
};
use fractalqm::measure::{build_staircase, estimate_gamma_dimension};
use fractalqm::quantum::Boundary;
use fractalqm::{CurveGrid, DimensionEstimate, GeneratorSpec, PhysicalConstants, Staircase, TimeSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const OUTPUT_ROOT_ENV: &str = "FRACTALQM_OUTPUT_ROOT";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub curve: CurveConfig,
    #[serde(default = "default_alpha")]
    pub alpha_space: AlphaSpec,
    #[serde(default)]
    pub p0: f64,
    #[serde(default)]
    pub time_set: Option<TimeSetConfig>,
    #[serde(default)]
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub dimension: Option<DimensionConfig>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub integrate: Option<IntegrateConfig>,
    #[serde(default)]
    pub run: Option<RunConfig>,
    pub output: PathBuf,
}

fn default_alpha() -> AlphaSpec {
    AlphaSpec::Auto
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    Koch {
        level: u32,
    },
    Line {
        #[serde(default)]
        start: [f64; 3],
        #[serde(default = "unit_x")]
        end: [f64; 3],
        /// Node count; `2^level + 1` when omitted.
        #[serde(default)]
        points: Option<usize>,
        #[serde(default = "default_line_level")]
        level: u32,
    },
    CantorDust {
        level: u32,
        #[serde(default = "one")]
        length: f64,
    },
    CustomGenerator {
        level: u32,
        maps: Vec<MapConfig>,
    },
}

fn unit_x() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

fn default_line_level() -> u32 {
    8
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub scale: f64,
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub translation: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Value(f64),
    #[serde(with = "auto_tag")]
    Auto,
}

mod auto_tag {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        match String::deserialize(d)?.as_str() {
            "auto" => Ok(()),
            other => Err(D::Error::custom(format!("expected a number or \"auto\", got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeSetConfig {
    Full {
        #[serde(rename = "T")]
        duration: f64,
    },
    Cantor {
        level: u32,
        #[serde(rename = "T")]
        duration: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionConfig {
    pub levels: Vec<u32>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-4
}

/// Test function of the staircase coordinate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Power { n: i32 },
    Sin { k: f64 },
    Cos { k: f64 },
    Exp { k: f64 },
}

impl FieldSpec {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            FieldSpec::Power { n } => s.powi(n),
            FieldSpec::Sin { k } => (k * s).sin(),
            FieldSpec::Cos { k } => (k * s).cos(),
            FieldSpec::Exp { k } => (k * s).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateConfig {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d_tau: f64,
    pub steps: usize,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub potential: PotentialSpec,
    pub initial: InitialState,
    #[serde(default)]
    pub stride: Option<usize>,
    #[serde(default)]
    pub xi_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    None,
    Harmonic {
        omega: f64,
        #[serde(default)]
        center: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    PlaneWave {
        /// Set `k` directly or `cycles`, giving `k = 2π·cycles/span`.
        #[serde(default)]
        k: Option<f64>,
        #[serde(default)]
        cycles: Option<f64>,
        #[serde(default = "unit_complex")]
        a: [f64; 2],
        #[serde(default)]
        b: [f64; 2],
    },
    Gaussian {
        #[serde(default)]
        center: Option<f64>,
        sigma: f64,
        #[serde(default)]
        k0: f64,
    },
    HarmonicGround {
        #[serde(default)]
        center: Option<f64>,
        omega: f64,
    },
}

fn unit_complex() -> [f64; 2] {
    [1.0, 0.0]
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let raw = std::fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_slice(&raw)
            .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))?;
        Ok((cfg, raw))
    }

    pub fn constants(&self) -> Result<PhysicalConstants, CliError> {
        Ok(PhysicalConstants::new(self.physics.hbar, self.physics.mass)?)
    }

    /// Output directory, re-rooted under the override variable if set.
    pub fn output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if !root.is_empty() => {
                let rel = self.output.strip_prefix("/").unwrap_or(&self.output);
                PathBuf::from(root).join(rel)
            }
            _ => self.output.clone(),
        }
    }

    pub fn curve_level(&self) -> u32 {
        match self.curve {
            CurveConfig::Koch { level }
            | CurveConfig::Line { level, .. }
            | CurveConfig::CantorDust { level, .. }
            | CurveConfig::CustomGenerator { level, .. } => level,
        }
    }

    pub fn build_curve(&self) -> Result<CurveGrid, CliError> {
        self.build_curve_at(self.curve_level(), true)
    }

    fn build_curve_at(&self, level: u32, allow_points: bool) -> Result<CurveGrid, CliError> {
        Ok(match &self.curve {
            CurveConfig::Koch { .. } => build_koch(level)?,
            CurveConfig::Line { start, end, points, .. } => match points {
                Some(n) if allow_points => build_line(*start, *end, n.saturating_sub(1))?,
                _ => build_dyadic_line(*start, *end, level)?,
            },
            CurveConfig::CantorDust { length, .. } => build_cantor_dust(level, *length)?,
            CurveConfig::CustomGenerator { maps, .. } => {
                let spec = GeneratorSpec::new(
                    maps.iter().map(|m| AffineMap::planar(m.scale, m.angle, m.translation)).collect(),
                )?;
                build_from_generator(&spec, level)?
            }
        })
    }

    /// Grids at the configured estimation levels.
    pub fn dimension_grids(&self) -> Result<(Vec<CurveGrid>, f64), CliError> {
        let d = self.dimension_settings();
        if d.levels.len() < 3 {
            return Err(CliError::usage(format!(
                "dimension estimation needs at least three levels, got {:?}",
                d.levels
            )));
        }
        let grids = d.levels.iter().map(|&l| self.build_curve_at(l, false)).collect::<Result<_, _>>()?;
        Ok((grids, d.tol))
    }

    /// The configured estimation levels, or up to six levels ending at the curve's.
    pub fn dimension_settings(&self) -> DimensionConfig {
        self.dimension.clone().unwrap_or_else(|| {
            let top = self.curve_level();
            DimensionConfig { levels: (top.saturating_sub(5)..=top).collect(), tol: default_tol() }
        })
    }

    pub fn estimate_dimension(&self) -> Result<DimensionEstimate, CliError> {
        let (grids, tol) = self.dimension_grids()?;
        Ok(estimate_gamma_dimension(&grids, tol)?)
    }

    /// Resolves `alpha_space`, estimating it when set to `"auto"`.
    pub fn resolve_alpha(&self) -> Result<(f64, Option<DimensionEstimate>), CliError> {
        match self.alpha_space {
            AlphaSpec::Value(a) => Ok((a, None)),
            AlphaSpec::Auto => {
                let est = self.estimate_dimension()?;
                Ok((est.alpha_star, Some(est)))
            }
        }
    }

    pub fn space_chart(&self, grid: &CurveGrid, alpha: f64) -> Result<Arc<Staircase>, CliError> {
        Ok(Arc::new(build_staircase(grid, alpha, self.p0)?))
    }

    pub fn build_time_set(&self) -> Result<Option<TimeSet>, CliError> {
        Ok(match self.time_set {
            None => None,
            Some(TimeSetConfig::Full { duration }) => Some(TimeSet::full(duration)?),
            Some(TimeSetConfig::Cantor { level, duration }) => Some(build_cantor_time(duration, level)?),
        })
    }

    pub fn run(&self) -> Result<&RunConfig, CliError> {
        self.run.as_ref().ok_or_else(|| CliError::usage("missing \"run\" section"))
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use semiwig::classical_expansion::MU_MAX;
use semiwig::phase_space::{Axis, ComplexField, InitialData, PhaseGrid};
use semiwig::quartic::{MuRule, RayFlow, MIN_RESOLUTION};
use semiwig::spectral::Potential;
use semiwig::Complex;

use crate::error::{CliError, CliResult, Context};

/// Scenarios shipped with the binary, addressable by name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "figure1-harmonic-rays",
        include_str!("../configs/figure1-harmonic-rays.toml"),
    ),
    (
        "figure2-quartic-rays",
        include_str!("../configs/figure2-quartic-rays.toml"),
    ),
];

/// Highest expansion order accepted.
pub const MAX_ORDER: usize = 6;
/// Smallest number of grid points per axis.
pub const MIN_POINTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Artifact directory; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub eps: Vec<f64>,
    /// Output times besides `t = 0`, which is always written.
    #[serde(default)]
    pub times: Vec<f64>,
    pub expansion: ExpansionKind,
    #[serde(default)]
    pub order: usize,
    /// Also evolve the Schrödinger reference and tabulate remainders.
    #[serde(default)]
    pub oracle: bool,
    pub potential: PotentialSpec,
    pub initial: InitialSpec,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<RaysSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal: Option<FocalSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionKind {
    Harmonic,
    Classical,
    Both,
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Harmonic,
    Classical,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Self::Harmonic => "harmonic",
            Self::Classical => "classical",
        }
    }
}

impl ExpansionKind {
    pub fn methods(self) -> Vec<Method> {
        match self {
            Self::Harmonic => vec![Method::Harmonic],
            Self::Classical => vec![Method::Classical],
            Self::Both => vec![Method::Harmonic, Method::Classical],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Harmonic,
    Quartic { mu: MuSpec },
}

/// A fixed coupling or `μ = coef · ε^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Fixed(f64),
    Power { coef: f64, exponent: f64 },
}

impl MuSpec {
    pub fn rule(self) -> MuRule {
        match self {
            Self::Fixed(mu) => MuRule::Fixed(mu),
            Self::Power { coef, exponent } => MuRule::Power { coef, exponent },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    Coherent {
        x0: f64,
        k0: f64,
    },
    WkbGaussFresnel,
    WkbLinearPhase {
        k0: f64,
    },
    /// CSV with columns `x,re,im` on the grid's `x`-axis, relative to the config file.
    Samples {
        file: PathBuf,
    },
}

/// Square symmetric phase-space grid `[−half_width, half_width)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    Harmonic,
    Exact,
    Multiscale,
}

impl From<FlowKind> for RayFlow {
    fn from(f: FlowKind) -> Self {
        match f {
            FlowKind::Harmonic => RayFlow::Harmonic,
            FlowKind::Exact => RayFlow::Exact,
            FlowKind::Multiscale => RayFlow::Multiscale,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaysSpec {
    pub q: [f64; 2],
    pub t: [f64; 2],
    /// Scan resolution of the caustic finder.
    pub resolution: usize,
    pub flow: FlowKind,
    /// Rays and time steps of the exported ray fan.
    #[serde(default = "default_rays")]
    pub rays: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_rays() -> usize {
    21
}

fn default_steps() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocalSpec {
    /// Focal indices `ν ≥ 1`.
    pub indices: Vec<usize>,
}

/// A parsed and validated config with the directory that relative paths refer to.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub base: PathBuf,
}

/// Reads `source` as a path, falling back to a bundled scenario name.
pub fn load(source: &str) -> CliResult<Loaded> {
    let path = Path::new(source);
    let (text, base) = if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Read {
            path: path.into(),
            source: e,
        })?;
        (
            text,
            path.parent().map(Path::to_path_buf).unwrap_or_default(),
        )
    } else if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == source) {
        (text.to_string(), PathBuf::new())
    } else {
        return Err(CliError::Read {
            path: path.into(),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such file or bundled scenario",
            ),
        });
    };
    let config = parse(&text)?;
    config.validate(&base)?;
    Ok(Loaded { config, base })
}

/// Schema-level parse; errors carry the dotted path of the offending field.
pub fn parse(text: &str) -> CliResult<ScenarioConfig> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "<root>".to_string()
        } else {
            path
        };
        CliError::schema(path, e.into_inner().message().trim())
    })
}

impl ScenarioConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_toml().as_bytes()))
    }

    /// `0` followed by the configured times, sorted and deduplicated.
    pub fn output_times(&self) -> Vec<f64> {
        let mut t = vec![0.0];
        t.extend(self.times.iter().copied());
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    pub fn mu(&self, eps: f64) -> f64 {
        match self.potential {
            PotentialSpec::Harmonic => 0.0,
            PotentialSpec::Quartic { mu } => mu.rule().mu(eps),
        }
    }

    pub fn potential(&self, eps: f64) -> CliResult<Potential<f64>> {
        match self.potential {
            PotentialSpec::Harmonic => Ok(Potential::harmonic()),
            PotentialSpec::Quartic { .. } => {
                Potential::quartic(self.mu(eps)).context(|| "potential")
            }
        }
    }

    pub fn grid(&self, eps: f64) -> CliResult<PhaseGrid<f64>> {
        PhaseGrid::square(self.grid.half_width, self.grid.points, eps).context(|| "grid")
    }

    pub fn initial_data(&self, base: &Path, axis: Axis<f64>) -> CliResult<InitialData<f64>> {
        Ok(match &self.initial {
            InitialSpec::Coherent { x0, k0 } => InitialData::Coherent { x0: *x0, k0: *k0 },
            InitialSpec::WkbGaussFresnel => InitialData::GaussFresnel,
            InitialSpec::WkbLinearPhase { k0 } => InitialData::LinearPhase { k0: *k0 },
            InitialSpec::Samples { file } => {
                InitialData::Samples(read_samples(&base.join(file), axis)?)
            }
        })
    }

    /// Range checks mirroring the library preconditions; nothing is computed.
    pub fn validate(&self, base: &Path) -> CliResult<()> {
        if self.name.trim().is_empty() {
            return Err(CliError::schema("name", "must not be empty"));
        }
        if self.eps.is_empty() {
            return Err(CliError::schema("eps", "at least one value is required"));
        }
        for (i, &e) in self.eps.iter().enumerate() {
            if !(e > 0.0 && e < 1.0) {
                return Err(CliError::schema(
                    format!("eps[{i}]"),
                    format!("{e} is not in (0, 1)"),
                ));
            }
        }
        for (i, &t) in self.times.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::schema(
                    format!("times[{i}]"),
                    format!("{t} is not a finite nonnegative time"),
                ));
            }
        }
        if self.order > MAX_ORDER {
            return Err(CliError::schema(
                "order",
                format!("{} exceeds {MAX_ORDER}", self.order),
            ));
        }
        if let PotentialSpec::Quartic { mu } = self.potential {
            for &e in &self.eps {
                let m = mu.rule().mu(e);
                if !(m > 0.0 && m.is_finite()) {
                    return Err(CliError::schema(
                        "potential.mu",
                        format!("μ = {m} at ε = {e} is not positive"),
                    ));
                }
            }
        }
        let g = self.grid;
        if !(g.half_width > 0.0 && g.half_width.is_finite()) {
            return Err(CliError::schema(
                "grid.half_width",
                format!("{} is not positive", g.half_width),
            ));
        }
        if g.points < MIN_POINTS || !g.points.is_multiple_of(2) {
            return Err(CliError::schema(
                "grid.points",
                format!("{} must be even and at least {MIN_POINTS}", g.points),
            ));
        }
        if let InitialSpec::Samples { file } = &self.initial {
            if !base.join(file).is_file() {
                return Err(CliError::schema(
                    "initial.file",
                    format!("{} does not exist", file.display()),
                ));
            }
        }
        if let Some(r) = &self.rays {
            self.validate_rays(r)?;
        }
        if let Some(f) = &self.focal {
            if self.initial != InitialSpec::WkbGaussFresnel {
                return Err(CliError::schema(
                    "focal",
                    "focal amplitudes need wkb-gauss-fresnel data",
                ));
            }
            if f.indices.is_empty() {
                return Err(CliError::schema(
                    "focal.indices",
                    "at least one index is required",
                ));
            }
            if let Some(i) = f.indices.iter().position(|&nu| nu == 0) {
                return Err(CliError::schema(
                    format!("focal.indices[{i}]"),
                    "focal indices start at 1",
                ));
            }
            if self.expansion != ExpansionKind::Harmonic {
                for &e in &self.eps {
                    let m = self.mu(e);
                    if m > MU_MAX {
                        return Err(CliError::schema(
                            "potential.mu",
                            format!(
                                "μ = {m} at ε = {e} exceeds the multiple-scales bound {MU_MAX}"
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_rays(&self, r: &RaysSpec) -> CliResult<()> {
        let ordered = |v: [f64; 2]| v[0].is_finite() && v[1].is_finite() && v[0] < v[1];
        if !ordered(r.q) {
            return Err(CliError::schema(
                "rays.q",
                "expected [low, high] with low < high",
            ));
        }
        if !ordered(r.t) || r.t[0] < 0.0 {
            return Err(CliError::schema(
                "rays.t",
                "expected [low, high] with 0 ≤ low < high",
            ));
        }
        if r.resolution < MIN_RESOLUTION {
            return Err(CliError::schema(
                "rays.resolution",
                format!("must be at least {MIN_RESOLUTION}"),
            ));
        }
        if r.rays < 2 || r.steps < 2 {
            return Err(CliError::schema(
                "rays",
                "`rays` and `steps` must be at least 2",
            ));
        }
        if r.flow != FlowKind::Harmonic && self.potential == PotentialSpec::Harmonic {
            return Err(CliError::schema(
                "rays.flow",
                "exact and multiscale flows need a quartic potential",
            ));
        }
        if r.flow == FlowKind::Multiscale && self.eps.iter().any(|&e| self.mu(e) > MU_MAX) {
            return Err(CliError::schema(
                "rays.flow",
                format!("multiscale flow needs μ ≤ {MU_MAX}"),
            ));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct SampleRow {
    x: f64,
    re: f64,
    im: f64,
}

fn read_samples(path: &Path, axis: Axis<f64>) -> CliResult<ComplexField<f64>> {
    let schema =
        |msg: String| CliError::schema("initial.file", format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| schema(e.to_string()))?;
    let rows: Vec<SampleRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| schema(e.to_string()))?;
    if rows.len() != axis.n {
        return Err(schema(format!(
            "{} samples for a {}-point axis",
            rows.len(),
            axis.n
        )));
    }
    let tol = 1e-9 * axis.step();
    if let Some((i, r)) = rows
        .iter()
        .enumerate()
        .find(|(i, r)| (r.x - axis.point(*i)).abs() > tol)
    {
        return Err(schema(format!(
            "row {i} has x = {} but the grid point is {}",
            r.x,
            axis.point(i)
        )));
    }
    ComplexField::new(
        axis,
        rows.iter().map(|r| Complex::new(r.re, r.im)).collect(),
    )
    .context(|| "initial samples")
}

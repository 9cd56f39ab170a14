use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use semiwig::classical_expansion::{ClassicalBase, ClassicalExpansion, FlowMap};
use semiwig::duhamel::TimeRule;
use semiwig::harmonic_expansion::{HarmonicBase, HarmonicExpansion};
use semiwig::phase_space::io::write_phase_field_csv;
use semiwig::phase_space::{moments, wigner_transform, InitialData, PhaseField, PhaseGrid};
use semiwig::quartic::{
    classical_focal_amplitude, find_caustics, focal_amplitude_harmonic, focal_time, sample_rays,
    write_caustics_csv, write_rays_csv, z2_line_integral, CausticWindow, RayFlow,
};
use semiwig::schrodinger_oracle::{reference_wigner, EvolutionConfig, SplitMethod};
use semiwig::spectral::Potential;

use crate::config::{Loaded, Method, PotentialSpec, RaysSpec, ScenarioConfig};
use crate::error::{CliError, CliResult, Context};

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG_COPY: &str = "config.toml";
/// Highest harmonic corrector with a pointwise focal evaluation.
const FOCAL_MAX_LEVEL: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub code_version: String,
    pub config_hash: String,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn read(dir: &Path) -> CliResult<Self> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).map_err(|e| CliError::Read {
            path: path.clone(),
            source: e,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::schema(path.display().to_string(), e.to_string()))
    }
}

/// Collects output files and their checksums.
struct Artifacts {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl Artifacts {
    fn new(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::Write {
            path: root.into(),
            source: e,
        })?;
        Ok(Self {
            root: root.into(),
            files: Vec::new(),
        })
    }

    fn emit(
        &mut self,
        rel: &str,
        body: impl FnOnce(&mut Vec<u8>) -> semiwig::Result<()>,
    ) -> CliResult<()> {
        let mut buf = Vec::new();
        body(&mut buf).context(|| format!("formatting {rel}"))?;
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::Write {
                path: dir.into(),
                source: e,
            })?;
        }
        fs::write(&path, &buf).map_err(|e| CliError::Write {
            path: path.clone(),
            source: e,
        })?;
        self.files.push(FileEntry {
            path: rel.to_string(),
            sha256: format!("{:x}", Sha256::digest(&buf)),
            bytes: buf.len(),
        });
        Ok(())
    }
}

/// Relative path of a field or moment table.
pub fn field_path(kind: &str, method: Method, eps_index: usize, t_index: usize) -> String {
    format!("{kind}/{}_e{eps_index}_t{t_index}.csv", method.label())
}

struct RemainderLine {
    eps: f64,
    t: f64,
    method: Method,
    order: usize,
    l2: f64,
    relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FocalLine {
    pub eps: f64,
    pub mu: f64,
    pub nu: usize,
    pub t: f64,
    pub expansion: Method,
    /// Number of corrector levels included.
    pub terms: usize,
    pub amplitude: f64,
}

/// Executes a scenario into `out`; the manifest is written last.
pub fn run(loaded: &Loaded, out: &Path) -> CliResult<Manifest> {
    let cfg = &loaded.config;
    let mut art = Artifacts::new(out)?;
    art.emit(CONFIG_COPY, |w| Ok(w.write_all(cfg.to_toml().as_bytes())?))?;
    let times = cfg.output_times();
    let methods = cfg.expansion.methods();
    let mut remainders = Vec::new();
    for (i, &eps) in cfg.eps.iter().enumerate() {
        let v = cfg.potential(eps)?;
        let grid = cfg.grid(eps)?;
        let data = cfg.initial_data(&loaded.base, grid.x)?;
        let reference = if cfg.oracle {
            Some(
                reference_fields(&data, &v, &grid, &times)
                    .context(|| format!("reference evolution at ε = {eps}"))?,
            )
        } else {
            None
        };
        for &m in &methods {
            let fields = match m {
                Method::Harmonic => {
                    harmonic_fields(&v, &data, cfg.grid.half_width, &grid, &times, cfg.order)
                }
                Method::Classical => classical_fields(&v, &data, &grid, &times, cfg.order),
            }
            .context(|| format!("{} expansion at ε = {eps}", m.label()))?;
            for (j, sums) in fields.iter().enumerate() {
                let top = sums.last().expect("partial sums start at order 0");
                art.emit(&field_path("fields", m, i, j), |w| {
                    write_phase_field_csv(top, w)
                })?;
                art.emit(&field_path("moments", m, i, j), |w| write_moments(top, w))?;
                if let Some(r) = &reference {
                    let scale = r[j].l2_norm();
                    for (order, s) in sums.iter().enumerate() {
                        let l2 = s.distance(&r[j]);
                        remainders.push(RemainderLine {
                            eps,
                            t: times[j],
                            method: m,
                            order,
                            l2,
                            relative: l2 / scale,
                        });
                    }
                }
            }
        }
        if let Some(r) = &cfg.rays {
            emit_rays(&mut art, r, cfg.mu(eps), i)?;
        }
    }
    if cfg.oracle {
        art.emit("remainder.csv", |w| {
            writeln!(w, "eps,t,expansion,order,l2,relative")?;
            for r in &remainders {
                writeln!(
                    w,
                    "{},{},{},{},{:e},{:e}",
                    r.eps,
                    r.t,
                    r.method.label(),
                    r.order,
                    r.l2,
                    r.relative
                )?;
            }
            Ok(())
        })?;
    }
    if let Some(f) = &cfg.focal {
        let lines = focal_lines(cfg, &f.indices, &methods)?;
        art.emit("focal.csv", |w| {
            let mut csv = csv::Writer::from_writer(w);
            for l in &lines {
                csv.serialize(l).map_err(|e| semiwig::Error::Io(e.into()))?;
            }
            csv.flush()?;
            Ok(())
        })?;
    }
    let manifest = Manifest {
        name: cfg.name.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        files: art.files,
    };
    let path = out.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest).expect("manifests always serialize");
    fs::write(&path, text + "\n").map_err(|e| CliError::Write { path, source: e })?;
    Ok(manifest)
}

fn write_moments(f: &PhaseField<f64>, w: &mut Vec<u8>) -> semiwig::Result<()> {
    let density = moments(f, 0)?;
    let flux = moments(f, 1)?;
    writeln!(w, "x,density,flux")?;
    for ((x, d), j) in f.grid.x.points().iter().zip(&density).zip(&flux) {
        writeln!(w, "{x:e},{d:e},{j:e}")?;
    }
    Ok(())
}

/// Partial sums of orders `0..=order` at each time, in the original variables.
///
/// The dilated grid is the configured one divided by `√ε`, so its nodes map
/// exactly onto the output nodes and no resampling is needed.
fn harmonic_fields(
    v: &Potential<f64>,
    data: &InitialData<f64>,
    half_width: f64,
    grid: &PhaseGrid<f64>,
    times: &[f64],
    order: usize,
) -> semiwig::Result<Vec<Vec<PhaseField<f64>>>> {
    let eps = grid.eps;
    let sgrid = PhaseGrid::square(half_width / eps.sqrt(), grid.x.n, eps)?;
    let base = match data.scaled_wigner_density(eps) {
        Some(d) => HarmonicBase::Gaussian(d),
        None => {
            let w = wigner_transform(&data.wavefunction(grid.x, eps)?, grid)?;
            HarmonicBase::Field(PhaseField::new(
                sgrid,
                w.values.iter().map(|z| z * eps).collect(),
                true,
            )?)
        }
    };
    let e = HarmonicExpansion::new(v, base, sgrid, order, TimeRule::default())?;
    times
        .iter()
        .map(|&t| {
            let s = e.series(t, order)?;
            (0..=order)
                .map(|n| {
                    let f = s.partial_sum(n)?;
                    PhaseField::new(*grid, f.values.iter().map(|z| z / eps).collect(), false)
                })
                .collect()
        })
        .collect()
}

fn classical_fields(
    v: &Potential<f64>,
    data: &InitialData<f64>,
    grid: &PhaseGrid<f64>,
    times: &[f64],
    order: usize,
) -> semiwig::Result<Vec<Vec<PhaseField<f64>>>> {
    let base = match data.wigner_density(grid.eps) {
        Some(d) => ClassicalBase::Gaussian(d),
        None => ClassicalBase::Field(wigner_transform(
            &data.wavefunction(grid.x, grid.eps)?,
            grid,
        )?),
    };
    let e = ClassicalExpansion::new(FlowMap::new(v, *grid), base, order, TimeRule::default())?;
    times
        .iter()
        .map(|&t| {
            let s = e.series(t, order)?;
            (0..=order).map(|n| s.partial_sum(n)).collect()
        })
        .collect()
}

fn reference_fields(
    data: &InitialData<f64>,
    v: &Potential<f64>,
    grid: &PhaseGrid<f64>,
    times: &[f64],
) -> semiwig::Result<Vec<PhaseField<f64>>> {
    let psi0 = data.wavefunction(grid.x, grid.eps)?;
    times
        .iter()
        .map(|&t| {
            reference_wigner(
                &psi0,
                v,
                grid,
                &EvolutionConfig::new(t).with_method(SplitMethod::Fourth),
            )
        })
        .collect()
}

fn linspace(range: [f64; 2], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64)
        .collect()
}

fn emit_rays(art: &mut Artifacts, r: &RaysSpec, mu: f64, eps_index: usize) -> CliResult<()> {
    let flow = RayFlow::from(r.flow);
    let window = CausticWindow {
        q: (r.q[0], r.q[1]),
        t: (r.t[0], r.t[1]),
        resolution: r.resolution,
    };
    let ctx = || format!("rays at μ = {mu}");
    let caustics = find_caustics(mu, window, flow).context(ctx)?;
    let rays =
        sample_rays(mu, &linspace(r.q, r.rays), &linspace(r.t, r.steps), flow).context(ctx)?;
    art.emit(&format!("rays_e{eps_index}.csv"), |w| {
        write_rays_csv(&rays, w)
    })?;
    art.emit(&format!("caustics_e{eps_index}.csv"), |w| {
        write_caustics_csv(&caustics, w)
    })
}

/// `∫ W(0, k, t_ν) dk` per expansion. The harmonic value carries the correctors up to
/// level two; the classical value is the leading Liouville term.
fn focal_lines(
    cfg: &ScenarioConfig,
    indices: &[usize],
    methods: &[Method],
) -> CliResult<Vec<FocalLine>> {
    let quartic = matches!(cfg.potential, PotentialSpec::Quartic { .. });
    let mut lines = Vec::new();
    for &eps in &cfg.eps {
        let mu = cfg.mu(eps);
        for &nu in indices {
            let t = focal_time(nu).context(|| "focal")?;
            for &m in methods {
                let ctx = || format!("{} focal amplitude at ε = {eps}, ν = {nu}", m.label());
                let (terms, amplitude) = match m {
                    Method::Harmonic => {
                        let mut a = focal_amplitude_harmonic(eps, nu).context(ctx)?;
                        if quartic && cfg.order >= FOCAL_MAX_LEVEL {
                            a += z2_line_integral(eps, mu, t).context(ctx)?;
                        }
                        (cfg.order.min(FOCAL_MAX_LEVEL), a)
                    }
                    Method::Classical => (0, classical_focal_amplitude(eps, mu, nu).context(ctx)?),
                };
                lines.push(FocalLine {
                    eps,
                    mu,
                    nu,
                    t,
                    expansion: m,
                    terms,
                    amplitude,
                });
            }
        }
    }
    Ok(lines)
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use semiwig::stats::fit_loglog;

use crate::config::{parse, Method, ScenarioConfig};
use crate::error::{CliError, CliResult, Context};
use crate::run::{field_path, FocalLine, Manifest, CONFIG_COPY, MANIFEST};

/// Largest slope difference still read as the same order in `ε`.
pub const SLOPE_TOL: f64 = 0.1;
/// Focal amplitudes within this factor are read as the same effect.
pub const SAME_ORDER_FACTOR: f64 = 2.0;

/// A finished run directory with its verified manifest.
struct RunDir {
    dir: PathBuf,
    config: ScenarioConfig,
    manifest: Manifest,
}

impl RunDir {
    fn open(dir: &Path) -> CliResult<Self> {
        let manifest = Manifest::read(dir)?;
        let text = String::from_utf8_lossy(&read_listed(dir, &manifest, CONFIG_COPY)?).into_owned();
        let config = parse(&text)?;
        if config.hash() != manifest.config_hash {
            return Err(CliError::schema(
                dir.join(CONFIG_COPY).display().to_string(),
                "config hash differs from the manifest",
            ));
        }
        Ok(Self {
            dir: dir.into(),
            config,
            manifest,
        })
    }

    fn has(&self, rel: &str) -> bool {
        self.manifest.files.iter().any(|f| f.path == rel)
    }

    fn rows<R: for<'de> Deserialize<'de>>(&self, rel: &str) -> CliResult<Vec<R>> {
        let bytes = read_listed(&self.dir, &self.manifest, rel)?;
        csv::Reader::from_reader(bytes.as_slice())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::schema(self.dir.join(rel).display().to_string(), e.to_string()))
    }
}

/// Reads a file listed in `manifest` and checks its checksum.
fn read_listed(dir: &Path, manifest: &Manifest, rel: &str) -> CliResult<Vec<u8>> {
    let path = dir.join(rel);
    let entry = manifest
        .files
        .iter()
        .find(|f| f.path == rel)
        .ok_or_else(|| {
            CliError::schema(
                dir.join(MANIFEST).display().to_string(),
                format!("{rel} is not listed"),
            )
        })?;
    let bytes = fs::read(&path).map_err(|e| CliError::Read {
        path: path.clone(),
        source: e,
    })?;
    if format!("{:x}", Sha256::digest(&bytes)) != entry.sha256 {
        return Err(CliError::schema(
            path.display().to_string(),
            "checksum differs from the manifest",
        ));
    }
    Ok(bytes)
}

#[derive(Deserialize)]
struct FieldRow {
    x: f64,
    k: f64,
    value: f64,
}

#[derive(Deserialize)]
struct MomentRow {
    x: f64,
    density: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Side {
    pub dir: PathBuf,
    pub expansion: Method,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldDelta {
    pub eps: f64,
    pub t: f64,
    pub max_abs_delta: f64,
    pub l2_delta: f64,
    pub max_density_delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FocalPair {
    pub eps: f64,
    pub nu: usize,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_over_eps_b: f64,
    pub amplitude_a: f64,
    pub amplitude_b: f64,
    pub ratio: f64,
    pub same_order: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub nu: usize,
    pub slope_a: f64,
    pub slope_b: f64,
    pub order_mismatch: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub a: Side,
    pub b: Side,
    pub fields: Vec<FieldDelta>,
    pub focal: Vec<FocalPair>,
    pub scaling: Vec<ScalingFit>,
}

impl Report {
    pub fn max_field_delta(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.max_abs_delta.max(f.max_density_delta))
            .fold(0.0, f64::max)
    }

    pub fn order_mismatch(&self) -> bool {
        self.scaling.iter().any(|s| s.order_mismatch)
    }
}

fn incomparable(msg: String) -> CliError {
    CliError::Scenario {
        context: "compare".into(),
        source: semiwig::Error::Comparability(msg),
    }
}

fn pick(run: &RunDir, flag: Option<Method>, prefer: Method) -> CliResult<Method> {
    let available = run.config.expansion.methods();
    let m = flag.unwrap_or(if available.len() == 1 {
        available[0]
    } else {
        prefer
    });
    if !available.contains(&m) {
        return Err(CliError::Scenario {
            context: "compare".into(),
            source: semiwig::Error::Config(format!(
                "{} has no {} expansion",
                run.dir.display(),
                m.label()
            )),
        });
    }
    Ok(m)
}

/// Compares run `a` against run `b` and writes the tables to `out`.
pub fn compare(
    a: &Path,
    b: &Path,
    out: &Path,
    method_a: Option<Method>,
    method_b: Option<Method>,
) -> CliResult<Report> {
    let ra = RunDir::open(a)?;
    let rb = RunDir::open(b)?;
    let (ca, cb) = (&ra.config, &rb.config);
    if ca.grid != cb.grid {
        return Err(incomparable(format!(
            "grid mismatch: {:?} against {:?}",
            (ca.grid.half_width, ca.grid.points),
            (cb.grid.half_width, cb.grid.points)
        )));
    }
    if ca.eps != cb.eps {
        return Err(incomparable(format!(
            "ε mismatch: {:?} against {:?}",
            ca.eps, cb.eps
        )));
    }
    if ca.output_times() != cb.output_times() {
        return Err(incomparable(format!(
            "time mismatch: {:?} against {:?}",
            ca.output_times(),
            cb.output_times()
        )));
    }
    let ma = pick(&ra, method_a, Method::Harmonic)?;
    let mb = pick(&rb, method_b, Method::Classical)?;
    fs::create_dir_all(out).map_err(|e| CliError::Write {
        path: out.into(),
        source: e,
    })?;

    let times = ca.output_times();
    let cell = (2.0 * ca.grid.half_width / ca.grid.points as f64).powi(2);
    let mut fields = Vec::new();
    let mut density_table = String::from("eps,t,x,density_a,density_b,delta\n");
    for (i, &eps) in ca.eps.iter().enumerate() {
        for (j, &t) in times.iter().enumerate() {
            let fa: Vec<FieldRow> = ra.rows(&field_path("fields", ma, i, j))?;
            let fb: Vec<FieldRow> = rb.rows(&field_path("fields", mb, i, j))?;
            if fa.len() != fb.len() || fa.iter().zip(&fb).any(|(p, q)| p.x != q.x || p.k != q.k) {
                return Err(incomparable(format!(
                    "field nodes differ at ε = {eps}, t = {t}"
                )));
            }
            let (max_abs_delta, sq) = fa.iter().zip(&fb).fold((0.0f64, 0.0), |(m, s), (p, q)| {
                let d = p.value - q.value;
                (m.max(d.abs()), s + d * d)
            });
            let da: Vec<MomentRow> = ra.rows(&field_path("moments", ma, i, j))?;
            let db: Vec<MomentRow> = rb.rows(&field_path("moments", mb, i, j))?;
            let mut max_density_delta = 0.0f64;
            for (p, q) in da.iter().zip(&db) {
                let d = p.density - q.density;
                max_density_delta = max_density_delta.max(d.abs());
                density_table.push_str(&format!(
                    "{eps},{t},{:e},{:e},{:e},{:e}\n",
                    p.x, p.density, q.density, d
                ));
            }
            fields.push(FieldDelta {
                eps,
                t,
                max_abs_delta,
                l2_delta: (sq * cell).sqrt(),
                max_density_delta,
            });
        }
    }

    let (focal, scaling) = if ra.has("focal.csv") && rb.has("focal.csv") {
        focal_tables(&ra, &rb, ma, mb)?
    } else {
        (Vec::new(), Vec::new())
    };

    let report = Report {
        a: Side {
            dir: a.into(),
            expansion: ma,
        },
        b: Side {
            dir: b.into(),
            expansion: mb,
        },
        fields,
        focal,
        scaling,
    };
    write_out(out, "densities.csv", density_table.as_bytes())?;
    write_out(out, "fields.csv", &table(&report.fields)?)?;
    write_out(out, "focal.csv", &table(&report.focal)?)?;
    write_out(out, "scaling.csv", &table(&report.scaling)?)?;
    let json = serde_json::to_string_pretty(&report).expect("reports always serialize") + "\n";
    write_out(out, "report.json", json.as_bytes())?;
    Ok(report)
}

fn focal_tables(
    ra: &RunDir,
    rb: &RunDir,
    ma: Method,
    mb: Method,
) -> CliResult<(Vec<FocalPair>, Vec<ScalingFit>)> {
    let la: Vec<FocalLine> = ra
        .rows::<FocalLine>("focal.csv")?
        .into_iter()
        .filter(|l| l.expansion == ma)
        .collect();
    let lb: Vec<FocalLine> = rb
        .rows::<FocalLine>("focal.csv")?
        .into_iter()
        .filter(|l| l.expansion == mb)
        .collect();
    let mut pairs = Vec::new();
    for p in &la {
        if let Some(q) = lb.iter().find(|q| q.eps == p.eps && q.nu == p.nu) {
            let ratio = p.amplitude / q.amplitude;
            pairs.push(FocalPair {
                eps: p.eps,
                nu: p.nu,
                mu_a: p.mu,
                mu_b: q.mu,
                mu_over_eps_b: q.mu / q.eps,
                amplitude_a: p.amplitude,
                amplitude_b: q.amplitude,
                ratio,
                same_order: (1.0 / SAME_ORDER_FACTOR..=SAME_ORDER_FACTOR).contains(&ratio),
            });
        }
    }
    let mut nus: Vec<usize> = pairs.iter().map(|p| p.nu).collect();
    nus.sort_unstable();
    nus.dedup();
    let mut fits = Vec::new();
    for nu in nus {
        let sel: Vec<&FocalPair> = pairs.iter().filter(|p| p.nu == nu).collect();
        if sel.len() < 2 {
            continue;
        }
        let eps: Vec<f64> = sel.iter().map(|p| p.eps).collect();
        let ya: Vec<f64> = sel.iter().map(|p| p.amplitude_a).collect();
        let yb: Vec<f64> = sel.iter().map(|p| p.amplitude_b).collect();
        let ctx = || format!("focal scaling fit for ν = {nu}");
        let slope_a = fit_loglog(&eps, &ya, 2).context(ctx)?.slope;
        let slope_b = fit_loglog(&eps, &yb, 2).context(ctx)?.slope;
        fits.push(ScalingFit {
            nu,
            slope_a,
            slope_b,
            order_mismatch: (slope_a - slope_b).abs() > SLOPE_TOL,
        });
    }
    Ok((pairs, fits))
}

fn table<R: Serialize>(rows: &[R]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Write {
            path: "<table>".into(),
            source: e.into(),
        })?;
    }
    w.into_inner().map_err(|e| CliError::Write {
        path: "<table>".into(),
        source: e.into_error(),
    })
}

fn write_out(out: &Path, name: &str, bytes: &[u8]) -> CliResult<()> {
    let path = out.join(name);
    let mut f = fs::File::create(&path).map_err(|e| CliError::Write {
        path: path.clone(),
        source: e,
    })?;
    f.write_all(bytes)
        .map_err(|e| CliError::Write { path, source: e })
}

//! Serialization (CSV, OBJ), experiment configuration, and seeded
//! direction sets. Numeric CSV fields use 17 significant digits so that
//! equal runs produce byte-identical artifacts.

use crate::geom::{GraphDirection, GraphPatch, RotProfile};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config line {line}: expected key=value, got {text:?}")]
    BadConfigLine { line: usize, text: String },
    #[error("unknown key {key:?} for command {command:?}")]
    UnknownKey { key: String, command: String },
    #[error("bad value for {key:?}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("OBJ export requires a surface in R^3, got ambient dimension {0}")]
    ObjDimension(usize),
}

/// 17 significant digits, enough to round-trip an `f64` exactly.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted,
/// embedded quotes doubled.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv<W: Write>(
    w: &mut W,
    headers: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), IoError> {
    let head: Vec<String> = headers.iter().map(|h| csv_field(h)).collect();
    writeln!(w, "{}", head.join(","))?;
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Graph patch as an OBJ triangle mesh (`n = 2` vertical graphs only).
pub fn write_obj_graph<W: Write>(w: &mut W, patch: &GraphPatch<f64>) -> Result<(), IoError> {
    if patch.n() != 2 || patch.direction != GraphDirection::Vertical {
        return Err(IoError::ObjDimension(patch.ambient_dim()));
    }
    let (rows, cols) = (patch.grid.dims[0], patch.grid.dims[1]);
    let mut vertex_id = vec![0usize; patch.len()];
    let mut next = 1usize; // OBJ indices are 1-based
    for node in 0..patch.len() {
        if !patch.active(node) {
            continue;
        }
        let p = patch.point_at(node);
        writeln!(
            w,
            "v {} {} {}",
            fmt_real(p.coords[0]),
            fmt_real(p.coords[1]),
            fmt_real(p.coords[2])
        )?;
        vertex_id[node] = next;
        next += 1;
    }
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let a = i * cols + j;
            let b = a + 1;
            let c = a + cols;
            let d = c + 1;
            if [a, b, c, d].iter().all(|&k| patch.active(k)) {
                writeln!(w, "f {} {} {}", vertex_id[a], vertex_id[b], vertex_id[d])?;
                writeln!(w, "f {} {} {}", vertex_id[a], vertex_id[d], vertex_id[c])?;
            }
        }
    }
    Ok(())
}

/// Surface of revolution in R^3 as an OBJ triangle mesh, `m` azimuthal
/// segments.
pub fn write_obj_revolution<W: Write>(
    w: &mut W,
    profile: &RotProfile<f64>,
    m: usize,
) -> Result<(), IoError> {
    if profile.dim != 2 {
        return Err(IoError::ObjDimension(profile.dim + 1));
    }
    let rings = profile.samples.len();
    for s in &profile.samples {
        for k in 0..m {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            writeln!(
                w,
                "v {} {} {}",
                fmt_real(s.r * phi.cos()),
                fmt_real(s.r * phi.sin()),
                fmt_real(s.z)
            )?;
        }
    }
    for i in 0..rings - 1 {
        for k in 0..m {
            let a = i * m + k + 1;
            let b = i * m + (k + 1) % m + 1;
            let c = a + m;
            let d = b + m;
            writeln!(w, "f {a} {b} {d}")?;
            writeln!(w, "f {a} {d} {c}")?;
        }
    }
    Ok(())
}

/// Flat `key=value` experiment parameters; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            _ => {
                return Err(IoError::BadConfigLine {
                    line: idx + 1,
                    text: raw.to_string(),
                })
            }
        }
    }
    Ok(map)
}

/// Keys each command accepts (besides the global `seed` and `out`).
pub fn allowed_keys(command: &str) -> &'static [&'static str] {
    match command {
        "generate" => &["family", "n", "rmax", "h"],
        "verify" => &["family", "h"],
        "wedge" => &["w1", "w2"],
        "classify" => &["family", "rho0", "levels", "directions"],
        "dirichlet" => &["mode", "theta", "c", "h", "radius"],
        "flow" => &["family", "h", "t", "tol"],
        "probe" => &["w1", "w2", "r", "a"],
        _ => &[],
    }
}

/// Resolved experiment configuration: config-file values overridden by
/// command-line flags; unknown keys rejected.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output_dir: std::path::PathBuf,
}

impl ExperimentConfig {
    pub fn new(
        command: &str,
        file: Option<&Path>,
        overrides: &[(&str, Option<String>)],
        seed: Option<u64>,
        output_dir: Option<std::path::PathBuf>,
    ) -> Result<Self, IoError> {
        let mut params = match file {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut seed_val = seed;
        let mut out_val = output_dir;
        if let Some(s) = params.remove("seed") {
            if seed_val.is_none() {
                seed_val = Some(s.parse().map_err(|_| IoError::BadValue {
                    key: "seed".into(),
                    value: s.clone(),
                })?);
            }
        }
        if let Some(o) = params.remove("out") {
            if out_val.is_none() {
                out_val = Some(o.into());
            }
        }
        let allowed = allowed_keys(command);
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(IoError::UnknownKey {
                    key: key.clone(),
                    command: command.to_string(),
                });
            }
        }
        for (key, value) in overrides {
            if let Some(v) = value {
                params.insert((*key).to_string(), v.clone());
            }
        }
        Ok(ExperimentConfig {
            command: command.to_string(),
            params,
            seed: seed_val.unwrap_or(0),
            output_dir: out_val.unwrap_or_else(|| ".".into()),
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64, IoError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| IoError::BadValue {
                key: key.into(),
                value: v.into(),
            }),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize, IoError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| IoError::BadValue {
                key: key.into(),
                value: v.into(),
            }),
        }
    }

    /// Comma-separated float list, e.g. `1,0,0`.
    pub fn get_vector(&self, key: &str) -> Result<Vec<f64>, IoError> {
        let v = self.get(key).ok_or_else(|| IoError::BadValue {
            key: key.into(),
            value: "<missing>".into(),
        })?;
        v.split(',')
            .map(|c| {
                c.trim().parse().map_err(|_| IoError::BadValue {
                    key: key.into(),
                    value: v.into(),
                })
            })
            .collect()
    }
}

/// Deterministic seeded unit directions in `R^dim` (Gaussian sampling via
/// Box-Muller over a counter-based stream cipher RNG).
pub fn seeded_directions(dim: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = move || {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let mut dirs = Vec::with_capacity(m);
    while dirs.len() < m {
        let v: Vec<f64> = (0..dim).map(|_| gauss()).collect();
        if let Some(u) = crate::vec::normalized(&v) {
            dirs.push(u);
        }
    }
    dirs
}

//! File formats for every pipeline artifact. Binary formats are little-endian;
//! all writes go to a temporary file in the target directory and are renamed
//! into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::features::{FeaturePath, Provenance};
use crate::linalg::Matrix;
use crate::persistence::{DiagramPath, DiagramPoint, PersistenceDiagram};
use crate::regression::{CvReport, SvrModel};
use crate::swarm::{Point3, PointCloudSeries, SwarmParams, SwarmTrajectory};

pub const TRAJECTORY_MAGIC: &[u8; 5] = b"SWRM1";
pub const FEATURE_MAGIC: &[u8; 5] = b"FEAT1";
pub const GRAM_MAGIC: &[u8; 5] = b"GRAM1";
pub const DIAGRAM_HEADER: &str = "sim_id,time_index,homology_dim,birth,lifetime";

pub const GRAM_FLAG_NORMALIZED: u8 = 1;
pub const GRAM_FLAG_KERNEL_TRICK: u8 = 2;

/// Writes `bytes` to `path` atomically (temporary sibling, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::arg(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

fn read_artifact(path: &Path, stage: &str) -> Result<Vec<u8>> {
    match fs::read(path) {
        Ok(b) => Ok(b),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingArtifact {
            path: path.to_path_buf(),
            stage: stage.to_string(),
        }),
        Err(e) => Err(e.into()),
    }
}

fn read_text(path: &Path, stage: &str) -> Result<String> {
    let bytes = read_artifact(path, stage)?;
    String::from_utf8(bytes).map_err(|_| Error::Format {
        kind: "text",
        path: path.to_path_buf(),
        reason: "not valid UTF-8".into(),
    })
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: usize) -> Result<()> {
        let v = u32::try_from(v).map_err(|_| Error::arg(format!("{v} does not fit a u32 header field")))?;
        self.0.extend_from_slice(&v.to_le_bytes());
        Ok(())
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, vs: &[f64]) {
        vs.iter().for_each(|&v| self.f64(v));
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    kind: &'static str,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], kind: &'static str, path: &'a Path, magic: &[u8; 5]) -> Result<Self> {
        let mut r = Self {
            bytes,
            pos: 0,
            kind,
            path,
        };
        if r.take(5)? != magic {
            return Err(r.bad(format!("expected magic {:?}", String::from_utf8_lossy(magic))));
        }
        Ok(r)
    }

    fn bad(&self, reason: impl Into<String>) -> Error {
        Error::Format {
            kind: self.kind,
            path: self.path.to_path_buf(),
            reason: reason.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(self.bad(format!("truncated at byte {}", self.pos))),
        }
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        if n.checked_mul(8).is_none_or(|b| b > self.bytes.len() - self.pos) {
            return Err(self.bad(format!("truncated: {n} values expected")));
        }
        (0..n).map(|_| self.f64()).collect()
    }
    fn points(&mut self, n: usize) -> Result<Vec<Point3>> {
        let flat = self.f64s(n.checked_mul(3).ok_or_else(|| self.bad("size overflow"))?)?;
        Ok(flat.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect())
    }
    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(self.bad(format!("{} trailing bytes", self.bytes.len() - self.pos)));
        }
        Ok(())
    }
}

fn params_to(w: &mut Writer, p: &SwarmParams) {
    w.f64s(&[p.mass, p.alpha, p.beta, p.c_r, p.c_a, p.l_r, p.l_a]);
}

fn params_from(r: &mut Reader) -> Result<SwarmParams> {
    let v = r.f64s(7)?;
    Ok(SwarmParams {
        mass: v[0],
        alpha: v[1],
        beta: v[2],
        c_r: v[3],
        c_a: v[4],
        l_r: v[5],
        l_a: v[6],
    })
}

fn flat(points: &[Vec<Point3>]) -> Vec<f64> {
    points.iter().flatten().flatten().copied().collect()
}

/// Trajectory file: magic, `n_agent` u32 (nonzero), `n_steps` u32, seven
/// parameters, seed u64, then the sample times, positions and velocities as
/// `[time][agent][xyz]`.
pub fn write_trajectory(path: &Path, traj: &SwarmTrajectory) -> Result<()> {
    let n = traj.n_agent();
    if n == 0 {
        return Err(Error::arg("cannot store a trajectory without agents"));
    }
    let mut w = Writer(Vec::with_capacity(48 + traj.n_steps() * (8 + 48 * n)));
    w.0.extend_from_slice(TRAJECTORY_MAGIC);
    w.u32(n)?;
    w.u32(traj.n_steps())?;
    params_to(&mut w, &traj.params);
    w.u64(traj.seed);
    w.f64s(&traj.times);
    w.f64s(&flat(&traj.positions));
    w.f64s(&flat(&traj.velocities));
    write_atomic(path, &w.0)
}

pub fn read_trajectory(path: &Path) -> Result<SwarmTrajectory> {
    let bytes = read_artifact(path, "simulate")?;
    let mut r = Reader::new(&bytes, "trajectory", path, TRAJECTORY_MAGIC)?;
    let n = r.u32()?;
    let steps = r.u32()?;
    if n == 0 {
        return Err(r.bad("this is a point-cloud series, not a trajectory"));
    }
    let params = params_from(&mut r)?;
    let seed = r.u64()?;
    let times = r.f64s(steps)?;
    let positions = (0..steps).map(|_| r.points(n)).collect::<Result<_>>()?;
    let velocities = (0..steps).map(|_| r.points(n)).collect::<Result<_>>()?;
    r.finish()?;
    Ok(SwarmTrajectory {
        times,
        positions,
        velocities,
        params,
        seed,
    })
}

/// Point clouds with the parameters of the simulation they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredClouds {
    pub series: PointCloudSeries,
    pub params: SwarmParams,
    pub seed: u64,
}

/// Point-cloud series file: the trajectory layout with `n_agent = 0`, a
/// per-time count table after the times, and no velocities.
pub fn write_point_clouds(path: &Path, clouds: &StoredClouds) -> Result<()> {
    clouds.series.validate()?;
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(TRAJECTORY_MAGIC);
    w.u32(0)?;
    w.u32(clouds.series.times.len())?;
    params_to(&mut w, &clouds.params);
    w.u64(clouds.seed);
    w.f64s(&clouds.series.times);
    for c in &clouds.series.clouds {
        w.u32(c.len())?;
    }
    w.f64s(&flat(&clouds.series.clouds));
    write_atomic(path, &w.0)
}

/// Reads either file flavour as point clouds (trajectories lose their
/// velocities).
pub fn read_point_clouds(path: &Path) -> Result<StoredClouds> {
    let bytes = read_artifact(path, "simulate")?;
    let mut r = Reader::new(&bytes, "trajectory", path, TRAJECTORY_MAGIC)?;
    let n = r.u32()?;
    if n != 0 {
        let traj = read_trajectory(path)?;
        return Ok(StoredClouds {
            series: traj.point_clouds(),
            params: traj.params,
            seed: traj.seed,
        });
    }
    let steps = r.u32()?;
    let params = params_from(&mut r)?;
    let seed = r.u64()?;
    let times = r.f64s(steps)?;
    let counts = (0..steps).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let clouds = counts.iter().map(|&c| r.points(c)).collect::<Result<_>>()?;
    r.finish()?;
    Ok(StoredClouds {
        series: PointCloudSeries { times, clouds },
        params,
        seed,
    })
}

/// Diagram file: `#`-prefixed metadata lines per path (times, bound, scheme,
/// point weight), the header line, then one record per diagram point.
pub fn write_diagrams(path: &Path, paths: &[DiagramPath]) -> Result<()> {
    let mut out = String::new();
    for p in paths {
        let bound = p.bound().unwrap_or(0.0);
        let weight = p.frames.first().map_or(1.0, |f| f[0].weight);
        let times: Vec<String> = p.times.iter().map(f64::to_string).collect();
        out.push_str(&format!(
            "# sim_id={} scheme={} bound={} weight={} times={}\n",
            p.sim_id,
            p.scheme,
            bound,
            weight,
            times.join(";")
        ));
    }
    out.push_str(DIAGRAM_HEADER);
    out.push('\n');
    for p in paths {
        for (t, frame) in p.frames.iter().enumerate() {
            for d in frame {
                for q in &d.points {
                    out.push_str(&format!("{},{},{},{},{}\n", p.sim_id, t, d.dim, q.birth, q.lifetime));
                }
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_diagrams(path: &Path) -> Result<Vec<DiagramPath>> {
    let text = read_text(path, "persist")?;
    let bad = |line: usize, reason: String| Error::Format {
        kind: "diagram",
        path: path.to_path_buf(),
        reason: format!("line {}: {reason}", line + 1),
    };
    struct Meta {
        sim_id: u64,
        scheme: String,
        bound: f64,
        weight: f64,
        times: Vec<f64>,
        points: Vec<[Vec<DiagramPoint>; 3]>,
    }
    let mut metas: Vec<Meta> = Vec::new();
    let mut header_seen = false;
    for (ln, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            let mut m = Meta {
                sim_id: 0,
                scheme: String::new(),
                bound: 0.0,
                weight: 1.0,
                times: Vec::new(),
                points: Vec::new(),
            };
            for kv in rest.split_whitespace() {
                let (k, v) = kv.split_once('=').ok_or_else(|| bad(ln, format!("bad metadata {kv:?}")))?;
                let num = |v: &str| v.parse::<f64>().map_err(|e| bad(ln, format!("{k}: {e}")));
                match k {
                    "sim_id" => m.sim_id = v.parse().map_err(|e| bad(ln, format!("sim_id: {e}")))?,
                    "scheme" => m.scheme = v.to_string(),
                    "bound" => m.bound = num(v)?,
                    "weight" => m.weight = num(v)?,
                    "times" if !v.is_empty() => m.times = v.split(';').map(num).collect::<Result<_>>()?,
                    _ => {}
                }
            }
            m.points = vec![Default::default(); m.times.len()];
            metas.push(m);
            continue;
        }
        if !header_seen {
            if line.trim() != DIAGRAM_HEADER {
                return Err(bad(ln, format!("expected header {DIAGRAM_HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(ln, "expected 5 fields".into()));
        }
        let sim: u64 = f[0].parse().map_err(|e| bad(ln, format!("sim_id: {e}")))?;
        let t: usize = f[1].parse().map_err(|e| bad(ln, format!("time_index: {e}")))?;
        let dim: usize = f[2].parse().map_err(|e| bad(ln, format!("homology_dim: {e}")))?;
        let birth: f64 = f[3].parse().map_err(|e| bad(ln, format!("birth: {e}")))?;
        let lifetime: f64 = f[4].parse().map_err(|e| bad(ln, format!("lifetime: {e}")))?;
        let meta = metas
            .iter_mut()
            .find(|m| m.sim_id == sim)
            .ok_or_else(|| bad(ln, format!("no metadata for sim_id {sim}")))?;
        if dim > 2 || t >= meta.points.len() {
            return Err(bad(ln, format!("time index {t} or dimension {dim} out of range")));
        }
        meta.points[t][dim].push(DiagramPoint::new(birth, lifetime));
    }
    if !header_seen {
        return Err(bad(0, "missing header line".into()));
    }
    metas
        .into_iter()
        .map(|m| {
            let frames = m
                .points
                .into_iter()
                .map(|pts| {
                    let [a, b, c] = pts;
                    let mk = |dim, p: Vec<DiagramPoint>| {
                        PersistenceDiagram::new(dim, m.bound, p).map(|d| d.scaled(m.weight))
                    };
                    Ok([mk(0, a)?, mk(1, b)?, mk(2, c)?])
                })
                .collect::<Result<_>>()
                .map_err(|e: Error| Error::Format {
                    kind: "diagram",
                    path: path.to_path_buf(),
                    reason: e.to_string(),
                })?;
            let p = DiagramPath {
                times: m.times,
                frames,
                sim_id: m.sim_id,
                scheme: m.scheme,
            };
            Ok(p)
        })
        .collect()
}

/// Feature file: magic, `D` u32, `T_steps` u32, provenance tag u8, then the
/// vectors row-major `[time][feature]`. Times are not stored; a path read
/// back is indexed `0, 1, 2, ...`.
pub fn write_features(path: &Path, features: &FeaturePath) -> Result<()> {
    let mut w = Writer(Vec::with_capacity(14 + 8 * features.data.len()));
    w.0.extend_from_slice(FEATURE_MAGIC);
    w.u32(features.dim)?;
    w.u32(features.len())?;
    w.u8(features.provenance.tag());
    w.f64s(&features.data);
    write_atomic(path, &w.0)
}

pub fn read_features(path: &Path) -> Result<FeaturePath> {
    let bytes = read_artifact(path, "featurize")?;
    let mut r = Reader::new(&bytes, "feature", path, FEATURE_MAGIC)?;
    let dim = r.u32()?;
    let steps = r.u32()?;
    let tag = r.u8()?;
    let provenance = Provenance::from_tag(tag).ok_or_else(|| r.bad(format!("unknown provenance tag {tag}")))?;
    let data = r.f64s(dim.checked_mul(steps).ok_or_else(|| r.bad("size overflow"))?)?;
    r.finish()?;
    FeaturePath::new((0..steps).map(|t| t as f64).collect(), dim, data, provenance).map_err(|e| r.bad(e.to_string()))
}

/// Gram matrix with the settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredGram {
    pub matrix: Matrix,
    pub level: usize,
    pub flags: u8,
}

pub fn write_gram(path: &Path, gram: &StoredGram) -> Result<()> {
    let mut w = Writer(Vec::with_capacity(18 + 8 * gram.matrix.data.len()));
    w.0.extend_from_slice(GRAM_MAGIC);
    w.u32(gram.matrix.rows)?;
    w.u32(gram.matrix.cols)?;
    w.u32(gram.level)?;
    w.u8(gram.flags);
    w.f64s(&gram.matrix.data);
    write_atomic(path, &w.0)
}

pub fn read_gram(path: &Path) -> Result<StoredGram> {
    let bytes = read_artifact(path, "kernel")?;
    let mut r = Reader::new(&bytes, "gram", path, GRAM_MAGIC)?;
    let rows = r.u32()?;
    let cols = r.u32()?;
    let level = r.u32()?;
    let flags = r.u8()?;
    let data = r.f64s(rows.checked_mul(cols).ok_or_else(|| r.bad("size overflow"))?)?;
    r.finish()?;
    Ok(StoredGram {
        matrix: Matrix::from_vec(rows, cols, data)?,
        level,
        flags,
    })
}

/// Model file: `key=value` lines, then `coeffs`, then one dual coefficient per
/// line.
pub fn write_model(path: &Path, model: &SvrModel) -> Result<()> {
    let mut out = format!(
        "lambda={}\nepsilon={}\nbias={}\nn_train={}\nfingerprint={:016x}\nconverged={}\niterations={}\ncoeffs\n",
        model.lambda,
        model.epsilon,
        model.bias,
        model.n_train(),
        model.fingerprint,
        model.converged,
        model.iterations
    );
    for c in &model.dual_coeffs {
        out.push_str(&format!("{c}\n"));
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_model(path: &Path) -> Result<SvrModel> {
    let text = read_text(path, "train")?;
    let bad = |reason: String| Error::Format {
        kind: "model",
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines();
    let mut kv = std::collections::HashMap::new();
    for line in lines.by_ref() {
        if line == "coeffs" {
            break;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("bad line {line:?}")))?;
        kv.insert(k.to_string(), v.to_string());
    }
    let get = |k: &str| kv.get(k).ok_or_else(|| bad(format!("missing key {k}")));
    let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|e| bad(format!("{k}: {e}"))) };
    let n_train: usize = get("n_train")?.parse().map_err(|e| bad(format!("n_train: {e}")))?;
    let dual_coeffs: Vec<f64> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.parse().map_err(|e| bad(format!("coefficient {l:?}: {e}"))))
        .collect::<Result<_>>()?;
    if dual_coeffs.len() != n_train {
        return Err(bad(format!("{} coefficients for n_train={n_train}", dual_coeffs.len())));
    }
    let support_indices = (0..n_train).filter(|&i| dual_coeffs[i] != 0.0).collect();
    Ok(SvrModel {
        lambda: num("lambda")?,
        epsilon: num("epsilon")?,
        bias: num("bias")?,
        fingerprint: u64::from_str_radix(get("fingerprint")?, 16).map_err(|e| bad(format!("fingerprint: {e}")))?,
        converged: get("converged")? == "true",
        iterations: get("iterations")?.parse().map_err(|e| bad(format!("iterations: {e}")))?,
        dual_coeffs,
        support_indices,
    })
}

pub fn cv_report_csv(report: &CvReport) -> String {
    let mut out = String::from("lambda,epsilon,mean_mse\n");
    for (li, l) in report.lambdas.iter().enumerate() {
        for (ei, e) in report.epsilons.iter().enumerate() {
            out.push_str(&format!("{l},{e},{}\n", report.mse_at(li, ei)));
        }
    }
    out
}

/// Reads a whitespace- or comma-separated list of numbers (one target per
/// sample), ignoring a non-numeric first line.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path, "simulate")?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        match fields.iter().map(|f| f.parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>() {
            Ok(v) => out.extend(v),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Format {
                    kind: "vector",
                    path: path.to_path_buf(),
                    reason: format!("line {}: {e}", i + 1),
                })
            }
        }
    }
    Ok(out)
}

pub fn write_vector(path: &Path, header: &str, values: &[f64]) -> Result<()> {
    let mut out = format!("{header}\n");
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    write_atomic(path, out.as_bytes())
}

/// Files in `dir` with the given extension, sorted by name.
pub fn list_files(dir: &Path, extension: &str, stage: &str) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::MissingArtifact {
            path: dir.to_path_buf(),
            stage: stage.to_string(),
        });
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == extension))
        .collect();
    files.sort();
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{diagram_path, PersistenceConfig};
    use crate::swarm::{simulate, subsample, SubsampleScheme};

    #[test]
    fn trajectory_and_cloud_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let traj = simulate(SwarmParams::nondimensional(0.5, 0.5), 5, 1.0, 4, 7).unwrap();
        let p = dir.path().join("a.swrm");
        write_trajectory(&p, &traj).unwrap();
        assert_eq!(read_trajectory(&p).unwrap(), traj);

        let sub = subsample(&traj, SubsampleScheme::Random { lo: 2, hi: 4 }, 3).unwrap();
        let stored = StoredClouds {
            series: sub,
            params: traj.params,
            seed: traj.seed,
        };
        let q = dir.path().join("b.swrm");
        write_point_clouds(&q, &stored).unwrap();
        assert_eq!(read_point_clouds(&q).unwrap(), stored);
        assert!(read_trajectory(&q).is_err());
        assert_eq!(read_point_clouds(&p).unwrap().series, traj.point_clouds());
    }

    #[test]
    fn diagram_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let traj = simulate(SwarmParams::nondimensional(0.5, 0.5), 8, 1.0, 3, 1).unwrap();
        let paths: Vec<DiagramPath> = (0..2)
            .map(|i| diagram_path(&traj.point_clouds(), &PersistenceConfig::default(), i, "full").unwrap())
            .collect();
        let p = dir.path().join("d.csv");
        write_diagrams(&p, &paths).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.lines().any(|l| l == DIAGRAM_HEADER));
        assert_eq!(read_diagrams(&p).unwrap(), paths);
    }

    #[test]
    fn feature_gram_model_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = FeaturePath::from_rows(&[vec![1.0, 0.1], vec![-2.5, 1e-300]], Provenance::Moment).unwrap();
        let p = dir.path().join("f.feat");
        write_features(&p, &f).unwrap();
        assert_eq!(read_features(&p).unwrap(), f);

        let g = StoredGram {
            matrix: Matrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap(),
            level: 3,
            flags: GRAM_FLAG_NORMALIZED,
        };
        let q = dir.path().join("g.gram");
        write_gram(&q, &g).unwrap();
        assert_eq!(read_gram(&q).unwrap(), g);

        let k = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let m = crate::regression::svr_train(&k, &[0.3, -0.1], 1.0, 0.01).unwrap();
        let r = dir.path().join("m.txt");
        write_model(&r, &m).unwrap();
        assert_eq!(read_model(&r).unwrap(), m);
    }

    #[test]
    fn errors_name_the_problem() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.gram");
        assert!(matches!(read_gram(&missing), Err(Error::MissingArtifact { stage, .. }) if stage == "kernel"));
        let p = dir.path().join("bad.feat");
        fs::write(&p, b"FEAT1\x02\x00").unwrap();
        assert!(matches!(read_features(&p), Err(Error::Format { .. })));
        fs::write(&p, b"GRAM1").unwrap();
        assert!(matches!(read_features(&p), Err(Error::Format { .. })));
    }

    #[test]
    fn vectors_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_vector(&p, "target", &[1.5, -2.0]).unwrap();
        assert_eq!(read_vector(&p).unwrap(), vec![1.5, -2.0]);
    }
}

//! Running configurations end to end, writing result bundles and reading
//! coincidence-count files.
//!
//! CSV files are comma-separated, UTF-8, `\n`-terminated and always carry a
//! header row. Floats are written in the shortest form that parses back to
//! the same value.

pub mod config;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{self, Bound, CountTable, PairProbabilities, ViolationReport};
use crate::coin::Polarization;
use crate::error::{Error, Result};
use crate::modes;
use crate::two_photon::{self, Label, Model};
use crate::walk::{self, OamDistribution};
use config::{ExperimentConfig, Format, Mode, Resolved, SweepParam};

/// Probabilities below this bound the rows written for a distribution.
pub const SUPPORT_TOL: f64 = 1e-24;

/// Full-precision decimal rendering of a float.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path)?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::invalid(format!("{other:?}")),
    }
}

/// Writes rows of already formatted fields under `header`.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Probabilities from the lowest to the highest OAM with probability above
/// [`SUPPORT_TOL`], zeros in between included.
pub fn trimmed(dist: &OamDistribution) -> Vec<(i64, f64)> {
    let support = dist.support(SUPPORT_TOL);
    match (support.first(), support.last()) {
        (Some(&lo), Some(&hi)) => (lo..=hi).map(|m| (m, dist.get(m))).collect(),
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub sigma_over_w0: f64,
    pub efficiency: BTreeMap<i64, f64>,
    /// What a detector with OAM-dependent efficiency records.
    pub detected: OamDistribution,
    /// `detected` after the efficiency correction.
    pub corrected: OamDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleResult {
    pub distribution: OamDistribution,
    pub mean: f64,
    pub variance: f64,
    pub intermediate: Vec<OamDistribution>,
    pub detection: Option<DetectionResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRow {
    pub p: Label,
    pub q: Label,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelResult {
    pub model: Model,
    pub pre_bs: Vec<PairRow>,
    pub post_bs: Vec<PairRow>,
    pub success_probability: f64,
    pub oam_joint: Vec<((i64, i64), f64)>,
    pub violations: Vec<ViolationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPhotonResult {
    pub models: Vec<ModelResult>,
    /// Total-variation distance between the bosonic and distinguishable
    /// symmetrized OAM distributions, when both models were run.
    pub tv_bosonic_distinguishable: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Single(SingleResult),
    TwoPhoton(TwoPhotonResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub param: SweepParam,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub config_sha256: String,
    pub version: String,
    pub schema_version: u32,
    pub created_unix: u64,
    pub sweep: Option<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultBundle {
    pub metadata: Metadata,
    pub config: Resolved,
    pub payload: Payload,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn metadata(config_text: &str, sweep: Option<SweepPoint>) -> Metadata {
    Metadata {
        config_sha256: sha256_hex(config_text.as_bytes()),
        version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: config::SCHEMA_VERSION,
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        sweep,
    }
}

/// Evaluates one resolved configuration.
pub fn compute(r: &Resolved) -> Result<Payload> {
    match r.mode {
        Mode::Single => compute_single(r).map(Payload::Single),
        Mode::TwoPhoton => compute_two_photon(r).map(Payload::TwoPhoton),
    }
}

fn compute_single(r: &Resolved) -> Result<SingleResult> {
    let distribution = walk::run_walk_with(&r.walk, &r.options)?;
    let intermediate = walk::intermediate_distributions_with(&r.walk, &r.options)?;
    let detection = if r.correct_bias {
        let efficiency = distribution
            .probs
            .keys()
            .map(|&m| Ok((m, modes::coupling_efficiency(m, r.sigma_over_w0)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut detected = distribution.clone();
        let total: f64 = detected
            .probs
            .iter_mut()
            .map(|(m, p)| {
                *p *= efficiency[m];
                *p
            })
            .sum();
        for p in detected.probs.values_mut() {
            *p /= total;
        }
        let corrected = walk::apply_detection_correction(&detected, &efficiency)?;
        Some(DetectionResult {
            sigma_over_w0: r.sigma_over_w0,
            efficiency,
            detected,
            corrected,
        })
    } else {
        None
    };
    Ok(SingleResult {
        mean: distribution.mean(),
        variance: distribution.variance(),
        distribution,
        intermediate,
        detection,
    })
}

fn pair_rows(j: &two_photon::JointDistribution) -> Vec<PairRow> {
    j.entries()
        .into_iter()
        .map(|(p, q, probability)| PairRow { p, q, probability })
        .collect()
}

fn compute_two_photon(r: &Resolved) -> Result<TwoPhotonResult> {
    let u = two_photon::single_particle_unitary(&r.walk, r.inputs, r.basis, &r.options)?;
    let mut models = Vec::new();
    let mut sym = BTreeMap::new();
    for &model in &r.models {
        let pre = two_photon::joint(&u, model);
        let post = two_photon::bs_postselect(&pre)?;
        let oam = two_photon::symmetrized_oam_joint(&post)?;
        let violations = Bound::BOTH
            .iter()
            .map(|&b| analysis::inequality(&post, b))
            .collect();
        models.push(ModelResult {
            model,
            pre_bs: pair_rows(&pre),
            post_bs: pair_rows(&post),
            success_probability: post.total(),
            oam_joint: oam.iter().map(|(&k, &v)| (k, v)).collect(),
            violations,
        });
        sym.insert(model, oam);
    }
    let tv_bosonic_distinguishable = match (sym.get(&Model::Bosonic), sym.get(&Model::Distinguishable)) {
        (Some(a), Some(b)) => Some(analysis::total_variation(a, b)?),
        _ => None,
    };
    Ok(TwoPhotonResult {
        models,
        tv_bosonic_distinguishable,
    })
}

fn distribution_rows(d: &OamDistribution) -> Vec<Vec<String>> {
    trimmed(d)
        .into_iter()
        .map(|(m, p)| vec![m.to_string(), fmt_f64(p)])
        .collect()
}

fn label_pair_rows(rows: &[PairRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.p.pol.to_string(),
                r.p.m.to_string(),
                r.q.pol.to_string(),
                r.q.m.to_string(),
                fmt_f64(r.probability),
            ]
        })
        .collect()
}

fn violation_rows(reports: &[ViolationReport]) -> Vec<Vec<String>> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    reports
        .iter()
        .flat_map(|rep| {
            rep.violations.iter().map(move |v| {
                vec![
                    rep.bound.name().to_string(),
                    v.p.pol.to_string(),
                    v.p.m.to_string(),
                    v.q.pol.to_string(),
                    v.q.m.to_string(),
                    fmt_f64(v.t),
                    opt(v.sigma_t),
                    opt(v.significance),
                ]
            })
        })
        .collect()
}

const VIOLATION_HEADER: [&str; 8] = ["bound", "pol1", "m1", "pol2", "m2", "t", "sigma_t", "significance"];

/// Writes a bundle into `dir` (created if needed) and returns the file names.
pub fn write_bundle(dir: &Path, bundle: &ResultBundle, format: Format) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    match format {
        Format::Json => {
            let name = "result.json";
            fs::write(dir.join(name), serde_json::to_string_pretty(&bundle.payload)? + "\n")?;
            files.push(name.to_string());
        }
        Format::Csv => {
            let mut emit = |name: String, header: &[&str], rows: Vec<Vec<String>>| -> Result<()> {
                write_csv(&dir.join(&name), header, &rows)?;
                files.push(name);
                Ok(())
            };
            match &bundle.payload {
                Payload::Single(s) => {
                    emit("distribution.csv".into(), &["m", "probability"], distribution_rows(&s.distribution))?;
                    let inter = s
                        .intermediate
                        .iter()
                        .enumerate()
                        .flat_map(|(k, d)| {
                            distribution_rows(d).into_iter().map(move |mut row| {
                                row.insert(0, (k + 1).to_string());
                                row
                            })
                        })
                        .collect();
                    emit("intermediate.csv".into(), &["step", "m", "probability"], inter)?;
                    let stats = vec![
                        vec!["mean".into(), fmt_f64(s.mean)],
                        vec!["variance".into(), fmt_f64(s.variance)],
                        vec!["retained".into(), fmt_f64(s.distribution.retained)],
                    ];
                    emit("stats.csv".into(), &["quantity", "value"], stats)?;
                    if let Some(d) = &s.detection {
                        let eta = d
                            .efficiency
                            .iter()
                            .map(|(m, e)| vec![m.to_string(), fmt_f64(*e)])
                            .collect();
                        emit("efficiency.csv".into(), &["m", "efficiency"], eta)?;
                        emit("detected.csv".into(), &["m", "probability"], distribution_rows(&d.detected))?;
                        emit("corrected.csv".into(), &["m", "probability"], distribution_rows(&d.corrected))?;
                    }
                }
                Payload::TwoPhoton(t) => {
                    let pair_header = ["pol1", "m1", "pol2", "m2", "probability"];
                    let mut summary = Vec::new();
                    for mr in &t.models {
                        let name = mr.model.name();
                        emit(format!("joint_pre_{name}.csv"), &pair_header, label_pair_rows(&mr.pre_bs))?;
                        emit(format!("joint_post_{name}.csv"), &pair_header, label_pair_rows(&mr.post_bs))?;
                        let oam = mr
                            .oam_joint
                            .iter()
                            .map(|((a, b), v)| vec![a.to_string(), b.to_string(), fmt_f64(*v)])
                            .collect();
                        emit(format!("oam_joint_{name}.csv"), &["m1", "m2", "probability"], oam)?;
                        emit(format!("violations_{name}.csv"), &VIOLATION_HEADER, violation_rows(&mr.violations))?;
                        let count = |b: Bound| {
                            mr.violations
                                .iter()
                                .find(|r| r.bound == b)
                                .map(|r| r.count())
                                .unwrap_or(0)
                                .to_string()
                        };
                        summary.push(vec![
                            name.to_string(),
                            fmt_f64(mr.success_probability),
                            count(Bound::Classical),
                            count(Bound::Distinguishable),
                        ]);
                    }
                    emit(
                        "summary.csv".into(),
                        &["model", "success_probability", "classical_violations", "distinguishable_violations"],
                        summary,
                    )?;
                    if let Some(tv) = t.tv_bosonic_distinguishable {
                        emit("tv_distance.csv".into(), &["models", "tv_distance"], vec![vec![
                            "bosonic-distinguishable".into(),
                            fmt_f64(tv),
                        ]])?;
                    }
                }
            }
        }
    }
    #[derive(Serialize)]
    struct Manifest<'a> {
        #[serde(flatten)]
        metadata: &'a Metadata,
        config: &'a Resolved,
        files: &'a [String],
    }
    let manifest = Manifest {
        metadata: &bundle.metadata,
        config: &bundle.config,
        files: &files,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(files)
}

/// Where and how a command writes its results.
#[derive(Debug, Clone, Default)]
pub struct OutputTarget {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl OutputTarget {
    fn resolve(&self, cfg: &ExperimentConfig) -> Result<(PathBuf, Format)> {
        let dir = self
            .dir
            .clone()
            .or_else(|| cfg.output.dir.clone())
            .ok_or_else(|| Error::Config("no output directory (use --out or output.dir)".into()))?;
        Ok((dir, self.format.unwrap_or(cfg.output.format)))
    }
}

fn read_config(path: &Path) -> Result<(String, ExperimentConfig)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = ExperimentConfig::from_toml(&text)?;
    Ok((text, cfg))
}

/// Runs a non-swept configuration file and writes its bundle. `expect`
/// rejects files written for the other mode.
pub fn run(config_path: &Path, target: &OutputTarget, expect: Option<Mode>) -> Result<ResultBundle> {
    let (text, cfg) = read_config(config_path)?;
    check_mode(&cfg, expect)?;
    let resolved = cfg.resolve()?;
    let (dir, format) = target.resolve(&cfg)?;
    let bundle = ResultBundle {
        metadata: metadata(&text, None),
        payload: compute(&resolved)?,
        config: resolved,
    };
    write_bundle(&dir, &bundle, format)?;
    Ok(bundle)
}

fn check_mode(cfg: &ExperimentConfig, expect: Option<Mode>) -> Result<()> {
    match expect {
        Some(m) if m != cfg.mode => Err(Error::Config(format!(
            "configuration is for mode {:?}, command expects {:?}",
            cfg.mode, m
        ))),
        _ => Ok(()),
    }
}

/// Runs every point of the configuration's single ranged parameter in
/// parallel, writing `point_NNN/` bundles and `summary.csv` into the output
/// directory. A configuration without a range runs as one point.
pub fn sweep(config_path: &Path, target: &OutputTarget) -> Result<Vec<ResultBundle>> {
    let (text, cfg) = read_config(config_path)?;
    let (dir, format) = target.resolve(&cfg)?;
    let points: Vec<Option<SweepPoint>> = match cfg.sweep_grid()? {
        Some((param, grid)) => grid
            .into_iter()
            .enumerate()
            .map(|(index, value)| Some(SweepPoint { index, param, value }))
            .collect(),
        None => vec![None],
    };
    // resolve everything first so configuration errors surface before any work
    let resolved = points
        .iter()
        .map(|pt| cfg.resolve_at(pt.as_ref().map(|p| (p.param, p.value))))
        .collect::<Result<Vec<_>>>()?;
    let bundles = points
        .into_par_iter()
        .zip(resolved)
        .enumerate()
        .map(|(i, (pt, r))| {
            let bundle = ResultBundle {
                metadata: metadata(&text, pt),
                payload: compute(&r)?,
                config: r,
            };
            write_bundle(&dir.join(format!("point_{i:03}")), &bundle, format)?;
            Ok(bundle)
        })
        .collect::<Result<Vec<_>>>()?;
    write_sweep_summary(&dir.join("summary.csv"), &bundles)?;
    Ok(bundles)
}

fn write_sweep_summary(path: &Path, bundles: &[ResultBundle]) -> Result<()> {
    let param = bundles
        .iter()
        .find_map(|b| b.metadata.sweep.as_ref().map(|s| s.param.name()))
        .unwrap_or("value");
    let value = |b: &ResultBundle| {
        b.metadata
            .sweep
            .as_ref()
            .map(|s| fmt_f64(s.value))
            .unwrap_or_default()
    };
    let mut rows = Vec::new();
    let single = matches!(bundles.first().map(|b| &b.payload), Some(Payload::Single(_)));
    for (i, b) in bundles.iter().enumerate() {
        match &b.payload {
            Payload::Single(s) => rows.push(vec![
                i.to_string(),
                value(b),
                fmt_f64(s.mean),
                fmt_f64(s.variance),
                fmt_f64(s.distribution.retained),
            ]),
            Payload::TwoPhoton(t) => {
                for mr in &t.models {
                    let count = |bound: Bound| {
                        mr.violations
                            .iter()
                            .find(|r| r.bound == bound)
                            .map(|r| r.count())
                            .unwrap_or(0)
                            .to_string()
                    };
                    rows.push(vec![
                        i.to_string(),
                        value(b),
                        mr.model.name().to_string(),
                        fmt_f64(mr.success_probability),
                        count(Bound::Classical),
                        count(Bound::Distinguishable),
                    ]);
                }
            }
        }
    }
    if single {
        write_csv(path, &["index", param, "mean", "variance", "retained"], &rows)
    } else {
        write_csv(
            path,
            &["index", param, "model", "success_probability", "classical_violations", "distinguishable_violations"],
            &rows,
        )
    }
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map(|p| p.line()).unwrap_or(0)
}

/// Reads a coincidence-count file with header `pol1,m1,pol2,m2,counts`.
/// With `merge`, `(p, q)` and `(q, p)` are summed into one cell.
pub fn ingest_counts(path: &Path, merge: bool) -> Result<CountTable> {
    let file = fs::File::open(path)?;
    read_counts(file, merge)
}

pub fn read_counts(reader: impl std::io::Read, merge: bool) -> Result<CountTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse {
        line: csv_line(&e).max(1),
        message: e.to_string(),
    })?;
    let expected = ["pol1", "m1", "pol2", "m2", "counts"];
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", expected.join(",")),
        });
    }
    let mut table = CountTable::new(merge);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: csv_line(&e),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let perr = |message: String| Error::Parse { line, message };
        let pol = |s: &str| s.parse::<Polarization>().map_err(|e| perr(e.to_string()));
        let int = |s: &str, what: &str| {
            s.parse::<i64>()
                .map_err(|_| perr(format!("{what} {s:?} is not an integer")))
        };
        let p = Label::new(pol(&rec[0])?, int(&rec[1], "m1")?);
        let q = Label::new(pol(&rec[2])?, int(&rec[3], "m2")?);
        let n = rec[4]
            .parse::<i128>()
            .map_err(|_| perr(format!("count {:?} is not an integer", &rec[4])))?;
        if n < 0 {
            return Err(Error::NegativeCount { line });
        }
        let n = u64::try_from(n).map_err(|_| perr("count too large".into()))?;
        table.add(p, q, n);
    }
    Ok(table)
}

/// Reads a `m,probability` file written by [`write_bundle`].
pub fn read_distribution(path: &Path, n_steps: usize) -> Result<OamDistribution> {
    let mut rdr = csv::ReaderBuilder::new().from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != ["m", "probability"] {
        return Err(Error::Parse {
            line: 1,
            message: "expected header m,probability".into(),
        });
    }
    let mut probs = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: csv_line(&e),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let m = rec[0].parse::<i64>().map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let p = rec[1].parse::<f64>().map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        probs.insert(m, p);
    }
    Ok(OamDistribution::from_probs(probs, n_steps))
}

/// Bound tests on a count table, with Poisson significances and an optional
/// bootstrap cross-check of each σ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountsAnalysis {
    pub total_counts: u64,
    pub merged: bool,
    pub reports: Vec<ViolationReport>,
    /// Bootstrap σ of `T` in probability units, aligned with each report's
    /// violations.
    pub bootstrap_sigma_t: Option<Vec<Vec<f64>>>,
}

pub fn analyze_counts(table: &CountTable, bootstrap: Option<(usize, u64)>) -> Result<CountsAnalysis> {
    let reports = Bound::BOTH
        .iter()
        .map(|&b| analysis::significance(table, b))
        .collect::<Result<Vec<_>>>()?;
    let total = table.total() as f64;
    let bootstrap_sigma_t = match bootstrap {
        None => None,
        Some((samples, seed)) => Some(
            reports
                .iter()
                .map(|rep| {
                    rep.violations
                        .iter()
                        .map(|v| {
                            analysis::bootstrap_sigma(table, v.p, v.q, rep.bound, samples, seed)
                                .map(|s| s / total)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(CountsAnalysis {
        total_counts: table.total(),
        merged: table.is_merged(),
        reports,
        bootstrap_sigma_t,
    })
}

pub fn write_counts_analysis(dir: &Path, a: &CountsAnalysis, format: Format) -> Result<()> {
    fs::create_dir_all(dir)?;
    match format {
        Format::Json => {
            fs::write(dir.join("violations.json"), serde_json::to_string_pretty(a)? + "\n")?;
        }
        Format::Csv => {
            let mut rows = violation_rows(&a.reports);
            let mut header = VIOLATION_HEADER.to_vec();
            if let Some(bs) = &a.bootstrap_sigma_t {
                header.push("bootstrap_sigma_t");
                for (row, s) in rows.iter_mut().zip(bs.iter().flatten()) {
                    row.push(fmt_f64(*s));
                }
            }
            write_csv(&dir.join("violations.csv"), &header, &rows)?;
        }
    }
    Ok(())
}

/// `m, p, c_p, |c_p|²` rows for `m = 0..=m_max`.
pub fn radial_coeff_rows(m_max: u32, p_max: u32) -> Vec<Vec<String>> {
    (0..=i64::from(m_max))
        .flat_map(|m| {
            let c = modes::qp_radial_coeffs(m, p_max);
            c.coeffs
                .into_iter()
                .enumerate()
                .map(move |(p, v)| vec![m.to_string(), p.to_string(), fmt_f64(v), fmt_f64(v * v)])
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `m, efficiency` rows for `m = −m_max..=m_max`.
pub fn coupling_rows(m_max: u32, sigma_over_w0: f64) -> Result<Vec<Vec<String>>> {
    let m_max = i64::from(m_max);
    (-m_max..=m_max)
        .into_par_iter()
        .map(|m| Ok(vec![m.to_string(), fmt_f64(modes::coupling_efficiency(m, sigma_over_w0)?)]))
        .collect()
}

/// Pair probabilities of a count table, for callers that want the raw ratios.
pub fn count_ratios(table: &CountTable) -> Vec<(Label, Label, f64)> {
    let labels = table.labels();
    let mut out = Vec::new();
    for &p in &labels {
        for &q in &labels {
            let v = table.pair_prob(p, q);
            if v > 0.0 {
                out.push((p, q, v));
            }
        }
    }
    out
}

//! Vibration snapshot ingestion and tabular preprocessing: RMS features,
//! Mahalanobis labelling, stratified splits, SMOTE, windowing and smoothing.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::derive_seed;
use crate::synthdata::FeatureScaler;

const TIMESTAMP_FORMAT: &str = "%Y.%m.%d.%H.%M.%S";

/// One snapshot: channel-major samples (`channels[c][i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub timestamp: NaiveDateTime,
    pub channels: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotArchive {
    pub snapshots: Vec<Snapshot>,
    pub channel_count: usize,
}

fn format_err(file: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        file: file.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn snapshot_files(dir: &Path) -> Result<Vec<(NaiveDateTime, PathBuf)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if name.starts_with('.') {
            continue;
        }
        let ts = NaiveDateTime::parse_from_str(name, TIMESTAMP_FORMAT)
            .map_err(|e| format_err(&path, 0, format!("file name is not a timestamp: {e}")))?;
        files.push((ts, path));
    }
    files.sort();
    if let Some(w) = files.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(format_err(&w[1].1, 0, "duplicate snapshot timestamp"));
    }
    if files.is_empty() {
        return Err(format_err(dir, 0, "no snapshot files found"));
    }
    Ok(files)
}

/// Parses one whitespace-separated snapshot file into channel-major columns.
pub fn parse_snapshot(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut channels: Vec<Vec<f64>> = Vec::new();
    let mut row = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        row.clear();
        for cell in line.split_whitespace() {
            let v: f64 = cell
                .parse()
                .map_err(|_| format_err(path, lineno, format!("non-numeric cell {cell:?}")))?;
            row.push(v);
        }
        if channels.is_empty() {
            channels = vec![Vec::new(); row.len()];
        } else if row.len() != channels.len() {
            return Err(format_err(
                path,
                lineno,
                format!("row has {} columns, expected {}", row.len(), channels.len()),
            ));
        }
        for (ch, &v) in channels.iter_mut().zip(&row) {
            ch.push(v);
        }
    }
    if channels.is_empty() {
        return Err(format_err(path, 0, "empty snapshot"));
    }
    Ok(channels)
}

fn check_uniform(
    path: &Path,
    channels: &[Vec<f64>],
    shape: &mut Option<(usize, usize)>,
) -> Result<()> {
    let this = (channels.len(), channels[0].len());
    match shape {
        None => *shape = Some(this),
        Some(s) if *s != this => {
            return Err(format_err(
                path,
                0,
                format!(
                    "snapshot has {} channels × {} samples, expected {} × {}",
                    this.0, this.1, s.0, s.1
                ),
            ))
        }
        _ => {}
    }
    Ok(())
}

/// Loads every timestamp-named file in `dir`, sorted by timestamp.
pub fn load_snapshots(dir: &Path) -> Result<SnapshotArchive> {
    let files = snapshot_files(dir)?;
    let parsed = files
        .par_iter()
        .map(|(ts, path)| {
            parse_snapshot(path).map(|channels| Snapshot {
                timestamp: *ts,
                channels,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut shape = None;
    for (snap, (_, path)) in parsed.iter().zip(&files) {
        check_uniform(path, &snap.channels, &mut shape)?;
    }
    Ok(SnapshotArchive {
        channel_count: shape.map_or(0, |s| s.0),
        snapshots: parsed,
    })
}

/// Per-snapshot RMS rows, computed file by file without holding raw samples.
pub fn load_rms_features(dir: &Path) -> Result<(Vec<NaiveDateTime>, Vec<Vec<f64>>)> {
    let files = snapshot_files(dir)?;
    let rows = files
        .par_iter()
        .map(|(_, path)| {
            let channels = parse_snapshot(path)?;
            let shape = (channels.len(), channels[0].len());
            let rms_row = channels.iter().map(|c| rms(c)).collect::<Result<Vec<_>>>()?;
            Ok((shape, rms_row))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(((shape, _), (_, path))) = rows
        .iter()
        .zip(&files)
        .find(|((shape, _), _)| *shape != rows[0].0)
    {
        return Err(format_err(
            path,
            0,
            format!(
                "snapshot has {} channels × {} samples, expected {} × {}",
                shape.0, shape.1, rows[0].0 .0, rows[0].0 .1
            ),
        ));
    }
    Ok((
        files.into_iter().map(|(ts, _)| ts).collect(),
        rows.into_iter().map(|(_, r)| r).collect(),
    ))
}

pub fn rms(signal: &[f64]) -> Result<f64> {
    if signal.is_empty() {
        return Err(Error::contract("rms of an empty signal"));
    }
    Ok((signal.iter().map(|v| v * v).sum::<f64>() / signal.len() as f64).sqrt())
}

/// Mean and inverse covariance of a healthy reference set.
#[derive(Debug, Clone, PartialEq)]
pub struct MahalanobisReference {
    pub mean: DVector<f64>,
    pub inverse_covariance: DMatrix<f64>,
    /// Ridge added to the covariance diagonal, 0 when none was needed.
    pub ridge: f64,
}

/// Reciprocal condition estimate below which the covariance gets a ridge.
const NEAR_SINGULAR: f64 = 1e-12;

impl MahalanobisReference {
    pub fn fit(reference: &[Vec<f64>]) -> Result<Self> {
        let d = reference
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::contract("empty reference set"))?;
        if d == 0 {
            return Err(Error::contract("zero-dimensional features"));
        }
        if reference.len() < d + 1 {
            return Err(Error::contract(format!(
                "{} reference rows for dimension {d}; need at least {}",
                reference.len(),
                d + 1
            )));
        }
        if reference.iter().any(|r| r.len() != d) {
            return Err(Error::contract("ragged reference rows"));
        }
        let n = reference.len() as f64;
        let mut mean = DVector::zeros(d);
        for row in reference {
            mean += DVector::from_column_slice(row);
        }
        mean /= n;
        let mut cov = DMatrix::zeros(d, d);
        for row in reference {
            let c = DVector::from_column_slice(row) - &mean;
            cov += &c * c.transpose();
        }
        cov /= n - 1.0;

        let eig = cov.clone().symmetric_eigen();
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        let mut ridge = 0.0;
        if !(max > 0.0) || min <= NEAR_SINGULAR * max {
            ridge = 1e-9 * cov.trace() / d as f64;
            for i in 0..d {
                cov[(i, i)] += ridge;
            }
        }
        let inverse_covariance = cov
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::Degenerate("covariance singular after regularization".into()))?;
        Ok(Self {
            mean,
            inverse_covariance,
            ridge,
        })
    }

    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.mean.len() {
            return Err(Error::contract("feature dimension mismatch"));
        }
        let diff = DVector::from_column_slice(x) - &self.mean;
        let q = (diff.transpose() * &self.inverse_covariance * &diff)[(0, 0)];
        Ok(q.max(0.0).sqrt())
    }
}

pub fn mahalanobis(x: &[f64], reference: &[Vec<f64>]) -> Result<f64> {
    MahalanobisReference::fit(reference)?.distance(x)
}

/// Labels `values[i] > mean + multiplier·std` over the first `window`
/// values (population standard deviation).
pub fn label_by_threshold(values: &[f64], window: usize, multiplier: f64) -> Result<(Vec<u8>, f64)> {
    if window == 0 || window >= values.len() {
        return Err(Error::contract(format!(
            "reference window {window} must be in 1..{}",
            values.len()
        )));
    }
    let head = &values[..window];
    let mean = head.iter().sum::<f64>() / window as f64;
    let var = head.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / window as f64;
    let threshold = mean + multiplier * var.sqrt();
    let labels = values.iter().map(|&v| u8::from(v > threshold)).collect();
    Ok((labels, threshold))
}

/// Per-class seeded split; each class contributes round(count·fraction) test
/// rows. Both index lists are ascending.
pub fn stratified_split(labels: &[u8], test_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::contract("test fraction must lie in (0, 1)"));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.is_empty() {
            return Err(Error::contract(format!("class {class} has no rows")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[u64::from(class)]));
        idx.shuffle(&mut rng);
        let n_test = (idx.len() as f64 * test_fraction).round() as usize;
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::contract("labels must be 0 or 1"));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Synthetic minority rows x + u·(x_nn − x), u ~ U(0, 1) open, until the
/// minority reaches `target_count` rows.
pub fn smote(minority: &[Vec<f64>], k: usize, target_count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if minority.len() < 2 {
        return Err(Error::contract("SMOTE needs at least two minority rows"));
    }
    if k == 0 || k > minority.len() - 1 {
        return Err(Error::contract(format!(
            "k = {k} neighbors invalid for {} minority rows",
            minority.len()
        )));
    }
    let needed = target_count.saturating_sub(minority.len());
    if needed == 0 {
        return Ok(Vec::new());
    }
    // neighbor lists, ties by lower row index
    let neighbors: Vec<Vec<usize>> = (0..minority.len())
        .map(|i| {
            let mut others: Vec<(f64, usize)> = (0..minority.len())
                .filter(|&j| j != i)
                .map(|j| (squared_distance(&minority[i], &minority[j]), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(needed);
    for _ in 0..needed {
        let i = rng.random_range(0..minority.len());
        let j = neighbors[i][rng.random_range(0..k)];
        let mut u: f64 = rng.random();
        while u == 0.0 {
            u = rng.random();
        }
        let row = minority[i]
            .iter()
            .zip(&minority[j])
            .map(|(a, b)| a + u * (b - a))
            .collect();
        out.push(row);
    }
    Ok(out)
}

pub fn sliding_window(series: &[f64], window: usize, stride: usize) -> Result<Vec<&[f64]>> {
    if window == 0 || window > series.len() {
        return Err(Error::contract(format!(
            "window {window} does not fit a series of length {}",
            series.len()
        )));
    }
    if stride == 0 {
        return Err(Error::contract("stride must be at least 1"));
    }
    Ok(series.windows(window).step_by(stride).collect())
}

/// Index into `0..n` under half-sample symmetric reflection (d c b a | a b c d | d c b a).
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

/// Convolution with a normalized Gaussian truncated at ⌈4σ⌉, reflect padding.
pub fn gaussian_smooth(series: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::contract(format!("sigma must be positive, got {sigma}")));
    }
    if series.is_empty() {
        return Ok(Vec::new());
    }
    let radius = (4.0 * sigma).ceil() as isize;
    let mut kernel: Vec<f64> = (-radius..=radius)
        .map(|k| (-0.5 * (k as f64 / sigma).powi(2)).exp())
        .collect();
    let total: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|w| *w /= total);
    let n = series.len();
    Ok((0..n as isize)
        .map(|i| {
            kernel
                .iter()
                .zip(-radius..=radius)
                .map(|(w, k)| w * series[reflect(i + k, n)])
                .sum()
        })
        .collect())
}

/// Settings for the bearing preprocessing chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepConfig {
    pub reference_window: usize,
    pub sigma_multiplier: f64,
    pub test_fraction: f64,
    pub smote_k: usize,
    pub seed: u64,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self {
            reference_window: 200,
            sigma_multiplier: 3.0,
            test_fraction: 0.2,
            smote_k: 5,
            seed: 0,
        }
    }
}

/// Output of [`prepare_bearing_data`].
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub rms: Vec<Vec<f64>>,
    pub mahalanobis: Vec<f64>,
    pub labels: Vec<u8>,
    pub threshold: f64,
    pub covariance_ridge: f64,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub synthetic_rows: usize,
    pub scaler: FeatureScaler,
    /// Scaled training rows, original rows first then SMOTE rows.
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<u8>,
    pub test_x: Vec<Vec<f64>>,
    pub test_y: Vec<u8>,
}

/// RMS table → Mahalanobis distance against the first `reference_window`
/// rows → threshold labels → stratified split → SMOTE on the training
/// minority → [−1, 1] scaling fitted on the training rows only.
pub fn prepare_bearing_data(rms_rows: Vec<Vec<f64>>, cfg: &PrepConfig) -> Result<PreparedData> {
    if cfg.reference_window >= rms_rows.len() {
        return Err(Error::contract(format!(
            "reference window {} must be shorter than the {} rows",
            cfg.reference_window,
            rms_rows.len()
        )));
    }
    let reference = MahalanobisReference::fit(&rms_rows[..cfg.reference_window])?;
    let md = rms_rows
        .iter()
        .map(|r| reference.distance(r))
        .collect::<Result<Vec<_>>>()?;
    let (labels, threshold) = label_by_threshold(&md, cfg.reference_window, cfg.sigma_multiplier)?;
    let (train_idx, test_idx) =
        stratified_split(&labels, cfg.test_fraction, derive_seed(cfg.seed, &[1]))?;

    let mut train_rows: Vec<Vec<f64>> = train_idx.iter().map(|&i| rms_rows[i].clone()).collect();
    let mut train_y: Vec<u8> = train_idx.iter().map(|&i| labels[i]).collect();
    let positives = train_y.iter().filter(|&&y| y == 1).count();
    let negatives = train_y.len() - positives;
    let minority_class = u8::from(positives < negatives);
    let minority: Vec<Vec<f64>> = train_rows
        .iter()
        .zip(&train_y)
        .filter(|(_, &y)| y == minority_class)
        .map(|(r, _)| r.clone())
        .collect();
    let majority = positives.max(negatives);
    let synthetic = if minority.len() >= 2 && minority.len() < majority {
        let k = cfg.smote_k.min(minority.len() - 1);
        smote(&minority, k, majority, derive_seed(cfg.seed, &[2]))?
    } else {
        Vec::new()
    };
    let synthetic_rows = synthetic.len();
    train_y.extend(std::iter::repeat_n(minority_class, synthetic_rows));
    train_rows.extend(synthetic);

    let scaler = FeatureScaler::fit(&train_rows, -1.0, 1.0)?;
    let train_x = scaler.transform(&train_rows);
    let test_rows: Vec<Vec<f64>> = test_idx.iter().map(|&i| rms_rows[i].clone()).collect();
    let test_x = scaler.transform(&test_rows);
    let test_y = test_idx.iter().map(|&i| labels[i]).collect();

    Ok(PreparedData {
        rms: rms_rows,
        mahalanobis: md,
        labels,
        threshold,
        covariance_ridge: reference.ridge,
        train_indices: train_idx,
        test_indices: test_idx,
        synthetic_rows,
        scaler,
        train_x,
        train_y,
        test_x,
        test_y,
    })
}

/// Shortest round-trip decimal form used in every emitted CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Serialize)]
struct PrepManifest<'a> {
    snapshots: usize,
    channels: usize,
    config: &'a PrepConfig,
    threshold: f64,
    covariance_ridge: f64,
    positives: usize,
    train_rows: usize,
    synthetic_rows: usize,
    test_rows: usize,
    split_seed: u64,
    smote_seed: u64,
    scaler: &'a FeatureScaler,
}

fn write_labelled(path: &Path, rows: &[Vec<f64>], labels: &[u8]) -> Result<()> {
    let width = rows.first().map_or(0, Vec::len);
    let mut out = (1..=width).map(|c| format!("f{c}")).collect::<Vec<_>>().join(",");
    out.push_str(",label\n");
    for (row, label) in rows.iter().zip(labels) {
        for v in row {
            out.push_str(&fmt_f64(*v));
            out.push(',');
        }
        out.push_str(&format!("{label}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes features.csv, train.csv, test.csv and manifest.json into `out`.
pub fn write_prepared(
    out: &Path,
    timestamps: &[NaiveDateTime],
    data: &PreparedData,
    cfg: &PrepConfig,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let width = data.rms.first().map_or(0, Vec::len);
    let mut features = String::from("timestamp");
    for c in 1..=width {
        features.push_str(&format!(",rms{c}"));
    }
    features.push_str(",md,label\n");
    for i in 0..data.rms.len() {
        features.push_str(&timestamps[i].format(TIMESTAMP_FORMAT).to_string());
        for v in &data.rms[i] {
            features.push(',');
            features.push_str(&fmt_f64(*v));
        }
        features.push_str(&format!(",{},{}\n", fmt_f64(data.mahalanobis[i]), data.labels[i]));
    }
    let paths: Vec<PathBuf> = ["features.csv", "train.csv", "test.csv", "manifest.json"]
        .iter()
        .map(|n| out.join(n))
        .collect();
    fs::write(&paths[0], features)?;
    write_labelled(&paths[1], &data.train_x, &data.train_y)?;
    write_labelled(&paths[2], &data.test_x, &data.test_y)?;
    let manifest = PrepManifest {
        snapshots: data.rms.len(),
        channels: width,
        config: cfg,
        threshold: data.threshold,
        covariance_ridge: data.covariance_ridge,
        positives: data.labels.iter().filter(|&&l| l == 1).count(),
        train_rows: data.train_x.len(),
        synthetic_rows: data.synthetic_rows,
        test_rows: data.test_x.len(),
        split_seed: derive_seed(cfg.seed, &[1]),
        smote_seed: derive_seed(cfg.seed, &[2]),
        scaler: &data.scaler,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(&paths[3], json + "\n")?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rms_cases() {
        assert_eq!(rms(&[3.0; 10]).unwrap(), 3.0);
        let alt: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert_eq!(rms(&alt).unwrap(), 1.0);
        let a = 2.5;
        let n = 20_480;
        let sine: Vec<f64> = (0..n)
            .map(|i| a * (2.0 * PI * 7.0 * i as f64 / n as f64).sin())
            .collect();
        assert!((rms(&sine).unwrap() - a / 2f64.sqrt()).abs() < 1e-6);
        assert!(rms(&[]).is_err());
    }

    #[test]
    fn mahalanobis_cases() {
        let reference = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0], vec![2.0, 2.0]];
        assert!(mahalanobis(&[1.0, 1.0], &reference).unwrap().abs() < 1e-12);
        // sample covariance diag(4/3, 4/3) inverted by hand: d² = 9 · 3/4
        let d = mahalanobis(&[4.0, 1.0], &reference).unwrap();
        assert!((d - (27.0f64 / 4.0).sqrt()).abs() < 1e-12);
        assert!(mahalanobis(&[0.0, 0.0], &reference[..2]).is_err());
    }

    #[test]
    fn mahalanobis_regularizes_collinear_features() {
        let reference: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let fit = MahalanobisReference::fit(&reference).unwrap();
        assert!(fit.ridge > 0.0);
        assert!(fit.distance(&[4.5, 9.0]).unwrap() < 1e-6);
    }

    #[test]
    fn mahalanobis_identity_covariance_is_euclidean() {
        let a = 1.5f64.sqrt();
        let reference = vec![vec![a, 0.0], vec![-a, 0.0], vec![0.0, a], vec![0.0, -a]];
        assert!((mahalanobis(&[1.0, 0.0], &reference).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mahalanobis_affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let reference: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..3).map(|_| rng.random::<f64>()).collect())
            .collect();
        let x = vec![0.3, 0.9, -0.2];
        let m = [[2.0, 0.5, 0.0], [0.1, 1.0, -0.3], [0.0, 0.7, 3.0]];
        let map = |v: &Vec<f64>| -> Vec<f64> {
            (0..3).map(|i| (0..3).map(|j| m[i][j] * v[j]).sum::<f64>() + 5.0).collect()
        };
        let before = mahalanobis(&x, &reference).unwrap();
        let mapped: Vec<Vec<f64>> = reference.iter().map(map).collect();
        let after = mahalanobis(&map(&x), &mapped).unwrap();
        assert!((before - after).abs() < 1e-8);
    }

    #[test]
    fn threshold_labels() {
        let (labels, t) = label_by_threshold(&[2.0; 6], 4, 3.0).unwrap();
        assert_eq!((labels, t), (vec![0; 6], 2.0));
        let (labels, t) = label_by_threshold(&[1.0, 1.0, 1.0, 1.0, 10.0], 4, 3.0).unwrap();
        assert_eq!((labels, t), (vec![0, 0, 0, 0, 1], 1.0));
        let (labels, _) = label_by_threshold(&[0.0, 2.0, 1.5, 0.5], 2, 0.0).unwrap();
        assert_eq!(labels, vec![0, 1, 1, 0]);
        assert!(label_by_threshold(&[1.0, 2.0], 2, 3.0).is_err());
    }

    #[test]
    fn split_counts_and_determinism() {
        let labels: Vec<u8> = (0..100).map(|i| u8::from(i < 30)).collect();
        let (train, test) = stratified_split(&labels, 0.2, 9).unwrap();
        let pos = test.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!((pos, test.len() - pos), (6, 14));
        assert_eq!(train.len() + test.len(), 100);
        assert!(train.iter().all(|i| !test.contains(i)));
        assert_eq!((train.clone(), test.clone()), stratified_split(&labels, 0.2, 9).unwrap());
        let (train, test) = stratified_split(&[0, 0, 1, 1], 0.5, 1).unwrap();
        assert_eq!((train.len(), test.len()), (2, 2));
        assert!(stratified_split(&[0, 0, 0], 0.2, 1).is_err());
    }

    #[test]
    fn smote_cases() {
        let minority = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let rows = smote(&minority, 1, 5, 4).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r[0] > 0.0 && r[0] < 1.0 && (r[0] - r[1]).abs() < 1e-15);
        }
        assert!(smote(&minority, 1, 2, 4).unwrap().is_empty());
        assert!(smote(&minority, 2, 5, 4).is_err());
        assert!(smote(&minority[..1], 1, 5, 4).is_err());
    }

    #[test]
    fn windows() {
        let s: Vec<f64> = (0..20).map(f64::from).collect();
        let w = sliding_window(&s, 10, 5).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!((w[0][0], w[1][0], w[2][0]), (0.0, 5.0, 10.0));
        assert_eq!(sliding_window(&s[..10], 10, 5).unwrap().len(), 1);
        let long = vec![0.0; 479_101];
        assert_eq!(sliding_window(&long, 10, 5).unwrap().len(), 95_819);
        assert!(sliding_window(&s, 21, 5).is_err());
    }

    #[test]
    fn gaussian_cases() {
        let flat = gaussian_smooth(&[2.5; 50], 3.0).unwrap();
        assert!(flat.iter().all(|v| (v - 2.5).abs() < 1e-12));
        let mut impulse = vec![0.0; 21];
        impulse[10] = 1.0;
        let out = gaussian_smooth(&impulse, 1.0).unwrap();
        assert!((out[10] - 0.398_942).abs() < 1e-4);
        assert_eq!(out.len(), 21);
        let sym: Vec<f64> = (0..31).map(|i| ((i as f64) - 15.0).abs()).collect();
        let out = gaussian_smooth(&sym, 2.0).unwrap();
        for i in 0..31 {
            assert!((out[i] - out[30 - i]).abs() < 1e-12);
        }
        assert!(gaussian_smooth(&sym, 0.0).is_err());
        // kernel wider than the series still reflects correctly
        assert!(gaussian_smooth(&[1.0; 3], 5.0).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn reflect_indices() {
        let got: Vec<usize> = (-4..8).map(|i| reflect(i, 4)).collect();
        assert_eq!(got, vec![3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0]);
    }
}

//! Acceptance checks, one reported line per criterion. Runs with its own
//! harness so the summary is always printed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qnn_core::bench::capability::{learning_capability, CapabilityConfig};
use qnn_core::bench::classify::{run_classification, ClassificationConfig, LabelledTable};
use qnn_core::bench::metrics::{classification_metrics, roc_auc};
use qnn_core::bench::suite::{run_suite, Preset, SuiteConfig, SuiteOverrides};
use qnn_core::encodings::EncodingFamily;
use qnn_core::model::{build, extract_fourier_coefficients, fourier_series, init_params, param_count};
use qnn_core::pipeline::{load_rms_features, load_snapshots, prepare_bearing_data, PrepConfig};
use qnn_core::simulator::{apply_gate, Bindings};
use qnn_core::spectrum::{analytic_size, frequency_spectrum, omega, turnpike_bound};
use qnn_core::{AnsatzMode, ArchitectureSpec, Circuit, Error, Family, GateOp, StateVector};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shapes_of(area: usize) -> Vec<(usize, usize)> {
    (1..=area).filter(|r| area % r == 0).map(|r| (r, area / r)).collect()
}

const TABLE_SHAPES: [(usize, usize); 9] = [(1, 2), (2, 1), (1, 4), (2, 2), (4, 1), (1, 6), (2, 3), (3, 2), (6, 1)];

// ---------------------------------------------------------------- 1

fn table_value(family: Family, shape: (usize, usize)) -> Option<usize> {
    let area_index = match shape.0 * shape.1 {
        2 => 0,
        4 => 1,
        _ => 2,
    };
    let row = match family {
        Family::Hamming => [2, 4, 6],
        Family::Exponential => [4, 16, 64],
        Family::Binary => [3, 15, 63],
        Family::Ternary => [4, 40, 364],
        Family::Golomb => {
            if shape.0 % 3 == 0 {
                return Some(1624);
            }
            [6, 84, 1098]
        }
        Family::Turnpike => {
            if shape.0 % 3 == 0 {
                return None;
            }
            [6, 84, 1098]
        }
    };
    Some(row[area_index])
}

fn criterion_1() -> Result<String, String> {
    let mut cells = 0;
    for family in Family::ALL {
        for shape in TABLE_SHAPES {
            let (r, l) = shape;
            // single-qubit registers cannot host a 2- or 3-qubit block; the
            // listed value is that of the equal-area q-divisible shape
            let (er, el) = if family.uses_fixed_hamiltonian() && r == 1 {
                let got = omega(family, r, l);
                ensure(matches!(got, Err(Error::Architecture(_))), || {
                    format!("{family} ({r},{l}) should be an architecture error")
                })?;
                (2, l / 2)
            } else {
                (r, l)
            };
            let size = frequency_spectrum(family, er, el).map_err(|e| e.to_string())?.positive_size;
            match table_value(family, shape) {
                Some(expected) => ensure(size == expected, || {
                    format!("{family} ({r},{l}): |Omega+| = {size}, expected {expected}")
                })?,
                None => {
                    let bound = turnpike_bound(er * el, 3).map_err(|e| e.to_string())? as usize;
                    ensure(bound == 1200 && size >= bound, || {
                        format!("turnpike ({r},{l}): {size} below bound {bound}")
                    })?
                }
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} cells exact, turnpike q=3 cells {} >= 1200", omega(Family::Turnpike, 3, 2).unwrap().positive_size()))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Result<String, String> {
    let mut checked = 0;
    for family in Family::ALL {
        for area in 1..=6 {
            for (r, l) in shapes_of(area) {
                let Ok(enc) = EncodingFamily::for_qubits(family, r) else {
                    continue;
                };
                let q = enc.block_width();
                match analytic_size(family, area, q) {
                    Ok(n) => {
                        let size = omega(family, r, l).map_err(|e| e.to_string())?.positive_size();
                        ensure(n == size as u128, || {
                            format!("{family} ({r},{l}): closed form {n}, enumerated {size}")
                        })?;
                        checked += 1;
                    }
                    Err(Error::Unsupported(_)) if family == Family::Turnpike => {}
                    Err(e) => return Err(format!("{family} ({r},{l}): {e}")),
                }
            }
        }
    }
    Ok(format!("{checked} (family, shape) pairs agree"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Result<String, String> {
    let expected_seq = [315, 330, 615, 630, 660, 915, 930, 945, 990];
    for (i, &(r, l)) in TABLE_SHAPES.iter().enumerate() {
        let uni = ArchitectureSpec::univariate(Family::Hamming, r, l);
        let n = param_count(&uni);
        ensure(n == 15 * (r * l + r), || format!("univariate ({r},{l}): {n}"))?;
        ensure(build(&uni).unwrap().parameter_slot_count() == n, || "built circuit disagrees".into())?;
        let seq = ArchitectureSpec::multivariate(Family::Hamming, r, l, 10, AnsatzMode::Sequential);
        let n = param_count(&seq);
        ensure(n == expected_seq[i], || format!("sequential N=10 ({r},{l}): {n}, expected {}", expected_seq[i]))?;
        ensure(build(&seq).unwrap().parameter_slot_count() == n, || "built circuit disagrees".into())?;
    }
    Ok("univariate 15(A+R) and sequential N=10 counts exact".into())
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Result<String, String> {
    let mut worst_mass: f64 = 0.0;
    let mut worst_rec: f64 = 0.0;
    let mut models = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for family in Family::ALL {
        for area in 1..=4 {
            for (r, l) in shapes_of(area) {
                let spec = ArchitectureSpec::univariate(family, r, l);
                let Ok(circuit) = build(&spec) else {
                    continue;
                };
                let spectrum = omega(family, r, l).map_err(|e| e.to_string())?;
                let freqs = spectrum.as_integers().ok_or("non-integer spectrum")?.to_vec();
                let wmax = *freqs.last().unwrap() as usize + 4;
                for _ in 0..20 {
                    let theta = init_params(circuit.parameter_slot_count(), rng.random());
                    let coeffs = extract_fourier_coefficients(&circuit, &theta, wmax, 2 * wmax + 3)
                        .map_err(|e| e.to_string())?;
                    let outside: f64 = coeffs
                        .iter()
                        .filter(|(w, _)| freqs.binary_search(w).is_err())
                        .map(|(_, c)| c.norm_sqr())
                        .sum();
                    worst_mass = worst_mass.max(outside);
                    for _ in 0..5 {
                        let x = rng.random_range(0.0..2.0 * PI);
                        let f = circuit.expectation(&theta, &[x]).unwrap();
                        worst_rec = worst_rec.max((f - fourier_series(&coeffs, x)).abs());
                    }
                }
                models += 1;
            }
        }
    }
    ensure(worst_mass < 1e-9 && worst_rec < 1e-9, || {
        format!("mass outside {worst_mass:e}, reconstruction {worst_rec:e}")
    })?;
    Ok(format!(
        "{models} architectures x 20 thetas: mass outside Omega {worst_mass:.1e}, reconstruction {worst_rec:.1e}"
    ))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Result<String, String> {
    let archs = [
        ArchitectureSpec::univariate(Family::Exponential, 2, 2),
        ArchitectureSpec::univariate(Family::Golomb, 3, 1),
        ArchitectureSpec::multivariate(Family::Ternary, 1, 2, 3, AnsatzMode::Sequential),
        ArchitectureSpec::multivariate(Family::Binary, 2, 1, 2, AnsatzMode::Sequential),
        ArchitectureSpec::multivariate(Family::Turnpike, 2, 1, 2, AnsatzMode::Parallel),
    ];
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for spec in &archs {
        let circuit = build(spec).map_err(|e| e.to_string())?;
        let theta = init_params(circuit.parameter_slot_count(), rng.random());
        let x: Vec<f64> = (0..spec.features).map(|_| rng.random_range(-PI..PI)).collect();
        let (_, grad) = circuit.gradient(&theta, &x).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let k = rng.random_range(0..theta.len());
            let mut p = theta.clone();
            p[k] += h;
            let up = circuit.expectation(&p, &x).unwrap();
            p[k] -= 2.0 * h;
            let down = circuit.expectation(&p, &x).unwrap();
            let fd = (up - down) / (2.0 * h);
            // relative to |fd|, floored so vanishing components compare absolutely
            let rel = (grad[k] - fd).abs() / fd.abs().max(1e-3);
            worst = worst.max(rel);
        }
    }
    ensure(worst < 1e-5, || format!("worst relative error {worst:e}"))?;
    Ok(format!("5 architectures (univariate, sequential, parallel), worst relative error {worst:.1e}"))
}

// ---------------------------------------------------------------- 6

fn kron_single(n: usize, qubit: usize, m: [[Complex64; 2]; 2]) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for q in 0..n {
        let f = if q == qubit {
            DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
        } else {
            DMatrix::identity(2, 2)
        };
        out = out.kronecker(&f);
    }
    out
}

fn dense_unitary(n: usize, gate: &GateOp, params: &[f64], data: &[f64]) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match gate {
        GateOp::GeneralRotation { qubit, slots } => {
            let rz = |t: f64| [[Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)]];
            let ry = |t: f64| [[c((t / 2.0).cos(), 0.0), c(-(t / 2.0).sin(), 0.0)], [c((t / 2.0).sin(), 0.0), c((t / 2.0).cos(), 0.0)]];
            let [a, b, g] = slots.map(|s| params[s]);
            kron_single(n, *qubit, rz(a)) * kron_single(n, *qubit, ry(b)) * kron_single(n, *qubit, rz(g))
        }
        GateOp::ControlledNot { control, target } => {
            let mut m = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                let bit = |q: usize| (i >> (n - 1 - q)) & 1;
                let j = if bit(*control) == 1 { i ^ (1 << (n - 1 - target)) } else { i };
                m[(j, i)] = c(1.0, 0.0);
            }
            m
        }
        GateOp::DiagonalPhase { qubits, angles, data_slot } => {
            let mut m = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                let mut j = 0;
                for &q in qubits {
                    j = (j << 1) | ((i >> (n - 1 - q)) & 1);
                }
                m[(i, i)] = Complex64::from_polar(1.0, -angles[j] * data[*data_slot]);
            }
            m
        }
    }
}

fn random_gate(rng: &mut ChaCha8Rng, n: usize, slot: &mut usize) -> GateOp {
    match rng.random_range(0..3) {
        0 => {
            let g = GateOp::GeneralRotation {
                qubit: rng.random_range(0..n),
                slots: [*slot, *slot + 1, *slot + 2],
            };
            *slot += 3;
            g
        }
        1 if n > 1 => {
            let control = rng.random_range(0..n);
            GateOp::ControlledNot {
                control,
                target: (control + rng.random_range(1..n)) % n,
            }
        }
        _ => {
            let k = rng.random_range(1..=n.min(2));
            let mut qubits: Vec<usize> = Vec::new();
            while qubits.len() < k {
                let q = rng.random_range(0..n);
                if !qubits.contains(&q) {
                    qubits.push(q);
                }
            }
            GateOp::DiagonalPhase {
                angles: (0..1 << k).map(|_| rng.random_range(-3.0..3.0)).collect(),
                qubits,
                data_slot: 0,
            }
        }
    }
}

fn criterion_6() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let n = 6;
    let mut slot = 0;
    let gates: Vec<GateOp> = (0..10_000).map(|_| random_gate(&mut rng, n, &mut slot)).collect();
    let params: Vec<f64> = (0..slot).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let data = [0.83];
    let mut state = StateVector::zero(n).unwrap();
    for g in &gates {
        apply_gate(&mut state, g, Bindings { params: &params, data: &data }).map_err(|e| e.to_string())?;
    }
    let drift = (state.norm_sqr() - 1.0).abs();
    ensure(drift < 1e-12, || format!("norm drift {drift:e}"))?;

    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..5 {
            let mut slot = 0;
            let gates: Vec<GateOp> = (0..60).map(|_| random_gate(&mut rng, n, &mut slot)).collect();
            let params: Vec<f64> = (0..slot).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let x = [rng.random_range(-PI..PI)];
            let circuit = Circuit::new(n, gates.clone(), slot, 1).map_err(|e| e.to_string())?;
            let sim = circuit.run(&params, &x).map_err(|e| e.to_string())?;
            let mut psi = DVector::from_element(1 << n, Complex64::new(0.0, 0.0));
            psi[0] = Complex64::new(1.0, 0.0);
            for g in &gates {
                psi = dense_unitary(n, g, &params, &x) * psi;
            }
            for (a, b) in sim.amplitudes().iter().zip(psi.iter()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    ensure(worst < 1e-10, || format!("dense oracle deviation {worst:e}"))?;
    Ok(format!("norm drift {drift:.1e} after 1e4 gates, dense-matrix deviation {worst:.1e} (R <= 4)"))
}

// ---------------------------------------------------------------- 7 and 8

const MASTER_SEED: u64 = 20_240_101;

fn desk_capability(family: Family, r: usize, l: usize) -> Result<qnn_core::bench::CapabilityResult, String> {
    let pv = Preset::Desk.values();
    let cfg = CapabilityConfig {
        family,
        qubits: r,
        layers: l,
        k_max: 4,
        population: pv.population,
        points: pv.points,
        learning_rate: pv.regression_eta,
        epochs: pv.regression_epochs,
        master_seed: MASTER_SEED,
    };
    learning_capability(&cfg).map_err(|e| e.to_string())
}

fn criteria_7_8() -> Vec<(String, Result<String, String>)> {
    let runs = [
        (Family::Exponential, 2, 1),
        (Family::Hamming, 2, 1),
        (Family::Ternary, 1, 4),
    ];
    let mut results = BTreeMap::new();
    for (f, r, l) in runs {
        match desk_capability(f, r, l) {
            Ok(res) => {
                results.insert(f, res);
            }
            Err(e) => return vec![("7".into(), Err(e.clone())), ("8".into(), Err(e))],
        }
    }
    let exp = &results[&Family::Exponential];
    let ham = &results[&Family::Hamming];
    let ter = &results[&Family::Ternary];
    let floor = ham.per_function.iter().map(|f| f.residual_floor).sum::<f64>() / ham.per_function.len() as f64;

    let a = exp.mu < 1e-3;
    let b = ham.mu >= 0.9 * floor;
    let c = ter.mu >= 10.0 * exp.mu;
    let detail = format!(
        "(a) exponential (2,1) mu4 = {:.3e} {} 1e-3; (b) hamming (2,1) mu4 = {:.3e} vs 0.9 x floor {:.3e}; (c) ternary (1,4) mu4 = {:.3e} = {:.0}x exponential",
        exp.mu,
        if a { "<" } else { ">=" },
        ham.mu,
        0.9 * floor,
        ter.mu,
        ter.mu / exp.mu
    );
    let seven = if a && b && c { Ok(detail) } else { Err(detail) };

    let mut worst_gap = f64::INFINITY;
    let mut count = 0;
    for res in results.values() {
        for f in &res.per_function {
            worst_gap = worst_gap.min(f.final_loss - f.residual_floor);
            count += 1;
        }
    }
    let eight_detail = format!("{count} trained runs, min(final MSE - residual) = {worst_gap:.3e}");
    let eight = if worst_gap >= -1e-6 { Ok(eight_detail) } else { Err(eight_detail) };
    vec![("7".into(), seven), ("8".into(), eight)]
}

// ---------------------------------------------------------------- 9

fn all_pairs_auc(labels: &[u8], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] == 1 && labels[j] == 0 {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst: f64 = 0.0;
    let mut instances = 0;
    while instances < 100 {
        let n = rng.random_range(2..=50);
        let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        if labels.iter().all(|&l| l == labels[0]) {
            continue;
        }
        // coarse grid forces ties
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..=10u8)) / 10.0).collect();
        let got = roc_auc(&labels, &scores).map_err(|e| e.to_string())?;
        worst = worst.max((got - all_pairs_auc(&labels, &scores)).abs());
        instances += 1;
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    let auc = roc_auc(&[0, 0, 1, 1], &[0.1, 0.4, 0.35, 0.8]).unwrap();
    ensure(auc == 0.75, || format!("fixture AUC {auc}"))?;
    let labels = [1, 1, 1, 0, 0, 0, 0, 0, 0, 0];
    let scores = [0.9, 0.8, 0.1, 0.7, 0.2, 0.2, 0.3, 0.1, 0.0, 0.4];
    let m = classification_metrics(&labels, &scores, 0.5).map_err(|e| e.to_string())?;
    ensure(
        m.precision == 2.0 / 3.0 && m.recall == 2.0 / 3.0 && m.f1 == 2.0 / 3.0 && m.accuracy == 0.8,
        || format!("confusion fixture gave {m:?}"),
    )?;
    Ok(format!("100 random instances, max |AUC - all-pairs| = {worst:.1e}; confusion fixtures exact"))
}

// ---------------------------------------------------------------- 10

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/bearing_mini")
}

fn criterion_10_fixture() -> Result<String, String> {
    let archive = load_snapshots(&fixture_dir()).map_err(|e| e.to_string())?;
    ensure(archive.snapshots.len() == 20 && archive.channel_count == 4, || "fixture shape".into())?;
    let (_, rows) = load_rms_features(&fixture_dir()).map_err(|e| e.to_string())?;
    ensure(rows.len() == 20 && rows.iter().all(|r| r.len() == 4), || "feature table shape".into())?;

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(tmp.path().join("2004.02.12.10.32.39"), "1 2 3 4\n1 2 3\n").unwrap();
    match load_snapshots(tmp.path()) {
        Err(Error::Format { line: 2, file, .. }) if file.ends_with("2004.02.12.10.32.39") => {}
        other => return Err(format!("ragged row not reported at line 2: {other:?}")),
    }
    Ok("bundled 20-snapshot fixture: archive 20 x 4 channels, RMS table (20, 4), ragged row rejected".into())
}

/// Full-data check; runs only when the NASA IMS set 2 directory is provided.
fn criterion_10_full() -> Option<Result<String, String>> {
    let dir = PathBuf::from(std::env::var_os("QNN_NASA_SET2_DIR")?);
    Some((|| {
        let (_, rows) = load_rms_features(&dir).map_err(|e| e.to_string())?;
        ensure(rows.len() == 984 && rows[0].len() == 4, || format!("feature table ({}, {})", rows.len(), rows[0].len()))?;
        let prepared = prepare_bearing_data(rows, &PrepConfig { seed: MASTER_SEED, ..PrepConfig::default() })
            .map_err(|e| e.to_string())?;
        let train = LabelledTable { rows: prepared.train_x, labels: prepared.train_y };
        let test = LabelledTable { rows: prepared.test_x, labels: prepared.test_y };
        let pv = Preset::Desk.values();
        let cfg = ClassificationConfig {
            family: Family::Exponential,
            qubits: 2,
            layers: 1,
            ansatz: AnsatzMode::Sequential,
            learning_rate: 0.005,
            epochs: pv.classification_epochs,
            batch_size: pv.batch_size,
            seed: MASTER_SEED,
        };
        let out = run_classification(&cfg, &train, &test).map_err(|e| e.to_string())?;
        let auc = out.metrics.roc_auc.unwrap_or(f64::NAN);
        let detail = format!("(984, 4) table; test ROC-AUC {auc:.4}, accuracy {:.4}", out.metrics.accuracy);
        ensure(auc >= 0.95 && out.metrics.accuracy >= 0.90, || detail.clone())?;
        Ok(detail)
    })())
}

// ---------------------------------------------------------------- 11

fn criterion_11() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let prepared = tmp.path().join("bearing_mini");
    let (ts, rows) = load_rms_features(&fixture_dir()).map_err(|e| e.to_string())?;
    let cfg = PrepConfig { reference_window: 10, smote_k: 1, seed: 5, ..PrepConfig::default() };
    let data = prepare_bearing_data(rows, &cfg).map_err(|e| e.to_string())?;
    qnn_core::pipeline::write_prepared(&prepared, &ts, &data, &cfg).map_err(|e| e.to_string())?;

    let config = format!(
        r#"master_seed = 11
preset = "desk"

[regression]
families = ["hamming", "exponential", "golomb"]
shapes = [[2, 1], [1, 2]]
k = [2]
eta = [0.05]
population = 3
epochs = 40
points = 64

[classification]
datasets = ["{}"]
families = ["binary"]
shapes = [[1, 1], [2, 1]]
eta = [0.05, 0.01]
epochs = 20
batch = 8
"#,
        prepared.display()
    );
    let path = tmp.path().join("suite.toml");
    fs::write(&path, config).unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in [1usize, 2, 3, 1].into_iter().enumerate() {
        let over = SuiteOverrides { workers: Some(workers), ..SuiteOverrides::default() };
        let cfg = SuiteConfig::load(&path, over).map_err(|e| e.to_string())?;
        let out = tmp.path().join(format!("run{i}"));
        let report = run_suite(&cfg, &out).map_err(|e| e.to_string())?;
        let mut bytes = fs::read(&report.results).unwrap();
        for p in &report.plots {
            bytes.extend(fs::read(p).unwrap());
        }
        outputs.push((workers, bytes, report.records.len(), report.failures.is_some()));
    }
    let (_, first, rows, failed) = &outputs[0];
    ensure(*rows == 10, || format!("expected 10 cells, got {rows}"))?;
    ensure(*failed, || "golomb R=1 cells should be recorded as per-cell failures".into())?;
    for (w, bytes, _, _) in &outputs[1..] {
        ensure(bytes == first, || format!("results differ at {w} workers"))?;
    }
    Ok(format!("{rows}-cell suite byte-identical across 1, 2, 3 workers and a rerun"))
}

// ---------------------------------------------------------------- harness

fn run_one(id: &str, name: &str, f: Check) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
    report(id, name, &result, start)
}

fn report(id: &str, name: &str, result: &Result<String, String>, start: Instant) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("PASS criterion {id:>2} {name}: {detail} [{secs:.1}s]");
            true
        }
        Err(detail) => {
            println!("FAIL criterion {id:>2} {name}: {detail} [{secs:.1}s]");
            false
        }
    }
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| filter.is_empty() || filter.iter().any(|f| f == id);
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let checks: [(&str, &str, Check); 7] = [
        ("1", "spectrum table", criterion_1),
        ("2", "closed forms", criterion_2),
        ("3", "parameter counts", criterion_3),
        ("4", "Fourier form", criterion_4),
        ("5", "gradients", criterion_5),
        ("6", "unitarity and dense oracle", criterion_6),
        ("9", "classification metrics", criterion_9),
    ];
    let mut ok = true;
    for (id, name, f) in checks {
        if wanted(id) {
            ok &= run_one(id, name, f);
        }
    }
    if wanted("7") || wanted("8") {
        let start = Instant::now();
        let results = catch_unwind(criteria_7_8).unwrap_or_else(|_| {
            vec![("7".into(), Err("panicked".into())), ("8".into(), Err("panicked".into()))]
        });
        for (id, r) in results {
            let name = if id == "7" { "desk learning-capability ordering" } else { "truncation lower bound" };
            ok &= report(&id, name, &r, start);
        }
    }
    if wanted("10") {
        ok &= run_one("10", "bearing pipeline (fixture)", criterion_10_fixture);
        let start = Instant::now();
        match criterion_10_full() {
            Some(r) => ok &= report("10", "bearing pipeline (full data)", &r, start),
            None => println!("SKIP criterion 10 bearing pipeline (full data): set QNN_NASA_SET2_DIR to the IMS set 2 directory"),
        }
    }
    if wanted("11") {
        ok &= run_one("11", "suite determinism", criterion_11);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

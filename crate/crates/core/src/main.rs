use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qnn_core::bench::capability::{learning_capability, CapabilityConfig};
use qnn_core::bench::classify::{run_classification, ClassificationConfig, LabelledTable};
use qnn_core::bench::suite::{run_suite, Preset, SuiteConfig, SuiteOverrides};
use qnn_core::pipeline::{fmt_f64, load_rms_features, prepare_bearing_data, write_prepared, PrepConfig};
use qnn_core::seeds::derive_seed;
use qnn_core::spectrum::frequency_spectrum;
use qnn_core::synthdata::{build_dataset, sample_target};
use qnn_core::{AnsatzMode, EncodingFamily, Error, Family, Result};

#[derive(Parser)]
#[command(name = "qnn", version, about = "Quantum neural network spectrum and benchmark toolkit")]
struct Cli {
    /// Master seed; every task derives its own stream from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_parser = parse_preset)]
    preset: Option<Preset>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ansatz(s: &str) -> std::result::Result<AnsatzMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Frequency spectrum sizes for every shape of the given areas.
    Spectrum {
        /// Families to tabulate; all when omitted.
        #[arg(long, value_delimiter = ',', value_parser = parse_family)]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 6])]
        areas: Vec<usize>,
    },
    /// Random Fourier targets sampled on the training grid.
    GenSynthetic {
        #[arg(long = "K")]
        k: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Learning capability of one univariate architecture.
    Capability {
        #[command(flatten)]
        arch: ArchArgs,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        population: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Train and evaluate a classifier on a prepared train/test directory.
    Classify {
        #[command(flatten)]
        arch: ArchArgs,
        /// Directory with train.csv and test.csv.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_ansatz, default_value = "sequential")]
        ansatz: AnsatzMode,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        batch: Option<usize>,
    },
    /// Bearing snapshots to labelled, split and scaled feature tables.
    PrepNasa {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 200)]
        ref_window: usize,
        #[arg(long, default_value_t = 3.0)]
        sigma_mult: f64,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[arg(long, default_value_t = 5)]
        smote_k: usize,
    },
    /// Run an experiment grid from a TOML file.
    Suite {
        #[arg(long)]
        config: PathBuf,
        /// Fill the wall_time_s column (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct ArchArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long = "R")]
    r: usize,
    #[arg(long = "L")]
    l: usize,
}

fn out_dir(cli_out: &Option<PathBuf>, default: &str) -> PathBuf {
    cli_out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn write_file(path: &Path, contents: String) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn spectrum_table(families: &[Family], areas: &[usize]) -> Result<String> {
    let families = if families.is_empty() { Family::ALL.to_vec() } else { families.to_vec() };
    let mut csv = String::from("family,area,R,L,q,positive_size,max_gapfree_K\n");
    for &family in &families {
        for &area in areas {
            for r in (1..=area).filter(|r| area % r == 0) {
                let l = area / r;
                match EncodingFamily::for_qubits(family, r) {
                    Err(Error::Architecture(_)) => {
                        let _ = writeln!(csv, "{family},{area},{r},{l},,,");
                    }
                    Err(e) => return Err(e),
                    Ok(enc) => {
                        let rep = frequency_spectrum(family, r, l)?;
                        let _ = writeln!(
                            csv,
                            "{family},{area},{r},{l},{},{},{}",
                            enc.block_width(),
                            rep.positive_size,
                            rep.max_gapfree_k
                        );
                    }
                }
            }
        }
    }
    Ok(csv)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    }
    let pv = cli.preset.unwrap_or(Preset::Desk).values();
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Spectrum { families, areas } => {
            let csv = spectrum_table(families, areas)?;
            match &cli.out {
                Some(dir) => write_file(&dir.join("spectrum.csv"), csv)?,
                None => print!("{csv}"),
            }
        }
        Command::GenSynthetic { k, count, points } => {
            let dir = out_dir(&cli.out, "synthetic");
            let points = points.unwrap_or(pv.points);
            let mut manifest = String::from("index,seed,K,raw_min,raw_max,c0");
            for j in 1..=*k {
                let _ = write!(manifest, ",c{j}_re,c{j}_im");
            }
            manifest.push('\n');
            for i in 0..*count {
                let seed = qnn_core::bench::capability::target_seed(seed, *k, i);
                let g = sample_target(*k, seed)?;
                let data = build_dataset(&g, points)?;
                let mut csv = String::from("x,y\n");
                for (x, y) in data.x.iter().zip(&data.y) {
                    let _ = writeln!(csv, "{},{}", fmt_f64(*x), fmt_f64(*y));
                }
                write_file(&dir.join(format!("function_{i:04}.csv")), csv)?;
                let _ = write!(
                    manifest,
                    "{i},{seed},{k},{},{},{}",
                    fmt_f64(data.raw_min),
                    fmt_f64(data.raw_max),
                    fmt_f64(g.coefficients[0].re)
                );
                for c in &g.coefficients[1..] {
                    let _ = write!(manifest, ",{},{}", fmt_f64(c.re), fmt_f64(c.im));
                }
                manifest.push('\n');
            }
            write_file(&dir.join("manifest.csv"), manifest)?;
            println!("wrote {count} functions to {}", dir.display());
        }
        Command::Capability {
            arch,
            k,
            population,
            points,
            eta,
            epochs,
        } => {
            let cfg = CapabilityConfig {
                family: arch.family,
                qubits: arch.r,
                layers: arch.l,
                k_max: *k,
                population: population.unwrap_or(pv.population),
                points: points.unwrap_or(pv.points),
                learning_rate: eta.unwrap_or(pv.regression_eta),
                epochs: epochs.unwrap_or(pv.regression_epochs),
                master_seed: seed,
            };
            let r = learning_capability(&cfg)?;
            println!(
                "{} (R={}, L={}) K={}: mu={} q25={} q75={}",
                cfg.family,
                cfg.qubits,
                cfg.layers,
                cfg.k_max,
                fmt_f64(r.mu),
                fmt_f64(r.q25),
                fmt_f64(r.q75)
            );
            if let Some(dir) = &cli.out {
                let mut csv = String::from("index,target_seed,init_seed,final_loss,residual_floor,diverged\n");
                for f in &r.per_function {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        f.index,
                        f.target_seed,
                        f.init_seed,
                        fmt_f64(f.final_loss),
                        fmt_f64(f.residual_floor),
                        f.diverged
                    );
                }
                write_file(&dir.join("capability.csv"), csv)?;
            }
        }
        Command::Classify {
            arch,
            data,
            ansatz,
            eta,
            epochs,
            batch,
        } => {
            let (train, test) = LabelledTable::read_split(data)?;
            let cfg = ClassificationConfig {
                family: arch.family,
                qubits: arch.r,
                layers: arch.l,
                ansatz: *ansatz,
                learning_rate: eta.unwrap_or(pv.classification_eta),
                epochs: epochs.unwrap_or(pv.classification_epochs),
                batch_size: batch.unwrap_or(pv.batch_size),
                seed: derive_seed(seed, &[0]),
            };
            let o = run_classification(&cfg, &train, &test)?;
            let m = &o.metrics;
            println!(
                "loss={} accuracy={} precision={} recall={} f1={} roc_auc={}",
                fmt_f64(o.final_loss),
                fmt_f64(m.accuracy),
                fmt_f64(m.precision),
                fmt_f64(m.recall),
                fmt_f64(m.f1),
                m.roc_auc.map(fmt_f64).unwrap_or_else(|| "undefined".into())
            );
            if let Some(dir) = &cli.out {
                let mut csv = String::from("epoch,loss\n");
                for (e, v) in o.loss_history.iter().enumerate() {
                    let _ = writeln!(csv, "{},{}", e + 1, fmt_f64(*v));
                }
                write_file(&dir.join("loss.csv"), csv)?;
            }
        }
        Command::PrepNasa {
            dir,
            ref_window,
            sigma_mult,
            test_fraction,
            smote_k,
        } => {
            let cfg = PrepConfig {
                reference_window: *ref_window,
                sigma_multiplier: *sigma_mult,
                test_fraction: *test_fraction,
                smote_k: *smote_k,
                seed,
            };
            let (timestamps, rows) = load_rms_features(dir)?;
            let prepared = prepare_bearing_data(rows, &cfg)?;
            let out = out_dir(&cli.out, "prepared");
            write_prepared(&out, &timestamps, &prepared, &cfg)?;
            println!(
                "{} snapshots, {} labelled anomalous, threshold {}; wrote {}",
                prepared.rms.len(),
                prepared.labels.iter().filter(|&&l| l == 1).count(),
                fmt_f64(prepared.threshold),
                out.display()
            );
        }
        Command::Suite { config, timing } => {
            let overrides = SuiteOverrides {
                master_seed: cli.seed,
                workers: cli.workers,
                preset: cli.preset,
                record_wall_time: timing.then_some(true),
            };
            let cfg = SuiteConfig::load(config, overrides)?;
            let report = run_suite(&cfg, &out_dir(&cli.out, "results"))?;
            println!("wrote {}", report.results.display());
            if let Some(f) = report.failures {
                eprintln!("some cells failed; see {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

//! Replays the uniform-data autoencoder experiment: train on uniform
//! samples, then compare the pooled W of held-out input with the W of its
//! reconstruction.

use std::fmt::Write as _;
use std::time::Instant;

use kgdbn::dbn::{
    init_network, reconstruct, topology, train_autoencoder, DenseNetwork, TrainConfig,
};
use kgdbn::stats::{derive_seed, gen_uniform, sw_pooled};
use serde::{Deserialize, Serialize};

use crate::CliError;

// sub-stream tags for one seed
pub const TRAIN_STREAM: u64 = 0;
pub const TEST_STREAM: u64 = 1;
pub const INIT_STREAM: u64 = 2;
pub const SHUFFLE_STREAM: u64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproduceConfig {
    pub properties: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub epochs: usize,
    pub lr: f64,
    pub batch: usize,
    pub seed: u64,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            properties: 2,
            train_rows: 500,
            test_rows: 50,
            epochs: 100,
            lr: 0.01,
            batch: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ReproduceConfig,
    /// Pooled sample size of the test set.
    pub n: usize,
    pub w_input: f64,
    pub w_output: f64,
    pub epoch_loss: Vec<f64>,
    pub wall_time_secs: f64,
}

impl RunReport {
    /// Human-readable form. Wall time is confined to the last line.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        writeln!(s, "properties: {}", c.properties).unwrap();
        writeln!(s, "train_rows: {}", c.train_rows).unwrap();
        writeln!(s, "test_rows: {}", c.test_rows).unwrap();
        writeln!(s, "epochs: {}", c.epochs).unwrap();
        writeln!(s, "lr: {}", c.lr).unwrap();
        writeln!(s, "batch: {}", c.batch).unwrap();
        writeln!(s, "seed: {}", c.seed).unwrap();
        writeln!(s, "n: {}", self.n).unwrap();
        writeln!(s, "W_input: {:.5}", self.w_input).unwrap();
        writeln!(s, "W_output: {:.5}", self.w_output).unwrap();
        match (self.epoch_loss.first(), self.epoch_loss.last()) {
            (Some(first), Some(last)) => {
                writeln!(s, "loss: first {first:.6e} final {last:.6e}").unwrap()
            }
            _ => writeln!(s, "loss: untrained").unwrap(),
        }
        let curve: Vec<String> = self.epoch_loss.iter().map(|l| l.to_string()).collect();
        writeln!(s, "loss_curve: {}", curve.join(",")).unwrap();
        writeln!(s, "wall_time_secs: {:.3}", self.wall_time_secs).unwrap();
        s
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    pub model: DenseNetwork,
    pub train_config: TrainConfig,
}

pub fn run(cfg: &ReproduceConfig) -> Result<RunOutcome, CliError> {
    if cfg.train_rows == 0 || cfg.test_rows == 0 {
        return Err(CliError::input("row counts must be positive"));
    }
    if cfg.test_rows * cfg.properties < 3 {
        return Err(CliError::input("test set needs at least 3 values for W"));
    }
    let start = Instant::now();
    let topo = topology(cfg.properties)?;
    let train = gen_uniform(
        cfg.train_rows,
        cfg.properties,
        derive_seed(cfg.seed, TRAIN_STREAM),
    );
    let test = gen_uniform(
        cfg.test_rows,
        cfg.properties,
        derive_seed(cfg.seed, TEST_STREAM),
    );
    let net = init_network(&topo, derive_seed(cfg.seed, INIT_STREAM));
    let train_config = TrainConfig {
        epochs: cfg.epochs,
        learning_rate: cfg.lr,
        batch_size: cfg.batch,
        seed: derive_seed(cfg.seed, SHUFFLE_STREAM),
        shuffle: true,
    };
    let (model, history) = train_autoencoder(net, &train, &train_config)?;
    let output = reconstruct(&model, &test)?;
    if !output.is_finite() {
        return Err(CliError::numerical("reconstruction is not finite"));
    }
    let w_in = sw_pooled(&test)?;
    let w_out = sw_pooled(&output)?;
    Ok(RunOutcome {
        report: RunReport {
            config: cfg.clone(),
            n: w_in.n,
            w_input: w_in.w,
            w_output: w_out.w,
            epoch_loss: history.epoch_loss,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
        model,
        train_config,
    })
}

/// Runs consecutive seeds `cfg.seed..cfg.seed + count` on separate threads;
/// results come back in seed order.
pub fn run_many(cfg: &ReproduceConfig, count: usize) -> Result<Vec<RunOutcome>, CliError> {
    let configs: Vec<ReproduceConfig> = (0..count as u64)
        .map(|i| ReproduceConfig {
            seed: cfg.seed.wrapping_add(i),
            ..cfg.clone()
        })
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| scope.spawn(move || run(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("reproduction thread panicked"))
            .collect()
    })
}

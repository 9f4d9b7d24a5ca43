use serde::{Deserialize, Serialize};

use super::network::{mse, DenseNetwork};
use crate::error::{Error, Result};
use crate::matrix::Dataset;
use crate::stats::SeededRng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Drives minibatch shuffling.
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            learning_rate: 0.01,
            batch_size: 32,
            seed: 0,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be positive".into()));
        }
        Ok(())
    }
}

/// Full-dataset MSE after each epoch.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epoch_loss: Vec<f64>,
}

impl TrainHistory {
    pub fn first(&self) -> Option<f64> {
        self.epoch_loss.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.epoch_loss.last().copied()
    }
}

/// Minibatch SGD fitting `data` to itself.
pub fn train_autoencoder(
    mut net: DenseNetwork,
    data: &Dataset,
    cfg: &TrainConfig,
) -> Result<(DenseNetwork, TrainHistory)> {
    cfg.validate()?;
    if data.rows() == 0 {
        return Err(Error::Empty("training data has no rows".into()));
    }
    if data.cols() != net.input_width() || data.cols() != net.output_width() {
        return Err(Error::Shape(format!(
            "data has {} columns; autoencoder maps {} -> {}",
            data.cols(),
            net.input_width(),
            net.output_width()
        )));
    }

    let mut rng = SeededRng::new(cfg.seed);
    let mut order: Vec<usize> = (0..data.rows()).collect();
    let mut history = TrainHistory::default();
    for epoch in 0..cfg.epochs {
        if cfg.shuffle {
            rng.shuffle(&mut order);
        }
        for chunk in order.chunks(cfg.batch_size) {
            let batch = data.select_rows(chunk);
            let grads = net.backprop(&batch, &batch)?;
            if !grads.is_finite() {
                return Err(Error::Divergence(format!(
                    "non-finite gradient in epoch {}",
                    epoch + 1
                )));
            }
            net.sgd_step(&grads, cfg.learning_rate)?;
        }
        let loss = mse(&net.predict(data)?, data)?;
        if !loss.is_finite() {
            return Err(Error::Divergence(format!(
                "loss is {loss} after epoch {}",
                epoch + 1
            )));
        }
        history.epoch_loss.push(loss);
    }
    Ok((net, history))
}

/// The network's output for `data`.
pub fn reconstruct(net: &DenseNetwork, data: &Dataset) -> Result<Dataset> {
    net.predict(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbn::{init_network, topology};
    use crate::stats::gen_uniform;

    #[test]
    fn zero_epochs_is_identity() {
        let net = init_network(&topology(2).unwrap(), 1);
        let data = gen_uniform(10, 2, 2);
        let cfg = TrainConfig {
            epochs: 0,
            ..Default::default()
        };
        let (trained, hist) = train_autoencoder(net.clone(), &data, &cfg).unwrap();
        assert_eq!(trained, net);
        assert!(hist.epoch_loss.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let net = init_network(&topology(2).unwrap(), 1);
        let cfg = TrainConfig::default();
        assert!(matches!(
            train_autoencoder(net.clone(), &Dataset::zeros(0, 2), &cfg),
            Err(Error::Empty(_))
        ));
        assert!(train_autoencoder(net.clone(), &gen_uniform(4, 3, 0), &cfg).is_err());
        let bad = TrainConfig {
            batch_size: 0,
            ..Default::default()
        };
        assert!(train_autoencoder(net.clone(), &gen_uniform(4, 2, 0), &bad).is_err());
        let bad = TrainConfig {
            learning_rate: -1.0,
            ..Default::default()
        };
        assert!(train_autoencoder(net, &gen_uniform(4, 2, 0), &bad).is_err());
    }

    #[test]
    fn history_length_and_determinism() {
        let t = topology(2).unwrap();
        let data = gen_uniform(64, 2, 3);
        let cfg = TrainConfig {
            epochs: 5,
            seed: 11,
            ..Default::default()
        };
        let (a, ha) = train_autoencoder(init_network(&t, 1), &data, &cfg).unwrap();
        let (b, hb) = train_autoencoder(init_network(&t, 1), &data, &cfg).unwrap();
        assert_eq!(ha.epoch_loss.len(), 5);
        assert_eq!(ha, hb);
        assert_eq!(a, b);
    }

    #[test]
    fn divergence_is_reported() {
        use crate::dbn::{Activation, DenseLayer};
        use crate::matrix::Matrix;
        let net = DenseNetwork::from_layers(
            vec![DenseLayer {
                weights: Matrix::from_vec(2, 2, vec![0.5, 0.1, -0.2, 0.3]).unwrap(),
                bias: vec![0.0; 2],
                activation: Activation::Identity,
            }],
            0,
        )
        .unwrap();
        let cfg = TrainConfig {
            epochs: 200,
            learning_rate: 50.0,
            ..Default::default()
        };
        let err = train_autoencoder(net, &gen_uniform(32, 2, 3), &cfg).unwrap_err();
        assert!(err.is_numerical(), "{err}");
    }

    #[test]
    fn reconstruct_shape() {
        let net = init_network(&topology(2).unwrap(), 1);
        let out = reconstruct(&net, &gen_uniform(50, 2, 9)).unwrap();
        assert_eq!(out.shape(), (50, 2));
    }
}

use serde::{Deserialize, Serialize};

use super::activation::Activation;
use super::topology::DbnTopology;
use crate::error::{Error, Result};
use crate::matrix::{Dataset, Matrix};
use crate::stats::SeededRng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    /// `inputs x outputs`.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn inputs(&self) -> usize {
        self.weights.rows()
    }

    pub fn outputs(&self) -> usize {
        self.weights.cols()
    }
}

/// Stack of fully connected layers.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseNetwork {
    layers: Vec<DenseLayer>,
    seed: u64,
}

/// Pre- and post-activation values of every layer for one batch.
/// `activations[0]` is the input; `activations[l + 1]` is layer `l`'s output.
#[derive(Clone, Debug)]
pub struct ForwardPass {
    pub pre_activations: Vec<Matrix>,
    pub activations: Vec<Matrix>,
}

impl ForwardPass {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("input is always present")
    }
}

/// Loss gradients, shaped like the network's layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    /// Same order as [`DenseNetwork::parameters`].
    pub fn flatten(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .flat_map(|(w, b)| w.as_slice().iter().chain(b).copied())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(Matrix::is_finite)
            && self.biases.iter().flatten().all(|g| g.is_finite())
    }
}

impl DenseNetwork {
    pub fn from_layers(layers: Vec<DenseLayer>, seed: u64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument(
                "network needs at least one layer".into(),
            ));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.bias.len() != l.outputs() {
                return Err(Error::Shape(format!(
                    "layer {i}: bias length {} for {} outputs",
                    l.bias.len(),
                    l.outputs()
                )));
            }
            if i > 0 && layers[i - 1].outputs() != l.inputs() {
                return Err(Error::Shape(format!(
                    "layer {i} takes {} inputs but layer {} emits {}",
                    l.inputs(),
                    i - 1,
                    layers[i - 1].outputs()
                )));
            }
            if !l.weights.is_finite() || l.bias.iter().any(|b| !b.is_finite()) {
                return Err(Error::NonFinite(format!("parameters of layer {i}")));
            }
        }
        Ok(DenseNetwork { layers, seed })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_width(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs()
    }

    pub fn widths(&self) -> Vec<usize> {
        std::iter::once(self.input_width())
            .chain(self.layers.iter().map(DenseLayer::outputs))
            .collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.as_slice().len() + l.bias.len())
            .sum()
    }

    /// All parameters, layer by layer: weights row-major, then bias.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.parameter_count() {
            return Err(Error::Shape(format!(
                "{} parameters for a network with {}",
                params.len(),
                self.parameter_count()
            )));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.as_slice().len());
            let (b, tail) = tail.split_at(l.bias.len());
            l.weights.as_mut_slice().copy_from_slice(w);
            l.bias.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn forward(&self, batch: &Dataset) -> Result<ForwardPass> {
        if batch.cols() != self.input_width() {
            return Err(Error::Shape(format!(
                "batch has {} columns, network expects {}",
                batch.cols(),
                self.input_width()
            )));
        }
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(batch.clone());
        for layer in &self.layers {
            let mut z = activations.last().unwrap().matmul(&layer.weights)?;
            for i in 0..z.rows() {
                for (v, b) in z.row_mut(i).iter_mut().zip(&layer.bias) {
                    *v += b;
                }
            }
            let mut a = z.clone();
            for v in a.as_mut_slice() {
                *v = layer.activation.apply(*v);
            }
            pre_activations.push(z);
            activations.push(a);
        }
        Ok(ForwardPass {
            pre_activations,
            activations,
        })
    }

    /// Final-layer output only.
    pub fn predict(&self, batch: &Dataset) -> Result<Dataset> {
        let mut pass = self.forward(batch)?;
        Ok(pass.activations.pop().expect("non-empty"))
    }

    /// Gradients of `mse(forward(batch), target)` for every parameter.
    pub fn backprop(&self, batch: &Dataset, target: &Dataset) -> Result<Gradients> {
        let pass = self.forward(batch)?;
        let out = pass.output();
        if out.shape() != target.shape() {
            return Err(Error::Shape(format!(
                "target is {:?}, output is {:?}",
                target.shape(),
                out.shape()
            )));
        }
        let scale = 2.0 / out.as_slice().len() as f64;
        // dL/da for the current layer's output
        let mut upstream = Matrix::from_vec(
            out.rows(),
            out.cols(),
            out.as_slice()
                .iter()
                .zip(target.as_slice())
                .map(|(y, t)| scale * (y - t))
                .collect(),
        )?;

        let n = self.layers.len();
        let mut weights = vec![Matrix::zeros(0, 0); n];
        let mut biases = vec![Vec::new(); n];
        for l in (0..n).rev() {
            let layer = &self.layers[l];
            let mut delta = upstream;
            for (d, z) in delta
                .as_mut_slice()
                .iter_mut()
                .zip(pass.pre_activations[l].as_slice())
            {
                *d *= layer.activation.derivative(*z);
            }
            weights[l] = pass.activations[l].transpose().matmul(&delta)?;
            let mut gb = vec![0.0; layer.outputs()];
            for row in delta.row_iter() {
                for (g, d) in gb.iter_mut().zip(row) {
                    *g += d;
                }
            }
            biases[l] = gb;
            upstream = delta.matmul(&layer.weights.transpose())?;
        }
        Ok(Gradients { weights, biases })
    }

    /// `parameter -= lr * gradient`, elementwise.
    pub fn sgd_step(&mut self, grads: &Gradients, lr: f64) -> Result<()> {
        if !(lr > 0.0 && lr.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {lr}"
            )));
        }
        if grads.weights.len() != self.layers.len() {
            return Err(Error::Shape(
                "gradient layer count differs from network".into(),
            ));
        }
        if !grads.is_finite() {
            return Err(Error::Divergence("non-finite gradient".into()));
        }
        for (l, (gw, gb)) in self
            .layers
            .iter_mut()
            .zip(grads.weights.iter().zip(&grads.biases))
        {
            if gw.shape() != l.weights.shape() || gb.len() != l.bias.len() {
                return Err(Error::Shape("gradient shape differs from layer".into()));
            }
            for (p, g) in l.weights.as_mut_slice().iter_mut().zip(gw.as_slice()) {
                *p -= lr * g;
            }
            for (p, g) in l.bias.iter_mut().zip(gb) {
                *p -= lr * g;
            }
        }
        Ok(())
    }
}

/// Fan-balanced uniform weights on `+-sqrt(6 / (fan_in + fan_out))`, drawn
/// layer by layer in row-major order from one seeded stream; zero biases.
pub fn init_network(topology: &DbnTopology, seed: u64) -> DenseNetwork {
    let mut rng = SeededRng::new(seed);
    let layers = topology
        .widths
        .windows(2)
        .zip(&topology.activations[1..])
        .map(|(w, act)| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let data = (0..fan_in * fan_out)
                .map(|_| rng.uniform(-limit, limit))
                .collect();
            DenseLayer {
                weights: Matrix::from_vec(fan_in, fan_out, data).expect("sized"),
                bias: vec![0.0; fan_out],
                activation: act.unwrap_or(Activation::Identity),
            }
        })
        .collect();
    DenseNetwork { layers, seed }
}

/// Mean over all entries of the squared difference.
pub fn mse(pred: &Matrix, target: &Matrix) -> Result<f64> {
    if pred.shape() != target.shape() {
        return Err(Error::Shape(format!(
            "prediction {:?} vs target {:?}",
            pred.shape(),
            target.shape()
        )));
    }
    if pred.is_empty() {
        return Err(Error::Empty("mse of an empty matrix".into()));
    }
    let sum: f64 = pred
        .as_slice()
        .iter()
        .zip(target.as_slice())
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok(sum / pred.as_slice().len() as f64)
}

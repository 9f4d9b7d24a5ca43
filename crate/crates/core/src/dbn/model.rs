//! JSON model file: topology metadata, training config and every layer's
//! weights (row-major) and bias. Floats are written in shortest round-trip
//! form so a reload reproduces forward outputs bit for bit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::activation::Activation;
use super::network::{DenseLayer, DenseNetwork};
use super::train::TrainConfig;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub inputs: usize,
    pub outputs: usize,
    pub activation: Activation,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub properties: usize,
    pub widths: Vec<usize>,
    pub activations: Vec<Option<Activation>>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<TrainConfig>,
    pub layers: Vec<LayerRecord>,
}

impl ModelFile {
    pub fn from_network(net: &DenseNetwork, config: Option<TrainConfig>) -> Self {
        let activations = std::iter::once(None)
            .chain(net.layers().iter().map(|l| Some(l.activation)))
            .collect();
        ModelFile {
            properties: net.input_width(),
            widths: net.widths(),
            activations,
            seed: net.seed(),
            config,
            layers: net
                .layers()
                .iter()
                .map(|l| LayerRecord {
                    inputs: l.inputs(),
                    outputs: l.outputs(),
                    activation: l.activation,
                    weights: l.weights.as_slice().to_vec(),
                    bias: l.bias.clone(),
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<DenseNetwork> {
        let layers = self
            .layers
            .iter()
            .map(|r| {
                Ok(DenseLayer {
                    weights: Matrix::from_vec(r.inputs, r.outputs, r.weights.clone())?,
                    bias: r.bias.clone(),
                    activation: r.activation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let net = DenseNetwork::from_layers(layers, self.seed)?;
        if net.widths() != self.widths {
            return Err(Error::Shape(format!(
                "layer records give widths {:?}, header says {:?}",
                net.widths(),
                self.widths
            )));
        }
        Ok(net)
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self)?;
        writeln!(writer)?;
        Ok(())
    }
}

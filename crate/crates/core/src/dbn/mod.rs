//! DBN-shaped dense autoencoder: topology from the property count, dense
//! layers with backprop, and end-to-end SGD training.

mod activation;
mod model;
mod network;
mod topology;
mod train;

pub use activation::{relu, selu, Activation, SELU_ALPHA, SELU_LAMBDA};
pub use model::{LayerRecord, ModelFile};
pub use network::{init_network, mse, DenseLayer, DenseNetwork, ForwardPass, Gradients};
pub use topology::{rbm_spans, topology, DbnTopology};
pub use train::{reconstruct, train_autoencoder, TrainConfig, TrainHistory};

use serde::{Deserialize, Serialize};

use super::activation::Activation;
use crate::error::{Error, Result};

/// Layer layout of the DBN-shaped autoencoder for `M` properties.
///
/// Hidden widths interleave sibling and binary levels for `k = 1..=M`:
/// sibling `2^(k-1) * M^k`, binary `2^k * M^k`. The stack is bracketed by an
/// `M`-wide input and an `M`-wide output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbnTopology {
    pub properties: usize,
    pub widths: Vec<usize>,
    /// One entry per width; `None` for the input layer.
    pub activations: Vec<Option<Activation>>,
    /// 1-based (start, end) layer numbers of each RBM group.
    pub rbm_spans: Vec<(usize, usize)>,
}

impl DbnTopology {
    pub fn hidden_widths(&self) -> &[usize] {
        &self.widths[1..self.widths.len() - 1]
    }

    /// Number of dense weight layers.
    pub fn depth(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn parameter_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "property count M must be at least 1".into(),
        ));
    }
    Ok(())
}

fn width(m: usize, pow2: u32, powm: u32) -> Result<usize> {
    2usize
        .checked_pow(pow2)
        .and_then(|a| m.checked_pow(powm).and_then(|b| a.checked_mul(b)))
        .ok_or_else(|| Error::InvalidArgument(format!("layer widths overflow for M = {m}")))
}

pub fn topology(m: usize) -> Result<DbnTopology> {
    check_m(m)?;
    let mut widths = vec![m];
    for k in 1..=m as u32 {
        widths.push(width(m, k - 1, k)?);
        widths.push(width(m, k, k)?);
    }
    widths.push(m);

    let mut activations = vec![None, Some(Activation::Rectifier)];
    activations.resize(widths.len(), Some(Activation::ScaledExponential));
    Ok(DbnTopology {
        properties: m,
        widths,
        activations,
        rbm_spans: rbm_spans(m)?,
    })
}

pub fn rbm_spans(m: usize) -> Result<Vec<(usize, usize)>> {
    check_m(m)?;
    Ok((0..m).map(|k| (2 * k + 1, 2 * k + 3)).collect())
}

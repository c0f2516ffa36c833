//! FedAvg over a linear least-squares model.
//!
//! Each selected client takes one full-batch gradient step
//! `w_k = w - eta * grad_k` on its own data and the server combines the
//! results as `w' = sum_k p_k w_k` with `p_k = n_k / sum_j n_j`.
//!
//! The loss is `0.5 * mean((x . w - y)^2)`.

use std::cmp::Ordering;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FedError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no updates to aggregate")]
    EmptyUpdateSet,
    #[error("learning rate must be positive and finite, got {0}")]
    InvalidLearningRate(f64),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("non-finite value in model weights")]
    NonFinite,
    #[error("malformed update payload")]
    MalformedPayload,
    #[error("synthetic task counts must be at least 1")]
    InvalidCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub weights: Vec<f64>,
}

impl ModelParams {
    pub fn zeros(d: usize) -> Self {
        ModelParams {
            weights: vec![0.0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `d:u32le ‖ d × f64le`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 8 * self.weights.len());
        out.extend_from_slice(&(self.weights.len() as u32).to_le_bytes());
        for w in &self.weights {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FedError> {
        let (weights, rest) = read_weights(bytes)?;
        if !rest.is_empty() {
            return Err(FedError::MalformedPayload);
        }
        Ok(ModelParams { weights })
    }
}

fn read_weights(bytes: &[u8]) -> Result<(Vec<f64>, &[u8]), FedError> {
    let (head, body) = bytes
        .split_at_checked(4)
        .ok_or(FedError::MalformedPayload)?;
    let d = u32::from_le_bytes(head.try_into().expect("4 bytes")) as usize;
    let need = d.checked_mul(8).ok_or(FedError::MalformedPayload)?;
    let (raw, rest) = body
        .split_at_checked(need)
        .ok_or(FedError::MalformedPayload)?;
    let weights: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(FedError::NonFinite);
    }
    Ok((weights, rest))
}

/// One client's locally trained model and how many samples produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClientUpdate {
    pub weights: Vec<f64>,
    pub sample_count: u32,
}

impl ClientUpdate {
    /// `d:u32le ‖ d × f64le ‖ sample_count:u32le`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = ModelParams {
            weights: self.weights.clone(),
        }
        .to_bytes();
        out.extend_from_slice(&self.sample_count.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FedError> {
        let (weights, rest) = read_weights(bytes)?;
        let tail: [u8; 4] = rest.try_into().map_err(|_| FedError::MalformedPayload)?;
        let sample_count = u32::from_le_bytes(tail);
        if sample_count == 0 {
            return Err(FedError::ZeroSamples);
        }
        Ok(ClientUpdate {
            weights,
            sample_count,
        })
    }

    // Total order on contents, so aggregation does not depend on arrival order.
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.weights
            .iter()
            .map(|w| w.to_bits())
            .cmp(other.weights.iter().map(|w| w.to_bits()))
            .then(self.sample_count.cmp(&other.sample_count))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    fn check(&self, d: usize) -> Result<(), FedError> {
        if self.is_empty() {
            return Err(FedError::EmptyDataset);
        }
        match self.features.iter().find(|x| x.len() != d) {
            Some(x) => Err(FedError::DimensionMismatch {
                expected: d,
                got: x.len(),
            }),
            None => Ok(()),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn loss(model: &ModelParams, data: &Dataset) -> Result<f64, FedError> {
    data.check(model.dim())?;
    let sse: f64 = data
        .features
        .iter()
        .zip(&data.targets)
        .map(|(x, y)| (dot(x, &model.weights) - y).powi(2))
        .sum();
    Ok(0.5 * sse / data.len() as f64)
}

/// Loss over the union of several datasets.
pub fn pooled_loss(model: &ModelParams, datasets: &[Dataset]) -> Result<f64, FedError> {
    let mut sse = 0.0;
    let mut count = 0usize;
    for data in datasets {
        sse += loss(model, data)? * 2.0 * data.len() as f64;
        count += data.len();
    }
    if count == 0 {
        return Err(FedError::EmptyDataset);
    }
    Ok(0.5 * sse / count as f64)
}

pub fn gradient(model: &ModelParams, data: &Dataset) -> Result<Vec<f64>, FedError> {
    data.check(model.dim())?;
    let mut grad = vec![0.0; model.dim()];
    for (x, y) in data.features.iter().zip(&data.targets) {
        let residual = dot(x, &model.weights) - y;
        for (g, xi) in grad.iter_mut().zip(x) {
            *g += residual * xi;
        }
    }
    let n = data.len() as f64;
    grad.iter_mut().for_each(|g| *g /= n);
    Ok(grad)
}

pub const DEFAULT_ETA: f64 = 0.1;

/// One full-batch gradient step on the client's data.
pub fn local_step(model: &ModelParams, data: &Dataset, eta: f64) -> Result<ClientUpdate, FedError> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(FedError::InvalidLearningRate(eta));
    }
    let grad = gradient(model, data)?;
    let weights: Vec<f64> = model
        .weights
        .iter()
        .zip(&grad)
        .map(|(w, g)| w - eta * g)
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(FedError::NonFinite);
    }
    let sample_count = u32::try_from(data.len()).map_err(|_| FedError::MalformedPayload)?;
    Ok(ClientUpdate {
        weights,
        sample_count,
    })
}

/// `p_k = n_k / sum_j n_j`, in the order given.
pub fn aggregation_weights(updates: &[ClientUpdate]) -> Result<Vec<f64>, FedError> {
    if updates.is_empty() {
        return Err(FedError::EmptyUpdateSet);
    }
    if updates.iter().any(|u| u.sample_count == 0) {
        return Err(FedError::ZeroSamples);
    }
    let total: u64 = updates.iter().map(|u| u.sample_count as u64).sum();
    Ok(updates
        .iter()
        .map(|u| u.sample_count as f64 / total as f64)
        .collect())
}

/// Sample-weighted average of client models.
///
/// Updates are summed in a canonical order of their contents, so the result
/// is bit-identical under any permutation of the input.
pub fn aggregate(updates: &[ClientUpdate]) -> Result<ModelParams, FedError> {
    let first = updates.first().ok_or(FedError::EmptyUpdateSet)?;
    let d = first.weights.len();
    if let Some(bad) = updates.iter().find(|u| u.weights.len() != d) {
        return Err(FedError::DimensionMismatch {
            expected: d,
            got: bad.weights.len(),
        });
    }
    let mut ordered: Vec<&ClientUpdate> = updates.iter().collect();
    ordered.sort_by(|a, b| a.canonical_cmp(b));
    let owned: Vec<ClientUpdate> = ordered.iter().map(|u| (*u).clone()).collect();
    let p = aggregation_weights(&owned)?;

    let mut weights = vec![0.0; d];
    for (update, pk) in owned.iter().zip(&p) {
        for (acc, w) in weights.iter_mut().zip(&update.weights) {
            *acc += pk * w;
        }
    }
    Ok(ModelParams { weights })
}

/// Per-client datasets sharing one ground-truth weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTask {
    pub truth: Vec<f64>,
    pub datasets: Vec<Dataset>,
}

/// Gaussian features, `y = x . truth + noise` with a client-specific noise
/// level between 0.05 and 0.25.
pub fn make_synthetic(
    seed: u64,
    clients: usize,
    d: usize,
    samples_per_client: usize,
) -> Result<SyntheticTask, FedError> {
    if clients == 0 || d == 0 || samples_per_client == 0 {
        return Err(FedError::InvalidCounts);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let truth: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let datasets = (0..clients)
        .map(|k| {
            let sigma = 0.05 + 0.2 * (k % 5) as f64 / 4.0;
            let noise = Normal::new(0.0, sigma).expect("positive sigma");
            let mut features = Vec::with_capacity(samples_per_client);
            let mut targets = Vec::with_capacity(samples_per_client);
            for _ in 0..samples_per_client {
                let x: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                targets.push(dot(&x, &truth) + noise.sample(&mut rng));
                features.push(x);
            }
            Dataset { features, targets }
        })
        .collect();
    Ok(SyntheticTask { truth, datasets })
}

/// `iteration,loss` CSV with a header row.
pub fn write_loss_csv<W: Write>(history: &[(u32, f64)], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "loss"])?;
    for (iteration, loss) in history {
        w.write_record([iteration.to_string(), loss.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

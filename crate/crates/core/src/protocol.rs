//! Verifier-side estimation and the accept/reject rule, plus orchestration of
//! honest and cheating provers.

use rand::Rng;

use crate::attacks::{naive_sample, sample_by_rows};
use crate::error::{Error, Result};
use crate::f2linalg::BitVector;
use crate::scheme::Instance;
use crate::simulator::{sample_outcomes, THETA};
use crate::stabilizer::{correlation, Correlation};

/// Measurement outcomes submitted by a prover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBatch {
    n: usize,
    samples: Vec<BitVector>,
    /// Free-form label of whoever produced the batch.
    pub source: String,
}

impl SampleBatch {
    pub fn new(n: usize, samples: Vec<BitVector>, source: impl Into<String>) -> Self {
        assert!(samples.iter().all(|x| x.len() == n), "sample length mismatch");
        Self {
            n,
            samples,
            source: source.into(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[BitVector] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The first `t` samples.
    pub fn truncate(mut self, t: usize) -> Self {
        self.samples.truncate(t);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub estimate: f64,
    pub ideal: f64,
    pub tolerance: f64,
    pub samples_used: usize,
    pub accept: bool,
}

/// Default acceptance window `3/√T`.
pub fn default_tolerance(samples: usize) -> f64 {
    3.0 / (samples as f64).sqrt()
}

/// `(1/T) Σ (−1)^{xᵢ·s}`.
pub fn estimate_correlation(batch: &SampleBatch, s: &BitVector) -> Result<f64> {
    if batch.qubits() != s.len() {
        return Err(Error::InvalidParameter(format!(
            "samples have {} bits but the secret has {}",
            batch.qubits(),
            s.len()
        )));
    }
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty sample batch".into()));
    }
    let orth = batch.samples().iter().filter(|x| !x.dot(s)).count() as f64;
    let t = batch.len() as f64;
    Ok((2.0 * orth - t) / t)
}

pub fn verify(batch: &SampleBatch, s: &BitVector, ideal: Correlation, tolerance: f64) -> Result<Verdict> {
    let estimate = estimate_correlation(batch, s)?;
    let ideal = ideal.value();
    Ok(Verdict {
        estimate,
        ideal,
        tolerance,
        samples_used: batch.len(),
        accept: (estimate - ideal).abs() <= tolerance,
    })
}

/// Probability of an outcome orthogonal to the secret, `(⟨Z_s⟩ + 1)/2`.
pub fn bias_of(corr: f64) -> f64 {
    (corr + 1.0) / 2.0
}

#[derive(Clone, Debug)]
pub enum Prover {
    /// Exact statevector sampling of `U_{H,π/8}|0ⁿ⟩`.
    HonestSim,
    /// Guesses `s′`, computes its correlation and samples against it alone.
    NaiveCheat(BitVector),
    /// Same guess, but samples from row spans of `H` split by `s′`.
    RowCheat(BitVector),
    UniformRandom,
}

/// Draws samples from the chosen prover and checks them against the
/// instance's true secret and correlation.
pub fn run_protocol<R: Rng + ?Sized>(
    instance: &Instance,
    prover: &Prover,
    samples: usize,
    tolerance: Option<f64>,
    rng: &mut R,
) -> Result<Verdict> {
    let h = &instance.h;
    let n = h.cols();
    let batch = match prover {
        Prover::HonestSim => sample_outcomes(h, THETA, samples, rng)?,
        Prover::NaiveCheat(guess) => {
            let c = correlation(h, guess)?;
            naive_sample(guess, c.value(), samples, rng)
        }
        Prover::RowCheat(guess) => {
            let c = correlation(h, guess)?;
            sample_by_rows(h, guess, c.value(), samples, rng)?
        }
        Prover::UniformRandom => SampleBatch::new(
            n,
            (0..samples).map(|_| BitVector::random(n, rng)).collect(),
            "uniform",
        ),
    };
    let tol = tolerance.unwrap_or_else(|| default_tolerance(samples));
    verify(&batch, &instance.s, instance.correlation, tol)
}

//! Brute-force statevector simulation of IQP circuits and compilation of
//! `U_{H,θ}` into CNOT layers interleaved with single-qubit X rotations.

mod compile;

use num_complex::Complex64;
use rand::Rng;

pub use compile::{compile, CompiledCircuit, Layer};

use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::protocol::SampleBatch;

/// Default qubit cap: 2^20 amplitudes, 16 MiB.
pub const DEFAULT_QUBIT_CAP: usize = 20;

/// The angle at which the correlation reduces to a Clifford amplitude.
pub const THETA: f64 = std::f64::consts::PI / 8.0;

#[derive(Clone, Debug)]
pub struct State {
    n: usize,
    amps: Vec<Complex64>,
}

impl State {
    /// `|0ⁿ⟩`.
    pub fn zero(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::TooManyQubits { qubits: n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    /// Amplitude of basis state `x`; bit `j` of `x` is qubit `j`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `e^{iθ X_p}` for the qubit mask `p`.
    pub fn apply_x_rotation(&mut self, p: u64, theta: f64) {
        if p == 0 {
            let ph = Complex64::from_polar(1.0, theta);
            self.amps.iter_mut().for_each(|a| *a *= ph);
            return;
        }
        let (c, s) = (theta.cos(), Complex64::new(0.0, theta.sin()));
        let hi = 63 - p.leading_zeros() as usize;
        for x in 0..self.amps.len() {
            if x >> hi & 1 == 0 {
                let y = x ^ p as usize;
                let (a, b) = (self.amps[x], self.amps[y]);
                self.amps[x] = a * c + b * s;
                self.amps[y] = a * s + b * c;
            }
        }
    }

    /// Applies `|x⟩ ↦ |x ⊕ (x_c e_t)⟩`.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target, "CNOT control equals target");
        for x in 0..self.amps.len() {
            if x >> control & 1 == 1 && x >> target & 1 == 0 {
                self.amps.swap(x, x | 1 << target);
            }
        }
    }

    /// `|⟨self|other⟩|`, i.e. overlap magnitude ignoring global phase.
    pub fn overlap(&self, other: &State) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Largest entrywise distance after aligning `other`'s global phase to `self`.
    pub fn distance_up_to_phase(&self, other: &State) -> f64 {
        let inner: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| b.conj() * a).sum();
        let phase = if inner.norm() > 0.0 {
            inner / inner.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }
}

fn row_mask(h: &BitMatrix, i: usize) -> u64 {
    h.row_words(i).first().copied().unwrap_or(0)
}

pub fn statevector_capped(h: &BitMatrix, theta: f64, cap: usize) -> Result<State> {
    let mut st = State::zero(h.cols(), cap)?;
    for i in 0..h.rows() {
        st.apply_x_rotation(row_mask(h, i), theta);
    }
    Ok(st)
}

/// `U_{H,θ}|0ⁿ⟩` with `U_{H,θ} = Π_p e^{iθ X_p}` over the rows `p` of `H`.
pub fn statevector(h: &BitMatrix, theta: f64) -> Result<State> {
    statevector_capped(h, theta, DEFAULT_QUBIT_CAP)
}

fn parity_sign(x: usize, s: u64) -> f64 {
    if (x as u64 & s).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `⟨Z_s⟩ = Σ_x |ψ(x)|² (−1)^{x·s}`.
pub fn exact_correlation(h: &BitMatrix, s: &BitVector, theta: f64) -> Result<f64> {
    assert_eq!(s.len(), h.cols(), "exact_correlation: secret length mismatch");
    let st = statevector(h, theta)?;
    let sm = s.to_u64();
    Ok(st
        .amps
        .iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * parity_sign(x, sm))
        .sum())
}

/// `T` independent computational-basis measurements of `U_{H,θ}|0ⁿ⟩`.
pub fn sample_outcomes<R: Rng + ?Sized>(
    h: &BitMatrix,
    theta: f64,
    samples: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    let st = statevector(h, theta)?;
    let n = st.n;
    let mut cdf = Vec::with_capacity(st.amps.len());
    let mut acc = 0.0;
    for a in &st.amps {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    let draws = (0..samples)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let x = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            BitVector::from_u64(n, x as u64)
        })
        .collect();
    Ok(SampleBatch::new(n, draws, "honest-statevector"))
}

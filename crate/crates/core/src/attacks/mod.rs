//! Classical secret extraction and spoofing: the Linearity Attack and its
//! variants, the original KM extraction, the Radical Attack, Hamming's razor
//! and the three classical samplers.

mod linearity;
mod sampling;
mod structural;

use std::fmt::Write as _;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use linearity::{
    double_meyer, expected_iterations, extract_secret_linearity, gram_d, km_extract, km_matrix, lazy_linearity,
    log2_expected_iterations, property_check, qrc_check,
};
pub use sampling::{multi_secret_sample, naive_sample, sample_by_rows};
pub use structural::{
    default_razor_fractions, hammings_razor, hammings_razor_sweep, radical_attack, razor_threshold_sweep,
    RazorThreshold,
};

use crate::error::Result;
use crate::f2linalg::BitVector;
use crate::protocol::{default_tolerance, verify};
use crate::scheme::Instance;
use crate::stabilizer::{correlation, h_s_rows};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackConfig {
    /// Maximum number of candidate vectors examined.
    pub check_budget: u64,
    /// Largest `rank(gram(H_v))` the property check accepts.
    pub g_threshold: usize,
    /// Maximum number of probe vectors `d` drawn.
    pub d_resample_budget: usize,
    pub seed: u64,
    /// Random codewords per candidate in the QRC check.
    pub qrc_codeword_samples: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            check_budget: 1 << 15,
            g_threshold: 1,
            d_resample_budget: 1 << 12,
            seed: 0,
            qrc_codeword_samples: 32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundLog {
    pub dim: usize,
    pub checks: u64,
    pub found: bool,
}

#[derive(Clone, Debug)]
pub struct AttackReport {
    pub method: &'static str,
    pub candidates: Vec<BitVector>,
    pub checks_used: u64,
    pub kernel_dims_seen: Vec<usize>,
    pub rounds: Vec<RoundLog>,
    /// Left false by the attacks; set after [`validate_candidate`].
    pub success: bool,
    pub wall_time: Duration,
}

impl AttackReport {
    pub fn new(method: &'static str) -> Self {
        Self {
            method,
            candidates: Vec::new(),
            checks_used: 0,
            kernel_dims_seen: Vec::new(),
            rounds: Vec::new(),
            success: false,
            wall_time: Duration::ZERO,
        }
    }

    /// `round=<i> dim=<k> checks=<c> found=<0|1>` per round, then
    /// `SECRET <bits>` for the first candidate or `FAIL`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(out, "round={i} dim={} checks={} found={}", r.dim, r.checks, r.found as u8);
        }
        match self.candidates.first() {
            Some(c) => {
                let _ = writeln!(out, "SECRET {c}");
            }
            None => out.push_str("FAIL\n"),
        }
        out
    }
}

/// Stream `round` of the ChaCha8 generator keyed by `seed`.
pub(crate) fn round_rng(seed: u64, round: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round as u64);
    rng
}

/// Spoofing succeeds when samples generated from the candidate (by
/// [`sample_by_rows`] at the candidate's own correlation) pass the verifier
/// for the instance's true secret and correlation.
pub fn validate_candidate<R: Rng + ?Sized>(
    instance: &Instance,
    candidate: &BitVector,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    if candidate.is_zero() {
        return Ok(false);
    }
    let corr = correlation(&instance.h, candidate)?;
    let batch = sample_by_rows(&instance.h, candidate, corr.value(), samples, rng)?;
    Ok(verify(&batch, &instance.s, instance.correlation, default_tolerance(samples))?.accept)
}

/// The candidate selects the same rows as the secret, `H c = H s`.
pub fn recovers_secret(instance: &Instance, candidate: &BitVector) -> bool {
    !candidate.is_zero() && instance.h.mul_vec(candidate) == instance.h.mul_vec(&instance.s)
}

/// Marks `report.success` from [`validate_candidate`] on the first candidate.
pub fn validate_report<R: Rng + ?Sized>(
    instance: &Instance,
    report: &mut AttackReport,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    report.success = match report.candidates.first() {
        Some(c) => validate_candidate(instance, c, samples, rng)?,
        None => false,
    };
    Ok(report.success)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoodDStats {
    pub trials: usize,
    /// Trials with `G_s d = 0`.
    pub hits: usize,
    pub frequency: f64,
    /// `G_s d = G_d s` held on every trial.
    pub identity_held: bool,
}

/// Empirical frequency of `G_s d = 0` over uniform `d`, checking
/// `G_s d = G_d s` along the way.
pub fn good_d_probability_check<R: Rng + ?Sized>(instance: &Instance, trials: usize, rng: &mut R) -> GoodDStats {
    assert!(trials >= 1);
    let h = &instance.h;
    let n = h.cols();
    let h_s = h_s_rows(h, &instance.s);
    let mut hits = 0;
    let mut identity_held = true;
    for _ in 0..trials {
        let d = BitVector::random(n, rng);
        let gs_d = h_s.transpose().mul_vec(&h_s.mul_vec(&d));
        let h_d = h_s_rows(h, &d);
        let gd_s = h_d.transpose().mul_vec(&h_d.mul_vec(&instance.s));
        identity_held &= gs_d == gd_s;
        hits += gs_d.is_zero() as usize;
    }
    GoodDStats {
        trials,
        hits,
        frequency: hits as f64 / trials as f64,
        identity_held,
    }
}

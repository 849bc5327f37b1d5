use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::{round_rng, AttackConfig, AttackReport, RoundLog};
use crate::codes::weight_mod4;
use crate::f2linalg::{gram, kernel_vectors, rank, solve, BitMatrix, BitVector};

/// Radical Attack: `S` is the joint support of the doubly-even nonzero
/// vectors `H v` for `v` in a basis of `ker(HᵀH)`; the candidate solves
/// `H s = 1_S`.
pub fn radical_attack(h: &BitMatrix) -> AttackReport {
    let start = Instant::now();
    let mut report = AttackReport::new("radical");
    let basis = kernel_vectors(&gram(h));
    let dim = basis.len();
    report.kernel_dims_seen.push(dim);
    let mut support = BitVector::zeros(h.rows());
    for v in &basis {
        let hv = h.mul_vec(v);
        if !hv.is_zero() && weight_mod4(&hv) == 0 {
            support.words_mut().iter_mut().zip(hv.words()).for_each(|(a, b)| *a |= b);
        }
    }
    report.checks_used = dim as u64;
    let cand = if support.is_zero() {
        None
    } else {
        solve(h, &support).filter(|s| !s.is_zero())
    };
    report.rounds.push(RoundLog {
        dim,
        checks: dim as u64,
        found: cand.is_some(),
    });
    report.candidates.extend(cand);
    report.wall_time = start.elapsed();
    report
}

fn drop_rows<R: Rng + ?Sized>(m: usize, p: f64, rng: &mut R) -> Vec<usize> {
    let drop = ((p * m as f64).floor() as usize).min(m);
    let mut removed = vec![false; m];
    for i in sample_indices(rng, m, drop) {
        removed[i] = true;
    }
    (0..m).filter(|&i| !removed[i]).collect()
}

/// Hamming's razor at removal fraction `p`: `S` collects `supp(H v)` for the
/// kernel basis of each row-deleted `H′`, and the candidate solves
/// `H s = 1_{S^C}`. Round `i` draws from stream `i` of `cfg.seed`.
pub fn hammings_razor(h: &BitMatrix, p: f64, rounds: usize, cfg: &AttackConfig) -> AttackReport {
    assert!(p > 0.0 && p < 1.0, "removal fraction must lie in (0, 1)");
    let start = Instant::now();
    let mut report = AttackReport::new("hamming");
    let m = h.rows();
    let mut support = BitVector::zeros(m);
    for round in 0..rounds {
        let mut rng = round_rng(cfg.seed, round);
        let kept = drop_rows(m, p, &mut rng);
        let basis = kernel_vectors(&h.select_rows(&kept));
        for v in &basis {
            let hv = h.mul_vec(v);
            support.words_mut().iter_mut().zip(hv.words()).for_each(|(a, b)| *a |= b);
        }
        report.kernel_dims_seen.push(basis.len());
        report.checks_used += basis.len() as u64;
        report.rounds.push(RoundLog {
            dim: basis.len(),
            checks: basis.len() as u64,
            found: false,
        });
    }
    let mut target = support;
    for i in 0..m {
        target.flip(i);
    }
    if let Some(s) = solve(h, &target).filter(|s| !s.is_zero()) {
        if let Some(last) = report.rounds.last_mut() {
            last.found = true;
        }
        report.candidates.push(s);
    }
    report.wall_time = start.elapsed();
    report
}

/// Removal fractions `0.05, 0.10, …, 0.50`.
pub fn default_razor_fractions() -> Vec<f64> {
    (1..=10).map(|i| i as f64 * 0.05).collect()
}

/// Runs [`hammings_razor`] at increasing `p` and stops at the first candidate
/// accepted by `accept`. Reports are concatenated; the returned index is the
/// fraction that produced the kept candidate.
pub fn hammings_razor_sweep(
    h: &BitMatrix,
    fractions: &[f64],
    rounds: usize,
    cfg: &AttackConfig,
    mut accept: impl FnMut(&BitVector) -> bool,
) -> (AttackReport, Option<usize>) {
    let start = Instant::now();
    let mut total = AttackReport::new("hamming");
    for (idx, &p) in fractions.iter().enumerate() {
        let r = hammings_razor(h, p, rounds, cfg);
        total.checks_used += r.checks_used;
        total.kernel_dims_seen.extend(r.kernel_dims_seen);
        total.rounds.extend(r.rounds);
        if let Some(c) = r.candidates.into_iter().find(|c| accept(c)) {
            total.candidates.push(c);
            total.wall_time = start.elapsed();
            return (total, Some(idx));
        }
    }
    for r in total.rounds.iter_mut() {
        r.found = false;
    }
    total.wall_time = start.elapsed();
    (total, None)
}

/// Fraction of trials in which each of `H₁′ v₁ = 0` and `H₂′ v₂ = 0` has a
/// nonzero solution after deleting `⌊p m⌋` rows, where `H = (H₁, H₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RazorThreshold {
    pub p: f64,
    pub first_system: f64,
    pub second_system: f64,
}

/// White-box scan over `fractions` with `trials` row deletions each.
pub fn razor_threshold_sweep<R: Rng + ?Sized>(
    h1: &BitMatrix,
    h2: &BitMatrix,
    fractions: &[f64],
    trials: usize,
    rng: &mut R,
) -> Vec<RazorThreshold> {
    assert_eq!(h1.rows(), h2.rows());
    let m = h1.rows();
    fractions
        .iter()
        .map(|&p| {
            let (mut a, mut b) = (0usize, 0usize);
            for _ in 0..trials {
                let kept = drop_rows(m, p, rng);
                a += (rank(&h1.select_rows(&kept)) < h1.cols()) as usize;
                b += (rank(&h2.select_rows(&kept)) < h2.cols()) as usize;
            }
            RazorThreshold {
                p,
                first_system: a as f64 / trials as f64,
                second_system: b as f64 / trials as f64,
            }
        })
        .collect()
}

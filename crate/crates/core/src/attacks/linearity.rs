use std::time::Instant;

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{round_rng, AttackConfig, AttackReport, RoundLog};
use crate::codes::{classify_self_dual_intersection, weight_mod4, DualClass};
use crate::f2linalg::{gram, kernel_vectors, rank, BitMatrix, BitVector};

/// `G_d = H_dᵀ H_d` where `H_d` keeps the rows with `p·d = 1`.
pub fn gram_d(h: &BitMatrix, d: &BitVector) -> BitMatrix {
    gram(&h.select_rows_by(&h.mul_vec(d)))
}

/// Candidate test of the Linearity Attack on `H_v` (the rows selected by
/// `hv = H v`): `rank(gram(H_v)) ≤ g_threshold` and `D_v` doubly even.
pub fn property_check(h: &BitMatrix, hv: &BitVector, g_threshold: usize) -> bool {
    let h_v = h.select_rows_by(hv);
    if h_v.rows() == 0 || rank(&gram(&h_v)) > g_threshold {
        return false;
    }
    matches!(
        classify_self_dual_intersection(&h_v),
        Ok(p) if p.dual_class == DualClass::DoublyEven
    )
}

/// Codewords `H_v c` for random `c` all have weight `0` or `3 mod 4`.
pub fn qrc_check<R: Rng + ?Sized>(h_v: &BitMatrix, codewords: usize, rng: &mut R) -> bool {
    if h_v.rows() == 0 {
        return false;
    }
    (0..codewords).all(|_| {
        let c = h_v.mul_vec(&BitVector::random(h_v.cols(), rng));
        matches!(weight_mod4(&c), 0 | 3)
    })
}

/// Walks the nonzero vectors of `span(basis)` in Gray-code order, testing at
/// most `budget` of them. Returns the number tested and the first hit.
pub(crate) fn explore_kernel(
    h: &BitMatrix,
    basis: &[BitVector],
    budget: u64,
    mut check: impl FnMut(&BitVector) -> bool,
) -> (u64, Option<BitVector>) {
    let t = basis.len();
    let total = if t >= 64 { u64::MAX } else { (1u64 << t) - 1 };
    let limit = total.min(budget);
    let images: Vec<BitVector> = basis.iter().map(|k| h.mul_vec(k)).collect();
    let mut v = BitVector::zeros(h.cols());
    let mut hv = BitVector::zeros(h.rows());
    for i in 1..=limit {
        let j = i.trailing_zeros() as usize;
        v ^= &basis[j];
        hv ^= &images[j];
        if check(&hv) {
            return (i, Some(v));
        }
    }
    (limit, None)
}

fn linear_family(
    name: &'static str,
    h: &BitMatrix,
    k: usize,
    lazy_threshold: Option<usize>,
    cfg: &AttackConfig,
) -> AttackReport {
    assert!(k >= 1, "need at least one probe vector");
    let start = Instant::now();
    let mut report = AttackReport::new(name);
    let n = h.cols();
    for round in 0..cfg.d_resample_budget {
        if report.checks_used >= cfg.check_budget {
            break;
        }
        let mut rng = round_rng(cfg.seed, round);
        let mut stacked = BitMatrix::zeros(0, n);
        for _ in 0..k {
            let d = BitVector::random(n, &mut rng);
            stacked = stacked.vstack(&gram_d(h, &d));
        }
        let basis = kernel_vectors(&stacked);
        let dim = basis.len();
        report.kernel_dims_seen.push(dim);
        if lazy_threshold.is_some_and(|a| dim > a) {
            report.rounds.push(RoundLog { dim, checks: 0, found: false });
            continue;
        }
        let remaining = cfg.check_budget - report.checks_used;
        let (checks, hit) = explore_kernel(h, &basis, remaining, |hv| property_check(h, hv, cfg.g_threshold));
        report.checks_used += checks;
        report.rounds.push(RoundLog {
            dim,
            checks,
            found: hit.is_some(),
        });
        if let Some(v) = hit {
            report.candidates.push(v);
            break;
        }
    }
    report.wall_time = start.elapsed();
    report
}

/// Linearity Attack: sample `d`, search `ker(G_d)` for a vector passing
/// [`property_check`], resample until a candidate appears or a budget runs out.
pub fn extract_secret_linearity(h: &BitMatrix, cfg: &AttackConfig) -> AttackReport {
    linear_family("linearity", h, 1, None, cfg)
}

/// Searches `ker(G_{d₁}) ∩ … ∩ ker(G_{d_k})` instead of a single kernel.
/// `k = 1` is exactly [`extract_secret_linearity`].
pub fn double_meyer(h: &BitMatrix, k: usize, cfg: &AttackConfig) -> AttackReport {
    let name = if k == 1 { "linearity" } else { "double-meyer" };
    linear_family(name, h, k, None, cfg)
}

/// Skips every `d` whose kernel has dimension above `a`.
pub fn lazy_linearity(h: &BitMatrix, a: usize, cfg: &AttackConfig) -> AttackReport {
    linear_family("lazy", h, 1, Some(a), cfg)
}

/// `E ≈ 2^g / Φ((a − λ₁) / (√m/2))`, modelling `dim ker(G_d)` as
/// `N(λ₁, m/4)`.
pub fn expected_iterations(g: usize, lambda1: f64, m: usize, a: f64) -> f64 {
    let sigma = (m as f64).sqrt() / 2.0;
    let p = Normal::new(lambda1, sigma).expect("positive sigma").cdf(a);
    2f64.powi(g as i32) / p
}

/// `log₂` of [`expected_iterations`], computed in the log domain so tiny
/// tail probabilities do not underflow.
pub fn log2_expected_iterations(g: usize, lambda1: f64, m: usize, a: f64) -> f64 {
    let sigma = (m as f64).sqrt() / 2.0;
    let z = (a - lambda1) / sigma;
    let p = Normal::new(0.0, 1.0).expect("unit normal").cdf(z);
    let log_p = if p > 1e-300 {
        p.log2()
    } else {
        // Mills ratio: Φ(z) ≈ φ(z)/|z| for z → −∞.
        let ln = -z * z / 2.0 - (2.0 * std::f64::consts::PI).sqrt().ln() - (-z).ln();
        ln / std::f64::consts::LN_2
    };
    g as f64 - log_p
}

/// Row `j` of `M` is the sum of the rows `p` of `H` with `p·d = p·e_j = 1`.
pub fn km_matrix(h: &BitMatrix, d: &BitVector, es: &[BitVector]) -> BitMatrix {
    let hd = h.mul_vec(d);
    let rows: Vec<BitVector> = es
        .iter()
        .map(|e| {
            let he = h.mul_vec(e);
            let mut acc = BitVector::zeros(h.cols());
            for i in 0..h.rows() {
                if hd.get(i) && he.get(i) {
                    acc ^= &h.row(i);
                }
            }
            acc
        })
        .collect();
    BitMatrix::from_rows(h.cols(), &rows)
}

/// The original extraction: `M` from `l` random `e_j`, candidates from
/// `ker(M)` filtered by [`qrc_check`].
///
/// Panics if some row of `M` falls outside `rowspace(G_d)`.
pub fn km_extract(h: &BitMatrix, l: usize, cfg: &AttackConfig) -> AttackReport {
    let start = Instant::now();
    let mut report = AttackReport::new("km");
    let n = h.cols();
    for round in 0..cfg.d_resample_budget {
        if report.checks_used >= cfg.check_budget {
            break;
        }
        let mut rng = round_rng(cfg.seed, round);
        let d = BitVector::random(n, &mut rng);
        let es: Vec<BitVector> = (0..l).map(|_| BitVector::random(n, &mut rng)).collect();
        let m = km_matrix(h, &d, &es);
        let gd = gram_d(h, &d);
        assert_eq!(rank(&gd.vstack(&m)), rank(&gd), "M left the row space of G_d");
        let basis = kernel_vectors(&m);
        let dim = basis.len();
        report.kernel_dims_seen.push(dim);
        let remaining = cfg.check_budget - report.checks_used;
        let samples = cfg.qrc_codeword_samples;
        let (checks, hit) = explore_kernel(h, &basis, remaining, |hv| {
            qrc_check(&h.select_rows_by(hv), samples, &mut rng)
        });
        report.checks_used += checks;
        report.rounds.push(RoundLog {
            dim,
            checks,
            found: hit.is_some(),
        });
        if let Some(v) = hit {
            report.candidates.push(v);
            break;
        }
    }
    report.wall_time = start.elapsed();
    report
}

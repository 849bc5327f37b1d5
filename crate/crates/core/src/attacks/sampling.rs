use rand::Rng;

use crate::codes::sample_affine;
use crate::error::{Error, Result};
use crate::f2linalg::{kernel_vectors, rank, solve, BitMatrix, BitVector};
use crate::protocol::{bias_of, SampleBatch};

fn check_corr(corr: f64) {
    assert!(corr.abs() <= 1.0 + 1e-12, "correlation {corr} outside [-1, 1]");
}

/// Each sample is uniform on `{x : x·s′ = 0}` with probability `β = (1+corr)/2`
/// and uniform on the complement otherwise.
pub fn naive_sample<R: Rng + ?Sized>(s_prime: &BitVector, corr: f64, samples: usize, rng: &mut R) -> SampleBatch {
    check_corr(corr);
    let pivot = s_prime.first_one().expect("candidate secret must be nonzero");
    let beta = bias_of(corr);
    let n = s_prime.len();
    let draws = (0..samples)
        .map(|_| {
            let want_odd = rng.random::<f64>() >= beta;
            let mut x = BitVector::random(n, rng);
            if x.dot(s_prime) != want_odd {
                x.flip(pivot);
            }
            x
        })
        .collect();
    SampleBatch::new(n, draws, "naive")
}

/// With probability `β` a uniform element of `rowspace(R_{s′})`, otherwise a
/// sum of an odd number of `H_{s′}` rows (odd subset chosen uniformly).
pub fn sample_by_rows<R: Rng + ?Sized>(
    h: &BitMatrix,
    s_prime: &BitVector,
    corr: f64,
    samples: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    check_corr(corr);
    let n = h.cols();
    if s_prime.len() != n {
        return Err(Error::InvalidParameter("candidate length differs from H".into()));
    }
    let split = h.mul_vec(s_prime);
    let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..h.rows()).partition(|&i| split.get(i));
    let beta = bias_of(corr);
    if ones.is_empty() && beta < 1.0 {
        return Err(Error::InvalidParameter(
            "candidate is orthogonal to every row, cannot produce odd samples".into(),
        ));
    }
    let draws = (0..samples)
        .map(|_| {
            let mut x = BitVector::zeros(n);
            if rng.random::<f64>() < beta {
                for &i in &zeros {
                    if rng.random() {
                        x ^= &h.row(i);
                    }
                }
            } else {
                let mut parity = false;
                for &i in &ones[1..] {
                    if rng.random() {
                        x ^= &h.row(i);
                        parity ^= true;
                    }
                }
                if !parity {
                    x ^= &h.row(ones[0]);
                }
            }
            x
        })
        .collect();
    Ok(SampleBatch::new(n, draws, "rows"))
}

/// Samples whose bias against each candidate `sᵢ` is `(1 + corrs[i])/2`.
///
/// Candidates are sorted by bias, `β₁ ≥ … ≥ β_t`. A sample is a uniform point
/// of `c_j + ker(S)` where `S c_j` is zero on the first `j` candidates and one
/// on the rest; `c_t` is taken with probability `β_t`, `c_j` with
/// `β_j − β_{j+1}` and `c_0` with `1 − β₁`. Then `Pr[x·sᵢ = 0] = βᵢ`. With
/// equal biases only `c_t` (the kernel) and `c_0` (`S y = 1`) are used.
pub fn multi_secret_sample<R: Rng + ?Sized>(
    candidates: &[BitVector],
    corrs: &[f64],
    samples: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    if candidates.is_empty() || candidates.len() != corrs.len() {
        return Err(Error::InvalidParameter(
            "need one correlation per candidate and at least one candidate".into(),
        ));
    }
    corrs.iter().for_each(|&c| check_corr(c));
    let n = candidates[0].len();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| corrs[b].total_cmp(&corrs[a]));
    let rows: Vec<BitVector> = order.iter().map(|&i| candidates[i].clone()).collect();
    let betas: Vec<f64> = order.iter().map(|&i| bias_of(corrs[i])).collect();
    let s = BitMatrix::from_rows(n, &rows);
    let t = rows.len();
    if rank(&s) != t {
        return Err(Error::DependentCandidates);
    }
    let kernel = kernel_vectors(&s);
    let targets: Vec<BitVector> = (0..=t)
        .map(|j| {
            let mut b = BitVector::zeros(t);
            for i in j..t {
                b.set(i, true);
            }
            solve(&s, &b).expect("full row rank system is solvable")
        })
        .collect();
    let mut weights = Vec::with_capacity(t + 1);
    weights.push(1.0 - betas[0]);
    for j in 1..t {
        weights.push(betas[j - 1] - betas[j]);
    }
    weights.push(betas[t - 1]);
    let draws = (0..samples)
        .map(|_| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = t;
            for (j, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = j;
                    break;
                }
            }
            sample_affine(&targets[pick], &kernel, rng)
        })
        .collect();
    Ok(SampleBatch::new(n, draws, "multi-secret"))
}

//! Coding-theory predicates, the quadratic-residue code generator, and the
//! randomized samplers for doubly-even `D` and companion `F` blocks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::f2linalg::{gram, kernel_vectors, rank, solve, BitMatrix, BitVector, IncrementalBasis};

/// Hamming weight modulo 4.
pub fn weight_mod4(v: &BitVector) -> u8 {
    (v.weight() % 4) as u8
}

/// Classification of `D_s = C_s ∩ C_s^⊥`. No third case exists for a code
/// whose dual is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualClass {
    DoublyEven,
    UnbiasedEven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeProfile {
    /// `dim C_s`, the rank of `H_s`.
    pub dim_c: usize,
    /// `dim D_s`.
    pub dim_d: usize,
    /// `rank(H_sᵀ H_s)`.
    pub gram_rank: usize,
    pub dual_class: DualClass,
}

pub(crate) fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// The `q × (q+3)/2` generator: an all-ones column followed by the `(q+1)/2`
/// cyclic shifts of the quadratic-residue indicator. Column `k + 1` has bit
/// `i` set iff `i − k + 1` is a nonzero residue mod `q`.
pub fn qrc_generator(q: usize) -> Result<BitMatrix> {
    if !is_prime(q) || !(q + 1).is_multiple_of(8) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must be a prime with q + 1 divisible by 8"
        )));
    }
    let mut residue = vec![false; q];
    for j in 1..q {
        residue[j * j % q] = true;
    }
    let cols = (q + 3) / 2;
    let mut h = BitMatrix::zeros(q, cols);
    for i in 0..q {
        h.set(i, 0, true);
        for k in 0..q.div_ceil(2) {
            if residue[(i + q + 1 - k % q) % q] {
                h.set(i, k + 1, true);
            }
        }
    }
    Ok(h)
}

pub(crate) fn column_space_contains(m: &BitMatrix, v: &BitVector) -> bool {
    solve(m, v).is_some()
}

/// Basis of `D_s = C_s ∩ C_s^⊥`, obtained as the image under `H_s` of the
/// kernel of its Gram matrix.
pub fn self_dual_intersection_basis(h_s: &BitMatrix) -> Vec<BitVector> {
    let mut basis = IncrementalBasis::new(h_s.rows());
    kernel_vectors(&gram(h_s))
        .into_iter()
        .map(|k| h_s.mul_vec(&k))
        .filter(|c| basis.insert(c))
        .collect()
}

pub fn classify_self_dual_intersection(h_s: &BitMatrix) -> Result<CodeProfile> {
    if !column_space_contains(h_s, &BitVector::ones(h_s.rows())) {
        return Err(Error::NoSecret);
    }
    let dim_c = rank(h_s);
    let gram_rank = rank(&gram(h_s));
    let basis = self_dual_intersection_basis(h_s);
    debug_assert_eq!(basis.len(), dim_c - gram_rank);
    let doubly_even = basis.iter().all(|c| weight_mod4(c) == 0)
        && basis
            .iter()
            .enumerate()
            .all(|(i, a)| basis[i + 1..].iter().all(|b| !a.dot(b)));
    Ok(CodeProfile {
        dim_c,
        dim_d: basis.len(),
        gram_rank,
        dual_class: if doubly_even {
            DualClass::DoublyEven
        } else {
            DualClass::UnbiasedEven
        },
    })
}

/// Uniform element of `particular + span(kernel)`.
pub fn sample_affine<R: Rng + ?Sized>(
    particular: &BitVector,
    kernel: &[BitVector],
    rng: &mut R,
) -> BitVector {
    let mut x = particular.clone();
    for k in kernel {
        if rng.random::<bool>() {
            x ^= k;
        }
    }
    x
}

/// Independent subset of `vs` spanning the same space.
pub(crate) fn independent(len: usize, vs: &[BitVector]) -> Vec<BitVector> {
    let mut basis = IncrementalBasis::new(len);
    vs.iter().filter(|v| basis.insert(v)).cloned().collect()
}

/// Solves `{x ∈ span(basis) : x·c_i = t_i}`. Returns a particular solution and a
/// basis of the homogeneous part, or `None` if the affine set is empty.
pub fn affine_in_span(
    len: usize,
    basis: &[BitVector],
    constraints: &[BitVector],
    targets: &[bool],
) -> Option<(BitVector, Vec<BitVector>)> {
    assert_eq!(constraints.len(), targets.len());
    let basis = independent(len, basis);
    let mut m = BitMatrix::zeros(constraints.len(), basis.len());
    for (i, c) in constraints.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            m.set(i, j, c.dot(b));
        }
    }
    let combine = |y: &BitVector| {
        let mut x = BitVector::zeros(len);
        for j in y.ones_iter() {
            x ^= &basis[j];
        }
        x
    };
    let y0 = solve(&m, &BitVector::from_bools(targets))?;
    let kernel = kernel_vectors(&m).iter().map(combine).collect();
    Some((combine(&y0), kernel))
}

/// Basis of `span(basis) ∩ {x : x·c = 0 for every c}`.
pub fn restrict_orthogonal(len: usize, basis: &[BitVector], constraints: &[BitVector]) -> Vec<BitVector> {
    let zeros = vec![false; constraints.len()];
    affine_in_span(len, basis, constraints, &zeros)
        .map(|(_, k)| k)
        .unwrap_or_default()
}

/// Uniform element of `span(ambient) \ span(excluded)`; assumes the excluded
/// span sits inside the ambient one.
pub fn sample_complement<R: Rng + ?Sized>(
    len: usize,
    ambient: &[BitVector],
    excluded: &[BitVector],
    rng: &mut R,
) -> Option<BitVector> {
    let mut basis = IncrementalBasis::new(len);
    let inner: Vec<BitVector> = excluded.iter().filter(|u| basis.insert(u)).cloned().collect();
    let outer: Vec<BitVector> = ambient.iter().filter(|a| basis.insert(a)).cloned().collect();
    if outer.is_empty() {
        return None;
    }
    let mut x = loop {
        let x = sample_affine(&BitVector::zeros(len), &outer, rng);
        if !x.is_zero() {
            break x;
        }
    };
    for u in &inner {
        if rng.random::<bool>() {
            x ^= u;
        }
    }
    Some(x)
}

/// Extra conditions for [`sample_subspace_with_constraints`].
#[derive(Clone, Debug, Default)]
pub struct SubspaceConstraints {
    /// Result must be orthogonal to each of these.
    pub orthogonal_to: Vec<BitVector>,
    /// Result must have weight ≡ 0 mod 4 (two-stage `a1`/`a2` procedure).
    pub doubly_even: bool,
}

/// Samples from `span(ambient) ∩ constraints \ span(excluded)`.
///
/// Without the weight condition the draw is uniform. With it, `a1` is drawn
/// from the even part of the constrained set; if `|a1| ≡ 2 mod 4` a second
/// vector `a2 ⊥ a1` outside `span(excluded, a1)` is drawn and either `a2` or
/// `a1 + a2` is returned, whichever is doubly even. The even restriction makes
/// the mod-4 weight additive for orthogonal pairs.
pub fn sample_subspace_with_constraints<R: Rng + ?Sized>(
    len: usize,
    ambient: &[BitVector],
    excluded: &[BitVector],
    constraints: &SubspaceConstraints,
    rng: &mut R,
) -> Option<BitVector> {
    let mut orth = constraints.orthogonal_to.clone();
    if constraints.doubly_even {
        orth.push(BitVector::ones(len));
    }
    let space = restrict_orthogonal(len, ambient, &orth);
    let a1 = sample_complement(len, &space, excluded, rng)?;
    if !constraints.doubly_even || weight_mod4(&a1) == 0 {
        return Some(a1);
    }
    let space2 = restrict_orthogonal(len, &space, std::slice::from_ref(&a1));
    let mut excluded2 = excluded.to_vec();
    excluded2.push(a1.clone());
    let a2 = sample_complement(len, &space2, &excluded2, rng)?;
    if weight_mod4(&a2) == 0 {
        Some(a2)
    } else {
        Some(&a1 ^ &a2)
    }
}

fn matrix_of_columns(rows: usize, cols: &[BitVector]) -> BitMatrix {
    BitMatrix::from_columns(rows, cols)
}

/// Basis of `ker(Mᵀ)` where `M` has the given columns, i.e. the vectors
/// orthogonal to every column.
fn orthogonal_complement(len: usize, cols: &[BitVector]) -> Vec<BitVector> {
    kernel_vectors(&BitMatrix::from_rows(len, cols))
}

/// Moves the all-ones vector (if it lies in the span) into the first column,
/// keeping the span unchanged.
fn ones_to_front(m1: usize, cols: &mut [BitVector]) {
    if cols.is_empty() {
        return;
    }
    let ones = BitVector::ones(m1);
    let d = matrix_of_columns(m1, cols);
    if let Some(y) = solve(&d, &ones) {
        let j = y.first_one().expect("nonzero combination");
        cols[j] = ones;
        cols.swap(0, j);
    }
}

/// Largest dimension of a doubly-even code of length `len`.
pub fn max_doubly_even_dim(len: usize) -> usize {
    match len % 8 {
        0 => len / 2,
        1 | 7 => (len - 1) / 2,
        3 | 5 => (len - 3) / 2,
        _ => len.saturating_sub(2) / 2,
    }
}

pub(crate) fn sample_doubly_even_inner<R: Rng + ?Sized>(
    m1: usize,
    d: usize,
    seed_with_ones: bool,
    rng: &mut R,
) -> Result<BitMatrix> {
    if 2 * d > m1 || (d > 0 && m1 < 4) {
        return Err(Error::InvalidParameter(format!(
            "doubly-even sampling needs d <= m1/2 and m1 >= 4 (m1 = {m1}, d = {d})"
        )));
    }
    let mut cols: Vec<BitVector> = Vec::with_capacity(d);
    if seed_with_ones && d > 0 {
        if !m1.is_multiple_of(4) {
            return Err(Error::InvalidParameter(format!(
                "all-ones is doubly even only when 4 | m1 (m1 = {m1})"
            )));
        }
        cols.push(BitVector::ones(m1));
    }
    let de = SubspaceConstraints {
        orthogonal_to: Vec::new(),
        doubly_even: true,
    };
    while cols.len() < d {
        let ambient = if cols.is_empty() {
            (0..m1).map(|i| BitVector::unit(m1, i)).collect()
        } else {
            orthogonal_complement(m1, &cols)
        };
        match sample_subspace_with_constraints(m1, &ambient, &cols, &de, rng) {
            Some(c) => cols.push(c),
            None => break,
        }
    }
    ones_to_front(m1, &mut cols);
    Ok(matrix_of_columns(m1, &cols))
}

/// Samples an `m1 × d'` generator of a doubly-even code with `d' ≤ d`.
///
/// The iteration can run out of candidates at the extremal sizes, in which
/// case fewer columns come back; callers needing exactly `d` retry.
pub fn sample_doubly_even<R: Rng + ?Sized>(m1: usize, d: usize, rng: &mut R) -> Result<BitMatrix> {
    sample_doubly_even_inner(m1, d, false, rng)
}

/// Samples `F` (`m1 × g`) with `Dᵀ F = 0`, `Fᵀ F` in standard form and the
/// all-ones vector inside `span(D, F)`.
///
/// The standard form is `diag(1, J, …)` for odd `m1`, `diag(I₂, J, …)` for even
/// `m1` with `1 ∉ span(D)`, and `diag(J, …)` otherwise, where `J` is the 2×2
/// exchange matrix.
pub fn sample_f<R: Rng + ?Sized>(m1: usize, g: usize, d: &BitMatrix, rng: &mut R) -> Result<BitMatrix> {
    let dcols = d.columns();
    if g + 2 * dcols.len() > m1 || g % 2 != m1 % 2 {
        return Err(Error::InvalidParameter(format!(
            "F sampling needs g <= m1 - 2d and g = m1 mod 2 (m1 = {m1}, g = {g}, d = {})",
            dcols.len()
        )));
    }
    let ones = BitVector::ones(m1);
    let ones_in_d = !dcols.is_empty() && column_space_contains(d, &ones);
    let ker_dt = orthogonal_complement(m1, &dcols);
    let exhausted = || Error::InvalidParameter("F sampling ran out of candidate vectors".into());
    let mut f: Vec<BitVector> = Vec::with_capacity(g);

    if m1 % 2 == 1 {
        f.push(ones.clone());
    } else if !ones_in_d {
        if g == 0 {
            return Err(Error::InvalidParameter(
                "g = 0 with even m1 needs the all-ones vector inside D".into(),
            ));
        }
        let (p, k) = affine_in_span(m1, &ker_dt, std::slice::from_ref(&ones), &[true]).ok_or_else(exhausted)?;
        let c2 = sample_affine(&p, &k, rng);
        f.push(&ones ^ &c2);
        f.push(c2);
    } else if g > 0 {
        let c1 = sample_complement(m1, &ker_dt, &dcols, rng).ok_or_else(exhausted)?;
        let (p, k) = affine_in_span(m1, &ker_dt, std::slice::from_ref(&c1), &[true]).ok_or_else(exhausted)?;
        let c2 = sample_affine(&p, &k, rng);
        f.push(c1);
        f.push(c2);
    }

    while f.len() < g {
        let code: Vec<BitVector> = dcols.iter().chain(&f).cloned().collect();
        let dual = orthogonal_complement(m1, &code);
        let a = sample_complement(m1, &dual, &dcols, rng).ok_or_else(exhausted)?;
        let (p, k) = affine_in_span(m1, &dual, std::slice::from_ref(&a), &[true]).ok_or_else(exhausted)?;
        let b = sample_affine(&p, &k, rng);
        f.push(a);
        f.push(b);
    }
    Ok(matrix_of_columns(m1, &f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qrc7_literal() -> BitMatrix {
        BitMatrix::from_strs(&[
            "11000", "11100", "10110", "11011", "10101", "10010", "10001",
        ])
    }

    fn all_codewords(cols: &[BitVector], len: usize) -> Vec<BitVector> {
        let k = cols.len();
        (0..1u64 << k)
            .map(|mask| {
                let mut x = BitVector::zeros(len);
                for (j, c) in cols.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        x ^= c;
                    }
                }
                x
            })
            .collect()
    }

    #[test]
    fn weight_mod4_examples() {
        assert_eq!(weight_mod4(&BitVector::from_bits(&[1, 1, 1, 1, 0, 0, 0])), 0);
        assert_eq!(weight_mod4(&BitVector::ones(7)), 3);
        assert_eq!(weight_mod4(&BitVector::zeros(9)), 0);
    }

    #[test]
    fn qrc7_matches_literal() {
        let h = qrc_generator(7).unwrap();
        assert_eq!(h, qrc7_literal());
        let weights: Vec<usize> = h.columns().iter().map(|c| c.weight()).collect();
        assert_eq!(weights, vec![7, 3, 3, 3, 3]);
    }

    #[test]
    fn qrc23_columns_pairwise_odd() {
        let h = qrc_generator(23).unwrap();
        assert_eq!((h.rows(), h.cols()), (23, 13));
        let cols = h.columns();
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                assert!(cols[i].dot(&cols[j]), "columns {i},{j}");
            }
        }
    }

    #[test]
    fn qrc_rejects_bad_q() {
        assert!(qrc_generator(5).is_err());
        assert!(qrc_generator(15).is_err());
        assert!(qrc_generator(9).is_err());
    }

    #[test]
    fn classify_examples() {
        let p = classify_self_dual_intersection(&BitMatrix::from_strs(&["1", "1"])).unwrap();
        assert_eq!((p.dim_c, p.dim_d, p.gram_rank), (1, 1, 0));
        assert_eq!(p.dual_class, DualClass::UnbiasedEven);

        let p = classify_self_dual_intersection(&qrc7_literal()).unwrap();
        assert_eq!((p.dim_c, p.dim_d, p.gram_rank), (4, 3, 1));
        assert_eq!(p.dual_class, DualClass::DoublyEven);

        let p = classify_self_dual_intersection(&BitMatrix::from_strs(&["1111"])).unwrap();
        assert_eq!((p.dim_c, p.dim_d, p.gram_rank), (1, 0, 1));
        assert_eq!(p.dual_class, DualClass::DoublyEven);

        assert_eq!(
            classify_self_dual_intersection(&BitMatrix::from_strs(&["10", "00"])),
            Err(Error::NoSecret)
        );
    }

    #[test]
    fn doubly_even_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = sample_doubly_even(4, 1, &mut rng).unwrap();
        assert_eq!(d.column(0), BitVector::ones(4));
        for _ in 0..50 {
            let d = sample_doubly_even(8, 2, &mut rng).unwrap();
            assert_eq!(d.cols(), 2);
            let cols = d.columns();
            assert!(cols.iter().all(|c| c.weight() == 4 || c.weight() == 8));
            assert!(!cols[0].dot(&cols[1]));
            assert_eq!(rank(&d), 2);
        }
        assert!(sample_doubly_even(6, 4, &mut rng).is_err());
    }

    #[test]
    fn doubly_even_self_dual_extreme() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut short = 0;
        for _ in 0..100 {
            let d = sample_doubly_even(16, 8, &mut rng).unwrap();
            assert!(d.cols() == 7 || d.cols() == 8, "got {}", d.cols());
            assert!(gram(&d).is_zero());
            assert_eq!(rank(&d), d.cols());
            for c in all_codewords(&d.columns(), 16) {
                assert_eq!(weight_mod4(&c), 0);
            }
            if d.cols() == 8 {
                assert_eq!(kernel_vectors(&d.transpose()).len(), 8);
            } else {
                short += 1;
            }
        }
        eprintln!("m1=16 d=8: {short}/100 draws stopped at 7 columns");
    }

    #[test]
    fn f_sampler_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let empty = BitMatrix::zeros(7, 0);
        let f = sample_f(7, 1, &empty, &mut rng).unwrap();
        assert_eq!(f.column(0), BitVector::ones(7));
        assert_eq!(gram(&f), BitMatrix::identity(1));

        let d = BitMatrix::from_columns(8, &[BitVector::ones(8)]);
        let f = sample_f(8, 2, &d, &mut rng).unwrap();
        assert_eq!(gram(&f), BitMatrix::from_strs(&["01", "10"]));

        let empty = BitMatrix::zeros(8, 0);
        let f = sample_f(8, 2, &empty, &mut rng).unwrap();
        assert_eq!(gram(&f), BitMatrix::identity(2));
        let (c1, c2) = (f.column(0), f.column(1));
        assert_eq!(c1.weight() % 2, 1);
        assert_eq!(c2.weight() % 2, 1);
        assert_eq!(&c1 ^ &c2, BitVector::ones(8));

        assert!(sample_f(7, 2, &BitMatrix::zeros(7, 0), &mut rng).is_err());
    }

    #[test]
    fn complement_sampler_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = BitVector::from_bits(&[1, 0, 1]);
        assert_eq!(sample_affine(&p, &[], &mut rng), p);
        let amb = vec![BitVector::unit(3, 0), BitVector::unit(3, 1)];
        assert!(sample_subspace_with_constraints(3, &amb, &amb, &SubspaceConstraints::default(), &mut rng).is_none());
    }

    #[test]
    fn doubly_even_constraint_on_f2_4() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let units: Vec<BitVector> = (0..4).map(|i| BitVector::unit(4, i)).collect();
        let c = SubspaceConstraints {
            orthogonal_to: vec![],
            doubly_even: true,
        };
        for _ in 0..100 {
            let v = sample_subspace_with_constraints(4, &units, &[], &c, &mut rng).unwrap();
            assert!(v.is_zero() || v == BitVector::ones(4));
        }
    }

    fn brute_max_doubly_even(len: usize) -> usize {
        let vecs: Vec<u64> = (1..1u64 << len).filter(|v| v.count_ones() % 4 == 0).collect();
        fn grow(vecs: &[u64], start: usize, chosen: &mut Vec<u64>, best: &mut usize) {
            *best = (*best).max(chosen.len());
            for i in start..vecs.len() {
                let v = vecs[i];
                if chosen.iter().all(|c| (c & v).count_ones().is_multiple_of(2)) {
                    let mut span = vec![0u64];
                    for c in chosen.iter() {
                        let ext: Vec<u64> = span.iter().map(|x| x ^ c).collect();
                        span.extend(ext);
                    }
                    if !span.contains(&v) {
                        chosen.push(v);
                        grow(vecs, i + 1, chosen, best);
                        chosen.pop();
                    }
                }
            }
        }
        let mut best = 0;
        grow(&vecs, 0, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn max_doubly_even_dim_matches_search() {
        for len in 1..=8 {
            assert_eq!(max_doubly_even_dim(len), brute_max_doubly_even(len), "length {len}");
        }
    }

    #[test]
    fn sampler_reaches_max_doubly_even_dim() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for len in 4..=24 {
            let d = max_doubly_even_dim(len);
            let hit = (0..64).any(|_| sample_doubly_even(len, d, &mut rng).unwrap().cols() == d);
            assert!(hit, "length {len}");
        }
    }
}

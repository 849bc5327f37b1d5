use rand::seq::SliceRandom;
use rand::Rng;

use super::bitvec::WORD_BITS;
use super::{BitMatrix, BitVector};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

#[inline]
fn has_bit(m: &BitMatrix, i: usize, c: usize) -> bool {
    (m.row_words(i)[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
}

/// Gauss-Jordan elimination restricted to the first `pivot_limit` columns.
/// Pivots are chosen as the lowest-index row holding a one.
fn reduce(m: &mut BitMatrix, pivot_limit: usize, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| has_bit(m, i, c)) else {
            continue;
        };
        m.swap_rows(p, r);
        let start = if full { 0 } else { r + 1 };
        for i in start..m.rows() {
            if i != r && has_bit(m, i, c) {
                m.xor_row_into(r, i);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref(m: &BitMatrix) -> Rref {
    let mut matrix = m.clone();
    let pivots = reduce(&mut matrix, m.cols(), true);
    Rref { matrix, pivots }
}

pub fn rank(m: &BitMatrix) -> usize {
    // Eliminate along the shorter side; rank is transpose invariant.
    let mut work = if m.rows() > m.cols() { m.transpose() } else { m.clone() };
    let limit = work.cols();
    reduce(&mut work, limit, false).len()
}

/// Basis of `{v : M v = 0}` as a list of vectors, one per free column.
pub fn kernel_vectors(m: &BitMatrix) -> Vec<BitVector> {
    let Rref { matrix, pivots } = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::unit(n, f);
            for (i, &p) in pivots.iter().enumerate() {
                if matrix.get(i, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Kernel basis stored as the columns of a `cols(M) × dim` matrix.
pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    BitMatrix::from_columns(m.cols(), &kernel_vectors(m))
}

/// A particular solution of `M v = b` with free variables set to zero.
pub fn solve(m: &BitMatrix, b: &BitVector) -> Option<BitVector> {
    assert_eq!(b.len(), m.rows(), "solve: rhs length mismatch");
    let n = m.cols();
    let aug = m.hstack(&BitMatrix::from_columns(m.rows(), std::slice::from_ref(b)));
    let mut work = aug;
    let pivots = reduce(&mut work, n, true);
    for i in pivots.len()..work.rows() {
        if work.get(i, n) {
            return None;
        }
    }
    let mut v = BitVector::zeros(n);
    for (i, &p) in pivots.iter().enumerate() {
        if work.get(i, n) {
            v.set(p, true);
        }
    }
    Some(v)
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &BitMatrix) -> Option<BitMatrix> {
    assert_eq!(m.rows(), m.cols(), "inverse: matrix not square");
    let n = m.rows();
    let mut work = m.hstack(&BitMatrix::identity(n));
    let pivots = reduce(&mut work, n, true);
    (pivots.len() == n).then(|| work.col_range(n, 2 * n))
}

/// `Mᵀ M` over GF(2).
pub fn gram(m: &BitMatrix) -> BitMatrix {
    m.transpose().mul(m)
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Matrix `P` with `(P·M)` row `i` equal to row `perm[i]` of `M`.
pub fn permutation_matrix(perm: &[usize]) -> BitMatrix {
    let n = perm.len();
    let mut p = BitMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, true);
    }
    p
}

/// Random invertible `n × n` matrix. Rejection sampling up to 64, a random
/// `P·L·U` product above that.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    assert!(n >= 1, "random_invertible: n must be positive");
    if n <= 64 {
        loop {
            let q = BitMatrix::random(n, n, rng);
            if rank(&q) == n {
                return q;
            }
        }
    }
    let mut l = BitMatrix::random(n, n, rng);
    let mut u = BitMatrix::random(n, n, rng);
    for i in 0..n {
        for j in 0..n {
            if j > i {
                l.set(i, j, false);
            } else if j < i {
                u.set(i, j, false);
            }
        }
        l.set(i, i, true);
        u.set(i, i, true);
    }
    let p = permutation_matrix(&random_permutation(n, rng));
    p.mul(&l).mul(&u)
}

/// Row-echelon basis that grows one vector at a time.
///
/// Each stored vector is reduced against the ones inserted before it, so a
/// single pass in insertion order fully reduces a query vector.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    len: usize,
    rows: Vec<(usize, BitVector)>,
}

impl IncrementalBasis {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (p, b) in &self.rows {
            if v.get(*p) {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current span; reports whether it was.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len, "IncrementalBasis: length mismatch");
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

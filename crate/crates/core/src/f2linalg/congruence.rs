use super::{BitMatrix, BitVector};

/// Congruence normal form `Qᵀ G Q = diag(I_c, J, …, J, 0)` of a symmetric `G`,
/// with `c ∈ {0, 1, 2}` and `J = [[0,1],[1,0]]`.
#[derive(Clone, Debug)]
pub struct SymmetricForm {
    /// Columns: the `c` unit-diagonal vectors, then the hyperbolic pairs, then the radical.
    pub q: BitMatrix,
    /// `c`.
    pub ones: usize,
    pub pairs: usize,
}

impl SymmetricForm {
    pub fn rank(&self) -> usize {
        self.ones + 2 * self.pairs
    }

    pub fn canonical(&self) -> BitMatrix {
        let n = self.q.cols();
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..self.ones {
            m.set(i, i, true);
        }
        for p in 0..self.pairs {
            let a = self.ones + 2 * p;
            m.set(a, a + 1, true);
            m.set(a + 1, a, true);
        }
        m
    }
}

/// Brings a symmetric matrix to the normal form above by symmetric
/// Gram-Schmidt, then folds every three unit-diagonal vectors `u₁,u₂,u₃`
/// into `u₁+u₂+u₃` plus the pair `(u₁+u₂, u₁+u₃)`.
pub fn symmetric_standard_form(g: &BitMatrix) -> SymmetricForm {
    assert!(g.is_symmetric(), "symmetric_standard_form needs a symmetric matrix");
    let n = g.rows();
    let form = |u: &BitVector, v: &BitVector| u.dot(&g.mul_vec(v));
    let mut rest: Vec<BitVector> = (0..n).map(|j| BitVector::unit(n, j)).collect();
    let mut ones: Vec<BitVector> = Vec::new();
    let mut pairs: Vec<(BitVector, BitVector)> = Vec::new();
    loop {
        if let Some(i) = rest.iter().position(|u| form(u, u)) {
            let u = rest.swap_remove(i);
            let gu = g.mul_vec(&u);
            for v in rest.iter_mut() {
                if v.dot(&gu) {
                    *v ^= &u;
                }
            }
            ones.push(u);
            continue;
        }
        let hit = (0..rest.len()).find_map(|i| {
            let gi = g.mul_vec(&rest[i]);
            (i + 1..rest.len()).find(|&j| rest[j].dot(&gi)).map(|j| (i, j))
        });
        let Some((i, j)) = hit else { break };
        let v = rest.swap_remove(j);
        let u = rest.swap_remove(i);
        let (gu, gv) = (g.mul_vec(&u), g.mul_vec(&v));
        for w in rest.iter_mut() {
            let (a, b) = (w.dot(&gu), w.dot(&gv));
            if b {
                *w ^= &u;
            }
            if a {
                *w ^= &v;
            }
        }
        pairs.push((u, v));
    }
    while ones.len() >= 3 {
        let u3 = ones.pop().unwrap();
        let u2 = ones.pop().unwrap();
        let u1 = ones.pop().unwrap();
        let a = &u1 ^ &u2;
        let b = &u1 ^ &u3;
        let c = &a ^ &u3;
        ones.push(c);
        pairs.push((a, b));
    }
    let (c, p) = (ones.len(), pairs.len());
    let mut cols = ones;
    for (u, v) in pairs {
        cols.push(u);
        cols.push(v);
    }
    cols.extend(rest);
    SymmetricForm {
        q: BitMatrix::from_columns(n, &cols),
        ones: c,
        pairs: p,
    }
}

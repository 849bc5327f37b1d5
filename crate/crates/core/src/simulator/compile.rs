use std::fmt::Write as _;

use super::State;
use crate::error::{Error, Result};
use crate::f2linalg::{inverse, rank, BitMatrix, BitVector, IncrementalBasis};

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// CNOTs applied in list order as `(control, target)`.
    Cnot(Vec<(usize, usize)>),
    /// `e^{iθ X_q}` on each listed qubit.
    Rot { qubits: Vec<usize>, theta: f64 },
}

/// `U_{H,θ}` rewritten as rotation rounds conjugated by CNOT circuits.
///
/// The circuit implements `U_{HQ,θ}` for the column change `Q` chosen during
/// normalization; a measured outcome `y` maps back to `x = Q^{−T} y`.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    pub n: usize,
    pub layers: Vec<Layer>,
    /// `Q^{−T}`.
    pub postprocess: BitMatrix,
    /// Number of rotation rounds after the initial one.
    pub rounds: usize,
}

impl CompiledCircuit {
    pub fn cnot_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Cnot(g) => g.len(),
                Layer::Rot { .. } => 0,
            })
            .sum()
    }

    /// Maps a raw outcome of the compiled circuit to the original basis.
    pub fn postprocess_sample(&self, y: &BitVector) -> BitVector {
        self.postprocess.mul_vec(y)
    }

    /// Runs the layers on `|0ⁿ⟩` and returns the state in the original basis.
    pub fn simulate(&self, cap: usize) -> Result<State> {
        let mut st = State::zero(self.n, cap)?;
        for layer in &self.layers {
            match layer {
                Layer::Cnot(gates) => {
                    for &(c, t) in gates {
                        st.apply_cnot(c, t);
                    }
                }
                Layer::Rot { qubits, theta } => {
                    for &q in qubits {
                        st.apply_x_rotation(1 << q, *theta);
                    }
                }
            }
        }
        // ψ(x) = ψ'(Qᵀ x) and Qᵀ is the inverse of the post-processing map.
        let qt = inverse(&self.postprocess).expect("post-processing map is invertible");
        let amps = (0..1usize << self.n)
            .map(|x| {
                let y = qt.mul_vec(&BitVector::from_u64(self.n, x as u64)).to_u64();
                st.amplitudes()[y as usize]
            })
            .collect();
        Ok(State::from_amplitudes(self.n, amps))
    }

    /// One line per layer: `CNOT c>t …` or `ROT θ q …`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            match layer {
                Layer::Cnot(gates) => {
                    out.push_str("CNOT");
                    for (c, t) in gates {
                        let _ = write!(out, " {c}>{t}");
                    }
                }
                Layer::Rot { qubits, theta } => {
                    let _ = write!(out, "ROT {theta}");
                    for q in qubits {
                        let _ = write!(out, " {q}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// CNOT list (time order) realizing `|x⟩ ↦ |N x⟩`.
fn synthesize(n_mat: &BitMatrix) -> Vec<(usize, usize)> {
    let n = n_mat.rows();
    let mut m = n_mat.clone();
    let mut ops = Vec::new();
    for j in 0..n {
        if !m.get(j, j) {
            let i = (j + 1..n).find(|&i| m.get(i, j)).expect("matrix must be invertible");
            m.xor_row_into(i, j);
            ops.push((i, j));
        }
        for i in 0..n {
            if i != j && m.get(i, j) {
                m.xor_row_into(j, i);
                ops.push((j, i));
            }
        }
    }
    // Row op "row t ^= row c" is the CNOT c→t; N is the product of the ops
    // in recorded order, so the circuit applies them last-first.
    ops.reverse();
    ops
}

/// Greedy first-fit partition of rows into linearly independent groups.
fn independent_rounds(rows: Vec<BitVector>, n: usize) -> Vec<Vec<BitVector>> {
    let mut rounds = Vec::new();
    let mut pending: Vec<BitVector> = rows.into_iter().filter(|r| !r.is_zero()).collect();
    while !pending.is_empty() {
        let mut basis = IncrementalBasis::new(n);
        let mut taken = Vec::new();
        let mut left = Vec::new();
        for r in pending {
            if basis.insert(&r) {
                taken.push(r);
            } else {
                left.push(r);
            }
        }
        rounds.push(taken);
        pending = left;
    }
    rounds
}

/// Invertible matrix whose first columns are `cols`, completed by unit vectors.
fn complete_basis(n: usize, cols: &[BitVector]) -> BitMatrix {
    let mut basis = IncrementalBasis::new(n);
    let mut all: Vec<BitVector> = cols.to_vec();
    for c in cols {
        basis.insert(c);
    }
    for j in 0..n {
        let e = BitVector::unit(n, j);
        if basis.insert(&e) {
            all.push(e);
        }
    }
    BitMatrix::from_columns(n, &all)
}

/// Compiles `U_{H,θ}` for full-column-rank `H`.
///
/// `H` is first brought to `(Iₙ; H̄)` by picking `n` independent rows (row
/// permutation) and multiplying by the inverse of that block (`Q`). The rows
/// of `H̄` are split greedily into independent rounds; round `ℓ` with rows
/// `p₁…p_k` becomes `V_M e^{iθ X₁}⋯e^{iθ X_k} V_M†` where `M eⱼ = pⱼ`, and
/// adjacent basis changes are merged into a single CNOT layer.
pub fn compile(h: &BitMatrix, theta: f64) -> Result<CompiledCircuit> {
    let n = h.cols();
    if rank(h) != n {
        return Err(Error::InvalidParameter(format!(
            "compile needs full column rank (rank {} < {n})",
            rank(h)
        )));
    }
    let mut basis = IncrementalBasis::new(n);
    let (mut sel, mut rest) = (Vec::new(), Vec::new());
    for i in 0..h.rows() {
        if sel.len() < n && basis.insert(&h.row(i)) {
            sel.push(i);
        } else {
            rest.push(i);
        }
    }
    let a = h.select_rows(&sel);
    let q = inverse(&a).expect("selected rows are independent");
    let hbar = h.select_rows(&rest).mul(&q);

    let mut layers = vec![Layer::Rot {
        qubits: (0..n).collect(),
        theta,
    }];
    let rounds = independent_rounds(hbar.row_iter().collect(), n);
    let mut prev = BitMatrix::identity(n);
    for round in &rounds {
        let m = complete_basis(n, round);
        let m_inv = inverse(&m).expect("completed basis is invertible");
        let gates = synthesize(&m_inv.mul(&prev));
        if !gates.is_empty() {
            layers.push(Layer::Cnot(gates));
        }
        layers.push(Layer::Rot {
            qubits: (0..round.len()).collect(),
            theta,
        });
        prev = m;
    }
    let gates = synthesize(&prev);
    if !gates.is_empty() {
        layers.push(Layer::Cnot(gates));
    }
    Ok(CompiledCircuit {
        n,
        layers,
        postprocess: a.transpose(),
        rounds: rounds.len(),
    })
}

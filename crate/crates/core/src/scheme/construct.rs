use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::params::{check_params, sample_params, sampler_feasible, SchemeKind, SchemeMeta};
use crate::codes::{qrc_generator, sample_affine, sample_doubly_even, sample_doubly_even_inner, sample_f};
use crate::error::{Error, Result};
use crate::f2linalg::{
    gram, inverse, kernel_vectors, symmetric_standard_form, random_invertible, random_permutation, rank, solve, BitMatrix, BitVector,
    IncrementalBasis,
};
use crate::stabilizer::{correlation, Correlation};

/// Attempts allowed for every postselection loop.
pub const RETRY_BUDGET: usize = 64;

/// Row permutation and column change applied by [`obfuscate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObfuscationTrace {
    /// Output row `i` is input row `row_perm[i]`.
    pub row_perm: Vec<usize>,
    pub q: BitMatrix,
}

/// A public matrix `H` with its secret `s`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub h: BitMatrix,
    pub s: BitVector,
    pub meta: SchemeMeta,
    pub correlation: Correlation,
    /// Present only for freshly built instances; never serialized.
    pub trace: Option<ObfuscationTrace>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn m(&self) -> usize {
        self.h.rows()
    }

    /// Rows with `p·s = 1`.
    pub fn h_s(&self) -> BitMatrix {
        self.h.select_rows_by(&self.h.mul_vec(&self.s))
    }

    /// Rows with `p·s = 0`.
    pub fn r_s(&self) -> BitMatrix {
        let mut mask = self.h.mul_vec(&self.s);
        for i in 0..mask.len() {
            mask.flip(i);
        }
        self.h.select_rows_by(&mask)
    }

    pub fn without_trace(mut self) -> Self {
        self.trace = None;
        self
    }
}

/// `H ← P H Q`, `s ← Q⁻¹ s` for a uniform row permutation `P` and a random
/// invertible `Q`.
pub fn obfuscate<R: Rng + ?Sized>(
    h: &BitMatrix,
    s: &BitVector,
    rng: &mut R,
) -> (BitMatrix, BitVector, ObfuscationTrace) {
    let row_perm = random_permutation(h.rows(), rng);
    let q = random_invertible(h.cols(), rng);
    let q_inv = inverse(&q).expect("random_invertible returns an invertible matrix");
    let h2 = h.select_rows(&row_perm).mul(&q);
    let s2 = q_inv.mul_vec(s);
    (h2, s2, ObfuscationTrace { row_perm, q })
}

fn random_orthogonal<R: Rng + ?Sized>(s: &BitVector, rng: &mut R) -> BitVector {
    let mut v = BitVector::random(s.len(), rng);
    if v.dot(s) {
        v.flip(s.first_one().expect("secret is nonzero"));
    }
    v
}

/// Uniform solution of `H_s s = 1`.
fn sample_secret<R: Rng + ?Sized>(h_s: &BitMatrix, rng: &mut R) -> Result<BitVector> {
    let p = solve(h_s, &BitVector::ones(h_s.rows())).ok_or(Error::NoSecret)?;
    Ok(sample_affine(&p, &kernel_vectors(h_s), rng))
}

/// `m2` rows orthogonal to `s`: the first ones raise the rank of `H_s` to
/// `n`, the rest are uniform on `s^⊥`.
fn sample_redundant_rows<R: Rng + ?Sized>(
    h_s: &BitMatrix,
    s: &BitVector,
    m2: usize,
    rng: &mut R,
) -> Option<BitMatrix> {
    let n = h_s.cols();
    let mut basis = IncrementalBasis::new(n);
    for r in h_s.row_iter() {
        basis.insert(&r);
    }
    let need = n - basis.dim();
    if need > m2 {
        return None;
    }
    let mut rows = Vec::with_capacity(m2);
    let mut attempts = 0;
    while rows.len() < need {
        attempts += 1;
        if attempts > 4 * need + RETRY_BUDGET {
            return None;
        }
        let v = random_orthogonal(s, rng);
        if basis.insert(&v) {
            rows.push(v);
        }
    }
    while rows.len() < m2 {
        rows.push(random_orthogonal(s, rng));
    }
    Some(BitMatrix::from_rows(n, &rows))
}

fn finish(
    h0: BitMatrix,
    s0: BitVector,
    meta: SchemeMeta,
    rng: &mut (impl Rng + ?Sized),
) -> Result<Instance> {
    debug_assert_eq!(rank(&h0), h0.cols());
    let (h, s, trace) = obfuscate(&h0, &s0, rng);
    let corr = correlation(&h, &s)?;
    if corr.is_zero() || corr.g() as usize != meta.g {
        return Err(Error::ConstructionFailed {
            attempts: 1,
            reason: format!("built correlation {corr} does not match g = {}", meta.g),
        });
    }
    Ok(Instance {
        h,
        s,
        meta,
        correlation: corr,
        trace: Some(trace),
    })
}

/// Knobs for [`stabilizer_construct_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Postselect on `rank(B, C) = n − g`, which leaves the Radical Attack
    /// without usable kernel vectors. Requires `m2 ≥ n − g`.
    pub radical_guard: bool,
}

fn exact_doubly_even<R: Rng + ?Sized>(m1: usize, d: usize, with_ones: bool, rng: &mut R) -> Result<BitMatrix> {
    for _ in 0..RETRY_BUDGET {
        let dm = sample_doubly_even_inner(m1, d, with_ones, rng)?;
        if dm.cols() == d {
            return Ok(dm);
        }
    }
    Err(Error::ConstructionFailed {
        attempts: RETRY_BUDGET,
        reason: format!("could not sample a {m1}x{d} doubly-even generator"),
    })
}

/// Builds an instance for fixed `(m1, d)`.
///
/// `H_s = (F, D, 0)` in the unobfuscated basis, `R_s` completes the rank and
/// pads with rows orthogonal to `s`, then rows are shuffled and columns mixed.
pub fn stabilizer_construct_with<R: Rng + ?Sized>(
    meta: &SchemeMeta,
    opts: BuildOptions,
    rng: &mut R,
) -> Result<Instance> {
    let report = check_params(meta);
    if !report.structural_ok() {
        return Err(Error::Infeasible {
            constraint: report.failures().join(", "),
        });
    }
    if opts.radical_guard && !report.radical_guard_ok() {
        return Err(Error::Infeasible {
            constraint: "m2>=n-g".into(),
        });
    }
    let SchemeMeta { n, m, g, m1, d, .. } = *meta;
    if !sampler_feasible(g, m1, d) {
        return Err(Error::InvalidParameter(format!(
            "g = 0 needs d >= 1 and 4 | m1 (m1 = {m1}, d = {d})"
        )));
    }
    let r = g + d;
    for _ in 0..RETRY_BUDGET {
        let dm = exact_doubly_even(m1, d, g == 0, rng)?;
        let f = sample_f(m1, g, &dm, rng)?;
        let h_s = f.hstack(&dm).hstack(&BitMatrix::zeros(m1, n - r));
        let s0 = sample_secret(&h_s, rng)?;
        let Some(r_s) = sample_redundant_rows(&h_s, &s0, m - m1, rng) else {
            continue;
        };
        if opts.radical_guard && rank(&r_s.col_range(g, n)) != n - g {
            continue;
        }
        let h0 = h_s.vstack(&r_s);
        return finish(h0, s0, meta.clone(), rng);
    }
    Err(Error::ConstructionFailed {
        attempts: RETRY_BUDGET,
        reason: "rank completion or postselection kept failing".into(),
    })
}

/// Samples `(m1, d)` and builds an instance of the stabilizer scheme.
pub fn stabilizer_construct<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    g: usize,
    lambda: usize,
    rng: &mut R,
) -> Result<Instance> {
    let meta = sample_params(n, m, g, lambda, rng)?;
    stabilizer_construct_with(&meta, BuildOptions::default(), rng)
}

/// Appends `n2` zero columns, extends `s` by random bits and mixes columns.
/// The code spanned by the columns is unchanged up to the zero padding.
pub fn add_column_redundancy<R: Rng + ?Sized>(
    h_s: &BitMatrix,
    s: &BitVector,
    n2: usize,
    rng: &mut R,
) -> (BitMatrix, BitVector) {
    assert_eq!(h_s.mul_vec(s), BitVector::ones(h_s.rows()), "H_s s must be all ones");
    let padded = h_s.hstack(&BitMatrix::zeros(h_s.rows(), n2));
    let s_ext = s.concat(&BitVector::random(n2, rng));
    if padded.cols() == 0 {
        return (padded, s_ext);
    }
    let q = random_invertible(padded.cols(), rng);
    let q_inv = inverse(&q).expect("invertible");
    (padded.mul(&q), q_inv.mul_vec(&s_ext))
}

/// Quadratic-residue instance: `H_s` is the `q`-QRC generator with the
/// all-ones column, zero-padded to `n` columns, with the obfuscation supplying
/// the column mixing. For `n = (q+1)/2` the all-ones column is dropped.
pub fn qrc_construct<R: Rng + ?Sized>(
    q: usize,
    n: usize,
    m: usize,
    lambda: usize,
    rng: &mut R,
) -> Result<Instance> {
    let gen = qrc_generator(q)?;
    let r = q.div_ceil(2);
    if n < r || m < q + (n - r) {
        return Err(Error::InvalidParameter(format!(
            "QRC instance needs n >= {r} and m >= q + n - {r} (n = {n}, m = {m})"
        )));
    }
    let (h_s, s0) = if n == r {
        let base = gen.col_range(1, gen.cols());
        let s0 = solve(&base, &BitVector::ones(q)).ok_or(Error::NoSecret)?;
        (base, s0)
    } else {
        let pad = n - gen.cols();
        let h_s = gen.hstack(&BitMatrix::zeros(q, pad));
        let s0 = BitVector::unit(gen.cols(), 0).concat(&BitVector::random(pad, rng));
        (h_s, s0)
    };
    let meta = SchemeMeta {
        n,
        m,
        g: 1,
        m1: q,
        d: r - 1,
        scheme: SchemeKind::Qrc { q },
        lambda,
        seed: None,
    };
    for _ in 0..RETRY_BUDGET {
        if let Some(r_s) = sample_redundant_rows(&h_s, &s0, m - q, rng) {
            return finish(h_s.vstack(&r_s), s0, meta, rng);
        }
    }
    Err(Error::ConstructionFailed {
        attempts: RETRY_BUDGET,
        reason: "rank completion kept failing".into(),
    })
}

/// Parameters of the sparse concatenated construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardenedParams {
    pub n: usize,
    pub m: usize,
    pub g: usize,
    pub m1: usize,
    pub d: usize,
    /// Rows per diagonal block of `E_c`.
    pub m0: usize,
    /// Columns per diagonal block of `E_c`.
    pub d0: usize,
    /// Nonzeros per row of `(A, B)`.
    pub t: usize,
    pub lambda: usize,
}

/// Instance whose `D = E_c K_in` is block sparse and whose `(A, B)` block is
/// `t`-sparse per row, postselected on `rank(B, C) = n − g`.
///
/// `K_in` picks `d` distinct columns of `E_c`, the sparsest full-column-rank
/// choice; any other full-rank `K_in` spans a subcode of the same blocks.
pub fn hardened_construct<R: Rng + ?Sized>(p: &HardenedParams, rng: &mut R) -> Result<Instance> {
    let HardenedParams {
        n,
        m,
        g,
        m1,
        d,
        m0,
        d0,
        t,
        lambda,
    } = *p;
    if m0 == 0 || m1 % m0 != 0 {
        return Err(Error::InvalidParameter(format!("m0 = {m0} must divide m1 = {m1}")));
    }
    let k = m1 / m0;
    if d0 * k < d || 2 * d0 > m0 {
        return Err(Error::InvalidParameter(format!(
            "need d0 * (m1/m0) >= d and d0 <= m0/2 (d0 = {d0}, m0 = {m0}, d = {d})"
        )));
    }
    let meta = SchemeMeta {
        n,
        m,
        g,
        m1,
        d,
        scheme: SchemeKind::Hardened { m0, d0, t },
        lambda,
        seed: None,
    };
    let report = check_params(&meta);
    if !report.structural_ok() || !report.radical_guard_ok() {
        return Err(Error::Infeasible {
            constraint: report.failures().join(", "),
        });
    }
    if g == 0 || t == 0 || t > g + d {
        return Err(Error::InvalidParameter(format!(
            "hardened construction needs g >= 1 and 1 <= t <= g + d (g = {g}, t = {t})"
        )));
    }
    let r = g + d;
    let m2 = m - m1;
    for _ in 0..RETRY_BUDGET {
        let mut ec = BitMatrix::zeros(0, 0);
        for _ in 0..k {
            let block = loop_exact(m0, d0, rng)?;
            ec = ec.block_diag(&block);
        }
        let picked: Vec<usize> = sample_indices(rng, d0 * k, d).into_vec();
        let cols: Vec<BitVector> = picked.iter().map(|&j| ec.column(j)).collect();
        let dm = BitMatrix::from_columns(m1, &cols);
        let Ok(f) = sample_f(m1, g, &dm, rng) else {
            continue;
        };
        let h_s = f.hstack(&dm).hstack(&BitMatrix::zeros(m1, n - r));
        let s0 = sample_secret(&h_s, rng)?;

        let mut r_s = BitMatrix::zeros(m2, n);
        for i in 0..m2 {
            for j in sample_indices(rng, r, t) {
                r_s.set(i, j, true);
            }
            for j in r..n {
                r_s.set(i, j, rng.random());
            }
        }
        let fix = (0..g)
            .find(|&j| s0.get(j))
            .or_else(|| s0.first_one())
            .expect("secret is nonzero");
        for i in 0..m2 {
            if r_s.row(i).dot(&s0) {
                r_s.flip(i, fix);
            }
        }
        if rank(&r_s.col_range(g, n)) != n - g {
            continue;
        }
        let h0 = h_s.vstack(&r_s);
        if rank(&h0) != n {
            continue;
        }
        return finish(h0, s0, meta, rng);
    }
    Err(Error::ConstructionFailed {
        attempts: RETRY_BUDGET,
        reason: "postselection on rank(B, C) = n - g kept failing".into(),
    })
}

fn loop_exact<R: Rng + ?Sized>(m0: usize, d0: usize, rng: &mut R) -> Result<BitMatrix> {
    for _ in 0..RETRY_BUDGET {
        let b = sample_doubly_even(m0, d0, rng)?;
        if b.cols() == d0 {
            return Ok(b);
        }
    }
    Err(Error::ConstructionFailed {
        attempts: RETRY_BUDGET,
        reason: format!("could not sample a {m0}x{d0} doubly-even block"),
    })
}

/// Pre-obfuscation blocks
/// ```text
/// ( F  D  0 )   m1 rows
/// ( A  B  C )   m2 rows
/// ```
/// with column widths `g`, `d`, `n − g − d`.
#[derive(Clone, Debug)]
pub struct UnobfuscatedLayout {
    pub h0: BitMatrix,
    pub s0: BitVector,
    pub m1: usize,
    pub g: usize,
    pub d: usize,
}

impl UnobfuscatedLayout {
    pub fn h_s(&self) -> BitMatrix {
        self.h0.row_range(0, self.m1)
    }
    pub fn r_s(&self) -> BitMatrix {
        self.h0.row_range(self.m1, self.h0.rows())
    }
    pub fn f(&self) -> BitMatrix {
        self.h_s().col_range(0, self.g)
    }
    pub fn d(&self) -> BitMatrix {
        self.h_s().col_range(self.g, self.g + self.d)
    }
    pub fn zero_block(&self) -> BitMatrix {
        self.h_s().col_range(self.g + self.d, self.h0.cols())
    }
    pub fn a(&self) -> BitMatrix {
        self.r_s().col_range(0, self.g)
    }
    pub fn b(&self) -> BitMatrix {
        self.r_s().col_range(self.g, self.g + self.d)
    }
    pub fn c(&self) -> BitMatrix {
        self.r_s().col_range(self.g + self.d, self.h0.cols())
    }
    /// Columns of `H` belonging to the first `g + d` coordinates.
    pub fn h1(&self) -> BitMatrix {
        self.h0.col_range(0, self.g + self.d)
    }
    pub fn h2(&self) -> BitMatrix {
        self.h0.col_range(self.g + self.d, self.h0.cols())
    }
}

/// Undoes the obfuscation using the retained trace.
///
/// For QRC instances the `F` block is the all-ones column and the `D` block
/// holds the quadratic-residue rotations (one more column than `dim D_s`).
pub fn unobfuscated_layout(instance: &Instance) -> Result<UnobfuscatedLayout> {
    let trace = instance.trace.as_ref().ok_or(Error::TraceUnavailable)?;
    let q_inv = inverse(&trace.q).expect("trace holds an invertible matrix");
    let mut inv_perm = vec![0; trace.row_perm.len()];
    for (i, &j) in trace.row_perm.iter().enumerate() {
        inv_perm[j] = i;
    }
    let h0 = instance.h.select_rows(&inv_perm).mul(&q_inv);
    let s0 = trace.q.mul_vec(&instance.s);
    let meta = &instance.meta;
    let d = match meta.scheme {
        SchemeKind::Qrc { q } if meta.n > q.div_ceil(2) => q.div_ceil(2),
        SchemeKind::Qrc { .. } => (meta.n).saturating_sub(meta.g),
        _ => meta.d,
    };
    Ok(UnobfuscatedLayout {
        h0,
        s0,
        m1: meta.m1,
        g: meta.g,
        d,
    })
}

/// Standard-form check on the pre-obfuscation blocks: the zero block is
/// zero, `DᵀD = 0`, `DᵀF = 0`, `rank(FᵀF) = g`, `m1 ≡ g mod 2`, and
/// `gram(H_s)` is congruent to `diag(1, J, …, 0)` for odd `g` or to
/// `diag(I₂, J, …, 0)` / `diag(J, …, 0)` for even `g`.
pub fn standard_form_holds(layout: &UnobfuscatedLayout) -> bool {
    let (f, d) = (layout.f(), layout.d());
    let (ft, dt) = (f.transpose(), d.transpose());
    let blocks_ok = layout.zero_block().is_zero()
        && dt.mul(&d).is_zero()
        && dt.mul(&f).is_zero()
        && rank(&ft.mul(&f)) == layout.g;
    blocks_ok && gram_standard_form_holds(&layout.h_s(), layout.g)
}

/// Basis-free half of [`standard_form_holds`]; works on obfuscated `H_s`.
pub fn gram_standard_form_holds(h_s: &BitMatrix, g: usize) -> bool {
    let gm = gram(h_s);
    let form = symmetric_standard_form(&gm);
    let congruent = form.q.transpose().mul(&gm).mul(&form.q) == form.canonical();
    let shape_ok = if g % 2 == 1 { form.ones == 1 } else { form.ones != 1 };
    congruent && form.rank() == g && shape_ok && h_s.rows() % 2 == g % 2
}

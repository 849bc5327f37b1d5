use num_complex::Complex64;

use crate::f2linalg::BitMatrix;

/// `Q(x) = Σ wᵢ xᵢ + 2 Σ_{i<j} bᵢⱼ xᵢ xⱼ (mod 4)` on `x ∈ F₂ᵗ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFormZ4 {
    /// Linear coefficients, each reduced mod 4.
    pub linear: Vec<u8>,
    /// Symmetric `t × t` coupling; the diagonal is ignored.
    pub coupling: BitMatrix,
}

impl QuadFormZ4 {
    pub fn new(linear: Vec<u8>, coupling: BitMatrix) -> Self {
        assert_eq!(coupling.rows(), linear.len());
        assert_eq!(coupling.cols(), linear.len());
        debug_assert!(coupling.is_symmetric(), "coupling must be symmetric");
        let linear = linear.into_iter().map(|w| w % 4).collect();
        Self { linear, coupling }
    }

    pub fn vars(&self) -> usize {
        self.linear.len()
    }

    /// `Q(x)` for the assignment packed into the low bits of `x`.
    pub fn eval(&self, x: u64) -> u8 {
        let t = self.vars();
        let mut q = 0u32;
        for i in 0..t {
            if x >> i & 1 == 0 {
                continue;
            }
            q += u32::from(self.linear[i]);
            for j in i + 1..t {
                if x >> j & 1 == 1 && self.coupling.get(i, j) {
                    q += 2;
                }
            }
        }
        (q % 4) as u8
    }
}

/// Exact value `2^{k/2} · ω^p` (with `ω = e^{iπ/4}`) or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussSum {
    Zero,
    Value { sqrt2_power: u32, octant: u8 },
}

impl GaussSum {
    pub fn to_complex(self) -> Complex64 {
        match self {
            GaussSum::Zero => Complex64::new(0.0, 0.0),
            GaussSum::Value { sqrt2_power, octant } => {
                let mag = 2f64.powf(f64::from(sqrt2_power) / 2.0);
                Complex64::from_polar(mag, f64::from(octant) * std::f64::consts::FRAC_PI_4)
            }
        }
    }

    /// The same value as an exact Gaussian integer `(re, im)`.
    ///
    /// Any character sum over `F₂ᵗ` is a Gaussian integer, so `k` and `p`
    /// always share parity here.
    pub fn to_gaussian_integer(self) -> (i64, i64) {
        let GaussSum::Value { sqrt2_power: k, octant: p } = self else {
            return (0, 0);
        };
        assert_eq!(k % 2, u32::from(p % 2), "parity of √2 power and octant differ");
        let rot = |re: i64, im: i64, quarter: u8| -> (i64, i64) {
            match quarter % 4 {
                0 => (re, im),
                1 => (-im, re),
                2 => (-re, -im),
                _ => (im, -re),
            }
        };
        if p % 2 == 0 {
            let mag = 1i64 << (k / 2);
            rot(mag, 0, p / 2)
        } else {
            let mag = 1i64 << ((k - 1) / 2);
            rot(mag, mag, (p - 1) / 2)
        }
    }
}

/// Evaluates `Σ_x i^{Q(x)}` exactly by eliminating one variable at a time.
///
/// With `L(x') = Σⱼ b₁ⱼ xⱼ` the terms in `x₁` sum to `1 + i^{w₁}(−1)^{L}`:
/// * `w₁` odd: this is `√2 ω^{2−w₁} i^{−w₁ L}`, and `i^{∓L}` is folded back into
///   the form using `L ≡ Σ xⱼ − 2 Σ_{j<k} xⱼxₖ (mod 4)`.
/// * `w₁` even: `L` must equal `w₁/2`; one variable of `L` is substituted out,
///   or the sum is `2` / `0` when `L` is empty.
pub fn gauss_sum(form: &QuadFormZ4) -> GaussSum {
    let t = form.vars();
    let mut w: Vec<u8> = form.linear.clone();
    let mut b = form.coupling.clone();
    for i in 0..t {
        b.set(i, i, false);
    }
    let mut active = vec![true; t];
    let mut k: u32 = 0;
    let mut p: u32 = 0;

    let toggle = |b: &mut BitMatrix, i: usize, j: usize| {
        b.flip(i, j);
        b.flip(j, i);
    };

    for i in 0..t {
        if !active[i] {
            continue;
        }
        active[i] = false;
        let nbrs: Vec<usize> = (0..t).filter(|&j| active[j] && b.get(i, j)).collect();
        let wi = w[i];
        if wi % 2 == 1 {
            k += 1;
            p += if wi == 1 { 1 } else { 7 };
            for &j in &nbrs {
                w[j] = (w[j] + 4 - wi) % 4;
            }
            for (a, &j) in nbrs.iter().enumerate() {
                for &l in &nbrs[a + 1..] {
                    toggle(&mut b, j, l);
                }
            }
            continue;
        }
        let c = wi / 2;
        let Some((&j0, rest)) = nbrs.split_first() else {
            if wi == 0 {
                k += 2;
                continue;
            }
            return GaussSum::Zero;
        };
        // Constraint x_{j0} = c ⊕ Σ_{l ∈ rest} x_l.
        k += 2;
        active[j0] = false;
        let wj = w[j0];
        p += 2 * u32::from(wj) * u32::from(c);
        let step = if c == 0 { wj } else { (4 - wj) % 4 };
        for &l in rest {
            w[l] = (w[l] + step) % 4;
        }
        if wj % 2 == 1 {
            for (a, &l) in rest.iter().enumerate() {
                for &l2 in &rest[a + 1..] {
                    toggle(&mut b, l, l2);
                }
            }
        }
        let coupled: Vec<usize> = (0..t).filter(|&q| active[q] && b.get(j0, q)).collect();
        for &q in &coupled {
            w[q] = (w[q] + 2 * c) % 4;
            for &l in rest {
                if l == q {
                    w[q] = (w[q] + 2) % 4;
                } else {
                    toggle(&mut b, l, q);
                }
            }
        }
    }
    GaussSum::Value {
        sqrt2_power: k,
        octant: (p % 8) as u8,
    }
}

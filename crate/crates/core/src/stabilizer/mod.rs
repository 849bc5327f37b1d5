//! Exact classical evaluation of the IQP stabilizer tableau and the signed
//! correlation `⟨Z_s⟩` at `θ = π/8`.

mod gauss;

use std::fmt;

pub use gauss::{gauss_sum, GaussSum, QuadFormZ4};

use crate::codes::{classify_self_dual_intersection, column_space_contains, weight_mod4, DualClass};
use crate::error::{Error, Result};
use crate::f2linalg::{gram, kernel_vectors, rank, BitMatrix, BitVector};

/// Stabilizer tableau of `e^{iπ Ham(H)/4}|0ⁿ⟩`.
///
/// Generator `j` is `(−1)^{r_j} i^{G_jj} Π_k X_k^{G_jk} Z_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabTableau {
    pub x_part: BitMatrix,
    pub z_part: BitMatrix,
    pub phases: BitVector,
}

pub fn iqp_tableau(h: &BitMatrix) -> StabTableau {
    let n = h.cols();
    let mut phases = BitVector::zeros(n);
    for (j, c) in h.columns().iter().enumerate() {
        phases.set(j, weight_mod4(c) >= 2);
    }
    StabTableau {
        x_part: gram(h),
        z_part: BitMatrix::identity(n),
        phases,
    }
}

/// `⟨Z_s⟩` held symbolically as `sign · 2^{−g/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Correlation {
    sign: i8,
    g: u32,
}

impl Correlation {
    pub const ZERO: Correlation = Correlation { sign: 0, g: 0 };
    pub const ONE: Correlation = Correlation { sign: 1, g: 0 };

    /// `sign` must be `±1`.
    pub fn new(sign: i8, g: u32) -> Self {
        assert!(sign == 1 || sign == -1, "nonzero correlation needs sign ±1");
        Self { sign, g }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Exponent `g`; meaningless (reported as 0) for a zero correlation.
    pub fn g(self) -> u32 {
        self.g
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign) * 2f64.powf(-f64::from(self.g) / 2.0)
    }

    /// Probability that an honest sample is orthogonal to the secret.
    pub fn bias(self) -> f64 {
        (self.value() + 1.0) / 2.0
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}2^(-{}/2)", if s > 0 { '+' } else { '-' }, self.g),
        }
    }
}

/// Rows `p` of `H` with `p·s = 1`.
pub fn h_s_rows(h: &BitMatrix, s: &BitVector) -> BitMatrix {
    h.select_rows_by(&h.mul_vec(s))
}

/// Signed correlation of the amplitude `⟨0|U_{H_s,π/4}|0⟩` computed as
/// `2^{−m₁/2} Σ_{a ∈ C_s^⊥} i^{|a|}` through [`gauss_sum`].
pub fn correlation_from_dual(h_s: &BitMatrix) -> Result<Correlation> {
    let m1 = h_s.rows();
    if !column_space_contains(h_s, &BitVector::ones(m1)) {
        return Err(Error::NoSecret);
    }
    let dual = kernel_vectors(&h_s.transpose());
    let t = dual.len();
    let mut coupling = BitMatrix::zeros(t, t);
    for i in 0..t {
        for j in i + 1..t {
            if dual[i].dot(&dual[j]) {
                coupling.set(i, j, true);
                coupling.set(j, i, true);
            }
        }
    }
    let form = QuadFormZ4::new(dual.iter().map(weight_mod4).collect(), coupling);
    match gauss_sum(&form) {
        GaussSum::Zero => Ok(Correlation::ZERO),
        GaussSum::Value { sqrt2_power, octant } => {
            let sign = match octant {
                0 => 1,
                4 => -1,
                o => unreachable!("correlation must be real, got octant {o}"),
            };
            let g = m1 as u32 - sqrt2_power;
            Ok(Correlation::new(sign, g))
        }
    }
}

/// `⟨Z_s⟩` of the IQP circuit `H` at `θ = π/8`.
///
/// Zero versus nonzero and the exponent come from classifying `D_s` and the
/// rank of `gram(H_s)`; only the sign is taken from the Gauss sum.
pub fn correlation(h: &BitMatrix, s: &BitVector) -> Result<Correlation> {
    assert_eq!(s.len(), h.cols(), "correlation: secret length mismatch");
    if s.is_zero() {
        return Err(Error::InvalidParameter("secret must be nonzero".into()));
    }
    let h_s = h_s_rows(h, s);
    if h_s.rows() == 0 {
        return Ok(Correlation::ONE);
    }
    let profile = classify_self_dual_intersection(&h_s)?;
    if profile.dual_class == DualClass::UnbiasedEven {
        return Ok(Correlation::ZERO);
    }
    let signed = correlation_from_dual(&h_s)?;
    assert!(
        !signed.is_zero() && signed.g() as usize == profile.gram_rank,
        "Gauss sum disagrees with the Gram-rank classification"
    );
    Ok(signed)
}

/// Minimum number of differing generators between the stabilizer groups of
/// `U_{H_s}|0⟩` and `|0⟩`; equals `rank(gram(H_s))`.
pub fn min_generator_distance(h_s: &BitMatrix) -> usize {
    rank(&gram(h_s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::qrc_generator;

    #[test]
    fn tableau_of_qrc7() {
        let t = iqp_tableau(&qrc_generator(7).unwrap());
        assert!(t.x_part.row_iter().all(|r| r.weight() == 5));
        assert_eq!(t.phases, BitVector::ones(5));
        assert_eq!(t.z_part, BitMatrix::identity(5));
    }

    #[test]
    fn tableau_of_zero_matrix() {
        let t = iqp_tableau(&BitMatrix::zeros(4, 3));
        assert!(t.x_part.is_zero());
        assert!(t.phases.is_zero());
    }

    #[test]
    fn tableau_small_example() {
        let t = iqp_tableau(&BitMatrix::from_strs(&["110", "010", "100"]));
        assert!(!t.x_part.get(0, 0) && !t.x_part.get(1, 1) && !t.x_part.get(2, 2));
        assert_eq!(t.phases.to_bit_string(), "110");
    }

    #[test]
    fn qrc7_correlation_is_plus_inverse_sqrt2() {
        let h = qrc_generator(7).unwrap();
        let c = correlation(&h, &BitVector::unit(5, 0)).unwrap();
        assert_eq!(c, Correlation::new(1, 1));
        assert_eq!(correlation_from_dual(&h).unwrap(), Correlation::new(1, 1));
        assert_eq!(min_generator_distance(&h), 1);
    }

    #[test]
    fn empty_h_s_gives_one() {
        let h = BitMatrix::from_strs(&["011", "110"]);
        let s = BitVector::from_bits(&[1, 1, 1]);
        assert_eq!(correlation(&h, &s).unwrap(), Correlation::ONE);
    }

    #[test]
    fn repeated_row_vanishes() {
        let h = BitMatrix::from_strs(&["1", "1"]);
        let s = BitVector::ones(1);
        assert!(correlation(&h, &s).unwrap().is_zero());
        assert!(correlation_from_dual(&h).unwrap().is_zero());
    }

    #[test]
    fn dual_examples() {
        let c = correlation_from_dual(&BitMatrix::from_strs(&["1"])).unwrap();
        assert_eq!(c, Correlation::new(1, 1));
        assert!((c.value() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zero_secret_rejected() {
        let h = BitMatrix::identity(2);
        assert!(matches!(correlation(&h, &BitVector::zeros(2)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gram_free_h_s_has_distance_zero() {
        assert_eq!(min_generator_distance(&BitMatrix::from_strs(&["11", "11"])), 0);
    }

    #[test]
    fn bias_of_qrc() {
        let b = Correlation::new(1, 1).bias();
        assert_eq!(format!("{b:.3}"), "0.854");
    }
}

//! Dense linear algebra over GF(2) on bit-packed words.

mod bitmatrix;
mod bitvec;
mod congruence;
mod elim;

pub use bitmatrix::BitMatrix;
pub use bitvec::BitVector;
pub use congruence::{symmetric_standard_form, SymmetricForm};
pub use elim::{
    gram, inverse, kernel_basis, kernel_vectors, permutation_matrix, random_invertible,
    random_permutation, rank, rref, solve, IncrementalBasis, Rref,
};

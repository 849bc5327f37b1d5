use std::fmt;

use rand::Rng;

use super::bitvec::{tail_mask, words_for, BitVector, WORD_BITS};

/// Dense row-major matrix over GF(2).
///
/// Each row occupies `ceil(cols / 64)` words with the same LSB-first layout
/// as [`BitVector`]; trailing bits past `cols` are kept zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks row vectors. All rows must share `cols`; an empty slice gives `0 × cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m
    }

    /// Places the given vectors as columns.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "from_columns: column length mismatch");
            for i in c.ones_iter() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Parses rows written as `'0'`/`'1'` strings. Panics on malformed input;
    /// meant for literals in tests and examples.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vecs: Vec<BitVector> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged row literal");
                BitVector::from_bit_str(r).expect("row literal must be 0/1")
            })
            .collect();
        Self::from_rows(cols, &vecs)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mask = tail_mask(cols);
        for i in 0..rows {
            let row = m.row_words_mut(i);
            for w in row.iter_mut() {
                *w = rng.random();
            }
            if let Some(last) = row.last_mut() {
                *last &= mask;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.rows).map(|i| self.row(i))
    }

    pub fn set_row(&mut self, i: usize, v: &BitVector) {
        assert_eq!(v.len(), self.cols, "set_row: length mismatch");
        self.row_words_mut(i).copy_from_slice(v.words());
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().row_iter().collect()
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..dst * s + s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.data[j * t.stride + i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
                }
            }
        }
        t
    }

    /// GF(2) product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let src = other.row_words(k);
                    let dst = &mut out.data[i * out.stride..(i + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    /// `self · v`; entry `i` is the inner product of row `i` with `v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let ones: u32 = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    /// `vᵀ · self`, i.e. the XOR of the rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.rows, v.len(), "vec_mul: dimension mismatch");
        let mut out = BitVector::zeros(self.cols);
        for i in v.ones_iter() {
            for (d, s) in out.words_mut().iter_mut().zip(self.row_words(i)) {
                *d ^= s;
            }
        }
        out
    }

    /// Rows with the given indices, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            out.row_words_mut(k).copy_from_slice(self.row_words(i));
        }
        out
    }

    /// Rows whose bit in `mask` is set, in order.
    pub fn select_rows_by(&self, mask: &BitVector) -> Self {
        assert_eq!(mask.len(), self.rows);
        let idx: Vec<usize> = mask.ones_iter().collect();
        self.select_rows(&idx)
    }

    /// Columns `[start, end)`.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        let mut out = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                if self.get(i, j) {
                    out.set(i, j - start, true);
                }
            }
        }
        out
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    /// Horizontal concatenation `(self, other)`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones_iter() {
                out.set(i, j, true);
            }
            for j in other.row(i).ones_iter() {
                out.set(i, self.cols + j, true);
            }
        }
        out
    }

    /// Vertical concatenation `(self; other)`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        }
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let top = self.hstack(&Self::zeros(self.rows, other.cols));
        let bottom = Self::zeros(other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        self.row_iter().map(|r| r.to_bit_string()).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_by_identity() {
        let a = BitMatrix::from_strs(&["101", "011"]);
        assert_eq!(a.mul(&BitMatrix::identity(3)), a);
        assert_eq!(BitMatrix::identity(2).mul(&a), a);
    }

    #[test]
    fn hand_computed_mul_vec() {
        let a = BitMatrix::from_strs(&["11", "01"]);
        let v = BitVector::from_bits(&[1, 1]);
        assert_eq!(a.mul_vec(&v).to_bit_string(), "01");
    }

    #[test]
    fn transpose_wide() {
        let mut rng = rand::rng();
        let a = BitMatrix::random(70, 130, &mut rng);
        let t = a.transpose();
        assert_eq!(t.rows(), 130);
        for i in 0..70 {
            for j in 0..130 {
                assert_eq!(a.get(i, j), t.get(j, i));
            }
        }
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn stacking() {
        let a = BitMatrix::from_strs(&["10", "01"]);
        let b = BitMatrix::from_strs(&["1"]);
        let d = a.block_diag(&b);
        assert_eq!(d.to_row_strings(), vec!["100", "010", "001"]);
        assert_eq!(a.vstack(&a).rows(), 4);
    }

    #[test]
    fn xor_rows_both_directions() {
        let mut a = BitMatrix::from_strs(&["110", "011"]);
        a.xor_row_into(0, 1);
        assert_eq!(a.row(1).to_bit_string(), "101");
        a.xor_row_into(1, 0);
        assert_eq!(a.row(0).to_bit_string(), "011");
    }
}

//! Bit-packed linear algebra over GF(2).
//!
//! Everything the rest of the crate does with code symbols reduces to row
//! operations on dense bit matrices: rank, reduced row-echelon form, and
//! span membership with explicit witness coefficients. Matrices stay small
//! (a few hundred columns), so the implementation is a plain dense
//! `Vec<u64>`-per-row layout with no blocking tricks.

use std::fmt;

const WORD_BITS: usize = 64;

/// A fixed-length vector over GF(2), packed 64 bits per word.
///
/// Padding bits past `len` are kept at zero by every operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    /// Creates a zero vector of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    /// Creates a vector with a single bit set.
    #[must_use]
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    /// Builds a vector from `0`/`1` characters.
    ///
    /// # Panics
    /// Panics if the string contains anything other than `0` or `1`.
    #[must_use]
    pub fn from_bits(s: &str) -> Self {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => panic!("invalid bit character {c:?}"),
            }
        }
        v
    }

    #[must_use]
    pub const fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub const fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Returns bit `i`.
    ///
    /// # Panics
    /// Panics if `i >= self.len()`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Sets bit `i`.
    ///
    /// # Panics
    /// Panics if `i >= self.len()`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// Flips bit `i`.
    ///
    /// # Panics
    /// Panics if `i >= self.len()`.
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// GF(2) addition: XOR-assigns `other` into `self`.
    ///
    /// # Panics
    /// Panics if lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    ///
    /// # Panics
    /// Panics if lengths differ.
    #[must_use]
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    /// Index of the lowest set bit, if any.
    #[must_use]
    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
///
/// Zero rows and zero columns are legal; a `0 x n` or `n x 0` matrix has
/// rank 0.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    /// Creates a zero matrix.
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: (0..rows).map(|_| BitVec::zeros(cols)).collect(),
            cols,
        }
    }

    /// Creates the identity matrix.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows.
    ///
    /// # Panics
    /// Panics if rows have unequal lengths.
    #[must_use]
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length differs from declared width");
        }
        Self { rows, cols }
    }

    /// Builds a matrix from rows of `0`/`1` characters.
    #[must_use]
    pub fn from_bit_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| BitVec::from_bits(r)).collect(), cols)
    }

    #[must_use]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub const fn num_cols(&self) -> usize {
        self.cols
    }

    /// # Panics
    /// Panics if `r` is out of range.
    #[must_use]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter()
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    /// Appends a row.
    ///
    /// # Panics
    /// Panics if the row length differs from the matrix width.
    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length differs from matrix width");
        self.rows.push(row);
    }

    /// Returns a copy with the given row removed.
    ///
    /// # Panics
    /// Panics if `r` is out of range.
    #[must_use]
    pub fn without_row(&self, r: usize) -> Self {
        assert!(r < self.rows.len(), "row index out of range");
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row.clone())
            .collect();
        Self {
            rows,
            cols: self.cols,
        }
    }

    /// Matrix-vector product `self * v` over GF(2).
    ///
    /// # Panics
    /// Panics if `v.len() != self.num_cols()`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length differs from matrix width"
        );
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            out.set(r, row.dot(v));
        }
        out
    }

    /// Vector-matrix product `c * self` over GF(2): the linear combination
    /// of rows selected by `c`.
    ///
    /// # Panics
    /// Panics if `c.len() != self.num_rows()`.
    #[must_use]
    pub fn combine_rows(&self, c: &BitVec) -> BitVec {
        assert_eq!(
            c.len(),
            self.rows.len(),
            "coefficient length differs from row count"
        );
        let mut out = BitVec::zeros(self.cols);
        for r in c.ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    /// GF(2) rank, computed on a scratch copy; the matrix is not modified.
    #[must_use]
    pub fn rank(&self) -> usize {
        let mut scratch = self.rows.clone();
        forward_eliminate(&mut scratch, self.cols, None).len()
    }

    /// Reduced row-echelon form and its pivot columns.
    ///
    /// Row count and width are preserved; zero rows sink to the bottom.
    #[must_use]
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = forward_eliminate(&mut rows, self.cols, None);
        (
            Self {
                rows,
                cols: self.cols,
            },
            pivots,
        )
    }

    /// If `target` lies in the row span, returns coefficients `c` such that
    /// `c * self == target`, verified by re-multiplication before returning.
    ///
    /// The witness is the canonical one produced by forward elimination with
    /// lowest-index pivots; callers must not rely on which of several valid
    /// witnesses they get.
    pub fn solve_in_span(&self, target: &BitVec) -> Result<Option<BitVec>, crate::Error> {
        if target.len() != self.cols {
            return Err(crate::Error::Shape(format!(
                "target has {} bits, matrix has {} columns",
                target.len(),
                self.cols
            )));
        }
        let n = self.rows.len();
        // Augment each row with its identity tag so elimination tracks the
        // expression of every reduced row in terms of the original ones.
        let width = self.cols + n;
        let mut work: Vec<BitVec> = (0..n)
            .map(|r| {
                let mut w = BitVec::zeros(width);
                for c in self.rows[r].ones() {
                    w.set(c, true);
                }
                w.set(self.cols + r, true);
                w
            })
            .collect();
        let pivots = forward_eliminate(&mut work, self.cols, Some(self.cols));

        let mut residual = target.clone();
        let mut tags = BitVec::zeros(width);
        for (pr, &pc) in pivots.iter().enumerate() {
            if residual.get(pc) {
                for c in work[pr].ones() {
                    if c < self.cols {
                        residual.flip(c);
                    }
                }
                tags.xor_assign(&work[pr]);
            }
        }
        if !residual.is_zero() {
            return Ok(None);
        }
        let mut coeffs = BitVec::zeros(n);
        for c in tags.ones().filter(|&c| c >= self.cols) {
            coeffs.set(c - self.cols, true);
        }
        assert_eq!(
            &self.combine_rows(&coeffs),
            target,
            "solve_in_span produced an invalid witness"
        );
        Ok(Some(coeffs))
    }

    /// True iff `target` lies in the row span. Cheaper than
    /// [`BitMatrix::solve_in_span`] when no witness is needed.
    #[must_use]
    pub fn spans(&self, target: &BitVec) -> bool {
        assert_eq!(target.len(), self.cols, "target length differs from width");
        let mut scratch = self.rows.clone();
        let pivots = forward_eliminate(&mut scratch, self.cols, None);
        let mut residual = target.clone();
        for (pr, &pc) in pivots.iter().enumerate() {
            if residual.get(pc) {
                residual.xor_assign(&scratch[pr]);
            }
        }
        residual.is_zero()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        f.write_str("]")
    }
}

/// In-place Gauss-Jordan elimination scanning columns left to right and
/// picking the first remaining row with a set bit, so the result is the
/// reduced row-echelon form. Returns pivot columns; pivot row `i` ends up at
/// index `i`. `stop_col` limits pivot search to a left block (used for
/// augmented layouts).
fn forward_eliminate(rows: &mut [BitVec], cols: usize, stop_col: Option<usize>) -> Vec<usize> {
    let limit = stop_col.unwrap_or(cols);
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..limit {
        let Some(pivot_row) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, pivot_row);
        for r in 0..rows.len() {
            if r != next && rows[r].get(col) {
                let (a, b) = split_two(rows, r, next);
                a.xor_assign(b);
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    pivots
}

/// Mutable reference to row `a` together with a shared reference to row `b`.
fn split_two(rows: &mut [BitVec], a: usize, b: usize) -> (&mut BitVec, &BitVec) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = rows.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_identity() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_dependent_rows() {
        let m = BitMatrix::from_bit_rows(&["110", "011", "101"]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_empty() {
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
    }

    #[test]
    fn rref_two_by_two() {
        let m = BitMatrix::from_bit_rows(&["11", "01"]);
        let (r, pivots) = m.rref();
        assert_eq!(r, BitMatrix::from_bit_rows(&["10", "01"]));
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn rref_identity_fixed() {
        let m = BitMatrix::identity(4);
        let (r, pivots) = m.rref();
        assert_eq!(r, BitMatrix::identity(4));
        assert_eq!(pivots, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rref_zero_matrix() {
        let m = BitMatrix::zeros(2, 3);
        let (r, pivots) = m.rref();
        assert_eq!(r, BitMatrix::zeros(2, 3));
        assert!(pivots.is_empty());
    }

    #[test]
    fn solve_standard_basis() {
        let m = BitMatrix::from_bit_rows(&["10", "01"]);
        let c = m.solve_in_span(&BitVec::from_bits("11")).unwrap().unwrap();
        assert_eq!(format!("{c:?}"), "11");
    }

    #[test]
    fn solve_not_in_span() {
        let m = BitMatrix::from_bit_rows(&["11"]);
        assert!(m.solve_in_span(&BitVec::from_bits("10")).unwrap().is_none());
    }

    #[test]
    fn solve_shape_mismatch() {
        let m = BitMatrix::from_bit_rows(&["11"]);
        let err = m.solve_in_span(&BitVec::from_bits("101")).unwrap_err();
        assert!(matches!(err, crate::Error::Shape(_)));
    }

    #[test]
    fn solve_selects_chain_through_pair_rows() {
        // 16 pair rows over 20 columns: row r covers columns r and r+4.
        // The only expression of e_17 + e_1 chains four of them.
        let mut rows = Vec::new();
        for r in 0..16 {
            let mut row = BitVec::zeros(20);
            row.set(r, true);
            row.set(r + 4, true);
            rows.push(row);
        }
        let m = BitMatrix::from_rows(rows, 20);
        let mut target = BitVec::zeros(20);
        target.set(16, true); // e_17, zero-based
        target.set(0, true); // e_1
        let c = m.solve_in_span(&target).unwrap().unwrap();
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![0, 4, 8, 12]);
    }

    #[test]
    fn solve_empty_basis() {
        let m = BitMatrix::zeros(0, 3);
        assert!(m.solve_in_span(&BitVec::zeros(3)).unwrap().is_some());
        assert!(m
            .solve_in_span(&BitVec::from_bits("010"))
            .unwrap()
            .is_none());
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random::<bool>() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rank is invariant under row swaps and under adding one row into
    /// another, and equals the rank of the reduced form.
    #[test]
    fn rank_invariant_under_elementary_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let rows = rng.random_range(1..=12);
            let cols = rng.random_range(1..=12);
            let m = random_matrix(&mut rng, rows, cols);
            let rank = m.rank();
            let (rref, pivots) = m.rref();
            assert_eq!(rref.rank(), rank);
            assert_eq!(pivots.len(), rank);

            let mut shuffled = m.clone();
            let a = rng.random_range(0..rows);
            let b = rng.random_range(0..rows);
            if a != b {
                let row_a = shuffled.row(a).clone();
                let row_b = shuffled.row(b).clone();
                shuffled.rows[a] = row_b;
                shuffled.rows[b] = row_a;
            }
            assert_eq!(shuffled.rank(), rank);

            let mut added = m.clone();
            let src = rng.random_range(0..rows);
            let dst = rng.random_range(0..rows);
            if src != dst {
                let row = added.row(src).clone();
                added.rows[dst].xor_assign(&row);
            }
            assert_eq!(added.rank(), rank);
        }
    }

    proptest! {
        /// Witness exists iff appending the target does not raise the rank,
        /// and any returned witness reproduces the target exactly.
        #[test]
        fn solve_in_span_matches_rank_criterion(
            rows in 0usize..8,
            cols in 1usize..10,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let target = {
                let mut t = BitVec::zeros(cols);
                for c in 0..cols {
                    if rng.random::<bool>() {
                        t.set(c, true);
                    }
                }
                t
            };
            let mut appended = m.clone();
            appended.push_row(target.clone());
            let in_span = appended.rank() == m.rank();
            let witness = m.solve_in_span(&target).unwrap();
            prop_assert_eq!(witness.is_some(), in_span);
            if let Some(c) = witness {
                prop_assert_eq!(&m.combine_rows(&c), &target);
            }
        }

        /// Row reduction preserves row span (checked through rank equality
        /// of the stacked matrix) for matrices up to 64x64.
        #[test]
        fn rref_preserves_span(rows in 0usize..64, cols in 1usize..64, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let (r, pivots) = m.rref();
            prop_assert_eq!(r.num_rows(), m.num_rows());
            let rank = m.rank();
            prop_assert_eq!(pivots.len(), rank);
            let mut stacked = m.clone();
            for row in r.rows() {
                stacked.push_row(row.clone());
            }
            prop_assert_eq!(stacked.rank(), rank);
        }
    }
}

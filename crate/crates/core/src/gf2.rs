//! Packed vectors and matrices over the two-element field.
//!
//! Storage is row-major with 64-bit words. Bits at positions `>= len` are
//! always zero, so equality, hashing and ordering on the word vector agree
//! with equality of the mathematical vectors.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![!0; words_for(len)],
        };
        v.mask_tail();
        v
    }

    /// Builds a vector from its 0-based support.
    ///
    /// Panics if a position is out of range.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            assert!(i < len, "position {i} out of range for length {len}");
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_support(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Builds a vector from raw words; excess bits are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The low 64 coordinates as a single word. Only meaningful for `len <= 64`.
    #[inline]
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Standard inner product mod 2.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Size of the common support (integer inner product of 0/1 vectors).
    #[inline]
    pub fn overlap(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn not(&self) -> Self {
        let mut v = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.mask_tail();
        v
    }

    /// Iterator over set positions, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    /// Restriction to the given coordinates, in the order given.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut v = Self::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                v.set(j, true);
            }
        }
        v
    }

    /// `out[perm[t]] = self[t]`: moves coordinate `t` to position `perm[t]`.
    pub fn scatter(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.len);
        let mut v = Self::zeros(self.len);
        for t in self.support() {
            v.set(perm[t], true);
        }
        v
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A matrix over GF(2) stored as a list of packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    /// The 0-row matrix with `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::from_support(n, [i])).collect(),
        }
    }

    /// Panics if the rows do not all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { cols, rows }
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self {
            cols: self.nrows(),
            rows: vec![BitVector::zeros(self.nrows()); self.cols],
        };
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Column submatrix, columns taken in the order given.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            cols: cols.len(),
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
        }
    }

    /// The combination `sum_i coeffs[i] * row_i`.
    pub fn combine(&self, coeffs: &BitVector) -> BitVector {
        let mut acc = BitVector::zeros(self.cols);
        for i in coeffs.support() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Reduced row echelon form with leftmost pivots and no column
    /// permutation. Zero rows are dropped; the pivot list is strictly
    /// increasing and has one entry per returned row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = rref_in_place(&mut rows, self.cols, None);
        rows.truncate(pivots.len());
        (Self { cols: self.cols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref_in_place(&mut rows, self.cols, None).len()
    }

    /// Finds `x` with `x * M = b`, i.e. coefficients over the rows of `self`
    /// reproducing `b`. Returns `None` if `b` is not in the row space or has
    /// the wrong length.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        if b.len() != self.cols {
            return None;
        }
        let m = self.nrows();
        let mut rows = self.rows.clone();
        let mut track: Vec<BitVector> = (0..m).map(|i| BitVector::from_support(m, [i])).collect();
        let pivots = rref_in_place(&mut rows, self.cols, Some(&mut track));
        let mut rem = b.clone();
        let mut x = BitVector::zeros(m);
        for (r, &p) in pivots.iter().enumerate() {
            if rem.get(p) {
                rem.xor_assign(&rows[r]);
                x.xor_assign(&track[r]);
            }
        }
        rem.is_zero().then_some(x)
    }

    /// Basis of the right kernel `{x : M x^T = 0}`, one row per free column.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Self::empty(self.cols);
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::from_support(self.cols, [f]);
            for (i, &p) in pivots.iter().enumerate() {
                if r.rows[i].get(f) {
                    x.set(p, true);
                }
            }
            out.rows.push(x);
        }
        out
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// Gauss-Jordan on `rows`, moving nonzero pivot rows to the front. Returns
/// pivot columns. When `track` is given, the same row operations are applied
/// to it.
fn rref_in_place(rows: &mut [BitVector], cols: usize, mut track: Option<&mut Vec<BitVector>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    let mut hits = Vec::new();
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(top, p);
        if let Some(t) = track.as_deref_mut() {
            t.swap(top, p);
        }
        hits.clear();
        hits.extend((0..rows.len()).filter(|&r| r != top && rows[r].get(c)));
        let pivot_row = rows[top].clone();
        for &r in &hits {
            rows[r].xor_assign(&pivot_row);
        }
        if let Some(t) = track.as_deref_mut() {
            let pt = t[top].clone();
            for &r in &hits {
                t[r].xor_assign(&pt);
            }
        }
        pivots.push(c);
        top += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn mat(rows: &[&str]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| BitVector::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// All 2^rows combinations of the rows.
    fn span(m: &BitMatrix) -> HashSet<BitVector> {
        let k = m.nrows();
        (0..1u64 << k)
            .map(|mask| m.combine(&BitVector::from_words(k, vec![mask])))
            .collect()
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        BitMatrix::from_rows(
            cols,
            (0..rows)
                .map(|_| BitVector::from_words(cols, (0..cols.div_ceil(64)).map(|_| rng.random()).collect()))
                .collect(),
        )
    }

    #[test]
    fn rref_identity() {
        let (r, p) = BitMatrix::identity(5).rref();
        assert_eq!(r, BitMatrix::identity(5));
        assert_eq!(p, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rref_duplicate_rows() {
        let (r, p) = mat(&["11", "11"]).rref();
        assert_eq!(r.rows(), mat(&["11"]).rows());
        assert_eq!(p, vec![0]);
        assert_eq!(mat(&["11", "11"]).rank(), 1);
    }

    #[test]
    fn rank_matches_span_size() {
        for seed in 0..8 {
            let m = random_matrix(10, 20, seed);
            let size = span(&m).len();
            assert!(size.is_power_of_two());
            assert_eq!(m.rank(), size.trailing_zeros() as usize);
        }
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(4);
        let b = BitVector::from_support(4, [1, 3]);
        assert_eq!(id.solve(&b), Some(b.clone()));
        let m = mat(&["110", "011"]);
        let x = m.solve(&BitVector::from_support(3, [0, 2])).unwrap();
        assert_eq!(x, BitVector::from_support(2, [0, 1]));
        assert_eq!(m.solve(&BitVector::from_support(3, [0])), None);
        assert_eq!(m.solve(&BitVector::zeros(5)), None);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(BitMatrix::identity(6).nullspace_basis().nrows(), 0);
        let ns = mat(&["11"]).nullspace_basis();
        assert_eq!(ns.rows(), mat(&["11"]).rows());
        // no rows: kernel is the whole space
        assert_eq!(BitMatrix::empty(3).nullspace_basis().rank(), 3);
    }

    #[test]
    fn support_and_select() {
        let v = BitVector::from_support(70, [0, 5, 64, 69]);
        assert_eq!(v.support().collect::<Vec<_>>(), vec![0, 5, 64, 69]);
        assert_eq!(v.weight(), 4);
        assert_eq!(v.select(&[69, 1, 5]).to_string(), "101");
        assert_eq!(BitVector::ones(70).weight(), 70);
        assert_eq!(BitVector::ones(70).not().weight(), 0);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..12, 1usize..80, any::<u64>()).prop_map(|(r, c, s)| random_matrix(r, c, s))
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let (r1, p1) = m.rref();
            let (r2, p2) = r1.rref();
            prop_assert_eq!(&r1, &r2);
            prop_assert_eq!(&p1, &p2);
            prop_assert!(p1.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn rref_preserves_row_space(m in (0usize..8, 1usize..20, any::<u64>()).prop_map(|(r, c, s)| random_matrix(r, c, s))) {
            prop_assert_eq!(span(&m), span(&m.rref().0));
        }

        #[test]
        fn nullspace_orthogonal_and_complementary(m in arb_matrix()) {
            let ns = m.nullspace_basis();
            for x in ns.rows() {
                for r in m.rows() {
                    prop_assert!(!x.dot(r));
                }
            }
            prop_assert_eq!(m.rank() + ns.nrows(), m.ncols());
            prop_assert_eq!(ns.rank(), ns.nrows());
        }

        #[test]
        fn solve_iff_in_span(m in (0usize..10, 1usize..16, any::<u64>()).prop_map(|(r, c, s)| random_matrix(r, c, s)), seed in any::<u64>()) {
            let all = span(&m);
            let b = random_matrix(1, m.ncols(), seed).row(0).clone();
            match m.solve(&b) {
                Some(x) => prop_assert_eq!(m.combine(&x), b),
                None => prop_assert!(!all.contains(&b)),
            }
            for v in all.iter().take(8) {
                let x = m.solve(v).expect("span member");
                prop_assert_eq!(&m.combine(&x), v);
            }
        }
    }
}

//! Binary linear codes: weight distributions, the MacWilliams transform,
//! duals, one-vector extensions and the residue admissibility conditions
//! for Type II lifts.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest dimension enumerated codeword by codeword (2^28 Gray steps).
pub const ENUMERATION_LIMIT: usize = 28;

/// Dimension above which Gray enumeration is split across threads.
const PARALLEL_DIM: usize = 18;

/// A binary linear code stored by its reduced row echelon basis.
///
/// Two codes compare equal iff they have the same coordinate order and the
/// same row space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl BinaryCode {
    pub fn from_generators(gens: &BitMatrix) -> Self {
        let (basis, pivots) = gens.rref();
        Self { basis, pivots }
    }

    pub fn from_rows(n: usize, rows: Vec<BitVector>) -> Self {
        Self::from_generators(&BitMatrix::from_rows(n, rows))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_generators(&BitMatrix::empty(n))
    }

    pub fn full(n: usize) -> Self {
        Self::from_generators(&BitMatrix::identity(n))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.basis.ncols()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// The rref basis.
    #[inline]
    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is a codeword.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (row, &p) in self.basis.rows().iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.len() && self.reduce(v).is_zero()
    }

    /// Coefficients of a codeword over the rref basis: its values at the pivots.
    pub fn coordinates(&self, v: &BitVector) -> Option<BitVector> {
        self.contains(v).then(|| {
            BitVector::from_support(self.dim(), (0..self.dim()).filter(|&i| v.get(self.pivots[i])))
        })
    }

    pub fn is_subcode_of(&self, other: &BinaryCode) -> bool {
        self.basis.rows().iter().all(|r| other.contains(r))
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(&BitVector::ones(self.len()))
    }

    /// Every pair of codewords has even overlap.
    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.basis.rows();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)))
    }

    /// All weights divisible by four. Uses the basis only: a code is doubly
    /// even iff its generators are doubly even and pairwise orthogonal.
    pub fn is_doubly_even(&self) -> bool {
        self.basis.rows().iter().all(|r| r.weight() % 4 == 0) && self.is_self_orthogonal()
    }

    /// Exact weight distribution by Gray-code enumeration of all codewords.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        if self.dim() > ENUMERATION_LIMIT {
            return Err(Error::DimensionTooLarge {
                dim: self.dim(),
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(WeightDistribution {
            counts: gray_weight_counts(self.basis.rows(), self.len()),
        })
    }

    /// Weight distribution computed on whichever of the code and its dual
    /// has the smaller dimension.
    pub fn weight_distribution_any(&self) -> Result<WeightDistribution> {
        let (n, k) = (self.len(), self.dim());
        if k <= n - k {
            self.weight_distribution()
        } else if n - k <= ENUMERATION_LIMIT {
            let d = self.dual().weight_distribution()?;
            macwilliams(&d, n - k)
        } else {
            Err(Error::BothSidesTooLarge { n, dim: k })
        }
    }

    pub fn dual(&self) -> BinaryCode {
        BinaryCode::from_generators(&self.basis.nullspace_basis())
    }

    /// The code generated by `self` and `v`.
    pub fn extend(&self, v: &BitVector) -> Result<BinaryCode> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: v.len(),
            });
        }
        if self.contains(v) {
            return Err(Error::MemberVector);
        }
        let mut g = self.basis.clone();
        g.push_row(v.clone());
        Ok(BinaryCode::from_generators(&g))
    }

    /// The subcode `{x in self : x . v = 0}`.
    pub fn intersect_hyperplane(&self, v: &BitVector) -> Result<BinaryCode> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: v.len(),
            });
        }
        let rows = self.basis.rows();
        let Some(first) = rows.iter().position(|r| r.dot(v)) else {
            return Ok(self.clone());
        };
        let kept = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != first)
            .map(|(_, r)| if r.dot(v) { r.xor(&rows[first]) } else { r.clone() })
            .collect();
        Ok(BinaryCode::from_rows(self.len(), kept))
    }

    /// Smallest nonzero weight, or `n + 1` for the zero code.
    pub fn min_weight(&self) -> Result<usize> {
        Ok(self
            .weight_distribution_any()?
            .min_nonzero_weight()
            .unwrap_or(self.len() + 1))
    }

    /// Calls `f` on every codeword, in Gray-code order starting from zero.
    pub fn for_each_codeword<F: FnMut(&BitVector)>(&self, mut f: F) -> Result<()> {
        if self.dim() > ENUMERATION_LIMIT {
            return Err(Error::DimensionTooLarge {
                dim: self.dim(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let mut cur = BitVector::zeros(self.len());
        f(&cur);
        for s in 1u64..(1u64 << self.dim()) {
            cur.xor_assign(self.basis.row(s.trailing_zeros() as usize));
            f(&cur);
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryCode [{}, {}]\n{}", self.len(), self.dim(), self.basis)
    }
}

fn gray_weight_counts(rows: &[BitVector], n: usize) -> Vec<u64> {
    let k = rows.len();
    let split = k.saturating_sub(PARALLEL_DIM);
    let chunk_rows = &rows[..k - split];
    let high_rows = &rows[k - split..];
    let chunk = |hi: u64| -> Vec<u64> {
        let mut start = BitVector::zeros(n);
        for (i, r) in high_rows.iter().enumerate() {
            if (hi >> i) & 1 == 1 {
                start.xor_assign(r);
            }
        }
        if n <= 64 {
            let words: Vec<u64> = chunk_rows.iter().map(BitVector::as_u64).collect();
            walk_u64(start.as_u64(), &words, n)
        } else {
            walk_words(start, chunk_rows, n)
        }
    };
    (0..1u64 << split)
        .into_par_iter()
        .map(chunk)
        .reduce(
            || vec![0; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn walk_u64(start: u64, rows: &[u64], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let mut cur = start;
    counts[cur.count_ones() as usize] += 1;
    for s in 1u64..(1u64 << rows.len()) {
        cur ^= rows[s.trailing_zeros() as usize];
        counts[cur.count_ones() as usize] += 1;
    }
    counts
}

fn walk_words(start: BitVector, rows: &[BitVector], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let mut cur = start;
    counts[cur.weight()] += 1;
    for s in 1u64..(1u64 << rows.len()) {
        cur.xor_assign(&rows[s.trailing_zeros() as usize]);
        counts[cur.weight()] += 1;
    }
    counts
}

/// Conditions a binary code must meet to be the residue of an extremal
/// Type II Z4-code of length 24, 32 or 40.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    /// Every weight is divisible by four.
    pub doubly_even: bool,
    /// The all-ones vector is a codeword.
    pub contains_all_ones: bool,
    /// The dual code has minimum weight at least four.
    pub dual_distance_at_least_4: bool,
}

impl Admissibility {
    pub fn all(&self) -> bool {
        self.doubly_even && self.contains_all_ones && self.dual_distance_at_least_4
    }
}

pub fn residue_admissibility(c: &BinaryCode) -> Result<Admissibility> {
    let w = c.weight_distribution()?;
    let dual = macwilliams(&w, c.dim())?;
    Ok(Admissibility {
        doubly_even: w.counts().iter().enumerate().all(|(j, &a)| j % 4 == 0 || a == 0),
        contains_all_ones: c.contains_all_ones(),
        dual_distance_at_least_4: (1..=3.min(c.len())).all(|j| dual.get(j) == 0),
    })
}

/// Number of codewords of each weight `0..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    /// Panics if `counts` is empty.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "a distribution covers weights 0..=n");
        Self { counts }
    }

    /// Code length.
    pub fn len(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `A_j`, zero outside `0..=n`.
    pub fn get(&self, j: usize) -> u64 {
        self.counts.get(j).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&j| self.counts[j] > 0)
    }

    /// `A_j = A_{n-j}` for all `j`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..=n).all(|j| self.counts[j] == self.counts[n - j])
    }
}

impl fmt::Display for WeightDistribution {
    /// Prints the enumerator as `1 + 62y^16 + y^32`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.counts.iter().enumerate().filter(|(_, &a)| a > 0) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (j, a) {
                (0, a) => write!(f, "{a}")?,
                (j, 1) => write!(f, "y^{j}")?,
                (j, a) => write!(f, "{a}y^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightDistribution({self})")
    }
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Binary Krawtchouk polynomial `K_j(i; n)`.
pub fn krawtchouk(n: usize, j: usize, i: usize) -> i128 {
    (0..=j.min(i))
        .map(|s| {
            let t = binomial(i, s) * binomial(n - i, j - s);
            if s % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Weight distribution of the dual of an `[n, k]` code with distribution `w`.
pub fn macwilliams(w: &WeightDistribution, k: usize) -> Result<WeightDistribution> {
    let n = w.len();
    if n > 64 {
        return Err(Error::InvalidDistribution(format!(
            "length {n} above the supported maximum of 64"
        )));
    }
    if w.total() != 1u128 << k {
        return Err(Error::InvalidDistribution(format!(
            "counts sum to {} but dimension {k} requires {}",
            w.total(),
            1u128 << k
        )));
    }
    let size = 1i128 << k;
    let kraw: Vec<Vec<i128>> = (0..=n).map(|j| (0..=n).map(|i| krawtchouk(n, j, i)).collect()).collect();
    let mut out = Vec::with_capacity(n + 1);
    for (j, row) in kraw.iter().enumerate() {
        let mut s: i128 = 0;
        for (i, &a) in w.counts().iter().enumerate() {
            s = (a as i128)
                .checked_mul(row[i])
                .and_then(|t| s.checked_add(t))
                .ok_or_else(|| Error::InvalidDistribution("overflow in transform".into()))?;
        }
        if s < 0 || s % size != 0 {
            return Err(Error::InvalidDistribution(format!(
                "dual count at weight {j} is {s}/{size}, not a nonnegative integer"
            )));
        }
        out.push(u64::try_from(s / size).map_err(|_| Error::InvalidDistribution("count overflow".into()))?);
    }
    Ok(WeightDistribution { counts: out })
}

/// First-order Reed-Muller code RM(1,5) in the fixed coordinate order used
/// throughout the length-32 tables.
pub fn rm15() -> BinaryCode {
    let m = parse_g2m(include_str!("../data/rm15.g2m")).expect("embedded RM(1,5) parses");
    BinaryCode::from_generators(&m)
}

/// Parses the `.g2m` text format: `#` comment lines, then one row per line
/// over `0`/`1` with spaces ignored.
pub fn parse_g2m(text: &str) -> Result<BitMatrix> {
    let mut rows: Vec<BitVector> = Vec::new();
    let mut width = None;
    for (ln, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut bits = Vec::new();
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | '\t' | '\r' => {}
                other => {
                    return Err(Error::Parse {
                        line: ln + 1,
                        column: col + 1,
                        message: format!("unexpected symbol {other:?}"),
                    })
                }
            }
        }
        match width {
            None => width = Some(bits.len()),
            Some(w) if w != bits.len() => {
                return Err(Error::RaggedRows {
                    line: ln + 1,
                    expected: w,
                    got: bits.len(),
                })
            }
            _ => {}
        }
        rows.push(BitVector::from_bools(&bits));
    }
    Ok(BitMatrix::from_rows(width.unwrap_or(0), rows))
}

pub fn write_g2m(m: &BitMatrix) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn extended_hamming() -> BinaryCode {
        let m = parse_g2m("11110000\n00111100\n00001111\n01010101\n").unwrap();
        BinaryCode::from_generators(&m)
    }

    fn support1(n: usize, s: &[usize]) -> BitVector {
        BitVector::from_support(n, s.iter().map(|i| i - 1))
    }

    #[test]
    fn rm15_distribution() {
        let rm = rm15();
        assert_eq!((rm.len(), rm.dim()), (32, 6));
        let w = rm.weight_distribution().unwrap();
        assert_eq!(w.to_string(), "1 + 62y^16 + y^32");
        let d = macwilliams(&w, 6).unwrap();
        assert_eq!((d.get(1), d.get(2), d.get(3), d.get(4)), (0, 0, 0, 1240));
        assert_eq!(rm.min_weight().unwrap(), 16);
        assert_eq!(rm.dual().min_weight().unwrap(), 4);
    }

    #[test]
    fn zero_and_full_codes() {
        let z = BinaryCode::zero(8);
        assert_eq!(z.weight_distribution().unwrap().to_string(), "1");
        assert_eq!(z.min_weight().unwrap(), 9);
        assert_eq!(z.dual(), BinaryCode::full(8));
        assert_eq!(BinaryCode::full(8).min_weight().unwrap(), 1);
        let full = BinaryCode::full(10).weight_distribution().unwrap();
        assert_eq!(macwilliams(&full, 10).unwrap().to_string(), "1");
    }

    #[test]
    fn extend_rm15_to_b32_7() {
        let b = rm15().extend(&support1(32, &[1, 2, 3, 4])).unwrap();
        let w = b.weight_distribution().unwrap();
        let got: Vec<u64> = [4, 8, 12, 16, 20, 24, 28, 32].iter().map(|&j| w.get(j)).collect();
        assert_eq!(got, vec![1, 0, 7, 110, 7, 0, 1, 1]);
        assert_eq!(rm15().extend(&BitVector::ones(32)), Err(Error::MemberVector));
        assert!(matches!(rm15().extend(&BitVector::ones(8)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn hamming_is_self_dual() {
        let h = extended_hamming();
        assert_eq!(h.dual(), h);
        assert!(h.is_doubly_even());
        assert!(residue_admissibility(&h).unwrap().doubly_even);
    }

    #[test]
    fn hyperplane_examples() {
        let rm = rm15();
        assert_eq!(rm.intersect_hyperplane(&BitVector::zeros(32)).unwrap(), rm);
        assert_eq!(rm.intersect_hyperplane(&BitVector::ones(32)).unwrap(), rm);
        let sub = rm.intersect_hyperplane(&support1(32, &[1])).unwrap();
        assert_eq!(sub.dim(), 5);
        assert!(sub.is_subcode_of(&rm));
    }

    #[test]
    fn admissibility_examples() {
        let a = residue_admissibility(&rm15()).unwrap();
        assert!(a.all());
        let rep = BinaryCode::from_rows(2, vec![BitVector::ones(2)]);
        assert!(!residue_admissibility(&rep).unwrap().doubly_even);
        let n32 = rm15().extend(&support1(32, &[1, 2, 3, 4, 5, 9, 17, 29])).unwrap();
        assert!(residue_admissibility(&n32).unwrap().all());
    }

    #[test]
    fn min_weight_from_dual_side() {
        // [32, 26] dual of RM(1,5): enumerated through the 6-dimensional side
        let d = rm15().dual();
        assert_eq!(d.dim(), 26);
        assert_eq!(d.min_weight().unwrap(), 4);
        assert_eq!(d.weight_distribution_any().unwrap().get(4), 1240);
        assert!(matches!(d.weight_distribution(), Ok(_) | Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn dimension_guard() {
        let big = BinaryCode::full(30);
        assert_eq!(
            big.weight_distribution(),
            Err(Error::DimensionTooLarge { dim: 30, limit: 28 })
        );
    }

    #[test]
    fn g2m_parsing() {
        let m = parse_g2m("# c\n10 1\n0 11\n").unwrap();
        assert_eq!(write_g2m(&m), "101\n011\n");
        assert!(matches!(parse_g2m("101\n01\n"), Err(Error::RaggedRows { line: 2, .. })));
        assert!(matches!(parse_g2m("121\n"), Err(Error::Parse { line: 1, column: 2, .. })));
        assert_eq!(parse_g2m("").unwrap().nrows(), 0);
    }

    #[test]
    fn display_enumerator() {
        let w = WeightDistribution::from_counts(vec![1, 0, 3, 0, 1]);
        assert_eq!(w.to_string(), "1 + 3y^2 + y^4");
        assert!(w.is_symmetric());
    }

    #[test]
    fn macwilliams_rejects_non_distributions() {
        // three words of weight 2 cannot fit in length 2
        let bad = WeightDistribution::from_counts(vec![1, 0, 3]);
        assert!(macwilliams(&bad, 2).is_err());
        let bad_total = WeightDistribution::from_counts(vec![1, 0, 2, 0]);
        assert!(macwilliams(&bad_total, 1).is_err());
    }

    #[test]
    fn solve_recovers_rm15_combination() {
        let rm = rm15();
        let coeffs = BitVector::from_support(6, [0, 2, 5]);
        let word = rm.basis().combine(&coeffs);
        let x = rm.basis().solve(&word).unwrap();
        assert_eq!(rm.basis().combine(&x), word);
        let ns = rm.basis().nullspace_basis();
        assert_eq!(ns.nrows(), 26);
        assert!(ns.rows().iter().all(|r| rm.basis().rows().iter().all(|g| !g.dot(r))));
    }

    fn random_code(n: usize, k: usize, seed: u64) -> BinaryCode {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..k)
            .map(|_| BitVector::from_words(n, vec![rng.random()]))
            .collect();
        BinaryCode::from_rows(n, rows)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn macwilliams_is_an_involution(n in 1usize..20, k in 0usize..10, seed in any::<u64>()) {
            let c = random_code(n, k.min(n), seed);
            let w = c.weight_distribution().unwrap();
            let d = macwilliams(&w, c.dim()).unwrap();
            prop_assert_eq!(macwilliams(&d, n - c.dim()).unwrap(), w);
        }

        #[test]
        fn dual_distribution_matches_transform(n in 1usize..16, k in 0usize..10, seed in any::<u64>()) {
            let c = random_code(n, k.min(n), seed);
            let dual = c.dual();
            prop_assert_eq!(dual.dim(), n - c.dim());
            prop_assert_eq!(dual.dual(), c.clone());
            prop_assert_eq!(
                dual.weight_distribution().unwrap(),
                macwilliams(&c.weight_distribution().unwrap(), c.dim()).unwrap()
            );
        }

        #[test]
        fn extension_doubles_the_code(n in 2usize..20, k in 0usize..8, seed in any::<u64>(), vs in any::<u64>()) {
            let c = random_code(n, k.min(n - 1), seed);
            let v = BitVector::from_words(n, vec![vs]);
            match c.extend(&v) {
                Ok(e) => {
                    prop_assert_eq!(e.dim(), c.dim() + 1);
                    prop_assert!(c.is_subcode_of(&e));
                    prop_assert!(e.contains(&v));
                }
                Err(Error::MemberVector) => prop_assert!(c.contains(&v)),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn doubly_even_shortcut_agrees(n in 4usize..20, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..3).map(|_| {
                let mut v = BitVector::zeros(n);
                for _ in 0..4 { v.set(rng.random_range(0..n), true); }
                v
            }).collect();
            let c = BinaryCode::from_rows(n, rows);
            let w = c.weight_distribution().unwrap();
            let by_dist = w.counts().iter().enumerate().all(|(j, &a)| j % 4 == 0 || a == 0);
            prop_assert_eq!(c.is_doubly_even(), by_dist);
        }
    }
}

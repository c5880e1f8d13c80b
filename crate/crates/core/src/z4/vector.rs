use std::fmt;

use crate::gf2::BitVector;

/// A vector over Z4, stored bit-sliced: entry `i` equals `lo[i] + 2 * hi[i]`.
///
/// The low plane is the reduction mod 2, so `n1 + n3 = wt(lo)` and
/// `n2 = wt(hi & !lo)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z4Vector {
    lo: BitVector,
    hi: BitVector,
}

impl Z4Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            lo: BitVector::zeros(len),
            hi: BitVector::zeros(len),
        }
    }

    /// Panics on entries above 3.
    pub fn from_digits(digits: &[u8]) -> Self {
        let mut v = Self::zeros(digits.len());
        for (i, &d) in digits.iter().enumerate() {
            v.set(i, d);
        }
        v
    }

    pub fn from_planes(lo: BitVector, hi: BitVector) -> Self {
        assert_eq!(lo.len(), hi.len(), "plane length mismatch");
        Self { lo, hi }
    }

    /// The 0/1 vector `v` viewed over Z4.
    pub fn from_binary(v: &BitVector) -> Self {
        Self {
            lo: v.clone(),
            hi: BitVector::zeros(v.len()),
        }
    }

    /// `2 v` for a binary vector `v`.
    pub fn twice(v: &BitVector) -> Self {
        Self {
            lo: BitVector::zeros(v.len()),
            hi: v.clone(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lo.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    /// Reduction mod 2.
    #[inline]
    pub fn lo(&self) -> &BitVector {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &BitVector {
        &self.hi
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.lo.get(i) as u8 | (self.hi.get(i) as u8) << 1
    }

    pub fn set(&mut self, i: usize, value: u8) {
        assert!(value < 4, "entry {value} is not in Z4");
        self.lo.set(i, value & 1 == 1);
        self.hi.set(i, value & 2 == 2);
    }

    pub fn digits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// All entries even.
    pub fn is_even(&self) -> bool {
        self.lo.is_zero()
    }

    pub fn add_assign(&mut self, other: &Self) {
        let carry = self.lo.and(&other.lo);
        self.lo.xor_assign(&other.lo);
        self.hi.xor_assign(&other.hi);
        self.hi.xor_assign(&carry);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_assign(other);
        v
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.lo.clone(),
            hi: self.hi.xor(&self.lo),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `c * self` for a scalar `c` in Z4.
    pub fn scale(&self, c: u8) -> Self {
        match c & 3 {
            0 => Self::zeros(self.len()),
            1 => self.clone(),
            2 => Self::twice(&self.lo),
            _ => self.neg(),
        }
    }

    /// `self + 2 v` for a binary `v`.
    pub fn add_twice_assign(&mut self, v: &BitVector) {
        self.hi.xor_assign(v);
    }

    /// Inner product mod 4.
    pub fn dot(&self, other: &Self) -> u8 {
        let ll = self.lo.overlap(&other.lo);
        let cross = self.lo.overlap(&other.hi) + self.hi.overlap(&other.lo);
        ((ll + 2 * cross) % 4) as u8
    }

    /// Number of entries equal to 1, 2 and 3.
    pub fn symbol_counts(&self) -> [usize; 3] {
        let odd = self.lo.weight();
        let threes = self.lo.and(&self.hi).weight();
        let twos = self.hi.weight() - threes;
        [odd - threes, twos, threes]
    }

    /// `n1 + 4 n2 + n3`.
    pub fn euclidean_weight(&self) -> usize {
        let [n1, n2, n3] = self.symbol_counts();
        n1 + 4 * n2 + n3
    }

    /// `n1 + 2 n2 + n3`.
    pub fn lee_weight(&self) -> usize {
        let [n1, n2, n3] = self.symbol_counts();
        n1 + 2 * n2 + n3
    }

    /// `n1 + n2 + n3`.
    pub fn hamming_weight(&self) -> usize {
        let [n1, n2, n3] = self.symbol_counts();
        n1 + n2 + n3
    }

    /// `out[perm[t]] = self[t]`.
    pub fn scatter(&self, perm: &[usize]) -> Self {
        Self {
            lo: self.lo.scatter(perm),
            hi: self.hi.scatter(perm),
        }
    }

    /// Restriction to the given coordinates, in order.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self {
            lo: self.lo.select(positions),
            hi: self.hi.select(positions),
        }
    }
}

impl fmt::Display for Z4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Z4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z4Vector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn digits() -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..4, 1..90)
    }

    #[test]
    fn weights_follow_symbol_counts() {
        let v = Z4Vector::from_digits(&[0, 1, 2, 3, 2, 1]);
        assert_eq!(v.symbol_counts(), [2, 2, 1]);
        assert_eq!(v.euclidean_weight(), 2 + 8 + 1);
        assert_eq!(v.lee_weight(), 2 + 4 + 1);
        assert_eq!(v.hamming_weight(), 5);
        assert_eq!(v.to_string(), "012321");
    }

    proptest! {
        #[test]
        fn arithmetic_matches_integers(a in digits(), seed in any::<u64>()) {
            let b: Vec<u8> = a.iter().enumerate().map(|(i, _)| ((seed >> (i % 32 * 2)) & 3) as u8).collect();
            let (x, y) = (Z4Vector::from_digits(&a), Z4Vector::from_digits(&b));
            let sum: Vec<u8> = a.iter().zip(&b).map(|(p, q)| (p + q) % 4).collect();
            let diff: Vec<u8> = a.iter().zip(&b).map(|(p, q)| (4 + p - q) % 4).collect();
            prop_assert_eq!(x.add(&y).digits(), sum);
            prop_assert_eq!(x.sub(&y).digits(), diff);
            for c in 0..4u8 {
                let scaled: Vec<u8> = a.iter().map(|p| p * c % 4).collect();
                prop_assert_eq!(x.scale(c).digits(), scaled);
            }
            let dot = a.iter().zip(&b).map(|(p, q)| (*p as usize) * (*q as usize)).sum::<usize>() % 4;
            prop_assert_eq!(x.dot(&y) as usize, dot);
            let ew: usize = a.iter().map(|&p| [0, 1, 4, 1][p as usize]).sum();
            prop_assert_eq!(x.euclidean_weight(), ew);
        }
    }
}

use std::fmt;

use crate::bincodes::{BinaryCode, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::z4::Z4Vector;

/// A Z4-submodule of `Z4^n`, held in a canonical standard form.
///
/// The canonical generators are `k1` order-4 rows `x_p`, one for each pivot
/// `p` of the residue code's rref, normalised so that `x_p` is `1` at `p`
/// and `0` at the other residue pivots and lies in `{0, 1}` at the pivots of
/// the order-2 part; and `k2` order-2 rows `2 t` with `t` running over the
/// rref basis of `{t in torsion : t vanishes on the residue pivots}`. This
/// presentation is unique for a given submodule and coordinate order, so
/// two codes are equal iff their canonical generators are.
#[derive(Clone)]
pub struct Z4Code {
    n: usize,
    gens: Vec<Z4Vector>,
    residue: BinaryCode,
    torsion: BinaryCode,
    order4: Vec<Z4Vector>,
    order2: BinaryCode,
    perm: Vec<usize>,
}

impl PartialEq for Z4Code {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.order4 == other.order4 && self.order2 == other.order2
    }
}

impl Eq for Z4Code {}

impl std::hash::Hash for Z4Code {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.order4.hash(state);
        self.order2.hash(state);
    }
}

impl Z4Code {
    /// Computes the standard form of the submodule generated by `gens`.
    pub fn standard_form(gens: Vec<Z4Vector>, n: usize) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: g.len(),
            });
        }
        let lo = BitMatrix::from_rows(n, gens.iter().map(|g| g.lo().clone()).collect());
        let residue = BinaryCode::from_generators(&lo);

        // Order-2 elements come from the residue itself (2 * g) and from
        // relations among the generators mod 2.
        let mut torsion_gens = residue.basis().clone();
        for rel in lo.transpose().nullspace_basis().rows() {
            let mut acc = Z4Vector::zeros(n);
            for i in rel.support() {
                acc.add_assign(&gens[i]);
            }
            debug_assert!(acc.is_even());
            torsion_gens.push_row(acc.hi().clone());
        }
        let torsion = BinaryCode::from_generators(&torsion_gens);

        let order2 = BinaryCode::from_rows(
            n,
            torsion
                .basis()
                .rows()
                .iter()
                .map(|t| residue.reduce(t))
                .filter(|t| !t.is_zero())
                .collect(),
        );

        let res_rows = residue.basis().rows();
        let res_piv = residue.pivots();
        let mut order4 = Vec::with_capacity(residue.dim());
        for (r, &p) in res_rows.iter().zip(res_piv) {
            let coeffs = lo.solve(r).expect("residue row is a combination of generators");
            let mut x = Z4Vector::zeros(n);
            for i in coeffs.support() {
                x.add_assign(&gens[i]);
            }
            if x.get(p) == 3 {
                x = x.neg();
            }
            for (r2, &q) in res_rows.iter().zip(res_piv) {
                if q != p && x.get(q) == 2 {
                    x.add_twice_assign(r2);
                }
            }
            for (t, &q) in order2.basis().rows().iter().zip(order2.pivots()) {
                if x.get(q) >= 2 {
                    x.add_twice_assign(t);
                }
            }
            order4.push(x);
        }

        let mut perm: Vec<usize> = res_piv.iter().chain(order2.pivots()).copied().collect();
        let mut used = vec![false; n];
        for &p in &perm {
            used[p] = true;
        }
        perm.extend((0..n).filter(|&c| !used[c]));

        Ok(Self {
            n,
            gens,
            residue,
            torsion,
            order4,
            order2,
            perm,
        })
    }

    /// Completes `upper` (rows whose reductions mod 2 are independent and
    /// span a self-orthogonal code) with the order-2 rows `2 d`, `d` ranging
    /// over a complement of the residue inside its dual.
    pub fn complete_self_dual(upper: Vec<Z4Vector>, n: usize) -> Result<Self> {
        let k = upper.len();
        if 2 * k > n {
            return Err(Error::Inconsistent(format!("{k} order-4 rows exceed n/2 = {}", n / 2)));
        }
        if let Some(g) = upper.iter().find(|g| g.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: g.len(),
            });
        }
        let residue = BinaryCode::from_rows(n, upper.iter().map(|g| g.lo().clone()).collect());
        if residue.dim() != k {
            return Err(Error::Inconsistent(format!(
                "upper rows are dependent mod 2 (rank {} of {k})",
                residue.dim()
            )));
        }
        if !residue.is_self_orthogonal() {
            return Err(Error::Inconsistent("residue of the upper rows is not self-orthogonal".into()));
        }
        let mut gens = upper;
        gens.extend(dual_complement(&residue).into_iter().map(|d| Z4Vector::twice(&d)));
        Self::standard_form(gens, n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Generators as supplied.
    pub fn generators(&self) -> &[Z4Vector] {
        &self.gens
    }

    pub fn k1(&self) -> usize {
        self.order4.len()
    }

    pub fn k2(&self) -> usize {
        self.order2.dim()
    }

    /// `log2 |C| = 2 k1 + k2`.
    pub fn log2_size(&self) -> usize {
        2 * self.k1() + self.k2()
    }

    pub fn residue(&self) -> &BinaryCode {
        &self.residue
    }

    pub fn torsion(&self) -> &BinaryCode {
        &self.torsion
    }

    /// Canonical order-4 generators, one per residue pivot.
    pub fn order4_rows(&self) -> &[Z4Vector] {
        &self.order4
    }

    /// Binary rows `t` whose doubles `2 t` are the order-2 generators.
    pub fn order2_rows(&self) -> &[BitVector] {
        self.order2.basis().rows()
    }

    /// Canonical generators: order-4 rows followed by the order-2 rows.
    pub fn canonical_generators(&self) -> Vec<Z4Vector> {
        self.order4
            .iter()
            .cloned()
            .chain(self.order2_rows().iter().map(Z4Vector::twice))
            .collect()
    }

    /// Column order putting the canonical generators in the shape
    /// `(I_k1 A B; 0 2I_k2 2C)`: entry `j` is the original coordinate placed
    /// at position `j`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Canonical generators with columns reordered by [`Self::permutation`].
    pub fn standard_form_matrix(&self) -> Vec<Z4Vector> {
        self.canonical_generators().iter().map(|g| g.select(&self.perm)).collect()
    }

    pub fn contains(&self, y: &Z4Vector) -> bool {
        if y.len() != self.n || !self.residue.contains(y.lo()) {
            return false;
        }
        let mut z = y.clone();
        for (x, &p) in self.order4.iter().zip(self.residue.pivots()) {
            let c = y.get(p);
            if c != 0 {
                z = z.sub(&x.scale(c));
            }
        }
        z.is_even() && self.torsion.contains(z.hi())
    }

    pub fn is_self_dual(&self) -> bool {
        let g = self.canonical_generators();
        self.log2_size() == self.n
            && g.iter().enumerate().all(|(i, a)| g[i..].iter().all(|b| a.dot(b) == 0))
    }

    /// Self-dual with every generator of Euclidean weight divisible by 8.
    /// For self-dual codes this covers all codewords since
    /// `EW(x + y) = EW(x) + EW(y) + 2 (x . y) mod 8`.
    pub fn is_type_ii(&self) -> bool {
        self.is_self_dual()
            && self
                .canonical_generators()
                .iter()
                .all(|g| g.euclidean_weight() % 8 == 0)
    }

    /// Every codeword exactly once.
    pub fn codewords(&self) -> Result<Codewords<'_>> {
        if self.log2_size() > ENUMERATION_LIMIT {
            return Err(Error::SizeGuard {
                log2_size: self.log2_size(),
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(Codewords {
            code: self,
            step: 0,
            end: 1u64 << self.log2_size(),
            cur: Z4Vector::zeros(self.n),
            state: 0,
        })
    }

    /// Fast brute-force pass over all codewords for `n <= 64`, calling `f`
    /// with the two bit planes of each codeword.
    pub(crate) fn for_each_codeword_u64<F: FnMut(u64, u64)>(&self, mut f: F) -> Result<()> {
        if self.log2_size() > ENUMERATION_LIMIT {
            return Err(Error::SizeGuard {
                log2_size: self.log2_size(),
                limit: ENUMERATION_LIMIT,
            });
        }
        assert!(self.n <= 64);
        let steps = gray_steps(self);
        let (mut lo, mut hi) = (0u64, 0u64);
        f(lo, hi);
        let mut state = 0u64;
        for s in 1u64..(1u64 << steps.len()) {
            let j = s.trailing_zeros() as usize;
            state ^= 1 << j;
            let (slo, shi) = steps[j];
            let (blo, bhi) = if state >> j & 1 == 1 { (slo, shi) } else { (slo, shi ^ slo) };
            let carry = lo & blo;
            lo ^= blo;
            hi ^= bhi ^ carry;
            f(lo, hi);
        }
        Ok(())
    }
}

/// Gray-code step generators `x_p`, `2 x_p`, `2 t` as (lo, hi) words.
fn gray_steps(c: &Z4Code) -> Vec<(u64, u64)> {
    c.order4
        .iter()
        .map(|x| (x.lo().as_u64(), x.hi().as_u64()))
        .chain(c.order4.iter().map(|x| (0, x.lo().as_u64())))
        .chain(c.order2_rows().iter().map(|t| (0, t.as_u64())))
        .collect()
}

impl fmt::Debug for Z4Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Z4Code n={} k1={} k2={}", self.n, self.k1(), self.k2())?;
        for g in self.canonical_generators() {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Codeword iterator: a binary Gray code over the `2 k1 + k2` digits of
/// `sum a_p x_p + sum b_p 2 x_p + sum c_q 2 t_q`, so each step adds or
/// subtracts a single generator.
pub struct Codewords<'a> {
    code: &'a Z4Code,
    step: u64,
    end: u64,
    cur: Z4Vector,
    state: u64,
}

impl Iterator for Codewords<'_> {
    type Item = Z4Vector;

    fn next(&mut self) -> Option<Z4Vector> {
        if self.step == self.end {
            return None;
        }
        if self.step > 0 {
            let j = self.step.trailing_zeros() as usize;
            self.state ^= 1 << j;
            let k1 = self.code.k1();
            let g = if j < k1 {
                self.code.order4[j].clone()
            } else if j < 2 * k1 {
                Z4Vector::twice(self.code.order4[j - k1].lo())
            } else {
                Z4Vector::twice(&self.code.order2_rows()[j - 2 * k1])
            };
            if self.state >> j & 1 == 1 {
                self.cur.add_assign(&g);
            } else {
                self.cur = self.cur.sub(&g);
            }
        }
        self.step += 1;
        Some(self.cur.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.step) as usize;
        (r, Some(r))
    }
}

/// Rows extending a basis of `c` to a basis of its dual, chosen greedily from
/// the rref of the dual.
pub(crate) fn dual_complement(c: &BinaryCode) -> Vec<BitVector> {
    let mut span = c.basis().clone();
    let mut rank = c.dim();
    let mut out = Vec::new();
    for d in c.dual().basis().rows() {
        span.push_row(d.clone());
        let r = span.rank();
        if r > rank {
            rank = r;
            out.push(d.clone());
        } else {
            span = BitMatrix::from_rows(span.ncols(), span.rows()[..span.nrows() - 1].to_vec());
        }
    }
    out
}

/// Writes generator rows in the `.z4m` text format (no spaces).
pub fn write_z4m(rows: &[Z4Vector]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    fn v(s: &str) -> Z4Vector {
        Z4Vector::from_digits(&s.bytes().map(|b| b - b'0').collect::<Vec<_>>())
    }

    #[test]
    fn single_two() {
        let c = Z4Code::standard_form(vec![v("2")], 1).unwrap();
        assert_eq!((c.k1(), c.k2(), c.log2_size()), (0, 1, 1));
        assert_eq!(c.residue().dim(), 0);
        assert_eq!(c.torsion(), &BinaryCode::full(1));
        assert!(c.is_self_dual());
        assert!(!c.is_type_ii());
        let words: Vec<String> = c.codewords().unwrap().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["0", "2"]);
    }

    #[test]
    fn span_of_one_one() {
        let c = Z4Code::standard_form(vec![v("11")], 2).unwrap();
        assert_eq!(c.residue().basis().rows()[0].to_string(), "11");
        assert_eq!(c.torsion(), c.residue());
        let words: HashSet<String> = c.codewords().unwrap().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "11", "22", "33"].map(String::from).into());
    }

    #[test]
    fn relation_feeds_torsion() {
        // 11 + 13 = 20 (mod 4): a relation mod 2 yielding 2*(10)
        let c = Z4Code::standard_form(vec![v("11"), v("13")], 2).unwrap();
        assert_eq!((c.k1(), c.k2()), (1, 1));
        assert_eq!(c.log2_size(), 3);
        assert!(c.contains(&v("20")));
        assert!(c.contains(&v("02")));
        assert!(!c.contains(&v("10")));
        assert_eq!(c.codewords().unwrap().count(), 8);
    }

    #[test]
    fn write_then_format() {
        assert_eq!(write_z4m(&[v("0123"), v("2200")]), "0123\n2200\n");
    }

    fn random_unimodular_mix(gens: &[Z4Vector], seed: u64) -> Vec<Z4Vector> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rows = gens.to_vec();
        for _ in 0..4 * rows.len() {
            let i = rng.random_range(0..rows.len());
            let j = rng.random_range(0..rows.len());
            if i != j {
                let c = rng.random_range(0..4u8);
                let add = rows[j].scale(c);
                rows[i].add_assign(&add);
            } else if rng.random_bool(0.5) {
                rows[i] = rows[i].neg();
            }
        }
        rows.push(rows[0].add(&rows[rows.len() - 1]));
        rows
    }

    #[test]
    fn standard_form_is_canonical_under_row_mixing() {
        let base = vec![v("11110000"), v("00111100"), v("01010110"), v("33331111"), v("22000000")];
        let c = Z4Code::standard_form(base.clone(), 8).unwrap();
        for seed in 0..20 {
            let mixed = Z4Code::standard_form(random_unimodular_mix(&base, seed), 8).unwrap();
            assert_eq!(mixed, c);
            assert_eq!(mixed.canonical_generators(), c.canonical_generators());
        }
    }

    #[test]
    fn enumeration_matches_membership() {
        let base = vec![v("1102"), v("0121"), v("2020")];
        let c = Z4Code::standard_form(base, 4).unwrap();
        let words: HashSet<Z4Vector> = c.codewords().unwrap().collect();
        assert_eq!(words.len() as u64, 1 << c.log2_size());
        let mut all = 0;
        for m in 0..256u32 {
            let y = Z4Vector::from_digits(&(0..4).map(|i| (m >> (2 * i) & 3) as u8).collect::<Vec<_>>());
            assert_eq!(c.contains(&y), words.contains(&y), "{y}");
            all += 1;
        }
        assert_eq!(all, 256);
    }

    #[test]
    fn codeword_streams_agree() {
        let c = Z4Code::standard_form(vec![v("11110000"), v("01230123"), v("00220022")], 8).unwrap();
        let mut fast = Vec::new();
        c.for_each_codeword_u64(|lo, hi| fast.push((lo, hi))).unwrap();
        let slow: Vec<(u64, u64)> = c
            .codewords()
            .unwrap()
            .map(|w| (w.lo().as_u64(), w.hi().as_u64()))
            .collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn complete_self_dual_rejects_bad_input() {
        let too_many = vec![v("1100"), v("0110"), v("0011")];
        assert!(matches!(Z4Code::complete_self_dual(too_many, 4), Err(Error::Inconsistent(_))));
        let not_orth = vec![v("1000")];
        assert!(Z4Code::complete_self_dual(not_orth, 4).is_err());
    }

    #[test]
    fn octacode_like_completion() {
        // the octacode
        let rows = vec![v("10003121"), v("01001231"), v("00103332"), v("00012311")];
        let c = Z4Code::complete_self_dual(rows, 8).unwrap();
        assert_eq!(c.log2_size(), 8);
        assert!(c.is_self_dual());
        assert!(c.is_type_ii());
        assert_eq!(c.torsion(), &c.residue().dual());
        assert!(c
            .codewords()
            .unwrap()
            .all(|w| w.euclidean_weight() % 8 == 0));
    }
}

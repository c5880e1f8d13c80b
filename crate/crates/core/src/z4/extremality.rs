//! Minimum-weight certification for Type II codes without enumerating all
//! codewords.
//!
//! Codewords over a fixed residue word `c0` with support `S` form the coset
//! `x0 + 2T` of the torsion code `T`. On `S` every entry is odd; off `S`
//! the entries are `0` or `2`, and the positions holding `2` are
//! `p + t` restricted to the complement of `S`, where `p` is the 2-pattern
//! of the lift `x0`. So with `w = wt(c0)`:
//!
//! * Euclidean weight is `w + 4 n2`,
//! * Lee weight is `w + 2 n2`,
//! * `n2` ranges over the weights of the coset `p + T|S^c`.
//!
//! Membership in `T|S^c` is a syndrome test. For a self-dual code `T` is the
//! dual of the residue, so a generator matrix `G` of the residue is a parity
//! check of `T`; a vector `y` on `S^c` lies in `p + T|S^c` iff
//! `G_{S^c} (y + p)` falls in the column span of `G_S`. Reducing all
//! syndromes modulo that span turns each query into "which `r` reduced
//! columns XOR to the reduced target".

use serde::{Deserialize, Serialize};

use crate::bincodes::{macwilliams, BinaryCode, WeightDistribution, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::z4::{Z4Code, Z4Vector};

/// Largest length handled by the decomposition checker.
pub const MAX_DECOMPOSITION_LENGTH: usize = 47;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Decomposition,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityReport {
    pub n: usize,
    pub type_ii: bool,
    /// Minimum Euclidean weight.
    pub d_e: Option<usize>,
    /// Minimum Lee weight.
    pub d_l: Option<usize>,
    /// Minimum Hamming weight.
    pub d_h: Option<usize>,
    pub extremal: bool,
    /// A codeword of Euclidean weight `d_e`, when one was produced.
    pub witness: Option<Z4Vector>,
    pub method: Method,
}

/// `8 floor(n/24) + 8`.
pub fn extremal_bound(n: usize) -> usize {
    8 * (n / 24) + 8
}

impl ExtremalityReport {
    fn not_type_ii(n: usize) -> Self {
        Self {
            n,
            type_ii: false,
            d_e: None,
            d_l: None,
            d_h: None,
            extremal: false,
            witness: None,
            method: Method::Decomposition,
        }
    }
}

/// Basis of a space of syndromes, echelonised by highest bit, remembering
/// which coordinates each vector was built from.
#[derive(Clone, Debug, Default)]
struct SyndromeSpan {
    /// (vector, composition), descending by highest set bit.
    vecs: Vec<(u64, u64)>,
}

impl SyndromeSpan {
    fn reduce_tracked(&self, mut x: u64, mut comp: u64) -> (u64, u64) {
        for &(b, c) in &self.vecs {
            if x ^ b < x {
                x ^= b;
                comp ^= c;
            }
        }
        (x, comp)
    }

    #[inline]
    fn reduce(&self, mut x: u64) -> u64 {
        for &(b, _) in &self.vecs {
            if x ^ b < x {
                x ^= b;
            }
        }
        x
    }

    fn insert(&mut self, v: u64, comp: u64) {
        let (r, c) = self.reduce_tracked(v, comp);
        if r != 0 {
            let at = self.vecs.partition_point(|&(b, _)| b.leading_zeros() < r.leading_zeros());
            self.vecs.insert(at, (r, c));
        }
    }

    fn rank(&self) -> usize {
        self.vecs.len()
    }
}

/// A nonzero residue codeword with the data needed to query its coset.
#[derive(Clone, Debug)]
pub(crate) struct ProfiledWord {
    support: u64,
    coeffs: u64,
    weight: usize,
    span: SyndromeSpan,
    /// Off-support positions and their reduced column syndromes.
    columns: Vec<(u8, u64)>,
}

/// Low-weight residue codewords of a fixed binary code, prepared for coset
/// queries against arbitrary Z4 lifts of its basis.
#[derive(Clone, Debug)]
pub(crate) struct ResidueProfile {
    n: usize,
    basis: Vec<u64>,
    col_syndromes: Vec<u64>,
    /// Syndromes of every byte pattern, per byte of the position mask.
    byte_syndromes: Vec<[u64; 256]>,
    words: Vec<ProfiledWord>,
    residue_distribution: WeightDistribution,
    torsion_distribution: WeightDistribution,
}

impl ResidueProfile {
    /// Profiles all nonzero codewords of weight at most `max_weight` in the
    /// span of `basis` (independent rows, `n <= 64`).
    pub(crate) fn new(basis: &[BitVector], n: usize, max_weight: usize) -> Result<Self> {
        if n > 64 {
            return Err(Error::LengthGuard(n));
        }
        let k = basis.len();
        if k > ENUMERATION_LIMIT {
            return Err(Error::DimensionTooLarge {
                dim: k,
                limit: ENUMERATION_LIMIT,
            });
        }
        let rows: Vec<u64> = basis.iter().map(BitVector::as_u64).collect();
        let col_syndromes: Vec<u64> = (0..n)
            .map(|j| (0..k).fold(0u64, |s, i| s | ((rows[i] >> j) & 1) << i))
            .collect();
        let mut counts = vec![0u64; n + 1];
        let mut words = Vec::new();
        let (mut cur, mut coeffs) = (0u64, 0u64);
        counts[0] = 1;
        for s in 1u64..(1u64 << k) {
            let i = s.trailing_zeros() as usize;
            cur ^= rows[i];
            coeffs ^= 1 << i;
            let w = cur.count_ones() as usize;
            counts[w] += 1;
            if w <= max_weight {
                words.push((w, cur, coeffs));
            }
        }
        words.sort_unstable();
        let words = words
            .into_iter()
            .map(|(weight, support, coeffs)| {
                let mut span = SyndromeSpan::default();
                for j in bits(support) {
                    span.insert(col_syndromes[j], 1 << j);
                }
                let columns = (0..n)
                    .filter(|&j| support >> j & 1 == 0)
                    .map(|j| (j as u8, span.reduce(col_syndromes[j])))
                    .collect();
                ProfiledWord {
                    support,
                    coeffs,
                    weight,
                    span,
                    columns,
                }
            })
            .collect();
        let byte_syndromes = (0..n.div_ceil(8))
            .map(|b| {
                let mut t = [0u64; 256];
                for m in 1..256usize {
                    let low = m.trailing_zeros() as usize;
                    let j = 8 * b + low;
                    t[m] = t[m & (m - 1)] ^ col_syndromes.get(j).copied().unwrap_or(0);
                }
                t
            })
            .collect();
        let residue_distribution = WeightDistribution::from_counts(counts);
        let torsion_distribution = macwilliams(&residue_distribution, k)?;
        Ok(Self {
            n,
            basis: rows,
            col_syndromes,
            byte_syndromes,
            words,
            residue_distribution,
            torsion_distribution,
        })
    }

    pub(crate) fn residue_distribution(&self) -> &WeightDistribution {
        &self.residue_distribution
    }

    pub(crate) fn torsion_distribution(&self) -> &WeightDistribution {
        &self.torsion_distribution
    }

    pub(crate) fn torsion_min_weight(&self) -> usize {
        self.torsion_distribution.min_nonzero_weight().unwrap_or(self.n + 1)
    }

    fn syndrome(&self, mask: u64) -> u64 {
        self.byte_syndromes
            .iter()
            .enumerate()
            .fold(0u64, |s, (b, t)| s ^ t[(mask >> (8 * b)) as usize & 0xff])
    }

    /// Lift of a residue word: the Z4 combination of the basis lifts.
    #[inline]
    fn lift(word: &ProfiledWord, lifts: &[(u64, u64)]) -> (u64, u64) {
        let (mut lo, mut hi) = (0u64, 0u64);
        for i in bits(word.coeffs) {
            let (blo, bhi) = lifts[i];
            let carry = lo & blo;
            lo ^= blo;
            hi ^= bhi ^ carry;
        }
        debug_assert_eq!(lo, word.support);
        (lo, hi)
    }

    /// Reduced coset target of `word` under the given lifts.
    #[inline]
    fn target(&self, word: &ProfiledWord, lifts: &[(u64, u64)]) -> (u64, (u64, u64)) {
        let (lo, hi) = Self::lift(word, lifts);
        let pattern = hi & !lo;
        (word.span.reduce(self.syndrome(pattern)), (lo, hi))
    }

    fn words_of_weight(&self, w: usize) -> &[ProfiledWord] {
        let a = self.words.partition_point(|x| x.weight < w);
        let b = self.words.partition_point(|x| x.weight <= w);
        &self.words[a..b]
    }

    /// Builds the codeword `lift + 2 t` whose off-support 2-positions are
    /// exactly `y`.
    fn codeword_for(&self, word: &ProfiledWord, lift: (u64, u64), y: u64) -> (u64, u64) {
        let (lo, hi) = lift;
        let t_off = y ^ (hi & !lo);
        let (rest, on_support) = word.span.reduce_tracked(self.syndrome(t_off), 0);
        debug_assert_eq!(rest, 0);
        (lo, hi ^ t_off ^ on_support)
    }

    /// Finds a codeword of Euclidean weight 8, if any. `lifts[i]` must be a
    /// Z4 lift of basis row `i`.
    pub(crate) fn find_ew8(&self, lifts: &[(u64, u64)]) -> Option<(u64, u64)> {
        if self.torsion_distribution.get(2) > 0 {
            let t = self.torsion_word(2)?;
            return Some((0, t));
        }
        for word in self.words_of_weight(4) {
            let (s, lift) = self.target(word, lifts);
            if let Some(y) = search(&word.columns, s, 1) {
                return Some(self.codeword_for(word, lift, y));
            }
        }
        for word in self.words_of_weight(8) {
            let (s, lift) = self.target(word, lifts);
            if s == 0 {
                return Some(self.codeword_for(word, lift, 0));
            }
        }
        None
    }

    pub(crate) fn has_ew8(&self, lifts: &[(u64, u64)]) -> bool {
        if self.torsion_distribution.get(2) > 0 {
            return true;
        }
        self.words_of_weight(4).iter().any(|word| {
            let (s, _) = self.target(word, lifts);
            s == 0 || word.columns.iter().any(|&(_, c)| c == s)
        }) || self.words_of_weight(8).iter().any(|word| self.target(word, lifts).0 == 0)
    }

    /// Finds a codeword of Euclidean weight 16 through the residue classes
    /// of weight 0, 4, 8, 12 and 16.
    pub(crate) fn find_ew16(&self, lifts: &[(u64, u64)]) -> Option<(u64, u64)> {
        if self.torsion_distribution.get(4) > 0 {
            if let Some(t) = self.torsion_word(4) {
                return Some((0, t));
            }
        }
        for w in [4, 8, 12, 16] {
            let r = (16 - w) / 4;
            for word in self.words_of_weight(w) {
                let (s, lift) = self.target(word, lifts);
                if let Some(y) = search_exact(&word.columns, s, r) {
                    return Some(self.codeword_for(word, lift, y));
                }
            }
        }
        None
    }

    /// Number of codewords with Euclidean weight `target` in {0, 8, 16}.
    pub(crate) fn count_ew(&self, lifts: &[(u64, u64)], target: usize) -> u64 {
        if target == 0 {
            return 1;
        }
        let mut total = self.torsion_distribution.get(target / 4);
        for w in (4..=target).step_by(4) {
            let r = (target - w) / 4;
            for word in self.words_of_weight(w) {
                let (s, _) = self.target(word, lifts);
                let shift = word.weight - word.span.rank();
                total += count_exact(&word.columns, s, r) << shift;
            }
        }
        total
    }

    /// Exact minimum Lee weight.
    pub(crate) fn min_lee(&self, lifts: &[(u64, u64)]) -> usize {
        let mut best = 2 * self.torsion_min_weight();
        for word in &self.words {
            if word.weight >= best {
                break;
            }
            let (s, _) = self.target(word, lifts);
            let r_max = (best - word.weight - 1) / 2;
            if let Some(y) = search(&word.columns, s, r_max) {
                best = word.weight + 2 * y.count_ones() as usize;
            }
        }
        best
    }

    /// Some torsion codeword of weight exactly `r` (as a position mask).
    fn torsion_word(&self, r: usize) -> Option<u64> {
        let cols: Vec<(u8, u64)> = self.col_syndromes.iter().enumerate().map(|(j, &c)| (j as u8, c)).collect();
        search_exact(&cols, 0, r).filter(|&y| y != 0)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            t
        })
    })
}

/// Smallest set of at most `r_max` columns XORing to `s`, as a position mask.
fn search(cols: &[(u8, u64)], s: u64, r_max: usize) -> Option<u64> {
    (0..=r_max).find_map(|r| search_exact(cols, s, r))
}

fn search_exact(cols: &[(u8, u64)], s: u64, r: usize) -> Option<u64> {
    fn rec(cols: &[(u8, u64)], s: u64, r: usize, mask: u64) -> Option<u64> {
        if r == 0 {
            return (s == 0).then_some(mask);
        }
        if cols.len() < r {
            return None;
        }
        for (i, &(pos, c)) in cols.iter().enumerate().take(cols.len() + 1 - r) {
            if let Some(m) = rec(&cols[i + 1..], s ^ c, r - 1, mask | 1 << pos) {
                return Some(m);
            }
        }
        None
    }
    rec(cols, s, r, 0)
}

/// Number of `r`-subsets of the columns XORing to `s`, `r <= 3`.
fn count_exact(cols: &[(u8, u64)], s: u64, r: usize) -> u64 {
    let m = cols.len();
    match r {
        0 => (s == 0) as u64,
        1 => cols.iter().filter(|&&(_, c)| c == s).count() as u64,
        2 => pairs(cols, s),
        3 => (0..m).map(|a| pairs(&cols[a + 1..], s ^ cols[a].1)).sum(),
        _ => unreachable!("radius above 3"),
    }
}

/// Number of pairs among `cols` XORing to `s`.
fn pairs(cols: &[(u8, u64)], s: u64) -> u64 {
    let mut seen: Vec<u64> = Vec::with_capacity(cols.len());
    let mut n = 0;
    for &(_, c) in cols {
        let t = c ^ s;
        n += seen.iter().filter(|&&x| x == t).count() as u64;
        seen.push(c);
    }
    n
}

fn lifts_of(c: &Z4Code) -> Vec<(u64, u64)> {
    c.order4_rows()
        .iter()
        .map(|x| (x.lo().as_u64(), x.hi().as_u64()))
        .collect()
}

fn vector_from_planes(n: usize, (lo, hi): (u64, u64)) -> Z4Vector {
    Z4Vector::from_planes(BitVector::from_words(n, vec![lo]), BitVector::from_words(n, vec![hi]))
}

fn require_decomposable(c: &Z4Code) -> Result<()> {
    if !c.is_type_ii() {
        return Err(Error::Inconsistent("code is not Type II".into()));
    }
    if c.len() > MAX_DECOMPOSITION_LENGTH {
        return Err(Error::LengthGuard(c.len()));
    }
    Ok(())
}

/// Does the coset `target + T|S^c` contain a word of weight at most
/// `radius`? `excluded` is `S` (0-based, any order); `target` lives on the
/// complement of `S` with coordinates in increasing order.
pub fn coset_distance_le(torsion: &BinaryCode, excluded: &[usize], target: &BitVector, radius: usize) -> Result<bool> {
    if radius > 3 {
        return Err(Error::RadiusTooLarge(radius));
    }
    let n = torsion.len();
    if n > 64 {
        return Err(Error::LengthGuard(n));
    }
    let mut in_s = vec![false; n];
    for &j in excluded {
        if j >= n {
            return Err(Error::LengthMismatch { expected: n, got: j + 1 });
        }
        in_s[j] = true;
    }
    let complement: Vec<usize> = (0..n).filter(|&j| !in_s[j]).collect();
    if target.len() != complement.len() {
        return Err(Error::LengthMismatch {
            expected: complement.len(),
            got: target.len(),
        });
    }
    let checks: Vec<u64> = torsion.dual().basis().rows().iter().map(BitVector::as_u64).collect();
    let col = |j: usize| {
        checks
            .iter()
            .enumerate()
            .fold(0u64, |s, (i, &r)| s | ((r >> j) & 1) << i)
    };
    let mut span = SyndromeSpan::default();
    for j in (0..n).filter(|&j| in_s[j]) {
        span.insert(col(j), 0);
    }
    let s = span.reduce(target.support().fold(0, |acc, t| acc ^ col(complement[t])));
    let cols: Vec<(u8, u64)> = complement.iter().map(|&j| (j as u8, span.reduce(col(j)))).collect();
    Ok(search(&cols, s, radius).is_some())
}

/// Certified minimum Euclidean, Lee and Hamming weights and the
/// extremality verdict.
pub fn extremality(c: &Z4Code) -> Result<ExtremalityReport> {
    let n = c.len();
    if !c.is_type_ii() {
        return Ok(ExtremalityReport::not_type_ii(n));
    }
    if n > MAX_DECOMPOSITION_LENGTH {
        if c.log2_size() <= ENUMERATION_LIMIT {
            let b = brute_force_minima(c)?;
            return Ok(ExtremalityReport {
                n,
                type_ii: true,
                d_e: Some(b.d_e),
                d_l: Some(b.d_l),
                d_h: Some(b.d_h),
                extremal: b.d_e == extremal_bound(n),
                witness: b.witness,
                method: Method::BruteForce,
            });
        }
        return Err(Error::LengthGuard(n));
    }
    let profile = ResidueProfile::new(c.residue().basis().rows(), n, 16)?;
    let lifts = lifts_of(c);
    let (d_e, witness) = match profile.find_ew8(&lifts) {
        Some(x) => (8, Some(x)),
        // Type II weights are multiples of 8 and the bound caps d_E at 16 here.
        None => (16, profile.find_ew16(&lifts)),
    };
    let witness = witness.map(|x| vector_from_planes(n, x));
    debug_assert!(witness.as_ref().is_none_or(|w| w.euclidean_weight() == d_e && c.contains(w)));
    Ok(ExtremalityReport {
        n,
        type_ii: true,
        d_e: Some(d_e),
        d_l: Some(profile.min_lee(&lifts)),
        // Nonzero residue words weigh at least d(residue) >= d(torsion), and
        // 2t has Hamming weight wt(t).
        d_h: Some(profile.torsion_min_weight()),
        extremal: d_e == extremal_bound(n),
        witness,
        method: Method::Decomposition,
    })
}

/// Number of codewords of Euclidean weight `target`, one of 0, 8 or 16.
pub fn count_words_euclidean(c: &Z4Code, target: usize) -> Result<u64> {
    require_decomposable(c)?;
    if !matches!(target, 0 | 8 | 16) {
        return Err(Error::Inconsistent(format!("target {target} is not one of 0, 8, 16")));
    }
    let profile = ResidueProfile::new(c.residue().basis().rows(), c.len(), target)?;
    Ok(profile.count_ew(&lifts_of(c), target))
}

/// Invariants preserved by monomial equivalence. Equal fingerprints are
/// necessary for equivalence, not sufficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub residue: WeightDistribution,
    pub torsion: WeightDistribution,
    /// Number of codewords of Euclidean weight 16.
    pub ew16: u64,
}

pub fn fingerprint(c: &Z4Code) -> Result<Fingerprint> {
    require_decomposable(c)?;
    let profile = ResidueProfile::new(c.residue().basis().rows(), c.len(), 16)?;
    Ok(Fingerprint {
        n: c.len(),
        k1: c.k1(),
        k2: c.k2(),
        residue: profile.residue_distribution().clone(),
        torsion: profile.torsion_distribution().clone(),
        ew16: profile.count_ew(&lifts_of(c), 16),
    })
}

impl ResidueProfile {
    pub(crate) fn fingerprint_with(&self, lifts: &[(u64, u64)], k2: usize) -> Fingerprint {
        Fingerprint {
            n: self.n,
            k1: self.basis.len(),
            k2,
            residue: self.residue_distribution.clone(),
            torsion: self.torsion_distribution.clone(),
            ew16: self.count_ew(lifts, 16),
        }
    }
}

/// Minima found by visiting every codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceMinima {
    pub d_e: usize,
    pub d_l: usize,
    pub d_h: usize,
    pub witness: Option<Z4Vector>,
    /// Codeword counts indexed by Euclidean weight.
    pub euclidean: Vec<u64>,
}

/// Enumerates all codewords (at most 2^28) and records the minima over the
/// nonzero ones. The zero code reports `4n + 1`, `2n + 1`, `n + 1`.
pub fn brute_force_minima(c: &Z4Code) -> Result<BruteForceMinima> {
    let n = c.len();
    let mut eu = vec![0u64; 4 * n + 1];
    let (mut d_l, mut d_h) = (2 * n + 1, n + 1);
    let mut best: Option<(usize, Z4Vector)> = None;
    let mut visit = |lo: &BitVector, hi: &BitVector, zero: bool| {
        let odd = lo.weight();
        let twos = hi.weight() - lo.and(hi).weight();
        let e = odd + 4 * twos;
        eu[e] += 1;
        if !zero {
            d_l = d_l.min(odd + 2 * twos);
            d_h = d_h.min(odd + twos);
            if best.as_ref().is_none_or(|(b, _)| e < *b) {
                best = Some((e, Z4Vector::from_planes(lo.clone(), hi.clone())));
            }
        }
    };
    if n <= 64 {
        let mut eu64 = vec![0u64; 4 * n + 1];
        let (mut l, mut h, mut e_min, mut w) = (2 * n + 1, n + 1, 4 * n + 1, (0u64, 0u64));
        let mut first = true;
        c.for_each_codeword_u64(|lo, hi| {
            let odd = lo.count_ones() as usize;
            let twos = (hi & !lo).count_ones() as usize;
            let e = odd + 4 * twos;
            eu64[e] += 1;
            if first {
                first = false;
                return;
            }
            l = l.min(odd + 2 * twos);
            h = h.min(odd + twos);
            if e < e_min {
                e_min = e;
                w = (lo, hi);
            }
        })?;
        return Ok(BruteForceMinima {
            d_e: e_min,
            d_l: l,
            d_h: h,
            witness: (e_min <= 4 * n).then(|| vector_from_planes(n, w)),
            euclidean: eu64,
        });
    }
    let mut zero = true;
    for w in c.codewords()? {
        visit(w.lo(), w.hi(), zero);
        zero = false;
    }
    let (d_e, witness) = match best {
        Some((e, w)) => (e, Some(w)),
        None => (4 * n + 1, None),
    };
    Ok(BruteForceMinima {
        d_e,
        d_l,
        d_h,
        witness,
        euclidean: eu,
    })
}

fn brute_distribution(c: &Z4Code, len: usize, weight: impl Fn(&Z4Vector) -> usize) -> Result<WeightDistribution> {
    let mut counts = vec![0u64; len + 1];
    for w in c.codewords()? {
        counts[weight(&w)] += 1;
    }
    Ok(WeightDistribution::from_counts(counts))
}

/// Counts by Euclidean weight `0..=4n`, by enumeration.
pub fn euclidean_distribution(c: &Z4Code) -> Result<WeightDistribution> {
    brute_distribution(c, 4 * c.len(), Z4Vector::euclidean_weight)
}

/// Counts by Lee weight `0..=2n`, by enumeration.
pub fn lee_distribution(c: &Z4Code) -> Result<WeightDistribution> {
    brute_distribution(c, 2 * c.len(), Z4Vector::lee_weight)
}

/// Counts by Hamming weight `0..=n`, by enumeration.
pub fn hamming_distribution(c: &Z4Code) -> Result<WeightDistribution> {
    brute_distribution(c, c.len(), Z4Vector::hamming_weight)
}

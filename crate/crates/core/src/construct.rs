//! Type II codes with a prescribed residue.
//!
//! A doubly even code `C1` of dimension `k` containing the all-ones vector is
//! brought into the frame `G1 = (A | I~)`, where the `I~` columns are the
//! rref pivots of `C1`, the first row is all-ones and rows `2..k` are the
//! remaining rref rows. Every Type II code with residue `C1` is generated by
//! the rows `(A | I~ + 2B)` together with `2D`, `D` completing `G1` to a
//! basis of the dual, for exactly one binary `k x k` matrix `B` from a set
//! of `2^(1 + k(k-1)/2)`.
//!
//! Writing `c_ij` for half the overlap of residue rows `i` and `j` and `e_j`
//! for `wt(row j)/4`, the conditions on `B` are (rows and columns 1-based):
//!
//! * row `j >= 2` has Euclidean weight divisible by 8 iff
//!   `sum_{l != j} b_jl = e_j`;
//! * rows `2 <= i < j` are orthogonal iff `b_ij + b_ji = c_ij`;
//! * row 1 and row `j >= 2` are orthogonal iff
//!   `b_jj + e_j + b_1j = c_1j`.
//!
//! Row 1 itself imposes nothing, since its Euclidean weight is `n`. The whole
//! first row of `B` and the strict upper triangle of rows `2..k` are free;
//! the lower triangle, column 1 and the diagonal are then forced. Setting the
//! first row to zero selects the codes that contain the all-ones vector.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bincodes::BinaryCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::z4::{dual_complement, extremality, Fingerprint, ResidueProfile, Z4Code, Z4Vector};

/// Largest free-bit count swept exhaustively.
pub const EXHAUSTIVE_BITS: usize = 21;

/// Random candidates tried by [`lemma3_extend`] when the space is too large
/// to sweep.
pub const DEFAULT_RANDOM_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// All `2^(1 + k(k-1)/2)` completions.
    Free,
    /// First row of `B` zero: the `2^((k-1)(k-2)/2)` codes containing the
    /// all-ones vector.
    AllOnes,
}

impl Mode {
    pub fn bit_count(self, k: usize) -> usize {
        match self {
            Mode::Free if k == 0 => 0,
            Mode::Free => 1 + k * (k - 1) / 2,
            Mode::AllOnes if k < 2 => 0,
            Mode::AllOnes => (k - 1) * (k - 2) / 2,
        }
    }
}

/// Free entries of `B`, ordered as: in free mode `b_11` first, then the strict
/// upper triangle row by row starting from row 1; in all-ones mode the strict
/// upper triangle of rows `2..k` only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeBits {
    mode: Mode,
    k: usize,
    bits: BitVector,
}

impl FreeBits {
    pub fn new(k: usize, mode: Mode, bits: BitVector) -> Result<Self> {
        let want = mode.bit_count(k);
        if bits.len() != want {
            return Err(Error::LengthMismatch {
                expected: want,
                got: bits.len(),
            });
        }
        Ok(Self { mode, k, bits })
    }

    pub fn zeros(k: usize, mode: Mode) -> Self {
        Self {
            mode,
            k,
            bits: BitVector::zeros(mode.bit_count(k)),
        }
    }

    /// Bit `t` of `index` becomes free bit `t`.
    pub fn from_index(k: usize, mode: Mode, index: u64) -> Result<Self> {
        let len = mode.bit_count(k);
        if len < 64 && index >> len != 0 {
            return Err(Error::Inconsistent(format!("index {index} needs more than {len} bits")));
        }
        Ok(Self {
            mode,
            k,
            bits: BitVector::from_words(len, vec![index; len.div_ceil(64).min(1)]),
        })
    }

    pub fn random<R: Rng>(k: usize, mode: Mode, rng: &mut R) -> Self {
        let len = mode.bit_count(k);
        let words = (0..len.div_ceil(64)).map(|_| rng.random()).collect();
        Self {
            mode,
            k,
            bits: BitVector::from_words(len, words),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    /// The free bits read as an integer, if they fit.
    pub fn index(&self) -> Option<u64> {
        (self.bits.len() <= 64).then(|| self.bits.words().first().copied().unwrap_or(0))
    }

    /// Numeric order with free bit 0 least significant.
    fn numeric_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits.words().iter().rev().cmp(other.bits.words().iter().rev())
    }
}

/// Lexicographically least free bits, comparing from the last free bit down.
impl Ord for FreeBits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.mode as u8, self.k)
            .cmp(&(other.mode as u8, other.k))
            .then_with(|| self.numeric_cmp(other))
    }
}

impl PartialOrd for FreeBits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A residue code brought into the `(A | I~)` shape.
#[derive(Clone, Debug)]
pub struct ConstructionFrame {
    c1: BinaryCode,
    n: usize,
    /// Rows of `G1` in original coordinates; row 0 is all-ones.
    rows: Vec<BitVector>,
    /// Original coordinates of the `I~` columns.
    pivots: Vec<usize>,
    perm: Vec<usize>,
    d_block: BitMatrix,
    /// `c_ij` over 0-based rows.
    half_overlap: Vec<Vec<bool>>,
    /// `wt(row j)/4 mod 2`.
    quarter_weight: Vec<bool>,
}

/// Checks doubly-evenness and the all-ones vector, then builds the frame.
pub fn make_frame(c1: &BinaryCode) -> Result<ConstructionFrame> {
    let n = c1.len();
    let k = c1.dim();
    let mut problems = Vec::new();
    if !n.is_multiple_of(8) {
        problems.push(format!("length {n} is not divisible by 8"));
    }
    if !c1.is_doubly_even() {
        problems.push("code is not doubly even".to_string());
    }
    if !c1.contains_all_ones() {
        problems.push("code does not contain the all-ones vector".to_string());
    }
    if 2 * k > n {
        problems.push(format!("dimension {k} exceeds n/2"));
    }
    if !problems.is_empty() {
        return Err(Error::NotAdmissible(problems.join("; ")));
    }
    let pivots = c1.pivots().to_vec();
    let mut rows = c1.basis().rows().to_vec();
    rows[0] = BitVector::ones(n);
    let mut perm: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    perm.extend(&pivots);
    let d_block = BitMatrix::from_rows(n, dual_complement(c1));
    ConstructionFrame::assemble(c1.clone(), rows, pivots, perm, d_block)
}

impl ConstructionFrame {
    fn assemble(c1: BinaryCode, rows: Vec<BitVector>, pivots: Vec<usize>, perm: Vec<usize>, d_block: BitMatrix) -> Result<Self> {
        let n = c1.len();
        let k = rows.len();
        let mut half_overlap = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                let o = rows[i].overlap(&rows[j]);
                if !o.is_multiple_of(2) {
                    return Err(Error::Inconsistent("residue rows are not orthogonal".into()));
                }
                half_overlap[i][j] = (o / 2) % 2 == 1;
            }
        }
        let quarter_weight = rows.iter().map(|r| (r.weight() / 4) % 2 == 1).collect();
        Ok(Self {
            c1,
            n,
            rows,
            pivots,
            perm,
            d_block,
            half_overlap,
            quarter_weight,
        })
    }

    /// Same frame with a different completion `D` of `G1` to the dual.
    pub fn with_d_block(&self, d: BitMatrix) -> Result<Self> {
        let dual = self.c1.dual();
        let mut all = BitMatrix::from_rows(self.n, self.rows.clone());
        for r in d.rows() {
            if r.len() != self.n || !dual.contains(r) {
                return Err(Error::Inconsistent("D row is not in the dual of the residue".into()));
            }
            all.push_row(r.clone());
        }
        if all.rank() != dual.dim() || d.nrows() != dual.dim() - self.k() {
            return Err(Error::Inconsistent("G1 and D do not form a basis of the dual".into()));
        }
        Self::assemble(self.c1.clone(), self.rows.clone(), self.pivots.clone(), self.perm.clone(), d)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn residue(&self) -> &BinaryCode {
        &self.c1
    }

    /// Column order `A` columns then `I~` columns.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `G1` in original coordinates.
    pub fn g1_rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// The `A` block, columns in frame order.
    pub fn a_block(&self) -> BitMatrix {
        let cols = &self.perm[..self.n - self.k()];
        BitMatrix::from_rows(self.n, self.rows.clone()).select_columns(cols)
    }

    pub fn d_block(&self) -> &BitMatrix {
        &self.d_block
    }

    pub fn bit_count(&self, mode: Mode) -> usize {
        mode.bit_count(self.k())
    }

    /// Rows of `B` as bit masks (bit `l` is column `l`), requires `k <= 64`.
    fn complete_rows(&self, fb: &FreeBits) -> Vec<u64> {
        let k = self.k();
        let mut b = vec![0u64; k];
        let mut bits = fb.bits.support().peekable();
        let mut t = 0usize;
        let mut next = |b: &mut u64, col: usize| {
            if bits.peek() == Some(&t) {
                bits.next();
                *b |= 1 << col;
            }
            t += 1;
        };
        if fb.mode == Mode::Free && k > 0 {
            next(&mut b[0], 0);
            for l in 1..k {
                next(&mut b[0], l);
            }
        }
        for (i, row) in b.iter_mut().enumerate().skip(1) {
            for l in i + 1..k {
                next(row, l);
            }
        }
        for j in 1..k {
            for i in 1..j {
                let v = (b[i] >> j & 1 == 1) ^ self.half_overlap[i][j];
                b[j] |= (v as u64) << i;
            }
            let others = (b[j] & !(1u64 << j) & !1).count_ones() % 2 == 1;
            let col1 = others ^ self.quarter_weight[j];
            b[j] |= col1 as u64;
            let diag = self.half_overlap[0][j] ^ self.quarter_weight[j] ^ (b[0] >> j & 1 == 1);
            b[j] |= (diag as u64) << j;
        }
        b
    }

    /// Solves the forced entries of `B` around the free bits.
    pub fn complete_b(&self, fb: &FreeBits) -> Result<BitMatrix> {
        let k = self.k();
        if fb.k != k {
            return Err(Error::LengthMismatch { expected: k, got: fb.k });
        }
        if k > 64 {
            return Err(Error::DimensionTooLarge { dim: k, limit: 64 });
        }
        let rows = self.complete_rows(fb);
        Ok(BitMatrix::from_rows(
            k,
            rows.into_iter().map(|r| BitVector::from_words(k, vec![r])).collect(),
        ))
    }

    /// The order-4 rows `(A | I~ + 2B)` in original coordinates.
    pub fn upper_rows(&self, b: &BitMatrix) -> Result<Vec<Z4Vector>> {
        let k = self.k();
        if b.nrows() != k || b.ncols() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: b.nrows(),
            });
        }
        Ok(self
            .rows
            .iter()
            .zip(b.rows())
            .map(|(r, brow)| {
                let hi = BitVector::from_support(self.n, brow.support().map(|l| self.pivots[l]));
                Z4Vector::from_planes(r.clone(), hi)
            })
            .collect())
    }

    /// Generator rows `(A | I~ + 2B ; 2D)` in original coordinates.
    pub fn generator_rows(&self, b: &BitMatrix) -> Result<Vec<Z4Vector>> {
        let mut gens = self.upper_rows(b)?;
        gens.extend(self.d_block.rows().iter().map(Z4Vector::twice));
        Ok(gens)
    }

    pub fn build_code(&self, b: &BitMatrix) -> Result<Z4Code> {
        Z4Code::standard_form(self.generator_rows(b)?, self.n)
    }

    /// `(lo, hi)` words of the order-4 rows, for `n <= 64`.
    fn lifts(&self, b: &[u64]) -> Vec<(u64, u64)> {
        self.rows
            .iter()
            .zip(b)
            .map(|(r, &brow)| {
                let hi = bits_of(brow).fold(0u64, |h, l| h | 1 << self.pivots[l]);
                (r.as_u64(), hi)
            })
            .collect()
    }
}

fn bits_of(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            t
        })
    })
}

/// Self-orthogonality mod 4 and Euclidean weights of the order-4 rows. The
/// `2D` rows are orthogonal to everything by the choice of `D`.
fn lifts_are_type_ii(lifts: &[(u64, u64)]) -> bool {
    lifts.iter().enumerate().all(|(i, &(lo, hi))| {
        let ew = lo.count_ones() + 4 * (hi & !lo).count_ones();
        ew % 8 == 0
            && lifts[i + 1..].iter().all(|&(lo2, hi2)| {
                let d = (lo & lo2).count_ones() + 2 * ((lo & hi2).count_ones() + (hi & lo2).count_ones());
                d % 4 == 0
            })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Search {
    Exhaustive,
    Random { seed: u64, limit: u64 },
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub mode: Mode,
    pub search: Search,
    pub workers: usize,
    /// How many extremal free-bit vectors to keep (the least ones).
    pub collect: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            mode: Mode::AllOnes,
            search: Search::Exhaustive,
            workers: default_workers(),
            collect: 0,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintClass {
    pub fingerprint: Fingerprint,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub search: Search,
    pub workers: usize,
    pub n_candidates: u64,
    pub n_type_ii: u64,
    pub n_extremal: u64,
    pub fingerprint_classes: Vec<FingerprintClass>,
    /// Least extremal free bits, as a 0/1 string.
    pub representative: Option<String>,
    #[serde(skip)]
    pub collected: Vec<FreeBits>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Default)]
struct Tally {
    candidates: u64,
    type_ii: u64,
    extremal: u64,
    classes: BTreeMap<Fingerprint, u64>,
    hits: Vec<FreeBits>,
    best: Option<FreeBits>,
}

impl Tally {
    fn merge(mut self, other: Tally, keep: usize) -> Tally {
        self.candidates += other.candidates;
        self.type_ii += other.type_ii;
        self.extremal += other.extremal;
        for (f, c) in other.classes {
            *self.classes.entry(f).or_default() += c;
        }
        self.hits.extend(other.hits);
        self.hits.sort();
        self.hits.dedup();
        self.hits.truncate(keep);
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Frame data shared by all candidate checks.
struct Checker<'a> {
    frame: &'a ConstructionFrame,
    profile: ResidueProfile,
    k2: usize,
}

impl<'a> Checker<'a> {
    fn new(frame: &'a ConstructionFrame) -> Result<Self> {
        if frame.n > 64 {
            return Err(Error::LengthGuard(frame.n));
        }
        if frame.n > crate::z4::MAX_DECOMPOSITION_LENGTH {
            return Err(Error::LengthGuard(frame.n));
        }
        Ok(Self {
            frame,
            profile: ResidueProfile::new(&frame.rows, frame.n, 16)?,
            k2: frame.n - 2 * frame.k(),
        })
    }

    /// (Type II, extremal, lifts).
    fn check(&self, fb: &FreeBits) -> (bool, bool, Vec<(u64, u64)>) {
        let lifts = self.frame.lifts(&self.frame.complete_rows(fb));
        let type_ii = lifts_are_type_ii(&lifts);
        // Below length 24 the bound is 8, which every nonzero Type II word meets.
        let extremal = type_ii && (self.frame.n < 24 || !self.profile.has_ew8(&lifts));
        (type_ii, extremal, lifts)
    }

    fn tally(&self, fb: FreeBits, t: &mut Tally, keep: usize) {
        let (type_ii, extremal, lifts) = self.check(&fb);
        t.candidates += 1;
        t.type_ii += type_ii as u64;
        if extremal {
            t.extremal += 1;
            *t.classes.entry(self.profile.fingerprint_with(&lifts, self.k2)).or_default() += 1;
            if t.best.as_ref().is_none_or(|b| fb < *b) {
                t.best = Some(fb.clone());
            }
            let at = t.hits.binary_search(&fb).unwrap_or_else(|e| e);
            if at < keep {
                t.hits.insert(at, fb);
                t.hits.truncate(keep);
            }
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Sweeps (or samples) completions of the frame and tallies Type II and
/// extremal candidates together with fingerprint classes of the extremal
/// ones. The report does not depend on scheduling; in random mode it depends
/// on the worker count, which is recorded.
pub fn census(frame: &ConstructionFrame, config: &CensusConfig) -> Result<CensusReport> {
    let start = Instant::now();
    let k = frame.k();
    let bits = config.mode.bit_count(k);
    let checker = Checker::new(frame)?;
    let keep = config.collect;
    let workers = config.workers.max(1);
    let tally = pool(workers)?.install(|| -> Result<Tally> {
        match config.search {
            Search::Exhaustive => {
                if bits > EXHAUSTIVE_BITS {
                    return Err(Error::Inconsistent(format!(
                        "{bits} free bits exceed the exhaustive limit of {EXHAUSTIVE_BITS}"
                    )));
                }
                let total = 1u64 << bits;
                let chunk = (total / (64 * workers as u64)).max(1);
                Ok((0..total.div_ceil(chunk))
                    .into_par_iter()
                    .map(|c| {
                        let mut t = Tally::default();
                        for idx in c * chunk..((c + 1) * chunk).min(total) {
                            let fb = FreeBits::from_index(k, config.mode, idx).expect("index in range");
                            checker.tally(fb, &mut t, keep);
                        }
                        t
                    })
                    .reduce(Tally::default, |a, b| a.merge(b, keep)))
            }
            Search::Random { seed, limit } => {
                let per = limit / workers as u64;
                let extra = limit % workers as u64;
                Ok((0..workers)
                    .into_par_iter()
                    .map(|w| {
                        let mut rng = worker_rng(seed, w);
                        let mut t = Tally::default();
                        for _ in 0..per + ((w as u64) < extra) as u64 {
                            checker.tally(FreeBits::random(k, config.mode, &mut rng), &mut t, keep);
                        }
                        t
                    })
                    .reduce(Tally::default, |a, b| a.merge(b, keep)))
            }
        }
    })?;
    Ok(CensusReport {
        n: frame.n,
        k,
        mode: config.mode,
        search: config.search,
        workers,
        n_candidates: tally.candidates,
        n_type_ii: tally.type_ii,
        n_extremal: tally.extremal,
        fingerprint_classes: tally
            .classes
            .into_iter()
            .map(|(fingerprint, count)| FingerprintClass { fingerprint, count })
            .collect(),
        representative: tally.best.map(|b| b.bits.to_string()),
        collected: tally.hits,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug)]
pub struct ExtendConfig {
    /// Random candidates tried when the space is too large to sweep.
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for ExtendConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_RANDOM_BUDGET,
            seed: 0,
            workers: default_workers(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub code: Z4Code,
    pub frame: ConstructionFrame,
    pub free_bits: FreeBits,
    pub exhaustive: bool,
    /// Candidates examined before the hit was fixed.
    pub candidates: u64,
}

/// Every hypothesis of the weight-4 extension step that `c` and `v` fail.
pub fn lemma3_violations(c: &Z4Code, v: &BitVector) -> Result<Vec<String>> {
    let n = c.len();
    let mut out = Vec::new();
    if v.len() != n {
        out.push(format!("v has length {}, code has length {n}", v.len()));
        return Ok(out);
    }
    if ![24, 32, 40].contains(&n) {
        out.push(format!("length {n} is not one of 24, 32, 40"));
    }
    if v.weight() != 4 {
        out.push(format!("v has weight {}, not 4", v.weight()));
    }
    if c.residue().contains(v) {
        out.push("v already lies in the residue code".to_string());
    } else if !c.residue().extend(v)?.is_doubly_even() {
        out.push("the residue extended by v is not doubly even".to_string());
    }
    if !c.is_type_ii() {
        out.push("code is not Type II".to_string());
    } else if n <= crate::z4::MAX_DECOMPOSITION_LENGTH && !extremality(c)?.extremal {
        out.push("code is not extremal".to_string());
    }
    Ok(out)
}

/// Searches the all-ones completions over `<residue(c), v>` for an extremal
/// code. Exhaustive (and first hit in index order) when the free bits fit
/// [`EXHAUSTIVE_BITS`]; otherwise seeded random rounds, reproducible for a
/// fixed worker count.
pub fn lemma3_extend(c: &Z4Code, v: &BitVector, config: &ExtendConfig) -> Result<Extension> {
    let violations = lemma3_violations(c, v)?;
    if !violations.is_empty() {
        return Err(Error::Hypothesis(violations));
    }
    let frame = make_frame(&c.residue().extend(v)?)?;
    search_extremal(frame, config)
}

/// Finds an extremal all-ones completion over a frame.
pub fn search_extremal(frame: ConstructionFrame, config: &ExtendConfig) -> Result<Extension> {
    const ROUND: u64 = 1 << 12;
    let k = frame.k();
    let bits = Mode::AllOnes.bit_count(k);
    let checker = Checker::new(&frame)?;
    let workers = config.workers.max(1);
    let found = pool(workers)?.install(|| -> Result<(FreeBits, bool, u64)> {
        if bits <= EXHAUSTIVE_BITS {
            let total = 1u64 << bits;
            let mut start = 0u64;
            while start < total {
                let end = (start + ROUND * workers as u64).min(total);
                let hit = (start..end)
                    .into_par_iter()
                    .find_first(|&i| checker.check(&FreeBits::from_index(k, Mode::AllOnes, i).expect("in range")).1);
                if let Some(i) = hit {
                    return Ok((FreeBits::from_index(k, Mode::AllOnes, i)?, true, i + 1));
                }
                start = end;
            }
            return Err(Error::BudgetExhausted { budget: total });
        }
        let mut rngs: Vec<ChaCha8Rng> = (0..workers).map(|w| worker_rng(config.seed, w)).collect();
        let mut tried = 0u64;
        while tried < config.budget {
            let round = ROUND.min((config.budget - tried).div_ceil(workers as u64));
            let hits: Vec<Option<(u64, FreeBits)>> = rngs
                .par_iter_mut()
                .map(|rng| {
                    (0..round).find_map(|i| {
                        let fb = FreeBits::random(k, Mode::AllOnes, rng);
                        checker.check(&fb).1.then_some((i, fb))
                    })
                })
                .collect();
            let best = hits.into_iter().flatten().min_by_key(|(i, _)| *i);
            tried += round * workers as u64;
            if let Some((_, fb)) = best {
                return Ok((fb, false, tried));
            }
        }
        Err(Error::BudgetExhausted { budget: config.budget })
    })?;
    let (free_bits, exhaustive, candidates) = found;
    let code = frame.build_code(&frame.complete_b(&free_bits)?)?;
    Ok(Extension {
        code,
        frame,
        free_bits,
        exhaustive,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincodes::rm15;
    use std::collections::HashSet;

    fn code(n: usize, rows: &[&str]) -> BinaryCode {
        BinaryCode::from_rows(
            n,
            rows.iter()
                .map(|r| BitVector::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
                .collect(),
        )
    }

    fn hamming8() -> BinaryCode {
        code(8, &["11111111", "11110000", "11001100", "10101010"])
    }

    /// Admissible residues of dimension 2..=6.
    fn residues() -> Vec<BinaryCode> {
        let e = ["1111111100000000", "1111000011110000", "1100110011001100", "1010101010101010", "0000000011110000", "0000000011001100"];
        vec![
            code(8, &["11111111", "11110000"]),
            code(8, &["11111111", "11110000", "11001100"]),
            hamming8(),
            code(16, &["1111111111111111", e[0], e[1], e[2], e[3]]),
            code(16, &["1111111111111111", e[0], e[1], e[2], e[3], e[4]]),
        ]
    }

    fn all_codes(frame: &ConstructionFrame, mode: Mode) -> HashSet<Z4Code> {
        let bits = frame.bit_count(mode);
        (0..1u64 << bits)
            .map(|i| {
                let fb = FreeBits::from_index(frame.k(), mode, i).unwrap();
                frame.build_code(&frame.complete_b(&fb).unwrap()).unwrap()
            })
            .collect()
    }

    #[test]
    fn completion_counts_for_small_dimensions() {
        for c1 in residues() {
            let k = c1.dim();
            let frame = make_frame(&c1).unwrap();
            for mode in [Mode::Free, Mode::AllOnes] {
                let codes = all_codes(&frame, mode);
                let want = match mode {
                    Mode::Free => 1usize << (1 + k * (k - 1) / 2),
                    Mode::AllOnes => 1usize << ((k - 1) * (k - 2) / 2),
                };
                assert_eq!(codes.len(), want, "k={k} {mode:?}");
                for c in &codes {
                    assert!(c.is_type_ii(), "k={k}");
                    assert_eq!(c.residue(), &c1);
                    if mode == Mode::AllOnes {
                        assert!(c.contains(&Z4Vector::from_binary(&BitVector::ones(c.len()))));
                    }
                }
            }
        }
    }

    #[test]
    fn all_ones_mode_is_exactly_the_codes_containing_all_ones() {
        let frame = make_frame(&residues()[3]).unwrap();
        let ones = Z4Vector::from_binary(&BitVector::ones(16));
        let free: HashSet<Z4Code> = all_codes(&frame, Mode::Free).into_iter().filter(|c| c.contains(&ones)).collect();
        assert_eq!(free, all_codes(&frame, Mode::AllOnes));
    }

    #[test]
    fn candidate_set_does_not_depend_on_d() {
        for c1 in residues().into_iter().take(3) {
            let frame = make_frame(&c1).unwrap();
            if frame.d_block().nrows() == 0 {
                continue;
            }
            // Shift every D row by the all-ones row and mix the rows.
            let d = frame.d_block().rows();
            let alt: Vec<BitVector> = (0..d.len())
                .map(|i| {
                    let mut r = d[i].xor(&frame.g1_rows()[0]);
                    if i + 1 < d.len() {
                        r.xor_assign(&d[i + 1]);
                    }
                    r
                })
                .collect();
            let other = frame.with_d_block(BitMatrix::from_rows(c1.len(), alt)).unwrap();
            for mode in [Mode::Free, Mode::AllOnes] {
                assert_eq!(all_codes(&frame, mode), all_codes(&other, mode));
            }
        }
    }

    #[test]
    fn frame_shapes() {
        let f = make_frame(&rm15()).unwrap();
        assert_eq!(f.k(), 6);
        assert_eq!((f.a_block().nrows(), f.a_block().ncols()), (6, 26));
        assert!(f.a_block().row(0).weight() == 26);
        assert_eq!(f.d_block().nrows(), 32 - 12);
        let dual = rm15().dual();
        assert!(f.d_block().rows().iter().all(|d| dual.contains(d)));
        let e8 = make_frame(&hamming8()).unwrap();
        assert_eq!((e8.k(), e8.d_block().nrows()), (4, 0));
    }

    #[test]
    fn inadmissible_residues_are_rejected() {
        assert!(matches!(make_frame(&code(8, &["11110000"])), Err(Error::NotAdmissible(_))));
        assert!(matches!(make_frame(&code(8, &["11111111", "11000000"])), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn free_bit_mismatch_is_rejected() {
        let frame = make_frame(&hamming8()).unwrap();
        assert!(frame.complete_b(&FreeBits::zeros(3, Mode::Free)).is_err());
        assert!(FreeBits::new(4, Mode::AllOnes, BitVector::zeros(4)).is_err());
        assert!(FreeBits::from_index(4, Mode::AllOnes, 8).is_err());
    }

    #[test]
    fn census_is_schedule_invariant() {
        let frame = make_frame(&residues()[4]).unwrap();
        let run = |workers, search| {
            let r = census(
                &frame,
                &CensusConfig {
                    mode: Mode::AllOnes,
                    search,
                    workers,
                    collect: 3,
                },
            )
            .unwrap();
            (serde_json::to_string(&r).unwrap().replace(&format!("\"workers\":{workers}"), ""), r.collected)
        };
        assert_eq!(run(1, Search::Exhaustive), run(4, Search::Exhaustive));
        let r = census(&frame, &CensusConfig::default()).unwrap();
        assert_eq!(r.n_candidates, 1 << 10);
        assert_eq!(r.n_type_ii, r.n_candidates);
        assert_eq!(r.n_extremal, r.n_candidates);
        let random = Search::Random { seed: 5, limit: 100 };
        assert_eq!(run(3, random), run(3, random));
        let r = census(&frame, &CensusConfig { search: random, workers: 3, ..CensusConfig::default() }).unwrap();
        assert_eq!(r.n_candidates, 100);
    }

    #[test]
    fn census_extremal_verdicts_match_the_checker() {
        // Census verdicts against the standalone checker, code by code.
        let rows = ["111111111111111111111111", "111111110000000000000000", "000000001111111100000000", "111100001111000011110000", "110011001100110011001100"];
        let c1 = code(24, &rows);
        let frame = make_frame(&c1).unwrap();
        let checker = Checker::new(&frame).unwrap();
        let mut extremal = 0;
        for i in 0..1u64 << frame.bit_count(Mode::AllOnes) {
            let fb = FreeBits::from_index(5, Mode::AllOnes, i).unwrap();
            let c = frame.build_code(&frame.complete_b(&fb).unwrap()).unwrap();
            let (t, e, _) = checker.check(&fb);
            assert!(t);
            assert_eq!(e, extremality(&c).unwrap().extremal);
            extremal += e as u64;
        }
        let r = census(&frame, &CensusConfig::default()).unwrap();
        assert_eq!(r.n_extremal, extremal);
    }

    #[test]
    fn lemma3_hypotheses_are_listed() {
        let frame = make_frame(&hamming8()).unwrap();
        let c = frame.build_code(&frame.complete_b(&FreeBits::zeros(4, Mode::AllOnes)).unwrap()).unwrap();
        let v = BitVector::from_support(8, [0, 1, 2]);
        match lemma3_extend(&c, &v, &ExtendConfig::default()) {
            Err(Error::Hypothesis(list)) => {
                assert!(list.iter().any(|m| m.contains("length 8")));
                assert!(list.iter().any(|m| m.contains("weight 3")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

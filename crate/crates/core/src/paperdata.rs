//! Embedded matrices, support sets and weight tables, with the parsers for
//! the text formats they are stored in.
//!
//! Supports are 1-based, as printed; [`support_vector`] converts them.

use serde::Serialize;

use crate::bincodes::{rm15, BinaryCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::z4::{Z4Code, Z4Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    /// The `A` of a generator matrix `(I_k | A)`.
    FigureMatrixA,
    /// A complete list of generator rows.
    FullGenerator,
    SupportSet,
    TableRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Z4Rows(Vec<Z4Vector>),
    BinaryRows(BitMatrix),
    /// 1-based coordinates.
    Support(Vec<usize>),
    Table(TableRow),
}

/// One row of an extension table: the dimension reached, the 1-based support
/// of the added vector, and the listed `(weight, count)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub index: usize,
    pub support: Vec<usize>,
    pub counts: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedArtifact {
    pub name: String,
    pub kind: ArtifactKind,
    pub payload: Payload,
}

const C32: [&str; 9] = [
    include_str!("../data/c32_07.z4m"),
    include_str!("../data/c32_08.z4m"),
    include_str!("../data/c32_09.z4m"),
    include_str!("../data/c32_10.z4m"),
    include_str!("../data/c32_11.z4m"),
    include_str!("../data/c32_12.z4m"),
    include_str!("../data/c32_13.z4m"),
    include_str!("../data/c32_14.z4m"),
    include_str!("../data/c32_15.z4m"),
];

const C40: [&str; 12] = [
    include_str!("../data/c40_08.z4m"),
    include_str!("../data/c40_09.z4m"),
    include_str!("../data/c40_10.z4m"),
    include_str!("../data/c40_11.z4m"),
    include_str!("../data/c40_12.z4m"),
    include_str!("../data/c40_13.z4m"),
    include_str!("../data/c40_14.z4m"),
    include_str!("../data/c40_15.z4m"),
    include_str!("../data/c40_16.z4m"),
    include_str!("../data/c40_17.z4m"),
    include_str!("../data/c40_18.z4m"),
    include_str!("../data/c40_19.z4m"),
];

const C40_7PRIME: &str = include_str!("../data/c40_7prime.z4m");
const G40: &str = include_str!("../data/g40.z4m");
const RM15: &str = include_str!("../data/rm15.g2m");

/// Extensions of RM(1,5): `(i, supp(v_i), [A_4, A_8, A_12, A_16])`.
pub const TABLE1: [(usize, [usize; 4], [u64; 4]); 9] = [
    (7, [1, 2, 3, 4], [1, 0, 7, 110]),
    (8, [1, 2, 5, 6], [3, 0, 21, 206]),
    (9, [1, 2, 7, 8], [6, 4, 42, 406]),
    (10, [1, 2, 9, 10], [10, 12, 102, 774]),
    (11, [1, 2, 11, 12], [16, 36, 208, 1526]),
    (12, [1, 2, 13, 14], [28, 84, 420, 3030]),
    (13, [1, 2, 17, 18], [36, 196, 924, 5878]),
    (14, [1, 2, 19, 20], [48, 428, 1936, 11558]),
    (15, [1, 2, 21, 22], [72, 892, 3960, 22918]),
];

/// Extensions of the residue of the `G40` code:
/// `(i, supp(w_i), [A_4, A_8, A_12, A_16, A_20])`.
pub const TABLE2: [(usize, [usize; 4], [u64; 5]); 12] = [
    (8, [1, 2, 4, 29], [1, 0, 1, 35, 180]),
    (9, [1, 2, 5, 33], [3, 0, 3, 75, 348]),
    (10, [1, 2, 7, 31], [6, 1, 10, 150, 688]),
    (11, [1, 2, 9, 10], [10, 6, 22, 313, 1344]),
    (12, [1, 2, 11, 17], [15, 21, 48, 634, 2658]),
    (13, [1, 2, 12, 39], [22, 56, 102, 1271, 5288]),
    (14, [1, 2, 13, 27], [29, 99, 280, 2620, 10326]),
    (15, [1, 2, 14, 37], [37, 175, 688, 5296, 20374]),
    (16, [1, 2, 15, 35], [47, 313, 1548, 10694, 40330]),
    (17, [1, 2, 20, 36], [57, 509, 3436, 21698, 79670]),
    (18, [1, 2, 21, 28], [68, 845, 7344, 43826, 157976]),
    (19, [1, 2, 24, 32], [84, 1533, 15184, 87938, 314808]),
];

pub const N32_V: [usize; 8] = [1, 2, 3, 4, 5, 9, 17, 29];
pub const N40_W: [usize; 8] = [4, 8, 13, 22, 23, 34, 36, 39];
pub const C40_7PRIME_V: [usize; 12] = [1, 3, 4, 6, 8, 9, 10, 11, 12, 13, 18, 20];

/// Every name [`load`] accepts.
pub fn registry() -> Vec<String> {
    let mut names: Vec<String> = (7..=15).map(|i| format!("C32_{i}")).collect();
    names.extend((8..=19).map(|i| format!("C40_{i}")));
    names.extend(["C40_7prime", "G40", "RM15"].map(String::from));
    names.extend((7..=15).map(|i| format!("V32_{i}")));
    names.extend((8..=19).map(|i| format!("W40_{i}")));
    names.extend(["N32_V", "N40_W", "C40_7PRIME_V"].map(String::from));
    names.extend((7..=15).map(|i| format!("TABLE1_{i}")));
    names.extend((8..=19).map(|i| format!("TABLE2_{i}")));
    names
}

fn indexed(name: &str, prefix: &str, range: std::ops::RangeInclusive<usize>) -> Option<usize> {
    name.strip_prefix(prefix)?
        .parse::<usize>()
        .ok()
        .filter(|i| range.contains(i))
}

fn table_row(index: usize, support: &[usize], weights: impl Iterator<Item = usize>, counts: &[u64]) -> TableRow {
    TableRow {
        index,
        support: support.to_vec(),
        counts: weights.zip(counts.iter().copied()).collect(),
    }
}

pub fn load(name: &str) -> Result<NamedArtifact> {
    let artifact = |kind, payload| {
        Ok(NamedArtifact {
            name: name.to_string(),
            kind,
            payload,
        })
    };
    let support = |s: &[usize]| artifact(ArtifactKind::SupportSet, Payload::Support(s.to_vec()));
    let figure = |text: &str| {
        parse_z4_matrix(text).and_then(|rows| artifact(ArtifactKind::FigureMatrixA, Payload::Z4Rows(rows)))
    };
    // Names with a numeric suffix share prefixes ("C40_7prime" vs "C40_8"),
    // so exact names go first.
    match name {
        "C40_7prime" => return figure(C40_7PRIME),
        "G40" => return artifact(ArtifactKind::FullGenerator, Payload::Z4Rows(parse_z4_matrix(G40)?)),
        "RM15" => return artifact(ArtifactKind::FullGenerator, Payload::BinaryRows(crate::bincodes::parse_g2m(RM15)?)),
        "N32_V" => return support(&N32_V),
        "N40_W" => return support(&N40_W),
        "C40_7PRIME_V" => return support(&C40_7PRIME_V),
        _ => {}
    }
    if let Some(i) = indexed(name, "C32_", 7..=15) {
        return figure(C32[i - 7]);
    }
    if let Some(i) = indexed(name, "C40_", 8..=19) {
        return figure(C40[i - 8]);
    }
    if let Some(i) = indexed(name, "V32_", 7..=15) {
        return support(&TABLE1[i - 7].1);
    }
    if let Some(i) = indexed(name, "W40_", 8..=19) {
        return support(&TABLE2[i - 8].1);
    }
    if let Some(i) = indexed(name, "TABLE1_", 7..=15) {
        let (idx, s, c) = &TABLE1[i - 7];
        return artifact(ArtifactKind::TableRow, Payload::Table(table_row(*idx, s, (4..).step_by(4), c)));
    }
    if let Some(i) = indexed(name, "TABLE2_", 8..=19) {
        let (idx, s, c) = &TABLE2[i - 8];
        return artifact(ArtifactKind::TableRow, Payload::Table(table_row(*idx, s, (4..).step_by(4), c)));
    }
    Err(Error::UnknownArtifact(name.to_string()))
}

/// Binary vector of length `n` with the given 1-based support.
pub fn support_vector(n: usize, support: &[usize]) -> Result<BitVector> {
    if let Some(&bad) = support.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::Inconsistent(format!("support position {bad} outside 1..={n}")));
    }
    Ok(BitVector::from_support(n, support.iter().map(|s| s - 1)))
}

/// Rows over Z4: `#` comment lines and blank lines skipped, spaces and tabs
/// ignored inside rows, symbols `0`-`3` only.
pub fn parse_z4_matrix(text: &str) -> Result<Vec<Z4Vector>> {
    let mut rows = Vec::new();
    let mut width = None;
    for (ln, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut digits = Vec::with_capacity(line.len());
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0'..='3' => digits.push(ch as u8 - b'0'),
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
            None => width = Some(digits.len()),
            Some(w) if w != digits.len() => {
                return Err(Error::RaggedRows {
                    line: ln + 1,
                    expected: w,
                    got: digits.len(),
                })
            }
            _ => {}
        }
        rows.push(Z4Vector::from_digits(&digits));
    }
    Ok(rows)
}

/// Z4 matrix rows from a named artifact, or an error if it holds something
/// else.
pub fn z4_rows(name: &str) -> Result<Vec<Z4Vector>> {
    match load(name)?.payload {
        Payload::Z4Rows(rows) => Ok(rows),
        _ => Err(Error::Inconsistent(format!("{name} is not a Z4 matrix"))),
    }
}

/// 1-based support from a named artifact.
pub fn support(name: &str) -> Result<Vec<usize>> {
    match load(name)?.payload {
        Payload::Support(s) => Ok(s),
        _ => Err(Error::Inconsistent(format!("{name} is not a support set"))),
    }
}

/// `(I_k | A)` as Z4 rows.
pub fn identity_prefixed(a: &[Z4Vector]) -> Vec<Z4Vector> {
    let k = a.len();
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            let mut digits = vec![0u8; k];
            digits[i] = 1;
            digits.extend(row.digits());
            Z4Vector::from_digits(&digits)
        })
        .collect()
}

/// The self-dual code generated by a figure matrix (`C32_i`, `C40_i`,
/// `C40_7prime`) or by `G40` together with the implied order-2 rows.
pub fn figure_code(name: &str) -> Result<Z4Code> {
    let rows = z4_rows(name)?;
    let upper = if name == "G40" { rows } else { identity_prefixed(&rows) };
    let n = upper.first().map_or(0, Z4Vector::len);
    Z4Code::complete_self_dual(upper, n)
}

/// Names of every figure matrix and `G40`, in display order.
pub fn figure_names() -> Vec<String> {
    let mut names: Vec<String> = (7..=15).map(|i| format!("C32_{i}")).collect();
    names.extend((8..=19).map(|i| format!("C40_{i}")));
    names.push("G40".into());
    names.push("C40_7prime".into());
    names
}

/// Residue dimension claimed for a figure code.
pub fn figure_dimension(name: &str) -> Option<usize> {
    match name {
        "G40" | "C40_7prime" => Some(7),
        _ => indexed(name, "C32_", 7..=15).or_else(|| indexed(name, "C40_", 8..=19)),
    }
}

/// `B_{32,i}`: RM(1,5) extended by `v_7, ..., v_i`, for `6 <= i <= 15`.
pub fn build_b32(i: usize) -> Result<BinaryCode> {
    if !(6..=15).contains(&i) {
        return Err(Error::UnknownArtifact(format!("B32_{i}")));
    }
    let mut b = rm15();
    for (_, s, _) in &TABLE1[..i - 6] {
        b = b.extend(&support_vector(32, s)?)?;
    }
    Ok(b)
}

/// `B_{40,i}`: the residue of the `G40` code extended by `w_8, ..., w_i`,
/// for `7 <= i <= 19`.
pub fn build_b40(i: usize) -> Result<BinaryCode> {
    if !(7..=19).contains(&i) {
        return Err(Error::UnknownArtifact(format!("B40_{i}")));
    }
    let mut b = figure_code("G40")?.residue().clone();
    for (_, s, _) in &TABLE2[..i - 7] {
        b = b.extend(&support_vector(40, s)?)?;
    }
    Ok(b)
}

/// `<RM(1,5), v>` with `supp(v) = N32_V`.
pub fn n32() -> Result<BinaryCode> {
    rm15().extend(&support_vector(32, &N32_V)?)
}

/// `<B_{40,7}, w>` with `supp(w) = N40_W`.
pub fn n40() -> Result<BinaryCode> {
    build_b40(7)?.extend(&support_vector(40, &N40_W)?)
}

/// `<B_{40,7} ∩ <v>^perp, v>` with `supp(v) = C40_7PRIME_V`.
pub fn c40_7prime_residue() -> Result<BinaryCode> {
    let v = support_vector(40, &C40_7PRIME_V)?;
    build_b40(7)?.intersect_hyperplane(&v)?.extend(&v)
}

/// Binary codes by name: `RM15`, `B32_6..B32_15`, `B40_7..B40_19`, `N32`,
/// `N40`, `C40_7PRIME_RESIDUE`.
pub fn binary_code(name: &str) -> Result<BinaryCode> {
    match name {
        "RM15" => Ok(rm15()),
        "N32" => n32(),
        "N40" => n40(),
        "C40_7PRIME_RESIDUE" => c40_7prime_residue(),
        _ => {
            if let Some(i) = indexed(name, "B32_", 6..=15) {
                build_b32(i)
            } else if let Some(i) = indexed(name, "B40_", 7..=19) {
                build_b40(i)
            } else {
                Err(Error::UnknownArtifact(name.to_string()))
            }
        }
    }
}

/// Matrices `M` of codes `(I_16 | M)`, numbered from 1 in document order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExternalList {
    pub entries: Vec<(usize, Vec<Z4Vector>)>,
}

impl ExternalList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The code generated by `(I_16 | M)` for the given entry.
    pub fn code(&self, entry: usize) -> Result<Z4Code> {
        let (_, m) = &self.entries[entry];
        Z4Code::complete_self_dual(identity_prefixed(m), 32)
    }
}

const BLOCK: usize = 16;

/// Splits a document into 16x16 blocks over Z4. Row lines are digit strings
/// of length 16, or of length 32 whose first half is the matching row of
/// `I_16`; spaces inside rows are ignored. Blank lines and label lines are
/// skipped between blocks. A digit-only line of at least 8 symbols that is
/// not a valid row, or a block cut short, is a malformed block.
pub fn parse_external_list(text: &str) -> Result<ExternalList> {
    let mut entries = Vec::new();
    let mut current: Vec<Z4Vector> = Vec::new();
    let malformed = |index: usize, message: String| Error::MalformedBlock { index, message };
    for (ln, line) in text.lines().enumerate() {
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        let digit_only = !compact.is_empty() && compact.bytes().all(|b| b.is_ascii_digit());
        let index = entries.len() + 1;
        if !digit_only || compact.len() < 8 {
            if !current.is_empty() {
                return Err(malformed(index, format!("only {} of 16 rows before line {}", current.len(), ln + 1)));
            }
            continue;
        }
        if compact.bytes().any(|b| b > b'3') {
            return Err(malformed(index, format!("line {}: symbol outside 0..3", ln + 1)));
        }
        let digits: Vec<u8> = compact.bytes().map(|b| b - b'0').collect();
        let r = current.len();
        let row = match digits.len() {
            BLOCK => digits,
            32 if digits[..BLOCK].iter().enumerate().all(|(j, &d)| d == (j == r) as u8) => digits[BLOCK..].to_vec(),
            len => {
                return Err(malformed(index, format!("line {}: row of length {len}", ln + 1)));
            }
        };
        current.push(Z4Vector::from_digits(&row));
        if current.len() == BLOCK {
            entries.push((index, std::mem::take(&mut current)));
        }
    }
    if !current.is_empty() {
        return Err(malformed(entries.len() + 1, format!("only {} of 16 rows at end of input", current.len())));
    }
    Ok(ExternalList { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::z4::write_z4m;

    #[test]
    fn registry_loads_every_name() {
        for name in registry() {
            let a = load(&name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(a.name, name);
        }
        assert_eq!(load("C32_16"), Err(Error::UnknownArtifact("C32_16".into())));
        assert!(load("c32_7").is_err());
    }

    #[test]
    fn figure_shapes() {
        for i in 7..=15 {
            let a = z4_rows(&format!("C32_{i}")).unwrap();
            assert_eq!(a.len(), i);
            assert!(a.iter().all(|r| r.len() == 32 - i));
        }
        for i in 8..=19 {
            let a = z4_rows(&format!("C40_{i}")).unwrap();
            assert_eq!(a.len(), i);
            assert!(a.iter().all(|r| r.len() == 40 - i));
        }
        let p = z4_rows("C40_7prime").unwrap();
        assert_eq!((p.len(), p[0].len()), (7, 33));
        let g = z4_rows("G40").unwrap();
        assert_eq!((g.len(), g[0].len()), (7, 40));
        assert!(g[0].digits().iter().all(|&d| d == 1));
    }

    #[test]
    fn supports() {
        assert_eq!(support("V32_7").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(support("N32_V").unwrap(), vec![1, 2, 3, 4, 5, 9, 17, 29]);
        assert_eq!(support("N40_W").unwrap(), vec![4, 8, 13, 22, 23, 34, 36, 39]);
        assert_eq!(support("W40_19").unwrap(), vec![1, 2, 24, 32]);
        assert!(support("G40").is_err());
        assert!(support_vector(4, &[0]).is_err());
        assert!(support_vector(4, &[5]).is_err());
        assert_eq!(support_vector(4, &[1, 4]).unwrap(), BitVector::from_support(4, [0, 3]));
    }

    #[test]
    fn z4_matrix_parsing() {
        let rows = parse_z4_matrix("13\n20").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].digits(), vec![2, 0]);
        assert!(matches!(parse_z4_matrix("14\n2"), Err(Error::Parse { line: 1, column: 2, .. })));
        assert!(matches!(parse_z4_matrix("13\n2"), Err(Error::RaggedRows { line: 2, .. })));
        assert!(parse_z4_matrix("# c\n\n").unwrap().is_empty());
        let a = z4_rows("C32_7").unwrap();
        assert_eq!((a.len(), a[0].len()), (7, 25));
        assert_eq!(parse_z4_matrix(&write_z4m(&a)).unwrap(), a);
    }

    fn identity_block() -> String {
        (0..16)
            .map(|i| (0..16).map(|j| if i == j { '1' } else { '0' }).collect::<String>() + "\n")
            .collect()
    }

    #[test]
    fn external_list_parsing() {
        let doc = format!("M1:\n{}\nM2\n{}", identity_block(), identity_block());
        let list = parse_external_list(&doc).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.entries[1].0, 2);
        assert!(parse_external_list("").unwrap().is_empty());
        let wide: String = identity_block()
            .lines()
            .zip(identity_block().lines())
            .map(|(a, b)| format!("{a} {b}\n"))
            .collect();
        assert_eq!(parse_external_list(&wide).unwrap().entries[0].1, list.entries[0].1);
        let short: String = identity_block().lines().take(15).map(|l| format!("{l}\n")).collect();
        let doc = format!("{}{}label\n", identity_block(), short);
        assert!(matches!(parse_external_list(&doc), Err(Error::MalformedBlock { index: 2, .. })));
        assert!(matches!(
            parse_external_list("1111111111111114\n"),
            Err(Error::MalformedBlock { index: 1, .. })
        ));
    }

    #[test]
    fn small_builders() {
        assert_eq!(build_b32(6).unwrap(), rm15());
        assert_eq!(build_b32(7).unwrap().dim(), 7);
        assert!(build_b32(16).is_err());
        assert_eq!(n32().unwrap().dim(), 7);
        assert_eq!(figure_dimension("C40_7prime"), Some(7));
        assert_eq!(figure_dimension("C32_11"), Some(11));
    }
}

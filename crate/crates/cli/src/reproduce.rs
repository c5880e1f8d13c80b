//! Claim suites behind `z4forge reproduce`.

use serde::Serialize;
use z4forge::bincodes::{macwilliams, rm15, BinaryCode, WeightDistribution};
use z4forge::construct::{census, make_frame, CensusConfig, CensusReport};
use z4forge::paperdata::{self, parse_external_list, TABLE1, TABLE2};
use z4forge::z4::extremality;

use crate::report::Failure;

#[derive(Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Claim {
    fn new(name: impl Into<String>, expected: impl std::fmt::Debug, actual: impl std::fmt::Debug, pass: bool) -> Self {
        Self {
            name: name.into(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            pass,
        }
    }

    fn eq<T: std::fmt::Debug + PartialEq>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let pass = expected == actual;
        Self::new(name, expected, actual, pass)
    }
}

fn counts(w: &WeightDistribution, weights: impl IntoIterator<Item = usize>) -> Vec<u64> {
    weights.into_iter().map(|j| w.get(j)).collect()
}

fn wd(c: &BinaryCode) -> Result<WeightDistribution, Failure> {
    Ok(c.weight_distribution()?)
}

pub fn table1() -> Result<Vec<Claim>, Failure> {
    let mut out = Vec::new();
    for (i, _, want) in TABLE1 {
        let w = wd(&paperdata::build_b32(i)?)?;
        let got = counts(&w, (4..=16).step_by(4));
        out.push(Claim::eq(format!("B32_{i} A_4..A_16"), want.to_vec(), got));
        out.push(Claim::eq(format!("B32_{i} symmetric"), true, w.is_symmetric()));
    }
    Ok(out)
}

pub fn table2() -> Result<Vec<Claim>, Failure> {
    let mut out = Vec::new();
    for (i, _, want) in TABLE2 {
        let w = wd(&paperdata::build_b40(i)?)?;
        out.push(Claim::eq(format!("B40_{i} A_4..A_20"), want.to_vec(), counts(&w, (4..=20).step_by(4))));
    }
    Ok(out)
}

pub fn enumerators() -> Result<Vec<Claim>, Failure> {
    let rm = rm15();
    let w = wd(&rm)?;
    let d = macwilliams(&w, rm.dim())?;
    let b = paperdata::build_b40(7)?;
    let bw = wd(&b)?;
    let bd = macwilliams(&bw, b.dim())?;
    let p = paperdata::c40_7prime_residue()?;
    let pw = wd(&p)?;
    let pd = macwilliams(&pw, p.dim())?;
    Ok(vec![
        Claim::eq("RM(1,5)", "1 + 62y^16 + y^32".to_string(), w.to_string()),
        Claim::eq("RM(1,5) dual A_1..A_4", vec![0, 0, 0, 1240], counts(&d, 1..=4)),
        Claim::eq("C40,7 residue", "1 + 15y^16 + 96y^20 + 15y^24 + y^40".to_string(), bw.to_string()),
        Claim::eq("C40,7 residue dual y^4..y^10", vec![1510, 59520, 1203885, 13235584], counts(&bd, [4, 6, 8, 10])),
        Claim::eq(
            "C'40,7 residue",
            "1 + y^12 + 11y^16 + 102y^20 + 11y^24 + y^28 + y^40".to_string(),
            pw.to_string(),
        ),
        Claim::eq("C'40,7 residue dual y^4..y^10", vec![1542, 59264, 1204653, 13234816], counts(&pd, [4, 6, 8, 10])),
    ])
}

pub fn figures() -> Result<Vec<Claim>, Failure> {
    let mut out = Vec::new();
    for name in paperdata::figure_names() {
        let c = paperdata::figure_code(&name)?;
        let r = extremality(&c)?;
        let dim = paperdata::figure_dimension(&name).expect("figure name");
        let want = (true, true, Some(16), Some(4), Some(8), dim);
        let got = (c.is_self_dual(), r.extremal, r.d_e, r.d_h, r.d_l, c.residue().dim());
        out.push(Claim::eq(format!("{name} (self-dual, extremal, d_E, d_H, d_L, dim)"), want, got));
    }
    Ok(out)
}

fn run_census(c1: &BinaryCode, workers: usize) -> Result<CensusReport, Failure> {
    let frame = make_frame(c1)?;
    Ok(census(
        &frame,
        &CensusConfig {
            workers,
            ..CensusConfig::default()
        },
    )?)
}

pub fn census32(workers: usize) -> Result<Vec<Claim>, Failure> {
    let rm = run_census(&rm15(), workers)?;
    let n32 = run_census(&paperdata::n32()?, workers)?;
    Ok(vec![
        Claim::eq("RM(1,5) candidates", 1024, rm.n_candidates),
        Claim::eq("RM(1,5) Type II candidates", 1024, rm.n_type_ii),
        Claim::new(
            "RM(1,5) extremal candidates form one fingerprint class",
            "1 class",
            format!("{} classes, {} of 1024 extremal", rm.fingerprint_classes.len(), rm.n_extremal),
            rm.fingerprint_classes.len() == 1,
        ),
        Claim::eq("N32 candidates", 1 << 15, n32.n_candidates),
        Claim::eq("N32 extremal", 0, n32.n_extremal),
    ])
}

pub fn census40(workers: usize) -> Result<Vec<Claim>, Failure> {
    let n40 = run_census(&paperdata::n40()?, workers)?;
    Ok(vec![
        Claim::eq("N40 candidates", 1 << 21, n40.n_candidates),
        Claim::eq("N40 extremal", 0, n40.n_extremal),
    ])
}

pub fn external(text: &str) -> Result<Vec<Claim>, Failure> {
    let list = parse_external_list(text)?;
    let mut out = vec![Claim::eq("entries", 80, list.len())];
    for e in 0..list.len() {
        let idx = list.entries[e].0;
        let c = list.code(e)?;
        let r = extremality(&c)?;
        let res = c.residue();
        let got = (r.extremal, res.dim(), res.is_doubly_even(), res == &res.dual());
        out.push(Claim::eq(format!("M_{idx} (extremal, dim, doubly even, self-dual)"), (true, 16, true, true), got));
    }
    Ok(out)
}

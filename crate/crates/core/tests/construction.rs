use std::collections::BTreeSet;

use z4forge::bincodes::{rm15, BinaryCode, WeightDistribution};
use z4forge::construct::{census, lemma3_extend, make_frame, CensusConfig, ExtendConfig, FreeBits, Mode};
use z4forge::paperdata::{self, support_vector};
use z4forge::z4::{extremality, fingerprint, Z4Code};
use z4forge::{BitVector, Z4Vector};

fn config(seed: u64) -> ExtendConfig {
    ExtendConfig {
        seed,
        workers: 2,
        ..ExtendConfig::default()
    }
}

fn rm_census_member() -> Z4Code {
    let frame = make_frame(&rm15()).unwrap();
    let r = census(
        &frame,
        &CensusConfig {
            collect: 1,
            ..CensusConfig::default()
        },
    )
    .unwrap();
    frame.build_code(&frame.complete_b(&r.collected[0]).unwrap()).unwrap()
}

/// A weight-4 vector outside the residue whose extension stays doubly even.
fn extension_vector(c: &Z4Code) -> BitVector {
    let n = c.len();
    let dual = c.residue().dual();
    for a in 0..n {
        for b in a + 1..n {
            for x in b + 1..n {
                for y in x + 1..n {
                    let v = BitVector::from_support(n, [a, b, x, y]);
                    if dual.contains(&v) && !c.residue().contains(&v) {
                        return v;
                    }
                }
            }
        }
    }
    panic!("no extension vector");
}

#[test]
fn rm_member_extends_to_b32_7() {
    let c = rm_census_member();
    assert!(extremality(&c).unwrap().extremal);
    let v = support_vector(32, &paperdata::support("V32_7").unwrap()).unwrap();
    let e = lemma3_extend(&c, &v, &config(1)).unwrap();
    assert!(e.exhaustive);
    assert_eq!(e.code.residue(), &paperdata::build_b32(7).unwrap());
    let r = extremality(&e.code).unwrap();
    assert!(r.extremal && r.type_ii);
}

#[test]
fn g40_code_extends_to_b40_8() {
    let c = paperdata::figure_code("G40").unwrap();
    let w = support_vector(40, &paperdata::support("W40_8").unwrap()).unwrap();
    let e = lemma3_extend(&c, &w, &config(1)).unwrap();
    assert_eq!(e.code.residue(), &paperdata::build_b40(8).unwrap());
    assert!(extremality(&e.code).unwrap().extremal);
}

#[test]
fn dimension_16_endpoint_at_length_32() {
    let c = paperdata::figure_code("C32_15").unwrap();
    let v = extension_vector(&c);
    let e = lemma3_extend(&c, &v, &config(7)).unwrap();
    assert!(!e.exhaustive);
    let res = e.code.residue();
    assert_eq!(res.dim(), 16);
    assert!(res.is_doubly_even() && res == &res.dual());
    assert!(extremality(&e.code).unwrap().extremal);
}

#[test]
fn dimension_20_endpoint_at_length_40() {
    let c = paperdata::figure_code("C40_19").unwrap();
    let v = extension_vector(&c);
    let e = lemma3_extend(&c, &v, &config(7)).unwrap();
    let res = e.code.residue();
    assert_eq!(res.dim(), 20);
    assert!(res.is_doubly_even() && res == &res.dual());
    assert!(extremality(&e.code).unwrap().extremal);
}

#[test]
fn figure_residues_match_table_distributions() {
    for (i, _, want) in paperdata::TABLE1 {
        let w = paperdata::figure_code(&format!("C32_{i}")).unwrap().residue().weight_distribution().unwrap();
        let got: Vec<u64> = (4..=16).step_by(4).map(|j| w.get(j)).collect();
        assert_eq!(got, want, "C32_{i}");
    }
    for (i, _, want) in paperdata::TABLE2 {
        let w = paperdata::figure_code(&format!("C40_{i}")).unwrap().residue().weight_distribution().unwrap();
        let got: Vec<u64> = (4..=20).step_by(4).map(|j| w.get(j)).collect();
        assert_eq!(got, want, "C40_{i}");
    }
}

#[test]
fn remixed_presentations_share_a_fingerprint() {
    let c = paperdata::figure_code("C32_7").unwrap();
    let g = c.generators().to_vec();
    let mut mixed: Vec<Z4Vector> = g.iter().rev().cloned().collect();
    for i in 1..mixed.len() {
        let prev = mixed[i - 1].scale(3);
        mixed[i].add_assign(&prev);
    }
    let d = Z4Code::standard_form(mixed, 32).unwrap();
    assert_eq!(c, d);
    assert_eq!(fingerprint(&c).unwrap(), fingerprint(&d).unwrap());
}

fn distribution(n: usize, terms: &[(usize, u64)]) -> WeightDistribution {
    let mut counts = vec![0; n + 1];
    for &(j, a) in terms {
        counts[j] = a;
    }
    WeightDistribution::from_counts(counts)
}

#[test]
fn residue_invariants_separate_known_codes() {
    // Residues of other codes, by their published enumerators.
    let tilde_c31 = distribution(32, &[(0, 1), (12, 496), (16, 1054), (20, 496), (32, 1)]);
    let psq = distribution(40, &[(0, 1), (12, 156), (16, 1911), (20, 4056), (24, 1911), (28, 156), (40, 1)]);
    assert_eq!(tilde_c31.total(), 1 << 11);
    assert_eq!(psq.total(), 1 << 13);
    let c11 = fingerprint(&paperdata::figure_code("C32_11").unwrap()).unwrap();
    let c13 = fingerprint(&paperdata::figure_code("C40_13").unwrap()).unwrap();
    assert_eq!(c11.residue.get(4), 16);
    assert_ne!(c11.residue, tilde_c31);
    assert_eq!(c13.residue.get(4), 22);
    assert_ne!(c13.residue, psq);
}

#[test]
fn census_fingerprints_are_consistent_with_the_checker() {
    let frame = make_frame(&rm15()).unwrap();
    let r = census(&frame, &CensusConfig::default()).unwrap();
    assert_eq!(r.fingerprint_classes.len(), 1);
    let direct: BTreeSet<_> = [0u64, 17, 511, 1023]
        .into_iter()
        .map(|i| {
            let fb = FreeBits::from_index(6, Mode::AllOnes, i).unwrap();
            fingerprint(&frame.build_code(&frame.complete_b(&fb).unwrap()).unwrap()).unwrap()
        })
        .collect();
    assert_eq!(direct.into_iter().collect::<Vec<_>>(), vec![r.fingerprint_classes[0].fingerprint.clone()]);
}

#[test]
fn residue_admissibility_along_both_chains() {
    use z4forge::bincodes::residue_admissibility;
    for i in 6..=15 {
        assert!(residue_admissibility(&paperdata::build_b32(i).unwrap()).unwrap().all(), "B32_{i}");
    }
    for i in 7..=19 {
        assert!(residue_admissibility(&paperdata::build_b40(i).unwrap()).unwrap().all(), "B40_{i}");
    }
    let n: [BinaryCode; 2] = [paperdata::n32().unwrap(), paperdata::n40().unwrap()];
    assert!(n.iter().all(|c| residue_admissibility(c).unwrap().all()));
}

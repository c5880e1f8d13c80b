//! Codes over the integers mod 4.

mod code;
mod extremality;
mod vector;

pub use code::{write_z4m, Codewords, Z4Code};
pub(crate) use code::dual_complement;
pub use extremality::{
    brute_force_minima, coset_distance_le, count_words_euclidean, extremality, fingerprint,
    lee_distribution, euclidean_distribution, hamming_distribution, BruteForceMinima,
    ExtremalityReport, Fingerprint, Method, extremal_bound, MAX_DECOMPOSITION_LENGTH,
};
pub(crate) use extremality::ResidueProfile;
pub use vector::Z4Vector;

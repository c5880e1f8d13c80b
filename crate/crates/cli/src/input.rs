//! Resolving command-line inputs: `@NAME` for embedded artifacts, otherwise a
//! file path.

use std::path::Path;

use sha2::{Digest, Sha256};
use z4forge::bincodes::{parse_g2m, write_g2m, BinaryCode};
use z4forge::construct::{census, make_frame, CensusConfig};
use z4forge::paperdata::{self, parse_z4_matrix};
use z4forge::z4::write_z4m;
use z4forge::{Error, Z4Code};

use crate::report::Failure;

/// Names accepted after `@` where a Z4 code is expected, besides the figure
/// matrices and `G40`.
pub const RM15_CENSUS: &str = "RM15_CENSUS";

pub struct Loaded<T> {
    pub value: T,
    pub digest: String,
}

fn digest(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn parse_err(path: &str, e: Error) -> Failure {
    Failure::Input(format!("{path}: {e}"))
}

/// The least extremal member of the RM(1,5) census.
pub fn rm15_census_member() -> Result<Z4Code, Error> {
    let frame = make_frame(&z4forge::bincodes::rm15())?;
    let r = census(
        &frame,
        &CensusConfig {
            collect: 1,
            workers: 1,
            ..CensusConfig::default()
        },
    )?;
    let fb = r
        .collected
        .first()
        .ok_or_else(|| Error::Inconsistent("no extremal code over RM(1,5)".into()))?;
    frame.build_code(&frame.complete_b(fb)?)
}

/// A Z4 code from `@NAME` (figure matrices, `G40` alias `C40_7`,
/// `RM15_CENSUS`) or a
/// `.z4m` file of generator rows.
pub fn z4_code(arg: &str) -> Result<Loaded<Z4Code>, Failure> {
    if let Some(name) = arg.strip_prefix('@') {
        let code = if name == RM15_CENSUS {
            rm15_census_member()?
        } else if name == "C40_7" {
            // the length-40 code given by its full generator matrix
            paperdata::figure_code("G40")?
        } else {
            paperdata::figure_code(name)?
        };
        let text = write_z4m(code.generators());
        return Ok(Loaded {
            value: code,
            digest: digest(&text),
        });
    }
    let text = read(arg)?;
    let rows = parse_z4_matrix(&text).map_err(|e| parse_err(arg, e))?;
    let n = rows.first().map_or(0, |r| r.len());
    let code = Z4Code::standard_form(rows, n)?;
    Ok(Loaded {
        value: code,
        digest: digest(&text),
    })
}

/// A binary code from `@NAME` (`RM15`, `B32_i`, `B40_i`, `N32`, `N40`,
/// `C40_7PRIME_RESIDUE`) or a `.g2m` file.
pub fn binary_code(arg: &str) -> Result<Loaded<BinaryCode>, Failure> {
    if let Some(name) = arg.strip_prefix('@') {
        let code = paperdata::binary_code(name)?;
        let text = write_g2m(code.basis());
        return Ok(Loaded {
            value: code,
            digest: digest(&text),
        });
    }
    let text = read(arg)?;
    let m = parse_g2m(&text).map_err(|e| parse_err(arg, e))?;
    Ok(Loaded {
        value: BinaryCode::from_generators(&m),
        digest: digest(&text),
    })
}

/// Binary input is recognised by the `.g2m` extension or by naming one of
/// the embedded binary codes.
pub fn is_binary(arg: &str) -> bool {
    match arg.strip_prefix('@') {
        Some(name) => paperdata::binary_code(name).is_ok(),
        None => Path::new(arg).extension().is_some_and(|e| e == "g2m"),
    }
}

pub fn text_digest(text: &str) -> String {
    digest(text)
}

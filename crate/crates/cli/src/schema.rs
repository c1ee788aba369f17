//! The presentation file format: one JSON document, exact rationals as
//! "p/q" strings, matrices as nested integer arrays. Emission is canonical
//! (sorted keys come from the struct order, matrices echo their input), so
//! emit ∘ parse ∘ emit = emit.

use conifold_core::{
    complete_from_a, complete_from_b, HodgeData, IntMatrix, TransitionPresentation, Triple3,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub const DEFAULT_ORDER: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub k: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<i64>>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<HodgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gw: Option<Vec<GwFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeFile {
    #[serde(rename = "h3X")]
    pub h3_x: u32,
    #[serde(rename = "h3Y")]
    pub h3_y: u32,
    #[serde(rename = "h2X")]
    pub h2_x: u32,
    #[serde(rename = "h2Y")]
    pub h2_y: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GwFile {
    pub class: Vec<i64>,
    /// Canonical extremal Novikov exponent; present on transform output,
    /// ignored when transporting back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<Vec<i64>>,
    pub n: String,
}

pub fn parse_str(text: &str) -> Result<PresentationFile, String> {
    serde_json::from_str(text).map_err(|e| format!("cannot parse presentation: {e}"))
}

pub fn load(path: &std::path::Path) -> Result<PresentationFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_str(&text)
}

pub fn emit(file: &PresentationFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("schema types always serialize");
    out.push('\n');
    out
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    BigRational::from_str(text.trim()).map_err(|e| format!("bad rational {text:?}: {e}"))
}

pub fn emit_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_int_matrix(rows: &[Vec<i64>], k: usize, name: &str) -> Result<IntMatrix, String> {
    if rows.len() != k {
        return Err(format!("{name} has {} rows, k = {k}", rows.len()));
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(format!("{name} is not rectangular"));
    }
    Ok(IntMatrix::from_rows(
        rows.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect(),
    ))
}

pub fn from_int_matrix(m: &IntMatrix) -> Result<Vec<Vec<i64>>, String> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    i64::try_from(m.get(i, j)).map_err(|_| {
                        format!("matrix entry at ({i}, {j}) does not fit the file format")
                    })
                })
                .collect()
        })
        .collect()
}

/// Builds the presentation and echoes the file in canonical shape: both
/// relation matrices filled in (completed when one was absent) and the
/// truncation order made explicit.
pub fn canonicalize(
    file: &PresentationFile,
) -> Result<(PresentationFile, TransitionPresentation), String> {
    if file.k == 0 {
        return Err("k must be positive".into());
    }
    let a = file.a.as_ref().map(|m| to_int_matrix(m, file.k, "A")).transpose()?;
    let b = file.b.as_ref().map(|m| to_int_matrix(m, file.k, "B")).transpose()?;
    let mut presentation = match (a, b) {
        (Some(a), Some(b)) => {
            TransitionPresentation::new(file.k, a, b).map_err(|e| e.to_string())?
        }
        (Some(a), None) => complete_from_a(file.k, a).map_err(|e| e.to_string())?,
        (None, Some(b)) => complete_from_b(file.k, b).map_err(|e| e.to_string())?,
        (None, None) => return Err("at least one of A, B must be present".into()),
    };
    if let Some(tensor) = &file.triple {
        let rho = presentation.rho();
        let mut entries = Vec::with_capacity(rho * rho * rho);
        if tensor.len() != rho
            || tensor.iter().any(|p| p.len() != rho || p.iter().any(|q| q.len() != rho))
        {
            return Err(format!("triple tensor must be {rho}×{rho}×{rho}"));
        }
        for plane in tensor {
            for row in plane {
                for entry in row {
                    entries.push(parse_rational(entry)?);
                }
            }
        }
        let triple = Triple3::new(rho, entries).map_err(|e| e.to_string())?;
        presentation = presentation.with_triple(triple).map_err(|e| e.to_string())?;
    }
    if let Some(h) = &file.hodge {
        presentation = presentation.with_hodge(HodgeData {
            h3_x: h.h3_x,
            h3_y: h.h3_y,
            h2_x: h.h2_x,
            h2_y: h.h2_y,
        });
    }
    if let Some(gw) = &file.gw {
        let len = gw.first().map_or(0, |e| e.class.len());
        for entry in gw {
            if entry.class.len() != len {
                return Err("gw classes must all have the same length".into());
            }
            parse_rational(&entry.n)?;
        }
    }
    let canonical = PresentationFile {
        k: file.k,
        a: Some(from_int_matrix(&presentation.a)?),
        b: Some(from_int_matrix(&presentation.b)?),
        triple: file.triple.clone(),
        hodge: file.hodge,
        gw: file.gw.clone(),
        order: Some(file.order.unwrap_or(DEFAULT_ORDER)),
    };
    Ok((canonical, presentation))
}

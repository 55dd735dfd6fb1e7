//! Model and certificate files.
//!
//! Model files hold the lattice and one 16x16 matrix per plaquette, rows of
//! `[re, im]` pairs, corners ordered TL, TR, BR, BL with the TL qubit most
//! significant:
//!
//! ```json
//! {"lattice": {"lx": 4, "ly": 4, "boundary": "periodic"},
//!  "terms": [{"plaquette": [0, 0], "matrix": [[[-1.0, 0.0], ...], ...]}, ...]}
//! ```
//!
//! Certificate files map `"x,y"` vertex keys to slice labels:
//!
//! ```json
//! {"alpha": {"1,1": 0}, "beta": {"1,1": 1}}
//! ```
//!
//! Floats are written in shortest round-trip form, so save/load is exact.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeSpec, PlaquetteId, VertexId};
use crate::linalg::{c64, Matrix};
use crate::model::CommutingModel;
use crate::verifier::Certificate;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    lx: usize,
    ly: usize,
    boundary: Boundary,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    plaquette: [usize; 2],
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    lattice: LatticeFile,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    alpha: BTreeMap<String, u8>,
    beta: BTreeMap<String, u8>,
}

pub fn model_to_json(model: &CommutingModel) -> Result<String> {
    let l = model.lattice();
    let file = ModelFile {
        lattice: LatticeFile {
            lx: l.lx(),
            ly: l.ly(),
            boundary: l.boundary(),
        },
        terms: model
            .terms()
            .map(|(p, m)| TermFile {
                plaquette: [p.x, p.y],
                matrix: (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn model_from_json(text: &str) -> Result<CommutingModel> {
    let file: ModelFile = serde_json::from_str(text)?;
    let lattice = LatticeSpec::new(file.lattice.lx, file.lattice.ly, file.lattice.boundary)?;
    let mut terms = BTreeMap::new();
    for t in file.terms {
        let p = PlaquetteId::new(t.plaquette[0], t.plaquette[1]);
        if t.matrix.len() != 16 || t.matrix.iter().any(|row| row.len() != 16) {
            return Err(Error::Format(format!("term {p}: matrix must be 16x16")));
        }
        let m = Matrix::from_fn(16, 16, |r, c| {
            let [re, im] = t.matrix[r][c];
            c64(re, im)
        });
        if terms.insert(p, m).is_some() {
            return Err(Error::Format(format!("duplicate term for {p}")));
        }
    }
    CommutingModel::new(lattice, terms)
}

fn vertex_key(v: VertexId) -> String {
    format!("{},{}", v.x, v.y)
}

fn parse_vertex_key(key: &str) -> Result<VertexId> {
    let bad = || Error::Format(format!("bad vertex key {key:?}, expected \"x,y\""));
    let (x, y) = key.split_once(',').ok_or_else(bad)?;
    Ok(VertexId::new(
        x.trim().parse().map_err(|_| bad())?,
        y.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn certificate_to_json(cert: &Certificate) -> Result<String> {
    let keyed = |m: &BTreeMap<VertexId, u8>| m.iter().map(|(&v, &l)| (vertex_key(v), l)).collect();
    let file = CertificateFile {
        alpha: keyed(&cert.alpha),
        beta: keyed(&cert.beta),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parses a certificate. Labels are only range-checked against the model
/// when verified.
pub fn certificate_from_json(text: &str) -> Result<Certificate> {
    let file: CertificateFile = serde_json::from_str(text)?;
    let parse = |m: BTreeMap<String, u8>| -> Result<BTreeMap<VertexId, u8>> {
        m.into_iter().map(|(k, l)| Ok((parse_vertex_key(&k)?, l))).collect()
    };
    Ok(Certificate {
        alpha: parse(file.alpha)?,
        beta: parse(file.beta)?,
    })
}

pub fn save_model(model: &CommutingModel, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, model_to_json(model)?)?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CommutingModel> {
    model_from_json(&fs::read_to_string(path)?)
}

pub fn save_certificate(cert: &Certificate, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, certificate_to_json(cert)?)?)
}

pub fn load_certificate(path: impl AsRef<Path>) -> Result<Certificate> {
    certificate_from_json(&fs::read_to_string(path)?)
}

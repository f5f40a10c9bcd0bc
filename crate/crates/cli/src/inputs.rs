//! JSON input schemas: block-structure descriptions, determinantal
//! representations, and state-space systems.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use singpencil::kcf::KcfSpec;
use singpencil::CMat;

/// A number in JSON: plain real or `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl Num {
    pub fn value(self) -> Complex64 {
        match self {
            Num::Real(re) => Complex64::new(re, 0.0),
            Num::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

pub fn matrix_from_rows(rows: &[Vec<Num>]) -> Result<CMat> {
    if rows.is_empty() || rows[0].is_empty() {
        bail!("matrix must be nonempty");
    }
    let cols = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            bail!("row {} has {} entries, expected {cols}", i + 1, r.len());
        }
    }
    Ok(CMat::from_fn(rows.len(), cols, |i, j| rows[i][j].value()))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct JordanBlockJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    pub size: usize,
}

/// Kronecker block structure, as accepted by `gen-kcf`.
#[derive(Debug, Deserialize, Serialize)]
pub struct KcfSpecJson {
    #[serde(default)]
    pub right: Vec<usize>,
    #[serde(default)]
    pub left: Vec<usize>,
    #[serde(default)]
    pub jordan: Vec<JordanBlockJson>,
    #[serde(default)]
    pub infinite: Vec<usize>,
}

impl KcfSpecJson {
    pub fn to_spec(&self) -> KcfSpec {
        KcfSpec {
            right_minimal_indices: self.right.clone(),
            left_minimal_indices: self.left.clone(),
            jordan_blocks: self
                .jordan
                .iter()
                .map(|b| (Complex64::new(b.re, b.im), b.size))
                .collect(),
            infinite_blocks: self.infinite.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct RepJson {
    pub a1: Vec<Vec<Num>>,
    pub b1: Vec<Vec<Num>>,
    pub c1: Vec<Vec<Num>>,
    pub a2: Vec<Vec<Num>>,
    pub b2: Vec<Vec<Num>>,
    pub c2: Vec<Vec<Num>>,
    #[serde(default)]
    pub uniform_degree: Option<usize>,
}

impl RepJson {
    pub fn to_rep(&self) -> Result<singpencil::apps::DeterminantalRep> {
        let a1 = matrix_from_rows(&self.a1).context("a1")?;
        let b1 = matrix_from_rows(&self.b1).context("b1")?;
        let c1 = matrix_from_rows(&self.c1).context("c1")?;
        let a2 = matrix_from_rows(&self.a2).context("a2")?;
        let b2 = matrix_from_rows(&self.b2).context("b2")?;
        let c2 = matrix_from_rows(&self.c2).context("c2")?;
        let rep = match self.uniform_degree {
            Some(d) => singpencil::apps::DeterminantalRep::with_uniform_degree(
                a1, b1, c1, a2, b2, c2, d,
            )?,
            None => singpencil::apps::DeterminantalRep::new(a1, b1, c1, a2, b2, c2)?,
        };
        Ok(rep)
    }
}

#[derive(Debug, Deserialize)]
pub struct SystemJson {
    pub a: Vec<Vec<Num>>,
    pub b: Vec<Vec<Num>>,
    pub c: Vec<Vec<Num>>,
    pub d: Vec<Vec<Num>>,
}

impl SystemJson {
    pub fn to_matrices(&self) -> Result<(CMat, CMat, CMat, CMat)> {
        Ok((
            matrix_from_rows(&self.a).context("a")?,
            matrix_from_rows(&self.b).context("b")?,
            matrix_from_rows(&self.c).context("c")?,
            matrix_from_rows(&self.d).context("d")?,
        ))
    }
}

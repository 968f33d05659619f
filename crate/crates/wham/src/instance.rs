//! Instance-file parsing and emission: one JSON document describes a
//! field, a weighted coordinate space, up to three named matrices
//! (`generator`, `left`, `right`), and optional coordinate-label sets
//! `H` and `K`. All rationals use the string form "a" or "a/b".

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::gf::Field;
use crate::linalg::{FieldRc, Matrix};
use crate::wspace::{CodeMatrix, Rat, SpaceRc, WeightedSpace};
use crate::Error;

/// Lowest-terms rational string: "a" when integral, "a/b" otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Accepts "a" or "a/b" with integer a, b and b ≠ 0; reduces to lowest
/// terms.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        None => (s, "1"),
        Some((n, d)) => (n.trim(), d.trim()),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    p: u64,
    m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    field: RawField,
    omega: IndexMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<Vec<Vec<u64>>>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    set_h: Option<Vec<String>>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    set_k: Option<Vec<String>>,
}

/// A fully validated instance document.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDoc {
    pub description: Option<String>,
    pub seed: Option<u64>,
    pub field: FieldRc,
    pub space: SpaceRc,
    pub generator: Option<Matrix>,
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
    /// Coordinate indices named by the `H` label set, if present.
    pub set_h: Option<Vec<usize>>,
    /// Coordinate indices named by the `K` label set, if present.
    pub set_k: Option<Vec<usize>>,
}

impl InstanceDoc {
    pub fn from_parts(field: &FieldRc, space: &SpaceRc) -> InstanceDoc {
        InstanceDoc {
            description: None,
            seed: None,
            field: field.clone(),
            space: space.clone(),
            generator: None,
            left: None,
            right: None,
            set_h: None,
            set_k: None,
        }
    }

    fn matrix(&self, which: &Option<Matrix>, name: &str) -> Result<CodeMatrix, Error> {
        let Some(m) = which else {
            return Err(Error::Instance(format!(
                "this command requires a `{name}` matrix"
            )));
        };
        CodeMatrix::new(&self.space, m.clone())
    }

    pub fn generator_code(&self) -> Result<CodeMatrix, Error> {
        self.matrix(&self.generator, "generator")
    }

    pub fn left_code(&self) -> Result<CodeMatrix, Error> {
        self.matrix(&self.left, "left")
    }

    pub fn right_code(&self) -> Result<CodeMatrix, Error> {
        self.matrix(&self.right, "right")
    }

    /// `H` if present, otherwise every coordinate.
    pub fn h_or_all(&self) -> Vec<usize> {
        self.set_h
            .clone()
            .unwrap_or_else(|| (0..self.space.len()).collect())
    }

    /// `K` if present, otherwise every coordinate.
    pub fn k_or_all(&self) -> Vec<usize> {
        self.set_k
            .clone()
            .unwrap_or_else(|| (0..self.space.len()).collect())
    }
}

fn matrix_from_raw(
    field: &FieldRc,
    n: usize,
    raw: &[Vec<u64>],
    name: &str,
) -> Result<Matrix, Error> {
    if raw.is_empty() {
        return Err(Error::Instance(format!("{name}: matrix needs at least one row")));
    }
    for (r, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Instance(format!(
                "{name}[{r}]: row has {} entries but omega has {n} coordinates",
                row.len()
            )));
        }
        for (c, &e) in row.iter().enumerate() {
            field
                .element(e)
                .map_err(|err| Error::Instance(format!("{name}[{r}][{c}]: {err}")))?;
        }
    }
    Matrix::from_indices(field, raw)
}

fn labels_to_indices(
    space: &WeightedSpace,
    labels: &[String],
    name: &str,
) -> Result<Vec<usize>, Error> {
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        match space.index_of(l) {
            Some(i) => {
                if out.contains(&i) {
                    return Err(Error::Instance(format!("{name}: duplicate label {l:?}")));
                }
                out.push(i);
            }
            None => {
                return Err(Error::Instance(format!(
                    "{name}: label {l:?} is not a coordinate of omega"
                )))
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn parse_instance_str(text: &str) -> Result<InstanceDoc, Error> {
    let raw: RawDoc = serde_json::from_str(text)
        .map_err(|e| Error::Instance(format!("syntax error: {e}")))?;

    let field = Arc::new(Field::new(
        raw.field.p,
        raw.field.m,
        raw.field.modulus.as_deref(),
    )
    .map_err(|e| Error::Instance(format!("field: {e}")))?);

    let mut pairs = Vec::with_capacity(raw.omega.len());
    for (label, value) in &raw.omega {
        let w = parse_rat(value).ok_or_else(|| {
            Error::Instance(format!("omega[{label:?}]: {value:?} is not a rational"))
        })?;
        if !w.is_positive() {
            return Err(Error::NonpositiveWeight(label.clone()));
        }
        pairs.push((label.clone(), w));
    }
    let space = Arc::new(WeightedSpace::new(pairs)?);
    let n = space.len();

    let parse_matrix = |raw: &Option<Vec<Vec<u64>>>, name: &str| -> Result<Option<Matrix>, Error> {
        raw.as_ref()
            .map(|rows| matrix_from_raw(&field, n, rows, name))
            .transpose()
    };
    let generator = parse_matrix(&raw.generator, "generator")?;
    let left = parse_matrix(&raw.left, "left")?;
    let right = parse_matrix(&raw.right, "right")?;

    let set_h = raw
        .set_h
        .as_ref()
        .map(|ls| labels_to_indices(&space, ls, "H"))
        .transpose()?;
    let set_k = raw
        .set_k
        .as_ref()
        .map(|ls| labels_to_indices(&space, ls, "K"))
        .transpose()?;

    Ok(InstanceDoc {
        description: raw.description,
        seed: raw.seed,
        field,
        space,
        generator,
        left,
        right,
        set_h,
        set_k,
    })
}

pub fn parse_instance(path: &Path) -> Result<InstanceDoc, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Instance(format!("cannot read {}: {e}", path.display())))?;
    parse_instance_str(&text)
}

fn matrix_to_raw(m: &Matrix) -> Vec<Vec<u64>> {
    m.row_iter()
        .map(|row| row.iter().map(|e| e.index() as u64).collect())
        .collect()
}

/// Serialize a document; parsing the output reproduces an equal
/// `InstanceDoc`. The modulus is always written explicitly.
pub fn emit_instance(doc: &InstanceDoc) -> String {
    let raw = RawDoc {
        description: doc.description.clone(),
        seed: doc.seed,
        field: RawField {
            p: doc.field.p() as u64,
            m: doc.field.extension_degree(),
            modulus: Some(doc.field.modulus().iter().map(|&c| c as u64).collect()),
        },
        omega: doc
            .space
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), format_rat(doc.space.weight(i))))
            .collect(),
        generator: doc.generator.as_ref().map(matrix_to_raw),
        left: doc.left.as_ref().map(matrix_to_raw),
        right: doc.right.as_ref().map(matrix_to_raw),
        set_h: doc
            .set_h
            .as_ref()
            .map(|is| is.iter().map(|&i| doc.space.label(i).to_string()).collect()),
        set_k: doc
            .set_k
            .as_ref()
            .map(|is| is.iter().map(|&i| doc.space.label(i).to_string()).collect()),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("document serializes");
    s.push('\n');
    s
}

/// Input for the weighted constant-weight builder: a field, an input
/// dimension, and one rational weight class per projective point of F^k
/// in canonical point order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassesDoc {
    pub description: Option<String>,
    pub field: FieldRc,
    pub k: usize,
    pub classes: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClasses {
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    field: RawField,
    k: usize,
    classes: Vec<Vec<String>>,
}

pub fn parse_classes_str(text: &str) -> Result<ClassesDoc, Error> {
    let raw: RawClasses = serde_json::from_str(text)
        .map_err(|e| Error::Instance(format!("syntax error: {e}")))?;
    let field = Arc::new(Field::new(
        raw.field.p,
        raw.field.m,
        raw.field.modulus.as_deref(),
    )
    .map_err(|e| Error::Instance(format!("field: {e}")))?);
    let mut classes = Vec::with_capacity(raw.classes.len());
    for (i, class) in raw.classes.iter().enumerate() {
        let mut ws = Vec::with_capacity(class.len());
        for (j, value) in class.iter().enumerate() {
            let w = parse_rat(value).ok_or_else(|| {
                Error::Instance(format!("classes[{i}][{j}]: {value:?} is not a rational"))
            })?;
            if !w.is_positive() {
                return Err(Error::Instance(format!(
                    "classes[{i}][{j}]: weights must be positive"
                )));
            }
            ws.push(w);
        }
        classes.push(ws);
    }
    Ok(ClassesDoc {
        description: raw.description,
        field,
        k: raw.k,
        classes,
    })
}

pub fn parse_classes(path: &Path) -> Result<ClassesDoc, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Instance(format!("cannot read {}: {e}", path.display())))?;
    parse_classes_str(&text)
}

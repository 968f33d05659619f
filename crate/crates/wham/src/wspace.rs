//! Weighted coordinate spaces: a finite label set Ω with a strictly
//! positive exact-rational weight per coordinate, plus the induced
//! vector/set weights, the weighted Hamming distance, and generator
//! matrices viewed as linear maps F^k → F^Ω with their column maps.

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigInt, BigRational, Signed};

use crate::gf::{Field, FieldElement};
use crate::linalg::{FieldRc, Matrix, Subspace};
use crate::Error;

/// Exact rational scalar used for all weights and weight sums.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Ordered coordinate set Ω with weight function ω: Ω → Q⁺.
#[derive(Debug, Clone)]
pub struct WeightedSpace {
    labels: Vec<String>,
    weights: Vec<Rat>,
    index: HashMap<String, usize>,
}

impl PartialEq for WeightedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.weights == other.weights
    }
}

impl Eq for WeightedSpace {}

pub type SpaceRc = Arc<WeightedSpace>;

impl WeightedSpace {
    pub fn new(pairs: impl IntoIterator<Item = (String, Rat)>) -> Result<WeightedSpace, Error> {
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        let mut index = HashMap::new();
        for (label, w) in pairs {
            if !w.is_positive() {
                return Err(Error::NonpositiveWeight(label));
            }
            if index.insert(label.clone(), labels.len()).is_some() {
                return Err(Error::Instance(format!("duplicate coordinate label {label:?}")));
            }
            labels.push(label);
            weights.push(w);
        }
        if labels.is_empty() {
            return Err(Error::Instance("coordinate set must be nonempty".into()));
        }
        Ok(WeightedSpace {
            labels,
            weights,
            index,
        })
    }

    /// ω ≡ 1 on the given labels (the plain Hamming specialization).
    pub fn uniform(labels: impl IntoIterator<Item = String>) -> Result<WeightedSpace, Error> {
        WeightedSpace::new(labels.into_iter().map(|l| (l, rat_int(1))))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn total_weight(&self) -> Rat {
        self.weights.iter().sum()
    }

    /// supp(v): indices of the nonzero coordinates, ascending.
    pub fn supp_indices(&self, v: &[FieldElement]) -> Vec<usize> {
        assert_eq!(v.len(), self.len(), "vector length must match |Ω|");
        (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
    }

    /// supp(v) as labels, in label order.
    pub fn supp<'a>(&'a self, v: &[FieldElement]) -> Vec<&'a str> {
        self.supp_indices(v)
            .into_iter()
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// χ(A) for a finite set of vectors: union of supports, ascending indices.
    pub fn chi_indices(&self, vectors: &[Vec<FieldElement>]) -> Vec<usize> {
        let mut hit = vec![false; self.len()];
        for v in vectors {
            assert_eq!(v.len(), self.len(), "vector length must match |Ω|");
            for (i, e) in v.iter().enumerate() {
                if !e.is_zero() {
                    hit[i] = true;
                }
            }
        }
        (0..self.len()).filter(|&i| hit[i]).collect()
    }

    /// Sum of ω over an index set.
    pub fn weight_of_indices(&self, indices: &[usize]) -> Rat {
        indices.iter().map(|&i| &self.weights[i]).sum()
    }

    /// wt(v) = Σ_{i ∈ supp(v)} ω(i).
    pub fn wt(&self, v: &[FieldElement]) -> Rat {
        self.weight_of_indices(&self.supp_indices(v))
    }

    /// Wt(A) = Σ_{i ∈ χ(A)} ω(i) for a finite vector set A. For a span,
    /// the generators alone suffice: χ(span A) = χ(A).
    pub fn set_weight(&self, vectors: &[Vec<FieldElement>]) -> Rat {
        self.weight_of_indices(&self.chi_indices(vectors))
    }

    /// d(α, β) = wt(β − α).
    pub fn dist(&self, field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Rat {
        assert_eq!(a.len(), b.len(), "vectors must share Ω");
        let diff: Vec<FieldElement> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| field.sub(y, x))
            .collect();
        self.wt(&diff)
    }
}

/// A k×|Ω| generator matrix over GF(q), i.e. the linear map γ ↦ γG from
/// F^k into the weighted space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    space: SpaceRc,
    grid: Matrix,
}

impl CodeMatrix {
    pub fn new(space: &SpaceRc, grid: Matrix) -> Result<CodeMatrix, Error> {
        if grid.cols() != space.len() {
            return Err(Error::ShapeMismatch(format!(
                "matrix has {} columns but Ω has {} coordinates",
                grid.cols(),
                space.len()
            )));
        }
        if grid.rows() == 0 {
            return Err(Error::ShapeMismatch("generator matrix needs k ≥ 1 rows".into()));
        }
        Ok(CodeMatrix {
            space: space.clone(),
            grid,
        })
    }

    pub fn space(&self) -> &SpaceRc {
        &self.space
    }

    pub fn field(&self) -> &FieldRc {
        self.grid.field()
    }

    pub fn k(&self) -> usize {
        self.grid.rows()
    }

    pub fn n(&self) -> usize {
        self.grid.cols()
    }

    pub fn grid(&self) -> &Matrix {
        &self.grid
    }

    /// γ ↦ γG.
    pub fn encode(&self, gamma: &[FieldElement]) -> Vec<FieldElement> {
        self.grid.vec_mul(gamma)
    }

    /// Column map τ: coordinate index ↦ column of G as a vector in F^[k].
    pub fn tau(&self, i: usize) -> Vec<FieldElement> {
        self.grid.col(i)
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.n()).map(|i| self.tau(i)).collect()
    }

    /// χ(f[X]) = indices whose column is nonzero.
    pub fn chi_full(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.tau(i).iter().any(|e| !e.is_zero()))
            .collect()
    }

    /// Wt(f[X]).
    pub fn full_image_weight(&self) -> Rat {
        self.space.weight_of_indices(&self.chi_full())
    }

    /// χ(f[B]) for a subspace B ⩽ F^k, via the generators' images.
    pub fn image_chi(&self, b: &Subspace) -> Vec<usize> {
        assert_eq!(b.ambient_dim(), self.k(), "subspace must live in F^k");
        assert!(**b.field() == **self.field(), "subspace must share the field");
        let images: Vec<Vec<FieldElement>> = b
            .basis()
            .row_iter()
            .map(|row| self.encode(row))
            .collect();
        self.space.chi_indices(&images)
    }

    /// Wt(f[B]).
    pub fn image_weight(&self, b: &Subspace) -> Rat {
        self.space.weight_of_indices(&self.image_chi(b))
    }

    /// The image f[B] as a subspace of F^Ω (generated by basis images).
    pub fn image_subspace(&self, b: &Subspace) -> Subspace {
        let images: Vec<Vec<FieldElement>> = b
            .basis()
            .row_iter()
            .map(|row| self.encode(row))
            .collect();
        Subspace::from_generators(self.field(), self.n(), &images, crate::linalg::Side::Row)
            .expect("images have length |Ω|")
    }
}

/// Pointwise scalar multiple s·v.
pub fn vec_scale(field: &Field, s: FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().map(|&e| field.mul(s, e)).collect()
}

/// Pointwise difference b − a.
pub fn vec_sub(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| field.sub(y, x)).collect()
}

pub fn is_zero_vec(v: &[FieldElement]) -> bool {
    v.iter().all(|e| e.is_zero())
}

//! Constant-weight-code recognition, analysis, and construction: the
//! per-projective-point σ criterion, brute-force codeword enumeration,
//! the closed-form subspace weight, the per-point weight-multiset
//! condition, and the simplex / weighted-class generators.

use std::collections::HashMap;

use num::BigInt;

use crate::gf::FieldElement;
use crate::linalg::{
    point_of, pow_u128, projective_points, subspaces, FieldRc, Matrix, ProjectivePoint, Side,
};
use crate::wspace::{CodeMatrix, Rat, SpaceRc, WeightedSpace};
use crate::Error;

/// Per-projective-point column weight sums of a generator matrix.
#[derive(Debug, Clone)]
pub struct SigmaReport {
    pub is_constant: bool,
    /// The common per-point sum σ when all points agree.
    pub sigma: Option<Rat>,
    /// (point, Σ_{τ(i)∈point} ω(i)) in canonical point order.
    pub per_point: Vec<(ProjectivePoint, Rat)>,
    /// First point whose sum differs from the first point's sum.
    pub violating_point: Option<ProjectivePoint>,
}

/// Two message vectors whose codewords have different weights.
#[derive(Debug, Clone)]
pub struct WeightPairWitness {
    pub gamma1: Vec<FieldElement>,
    pub wt1: Rat,
    pub gamma2: Vec<FieldElement>,
    pub wt2: Rat,
}

#[derive(Debug, Clone)]
pub struct BruteForceReport {
    pub is_constant: bool,
    /// The common nonzero-codeword weight when constant.
    pub weight: Option<Rat>,
    pub witness: Option<WeightPairWitness>,
}

/// A weight value with different multiplicities at two points.
#[derive(Debug, Clone)]
pub struct MultisetWitness {
    pub point_a: ProjectivePoint,
    pub point_b: ProjectivePoint,
    pub weight: Rat,
    pub count_a: usize,
    pub count_b: usize,
}

#[derive(Debug, Clone)]
pub struct MultisetReport {
    pub holds: bool,
    pub witness: Option<MultisetWitness>,
}

fn require_full_rank(g: &CodeMatrix) -> Result<(), Error> {
    if g.grid().rank() != g.k() {
        return Err(Error::RankDeficient);
    }
    Ok(())
}

/// Columns of G grouped by projective class, as coordinate indices per
/// point in canonical point order (zero columns belong to no class).
fn columns_by_point(g: &CodeMatrix) -> Vec<(ProjectivePoint, Vec<usize>)> {
    let points = projective_points(g.field(), g.k());
    let index: HashMap<&ProjectivePoint, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for i in 0..g.n() {
        if let Some(pt) = point_of(g.field(), &g.tau(i)) {
            buckets[index[&pt]].push(i);
        }
    }
    points.into_iter().zip(buckets).collect()
}

/// Decide constant weight without enumerating codewords: the code is
/// constant-weight iff every projective point of F^[k] receives the same
/// total column weight σ. Requires a full-rank generator.
pub fn sigma_check(g: &CodeMatrix) -> Result<SigmaReport, Error> {
    require_full_rank(g)?;
    let per_point: Vec<(ProjectivePoint, Rat)> = columns_by_point(g)
        .into_iter()
        .map(|(pt, cols)| {
            let sum = g.space().weight_of_indices(&cols);
            (pt, sum)
        })
        .collect();
    let first = per_point[0].1.clone();
    let violating = per_point[1..].iter().find(|(_, s)| *s != first);
    match violating {
        Some((pt, _)) => Ok(SigmaReport {
            is_constant: false,
            sigma: None,
            violating_point: Some(pt.clone()),
            per_point,
        }),
        None => Ok(SigmaReport {
            is_constant: true,
            sigma: Some(first),
            violating_point: None,
            per_point,
        }),
    }
}

/// Decide constant weight by enumerating all q^k message vectors.
pub fn is_constant_weight_bruteforce(g: &CodeMatrix, cap: u64) -> Result<BruteForceReport, Error> {
    require_full_rank(g)?;
    let q = g.field().q() as u128;
    let total = pow_u128(q, g.k() as u32);
    if total > cap as u128 {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    let full = crate::linalg::Subspace::full(g.field(), g.k(), Side::Row);
    let mut reference: Option<(Vec<FieldElement>, Rat)> = None;
    for gamma in full.vectors() {
        if gamma.iter().all(|e| e.is_zero()) {
            continue;
        }
        let w = g.space().wt(&g.encode(&gamma));
        match &reference {
            None => reference = Some((gamma, w)),
            Some((g1, w1)) => {
                if w != *w1 {
                    return Ok(BruteForceReport {
                        is_constant: false,
                        weight: None,
                        witness: Some(WeightPairWitness {
                            gamma1: g1.clone(),
                            wt1: w1.clone(),
                            gamma2: gamma,
                            wt2: w,
                        }),
                    });
                }
            }
        }
    }
    Ok(BruteForceReport {
        is_constant: true,
        weight: reference.map(|(_, w)| w),
        witness: None,
    })
}

/// Weight of the image of any s-dimensional subspace of messages under a
/// σ-constant generator: (q^k − q^{k−s})·σ/(q−1).
pub fn subspace_weight_formula(k: usize, s: usize, sigma: &Rat, q: u64) -> Rat {
    assert!(s <= k, "subspace dimension exceeds k");
    let qk = BigInt::from(pow_u128(q as u128, k as u32));
    let qks = BigInt::from(pow_u128(q as u128, (k - s) as u32));
    Rat::new(qk - qks, BigInt::from(q - 1)) * sigma.clone()
}

/// Check that every projective point receives the same multiset of
/// column weights (not just the same sum). This is strictly stronger
/// than the σ criterion.
pub fn multiset_condition_check(g: &CodeMatrix) -> Result<MultisetReport, Error> {
    require_full_rank(g)?;
    let grouped = columns_by_point(g);
    let multisets: Vec<Vec<&Rat>> = grouped
        .iter()
        .map(|(_, cols)| {
            let mut ws: Vec<&Rat> = cols.iter().map(|&i| g.space().weight(i)).collect();
            ws.sort();
            ws
        })
        .collect();
    for i in 1..multisets.len() {
        if multisets[i] != multisets[0] {
            // locate a weight value with differing multiplicity
            let mut values: Vec<&Rat> = multisets[0]
                .iter()
                .chain(multisets[i].iter())
                .copied()
                .collect();
            values.sort();
            values.dedup();
            let (weight, count_a, count_b) = values
                .into_iter()
                .map(|v| {
                    let ca = multisets[0].iter().filter(|w| **w == v).count();
                    let cb = multisets[i].iter().filter(|w| **w == v).count();
                    (v, ca, cb)
                })
                .find(|(_, ca, cb)| ca != cb)
                .expect("unequal multisets differ at some value");
            return Ok(MultisetReport {
                holds: false,
                witness: Some(MultisetWitness {
                    point_a: grouped[0].0.clone(),
                    point_b: grouped[i].0.clone(),
                    weight: weight.clone(),
                    count_a,
                    count_b,
                }),
            });
        }
    }
    Ok(MultisetReport {
        holds: true,
        witness: None,
    })
}

/// Biconditional between constant weight and flat subspace-weight
/// profiles, each side decided by enumeration.
#[derive(Debug, Clone)]
pub struct ProfileCheck {
    /// constant weight ⇒ for every dimension d ≤ k, all d-dimensional
    /// message subspaces have images of equal weight.
    pub forward: bool,
    /// flat profile at the chosen dimension m ⇒ constant weight;
    /// None when k = 1 (no admissible m exists).
    pub converse: Option<bool>,
}

pub fn constant_weight_profile_check(
    g: &CodeMatrix,
    m: usize,
    cap: u64,
) -> Result<ProfileCheck, Error> {
    require_full_rank(g)?;
    let k = g.k();
    let brute = is_constant_weight_bruteforce(g, cap)?;

    let profile_flat = |dim: usize| -> Result<bool, Error> {
        let mut seen: Option<Rat> = None;
        for b in subspaces(g.field(), k, dim, cap)? {
            let w = g.image_weight(&b);
            match &seen {
                None => seen = Some(w),
                Some(prev) => {
                    if w != *prev {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    };

    let forward = if brute.is_constant {
        let mut all_flat = true;
        for d in 0..=k {
            if !profile_flat(d)? {
                all_flat = false;
                break;
            }
        }
        all_flat
    } else {
        true // vacuous
    };

    let converse = if k == 1 {
        None
    } else {
        if m < 1 || m > k - 1 {
            return Err(Error::Unsupported(format!(
                "profile dimension m must satisfy 1 ≤ m ≤ k−1, got m={m}, k={k}"
            )));
        }
        Some(if profile_flat(m)? {
            brute.is_constant
        } else {
            true // vacuous
        })
    };

    Ok(ProfileCheck { forward, converse })
}

/// The r-fold simplex generator: one column per projective point of
/// F^[k], each repeated r times in canonical point order, with ω ≡ 1.
/// The resulting code is constant-weight with σ = r and nonzero-codeword
/// weight r·q^{k−1}.
pub fn simplex_generator(field: &FieldRc, k: usize, r: usize) -> Result<CodeMatrix, Error> {
    if k < 1 || r < 1 {
        return Err(Error::Unsupported(
            "simplex needs k ≥ 1 and r ≥ 1".into(),
        ));
    }
    let points = projective_points(field, k);
    let mut labels = Vec::with_capacity(points.len() * r);
    let mut grid = Matrix::zero(field, k, points.len() * r);
    for (pi, pt) in points.iter().enumerate() {
        for ci in 0..r {
            let col = pi * r + ci;
            labels.push(format!("P{pi}_{ci}"));
            for row in 0..k {
                grid.set(row, col, pt.rep()[row]);
            }
        }
    }
    let space: SpaceRc = std::sync::Arc::new(WeightedSpace::uniform(labels)?);
    CodeMatrix::new(&space, grid)
}

/// Build a weighted constant-weight code from per-point weight budgets:
/// classes[p] lists the coordinate weights attached to projective point
/// p (canonical order); every class must sum to the same σ. Coordinate
/// (point p, entry c) gets label "P<p>_<c>" and column = p's
/// representative.
pub fn weighted_constant_builder(
    field: &FieldRc,
    k: usize,
    classes: &[Vec<Rat>],
) -> Result<CodeMatrix, Error> {
    let points = projective_points(field, k);
    if classes.len() != points.len() {
        return Err(Error::Instance(format!(
            "expected one weight class per projective point ({} points), got {}",
            points.len(),
            classes.len()
        )));
    }
    let sums: Vec<Rat> = classes
        .iter()
        .map(|c| c.iter().cloned().sum::<Rat>())
        .collect();
    if sums.iter().any(|s| *s != sums[0]) {
        return Err(Error::UnequalClassSums);
    }
    let mut pairs = Vec::new();
    let mut columns: Vec<Vec<FieldElement>> = Vec::new();
    for (pi, (pt, class)) in points.iter().zip(classes).enumerate() {
        for (ci, w) in class.iter().enumerate() {
            pairs.push((format!("P{pi}_{ci}"), w.clone()));
            columns.push(pt.rep().to_vec());
        }
    }
    let space: SpaceRc = std::sync::Arc::new(WeightedSpace::new(pairs)?);
    let mut grid = Matrix::zero(field, k, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, &e) in col.iter().enumerate() {
            grid.set(r, c, e);
        }
    }
    CodeMatrix::new(&space, grid)
}

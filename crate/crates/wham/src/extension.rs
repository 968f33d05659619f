//! Weight-preserving map equivalence and extension: monomial isometries,
//! the brute-force / projective / profile criteria for local equivalence,
//! the unique-decomposition property of weight values, the constructive
//! extension of locally equivalent maps to a full isometry, the
//! extension-property check with counterexample witnesses, and the
//! induced single-vector transitivity maps.

use std::collections::BTreeMap;

use crate::gf::FieldElement;
use crate::linalg::{
    point_of, projective_points, subspaces, Matrix, ProjectivePoint, Subspace,
};
use crate::wspace::{rat_int, CodeMatrix, Rat, WeightedSpace};
use crate::Error;

/// Largest coordinate-set size accepted by the subset-sum machinery.
pub const SUBSET_GUARD: usize = 24;
/// Plain 2^n subset enumeration is used up to this size; beyond it the
/// check switches to a meet-in-the-middle search over count vectors.
const PLAIN_SUBSET_LIMIT: usize = 20;

/// A coordinate permutation λ plus nonzero column scalars: the matrix Q
/// with Q[i, λ(i)] = c_i. Every weight isometry of F^Ω has this shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIsometry {
    perm: Vec<usize>,
    scalars: Vec<FieldElement>,
}

impl MonomialIsometry {
    pub fn new(perm: Vec<usize>, scalars: Vec<FieldElement>) -> Result<MonomialIsometry, Error> {
        if perm.len() != scalars.len() {
            return Err(Error::Instance(
                "permutation and scalar lists have different lengths".into(),
            ));
        }
        let n = perm.len();
        let mut seen = vec![false; n];
        for &j in &perm {
            if j >= n || seen[j] {
                return Err(Error::Instance("not a permutation of the coordinates".into()));
            }
            seen[j] = true;
        }
        if scalars.iter().any(|c| c.is_zero()) {
            return Err(Error::Instance("monomial scalars must be nonzero".into()));
        }
        Ok(MonomialIsometry { perm, scalars })
    }

    pub fn identity(n: usize) -> MonomialIsometry {
        MonomialIsometry {
            perm: (0..n).collect(),
            scalars: vec![FieldElement::ONE; n],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// λ(i).
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// c_i (the scalar attached to source coordinate i).
    pub fn scalars(&self) -> &[FieldElement] {
        &self.scalars
    }

    /// φ(α), with φ(α)_{λ(i)} = c_i·α_i.
    pub fn apply(&self, field: &crate::gf::Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.perm.len());
        let mut out = vec![FieldElement::ZERO; v.len()];
        for (i, (&j, &c)) in self.perm.iter().zip(&self.scalars).enumerate() {
            out[j] = field.mul(c, v[i]);
        }
        out
    }

    /// The n×n monomial matrix Q realizing the map (so φ(v) = v·Q).
    pub fn matrix(&self, field: &crate::linalg::FieldRc) -> Matrix {
        let n = self.perm.len();
        let mut q = Matrix::zero(field, n, n);
        for (i, (&j, &c)) in self.perm.iter().zip(&self.scalars).enumerate() {
            q.set(i, j, c);
        }
        q
    }

    /// The isometry criterion: the permutation must preserve ω. (The
    /// monomial shape already guarantees supp(φ(α)) = λ[supp(α)].)
    pub fn is_isometry(&self, space: &WeightedSpace) -> bool {
        assert_eq!(self.perm.len(), space.len());
        self.perm
            .iter()
            .enumerate()
            .all(|(i, &j)| space.weight(i) == space.weight(j))
    }
}

/// Exhaustive oracle: wt(φ(α)) = wt(α) for every α ∈ F^Ω.
pub fn weight_preservation_bruteforce(
    iso: &MonomialIsometry,
    space: &WeightedSpace,
    field: &crate::linalg::FieldRc,
    cap: u64,
) -> Result<bool, Error> {
    let n = space.len();
    let total = crate::linalg::pow_u128(field.q() as u128, n as u32);
    if total > cap as u128 {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    let full = Subspace::full(field, n, crate::linalg::Side::Row);
    for alpha in full.vectors() {
        if space.wt(&iso.apply(field, &alpha)) != space.wt(&alpha) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_pair_shapes(l: &CodeMatrix, m: &CodeMatrix) -> Result<(), Error> {
    if **l.field() != **m.field() {
        return Err(Error::FieldMismatch);
    }
    if **l.space() != **m.space() {
        return Err(Error::ShapeMismatch(
            "the two maps must share one weighted coordinate space".into(),
        ));
    }
    if l.k() != m.k() {
        return Err(Error::ShapeMismatch(format!(
            "row counts differ: {} vs {}",
            l.k(),
            m.k()
        )));
    }
    Ok(())
}

/// An input vector on which the two maps' codeword weights differ.
#[derive(Debug, Clone)]
pub struct GammaWitness {
    pub gamma: Vec<FieldElement>,
    pub wt_left: Rat,
    pub wt_right: Rat,
}

#[derive(Debug, Clone)]
pub struct BruteForceEquivReport {
    pub holds: bool,
    pub witness: Option<GammaWitness>,
}

/// wt(γL) = wt(γM) for every γ ∈ F^k, by full enumeration.
pub fn locally_equivalent_bruteforce(
    l: &CodeMatrix,
    m: &CodeMatrix,
    cap: u64,
) -> Result<BruteForceEquivReport, Error> {
    check_pair_shapes(l, m)?;
    let k = l.k();
    let total = crate::linalg::pow_u128(l.field().q() as u128, k as u32);
    if total > cap as u128 {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    let full = Subspace::full(l.field(), k, crate::linalg::Side::Row);
    for gamma in full.vectors() {
        let wl = l.space().wt(&l.encode(&gamma));
        let wr = m.space().wt(&m.encode(&gamma));
        if wl != wr {
            return Ok(BruteForceEquivReport {
                holds: false,
                witness: Some(GammaWitness {
                    gamma,
                    wt_left: wl,
                    wt_right: wr,
                }),
            });
        }
    }
    Ok(BruteForceEquivReport {
        holds: true,
        witness: None,
    })
}

/// A projective point whose per-point coordinate weight sums differ.
#[derive(Debug, Clone)]
pub struct PointWitness {
    pub point: ProjectivePoint,
    pub sum_left: Rat,
    pub sum_right: Rat,
}

#[derive(Debug, Clone)]
pub struct ProjectiveEquivReport {
    pub holds: bool,
    pub witness: Option<PointWitness>,
}

/// The column-map criterion: for every projective point I of F^[k], the
/// total ω-weight of coordinates whose L-column lies in I equals the
/// total for M. Costs O(|Ω|·#points); no q^k enumeration.
pub fn locally_equivalent_projective(
    l: &CodeMatrix,
    m: &CodeMatrix,
) -> Result<ProjectiveEquivReport, Error> {
    check_pair_shapes(l, m)?;
    let field = l.field();
    let points = projective_points(field, l.k());
    let index: BTreeMap<&ProjectivePoint, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut sums_l = vec![rat_int(0); points.len()];
    let mut sums_r = vec![rat_int(0); points.len()];
    for i in 0..l.n() {
        if let Some(pt) = point_of(field, &l.tau(i)) {
            sums_l[index[&pt]] += l.space().weight(i).clone();
        }
        if let Some(pt) = point_of(field, &m.tau(i)) {
            sums_r[index[&pt]] += m.space().weight(i).clone();
        }
    }
    for (idx, pt) in points.iter().enumerate() {
        if sums_l[idx] != sums_r[idx] {
            return Ok(ProjectiveEquivReport {
                holds: false,
                witness: Some(PointWitness {
                    point: pt.clone(),
                    sum_left: sums_l[idx].clone(),
                    sum_right: sums_r[idx].clone(),
                }),
            });
        }
    }
    Ok(ProjectiveEquivReport {
        holds: true,
        witness: None,
    })
}

/// Wt(image of B) for every m-dimensional subspace B, in enumeration
/// order. Two locally equivalent maps have identical profiles; equality
/// of profiles at any single m ∈ {1..k−1} conversely forces local
/// equivalence.
pub fn subspace_weight_profile(
    l: &CodeMatrix,
    m: usize,
    cap: u64,
) -> Result<Vec<(Subspace, Rat)>, Error> {
    let subs = subspaces(l.field(), l.k(), m, cap)?;
    Ok(subs
        .into_iter()
        .map(|b| {
            let w = l.image_weight(&b);
            (b, w)
        })
        .collect())
}

/// A same-sum pair of coordinate subsets with different weight multisets.
#[derive(Debug, Clone)]
pub struct UdpCounterexample {
    /// I ⊆ H, ascending coordinate indices.
    pub subset_h: Vec<usize>,
    /// J ⊆ K, ascending coordinate indices.
    pub subset_k: Vec<usize>,
    pub sum: Rat,
    /// Sorted weight values of I.
    pub multiset_h: Vec<Rat>,
    /// Sorted weight values of J.
    pub multiset_k: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct UdpReport {
    pub holds: bool,
    pub counterexample: Option<UdpCounterexample>,
}

fn multiset_of(space: &WeightedSpace, subset: &[usize]) -> Vec<Rat> {
    let mut ws: Vec<Rat> = subset.iter().map(|&i| space.weight(i).clone()).collect();
    ws.sort();
    ws
}

struct SumEntry {
    first_subset: Vec<usize>,
    first_multiset: Vec<Rat>,
    /// A later subset with the same sum but a different multiset, if any.
    conflict: Option<(Vec<usize>, Vec<Rat>)>,
}

fn subsets_by_sum(indices: &[usize], space: &WeightedSpace) -> BTreeMap<Rat, SumEntry> {
    let mut map: BTreeMap<Rat, SumEntry> = BTreeMap::new();
    for mask in 0u64..(1u64 << indices.len()) {
        let subset: Vec<usize> = (0..indices.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| indices[b])
            .collect();
        let multiset = multiset_of(space, &subset);
        let sum: Rat = multiset.iter().cloned().sum();
        match map.get_mut(&sum) {
            None => {
                map.insert(
                    sum,
                    SumEntry {
                        first_subset: subset,
                        first_multiset: multiset,
                        conflict: None,
                    },
                );
            }
            Some(entry) => {
                if entry.conflict.is_none() && multiset != entry.first_multiset {
                    entry.conflict = Some((subset, multiset));
                }
            }
        }
    }
    map
}

/// Plain path: enumerate all subsets of both sides, group by exact sum,
/// and require that every sum realized on both sides carries exactly one
/// weight multiset overall.
fn udp_plain(h: &[usize], k: &[usize], space: &WeightedSpace) -> UdpReport {
    let map_h = subsets_by_sum(h, space);
    let map_k = subsets_by_sum(k, space);
    for (sum, eh) in &map_h {
        let Some(ek) = map_k.get(sum) else { continue };
        let hs: Vec<(&Vec<usize>, &Vec<Rat>)> = std::iter::once((&eh.first_subset, &eh.first_multiset))
            .chain(eh.conflict.iter().map(|(s, m)| (s, m)))
            .collect();
        let ks: Vec<(&Vec<usize>, &Vec<Rat>)> = std::iter::once((&ek.first_subset, &ek.first_multiset))
            .chain(ek.conflict.iter().map(|(s, m)| (s, m)))
            .collect();
        for (sh, mh) in &hs {
            for (sk, mk) in &ks {
                if mh != mk {
                    return UdpReport {
                        holds: false,
                        counterexample: Some(UdpCounterexample {
                            subset_h: (*sh).clone(),
                            subset_k: (*sk).clone(),
                            sum: sum.clone(),
                            multiset_h: (*mh).clone(),
                            multiset_k: (*mk).clone(),
                        }),
                    };
                }
            }
        }
    }
    UdpReport {
        holds: true,
        counterexample: None,
    }
}

/// Meet-in-the-middle path. A violation exists iff some nonzero integer
/// vector c over the distinct weight values, bounded per value by the
/// multiplicities in H (above) and K (below), satisfies Σ c_v·v = 0:
/// positive entries pick the H-subset, negative entries the K-subset.
fn udp_mitm(h: &[usize], k: &[usize], space: &WeightedSpace) -> UdpReport {
    // distinct values with their member lists on each side
    let mut classes: BTreeMap<Rat, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &i in h {
        classes.entry(space.weight(i).clone()).or_default().0.push(i);
    }
    for &j in k {
        classes.entry(space.weight(j).clone()).or_default().1.push(j);
    }
    let values: Vec<(Rat, Vec<usize>, Vec<usize>)> = classes
        .into_iter()
        .map(|(v, (hs, ks))| (v, hs, ks))
        .collect();

    // Split so both halves have comparable assignment counts.
    let log_count = |(_, hs, ks): &(Rat, Vec<usize>, Vec<usize>)| {
        ((hs.len() + ks.len() + 1) as f64).ln()
    };
    let total: f64 = values.iter().map(log_count).sum();
    let mut acc = 0.0;
    let mut split = values.len();
    for (i, v) in values.iter().enumerate() {
        if acc >= total / 2.0 {
            split = i;
            break;
        }
        acc += log_count(v);
    }
    let (half_a, half_b) = values.split_at(split);

    // Enumerate count assignments over a half: c_v ∈ [−|K-class|, |H-class|].
    let assignments = |half: &[(Rat, Vec<usize>, Vec<usize>)]| -> Vec<(Rat, Vec<i64>)> {
        let mut out = vec![(rat_int(0), vec![0i64; half.len()])];
        for (idx, (v, hs, ks)) in half.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (hs.len() + ks.len() + 1));
            for (sum, counts) in &out {
                for c in -(ks.len() as i64)..=(hs.len() as i64) {
                    let mut counts = counts.clone();
                    counts[idx] = c;
                    let sum = sum.clone() + rat_int(c) * v.clone();
                    next.push((sum, counts));
                }
            }
            out = next;
        }
        out
    };

    let list_a = assignments(half_a);
    let mut first_nonzero_a: BTreeMap<Rat, Vec<i64>> = BTreeMap::new();
    for (sum, counts) in &list_a {
        if counts.iter().any(|&c| c != 0) {
            first_nonzero_a.entry(sum.clone()).or_insert_with(|| counts.clone());
        }
    }

    let mut solution: Option<Vec<i64>> = None;
    'outer: for (sum_b, counts_b) in assignments(half_b) {
        let target = -sum_b;
        let b_nonzero = counts_b.iter().any(|&c| c != 0);
        if let Some(counts_a) = first_nonzero_a.get(&target) {
            let mut c = counts_a.clone();
            c.extend(&counts_b);
            solution = Some(c);
            break 'outer;
        }
        if b_nonzero && target == rat_int(0) {
            let mut c = vec![0i64; half_a.len()];
            c.extend(&counts_b);
            solution = Some(c);
            break 'outer;
        }
    }

    let Some(c) = solution else {
        return UdpReport {
            holds: true,
            counterexample: None,
        };
    };
    let mut subset_h = Vec::new();
    let mut subset_k = Vec::new();
    for (ci, (_, hs, ks)) in c.iter().zip(values.iter()) {
        if *ci > 0 {
            subset_h.extend_from_slice(&hs[..*ci as usize]);
        } else if *ci < 0 {
            subset_k.extend_from_slice(&ks[..(-*ci) as usize]);
        }
    }
    subset_h.sort_unstable();
    subset_k.sort_unstable();
    let multiset_h = multiset_of(space, &subset_h);
    let multiset_k = multiset_of(space, &subset_k);
    let sum = multiset_h.iter().cloned().sum();
    UdpReport {
        holds: false,
        counterexample: Some(UdpCounterexample {
            subset_h,
            subset_k,
            sum,
            multiset_h,
            multiset_k,
        }),
    }
}

fn udp_check_with_limit(
    h: &[usize],
    k: &[usize],
    space: &WeightedSpace,
    plain_limit: usize,
) -> Result<UdpReport, Error> {
    let got = h.len().max(k.len());
    if got > SUBSET_GUARD {
        return Err(Error::SizeGuard {
            got,
            max: SUBSET_GUARD,
        });
    }
    for &i in h.iter().chain(k.iter()) {
        assert!(i < space.len(), "coordinate index out of range");
    }
    if got <= plain_limit {
        Ok(udp_plain(h, k, space))
    } else {
        Ok(udp_mitm(h, k, space))
    }
}

/// The unique-decomposition check on two designated coordinate sets:
/// holds iff any I ⊆ H and J ⊆ K with equal weight sums carry identical
/// weight multisets.
pub fn udp_check(h: &[usize], k: &[usize], space: &WeightedSpace) -> Result<UdpReport, Error> {
    udp_check_with_limit(h, k, space, PLAIN_SUBSET_LIMIT)
}

/// Extend a locally equivalent pair to a full monomial isometry with
/// M = L·Q. Per projective point and weight value, the two maps touch
/// equally many coordinates (equal per-point sums plus unique
/// decomposition), so matching them in ascending index order and scaling
/// each matched column works; off-image coordinates are matched weight
/// class by weight class with scalar 1.
pub fn extend_to_isometry(l: &CodeMatrix, m: &CodeMatrix) -> Result<MonomialIsometry, Error> {
    let proj = locally_equivalent_projective(l, m)?;
    if !proj.holds {
        return Err(Error::NotLocallyEquivalent);
    }
    let chi_l = l.chi_full();
    let chi_m = m.chi_full();
    let udp = udp_check(&chi_l, &chi_m, l.space())?;
    if !udp.holds {
        return Err(Error::UdpViolated);
    }

    let field = l.field();
    let n = l.n();
    let space = l.space();
    let mut perm = vec![usize::MAX; n];
    let mut scalars = vec![FieldElement::ONE; n];

    // on-image coordinates, matched per (projective point, weight value)
    let bucket = |code: &CodeMatrix, chi: &[usize]| {
        let mut map: BTreeMap<(Vec<FieldElement>, Rat), Vec<usize>> = BTreeMap::new();
        for &i in chi {
            let pt = point_of(field, &code.tau(i)).expect("columns in χ are nonzero");
            map.entry((pt.rep().to_vec(), space.weight(i).clone()))
                .or_default()
                .push(i);
        }
        map
    };
    let buckets_l = bucket(l, &chi_l);
    let mut buckets_m = bucket(m, &chi_m);
    for (key, lis) in buckets_l {
        let mis = buckets_m.remove(&key).unwrap_or_default();
        assert_eq!(
            lis.len(),
            mis.len(),
            "per-point weight classes must pair up once the criteria hold"
        );
        for (&i, &j) in lis.iter().zip(&mis) {
            let ti = l.tau(i);
            let tj = m.tau(j);
            let t = ti.iter().position(|e| !e.is_zero()).expect("nonzero column");
            let c = field
                .div(tj[t], ti[t])
                .expect("leading entries are nonzero");
            debug_assert_eq!(crate::wspace::vec_scale(field, c, &ti), tj);
            perm[i] = j;
            scalars[i] = c;
        }
    }
    assert!(
        buckets_m.is_empty(),
        "per-point weight classes must pair up once the criteria hold"
    );

    // off-image coordinates, matched per weight value
    let off = |chi: &[usize]| -> BTreeMap<Rat, Vec<usize>> {
        let mut map: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            if !chi.contains(&i) {
                map.entry(space.weight(i).clone()).or_default().push(i);
            }
        }
        map
    };
    let off_l = off(&chi_l);
    let mut off_m = off(&chi_m);
    for (w, lis) in off_l {
        let mis = off_m.remove(&w).unwrap_or_default();
        assert_eq!(
            lis.len(),
            mis.len(),
            "off-image weight classes must pair up once the criteria hold"
        );
        for (&i, &j) in lis.iter().zip(&mis) {
            perm[i] = j;
        }
    }
    assert!(off_m.is_empty());

    let iso = MonomialIsometry::new(perm, scalars)?;
    debug_assert!(iso.is_isometry(space));
    Ok(iso)
}

/// Two equal-weight indicator vectors that no isometry can connect.
#[derive(Debug, Clone)]
pub struct MepWitness {
    pub alpha: Vec<FieldElement>,
    pub beta: Vec<FieldElement>,
}

#[derive(Debug, Clone)]
pub struct MepReport {
    pub holds: bool,
    pub udp: UdpReport,
    pub witness: Option<MepWitness>,
}

/// The extension property holds on (Ω, ω) iff the unique-decomposition
/// check passes on (Ω, Ω). On failure the counterexample subsets yield
/// indicator vectors α, β of equal weight such that the single-vector
/// map α ↦ β preserves weights on the line Fα but extends to no
/// isometry: an isometry would carry supp(α) to supp(β) preserving ω,
/// forcing the two weight multisets to agree.
pub fn mep_check(space: &WeightedSpace) -> Result<MepReport, Error> {
    let all: Vec<usize> = (0..space.len()).collect();
    let udp = udp_check(&all, &all, space)?;
    if udp.holds {
        return Ok(MepReport {
            holds: true,
            udp,
            witness: None,
        });
    }
    let cx = udp.counterexample.as_ref().expect("failing report carries one");
    let indicator = |subset: &[usize]| -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; space.len()];
        for &i in subset {
            v[i] = FieldElement::ONE;
        }
        v
    };
    let witness = MepWitness {
        alpha: indicator(&cx.subset_h),
        beta: indicator(&cx.subset_k),
    };
    Ok(MepReport {
        holds: false,
        udp,
        witness: Some(witness),
    })
}

/// An isometry φ with φ(α) = β, built by extending the single-vector
/// map through the 1×|Ω| generator matrices of α and β.
pub fn transitivity_map(
    space: &crate::wspace::SpaceRc,
    field: &crate::linalg::FieldRc,
    alpha: &[FieldElement],
    beta: &[FieldElement],
) -> Result<MonomialIsometry, Error> {
    let l = CodeMatrix::new(space, Matrix::from_rows(field, &[alpha.to_vec()])?)?;
    let m = CodeMatrix::new(space, Matrix::from_rows(field, &[beta.to_vec()])?)?;
    let iso = extend_to_isometry(&l, &m)?;
    debug_assert_eq!(iso.apply(field, alpha), beta);
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::FieldRc;
    use crate::sampling;
    use crate::wspace::{rat, SpaceRc};
    use itertools::Itertools;
    use rand::Rng;
    use std::sync::Arc;

    fn field(p: u64, m: u32) -> FieldRc {
        Arc::new(Field::new(p, m, None).unwrap())
    }

    fn space_of(weights: &[(i64, i64)]) -> SpaceRc {
        Arc::new(
            WeightedSpace::new(
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, &(n, d))| ((i + 1).to_string(), rat(n, d))),
            )
            .unwrap(),
        )
    }

    fn uniform(n: usize) -> SpaceRc {
        Arc::new(WeightedSpace::uniform((1..=n).map(|i| i.to_string())).unwrap())
    }

    fn code(f: &FieldRc, s: &SpaceRc, rows: &[Vec<u64>]) -> CodeMatrix {
        CodeMatrix::new(s, Matrix::from_indices(f, rows).unwrap()).unwrap()
    }

    const CAP: u64 = 1_000_000;

    #[test]
    fn udp_uniform_weights_always_hold() {
        let s = uniform(6);
        let all: Vec<usize> = (0..6).collect();
        assert!(udp_check(&all, &all, &s).unwrap().holds);
        assert!(udp_check(&[0, 2], &[3, 4, 5], &s).unwrap().holds);
    }

    #[test]
    fn udp_classic_failure() {
        let s = space_of(&[(1, 1), (1, 1), (2, 1)]);
        let all: Vec<usize> = (0..3).collect();
        let report = udp_check(&all, &all, &s).unwrap();
        assert!(!report.holds);
        let cx = report.counterexample.unwrap();
        assert_eq!(cx.sum, rat_int(2));
        let mut pair = [cx.multiset_h.clone(), cx.multiset_k.clone()];
        pair.sort();
        assert_eq!(pair[0], vec![rat_int(1), rat_int(1)]);
        assert_eq!(pair[1], vec![rat_int(2)]);
    }

    #[test]
    fn udp_empty_side_holds() {
        let s = space_of(&[(1, 1), (2, 1)]);
        assert!(udp_check(&[], &[0, 1], &s).unwrap().holds);
        assert!(udp_check(&[], &[], &s).unwrap().holds);
    }

    #[test]
    fn udp_counterexample_is_valid() {
        let mut rng = sampling::rng(99);
        let mut failures = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=7usize);
            let s = sampling::random_space(&mut rng, n, 4, 2);
            let h: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let k: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let report = udp_check(&h, &k, &s).unwrap();
            if let Some(cx) = report.counterexample {
                assert!(!report.holds);
                failures += 1;
                assert!(cx.subset_h.iter().all(|i| h.contains(i)));
                assert!(cx.subset_k.iter().all(|j| k.contains(j)));
                assert_eq!(multiset_of(&s, &cx.subset_h), cx.multiset_h);
                assert_eq!(multiset_of(&s, &cx.subset_k), cx.multiset_k);
                let sum_h: Rat = cx.multiset_h.iter().cloned().sum();
                let sum_k: Rat = cx.multiset_k.iter().cloned().sum();
                assert_eq!(sum_h, sum_k);
                assert_eq!(sum_h, cx.sum);
                assert_ne!(cx.multiset_h, cx.multiset_k);
            }
        }
        assert!(failures > 0, "sweep should hit failing instances");
    }

    /// The meet-in-the-middle path must agree with plain enumeration.
    #[test]
    fn udp_mitm_agrees_with_plain() {
        let mut rng = sampling::rng(4242);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7usize);
            let s = sampling::random_space(&mut rng, n, 4, 2);
            let h: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let k: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let plain = udp_check_with_limit(&h, &k, &s, 20).unwrap();
            let mitm = udp_check_with_limit(&h, &k, &s, 0).unwrap();
            assert_eq!(plain.holds, mitm.holds);
            if let Some(cx) = mitm.counterexample {
                let sum_h: Rat = cx.multiset_h.iter().cloned().sum();
                let sum_k: Rat = cx.multiset_k.iter().cloned().sum();
                assert_eq!(sum_h, sum_k);
                assert_ne!(cx.multiset_h, cx.multiset_k);
                assert!(cx.subset_h.iter().all(|i| h.contains(i)));
                assert!(cx.subset_k.iter().all(|j| k.contains(j)));
            }
        }
    }

    #[test]
    fn udp_size_guard() {
        let s = Arc::new(
            WeightedSpace::uniform((1..=25).map(|i| i.to_string())).unwrap(),
        );
        let all: Vec<usize> = (0..25).collect();
        assert!(matches!(
            udp_check(&all, &all, &s),
            Err(Error::SizeGuard { got: 25, max: 24 })
        ));
    }

    #[test]
    fn local_equiv_identical_maps() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        assert!(locally_equivalent_bruteforce(&l, &l, CAP).unwrap().holds);
        assert!(locally_equivalent_projective(&l, &l).unwrap().holds);
    }

    #[test]
    fn local_equiv_swap_example() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let m = code(&f, &s, &[vec![0, 1, 1]]);
        assert!(locally_equivalent_bruteforce(&l, &m, CAP).unwrap().holds);
        assert!(locally_equivalent_projective(&l, &m).unwrap().holds);
    }

    #[test]
    fn local_equiv_weighted_example() {
        let f = field(2, 1);
        let s = space_of(&[(1, 1), (1, 1), (2, 1)]);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let m = code(&f, &s, &[vec![0, 0, 1]]);
        assert!(locally_equivalent_bruteforce(&l, &m, CAP).unwrap().holds);
        assert!(locally_equivalent_projective(&l, &m).unwrap().holds);
    }

    #[test]
    fn local_equiv_failure_with_witnesses() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let m = code(&f, &s, &[vec![1, 0, 0], vec![1, 0, 0]]);
        let brute = locally_equivalent_bruteforce(&l, &m, CAP).unwrap();
        assert!(!brute.holds);
        let w = brute.witness.unwrap();
        assert_eq!(l.space().wt(&l.encode(&w.gamma)), w.wt_left);
        assert_eq!(m.space().wt(&m.encode(&w.gamma)), w.wt_right);
        assert_ne!(w.wt_left, w.wt_right);

        let proj = locally_equivalent_projective(&l, &m).unwrap();
        assert!(!proj.holds);
        let w = proj.witness.unwrap();
        assert_ne!(w.sum_left, w.sum_right);
    }

    fn random_pair(
        rng: &mut rand_chacha::ChaCha8Rng,
        force_equivalent: bool,
    ) -> (CodeMatrix, CodeMatrix) {
        let f = sampling::random_field(rng);
        let k = rng.gen_range(1..=3usize);
        let n = rng.gen_range(1..=6usize);
        let s = sampling::random_space(rng, n, 6, 3);
        let l = CodeMatrix::new(&s, sampling::random_matrix(rng, &f, k, n)).unwrap();
        let m = if force_equivalent {
            let perm = sampling::random_weight_preserving_permutation(rng, &s);
            let scalars: Vec<FieldElement> =
                (0..n).map(|_| sampling::random_nonzero_element(rng, &f)).collect();
            let iso = MonomialIsometry::new(perm, scalars).unwrap();
            assert!(iso.is_isometry(&s));
            let grid = l.grid().mul(&iso.matrix(&f)).unwrap();
            CodeMatrix::new(&s, grid).unwrap()
        } else {
            CodeMatrix::new(&s, sampling::random_matrix(rng, &f, k, n)).unwrap()
        };
        (l, m)
    }

    /// Brute force ⇔ projective ⇔ equal profiles at every single m.
    #[test]
    fn three_way_criterion_agreement() {
        let mut rng = sampling::rng(0x7EA);
        for trial in 0..120 {
            let (l, m) = random_pair(&mut rng, trial % 3 == 0);
            let brute = locally_equivalent_bruteforce(&l, &m, CAP).unwrap().holds;
            let proj = locally_equivalent_projective(&l, &m).unwrap().holds;
            assert_eq!(brute, proj, "trial {trial}");
            for dim in 1..l.k() {
                let pl = subspace_weight_profile(&l, dim, CAP).unwrap();
                let pm = subspace_weight_profile(&m, dim, CAP).unwrap();
                assert_eq!(pl == pm, brute, "trial {trial}, dim {dim}");
            }
        }
    }

    /// Composing with any weight-preserving monomial map stays equivalent.
    #[test]
    fn global_implies_local() {
        let mut rng = sampling::rng(0x91);
        for _ in 0..80 {
            let (l, m) = random_pair(&mut rng, true);
            assert!(locally_equivalent_bruteforce(&l, &m, CAP).unwrap().holds);
            assert!(locally_equivalent_projective(&l, &m).unwrap().holds);
        }
    }

    #[test]
    fn extend_identity_case() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let iso = extend_to_isometry(&l, &l).unwrap();
        assert!(iso.is_isometry(&s));
        assert_eq!(l.grid().mul(&iso.matrix(&f)).unwrap(), *l.grid());
    }

    #[test]
    fn extend_swap_case() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let m = code(&f, &s, &[vec![0, 1, 1]]);
        let iso = extend_to_isometry(&l, &m).unwrap();
        assert!(iso.is_isometry(&s));
        assert_eq!(l.grid().mul(&iso.matrix(&f)).unwrap(), *m.grid());
        // support carried onto support
        let lam: Vec<usize> = vec![iso.perm()[0], iso.perm()[1]];
        let mut lam_sorted = lam.clone();
        lam_sorted.sort_unstable();
        assert_eq!(lam_sorted, vec![1, 2]);
    }

    #[test]
    fn extend_scalar_case() {
        let f = field(3, 1);
        let s = uniform(2);
        let l = code(&f, &s, &[vec![1, 0]]);
        let m = code(&f, &s, &[vec![2, 0]]);
        let iso = extend_to_isometry(&l, &m).unwrap();
        assert_eq!(iso.perm(), &[0, 1]);
        assert_eq!(iso.scalars()[0], FieldElement(2));
        assert_eq!(l.grid().mul(&iso.matrix(&f)).unwrap(), *m.grid());
    }

    #[test]
    fn extend_rejects_inequivalent_maps() {
        let f = field(2, 1);
        let s = uniform(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let m = code(&f, &s, &[vec![1, 0, 0]]);
        assert!(matches!(
            extend_to_isometry(&l, &m),
            Err(Error::NotLocallyEquivalent)
        ));
    }

    #[test]
    fn extend_rejects_udp_failures() {
        let f = field(2, 1);
        let s = space_of(&[(1, 1), (1, 1), (2, 1)]);
        let l = code(&f, &s, &[vec![0, 0, 1]]);
        let m = code(&f, &s, &[vec![1, 1, 0]]);
        // weights agree on every input, so the pair is locally equivalent
        assert!(locally_equivalent_bruteforce(&l, &m, CAP).unwrap().holds);
        assert!(matches!(
            extend_to_isometry(&l, &m),
            Err(Error::UdpViolated)
        ));
    }

    /// Generated equivalent pairs that pass the unique-decomposition
    /// check must extend, and the extension must reproduce M exactly and
    /// preserve weights everywhere.
    #[test]
    fn extension_soundness_randomized() {
        let mut rng = sampling::rng(0x50DA);
        let mut successes = 0;
        let mut attempts = 0;
        while successes < 60 && attempts < 2000 {
            attempts += 1;
            let (l, m) = random_pair(&mut rng, true);
            let udp = udp_check(&l.chi_full(), &m.chi_full(), l.space()).unwrap();
            if !udp.holds {
                continue;
            }
            let iso = extend_to_isometry(&l, &m).expect("preconditions verified");
            assert!(iso.is_isometry(l.space()));
            assert_eq!(
                l.grid().mul(&iso.matrix(l.field())).unwrap(),
                *m.grid(),
                "extension must reproduce M as L·Q"
            );
            if crate::linalg::pow_u128(l.field().q() as u128, l.n() as u32) <= CAP as u128 {
                assert!(weight_preservation_bruteforce(&iso, l.space(), l.field(), CAP).unwrap());
            }
            successes += 1;
        }
        assert!(successes >= 60, "only {successes} extendable pairs in {attempts} attempts");
    }

    #[test]
    fn isometry_criterion_examples() {
        let s = space_of(&[(1, 1), (2, 1), (1, 1)]);
        let f = field(2, 1);
        assert!(MonomialIsometry::identity(3).is_isometry(&s));
        // swapping the two weight-1 coordinates is fine
        let swap02 = MonomialIsometry::new(vec![2, 1, 0], vec![FieldElement::ONE; 3]).unwrap();
        assert!(swap02.is_isometry(&s));
        assert!(weight_preservation_bruteforce(&swap02, &s, &f, CAP).unwrap());
        // swapping coordinates of different weight is not
        let swap01 = MonomialIsometry::new(vec![1, 0, 2], vec![FieldElement::ONE; 3]).unwrap();
        assert!(!swap01.is_isometry(&s));
        assert!(!weight_preservation_bruteforce(&swap01, &s, &f, CAP).unwrap());
    }

    #[test]
    fn monomial_validation() {
        assert!(MonomialIsometry::new(vec![0, 0], vec![FieldElement::ONE; 2]).is_err());
        assert!(MonomialIsometry::new(vec![0, 2], vec![FieldElement::ONE; 2]).is_err());
        assert!(MonomialIsometry::new(vec![0, 1], vec![FieldElement::ZERO, FieldElement::ONE])
            .is_err());
        assert!(MonomialIsometry::new(vec![1, 0], vec![FieldElement::ONE]).is_err());
    }

    #[test]
    fn mep_examples() {
        assert!(mep_check(&uniform(4)).unwrap().holds);
        assert!(mep_check(&space_of(&[(5, 2)])).unwrap().holds);

        let report = mep_check(&space_of(&[(1, 1), (1, 1), (2, 1)])).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        let s = space_of(&[(1, 1), (1, 1), (2, 1)]);
        assert_eq!(s.wt(&w.alpha), s.wt(&w.beta));
        let mut pair = [s.supp_indices(&w.alpha), s.supp_indices(&w.beta)];
        pair.sort();
        assert_eq!(pair[0], vec![0, 1]);
        assert_eq!(pair[1], vec![2]);
    }

    /// No monomial map that preserves ω can carry the failing witness α
    /// to β — verified by exhaustive search over all n!·(q−1)^n maps.
    #[test]
    fn mep_witness_defeats_exhaustive_search() {
        for (weights, p) in [
            (vec![(1, 1), (1, 1), (2, 1)], 2u64),
            (vec![(1, 1), (1, 1), (2, 1)], 3),
            (vec![(1, 2), (1, 2), (1, 1), (3, 1)], 2),
            (vec![(1, 1), (2, 1), (3, 1)], 2),
        ] {
            let s = space_of(&weights);
            let f = field(p, 1);
            let report = mep_check(&s).unwrap();
            assert!(!report.holds, "chosen weights must fail the check");
            let w = report.witness.unwrap();
            assert_eq!(s.wt(&w.alpha), s.wt(&w.beta));

            let n = s.len();
            let q = f.q() as u64;
            let budget = (1..=n as u64).product::<u64>() * (q - 1).pow(n as u32);
            assert!(budget <= 1_000_000, "search stays within the map budget");

            let mut found = false;
            for perm in (0..n).permutations(n) {
                // scalar odometer over (q−1)^n
                let mut digits = vec![0u64; n];
                loop {
                    let scalars: Vec<FieldElement> = digits
                        .iter()
                        .map(|&d| f.element(d + 1).unwrap())
                        .collect();
                    let iso = MonomialIsometry::new(perm.clone(), scalars).unwrap();
                    if iso.is_isometry(&s) && iso.apply(&f, &w.alpha) == w.beta {
                        found = true;
                    }
                    let mut pos = n;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        digits[pos] += 1;
                        if digits[pos] < q - 1 {
                            break;
                        }
                        digits[pos] = 0;
                    }
                    if digits.iter().all(|&d| d == 0) {
                        break;
                    }
                }
            }
            assert!(!found, "no weight-preserving monomial map may connect the witness");
        }
    }

    #[test]
    fn transitivity_examples() {
        let f = field(2, 1);
        let s = uniform(3);
        let a = vec![FieldElement::ONE, FieldElement::ONE, FieldElement::ZERO];
        let iso = transitivity_map(&s, &f, &a, &a).unwrap();
        assert_eq!(iso.apply(&f, &a), a);

        let b = vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ONE];
        let iso = transitivity_map(&s, &f, &a, &b).unwrap();
        assert!(iso.is_isometry(&s));
        assert_eq!(iso.apply(&f, &a), b);

        // unequal weights: no isometry can exist
        let sw = space_of(&[(1, 1), (1, 1), (2, 1)]);
        let alpha = vec![FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE];
        let beta = vec![FieldElement::ONE, FieldElement::ONE, FieldElement::ZERO];
        assert!(matches!(
            transitivity_map(&sw, &f, &alpha, &beta),
            Err(Error::UdpViolated)
        ));
        let gamma = vec![FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO];
        assert!(matches!(
            transitivity_map(&sw, &f, &alpha, &gamma),
            Err(Error::NotLocallyEquivalent)
        ));
    }

    /// Random same-weight vector pairs over a space that passes the
    /// extension check must always be connected by some isometry.
    #[test]
    fn transitivity_randomized() {
        let mut rng = sampling::rng(0xA110);
        let mut connected = 0;
        for _ in 0..300 {
            let f = sampling::random_field(&mut rng);
            let n = rng.gen_range(1..=5usize);
            let s = sampling::random_space(&mut rng, n, 4, 2);
            if !mep_check(&s).unwrap().holds {
                continue;
            }
            let alpha = sampling::random_vector(&mut rng, &f, n);
            let beta = sampling::random_vector(&mut rng, &f, n);
            let same_weight = s.wt(&alpha) == s.wt(&beta);
            match transitivity_map(&s, &f, &alpha, &beta) {
                Ok(iso) => {
                    assert!(same_weight);
                    assert!(iso.is_isometry(&s));
                    assert_eq!(iso.apply(&f, &alpha), beta);
                    connected += 1;
                }
                Err(Error::NotLocallyEquivalent) => {
                    // supports are scalar-invariant, so single-vector
                    // maps are locally equivalent exactly when the two
                    // vectors have equal weight
                    assert!(!same_weight);
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(connected > 0, "sweep should exercise successful extensions");
    }
}

//! Two-sided verifiers for the counting identities underlying the
//! weighted-metric theory. Each check computes its left side by direct
//! enumeration and its right side by an independent closed form, then
//! compares with exact rational equality — the two routes deliberately
//! share no code, so either one can catch a bug in the other.

use num::BigInt;

use crate::linalg::{pow_u128, qbinom, subspaces_containing, Subspace};
use crate::wspace::{rat_int, CodeMatrix, Rat};
use crate::Error;

/// Both sides of one identity instance, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: Rat,
    pub rhs: Rat,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn rat_pow(q: u64, e: u32) -> Rat {
    rat_int(BigInt::from(q).pow(e))
}

/// Σ_{θ∈B} wt(θL) versus (q^m − q^{m−1})·Wt(L[B]) for an m-dimensional
/// subspace B of F^k: summing every vector weight over B must equal the
/// image's set weight scaled by the number of vectors hitting each
/// support coordinate. The left side enumerates all q^m vectors; the
/// right side only looks at the basis images.
pub fn weight_sum_over_subspace(
    l: &CodeMatrix,
    b: &Subspace,
    cap: u64,
) -> Result<IdentityCheck, Error> {
    let q = l.field().q() as u64;
    let m = b.dim() as u32;
    if b.vector_count() > cap as u128 {
        return Err(Error::CapExceeded {
            needed: b.vector_count(),
            cap,
        });
    }
    let mut lhs = rat_int(0);
    for theta in b.vectors() {
        lhs += l.space().wt(&l.encode(&theta));
    }
    // q^m − q^{m−1} as an exact rational: q^m·(q−1)/q. For m = 0 this is
    // fractional but multiplies Wt(L[{0}]) = 0.
    let factor = rat_pow(q, m) * Rat::new(BigInt::from(q - 1), BigInt::from(q));
    let rhs = factor * l.image_weight(b);
    Ok(IdentityCheck { lhs, rhs })
}

/// Σ_{B ⊇ A, dim B = m} Wt(L[B]) versus
/// q^{k−m}·[k−a−1 choose m−a−1]_q·Wt(L[F^k]) + [k−a−1 choose m−a]_q·Wt(L[A]),
/// where a = dim A. The left side enumerates every m-dimensional
/// superspace of A; the right side is the closed form obtained by
/// counting, for each coordinate, how many superspaces' images hit it.
pub fn superspace_weight_sum(
    l: &CodeMatrix,
    a: &Subspace,
    m: usize,
    cap: u64,
) -> Result<IdentityCheck, Error> {
    let k = l.k();
    let q = l.field().q() as u64;
    let adim = a.dim();
    if adim > k - 1 || m < adim + 1 || m > k {
        return Err(Error::Unsupported(format!(
            "need dim(A) ≤ k−1 and dim(A)+1 ≤ m ≤ k, got dim(A)={adim}, m={m}, k={k}"
        )));
    }
    let mut lhs = rat_int(0);
    for b in subspaces_containing(a, m, cap)? {
        lhs += l.image_weight(&b);
    }
    let full_term = rat_pow(q, (k - m) as u32)
        * rat_int(qbinom((k - adim - 1) as u64, (m - adim - 1) as u64, q))
        * l.full_image_weight();
    let sub_term =
        rat_int(qbinom((k - adim - 1) as u64, (m - adim) as u64, q)) * l.image_weight(a);
    Ok(IdentityCheck {
        lhs,
        rhs: full_term + sub_term,
    })
}

/// Wt(L[U]) computed two ways: directly from U's basis images, and as
/// Wt(L[F^k]) minus the weight of the coordinates whose column lies in
/// the annihilator U^⊥ (a column pairs to zero with all of U exactly
/// when the image never touches that coordinate).
pub fn image_weight_via_dual(l: &CodeMatrix, u: &Subspace) -> IdentityCheck {
    let direct = l.image_weight(u);
    let dual = u.dual();
    let mut dropped = rat_int(0);
    for i in l.chi_full() {
        if dual.contains_vector(&l.tau(i)) {
            dropped += l.space().weight(i).clone();
        }
    }
    let via_dual = l.full_image_weight() - dropped;
    IdentityCheck {
        lhs: direct,
        rhs: via_dual,
    }
}

/// For a generator whose per-projective-point column weight sums are all
/// equal to σ: the total column weight falling inside a subspace U of
/// F^[k] must be (|U|−1)·σ/(q−1), since U∖{0} splits into
/// (|U|−1)/(q−1) projective classes each contributing σ.
pub fn constant_column_weight_sum(g: &CodeMatrix, u: &Subspace) -> Result<IdentityCheck, Error> {
    let report = crate::cwc::sigma_check(g)?;
    let Some(sigma) = report.sigma else {
        return Err(Error::NotConstantWeight);
    };
    let q = g.field().q() as u64;
    let mut lhs = rat_int(0);
    for i in g.chi_full() {
        if u.contains_vector(&g.tau(i)) {
            lhs += g.space().weight(i).clone();
        }
    }
    let card_u = BigInt::from(pow_u128(q as u128, u.dim() as u32));
    let rhs = Rat::new(card_u - BigInt::from(1), BigInt::from(q - 1)) * sigma;
    Ok(IdentityCheck { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::{subspaces, FieldRc, Matrix, Side};
    use crate::sampling;
    use crate::wspace::{rat, SpaceRc, WeightedSpace};
    use std::sync::Arc;

    fn field(p: u64, m: u32) -> FieldRc {
        Arc::new(Field::new(p, m, None).unwrap())
    }

    fn uniform_space(n: usize) -> SpaceRc {
        Arc::new(WeightedSpace::uniform((1..=n).map(|i| i.to_string())).unwrap())
    }

    fn code(f: &FieldRc, s: &SpaceRc, rows: &[Vec<u64>]) -> CodeMatrix {
        CodeMatrix::new(s, Matrix::from_indices(f, rows).unwrap()).unwrap()
    }

    const CAP: u64 = 1_000_000;

    #[test]
    fn vector_weight_sum_trivial_cases() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let zero = code(&f, &s, &[vec![0, 0, 0], vec![0, 0, 0]]);
        for dim in 0..=2 {
            for b in subspaces(&f, 2, dim, CAP).unwrap() {
                let chk = weight_sum_over_subspace(&zero, &b, CAP).unwrap();
                assert_eq!(chk.lhs, rat_int(0));
                assert!(chk.holds());
            }
        }
        // zero subspace, nonzero map
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let b0 = Subspace::zero(&f, 1, Side::Row);
        let chk = weight_sum_over_subspace(&l, &b0, CAP).unwrap();
        assert_eq!(chk.lhs, rat_int(0));
        assert!(chk.holds());
    }

    #[test]
    fn vector_weight_sum_line_example() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let l = code(&f, &s, &[vec![1, 1, 0]]);
        let b = Subspace::full(&f, 1, Side::Row);
        let chk = weight_sum_over_subspace(&l, &b, CAP).unwrap();
        assert_eq!(chk.lhs, rat_int(2));
        assert_eq!(chk.rhs, rat_int(2));
        assert!(chk.holds());
    }

    #[test]
    fn superspace_sum_single_row_case() {
        let f = field(3, 1);
        let s = uniform_space(4);
        let l = code(&f, &s, &[vec![1, 0, 2, 0]]);
        let a = Subspace::zero(&f, 1, Side::Row);
        let chk = superspace_weight_sum(&l, &a, 1, CAP).unwrap();
        assert_eq!(chk.lhs, l.full_image_weight());
        assert!(chk.holds());
    }

    #[test]
    fn superspace_sum_plane_example() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let l = code(&f, &s, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let a = Subspace::zero(&f, 2, Side::Row);
        let chk = superspace_weight_sum(&l, &a, 1, CAP).unwrap();
        assert_eq!(chk.lhs, rat_int(6));
        assert_eq!(chk.rhs, rat_int(6));
    }

    #[test]
    fn superspace_sum_rejects_bad_range() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let l = code(&f, &s, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let a = Subspace::full(&f, 2, Side::Row); // dim k not allowed
        assert!(superspace_weight_sum(&l, &a, 2, CAP).is_err());
        let z = Subspace::zero(&f, 2, Side::Row);
        assert!(superspace_weight_sum(&l, &z, 0, CAP).is_err());
    }

    #[test]
    fn dual_route_examples() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let l = code(&f, &s, &[vec![1, 0, 1], vec![0, 1, 1]]);

        let full = Subspace::full(&f, 2, Side::Row);
        let chk = image_weight_via_dual(&l, &full);
        assert_eq!(chk.lhs, l.full_image_weight());
        assert!(chk.holds());

        let zero = Subspace::zero(&f, 2, Side::Row);
        let chk = image_weight_via_dual(&l, &zero);
        assert_eq!(chk.lhs, rat_int(0));
        assert!(chk.holds());

        let u = Subspace::from_generators(
            &f,
            2,
            &[vec![crate::gf::FieldElement::ONE, crate::gf::FieldElement::ZERO]],
            Side::Row,
        )
        .unwrap();
        let chk = image_weight_via_dual(&l, &u);
        assert_eq!(chk.lhs, rat_int(2));
        assert_eq!(chk.rhs, rat_int(2));
    }

    #[test]
    fn column_weight_sum_on_simplex() {
        let g = crate::cwc::simplex_generator(&field(2, 1), 2, 1).unwrap();
        let f = g.field().clone();

        let u0 = Subspace::zero(&f, 2, Side::Column);
        let chk = constant_column_weight_sum(&g, &u0).unwrap();
        assert_eq!(chk.lhs, rat_int(0));
        assert!(chk.holds());

        for u in subspaces(&f, 2, 1, CAP).unwrap() {
            let chk = constant_column_weight_sum(&g, &u.with_side(Side::Column)).unwrap();
            assert_eq!(chk.lhs, rat_int(1)); // σ = 1 for the plain simplex
            assert!(chk.holds());
        }

        let ufull = Subspace::full(&f, 2, Side::Column);
        let chk = constant_column_weight_sum(&g, &ufull).unwrap();
        assert_eq!(chk.lhs, rat_int(3));
        assert_eq!(chk.rhs, rat_int(3));
    }

    #[test]
    fn column_weight_sum_requires_constant_sums() {
        let f = field(2, 1);
        let s = uniform_space(3);
        let g = code(&f, &s, &[vec![1, 0, 0], vec![0, 1, 1]]);
        let u = Subspace::full(&f, 2, Side::Column);
        assert!(matches!(
            constant_column_weight_sum(&g, &u),
            Err(Error::NotConstantWeight)
        ));
    }

    /// Randomized sweep: both enumeration identities hold on every
    /// admissible (B) and (A, m) of 60 seeded instances.
    #[test]
    fn randomized_sweep_all_identities() {
        let mut rng = sampling::rng(0xD15EA5E);
        for trial in 0..60 {
            let inst = sampling::random_code_instance(&mut rng, 3, 6);
            let k = inst.code.k();
            for dim in 0..=k {
                for b in subspaces(&inst.field, k, dim, CAP).unwrap() {
                    let chk = weight_sum_over_subspace(&inst.code, &b, CAP).unwrap();
                    assert!(chk.holds(), "trial {trial}: vector-weight sum failed");
                    let chk = image_weight_via_dual(&inst.code, &b);
                    assert!(chk.holds(), "trial {trial}: dual route failed");
                }
            }
            for adim in 0..k {
                for a in subspaces(&inst.field, k, adim, CAP).unwrap() {
                    for m in adim + 1..=k {
                        let chk = superspace_weight_sum(&inst.code, &a, m, CAP).unwrap();
                        assert!(chk.holds(), "trial {trial}: superspace sum failed");
                    }
                }
            }
        }
    }

    /// The dual-route identity with non-uniform weights on a handmade case.
    #[test]
    fn dual_route_with_rational_weights() {
        let f = field(3, 1);
        let s = Arc::new(
            WeightedSpace::new(vec![
                ("1".into(), rat(1, 2)),
                ("2".into(), rat(7, 3)),
                ("3".into(), rat(2, 1)),
            ])
            .unwrap(),
        );
        let l = code(&f, &s, &[vec![1, 2, 0], vec![0, 1, 1]]);
        for dim in 0..=2 {
            for u in subspaces(&f, 2, dim, CAP).unwrap() {
                assert!(image_weight_via_dual(&l, &u).holds());
            }
        }
    }
}

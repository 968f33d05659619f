//! Linear algebra over GF(q): matrices, reduced row echelon form,
//! canonical subspace enumeration, annihilator duals, projective points,
//! and Gaussian (q-binomial) coefficients.

use std::sync::Arc;

use itertools::Itertools;
use num::{BigInt, Integer, One, Zero};

use crate::gf::{Field, FieldElement};
use crate::Error;

/// Shared handle to a field; matrices and subspaces hold one of these.
pub type FieldRc = Arc<Field>;

/// Row-major matrix over a single field.
#[derive(Debug, Clone)]
pub struct Matrix {
    field: FieldRc,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Matrix {
    pub fn zero(field: &FieldRc, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldRc, k: usize) -> Matrix {
        let mut m = Matrix::zero(field, k, k);
        for i in 0..k {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(field: &FieldRc, rows: &[Vec<FieldElement>]) -> Result<Matrix, Error> {
        let Some(first) = rows.first() else {
            return Err(Error::ShapeMismatch(
                "cannot infer column count from an empty row list".into(),
            ));
        };
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("rows have unequal lengths".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// Build from element indices, validating each against the field.
    pub fn from_indices(field: &FieldRc, rows: &[Vec<u64>]) -> Result<Matrix, Error> {
        let mut element_rows = Vec::with_capacity(rows.len());
        for row in rows {
            element_rows.push(
                row.iter()
                    .map(|&i| field.element(i))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Matrix::from_rows(field, &element_rows)
    }

    pub fn field(&self) -> &FieldRc {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn col(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if *self.field != *rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zero(&self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let add = f.mul(a, rhs.get(i, c));
                    out.set(r, c, f.add(out.get(r, c), add));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: v (len = rows) ↦ v·M (len = cols).
    pub fn vec_mul(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] = f.add(out[c], f.mul(coef, self.get(r, c)));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (x, y) = (self.get(a, c), self.get(b, c));
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    fn scale_row(&mut self, r: usize, s: FieldElement) {
        for c in 0..self.cols {
            let v = self.field.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row_i ← row_i − s·row_j
    fn row_sub_scaled(&mut self, i: usize, j: usize, s: FieldElement) {
        for c in 0..self.cols {
            let v = self
                .field
                .sub(self.get(i, c), self.field.mul(s, self.get(j, c)));
            self.set(i, c, v);
        }
    }

    /// Reduced row echelon form with rank and 0-based pivot columns.
    pub fn rref(&self) -> RrefResult {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.field.inv(m.get(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if !factor.is_zero() {
                        m.row_sub_scaled(i, r, factor);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RrefResult {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }
}

#[derive(Debug, Clone)]
pub struct RrefResult {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Which coordinate space a subspace lives in: row vectors (inputs γ aka
/// the space X ≅ F^k) or column vectors (the column-map codomain F^[k]).
/// The tag carries no arithmetic content; duals flip it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Row,
    Column,
}

/// A subspace of F^k in canonical form: the basis is a full-row-rank RREF
/// matrix, so two subspaces are equal iff their basis grids are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    side: Side,
}

impl Subspace {
    /// Span of an arbitrary generating set (rows may be dependent or zero).
    pub fn from_generators(
        field: &FieldRc,
        ambient: usize,
        gens: &[Vec<FieldElement>],
        side: Side,
    ) -> Result<Subspace, Error> {
        if gens.iter().any(|g| g.len() != ambient) {
            return Err(Error::ShapeMismatch(format!(
                "generator length differs from ambient dimension {ambient}"
            )));
        }
        if gens.is_empty() {
            return Ok(Subspace::zero(field, ambient, side));
        }
        let reduced = Matrix::from_rows(field, gens)?.rref();
        let basis_rows: Vec<Vec<FieldElement>> = (0..reduced.rank)
            .map(|r| reduced.matrix.row(r).to_vec())
            .collect();
        let basis = if basis_rows.is_empty() {
            Matrix::zero(field, 0, ambient)
        } else {
            Matrix::from_rows(field, &basis_rows)?
        };
        Ok(Subspace {
            ambient,
            basis,
            side,
        })
    }

    pub fn zero(field: &FieldRc, ambient: usize, side: Side) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, 0, ambient),
            side,
        }
    }

    pub fn full(field: &FieldRc, ambient: usize, side: Side) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            side,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> Subspace {
        self.side = side;
        self
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> &FieldRc {
        self.basis.field()
    }

    /// Pivot columns of the canonical basis.
    fn pivots(&self) -> Vec<usize> {
        let mut pivots = Vec::with_capacity(self.dim());
        for r in 0..self.dim() {
            let c = (0..self.ambient)
                .find(|&c| !self.basis.get(r, c).is_zero())
                .expect("basis rows are nonzero");
            pivots.push(c);
        }
        pivots
    }

    pub fn contains_vector(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = self.basis.field();
        let mut rem = v.to_vec();
        for (r, &p) in self.pivots().iter().enumerate() {
            let coef = rem[p];
            if !coef.is_zero() {
                for c in 0..self.ambient {
                    rem[c] = f.sub(rem[c], f.mul(coef, self.basis.get(r, c)));
                }
            }
        }
        rem.iter().all(|e| e.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.row_iter().all(|row| self.contains_vector(row))
    }

    /// Number of vectors in the subspace (q^dim).
    pub fn vector_count(&self) -> u128 {
        pow_u128(self.field().q() as u128, self.dim() as u32)
    }

    /// All q^dim vectors, in odometer order over basis coefficients
    /// (coefficient of the first basis row is the least significant digit).
    pub fn vectors(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        let q = self.field().q() as u128;
        let dim = self.dim();
        (0..self.vector_count()).map(move |mut n| {
            let mut coeffs = Vec::with_capacity(dim);
            for _ in 0..dim {
                coeffs.push(FieldElement((n % q) as u8));
                n /= q;
            }
            self.basis.vec_mul(&coeffs)
        })
    }

    /// The annihilator {β | Σ α_i β_i = 0 for all α in self}, living on
    /// the opposite side. dim(dual) = ambient − dim.
    pub fn dual(&self) -> Subspace {
        let field = self.field().clone();
        let pivots = self.pivots();
        let is_pivot = |c: usize| pivots.contains(&c);
        let mut kernel_rows = Vec::with_capacity(self.ambient - self.dim());
        for cf in 0..self.ambient {
            if is_pivot(cf) {
                continue;
            }
            let mut w = vec![FieldElement::ZERO; self.ambient];
            w[cf] = FieldElement::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                w[p] = field.neg(self.basis.get(r, cf));
            }
            kernel_rows.push(w);
        }
        let side = match self.side {
            Side::Row => Side::Column,
            Side::Column => Side::Row,
        };
        Subspace::from_generators(&field, self.ambient, &kernel_rows, side)
            .expect("kernel rows have ambient length")
    }
}

/// q^e in u128, saturating (desk-scale guard comparisons only).
pub fn pow_u128(q: u128, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q);
    }
    acc
}

/// Gaussian binomial coefficient: the number of r-dimensional subspaces
/// of an n-dimensional space over GF(q). Zero when r > n, else the exact
/// integer ∏_{i=1}^{r} (q^{i+n−r}−1)/(q^i−1).
pub fn qbinom(n: u64, r: u64, q: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=r {
        num *= (&q).pow((i + n - r) as u32) - BigInt::one();
        den *= (&q).pow(i as u32) - BigInt::one();
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero(), "q-binomial product is an exact integer");
    quot
}

fn check_cap(needed: &BigInt, cap: u64) -> Result<(), Error> {
    if *needed > BigInt::from(cap) {
        return Err(Error::CapExceeded {
            needed: num::ToPrimitive::to_u128(needed).unwrap_or(u128::MAX),
            cap,
        });
    }
    Ok(())
}

/// All m-dimensional subspaces of F^k (row side), each exactly once in
/// canonical RREF form. Enumeration walks pivot-column combinations in
/// lexicographic order, then the free entries as an odometer with the
/// last (row-major) position fastest. Length = qbinom(k, m, q).
pub fn subspaces(field: &FieldRc, k: usize, m: usize, cap: u64) -> Result<Vec<Subspace>, Error> {
    let count = qbinom(k as u64, m as u64, field.q() as u64);
    check_cap(&count, cap)?;
    if m > k {
        return Ok(vec![]);
    }
    if m == 0 {
        return Ok(vec![Subspace::zero(field, k, Side::Row)]);
    }
    let q = field.q() as usize;
    let mut out = Vec::new();
    for pivot_cols in (0..k).combinations(m) {
        let mut free: Vec<(usize, usize)> = Vec::new();
        for t in 0..m {
            for c in pivot_cols[t] + 1..k {
                if !pivot_cols.contains(&c) {
                    free.push((t, c));
                }
            }
        }
        let mut vals = vec![0u8; free.len()];
        loop {
            let mut basis = Matrix::zero(field, m, k);
            for (t, &p) in pivot_cols.iter().enumerate() {
                basis.set(t, p, FieldElement::ONE);
            }
            for (&(t, c), &v) in free.iter().zip(&vals) {
                basis.set(t, c, FieldElement(v));
            }
            out.push(Subspace {
                ambient: k,
                basis,
                side: Side::Row,
            });
            // odometer: last position fastest
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                vals[pos] += 1;
                if (vals[pos] as usize) < q {
                    break;
                }
                vals[pos] = 0;
            }
            if vals.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    debug_assert_eq!(BigInt::from(out.len()), count);
    Ok(out)
}

/// All m-dimensional subspaces B ⊇ A. Every such B splits as A ⊕ (B ∩ W)
/// where W is the coordinate complement spanned by A's non-pivot columns,
/// so the enumeration ranges over (m−a)-dimensional subspaces of W.
/// Length = qbinom(k−a, m−a, q).
pub fn subspaces_containing(a: &Subspace, m: usize, cap: u64) -> Result<Vec<Subspace>, Error> {
    let k = a.ambient_dim();
    let adim = a.dim();
    if m < adim || m > k {
        return Ok(vec![]);
    }
    let field = a.field().clone();
    let count = qbinom((k - adim) as u64, (m - adim) as u64, field.q() as u64);
    check_cap(&count, cap)?;

    let pivots = a.pivots();
    let non_pivots: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for small in subspaces(&field, k - adim, m - adim, cap)? {
        let mut gens: Vec<Vec<FieldElement>> =
            a.basis().row_iter().map(|r| r.to_vec()).collect();
        for row in small.basis().row_iter() {
            let mut w = vec![FieldElement::ZERO; k];
            for (j, &c) in non_pivots.iter().enumerate() {
                w[c] = row[j];
            }
            gens.push(w);
        }
        let b = Subspace::from_generators(&field, k, &gens, a.side())?;
        debug_assert_eq!(b.dim(), m);
        out.push(b);
    }
    Ok(out)
}

/// A 1-dimensional subspace of F^[k], represented by its unique vector
/// whose first nonzero entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    rep: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn rep(&self) -> &[FieldElement] {
        &self.rep
    }

    pub fn dim_ambient(&self) -> usize {
        self.rep.len()
    }
}

/// Canonical representative of the projective class of a nonzero vector.
pub fn point_of(field: &Field, v: &[FieldElement]) -> Option<ProjectivePoint> {
    let lead = v.iter().find(|e| !e.is_zero())?;
    let scale = field.inv(*lead).expect("leading entry is nonzero");
    Some(ProjectivePoint {
        rep: v.iter().map(|&e| field.mul(e, scale)).collect(),
    })
}

/// All (q^k−1)/(q−1) projective points of F^[k], ordered by the base-q
/// integer value of the representative (first coordinate = least
/// significant digit).
pub fn projective_points(field: &FieldRc, k: usize) -> Vec<ProjectivePoint> {
    let q = field.q() as u128;
    let total = pow_u128(q, k as u32);
    let mut out = Vec::new();
    for mut n in 1..total {
        let mut v = Vec::with_capacity(k);
        for _ in 0..k {
            v.push(FieldElement((n % q) as u8));
            n /= q;
        }
        let lead = v.iter().find(|e| !e.is_zero()).expect("n > 0");
        if *lead == FieldElement::ONE {
            out.push(ProjectivePoint { rep: v });
        }
    }
    out
}

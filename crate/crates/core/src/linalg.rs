//! Dense exact matrices and subspaces kept in reduced row-echelon form.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    DimMismatch(String),
    #[error("ragged rows")]
    Ragged,
    #[error("vector is not in the subspace")]
    NotContained,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{:?}", self.ctx, self.to_rows())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx,
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn diag(ctx: FieldCtx, entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(ctx, entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Builds a matrix from rows; every entry must live in `ctx`.
    pub fn from_rows(ctx: FieldCtx, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        Self::from_rows_with_width(ctx, rows, None)
    }

    /// Like [`Matrix::from_rows`], with an explicit column count so that an
    /// empty row list still has a width.
    pub fn from_rows_with_width(
        ctx: FieldCtx,
        rows: Vec<Vec<Scalar>>,
        width: Option<usize>,
    ) -> Result<Self, LinalgError> {
        let cols = match (width, rows.first()) {
            (Some(w), _) => w,
            (None, Some(r)) => r.len(),
            (None, None) => 0,
        };
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Ragged);
            }
            for x in r {
                if x.ctx() != ctx {
                    return Err(FieldError::MixedContexts(ctx, x.ctx()).into());
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            ctx,
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64<R: AsRef<[i64]>>(ctx: FieldCtx, rows: &[R]) -> Result<Self, LinalgError> {
        Self::from_rows(
            ctx,
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| ctx.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn row_vector(ctx: FieldCtx, v: Vec<Scalar>) -> Self {
        let cols = v.len();
        Matrix {
            ctx,
            rows: 1,
            cols,
            data: v,
        }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.ctx(), self.ctx, "entry from a different field");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ctx != other.ctx {
            return Err(FieldError::MixedContexts(self.ctx, other.ctx).into());
        }
        let mut out = Matrix::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            ctx: self.ctx,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimMismatch(format!(
                "vstack of widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            ctx: self.ctx,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.ctx, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = &factor * m.get(r, j);
                    let idx = i * m.cols + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of the right null space `{x : self·x = 0}`.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.ctx, free.len(), self.cols);
        for (row, &f) in free.iter().enumerate() {
            k.set(row, f, self.ctx.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                k.set(row, pc, -r.get(pi, f));
            }
        }
        k
    }

    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let mut det = self.ctx.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.ctx.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for i in c + 1..m.rows {
                let factor = m.get(i, c) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = &factor * m.get(c, j);
                    let idx = i * m.cols + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.ctx.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// `v·self` for a row vector `v`.
    pub fn left_apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        Ok(Matrix::row_vector(self.ctx, v.to_vec()).mul(self)?.data)
    }
}

/// A linear subspace of `F^ambient`, stored as its unique reduced row-echelon basis.
///
/// Structural equality of two `Subspace` values is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "span{} in {}^{}",
            self.basis,
            self.basis.ctx,
            self.ambient_dim()
        )
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

impl Subspace {
    /// Canonical span of the rows of `rows`.
    pub fn span(rows: &Matrix) -> Subspace {
        let (r, pivots) = rows.rref();
        let dim = pivots.len();
        let basis = Matrix {
            ctx: r.ctx,
            rows: dim,
            cols: r.cols,
            data: r.data[..dim * r.cols].to_vec(),
        };
        Subspace { basis, pivots }
    }

    pub fn from_vectors(
        ctx: FieldCtx,
        ambient: usize,
        vectors: &[Vec<Scalar>],
    ) -> Result<Subspace, LinalgError> {
        Ok(Self::span(&Matrix::from_rows_with_width(
            ctx,
            vectors.to_vec(),
            Some(ambient),
        )?))
    }

    pub fn from_i64<R: AsRef<[i64]>>(
        ctx: FieldCtx,
        ambient: usize,
        rows: &[R],
    ) -> Result<Subspace, LinalgError> {
        let m = Matrix::from_i64(ctx, rows)?;
        if m.rows() > 0 && m.cols() != ambient {
            return Err(LinalgError::AmbientMismatch(m.cols(), ambient));
        }
        Ok(Self::span(&if m.rows() == 0 {
            Matrix::zeros(ctx, 0, ambient)
        } else {
            m
        }))
    }

    pub fn zero(ctx: FieldCtx, ambient: usize) -> Subspace {
        Self::span(&Matrix::zeros(ctx, 0, ambient))
    }

    pub fn whole(ctx: FieldCtx, ambient: usize) -> Subspace {
        Self::span(&Matrix::identity(ctx, ambient))
    }

    pub fn ctx(&self) -> FieldCtx {
        self.basis.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    /// Rows in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::AmbientMismatch(
                self.ambient_dim(),
                other.ambient_dim(),
            ));
        }
        if self.ctx() != other.ctx() {
            return Err(FieldError::MixedContexts(self.ctx(), other.ctx()).into());
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Self::span(&self.basis.vstack(&other.basis)?))
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Self::whole(self.ctx(), self.ambient_dim());
        }
        Self::span(&self.basis.kernel())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim() {
            return None;
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.basis.left_apply(&coords).ok()?;
        (back.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Image under `x ↦ M·x` (column-vector convention).
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim() {
            return Err(LinalgError::DimMismatch(format!(
                "map with {} columns on ambient {}",
                m.cols(),
                self.ambient_dim()
            )));
        }
        if self.dim() == 0 {
            return Ok(Self::zero(self.ctx(), m.rows()));
        }
        Ok(Self::span(&self.basis.mul(&m.transpose())?))
    }

    /// Re-expresses a subspace of `self` in the coordinates of `self`'s basis.
    pub fn relative(&self, sub: &Subspace) -> Result<Subspace, LinalgError> {
        let rows = (0..sub.dim())
            .map(|i| {
                self.coordinates(sub.basis.row(i))
                    .ok_or(LinalgError::NotContained)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::from_vectors(self.ctx(), self.dim(), &rows)
    }

    /// Pushes a subspace written in `self`'s basis coordinates into the ambient space.
    pub fn embed(&self, sub: &Subspace) -> Result<Subspace, LinalgError> {
        if sub.ambient_dim() != self.dim() {
            return Err(LinalgError::AmbientMismatch(sub.ambient_dim(), self.dim()));
        }
        if sub.dim() == 0 {
            return Ok(Self::zero(self.ctx(), self.ambient_dim()));
        }
        Ok(Self::span(&sub.basis.mul(&self.basis)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldCtx = FieldCtx::Rationals;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    fn sub(ctx: FieldCtx, d: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_i64(ctx, d, rows).unwrap()
    }

    #[test]
    fn canonical_basis_examples() {
        let s = sub(Q, 2, &[&[2, 0], &[0, 3]]);
        assert_eq!(s.basis(), &Matrix::from_i64(Q, &[[1, 0], [0, 1]]).unwrap());
        let s = sub(Q, 2, &[&[1, 1], &[2, 2]]);
        assert_eq!(s.basis(), &Matrix::from_i64(Q, &[[1, 1]]).unwrap());
        let s = sub(Q, 2, &[&[0, 0]]);
        assert_eq!(s.dim(), 0);
        assert_eq!(s, Subspace::zero(Q, 2));
    }

    #[test]
    fn intersection_examples() {
        let a = sub(Q, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = sub(Q, 4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(a.intersect(&b).unwrap(), sub(Q, 4, &[&[0, 1, 0, 0]]));
        assert_eq!(a.intersect(&a).unwrap(), a);
        let x = sub(Q, 2, &[&[1, 1]]);
        let y = sub(Q, 2, &[&[1, -1]]);
        assert_eq!(x.intersect(&y).unwrap().dim(), 0);
    }

    #[test]
    fn sum_examples() {
        let e1 = sub(Q, 3, &[&[1, 0, 0]]);
        let e2 = sub(Q, 3, &[&[0, 1, 0]]);
        assert_eq!(e1.sum(&e2).unwrap(), sub(Q, 3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(e1.sum(&Subspace::zero(Q, 3)).unwrap(), e1);
        let f3 = fp(3);
        let x = sub(f3, 2, &[&[1, 1]]);
        let y = sub(f3, 2, &[&[1, -1]]);
        assert_eq!(x.sum(&y).unwrap(), Subspace::whole(f3, 2));
    }

    #[test]
    fn ambient_mismatch() {
        let a = Subspace::whole(Q, 2);
        let b = Subspace::whole(Q, 3);
        assert_eq!(a.intersect(&b), Err(LinalgError::AmbientMismatch(2, 3)));
        assert_eq!(a.sum(&b), Err(LinalgError::AmbientMismatch(2, 3)));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(Q, &[[2, 1], [7, 4]]).unwrap();
        assert_eq!(m.determinant().unwrap(), Q.one());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Q, 2));
        let sing = Matrix::from_i64(fp(5), &[[1, 2], [2, 4]]).unwrap();
        assert!(sing.determinant().unwrap().is_zero());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = Matrix::from_i64(Q, &[[1, 2, 3], [4, 5, 6]]).unwrap();
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
    }

    #[test]
    fn image_and_coordinates() {
        let s = sub(Q, 3, &[&[1, 0, 2], &[0, 1, 1]]);
        let v: Vec<Scalar> = [3, 4, 10].iter().map(|&x| Q.from_i64(x)).collect();
        assert_eq!(s.coordinates(&v), Some(vec![Q.from_i64(3), Q.from_i64(4)]));
        let w: Vec<Scalar> = [1, 1, 1].iter().map(|&x| Q.from_i64(x)).collect();
        assert!(!s.contains(&w));
        let swap = Matrix::from_i64(Q, &[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(
            s.image(&swap).unwrap(),
            sub(Q, 3, &[&[0, 1, 2], &[1, 0, 1]])
        );
        let rel = s.relative(&sub(Q, 3, &[&[1, 1, 3]])).unwrap();
        assert_eq!(s.embed(&rel).unwrap(), sub(Q, 3, &[&[1, 1, 3]]));
    }

    fn arb_subspace(ctx: FieldCtx, d: usize) -> impl Strategy<Value = Subspace> {
        let p = ctx.modulus().unwrap() as i64;
        prop::collection::vec(prop::collection::vec(0..p, d), 0..=d)
            .prop_map(move |rows| sub_owned(ctx, d, rows))
    }

    fn sub_owned(ctx: FieldCtx, d: usize, rows: Vec<Vec<i64>>) -> Subspace {
        Subspace::from_i64(ctx, d, &rows).unwrap()
    }

    fn arb_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
        (prop_oneof![Just(3u64), Just(5u64)], 1usize..6).prop_flat_map(|(p, d)| {
            let ctx = fp(p);
            (arb_subspace(ctx, d), arb_subspace(ctx, d))
        })
    }

    proptest! {
        #[test]
        fn modular_law((a, b) in arb_pair()) {
            let i = a.intersect(&b).unwrap();
            let s = a.sum(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), i.dim() + s.dim());
            prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
            prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
        }

        #[test]
        fn canonicalization_is_idempotent((a, _) in arb_pair()) {
            prop_assert_eq!(Subspace::span(a.basis()), a.clone());
            prop_assert_eq!(a.annihilator().annihilator(), a);
        }
    }
}

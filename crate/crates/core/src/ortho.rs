//! Symmetric bilinear spaces: orthogonal complements, isotropy, constructive
//! Witt reduction, standard split forms and isometries.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::linalg::{LinalgError, Matrix, Subspace};

/// Default height bound for the isotropic-vector search over `Q`.
pub const DEFAULT_RATIONAL_SEARCH_BOUND: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthoError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("the form is degenerate")]
    DegenerateForm,
    #[error(
        "no isotropic vector found up to height {bound}, and anisotropy could not be certified"
    )]
    IsotropicSearchExhausted { bound: u64 },
    #[error("the extension scalar must be nonzero")]
    ZeroScalar,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("subspace ambient {got} does not match space dimension {expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("operation not supported over {0}")]
    UnsupportedContext(FieldCtx),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A finite-dimensional space with a symmetric bilinear form, given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSpace {
    gram: Matrix,
    nondegenerate: bool,
}

/// Shape of a split standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `H^n`, dimension `2n`.
    Even2n,
    /// `H^n ⊥ <1>`, dimension `2n+1`.
    Odd2nPlus1,
}

impl GramSpace {
    pub fn new(gram: Matrix) -> Result<Self, OrthoError> {
        if !gram.is_square() {
            return Err(OrthoError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(OrthoError::NotSymmetric);
        }
        let nondegenerate = !gram.determinant()?.is_zero();
        Ok(GramSpace {
            gram,
            nondegenerate,
        })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.gram.ctx()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = self.ctx().zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                acc = &acc + &(&(ui * self.gram.get(i, j)) * vj);
            }
        }
        acc
    }

    pub fn norm(&self, v: &[Scalar]) -> Scalar {
        self.pair(v, v)
    }

    fn check_ambient(&self, s: &Subspace) -> Result<(), OrthoError> {
        if s.ambient_dim() != self.dim() {
            return Err(OrthoError::AmbientMismatch {
                expected: self.dim(),
                got: s.ambient_dim(),
            });
        }
        if s.ctx() != self.ctx() {
            return Err(FieldError::MixedContexts(self.ctx(), s.ctx()).into());
        }
        Ok(())
    }

    /// The form restricted to `s`, in the coordinates of `s`'s canonical basis.
    pub fn restrict(&self, s: &Subspace) -> Result<GramSpace, OrthoError> {
        self.check_ambient(s)?;
        let b = s.basis();
        GramSpace::new(b.mul(&self.gram)?.mul(&b.transpose())?)
    }

    /// `S^⊥ = {v : ω(v, s) = 0 for all s ∈ S}`.
    pub fn orthogonal_complement(&self, s: &Subspace) -> Result<Subspace, OrthoError> {
        if !self.nondegenerate {
            return Err(OrthoError::DegenerateForm);
        }
        self.check_ambient(s)?;
        if s.dim() == 0 {
            return Ok(Subspace::whole(self.ctx(), self.dim()));
        }
        // v ⊥ S  ⟺  (B·G)·v = 0
        Ok(Subspace::span(&s.basis().mul(&self.gram)?.kernel()))
    }

    /// Whether the form vanishes identically on `s`.
    pub fn is_isotropic(&self, s: &Subspace) -> Result<bool, OrthoError> {
        self.check_ambient(s)?;
        let b = s.basis();
        Ok(b.mul(&self.gram)?.mul(&b.transpose())?.is_zero())
    }

    pub fn witt_decompose(&self) -> Result<WittDecomposition, OrthoError> {
        self.witt_decompose_with_bound(DEFAULT_RATIONAL_SEARCH_BOUND)
    }

    /// Constructive Witt reduction. `bound` caps the height of the isotropic
    /// search over `Q` and is ignored over `F_p`.
    pub fn witt_decompose_with_bound(&self, bound: u64) -> Result<WittDecomposition, OrthoError> {
        if !self.nondegenerate {
            return Err(OrthoError::DegenerateForm);
        }
        let ctx = self.ctx();
        let d = self.dim();
        let mut current = Matrix::identity(ctx, d);
        let mut columns: Vec<Vec<Scalar>> = Vec::new();
        let mut pairs = Vec::new();
        let anisotropic_rows = loop {
            if current.rows() == 0 {
                break current;
            }
            let (obasis, diag) = self.orthogonal_basis_of(&current)?;
            let Some(x) = isotropic_in_diagonal(ctx, &diag, bound)? else {
                break obasis.mul(&current)?;
            };
            let v = obasis.mul(&current)?.left_apply(&x)?;
            let partner = (0..current.rows())
                .map(|i| current.row(i).to_vec())
                .find(|w| !self.pair(&v, w).is_zero())
                .expect("nondegenerate restriction has a partner");
            let (e, f) = self.hyperbolic_pair(&v, &partner)?;
            // complement of span(e, f) inside the current block
            let ef = Matrix::from_rows(ctx, vec![e.clone(), f.clone()])?;
            let constraints = current.mul(&self.gram)?.mul(&ef.transpose())?;
            let next = constraints.transpose().kernel();
            current = if next.rows() == 0 {
                Matrix::zeros(ctx, 0, d)
            } else {
                next.mul(&current)?
            };
            pairs.push((columns.len(), columns.len() + 1));
            columns.push(e);
            columns.push(f);
        };
        let aniso_start = columns.len();
        for i in 0..anisotropic_rows.rows() {
            columns.push(anisotropic_rows.row(i).to_vec());
        }
        let change_of_basis = Matrix::from_rows(ctx, columns)?.transpose();
        let aniso_basis = Matrix::from_rows_with_width(
            ctx,
            (0..anisotropic_rows.rows())
                .map(|i| anisotropic_rows.row(i).to_vec())
                .collect(),
            Some(d),
        )?;
        let anisotropic_part =
            GramSpace::new(aniso_basis.mul(&self.gram)?.mul(&aniso_basis.transpose())?)?;
        debug_assert_eq!(aniso_start, 2 * pairs.len());
        Ok(WittDecomposition {
            change_of_basis,
            witt_index: pairs.len(),
            hyperbolic_pairs: pairs,
            anisotropic_part,
        })
    }

    /// Turns an isotropic `v` and any `w` with `ω(v, w) ≠ 0` into a hyperbolic pair.
    pub(crate) fn hyperbolic_pair(
        &self,
        v: &[Scalar],
        w: &[Scalar],
    ) -> Result<(Vec<Scalar>, Vec<Scalar>), OrthoError> {
        let ctx = self.ctx();
        let inv = self.pair(v, w).inv()?;
        let w: Vec<Scalar> = w.iter().map(|x| x * &inv).collect();
        let half = ctx.from_i64(2).inv()?;
        let shift = &self.norm(&w) * &half;
        let f: Vec<Scalar> = w
            .iter()
            .zip(v)
            .map(|(wi, vi)| wi - &(&shift * vi))
            .collect();
        Ok((v.to_vec(), f))
    }

    /// An orthogonal basis of the row span of `rows` (coordinates relative to
    /// `rows`) together with the diagonal of the form in that basis.
    /// The restriction to the span must be nondegenerate.
    fn orthogonal_basis_of(&self, rows: &Matrix) -> Result<(Matrix, Vec<Scalar>), OrthoError> {
        let g = rows.mul(&self.gram)?.mul(&rows.transpose())?;
        let local = GramSpace::new(g)?;
        let (basis, diag) = local.diagonalize()?;
        Ok((basis, diag))
    }

    /// An orthogonal basis (rows) of a nondegenerate space, with the norms of
    /// its vectors.
    pub fn diagonalize(&self) -> Result<(Matrix, Vec<Scalar>), OrthoError> {
        if !self.nondegenerate {
            return Err(OrthoError::DegenerateForm);
        }
        let ctx = self.ctx();
        let d = self.dim();
        let mut remaining: Vec<Vec<Scalar>> = Matrix::identity(ctx, d).to_rows();
        let mut out = Vec::new();
        let mut diag = Vec::new();
        while !remaining.is_empty() {
            let v = self.anisotropic_vector_in(&remaining);
            let nv = self.norm(&v);
            let inv = nv.inv()?;
            // project the rest off v, then drop a dependent vector
            let projected: Vec<Vec<Scalar>> = remaining
                .iter()
                .map(|w| {
                    let c = &self.pair(w, &v) * &inv;
                    w.iter().zip(&v).map(|(wi, vi)| wi - &(&c * vi)).collect()
                })
                .collect();
            let span = Subspace::from_vectors(ctx, d, &projected)?;
            remaining = span.basis().to_rows();
            out.push(v);
            diag.push(nv);
        }
        Ok((Matrix::from_rows_with_width(ctx, out, Some(d))?, diag))
    }

    /// A vector of nonzero norm in the span of `vs` (whose restricted form is
    /// nondegenerate, hence nonzero).
    fn anisotropic_vector_in(&self, vs: &[Vec<Scalar>]) -> Vec<Scalar> {
        if let Some(v) = vs.iter().find(|v| !self.norm(v).is_zero()) {
            return v.clone();
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if !self.pair(&vs[i], &vs[j]).is_zero() {
                    // norm(a+b) = 2·ω(a,b) ≠ 0 in odd characteristic
                    return vs[i].iter().zip(&vs[j]).map(|(a, b)| a + b).collect();
                }
            }
        }
        unreachable!("restricted form vanishes identically")
    }

    /// An isotropic nonzero vector, or `None` when the form is anisotropic.
    pub fn find_isotropic_vector(&self, bound: u64) -> Result<Option<Vec<Scalar>>, OrthoError> {
        let (basis, diag) = self.diagonalize()?;
        Ok(isotropic_in_diagonal(self.ctx(), &diag, bound)?
            .map(|x| basis.left_apply(&x).expect("shapes agree")))
    }
}

/// Isotropic vector of `Σ d_i x_i²`, in the diagonal coordinates.
fn isotropic_in_diagonal(
    ctx: FieldCtx,
    diag: &[Scalar],
    bound: u64,
) -> Result<Option<Vec<Scalar>>, OrthoError> {
    let k = diag.len();
    let unit = |entries: &[(usize, Scalar)]| {
        let mut v = vec![ctx.zero(); k];
        for (i, x) in entries {
            v[*i] = x.clone();
        }
        v
    };
    // binary subforms: d_i r² + d_j = 0
    for i in 0..k {
        for j in i + 1..k {
            let target = -diag[j].checked_div(&diag[i])?;
            if let Some(r) = target.sqrt() {
                return Ok(Some(unit(&[(i, r), (j, ctx.one())])));
            }
        }
    }
    if k < 3 {
        return Ok(None);
    }
    match ctx {
        FieldCtx::Prime(_) => {
            // d0 x² + d1 y² + d2 = 0 always has a solution over F_q
            for x in ctx.elements()? {
                let rhs = -(&(&diag[0] * &x.square()) + &diag[2]);
                if let Some(y) = rhs.checked_div(&diag[1])?.sqrt() {
                    return Ok(Some(unit(&[(0, x), (1, y), (2, ctx.one())])));
                }
            }
            unreachable!("ternary forms over finite fields are isotropic")
        }
        FieldCtx::Rationals => rational_isotropic_search(ctx, diag, bound),
    }
}

/// Bounded search over `Q`. Definite forms are certified anisotropic; otherwise
/// integer vectors supported on 3 or 4 diagonal coordinates are tried by
/// increasing height.
fn rational_isotropic_search(
    ctx: FieldCtx,
    diag: &[Scalar],
    bound: u64,
) -> Result<Option<Vec<Scalar>>, OrthoError> {
    let signs: Vec<i32> = diag.iter().map(|d| d.signum().unwrap_or(0)).collect();
    if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
        return Ok(None);
    }
    // d = a/b has the square class of a·b
    let ints: Vec<BigInt> = diag
        .iter()
        .map(|d| {
            let r = d.as_rational().expect("rational context");
            r.numer() * r.denom()
        })
        .collect();
    let k = ints.len();
    let b = bound as i64;
    for size in 3..=k.min(4) {
        for support in combinations(k, size) {
            let Some(coeffs) = support
                .iter()
                .map(|&i| ints[i].to_i128())
                .collect::<Option<Vec<i128>>>()
            else {
                continue;
            };
            if coeffs.iter().all(|&c| c > 0) || coeffs.iter().all(|&c| c < 0) {
                continue;
            }
            for h in 1..=b {
                if let Some(sol) = search_height(&coeffs, h) {
                    let mut v = vec![ctx.zero(); k];
                    for (&i, x) in support.iter().zip(sol) {
                        v[i] = ctx.from_i64(x);
                    }
                    return Ok(Some(v));
                }
            }
        }
    }
    Err(OrthoError::IsotropicSearchExhausted { bound })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Solutions of `Σ c_i x_i² = 0` with `max |x_i| = h`: all but the last
/// coordinate are enumerated, the last is solved for.
fn search_height(coeffs: &[i128], h: i64) -> Option<Vec<i64>> {
    let m = coeffs.len() - 1;
    let last = coeffs[m];
    let mut xs = vec![-h; m];
    loop {
        let partial: i128 = xs
            .iter()
            .zip(coeffs)
            .map(|(&x, &c)| c * (x as i128) * (x as i128))
            .sum();
        if xs.iter().any(|&x| x != 0) && (-partial) % last == 0 {
            let z2 = -partial / last;
            if z2 >= 0 {
                let z = z2.sqrt();
                let on_shell = xs.iter().any(|x| x.abs() == h) || z == h as i128;
                if z * z == z2 && z <= h as i128 && on_shell {
                    let mut v = xs.clone();
                    v.push(z as i64);
                    return Some(v);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return None;
            }
            if xs[i] < h {
                xs[i] += 1;
                break;
            }
            xs[i] = -h;
            i += 1;
        }
    }
}

/// Witt decomposition `Bᵀ·G·B = H^{witt_index} ⊥ anisotropic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    /// Columns are the new basis vectors: `e1, f1, e2, f2, …`, then the
    /// anisotropic part.
    pub change_of_basis: Matrix,
    pub witt_index: usize,
    /// Column indices of each hyperbolic pair `(e_i, f_i)`.
    pub hyperbolic_pairs: Vec<(usize, usize)>,
    pub anisotropic_part: GramSpace,
}

impl WittDecomposition {
    /// The block form the change of basis is supposed to produce.
    pub fn block_form(&self) -> GramSpace {
        let ctx = self.anisotropic_part.ctx();
        let h = Matrix::from_i64(ctx, &[[0, 1], [1, 0]]).expect("static shape");
        let mut g = Matrix::zeros(ctx, 0, 0);
        for _ in 0..self.witt_index {
            g = g.direct_sum(&h);
        }
        g = g.direct_sum(self.anisotropic_part.gram());
        GramSpace::new(g).expect("block form is symmetric")
    }
}

/// The split form `H^n` or `H^n ⊥ <1>`, laid out as `e_1..e_n, f_1..f_n[, u]`
/// with `ω(e_i, f_i) = 1` and `ω(u, u) = 1`.
pub fn standard_form(ctx: FieldCtx, n: usize, shape: Shape) -> GramSpace {
    let d = match shape {
        Shape::Even2n => 2 * n,
        Shape::Odd2nPlus1 => 2 * n + 1,
    };
    let mut g = Matrix::zeros(ctx, d, d);
    for i in 0..n {
        g.set(i, n + i, ctx.one());
        g.set(n + i, i, ctx.one());
    }
    if shape == Shape::Odd2nPlus1 {
        g.set(2 * n, 2 * n, ctx.one());
    }
    GramSpace::new(g).expect("standard form is symmetric")
}

/// `V ⊥ <c>`: one new basis vector of norm `c`, appended last.
pub fn extend_by_scalar(v: &GramSpace, c: &Scalar) -> Result<GramSpace, OrthoError> {
    if c.ctx() != v.ctx() {
        return Err(FieldError::MixedContexts(v.ctx(), c.ctx()).into());
    }
    if c.is_zero() {
        return Err(OrthoError::ZeroScalar);
    }
    GramSpace::new(
        v.gram()
            .direct_sum(&Matrix::diag(v.ctx(), std::slice::from_ref(c))),
    )
}

/// Whether `B` is invertible with `Bᵀ·G·B = G'`.
pub fn isometry_check(v: &GramSpace, v2: &GramSpace, b: &Matrix) -> Result<bool, OrthoError> {
    if !b.is_square() || b.rows() != v.dim() || v.dim() != v2.dim() {
        return Err(OrthoError::DimMismatch(format!(
            "map {}x{} between spaces of dimension {} and {}",
            b.rows(),
            b.cols(),
            v.dim(),
            v2.dim()
        )));
    }
    if b.determinant()?.is_zero() {
        return Ok(false);
    }
    Ok(&b.transpose().mul(v.gram())?.mul(b)? == v2.gram())
}

/// Binary quadratics `ax² + bxy + cy²` in coordinates `(a, b, c)` with the
/// polarized discriminant form of `b² − 4ac`.
pub fn mumford_sym2_form(ctx: FieldCtx) -> GramSpace {
    let g = Matrix::from_i64(ctx, &[[0, 0, -2], [0, 1, 0], [-2, 0, 0]]).expect("static shape");
    GramSpace::new(g).expect("symmetric")
}

/// Exhaustive search over `F_q` for `B` and `λ ≠ 0` with `Bᵀ·G·B = λ·G'`,
/// where `G` is the Gram matrix of `source` and `G'` of `target`; the columns
/// of `B` are images of the target basis in the source space. Returns the
/// lexicographically first witness (by `λ`, then columns).
pub fn find_similarity(
    source: &GramSpace,
    target: &GramSpace,
) -> Result<Option<(Matrix, Scalar)>, OrthoError> {
    let ctx = source.ctx();
    if !ctx.is_finite() {
        return Err(OrthoError::UnsupportedContext(ctx));
    }
    if source.dim() != target.dim() {
        return Err(OrthoError::DimMismatch(
            "similarity between different dimensions".into(),
        ));
    }
    let d = source.dim();
    let elems: Vec<Scalar> = ctx.elements()?.collect();
    let vectors: Vec<Vec<Scalar>> = all_vectors(&elems, d);
    for lambda in elems.iter().skip(1) {
        let scaled = target.gram().scale(lambda);
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        if similarity_dfs(source, &scaled, &vectors, &mut cols) {
            let b = Matrix::from_rows(ctx, cols)?.transpose();
            if !b.determinant()?.is_zero() {
                return Ok(Some((b, lambda.clone())));
            }
        }
    }
    Ok(None)
}

fn similarity_dfs(
    source: &GramSpace,
    scaled: &Matrix,
    vectors: &[Vec<Scalar>],
    cols: &mut Vec<Vec<Scalar>>,
) -> bool {
    let j = cols.len();
    if j == source.dim() {
        let b = Matrix::from_rows(source.ctx(), cols.clone())
            .expect("uniform")
            .transpose();
        return !b.determinant().expect("square").is_zero();
    }
    for v in vectors {
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        let ok = cols
            .iter()
            .enumerate()
            .all(|(i, c)| &source.pair(c, v) == scaled.get(i, j))
            && &source.norm(v) == scaled.get(j, j);
        if ok {
            cols.push(v.clone());
            if similarity_dfs(source, scaled, vectors, cols) {
                return true;
            }
            cols.pop();
        }
    }
    false
}

/// Every vector of `F^d` in lexicographic order.
pub(crate) fn all_vectors(elems: &[Scalar], d: usize) -> Vec<Vec<Scalar>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldCtx = FieldCtx::Rationals;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    fn space(ctx: FieldCtx, rows: &[&[i64]]) -> GramSpace {
        GramSpace::new(Matrix::from_i64(ctx, rows).unwrap()).unwrap()
    }

    fn sub(ctx: FieldCtx, d: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_i64(ctx, d, rows).unwrap()
    }

    fn check_decomposition(v: &GramSpace) -> WittDecomposition {
        let w = v.witt_decompose().unwrap();
        assert!(isometry_check(v, &w.block_form(), &w.change_of_basis).unwrap());
        w
    }

    #[test]
    fn rejects_bad_gram() {
        let m = Matrix::from_i64(Q, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(GramSpace::new(m), Err(OrthoError::NotSymmetric));
        let m = Matrix::from_i64(Q, &[[1, 2, 3]]).unwrap();
        assert_eq!(GramSpace::new(m), Err(OrthoError::NotSquare));
        let deg = space(Q, &[&[1, 1], &[1, 1]]);
        assert!(!deg.is_nondegenerate());
        assert_eq!(
            deg.orthogonal_complement(&Subspace::zero(Q, 2)),
            Err(OrthoError::DegenerateForm)
        );
        assert_eq!(deg.witt_decompose(), Err(OrthoError::DegenerateForm));
    }

    #[test]
    fn complements() {
        let h = standard_form(Q, 1, Shape::Even2n);
        let e = sub(Q, 2, &[&[1, 0]]);
        assert_eq!(h.orthogonal_complement(&e).unwrap(), e);
        let v = standard_form(Q, 1, Shape::Odd2nPlus1);
        let e = sub(Q, 3, &[&[1, 0, 0]]);
        assert_eq!(
            v.orthogonal_complement(&e).unwrap(),
            sub(Q, 3, &[&[1, 0, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn isotropy() {
        let h = standard_form(Q, 1, Shape::Even2n);
        assert!(h.is_isotropic(&sub(Q, 2, &[&[1, 0]])).unwrap());
        let v = standard_form(Q, 1, Shape::Odd2nPlus1);
        assert!(!v.is_isotropic(&sub(Q, 3, &[&[0, 0, 1]])).unwrap());
        let f5 = fp(5);
        let w = extend_by_scalar(&standard_form(f5, 1, Shape::Odd2nPlus1), &f5.one()).unwrap();
        assert!(w
            .is_isotropic(&sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 2]]))
            .unwrap());
        assert!(matches!(
            w.is_isotropic(&sub(f5, 3, &[&[1, 0, 0]])),
            Err(OrthoError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn witt_examples() {
        assert_eq!(
            check_decomposition(&space(Q, &[&[1, 0], &[0, -1]])).witt_index,
            1
        );
        assert_eq!(
            check_decomposition(&space(Q, &[&[1, 0], &[0, 1]])).witt_index,
            0
        );
        let f3 = fp(3);
        let d3 = space(f3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(check_decomposition(&d3).witt_index, 1);
        // definite forms are certified anisotropic over Q
        let d3q = space(Q, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(check_decomposition(&d3q).witt_index, 0);
    }

    #[test]
    fn rational_ternary_search() {
        // x² + y² − 3z²·… : 1·x² + 1·y² − 2·z² has (1,1,1)
        let v = space(Q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -2]]);
        let w = check_decomposition(&v);
        assert_eq!(w.witt_index, 1);
        // x² + y² − 3z² is anisotropic over Q (3 is not a sum of two rational squares)
        let v = space(Q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -3]]);
        assert_eq!(
            v.witt_decompose_with_bound(10),
            Err(OrthoError::IsotropicSearchExhausted { bound: 10 })
        );
    }

    #[test]
    fn standard_forms() {
        let f3 = fp(3);
        assert_eq!(
            standard_form(f3, 1, Shape::Even2n).gram(),
            &Matrix::from_i64(f3, &[[0, 1], [1, 0]]).unwrap()
        );
        assert_eq!(
            standard_form(Q, 1, Shape::Odd2nPlus1).gram(),
            &Matrix::from_i64(Q, &[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap()
        );
        let f5 = fp(5);
        assert_eq!(
            check_decomposition(&standard_form(f5, 2, Shape::Even2n)).witt_index,
            2
        );
    }

    #[test]
    fn extension_examples() {
        let f5 = fp(5);
        let v = standard_form(f5, 1, Shape::Odd2nPlus1);
        let w = extend_by_scalar(&v, &f5.one()).unwrap();
        assert_eq!(
            w.gram(),
            &Matrix::from_i64(
                f5,
                &[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
            )
            .unwrap()
        );
        let h = standard_form(Q, 1, Shape::Even2n);
        let w = extend_by_scalar(&h, &Q.from_i64(-1)).unwrap();
        assert_eq!((w.dim(), check_decomposition(&w).witt_index), (3, 1));
        let hm = extend_by_scalar(&h, &Q.from_i64(-1)).unwrap();
        let w = extend_by_scalar(&hm, &Q.one()).unwrap();
        assert_eq!(check_decomposition(&w).witt_index, 2);
        assert_eq!(extend_by_scalar(&h, &Q.zero()), Err(OrthoError::ZeroScalar));
    }

    #[test]
    fn isometries() {
        let f5 = fp(5);
        let v = standard_form(f5, 2, Shape::Odd2nPlus1);
        assert!(isometry_check(&v, &v, &Matrix::identity(f5, 5)).unwrap());
        let w = extend_by_scalar(&v, &f5.from_i64(2)).unwrap();
        let mut flip = Matrix::identity(f5, 6);
        flip.set(5, 5, f5.from_i64(-1));
        assert!(isometry_check(&w, &w, &flip).unwrap());
        let singular = Matrix::zeros(f5, 5, 5);
        assert!(!isometry_check(&v, &v, &singular).unwrap());
        assert!(matches!(
            isometry_check(&v, &w, &Matrix::identity(f5, 5)),
            Err(OrthoError::DimMismatch(_))
        ));
    }

    #[test]
    fn discriminant_form() {
        // polarize q(a,b,c) = b² − 4ac via B(x,y) = (q(x+y) − q(x) − q(y))/2
        let q = |v: [i64; 3]| v[1] * v[1] - 4 * v[0] * v[2];
        let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut expected = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let s = [e[i][0] + e[j][0], e[i][1] + e[j][1], e[i][2] + e[j][2]];
                expected[i][j] = (q(s) - q(e[i]) - q(e[j])) / 2;
            }
        }
        assert_eq!(
            mumford_sym2_form(Q).gram(),
            &Matrix::from_i64(Q, &expected).unwrap()
        );
        let f5 = fp(5);
        assert_eq!(check_decomposition(&mumford_sym2_form(f5)).witt_index, 1);
        assert!(mumford_sym2_form(f5)
            .is_isotropic(&sub(f5, 3, &[&[1, 0, 0]]))
            .unwrap());
    }

    #[test]
    fn similarity_onto_discriminant_form() {
        for p in [3, 5] {
            let ctx = fp(p);
            let m = mumford_sym2_form(ctx);
            let std = standard_form(ctx, 1, Shape::Odd2nPlus1);
            let (b, lambda) = find_similarity(&std, &m).unwrap().unwrap();
            assert_eq!(
                b.transpose().mul(std.gram()).unwrap().mul(&b).unwrap(),
                m.gram().scale(&lambda)
            );
        }
        assert!(matches!(
            find_similarity(&mumford_sym2_form(Q), &mumford_sym2_form(Q)),
            Err(OrthoError::UnsupportedContext(_))
        ));
    }

    fn arb_gram(ctx: FieldCtx, d: usize) -> impl Strategy<Value = GramSpace> {
        let p = ctx.modulus().unwrap() as i64;
        prop::collection::vec(0..p, d * (d + 1) / 2).prop_filter_map("degenerate", move |xs| {
            let mut m = Matrix::zeros(ctx, d, d);
            let mut it = xs.into_iter();
            for i in 0..d {
                for j in i..d {
                    let x = ctx.from_i64(it.next().unwrap());
                    m.set(i, j, x.clone());
                    m.set(j, i, x);
                }
            }
            let g = GramSpace::new(m).unwrap();
            g.is_nondegenerate().then_some(g)
        })
    }

    fn arb_space_and_subspace() -> impl Strategy<Value = (GramSpace, Subspace)> {
        (prop_oneof![Just(3u64), Just(5u64)], 1usize..6).prop_flat_map(|(p, d)| {
            let ctx = fp(p);
            let rows = prop::collection::vec(prop::collection::vec(0..p as i64, d), 0..=d);
            (arb_gram(ctx, d), rows)
                .prop_map(move |(g, r)| (g, Subspace::from_i64(ctx, d, &r).unwrap()))
        })
    }

    fn arb_rational_space_and_subspace() -> impl Strategy<Value = (GramSpace, Subspace)> {
        (1usize..5).prop_flat_map(|d| {
            let rows = prop::collection::vec(prop::collection::vec(-3i64..4, d), 0..=d);
            let entries = prop::collection::vec(-4i64..5, d * (d + 1) / 2);
            (entries, rows).prop_filter_map("degenerate", move |(xs, r)| {
                let mut m = Matrix::zeros(Q, d, d);
                let mut it = xs.into_iter();
                for i in 0..d {
                    for j in i..d {
                        let x = Q.from_i64(it.next().unwrap());
                        m.set(i, j, x.clone());
                        m.set(j, i, x);
                    }
                }
                let g = GramSpace::new(m).unwrap();
                g.is_nondegenerate()
                    .then(|| (g, Subspace::from_i64(Q, d, &r).unwrap()))
            })
        })
    }

    proptest! {
        #[test]
        fn complement_involution((v, s) in arb_space_and_subspace()) {
            let perp = v.orthogonal_complement(&s).unwrap();
            prop_assert_eq!(s.dim() + perp.dim(), v.dim());
            prop_assert_eq!(v.orthogonal_complement(&perp).unwrap(), s.clone());
            prop_assert_eq!(v.is_isotropic(&s).unwrap(), s.is_subspace_of(&perp));
        }

        #[test]
        fn complement_involution_rational((v, s) in arb_rational_space_and_subspace()) {
            let perp = v.orthogonal_complement(&s).unwrap();
            prop_assert_eq!(s.dim() + perp.dim(), v.dim());
            prop_assert_eq!(v.orthogonal_complement(&perp).unwrap(), s);
        }

        #[test]
        fn witt_soundness((v, _) in arb_space_and_subspace()) {
            let w = v.witt_decompose().unwrap();
            prop_assert!(isometry_check(&v, &w.block_form(), &w.change_of_basis).unwrap());
            prop_assert!(v.dim() % 2 == 0 || w.witt_index == v.dim() / 2);
            prop_assert!(w.witt_index + 1 >= v.dim() / 2);
            prop_assert!(w.anisotropic_part.find_isotropic_vector(0).unwrap().is_none());
        }

        #[test]
        fn split_ternary_forms_are_similar_to_discriminant_form(
            v in prop_oneof![Just(3u64), Just(5u64)].prop_flat_map(|p| arb_gram(fp(p), 3))
        ) {
            let m = mumford_sym2_form(v.ctx());
            prop_assert!(find_similarity(&v, &m).unwrap().is_some());
        }
    }

    #[test]
    fn odd_dimension_cap_exhaustive() {
        // dim 5 is covered by the witt_soundness property
        for p in [3u64, 5] {
            let ctx = fp(p);
            let elems: Vec<Scalar> = ctx.elements().unwrap().collect();
            for d in [1usize, 3] {
                let m = d * (d + 1) / 2;
                for entries in all_vectors(&elems, m) {
                    let mut g = Matrix::zeros(ctx, d, d);
                    let mut it = entries.into_iter();
                    for i in 0..d {
                        for j in i..d {
                            let x = it.next().unwrap();
                            g.set(i, j, x.clone());
                            g.set(j, i, x);
                        }
                    }
                    let v = GramSpace::new(g).unwrap();
                    if v.is_nondegenerate() {
                        assert_eq!(v.witt_decompose().unwrap().witt_index, d / 2);
                    }
                }
            }
        }
    }

    #[test]
    fn even_dimension_dichotomy_exhaustive() {
        let ctx = fp(3);
        let elems: Vec<Scalar> = ctx.elements().unwrap().collect();
        for d in [2usize, 4] {
            let m = d * (d + 1) / 2;
            let mut seen = std::collections::BTreeSet::new();
            for entries in all_vectors(&elems, m) {
                let mut g = Matrix::zeros(ctx, d, d);
                let mut it = entries.into_iter();
                for i in 0..d {
                    for j in i..d {
                        let x = it.next().unwrap();
                        g.set(i, j, x.clone());
                        g.set(j, i, x);
                    }
                }
                let v = GramSpace::new(g).unwrap();
                if v.is_nondegenerate() {
                    let w = v.witt_decompose().unwrap();
                    assert!(w.witt_index == d / 2 || w.witt_index + 1 == d / 2);
                    seen.insert(w.witt_index);
                }
            }
            assert_eq!(seen.len(), 2);
        }
    }
}

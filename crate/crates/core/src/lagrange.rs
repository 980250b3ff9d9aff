//! Lagrangian subspaces: enumeration over finite fields, the two components
//! of an even orthogonal Grassmannian, and the odd/even correspondence
//! `E ↦ F` with `F ∩ V = E` inside `W = V ⊥ <c>`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Scalar};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::ortho::{extend_by_scalar, GramSpace, OrthoError};

/// Default ambient-dimension cap for [`enumerate_lagrangians`].
pub const DEFAULT_DIM_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangeError {
    #[error("form is not split: Witt index {witt_index}, need {expected}")]
    NotSplit { witt_index: usize, expected: usize },
    #[error("ambient dimension {dim} exceeds the enumeration cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("odd-dimensional ambient: the odd orthogonal Grassmannian is irreducible")]
    OddAmbient,
    #[error("expected an odd-dimensional ambient space")]
    EvenAmbient,
    #[error("V ⊥ <c> has no Lagrangian subspace for this c")]
    NonSplitExtension,
    #[error("the form restricted to the hyperplane is degenerate")]
    DegenerateRestriction,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("enumeration is only available over finite fields, not {0}")]
    UnsupportedContext(FieldCtx),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Component of a Lagrangian relative to a reference Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Same,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabel {
    pub reference: Subspace,
    pub label: Component,
}

/// The two Lagrangians of `W = V ⊥ <c>` meeting `V` in a given `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftPair {
    pub plus_lift: Subspace,
    pub minus_lift: Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorankRecord {
    /// `dim(E ∩ Ẽ)`
    pub r: usize,
    /// `dim(E^⊥ ∩ Ẽ^⊥)`
    pub h: usize,
}

pub fn is_lagrangian(v: &GramSpace, s: &Subspace) -> Result<bool, LagrangeError> {
    Ok(s.dim() == v.dim() / 2 && v.is_isotropic(s)?)
}

fn require_lagrangian(v: &GramSpace, s: &Subspace) -> Result<(), LagrangeError> {
    if is_lagrangian(v, s)? {
        Ok(())
    } else {
        Err(LagrangeError::NotLagrangian)
    }
}

/// Every Lagrangian of a split space over `F_q`, sorted and without repeats.
pub fn enumerate_lagrangians(
    v: &GramSpace,
    dim_cap: usize,
) -> Result<Vec<Subspace>, LagrangeError> {
    if !v.ctx().is_finite() {
        return Err(LagrangeError::UnsupportedContext(v.ctx()));
    }
    if v.dim() > dim_cap {
        return Err(LagrangeError::CapExceeded {
            dim: v.dim(),
            cap: dim_cap,
        });
    }
    let witt = v.witt_decompose()?;
    if witt.witt_index != v.dim() / 2 {
        return Err(LagrangeError::NotSplit {
            witt_index: witt.witt_index,
            expected: v.dim() / 2,
        });
    }
    Ok(lagrangians_rec(v)?.into_iter().collect())
}

/// Isotropic lines as normalized vectors (first nonzero entry 1), in
/// lexicographic order.
pub fn isotropic_lines(v: &GramSpace) -> Result<Vec<Vec<Scalar>>, LagrangeError> {
    let ctx = v.ctx();
    let elems: Vec<Scalar> = ctx.elements()?.collect();
    let d = v.dim();
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        let mut idx = vec![0usize; tail];
        loop {
            let mut x = vec![ctx.zero(); d];
            x[lead] = ctx.one();
            for (t, &i) in idx.iter().enumerate() {
                x[lead + 1 + t] = elems[i].clone();
            }
            if v.norm(&x).is_zero() {
                out.push(x);
            }
            let mut s = 0;
            while s < tail {
                idx[s] += 1;
                if idx[s] < elems.len() {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == tail {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

// Each Lagrangian F of V containing the isotropic line L = <e> is L ⊕ F',
// with F' a Lagrangian of span(e, f)^⊥ ≅ L^⊥/L for a hyperbolic partner f.
fn lagrangians_rec(v: &GramSpace) -> Result<BTreeSet<Subspace>, LagrangeError> {
    let ctx = v.ctx();
    let d = v.dim();
    let mut out = BTreeSet::new();
    if d / 2 == 0 {
        out.insert(Subspace::zero(ctx, d));
        return Ok(out);
    }
    for e in isotropic_lines(v)? {
        let partner = (0..d)
            .map(|j| {
                let mut u = vec![ctx.zero(); d];
                u[j] = ctx.one();
                u
            })
            .find(|u| !v.pair(&e, u).is_zero())
            .expect("nondegenerate form");
        let (e, f) = v.hyperbolic_pair(&e, &partner)?;
        let plane = Subspace::from_vectors(ctx, d, &[e.clone(), f])?;
        let rest = v.orthogonal_complement(&plane)?;
        let line = Subspace::from_vectors(ctx, d, &[e])?;
        for inner in lagrangians_rec(&v.restrict(&rest)?)? {
            out.insert(rest.embed(&inner)?.sum(&line)?);
        }
    }
    Ok(out)
}

/// Which component `f` lies in relative to `reference`:
/// same iff `dim(F ∩ F_ref) ≡ n (mod 2)`.
pub fn component_of(
    v: &GramSpace,
    f: &Subspace,
    reference: &Subspace,
) -> Result<ComponentLabel, LagrangeError> {
    if v.dim() % 2 == 1 {
        return Err(LagrangeError::OddAmbient);
    }
    require_lagrangian(v, f)?;
    require_lagrangian(v, reference)?;
    let n = v.dim() / 2;
    let meet = f.intersect(reference)?.dim();
    let label = if meet % 2 == n % 2 {
        Component::Same
    } else {
        Component::Other
    };
    Ok(ComponentLabel {
        reference: reference.clone(),
        label,
    })
}

/// Pads every basis vector with a trailing zero: `V ↪ V ⊥ <c>`.
pub fn include_in_extension(s: &Subspace) -> Result<Subspace, LagrangeError> {
    let ctx = s.ctx();
    let rows: Vec<Vec<Scalar>> = s
        .basis()
        .to_rows()
        .into_iter()
        .map(|mut r| {
            r.push(ctx.zero());
            r
        })
        .collect();
    Ok(Subspace::from_vectors(ctx, s.ambient_dim() + 1, &rows)?)
}

/// The two Lagrangians `F` of `W = V ⊥ <c>` with `F ∩ V = E`.
///
/// With `u` spanning `E^⊥/E` in `V` and `w` the new vector, the isotropic
/// lines of `E^⊥_W / E` are `u ± r·w` where `r² = −ω(u,u)/c`. `plus_lift`
/// uses the canonical root (nonnegative over `Q`, least residue over `F_p`).
pub fn lift_odd_to_even(
    v: &GramSpace,
    e: &Subspace,
    c: &Scalar,
) -> Result<LiftPair, LagrangeError> {
    if v.dim().is_multiple_of(2) {
        return Err(LagrangeError::EvenAmbient);
    }
    require_lagrangian(v, e)?;
    let w = extend_by_scalar(v, c)?;
    let ctx = v.ctx();
    let e_perp = v.orthogonal_complement(e)?;
    let u = e_perp
        .basis()
        .to_rows()
        .into_iter()
        .find(|row| !e.contains(row))
        .expect("E^⊥ is one dimension larger than E");
    let a = v.norm(&u);
    let r = (-a.checked_div(c)?)
        .sqrt()
        .ok_or(LagrangeError::NonSplitExtension)?;
    let e_w = include_in_extension(e)?;
    let lift = |sign: &Scalar| -> Result<Subspace, LagrangeError> {
        let mut x = u.clone();
        x.push(sign * &r);
        let line = Subspace::from_vectors(ctx, w.dim(), &[x])?;
        Ok(e_w.sum(&line)?)
    };
    Ok(LiftPair {
        plus_lift: lift(&ctx.one())?,
        minus_lift: lift(&ctx.from_i64(-1))?,
    })
}

/// `E = F ∩ V`, returned in the coordinates of `v_embed`'s canonical basis.
pub fn restrict_even_to_odd(
    w: &GramSpace,
    v_embed: &Subspace,
    f: &Subspace,
) -> Result<Subspace, LagrangeError> {
    if v_embed.ambient_dim() != w.dim() || v_embed.dim() + 1 != w.dim() {
        return Err(LagrangeError::DimMismatch(format!(
            "need a hyperplane of a {}-dimensional space, got a {}-dimensional subspace",
            w.dim(),
            v_embed.dim()
        )));
    }
    if !w.restrict(v_embed)?.is_nondegenerate() {
        return Err(LagrangeError::DegenerateRestriction);
    }
    require_lagrangian(w, f)?;
    let meet = f.intersect(v_embed)?;
    Ok(v_embed.relative(&meet)?)
}

/// [`restrict_even_to_odd`] for `W = V ⊥ <c>` built by [`extend_by_scalar`]:
/// `V` is the hyperplane of the first `dim W − 1` coordinates.
pub fn restrict_to_odd(w: &GramSpace, f: &Subspace) -> Result<Subspace, LagrangeError> {
    let ctx = w.ctx();
    let d = w.dim();
    if d == 0 {
        return Err(LagrangeError::DimMismatch("empty ambient".into()));
    }
    let rows: Vec<Vec<Scalar>> = Matrix::identity(ctx, d)
        .to_rows()
        .into_iter()
        .take(d - 1)
        .collect();
    let v_embed = Subspace::from_vectors(ctx, d, &rows)?;
    restrict_even_to_odd(w, &v_embed, f)
}

/// `(v, λ) ↦ (v, −λ)` on `W = V ⊥ <c>`: `diag(1, …, 1, −1)`.
pub fn flip_automorphism(w: &GramSpace) -> Matrix {
    let ctx = w.ctx();
    let mut m = Matrix::identity(ctx, w.dim());
    if w.dim() > 0 {
        m.set(w.dim() - 1, w.dim() - 1, ctx.from_i64(-1));
    }
    m
}

/// `r = dim(E ∩ Ẽ)` and `h = dim(E^⊥ ∩ Ẽ^⊥)` for Lagrangians of an odd space;
/// `h = r + 1` always.
pub fn complement_corank_law(
    v: &GramSpace,
    e: &Subspace,
    e2: &Subspace,
) -> Result<CorankRecord, LagrangeError> {
    if v.dim().is_multiple_of(2) {
        return Err(LagrangeError::EvenAmbient);
    }
    require_lagrangian(v, e)?;
    require_lagrangian(v, e2)?;
    let r = e.intersect(e2)?.dim();
    let h = v
        .orthogonal_complement(e)?
        .intersect(&v.orthogonal_complement(e2)?)?
        .dim();
    Ok(CorankRecord { r, h })
}

/// `dim ∧²(F*)` for `F` of dimension `n + 1`: the common tangent dimension
/// of `OG(n, 2n+1)` and a component of `OG(n+1, 2n+2)`.
pub fn og_tangent_dim(n: u64) -> u64 {
    n * (n + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::ortho::{standard_form, Shape};
    use std::collections::BTreeMap;

    const Q: FieldCtx = FieldCtx::Rationals;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    fn sub(ctx: FieldCtx, d: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_i64(ctx, d, rows).unwrap()
    }

    #[test]
    fn lagrangian_predicate() {
        let h = standard_form(Q, 1, Shape::Even2n);
        assert!(is_lagrangian(&h, &sub(Q, 2, &[&[1, 0]])).unwrap());
        let v = standard_form(Q, 1, Shape::Odd2nPlus1);
        assert!(is_lagrangian(&v, &sub(Q, 3, &[&[1, 0, 0]])).unwrap());
        let h2 = standard_form(Q, 2, Shape::Even2n);
        // e1, f1 in the e1,e2,f1,f2 layout
        assert!(!is_lagrangian(&h2, &sub(Q, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]])).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let f3 = fp(3);
        let h = standard_form(f3, 1, Shape::Even2n);
        assert_eq!(
            enumerate_lagrangians(&h, DEFAULT_DIM_CAP).unwrap(),
            vec![sub(f3, 2, &[&[0, 1]]), sub(f3, 2, &[&[1, 0]])]
        );
        for (n, shape, count) in [(1, Shape::Odd2nPlus1, 4), (2, Shape::Even2n, 8)] {
            let v = standard_form(f3, n, shape);
            let got = enumerate_lagrangians(&v, DEFAULT_DIM_CAP).unwrap();
            assert_eq!(got.len(), count);
            assert_eq!(got, oracle::lagrangians(&v));
        }
    }

    #[test]
    fn enumeration_errors() {
        let f3 = fp(3);
        // x² + y² over F_3 is anisotropic
        let aniso = GramSpace::new(Matrix::identity(f3, 2)).unwrap();
        assert_eq!(
            enumerate_lagrangians(&aniso, DEFAULT_DIM_CAP),
            Err(LagrangeError::NotSplit {
                witt_index: 0,
                expected: 1
            })
        );
        let big = standard_form(f3, 5, Shape::Even2n);
        assert_eq!(
            enumerate_lagrangians(&big, DEFAULT_DIM_CAP),
            Err(LagrangeError::CapExceeded { dim: 10, cap: 8 })
        );
        assert_eq!(
            enumerate_lagrangians(&standard_form(Q, 1, Shape::Even2n), 8),
            Err(LagrangeError::UnsupportedContext(Q))
        );
    }

    #[test]
    fn component_examples() {
        let h2 = standard_form(Q, 2, Shape::Even2n);
        let reference = sub(Q, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let label = |f: &Subspace| component_of(&h2, f, &reference).unwrap().label;
        assert_eq!(label(&reference), Component::Same);
        assert_eq!(
            label(&sub(Q, 4, &[&[1, 0, 0, 0], &[0, 0, 0, 1]])),
            Component::Other
        );
        assert_eq!(
            label(&sub(Q, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]])),
            Component::Same
        );
        let v = standard_form(Q, 1, Shape::Odd2nPlus1);
        let e = sub(Q, 3, &[&[1, 0, 0]]);
        assert_eq!(component_of(&v, &e, &e), Err(LagrangeError::OddAmbient));
        let not_lag = sub(Q, 4, &[&[1, 0, 0, 0]]);
        assert_eq!(
            component_of(&h2, &not_lag, &reference),
            Err(LagrangeError::NotLagrangian)
        );
    }

    #[test]
    fn lift_examples() {
        let f5 = fp(5);
        let v = standard_form(f5, 1, Shape::Odd2nPlus1);
        let e = sub(f5, 3, &[&[1, 0, 0]]);
        let pair = lift_odd_to_even(&v, &e, &f5.one()).unwrap();
        assert_eq!(pair.plus_lift, sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 2]]));
        assert_eq!(pair.minus_lift, sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 3]]));
        let w = extend_by_scalar(&v, &f5.one()).unwrap();
        assert_eq!(restrict_to_odd(&w, &pair.plus_lift).unwrap(), e);
        assert_eq!(restrict_to_odd(&w, &pair.minus_lift).unwrap(), e);

        let vq = standard_form(Q, 1, Shape::Odd2nPlus1);
        let eq = sub(Q, 3, &[&[1, 0, 0]]);
        let pair = lift_odd_to_even(&vq, &eq, &Q.from_i64(-1)).unwrap();
        assert_eq!(pair.plus_lift, sub(Q, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 1]]));
        assert_eq!(pair.minus_lift, sub(Q, 4, &[&[1, 0, 0, 0], &[0, 0, 1, -1]]));
    }

    #[test]
    fn lift_errors() {
        let f3 = fp(3);
        let v = standard_form(f3, 1, Shape::Odd2nPlus1);
        let e = sub(f3, 3, &[&[1, 0, 0]]);
        // −1 is not a square mod 3, so <1> ⊥ <1> is anisotropic
        assert_eq!(
            lift_odd_to_even(&v, &e, &f3.one()),
            Err(LagrangeError::NonSplitExtension)
        );
        assert_eq!(
            lift_odd_to_even(&v, &sub(f3, 3, &[&[0, 0, 1]]), &f3.from_i64(2)),
            Err(LagrangeError::NotLagrangian)
        );
        assert!(matches!(
            lift_odd_to_even(&v, &e, &f3.zero()),
            Err(LagrangeError::Ortho(OrthoError::ZeroScalar))
        ));
        let h = standard_form(f3, 1, Shape::Even2n);
        assert_eq!(
            lift_odd_to_even(&h, &sub(f3, 2, &[&[1, 0]]), &f3.one()),
            Err(LagrangeError::EvenAmbient)
        );
    }

    #[test]
    fn restriction_errors() {
        let f5 = fp(5);
        let w = extend_by_scalar(&standard_form(f5, 1, Shape::Odd2nPlus1), &f5.one()).unwrap();
        // the hyperplane orthogonal to the isotropic e carries a degenerate form
        let e_perp = w
            .orthogonal_complement(&sub(f5, 4, &[&[1, 0, 0, 0]]))
            .unwrap();
        let f = sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 2]]);
        assert_eq!(
            restrict_even_to_odd(&w, &e_perp, &f),
            Err(LagrangeError::DegenerateRestriction)
        );
        assert_eq!(
            restrict_to_odd(&w, &sub(f5, 4, &[&[1, 0, 0, 0]])),
            Err(LagrangeError::NotLagrangian)
        );
    }

    #[test]
    fn flip_examples() {
        let f5 = fp(5);
        let w = extend_by_scalar(&standard_form(f5, 1, Shape::Odd2nPlus1), &f5.one()).unwrap();
        let flip = flip_automorphism(&w);
        assert!(crate::ortho::isometry_check(&w, &w, &flip).unwrap());
        assert_eq!(flip.mul(&flip).unwrap(), Matrix::identity(f5, 4));
        let f = sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 2]]);
        assert_eq!(
            f.image(&flip).unwrap(),
            sub(f5, 4, &[&[1, 0, 0, 0], &[0, 0, 1, -2]])
        );
    }

    #[test]
    fn corank_examples() {
        let v = standard_form(Q, 1, Shape::Odd2nPlus1);
        let e = sub(Q, 3, &[&[1, 0, 0]]);
        let f = sub(Q, 3, &[&[0, 1, 0]]);
        assert_eq!(
            complement_corank_law(&v, &e, &f).unwrap(),
            CorankRecord { r: 0, h: 1 }
        );
        let meet = v
            .orthogonal_complement(&e)
            .unwrap()
            .intersect(&v.orthogonal_complement(&f).unwrap())
            .unwrap();
        assert_eq!(meet, sub(Q, 3, &[&[0, 0, 1]]));
        assert_eq!(
            complement_corank_law(&v, &e, &e).unwrap(),
            CorankRecord { r: 1, h: 2 }
        );
    }

    #[test]
    fn tangent_dims() {
        assert_eq!(og_tangent_dim(1), 1);
        assert_eq!(og_tangent_dim(2), 3);
        assert_eq!(og_tangent_dim(4), 10);
    }

    fn split_scalar(v: &GramSpace) -> Scalar {
        // the least c making V ⊥ <c> split
        v.ctx()
            .elements()
            .unwrap()
            .skip(1)
            .find(|c| {
                let e = &enumerate_lagrangians(v, DEFAULT_DIM_CAP).unwrap()[0];
                lift_odd_to_even(v, e, c).is_ok()
            })
            .unwrap()
    }

    #[test]
    fn two_to_one_and_round_trip() {
        for (p, n) in [(3u64, 1usize), (5, 1), (3, 2), (5, 2)] {
            let ctx = fp(p);
            let v = standard_form(ctx, n, Shape::Odd2nPlus1);
            let c = split_scalar(&v);
            let w = extend_by_scalar(&v, &c).unwrap();
            let flip = flip_automorphism(&w);
            let odd = enumerate_lagrangians(&v, DEFAULT_DIM_CAP).unwrap();
            let even = enumerate_lagrangians(&w, DEFAULT_DIM_CAP).unwrap();
            assert_eq!(even.len(), 2 * odd.len());
            let mut fibres: BTreeMap<Subspace, Vec<Subspace>> = BTreeMap::new();
            for f in &even {
                fibres
                    .entry(restrict_to_odd(&w, f).unwrap())
                    .or_default()
                    .push(f.clone());
            }
            assert_eq!(fibres.keys().cloned().collect::<Vec<_>>(), odd);
            for (e, pre) in &fibres {
                assert_eq!(pre.len(), 2);
                let pair = lift_odd_to_even(&v, e, &c).unwrap();
                let mut lifts = vec![pair.plus_lift.clone(), pair.minus_lift.clone()];
                lifts.sort();
                assert_eq!(&lifts, pre);
                assert_eq!(pair.plus_lift.image(&flip).unwrap(), pair.minus_lift);
                assert_eq!(
                    component_of(&w, &pair.minus_lift, &pair.plus_lift)
                        .unwrap()
                        .label,
                    Component::Other
                );
                assert_eq!(restrict_to_odd(&w, &pair.plus_lift).unwrap(), *e);
            }
        }
    }

    #[test]
    fn lift_intersection_law() {
        for (p, n) in [(3u64, 1usize), (3, 2)] {
            let ctx = fp(p);
            let v = standard_form(ctx, n, Shape::Odd2nPlus1);
            let c = split_scalar(&v);
            let w = extend_by_scalar(&v, &c).unwrap();
            let odd = enumerate_lagrangians(&v, DEFAULT_DIM_CAP).unwrap();
            let lifts: Vec<LiftPair> = odd
                .iter()
                .map(|e| lift_odd_to_even(&v, e, &c).unwrap())
                .collect();
            for (i, e) in odd.iter().enumerate() {
                for (j, e2) in odd.iter().enumerate() {
                    let r = e.intersect(e2).unwrap().dim();
                    for f in [&lifts[i].plus_lift, &lifts[i].minus_lift] {
                        for f2 in [&lifts[j].plus_lift, &lifts[j].minus_lift] {
                            let m = f.intersect(f2).unwrap().dim();
                            assert!(m == r || m == r + 1);
                            let same = component_of(&w, f, f2).unwrap().label == Component::Same;
                            assert_eq!(same, m % 2 == (n + 1) % 2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn corank_law_exhaustive_dim3_and_dim5() {
        for n in [1, 2] {
            let v = standard_form(fp(3), n, Shape::Odd2nPlus1);
            let all = enumerate_lagrangians(&v, DEFAULT_DIM_CAP).unwrap();
            for e in &all {
                for e2 in &all {
                    let rec = complement_corank_law(&v, e, e2).unwrap();
                    assert_eq!(rec.h, rec.r + 1);
                }
            }
        }
    }
}

//! Brute-force reference computations over finite fields.
//!
//! Nothing here goes through Witt reduction or the line-by-line Lagrangian
//! recursion: subspaces are enumerated directly as reduced row-echelon
//! matrices and tested against the Gram matrix. Used by the verification
//! suites and the test oracles.

use crate::field::{FieldCtx, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::ortho::GramSpace;

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

/// Walks every `k`-dimensional subspace of `F_q^d` in RREF, filling rows in
/// order. `accept_row(rows_so_far, new_row)` prunes partial bases; `visit`
/// receives each complete basis and returns `false` to stop the walk.
fn walk_rref<A, V>(ctx: FieldCtx, d: usize, k: usize, accept_row: &A, visit: &mut V) -> bool
where
    A: Fn(&[Vec<Scalar>], &[Scalar]) -> bool,
    V: FnMut(&[Vec<Scalar>]) -> bool,
{
    let elems: Vec<Scalar> = ctx.elements().expect("finite field").collect();
    for pivots in combinations(d, k) {
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(k);
        if !fill_row(ctx, d, &pivots, &elems, &mut rows, accept_row, visit) {
            return false;
        }
    }
    true
}

fn fill_row<A, V>(
    ctx: FieldCtx,
    d: usize,
    pivots: &[usize],
    elems: &[Scalar],
    rows: &mut Vec<Vec<Scalar>>,
    accept_row: &A,
    visit: &mut V,
) -> bool
where
    A: Fn(&[Vec<Scalar>], &[Scalar]) -> bool,
    V: FnMut(&[Vec<Scalar>]) -> bool,
{
    let i = rows.len();
    if i == pivots.len() {
        return visit(rows);
    }
    let p = pivots[i];
    let free: Vec<usize> = (p + 1..d).filter(|c| !pivots.contains(c)).collect();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut row = vec![ctx.zero(); d];
        row[p] = ctx.one();
        for (slot, &c) in free.iter().enumerate() {
            row[c] = elems[idx[slot]].clone();
        }
        if accept_row(rows, &row) {
            rows.push(row);
            let keep_going = fill_row(ctx, d, pivots, elems, rows, accept_row, visit);
            rows.pop();
            if !keep_going {
                return false;
            }
        }
        let mut s = 0;
        loop {
            if s == free.len() {
                return true;
            }
            idx[s] += 1;
            if idx[s] < elems.len() {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
    }
}

fn to_subspace(ctx: FieldCtx, d: usize, rows: &[Vec<Scalar>]) -> Subspace {
    Subspace::span(
        &Matrix::from_rows_with_width(ctx, rows.to_vec(), Some(d)).expect("uniform rows"),
    )
}

/// Every `k`-dimensional subspace of `F_q^d`.
pub fn all_subspaces(ctx: FieldCtx, d: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    walk_rref(ctx, d, k, &|_, _| true, &mut |rows| {
        out.push(to_subspace(ctx, d, rows));
        true
    });
    out
}

/// Every totally isotropic `k`-dimensional subspace of `v`, sorted.
pub fn isotropic_subspaces(v: &GramSpace, k: usize) -> Vec<Subspace> {
    let ctx = v.ctx();
    let d = v.dim();
    let accept = |prev: &[Vec<Scalar>], row: &[Scalar]| {
        v.norm(row).is_zero() && prev.iter().all(|r| v.pair(r, row).is_zero())
    };
    let mut out = Vec::new();
    walk_rref(ctx, d, k, &accept, &mut |rows| {
        out.push(to_subspace(ctx, d, rows));
        true
    });
    out.sort();
    out
}

pub fn has_isotropic_subspace(v: &GramSpace, k: usize) -> bool {
    let accept = |prev: &[Vec<Scalar>], row: &[Scalar]| {
        v.norm(row).is_zero() && prev.iter().all(|r| v.pair(r, row).is_zero())
    };
    let mut found = false;
    walk_rref(v.ctx(), v.dim(), k, &accept, &mut |_| {
        found = true;
        false
    });
    found
}

/// Largest dimension of a totally isotropic subspace, by exhaustive search.
pub fn max_isotropic_dim(v: &GramSpace) -> usize {
    let mut k = 0;
    while k < v.dim() && has_isotropic_subspace(v, k + 1) {
        k += 1;
    }
    k
}

/// Lagrangians of `v` by scanning every subspace of dimension `⌊dim/2⌋`.
pub fn lagrangians(v: &GramSpace) -> Vec<Subspace> {
    isotropic_subspaces(v, v.dim() / 2)
}

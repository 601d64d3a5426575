//! Dense complex linear algebra: numerical rank, null spaces, reduced row
//! echelon form under a caller-chosen column order, and maximal-rank
//! submatrix selection by complete pivoting.
//!
//! Everything here works on `DMatrix<Complex64>`. Rank decisions go through
//! the SVD so that they are stable for the badly scaled matrices this crate
//! produces (Macaulay matrices mix factorial-sized entries across columns);
//! the echelon form is only used *after* rank questions are settled, to read
//! off a combinatorial pivot structure.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::error::Error;
use std::fmt;

/// Dense column-major complex matrix used throughout the crate.
pub type CMat = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVec = DVector<Complex64>;

/// Rank tolerance policy for SVD-based decisions.
///
/// `Auto` mirrors the usual machine-precision heuristic; `Rel` scales a
/// caller-chosen factor by the largest singular value, which is the right
/// knob when inputs carry a few digits of noise (approximate roots).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tol {
    /// `max(rows, cols) · ε · σ_max` — appropriate for exact-data matrices.
    Auto,
    /// Absolute threshold on singular values.
    Abs(f64),
    /// `factor · σ_max`.
    Rel(f64),
}

impl Tol {
    /// Resolve the policy to an absolute singular-value threshold.
    pub fn resolve(self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self {
            Tol::Auto => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            Tol::Abs(t) => t,
            Tol::Rel(f) => f * sigma_max,
        }
    }
}

/// Outcome of a rank computation: the rank, the absolute threshold that was
/// applied, and the full (descending) singular spectrum for diagnostics.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub rank: usize,
    pub tol_used: f64,
    pub singular_values: Vec<f64>,
}

/// Error type for pivot-based factorizations.
#[derive(Debug)]
pub enum LinalgError {
    /// Complete pivoting ran out of nonzero pivots before reaching the
    /// requested rank; carries (achieved, requested).
    PivotBreakdown(usize, usize),
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::PivotBreakdown(got, want) => write!(
                f,
                "pivot breakdown: found only {got} numerically nonzero pivots, needed {want}"
            ),
        }
    }
}

impl Error for LinalgError {}

/// Singular values of `m`, descending. Empty input yields an empty list.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let sv = m.clone().singular_values();
    sv.iter().copied().collect()
}

/// Numerical rank of `m` under `tol`, with the evidence used to decide it.
pub fn numerical_rank(m: &CMat, tol: Tol) -> RankReport {
    let sv = singular_values(m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tol_used = tol.resolve(m.nrows(), m.ncols(), sigma_max);
    let rank = sv.iter().filter(|&&s| s > tol_used).count();
    RankReport {
        rank,
        tol_used,
        singular_values: sv,
    }
}

/// Orthonormal basis of the right null space of `m` under `tol`, returned as
/// columns of a `ncols × nullity` matrix (empty-column matrix for full
/// column rank).
///
/// The SVD here factors a square matrix always: a matrix with fewer rows
/// than columns is padded with zero rows first, because the thin
/// right-factor of a wide SVD only carries `min(rows, cols)` rows of V* and
/// would under-span the null space.
pub fn null_space(m: &CMat, tol: Tol) -> CMat {
    let (rows, cols) = (m.nrows(), m.ncols());
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    if rows == 0 {
        return CMat::identity(cols, cols);
    }
    let work = if rows < cols {
        let mut padded = CMat::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd
        .v_t
        .expect("SVD was requested with right singular vectors");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let thresh = tol.resolve(rows, cols, sigma_max);
    let rank = sv.iter().filter(|&&s| s > thresh).count();
    let nullity = cols - rank;
    let mut basis = CMat::zeros(cols, nullity);
    for (k, row) in (rank..cols).enumerate() {
        for j in 0..cols {
            // Null vectors are conjugated rows of V*.
            basis[(j, k)] = v_t[(row, j)].conj();
        }
    }
    basis
}

/// Gauss–Jordan reduction of `m` processing columns in the caller-supplied
/// order `col_order` (indices into the columns of `m`).
///
/// Returns the reduced matrix and the pivot columns in processing order.
/// Rows are swapped so that the i-th pivot lives in row i; each pivot entry
/// is scaled to exactly 1 and its column is eliminated everywhere else.
/// Entries with magnitude ≤ `tol` are treated as zero when selecting pivots
/// (and are zeroed in the result so downstream reads see a clean pattern).
pub fn reduced_row_echelon(m: &CMat, col_order: &[usize], tol: f64) -> (CMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.nrows();
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for &col in col_order {
        if next_row >= rows {
            break;
        }
        // Partial pivoting within the column: take the largest magnitude in
        // the unprocessed rows.
        let mut best = next_row;
        let mut best_mag = a[(next_row, col)].norm();
        for r in next_row + 1..rows {
            let mag = a[(r, col)].norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best_mag <= tol {
            continue;
        }
        a.swap_rows(next_row, best);
        let pivot = a[(next_row, col)];
        for c in 0..a.ncols() {
            a[(next_row, c)] /= pivot;
        }
        a[(next_row, col)] = Complex64::new(1.0, 0.0);
        for r in 0..rows {
            if r == next_row {
                continue;
            }
            let factor = a[(r, col)];
            if factor.norm() == 0.0 {
                continue;
            }
            for c in 0..a.ncols() {
                let sub = factor * a[(next_row, c)];
                a[(r, c)] -= sub;
            }
            a[(r, col)] = Complex64::new(0.0, 0.0);
        }
        pivots.push(col);
        next_row += 1;
    }
    // Scrub sub-tolerance residue so callers can pattern-match on zeros.
    for v in a.iter_mut() {
        if v.norm() <= tol {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    (a, pivots)
}

/// Select `r` rows and `r` columns of `m` whose intersection is an r×r block
/// of (numerically) maximal rank, by Gaussian elimination with complete
/// pivoting: each step picks the largest-magnitude entry of the remaining
/// Schur complement.
///
/// Returns `(row_indices, col_indices)` in pivot order. Fails with
/// `PivotBreakdown` if the matrix runs out of pivots above `zero_tol`
/// before `r` steps.
pub fn max_rank_submatrix(
    m: &CMat,
    r: usize,
    zero_tol: f64,
) -> Result<(Vec<usize>, Vec<usize>), LinalgError> {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut row_sel = Vec::with_capacity(r);
    let mut col_sel = Vec::with_capacity(r);
    for step in 0..r {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..rows {
            if row_used[i] {
                continue;
            }
            for j in 0..cols {
                if col_used[j] {
                    continue;
                }
                let mag = a[(i, j)].norm();
                if best.map_or(true, |(_, _, b)| mag > b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let (pi, pj, mag) = match best {
            Some(b) => b,
            None => return Err(LinalgError::PivotBreakdown(step, r)),
        };
        if mag <= zero_tol {
            return Err(LinalgError::PivotBreakdown(step, r));
        }
        row_used[pi] = true;
        col_used[pj] = true;
        row_sel.push(pi);
        col_sel.push(pj);
        // Schur update of the untouched block.
        let pivot = a[(pi, pj)];
        for i in 0..rows {
            if row_used[i] {
                continue;
            }
            let factor = a[(i, pj)] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..cols {
                if col_used[j] {
                    continue;
                }
                let sub = factor * a[(pi, j)];
                a[(i, j)] -= sub;
            }
        }
    }
    Ok((row_sel, col_sel))
}

/// Least-squares solve `m·x ≈ b` via column-pivoted QR; returns the residual
/// norm ‖m·x − b‖ alongside x.
pub fn lstsq(m: &CMat, b: &CVec) -> (CVec, f64) {
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(b, 0.0)
        .expect("SVD solve with both factors requested");
    let residual = (m * &x - b).norm();
    (x, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rank_of_projector() {
        let m = dmatrix![re(1.0), re(0.0); re(0.0), re(0.0)];
        let rep = numerical_rank(&m, Tol::Auto);
        assert_eq!(rep.rank, 1);
        assert_eq!(rep.singular_values.len(), 2);
        assert!((rep.singular_values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_of_identity() {
        let m = CMat::identity(3, 3);
        assert_eq!(numerical_rank(&m, Tol::Auto).rank, 3);
        assert_eq!(null_space(&m, Tol::Auto).ncols(), 0);
    }

    #[test]
    fn null_space_of_projector() {
        let m = dmatrix![re(1.0), re(0.0); re(0.0), re(0.0)];
        let ns = null_space(&m, Tol::Auto);
        assert_eq!(ns.ncols(), 1);
        // Span of (0, 1) up to phase.
        assert!(ns[(0, 0)].norm() < 1e-12);
        assert!((ns[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix_spans_everything() {
        // One row, three columns: nullity must be 2, which requires the
        // zero-row padding (a thin wide SVD only returns one row of V*).
        let m = CMat::from_row_slice(1, 3, &[re(1.0), re(2.0), re(3.0)]);
        let ns = null_space(&m, Tol::Auto);
        assert_eq!(ns.ncols(), 2);
        for k in 0..2 {
            let v = ns.column(k);
            let dot = re(1.0) * v[0] + re(2.0) * v[1] + re(3.0) * v[2];
            assert!(dot.norm() < 1e-12);
        }
    }

    #[test]
    fn null_space_vectors_are_orthonormal_and_annihilate() {
        // Random-ish fixed complex matrix with dependent columns.
        let m = CMat::from_row_slice(
            3,
            4,
            &[
                c(1.0, 2.0),
                c(0.5, -1.0),
                c(1.5, 1.0), // col2 = col0 + col1
                c(2.0, 4.0), // col3 = 2·col0
                c(-1.0, 0.0),
                c(3.0, 0.5),
                c(2.0, 0.5),
                c(-2.0, 0.0),
                c(0.0, 1.0),
                c(1.0, 1.0),
                c(1.0, 2.0),
                c(0.0, 2.0),
            ],
        );
        let rep = numerical_rank(&m, Tol::Auto);
        let ns = null_space(&m, Tol::Auto);
        assert_eq!(rep.rank + ns.ncols(), m.ncols());
        let norm_m = rep.singular_values[0];
        for k in 0..ns.ncols() {
            let v = CVec::from_column_slice(ns.column(k).as_slice());
            assert!((&m * &v).norm() <= 10.0 * rep.tol_used.max(f64::EPSILON * norm_m));
            // Orthonormality.
            for l in 0..ns.ncols() {
                let w = ns.column(l);
                let mut dot = Complex64::new(0.0, 0.0);
                for j in 0..ns.nrows() {
                    dot += ns.column(k)[j].conj() * w[j];
                }
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rref_simple_pivot_pattern() {
        let m = dmatrix![re(0.0), re(1.0); re(0.0), re(2.0)];
        let (e, piv) = reduced_row_echelon(&m, &[0, 1], 1e-12);
        assert_eq!(piv, vec![1]);
        assert!((e[(0, 1)] - re(1.0)).norm() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-14 && e[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn rref_respects_caller_column_order() {
        // Dual-space coefficient rows for span{1, ∂1+∂2, ∂2+½∂1²+∂1∂2} in
        // ascending grevlex columns [1, ∂2, ∂1, ∂2², ∂1∂2, ∂1²]; processing
        // columns in *descending* grevlex order must pick pivots
        // ∂1² (col 5), ∂1 (col 2), 1 (col 0).
        let m = CMat::from_row_slice(
            3,
            6,
            &[
                re(1.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(1.0),
                re(1.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(0.0),
                re(1.0),
                re(0.0),
                re(0.0),
                re(1.0),
                re(0.5),
            ],
        );
        let order: Vec<usize> = (0..6).rev().collect();
        let (_, piv) = reduced_row_echelon(&m, &order, 1e-12);
        assert_eq!(piv, vec![5, 2, 0]);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = CMat::from_row_slice(
            3,
            4,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(0.0, 3.0),
                c(1.0, 0.0),
                c(0.0, 2.0),
                c(1.0, 1.0),
                c(2.0, 2.0),
                c(0.0, 1.0),
                c(1.0, 3.0),
                c(3.0, 1.0),
                c(2.0, 5.0),
                c(1.0, 1.0),
            ],
        );
        let order: Vec<usize> = (0..4).collect();
        let (e1, p1) = reduced_row_echelon(&m, &order, 1e-10);
        let (e2, p2) = reduced_row_echelon(&e1, &order, 1e-10);
        assert_eq!(p1, p2);
        assert!((&e1 - &e2).norm() <= 1e-12 * e1.norm().max(1.0));
    }

    #[test]
    fn max_rank_submatrix_picks_an_invertible_block() {
        // The Caprasse Jacobian at its singular root is 4×4 of rank 2; the
        // complete-pivot block must be invertible and at least as large (in
        // |det|) as every other 2×2 block.
        let sys = crate::systems::caprasse();
        let root = crate::systems::caprasse_root();
        let jac = crate::poly::jacobian(&sys);
        let j = CMat::from_fn(4, 4, |i, k| jac[i][k].eval_c64(&root));
        let r = numerical_rank(&j, Tol::Rel(1e-8)).rank;
        assert_eq!(r, 2);
        let (ri, ci) = max_rank_submatrix(&j, r, 1e-12).unwrap();
        assert_eq!(ri.len(), r);
        let block = j.select_rows(ri.iter()).select_columns(ci.iter());
        let picked = numerical_rank(&block, Tol::Rel(1e-8));
        assert_eq!(picked.rank, r);
        // Exhaustive scan: no other r×r block has larger |det|.
        let det_mag = |rows: &[usize], cols: &[usize]| -> f64 {
            j.select_rows(rows.iter())
                .select_columns(cols.iter())
                .determinant()
                .norm()
        };
        let picked_det = det_mag(&ri, &ci);
        assert!(picked_det > 1e-8);
        let mut best = 0f64;
        for r0 in 0..4 {
            for r1 in r0 + 1..4 {
                for c0 in 0..4 {
                    for c1 in c0 + 1..4 {
                        best = best.max(det_mag(&[r0, r1], &[c0, c1]));
                    }
                }
            }
        }
        assert!(picked_det >= best * (1.0 - 1e-9));
    }

    #[test]
    fn max_rank_submatrix_breaks_down_past_the_rank() {
        let m = dmatrix![re(1.0), re(2.0); re(2.0), re(4.0)];
        match max_rank_submatrix(&m, 2, 1e-9) {
            Err(LinalgError::PivotBreakdown(got, want)) => {
                assert_eq!((got, want), (1, 2));
            }
            other => panic!("expected pivot breakdown, got {other:?}"),
        }
    }

    #[test]
    fn lstsq_solves_consistent_system() {
        let m = dmatrix![re(2.0), re(0.0); re(0.0), re(4.0); re(0.0), re(0.0)];
        let b = CVec::from_column_slice(&[re(2.0), re(8.0), re(0.0)]);
        let (x, res) = lstsq(&m, &b);
        assert!((x[0] - re(1.0)).norm() < 1e-12);
        assert!((x[1] - re(2.0)).norm() < 1e-12);
        assert!(res < 1e-12);
    }
}

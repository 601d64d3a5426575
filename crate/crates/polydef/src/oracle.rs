//! Brute-force exact-arithmetic references for cross-checking the
//! floating-point pipeline on systems with rational coefficients and a
//! rational root.
//!
//! Everything here is deliberately written *differently* from the fast
//! path: matrix entries come from literally differentiating the products
//! (x−ξ)^β·f_i term by term (no coordinate translation), the row set is the
//! larger |β| ≤ t (the fast path proves |β| ≤ t−1 suffices, and agreement
//! here is the evidence), and ranks are computed by exact sparse Gaussian
//! elimination over the rationals instead of an SVD. Slow and dumb on
//! purpose — these functions are the measuring stick, not the product.

use crate::poly::{grevlex_cmp, monomials_upto, Coeff, Expo, MPoly, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse exact row: column index → rational value.
pub type SparseRow = BTreeMap<usize, Rat>;

/// Exact dialytic matrix at order `t` with the generous row set |β| ≤ t:
/// entry((i, β), γ) = ∂^γ((x−ξ)^β f_i)(ξ). Returns the rows and the column
/// count (columns are ∂^γ, |γ| ≤ t, ascending grevlex).
pub fn exact_macaulay(sys: &[MPoly<Rat>], xi: &[Rat], t: u32) -> (Vec<SparseRow>, usize) {
    let n = xi.len();
    let cols: Vec<Expo> = monomials_upto(n, t);
    let col_of = |e: &Expo| cols.binary_search_by(|a| grevlex_cmp(a, e)).ok();
    // Powers of each ξ_i up to the largest exponent any term can carry.
    let max_deg = sys.iter().map(|f| f.degree()).max().unwrap_or(0) + t;
    let xi_pow: Vec<Vec<Rat>> = xi
        .iter()
        .map(|x| {
            let mut p = vec![Rat::one()];
            for k in 1..=max_deg as usize {
                p.push(&p[k - 1] * x);
            }
            p
        })
        .collect();
    let mut rows = Vec::new();
    for f in sys {
        for beta in monomials_upto(n, t) {
            // h = (x−ξ)^β f; its term list is still short because the power
            // of the shifted binomial is expanded polynomial-by-polynomial.
            let mut h = f.clone();
            for (i, &b) in beta.0.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let shifted = MPoly::var(n, i).sub(&MPoly::constant(n, xi[i].clone()));
                h = h.mul(&shifted.pow(b));
            }
            let mut row: SparseRow = BTreeMap::new();
            // ∂^γ(x^e)(ξ) = (∏_i e_i!/(e_i−γ_i)!)·ξ^{e−γ}; sweep every term
            // of h against every γ ≤ e.
            for (e, c) in h.terms() {
                for gamma in divisors(e) {
                    if gamma.degree() > t {
                        continue;
                    }
                    let col = col_of(&gamma).expect("divisor within degree bound");
                    let mut v = c.clone();
                    for i in 0..n {
                        let (ei, gi) = (e.0[i] as i64, gamma.0[i] as i64);
                        for k in (ei - gi + 1)..=ei {
                            v = v * Rat::from_integer(k.into());
                        }
                        v = v * &xi_pow[i][(ei - gi) as usize];
                    }
                    if !v.is_zero() {
                        let entry = row.entry(col).or_insert_with(Rat::zero);
                        *entry = entry.clone() + v;
                        if entry.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
            }
            rows.push(row);
        }
    }
    (rows, cols.len())
}

/// All exponents γ ≤ e componentwise (the "divisors" of the monomial x^e).
fn divisors(e: &Expo) -> Vec<Expo> {
    let mut out = vec![Expo::zero(e.len())];
    for (i, &cap) in e.0.iter().enumerate() {
        if cap == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for g in &out {
            for k in 0..=cap {
                let mut h = g.clone();
                h.0[i] = k;
                next.push(h);
            }
        }
        out = next;
    }
    out
}

/// Rank of a sparse rational matrix by Gaussian elimination with a
/// sparsest-row pivot choice. Exact — no tolerances anywhere.
pub fn exact_rank(rows: &[SparseRow], n_cols: usize) -> usize {
    let mut work: Vec<SparseRow> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut rank = 0usize;
    for col in 0..n_cols {
        // Sparsest row with a nonzero in this column keeps fill-in down.
        let pivot_idx = work
            .iter()
            .enumerate()
            .filter(|(_, r)| r.contains_key(&col))
            .min_by_key(|(_, r)| r.len())
            .map(|(i, _)| i);
        let Some(pi) = pivot_idx else { continue };
        let pivot_row = work.swap_remove(pi);
        let pivot_val = pivot_row[&col].clone();
        rank += 1;
        for r in work.iter_mut() {
            let Some(v) = r.get(&col).cloned() else {
                continue;
            };
            let factor = v / &pivot_val;
            for (&c, pv) in &pivot_row {
                let delta = pv * &factor;
                let entry = r.entry(c).or_insert_with(Rat::zero);
                *entry = entry.clone() - delta;
                if entry.is_zero() {
                    r.remove(&c);
                }
            }
        }
        work.retain(|r| !r.is_empty());
    }
    rank
}

/// Exact dual-space dimensions dim D_t for t = 0, …, `t_max`.
pub fn exact_dual_dims(sys: &[MPoly<Rat>], xi: &[Rat], t_max: u32) -> Vec<usize> {
    (0..=t_max)
        .map(|t| {
            let (rows, n_cols) = exact_macaulay(sys, xi, t);
            n_cols - exact_rank(&rows, n_cols)
        })
        .collect()
}

/// Exact multiplicity and nil-index by the stabilization rule, or `None` if
/// the dimensions keep growing through `t_max`.
pub fn exact_multiplicity(sys: &[MPoly<Rat>], xi: &[Rat], t_max: u32) -> Option<(usize, u32)> {
    let mut prev: Option<usize> = None;
    for t in 0..=t_max {
        let (rows, n_cols) = exact_macaulay(sys, xi, t);
        let dim = n_cols - exact_rank(&rows, n_cols);
        if let Some(p) = prev {
            if p == dim {
                return Some((dim, t - 1));
            }
        }
        prev = Some(dim);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual;
    use crate::linalg::Tol;
    use crate::poly::{point_to_c64, sys_to_c64};
    use crate::systems;

    #[test]
    fn exact_rank_of_small_matrices() {
        // [[1,2],[2,4]] has rank 1; [[1,0],[0,1]] has rank 2.
        let r = |v: i64| <Rat as Coeff>::from_i64(v);
        let rows = vec![
            BTreeMap::from([(0, r(1)), (1, r(2))]),
            BTreeMap::from([(0, r(2)), (1, r(4))]),
        ];
        assert_eq!(exact_rank(&rows, 2), 1);
        let rows = vec![
            BTreeMap::from([(0, r(1))]),
            BTreeMap::from([(1, r(1))]),
        ];
        assert_eq!(exact_rank(&rows, 2), 2);
    }

    #[test]
    fn divisors_enumerates_the_box() {
        let d = divisors(&Expo::from_slice(&[2, 1]));
        assert_eq!(d.len(), 6);
        assert!(d.contains(&Expo::from_slice(&[0, 0])));
        assert!(d.contains(&Expo::from_slice(&[2, 1])));
    }

    #[test]
    fn tangent_pair_dimensions() {
        let (sys, root) = systems::parabola_circle();
        assert_eq!(exact_dual_dims(&sys, &root, 3), vec![1, 2, 2, 2]);
        assert_eq!(exact_multiplicity(&sys, &root, 6), Some((2, 1)));
    }

    #[test]
    fn cascade_family_dimensions() {
        let (sys, root) = systems::cascade_family(2);
        assert_eq!(exact_dual_dims(&sys, &root, 4), vec![1, 3, 4, 4, 4]);
        assert_eq!(exact_multiplicity(&sys, &root, 8), Some((4, 2)));
    }

    #[test]
    fn exact_dims_match_floating_dims_at_every_order() {
        // The floating pipeline uses the tighter row set |β| ≤ t−1; the
        // oracle uses |β| ≤ t. Agreement across orders on mixed benchmarks
        // is the justification for the truncation.
        for (sys, root) in [
            systems::parabola_circle(),
            systems::cascade_family(2),
            systems::cascade_family(3),
        ] {
            let csys = sys_to_c64(&sys);
            let cxi = point_to_c64(&root);
            let d = dual::compute_dual_space(&csys, &cxi, Tol::Rel(1e-8), 12).unwrap();
            let exact = exact_dual_dims(&sys, &root, d.nil_index + 1);
            assert_eq!(exact, d.dim_by_order);
        }
    }

    #[test]
    fn nonzero_rational_anchor_matches_float() {
        // Shift the tangent pair so the root sits at (3/2, −2): exactness
        // of the oracle must survive a non-origin anchor.
        let (sys, _) = systems::parabola_circle();
        let r = |p: i64, q: i64| Rat::new(p.into(), q.into());
        let shift = vec![r(3, 2), r(-2, 1)];
        let moved: Vec<MPoly<Rat>> = sys
            .iter()
            .map(|f| f.translate(&shift.iter().map(|s| -s.clone()).collect::<Vec<_>>()))
            .collect();
        // moved(x) = f(x − s) has its singular root at s.
        assert_eq!(exact_multiplicity(&moved, &shift, 6), Some((2, 1)));
        let d = dual::compute_dual_space(
            &sys_to_c64(&moved),
            &point_to_c64(&shift),
            Tol::Rel(1e-8),
            8,
        )
        .unwrap();
        assert_eq!((d.multiplicity, d.nil_index), (2, 1));
    }
}

//! Newton refinement and simple-root verification.
//!
//! Deflated systems are overdetermined; a random square subsystem (random
//! complex combinations of the polynomials) has the same root, and with a
//! generic seed the root stays simple, so plain damped Newton applies. The
//! verifier reports the residual and the smallest singular value of the
//! Jacobian — the two numbers that certify "this point is a simple root at
//! this tolerance".

use crate::linalg::{self, CMat, CVec, Tol};
use crate::poly::{jacobian, MPoly};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::error::Error;
use std::fmt;

/// Errors from subsystem extraction.
#[derive(Debug)]
pub enum RefineError {
    /// Fewer polynomials than variables: no square subsystem exists.
    Underdetermined { polys: usize, vars: usize },
}

impl fmt::Display for RefineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefineError::Underdetermined { polys, vars } => write!(
                f,
                "cannot extract a square subsystem: {polys} polynomials in {vars} variables"
            ),
        }
    }
}

impl Error for RefineError {}

/// Everything a Newton run did, step by step.
#[derive(Debug, Clone)]
pub struct RefinementTrace {
    /// Iterates, starting with the initial point.
    pub iterates: Vec<Vec<Complex64>>,
    /// ‖F(x_k)‖ for each iterate.
    pub residual_norms: Vec<f64>,
    /// ‖x_{k+1} − x_k‖ for each completed step.
    pub step_norms: Vec<f64>,
    /// True when the run ended with both step and residual below tolerance.
    pub converged: bool,
    /// Smallest singular value of the Jacobian at the final iterate.
    pub final_sigma_min: f64,
}

impl RefinementTrace {
    /// The last iterate.
    pub fn solution(&self) -> &[Complex64] {
        self.iterates.last().expect("trace holds the start point")
    }
}

/// Verdict of [`verify_simple_root`].
#[derive(Debug, Clone)]
pub struct SimpleRootReport {
    /// ‖F(point)‖.
    pub residual: f64,
    /// Smallest of the first n singular values of J_F(point) — zero when
    /// the Jacobian is column-rank-deficient.
    pub sigma_min: f64,
    /// True iff residual ≤ tol and sigma_min ≥ rank_tol.
    pub simple: bool,
}

/// `n` random complex linear combinations of the system's polynomials,
/// where `n` is the variable count — the square system Newton runs on.
/// Coefficients are drawn uniformly from [−1,1]² with a seeded generator,
/// so identical seeds give identical subsystems. With
/// `identity_if_square`, an already-square system is returned unchanged.
pub fn random_square_subsystem(
    sys: &[MPoly<Complex64>],
    seed: u64,
    identity_if_square: bool,
) -> Result<Vec<MPoly<Complex64>>, RefineError> {
    let n = sys.first().map(|p| p.n_vars()).unwrap_or(0);
    if sys.len() < n {
        return Err(RefineError::Underdetermined {
            polys: sys.len(),
            vars: n,
        });
    }
    if identity_if_square && sys.len() == n {
        return Ok(sys.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut g = MPoly::zero(n);
        for f in sys {
            let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            g = g.add(&f.scale(&w));
        }
        out.push(g);
    }
    Ok(out)
}

/// A square subsystem by plain row selection (debugging aid; selection can
/// be deterministically unlucky, which is why the random combination is the
/// default).
pub fn selected_square_subsystem(
    sys: &[MPoly<Complex64>],
    rows: &[usize],
) -> Vec<MPoly<Complex64>> {
    rows.iter().map(|&r| sys[r].clone()).collect()
}

fn eval_system(sys: &[MPoly<Complex64>], x: &[Complex64]) -> CVec {
    CVec::from_iterator(sys.len(), sys.iter().map(|f| f.eval_c64(x)))
}

fn eval_jacobian(jac: &[Vec<MPoly<Complex64>>], x: &[Complex64]) -> CMat {
    CMat::from_fn(jac.len(), x.len(), |i, j| jac[i][j].eval_c64(x))
}

/// Damped Newton iteration on a square complex system.
///
/// Each step solves J·Δ = −F by LU; if the full step increases the
/// residual, it is halved up to 8 times. The run stops when both the step
/// and the residual drop below `tol` (converged), when the Jacobian turns
/// singular, when no damping level improves the residual, or after
/// `max_iter` steps.
pub fn newton_refine(
    sys: &[MPoly<Complex64>],
    start: &[Complex64],
    max_iter: usize,
    tol: f64,
) -> RefinementTrace {
    assert_eq!(
        sys.len(),
        start.len(),
        "newton_refine expects a square system"
    );
    let jac = jacobian(sys);
    let mut x = start.to_vec();
    let mut iterates = vec![x.clone()];
    let mut residual_norms = vec![eval_system(sys, &x).norm()];
    let mut step_norms = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let res = eval_system(sys, &x);
        let res_norm = *residual_norms.last().expect("seeded above");
        if res_norm <= tol {
            // Residual already at tolerance: declare victory without
            // demanding a further step.
            converged = true;
            break;
        }
        let j = eval_jacobian(&jac, &x);
        let lu = j.lu();
        let delta = match lu.solve(&(-&res)) {
            Some(d) => d,
            None => break, // singular Jacobian: report what we have
        };
        // Step halving: accept the first damping level that does not make
        // the residual worse.
        let mut accepted: Option<(Vec<Complex64>, f64, f64)> = None;
        let mut lambda = 1.0f64;
        for _ in 0..=8 {
            let cand: Vec<Complex64> = x
                .iter()
                .zip(delta.iter())
                .map(|(xi, di)| xi + di * lambda)
                .collect();
            let cand_res = eval_system(sys, &cand).norm();
            if cand_res < res_norm {
                accepted = Some((cand, cand_res, delta.norm() * lambda));
                break;
            }
            lambda /= 2.0;
        }
        let Some((next, next_res, step)) = accepted else {
            break; // no progress at any damping level
        };
        x = next;
        iterates.push(x.clone());
        residual_norms.push(next_res);
        step_norms.push(step);
        if step <= tol && next_res <= tol {
            converged = true;
            break;
        }
    }
    let j = eval_jacobian(&jac, &x);
    let sv = linalg::singular_values(&j);
    let final_sigma_min = sv.last().copied().unwrap_or(0.0);
    RefinementTrace {
        iterates,
        residual_norms,
        step_norms,
        converged,
        final_sigma_min,
    }
}

/// Residual plus Jacobian-rank certificate at a point. Works for square and
/// overdetermined systems alike: `sigma_min` is the n-th largest singular
/// value of the (polys × n) Jacobian, which is positive exactly when the
/// Jacobian has full column rank.
pub fn verify_simple_root(
    sys: &[MPoly<Complex64>],
    point: &[Complex64],
    tol: f64,
    rank_tol: f64,
) -> SimpleRootReport {
    let residual = eval_system(sys, point).norm();
    let jac = jacobian(sys);
    let j = eval_jacobian(&jac, point);
    let sv = linalg::singular_values(&j);
    let n = point.len();
    let sigma_min = if sv.len() >= n {
        sv[n - 1]
    } else {
        0.0
    };
    SimpleRootReport {
        residual,
        sigma_min,
        simple: residual <= tol && sigma_min >= rank_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tol as RankTol;
    use crate::poly::{point_to_c64, sys_to_c64, Expo};
    use crate::systems;

    /// The running 3-variable example (z1, z2, μ): the two tangent-pair
    /// polynomials in parametric normal form plus their closure equations.
    fn parametric_tangent_pair() -> Vec<MPoly<Complex64>> {
        let t = |terms: &[(&[u32], f64)]| {
            MPoly::from_terms(
                3,
                terms
                    .iter()
                    .map(|(e, c)| (Expo::from_slice(e), Complex64::new(*c, 0.0))),
            )
        };
        vec![
            t(&[(&[1, 0, 0], 1.0), (&[0, 2, 0], 1.0)]), // z1 + z2²
            t(&[(&[0, 0, 1], 1.0), (&[0, 1, 0], 2.0)]), // μ + 2z2
            t(&[(&[2, 0, 0], 1.0), (&[0, 2, 0], 1.0)]), // z1² + z2²
            t(&[(&[1, 0, 1], 2.0), (&[0, 1, 0], 2.0)]), // 2μz1 + 2z2
        ]
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn random_subsystem_is_square_and_deterministic() {
        let sys = parametric_tangent_pair();
        let a = random_square_subsystem(&sys, 7, false).unwrap();
        let b = random_square_subsystem(&sys, 7, false).unwrap();
        assert_eq!(a.len(), 3);
        for (p, q) in a.iter().zip(&b) {
            assert!(p.sub(q).is_zero());
        }
        let other = random_square_subsystem(&sys, 8, false).unwrap();
        assert!(a.iter().zip(&other).any(|(p, q)| !p.sub(q).is_zero()));
    }

    #[test]
    fn random_subsystem_keeps_the_root_simple() {
        let sys = parametric_tangent_pair();
        let sq = random_square_subsystem(&sys, 42, false).unwrap();
        let origin = vec![c(0.0, 0.0); 3];
        let jac = jacobian(&sq);
        let j = eval_jacobian(&jac, &origin);
        let rank = linalg::numerical_rank(&j, RankTol::Rel(1e-10)).rank;
        assert_eq!(rank, 3);
    }

    #[test]
    fn underdetermined_subsystem_is_rejected() {
        let sys = vec![MPoly::<Complex64>::var(3, 0)];
        assert!(matches!(
            random_square_subsystem(&sys, 0, false),
            Err(RefineError::Underdetermined { polys: 1, vars: 3 })
        ));
    }

    #[test]
    fn identity_flag_returns_square_system_unchanged() {
        let sys = vec![
            MPoly::<Complex64>::var(2, 0),
            MPoly::<Complex64>::var(2, 1),
        ];
        let kept = random_square_subsystem(&sys, 3, true).unwrap();
        for (p, q) in kept.iter().zip(&sys) {
            assert!(p.sub(q).is_zero());
        }
    }

    #[test]
    fn newton_converges_quadratically_on_parametric_pair() {
        let sys = parametric_tangent_pair();
        let sq = random_square_subsystem(&sys, 11, false).unwrap();
        let start = vec![c(0.01, 0.0), c(-0.02, 0.0), c(0.005, 0.0)];
        let trace = newton_refine(&sq, &start, 12, 1e-12);
        assert!(trace.converged);
        assert!(trace.iterates.len() <= 7, "took {}", trace.iterates.len() - 1);
        assert!(*trace.residual_norms.last().unwrap() <= 1e-12);
        let sol = trace.solution();
        assert!(sol.iter().all(|z| z.norm() < 1e-10));
        // Digit doubling: once the iteration is in gear, e_{k+1} ≲ C·e_k².
        let errs: Vec<f64> = trace
            .iterates
            .iter()
            .map(|x| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        for w in errs.windows(2) {
            if w[0] < 1e-2 && w[0] > 1e-14 {
                assert!(
                    w[1] <= 100.0 * w[0] * w[0] + 1e-15,
                    "no quadratic decay: {} → {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn newton_at_the_exact_root_stops_immediately() {
        let sys = parametric_tangent_pair();
        let sq = random_square_subsystem(&sys, 5, false).unwrap();
        let trace = newton_refine(&sq, &vec![c(0.0, 0.0); 3], 10, 1e-12);
        assert!(trace.converged);
        assert_eq!(trace.iterates.len(), 1);
    }

    #[test]
    fn newton_reports_singular_jacobian_without_panicking() {
        // The tangent pair itself has a singular Jacobian at its root, so
        // Newton from nearby cannot be expected to converge; the trace must
        // say so rather than blow up.
        let (sys, _) = systems::parabola_circle();
        let sq = sys_to_c64(&sys);
        let trace = newton_refine(&sq, &[c(1e-9, 0.0), c(1e-9, 0.0)], 25, 1e-14);
        assert!(!trace.converged || trace.final_sigma_min < 1e-6);
    }

    #[test]
    fn verify_simple_root_distinguishes_the_cases() {
        // Multiplicity-2 root: not simple.
        let (sys, root) = systems::parabola_circle();
        let report = verify_simple_root(
            &sys_to_c64(&sys),
            &point_to_c64(&root),
            1e-10,
            1e-8,
        );
        assert!(!report.simple);
        assert!(report.residual < 1e-14);
        assert!(report.sigma_min < 1e-12);

        // After one deflation step the same root is simple (overdetermined
        // verification: 3 polynomials, 2 variables).
        let deflated = {
            let (sys, _) = systems::parabola_circle();
            let mut v = sys_to_c64(&sys);
            v.push(MPoly::from_terms(
                2,
                [
                    (Expo::from_slice(&[1, 1]), c(-4.0, 0.0)),
                    (Expo::from_slice(&[0, 1]), c(2.0, 0.0)),
                ],
            ));
            v
        };
        let report = verify_simple_root(&deflated, &[c(0.0, 0.0); 2], 1e-10, 1e-8);
        assert!(report.simple, "σ_min = {}", report.sigma_min);

        // The parametric square form at its root: simple.
        let report = verify_simple_root(
            &parametric_tangent_pair(),
            &[c(0.0, 0.0); 3],
            1e-10,
            1e-8,
        );
        assert!(report.simple);
    }
}

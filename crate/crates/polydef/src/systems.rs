//! Built-in example systems with singular roots.
//!
//! These are standard small benchmarks for multiple-root analysis; the
//! constructors here are the single authoritative encoding used by the unit
//! tests, the integration tests, and the CLI's `bench` subcommand, so the
//! numbers reported in each place refer to identical inputs.

use crate::poly::{Expo, MPoly, Rat};
use num_complex::Complex64;
use num_traits::Zero;

/// Convenience: build an exact-rational polynomial from integer terms.
fn ipoly(n: usize, terms: &[(&[u32], i64)]) -> MPoly<Rat> {
    MPoly::from_terms(
        n,
        terms
            .iter()
            .map(|(e, c)| (Expo::from_slice(e), <Rat as crate::poly::Coeff>::from_i64(*c))),
    )
}

/// Convenience: build a complex-double polynomial from real f64 terms.
fn cpoly(n: usize, terms: &[(&[u32], f64)]) -> MPoly<Complex64> {
    MPoly::from_terms(
        n,
        terms
            .iter()
            .map(|(e, c)| (Expo::from_slice(e), Complex64::new(*c, 0.0))),
    )
}

/// Tangent pair of a parabola and a circle: {x1 + x2², x1² + x2²} with a
/// multiplicity-2 root at the origin. The smallest interesting example: its
/// dual space is span{1, ∂2} and one deflation step makes the root simple.
pub fn parabola_circle() -> (Vec<MPoly<Rat>>, Vec<Rat>) {
    let f1 = ipoly(2, &[(&[1, 0], 1), (&[0, 2], 1)]);
    let f2 = ipoly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
    (vec![f1, f2], vec![Rat::zero(), Rat::zero()])
}

/// Chained cubic family in `n ≥ 2` variables with a multiplicity 2^n root at
/// the origin:
///
/// ```text
/// x1³ + x1² − x2²,  x2³ + x2² − x3,  …,  x_{n−1}³ + x_{n−1}² − x_n,  x_n²
/// ```
///
/// Each equation feeds the next variable, so the local algebra telescopes:
/// the dual space has dimension 2^n but breadth 2, which makes the family a
/// good scaling probe for multiplication-matrix deflation (the parametric
/// normal forms stay narrow while the multiplicity grows geometrically).
pub fn cascade_family(n: usize) -> (Vec<MPoly<Rat>>, Vec<Rat>) {
    assert!(n >= 2, "the cascade family needs at least two variables");
    let mut sys = Vec::with_capacity(n);
    let mut first = vec![0u32; n];
    first[0] = 3;
    let e = |v: Vec<u32>| Expo(v);
    // x1³ + x1² − x2²
    let mut t1 = vec![0u32; n];
    t1[0] = 2;
    let mut t2 = vec![0u32; n];
    t2[1] = 2;
    sys.push(MPoly::from_terms(
        n,
        vec![
            (e(first), rat(1)),
            (e(t1), rat(1)),
            (e(t2), rat(-1)),
        ],
    ));
    // x_i³ + x_i² − x_{i+1} for i = 2, …, n−1 (1-based).
    for i in 1..n - 1 {
        let mut cube = vec![0u32; n];
        cube[i] = 3;
        let mut sq = vec![0u32; n];
        sq[i] = 2;
        let mut lin = vec![0u32; n];
        lin[i + 1] = 1;
        sys.push(MPoly::from_terms(
            n,
            vec![(e(cube), rat(1)), (e(sq), rat(1)), (e(lin), rat(-1))],
        ));
    }
    // x_n²
    let mut last = vec![0u32; n];
    last[n - 1] = 2;
    sys.push(MPoly::from_terms(n, vec![(e(last), rat(1))]));
    (sys, vec![Rat::zero(); n])
}

fn rat(i: i64) -> Rat {
    <Rat as crate::poly::Coeff>::from_i64(i)
}

/// The Caprasse system, a four-variable trigonometric benchmark with a
/// multiplicity-4 root at (2, −i√3, 2, i√3).
pub fn caprasse() -> Vec<MPoly<Rat>> {
    let f1 = ipoly(
        4,
        &[
            (&[3, 0, 1, 0], 1),
            (&[1, 2, 1, 0], -4),
            (&[2, 1, 0, 1], -4),
            (&[0, 3, 0, 1], -2),
            (&[2, 0, 0, 0], -4),
            (&[0, 2, 0, 0], 10),
            (&[1, 0, 1, 0], -4),
            (&[0, 1, 0, 1], 10),
            (&[0, 0, 0, 0], -2),
        ],
    );
    let f2 = ipoly(
        4,
        &[
            (&[1, 0, 3, 0], 1),
            (&[0, 1, 2, 1], -4),
            (&[1, 0, 1, 2], -4),
            (&[0, 1, 0, 3], -2),
            (&[1, 0, 1, 0], -4),
            (&[0, 1, 0, 1], 10),
            (&[0, 0, 2, 0], -4),
            (&[0, 0, 0, 2], 10),
            (&[0, 0, 0, 0], -2),
        ],
    );
    let f3 = ipoly(
        4,
        &[
            (&[0, 2, 1, 0], 1),
            (&[1, 1, 0, 1], 2),
            (&[1, 0, 0, 0], -2),
            (&[0, 0, 1, 0], -1),
        ],
    );
    let f4 = ipoly(
        4,
        &[
            (&[1, 0, 0, 2], 1),
            (&[0, 1, 1, 1], 2),
            (&[0, 0, 1, 0], -2),
            (&[1, 0, 0, 0], -1),
        ],
    );
    vec![f1, f2, f3, f4]
}

/// The singular root (2, −i√3, 2, i√3) of [`caprasse`].
pub fn caprasse_root() -> Vec<Complex64> {
    let s3 = 3f64.sqrt();
    vec![
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, -s3),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, s3),
    ]
}

/// Four quartics in four variables, each pitting one fourth power against
/// the product of the other three variables: {x_i⁴ − ∏_{j≠i} x_j}. The
/// origin is a root of multiplicity 131 with nil-index 10 — the stress case
/// for dual-space computation.
pub fn exchange_quartics() -> (Vec<MPoly<Rat>>, Vec<Rat>) {
    let sys = vec![
        ipoly(4, &[(&[4, 0, 0, 0], 1), (&[0, 1, 1, 1], -1)]),
        ipoly(4, &[(&[0, 4, 0, 0], 1), (&[1, 0, 1, 1], -1)]),
        ipoly(4, &[(&[0, 0, 4, 0], 1), (&[1, 1, 0, 1], -1)]),
        ipoly(4, &[(&[0, 0, 0, 4], 1), (&[1, 1, 1, 0], -1)]),
    ];
    (sys, vec![Rat::zero(); 4])
}

/// A triangular three-variable system — each polynomial introduces one new
/// variable — with a multiplicity-16, nil-index-7 root at (0, 0, −1):
/// {x⁴, x²y + y⁴, z + z² − 7x³ − 8x²}.
pub fn triangular_quartics() -> (Vec<MPoly<Rat>>, Vec<Rat>) {
    let sys = vec![
        ipoly(3, &[(&[4, 0, 0], 1)]),
        ipoly(3, &[(&[2, 1, 0], 1), (&[0, 4, 0], 1)]),
        ipoly(
            3,
            &[
                (&[0, 0, 1], 1),
                (&[0, 0, 2], 1),
                (&[3, 0, 0], -7),
                (&[2, 0, 0], -8),
            ],
        ),
    ];
    (sys, vec![Rat::zero(), Rat::zero(), rat(-1)])
}

/// Two plane cubics whose coefficients involve √5 and √7, with a
/// multiplicity-5, nil-index-4 root near (1.5055, 0.36528). The surds force
/// floating-point coefficients, and the published root is only accurate to
/// a few digits, so this system exercises the approximate-input paths
/// (loose rank tolerances, refinement before analysis).
pub fn surd_cubics() -> (Vec<MPoly<Complex64>>, Vec<Complex64>) {
    let s5 = 5f64.sqrt();
    let s7 = 7f64.sqrt();
    // (x + 2y)³ − 3√5·(x + 2y)² + 14x + 33y − 6√5 + √7, expanded.
    let f1 = cpoly(
        2,
        &[
            (&[3, 0], 1.0),
            (&[2, 1], 6.0),
            (&[1, 2], 12.0),
            (&[0, 3], 8.0),
            (&[2, 0], -3.0 * s5),
            (&[1, 1], -12.0 * s5),
            (&[0, 2], -12.0 * s5),
            (&[1, 0], 14.0),
            (&[0, 1], 33.0),
            (&[0, 0], -6.0 * s5 + s7),
        ],
    );
    // (2x − y)³ − 3√7·(2x − y)² + 41x − 18y − 6√7 − √5, expanded.
    let f2 = cpoly(
        2,
        &[
            (&[3, 0], 8.0),
            (&[2, 1], -12.0),
            (&[1, 2], 6.0),
            (&[0, 3], -1.0),
            (&[2, 0], -12.0 * s7),
            (&[1, 1], 12.0 * s7),
            (&[0, 2], -3.0 * s7),
            (&[1, 0], 41.0),
            (&[0, 1], -18.0),
            (&[0, 0], -6.0 * s7 - s5),
        ],
    );
    let root = vec![Complex64::new(1.5055, 0.0), Complex64::new(0.36528, 0.0)];
    (vec![f1, f2], root)
}

/// Three-variable system mixing a quadric with two expanded cubes,
/// {2x1 + 2x1² + 2x2 + 2x2² + x3² − 1, (x1 + x2 − x3 − 1)³ − x1³,
/// (2x1³ + 5x2² + 10x3 + 5x3² + 5)³ − 1000·x1⁵}, with a multiplicity-18,
/// nil-index-7 root at (0, 0, −1). The cubes are expanded exactly here
/// rather than hand-transcribed.
pub fn expanded_cubes() -> (Vec<MPoly<Rat>>, Vec<Rat>) {
    let f1 = ipoly(
        3,
        &[
            (&[1, 0, 0], 2),
            (&[2, 0, 0], 2),
            (&[0, 1, 0], 2),
            (&[0, 2, 0], 2),
            (&[0, 0, 2], 1),
            (&[0, 0, 0], -1),
        ],
    );
    let inner2 = ipoly(
        3,
        &[
            (&[1, 0, 0], 1),
            (&[0, 1, 0], 1),
            (&[0, 0, 1], -1),
            (&[0, 0, 0], -1),
        ],
    );
    let f2 = inner2.pow(3).sub(&ipoly(3, &[(&[3, 0, 0], 1)]));
    let inner3 = ipoly(
        3,
        &[
            (&[3, 0, 0], 2),
            (&[0, 2, 0], 5),
            (&[0, 0, 1], 10),
            (&[0, 0, 2], 5),
            (&[0, 0, 0], 5),
        ],
    );
    let f3 = inner3.pow(3).sub(&ipoly(3, &[(&[5, 0, 0], 1000)]));
    (
        vec![f1, f2, f3],
        vec![Rat::zero(), Rat::zero(), rat(-1)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all_vanish(sys: &[MPoly<Rat>], root: &[Rat]) {
        for (k, f) in sys.iter().enumerate() {
            let v = f.evaluate(root);
            assert!(v.is_zero(), "polynomial {k} does not vanish at the root");
        }
    }

    #[test]
    fn rational_roots_are_exact() {
        let (sys, root) = parabola_circle();
        assert_all_vanish(&sys, &root);
        let (sys, root) = exchange_quartics();
        assert_all_vanish(&sys, &root);
        let (sys, root) = triangular_quartics();
        assert_all_vanish(&sys, &root);
        let (sys, root) = expanded_cubes();
        assert_all_vanish(&sys, &root);
        for n in 2..=5 {
            let (sys, root) = cascade_family(n);
            assert_eq!(sys.len(), n);
            assert_all_vanish(&sys, &root);
        }
    }

    #[test]
    fn caprasse_vanishes_at_its_complex_root() {
        let sys = caprasse();
        let root = caprasse_root();
        for f in &sys {
            assert!(f.eval_c64(&root).norm() < 1e-12);
        }
    }

    #[test]
    fn surd_cubics_nearly_vanish_at_published_root() {
        // The published root carries ~5 correct digits, so only a loose
        // residual is available here; refinement tightens it later.
        let (sys, root) = surd_cubics();
        for f in &sys {
            assert!(f.eval_c64(&root).norm() < 1e-2);
        }
    }

    #[test]
    fn expanded_cubes_match_hand_expansion_spot_checks() {
        let (sys, _) = expanded_cubes();
        // (x1 + x2 − x3 − 1)³ − x1³: coefficient of x1²x2 is 3, of x3 is −3,
        // constant is −1, and x1³ cancels.
        let f2 = &sys[1];
        assert_eq!(f2.coeff(&Expo::from_slice(&[2, 1, 0])), Some(&rat(3)));
        assert_eq!(f2.coeff(&Expo::from_slice(&[0, 0, 1])), Some(&rat(-3)));
        assert_eq!(f2.coeff(&Expo::from_slice(&[0, 0, 0])), Some(&rat(-1)));
        assert_eq!(f2.coeff(&Expo::from_slice(&[3, 0, 0])), None);
        // (… + 5)³ − 1000x1⁵: constant 125, x3-coefficient 3·25·10 = 750,
        // x1⁵ term −1000 (the 2x1³·… products cannot reach degree 5 in x1
        // alone except via no cross terms, so −1000·x1⁵ survives intact).
        let f3 = &sys[2];
        assert_eq!(f3.coeff(&Expo::from_slice(&[0, 0, 0])), Some(&rat(125)));
        assert_eq!(f3.coeff(&Expo::from_slice(&[0, 0, 1])), Some(&rat(750)));
        assert_eq!(f3.coeff(&Expo::from_slice(&[5, 0, 0])), Some(&rat(-1000)));
    }

    #[test]
    fn surd_cubics_match_unfactored_transcription() {
        // The factored construction above must agree with the raw
        // coefficient list term by term.
        let s5 = 5f64.sqrt();
        let s7 = 7f64.sqrt();
        let (sys, _) = surd_cubics();
        let raw1 = cpoly(
            2,
            &[
                (&[1, 0], 14.0),
                (&[0, 1], 33.0),
                (&[2, 0], -3.0 * s5),
                (&[1, 1], -12.0 * s5),
                (&[0, 2], -12.0 * s5),
                (&[0, 0], -6.0 * s5 + s7),
                (&[3, 0], 1.0),
                (&[2, 1], 6.0),
                (&[1, 2], 12.0),
                (&[0, 3], 8.0),
            ],
        );
        assert!(sys[0].sub(&raw1).is_zero());
    }
}

//! Truncated dual spaces of an isolated singular root: Macaulay's dialytic
//! construction, the multiplicity and nil-index, and the orthogonal
//! primal–dual pair used by the multiplication-matrix deflation.
//!
//! The local dual space at a root ξ of a system F is the set of
//! differential functionals Λ = Σ c_γ ∂^γ (anchored at ξ) that annihilate
//! every element of the ideal generated by F. Truncating at order t gives a
//! nested chain D_0 ⊆ D_1 ⊆ ⋯ that stabilizes at the first order o (the
//! nil-index) with dim D_{o+1} = dim D_o; the stable dimension δ is the
//! multiplicity of the root. Each D_t is the right null space of a
//! structured "dialytic" matrix built from scaled coefficients of the
//! translated system, which is how everything here is computed.

use crate::linalg::{self, lstsq, CMat, CVec, Tol};
use crate::poly::{
    grevlex_cmp, monomials_upto, multi_factorial_f64, DualElement, Expo, MPoly,
};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

/// The dual space of a system at an approximate root.
#[derive(Debug, Clone)]
pub struct DualSpaceResult {
    /// The root the functionals are anchored at.
    pub anchor: Vec<Complex64>,
    /// Basis of the stable dual space, each element of unit coefficient
    /// norm.
    pub basis: Vec<DualElement>,
    /// δ = dim D, the multiplicity of the root.
    pub multiplicity: usize,
    /// o, the smallest t with dim D_{t+1} = dim D_t.
    pub nil_index: u32,
    /// dim D_t for t = 0, 1, …, o+1 (ends with two equal entries).
    pub dim_by_order: Vec<usize>,
}

/// A primal monomial basis E together with the unique dual basis orthogonal
/// to it, and the pairing values ν that seed the parametric multiplication
/// matrices.
#[derive(Debug, Clone)]
pub struct PrimalDualPair {
    /// The root the functionals are anchored at.
    pub anchor: Vec<Complex64>,
    /// Exponents α_0 = 0, α_1, …, α_{δ−1} in ascending grevlex order; the
    /// primal basis is {(x−ξ)^{α_i}}.
    pub exponents: Vec<Expo>,
    /// Dual basis with Λ_i((x−ξ)^{α_j}) = δ_ij; ord(Λ_i) = |α_i|.
    pub basis: Vec<DualElement>,
    /// ν(i, β) = Λ_i((x−ξ)^β) for |β| ≤ o and β outside E (values on E are
    /// fixed by orthogonality and are not stored).
    pub nu: BTreeMap<(usize, Expo), Complex64>,
    /// Nil-index carried over from the dual space.
    pub nil_index: u32,
}

impl PrimalDualPair {
    /// δ, the size of the basis.
    pub fn delta(&self) -> usize {
        self.exponents.len()
    }

    /// Position of `beta` in E, if it is a primal exponent.
    pub fn exponent_index(&self, beta: &Expo) -> Option<usize> {
        self.exponents.iter().position(|a| a == beta)
    }

    /// Λ_i((x−ξ)^β) for arbitrary β, resolving orthogonality, the stored
    /// table, and the order cutoff (ν = 0 whenever |β| exceeds o).
    pub fn nu_value(&self, i: usize, beta: &Expo) -> Complex64 {
        if let Some(j) = self.exponent_index(beta) {
            return if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        if beta.degree() > self.nil_index {
            return Complex64::new(0.0, 0.0);
        }
        self.nu
            .get(&(i, beta.clone()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Failures of dual-space computation.
#[derive(Debug)]
pub enum DualError {
    /// Dimensions never stabilized up to the order cap; carries the cap and
    /// the dimensions seen. Usually means the point is not an isolated root
    /// at this tolerance, or the tolerance is miscalibrated.
    NoStabilization { t_max: u32, dims: Vec<usize> },
    /// The echelonized dual basis has no pivot on the constant functional,
    /// so the evaluation 1_ξ is not in its span.
    MissingEvaluation,
    /// The dual basis rows are linearly dependent at the working tolerance,
    /// contradicting the claimed dimension.
    DependentBasis,
    /// The primal exponent set is not connected to 1: the named exponent
    /// has no predecessor α − e_i in E.
    NotConnected(Expo),
    /// A prescribed primal basis pairs singularly with the dual space.
    SingularPairing,
    /// A prescribed primal basis has the wrong size or a repeated exponent.
    BadPrescribedBasis(String),
}

impl fmt::Display for DualError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualError::NoStabilization { t_max, dims } => write!(
                f,
                "dual-space dimensions {dims:?} did not stabilize by order {t_max}"
            ),
            DualError::MissingEvaluation => {
                write!(f, "the evaluation functional is not in the dual-space span")
            }
            DualError::DependentBasis => {
                write!(f, "dual basis is linearly dependent at the working tolerance")
            }
            DualError::NotConnected(e) => write!(
                f,
                "primal exponent {e} is not connected to 1 (no predecessor in the set)"
            ),
            DualError::SingularPairing => {
                write!(f, "prescribed primal basis pairs singularly with the dual space")
            }
            DualError::BadPrescribedBasis(msg) => {
                write!(f, "bad prescribed primal basis: {msg}")
            }
        }
    }
}

impl Error for DualError {}

/// The dialytic matrix whose right null space is the order-t dual space.
///
/// Columns are indexed by ∂^γ with |γ| ≤ t in ascending grevlex order; rows
/// by pairs (i, β) with |β| ≤ max(t−1, 0); the entry at ((i, β), γ) is
/// ∂^γ((x−ξ)^β f_i)(ξ).
///
/// Shifting coordinates to y = x − ξ turns (x−ξ)^β f_i into y^β g_i with
/// g_i(y) = f_i(y + ξ), so after translating each g_i once the entry is
/// γ! · coeff_{γ−β}(g_i) (zero unless γ ≥ β componentwise). Null-space
/// coefficient vectors are therefore raw ∂^γ coefficients — factorials live
/// in the matrix entries and in the pairing, never in the column scaling.
pub fn macaulay_matrix(sys: &[MPoly<Complex64>], xi: &[Complex64], t: u32) -> CMat {
    let n = xi.len();
    let translated: Vec<MPoly<Complex64>> = sys.iter().map(|f| f.translate(xi)).collect();
    macaulay_from_translated(&translated, n, t, false)
}

/// Same as [`macaulay_matrix`] but starting from already-translated
/// polynomials g_i(y) = f_i(y + ξ); translation is the expensive exact step,
/// so the order-probing loop shares it across all t.
///
/// With `equilibrate`, column γ is divided by γ!, leaving the raw
/// coefficient coeff_{γ−β}(g_i) as the entry. Column scaling does not change
/// which columns are in the null space's support, but it removes the huge
/// factorial dynamic range (12! ≈ 5·10⁸) that would otherwise push genuine
/// singular values below a relative rank threshold at high orders. Null
/// vectors of the equilibrated matrix are coefficients of the scaled basis
/// γ!·∂^γ and must be divided by γ! to read as plain ∂^γ coefficients.
fn macaulay_from_translated(
    translated: &[MPoly<Complex64>],
    n: usize,
    t: u32,
    equilibrate: bool,
) -> CMat {
    let cols: Vec<Expo> = monomials_upto(n, t);
    let rows_beta: Vec<Expo> = monomials_upto(n, t.saturating_sub(1));
    let n_rows = translated.len() * rows_beta.len();
    let mut m = CMat::zeros(n_rows, cols.len());
    for (gi, g) in translated.iter().enumerate() {
        for (bi, beta) in rows_beta.iter().enumerate() {
            let row = gi * rows_beta.len() + bi;
            // Entry(γ) = γ!·coeff_{γ−β}(g); iterate over the support of g
            // instead of the columns so sparse systems fill sparsely.
            for (e, c) in g.terms() {
                let gamma = e.add(beta);
                if gamma.degree() > t {
                    continue;
                }
                if let Ok(col) = cols.binary_search_by(|a| grevlex_cmp(a, &gamma)) {
                    m[(row, col)] = if equilibrate {
                        *c
                    } else {
                        c * multi_factorial_f64(&gamma)
                    };
                }
            }
        }
    }
    m
}

/// Compute the full dual space at `xi`: iterate the truncation order until
/// the dimension stabilizes, then report δ, the nil-index o, the per-order
/// dimensions, and an orthonormal basis of D_o.
///
/// `xi` must (approximately) annihilate the system: dim D_0 = 1 is taken as
/// given — the order-0 matrix consists solely of the residuals f_i(ξ), so
/// thresholding it tells us nothing a residual check does not.
pub fn compute_dual_space(
    sys: &[MPoly<Complex64>],
    xi: &[Complex64],
    tol: Tol,
    t_max: u32,
) -> Result<DualSpaceResult, DualError> {
    let n = xi.len();
    let translated: Vec<MPoly<Complex64>> = sys.iter().map(|f| f.translate(xi)).collect();
    let mut dims: Vec<usize> = vec![1];
    for t in 1..=t_max {
        let m = macaulay_from_translated(&translated, n, t, true);
        let rank = linalg::numerical_rank(&m, tol).rank;
        let dim = m.ncols() - rank;
        let prev = *dims.last().expect("dims starts nonempty");
        dims.push(dim);
        if dim == prev {
            let o = t - 1;
            let basis = if o == 0 {
                vec![DualElement::evaluation(xi.to_vec())]
            } else {
                let m_o = macaulay_from_translated(&translated, n, o, true);
                null_space_elements(&m_o, xi, o, tol)
            };
            return Ok(DualSpaceResult {
                anchor: xi.to_vec(),
                basis,
                multiplicity: dim,
                nil_index: o,
                dim_by_order: dims,
            });
        }
    }
    Err(DualError::NoStabilization { t_max, dims })
}

/// Read the null-space columns of an *equilibrated* order-t dialytic matrix
/// as dual elements anchored at `xi`: each component is divided by γ! to
/// convert from the scaled basis back to plain ∂^γ coefficients, and every
/// element is renormalized to unit coefficient norm.
fn null_space_elements(m: &CMat, xi: &[Complex64], t: u32, tol: Tol) -> Vec<DualElement> {
    let n = xi.len();
    let cols: Vec<Expo> = monomials_upto(n, t);
    let ns = linalg::null_space(m, tol);
    (0..ns.ncols())
        .map(|k| {
            let lam = DualElement::new(
                xi.to_vec(),
                cols.iter()
                    .enumerate()
                    .map(|(j, e)| (e.clone(), ns[(j, k)] / multi_factorial_f64(e)))
                    .filter(|(_, c)| c.norm() > 0.0),
            );
            let norm = lam.coeff_norm();
            lam.scaled(Complex64::new(1.0 / norm, 0.0))
        })
        .collect()
}

/// Echelonize a dual basis against the monomial functionals scanned in
/// descending grevlex order; the pivot monomials are the primal exponents E,
/// and scaling each row by 1/α! makes the bases mutually orthogonal:
/// Λ_i((x−ξ)^{α_j}) = δ_ij.
///
/// E always contains 0 (else the dual space would miss the evaluation
/// functional) and is connected to 1; both are checked, not assumed.
pub fn orthogonal_primal_dual(
    d: &DualSpaceResult,
    tol: f64,
) -> Result<PrimalDualPair, DualError> {
    let n = d.anchor.len();
    let o = d.nil_index;
    let cols: Vec<Expo> = monomials_upto(n, o);
    let mut m = CMat::zeros(d.basis.len(), cols.len());
    for (i, lam) in d.basis.iter().enumerate() {
        for (e, c) in lam.terms() {
            if let Ok(j) = cols.binary_search_by(|a| grevlex_cmp(a, e)) {
                m[(i, j)] = *c;
            }
        }
    }
    let order: Vec<usize> = (0..cols.len()).rev().collect();
    let (echelon, pivots) = linalg::reduced_row_echelon(&m, &order, tol);
    if pivots.len() < d.basis.len() {
        return Err(DualError::DependentBasis);
    }
    // Pivots arrive in descending grevlex order; flip to ascending so that
    // α_0 = 0 comes first and orders are non-decreasing.
    let mut rows: Vec<(Expo, usize)> = pivots
        .iter()
        .enumerate()
        .map(|(row, &col)| (cols[col].clone(), row))
        .collect();
    rows.sort_by(|a, b| grevlex_cmp(&a.0, &b.0));
    if !rows[0].0.is_zero() {
        return Err(DualError::MissingEvaluation);
    }
    let exponents: Vec<Expo> = rows.iter().map(|(e, _)| e.clone()).collect();
    check_connected(&exponents)?;
    let basis: Vec<DualElement> = rows
        .iter()
        .map(|(alpha, row)| {
            let scale = Complex64::new(1.0 / multi_factorial_f64(alpha), 0.0);
            DualElement::new(
                d.anchor.clone(),
                cols.iter()
                    .enumerate()
                    .map(|(j, e)| (e.clone(), echelon[(*row, j)] * scale))
                    .filter(|(_, c)| c.norm() > 0.0),
            )
        })
        .collect();
    Ok(assemble_pair(d.anchor.clone(), exponents, basis, o))
}

/// Like [`orthogonal_primal_dual`], but with the primal exponents
/// prescribed by the caller instead of chosen by grevlex pivoting. The dual
/// basis is re-combined so that Λ_i((x−ξ)^{α_j}) = δ_ij; this requires the
/// prescribed monomials to pair nonsingularly with the dual space.
pub fn orthogonal_primal_dual_with_basis(
    d: &DualSpaceResult,
    prescribed: &[Expo],
    tol: f64,
) -> Result<PrimalDualPair, DualError> {
    let delta = d.basis.len();
    if prescribed.len() != delta {
        return Err(DualError::BadPrescribedBasis(format!(
            "{} exponents for a multiplicity-{} root",
            prescribed.len(),
            delta
        )));
    }
    let mut exponents: Vec<Expo> = prescribed.to_vec();
    exponents.sort_by(grevlex_cmp);
    exponents.dedup();
    if exponents.len() != delta {
        return Err(DualError::BadPrescribedBasis(
            "repeated exponent".to_string(),
        ));
    }
    if !exponents[0].is_zero() {
        return Err(DualError::MissingEvaluation);
    }
    check_connected(&exponents)?;
    // Pairing matrix P[l][j] = Λ̃_l((x−ξ)^{α_j}); the new basis rows are
    // P⁻¹·Λ̃, which is exactly the linear system solved below.
    let p = CMat::from_fn(delta, delta, |l, j| d.basis[l].pairing(&exponents[j]));
    let p_norm = p.norm();
    let inv = match p.lu().try_inverse() {
        Some(inv) => inv,
        None => return Err(DualError::SingularPairing),
    };
    // Guard against a numerically singular pairing that LU still inverts:
    // a huge inverse means the prescribed basis is (nearly) degenerate.
    if inv.norm() * p_norm > 1.0 / tol.max(f64::EPSILON) {
        return Err(DualError::SingularPairing);
    }
    let basis: Vec<DualElement> = (0..delta)
        .map(|k| {
            let mut terms: BTreeMap<Expo, Complex64> = BTreeMap::new();
            for l in 0..delta {
                let w = inv[(k, l)];
                if w.norm() == 0.0 {
                    continue;
                }
                for (e, c) in d.basis[l].terms() {
                    *terms.entry(e.clone()).or_insert(Complex64::new(0.0, 0.0)) += w * c;
                }
            }
            terms.retain(|_, c| c.norm() > tol);
            DualElement::new(d.anchor.clone(), terms)
        })
        .collect();
    Ok(assemble_pair(
        d.anchor.clone(),
        exponents,
        basis,
        d.nil_index,
    ))
}

/// Fill the ν table from the orthogonalized basis.
fn assemble_pair(
    anchor: Vec<Complex64>,
    exponents: Vec<Expo>,
    basis: Vec<DualElement>,
    o: u32,
) -> PrimalDualPair {
    let n = anchor.len();
    let mut nu = BTreeMap::new();
    for beta in monomials_upto(n, o) {
        if exponents.contains(&beta) {
            continue;
        }
        for (i, lam) in basis.iter().enumerate() {
            let v = lam.pairing(&beta);
            if v.norm() > 0.0 {
                nu.insert((i, beta.clone()), v);
            }
        }
    }
    PrimalDualPair {
        anchor,
        exponents,
        basis,
        nu,
        nil_index: o,
    }
}

/// Every nonzero α in the set must have some α − e_i also in the set.
fn check_connected(exponents: &[Expo]) -> Result<(), DualError> {
    for a in exponents {
        if a.is_zero() {
            continue;
        }
        let has_parent = (0..a.len()).any(|i| {
            a.checked_sub(&Expo::unit(a.len(), i))
                .map(|p| exponents.contains(&p))
                .unwrap_or(false)
        });
        if !has_parent {
            return Err(DualError::NotConnected(a.clone()));
        }
    }
    Ok(())
}

/// Distance from `target` to the span of `basis`, both read as coefficient
/// vectors over the monomials of degree ≤ `order`: the least-squares
/// residual ‖A·w − target‖. Used to check closedness of a dual space under
/// the derivation maps.
pub fn span_residual(basis: &[DualElement], target: &DualElement, order: u32) -> f64 {
    let n = target.n_vars();
    let cols: Vec<Expo> = monomials_upto(n, order);
    let idx = |e: &Expo| cols.binary_search_by(|a| grevlex_cmp(a, e)).ok();
    let mut a = CMat::zeros(cols.len(), basis.len());
    for (k, lam) in basis.iter().enumerate() {
        for (e, c) in lam.terms() {
            if let Some(j) = idx(e) {
                a[(j, k)] = *c;
            }
        }
    }
    let mut b = CVec::zeros(cols.len());
    for (e, c) in target.terms() {
        if let Some(j) = idx(e) {
            b[j] = *c;
        }
    }
    lstsq(&a, &b).1
}

//! First-order differential deflation: append directional derivatives of
//! the system along kernel vector fields of its Jacobian until the root
//! becomes simple. No new variables are introduced.
//!
//! The kernel vector fields come from a rank-r block A(x) of the Jacobian
//! (selected numerically at the approximate root, then treated symbolically):
//! the columns of det(A(x))·[−A(x)⁻¹B(x); Id] have *polynomial* entries
//! λ_j(x) because det·A⁻¹ is the adjugate. Applying such a field to the
//! system, Λ(f_k) = Σ_m λ_m(x)·∂_m f_k, vanishes identically on the r rows
//! that built A, so each deflation step appends at most N − r genuinely new
//! polynomials, and every appended polynomial vanishes at the root. Each
//! step strictly reduces the nil-index, so at most o steps are ever needed.

use crate::linalg::{self, CMat, Tol};
use crate::poly::{
    effectively_zero, jacobian, proportional, sys_to_c64, Coeff, MPoly,
};
use crate::refine;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::error::Error;
use std::fmt;

/// A kernel vector field Λ = Σ_j λ_j(x)·∂_j of the Jacobian: polynomial
/// coefficients, one per variable, lying in ker J_f(ξ) when evaluated at
/// the root.
#[derive(Debug, Clone)]
pub struct KernelForm<C: Coeff> {
    /// λ_j(x) for j = 0, …, n−1.
    pub coefficients: Vec<MPoly<C>>,
    /// Which column of the complementary block produced this form.
    pub source_col: usize,
}

impl<C: Coeff> KernelForm<C> {
    /// Apply the form to one polynomial: Σ_j λ_j(x)·∂_j p.
    pub fn apply(&self, p: &MPoly<C>) -> MPoly<C> {
        let mut out = MPoly::zero(p.n_vars());
        for (j, lam) in self.coefficients.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            let d = p.differentiate(j);
            if d.is_zero() {
                continue;
            }
            out = out.add(&lam.mul(&d));
        }
        out
    }

    /// The coefficient vector evaluated at a point.
    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.coefficients.iter().map(|l| l.eval_c64(x)).collect()
    }
}

/// Numerical block choice behind a set of kernel forms.
#[derive(Debug, Clone)]
pub struct BlockChoice {
    /// Rank of the Jacobian at the root.
    pub rank: usize,
    /// Row indices of the invertible block (empty when rank 0).
    pub rows: Vec<usize>,
    /// Column indices of the invertible block.
    pub cols: Vec<usize>,
}

/// Result of one deflation step.
#[derive(Debug, Clone)]
pub struct DeflateStep<C: Coeff> {
    /// The grown system: the input followed by the kept appended entries.
    pub system: Vec<MPoly<C>>,
    /// Block choice used for the kernel forms.
    pub block: BlockChoice,
    /// Appended entries that were not identically zero, before duplicate
    /// removal. For |i| selected forms this is |i|·(N − n + c) unless some
    /// entry vanishes coincidentally.
    pub nontrivial: usize,
    /// Entries actually kept (nontrivial minus duplicates).
    pub kept: usize,
}

/// How `deflate_fully` picks kernel directions at each step.
#[derive(Debug, Clone, Copy)]
pub enum KernelChoice {
    /// Use the first k kernel-form columns as they come out of the block
    /// construction. Deterministic and cheap, but a fixed column can stall
    /// on symmetric systems (it keeps differentiating down one axis while
    /// the Jacobian rank stays put).
    Leading(usize),
    /// Combine all kernel forms with fresh small random integer weights
    /// (exact in every coefficient domain) at every step, k combinations
    /// per step. Deterministic per seed.
    Generic { seed: u64, count: usize },
}

/// Tunables for deflation. `Default` matches the CLI defaults.
#[derive(Debug, Clone, Copy)]
pub struct DeflateOpts {
    /// Rank tolerance for Jacobian decisions.
    pub rank_tol: Tol,
    /// Coefficient threshold below which a float-coefficient appended
    /// polynomial counts as identically zero (exact domains use exactness).
    pub zero_tol: f64,
    /// Proportionality tolerance for duplicate detection in float domains.
    pub dup_tol: f64,
    /// Hard cap on deflation iterations.
    pub max_iters: usize,
    /// Seed for the between-steps Newton refresh subsystem.
    pub refresh_seed: u64,
    /// Newton steps allowed per refresh; 0 disables refreshing.
    pub refresh_steps: usize,
}

impl Default for DeflateOpts {
    fn default() -> Self {
        DeflateOpts {
            rank_tol: Tol::Rel(1e-8),
            zero_tol: 1e-10,
            dup_tol: 1e-10,
            max_iters: 16,
            refresh_seed: 0x5eed,
            refresh_steps: 5,
        }
    }
}

/// Full record of an iterated deflation.
#[derive(Debug, Clone)]
pub struct DeflationTrace<C: Coeff> {
    /// f = f⁽⁰⁾, f⁽¹⁾, …, f⁽ᵏ⁾; each extends the previous one.
    pub systems: Vec<Vec<MPoly<C>>>,
    /// rank J(ξ) at the start of each step, plus the final full rank.
    pub ranks: Vec<usize>,
    /// Block choices per step.
    pub blocks: Vec<BlockChoice>,
    /// The working root after each refresh (starts with the input point).
    pub roots: Vec<Vec<Complex64>>,
    /// Number of deflation steps performed.
    pub iterations: usize,
}

impl<C: Coeff> DeflationTrace<C> {
    /// The final deflated system.
    pub fn final_system(&self) -> &[MPoly<C>] {
        self.systems.last().expect("trace holds the input system")
    }

    /// The final working root.
    pub fn final_root(&self) -> &[Complex64] {
        self.roots.last().expect("trace holds the input root")
    }
}

/// Deflation failures.
#[derive(Debug)]
pub enum DeflateError {
    /// The Jacobian already has full column rank: nothing to deflate.
    AlreadySimple,
    /// An empty set of kernel directions was requested.
    EmptySelection,
    /// A requested kernel-form index is ≥ the number of forms.
    SelectionOutOfRange { index: usize, forms: usize },
    /// The iteration cap was hit with the root still singular; carries the
    /// rank history for diagnosis.
    IterationLimit { max: usize, ranks: Vec<usize> },
    /// Block selection failed (rank changed under the pivoting tolerance).
    Linalg(linalg::LinalgError),
}

impl fmt::Display for DeflateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeflateError::AlreadySimple => {
                write!(f, "the root is already simple: the Jacobian has full rank")
            }
            DeflateError::EmptySelection => write!(f, "no kernel directions selected"),
            DeflateError::SelectionOutOfRange { index, forms } => {
                write!(f, "kernel direction {index} requested but only {forms} exist")
            }
            DeflateError::IterationLimit { max, ranks } => write!(
                f,
                "root still singular after {max} deflation steps (rank history {ranks:?})"
            ),
            DeflateError::Linalg(e) => write!(f, "block selection failed: {e}"),
        }
    }
}

impl Error for DeflateError {}

impl From<linalg::LinalgError> for DeflateError {
    fn from(e: linalg::LinalgError) -> Self {
        DeflateError::Linalg(e)
    }
}

/// Evaluate the Jacobian of `sys` at `xi`.
pub fn jacobian_at<C: Coeff>(sys: &[MPoly<C>], xi: &[Complex64]) -> CMat {
    let jac = jacobian(sys);
    CMat::from_fn(sys.len(), xi.len(), |i, j| jac[i][j].eval_c64(xi))
}

/// Determinant and adjugate of a square polynomial matrix by cofactor
/// expansion. Exact in the coefficient domain; meant for the small ranks
/// (r ≤ n) that deflation encounters.
fn det_and_adjugate<C: Coeff>(a: &[Vec<MPoly<C>>], n_vars: usize) -> (MPoly<C>, Vec<Vec<MPoly<C>>>) {
    let r = a.len();
    if r == 0 {
        return (MPoly::constant(n_vars, C::one()), Vec::new());
    }
    let det = poly_det(a, n_vars);
    let mut adj = vec![vec![MPoly::zero(n_vars); r]; r];
    for i in 0..r {
        for j in 0..r {
            let minor = minor_matrix(a, i, j);
            let mut cof = poly_det(&minor, n_vars);
            if (i + j) % 2 == 1 {
                cof = cof.neg();
            }
            adj[j][i] = cof; // adjugate = transposed cofactors
        }
    }
    (det, adj)
}

fn minor_matrix<C: Coeff>(a: &[Vec<MPoly<C>>], skip_row: usize, skip_col: usize) -> Vec<Vec<MPoly<C>>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect()
}

fn poly_det<C: Coeff>(a: &[Vec<MPoly<C>>], n_vars: usize) -> MPoly<C> {
    match a.len() {
        0 => MPoly::constant(n_vars, C::one()),
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        _ => {
            let mut det = MPoly::zero(n_vars);
            for j in 0..a.len() {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor = minor_matrix(a, 0, j);
                let mut term = a[0][j].mul(&poly_det(&minor, n_vars));
                if j % 2 == 1 {
                    term = term.neg();
                }
                det = det.add(&term);
            }
            det
        }
    }
}

/// The kernel vector fields of the Jacobian at (approximately) `xi`.
///
/// Selects an invertible r×r block A of J_f(ξ) by complete pivoting, then
/// returns the c = n − r columns of det(A(x))·[−A(x)⁻¹B(x); Id] as
/// polynomial forms: entry λ at a selected column position comes from
/// −adj(A)·B, the position of the form's own complementary column carries
/// det(A), and the remaining positions are zero. For r = 0 the forms are
/// simply ∂_1, …, ∂_n.
pub fn kernel_forms<C: Coeff>(
    sys: &[MPoly<C>],
    xi: &[Complex64],
    opts: &DeflateOpts,
) -> Result<(Vec<KernelForm<C>>, BlockChoice), DeflateError> {
    let n = xi.len();
    let j_num = jacobian_at(sys, xi);
    let rank = linalg::numerical_rank(&j_num, opts.rank_tol).rank;
    if rank >= n {
        return Err(DeflateError::AlreadySimple);
    }
    if rank == 0 {
        let forms = (0..n)
            .map(|j| {
                let mut coeffs = vec![MPoly::zero(n); n];
                coeffs[j] = MPoly::constant(n, C::one());
                KernelForm {
                    coefficients: coeffs,
                    source_col: j,
                }
            })
            .collect();
        return Ok((
            forms,
            BlockChoice {
                rank: 0,
                rows: Vec::new(),
                cols: Vec::new(),
            },
        ));
    }
    let (rows, cols) = linalg::max_rank_submatrix(&j_num, rank, 0.0)?;
    let jac = jacobian(sys);
    let a: Vec<Vec<MPoly<C>>> = rows
        .iter()
        .map(|&ri| cols.iter().map(|&cj| jac[ri][cj].clone()).collect())
        .collect();
    let (det, adj) = det_and_adjugate(&a, n);
    let other_cols: Vec<usize> = (0..n).filter(|c| !cols.contains(c)).collect();
    // Top block T = −adj(A)·B with B[m][j] = ∂_{other_cols[j]} f_{rows[m]}.
    let mut forms = Vec::with_capacity(other_cols.len());
    for (j, &oc) in other_cols.iter().enumerate() {
        let mut coeffs = vec![MPoly::zero(n); n];
        for (k, &ck) in cols.iter().enumerate() {
            let mut entry = MPoly::zero(n);
            for (m, &rm) in rows.iter().enumerate() {
                let b = &jac[rm][oc];
                if b.is_zero() || adj[k][m].is_zero() {
                    continue;
                }
                entry = entry.add(&adj[k][m].mul(b));
            }
            coeffs[ck] = entry.neg();
        }
        coeffs[oc] = det.clone();
        forms.push(KernelForm {
            coefficients: coeffs,
            source_col: j,
        });
    }
    Ok((
        forms,
        BlockChoice {
            rank,
            rows,
            cols,
        },
    ))
}

/// Append the images of the system under the selected kernel forms,
/// dropping identically-zero entries and entries proportional to a
/// polynomial already present.
fn append_forms<C: Coeff>(
    sys: &[MPoly<C>],
    forms: &[KernelForm<C>],
    selection: &[usize],
    opts: &DeflateOpts,
) -> Result<(Vec<MPoly<C>>, usize, usize), DeflateError> {
    if selection.is_empty() {
        return Err(DeflateError::EmptySelection);
    }
    for &s in selection {
        if s >= forms.len() {
            return Err(DeflateError::SelectionOutOfRange {
                index: s,
                forms: forms.len(),
            });
        }
    }
    let mut out = sys.to_vec();
    let mut nontrivial = 0usize;
    let mut kept = 0usize;
    for &s in selection {
        for f in sys {
            let p = forms[s].apply(f);
            if effectively_zero(&p, opts.zero_tol * (1.0 + p.max_abs_coeff().min(1.0))) {
                continue;
            }
            nontrivial += 1;
            if out.iter().any(|q| proportional(&p, q, opts.dup_tol)) {
                continue;
            }
            kept += 1;
            out.push(p);
        }
    }
    Ok((out, nontrivial, kept))
}

/// One deflation step with an explicit choice of kernel directions
/// (indices into the form list of [`kernel_forms`]).
pub fn deflate_once<C: Coeff>(
    sys: &[MPoly<C>],
    xi: &[Complex64],
    selection: &[usize],
    opts: &DeflateOpts,
) -> Result<DeflateStep<C>, DeflateError> {
    let (forms, block) = kernel_forms(sys, xi, opts)?;
    let (system, nontrivial, kept) = append_forms(sys, &forms, selection, opts)?;
    Ok(DeflateStep {
        system,
        block,
        nontrivial,
        kept,
    })
}

/// Kernel forms combined with small random integer weights — exact in any
/// coefficient domain, fresh at every step.
fn combine_forms<C: Coeff>(
    forms: &[KernelForm<C>],
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<KernelForm<C>> {
    let n = forms[0].coefficients.len();
    let want = count.min(forms.len());
    (0..want)
        .map(|k| {
            let mut weights: Vec<i64> = vec![0; forms.len()];
            while weights.iter().all(|w| *w == 0) {
                for w in weights.iter_mut() {
                    *w = rng.gen_range(-3..=3);
                }
            }
            let mut coeffs = vec![MPoly::zero(n); n];
            for (f, &w) in forms.iter().zip(&weights) {
                if w == 0 {
                    continue;
                }
                let wc = C::from_i64(w);
                for (j, lam) in f.coefficients.iter().enumerate() {
                    if lam.is_zero() {
                        continue;
                    }
                    coeffs[j] = coeffs[j].add(&lam.scale(&wc));
                }
            }
            KernelForm {
                coefficients: coeffs,
                source_col: k,
            }
        })
        .collect()
}

/// Iterate first-order deflation until the Jacobian gains full column rank
/// at the (periodically refreshed) root.
///
/// Between steps the root is re-approximated by a few damped Newton
/// iterations on a random square subsystem of the current deflation; with
/// an exact root this is a no-op (the residual is already below threshold).
pub fn deflate_fully<C: Coeff>(
    sys: &[MPoly<C>],
    xi: &[Complex64],
    choice: KernelChoice,
    opts: &DeflateOpts,
) -> Result<DeflationTrace<C>, DeflateError> {
    let n = xi.len();
    let mut rng = match choice {
        KernelChoice::Generic { seed, .. } => ChaCha8Rng::seed_from_u64(seed),
        KernelChoice::Leading(_) => ChaCha8Rng::seed_from_u64(0),
    };
    let mut trace = DeflationTrace {
        systems: vec![sys.to_vec()],
        ranks: Vec::new(),
        blocks: Vec::new(),
        roots: vec![xi.to_vec()],
        iterations: 0,
    };
    let mut current = sys.to_vec();
    let mut root = xi.to_vec();
    for _ in 0..opts.max_iters {
        let rank = linalg::numerical_rank(&jacobian_at(&current, &root), opts.rank_tol).rank;
        trace.ranks.push(rank);
        if rank >= n {
            return Ok(trace);
        }
        let (raw_forms, block) = kernel_forms(&current, &root, opts)?;
        let (forms, selection): (Vec<KernelForm<C>>, Vec<usize>) = match choice {
            KernelChoice::Leading(k) => {
                let take = k.max(1).min(raw_forms.len());
                (raw_forms, (0..take).collect())
            }
            KernelChoice::Generic { count, .. } => {
                let combined = combine_forms(&raw_forms, &mut rng, count.max(1));
                let take = combined.len();
                (combined, (0..take).collect())
            }
        };
        let (next, _, _) = append_forms(&current, &forms, &selection, opts)?;
        trace.blocks.push(block);
        trace.iterations += 1;
        current = next;
        // Refresh the root unless it is already essentially exact.
        if opts.refresh_steps > 0 {
            let csys = sys_to_c64(&current);
            let residual: f64 = csys
                .iter()
                .map(|f| f.eval_c64(&root).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual > 1e-13 {
                if let Ok(sq) =
                    refine::random_square_subsystem(&csys, opts.refresh_seed, false)
                {
                    let t = refine::newton_refine(&sq, &root, opts.refresh_steps, 1e-14);
                    let refreshed: f64 = csys
                        .iter()
                        .map(|f| f.eval_c64(t.solution()).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if refreshed < residual {
                        root = t.solution().to_vec();
                    }
                }
            }
        }
        trace.systems.push(current.clone());
        trace.roots.push(root.clone());
    }
    Err(DeflateError::IterationLimit {
        max: opts.max_iters,
        ranks: trace.ranks,
    })
}

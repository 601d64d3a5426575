//! Sparse multivariate polynomials and dual-space functionals.
//!
//! Polynomials are maps from exponent vectors to nonzero coefficients. The
//! coefficient domain is either exact rational or complex double, selected
//! through the [`Coeff`] trait; all higher layers are generic over it.
//! Functionals of the dual space (differential operators evaluated at an
//! anchor point) are always numeric, since they come out of floating-point
//! null spaces.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar type used throughout the crate.
pub type Rat = BigRational;

/// Exponent vector of a monomial: entry `i` is the power of variable `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    /// The zero multi-index in `n` variables (the constant monomial).
    pub fn zero(n: usize) -> Self {
        Expo(vec![0; n])
    }

    /// The `i`-th unit multi-index in `n` variables (the monomial `x_i`).
    pub fn unit(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {} out of range for {} variables", i, n);
        let mut v = vec![0; n];
        v[i] = 1;
        Expo(v)
    }

    pub fn from_slice(v: &[u32]) -> Self {
        Expo(v.to_vec())
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True for the zero multi-index.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum `α + β`.
    pub fn add(&self, other: &Expo) -> Expo {
        assert_eq!(self.len(), other.len(), "exponent length mismatch");
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference `α − β`, or `None` if any entry would go
    /// negative.
    pub fn checked_sub(&self, other: &Expo) -> Option<Expo> {
        assert_eq!(self.len(), other.len(), "exponent length mismatch");
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Expo(out))
    }

    /// Bump the `i`-th entry by one.
    pub fn bumped(&self, i: usize) -> Expo {
        let mut v = self.0.clone();
        v[i] += 1;
        Expo(v)
    }

    /// The same multi-index viewed in a ring with `n ≥ len` variables
    /// (extra entries zero).
    pub fn extended(&self, n: usize) -> Expo {
        assert!(n >= self.len());
        let mut v = self.0.clone();
        v.resize(n, 0);
        Expo(v)
    }
}

impl fmt::Display for Expo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// Graded reverse lexicographic comparison with `x_1 > x_2 > … > x_n`:
/// higher total degree wins; on equal degree the multi-index whose last
/// differing entry is smaller wins. `Greater` means `a ≻ b`.
pub fn grevlex_cmp(a: &Expo, b: &Expo) -> Ordering {
    assert_eq!(a.len(), b.len(), "exponent length mismatch");
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for k in (0..a.len()).rev() {
        if a.0[k] != b.0[k] {
            // Smaller trailing exponent means larger in grevlex.
            return if a.0[k] < b.0[k] { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

/// All multi-indices in `n` variables of total degree at most `d`, in
/// ascending grevlex order.
pub fn monomials_upto(n: usize, d: u32) -> Vec<Expo> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    collect_of_degree(&mut out, &mut cur, n, 0, 0, d);
    out.sort_by(grevlex_cmp);
    out
}

fn collect_of_degree(out: &mut Vec<Expo>, cur: &mut Vec<u32>, n: usize, pos: usize, used: u32, d: u32) {
    if pos == n {
        out.push(Expo(cur.clone()));
        return;
    }
    for e in 0..=(d - used) {
        cur[pos] = e;
        collect_of_degree(out, cur, n, pos + 1, used + e, d);
    }
    cur[pos] = 0;
}

/// `∏_i (e_i)!` as an `f64` (exact for the degrees this crate works at).
pub fn multi_factorial_f64(e: &Expo) -> f64 {
    e.0.iter()
        .map(|&k| (1..=k as u64).map(|v| v as f64).product::<f64>())
        .product()
}

/// `∏_i (e_i)!` as an `i64`. Panics past 20! (never reached: truncation
/// orders in this crate stay far below that).
pub fn multi_factorial_i64(e: &Expo) -> i64 {
    let mut acc: i64 = 1;
    for &k in &e.0 {
        for v in 1..=k as i64 {
            acc = acc.checked_mul(v).expect("factorial overflow: exponent too large");
        }
    }
    acc
}

/// Coefficient domain: exact rationals or complex doubles.
///
/// `EXACT` drives the few places where the two domains genuinely differ:
/// zero tests and duplicate detection are exact for rationals and
/// tolerance-based for floating coefficients.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Exact division; `other` must be nonzero.
    fn div(&self, other: &Self) -> Self;

    /// Numeric view, promoting rationals to doubles.
    fn to_c64(&self) -> Complex64;

    /// Magnitude as `f64`, for pivoting and thresholds.
    fn abs_f64(&self) -> f64;
}

impl Coeff for Rat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational");
        self / other
    }

    fn to_c64(&self) -> Complex64 {
        let num = self.numer().to_f64().unwrap_or(f64::INFINITY * sign_f64(self));
        let den = self.denom().to_f64().unwrap_or(f64::INFINITY);
        Complex64::new(num / den, 0.0)
    }

    fn abs_f64(&self) -> f64 {
        self.to_c64().re.abs()
    }
}

fn sign_f64(r: &Rat) -> f64 {
    if r.is_negative() {
        -1.0
    } else {
        1.0
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

/// Sparse multivariate polynomial with coefficients in `C`.
///
/// Zero coefficients are never stored; the zero polynomial has an empty
/// term map. Operations mixing different variable counts panic — rings are
/// fixed per system.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<C: Coeff> {
    n: usize,
    terms: BTreeMap<Expo, C>,
}

impl<C: Coeff> MPoly<C> {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        MPoly { n, terms: BTreeMap::new() }
    }

    /// A constant polynomial.
    pub fn constant(n: usize, c: C) -> Self {
        let mut p = MPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(Expo::zero(n), c);
        }
        p
    }

    /// The variable `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut p = MPoly::zero(n);
        p.terms.insert(Expo::unit(n, i), C::one());
        p
    }

    /// A single term `c · x^e`.
    pub fn monomial(e: Expo, c: C) -> Self {
        let mut p = MPoly::zero(e.len());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Build from a list of `(exponents, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Expo, C)>) -> Self {
        let mut p = MPoly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent length mismatch");
            p.insert_add(e, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Expo::degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, e: &Expo) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    /// Largest coefficient magnitude; 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(Coeff::abs_f64).fold(0.0, f64::max)
    }

    fn insert_add(&mut self, e: Expo, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = MPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = MPoly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            let v = a.clone() * c.clone();
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "variable count mismatch");
        let mut out = MPoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.insert_add(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiply by the variable `x_i`.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = MPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.terms.insert(e.bumped(i), c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MPoly::constant(self.n, C::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn differentiate(&self, i: usize) -> Self {
        assert!(i < self.n, "variable index out of range");
        let mut out = MPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e.0[i] == 0 {
                continue;
            }
            let mut v = e.0.clone();
            v[i] -= 1;
            out.insert_add(Expo(v), c.clone() * C::from_i64(e.0[i] as i64));
        }
        out
    }

    /// Iterated partial derivative `∂^γ`.
    pub fn diff_multi(&self, gamma: &Expo) -> Self {
        assert_eq!(gamma.len(), self.n, "exponent length mismatch");
        let mut out = self.clone();
        for (i, &k) in gamma.0.iter().enumerate() {
            for _ in 0..k {
                out = out.differentiate(i);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    /// Evaluate at a point of the same domain.
    pub fn evaluate(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.n, "point dimension mismatch");
        let pows = power_table(point, &self.terms);
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t * pows[i][k as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluate numerically at a complex point, promoting rational
    /// coefficients to doubles.
    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.n, "point dimension mismatch");
        let max_e: Vec<u32> = max_exponents(self.n, &self.terms);
        let pows: Vec<Vec<Complex64>> = point
            .iter()
            .zip(&max_e)
            .map(|(&p, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(Complex64::new(1.0, 0.0));
                for k in 1..=m as usize {
                    let prev = v[k - 1];
                    v.push(prev * p);
                }
                v
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_c64();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= pows[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// The shifted polynomial `p(x + s)` (exact in the coefficient domain).
    pub fn translate(&self, shift: &[C]) -> Self {
        assert_eq!(shift.len(), self.n, "shift dimension mismatch");
        let mut out = MPoly::zero(self.n);
        for (e, c) in &self.terms {
            let mut acc = MPoly::constant(self.n, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                acc = acc.mul(&binomial_power(self.n, i, &shift[i], k));
            }
            out = out.add(&acc);
        }
        out
    }

    /// The same polynomial with coefficients converted to complex doubles.
    pub fn to_c64(&self) -> MPoly<Complex64> {
        MPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_c64()))
                .collect(),
        }
    }

    /// The same polynomial viewed in a ring with `n_new ≥ n` variables.
    pub fn embedded(&self, n_new: usize) -> Self {
        assert!(n_new >= self.n);
        let mut out = MPoly::zero(n_new);
        for (e, c) in &self.terms {
            out.terms.insert(e.extended(n_new), c.clone());
        }
        out
    }

    /// Render with the given variable names (e.g. `["x1", "x2"]`).
    pub fn format_with_vars(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.n, "variable name count mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Expo> = self.terms.keys().collect();
        keys.sort_by(|a, b| grevlex_cmp(b, a));
        let mut out = String::new();
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            if idx > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 1 {
                    factors.push(names[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", names[i], k));
                }
            }
            let c_str = format!("{}", c);
            if factors.is_empty() {
                out.push_str(&c_str);
            } else if c.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("({})*{}", c_str, factors.join("*")));
            }
        }
        out
    }
}

fn max_exponents<C>(n: usize, terms: &BTreeMap<Expo, C>) -> Vec<u32> {
    let mut m = vec![0u32; n];
    for e in terms.keys() {
        for (i, &k) in e.0.iter().enumerate() {
            m[i] = m[i].max(k);
        }
    }
    m
}

fn power_table<C: Coeff>(point: &[C], terms: &BTreeMap<Expo, C>) -> Vec<Vec<C>> {
    let max_e = max_exponents(point.len(), terms);
    point
        .iter()
        .zip(&max_e)
        .map(|(p, &m)| {
            let mut v = Vec::with_capacity(m as usize + 1);
            v.push(C::one());
            for k in 1..=m as usize {
                let prev = v[k - 1].clone();
                v.push(prev * p.clone());
            }
            v
        })
        .collect()
}

/// `(x_i + s)^k` expanded by the binomial theorem.
fn binomial_power<C: Coeff>(n: usize, i: usize, s: &C, k: u32) -> MPoly<C> {
    let mut out = MPoly::zero(n);
    // Running binomial coefficient C(k, j) and power s^j.
    let mut coeff = C::one();
    let mut s_pow = C::one();
    for j in 0..=k {
        if j > 0 {
            // C(k, j) = C(k, j-1) * (k - j + 1) / j
            coeff = coeff.clone() * C::from_i64((k - j + 1) as i64);
            coeff = coeff.div(&C::from_i64(j as i64));
            s_pow = s_pow * s.clone();
        }
        let mut e = vec![0u32; n];
        e[i] = k - j;
        out.insert_add(Expo(e), coeff.clone() * s_pow.clone());
    }
    out
}

/// Jacobian matrix of a system: row `k` holds the partials of `sys[k]`.
/// Convert a whole system to complex-double coefficients.
pub fn sys_to_c64<C: Coeff>(sys: &[MPoly<C>]) -> Vec<MPoly<Complex64>> {
    sys.iter().map(|p| p.to_c64()).collect()
}

/// Convert an exact point to complex doubles.
pub fn point_to_c64<C: Coeff>(point: &[C]) -> Vec<Complex64> {
    point.iter().map(|c| c.to_c64()).collect()
}

pub fn jacobian<C: Coeff>(sys: &[MPoly<C>]) -> Vec<Vec<MPoly<C>>> {
    assert!(!sys.is_empty(), "empty system");
    let n = sys[0].n_vars();
    sys.iter()
        .map(|f| {
            assert_eq!(f.n_vars(), n, "variable count mismatch");
            (0..n).map(|i| f.differentiate(i)).collect()
        })
        .collect()
}

/// Whether `p` is the zero polynomial: exactly for rationals, up to
/// `tol` in largest coefficient magnitude for floating coefficients.
pub fn effectively_zero<C: Coeff>(p: &MPoly<C>, tol: f64) -> bool {
    if C::EXACT {
        p.is_zero()
    } else {
        p.max_abs_coeff() <= tol
    }
}

/// Whether `a = c·b` for some nonzero scalar `c`: exactly for rationals,
/// within relative tolerance `tol` for floating coefficients.
pub fn proportional<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, tol: f64) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    if C::EXACT {
        if a.terms.len() != b.terms.len() {
            return false;
        }
        let mut ratio: Option<C> = None;
        for ((ea, ca), (eb, cb)) in a.terms.iter().zip(b.terms.iter()) {
            if ea != eb {
                return false;
            }
            let r = ca.div(cb);
            match &ratio {
                None => ratio = Some(r),
                Some(r0) => {
                    if *r0 != r {
                        return false;
                    }
                }
            }
        }
        true
    } else {
        // Scale b so that its coefficient at a's largest term matches a's.
        let (e_max, c_max) = a
            .terms
            .iter()
            .max_by(|x, y| x.1.abs_f64().total_cmp(&y.1.abs_f64()))
            .expect("nonzero polynomial");
        let cb = match b.terms.get(e_max) {
            Some(c) if c.abs_f64() > 0.0 => c,
            _ => return false,
        };
        let ratio = c_max.div(cb);
        let scale = a.max_abs_coeff().max(ratio.abs_f64() * b.max_abs_coeff());
        let keys: std::collections::BTreeSet<&Expo> = a.terms.keys().chain(b.terms.keys()).collect();
        for e in keys {
            let va = a.terms.get(e).cloned().unwrap_or_else(C::zero);
            let vb = b.terms.get(e).cloned().unwrap_or_else(C::zero);
            if (va - ratio.clone() * vb).abs_f64() > tol * scale {
                return false;
            }
        }
        true
    }
}

/// A functional `Σ_γ c_γ ∂^γ` evaluated at an anchor point ξ.
///
/// Coefficients are stored against raw `∂^γ` monomials with no factorial
/// scaling; factorials enter only through [`DualElement::pairing`].
#[derive(Clone, Debug)]
pub struct DualElement {
    anchor: Vec<Complex64>,
    terms: BTreeMap<Expo, Complex64>,
}

impl DualElement {
    pub fn new(anchor: Vec<Complex64>, terms: impl IntoIterator<Item = (Expo, Complex64)>) -> Self {
        let n = anchor.len();
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent length mismatch");
            if c.norm() != 0.0 {
                map.insert(e, c);
            }
        }
        DualElement { anchor, terms: map }
    }

    /// The evaluation functional `1_ξ` (order zero).
    pub fn evaluation(anchor: Vec<Complex64>) -> Self {
        let n = anchor.len();
        DualElement::new(anchor, [(Expo::zero(n), Complex64::new(1.0, 0.0))])
    }

    pub fn anchor(&self) -> &[Complex64] {
        &self.anchor
    }

    pub fn n_vars(&self) -> usize {
        self.anchor.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, gamma: &Expo) -> Complex64 {
        self.terms.get(gamma).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Order of the functional: the largest `|γ|` carrying a nonzero
    /// coefficient (0 for the zero functional).
    pub fn order(&self) -> u32 {
        self.terms.keys().map(Expo::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply to a polynomial: `Σ_γ c_γ (∂^γ p)(ξ)`.
    pub fn apply<C: Coeff>(&self, p: &MPoly<C>) -> Complex64 {
        assert_eq!(p.n_vars(), self.n_vars(), "variable count mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (gamma, c) in &self.terms {
            let d = p.diff_multi(gamma);
            if !d.is_zero() {
                acc += c * d.eval_c64(&self.anchor);
            }
        }
        acc
    }

    /// Pairing value `Λ((x − ξ)^β) = c_β · β!`.
    ///
    /// This is the convention used for all ν/μ coefficients in this crate.
    pub fn pairing(&self, beta: &Expo) -> Complex64 {
        self.coeff(beta) * multi_factorial_f64(beta)
    }

    /// The derivation `d/d∂_i` applied to the functional:
    /// `∂^γ ↦ γ_i ∂^{γ − e_i}`.
    pub fn derivation(&self, i: usize) -> DualElement {
        assert!(i < self.n_vars(), "variable index out of range");
        let mut terms = BTreeMap::new();
        for (gamma, c) in &self.terms {
            if gamma.0[i] == 0 {
                continue;
            }
            let mut v = gamma.0.clone();
            v[i] -= 1;
            let coeff = c * gamma.0[i] as f64;
            let e = Expo(v);
            let entry = terms.entry(e).or_insert_with(|| Complex64::new(0.0, 0.0));
            *entry += coeff;
        }
        DualElement { anchor: self.anchor.clone(), terms }
    }

    pub fn scaled(&self, c: Complex64) -> DualElement {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        DualElement { anchor: self.anchor.clone(), terms }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

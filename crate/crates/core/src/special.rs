//! Jacobi polynomials with complex parameters, generalized Laguerre
//! polynomials and the confluent hypergeometric series ₁F₁.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: C,
    pub b: C,
}

impl JacobiParams {
    pub fn new(a: C, b: C) -> Self {
        JacobiParams { a, b }
    }

    fn shifted(&self, da: f64, db: f64) -> Self {
        JacobiParams { a: self.a + da, b: self.b + db }
    }
}

/// Relative size below which a recurrence denominator counts as zero.
const BREAKDOWN_TOL: f64 = 1e-13;

/// Relative error bound above which the explicit sum is tried as well.
const RECURRENCE_RTOL: f64 = 1e-14;

/// Generalized binomial `C(x, j) = ∏_{i<j} (x − i)/(i + 1)`.
pub fn binomial(x: C, j: u32) -> C {
    (0..j).fold(C::new(1.0, 0.0), |acc, i| acc * (x - i as f64) / (i as f64 + 1.0))
}

/// `P_n^{(a,b)}(1) = ∏_{j=1..n} (a + j)/j`.
pub fn jacobi_at_one(n: u32, p: JacobiParams) -> C {
    binomial(p.a + n as f64, n)
}

/// Three-term recurrence; `None` when a denominator vanishes.
pub fn jacobi_p_recurrence(n: u32, p: JacobiParams, z: C) -> Option<C> {
    recurrence_with_bound(n, p, z).map(|(v, _)| v)
}

/// Recurrence value with a first-order running bound on its rounding error.
fn recurrence_with_bound(n: u32, p: JacobiParams, z: C) -> Option<(C, f64)> {
    let (a, b) = (p.a, p.b);
    let one = C::new(1.0, 0.0);
    let u = f64::EPSILON;
    if n == 0 {
        return Some((one, 0.0));
    }
    let mut pm = one;
    let mut em = 0.0;
    let mut pk = (a + 1.0) + (a + b + 2.0) * (z - 1.0) * 0.5;
    let mut ek = 4.0 * u * ((a + 1.0).norm() + ((a + b + 2.0) * (z - 1.0)).norm());
    let ab2 = a * a - b * b;
    for k in 2..=n {
        let kf = k as f64;
        let s = a + b + 2.0 * kf;
        let den = (a + b + kf) * (s - 2.0) * (2.0 * kf);
        let mag = (kf * kf + (a + b).norm_sqr()).max(1.0);
        if den.norm() <= BREAKDOWN_TOL * mag {
            return None;
        }
        let c1 = (s - 1.0) * (s * (s - 2.0) * z + ab2);
        let c2 = (a + kf - 1.0) * (b + kf - 1.0) * s * 2.0;
        let next = (c1 * pk - c2 * pm) / den;
        let e = (c1.norm() * ek + c2.norm() * em + 8.0 * u * ((c1 * pk).norm() + (c2 * pm).norm())) / den.norm();
        pm = pk;
        em = ek;
        pk = next;
        ek = e + 4.0 * u * next.norm();
    }
    Some((pk, ek))
}

/// Pole-free explicit sum
/// `Σ_k C(n+a, n−k) C(n+b, k) ((z−1)/2)^k ((z+1)/2)^{n−k}`.
pub fn jacobi_p_explicit(n: u32, p: JacobiParams, z: C) -> C {
    explicit_terms(n, p, z).sum()
}

fn explicit_terms(n: u32, p: JacobiParams, z: C) -> impl Iterator<Item = C> {
    let zm = (z - 1.0) * 0.5;
    let zp = (z + 1.0) * 0.5;
    let na = p.a + n as f64;
    let nb = p.b + n as f64;
    (0..=n).map(move |k| binomial(na, n - k) * binomial(nb, k) * zm.powi(k as i32) * zp.powi((n - k) as i32))
}

/// `P_n^{(a,b)}(z)`: the recurrence, unless its error bound is worse than the
/// explicit sum's.
pub fn try_jacobi_p(n: u32, p: JacobiParams, z: C) -> Result<C> {
    let rec = recurrence_with_bound(n, p, z).filter(|(v, _)| v.is_finite());
    if let Some((v, e)) = rec {
        if e <= RECURRENCE_RTOL * v.norm() {
            return Ok(v);
        }
    }
    let (sum, abs) = explicit_terms(n, p, z).fold((C::new(0.0, 0.0), 0.0), |(s, a), t| (s + t, a + t.norm()));
    let explicit = Some((sum, 4.0 * (n as f64 + 2.0) * f64::EPSILON * abs)).filter(|(v, _)| v.is_finite());
    match (rec, explicit) {
        (Some((r, er)), Some((x, ex))) => Ok(if ex < er { x } else { r }),
        (Some((r, _)), None) => Ok(r),
        (None, Some((x, _))) => Ok(x),
        (None, None) => Err(Error::RecurrenceBreakdown { n: n as usize }),
    }
}

/// `P_n^{(a,b)}(z)`; non-finite input yields NaN.
pub fn jacobi_p(n: u32, p: JacobiParams, z: C) -> C {
    try_jacobi_p(n, p, z).unwrap_or(C::new(f64::NAN, f64::NAN))
}

/// `d/dz P_n^{(a,b)} = (n+a+b+1)/2 · P_{n−1}^{(a+1,b+1)}`.
pub fn jacobi_p_deriv(n: u32, p: JacobiParams, z: C) -> C {
    if n == 0 {
        return C::new(0.0, 0.0);
    }
    (p.a + p.b + n as f64 + 1.0) * 0.5 * jacobi_p(n - 1, p.shifted(1.0, 1.0), z)
}

/// Second derivative via the same identity applied twice.
pub fn jacobi_p_deriv2(n: u32, p: JacobiParams, z: C) -> C {
    if n < 2 {
        return C::new(0.0, 0.0);
    }
    let s = p.a + p.b + n as f64;
    (s + 1.0) * (s + 2.0) * 0.25 * jacobi_p(n - 2, p.shifted(2.0, 2.0), z)
}

/// Generalized Laguerre `L_n^{(alpha)}(x)` by upward recurrence.
pub fn laguerre_l(n: u32, alpha: C, x: C) -> C {
    let mut lm = C::new(1.0, 0.0);
    if n == 0 {
        return lm;
    }
    let mut lk = alpha + 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((alpha + 2.0 * kf + 1.0 - x) * lk - (alpha + kf) * lm) / (kf + 1.0);
        lm = lk;
        lk = next;
    }
    lk
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp1F1Args {
    pub a: C,
    pub b: C,
    pub z: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp1F1Value {
    pub value: C,
    /// Magnitude of the last term added.
    pub error_estimate: f64,
    pub terms: usize,
}

pub const HYP1F1_MAX_TERMS: usize = 10_000;
const HYP1F1_RTOL: f64 = 1e-16;

fn is_nonpositive_integer(b: C) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

/// Maclaurin series of ₁F₁(a; b; z).
pub fn hyp1f1(args: Hyp1F1Args) -> Result<Hyp1F1Value> {
    let Hyp1F1Args { a, b, z } = args;
    if is_nonpositive_integer(b) {
        return Err(Error::PoleAtB { b });
    }
    let (value, peak) = sum_series::<f64>(a, b, z)?;
    // Terms far above the result mean the f64 sum lost digits; redo it in
    // double-double.
    if peak.0 > CANCELLATION_LIMIT * value.value.norm() {
        return Ok(sum_series::<TwoFloat>(a, b, z)?.0);
    }
    Ok(value)
}

const CANCELLATION_LIMIT: f64 = 64.0;

trait Real: Clone + num_traits::Num + From<f64> {
    fn to_f64(&self) -> f64;
    fn finite(&self) -> bool;
    fn inv(&self) -> Self;
}

impl Real for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn inv(&self) -> Self {
        1.0 / self
    }
}

impl Real for TwoFloat {
    fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }
    fn finite(&self) -> bool {
        self.is_valid()
    }
    // TwoFloat's own division drops the low word; one Newton step on the
    // f64 reciprocal restores full precision.
    fn inv(&self) -> Self {
        let r = TwoFloat::from(1.0 / self.hi());
        r + r * (TwoFloat::from(1.0) - *self * r)
    }
}

fn div<T: Real>(num: Complex<T>, den: Complex<T>) -> Complex<T> {
    let inv = den.norm_sqr().inv();
    let p = num * Complex::new(den.re, T::zero() - den.im);
    Complex::new(p.re * inv.clone(), p.im * inv)
}

struct Peak(f64);

fn lift<T: Real>(c: C) -> Complex<T> {
    Complex::new(T::from(c.re), T::from(c.im))
}

fn lower<T: Real>(c: &Complex<T>) -> C {
    C::new(c.re.to_f64(), c.im.to_f64())
}

/// Power series in the number type `T`; also returns the largest term seen.
fn sum_series<T: Real>(a: C, b: C, z: C) -> Result<(Hyp1F1Value, Peak)> {
    let (a, b, z) = (lift::<T>(a), lift::<T>(b), lift::<T>(z));
    let mut sum = Complex::new(T::one(), T::zero());
    let mut term = sum.clone();
    let mut peak = 1.0f64;
    let mut small = 0;
    for k in 0..HYP1F1_MAX_TERMS {
        let kf = T::from(k as f64);
        let ratio = div((a.clone() + kf.clone()) * z.clone(), (b.clone() + kf.clone()) * (kf + T::one()));
        term = term * ratio;
        sum = sum + term.clone();
        let (t, s) = (lower(&term).norm(), lower(&sum));
        peak = peak.max(t);
        if !(sum.re.finite() && sum.im.finite()) || !s.is_finite() {
            return Err(Error::NonConvergence { terms: k + 2, estimate: t });
        }
        if t == 0.0 {
            return Ok((Hyp1F1Value { value: s, error_estimate: 0.0, terms: k + 2 }, Peak(peak)));
        }
        if t <= HYP1F1_RTOL * s.norm() {
            small += 1;
            if small == 3 {
                return Ok((Hyp1F1Value { value: s, error_estimate: t, terms: k + 2 }, Peak(peak)));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { terms: HYP1F1_MAX_TERMS, estimate: lower(&term).norm() })
}

pub fn hyp1f1_value(a: C, b: C, z: C) -> Result<C> {
    hyp1f1(Hyp1F1Args { a, b, z }).map(|v| v.value)
}

/// `d/dz ₁F₁(a; b; z) = (a/b) ₁F₁(a+1; b+1; z)`.
pub fn hyp1f1_deriv(a: C, b: C, z: C) -> Result<C> {
    Ok(a / b * hyp1f1_value(a + 1.0, b + 1.0, z)?)
}

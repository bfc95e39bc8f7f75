//! Nikiforov–Uvarov reduction of
//! `ψ'' + (τ̃/σ) ψ' + (σ̃/σ²) ψ = 0` with complex polynomial coefficients.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

type C = Complex64;

/// Relative zero tolerance for degree detection.
pub const DEGREE_TOL: f64 = 1e-12;
/// Relative tolerance on the discriminant of the under-root quadratic.
pub const DISC_TOL: f64 = 1e-10;

/// Polynomial `c0 + c1 z + c2 z²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly2 {
    pub c: [C; 3],
}

impl Poly2 {
    pub const ZERO: Poly2 = Poly2 { c: [C::new(0.0, 0.0); 3] };

    pub fn new(c0: C, c1: C, c2: C) -> Self {
        Poly2 { c: [c0, c1, c2] }
    }

    pub fn constant(c0: C) -> Self {
        Self::new(c0, C::new(0.0, 0.0), C::new(0.0, 0.0))
    }

    pub fn linear(c0: C, c1: C) -> Self {
        Self::new(c0, c1, C::new(0.0, 0.0))
    }

    pub fn real(c0: f64, c1: f64, c2: f64) -> Self {
        Self::new(c0.into(), c1.into(), c2.into())
    }

    pub fn eval(&self, z: C) -> C {
        (self.c[2] * z + self.c[1]) * z + self.c[0]
    }

    pub fn deriv(&self) -> Poly2 {
        Poly2::linear(self.c[1], self.c[2] * 2.0)
    }

    pub fn scale(&self) -> f64 {
        self.c.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.scale() == 0.0
    }

    /// Degree with coefficients below `tol * max|c|` treated as zero.
    pub fn degree_with_tol(&self, tol: f64) -> usize {
        let cut = tol * self.scale();
        (0..3).rev().find(|&i| self.c[i].norm() > cut).unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.degree_with_tol(DEGREE_TOL)
    }

    /// Roots of the polynomial at its detected degree.
    pub fn roots(&self) -> Vec<C> {
        match self.degree() {
            0 => vec![],
            1 => vec![-self.c[0] / self.c[1]],
            _ => {
                let (a, b, c) = (self.c[2], self.c[1], self.c[0]);
                let (r1, r2) = quadratic_roots(a, b, c);
                vec![r1, r2]
            }
        }
    }

    /// Coefficient-wise relative distance.
    pub fn rel_diff(&self, other: &Poly2) -> f64 {
        let scale = self.scale().max(other.scale()).max(f64::MIN_POSITIVE);
        (0..3)
            .map(|i| (self.c[i] - other.c[i]).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, o: Poly2) -> Poly2 {
        Poly2::new(self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2])
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, o: Poly2) -> Poly2 {
        Poly2::new(self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2])
    }
}

impl Mul<C> for Poly2 {
    type Output = Poly2;
    fn mul(self, k: C) -> Poly2 {
        Poly2::new(self.c[0] * k, self.c[1] * k, self.c[2] * k)
    }
}

/// Both roots of `a x² + b x + c` (a ≠ 0), cancellation-free.
pub(crate) fn quadratic_roots(a: C, b: C, c: C) -> (C, C) {
    let d = (b * b - a * c * 4.0).sqrt();
    let sgn = if (b.conj() * d).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(b + d * sgn) * 0.5;
    if q.norm() == 0.0 {
        return (C::new(0.0, 0.0), C::new(0.0, 0.0));
    }
    (q / a, c / q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUProblem {
    pub sigma: Poly2,
    pub sigma_tilde: Poly2,
    pub tau_tilde: Poly2,
}

pub fn validate_problem(sigma: Poly2, sigma_tilde: Poly2, tau_tilde: Poly2) -> Result<NUProblem> {
    if sigma.is_zero() {
        return Err(Error::DegreeViolation("sigma is identically zero".into()));
    }
    if tau_tilde.degree() > 1 {
        return Err(Error::DegreeViolation("deg tau_tilde > 1".into()));
    }
    // Poly2 cannot hold degree > 2, so sigma and sigma_tilde are bounded by construction.
    Ok(NUProblem { sigma, sigma_tilde, tau_tilde })
}

impl NUProblem {
    /// `p = (σ' − τ̃)/2`, the k-independent part of π.
    pub fn p(&self) -> Poly2 {
        (self.sigma.deriv() - self.tau_tilde) * C::new(0.5, 0.0)
    }

    /// The quadratic `p² − σ̃ + kσ` under the root in the π formula.
    pub fn under_root(&self, k: C) -> Poly2 {
        let p = self.p();
        let p2 = Poly2::new(p.c[0] * p.c[0], p.c[0] * p.c[1] * 2.0, p.c[1] * p.c[1]);
        p2 - self.sigma_tilde + self.sigma * k
    }
}

fn discriminant(q: &Poly2) -> C {
    q.c[1] * q.c[1] - q.c[0] * q.c[2] * 4.0
}

/// Values of k for which `p² − σ̃ + kσ` is a perfect square.
pub fn k_candidates(problem: &NUProblem) -> Result<Vec<C>> {
    let u = problem.under_root(C::new(0.0, 0.0));
    let s = problem.sigma;
    // disc(u + kσ) = A k² + B k + D
    let a = s.c[1] * s.c[1] - s.c[2] * s.c[0] * 4.0;
    let b = u.c[1] * s.c[1] * 2.0 - (u.c[2] * s.c[0] + s.c[2] * u.c[0]) * 4.0;
    let d = u.c[1] * u.c[1] - u.c[2] * u.c[0] * 4.0;
    let scale = a.norm().max(b.norm()).max(d.norm());
    if scale == 0.0 {
        return Err(Error::NoSolution);
    }
    let tiny = DEGREE_TOL * scale;
    if a.norm() <= tiny {
        if b.norm() <= tiny {
            return Err(Error::NoSolution);
        }
        return Ok(vec![-d / b]);
    }
    let (k1, k2) = quadratic_roots(a, b, d);
    let kscale = k1.norm().max(k2.norm()).max(1.0);
    if (k1 - k2).norm() <= 1e-12 * kscale {
        Ok(vec![(k1 + k2) * 0.5])
    } else {
        Ok(vec![k1, k2])
    }
}

/// Rough absolute rounding error of the k candidates: the discriminant's constant term
/// cancels when the coefficients are large, and the error is amplified by 1/|k1 − k2|.
pub fn k_rounding_noise(problem: &NUProblem) -> f64 {
    let u = problem.under_root(C::new(0.0, 0.0));
    let s = problem.sigma;
    let a = (s.c[1] * s.c[1] - s.c[2] * s.c[0] * 4.0).norm();
    let d_terms = u.c[1].norm_sqr() + 4.0 * (u.c[2] * u.c[0]).norm();
    let b_terms = 2.0 * (u.c[1] * s.c[1]).norm() + 4.0 * ((u.c[2] * s.c[0]).norm() + (s.c[2] * u.c[0]).norm());
    match k_candidates(problem).as_deref() {
        Ok([k1, k2]) => {
            let k = k1.norm().max(k2.norm());
            4.0 * f64::EPSILON * (d_terms + k * b_terms) / (a * (k1 - k2).norm())
        }
        _ => f64::INFINITY,
    }
}

/// Linear square root of a zero-discriminant quadratic, principal branch.
fn linear_root(q: &Poly2) -> Result<Poly2> {
    let scale = q.scale();
    let disc = discriminant(q);
    if disc.norm() > DISC_TOL * scale * scale {
        return Err(Error::NotPerfectSquare { disc: disc.norm() / (scale * scale).max(f64::MIN_POSITIVE) });
    }
    if q.c[2].norm() > DEGREE_TOL * scale {
        let r2 = q.c[2].sqrt();
        Ok(Poly2::linear(q.c[1] / (r2 * 2.0), r2))
    } else {
        Ok(Poly2::constant(q.c[0].sqrt()))
    }
}

/// `π = p + r` and `π = p − r`, in that order.
pub fn pi_candidates(problem: &NUProblem, k: C) -> Result<[Poly2; 2]> {
    let p = problem.p();
    let r = linear_root(&problem.under_root(k))?;
    Ok([p + r, p - r])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqrtSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUBranch {
    pub k: C,
    pub pi: Poly2,
    pub tau: Poly2,
    pub lambda: C,
    pub sqrt_sign: SqrtSign,
    /// `Re τ' < 0`.
    pub admissible: bool,
    /// At each simple root r of σ the local exponent `π(r)/σ'(r)` has positive real part.
    pub regular: bool,
    pub sigma_pp: C,
}

pub fn assemble_branch(problem: &NUProblem, k: C, pi: Poly2) -> NUBranch {
    let tau = problem.tau_tilde + pi * C::new(2.0, 0.0);
    let lambda = k + pi.c[1];
    let p = problem.p();
    let sqrt_sign = match linear_root(&problem.under_root(k)) {
        Ok(r) if (p - r).rel_diff(&pi) < (p + r).rel_diff(&pi) => SqrtSign::Minus,
        _ => SqrtSign::Plus,
    };
    let sd = problem.sigma.deriv();
    let regular = problem.sigma.roots().iter().all(|&r| {
        let d = sd.eval(r);
        d.norm() <= DEGREE_TOL * sd.scale() || (pi.eval(r) / d).re > 0.0
    });
    NUBranch {
        k,
        pi,
        tau,
        lambda,
        sqrt_sign,
        admissible: tau.c[1].re < 0.0,
        regular,
        sigma_pp: problem.sigma.c[2] * 2.0,
    }
}

/// All (≤ 4) branches: every k candidate with both signs of the root.
pub fn enumerate_branches(problem: &NUProblem) -> Result<Vec<NUBranch>> {
    let mut out = Vec::with_capacity(4);
    for k in k_candidates(problem)? {
        for pi in pi_candidates(problem, k)? {
            out.push(assemble_branch(problem, k, pi));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchPolicy {
    /// The unique branch that is admissible and regular.
    PaperDefault,
    ExplicitIndex(usize),
}

pub fn select_branch(branches: &[NUBranch], policy: BranchPolicy) -> Result<NUBranch> {
    match policy {
        BranchPolicy::ExplicitIndex(index) => branches
            .get(index)
            .copied()
            .ok_or(Error::BranchIndex { index, len: branches.len() }),
        BranchPolicy::PaperDefault => {
            let good: Vec<_> = branches.iter().filter(|b| b.admissible && b.regular).collect();
            match good.as_slice() {
                [b] => Ok(**b),
                _ => Err(Error::AmbiguousBranch { candidates: good.len() }),
            }
        }
    }
}

/// `λₙ = −n τ' − n(n−1)/2 σ''`.
pub fn eigen_lambda(branch: &NUBranch, n: u32) -> C {
    let n = n as f64;
    -branch.tau.c[1] * n - branch.sigma_pp * (n * (n - 1.0) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    /// `s^A (1 − q s)^B`
    PowerPower,
    /// `s^A e^{B s}`
    PowerExp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub class: WeightClass,
    pub a: C,
    pub b: C,
    pub q_node: Option<C>,
}

impl WeightSpec {
    pub fn eval(&self, s: C) -> C {
        match self.class {
            WeightClass::PowerPower => {
                let q = self.q_node.unwrap_or_default();
                cpow(s, self.a) * cpow(C::new(1.0, 0.0) - q * s, self.b)
            }
            WeightClass::PowerExp => cpow(s, self.a) * (self.b * s).exp(),
        }
    }

    /// `ρ'/ρ`.
    pub fn log_deriv(&self, s: C) -> C {
        match self.class {
            WeightClass::PowerPower => {
                let q = self.q_node.unwrap_or_default();
                self.a / s - self.b * q / (C::new(1.0, 0.0) - q * s)
            }
            WeightClass::PowerExp => self.a / s + self.b,
        }
    }
}

/// Principal complex power; `0^a` is 0 for `Re a > 0`, 1 for `a = 0`, infinite otherwise.
pub fn cpow(z: C, a: C) -> C {
    if z.norm() == 0.0 {
        return if a.norm() == 0.0 {
            C::new(1.0, 0.0)
        } else if a.re > 0.0 {
            C::new(0.0, 0.0)
        } else {
            C::new(f64::INFINITY, 0.0)
        };
    }
    if a.im == 0.0 && a.re == a.re.round() && a.re.abs() < 64.0 {
        return z.powi(a.re as i32);
    }
    (a * z.ln()).exp()
}

enum SigmaShape {
    /// `c s (1 − q s)`
    PowerPower { c: C, q: C },
    /// `c s`
    PowerExp { c: C },
}

fn sigma_shape(sigma: &Poly2) -> Result<SigmaShape> {
    let tol = DEGREE_TOL * sigma.scale();
    let [c0, c1, c2] = sigma.c;
    if c0.norm() > tol || c1.norm() <= tol {
        return Err(Error::UnsupportedSigmaClass);
    }
    if c2.norm() <= tol {
        Ok(SigmaShape::PowerExp { c: c1 })
    } else {
        Ok(SigmaShape::PowerPower { c: c1, q: -c2 / c1 })
    }
}

/// Exponents `(A, B)` with `f'/f = g/σ` for linear `g`.
fn factor_for(sigma: &Poly2, g: &Poly2) -> Result<WeightSpec> {
    match sigma_shape(sigma)? {
        SigmaShape::PowerPower { c, q } => {
            // g = c [A (1 − q s) − q B s]
            let a = g.c[0] / c;
            let b = -g.c[1] / (c * q) - a;
            Ok(WeightSpec { class: WeightClass::PowerPower, a, b, q_node: Some(q) })
        }
        SigmaShape::PowerExp { c } => Ok(WeightSpec {
            class: WeightClass::PowerExp,
            a: g.c[0] / c,
            b: g.c[1] / c,
            q_node: None,
        }),
    }
}

/// Weight ρ solving `(σρ)' = τρ`, i.e. `ρ'/ρ = (τ − σ')/σ`.
pub fn pearson_weight(branch: &NUBranch, problem: &NUProblem) -> Result<WeightSpec> {
    factor_for(&problem.sigma, &(branch.tau - problem.sigma.deriv()))
}

/// Factor φ with `φ'/φ = π/σ`.
pub fn phi_factor(branch: &NUBranch, problem: &NUProblem) -> Result<WeightSpec> {
    factor_for(&problem.sigma, &branch.pi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    /// `P_n^{(a,b)}(1 − 2 q s)`
    Jacobi { a: C, b: C, q: C },
    /// `L_n^{(alpha)}(scale · s)`
    Laguerre { alpha: C, scale: C },
}

/// Classical polynomial identified by the Rodrigues relation, standard normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPolyRef {
    pub n: u32,
    pub family: PolyFamily,
}

impl ClassicalPolyRef {
    pub fn argument(&self, s: C) -> C {
        match self.family {
            PolyFamily::Jacobi { q, .. } => C::new(1.0, 0.0) - q * s * 2.0,
            PolyFamily::Laguerre { scale, .. } => scale * s,
        }
    }

    pub fn eval(&self, s: C) -> C {
        let z = self.argument(s);
        match self.family {
            PolyFamily::Jacobi { a, b, .. } => crate::special::jacobi_p(self.n, crate::special::JacobiParams { a, b }, z),
            PolyFamily::Laguerre { alpha, .. } => crate::special::laguerre_l(self.n, alpha, z),
        }
    }
}

pub fn rodrigues_polynomial(weight: &WeightSpec, n: u32) -> Result<ClassicalPolyRef> {
    let family = match weight.class {
        WeightClass::PowerPower => PolyFamily::Jacobi {
            a: weight.a,
            b: weight.b,
            q: weight.q_node.ok_or(Error::UnsupportedSigmaClass)?,
        },
        // ρ = s^A e^{B s} = s^A e^{−x} with x = −B s.
        WeightClass::PowerExp => PolyFamily::Laguerre { alpha: weight.a, scale: -weight.b },
    };
    Ok(ClassicalPolyRef { n, family })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    fn oscillator(eps: f64) -> NUProblem {
        validate_problem(Poly2::real(1.0, 0.0, 0.0), Poly2::real(eps, 0.0, -1.0), Poly2::ZERO).unwrap()
    }

    /// q=1, α=1, V0=2.5, m=1, E=0.6.
    fn hulthen() -> NUProblem {
        let (beta, eps2, gamma) = (c(3.0, 2.5), c(0.64, 0.0), c(6.25, 2.5));
        let q = c(1.0, 0.0);
        validate_problem(
            Poly2::real(0.0, 1.0, -1.0),
            Poly2::new(-eps2, beta + q * eps2 * 2.0, gamma - q * beta - q * q * eps2),
            Poly2::real(1.0, -1.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn degree_detection() {
        assert_eq!(Poly2::real(1.0, 0.0, 0.0).degree(), 0);
        assert_eq!(Poly2::real(1.0, 1e-13, 0.0).degree(), 0);
        assert_eq!(Poly2::real(0.0, 1.0, 1e-3).degree(), 2);
    }

    #[test]
    fn degree_violation() {
        let r = validate_problem(Poly2::real(1.0, 0.0, 0.0), Poly2::ZERO, Poly2::real(0.0, 0.0, 1.0));
        assert!(matches!(r, Err(Error::DegreeViolation(_))));
        let r = validate_problem(Poly2::ZERO, Poly2::ZERO, Poly2::ZERO);
        assert!(matches!(r, Err(Error::DegreeViolation(_))));
    }

    #[test]
    fn oscillator_k() {
        let ks = k_candidates(&oscillator(2.5)).unwrap();
        assert_eq!(ks.len(), 1);
        assert!(close(ks[0], c(2.5, 0.0), 1e-14));
        let [p1, p2] = pi_candidates(&oscillator(2.5), ks[0]).unwrap();
        assert!(p1.rel_diff(&Poly2::real(0.0, 1.0, 0.0)) < 1e-14);
        assert!(p2.rel_diff(&Poly2::real(0.0, -1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn hulthen_k() {
        let ks = k_candidates(&hulthen()).unwrap();
        assert_eq!(ks.len(), 2);
        for want in [c(3.8, -1.5), c(2.2, 6.5)] {
            assert!(ks.iter().any(|&k| close(k, want, 1e-13)), "{ks:?}");
        }
    }

    #[test]
    fn hulthen_pi_and_branch() {
        let p = hulthen();
        let k = c(2.2, 6.5);
        let pis = pi_candidates(&p, k).unwrap();
        let want_a = Poly2::linear(c(0.8, 0.0), c(-1.8, 2.5));
        let want_b = Poly2::linear(c(-0.8, 0.0), c(0.8, -2.5));
        assert!(pis.iter().any(|pi| pi.rel_diff(&want_a) < 1e-13));
        assert!(pis.iter().any(|pi| pi.rel_diff(&want_b) < 1e-13));
        let b = assemble_branch(&p, k, want_a);
        assert!(b.tau.rel_diff(&Poly2::linear(c(2.6, 0.0), c(-4.6, 5.0))) < 1e-13);
        assert!(close(b.lambda, c(0.4, 9.0), 1e-13));
        assert!(b.admissible && b.regular);
        assert!(close(eigen_lambda(&b, 1), c(4.6, -5.0), 1e-13));
        assert_eq!(eigen_lambda(&b, 0), c(0.0, 0.0));
    }

    #[test]
    fn hulthen_default_branch() {
        let p = hulthen();
        let b = select_branch(&enumerate_branches(&p).unwrap(), BranchPolicy::PaperDefault).unwrap();
        assert!(close(b.k, c(2.2, 6.5), 1e-13));
        let w = pearson_weight(&b, &p).unwrap();
        assert_eq!(w.class, WeightClass::PowerPower);
        assert!(close(w.a, c(1.6, 0.0), 1e-13));
        assert!(close(w.b, c(1.0, -5.0), 1e-13));
        let f = phi_factor(&b, &p).unwrap();
        assert!(close(f.a, c(0.8, 0.0), 1e-13));
        assert!(close(f.b, c(1.0, -2.5), 1e-13));
    }

    #[test]
    fn q0_candidates() {
        // σ = s, σ̃ = δ² s² + β s − ε², τ̃ = 1
        let (beta, eps, delta) = (c(1.0, 2.5), c(0.7, 0.0), c(2.5, 0.0));
        let p = validate_problem(
            Poly2::real(0.0, 1.0, 0.0),
            Poly2::new(-eps * eps, beta, delta * delta),
            Poly2::real(1.0, 0.0, 0.0),
        )
        .unwrap();
        let i = c(0.0, 1.0);
        let ks = k_candidates(&p).unwrap();
        let kp = beta + i * delta * eps * 2.0;
        let km = beta - i * delta * eps * 2.0;
        assert!(ks.iter().any(|&k| close(k, kp, 1e-13)));
        assert!(ks.iter().any(|&k| close(k, km, 1e-13)));
        let pis = pi_candidates(&p, km).unwrap();
        assert!(pis.iter().any(|pi| pi.rel_diff(&Poly2::linear(-eps, i * delta)) < 1e-13));
        assert!(pis.iter().any(|pi| pi.rel_diff(&Poly2::linear(eps, -i * delta)) < 1e-13));
        let b = assemble_branch(&p, kp, Poly2::linear(eps, -i * delta));
        let w = pearson_weight(&b, &p).unwrap();
        assert_eq!(w.class, WeightClass::PowerExp);
        assert!(close(w.a, eps * 2.0, 1e-13) && close(w.b, -i * delta * 2.0, 1e-13));
        let f = phi_factor(&b, &p).unwrap();
        assert!(close(f.a, eps, 1e-13) && close(f.b, -i * delta, 1e-13));
    }

    #[test]
    fn oscillator_branches() {
        let p = oscillator(3.0);
        let bs = enumerate_branches(&p).unwrap();
        assert_eq!(bs.len(), 2);
        let b = select_branch(&bs, BranchPolicy::PaperDefault).unwrap();
        assert!(b.pi.rel_diff(&Poly2::real(0.0, -1.0, 0.0)) < 1e-14);
        assert!(b.tau.rel_diff(&Poly2::real(0.0, -2.0, 0.0)) < 1e-14);
        assert!(close(b.lambda, c(2.0, 0.0), 1e-14));
        assert!(close(eigen_lambda(&b, 3), c(6.0, 0.0), 1e-14));
        let up = bs.iter().find(|b| b.pi.c[1].re > 0.0).unwrap();
        assert!(!up.admissible);
        assert!(select_branch(&bs, BranchPolicy::ExplicitIndex(0)).is_ok());
        assert!(matches!(select_branch(&bs, BranchPolicy::ExplicitIndex(7)), Err(Error::BranchIndex { .. })));
    }

    #[test]
    fn ambiguous_when_two_admissible() {
        let a = assemble_branch(&oscillator(1.0), c(1.0, 0.0), Poly2::real(0.0, -1.0, 0.0));
        let b = NUBranch { k: c(2.0, 0.0), ..a };
        assert!(matches!(
            select_branch(&[a, b], BranchPolicy::PaperDefault),
            Err(Error::AmbiguousBranch { candidates: 2 })
        ));
    }

    #[test]
    fn constant_weight_when_tau_is_sigma_prime() {
        let p = hulthen();
        let b = NUBranch { tau: p.sigma.deriv(), ..enumerate_branches(&p).unwrap()[0] };
        let w = pearson_weight(&b, &p).unwrap();
        assert!(w.a.norm() < 1e-15 && w.b.norm() < 1e-15);
        let b0 = NUBranch { pi: Poly2::ZERO, ..b };
        let f = phi_factor(&b0, &p).unwrap();
        assert!(f.a.norm() == 0.0 && f.b.norm() == 0.0);
        assert_eq!(f.eval(c(0.3, 0.1)), c(1.0, 0.0));
    }

    #[test]
    fn unsupported_sigma() {
        let p = oscillator(1.0);
        let b = enumerate_branches(&p).unwrap()[0];
        assert!(matches!(pearson_weight(&b, &p), Err(Error::UnsupportedSigmaClass)));
        assert!(matches!(phi_factor(&b, &p), Err(Error::UnsupportedSigmaClass)));
    }

    #[test]
    fn rodrigues_maps() {
        let w = WeightSpec { class: WeightClass::PowerPower, a: c(0.0, 0.0), b: c(0.0, 0.0), q_node: Some(c(1.0, 0.0)) };
        let r = rodrigues_polynomial(&w, 2).unwrap();
        // Legendre P2(1 − 2s) at s = 0.3: z = 0.4
        let z: f64 = 0.4;
        assert!(close(r.eval(c(0.3, 0.0)), c(1.5 * z * z - 0.5, 0.0), 1e-14));
        let r0 = rodrigues_polynomial(&w, 0).unwrap();
        assert_eq!(r0.eval(c(0.7, 0.2)), c(1.0, 0.0));
    }

    #[test]
    fn not_perfect_square() {
        let r = pi_candidates(&oscillator(1.0), c(5.0, 0.0));
        assert!(matches!(r, Err(Error::NotPerfectSquare { .. })));
    }
}

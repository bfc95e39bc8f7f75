//! Generalized Hulthén potential `V(x) = −V0 e^{−αx}/(1 − q e^{−αx})`,
//! its complexified variants, closed-form Dirac spectra and spinor
//! eigenfunctions.
//!
//! All variants run through one code path on effective couplings
//! `(V0e, qe, αe)`: Real `(V0, q, α)`, PT `(V0, q, iα)`, pseudo-Hermitian
//! `(iV0, iq, iα)`, Exponential `(V0, 0, α)`.

use num_complex::Complex64;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::nu::{self, cpow, NUBranch, NUProblem, Poly2};
use crate::special::{self, JacobiParams};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const ONE: C = C::new(1.0, 0.0);

/// Denominator magnitude treated as a pole.
pub const POLE_TOL: f64 = 1e-12;
/// `|Im E| ≤ REALITY_TOL · m` counts as real.
pub const REALITY_TOL: f64 = 1e-10;
/// Quantization residual below which a state is certified.
pub const QUANTIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Real,
    PTSymmetric,
    PseudoHermitian,
    Exponential,
}

impl Variant {
    pub fn is_complexified(self) -> bool {
        matches!(self, Variant::PTSymmetric | Variant::PseudoHermitian)
    }
}

/// Base parameters; complexification is applied by the operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub v0: f64,
    pub q: f64,
    pub alpha: f64,
    pub m: f64,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effective {
    pub v0: C,
    pub q: C,
    pub alpha: C,
}

impl PotentialSpec {
    pub fn new(variant: Variant, v0: f64, q: f64, alpha: f64, m: f64) -> Result<Self> {
        let spec = PotentialSpec { v0, q, alpha, m, variant };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.v0, self.q, self.alpha, self.m].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidSpec("parameters must be finite".into()));
        }
        if self.m <= 0.0 {
            return Err(Error::InvalidSpec("m must be positive".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidSpec("alpha must be positive".into()));
        }
        match (self.variant, self.q == 0.0) {
            (Variant::Exponential, false) => Err(Error::InvalidSpec("Exponential variant requires q = 0".into())),
            (Variant::Exponential, true) => Ok(()),
            (_, true) => Err(Error::InvalidSpec("q = 0 requires the Exponential variant".into())),
            _ => Ok(()),
        }
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        PotentialSpec { variant, ..*self }
    }

    pub fn effective(&self) -> Effective {
        let (v0, q, a) = (C::from(self.v0), C::from(self.q), C::from(self.alpha));
        match self.variant {
            Variant::Real | Variant::Exponential => Effective { v0, q, alpha: a },
            Variant::PTSymmetric => Effective { v0, q, alpha: I * a },
            Variant::PseudoHermitian => Effective { v0: I * v0, q: I * q, alpha: I * a },
        }
    }

    /// `s = e^{−αe x}`.
    pub fn s_of_x(&self, x: C) -> C {
        (-self.effective().alpha * x).exp()
    }
}

/// Potential at real x, evaluated from the variant's own closed expression.
pub fn potential_value(spec: &PotentialSpec, x: f64) -> Result<C> {
    let PotentialSpec { v0, q, alpha, .. } = *spec;
    let ax = alpha * x;
    let pole = || Error::PoleAtX { x: x.into() };
    match spec.variant {
        Variant::Real => {
            let e = (-ax).exp();
            let den = 1.0 - q * e;
            if den.abs() <= POLE_TOL {
                return Err(pole());
            }
            Ok(C::from(-v0 * e / den))
        }
        Variant::PTSymmetric => {
            let (sn, cs) = ax.sin_cos();
            let den = q * q - 2.0 * q * cs + 1.0;
            if den.abs() <= POLE_TOL {
                return Err(pole());
            }
            Ok(C::new(q - cs, sn) * (v0 / den))
        }
        Variant::PseudoHermitian => {
            let (sn, cs) = ax.sin_cos();
            let den = q * q - 2.0 * q * sn + 1.0;
            if den.abs() <= POLE_TOL {
                return Err(pole());
            }
            Ok(C::new(q - sn, -cs) * (v0 / den))
        }
        Variant::Exponential => Ok(C::from(-v0 * (-ax).exp())),
    }
}

/// `V = −V0e s/(1 − qe s)` at complex s.
pub fn potential_at_s(spec: &PotentialSpec, s: C) -> Result<C> {
    let e = spec.effective();
    let den = ONE - e.q * s;
    if den.norm() <= POLE_TOL {
        return Err(Error::PoleAtS { s });
    }
    Ok(-e.v0 * s / den)
}

/// Potential at complex x through the effective form.
pub fn potential_at(spec: &PotentialSpec, x: C) -> Result<C> {
    potential_at_s(spec, spec.s_of_x(x)).map_err(|_| Error::PoleAtX { x })
}

/// Small-x expansion `V ≈ shift + slope·x`.
pub fn potential_linear_approx(spec: &PotentialSpec) -> Result<(C, C)> {
    if spec.variant.is_complexified() {
        return Err(Error::NotApplicable("linear approximation is defined for real potentials".into()));
    }
    if spec.q == 1.0 {
        return Err(Error::DegenerateShape);
    }
    let d = spec.q - 1.0;
    Ok((C::from(spec.v0 / d), C::from(spec.v0 * spec.alpha / (d * d))))
}

/// Which square root of ε² is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsilonSheet {
    Principal,
    Conjugate,
}

impl EpsilonSheet {
    pub fn sign(self) -> f64 {
        match self {
            EpsilonSheet::Principal => 1.0,
            EpsilonSheet::Conjugate => -1.0,
        }
    }
}

/// Symbols of the mapped hypergeometric-type problem, effective couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub gamma_q: C,
    pub beta: C,
    pub eps2: C,
    /// Principal root of `eps2`.
    pub eps: C,
    pub v: C,
    /// `a = q − 2V0/α` from the real base parameters.
    pub a_param: f64,
    pub delta: C,
    pub e_tilde: C,
    pub v1: C,
    pub v2: C,
    pub eff: Effective,
}

impl HypergeometricParams {
    /// `κₙ = qe αe (n+1) − i V0e`.
    pub fn kappa_n(&self, n: u32) -> C {
        self.eff.q * self.eff.alpha * (n as f64 + 1.0) - I * self.eff.v0
    }

    pub fn eps_on(&self, sheet: EpsilonSheet) -> C {
        self.eps * sheet.sign()
    }
}

pub fn hypergeometric_params(spec: &PotentialSpec, energy: C) -> HypergeometricParams {
    let eff = spec.effective();
    let Effective { v0, q, alpha } = eff;
    let m2 = spec.m * spec.m;
    let e_tilde = energy * energy - m2;
    let eps2 = -e_tilde / (alpha * alpha);
    HypergeometricParams {
        gamma_q: I * q * v0 / alpha + v0 * v0 / (alpha * alpha),
        beta: I * v0 / alpha + v0 * energy * 2.0 / (alpha * alpha),
        eps2,
        eps: eps2.sqrt(),
        v: q - I * v0 * 2.0 / alpha,
        a_param: spec.q - 2.0 * spec.v0 / spec.alpha,
        delta: v0 / alpha,
        e_tilde,
        v1: v0 * v0 + I * q * alpha * v0,
        v2: I * alpha * v0 + energy * v0 * 2.0,
        eff,
    }
}

/// Problem in `s = e^{−αe x}`: σ = s − qs², τ̃ = 1 − qs (σ = s, τ̃ = 1 for q = 0).
pub fn map_to_nu(spec: &PotentialSpec, energy: C) -> (NUProblem, HypergeometricParams) {
    let hp = hypergeometric_params(spec, energy);
    let q = hp.eff.q;
    let (g, b, e2) = (hp.gamma_q, hp.beta, hp.eps2);
    let problem = NUProblem {
        sigma: Poly2::new(C::from(0.0), ONE, -q),
        sigma_tilde: Poly2::new(-e2, b + q * e2 * 2.0, g - q * b - q * q * e2),
        tau_tilde: Poly2::linear(ONE, -q),
    };
    (problem, hp)
}

/// The branch `k = β − vε`, `π = ε − ½(q + v + 2qε)s` (q ≠ 0) or
/// `k = β − 2iδε`, `π = ε − iδs` (q = 0), located among the enumerated
/// branches for the given ε sheet.
pub fn paper_branch(spec: &PotentialSpec, energy: C, sheet: EpsilonSheet) -> Result<(NUProblem, HypergeometricParams, NUBranch)> {
    let (problem, hp) = map_to_nu(spec, energy);
    let eps = hp.eps_on(sheet);
    let q = hp.eff.q;
    let (k_t, pi_t) = if spec.variant == Variant::Exponential {
        (hp.beta - I * hp.delta * eps * 2.0, Poly2::linear(eps, -I * hp.delta))
    } else {
        (hp.beta - hp.v * eps, Poly2::linear(eps, -(q + hp.v + q * eps * 2.0) * 0.5))
    };
    let branches = nu::enumerate_branches(&problem)?;
    let scale = k_t.norm().max(pi_t.scale()).max(1.0);
    let best = branches
        .into_iter()
        .map(|b| ((b.k - k_t).norm() / scale + b.pi.rel_diff(&pi_t), b))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::AmbiguousBranch { candidates: 0 })?;
    if best.0 > 1e-6 {
        return Err(Error::AmbiguousBranch { candidates: 0 });
    }
    Ok((problem, hp, best.1))
}

/// `λ(E) − λₙ(E)` on the requested ε sheet.
pub fn quantization_residual_on(spec: &PotentialSpec, energy: C, n: u32, sheet: EpsilonSheet) -> Result<C> {
    if spec.variant == Variant::Exponential {
        return Err(Error::NotApplicable("quantization condition requires q != 0".into()));
    }
    let (_, _, b) = paper_branch(spec, energy, sheet)?;
    Ok(b.lambda - nu::eigen_lambda(&b, n))
}

/// Printed-sign choice: `Plus` is the upper sign of `±` / `∓`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn sign(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BranchSign::Plus => "plus",
            BranchSign::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateStatus {
    /// Satisfies the quantization condition with the principal ε.
    Consistent,
    /// Satisfies it only with ε → −ε (the closed form is the squared condition).
    ConjugateSheet,
    /// Satisfies it on neither sheet.
    Discrepant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: u32,
    pub energy: C,
    pub branch_sign: BranchSign,
    /// `|Im E| ≤ 1e−10 m`.
    pub is_real_spectrum: bool,
    /// Reality condition `4q²m² ≤ V0² − (qα(n+1) − V0)²` (complexified variants only).
    pub in_window: bool,
    pub params_at_e: HypergeometricParams,
    pub sheet: EpsilonSheet,
    pub status: StateStatus,
    /// Principal-sheet residual for discrepant states.
    pub quantization_residual: C,
}

/// `4q²m² ≤ V0² − (qα(n+1) − V0)²`, boundary inclusive.
pub fn reality_condition(spec: &PotentialSpec, n: u32) -> bool {
    let kt = spec.q * spec.alpha * (n as f64 + 1.0) - spec.v0;
    let lhs = 4.0 * spec.q * spec.q * spec.m * spec.m;
    let rhs = spec.v0 * spec.v0 - kt * kt;
    lhs <= rhs + 1e-14 * lhs.max(spec.v0 * spec.v0)
}

/// `E = V0e/(2qe) ± iκₙ √(1/(4qe²) − m²/(V0e² + κₙ²))`.
pub fn energy_closed_form(spec: &PotentialSpec, n: u32, sign: BranchSign) -> Result<BoundState> {
    if spec.variant == Variant::Exponential {
        return Err(Error::NotApplicable("no closed form for q = 0".into()));
    }
    let Effective { v0, q, alpha } = spec.effective();
    let kappa = q * alpha * (n as f64 + 1.0) - I * v0;
    let den = v0 * v0 + kappa * kappa;
    // For the complexified forms this is qα(n+1) = 2V0, where E diverges.
    if den.norm() <= POLE_TOL * (v0.norm_sqr() + kappa.norm_sqr()) {
        return Err(Error::NotApplicable(format!("closed form has a pole: V0^2 + kappa_n^2 = 0 at n = {n}")));
    }
    let mut arg = (den - q * q * (4.0 * spec.m * spec.m)) / (q * q * 4.0 * den);
    if arg.im == 0.0 {
        arg.im = 0.0;
    }
    let energy = v0 / (q * 2.0) + I * kappa * arg.sqrt() * sign.sign();
    let (sheet, status, residual) = classify(spec, energy, n)?;
    Ok(BoundState {
        n,
        energy,
        branch_sign: sign,
        is_real_spectrum: energy.im.abs() <= REALITY_TOL * spec.m,
        in_window: spec.variant.is_complexified() && reality_condition(spec, n),
        params_at_e: hypergeometric_params(spec, energy),
        sheet,
        status,
        quantization_residual: residual,
    })
}

fn classify(spec: &PotentialSpec, energy: C, n: u32) -> Result<(EpsilonSheet, StateStatus, C)> {
    let rp = quantization_residual_on(spec, energy, n, EpsilonSheet::Principal)?;
    if rp.norm() <= QUANTIZATION_TOL {
        return Ok((EpsilonSheet::Principal, StateStatus::Consistent, rp));
    }
    let rc = quantization_residual_on(spec, energy, n, EpsilonSheet::Conjugate)?;
    if rc.norm() <= QUANTIZATION_TOL {
        return Ok((EpsilonSheet::Conjugate, StateStatus::ConjugateSheet, rc));
    }
    Ok((EpsilonSheet::Principal, StateStatus::Discrepant, rp))
}

fn require_window_variant(spec: &PotentialSpec) -> Result<()> {
    if spec.variant.is_complexified() {
        Ok(())
    } else {
        Err(Error::NotApplicable("bound-state windows are defined for the PT and pseudo-Hermitian variants".into()))
    }
}

/// Levels n satisfying the reality condition:
/// `V0 − S ≤ qα(n+1) ≤ V0 + S`, `S = √(V0² − 4q²m²)`.
pub fn bound_window(spec: &PotentialSpec) -> Result<RangeInclusive<u32>> {
    require_window_variant(spec)?;
    let disc = spec.v0 * spec.v0 - 4.0 * spec.q * spec.q * spec.m * spec.m;
    if disc < 0.0 {
        return Err(Error::EmptyWindow);
    }
    let s = disc.sqrt();
    let qa = spec.q * spec.alpha;
    let (a, b) = ((spec.v0 - s) / qa, (spec.v0 + s) / qa);
    let (lo, hi) = (a.min(b) - 1.0, a.max(b) - 1.0);
    let slack = 1e-10 * (1.0 + hi.abs());
    let n_min = (lo - slack).ceil().max(0.0);
    let n_max = (hi + slack).floor();
    if n_max < n_min || n_max > u32::MAX as f64 {
        return Err(Error::EmptyWindow);
    }
    Ok(n_min as u32..=n_max as u32)
}

/// α range on which level n satisfies the reality condition.
pub fn alpha_window(spec: &PotentialSpec, n: u32) -> Result<(f64, f64)> {
    require_window_variant(spec)?;
    let disc = spec.v0 * spec.v0 - 4.0 * spec.q * spec.q * spec.m * spec.m;
    if disc < 0.0 {
        return Err(Error::EmptyWindow);
    }
    let s = disc.sqrt();
    let qn = spec.q * (n as f64 + 1.0);
    let (a, b) = ((spec.v0 - s) / qn, (spec.v0 + s) / qn);
    let (lo, hi) = (a.min(b), a.max(b));
    if hi <= 0.0 {
        return Err(Error::EmptyWindow);
    }
    Ok((lo, hi))
}

/// Smallest V0 giving a real level n: `qα(n+1)/2 + 2qm²/(α(n+1))`.
pub fn critical_coupling(spec: &PotentialSpec, n: u32) -> Result<f64> {
    require_window_variant(spec)?;
    let an = spec.alpha * (n as f64 + 1.0);
    Ok(spec.q * an / 2.0 + 2.0 * spec.q * spec.m * spec.m / an)
}

/// Mapped variable, optional real position, upper component φ and the product m·θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorEval {
    pub s: C,
    pub x: Option<f64>,
    pub upper: C,
    pub lower: C,
}

/// Value and first two s-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: C,
    pub d1: C,
    pub d2: C,
}

/// Closed-form spinor `φ = s^ε (1−Qs)^g P_n^{(2ε, v/Q)}(1 − 2Qs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSpinor {
    pub n: u32,
    pub energy: C,
    pub m: f64,
    pub eff: Effective,
    pub eps: C,
    pub v: C,
}

/// q = 0 spinor `φ = s^ε e^{−iδs} ₁F₁(ε + iE/α; 1 + 2ε; 2iδs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfluentSpinor {
    pub energy: C,
    pub m: f64,
    pub v0: f64,
    pub alpha: f64,
    pub eps: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinorEvaluator {
    Jacobi(JacobiSpinor),
    Confluent(ConfluentSpinor),
}

impl JacobiSpinor {
    fn exponents(&self) -> (C, C, JacobiParams) {
        let q = self.eff.q;
        let g = (self.v + q) / (q * 2.0);
        (self.eps, g, JacobiParams::new(self.eps * 2.0, self.v / q))
    }

    fn check(&self, s: C) -> Result<C> {
        let w = ONE - self.eff.q * s;
        if w.norm() <= POLE_TOL || s.norm() == 0.0 {
            return Err(Error::PoleAtS { s });
        }
        Ok(w)
    }

    fn upper_jet(&self, s: C) -> Result<Jet> {
        let w = self.check(s)?;
        let q = self.eff.q;
        let (e, g, jp) = self.exponents();
        let z = ONE - q * s * 2.0;
        let f = cpow(s, e) * cpow(w, g);
        let l = e / s - q * g / w;
        let l1 = -e / (s * s) - q * q * g / (w * w);
        let p = special::jacobi_p(self.n, jp, z);
        let ps = -q * 2.0 * special::jacobi_p_deriv(self.n, jp, z);
        let pss = q * q * 4.0 * special::jacobi_p_deriv2(self.n, jp, z);
        let fp = f * l;
        let fpp = f * (l * l + l1);
        Ok(Jet { f: f * p, d1: fp * p + f * ps, d2: fpp * p + fp * ps * 2.0 + f * pss })
    }

    /// m·θ and its s-derivative.
    fn lower_jet(&self, s: C) -> Result<Jet> {
        let w = self.check(s)?;
        let Effective { v0, q, alpha } = self.eff;
        let n = self.n as f64;
        let (e, g, jp) = self.exponents();
        let jp1 = JacobiParams::new(jp.a, jp.b + 1.0);
        let z = ONE - q * s * 2.0;
        let f = cpow(s, e) * cpow(w, g);
        let l = e / s - q * g / w;
        let vq = self.v / q;
        let c0 = self.energy + I * alpha * (e + vq + n + 1.0);
        let c1 = v0 + I * alpha * (self.v + q) * 0.5;
        let d = I * alpha * (e * 2.0 + vq + n + 1.0);
        let fs = s / w;
        let cs = c0 + c1 * fs;
        let p1 = special::jacobi_p(self.n, jp, z);
        let p2 = special::jacobi_p(self.n, jp1, z);
        let p1s = -q * 2.0 * special::jacobi_p_deriv(self.n, jp, z);
        let p2s = -q * 2.0 * special::jacobi_p_deriv(self.n, jp1, z);
        let inner = cs * p1 - d * p2;
        let inner_s = c1 / (w * w) * p1 + cs * p1s - d * p2s;
        Ok(Jet { f: f * inner, d1: f * (l * inner + inner_s), d2: C::new(f64::NAN, f64::NAN) })
    }
}

impl ConfluentSpinor {
    fn series(&self, s: C) -> Result<(C, C, C, C, C)> {
        let delta = self.v0 / self.alpha;
        let a = self.eps + I * self.energy / self.alpha;
        let b = self.eps * 2.0 + 1.0;
        let z = I * delta * s * 2.0;
        let m0 = special::hyp1f1_value(a, b, z)?;
        let m1 = special::hyp1f1_value(a + 1.0, b + 1.0, z)?;
        let m2 = special::hyp1f1_value(a + 2.0, b + 2.0, z)?;
        Ok((a, b, m0, m1, m2))
    }

    fn check(&self, s: C) -> Result<()> {
        if s.norm() == 0.0 {
            return Err(Error::PoleAtS { s });
        }
        Ok(())
    }

    fn upper_jet(&self, s: C) -> Result<Jet> {
        self.check(s)?;
        let delta = self.v0 / self.alpha;
        let (a, b, m0, m1, m2) = self.series(s)?;
        let k = I * delta * 2.0;
        let g = cpow(s, self.eps) * (-I * delta * s).exp();
        let l = self.eps / s - I * delta;
        let g1 = g * l;
        let g2 = g * (l * l - self.eps / (s * s));
        let d1 = a / b * m1;
        let d2 = a * (a + 1.0) / (b * (b + 1.0)) * m2;
        Ok(Jet { f: g * m0, d1: g1 * m0 + g * k * d1, d2: g2 * m0 + g1 * k * d1 * 2.0 + g * k * k * d2 })
    }

    fn lower_jet(&self, s: C) -> Result<Jet> {
        self.check(s)?;
        let delta = self.v0 / self.alpha;
        let (a, b, m0, m1, m2) = self.series(s)?;
        let k = I * delta * 2.0;
        let g = cpow(s, self.eps) * (-I * delta * s).exp();
        let g1 = g * (self.eps / s - I * delta);
        let ca = self.energy - I * self.eps * self.alpha;
        let cb = a * (2.0 * self.v0) / b;
        let m0s = a / b * m1;
        let m1s = (a + 1.0) / (b + 1.0) * m2;
        let f = ca * g * m0 + cb * s * g * m1;
        let d1 = ca * (g1 * m0 + g * k * m0s) + cb * (g * m1 + s * g1 * m1 + s * g * k * m1s);
        Ok(Jet { f, d1, d2: C::new(f64::NAN, f64::NAN) })
    }
}

impl SpinorEvaluator {
    pub fn energy(&self) -> C {
        match self {
            SpinorEvaluator::Jacobi(j) => j.energy,
            SpinorEvaluator::Confluent(c) => c.energy,
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            SpinorEvaluator::Jacobi(j) => j.m,
            SpinorEvaluator::Confluent(c) => c.m,
        }
    }

    /// φ with first and second s-derivatives.
    pub fn upper_jet(&self, s: C) -> Result<Jet> {
        match self {
            SpinorEvaluator::Jacobi(j) => j.upper_jet(s),
            SpinorEvaluator::Confluent(c) => c.upper_jet(s),
        }
    }

    /// m·θ with its first s-derivative (`d2` unset).
    pub fn lower_jet(&self, s: C) -> Result<Jet> {
        match self {
            SpinorEvaluator::Jacobi(j) => j.lower_jet(s),
            SpinorEvaluator::Confluent(c) => c.lower_jet(s),
        }
    }

    pub fn eval_s(&self, s: C) -> Result<SpinorEval> {
        Ok(SpinorEval { s, x: None, upper: self.upper_jet(s)?.f, lower: self.lower_jet(s)?.f })
    }

    pub fn eval_x(&self, spec: &PotentialSpec, x: f64) -> Result<SpinorEval> {
        let s = spec.s_of_x(C::from(x));
        let mut e = self.eval_s(s)?;
        e.x = Some(x);
        Ok(e)
    }
}

/// Evaluator for a closed-form state.
pub fn spinor_state(spec: &PotentialSpec, state: &BoundState) -> Result<SpinorEvaluator> {
    spinor_state_at(spec, state.n, state.energy, state.sheet)
}

/// Evaluator built from the closed-form shape at an arbitrary energy.
pub fn spinor_state_at(spec: &PotentialSpec, n: u32, energy: C, sheet: EpsilonSheet) -> Result<SpinorEvaluator> {
    if spec.variant == Variant::Exponential {
        return Err(Error::NotApplicable("use q0_state for q = 0".into()));
    }
    let hp = hypergeometric_params(spec, energy);
    Ok(SpinorEvaluator::Jacobi(JacobiSpinor {
        n,
        energy,
        m: spec.m,
        eff: hp.eff,
        eps: hp.eps_on(sheet),
        v: hp.v,
    }))
}

/// q = 0 evaluator at energy E with `ε = √(m² − E²)/α`, `Re ε > 0`.
pub fn q0_state(spec: &PotentialSpec, energy: C) -> Result<SpinorEvaluator> {
    if spec.variant != Variant::Exponential {
        return Err(Error::NotApplicable("q0_state requires the Exponential variant".into()));
    }
    let eps = (C::from(spec.m * spec.m) - energy * energy).sqrt() / spec.alpha;
    if eps.re <= 0.0 {
        return Err(Error::NotApplicable("q0_state requires Re eps > 0".into()));
    }
    let b = eps * 2.0 + 1.0;
    if b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round() {
        return Err(Error::PoleAtB { b });
    }
    Ok(SpinorEvaluator::Confluent(ConfluentSpinor { energy, m: spec.m, v0: spec.v0, alpha: spec.alpha, eps }))
}

/// Trapezoidal `∫ (|φ|² + |θ|²) dx` over `[x_min, x_max]`, for plot scaling.
pub fn l2_norm(spec: &PotentialSpec, ev: &SpinorEvaluator, x_min: f64, x_max: f64, n_points: usize) -> Result<f64> {
    if !(x_min < x_max) || n_points < 2 {
        return Err(Error::InvalidGrid("need x_min < x_max and at least 2 points".into()));
    }
    let h = (x_max - x_min) / (n_points - 1) as f64;
    let mut acc = 0.0;
    for i in 0..n_points {
        let e = ev.eval_x(spec, x_min + h * i as f64)?;
        let w = if i == 0 || i + 1 == n_points { 0.5 } else { 1.0 };
        acc += w * (e.upper.norm_sqr() + (e.lower / spec.m).norm_sqr());
    }
    Ok((acc * h).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn pt(v0: f64, q: f64, alpha: f64) -> PotentialSpec {
        PotentialSpec::new(Variant::PTSymmetric, v0, q, alpha, 1.0).unwrap()
    }

    #[test]
    fn closed_form_pole_at_twice_the_depth() {
        for alpha in [8.0, 8.000000000000002, 7.999999999999999] {
            let spec = PotentialSpec::new(Variant::PTSymmetric, 4.0, 1.0, alpha, 1.0).unwrap();
            assert!(matches!(energy_closed_form(&spec, 0, BranchSign::Plus), Err(Error::NotApplicable(_))), "{alpha}");
        }
        let near = PotentialSpec::new(Variant::PTSymmetric, 4.0, 1.0, 7.99, 1.0).unwrap();
        let st = energy_closed_form(&near, 0, BranchSign::Plus).unwrap();
        assert!(st.energy.norm() > 10.0 && st.status != StateStatus::Discrepant);
    }

    #[test]
    fn spec_validation() {
        assert!(PotentialSpec::new(Variant::Real, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(PotentialSpec::new(Variant::Exponential, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PotentialSpec::new(Variant::Real, 1.0, 1.0, -1.0, 1.0).is_err());
        assert!(PotentialSpec::new(Variant::Real, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(PotentialSpec::new(Variant::Exponential, 1.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn potential_examples() {
        let r = PotentialSpec::new(Variant::Real, 2.0, -1.0, 0.7, 1.0).unwrap();
        assert!((potential_value(&r, 0.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((potential_value(&pt(1.0, 2.0, 1.0), 0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = potential_value(&pt(1.0, 1.0, 1.0), std::f64::consts::FRAC_PI_2).unwrap();
        assert!((v - c(0.5, 0.5)).norm() < 1e-15);
        assert!(matches!(potential_value(&pt(1.0, 1.0, 1.0), 0.0), Err(Error::PoleAtX { .. })));
        let hul = PotentialSpec::new(Variant::Real, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(potential_value(&hul, 0.0), Err(Error::PoleAtX { .. })));
    }

    #[test]
    fn effective_form_matches_closed_expressions() {
        for variant in [Variant::Real, Variant::PTSymmetric, Variant::PseudoHermitian] {
            let spec = PotentialSpec::new(variant, 2.3, 1.7, 0.9, 1.0).unwrap();
            for x in [-1.3, 0.2, 0.77, 2.5] {
                let a = potential_value(&spec, x).unwrap();
                let b = potential_at(&spec, C::from(x)).unwrap();
                assert!((a - b).norm() < 1e-13 * a.norm().max(1.0), "{variant:?} {x}");
            }
        }
    }

    #[test]
    fn linear_approx() {
        let s = PotentialSpec::new(Variant::Real, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(potential_linear_approx(&s).unwrap(), (c(1.0, 0.0), c(1.0, 0.0)));
        let s = PotentialSpec::new(Variant::Real, 2.0, -1.0, 0.5, 1.0).unwrap();
        assert_eq!(potential_linear_approx(&s).unwrap(), (c(-1.0, 0.0), c(0.25, 0.0)));
        let s = PotentialSpec::new(Variant::Real, 2.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(potential_linear_approx(&s), Err(Error::DegenerateShape));
    }

    #[test]
    fn map_to_nu_example() {
        let s = PotentialSpec::new(Variant::Real, 2.5, 1.0, 1.0, 1.0).unwrap();
        let (_, hp) = map_to_nu(&s, c(0.6, 0.0));
        assert!((hp.gamma_q - c(6.25, 2.5)).norm() < 1e-14);
        assert!((hp.beta - c(3.0, 2.5)).norm() < 1e-14);
        assert!((hp.eps2 - c(0.64, 0.0)).norm() < 1e-14);
        assert!((hp.v - c(1.0, -5.0)).norm() < 1e-14);
        assert!((hp.kappa_n(0) - c(1.0, -2.5)).norm() < 1e-15);
        let (_, hp) = map_to_nu(&s, c(1.0, 0.0));
        assert_eq!(hp.eps2.norm(), 0.0);
        let e = PotentialSpec::new(Variant::Exponential, 2.5, 0.0, 1.0, 1.0).unwrap();
        let (p, hp) = map_to_nu(&e, c(0.5, 0.0));
        assert!((hp.delta - c(2.5, 0.0)).norm() < 1e-15);
        assert!(p.sigma.rel_diff(&Poly2::real(0.0, 1.0, 0.0)) == 0.0);
        assert!((p.sigma_tilde.c[2] - c(6.25, 0.0)).norm() < 1e-14);
        assert!((p.sigma_tilde.c[1] - hp.beta).norm() < 1e-14);
    }

    #[test]
    fn closed_form_pt_examples() {
        let s = pt(2.5, 1.0, 2.0);
        let a = energy_closed_form(&s, 0, BranchSign::Plus).unwrap();
        let b = energy_closed_form(&s, 0, BranchSign::Minus).unwrap();
        let mut es = [a.energy.re, b.energy.re];
        es.sort_by(f64::total_cmp);
        assert!((es[0] - 1.105_662_432_702_593).abs() < 1e-8);
        assert!((es[1] - 1.394_337_567_297_406_8).abs() < 1e-8);
        assert!(a.is_real_spectrum && a.in_window);
        let s = pt(2.5, 1.0, 1.0);
        for sign in [BranchSign::Plus, BranchSign::Minus] {
            let st = energy_closed_form(&s, 0, sign).unwrap();
            assert!((st.energy - c(1.25, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn windows() {
        let s = pt(2.5, 1.0, 1.0);
        assert_eq!(bound_window(&s).unwrap(), 0..=3);
        assert_eq!(bound_window(&pt(1.5, 1.0, 1.0)), Err(Error::EmptyWindow));
        let (lo, hi) = alpha_window(&s, 0).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
        let (lo, hi) = alpha_window(&pt(2.0, 1.0, 1.0), 1).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        assert_eq!(bound_window(&pt(2.5, -1.0, 1.0)), Err(Error::EmptyWindow));
        assert!(bound_window(&PotentialSpec::new(Variant::Real, 2.5, 1.0, 1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn critical_coupling_values() {
        assert!((critical_coupling(&pt(1.0, 1.0, 1.0), 0).unwrap() - 2.5).abs() < 1e-15);
        assert!((critical_coupling(&pt(1.0, 1.0, 2.0), 0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn upper_factor_example() {
        // e = 0.8, g = (2 − 5i)/2 from v = 1 − 5i, q = 1, n = 0
        let j = JacobiSpinor {
            n: 0,
            energy: c(0.6, 0.0),
            m: 1.0,
            eff: Effective { v0: c(2.5, 0.0), q: c(1.0, 0.0), alpha: c(1.0, 0.0) },
            eps: c(0.8, 0.0),
            v: c(1.0, -5.0),
        };
        let u = j.upper_jet(c(0.5, 0.0)).unwrap().f;
        let want = (c(1.8, -2.5) * 0.5f64.ln()).exp();
        assert!((u - want).norm() < 1e-14);
        assert!((u - c(-0.0463393611, 0.2834111996)).norm() < 1e-9);
        assert!(matches!(j.upper_jet(c(1.0, 0.0)), Err(Error::PoleAtS { .. })));
        let near = j.upper_jet(c(1.0 - 1e-9, 0.0)).unwrap().f;
        assert!(near.norm() < 1e-8);
    }

    #[test]
    fn q0_leading_behaviour() {
        let spec = PotentialSpec::new(Variant::Exponential, 2.5, 0.0, 1.0, 1.0).unwrap();
        let ev = q0_state(&spec, c(0.5, 0.0)).unwrap();
        let eps = 0.75f64.sqrt();
        let s = c(1e-8, 0.0);
        let u = ev.upper_jet(s).unwrap().f;
        assert!((u / s.powf(eps) - c(1.0, 0.0)).norm() < 1e-6);
        assert!(matches!(ev.upper_jet(c(0.0, 0.0)), Err(Error::PoleAtS { .. })));
        assert!(q0_state(&spec, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn l2_norm_positive() {
        let s = pt(2.5, 1.0, 2.0);
        let st = energy_closed_form(&s, 0, BranchSign::Plus).unwrap();
        let ev = spinor_state(&s, &st).unwrap();
        let n = l2_norm(&s, &ev, 0.3, 2.8, 101).unwrap();
        assert!(n.is_finite() && n > 0.0);
        assert!(l2_norm(&s, &ev, 1.0, 1.0, 10).is_err());
    }
}

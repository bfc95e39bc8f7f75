//! ODE and first-order-system residuals of spinor evaluators.
//!
//! Relative residuals are taken pointwise: at each grid point the residual
//! is divided by the largest individual term at that point, and `max_rel`
//! is the maximum of these ratios. `global_rel` divides the largest residual
//! by the largest term anywhere on the grid.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Result;
use crate::model::{map_to_nu, PotentialSpec, SpinorEvaluator, Variant};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub max_rel: f64,
    pub global_rel: f64,
    pub worst_point: C,
    pub n_points: usize,
}

#[derive(Default)]
struct Acc {
    max_abs: f64,
    max_rel: f64,
    scale: f64,
    worst: C,
    n: usize,
}

impl Acc {
    fn push(&mut self, point: C, residual: C, terms: &[C]) {
        let r = residual.norm();
        let sc = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let rel = if sc > 0.0 { r / sc } else if r > 0.0 { f64::INFINITY } else { 0.0 };
        if rel > self.max_rel || self.n == 0 {
            self.worst = point;
        }
        self.max_rel = self.max_rel.max(rel);
        self.max_abs = self.max_abs.max(r);
        self.scale = self.scale.max(sc);
        self.n += 1;
    }

    fn report(self) -> ResidualReport {
        let global_rel = if self.scale > 0.0 { self.max_abs / self.scale } else { 0.0 };
        ResidualReport {
            max_abs: self.max_abs,
            max_rel: self.max_rel,
            global_rel,
            worst_point: self.worst,
            n_points: self.n,
        }
    }
}

/// `σ²φ'' + στ̃φ' + σ̃φ` of the s-form equation at the evaluator's energy.
pub fn ode_residual(spec: &PotentialSpec, ev: &SpinorEvaluator, grid: &[C]) -> Result<ResidualReport> {
    ode_residual_with_energy(spec, ev, ev.energy(), grid)
}

/// As [`ode_residual`] with the operator built at `energy`.
pub fn ode_residual_with_energy(spec: &PotentialSpec, ev: &SpinorEvaluator, energy: C, grid: &[C]) -> Result<ResidualReport> {
    let (problem, _) = map_to_nu(spec, energy);
    let mut acc = Acc::default();
    for &s in grid {
        let j = ev.upper_jet(s)?;
        let sig = problem.sigma.eval(s);
        let t = [sig * sig * j.d2, sig * problem.tau_tilde.eval(s) * j.d1, problem.sigma_tilde.eval(s) * j.f];
        acc.push(s, t[0] + t[1] + t[2], &t);
    }
    Ok(acc.report())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledReport {
    /// `iφ' + (E − V)φ − mθ`
    pub r1: ResidualReport,
    /// `−iθ' + (E − V)θ − mφ`, scaled by m
    pub r2: ResidualReport,
}

pub fn coupled_residual(spec: &PotentialSpec, ev: &SpinorEvaluator, xs: &[C]) -> Result<CoupledReport> {
    coupled_residual_with_energy(spec, ev, ev.energy(), xs)
}

/// First-order system at points x (complex x allowed; `s = e^{−αe x}`).
pub fn coupled_residual_with_energy(spec: &PotentialSpec, ev: &SpinorEvaluator, energy: C, xs: &[C]) -> Result<CoupledReport> {
    let eff = spec.effective();
    let m = C::from(spec.m);
    let (mut a1, mut a2) = (Acc::default(), Acc::default());
    for &x in xs {
        let s = spec.s_of_x(x);
        let u = energy - crate::model::potential_at_s(spec, s)?;
        let up = ev.upper_jet(s)?;
        let lo = ev.lower_jet(s)?;
        let dx = -eff.alpha * s;
        let (phi_x, mth_x) = (dx * up.d1, dx * lo.d1);
        let t1 = [I * phi_x, u * up.f, -lo.f];
        let t2 = [-I * mth_x, u * lo.f, -m * m * up.f];
        a1.push(x, t1[0] + t1[1] + t1[2], &t1);
        a2.push(x, t2[0] + t2[1] + t2[2], &t2);
    }
    Ok(CoupledReport { r1: a1.report(), r2: a2.report() })
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| a + h * i as f64)
}

/// Real s points in `(0.01, 0.99)/|Q|` (`|Q| = 1` for q = 0).
pub fn s_grid(spec: &PotentialSpec, n: usize) -> Vec<C> {
    let q = spec.effective().q.norm();
    let q = if q > 0.0 { q } else { 1.0 };
    linspace(0.01 / q, 0.99 / q, n).map(C::from).collect()
}

/// Real x points away from the poles of the variant.
///
/// Real and exponential variants map the [`s_grid`] range back to x. The
/// complexified variants have `|s| = 1`; the grid spans one period of
/// `αx`, leaving 0.1 rad either side of the phase `arg(Qe)` where the pole
/// sits when `|q| = 1`.
pub fn x_grid(spec: &PotentialSpec, n: usize) -> Vec<C> {
    match spec.variant {
        Variant::Real | Variant::Exponential => {
            s_grid(spec, n).into_iter().map(|s| C::from(-s.re.ln() / spec.alpha)).collect()
        }
        Variant::PTSymmetric | Variant::PseudoHermitian => {
            let phase = spec.effective().q.arg();
            linspace(phase + 0.1, phase + 2.0 * PI - 0.1, n).map(|t| C::from(t / spec.alpha)).collect()
        }
    }
}

/// Largest relative mismatch between analytic s-derivatives and central differences.
pub fn fd_derivative_check(ev: &SpinorEvaluator, grid: &[C], h: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let rel = |a: C, b: C| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    for &s in grid {
        let j = ev.upper_jet(s)?;
        let (jp, jm) = (ev.upper_jet(s + h)?, ev.upper_jet(s - h)?);
        let (lp, lm) = (ev.lower_jet(s + h)?, ev.lower_jet(s - h)?);
        let l = ev.lower_jet(s)?;
        worst = worst
            .max(rel(j.d1, (jp.f - jm.f) / (2.0 * h)))
            .max(rel(j.d2, (jp.d1 - jm.d1) / (2.0 * h)))
            .max(rel(l.d1, (lp.f - lm.f) / (2.0 * h)));
    }
    Ok(worst)
}

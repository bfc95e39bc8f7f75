//! Runtime invariant suite: each check reports the measured quantity and
//! the tolerance it is held to.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::Result;
use crate::model::{
    alpha_window, bound_window, energy_closed_form, spinor_state, BranchSign, PotentialSpec,
    StateStatus, Variant,
};
use crate::nu;
use crate::special::{self, JacobiParams};
use crate::verify::fd::{fd_dirac_spectrum, GridSpec};
use crate::verify::quantization::quantization_root_on;
use crate::verify::residual::{coupled_residual, ode_residual, ode_residual_with_energy, s_grid, x_grid};
use crate::verify::symmetry::{symmetry_check, symmetry_excess, SymmetryKind};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Pass when measured ≤ tolerance.
    AtMost,
    /// Pass when measured ≥ tolerance.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    /// Reported but never counted as a failure.
    pub informational: bool,
}

impl CheckResult {
    pub fn failed(&self) -> bool {
        !self.passed && !self.informational
    }
}

/// Tolerance overrides keyed by check name.
pub type Overrides = BTreeMap<String, f64>;

pub const CHECK_NAMES: &[&str] = &[
    "alpha_window",
    "closed_vs_root",
    "discrepant_states",
    "ode_residual",
    "coupled_r1",
    "coupled_r2",
    "residual_sensitivity",
    "reality_misclassified",
    "reality_kappa_zero_line",
    "reality_beyond_twice_depth",
    "boundary_coincidence",
    "pt_symmetry",
    "pseudo_hermitian_shifted_pt",
    "pseudo_p_quarter_reflection",
    "real_pt_violation",
    "oscillator_levels",
    "jacobi_dual_path",
    "jacobi_deriv",
    "kummer",
    "hyp1f1_e_minus_1",
    "fd_free_lowest",
    "fd_order",
    "fd_doubler_gap",
    "fd_q0_stability",
];

struct Recorder<'a> {
    overrides: &'a Overrides,
    out: Vec<CheckResult>,
}

impl Recorder<'_> {
    fn push(&mut self, name: &'static str, measured: f64, tolerance: f64, bound: Bound) {
        self.push_with(name, measured, tolerance, bound, false);
    }

    fn push_with(&mut self, name: &'static str, measured: f64, tolerance: f64, bound: Bound, informational: bool) {
        let tolerance = self.overrides.get(name).copied().unwrap_or(tolerance);
        let passed = match bound {
            Bound::AtMost => measured <= tolerance,
            Bound::AtLeast => measured >= tolerance,
        };
        self.out.push(CheckResult { name, measured, tolerance, bound, passed, informational });
    }
}

/// `(spec, n)` pairs over variant × q × α × V0 with levels from the window
/// (n ≤ 3), or n = 0..3 when no window applies.
pub fn state_grid(m: f64) -> Vec<(PotentialSpec, u32)> {
    let mut out = Vec::new();
    for variant in [Variant::Real, Variant::PTSymmetric, Variant::PseudoHermitian] {
        for q in [1.0, -1.0, 2.0] {
            for alpha in [1.0, 1.5, 2.0] {
                for v0 in [2.5, 4.0] {
                    let spec = PotentialSpec { v0: v0 * m, q, alpha: alpha * m, m, variant };
                    let levels: Vec<u32> = match bound_window(&spec) {
                        Ok(w) => w.filter(|&n| n <= 3).collect(),
                        Err(_) => (0..=3).collect(),
                    };
                    out.extend(levels.into_iter().map(|n| (spec, n)));
                }
            }
        }
    }
    out
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (*seed >> 11) as f64 / (1u64 << 53) as f64
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

pub fn run_suite(overrides: &Overrides) -> Result<Vec<CheckResult>> {
    let mut r = Recorder { overrides, out: Vec::new() };
    let m = 1.0;

    let base = PotentialSpec { v0: 2.5, q: 1.0, alpha: 1.0, m, variant: Variant::PTSymmetric };
    let mut dev = 0.0f64;
    for (n, (lo, hi)) in [(0, (1.0, 4.0)), (1, (0.5, 2.0)), (2, (1.0 / 3.0, 4.0 / 3.0))] {
        let (a, b) = alpha_window(&base, n)?;
        dev = dev.max((a - lo).abs()).max((b - hi).abs());
    }
    r.push("alpha_window", dev, 1e-12, Bound::AtMost);

    let mut worst_root = 0.0f64;
    let mut discrepant = 0usize;
    let (mut ode, mut c1, mut c2) = (0.0f64, 0.0f64, 0.0f64);
    let mut sens = f64::INFINITY;
    for (spec, n) in state_grid(m) {
        for sign in [BranchSign::Plus, BranchSign::Minus] {
            let st = match energy_closed_form(&spec, n, sign) {
                Ok(st) => st,
                Err(_) => continue,
            };
            if st.status == StateStatus::Discrepant {
                discrepant += 1;
                continue;
            }
            let seed = st.energy + C::new(1e-3, 1e-3);
            let root = quantization_root_on(&spec, n, seed, st.sheet)?;
            worst_root = worst_root.max((root.energy - st.energy).norm() / m);
            let ev = spinor_state(&spec, &st)?;
            let sg = s_grid(&spec, 200);
            ode = ode.max(ode_residual(&spec, &ev, &sg)?.max_rel);
            let cr = coupled_residual(&spec, &ev, &x_grid(&spec, 200))?;
            c1 = c1.max(cr.r1.max_rel);
            c2 = c2.max(cr.r2.max_rel);
            sens = sens.min(ode_residual_with_energy(&spec, &ev, st.energy + 1e-3 * m, &sg)?.max_rel);
        }
    }
    r.push("closed_vs_root", worst_root, 1e-8, Bound::AtMost);
    r.push("discrepant_states", discrepant as f64, 0.0, Bound::AtMost);
    r.push("ode_residual", ode, 1e-8, Bound::AtMost);
    r.push("coupled_r1", c1, 1e-9, Bound::AtMost);
    r.push("coupled_r2", c2, 1e-8, Bound::AtMost);
    r.push("residual_sensitivity", sens, 1e-4, Bound::AtLeast);

    // Grid spans both window edges; the documented exceptions are counted apart.
    let (mut wrong, mut on_line, mut beyond) = (0usize, 0usize, 0usize);
    let mut coincide = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let v0 = (60 + i) as f64 / 40.0;
            let alpha = (j + 1) as f64 / 12.5;
            let spec = PotentialSpec { v0, q: 1.0, alpha, m, variant: Variant::PTSymmetric };
            let kt = alpha - v0;
            let inside = 4.0 <= v0 * v0 - kt * kt;
            // The closed form has a pole at α(n+1)q = 2V0 and is real beyond it.
            let Ok(st) = energy_closed_form(&spec, 0, BranchSign::Plus) else {
                beyond += 1;
                continue;
            };
            if st.is_real_spectrum != inside {
                // On α(n+1)q = V0 the ± term vanishes and E = V0/2q is real
                // whatever the inequality says.
                if alpha == v0 {
                    on_line += 1;
                } else if alpha > 2.0 * v0 {
                    beyond += 1;
                } else {
                    wrong += 1;
                }
            }
        }
    }
    for alpha in [1.0, 4.0] {
        let spec = PotentialSpec { alpha, ..base };
        for sign in [BranchSign::Plus, BranchSign::Minus] {
            let e = energy_closed_form(&spec, 0, sign)?.energy;
            coincide = coincide.max((e - C::from(1.25)).norm());
        }
    }
    r.push("reality_misclassified", wrong as f64, 0.0, Bound::AtMost);
    r.push_with("reality_kappa_zero_line", on_line as f64, 0.0, Bound::AtMost, true);
    r.push_with("reality_beyond_twice_depth", beyond as f64, 0.0, Bound::AtMost, true);
    r.push("boundary_coincidence", coincide, 1e-10, Bound::AtMost);

    let mut seed = 7u64;
    let xs: Vec<f64> = (0..100).map(|i| -5.0 + 0.1 * i as f64 + 0.013).collect();
    let (mut pt, mut ph, mut quarter, mut neg) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..10 {
        let v0 = 0.5 + 4.0 * lcg(&mut seed);
        let q = if lcg(&mut seed) < 0.5 { -(0.5 + 2.0 * lcg(&mut seed)) } else { 1.1 + 2.0 * lcg(&mut seed) };
        let alpha = 0.3 + 2.0 * lcg(&mut seed);
        let spec = PotentialSpec { v0, q, alpha, m, variant: Variant::PTSymmetric };
        pt = pt.max(symmetry_check(&spec, SymmetryKind::PT, &xs)?.max_abs);
        let spec = spec.with_variant(Variant::PseudoHermitian);
        ph = ph.max(symmetry_excess(&spec, SymmetryKind::ShiftedPT, &xs)?);
        quarter = quarter.max(symmetry_check(&spec, SymmetryKind::PseudoP, &xs)?.max_abs);
        let spec = PotentialSpec { q: -q.abs(), ..spec.with_variant(Variant::Real) };
        neg = neg.min(symmetry_check(&spec, SymmetryKind::PT, &xs)?.max_abs / v0);
    }
    r.push("pt_symmetry", pt, 1e-13, Bound::AtMost);
    r.push("pseudo_hermitian_shifted_pt", ph, 1e-13, Bound::AtMost);
    // x → π/(2α) − x maps this form onto the conjugate of the PT form.
    r.push_with("pseudo_p_quarter_reflection", quarter, 1e-13, Bound::AtMost, true);
    r.push("real_pt_violation", neg, 0.1, Bound::AtLeast);

    let mut osc = 0.0f64;
    for n in 0..=10u32 {
        // λ(ε̃) = ε̃ − 1 is linear, so λ(ε̃) = λₙ is solved by one secant step.
        let lam = |e: f64| -> Result<C> {
            let p = nu::validate_problem(nu::Poly2::real(1.0, 0.0, 0.0), nu::Poly2::real(e, 0.0, -1.0), nu::Poly2::ZERO)?;
            let b = nu::select_branch(&nu::enumerate_branches(&p)?, nu::BranchPolicy::PaperDefault)?;
            Ok(b.lambda - nu::eigen_lambda(&b, n))
        };
        let (f0, f1) = (lam(0.0)?, lam(1.0)?);
        let root = -f0 / (f1 - f0);
        osc = osc.max((root - C::from(2.0 * n as f64 + 1.0)).norm());
    }
    r.push("oscillator_levels", osc, 1e-12, Bound::AtMost);

    let (mut dual, mut deriv, mut kummer) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let mut cz = |scale: f64| C::new(scale * (2.0 * lcg(&mut seed) - 1.0), scale * (2.0 * lcg(&mut seed) - 1.0));
        let p = JacobiParams::new(cz(2.0), cz(2.0));
        let z = cz(1.0);
        for n in 0..=8 {
            let a = special::jacobi_p_recurrence(n, p, z).unwrap_or(C::new(f64::NAN, 0.0));
            let b = special::jacobi_p_explicit(n, p, z);
            dual = dual.max((a - b).norm() / b.norm().max(1.0));
        }
        let h = 1e-5;
        let fd = (special::jacobi_p(4, p, z + h) - special::jacobi_p(4, p, z - h)) / (2.0 * h);
        deriv = deriv.max((special::jacobi_p_deriv(4, p, z) - fd).norm() / fd.norm().max(1.0));
        let a = cz(3.0);
        let b = C::new(0.2 + 3.8 * lcg(&mut seed), 6.0 * lcg(&mut seed) - 3.0);
        let zz = {
            let rr = 10.0 * lcg(&mut seed);
            let th = 2.0 * PI * lcg(&mut seed);
            C::from_polar(rr, th)
        };
        let lhs = special::hyp1f1_value(a, b, zz)?;
        let rhs = zz.exp() * special::hyp1f1_value(b - a, b, -zz)?;
        kummer = kummer.max(rel(lhs, rhs));
    }
    r.push("jacobi_dual_path", dual, 1e-11, Bound::AtMost);
    r.push("jacobi_deriv", deriv, 1e-8, Bound::AtMost);
    r.push("kummer", kummer, 1e-10, Bound::AtMost);
    let e1 = special::hyp1f1_value(C::from(1.0), C::from(2.0), C::from(1.0))?;
    r.push("hyp1f1_e_minus_1", (e1 - C::from(std::f64::consts::E - 1.0)).norm(), 1e-14, Bound::AtMost);

    let free = |mass: f64| PotentialSpec { v0: 0.0, q: 0.0, alpha: 1.0, m: mass, variant: Variant::Exponential };
    let exact = (1.0 + (PI / 20.0).powi(2)).sqrt();
    let lowest = |n: usize| -> Result<f64> {
        let s = fd_dirac_spectrum(&free(1.0), &GridSpec::new(-10.0, 10.0, n, true)?)?;
        Ok(s.lowest_positive().map(|e| e.re).unwrap_or(f64::NAN))
    };
    let (e1k, e2k) = (lowest(1000)?, lowest(2000)?);
    r.push("fd_free_lowest", (e2k - exact).abs(), 2e-4, Bound::AtMost);
    r.push("fd_order", ((e1k - exact).abs() / (e2k - exact).abs()).log2(), 1.9, Bound::AtLeast);
    let s = fd_dirac_spectrum(&free(0.0), &GridSpec::new(-10.0, 10.0, 200, true)?)?;
    r.push("fd_doubler_gap", doubler_gap(&s.eigenvalues, 10.0), 0.5 * PI / 20.0, Bound::AtLeast);
    let q0 = PotentialSpec { v0: 2.5, q: 0.0, alpha: 1.0, m, variant: Variant::Exponential };
    let a = fd_dirac_spectrum(&q0, &GridSpec::new(0.0, 40.0, 4000, true)?)?.in_range(-m, m);
    let b = fd_dirac_spectrum(&q0, &GridSpec::new(0.0, 40.0, 8000, true)?)?.in_range(-m, m);
    let stab = if a.len() == b.len() {
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    r.push("fd_q0_stability", stab, 1e-4, Bound::AtMost);
    Ok(r.out)
}

/// Smallest distance from a massless-box mode `±jπ/(2L)` (j ≥ 1, lowest
/// ten) to any other eigenvalue that is not its own match.
pub fn doubler_gap(eigs: &[C], half_length: f64) -> f64 {
    let k = PI / (2.0 * half_length);
    let mut gap = f64::INFINITY;
    for j in 1..=10 {
        for sign in [1.0, -1.0] {
            let target = sign * k * j as f64;
            let mut d: Vec<f64> = eigs.iter().map(|e| (e.re - target).abs()).collect();
            d.sort_by(f64::total_cmp);
            gap = gap.min(d[1]);
        }
    }
    gap
}

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::model::{potential_value, PotentialSpec};
use crate::verify::residual::ResidualReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// `x → −x`
    PT,
    /// `x → π/(2α) − x`
    PseudoP,
    /// `x → π/α − x`
    ShiftedPT,
}

/// `max |[V(Px)]* − V(x)|` over the points.
pub fn symmetry_check(spec: &PotentialSpec, kind: SymmetryKind, xs: &[f64]) -> Result<ResidualReport> {
    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    let mut scale = 0.0f64;
    let mut worst = 0.0;
    for &x in xs {
        let xr = match kind {
            SymmetryKind::PT => -x,
            SymmetryKind::PseudoP => FRAC_PI_2 / spec.alpha - x,
            SymmetryKind::ShiftedPT => PI / spec.alpha - x,
        };
        let v = potential_value(spec, x)?;
        let d = (potential_value(spec, xr)?.conj() - v).norm();
        if d > max_abs {
            worst = x;
        }
        max_abs = max_abs.max(d);
        scale = scale.max(v.norm());
        if v.norm() > 0.0 {
            max_rel = max_rel.max(d / v.norm());
        }
    }
    Ok(ResidualReport {
        max_abs,
        max_rel,
        global_rel: if scale > 0.0 { max_abs / scale } else { 0.0 },
        worst_point: Complex64::from(worst),
        n_points: xs.len(),
    })
}

/// Largest amount by which `|[V(Px)]* − V(x)|` exceeds the rounding
/// allowance `16 u (|x| + |shift| + 1/α) |V′(Px)|`.
///
/// `π/α − x` and the phase `αx` are not exact in floating point, so near a
/// steep part of the potential an exact identity still shows a residual of
/// a few ulps of that size.
pub fn symmetry_excess(spec: &PotentialSpec, kind: SymmetryKind, xs: &[f64]) -> Result<f64> {
    let shift = match kind {
        SymmetryKind::PT => 0.0,
        SymmetryKind::PseudoP => FRAC_PI_2 / spec.alpha,
        SymmetryKind::ShiftedPT => PI / spec.alpha,
    };
    let mut excess = 0.0f64;
    for &x in xs {
        let xr = shift - x;
        let v = potential_value(spec, x)?;
        let d = (potential_value(spec, xr)?.conj() - v).norm();
        let h = 1e-6 * xr.abs().max(1.0);
        let dv = (potential_value(spec, xr + h)? - potential_value(spec, xr - h)?).norm() / (2.0 * h);
        let rounding = f64::EPSILON * (x.abs() + shift.abs() + 1.0 / spec.alpha) * dv;
        excess = excess.max(d - 16.0 * rounding);
    }
    Ok(excess.max(0.0))
}

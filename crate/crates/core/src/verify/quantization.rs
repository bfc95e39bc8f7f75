use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{quantization_residual_on, EpsilonSheet, PotentialSpec};

type C = Complex64;

use std::f64::consts::PI;

pub const MAX_ITERATIONS: usize = 200;
const STEP_TOL: f64 = 1e-15;
const ROOT_TOL: f64 = 1e-14;
const MAX_HALVINGS: usize = 30;
const STALL_ITERATIONS: usize = 10;
const STALL_RESIDUAL: f64 = 1e-9;

/// `λ(E) − λₙ(E)` with the principal ε.
pub fn quantization_residual(spec: &PotentialSpec, energy: C, n: u32) -> Result<C> {
    quantization_residual_on(spec, energy, n, EpsilonSheet::Principal)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub energy: C,
    pub residual: C,
    pub iterations: usize,
    /// 2 when the secant landed on a numerically unresolvable double root
    /// and `energy` is the cluster centroid.
    pub multiplicity: u32,
    /// The plain secant result before cluster refinement.
    pub secant_energy: C,
}

pub fn quantization_root(spec: &PotentialSpec, n: u32, seed: C) -> Result<RootResult> {
    quantization_root_on(spec, n, seed, EpsilonSheet::Principal)
}

/// Complex secant iteration on the quantization residual.
pub fn quantization_root_on(spec: &PotentialSpec, n: u32, seed: C, sheet: EpsilonSheet) -> Result<RootResult> {
    let f = |e: C| quantization_residual_on(spec, e, n, sheet);
    let mut x0 = seed;
    let mut f0 = f(x0)?;
    if f0.norm() <= ROOT_TOL {
        return Ok(RootResult { energy: seed, residual: f0, iterations: 1, multiplicity: 1, secant_energy: seed });
    }
    let mut x1 = seed + C::new(1.0, 0.5) * (1e-4 * seed.norm().max(1.0));
    let mut f1 = f(x1)?;
    let mut tail = Vec::with_capacity(MAX_ITERATIONS);
    let mut best = if f1.norm() < f0.norm() { (x1, f1) } else { (x0, f0) };
    let mut since_best = 0usize;
    for it in 1..=MAX_ITERATIONS {
        let df = f1 - f0;
        if df.norm() == 0.0 {
            if f1.norm() <= ROOT_TOL.sqrt() {
                return finish(spec, n, sheet, x1, f1, it);
            }
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / df;
        if !x2.is_finite() {
            break;
        }
        // Some energies admit no branch; back off toward x1.
        let mut f2 = f(x2);
        let mut halvings = 0;
        while f2.is_err() && halvings < MAX_HALVINGS {
            x2 = x1 + (x2 - x1) * 0.5;
            f2 = f(x2);
            halvings += 1;
        }
        let f2 = f2?;
        tail.push(x2);
        if f2.norm() == 0.0 || (x2 - x1).norm() <= STEP_TOL * x2.norm().max(1.0) {
            return finish(spec, n, sheet, x2, f2, it);
        }
        if f2.norm() < best.1.norm() {
            best = (x2, f2);
            since_best = 0;
        } else {
            since_best += 1;
        }
        // Wandering at the rounding floor, typical near a double root.
        if since_best >= STALL_ITERATIONS && best.1.norm() <= STALL_RESIDUAL {
            return finish(spec, n, sheet, best.0, best.1, it);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    let keep = tail.len().saturating_sub(5);
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, tail: tail.split_off(keep) })
}

fn finish(spec: &PotentialSpec, n: u32, sheet: EpsilonSheet, x: C, fx: C, iterations: usize) -> Result<RootResult> {
    let plain = RootResult { energy: x, residual: fx, iterations, multiplicity: 1, secant_energy: x };
    match cluster_centroid(spec, n, sheet, x) {
        Some(c) => {
            let residual = quantization_residual_on(spec, c, n, sheet)?;
            Ok(RootResult { energy: c, residual, multiplicity: 2, ..plain })
        }
        None => Ok(plain),
    }
}

const RING: usize = 16;

/// Taylor coefficients `a_0 … a_{RING−1}` of the residual about `x` from
/// samples on a circle of radius `r`.
fn taylor_on_circle(spec: &PotentialSpec, n: u32, sheet: EpsilonSheet, x: C, r: f64) -> Option<Vec<C>> {
    let mut vals = Vec::with_capacity(RING);
    for k in 0..RING {
        let w = C::from_polar(1.0, 2.0 * PI * k as f64 / RING as f64);
        vals.push(quantization_residual_on(spec, x + w * r, n, sheet).ok()?);
    }
    Some(
        (0..RING)
            .map(|j| {
                let sum: C = (0..RING)
                    .map(|k| vals[k] * C::from_polar(1.0, -2.0 * PI * (j * k) as f64 / RING as f64))
                    .sum();
                sum / (RING as f64 * r.powi(j as i32))
            })
            .collect(),
    )
}

/// Centroid of a root pair around `x` whose splitting is below the noise
/// floor of the residual, if there is one.
///
/// At a double root the residual behaves like `a₂δ²`, so a rounding floor η
/// on the residual spreads the apparent zeros over `√(η/|a₂|)`; the centroid
/// `−a₁/(2a₂)` of the local quadratic stays accurate to about `η/R`.
fn cluster_centroid(spec: &PotentialSpec, n: u32, sheet: EpsilonSheet, x: C) -> Option<C> {
    // Keep the ring clear of the ε branch points at E = ±m.
    let reach = (x - spec.m).norm().min((x + spec.m).norm());
    let r = (1e-3 * x.norm().max(1.0)).min(0.25 * reach);
    if r <= 0.0 {
        return None;
    }
    let a = taylor_on_circle(spec, n, sheet, x, r)?;
    // Upper half of the ring is rounding noise for an analytic residual.
    let noise = (RING / 2..RING).map(|j| a[j].norm() * r.powi(j as i32)).fold(0.0, f64::max).max(1e-16);
    let scaled = |j: usize| a[j].norm() * r.powi(j as i32);
    if scaled(2) < 1e3 * noise || scaled(3) > scaled(2) {
        return None;
    }
    let disc = (a[1] * a[1] - a[0] * a[2] * 4.0).sqrt();
    let split = (disc / a[2]).norm();
    let floor = (noise / a[2].norm()).sqrt();
    if split > 10.0 * floor {
        return None;
    }
    Some(x - a[1] / (a[2] * 2.0))
}

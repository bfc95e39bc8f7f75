//! Finite-difference eigenvalues of the Dirac system
//! `iφ' + (E − V)φ = mθ`, `−iθ' + (E − V)θ = mφ`.
//!
//! In the rotated components `u = (φ+θ)/√2`, `w = (φ−θ)/√2` the
//! Hamiltonian reads `H = [[V + m, −i∂], [−i∂, V − m]]`. The staggered grid
//! puts u on the interior integer nodes `x_1 … x_{N−1}` with `u_0 = u_N = 0`
//! and w on the N half nodes; ∂ becomes a one-sided difference between the
//! two sublattices, which has no doubler. Substituting `w = i w̃` makes the
//! matrix real symmetric tridiagonal for real V, which is solved by implicit
//! QL; complex V goes through the dense Hessenberg/QR solver.
//!
//! The unstaggered grid (both components on integer nodes, central
//! differences) is kept for comparison; it exhibits fermion doubling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{potential_value, PotentialSpec};
use crate::verify::eigen::{eigenvalues, symmetric_tridiagonal_eigenvalues, DenseMatrix};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// Number of cells N.
    pub n_points: usize,
    pub staggered: bool,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, staggered: bool) -> Result<Self> {
        let g = GridSpec { x_min, x_max, n_points, staggered };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::InvalidGrid("need finite x_min < x_max".into()));
        }
        if self.n_points < 8 {
            return Err(Error::InvalidGrid("need n_points >= 8".into()));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `u = (φ+θ)/√2` vanishes at both ends.
    DirichletUpper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<C>,
    pub h: f64,
    pub boundary: Boundary,
    pub doubling_filtered: bool,
}

impl NumericSpectrum {
    /// Eigenvalues with real part strictly inside `(lo, hi)`.
    pub fn in_range(&self, lo: f64, hi: f64) -> Vec<C> {
        self.eigenvalues.iter().copied().filter(|e| e.re > lo && e.re < hi).collect()
    }

    /// Smallest eigenvalue with positive real part.
    pub fn lowest_positive(&self) -> Option<C> {
        self.eigenvalues.iter().copied().find(|e| e.re > 0.0)
    }
}

fn sample(spec: &PotentialSpec, xs: impl Iterator<Item = f64>) -> Result<Vec<C>> {
    xs.map(|x| potential_value(spec, x)).collect()
}

fn sort(mut v: Vec<C>) -> Vec<C> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

pub fn fd_dirac_spectrum(spec: &PotentialSpec, grid: &GridSpec) -> Result<NumericSpectrum> {
    grid.validate()?;
    let eigenvalues = if grid.staggered { staggered(spec, grid)? } else { collocated(spec, grid)? };
    Ok(NumericSpectrum {
        eigenvalues: sort(eigenvalues),
        h: grid.h(),
        boundary: Boundary::DirichletUpper,
        doubling_filtered: grid.staggered,
    })
}

/// Interleaved ordering `w_{1/2}, u_1, w_{3/2}, …, u_{N−1}, w_{N−1/2}`.
fn staggered(spec: &PotentialSpec, grid: &GridSpec) -> Result<Vec<C>> {
    let n = grid.n_points;
    let h = grid.h();
    let m = spec.m;
    let mut diag = Vec::with_capacity(2 * n - 1);
    let vu = sample(spec, (1..n).map(|j| grid.x_min + h * j as f64))?;
    let vw = sample(spec, (0..n).map(|j| grid.x_min + h * (j as f64 + 0.5)))?;
    for j in 0..n {
        diag.push(vw[j] - m);
        if j + 1 < n {
            diag.push(vu[j] + m);
        }
    }
    // w̃ rows couple to the following u with −1/h and the preceding u with +1/h.
    let off: Vec<f64> = (0..2 * n - 2).map(|k| if k % 2 == 0 { -1.0 / h } else { 1.0 / h }).collect();
    if diag.iter().all(|d| d.im == 0.0) {
        let d: Vec<f64> = diag.iter().map(|d| d.re).collect();
        return Ok(symmetric_tridiagonal_eigenvalues(&d, &off)?.into_iter().map(C::from).collect());
    }
    let size = diag.len();
    let mut a = DenseMatrix::zeros(size);
    for k in 0..size {
        *a.at_mut(k, k) = diag[k];
        if k + 1 < size {
            *a.at_mut(k, k + 1) = C::from(off[k]);
            *a.at_mut(k + 1, k) = C::from(off[k]);
        }
    }
    eigenvalues(a)
}

/// Both components on `x_1 … x_{N−1}`, zero outside, central differences.
fn collocated(spec: &PotentialSpec, grid: &GridSpec) -> Result<Vec<C>> {
    let n = grid.n_points - 1;
    let h = grid.h();
    let m = spec.m;
    let v = sample(spec, (1..=n).map(|j| grid.x_min + h * j as f64))?;
    let mut a = DenseMatrix::zeros(2 * n);
    let k = C::new(0.0, -0.5 / h);
    for j in 0..n {
        *a.at_mut(j, j) = v[j] + m;
        *a.at_mut(n + j, n + j) = v[j] - m;
        if j + 1 < n {
            // −i∂ ≈ −i (f_{j+1} − f_{j−1})/(2h)
            *a.at_mut(j, n + j + 1) = k;
            *a.at_mut(j + 1, n + j) = -k;
            *a.at_mut(n + j, j + 1) = k;
            *a.at_mut(n + j + 1, j) = -k;
        }
    }
    eigenvalues(a)
}

/// Staggered matrix in the original complex form (for solver cross-checks).
pub fn staggered_dense(spec: &PotentialSpec, grid: &GridSpec) -> Result<DenseMatrix> {
    grid.validate()?;
    let n = grid.n_points;
    let h = grid.h();
    let m = spec.m;
    let vu = sample(spec, (1..n).map(|j| grid.x_min + h * j as f64))?;
    let vw = sample(spec, (0..n).map(|j| grid.x_min + h * (j as f64 + 0.5)))?;
    let size = 2 * n - 1;
    let mut a = DenseMatrix::zeros(size);
    let ih = C::new(0.0, 1.0 / h);
    for j in 0..n {
        *a.at_mut(2 * j, 2 * j) = vw[j] - m;
    }
    for j in 1..n {
        let r = 2 * j - 1;
        *a.at_mut(r, r) = vu[j - 1] + m;
        // (−i∂w)_j = −i (w_{j+1/2} − w_{j−1/2})/h
        *a.at_mut(r, r + 1) = -ih;
        *a.at_mut(r, r - 1) = ih;
        // (−i∂u)_{j±1/2}
        *a.at_mut(r + 1, r) = ih;
        *a.at_mut(r - 1, r) = -ih;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;
    use std::f64::consts::PI;

    fn free(m: f64) -> PotentialSpec {
        PotentialSpec { v0: 0.0, q: 0.0, alpha: 1.0, m, variant: Variant::Exponential }
    }

    #[test]
    fn free_box_lowest_mode() {
        let g = GridSpec::new(-10.0, 10.0, 400, true).unwrap();
        let s = fd_dirac_spectrum(&free(1.0), &g).unwrap();
        let want = (1.0 + (PI / 20.0).powi(2)).sqrt();
        let got = s.lowest_positive().unwrap().re;
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        assert_eq!(s.eigenvalues.len(), 799);
    }

    #[test]
    fn complex_form_matches_real_form() {
        let spec = PotentialSpec::new(Variant::Real, 2.5, -1.0, 1.0, 1.0).unwrap();
        let g = GridSpec::new(-3.0, 5.0, 40, true).unwrap();
        let fast = fd_dirac_spectrum(&spec, &g).unwrap().eigenvalues;
        let dense = sort(eigenvalues(staggered_dense(&spec, &g).unwrap()).unwrap());
        for (a, b) in fast.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn invalid_grid() {
        assert!(GridSpec::new(1.0, 0.0, 100, true).is_err());
        assert!(GridSpec::new(0.0, 1.0, 4, true).is_err());
    }
}

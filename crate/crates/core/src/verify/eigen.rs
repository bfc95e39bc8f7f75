//! Eigenvalues of dense complex matrices (Householder Hessenberg reduction
//! followed by single-shift QR) and of real symmetric tridiagonal matrices
//! (implicit QL).

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<C>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![C::new(0.0, 0.0); n * n] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut C {
        &mut self.data[i * self.n + j]
    }
}

/// In-place reduction to upper Hessenberg form by Householder reflections.
pub fn hessenberg(a: &mut DenseMatrix) {
    let n = a.n;
    let mut v = vec![C::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        let tail = (k + 2..n).map(|i| a.at(i, k).norm_sqr()).sum::<f64>();
        if norm == 0.0 || tail == 0.0 {
            continue;
        }
        let x0 = a.at(k + 1, k);
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C::new(1.0, 0.0) };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a.at(i, k);
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>();
        if vn == 0.0 {
            continue;
        }
        // A ← (I − 2vv*/|v|²) A
        for j in k..n {
            let dot: C = (k + 1..n).map(|i| v[i].conj() * a.at(i, j)).sum();
            let f = dot * (2.0 / vn);
            for i in k + 1..n {
                *a.at_mut(i, j) -= v[i] * f;
            }
        }
        // A ← A (I − 2vv*/|v|²)
        for i in 0..n {
            let dot: C = (k + 1..n).map(|j| a.at(i, j) * v[j]).sum();
            let f = dot * (2.0 / vn);
            for j in k + 1..n {
                *a.at_mut(i, j) -= f * v[j].conj();
            }
        }
        for i in k + 2..n {
            *a.at_mut(i, k) = C::new(0.0, 0.0);
        }
    }
}

fn is_hessenberg(a: &DenseMatrix) -> bool {
    (0..a.n).all(|i| (0..i.saturating_sub(1)).all(|j| a.at(i, j).norm() == 0.0))
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closer to d.
fn wilkinson(a: C, b: C, c: C, d: C) -> C {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m = (a + d) * 0.5;
    let (e1, e2) = (m + disc, m - disc);
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// All eigenvalues of a general complex matrix; fails after `30·n` QR sweeps.
pub fn eigenvalues(mut a: DenseMatrix) -> Result<Vec<C>> {
    let n = a.n;
    if n == 0 {
        return Ok(vec![]);
    }
    if !is_hessenberg(&a) {
        hessenberg(&mut a);
    }
    let max_sweeps = 30 * n;
    let mut sweeps = 0;
    let mut eig = vec![C::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut its = 0;
    let mut rot = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = a.at(l - 1, l - 1).l1_norm() + a.at(l, l).l1_norm();
            let sub = a.at(l, l - 1).l1_norm();
            if sub <= f64::EPSILON * s || sub < f64::MIN_POSITIVE {
                *a.at_mut(l, l - 1) = C::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = a.at(hi, hi);
            hi -= 1;
            its = 0;
            continue;
        }
        sweeps += 1;
        its += 1;
        if sweeps > max_sweeps {
            return Err(Error::EigensolverFailure { sweeps: max_sweeps });
        }
        let mu = if its % 10 == 0 {
            let extra = if hi >= 2 { a.at(hi - 1, hi - 2).re.abs() } else { 0.0 };
            a.at(hi, hi) + a.at(hi, hi - 1).re.abs() + extra
        } else {
            wilkinson(a.at(hi - 1, hi - 1), a.at(hi - 1, hi), a.at(hi, hi - 1), a.at(hi, hi))
        };
        for k in l..=hi {
            *a.at_mut(k, k) -= mu;
        }
        rot.clear();
        for k in l..hi {
            let (x, y) = (a.at(k, k), a.at(k + 1, k));
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if rho == 0.0 {
                (1.0, C::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / rho)
            } else {
                (x.norm() / rho, x / x.norm() * y.conj() / rho)
            };
            for j in k..=hi {
                let (t1, t2) = (a.at(k, j), a.at(k + 1, j));
                *a.at_mut(k, j) = t1 * c + s * t2;
                *a.at_mut(k + 1, j) = -s.conj() * t1 + t2 * c;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let (t1, t2) = (a.at(i, k), a.at(i, k + 1));
                *a.at_mut(i, k) = t1 * c + s.conj() * t2;
                *a.at_mut(i, k + 1) = -s * t1 + t2 * c;
            }
        }
        for k in l..=hi {
            *a.at_mut(k, k) += mu;
        }
    }
    eig[0] = a.at(0, 0);
    Ok(eig)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() − 1`).
pub fn symmetric_tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).take(n).collect();
    if n == 0 {
        return Ok(d);
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 30 {
                return Err(Error::EigensolverFailure { sweeps: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<C>) -> Vec<C> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_matrix() {
        let mut a = DenseMatrix::zeros(3);
        for (i, d) in [2.0, -1.0, 5.0].iter().enumerate() {
            *a.at_mut(i, i) = C::new(*d, 0.5);
        }
        *a.at_mut(0, 2) = C::new(3.0, 1.0);
        let e = sorted(eigenvalues(a).unwrap());
        assert!((e[0] - C::new(-1.0, 0.5)).norm() < 1e-14);
        assert!((e[2] - C::new(5.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        // [[0, −1], [1, 0]] has eigenvalues ±i.
        let mut a = DenseMatrix::zeros(2);
        *a.at_mut(0, 1) = C::new(-1.0, 0.0);
        *a.at_mut(1, 0) = C::new(1.0, 0.0);
        let e = sorted(eigenvalues(a).unwrap());
        assert!((e[0] - C::new(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - C::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let n = 40;
        let d: Vec<f64> = (0..n).map(|i| ((i * 7919) % 13) as f64 * 0.3 - 1.0).collect();
        let e: Vec<f64> = (0..n - 1).map(|i| ((i * 104729) % 11) as f64 * 0.2 - 0.9).collect();
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            *a.at_mut(i, i) = C::from(d[i]);
            if i + 1 < n {
                *a.at_mut(i, i + 1) = C::from(e[i]);
                *a.at_mut(i + 1, i) = C::from(e[i]);
            }
        }
        let mut t = symmetric_tridiagonal_eigenvalues(&d, &e).unwrap();
        t.sort_by(f64::total_cmp);
        let g = sorted(eigenvalues(a).unwrap());
        for (x, y) in t.iter().zip(&g) {
            assert!((C::from(*x) - y).norm() < 1e-12);
        }
    }
}

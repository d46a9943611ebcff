//! Finite-difference cross-check for the double-well levels.
//!
//! Central differences on a grid symmetric about `x = 0` with Dirichlet ends
//! and the potential averaged exactly over each cell. Lossless eigenvalues
//! come from Sturm bisection on the real tridiagonal matrix; each is then
//! carried to the complex matrix by Rayleigh-quotient iteration with the
//! complex-symmetric quotient `xᵀHx / xᵀx`. Two grids (`h`, `h/2`) are solved
//! and combined by Richardson extrapolation.

use num_complex::Complex64;

use super::{outer_kappa, DoubleWellSpec};
use crate::error::{domain, Error, Result};

/// Default grid step, in well widths.
pub const FD_DEFAULT_STEP: f64 = 0.0025;
const MAX_STEP: f64 = 0.01;
const TAIL_LIMIT: f64 = 1e-8;
const RICHARDSON_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdLevel {
    /// Richardson-extrapolated eigenvalue.
    pub energy: Complex64,
    /// `⟨ψ, Rψ⟩ / ⟨ψ, ψ⟩` with `R: x → −x`; `+1` even, `−1` odd.
    pub parity_score: f64,
}

/// Box half-width leaving twenty outer decay lengths beyond the wells at
/// energy `e`.
pub fn fd_box_halfwidth(spec: &DoubleWellSpec, e: Complex64) -> f64 {
    0.5 * spec.d + 1.0 + 20.0 / outer_kappa(spec, e).re
}

/// Eigenvalues of the `level_count` lowest well states, sorted by real part.
pub fn fd_oracle(spec: &DoubleWellSpec, level_count: usize, grid_step_h: f64, box_halfwidth_x: f64) -> Result<Vec<Complex64>> {
    Ok(fd_oracle_levels(spec, level_count, grid_step_h, box_halfwidth_x)?
        .into_iter()
        .map(|l| l.energy)
        .collect())
}

pub fn fd_oracle_levels(spec: &DoubleWellSpec, level_count: usize, grid_step_h: f64, box_halfwidth_x: f64) -> Result<Vec<FdLevel>> {
    spec.validate()?;
    if level_count < 1 {
        return domain("level_count must be >= 1");
    }
    if !(grid_step_h > 0.0 && grid_step_h <= MAX_STEP) {
        return domain(format!("grid step must lie in (0, {MAX_STEP}], got {grid_step_h}"));
    }
    let edge = 0.5 * spec.d + 1.0;
    if !(box_halfwidth_x > edge) || !box_halfwidth_x.is_finite() {
        return Err(Error::BoxTooSmall(format!(
            "half-width {box_halfwidth_x} does not contain the wells (edge at {edge})"
        )));
    }
    // 1/h integral and the box edge an integer number of steps beyond the
    // wells puts every potential jump on a node of both grids
    let per_unit = (1.0 / grid_step_h).ceil();
    let step = 1.0 / per_unit;
    let halfwidth = edge + ((box_halfwidth_x - edge) / step).ceil() * step;
    let intervals = (2.0 * halfwidth * per_unit).round() as usize;
    let coarse = Grid::new(spec, halfwidth, intervals);
    let fine = Grid::new(spec, halfwidth, 2 * intervals);

    let coarse_levels = coarse.levels(spec, level_count)?;
    let fine_levels = fine.levels(spec, level_count)?;

    let mut out = Vec::with_capacity(level_count);
    for (c, f) in coarse_levels.iter().zip(&fine_levels) {
        let gap = (c.energy - f.energy).norm();
        if gap > RICHARDSON_LIMIT * f.energy.norm() {
            return domain(format!(
                "grid too coarse: eigenvalues at h and h/2 differ by {gap:e} (|E| = {})",
                f.energy.norm()
            ));
        }
        out.push(FdLevel {
            energy: (4.0 * f.energy - c.energy) / 3.0,
            parity_score: f.parity_score,
        });
    }
    out.sort_by(|a, b| a.energy.re.total_cmp(&b.energy.re));
    Ok(out)
}

struct Grid {
    step: f64,
    edge: f64,
    halfwidth: f64,
    /// cell-averaged potential at the interior nodes
    potential: Vec<Complex64>,
}

impl Grid {
    fn new(spec: &DoubleWellSpec, halfwidth: f64, intervals: usize) -> Self {
        let step = 2.0 * halfwidth / intervals as f64;
        let potential = (1..intervals)
            .map(|j| {
                let x = -halfwidth + j as f64 * step;
                (antiderivative(spec, x + 0.5 * step) - antiderivative(spec, x - 0.5 * step)) / step
            })
            .collect();
        Self {
            step,
            edge: 0.5 * spec.d + 1.0,
            halfwidth,
            potential,
        }
    }

    fn len(&self) -> usize {
        self.potential.len()
    }

    fn off_diagonal(&self) -> f64 {
        -1.0 / (self.step * self.step)
    }

    fn diagonal(&self, j: usize) -> Complex64 {
        self.potential[j] + 2.0 / (self.step * self.step)
    }

    fn mul(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let b = self.off_diagonal();
        (0..n)
            .map(|j| {
                let mut s = self.diagonal(j) * v[j];
                if j > 0 {
                    s += b * v[j - 1];
                }
                if j + 1 < n {
                    s += b * v[j + 1];
                }
                s
            })
            .collect()
    }

    /// Number of eigenvalues of the lossless matrix below `lambda`.
    fn sturm_count(&self, lambda: f64) -> usize {
        let b2 = self.off_diagonal().powi(2);
        let mut q = 1.0;
        let mut count = 0;
        for j in 0..self.len() {
            let prev = if j == 0 { 0.0 } else { b2 / q };
            q = self.diagonal(j).re - lambda - prev;
            if q == 0.0 {
                q = -f64::EPSILON * (lambda.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th (0-based) lossless eigenvalue by bisection.
    fn lossless_eigenvalue(&self, k: usize) -> f64 {
        let b = self.off_diagonal().abs();
        let (mut lo, mut hi) = self
            .potential
            .iter()
            .enumerate()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (j, _)| {
                let a = self.diagonal(j).re;
                (lo.min(a - 2.0 * b), hi.max(a + 2.0 * b))
            });
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    fn solve_shifted(&self, shift: Complex64, lossless: bool, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let b = Complex64::new(self.off_diagonal(), 0.0);
        let diag: Vec<Complex64> = (0..n)
            .map(|j| {
                let a = self.diagonal(j);
                let a = if lossless { Complex64::new(a.re, 0.0) } else { a };
                a - shift
            })
            .collect();
        solve_tridiagonal(&vec![b; n.saturating_sub(1)], &diag, &vec![b; n.saturating_sub(1)], rhs)
    }

    fn levels(&self, spec: &DoubleWellSpec, count: usize) -> Result<Vec<FdLevel>> {
        let n = self.len();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let lambda = self.lossless_eigenvalue(k);
            if !(lambda < spec.v0) {
                return Err(Error::NoSuchLevel(format!(
                    "only {k} well state(s) below V0 = {} on this grid",
                    spec.v0
                )));
            }
            let kappa = (spec.v0 - lambda).sqrt();
            if self.halfwidth < self.edge + 8.0 / kappa {
                return Err(Error::BoxTooSmall(format!(
                    "half-width {} is below d/2 + 1 + 8/kappa = {}",
                    self.halfwidth,
                    self.edge + 8.0 / kappa
                )));
            }

            // lossless eigenvector by inverse iteration
            let mut x: Vec<Complex64> = (0..n).map(|j| Complex64::new(1.0 + 0.5 * (j as f64).sin(), 0.0)).collect();
            for _ in 0..3 {
                x = normalized(self.solve_shifted(Complex64::new(lambda, 0.0), true, &x));
            }

            // Rayleigh-quotient iteration on the lossy matrix
            let mut mu = rayleigh(self, &x);
            for _ in 0..40 {
                x = normalized(self.solve_shifted(mu, false, &x));
                let next = rayleigh(self, &x);
                let change = (next - mu).norm();
                mu = next;
                if change <= 1e-14 * mu.norm() {
                    break;
                }
            }
            if !(mu.re.is_finite() && mu.im.is_finite()) {
                return Err(Error::Eigen(format!("inverse iteration diverged near {lambda}")));
            }

            let peak = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let tail = x[0].norm().max(x[n - 1].norm());
            if tail > TAIL_LIMIT * peak {
                return Err(Error::BoxTooSmall(format!(
                    "eigenfunction at the box edge is {:e} of its peak",
                    tail / peak
                )));
            }
            let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            let overlap: Complex64 = x.iter().zip(x.iter().rev()).map(|(a, b)| a.conj() * b).sum();
            out.push(FdLevel {
                energy: mu,
                parity_score: overlap.re / norm2,
            });
        }
        Ok(out)
    }
}

/// `∫₀ˣ V(t) dt`, odd in `x`.
fn antiderivative(spec: &DoubleWellSpec, x: f64) -> Complex64 {
    let barrier = Complex64::new(spec.vb, spec.v1);
    let well = Complex64::new(0.0, spec.v2);
    let outside = Complex64::new(spec.v0, spec.v1);
    let half = 0.5 * spec.d;
    let ax = x.abs();
    let value = if ax <= half {
        barrier * ax
    } else if ax <= half + 1.0 {
        barrier * half + well * (ax - half)
    } else {
        barrier * half + well + outside * (ax - half - 1.0)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

fn rayleigh(grid: &Grid, x: &[Complex64]) -> Complex64 {
    let hx = grid.mul(x);
    let num: Complex64 = x.iter().zip(&hx).map(|(a, b)| a * b).sum();
    let den: Complex64 = x.iter().map(|a| a * a).sum();
    num / den
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        v.into_iter().map(|z| z / norm).collect()
    } else {
        v
    }
}

/// Tridiagonal solve with partial pivoting. `lower[j]` sits at `(j+1, j)`,
/// `upper[j]` at `(j, j+1)`.
fn solve_tridiagonal(lower: &[Complex64], diag: &[Complex64], upper: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut d = diag.to_vec();
    let mut du = upper.to_vec();
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut dl = lower.to_vec();
    let mut b = rhs.to_vec();
    let tiny = f64::MIN_POSITIVE.sqrt();

    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if d[i].norm() < tiny {
                d[i] = Complex64::new(tiny, 0.0);
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            b.swap(i, i + 1);
            b[i + 1] = b[i + 1] - fact * b[i];
        }
    }
    if n > 0 && d[n - 1].norm() < tiny {
        d[n - 1] = Complex64::new(tiny, 0.0);
    }

    let mut x = vec![zero; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

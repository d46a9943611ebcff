//! One-dimensional double well with a complex (absorbing) potential.
//!
//! Units: `ħ = 2m = 1`, well width 1 (the disk diameter). The stationary
//! equation is `−ψ″ + V(x) ψ = E ψ` with
//!
//! ```text
//! V(x) = V0 + i V1   for |x| > d/2 + 1
//!        i V2        for d/2 < |x| < d/2 + 1
//!        Vb + i V1   for |x| < d/2
//! ```
//!
//! Eigenvalues are written `E = ε − iγ/2`.

mod fd;

use num_complex::Complex64;

use crate::diskmode::ResonanceLine;
use crate::error::{domain, Error, Result};
use crate::numerics::{brent, find_root_complex, sinc, sinhc, sqrt_decaying, RootFindConfig};

pub use fd::{fd_box_halfwidth, fd_oracle, fd_oracle_levels, FdLevel, FD_DEFAULT_STEP};

const SEED_SCAN_POINTS: usize = 4000;
const RAMP_STEPS: usize = 8;
const MAX_RAMP_BISECTIONS: u32 = 8;
const RESIDUAL_CHECK: f64 = 1e-10;

/// Newton settings for level refinement unless overridden.
pub const DEFAULT_LEVEL_SOLVER: RootFindConfig = RootFindConfig {
    tolerance: 1e-13,
    max_iterations: 60,
    derivative_step: 1e-7,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWellSpec {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub vb: f64,
    pub d: f64,
}

impl DoubleWellSpec {
    pub fn new(v0: f64, v1: f64, v2: f64, vb: f64, d: f64) -> Result<Self> {
        let s = Self { v0, v1, v2, vb, d };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.v0, self.v1, self.v2, self.vb, self.d];
        if all.iter().any(|x| !x.is_finite()) {
            return domain("double-well parameters must be finite");
        }
        if !(self.v0 > 0.0) {
            return domain(format!("V0 must be positive, got {}", self.v0));
        }
        if !(self.vb > 0.0 && self.vb <= self.v0) {
            return domain(format!("Vb must satisfy 0 < Vb <= V0, got Vb = {}", self.vb));
        }
        if self.v1 > 0.0 || self.v2 > 0.0 {
            return domain("V1 and V2 must be <= 0 (absorbing)");
        }
        if self.v1.abs() > 0.2 * self.v0 || self.v2.abs() > 0.2 * self.v0 {
            return domain("|V1| and |V2| must not exceed 0.2 V0");
        }
        if !(self.d >= 0.0) {
            return domain(format!("d must be >= 0, got {}", self.d));
        }
        Ok(())
    }

    pub fn with_d(&self, d: f64) -> Result<Self> {
        Self::new(self.v0, self.v1, self.v2, self.vb, d)
    }

    pub fn is_hermitian(&self) -> bool {
        self.v1 == 0.0 && self.v2 == 0.0
    }

    fn with_loss_fraction(&self, t: f64) -> Self {
        Self {
            v1: self.v1 * t,
            v2: self.v2 * t,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Symmetric, `ψ′(0) = 0`.
    Even,
    /// Antisymmetric, `ψ(0) = 0`.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiBoundLevel {
    pub parity: Parity,
    pub energy_eps: f64,
    pub width_gamma: f64,
    pub level_index: u32,
}

impl QuasiBoundLevel {
    fn from_eigenvalue(parity: Parity, e: Complex64, level_index: u32) -> Self {
        Self {
            parity,
            energy_eps: e.re,
            // + 0.0 turns -0.0 into 0.0
            width_gamma: -2.0 * e.im + 0.0,
            level_index,
        }
    }

    /// `ε − iγ/2`.
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(self.energy_eps, -0.5 * self.width_gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubletResult {
    pub level_s: QuasiBoundLevel,
    pub level_a: QuasiBoundLevel,
    /// `ε_A − ε_S`.
    pub delta_eps: f64,
    /// `γ_S / γ_A`, `+∞` when `γ_A = 0`.
    pub width_ratio: f64,
}

impl DoubletResult {
    pub fn new(level_s: QuasiBoundLevel, level_a: QuasiBoundLevel) -> Self {
        let width_ratio = if level_a.width_gamma == 0.0 {
            f64::INFINITY
        } else {
            level_s.width_gamma / level_a.width_gamma
        };
        Self {
            level_s,
            level_a,
            delta_eps: level_a.energy_eps - level_s.energy_eps,
            width_ratio,
        }
    }

    pub fn mean_energy(&self) -> f64 {
        0.5 * (self.level_s.energy_eps + self.level_a.energy_eps)
    }
}

/// Complex decay constant under the central barrier, `sqrt(Vb + iV1 − E)` on
/// the decaying branch.
pub fn barrier_kappa(spec: &DoubleWellSpec, e: Complex64) -> Complex64 {
    sqrt_decaying(Complex64::new(spec.vb, spec.v1) - e)
}

/// Complex decay constant outside the wells.
pub fn outer_kappa(spec: &DoubleWellSpec, e: Complex64) -> Complex64 {
    sqrt_decaying(Complex64::new(spec.v0, spec.v1) - e)
}

/// `(ψ, ψ′)` at the outer well edge `x = d/2 + 1`, starting from the parity
/// condition at `x = 0`.
fn outer_edge_state(spec: &DoubleWellSpec, parity: Parity, e: Complex64) -> (Complex64, Complex64) {
    let kb2 = Complex64::new(spec.vb, spec.v1) - e;
    let kb = sqrt_decaying(kb2);
    let x = 0.5 * spec.d;
    let arg = kb * x;
    // both branches are entire in kb²
    let (psi, dpsi) = match parity {
        Parity::Even => (arg.cosh(), kb2 * x * sinhc(arg)),
        Parity::Odd => (x * sinhc(arg), arg.cosh()),
    };
    let k2 = e - Complex64::new(0.0, spec.v2);
    let k = sqrt_decaying(k2);
    let (c, s) = (k.cos(), sinc(k));
    (c * psi + s * dpsi, -k2 * s * psi + c * dpsi)
}

/// Matching residual `ψ′ + κ_out ψ` at the outer well edge. Zero exactly when
/// the interior solution continues into a pure decaying exponential.
pub fn parity_residual(spec: &DoubleWellSpec, parity: Parity, e: Complex64) -> Complex64 {
    let (psi, dpsi) = outer_edge_state(spec, parity, e);
    dpsi + outer_kappa(spec, e) * psi
}

/// `|ψ′ + κ ψ| / (|ψ′| + |κ ψ|)`.
pub fn parity_residual_scaled(spec: &DoubleWellSpec, parity: Parity, e: Complex64) -> f64 {
    let (psi, dpsi) = outer_edge_state(spec, parity, e);
    let tail = outer_kappa(spec, e) * psi;
    let scale = dpsi.norm() + tail.norm();
    if scale > 0.0 {
        (dpsi + tail).norm() / scale
    } else {
        0.0
    }
}

/// `level_index`-th root (1-based) of the lossless problem for this parity.
fn hermitian_seed(spec: &DoubleWellSpec, parity: Parity, level_index: u32) -> Result<f64> {
    let lossless = spec.with_loss_fraction(0.0);
    let f = |e: f64| parity_residual(&lossless, parity, Complex64::new(e, 0.0)).re;
    let step = spec.v0 / SEED_SCAN_POINTS as f64;
    let mut found = 0;
    let mut prev_e = 0.5 * step;
    let mut prev_r = f(prev_e);
    for i in 1..SEED_SCAN_POINTS {
        let e = (i as f64 + 0.5) * step;
        let r = f(e);
        if prev_r.signum() != r.signum() {
            found += 1;
            if found == level_index {
                return brent(f, prev_e, e, 1e-14 * spec.v0, 200);
            }
        }
        prev_e = e;
        prev_r = r;
    }
    Err(Error::NoSuchLevel(format!(
        "{parity:?} level {level_index} not found below V0 = {} (found {found})",
        spec.v0
    )))
}

fn refine(spec: &DoubleWellSpec, parity: Parity, seed: Complex64, config: &RootFindConfig) -> Result<Complex64> {
    let (psi, dpsi) = outer_edge_state(spec, parity, seed);
    let scale = dpsi.norm() + (outer_kappa(spec, seed) * psi).norm();
    if !(scale > 0.0) || !scale.is_finite() {
        return domain(format!("residual scale is degenerate at {seed}"));
    }
    let accept = RESIDUAL_CHECK.max(config.tolerance);
    let root = find_root_complex(|e| parity_residual(spec, parity, e) / scale, seed, config)
        .or_else(|err| match err {
            // roundoff floor above the tolerance is still a converged root
            Error::Convergence { last, .. } if parity_residual_scaled(spec, parity, last) <= accept => Ok(last),
            other => Err(other),
        })?;
    let check = parity_residual_scaled(spec, parity, root);
    if check > accept {
        return Err(Error::Convergence {
            last: root,
            residual: check,
            iterations: config.max_iterations,
        });
    }
    Ok(root)
}

fn checked_level(spec: &DoubleWellSpec, parity: Parity, e: Complex64, level_index: u32) -> Result<QuasiBoundLevel> {
    if !(e.re > 0.0 && e.re < spec.v0) {
        return Err(Error::NoSuchLevel(format!(
            "{parity:?} level {level_index} left the well window (E = {e})"
        )));
    }
    Ok(QuasiBoundLevel::from_eigenvalue(parity, e, level_index))
}

/// Quasi-bound level by continuation: the lossless root is found by real
/// bracketing, then `(V1, V2)` is ramped to its target with Newton refinement
/// at every step.
pub fn solve_level(spec: &DoubleWellSpec, parity: Parity, level_index: u32) -> Result<QuasiBoundLevel> {
    solve_level_with(spec, parity, level_index, &DEFAULT_LEVEL_SOLVER)
}

pub fn solve_level_with(
    spec: &DoubleWellSpec,
    parity: Parity,
    level_index: u32,
    config: &RootFindConfig,
) -> Result<QuasiBoundLevel> {
    spec.validate()?;
    config.validate()?;
    if level_index < 1 {
        return domain("level_index must be >= 1");
    }
    let seed = hermitian_seed(spec, parity, level_index)?;
    let mut e = Complex64::new(seed, 0.0);
    if !spec.is_hermitian() {
        e = ramp_losses(spec, parity, e, config)?;
    }
    checked_level(spec, parity, e, level_index)
}

fn ramp_losses(spec: &DoubleWellSpec, parity: Parity, mut e: Complex64, config: &RootFindConfig) -> Result<Complex64> {
    let mut t = 0.0;
    let mut dt = 1.0 / RAMP_STEPS as f64;
    let mut cuts = 0;
    while t < 1.0 {
        let next = (t + dt).min(1.0);
        match refine(&spec.with_loss_fraction(next), parity, e, config) {
            Ok(root) => {
                e = root;
                t = next;
            }
            Err(_) if cuts < MAX_RAMP_BISECTIONS => {
                dt *= 0.5;
                cuts += 1;
            }
            Err(_) => return Err(Error::Continuation { last_good: t }),
        }
    }
    Ok(e)
}

/// Newton refinement of a level from an explicit seed (warm start).
pub fn solve_level_from(
    spec: &DoubleWellSpec,
    parity: Parity,
    level_index: u32,
    seed: Complex64,
) -> Result<QuasiBoundLevel> {
    solve_level_from_with(spec, parity, level_index, seed, &DEFAULT_LEVEL_SOLVER)
}

fn solve_level_from_with(
    spec: &DoubleWellSpec,
    parity: Parity,
    level_index: u32,
    seed: Complex64,
    config: &RootFindConfig,
) -> Result<QuasiBoundLevel> {
    spec.validate()?;
    let e = refine(spec, parity, seed, config)?;
    checked_level(spec, parity, e, level_index)
}

pub fn doublet(spec: &DoubleWellSpec, level_index: u32) -> Result<DoubletResult> {
    doublet_with(spec, level_index, &DEFAULT_LEVEL_SOLVER)
}

pub fn doublet_with(spec: &DoubleWellSpec, level_index: u32, config: &RootFindConfig) -> Result<DoubletResult> {
    let s = solve_level_with(spec, Parity::Even, level_index, config)?;
    let a = solve_level_with(spec, Parity::Odd, level_index, config)?;
    Ok(DoubletResult::new(s, a))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub d: f64,
    pub result: Result<DoubletResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubletSweep {
    pub level_index: u32,
    pub points: Vec<SweepPoint>,
}

impl DoubletSweep {
    pub fn successes(&self) -> impl Iterator<Item = (f64, &DoubletResult)> {
        self.points.iter().filter_map(|p| p.result.as_ref().ok().map(|r| (p.d, r)))
    }

    pub fn success_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.successes().count() as f64 / self.points.len() as f64
    }

    /// Largest finite `γ_S/γ_A` and its `d`.
    pub fn peak_ratio(&self) -> Option<(f64, f64)> {
        self.successes()
            .filter(|(_, r)| r.width_ratio.is_finite())
            .fold(None, |best: Option<(f64, f64)>, (d, r)| match best {
                Some((_, v)) if v >= r.width_ratio => best,
                _ => Some((d, r.width_ratio)),
            })
    }
}

/// Doublet at every `d`, each point warm-started from the previous
/// converged one. A failed point is kept as an error entry and the chain
/// restarts cold at the next `d`.
pub fn sweep_distance(template: &DoubleWellSpec, d_values: &[f64], level_index: u32) -> Result<DoubletSweep> {
    sweep_distance_with(template, d_values, level_index, &DEFAULT_LEVEL_SOLVER)
}

pub fn sweep_distance_with(
    template: &DoubleWellSpec,
    d_values: &[f64],
    level_index: u32,
    config: &RootFindConfig,
) -> Result<DoubletSweep> {
    template.validate()?;
    config.validate()?;
    if level_index < 1 {
        return domain("level_index must be >= 1");
    }
    if d_values.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
        return domain("distances must be finite and >= 0");
    }
    if d_values.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("distances must be strictly increasing");
    }
    let mut points = Vec::with_capacity(d_values.len());
    let mut previous: Option<DoubletResult> = None;
    for &d in d_values {
        let result = template.with_d(d).and_then(|spec| match previous {
            Some(prev) => {
                let warm = solve_level_from_with(&spec, Parity::Even, level_index, prev.level_s.eigenvalue(), config)
                    .and_then(|s| {
                        solve_level_from_with(&spec, Parity::Odd, level_index, prev.level_a.eigenvalue(), config)
                            .map(|a| DoubletResult::new(s, a))
                    });
                warm.or_else(|_| doublet_with(&spec, level_index, config))
            }
            None => doublet_with(&spec, level_index, config),
        });
        previous = result.as_ref().ok().copied();
        points.push(SweepPoint { d, result });
    }
    Ok(DoubletSweep { level_index, points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingFit {
    /// `−slope` of `ln Δε` against `d`.
    pub decay_constant: f64,
    pub prefactor: f64,
    pub rms_residual: f64,
    /// `(d_min, d_max)` of the points actually used.
    pub window: (f64, f64),
    pub points_used: usize,
    /// `ln Δε − fit` at each point used, in order.
    pub residuals: Vec<f64>,
}

/// Least-squares line through `ln Δε` vs `d` for points with
/// `window.0 <= d <= window.1`.
pub fn fit_splitting(d_values: &[f64], delta_eps: &[f64], window: (f64, f64)) -> Result<SplittingFit> {
    if d_values.len() != delta_eps.len() {
        return domain("d and delta_eps lengths differ");
    }
    let selected: Vec<(f64, f64)> = d_values
        .iter()
        .zip(delta_eps)
        .filter(|(&d, _)| d >= window.0 && d <= window.1)
        .map(|(&d, &e)| (d, e))
        .collect();
    if selected.len() < 3 {
        return domain(format!("need >= 3 points in the fit window, got {}", selected.len()));
    }
    if let Some((d, e)) = selected.iter().find(|(_, e)| !(*e > 0.0)) {
        return domain(format!("non-positive splitting {e} at d = {d} inside the fit window"));
    }
    let n = selected.len() as f64;
    let xs: Vec<f64> = selected.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = selected.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return domain("fit window has no spread in d");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    Ok(SplittingFit {
        decay_constant: -slope,
        prefactor: intercept.exp(),
        rms_residual: rms,
        window: (xs[0], xs[xs.len() - 1]),
        points_used: selected.len(),
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSplittingFit {
    pub fit: SplittingFit,
    /// Mean doublet energy over the converged points.
    pub mean_energy: f64,
    /// `Re sqrt(Vb + iV1 − ε̄)`.
    pub kappa_bar: f64,
}

/// Splitting fit over the tunnelling region `κ̄_r d ≥ 1` of a sweep.
///
/// Only the leading run of positive splittings above the numerical floor
/// enters the fit; past the first sign change of `Δε` the doublet is inside
/// its ripple and no longer exponential.
pub fn fit_sweep_splitting(template: &DoubleWellSpec, sweep: &DoubletSweep) -> Result<SweepSplittingFit> {
    let converged: Vec<(f64, DoubletResult)> = sweep.successes().map(|(d, r)| (d, *r)).collect();
    if converged.is_empty() {
        return domain("no converged sweep points to fit");
    }
    let mean_energy = converged.iter().map(|(_, r)| r.mean_energy()).sum::<f64>() / converged.len() as f64;
    let kappa_bar = barrier_kappa(template, Complex64::new(mean_energy, 0.0)).re;
    let d_start = 1.0 / kappa_bar;
    let floor = 1e-9 * mean_energy.abs().max(1.0);
    let mut ds = Vec::new();
    let mut des = Vec::new();
    for (d, r) in converged.iter().filter(|(d, _)| *d >= d_start) {
        if !(r.delta_eps > floor) {
            break;
        }
        ds.push(*d);
        des.push(r.delta_eps);
    }
    let window = match (ds.first(), ds.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return domain("no positive splittings in the kappa d >= 1 window"),
    };
    Ok(SweepSplittingFit {
        fit: fit_splitting(&ds, &des, window)?,
        mean_energy,
        kappa_bar,
    })
}

/// Maps a quantum-model eigenvalue onto an electromagnetic line through
/// `(f − iγ/2)_EM = scale · sqrt(E_QM)`.
pub fn qm_to_em(e_qm: Complex64, frequency_scale_ghz: f64) -> Result<ResonanceLine> {
    if !(frequency_scale_ghz > 0.0) {
        return domain("frequency scale must be positive");
    }
    if e_qm.im > 0.0 {
        return Err(Error::Gain(e_qm));
    }
    if !(e_qm.re > 0.0) {
        return domain(format!("energy must have positive real part, got {e_qm}"));
    }
    let w = sqrt_decaying(e_qm) * frequency_scale_ghz;
    Ok(ResonanceLine::new(w.re, -2.0 * w.im + 0.0))
}

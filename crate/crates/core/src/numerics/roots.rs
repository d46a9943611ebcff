use num_complex::Complex64;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFindConfig {
    /// Target `|residual|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relative step for the numerical derivative, scaled by `max(1, |z|)`.
    pub derivative_step: f64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 100,
            derivative_step: 1e-7,
        }
    }
}

impl RootFindConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return domain(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.max_iterations < 1 {
            return domain("max_iterations must be at least 1");
        }
        if !(self.derivative_step > 0.0) {
            return domain("derivative_step must be positive");
        }
        Ok(())
    }
}

/// Newton iteration with a central-difference derivative and step halving
/// when a full step does not reduce `|residual|`.
pub fn find_root_complex<F>(residual: F, seed: Complex64, config: &RootFindConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    config.validate()?;
    let mut z = seed;
    let mut fz = residual(z);
    if !is_finite(fz) {
        return domain(format!("residual is not finite at seed {seed}"));
    }
    for _ in 0..config.max_iterations {
        if fz.norm() <= config.tolerance {
            return Ok(z);
        }
        let h = config.derivative_step * z.norm().max(1.0);
        let dfz = (residual(z + h) - residual(z - h)) / (2.0 * h);
        if dfz.norm() == 0.0 || !is_finite(dfz) {
            break;
        }
        let step = fz / dfz;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = z - step * scale;
            let ft = residual(trial);
            if is_finite(ft) && ft.norm() < fz.norm() {
                z = trial;
                fz = ft;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fz.norm() <= config.tolerance {
        return Ok(z);
    }
    Err(Error::Convergence {
        last: z,
        residual: fz.norm(),
        iterations: config.max_iterations,
    })
}

/// Axis-aligned box in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl ComplexBox {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
        }
    }
}

/// Local minima of `|residual|` on an `nx × ny` grid over `rect`, sorted by
/// ascending `|residual|` (row-major order breaks ties).
pub fn scan_seeds<F>(residual: F, rect: ComplexBox, grid: (usize, usize)) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
{
    let (nx, ny) = grid;
    if nx < 2 || ny < 2 {
        return domain(format!("scan grid must be at least 2x2, got {nx}x{ny}"));
    }
    if !(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min) {
        return domain("empty scan box");
    }
    let dx = (rect.re_max - rect.re_min) / (nx - 1) as f64;
    let dy = (rect.im_max - rect.im_min) / (ny - 1) as f64;
    let point = |i: usize, j: usize| Complex64::new(rect.re_min + i as f64 * dx, rect.im_min + j as f64 * dy);

    // row-major: j (imaginary) is the row, i the column
    let mut mag = vec![f64::INFINITY; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let v = residual(point(i, j)).norm();
            mag[j * nx + i] = if v.is_finite() { v } else { f64::INFINITY };
        }
    }

    let mut seeds: Vec<(f64, usize)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let here = mag[j * nx + i];
            if !here.is_finite() {
                continue;
            }
            let mut is_min = true;
            'nb: for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    if mag[jj as usize * nx + ii as usize] < here {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                seeds.push((here, j * nx + i));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(seeds
        .into_iter()
        .map(|(_, idx)| point(idx % nx, idx / nx))
        .collect())
}

/// Brent's method on a bracket with a sign change.
pub fn brent<F>(f: F, lo: f64, hi: f64, xtol: f64, max_iterations: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return domain(format!("no sign change on [{lo}, {hi}]"));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Convergence {
        last: Complex64::new(b, 0.0),
        residual: fb.abs(),
        iterations: max_iterations,
    })
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

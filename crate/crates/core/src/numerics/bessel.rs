//! Bessel functions of integer order and real argument.
//!
//! `J_m` uses the ascending power series for `x <= 2` and Miller's backward
//! recurrence normalised by `J_0 + 2 Σ J_2k = 1` above that. `K_0`, `K_1` use
//! their logarithmic series for `x <= 2` and Steed's continued fraction above,
//! with upward recurrence to higher orders (stable for `K`). `I_m` is a plain
//! power series; all of its terms are positive so there is no cancellation.

use crate::error::{domain, Result};

pub const MAX_ORDER: u32 = 12;
pub const J_MAX_ARG: f64 = 100.0;
pub const K_MIN_ARG: f64 = 1e-6;
pub const K_MAX_ARG: f64 = 100.0;

const SERIES_CROSSOVER: f64 = 2.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `J_order(x)` on the validated range `order <= 12`, `0 <= x <= 100`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_j(order, x)?;
    Ok(jn(order, x))
}

/// `J'_order(x) = (J_{order-1}(x) - J_{order+1}(x)) / 2`.
pub fn bessel_j_prime(order: u32, x: f64) -> Result<f64> {
    check_j(order, x)?;
    Ok(jn_prime(order, x))
}

/// `K_order(x)` on `order <= 12`, `1e-6 <= x <= 100`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    check_k(order, x)?;
    Ok(kn(order, x))
}

/// `K'_order(x) = -(K_{order-1}(x) + K_{order+1}(x)) / 2`.
pub fn bessel_k_prime(order: u32, x: f64) -> Result<f64> {
    check_k(order, x)?;
    Ok(kn_prime(order, x))
}

/// Modified Bessel function of the first kind, same range as [`bessel_j`].
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_j(order, x)?;
    Ok(in_series(order, x))
}

pub fn bessel_i_prime(order: u32, x: f64) -> Result<f64> {
    check_j(order, x)?;
    let lower = if order == 0 {
        in_series(1, x)
    } else {
        in_series(order - 1, x)
    };
    Ok(0.5 * (lower + in_series(order + 1, x)))
}

fn check_j(order: u32, x: f64) -> Result<()> {
    if order > MAX_ORDER {
        return domain(format!("Bessel order {order} exceeds {MAX_ORDER}"));
    }
    if !(0.0..=J_MAX_ARG).contains(&x) {
        return domain(format!("Bessel argument {x} outside [0, {J_MAX_ARG}]"));
    }
    Ok(())
}

fn check_k(order: u32, x: f64) -> Result<()> {
    if order > MAX_ORDER {
        return domain(format!("Bessel order {order} exceeds {MAX_ORDER}"));
    }
    if x <= 0.0 || !x.is_finite() {
        return domain(format!("K_{order} needs a positive argument, got {x}"));
    }
    if !(K_MIN_ARG..=K_MAX_ARG).contains(&x) {
        return domain(format!("K argument {x} outside [{K_MIN_ARG}, {K_MAX_ARG}]"));
    }
    Ok(())
}

pub(crate) fn jn(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_CROSSOVER {
        jn_series(m, x)
    } else {
        jn_miller(m, x)
    }
}

pub(crate) fn jn_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(m - 1, x) - jn(m + 1, x))
    }
}

pub(crate) fn kn_prime(m: u32, x: f64) -> f64 {
    let lower = if m == 0 { kn(1, x) } else { kn(m - 1, x) };
    -0.5 * (lower + kn(m + 1, x))
}

fn jn_series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=m {
        lead *= half / k as f64;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..60 {
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn jn_miller(m: u32, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let top = (m as f64).max(x);
    let mut start = (top + 25.0 + (40.0 * top).sqrt()) as u32;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-300; // j_k
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // cur is now j_{k-1}
        if (k - 1) == m {
            result = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            result /= RESCALE;
        }
    }
    norm += cur;
    result / norm
}

pub(crate) fn in_series(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=m {
        lead *= half / k as f64;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..500 {
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

pub(crate) fn kn(m: u32, x: f64) -> f64 {
    let (k0, k1) = if x <= SERIES_CROSSOVER {
        k01_series(x)
    } else {
        k01_steed(x)
    };
    match m {
        0 => k0,
        1 => k1,
        _ => {
            let (mut lo, mut hi) = (k0, k1);
            for j in 1..m {
                let next = lo + 2.0 * j as f64 / x * hi;
                lo = hi;
                hi = next;
            }
            hi
        }
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K0 = -(ln(x/2) + gamma) I0 + sum_k H_k t^k / (k!)^2
    let mut k0_tail = 0.0;
    let mut coeff = 1.0; // t^k / (k!)^2
    let mut harmonic = 0.0;
    for k in 1..80 {
        coeff *= t / (k as f64 * k as f64);
        harmonic += 1.0 / k as f64;
        let term = harmonic * coeff;
        k0_tail += term;
        if term <= 1e-17 * k0_tail {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * in_series(0, x) + k0_tail;

    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k (psi(k+1) + psi(k+2)) t^k / (k! (k+1)!)
    let mut sum = 0.0;
    let mut coeff = 1.0; // t^k / (k! (k+1)!)
    let mut psi1 = -EULER_GAMMA; // psi(k+1)
    for k in 0..80 {
        if k > 0 {
            coeff *= t / (k as f64 * (k + 1) as f64);
            psi1 += 1.0 / k as f64;
        }
        let psi2 = psi1 + 1.0 / (k + 1) as f64;
        let term = (psi1 + psi2) * coeff;
        sum += term;
        if k > 2 && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let k1 = 1.0 / x + log_half * in_series(1, x) - 0.25 * x * sum;
    (k0, k1)
}

/// Steed's continued fraction (CF2) for `K_0`, `K_1`; valid for `x >= 2`.
fn k01_steed(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// `J_m(x) = (1/pi) ∫_0^pi cos(m t - x sin t) dt`, trapezoid rule on a
    /// periodic integrand (exponentially convergent).
    fn j_integral(m: u32, x: f64) -> f64 {
        let n = 4000;
        let h = PI / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            sum += w * (m as f64 * t - x * t.sin()).cos();
        }
        sum * h / PI
    }

    #[test]
    fn j_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j_matches_integral_representation() {
        for m in 0..=MAX_ORDER {
            for &x in &[0.3, 1.0, 1.99, 2.01, 5.0, 12.5, 33.0, 64.0, 99.9] {
                let got = bessel_j(m, x).unwrap();
                let want = j_integral(m, x);
                assert!((got - want).abs() < 1e-10, "J_{m}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn j_first_zero_by_series_bisection() {
        // oracle: bracket with the raw power series, independent of the Miller branch
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if jn_series(0, lo) * jn_series(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let zero = 0.5 * (lo + hi);
        assert!((zero - 2.404_825_557_695_773).abs() < 1e-12);
        assert!(bessel_j(0, zero).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn j_recurrence() {
        for m in 1..=8 {
            for &x in &[0.5, 1.0, 5.0, 20.0] {
                let lhs = jn(m - 1, x) + jn(m + 1, x);
                let rhs = 2.0 * m as f64 / x * jn(m, x);
                assert!((lhs - rhs).abs() < 1e-9, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn k_large_argument_asymptote() {
        let x: f64 = 20.0;
        let asym = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 - 1.0 / (8.0 * x));
        let got = bessel_k(0, x).unwrap();
        assert!(((got - asym) / got).abs() < 1e-3);
    }

    #[test]
    fn k_wronskian() {
        for m in 0..=MAX_ORDER {
            for &x in &[0.5, 2.0, 10.0] {
                let w = bessel_k(m, x).unwrap() * bessel_i_prime(m, x).unwrap()
                    - bessel_k_prime(m, x).unwrap() * bessel_i(m, x).unwrap();
                assert!((w * x - 1.0).abs() < 1e-9, "m={m} x={x}: x*W = {}", w * x);
            }
        }
    }

    #[test]
    fn k_rejects_nonpositive() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(0, -1.0).is_err());
        assert!(bessel_k(13, 1.0).is_err());
        assert!(bessel_j(13, 1.0).is_err());
        assert!(bessel_j(0, 100.5).is_err());
    }

    #[test]
    fn k_continuous_across_crossover() {
        for m in 0..3 {
            let below = kn(m, SERIES_CROSSOVER);
            let above = kn(m, SERIES_CROSSOVER * (1.0 + 1e-12));
            assert!(((below - above) / below).abs() < 1e-10);
        }
    }
}

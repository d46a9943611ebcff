use num_complex::Complex64;

/// Square root on the "decaying" branch: `Re(w) >= 0`, and `Im(w) >= 0` when
/// `Re(w) == 0`.
///
/// Every wavevector in the crate goes through this, so `exp(-w x)` always
/// decays (or at worst oscillates) for `x > 0`.
pub fn sqrt_decaying(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
        -w
    } else {
        w
    }
}

/// `sinh(z) / z`, entire, with the removable singularity filled in.
pub(crate) fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// `sin(z) / z`, entire.
pub(crate) fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

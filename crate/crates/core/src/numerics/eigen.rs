//! Dense complex eigensolver for small non-Hermitian matrices.
//!
//! Householder reduction to Hessenberg form, single-shift complex QR with
//! Wilkinson shifts down to Schur form `A = Z T Z^H`, then back substitution
//! on `T` for the eigenvectors.

use num_complex::Complex64;

use super::matrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{domain, Error, Result};

pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    /// Unit Euclidean norm, first non-negligible component real positive.
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Sorted by ascending real part, then ascending imaginary part.
    pub pairs: Vec<EigenPair>,
    /// Set when two (nearly) equal eigenvalues came back with (nearly)
    /// parallel eigenvectors, i.e. the matrix is defective to working
    /// precision.
    pub ill_conditioned: bool,
}

impl EigenDecomposition {
    pub fn values(&self) -> Vec<Complex64> {
        self.pairs.iter().map(|p| p.value).collect()
    }
}

pub fn eig_complex_dense(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    if n == 0 {
        return domain("empty matrix");
    }
    if n > MAX_DIM {
        return domain(format!("matrix dimension {n} exceeds {MAX_DIM}"));
    }
    if !h.is_finite() {
        return domain("matrix has non-finite entries");
    }

    let mut t = h.clone();
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut t, &mut z);
    schur(&mut t, &mut z)?;

    let norm = h.frobenius_norm();
    let smin = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for i in j + 1..=k {
                s += t[(j, i)] * y[i];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[j] = -s / d;
        }
        let v = z.mul_vec(&y);
        pairs.push(EigenPair {
            value: lambda,
            vector: normalize_phase(v),
        });
    }

    pairs.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });

    let mut ill_conditioned = false;
    let close = 1e-8 * norm.max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in i + 1..n {
            if (pairs[i].value - pairs[j].value).norm() <= close
                && inner(&pairs[i].vector, &pairs[j].vector).norm() > 1.0 - 1e-6
            {
                ill_conditioned = true;
            }
        }
    }

    Ok(EigenDecomposition {
        pairs,
        ill_conditioned,
    })
}

fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = vec_norm(&v);
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    if let Some(first) = v.iter().find(|x| x.norm() > 1e-10).copied() {
        let phase = first.conj() / first.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
    v
}

fn hessenberg(a: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = a.dim();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = vec_norm(&v);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vnorm;
        }
        // A <- P A, P = I - 2 v v^H acting on rows k+1..n
        for j in 0..n {
            let s: Complex64 = (0..m).map(|i| v[i].conj() * a[(k + 1 + i, j)]).sum();
            for i in 0..m {
                a[(k + 1 + i, j)] -= 2.0 * v[i] * s;
            }
        }
        // A <- A P, Q <- Q P
        for mat in [&mut *a, &mut *q] {
            for i in 0..n {
                let s: Complex64 = (0..m).map(|j| mat[(i, k + 1 + j)] * v[j]).sum();
                for j in 0..m {
                    mat[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

struct Rotation {
    c: f64,
    s: Complex64,
}

impl Rotation {
    /// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
    fn new(a: Complex64, b: Complex64) -> Self {
        let bn = b.norm();
        if bn == 0.0 {
            return Self {
                c: 1.0,
                s: Complex64::new(0.0, 0.0),
            };
        }
        let an = a.norm();
        if an == 0.0 {
            return Self {
                c: 0.0,
                s: b.conj() / bn,
            };
        }
        let r = an.hypot(bn);
        Self {
            c: an / r,
            s: (a / an) * b.conj() / r,
        }
    }

    fn apply_rows(&self, m: &mut ComplexMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let (x, y) = (m[(k, j)], m[(k + 1, j)]);
            m[(k, j)] = self.c * x + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + self.c * y;
        }
    }

    /// Right-multiplies columns `k, k+1` by the conjugate transpose.
    fn apply_cols(&self, m: &mut ComplexMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let (x, y) = (m[(i, k)], m[(i, k + 1)]);
            m[(i, k)] = x * self.c + y * self.s.conj();
            m[(i, k + 1)] = -x * self.s + y * self.c;
        }
    }
}

fn schur(t: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = t.dim();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total = 0usize;
    let max_total = 60 * n;

    loop {
        // locate the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let scale = t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm();
            let scale = if scale == 0.0 { t.frobenius_norm() } else { scale };
            if sub <= eps * scale {
                t[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }

        total += 1;
        iter_since_deflation += 1;
        if total > max_total {
            return Err(Error::Eigen(format!(
                "QR iteration did not converge in {max_total} sweeps"
            )));
        }

        let shift = if iter_since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            t[(hi, hi)] + Complex64::new(t[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(t[(hi - 1, hi - 1)], t[(hi - 1, hi)], t[(hi, hi - 1)], t[(hi, hi)])
        };

        for k in lo..=hi {
            t[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = Rotation::new(t[(k, k)], t[(k + 1, k)]);
            g.apply_rows(t, k, k..n);
            t[(k + 1, k)] = Complex64::new(0.0, 0.0);
            rotations.push(g);
        }
        for (offset, g) in rotations.iter().enumerate() {
            let k = lo + offset;
            g.apply_cols(t, k, 0..(k + 2).min(hi + 1));
            g.apply_cols(z, k, 0..n);
        }
        for k in lo..=hi {
            t[(k, k)] += shift;
        }
    }
    Ok(())
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = 0.5 * (a + d);
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual_ok(h: &ComplexMatrix, dec: &EigenDecomposition) {
        let norm = h.frobenius_norm();
        for p in &dec.pairs {
            let hv = h.mul_vec(&p.vector);
            let r: f64 = hv
                .iter()
                .zip(&p.vector)
                .map(|(a, b)| (a - p.value * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r <= 1e-10 * norm, "residual {r} for {}", p.value);
            assert!((vec_norm(&p.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identity() {
        let h = ComplexMatrix::identity(3);
        let dec = eig_complex_dense(&h).unwrap();
        for p in &dec.pairs {
            assert!((p.value - c(1.0, 0.0)).norm() < 1e-14);
        }
        residual_ok(&h, &dec);
    }

    #[test]
    fn tunneling_pair() {
        let h = ComplexMatrix::from_real_rows(&[vec![0.0, -0.5], vec![-0.5, 0.0]]).unwrap();
        let dec = eig_complex_dense(&h).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((dec.pairs[0].value - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((dec.pairs[1].value - c(0.5, 0.0)).norm() < 1e-14);
        assert!((dec.pairs[0].vector[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((dec.pairs[0].vector[1] - c(s, 0.0)).norm() < 1e-12);
        assert!((dec.pairs[1].vector[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((dec.pairs[1].vector[1] - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, -0.3)]]).unwrap();
        let dec = eig_complex_dense(&h).unwrap();
        assert_eq!(dec.pairs[0].value, c(2.0, -0.3));
        assert_eq!(dec.pairs[0].vector, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let h = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let dec = eig_complex_dense(&h).unwrap();
        assert!(dec.ill_conditioned);
    }

    #[test]
    fn upper_triangular_already_schur() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(3.0, -1.0), c(1.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.5)],
        ])
        .unwrap();
        let dec = eig_complex_dense(&h).unwrap();
        let vals = dec.values();
        assert!((vals[0] - c(-2.0, 0.5)).norm() < 1e-13);
        assert!((vals[1] - c(1.0, 0.0)).norm() < 1e-13);
        assert!((vals[2] - c(3.0, -1.0)).norm() < 1e-13);
        residual_ok(&h, &dec);
    }

    #[test]
    fn rejects_oversized_and_nonfinite() {
        assert!(eig_complex_dense(&ComplexMatrix::identity(17)).is_err());
        let mut h = ComplexMatrix::identity(2);
        h[(0, 1)] = c(f64::NAN, 0.0);
        assert!(eig_complex_dense(&h).is_err());
    }
}

//! Three disks on an equilateral triangle, one of them pushed outward along
//! its bisectrix.

use num_complex::Complex64;

use super::{build_heff, uniform_weight, CouplingRule, Couplings, DecayChannel, SiteNetwork};
use crate::doublewell::qm_to_em;
use crate::error::{domain, Error, Result};
use crate::numerics::{eig_complex_dense, ComplexMatrix};

/// Measured TM₀₁₁ line that the single-site energy is mapped onto.
pub const REFERENCE_FREQUENCY_GHZ: f64 = 9.45;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleParams {
    pub side_s: f64,
    pub t0: f64,
    pub kappa: Complex64,
    pub gamma_common: f64,
    pub gamma_individual: f64,
    pub site_energy: f64,
    /// Relative change of the common-channel amplitude on the shifted disk
    /// per unit `b`.
    pub channel_shift_per_b: f64,
}

impl Default for TriangleParams {
    fn default() -> Self {
        Self {
            side_s: 1.2,
            t0: 1.0,
            kappa: Complex64::new(2.0, 0.0),
            gamma_common: 0.1,
            gamma_individual: 1e-4,
            site_energy: 10.0,
            channel_shift_per_b: 0.0,
        }
    }
}

impl TriangleParams {
    pub fn validate(&self) -> Result<()> {
        CouplingRule {
            t0: self.t0,
            kappa: self.kappa,
        }
        .validate()?;
        if !(self.side_s > 1.0) || !self.side_s.is_finite() {
            return Err(Error::Geometry(format!(
                "side {} leaves no gap between unit disks",
                self.side_s
            )));
        }
        if !(self.gamma_common >= 0.0 && self.gamma_individual >= 0.0) {
            return domain("decay rates must be non-negative");
        }
        if !self.site_energy.is_finite() || !self.channel_shift_per_b.is_finite() {
            return domain("site energy and channel shift must be finite");
        }
        Ok(())
    }

    /// Frequency scale (GHz per unit of `sqrt(E)`) that puts the bare site
    /// energy at the reference line.
    pub fn default_frequency_scale(&self) -> f64 {
        REFERENCE_FREQUENCY_GHZ / self.site_energy.sqrt()
    }
}

/// Sites 1 and 2 at `(∓s/2, 0)`, site 3 at `(0, s√3/2 + b)`.
pub fn triangle_network(params: &TriangleParams, shift_b: f64) -> Result<SiteNetwork> {
    params.validate()?;
    if !shift_b.is_finite() {
        return domain("shift must be finite");
    }
    let s = params.side_s;
    let positions = vec![[-0.5 * s, 0.0], [0.5 * s, 0.0], [0.0, 0.5 * 3f64.sqrt() * s + shift_b]];
    let mut common = DecayChannel::common(3, params.gamma_common);
    common.amplitudes[2] *= 1.0 + params.channel_shift_per_b * shift_b;
    let mut channels = vec![common];
    channels.extend((0..3).map(|i| DecayChannel::individual(3, i, params.gamma_individual)));
    SiteNetwork::new(
        vec![params.site_energy; 3],
        Couplings::Geometric {
            positions,
            rule: CouplingRule {
                t0: params.t0,
                kappa: params.kappa,
            },
        },
        channels,
    )
    .map_err(|e| match e {
        Error::Geometry(msg) => Error::Geometry(format!("b = {shift_b}: {msg}")),
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBreakRow {
    /// Mirror-even member of the dark doublet, the one the shift mixes with
    /// the bright state.
    pub sharp_eigenvalue: Complex64,
    pub sharp_width: f64,
    pub sharp_q: f64,
    /// Weight of the sharp mode outside the fully symmetric subspace.
    pub sharp_irrep_score: f64,
    pub bright_eigenvalue: Complex64,
    pub bright_width: f64,
    /// Mirror-odd member of the dark doublet.
    pub mid_eigenvalue: Complex64,
    pub mid_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBreakPoint {
    pub b: f64,
    pub result: Result<SymmetryBreakRow>,
}

/// Triangle spectrum along a sequence of shifts. The shift keeps the mirror
/// through disk 3, so modes are resolved in the mirror-adapted basis:
/// `(1, −1, 0)/√2` on its own and a 2×2 block on `{(1, 1, 0)/√2, (0, 0, 1)}`.
pub fn symmetry_break_sweep(params: &TriangleParams, b_values: &[f64], frequency_scale_ghz: f64) -> Result<Vec<SymmetryBreakPoint>> {
    params.validate()?;
    if !(frequency_scale_ghz > 0.0) {
        return domain("frequency scale must be positive");
    }
    if b_values.iter().any(|&b| !(b >= 0.0) || !b.is_finite()) {
        return domain("shifts must be finite and >= 0");
    }
    if b_values.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("shifts must be strictly increasing");
    }
    Ok(b_values
        .iter()
        .map(|&b| SymmetryBreakPoint {
            b,
            result: triangle_network(params, b).and_then(|net| mirror_resolved(&net, frequency_scale_ghz)),
        })
        .collect())
}

fn mirror_resolved(network: &SiteNetwork, frequency_scale_ghz: f64) -> Result<SymmetryBreakRow> {
    let h = build_heff(network)?;
    let scale = h.frobenius_norm();
    let mirror_gap = (h[(0, 0)] - h[(1, 1)]).norm() + (h[(0, 2)] - h[(1, 2)]).norm() + (h[(2, 0)] - h[(2, 1)]).norm();
    if mirror_gap > 1e-13 * scale {
        return domain("network is not symmetric under exchange of sites 1 and 2");
    }
    let r2 = std::f64::consts::SQRT_2;
    let odd = h[(0, 0)] - h[(0, 1)];
    let block = ComplexMatrix::from_rows(&[
        vec![h[(0, 0)] + h[(0, 1)], r2 * h[(0, 2)]],
        vec![r2 * h[(2, 0)], h[(2, 2)]],
    ])?;
    let even = eig_complex_dense(&block)?;
    let modes: Vec<(Complex64, f64)> = even
        .pairs
        .iter()
        .map(|p| {
            let a = p.vector[0] / r2;
            (p.value, uniform_weight(&[a, a, p.vector[1]]))
        })
        .collect();
    let (bright, sharp) = if modes[0].1 >= modes[1].1 {
        (modes[0], modes[1])
    } else {
        (modes[1], modes[0])
    };
    let line = qm_to_em(sharp.0, frequency_scale_ghz)?;
    Ok(SymmetryBreakRow {
        sharp_eigenvalue: sharp.0,
        sharp_width: -2.0 * sharp.0.im,
        sharp_q: line.q_factor,
        sharp_irrep_score: 1.0 - sharp.1,
        bright_eigenvalue: bright.0,
        bright_width: -2.0 * bright.0.im,
        mid_eigenvalue: odd,
        mid_width: -2.0 * odd.im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_couplings_are_equal() {
        let net = triangle_network(&TriangleParams::default(), 0.0).unwrap();
        let t = net.coupling_matrix();
        let t12 = t[(0, 1)];
        for (i, j) in [(0, 2), (1, 2)] {
            assert!((t[(i, j)] - t12).norm() / t12.norm() < 1e-12);
        }
    }

    #[test]
    fn shifted_couplings_follow_geometry() {
        let p = TriangleParams::default();
        let b = 0.05;
        let t = triangle_network(&p, b).unwrap().coupling_matrix();
        assert_eq!(t[(0, 2)], t[(1, 2)]);
        let h = 0.5 * 3f64.sqrt() * p.side_s;
        let dist13 = (0.25 * p.side_s * p.side_s + (h + b) * (h + b)).sqrt();
        let expect = (-p.kappa.re * (dist13 - p.side_s)).exp();
        assert!(((t[(0, 2)] / t[(0, 1)]).re - expect).abs() < 1e-12);
    }

    #[test]
    fn too_small_triangle() {
        let p = TriangleParams {
            side_s: 1.0,
            ..TriangleParams::default()
        };
        assert!(matches!(triangle_network(&p, 0.0), Err(Error::Geometry(_))));
        // pulling disk 3 in far enough makes it overlap its neighbours
        let err = triangle_network(&TriangleParams::default(), -0.6).unwrap_err();
        assert!(matches!(err, Error::Geometry(ref m) if m.contains("b = -0.6")));
    }

    #[test]
    fn sweep_input_checks() {
        let p = TriangleParams::default();
        assert!(symmetry_break_sweep(&p, &[0.1, 0.05], 3.0).is_err());
        assert!(symmetry_break_sweep(&p, &[-0.1, 0.05], 3.0).is_err());
        assert!(symmetry_break_sweep(&p, &[0.0], 0.0).is_err());
    }

    #[test]
    fn unshifted_row() {
        let p = TriangleParams::default();
        let rows = symmetry_break_sweep(&p, &[0.0], p.default_frequency_scale()).unwrap();
        let row = rows[0].result.as_ref().unwrap();
        assert!((row.sharp_width - p.gamma_individual).abs() < 1e-10);
        assert!((row.mid_width - p.gamma_individual).abs() < 1e-10);
        assert!((row.bright_width - (3.0 * p.gamma_common + p.gamma_individual)).abs() < 1e-10);
        assert!(row.sharp_irrep_score >= 0.999);
    }
}

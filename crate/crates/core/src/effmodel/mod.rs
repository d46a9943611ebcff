//! Non-Hermitian effective Hamiltonians for small networks of coupled disks.
//!
//! `H = diag(ε₀) − T − (i/2) Γ` with `Γ = Σ_c w_c w_c†`. Each site stands for
//! one single-disk mode; a common channel (the metal plates) couples to every
//! site coherently, individual channels (dielectric loss) to one site each.

mod triangle;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{eig_complex_dense, eigen::MAX_DIM, ComplexMatrix};

pub use triangle::{symmetry_break_sweep, triangle_network, SymmetryBreakPoint, SymmetryBreakRow, TriangleParams};

/// `T_ij = T0 · exp(−kappa · (|r_i − r_j| − 1))`, distances in disk diameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRule {
    pub t0: f64,
    pub kappa: Complex64,
}

impl CouplingRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0) || !self.t0.is_finite() {
            return domain(format!("T0 must be positive, got {}", self.t0));
        }
        if !(self.kappa.re > 0.0) || !self.kappa.im.is_finite() || !self.kappa.re.is_finite() {
            return domain(format!("kappa must have a positive real part, got {}", self.kappa));
        }
        Ok(())
    }

    /// Coupling at centre distance `dist` (edge gap `dist − 1`).
    pub fn coupling(&self, dist: f64) -> Complex64 {
        self.t0 * (-self.kappa * (dist - 1.0)).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Couplings {
    Geometric { positions: Vec<[f64; 2]>, rule: CouplingRule },
    /// Symmetric matrix with zero diagonal.
    Explicit(ComplexMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Common,
    Individual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayChannel {
    pub kind: ChannelKind,
    pub amplitudes: Vec<Complex64>,
}

impl DecayChannel {
    /// Equal amplitudes `√γ` on all `n` sites.
    pub fn common(n: usize, gamma: f64) -> Self {
        Self {
            kind: ChannelKind::Common,
            amplitudes: vec![Complex64::new(gamma.max(0.0).sqrt(), 0.0); n],
        }
    }

    /// `√γ` on `site` only.
    pub fn individual(n: usize, site: usize, gamma: f64) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[site] = Complex64::new(gamma.max(0.0).sqrt(), 0.0);
        Self {
            kind: ChannelKind::Individual,
            amplitudes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteNetwork {
    pub site_energies: Vec<f64>,
    pub couplings: Couplings,
    pub channels: Vec<DecayChannel>,
}

impl SiteNetwork {
    pub fn new(site_energies: Vec<f64>, couplings: Couplings, channels: Vec<DecayChannel>) -> Result<Self> {
        let net = Self {
            site_energies,
            couplings,
            channels,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn len(&self) -> usize {
        self.site_energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.site_energies.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 || n > MAX_DIM {
            return domain(format!("network size must be 1..={MAX_DIM}, got {n}"));
        }
        if self.site_energies.iter().any(|e| !e.is_finite()) {
            return domain("site energies must be finite");
        }
        match &self.couplings {
            Couplings::Geometric { positions, rule } => {
                rule.validate()?;
                if positions.len() != n {
                    return domain(format!("{} positions for {n} sites", positions.len()));
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let dist = distance(positions[i], positions[j]);
                        if !(dist > 1.0) {
                            return Err(Error::Geometry(format!(
                                "disks {} and {} overlap (centre distance {dist})",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
            Couplings::Explicit(t) => {
                if t.dim() != n {
                    return domain(format!("coupling matrix is {0}x{0} for {n} sites", t.dim()));
                }
                if !t.is_finite() {
                    return domain("coupling matrix must be finite");
                }
                for i in 0..n {
                    if t[(i, i)] != Complex64::new(0.0, 0.0) {
                        return domain("coupling matrix must have a zero diagonal");
                    }
                    for j in i + 1..n {
                        if t[(i, j)] != t[(j, i)] {
                            return domain(format!("coupling matrix is not symmetric at ({}, {})", i + 1, j + 1));
                        }
                    }
                }
            }
        }
        for c in &self.channels {
            if c.amplitudes.len() != n {
                return domain(format!("channel has {} amplitudes for {n} sites", c.amplitudes.len()));
            }
            if c.amplitudes.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
                return domain("channel amplitudes must be finite");
            }
        }
        Ok(())
    }

    pub fn coupling_matrix(&self) -> ComplexMatrix {
        match &self.couplings {
            Couplings::Explicit(t) => t.clone(),
            Couplings::Geometric { positions, rule } => {
                let n = positions.len();
                let mut t = ComplexMatrix::zeros(n);
                for i in 0..n {
                    for j in i + 1..n {
                        let v = rule.coupling(distance(positions[i], positions[j]));
                        t[(i, j)] = v;
                        t[(j, i)] = v;
                    }
                }
                t
            }
        }
    }

    pub fn decay_matrix(&self) -> ComplexMatrix {
        let n = self.len();
        let mut g = ComplexMatrix::zeros(n);
        for c in &self.channels {
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] += c.amplitudes[i] * c.amplitudes[j].conj();
                }
            }
        }
        g
    }
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn build_heff(network: &SiteNetwork) -> Result<ComplexMatrix> {
    network.validate()?;
    let n = network.len();
    let t = network.coupling_matrix();
    let g = network.decay_matrix();
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = -t[(i, j)] - Complex64::new(0.0, 0.5) * g[(i, j)];
        }
        h[(i, i)] += network.site_energies[i];
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryGroup {
    Z2,
    C3v,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Irrep {
    Even,
    Odd,
    A1,
    /// Never produced by the three-site permutation representation.
    A2,
    E,
    Mixed,
}

impl std::fmt::Display for Irrep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Irrep::Even => "even",
            Irrep::Odd => "odd",
            Irrep::A1 => "A1",
            Irrep::A2 => "A2",
            Irrep::E => "E",
            Irrep::Mixed => "mixed",
        })
    }
}

/// Irrep label and squared projection norm. For `Mixed` the score is the
/// weight on the fully symmetric subspace (even for Z2, A1 for C3v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryClass {
    pub label: Irrep,
    pub score: f64,
}

const LABEL_THRESHOLD: f64 = 0.99;

/// Weight of a vector on the uniform direction `(1, …, 1)/√N`.
pub fn uniform_weight(v: &[Complex64]) -> f64 {
    let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if n2 == 0.0 {
        return 0.0;
    }
    let s: Complex64 = v.iter().sum();
    s.norm_sqr() / (v.len() as f64 * n2)
}

pub fn classify_symmetry(vector: &[Complex64], group: SymmetryGroup) -> Result<SymmetryClass> {
    let need = match group {
        SymmetryGroup::Z2 => 2,
        SymmetryGroup::C3v => 3,
    };
    if vector.len() != need {
        return domain(format!("{group:?} classification needs {need} components, got {}", vector.len()));
    }
    if vector.iter().all(|z| z.norm() == 0.0) {
        return domain("cannot classify the zero vector");
    }
    // symmetric weight in both groups is the uniform-vector projection
    let sym = uniform_weight(vector);
    let anti = 1.0 - sym;
    let (sym_label, anti_label) = match group {
        SymmetryGroup::Z2 => (Irrep::Even, Irrep::Odd),
        SymmetryGroup::C3v => (Irrep::A1, Irrep::E),
    };
    Ok(if sym > LABEL_THRESHOLD {
        SymmetryClass {
            label: sym_label,
            score: sym,
        }
    } else if anti > LABEL_THRESHOLD {
        SymmetryClass {
            label: anti_label,
            score: anti,
        }
    } else {
        SymmetryClass {
            label: Irrep::Mixed,
            score: sym,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    /// `f − iγ/2` in model units.
    pub eigenvalue: Complex64,
    pub width: f64,
    pub symmetry: SymmetryClass,
    pub vector: Vec<Complex64>,
}

/// Eigenmodes sorted by ascending real part. Two sites are classified under
/// Z2, three under C3v, anything else is reported as mixed with its uniform
/// weight.
pub fn spectrum(network: &SiteNetwork) -> Result<Vec<ModeReport>> {
    let h = build_heff(network)?;
    let decomposition = eig_complex_dense(&h)?;
    let group = match network.len() {
        2 => Some(SymmetryGroup::Z2),
        3 => Some(SymmetryGroup::C3v),
        _ => None,
    };
    let mut modes = decomposition
        .pairs
        .into_iter()
        .map(|p| {
            let symmetry = match group {
                Some(g) => classify_symmetry(&p.vector, g)?,
                None => SymmetryClass {
                    label: Irrep::Mixed,
                    score: uniform_weight(&p.vector),
                },
            };
            Ok(ModeReport {
                eigenvalue: p.value,
                width: -2.0 * p.value.im,
                symmetry,
                vector: p.vector,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    modes.sort_by(|a, b| {
        a.eigenvalue
            .re
            .total_cmp(&b.eigenvalue.re)
            .then(a.eigenvalue.im.total_cmp(&b.eigenvalue.im))
    });
    Ok(modes)
}

/// Smallest width; ties go to the lower real part.
pub fn sharpest_mode(modes: &[ModeReport]) -> Option<&ModeReport> {
    modes.iter().min_by(|a, b| {
        a.width
            .total_cmp(&b.width)
            .then(a.eigenvalue.re.total_cmp(&b.eigenvalue.re))
    })
}

/// Two sites at energy `ε₀` with hopping `T`, a common channel `γ_c` and an
/// individual channel `γ_d` per site.
pub fn two_site_network(eps0: f64, t: f64, gamma_common: f64, gamma_individual: f64) -> Result<SiteNetwork> {
    if !(gamma_common >= 0.0 && gamma_individual >= 0.0) {
        return domain("decay rates must be non-negative");
    }
    let tm = ComplexMatrix::from_real_rows(&[vec![0.0, t], vec![t, 0.0]])?;
    let mut channels = vec![DecayChannel::common(2, gamma_common)];
    channels.extend((0..2).map(|i| DecayChannel::individual(2, i, gamma_individual)));
    SiteNetwork::new(vec![eps0, eps0], Couplings::Explicit(tm), channels)
}

/// Closed-form two-site doublet: `(ε₀ − T, 2γ_c + γ_d)` for the symmetric
/// mode and `(ε₀ + T, γ_d)` for the antisymmetric one.
pub fn two_level_closed_form(eps0: f64, t: f64, gamma_common: f64, gamma_individual: f64) -> ((f64, f64), (f64, f64)) {
    (
        (eps0 - t, 2.0 * gamma_common + gamma_individual),
        (eps0 + t, gamma_individual),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_site_with_loss() {
        let net = SiteNetwork::new(
            vec![10.0],
            Couplings::Explicit(ComplexMatrix::zeros(1)),
            vec![DecayChannel::individual(1, 0, 0.3)],
        )
        .unwrap();
        let h = build_heff(&net).unwrap();
        assert!((h[(0, 0)] - c(10.0, -0.15)).norm() < 1e-15);
    }

    #[test]
    fn two_site_matrix() {
        let (eps0, t, gc) = (10.0, 0.7, 0.2);
        let net = two_site_network(eps0, t, gc, 0.0).unwrap();
        let h = build_heff(&net).unwrap();
        assert!((h[(0, 0)] - c(eps0, -gc / 2.0)).norm() < 1e-15);
        assert!((h[(0, 1)] - c(-t, -gc / 2.0)).norm() < 1e-15);
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }

    #[test]
    fn exponential_rule_is_linear_in_log() {
        let rule = CouplingRule { t0: 2.0, kappa: c(3.0, 0.0) };
        let l1 = (rule.t0 / rule.coupling(1.2).re).ln();
        let l3 = (rule.t0 / rule.coupling(1.6).re).ln();
        assert!((l3 - 3.0 * l1).abs() < 1e-12);
    }

    #[test]
    fn overlapping_disks_rejected() {
        let rule = CouplingRule { t0: 1.0, kappa: c(2.0, 0.0) };
        let err = SiteNetwork::new(
            vec![1.0, 1.0],
            Couplings::Geometric {
                positions: vec![[0.0, 0.0], [0.9, 0.0]],
                rule,
            },
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }

    #[test]
    fn asymmetric_override_rejected() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(SiteNetwork::new(vec![1.0, 1.0], Couplings::Explicit(t), vec![]).is_err());
    }

    #[test]
    fn classification_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let odd = classify_symmetry(&[c(s, 0.0), c(-s, 0.0)], SymmetryGroup::Z2).unwrap();
        assert_eq!(odd.label, Irrep::Odd);
        assert!((odd.score - 1.0).abs() < 1e-15);

        let r = 1.0 / 3f64.sqrt();
        let a1 = classify_symmetry(&[c(r, 0.0); 3], SymmetryGroup::C3v).unwrap();
        assert_eq!(a1.label, Irrep::A1);
        assert!((a1.score - 1.0).abs() < 1e-15);

        let mixed = classify_symmetry(&[c(s, 0.0), c(s, 0.0), c(0.0, 0.0)], SymmetryGroup::C3v).unwrap();
        assert_eq!(mixed.label, Irrep::Mixed);
        assert!((mixed.score - 2.0 / 3.0).abs() < 1e-15);

        assert!(classify_symmetry(&[c(1.0, 0.0); 3], SymmetryGroup::Z2).is_err());
    }

    #[test]
    fn two_level_widths_and_order() {
        let net = two_site_network(10.0, 1.0, 0.2, 0.0).unwrap();
        let modes = spectrum(&net).unwrap();
        assert_eq!(modes[0].symmetry.label, Irrep::Even);
        assert_eq!(modes[1].symmetry.label, Irrep::Odd);
        assert!((modes[0].width - 0.4).abs() < 1e-12);
        assert!(modes[1].width.abs() < 1e-12);
        assert!((modes[1].eigenvalue.re - modes[0].eigenvalue.re - 2.0).abs() < 1e-12);
        assert_eq!(sharpest_mode(&modes).unwrap().symmetry.label, Irrep::Odd);
    }

    #[test]
    fn sharpest_tie_goes_low() {
        let mk = |re: f64| ModeReport {
            eigenvalue: c(re, -0.05),
            width: 0.1,
            symmetry: SymmetryClass {
                label: Irrep::Mixed,
                score: 0.0,
            },
            vector: vec![],
        };
        let modes = vec![mk(2.0), mk(1.0)];
        assert_eq!(sharpest_mode(&modes).unwrap().eigenvalue.re, 1.0);
    }
}

//! Single dielectric disk between two parallel conducting plates, treated as
//! a dielectric-rod waveguide section.
//!
//! Units: lengths in mm, frequencies in GHz, wavenumbers in mm⁻¹. The plates
//! quantise the axial wavenumber to `k_z = p π / l`; below the parallel-plate
//! cutoff the exterior field is evanescent with `κ_r = sqrt(k_z² − (ω/c)²)`.
//! Inside the disk the radial solutions are `J_m(k_ρ ρ)`, outside `K_m(κ_r ρ)`,
//! with `k_ρ² = ε_r (ω/c)² − k_z²`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::numerics::bessel::{bessel_j, bessel_j_prime, bessel_k, bessel_k_prime};
use crate::numerics::brent;

/// Speed of light in mm/ns, i.e. `ω/c` in mm⁻¹ is `2π f[GHz] / C_MM_PER_NS`.
pub const C_MM_PER_NS: f64 = 299.792_458;
const EPS0: f64 = 8.854_187_812_8e-12;
const MU0: f64 = 1.256_637_062_12e-6;

const SCAN_POINTS: usize = 2001;
const SCAN_START_GHZ: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorGeometry {
    pub diameter_mm: f64,
    pub plate_gap_mm: f64,
    pub eps_r: f64,
}

impl ResonatorGeometry {
    pub fn new(diameter_mm: f64, plate_gap_mm: f64, eps_r: f64) -> Result<Self> {
        let g = Self {
            diameter_mm,
            plate_gap_mm,
            eps_r,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diameter_mm > 0.0) || !self.diameter_mm.is_finite() {
            return domain(format!("diameter must be positive, got {}", self.diameter_mm));
        }
        if !(self.plate_gap_mm > 0.0) || !self.plate_gap_mm.is_finite() {
            return domain(format!("plate gap must be positive, got {}", self.plate_gap_mm));
        }
        if !(self.eps_r > 1.0) || !self.eps_r.is_finite() {
            return domain(format!("eps_r must exceed 1, got {}", self.eps_r));
        }
        Ok(())
    }

    pub fn radius_mm(&self) -> f64 {
        0.5 * self.diameter_mm
    }

    /// Same disk with every length multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.diameter_mm * s, self.plate_gap_mm * s, self.eps_r)
    }
}

impl Default for ResonatorGeometry {
    /// MgTi disk, D = 12.65 mm, l = 6.38 mm, ε_r = 16.
    fn default() -> Self {
        Self {
            diameter_mm: 12.65,
            plate_gap_mm: 6.38,
            eps_r: 16.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeFamily {
    Tm,
    Te,
    Hem,
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeFamily::Tm => "TM",
            ModeFamily::Te => "TE",
            ModeFamily::Hem => "HEM",
        })
    }
}

impl std::str::FromStr for ModeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TM" => Ok(ModeFamily::Tm),
            "TE" => Ok(ModeFamily::Te),
            "HEM" => Ok(ModeFamily::Hem),
            other => domain(format!("unknown mode family {other:?} (expected TM, TE or HEM)")),
        }
    }
}

/// Mode label `(m, n, p)`: azimuthal, radial, vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub family: ModeFamily,
    pub m: u32,
    pub n: u32,
    pub p: u32,
}

impl ModeIndex {
    pub fn new(family: ModeFamily, m: u32, n: u32, p: u32) -> Result<Self> {
        check_family_order(family, m)?;
        if n < 1 {
            return domain("radial index n must be >= 1");
        }
        if p < 1 {
            return domain("vertical index p must be >= 1");
        }
        Ok(Self { family, m, n, p })
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.family, self.m, self.n, self.p)
    }
}

fn check_family_order(family: ModeFamily, m: u32) -> Result<()> {
    match family {
        ModeFamily::Tm | ModeFamily::Te if m != 0 => {
            domain(format!("{family} modes need m = 0 (got m = {m}); use HEM for m > 0"))
        }
        ModeFamily::Hem if m == 0 => domain("HEM modes need m >= 1"),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceLine {
    pub frequency_ghz: f64,
    pub width_ghz: f64,
    /// `f / γ`; `+∞` for a lossless line.
    pub q_factor: f64,
}

impl ResonanceLine {
    pub fn new(frequency_ghz: f64, width_ghz: f64) -> Self {
        let q_factor = if width_ghz > 0.0 {
            frequency_ghz / width_ghz
        } else {
            f64::INFINITY
        };
        Self {
            frequency_ghz,
            width_ghz,
            q_factor,
        }
    }
}

fn free_space_k(f_ghz: f64) -> f64 {
    2.0 * PI * f_ghz / C_MM_PER_NS
}

pub fn kz(geometry: &ResonatorGeometry, p: u32) -> Result<f64> {
    if p < 1 {
        return domain("vertical index p must be >= 1");
    }
    Ok(p as f64 * PI / geometry.plate_gap_mm)
}

/// Parallel-plate cutoff `c p / (2 l)` in GHz.
pub fn cutoff_frequency(geometry: &ResonatorGeometry, p: u32) -> Result<f64> {
    Ok(kz(geometry, p)? * C_MM_PER_NS / (2.0 * PI))
}

/// Lowest frequency with a radially oscillating interior (`k_ρ² > 0`).
pub fn core_cutoff_frequency(geometry: &ResonatorGeometry, p: u32) -> Result<f64> {
    Ok(cutoff_frequency(geometry, p)? / geometry.eps_r.sqrt())
}

pub fn evanescent_kappa(geometry: &ResonatorGeometry, f_ghz: f64, p: u32) -> Result<f64> {
    let kz = kz(geometry, p)?;
    let k0 = free_space_k(f_ghz);
    let cutoff = cutoff_frequency(geometry, p)?;
    if !(f_ghz < cutoff) {
        return Err(Error::AboveCutoff {
            frequency_ghz: f_ghz,
            cutoff_ghz: cutoff,
        });
    }
    Ok(((kz - k0) * (kz + k0)).sqrt())
}

struct Radial {
    u: f64,
    w: f64,
    kz: f64,
    k0: f64,
}

fn radial_arguments(geometry: &ResonatorGeometry, family: ModeFamily, m: u32, p: u32, f_ghz: f64) -> Result<Radial> {
    check_family_order(family, m)?;
    let kz = kz(geometry, p)?;
    let k0 = free_space_k(f_ghz);
    let kappa = evanescent_kappa(geometry, f_ghz, p)?;
    let k_rho_sq = geometry.eps_r * k0 * k0 - kz * kz;
    if !(k_rho_sq > 0.0) {
        return domain(format!(
            "no radially oscillating interior at {f_ghz} GHz (k_rho^2 = {k_rho_sq:e})"
        ));
    }
    let a = geometry.radius_mm();
    Ok(Radial {
        u: k_rho_sq.sqrt() * a,
        w: kappa * a,
        kz,
        k0,
    })
}

/// Wall-continuity residual in pole-free (determinant) form. Its zeros in `f`
/// at fixed `(m, p)` are the resonances.
///
/// With `u = k_ρ a`, `w = κ_r a`:
/// * TM: `ε_r J_0'(u) w K_0(w) + K_0'(w) u J_0(u)`
/// * TE: `J_0'(u) w K_0(w) + K_0'(w) u J_0(u)`
/// * HEM: `(ε_r J' wK + K' uJ)(J' wK + K' uJ) − m² (k_z/k_0)² ((u² + w²)/(u w))² J² K²`
pub fn dispersion_residual(geometry: &ResonatorGeometry, family: ModeFamily, m: u32, p: u32, f_ghz: f64) -> Result<f64> {
    Ok(residual_terms(geometry, family, m, p, f_ghz)?.value())
}

/// `|residual| / Σ|terms|`, a dimensionless measure of how well the
/// continuity condition is met.
pub fn dispersion_residual_scaled(geometry: &ResonatorGeometry, family: ModeFamily, m: u32, p: u32, f_ghz: f64) -> Result<f64> {
    let t = residual_terms(geometry, family, m, p, f_ghz)?;
    let scale = t.scale();
    Ok(if scale > 0.0 { t.value().abs() / scale } else { 0.0 })
}

/// Textbook log-derivative form (has poles where `J_m(u) = 0`).
pub fn dispersion_residual_log_derivative(
    geometry: &ResonatorGeometry,
    family: ModeFamily,
    m: u32,
    p: u32,
    f_ghz: f64,
) -> Result<f64> {
    let r = radial_arguments(geometry, family, m, p, f_ghz)?;
    let (u, w) = (r.u, r.w);
    let jhat = bessel_j_prime(m, u)? / (u * bessel_j(m, u)?);
    let khat = bessel_k_prime(m, w)? / (w * bessel_k(m, w)?);
    let eps = geometry.eps_r;
    Ok(match family {
        ModeFamily::Tm => eps * jhat + khat,
        ModeFamily::Te => jhat + khat,
        ModeFamily::Hem => {
            let coupling = m as f64 * r.kz / r.k0 * (1.0 / (u * u) + 1.0 / (w * w));
            (eps * jhat + khat) * (jhat + khat) - coupling * coupling
        }
    })
}

enum ResidualTerms {
    Single(f64, f64),
    Hybrid { tm: (f64, f64), te: (f64, f64), coupling: f64 },
}

impl ResidualTerms {
    fn value(&self) -> f64 {
        match *self {
            ResidualTerms::Single(a, b) => a + b,
            ResidualTerms::Hybrid { tm, te, coupling } => (tm.0 + tm.1) * (te.0 + te.1) - coupling,
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            ResidualTerms::Single(a, b) => a.abs() + b.abs(),
            ResidualTerms::Hybrid { tm, te, coupling } => {
                (tm.0.abs() + tm.1.abs()) * (te.0.abs() + te.1.abs()) + coupling.abs()
            }
        }
    }
}

fn residual_terms(geometry: &ResonatorGeometry, family: ModeFamily, m: u32, p: u32, f_ghz: f64) -> Result<ResidualTerms> {
    let r = radial_arguments(geometry, family, m, p, f_ghz)?;
    let (u, w) = (r.u, r.w);
    let j = bessel_j(m, u)?;
    let jp = bessel_j_prime(m, u)?;
    let k = bessel_k(m, w)?;
    let kp = bessel_k_prime(m, w)?;
    let eps = geometry.eps_r;
    let tm = (eps * jp * w * k, kp * u * j);
    let te = (jp * w * k, kp * u * j);
    Ok(match family {
        ModeFamily::Tm => ResidualTerms::Single(tm.0, tm.1),
        ModeFamily::Te => ResidualTerms::Single(te.0, te.1),
        ModeFamily::Hem => {
            let c = m as f64 * r.kz / r.k0 * (u * u + w * w) / (u * w) * j * k;
            ResidualTerms::Hybrid {
                tm,
                te,
                coupling: c * c,
            }
        }
    })
}

/// All roots of the dispersion residual below the `p` cutoff, ascending.
pub fn mode_frequencies(geometry: &ResonatorGeometry, family: ModeFamily, m: u32, p: u32) -> Result<Vec<f64>> {
    geometry.validate()?;
    check_family_order(family, m)?;
    let upper = cutoff_frequency(geometry, p)? * (1.0 - 1e-9);
    let lower = SCAN_START_GHZ.max(core_cutoff_frequency(geometry, p)? * (1.0 + 1e-9));
    if !(upper > lower) {
        return Ok(Vec::new());
    }
    let eval = |f: f64| dispersion_residual(geometry, family, m, p, f);
    let step = (upper - lower) / (SCAN_POINTS - 1) as f64;
    let xtol = 1e-14 * upper;
    let mut roots = Vec::new();
    let mut prev_f = lower;
    let mut prev_r = eval(lower)?;
    for i in 1..SCAN_POINTS {
        let f = if i == SCAN_POINTS - 1 { upper } else { lower + i as f64 * step };
        let r = eval(f)?;
        if prev_r == 0.0 {
            roots.push(prev_f);
        } else if prev_r.signum() != r.signum() && r != 0.0 {
            let root = brent(|x| eval(x).unwrap_or(f64::NAN), prev_f, f, xtol, 200)?;
            roots.push(root);
        }
        prev_f = f;
        prev_r = r;
    }
    Ok(roots)
}

/// Resonance frequency (GHz) of the `n`-th root for the given family, `m`, `p`.
pub fn mode_frequency(geometry: &ResonatorGeometry, mode: &ModeIndex) -> Result<f64> {
    let mode = ModeIndex::new(mode.family, mode.m, mode.n, mode.p)?;
    let roots = mode_frequencies(geometry, mode.family, mode.m, mode.p)?;
    roots.get(mode.n as usize - 1).copied().ok_or_else(|| {
        Error::NoSuchMode(format!(
            "{mode}: only {} root(s) below the {:.4} GHz cutoff",
            roots.len(),
            cutoff_frequency(geometry, mode.p).unwrap_or(f64::NAN)
        ))
    })
}

pub fn q_from_width(f_ghz: f64, gamma_ghz: f64) -> Result<f64> {
    if !(gamma_ghz > 0.0) {
        return domain(format!("width must be positive, got {gamma_ghz}"));
    }
    Ok(f_ghz / gamma_ghz)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBudget {
    pub conductor: f64,
    /// `+∞` when the loss tangent is zero.
    pub dielectric: f64,
    pub total: f64,
    /// Fraction of the electric energy stored inside the dielectric.
    pub electric_filling: f64,
}

/// Order-of-magnitude loss budget for a TM/TE (m = 0) mode: stored energy
/// over ohmic plate loss for the conductor part, and `1 / (tanδ · p_e)` for
/// the dielectric part.
pub fn q_budget(
    geometry: &ResonatorGeometry,
    mode: &ModeIndex,
    surface_resistance_ohm: f64,
    loss_tangent: f64,
) -> Result<QBudget> {
    if mode.family == ModeFamily::Hem {
        return Err(Error::Unsupported(format!(
            "{mode}: loss budget only covers TM/TE modes with m = 0"
        )));
    }
    if !(surface_resistance_ohm > 0.0) {
        return domain("surface resistance must be positive");
    }
    if !(loss_tangent >= 0.0) {
        return domain("loss tangent must be non-negative");
    }
    let f = mode_frequency(geometry, mode)?;
    let fields = ModeFields::new(geometry, mode, f)?;

    let omega = 2.0 * PI * f * 1e9;
    let (stored_in, stored_out, wall_in, wall_out) = fields.integrals();
    // lengths are in metres from here on
    let l = geometry.plate_gap_mm * 1e-3;
    let (energy, loss_integral) = match mode.family {
        ModeFamily::Tm => {
            // stored = ∫ ε_r (E_z² + E_ρ²) ρ dρ, wall = ∫ (ε_r R'/k_t²)² ρ dρ
            let w = 0.5 * EPS0 * (0.5 * l) * 2.0 * PI * (stored_in + stored_out);
            let h2 = (omega * EPS0).powi(2) * (wall_in + wall_out);
            (w, h2)
        }
        _ => {
            // stored = ∫ ε_r E_φ² ρ dρ (scaled by (ω μ0)²), wall = ∫ H_ρ² ρ dρ
            let w = 0.5 * EPS0 * (0.5 * l) * 2.0 * PI * (omega * MU0).powi(2) * (stored_in + stored_out);
            (w, wall_in + wall_out)
        }
    };
    let p_conductor = 2.0 * PI * surface_resistance_ohm * loss_integral;
    let conductor = omega * energy / p_conductor;
    let electric_filling = stored_in / (stored_in + stored_out);
    let (dielectric, total) = if loss_tangent == 0.0 {
        (f64::INFINITY, conductor)
    } else {
        let qd = 1.0 / (loss_tangent * electric_filling);
        (qd, 1.0 / (1.0 / conductor + 1.0 / qd))
    };
    Ok(QBudget {
        conductor,
        dielectric,
        total,
        electric_filling,
    })
}

/// Closed-form m = 0 radial profile in SI units.
struct ModeFields {
    family: ModeFamily,
    eps_r: f64,
    a: f64,
    kz: f64,
    k_rho: f64,
    kappa: f64,
    exterior_amplitude: f64,
}

impl ModeFields {
    fn new(geometry: &ResonatorGeometry, mode: &ModeIndex, f: f64) -> Result<Self> {
        let kz = kz(geometry, mode.p)? * 1e3;
        let k0 = free_space_k(f) * 1e3;
        let kappa = evanescent_kappa(geometry, f, mode.p)? * 1e3;
        let k_rho = (geometry.eps_r * k0 * k0 - kz * kz).sqrt();
        let a = geometry.radius_mm() * 1e-3;
        let exterior_amplitude = bessel_j(0, k_rho * a)? / bessel_k(0, kappa * a)?;
        Ok(Self {
            family: mode.family,
            eps_r: geometry.eps_r,
            a,
            kz,
            k_rho,
            kappa,
            exterior_amplitude,
        })
    }

    /// Returns (stored energy inside, outside, wall-loss integrand inside, outside).
    fn integrals(&self) -> (f64, f64, f64, f64) {
        let kr2 = self.k_rho * self.k_rho;
        let ka2 = self.kappa * self.kappa;
        let amp = self.exterior_amplitude;
        let inner = |rho: f64| -> (f64, f64) {
            let x = self.k_rho * rho;
            let r = crate::numerics::bessel::jn(0, x);
            let dr = -self.k_rho * crate::numerics::bessel::jn(1, x);
            self.densities(r, dr, kr2, self.eps_r, rho)
        };
        let outer = |rho: f64| -> (f64, f64) {
            let x = self.kappa * rho;
            let r = amp * crate::numerics::bessel::kn(0, x);
            let dr = -amp * self.kappa * crate::numerics::bessel::kn(1, x);
            self.densities(r, dr, ka2, 1.0, rho)
        };
        let (si, wi) = simpson_pair(inner, 0.0, self.a, 4000);
        let (so, wo) = simpson_pair(outer, self.a, self.a + 50.0 / self.kappa, 4000);
        (si, so, wi, wo)
    }

    fn densities(&self, r: f64, dr: f64, kt2: f64, eps: f64, rho: f64) -> (f64, f64) {
        match self.family {
            ModeFamily::Tm => {
                let er = self.kz / kt2 * dr;
                let h = eps / kt2 * dr;
                (eps * (r * r + er * er) * rho, h * h * rho)
            }
            _ => {
                let ephi = dr / kt2;
                let hrho = self.kz / kt2 * dr;
                (eps * ephi * ephi * rho, hrho * hrho * rho)
            }
        }
    }
}

fn simpson_pair<F: Fn(f64) -> (f64, f64)>(f: F, a: f64, b: f64, intervals: usize) -> (f64, f64) {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let (mut s0, mut s1) = (0.0, 0.0);
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let (x, y) = f(a + i as f64 * h);
        s0 += w * x;
        s1 += w * y;
    }
    (s0 * h / 3.0, s1 * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> ResonatorGeometry {
        ResonatorGeometry::default()
    }

    #[test]
    fn axial_wavenumbers() {
        let g = disk();
        assert!((kz(&g, 1).unwrap() - PI / 6.38).abs() < 1e-15);
        assert!((kz(&g, 1).unwrap() - 0.4924).abs() < 1e-4);
        assert!((kz(&g, 2).unwrap() - 0.98482).abs() < 1e-5);
        assert!(kz(&g, 0).is_err());
        assert!(ModeIndex::new(ModeFamily::Tm, 0, 1, 0).is_err());
    }

    #[test]
    fn mode_index_rules() {
        assert!(ModeIndex::new(ModeFamily::Tm, 1, 1, 1).is_err());
        assert!(ModeIndex::new(ModeFamily::Te, 2, 1, 1).is_err());
        assert!(ModeIndex::new(ModeFamily::Hem, 0, 1, 1).is_err());
        assert!(ModeIndex::new(ModeFamily::Hem, 3, 0, 1).is_err());
        assert!(ModeIndex::new(ModeFamily::Hem, 3, 1, 1).is_ok());
        assert_eq!("hem".parse::<ModeFamily>().unwrap(), ModeFamily::Hem);
        assert!("TEM".parse::<ModeFamily>().is_err());
    }

    #[test]
    fn geometry_validation() {
        assert!(ResonatorGeometry::new(0.0, 6.38, 16.0).is_err());
        assert!(ResonatorGeometry::new(12.65, -1.0, 16.0).is_err());
        assert!(ResonatorGeometry::new(12.65, 6.38, 1.0).is_err());
    }

    #[test]
    fn kappa_at_measured_frequency() {
        let k = evanescent_kappa(&disk(), 9.45, 1).unwrap();
        assert!((k - 0.451).abs() < 1e-3, "kappa = {k}");
    }

    #[test]
    fn kappa_cutoff_is_an_error() {
        let g = disk();
        let fc = cutoff_frequency(&g, 1).unwrap();
        assert!((fc - 23.49).abs() < 0.01);
        match evanescent_kappa(&g, fc, 1) {
            Err(Error::AboveCutoff { cutoff_ghz, .. }) => assert!((cutoff_ghz - fc).abs() < 1e-12),
            other => panic!("expected cutoff error, got {other:?}"),
        }
    }

    #[test]
    fn kappa_squares_back() {
        let g = disk();
        let k = evanescent_kappa(&g, 5.0, 1).unwrap();
        let kz = kz(&g, 1).unwrap();
        let k0 = free_space_k(5.0);
        assert!(((kz * kz - k * k) - k0 * k0).abs() / (k0 * k0) < 1e-12);
    }

    #[test]
    fn determinant_equals_log_derivative_times_denominators() {
        let g = disk();
        for (family, m, f) in [(ModeFamily::Tm, 0, 8.7), (ModeFamily::Te, 0, 12.0), (ModeFamily::Hem, 3, 10.2), (ModeFamily::Hem, 1, 15.3)] {
            let r = radial_arguments(&g, family, m, 1, f).unwrap();
            let denom = r.u * bessel_j(m, r.u).unwrap() * r.w * bessel_k(m, r.w).unwrap();
            let det = dispersion_residual(&g, family, m, 1, f).unwrap();
            let log = dispersion_residual_log_derivative(&g, family, m, 1, f).unwrap();
            let rebuilt = if family == ModeFamily::Hem { log * denom * denom } else { log * denom };
            assert!(((det - rebuilt) / det).abs() < 1e-10, "{family}{m} at {f}: {det} vs {rebuilt}");
        }
    }

    #[test]
    fn te_and_tm_residuals_differ() {
        let g = disk();
        for f in [7.0, 9.0, 11.0, 13.0] {
            let tm = dispersion_residual(&g, ModeFamily::Tm, 0, 1, f).unwrap();
            let te = dispersion_residual(&g, ModeFamily::Te, 0, 1, f).unwrap();
            assert!((tm - te).abs() > 1e-6 * (tm.abs() + te.abs()));
        }
    }

    #[test]
    fn residual_rejects_bad_inputs() {
        let g = disk();
        // below the core cutoff (~5.87 GHz) there is no oscillating interior
        assert!(dispersion_residual(&g, ModeFamily::Tm, 0, 1, 3.0).is_err());
        assert!(dispersion_residual(&g, ModeFamily::Tm, 0, 1, 30.0).is_err());
        assert!(dispersion_residual(&g, ModeFamily::Tm, 2, 1, 9.0).is_err());
    }

    #[test]
    fn tm011_brackets_measured_line() {
        let g = disk();
        let f = mode_frequency(&g, &ModeIndex::new(ModeFamily::Tm, 0, 1, 1).unwrap()).unwrap();
        let lo = dispersion_residual(&g, ModeFamily::Tm, 0, 1, f - 0.01).unwrap();
        let hi = dispersion_residual(&g, ModeFamily::Tm, 0, 1, f + 0.01).unwrap();
        assert!(lo * hi < 0.0);
        assert!(dispersion_residual_scaled(&g, ModeFamily::Tm, 0, 1, f).unwrap() < 1e-9);
    }

    #[test]
    fn missing_radial_order() {
        let g = disk();
        let err = mode_frequency(&g, &ModeIndex::new(ModeFamily::Tm, 0, 40, 1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NoSuchMode(_)));
    }

    #[test]
    fn quality_from_width() {
        assert!((q_from_width(9.45, 0.135).unwrap() - 70.0).abs() < 1e-9);
        assert_eq!(q_from_width(3.0, 3.0).unwrap(), 1.0);
        assert!((q_from_width(9.45, 9.45 / 2400.0).unwrap() - 2400.0).abs() < 1e-9);
        assert!(q_from_width(9.45, 0.0).is_err());
        assert!(q_from_width(9.45, -1.0).is_err());
    }

    #[test]
    fn resonance_line_q() {
        let line = ResonanceLine::new(9.45, 0.135);
        assert!((line.q_factor - 70.0).abs() < 1e-9);
        assert!(ResonanceLine::new(9.45, 0.0).q_factor.is_infinite());
    }
}

//! Run configuration: defaults, file entries, command-line overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use proxres_core::diskmode::{ModeFamily, ModeIndex, ResonatorGeometry};
use proxres_core::doublewell::{DoubleWellSpec, DEFAULT_LEVEL_SOLVER};
use proxres_core::effmodel::TriangleParams;
use proxres_core::numerics::RootFindConfig;
use proxres_core::Complex64;

use crate::error::CliError;
use crate::ini;

#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySection {
    pub d_mm: f64,
    pub l_mm: f64,
    pub eps_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskModesSection {
    pub family: ModeFamily,
    pub m: u32,
    pub n_max: u32,
    pub p: u32,
}

/// Plate surface resistance and dielectric loss tangent for the Q estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSection {
    pub rs_ohm: Option<f64>,
    pub tan_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleWellSection {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub vb: f64,
    pub level: u32,
    pub d_min: f64,
    pub d_max: f64,
    pub d_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffModelSection {
    pub t0: f64,
    pub kappa_re: f64,
    pub kappa_im: f64,
    pub gamma_common: f64,
    pub gamma_individual: f64,
    pub side_s: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub b_steps: usize,
    /// `None` maps the site energy onto the reference line.
    pub freq_scale_ghz: Option<f64>,
    pub site_energy: f64,
    pub channel_shift_per_b: f64,
}

/// Every combination of the three lists is one row.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelSection {
    pub t: Vec<f64>,
    pub gamma_common: Vec<f64>,
    pub gamma_individual: Vec<f64>,
    pub eps0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericsSection {
    pub tolerance: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub precision_digits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: GeometrySection,
    pub disk_modes: DiskModesSection,
    pub loss: LossSection,
    pub doublewell: DoubleWellSection,
    pub effmodel: EffModelSection,
    pub twolevel: TwoLevelSection,
    pub numerics: NumericsSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        let tri = TriangleParams::default();
        Self {
            geometry: GeometrySection {
                d_mm: 12.65,
                l_mm: 6.38,
                eps_r: 16.0,
            },
            disk_modes: DiskModesSection {
                family: ModeFamily::Tm,
                m: 0,
                n_max: 3,
                p: 1,
            },
            loss: LossSection {
                rs_ohm: None,
                tan_delta: 0.0,
            },
            doublewell: DoubleWellSection {
                v0: 900.0,
                v1: -27.0,
                v2: -0.0027,
                vb: 900.0,
                level: 1,
                d_min: 0.02,
                d_max: 0.5,
                d_steps: 49,
            },
            effmodel: EffModelSection {
                t0: tri.t0,
                kappa_re: tri.kappa.re,
                kappa_im: tri.kappa.im,
                gamma_common: tri.gamma_common,
                gamma_individual: tri.gamma_individual,
                side_s: tri.side_s,
                b_min: 0.0,
                b_max: 0.3,
                b_steps: 61,
                freq_scale_ghz: None,
                site_energy: tri.site_energy,
                channel_shift_per_b: tri.channel_shift_per_b,
            },
            twolevel: TwoLevelSection {
                t: vec![1.0],
                gamma_common: vec![0.2],
                gamma_individual: vec![0.0, 0.05],
                eps0: 10.0,
            },
            numerics: NumericsSection {
                tolerance: DEFAULT_LEVEL_SOLVER.tolerance,
                max_iterations: DEFAULT_LEVEL_SOLVER.max_iterations,
            },
            output: OutputSection {
                directory: PathBuf::from("."),
                precision_digits: 12,
            },
        }
    }
}

fn real(section: &str, key: &str, value: &str) -> Result<f64, CliError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::key(section, key, format!("expected a finite number, got `{value}`"))),
    }
}

fn count<T: std::str::FromStr>(section: &str, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| CliError::key(section, key, format!("expected a non-negative integer, got `{value}`")))
}

fn real_list(section: &str, key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::key(section, key, "expected a comma-separated list of numbers"));
    }
    items.iter().map(|s| real(section, key, s)).collect()
}

fn list_text(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// Evenly spaced grid including both ends; a single point sits at `lo`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_ini_text(&text, &[])
    }

    /// Defaults, then file entries in order, then `(section, key, value)`
    /// overrides; the result is validated.
    pub fn from_ini_text(text: &str, overrides: &[(String, String, String)]) -> Result<Self, CliError> {
        let mut config = Self::default();
        for e in ini::parse(text)? {
            config.set(&e.section, &e.key, &e.value)?;
        }
        for (section, key, value) in overrides {
            config.set(section, key, value)?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), CliError> {
        let (s, k, v) = (section, key, value);
        match (s, k) {
            ("geometry", "D_mm") => self.geometry.d_mm = real(s, k, v)?,
            ("geometry", "l_mm") => self.geometry.l_mm = real(s, k, v)?,
            ("geometry", "eps_r") => self.geometry.eps_r = real(s, k, v)?,

            ("disk_modes", "family") => {
                self.disk_modes.family = v
                    .parse()
                    .map_err(|_| CliError::key(s, k, format!("expected TM, TE or HEM, got `{v}`")))?
            }
            ("disk_modes", "m") => self.disk_modes.m = count(s, k, v)?,
            ("disk_modes", "n_max") => self.disk_modes.n_max = count(s, k, v)?,
            ("disk_modes", "p") => self.disk_modes.p = count(s, k, v)?,

            ("loss", "Rs_ohm") => self.loss.rs_ohm = if v.is_empty() { None } else { Some(real(s, k, v)?) },
            ("loss", "tan_delta") => self.loss.tan_delta = real(s, k, v)?,

            ("doublewell", "V0") => self.doublewell.v0 = real(s, k, v)?,
            ("doublewell", "V1") => self.doublewell.v1 = real(s, k, v)?,
            ("doublewell", "V2") => self.doublewell.v2 = real(s, k, v)?,
            ("doublewell", "Vb") => self.doublewell.vb = real(s, k, v)?,
            ("doublewell", "level") => self.doublewell.level = count(s, k, v)?,
            ("doublewell", "d_min") => self.doublewell.d_min = real(s, k, v)?,
            ("doublewell", "d_max") => self.doublewell.d_max = real(s, k, v)?,
            ("doublewell", "d_steps") => self.doublewell.d_steps = count(s, k, v)?,

            ("effmodel", "T0") => self.effmodel.t0 = real(s, k, v)?,
            ("effmodel", "kappa_re") => self.effmodel.kappa_re = real(s, k, v)?,
            ("effmodel", "kappa_im") => self.effmodel.kappa_im = real(s, k, v)?,
            ("effmodel", "gamma_common") => self.effmodel.gamma_common = real(s, k, v)?,
            ("effmodel", "gamma_individual") => self.effmodel.gamma_individual = real(s, k, v)?,
            ("effmodel", "side_s") => self.effmodel.side_s = real(s, k, v)?,
            ("effmodel", "b_min") => self.effmodel.b_min = real(s, k, v)?,
            ("effmodel", "b_max") => self.effmodel.b_max = real(s, k, v)?,
            ("effmodel", "b_steps") => self.effmodel.b_steps = count(s, k, v)?,
            ("effmodel", "freq_scale_GHz") => {
                self.effmodel.freq_scale_ghz = if v.is_empty() { None } else { Some(real(s, k, v)?) }
            }
            ("effmodel", "site_energy") => self.effmodel.site_energy = real(s, k, v)?,
            ("effmodel", "channel_shift_per_b") => self.effmodel.channel_shift_per_b = real(s, k, v)?,

            ("twolevel", "T") => self.twolevel.t = real_list(s, k, v)?,
            ("twolevel", "gamma_common") => self.twolevel.gamma_common = real_list(s, k, v)?,
            ("twolevel", "gamma_individual") => self.twolevel.gamma_individual = real_list(s, k, v)?,
            ("twolevel", "eps0") => self.twolevel.eps0 = real(s, k, v)?,

            ("numerics", "tolerance") => self.numerics.tolerance = real(s, k, v)?,
            ("numerics", "max_iterations") => self.numerics.max_iterations = count(s, k, v)?,

            ("output", "directory") => {
                if v.is_empty() {
                    return Err(CliError::key(s, k, "directory must not be empty"));
                }
                self.output.directory = PathBuf::from(v)
            }
            ("output", "precision_digits") => self.output.precision_digits = count(s, k, v)?,

            ("geometry" | "disk_modes" | "loss" | "doublewell" | "effmodel" | "twolevel" | "numerics" | "output", _) => {
                return Err(CliError::key(s, k, "unknown key"))
            }
            _ => return Err(CliError::Config(format!("unknown section [{s}] (key `{k}`)"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.validate_geometry()?;
        self.validate_doublewell()?;
        self.validate_effmodel()?;
        self.validate_twolevel()?;
        let n = &self.numerics;
        if !(n.tolerance > 0.0) {
            return Err(CliError::key("numerics", "tolerance", "must be positive"));
        }
        if n.max_iterations < 1 {
            return Err(CliError::key("numerics", "max_iterations", "must be at least 1"));
        }
        if !(1..=17).contains(&self.output.precision_digits) {
            return Err(CliError::key("output", "precision_digits", "must be between 1 and 17"));
        }
        Ok(())
    }

    fn validate_geometry(&self) -> Result<(), CliError> {
        let g = &self.geometry;
        if !(g.d_mm > 0.0) {
            return Err(CliError::key("geometry", "D_mm", "must be positive"));
        }
        if !(g.l_mm > 0.0) {
            return Err(CliError::key("geometry", "l_mm", "must be positive"));
        }
        if !(g.eps_r > 1.0) {
            return Err(CliError::key("geometry", "eps_r", "must exceed 1"));
        }
        let dm = &self.disk_modes;
        if dm.n_max < 1 {
            return Err(CliError::key("disk_modes", "n_max", "must be at least 1"));
        }
        if dm.p < 1 {
            return Err(CliError::key("disk_modes", "p", "must be at least 1"));
        }
        ModeIndex::new(dm.family, dm.m, 1, dm.p).map_err(|e| CliError::key("disk_modes", "m", e.to_string()))?;
        if let Some(rs) = self.loss.rs_ohm {
            if !(rs > 0.0) {
                return Err(CliError::key("loss", "Rs_ohm", "must be positive"));
            }
        }
        if !(self.loss.tan_delta >= 0.0) {
            return Err(CliError::key("loss", "tan_delta", "must be non-negative"));
        }
        Ok(())
    }

    fn validate_doublewell(&self) -> Result<(), CliError> {
        let w = &self.doublewell;
        let s = "doublewell";
        if !(w.v0 > 0.0) {
            return Err(CliError::key(s, "V0", "must be positive"));
        }
        if !(w.vb > 0.0 && w.vb <= w.v0) {
            return Err(CliError::key(s, "Vb", "must satisfy 0 < Vb <= V0"));
        }
        for (key, v) in [("V1", w.v1), ("V2", w.v2)] {
            if v > 0.0 {
                return Err(CliError::key(s, key, "must be <= 0 (absorbing)"));
            }
            if v.abs() > 0.2 * w.v0 {
                return Err(CliError::key(s, key, "magnitude must not exceed 0.2 V0"));
            }
        }
        if w.level < 1 {
            return Err(CliError::key(s, "level", "must be at least 1"));
        }
        if !(w.d_min >= 0.0) {
            return Err(CliError::key(s, "d_min", "must be >= 0"));
        }
        if w.d_steps < 1 {
            return Err(CliError::key(s, "d_steps", "must be at least 1"));
        }
        if w.d_steps > 1 && !(w.d_max > w.d_min) {
            return Err(CliError::key(s, "d_max", "must exceed d_min when d_steps > 1"));
        }
        self.doublewell_template().map_err(|e| CliError::Config(format!("[doublewell] {e}")))?;
        Ok(())
    }

    fn validate_effmodel(&self) -> Result<(), CliError> {
        let e = &self.effmodel;
        let s = "effmodel";
        if !(e.t0 > 0.0) {
            return Err(CliError::key(s, "T0", "must be positive"));
        }
        if !(e.kappa_re > 0.0) {
            return Err(CliError::key(s, "kappa_re", "must be positive"));
        }
        if !(e.gamma_common >= 0.0) {
            return Err(CliError::key(s, "gamma_common", "must be non-negative"));
        }
        if !(e.gamma_individual >= 0.0) {
            return Err(CliError::key(s, "gamma_individual", "must be non-negative"));
        }
        if !(e.b_min >= 0.0) {
            return Err(CliError::key(s, "b_min", "must be >= 0"));
        }
        if e.b_steps < 1 {
            return Err(CliError::key(s, "b_steps", "must be at least 1"));
        }
        if e.b_steps > 1 && !(e.b_max > e.b_min) {
            return Err(CliError::key(s, "b_max", "must exceed b_min when b_steps > 1"));
        }
        if !(e.site_energy > 0.0) {
            return Err(CliError::key(s, "site_energy", "must be positive"));
        }
        if let Some(f) = e.freq_scale_ghz {
            if !(f > 0.0) {
                return Err(CliError::key(s, "freq_scale_GHz", "must be positive"));
            }
        }
        Ok(())
    }

    fn validate_twolevel(&self) -> Result<(), CliError> {
        let t = &self.twolevel;
        let s = "twolevel";
        if t.t.is_empty() {
            return Err(CliError::key(s, "T", "needs at least one value"));
        }
        for (key, list) in [("gamma_common", &t.gamma_common), ("gamma_individual", &t.gamma_individual)] {
            if list.is_empty() || list.iter().any(|g| !(*g >= 0.0)) {
                return Err(CliError::key(s, key, "needs one or more non-negative values"));
            }
        }
        Ok(())
    }

    pub fn resonator(&self) -> Result<ResonatorGeometry, CliError> {
        let g = &self.geometry;
        ResonatorGeometry::new(g.d_mm, g.l_mm, g.eps_r).map_err(|e| CliError::Config(format!("[geometry] {e}")))
    }

    /// Double-well parameters at `d = d_min`.
    pub fn doublewell_template(&self) -> proxres_core::Result<DoubleWellSpec> {
        let w = &self.doublewell;
        DoubleWellSpec::new(w.v0, w.v1, w.v2, w.vb, w.d_min)
    }

    pub fn d_grid(&self) -> Vec<f64> {
        let w = &self.doublewell;
        linear_grid(w.d_min, w.d_max, w.d_steps)
    }

    pub fn triangle(&self) -> TriangleParams {
        let e = &self.effmodel;
        TriangleParams {
            side_s: e.side_s,
            t0: e.t0,
            kappa: Complex64::new(e.kappa_re, e.kappa_im),
            gamma_common: e.gamma_common,
            gamma_individual: e.gamma_individual,
            site_energy: e.site_energy,
            channel_shift_per_b: e.channel_shift_per_b,
        }
    }

    pub fn b_grid(&self) -> Vec<f64> {
        let e = &self.effmodel;
        linear_grid(e.b_min, e.b_max, e.b_steps)
    }

    pub fn frequency_scale_ghz(&self) -> f64 {
        self.effmodel
            .freq_scale_ghz
            .unwrap_or_else(|| self.triangle().default_frequency_scale())
    }

    pub fn root_config(&self) -> RootFindConfig {
        RootFindConfig {
            tolerance: self.numerics.tolerance,
            max_iterations: self.numerics.max_iterations,
            ..DEFAULT_LEVEL_SOLVER
        }
    }

    /// Every setting as a loadable config file. Numbers are written in
    /// shortest round-trip form, so reloading gives identical values.
    pub fn to_ini(&self) -> String {
        let mut out = String::new();
        let g = &self.geometry;
        let _ = writeln!(out, "[geometry]\nD_mm = {}\nl_mm = {}\neps_r = {}\n", g.d_mm, g.l_mm, g.eps_r);
        let dm = &self.disk_modes;
        let _ = writeln!(out, "[disk_modes]\nfamily = {}\nm = {}\nn_max = {}\np = {}\n", dm.family, dm.m, dm.n_max, dm.p);
        out.push_str("[loss]\n");
        if let Some(rs) = self.loss.rs_ohm {
            let _ = writeln!(out, "Rs_ohm = {rs}");
        }
        let _ = writeln!(out, "tan_delta = {}\n", self.loss.tan_delta);
        let w = &self.doublewell;
        let _ = writeln!(
            out,
            "[doublewell]\nV0 = {}\nV1 = {}\nV2 = {}\nVb = {}\nlevel = {}\nd_min = {}\nd_max = {}\nd_steps = {}\n",
            w.v0, w.v1, w.v2, w.vb, w.level, w.d_min, w.d_max, w.d_steps
        );
        let e = &self.effmodel;
        let _ = writeln!(
            out,
            "[effmodel]\nT0 = {}\nkappa_re = {}\nkappa_im = {}\ngamma_common = {}\ngamma_individual = {}\nside_s = {}\nb_min = {}\nb_max = {}\nb_steps = {}",
            e.t0, e.kappa_re, e.kappa_im, e.gamma_common, e.gamma_individual, e.side_s, e.b_min, e.b_max, e.b_steps
        );
        if let Some(f) = e.freq_scale_ghz {
            let _ = writeln!(out, "freq_scale_GHz = {f}");
        }
        let _ = writeln!(out, "site_energy = {}\nchannel_shift_per_b = {}\n", e.site_energy, e.channel_shift_per_b);
        let t = &self.twolevel;
        let _ = writeln!(
            out,
            "[twolevel]\nT = {}\ngamma_common = {}\ngamma_individual = {}\neps0 = {}\n",
            list_text(&t.t),
            list_text(&t.gamma_common),
            list_text(&t.gamma_individual),
            t.eps0
        );
        let n = &self.numerics;
        let _ = writeln!(out, "[numerics]\ntolerance = {}\nmax_iterations = {}\n", n.tolerance, n.max_iterations);
        let o = &self.output;
        let _ = writeln!(
            out,
            "[output]\ndirectory = {}\nprecision_digits = {}",
            o.directory.display(),
            o.precision_digits
        );
        out
    }
}

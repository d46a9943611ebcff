//! The four subcommands. Each builds its table from a validated config,
//! writes it with the run manifest and reports warnings and partial failure.

use std::fmt;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use proxres_core::diskmode::{evanescent_kappa, mode_frequencies, q_budget, ModeIndex};
use proxres_core::doublewell::{fit_sweep_splitting, sweep_distance_with, SweepSplittingFit};
use proxres_core::effmodel::{spectrum, symmetry_break_sweep, triangle_network, two_level_closed_form, two_site_network};
use proxres_core::Error;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{format_number, write_atomic, Table};

pub const DISK_MODES_HEADER: &[&str] = &["family", "m", "n", "p", "frequency_GHz", "kappa_r_per_mm", "Q_estimate"];
pub const DOUBLET_SWEEP_HEADER: &[&str] = &[
    "d_over_D",
    "eps_S",
    "gamma_S",
    "eps_A",
    "gamma_A",
    "delta_eps",
    "ratio_gamma_S_over_gamma_A",
];
pub const SYMMETRY_BREAK_HEADER: &[&str] =
    &["b_over_D", "sharp_width", "sharp_Q", "sharp_irrep_score", "bright_width", "mid_width"];
pub const TWO_LEVEL_HEADER: &[&str] =
    &["T", "gamma_common", "gamma_individual", "f_S", "gamma_S_model", "f_A", "gamma_A_model"];

pub const MANIFEST_FILE: &str = "run_manifest.txt";
pub const SPLITTING_FIT_FILE: &str = "splitting_fit.txt";

/// Below this fraction of converged points a sweep counts as a partial failure.
pub const MIN_SUCCESS_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    DiskModes,
    DoubletSweep,
    ThreeDisk,
    TwoLevel,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DiskModes => "disk-modes",
            Command::DoubletSweep => "doublet-sweep",
            Command::ThreeDisk => "three-disk",
            Command::TwoLevel => "two-level",
        }
    }

    pub fn csv_name(&self) -> &'static str {
        match self {
            Command::DiskModes => "disk_modes.csv",
            Command::DoubletSweep => "doublet_sweep.csv",
            Command::ThreeDisk => "symmetry_break.csv",
            Command::TwoLevel => "two_level.csv",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub points_total: usize,
    pub points_ok: usize,
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        if self.points_total > 0 && (self.points_ok as f64) < MIN_SUCCESS_FRACTION * self.points_total as f64 {
            3
        } else {
            0
        }
    }
}

/// Table plus anything else a command writes next to it.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub extra_files: Vec<(&'static str, Option<String>)>,
    pub warnings: Vec<String>,
    pub points_total: usize,
    pub points_ok: usize,
}

impl CommandOutput {
    fn complete(table: Table) -> Self {
        let n = table.rows.len();
        Self {
            table,
            extra_files: Vec::new(),
            warnings: Vec::new(),
            points_total: n,
            points_ok: n,
        }
    }
}

pub fn build(command: Command, config: &RunConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::DiskModes => disk_modes(config),
        Command::DoubletSweep => doublet_sweep(config),
        Command::ThreeDisk => three_disk(config),
        Command::TwoLevel => two_level(config),
    }
}

/// Builds the table, writes it, the side files and the manifest into
/// `config.output.directory`.
pub fn run(command: Command, config: &RunConfig) -> Result<RunReport, CliError> {
    let out = build(command, config)?;
    let dir = &config.output.directory;
    let mut files = vec![write_atomic(dir, command.csv_name(), &out.table.render())?];
    for (name, contents) in &out.extra_files {
        match contents {
            Some(text) => files.push(write_atomic(dir, name, text)?),
            None => {
                // a stale file from an earlier run would be mistaken for this one's
                let _ = std::fs::remove_file(dir.join(name));
            }
        }
    }
    files.push(write_atomic(dir, MANIFEST_FILE, &manifest(command, config, &files))?);
    Ok(RunReport {
        files,
        warnings: out.warnings,
        points_total: out.points_total,
        points_ok: out.points_ok,
    })
}

fn manifest(command: Command, config: &RunConfig, files: &[PathBuf]) -> String {
    let seconds = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let names: Vec<String> = files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    format!(
        "# proxres {} run manifest\n# command: {command}\n# unix_time: {seconds}\n# outputs: {}\n{}",
        env!("CARGO_PKG_VERSION"),
        names.join(", "),
        config.to_ini()
    )
}

fn disk_modes(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let g = config.resonator()?;
    let dm = &config.disk_modes;
    let digits = config.output.precision_digits;
    let roots = mode_frequencies(&g, dm.family, dm.m, dm.p)?;
    if roots.is_empty() {
        return Err(CliError::Empty(format!(
            "no {} modes with m = {}, p = {} below the plate cutoff (eps_r = {})",
            dm.family, dm.m, dm.p, g.eps_r
        )));
    }
    let mut warnings = Vec::new();
    let mut table = Table::new(DISK_MODES_HEADER);
    for (i, &f) in roots.iter().take(dm.n_max as usize).enumerate() {
        let n = i as u32 + 1;
        let kappa = evanescent_kappa(&g, f, dm.p)?;
        let q = match config.loss.rs_ohm {
            Some(rs) => {
                let mode = ModeIndex::new(dm.family, dm.m, n, dm.p)?;
                match q_budget(&g, &mode, rs, config.loss.tan_delta) {
                    Ok(b) => format_number(b.total, digits),
                    Err(e) => {
                        warnings.push(format!("{mode}: no Q estimate ({e})"));
                        String::new()
                    }
                }
            }
            None => String::new(),
        };
        table.push(vec![
            dm.family.to_string(),
            dm.m.to_string(),
            n.to_string(),
            dm.p.to_string(),
            format_number(f, digits),
            format_number(kappa, digits),
            q,
        ]);
    }
    let mut out = CommandOutput::complete(table);
    out.warnings = warnings;
    Ok(out)
}

pub fn splitting_fit_text(fit: &SweepSplittingFit, digits: usize) -> String {
    let f = &fit.fit;
    let num = |x: f64| format_number(x, digits);
    format!(
        "decay_constant = {}\nprefactor = {}\nrms_residual = {}\nkappa_bar = {}\nmean_energy = {}\nwindow_d_min = {}\nwindow_d_max = {}\npoints_used = {}\n",
        num(f.decay_constant),
        num(f.prefactor),
        num(f.rms_residual),
        num(fit.kappa_bar),
        num(fit.mean_energy),
        num(f.window.0),
        num(f.window.1),
        f.points_used
    )
}

fn doublet_sweep(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let template = config.doublewell_template()?;
    let digits = config.output.precision_digits;
    let sweep = sweep_distance_with(&template, &config.d_grid(), config.doublewell.level, &config.root_config())?;
    let mut warnings = Vec::new();
    let mut table = Table::new(DOUBLET_SWEEP_HEADER);
    for point in &sweep.points {
        match &point.result {
            Ok(r) => table.push(
                [
                    point.d,
                    r.level_s.energy_eps,
                    r.level_s.width_gamma,
                    r.level_a.energy_eps,
                    r.level_a.width_gamma,
                    r.delta_eps,
                    r.width_ratio,
                ]
                .iter()
                .map(|&x| format_number(x, digits))
                .collect(),
            ),
            Err(e) => warnings.push(format!("d_over_D = {}: {e}", point.d)),
        }
    }
    let fit_text = match fit_sweep_splitting(&template, &sweep) {
        Ok(fit) => Some(splitting_fit_text(&fit, digits)),
        Err(e) => {
            warnings.push(format!("no splitting fit: {e}"));
            None
        }
    };
    let points_ok = table.rows.len();
    Ok(CommandOutput {
        table,
        extra_files: vec![(SPLITTING_FIT_FILE, fit_text)],
        warnings,
        points_total: sweep.points.len(),
        points_ok,
    })
}

fn three_disk(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let params = config.triangle();
    let digits = config.output.precision_digits;
    let bs = config.b_grid();
    for &b in &bs {
        if let Err(Error::Geometry(msg)) = triangle_network(&params, b) {
            return Err(CliError::Geometry(format!("b_over_D = {b}: {msg}")));
        }
    }
    let points = symmetry_break_sweep(&params, &bs, config.frequency_scale_ghz())?;
    let mut warnings = Vec::new();
    let mut table = Table::new(SYMMETRY_BREAK_HEADER);
    for p in &points {
        match &p.result {
            Ok(r) => table.push(
                [p.b, r.sharp_width, r.sharp_q, r.sharp_irrep_score, r.bright_width, r.mid_width]
                    .iter()
                    .map(|&x| format_number(x, digits))
                    .collect(),
            ),
            Err(e) => warnings.push(format!("b_over_D = {}: {e}", p.b)),
        }
    }
    let points_ok = table.rows.len();
    Ok(CommandOutput {
        table,
        extra_files: Vec::new(),
        warnings,
        points_total: points.len(),
        points_ok,
    })
}

fn two_level(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let tl = &config.twolevel;
    let digits = config.output.precision_digits;
    let mut table = Table::new(TWO_LEVEL_HEADER);
    for &t in &tl.t {
        for &gc in &tl.gamma_common {
            for &gd in &tl.gamma_individual {
                let ((fs, gs), (fa, ga)) = two_level_closed_form(tl.eps0, t, gc, gd);
                let modes = spectrum(&two_site_network(tl.eps0, t, gc, gd)?)?;
                let tol = 1e-12 * (1.0 + tl.eps0.abs() + t.abs() + gc + gd);
                for (f, g) in [(fs, gs), (fa, ga)] {
                    if !modes
                        .iter()
                        .any(|m| (m.eigenvalue.re - f).abs() <= tol && (m.width - g).abs() <= tol)
                    {
                        return Err(CliError::Check(format!(
                            "T = {t}, gamma_common = {gc}, gamma_individual = {gd}: no eigenvalue within {tol:e} of f = {f}, width = {g}"
                        )));
                    }
                }
                table.push(
                    [t, gc, gd, fs, gs, fa, ga]
                        .iter()
                        .map(|&x| format_number(x, digits))
                        .collect(),
                );
            }
        }
    }
    Ok(CommandOutput::complete(table))
}

//! CSV rendering and file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// `digits` significant digits; fixed notation for `1e-4 <= |x| < 1e12`,
/// scientific otherwise. Non-finite values become an empty field.
pub fn format_number(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let digits = digits.max(1);
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').map_or(sci.len(), |i| i + 1)..].parse().unwrap_or(0);
    if (-4..12).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes to a temporary sibling and renames it into place.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    };
    if let Err(e) = write() {
        let _ = fs::remove_file(&tmp);
        return Err(io_error(&target, e));
    }
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_and_scientific() {
        assert_eq!(format_number(9.45, 12), "9.45000000000");
        assert_eq!(format_number(-27.0, 4), "-27.00");
        assert_eq!(format_number(0.00027, 3), "0.000270");
        assert_eq!(format_number(0.000027, 3), "2.70e-5");
        assert_eq!(format_number(1.234e12, 3), "1.23e12");
        assert_eq!(format_number(123456789012.0, 3), "123456789012");
        assert_eq!(format_number(99999.96, 3), "100000");
        assert_eq!(format_number(0.0, 3), "0.00");
        assert_eq!(format_number(-0.0, 3), "0.00");
        assert_eq!(format_number(f64::INFINITY, 3), "");
        assert_eq!(format_number(f64::NAN, 3), "");
    }

    #[test]
    fn rounding_that_carries_into_the_next_decade() {
        assert_eq!(format_number(9.9996, 4), "10.00");
        assert_eq!(format_number(0.000099996, 4), "0.0001000");
    }

    #[test]
    fn table_render() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), String::new()]);
        assert_eq!(t.render(), "a,b\n1,\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "x.csv", "one\n").unwrap();
        let p = write_atomic(dir.path(), "x.csv", "two\n").unwrap();
        assert_eq!(fs::read_to_string(p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}

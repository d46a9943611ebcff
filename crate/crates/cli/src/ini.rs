//! Flat `key = value` files under `[section]` headers.

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Entries in file order. Blank lines and lines starting with `#` or `;`
/// are skipped, as is anything after a whitespace-preceded `#`. Keys before
/// the first header are rejected.
pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut section: Option<String> = None;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: unterminated section header")))?
                .trim();
            if name.is_empty() {
                return Err(CliError::Config(format!("line {line_no}: empty section name")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("line {line_no}: empty key")));
        }
        let section = section
            .clone()
            .ok_or_else(|| CliError::Config(format!("line {line_no}: `{key}` appears before any [section]")))?;
        entries.push(Entry {
            section,
            key: key.to_string(),
            value: value.trim().to_string(),
            line: line_no,
        });
    }
    Ok(entries)
}

fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    (1..bytes.len())
        .find(|&i| bytes[i] == b'#' && bytes[i - 1].is_ascii_whitespace())
        .map_or(line, |i| &line[..i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let text = "# top\n[geometry]\nD_mm = 12.65\n; note\n\n[output]\n directory =  out dir \n";
        let e = parse(text).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].section.as_str(), e[0].key.as_str(), e[0].value.as_str()), ("geometry", "D_mm", "12.65"));
        assert_eq!(e[1].value, "out dir");
        assert_eq!(e[1].line, 7);
    }

    #[test]
    fn malformed_lines() {
        assert!(parse("D_mm = 1\n").is_err());
        assert!(parse("[geometry\n").is_err());
        assert!(parse("[geometry]\nD_mm 1\n").is_err());
        assert!(parse("[]\n").is_err());
    }

    #[test]
    fn trailing_comments() {
        let e = parse("[geometry]  # disk\nl_mm = 6.38   # plate spacing\n[output]\ndirectory = a#b\n").unwrap();
        assert_eq!(e[0].value, "6.38");
        assert_eq!(e[1].value, "a#b");
    }

    #[test]
    fn empty_value_is_kept() {
        let e = parse("[loss]\nRs_ohm =\n").unwrap();
        assert_eq!(e[0].value, "");
    }
}

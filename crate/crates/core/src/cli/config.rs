//! `key=value` config files whose keys mirror the long flag names.
//!
//! Blank lines and lines starting with `#` are ignored. A key given on the command
//! line wins over the file.

use std::path::Path;

use super::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected key=value, got `{line}`",
                n + 1
            ))
        })?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Pull `--config PATH` out of the arguments and append every file entry whose flag
/// is not already present.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(
                it.next()
                    .ok_or_else(|| CliError::Usage("--config needs a path".into()))?,
            );
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let present = |key: &str| {
        let flag = format!("--{key}");
        let eq = format!("--{key}=");
        rest.iter().any(|a| *a == flag || a.starts_with(&eq))
    };
    let extra: Vec<String> = load(Path::new(&path))?
        .into_iter()
        .filter(|(k, _)| !present(k))
        .flat_map(|(k, v)| [format!("--{k}"), v])
        .collect();
    rest.extend(extra);
    Ok(rest)
}

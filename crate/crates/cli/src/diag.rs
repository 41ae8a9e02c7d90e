//! Machine-readable `key=value` lines and exit statuses.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use catoptrics_core::OpticsError;

/// Quotes a value if it would break `key=value` tokenization.
pub fn quote(value: &str) -> String {
    if !value.is_empty() && !value.contains(|c: char| c.is_whitespace() || c == '"' || c == '=') {
        return value.to_string();
    }
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Joins pairs into one line.
pub fn line(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (i, (k, v)) in pairs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{k}={}", quote(v));
    }
    s
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed invocation or configuration; exit status 2.
    Usage(Vec<(&'static str, String)>),
    /// The optics said no; exit status 1.
    Domain(OpticsError),
    /// File system trouble; exit status 1.
    Io { path: String, detail: String },
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            detail: err.to_string(),
        }
    }

    pub fn config(line: usize, key: &str, detail: &str) -> Self {
        CliError::Usage(vec![
            ("source", "config".into()),
            ("line", line.to_string()),
            ("key", key.to_string()),
            ("detail", detail.to_string()),
        ])
    }

    pub fn usage(flag: &str, detail: impl Into<String>) -> Self {
        CliError::Usage(vec![("flag", flag.to_string()), ("detail", detail.into())])
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }

    /// The single diagnostic line.
    pub fn render(&self) -> String {
        let mut pairs: Vec<(&str, String)> = Vec::new();
        match self {
            CliError::Usage(fields) => {
                pairs.push(("error", "usage".into()));
                pairs.extend(fields.iter().map(|(k, v)| (*k, v.clone())));
            }
            CliError::Io { path, detail } => {
                pairs.push(("error", "io".into()));
                pairs.push(("path", path.clone()));
                pairs.push(("detail", detail.clone()));
            }
            CliError::Domain(e) => {
                pairs.push(("error", e.code().into()));
                match e {
                    OpticsError::OutsideSnellsWindow { angle } => {
                        pairs.push(("angle_deg", format!("{:.6}", angle.to_degrees())));
                    }
                    OpticsError::TotalInternalReflection { incidence } => {
                        pairs.push(("incidence_deg", format!("{:.6}", incidence.to_degrees())));
                    }
                    OpticsError::RegionOverflow {
                        requested_w,
                        requested_h,
                        max_w,
                        max_h,
                    } => {
                        pairs.push(("requested_w_m", format!("{requested_w:.6}")));
                        pairs.push(("requested_h_m", format!("{requested_h:.6}")));
                        pairs.push(("max_w_m", format!("{max_w:.6}")));
                        pairs.push(("max_h_m", format!("{max_h:.6}")));
                    }
                    OpticsError::DoesNotFit { needed_w, needed_h } => {
                        pairs.push(("needed_w_mm", format!("{needed_w:.1}")));
                        pairs.push(("needed_h_mm", format!("{needed_h:.1}")));
                    }
                    OpticsError::ApertureOcclusion { fraction } => {
                        pairs.push(("fraction", format!("{fraction:.6}")));
                    }
                    OpticsError::InvalidInput(msg) => pairs.push(("detail", msg.clone())),
                    _ => {}
                }
            }
        }
        line(&pairs)
    }
}

impl From<OpticsError> for CliError {
    fn from(e: OpticsError) -> Self {
        CliError::Domain(e)
    }
}

/// Usage error raised by clap, reduced to one line.
pub fn from_clap(err: &clap::Error) -> CliError {
    use clap::error::{ContextKind, ContextValue};
    let flag = match err.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => s.clone(),
        Some(ContextValue::Strings(v)) => v.join(","),
        _ => match err.get(ContextKind::InvalidSubcommand) {
            Some(ContextValue::String(s)) => s.clone(),
            _ => String::new(),
        },
    };
    let rendered = err.render().to_string();
    let detail = rendered
        .lines()
        .next()
        .unwrap_or("")
        .trim_start_matches("error: ")
        .to_string();
    let mut fields = vec![("kind", format!("{:?}", err.kind()).to_lowercase())];
    if !flag.is_empty() {
        fields.push(("flag", flag));
    }
    if let Some(ContextValue::String(v)) = err.get(ContextKind::InvalidValue) {
        fields.push(("value", v.clone()));
    }
    fields.push(("detail", detail));
    CliError::Usage(fields)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snells_window_line() {
        let e = CliError::Domain(OpticsError::OutsideSnellsWindow {
            angle: 50f64.to_radians(),
        });
        assert_eq!(
            e.render(),
            "error=outside_snells_window angle_deg=50.000000"
        );
        assert_eq!(e.exit_code(), ExitCode::from(1));
    }

    #[test]
    fn values_with_spaces_are_quoted() {
        assert_eq!(
            line(&[("a", "1".into()), ("b", "x y".into())]),
            "a=1 b=\"x y\""
        );
        assert_eq!(quote("say \"hi\""), "\"say \\\"hi\\\"\"");
        assert_eq!(quote(""), "\"\"");
    }

    #[test]
    fn usage_exits_two() {
        let e = CliError::usage("--gaze", "needs a unit");
        assert_eq!(e.exit_code(), ExitCode::from(2));
        assert!(e.render().starts_with("error=usage flag=--gaze"));
    }
}

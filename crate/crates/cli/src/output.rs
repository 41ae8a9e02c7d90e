//! Artifact writing: atomic files, CSV tables and the JSON sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};

use catoptrics_core::units::{Angle, AngleUnit, Length};
use serde_json::{json, Map, Value};

use crate::diag::CliError;

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never observe a half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(|e| CliError::io(path, e))?;
    }
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// `path` with its extension replaced.
pub fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// File name only, so the sidecar does not depend on the output directory.
pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// RFC 4180 table with a header row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Table {
            writer,
            width: header.len(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let record: Vec<S> = fields.into_iter().collect();
        assert_eq!(record.len(), self.width, "row width differs from header");
        self.writer.write_record(record).expect("writing to memory");
    }

    /// Numbers as their shortest round-trip decimal form; empty for missing.
    pub fn numbers(&mut self, values: &[Option<f64>]) {
        self.row(
            values
                .iter()
                .map(|v| v.map(|x| x.to_string()).unwrap_or_default()),
        );
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory writer")
    }
}

/// Echo of a unit-suffixed input with its SI value.
pub fn length_json(l: Length) -> Value {
    json!({ "value": l.value, "unit": l.unit.suffix(), "meters": l.to_meters() })
}

pub fn angle_json(a: Angle) -> Value {
    let unit = match a.unit {
        AngleUnit::Deg => "deg",
        AngleUnit::Rad => "rad",
    };
    json!({ "value": a.value, "unit": unit, "radians": a.to_radians() })
}

/// JSON document written next to every primary artifact.
pub struct Sidecar {
    command: &'static str,
    inputs: Map<String, Value>,
    scene: Value,
    metrics: Map<String, Value>,
    outputs: Vec<String>,
}

impl Sidecar {
    pub fn new(command: &'static str) -> Self {
        Sidecar {
            command,
            inputs: Map::new(),
            scene: Value::Null,
            metrics: Map::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn scene(&mut self, scene: Value) -> &mut Self {
        self.scene = scene;
        self
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.metrics.insert(key.to_string(), value.into());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(file_name(path));
        self
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let doc = json!({
            "command": self.command,
            "inputs": self.inputs,
            "scene": self.scene,
            "metrics": self.metrics,
            "outputs": self.outputs,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc).expect("serializable");
        bytes.push(b'\n');
        bytes
    }
}

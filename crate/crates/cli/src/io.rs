//! File input and output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::exit::Failure;

pub fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Deserializes `value`, reporting the path of the offending field.
pub fn decode<T: DeserializeOwned>(value: Value, path: &Path) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at.is_empty() || at == "." {
            Failure::usage(format!("{}: {inner}", path.display()))
        } else {
            Failure::usage(format!("{}: at `{at}`: {inner}", path.display()))
        }
    })
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    decode(read_value(path)?, path)
}

fn sink(output: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match output {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Pretty JSON with a trailing newline. Field order follows the type
/// definitions and floats use the shortest round-trip form, so equal values
/// always produce equal bytes.
pub fn write_json<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    text.push('\n');
    let mut out = sink(output)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(output_failure)
}

pub fn write_csv<T: Serialize>(rows: &[T], output: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(output)?);
    for row in rows {
        w.serialize(row).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(e) => output_failure(e),
            other => Failure::internal(format!("{other:?}")),
        })?;
    }
    w.flush().map_err(output_failure)
}

/// A closed downstream pipe (as with `| head`) ends the process quietly.
fn output_failure(e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    Failure::usage(format!("writing output: {e}"))
}

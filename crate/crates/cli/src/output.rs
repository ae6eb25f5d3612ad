use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;

/// CSV text with `# key=value` metadata lines ahead of the column header.
pub struct CsvTable {
    meta: Vec<(String, String)>,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> CliResult<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(columns)?;
        Ok(Self { meta: Vec::new(), writer })
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> CliResult<Vec<u8>> {
        let mut out = Vec::new();
        for (k, v) in &self.meta {
            out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
        }
        let body = self
            .writer
            .into_inner()
            .map_err(|e| crate::error::CliError::Runtime(e.to_string()))?;
        out.extend_from_slice(&body);
        Ok(out)
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| crate::error::CliError::Runtime(e.to_string()))?;
    text.push('\n');
    Ok(text.into_bytes())
}

pub fn write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Shortest round-trip decimal, switching to exponent notation for very
/// small or large magnitudes (the same digits the JSON files carry).
pub fn num(value: f64) -> String {
    if value.is_finite() {
        serde_json::to_string(&value).expect("finite floats serialize")
    } else if value.is_nan() {
        "NaN".into()
    } else if value > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn optional(value: Option<f64>) -> String {
    value.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_precedes_header_and_lines_end_in_lf() {
        let mut t = CsvTable::new(&["a", "b"]).unwrap();
        t.meta("schemaVersion", 1);
        t.row(["0.5", "x, y"]).unwrap();
        let text = String::from_utf8(t.into_bytes().unwrap()).unwrap();
        assert_eq!(text, "# schemaVersion=1\na,b\n0.5,\"x, y\"\n");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -3.0, 4.438852396759785e-9, 20.789363565494764, 1e300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(4.4e-9), "4.4e-9");
        assert_eq!(num(f64::NAN), "NaN");
    }
}

use std::fs;
use std::io::Write;
use std::path::Path;

use qmaps::channels::DilationEnvelope;
use qmaps::maps::MapEnvelope;
use qmaps::process_tensor::ProcessTensorEnvelope;
use qmaps::superchannel::OperationEnvelope;
use qmaps::{ControlOperation, Dilation, ProcessTensor, QuantumMap};
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn read_value(path: &Path) -> CliResult<Value> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn parse<T: serde::de::DeserializeOwned>(value: Value) -> CliResult<T> {
    Ok(serde_json::from_value(value)?)
}

pub fn load_map(path: &Path) -> CliResult<QuantumMap> {
    let env: MapEnvelope = parse(read_value(path)?)?;
    Ok(QuantumMap::try_from(env)?)
}

pub fn load_dilation(path: &Path) -> CliResult<Dilation> {
    let env: DilationEnvelope = parse(read_value(path)?)?;
    Ok(Dilation::try_from(env)?)
}

pub fn load_operation(path: &Path) -> CliResult<ControlOperation> {
    let env: OperationEnvelope = parse(read_value(path)?)?;
    Ok(ControlOperation::try_from(env)?)
}

/// A dilation or a process tensor, told apart by the `choi` key.
pub enum ProcessInput {
    Dilation(Dilation),
    Tensor(ProcessTensor),
}

pub fn load_process(path: &Path) -> CliResult<ProcessInput> {
    let value = read_value(path)?;
    if value.get("choi").is_some() {
        let env: ProcessTensorEnvelope = parse(value)?;
        Ok(ProcessInput::Tensor(ProcessTensor::try_from(env)?))
    } else {
        let env: DilationEnvelope = parse(value)?;
        Ok(ProcessInput::Dilation(Dilation::try_from(env)?))
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// CSV table with a header row.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

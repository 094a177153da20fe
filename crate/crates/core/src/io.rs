//! JSON documents for circuits, phase vectors and benchmark configs, plus
//! CSV output for experiment records.
//!
//! Circuit documents use 1-indexed qubit lists:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "n": 3,
//!   "gates": [ { "qubits": [1], "theta": 0.5 }, { "qubits": [2, 3], "theta": 1.25 } ],
//!   "layers": [[0, 1]]
//! }
//! ```
//!
//! `layers` is optional; when present it lists gate indices per layer and
//! must use every index exactly once.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bench::{ExperimentRecord, HermitianConfig, QaoaConfig, SuiteConfig};
use crate::error::{Error, Result};
use crate::gate::{GateMask, GateSeq, Layering, MczrGate, PhaseVector};
use crate::phasepoly::simulate_diagonal;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateEntry {
    pub qubits: Vec<usize>,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    pub schema_version: String,
    pub n: u32,
    pub gates: Vec<GateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseVectorDocument {
    pub schema_version: String,
    pub n: u32,
    pub alpha: Vec<f64>,
}

fn doc_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Document {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

fn check_version(path: &Path, version: &str) -> Result<()> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(doc_err(
            path,
            format!("unsupported schema_version {version:?}, expected {SCHEMA_VERSION:?}"),
        ))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    // serde_json errors carry the line and column of the offending field
    serde_json::from_str(text).map_err(|e| doc_err(path, e.to_string()))
}

impl CircuitDocument {
    pub fn from_seq(seq: &GateSeq) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            n: seq.n(),
            gates: seq.gates().iter().map(entry_of).collect(),
            layers: None,
        }
    }

    /// Gates listed layer by layer, with the matching `layers` block.
    pub fn from_layering(layering: &Layering) -> Self {
        let mut next = 0;
        let layers = layering
            .layers()
            .iter()
            .map(|l| {
                let ids = (next..next + l.len()).collect();
                next += l.len();
                ids
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.into(),
            n: layering.n(),
            gates: layering.layers().iter().flatten().map(entry_of).collect(),
            layers: Some(layers),
        }
    }

    /// Validates and converts. `path` only labels errors.
    pub fn into_circuit(self, path: &Path) -> Result<(GateSeq, Option<Layering>)> {
        check_version(path, &self.schema_version)?;
        let n = self.n;
        let mut seq = GateSeq::new(n).map_err(|e| doc_err(path, e.to_string()))?;
        for (index, entry) in self.gates.iter().enumerate() {
            let gate_err = |source: Error| Error::Gate {
                index,
                source: Box::new(source),
            };
            if entry.qubits.is_empty() {
                return Err(doc_err(path, gate_err(Error::ZeroMaskGate).to_string()));
            }
            if entry.qubits.windows(2).any(|w| w[0] >= w[1]) {
                return Err(doc_err(
                    path,
                    format!("gate {index}: qubits must be sorted and distinct"),
                ));
            }
            if !entry.theta.is_finite() {
                return Err(doc_err(path, format!("gate {index}: theta is not finite")));
            }
            let mask = GateMask::from_qubits(&entry.qubits, n)
                .map_err(|e| doc_err(path, gate_err(e).to_string()))?;
            seq.push(MczrGate::new(mask, entry.theta))
                .map_err(|e| doc_err(path, gate_err(e).to_string()))?;
        }

        let layering = match self.layers {
            None => None,
            Some(layers) => {
                let mut used = vec![false; seq.len()];
                let mut built = Vec::with_capacity(layers.len());
                for (li, layer) in layers.iter().enumerate() {
                    let mut gates = Vec::with_capacity(layer.len());
                    for &idx in layer {
                        if idx >= seq.len() {
                            return Err(doc_err(
                                path,
                                format!("layer {li}: gate index {idx} out of range"),
                            ));
                        }
                        if std::mem::replace(&mut used[idx], true) {
                            return Err(doc_err(
                                path,
                                format!("layer {li}: gate index {idx} used twice"),
                            ));
                        }
                        gates.push(seq.gates()[idx]);
                    }
                    built.push(gates);
                }
                if let Some(missing) = used.iter().position(|u| !u) {
                    return Err(doc_err(path, format!("gate {missing} is in no layer")));
                }
                Some(Layering::new(n, built).map_err(|e| doc_err(path, e.to_string()))?)
            }
        };
        Ok((seq, layering))
    }
}

fn entry_of(g: &MczrGate) -> GateEntry {
    GateEntry {
        qubits: g.mask().qubits(),
        theta: g.theta(),
    }
}

impl PhaseVectorDocument {
    pub fn from_phase_vector(pv: &PhaseVector) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            n: pv.n(),
            alpha: (0..pv.len()).map(|q| pv.phase_at(q)).collect(),
        }
    }

    pub fn into_phase_vector(self, path: &Path) -> Result<PhaseVector> {
        check_version(path, &self.schema_version)?;
        if let Some(q) = self.alpha.iter().position(|a| !a.is_finite()) {
            return Err(doc_err(path, format!("alpha[{q}] is not finite")));
        }
        PhaseVector::new(self.n, self.alpha).map_err(|e| doc_err(path, e.to_string()))
    }
}

pub fn parse_circuit(text: &str, path: &Path) -> Result<(GateSeq, Option<Layering>)> {
    parse::<CircuitDocument>(path, text)?.into_circuit(path)
}

pub fn read_circuit(path: impl AsRef<Path>) -> Result<(GateSeq, Option<Layering>)> {
    let path = path.as_ref();
    parse_circuit(&fs::read_to_string(path)?, path)
}

pub fn circuit_to_string(seq: &GateSeq) -> String {
    to_json(&CircuitDocument::from_seq(seq))
}

pub fn layering_to_string(layering: &Layering) -> String {
    to_json(&CircuitDocument::from_layering(layering))
}

pub fn write_circuit(seq: &GateSeq, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, circuit_to_string(seq))?;
    Ok(())
}

pub fn write_layering(layering: &Layering, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, layering_to_string(layering))?;
    Ok(())
}

pub fn parse_phase_vector(text: &str, path: &Path) -> Result<PhaseVector> {
    parse::<PhaseVectorDocument>(path, text)?.into_phase_vector(path)
}

pub fn read_phase_vector(path: impl AsRef<Path>) -> Result<PhaseVector> {
    let path = path.as_ref();
    parse_phase_vector(&fs::read_to_string(path)?, path)
}

pub fn phase_vector_to_string(pv: &PhaseVector) -> String {
    to_json(&PhaseVectorDocument::from_phase_vector(pv))
}

pub fn write_phase_vector(pv: &PhaseVector, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, phase_vector_to_string(pv))?;
    Ok(())
}

/// Phase vector from either document kind; circuits are simulated.
pub fn read_diagonal(path: impl AsRef<Path>) -> Result<PhaseVector> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let value: Value = parse(path, &text)?;
    if value.get("alpha").is_some() {
        parse_phase_vector(&text, path)
    } else if value.get("gates").is_some() {
        let (seq, _) = parse_circuit(&text, path)?;
        simulate_diagonal(&seq)
    } else {
        Err(doc_err(path, "neither a circuit nor a phase vector document"))
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Config file for one suite kind. A `kind` key, if present, must match.
fn read_suite_section<T: for<'de> Deserialize<'de>>(path: &Path, kind: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    let mut value: Value = parse(path, &text)?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(k) = obj.remove("kind") {
            if k.as_str() != Some(kind) {
                return Err(doc_err(path, format!("expected kind {kind:?}, found {k}")));
            }
        }
    }
    serde_json::from_value(value).map_err(|e| doc_err(path, e.to_string()))
}

pub fn read_hermitian_config(path: impl AsRef<Path>) -> Result<HermitianConfig> {
    read_suite_section(path.as_ref(), "hermitian")
}

pub fn read_qaoa_config(path: impl AsRef<Path>) -> Result<QaoaConfig> {
    read_suite_section(path.as_ref(), "qaoa")
}

/// Tagged config (`"kind": "hermitian" | "qaoa"`).
pub fn read_suite_config(path: impl AsRef<Path>) -> Result<SuiteConfig> {
    let path = path.as_ref();
    parse(path, &fs::read_to_string(path)?)
}

/// CSV with the fixed column order of [`ExperimentRecord`].
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(crate::bench::CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

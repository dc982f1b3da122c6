//! Instance JSON and the solver detail stream.
//!
//! The instance document is
//!
//! ```json
//! {"n": 2, "power_budget": 1.0, "sensing_budget": 1,
//!  "channels": [{"q": 0.5, "noise_var": 1.0}, {"q": 0.25, "noise_var": 2.0}]}
//! ```
//!
//! with the fields in exactly that order and every float written with 17
//! significant digits, so writing is byte-deterministic and reading recovers
//! the identical `f64`s.

use std::fmt;
use std::io::Write as _;

use serde::{Deserialize, Serialize};

use sensefill_core::{ChannelProfile, Instance, OptResult};

/// Errors from reading or writing project files.
#[derive(Debug)]
pub enum Error {
    Json(serde_json::Error),
    Model(sensefill_core::Error),
    Io(std::io::Error),
    /// Document parsed but disagrees with itself (e.g. `n` vs channel count).
    Schema(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Json(e) => write!(f, "malformed instance document: {e}"),
            Error::Model(e) => write!(f, "invalid instance: {e}"),
            Error::Io(e) => write!(f, "{e}"),
            Error::Schema(msg) => write!(f, "inconsistent instance document: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}

impl From<sensefill_core::Error> for Error {
    fn from(e: sensefill_core::Error) -> Self {
        Error::Model(e)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    n: usize,
    power_budget: f64,
    sensing_budget: usize,
    channels: Vec<ChannelWire>,
}

#[derive(Serialize, Deserialize)]
struct ChannelWire {
    q: f64,
    noise_var: f64,
}

/// serde_json formatter that writes every float with 17 significant digits.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize an instance to the canonical JSON document (no trailing newline).
pub fn write_instance(inst: &Instance) -> String {
    let wire = InstanceWire {
        n: inst.n(),
        power_budget: inst.power_budget,
        sensing_budget: inst.sensing_budget,
        channels: inst
            .channels
            .iter()
            .map(|c| ChannelWire { q: c.avail_prob, noise_var: c.noise_var })
            .collect(),
    };
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    wire.serialize(&mut ser).expect("instance serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

/// Parse and validate an instance document.
pub fn read_instance(text: &str) -> Result<Instance, Error> {
    let wire: InstanceWire = serde_json::from_str(text)?;
    if wire.n != wire.channels.len() {
        return Err(Error::Schema(format!(
            "n = {} but {} channels listed",
            wire.n,
            wire.channels.len()
        )));
    }
    let inst = Instance::new(
        wire.channels
            .into_iter()
            .map(|c| ChannelProfile::new(c.q, c.noise_var))
            .collect(),
        wire.power_budget,
        wire.sensing_budget,
    );
    inst.validate()?;
    Ok(inst)
}

/// Write the instance document plus a trailing newline to a file.
pub fn write_instance_file(path: &std::path::Path, inst: &Instance) -> Result<(), Error> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(write_instance(inst).as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn read_instance_file(path: &std::path::Path) -> Result<Instance, Error> {
    read_instance(&std::fs::read_to_string(path)?)
}

/// Solver detail as a JSON value: selection, powers, and the iteration trace.
pub fn result_detail(inst: &Instance, result: &OptResult) -> serde_json::Value {
    serde_json::json!({
        "method": result.method.name(),
        "capacity_nats": result.alloc.capacity_nats,
        "capacity_bits": result.alloc.capacity_nats / std::f64::consts::LN_2,
        "water_level": result.alloc.water_level,
        "min_water_level": result.min_water_level,
        "certified_optimal": result.certified_optimal,
        "iterations": result.iterations(),
        "selected": result.sensing.indices(),
        "selected_bitmask_hex": result.sensing.bitmask_hex(),
        "powers": result.alloc.powers,
        "power_budget": inst.power_budget,
        "trace": result
            .trace
            .iter()
            .map(|step| {
                serde_json::json!({
                    "water_level": step.water_level,
                    "selected": step.selected.indices(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

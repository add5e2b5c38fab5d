//! Bundled device presets: connectivity graph plus average error rates.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConnectivityGraph;
use crate::noise::NoiseParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PresetRepr", into = "PresetRepr")]
pub struct DevicePreset {
    pub name: String,
    pub graph: ConnectivityGraph,
    pub noise: NoiseParams,
}

#[derive(Serialize, Deserialize)]
struct PresetRepr {
    name: String,
    n_vertices: usize,
    edges: Vec<[usize; 2]>,
    noise: NoiseParams,
}

impl TryFrom<PresetRepr> for DevicePreset {
    type Error = Error;

    fn try_from(r: PresetRepr) -> Result<Self> {
        r.noise.validate()?;
        let graph =
            ConnectivityGraph::from_edges(r.n_vertices, r.edges.iter().map(|e| (e[0], e[1])))?;
        Ok(Self {
            name: r.name,
            graph,
            noise: r.noise,
        })
    }
}

impl From<DevicePreset> for PresetRepr {
    fn from(d: DevicePreset) -> Self {
        PresetRepr {
            name: d.name,
            n_vertices: d.graph.n_vertices(),
            edges: d.graph.edges().map(|(a, b)| [a, b]).collect(),
            noise: d.noise,
        }
    }
}

const BUNDLED: [(&str, &str); 5] = [
    ("star-5", include_str!("../data/devices/star-5.json")),
    ("falcon-7", include_str!("../data/devices/falcon-7.json")),
    (
        "ion-trap-20",
        include_str!("../data/devices/ion-trap-20.json"),
    ),
    (
        "sycamore-53",
        include_str!("../data/devices/sycamore-53.json"),
    ),
    ("eagle-127", include_str!("../data/devices/eagle-127.json")),
];

impl DevicePreset {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_vertices()
    }

    /// Bundled preset by name.
    pub fn bundled(name: &str) -> Result<Self> {
        BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownDevice(name.to_owned()))
            .and_then(|(_, json)| Self::from_json(json))
    }

    /// Bundled preset by name, otherwise a preset JSON file at that path.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match Self::bundled(name_or_path) {
            Err(Error::UnknownDevice(_)) if Path::new(name_or_path).is_file() => {
                Self::from_json(&std::fs::read_to_string(name_or_path)?)
            }
            other => other,
        }
    }
}

/// Names of the bundled presets.
pub fn preset_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn presets() -> Vec<DevicePreset> {
    preset_names()
        .into_iter()
        .map(|n| DevicePreset::bundled(n).expect("bundled presets parse"))
        .collect()
}

//! JSON network documents: a network plus its detector layout.
//!
//! ```json
//! {
//!   "network": {
//!     "arms": 2,
//!     "elements": [
//!       { "kind": "beam_splitter", "arms": [0, 1], "reflectivity": 0.5 },
//!       { "kind": "polarizer", "arm": 0, "angle": 0.7853981633974483 }
//!     ]
//!   },
//!   "detectors": [[0], [1]]
//! }
//! ```
//! Angles and phases are in radians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{DetectorLayout, LinearNetwork};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub network: LinearNetwork,
    pub detectors: Vec<Vec<usize>>,
}

impl NetworkDocument {
    pub fn new(network: LinearNetwork, layout: DetectorLayout) -> Self {
        NetworkDocument {
            network,
            detectors: layout.detectors,
        }
    }

    pub fn layout(&self) -> DetectorLayout {
        DetectorLayout::new(self.detectors.clone())
    }
}

pub fn parse_network_document(text: &str) -> Result<NetworkDocument> {
    let doc: NetworkDocument =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    doc.network.validate()?;
    doc.layout().validate(&doc.network)?;
    Ok(doc)
}

pub fn write_network_document(doc: &NetworkDocument) -> String {
    serde_json::to_string_pretty(doc).expect("network documents always serialize") + "\n"
}

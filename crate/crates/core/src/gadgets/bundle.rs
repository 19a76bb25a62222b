use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};
use crate::graph::{parse_graph, serialize_graph, Graph};

use super::library::{s_link, t_gadget, theta_gadget, variable_gadget, Gadget};
use super::{certify, ForcingContract, GadgetCertificate};

/// Graph text, contract and certificate of one gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetBundle {
    pub name: String,
    pub graph: String,
    pub contract: ForcingContract,
    pub certificate: GadgetCertificate,
}

impl GadgetBundle {
    pub fn from_gadget(g: &Gadget) -> Result<GadgetBundle> {
        let certificate = certify(&g.graph, &g.contract)?;
        Ok(GadgetBundle { name: g.name.clone(), graph: serialize_graph(&g.graph), contract: g.contract.clone(), certificate })
    }

    pub fn parse_graph(&self) -> Result<Graph> {
        parse_graph(&self.graph)
    }

    /// Certificate recomputed from the stored graph and contract.
    pub fn recertify(&self) -> Result<GadgetCertificate> {
        certify(&self.parse_graph()?, &self.contract)
    }

    /// SHA-256 over graph text and contract JSON.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.graph.as_bytes());
        h.update(serde_json::to_string(&self.contract).expect("contract serializes").as_bytes());
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<GadgetBundle> {
        serde_json::from_str(text).map_err(|e| invalid(format!("bad gadget bundle: {e}")))
    }

    pub fn load(path: &Path) -> Result<GadgetBundle> {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        GadgetBundle::from_json(&text)
    }
}

pub fn bundle_file_name(b: &GadgetBundle) -> String {
    format!("{}-{}.json", b.name, &b.content_hash()[..16])
}

/// The gadgets shipped with the crate, freshly certified.
pub fn shipped_bundles() -> Result<Vec<GadgetBundle>> {
    let gadgets = [t_gadget(), s_link(), variable_gadget(1, 1)?, variable_gadget(2, 2)?, theta_gadget()];
    gadgets.iter().map(GadgetBundle::from_gadget).collect()
}

/// Writes every shipped bundle into `dir`; returns the paths written.
pub fn write_shipped_bundles(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?;
    shipped_bundles()?
        .iter()
        .map(|b| {
            let p = dir.join(bundle_file_name(b));
            fs::write(&p, b.to_json()).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
            Ok(p)
        })
        .collect()
}

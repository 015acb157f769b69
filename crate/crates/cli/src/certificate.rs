//! On-disk certificate format.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use altsurg::changemaker::Flavor;
use altsurg::osb_search::{SearchMode, SuperbaseCertificate, ALGORITHM_VERSION};

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> String {
    format!("altsurg {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub tool: String,
    pub algorithm_version: String,
    pub rho: Vec<i64>,
    pub slope: String,
    pub flavor: Flavor,
    pub sigma: Vec<i64>,
    pub disc: i64,
    pub mode: SearchMode,
    pub certificate: SuperbaseCertificate,
    /// SHA-256 of the file serialized with this field empty.
    pub content_hash: String,
}

impl CertificateFile {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rho: Vec<i64>,
        flavor: Flavor,
        sigma: Vec<i64>,
        disc: i64,
        mode: SearchMode,
        certificate: SuperbaseCertificate,
    ) -> Self {
        let mut f = CertificateFile {
            schema_version: SCHEMA_VERSION,
            tool: tool_version(),
            algorithm_version: ALGORITHM_VERSION.to_string(),
            rho,
            slope: flavor.slope_string(),
            flavor,
            sigma,
            disc,
            mode,
            certificate,
            content_hash: String::new(),
        };
        f.content_hash = f.compute_hash();
        f
    }

    pub fn compute_hash(&self) -> String {
        let mut copy = self.clone();
        copy.content_hash.clear();
        let bytes = serde_json::to_vec(&copy).expect("certificate serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn hash_ok(&self) -> bool {
        self.compute_hash() == self.content_hash
    }
}

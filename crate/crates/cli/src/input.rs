//! Instance files.
//!
//! ```json
//! {"machines": 3, "sizes": ["6", "5", "4", "3", "2"], "declared_sum": "20"}
//! ```
//!
//! Sizes may be JSON numbers or `"a/b"` strings. The canonical form written
//! by [`InstanceFile::to_canonical_json`] uses reduced fraction strings and
//! two-space indentation with a trailing newline.

use std::path::Path;

use semisched::{Instance, Rational};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub machines: usize,
    pub sizes: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_sum: Option<Rational>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_instance(instance: &Instance, with_sum: bool) -> Self {
        InstanceFile {
            machines: instance.machines(),
            sizes: instance.sizes().to_vec(),
            declared_sum: with_sum.then(|| instance.sum()),
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("instance files always serialize");
        out.push('\n');
        out
    }

    /// Validates the sizes and, when present, the declared total.
    pub fn to_instance(&self) -> CliResult<Instance> {
        let instance = Instance::new(self.machines, self.sizes.clone())?;
        if let Some(declared) = self.declared_sum {
            if declared != instance.sum() {
                return Err(CliError::Invalid(format!(
                    "declared_sum must equal the sum of sizes: declared {declared}, sizes add up to {}",
                    instance.sum()
                )));
            }
        }
        Ok(instance)
    }
}

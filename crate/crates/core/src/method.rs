use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::lattice::ChainDecomposition;
use crate::pipeline::run_pipeline;
use crate::symmetric::symmetric_decomposition;

/// Which construction produces a minimum chain partition of `2^[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Symmetric,
    Uniform,
}

impl Method {
    /// Builds the partition; `seed` is ignored by the symmetric method.
    pub fn decompose(self, n: u32, seed: u64) -> Result<ChainDecomposition> {
        match self {
            Method::Symmetric => symmetric_decomposition(n),
            Method::Uniform => run_pipeline(n, seed).map(|(d, _)| d),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Symmetric => "symmetric",
            Method::Uniform => "uniform",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "symmetric" => Ok(Method::Symmetric),
            "uniform" => Ok(Method::Uniform),
            _ => domain(format!(
                "unknown method {s:?}, expected symmetric or uniform"
            )),
        }
    }
}

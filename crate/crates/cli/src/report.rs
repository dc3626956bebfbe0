use aqslie::{Error, ErrorFamily};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable outcome of one command run.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    /// `sha256:<hex>` over the input files, in argument order.
    pub input_digest: Option<String>,
    pub result: Option<Value>,
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub family: &'static str,
    pub exit_code: i32,
    pub message: String,
}

pub fn exit_code(family: ErrorFamily) -> i32 {
    match family {
        ErrorFamily::Parse => 2,
        ErrorFamily::Precondition => 3,
        ErrorFamily::Internal => 4,
    }
}

impl ErrorInfo {
    pub fn from_anyhow(err: &anyhow::Error) -> Self {
        let (code, family) = if let Some(e) = err.downcast_ref::<Error>() {
            (e.code().to_string(), e.family())
        } else if err.downcast_ref::<std::io::Error>().is_some() {
            ("Io".to_string(), ErrorFamily::Parse)
        } else {
            ("Usage".to_string(), ErrorFamily::Parse)
        };
        Self {
            code,
            family: family.name(),
            exit_code: exit_code(family),
            message: format!("{err:#}"),
        }
    }
}

pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> Option<String> {
    let mut hasher = Sha256::new();
    let mut any = false;
    for bytes in inputs {
        hasher.update(bytes);
        any = true;
    }
    any.then(|| format!("sha256:{:x}", hasher.finalize()))
}

//! Check orchestration behind the `qdiag` binary: every identity is a named
//! check producing [`CheckReport`]s.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use qdiag_core::hecke::HeckeError;
use qdiag_core::linalgq::LinalgError;
use qdiag_core::qma::DEFAULT_MAX_BLOCK;
use qdiag_core::{IdealVariant, PpError, QmaError, RmatError, Sign, SymError};

pub mod cache;
mod checks;

pub use cache::BlockCache;

/// Checks in dependency order; `all` runs them in this order.
pub const CHECKS: [&str; 10] = [
    "hecke-axioms",
    "idempotents",
    "rhat",
    "appendix",
    "systd",
    "diag-kernel",
    "braid-identity",
    "preplactic",
    "lemma-brute",
    "conjecture",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown check {0:?}; available: {checks}, all", checks = CHECKS.join(", "))]
    UnknownCheck(String),
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Pp(Box<PpError>),
    #[error(transparent)]
    Qma(Box<QmaError>),
    #[error(transparent)]
    Rmat(Box<RmatError>),
    #[error(transparent)]
    Hecke(Box<HeckeError>),
    #[error(transparent)]
    Linalg(Box<LinalgError>),
    #[error(transparent)]
    Sym(Box<SymError>),
    #[error("cache or dump I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

// core errors nest deeply; boxing keeps `Result<_, CliError>` small
macro_rules! boxed_from {
    ($($variant:ident($ty:ty)),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(Box::new(e))
            }
        })*
    };
}

boxed_from!(
    Pp(PpError),
    Qma(QmaError),
    Rmat(RmatError),
    Hecke(HeckeError),
    Linalg(LinalgError),
    Sym(SymError)
);

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub sign: Option<Sign>,
    pub variant: Option<IdealVariant>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: ReportParams,
    pub status: Status,
    /// One-line human summary; multi-line for checks that print a matrix.
    pub summary: String,
    /// Dimensions, scalars and matrices backing the verdict.
    pub detail: serde_json::Value,
    /// Present whenever `status` is FAIL.
    pub witness: Option<String>,
    pub wall_ms: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The report with `wall_ms` zeroed, for comparisons across runs.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_ms: 0.0,
            ..self.clone()
        }
    }
}

/// Outcome of one check before timing and parameters are attached.
pub(crate) struct Outcome {
    pub params: ReportParams,
    pub summary: String,
    pub detail: serde_json::Value,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn pass(params: ReportParams, summary: String, detail: serde_json::Value) -> Self {
        Self {
            params,
            summary,
            detail,
            witness: None,
        }
    }

    /// `witness` is `Some` exactly when the check failed.
    pub fn verdict(
        params: ReportParams,
        summary: String,
        detail: serde_json::Value,
        witness: Option<String>,
    ) -> Self {
        Self {
            params,
            summary,
            detail,
            witness,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub sign: Option<Sign>,
    pub variant: Option<IdealVariant>,
    pub max_block: usize,
    pub cache: Option<Arc<BlockCache>>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            n: None,
            r: None,
            sign: None,
            variant: None,
            max_block: DEFAULT_MAX_BLOCK,
            cache: None,
        }
    }
}

impl Options {
    pub(crate) fn signs(&self) -> Vec<Sign> {
        match self.sign {
            Some(s) => vec![s],
            None => vec![Sign::Plus, Sign::Minus],
        }
    }

    pub(crate) fn variants(&self) -> Vec<IdealVariant> {
        match self.variant {
            Some(v) => vec![v],
            None => vec![IdealVariant::Concat, IdealVariant::ActionClosed],
        }
    }
}

fn timed(check: &str, f: impl FnOnce() -> Result<Vec<Outcome>, CliError>) -> Result<Vec<CheckReport>, CliError> {
    let start = Instant::now();
    let outcomes = f()?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3 / outcomes.len().max(1) as f64;
    Ok(outcomes
        .into_iter()
        .map(|o| CheckReport {
            check: check.to_string(),
            params: o.params,
            status: if o.witness.is_some() { Status::Fail } else { Status::Pass },
            summary: o.summary,
            detail: o.detail,
            witness: o.witness,
            wall_ms,
        })
        .collect())
}

/// Runs one named check, or `all` of them in dependency order.
pub fn run(check: &str, opts: &Options) -> Result<Vec<CheckReport>, CliError> {
    if check == "all" {
        let mut out = Vec::new();
        for c in CHECKS {
            out.extend(run(c, opts)?);
        }
        return Ok(out);
    }
    let f = match check {
        "hecke-axioms" => checks::hecke_axioms,
        "idempotents" => checks::idempotents,
        "rhat" => checks::rhat,
        "appendix" => checks::appendix,
        "systd" => checks::systd,
        "diag-kernel" => checks::diag_kernel,
        "braid-identity" => checks::braid_identity,
        "preplactic" => checks::preplactic,
        "lemma-brute" => checks::lemma_brute,
        "conjecture" => checks::conjecture,
        other => return Err(CliError::UnknownCheck(other.to_string())),
    };
    timed(check, || f(opts))
}

/// 0 when every report passed, 1 otherwise.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::passed) {
        0
    } else {
        1
    }
}

/// Plain-text rendering, one block per report.
pub fn render_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let mut params = Vec::new();
        if let Some(n) = r.params.n {
            params.push(format!("n={n}"));
        }
        if let Some(x) = r.params.r {
            params.push(format!("r={x}"));
        }
        if let Some(s) = r.params.sign {
            params.push(format!("sign={s}"));
        }
        if let Some(v) = r.params.variant {
            params.push(format!("variant={v}"));
        }
        out.push_str(&format!(
            "{} {} [{}] ({:.1} ms)\n",
            r.status,
            r.check,
            params.join(" "),
            r.wall_ms
        ));
        for line in r.summary.lines() {
            out.push_str(&format!("    {line}\n"));
        }
        if let Some(w) = &r.witness {
            out.push_str(&format!("    witness: {w}\n"));
        }
    }
    out
}

//! Output records and their CSV and JSON encodings.
//!
//! CSV output starts with a `# config {...}` line echoing the resolved
//! configuration as JSON; data rows follow a fixed header and floats carry
//! 17 significant digits. Lines end in `\n` on every platform.

use std::io::{self, Write};

use diamlab_core::LimitLaw;
use serde::Serialize;

use crate::harness::{DepoissonisationReport, Process, Replication, TableRow};
use crate::oracle::{KernelOracleReport, SegmentOracleReport};
use crate::spec_json::SpecJson;

pub const SIMULATE_HEADER: [&str; 4] = ["replication_index", "n_points_realized", "diameter", "scaled_deficit"];
pub const LIMIT_HEADER: [&str; 2] = ["t", "cdf"];
pub const LIMIT_ENVELOPE_HEADER: [&str; 4] = ["t", "cdf", "envelope_lower", "envelope_upper"];
pub const COMPARE_HEADER: [&str; 3] = ["ks_poisson", "ks_binomial", "ks_cross"];
pub const TABLE_HEADER: [&str; 2] = ["n", "ks"];

/// `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawJson {
    Continuous { gamma: f64, sigma0: f64 },
    Segments { probs: Vec<f64> },
    SegmentsZeta,
}

impl From<&LimitLaw> for LawJson {
    fn from(law: &LimitLaw) -> Self {
        match law {
            LimitLaw::Continuous { gamma, sigma0 } => Self::Continuous {
                gamma: *gamma,
                sigma0: *sigma0,
            },
            LimitLaw::Segments { probs } => Self::Segments { probs: probs.clone() },
            LimitLaw::SegmentsZeta => Self::SegmentsZeta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

/// Everything needed to reproduce an output file. The thread count is left
/// out because results do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<LawJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub process: Option<Process>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<TGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

impl RunConfig {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            spec: None,
            law: None,
            process: None,
            n: None,
            n_list: None,
            replications: None,
            seed: None,
            gamma: None,
            t_grid: None,
            cases: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSummary {
    /// `None` when no limit law is known for the family.
    pub ks_distance: Option<f64>,
    pub usable: usize,
    pub degenerate: usize,
    pub mean_scaled_deficit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub t: f64,
    pub cdf: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub kernel: KernelOracleReport,
    pub segment: SegmentOracleReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Body {
    Simulate {
        replications: Vec<Replication>,
        summary: SimulateSummary,
    },
    Limit {
        rows: Vec<LimitRow>,
    },
    Compare {
        result: DepoissonisationReport,
    },
    Table {
        rows: Vec<TableRow>,
    },
    Oracle(OracleSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    #[serde(flatten)]
    pub body: Body,
}

impl Report {
    pub fn write_json<W: Write>(&self, out: W) -> io::Result<()> {
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# config {}", serde_json::to_string(&self.config)?)?;
        let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        match &self.body {
            Body::Simulate { replications, summary } => {
                csv.write_record(SIMULATE_HEADER)?;
                for r in replications {
                    csv.write_record([
                        r.index.to_string(),
                        r.points.to_string(),
                        r.diameter.map(fmt_f64).unwrap_or_default(),
                        fmt_f64(r.scaled_deficit),
                    ])?;
                }
                let mut out = csv.into_inner().map_err(|e| e.into_error())?;
                writeln!(
                    out,
                    "# summary ks_distance={} usable={} degenerate={} mean_scaled_deficit={}",
                    summary.ks_distance.map(fmt_f64).unwrap_or_else(|| "none".into()),
                    summary.usable,
                    summary.degenerate,
                    fmt_f64(summary.mean_scaled_deficit)
                )?;
                return out.flush();
            }
            Body::Limit { rows } => {
                let envelope = rows.first().is_some_and(|r| r.envelope_lower.is_some());
                if envelope {
                    csv.write_record(LIMIT_ENVELOPE_HEADER)?;
                } else {
                    csv.write_record(LIMIT_HEADER)?;
                }
                for r in rows {
                    let mut fields = vec![fmt_f64(r.t), fmt_f64(r.cdf)];
                    if envelope {
                        fields.push(r.envelope_lower.map(fmt_f64).unwrap_or_default());
                        fields.push(r.envelope_upper.map(fmt_f64).unwrap_or_default());
                    }
                    csv.write_record(fields)?;
                }
            }
            Body::Compare { result } => {
                csv.write_record(COMPARE_HEADER)?;
                csv.write_record([fmt_f64(result.ks_poisson), fmt_f64(result.ks_binomial), fmt_f64(result.ks_cross)])?;
            }
            Body::Table { rows } => {
                csv.write_record(TABLE_HEADER)?;
                for r in rows {
                    csv.write_record([fmt_f64(r.n), fmt_f64(r.ks)])?;
                }
            }
            Body::Oracle(summary) => {
                let mut out = csv.into_inner().map_err(|e| e.into_error())?;
                write_oracle_text(&mut out, summary)?;
                return out.flush();
            }
        }
        csv.flush()
    }
}

/// Plain-text oracle report; the last line reads `passed/total passed`.
pub fn write_oracle_text<W: Write>(out: &mut W, summary: &OracleSummary) -> io::Result<()> {
    let k = &summary.kernel;
    writeln!(out, "kernel: {}/{} passed", k.passed, k.total)?;
    if !k.mismatches.is_empty() {
        writeln!(out, "kernel mismatches: {:?}", k.mismatches)?;
    }
    let s = &summary.segment;
    writeln!(
        out,
        "segment range law: n={} replications={} ks={} band={} {}",
        s.n,
        s.replications,
        fmt_f64(s.ks),
        fmt_f64(s.band),
        if s.ok() { "passed" } else { "FAILED" }
    )?;
    let passed = k.passed + usize::from(s.ok());
    writeln!(out, "{}/{} passed", passed, k.total + 1)
}

//! Versioned JSON run archives.
//!
//! One document per run with top-level keys `format_version`, `created_at`,
//! `config`, `trace`, `final_state`, `final_residuals`, `final_delta`,
//! `total_states_generated` and `fingerprint`. Complex amplitudes are
//! `[re, im]` pairs written with the shortest decimal form that round-trips
//! the f64 bit pattern. Loading re-evaluates the final state and rejects the
//! document if the stored residuals disagree.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PureState;
use crate::measures::{fingerprint, residual_report, Alpha, PairingLayout, ResidualReport, StateFingerprint};
use crate::sampler::RngSeed;
use crate::search::{Objective, RunRecord, SearchConfig, TraceEntry};

pub const FORMAT_VERSION: u32 = 1;

const NORM_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-9;

/// A run record plus the metadata and fingerprint written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArchive {
    pub format_version: u32,
    pub created_at: DateTime<Utc>,
    pub record: RunRecord,
    pub fingerprint: StateFingerprint,
}

impl RunArchive {
    /// Stamps `record` with the current time and fingerprints its final state.
    pub fn new(record: RunRecord) -> Result<Self> {
        Self::with_timestamp(record, Utc::now())
    }

    pub fn with_timestamp(record: RunRecord, created_at: DateTime<Utc>) -> Result<Self> {
        let fingerprint = fingerprint(&record.final_state, &record.config.layout, record.config.alpha)?;
        Ok(Self {
            format_version: FORMAT_VERSION,
            created_at,
            record,
            fingerprint,
        })
    }
}

type Amplitudes = Vec<[f64; 2]>;

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    alpha: Alpha,
    objective: Objective,
    layout: PairingLayout,
    delta0: f64,
    counter_max: u64,
    delta_min: f64,
    rng: RngSeed,
    seed_state: Option<Amplitudes>,
}

#[derive(Serialize, Deserialize)]
struct TraceDoc {
    step_index: u64,
    delta: f64,
    state: Amplitudes,
    ss_residual: f64,
    monogamy_residual: f64,
    states_since_accept: u64,
}

#[derive(Serialize, Deserialize)]
struct ArchiveDoc {
    format_version: u32,
    created_at: String,
    config: ConfigDoc,
    trace: Vec<TraceDoc>,
    final_state: Amplitudes,
    final_residuals: ResidualReport,
    final_delta: f64,
    total_states_generated: u64,
    fingerprint: StateFingerprint,
}

fn amplitudes_of(psi: &PureState) -> Amplitudes {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

/// Rebuilds a state, renormalizing only when the stored norm is off by more
/// than the in-memory tolerance so well-formed documents round-trip exactly.
fn state_from(amps: &Amplitudes) -> Result<PureState> {
    let values: Vec<Complex64> = amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    let norm = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    match PureState::new(values.clone()) {
        Ok(state) => Ok(state),
        Err(Error::NotNormalized(_)) => PureState::normalized(values),
        Err(e) => Err(Error::Malformed(e.to_string())),
    }
}

impl ArchiveDoc {
    fn from_archive(archive: &RunArchive) -> Self {
        let record = &archive.record;
        let c = &record.config;
        ArchiveDoc {
            format_version: archive.format_version,
            created_at: archive.created_at.to_rfc3339_opts(SecondsFormat::Micros, true),
            config: ConfigDoc {
                alpha: c.alpha,
                objective: c.objective,
                layout: c.layout,
                delta0: c.delta0,
                counter_max: c.counter_max,
                delta_min: c.delta_min,
                rng: c.rng,
                seed_state: c.seed_state.as_ref().map(amplitudes_of),
            },
            trace: record
                .trace
                .iter()
                .map(|e| TraceDoc {
                    step_index: e.step_index,
                    delta: e.delta,
                    state: amplitudes_of(&e.state),
                    ss_residual: e.ss_residual,
                    monogamy_residual: e.monogamy_residual,
                    states_since_accept: e.states_since_accept,
                })
                .collect(),
            final_state: amplitudes_of(&record.final_state),
            final_residuals: record.final_residuals,
            final_delta: record.final_delta,
            total_states_generated: record.total_states_generated,
            fingerprint: archive.fingerprint.clone(),
        }
    }

    fn into_archive(self) -> Result<RunArchive> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnknownVersion(self.format_version));
        }
        let created_at = DateTime::parse_from_rfc3339(&self.created_at)
            .map_err(|e| Error::Malformed(format!("created_at: {e}")))?
            .with_timezone(&Utc);
        let c = self.config;
        let config = SearchConfig {
            alpha: c.alpha,
            objective: c.objective,
            layout: PairingLayout::new(c.layout.a1, c.layout.a2, c.layout.b1, c.layout.b2)?,
            delta0: c.delta0,
            counter_max: c.counter_max,
            delta_min: c.delta_min,
            rng: c.rng,
            seed_state: c.seed_state.as_ref().map(state_from).transpose()?,
        };
        let trace = self
            .trace
            .into_iter()
            .map(|e| {
                Ok(TraceEntry {
                    step_index: e.step_index,
                    delta: e.delta,
                    state: state_from(&e.state)?,
                    ss_residual: e.ss_residual,
                    monogamy_residual: e.monogamy_residual,
                    states_since_accept: e.states_since_accept,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let final_state = state_from(&self.final_state)?;
        if final_state.n_qubits() != 4 {
            return Err(Error::Malformed(format!(
                "final_state has {} qubits, expected 4",
                final_state.n_qubits()
            )));
        }

        let recomputed = residual_report(&final_state, &config.layout, config.alpha)?;
        let deviation = recomputed.max_deviation(&self.final_residuals);
        if !(deviation <= RESIDUAL_TOL) {
            return Err(Error::ResidualMismatch(deviation));
        }

        Ok(RunArchive {
            format_version: self.format_version,
            created_at,
            record: RunRecord {
                config,
                trace,
                final_state,
                final_residuals: self.final_residuals,
                final_delta: self.final_delta,
                total_states_generated: self.total_states_generated,
            },
            fingerprint: self.fingerprint,
        })
    }
}

/// Serializes an archive to a JSON string.
pub fn to_json(archive: &RunArchive) -> Result<String> {
    serde_json::to_string_pretty(&ArchiveDoc::from_archive(archive)).map_err(|e| Error::Malformed(e.to_string()))
}

/// Parses and validates an archive document.
pub fn from_json(text: &str) -> Result<RunArchive> {
    // Version first, so future layouts report a version error rather than a
    // field mismatch.
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    match value.get("format_version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(FORMAT_VERSION) => {}
        Some(v) => return Err(Error::UnknownVersion(u32::try_from(v).unwrap_or(u32::MAX))),
        None => return Err(Error::Malformed("missing format_version".into())),
    }
    let doc: ArchiveDoc = serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_archive()
}

pub fn save_run(archive: &RunArchive, destination: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(destination)?);
    out.write_all(to_json(archive)?.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn load_run(source: impl AsRef<Path>) -> Result<RunArchive> {
    from_json(&fs::read_to_string(source)?)
}

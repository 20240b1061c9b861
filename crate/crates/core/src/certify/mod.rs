//! The end-to-end pipeline and its certificate.
//!
//! A certificate is canonical JSON (sorted keys, two-space indent, trailing
//! newline) with a schema version header. Integers beyond `2^53` in
//! magnitude are written as decimal strings.

pub mod certificate;
pub mod config;
pub mod exact;
pub mod pipeline;
pub mod verify;

pub use certificate::{
    emit_certificate, parse_certificate, to_canonical_json, Certificate, Format, Status, Verdict, VerdictEntry,
    WitnessSection, CHECKS, SCHEMA_VERSION, TOOL_VERSION,
};
pub use config::{BetaSource, ConfigEcho, PipelineConfig, DEFAULT_WITNESS_CAP};
pub use exact::ExactInt;
pub use pipeline::run_pipeline;
pub use verify::{verify_certificate, RecheckLevel, VerifyReport};

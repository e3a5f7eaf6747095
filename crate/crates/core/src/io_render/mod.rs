//! Trace files, replay and snapshot rendering. The rule, configuration and
//! Turing machine codecs live next to their types
//! ([`crate::RuleSet::to_text`], [`crate::Configuration::to_text`],
//! [`crate::programs::tm::TmSpec::to_text`]).

mod render;
mod trace;

pub use render::{render_ascii, render_svg, Highlight, HighlightKind, RenderError, Snapshot, ASCII_LEGEND};
pub use trace::{
    read_trace, replay, replay_observed, write_trajectory, ReplayError, Trace, TraceEnd, TraceHeader, TraceRecord,
    TraceWriter, TRACE_HEADER,
};

use sha2::{Digest, Sha256};

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

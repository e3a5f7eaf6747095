//! Generators for the classic nubot constructions.
//!
//! Every generator returns a [`Program`]: a rule set, an initial
//! configuration, a description of the expected terminal configuration and
//! metadata about the predicted running time and alphabet size.

mod build;
mod counter;
mod examples;
mod line;
mod pattern;
mod shape;
mod square;
pub mod tm;

use std::fmt;

use sha2::{Digest, Sha256};

use crate::grid::GridPoint;
use crate::model::Configuration;
use crate::rules::RuleSet;
use crate::state::State;

pub use build::Frame;
pub use counter::gen_counter;
pub use examples::{gen_insertion, gen_rotation, gen_simple_line, gen_walker};
pub use line::{gen_fast_line, gen_insertion_pair, gen_sync_line};
pub use pattern::{gen_pattern, pattern_colors, BLACK, PATTERN_TM_STEPS, WHITE};
pub use shape::{gen_shape, shape_pixels, PIXEL, SHAPE_TM_STEPS};
pub use square::gen_square;
pub use tm::{gen_turing_machine, TmSpec};

/// Predicted growth of the expected completion time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scaling {
    Constant,
    Linear,
    Log,
    LogSquared,
    /// `log^(l+1) n` for a machine running in `log^l n` steps.
    PolyLog(u32),
    Custom,
}

impl Scaling {
    pub fn token(self) -> String {
        match self {
            Scaling::Constant => "const".into(),
            Scaling::Linear => "n".into(),
            Scaling::Log => "log-n".into(),
            Scaling::LogSquared => "log2-n".into(),
            Scaling::PolyLog(e) => format!("log{e}-n"),
            Scaling::Custom => "custom".into(),
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Description of the configuration a program is expected to end in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TerminalSpec {
    /// Equal to this configuration up to translation, bonds included.
    Exact(Configuration),
    /// Occupies exactly these cells (up to translation) with the given
    /// states, bonds ignored, and forms a single connected component.
    Cells(Vec<(GridPoint, State)>),
}

impl TerminalSpec {
    pub fn exact(c: &Configuration) -> TerminalSpec {
        TerminalSpec::Exact(c.canonicalize())
    }

    /// Cells given in any position; stored translated to the canonical origin.
    pub fn cells(mut cells: Vec<(GridPoint, State)>) -> TerminalSpec {
        cells.sort_unstable();
        if let Some(&(m, _)) = cells.first() {
            for c in &mut cells {
                c.0 = c.0 - m;
            }
        }
        TerminalSpec::Cells(cells)
    }

    pub fn matches(&self, c: &Configuration) -> bool {
        match self {
            TerminalSpec::Exact(t) => c.canonicalize() == *t,
            TerminalSpec::Cells(cells) => {
                let got = c.canonicalize().monomers();
                got == *cells && c.connected_components().len() <= 1
            }
        }
    }

    /// Number of monomers in the expected terminal configuration.
    pub fn size(&self) -> usize {
        match self {
            TerminalSpec::Exact(t) => t.len(),
            TerminalSpec::Cells(cells) => cells.len(),
        }
    }

    /// Stable text form, used for digests.
    pub fn to_text(&self) -> String {
        match self {
            TerminalSpec::Exact(t) => format!("exact\n{}", t.to_text()),
            TerminalSpec::Cells(cells) => {
                let mut s = String::from("cells\n");
                for (p, st) in cells {
                    s.push_str(&format!("{} {} {}\n", p.x, p.y, st));
                }
                s
            }
        }
    }

    /// Hex SHA-256 of [`TerminalSpec::to_text`].
    pub fn digest(&self) -> String {
        let d = Sha256::digest(self.to_text().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A generated assembly system together with its metadata.
#[derive(Clone, Debug)]
pub struct Program {
    pub name: String,
    pub rules: RuleSet,
    pub initial: Configuration,
    pub terminal: TerminalSpec,
    pub scaling: Scaling,
    pub state_count: usize,
}

impl Program {
    pub(crate) fn new(
        name: impl Into<String>,
        rules: RuleSet,
        initial: Configuration,
        terminal: TerminalSpec,
        scaling: Scaling,
    ) -> Program {
        let mut states = rules.states();
        states.extend(initial.monomers().into_iter().map(|(_, s)| s));
        states.sort_unstable();
        states.dedup();
        Program {
            name: name.into(),
            rules,
            initial,
            terminal,
            scaling,
            state_count: states.len(),
        }
    }

    /// Key-value metadata record written next to generated files.
    pub fn meta_text(&self) -> String {
        format!(
            "program={}\nrules={}\nstate_count={}\npredicted_scaling={}\nterminal_size={}\nterminal_digest={}\n",
            self.name,
            self.rules.len(),
            self.state_count,
            self.scaling,
            self.terminal.size(),
            self.terminal.digest()
        )
    }
}

/// Precondition failures of the generators.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("{0} is not of the form 2^(2^p)")]
    NotDoublePowerOfTwo(u64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
}

/// `log2 n` for a power of two `n >= min`.
pub(crate) fn log2_exact(n: u64, min: u64) -> Result<u32, ProgramError> {
    if n < min || !n.is_power_of_two() {
        return Err(ProgramError::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros())
}

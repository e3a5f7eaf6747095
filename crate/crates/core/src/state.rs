//! Monomer states and bond types.
//!
//! States are interned process-wide so that a [`State`] is a `Copy` handle
//! that hashes and compares in constant time. Ordering compares names, so it
//! does not depend on the order in which states were first interned.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Default)]
struct Interner {
    ids: HashMap<&'static str, u32>,
    names: Vec<&'static str>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// A monomer state drawn from a finite alphabet.
///
/// The reserved `EMPTY` token is not a state; rule sides use
/// `Option<State>` with `None` for an empty site.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct State(u32);

/// Reason a token cannot name a state.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateTokenError {
    #[error("state token is empty")]
    Empty,
    #[error("state token `{0}` contains whitespace")]
    Whitespace(String),
    #[error("`-` is reserved for the empty site")]
    Reserved,
    #[error("state token `{0}` starts with the comment marker `#`")]
    Comment(String),
}

impl State {
    /// Intern `name` as a state.
    ///
    /// # Panics
    /// Panics if `name` is not a valid token; use [`State::parse`] for
    /// untrusted input.
    pub fn new(name: &str) -> State {
        State::parse(name).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Intern `name` after checking that it is a legal state token.
    pub fn parse(name: &str) -> Result<State, StateTokenError> {
        if name.is_empty() {
            return Err(StateTokenError::Empty);
        }
        if name == "-" {
            return Err(StateTokenError::Reserved);
        }
        if name.starts_with('#') {
            return Err(StateTokenError::Comment(name.to_string()));
        }
        if name.chars().any(char::is_whitespace) {
            return Err(StateTokenError::Whitespace(name.to_string()));
        }
        if let Some(&id) = interner().read().expect("state interner poisoned").ids.get(name) {
            return Ok(State(id));
        }
        let mut w = interner().write().expect("state interner poisoned");
        if let Some(&id) = w.ids.get(name) {
            return Ok(State(id));
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        let id = u32::try_from(w.names.len()).expect("state alphabet overflow");
        w.names.push(leaked);
        w.ids.insert(leaked, id);
        Ok(State(id))
    }

    /// The token naming this state.
    pub fn name(self) -> &'static str {
        interner().read().expect("state interner poisoned").names[self.0 as usize]
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.name().cmp(other.name())
        }
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({})", self.name())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<&str> for State {
    fn from(s: &str) -> State {
        State::new(s)
    }
}

/// Token for an optional state: the state name or `-` for empty.
pub fn slot_token(s: Option<State>) -> &'static str {
    s.map_or("-", State::name)
}

/// Bond between two adjacent monomers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    #[default]
    Null,
    Flexible,
    Rigid,
}

impl Bond {
    pub const fn token(self) -> &'static str {
        match self {
            Bond::Null => "n",
            Bond::Flexible => "f",
            Bond::Rigid => "r",
        }
    }

    pub fn from_token(s: &str) -> Option<Bond> {
        match s {
            "n" => Some(Bond::Null),
            "f" => Some(Bond::Flexible),
            "r" => Some(Bond::Rigid),
            _ => None,
        }
    }

    pub const fn is_bond(self) -> bool {
        !matches!(self, Bond::Null)
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = State::new("alpha");
        let b = State::new("alpha");
        assert_eq!(a, b);
        assert_eq!(a.name(), "alpha");
        assert_ne!(a, State::new("beta"));
    }

    #[test]
    fn ordering_follows_names() {
        let z = State::new("zz-order");
        let a = State::new("aa-order");
        assert!(a < z);
    }

    #[test]
    fn rejects_reserved_tokens() {
        assert_eq!(State::parse("-"), Err(StateTokenError::Reserved));
        assert_eq!(State::parse(""), Err(StateTokenError::Empty));
        assert!(State::parse("a b").is_err());
        assert!(State::parse("#x").is_err());
    }

    #[test]
    fn bond_tokens() {
        for b in [Bond::Null, Bond::Flexible, Bond::Rigid] {
            assert_eq!(Bond::from_token(b.token()), Some(b));
        }
        assert_eq!(Bond::from_token("x"), None);
    }
}

//! Interaction rules: grammar, validation, classification, text format and
//! candidate matching.
//!
//! A rule `(s1, s2, b, u) -> (s1', s2', b', u')` applies to a monomer (or
//! empty site) in state `s1` at `p` and one in state `s2` at `p + u` joined
//! by bond `b`. A movement rule has `u' != u`; one of the two monomers (the
//! arm) translates so that afterwards the second sits at `u'` from the first.

use std::fmt;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::{slot_token, Bond, State};
use crate::text::{self, ParseError, Token};

/// Header line of the rule text format.
pub const RULES_HEADER: &str = "nubot-rules v1";

/// One side of a rule: two optional states, a bond and an orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Side {
    pub s1: Option<State>,
    pub s2: Option<State>,
    pub bond: Bond,
    pub dir: Direction,
}

impl Side {
    pub fn new(s1: Option<State>, s2: Option<State>, bond: Bond, dir: Direction) -> Self {
        Self { s1, s2, bond, dir }
    }
}

/// An interaction rule with an identifying label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub lhs: Side,
    pub rhs: Side,
}

/// Well-formedness violations of a single rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("both left-hand sites are empty")]
    BothSidesEmpty,
    #[error("a side with an empty site must have a null bond")]
    EmptyWithBond,
    #[error("a movement rule cannot involve an empty site")]
    MovementWithEmpty,
    #[error("a movement rule must change the orientation to an adjacent direction")]
    MovementDistanceNotOne,
}

/// Coarse kind of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleClass {
    StateChange,
    BondChange,
    Appearance,
    Disappearance,
    Movement,
    Mixed,
}

impl Rule {
    pub fn new(id: impl Into<String>, lhs: Side, rhs: Side) -> Self {
        Self { id: id.into(), lhs, rhs }
    }

    /// Check the well-formedness conditions of the model.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let (l, r) = (&self.lhs, &self.rhs);
        if l.s1.is_none() && l.s2.is_none() {
            return Err(ValidationError::BothSidesEmpty);
        }
        let has_empty = |s: &Side| s.s1.is_none() || s.s2.is_none();
        if (has_empty(l) && l.bond.is_bond()) || (has_empty(r) && r.bond.is_bond()) {
            return Err(ValidationError::EmptyWithBond);
        }
        if l.dir != r.dir {
            if has_empty(l) || has_empty(r) {
                return Err(ValidationError::MovementWithEmpty);
            }
            if l.dir.offset().hex_distance(r.dir.offset()) != 1 {
                return Err(ValidationError::MovementDistanceNotOne);
            }
        }
        Ok(())
    }

    pub fn is_movement(&self) -> bool {
        self.lhs.dir != self.rhs.dir
    }

    pub fn classify(&self) -> RuleClass {
        if self.is_movement() {
            return RuleClass::Movement;
        }
        let (l, r) = (&self.lhs, &self.rhs);
        let appear = (l.s1.is_none() && r.s1.is_some()) || (l.s2.is_none() && r.s2.is_some());
        let vanish = (l.s1.is_some() && r.s1.is_none()) || (l.s2.is_some() && r.s2.is_none());
        match (appear, vanish) {
            (true, true) => RuleClass::Mixed,
            (true, false) => RuleClass::Appearance,
            (false, true) => RuleClass::Disappearance,
            (false, false) => {
                let states = l.s1 != r.s1 || l.s2 != r.s2;
                let bond = l.bond != r.bond;
                match (states, bond) {
                    (true, true) => RuleClass::Mixed,
                    (false, true) => RuleClass::BondChange,
                    _ => RuleClass::StateChange,
                }
            }
        }
    }

    /// Translation applied to the arm monomer of a movement rule.
    pub fn arm_translation(&self, arm: Arm) -> GridPoint {
        let (u, u2) = (self.lhs.dir.offset(), self.rhs.dir.offset());
        match arm {
            Arm::Second => u2 - u,
            Arm::First => u - u2,
        }
    }

    /// Rule text without the label.
    pub fn body(&self) -> String {
        let side = |s: &Side| {
            format!("{} {} {} {}", slot_token(s.s1), slot_token(s.s2), s.bond, s.dir)
        };
        format!("{} -> {}", side(&self.lhs), side(&self.rhs))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.body())
    }
}

/// Which monomer of a movement rule translates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    /// The monomer matched by `s1` moves by `u - u'`.
    First,
    /// The monomer matched by `s2` moves by `u' - u`.
    Second,
}

impl Arm {
    pub const fn token(self) -> &'static str {
        match self {
            Arm::First => "1",
            Arm::Second => "2",
        }
    }
}

/// Errors building a rule set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleSetError {
    #[error("rule `{id}`: {error}")]
    Invalid { id: String, error: ValidationError },
    #[error("duplicate rule id `{0}`")]
    DuplicateId(String),
}

type LhsKey = (Option<State>, Option<State>, Bond, Direction);

/// An ordered, validated list of rules indexed by left-hand side.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
    index: FxHashMap<LhsKey, Vec<usize>>,
}

impl PartialEq for RuleSet {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for RuleSet {}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Result<RuleSet, RuleSetError> {
        let mut index: FxHashMap<LhsKey, Vec<usize>> = FxHashMap::default();
        let mut ids = rustc_hash::FxHashSet::default();
        for (i, r) in rules.iter().enumerate() {
            r.validate().map_err(|error| RuleSetError::Invalid {
                id: r.id.clone(),
                error,
            })?;
            if !ids.insert(r.id.as_str()) {
                return Err(RuleSetError::DuplicateId(r.id.clone()));
            }
            index
                .entry((r.lhs.s1, r.lhs.s2, r.lhs.bond, r.lhs.dir))
                .or_default()
                .push(i);
        }
        Ok(RuleSet { rules, index })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    /// Indices of rules whose left-hand side is exactly this key.
    pub fn lookup(&self, s1: Option<State>, s2: Option<State>, b: Bond, d: Direction) -> &[usize] {
        self.index.get(&(s1, s2, b, d)).map_or(&[], Vec::as_slice)
    }

    /// Every state mentioned by some rule.
    pub fn states(&self) -> Vec<State> {
        let mut v: Vec<State> = self
            .rules
            .iter()
            .flat_map(|r| [r.lhs.s1, r.lhs.s2, r.rhs.s1, r.rhs.s2])
            .flatten()
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Serialize in the `nubot-rules v1` format. Labels equal to the 1-based
    /// ordinal are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(RULES_HEADER);
        out.push('\n');
        for (i, r) in self.rules.iter().enumerate() {
            out.push_str(&r.body());
            if r.id != (i + 1).to_string() {
                let _ = write!(out, " @{}", r.id);
            }
            out.push('\n');
        }
        out
    }

    /// Parse the `nubot-rules v1` format.
    pub fn from_text(src: &str) -> Result<RuleSet, ParseError> {
        let mut rules: Vec<Rule> = Vec::new();
        for (line, toks) in text::body_lines(src, RULES_HEADER)? {
            let rule = parse_rule_line(line, &toks, rules.len() + 1)?;
            if rules.iter().any(|r| r.id == rule.id) {
                let col = toks.last().map_or(1, |t| t.column);
                return Err(ParseError::new(line, col, RuleSetError::DuplicateId(rule.id)));
            }
            rules.push(rule);
        }
        RuleSet::new(rules).map_err(|e| ParseError::new(1, 1, e))
    }

    /// Every candidate event in deterministic order: by `s1` site, then
    /// direction, then rule index, then arm. Movement rules yield one
    /// candidate per arm choice.
    pub fn match_candidates(&self, c: &Configuration) -> Vec<Candidate> {
        let mut out = Vec::new();
        for p in c.positions_unordered() {
            let s = c.state(p);
            for d in Direction::ALL {
                let q = p + d;
                let t = c.state(q);
                let b = c.bond(p, d);
                for &ri in self.lookup(s, t, b, d) {
                    self.push_candidate(&mut out, ri, p, d);
                }
                let back = p - d;
                if !c.is_occupied(back) {
                    for &ri in self.lookup(None, s, Bond::Null, d) {
                        self.push_candidate(&mut out, ri, back, d);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|c| (c.p1, c.dir, c.rule, c.arm));
        out
    }

    fn push_candidate(&self, out: &mut Vec<Candidate>, rule: usize, p1: GridPoint, dir: Direction) {
        if self.rules[rule].is_movement() {
            for arm in [Arm::First, Arm::Second] {
                out.push(Candidate {
                    rule,
                    p1,
                    dir,
                    arm: Some(arm),
                });
            }
        } else {
            out.push(Candidate {
                rule,
                p1,
                dir,
                arm: None,
            });
        }
    }
}

fn parse_slot(line: usize, tok: &Token<'_>) -> Result<Option<State>, ParseError> {
    if tok.text == "-" {
        return Ok(None);
    }
    State::parse(tok.text)
        .map(Some)
        .map_err(|e| ParseError::at(line, tok, e))
}

fn parse_side(line: usize, toks: &[Token<'_>]) -> Result<Side, ParseError> {
    let s1 = parse_slot(line, &toks[0])?;
    let s2 = parse_slot(line, &toks[1])?;
    let bond = Bond::from_token(toks[2].text).ok_or_else(|| {
        ParseError::at(line, &toks[2], format!("bond must be r, f or n, found `{}`", toks[2].text))
    })?;
    let dir = Direction::from_token(toks[3].text).ok_or_else(|| {
        ParseError::at(
            line,
            &toks[3],
            format!("direction must be one of +x -x +y -y +w -w, found `{}`", toks[3].text),
        )
    })?;
    Ok(Side { s1, s2, bond, dir })
}

fn parse_rule_line(line: usize, toks: &[Token<'_>], ordinal: usize) -> Result<Rule, ParseError> {
    let labelled = toks.len() == 10 && toks[9].text.starts_with('@');
    if !(toks.len() == 9 || labelled) {
        let col = toks.get(9).or(toks.last()).map_or(1, |t| t.column);
        return Err(ParseError::new(
            line,
            col,
            format!("rule expects `s1 s2 b u -> s1' s2' b' u'`, found {} fields", toks.len()),
        ));
    }
    if toks[4].text != "->" {
        return Err(ParseError::at(line, &toks[4], "expected `->`"));
    }
    let lhs = parse_side(line, &toks[0..4])?;
    let rhs = parse_side(line, &toks[5..9])?;
    let id = if labelled {
        let l = &toks[9].text[1..];
        if l.is_empty() {
            return Err(ParseError::at(line, &toks[9], "empty rule label"));
        }
        l.to_string()
    } else {
        ordinal.to_string()
    };
    let rule = Rule { id, lhs, rhs };
    rule.validate()
        .map_err(|e| ParseError::at(line, &toks[0], format!("invalid rule: {e}")))?;
    Ok(rule)
}

/// A rule whose left-hand side matches a pair of sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    /// Index into the rule set.
    pub rule: usize,
    /// Site matched by `s1`; the `s2` site is `p1 + dir`.
    pub p1: GridPoint,
    pub dir: Direction,
    /// Arm choice for movement rules.
    pub arm: Option<Arm>,
}

impl Candidate {
    pub fn p2(&self) -> GridPoint {
        self.p1 + self.dir
    }
}

/// Shorthand used by generators: parse `a`/`-`, bond token and direction
/// token into a [`Side`].
///
/// # Panics
/// Panics on malformed tokens; intended for rule sets fixed at compile time.
pub fn side(s1: &str, s2: &str, bond: &str, dir: &str) -> Side {
    let slot = |t: &str| if t == "-" { None } else { Some(State::new(t)) };
    Side {
        s1: slot(s1),
        s2: slot(s2),
        bond: Bond::from_token(bond).unwrap_or_else(|| panic!("bad bond token {bond}")),
        dir: Direction::from_token(dir).unwrap_or_else(|| panic!("bad direction token {dir}")),
    }
}

/// Parse a single rule written as in the text format, e.g.
/// `"1 1 n +x -> 2 3 n +x"`.
///
/// # Panics
/// Panics on malformed text; intended for rule sets fixed at compile time.
pub fn rule(id: &str, text: &str) -> Rule {
    let toks: Vec<&str> = text.split_whitespace().collect();
    assert!(toks.len() == 9 && toks[4] == "->", "malformed rule text `{text}`");
    Rule::new(
        id,
        side(toks[0], toks[1], toks[2], toks[3]),
        side(toks[5], toks[6], toks[7], toks[8]),
    )
}

//! Turing machines: the `tm v1` description format, a reference
//! interpreter, and the encoding of a machine as a line of tape monomers.
//!
//! The tape is a rigid line along `+x` delimited by end markers `B`. The
//! head is not a separate monomer: the cell under the head carries the
//! machine state in its own state (`h<q>:<symbol>`). Moving the head is a
//! single rule between two neighboring cells. Moving onto an end marker
//! turns the marker into a blank cell and grows a new marker beyond it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::build::{Frame, Rules};
use super::{Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::{line, Configuration};
use crate::state::{Bond, State};
use crate::text::{self, ParseError};

/// Header line of the machine format.
pub const TM_HEADER: &str = "tm v1";

/// A tape symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Zero,
    One,
    Blank,
}

impl Sym {
    pub const ALL: [Sym; 3] = [Sym::Zero, Sym::One, Sym::Blank];

    pub const fn token(self) -> &'static str {
        match self {
            Sym::Zero => "0",
            Sym::One => "1",
            Sym::Blank => "_",
        }
    }

    pub fn from_token(s: &str) -> Option<Sym> {
        Sym::ALL.into_iter().find(|x| x.token() == s)
    }

    pub const fn bit(b: bool) -> Sym {
        if b {
            Sym::One
        } else {
            Sym::Zero
        }
    }
}

/// Head movement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

/// Right-hand side of a transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub next: String,
    pub write: Sym,
    pub mv: Move,
}

/// A deterministic single-tape machine over `{0, 1, _}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    pub start: String,
    pub accept: Option<String>,
    pub reject: Option<String>,
    pub delta: BTreeMap<(String, Sym), Transition>,
}

/// Outcome of a halted run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Final state of the reference interpreter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmRun {
    pub verdict: Verdict,
    pub state: String,
    /// Every cell that was ever part of the tape, left to right.
    pub tape: Vec<Sym>,
    /// Index of the head in `tape`.
    pub head: usize,
    /// Index in `tape` of the first input cell; positive when the machine
    /// moved left of its input.
    pub origin: usize,
    pub steps: u64,
}

/// Reasons the interpreter stops without a verdict.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TmError {
    #[error("no transition for state `{0}` reading `{1}`")]
    MissingTransition(String, &'static str),
    #[error("no verdict after {0} steps")]
    StepLimit(u64),
}

impl TmSpec {
    /// Number of transition-table entries.
    pub fn size(&self) -> usize {
        self.delta.len()
    }

    /// All machine states, sorted.
    pub fn states(&self) -> Vec<String> {
        let mut v: Vec<String> = vec![self.start.clone()];
        v.extend(self.accept.iter().cloned());
        v.extend(self.reject.iter().cloned());
        for ((q, _), t) in &self.delta {
            v.push(q.clone());
            v.push(t.next.clone());
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn is_halting(&self, q: &str) -> bool {
        self.accept.as_deref() == Some(q) || self.reject.as_deref() == Some(q)
    }

    /// Check that halting states have no outgoing transitions and that state
    /// names are usable inside monomer state tokens.
    pub fn validate(&self) -> Result<(), ProgramError> {
        if self.accept.is_none() && self.reject.is_none() {
            return Err(ProgramError::InvalidMachine("no ACCEPT or REJECT state".into()));
        }
        for (q, _) in self.delta.keys() {
            if self.is_halting(q) {
                return Err(ProgramError::InvalidMachine(format!("halting state `{q}` has transitions")));
            }
        }
        for q in self.states() {
            if q.is_empty() || q.chars().any(|c| c.is_whitespace() || c == ':' || c == '#') {
                return Err(ProgramError::InvalidMachine(format!("unusable state name `{q}`")));
            }
        }
        Ok(())
    }

    /// Run on `input` with the head on the first input cell (a blank cell
    /// when the input is empty). The tape grows in both directions.
    pub fn run(&self, input: &[Sym], max_steps: u64) -> Result<TmRun, TmError> {
        let mut tape: VecDeque<Sym> = input.iter().copied().collect();
        if tape.is_empty() {
            tape.push_back(Sym::Blank);
        }
        let mut head = 0usize;
        let mut origin = 0usize;
        let mut q = self.start.clone();
        let mut steps = 0u64;
        loop {
            if self.accept.as_deref() == Some(q.as_str()) || self.reject.as_deref() == Some(q.as_str()) {
                let verdict = if self.accept.as_deref() == Some(q.as_str()) {
                    Verdict::Accept
                } else {
                    Verdict::Reject
                };
                return Ok(TmRun {
                    verdict,
                    state: q,
                    tape: tape.into_iter().collect(),
                    head,
                    origin,
                    steps,
                });
            }
            if steps >= max_steps {
                return Err(TmError::StepLimit(max_steps));
            }
            let a = tape[head];
            let t = self
                .delta
                .get(&(q.clone(), a))
                .ok_or_else(|| TmError::MissingTransition(q.clone(), a.token()))?;
            tape[head] = t.write;
            match t.mv {
                Move::Right => {
                    head += 1;
                    if head == tape.len() {
                        tape.push_back(Sym::Blank);
                    }
                }
                Move::Left => {
                    if head == 0 {
                        tape.push_front(Sym::Blank);
                        origin += 1;
                    } else {
                        head -= 1;
                    }
                }
            }
            q = t.next.clone();
            steps += 1;
        }
    }

    /// Parse the `tm v1` format.
    pub fn from_text(src: &str) -> Result<TmSpec, ParseError> {
        let mut start = None;
        let mut accept = None;
        let mut reject = None;
        let mut delta = BTreeMap::new();
        for (line, toks) in text::body_lines(src, TM_HEADER)? {
            let sym = |i: usize| {
                Sym::from_token(toks[i].text).ok_or_else(|| {
                    ParseError::at(line, &toks[i], format!("unknown tape symbol `{}`", toks[i].text))
                })
            };
            match toks[0].text {
                "D" => {
                    text::expect_len(line, &toks, 6, "transition")?;
                    let mv = match toks[5].text {
                        "L" => Move::Left,
                        "R" => Move::Right,
                        other => {
                            return Err(ParseError::at(line, &toks[5], format!("expected L or R, found `{other}`")))
                        }
                    };
                    let key = (toks[1].text.to_string(), sym(2)?);
                    let t = Transition {
                        next: toks[3].text.to_string(),
                        write: sym(4)?,
                        mv,
                    };
                    if delta.insert(key, t).is_some() {
                        return Err(ParseError::at(line, &toks[1], "duplicate transition"));
                    }
                }
                kw @ ("ACCEPT" | "REJECT" | "START") => {
                    text::expect_len(line, &toks, 2, kw)?;
                    let slot = match kw {
                        "ACCEPT" => &mut accept,
                        "REJECT" => &mut reject,
                        _ => &mut start,
                    };
                    if slot.replace(toks[1].text.to_string()).is_some() {
                        return Err(ParseError::at(line, &toks[0], format!("duplicate {kw}")));
                    }
                }
                other => return Err(ParseError::at(line, &toks[0], format!("unknown record `{other}`"))),
            }
        }
        let start = start.ok_or_else(|| ParseError::new(1, 1, "missing START"))?;
        let tm = TmSpec {
            start,
            accept,
            reject,
            delta,
        };
        tm.validate().map_err(|e| ParseError::new(1, 1, e))?;
        Ok(tm)
    }

    /// Serialize in the `tm v1` format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{TM_HEADER}\nSTART {}\n", self.start);
        if let Some(a) = &self.accept {
            out.push_str(&format!("ACCEPT {a}\n"));
        }
        if let Some(r) = &self.reject {
            out.push_str(&format!("REJECT {r}\n"));
        }
        for ((q, a), t) in &self.delta {
            let mv = match t.mv {
                Move::Left => "L",
                Move::Right => "R",
            };
            out.push_str(&format!("D {q} {} {} {} {mv}\n", a.token(), t.next, t.write.token()));
        }
        out
    }

    /// Machine that reads a binary word left to right and accepts exactly
    /// the words in `yes`; every word in `yes` and every rejected word is
    /// assumed to have length `bits`. States are the prefixes read so far.
    pub fn lookup_table(bits: u32, yes: &[u64]) -> TmSpec {
        let mut delta = BTreeMap::new();
        let name = |len: u32, v: u64| {
            if len == 0 {
                "s".to_string()
            } else {
                format!("p{:0width$b}", v, width = len as usize)
            }
        };
        for len in 0..bits {
            for v in 0..(1u64 << len) {
                for b in [false, true] {
                    let nv = (v << 1) | u64::from(b);
                    let next = if len + 1 == bits {
                        if yes.contains(&nv) {
                            "yes".to_string()
                        } else {
                            "no".to_string()
                        }
                    } else {
                        name(len + 1, nv)
                    };
                    delta.insert(
                        (name(len, v), Sym::bit(b)),
                        Transition {
                            next,
                            write: Sym::bit(b),
                            mv: Move::Right,
                        },
                    );
                }
            }
        }
        TmSpec {
            start: "s".into(),
            accept: Some("yes".into()),
            reject: Some("no".into()),
            delta,
        }
    }
}

impl TmSpec {
    /// Machine for words of exactly `len >= 2` bits that accepts when the
    /// last two bits have an even sum. Skips to the end, then steps back
    /// once to halt; it never writes a new symbol. On the interleaved
    /// coordinates of the pattern construction it draws a checkerboard.
    pub fn pair_parity(len: usize) -> TmSpec {
        assert!(len >= 2, "need at least two bits");
        let mut delta = BTreeMap::new();
        let mut put = |q: String, a: Sym, next: String, mv: Move| {
            delta.insert((q, a), Transition { next, write: a, mv });
        };
        for pos in 0..len - 2 {
            for a in [Sym::Zero, Sym::One] {
                put(format!("s{pos}"), a, format!("s{}", pos + 1), Move::Right);
            }
        }
        for a in [false, true] {
            let q = format!("s{}", len - 2);
            put(q, Sym::bit(a), format!("m{}", u8::from(a)), Move::Right);
            for b in [false, true] {
                let v = if a == b { "yes" } else { "no" };
                put(format!("m{}", u8::from(a)), Sym::bit(b), v.into(), Move::Left);
            }
        }
        TmSpec {
            start: "s0".into(),
            accept: Some("yes".into()),
            reject: Some("no".into()),
            delta,
        }
    }
}

impl fmt::Display for TmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn cell(a: Sym) -> String {
    format!("c{}", a.token())
}

pub(crate) fn head(q: &str, a: Sym) -> String {
    format!("h{q}:{}", a.token())
}

fn head_on_marker(q: &str) -> String {
    format!("hB{q}")
}

/// Tape configuration: markers, cells, and the head at index `at`.
fn tape_config(tape: &[Sym], at: usize, q: &str) -> Configuration {
    let mut names = vec!["B".to_string()];
    for (i, &a) in tape.iter().enumerate() {
        names.push(if i == at { head(q, a) } else { cell(a) });
    }
    names.push("B".into());
    let states: Vec<State> = names.iter().map(|n| State::new(n)).collect();
    line(GridPoint::ORIGIN, Direction::PosX, &states, Bond::Rigid)
}

/// Encode `tm` running on `input`. The expected terminal configuration is
/// computed with the reference interpreter (bounded by `max_steps`).
pub fn gen_turing_machine(tm: &TmSpec, input: &[Sym], max_steps: u64) -> Result<Program, ProgramError> {
    tm.validate()?;
    let f = Frame::IDENTITY;
    let mut r = Rules::new();
    for ((q, a), t) in &tm.delta {
        let from = head(q, *a);
        let written = cell(t.write);
        match t.mv {
            Move::Right => {
                for c in Sym::ALL {
                    r.add(f, &format!("{from} {} r +x -> {written} {} r +x", cell(c), head(&t.next, c)));
                }
                r.add(f, &format!("{from} B r +x -> {written} {} r +x", head_on_marker(&t.next)));
            }
            Move::Left => {
                for c in Sym::ALL {
                    r.add(f, &format!("{} {from} r +x -> {} {written} r +x", cell(c), head(&t.next, c)));
                }
                r.add(f, &format!("B {from} r +x -> {} {written} r +x", head_on_marker(&t.next)));
            }
        }
    }
    for q in tm.states() {
        let m = head_on_marker(&q);
        let h = head(&q, Sym::Blank);
        r.add(f, &format!("{m} - n +x -> {h} B r +x"));
        r.add(f, &format!("- {m} n +x -> B {h} r +x"));
    }
    let tape: Vec<Sym> = if input.is_empty() { vec![Sym::Blank] } else { input.to_vec() };
    let initial = tape_config(&tape, 0, &tm.start);
    let out = tm
        .run(input, max_steps)
        .map_err(|e| ProgramError::InvalidMachine(e.to_string()))?;
    let target = tape_config(&out.tape, out.head, &out.state);
    Ok(Program::new(
        "turing-machine",
        r.finish(),
        initial,
        TerminalSpec::exact(&target),
        Scaling::Custom,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<Sym> {
        s.chars().map(|c| Sym::from_token(&c.to_string()).unwrap()).collect()
    }

    #[test]
    fn text_round_trip() {
        let src = "tm v1\nSTART a\nACCEPT y\nD a 0 a 1 R\nD a 1 a 0 R\nD a _ y _ L\n";
        let tm = TmSpec::from_text(src).unwrap();
        assert_eq!(tm.to_text(), src);
        assert_eq!(tm.size(), 3);
    }

    #[test]
    fn parse_errors() {
        let e = TmSpec::from_text("tm v1\nSTART a\nACCEPT y\nD a 2 a 1 R\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 5));
        assert!(TmSpec::from_text("tm v1\nACCEPT y\n").is_err());
        assert!(TmSpec::from_text("tm v1\nSTART a\nACCEPT a\nD a 0 a 0 R\n").is_err());
    }

    #[test]
    fn interpreter_grows_tape_both_ways() {
        let tm = TmSpec::from_text("tm v1\nSTART a\nACCEPT y\nD a _ b 1 L\nD b _ y 1 L\n").unwrap();
        let out = tm.run(&[], 10).unwrap();
        assert_eq!(out.tape, bits("_11"));
        assert_eq!(out.head, 0);
        assert_eq!(out.steps, 2);
    }

    #[test]
    fn lookup_table_accepts_listed_words() {
        let tm = TmSpec::lookup_table(3, &[0b010, 0b111]);
        for v in 0..8u64 {
            let input: Vec<Sym> = (0..3).rev().map(|i| Sym::bit(v >> i & 1 == 1)).collect();
            let out = tm.run(&input, 10).unwrap();
            assert_eq!(out.verdict == Verdict::Accept, v == 0b010 || v == 0b111);
        }
    }
}

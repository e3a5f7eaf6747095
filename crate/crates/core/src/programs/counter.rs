//! Binary counter: a backbone along `+y` grown by doubling insertions, with
//! one row of bits along `+x` per backbone monomer.
//!
//! Only the left monomer of each pair carries a row. When a pair inserts,
//! the new copy monomer first duplicates the left row next to it and
//! appends a `1`, while the left row gets a `0`; only then does the
//! insertion continue. A finished pair `L0 r` does the same once more, so
//! that in the end row `i` spells `i` in binary with the most significant
//! bit next to the backbone.

use super::build::{Frame, Rules};
use super::line::FastLine;
use super::{log2_exact, Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::{Bond, State};

const ABS: Frame = Frame::IDENTITY;
/// Frame of the backbone: line along `+y`, bridges on the `-x` side.
pub(crate) const BACKBONE: Frame = Frame::rotated(1);

/// Final state of backbone monomers.
pub(crate) const DONE: &str = "0";

pub(crate) fn backbone(n: u64) -> FastLine<'static> {
    FastLine {
        frame: BACKBONE,
        ns: "",
        n,
        final_left: "L0",
        final_right: "r",
        pending_right: "r",
        end: None,
        copy_ready: Some("td"),
    }
}

/// Rules of the counter proper: backbone growth, row copying and the final
/// copy of every finished pair. Returns the rule list unfinished so other
/// constructions can extend it.
pub(crate) fn counter_rules(k: u32) -> Rules {
    let mut r = Rules::new();
    let line = backbone(1 << k);
    line.add(&mut r);
    // Insertions whose copy monomer starts a row copy before bonding right.
    let mut tagged_lefts = vec!["L0s".to_string()];
    for x in 1..k {
        let c1 = format!("{x}.c1");
        for b in 0..2 {
            r.add(ABS, &format!("{c1} b{b} n -w -> Kt{b} b{b} n -w"));
        }
        r.add(ABS, &format!("{c1} - n -w -> Kte - n -w"));
        tagged_lefts.push(format!("{x}.L2"));
    }
    r.add(BACKBONE, "L0 r r +x -> L0s Ku r +x");
    for g in ["0", "1", "u"] {
        for b in 0..2 {
            r.add(ABS, &format!("K{g} b{b} n -w -> K{g}{b} b{b} n -w"));
        }
        r.add(ABS, &format!("K{g} - n -w -> K{g}e - n -w"));
    }
    for g in ["0", "1", "t", "u"] {
        for b in 0..2 {
            r.add(ABS, &format!("K{g}{b} - n +x -> w{g} K{b} r +x"));
        }
        r.add(ABS, &format!("K{g}e - n +x -> w{g} E r +x"));
    }
    r.add(ABS, "- E n +y -> Z E2 r +y");
    for left in ["b0", "b1"].iter().map(|s| s.to_string()).chain(tagged_lefts) {
        r.add(ABS, &format!("{left} Z n +x -> {left} Z2 r +x"));
    }
    r.add(ABS, "Z2 E2 r +y -> b0 b1 n +y");
    for d in 0..2 {
        for g in 0..2 {
            r.add(ABS, &format!("w{g} b{d} r +x -> b{g} b{d} r +x"));
        }
        r.add(ABS, &format!("wt b{d} r +x -> td b{d} r +x"));
        r.add(ABS, &format!("wu b{d} r +x -> ud b{d} r +x"));
    }
    r.add(BACKBONE, &format!("L0s ud r +x -> {DONE} {DONE} r +x"));
    r
}

/// The finished counter for `n = 2^k`: backbone at `(0, i)` in state
/// [`DONE`], row `i` at `(1..=k, i)` in states `b0`/`b1`.
pub(crate) fn counter_target(k: u32) -> Configuration {
    let mut c = Configuration::new();
    for i in 0..(1u64 << k) {
        let y = i as i64;
        let base = GridPoint::new(0, y);
        c.add_monomer(base, State::new(DONE)).expect("free");
        if i > 0 {
            c.set_bond(base, Direction::NegY, Bond::Rigid).expect("adjacent");
        }
        for j in 0..k {
            let bit = i >> (k - 1 - j) & 1;
            let p = GridPoint::new(j as i64 + 1, y);
            c.add_monomer(p, State::new(&format!("b{bit}"))).expect("free");
            c.set_bond(p, Direction::NegX, Bond::Rigid).expect("adjacent");
        }
    }
    c
}

/// Counter writing `0..n` in binary, one row per backbone monomer.
pub fn gen_counter(n: u64) -> Result<Program, ProgramError> {
    let k = log2_exact(n, 2)?;
    let r = counter_rules(k);
    Ok(Program::new(
        format!("counter-{n}"),
        r.finish(),
        Configuration::single(GridPoint::ORIGIN, State::new(&backbone(n).seed())),
        TerminalSpec::exact(&counter_target(k)),
        Scaling::LogSquared,
    ))
}

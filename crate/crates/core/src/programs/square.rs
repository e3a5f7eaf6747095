//! Square: a backbone of `n` monomers expands threefold, every third
//! monomer grows a synchronized column of height `n`, and once columns are
//! finished the spacers between them are removed so that the columns meet
//! and bond into a solid block.
//!
//! The block is the `n x n` parallelogram `{(i, j) : 0 <= i, j < n}` in
//! axial coordinates, with every pair of adjacent monomers rigidly bonded.
//!
//! Backbone insertions and the contraction happen below the backbone;
//! columns grow above it, with their bridges on the right and their
//! synchronization row on the left.

use super::build::{Frame, Rules};
use super::line::{FastLine, Insert, Sync};
use super::{log2_exact, Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::{Bond, State};

const ABS: Frame = Frame::IDENTITY;
const BACKBONE: Frame = Frame::mirrored(0);
const COLUMN: Frame = Frame::mirrored(1);
const FIN: &str = "F";

fn owned(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn square_rules(n: u64) -> Rules {
    let mut r = Rules::new();
    FastLine {
        frame: BACKBONE,
        ns: "h",
        n,
        final_left: "hL0",
        final_right: "hR0",
        pending_right: "hr",
        end: Some(("hre", "hR0e")),
        copy_ready: None,
    }
    .add(&mut r);

    // Each finished pair becomes `cb sa sb cb sa sb`, the last one ending
    // in `sbE` instead.
    Insert {
        frame: BACKBONE,
        tag: "e1",
        left: "hL0",
        rights: &owned(&[("hR0", "sb"), ("hR0e", "sbE")]),
        out_left: "cb",
        out_new: "e2L",
        out_copy: "e2R",
        copy_ready: None,
    }
    .add(&mut r);
    Insert {
        frame: BACKBONE,
        tag: "e2",
        left: "e2L",
        rights: &owned(&[("e2R", "sa")]),
        out_left: "sa",
        out_new: "sb",
        out_copy: "cb",
        copy_ready: None,
    }
    .add(&mut r);

    // Columns of `n - 1` monomers on top of every `cb`.
    let column = FastLine {
        frame: COLUMN,
        ns: "v",
        n: n - 1,
        final_left: "v0",
        final_right: "v0",
        pending_right: "vr",
        end: None,
        copy_ready: None,
    };
    if n == 2 {
        r.add(ABS, &format!("cb - n +y -> cb2 {FIN} r +y"));
    } else {
        r.add(ABS, &format!("cb - n +y -> cb2 {} r +y", column.seed()));
        column.add(&mut r);
        Sync::single(COLUMN, "v", "v0", FIN, Some("cb2")).add(&mut r);
    }
    r.add(ABS, &format!("cb2 {FIN} r +y -> cbD {FIN} r +y"));

    // Contraction of `A sa sb B` into `A B`, one spacer at a time, each
    // taken out by two movements below the backbone. `A` must have a
    // finished column before the first spacer goes and `B` before the
    // second.
    r.add(ABS, "sa sb r +x -> sa2 sb r +x");
    r.add(ABS, "cbD sa2 r +x -> cbD k1a r -w");
    r.add(ABS, "k1a sb r +x -> k2a sb r +y");
    r.add(ABS, "cbD sb n +x -> cbD sbB r +x");
    r.add(ABS, "k2a sbB r +y -> k3a sbB n +y");
    r.add(ABS, "cbD k3a r -w -> cbD - n -w");
    r.add(ABS, "cbD sbB r +x -> cbD k1b r -w");
    for b in ["cbD", "cbX", FIN] {
        r.add(ABS, &format!("k1b {b} r +x -> k2b {b} r +y"));
        r.add(ABS, &format!("cbD {b} n +x -> cbX {b} r +x"));
        r.add(ABS, &format!("k2c {b} r +y -> k3b {b} n +y"));
    }
    r.add(ABS, "cbX k2b r -w -> cbX k2c r -w");
    r.add(ABS, &format!("cbX k3b r -w -> {FIN} - n -w"));

    // Trailing spacers after the last column.
    r.add(ABS, "sa sbE r +x -> saT - n +x");
    r.add(ABS, &format!("cbD saT r +x -> {FIN} - n +x"));

    // Neighbouring columns bond once they touch.
    r.add(ABS, &format!("{FIN} {FIN} n +x -> {FIN} {FIN} r +x"));
    r.add(ABS, &format!("{FIN} {FIN} n +w -> {FIN} {FIN} r +w"));
    r
}

/// The fully bonded `n x n` block in state `F`.
pub(crate) fn block(n: u64, state: &str) -> Configuration {
    let mut c = Configuration::new();
    let n = n as i64;
    for x in 0..n {
        for y in 0..n {
            c.add_monomer(GridPoint::new(x, y), State::new(state)).expect("free");
        }
    }
    for x in 0..n {
        for y in 0..n {
            let p = GridPoint::new(x, y);
            for d in [Direction::PosX, Direction::PosY, Direction::PosW] {
                if c.state(p + d.offset()).is_some() {
                    c.set_bond(p, d, Bond::Rigid).expect("adjacent");
                }
            }
        }
    }
    c
}

/// An `n x n` square grown in expected time `O(log n)`.
pub fn gen_square(n: u64) -> Result<Program, ProgramError> {
    log2_exact(n, 1)?;
    if n == 1 {
        let one = Configuration::single(GridPoint::ORIGIN, State::new(FIN));
        let rules = Rules::new().finish();
        return Ok(Program::new("square-1", rules, one.clone(), TerminalSpec::exact(&one), Scaling::Log));
    }
    let r = square_rules(n);
    let seed = FastLine {
        frame: BACKBONE,
        ns: "h",
        n,
        final_left: "hL0",
        final_right: "hR0",
        pending_right: "hr",
        end: Some(("hre", "hR0e")),
        copy_ready: None,
    }
    .seed();
    Ok(Program::new(
        format!("square-{n}"),
        r.finish(),
        Configuration::single(GridPoint::ORIGIN, State::new(&seed)),
        TerminalSpec::exact(&block(n, FIN)),
        Scaling::Log,
    ))
}

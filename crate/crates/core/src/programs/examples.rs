//! Small example systems: chain growth, a walker, single insertion and arm
//! rotation.

use super::build::{Frame, Rules};
use super::{Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::{line, Configuration};
use crate::state::{Bond, State};

const F: Frame = Frame::IDENTITY;

fn states(names: &[&str]) -> Vec<State> {
    names.iter().map(|n| State::new(n)).collect()
}

/// Chain growth: a seed in state `k` grows a rigid line of `k + 1`
/// monomers in state `0`, one monomer at a time.
pub fn gen_simple_line(k: u64) -> Result<Program, ProgramError> {
    if k == 0 {
        return Err(ProgramError::OutOfRange("k must be at least 1".into()));
    }
    let mut r = Rules::new();
    for i in 1..=k {
        r.add(F, &format!("{i} - n +x -> 0 {} r +x", i - 1));
    }
    let seed = Configuration::single(GridPoint::ORIGIN, State::new(&k.to_string()));
    let target = line(
        GridPoint::ORIGIN,
        Direction::PosX,
        &vec![State::new("0"); k as usize + 1],
        Bond::Rigid,
    );
    Ok(Program::new(
        format!("simpleline-{k}"),
        r.finish(),
        seed,
        TerminalSpec::exact(&target),
        Scaling::Linear,
    ))
}

fn walker_config(track_len: usize, at: usize) -> Configuration {
    let mut c = line(GridPoint::ORIGIN, Direction::PosX, &vec![State::new("1"); track_len], Bond::Rigid);
    let t = GridPoint::new(at as i64, 0);
    c.add_monomer(t + Direction::PosY, State::new("1")).expect("free site");
    c.set_bond(t, Direction::PosY, Bond::Rigid).expect("adjacent");
    c
}

/// A walker monomer stepping along a rigid track of `track_len` monomers
/// from the first to the last.
pub fn gen_walker(track_len: usize) -> Result<Program, ProgramError> {
    if track_len < 2 {
        return Err(ProgramError::OutOfRange("track length must be at least 2".into()));
    }
    let mut r = Rules::new();
    r.add(F, "1 1 n -w -> 2 1 r -w");
    r.add(F, "1 2 r +y -> 1 1 n +y");
    r.add(F, "1 1 r +w -> 1 1 r +y");
    Ok(Program::new(
        format!("walker-{track_len}"),
        r.finish(),
        walker_config(track_len, 0),
        TerminalSpec::exact(&walker_config(track_len, track_len - 1)),
        Scaling::Linear,
    ))
}

/// Insertion of one monomer between a rigidly bonded pair `1 x`.
pub fn gen_insertion() -> Program {
    let mut r = Rules::new();
    r.add(F, "1 - n +y -> 1.1 0 r +y");
    r.add(F, "0 x n -w -> 0 x.1 r -w");
    r.add(F, "1.1 x.1 r +x -> 1.1 x.1 n +x");
    r.add(F, "0 x.1 r -w -> 0.1 x.1 r +x");
    r.add(F, "1.1 0.1 r +y -> 2 2 r +x");
    r.add(F, "2 x.1 r +x -> 2 x r +x");
    let initial = line(GridPoint::ORIGIN, Direction::PosX, &states(&["1", "x"]), Bond::Rigid);
    let target = line(GridPoint::ORIGIN, Direction::PosX, &states(&["2", "2", "x"]), Bond::Rigid);
    Program::new("insertion", r.finish(), initial, TerminalSpec::exact(&target), Scaling::Constant)
}

/// Rotation of a rigid arm of `n + 1` monomers from the `+w` axis to the
/// `+y` axis, every joint turning independently.
pub fn gen_rotation(n: usize) -> Result<Program, ProgramError> {
    if n == 0 {
        return Err(ProgramError::OutOfRange("n must be at least 1".into()));
    }
    let mut r = Rules::new();
    r.add(F, "1 1 r +w -> 1 1 r +y");
    let arm = vec![State::new("1"); n + 1];
    Ok(Program::new(
        format!("rotation-{n}"),
        r.finish(),
        line(GridPoint::ORIGIN, Direction::PosW, &arm, Bond::Rigid),
        TerminalSpec::exact(&line(GridPoint::ORIGIN, Direction::PosY, &arm, Bond::Rigid)),
        Scaling::Log,
    ))
}

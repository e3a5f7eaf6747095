//! Fast line growth by parallel doubling insertions, and the synchronized
//! line.
//!
//! A line under construction is a sequence of left-right pairs. A pair
//! whose left monomer holds counter `x >= 1` runs the insertion subroutine,
//! which builds a two-monomer bridge on its `+y` side, uses two movements to
//! open two gaps, fills them and deletes the bridge. The result is two
//! adjacent pairs with counter `x - 1`. All monomers stay rigidly connected
//! throughout, so the structure is stable.

use super::build::{Frame, Rules};
use super::{Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::{line, Configuration};
use crate::state::{Bond, State};

/// One instance of the two-monomer insertion subroutine, written in the
/// frame where the line runs along `+x` and the bridge sits on `+y`.
///
/// The pair `left`, `r_in` becomes `out_left`, `out_new`, `out_copy`,
/// `r_out` for every `(r_in, r_out)` in `rights`.
pub(crate) struct Insert<'a> {
    pub frame: Frame,
    /// Prefix of every intermediate state; must be unique per instance.
    pub tag: &'a str,
    pub left: &'a str,
    pub rights: &'a [(String, String)],
    pub out_left: &'a str,
    pub out_new: &'a str,
    pub out_copy: &'a str,
    /// When set, the inserted copy monomer must reach this state (through
    /// rules added by the caller from `<tag>.c1`) before it bonds to the
    /// right monomer.
    pub copy_ready: Option<&'a str>,
}

impl Insert<'_> {
    pub fn st(&self, name: &str) -> String {
        format!("{}.{name}", self.tag)
    }

    pub fn add(&self, r: &mut Rules) {
        let f = self.frame;
        let s = |n: &str| self.st(n);
        let (l, o1, o2, o3) = (self.left, self.out_left, self.out_new, self.out_copy);
        let ready = self.copy_ready.map_or_else(|| s("c1"), str::to_string);
        r.add(f, &format!("{l} - n +y -> {} {} r +y", s("L1"), s("a1")));
        r.add(f, &format!("{} - n +x -> {} {} r +x", s("a1"), s("a2"), s("b1")));
        for (v, (r_in, r_out)) in self.rights.iter().enumerate() {
            let rv = |i: u32| s(&format!("R{v}.{i}"));
            r.add(f, &format!("{r_in} {} n +y -> {} {} r +y", s("b1"), rv(1), s("b2")));
            r.add(f, &format!("{} {} r +x -> {} {} n +x", s("L1"), rv(1), s("L2"), rv(2)));
            r.add(f, &format!("{} {} r +y -> {} {} r +w", rv(2), s("b2"), rv(3), s("b3")));
            r.add(f, &format!("{ready} {} n +x -> {} {} r +x", rv(3), s("c2"), rv(4)));
            r.add(f, &format!("{} {} r +w -> {r_out} {} n +w", rv(4), s("b4"), s("b5")));
        }
        r.add(f, &format!("- {} n +y -> {} {} r +y", s("b3"), s("c1"), s("b4")));
        r.add(f, &format!("{} {} r -y -> {} {} r -w", s("b5"), s("c2"), s("b6"), s("c3")));
        r.add(f, &format!("- {} n +x -> {} {o3} r +x", s("c3"), s("N1")));
        r.add(f, &format!("{} {} n +x -> {o1} {} r +x", s("L2"), s("N1"), s("N2")));
        r.add(f, &format!("{} {} n +y -> {} - n +y", s("N2"), s("b6"), s("N3")));
        r.add(f, &format!("{} {} n -w -> - {o2} n -w", s("a2"), s("N3")));
    }
}

/// Parameters of a fast line written in a given frame.
pub(crate) struct FastLine<'a> {
    pub frame: Frame,
    /// Prefix of every state the line introduces.
    pub ns: &'a str,
    pub n: u64,
    pub final_left: &'a str,
    pub final_right: &'a str,
    /// Right-monomer state while its pair is still inserting.
    pub pending_right: &'a str,
    /// Pending and final state of the last monomer when it must differ
    /// from the other right monomers.
    pub end: Option<(&'a str, &'a str)>,
    /// State the copy monomer of every insertion must reach before it
    /// bonds to the right side.
    pub copy_ready: Option<&'a str>,
}

impl FastLine<'_> {
    /// Powers of two summing to `n`, largest first.
    pub fn exponents(&self) -> Vec<u32> {
        (0..64).rev().filter(|k| self.n >> k & 1 == 1).collect()
    }

    pub fn left(&self, x: u32) -> String {
        if x == 0 {
            self.final_left.to_string()
        } else {
            format!("{}{x}L", self.ns)
        }
    }

    /// The seed state (the whole line when `n == 1`).
    pub fn seed(&self) -> String {
        match self.exponents().as_slice() {
            [0] => self.end.map_or(self.final_right, |e| e.1).to_string(),
            ks => format!("{}S{}", self.ns, ks[0]),
        }
    }

    fn right(&self, x: u32, last: bool) -> String {
        match (x, last, self.end) {
            (0, true, Some((_, fin))) => fin.to_string(),
            (_, true, Some((pend, _))) => pend.to_string(),
            (0, _, _) => self.final_right.to_string(),
            _ => self.pending_right.to_string(),
        }
    }

    pub fn add(&self, r: &mut Rules) {
        let f = self.frame;
        let ns = self.ns;
        let ks = self.exponents();
        if ks == [0] {
            return;
        }
        for (j, &k) in ks.iter().enumerate() {
            let last = j + 1 == ks.len();
            if k == 0 {
                continue;
            }
            let partner = if last { self.right(k - 1, true) } else { format!("{ns}U{k}") };
            r.add(f, &format!("{ns}S{k} - n +x -> {} {partner} r +x", self.left(k - 1)));
            if !last {
                let next = ks[j + 1];
                let spawned = if next == 0 {
                    self.right(0, true)
                } else {
                    format!("{ns}S{next}")
                };
                r.add(f, &format!("{ns}U{k} - n +x -> {} {spawned} r +x", self.right(k - 1, false)));
            }
        }
        let top = ks[0];
        for x in 1..top {
            let mut rights = vec![(self.right(x, false), self.right(x - 1, false))];
            if let Some((pend, _)) = self.end {
                rights.push((pend.to_string(), self.right(x - 1, true)));
            }
            let lo = self.left(x - 1);
            let o2 = self.right(x - 1, false);
            Insert {
                frame: f,
                tag: &format!("{ns}{x}"),
                left: &self.left(x),
                rights: &rights,
                out_left: &lo,
                out_new: &o2,
                out_copy: &lo,
                copy_ready: self.copy_ready,
            }
            .add(r);
        }
    }
}

fn plain(n: u64) -> FastLine<'static> {
    FastLine {
        frame: Frame::IDENTITY,
        ns: "",
        n,
        final_left: "0",
        final_right: "0",
        pending_right: "0",
        end: None,
        copy_ready: None,
    }
}

fn straight(n: u64, s: &str) -> Configuration {
    line(GridPoint::ORIGIN, Direction::PosX, &vec![State::new(s); n as usize], Bond::Rigid)
}

/// A rigid line of `n` monomers in state `0`, grown from a single seed in
/// expected time `O(log n)`.
pub fn gen_fast_line(n: u64) -> Result<Program, ProgramError> {
    if n == 0 {
        return Err(ProgramError::OutOfRange("n must be at least 1".into()));
    }
    let spec = plain(n);
    let mut r = Rules::new();
    spec.add(&mut r);
    Ok(Program::new(
        format!("fastline-{n}"),
        r.finish(),
        Configuration::single(GridPoint::ORIGIN, State::new(&spec.seed())),
        TerminalSpec::exact(&straight(n, "0")),
        Scaling::Log,
    ))
}

/// A single pair running the insertion subroutine once: `1L 0` becomes
/// four monomers in state `0`.
pub fn gen_insertion_pair() -> Program {
    let mut r = Rules::new();
    plain(4).add(&mut r);
    let initial = line(
        GridPoint::ORIGIN,
        Direction::PosX,
        &[State::new("1L"), State::new("0")],
        Bond::Rigid,
    );
    Program::new("insertion-pair", r.finish(), initial, TerminalSpec::exact(&straight(4, "0")), Scaling::Constant)
}

/// Synchronization rules for a line whose monomers reach one of the
/// `done` states of `values` when their insertions are over. The
/// synchronization row grows on the `-y` side; after one shift every
/// monomer switches from its `done` state to the matching `switched` state,
/// and to `fin` once its synchronization monomer is gone.
///
/// The left end of the line is the monomer with an empty `-x` neighbor, or
/// the one bonded to `anchor` on that side when given.
pub(crate) struct Sync<'a> {
    pub frame: Frame,
    pub ns: &'a str,
    /// `(done, switched, fin)` triples.
    pub values: Vec<(String, String, String)>,
    pub anchor: Option<&'a str>,
}

impl Sync<'_> {
    /// Synchronization of a single `done` state.
    pub fn single<'a>(frame: Frame, ns: &'a str, done: &str, fin: &str, anchor: Option<&'a str>) -> Sync<'a> {
        Sync {
            frame,
            ns,
            values: vec![(done.to_string(), fin.to_string(), fin.to_string())],
            anchor,
        }
    }

    pub fn add(&self, r: &mut Rules) {
        let f = self.frame;
        let ns = self.ns;
        let y = |a: u8, b: u8, role: &str| format!("{ns}Y{a}{b}{role}");
        let z = |a: u8, b: u8| format!("{ns}Z{a}{b}");
        for a in 0..2 {
            for b in 0..2 {
                for rho in ["m", "L"] {
                    for sigma in ["m", "R"] {
                        r.add(
                            f,
                            &format!(
                                "{} {} n +x -> {} {} r +x",
                                y(a, 0, rho),
                                y(0, b, sigma),
                                y(a, 1, rho),
                                y(1, b, sigma)
                            ),
                        );
                    }
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                r.add(f, &format!("{} {} r +x -> {} {} n +x", z(a, 1), z(1, b), z(a, 0), z(0, b)));
            }
        }
        for (v, (done, sw, fin)) in self.values.iter().enumerate() {
            let (s, s_l, s_r, sl, sr) = (
                format!("{ns}{v}s"),
                format!("{ns}{v}sL"),
                format!("{ns}{v}sR"),
                format!("{ns}{v}sl"),
                format!("{ns}{v}sr"),
            );
            r.add(f, &format!("- {done} n +y -> {} {s} r +y", y(0, 0, "m")));
            match self.anchor {
                None => r.add(f, &format!("- {s} n +x -> - {s_l} n +x")),
                Some(a) => r.add(f, &format!("{a} {s} r +x -> {a} {s_l} r +x")),
            }
            r.add(f, &format!("{s} - n +x -> {s_r} - n +x"));
            for a in 0..2 {
                for b in 0..2 {
                    r.add(f, &format!("{} {s_l} r +y -> {} {sl} r +y", y(a, b, "m"), y(a, b, "L")));
                    r.add(f, &format!("{} {s_r} r +y -> {} {sr} r +y", y(a, b, "m"), y(a, b, "R")));
                }
            }
            r.add(f, &format!("{} {s} r +y -> {}f {s} f +y", y(1, 1, "m"), y(1, 1, "m")));
            r.add(f, &format!("{} {sr} r +y -> {}f {sr} f +y", y(1, 0, "R"), y(1, 0, "R")));
            r.add(f, &format!("{sl} {} r -y -> {sw} {} r -w", y(0, 1, "L"), z(0, 1)));
            r.add(f, &format!("{s} {}f f -w -> {sw} {} r -w", y(1, 1, "m"), z(1, 1)));
            r.add(f, &format!("{sr} {}f f -w -> {sw} {} r -w", y(1, 0, "R"), z(1, 0)));
            r.add(f, &format!("{sw} {} r -w -> {fin} - n -w", z(0, 0)));
        }
    }
}

/// A rigid line of `n` monomers that switch to `fin` only once the whole
/// line has been built.
pub fn gen_sync_line(n: u64, fin: &str) -> Result<Program, ProgramError> {
    if n == 0 {
        return Err(ProgramError::OutOfRange("n must be at least 1".into()));
    }
    State::parse(fin).map_err(|e| ProgramError::OutOfRange(e.to_string()))?;
    let spec = FastLine {
        pending_right: "r",
        ..plain(n)
    };
    let mut r = Rules::new();
    if n == 1 {
        r.add(Frame::IDENTITY, &format!("0 - n +x -> {fin} - n +x"));
    } else {
        spec.add(&mut r);
        Sync::single(Frame::IDENTITY, "", "0", fin, None).add(&mut r);
    }
    Ok(Program::new(
        format!("syncline-{n}"),
        r.finish(),
        Configuration::single(GridPoint::ORIGIN, State::new(&spec.seed())),
        TerminalSpec::exact(&straight(n, fin)),
        Scaling::Log,
    ))
}

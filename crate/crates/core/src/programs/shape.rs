//! Computable shapes: a counter writes every pixel index, a Turing machine
//! on each counter row decides whether the pixel belongs to the shape, the
//! backbone folds into the canvas and the pixels outside the shape are
//! carved away.
//!
//! Pixel `i` (backbone monomer `i`) lies in column `i / m` of the canvas,
//! where `m = 2^ceil(log2(n) / 2)` is the canvas height. Even columns run
//! upwards and odd columns downwards, so the canvas is filled in
//! boustrophedon order: pixel `i` sits at `(r, t)` for even `r` and at
//! `(r, m - 1 - t)` for odd `r`, with `r = i / m` and `t = i % m`.
//!
//! Stages:
//! 1. The counter finishes row `i`; its backbone monomer starts a machine
//!    that first works out how monomer `i` must fold (its *role*), walks
//!    back to the first tape cell and then runs the user machine.
//! 2. The halted head sweeps to the end of its row and deletes the row from
//!    the end back, handing the verdict and role to the backbone monomer.
//! 3. The backbone synchronizes and folds: each bond turns clockwise in
//!    60° steps until it points to the next pixel.
//! 4. A token runs along the folded backbone to detect the end of folding,
//!    then back while every pixel bonds to all its neighbors, then forward
//!    again to start carving.
//! 5. Carving: pixels outside the shape attach to a parent (a shape pixel
//!    or an attached pixel) and delete themselves once none of their
//!    neighbors still depends on them.

use std::fmt;

use super::build::{Frame, Rules};
use super::counter::{counter_rules, backbone, DONE};
use super::line::Sync;
use super::tm::{Move, Sym, TmSpec, Verdict};
use super::{log2_exact, Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::State;

const ABS: Frame = Frame::IDENTITY;
/// Frame of the backbone synchronization: the line read from top to
/// bottom, with the synchronization row on the `+x` side.
const SYNC: Frame = Frame::mirrored(4);

/// Step budget of the reference interpreter when deciding pixels.
pub const SHAPE_TM_STEPS: u64 = 100_000;

/// Final state of the pixels of the shape.
pub const PIXEL: &str = "px";

/// How a backbone monomer folds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// Pixel 0.
    First,
    /// Inside an upward column.
    Up,
    /// First pixel of a column other than the first.
    Start,
    /// Inside a downward column.
    Down,
    /// Pixel `n - 1`, inside a downward column.
    Last,
}

const ROLES: [Role; 5] = [Role::First, Role::Up, Role::Start, Role::Down, Role::Last];

impl Role {
    fn token(self) -> &'static str {
        match self {
            Role::First => "z",
            Role::Up => "e",
            Role::Start => "s",
            Role::Down => "o",
            Role::Last => "l",
        }
    }

    /// Number of clockwise turns of the bond from the previous pixel.
    fn turns(self) -> usize {
        match self {
            Role::First | Role::Up => 0,
            Role::Start => 1,
            Role::Down | Role::Last => 3,
        }
    }

    /// Direction of the previous pixel's bond to this one, grouped by
    /// final direction.
    fn link(self) -> Link {
        match self {
            Role::First => Link::None,
            Role::Up => Link::Up,
            Role::Start => Link::Right,
            Role::Down | Role::Last => Link::Down,
        }
    }
}

/// Final direction from the previous pixel to this one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    None,
    Up,
    Right,
    Down,
}

const LINKS: [Link; 4] = [Link::None, Link::Up, Link::Right, Link::Down];

impl Link {
    fn token(self) -> &'static str {
        match self {
            Link::None => "Z",
            Link::Up => "E",
            Link::Right => "S",
            Link::Down => "O",
        }
    }

    fn dir(self) -> Option<Direction> {
        match self {
            Link::None => None,
            Link::Up => Some(Direction::PosY),
            Link::Right => Some(Direction::PosX),
            Link::Down => Some(Direction::NegY),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Bond direction after `k` clockwise turns from `+y`.
fn turned(k: usize) -> Direction {
    [Direction::PosY, Direction::PosX, Direction::NegW, Direction::NegY][k]
}

/// Pixel layout for `n = 2^k` pixels.
#[derive(Clone, Copy, Debug)]
struct Canvas {
    k: u32,
    /// Number of low index bits: the canvas height is `2^low`.
    low: u32,
}

impl Canvas {
    fn new(n: u64) -> Result<Canvas, ProgramError> {
        let k = log2_exact(n, 4)?;
        Ok(Canvas { k, low: k.div_ceil(2) })
    }

    #[cfg(test)]
    fn n(self) -> u64 {
        1 << self.k
    }

    fn height(self) -> u64 {
        1 << self.low
    }

    fn pixel(self, i: u64) -> GridPoint {
        let (r, t) = (i >> self.low, i & (self.height() - 1));
        let y = if r % 2 == 0 { t } else { self.height() - 1 - t };
        GridPoint::new(r as i64, y as i64)
    }

    #[cfg(test)]
    fn role(self, i: u64) -> Role {
        let (r, t) = (i >> self.low, i & (self.height() - 1));
        if i == 0 {
            Role::First
        } else if i == self.n() - 1 {
            Role::Last
        } else if t == 0 {
            Role::Start
        } else if r % 2 == 1 {
            Role::Down
        } else {
            Role::Up
        }
    }

    fn input(self, i: u64) -> Vec<Sym> {
        (0..self.k).rev().map(|b| Sym::bit(i >> b & 1 == 1)).collect()
    }
}

/// Canvas coordinates of the pixels accepted by `tm` among the `n` pixel
/// indices, in index order.
pub fn shape_pixels(tm: &TmSpec, n: u64) -> Result<Vec<GridPoint>, ProgramError> {
    tm.validate()?;
    let canvas = Canvas::new(n)?;
    let mut out = Vec::new();
    for i in 0..n {
        let run = tm
            .run(&canvas.input(i), SHAPE_TM_STEPS)
            .map_err(|e| ProgramError::InvalidMachine(format!("pixel {i}: {e}")))?;
        if run.origin > 0 {
            return Err(ProgramError::InvalidMachine(format!(
                "pixel {i}: the machine moves left of its input"
            )));
        }
        if run.verdict == Verdict::Accept {
            out.push(canvas.pixel(i));
        }
    }
    Ok(out)
}

struct Step {
    q: String,
    read: Sym,
    next: String,
    write: Sym,
    mv: Move,
}

fn user_state(role: Role, q: &str) -> String {
    format!("{role}.{q}")
}

/// Transitions of the machine run on every counter row: the role phase
/// followed by a copy of the user machine per role.
fn row_machine(tm: &TmSpec, canvas: Canvas) -> (String, Vec<Step>) {
    let k = canvas.k;
    let mut steps = Vec::new();
    // After reading cell `p` the head walks back to cell 0.
    let back = |j: u32, role: Role| {
        if j == 0 {
            user_state(role, &tm.start)
        } else {
            format!("K{j}.{role}")
        }
    };
    // Flags: any high bit set, all high bits set, last high bit, all low
    // bits clear, all low bits set.
    type Flags = (bool, bool, bool, bool, bool);
    let name = |p: u32, f: Flags| {
        let b = |x: bool| if x { '1' } else { '0' };
        format!("r{p}_{}{}{}{}{}", b(f.0), b(f.1), b(f.2), b(f.3), b(f.4))
    };
    let start_flags: Flags = (false, true, false, true, true);
    let mut frontier = vec![start_flags];
    for p in 0..k {
        let bit_index = k - 1 - p;
        let mut next_frontier = Vec::new();
        for f in frontier {
            for b in [false, true] {
                let mut g = f;
                if bit_index >= canvas.low {
                    g.0 |= b;
                    g.1 &= b;
                    g.2 = b;
                } else {
                    g.3 &= !b;
                    g.4 &= b;
                }
                let next = if p + 1 == k {
                    let (any_hi, all_hi, odd, low_zero, low_one) = g;
                    let role = if !any_hi && low_zero {
                        Role::First
                    } else if all_hi && low_one {
                        Role::Last
                    } else if low_zero {
                        Role::Start
                    } else if odd {
                        Role::Down
                    } else {
                        Role::Up
                    };
                    back(k - 2, role)
                } else {
                    if !next_frontier.contains(&g) {
                        next_frontier.push(g);
                    }
                    name(p + 1, g)
                };
                let mv = if p + 1 == k { Move::Left } else { Move::Right };
                steps.push(Step { q: name(p, f), read: Sym::bit(b), next, write: Sym::bit(b), mv });
            }
        }
        frontier = next_frontier;
    }
    for role in ROLES {
        for j in 1..k.saturating_sub(1) {
            for a in [Sym::Zero, Sym::One] {
                steps.push(Step { q: back(j, role), read: a, next: back(j - 1, role), write: a, mv: Move::Left });
            }
        }
        for ((q, a), t) in &tm.delta {
            steps.push(Step {
                q: user_state(role, q),
                read: *a,
                next: user_state(role, &t.next),
                write: t.write,
                mv: t.mv,
            });
        }
    }
    (name(0, start_flags), steps)
}

fn cell(a: Sym) -> String {
    format!("b{}", a.token())
}

fn head(q: &str, a: Sym) -> String {
    format!("h{q}:{}", a.token())
}

/// Verdict and role carried from a halted machine to the fold.
fn answers() -> Vec<(char, Role)> {
    ['y', 'n'].into_iter().flat_map(|v| ROLES.map(|r| (v, r))).collect()
}

fn machine_rules(r: &mut Rules, tm: &TmSpec, canvas: Canvas) {
    let (start, steps) = row_machine(tm, canvas);
    const WAIT: &str = "tmW";
    for b in [Sym::Zero, Sym::One] {
        r.add(ABS, &format!("{DONE} {} r +x -> {WAIT} {} r +x", cell(b), head(&start, b)));
    }
    for s in &steps {
        let from = head(&s.q, s.read);
        let written = cell(s.write);
        match s.mv {
            Move::Right => {
                for c in Sym::ALL {
                    r.add(ABS, &format!("{from} {} r +x -> {written} {} r +x", cell(c), head(&s.next, c)));
                }
                r.add(ABS, &format!("{from} - n +x -> {written} {} r +x", head(&s.next, Sym::Blank)));
            }
            Move::Left => {
                for c in Sym::ALL {
                    r.add(ABS, &format!("{} {from} r +x -> {} {written} r +x", cell(c), head(&s.next, c)));
                }
            }
        }
    }
    // Halted heads clear their row and report to the backbone.
    let cells: Vec<String> = Sym::ALL.iter().map(|&a| cell(a)).chain(["bx".to_string()]).collect();
    for (v, role) in answers() {
        let q = match v {
            'y' => tm.accept.as_deref(),
            _ => tm.reject.as_deref(),
        };
        let Some(q) = q else { continue };
        let halted = user_state(role, q);
        let (sweep, del, answer) = (format!("T{v}{role}"), format!("D{v}{role}"), format!("P{v}{role}"));
        for a in Sym::ALL {
            let h = head(&halted, a);
            for c in &cells {
                r.add(ABS, &format!("{h} {c} r +x -> bx {sweep} r +x"));
            }
            r.add(ABS, &format!("{h} - n +x -> {del} - n +x"));
        }
        for c in &cells {
            r.add(ABS, &format!("{sweep} {c} r +x -> bx {sweep} r +x"));
            r.add(ABS, &format!("{c} {del} r +x -> {del} - n +x"));
        }
        r.add(ABS, &format!("{sweep} - n +x -> {del} - n +x"));
        r.add(ABS, &format!("{WAIT} {del} r +x -> {answer} - n +x"));
    }
}

fn folded(v: char, role: Role, k: usize) -> String {
    format!("F{v}{role}{k}")
}

fn fold_rules(r: &mut Rules) {
    // The previous pixel may already hold the forward token.
    let mut all: Vec<String> = answers()
        .into_iter()
        .flat_map(|(v, role)| (0..=role.turns()).map(move |k| folded(v, role, k)))
        .collect();
    for v in ['y', 'n'] {
        all.extend(LINKS.map(|l| token("A", v, l)));
    }
    for (v, role) in answers() {
        for k in 0..role.turns() {
            for x in &all {
                r.add(
                    ABS,
                    &format!(
                        "{x} {} r {} -> {x} {} r {}",
                        folded(v, role, k),
                        turned(k),
                        folded(v, role, k + 1),
                        turned(k + 1)
                    ),
                );
            }
        }
    }
}

fn token(kind: &str, v: char, link: Link) -> String {
    format!("{kind}{v}{}", link.token())
}

fn scanning(v: char, link: Link, d: usize) -> String {
    format!("B{v}{}{d}", link.token())
}

fn carve_ready(v: char) -> &'static str {
    if v == 'y' {
        PIXEL
    } else {
        "nu"
    }
}

fn pointed(parent: usize, e: usize) -> String {
    format!("nw{parent}{e}")
}

/// States a pixel can hold while carving.
fn carve_states() -> Vec<String> {
    let mut v = vec![PIXEL.to_string(), "nu".to_string()];
    for d in 0..6 {
        for e in 0..=6 {
            v.push(pointed(d, e));
        }
    }
    v
}

fn sweep_rules(r: &mut Rules) {
    let vs = ['y', 'n'];
    // Forward: check that every bond reached its final direction.
    for v in vs {
        for w in vs {
            r.add(
                ABS,
                &format!(
                    "{} {} r +y -> {} {} r +y",
                    folded(v, Role::First, 0),
                    folded(w, Role::Up, 0),
                    token("A", v, Link::None),
                    folded(w, Role::Up, 0)
                ),
            );
            for link in LINKS {
                for role in [Role::Up, Role::Start, Role::Down, Role::Last] {
                    let f = folded(w, role, role.turns());
                    let d = turned(role.turns());
                    let next = if role == Role::Last {
                        scanning(w, role.link(), 0)
                    } else {
                        token("A", w, role.link())
                    };
                    r.add(
                        ABS,
                        &format!("{} {f} r {d} -> {} {next} r {d}", token("A", v, link), token("a", v, link)),
                    );
                }
            }
        }
    }
    // Backward: bond to every neighbor, then pass the token back.
    let settled: Vec<String> = vs
        .iter()
        .flat_map(|&v| LINKS.iter().flat_map(move |&l| [token("a", v, l), token("c", v, l)]))
        .collect();
    for v in vs {
        for link in LINKS {
            for (d, dir) in Direction::ALL.iter().enumerate() {
                let (now, next) = (scanning(v, link, d), scanning(v, link, d + 1));
                r.add(ABS, &format!("{now} - n {dir} -> {next} - n {dir}"));
                for x in &settled {
                    r.add(ABS, &format!("{now} {x} n {dir} -> {next} {x} r {dir}"));
                    r.add(ABS, &format!("{now} {x} r {dir} -> {next} {x} r {dir}"));
                }
            }
            let done = scanning(v, link, 6);
            match link.dir() {
                Some(d) => {
                    for w in vs {
                        for prev in LINKS {
                            r.add(
                                ABS,
                                &format!(
                                    "{} {done} r {d} -> {} {} r {d}",
                                    token("a", w, prev),
                                    scanning(w, prev, 0),
                                    token("c", v, link)
                                ),
                            );
                        }
                    }
                }
                None => {
                    for w in vs {
                        let next = token("c", w, Link::Up);
                        r.add(ABS, &format!("{done} {next} r +y -> {} {next} r +y", carve_ready(v)));
                    }
                }
            }
        }
    }
    // Forward again: start carving.
    for x in carve_states() {
        for w in vs {
            for link in [Link::Up, Link::Right, Link::Down] {
                let d = link.dir().expect("linked");
                r.add(ABS, &format!("{x} {} r {d} -> {x} {} r {d}", token("c", w, link), carve_ready(w)));
            }
        }
    }
}

fn carve_rules(r: &mut Rules) {
    let mut parents = vec![PIXEL.to_string()];
    for d in 0..6 {
        for e in 0..=6 {
            parents.push(pointed(d, e));
        }
    }
    for (d, dir) in Direction::ALL.iter().enumerate() {
        for p in &parents {
            r.add(ABS, &format!("nu {p} r {dir} -> {} {p} r {dir}", pointed(d, 0)));
        }
    }
    for parent in 0..6 {
        for (e, dir) in Direction::ALL.iter().enumerate() {
            let (now, next) = (pointed(parent, e), pointed(parent, e + 1));
            r.add(ABS, &format!("{now} - n {dir} -> {next} - n {dir}"));
            r.add(ABS, &format!("{now} {PIXEL} r {dir} -> {next} {PIXEL} r {dir}"));
            for other in 0..6 {
                // A neighbour whose parent is this pixel must go first.
                if Direction::ALL[other] == dir.opposite() {
                    continue;
                }
                for f in 0..=6 {
                    let x = pointed(other, f);
                    r.add(ABS, &format!("{now} {x} r {dir} -> {next} {x} r {dir}"));
                }
            }
        }
        let dir = Direction::ALL[parent];
        for p in &parents {
            r.add(ABS, &format!("{} {p} r {dir} -> - {p} n {dir}", pointed(parent, 6)));
        }
    }
}

/// A shape whose pixels are decided by `tm` on the binary index of every
/// pixel (see the module documentation for the layout).
///
/// The machine must halt within [`SHAPE_TM_STEPS`] steps on every index
/// without moving left of its input. The accepted pixels must form a
/// connected shape; otherwise the run will not reach the expected terminal
/// configuration.
pub fn gen_shape(tm: &TmSpec, n: u64) -> Result<Program, ProgramError> {
    let canvas = Canvas::new(n)?;
    let pixels = shape_pixels(tm, n)?;
    let mut r = counter_rules(canvas.k);
    machine_rules(&mut r, tm, canvas);
    Sync {
        frame: SYNC,
        ns: "q",
        values: answers()
            .into_iter()
            .map(|(v, role)| (format!("P{v}{role}"), format!("Q{v}{role}"), folded(v, role, 0)))
            .collect(),
        anchor: None,
    }
    .add(&mut r);
    fold_rules(&mut r);
    sweep_rules(&mut r);
    carve_rules(&mut r);
    let terminal = pixels.into_iter().map(|p| (p, State::new(PIXEL))).collect();
    Ok(Program::new(
        format!("shape-{n}"),
        r.finish(),
        Configuration::single(GridPoint::ORIGIN, State::new(&backbone(n).seed())),
        TerminalSpec::cells(terminal),
        Scaling::Custom,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canvas_layout_is_boustrophedon() {
        let c = Canvas::new(16).unwrap();
        let got: Vec<(i64, i64)> = (0..16).map(|i| c.pixel(i)).map(|p| (p.x, p.y)).collect();
        assert_eq!(&got[..8], &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 3), (1, 2), (1, 1), (1, 0)]);
        let c = Canvas::new(8).unwrap();
        assert_eq!(c.height(), 4);
        assert_eq!(c.pixel(7), GridPoint::new(1, 0));
    }

    #[test]
    fn roles_follow_the_fold() {
        let c = Canvas::new(16).unwrap();
        let roles: String = (0..16).map(|i| c.role(i).token()).collect();
        assert_eq!(roles, "zeeesoooseeesool");
    }

    #[test]
    fn role_phase_matches_the_layout() {
        let id = TmSpec::from_text("tm v1\nSTART a\nACCEPT y\nD a 0 y 0 R\nD a 1 y 1 R\n").unwrap();
        for n in [4, 8, 16, 32] {
            let c = Canvas::new(n).unwrap();
            let (start, steps) = row_machine(&id, c);
            for i in 0..n {
                let mut tape = c.input(i);
                let (mut q, mut at) = (start.clone(), 0usize);
                while let Some(s) = steps.iter().find(|s| s.q == q && s.read == tape[at]) {
                    tape[at] = s.write;
                    q = s.next.clone();
                    if s.mv == Move::Right {
                        at += 1;
                    } else {
                        at -= 1;
                    }
                    if q.contains('.') && !q.starts_with('K') {
                        break;
                    }
                }
                assert_eq!(at, 0, "n={n} i={i}");
                assert_eq!(q, user_state(c.role(i), "a"), "n={n} i={i}");
            }
        }
    }
}

//! Computable `n x n` patterns for `n = 2^k`, `k = 2^q`, grown without
//! leaving the pattern borders and without synchronization.
//!
//! The pattern is tiled by vertical strips of `k` monomers: strip `(b, j)`
//! occupies column `j`, rows `b*k .. b*k + k`. Every strip cell carries two
//! bits: bit `m` (most significant first, counted from the bottom) of the
//! column `x = j` and of the row `y` of the pixels in the strip. The low `q`
//! bits of `y` select a pixel inside the strip; they live in the top `q`
//! cells and act as a run counter.
//!
//! 1. Column `0` is a vertical counter: the strip of band `b` computes
//!    `b + 1` top-down and shuttles the bits, one token at a time, to the
//!    cells it appends above itself.
//! 2. Every strip of column `0` then starts a horizontal counter: strip
//!    `j + 1` is grown top-down next to strip `j`, each new cell reading its
//!    left neighbour and adding the carry.
//! 3. Once its right neighbour is complete, a strip runs the machine once
//!    per cell, bottom cell first, on the tape `x_0 y_0 x_1 y_1 ...` and
//!    colours that cell with the verdict.
//!
//! No movement rules are used, so every monomer is placed at its final
//! position.

use super::build::{Frame, Rules};
use super::tm::{Move, Sym, TmSpec, Verdict};
use super::{Program, ProgramError, Scaling, TerminalSpec};
use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::{Bond, State};

const ABS: Frame = Frame::IDENTITY;

/// Step bound for each pixel computation of the reference interpreter.
pub const PATTERN_TM_STEPS: u64 = 100_000;

/// Final state of accepted pixels.
pub const BLACK: &str = "black";
/// Final state of rejected pixels.
pub const WHITE: &str = "white";

#[derive(Clone, Copy, Debug)]
struct Layout {
    /// `log2 n`.
    k: u32,
    /// `log2 k`.
    q: u32,
}

impl Layout {
    fn new(n: u64) -> Result<Layout, ProgramError> {
        let bad = ProgramError::NotDoublePowerOfTwo(n);
        if n < 4 || !n.is_power_of_two() {
            return Err(bad);
        }
        let k = n.trailing_zeros();
        if !k.is_power_of_two() {
            return Err(bad);
        }
        Ok(Layout { k, q: k.trailing_zeros() })
    }

    fn n(self) -> u64 {
        1 << self.k
    }

    /// Kind of strip cell `m`: bottom, row-index bit, run-counter bit, top.
    fn kind(self, m: u32) -> char {
        if m == 0 {
            'B'
        } else if m + 1 == self.k {
            'T'
        } else if m < self.k - self.q {
            'I'
        } else {
            'P'
        }
    }

    /// Kinds of vertically adjacent cells of one strip, lower first.
    fn pairs(self) -> Vec<(char, char)> {
        let mut v: Vec<(char, char)> = (0..self.k - 1).map(|m| (self.kind(m), self.kind(m + 1))).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Machine input for pixel `(x, y)`: the bits interleaved, most
    /// significant first.
    fn input(self, x: u64, y: u64) -> Vec<Sym> {
        (0..self.k)
            .rev()
            .flat_map(|b| [Sym::bit(x >> b & 1 == 1), Sym::bit(y >> b & 1 == 1)])
            .collect()
    }
}

/// Colour of every pixel `(x, y)` of the `n x n` pattern, accepted pixels
/// `true`, computed with the reference interpreter. Fails if the machine
/// does not run in place on the `2 log2 n` input cells: it must stay on
/// them, never write a blank, and restore its input before halting.
pub fn pattern_colors(tm: &TmSpec, n: u64) -> Result<Vec<(GridPoint, bool)>, ProgramError> {
    tm.validate()?;
    let lay = Layout::new(n)?;
    let mut out = Vec::new();
    for y in 0..n {
        for x in 0..n {
            let input = lay.input(x, y);
            let run = tm
                .run(&input, PATTERN_TM_STEPS)
                .map_err(|e| ProgramError::InvalidMachine(format!("pixel ({x}, {y}): {e}")))?;
            if run.origin > 0 || run.tape.len() != input.len() {
                return Err(ProgramError::InvalidMachine(format!(
                    "pixel ({x}, {y}): the machine leaves its {} input cells",
                    input.len()
                )));
            }
            if run.tape != input {
                return Err(ProgramError::InvalidMachine(format!(
                    "pixel ({x}, {y}): the machine does not restore its input"
                )));
            }
            out.push((GridPoint::new(x as i64, y as i64), run.verdict == Verdict::Accept));
        }
    }
    Ok(out)
}

fn is_row_bit(kind: char) -> bool {
    matches!(kind, 'B' | 'I')
}

/// Rules building column `0`: per band, a top-down pass computing the next
/// band's bits, then one token per cell carrying its bit to the top.
fn column_rules(r: &mut Rules, lay: Layout) {
    let pairs = lay.pairs();
    let bits = [0u8, 1];
    // Top-down pass: a carry moves from the top to the bottom.
    for &(kl, ku) in &pairs {
        for yl in bits {
            for yu in bits {
                for c in bits {
                    let (nb, c2) = if is_row_bit(ku) { (yu ^ c, c & yu) } else { (0, c) };
                    if ku == 'B' {
                        continue;
                    }
                    r.add(ABS, &format!("f{kl}{yl} w{ku}{yu}{c} r +y -> w{kl}{yl}{c2} n{ku}{yu}{nb} r +y"));
                }
            }
        }
    }
    // The bottom cell decides between shuttling and being the last band,
    // and releases the band below.
    for y in bits {
        for c in bits {
            let (nb, c2) = (y ^ c, c & y);
            let out = if c2 == 1 { format!("lB{y}") } else { format!("eB{y}{nb}") };
            r.add(ABS, &format!("- wB{y}{c} n +y -> - {out} n +y"));
            for yt in bits {
                r.add(ABS, &format!("dT{yt} wB{y}{c} r +y -> A00{yt} {out} r +y"));
            }
        }
    }
    // Last band: a walker turns the band into data cells.
    for &(kl, ku) in &pairs {
        for yl in bits {
            for yu in bits {
                for b in bits {
                    let top = if ku == 'T' { format!("A00{yu}") } else { format!("l{ku}{yu}") };
                    r.add(ABS, &format!("l{kl}{yl} n{ku}{yu}{b} r +y -> h{kl}0{yl} {top} r +y"));
                }
            }
        }
    }
    let sent = |kind: char, y: u8| {
        if kind == 'T' {
            format!("dT{y}")
        } else {
            format!("h{kind}0{y}")
        }
    };
    // Cells a token can pass: unsent cells of the band and fresh cells of
    // the band above.
    let mut hosts: Vec<(char, String)> = Vec::new();
    for m in 0..lay.k {
        let kind = lay.kind(m);
        for y in bits {
            for b in bits {
                hosts.push((kind, format!("n{kind}{y}{b}")));
            }
            hosts.push((kind, format!("f{kind}{y}")));
        }
    }
    hosts.sort();
    hosts.dedup();
    let above = |lower: &(char, String), upper: &(char, String)| {
        let fresh = |s: &str| s.starts_with('f');
        match (fresh(&lower.1), fresh(&upper.1)) {
            (false, false) | (true, true) => pairs.contains(&(lower.0, upper.0)),
            (false, true) => lower.0 == 'T' && upper.0 == 'B',
            (true, false) => false,
        }
    };
    let items: Vec<(char, u8)> = (0..lay.k).map(|m| lay.kind(m)).flat_map(|kd| bits.map(|b| (kd, b))).collect();
    // Emission.
    for m in 0..lay.k {
        let kind = lay.kind(m);
        for y in bits {
            for b in bits {
                for u in hosts.iter().filter(|u| above(&(kind, format!("n{kind}{y}{b}")), u)) {
                    r.add(ABS, &format!("e{kind}{y}{b} {} r +y -> {} {}^{kind}{b} r +y", u.1, sent(kind, y), u.1));
                }
            }
        }
    }
    for l in &hosts {
        for &(ik, ib) in &items {
            // Hop up.
            for u in hosts.iter().filter(|u| above(l, u)) {
                r.add(ABS, &format!("{}^{ik}{ib} {} r +y -> {} {}^{ik}{ib} r +y", l.1, u.1, l.1, u.1));
            }
            // Append at the top of the column.
            if ik == 'T' {
                r.add(ABS, &format!("{}^{ik}{ib} - n +y -> {} wT{ib}1 r +y", l.1, l.1));
            } else {
                r.add(ABS, &format!("{}^{ik}{ib} - n +y -> {}^r f{ik}{ib} r +y", l.1, l.1));
            }
        }
        // Return walker.
        for u in hosts.iter().filter(|u| above(l, u)) {
            r.add(ABS, &format!("{} {}^r r +y -> {}^r {} r +y", l.1, u.1, l.1, u.1));
        }
    }
    for &(kl, ku) in &pairs {
        for yl in bits {
            for yu in bits {
                for b in bits {
                    if kl != 'T' {
                        r.add(ABS, &format!("h{kl}0{yl} n{ku}{yu}{b}^r r +y -> h{kl}0{yl} e{ku}{yu}{b} r +y"));
                    }
                }
            }
        }
    }
}

/// Rules of the horizontal counters: strip `j + 1` grows top-down next to
/// strip `j` with `x` incremented; the last column is the one whose `x` is
/// all ones.
fn row_rules(r: &mut Rules, lay: Layout) {
    let bits = [0u8, 1];
    let below = lay.kind(lay.k - 2);
    for x in bits {
        for y in bits {
            r.add(ABS, &format!("A0{x}{y} - n +x -> W{x}{y} kT{}{y}{x}{} r +x", x ^ 1, x ^ 1));
            for xb in bits {
                for yb in bits {
                    r.add(ABS, &format!("h{below}{xb}{yb} A1{x}{y} r +y -> h{below}{xb}{yb} S{x}{y} r +y"));
                }
            }
            for a in bits {
                for x2 in bits {
                    for y2 in bits {
                        r.add(ABS, &format!("W{x}{y} G{a}{x2}{y2} r +x -> S{x}{y} A{a}{x2}{y2} r +x"));
                    }
                }
            }
        }
    }
    for m in 0..lay.k {
        let kind = lay.kind(m);
        for x in bits {
            for y in bits {
                for c in bits {
                    for a in bits {
                        if kind != 'B' {
                            r.add(ABS, &format!("k{kind}{x}{y}{c}{a} - n -y -> h{kind}{x}{y} p{c}{a} r -y"));
                        }
                        let (x2, c2) = (x ^ c, x & c);
                        let a2 = a & x2;
                        let out = if kind == 'B' {
                            format!("UB{x2}{y}{a2}")
                        } else {
                            format!("k{kind}{x2}{y}{c2}{a2}")
                        };
                        r.add(ABS, &format!("h{kind}{x}{y} p{c}{a} n +x -> h{kind}{x}{y} {out} r +x"));
                    }
                }
            }
        }
    }
    for (kl, ku) in lay.pairs() {
        for xl in bits {
            for yl in bits {
                for xu in bits {
                    for yu in bits {
                        for a in bits {
                            let top = if ku == 'T' {
                                format!("G{a}{xu}{yu}")
                            } else {
                                format!("U{ku}{xu}{yu}{a}")
                            };
                            r.add(ABS, &format!("U{kl}{xl}{yl}{a} h{ku}{xu}{yu} r +y -> h{kl}{xl}{yl} {top} r +y"));
                        }
                    }
                }
            }
        }
    }
}

/// A strip cell during the machine runs: kind, colour (`u`, `0`, `1`) and
/// the two tape symbols.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Cell {
    kind: char,
    col: char,
    w: [u8; 2],
}

impl Cell {
    fn base(self) -> String {
        format!("{}{}{}{}", self.kind, self.col, self.w[0], self.w[1])
    }

    fn idle(self) -> String {
        format!("i{}", self.base())
    }

    fn with(self, ctl: &str) -> String {
        format!("{ctl}{}", self.base())
    }

    fn head(self, track: usize, q: &str) -> String {
        format!("H{track}{}:{q}", self.base())
    }

    fn finished(self) -> &'static str {
        if self.col == '1' {
            BLACK
        } else {
            WHITE
        }
    }
}

/// Vertically adjacent cell pairs that can occur during the runs: cells
/// are coloured bottom-up.
fn cell_pairs(lay: Layout) -> Vec<(Cell, Cell)> {
    let cols = ['u', '0', '1'];
    let mut out = Vec::new();
    for (kl, ku) in lay.pairs() {
        for cl in cols {
            for cu in cols {
                if cl == 'u' && cu != 'u' {
                    continue;
                }
                for wl in 0..4u8 {
                    for wu in 0..4u8 {
                        out.push((
                            Cell { kind: kl, col: cl, w: [wl >> 1, wl & 1] },
                            Cell { kind: ku, col: cu, w: [wu >> 1, wu & 1] },
                        ));
                    }
                }
            }
        }
    }
    out
}

fn sym_bit(s: Sym) -> Option<u8> {
    match s {
        Sym::Zero => Some(0),
        Sym::One => Some(1),
        Sym::Blank => None,
    }
}

/// Rules of the stacked machine runs.
fn machine_rules(r: &mut Rules, lay: Layout, tm: &TmSpec) {
    let bits = [0u8, 1];
    let pairs = cell_pairs(lay);
    let verdict = |q: &str| match (tm.accept.as_deref() == Some(q), tm.reject.as_deref() == Some(q)) {
        (true, _) => Some('1'),
        (_, true) => Some('0'),
        _ => None,
    };
    // Entering the runs: the start signal converts the data cells top-down.
    let fresh = |kind: char, x: u8, y: u8| Cell { kind, col: 'u', w: [x, y] };
    for (kl, ku) in lay.pairs() {
        for [xl, yl, xu, yu] in (0..16u8).map(|v| [v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1]) {
            let (l, u) = (fresh(kl, xl, yl), fresh(ku, xu, yu));
            if ku == 'T' {
                r.add(ABS, &format!("h{kl}{xl}{yl} S{xu}{yu} r +y -> {} {} r +y", l.with("Z"), u.idle()));
            }
            r.add(ABS, &format!("h{kl}{xl}{yl} {} r +y -> {} {} r +y", u.with("Z"), l.with("Z"), u.idle()));
        }
    }
    let arrive_up = |v: char, mut u: Cell| -> String {
        if u.col != 'u' {
            return u.with(&format!("Vu{v}"));
        }
        u.col = v;
        if u.kind == 'T' {
            u.with("F")
        } else {
            u.with("Iu")
        }
    };
    for &(l, u) in &pairs {
        let (li, ui) = (l.idle(), u.idle());
        // Walk down to the bottom and start the machine there.
        r.add(ABS, &format!("{li} {} r +y -> {} {ui} r +y", u.with("Z"), l.with("Z")));
        if l.kind == 'B' {
            r.add(ABS, &format!("{} {ui} r +y -> {} {ui} r +y", l.with("Z"), l.head(0, &tm.start)));
        }
        for v in ['0', '1'] {
            // Verdicts walk down to the bottom, then up to the lowest
            // uncoloured cell.
            r.add(ABS, &format!("{li} {} r +y -> {} {ui} r +y", u.with(&format!("Vd{v}")), l.with(&format!("Vd{v}"))));
            r.add(ABS, &format!("{} {ui} r +y -> {li} {} r +y", l.with(&format!("Vu{v}")), arrive_up(v, u)));
            if l.kind == 'B' {
                let lower = if l.col == 'u' {
                    Cell { col: v, ..l }.with("Iu")
                } else {
                    li.clone()
                };
                let upper = if l.col == 'u' { ui.clone() } else { arrive_up(v, u) };
                r.add(ABS, &format!("{} {ui} r +y -> {lower} {upper} r +y", l.with(&format!("Vd{v}"))));
            }
        }
        // Increment the run counter: up to the top, then a carry down.
        if u.kind == 'T' {
            let old = u.w[1];
            let t = Cell { w: [u.w[0], old ^ 1], ..u };
            r.add(ABS, &format!("{} {ui} r +y -> {li} {} r +y", l.with("Iu"), t.with(&format!("C{old}"))));
        } else {
            r.add(ABS, &format!("{} {ui} r +y -> {li} {} r +y", l.with("Iu"), u.with("Iu")));
        }
        for c in bits {
            let lower = if l.kind == 'P' {
                Cell { w: [l.w[0], l.w[1] ^ c], ..l }.with(&format!("C{}", c & l.w[1]))
            } else {
                l.with("Z")
            };
            r.add(ABS, &format!("{li} {} r +y -> {lower} {ui} r +y", u.with(&format!("C{c}"))));
        }
        // Finish: colours become final states top-down.
        r.add(ABS, &format!("{li} {} r +y -> {} {} r +y", u.with("F"), l.with("F"), u.finished()));
        if l.kind == 'B' {
            for fin in [BLACK, WHITE] {
                r.add(ABS, &format!("{} {fin} r +y -> {} {fin} r +y", l.with("F"), l.finished()));
            }
        }
    }
    // Machine steps. Tape cell `2m + t` is track `t` of strip cell `m`.
    for ((q, a), tr) in &tm.delta {
        let (Some(a), Some(b)) = (sym_bit(*a), sym_bit(tr.write)) else {
            continue;
        };
        let arrive = |c: Cell, track: usize| match verdict(&tr.next) {
            Some(v) => c.with(&format!("Vd{v}")),
            None => c.head(track, &tr.next),
        };
        for &(l, u) in &pairs {
            for track in 0..2 {
                let write = |c: Cell| {
                    let mut w = c.w;
                    w[track] = b;
                    Cell { w, ..c }
                };
                match (tr.mv, track) {
                    (Move::Right, 0) | (Move::Left, 1) => {
                        let to = 1 - track;
                        if l.w[track] == a && l.kind != 'T' {
                            r.add(ABS, &format!("{} {} r +y -> {} {} r +y", l.head(track, q), u.idle(), arrive(write(l), to), u.idle()));
                        }
                        if u.w[track] == a {
                            r.add(ABS, &format!("{} {} r +y -> {} {} r +y", l.idle(), u.head(track, q), l.idle(), arrive(write(u), to)));
                        }
                    }
                    (Move::Right, _) => {
                        if l.w[1] == a {
                            r.add(ABS, &format!("{} {} r +y -> {} {} r +y", l.head(1, q), u.idle(), write(l).idle(), arrive(u, 0)));
                        }
                    }
                    (Move::Left, _) => {
                        if u.w[0] == a {
                            r.add(ABS, &format!("{} {} r +y -> {} {} r +y", l.idle(), u.head(0, q), arrive(l, 1), write(u).idle()));
                        }
                    }
                }
            }
        }
    }
}

/// Initial strip of column `0`, band `0`: all bits zero, the top cell
/// starting the first pass.
fn seed(lay: Layout) -> Configuration {
    let mut c = Configuration::new();
    for m in 0..lay.k {
        let p = GridPoint::new(0, i64::from(m));
        let kind = lay.kind(m);
        let s = if kind == 'T' { "wT01".to_string() } else { format!("f{kind}0") };
        c.add_monomer(p, State::new(&s)).expect("free");
        if m > 0 {
            c.set_bond(p, Direction::NegY, Bond::Rigid).expect("adjacent");
        }
    }
    c
}

/// The `n x n` pattern whose pixel `(x, y)` is black exactly when `tm`
/// accepts the interleaved bits of `x` and `y`.
pub fn gen_pattern(tm: &TmSpec, n: u64) -> Result<Program, ProgramError> {
    let lay = Layout::new(n)?;
    let colors = pattern_colors(tm, n)?;
    let mut r = Rules::new();
    column_rules(&mut r, lay);
    row_rules(&mut r, lay);
    machine_rules(&mut r, lay, tm);
    let terminal = colors
        .into_iter()
        .map(|(p, black)| (p, State::new(if black { BLACK } else { WHITE })))
        .collect();
    debug_assert_eq!(lay.n(), n);
    Ok(Program::new(
        format!("pattern-{n}"),
        r.finish(),
        seed(lay),
        TerminalSpec::cells(terminal),
        Scaling::Custom,
    ))
}

//! Configurations: monomers on the grid and the bonds between them.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::grid::{Direction, GridPoint};
use crate::kinetics;
use crate::state::{Bond, State};
use crate::text::{self, ParseError};

/// Header line of the configuration text format.
pub const CONFIG_HEADER: &str = "nubot-config v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    state: State,
    bonds: [Bond; 6],
}

/// Errors raised by structural edits of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("position {0} is already occupied")]
    Occupied(GridPoint),
    #[error("no monomer at {0}")]
    MonomerNotFound(GridPoint),
    #[error("positions {0} and {1} are not adjacent")]
    NotAdjacent(GridPoint, GridPoint),
    #[error("translation would place two monomers at {0}")]
    CollisionDetected(GridPoint),
    #[error("translation would break the bond between {0} and {1}")]
    BondBroken(GridPoint, GridPoint),
}

/// A finite set of monomers at distinct grid points together with the
/// rigid and flexible bonds between adjacent monomers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    cells: FxHashMap<GridPoint, Cell>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    /// A configuration holding a single monomer.
    pub fn single(p: GridPoint, s: State) -> Self {
        let mut c = Self::new();
        c.cells.insert(
            p,
            Cell {
                state: s,
                bonds: [Bond::Null; 6],
            },
        );
        c
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn state(&self, p: GridPoint) -> Option<State> {
        self.cells.get(&p).map(|c| c.state)
    }

    pub fn is_occupied(&self, p: GridPoint) -> bool {
        self.cells.contains_key(&p)
    }

    /// Bond from the monomer at `p` towards `p + d` (null if either is absent).
    pub fn bond(&self, p: GridPoint, d: Direction) -> Bond {
        self.cells.get(&p).map_or(Bond::Null, |c| c.bonds[d.index()])
    }

    /// Bond between two positions; null unless both are occupied neighbors.
    pub fn bond_between(&self, p: GridPoint, q: GridPoint) -> Bond {
        p.direction_to(q).map_or(Bond::Null, |d| self.bond(p, d))
    }

    /// Place a monomer on an empty site.
    pub fn add_monomer(&mut self, p: GridPoint, s: State) -> Result<(), ConfigError> {
        if self.cells.contains_key(&p) {
            return Err(ConfigError::Occupied(p));
        }
        self.cells.insert(
            p,
            Cell {
                state: s,
                bonds: [Bond::Null; 6],
            },
        );
        Ok(())
    }

    /// Remove the monomer at `p` together with all its bonds.
    pub fn remove_monomer(&mut self, p: GridPoint) -> Option<State> {
        let cell = self.cells.remove(&p)?;
        for d in Direction::ALL {
            if cell.bonds[d.index()].is_bond() {
                if let Some(n) = self.cells.get_mut(&(p + d)) {
                    n.bonds[d.opposite().index()] = Bond::Null;
                }
            }
        }
        Some(cell.state)
    }

    pub fn set_state(&mut self, p: GridPoint, s: State) -> Result<(), ConfigError> {
        let cell = self.cells.get_mut(&p).ok_or(ConfigError::MonomerNotFound(p))?;
        cell.state = s;
        Ok(())
    }

    /// Set the bond between `p` and `p + d`; both sites must be occupied.
    pub fn set_bond(&mut self, p: GridPoint, d: Direction, b: Bond) -> Result<(), ConfigError> {
        let q = p + d;
        if !self.cells.contains_key(&p) {
            return Err(ConfigError::MonomerNotFound(p));
        }
        let other = self.cells.get_mut(&q).ok_or(ConfigError::MonomerNotFound(q))?;
        other.bonds[d.opposite().index()] = b;
        self.cells.get_mut(&p).expect("checked above").bonds[d.index()] = b;
        Ok(())
    }

    /// Set the bond between two positions that must be adjacent.
    pub fn set_bond_between(&mut self, p: GridPoint, q: GridPoint, b: Bond) -> Result<(), ConfigError> {
        let d = p.direction_to(q).ok_or(ConfigError::NotAdjacent(p, q))?;
        self.set_bond(p, d, b)
    }

    /// Neighbors of `p` that share a rigid or flexible bond with it.
    pub fn bonded_neighbors(&self, p: GridPoint) -> impl Iterator<Item = (Direction, Bond)> + '_ {
        let cell = self.cells.get(&p);
        Direction::ALL.into_iter().filter_map(move |d| {
            let b = cell?.bonds[d.index()];
            b.is_bond().then_some((d, b))
        })
    }

    /// Occupied positions in ascending order.
    pub fn positions(&self) -> Vec<GridPoint> {
        let mut v: Vec<GridPoint> = self.cells.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Occupied positions in unspecified order.
    pub fn positions_unordered(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.cells.keys().copied()
    }

    /// Monomers in ascending position order.
    pub fn monomers(&self) -> Vec<(GridPoint, State)> {
        let mut v: Vec<_> = self.cells.iter().map(|(p, c)| (*p, c.state)).collect();
        v.sort_unstable_by_key(|m| m.0);
        v
    }

    /// Every bond once as `(p, q, bond)` with `p < q`, sorted.
    pub fn bonds(&self) -> Vec<(GridPoint, GridPoint, Bond)> {
        let mut v = Vec::new();
        for (p, c) in &self.cells {
            for d in Direction::ALL {
                let b = c.bonds[d.index()];
                let q = *p + d;
                if b.is_bond() && *p < q {
                    v.push((*p, q, b));
                }
            }
        }
        v.sort_unstable();
        v
    }

    /// Translate the monomers at `set` by `v`, carrying their bonds.
    ///
    /// Bonds inside the set move with it. A bond to a monomer outside the set
    /// is kept when it is flexible and the endpoints remain adjacent;
    /// otherwise the translation is rejected and `self` is left untouched.
    pub fn translate_set(&mut self, set: &[GridPoint], v: Direction) -> Result<(), ConfigError> {
        let members: FxHashSet<GridPoint> = set.iter().copied().collect();
        let mut crossing = Vec::new();
        for &p in set {
            let cell = self.cells.get(&p).ok_or(ConfigError::MonomerNotFound(p))?;
            let dest = p + v;
            if self.cells.contains_key(&dest) && !members.contains(&dest) {
                return Err(ConfigError::CollisionDetected(dest));
            }
            for d in Direction::ALL {
                let b = cell.bonds[d.index()];
                let q = p + d;
                if b.is_bond() && !members.contains(&q) {
                    if b == Bond::Rigid || dest.hex_distance(q) != 1 {
                        return Err(ConfigError::BondBroken(p, q));
                    }
                    crossing.push((dest, q, b));
                }
            }
        }
        let mut moved = Vec::with_capacity(set.len());
        for &p in set {
            let mut cell = self.cells.remove(&p).expect("checked above");
            for d in Direction::ALL {
                if cell.bonds[d.index()].is_bond() && !members.contains(&(p + d)) {
                    cell.bonds[d.index()] = Bond::Null;
                    if let Some(n) = self.cells.get_mut(&(p + d)) {
                        n.bonds[d.opposite().index()] = Bond::Null;
                    }
                }
            }
            moved.push((p + v, cell));
        }
        for (p, cell) in moved {
            self.cells.insert(p, cell);
        }
        for (p, q, b) in crossing {
            self.set_bond_between(p, q, b).expect("adjacency checked above");
        }
        Ok(())
    }

    /// A copy of the whole configuration translated by `offset`.
    pub fn translated(&self, offset: GridPoint) -> Configuration {
        Configuration {
            cells: self.cells.iter().map(|(p, c)| (*p + offset, *c)).collect(),
        }
    }

    /// Smallest and largest coordinates, or `None` when empty.
    pub fn bounding_box(&self) -> Option<(GridPoint, GridPoint)> {
        let mut it = self.cells.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo = GridPoint::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = GridPoint::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        Some((lo, hi))
    }

    /// Partition of the monomers by paths of rigid or flexible bonds.
    /// Components and their members are sorted.
    pub fn connected_components(&self) -> Vec<Vec<GridPoint>> {
        let mut seen: FxHashSet<GridPoint> = FxHashSet::default();
        let mut comps = Vec::new();
        for start in self.positions() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for (d, _) in self.bonded_neighbors(p) {
                    let q = p + d;
                    if seen.insert(q) {
                        comp.push(q);
                        queue.push_back(q);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Whether every agitation set is the entire configuration.
    pub fn is_stable(&self) -> bool {
        let n = self.len();
        self.cells.keys().all(|&p| {
            Direction::ALL
                .into_iter()
                .all(|v| kinetics::agitation_set(self, p, v).map(|s| s.len() == n).unwrap_or(false))
        })
    }

    /// Translate so that the smallest occupied point is the origin.
    pub fn canonicalize(&self) -> Configuration {
        match self.cells.keys().min() {
            Some(&m) => self.translated(-m),
            None => Configuration::new(),
        }
    }

    /// Hashable, order-independent summary identifying the configuration.
    pub fn key(&self) -> ConfigKey {
        let monomers = self.monomers();
        let bonds = self.bonds();
        ConfigKey { monomers, bonds }
    }

    /// Serialize in the `nubot-config v1` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(CONFIG_HEADER);
        out.push('\n');
        for (p, s) in self.monomers() {
            let _ = writeln!(out, "M {} {} {}", p.x, p.y, s);
        }
        for (p, q, b) in self.bonds() {
            let _ = writeln!(out, "B {} {} {} {} {}", p.x, p.y, q.x, q.y, b);
        }
        out
    }

    /// Parse the `nubot-config v1` text format.
    pub fn from_text(src: &str) -> Result<Configuration, ParseError> {
        let mut c = Configuration::new();
        let mut pending_bonds = Vec::new();
        for (line, toks) in text::body_lines(src, CONFIG_HEADER)? {
            match toks[0].text {
                "M" => {
                    text::expect_len(line, &toks, 4, "monomer record")?;
                    let p = GridPoint::new(text::parse_int(line, &toks[1])?, text::parse_int(line, &toks[2])?);
                    let s = State::parse(toks[3].text).map_err(|e| ParseError::at(line, &toks[3], e))?;
                    c.add_monomer(p, s).map_err(|e| ParseError::at(line, &toks[1], e))?;
                }
                "B" => {
                    text::expect_len(line, &toks, 6, "bond record")?;
                    let p = GridPoint::new(text::parse_int(line, &toks[1])?, text::parse_int(line, &toks[2])?);
                    let q = GridPoint::new(text::parse_int(line, &toks[3])?, text::parse_int(line, &toks[4])?);
                    let b = match toks[5].text {
                        "r" => Bond::Rigid,
                        "f" => Bond::Flexible,
                        other => {
                            return Err(ParseError::at(
                                line,
                                &toks[5],
                                format!("bond type must be `r` or `f`, found `{other}`"),
                            ))
                        }
                    };
                    pending_bonds.push((line, toks[1], p, q, b));
                }
                other => {
                    return Err(ParseError::at(line, &toks[0], format!("unknown record `{other}`")));
                }
            }
        }
        for (line, tok, p, q, b) in pending_bonds {
            if c.bond_between(p, q).is_bond() {
                return Err(ParseError::at(line, &tok, format!("duplicate bond {p} {q}")));
            }
            c.set_bond_between(p, q, b).map_err(|e| ParseError::at(line, &tok, e))?;
        }
        Ok(c)
    }
}

/// Sorted monomer and bond lists; equal keys mean equal configurations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigKey {
    pub monomers: Vec<(GridPoint, State)>,
    pub bonds: Vec<(GridPoint, GridPoint, Bond)>,
}

/// Convenience builder: a straight line of monomers along `dir` starting at
/// `start`, consecutive monomers joined by `bond`.
pub fn line(start: GridPoint, dir: Direction, states: &[State], bond: Bond) -> Configuration {
    let mut c = Configuration::new();
    let mut p = start;
    for (i, &s) in states.iter().enumerate() {
        c.add_monomer(p, s).expect("line positions are distinct");
        if i > 0 && bond.is_bond() {
            c.set_bond(p, dir.opposite(), bond).expect("both ends placed");
        }
        p = p + dir;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> State {
        State::new(n)
    }

    fn pair(b: Bond) -> Configuration {
        line(GridPoint::ORIGIN, Direction::PosX, &[s("a"), s("b")], b)
    }

    #[test]
    fn components_follow_bonds() {
        assert_eq!(pair(Bond::Null).connected_components().len(), 2);
        assert_eq!(pair(Bond::Flexible).connected_components().len(), 1);
    }

    #[test]
    fn stability_examples() {
        assert!(Configuration::single(GridPoint::ORIGIN, s("a")).is_stable());
        assert!(pair(Bond::Rigid).is_stable());
        assert!(!pair(Bond::Null).is_stable());
    }

    #[test]
    fn canonicalize_translates_to_origin() {
        let c = line(GridPoint::new(5, 5), Direction::PosX, &[s("a"), s("b")], Bond::Rigid);
        let k = c.canonicalize();
        assert_eq!(k.monomers(), vec![(GridPoint::new(0, 0), s("a")), (GridPoint::new(1, 0), s("b"))]);
        assert_eq!(k.bond_between(GridPoint::new(0, 0), GridPoint::new(1, 0)), Bond::Rigid);
        assert_eq!(k.canonicalize(), k);
    }

    #[test]
    fn remove_clears_bonds() {
        let mut c = Configuration::new();
        let o = GridPoint::ORIGIN;
        c.add_monomer(o, s("a")).unwrap();
        for d in [Direction::PosX, Direction::PosY, Direction::NegX] {
            c.add_monomer(o + d, s("b")).unwrap();
            c.set_bond(o, d, Bond::Rigid).unwrap();
        }
        assert_eq!(c.bonds().len(), 3);
        c.remove_monomer(o);
        assert!(c.bonds().is_empty());
    }

    #[test]
    fn translate_keeps_flexible_crossing_bond() {
        let mut c = pair(Bond::Flexible);
        c.translate_set(&[GridPoint::ORIGIN], Direction::PosY).unwrap();
        assert_eq!(c.bond_between(GridPoint::new(0, 1), GridPoint::new(1, 0)), Bond::Flexible);
        let mut r = pair(Bond::Rigid);
        assert!(matches!(
            r.translate_set(&[GridPoint::ORIGIN], Direction::PosY),
            Err(ConfigError::BondBroken(..))
        ));
        assert_eq!(r, pair(Bond::Rigid));
        let mut n = pair(Bond::Null);
        assert!(matches!(
            n.translate_set(&[GridPoint::ORIGIN], Direction::PosX),
            Err(ConfigError::CollisionDetected(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let mut c = line(GridPoint::new(-2, 3), Direction::PosY, &[s("x"), s("1.1"), s("q")], Bond::Rigid);
        c.set_bond(GridPoint::new(-2, 4), Direction::PosY, Bond::Flexible).unwrap();
        let t = c.to_text();
        let back = Configuration::from_text(&t).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn text_errors_are_located() {
        let e = Configuration::from_text("nubot-config v1\nM 0 0 a\nM 0 zz b\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        let e = Configuration::from_text("nubot-config v1\nM 0 0 a\nM 2 0 b\nB 0 0 2 0 r\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = Configuration::from_text("nubot-config v1\nM 0 0 a\nM 1 0 b\nB 0 0 1 0 n\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 11));
    }
}

//! Triangular-grid geometry in axial coordinates.
//!
//! A grid point is a pair `(x, y)`. The six unit vectors are
//! `+x = (1,0)`, `+y = (0,1)`, `+w = (-1,1)` and their negations, so that
//! `w = y - x` as vectors. Hex distance is the cube-coordinate distance.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// A point of the triangular grid in axial coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// The six neighbors `p + u` for `u` in [`Direction::ALL`] order.
    pub fn neighbors(self) -> [GridPoint; 6] {
        Direction::ALL.map(|d| self + d)
    }

    /// The direction `u` with `self + u == q`, if `q` is a neighbor.
    pub fn direction_to(self, q: GridPoint) -> Option<Direction> {
        Direction::from_offset(q - self)
    }

    /// Number of unit steps between two points.
    pub fn hex_distance(self, other: GridPoint) -> u64 {
        let d = self - other;
        (d.x.unsigned_abs() + d.y.unsigned_abs() + (d.x + d.y).unsigned_abs()) / 2
    }

    /// Cartesian image used for rendering: `X = x + y/2`, `Y = y·√3/2`.
    pub fn to_cartesian(self) -> (f64, f64) {
        let x = self.x as f64 + self.y as f64 / 2.0;
        let y = self.y as f64 * 3f64.sqrt() / 2.0;
        (x, y)
    }
}

impl Add for GridPoint {
    type Output = GridPoint;
    fn add(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for GridPoint {
    type Output = GridPoint;
    fn sub(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for GridPoint {
    type Output = GridPoint;
    fn neg(self) -> GridPoint {
        GridPoint::new(-self.x, -self.y)
    }
}

impl Add<Direction> for GridPoint {
    type Output = GridPoint;
    fn add(self, d: Direction) -> GridPoint {
        self + d.offset()
    }
}

impl Sub<Direction> for GridPoint {
    type Output = GridPoint;
    fn sub(self, d: Direction) -> GridPoint {
        self - d.offset()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// Error returned when a `x,y` point token cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid grid point `{0}` (expected `x,y`)")]
pub struct ParsePointError(pub String);

impl FromStr for GridPoint {
    type Err = ParsePointError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePointError(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(err)?;
        let x = a.trim().parse().map_err(|_| err())?;
        let y = b.trim().parse().map_err(|_| err())?;
        Ok(GridPoint::new(x, y))
    }
}

/// One of the six axial unit directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    PosX,
    PosY,
    PosW,
    NegX,
    NegY,
    NegW,
}

impl Direction {
    /// All directions in counter-clockwise order starting at `+x`.
    pub const ALL: [Direction; 6] = [
        Direction::PosX,
        Direction::PosY,
        Direction::PosW,
        Direction::NegX,
        Direction::NegY,
        Direction::NegW,
    ];

    /// Position in [`Direction::ALL`].
    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> Direction {
        Direction::ALL[i % 6]
    }

    pub const fn offset(self) -> GridPoint {
        match self {
            Direction::PosX => GridPoint::new(1, 0),
            Direction::PosY => GridPoint::new(0, 1),
            Direction::PosW => GridPoint::new(-1, 1),
            Direction::NegX => GridPoint::new(-1, 0),
            Direction::NegY => GridPoint::new(0, -1),
            Direction::NegW => GridPoint::new(1, -1),
        }
    }

    pub fn from_offset(p: GridPoint) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.offset() == p)
    }

    pub const fn opposite(self) -> Direction {
        Direction::from_index(self.index() + 3)
    }

    /// Rotation by 60° counter-clockwise (`+x` to `+y`).
    pub const fn ccw(self) -> Direction {
        Direction::from_index(self.index() + 1)
    }

    /// Rotation by 60° clockwise (`+y` to `+x`).
    pub const fn cw(self) -> Direction {
        Direction::from_index(self.index() + 5)
    }

    /// The two directions at hex distance 1 from `self`.
    pub const fn adjacent(self) -> [Direction; 2] {
        [self.ccw(), self.cw()]
    }

    /// Token used by the text formats: `+x`, `-w`, ...
    pub const fn token(self) -> &'static str {
        match self {
            Direction::PosX => "+x",
            Direction::PosY => "+y",
            Direction::PosW => "+w",
            Direction::NegX => "-x",
            Direction::NegY => "-y",
            Direction::NegW => "-w",
        }
    }

    pub fn from_token(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.token() == s)
    }

    /// Whether this is one of `+x`, `+y`, `+w`.
    pub const fn is_positive(self) -> bool {
        self.index() < 3
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        self.opposite()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_of_origin() {
        let n = GridPoint::ORIGIN.neighbors();
        let expected = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        for (p, (x, y)) in n.iter().zip(expected) {
            assert_eq!(*p, GridPoint::new(x, y));
        }
    }

    #[test]
    fn direction_between_examples() {
        let o = GridPoint::ORIGIN;
        assert_eq!(o.direction_to(GridPoint::new(-1, 1)), Some(Direction::PosW));
        assert_eq!(o.direction_to(GridPoint::new(2, 0)), None);
        assert_eq!(
            GridPoint::new(1, 1).direction_to(GridPoint::new(1, 0)),
            Some(Direction::NegY)
        );
    }

    #[test]
    fn hex_distance_examples() {
        let x = Direction::PosX.offset();
        let y = Direction::PosY.offset();
        assert_eq!(x.hex_distance(y), 1);
        assert_eq!(x.hex_distance(Direction::NegX.offset()), 2);
    }

    #[test]
    fn each_direction_has_two_adjacent() {
        for u in Direction::ALL {
            let near: Vec<_> = Direction::ALL
                .into_iter()
                .filter(|v| u.offset().hex_distance(v.offset()) == 1)
                .collect();
            assert_eq!(near.len(), 2);
            for v in u.adjacent() {
                assert!(near.contains(&v));
            }
        }
    }

    #[test]
    fn tokens_round_trip() {
        for d in Direction::ALL {
            assert_eq!(Direction::from_token(d.token()), Some(d));
            assert_eq!(-(-d), d);
            assert_eq!(d.ccw().cw(), d);
        }
        assert_eq!("3,-4".parse::<GridPoint>().unwrap(), GridPoint::new(3, -4));
        assert!("3".parse::<GridPoint>().is_err());
    }
}

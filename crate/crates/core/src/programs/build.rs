//! Helpers shared by the generators: orientation frames and a rule-list
//! builder that rejects duplicates.

use rustc_hash::FxHashSet;

use crate::grid::{Direction, GridPoint};
use crate::rules::{rule, Rule, RuleSet, Side};

/// An orientation of the grid: an optional mirror image across the x axis
/// followed by `rot` counter-clockwise rotations of 60°.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Frame {
    pub rot: u8,
    pub mirror: bool,
}

impl Frame {
    pub const IDENTITY: Frame = Frame { rot: 0, mirror: false };

    pub const fn rotated(rot: u8) -> Frame {
        Frame { rot: rot % 6, mirror: false }
    }

    pub const fn mirrored(rot: u8) -> Frame {
        Frame { rot: rot % 6, mirror: true }
    }

    pub fn dir(self, d: Direction) -> Direction {
        let d = if self.mirror {
            // (x, y) -> (x + y, -y)
            Direction::from_index((6 - d.index()) % 6)
        } else {
            d
        };
        Direction::from_index(d.index() + self.rot as usize)
    }

    /// Image of a grid vector.
    pub fn point(self, p: GridPoint) -> GridPoint {
        let (ex, ey) = (self.dir(Direction::PosX).offset(), self.dir(Direction::PosY).offset());
        GridPoint::new(ex.x * p.x + ey.x * p.y, ex.y * p.x + ey.y * p.y)
    }

    /// Apply `self` after `inner`.
    pub fn compose(self, inner: Frame) -> Frame {
        Frame {
            rot: self.dir(inner.dir(Direction::PosX)).index() as u8,
            mirror: self.mirror != inner.mirror,
        }
    }

    pub fn side(self, s: Side) -> Side {
        Side::new(s.s1, s.s2, s.bond, self.dir(s.dir))
    }

    pub fn rule(self, r: Rule) -> Rule {
        Rule::new(r.id, self.side(r.lhs), self.side(r.rhs))
    }
}

/// Orientation-independent identity of a rule: a rule written from the
/// second site's point of view is the same rule.
fn normal_key(r: &Rule) -> (Side, Side) {
    if r.lhs.dir.is_positive() {
        (r.lhs, r.rhs)
    } else {
        let flip = |s: Side| Side::new(s.s2, s.s1, s.bond, s.dir.opposite());
        (flip(r.lhs), flip(r.rhs))
    }
}

/// Accumulates rules written in a local frame.
#[derive(Default)]
pub(crate) struct Rules {
    rules: Vec<Rule>,
    seen: FxHashSet<(Side, Side)>,
}

impl Rules {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a rule given in text form (`"a - n +x -> b c r +x"`), written in
    /// frame `f`. Exact duplicates are ignored.
    pub fn add(&mut self, f: Frame, text: &str) {
        let r = f.rule(rule("", text));
        let key = normal_key(&r);
        if self.seen.insert(key) {
            self.rules.push(r);
        }
    }

    pub fn finish(self) -> RuleSet {
        let rules = self
            .rules
            .into_iter()
            .enumerate()
            .map(|(i, r)| Rule::new((i + 1).to_string(), r.lhs, r.rhs))
            .collect();
        RuleSet::new(rules).expect("generated rules are well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_fixes_x_and_swaps_y_with_minus_w() {
        let m = Frame::mirrored(0);
        assert_eq!(m.dir(Direction::PosX), Direction::PosX);
        assert_eq!(m.dir(Direction::PosY), Direction::NegW);
        assert_eq!(m.dir(Direction::PosW), Direction::NegY);
        for d in Direction::ALL {
            let p = d.offset();
            assert_eq!(m.dir(d).offset(), GridPoint::new(p.x + p.y, -p.y));
            assert_eq!(m.dir(m.dir(d)), d);
        }
    }

    #[test]
    fn frames_preserve_adjacency() {
        for rot in 0..6 {
            for mirror in [false, true] {
                let f = Frame { rot, mirror };
                for d in Direction::ALL {
                    assert_eq!(f.dir(d.opposite()), f.dir(d).opposite());
                    let [a, b] = d.adjacent();
                    let img = f.dir(d).adjacent();
                    assert!(img.contains(&f.dir(a)) && img.contains(&f.dir(b)));
                    assert_eq!(f.point(d.offset()), f.dir(d).offset());
                }
            }
        }
    }

    #[test]
    fn composition_matches_sequential_application() {
        for a in 0..12u8 {
            for b in 0..12u8 {
                let fa = Frame { rot: a % 6, mirror: a >= 6 };
                let fb = Frame { rot: b % 6, mirror: b >= 6 };
                let c = fa.compose(fb);
                for d in Direction::ALL {
                    assert_eq!(c.dir(d), fa.dir(fb.dir(d)));
                }
            }
        }
    }

    #[test]
    fn duplicates_in_either_orientation_are_dropped() {
        let mut r = Rules::new();
        r.add(Frame::IDENTITY, "a b n +x -> c d r +x");
        r.add(Frame::IDENTITY, "b a n -x -> d c r -x");
        r.add(Frame::IDENTITY, "a b n +x -> c d r +x");
        assert_eq!(r.finish().len(), 1);
    }
}

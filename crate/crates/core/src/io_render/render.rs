//! SVG and ASCII snapshots. SVG positions come from
//! [`GridPoint::to_cartesian`], so the six neighbors sit at unit distance.

use std::fmt::Write as _;

use crate::grid::{Direction, GridPoint};
use crate::model::Configuration;
use crate::state::Bond;

/// Pixels per lattice unit in SVG output.
const UNIT: f64 = 40.0;

/// Legend of [`render_ascii`].
pub const ASCII_LEGEND: &str = "\
ASCII snapshot legend:
  each monomer is the first character of its state; rows are drawn with y
  increasing upwards and each row shifted half a cell right of the one below
  [a]  highlighted monomer
  - / \\  rigid bond along x, y, w
  . : ;  flexible bond along x, y, w";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HighlightKind {
    Movable,
    Frontier,
    Blocking,
}

impl HighlightKind {
    pub const fn class(self) -> &'static str {
        match self {
            HighlightKind::Movable => "movable",
            HighlightKind::Frontier => "frontier",
            HighlightKind::Blocking => "blocking",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Highlight {
    pub kind: HighlightKind,
    pub points: Vec<GridPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("highlighted point {0} is not occupied")]
    Unoccupied(GridPoint),
}

/// A configuration to draw, with optional highlights and timestamp.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub config: Configuration,
    highlights: Vec<Highlight>,
    pub time: Option<f64>,
}

impl Snapshot {
    pub fn new(config: Configuration) -> Self {
        Snapshot {
            config,
            highlights: Vec::new(),
            time: None,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn highlight(mut self, kind: HighlightKind, points: &[GridPoint]) -> Result<Self, RenderError> {
        if let Some(&p) = points.iter().find(|&&p| !self.config.is_occupied(p)) {
            return Err(RenderError::Unoccupied(p));
        }
        let mut points = points.to_vec();
        points.sort_unstable();
        points.dedup();
        self.highlights.push(Highlight { kind, points });
        Ok(self)
    }

    pub fn highlights(&self) -> &[Highlight] {
        &self.highlights
    }

    /// First highlight containing `p`.
    fn class_of(&self, p: GridPoint) -> Option<HighlightKind> {
        self.highlights.iter().find(|h| h.points.binary_search(&p).is_ok()).map(|h| h.kind)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG 1.1 document: unit-diameter disks labelled with their states, a
/// solid dot on the midpoint of every rigid bond and an open circle on the
/// midpoint of every flexible bond. Highlighted disks get the class of
/// their highlight (movable sets are green).
pub fn render_svg(s: &Snapshot) -> String {
    let monomers = s.config.monomers();
    let pts: Vec<(f64, f64)> = monomers.iter().map(|&(p, _)| GridPoint::to_cartesian(p)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, x1, y0, y1) = (x, x, y, y);
    }
    for &(x, y) in &pts {
        (x0, x1, y0, y1) = (x0.min(x), x1.max(x), y0.min(y), y1.max(y));
    }
    let margin = 1.0;
    let width = (x1 - x0 + 2.0 * margin) * UNIT;
    let height = (y1 - y0 + 2.0 * margin) * UNIT;
    // Screen coordinates: y grows downwards.
    let sx = |x: f64| (x - x0 + margin) * UNIT;
    let sy = |y: f64| (y1 - y + margin) * UNIT;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(
        w,
        "<style>.monomer{{fill:#ffffff;stroke:#000000;stroke-width:1.5}}.movable{{fill:#7ccd7c}}.frontier{{fill:#ffc966}}.blocking{{fill:#f08080}}.label{{font-family:monospace;font-size:{:.1}px;text-anchor:middle;dominant-baseline:central}}.rigid{{fill:#000000}}.flexible{{fill:#ffffff;stroke:#000000;stroke-width:1.5}}</style>",
        UNIT * 0.3
    );
    if let Some(t) = s.time {
        let _ = writeln!(w, r#"<text class="label" x="{:.1}" y="{:.1}">t={t}</text>"#, width / 2.0, UNIT * 0.4);
    }
    for (&(p, st), &(x, y)) in monomers.iter().zip(&pts) {
        let class = match s.class_of(p) {
            Some(k) => format!("monomer {}", k.class()),
            None => "monomer".to_string(),
        };
        let _ = writeln!(
            w,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{:.3}"><title>{},{}</title></circle>"#,
            sx(x),
            sy(y),
            UNIT / 2.0 - 1.0,
            p.x,
            p.y
        );
        let _ = writeln!(w, r#"<text class="label" x="{:.3}" y="{:.3}">{}</text>"#, sx(x), sy(y), escape(st.name()));
    }
    for (p, q, b) in s.config.bonds() {
        let ((ax, ay), (bx, by)) = (GridPoint::to_cartesian(p), GridPoint::to_cartesian(q));
        let (mx, my) = (sx((ax + bx) / 2.0), sy((ay + by) / 2.0));
        let class = match b {
            Bond::Rigid => "rigid",
            Bond::Flexible => "flexible",
            Bond::Null => continue,
        };
        let _ = writeln!(w, r#"<circle class="{class}" cx="{mx:.3}" cy="{my:.3}" r="{:.3}"/>"#, UNIT * 0.12);
    }
    out.push_str("</svg>\n");
    out
}

/// Text approximation of a snapshot; see [`ASCII_LEGEND`]. Monomer `(x, y)`
/// is drawn on text row `2·(ymax − y)` at column `4x + 2y` (shifted to
/// start at zero), bonds on the cells between.
pub fn render_ascii(s: &Snapshot) -> String {
    let Some((lo, hi)) = s.config.bounding_box() else {
        return String::new();
    };
    let col = |p: GridPoint| 4 * p.x + 2 * p.y;
    let cmin = s.config.positions_unordered().map(col).min().expect("non-empty") - 1;
    let cmax = s.config.positions_unordered().map(col).max().expect("non-empty") + 1;
    let rows = (2 * (hi.y - lo.y) + 1) as usize;
    let mut grid = vec![vec![' '; (cmax - cmin + 1) as usize]; rows];
    let mut put = |r: i64, c: i64, ch: char| grid[r as usize][(c - cmin) as usize] = ch;
    let row = |p: GridPoint| 2 * (hi.y - p.y);
    for (p, st) in s.config.monomers() {
        let (r, c) = (row(p), col(p));
        put(r, c, st.name().chars().next().unwrap_or('?'));
        if s.class_of(p).is_some() {
            put(r, c - 1, '[');
            put(r, c + 1, ']');
        }
    }
    for (p, q, b) in s.config.bonds() {
        let d = Direction::from_offset(q - p).expect("bonded monomers are adjacent");
        // Orient the bond along +x, +y or +w.
        let (a, d) = match d {
            Direction::PosX | Direction::PosY | Direction::PosW => (p, d),
            _ => (q, d.opposite()),
        };
        let (dr, dc, rigid, flex) = match d {
            Direction::PosX => (0, 2, '-', '.'),
            Direction::PosY => (-1, 1, '/', ':'),
            _ => (-1, -1, '\\', ';'),
        };
        let ch = if b == Bond::Rigid { rigid } else { flex };
        put(row(a) + dr, col(a) + dc, ch);
    }
    let mut out = String::new();
    for line in grid {
        let line: String = line.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::line;
    use crate::state::State;

    fn p(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn single_monomer_is_one_labelled_disk() {
        let svg = render_svg(&Snapshot::new(Configuration::single(p(0, 0), State::new("a"))));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">a</text>"));
    }

    #[test]
    fn rigid_pair_has_a_solid_midpoint_dot() {
        let c = line(p(0, 0), Direction::PosX, &[State::new("a"), State::new("b")], Bond::Rigid);
        let svg = render_svg(&Snapshot::new(c.clone()));
        assert_eq!(svg.matches(r#"<circle class="monomer""#).count(), 2);
        assert_eq!(svg.matches(r#"<circle class="rigid""#).count(), 1);
        // Disks at plane x = 0 and 1 with a one-unit margin; the dot halfway.
        assert!(svg.contains(&format!(r#"class="rigid" cx="{:.3}""#, 1.5 * UNIT)));
        let flex = line(p(0, 0), Direction::PosX, &[State::new("a"), State::new("b")], Bond::Flexible);
        assert_eq!(render_svg(&Snapshot::new(flex)).matches(r#"<circle class="flexible""#).count(), 1);
    }

    #[test]
    fn highlighted_disks_are_green() {
        let c = line(p(0, 0), Direction::PosX, &[State::new("a"), State::new("b")], Bond::Rigid);
        let s = Snapshot::new(c).highlight(HighlightKind::Movable, &[p(0, 0)]).unwrap();
        let svg = render_svg(&s);
        assert_eq!(svg.matches("monomer movable").count(), 1);
        assert!(svg.contains(".movable{fill:#7ccd7c}"));
        assert_eq!(
            Snapshot::new(Configuration::new()).highlight(HighlightKind::Movable, &[p(0, 0)]),
            Err(RenderError::Unoccupied(p(0, 0)))
        );
    }

    #[test]
    fn projection_puts_neighbors_at_unit_distance() {
        for d in Direction::ALL {
            let (x, y) = GridPoint::to_cartesian(p(0, 0) + d);
            assert!((x.hypot(y) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ascii_layout() {
        let s = State::new("a");
        let mut c = line(p(0, 0), Direction::PosX, &[s, s], Bond::Rigid);
        c.add_monomer(p(0, 1), State::new("b")).unwrap();
        c.set_bond_between(p(0, 0), p(0, 1), Bond::Flexible).unwrap();
        c.set_bond_between(p(1, 0), p(0, 1), Bond::Rigid).unwrap();
        let snap = Snapshot::new(c).highlight(HighlightKind::Movable, &[p(1, 0)]).unwrap();
        assert_eq!(render_ascii(&snap), "   b\n  : \\\n a -[a]\n");
    }
}

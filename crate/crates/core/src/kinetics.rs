//! Dynamics: agitation and movable sets, rule application, exact event
//! enumeration and the continuous-time Markov chain stepper.
//!
//! Every rule application and every agitation step has rate 1. In a
//! configuration with `k` applicable transitions the holding time is
//! exponential with rate `k` and each transition is chosen with probability
//! `1/k`. A movement whose movable set is empty is not applicable and does
//! not contribute to `k`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rustc_hash::FxHashSet;

use crate::grid::{Direction, GridPoint};
use crate::model::{ConfigError, Configuration};
use crate::rules::{Arm, Candidate, RuleSet};

/// Name of the pseudo-random generator recorded in trace headers.
pub const RNG_NAME: &str = "chacha8";

/// The generator used for all simulations.
pub type SimRng = ChaCha8Rng;

/// Generator for trial `stream` of a seeded experiment. Streams of one seed
/// are independent ChaCha streams over the same key.
pub fn trial_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Errors raised by kinetic operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KineticsError {
    #[error("no monomer at {0}")]
    MonomerNotFound(GridPoint),
    #[error("positions {0} and {1} are not adjacent")]
    NotAdjacent(GridPoint, GridPoint),
    #[error("movement is blocked: the movable set is empty")]
    Blocked,
    #[error("translation collided at {0}")]
    CollisionDetected(GridPoint),
    #[error("event no longer matches the configuration")]
    StaleEvent,
}

impl From<ConfigError> for KineticsError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::MonomerNotFound(p) => KineticsError::MonomerNotFound(p),
            ConfigError::NotAdjacent(p, q) => KineticsError::NotAdjacent(p, q),
            ConfigError::CollisionDetected(p) | ConfigError::Occupied(p) => {
                KineticsError::CollisionDetected(p)
            }
            ConfigError::BondBroken(p, _) => KineticsError::CollisionDetected(p),
        }
    }
}

/// Greedy frontier expansion shared by agitation and movable sets.
///
/// Starting from `{a}`, repeatedly collect every monomer that blocks the
/// frontier from translating by `v`: the occupant of `p(X) + v`, and any
/// bonded neighbor whose bond the translation would disrupt (rigid bonds
/// always, flexible bonds when adjacency is lost). The bond between `a` and
/// `base` is ignored. Returns `None` as soon as `base` would be required.
fn frontier_set(
    c: &Configuration,
    a: GridPoint,
    base: Option<GridPoint>,
    v: Direction,
) -> Option<Vec<GridPoint>> {
    let mut members: FxHashSet<GridPoint> = FxHashSet::default();
    members.insert(a);
    let mut order = vec![a];
    let mut frontier = vec![a];
    let mut blocking: Vec<GridPoint> = Vec::new();
    let mut blocking_seen: FxHashSet<GridPoint> = FxHashSet::default();
    loop {
        for &x in &frontier {
            let ahead = x + v;
            if c.is_occupied(ahead) && !members.contains(&ahead) && blocking_seen.insert(ahead) {
                blocking.push(ahead);
            }
            for (d, bond) in c.bonded_neighbors(x) {
                let y = x + d;
                if members.contains(&y) || (x == a && Some(y) == base) {
                    continue;
                }
                let disrupted = bond == crate::state::Bond::Rigid || ahead.hex_distance(y) != 1;
                if disrupted && blocking_seen.insert(y) {
                    blocking.push(y);
                }
            }
        }
        if let Some(b) = base {
            if blocking_seen.contains(&b) {
                return None;
            }
        }
        if blocking.is_empty() {
            order.sort_unstable();
            return Some(order);
        }
        for &y in &blocking {
            members.insert(y);
            order.push(y);
        }
        frontier = std::mem::take(&mut blocking);
        blocking_seen.clear();
    }
}

/// The minimal set containing the monomer at `a` that can translate by `v`
/// without collisions or bond disruption. Sorted by position.
pub fn agitation_set(
    c: &Configuration,
    a: GridPoint,
    v: Direction,
) -> Result<Vec<GridPoint>, KineticsError> {
    if !c.is_occupied(a) {
        return Err(KineticsError::MonomerNotFound(a));
    }
    Ok(frontier_set(c, a, None, v).expect("no base monomer to block"))
}

/// The movable set of arm `a` with base `b` along `v`: the agitation set of
/// `a` once the `a`-`b` bond is removed, or empty when it would contain `b`.
pub fn movable_set(
    c: &Configuration,
    a: GridPoint,
    b: GridPoint,
    v: Direction,
) -> Result<Vec<GridPoint>, KineticsError> {
    for p in [a, b] {
        if !c.is_occupied(p) {
            return Err(KineticsError::MonomerNotFound(p));
        }
    }
    if a.hex_distance(b) != 1 {
        return Err(KineticsError::NotAdjacent(a, b));
    }
    Ok(frontier_set(c, a, Some(b), v).unwrap_or_default())
}

/// What an event does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    NonMovement,
    Movement(Arm),
    Agitation,
}

impl EventKind {
    pub const fn token(self) -> &'static str {
        match self {
            EventKind::NonMovement => "nonmove",
            EventKind::Movement(_) => "move",
            EventKind::Agitation => "agit",
        }
    }
}

/// One applicable transition.
///
/// Rule events act on the sites `p1` and `p1 + dir`; agitation events move
/// the agitation set of `p1` by `dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    /// Rule index for rule events.
    pub rule: Option<usize>,
    pub p1: GridPoint,
    pub dir: Direction,
    /// Monomers translated by the event (movable or agitation set).
    pub moving: Vec<GridPoint>,
}

impl Event {
    pub fn p2(&self) -> GridPoint {
        self.p1 + self.dir
    }

    pub fn arm(&self) -> Option<Arm> {
        match self.kind {
            EventKind::Movement(a) => Some(a),
            _ => None,
        }
    }

    /// Translation of the moving monomers, if any.
    pub fn translation(&self, rules: &RuleSet) -> Option<Direction> {
        match self.kind {
            EventKind::NonMovement => None,
            EventKind::Agitation => Some(self.dir),
            EventKind::Movement(arm) => {
                let r = rules.get(self.rule.expect("movement events carry a rule"));
                Direction::from_offset(r.arm_translation(arm))
            }
        }
    }
}

/// Arm position, base position and arm translation of a movement candidate.
fn movement_geometry(rules: &RuleSet, cand: &Candidate) -> (GridPoint, GridPoint, Direction) {
    let rule = rules.get(cand.rule);
    let arm = cand.arm.expect("movement candidate carries an arm");
    let v = Direction::from_offset(rule.arm_translation(arm))
        .expect("adjacent directions differ by a unit vector");
    match arm {
        Arm::First => (cand.p1, cand.p2(), v),
        Arm::Second => (cand.p2(), cand.p1, v),
    }
}

/// Resolve a candidate into an event, or `None` if it is a blocked movement.
pub fn resolve(c: &Configuration, rules: &RuleSet, cand: &Candidate) -> Option<Event> {
    match cand.arm {
        None => Some(Event {
            kind: EventKind::NonMovement,
            rule: Some(cand.rule),
            p1: cand.p1,
            dir: cand.dir,
            moving: Vec::new(),
        }),
        Some(arm) => {
            let (a, b, v) = movement_geometry(rules, cand);
            let moving = frontier_set(c, a, Some(b), v)?;
            Some(Event {
                kind: EventKind::Movement(arm),
                rule: Some(cand.rule),
                p1: cand.p1,
                dir: cand.dir,
                moving,
            })
        }
    }
}

/// Every applicable transition in deterministic order: rule events in
/// candidate order, then (when enabled) six agitation events per monomer in
/// position and direction order.
pub fn enumerate_applicable(c: &Configuration, rules: &RuleSet, agitation: bool) -> Vec<Event> {
    let mut out: Vec<Event> = rules
        .match_candidates(c)
        .iter()
        .filter_map(|cand| resolve(c, rules, cand))
        .collect();
    if agitation {
        for p in c.positions() {
            for v in Direction::ALL {
                let moving = frontier_set(c, p, None, v).expect("no base monomer to block");
                out.push(Event {
                    kind: EventKind::Agitation,
                    rule: None,
                    p1: p,
                    dir: v,
                    moving,
                });
            }
        }
    }
    out
}

/// Number of applicable transitions, without materializing agitation sets.
pub fn count_applicable(c: &Configuration, rules: &RuleSet, agitation: bool) -> usize {
    let rule_events = rules
        .match_candidates(c)
        .iter()
        .filter(|cand| match cand.arm {
            None => true,
            Some(_) => {
                let (a, b, v) = movement_geometry(rules, cand);
                frontier_set(c, a, Some(b), v).is_some()
            }
        })
        .count();
    rule_events + if agitation { 6 * c.len() } else { 0 }
}

fn lhs_matches(c: &Configuration, rules: &RuleSet, rule: usize, p1: GridPoint, dir: Direction) -> bool {
    let l = &rules.get(rule).lhs;
    l.dir == dir
        && c.state(p1) == l.s1
        && c.state(p1 + dir) == l.s2
        && c.bond(p1, dir) == l.bond
}

/// Apply a non-movement rule at `(p1, p1 + dir)`.
pub fn apply_non_movement(
    c: &mut Configuration,
    rules: &RuleSet,
    rule: usize,
    p1: GridPoint,
    dir: Direction,
) -> Result<(), KineticsError> {
    let r = rules.get(rule);
    if r.is_movement() || !lhs_matches(c, rules, rule, p1, dir) {
        return Err(KineticsError::StaleEvent);
    }
    let p2 = p1 + dir;
    for (p, s) in [(p1, r.rhs.s1), (p2, r.rhs.s2)] {
        match s {
            None => {
                c.remove_monomer(p);
            }
            Some(s) => {
                if c.is_occupied(p) {
                    c.set_state(p, s)?;
                } else {
                    c.add_monomer(p, s)?;
                }
            }
        }
    }
    if r.rhs.s1.is_some() && r.rhs.s2.is_some() {
        c.set_bond(p1, dir, r.rhs.bond)?;
    }
    Ok(())
}

fn apply_movement_with(
    c: &mut Configuration,
    rules: &RuleSet,
    rule: usize,
    p1: GridPoint,
    dir: Direction,
    arm: Arm,
    moving: &[GridPoint],
) -> Result<(), KineticsError> {
    let r = rules.get(rule);
    let v = Direction::from_offset(r.arm_translation(arm)).expect("unit translation");
    let p2 = p1 + dir;
    c.set_bond(p1, dir, crate::state::Bond::Null)?;
    if let Err(e) = c.translate_set(moving, v) {
        c.set_bond(p1, dir, r.lhs.bond)?;
        return Err(e.into());
    }
    let (n1, n2) = match arm {
        Arm::First => (p2 - r.rhs.dir, p2),
        Arm::Second => (p1, p1 + r.rhs.dir),
    };
    let (s1, s2) = (r.rhs.s1.expect("movement states"), r.rhs.s2.expect("movement states"));
    c.set_state(n1, s1)?;
    c.set_state(n2, s2)?;
    c.set_bond(n1, r.rhs.dir, r.rhs.bond)?;
    Ok(())
}

/// Apply a movement rule at `(p1, p1 + dir)` with the given arm, computing
/// the movable set first.
pub fn apply_movement(
    c: &mut Configuration,
    rules: &RuleSet,
    rule: usize,
    p1: GridPoint,
    dir: Direction,
    arm: Arm,
) -> Result<Vec<GridPoint>, KineticsError> {
    if !rules.get(rule).is_movement() || !lhs_matches(c, rules, rule, p1, dir) {
        return Err(KineticsError::StaleEvent);
    }
    let cand = Candidate {
        rule,
        p1,
        dir,
        arm: Some(arm),
    };
    let (a, b, v) = movement_geometry(rules, &cand);
    let moving = frontier_set(c, a, Some(b), v).ok_or(KineticsError::Blocked)?;
    apply_movement_with(c, rules, rule, p1, dir, arm, &moving)?;
    Ok(moving)
}

/// Translate the agitation set of `a` by `v`.
pub fn apply_agitation(
    c: &mut Configuration,
    a: GridPoint,
    v: Direction,
) -> Result<Vec<GridPoint>, KineticsError> {
    let set = agitation_set(c, a, v)?;
    c.translate_set(&set, v)?;
    Ok(set)
}

/// Apply an enumerated event.
pub fn apply_event(c: &mut Configuration, rules: &RuleSet, e: &Event) -> Result<(), KineticsError> {
    match e.kind {
        EventKind::NonMovement => {
            apply_non_movement(c, rules, e.rule.expect("rule event"), e.p1, e.dir)
        }
        EventKind::Movement(arm) => {
            let rule = e.rule.expect("rule event");
            if !lhs_matches(c, rules, rule, e.p1, e.dir) {
                return Err(KineticsError::StaleEvent);
            }
            apply_movement_with(c, rules, rule, e.p1, e.dir, arm, &e.moving)
        }
        EventKind::Agitation => {
            c.translate_set(&e.moving, e.dir)?;
            Ok(())
        }
    }
}

/// Result of a single stepper call.
#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    /// No transition is applicable.
    Terminal,
    /// One transition fired after holding time `dt`.
    Fired { dt: f64, event: Event, applicable: usize },
}

/// One CTMC transition: draw `dt ~ Exp(k)`, then pick one of the `k`
/// applicable events uniformly and apply it.
pub fn step<R: Rng + ?Sized>(
    c: &mut Configuration,
    rules: &RuleSet,
    rng: &mut R,
    agitation: bool,
) -> StepOutcome {
    let mut events = enumerate_applicable(c, rules, agitation);
    let k = events.len();
    if k == 0 {
        return StepOutcome::Terminal;
    }
    let dt = Exp::new(k as f64).expect("positive rate").sample(rng);
    let i = rng.random_range(0..k);
    let event = events.swap_remove(i);
    apply_event(c, rules, &event).expect("enumerated events are applicable");
    StepOutcome::Fired {
        dt,
        event,
        applicable: k,
    }
}

/// Limits for [`run`]. A run always stops at a terminal configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Limits {
    pub max_events: Option<u64>,
    pub max_time: Option<f64>,
}

impl Limits {
    pub fn events(n: u64) -> Self {
        Limits {
            max_events: Some(n),
            max_time: None,
        }
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    Terminal,
    EventLimit,
    TimeLimit,
}

impl StopReason {
    pub const fn token(self) -> &'static str {
        match self {
            StopReason::Terminal => "terminal",
            StopReason::EventLimit => "event-limit",
            StopReason::TimeLimit => "time-limit",
        }
    }
}

/// Totals of a finished run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSummary {
    pub events: u64,
    pub time: f64,
    pub stop: StopReason,
}

/// Run the chain from `c` in place, calling `observe` after every event
/// with the new configuration, the event and the current time. The run is
/// terminal once no rule event applies, so with agitation on it does not
/// keep translating a finished assembly.
pub fn run_observed<R, F>(
    c: &mut Configuration,
    rules: &RuleSet,
    rng: &mut R,
    limits: Limits,
    agitation: bool,
    mut observe: F,
) -> RunSummary
where
    R: Rng + ?Sized,
    F: FnMut(&Configuration, &Event, f64),
{
    let mut time = 0.0;
    let mut events = 0u64;
    loop {
        if limits.max_events.is_some_and(|m| events >= m) {
            return RunSummary {
                events,
                time,
                stop: StopReason::EventLimit,
            };
        }
        let mut applicable = enumerate_applicable(c, rules, agitation);
        let k = applicable.len();
        if applicable.iter().all(|e| e.kind == EventKind::Agitation) {
            return RunSummary {
                events,
                time,
                stop: StopReason::Terminal,
            };
        }
        let dt = Exp::new(k as f64).expect("positive rate").sample(rng);
        let i = rng.random_range(0..k);
        if limits.max_time.is_some_and(|m| time + dt > m) {
            return RunSummary {
                events,
                time,
                stop: StopReason::TimeLimit,
            };
        }
        let event = applicable.swap_remove(i);
        apply_event(c, rules, &event).expect("enumerated events are applicable");
        time += dt;
        events += 1;
        observe(c, &event, time);
    }
}

/// One recorded transition of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub time: f64,
    pub event: Event,
}

/// A complete seeded run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub initial: Configuration,
    pub seed: u64,
    pub stream: u64,
    pub agitation: bool,
    pub records: Vec<Record>,
    pub terminal: Configuration,
    pub summary: RunSummary,
}

/// Run a seeded trajectory and record every event.
pub fn run(
    initial: &Configuration,
    rules: &RuleSet,
    seed: u64,
    stream: u64,
    limits: Limits,
    agitation: bool,
) -> Trajectory {
    let mut rng = trial_rng(seed, stream);
    let mut c = initial.clone();
    let mut records = Vec::new();
    let summary = run_observed(&mut c, rules, &mut rng, limits, agitation, |_, e, t| {
        records.push(Record {
            time: t,
            event: e.clone(),
        })
    });
    Trajectory {
        initial: initial.clone(),
        seed,
        stream,
        agitation,
        records,
        terminal: c,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::line;
    use crate::rules::{rule, RuleSet};
    use crate::state::{Bond, State};

    fn p(x: i64, y: i64) -> GridPoint {
        GridPoint::new(x, y)
    }

    fn st(n: &str) -> State {
        State::new(n)
    }

    #[test]
    fn movable_set_fixtures() {
        let mut c = line(p(0, 0), Direction::PosX, &[st("a"), st("b")], Bond::Rigid);
        assert_eq!(movable_set(&c, p(0, 0), p(1, 0), Direction::PosY).unwrap(), vec![p(0, 0)]);
        c.add_monomer(p(0, 1), st("d")).unwrap();
        c.set_bond_between(p(0, 1), p(1, 0), Bond::Rigid).unwrap();
        assert!(movable_set(&c, p(0, 0), p(1, 0), Direction::PosY).unwrap().is_empty());
        c.add_monomer(p(3, 0), st("e")).unwrap();
        assert_eq!(
            movable_set(&c, p(0, 0), p(3, 0), Direction::PosY),
            Err(KineticsError::NotAdjacent(p(0, 0), p(3, 0)))
        );
        assert_eq!(
            movable_set(&c, p(5, 5), p(1, 0), Direction::PosY),
            Err(KineticsError::MonomerNotFound(p(5, 5)))
        );
    }

    #[test]
    fn agitation_set_examples() {
        let c = Configuration::single(p(0, 0), st("a"));
        for v in Direction::ALL {
            assert_eq!(agitation_set(&c, p(0, 0), v).unwrap(), vec![p(0, 0)]);
        }
        let states = vec![st("a"); 7];
        let c = line(p(0, 0), Direction::PosX, &states, Bond::Rigid);
        assert_eq!(agitation_set(&c, p(3, 0), Direction::PosX).unwrap().len(), 7);
        assert_eq!(agitation_set(&c, p(3, 0), Direction::PosY).unwrap().len(), 7);
    }

    #[test]
    fn fig2_r7_both_arms() {
        let rs = RuleSet::new(vec![rule("r7", "1 1 r +x -> 1 2 r +y")]).unwrap();
        let base = line(p(0, 0), Direction::PosX, &[st("1"), st("1")], Bond::Rigid);

        let mut c = base.clone();
        apply_movement(&mut c, &rs, 0, p(0, 0), Direction::PosX, Arm::Second).unwrap();
        assert_eq!(c.state(p(0, 1)), Some(st("2")));
        assert_eq!(c.state(p(0, 0)), Some(st("1")));
        assert_eq!(c.bond(p(0, 0), Direction::PosY), Bond::Rigid);
        assert_eq!(c.len(), 2);

        let mut c = base.clone();
        apply_movement(&mut c, &rs, 0, p(0, 0), Direction::PosX, Arm::First).unwrap();
        assert_eq!(c.state(p(1, -1)), Some(st("1")));
        assert_eq!(c.state(p(1, 0)), Some(st("2")));
        assert_eq!(c.bond(p(1, -1), Direction::PosY), Bond::Rigid);
    }

    #[test]
    fn movement_drags_rigid_tail() {
        let mut states = vec![st("b"), st("a")];
        states.extend(std::iter::repeat_n(st("t"), 5));
        let mut c = line(p(0, 0), Direction::PosX, &states, Bond::Rigid);
        c.set_bond(p(0, 0), Direction::PosX, Bond::Null).unwrap();
        let rs = RuleSet::new(vec![rule("m", "b a n +x -> b a r +y")]).unwrap();
        let moved = apply_movement(&mut c, &rs, 0, p(0, 0), Direction::PosX, Arm::Second).unwrap();
        assert_eq!(moved.len(), 6);
        for i in 0..6 {
            assert_eq!(c.state(p(i, 1)), Some(if i == 0 { st("a") } else { st("t") }));
        }
        assert_eq!(c.bond(p(0, 0), Direction::PosY), Bond::Rigid);
    }

    #[test]
    fn non_movement_examples() {
        let rs = RuleSet::new(vec![
            rule("r3", "3 - n +x -> 0 2 r +x"),
            rule("r6", "1 a r +x -> 1 - n +x"),
        ])
        .unwrap();
        let mut c = Configuration::single(p(0, 0), st("3"));
        apply_non_movement(&mut c, &rs, 0, p(0, 0), Direction::PosX).unwrap();
        assert_eq!(c.state(p(0, 0)), Some(st("0")));
        assert_eq!(c.state(p(1, 0)), Some(st("2")));
        assert_eq!(c.bond(p(0, 0), Direction::PosX), Bond::Rigid);
        assert_eq!(
            apply_non_movement(&mut c, &rs, 0, p(0, 0), Direction::PosX),
            Err(KineticsError::StaleEvent)
        );

        let mut c = line(p(0, 0), Direction::PosX, &[st("1"), st("a")], Bond::Rigid);
        apply_non_movement(&mut c, &rs, 1, p(0, 0), Direction::PosX).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.bonds().is_empty());
    }

    #[test]
    fn enumerate_counts() {
        let rs = RuleSet::new(vec![rule("r3", "3 - n +x -> 0 2 r +x")]).unwrap();
        let c = Configuration::single(p(0, 0), st("3"));
        assert_eq!(enumerate_applicable(&c, &rs, false).len(), 1);
        assert_eq!(enumerate_applicable(&c, &rs, true).len(), 7);
        assert_eq!(count_applicable(&c, &rs, true), 7);

        let rs = RuleSet::new(vec![rule("m", "b a r -x -> b a r +w")]).unwrap();
        let mut c = line(p(0, 0), Direction::PosX, &[st("a"), st("b")], Bond::Rigid);
        c.add_monomer(p(0, 1), st("d")).unwrap();
        c.set_bond_between(p(0, 1), p(1, 0), Bond::Rigid).unwrap();
        assert_eq!(rs.match_candidates(&c).len(), 2);
        assert_eq!(enumerate_applicable(&c, &rs, false).len(), 0);
    }

    #[test]
    fn terminal_and_determinism() {
        let rs = RuleSet::new(vec![
            rule("r2", "2 - n +x -> 0 1 r +x"),
            rule("r1", "1 - n +x -> 0 0 r +x"),
        ])
        .unwrap();
        let c = Configuration::single(p(0, 0), st("2"));
        let a = run(&c, &rs, 11, 0, Limits::default(), false);
        let b = run(&c, &rs, 11, 0, Limits::default(), false);
        assert_eq!(a, b);
        assert_eq!(a.summary.stop, StopReason::Terminal);
        assert_eq!(a.terminal.len(), 3);
        let mut t = a.terminal.clone();
        assert_eq!(step(&mut t, &rs, &mut trial_rng(1, 0), false), StepOutcome::Terminal);
    }

    #[test]
    fn limits_stop_runs() {
        let rs = RuleSet::new(vec![rule("grow", "a - n +x -> b a r +x")]).unwrap();
        let c = Configuration::single(p(0, 0), st("a"));
        let t = run(&c, &rs, 3, 0, Limits::events(5), false);
        assert_eq!(t.summary.stop, StopReason::EventLimit);
        assert_eq!(t.terminal.len(), 6);
        let t = run(
            &c,
            &rs,
            3,
            0,
            Limits {
                max_events: None,
                max_time: Some(2.5),
            },
            false,
        );
        assert_eq!(t.summary.stop, StopReason::TimeLimit);
        assert!(t.summary.time <= 2.5);
    }
}

//! Verification instruments: a brute-force movable-set oracle, exhaustive
//! exploration of the producible configurations, exact expected completion
//! times for small systems, seeded timing studies and scaling fits.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::grid::{Direction, GridPoint};
use crate::kinetics::{apply_event, enumerate_applicable, run, Limits, StopReason};
use crate::model::{ConfigKey, Configuration};
use crate::programs::{Program, ProgramError};
use crate::rules::RuleSet;
use crate::state::{Bond, State};

/// Largest configuration the subset-enumerating oracle accepts.
pub const ORACLE_MAX_MONOMERS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("configuration has {0} monomers; the oracle handles at most {ORACLE_MAX_MONOMERS}")]
    TooLarge(usize),
    #[error("no monomer at {0}")]
    MonomerNotFound(GridPoint),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(GridPoint, GridPoint),
    #[error("the feasible sets have no unique minimum")]
    NoUniqueMinimum,
    #[error("all sizes are equal; nothing to fit")]
    DegenerateFit,
    #[error("at least {0} rows are needed")]
    TooFewRows(usize),
    #[error("exploration truncated after {0} classes")]
    Truncated(usize),
    #[error("a terminal class is unreachable from some state, so the time is infinite")]
    NotAbsorbing,
    #[error(transparent)]
    Program(#[from] ProgramError),
}

/// Whether translating the monomers `set` by `v` keeps every bond intact and
/// collides with no other monomer. The bond between `skip.0` and `skip.1`
/// is ignored.
fn translation_ok(c: &Configuration, set: &[GridPoint], v: Direction, skip: Option<(GridPoint, GridPoint)>) -> bool {
    let inside = |p: GridPoint| set.contains(&p);
    set.iter().all(|&x| {
        let moved = x + v;
        if c.is_occupied(moved) && !inside(moved) {
            return false;
        }
        c.bonded_neighbors(x).all(|(d, b)| {
            let y = x + d;
            if inside(y) || skip.is_some_and(|(a, bb)| (x, y) == (a, bb) || (x, y) == (bb, a)) {
                return true;
            }
            b == Bond::Flexible && moved.hex_distance(y) == 1
        })
    })
}

/// Minimal feasible set among all subsets of `pool` extended by `fixed`.
fn minimal_feasible(
    c: &Configuration,
    fixed: GridPoint,
    pool: &[GridPoint],
    v: Direction,
    skip: Option<(GridPoint, GridPoint)>,
) -> Result<Vec<GridPoint>, AnalysisError> {
    let mut feasible: Vec<Vec<GridPoint>> = Vec::new();
    for mask in 0u32..(1 << pool.len()) {
        let mut set = vec![fixed];
        set.extend(pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p));
        if translation_ok(c, &set, v, skip) {
            set.sort_unstable();
            feasible.push(set);
        }
    }
    let Some(min) = feasible.iter().min_by_key(|s| s.len()).cloned() else {
        return Ok(Vec::new());
    };
    if feasible.iter().any(|s| !min.iter().all(|p| s.contains(p))) {
        return Err(AnalysisError::NoUniqueMinimum);
    }
    Ok(min)
}

fn check_size(c: &Configuration) -> Result<(), AnalysisError> {
    if c.len() > ORACLE_MAX_MONOMERS {
        return Err(AnalysisError::TooLarge(c.len()));
    }
    Ok(())
}

/// Agitation set by definition: the unique smallest set containing `a`
/// that can translate by `v`, found by enumerating every subset.
pub fn agitation_set_oracle(c: &Configuration, a: GridPoint, v: Direction) -> Result<Vec<GridPoint>, AnalysisError> {
    check_size(c)?;
    if !c.is_occupied(a) {
        return Err(AnalysisError::MonomerNotFound(a));
    }
    let pool: Vec<GridPoint> = c.positions().into_iter().filter(|&p| p != a).collect();
    minimal_feasible(c, a, &pool, v, None)
}

/// Movable set by definition: the smallest set containing `a` but not `b`
/// that can translate by `v` once the `a`-`b` bond is removed, or empty if
/// there is none. Every subset is enumerated, and the minimum is checked to
/// be contained in every feasible set.
pub fn movable_set_oracle(
    c: &Configuration,
    a: GridPoint,
    b: GridPoint,
    v: Direction,
) -> Result<Vec<GridPoint>, AnalysisError> {
    check_size(c)?;
    for p in [a, b] {
        if !c.is_occupied(p) {
            return Err(AnalysisError::MonomerNotFound(p));
        }
    }
    if a.hex_distance(b) != 1 {
        return Err(AnalysisError::NotAdjacent(a, b));
    }
    let pool: Vec<GridPoint> = c.positions().into_iter().filter(|&p| p != a && p != b).collect();
    minimal_feasible(c, a, &pool, v, Some((a, b)))
}

/// A random movable-set instance: configuration, arm, base and direction.
#[derive(Clone, Debug)]
pub struct MovableInstance {
    pub config: Configuration,
    pub arm: GridPoint,
    pub base: GridPoint,
    pub dir: Direction,
}

/// Draw an instance: 2 to 10 monomers placed uniformly at distinct cells of
/// a 5x5 window, each adjacent pair independently unbonded, flexible or
/// rigid with probability 1/3, a uniformly chosen ordered pair of monomers
/// as arm and base (redrawn until adjacent) and a uniform direction.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> MovableInstance {
    loop {
        let count = rng.random_range(2..=10usize);
        let mut cells: Vec<GridPoint> = (0..5).flat_map(|x| (0..5).map(move |y| GridPoint::new(x, y))).collect();
        for i in 0..count {
            let j = rng.random_range(i..cells.len());
            cells.swap(i, j);
        }
        cells.truncate(count);
        let mut c = Configuration::new();
        for &p in &cells {
            c.add_monomer(p, State::new("m")).expect("distinct cells");
        }
        let mut sorted = cells.clone();
        sorted.sort_unstable();
        for (i, &p) in sorted.iter().enumerate() {
            for &q in &sorted[i + 1..] {
                if p.hex_distance(q) == 1 {
                    let bond = [Bond::Null, Bond::Flexible, Bond::Rigid][rng.random_range(0..3)];
                    c.set_bond_between(p, q, bond).expect("adjacent");
                }
            }
        }
        let a = cells[rng.random_range(0..count)];
        let b = cells[rng.random_range(0..count)];
        let dir = Direction::ALL[rng.random_range(0..6)];
        if a.hex_distance(b) == 1 {
            return MovableInstance { config: c, arm: a, base: b, dir };
        }
    }
}

/// Bounds for [`explore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_monomers: usize,
    pub max_classes: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_monomers: 64,
            max_classes: 100_000,
        }
    }
}

/// Result of exhaustive exploration. Classes are configurations up to
/// translation, stored canonically.
#[derive(Clone, Debug)]
pub struct ExplorationResult {
    pub produced: Vec<Configuration>,
    /// Indices into `produced`.
    pub terminal: Vec<usize>,
    /// Transitions of each class: target class and multiplicity.
    pub edges: Vec<Vec<(usize, usize)>>,
    pub truncated: bool,
}

impl ExplorationResult {
    pub fn states_explored(&self) -> usize {
        self.produced.len()
    }

    pub fn terminal_classes(&self) -> Vec<&Configuration> {
        self.terminal.iter().map(|&i| &self.produced[i]).collect()
    }
}

/// Breadth-first search over the configurations producible from `initial`
/// with agitation off. A class is terminal when no event applies.
/// Exploration stops, flagged as truncated, when a configuration exceeds
/// `max_monomers` or more than `max_classes` classes are found.
pub fn explore(initial: &Configuration, rules: &RuleSet, bounds: Bounds) -> ExplorationResult {
    let mut index: FxHashMap<ConfigKey, usize> = FxHashMap::default();
    let mut produced = vec![initial.canonicalize()];
    index.insert(produced[0].key(), 0);
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut terminal = Vec::new();
    let mut truncated = false;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let c = produced[i].clone();
        if c.len() > bounds.max_monomers {
            truncated = true;
            break;
        }
        let events = enumerate_applicable(&c, rules, false);
        if events.is_empty() {
            terminal.push(i);
        }
        let mut out: FxHashMap<usize, usize> = FxHashMap::default();
        for e in &events {
            let mut next = c.clone();
            apply_event(&mut next, rules, e).expect("enumerated events are applicable");
            let next = next.canonicalize();
            let key = next.key();
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    if produced.len() >= bounds.max_classes {
                        truncated = true;
                        continue;
                    }
                    let j = produced.len();
                    produced.push(next);
                    index.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            *out.entry(j).or_default() += 1;
        }
        let mut out: Vec<(usize, usize)> = out.into_iter().collect();
        out.sort_unstable();
        if edges.len() <= i {
            edges.resize(i + 1, Vec::new());
        }
        edges[i] = out;
        if truncated {
            break;
        }
    }
    edges.resize(produced.len(), Vec::new());
    terminal.sort_unstable();
    ExplorationResult {
        produced,
        terminal,
        edges,
        truncated,
    }
}

/// Verdict of [`uniquely_produces`].
#[derive(Clone, Debug, PartialEq)]
pub enum Uniqueness {
    Yes,
    /// A terminal class different from the target, or the target itself
    /// when no terminal class exists.
    No(Configuration),
    Inconclusive,
}

/// Whether every terminal configuration producible from `initial` equals
/// `target` up to translation.
pub fn uniquely_produces(initial: &Configuration, rules: &RuleSet, target: &Configuration, bounds: Bounds) -> Uniqueness {
    let ex = explore(initial, rules, bounds);
    if ex.truncated {
        return Uniqueness::Inconclusive;
    }
    let want = target.canonicalize();
    match ex.terminal_classes().into_iter().find(|c| **c != want) {
        Some(w) => Uniqueness::No(w.clone()),
        None if ex.terminal.is_empty() => Uniqueness::No(want),
        None => Uniqueness::Yes,
    }
}

/// Exact expected time to reach a terminal configuration, from the
/// explored chain: `E[s] = 1/k(s) + sum over events of E[next]/k(s)`,
/// solved by Gaussian elimination. Intended for chains of at most a few
/// thousand classes.
pub fn expected_completion_time(initial: &Configuration, rules: &RuleSet, bounds: Bounds) -> Result<f64, AnalysisError> {
    let ex = explore(initial, rules, bounds);
    if ex.truncated {
        return Err(AnalysisError::Truncated(ex.produced.len()));
    }
    let n = ex.produced.len();
    // Rows: k E[s] - sum mult E[t] = 1 for transient s; E[s] = 0 for terminal s.
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (s, out) in ex.edges.iter().enumerate() {
        let k: usize = out.iter().map(|&(_, m)| m).sum();
        if k == 0 {
            a[s][s] = 1.0;
            continue;
        }
        a[s][s] += k as f64;
        for &(t, m) in out {
            a[s][t] -= m as f64;
        }
        a[s][n] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[piv][col].abs() < 1e-12 {
            return Err(AnalysisError::NotAbsorbing);
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && row[col] != 0.0 {
                let f = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    Ok(a[0][n])
}

/// One row of a timing study.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub n: u64,
    /// Completion times of the runs that reached a terminal configuration,
    /// in trial order.
    pub times: Vec<f64>,
    /// Runs stopped by a limit or ending in an unexpected configuration.
    pub failures: usize,
}

impl TimingRow {
    pub fn trials(&self) -> usize {
        self.times.len() + self.failures
    }

    pub fn mean(&self) -> f64 {
        self.times.iter().sum::<f64>() / self.times.len() as f64
    }

    /// Sample standard deviation over the square root of the sample size.
    pub fn standard_error(&self) -> f64 {
        let m = self.times.len() as f64;
        if m < 2.0 {
            return f64::NAN;
        }
        let mean = self.mean();
        let var = self.times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    }
}

/// Mean completion times per size.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingTable {
    pub family: String,
    pub seed_base: u64,
    pub rows: Vec<TimingRow>,
}

impl TimingTable {
    /// Tab-separated table: a header, then one line per size with the
    /// per-trial times comma-separated in the last column.
    pub fn to_text(&self) -> String {
        let mut s = format!("# family={} seed_base={}\nn\ttrials\tfailures\tmean\tse\ttimes\n", self.family, self.seed_base);
        for r in &self.rows {
            let times: Vec<String> = r.times.iter().map(|t| format!("{t:.17e}")).collect();
            writeln!(
                s,
                "{}\t{}\t{}\t{:.6}\t{:.6}\t{}",
                r.n,
                r.trials(),
                r.failures,
                r.mean(),
                r.standard_error(),
                times.join(",")
            )
            .expect("writing to a string");
        }
        s
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }
}

/// Run `trials` seeded runs of `family(n)` for every size. Trial `t` of
/// size `n` uses seed `seed_base + n` and stream `t`, so tables are
/// reproducible and independent of the thread count. A run counts as a
/// failure if it stops on a limit or ends outside the terminal spec.
pub fn timing_study<F>(
    name: &str,
    family: F,
    sizes: &[u64],
    trials: usize,
    seed_base: u64,
    limits: Limits,
) -> Result<TimingTable, AnalysisError>
where
    F: Fn(u64) -> Result<Program, ProgramError> + Sync,
{
    let mut rows = Vec::new();
    for &n in sizes {
        let p = family(n)?;
        let outcomes: Vec<Option<f64>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let tr = run(&p.initial, &p.rules, seed_base.wrapping_add(n), t, limits, false);
                (tr.summary.stop == StopReason::Terminal && p.terminal.matches(&tr.terminal)).then_some(tr.summary.time)
            })
            .collect();
        rows.push(TimingRow {
            n,
            failures: outcomes.iter().filter(|o| o.is_none()).count(),
            times: outcomes.into_iter().flatten().collect(),
        });
    }
    Ok(TimingTable {
        family: name.to_string(),
        seed_base,
        rows,
    })
}

/// Candidate growth laws for mean completion time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Linear,
    Log,
    LogSquared,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Linear, Model::Log, Model::LogSquared];

    pub fn predictor(self, n: u64) -> f64 {
        let l = (n as f64).log2();
        match self {
            Model::Linear => n as f64,
            Model::Log => l,
            Model::LogSquared => l * l,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Model::Linear => "n",
            Model::Log => "log-n",
            Model::LogSquared => "log2-n",
        }
    }
}

/// Least-squares line `mean = a + b * predictor(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub model: Model,
    pub intercept: f64,
    pub slope: f64,
    pub r2: f64,
    /// Residual sum of squares.
    pub rss: f64,
}

/// Fits of every requested model, best (smallest residual) first.
#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub fits: Vec<Fit>,
}

impl FitReport {
    pub fn best(&self) -> &Fit {
        &self.fits[0]
    }

    pub fn get(&self, m: Model) -> Option<&Fit> {
        self.fits.iter().find(|f| f.model == m)
    }

    /// Flat key-value record.
    pub fn to_text(&self) -> String {
        let mut s = format!("best={}\n", self.best().model.token());
        for f in &self.fits {
            let t = f.model.token();
            writeln!(s, "{t}.intercept={:.6}\n{t}.slope={:.6}\n{t}.r2={:.6}\n{t}.rss={:.6}", f.intercept, f.slope, f.r2, f.rss)
                .expect("writing to a string");
        }
        s
    }
}

/// Fit the row means against each model.
pub fn fit_scaling(table: &TimingTable, models: &[Model]) -> Result<FitReport, AnalysisError> {
    let pts: Vec<(u64, f64)> = table.rows.iter().filter(|r| !r.times.is_empty()).map(|r| (r.n, r.mean())).collect();
    if pts.len() < 3 {
        return Err(AnalysisError::TooFewRows(3));
    }
    if pts.iter().all(|p| p.0 == pts[0].0) {
        return Err(AnalysisError::DegenerateFit);
    }
    let mut fits: Vec<Fit> = models
        .iter()
        .map(|&model| {
            let xs: Vec<f64> = pts.iter().map(|p| model.predictor(p.0)).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let m = xs.len() as f64;
            let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = sxy / sxx;
            let intercept = my - slope * mx;
            let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
            let tss: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
            let r2 = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
            Fit {
                model,
                intercept,
                slope,
                r2,
                rss,
            }
        })
        .collect();
    fits.sort_by(|a, b| a.rss.total_cmp(&b.rss));
    Ok(FitReport { fits })
}

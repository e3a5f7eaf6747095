use nubot::kinetics::{run, run_observed, trial_rng, Limits, StopReason};
use nubot::grid::GridPoint;
use nubot::programs::{self, Program, ProgramError, TerminalSpec, TmSpec};
use nubot::state::State;

fn runs_to_target(p: &Program, seeds: u64, max_events: u64) -> f64 {
    let mut total = 0.0;
    for seed in 0..seeds {
        let t = run(&p.initial, &p.rules, seed, 0, Limits::events(max_events), false);
        assert_eq!(t.summary.stop, StopReason::Terminal, "{} seed {seed} did not terminate", p.name);
        assert!(
            p.terminal.matches(&t.terminal),
            "{} seed {seed}: unexpected terminal\n{}",
            p.name,
            t.terminal.canonicalize().to_text()
        );
        total += t.summary.time;
    }
    total / seeds as f64
}

fn always_stable(p: &Program, seeds: u64) {
    for seed in 0..seeds {
        let mut c = p.initial.clone();
        let mut rng = trial_rng(seed, 0);
        run_observed(&mut c, &p.rules, &mut rng, Limits::events(1_000_000), false, |c, e, _| {
            assert!(c.is_stable(), "{} seed {seed}: unstable after {e:?}\n{}", p.name, c.to_text());
        });
    }
}

#[test]
fn example_systems_reach_their_targets() {
    runs_to_target(&programs::gen_simple_line(5).unwrap(), 20, 100);
    runs_to_target(&programs::gen_walker(6).unwrap(), 20, 1000);
    runs_to_target(&programs::gen_insertion(), 20, 100);
    runs_to_target(&programs::gen_rotation(8).unwrap(), 20, 100);
}

#[test]
fn fast_lines_are_exact_and_stable() {
    let p = programs::gen_insertion_pair();
    runs_to_target(&p, 50, 1000);
    always_stable(&p, 20);
    for n in [1, 2, 3, 5, 8, 13, 16, 31, 64] {
        let p = programs::gen_fast_line(n).unwrap();
        runs_to_target(&p, 10, 1_000_000);
        always_stable(&p, 3);
    }
}

#[test]
fn sync_lines_are_exact_and_stable() {
    for n in [1, 2, 3, 5, 8, 16, 21] {
        let p = programs::gen_sync_line(n, "F").unwrap();
        runs_to_target(&p, 10, 1_000_000);
        always_stable(&p, 3);
    }
}

#[test]
fn counters_write_every_row() {
    for n in [2, 4, 8, 16] {
        let p = programs::gen_counter(n).unwrap();
        runs_to_target(&p, 10, 1_000_000);
        always_stable(&p, 2);
    }
}

#[test]
fn squares_are_solid_blocks() {
    for n in [1, 2, 4, 8] {
        let p = programs::gen_square(n).unwrap();
        runs_to_target(&p, 10, 2_000_000);
        always_stable(&p, 2);
    }
}

fn l_shape() -> TmSpec {
    // Pixels 0..=3 (first column) and 4, 11, 12 (bottom row).
    TmSpec::lookup_table(4, &[0, 1, 2, 3, 7, 8, 15])
}

#[test]
fn shapes_keep_exactly_the_accepted_pixels() {
    let p = programs::gen_shape(&l_shape(), 16).unwrap();
    let pixels = programs::shape_pixels(&l_shape(), 16).unwrap();
    assert_eq!(pixels.len(), 7);
    runs_to_target(&p, 5, 5_000_000);
    always_stable(&p, 2);
}

#[test]
fn patterns_are_exact_and_stay_inside_their_borders() {
    for (n, k) in [(4i64, 2usize), (16, 4)] {
        let p = programs::gen_pattern(&TmSpec::pair_parity(2 * k), n as u64).unwrap();
        let expected: Vec<(GridPoint, State)> = (0..n)
            .flat_map(|y| (0..n).map(move |x| (x, y)))
            .map(|(x, y)| {
                let s = if (x + y) % 2 == 0 { programs::BLACK } else { programs::WHITE };
                (GridPoint::new(x, y), State::new(s))
            })
            .collect();
        assert_eq!(p.terminal, TerminalSpec::cells(expected), "pattern-{n}");
        assert!(p.rules.rules().iter().all(|r| !r.is_movement()));
        for seed in 0..3 {
            let mut c = p.initial.clone();
            let mut rng = trial_rng(seed, 0);
            let s = run_observed(&mut c, &p.rules, &mut rng, Limits::events(10_000_000), false, |c, e, _| {
                let (lo, hi) = c.bounding_box().unwrap();
                assert!(lo.x >= 0 && lo.y >= 0 && hi.x < n && hi.y < n, "pattern-{n} seed {seed}: {e:?} leaves the region");
            });
            assert_eq!(s.stop, StopReason::Terminal);
            assert!(p.terminal.matches(&c), "pattern-{n} seed {seed}\n{}", c.to_text());
        }
    }
}

#[test]
fn pattern_machines_must_run_in_place() {
    // Writes a 1 over the first bit.
    let tm = TmSpec::from_text("tm v1\nSTART a\nACCEPT y\nD a 0 y 1 R\nD a 1 y 1 R\n").unwrap();
    assert!(matches!(programs::gen_pattern(&tm, 4), Err(ProgramError::InvalidMachine(_))));
    assert_eq!(
        programs::gen_pattern(&TmSpec::pair_parity(2), 8).unwrap_err(),
        ProgramError::NotDoublePowerOfTwo(8)
    );
}

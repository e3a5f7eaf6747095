//! `nubot` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse or validation error,
//! 3 a run stopped on a limit, 4 verification failure.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use nubot::analysis::{self, Bounds, Model, Uniqueness};
use nubot::io_render::{self, HighlightKind, Snapshot, TraceHeader, TraceWriter};
use nubot::kinetics::{self, Limits, StopReason};
use nubot::programs::{self, Program, ProgramError, TmSpec};
use nubot::{Configuration, Direction, GridPoint, RuleSet};

#[derive(Parser, Debug)]
#[command(name = "nubot", version, about = "Nubot active self-assembly simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one seeded trajectory.
    Run(RunArgs),
    /// Generate the rule, configuration and metadata files of a construction.
    Gen(GenArgs),
    /// Time a construction across sizes and fit growth laws.
    Bench(BenchArgs),
    /// Enumerate every producible configuration of a small system.
    Explore(ExploreArgs),
    /// Compare the movable-set algorithm with the brute-force oracle.
    CheckMovable(CheckArgs),
    /// Draw a configuration, optionally after replaying a trace.
    #[command(after_help = io_render::ASCII_LEGEND)]
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Simpleline,
    Walker,
    Rotation,
    Insertion,
    InsertionPair,
    Fastline,
    Syncline,
    Counter,
    Square,
    Shape,
    Pattern,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Rule file (nubot-rules v1).
    #[arg(long)]
    rules: PathBuf,
    /// Initial configuration file (nubot-config v1).
    #[arg(long)]
    init: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random stream within the seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Stop after this many events.
    #[arg(long)]
    max_events: Option<u64>,
    /// Stop before model time would exceed this value.
    #[arg(long)]
    max_time: Option<f64>,
    /// Include agitation steps.
    #[arg(long)]
    agitation: bool,
    /// Write the trace (nubot-trace v1) here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the terminal configuration here.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write an SVG snapshot every this many events (event 0 included).
    #[arg(long, requires = "snapshot_dir")]
    snapshot_every: Option<u64>,
    /// Directory for numbered snapshots.
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    family: Family,
    /// Size parameter (line length, counter width, square side, canvas pixels or pattern side).
    #[arg(long)]
    n: Option<u64>,
    /// Turing machine file for shape and pattern.
    #[arg(long)]
    tm: Option<PathBuf>,
    /// Final state for syncline.
    #[arg(long, default_value = "F")]
    r#final: String,
    /// Output directory for program.rules, program.config and program.meta.
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    family: Family,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Size n uses seed seed_base + n; trial t uses stream t.
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Per-run event limit.
    #[arg(long, default_value_t = 10_000_000)]
    max_events: u64,
    #[arg(long)]
    tm: Option<PathBuf>,
    #[arg(long, default_value = "F")]
    r#final: String,
    /// Write the timing table here instead of standard output.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ExploreArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    init: PathBuf,
    /// Expected terminal configuration; without it, uniqueness means a single terminal class.
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    max_monomers: usize,
    #[arg(long, default_value_t = 100_000)]
    max_classes: usize,
    /// Also solve for the exact expected completion time.
    #[arg(long)]
    expected_time: bool,
    /// Write every terminal class as terminal-<i>.config into this directory.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// Number of random instances.
    #[arg(long, conflicts_with = "config")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Configuration file for a single instance.
    #[arg(long, requires_all = ["arm", "base", "dir"])]
    config: Option<PathBuf>,
    /// Arm position `x,y`.
    #[arg(long, value_parser = parse_point)]
    arm: Option<GridPoint>,
    /// Base position `x,y`.
    #[arg(long, value_parser = parse_point)]
    base: Option<GridPoint>,
    /// Direction token (+x, -x, +y, -y, +w, -w).
    #[arg(long, value_parser = parse_dir, allow_hyphen_values = true)]
    dir: Option<Direction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Ascii,
}

#[derive(clap::Args, Debug)]
struct RenderArgs {
    /// Configuration to draw, or the initial configuration of the trace.
    #[arg(long)]
    init: PathBuf,
    #[arg(long, requires = "trace")]
    rules: Option<PathBuf>,
    #[arg(long, requires = "rules")]
    trace: Option<PathBuf>,
    /// Draw the configuration after this many trace events (default: all).
    #[arg(long, requires = "trace")]
    at_event: Option<usize>,
    /// Write numbered frames every this many events into the --out directory.
    #[arg(long, requires_all = ["trace", "out"], conflicts_with = "at_event")]
    every: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    format: Format,
    /// Highlight the movable set of this arm (needs --base and --dir).
    #[arg(long, value_parser = parse_point, requires_all = ["base", "dir"])]
    arm: Option<GridPoint>,
    #[arg(long, value_parser = parse_point)]
    base: Option<GridPoint>,
    #[arg(long, value_parser = parse_dir, allow_hyphen_values = true)]
    dir: Option<Direction>,
    /// Output file (or directory with --every); standard output if absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<GridPoint, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let n = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("{v}: {e}"));
    Ok(GridPoint::new(n(x)?, n(y)?))
}

fn parse_dir(s: &str) -> Result<Direction, String> {
    Direction::from_token(s).ok_or_else(|| format!("invalid direction `{s}`"))
}

/// A failed command and its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Limit(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Verify(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Limit(m) | Failure::Verify(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_rules(path: &Path) -> Result<(RuleSet, String), Failure> {
    let text = read(path)?;
    let rules = RuleSet::from_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((rules, text))
}

fn load_config(path: &Path) -> Result<(Configuration, String), Failure> {
    let text = read(path)?;
    let c = Configuration::from_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((c, text))
}

fn load_tm(path: &Path) -> Result<TmSpec, Failure> {
    TmSpec::from_text(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn program_error(e: ProgramError) -> Failure {
    Failure::Usage(e.to_string())
}

/// Build the program of `family` at size `n`.
fn build(family: Family, n: Option<u64>, tm: Option<&TmSpec>, fin: &str) -> Result<Program, Failure> {
    let need = || n.ok_or_else(|| Failure::Usage("--n is required for this family".into()));
    let need_tm = || tm.ok_or_else(|| Failure::Usage("--tm is required for this family".into()));
    let usize_n = || need().map(|v| v as usize);
    match family {
        Family::Simpleline => programs::gen_simple_line(need()?),
        Family::Walker => programs::gen_walker(usize_n()?),
        Family::Rotation => programs::gen_rotation(usize_n()?),
        Family::Insertion => Ok(programs::gen_insertion()),
        Family::InsertionPair => Ok(programs::gen_insertion_pair()),
        Family::Fastline => programs::gen_fast_line(need()?),
        Family::Syncline => programs::gen_sync_line(need()?, fin),
        Family::Counter => programs::gen_counter(need()?),
        Family::Square => programs::gen_square(need()?),
        Family::Shape => programs::gen_shape(need_tm()?, need()?),
        Family::Pattern => {
            let n = need()?;
            match tm {
                Some(tm) => programs::gen_pattern(tm, n),
                None => {
                    // Default machine: checkerboard on the interleaved coordinates.
                    let bits = 2 * n.max(2).ilog2() as usize;
                    programs::gen_pattern(&TmSpec::pair_parity(bits.max(2)), n)
                }
            }
        }
    }
    .map_err(program_error)
}

fn bbox_text(c: &Configuration) -> String {
    match c.bounding_box() {
        Some((lo, hi)) => format!("{},{},{},{}", lo.x, lo.y, hi.x, hi.y),
        None => "-".into(),
    }
}

fn svg_frame(dir: &Path, index: u64, c: &Configuration, t: f64) -> Outcome {
    let path = dir.join(format!("frame-{index:06}.svg"));
    write(&path, &io_render::render_svg(&Snapshot::new(c.clone()).at_time(t)))
}

fn cmd_run(a: RunArgs) -> Outcome {
    let (rules, rules_text) = load_rules(&a.rules)?;
    let (init, config_text) = load_config(&a.init)?;
    let limits = Limits {
        max_events: a.max_events,
        max_time: a.max_time,
    };
    if let Some(dir) = &a.snapshot_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        svg_frame(dir, 0, &init, 0.0)?;
    }
    let header = TraceHeader::new(a.seed, a.stream, a.agitation, &rules_text, &config_text);
    let mut trace = match &a.trace {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Some(TraceWriter::new(BufWriter::new(f), &header).map_err(|e| Failure::Input(e.to_string()))?)
        }
        None => None,
    };
    let mut rng = kinetics::trial_rng(a.seed, a.stream);
    let mut c = init;
    let mut count = 0u64;
    let mut sink_error: Option<Failure> = None;
    let started = Instant::now();
    let summary = kinetics::run_observed(&mut c, &rules, &mut rng, limits, a.agitation, |c, e, t| {
        count += 1;
        if sink_error.is_some() {
            return;
        }
        if let Some(w) = trace.as_mut() {
            if let Err(err) = w.record(&rules, t, e) {
                sink_error = Some(Failure::Input(err.to_string()));
            }
        }
        if let (Some(every), Some(dir)) = (a.snapshot_every, &a.snapshot_dir) {
            if every > 0 && count % every == 0 {
                if let Err(err) = svg_frame(dir, count, c, t) {
                    sink_error = Some(err);
                }
            }
        }
    });
    let wall = started.elapsed();
    if let Some(err) = sink_error {
        return Err(err);
    }
    if let Some(w) = trace {
        w.finish(summary).map_err(|e| Failure::Input(e.to_string()))?;
    }
    if let Some(p) = &a.out {
        write(p, &c.to_text())?;
    }
    println!("stop={}", summary.stop.token());
    println!("events={}", summary.events);
    println!("time={}", summary.time);
    println!("monomers={}", c.len());
    println!("bbox={}", bbox_text(&c));
    println!("wall_seconds={:.6}", wall.as_secs_f64());
    match summary.stop {
        StopReason::Terminal => Ok(()),
        s => Err(Failure::Limit(format!("stopped on {}", s.token()))),
    }
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let tm = a.tm.as_deref().map(load_tm).transpose()?;
    let p = build(a.family, a.n, tm.as_ref(), &a.r#final)?;
    fs::create_dir_all(&a.out).map_err(|e| Failure::Input(format!("{}: {e}", a.out.display())))?;
    write(&a.out.join("program.rules"), &p.rules.to_text())?;
    write(&a.out.join("program.config"), &p.initial.to_text())?;
    write(&a.out.join("program.meta"), &p.meta_text())?;
    println!("program={}", p.name);
    println!("rules={}", p.rules.len());
    println!("state_count={}", p.state_count);
    println!("predicted_scaling={}", p.scaling);
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    if let Some(j) = a.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let tm = a.tm.as_deref().map(load_tm).transpose()?;
    for &n in &a.sizes {
        build(a.family, Some(n), tm.as_ref(), &a.r#final)?;
    }
    let name = format!("{:?}", a.family).to_lowercase();
    let family = |n: u64| match build(a.family, Some(n), tm.as_ref(), &a.r#final) {
        Ok(p) => Ok(p),
        Err(f) => Err(ProgramError::OutOfRange(f.message().to_string())),
    };
    let table = analysis::timing_study(&name, family, &a.sizes, a.trials, a.seed_base, Limits::events(a.max_events))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    match &a.out {
        Some(p) => write(p, &table.to_text())?,
        None => print!("{}", table.to_text()),
    }
    match analysis::fit_scaling(&table, &Model::ALL) {
        Ok(report) => print!("{}", report.to_text()),
        Err(e) => println!("fit=unavailable ({e})"),
    }
    println!("failures={}", table.failures());
    if table.failures() > 0 {
        return Err(Failure::Limit(format!("{} runs did not reach the expected terminal configuration", table.failures())));
    }
    Ok(())
}

fn cmd_explore(a: ExploreArgs) -> Outcome {
    let (rules, _) = load_rules(&a.rules)?;
    let (init, _) = load_config(&a.init)?;
    let bounds = Bounds {
        max_monomers: a.max_monomers,
        max_classes: a.max_classes,
    };
    let ex = analysis::explore(&init, &rules, bounds);
    println!("states_explored={}", ex.states_explored());
    println!("terminal_classes={}", ex.terminal.len());
    println!("truncated={}", ex.truncated);
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, c) in ex.terminal_classes().into_iter().enumerate() {
            write(&dir.join(format!("terminal-{i}.config")), &c.to_text())?;
        }
    }
    let verdict = match &a.target {
        Some(p) => analysis::uniquely_produces(&init, &rules, &load_config(p)?.0, bounds),
        None if ex.truncated => Uniqueness::Inconclusive,
        None if ex.terminal.len() == 1 => Uniqueness::Yes,
        None => Uniqueness::No(ex.terminal_classes().first().map_or_else(Configuration::new, |c| (*c).clone())),
    };
    if a.expected_time {
        match analysis::expected_completion_time(&init, &rules, bounds) {
            Ok(t) => println!("expected_time={t}"),
            Err(e) => println!("expected_time=unavailable ({e})"),
        }
    }
    match verdict {
        Uniqueness::Yes => {
            println!("uniquely_produces=yes");
            Ok(())
        }
        Uniqueness::Inconclusive => {
            println!("uniquely_produces=inconclusive");
            Err(Failure::Limit("exploration truncated".into()))
        }
        Uniqueness::No(w) => {
            println!("uniquely_produces=no");
            print!("{}", w.to_text());
            Err(Failure::Verify("the system does not uniquely produce the target".into()))
        }
    }
}

fn point_list(v: &[GridPoint]) -> String {
    let s: Vec<String> = v.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
    if s.is_empty() {
        "-".into()
    } else {
        s.join(";")
    }
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let disagreements = if let Some(path) = &a.config {
        let (c, _) = load_config(path)?;
        let (arm, base, dir) = (a.arm.expect("required"), a.base.expect("required"), a.dir.expect("required"));
        let oracle = analysis::movable_set_oracle(&c, arm, base, dir).map_err(|e| Failure::Input(e.to_string()))?;
        let algo = kinetics::movable_set(&c, arm, base, dir).map_err(|e| Failure::Input(e.to_string()))?;
        println!("oracle={}", point_list(&oracle));
        println!("algorithm={}", point_list(&algo));
        usize::from(oracle != algo)
    } else {
        let count = a.random.ok_or_else(|| Failure::Usage("give --random N or --config".into()))?;
        let mut rng = kinetics::trial_rng(a.seed, 0);
        let mut bad = 0;
        for i in 0..count {
            let inst = analysis::random_instance(&mut rng);
            let (c, arm, base, v) = (&inst.config, inst.arm, inst.base, inst.dir);
            let movable_ok = analysis::movable_set_oracle(c, arm, base, v).ok() == kinetics::movable_set(c, arm, base, v).ok();
            let agit_ok = analysis::agitation_set_oracle(c, arm, v).ok() == kinetics::agitation_set(c, arm, v).ok();
            if !(movable_ok && agit_ok) {
                bad += 1;
                eprintln!("disagreement on instance {i}: arm={} base={} dir={}\n{}", point_list(&[arm]), point_list(&[base]), v, c.to_text());
            }
        }
        println!("instances={count}");
        bad
    };
    println!("disagreements={disagreements}");
    if disagreements > 0 {
        return Err(Failure::Verify(format!("{disagreements} disagreements")));
    }
    Ok(())
}

fn snapshot(a: &RenderArgs, c: &Configuration, t: Option<f64>) -> Result<Snapshot, Failure> {
    let mut s = Snapshot::new(c.clone());
    if let Some(t) = t {
        s = s.at_time(t);
    }
    if let (Some(arm), Some(base), Some(dir)) = (a.arm, a.base, a.dir) {
        let set = kinetics::movable_set(c, arm, base, dir).map_err(|e| Failure::Input(e.to_string()))?;
        s = s.highlight(HighlightKind::Movable, &set).map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(s)
}

fn draw(a: &RenderArgs, s: &Snapshot) -> String {
    match a.format {
        Format::Svg => io_render::render_svg(s),
        Format::Ascii => io_render::render_ascii(s),
    }
}

fn cmd_render(a: RenderArgs) -> Outcome {
    let (init, config_text) = load_config(&a.init)?;
    let Some(trace_path) = &a.trace else {
        let text = draw(&a, &snapshot(&a, &init, None)?);
        return match &a.out {
            Some(p) => write(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        };
    };
    let (rules, rules_text) = load_rules(a.rules.as_deref().expect("required by clap"))?;
    let trace = io_render::read_trace(&read(trace_path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", trace_path.display())))?;
    let expect = TraceHeader::new(0, 0, false, &rules_text, &config_text);
    if trace.header.rules_hash != expect.rules_hash || trace.header.config_hash != expect.config_hash {
        return Err(Failure::Input("trace was recorded with different rule or configuration files".into()));
    }
    let ext = match a.format {
        Format::Svg => "svg",
        Format::Ascii => "txt",
    };
    if let Some(every) = a.every {
        let dir = a.out.as_deref().expect("required by clap");
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        let mut frames = vec![(0usize, init.clone(), 0.0)];
        io_render::replay_observed(&init, &rules, &trace, |i, c, r| {
            if every > 0 && (i + 1) % every == 0 {
                frames.push((i + 1, c.clone(), r.time));
            }
        })
        .map_err(|e| Failure::Input(e.to_string()))?;
        for (i, c, t) in frames {
            write(&dir.join(format!("frame-{i:06}.{ext}")), &draw(&a, &snapshot(&a, &c, Some(t))?))?;
        }
        return Ok(());
    }
    let upto = a.at_event.unwrap_or(trace.records.len());
    if upto > trace.records.len() {
        return Err(Failure::Usage(format!("the trace has only {} events", trace.records.len())));
    }
    let mut prefix = trace.clone();
    prefix.records.truncate(upto);
    let c = io_render::replay(&init, &rules, &prefix).map_err(|e| Failure::Input(e.to_string()))?;
    let t = prefix.records.last().map_or(0.0, |r| r.time);
    let text = draw(&a, &snapshot(&a, &c, Some(t))?);
    match &a.out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let invocation: Vec<String> = std::env::args().collect();
    println!("invocation={}", invocation.join(" "));
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Explore(a) => cmd_explore(a),
        Command::CheckMovable(a) => cmd_check(a),
        Command::Render(a) => cmd_render(a),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

//! The `nubot-trace v1` format: a header line, one key-value line of run
//! parameters, one line per event and an optional `end` line.
//!
//! ```text
//! nubot-trace v1
//! seed=7 stream=0 agitation=0 rng=chacha8 rules=<sha256> config=<sha256>
//! t=0.4012 kind=nonmove rule=1 p1=0,0 p2=1,0 arm=-
//! t=1.2 kind=agit rule=- p1=1,0 p2=1,1 arm=-
//! end events=2 time=1.2 stop=terminal
//! ```
//!
//! Times are written in the shortest form that parses back to the same
//! `f64`, so replay is bit-exact.

use std::io::{self, Write};

use crate::grid::{Direction, GridPoint};
use crate::kinetics::{apply_event, enumerate_applicable, Event, EventKind, RunSummary, StopReason, Trajectory, RNG_NAME};
use crate::model::Configuration;
use crate::rules::{Arm, RuleSet};
use crate::text::ParseError;

pub const TRACE_HEADER: &str = "nubot-trace v1";

/// Run parameters recorded at the top of a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceHeader {
    pub seed: u64,
    pub stream: u64,
    pub agitation: bool,
    pub rng: String,
    /// SHA-256 of the rule file.
    pub rules_hash: String,
    /// SHA-256 of the initial configuration file.
    pub config_hash: String,
}

impl TraceHeader {
    pub fn new(seed: u64, stream: u64, agitation: bool, rules_text: &str, config_text: &str) -> Self {
        TraceHeader {
            seed,
            stream,
            agitation,
            rng: RNG_NAME.to_string(),
            rules_hash: super::sha256_hex(rules_text.as_bytes()),
            config_hash: super::sha256_hex(config_text.as_bytes()),
        }
    }

    fn line(&self) -> String {
        format!(
            "seed={} stream={} agitation={} rng={} rules={} config={}",
            self.seed,
            self.stream,
            u8::from(self.agitation),
            self.rng,
            self.rules_hash,
            self.config_hash
        )
    }
}

/// One event as stored in a trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub time: f64,
    pub kind: EventKind,
    /// Rule label, absent for agitation.
    pub rule: Option<String>,
    pub p1: GridPoint,
    pub p2: GridPoint,
}

impl TraceRecord {
    pub fn from_event(rules: &RuleSet, time: f64, e: &Event) -> Self {
        TraceRecord {
            time,
            kind: e.kind,
            rule: e.rule.map(|i| rules.get(i).id.clone()),
            p1: e.p1,
            p2: e.p2(),
        }
    }

    pub fn to_line(&self) -> String {
        let arm = match self.kind {
            EventKind::Movement(a) => a.token(),
            _ => "-",
        };
        format!(
            "t={} kind={} rule={} p1={},{} p2={},{} arm={}",
            self.time,
            self.kind.token(),
            self.rule.as_deref().unwrap_or("-"),
            self.p1.x,
            self.p1.y,
            self.p2.x,
            self.p2.y,
            arm
        )
    }

    fn matches(&self, rules: &RuleSet, e: &Event) -> bool {
        e.kind == self.kind
            && e.p1 == self.p1
            && e.p2() == self.p2
            && e.rule.map(|i| rules.get(i).id.as_str()) == self.rule.as_deref()
    }
}

/// Final line of a complete trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEnd {
    pub events: u64,
    pub time: f64,
    pub stop: StopReason,
}

impl From<RunSummary> for TraceEnd {
    fn from(s: RunSummary) -> Self {
        TraceEnd {
            events: s.events,
            time: s.time,
            stop: s.stop,
        }
    }
}

/// A parsed trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub header: TraceHeader,
    pub records: Vec<TraceRecord>,
    pub end: Option<TraceEnd>,
}

/// Streaming trace writer.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W, header: &TraceHeader) -> io::Result<Self> {
        writeln!(out, "{TRACE_HEADER}")?;
        writeln!(out, "{}", header.line())?;
        Ok(TraceWriter { out })
    }

    pub fn record(&mut self, rules: &RuleSet, time: f64, e: &Event) -> io::Result<()> {
        writeln!(self.out, "{}", TraceRecord::from_event(rules, time, e).to_line())
    }

    pub fn finish(mut self, summary: RunSummary) -> io::Result<W> {
        writeln!(self.out, "end events={} time={} stop={}", summary.events, summary.time, summary.stop.token())?;
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Serialize a recorded trajectory.
pub fn write_trajectory(tr: &Trajectory, rules: &RuleSet, rules_text: &str, config_text: &str) -> String {
    let header = TraceHeader::new(tr.seed, tr.stream, tr.agitation, rules_text, config_text);
    let mut w = TraceWriter::new(Vec::new(), &header).expect("writing to memory");
    for r in &tr.records {
        w.record(rules, r.time, &r.event).expect("writing to memory");
    }
    let bytes = w.finish(tr.summary).expect("writing to memory");
    String::from_utf8(bytes).expect("trace text is ASCII")
}

type Fields<'a> = Vec<(&'a str, &'a str, usize)>;

/// Split `k=v` tokens, keeping 1-based columns.
fn fields(line_no: usize, line: &str) -> Result<Fields<'_>, ParseError> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if !tok.is_empty() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| ParseError::new(line_no, col, format!("expected key=value, found `{tok}`")))?;
            out.push((k, v, col));
        }
        col += tok.len() + 1;
    }
    Ok(out)
}

fn expect_keys(line_no: usize, f: &Fields<'_>, keys: &[&str]) -> Result<(), ParseError> {
    for (i, want) in keys.iter().enumerate() {
        match f.get(i) {
            Some((k, _, _)) if k == want => {}
            Some((k, _, col)) => return Err(ParseError::new(line_no, *col, format!("expected `{want}`, found `{k}`"))),
            None => return Err(ParseError::new(line_no, 1, format!("missing `{want}`"))),
        }
    }
    if let Some((k, _, col)) = f.get(keys.len()) {
        return Err(ParseError::new(line_no, *col, format!("unexpected key `{k}`")));
    }
    Ok(())
}

fn num<T: std::str::FromStr>(line_no: usize, (_, v, col): (&str, &str, usize)) -> Result<T, ParseError> {
    v.parse().map_err(|_| ParseError::new(line_no, col, format!("invalid number `{v}`")))
}

fn point(line_no: usize, (_, v, col): (&str, &str, usize)) -> Result<GridPoint, ParseError> {
    let bad = || ParseError::new(line_no, col, format!("expected x,y, found `{v}`"));
    let (x, y) = v.split_once(',').ok_or_else(bad)?;
    Ok(GridPoint::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
}

fn parse_record(no: usize, line: &str) -> Result<TraceRecord, ParseError> {
    let f = fields(no, line)?;
    expect_keys(no, &f, &["t", "kind", "rule", "p1", "p2", "arm"])?;
    let time: f64 = num(no, f[0])?;
    let arm = match f[5].1 {
        "-" => None,
        "1" => Some(Arm::First),
        "2" => Some(Arm::Second),
        v => return Err(ParseError::new(no, f[5].2, format!("invalid arm `{v}`"))),
    };
    let kind = match (f[1].1, arm) {
        ("nonmove", None) => EventKind::NonMovement,
        ("move", Some(a)) => EventKind::Movement(a),
        ("agit", None) => EventKind::Agitation,
        (k, _) => return Err(ParseError::new(no, f[1].2, format!("invalid kind `{k}` for arm `{}`", f[5].1))),
    };
    let rule = match (f[2].1, kind) {
        ("-", EventKind::Agitation) => None,
        (r, EventKind::NonMovement | EventKind::Movement(_)) if r != "-" => Some(r.to_string()),
        (r, _) => return Err(ParseError::new(no, f[2].2, format!("rule `{r}` does not fit kind `{}`", f[1].1))),
    };
    let p1 = point(no, f[3])?;
    let p2 = point(no, f[4])?;
    if Direction::from_offset(p2 - p1).is_none() {
        return Err(ParseError::new(no, f[4].2, "p2 is not adjacent to p1"));
    }
    Ok(TraceRecord { time, kind, rule, p1, p2 })
}

/// Parse a `nubot-trace v1` document.
pub fn read_trace(src: &str) -> Result<Trace, ParseError> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == TRACE_HEADER => {}
        Some((no, _)) => return Err(ParseError::new(no, 1, format!("expected header `{TRACE_HEADER}`"))),
        None => return Err(ParseError::new(1, 1, format!("missing header `{TRACE_HEADER}`"))),
    }
    let (no, l) = lines.next().ok_or_else(|| ParseError::new(2, 1, "missing run parameters"))?;
    let f = fields(no, l)?;
    expect_keys(no, &f, &["seed", "stream", "agitation", "rng", "rules", "config"])?;
    let agitation = match f[2].1 {
        "0" => false,
        "1" => true,
        v => return Err(ParseError::new(no, f[2].2, format!("agitation must be 0 or 1, found `{v}`"))),
    };
    let header = TraceHeader {
        seed: num(no, f[0])?,
        stream: num(no, f[1])?,
        agitation,
        rng: f[3].1.to_string(),
        rules_hash: f[4].1.to_string(),
        config_hash: f[5].1.to_string(),
    };
    let mut records = Vec::new();
    let mut end = None;
    for (no, l) in lines {
        if end.is_some() {
            return Err(ParseError::new(no, 1, "content after the end line"));
        }
        if let Some(rest) = l.strip_prefix("end ") {
            let f = fields(no, rest)?;
            expect_keys(no, &f, &["events", "time", "stop"])?;
            let stop = match f[2].1 {
                "terminal" => StopReason::Terminal,
                "event-limit" => StopReason::EventLimit,
                "time-limit" => StopReason::TimeLimit,
                v => return Err(ParseError::new(no, f[2].2 + 4, format!("invalid stop reason `{v}`"))),
            };
            end = Some(TraceEnd {
                events: num(no, f[0])?,
                time: num(no, f[1])?,
                stop,
            });
        } else {
            records.push(parse_record(no, l)?);
        }
    }
    Ok(Trace { header, records, end })
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("record {index} does not name an applicable event: {line}")]
    NotApplicable { index: usize, line: String },
    #[error("record {index} has time {time}, not after the previous record")]
    TimeOrder { index: usize, time: f64 },
}

/// Replay `trace` from `initial`, calling `observe` with the configuration
/// after every record. Each record must name an event applicable at that
/// point; the event is applied through the same code path as simulation.
pub fn replay_observed<F>(
    initial: &Configuration,
    rules: &RuleSet,
    trace: &Trace,
    mut observe: F,
) -> Result<Configuration, ReplayError>
where
    F: FnMut(usize, &Configuration, &TraceRecord),
{
    let mut c = initial.clone();
    let mut last = 0.0;
    for (index, rec) in trace.records.iter().enumerate() {
        if rec.time <= last && index > 0 {
            return Err(ReplayError::TimeOrder { index, time: rec.time });
        }
        last = rec.time;
        let events = enumerate_applicable(&c, rules, trace.header.agitation);
        let e = events
            .iter()
            .find(|e| rec.matches(rules, e))
            .ok_or_else(|| ReplayError::NotApplicable {
                index,
                line: rec.to_line(),
            })?;
        apply_event(&mut c, rules, e).expect("enumerated events are applicable");
        observe(index, &c, rec);
    }
    Ok(c)
}

/// Replay a whole trace and return the final configuration.
pub fn replay(initial: &Configuration, rules: &RuleSet, trace: &Trace) -> Result<Configuration, ReplayError> {
    replay_observed(initial, rules, trace, |_, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::{run, Limits};
    use crate::programs;

    #[test]
    fn trace_round_trip_and_replay() {
        let p = programs::gen_simple_line(3).unwrap();
        let tr = run(&p.initial, &p.rules, 5, 0, Limits::default(), true);
        let text = write_trajectory(&tr, &p.rules, &p.rules.to_text(), &p.initial.to_text());
        let parsed = read_trace(&text).unwrap();
        assert_eq!(parsed.records.len(), tr.records.len());
        assert_eq!(parsed.end.unwrap().time.to_bits(), tr.summary.time.to_bits());
        for (a, b) in parsed.records.iter().zip(&tr.records) {
            assert_eq!(a.time.to_bits(), b.time.to_bits());
        }
        assert_eq!(replay(&p.initial, &p.rules, &parsed).unwrap(), tr.terminal);
        let rewritten = {
            let mut w = TraceWriter::new(Vec::new(), &parsed.header).unwrap();
            for r in &parsed.records {
                writeln!(w.out, "{}", r.to_line()).unwrap();
            }
            String::from_utf8(w.finish(tr.summary).unwrap()).unwrap()
        };
        assert_eq!(rewritten, text);
    }

    #[test]
    fn bad_records_are_located() {
        let head = "nubot-trace v1\nseed=1 stream=0 agitation=0 rng=chacha8 rules=a config=b\n";
        let e = read_trace(&format!("{head}t=1 kind=move rule=1 p1=0,0 p2=1,0 arm=-\n")).unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        let e = read_trace(&format!("{head}t=1 kind=nonmove rule=1 p1=0,0 p2=2,0 arm=-\n")).unwrap_err();
        assert_eq!((e.line, e.column), (3, 32));
        let e = read_trace("nubot-trace v2\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn replay_rejects_inapplicable_records() {
        let p = programs::gen_simple_line(2).unwrap();
        let head = "nubot-trace v1\nseed=1 stream=0 agitation=0 rng=chacha8 rules=a config=b\n";
        let t = read_trace(&format!("{head}t=1 kind=nonmove rule=1 p1=5,5 p2=6,5 arm=-\n")).unwrap();
        assert!(matches!(replay(&p.initial, &p.rules, &t), Err(ReplayError::NotApplicable { index: 0, .. })));
    }
}

//! Operation traces: parsing, seeded generation and replay against the
//! dynamic locator, optionally in lockstep with the oracle.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamic_locate::{DynLocator, DynStats, EdgeHandle, FaceName, Period};
use crate::gen::{sample_free, SegmentShape};
use crate::geom::{parse_point, Point, Segment};
use crate::oracle::Oracle;
use crate::subdivision::{FaceId, Location};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOp {
    Insert(Segment),
    /// Delete the edge of the k-th successful insert (0-based).
    Delete(usize),
    Locate(Point),
    SameFace(Point, Point),
    Rebuild,
}

impl fmt::Display for TraceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceOp::Insert(s) => write!(f, "I {} {} {} {}", s.a.x, s.a.y, s.b.x, s.b.y),
            TraceOp::Delete(k) => write!(f, "D {k}"),
            TraceOp::Locate(p) => write!(f, "Q {} {}", p.x, p.y),
            TraceOp::SameFace(p, q) => write!(f, "S {} {} {} {}", p.x, p.y, q.x, q.y),
            TraceOp::Rebuild => write!(f, "R"),
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("op {op}: {msg}")]
    Rejected { op: usize, msg: String },
    #[error("op {op}: divergence from oracle: {msg}")]
    Divergence { op: usize, msg: String },
}

fn points(line: usize, args: &[&str]) -> Result<Vec<Point>, TraceError> {
    args.chunks(2)
        .map(|xy| parse_point(xy[0], xy[1]).map_err(|e| TraceError::Parse { line, msg: e.to_string() }))
        .collect()
}

/// Parse one op per line; blank lines and `#` comments are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<TraceOp>, TraceError> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let arity = |n: usize| {
            if words.len() == n + 1 {
                Ok(())
            } else {
                Err(TraceError::Parse { line, msg: format!("`{}` takes {n} arguments", words[0]) })
            }
        };
        let op = match words[0] {
            "I" => {
                arity(4)?;
                let p = points(line, &words[1..])?;
                let s = Segment::new(p[0].clone(), p[1].clone())
                    .map_err(|e| TraceError::Parse { line, msg: e.to_string() })?;
                TraceOp::Insert(s)
            }
            "D" => {
                arity(1)?;
                let k = words[1]
                    .parse()
                    .map_err(|_| TraceError::Parse { line, msg: format!("bad index `{}`", words[1]) })?;
                TraceOp::Delete(k)
            }
            "Q" => {
                arity(2)?;
                TraceOp::Locate(points(line, &words[1..])?.remove(0))
            }
            "S" => {
                arity(4)?;
                let mut p = points(line, &words[1..])?;
                let q = p.pop().unwrap();
                TraceOp::SameFace(p.pop().unwrap(), q)
            }
            "R" => {
                arity(0)?;
                TraceOp::Rebuild
            }
            other => return Err(TraceError::Parse { line, msg: format!("unknown op `{other}`") }),
        };
        ops.push(op);
    }
    Ok(ops)
}

pub fn format_trace(ops: &[TraceOp]) -> String {
    ops.iter().map(|op| format!("{op}\n")).collect()
}

/// Percentages of inserts, deletes and queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mix {
    pub insert: u32,
    pub delete: u32,
    pub query: u32,
}

impl Default for Mix {
    fn default() -> Self {
        Mix { insert: 40, delete: 20, query: 40 }
    }
}

impl std::str::FromStr for Mix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad mix component `{p}`")))
            .collect::<Result<_, _>>()?;
        let [insert, delete, query] = parts[..] else {
            return Err("mix must be i:d:q".into());
        };
        if insert + delete + query != 100 {
            return Err(format!("mix {s} does not sum to 100"));
        }
        Ok(Mix { insert, delete, query })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub n_ops: usize,
    pub mix: Mix,
    pub shape: SegmentShape,
}

impl GenConfig {
    pub fn new(seed: u64, n_ops: usize) -> Self {
        GenConfig { seed, n_ops, mix: Mix::default(), shape: SegmentShape::default() }
    }
}

fn free_point<R: Rng>(rng: &mut R, range: i64, live: &[(usize, Segment)]) -> Point {
    loop {
        let p = Point::new(rng.gen_range(0..=range), rng.gen_range(0..=range));
        if !live.iter().any(|(_, s)| s.contains_closed(&p)) {
            return p;
        }
    }
}

/// Deterministic random trace. Inserts never interact with live edges;
/// deletes pick a uniform live edge; queries avoid the edges.
pub fn gen_trace(cfg: &GenConfig) -> Vec<TraceOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut live: Vec<(usize, Segment)> = Vec::new();
    let mut inserted = 0usize;
    let mut ops = Vec::with_capacity(cfg.n_ops);
    while ops.len() < cfg.n_ops {
        let roll = rng.gen_range(0..100);
        if roll < cfg.mix.insert || (roll < cfg.mix.insert + cfg.mix.delete && live.is_empty()) {
            let segs: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
            let verts: Vec<Point> = segs.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
            if let Some(s) = sample_free(&mut rng, &cfg.shape, &segs, &verts, 256) {
                live.push((inserted, s.clone()));
                inserted += 1;
                ops.push(TraceOp::Insert(s));
            }
        } else if roll < cfg.mix.insert + cfg.mix.delete {
            let (k, _) = live.swap_remove(rng.gen_range(0..live.len()));
            ops.push(TraceOp::Delete(k));
        } else {
            let p = free_point(&mut rng, cfg.shape.range, &live);
            if rng.gen_bool(0.5) {
                ops.push(TraceOp::Locate(p));
            } else {
                let q = free_point(&mut rng, cfg.shape.range, &live);
                ops.push(TraceOp::SameFace(p, q));
            }
        }
    }
    ops
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    /// Run the oracle in lockstep and fail on the first divergence.
    pub check: bool,
    pub strict: bool,
    pub period: Period,
    pub seed: u64,
    /// Collect per-op timing records.
    pub bench: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { check: false, strict: false, period: Period::Auto, seed: 0, bench: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub op_index: usize,
    pub n: usize,
    pub kind: &'static str,
    pub micros: u128,
    pub promotions: u64,
    pub queue_ops: u64,
    pub shoot_calls: u64,
}

pub const BENCH_HEADER: &str = "op_index,n,kind,micros,promotions,queue_ops,shoot_calls";

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{},{}",
            self.op_index, self.n, self.kind, self.micros, self.promotions, self.queue_ops, self.shoot_calls
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    /// One line per query op.
    pub lines: Vec<String>,
    pub bench: Vec<BenchRecord>,
    pub stats: DynStats,
}

impl Report {
    pub fn text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Lockstep checker for `Q` names: within one epoch, names and oracle
/// faces must correspond one to one.
#[derive(Default)]
struct NameCheck {
    epoch: u64,
    to_oracle: HashMap<FaceName, FaceId>,
    from_oracle: HashMap<FaceId, FaceName>,
}

impl NameCheck {
    fn check(&mut self, name: FaceName, face: FaceId) -> Result<(), String> {
        if name.epoch != self.epoch {
            self.epoch = name.epoch;
            self.to_oracle.clear();
            self.from_oracle.clear();
        }
        let a = *self.to_oracle.entry(name).or_insert(face);
        let b = *self.from_oracle.entry(face).or_insert(name);
        if a != face || b != name {
            return Err(format!("name {name} is not consistent with oracle face {face}"));
        }
        Ok(())
    }
}

/// Replay `ops` on a fresh locator.
pub fn run_trace(ops: &[TraceOp], cfg: &RunConfig) -> Result<Report, TraceError> {
    let mut loc = DynLocator::with_options(cfg.period, cfg.seed, cfg.strict);
    let mut oracle = cfg.check.then(Oracle::new);
    let mut handles: Vec<Option<EdgeHandle>> = Vec::new();
    let mut names = NameCheck::default();
    let mut report = Report::default();
    for (op_index, op) in ops.iter().enumerate() {
        let rejected = |msg: String| TraceError::Rejected { op: op_index, msg };
        let diverged = |msg: String| TraceError::Divergence { op: op_index, msg };
        let start = Instant::now();
        let kind = match op {
            TraceOp::Insert(s) => {
                if let Some(o) = oracle.as_mut() {
                    o.insert(s.clone()).map_err(|e| rejected(e.to_string()))?;
                }
                let h = loc.insert(s.clone()).map_err(|e| rejected(e.to_string()))?;
                handles.push(Some(h));
                "insert"
            }
            TraceOp::Delete(k) => {
                let h = handles
                    .get_mut(*k)
                    .and_then(Option::take)
                    .ok_or_else(|| rejected(format!("no live edge from insert {k}")))?;
                loc.delete(h).map_err(|e| rejected(e.to_string()))?;
                if let Some(o) = oracle.as_mut() {
                    o.delete(*k).map_err(|e| rejected(e.to_string()))?;
                }
                "delete"
            }
            TraceOp::Rebuild => {
                loc.rebuild();
                "rebuild"
            }
            TraceOp::Locate(p) => {
                let got = loc.locate(p);
                report.lines.push(match &got {
                    Location::Face(name) => format!("face {name}"),
                    _ => "onboundary".to_string(),
                });
                if let Some(o) = oracle.as_mut() {
                    match (got, o.locate(p)) {
                        (Location::Face(name), Location::Face(face)) => names.check(name, face).map_err(diverged)?,
                        (a, b) if a.is_boundary() && b.is_boundary() => {}
                        (a, b) => return Err(diverged(format!("locate {p:?}: got {a:?}, oracle {b:?}"))),
                    }
                }
                "locate"
            }
            TraceOp::SameFace(p, q) => {
                let got = loc.same_face(p, q).ok();
                report.lines.push(
                    match got {
                        Some(true) => "same",
                        Some(false) => "diff",
                        None => "onboundary",
                    }
                    .to_string(),
                );
                if let Some(o) = oracle.as_mut() {
                    let want = o.same_face(p, q).ok();
                    if got != want {
                        return Err(diverged(format!("same_face {p:?} {q:?}: got {got:?}, oracle {want:?}")));
                    }
                }
                "same_face"
            }
        };
        if cfg.bench {
            let micros = start.elapsed().as_micros();
            let st = loc.stats();
            report.bench.push(BenchRecord {
                op_index,
                n: loc.len(),
                kind,
                micros,
                promotions: st.promotions,
                queue_ops: st.queue_ops,
                shoot_calls: st.shoot_calls,
            });
        }
    }
    report.stats = loc.stats();
    Ok(report)
}

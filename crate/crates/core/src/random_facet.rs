//! Random Facet sink finding and a seeded trial harness.
//!
//! The algorithm is the usual recursive one: in a face containing the
//! current vertex, pick a spanning dimension uniformly at random, find the
//! sink of the facet containing the vertex, and if that sink still has its
//! edge in the chosen dimension outgoing, cross it and solve the opposite
//! facet. Cost is the number of distinct vertices whose outmap was queried.
//!
//! Trial `i` of a run with seed `s` draws from a ChaCha8 generator seeded
//! with `s` on stream `i`, so trials are independent of scheduling and of
//! each other.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{global_sink, DimSet, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::matousek::{build_matousek, InfluenceGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RfResult {
    pub sink: Vertex,
    /// Distinct vertices whose outmap was queried.
    pub evaluations: u64,
    pub recursion_depth: usize,
}

struct Search<'a, R> {
    o: &'a Orientation,
    rng: R,
    seen: Vec<u64>,
    evaluations: u64,
    steps: u64,
    step_limit: u64,
    depth: usize,
}

impl<R: Rng> Search<'_, R> {
    fn eval(&mut self, v: Vertex) -> DimSet {
        let (word, b) = (v.index() / 64, v.index() % 64);
        if self.seen[word] >> b & 1 == 0 {
            self.seen[word] |= 1 << b;
            self.evaluations += 1;
        }
        self.o.outmap(v)
    }

    fn solve(&mut self, span: DimSet, v: Vertex, depth: usize) -> Result<Vertex> {
        self.steps += 1;
        if self.steps > self.step_limit {
            return Err(Error::StepLimit(self.step_limit));
        }
        self.depth = self.depth.max(depth);
        if span.is_empty() {
            return Ok(v);
        }
        let k = self.rng.random_range(0..span.len());
        let d = span.dims().nth(k).expect("index below span size");
        let facet = span.toggled(d);
        let w = self.solve(facet, v, depth + 1)?;
        if !self.eval(w).contains(d) {
            return Ok(w);
        }
        self.solve(facet, w.toggled(d), depth + 1)
    }
}

/// Runs Random Facet from `start` with the given generator.
///
/// `o` must be a USO; this is not re-checked.
pub fn random_facet_with_rng<R: Rng>(o: &Orientation, start: Vertex, rng: R) -> Result<RfResult> {
    let n = o.n();
    if !start.fits(n) {
        return Err(Error::BitsOutOfRange { bits: start.bits(), n });
    }
    let mut search = Search {
        o,
        rng,
        seen: vec![0; (1usize << n).div_ceil(64)],
        evaluations: 0,
        steps: 0,
        step_limit: 1u64 << (2 * n),
        depth: 0,
    };
    let sink = search.solve(o.full(), start, 1)?;
    // the sink's own outmap certifies the answer
    search.eval(sink);
    Ok(RfResult {
        sink,
        evaluations: search.evaluations,
        recursion_depth: search.depth,
    })
}

pub fn random_facet(o: &Orientation, start: Vertex, seed: u64) -> Result<RfResult> {
    random_facet_with_rng(o, start, ChaCha8Rng::seed_from_u64(seed))
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Influence-graph families for benchmarking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// No edges: the uniform orientation.
    Loops,
    /// Closure of the path `1 -> 2 -> ... -> n`: every `(i, j)` with `i < j`.
    Path,
    /// Dimension 1 influences every other dimension.
    Star,
    /// The path closure without the edges `(i, i + 2)`; not realizable for
    /// `n >= 3`.
    BrokenChain,
}

impl Family {
    pub const NAMES: [&'static str; 4] = ["loops", "path", "star", "broken-chain"];

    pub fn name(self) -> &'static str {
        match self {
            Family::Loops => "loops",
            Family::Path => "path",
            Family::Star => "star",
            Family::BrokenChain => "broken-chain",
        }
    }

    pub fn all() -> [Family; 4] {
        [Family::Loops, Family::Path, Family::Star, Family::BrokenChain]
    }

    pub fn graph(self, n: usize) -> Result<InfluenceGraph> {
        let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        let edges: Vec<(usize, usize)> = match self {
            Family::Loops => Vec::new(),
            Family::Path => pairs.collect(),
            Family::Star => (2..=n).map(|j| (1, j)).collect(),
            Family::BrokenChain => pairs.filter(|&(i, j)| j != i + 2).collect(),
        };
        InfluenceGraph::new(n, edges)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::all()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub family: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub stddev: f64,
    pub min: u64,
    pub max: u64,
    /// Trials whose answer matched the brute-force sink.
    pub correct: u64,
}

/// Runs `trials` Random Facet searches on one orientation, each from the
/// antipode of the sink.
pub fn run_orientation_trials(
    label: &str,
    o: &Orientation,
    trials: u64,
    seed: u64,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let sink = global_sink(o)?;
    let start = sink ^ o.full();
    let results = (0..trials)
        .into_par_iter()
        .map(|t| random_facet_with_rng(o, start, trial_rng(seed, t)))
        .collect::<Result<Vec<_>>>()?;

    let evals: Vec<u64> = results.iter().map(|r| r.evaluations).collect();
    let count = evals.len() as f64;
    let mean = evals.iter().map(|&e| e as f64).sum::<f64>() / count;
    let var = evals.iter().map(|&e| (e as f64 - mean).powi(2)).sum::<f64>() / count;
    Ok(TrialStats {
        family: label.to_string(),
        n: o.n(),
        trials,
        seed,
        mean,
        stddev: var.sqrt(),
        min: *evals.iter().min().expect("trials >= 1"),
        max: *evals.iter().max().expect("trials >= 1"),
        correct: results.iter().filter(|r| r.sink == sink).count() as u64,
    })
}

/// Builds the family's Matoušek USO for every `n` and runs the trials.
pub fn run_trials(family: Family, ns: &[usize], trials: u64, seed: u64) -> Result<Vec<TrialStats>> {
    ns.iter()
        .map(|&n| {
            let o = build_matousek(&family.graph(n)?);
            run_orientation_trials(family.name(), &o, trials, seed)
        })
        .collect()
}

pub const CSV_HEADER: &str = "family,n,trials,seed,mean,stddev,min,max";

pub fn stats_to_csv(stats: &[TrialStats]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for t in stats {
        s.push_str(&format!(
            "{},{},{},{},{:.4},{:.4},{},{}\n",
            t.family, t.n, t.trials, t.seed, t.mean, t.stddev, t.min, t.max
        ));
    }
    s
}

//! Realizability of Matoušek USOs.
//!
//! A Matoušek USO is realizable exactly when its influence graph is the
//! transitive closure of a branching, or equivalently when it has no induced
//! subgraph of one of two forbidden shapes on three vertices:
//!
//! * `G1`: `x -> y -> z` without `x -> z`;
//! * `G2`: `y -> x <- z` with `y` and `z` not adjacent.
//!
//! Realizable graphs are turned into a cyclic P-matroid extension by nesting
//! the complementary pairs of the branching like parentheses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, DimSet, Face, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::matousek::InfluenceGraph;
use crate::matroid::CyclicExtension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ForbiddenKind {
    G1,
    G2,
}

/// Three influence-graph vertices inducing a forbidden subgraph.
///
/// For `G1` the edges are `(x, y)` and `(y, z)`; for `G2` they are `(y, x)`
/// and `(z, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForbiddenWitness {
    pub kind: ForbiddenKind,
    pub vertices: [usize; 3],
}

impl ForbiddenWitness {
    pub fn dims(&self) -> DimSet {
        DimSet::from_dims(self.vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

impl fmt::Display for ForbiddenWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.vertices;
        write!(f, "{:?} at {x},{y},{z}", self.kind)
    }
}

/// Lexicographically smallest induced `G1`, or failing that `G2`.
pub fn find_forbidden(g: &InfluenceGraph) -> Option<ForbiddenWitness> {
    let n = g.n();
    for x in 1..=n {
        for y in 1..=n {
            if !g.has_edge(x, y) {
                continue;
            }
            for z in 1..=n {
                if z != x && g.has_edge(y, z) && !g.has_edge(x, z) {
                    return Some(ForbiddenWitness {
                        kind: ForbiddenKind::G1,
                        vertices: [x, y, z],
                    });
                }
            }
        }
    }
    for x in 1..=n {
        let parents: Vec<usize> = g.in_neighbors(x).dims().collect();
        for (i, &y) in parents.iter().enumerate() {
            for &z in &parents[i + 1..] {
                if !g.has_edge(y, z) && !g.has_edge(z, y) {
                    return Some(ForbiddenWitness {
                        kind: ForbiddenKind::G2,
                        vertices: [x, y, z],
                    });
                }
            }
        }
    }
    None
}

/// A forest of arborescences on `[n]`, given by parent links.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Branching {
    parent: Vec<Option<usize>>,
}

impl Branching {
    /// `parent[d - 1]` is the parent of `d`, `None` for roots.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        check_dim(n)?;
        for (i, p) in parent.iter().enumerate() {
            match *p {
                Some(p) if p == 0 || p > n => return Err(Error::BadDimension { dim: p, n }),
                Some(p) if p == i + 1 => return Err(Error::CyclicBranching),
                _ => {}
            }
        }
        let b = Branching { parent };
        for d in 1..=n {
            let mut cur = d;
            for _ in 0..=n {
                match b.parent(cur) {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            if b.parent(cur).is_some() {
                return Err(Error::CyclicBranching);
            }
        }
        Ok(b)
    }

    pub fn roots_only(n: usize) -> Result<Self> {
        Branching::new(vec![None; n])
    }

    /// The path `1 -> 2 -> ... -> n`.
    pub fn path(n: usize) -> Result<Self> {
        Branching::new((0..n).map(|i| if i == 0 { None } else { Some(i) }).collect())
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, d: usize) -> Option<usize> {
        self.parent[d - 1]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n()).filter(|&d| self.parent(d).is_none())
    }

    /// Children of `d` in increasing label order.
    pub fn children(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n()).filter(move |&c| self.parent(c) == Some(d))
    }

    pub fn ancestors(&self, d: usize) -> DimSet {
        let mut set = DimSet::EMPTY;
        let mut cur = self.parent(d);
        while let Some(p) = cur {
            set = set | DimSet::single(p);
            cur = self.parent(p);
        }
        set
    }

    /// Every vertex points at all of its descendants.
    pub fn transitive_closure(&self) -> InfluenceGraph {
        let n = self.n();
        let edges = (1..=n).flat_map(|d| self.ancestors(d).dims().map(move |a| (a, d)));
        InfluenceGraph::new(n, edges.collect::<Vec<_>>()).expect("branching closure is acyclic")
    }

    /// Vertex sets of all directed paths that start at a root and follow
    /// parent-child links, including single roots.
    pub fn root_paths(&self) -> Vec<DimSet> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, DimSet)> = self
            .roots()
            .map(|r| (r, DimSet::single(r)))
            .collect();
        while let Some((end, set)) = stack.pop() {
            out.push(set);
            for c in self.children(end) {
                stack.push((c, set | DimSet::single(c)));
            }
        }
        out.sort();
        out
    }

    /// All `(n + 1)^(n - 1)` labeled branchings on `[n]`, for `n <= 7`.
    pub fn enumerate(n: usize) -> Result<Vec<Branching>> {
        check_dim(n)?;
        if n > 7 {
            return Err(Error::DimensionOutOfRange(n));
        }
        let mut out = Vec::new();
        // parent choice 0 encodes "root"
        let mut choice = vec![0usize; n];
        loop {
            let parent = choice
                .iter()
                .map(|&c| if c == 0 { None } else { Some(c) })
                .collect();
            if let Ok(b) = Branching::new(parent) {
                out.push(b);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(out);
                }
                choice[i] += 1;
                if choice[i] <= n {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Debug for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(usize, usize)> = (1..=self.n())
            .filter_map(|d| self.parent(d).map(|p| (p, d)))
            .collect();
        write!(f, "Branching(n={}, {:?})", self.n(), edges)
    }
}

/// The branching whose transitive closure is `g`, if there is one.
///
/// `g` qualifies when it is transitive and the in-neighbours of every vertex
/// are totally ordered; the parent of a vertex is then its deepest
/// in-neighbour.
pub fn is_branching_closure(g: &InfluenceGraph) -> Option<Branching> {
    if !g.is_transitive() {
        return None;
    }
    let n = g.n();
    let mut parent = vec![None; n];
    for x in 1..=n {
        let preds = g.in_neighbors(x);
        for y in preds.dims() {
            for z in preds.dims().filter(|&z| z > y) {
                if !g.has_edge(y, z) && !g.has_edge(z, y) {
                    return None;
                }
            }
        }
        // the deepest predecessor is the one all the others point to
        parent[x - 1] = preds
            .dims()
            .find(|&p| (preds ^ DimSet::single(p)).is_subset(g.in_neighbors(p)));
    }
    Some(Branching::new(parent).expect("parents of an acyclic graph"))
}

/// Whether the 3-dimensional face `f` has three source-to-sink paths that
/// share no vertex except their endpoints.
///
/// Decided by enumerating every simple directed path in the 8-vertex face.
pub fn holt_klee_3face(o: &Orientation, f: Face) -> Result<bool> {
    let span = f.spanning();
    if span.len() != 3 {
        return Err(Error::FaceDimension(span.len()));
    }
    if !(f.fixed() | span).fits(o.n()) {
        return Err(Error::BitsOutOfRange {
            bits: (f.fixed() | span).bits(),
            n: o.n(),
        });
    }
    let verts: Vec<Vertex> = f.vertices().collect();
    let local = |v: Vertex| verts.iter().position(|&w| w == v).expect("vertex in face");
    let out = |v: Vertex| o.outmap(v) & span;

    let sources: Vec<Vertex> = verts.iter().copied().filter(|&v| out(v) == span).collect();
    let sinks: Vec<Vertex> = verts.iter().copied().filter(|&v| out(v).is_empty()).collect();
    let (&[source], &[sink]) = (sources.as_slice(), sinks.as_slice()) else {
        return Err(Error::FaceNotUnique);
    };

    // interiors of all simple paths, as bitmasks over local vertex indices
    let mut interiors: Vec<u8> = Vec::new();
    let mut stack = vec![(source, 1u8 << local(source))];
    while let Some((v, visited)) = stack.pop() {
        for d in out(v).dims() {
            let w = v.toggled(d);
            let bit = 1u8 << local(w);
            if w == sink {
                interiors.push(visited & !(1u8 << local(source)));
            } else if visited & bit == 0 {
                stack.push((w, visited | bit));
            }
        }
    }
    for (i, &a) in interiors.iter().enumerate() {
        for (j, &b) in interiors.iter().enumerate().skip(i + 1) {
            if a & b != 0 {
                continue;
            }
            if interiors[j + 1..].iter().any(|&c| c & (a | b) == 0) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Builds the ordering and sign set of a simple cyclic P-matroid extension
/// whose nesting graph is the transitive closure of `b`, with `q` last.
///
/// Each vertex `i` becomes the pair `i ... i+n`, enclosing the pairs of its
/// descendants; sibling subtrees appear in increasing root label order. For
/// pairs with an even half-gap the closing element `i+n` is flipped.
pub fn synthesize_extension(b: &Branching) -> CyclicExtension {
    let n = b.n();
    let mut order = Vec::with_capacity(2 * n + 1);
    fn emit(b: &Branching, d: usize, order: &mut Vec<usize>) {
        order.push(d);
        for c in b.children(d) {
            emit(b, c, order);
        }
        order.push(d + b.n());
    }
    for r in b.roots() {
        emit(b, r, &mut order);
    }
    order.push(2 * n + 1);

    let pos = |e: usize| order.iter().position(|&x| x == e).expect("element placed");
    let flipped: Vec<usize> = (1..=n)
        .filter(|&i| ((pos(i + n) - pos(i) - 1) / 2) % 2 == 0)
        .map(|i| i + n)
        .collect();
    CyclicExtension::new(n, order, flipped).expect("synthesized order is a bijection")
}

//! Dimension influence graphs and the Matoušek USOs they generate.
//!
//! A dimension influence graph on `[n]` carries an implicit loop at every
//! vertex and is otherwise acyclic. Walking along an edge of dimension `d`
//! toggles the outmap in exactly the out-neighbours of `d` (including `d`).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cube::{
    apply_isomorphism, check_dim, global_sink, require_orientation, DimSet, Isomorphism,
    Orientation, Vertex,
};
use crate::error::{Error, Result};

/// Loop-augmented DAG on `[n]`. Row `d` holds the out-neighbours of `d`,
/// always including `d` itself.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct InfluenceGraph {
    n: usize,
    rows: Vec<DimSet>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphJson> for InfluenceGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        InfluenceGraph::new(j.n, j.edges)
    }
}

impl From<InfluenceGraph> for GraphJson {
    fn from(g: InfluenceGraph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().collect(),
        }
    }
}

impl InfluenceGraph {
    /// Builds a graph from its non-loop edges. Self edges and cycles are rejected.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        check_dim(n)?;
        let mut rows: Vec<DimSet> = (1..=n).map(DimSet::single).collect();
        for (from, to) in edges {
            for d in [from, to] {
                if d == 0 || d > n {
                    return Err(Error::BadDimension { dim: d, n });
                }
            }
            if from == to {
                return Err(Error::SelfEdge(from));
            }
            rows[from - 1] = rows[from - 1] | DimSet::single(to);
        }
        InfluenceGraph::from_rows(n, rows)
    }

    /// Builds a graph from flip rows; the loop bit of every row must be set.
    pub fn from_rows(n: usize, rows: Vec<DimSet>) -> Result<Self> {
        check_dim(n)?;
        if rows.len() != n {
            return Err(Error::Shape(format!("{} rows for {n} dimensions", rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            if !row.fits(n) {
                return Err(Error::BitsOutOfRange { bits: row.bits(), n });
            }
            if !row.contains(i + 1) {
                return Err(Error::NotMatousekType(i + 1));
            }
        }
        if !rows_acyclic(&rows) {
            return Err(Error::CyclicInfluence);
        }
        Ok(InfluenceGraph { n, rows })
    }

    /// The graph with only loops; it generates the uniform orientation.
    pub fn loops_only(n: usize) -> Result<Self> {
        InfluenceGraph::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Out-neighbours of `d`, including `d`.
    pub fn row(&self, d: usize) -> DimSet {
        self.rows[d - 1]
    }

    pub fn rows(&self) -> &[DimSet] {
        &self.rows
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from != to && self.rows[from - 1].contains(to)
    }

    /// Non-loop edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |d| {
            self.row(d)
                .dims()
                .filter(move |&e| e != d)
                .map(move |e| (d, e))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len() - 1).sum()
    }

    /// In-neighbours of `d`, excluding `d`.
    pub fn in_neighbors(&self, d: usize) -> DimSet {
        DimSet::from_dims((1..=self.n).filter(|&p| self.has_edge(p, d)))
    }

    pub fn is_transitive(&self) -> bool {
        (1..=self.n).all(|a| {
            self.row(a)
                .dims()
                .all(|b| self.row(b).is_subset(self.row(a)))
        })
    }

    pub fn transitive_closure(&self) -> InfluenceGraph {
        let mut rows = self.rows.clone();
        // Floyd-Warshall on bitsets.
        for k in 0..self.n {
            for i in 0..self.n {
                if rows[i].contains(k + 1) {
                    rows[i] = rows[i] | rows[k];
                }
            }
        }
        InfluenceGraph { n: self.n, rows }
    }

    /// An edge `(a, b)` is transitive if some path `a -> c -> b` also exists.
    pub fn is_transitive_edge(&self, from: usize, to: usize) -> bool {
        self.has_edge(from, to)
            && self
                .row(from)
                .dims()
                .any(|c| c != from && c != to && self.has_edge(c, to))
    }

    /// Toggles `(s, t)` for every `s` in `rows` and every `t != s`.
    pub fn flip_rows(&self, rows: DimSet) -> Result<InfluenceGraph> {
        let full = DimSet::full(self.n);
        let mut flipped = self.rows.clone();
        for s in rows.dims() {
            flipped[s - 1] = flipped[s - 1] ^ (full ^ DimSet::single(s));
        }
        InfluenceGraph::from_rows(self.n, flipped)
    }

    /// Every labeled loop-augmented DAG on `[n]`, by brute force over edge sets.
    ///
    /// There are 1, 3, 25, 543, 29281 of them for `n = 1..=5`.
    pub fn enumerate_acyclic(n: usize) -> Result<Vec<InfluenceGraph>> {
        check_dim(n)?;
        if n > 6 {
            return Err(Error::DimensionOutOfRange(n));
        }
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| (1..=n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let mut rows: Vec<DimSet> = (1..=n).map(DimSet::single).collect();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    rows[a - 1] = rows[a - 1] | DimSet::single(b);
                }
            }
            if rows_acyclic(&rows) {
                out.push(InfluenceGraph { n, rows });
            }
        }
        Ok(out)
    }

    /// Graphviz rendering; loops are omitted and transitive edges are dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph influence {\n");
        for d in 1..=self.n {
            let _ = writeln!(s, "  {d};");
        }
        for (a, b) in self.edges() {
            if self.is_transitive_edge(a, b) {
                let _ = writeln!(s, "  {a} -> {b} [style=dashed];");
            } else {
                let _ = writeln!(s, "  {a} -> {b};");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

impl std::fmt::Debug for InfluenceGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "InfluenceGraph(n={}, {:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Repeatedly strips vertices with no incoming non-loop edge.
fn rows_acyclic(rows: &[DimSet]) -> bool {
    let n = rows.len();
    let mut remaining = DimSet::full(n);
    while !remaining.is_empty() {
        let mut has_in = DimSet::EMPTY;
        for d in remaining.dims() {
            has_in = has_in | (rows[d - 1] & remaining & !DimSet::single(d));
        }
        let sources = remaining & !has_in;
        if sources.is_empty() {
            return false;
        }
        remaining = remaining & !sources;
    }
    true
}

/// The Matoušek USO of `g`: `m(∅) = ∅` and `m(v ⊕ {d}) = m(v) ⊕ row(d)`.
pub fn build_matousek(g: &InfluenceGraph) -> Orientation {
    orientation_from_rows(g.n(), g.rows())
}

/// Fills the outmap table from `∅`, reaching each vertex across its lowest
/// dimension. The flip rule is linear, so every path agrees.
pub(crate) fn orientation_from_rows(n: usize, rows: &[DimSet]) -> Orientation {
    let mut outmaps = vec![DimSet::EMPTY; 1 << n];
    for v in 1usize..1 << n {
        let low = v.trailing_zeros() as usize;
        outmaps[v] = outmaps[v & (v - 1)] ^ rows[low];
    }
    Orientation::from_raw(n, outmaps)
}

/// Recovers the dimension influence graph of a Matoušek-type orientation.
pub fn extract_influence_graph(o: &Orientation) -> Result<InfluenceGraph> {
    require_orientation(o)?;
    let n = o.n();
    let mut rows = Vec::with_capacity(n);
    for d in 1..=n {
        let pattern = o.outmap(DimSet::EMPTY) ^ o.outmap(DimSet::single(d));
        let constant = o
            .vertices()
            .filter(|v| !v.contains(d))
            .all(|v| o.outmap(v) ^ o.outmap(v.toggled(d)) == pattern);
        if !constant {
            return Err(Error::NotMatousekType(d));
        }
        rows.push(pattern);
    }
    InfluenceGraph::from_rows(n, rows)
}

/// Mirrors a Matoušek-type USO so that its sink sits at `∅`.
pub fn canonicalize(o: &Orientation) -> Result<Orientation> {
    extract_influence_graph(o)?;
    let sink = global_sink(o)?;
    apply_isomorphism(o, &Isomorphism::mirror(o.n(), sink)?)
}

/// Reverses every edge lying inside the lower (`upper == false`) or upper
/// `d`-facet. Edges of dimension `d` keep their direction.
pub fn flip_facet(o: &Orientation, d: usize, upper: bool) -> Result<Orientation> {
    let n = o.n();
    if d == 0 || d > n {
        return Err(Error::BadDimension { dim: d, n });
    }
    let toggle = DimSet::full(n) ^ DimSet::single(d);
    let outmaps = o
        .vertices()
        .map(|v: Vertex| {
            if v.contains(d) == upper {
                o.outmap(v) ^ toggle
            } else {
                o.outmap(v)
            }
        })
        .collect();
    Ok(Orientation::from_raw(n, outmaps))
}

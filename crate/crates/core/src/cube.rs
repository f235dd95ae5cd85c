//! Hypercube vertices, orientations, faces and orientation isomorphisms.
//!
//! Dimensions are numbered `1..=n`. A subset of dimensions is stored as a
//! bitmask with dimension `d` at bit `d - 1`; the same representation is used
//! for vertices and for outmaps.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported cube dimension. Orientations are stored densely.
pub const MAX_DIM: usize = 20;

/// A subset of the dimensions `1..=n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DimSet(u32);

/// Vertices of the cube are subsets of `[n]`.
pub type Vertex = DimSet;

impl DimSet {
    pub const EMPTY: DimSet = DimSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        DimSet(bits)
    }

    /// All of `1..=n`.
    pub const fn full(n: usize) -> Self {
        if n >= 32 {
            DimSet(u32::MAX)
        } else {
            DimSet((1u32 << n) - 1)
        }
    }

    pub const fn single(d: usize) -> Self {
        DimSet(1 << (d - 1))
    }

    pub fn from_dims<I: IntoIterator<Item = usize>>(dims: I) -> Self {
        DimSet(dims.into_iter().fold(0, |acc, d| acc | (1 << (d - 1))))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn contains(self, d: usize) -> bool {
        self.0 & (1 << (d - 1)) != 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn toggled(self, d: usize) -> Self {
        DimSet(self.0 ^ (1 << (d - 1)))
    }

    pub const fn is_subset(self, other: DimSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// True if every set bit is a dimension of an `n`-cube.
    pub const fn fits(self, n: usize) -> bool {
        self.is_subset(DimSet::full(n))
    }

    /// Dimensions in increasing order.
    pub fn dims(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let d = rest.trailing_zeros() as usize + 1;
            rest &= rest - 1;
            Some(d)
        })
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = DimSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(DimSet(cur))
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.dims().collect()
    }
}

impl BitXor for DimSet {
    type Output = DimSet;
    fn bitxor(self, rhs: DimSet) -> DimSet {
        DimSet(self.0 ^ rhs.0)
    }
}

impl BitAnd for DimSet {
    type Output = DimSet;
    fn bitand(self, rhs: DimSet) -> DimSet {
        DimSet(self.0 & rhs.0)
    }
}

impl BitOr for DimSet {
    type Output = DimSet;
    fn bitor(self, rhs: DimSet) -> DimSet {
        DimSet(self.0 | rhs.0)
    }
}

impl Not for DimSet {
    type Output = DimSet;
    fn not(self) -> DimSet {
        DimSet(!self.0)
    }
}

impl fmt::Debug for DimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.dims()).finish()
    }
}

impl fmt::Display for DimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.dims().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for DimSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.dims())
    }
}

impl<'de> Deserialize<'de> for DimSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dims = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return Err(serde::de::Error::custom(format!(
                "dimension {bad} outside 1..={MAX_DIM}"
            )));
        }
        Ok(DimSet::from_dims(dims))
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n))
    }
}

/// A map from every vertex of the `n`-cube to its outmap.
///
/// Construction only checks the table shape. Whether the table is a
/// consistent orientation is answered by [`check_orientation`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrientationJson", into = "OrientationJson")]
pub struct Orientation {
    n: usize,
    outmaps: Vec<DimSet>,
}

#[derive(Serialize, Deserialize)]
struct OrientationJson {
    n: usize,
    outmaps: Vec<DimSet>,
}

impl TryFrom<OrientationJson> for Orientation {
    type Error = Error;
    fn try_from(j: OrientationJson) -> Result<Self> {
        Orientation::new(j.n, j.outmaps)
    }
}

impl From<Orientation> for OrientationJson {
    fn from(o: Orientation) -> Self {
        OrientationJson {
            n: o.n,
            outmaps: o.outmaps,
        }
    }
}

impl Orientation {
    pub fn new(n: usize, outmaps: Vec<DimSet>) -> Result<Self> {
        check_dim(n)?;
        if outmaps.len() != 1 << n {
            return Err(Error::TableSize {
                expected: 1 << n,
                got: outmaps.len(),
            });
        }
        if let Some(bad) = outmaps.iter().find(|m| !m.fits(n)) {
            return Err(Error::BitsOutOfRange { bits: bad.bits(), n });
        }
        Ok(Orientation { n, outmaps })
    }

    pub fn from_fn<F: FnMut(Vertex) -> DimSet>(n: usize, f: F) -> Result<Self> {
        check_dim(n)?;
        Orientation::new(n, (0..1u32 << n).map(DimSet::from_bits).map(f).collect())
    }

    /// The uniform orientation `o(v) = v` with its sink at the empty set.
    pub fn uniform(n: usize) -> Result<Self> {
        Orientation::from_fn(n, |v| v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outmap(&self, v: Vertex) -> DimSet {
        self.outmaps[v.index()]
    }

    pub fn outmaps(&self) -> &[DimSet] {
        &self.outmaps
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..1u32 << self.n).map(DimSet::from_bits)
    }

    pub fn full(&self) -> DimSet {
        DimSet::full(self.n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("orientation serializes")
    }

    pub(crate) fn from_raw(n: usize, outmaps: Vec<DimSet>) -> Self {
        debug_assert_eq!(outmaps.len(), 1 << n);
        Orientation { n, outmaps }
    }
}

impl fmt::Debug for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Orientation(n={}; ", self.n)?;
        for (v, m) in self.outmaps.iter().enumerate() {
            if v > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}->{}", DimSet(v as u32), m)?;
        }
        f.write_str(")")
    }
}

/// A subcube: all vertices agreeing with `fixed` outside of `spanning`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    fixed: Vertex,
    spanning: DimSet,
}

impl Face {
    pub fn new(fixed: Vertex, spanning: DimSet) -> Result<Self> {
        if !(fixed & spanning).is_empty() {
            return Err(Error::BadFace);
        }
        Ok(Face { fixed, spanning })
    }

    pub fn whole(n: usize) -> Self {
        Face {
            fixed: DimSet::EMPTY,
            spanning: DimSet::full(n),
        }
    }

    pub fn fixed(&self) -> Vertex {
        self.fixed
    }

    pub fn spanning(&self) -> DimSet {
        self.spanning
    }

    pub fn dimension(&self) -> usize {
        self.spanning.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let fixed = self.fixed;
        self.spanning.subsets().map(move |s| fixed | s)
    }

    /// Every face of the `n`-cube, `3^n` in total.
    pub fn all(n: usize) -> impl Iterator<Item = Face> {
        let full = DimSet::full(n);
        full.subsets().flat_map(move |spanning| {
            (full & !spanning)
                .subsets()
                .map(move |fixed| Face { fixed, spanning })
        })
    }
}

/// Mirror along `mirror`, then rename dimension `d` to `relabel[d - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    mirror: DimSet,
    relabel: Vec<usize>,
}

impl Isomorphism {
    pub fn new(n: usize, mirror: DimSet, relabel: Vec<usize>) -> Result<Self> {
        check_dim(n)?;
        if !mirror.fits(n) {
            return Err(Error::BitsOutOfRange {
                bits: mirror.bits(),
                n,
            });
        }
        let mut seen = vec![false; n];
        if relabel.len() != n {
            return Err(Error::BadPermutation(n));
        }
        for &d in &relabel {
            if d == 0 || d > n || seen[d - 1] {
                return Err(Error::BadPermutation(n));
            }
            seen[d - 1] = true;
        }
        Ok(Isomorphism { mirror, relabel })
    }

    pub fn identity(n: usize) -> Self {
        Isomorphism {
            mirror: DimSet::EMPTY,
            relabel: (1..=n).collect(),
        }
    }

    pub fn mirror(n: usize, mirror: DimSet) -> Result<Self> {
        Isomorphism::new(n, mirror, (1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.relabel.len()
    }

    pub fn mirror_set(&self) -> DimSet {
        self.mirror
    }

    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    fn permute(&self, s: DimSet) -> DimSet {
        DimSet::from_dims(s.dims().map(|d| self.relabel[d - 1]))
    }
}

/// Edge consistency: `d ∈ o(v)` exactly when `d ∉ o(v ⊕ {d})`.
pub fn check_orientation(o: &Orientation) -> bool {
    first_inconsistent_edge(o).is_none()
}

fn first_inconsistent_edge(o: &Orientation) -> Option<(Vertex, usize)> {
    o.vertices().find_map(|v| {
        (1..=o.n())
            .filter(|&d| !v.contains(d))
            .find(|&d| o.outmap(v).contains(d) == o.outmap(v.toggled(d)).contains(d))
            .map(|d| (v, d))
    })
}

pub(crate) fn require_orientation(o: &Orientation) -> Result<()> {
    match first_inconsistent_edge(o) {
        None => Ok(()),
        Some((v, dim)) => Err(Error::InconsistentEdge {
            vertex: v.to_vec(),
            dim,
        }),
    }
}

/// Pairwise Szabó-Welzl test: every two distinct vertices differ in their
/// outmaps on some dimension in which they themselves differ.
pub fn is_uso(o: &Orientation) -> Result<bool> {
    require_orientation(o)?;
    let maps = o.outmaps();
    for v in 0..maps.len() {
        let ov = maps[v].bits();
        let v32 = v as u32;
        for (w, ow) in maps.iter().enumerate().skip(v + 1) {
            if (v32 ^ w as u32) & (ov ^ ow.bits()) == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every one of the `3^n` faces has exactly one vertex whose outmap misses
/// the face's spanning dimensions.
pub fn unique_sink_per_face(o: &Orientation) -> bool {
    Face::all(o.n()).all(|face| {
        let span = face.spanning();
        face.vertices()
            .filter(|&v| (o.outmap(v) & span).is_empty())
            .take(2)
            .count()
            == 1
    })
}

/// The vertex with empty outmap, if there is exactly one.
pub fn global_sink(o: &Orientation) -> Result<Vertex> {
    let mut sinks = o.vertices().filter(|&v| o.outmap(v).is_empty());
    match (sinks.next(), sinks.next()) {
        (Some(v), None) => Ok(v),
        (None, _) => Err(Error::SinkCount(0)),
        (Some(_), Some(_)) => Err(Error::SinkCount(
            o.outmaps().iter().filter(|m| m.is_empty()).count(),
        )),
    }
}

/// The orientation `o'` with `relabel(o(v)) = o'(relabel(v ⊕ mirror))`.
pub fn apply_isomorphism(o: &Orientation, iso: &Isomorphism) -> Result<Orientation> {
    if iso.n() != o.n() {
        return Err(Error::BadPermutation(o.n()));
    }
    let mut outmaps = vec![DimSet::EMPTY; o.outmaps().len()];
    for v in o.vertices() {
        outmaps[iso.permute(v ^ iso.mirror).index()] = iso.permute(o.outmap(v));
    }
    Ok(Orientation::from_raw(o.n(), outmaps))
}

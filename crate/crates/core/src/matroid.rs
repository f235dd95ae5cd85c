//! Simple extensions of cyclic P-matroids, given by an ordering of the
//! ground set and a set of reoriented elements.
//!
//! The ground set is `1..=2n` plus an extra element `q`, stored as `2n + 1`.
//! Element `i <= n` and `i + n` form a complementary pair. Circuit signs are
//! read off directly: order the support by position, alternate signs
//! starting with `+`, then negate every reoriented element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, DimSet, Orientation};
use crate::error::{Error, Result};
use crate::matousek::InfluenceGraph;

/// Elements as bits: element `e` lives at bit `e - 1`.
pub type ElementMask = u64;

fn bit(e: usize) -> ElementMask {
    1 << (e - 1)
}

fn mask_elements(mask: ElementMask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let e = rest.trailing_zeros() as usize + 1;
        rest &= rest - 1;
        Some(e)
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignedSet {
    plus: ElementMask,
    minus: ElementMask,
}

impl SignedSet {
    pub fn new(plus: ElementMask, minus: ElementMask) -> Self {
        assert_eq!(plus & minus, 0, "signed set parts must be disjoint");
        SignedSet { plus, minus }
    }

    pub fn from_elements(plus: &[usize], minus: &[usize]) -> Self {
        let m = |xs: &[usize]| xs.iter().fold(0, |acc, &e| acc | bit(e));
        SignedSet::new(m(plus), m(minus))
    }

    pub fn plus(&self) -> ElementMask {
        self.plus
    }

    pub fn minus(&self) -> ElementMask {
        self.minus
    }

    pub fn support(&self) -> ElementMask {
        self.plus | self.minus
    }

    pub fn plus_elements(&self) -> Vec<usize> {
        mask_elements(self.plus).collect()
    }

    pub fn minus_elements(&self) -> Vec<usize> {
        mask_elements(self.minus).collect()
    }

    /// `+1`, `-1`, or `0` outside the support.
    pub fn sign(&self, e: usize) -> i8 {
        if self.plus & bit(e) != 0 {
            1
        } else if self.minus & bit(e) != 0 {
            -1
        } else {
            0
        }
    }

    pub fn negated(&self) -> SignedSet {
        SignedSet {
            plus: self.minus,
            minus: self.plus,
        }
    }

    /// Moves `e` from one side to the other.
    pub fn with_flipped(&self, e: usize) -> SignedSet {
        let b = bit(e);
        if self.support() & b == 0 {
            return *self;
        }
        SignedSet {
            plus: self.plus ^ b,
            minus: self.minus ^ b,
        }
    }
}

impl fmt::Debug for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+{:?}, -{:?})", self.plus_elements(), self.minus_elements())
    }
}

/// Ordering of `1..=2n` and `q` plus the reoriented elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ExtensionJson", into = "ExtensionJson")]
pub struct CyclicExtension {
    n: usize,
    order: Vec<usize>,
    /// 1-based position of each element, indexed by `e - 1`.
    position: Vec<usize>,
    flipped: ElementMask,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Token {
    Element(usize),
    Q(String),
}

#[derive(Serialize, Deserialize)]
struct ExtensionJson {
    n: usize,
    order: Vec<Token>,
    #[serde(rename = "F")]
    flipped: Vec<usize>,
}

impl TryFrom<ExtensionJson> for CyclicExtension {
    type Error = Error;
    fn try_from(j: ExtensionJson) -> Result<Self> {
        let q = 2 * j.n + 1;
        let order = j
            .order
            .into_iter()
            .map(|t| match t {
                Token::Element(e) if e >= 1 && e < q => Ok(e),
                Token::Element(e) => Err(Error::BadElement(e)),
                Token::Q(s) if s == "q" => Ok(q),
                Token::Q(s) => Err(Error::Parse(format!("unknown element token {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        CyclicExtension::new(j.n, order, j.flipped)
    }
}

impl From<CyclicExtension> for ExtensionJson {
    fn from(x: CyclicExtension) -> Self {
        let q = x.q();
        ExtensionJson {
            n: x.n,
            order: x
                .order
                .iter()
                .map(|&e| if e == q { Token::Q("q".into()) } else { Token::Element(e) })
                .collect(),
            flipped: x.flipped_elements(),
        }
    }
}

impl CyclicExtension {
    /// `order` lists every element of `1..=2n+1` once, `q = 2n + 1` included.
    /// `flipped` may not contain `q`.
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, order: Vec<usize>, flipped: I) -> Result<Self> {
        check_dim(n)?;
        let size = 2 * n + 1;
        if order.len() != size {
            return Err(Error::BadOrder);
        }
        let mut position = vec![0; size];
        for (p, &e) in order.iter().enumerate() {
            if e == 0 || e > size || position[e - 1] != 0 {
                return Err(Error::BadOrder);
            }
            position[e - 1] = p + 1;
        }
        let mut mask = 0;
        for e in flipped {
            if e == size {
                return Err(Error::QInFlipSet);
            }
            if e == 0 || e > size {
                return Err(Error::BadElement(e));
            }
            mask |= bit(e);
        }
        Ok(CyclicExtension {
            n,
            order,
            position,
            flipped: mask,
        })
    }

    /// Ground elements in `ground_order`, followed by `q`.
    pub fn with_q_last<I: IntoIterator<Item = usize>>(
        n: usize,
        ground_order: &[usize],
        flipped: I,
    ) -> Result<Self> {
        let mut order = ground_order.to_vec();
        order.push(2 * n + 1);
        CyclicExtension::new(n, order, flipped)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        2 * self.n + 1
    }

    pub fn complement(&self, e: usize) -> usize {
        if e <= self.n {
            e + self.n
        } else {
            e - self.n
        }
    }

    /// Elements in order of position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based position of `e` in the full ordering.
    pub fn position(&self, e: usize) -> usize {
        self.position[e - 1]
    }

    /// Position among `1..=2n` only, ignoring `q`.
    pub fn ground_position(&self, e: usize) -> usize {
        let p = self.position(e);
        if p > self.position(self.q()) {
            p - 1
        } else {
            p
        }
    }

    pub fn is_flipped(&self, e: usize) -> bool {
        self.flipped & bit(e) != 0
    }

    pub fn flipped_elements(&self) -> Vec<usize> {
        mask_elements(self.flipped).collect()
    }

    /// The same extension with `q` moved to `position` (1-based).
    pub fn with_q_at(&self, position: usize) -> Result<Self> {
        if position == 0 || position > self.order.len() {
            return Err(Error::BadOrder);
        }
        let mut order: Vec<usize> = self.order.iter().copied().filter(|&e| e != self.q()).collect();
        order.insert(position - 1, self.q());
        CyclicExtension::new(self.n, order, self.flipped_elements())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("extension serializes")
    }

    fn check_element(&self, e: usize) -> Result<()> {
        if e == 0 || e > self.q() {
            Err(Error::BadElement(e))
        } else {
            Ok(())
        }
    }

    /// Reads the circuit on `support` with `+` on its earliest element.
    fn read_off(&self, support: ElementMask) -> SignedSet {
        let mut plus = 0;
        let mut minus = 0;
        let mut positive = true;
        for &e in &self.order {
            let b = bit(e);
            if support & b == 0 {
                continue;
            }
            if positive != self.is_flipped(e) {
                plus |= b;
            } else {
                minus |= b;
            }
            positive = !positive;
        }
        SignedSet { plus, minus }
    }
}

impl fmt::Debug for CyclicExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.q();
        let n = self.n;
        let tokens: Vec<String> = self
            .order
            .iter()
            .map(|&e| {
                let mark = if self.is_flipped(e) { "*" } else { "" };
                if e == q {
                    "q".to_string()
                } else if e > n {
                    format!("{}'{mark}", e - n)
                } else {
                    format!("{e}{mark}")
                }
            })
            .collect();
        write!(f, "CyclicExtension[{}]", tokens.join(" "))
    }
}

/// The nesting condition on the ordering of `1..=2n` and the parity
/// condition on the reoriented set.
pub fn validate_conditions(ext: &CyclicExtension) -> bool {
    let n = ext.n();
    let span = |i: usize| {
        let (a, b) = (ext.ground_position(i), ext.ground_position(i + n));
        (a.min(b), a.max(b))
    };
    for i in 1..=n {
        let (lo, hi) = span(i);
        let inside = |e: usize| (lo..=hi).contains(&ext.ground_position(e));
        if (1..=n).any(|j| j != i && inside(j) != inside(j + n)) {
            return false;
        }
        let half_gap = (hi - lo - 1) / 2;
        let one_flipped = ext.is_flipped(i) != ext.is_flipped(i + n);
        if one_flipped != (half_gap % 2 == 0) {
            return false;
        }
    }
    true
}

fn require_valid(ext: &CyclicExtension) -> Result<()> {
    if validate_conditions(ext) {
        Ok(())
    } else {
        Err(Error::InvalidExtension)
    }
}

/// The circuit supported on `basis ∪ {e}`, signed so that `e` is positive.
pub fn fundamental_circuit(ext: &CyclicExtension, basis: &[usize], e: usize) -> Result<SignedSet> {
    ext.check_element(e)?;
    let mut mask = 0;
    for &b in basis {
        ext.check_element(b)?;
        mask |= bit(b);
    }
    if mask.count_ones() as usize != ext.n() || basis.len() != ext.n() || mask & bit(e) != 0 {
        return Err(Error::BadBasis {
            expected: ext.n(),
            got: basis.len(),
        });
    }
    Ok(normalized(ext.read_off(mask | bit(e)), e))
}

fn normalized(c: SignedSet, e: usize) -> SignedSet {
    if c.sign(e) < 0 {
        c.negated()
    } else {
        c
    }
}

/// Whether the ground matroid has no sign-reversing circuit, i.e. no circuit
/// whose complementary pairs all carry opposite signs. The ground matroid is
/// uniform of rank `n`, so its circuits are exactly the `(n + 1)`-subsets of
/// `1..=2n`. Exhaustive, capped at `n <= 8`.
pub fn is_p_matroid(ext: &CyclicExtension) -> Result<bool> {
    let n = ext.n();
    if n > 8 {
        return Err(Error::DimensionOutOfRange(n));
    }
    let low: ElementMask = (1 << n) - 1;
    for support in 0 as ElementMask..1 << (2 * n) {
        if support.count_ones() as usize != n + 1 {
            continue;
        }
        let c = ext.read_off(support);
        let pairs = support & (support >> n) & low;
        let reversing = mask_elements(pairs).all(|i| c.sign(i) != c.sign(i + n));
        if reversing {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(i, j)` is an edge when pair `j` is nested inside pair `i`.
pub fn g_pi(ext: &CyclicExtension) -> Result<InfluenceGraph> {
    require_valid(ext)?;
    let n = ext.n();
    let mut edges = Vec::new();
    for i in 1..=n {
        let (a, b) = (ext.position(i), ext.position(i + n));
        let (lo, hi) = (a.min(b), a.max(b));
        for j in (1..=n).filter(|&j| j != i) {
            if lo < ext.position(j) && ext.position(j) < hi {
                edges.push((i, j));
            }
        }
    }
    InfluenceGraph::new(n, edges)
}

/// The USO of the extension: vertex `v` uses basis
/// `{i : i ∉ v} ∪ {i + n : i ∈ v}`, and its outmap holds the dimensions whose
/// pair element is negative in the fundamental circuit of `q`.
pub fn extension_to_uso(ext: &CyclicExtension) -> Result<Orientation> {
    require_valid(ext)?;
    let n = ext.n();
    let low: ElementMask = (1 << n) - 1;
    let qbit = bit(ext.q());
    let outmaps = (0u64..1 << n)
        .map(|v| {
            let basis = (low & !v) | (v << n);
            let c = normalized(ext.read_off(basis | qbit), ext.q());
            let neg = c.minus();
            DimSet::from_bits(((neg | (neg >> n)) & low) as u32)
        })
        .collect();
    Orientation::new(n, outmaps)
}

/// Every circuit of the extension: both signings of every `(n + 1)`-subset.
pub fn all_circuits(ext: &CyclicExtension) -> Vec<SignedSet> {
    let size = ext.q();
    let k = ext.n() + 1;
    let mut out = Vec::new();
    for support in 0u64..1 << size {
        if support.count_ones() as usize == k {
            let c = ext.read_off(support);
            out.push(c);
            out.push(c.negated());
        }
    }
    out
}

/// Circuit axioms: non-empty, closed under negation, incomparable supports,
/// and weak elimination.
pub fn circuit_axioms_hold(circuits: &[SignedSet]) -> bool {
    let set: std::collections::HashSet<SignedSet> = circuits.iter().copied().collect();
    if circuits.iter().any(|c| c.support() == 0) {
        return false;
    }
    if circuits.iter().any(|c| !set.contains(&c.negated())) {
        return false;
    }
    for x in circuits {
        for y in circuits {
            let (sx, sy) = (x.support(), y.support());
            if sx & !sy == 0 && x != y && *x != y.negated() {
                return false;
            }
        }
    }
    for x in circuits {
        for y in circuits {
            if *x == y.negated() {
                continue;
            }
            for e in mask_elements(x.plus & y.minus) {
                let plus = (x.plus | y.plus) & !bit(e);
                let minus = (x.minus | y.minus) & !bit(e);
                let found = circuits
                    .iter()
                    .any(|z| z.plus & !plus == 0 && z.minus & !minus == 0);
                if !found {
                    return false;
                }
            }
        }
    }
    true
}

/// Brute-force circuit axiom check over all circuits, for `n <= 3`.
pub fn verify_circuit_axioms(ext: &CyclicExtension) -> Result<bool> {
    if ext.n() > 3 {
        return Err(Error::DimensionOutOfRange(ext.n()));
    }
    Ok(circuit_axioms_hold(&all_circuits(ext)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realizability::{synthesize_extension, Branching};

    fn trivial() -> CyclicExtension {
        CyclicExtension::new(1, vec![1, 2, 3], [2]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(CyclicExtension::new(1, vec![1, 2], []), Err(Error::BadOrder));
        assert_eq!(CyclicExtension::new(1, vec![1, 1, 3], []), Err(Error::BadOrder));
        assert_eq!(CyclicExtension::new(1, vec![1, 2, 3], [3]), Err(Error::QInFlipSet));
    }

    #[test]
    fn conditions() {
        assert!(validate_conditions(&trivial()));
        let crossing = CyclicExtension::with_q_last(2, &[1, 2, 3, 4], []).unwrap();
        assert!(!validate_conditions(&crossing));
        let no_flip = CyclicExtension::with_q_last(2, &[1, 3, 2, 4], []).unwrap();
        assert!(!validate_conditions(&no_flip));
        let unflipped_pair = CyclicExtension::new(1, vec![1, 2, 3], []).unwrap();
        assert!(!validate_conditions(&unflipped_pair));
    }

    #[test]
    fn reading_off_trivial() {
        let c = fundamental_circuit(&trivial(), &[1], 3).unwrap();
        assert_eq!(c.plus_elements(), vec![3]);
        assert_eq!(c.minus_elements(), vec![1]);
        let c = fundamental_circuit(&trivial(), &[2], 3).unwrap();
        assert_eq!(c.plus_elements(), vec![2, 3]);
        assert!(c.minus_elements().is_empty());
        assert!(fundamental_circuit(&trivial(), &[1, 2], 3).is_err());
        assert!(fundamental_circuit(&trivial(), &[3], 3).is_err());
    }

    #[test]
    fn normalization_is_negation() {
        let ext = synthesize_extension(&Branching::path(3).unwrap());
        let c = fundamental_circuit(&ext, &[1, 2, 6], 7).unwrap();
        let d = fundamental_circuit(&ext, &[1, 2, 7], 6).unwrap();
        // same support; normalizing on a different element
        assert!(c == d || c == d.negated());
        let e = normalized(c, 1);
        assert_eq!(e.sign(1), 1);
        assert!(e == c || e == c.negated());
    }

    #[test]
    fn p_matroid_examples() {
        assert!(is_p_matroid(&trivial()).unwrap());
        let crossing = CyclicExtension::with_q_last(2, &[1, 2, 3, 4], []).unwrap();
        assert!(!is_p_matroid(&crossing).unwrap());
        let unflipped_pair = CyclicExtension::new(1, vec![1, 2, 3], []).unwrap();
        assert!(!is_p_matroid(&unflipped_pair).unwrap());
    }

    #[test]
    fn nesting_graph() {
        let nested = CyclicExtension::with_q_last(2, &[1, 2, 4, 3], [4]).unwrap();
        assert_eq!(g_pi(&nested).unwrap().edges().collect::<Vec<_>>(), vec![(1, 2)]);
        let disjoint = CyclicExtension::with_q_last(2, &[1, 3, 2, 4], [3, 4]).unwrap();
        assert_eq!(g_pi(&disjoint).unwrap().edge_count(), 0);
        let crossing = CyclicExtension::with_q_last(2, &[1, 2, 3, 4], []).unwrap();
        assert_eq!(g_pi(&crossing), Err(Error::InvalidExtension));
    }

    #[test]
    fn uso_of_trivial_extension() {
        let u = extension_to_uso(&trivial()).unwrap();
        assert_eq!(u.outmap(DimSet::EMPTY), DimSet::single(1));
        assert_eq!(u.outmap(DimSet::single(1)), DimSet::EMPTY);
    }

    #[test]
    fn axioms() {
        assert!(verify_circuit_axioms(&trivial()).unwrap());
        for b in Branching::enumerate(2).unwrap() {
            assert!(verify_circuit_axioms(&synthesize_extension(&b)).unwrap());
        }
        let mut circuits = all_circuits(&trivial());
        circuits[0] = circuits[0].with_flipped(1);
        assert!(!circuit_axioms_hold(&circuits));
    }

    #[test]
    fn json_format() {
        let ext = trivial();
        assert_eq!(ext.to_json(), r#"{"n":1,"order":[1,2,"q"],"F":[2]}"#);
        let back: CyclicExtension = serde_json::from_str(&ext.to_json()).unwrap();
        assert_eq!(back, ext);
        assert!(serde_json::from_str::<CyclicExtension>(r#"{"n":1,"order":[1,2,"x"],"F":[]}"#).is_err());
    }

    #[test]
    fn moving_q() {
        let ext = trivial();
        let front = ext.with_q_at(1).unwrap();
        assert_eq!(front.order(), &[3, 1, 2]);
        assert_eq!(front.ground_position(1), 1);
        assert_eq!(front.ground_position(2), 2);
    }
}

//! Exact P-LCP instances realizing cyclic P-matroid extensions.
//!
//! An extension is realized by signed points on the moment curve, one column
//! per element. Multiplying by the inverse of the first `n` columns puts the
//! matrix in the form `[I  -M  -q]`, which yields the instance `(M, q)`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{DimSet, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::linalg::{fraction_serde, integer, sign, Rational, RationalMatrix};
use crate::matroid::{validate_conditions, CyclicExtension};

/// A P-matrix `M` and right-hand side `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlcpJson", into = "PlcpJson")]
pub struct PlcpInstance {
    m: RationalMatrix,
    q: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PlcpJson {
    n: usize,
    #[serde(rename = "M")]
    m: RationalMatrix,
    #[serde(with = "fraction_serde")]
    q: Vec<Rational>,
}

impl TryFrom<PlcpJson> for PlcpInstance {
    type Error = Error;
    fn try_from(j: PlcpJson) -> Result<Self> {
        if j.m.rows() != j.n {
            return Err(Error::Shape(format!("n = {} but M has {} rows", j.n, j.m.rows())));
        }
        PlcpInstance::new(j.m, j.q)
    }
}

impl From<PlcpInstance> for PlcpJson {
    fn from(p: PlcpInstance) -> Self {
        PlcpJson {
            n: p.n(),
            m: p.m,
            q: p.q,
        }
    }
}

impl PlcpInstance {
    /// Checks shapes and that `m` is a P-matrix. Degeneracy of `q` surfaces
    /// lazily as [`Error::DegenerateQ`].
    pub fn new(m: RationalMatrix, q: Vec<Rational>) -> Result<Self> {
        if !m.is_square() || q.len() != m.rows() {
            return Err(Error::Shape(format!(
                "M is {}x{}, q has {} entries",
                m.rows(),
                m.cols(),
                q.len()
            )));
        }
        if !is_p_matrix(&m)? {
            return Err(Error::NotPMatrix);
        }
        Ok(PlcpInstance { m, q })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn m(&self) -> &RationalMatrix {
        &self.m
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    /// `M` as text rows, a blank line, then `q` as one row.
    pub fn to_text(&self) -> String {
        let q: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        format!("{}\n{}\n", self.m.to_text(), q.join(" "))
    }
}

/// Complementary `w`, `z` with `w - M z = q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSolution {
    pub w: Vec<Rational>,
    pub z: Vec<Rational>,
}

/// `x_i = i` for the `2n + 1` positions.
pub fn default_abscissae(n: usize) -> Vec<Rational> {
    (1..=2 * n as i64 + 1).map(integer).collect()
}

/// The `n × (2n+1)` matrix with column `e - 1` equal to
/// `±(1, x, x², …, x^{n-1})`, where `x` is the abscissa at the position of
/// `e` and the sign is negative for reoriented elements. `q` is the last
/// column.
pub fn realization_matrix(
    ext: &CyclicExtension,
    abscissae: Option<&[Rational]>,
) -> Result<RationalMatrix> {
    if !validate_conditions(ext) {
        return Err(Error::InvalidExtension);
    }
    let n = ext.n();
    let size = 2 * n + 1;
    let default;
    let xs = match abscissae {
        Some(xs) => xs,
        None => {
            default = default_abscissae(n);
            &default
        }
    };
    if xs.len() != size || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadAbscissae { expected: size });
    }
    let mut v = RationalMatrix::zeros(n, size);
    for e in 1..=size {
        let x = &xs[ext.position(e) - 1];
        let mut entry = if ext.is_flipped(e) {
            -Rational::one()
        } else {
            Rational::one()
        };
        for row in 0..n {
            v[(row, e - 1)] = entry.clone();
            entry *= x;
        }
    }
    Ok(v)
}

/// `M = -V_S⁻¹ V_T` and `q = -V_S⁻¹ v_q` for `V = [V_S  V_T  v_q]`.
pub fn translate_to_plcp(v: &RationalMatrix) -> Result<PlcpInstance> {
    let n = v.rows();
    if v.cols() != 2 * n + 1 {
        return Err(Error::Shape(format!(
            "realization must be n x (2n+1), got {}x{}",
            n,
            v.cols()
        )));
    }
    let vs = v.select_columns(&(0..n).collect::<Vec<_>>());
    let rest = v.select_columns(&(n..=2 * n).collect::<Vec<_>>());
    let x = vs.solve(&rest)?.negated();
    let m = x.select_columns(&(0..n).collect::<Vec<_>>());
    let q = x.column(n);
    PlcpInstance::new(m, q)
}

/// All `2^n - 1` principal minors are strictly positive. Subsets are
/// visited in increasing bitmask order and the scan stops at the first
/// non-positive minor.
pub fn is_p_matrix(m: &RationalMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Shape("P-matrix test needs a square matrix".into()));
    }
    let n = m.rows();
    for subset in 1u64..1 << n {
        let idx: Vec<usize> = (0..n).filter(|i| subset >> i & 1 == 1).collect();
        if sign(&m.principal(&idx).determinant()?) <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The candidate solution with `w_i = 0` for `i ∈ basis` and `z_i = 0`
/// otherwise.
pub fn solve_candidate(inst: &PlcpInstance, basis: DimSet) -> Result<CandidateSolution> {
    let n = inst.n();
    if !basis.fits(n) {
        return Err(Error::BitsOutOfRange { bits: basis.bits(), n });
    }
    // column i carries z_i (as -M e_i) when i ∈ basis, else w_i (as e_i)
    let mut a = RationalMatrix::zeros(n, n);
    for i in 0..n {
        if basis.contains(i + 1) {
            for r in 0..n {
                a[(r, i)] = -inst.m[(r, i)].clone();
            }
        } else {
            a[(i, i)] = Rational::one();
        }
    }
    let x = a.solve_vec(&inst.q)?;
    if let Some(i) = x.iter().position(Zero::is_zero) {
        return Err(Error::DegenerateQ {
            basis: basis.to_vec(),
            coordinate: i + 1,
        });
    }
    let mut w = vec![Rational::zero(); n];
    let mut z = vec![Rational::zero(); n];
    for (i, xi) in x.into_iter().enumerate() {
        if basis.contains(i + 1) {
            z[i] = xi;
        } else {
            w[i] = xi;
        }
    }
    let mz = inst.m.mul_vec(&z);
    assert!(
        w.iter().zip(&mz).zip(&inst.q).all(|((wi, mzi), qi)| wi - mzi == *qi),
        "candidate solution violates w - Mz = q"
    );
    Ok(CandidateSolution { w, z })
}

/// Outmap of `B`: the pairs whose free coordinate is negative in the
/// candidate solution of `B`.
pub fn plcp_to_uso(inst: &PlcpInstance) -> Result<Orientation> {
    let n = inst.n();
    let outmaps = (0u32..1 << n)
        .into_par_iter()
        .map(|b| {
            let basis: Vertex = DimSet::from_bits(b);
            let sol = solve_candidate(inst, basis)?;
            let neg = (1..=n).filter(|&i| {
                let free = if basis.contains(i) { &sol.z[i - 1] } else { &sol.w[i - 1] };
                sign(free) < 0
            });
            Ok(DimSet::from_dims(neg))
        })
        .collect::<Result<Vec<_>>>()?;
    Orientation::new(n, outmaps)
}

/// Bases whose candidate solution is non-negative, by brute force.
pub fn feasible_bases(inst: &PlcpInstance) -> Result<Vec<Vertex>> {
    let n = inst.n();
    let mut out = Vec::new();
    for b in 0u32..1 << n {
        let basis = DimSet::from_bits(b);
        let sol = solve_candidate(inst, basis)?;
        if sol.w.iter().chain(&sol.z).all(|x| sign(x) >= 0) {
            out.push(basis);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    fn ones(n: usize) -> Vec<Rational> {
        vec![integer(1); n]
    }

    fn trivial() -> CyclicExtension {
        CyclicExtension::new(1, vec![1, 2, 3], [2]).unwrap()
    }

    #[test]
    fn realization_of_trivial_extension() {
        let xs = [integer(1), integer(2), integer(3)];
        let v = realization_matrix(&trivial(), Some(&xs)).unwrap();
        assert_eq!(v, RationalMatrix::from_i64(&[&[1, -1, 1]]).unwrap());
        let inst = translate_to_plcp(&v).unwrap();
        assert_eq!(inst.m(), &RationalMatrix::from_i64(&[&[1]]).unwrap());
        assert_eq!(inst.q(), &[integer(-1)]);
    }

    #[test]
    fn abscissae_are_checked() {
        let xs = [integer(1), integer(1), integer(3)];
        assert!(matches!(
            realization_matrix(&trivial(), Some(&xs)),
            Err(Error::BadAbscissae { .. })
        ));
        assert!(realization_matrix(&trivial(), Some(&xs[..2])).is_err());
        let bad = CyclicExtension::new(1, vec![1, 2, 3], []).unwrap();
        assert_eq!(realization_matrix(&bad, None), Err(Error::InvalidExtension));
    }

    #[test]
    fn identity_block_read_off() {
        let n = 3;
        let mut v = RationalMatrix::zeros(n, 2 * n + 1);
        for i in 0..n {
            v[(i, i)] = integer(1);
            v[(i, n + i)] = integer(-1);
            v[(i, 2 * n)] = integer(-1);
        }
        let inst = translate_to_plcp(&v).unwrap();
        assert_eq!(inst.m(), &RationalMatrix::identity(n));
        assert_eq!(inst.q(), ones(n).as_slice());
    }

    #[test]
    fn p_matrix_examples() {
        assert!(is_p_matrix(&RationalMatrix::identity(4)).unwrap());
        let swap = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(!is_p_matrix(&swap).unwrap());
        assert_eq!(PlcpInstance::new(swap, ones(2)), Err(Error::NotPMatrix));
        let m = RationalMatrix::from_i64(&[&[2, -1], &[1, 1]]).unwrap();
        assert!(is_p_matrix(&m).unwrap());
    }

    #[test]
    fn candidate_solutions() {
        let inst = PlcpInstance::new(RationalMatrix::identity(3), ones(3)).unwrap();
        let s = solve_candidate(&inst, DimSet::EMPTY).unwrap();
        assert_eq!(s.w, ones(3));
        assert!(s.z.iter().all(Zero::is_zero));
        let s = solve_candidate(&inst, DimSet::full(3)).unwrap();
        assert!(s.w.iter().all(Zero::is_zero));
        assert_eq!(s.z, vec![integer(-1); 3]);

        let one = PlcpInstance::new(RationalMatrix::identity(1), vec![integer(-1)]).unwrap();
        let s = solve_candidate(&one, DimSet::single(1)).unwrap();
        assert_eq!(s.w, vec![integer(0)]);
        assert_eq!(s.z, vec![integer(1)]);
    }

    #[test]
    fn degenerate_q_is_reported() {
        let inst =
            PlcpInstance::new(RationalMatrix::identity(2), vec![integer(1), integer(0)]).unwrap();
        assert!(matches!(
            solve_candidate(&inst, DimSet::EMPTY),
            Err(Error::DegenerateQ { coordinate: 2, .. })
        ));
        assert!(plcp_to_uso(&inst).is_err());
    }

    #[test]
    fn induced_orientations() {
        let inst = PlcpInstance::new(RationalMatrix::identity(3), ones(3)).unwrap();
        assert_eq!(plcp_to_uso(&inst).unwrap(), Orientation::uniform(3).unwrap());

        let one = PlcpInstance::new(RationalMatrix::identity(1), vec![integer(-1)]).unwrap();
        let o = plcp_to_uso(&one).unwrap();
        assert_eq!(o.outmap(DimSet::EMPTY), DimSet::single(1));
        assert_eq!(o.outmap(DimSet::single(1)), DimSet::EMPTY);
        assert_eq!(feasible_bases(&one).unwrap(), vec![DimSet::single(1)]);
    }

    #[test]
    fn json_format() {
        let inst =
            PlcpInstance::new(RationalMatrix::identity(1), vec![rational(-1, 2)]).unwrap();
        assert_eq!(inst.to_json(), r#"{"n":1,"M":[["1/1"]],"q":["-1/2"]}"#);
        assert_eq!(serde_json::from_str::<PlcpInstance>(&inst.to_json()).unwrap(), inst);
        assert!(serde_json::from_str::<PlcpInstance>(r#"{"n":2,"M":[["1"]],"q":["1"]}"#).is_err());
        assert_eq!(inst.to_text(), "1\n\n-1/2\n");
    }
}

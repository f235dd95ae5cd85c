//! Dense matrices over exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Always `num/den`, including integers.
pub fn format_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub(crate) mod fraction_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_fraction))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_fraction(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl TryFrom<Vec<Vec<String>>> for RationalMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<String>>) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_rows(rows)
    }
}

impl From<RationalMatrix> for Vec<Vec<String>> {
    fn from(m: RationalMatrix) -> Self {
        (0..m.rows)
            .map(|i| m.row(i).iter().map(format_fraction).collect())
            .collect()
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix with {} entries",
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        RationalMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| integer(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Square submatrix on the given row and column indices.
    pub fn principal(&self, idx: &[usize]) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn negated(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &factor * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Solves `self * X = rhs` for square, non-singular `self`.
    pub fn solve(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Shape(format!(
                "solve {}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::Singular)?;
            if p != col {
                a.swap_rows(p, col);
                b.swap_rows(p, col);
            }
            let pivot = a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &pivot;
                for c in col..n {
                    let delta = &factor * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
                for c in 0..m {
                    let delta = &factor * &b[(col, c)];
                    b[(r, c)] -= delta;
                }
            }
        }
        for r in 0..n {
            let pivot = a[(r, r)].clone();
            for c in 0..m {
                b[(r, c)] /= &pivot;
            }
        }
        Ok(b)
    }

    pub fn solve_vec(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let b = RationalMatrix::new(rhs.len(), 1, rhs.to_vec())?;
        Ok(self.solve(&b)?.column(0))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// One row per line, entries separated by spaces, integers without `/1`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{}\n{}", self.rows, self.cols, self.to_text())
    }
}

pub(crate) fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("-6/4").unwrap(), rational(-3, 2));
        assert_eq!(parse_fraction("7").unwrap(), integer(7));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
        assert_eq!(format_fraction(&integer(3)), "3/1");
        assert_eq!(format_fraction(&rational(2, -4)), "-1/2");
    }

    #[test]
    fn determinants() {
        let m = RationalMatrix::from_i64(&[&[2, 1], &[1, 3]]).unwrap();
        assert_eq!(m.determinant().unwrap(), integer(5));
        let swap = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(swap.determinant().unwrap(), integer(-1));
        let singular = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(singular.determinant().unwrap(), integer(0));
        assert!(RationalMatrix::from_i64(&[&[1, 2]]).unwrap().determinant().is_err());
    }

    #[test]
    fn solving() {
        let a = RationalMatrix::from_i64(&[&[0, 2], &[3, 1]]).unwrap();
        let x = a.solve_vec(&[integer(4), integer(5)]).unwrap();
        assert_eq!(x, vec![integer(1), integer(2)]);
        let singular = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(singular.solve_vec(&[integer(1), integer(1)]), Err(Error::Singular));
    }

    #[test]
    fn shapes() {
        assert!(RationalMatrix::from_rows(vec![vec![integer(1)], vec![]]).is_err());
        assert!(RationalMatrix::new(0, 1, vec![]).is_err());
        let m = RationalMatrix::from_i64(&[&[1, -2], &[3, 4]]).unwrap();
        assert_eq!(m.to_text(), "1 -2\n3 4\n");
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/1","-2/1"],["3/1","4/1"]]"#);
        assert_eq!(serde_json::from_str::<RationalMatrix>(&json).unwrap(), m);
    }
}

//! Exact linear algebra over ℚ and ℤ.
//!
//! [`RationalMatrix`] carries reduced fractions only; integer helpers in
//! [`int`] work on `i64` rows with `i128` intermediates.

pub mod int;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion of an integral rational to `i64`.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(RationalMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Builds a square matrix and rejects it unless it is symmetric.
    pub fn symmetric(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(m)
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// `Uᵀ·self·U` for an integer matrix `U` (columns = new basis vectors).
    pub fn congruence(&self, u: &[Vec<i64>]) -> Result<Self> {
        let um = Self::from_i64_rows(u)?;
        um.transpose().mul(self)?.mul(&um)
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn denominator_lcm(&self) -> BigInt {
        lcm_of_denominators(&self.entries)
    }

    /// Entries as `i64` rows, if every entry is an integer that fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rational_to_i64).collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                for k in c..n {
                    let v = &a[r][k] - &f * &a[c][k];
                    a[r][k] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::DimensionMismatch("singular matrix".into()))?;
            a.swap(p, c);
            inv.swap(p, c);
            let pivot = a[c][c].clone();
            for k in 0..n {
                a[c][k] = &a[c][k] / &pivot;
                inv[c][k] = &inv[c][k] / &pivot;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let v = &a[r][k] - &f * &a[c][k];
                    a[r][k] = v;
                    let w = &inv[r][k] - &f * &inv[c][k];
                    inv[r][k] = w;
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Exact positive semidefiniteness test for a symmetric matrix, by
    /// Schur complements on positive diagonal pivots.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let mut a = self.to_rows();
        let mut alive: Vec<usize> = (0..self.rows).collect();
        while let Some(pos) = alive.iter().position(|&i| a[i][i].is_positive()) {
            let p = alive.remove(pos);
            let pivot = a[p][p].clone();
            for &i in &alive {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &pivot;
                for &j in &alive {
                    let v = &a[i][j] - &f * &a[p][j];
                    a[i][j] = v;
                }
            }
        }
        alive.iter().all(|&i| alive.iter().all(|&j| a[i][j].is_zero()))
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (n, m) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            let pivot = a[r][c].clone();
            for i in r + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] / &pivot;
                for k in c..m {
                    let v = &a[i][k] - &f * &a[r][k];
                    a[i][k] = v;
                }
            }
            r += 1;
        }
        r
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `gram = L·D·Lᵀ` with `L` unit lower triangular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlFactor {
    pub lower: RationalMatrix,
    pub pivots: Vec<Rational>,
}

impl LdlFactor {
    pub fn determinant(&self) -> Rational {
        self.pivots.iter().fold(Rational::one(), |acc, p| acc * p)
    }
}

/// Exact LDLᵀ factorization of a symmetric positive definite matrix.
pub fn cholesky_rational(gram: &RationalMatrix) -> Result<LdlFactor> {
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = gram.rows();
    let mut lower = RationalMatrix::identity(n);
    let mut pivots: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = gram.get(j, j).clone();
        for k in 0..j {
            d -= lower.get(j, k) * lower.get(j, k) * &pivots[k];
        }
        if !d.is_positive() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: format_rational(&d) });
        }
        for i in j + 1..n {
            let mut v = gram.get(i, j).clone();
            for k in 0..j {
                v -= lower.get(i, k) * lower.get(j, k) * &pivots[k];
            }
            lower.set(i, j, v / &d);
        }
        pivots.push(d);
    }
    Ok(LdlFactor { lower, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&crate::data::e8_gram()).unwrap()
    }

    #[test]
    fn ldl_of_identity_is_trivial() {
        let f = cholesky_rational(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(f.lower, RationalMatrix::identity(2));
        assert_eq!(f.pivots, vec![rat(1), rat(1)]);
    }

    #[test]
    fn ldl_of_e8_has_unit_determinant() {
        let f = cholesky_rational(&e8()).unwrap();
        assert!(f.pivots.iter().all(|p| p.is_positive()));
        assert_eq!(f.determinant(), rat(1));
        assert_eq!(e8().determinant().unwrap(), rat(1));
        // L·D·Lᵀ reproduces the Gram matrix
        let mut d = RationalMatrix::zeros(8, 8);
        for (i, p) in f.pivots.iter().enumerate() {
            d.set(i, i, p.clone());
        }
        let back = f.lower.mul(&d).unwrap().mul(&f.lower.transpose()).unwrap();
        assert_eq!(back, e8());
    }

    #[test]
    fn zero_row_is_not_positive_definite() {
        let g = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(matches!(cholesky_rational(&g), Err(Error::NotPositiveDefinite { index: 1, .. })));
    }

    #[test]
    fn rationals_round_trip_through_text() {
        for s in ["3", "-7/2", "0", "10/4"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn symmetric_constructor_rejects_asymmetry() {
        let rows = vec![vec![rat(1), rat(2)], vec![rat(3), rat(1)]];
        assert!(matches!(RationalMatrix::symmetric(rows), Err(Error::NotSymmetric)));
    }

    #[test]
    fn psd_detection() {
        let psd = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        let not = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        let zero_diag = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![1, 4]]).unwrap();
        assert!(psd.is_positive_semidefinite());
        assert!(!not.is_positive_semidefinite());
        assert!(!zero_diag.is_positive_semidefinite());
        assert!(RationalMatrix::zeros(3, 3).is_positive_semidefinite());
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let inv = e8().inverse().unwrap();
        assert_eq!(inv.mul(&e8()).unwrap(), RationalMatrix::identity(8));
    }
}

//! Exact rational scalars and the small dense linear algebra used everywhere.
//!
//! All arithmetic in this crate is exact: scalars are arbitrary-precision
//! rationals kept in reduced form with positive denominator, vectors are plain
//! `Vec<Rat>` wrappers and matrices are row-major with exact Gaussian
//! elimination. No floating point enters the crate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p" with an ASCII minus sign and no spaces.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let n: BigInt = p.parse().map_err(|_| bad())?;
            let d: BigInt = q.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Formats in the canonical "p/q" form, omitting "/1" for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rounds down to the nearest integer.
pub fn rat_floor(r: &Rat) -> Rat {
    Rat::from_integer(r.floor().to_integer())
}

/// A vector of exact rationals. Used both for lattice (N-side) and dual
/// (M-side) coordinates; the pairing is the standard dot product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVec(pub Vec<Rat>);

impl QVec {
    pub fn zero(dim: usize) -> Self {
        QVec(vec![Rat::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        QVec(v.iter().map(|&x| rint(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &QVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> QVec {
        QVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }

    /// Clears denominators and divides by the content, keeping the direction.
    /// The zero vector stays zero.
    pub fn primitive(&self) -> QVec {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = Int::one();
        for x in &self.0 {
            lcm = num_integer::lcm(lcm, x.denom().clone());
        }
        let ints: Vec<Int> = self.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let mut g = Int::zero();
        for v in &ints {
            g = num_integer::gcd(g, v.abs());
        }
        QVec(ints.iter().map(|v| Rat::from_integer(v / &g)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.denom().is_one())
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(x))?;
        }
        write!(f, ")")
    }
}

/// Dense row-major matrix over the rationals. Small: ambient ranks here are
/// at most 6.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QMat {
    pub rows: Vec<QVec>,
}

impl QMat {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![Rat::zero(); n];
                r[i] = Rat::one();
                QVec(r)
            })
            .collect();
        QMat { rows }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        QMat {
            rows: rows.iter().map(|r| QVec::from_ints(r)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.dim())
    }

    pub fn apply(&self, v: &QVec) -> QVec {
        QVec(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        let n = self.nrows();
        let m = other.ncols();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let mut acc = Rat::zero();
                for k in 0..other.nrows() {
                    acc += &self.rows[i].0[k] * &other.rows[k].0[j];
                }
                row.push(acc);
            }
            rows.push(QVec(row));
        }
        QMat { rows }
    }

    pub fn det(&self) -> Rat {
        let n = self.nrows();
        debug_assert_eq!(n, self.ncols());
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pv = m[col][col].clone();
            det *= &pv;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        let n = self.nrows();
        debug_assert_eq!(n, self.ncols());
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.0.clone();
                for j in 0..n {
                    row.push(if i == j { Rat::one() } else { Rat::zero() });
                }
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(pivot, col);
            let pv = m[col][col].clone();
            for c in 0..2 * n {
                m[col][c] /= pv.clone();
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        Some(QMat {
            rows: m.into_iter().map(|row| QVec(row[n..].to_vec())).collect(),
        })
    }

    pub fn transpose(&self) -> QMat {
        let n = self.nrows();
        let m = self.ncols();
        let mut rows = Vec::with_capacity(m);
        for j in 0..m {
            rows.push(QVec((0..n).map(|i| self.rows[i].0[j].clone()).collect()));
        }
        QMat { rows }
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.is_integral())
    }
}

/// Rank of a set of rational vectors.
pub fn rank_of(vectors: &[QVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].dim();
    let mut basis: Vec<QVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !w.0[p].is_zero() {
                let factor = &w.0[p] / &b.0[p];
                w = w.sub(&b.scale(&factor));
            }
        }
        if let Some(p) = (0..dim).find(|&c| !w.0[c].is_zero()) {
            basis.push(w);
            pivots.push(p);
        }
    }
    basis.len()
}

/// Basis of the space of vectors orthogonal to all the given ones.
pub fn orthogonal_complement(vectors: &[QVec], dim: usize) -> Vec<QVec> {
    // Solve the homogeneous system; free columns give the kernel basis.
    let mut m: Vec<Vec<Rat>> = vectors.iter().map(|v| v.0.clone()).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..dim {
        let pivot = (row..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(p, row);
        let pv = m[row][col].clone();
        for c in 0..dim {
            m[row][c] /= pv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..dim {
                    let sub = &factor * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(QVec(v).primitive());
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_format_round() {
        let r = parse_rat("-3/6").unwrap();
        assert_eq!(format_rat(&r), "-1/2");
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1 /2").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = QVec(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(v.primitive(), QVec::from_ints(&[2, -3]));
        assert!(QVec::zero(3).primitive().is_zero());
    }

    #[test]
    fn small_matrix_inverse() {
        let m = QMat::from_ints(&[vec![-1, 0], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        assert_eq!(m.det(), rint(-1));
    }

    #[test]
    fn orthogonal_complement_of_a_line() {
        let c = orthogonal_complement(&[QVec::from_ints(&[1, 1])], 2);
        assert_eq!(c.len(), 1);
        assert!(c[0].dot(&QVec::from_ints(&[1, 1])).is_zero());
    }
}

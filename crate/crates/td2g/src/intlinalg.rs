//! Exact integer matrices, rational vectors and phases in ℚ/ℤ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&v| Int::from(v)).collect();
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Int) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// The 2n x 2n matrix [[a, b], [c, d]] from four n x n blocks.
    pub fn from_blocks(a: &IntMat, b: &IntMat, c: &IntMat, d: &IntMat) -> Self {
        let n = a.rows;
        Self::from_fn(2 * n, 2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(i % n, j % n)].clone()
        })
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

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && *self == -&self.transpose()
    }

    pub fn scale(&self, k: &Int) -> Self {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * k).collect() }
    }

    pub fn scale_i(&self, k: i32) -> Self {
        self.scale(&Int::from(k))
    }

    /// Sum of absolute values of all entries.
    pub fn abs_sum(&self) -> Int {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul_ratvec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rat::zero(), |acc, (a, x)| acc + x * Rat::from_integer(a.clone())))
            .collect()
    }

    pub fn determinant(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(bareiss_det(self.data.clone(), self.rows))
    }

    /// The classical adjugate, built from cofactors.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        Ok(Self::from_fn(n, n, |i, j| {
            // entry (i, j) of adj is the (j, i) cofactor
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for r in (0..n).filter(|&r| r != j) {
                for c in (0..n).filter(|&c| c != i) {
                    minor.push(self[(r, c)].clone());
                }
            }
            let d = bareiss_det(minor, n - 1);
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        }))
    }
}

fn bareiss_det(mut m: Vec<Int>, n: usize) -> Int {
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    sign * &m[n * n - 1]
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a IntMat> for &'a IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        mat_mul(self, rhs).expect("matrix product dimension mismatch")
    }
}

impl<'a> Add<&'a IntMat> for &'a IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        IntMat { rows: self.rows, cols: self.cols, data }
    }
}

impl<'a> Sub<&'a IntMat> for &'a IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        IntMat { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let mut out = IntMat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let idx = i * b.cols + j;
                out.data[idx] += aik * &b[(k, j)];
            }
        }
    }
    Ok(out)
}

/// Integer inverse of a matrix with determinant ±1, computed as det·adj.
pub fn unimodular_inverse(a: &IntMat) -> Result<IntMat> {
    let det = a.determinant()?;
    if det.abs() != Int::one() {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    Ok(a.adjugate()?.scale(&det))
}

/// Returns the strictly lower triangular B_low with b = B_low − B_lowᵀ.
pub fn strict_lower_split(b: &IntMat) -> Result<IntMat> {
    if !b.is_skew() {
        return Err(Error::NotSkew);
    }
    Ok(IntMat::from_fn(b.rows, b.cols, |i, j| if i > j { b[(i, j)].clone() } else { Int::zero() }))
}

pub fn diag_vec(a: &IntMat) -> Result<IntVec> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    Ok((0..a.rows).map(|i| a[(i, i)].clone()).collect())
}

pub fn dot(u: &[Int], v: &[Int]) -> Int {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn dot_rat(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

pub fn dot_int_rat(u: &[Int], v: &[Rat]) -> Rat {
    u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + b * Rat::from_integer(a.clone()))
}

pub fn to_rat(v: &[Int]) -> RatVec {
    v.iter().cloned().map(Rat::from_integer).collect()
}

pub fn ivec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn vec_add<T: Clone + Add<Output = T>>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<T: Clone + Sub<Output = T>>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_neg<T: Clone + Neg<Output = T>>(u: &[T]) -> Vec<T> {
    u.iter().map(|a| -a.clone()).collect()
}

pub fn vec_scale(u: &[Int], k: &Int) -> IntVec {
    u.iter().map(|a| a * k).collect()
}

/// aᵀXb over ℚ, without reduction.
pub fn bilinear(x: &IntMat, a: &[Rat], b: &[Rat]) -> Rat {
    dot_rat(a, &x.mul_ratvec(b))
}

/// η(a,b) = aᵀXb mod 1.
pub fn phase_bilinear(x: &IntMat, a: &[Rat], b: &[Rat]) -> Result<Phase> {
    if a.len() != x.rows() || b.len() != x.cols() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {} against a {}x{} form",
            a.len(),
            b.len(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(Phase::new(bilinear(x, a, b)))
}

/// An element of U(1) = ℚ/ℤ, stored as its representative in [0,1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rat);

impl Phase {
    pub fn new(q: Rat) -> Self {
        let fl = q.floor();
        Phase(q - fl)
    }

    pub fn zero() -> Self {
        Phase(Rat::zero())
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(rat(num, den))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &Int {
        self.0.numer()
    }

    pub fn denom(&self) -> &Int {
        self.0.denom()
    }

    /// Balanced integer representative of N·phase, in (−N/2, N/2].
    pub fn balanced_times(&self, n: &Int) -> Option<Int> {
        let q = &self.0 * Rat::from_integer(n.clone());
        if !q.is_integer() {
            return None;
        }
        let v = q.to_integer();
        let (_, r) = v.div_rem(n);
        Some(if &r * 2 > *n { r - n } else { r })
    }
}

impl From<Rat> for Phase {
    fn from(q: Rat) -> Self {
        Phase::new(q)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::new(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip(n: usize) -> IntMat {
        let e = IntMat::identity(n);
        let z = IntMat::zeros(n, n);
        IntMat::from_blocks(&z, &e, &e, &z)
    }

    fn j(n: usize) -> IntMat {
        let e = IntMat::identity(n);
        let z = IntMat::zeros(n, n);
        IntMat::from_blocks(&z, &z, &e, &z)
    }

    #[test]
    fn flip_and_j_products() {
        for n in 1..4 {
            assert_eq!(&flip(n) * &flip(n), IntMat::identity(2 * n));
            assert!((&j(n) * &j(n)).is_zero());
        }
        assert_eq!(&flip(1) * &j(1), IntMat::from_i64(&[vec![1, 0], vec![0, 0]]));
    }

    #[test]
    fn mat_mul_rejects_mismatch() {
        assert!(mat_mul(&IntMat::zeros(2, 3), &IntMat::zeros(2, 3)).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(unimodular_inverse(&IntMat::identity(4)).unwrap(), IntMat::identity(4));
        assert_eq!(unimodular_inverse(&flip(2)).unwrap(), flip(2));
        let g = IntMat::from_i64(&[vec![1, 1], vec![0, 1]]);
        let ginv = IntMat::from_i64(&[vec![1, -1], vec![0, 1]]);
        let z = IntMat::zeros(2, 2);
        let d = IntMat::from_blocks(&g, &z, &z, &ginv.transpose());
        let dinv = IntMat::from_blocks(&ginv, &z, &z, &g.transpose());
        assert_eq!(unimodular_inverse(&d).unwrap(), dinv);
        assert!(matches!(
            unimodular_inverse(&IntMat::from_i64(&[vec![2, 0], vec![0, 1]])),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(matches!(unimodular_inverse(&IntMat::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let a = IntMat::from_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(a.determinant().unwrap(), Int::from(-1));
        let b = IntMat::from_i64(&[vec![2, 3, 1], vec![4, 1, -3], vec![0, 5, 2]]);
        assert_eq!(b.determinant().unwrap(), Int::from(30));
    }

    #[test]
    fn split_examples() {
        for n in 1..4 {
            let b = &j(n) - &j(n).transpose();
            assert_eq!(strict_lower_split(&b).unwrap(), j(n));
            let z = IntMat::zeros(2 * n, 2 * n);
            assert_eq!(strict_lower_split(&z).unwrap(), z);
            for i in 0..n {
                let mut bv = IntMat::zeros(2 * n, 2 * n);
                bv.set(i + n, i, Int::one());
                bv.set(i, i + n, -Int::one());
                let mut low = IntMat::zeros(2 * n, 2 * n);
                low.set(i + n, i, Int::one());
                assert_eq!(strict_lower_split(&bv).unwrap(), low);
            }
        }
        assert_eq!(strict_lower_split(&IntMat::identity(2)), Err(Error::NotSkew));
    }

    #[test]
    fn diag_examples() {
        assert_eq!(diag_vec(&IntMat::identity(3)).unwrap(), ivec(&[1, 1, 1]));
        assert_eq!(diag_vec(&flip(1)).unwrap(), ivec(&[0, 0]));
        assert!(diag_vec(&IntMat::zeros(1, 2)).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let x = j(1);
        let ints = to_rat(&ivec(&[3, -2]));
        assert!(phase_bilinear(&x, &ints, &to_rat(&ivec(&[5, 7]))).unwrap().is_zero());
        let a = vec![rat(1, 2), rat(0, 1)];
        let b = vec![rat(0, 1), rat(1, 3)];
        assert!(phase_bilinear(&x, &a, &b).unwrap().is_zero());
        let a = vec![rat(0, 1), rat(1, 2)];
        let b = vec![rat(1, 3), rat(0, 1)];
        assert_eq!(phase_bilinear(&x, &a, &b).unwrap(), Phase::from_frac(1, 6));
        assert!(phase_bilinear(&x, &a, &[rat(1, 1)]).is_err());
    }

    #[test]
    fn phase_reduction_is_canonical() {
        assert_eq!(Phase::from_frac(7, 3), Phase::from_frac(1, 3));
        assert_eq!(Phase::from_frac(-1, 3), Phase::from_frac(2, 3));
        assert_eq!(Phase::from_frac(-4, 2), Phase::zero());
        assert_eq!(Phase::from_frac(2, 3).balanced_times(&Int::from(3)), Some(Int::from(-1)));
        assert_eq!(Phase::from_frac(1, 2).balanced_times(&Int::from(5)), None);
    }
}

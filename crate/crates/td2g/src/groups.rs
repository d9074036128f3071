//! The group O±(n,n,ℤ) of integer matrices A with AᵀIA = ±I.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{unimodular_inverse, Int, IntMat};
use crate::rng::{self, Rng};

/// I = [[0, E], [E, 0]].
pub fn split_form(n: usize) -> IntMat {
    let e = IntMat::identity(n);
    let z = IntMat::zeros(n, n);
    IntMat::from_blocks(&z, &e, &e, &z)
}

/// J = [[0, 0], [E, 0]], the matrix of [a, b] = aᵀJb.
pub fn j_form(n: usize) -> IntMat {
    let e = IntMat::identity(n);
    let z = IntMat::zeros(n, n);
    IntMat::from_blocks(&z, &z, &e, &z)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PseudoOrthogonal {
    n: usize,
    a: IntMat,
    iso: i32,
}

impl PseudoOrthogonal {
    pub fn check_membership(a: &IntMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if !a.rows().is_multiple_of(2) || a.rows() == 0 {
            return Err(Error::OddDimension(a.rows()));
        }
        let n = a.rows() / 2;
        let form = &(&a.transpose() * &split_form(n)) * a;
        let iso = classify_form(&form, n)?;
        let det = a.determinant()?;
        if det != Int::one() && det != -Int::one() {
            return Err(Error::NotMember(format!("determinant {det} is not ±1")));
        }
        Ok(PseudoOrthogonal { n, a: a.clone(), iso })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMat {
        &self.a
    }

    pub fn iso(&self) -> i32 {
        self.iso
    }

    pub fn iso_int(&self) -> Int {
        Int::from(self.iso)
    }

    pub fn identity(n: usize) -> Self {
        PseudoOrthogonal { n, a: IntMat::identity(2 * n), iso: 1 }
    }

    pub fn is_identity(&self) -> bool {
        self.a == IntMat::identity(2 * self.n)
    }

    /// The flip I.
    pub fn flip(n: usize) -> Self {
        PseudoOrthogonal { n, a: split_form(n), iso: 1 }
    }

    pub fn neg_identity(n: usize) -> Self {
        PseudoOrthogonal { n, a: IntMat::identity(2 * n).scale_i(-1), iso: 1 }
    }

    /// R = [[0, −1], [1, 0]] in O±(1,1,ℤ).
    pub fn rotation() -> Self {
        PseudoOrthogonal { n: 1, a: IntMat::from_i64(&[vec![0, -1], vec![1, 0]]), iso: -1 }
    }

    /// P = diag(E_n, −E_n), an element with iso = −1 for every n.
    pub fn parity(n: usize) -> Self {
        let e = IntMat::identity(n);
        let z = IntMat::zeros(n, n);
        PseudoOrthogonal { n, a: IntMat::from_blocks(&e, &z, &z, &e.scale_i(-1)), iso: -1 }
    }

    /// D_g = diag(g, g^{-T}).
    pub fn embed_gl(g: &IntMat) -> Result<Self> {
        let ginv = unimodular_inverse(g)?;
        let n = g.rows();
        let z = IntMat::zeros(n, n);
        Ok(PseudoOrthogonal { n, a: IntMat::from_blocks(g, &z, &z, &ginv.transpose()), iso: 1 })
    }

    /// e^B = [[E, 0], [B, E]].
    pub fn embed_so(b: &IntMat) -> Result<Self> {
        if !b.is_skew() {
            return Err(Error::NotSkew);
        }
        let n = b.rows();
        let e = IntMat::identity(n);
        Ok(PseudoOrthogonal { n, a: IntMat::from_blocks(&e, &IntMat::zeros(n, n), b, &e), iso: 1 })
    }

    /// V_i swaps coordinates i and i+n (1-based i).
    pub fn perm_v(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let k = i - 1;
        let a = IntMat::from_fn(2 * n, 2 * n, |r, c| {
            let target = if r == k {
                k + n
            } else if r == k + n {
                k
            } else {
                r
            };
            if c == target {
                Int::one()
            } else {
                Int::zero()
            }
        });
        Ok(PseudoOrthogonal { n, a, iso: 1 })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "rank mismatch in group product");
        PseudoOrthogonal { n: self.n, a: &self.a * &other.a, iso: self.iso * other.iso }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(self.mul(other))
    }

    /// A⁻¹ = iso(A)·I·Aᵀ·I.
    pub fn inverse(&self) -> Self {
        let i = split_form(self.n);
        PseudoOrthogonal { n: self.n, a: (&(&i * &self.a.transpose()) * &i).scale_i(self.iso), iso: self.iso }
    }

    pub fn transpose(&self) -> Self {
        PseudoOrthogonal { n: self.n, a: self.a.transpose(), iso: self.iso }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }
}

fn classify_form(form: &IntMat, n: usize) -> Result<i32> {
    let mut on_support = Vec::with_capacity(2 * n);
    let mut off_support = false;
    for r in 0..2 * n {
        for c in 0..2 * n {
            let in_support = c == (r + n) % (2 * n);
            if in_support {
                on_support.push(form[(r, c)].clone());
            } else if !form[(r, c)].is_zero() {
                off_support = true;
            }
        }
    }
    if off_support {
        return Err(Error::NotMember(format!("AᵀIA = {form:?} is not proportional to I")));
    }
    let first = on_support[0].clone();
    if on_support.iter().any(|v| *v != first) {
        return Err(Error::NotMember(format!("AᵀIA has the shape of I but mixed entries {on_support:?}")));
    }
    if first == BigInt::one() {
        Ok(1)
    } else if first == -BigInt::one() {
        Ok(-1)
    } else {
        Err(Error::NotMember(format!("AᵀIA = {first}·I, factor is not ±1")))
    }
}

/// The eight elements of O±(1,1,ℤ); the first four have iso = +1.
pub fn enumerate_n1() -> Vec<PseudoOrthogonal> {
    let table: [[i64; 4]; 8] = [
        [1, 0, 0, 1],
        [-1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, -1, -1, 0],
        [0, -1, 1, 0],
        [0, 1, -1, 0],
        [1, 0, 0, -1],
        [-1, 0, 0, 1],
    ];
    table
        .iter()
        .map(|e| {
            let m = IntMat::from_i64(&[vec![e[0], e[1]], vec![e[2], e[3]]]);
            PseudoOrthogonal::check_membership(&m).expect("table entry is a member")
        })
        .collect()
}

/// Transvections E + E_ij (i ≠ j) and the sign change of the first coordinate.
pub fn gl_generators(n: usize) -> Vec<IntMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut g = IntMat::identity(n);
                g.set(i, j, Int::one());
                out.push(g);
            }
        }
    }
    let mut s = IntMat::identity(n);
    s.set(0, 0, -Int::one());
    out.push(s);
    out
}

/// Elementary skew matrices E_ij − E_ji with i > j.
pub fn so_generators(n: usize) -> Vec<IntMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let mut b = IntMat::zeros(n, n);
            b.set(i, j, Int::one());
            b.set(j, i, -Int::one());
            out.push(b);
        }
    }
    out
}

/// The generator set used for random test words.
pub fn generators(n: usize) -> Vec<PseudoOrthogonal> {
    let mut out: Vec<PseudoOrthogonal> =
        gl_generators(n).iter().map(|g| PseudoOrthogonal::embed_gl(g).expect("generator is unimodular")).collect();
    out.extend(so_generators(n).iter().map(|b| PseudoOrthogonal::embed_so(b).expect("generator is skew")));
    out.extend((1..=n).map(|i| PseudoOrthogonal::perm_v(n, i).expect("index in range")));
    out.push(PseudoOrthogonal::flip(n));
    out.push(PseudoOrthogonal::neg_identity(n));
    if n == 1 {
        out.push(PseudoOrthogonal::rotation());
    } else {
        out.push(PseudoOrthogonal::parity(n));
    }
    out
}

/// Product of `length` factors, each a uniformly drawn generator or its inverse.
pub fn random_word(generators: &[PseudoOrthogonal], length: usize, rng: &mut Rng) -> Result<PseudoOrthogonal> {
    let first = generators.first().ok_or(Error::EmptyGenerators)?;
    let mut acc = PseudoOrthogonal::identity(first.n());
    for _ in 0..length {
        let k = rng::below(rng, 2 * generators.len());
        let g = &generators[k / 2];
        acc = if k.is_multiple_of(2) { acc.mul(g) } else { acc.mul(&g.inverse()) };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        for n in 1..4 {
            assert_eq!(PseudoOrthogonal::check_membership(&split_form(n)).unwrap().iso(), 1);
            assert_eq!(PseudoOrthogonal::check_membership(&IntMat::identity(2 * n)).unwrap().iso(), 1);
            assert!(PseudoOrthogonal::check_membership(&j_form(n)).is_err());
        }
        let r = IntMat::from_i64(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(PseudoOrthogonal::check_membership(&r).unwrap().iso(), -1);
        assert_eq!(PseudoOrthogonal::check_membership(&IntMat::identity(3)), Err(Error::OddDimension(3)));
    }

    #[test]
    fn membership_failures_are_classified() {
        let scaled = IntMat::from_i64(&[vec![1, 0], vec![0, 2]]);
        let msg = PseudoOrthogonal::check_membership(&scaled).unwrap_err().to_string();
        assert!(msg.contains("factor"), "{msg}");
        let off = IntMat::from_i64(&[vec![1, 1], vec![0, 1]]);
        let msg = PseudoOrthogonal::check_membership(&off).unwrap_err().to_string();
        assert!(msg.contains("not proportional"), "{msg}");
    }

    #[test]
    fn embed_gl_example() {
        let g = IntMat::from_i64(&[vec![1, 1], vec![0, 1]]);
        let expect = IntMat::from_i64(&[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, -1, 1]]);
        assert_eq!(PseudoOrthogonal::embed_gl(&g).unwrap().matrix(), &expect);
        let m1 = IntMat::from_i64(&[vec![-1]]);
        assert_eq!(PseudoOrthogonal::embed_gl(&m1).unwrap().matrix(), &IntMat::from_i64(&[vec![-1, 0], vec![0, -1]]));
        assert!(PseudoOrthogonal::embed_gl(&IntMat::from_i64(&[vec![2]])).is_err());
    }

    #[test]
    fn embed_so_examples() {
        let b = IntMat::from_i64(&[vec![0, 1], vec![-1, 0]]);
        let e = PseudoOrthogonal::embed_so(&b).unwrap();
        let expect = IntMat::from_i64(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 1, 1, 0], vec![-1, 0, 0, 1]]);
        assert_eq!(e.matrix(), &expect);
        let back = PseudoOrthogonal::embed_so(&b.scale_i(-1)).unwrap();
        assert!(e.mul(&back).is_identity());
        assert!(PseudoOrthogonal::embed_so(&IntMat::zeros(2, 2)).unwrap().is_identity());
        assert!(PseudoOrthogonal::embed_so(&IntMat::identity(2)).is_err());
    }

    #[test]
    fn perm_v_examples() {
        assert_eq!(PseudoOrthogonal::perm_v(1, 1).unwrap(), PseudoOrthogonal::flip(1));
        let v = PseudoOrthogonal::perm_v(2, 1).unwrap();
        let e = |i: usize| (0..4).map(|k| Int::from((k == i) as i64)).collect::<Vec<_>>();
        assert_eq!(v.matrix().mul_vec(&e(0)), e(2));
        assert_eq!(v.matrix().mul_vec(&e(1)), e(1));
        assert!(v.mul(&v).is_identity());
        assert!(PseudoOrthogonal::perm_v(2, 3).is_err());
        assert!(PseudoOrthogonal::perm_v(2, 0).is_err());
    }

    #[test]
    fn n1_enumeration() {
        let all = enumerate_n1();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|a| a.iso() == 1).count(), 4);
        for a in &all {
            for b in &all {
                assert!(all.contains(&a.mul(b)));
            }
        }
    }

    #[test]
    fn generators_are_members() {
        for n in 1..4 {
            for g in generators(n) {
                let again = PseudoOrthogonal::check_membership(g.matrix()).unwrap();
                assert_eq!(again.iso(), g.iso());
                assert!(g.mul(&g.inverse()).is_identity());
            }
        }
    }

    #[test]
    fn random_word_basics() {
        let gens = generators(2);
        let mut r = rng::seeded(5);
        assert!(random_word(&gens, 0, &mut r).unwrap().is_identity());
        let w1 = random_word(&gens, 9, &mut rng::seeded(11)).unwrap();
        let w2 = random_word(&gens, 9, &mut rng::seeded(11)).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(PseudoOrthogonal::check_membership(w1.matrix()).unwrap().iso(), w1.iso());
        assert_eq!(random_word(&[], 3, &mut r), Err(Error::EmptyGenerators));
    }
}

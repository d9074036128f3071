//! Test-side oracles. These recompute quantities along paths that share no
//! intermediate formulas with the library code they check.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use td2g::groups::{generators, PseudoOrthogonal};
use td2g::intlinalg::{Int, IntMat, IntVec, Phase, Rat};
use td2g::kinvariant::k_eval;
use td2g::twogroup::multiplicator_h;

pub type Small = Vec<Vec<i64>>;

pub fn small(m: &IntMat) -> Small {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| v.to_i64().expect("small entries")).collect()).collect()
}

pub fn small_mul(a: &Small, b: &Small) -> Small {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn small_t(a: &Small) -> Small {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j]).collect()).collect()
}

pub fn split(n: usize) -> Small {
    let mut m = vec![vec![0; 2 * n]; 2 * n];
    for i in 0..n {
        m[i][n + i] = 1;
        m[n + i][i] = 1;
    }
    m
}

/// Membership by direct evaluation of AᵀIA in machine integers.
pub fn oracle_iso(a: &Small) -> Option<i64> {
    let d = a.len();
    if !d.is_multiple_of(2) || a.iter().any(|r| r.len() != d) {
        return None;
    }
    let i = split(d / 2);
    let g = small_mul(&small_mul(&small_t(a), &i), a);
    [1, -1].into_iter().find(|&s| (0..d).all(|r| (0..d).all(|c| g[r][c] == s * i[r][c])))
}

/// Inverse of a 2×2 integer matrix with determinant ±1, by the explicit formula.
pub fn inverse_2x2(a: &Small) -> Small {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    assert!(det == 1 || det == -1);
    vec![vec![a[1][1] * det, -a[0][1] * det], vec![-a[1][0] * det, a[0][0] * det]]
}

/// Largest column sum of absolute values.
fn col_norm(m: &IntMat) -> Int {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].abs()).sum::<Int>()).max().unwrap_or_default()
}

fn diag_norm(h: &IntMat) -> Int {
    (0..h.rows()).map(|i| h[(i, i)].abs()).sum()
}

/// A bound on |m_i| read off the four β terms of ξ: each contributes a
/// linear part −½(Tᵀ H^diag)·x with T its transport matrix.
pub fn k_bound(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal) -> Int {
    let abc_inv = a.mul(b).mul(c).inverse();
    let ab_inv = a.mul(b).inverse();
    let terms = [
        (multiplicator_h(a, &b.mul(c)), abc_inv.matrix().clone()),
        (multiplicator_h(b, c), abc_inv.matrix().clone()),
        (multiplicator_h(a, b), ab_inv.matrix().clone()),
        (multiplicator_h(&a.mul(b), c), abc_inv.matrix().clone()),
    ];
    let twice: Int = terms.iter().map(|(h, t)| diag_norm(h) * col_norm(t)).sum();
    twice / 2 + 1
}

/// Recovers m from the β-path alone: ξ(e_i/N) = m_i/N mod 1 with N > 2·|m_i|.
pub fn recover_k(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal) -> IntVec {
    let dim = 2 * a.n();
    let n: Int = k_bound(a, b, c) * 2 + 1;
    (0..dim)
        .map(|i| {
            let x: Vec<Rat> =
                (0..dim).map(|j| if i == j { Rat::new(Int::one(), n.clone()) } else { Rat::zero() }).collect();
            k_eval(a, b, c, &x).unwrap().balanced_times(&n).expect("ξ is a character")
        })
        .collect()
}

pub fn phase_of(q: Rat) -> Phase {
    Phase::new(q)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// A generator word of length ≤ `max_len` at rank n.
pub fn word(n: usize, max_len: usize) -> impl Strategy<Value = PseudoOrthogonal> {
    let gens = generators(n);
    let k = gens.len();
    prop::collection::vec((0..k, any::<bool>()), 0..=max_len).prop_map(move |letters| {
        letters.iter().fold(PseudoOrthogonal::identity(n), |acc, &(i, inv)| {
            if inv {
                acc.mul(&gens[i].inverse())
            } else {
                acc.mul(&gens[i])
            }
        })
    })
}

pub fn rat_point(dim: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-60i64..=60, 1i64..=17), dim)
        .prop_map(|v| v.into_iter().map(|(p, q)| Rat::new(BigInt::from(p), BigInt::from(q))).collect())
}

pub fn int_point(dim: usize, bound: i64) -> impl Strategy<Value = Vec<Int>> {
    prop::collection::vec(-bound..=bound, dim).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

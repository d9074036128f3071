//! The k-invariant of 1 → ℤ^{2n} → 𝔸ₙ± → O±(n,n,ℤ) → 1 and its 2-torsion witness.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{gl_generators, random_word, so_generators, split_form, PseudoOrthogonal};
use crate::intlinalg::{diag_vec, vec_add, vec_scale, vec_sub, Int, IntMat, IntVec, Phase, Rat};
use crate::rng;
use crate::twogroup::{beta_multiplicator, lower};

fn same_rank(ps: &[&PseudoOrthogonal]) -> Result<()> {
    let n = ps[0].n();
    match ps.iter().find(|p| p.n() != n) {
        Some(p) => Err(Error::RankMismatch(n, p.n())),
        None => Ok(()),
    }
}

fn diag(m: &IntMat) -> IntVec {
    diag_vec(m).expect("square")
}

fn conj(m: &IntMat, p: &IntMat) -> IntMat {
    &(&p.transpose() * m) * p
}

/// Evaluates the phase ξ_{A,B,C}(x) through the multiplicators β.
pub fn k_eval(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal, x: &[Rat]) -> Result<Phase> {
    same_rank(&[a, b, c])?;
    if x.len() != 2 * a.n() {
        return Err(Error::Dimension(format!("point of length {} for rank {}", x.len(), a.n())));
    }
    let ab = a.mul(b);
    let bc = b.mul(c);
    let y = ab.mul(c).inverse().matrix().mul_ratvec(x);
    let cy = c.matrix().mul_ratvec(&y);
    let iso_a = Rat::from_integer(a.iso_int());
    let v = beta_multiplicator(a, &bc)?.eval_rat(&y) + iso_a * beta_multiplicator(b, c)?.eval_rat(&y)
        - beta_multiplicator(a, b)?.eval_rat(&cy)
        - beta_multiplicator(&ab, c)?.eval_rat(&y);
    Ok(Phase::new(v))
}

/// The closed-form 3-cocycle m_{A,B,C}, the character with ξ_{A,B,C}(x) = m·x:
/// m = ½(ABC)^{-T}[Cᵀ(BᵀL_A B)^diag + (CᵀL_AB C)^diag − iso(A)(CᵀL_B C)^diag − (CᵀBᵀL_A BC)^diag]
/// with L_A = (B_A)_low.
pub fn k_cocycle(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal) -> Result<IntVec> {
    same_rank(&[a, b, c])?;
    let (bm, cm) = (b.matrix(), c.matrix());
    let la = lower(a);
    let bc = &(bm * cm);
    let bracket = vec_sub(
        &vec_sub(
            &vec_add(&cm.transpose().mul_vec(&diag(&conj(&la, bm))), &diag(&conj(&lower(&a.mul(b)), cm))),
            &vec_scale(&diag(&conj(&lower(b), cm)), &a.iso_int()),
        ),
        &diag(&conj(&la, bc)),
    );
    let twice = a.mul(b).mul(c).inverse().matrix().transpose().mul_vec(&bracket);
    halve(twice, "m_{A,B,C}")
}

fn halve(v: IntVec, what: &str) -> Result<IntVec> {
    let two = Int::from(2);
    if v.iter().any(|e| !(e % &two).is_zero()) {
        return Err(Error::Integrality(format!("2·{what} = {v:?} has an odd entry")));
    }
    Ok(v.iter().map(|e| e / &two).collect())
}

/// The π₀-action on π₁ ≅ ℤ^{2n}: v ↦ IAIv.
pub fn twisted_action(a: &PseudoOrthogonal, v: &[Int]) -> IntVec {
    let i = split_form(a.n());
    i.mul_vec(&a.matrix().mul_vec(&i.mul_vec(v)))
}

/// (δm)_{A,B,C,D} under the twisted action.
pub fn cocycle_defect(
    a: &PseudoOrthogonal,
    b: &PseudoOrthogonal,
    c: &PseudoOrthogonal,
    d: &PseudoOrthogonal,
) -> Result<IntVec> {
    same_rank(&[a, b, c, d])?;
    let t1 = twisted_action(a, &k_cocycle(b, c, d)?);
    let t2 = k_cocycle(&a.mul(b), c, d)?;
    let t3 = k_cocycle(a, &b.mul(c), d)?;
    let t4 = k_cocycle(a, b, &c.mul(d))?;
    let t5 = k_cocycle(a, b, c)?;
    Ok(vec_add(&vec_sub(&vec_add(&vec_sub(&t1, &t2), &t3), &t4), &t5))
}

pub fn check_cocycle_identity(
    a: &PseudoOrthogonal,
    b: &PseudoOrthogonal,
    c: &PseudoOrthogonal,
    d: &PseudoOrthogonal,
) -> Result<bool> {
    Ok(cocycle_defect(a, b, c, d)?.iter().all(Zero::is_zero))
}

/// γ_{A,B} = −A^{-T}B^{-T}(Bᵀ(B_A)_low B)^diag.
pub fn gamma(a: &PseudoOrthogonal, b: &PseudoOrthogonal) -> Result<IntVec> {
    same_rank(&[a, b])?;
    let inner = diag(&conj(&lower(a), b.matrix()));
    let v = a.inverse().matrix().transpose().mul_vec(&b.inverse().matrix().transpose().mul_vec(&inner));
    Ok(v.iter().map(|e| -e).collect())
}

/// (δγ)_{A,B,C}.
pub fn gamma_coboundary(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal) -> Result<IntVec> {
    same_rank(&[a, b, c])?;
    let t1 = twisted_action(a, &gamma(b, c)?);
    let t2 = gamma(&a.mul(b), c)?;
    let t3 = gamma(a, &b.mul(c))?;
    let t4 = gamma(a, b)?;
    Ok(vec_sub(&vec_add(&vec_sub(&t1, &t2), &t3), &t4))
}

/// δγ = 2m.
pub fn check_two_torsion(a: &PseudoOrthogonal, b: &PseudoOrthogonal, c: &PseudoOrthogonal) -> Result<bool> {
    Ok(gamma_coboundary(a, b, c)? == vec_scale(&k_cocycle(a, b, c)?, &Int::from(2)))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subgroup {
    Gl,
    So,
    Z,
    V,
}

impl Subgroup {
    pub const ALL: [Subgroup; 4] = [Subgroup::Gl, Subgroup::So, Subgroup::Z, Subgroup::V];

    pub fn name(self) -> &'static str {
        match self {
            Subgroup::Gl => "GL",
            Subgroup::So => "SO",
            Subgroup::Z => "Z",
            Subgroup::V => "V",
        }
    }

    pub fn parse(s: &str) -> Option<Subgroup> {
        Subgroup::ALL.into_iter().find(|g| g.name().eq_ignore_ascii_case(s))
    }
}

/// All elements of Z = {E, I}.
pub fn z_elements(n: usize) -> Vec<PseudoOrthogonal> {
    vec![PseudoOrthogonal::identity(n), PseudoOrthogonal::flip(n)]
}

/// All 2ⁿ elements of V ≅ (ℤ/2)ⁿ, the products of distinct V_i.
pub fn v_elements(n: usize) -> Vec<PseudoOrthogonal> {
    (0..1usize << n)
        .map(|mask| {
            (0..n).filter(|i| mask >> i & 1 == 1).fold(PseudoOrthogonal::identity(n), |acc, i| {
                acc.mul(&PseudoOrthogonal::perm_v(n, i + 1).expect("index in range"))
            })
        })
        .collect()
}

pub const SUBGROUP_WORD_LENGTH: usize = 6;

/// V is enumerated exhaustively while 8ⁿ triples stay at or below this.
pub const EXHAUSTIVE_LIMIT: usize = 4096;

/// A triple with nonzero m, and that m.
pub type Counterexample = (PseudoOrthogonal, PseudoOrthogonal, PseudoOrthogonal, IntVec);

#[derive(Clone, Debug)]
pub struct VanishingOutcome {
    pub triples: usize,
    pub exhaustive: bool,
    pub counterexample: Option<Counterexample>,
}

fn scan<'a>(triples: impl Iterator<Item = [&'a PseudoOrthogonal; 3]>) -> Result<(usize, Option<Counterexample>)> {
    let mut count = 0;
    for [a, b, c] in triples {
        count += 1;
        let m = k_cocycle(a, b, c)?;
        if m.iter().any(|v| !v.is_zero()) {
            return Ok((count, Some((a.clone(), b.clone(), c.clone(), m))));
        }
    }
    Ok((count, None))
}

fn exhaustive(elems: &[PseudoOrthogonal]) -> Result<VanishingOutcome> {
    let it = elems.iter().flat_map(|a| elems.iter().flat_map(move |b| elems.iter().map(move |c| [a, b, c])));
    let (triples, counterexample) = scan(it)?;
    Ok(VanishingOutcome { triples, exhaustive: true, counterexample })
}

/// Checks m ≡ 0 on the tagged subgroup.
pub fn vanishing_on_subgroup(subgroup: Subgroup, n: usize, trials: usize, seed: u64) -> Result<VanishingOutcome> {
    match subgroup {
        Subgroup::Z => exhaustive(&z_elements(n)),
        Subgroup::V if 1usize.checked_shl(3 * n as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) => {
            exhaustive(&v_elements(n))
        }
        _ => {
            let gens: Vec<PseudoOrthogonal> = match subgroup {
                Subgroup::Gl => gl_generators(n).iter().map(PseudoOrthogonal::embed_gl).collect::<Result<_>>()?,
                Subgroup::So => so_generators(n).iter().map(PseudoOrthogonal::embed_so).collect::<Result<_>>()?,
                _ => (1..=n).map(|i| PseudoOrthogonal::perm_v(n, i)).collect::<Result<_>>()?,
            };
            if gens.is_empty() {
                // so(1,Z) is trivial
                return Ok(VanishingOutcome { triples: 0, exhaustive: true, counterexample: None });
            }
            let mut samples = Vec::with_capacity(trials);
            for t in 0..trials {
                let mut r = rng::stream(seed, t as u64);
                let w: Vec<PseudoOrthogonal> =
                    (0..3).map(|_| random_word(&gens, SUBGROUP_WORD_LENGTH, &mut r)).collect::<Result<_>>()?;
                samples.push(w);
            }
            let (triples, counterexample) = scan(samples.iter().map(|w| [&w[0], &w[1], &w[2]]))?;
            Ok(VanishingOutcome { triples, exhaustive: false, counterexample })
        }
    }
}

pub fn check_vanishing_on_subgroup(subgroup: Subgroup, n: usize, trials: usize, seed: u64) -> Result<bool> {
    Ok(vanishing_on_subgroup(subgroup, n, trials, seed)?.counterexample.is_none())
}

/// An element (u, A) of the extension of O±(n,n,ℤ) by (ℤ/2)^{2n} with cocycle γ mod 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoubleCoverElement {
    u: Vec<u8>,
    a: PseudoOrthogonal,
}

fn mod2(v: &Int) -> u8 {
    if (v % Int::from(2)).is_zero() {
        0
    } else {
        1
    }
}

impl DoubleCoverElement {
    pub fn new(u: &[Int], a: PseudoOrthogonal) -> Result<Self> {
        if u.len() != 2 * a.n() {
            return Err(Error::Dimension(format!("vector of length {} for rank {}", u.len(), a.n())));
        }
        Ok(DoubleCoverElement { u: u.iter().map(mod2).collect(), a })
    }

    pub fn unit(n: usize) -> Self {
        DoubleCoverElement { u: vec![0; 2 * n], a: PseudoOrthogonal::identity(n) }
    }

    pub fn u(&self) -> &[u8] {
        &self.u
    }

    pub fn a(&self) -> &PseudoOrthogonal {
        &self.a
    }

    /// (u₁ + IA₁I u₂ + γ̃_{A₁,A₂} mod 2, A₁A₂).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let u2: IntVec = other.u.iter().map(|&v| Int::from(v)).collect();
        let moved = twisted_action(&self.a, &u2);
        let g = gamma(&self.a, &other.a)?;
        let u = self.u.iter().zip(moved.iter().zip(&g)).map(|(&p, (q, r))| mod2(&(Int::from(p) + q + r))).collect();
        Ok(DoubleCoverElement { u, a: self.a.mul(&other.a) })
    }
}

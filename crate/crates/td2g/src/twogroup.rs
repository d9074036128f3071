//! The strict 2-group 𝔸ₙ± on its bilinear-phase skeleton.
//!
//! An object is a pair (A, X) with X − Xᵀ = B_A, standing for the phase
//! η(a,a′) = aᵀXa′ mod 1. A morphism (A, X) → (A, X′) is a phase map
//! β(x) = β_H(x) + ℓ·x with H = X − X′ and ℓ an integer character.
//!
//! Every object of the full 2-group is isomorphic to a section object S(A),
//! so this skeleton carries all of its computations. Between two bilinear
//! objects the defect of a crossed transformation is the symmetric bilinear
//! form H, and what remains after subtracting β_H is additive and vanishes on
//! ℤ^{2n}, i.e. an integer character. So (H, ℓ) loses nothing.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{j_form, PseudoOrthogonal};
use crate::intlinalg::{
    bilinear, diag_vec, dot_int_rat, strict_lower_split, vec_add, vec_neg, vec_scale, Int, IntMat, IntVec, Phase, Rat,
};

/// B_A = iso(A)·J − AᵀJA.
pub fn b_matrix(a: &PseudoOrthogonal) -> IntMat {
    let j = j_form(a.n());
    let m = a.matrix();
    &j.scale_i(a.iso()) - &(&(&m.transpose() * &j) * m)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionData {
    pub a: PseudoOrthogonal,
    pub b_a: IntMat,
    pub b_low: IntMat,
}

pub fn section_data(a: &PseudoOrthogonal) -> SectionData {
    let b_a = b_matrix(a);
    let b_low = strict_lower_split(&b_a).expect("B_A is skew for every A in O±(n,n,Z)");
    SectionData { a: a.clone(), b_a, b_low }
}

pub fn lower(a: &PseudoOrthogonal) -> IntMat {
    section_data(a).b_low
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Obj {
    g: PseudoOrthogonal,
    x: IntMat,
}

impl Obj {
    pub fn new(g: PseudoOrthogonal, x: IntMat) -> Result<Self> {
        let dim = 2 * g.n();
        if x.rows() != dim || x.cols() != dim {
            return Err(Error::InvalidObject(format!("eta matrix must be {dim}x{dim}")));
        }
        if &x - &x.transpose() != b_matrix(&g) {
            return Err(Error::InvalidObject("X − Xᵀ differs from B_A".into()));
        }
        Ok(Obj { g, x })
    }

    pub fn unit(n: usize) -> Self {
        Obj { g: PseudoOrthogonal::identity(n), x: IntMat::zeros(2 * n, 2 * n) }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn g(&self) -> &PseudoOrthogonal {
        &self.g
    }

    pub fn x(&self) -> &IntMat {
        &self.x
    }

    pub fn iso(&self) -> i32 {
        self.g.iso()
    }

    /// Forgets η.
    pub fn project(&self) -> &PseudoOrthogonal {
        &self.g
    }

    pub fn eta(&self, a: &[Rat], b: &[Rat]) -> Phase {
        Phase::new(bilinear(&self.x, a, b))
    }

    /// Bypasses validation; only for building negative controls.
    pub fn corrupted(g: PseudoOrthogonal, x: IntMat) -> Self {
        Obj { g, x }
    }

    pub fn product(&self, other: &Obj) -> Result<Obj> {
        if self.n() != other.n() {
            return Err(Error::RankMismatch(self.n(), other.n()));
        }
        let a2 = other.g.matrix();
        let x = &(&(&a2.transpose() * &self.x) * a2) + &other.x.scale_i(self.iso());
        Ok(Obj { g: self.g.mul(&other.g), x })
    }

    pub fn inverse(&self) -> Obj {
        let inv = self.g.inverse();
        let ai = inv.matrix();
        let x = (&(&ai.transpose() * &self.x) * ai).scale_i(-self.iso());
        Obj { g: inv, x }
    }
}

/// S(A) = (A, (B_A)_low).
pub fn section(a: &PseudoOrthogonal) -> Obj {
    Obj { g: a.clone(), x: lower(a) }
}

/// β_H(x) = ½xᵀHx − ½ΣH_ii x_i over ℚ.
pub fn beta_h(h: &IntMat, x: &[Rat]) -> Rat {
    let half = Rat::new(Int::one(), Int::from(2));
    let quad = bilinear(h, x, x);
    let lin = dot_int_rat(&diag_vec(h).expect("H is square"), x);
    (quad - lin) * half
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mor {
    src: Obj,
    dst: Obj,
    h: IntMat,
    lin: IntVec,
}

impl Mor {
    pub fn new(src: Obj, dst: Obj, lin: IntVec) -> Result<Self> {
        if src.g != dst.g {
            return Err(Error::InvalidMorphism("endpoints lie over different matrices".into()));
        }
        if lin.len() != 2 * src.n() {
            return Err(Error::InvalidMorphism("character has the wrong length".into()));
        }
        let h = &src.x - &dst.x;
        if !h.is_symmetric() {
            return Err(Error::InvalidMorphism("X_src − X_dst is not symmetric".into()));
        }
        Ok(Mor { src, dst, h, lin })
    }

    pub fn identity(o: &Obj) -> Self {
        let dim = 2 * o.n();
        Mor { src: o.clone(), dst: o.clone(), h: IntMat::zeros(dim, dim), lin: vec![Int::zero(); dim] }
    }

    /// Bypasses validation; only for building negative controls.
    pub fn corrupted(src: Obj, dst: Obj, h: IntMat, lin: IntVec) -> Self {
        Mor { src, dst, h, lin }
    }

    pub fn src(&self) -> &Obj {
        &self.src
    }

    pub fn dst(&self) -> &Obj {
        &self.dst
    }

    pub fn h(&self) -> &IntMat {
        &self.h
    }

    pub fn lin(&self) -> &IntVec {
        &self.lin
    }

    pub fn eval_rat(&self, x: &[Rat]) -> Rat {
        beta_h(&self.h, x) + dot_int_rat(&self.lin, x)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Phase> {
        if x.len() != self.lin.len() {
            return Err(Error::Dimension(format!("point of length {} for rank {}", x.len(), self.src.n())));
        }
        Ok(Phase::new(self.eval_rat(x)))
    }

    /// Pointwise sum: `self` then `next`.
    pub fn vcompose(&self, next: &Mor) -> Result<Mor> {
        if self.dst != next.src {
            return Err(Error::InvalidMorphism("target of the first is not the source of the second".into()));
        }
        Ok(Mor {
            src: self.src.clone(),
            dst: next.dst.clone(),
            h: &self.h + &next.h,
            lin: vec_add(&self.lin, &next.lin),
        })
    }

    pub fn inverse(&self) -> Mor {
        Mor { src: self.dst.clone(), dst: self.src.clone(), h: -&self.h, lin: vec_neg(&self.lin) }
    }

    /// (β₁·β₂)(x) = β₁(A₂x) + iso(A₁)β₂(x).
    pub fn hcompose(&self, other: &Mor) -> Result<Mor> {
        if self.src.n() != other.src.n() {
            return Err(Error::RankMismatch(self.src.n(), other.src.n()));
        }
        let a2 = other.src.g.matrix();
        let a2t = a2.transpose();
        let iso1 = self.src.g.iso_int();
        let moved = &(&a2t * &self.h) * a2;
        let h = &moved + &other.h.scale(&iso1);
        let twice_c: IntVec = diag_vec(&moved)
            .expect("square")
            .iter()
            .zip(a2t.mul_vec(&diag_vec(&self.h).expect("square")))
            .map(|(p, q)| p - q)
            .collect();
        let two = Int::from(2);
        if twice_c.iter().any(|v| !(v % &two).is_zero()) {
            return Err(Error::Integrality(format!("correction 2c = {twice_c:?} has an odd entry")));
        }
        let c: IntVec = twice_c.iter().map(|v| v / &two).collect();
        let lin = vec_add(&vec_add(&a2t.mul_vec(&self.lin), &vec_scale(&other.lin, &iso1)), &c);
        Ok(Mor { src: self.src.product(&other.src)?, dst: self.dst.product(&other.dst)?, h, lin })
    }

    pub fn is_endomorphism(&self) -> bool {
        self.src == self.dst
    }

    pub fn automorphism_to_int(&self) -> Result<IntVec> {
        if !self.h.is_zero() || !self.is_endomorphism() {
            return Err(Error::NotAutomorphism);
        }
        Ok(self.lin.clone())
    }

    pub fn automorphism_from_int(o: &Obj, v: IntVec) -> Result<Mor> {
        Mor::new(o.clone(), o.clone(), v)
    }
}

/// X_{A,B} = Bᵀ(B_A)_low B + iso(A)(B_B)_low, the η-matrix of S(A)·S(B).
pub fn multiplicator_x(a: &PseudoOrthogonal, b: &PseudoOrthogonal) -> IntMat {
    let bm = b.matrix();
    &(&(&bm.transpose() * &lower(a)) * bm) + &lower(b).scale_i(a.iso())
}

/// H_{A,B} = X_{A,B} − (B_{AB})_low.
pub fn multiplicator_h(a: &PseudoOrthogonal, b: &PseudoOrthogonal) -> IntMat {
    &multiplicator_x(a, b) - &lower(&a.mul(b))
}

/// β_{A,B}: S(A)·S(B) → S(AB).
pub fn beta_multiplicator(a: &PseudoOrthogonal, b: &PseudoOrthogonal) -> Result<Mor> {
    if a.n() != b.n() {
        return Err(Error::RankMismatch(a.n(), b.n()));
    }
    let src = section(a).product(&section(b))?;
    let dst = section(&a.mul(b));
    let h = multiplicator_h(a, b);
    if !h.is_symmetric() {
        return Err(Error::Integrality("H_{A,B} is not symmetric".into()));
    }
    Mor::new(src, dst, vec![Int::zero(); 2 * a.n()])
}

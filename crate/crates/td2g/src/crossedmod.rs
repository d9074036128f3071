//! The crossed module TD_n and 𝔸ₙ± objects viewed as crossed intertwiners.
//!
//! G = ℝ^{2n} (sampled at rational points), H = ℤ^{2n} × U(1),
//! t(m, s) = m and α(a, (m, s)) = (m, s − [a, m]) with [a, b] = aᵀJb.

use crate::error::{violation, Violation};
use crate::groups::j_form;
use crate::intlinalg::{bilinear, to_rat, vec_add, vec_sub, IntMat, IntVec, Phase, Rat, RatVec};
use crate::rng::{self, Rng};
use crate::twogroup::{Mor, Obj};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TDHElement {
    pub m: IntVec,
    pub s: Phase,
}

impl TDHElement {
    pub fn compose(&self, other: &TDHElement) -> TDHElement {
        TDHElement { m: vec_add(&self.m, &other.m), s: self.s.clone() + other.s.clone() }
    }
}

/// The arrow (h, g): g → t(h) + g of the action groupoid H ⋉ G.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TDMorphism {
    pub h: TDHElement,
    pub g: RatVec,
}

impl TDMorphism {
    pub fn source(&self) -> RatVec {
        self.g.clone()
    }

    pub fn target(&self) -> RatVec {
        vec_add(&to_rat(&self.h.m), &self.g)
    }

    /// `next ∘ self`, defined when next starts where self ends.
    pub fn then(&self, next: &TDMorphism) -> Option<TDMorphism> {
        (next.g == self.target()).then(|| TDMorphism { h: next.h.compose(&self.h), g: self.g.clone() })
    }
}

pub fn bracket(a: &[Rat], b: &[Rat]) -> Rat {
    bilinear(&j_form(a.len() / 2), a, b)
}

pub fn td_alpha(a: &[Rat], h: &TDHElement) -> TDHElement {
    TDHElement { m: h.m.clone(), s: h.s.clone() - Phase::new(bracket(a, &to_rat(&h.m))) }
}

/// (φ_A, f_A, η) with φ_A(a) = Aa, f_A(m, s) = (Am, iso(A)s), η(a,a′) = aᵀXa′.
#[derive(Clone, Debug)]
pub struct CrossedIntertwiner {
    a: IntMat,
    iso: i32,
    x: IntMat,
}

impl CrossedIntertwiner {
    pub fn phi(&self, g: &[Rat]) -> RatVec {
        self.a.mul_ratvec(g)
    }

    pub fn f(&self, h: &TDHElement) -> TDHElement {
        let s = if self.iso == 1 { h.s.clone() } else { -h.s.clone() };
        TDHElement { m: self.a.mul_vec(&h.m), s }
    }

    pub fn eta(&self, g: &[Rat], g2: &[Rat]) -> Phase {
        Phase::new(bilinear(&self.x, g, g2))
    }
}

pub fn ci_from_obj(o: &Obj) -> CrossedIntertwiner {
    CrossedIntertwiner { a: o.g().matrix().clone(), iso: o.iso(), x: o.x().clone() }
}

fn lattice_point(r: &mut Rng, dim: usize) -> IntVec {
    rng::intvec(r, dim, 9)
}

/// CI1–CI4 at `samples` random points, then the closed form X − Xᵀ = B_A.
pub fn check_ci_axioms(o: &Obj, samples: usize, seed: u64) -> Result<(), Violation> {
    check_ci_axioms_sampled(o, samples, seed)?;
    if Obj::new(o.g().clone(), o.x().clone()).is_err() {
        return Err(violation("CI3", "closed form X − Xᵀ = B_A fails".into()));
    }
    Ok(())
}

pub fn check_ci_axioms_sampled(o: &Obj, samples: usize, seed: u64) -> Result<(), Violation> {
    let ci = ci_from_obj(o);
    let dim = 2 * o.n();
    let mut r = rng::seeded(seed);
    for _ in 0..samples {
        let m = lattice_point(&mut r, dim);
        let m2 = lattice_point(&mut r, dim);
        let h = TDHElement { m: m.clone(), s: Phase::new(rng::rational(&mut r, 40, 13)) };
        // CI1: φ(t(h)) = t(f(h))
        if ci.phi(&to_rat(&m)) != to_rat(&ci.f(&h).m) {
            return Err(violation("CI1", format!("m = {m:?}")));
        }
        // CI2: η(t(h), t(h′)) = 0
        if !ci.eta(&to_rat(&m), &to_rat(&m2)).is_zero() {
            return Err(violation("CI2", format!("m = {m:?}, m' = {m2:?}")));
        }
        // CI3: η(g, t(h)−g) + f(α(g,h)) = α′(φg, η(t(h)−g, g)) + α′(φg, f(h))
        let g = rng::ratvec(&mut r, dim);
        let mg = vec_sub(&to_rat(&m), &g);
        let left = ci.f(&td_alpha(&g, &h));
        let right = td_alpha(&ci.phi(&g), &ci.f(&h));
        let ls = ci.eta(&g, &mg) + left.s;
        let rs = ci.eta(&mg, &g) + right.s;
        if left.m != right.m || ls != rs {
            return Err(violation("CI3", format!("g = {g:?}, m = {m:?}")));
        }
        // CI4: η(g,g′) + η(g+g′,g″) = η(g′,g″) + η(g,g′+g″)
        let g2 = rng::ratvec(&mut r, dim);
        let g3 = rng::ratvec(&mut r, dim);
        let lhs = ci.eta(&g, &g2) + ci.eta(&vec_add(&g, &g2), &g3);
        let rhs = ci.eta(&g2, &g3) + ci.eta(&g, &vec_add(&g2, &g3));
        if lhs != rhs {
            return Err(violation("CI4", format!("g = {g:?}, g' = {g2:?}, g'' = {g3:?}")));
        }
    }
    Ok(())
}

/// CT1–CT2 for the crossed transformation carried by `m`.
pub fn check_ct_axioms(m: &Mor, samples: usize, seed: u64) -> Result<(), Violation> {
    let src = ci_from_obj(m.src());
    let dst = ci_from_obj(m.dst());
    let dim = 2 * m.src().n();
    let mut r = rng::seeded(seed);
    let beta = |x: &[Rat]| Phase::new(m.eval_rat(x));
    for _ in 0..samples {
        // CT1: β(t(h)) + f(h) = f′(h)
        let lat = lattice_point(&mut r, dim);
        let h = TDHElement { m: lat.clone(), s: Phase::new(rng::rational(&mut r, 40, 13)) };
        let lhs = src.f(&h);
        let rhs = dst.f(&h);
        if lhs.m != rhs.m || beta(&to_rat(&lat)) + lhs.s != rhs.s {
            return Err(violation("CT1", format!("m = {lat:?}")));
        }
        // CT2: β(g₁) + β(g₂) + η(g₁,g₂) = η′(g₁,g₂) + β(g₁+g₂)
        let g1 = rng::ratvec(&mut r, dim);
        let g2 = rng::ratvec(&mut r, dim);
        let lhs = beta(&g1) + beta(&g2) + src.eta(&g1, &g2);
        let rhs = dst.eta(&g1, &g2) + beta(&vec_add(&g1, &g2));
        if lhs != rhs {
            return Err(violation("CT2", format!("g1 = {g1:?}, g2 = {g2:?}")));
        }
    }
    Ok(())
}

/// F(h, g) = ((Am, iso(A)s − η(m, g)), Ag).
pub fn functor_eval(o: &Obj, mor: &TDMorphism) -> TDMorphism {
    let ci = ci_from_obj(o);
    let fh = ci.f(&mor.h);
    let s = fh.s - ci.eta(&to_rat(&mor.h.m), &mor.g);
    TDMorphism { h: TDHElement { m: fh.m, s }, g: ci.phi(&mor.g) }
}

/// F_{o₁·o₂} = F_{o₁} ∘ F_{o₂} on morphisms, and F(k ∘ h) = F(k) ∘ F(h).
pub fn check_functor_composition(o1: &Obj, o2: &Obj, samples: usize, seed: u64) -> Result<(), Violation> {
    let prod = o1.product(o2).map_err(|e| violation("composition", format!("product failed: {e}")))?;
    let dim = 2 * o1.n();
    let mut r = rng::seeded(seed);
    for _ in 0..samples {
        let h = random_td_morphism(&mut r, dim);
        if functor_eval(&prod, &h) != functor_eval(o1, &functor_eval(o2, &h)) {
            return Err(violation("functor of a composite", format!("at {h:?}")));
        }
        let k = random_follower(&mut r, &h);
        let composite = h.then(&k).expect("k starts where h ends");
        let (fh, fk) = (functor_eval(o1, &h), functor_eval(o1, &k));
        if fh.then(&fk) != Some(functor_eval(o1, &composite)) {
            return Err(violation("functoriality", format!("at {h:?} then {k:?}")));
        }
    }
    Ok(())
}

pub fn random_td_morphism(r: &mut Rng, dim: usize) -> TDMorphism {
    TDMorphism {
        h: TDHElement { m: lattice_point(r, dim), s: Phase::new(rng::rational(r, 40, 13)) },
        g: rng::ratvec(r, dim),
    }
}

/// A morphism starting at the target of `first`.
pub fn random_follower(r: &mut Rng, first: &TDMorphism) -> TDMorphism {
    let dim = first.g.len();
    TDMorphism {
        h: TDHElement { m: lattice_point(r, dim), s: Phase::new(rng::rational(r, 40, 13)) },
        g: first.target(),
    }
}

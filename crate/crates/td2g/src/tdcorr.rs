//! T-duality cocycles on a discrete nerve, and the action of 𝔸ₙ± on them.
//!
//! A cover {U_i} is replaced by finitely many points, each remembering the
//! chart indices that contain it. Transition data a, â and t live on
//! (point, index tuple); the integer data m, m̂ are global per index triple.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{violation, Error, Result, Violation};
use crate::groups::PseudoOrthogonal;
use crate::intlinalg::{
    bilinear, dot_int_rat, dot_rat, strict_lower_split, to_rat, unimodular_inverse, vec_add, vec_neg, vec_sub, Int,
    IntMat, IntVec, Phase, Rat, RatVec,
};
use crate::rng::{self, Rng};
use crate::twogroup::{section, Mor, Obj};

pub type Key2 = (usize, usize, usize);
pub type Key3 = (usize, usize, usize);
pub type Key4 = (usize, usize, usize, usize);

/// Points with the chart indices covering them.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NerveModel {
    cover: BTreeMap<usize, BTreeSet<usize>>,
}

impl NerveModel {
    pub fn new(cover: BTreeMap<usize, BTreeSet<usize>>) -> Result<Self> {
        if let Some((p, _)) = cover.iter().find(|(_, s)| s.is_empty()) {
            return Err(Error::InvalidCocycle(format!("point {p} lies in no chart")));
        }
        Ok(NerveModel { cover })
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.cover.keys().copied()
    }

    pub fn charts(&self, p: usize) -> Vec<usize> {
        self.cover.get(&p).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    pub fn covers(&self, p: usize, idx: &[usize]) -> bool {
        self.cover.get(&p).is_some_and(|s| idx.iter().all(|i| s.contains(i)))
    }

    pub fn cover_map(&self) -> &BTreeMap<usize, BTreeSet<usize>> {
        &self.cover
    }

    /// All index k-tuples (with repetition) over the charts at `p`.
    pub fn tuples(&self, p: usize, k: usize) -> Vec<Vec<usize>> {
        let charts = self.charts(p);
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out.into_iter().flat_map(|t| charts.iter().map(move |&c| [t.clone(), vec![c]].concat())).collect();
        }
        out
    }

    /// Index triples lying jointly over some point.
    pub fn covered_triples(&self) -> BTreeSet<Key3> {
        self.points().flat_map(|p| self.tuples(p, 3)).map(|t| (t[0], t[1], t[2])).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TDCocycle {
    pub n: usize,
    pub nerve: NerveModel,
    pub a: BTreeMap<Key2, RatVec>,
    pub ahat: BTreeMap<Key2, RatVec>,
    pub m: BTreeMap<Key3, IntVec>,
    pub mhat: BTreeMap<Key3, IntVec>,
    pub t: BTreeMap<Key4, Phase>,
}

fn get<'a, K: Ord + std::fmt::Debug, V>(map: &'a BTreeMap<K, V>, k: K, what: &str) -> Result<&'a V> {
    match map.get(&k) {
        Some(v) => Ok(v),
        None => Err(Error::InvalidCocycle(format!("{what} missing at {k:?}"))),
    }
}

impl TDCocycle {
    pub fn zero(n: usize, nerve: NerveModel) -> Self {
        let mut c = TDCocycle {
            n,
            nerve,
            a: BTreeMap::new(),
            ahat: BTreeMap::new(),
            m: BTreeMap::new(),
            mhat: BTreeMap::new(),
            t: BTreeMap::new(),
        };
        for p in c.nerve.points().collect::<Vec<_>>() {
            for ij in c.nerve.tuples(p, 2) {
                c.a.insert((p, ij[0], ij[1]), vec![Rat::zero(); n]);
                c.ahat.insert((p, ij[0], ij[1]), vec![Rat::zero(); n]);
            }
            for ijk in c.nerve.tuples(p, 3) {
                c.t.insert((p, ijk[0], ijk[1], ijk[2]), Phase::zero());
            }
        }
        for k in c.nerve.covered_triples() {
            c.m.insert(k, vec![Int::zero(); n]);
            c.mhat.insert(k, vec![Int::zero(); n]);
        }
        c
    }

    pub fn a(&self, p: usize, i: usize, j: usize) -> Result<&RatVec> {
        get(&self.a, (p, i, j), "a")
    }

    pub fn ahat(&self, p: usize, i: usize, j: usize) -> Result<&RatVec> {
        get(&self.ahat, (p, i, j), "ahat")
    }

    pub fn m(&self, i: usize, j: usize, k: usize) -> Result<&IntVec> {
        get(&self.m, (i, j, k), "m")
    }

    pub fn mhat(&self, i: usize, j: usize, k: usize) -> Result<&IntVec> {
        get(&self.mhat, (i, j, k), "mhat")
    }

    pub fn t(&self, p: usize, i: usize, j: usize, k: usize) -> Result<&Phase> {
        get(&self.t, (p, i, j, k), "t")
    }

    /// a_ij ⊕ â_ij.
    pub fn u(&self, p: usize, i: usize, j: usize) -> Result<RatVec> {
        Ok([self.a(p, i, j)?.clone(), self.ahat(p, i, j)?.clone()].concat())
    }

    /// m_ijk ⊕ m̂_ijk.
    pub fn big_m(&self, i: usize, j: usize, k: usize) -> Result<IntVec> {
        Ok([self.m(i, j, k)?.clone(), self.mhat(i, j, k)?.clone()].concat())
    }

    /// Every required entry is present with the right length.
    pub fn check_shape(&self) -> std::result::Result<(), Violation> {
        let dims_ok = self.a.values().chain(self.ahat.values()).all(|v| v.len() == self.n)
            && self.m.values().chain(self.mhat.values()).all(|v| v.len() == self.n);
        if !dims_ok {
            return Err(violation("shape", format!("vector of the wrong length for n = {}", self.n)));
        }
        for p in self.nerve.points() {
            for ij in self.nerve.tuples(p, 2) {
                if self.a(p, ij[0], ij[1]).is_err() || self.ahat(p, ij[0], ij[1]).is_err() {
                    return Err(violation("shape", format!("a or ahat missing at point {p}, indices {ij:?}")));
                }
            }
            for ijk in self.nerve.tuples(p, 3) {
                let (i, j, k) = (ijk[0], ijk[1], ijk[2]);
                if self.t(p, i, j, k).is_err() || self.m(i, j, k).is_err() || self.mhat(i, j, k).is_err() {
                    return Err(violation("shape", format!("m, mhat or t missing at point {p}, indices {ijk:?}")));
                }
            }
        }
        Ok(())
    }

    /// The five cocycle conditions at every point and index tuple.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.check_shape()?;
        let shape = |e: Error| violation("shape", e.to_string());
        for p in self.nerve.points() {
            for ijk in self.nerve.tuples(p, 3) {
                let (i, j, k) = (ijk[0], ijk[1], ijk[2]);
                let lhs = self.a(p, i, k).map_err(shape)?;
                let rhs = vec_add(
                    &vec_add(&to_rat(self.m(i, j, k).map_err(shape)?), self.a(p, j, k).map_err(shape)?),
                    self.a(p, i, j).map_err(shape)?,
                );
                if *lhs != rhs {
                    return Err(violation("a_ik = m_ijk + a_jk + a_ij", format!("point {p}, indices {ijk:?}")));
                }
                let lhs = self.ahat(p, i, k).map_err(shape)?;
                let rhs = vec_add(
                    &vec_add(&to_rat(self.mhat(i, j, k).map_err(shape)?), self.ahat(p, j, k).map_err(shape)?),
                    self.ahat(p, i, j).map_err(shape)?,
                );
                if *lhs != rhs {
                    return Err(violation(
                        "ahat_ik = mhat_ijk + ahat_jk + ahat_ij",
                        format!("point {p}, indices {ijk:?}"),
                    ));
                }
            }
            for q in self.nerve.tuples(p, 4) {
                let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
                let m = |a, b, c| self.m(a, b, c).cloned().map_err(shape);
                let mh = |a, b, c| self.mhat(a, b, c).cloned().map_err(shape);
                if vec_add(&m(i, k, l)?, &m(i, j, k)?) != vec_add(&m(i, j, l)?, &m(j, k, l)?) {
                    return Err(violation("m_ikl + m_ijk = m_ijl + m_jkl", format!("point {p}, indices {q:?}")));
                }
                if vec_add(&mh(i, k, l)?, &mh(i, j, k)?) != vec_add(&mh(i, j, l)?, &mh(j, k, l)?) {
                    return Err(violation(
                        "mhat_ikl + mhat_ijk = mhat_ijl + mhat_jkl",
                        format!("point {p}, indices {q:?}"),
                    ));
                }
                let t = |a, b, c| self.t(p, a, b, c).cloned().map_err(shape);
                let twist = Phase::new(dot_int_rat(&m(i, j, k)?, self.ahat(p, k, l).map_err(shape)?));
                if t(i, k, l)? + t(i, j, k)? - twist != t(i, j, l)? + t(j, k, l)? {
                    return Err(violation(
                        "t_ikl + t_ijk - m_ijk.ahat_kl = t_ijl + t_jkl",
                        format!("point {p}, indices {q:?}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// A random valid cocycle built from cochains.
///
/// a_ij = ã_j − ã_i + c_ij with free rational lifts ã and a global
/// antisymmetric integer c, so m_ijk = c_ik − c_ij − c_jk; likewise for the
/// hat side with ĉ. Then t_ijk = c_ij·â_jk + s_jk − s_ik + s_ij for a random
/// antisymmetric U(1)-valued s solves the fifth condition. The result is
/// antisymmetric in a, â, m, m̂ with t_iik = t_ikk = 0; a fully alternating t
/// does not exist once m ≠ 0.
pub fn random_cocycle(n: usize, points: usize, charts: usize, r: &mut Rng) -> TDCocycle {
    let mut cover = BTreeMap::new();
    for p in 0..points {
        let mut s: BTreeSet<usize> = (0..charts).filter(|_| rng::below(r, 3) != 0).collect();
        if p == 0 || s.is_empty() {
            s = (0..charts).collect();
        }
        cover.insert(p, s);
    }
    let nerve = NerveModel::new(cover).expect("every point is covered");
    let cochain = |r: &mut Rng| {
        let mut c: BTreeMap<(usize, usize), IntVec> = BTreeMap::new();
        for i in 0..charts {
            c.insert((i, i), vec![Int::zero(); n]);
            for j in i + 1..charts {
                let v = rng::intvec(r, n, 3);
                c.insert((j, i), vec_neg(&v));
                c.insert((i, j), v);
            }
        }
        c
    };
    let c = cochain(r);
    let ch = cochain(r);
    let mut out = TDCocycle::zero(n, nerve.clone());
    for p in nerve.points() {
        let cs = nerve.charts(p);
        let lift: BTreeMap<usize, RatVec> = cs.iter().map(|&i| (i, rng::ratvec(r, n))).collect();
        let lifth: BTreeMap<usize, RatVec> = cs.iter().map(|&i| (i, rng::ratvec(r, n))).collect();
        let mut s: BTreeMap<(usize, usize), Phase> = BTreeMap::new();
        for &i in &cs {
            s.insert((i, i), Phase::zero());
            for &j in cs.iter().filter(|&&j| j > i) {
                let v = Phase::new(rng::rational(r, 40, 13));
                s.insert((j, i), -v.clone());
                s.insert((i, j), v);
            }
        }
        for ij in nerve.tuples(p, 2) {
            let (i, j) = (ij[0], ij[1]);
            out.a.insert((p, i, j), vec_add(&vec_sub(&lift[&j], &lift[&i]), &to_rat(&c[&(i, j)])));
            out.ahat.insert((p, i, j), vec_add(&vec_sub(&lifth[&j], &lifth[&i]), &to_rat(&ch[&(i, j)])));
        }
        for ijk in nerve.tuples(p, 3) {
            let (i, j, k) = (ijk[0], ijk[1], ijk[2]);
            let twist = Phase::new(dot_int_rat(&c[&(i, j)], &out.ahat[&(p, j, k)]));
            let ds = s[&(j, k)].clone() - s[&(i, k)].clone() + s[&(i, j)].clone();
            out.t.insert((p, i, j, k), twist + ds);
        }
    }
    for (i, j, k) in nerve.covered_triples() {
        out.m.insert((i, j, k), vec_sub(&vec_sub(&c[&(i, k)], &c[&(i, j)]), &c[&(j, k)]));
        out.mhat.insert((i, j, k), vec_sub(&vec_sub(&ch[&(i, k)], &ch[&(i, j)]), &ch[&(j, k)]));
    }
    out
}

fn split(v: &[Rat], n: usize) -> (RatVec, RatVec) {
    (v[..n].to_vec(), v[n..].to_vec())
}

fn split_int(v: &[Int], n: usize) -> (IntVec, IntVec) {
    (v[..n].to_vec(), v[n..].to_vec())
}

/// The transformed cocycle: u′ = Au, M′ = AM and
/// t′_ijk = iso(A)t_ijk − η(M_ijk, u_jk + u_ij) − η(u_jk, u_ij), with u = a ⊕ â, M = m ⊕ m̂.
pub fn act(o: &Obj, c: &TDCocycle) -> Result<TDCocycle> {
    if o.n() != c.n {
        return Err(Error::RankMismatch(o.n(), c.n));
    }
    let n = c.n;
    let am = o.g().matrix();
    let mut out = c.clone();
    for &(p, i, j) in c.a.keys() {
        let (a2, ah2) = split(&am.mul_ratvec(&c.u(p, i, j)?), n);
        out.a.insert((p, i, j), a2);
        out.ahat.insert((p, i, j), ah2);
    }
    for &(i, j, k) in c.m.keys() {
        let (m2, mh2) = split_int(&am.mul_vec(&c.big_m(i, j, k)?), n);
        out.m.insert((i, j, k), m2);
        out.mhat.insert((i, j, k), mh2);
    }
    for (&(p, i, j, k), t) in c.t.iter() {
        let big_m = to_rat(&c.big_m(i, j, k)?);
        let ujk = c.u(p, j, k)?;
        let uij = c.u(p, i, j)?;
        let base = if o.iso() == 1 { t.clone() } else { -t.clone() };
        let t2 = base - o.eta(&big_m, &vec_add(&ujk, &uij)) - o.eta(&ujk, &uij);
        out.t.insert((p, i, j, k), t2);
    }
    Ok(out)
}

fn covered(c: &TDCocycle, p: usize, idx: &[usize]) -> Result<()> {
    if c.nerve.covers(p, idx) {
        Ok(())
    } else {
        Err(Error::BadIndices(idx.to_vec(), p))
    }
}

/// β_ijk(x, a) = −t_ijk − a·m̂_ijk + a_ij·â_jk.
pub fn gerbe_left(c: &TDCocycle, p: usize, (i, j, k): (usize, usize, usize), x: &[Rat]) -> Result<Phase> {
    covered(c, p, &[i, j, k])?;
    let v = dot_rat(c.a(p, i, j)?, c.ahat(p, j, k)?) - dot_int_rat(c.mhat(i, j, k)?, x);
    Ok(Phase::new(v) - c.t(p, i, j, k)?.clone())
}

/// β̂_ijk(x, â) = −t_ijk − m_ijk·(â_ik + â).
pub fn gerbe_right(c: &TDCocycle, p: usize, (i, j, k): (usize, usize, usize), xh: &[Rat]) -> Result<Phase> {
    covered(c, p, &[i, j, k])?;
    let v = -dot_int_rat(c.m(i, j, k)?, &vec_add(c.ahat(p, i, k)?, xh));
    Ok(Phase::new(v) - c.t(p, i, j, k)?.clone())
}

/// ξ_ij(x, a, â, m₂, m̂₂) = −m₂·â − â_ij·m₂ − â_ij·a.
pub fn corr_cochain(
    c: &TDCocycle,
    p: usize,
    (i, j): (usize, usize),
    x: &[Rat],
    xh: &[Rat],
    m2: &[Int],
    _mh2: &[Int],
) -> Result<Phase> {
    covered(c, p, &[i, j])?;
    let ah = c.ahat(p, i, j)?;
    Ok(Phase::new(-dot_int_rat(m2, xh) - dot_int_rat(m2, ah) - dot_rat(ah, x)))
}

/// A sampled evaluation site: a point, an index triple over it and fiber coordinates.
struct Site {
    p: usize,
    ijk: (usize, usize, usize),
    x: RatVec,
    xh: RatVec,
}

fn sites(c: &TDCocycle, samples: usize, seed: u64) -> Vec<Site> {
    let mut r = rng::seeded(seed);
    let points: Vec<usize> = c.nerve.points().collect();
    (0..samples)
        .map(|_| {
            let p = points[rng::below(&mut r, points.len())];
            let cs = c.nerve.charts(p);
            let mut pick = || cs[rng::below(&mut r, cs.len())];
            let ijk = (pick(), pick(), pick());
            Site { p, ijk, x: rng::ratvec(&mut r, c.n), xh: rng::ratvec(&mut r, c.n) }
        })
        .collect()
}

fn require(ok: bool, what: &'static str, detail: impl FnOnce() -> String) -> std::result::Result<(), Violation> {
    if ok {
        Ok(())
    } else {
        Err(violation(what, detail()))
    }
}

fn internal(e: Error) -> Violation {
    violation("evaluation", e.to_string())
}

/// β_jkl(x + a_ij) − β_ikl(x) + β_ijl(x) − β_ijk(x) = 0 and its hat analogue,
/// at one random fiber point per index quadruple plus `samples` extra ones.
pub fn check_gerbe_cocycles(c: &TDCocycle, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    let mut r = rng::seeded(seed);
    let mut quads: Vec<(usize, Vec<usize>)> =
        c.nerve.points().flat_map(|p| c.nerve.tuples(p, 4).into_iter().map(move |q| (p, q))).collect();
    if quads.is_empty() {
        return Ok(());
    }
    for _ in 0..samples {
        let extra = quads[rng::below(&mut r, quads.len())].clone();
        quads.push(extra);
    }
    for (p, q) in quads {
        let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
        let x = rng::ratvec(&mut r, c.n);
        let s = |ijk, x: &[Rat]| gerbe_left(c, p, ijk, x).map_err(internal);
        let shifted = vec_add(&x, c.a(p, i, j).map_err(internal)?);
        let v = s((j, k, l), &shifted)? - s((i, k, l), &x)? + s((i, j, l), &x)? - s((i, j, k), &x)?;
        require(v.is_zero(), "left gerbe cocycle", || format!("point {p}, indices {q:?}, x = {x:?}"))?;
        let s = |ijk, x: &[Rat]| gerbe_right(c, p, ijk, x).map_err(internal);
        let shifted = vec_add(&x, c.ahat(p, i, j).map_err(internal)?);
        let v = s((j, k, l), &shifted)? - s((i, k, l), &x)? + s((i, j, l), &x)? - s((i, j, k), &x)?;
        require(v.is_zero(), "right gerbe cocycle", || format!("point {p}, indices {q:?}, x = {x:?}"))?;
    }
    Ok(())
}

/// β̂_ijk(â) − β_ijk(a) = ξ_ij + ξ_jk∘pr₂₃ − ξ_ik on the triple fiber product.
///
/// A point of Z^{[3]} over (i, j, k) is (x, a, â, m₂, m̂₂, m₃, m̂₃); its
/// pair projections are (i,j; a, â, m₂, m̂₂), (i,k; a, â, m₃, m̂₃) and
/// (j,k; a + a_ij + m₂, â + â_ij + m̂₂, m_ijk + m₃ − m₂, m̂_ijk + m̂₃ − m̂₂).
pub fn check_correspondence(c: &TDCocycle, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    let mut r = rng::seeded(seed ^ 0x5EED);
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let n = c.n;
        let (m2, mh2, m3, mh3) = (
            rng::intvec(&mut r, n, 4),
            rng::intvec(&mut r, n, 4),
            rng::intvec(&mut r, n, 4),
            rng::intvec(&mut r, n, 4),
        );
        let lhs = gerbe_right(c, p, (i, j, k), &s.xh).map_err(internal)?
            - gerbe_left(c, p, (i, j, k), &s.x).map_err(internal)?;
        let x23 = vec_add(&vec_add(&s.x, c.a(p, i, j).map_err(internal)?), &to_rat(&m2));
        let xh23 = vec_add(&vec_add(&s.xh, c.ahat(p, i, j).map_err(internal)?), &to_rat(&mh2));
        let m23 = vec_sub(&vec_add(c.m(i, j, k).map_err(internal)?, &m3), &m2);
        let mh23 = vec_sub(&vec_add(c.mhat(i, j, k).map_err(internal)?, &mh3), &mh2);
        let rhs = corr_cochain(c, p, (i, j), &s.x, &s.xh, &m2, &mh2).map_err(internal)?
            + corr_cochain(c, p, (j, k), &x23, &xh23, &m23, &mh23).map_err(internal)?
            - corr_cochain(c, p, (i, k), &s.x, &s.xh, &m3, &mh3).map_err(internal)?;
        require(lhs == rhs, "correspondence identity", || format!("point {p}, indices {:?}", s.ijk))?;
        // single chart: ξ_ii reduces to the Poincaré cocycle −m₂·â
        let xi = corr_cochain(c, p, (i, i), &s.x, &s.xh, &m2, &mh2).map_err(internal)?;
        require(xi == Phase::new(-dot_int_rat(&m2, &s.xh)), "Poincare reduction", || format!("point {p}, chart {i}"))?;
    }
    Ok(())
}

/// Component formulas and gerbe exchange for the action of S(I).
pub fn check_flip_identities(c: &TDCocycle, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    let acted = act(&section(&PseudoOrthogonal::flip(c.n)), c).map_err(internal)?;
    check_flip_identities_on(c, &acted, samples, seed)
}

pub fn check_flip_identities_on(
    c: &TDCocycle,
    d: &TDCocycle,
    samples: usize,
    seed: u64,
) -> std::result::Result<(), Violation> {
    let e = internal;
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let loc = || format!("point {p}, indices {:?}", s.ijk);
        require(
            d.a(p, i, j).map_err(e)? == c.ahat(p, i, j).map_err(e)?
                && d.ahat(p, i, j).map_err(e)? == c.a(p, i, j).map_err(e)?
                && d.m(i, j, k).map_err(e)? == c.mhat(i, j, k).map_err(e)?
                && d.mhat(i, j, k).map_err(e)? == c.m(i, j, k).map_err(e)?,
            "flip exchanges a and ahat",
            loc,
        )?;
        let t = c.t(p, i, j, k).map_err(e)?.clone()
            - Phase::new(dot_int_rat(c.mhat(i, j, k).map_err(e)?, c.a(p, i, k).map_err(e)?))
            - Phase::new(dot_rat(c.ahat(p, j, k).map_err(e)?, c.a(p, i, j).map_err(e)?));
        require(*d.t(p, i, j, k).map_err(e)? == t, "flip t formula", loc)?;
        let corr = |q: usize, r: usize| dot_rat(c.a(p, q, r).unwrap(), c.ahat(p, q, r).unwrap());
        let rhs = gerbe_right(c, p, s.ijk, &s.x).map_err(e)? - Phase::new(corr(i, j) + corr(j, k) - corr(i, k));
        require(gerbe_left(d, p, s.ijk, &s.x).map_err(e)? == rhs, "flip left gerbe", loc)?;
        require(
            gerbe_right(d, p, s.ijk, &s.xh).map_err(e)? == gerbe_left(c, p, s.ijk, &s.xh).map_err(e)?,
            "flip right gerbe",
            loc,
        )?;
    }
    Ok(())
}

/// The action of D_g: a′ = ga, â′ = g^{-T}â, t′ = t, β′(a) = β(g⁻¹a), β̂′(â) = β̂(gᵀâ).
pub fn check_gl_identities(c: &TDCocycle, g: &IntMat, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    let e = internal;
    let dg = PseudoOrthogonal::embed_gl(g).map_err(e)?;
    let d = act(&section(&dg), c).map_err(e)?;
    let ginv = unimodular_inverse(g).map_err(e)?;
    let git = ginv.transpose();
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let loc = || format!("point {p}, indices {:?}", s.ijk);
        require(
            *d.a(p, i, j).map_err(e)? == g.mul_ratvec(c.a(p, i, j).map_err(e)?)
                && *d.ahat(p, i, j).map_err(e)? == git.mul_ratvec(c.ahat(p, i, j).map_err(e)?)
                && *d.m(i, j, k).map_err(e)? == g.mul_vec(c.m(i, j, k).map_err(e)?)
                && *d.mhat(i, j, k).map_err(e)? == git.mul_vec(c.mhat(i, j, k).map_err(e)?)
                && d.t(p, i, j, k).map_err(e)? == c.t(p, i, j, k).map_err(e)?,
            "GL transition data",
            loc,
        )?;
        require(
            gerbe_left(&d, p, s.ijk, &s.x).map_err(e)? == gerbe_left(c, p, s.ijk, &ginv.mul_ratvec(&s.x)).map_err(e)?,
            "GL left gerbe",
            loc,
        )?;
        require(
            gerbe_right(&d, p, s.ijk, &s.xh).map_err(e)?
                == gerbe_right(c, p, s.ijk, &g.transpose().mul_ratvec(&s.xh)).map_err(e)?,
            "GL right gerbe",
            loc,
        )?;
    }
    Ok(())
}

/// The action of R for n = 1.
pub fn check_rotation_identities(c: &TDCocycle, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    let e = internal;
    if c.n != 1 {
        return Err(violation("rotation", format!("defined for n = 1, got n = {}", c.n)));
    }
    let d = act(&section(&PseudoOrthogonal::rotation()), c).map_err(e)?;
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let loc = || format!("point {p}, indices {:?}", s.ijk);
        require(
            *d.a(p, i, j).map_err(e)? == vec_neg(c.ahat(p, i, j).map_err(e)?)
                && d.ahat(p, i, j).map_err(e)? == c.a(p, i, j).map_err(e)?
                && *d.m(i, j, k).map_err(e)? == vec_neg(c.mhat(i, j, k).map_err(e)?)
                && d.mhat(i, j, k).map_err(e)? == c.m(i, j, k).map_err(e)?,
            "rotation transition data",
            loc,
        )?;
        let t = -c.t(p, i, j, k).map_err(e)?.clone()
            + Phase::new(dot_int_rat(c.mhat(i, j, k).map_err(e)?, c.a(p, i, k).map_err(e)?))
            + Phase::new(dot_rat(c.ahat(p, j, k).map_err(e)?, c.a(p, i, j).map_err(e)?));
        require(*d.t(p, i, j, k).map_err(e)? == t, "rotation t formula", loc)?;
        let corr = |q: usize, r: usize| dot_rat(c.a(p, q, r).unwrap(), c.ahat(p, q, r).unwrap());
        let rhs =
            -gerbe_right(c, p, s.ijk, &vec_neg(&s.x)).map_err(e)? + Phase::new(corr(i, j) + corr(j, k) - corr(i, k));
        require(gerbe_left(&d, p, s.ijk, &s.x).map_err(e)? == rhs, "rotation left gerbe", loc)?;
        require(
            gerbe_right(&d, p, s.ijk, &s.xh).map_err(e)? == -gerbe_left(c, p, s.ijk, &s.xh).map_err(e)?,
            "rotation right gerbe",
            loc,
        )?;
    }
    Ok(())
}

/// ⟨u|B|v⟩_low = uᵀB_low v.
fn low_form(b_low: &IntMat, u: &[Rat], v: &[Rat]) -> Rat {
    bilinear(b_low, u, v)
}

/// Transition data and left-leg correction for the action of e^B.
pub fn check_so_shift_transition(
    c: &TDCocycle,
    b: &IntMat,
    samples: usize,
    seed: u64,
) -> std::result::Result<(), Violation> {
    let e = internal;
    let bl = strict_lower_split(b).map_err(e)?;
    let d = act(&section(&PseudoOrthogonal::embed_so(b).map_err(e)?), c).map_err(e)?;
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let loc = || format!("point {p}, indices {:?}", s.ijk);
        let a = |q, r| c.a(p, q, r).map_err(e);
        let m = to_rat(c.m(i, j, k).map_err(e)?);
        require(
            d.a(p, i, j).map_err(e)? == a(i, j)?
                && *d.ahat(p, i, j).map_err(e)? == vec_add(&b.mul_ratvec(a(i, j)?), c.ahat(p, i, j).map_err(e)?)
                && d.m(i, j, k).map_err(e)? == c.m(i, j, k).map_err(e)?
                && *d.mhat(i, j, k).map_err(e)?
                    == vec_add(&b.mul_vec(c.m(i, j, k).map_err(e)?), c.mhat(i, j, k).map_err(e)?),
            "so transition data",
            loc,
        )?;
        let t = c.t(p, i, j, k).map_err(e)?.clone()
            - Phase::new(low_form(&bl, &m, a(i, k)?))
            - Phase::new(low_form(&bl, a(j, k)?, a(i, j)?));
        require(*d.t(p, i, j, k).map_err(e)? == t, "so t formula", loc)?;
        let corr = low_form(&bl, &m, a(i, k)?) + low_form(&bl, a(i, j)?, a(j, k)?) - dot_rat(&s.x, &b.mul_ratvec(&m));
        require(
            gerbe_left(&d, p, s.ijk, &s.x).map_err(e)? - gerbe_left(c, p, s.ijk, &s.x).map_err(e)? == Phase::new(corr),
            "so left-leg correction",
            loc,
        )?;
    }
    Ok(())
}

/// γ_ijk(b) = ⟨a_ik|B|m⟩ + ⟨a_jk|B|a_ij⟩ − m·b, exactly over ℚ.
pub fn so_gamma(c: &TDCocycle, bl: &IntMat, p: usize, (i, j, k): (usize, usize, usize), x: &[Rat]) -> Result<Rat> {
    let m = to_rat(c.m(i, j, k)?);
    Ok(low_form(bl, c.a(p, i, k)?, &m) + low_form(bl, c.a(p, j, k)?, c.a(p, i, j)?) - dot_rat(&m, x))
}

/// ε_ijk = ⟨a_ik|B|m_ijk⟩ + ⟨a_ij|B|a_jk⟩, exactly over ℚ.
pub fn so_epsilon(c: &TDCocycle, bl: &IntMat, p: usize, (i, j, k): (usize, usize, usize)) -> Result<Rat> {
    let m = to_rat(c.m(i, j, k)?);
    Ok(low_form(bl, c.a(p, i, k)?, &m) + low_form(bl, c.a(p, i, j)?, c.a(p, j, k)?))
}

/// The right leg under e^B as a pull-push: β̂′, the difference γ and its
/// splitting γ = α̃_ij(b) + α̃_jk(b + Ba_ij) − α̃_ik(b) + ε with α̃_ij(b) = a_ij·b.
pub fn check_so_shift_decomposition(
    c: &TDCocycle,
    b: &IntMat,
    samples: usize,
    seed: u64,
) -> std::result::Result<(), Violation> {
    let e = internal;
    let bl = strict_lower_split(b).map_err(e)?;
    let d = act(&section(&PseudoOrthogonal::embed_so(b).map_err(e)?), c).map_err(e)?;
    let mut r = rng::seeded(seed ^ 0xB5);
    for s in sites(c, samples, seed) {
        let (p, (i, j, k)) = (s.p, s.ijk);
        let loc = || format!("point {p}, indices {:?}", s.ijk);
        let a = |q, r| c.a(p, q, r).map_err(e);
        let m = to_rat(c.m(i, j, k).map_err(e)?);
        let right = gerbe_right(c, p, s.ijk, &s.xh).map_err(e)?
            + Phase::new(low_form(&bl, a(i, k)?, &m) + low_form(&bl, a(j, k)?, a(i, j)?));
        require(gerbe_right(&d, p, s.ijk, &s.xh).map_err(e)? == right, "so right-leg formula", loc)?;
        let shift = rng::ratvec(&mut r, c.n);
        let gamma = so_gamma(c, &bl, p, s.ijk, &shift).map_err(e)?;
        let tilde = gerbe_right(&d, p, s.ijk, &vec_add(&s.xh, &shift)).map_err(e)?
            - gerbe_right(c, p, s.ijk, &s.xh).map_err(e)?;
        require(tilde == Phase::new(gamma.clone()), "so gamma difference", loc)?;
        let alpha = |q, r, x: &[Rat]| -> std::result::Result<Rat, Violation> { Ok(dot_rat(a(q, r)?, x)) };
        let moved = vec_add(&shift, &b.mul_ratvec(a(i, j)?));
        let split = alpha(i, j, &shift)? + alpha(j, k, &moved)? - alpha(i, k, &shift)?
            + so_epsilon(c, &bl, p, s.ijk).map_err(e)?;
        require(gamma == split, "so gamma decomposition", loc)?;
    }
    Ok(())
}

/// ε_jkl + ε_ijl = ε_ijk + ε_ikl exactly over ℚ at every index quadruple.
pub fn check_epsilon_cocycle(c: &TDCocycle, b: &IntMat) -> std::result::Result<(), Violation> {
    let e = internal;
    let bl = strict_lower_split(b).map_err(e)?;
    for p in c.nerve.points() {
        for q in c.nerve.tuples(p, 4) {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let eps = |t| so_epsilon(c, &bl, p, t).map_err(e);
            let lhs = eps((j, k, l))? + eps((i, j, l))?;
            let rhs = eps((i, j, k))? + eps((i, k, l))?;
            require(lhs == rhs, "epsilon Cech cocycle", || {
                format!("point {p}, indices {q:?}, defect {}", &lhs - &rhs)
            })?;
        }
    }
    Ok(())
}

pub fn check_so_shift_identities(
    c: &TDCocycle,
    b: &IntMat,
    samples: usize,
    seed: u64,
) -> std::result::Result<(), Violation> {
    check_so_shift_transition(c, b, samples, seed)?;
    check_so_shift_decomposition(c, b, samples, seed)?;
    check_epsilon_cocycle(c, b)
}

/// The shifted cocycle condition γ_ikl(b) + γ_ijk(b) = γ_ijl(b) + γ_jkl(b + Ba_ij) mod 1.
pub fn check_so_gamma_cocycle(c: &TDCocycle, b: &IntMat, seed: u64) -> std::result::Result<(), Violation> {
    let e = internal;
    let bl = strict_lower_split(b).map_err(e)?;
    let mut r = rng::seeded(seed);
    for p in c.nerve.points() {
        for q in c.nerve.tuples(p, 4) {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let x = rng::ratvec(&mut r, c.n);
            let g = |t, x: &[Rat]| so_gamma(c, &bl, p, t, x).map_err(e);
            let moved = vec_add(&x, &b.mul_ratvec(c.a(p, i, j).map_err(e)?));
            let lhs = Phase::new(g((i, k, l), &x)? + g((i, j, k), &x)?);
            let rhs = Phase::new(g((i, j, l), &x)? + g((j, k, l), &moved)?);
            require(lhs == rhs, "so gamma shifted cocycle", || format!("point {p}, indices {q:?}"))?;
        }
    }
    Ok(())
}

/// act(o₁·o₂, c) = act(o₁, act(o₂, c)), exactly.
pub fn check_action_composition(o1: &Obj, o2: &Obj, c: &TDCocycle) -> std::result::Result<(), Violation> {
    let e = internal;
    let lhs = act(&o1.product(o2).map_err(e)?, c).map_err(e)?;
    let rhs = act(o1, &act(o2, c).map_err(e)?).map_err(e)?;
    require(lhs == rhs, "action composition", || "act(o1 o2) differs from act(o1) act(o2)".into())
}

/// For β: o → o′, t(act(o)) − t(act(o′)) = f(u_jk) − f(u_ik) + f(u_ij) with f = β∘u.
pub fn check_morphism_coboundary(mor: &Mor, c: &TDCocycle) -> std::result::Result<(), Violation> {
    let e = internal;
    let s = act(mor.src(), c).map_err(e)?;
    let d = act(mor.dst(), c).map_err(e)?;
    require(s.a == d.a && s.ahat == d.ahat && s.m == d.m && s.mhat == d.mhat, "morphism leaves legs fixed", || {
        "a, ahat, m or mhat differ".into()
    })?;
    for (&(p, i, j, k), t) in s.t.iter() {
        let f = |q, r| -> std::result::Result<Rat, Violation> { Ok(mor.eval_rat(&c.u(p, q, r).map_err(e)?)) };
        let delta = Phase::new(f(j, k)? - f(i, k)? + f(i, j)?);
        require(t.clone() - d.t(p, i, j, k).map_err(e)?.clone() == delta, "morphism coboundary", || {
            format!("point {p}, indices {:?}", (i, j, k))
        })?;
    }
    Ok(())
}

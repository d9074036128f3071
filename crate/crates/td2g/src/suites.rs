//! Seeded verification suites, as driven by the CLI.
//!
//! Trial `k` draws from `rng::stream(seed, k)`, trials run in parallel, and
//! failures are collected in trial order, so a report depends only on the
//! suite, `n`, the trial count and the seed.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::crossedmod::{check_ci_axioms, check_ct_axioms, check_functor_composition};
use crate::error::{Error, Result, Violation};
use crate::groups::{enumerate_n1, generators, gl_generators, random_word, so_generators, PseudoOrthogonal};
use crate::intlinalg::{dot_int_rat, mat_mul, Int, IntMat, Phase};
use crate::json::{element_to_json, mat_to_json};
use crate::kinvariant::{
    cocycle_defect, gamma_coboundary, k_cocycle, k_eval, vanishing_on_subgroup, DoubleCoverElement, Subgroup,
};
use crate::rng::{self, Rng};
use crate::tdcorr::{
    act, check_action_composition, check_correspondence, check_flip_identities, check_gerbe_cocycles,
    check_gl_identities, check_morphism_coboundary, check_rotation_identities, check_so_gamma_cocycle,
    check_so_shift_identities, random_cocycle,
};
use crate::twogroup::{b_matrix, beta_multiplicator, section, Mor, Obj};

/// Length of the random generator words used as test elements.
pub const WORD_LENGTH: usize = 4;
/// Rational sampling points per pointwise identity.
pub const SAMPLES: usize = 50;
/// Points and charts of the random nerve in the tdcorr suite. Four charts
/// give index quadruples without repetition.
pub const NERVE_POINTS: usize = 2;
pub const NERVE_CHARTS: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    N1Exhaustive,
    Cocycle,
    Torsion,
    Subgroups,
    CiAxioms,
    Tdcorr,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::N1Exhaustive, Suite::Cocycle, Suite::Torsion, Suite::Subgroups, Suite::CiAxioms, Suite::Tdcorr];

    pub fn name(self) -> &'static str {
        match self {
            Suite::N1Exhaustive => "n1-exhaustive",
            Suite::Cocycle => "cocycle",
            Suite::Torsion => "torsion",
            Suite::Subgroups => "subgroups",
            Suite::CiAxioms => "ci-axioms",
            Suite::Tdcorr => "tdcorr",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub elapsed: Duration,
    /// Individual identities evaluated.
    pub checked: usize,
    pub failures: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The report as JSON; timing is optional so output can be byte-compared.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut o = Map::new();
        o.insert("suite".into(), self.suite.name().into());
        o.insert("n".into(), self.n.into());
        o.insert("trials".into(), self.trials.into());
        o.insert("seed".into(), self.seed.into());
        if timing {
            o.insert("elapsed_ms".into(), (self.elapsed.as_millis() as u64).into());
        }
        o.insert("checked".into(), self.checked.into());
        o.insert("passed".into(), self.passed().into());
        o.insert("failures".into(), Value::Array(self.failures.clone()));
        Value::Object(o)
    }
}

fn failure(trial: Option<usize>, check: &str, detail: String, elements: &[&PseudoOrthogonal]) -> Value {
    let mut o = Map::new();
    if let Some(t) = trial {
        o.insert("trial".into(), t.into());
    }
    o.insert("check".into(), check.into());
    o.insert("detail".into(), detail.into());
    if !elements.is_empty() {
        o.insert("elements".into(), Value::Array(elements.iter().map(|a| element_to_json(a)).collect()));
    }
    Value::Object(o)
}

fn from_violation(trial: usize, v: Violation, elements: &[&PseudoOrthogonal]) -> Value {
    failure(Some(trial), v.axiom, v.detail, elements)
}

/// Outcome of one trial: identities checked and failures found.
type Trial = (usize, Vec<Value>);

fn run_trials(trials: usize, f: impl Fn(usize) -> Result<Trial> + Sync + Send) -> Result<Trial> {
    let results: Vec<Trial> = (0..trials).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(results.into_iter().fold((0, Vec::new()), |(c, mut fs), (k, more)| {
        fs.extend(more);
        (c + k, fs)
    }))
}

fn words(n: usize, count: usize, r: &mut Rng) -> Result<Vec<PseudoOrthogonal>> {
    let gens = generators(n);
    (0..count).map(|_| random_word(&gens, WORD_LENGTH, r)).collect()
}

pub fn run_suite(suite: Suite, n: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    let start = Instant::now();
    let n = if suite == Suite::N1Exhaustive { 1 } else { n };
    let (checked, failures) = match suite {
        Suite::N1Exhaustive => n1_exhaustive()?,
        Suite::Cocycle => run_trials(trials, |k| trial_cocycle(n, seed, k))?,
        Suite::Torsion => run_trials(trials, |k| trial_torsion(n, seed, k))?,
        Suite::Subgroups => subgroups(n, trials, seed)?,
        Suite::CiAxioms => run_trials(trials, |k| trial_ci(n, seed, k))?,
        Suite::Tdcorr => run_trials(trials, |k| trial_tdcorr(n, seed, k))?,
    };
    Ok(SuiteReport { suite, n, trials, seed, elapsed: start.elapsed(), checked, failures })
}

/// m = 0 on all 512 triples and δm = 0 on all 4096 quadruples of O±(1,1,ℤ).
fn n1_exhaustive() -> Result<Trial> {
    let all = enumerate_n1();
    let triples: Vec<Vec<Value>> = all
        .par_iter()
        .map(|a| -> Result<Vec<Value>> {
            let mut out = Vec::new();
            for b in &all {
                for c in &all {
                    let m = k_cocycle(a, b, c)?;
                    if m.iter().any(|v| *v != Int::from(0)) {
                        out.push(failure(None, "m vanishes for n = 1", format!("m = {m:?}"), &[a, b, c]));
                    }
                    for d in &all {
                        let defect = cocycle_defect(a, b, c, d)?;
                        if defect.iter().any(|v| *v != Int::from(0)) {
                            out.push(failure(None, "cocycle identity", format!("dm = {defect:?}"), &[a, b, c, d]));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let per = all.len().pow(3) + all.len().pow(4);
    Ok((per, triples.into_iter().flatten().collect()))
}

/// δm = 0 on a random quadruple, and both k-invariant paths agree on its triples.
fn trial_cocycle(n: usize, seed: u64, k: usize) -> Result<Trial> {
    let mut r = rng::stream(seed, k as u64);
    let w = words(n, 4, &mut r)?;
    let (a, b, c, d) = (&w[0], &w[1], &w[2], &w[3]);
    let mut fails = Vec::new();
    let mut checked = 1;
    let defect = cocycle_defect(a, b, c, d)?;
    if defect.iter().any(|v| *v != Int::from(0)) {
        fails.push(failure(Some(k), "cocycle identity", format!("dm = {defect:?}"), &[a, b, c, d]));
    }
    let m = k_cocycle(a, b, c)?;
    for _ in 0..4 {
        checked += 1;
        let x = rng::ratvec(&mut r, 2 * n);
        let closed = Phase::new(dot_int_rat(&m, &x));
        if k_eval(a, b, c, &x)? != closed {
            fails.push(failure(Some(k), "k_eval = m.x", format!("x = {x:?}"), &[a, b, c]));
        }
    }
    Ok((checked, fails))
}

/// δγ = 2m and the double-cover group law on a random triple.
fn trial_torsion(n: usize, seed: u64, k: usize) -> Result<Trial> {
    let mut r = rng::stream(seed, k as u64);
    let w = words(n, 3, &mut r)?;
    let (a, b, c) = (&w[0], &w[1], &w[2]);
    let mut fails = Vec::new();
    let m = k_cocycle(a, b, c)?;
    let dg = gamma_coboundary(a, b, c)?;
    let twice: Vec<Int> = m.iter().map(|v| v * 2).collect();
    if dg != twice {
        fails.push(failure(Some(k), "dgamma = 2m", format!("dgamma = {dg:?}, m = {m:?}"), &[a, b, c]));
    }
    let lift = |g: &PseudoOrthogonal, r: &mut Rng| DoubleCoverElement::new(&rng::intvec(r, 2 * n, 1), g.clone());
    let (x, y, z) = (lift(a, &mut r)?, lift(b, &mut r)?, lift(c, &mut r)?);
    if x.mul(&y)?.mul(&z)? != x.mul(&y.mul(&z)?)? {
        fails.push(failure(
            Some(k),
            "double cover associativity",
            format!("u = {:?}, {:?}, {:?}", x.u(), y.u(), z.u()),
            &[a, b, c],
        ));
    }
    let e = DoubleCoverElement::unit(n);
    if e.mul(&x)? != x || x.mul(&e)? != x {
        fails.push(failure(Some(k), "double cover unit", format!("u = {:?}", x.u()), &[a]));
    }
    Ok((3, fails))
}

fn subgroups(n: usize, trials: usize, seed: u64) -> Result<Trial> {
    let mut checked = 0;
    let mut fails = Vec::new();
    for (i, sg) in Subgroup::ALL.into_iter().enumerate() {
        let out = vanishing_on_subgroup(sg, n, trials, seed ^ i as u64)?;
        checked += out.triples;
        if let Some((a, b, c, m)) = out.counterexample {
            fails.push(failure(None, sg.name(), format!("m = {m:?}"), &[&a, &b, &c]));
        }
    }
    Ok((checked, fails))
}

/// CI axioms for a section object, CT axioms for a multiplicator, and the
/// functor composition law.
fn trial_ci(n: usize, seed: u64, k: usize) -> Result<Trial> {
    let mut r = rng::stream(seed, k as u64);
    let w = words(n, 2, &mut r)?;
    let (a, b) = (&w[0], &w[1]);
    let inner = seed ^ (k as u64).wrapping_mul(0x2545_F491_4F6C_DD1D);
    let mut fails = Vec::new();
    if let Err(v) = check_ci_axioms(&section(a), 5, inner) {
        fails.push(from_violation(k, v, &[a]));
    }
    if let Err(v) = check_ct_axioms(&beta_multiplicator(a, b)?, 5, inner) {
        fails.push(from_violation(k, v, &[a, b]));
    }
    if let Err(v) = check_functor_composition(&section(a), &section(b), 5, inner) {
        fails.push(from_violation(k, v, &[a, b]));
    }
    Ok((3, fails))
}

fn random_gl(n: usize, r: &mut Rng) -> IntMat {
    let gens = gl_generators(n);
    (0..WORD_LENGTH)
        .fold(IntMat::identity(n), |acc, _| mat_mul(&acc, &gens[rng::below(r, gens.len())]).expect("square"))
}

fn random_skew(n: usize, r: &mut Rng) -> IntMat {
    so_generators(n).iter().fold(IntMat::zeros(n, n), |acc, g| &acc + &g.scale_i(rng::int_in(r, -3, 3) as i32))
}

/// A morphism out of `o` with random symmetric H and linear part.
fn random_mor(o: &Obj, r: &mut Rng) -> Result<Mor> {
    let dim = 2 * o.n();
    let mut h = IntMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let v = Int::from(rng::int_in(r, -3, 3));
            h.set(i, j, v.clone());
            h.set(j, i, v);
        }
    }
    let dst = Obj::new(o.g().clone(), o.x() - &h)?;
    Mor::new(o.clone(), dst, rng::intvec(r, dim, 3))
}

/// One random cocycle pushed through every cocycle-layer identity.
fn trial_tdcorr(n: usize, seed: u64, k: usize) -> Result<Trial> {
    let mut r = rng::stream(seed, k as u64);
    let c = random_cocycle(n, NERVE_POINTS, NERVE_CHARTS, &mut r);
    let w = words(n, 2, &mut r)?;
    let (a, b) = (&w[0], &w[1]);
    let inner = seed ^ (k as u64).wrapping_mul(0x2545_F491_4F6C_DD1D);
    let mut fails = Vec::new();
    let mut checked = 0;
    let mut record = |res: std::result::Result<(), Violation>, els: &[&PseudoOrthogonal]| {
        checked += 1;
        if let Err(v) = res {
            fails.push(from_violation(k, v, els));
        }
    };
    record(c.validate(), &[]);
    record(check_gerbe_cocycles(&c, SAMPLES, inner), &[]);
    record(check_correspondence(&c, SAMPLES, inner), &[]);
    record(act(&section(a), &c)?.validate(), &[a]);
    record(check_flip_identities(&c, SAMPLES, inner), &[]);
    let g = random_gl(n, &mut r);
    let ga = PseudoOrthogonal::embed_gl(&g)?;
    record(check_gl_identities(&c, &g, SAMPLES, inner), &[&ga]);
    if n == 1 {
        record(check_rotation_identities(&c, SAMPLES, inner), &[]);
    } else {
        let bm = random_skew(n, &mut r);
        let eb = PseudoOrthogonal::embed_so(&bm)?;
        record(check_so_shift_identities(&c, &bm, SAMPLES, inner), &[&eb]);
        record(check_so_gamma_cocycle(&c, &bm, inner), &[&eb]);
    }
    record(check_action_composition(&section(a), &section(b), &c), &[a, b]);
    record(check_morphism_coboundary(&random_mor(&section(a), &mut r)?, &c), &[a]);
    Ok((checked, fails))
}

/// Section data of an element, for the CLI.
pub fn section_payload(a: &PseudoOrthogonal) -> Value {
    let o = section(a);
    json!({
        "n": a.n(),
        "iso": a.iso(),
        "matrix": mat_to_json(a.matrix()),
        "B": mat_to_json(&b_matrix(a)),
        "eta": mat_to_json(o.x()),
    })
}

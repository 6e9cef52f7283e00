//! Verification suites. Each returns a certificate listing every compared pair
//! of exact values (or only the failures, for large runs).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{AbelianGroup, Element, GroupCharacter, Pairing, Presentation, Subgroup};
use crate::error::{Error, Result};
use crate::liering::LieRing;
use crate::modular::{inv_mod, is_square_mod, mul_mod};
use crate::polar::{
    enumerate_lagrangians, enumerate_polarizations, heisenberg_reduction, is_polarization, neighbor_chain,
    neighbor_check, relative_orientation_choosing, skew_form, Choices, HeisenbergData, OrientedPolarization,
    Polarization,
};
use crate::rep::{
    chain_product_check, stone_von_neumann_check, verify_compatibility, verify_reduction, CompatDepth,
    CompatReport, Engine, GroupTables, OrientedTriple, ReductionReport, ValueJson,
};
use crate::session::Session;
use crate::witt::{gamma_scalar, maslov_index, maslov_invariant_checks, QuadraticModule};

pub const FORMAT: u32 = 1;

/// Runs with at most this many items are enumerated exhaustively and keep all records.
pub const EXHAUSTIVE_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Compat,
    Reduction,
    Maslov,
    Witt,
    Gamma,
    Svn,
    RootIndependence,
    Chain,
    Choice,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Compat,
        Suite::Reduction,
        Suite::Maslov,
        Suite::Witt,
        Suite::Gamma,
        Suite::Svn,
        Suite::RootIndependence,
        Suite::Chain,
        Suite::Choice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Compat => "compat",
            Suite::Reduction => "reduction",
            Suite::Maslov => "maslov",
            Suite::Witt => "witt",
            Suite::Gamma => "gamma",
            Suite::Svn => "svn",
            Suite::RootIndependence => "root-independence",
            Suite::Chain => "chain",
            Suite::Choice => "choice",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// Sample size; each suite has its own default.
    pub count: Option<usize>,
    pub jobs: usize,
    /// Enumerate everything regardless of size.
    pub exhaustive: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            count: None,
            jobs: 1,
            exhaustive: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub format: u32,
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checked: usize,
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub records: Vec<Value>,
}

impl Certificate {
    fn new(suite: Suite, opts: &Options) -> Self {
        Certificate {
            format: FORMAT,
            suite: suite.name().into(),
            seed: opts.seed,
            passed: true,
            checked: 0,
            summary: Value::Null,
            counterexample: None,
            records: Vec::new(),
        }
    }

    /// Records one comparison; failures become the counterexample if none is set.
    fn push(&mut self, ok: bool, rec: Value, keep: bool) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.counterexample.is_none() {
                self.counterexample = Some(rec.clone());
            }
        }
        if keep || !ok {
            self.records.push(rec);
        }
    }
}

pub fn run(suite: Suite, ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    match suite {
        Suite::Compat => compat(ring, f, opts),
        Suite::Reduction => reduction(ring, f, opts),
        Suite::Maslov => maslov(ring, f, opts),
        Suite::Witt => witt(ring.p(), opts),
        Suite::Gamma => gamma(ring.p(), opts),
        Suite::Svn => svn(ring, f, opts),
        Suite::RootIndependence => root_independence(ring, f, opts),
        Suite::Chain => chain(ring, f, opts),
        Suite::Choice => choice(ring, f, opts),
    }
}

pub fn session_for(ring: &LieRing, psi: u64) -> Result<Session> {
    Session::with_psi(ring.p(), ring.carrier().max_exp(), psi)
}

/// Splits `items` into contiguous chunks, runs `work(offset, chunk)` on up to
/// `jobs` threads and returns the results in chunk order.
pub fn fan_out<I, T, F>(jobs: usize, items: &[I], work: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(usize, &[I]) -> Result<T> + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return Ok(vec![work(0, items)?]);
    }
    let size = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(size)
            .enumerate()
            .map(|(k, c)| {
                let w = &work;
                s.spawn(move || w(k * size, c))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn generators(pols: &[Polarization]) -> Vec<Vec<Element>> {
    pols.iter().map(|p| p.subgroup().generators()).collect()
}

fn all_triples(n: usize) -> Vec<[usize; 3]> {
    (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
        .collect()
}

fn sample_triples<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<[usize; 3]> {
    (0..count)
        .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
        .collect()
}

fn random_unit<R: Rng>(rng: &mut R, p: u64) -> u64 {
    rng.gen_range(1..p)
}

/// Unit-orientation triples (all of them when small or `exhaustive`, else a
/// sample) followed by triples with random orientations.
pub fn compat_triples(n: usize, p: u64, opts: &Options) -> Vec<OrientedTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let exhaustive = opts.exhaustive || n.pow(3) <= EXHAUSTIVE_LIMIT;
    let base = if exhaustive {
        all_triples(n)
    } else {
        sample_triples(&mut rng, n, opts.count.unwrap_or(200))
    };
    let mut out: Vec<OrientedTriple> = base.into_iter().map(|t| (t, [1, 1, 1])).collect();
    for t in sample_triples(&mut rng, n, opts.count.unwrap_or(64)) {
        let o = [random_unit(&mut rng, p), random_unit(&mut rng, p), random_unit(&mut rng, p)];
        out.push((t, o));
    }
    out
}

fn compat_depth(dim: usize, total: usize) -> CompatDepth {
    let cube = dim.pow(3).max(1);
    CompatDepth {
        full: if dim <= 9 { total } else { 64 },
        dense: (400_000 / cube).max(8),
        keep_records: total <= EXHAUSTIVE_LIMIT,
    }
}

/// Compatibility over the given triples with a fresh engine per worker.
pub fn compat_report(
    ring: &LieRing,
    f: &GroupCharacter,
    session: &Session,
    pols: &[Polarization],
    triples: &[OrientedTriple],
    jobs: usize,
) -> Result<(CompatReport, usize)> {
    let tables = GroupTables::new(ring);
    let dim = {
        let mut e = Engine::with_tables(tables.clone(), f, session)?;
        let i = e.add(&pols[0]);
        e.model(i).dim()
    };
    let depth = compat_depth(dim, triples.len());
    let parts = fan_out(jobs, triples, |offset, chunk| {
        let mut e = Engine::with_tables(tables.clone(), f, session)?;
        let d = CompatDepth {
            full: depth.full.saturating_sub(offset),
            dense: depth.dense.saturating_sub(offset),
            keep_records: depth.keep_records,
        };
        verify_compatibility(&mut e, pols, chunk, d)
    })?;
    let mut report = CompatReport::default();
    for p in parts {
        report.merge(p);
    }
    Ok((report, dim))
}

fn to_values<T: Serialize>(xs: &[T]) -> Vec<Value> {
    xs.iter().map(|x| serde_json::to_value(x).expect("serializable")).collect()
}

pub fn compat(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let session = session_for(ring, 1)?;
    let pols = enumerate_polarizations(ring, f)?;
    let triples = compat_triples(pols.len(), ring.p(), opts);
    let (report, dim) = compat_report(ring, f, &session, &pols, &triples, opts.jobs)?;
    let mut cert = Certificate::new(Suite::Compat, opts);
    cert.passed = report.ok();
    cert.checked = report.checked;
    cert.counterexample = report.failures.first().map(|r| serde_json::to_value(r).expect("serializable"));
    cert.summary = json!({
        "claim": "alpha = beta12*beta23*beta31, so Psi12 Psi23 Psi31 = Id",
        "dimension": dim,
        "polarizations": generators(&pols),
        "full_composites": report.full_composites,
        "dense_cycles": report.dense_cycles,
        "failures": report.failures.len(),
    });
    cert.records = to_values(if report.records.is_empty() {
        &report.failures
    } else {
        &report.records
    });
    Ok(cert)
}

pub fn reduction_report(
    ring: &LieRing,
    f: &GroupCharacter,
    session: &Session,
    pols: &[Polarization],
    triples: &[[usize; 3]],
    jobs: usize,
    keep: bool,
) -> Result<ReductionReport> {
    let h = heisenberg_reduction(ring, f)?;
    let tables = GroupTables::new(ring);
    let rtables = GroupTables::new(&h.ring);
    let parts = fan_out(jobs, triples, |_, chunk| {
        let mut e = Engine::with_tables(tables.clone(), f, session)?;
        let mut r = Engine::with_tables(rtables.clone(), &h.fbar, session)?;
        verify_reduction(&mut e, &mut r, &h, pols, chunk, keep)
    })?;
    let mut report = ReductionReport::default();
    for p in parts {
        report.merge(p);
    }
    Ok(report)
}

pub fn reduction(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let session = session_for(ring, 1)?;
    let pols = enumerate_polarizations(ring, f)?;
    let n = pols.len();
    let exhaustive = opts.exhaustive || n.pow(3) <= EXHAUSTIVE_LIMIT;
    let triples = if exhaustive {
        all_triples(n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        sample_triples(&mut rng, n, opts.count.unwrap_or(50))
    };
    let keep = triples.len() <= EXHAUSTIVE_LIMIT;
    let report = reduction_report(ring, f, &session, &pols, &triples, opts.jobs, keep)?;
    let mut cert = Certificate::new(Suite::Reduction, opts);
    cert.passed = report.ok();
    cert.checked = report.checked;
    cert.counterexample = report.failures.first().map(|r| serde_json::to_value(r).expect("serializable"));
    cert.summary = json!({
        "claim": "alpha(p1,p2,p3) = alpha(p1^f,p2^f,p3^f)",
        "exhaustive": exhaustive,
        "polarizations": generators(&pols),
        "failures": report.failures.len(),
    });
    cert.records = to_values(if keep { &report.records } else { &report.failures });
    Ok(cert)
}

/// Polarizations of the Heisenberg reduction 𝔤^f lying over the given Lagrangians of Ā.
pub fn lagrangian_polarizations(h: &HeisenbergData, lags: &[Subgroup]) -> Result<Vec<Polarization>> {
    let carrier = h.ring.carrier();
    let z = h.z_subgroup();
    lags.iter()
        .map(|l| {
            let gens: Vec<Element> = l.generators().iter().map(|x| h.embed_abar(x)).collect();
            let s = Subgroup::from_generators(carrier, &gens).sum(&z)?;
            Polarization::new(&h.ring, &h.fbar, s)
        })
        .collect()
}

/// α(p1,p2,p3) = γ(τ(L1,L2,L3)) for Lagrangian triples of Ā, computed in 𝔤^f.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaGammaRecord {
    pub triple: [usize; 3],
    pub alpha: ValueJson,
    pub gamma_tau: ValueJson,
    pub tau: String,
    pub methods_agree: bool,
    pub equal: bool,
}

pub fn alpha_gamma_check(
    ring: &LieRing,
    f: &GroupCharacter,
    session: &Session,
    triples: Option<&[[usize; 3]]>,
) -> Result<(usize, Vec<AlphaGammaRecord>)> {
    let h = heisenberg_reduction(ring, f)?;
    let lags = enumerate_lagrangians(&h.omega)?;
    let pols = lagrangian_polarizations(&h, &lags)?;
    let mut e = Engine::new(&h.ring, &h.fbar, session)?;
    let ids: Vec<usize> = pols.iter().map(|p| e.add(p)).collect();
    let all = all_triples(lags.len());
    let triples = triples.unwrap_or(&all);
    let mut out = Vec::new();
    for &t in triples {
        let v = e.alpha_all(ids[t[0]], ids[t[1]], ids[t[2]], None);
        let ls = [lags[t[0]].clone(), lags[t[1]].clone(), lags[t[2]].clone()];
        let tau = maslov_index(&h.omega, &ls, session.psi())?;
        let g = tau.gamma(session)?;
        let agree = v.agree() && v.is_unit();
        out.push(AlphaGammaRecord {
            triple: t,
            alpha: (&v.compose).into(),
            gamma_tau: (&g).into(),
            tau: tau.to_string(),
            methods_agree: agree,
            equal: agree && g == v.compose,
        });
    }
    Ok((lags.len(), out))
}

/// Random oriented Lagrangian tuples of length 2..=5.
pub fn oriented_tuples(omega: &Pairing, lags: &[Subgroup], seed: u64, count: usize) -> Vec<Vec<(Presentation, crate::abelian::Orientation)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = omega.left().p();
    (0..count)
        .map(|_| {
            let m = rng.gen_range(2..=5);
            (0..m)
                .map(|_| {
                    let l = &lags[rng.gen_range(0..lags.len())];
                    let o = crate::abelian::Orientation {
                        scalar: random_unit(&mut rng, p),
                    };
                    (Presentation::canonical(l), o)
                })
                .collect()
        })
        .collect()
}

/// Length, discriminant, coboundary, cyclic, antisymmetry and chain identities
/// for one oriented tuple.
pub fn maslov_tuple_check(
    omega: &Pairing,
    tuple: &[(Presentation, crate::abelian::Orientation)],
    psi: u64,
) -> Result<Value> {
    let subs: Vec<Subgroup> = tuple.iter().map(|(p, _)| p.subgroup().clone()).collect();
    let inv = maslov_invariant_checks(omega, tuple, psi)?;
    let tau = maslov_index(omega, &subs, psi)?;
    let mut rotated = subs.clone();
    rotated.rotate_left(1);
    let cyclic = maslov_index(omega, &rotated, psi)? == tau;
    let reversed: Vec<Subgroup> = subs.iter().rev().cloned().collect();
    let antisymmetry = maslov_index(omega, &reversed, psi)? == tau.inverse();
    let chain = if subs.len() >= 3 {
        let head = maslov_index(omega, &subs[0..3], psi)?;
        let mut rest = vec![subs[0].clone()];
        rest.extend(subs[2..].iter().cloned());
        let tail = maslov_index(omega, &rest, psi)?;
        head.mul(&tail) == tau
    } else {
        true
    };
    let ok = inv.ok && cyclic && antisymmetry && chain;
    Ok(json!({
        "length": subs.len(),
        "lagrangians": subs.iter().map(|s| s.generators()).collect::<Vec<_>>(),
        "orientations": tuple.iter().map(|(_, o)| o.scalar).collect::<Vec<_>>(),
        "invariants": inv,
        "tau": tau.to_string(),
        "cyclic": cyclic,
        "antisymmetry": antisymmetry,
        "chain": chain,
        "ok": ok,
    }))
}

/// Symplectic modules used by the Maslov suite: Ā of the ring, and (Z/p)^4,
/// (Z/p²)² when they have at most 5^4 elements.
pub fn maslov_modules(ring: &LieRing, f: &GroupCharacter) -> Result<Vec<(String, Pairing)>> {
    let p = ring.p();
    let mut out = Vec::new();
    let h = heisenberg_reduction(ring, f)?;
    if !h.omega.left().is_empty() {
        out.push(("reduction".to_string(), h.omega.clone()));
    }
    if p.pow(4) <= 625 {
        for exps in [vec![1, 1, 1, 1], vec![2, 2]] {
            let a = AbelianGroup::new(p, exps.clone())?;
            out.push((format!("{exps:?}"), Pairing::hyperbolic(&a)?));
        }
    }
    Ok(out)
}

pub fn maslov(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::Maslov, opts);
    let count = opts.count.unwrap_or(100);
    let mut modules = Vec::new();
    for (k, (name, omega)) in maslov_modules(ring, f)?.into_iter().enumerate() {
        let lags = enumerate_lagrangians(&omega)?;
        let tuples = oriented_tuples(&omega, &lags, opts.seed.wrapping_add(k as u64), count);
        let keep = tuples.len() <= EXHAUSTIVE_LIMIT;
        for t in &tuples {
            let mut rec = maslov_tuple_check(&omega, t, 1)?;
            let ok = rec["ok"].as_bool().unwrap_or(false);
            rec["module"] = json!(name);
            cert.push(ok, rec, keep);
        }
        modules.push(json!({"module": name, "exponents": omega.left().exponents(), "lagrangians": lags.len(), "tuples": tuples.len()}));
    }
    let session = session_for(ring, 1)?;
    let (nl, ag) = alpha_gamma_triples(ring, f, &session, opts)?;
    let keep = ag.len() <= EXHAUSTIVE_LIMIT;
    for r in &ag {
        let mut v = serde_json::to_value(r).expect("serializable");
        v["module"] = json!("alpha=gamma(tau)");
        cert.push(r.equal, v, keep);
    }
    cert.summary = json!({
        "claim": "Maslov identities on random oriented tuples; alpha = gamma(tau) on Lagrangian triples",
        "modules": modules,
        "reduction_lagrangians": nl,
        "alpha_gamma_triples": ag.len(),
    });
    Ok(cert)
}

fn alpha_gamma_triples(
    ring: &LieRing,
    f: &GroupCharacter,
    session: &Session,
    opts: &Options,
) -> Result<(usize, Vec<AlphaGammaRecord>)> {
    let h = heisenberg_reduction(ring, f)?;
    let n = enumerate_lagrangians(&h.omega)?.len();
    if opts.exhaustive || n.pow(3) <= EXHAUSTIVE_LIMIT {
        alpha_gamma_check(ring, f, session, None)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let t = sample_triples(&mut rng, n, opts.count.unwrap_or(100));
        alpha_gamma_check(ring, f, session, Some(&t))
    }
}

/// Random shapes with at most four cyclic factors and |A| ≤ max(p, 5)^4.
fn random_shape<R: Rng>(rng: &mut R) -> Vec<u32> {
    loop {
        let rank = rng.gen_range(1..=4);
        let mut e: Vec<u32> = (0..rank).map(|_| rng.gen_range(1..=2)).collect();
        if e.iter().sum::<u32>() <= 4 {
            e.sort_unstable_by(|a, b| b.cmp(a));
            return e;
        }
    }
}

pub fn witt(p: u64, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::Witt, opts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let session = Session::new(p, 2)?;
    let count = opts.count.unwrap_or(200);
    let keep = count <= EXHAUSTIVE_LIMIT;
    for _ in 0..count {
        let shape = random_shape(&mut rng);
        let q = QuadraticModule::random(&mut rng, p, &shape)?;
        let class = q.witt_class(1)?;
        let reduced = q.witt_class_reduce(1)?;
        let g = q.gamma(&session)?;
        let g_class = class.gamma(&session)?;
        let fourth = g.pow(4).is_one();
        let ok = class == reduced && fourth && g == g_class;
        cert.push(
            ok,
            json!({
                "exponents": shape,
                "form": q.form().matrix(),
                "witt_class": class.to_string(),
                "witt_class_reduce": reduced.to_string(),
                "gamma": ValueJson::from(&g),
                "gamma_of_class": ValueJson::from(&g_class),
                "gamma_fourth_power_one": fourth,
                "ok": ok,
            }),
            keep,
        );
    }
    cert.summary = json!({
        "claim": "witt_class = witt_class_reduce, gamma^4 = 1, gamma constant on Witt classes",
        "p": p,
        "modules": count,
    });
    Ok(cert)
}

/// (2a·ψ | p)·ε with ε = 1 for p ≡ 1 mod 4 and i otherwise.
pub fn gamma_closed_form(s: &Session, a: u64) -> crate::scalars::Cyclotomic {
    let p = s.p();
    let eps = if p % 4 == 1 { s.one() } else { s.i_pow(1) };
    if is_square_mod(mul_mod(mul_mod(2, a, p), s.psi(), p), p) {
        eps
    } else {
        -&eps
    }
}

/// p^{-1/2} Σ_x exp(2πi ψ a x (x/2) / p) in floating point.
pub fn gamma_float(p: u64, psi: u64, a: u64) -> (f64, f64) {
    let half = inv_mod(2, p).expect("odd prime");
    let (mut re, mut im) = (0.0, 0.0);
    for x in 0..p {
        let e = mul_mod(mul_mod(psi, a, p), mul_mod(x, mul_mod(x, half, p), p), p);
        let t = 2.0 * std::f64::consts::PI * e as f64 / p as f64;
        re += t.cos();
        im += t.sin();
    }
    let s = (p as f64).sqrt();
    (re / s, im / s)
}

pub fn gamma(p: u64, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::Gamma, opts);
    let mut primes = vec![3u64, 5, 7, 13];
    if !primes.contains(&p) {
        primes.push(p);
    }
    for &q in &primes {
        let s = Session::new(q, 1)?;
        let vals: Vec<_> = (0..q).map(|a| if a == 0 { None } else { gamma_scalar(&s, a).ok() }).collect();
        for a in 1..q {
            let g = vals[a as usize].clone().ok_or(Error::NotInvertible)?;
            let want = gamma_closed_form(&s, a);
            let (re, im) = g.to_complex();
            let (fr, fi) = gamma_float(q, 1, a);
            let float_ok = (re - fr).abs() < 1e-9 && (im - fi).abs() < 1e-9;
            let fourth = g.pow(4).is_one();
            let ok = g == want && float_ok && fourth;
            cert.push(
                ok,
                json!({
                    "p": q, "a": a,
                    "gamma": ValueJson::from(&g),
                    "closed_form": ValueJson::from(&want),
                    "float_sum": [fr, fi],
                    "ok": ok,
                }),
                true,
            );
        }
        if q <= 13 {
            let g1 = vals[1].clone().ok_or(Error::NotInvertible)?;
            let mut mult_ok = true;
            for a in 1..q {
                for b in 1..q {
                    let lhs = vals[a as usize].as_ref().unwrap() * vals[b as usize].as_ref().unwrap();
                    let rhs = &g1 * vals[mul_mod(a, b, q) as usize].as_ref().unwrap();
                    mult_ok &= lhs == rhs;
                }
            }
            cert.push(mult_ok, json!({"p": q, "multiplicativity": mult_ok, "pairs": (q - 1) * (q - 1)}), true);
        }
    }
    cert.summary = json!({
        "claim": "gamma(a) = (2a|p) * (1 if p = 1 mod 4 else i); gamma(a)gamma(b) = gamma(1)gamma(ab)",
        "primes": primes,
    });
    Ok(cert)
}

pub fn svn(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let session = session_for(ring, 1)?;
    let h = heisenberg_reduction(ring, f)?;
    let pols = enumerate_polarizations(&h.ring, &h.fbar)?;
    let mut e = Engine::new(&h.ring, &h.fbar, &session)?;
    let report = stone_von_neumann_check(&mut e, &pols)?;
    let mut cert = Certificate::new(Suite::Svn, opts);
    let v = serde_json::to_value(&report).expect("serializable");
    cert.push(report.ok(), v, true);
    cert.summary = json!({
        "claim": "every Lagrangian-induced representation of the Heisenberg reduction has the same character, the unique orbit character with that central character",
        "group_order": h.ring.order(),
        "polarizations": report.polarizations,
    });
    Ok(cert)
}

/// Ψ matrices under ψ = 1 and ψ = 2 for the given oriented pairs.
fn psi_pairs_equal(
    e1: &mut Engine,
    e2: &mut Engine,
    ops: &[OrientedPolarization],
    pairs: &[(usize, usize)],
    cert: &mut Certificate,
) -> Result<()> {
    let keep = pairs.len() <= EXHAUSTIVE_LIMIT;
    for &(i, j) in pairs {
        let a = e1.psi(&ops[i], &ops[j])?;
        let b = e2.psi(&ops[i], &ops[j])?;
        let equal = a == b;
        cert.push(
            equal,
            json!({
                "kind": "psi_matrix",
                "pair": [i, j],
                "orientations": [ops[i].orientation.scalar, ops[j].orientation.scalar],
                "dimension": a.rows,
                "equal": equal,
            }),
            keep,
        );
    }
    Ok(())
}

pub fn root_independence(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::RootIndependence, opts);
    let p = ring.p();
    let s1 = session_for(ring, 1)?;
    let s2 = session_for(ring, 2)?;
    let pols = enumerate_polarizations(ring, f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut ops = Vec::new();
    for pol in &pols {
        ops.push(OrientedPolarization::new(pol.clone(), 1));
        ops.push(OrientedPolarization::new(pol.clone(), random_unit(&mut rng, p)));
    }
    let m = ops.len();
    let pairs: Vec<(usize, usize)> = if opts.exhaustive || m * m <= 256 {
        (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect()
    } else {
        (0..opts.count.unwrap_or(64))
            .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m)))
            .collect()
    };
    let mut e1 = Engine::new(ring, f, &s1)?;
    let mut e2 = Engine::new(ring, f, &s2)?;
    psi_pairs_equal(&mut e1, &mut e2, &ops, &pairs, &mut cert)?;

    let triples = compat_triples(pols.len(), p, opts);
    let (r1, _) = compat_report(ring, f, &s1, &pols, &triples, opts.jobs)?;
    let (r2, _) = compat_report(ring, f, &s2, &pols, &triples, opts.jobs)?;
    let same = r1.ok() == r2.ok() && r1.checked == r2.checked;
    cert.push(
        r1.ok() && r2.ok() && same,
        json!({"kind": "compat", "triples": triples.len(), "passed_psi1": r1.ok(), "passed_psi2": r2.ok()}),
        true,
    );

    let (_, a1) = alpha_gamma_triples(ring, f, &s1, opts)?;
    let (_, a2) = alpha_gamma_triples(ring, f, &s2, opts)?;
    let ok1 = a1.iter().all(|r| r.equal);
    let ok2 = a2.iter().all(|r| r.equal);
    let same_alpha = a1.iter().zip(&a2).all(|(x, y)| x.alpha == y.alpha);
    cert.push(
        ok1 && ok2 && same_alpha,
        json!({"kind": "alpha_gamma_tau", "triples": a1.len(), "passed_psi1": ok1, "passed_psi2": ok2, "same_alpha": same_alpha}),
        true,
    );
    cert.summary = json!({
        "claim": "replacing x -> zeta_p^x by x -> zeta_p^{2x} changes neither Psi nor any pass result",
        "psi_pairs": pairs.len(),
    });
    Ok(cert)
}

/// Chain certification and the product decomposition of α along it.
pub fn chain_record(
    ring: &LieRing,
    f: &GroupCharacter,
    engine: &mut Engine,
    p1: &Polarization,
    p2: &Polarization,
    p3: &Polarization,
) -> Result<(bool, Value)> {
    let chain = neighbor_chain(ring, f, p1, p2)?;
    let nodes_ok = chain.iter().all(|q| is_polarization(ring, f, q.subgroup()).ok());
    let links_ok = chain.windows(2).all(|w| neighbor_check(ring, &w[0], &w[1]));
    let ends_ok = chain.first() == Some(p1) && chain.last() == Some(p2);
    let (direct, product) = if chain.len() >= 2 {
        chain_product_check(engine, &chain, p3)?
    } else {
        let one = engine.session().one();
        let i = engine.add(p1);
        let k = engine.add(p3);
        let d = engine.alpha_formula(i, i, k);
        (engine.to_cyclotomic(&d), one)
    };
    let ok = nodes_ok && links_ok && ends_ok && direct == product;
    Ok((
        ok,
        json!({
            "chain": generators(&chain),
            "nodes_certified": nodes_ok,
            "links_certified": links_ok,
            "alpha_direct": ValueJson::from(&direct),
            "alpha_product": ValueJson::from(&product),
            "ok": ok,
        }),
    ))
}

pub fn chain(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::Chain, opts);
    let session = session_for(ring, 1)?;
    let pols = enumerate_polarizations(ring, f)?;
    let n = pols.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut e = Engine::new(ring, f, &session)?;
    let count = opts.count.unwrap_or(20);
    for _ in 0..count {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n);
        if n > 1 && b == a {
            b = (a + 1 + rng.gen_range(0..n - 1)) % n;
        }
        let c = rng.gen_range(0..n);
        let (ok, mut rec) = chain_record(ring, f, &mut e, &pols[a], &pols[b], &pols[c])?;
        rec["pair"] = json!([a, b]);
        rec["third"] = json!(c);
        cert.push(ok, rec, true);
    }
    cert.summary = json!({
        "claim": "neighbor chains are certified and alpha factors along them",
        "polarizations": generators(&pols),
    });
    Ok(cert)
}

fn random_in<R: Rng>(rng: &mut R, s: &Subgroup) -> Element {
    let pres = Presentation::canonical(s);
    let a = s.ambient();
    let mut x = a.zero();
    for (b, &e) in pres.basis().iter().zip(pres.group().exponents()) {
        let c = rng.gen_range(0..a.p().pow(e));
        x = a.add(&x, &a.scale(c, b));
    }
    x
}

/// θ for one pair under `per_pair` random rechoices of the basis of p1∩p2,
/// the lifts of the quotient bases and the presentations of p1, p2. Lift and
/// presentation rechoices must give the same θ; a basis change of p1∩p2 by a
/// matrix of determinant r rescales θ by r², so its square class is compared.
pub fn rechoice_check(
    form: &Pairing,
    op1: &OrientedPolarization,
    op2: &OrientedPolarization,
    per_pair: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(bool, Value)> {
    let p = form.left().p();
    let base = relative_orientation_choosing(
        form,
        (&op1.presentation, op1.orientation),
        (&op2.presentation, op2.orientation),
        1,
        &Choices::default(),
    )?;
    let inter = op1.polarization.subgroup().intersect(op2.polarization.subgroup())?;
    let inter_pres = Presentation::canonical(&inter);
    let mut ok = true;
    let mut values = Vec::new();
    for _ in 0..per_pair {
        let r1 = op1.represented_by(op1.presentation.random_basis(rng))?;
        let r2 = op2.represented_by(op2.presentation.random_basis(rng))?;
        let k1 = op1.presentation.basis().len();
        let k2 = op2.presentation.basis().len();
        let choice = Choices {
            inter_basis: None,
            shifts1: (0..k1).map(|_| random_in(rng, &inter)).collect(),
            shifts2: (0..k2).map(|_| random_in(rng, &inter)).collect(),
        };
        let lifts_and_pres = relative_orientation_choosing(
            form,
            (&r1.presentation, r1.orientation),
            (&r2.presentation, r2.orientation),
            1,
            &choice,
        )?;
        let with_inter = Choices {
            inter_basis: Some(inter_pres.random_basis(rng)),
            ..choice
        };
        let all = relative_orientation_choosing(
            form,
            (&r1.presentation, r1.orientation),
            (&r2.presentation, r2.orientation),
            1,
            &with_inter,
        )?;
        let same_class = is_square_mod(all, p) == is_square_mod(base, p);
        ok &= lifts_and_pres == base && same_class;
        values.push([lifts_and_pres, all]);
    }
    Ok((ok, json!({"theta": base, "rechoices": values, "ok": ok})))
}

pub fn choice(ring: &LieRing, f: &GroupCharacter, opts: &Options) -> Result<Certificate> {
    let mut cert = Certificate::new(Suite::Choice, opts);
    let p = ring.p();
    let pols = enumerate_polarizations(ring, f)?;
    let n = pols.len();
    let form = skew_form(ring, f).pairing;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let limit = opts.count.unwrap_or(100);
    if !opts.exhaustive && pairs.len() > limit {
        pairs.shuffle(&mut rng);
        pairs.truncate(limit);
    }
    for (i, j) in pairs {
        let op1 = OrientedPolarization::new(pols[i].clone(), random_unit(&mut rng, p));
        let op2 = OrientedPolarization::new(pols[j].clone(), random_unit(&mut rng, p));
        let (ok, mut rec) = rechoice_check(&form, &op1, &op2, 20, &mut rng)?;
        rec["pair"] = json!([i, j]);
        cert.push(ok, rec, true);
    }
    cert.summary = json!({
        "claim": "relative orientation is unchanged by rechoosing lifts and presentations, and keeps its square class under a new basis of the intersection",
        "rechoices_per_pair": 20,
    });
    Ok(cert)
}

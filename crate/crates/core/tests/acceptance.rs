//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitforge::abelian::{AbelianGroup, GroupCharacter, Pairing, Subgroup};
use orbitforge::catalog;
use orbitforge::liering::LieRing;
use orbitforge::polar::{enumerate_lagrangians, enumerate_polarizations, neighbor_check};
use orbitforge::rep::{orbit_method_check, Engine};
use orbitforge::suites::{self, alpha_gamma_check, maslov_tuple_check, oriented_tuples, Certificate, Options};
use orbitforge::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ring(name: &str) -> (LieRing, GroupCharacter) {
    catalog::by_name(name).expect("bundled ring")
}

fn run(suite: suites::Suite, name: &str, opts: &Options) -> Result<Certificate> {
    let (r, f) = ring(name);
    suites::run(suite, &r, &f, opts)
}

fn summary(c: &Certificate, key: &str) -> u64 {
    c.summary[key].as_u64().unwrap_or(0)
}

/// Triples with a disagreeing α method or |α| ≠ 1 anywhere in a certificate.
fn disagreements(c: &Certificate) -> usize {
    c.records
        .iter()
        .chain(c.counterexample.iter())
        .filter(|r| r.get("methods_agree").and_then(|v| v.as_bool()) == Some(false))
        .count()
}

fn exhaustive() -> Options {
    Options {
        exhaustive: true,
        ..Options::default()
    }
}

fn c1(seen: &mut Vec<Certificate>) -> Result<Outcome> {
    let t = Instant::now();
    let c = run(suites::Suite::Compat, "heisenberg_3", &Options::default())?;
    let secs = t.elapsed().as_secs_f64();
    let ok = c.passed && c.checked == 128 && summary(&c, "dense_cycles") == 128 && secs < 10.0;
    let d = format!(
        "Heisenberg (Z/3)^2: {} triples (64 unit + 64 random orientations), {} dense Psi cycles equal to Id, {:.2} s",
        c.checked,
        summary(&c, "dense_cycles"),
        secs
    );
    seen.push(c);
    Ok(outcome(ok, d))
}

fn c2(seen: &mut Vec<Certificate>) -> Result<Outcome> {
    let t = Instant::now();
    let h9 = run(suites::Suite::Compat, "heisenberg_9", &Options::default())?;
    let (r9, f9) = ring("heisenberg_9");
    let special = Subgroup::from_generators(r9.carrier(), &[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 1]]);
    let has_special = enumerate_polarizations(&r9, &f9)?.iter().any(|p| *p.subgroup() == special);
    let n9 = enumerate_polarizations(&r9, &f9)?.len();
    let mixed = run(suites::Suite::Compat, "heisenberg_mixed", &exhaustive())?;
    let (rm, fm) = ring("heisenberg_mixed");
    let nm = enumerate_polarizations(&rm, &fm)?.len();
    let ut4 = run(suites::Suite::Compat, "ut4_5", &Options { seed: 2, ..Options::default() })?;
    let (ru, fu) = ring("ut4_5");
    let nu = enumerate_polarizations(&ru, &fu)?.len();
    let random_ut4 = ut4.checked - nu.pow(3);
    let ok = h9.passed
        && h9.checked >= n9.pow(3)
        && has_special
        && mixed.passed
        && mixed.checked >= nm.pow(3)
        && ut4.passed
        && random_ut4 >= 50;
    let d = format!(
        "Z/9+Z/9: all {}^3 triples (<(3,0),(0,3)> present: {}); mixed: all {}^3 = {} triples; UT4(F5): {} unit triples + {} seeded random-orientation triples; {:.1} s",
        n9,
        has_special,
        nm,
        nm.pow(3),
        nu.pow(3),
        random_ut4,
        t.elapsed().as_secs_f64()
    );
    seen.extend([h9, mixed, ut4]);
    Ok(outcome(ok, d))
}

fn c3(seen: &mut Vec<Certificate>) -> Result<Outcome> {
    let t = Instant::now();
    let ut4 = run(suites::Suite::Reduction, "ut4_5", &Options::default())?;
    let h9 = run(suites::Suite::Reduction, "heisenberg_9", &Options::default())?;
    let mixed = run(suites::Suite::Reduction, "heisenberg_mixed", &exhaustive())?;
    let ok = ut4.passed && ut4.checked >= 50 && h9.passed && mixed.passed && summary(&mixed, "failures") == 0;
    let d = format!(
        "UT4(F5): {} triples; Z/9+Z/9: {} triples; mixed: {} triples (exhaustive); {:.1} s",
        ut4.checked,
        h9.checked,
        mixed.checked,
        t.elapsed().as_secs_f64()
    );
    seen.extend([ut4, h9, mixed]);
    Ok(outcome(ok, d))
}

fn alpha_gamma(p: u64, psi: u64) -> Result<(usize, usize, bool)> {
    let (r, f) = catalog::heisenberg(p, 1);
    let s = suites::session_for(&r, psi)?;
    let (lags, recs) = alpha_gamma_check(&r, &f, &s, None)?;
    Ok((lags, recs.len(), recs.iter().all(|x| x.equal)))
}

fn c4() -> Result<Outcome> {
    let (l3, n3, ok3) = alpha_gamma(3, 1)?;
    let (l5, n5, ok5) = alpha_gamma(5, 1)?;
    let ok = ok3 && ok5 && n3 == l3.pow(3) && n5 == l5.pow(3) && l3 == 4 && l5 == 6;
    Ok(outcome(
        ok,
        format!("alpha = gamma(tau) on all {n3} Lagrangian triples of (Z/3)^2 and all {n5} of (Z/5)^2"),
    ))
}

fn c5(seen: &[Certificate]) -> Result<Outcome> {
    let recorded: usize = seen.iter().map(|c| c.checked).sum();
    let bad: usize = seen.iter().map(disagreements).sum();
    let mut sweep = 0usize;
    let mut neighbor_used = 0usize;
    let mut sweep_ok = true;
    for name in ["heisenberg_3", "heisenberg_9", "ut4_5", "abelian_27"] {
        let (r, f) = ring(name);
        let s = suites::session_for(&r, 1)?;
        let mut e = Engine::new(&r, &f, &s)?;
        let ids: Vec<usize> = enumerate_polarizations(&r, &f)?.iter().map(|p| e.add(p)).collect();
        for &a in &ids {
            for &b in &ids {
                for &c in &ids {
                    let v = e.alpha_all(a, b, c, None);
                    sweep += 1;
                    neighbor_used += v.neighbor.is_some() as usize;
                    sweep_ok &= v.agree() && v.is_unit();
                }
            }
        }
    }
    Ok(outcome(
        bad == 0 && sweep_ok,
        format!(
            "{recorded} alpha comparisons in criteria 1-3 without disagreement; sweep of {sweep} triples (neighbor formula on {neighbor_used}) all agree with |alpha| = 1"
        ),
    ))
}

fn c6() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, r, _) in catalog::all() {
        let rep = orbit_method_check(&r)?;
        ok &= rep.ok();
        parts.push(format!("{name}: {} orbits, sum dim^2 = {} = |G|", rep.orbits, rep.dimension_squares));
    }
    Ok(outcome(ok, parts.join("; ")))
}

fn c7() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["heisenberg_3", "heisenberg_9", "heisenberg_mixed", "ut4_5"] {
        let c = run(suites::Suite::Svn, name, &Options::default())?;
        ok &= c.passed;
        parts.push(format!("{name}: {} Lagrangian models, one character", summary(&c, "polarizations")));
    }
    Ok(outcome(ok, parts.join("; ")))
}

fn c8(seen: &mut Vec<Certificate>) -> Result<Outcome> {
    let witt5 = suites::witt(5, &Options { seed: 8, count: Some(200), ..Options::default() })?;
    let witt3 = suites::witt(3, &Options { seed: 9, count: Some(200), ..Options::default() })?;
    let mut tuples = 0usize;
    let mut ok = witt5.passed && witt3.passed;
    for (seed, exps) in [(10u64, vec![1, 1, 1, 1]), (11, vec![2, 2])] {
        let a = AbelianGroup::new(3, exps)?;
        let w = Pairing::hyperbolic(&a)?;
        let lags = enumerate_lagrangians(&w)?;
        for t in oriented_tuples(&w, &lags, seed, 100) {
            let rec = maslov_tuple_check(&w, &t, 1)?;
            ok &= rec["ok"] == serde_json::Value::Bool(true);
            tuples += 1;
        }
    }
    let d = format!(
        "witt_class = witt_class_reduce on {} modules (p = 5) and {} (p = 3); {tuples} oriented tuples (m <= 5) over (Z/3)^4 and Z/9+Z/9 satisfy length, discriminant, coboundary, cyclic, antisymmetry and chain identities",
        witt5.checked, witt3.checked
    );
    seen.extend([witt5, witt3]);
    Ok(outcome(ok, d))
}

fn c9(seen: &[Certificate]) -> Result<Outcome> {
    let g = suites::gamma(3, &Options::default())?;
    let witt_ok = seen.iter().filter(|c| c.suite == "witt").all(|c| c.passed);
    let n_witt = seen.iter().filter(|c| c.suite == "witt").count();
    Ok(outcome(
        g.passed && witt_ok && n_witt > 0,
        format!(
            "closed form, float rendering and gamma^4 = 1 for every a and p in {{3,5,7,13}}, multiplicativity for all pairs ({} checks); gamma^4 = 1 and Witt-class constancy on the random module sets",
            g.checked
        ),
    ))
}

fn c10() -> Result<Outcome> {
    let (r, f) = ring("ut4_5");
    let pols = enumerate_polarizations(&r, &f)?;
    let s = suites::session_for(&r, 1)?;
    let mut e = Engine::new(&r, &f, &s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = pols.len();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    pairs.shuffle(&mut rng);
    pairs.sort_by_key(|&(i, j)| neighbor_check(&r, &pols[i], &pols[j]));
    pairs.truncate(24);
    let mut ok = true;
    let mut long = 0usize;
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let third = &pols[(i + j + k) % n];
        let (good, rec) = suites::chain_record(&r, &f, &mut e, &pols[i], &pols[j], third)?;
        ok &= good;
        long += (rec["chain"].as_array().map(|c| c.len()).unwrap_or(0) >= 3) as usize;
    }
    Ok(outcome(
        ok && long > 0,
        format!(
            "UT4(F5): {} seeded pairs ({long} need a chain of length >= 3), every node and link certified, chain product equals alpha",
            pairs.len()
        ),
    ))
}

fn c11() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, name) in [(3u64, "heisenberg_3"), (5, "heisenberg(5,1)")] {
        let (r, f) = catalog::heisenberg(p, 1);
        let c = suites::root_independence(&r, &f, &Options::default())?;
        ok &= c.passed;
        parts.push(format!("{name}: {} Psi matrices identical", summary(&c, "psi_pairs")));
    }
    let (_, _, ok3) = alpha_gamma(3, 2)?;
    let (_, _, ok5) = alpha_gamma(5, 2)?;
    ok &= ok3 && ok5;
    Ok(outcome(
        ok,
        format!("{}; criteria 1 and 4 pass again with x -> zeta_p^(2x)", parts.join("; ")),
    ))
}

fn c12() -> Result<Outcome> {
    let mut ok = true;
    let mut pairs = 0usize;
    for name in ["heisenberg_3", "heisenberg_9", "heisenberg_mixed", "ut4_5"] {
        let c = run(suites::Suite::Choice, name, &Options { seed: 12, ..Options::default() })?;
        ok &= c.passed;
        pairs += c.checked;
    }
    Ok(outcome(
        ok,
        format!("{pairs} oriented pairs x 20 rechoices of intersection basis, lifts and presentations"),
    ))
}

fn main() -> ExitCode {
    let mut seen = Vec::new();
    let mut all = true;
    let mut report = |k: usize, title: &str, r: Result<Outcome>| {
        let o = r.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        all &= o.passed;
        println!("criterion {k:>2} [{title}]: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    };
    let t = Instant::now();
    report(1, "compatibility, small Heisenberg", c1(&mut seen));
    report(2, "compatibility, larger rings", c2(&mut seen));
    report(3, "reduction", c3(&mut seen));
    report(4, "alpha = gamma(tau)", c4());
    report(5, "alpha methods agree", c5(&seen));
    report(6, "orbit method", c6());
    report(7, "Stone-von Neumann", c7());
    report(8, "Witt and Maslov", c8(&mut seen));
    report(9, "gamma", c9(&seen));
    report(10, "chains", c10());
    report(11, "root independence", c11());
    report(12, "choice independence", c12());
    println!("acceptance: {} in {:.1} s", if all { "all criteria pass" } else { "FAILURES" }, t.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use orbitforge::abelian::{GroupCharacter, Presentation};
use orbitforge::io::{self, PolarizationDoc};
use orbitforge::liering::LieRing;
use orbitforge::polar::{
    enumerate_polarizations, find_polarization, heisenberg_reduction, is_polarization, neighbor_check,
    OrientedPolarization,
};
use orbitforge::rep::{character_table, Engine, ValueJson};
use orbitforge::suites::{self, Options, Suite};
use orbitforge::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Validate,
    Orbits,
    Chartable,
    Polarize,
    Chain,
    Alpha,
    Verify,
}

/// Exact orbit-method computations for finite p-groups given as Lie rings.
#[derive(Debug, Parser)]
#[command(name = "orbitforge", version)]
struct Cli {
    command: Command,
    /// Lie ring JSON file.
    #[arg(long)]
    ring: PathBuf,
    /// Functional JSON file; defaults to the one stored with the ring.
    #[arg(long)]
    functional: Option<PathBuf>,
    /// Oriented polarizations JSON file for chain and alpha.
    #[arg(long)]
    polarizations: Option<PathBuf>,
    /// Comma-separated indices into the polarization list (chain: two, optionally
    /// a third for the α product; alpha: three).
    #[arg(long, value_delimiter = ',')]
    pick: Vec<usize>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Enumerate all triples even for large rings.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Bad input: exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

struct Outcome {
    report: Value,
    passed: bool,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_ring(cli: &Cli) -> Result<(LieRing, Option<GroupCharacter>), Failure> {
    Ok(io::parse_ring(&read(&cli.ring)?)?)
}

fn load_functional(cli: &Cli, ring: &LieRing, stored: Option<GroupCharacter>) -> Result<GroupCharacter, Failure> {
    match &cli.functional {
        Some(path) => Ok(io::parse_functional(&read(path)?, ring.carrier())?),
        None => stored.ok_or_else(|| Failure("no functional given and none stored with the ring".into())),
    }
}

/// Oriented polarizations from --polarizations, or all polarizations with unit orientation.
fn load_polarizations(cli: &Cli, ring: &LieRing, f: &GroupCharacter) -> Result<Vec<OrientedPolarization>, Failure> {
    match &cli.polarizations {
        Some(path) => Ok(io::parse_polarizations(&read(path)?, ring, f)?),
        None => Ok(enumerate_polarizations(ring, f)?
            .into_iter()
            .map(|p| OrientedPolarization::new(p, 1))
            .collect()),
    }
}

fn picked(cli: &Cli, ops: &[OrientedPolarization], k: usize) -> Result<Vec<OrientedPolarization>, Failure> {
    let idx: Vec<usize> = if cli.pick.is_empty() {
        (0..k).map(|i| i.min(ops.len().saturating_sub(1))).collect()
    } else {
        cli.pick.clone()
    };
    if idx.len() != k {
        return Err(Failure(format!("--pick needs {k} indices")));
    }
    idx.iter()
        .map(|&i| {
            ops.get(i)
                .cloned()
                .ok_or_else(|| Failure(format!("polarization index {i} out of range ({})", ops.len())))
        })
        .collect()
}

fn validate(cli: &Cli) -> Result<Outcome, Failure> {
    let doc: io::RingDoc =
        serde_json::from_str(&read(&cli.ring)?).map_err(|e| Failure(e.to_string()))?;
    match doc.build() {
        Ok((ring, f)) => {
            let report = ring.lower_central_series_report();
            Ok(Outcome {
                report: json!({
                    "valid": true,
                    "p": ring.p(),
                    "exponents": ring.carrier().exponents(),
                    "order": ring.order(),
                    "class": report.class,
                    "lower_central_series": report.lower_central_series,
                    "center": ring.center().generators(),
                    "functional": f.map(|f| f.coeffs().to_vec()),
                }),
                passed: true,
            })
        }
        Err(e @ (Error::InvalidLieRing { .. } | Error::ClassTooLarge { .. })) => Ok(Outcome {
            report: json!({"valid": false, "error": e.to_string()}),
            passed: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn orbits(cli: &Cli) -> Result<Outcome, Failure> {
    let (ring, _) = load_ring(cli)?;
    let p = ring.p();
    let list: Vec<Value> = ring
        .all_orbits()
        .iter()
        .map(|o| {
            json!({
                "size": o.size(),
                "dimension": o.half_len().map(|d| p.pow(d)),
                "representative": o.representative().coeffs(),
            })
        })
        .collect();
    let total: usize = list.iter().map(|o| o["size"].as_u64().unwrap_or(0) as usize).sum();
    Ok(Outcome {
        report: json!({"orbits": list.len(), "dual_order": total, "list": list}),
        passed: true,
    })
}

fn chartable(cli: &Cli) -> Result<Outcome, Failure> {
    let (ring, _) = load_ring(cli)?;
    let session = suites::session_for(&ring, 1)?;
    let table = character_table(&ring);
    let orbits = ring.all_orbits();
    let classes: Vec<Value> = table
        .classes
        .iter()
        .map(|c| json!({"representative": c[0], "size": c.len()}))
        .collect();
    let rows: Vec<Value> = table
        .values
        .iter()
        .zip(&orbits)
        .zip(&table.dims)
        .map(|((vals, o), d)| {
            let values: Vec<ValueJson> = vals.iter().map(|v| ValueJson::from(&v.to_cyclotomic(&session))).collect();
            json!({
                "orbit_representative": o.representative().coeffs(),
                "orbit_size": o.size(),
                "dimension": d,
                "values": values,
            })
        })
        .collect();
    Ok(Outcome {
        report: json!({"group_order": ring.order(), "classes": classes, "rows": rows}),
        passed: true,
    })
}

fn polarize(cli: &Cli) -> Result<Outcome, Failure> {
    let (ring, stored) = load_ring(cli)?;
    let f = load_functional(cli, &ring, stored)?;
    let pol = find_polarization(&ring, &f)?;
    let cert = is_polarization(&ring, &f, pol.subgroup());
    let pres = Presentation::canonical(pol.subgroup());
    let op = OrientedPolarization::new(pol.clone(), 1);
    Ok(Outcome {
        report: json!({
            "functional": f.coeffs(),
            "polarization": PolarizationDoc::from_oriented(&op),
            "order_exponents": pres.group().exponents(),
            "certificate": cert,
        }),
        passed: cert.ok(),
    })
}

fn chain(cli: &Cli) -> Result<Outcome, Failure> {
    let (ring, stored) = load_ring(cli)?;
    let f = load_functional(cli, &ring, stored)?;
    let ops = load_polarizations(cli, &ring, &f)?;
    let ends = picked(cli, &ops, if cli.pick.len() == 3 { 3 } else { 2 })?;
    let (p1, p2) = (&ends[0].polarization, &ends[1].polarization);
    let p3 = &ends.get(2).unwrap_or(&ends[0]).polarization;
    let session = suites::session_for(&ring, 1)?;
    let mut engine = Engine::new(&ring, &f, &session)?;
    let (ok, rec) = suites::chain_record(&ring, &f, &mut engine, p1, p2, p3)?;
    Ok(Outcome {
        report: json!({"neighbors": neighbor_check(&ring, p1, p2), "result": rec}),
        passed: ok,
    })
}

fn alpha(cli: &Cli) -> Result<Outcome, Failure> {
    let (ring, stored) = load_ring(cli)?;
    let f = load_functional(cli, &ring, stored)?;
    let ops = load_polarizations(cli, &ring, &f)?;
    let t = picked(cli, &ops, 3)?;
    let session = suites::session_for(&ring, 1)?;
    let mut e = Engine::new(&ring, &f, &session)?;
    let ids: Vec<usize> = t.iter().map(|op| e.add(&op.polarization)).collect();
    let v = e.alpha_all(ids[0], ids[1], ids[2], None);
    let h = heisenberg_reduction(&ring, &f)?;
    let mut red = Engine::new(&h.ring, &h.fbar, &session)?;
    let rids: Vec<usize> = t
        .iter()
        .map(|op| red.add(&h.reduce_polarization(&op.polarization)))
        .collect();
    let reduced = red.alpha_formula(rids[0], rids[1], rids[2]);
    let reduced = red.to_cyclotomic(&reduced);
    let mut betas = Vec::new();
    let mut prod = session.one();
    for (x, y) in [(0, 1), (1, 2), (2, 0)] {
        let theta = e.theta(&t[x], &t[y])?;
        let b = e.beta(&t[x], &t[y])?;
        prod = &prod * &b;
        betas.push(json!({"pair": [x, y], "theta": theta, "beta": ValueJson::from(&b)}));
    }
    let agree = v.agree() && v.is_unit();
    let compatible = prod == v.compose;
    Ok(Outcome {
        report: json!({
            "polarizations": t.iter().map(PolarizationDoc::from_oriented).collect::<Vec<_>>(),
            "alpha_compose": ValueJson::from(&v.compose),
            "alpha_formula": ValueJson::from(&v.formula),
            "alpha_neighbor": v.neighbor.as_ref().map(ValueJson::from),
            "alpha_reduced": ValueJson::from(&reduced),
            "methods_agree": agree,
            "reduction_equal": reduced == v.compose,
            "betas": betas,
            "beta_product_equals_alpha": compatible,
        }),
        passed: agree && compatible && reduced == v.compose,
    })
}

fn verify(cli: &Cli) -> Result<Outcome, Failure> {
    let name = cli
        .suite
        .as_deref()
        .ok_or_else(|| Failure("verify needs --suite".into()))?;
    let suite: Suite = name.parse()?;
    let (ring, stored) = load_ring(cli)?;
    let f = load_functional(cli, &ring, stored)?;
    let opts = Options {
        seed: cli.seed,
        count: cli.count,
        jobs: cli.jobs.max(1),
        exhaustive: cli.exhaustive,
    };
    let cert = suites::run(suite, &ring, &f, &opts)?;
    let passed = cert.passed;
    Ok(Outcome {
        report: serde_json::to_value(&cert).map_err(|e| Failure(e.to_string()))?,
        passed,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let mut out = match cli.command {
        Command::Validate => validate(cli),
        Command::Orbits => orbits(cli),
        Command::Chartable => chartable(cli),
        Command::Polarize => polarize(cli),
        Command::Chain => chain(cli),
        Command::Alpha => alpha(cli),
        Command::Verify => return verify(cli),
    }?;
    if let Value::Object(m) = &mut out.report {
        m.insert("format".into(), json!(io::FORMAT));
        m.insert("command".into(), json!(format!("{:?}", cli.command).to_lowercase()));
        m.insert("passed".into(), json!(out.passed));
    }
    Ok(out)
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure(e.to_string()))? + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|o| emit(&cli, &o.report).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("{}", json!({"format": io::FORMAT, "error": msg}));
            ExitCode::from(2)
        }
    }
}

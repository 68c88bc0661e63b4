//! Command-line front end: load a JSON document, run one check, print a JSON
//! report. Exit code 0 is an affirmative verdict, 1 a negative verdict with
//! its witness in the report, 2 an error.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use divfan_core::fan::{
    quasiprojectivity_check, separatedness_check, toric_quasiprojectivity, CertificatePolicy,
};
use divfan_core::galois::{
    fan_automorphism_group, orbit_subfan, toric_descent_check, tvariety_descent_check,
    verify_galois_action,
};
use divfan_core::lp::LinearProgram;
use divfan_core::ppdiv::{search_face, verify_face};
use divfan_core::rat::{format_rat, parse_rat, QVec};

use divfan_cli::document::{self, Document};

const DEFAULT_FACE_BOUND: u32 = 4;

#[derive(Parser)]
#[command(
    name = "divfan",
    about = "Exact calculus of polyhedral divisors, divisorial fans and semilinear actions",
    version
)]
struct Cli {
    /// Number of worker threads for the data-parallel checks. Results are
    /// independent of this setting.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DocArg {
    /// Path to the JSON document.
    document: String,
}

#[derive(Subcommand)]
enum Command {
    /// Re-verify fan well-formedness: intersection closure and the recorded
    /// face certificates (searching where missing).
    Validate {
        #[command(flatten)]
        doc: DocArg,
        /// Check one fan only (default: every fan in the document).
        #[arg(long)]
        fan: Option<String>,
        /// Face-search bound (or the DIVFAN_BOUND environment variable).
        #[arg(long)]
        bound: Option<u32>,
        /// Write the canonical re-serialization of the document here.
        #[arg(long)]
        canonical_out: Option<String>,
    },
    /// Evaluate a polyhedral divisor at a lattice functional.
    Eval {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        ppdivisor: String,
        /// Comma-separated coordinates, e.g. "1" or "2,-1".
        #[arg(long)]
        m: String,
    },
    /// Search a face certificate for sub ⪯ super and verify it.
    Face {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        sub: String,
        #[arg(long = "super")]
        sup: String,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Localize a polyhedral divisor by a section of its evaluation.
    Localize {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        ppdivisor: String,
        #[arg(long)]
        m: String,
        /// The section as an inline JSON function record.
        #[arg(long)]
        f: String,
    },
    /// Valuative separatedness of a fan on a curve base.
    Separated {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        fan: String,
    },
    /// Quasi-projectivity: search a strictly concave support function.
    Qp {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        fan: Option<String>,
        #[arg(long)]
        toric: Option<String>,
        /// Dump the feasibility program as JSON for debugging.
        #[arg(long)]
        dump_lp: Option<String>,
    },
    /// The lattice automorphism group of a toric fan.
    Aut {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        toric: String,
    },
    /// Verify a semilinear group action on a fan.
    ActionVerify {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        fan: String,
        #[arg(long)]
        action: String,
    },
    /// The orbit subfan of a member under a verified action.
    Orbit {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        fan: String,
        #[arg(long)]
        action: String,
        #[arg(long)]
        member: String,
    },
    /// Descent check: every orbit subfan must be quasi-projective.
    Descent {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        fan: Option<String>,
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        toric: Option<String>,
        #[arg(long)]
        hom: Option<String>,
    },
    /// Run the randomized property suites.
    Selftest {
        /// Percentage of the full case counts.
        #[arg(long, default_value_t = 100)]
        scale: usize,
    },
}

fn face_bound(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("DIVFAN_BOUND")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_FACE_BOUND)
}

fn parse_functional(s: &str) -> Result<QVec> {
    let coords = s
        .split(',')
        .map(|part| parse_rat(part.trim()).map_err(|e| anyhow!("{e}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(QVec(coords))
}

struct Report {
    verdict: bool,
    witness: Value,
    extra: BTreeMap<String, Value>,
}

impl Report {
    fn affirmative() -> Report {
        Report {
            verdict: true,
            witness: Value::Null,
            extra: BTreeMap::new(),
        }
    }

    fn negative(witness: Value) -> Report {
        Report {
            verdict: false,
            witness,
            extra: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: Value) -> Report {
        self.extra.insert(key.to_string(), value);
        self
    }

    fn print(&self, started: Instant) -> ExitCode {
        let mut obj = serde_json::Map::new();
        obj.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
        obj.insert("verdict".into(), json!(self.verdict));
        obj.insert("witness".into(), self.witness.clone());
        obj.insert(
            "timing_ms".into(),
            json!(started.elapsed().as_millis() as u64),
        );
        for (k, v) in &self.extra {
            obj.insert(k.clone(), v.clone());
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(obj)).expect("report")
        );
        if self.verdict {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn load(path: &str) -> Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    Document::parse(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let jobs = cli.jobs.max(1);
    let outcome = divfan_core::par::with_jobs(jobs, || run(cli.command, started));
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let report = json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "error": format!("{err:#}"),
                "timing_ms": started.elapsed().as_millis() as u64,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).expect("report"));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, started: Instant) -> Result<ExitCode> {
    match command {
        Command::Validate {
            doc,
            fan,
            bound,
            canonical_out,
        } => {
            let document = load(&doc.document)?;
            if let Some(path) = canonical_out {
                std::fs::write(&path, document.dump())
                    .with_context(|| format!("cannot write {path}"))?;
            }
            let bound = face_bound(bound);
            let names: Vec<String> = match fan {
                Some(name) => vec![name],
                None => document.fans.keys().cloned().collect(),
            };
            let mut checked = Vec::new();
            for name in &names {
                let (_, fan) = document
                    .fans
                    .get(name)
                    .ok_or_else(|| anyhow!("unknown fan {name}"))?;
                for i in 0..fan.members.len() {
                    for j in 0..fan.members.len() {
                        if i == j {
                            continue;
                        }
                        let meet = fan.members[i].1.intersect(&fan.members[j].1)?;
                        let Some(k) = fan.members.iter().position(|(_, d)| *d == meet) else {
                            return Ok(Report::negative(json!({
                                "fan": name,
                                "missing_intersection": [fan.members[i].0, fan.members[j].0],
                            }))
                            .print(started));
                        };
                        let recorded = fan
                            .edges
                            .iter()
                            .find(|e| e.sub == k && e.sup == i)
                            .map(|e| e.cert.clone());
                        let verified = match recorded {
                            Some(cert) => {
                                verify_face(&fan.members[k].1, &fan.members[i].1, &cert)?.valid
                            }
                            None => {
                                search_face(&fan.members[k].1, &fan.members[i].1, bound)?.is_some()
                            }
                        };
                        if !verified {
                            return Ok(Report::negative(json!({
                                "fan": name,
                                "face_failure": [fan.members[k].0, fan.members[i].0],
                                "bound": bound,
                            }))
                            .print(started));
                        }
                    }
                }
                checked.push(json!(name));
            }
            Ok(Report::affirmative()
                .with("fans", Value::Array(checked))
                .print(started))
        }
        Command::Eval { doc, ppdivisor, m } => {
            let document = load(&doc.document)?;
            let (_, d) = document
                .ppdivisors
                .get(&ppdivisor)
                .ok_or_else(|| anyhow!("unknown ppdivisor {ppdivisor}"))?;
            let m = parse_functional(&m)?;
            let ev = d.evaluate(&m)?;
            let terms: Vec<Value> = ev
                .terms
                .iter()
                .map(|(p, c)| {
                    json!({
                        "point": match p {
                            divfan_core::base::BasePoint::Infinity => json!("inf"),
                            divfan_core::base::BasePoint::Finite(a) => json!({
                                "a": a.coeffs.iter().map(format_rat).collect::<Vec<_>>()
                            }),
                        },
                        "coeff": format_rat(c),
                    })
                })
                .collect();
            Ok(Report::affirmative()
                .with("divisor", Value::Array(terms))
                .print(started))
        }
        Command::Face {
            doc,
            sub,
            sup,
            bound,
        } => {
            let document = load(&doc.document)?;
            let (_, sub_d) = document
                .ppdivisors
                .get(&sub)
                .ok_or_else(|| anyhow!("unknown ppdivisor {sub}"))?;
            let (_, sup_d) = document
                .ppdivisors
                .get(&sup)
                .ok_or_else(|| anyhow!("unknown ppdivisor {sup}"))?;
            let bound = face_bound(bound);
            match search_face(sub_d, sup_d, bound)? {
                Some(cert) => {
                    let witnesses: Vec<Value> = cert
                        .witnesses
                        .iter()
                        .map(|(m, f)| {
                            json!({
                                "m": m.0.iter().map(format_rat).collect::<Vec<_>>(),
                                "f": document::function_json(f),
                            })
                        })
                        .collect();
                    Ok(Report::affirmative()
                        .with("certificate", Value::Array(witnesses))
                        .print(started))
                }
                None => Ok(Report::negative(json!({
                    "not_found_within_bound": bound,
                    "note": "a missing certificate is not a disproof",
                }))
                .print(started)),
            }
        }
        Command::Localize {
            doc,
            ppdivisor,
            m,
            f,
        } => {
            let document = load(&doc.document)?;
            let (base_name, d) = document
                .ppdivisors
                .get(&ppdivisor)
                .ok_or_else(|| anyhow!("unknown ppdivisor {ppdivisor}"))?;
            let m = parse_functional(&m)?;
            let field = document
                .bases
                .get(base_name)
                .and_then(|(fname, _)| document.fields.get(fname))
                .cloned()
                .unwrap_or_else(divfan_core::arith::NumberField::rationals);
            let f_value: Value = serde_json::from_str(&f).context("--f is a JSON function")?;
            let func = document_function(&field, &f_value)?;
            let localized = d.localize(&m, &func)?;
            Ok(Report::affirmative()
                .with("localized", document::ppdivisor_json(base_name, &localized))
                .print(started))
        }
        Command::Separated { doc, fan } => {
            let document = load(&doc.document)?;
            let (_, f) = document
                .fans
                .get(&fan)
                .ok_or_else(|| anyhow!("unknown fan {fan}"))?;
            let report = separatedness_check(f)?;
            if report.separated {
                Ok(Report::affirmative().print(started))
            } else {
                Ok(Report::negative(json!(report.witness)).print(started))
            }
        }
        Command::Qp {
            doc,
            fan,
            toric,
            dump_lp,
        } => {
            let document = load(&doc.document)?;
            let mut prog = LinearProgram::default();
            let witness = match (&fan, &toric) {
                (Some(name), None) => {
                    let (_, f) = document
                        .fans
                        .get(name)
                        .ok_or_else(|| anyhow!("unknown fan {name}"))?;
                    quasiprojectivity_check(f, Some(&mut prog))?
                }
                (None, Some(name)) => {
                    let t = document
                        .toric_fans
                        .get(name)
                        .ok_or_else(|| anyhow!("unknown toric fan {name}"))?;
                    toric_quasiprojectivity(t.rank, &t.cones)?
                }
                _ => bail!("pass exactly one of --fan or --toric"),
            };
            if let Some(path) = dump_lp {
                let rows: Vec<Value> = prog
                    .constraints
                    .iter()
                    .map(|c| {
                        json!({
                            "coeffs": c.coeffs.iter().map(format_rat).collect::<Vec<_>>(),
                            "relation": if c.relation == divfan_core::lp::Relation::Eq { "=" } else { ">=" },
                            "rhs": format_rat(&c.rhs),
                        })
                    })
                    .collect();
                let dump = json!({
                    "variables": prog.variables,
                    "constraints": rows,
                    "objective": prog.objective.iter().map(format_rat).collect::<Vec<_>>(),
                });
                std::fs::write(&path, serde_json::to_string_pretty(&dump)?)
                    .with_context(|| format!("cannot write {path}"))?;
            }
            match witness {
                Some(h) => {
                    let cells: Vec<Value> = h
                        .cells
                        .iter()
                        .map(|c| {
                            json!({
                                "point": c.point.as_ref().map(|p| format!("{p:?}")),
                                "u": c.u.0.iter().map(format_rat).collect::<Vec<_>>(),
                                "a": format_rat(&c.a),
                            })
                        })
                        .collect();
                    Ok(Report::affirmative()
                        .with("epsilon", json!(format_rat(&h.epsilon)))
                        .with("certificate", Value::Array(cells))
                        .print(started))
                }
                None => Ok(Report::negative(json!({
                    "infeasible": "no strictly concave support function exists",
                }))
                .print(started)),
            }
        }
        Command::Aut { doc, toric } => {
            let document = load(&doc.document)?;
            let t = document
                .toric_fans
                .get(&toric)
                .ok_or_else(|| anyhow!("unknown toric fan {toric}"))?;
            let (autos, group) = fan_automorphism_group(t)?;
            let nontrivial: Vec<Value> = autos
                .iter()
                .filter(|a| a.matrix != divfan_core::rat::QMat::identity(t.rank))
                .map(|a| imat_value(&a.matrix))
                .collect();
            Ok(Report::affirmative()
                .with("group_order", json!(group.order()))
                .with("generators", Value::Array(nontrivial))
                .print(started))
        }
        Command::ActionVerify { doc, fan, action } => {
            let document = load(&doc.document)?;
            let (_, f) = document
                .fans
                .get(&fan)
                .ok_or_else(|| anyhow!("unknown fan {fan}"))?;
            let (_, act) = document
                .actions
                .get(&action)
                .ok_or_else(|| anyhow!("unknown action {action}"))?;
            let report = verify_galois_action(f, act)?;
            if report.valid {
                Ok(Report::affirmative().print(started))
            } else {
                Ok(Report::negative(json!(report.witness)).print(started))
            }
        }
        Command::Orbit {
            doc,
            fan,
            action,
            member,
        } => {
            let document = load(&doc.document)?;
            let (_, f) = document
                .fans
                .get(&fan)
                .ok_or_else(|| anyhow!("unknown fan {fan}"))?;
            let (_, act) = document
                .actions
                .get(&action)
                .ok_or_else(|| anyhow!("unknown action {action}"))?;
            let verdict = verify_galois_action(f, act)?;
            if !verdict.valid {
                return Ok(Report::negative(json!({
                    "action_invalid": verdict.witness,
                }))
                .print(started));
            }
            let morphisms: Vec<_> = act.morphisms.values().cloned().collect();
            let orbit = orbit_subfan(
                f,
                &morphisms,
                &member,
                DEFAULT_FACE_BOUND,
                CertificatePolicy::Skip,
            )?;
            Ok(Report::affirmative()
                .with("members", json!(orbit.member_names()))
                .with("maximal_members", json!(orbit.maximal_members().len()))
                .print(started))
        }
        Command::Descent {
            doc,
            fan,
            action,
            toric,
            hom,
        } => {
            let document = load(&doc.document)?;
            match (fan, action, toric, hom) {
                (Some(fan), Some(action), None, None) => {
                    let (_, f) = document
                        .fans
                        .get(&fan)
                        .ok_or_else(|| anyhow!("unknown fan {fan}"))?;
                    let (_, act) = document
                        .actions
                        .get(&action)
                        .ok_or_else(|| anyhow!("unknown action {action}"))?;
                    let (report, _) = tvariety_descent_check(f, act, DEFAULT_FACE_BOUND)?;
                    let detail = json!({
                        "stable": report.stable,
                        "orbits": report.orbit_results,
                    });
                    if report.conclusion {
                        Ok(Report::affirmative().with("report", detail).print(started))
                    } else {
                        Ok(Report::negative(detail).print(started))
                    }
                }
                (None, None, Some(toric), Some(hom)) => {
                    let t = document
                        .toric_fans
                        .get(&toric)
                        .ok_or_else(|| anyhow!("unknown toric fan {toric}"))?;
                    let (group_name, toric_name, images) = document
                        .homs
                        .get(&hom)
                        .ok_or_else(|| anyhow!("unknown hom {hom}"))?;
                    if *toric_name != toric {
                        bail!("hom {hom} targets toric fan {toric_name}, not {toric}");
                    }
                    let group = document
                        .groups
                        .get(group_name)
                        .ok_or_else(|| anyhow!("unknown group {group_name}"))?;
                    let report = toric_descent_check(t, group, images)?;
                    let detail = json!({
                        "stable": report.stable,
                        "orbits": report.orbit_results,
                    });
                    if report.conclusion {
                        Ok(Report::affirmative().with("report", detail).print(started))
                    } else {
                        Ok(Report::negative(detail).print(started))
                    }
                }
                _ => bail!("pass either --fan with --action, or --toric with --hom"),
            }
        }
        Command::Selftest { scale } => {
            let reports = divfan_core::suites::run_all(scale.max(1))?;
            let mut all_ok = true;
            let mut detail = Vec::new();
            for r in &reports {
                all_ok &= r.passed();
                detail.push(json!({
                    "suite": r.name,
                    "cases": r.cases,
                    "failures": r.failures,
                }));
            }
            if all_ok {
                Ok(Report::affirmative()
                    .with("suites", Value::Array(detail))
                    .print(started))
            } else {
                Ok(Report::negative(Value::Array(detail)).print(started))
            }
        }
    }
}

fn imat_value(m: &divfan_core::rat::QMat) -> Value {
    Value::Array(
        m.rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.0.iter()
                        .map(|x| json!(i64::try_from(x.to_integer()).unwrap_or(0)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn document_function(
    field: &std::sync::Arc<divfan_core::arith::NumberField>,
    v: &Value,
) -> Result<divfan_core::base::RationalFunction> {
    let o = v
        .as_object()
        .ok_or_else(|| anyhow!("function must be a JSON object"))?;
    let parse_el = |val: &Value| -> Result<divfan_core::arith::FieldElement> {
        let coords = val
            .as_array()
            .ok_or_else(|| anyhow!("field elements are arrays of rationals"))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| anyhow!("rationals are strings"))
                    .and_then(|s| parse_rat(s).map_err(|e| anyhow!("{e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(divfan_core::arith::FieldElement::new(field, coords)?)
    };
    let c = parse_el(o.get("c").ok_or_else(|| anyhow!("function needs 'c'"))?)?;
    let mut factors = Vec::new();
    if let Some(items) = o.get("factors").and_then(|f| f.as_array()) {
        for item in items {
            let fo = item
                .as_object()
                .ok_or_else(|| anyhow!("factors are objects"))?;
            let root = parse_el(fo.get("root").ok_or_else(|| anyhow!("factor needs 'root'"))?)?;
            let exp = fo
                .get("exp")
                .and_then(|e| e.as_i64())
                .ok_or_else(|| anyhow!("factor needs integer 'exp'"))?;
            factors.push((root, exp));
        }
    }
    Ok(divfan_core::base::RationalFunction::new(c, factors)?)
}

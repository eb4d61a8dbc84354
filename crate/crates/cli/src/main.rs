//! Command-line front end for the torus bundle classification library.
//!
//! Exit codes: 0 = query answered (including the answer "no"),
//! 1 = usage error, 2 = invalid input, 3 = indeterminate verdict.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use torusbundle::bundle::{Certificate, IsoVerdict, TorusBundle};
use torusbundle::freeprod::{FreeProductSignature, Word};
use torusbundle::rep::LiftOrbitTag;
use torusbundle::schema;
use torusbundle::sl2z::psl::{project, psl_conjugate};
use torusbundle::{
    betti1_flat, canonicalize_lift, compatible_symplectic, decompose, enumerate_lifts,
    euler_module, euler_torsion, fiber_sum, freeprod, is_normal_form, iso, lift_orbit_tag,
    matrix_to_word, project_rep, sl_conjugate, total_space_symplectic, Error, Sl2Matrix,
};

#[derive(Parser)]
#[command(
    name = "torusbundle",
    version,
    about = "Exact classification queries for torus bundles over surfaces"
)]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of a matrix in SL(2,Z), written [[a,b],[c,d]]
    Order { matrix: String },
    /// Express a matrix as a word in the generators s and t
    Word { matrix: String },
    /// Search for Q with Q·A·Q⁻¹ = B, in SL(2,Z) or (with --psl) PSL(2,Z)
    Conj {
        a: String,
        b: String,
        #[arg(long)]
        psl: bool,
    },
    /// Kurosh invariants of the subgroup generated by the given words
    Subgroup {
        /// Free-product signature as comma-separated factor orders.
        #[arg(long, default_value = "2,3")]
        sig: String,
        words: Vec<String>,
    },
    /// Inspect a bundle's monodromy representation
    Rep {
        #[command(subcommand)]
        what: RepCommand,
    },
    /// Lift census of a bundle's projected representation
    Lifts { file: PathBuf },
    /// Decide isomorphism of two bundles
    Iso { first: PathBuf, second: PathBuf },
    /// Euler module of the monodromy and torsion of the bundle's class
    Euler { file: PathBuf },
    /// Symplectic existence flags
    Symplectic { file: PathBuf },
    /// First Betti number of the flat bundle with the same monodromy
    Betti { file: PathBuf },
    /// Split a bundle with central Aᵢ into genus-1 summands
    Decompose { file: PathBuf },
    /// Fiber connected sum of two bundles
    Sum { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand)]
enum RepCommand {
    /// Report whether the document is a valid bundle
    Check { file: PathBuf },
    /// Normal-form certificate of the projected representation
    NormalForm { file: PathBuf },
    /// Lift orbit tag of the canonicalized representation
    OrbitTag { file: PathBuf },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn big(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer text is valid JSON")
}

fn vec2(v: &[BigInt; 2]) -> Value {
    Value::Array(vec![big(&v[0]), big(&v[1])])
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_bundle(path: &Path) -> Result<TorusBundle, Failure> {
    Ok(schema::parse_bundle(&read_file(path)?)?)
}

fn parse_matrix_arg(text: &str) -> Result<Sl2Matrix, Failure> {
    Ok(Sl2Matrix::from_str(text)?)
}

fn emit(json_mode: bool, machine: Value, human: &str) {
    use std::io::Write;
    // Ignore broken pipes so `torusbundle ... | head` exits quietly.
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = if json_mode {
        writeln!(lock, "{machine}")
    } else {
        writeln!(lock, "{human}")
    };
}

fn tag_output(tag: &LiftOrbitTag) -> (Value, String) {
    match tag {
        LiftOrbitTag::MinusInImage(signs) => {
            let signs_text: Vec<String> = signs.iter().map(|s| format!("{s:+}")).collect();
            (
                json!({"kind": "minus_in_image", "signs": signs}),
                format!("minus in image; signs: [{}]", signs_text.join(", ")),
            )
        }
        LiftOrbitTag::MinusFree(mats) => {
            let mats_value: Vec<Value> = mats.iter().map(schema::matrix_to_value).collect();
            let mats_text: Vec<String> = mats.iter().map(|m| m.to_string()).collect();
            let section = if mats_text.is_empty() {
                "(empty)".to_string()
            } else {
                mats_text.join(" ")
            };
            (
                json!({"kind": "minus_free", "matrices": mats_value}),
                format!("minus free; section: {section}"),
            )
        }
    }
}

fn certificate_output(cert: &Certificate) -> (Value, Vec<String>) {
    match cert {
        Certificate::GcdClass(d) => (
            json!({"type": "divisor_class", "value": big(d)}),
            vec![format!("divisor class: {d}")],
        ),
        Certificate::Genus1(c) => {
            let y = c.y.as_ref().map(vec2).unwrap_or(Value::Null);
            let machine = json!({
                "type": "genus1",
                "swapped": c.swapped,
                "conjugator": schema::matrix_to_value(&c.conjugator),
                "sign": c.sign,
                "exponent": c.exponent,
                "x": vec2(&c.x),
                "y": y,
                "normalized": [
                    schema::bundle_to_value(&c.normalized.0),
                    schema::bundle_to_value(&c.normalized.1),
                ],
            });
            let mut lines = vec![
                format!("conjugator: {}", c.conjugator),
                format!("sign: {:+}, exponent: {:+}", c.sign, c.exponent),
                format!("x: ({}, {})", c.x[0], c.x[1]),
            ];
            if let Some(y) = &c.y {
                lines.push(format!("y: ({}, {})", y[0], y[1]));
            }
            if c.swapped {
                lines.push("equations run from the second bundle to the first".into());
            }
            (machine, lines)
        }
        Certificate::Main(c) => {
            let xs: Vec<Value> = c.xs.iter().map(vec2).collect();
            let x0 = c.x0.as_ref().map(vec2).unwrap_or(Value::Null);
            let machine = json!({
                "type": "main",
                "conjugator": schema::matrix_to_value(&c.conjugator),
                "x0": x0,
                "xs": xs,
            });
            let mut lines = vec![format!("conjugator: {}", c.conjugator)];
            if let Some(x0) = &c.x0 {
                lines.push(format!("x0: ({}, {})", x0[0], x0[1]));
            }
            for (i, x) in c.xs.iter().enumerate() {
                lines.push(format!("x{}: ({}, {})", i + 1, x[0], x[1]));
            }
            (machine, lines)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Order { matrix } => {
            let m = parse_matrix_arg(matrix)?;
            match m.order() {
                Some(k) => emit(cli.json, json!({"order": k}), &k.to_string()),
                None => emit(cli.json, json!({"order": null}), "infinite"),
            }
        }
        Command::Word { matrix } => {
            let m = parse_matrix_arg(matrix)?;
            let word = matrix_to_word(&m);
            emit(
                cli.json,
                json!({"word": word.to_string()}),
                &word.to_string(),
            );
        }
        Command::Conj { a, b, psl } => {
            let ma = parse_matrix_arg(a)?;
            let mb = parse_matrix_arg(b)?;
            if *psl {
                match psl_conjugate(&project(&ma), &project(&mb)) {
                    Some(w) => emit(
                        cli.json,
                        json!({"conjugate": true, "conjugator_word": w.to_string()}),
                        &format!("conjugator word: {w}"),
                    ),
                    None => emit(cli.json, json!({"conjugate": false}), "not conjugate"),
                }
            } else {
                match sl_conjugate(&ma, &mb) {
                    Some(q) => emit(
                        cli.json,
                        json!({"conjugate": true, "conjugator": schema::matrix_to_value(&q)}),
                        &format!("conjugator: {q}"),
                    ),
                    None => emit(cli.json, json!({"conjugate": false}), "not conjugate"),
                }
            }
        }
        Command::Subgroup { sig, words } => {
            let orders: Vec<u32> = sig
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure {
                    code: 2,
                    message: format!("bad signature {sig:?}: {e}"),
                })?;
            let signature = FreeProductSignature::new(orders)?;
            let parsed: Vec<Word> = words
                .iter()
                .map(|w| Word::parse(w, &signature))
                .collect::<Result<_, _>>()?;
            let graph = freeprod::build(&signature, &parsed)?;
            let inv = freeprod::kurosh_invariants(&graph);
            let index = freeprod::finite_index(&graph);
            let chi = freeprod::euler_characteristic_check(&graph);
            let factors: Value = inv
                .factor_counts
                .iter()
                .map(|(order, count)| (order.to_string(), json!(count)))
                .collect::<serde_json::Map<String, Value>>()
                .into();
            let machine = json!({
                "free_rank": inv.free_rank,
                "factors": factors,
                "index": index,
                "euler_characteristic": chi.to_string(),
            });
            let index_text = index.map_or("infinite".to_string(), |i| i.to_string());
            emit(
                cli.json,
                machine,
                &format!("{inv}\nindex: {index_text}\neuler characteristic: {chi}"),
            );
        }
        Command::Rep { what } => return run_rep(cli.json, what),
        Command::Lifts { file } => {
            let b = load_bundle(file)?;
            let p = project_rep(b.rep())?;
            if is_normal_form(&p).is_none() {
                return Err(Failure {
                    code: 2,
                    message: "lift census requires a normal-form representation".into(),
                });
            }
            let lifts = enumerate_lifts(&p);
            let mut tags = Vec::new();
            for lift in &lifts {
                let tag = lift_orbit_tag(&canonicalize_lift(lift)?)?;
                if !tags.contains(&tag) {
                    tags.push(tag);
                }
            }
            let outputs: Vec<(Value, String)> = tags.iter().map(tag_output).collect();
            let machine = json!({
                "lifts": lifts.len(),
                "orbit_count": outputs.len(),
                "orbits": outputs.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
            });
            let mut human = format!("lifts: {}\norbits: {}", lifts.len(), outputs.len());
            for (_, line) in &outputs {
                human.push_str(&format!("\n{line}"));
            }
            emit(cli.json, machine, &human);
        }
        Command::Iso { first, second } => {
            let b1 = load_bundle(first)?;
            let b2 = load_bundle(second)?;
            match iso(&b1, &b2)? {
                IsoVerdict::Yes(cert) => {
                    let (cv, lines) = certificate_output(&cert);
                    emit(
                        cli.json,
                        json!({"verdict": "yes", "certificate": cv}),
                        &format!("isomorphic: yes\n{}", lines.join("\n")),
                    );
                }
                IsoVerdict::No(sep) => {
                    emit(
                        cli.json,
                        json!({"verdict": "no", "condition": sep.condition, "detail": sep.detail}),
                        &format!(
                            "isomorphic: no\ncondition: {}\ndetail: {}",
                            sep.condition, sep.detail
                        ),
                    );
                }
                IsoVerdict::Indeterminate(reason) => {
                    emit(
                        cli.json,
                        json!({"verdict": "indeterminate", "reason": reason}),
                        &format!("isomorphic: indeterminate\nreason: {reason}"),
                    );
                    return Ok(3);
                }
            }
        }
        Command::Euler { file } => {
            let b = load_bundle(file)?;
            let module = euler_module(b.rep());
            let torsion = euler_torsion(&b);
            let torsion_list: Vec<Value> = module.torsion.iter().map(big).collect();
            emit(
                cli.json,
                json!({
                    "module": {"rank": module.rank, "torsion": torsion_list},
                    "class_torsion": torsion,
                }),
                &format!("module: {module}\nclass torsion: {torsion}"),
            );
        }
        Command::Symplectic { file } => {
            let b = load_bundle(file)?;
            let compatible = compatible_symplectic(&b);
            let total = total_space_symplectic(&b);
            emit(
                cli.json,
                json!({"compatible": compatible, "total_space": total}),
                &format!("compatible: {compatible}\ntotal space: {total}"),
            );
        }
        Command::Betti { file } => {
            let b = load_bundle(file)?;
            let b1 = betti1_flat(b.rep());
            emit(cli.json, json!({"betti1": b1}), &b1.to_string());
        }
        Command::Decompose { file } => {
            let b = load_bundle(file)?;
            let parts = decompose(&b)?;
            let docs: Vec<Value> = parts.iter().map(schema::bundle_to_value).collect();
            let human: Vec<String> = docs.iter().map(|d| d.to_string()).collect();
            emit(cli.json, Value::Array(docs.clone()), &human.join("\n"));
        }
        Command::Sum { first, second } => {
            let b1 = load_bundle(first)?;
            let b2 = load_bundle(second)?;
            let total = fiber_sum(&b1, &b2);
            emit(
                cli.json,
                schema::bundle_to_value(&total),
                &schema::bundle_to_string(&total),
            );
        }
    }
    Ok(0)
}

fn run_rep(json_mode: bool, what: &RepCommand) -> Result<i32, Failure> {
    match what {
        RepCommand::Check { file } => {
            let text = read_file(file)?;
            match schema::parse_bundle(&text) {
                Ok(b) => emit(
                    json_mode,
                    json!({"valid": true, "genus": b.genus()}),
                    &format!("valid: true\ngenus: {}", b.genus()),
                ),
                Err(e @ (Error::NotSurfaceRep(_) | Error::NotUnimodular { .. })) => {
                    emit(
                        json_mode,
                        json!({"valid": false, "reason": e.to_string()}),
                        &format!("valid: false\nreason: {e}"),
                    );
                }
                Err(other) => return Err(other.into()),
            }
        }
        RepCommand::NormalForm { file } => {
            let b = load_bundle(file)?;
            let p = project_rep(b.rep())?;
            match is_normal_form(&p) {
                Some(cert) => {
                    let betas: Vec<String> =
                        cert.beta_images.iter().map(|w| w.to_string()).collect();
                    emit(
                        json_mode,
                        json!({
                            "normal_form": true,
                            "k": cert.k, "l": cert.l, "m": cert.m,
                            "betas": betas,
                        }),
                        &format!(
                            "normal form: true\n(k, l, m): ({}, {}, {})\nbetas: {}",
                            cert.k,
                            cert.l,
                            cert.m,
                            betas.join(" ")
                        ),
                    );
                }
                None => emit(
                    json_mode,
                    json!({"normal_form": false}),
                    "normal form: false",
                ),
            }
        }
        RepCommand::OrbitTag { file } => {
            let b = load_bundle(file)?;
            let tag = lift_orbit_tag(&canonicalize_lift(b.rep())?)?;
            let (machine, human) = tag_output(&tag);
            emit(json_mode, machine, &human);
        }
    }
    Ok(0)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

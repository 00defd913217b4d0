use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toricos::arrangement::{big_to_json, classify, PhaseQZ, ToricArrangement};
use toricos::coverings::{aut_orbits, coherent_elements, extract_class, group_from_multiplicity, representations, CoveringData, EXT_BUDGET};
use toricos::degreeone::{degree_one_matrices, level_verdict, DegreeOneReport};
use toricos::discriminantal as discr;
use toricos::exactlin::IntMatrix;
use toricos::gos::{Gos, GosElement, Ring};
use toricos::layers::{arithmetic_matroid, build_poset, nbc_counts, poincare_polynomial, ArithmeticMatroid};
use toricos::normalform::{character_relations, reconstruct_matrix, reconstruct_representation, to_normal_form};
use toricos::{samples, Error, Result};

#[derive(Parser)]
#[command(name = "toricos", version, about = "Exact combinatorial invariants of toric arrangements")]
struct Cli {
    /// Write the worked example arrangements into DIR and exit.
    #[arg(long, value_name = "DIR")]
    seed_examples: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z => Ring::Z,
            RingArg::Q => Ring::Q,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Layers with their ranks, hypertori and order relation.
    Poset { file: PathBuf },
    /// Arithmetic matroid (rank and multiplicity of every subset).
    Matroid { file: PathBuf },
    /// Poincaré polynomial coefficients.
    Poincare { file: PathBuf },
    /// Sign normal form and coordinate matrix.
    NormalForm { file: PathBuf },
    /// Integer representation rebuilt from a matroid (or arrangement) file.
    Reconstruct { file: PathBuf },
    /// Integer relations among the characters.
    Relations { file: PathBuf },
    /// Basis of the graded Orlik–Solomon model.
    GosBasis {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
    },
    /// Product of factors `y<i>`, `e<i>`, `b<k>` (basis element k) or `1`.
    GosMul {
        file: PathBuf,
        #[arg(required = true)]
        factors: Vec<String>,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
    },
    /// Bigraded dimensions.
    Hilbert {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
    },
    /// Coherent extension classes and their orbits.
    Coherent {
        file: PathBuf,
        #[arg(long, default_value_t = EXT_BUDGET)]
        budget: u64,
    },
    /// Poset fingerprint plus the canonical extension class.
    Invariant { file: PathBuf },
    /// The matrices R^k and degree-one generation verdicts.
    DegOne { file: PathBuf },
    /// Circuits of the characters and their subtori.
    DiscrCircuits { file: PathBuf },
    /// Components of the family of translates with the same layer poset.
    DiscrComponents { file: PathBuf },
    /// Whether two phase points lie in the same component.
    DiscrSameComponent {
        file: PathBuf,
        /// Second arrangement with the same characters.
        other: Option<PathBuf>,
        /// Comma separated phases such as `0,0,0,2/7`.
        #[arg(long, conflicts_with = "other")]
        phases: Option<String>,
    },
    /// Centred, primitive, essential, surjective and genericity flags.
    Classify { file: PathBuf },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn read_arrangement(path: &Path) -> Result<ToricArrangement> {
    ToricArrangement::from_json(&read_json(path)?)
}

/// A matroid file, or the matroid of an arrangement file.
fn read_matroid(path: &Path) -> Result<ArithmeticMatroid> {
    let v = read_json(path)?;
    if v.get("hypertori").is_some() {
        arithmetic_matroid(&ToricArrangement::from_json(&v)?)
    } else {
        ArithmeticMatroid::from_json(&v)
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(big_to_json).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn phases_json(a: &[PhaseQZ]) -> Value {
    json!(a.iter().map(|q| q.to_string()).collect::<Vec<_>>())
}

fn parse_factor(g: &Gos, s: &str) -> Result<GosElement> {
    if s == "1" {
        return Ok(g.one());
    }
    let bad = || Error::invalid(format!("factor {s:?}: expected y<i>, e<i>, b<k> or 1"));
    let (head, tail) = s.split_at(1);
    let i: usize = tail.parse().map_err(|_| bad())?;
    let n = g.poset().arrangement().len();
    match head {
        "y" if i < n => Ok(g.y(i)),
        "e" if i < g.poset().arrangement().rank() => Ok(g.e(i)),
        "b" if i < g.basis().len() => Ok(g.basis_element(i)),
        _ => Err(bad()),
    }
}

fn seed_examples(dir: &Path) -> Result<Value> {
    fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
    let (delta, delta_prime) = samples::z7_pair();
    let files = [
        ("three_lines.json", samples::three_lines()),
        ("four_hypertori.json", samples::four_hypertori()),
        ("z7_delta.json", delta),
        ("z7_delta_prime.json", delta_prime),
        ("parallel_family.json", samples::parallel_translate(1)),
    ];
    let mut written = Vec::new();
    for (name, d) in files {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(&d.to_json()).unwrap() + "\n";
        fs::write(&path, text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(json!({ "written": written }))
}

fn run(cmd: Command) -> Result<Value> {
    Ok(match cmd {
        Command::Poset { file } => build_poset(&read_arrangement(&file)?).to_json(),
        Command::Matroid { file } => arithmetic_matroid(&read_arrangement(&file)?)?.to_json(),
        Command::Poincare { file } => {
            let p = build_poset(&read_arrangement(&file)?);
            json!({
                "coefficients": poincare_polynomial(&p).iter().map(big_to_json).collect::<Vec<_>>(),
                "nbc_counts": nbc_counts(&p),
            })
        }
        Command::NormalForm { file } => {
            let d = read_arrangement(&file)?;
            let (nf, signs) = to_normal_form(&d)?;
            let (_, coords) = toricos::normalform::normal_form_signs(&d.character_matrix())?;
            json!({
                "signs": signs,
                "arrangement": nf.to_json(),
                "matrix": matrix_json(&nf.character_matrix()),
                "coordinates": coords.to_json(),
            })
        }
        Command::Reconstruct { file } => {
            let m = read_matroid(&file)?;
            let coords = reconstruct_matrix(&m)?;
            let x = reconstruct_representation(&m)?;
            let mut out = json!({ "matrix": matrix_json(&x), "coordinates": coords.to_json() });
            if group_from_multiplicity(&m)?.order() != num_bigint::BigInt::from(1) {
                out["all"] = json!(representations(&m, EXT_BUDGET)?
                    .iter()
                    .map(|(o, x)| json!({ "class": o.representative.to_json()["class"], "orbit_size": o.size, "matrix": matrix_json(x) }))
                    .collect::<Vec<_>>());
            }
            out
        }
        Command::Relations { file } => {
            let d = read_arrangement(&file)?;
            json!({ "relations": character_relations(&d).iter().map(|r| r.to_json()).collect::<Vec<_>>() })
        }
        Command::GosBasis { file, ring } => {
            let g = Gos::new(&read_arrangement(&file)?, ring.into())?;
            let basis: Vec<Value> = (0..g.basis().len())
                .map(|k| {
                    let (p, q) = g.basis()[k].bidegree();
                    json!({ "index": k, "bidegree": [p, q], "element": g.basis_element(k).to_json() })
                })
                .collect();
            json!({ "ring": g.ring().to_string(), "size": basis.len(), "basis": basis })
        }
        Command::GosMul { file, factors, ring } => {
            let g = Gos::new(&read_arrangement(&file)?, ring.into())?;
            let xs = factors.iter().map(|f| parse_factor(&g, f)).collect::<Result<Vec<_>>>()?;
            let p = g.product(&xs)?;
            let coords: Vec<Value> = g
                .coordinates(&p)
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| json!({ "basis": k, "coeff": c.to_string() }))
                .collect();
            json!({ "product": p.to_json(), "coordinates": coords })
        }
        Command::Hilbert { file, ring } => {
            let g = Gos::new(&read_arrangement(&file)?, ring.into())?;
            let rows = |t: Vec<Vec<num_bigint::BigInt>>| -> Value {
                json!(t.iter().map(|r| r.iter().map(big_to_json).collect::<Vec<_>>()).collect::<Vec<_>>())
            };
            json!({ "ring": g.ring().to_string(), "by_degree": rows(g.hilbert_rows()), "table": rows(g.hilbert_table()) })
        }
        Command::Coherent { file, budget } => {
            let v = read_json(&file)?;
            let (m_t, own) = if v.get("hypertori").is_some() {
                let d = ToricArrangement::from_json(&v)?;
                let own = extract_class(&d).ok().map(|(_, _, x)| x);
                (arithmetic_matroid(&d)?, own)
            } else {
                (ArithmeticMatroid::from_json(&v)?, None)
            };
            let group = group_from_multiplicity(&m_t)?;
            let data = CoveringData::from_matroid(&m_t)?;
            let set = coherent_elements(&data, &m_t, budget)?;
            let orbits = aut_orbits(&set, &group)?;
            let mut out = json!({
                "group": group.factors().iter().map(big_to_json).collect::<Vec<_>>(),
                "size": set.len(),
                "coherent": set.iter().map(|x| x.to_json()["class"].clone()).collect::<Vec<_>>(),
                "orbits": orbits
                    .iter()
                    .map(|o| json!({ "representative": o.representative.to_json()["class"], "size": o.size }))
                    .collect::<Vec<_>>(),
            });
            if let Some(x) = own {
                out["own_class"] = x.to_json()["class"].clone();
            }
            out
        }
        Command::Invariant { file } => toricos::coverings::arrangement_invariant(&read_arrangement(&file)?)?.to_json(),
        Command::DegOne { file } => {
            let g = Gos::new(&read_arrangement(&file)?, Ring::Z)?;
            let ms = degree_one_matrices(&g)?;
            DegreeOneReport { levels: ms.iter().map(level_verdict).collect() }.to_json(&ms)
        }
        Command::DiscrCircuits { file } => {
            let d = read_arrangement(&file)?;
            let cs = discr::discriminantal_circuits(&d.character_matrix())?;
            json!({
                "circuits": cs
                    .iter()
                    .map(|(j, b)| json!({ "indices": j, "relations": matrix_json(&IntMatrix::from_rows(d.len(), &b.generators())) }))
                    .collect::<Vec<_>>(),
            })
        }
        Command::DiscrComponents { file } => {
            let d = read_arrangement(&file)?;
            let x = d.character_matrix();
            let s = build_poset(&d);
            let amb = discr::ambient_intersection(&x, &s);
            let comps = discr::ambient_components(&x, &s);
            let count = discr::count_components(&x, &s)?;
            json!({
                "ambient_relations": matrix_json(&IntMatrix::from_rows(d.len(), &amb.generators())),
                "forbidden_sets": discr::forbidden_sets(&s).into_iter().map(toricos::layers::indices_of).collect::<Vec<_>>(),
                "ambient_components": comps
                    .iter()
                    .map(|c| json!({
                        "invariant": phases_json(&c.invariant),
                        "representative": phases_json(&c.representative),
                        "forbidden": c.forbidden,
                    }))
                    .collect::<Vec<_>>(),
                "components": count,
                "invariant": phases_json(&discr::component_invariant(&d.phases(), &x, &s)?),
                "genericity": discr::is_nearly_generic(&s).as_str(),
            })
        }
        Command::DiscrSameComponent { file, other, phases } => {
            let d = read_arrangement(&file)?;
            let x = d.character_matrix();
            let b: Vec<PhaseQZ> = match (other, phases) {
                (Some(p), _) => {
                    let e = read_arrangement(&p)?;
                    if e.character_matrix() != x {
                        return Err(Error::invalid("the second arrangement has different characters"));
                    }
                    e.phases()
                }
                (None, Some(list)) => list.split(',').map(|t| t.trim().parse()).collect::<Result<_>>()?,
                (None, None) => return Err(Error::invalid("give a second arrangement or --phases")),
            };
            let s = build_poset(&d);
            let ia = discr::component_invariant(&d.phases(), &x, &s)?;
            let ib = discr::component_invariant(&b, &x, &s)?;
            json!({ "same": ia == ib, "invariant_a": phases_json(&ia), "invariant_b": phases_json(&ib) })
        }
        Command::Classify { file } => {
            let d = read_arrangement(&file)?;
            let c = classify(&d);
            json!({
                "centred": c.centred,
                "primitive": c.primitive,
                "essential": c.essential,
                "surjective": c.surjective,
                "genericity": discr::is_nearly_generic(&build_poset(&d)).as_str(),
            })
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invalid(_) => 2,
        Error::Budget(_) => 3,
        Error::Infeasible(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (cli.seed_examples, cli.command) {
        (Some(dir), _) => seed_examples(&dir),
        (None, Some(cmd)) => run(cmd),
        (None, None) => Err(Error::invalid("no command given; see --help")),
    };
    match result {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", serde_json::to_string_pretty(&json!({ "error": { "code": e.code(), "message": e.to_string() } })).unwrap());
            ExitCode::from(exit_code(&e))
        }
    }
}

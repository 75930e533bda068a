//! The `strata-kit` front end: argument parsing, dispatch and JSON output.
//!
//! Results go to standard output as one JSON value. Errors go to standard
//! error as `{"error": kind, "code": n, "message": ...}` with exit code 1 for
//! invalid input, 2 for an insufficient window and 3 for an internal
//! consistency failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use strata_core::config::check_configuration;
use strata_core::derived::{cartan_solve, is_dynkin, CartanSolution, DerivedCategory};
use strata_core::fiber::{fiber, FiberStatus};
use strata_core::kan::{closed_orbit, degeneration_leq, kan_intermediate, kan_left, kan_right, phi_of, resolution_shape, same_stratum};
use strata_core::rep::{SModule, WindowRep};
use strata_core::resolve::ext_oracle;
use strata_core::sing::build_sing_quiver;
use strata_core::{Configuration, Error, FiniteField, Fp, MeshCategory, Quiver, RepQuiver, RepVertex, Window, Q};

use crate::cache::{HomCache, HomEntry, CACHE_VERSION};
use crate::error::CliError;
use crate::format::{dims_json, parse_dims, parse_vector, vector_json, window, ConfigJson, QuiverJson, RepJson};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "strata-kit", version, about = "Invariants of graded quiver varieties from framed mesh categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Quiver, window and configuration. JSON arguments are given inline or as a file path.
#[derive(Debug, Args)]
pub struct Setting {
    /// Quiver JSON: {"vertices": [...], "arrows": [{"id", "source", "target"}]}.
    #[arg(long)]
    pub quiver: String,
    /// Lowest and highest level of the window.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Vec<i64>,
    /// "all", a list of vertex keys, or {"members": [...], "period": k}.
    #[arg(long, default_value = "\"all\"")]
    pub configuration: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hom space between two vertices, with basis paths.
    Hom {
        #[command(flatten)]
        setting: Setting,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Use the framed category even when both vertices are non-frozen.
        #[arg(long)]
        framed: bool,
    },
    /// dim Hom(H x, Sigma^p H y) in the derived category.
    HomDq {
        #[command(flatten)]
        setting: Setting,
        #[arg(long)]
        from: String,
        #[arg(long, allow_negative_numbers = true)]
        shift: i64,
        #[arg(long)]
        to: String,
    },
    /// Solves C d = m for an integer vector m on non-frozen vertices.
    CartanSolve {
        #[command(flatten)]
        setting: Setting,
        /// {"1@0": 1, ...}
        #[arg(long)]
        vector: String,
    },
    /// Arrow and minimal relation counts of the singular category.
    SingQuiver {
        #[command(flatten)]
        setting: Setting,
        /// Also write the quiver as a DOT graph to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Mesh relations, stability and co-stability of a representation.
    Validate {
        #[arg(long)]
        rep: String,
    },
    /// Right, intermediate and left extensions of the restriction of a representation.
    Klr {
        #[arg(long)]
        rep: String,
    },
    /// The stratum of the restriction: multiplicities, v and w.
    Phi {
        #[arg(long)]
        rep: String,
    },
    /// Whether two points lie in the same stratum.
    Stratum {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        other: String,
    },
    /// Whether the stratum of --other lies in the closure of the stratum of --rep.
    Degen {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        other: String,
    },
    /// The closed orbit in the closure of the orbit of a stable representation.
    Orbit {
        #[arg(long)]
        rep: String,
    },
    /// First terms of the minimal injective and projective resolutions.
    Resolve {
        #[arg(long)]
        rep: String,
    },
    /// Fiber of the desingularization over the point, over F_p.
    Fiber {
        #[arg(long)]
        rep: String,
        /// Non-frozen dimension vector {"1@2": 1, ...}.
        #[arg(long)]
        v: String,
        /// Prime for the enumeration: 2, 3, 5 or 7.
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Largest quotient dimension to enumerate.
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Condition (R) and left exactness at every non-frozen vertex.
    CheckConfig {
        #[command(flatten)]
        setting: Setting,
    },
    /// dim Ext^p(S_x, S_y) over the singular category by a minimal resolution.
    ExtOracle {
        #[command(flatten)]
        setting: Setting,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Runs acceptance criteria and prints one line each.
    Selftest {
        /// all, a2, dynkin, non-dynkin, or a criterion number.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.report());
            return err.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}

/// Inline JSON when the argument looks like JSON, otherwise a file to read.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with(['{', '[', '"']) { arg.to_string() } else { std::fs::read_to_string(arg)? };
    Ok(serde_json::from_str(&text)?)
}

struct Context {
    quiver: Arc<Quiver>,
    window: Window,
    config: Configuration,
}

impl Setting {
    fn context(&self) -> Result<Context, CliError> {
        let quiver = load::<QuiverJson>(&self.quiver)?.build()?;
        let window = match self.window.as_slice() {
            &[lo, hi] => window([lo, hi])?,
            _ => return Err(CliError::Usage("--window takes two levels".into())),
        };
        let config = match self.configuration.trim() {
            "all" => Configuration::All,
            c => load::<ConfigJson>(c)?.build(&quiver)?,
        };
        Ok(Context { quiver, window, config })
    }
}

fn load_rep(arg: &str) -> Result<WindowRep<Q>, CliError> {
    let rep = load::<RepJson>(arg)?.build()?;
    if !rep.quiver().framed() {
        return Err(CliError::Usage("the representation must live on the framed quiver".into()));
    }
    rep.validate()?;
    Ok(rep)
}

fn category(rep: &WindowRep<Q>) -> MeshCategory<Q> {
    MeshCategory::new(rep.quiver().clone())
}

fn emit(out: &mut impl Write, v: Value) -> Result<(), CliError> {
    writeln!(out, "{v}")?;
    Ok(())
}

/// Runs one command, writing its JSON result to `out`.
pub fn execute(command: Command, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Hom { setting, from, to, framed } => {
            let cx = setting.context()?;
            let q = &cx.quiver;
            let (x, y) = (RepVertex::parse(q, &from)?, RepVertex::parse(q, &to)?);
            let framed = framed || x.frozen || y.frozen;
            let rq = Arc::new(RepQuiver::new(q.clone(), framed, cx.window, cx.config.clone()));
            let key = format!(
                "v{CACHE_VERSION}|{}|{}|{}|{from}|{to}|{}",
                if framed { "framed" } else { "repetition" },
                cx.window,
                serde_json::to_string(&ConfigJson::of(&cx.config, q))?,
                serde_json::to_string(&QuiverJson::of(q))?
            );
            let mut cache = HomCache::from_env()?;
            let entry = match cache.get(&key) {
                Some(e) => e.clone(),
                None => {
                    let cat = MeshCategory::<Q>::new(rq.clone());
                    let (a, b) = (cat.index(x)?, cat.index(y)?);
                    let basis: Vec<Vec<String>> = cat
                        .basis(a, b)
                        .iter()
                        .map(|p| p.iter().map(|&arrow| rq.arrow_key(rq.arrow(arrow))).collect())
                        .collect();
                    let e = HomEntry { dim: basis.len(), basis };
                    cache.insert(key, e.clone())?;
                    cache.save()?;
                    e
                }
            };
            emit(out, json!({"dim": entry.dim, "basis": entry.basis}))
        }
        Command::HomDq { setting, from, shift, to } => {
            let cx = setting.context()?;
            let (x, y) = (RepVertex::parse(&cx.quiver, &from)?, RepVertex::parse(&cx.quiver, &to)?);
            let dq = DerivedCategory::new(cx.quiver.clone(), cx.window)?;
            emit(out, json!({"dim": dq.hom_dq(x, shift, y)?}))
        }
        Command::CartanSolve { setting, vector } => {
            let cx = setting.context()?;
            let m = parse_vector(&cx.quiver, &load::<BTreeMap<String, i64>>(&vector)?)?;
            match cartan_solve(&cx.quiver, &m, cx.window)? {
                CartanSolution::Solved(d) => emit(out, json!({"solved": true, "d": vector_json(&cx.quiver, &d)})),
                CartanSolution::NoSolutionInWindow { certificate } => {
                    emit(out, json!({"solved": false, "certificate": vector_json(&cx.quiver, &certificate)}))
                }
            }
        }
        Command::SingQuiver { setting, dot } => {
            let cx = setting.context()?;
            let q = &cx.quiver;
            let s = build_sing_quiver(q.clone(), &cx.config, cx.window)?;
            let edges = |m: &BTreeMap<(RepVertex, RepVertex), usize>| -> Vec<Value> {
                m.iter()
                    .filter(|(_, &n)| n > 0)
                    .map(|((a, b), n)| json!({"from": a.key(q), "to": b.key(q), "count": n}))
                    .collect()
            };
            let vertices: Vec<Value> = s.vertices.iter().map(|(v, c)| json!({"vertex": v.key(q), "complete": c})).collect();
            if let Some(path) = dot {
                std::fs::write(path, sing_dot(q, &s))?;
            }
            emit(
                out,
                json!({
                    "window": [s.window.lo, s.window.hi],
                    "vertices": vertices,
                    "arrows": edges(&s.arrows),
                    "relations": edges(&s.relations),
                }),
            )
        }
        Command::Validate { rep } => {
            let rep = load::<RepJson>(&rep)?.build()?;
            let q = rep.quiver().quiver().clone();
            let violations: Vec<String> = rep.mesh_violations().iter().map(|v| v.key(&q)).collect();
            emit(
                out,
                json!({
                    "valid": violations.is_empty(),
                    "violations": violations,
                    "stable": rep.is_stable(),
                    "costable": rep.is_costable(),
                    "v": dims_json(&q, &rep.v()),
                    "w": dims_json(&q, &rep.w()),
                }),
            )?;
            match violations.is_empty() {
                true => Ok(()),
                false => Err(Error::RelationsViolated(violations.join(", ")).into()),
            }
        }
        Command::Klr { rep } => {
            let rep = load_rep(&rep)?;
            let cat = category(&rep);
            let m = SModule::restrict(&rep, &cat);
            let q = rep.quiver().quiver().clone();
            let kr = kan_right(&cat, &m)?;
            let klr = kan_intermediate(&cat, &m)?;
            let kl = kan_left(&cat, &m)?;
            emit(
                out,
                json!({
                    "right": RepJson::of(&kr),
                    "intermediate": RepJson::of(&klr),
                    "left": RepJson::of(&kl.rep),
                    "v": {
                        "right": dims_json(&q, &kr.v()),
                        "intermediate": dims_json(&q, &klr.v()),
                        "left": dims_json(&q, &kl.rep.v()),
                    },
                }),
            )
        }
        Command::Phi { rep } => {
            let rep = load_rep(&rep)?;
            let cat = category(&rep);
            let p = phi_of(&kan_intermediate(&cat, &SModule::restrict(&rep, &cat))?)?;
            let q = rep.quiver().quiver();
            emit(out, json!({"phi": dims_json(q, &p.multiplicities), "v": dims_json(q, &p.v), "w": dims_json(q, &p.w)}))
        }
        Command::Stratum { rep, other } => {
            let (a, b) = (load_rep(&rep)?, load_rep(&other)?);
            same_quiver(&a, &b)?;
            let cat = category(&a);
            let same = same_stratum(&cat, &SModule::restrict(&a, &cat), &SModule::restrict(&b, &cat))?;
            emit(out, json!({"same": same}))
        }
        Command::Degen { rep, other } => {
            let (a, b) = (load_rep(&rep)?, load_rep(&other)?);
            same_quiver(&a, &b)?;
            let cat = category(&a);
            let leq = degeneration_leq(&cat, &SModule::restrict(&a, &cat), &SModule::restrict(&b, &cat))?;
            emit(out, json!({"in_closure": leq}))
        }
        Command::Orbit { rep } => {
            let rep = load_rep(&rep)?;
            let (closed, semisimple) = closed_orbit(&category(&rep), &rep)?;
            let q = rep.quiver().quiver();
            emit(out, json!({"closed": RepJson::of(&closed), "semisimple": dims_json(q, &semisimple)}))
        }
        Command::Resolve { rep } => {
            let rep = load_rep(&rep)?;
            let cat = category(&rep);
            let s = resolution_shape(&cat, &SModule::restrict(&rep, &cat))?;
            let q = rep.quiver().quiver();
            emit(
                out,
                json!({
                    "injective0": dims_json(q, &s.injective0),
                    "injective1": dims_json(q, &s.injective1),
                    "projective0": dims_json(q, &s.projective0),
                    "projective1": dims_json(q, &s.projective1),
                }),
            )
        }
        Command::Fiber { rep, v, field, bound } => {
            let rep = load_rep(&rep)?;
            let v = load::<BTreeMap<String, usize>>(&v)?;
            let result = match field {
                2 => fiber_json::<2>(&rep, &v, bound)?,
                3 => fiber_json::<3>(&rep, &v, bound)?,
                5 => fiber_json::<5>(&rep, &v, bound)?,
                7 => fiber_json::<7>(&rep, &v, bound)?,
                p => return Err(CliError::Usage(format!("--field {p} is not supported; use 2, 3, 5 or 7"))),
            };
            emit(out, result)
        }
        Command::CheckConfig { setting } => {
            let cx = setting.context()?;
            let q = &cx.quiver;
            let r = check_configuration(q.clone(), &cx.config, cx.window)?;
            let verdict = |b: Option<bool>| match b {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "undetermined",
            };
            let vertices: Vec<Value> = r
                .vertices
                .iter()
                .map(|c| {
                    json!({
                        "vertex": c.vertex.key(q),
                        "condition_r": c.condition_r.as_str(),
                        "exact_out": c.exact_out.as_str(),
                        "exact_in": c.exact_in.as_str(),
                    })
                })
                .collect();
            emit(
                out,
                json!({
                    "condition_r": verdict(r.condition_r()),
                    "left_exact": verdict(r.left_exact()),
                    "vertices": vertices,
                }),
            )
        }
        Command::ExtOracle { setting, from, to, degree } => {
            let cx = setting.context()?;
            let q = &cx.quiver;
            let (x, y) = (RepVertex::parse(q, &from)?, RepVertex::parse(q, &to)?);
            if !(x.frozen && y.frozen) {
                return Err(CliError::Usage("Ext is taken between simples at frozen vertices".into()));
            }
            let rq = Arc::new(RepQuiver::new(q.clone(), true, cx.window, cx.config.clone()));
            // off Dynkin type the resolutions are only practical over a prime field
            if is_dynkin(q) {
                let d = ext_oracle(&MeshCategory::<Q>::new(rq), x, y, degree)?;
                emit(out, json!({"dim": d, "field": 0}))
            } else {
                let d = ext_oracle(&MeshCategory::<Fp<1_000_003>>::new(rq), x, y, degree)?;
                emit(out, json!({"dim": d, "field": 1_000_003}))
            }
        }
        Command::Selftest { suite, seed } => {
            let ids = selftest::suite(&suite).ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
            writeln!(out, "seed {seed}")?;
            let outcomes = selftest::run(&ids, seed, |o| {
                let _ = writeln!(out, "{}", o.line());
                let _ = out.flush();
            });
            let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
            match failed.is_empty() {
                true => Ok(()),
                false => Err(CliError::SelfTest(format!("criteria {}", failed.join(", ")))),
            }
        }
    }
}

fn same_quiver(a: &WindowRep<Q>, b: &WindowRep<Q>) -> Result<(), CliError> {
    if a.quiver() != b.quiver() {
        return Err(CliError::Usage("both representations must live on the same framed quiver and window".into()));
    }
    Ok(())
}

fn fiber_json<const P: u32>(rep: &WindowRep<Q>, v: &BTreeMap<String, usize>, bound: usize) -> Result<Value, CliError>
where
    Fp<P>: FiniteField,
{
    let reduced = rep.map_field(Fp::<P>::from_rational)?;
    let q = rep.quiver().quiver().clone();
    let v = parse_dims(&q, v)?;
    let cat = MeshCategory::<Fp<P>>::new(reduced.quiver().clone());
    let f = fiber(&cat, &SModule::restrict(&reduced, &cat), &v, bound)?;
    let (status, witness) = match &f.status {
        FiberStatus::Nonempty(w) => ("nonempty", Some(RepJson::of(w))),
        FiberStatus::Empty => ("empty", None),
        FiberStatus::Undetermined(_) => ("undetermined", None),
    };
    let mut out = json!({
        "field": P,
        "status": status,
        "v0": dims_json(&q, &f.v0),
        "quotient": dims_json(&q, &f.ck),
    });
    if let Some(w) = witness {
        out["witness"] = serde_json::to_value(w)?;
    }
    if let FiberStatus::Undetermined(why) = &f.status {
        out["reason"] = json!(why);
    }
    Ok(out)
}

/// DOT graph with arrow multiplicities as labels and relation counts as dashed edges.
pub fn sing_dot(q: &Quiver, s: &strata_core::sing::SingQuiver) -> String {
    let mut dot = String::from("digraph singular {\n  rankdir=LR;\n");
    for (v, complete) in &s.vertices {
        let style = if *complete { "solid" } else { "dashed" };
        dot.push_str(&format!("  \"{}\" [style={style}];\n", v.key(q)));
    }
    for ((a, b), n) in s.arrows.iter().filter(|(_, &n)| n > 0) {
        dot.push_str(&format!("  \"{}\" -> \"{}\" [label=\"{n}\", multiplicity={n}];\n", a.key(q), b.key(q)));
    }
    for ((a, b), n) in s.relations.iter().filter(|(_, &n)| n > 0) {
        dot.push_str(&format!("  \"{}\" -> \"{}\" [style=dotted, constraint=false, relations={n}];\n", a.key(q), b.key(q)));
    }
    dot.push_str("}\n");
    dot
}

//! The `icefold` command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::character::{cluster_character, minimal_presentation, projected_character, ModuleDatum};
use crate::cluster::{enumerate_exchange_graph, row_ordered_orbits, Seed};
use crate::error::{Error, Result};
use crate::folding::{fold_potential, fold_quiver, normalize_scales, verify_gamma};
use crate::format::{parse_quiver_file, QuiverFile};
use crate::ginzburg::{check_ginzburg, ginzburg_functor, preprojective, relative_ginzburg};
use crate::group::{self, orbit_of};
use crate::harness::commutation_harness;
use crate::mutation::{check_fold_commutes, fold_quiver_matrix, fz_mutate, orbit_mutate, FoldConvention};
use crate::quiver::{exchange_matrix, VertexId};
use crate::representation::QuiverRepresentation;
use crate::server;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "icefold",
    version,
    about = "Folding, mutation and cluster characters of ice quivers with group actions"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Folded exchange matrix and symmetrizers.
    FoldMatrix {
        file: PathBuf,
        #[arg(long, default_value = "row")]
        convention: FoldConvention,
    },
    /// The quiver Q_G of the skew group algebra.
    FoldQuiver { file: PathBuf },
    /// The folded potential W_G.
    FoldPotential {
        file: PathBuf,
        /// Rescale arrows so that coefficients become ±1.
        #[arg(long)]
        normalize: bool,
    },
    /// Matrix mutation at single vertices, in order.
    Mutate {
        file: PathBuf,
        #[arg(long = "at", required = true)]
        at: Vec<VertexId>,
    },
    /// Orbit mutation, orbits named by any member.
    OrbitMutate {
        file: PathBuf,
        #[arg(long = "orbit", required = true)]
        orbit: Vec<VertexId>,
    },
    /// Exchange-graph enumeration.
    Enumerate {
        file: PathBuf,
        /// Enumerate the folded seed instead of the unfolded one.
        #[arg(long)]
        folded: bool,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// The relative Ginzburg dg quiver.
    Ginzburg {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: i32,
    },
    /// The derived preprojective dg quiver of the frozen part.
    Preprojective {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: i32,
    },
    /// Index, cluster character and projected character of the file's module.
    Character {
        file: PathBuf,
        /// Use the thin module on these vertices instead of the MODULE section.
        #[arg(long, value_delimiter = ',')]
        thin: Option<Vec<VertexId>>,
    },
    /// Admissibility, invariance, Ginzburg identities and commutation checks.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random commutation instances to run alongside the file's checks.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 3)]
        n: i32,
    },
    /// Local session service on 127.0.0.1.
    Serve {
        #[arg(long, env = server::PORT_VAR, default_value_t = server::DEFAULT_PORT)]
        port: u16,
    },
}

/// Exit status: 0 success, 1 domain error, 2 parse error.
pub fn exit_code(e: &Error) -> i32 {
    if e.root().is_parse() {
        2
    } else {
        1
    }
}

fn load(path: &PathBuf) -> Result<QuiverFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_quiver_file(&text)
}

/// Output of one command: text and JSON renderings, and whether every
/// reported check passed.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }
}

/// Runs a command other than `serve`.
pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::FoldMatrix { file, convention } => {
            let f = load(file)?;
            let act = f.require_action()?;
            let folded = fold_quiver_matrix(&f.quiver, &act, *convention)?;
            let text = folded.to_string();
            let json = json!({
                "rows": folded.matrix.rows(),
                "cols": folded.matrix.cols(),
                "entries": folded.matrix.entries(),
                "symmetrizer": folded.symmetrizer,
                "column_symmetrizer": folded.right_symmetrizer(),
                "convention": format!("{:?}", folded.convention).to_lowercase(),
            });
            Ok(Report::new(text, json))
        }
        Command::FoldQuiver { file } => {
            let f = load(file)?;
            let act = f.require_action()?;
            let folded = fold_quiver(&f.quiver, &act)?;
            let gamma = verify_gamma(&f.quiver, &act)?;
            let mut text = format!("{folded}frozen part F_G:\n{}", describe_quiver(&folded.frozen_part()));
            text.push_str("M-spaces:\n");
            for m in folded.m_spaces.iter().filter(|m| m.dim > 0) {
                let parts: Vec<String> = m
                    .decomposition
                    .iter()
                    .filter(|(_, k)| *k > 0)
                    .map(|(rho, k)| if *k == 1 { rho.clone() } else { format!("{k}{rho}") })
                    .collect();
                text.push_str(&format!(
                    "  M({},{};{}) = span({}) ≅ {}\n",
                    m.i,
                    m.j,
                    m.tau,
                    m.spanning.join(", "),
                    parts.join(" ⊕ ")
                ));
            }
            text.push_str(&format!(
                "rank check on ε(kQ∗G)ε: {} over {} vertex pairs\n",
                if gamma.passes() { "pass" } else { "FAIL" },
                gamma.checks.len()
            ));
            let json = json!({
                "vertices": folded.vertices,
                "arrows": folded.quiver.arrows(),
                "frozen_arrows": folded.quiver.frozen_arrows(),
                "notes": folded.notes,
                "m_spaces": folded.m_spaces,
                "gamma_check": gamma,
            });
            let mut r = Report::new(text, json);
            r.ok = gamma.passes();
            Ok(r)
        }
        Command::FoldPotential { file, normalize } => {
            let f = load(file)?;
            let act = f.require_action()?;
            let wg = fold_potential(&f.quiver, &act, &f.potential)?;
            let mut text = format!("W_G = {}\n", wg.format());
            let mut json = json!({ "potential": wg.format(), "field": wg.field().order() });
            if *normalize {
                let rational = wg
                    .rational()
                    .ok_or_else(|| Error::Unsupported("normalizing non-rational coefficients".into()))?;
                let (w, scales) = normalize_scales(&rational);
                text.push_str(&format!("normalized: {w}\n"));
                for (a, s) in &scales {
                    text.push_str(&format!("  {a} scaled by {s}\n"));
                }
                json["normalized"] = json!(w.to_string());
                json["scales"] = json!(scales
                    .iter()
                    .map(|(a, s)| (a.clone(), s.to_string()))
                    .collect::<BTreeMap<_, _>>());
            }
            Ok(Report::new(text, json))
        }
        Command::Mutate { file, at } => {
            let f = load(file)?;
            let mut b = exchange_matrix(&f.quiver)?;
            for (t, &k) in at.iter().enumerate() {
                b = fz_mutate(&b, k).map_err(|e| Error::at_prefix(&at[..t], e))?;
            }
            Ok(Report::new(b.to_string(), json!({ "matrix": b })))
        }
        Command::OrbitMutate { file, orbit } => {
            let f = load(file)?;
            let act = f.require_action()?;
            group::is_admissible(&f.quiver, &act)?;
            let orbits = group::orbits(&f.quiver, &act);
            let mut b = exchange_matrix(&f.quiver)?;
            for (t, &v) in orbit.iter().enumerate() {
                let wrap = |e: Error| Error::at_prefix(&orbit[..t], e);
                let o = orbit_of(&orbits, v).ok_or_else(|| wrap(Error::UnknownVertex(v)))?;
                group::matrix_admissibility(&b, &act).map_err(|w| wrap(w.into()))?;
                b = orbit_mutate(&b, o).map_err(wrap)?;
            }
            let trace = check_fold_commutes(&f.quiver, &act, orbit)?;
            let mut r = Report::new(b.to_string(), json!({ "matrix": b, "commutes": trace.commutes() }));
            r.ok = trace.commutes();
            Ok(r)
        }
        Command::Enumerate { file, folded, budget } => {
            let f = load(file)?;
            let b = if *folded {
                let act = f.require_action()?;
                fold_quiver_matrix(&f.quiver, &act, FoldConvention::Row)?.matrix
            } else {
                exchange_matrix(&f.quiver)?
            };
            let g = enumerate_exchange_graph(&Seed::initial(b), *budget)?;
            let vars: Vec<String> = g.variables().iter().map(|x| x.to_string()).collect();
            let mut text = format!(
                "clusters: {}{}\nvariables: {}\n",
                g.cluster_count(),
                if g.complete { "" } else { " (budget reached)" },
                vars.len()
            );
            for v in &vars {
                text.push_str(&format!("  {v}\n"));
            }
            let json = json!({
                "clusters": g.cluster_count(),
                "complete": g.complete,
                "variables": vars,
                "edges": g.edges,
            });
            Ok(Report::new(text, json))
        }
        Command::Ginzburg { file, n } => {
            let f = load(file)?;
            let g = relative_ginzburg(&f.quiver, &f.potential, *n)?;
            let functor = ginzburg_functor(&f.quiver, &f.potential, *n)?;
            let text = format!("{g}\n{functor}");
            let json = json!({ "dg_quiver": g.to_string(), "functor": functor.to_string(), "notes": g.notes });
            Ok(Report::new(text, json))
        }
        Command::Preprojective { file, n } => {
            let f = load(file)?;
            let p = preprojective(&f.quiver.frozen_subquiver(), *n)?;
            Ok(Report::new(
                p.to_string(),
                json!({ "dg_quiver": p.to_string(), "notes": p.notes }),
            ))
        }
        Command::Character { file, thin } => {
            let f = load(file)?;
            let datum = match thin {
                Some(s) => ModuleDatum::module(&f.quiver, QuiverRepresentation::thin(&f.quiver, s)?)?,
                None => f
                    .module
                    .clone()
                    .ok_or_else(|| Error::Validation("the file has no MODULE section; pass --thin".into()))?,
            };
            let b = exchange_matrix(&f.quiver)?;
            let pres = minimal_presentation(&f.quiver, &datum.module)?;
            let index = datum.index(&f.quiver)?;
            let cc = cluster_character(&f.quiver, &datum, &b)?;
            let mut text = format!(
                "dim: {:?}\nindex: {:?}\nP0: {:?}\nP1: {:?}\nCC = {cc}\n",
                datum.module.dims, index, pres.p0, pres.p1
            );
            let mut json = json!({
                "dims": datum.module.dims,
                "index": index,
                "presentation": pres,
                "character": cc.to_string(),
            });
            if let Some(act) = f.action()? {
                let p = projected_character(&f.quiver, &datum, &b, &row_ordered_orbits(&f.quiver, &act))?;
                text.push_str(&format!("P = {p}\n"));
                json["projected"] = json!(p.to_string());
            }
            Ok(Report::new(text, json))
        }
        Command::Check { file, seed, random, n } => {
            let f = load(file)?;
            let mut lines = Vec::new();
            let mut all = true;
            let mut record = |rule: &str, ok: bool, detail: String| {
                all &= ok;
                lines.push((rule.to_string(), ok, detail));
            };
            for c in f.checks()? {
                record(&c.rule, c.passed, c.detail);
            }
            if f.potential.validate(&f.quiver).is_ok() {
                let rep = check_ginzburg(&f.quiver, &f.potential, *n)?;
                record(
                    "d² = 0 on the relative Ginzburg quiver",
                    rep.d_squared_failures.is_empty(),
                    rep.d_squared_failures.join("; "),
                );
                record(
                    "d² = 0 on the preprojective quiver",
                    rep.preprojective_failures.is_empty(),
                    rep.preprojective_failures.join("; "),
                );
                record(
                    "G_rel is a dg functor",
                    rep.chain_failures.is_empty(),
                    rep.chain_failures.join("; "),
                );
                record(
                    "generator degrees",
                    rep.degree_failures.is_empty(),
                    rep.degree_failures.join("; "),
                );
            }
            if let Some(act) = f.action()? {
                if group::is_admissible(&f.quiver, &act).is_ok() {
                    let g = verify_gamma(&f.quiver, &act)?;
                    record(
                        "ε(kQ∗G)ε is generated by Q_G",
                        g.passes(),
                        format!("{} vertex pairs", g.checks.len()),
                    );
                    let orbits = group::orbits(&f.quiver, &act);
                    let unfrozen: Vec<VertexId> = orbits
                        .iter()
                        .filter(|o| !o.frozen)
                        .map(|o| o.representative())
                        .collect();
                    let mut failures = Vec::new();
                    for s in crate::cluster::reduced_sequences(&unfrozen, 3) {
                        match check_fold_commutes(&f.quiver, &act, &s) {
                            Ok(t) if t.commutes() => {}
                            Ok(_) => failures.push(format!("{s:?}")),
                            Err(Error::AtPrefix { source, .. }) if matches!(*source, Error::NotAdmissible(_)) => {}
                            Err(e) => failures.push(format!("{s:?}: {e}")),
                        }
                    }
                    record(
                        "fold commutes with orbit mutation (length ≤ 3)",
                        failures.is_empty(),
                        failures.join("; "),
                    );
                }
            }
            if *random > 0 {
                let mut rng = StdRng::seed_from_u64(*seed);
                let s = commutation_harness(&mut rng, *random, 7, 4, 5, FoldConvention::Row);
                record(
                    &format!("random commutation (seed {seed})"),
                    s.failures.is_empty(),
                    format!("{} instances, {} steps", s.instances, s.steps_checked),
                );
            }
            let text = lines
                .iter()
                .map(|(r, ok, d)| {
                    let status = if *ok { "PASS" } else { "FAIL" };
                    if d.is_empty() {
                        format!("{status} {r}\n")
                    } else {
                        format!("{status} {r}: {d}\n")
                    }
                })
                .collect();
            let json = json!({
                "passed": all,
                "checks": lines.iter().map(|(r, ok, d)| json!({ "rule": r, "passed": ok, "detail": d })).collect::<Vec<_>>(),
            });
            let mut r = Report::new(text, json);
            r.ok = all;
            Ok(r)
        }
        Command::Serve { .. } => Err(Error::Validation("serve is not a one-shot command".into())),
    }
}

fn describe_quiver(q: &crate::quiver::IceQuiver) -> String {
    let mut s = String::new();
    for a in q.arrows() {
        s.push_str(&format!("  {}: {} -> {}\n", a.id, a.source, a.target));
    }
    if s.is_empty() {
        s.push_str("  (no arrows)\n");
    }
    s
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    if let Command::Serve { port } = cli.command {
        let rt = match tokio::runtime::Runtime::new() {
            Ok(rt) => rt,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        };
        return match rt.block_on(server::serve(port)) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        };
    }
    match execute(&cli.command) {
        Ok(r) => {
            let _ = match cli.format {
                OutputFormat::Text => write!(out, "{}", r.text),
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r.json).unwrap()),
            };
            if r.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            match cli.format {
                OutputFormat::Text => {
                    let _ = writeln!(err, "error: {e}");
                }
                OutputFormat::Json => {
                    let _ = writeln!(err, "{}", json!({ "error": e.kind(), "message": e.to_string() }));
                }
            }
            exit_code(&e)
        }
    }
}

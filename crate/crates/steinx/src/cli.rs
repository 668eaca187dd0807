use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use steinx_core::acmoves::{ac_reduce, reduce_handlebody, AcBudget, AcOutcome, HandleReduction};
use steinx_core::chern::c1_class;
use steinx_core::contact::{classify, contactomorphic, diffeomorphic_total_spaces, ContactFiveClass};
use steinx_core::enumeration::{enumerate_c1_candidates_with, EnumerationError, EnumerationOptions};
use steinx_core::exotica::{
    certify_nondiffeomorphic, detect_by_contact, detect_by_divisibility, ExoticaError, UpperSource,
};
use steinx_core::families::{build_torus_family, build_xp, build_y, build_znp, FamilyMember};
use steinx_core::genus::{q_genus_lb, q_genus_search, MAX_SEARCH_RANK};
use steinx_core::intlinalg::{form_properties, IntegerMatrix};
use steinx_core::stein::{homology, intersection_form, validate, SteinHandlebody};

use crate::report::{self, provenance, AC_NOTE};
use crate::wire::{self, int, model_note, WireError};

#[derive(Parser)]
#[command(name = "steinx")]
#[command(about = "Invariants and exotica detection for combinatorial Stein handlebodies")]
#[command(version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Include the inequality chain behind each bound
    #[arg(long, global = true)]
    explain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args, Clone, Copy)]
struct Budget {
    /// Maximum Andrews-Curtis search depth
    #[arg(long, default_value_t = 8)]
    depth: usize,

    /// Maximum number of presentations visited
    #[arg(long, env = "STEINX_MAX_STATES", default_value_t = 200_000)]
    max_states: usize,
}

impl From<Budget> for AcBudget {
    fn from(b: Budget) -> Self {
        AcBudget {
            max_depth: b.depth,
            max_states: b.max_states,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Divisibility,
    Contact,
}

#[derive(Subcommand)]
enum Command {
    /// Homology, c1 data, divisibility, rotation divisor and form properties
    Invariants {
        /// Handlebody JSON, or - for stdin
        file: PathBuf,
    },
    /// Contact class (n, r) of the boundary of the supported open book
    Classify {
        file: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compare two handlebodies
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Genus oracle for the first handlebody; enables the certificate
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Search bases with coordinates up to this bound instead of the standard basis
        #[arg(long)]
        coeff_bound: Option<u32>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Detect an infinite pairwise non-diffeomorphic subfamily
    Detect {
        family: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Divisibility)]
        route: Route,
        #[command(flatten)]
        budget: Budget,
    },
    /// Q-genus bounds of a handlebody
    Genus {
        file: PathBuf,
        /// Matrix JSON for q; defaults to the intersection form
        #[arg(long)]
        q: Option<PathBuf>,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        coeff_bound: u32,
    },
    /// Candidate first Chern classes allowed by a genus oracle
    #[command(name = "enumerate-c1")]
    EnumerateC1 {
        file: PathBuf,
        #[arg(long)]
        oracle: PathBuf,
        /// Do not require candidates to be characteristic
        #[arg(long)]
        no_parity: bool,
        /// Also filter against the non-basis oracle classes
        #[arg(long)]
        extra_classes: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: u64,
    },
    /// Bounded Andrews-Curtis reduction of a presentation
    Acreduce {
        file: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Generate example records
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// X_p
    Xp {
        #[arg(long)]
        p: u32,
    },
    /// Y_k: k unlinked tb = -1 unknots
    Y {
        #[arg(long)]
        k: usize,
    },
    /// Z_{n,p} = X_p boundary-summed with Y_{n-2}
    Znp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
    },
    /// Torus-knot family with rotation numbers rs
    Torus {
        #[arg(long, value_delimiter = ',', required = true)]
        rs: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Family file for Z_{n, start + step i}, i < len
    Family {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        start: u32,
        #[arg(long, default_value_t = 1)]
        step: u32,
        #[arg(long, default_value_t = 13)]
        len: u32,
    },
}

struct Outcome {
    report: Value,
    code: i32,
    message: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            code: 0,
            message: None,
        }
    }

    fn inconclusive(report: Value, message: impl Into<String>) -> Self {
        Self {
            report,
            code: 1,
            message: Some(message.into()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error("{0}")]
    Input(String),
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, CliError> {
        let mut s = String::new();
        if path.as_os_str() == "-" {
            self.stdin
                .read_to_string(&mut s)
                .map_err(|source| CliError::Read {
                    path: "stdin".into(),
                    source,
                })?;
        } else {
            s = std::fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.display().to_string(),
                source,
            })?;
        }
        Ok(s)
    }

    fn handlebody(&mut self, path: &PathBuf) -> Result<SteinHandlebody, CliError> {
        let x = wire::parse_handlebody(&self.read(path)?)?;
        if let Err(vs) = validate(&x) {
            let list: Vec<String> = vs.iter().map(ToString::to_string).collect();
            return Err(CliError::Input(format!(
                "{}: invalid handlebody: {}",
                path.display(),
                list.join("; ")
            )));
        }
        Ok(x)
    }
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { stdin };
    match dispatch(&cli, &mut io) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.report).expect("serializable") + "\n"
                }
                Format::Table => report::table(&out.report),
            };
            if stdout.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            if let Some(m) = out.message {
                let _ = writeln!(stderr, "{m}");
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Invariants { file } => Ok(Outcome::ok(report::invariants(&io.handlebody(file)?))),
        Command::Classify { file, budget } => classify_cmd(&io.handlebody(file)?, *budget),
        Command::Compare {
            a,
            b,
            oracle,
            coeff_bound,
            budget,
        } => {
            let (xa, xb) = (io.handlebody(a)?, io.handlebody(b)?);
            let oracle = oracle
                .as_ref()
                .map(|p| io.read(p).and_then(|t| Ok(wire::parse_oracle(&t)?)))
                .transpose()?;
            compare_cmd(&xa, &xb, oracle, *coeff_bound, *budget, cli.explain)
        }
        Command::Detect {
            family,
            route,
            budget,
        } => {
            let fam = wire::parse_family(&io.read(family)?)?;
            detect_cmd(fam, *route, *budget, cli.explain)
        }
        Command::Genus {
            file,
            q,
            oracle,
            coeff_bound,
        } => {
            let x = io.handlebody(file)?;
            let q = match q {
                Some(p) => {
                    let rows: Vec<Vec<wire::Dec>> = wire::parse(&io.read(p)?)?;
                    wire::matrix_from_rows(&rows, "q")?
                }
                None => intersection_form(&x),
            };
            let oracle = oracle
                .as_ref()
                .map(|p| io.read(p).and_then(|t| Ok(wire::parse_oracle(&t)?)))
                .transpose()?;
            genus_cmd(&x, &q, oracle, *coeff_bound, cli.explain)
        }
        Command::EnumerateC1 {
            file,
            oracle,
            no_parity,
            extra_classes,
            max_candidates,
        } => {
            let x = io.handlebody(file)?;
            let o = wire::parse_oracle(&io.read(oracle)?)?;
            let opts = EnumerationOptions {
                characteristic_parity: !no_parity,
                extra_oracle_classes: *extra_classes,
                max_candidates: *max_candidates,
            };
            enumerate_cmd(&x, &o.oracle, opts)
        }
        Command::Acreduce { file, budget } => {
            let p = wire::parse_presentation(&io.read(file)?)?;
            let out = ac_reduce(&p, budget.depth, budget.max_states);
            let r = report::ac_outcome(&out);
            Ok(if out.is_trivialized() {
                Outcome::ok(r)
            } else {
                Outcome::inconclusive(r, "exhausted: presentation not trivialized within budget")
            })
        }
        Command::Gen { family } => gen_cmd(family),
    }
}

fn classify_cmd(x: &SteinHandlebody, budget: Budget) -> Result<Outcome, CliError> {
    let (class, trace) = match reduce_handlebody(x, budget.into()) {
        HandleReduction::Unchanged => (classify(x).expect("no 1-handles"), None),
        HandleReduction::Reduced { handlebody, trace } => (
            classify(&handlebody).expect("reduced record has no 1-handles"),
            Some(trace),
        ),
        HandleReduction::Exhausted(out) => {
            let obstruction = match &out {
                AcOutcome::Exhausted {
                    obstruction: Some(o),
                    ..
                } => Value::from(o.to_string()),
                _ => Value::Null,
            };
            let r = json!({
                "status": "unclassifiable within budget",
                "depth": budget.depth,
                "max_states": budget.max_states,
                "obstruction": obstruction,
                "ac": report::ac_outcome(&out),
            });
            return Ok(Outcome::inconclusive(r, "unclassifiable within budget"));
        }
    };
    let mut r = report::contact_json(&class);
    let o = r.as_object_mut().expect("object");
    o.insert("ac_reduced".into(), trace.is_some().into());
    if let Some(t) = &trace {
        o.insert("ac_trace".into(), report::trace_json(t));
        o.insert("note".into(), AC_NOTE.into());
    }
    o.insert("provenance".into(), provenance(&["contact_class", "ac"]));
    Ok(Outcome::ok(r))
}

fn class_or_reduce(x: &SteinHandlebody, budget: Budget) -> Option<(ContactFiveClass, SteinHandlebody)> {
    match reduce_handlebody(x, budget.into()) {
        HandleReduction::Unchanged => Some((classify(x).expect("no 1-handles"), x.clone())),
        HandleReduction::Reduced { handlebody, .. } => {
            Some((classify(&handlebody).expect("no 1-handles"), handlebody))
        }
        HandleReduction::Exhausted(_) => None,
    }
}

fn compare_cmd(
    a: &SteinHandlebody,
    b: &SteinHandlebody,
    oracle: Option<wire::Oracle>,
    coeff_bound: Option<u32>,
    budget: Budget,
    explain: bool,
) -> Result<Outcome, CliError> {
    let (Some((ca, ra)), Some((cb, rb))) = (class_or_reduce(a, budget), class_or_reduce(b, budget))
    else {
        return Ok(Outcome::inconclusive(
            json!({"status": "unclassifiable within budget"}),
            "unclassifiable within budget",
        ));
    };
    let (ha, hb) = (homology(a), homology(b));
    let (qa, qb) = (intersection_form(a), intersection_form(b));
    let (fa, fb) = (
        form_properties(&qa).expect("symmetric"),
        form_properties(&qb).expect("symmetric"),
    );
    let trivial = |h: &steinx_core::stein::Homology| h.h1_free_rank == 0 && h.torsion_orders.is_empty();
    let evidence = json!({
        "b2_equal": ha.b2 == hb.b2,
        "form_properties_equal": fa == fb,
        "h1_trivial": trivial(&ha) && trivial(&hb),
        "note": "necessary conditions only; homeomorphism is not asserted",
    });
    let certificate = match oracle {
        None => Value::Null,
        Some(o) => {
            let source = if !o.bases.is_empty() {
                UpperSource::Bases(o.bases)
            } else if let Some(c) = coeff_bound {
                UpperSource::Search { coeff_bound: c }
            } else {
                UpperSource::Bases(vec![IntegerMatrix::identity(qa.rows()).columns()])
            };
            match certify_nondiffeomorphic(&ra, &rb, &qa, &o.oracle, &source) {
                Ok(Some(c)) => {
                    let mut v = report::certificate(&c);
                    if explain {
                        v["inequality"] = format!(
                            "G(a) <= {} < {} <= G(b)",
                            c.upper_a, c.lower_b
                        )
                        .into();
                    }
                    v
                }
                Ok(None) => json!({"status": "none"}),
                Err(e @ ExoticaError::UnsoundOracle { .. }) => return Err(CliError::Input(e.to_string())),
                Err(e) => json!({"status": "not applicable", "reason": e.to_string()}),
            }
        }
    };
    Ok(Outcome::ok(json!({
        "a": report::contact_json(&ca),
        "b": report::contact_json(&cb),
        "contactomorphic": contactomorphic(&ca, &cb),
        "diffeomorphic_total_spaces": diffeomorphic_total_spaces(&ca, &cb),
        "evidence": evidence,
        "certificate": certificate,
        "provenance": provenance(&["contact_class", "evidence", "certificate"]),
    })))
}

fn detect_cmd(fam: wire::Family, route: Route, budget: Budget, explain: bool) -> Result<Outcome, CliError> {
    let first = fam
        .members
        .first()
        .ok_or_else(|| CliError::Input("family has no members".into()))?;
    let result = match route {
        Route::Divisibility => {
            let q = fam.q.clone().unwrap_or_else(|| intersection_form(&first.handlebody));
            detect_by_divisibility(&fam.members, &q)
        }
        Route::Contact => detect_by_contact(&fam.members, budget.into()),
    };
    let rep = match result {
        Ok(r) => r,
        Err(e @ ExoticaError::Unclassifiable { .. }) => {
            return Ok(Outcome::inconclusive(
                json!({"status": "unclassifiable within budget", "reason": e.to_string()}),
                e.to_string(),
            ))
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let mut r = report::exotica(&rep, explain);
    if let Some(g) = fam.generator {
        r["asymptotic"] = json!({
            "n": g.n,
            "start": g.start,
            "step": g.step,
            "divisibility_unbounded": g.divisibility_unbounded(),
            "lower_bound_unbounded": g.divisibility_unbounded(),
        });
    }
    Ok(if rep.verdict == steinx_core::exotica::Verdict::InfiniteExoticSubfamily {
        Outcome::ok(r)
    } else {
        Outcome::inconclusive(r, "inconclusive")
    })
}

fn genus_cmd(
    x: &SteinHandlebody,
    q: &IntegerMatrix,
    oracle: Option<wire::Oracle>,
    coeff_bound: u32,
    explain: bool,
) -> Result<Outcome, CliError> {
    let b = match &oracle {
        Some(o) if q.rows() <= MAX_SEARCH_RANK => q_genus_search(x, q, &o.oracle, coeff_bound),
        _ => q_genus_lb(x, q),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let mut r = report::genus_bound(&b);
    if explain {
        let diag = q.diagonal();
        let d = c1_class(x).divisibility();
        r["inequality"] = format!(
            "d = {d}, m_min = {}, m_max = {}: lower = {}",
            diag.iter().min().map_or(Value::Null, int),
            diag.iter().max().map_or(Value::Null, int),
            b.lower
        )
        .into();
    }
    Ok(Outcome::ok(r))
}

fn enumerate_cmd(
    x: &SteinHandlebody,
    oracle: &steinx_core::genus::GenusOracle,
    opts: EnumerationOptions,
) -> Result<Outcome, CliError> {
    let own = c1_class(x);
    match enumerate_c1_candidates_with(x, oracle, opts) {
        Ok(cs) => Ok(Outcome::ok(json!({
            "count": cs.len(),
            "candidates": cs.iter().map(report::class_json).collect::<Vec<_>>(),
            "own_class": report::class_json(&own),
            "contains_own_class": cs.contains(&own),
            "options": {
                "characteristic_parity": opts.characteristic_parity,
                "extra_oracle_classes": opts.extra_oracle_classes,
                "max_candidates": opts.max_candidates,
            },
            "provenance": provenance(&["c1", "enumeration"]),
        }))),
        Err(e @ EnumerationError::TooMany { .. }) => Ok(Outcome::inconclusive(
            json!({"status": "exhausted", "reason": e.to_string()}),
            e.to_string(),
        )),
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

fn gen_cmd(family: &GenFamily) -> Result<Outcome, CliError> {
    let input = |e: steinx_core::families::FamilyError| CliError::Input(e.to_string());
    let one = |x: SteinHandlebody| Outcome::ok(wire::handlebody_json(&x, Some(model_note())));
    Ok(match *family {
        GenFamily::Xp { p } => one(build_xp(p)),
        GenFamily::Y { k } => one(build_y(k)),
        GenFamily::Znp { n, p } => one(build_znp(n, p).map_err(input)?),
        GenFamily::Torus { ref rs, k } => {
            let members: Vec<FamilyMember> = build_torus_family(rs, k)
                .map_err(input)?
                .into_iter()
                .zip(rs)
                .map(|(x, r)| FamilyMember {
                    id: format!("T_{k},{r}"),
                    handlebody: x,
                })
                .collect();
            Outcome::ok(wire::family_json(&members, None))
        }
        GenFamily::Family { n, start, step, len } => {
            steinx_core::families::ZnpSequence::new(n, start, step).map_err(input)?;
            Outcome::ok(wire::family_json(
                &[],
                Some(wire::GeneratorDoc { n, start, step, len }),
            ))
        }
    })
}

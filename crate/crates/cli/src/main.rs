use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use polykernel::countermodel::{run_certificate, run_suite, Certificate, Manifest, Status};
use polykernel::model::{leibniz_valid, pi_model_decide, Model, Pred, Structure};
use polykernel::stdlib::Corpus;
use polykernel::syntax::{self, parse_term_in, Context};
use polykernel::typecheck::{check_file, ExtensionFlags, Globals, DEFAULT_FUEL};
use polykernel::weca::{self, Answer, Eraser, WecaConfig, WecaKind};

const OK: u8 = 0;
const FAILURE: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "polykernel",
    version,
    about = "λP2 kernel, term-model rewriting and polyset-model checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Extra extensions (comma separated: sigma, id, uip, funext).
    #[arg(long, value_delimiter = ',')]
    ext: Vec<String>,
    /// Rewriting system: beta, betaeta, lambda-c, lambda-id or one.
    #[arg(long)]
    weca: Option<WecaKind>,
    /// Polyset structure: pi, simple, generated, full or power-hnf.
    #[arg(long)]
    model: Option<Structure>,
    /// Reduction fuel.
    #[arg(long, env = "POLYKERNEL_FUEL", default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Predicate families for kind-indexed intersections (JSON list, or a
    /// certificate whose witnesses are used).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Do not load the shipped corpus before the input.
    #[arg(long)]
    no_prelude: bool,
    /// Extra declaration file loaded after the corpus.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Context entries `x:T`, outermost first.
    #[arg(long = "ctx")]
    ctx: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a declaration file.
    Check {
        #[arg(value_name = "FILE")]
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the normal form of the erasure of a term.
    Nf {
        /// Declaration file providing the names used by the term.
        input: Option<PathBuf>,
        /// Term to erase and normalize.
        #[arg(long)]
        term: String,
        /// Print K, K* and I in full.
        #[arg(long)]
        expanded: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide the Leibniz equality of two terms in a term model.
    Eq {
        left: String,
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Interpret a type in a polyset model.
    ModelEval {
        /// Closed type, or a type over the `--ctx` entries.
        ty: String,
        /// Also test membership of this untyped element.
        #[arg(long)]
        member: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run one refutation certificate.
    Refute {
        /// Certificate file (JSON).
        certificate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a suite of checks (the shipped one by default).
    Suite {
        /// Manifest file (JSON); relative certificate paths resolve against its directory.
        manifest: Option<PathBuf>,
        /// Print every obligation.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        common: Common,
    },
    /// List closed normal forms up to a size that belong to a type.
    Enumerate {
        ty: String,
        /// Largest term size examined.
        #[arg(long, default_value_t = 9)]
        bound: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// A reportable outcome: exit code plus text and JSON renderings.
struct Out {
    code: u8,
    text: String,
    json: Value,
}

impl Out {
    fn usage(msg: impl Into<String>) -> Out {
        let msg = msg.into();
        Out {
            code: USAGE,
            json: json!({"status": "usage-error", "message": msg}),
            text: format!("error: {msg}"),
        }
    }

    fn failure(msg: impl Into<String>, extra: Value) -> Out {
        let msg = msg.into();
        let mut j = json!({"status": "error", "message": msg});
        if let (Value::Object(m), Value::Object(e)) = (&mut j, extra) {
            m.extend(e);
        }
        Out {
            code: FAILURE,
            json: j,
            text: format!("error: {msg}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (out, as_json) = match cli.command {
        Command::Check { path, common } => (cmd_check(&path, &common), common.json),
        Command::Nf {
            input,
            term,
            expanded,
            common,
        } => (
            cmd_nf(input.as_deref(), &term, expanded, &common),
            common.json,
        ),
        Command::Eq {
            left,
            right,
            common,
        } => (cmd_eq(&left, &right, &common), common.json),
        Command::ModelEval { ty, member, common } => {
            (cmd_model_eval(&ty, member.as_deref(), &common), common.json)
        }
        Command::Refute {
            certificate,
            common,
        } => (cmd_refute(&certificate, &common), common.json),
        Command::Suite {
            manifest,
            verbose,
            common,
        } => (
            cmd_suite(manifest.as_deref(), verbose, &common),
            common.json,
        ),
        Command::Enumerate { ty, bound, common } => {
            (cmd_enumerate(&ty, bound, &common), common.json)
        }
    };
    // A closed pipe on the reader's side is not an error of ours.
    let _ = if as_json {
        writeln!(
            std::io::stdout(),
            "{}",
            serde_json::to_string_pretty(&out.json).expect("json")
        )
    } else if out.code == USAGE || (out.code == FAILURE && out.text.starts_with("error:")) {
        writeln!(std::io::stderr(), "{}", out.text)
    } else {
        writeln!(std::io::stdout(), "{}", out.text.trim_end())
    };
    ExitCode::from(out.code)
}

fn answer_code(a: Answer) -> u8 {
    match a {
        Answer::Unknown => UNKNOWN,
        _ => OK,
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Reproduced => OK,
        Status::Failed => FAILURE,
        Status::Unknown => UNKNOWN,
    }
}

fn extensions(common: &Common) -> Result<ExtensionFlags, Out> {
    ExtensionFlags::from_pragmas(&common.ext).map_err(|e| Out::usage(e.to_string()))
}

/// The global environment: the corpus unless disabled, then `--file` and
/// any extra input file.
fn environment(common: &Common, extra: Option<&Path>) -> Result<Globals, Out> {
    let mut globals = if common.no_prelude {
        Globals::new()
    } else {
        Corpus::load()
            .map_err(|e| Out::failure(format!("corpus: {e}"), json!({})))?
            .globals()
            .clone()
    };
    let flags = extensions(common)?;
    for path in common.file.as_deref().into_iter().chain(extra) {
        load_file(&mut globals, path, flags, common.fuel)?;
    }
    Ok(globals)
}

fn load_file(
    globals: &mut Globals,
    path: &Path,
    flags: ExtensionFlags,
    fuel: u64,
) -> Result<ExtensionFlags, Out> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Out::usage(format!("{}: {e}", path.display())))?;
    let file = syntax::parse(&src).map_err(|e| {
        Out::failure(
            format!("{}: {e}", path.display()),
            json!({"code": "ParseError", "line": e.pos.line, "col": e.pos.col}),
        )
    })?;
    check_file(globals, &file, flags, fuel).map_err(|e| {
        Out::failure(
            format!("{}: {e}", path.display()),
            json!({"code": e.error.code(), "declaration": e.name, "line": e.pos.line, "col": e.pos.col}),
        )
    })
}

fn context(common: &Common) -> Result<Context, Out> {
    let mut pairs = Vec::new();
    for entry in &common.ctx {
        let Some((x, t)) = entry.split_once(':') else {
            return Err(Out::usage(format!(
                "context entry `{entry}` is not of the form x:T"
            )));
        };
        pairs.push((x.trim(), t.trim()));
    }
    Context::parse(&pairs).map_err(|e| Out::usage(format!("context: {e}")))
}

fn parse_in(src: &str, ctx: &Context) -> Result<syntax::Term, Out> {
    parse_term_in(src, &ctx.names()).map_err(|e| Out::usage(format!("`{src}`: {e}")))
}

fn weca_config(common: &Common, fallback: WecaKind) -> WecaConfig {
    WecaConfig::of_kind(common.weca.unwrap_or(fallback)).with_fuel(common.fuel)
}

fn cmd_check(path: &Path, common: &Common) -> Out {
    let mut globals = match environment(common, None) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let flags = match extensions(common) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let before = globals.len();
    if let Err(o) = load_file(&mut globals, path, flags, common.fuel) {
        return o;
    }
    let src = std::fs::read_to_string(path).unwrap_or_default();
    let decls = syntax::parse(&src).map(|f| f.decls).unwrap_or_default();
    let mut lines = Vec::new();
    let mut items = Vec::new();
    for d in &decls {
        if let Some(g) = globals.get(d.name()) {
            let ty = syntax::print(&g.ty);
            lines.push(format!("{} : {}", d.name(), ty));
            items.push(
                json!({"name": d.name().to_string(), "type": ty, "postulate": g.body.is_none()}),
            );
        }
    }
    let added = globals.len() - before;
    lines.push(format!(
        "ok: {} declarations checked ({} new)",
        decls.len(),
        added
    ));
    Out {
        code: OK,
        text: lines.join("\n"),
        json: json!({"status": "ok", "declarations": items}),
    }
}

fn cmd_nf(input: Option<&Path>, term: &str, expanded: bool, common: &Common) -> Out {
    let globals = match environment(common, input) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let ctx = match context(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let t = match parse_in(term, &ctx) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let cfg = weca_config(common, WecaKind::Beta);
    let u = match Eraser::new(&globals).erase_open(&ctx, &t) {
        Ok(u) => u,
        Err(e) => return Out::failure(e.to_string(), json!({})),
    };
    match weca::normalize(&u, &cfg) {
        Ok(n) => {
            let shown = weca::print(&n, !expanded);
            Out {
                code: OK,
                json: json!({"status": "ok", "term": term, "weca": cfg.kind.as_str(), "erasure": weca::print(&u, false), "normal_form": shown}),
                text: shown,
            }
        }
        Err(e) => Out {
            code: UNKNOWN,
            json: json!({"status": "unknown", "term": term, "weca": cfg.kind.as_str(), "message": e.to_string()}),
            text: format!("Unknown: {e}"),
        },
    }
}

fn cmd_eq(left: &str, right: &str, common: &Common) -> Out {
    let globals = match environment(common, None) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let ctx = match context(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let (t, q) = match (parse_in(left, &ctx), parse_in(right, &ctx)) {
        (Ok(t), Ok(q)) => (t, q),
        (Err(o), _) | (_, Err(o)) => return o,
    };
    let fallback = common
        .model
        .map(|m| m.default_weca())
        .unwrap_or(WecaKind::Beta);
    let cfg = weca_config(common, fallback);
    match leibniz_valid(&globals, &cfg, &ctx, &t, &q) {
        Ok(a) => Out {
            code: answer_code(a),
            json: json!({"status": "ok", "left": left, "right": right, "weca": cfg.kind.as_str(), "answer": a}),
            text: a.to_string(),
        },
        Err(e) => Out::failure(e.to_string(), json!({})),
    }
}

fn witnesses(common: &Common) -> Result<Vec<Pred>, Out> {
    let Some(path) = &common.witness else {
        return Ok(Vec::new());
    };
    let src = std::fs::read_to_string(path)
        .map_err(|e| Out::usage(format!("{}: {e}", path.display())))?;
    if let Ok(list) = serde_json::from_str::<Vec<Pred>>(&src) {
        return Ok(list);
    }
    serde_json::from_str::<Certificate>(&src)
        .map(|c| c.witnesses.into_iter().map(|w| w.family).collect())
        .map_err(|e| {
            Out::usage(format!(
                "{}: not a witness list or certificate: {e}",
                path.display()
            ))
        })
}

fn cmd_model_eval(ty: &str, member: Option<&str>, common: &Common) -> Out {
    let globals = match environment(common, None) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let ctx = match context(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let t = match parse_in(ty, &ctx) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let structure = common.model.unwrap_or(Structure::Pi);
    if structure == Structure::Pi {
        if member.is_some() {
            return Out::usage("--member needs a model other than pi");
        }
        return match pi_model_decide(&globals, &ctx, &t) {
            Ok(v) => Out {
                code: OK,
                json: json!({"status": "ok", "model": "pi", "type": ty, "verdict": v}),
                text: v.to_string(),
            },
            Err(e) => Out::failure(e.to_string(), json!({})),
        };
    }
    let cfg = weca_config(common, structure.default_weca());
    let mut model = match Model::new(&globals, structure, cfg) {
        Ok(m) => m,
        Err(e) => return Out::usage(e.to_string()),
    };
    match witnesses(common) {
        Ok(ws) => ws.into_iter().for_each(|w| model.register_witness(w)),
        Err(o) => return o,
    }
    let set = match model
        .default_env(&ctx)
        .and_then(|env| model.interp_con(&ctx, &t, &env))
    {
        Ok(polykernel::model::Val::Set(s)) => s,
        Ok(_) => return Out::failure(format!("`{ty}` denotes a family, not a type"), json!({})),
        Err(e) => return Out::failure(e.to_string(), json!({})),
    };
    if let Some(src) = member {
        let e = match weca::parse_uterm_plain(src) {
            Ok(e) => e,
            Err(err) => return Out::usage(format!("`{src}`: {err}")),
        };
        let v = model.member(&e, &set);
        return Out {
            code: answer_code(v.answer),
            json: json!({"status": "ok", "model": structure.as_str(), "type": ty, "element": src, "member": v}),
            text: v.to_string(),
        };
    }
    let e = model.is_empty(&set);
    let verdict = match e.answer {
        Answer::Yes => "Empty",
        Answer::No => "Inhabited",
        Answer::Unknown => "Unknown",
    };
    let mut text = verdict.to_string();
    if let Some(w) = &e.witness {
        text.push_str(&format!(" (witness {})", weca::print(w, true)));
    }
    text.push_str(&format!("\n  {}", e.evidence));
    Out {
        code: answer_code(e.answer),
        json: json!({"status": "ok", "model": structure.as_str(), "type": ty, "verdict": verdict,
                     "evidence": e.evidence, "witness": e.witness.as_ref().map(|w| weca::print(w, false))}),
        text,
    }
}

fn corpus(common: &Common) -> Result<Corpus, Out> {
    if common.no_prelude || common.file.is_some() {
        return Err(Out::usage(
            "certificates are checked against the shipped corpus",
        ));
    }
    Corpus::load().map_err(|e| Out::failure(format!("corpus: {e}"), json!({})))
}

fn cmd_refute(path: &Path, common: &Common) -> Out {
    let corpus = match corpus(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return Out::usage(format!("{}: {e}", path.display())),
    };
    let mut cert: Certificate = match serde_json::from_str(&src) {
        Ok(c) => c,
        Err(e) => return Out::usage(format!("{}: {e}", path.display())),
    };
    if std::env::var_os("POLYKERNEL_FUEL").is_some() || common.fuel != DEFAULT_FUEL {
        cert.fuel = common.fuel;
    }
    match run_certificate(&corpus, &cert) {
        Ok(r) => Out {
            code: status_code(r.status),
            json: serde_json::to_value(&r).expect("json"),
            text: r.to_string(),
        },
        Err(e) => Out::failure(e.to_string(), json!({"code": "ImproperCertificate"})),
    }
}

fn cmd_suite(path: Option<&Path>, verbose: bool, common: &Common) -> Out {
    let corpus = match corpus(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let manifest = match path {
        Some(p) => match Manifest::load(p) {
            Ok(m) => m,
            Err(e) => return Out::usage(e.to_string()),
        },
        None => Manifest::default_suite(),
    };
    let mut manifest = manifest;
    if std::env::var_os("POLYKERNEL_FUEL").is_some() || common.fuel != DEFAULT_FUEL {
        manifest.fuel = Some(common.fuel);
    }
    let base = path.and_then(Path::parent);
    let suite = match run_suite(&manifest, &corpus, base) {
        Ok(s) => s,
        Err(e) => return Out::usage(e.to_string()),
    };
    let text = suite
        .reports
        .iter()
        .map(|r| if verbose { r.to_string() } else { r.summary() })
        .collect::<Vec<_>>()
        .join("\n");
    Out {
        code: status_code(suite.status()),
        json: json!({"status": suite.status(), "reports": suite.reports}),
        text,
    }
}

fn cmd_enumerate(ty: &str, bound: usize, common: &Common) -> Out {
    let globals = match environment(common, None) {
        Ok(g) => g,
        Err(o) => return o,
    };
    let t = match parse_in(ty, &Context::new()) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let structure = common.model.unwrap_or(Structure::Generated);
    let cfg = weca_config(common, structure.default_weca());
    let mut model = match Model::new(&globals, structure, cfg) {
        Ok(m) => m,
        Err(e) => return Out::usage(e.to_string()),
    };
    match witnesses(common) {
        Ok(ws) => ws.into_iter().for_each(|w| model.register_witness(w)),
        Err(o) => return o,
    }
    let set = match model.interp_type(&t) {
        Ok(s) => s,
        Err(e) => return Out::failure(e.to_string(), json!({})),
    };
    let en = model.enumerate_members(&set, bound);
    let members: Vec<String> = en.members.iter().map(|m| weca::print(m, true)).collect();
    let unknown: Vec<String> = en.unknown.iter().map(|m| weca::print(m, true)).collect();
    let mut text = members.join("\n");
    if !unknown.is_empty() {
        text.push_str(&format!(
            "\nundecided ({}):\n{}",
            unknown.len(),
            unknown.join("\n")
        ));
    }
    text.push_str(&format!(
        "\n{} members among {} normal forms",
        members.len(),
        en.examined
    ));
    Out {
        code: if unknown.is_empty() { OK } else { UNKNOWN },
        json: json!({"status": "ok", "model": structure.as_str(), "type": ty, "bound": bound,
                     "members": members, "unknown": unknown, "examined": en.examined}),
        text,
    }
}

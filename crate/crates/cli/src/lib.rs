//! The `wfesets` command line: argument parsing, input resolution and output
//! formatting around the library operations.
//!
//! Every command prints JSON on stdout unless `--plain` is given. Exit status
//! is 0 on success, 1 when an operation rejects its input (the output then
//! carries `{"error": {"code", "message"}}`), and 2 on usage errors.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wfesets::construct;
use wfesets::digraph::{self, Digraph, Node};
use wfesets::formula::{self, Formula};
use wfesets::hfset::{self, HfSet};
use wfesets::ordinal::{self, ArithOp, CnfOrdinal};
use wfesets::truth;

/// Environment variable capping the rank bound of `interp-eval`.
pub const MAX_RANK_ENV: &str = "WFESETS_MAX_RANK";
const DEFAULT_MAX_RANK: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "wfesets", version, about = "Hereditarily finite sets coded by well-founded extensional digraphs")]
struct Cli {
    /// Print plain text instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Run one command per line of FILE ('-' for stdin).
    #[arg(long, value_name = "FILE")]
    batch: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

/// Digraphs, sets and formulas are read from a file when the argument names
/// one, from stdin for '-', and otherwise taken literally. In a literal
/// digraph ';' separates edges.
#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a digraph: well-founded, extensional, vertex.
    Check {
        graph: String,
        /// Fail with the violation's code unless the digraph is WFEV.
        #[arg(long)]
        require_wfev: bool,
    },
    /// Canonical representative of the isomorphism class.
    Canon { graph: String },
    /// Decide isomorphism of two WFEV digraphs.
    Iso { a: String, b: String },
    /// Lower cone of a node.
    Cone { graph: String, node: Node },
    /// Digraph coding the unordered pair of two realizations.
    Pair { a: String, b: String },
    /// Digraph whose elements code the given digraphs.
    Assemble { graphs: Vec<String> },
    /// The n-th slice under the pairing 2^n(2j+1)-1.
    Slice { graph: String, n: u64 },
    /// Bounded pair closure.
    Close {
        graph: String,
        #[arg(long, default_value_t = 1)]
        limit: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Mostowski collapse of a WFEV digraph.
    Collapse { graph: String },
    /// Digraph coding a set, a numeral, or a set of numerals.
    Encode(EncodeArgs),
    /// Transitive closure of a set.
    Tc { set: String },
    /// Parse a formula and report its shape.
    Parse { formula: String },
    /// Goedel code of a parameter-free formula, or the formula of a code.
    Godel {
        #[arg(required_unless_present = "decode")]
        formula: Option<String>,
        #[arg(long, value_name = "CODE", conflicts_with = "formula")]
        decode: Option<String>,
    },
    /// Truth of a sentence over a finite transitive structure.
    Eval {
        formula: String,
        /// A level name such as V3, or a set whose elements form the structure.
        #[arg(long)]
        structure: String,
        /// Values of the parameter slots #0, #1, ... in order.
        #[arg(long = "param", value_name = "SET")]
        params: Vec<String>,
    },
    /// Translate a formula into the digraph language.
    Translate { formula: String },
    /// Evaluate a translated formula on digraph arguments.
    InterpEval {
        formula: String,
        /// Digraphs bound to v0, v1, ... (and #0, #1, ...).
        #[arg(long = "arg", value_name = "GRAPH")]
        args: Vec<String>,
        /// Rank bound of the quantifier range; defaults to the cap.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Definable subsets of a finite transitive structure.
    Def {
        #[arg(long)]
        structure: String,
        /// Enumerate formulas up to this many symbols instead of certificates.
        #[arg(long)]
        budget: Option<usize>,
        /// Include the defining formulas.
        #[arg(long, conflicts_with = "budget")]
        certificates: bool,
    },
    /// Finite constructible level L_n.
    Level {
        n: usize,
        /// Print the size only (the default).
        #[arg(long, conflicts_with = "list")]
        count: bool,
        /// List the members (n at most 4).
        #[arg(long)]
        list: bool,
    },
    /// Ordinal arithmetic in Cantor normal form.
    Ord {
        a: String,
        #[arg(value_enum, requires = "b")]
        op: Option<OrdOp>,
        b: Option<String>,
    },
    /// Order type of a finite strict linear order.
    CollapseOrder { graph: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct EncodeArgs {
    set: Option<String>,
    #[arg(long)]
    numeral: Option<u64>,
    /// Comma-separated naturals.
    #[arg(long, value_delimiter = ',')]
    natset: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrdOp {
    Add,
    Mul,
    Pow,
    Cmp,
}

/// Result of running one command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: &'static str,
    message: String,
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Failure {
                Failure { code: e.code(), message: e.to_string() }
            }
        }
    )*};
}

failure_from!(
    wfesets::Error,
    digraph::DigraphError,
    hfset::HfError,
    formula::FormulaError,
    truth::TruthError,
    construct::ConstructError,
    ordinal::OrdinalError
);

fn fail<T>(code: &'static str, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { code, message: message.into() })
}

struct Reply {
    json: Value,
    plain: String,
}

struct Env<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    max_rank: Option<String>,
}

impl Env<'_> {
    fn text(&mut self, arg: &str) -> Result<String, Failure> {
        if arg == "-" {
            if self.stdin_used {
                return fail("IO_ERROR", "stdin can be read only once");
            }
            self.stdin_used = true;
            let mut buf = String::new();
            return match self.stdin.read_to_string(&mut buf) {
                Ok(_) => Ok(buf),
                Err(e) => fail("IO_ERROR", format!("reading stdin: {e}")),
            };
        }
        if Path::new(arg).is_file() {
            return std::fs::read_to_string(arg).or_else(|e| fail("IO_ERROR", format!("reading {arg}: {e}")));
        }
        Ok(arg.to_string())
    }

    fn graph(&mut self, arg: &str) -> Result<Digraph, Failure> {
        let text = self.text(arg)?;
        let text = if text.trim_start().starts_with('{') { text } else { text.replace(';', "\n") };
        Ok(Digraph::parse(&text)?)
    }

    fn set(&mut self, arg: &str) -> Result<HfSet, Failure> {
        Ok(self.text(arg)?.trim().parse::<HfSet>()?)
    }

    fn formula(&mut self, arg: &str) -> Result<Formula, Failure> {
        Ok(formula::parse(&self.text(arg)?)?)
    }

    fn structure(&mut self, arg: &str) -> Result<BTreeSet<HfSet>, Failure> {
        let level = arg.strip_prefix('V').or_else(|| arg.strip_prefix('v'));
        if let Some(n) = level.and_then(|n| n.parse::<usize>().ok()) {
            return Ok(hfset::v_level(n)?);
        }
        Ok(self.set(arg)?.to_family())
    }

    fn max_rank(&self) -> Result<usize, Failure> {
        match &self.max_rank {
            None => Ok(DEFAULT_MAX_RANK),
            Some(v) => v.trim().parse().or_else(|_| fail("BAD_ENVIRONMENT", format!("{MAX_RANK_ENV}={v:?} is not a natural"))),
        }
    }
}

/// Runs one command line (`args[0]` is the program name). `WFESETS_MAX_RANK`
/// is taken from `max_rank`.
pub fn execute<I, T>(args: I, stdin: &mut dyn Read, max_rank: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { status: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut env = Env { stdin, stdin_used: false, max_rank };
    match (cli.command, cli.batch) {
        (Some(_), Some(_)) => usage("--batch cannot be combined with a command"),
        (Some(command), None) => finish(run(command, &mut env), cli.plain),
        (None, Some(file)) => batch(&file, cli.plain, &mut env),
        (None, None) => usage("no command given"),
    }
}

fn usage(message: &str) -> Outcome {
    Outcome { status: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
}

fn finish(result: Result<Reply, Failure>, plain: bool) -> Outcome {
    match result {
        Ok(reply) => {
            let stdout = if plain { reply.plain } else { reply.json.to_string() };
            Outcome { status: 0, stdout: stdout + "\n", stderr: String::new() }
        }
        Err(f) => {
            let json = json!({ "error": { "code": f.code, "message": f.message } });
            if plain {
                Outcome { status: 1, stdout: String::new(), stderr: format!("error[{}]: {}\n", f.code, f.message) }
            } else {
                Outcome { status: 1, stdout: json.to_string() + "\n", stderr: String::new() }
            }
        }
    }
}

fn batch(file: &str, plain: bool, env: &mut Env) -> Outcome {
    let text = match env.text(file) {
        Ok(t) if file == "-" || Path::new(file).is_file() => t,
        Ok(_) => return finish(fail("IO_ERROR", format!("no such file: {file}")), plain),
        Err(f) => return finish(Err(f), plain),
    };
    let mut out = Outcome { status: 0, stdout: String::new(), stderr: String::new() };
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let Some(words) = shlex::split(line) else {
            out.status = out.status.max(2);
            out.stderr += &format!("error: unbalanced quotes in {line:?}\n");
            continue;
        };
        let mut args = vec!["wfesets".to_string()];
        if plain {
            args.push("--plain".into());
        }
        args.extend(words);
        let one = match Cli::try_parse_from(&args) {
            Ok(Cli { command: Some(command), .. }) => finish(run(command, env), plain),
            Ok(_) => Outcome { status: 2, stdout: String::new(), stderr: format!("error: no command in {line:?}\n") },
            Err(e) => Outcome { status: 2, stdout: String::new(), stderr: e.render().to_string() },
        };
        out.status = out.status.max(one.status);
        out.stdout += &one.stdout;
        out.stderr += &one.stderr;
    }
    out
}

fn edges_reply(d: &Digraph) -> Reply {
    Reply { json: d.to_json(), plain: d.to_text() }
}

fn sets_json(sets: &BTreeSet<HfSet>) -> Value {
    sets.iter().map(|s| Value::String(s.to_string())).collect()
}

fn sets_plain(sets: &BTreeSet<HfSet>) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n")
}

fn run(command: Command, env: &mut Env) -> Result<Reply, Failure> {
    match command {
        Command::Check { graph, require_wfev } => {
            let a = env.graph(&graph)?;
            let class = digraph::validate(&a);
            if require_wfev {
                digraph::check_wfev(&a)?;
            }
            let json = json!({
                "wf": class.well_founded,
                "ext": class.extensional,
                "has_vertex": class.has_vertex,
                "vertex": class.vertex,
                "min": class.min_node,
                "wfev": class.is_wfev(),
            });
            let show = |n: Option<Node>| n.map_or("-".to_string(), |n| n.to_string());
            let plain = format!(
                "wf={} ext={} vertex={} min={}",
                class.well_founded,
                class.extensional,
                show(class.vertex),
                show(class.min_node)
            );
            Ok(Reply { json, plain })
        }
        Command::Canon { graph } => Ok(edges_reply(&digraph::canonicalize(&env.graph(&graph)?)?)),
        Command::Iso { a, b } => {
            let (a, b) = (env.graph(&a)?, env.graph(&b)?);
            let witness = digraph::isomorphic(&a, &b)?;
            let plain = match &witness {
                Some(w) => w.iter().map(|(u, v)| format!("{u} -> {v}")).collect::<Vec<_>>().join("\n"),
                None => "not isomorphic".to_string(),
            };
            let json = json!({
                "isomorphic": witness.is_some(),
                "witness": witness.map(|w| w.into_iter().map(|(u, v)| [u, v]).collect::<Vec<_>>()),
            });
            Ok(Reply { json, plain })
        }
        Command::Cone { graph, node } => Ok(edges_reply(&digraph::cone(&env.graph(&graph)?, node)?)),
        Command::Pair { a, b } => {
            let (a, b) = (env.graph(&a)?, env.graph(&b)?);
            let p = digraph::pair(&a, &b)?;
            let mut json = p.digraph.to_json();
            json["a"] = json!(p.a);
            json["b"] = json!(p.b);
            Ok(Reply { json, plain: format!("# a={} b={}\n{}", p.a, p.b, p.digraph.to_text()) })
        }
        Command::Assemble { graphs } => {
            let parts = graphs.iter().map(|g| env.graph(g)).collect::<Result<Vec<_>, _>>()?;
            let out = digraph::assemble(&parts)?;
            let mut json = out.digraph.to_json();
            json["members"] = json!(out.members);
            let members: Vec<String> = out.members.iter().map(|m| m.to_string()).collect();
            Ok(Reply { json, plain: format!("# members={}\n{}", members.join(","), out.digraph.to_text()) })
        }
        Command::Slice { graph, n } => Ok(edges_reply(&digraph::slice(&env.graph(&graph)?, n))),
        Command::Close { graph, limit, depth } => {
            Ok(edges_reply(&digraph::pair_close_bounded(&env.graph(&graph)?, limit, depth)?))
        }
        Command::Collapse { graph } => {
            let result = hfset::collapse(&env.graph(&graph)?)?;
            let index = result.value.ack_index().map(|n| n.to_string());
            let xi: Vec<Value> = result.xi.iter().map(|(u, s)| json!([u, s.to_string()])).collect();
            let mut plain = result.value.to_string();
            for (u, s) in &result.xi {
                plain += &format!("\n{u} {s}");
            }
            Ok(Reply { json: json!({ "value": result.value.to_string(), "ack_index": index, "xi": xi }), plain })
        }
        Command::Encode(args) => {
            let d = match (args.set, args.numeral, args.natset) {
                (Some(s), _, _) => hfset::encode_set(&env.set(&s)?),
                (_, Some(n), _) => digraph::encode_numeral(n),
                (_, _, Some(x)) => digraph::encode_natset(&x.into_iter().collect()),
                _ => unreachable!("clap requires one source"),
            };
            Ok(edges_reply(&d))
        }
        Command::Tc { set } => {
            let s = env.set(&set)?;
            let closure = hfset::transitive_closure(&s);
            Ok(Reply { json: json!({ "closure": sets_json(&closure), "size": closure.len() }), plain: sets_plain(&closure) })
        }
        Command::Parse { formula } => {
            let f = env.formula(&formula)?;
            let json = json!({
                "formula": f.to_string(),
                "free": f.free_vars(),
                "params": f.params(),
                "symbols": f.symbol_count(),
                "depth": f.depth(),
            });
            Ok(Reply { json, plain: f.to_string() })
        }
        Command::Godel { formula, decode } => match (formula, decode) {
            (_, Some(code)) => {
                let Ok(n) = code.trim().parse::<num_bigint::BigUint>() else {
                    return fail("PARSE_ERROR", format!("{code:?} is not a natural"));
                };
                match formula::degodelize(&n) {
                    Some(f) => Ok(Reply { json: json!({ "formula": f.to_string() }), plain: f.to_string() }),
                    None => fail("NOT_A_CODE", format!("{n} codes no formula")),
                }
            }
            (Some(text), None) => {
                let code = formula::godelize(&env.formula(&text)?)?.to_string();
                Ok(Reply { json: json!({ "code": code }), plain: code })
            }
            (None, None) => unreachable!("clap requires one of them"),
        },
        Command::Eval { formula, structure, params } => {
            let x = env.structure(&structure)?;
            let values = params.iter().map(|p| env.set(p)).collect::<Result<Vec<_>, _>>()?;
            let f = env.formula(&formula)?.substitute_params(&values)?;
            let tau = truth::build_tts(&x, &f)?;
            let models = tau.contains(&f);
            Ok(Reply { json: json!({ "models": models, "tts_size": tau.len() }), plain: models.to_string() })
        }
        Command::Translate { formula } => {
            let t = formula::translate_interp(&env.formula(&formula)?);
            Ok(Reply { json: json!({ "translation": t.to_string() }), plain: t.to_string() })
        }
        Command::InterpEval { formula, args, rank } => {
            let cap = env.max_rank()?;
            let rank = rank.unwrap_or(cap);
            if rank > cap {
                return fail("RANK_TOO_LARGE", format!("rank bound {rank} exceeds {MAX_RANK_ENV}={cap}"));
            }
            let phi = formula::translate_interp(&env.formula(&formula)?);
            let graphs = args.iter().map(|g| env.graph(g)).collect::<Result<Vec<_>, _>>()?;
            let models = truth::models_interp_bounded(&phi, &graphs, rank)?;
            Ok(Reply { json: json!({ "models": models, "rank": rank }), plain: models.to_string() })
        }
        Command::Def { structure, budget, certificates } => {
            let x = env.structure(&structure)?;
            if let Some(budget) = budget {
                let found = construct::def_enumerate(&x, budget)?;
                let json = json!({ "count": found.len(), "subsets": sets_json(&found), "budget": budget });
                return Ok(Reply { json, plain: sets_plain(&found) });
            }
            let certs = construct::def_certificate(&x)?;
            let subsets: BTreeSet<HfSet> = certs.iter().map(|c| c.subset.clone()).collect();
            let mut json = json!({ "count": certs.len(), "subsets": sets_json(&subsets) });
            let mut plain = sets_plain(&subsets);
            if certificates {
                json["certificates"] = certs
                    .iter()
                    .map(|c| {
                        json!({
                            "subset": c.subset.to_string(),
                            "formula": c.formula.to_string(),
                            "params": c.params.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                plain = certs
                    .iter()
                    .map(|c| {
                        let params: Vec<String> = c.params.iter().map(|p| p.to_string()).collect();
                        format!("{}\t{}\t[{}]", c.subset, c.formula, params.join(", "))
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
            }
            Ok(Reply { json, plain })
        }
        Command::Level { n, count: _, list } => {
            if list && n > 4 {
                return fail("TOO_LARGE", format!("listing L_{n} is not supported; use --count"));
            }
            let level = construct::l_level(n)?;
            let mut json = json!({ "level": n, "count": level.len() });
            let mut plain = level.len().to_string();
            if list {
                json["members"] = sets_json(&level);
                plain = sets_plain(&level);
            }
            Ok(Reply { json, plain })
        }
        Command::Ord { a, op, b } => {
            let a: CnfOrdinal = env.text(&a)?.trim().parse()?;
            let Some(op) = op else {
                return Ok(Reply { json: json!({ "result": a.to_string() }), plain: a.to_string() });
            };
            let b: CnfOrdinal = env.text(&b.expect("clap requires b with op"))?.trim().parse()?;
            let result = match op {
                OrdOp::Cmp => {
                    let word = match a.cmp(&b) {
                        std::cmp::Ordering::Less => "lt",
                        std::cmp::Ordering::Equal => "eq",
                        std::cmp::Ordering::Greater => "gt",
                    };
                    return Ok(Reply { json: json!({ "cmp": word }), plain: word.to_string() });
                }
                OrdOp::Add => CnfOrdinal::arith(ArithOp::Add, &a, &b)?,
                OrdOp::Mul => CnfOrdinal::arith(ArithOp::Mul, &a, &b)?,
                OrdOp::Pow => CnfOrdinal::arith(ArithOp::Pow, &a, &b)?,
            };
            Ok(Reply { json: json!({ "result": result.to_string() }), plain: result.to_string() })
        }
        Command::CollapseOrder { graph } => {
            let c = ordinal::collapse_wellorder(&env.graph(&graph)?)?;
            let iso: Vec<[u64; 2]> = c.iso.iter().map(|(&u, &i)| [u, i as u64]).collect();
            let positions: BTreeMap<usize, Node> = c.iso.iter().map(|(&u, &i)| (i, u)).collect();
            let order: Vec<String> = positions.values().map(|u| u.to_string()).collect();
            Ok(Reply { json: json!({ "length": c.length, "iso": iso }), plain: format!("{}\n{}", c.length, order.join(" ")) })
        }
    }
}

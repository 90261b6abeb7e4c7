//! The `oodn` command line.
//!
//! Exit status: 0 on success, 1 when an operation's result does not exist,
//! 2 on usage, load or validation errors (diagnostics go to stderr).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use oodn::exploiters::{Exploiter, OperationResult};
use oodn::io;
use oodn::model::HasMembers;
use oodn::modifiers::{self, Target};
use oodn::network::{AbsentAttempt, Direction, NodeKind, NodeRef, Query, Relation, RelationKind};
use oodn::{ClassDef, Network, ObjectInstance};

#[derive(Parser, Debug)]
#[command(name = "oodn", version, about = "Object-oriented dynamic networks")]
pub struct Cli {
    /// Machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a network document and check every invariant.
    Validate { file: PathBuf },
    /// Summarize a network, or describe one node.
    Show { file: PathBuf, node: Option<String> },
    /// Run an exploiter over network nodes.
    Op {
        file: PathBuf,
        exploiter: String,
        #[arg(required = true)]
        operands: Vec<String>,
        /// Clone index (clone only; defaults to the next free index).
        #[arg(long)]
        index: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Always add the result as a new node.
        #[arg(long)]
        no_dedup: bool,
    },
    /// Apply a named modifier to a node.
    Modify {
        file: PathBuf,
        modifier: String,
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_dedup: bool,
    },
    /// Infer subsumption and instance-of relations.
    Infer {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Query the relation graph.
    Query {
        file: PathBuf,
        /// Infer relations at this threshold before querying.
        #[arg(long)]
        threshold: Option<f64>,
        #[command(subcommand)]
        pattern: Pattern,
    },
    /// Print the network as a Graphviz digraph.
    ExportDot {
        file: PathBuf,
        /// Also run an exploiter, e.g. "intersection T(A) T(B)"; absent
        /// results are drawn dashed. Repeatable.
        #[arg(long = "attempt", value_name = "OP OPERANDS")]
        attempts: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Pattern {
    /// Nodes adjacent to NODE.
    Neighbors {
        node: String,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, value_enum, default_value_t = Dir::Out)]
        direction: Dir,
    },
    /// Nodes reachable from NODE along edges of one kind.
    Reachable {
        node: String,
        #[arg(long)]
        kind: String,
    },
    /// Objects with an instance-of edge to CLASS.
    InstancesOf { class: String },
    /// Classes below CLASS along is-a / a-kind-of edges.
    SubclassesOf { class: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dir {
    Out,
    In,
    Both,
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

type Outcome = Result<i32, Failure>;

/// Runs one invocation, writing reports to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    io::load(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes the network document next to `path` and renames it into place.
fn write_atomically(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| usage(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn save_to(out_file: &Option<PathBuf>, n: &Network) -> Result<(), Failure> {
    match out_file {
        Some(p) => write_atomically(p, &io::save(n)),
        None => Ok(()),
    }
}

fn resolve(n: &Network, name: &str) -> Result<NodeRef, Failure> {
    n.resolve(name).map_err(usage)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| usage(format!("writing output: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Json) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("json values serialize");
    text.push('\n');
    emit(out, &text)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Validate { file } => {
            let n = load(file)?;
            let counts = json!({
                "classes": n.classes().count(),
                "objects": n.objects().count(),
                "modifiers": n.modifiers().count(),
                "relations": n.relations().count(),
            });
            if cli.json {
                emit_json(out, &json!({ "valid": true, "counts": counts }))?;
            } else {
                emit(
                    out,
                    &format!(
                        "valid: {} classes, {} objects, {} modifiers, {} relations\n",
                        counts["classes"], counts["objects"], counts["modifiers"], counts["relations"]
                    ),
                )?;
            }
            Ok(0)
        }
        Command::Show { file, node } => {
            let n = load(file)?;
            match node {
                None => show_network(&n, cli.json, out)?,
                Some(name) => {
                    let r = resolve(&n, name)?;
                    match r.kind {
                        NodeKind::Class => {
                            let c = n.class(&r.name).expect("resolved");
                            if cli.json {
                                emit_json(out, &class_json(c))?;
                            } else {
                                emit(out, &c.to_string())?;
                            }
                        }
                        NodeKind::Object => {
                            let o = n.object(&r.name, r.clone_index).expect("resolved");
                            if cli.json {
                                emit_json(out, &object_json(o))?;
                            } else {
                                emit(out, &object_text(o))?;
                            }
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Op { file, exploiter, operands, index, out: out_file, no_dedup } => {
            let n = load(file)?.with_dedup(!no_dedup);
            let op: Exploiter = exploiter.parse().map_err(usage)?;
            let refs = operands.iter().map(|o| resolve(&n, o)).collect::<Result<Vec<_>, _>>()?;
            let outcome = n.apply_exploiter(op, &refs, *index).map_err(usage)?;
            let label =
                format!("{}({})", op.name(), refs.iter().map(NodeRef::display_name).collect::<Vec<_>>().join(", "));
            match (&outcome.result, &outcome.node) {
                (OperationResult::Absent { reason }, _) => {
                    if cli.json {
                        emit_json(out, &json!({ "operation": label, "exists": false, "reason": reason }))?;
                    } else {
                        emit(out, &format!("{label}: result does not exist ({reason})\n"))?;
                    }
                    Ok(1)
                }
                (OperationResult::Present { class, objects }, Some(node)) => {
                    save_to(out_file, &outcome.network)?;
                    if cli.json {
                        let mut v = json!({
                            "operation": label,
                            "exists": true,
                            "node": node_json(node),
                            "class": class_json(class),
                        });
                        if let Some(objs) = objects {
                            v["objects"] = objs.iter().map(|o| Json::from(o.display_name())).collect();
                        }
                        emit_json(out, &v)?;
                    } else {
                        let mut text = format!("{label} -> {} {}\n", node.kind, node);
                        if let Some(objs) = objects {
                            let names: Vec<String> = objs.iter().map(ObjectInstance::display_name).collect();
                            text.push_str(&format!("objects: {{{}}}\n", names.join(", ")));
                        }
                        text.push_str(&class.to_string());
                        emit(out, &text)?;
                    }
                    Ok(0)
                }
                (OperationResult::Present { .. }, None) => unreachable!("present results always have a node"),
            }
        }
        Command::Modify { file, modifier, target, out: out_file, no_dedup } => {
            let n = load(file)?.with_dedup(!no_dedup);
            let r = resolve(&n, target)?;
            let m = n.modifier(modifier).ok_or_else(|| usage(format!("unknown modifier `{modifier}`")))?;
            let kind = match r.kind {
                NodeKind::Class => modifiers::classify(m, Target::Class(n.class(&r.name).expect("resolved"))),
                NodeKind::Object => {
                    modifiers::classify(m, Target::Object(n.object(&r.name, r.clone_index).expect("resolved")))
                }
            };
            let (next, result) = n.apply_modifier(modifier, &r).map_err(usage)?;
            let kind = kind.map_err(usage)?;
            save_to(out_file, &next)?;
            let created = !n.contains(&result);
            let body = match result.kind {
                NodeKind::Class => next.class(&result.name).expect("placed").to_string(),
                NodeKind::Object => object_text(next.object(&result.name, result.clone_index).expect("placed")),
            };
            if cli.json {
                emit_json(
                    out,
                    &json!({
                        "modifier": modifier,
                        "target": node_json(&r),
                        "result": node_json(&result),
                        "new_node": created,
                        "kinds": kind.kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
                        "coverage": kind.coverage.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                        "members": kind.members,
                    }),
                )?;
            } else {
                let kinds: Vec<&str> = kind.kinds.iter().map(|k| k.name()).collect();
                emit(
                    out,
                    &format!(
                        "{modifier}: {r} -> {result}{}\nkind: {{{}}} (coverage {}/{})\n{body}",
                        if created { " (new)" } else { "" },
                        kinds.join(", "),
                        kind.coverage.len(),
                        kind.members
                    ),
                )?;
            }
            Ok(0)
        }
        Command::Infer { file, threshold, out: out_file } => {
            let n = load(file)?;
            let rels = n.infer_relations(*threshold).map_err(usage)?;
            if out_file.is_some() {
                save_to(out_file, &n.with_inferred(*threshold).map_err(usage)?)?;
            }
            if cli.json {
                emit_json(out, &Json::Array(rels.iter().map(relation_json).collect()))?;
            } else {
                let mut text = String::new();
                for r in &rels {
                    text.push_str(&format!("{} -[{}]-> {}\n", r.from, r.kind, r.to));
                }
                text.push_str(&format!("{} relations\n", rels.len()));
                emit(out, &text)?;
            }
            Ok(0)
        }
        Command::Query { file, threshold, pattern } => {
            let mut n = load(file)?;
            if let Some(t) = threshold {
                n = n.with_inferred(*t).map_err(usage)?;
            }
            let kind = |s: &str| RelationKind::parse(s).map_err(usage);
            let q = match pattern {
                Pattern::Neighbors { node, kind: k, direction } => Query::Neighbors {
                    node: resolve(&n, node)?,
                    kind: k.as_deref().map(kind).transpose()?,
                    direction: match direction {
                        Dir::Out => Direction::Out,
                        Dir::In => Direction::In,
                        Dir::Both => Direction::Both,
                    },
                },
                Pattern::Reachable { node, kind: k } => Query::Reachable { node: resolve(&n, node)?, kind: kind(k)? },
                Pattern::InstancesOf { class } => Query::InstancesOf(resolve(&n, class)?),
                Pattern::SubclassesOf { class } => Query::SubclassesOf(resolve(&n, class)?),
            };
            let found = n.query(&q).map_err(usage)?;
            if cli.json {
                emit_json(out, &Json::Array(found.iter().map(node_json).collect()))?;
            } else {
                let text: String = found.iter().map(|r| format!("{r}\n")).collect();
                emit(out, &text)?;
            }
            Ok(0)
        }
        Command::ExportDot { file, attempts, out: out_file } => {
            let mut n = load(file)?;
            let mut absent: Vec<AbsentAttempt> = Vec::new();
            for spec in attempts {
                let words: Vec<&str> = spec.split_whitespace().collect();
                let (op, operands) = words.split_first().ok_or_else(|| usage("empty --attempt"))?;
                let op: Exploiter = op.parse().map_err(usage)?;
                let refs = operands.iter().map(|o| resolve(&n, o)).collect::<Result<Vec<_>, _>>()?;
                let outcome = n.apply_exploiter(op, &refs, None).map_err(usage)?;
                absent.extend(outcome.absent);
                n = outcome.network;
            }
            let dot = io::export_dot(&n, &absent);
            match out_file {
                Some(p) => write_atomically(p, &dot)?,
                None => emit(out, &dot)?,
            }
            Ok(0)
        }
    }
}

fn show_network(n: &Network, as_json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    if as_json {
        return emit_json(
            out,
            &json!({
                "classes": n.classes().map(class_json).collect::<Vec<_>>(),
                "objects": n.objects().map(object_json).collect::<Vec<_>>(),
                "modifiers": n.modifiers().map(|m| m.to_string()).collect::<Vec<_>>(),
                "relations": n.relations().map(|r| relation_json(&r)).collect::<Vec<_>>(),
                "exploiters": n.exploiters().iter().map(|e| e.name()).collect::<Vec<_>>(),
            }),
        );
    }
    let mut text = String::new();
    let list = |items: Vec<String>| if items.is_empty() { "(none)".to_owned() } else { items.join(", ") };
    text.push_str(&format!("classes: {}\n", list(n.classes().map(|c| c.name().to_owned()).collect())));
    text.push_str(&format!("objects: {}\n", list(n.objects().map(ObjectInstance::display_name).collect())));
    text.push_str(&format!("exploiters: {}\n", list(n.exploiters().iter().map(|e| e.name().to_owned()).collect())));
    text.push_str("modifiers:\n");
    for m in n.modifiers() {
        text.push_str(&format!("  {m}\n"));
    }
    text.push_str("relations:\n");
    for r in n.relations() {
        text.push_str(&format!("  {r}\n"));
    }
    emit(out, &text)
}

fn object_text(o: &ObjectInstance) -> String {
    let mut text = format!("object {}\n", o.display_name());
    for m in o.members() {
        text.push_str(&format!("  {m}\n"));
    }
    text
}

fn members_json(h: &impl HasMembers) -> Json {
    json!({
        "properties": h.specification().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "methods": h.signature().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    })
}

fn class_json(c: &ClassDef) -> Json {
    json!({
        "name": c.name(),
        "core": c.core().map(members_json),
        "projections": c.projections().iter().map(|p| {
            let mut v = members_json(p);
            v["source"] = Json::from(p.source.clone());
            v
        }).collect::<Vec<_>>(),
    })
}

fn object_json(o: &ObjectInstance) -> Json {
    let mut v = members_json(o);
    v["name"] = Json::from(o.display_name());
    v
}

fn node_json(r: &NodeRef) -> Json {
    json!({ "kind": r.kind.name(), "name": r.display_name() })
}

fn relation_json(r: &Relation) -> Json {
    json!({
        "from": node_json(&r.from),
        "to": node_json(&r.to),
        "kind": r.kind.name(),
        "provenance": r.provenance.name(),
    })
}

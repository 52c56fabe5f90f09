//! `deepwide`: command-line front end.
//!
//! Exit codes: 0 success / positive verdict, 1 negative verdict, 2 error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deepwide::bits;
use deepwide::cfi::{cfi, cfi_pair};
use deepwide::decomp::{
    ct_to_td, pfc_to_td, td_to_ct, td_to_pfc, validate_ct, validate_pfc, validate_td,
    ConstructionTree, PebbleForestCover, TreeDecomposition,
};
use deepwide::enumerate::{enumerate_family, FamilyKind};
use deepwide::equiv::{
    bijective_pebble_game, gc_equivalent, hom_indistinguishable, separation_experiment,
    GcRefutation, GcVerdict, HomComparison,
};
use deepwide::game::{
    grid_cop_strategy, grid_lower_bound, grid_upper_bound, solve_on, verify_strategy, Board,
    CopStrategy, Outcome, Variant,
};
use deepwide::hom::{hom_count, hom_profile};
use deepwide::io::{graph_to_dot, parse_graph, write_graph};
use deepwide::logic::{
    evaluate, formula_from_ct, guarded_formula_from_ct, parse_formula, QgBuilder,
};
use deepwide::membership::{membership, Membership};
use deepwide::pretree::{
    audit_jsonl, drop_empty_bags, exact_ptd_to_td, exactify_with_audit, strategy_tree,
    td_to_exact_ptd, EdgeIndex,
};
use deepwide::quantum::{interpolate, QuantumGraph, Rational};
use deepwide::LabelledGraph;

#[derive(Parser)]
#[command(
    name = "deepwide",
    version,
    about = "Bounded width and depth decompositions, cop games and counting logic"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide g ∈ T^k_q, with a construction tree or a robber certificate.
    Membership(MembershipArgs),
    /// Emit a witness decomposition for g ∈ T^k_q.
    Decompose(DecomposeArgs),
    /// Convert between witness kinds.
    Convert(ConvertArgs),
    /// Solve a Cops-and-Robber game or verify a strategy.
    Game(GameArgs),
    /// Strategy tree, exactification and the resulting tree-decomposition.
    Monotonize(MonotonizeArgs),
    /// Count homomorphisms.
    Hom(HomArgs),
    /// Quantum graph operations.
    #[command(subcommand)]
    Qg(QgCmd),
    /// Evaluate formulas or build them from construction trees.
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// CFI graphs.
    Cfi(CfiArgs),
    /// Equivalence tests.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Bounds on grid games, optionally checking the explicit strategy.
    GridBounds(GridArgs),
    /// The separation experiment for (k, q).
    Separate(SeparateArgs),
}

#[derive(Args)]
struct MembershipArgs {
    /// Graph file, or a builtin such as path:7, cycle:6, grid:2x7.
    #[arg(long)]
    graph: String,
    #[arg(short)]
    k: usize,
    #[arg(short)]
    q: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Td,
    Ct,
    Pfc,
    Ptd,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    graph: String,
    #[arg(short)]
    k: usize,
    #[arg(short)]
    q: usize,
    #[arg(long, value_enum, default_value = "td")]
    kind: Kind,
    /// Emit DOT instead of JSON.
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long)]
    graph: String,
    /// Witness JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    from: Kind,
    #[arg(long, value_enum)]
    to: Kind,
    /// Label bound for a construction tree; defaults to the width plus one.
    #[arg(short)]
    k: Option<usize>,
    /// Elimination depth for a construction tree; defaults to the depth.
    #[arg(short)]
    q: Option<usize>,
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    cops: usize,
    #[arg(long)]
    rounds: usize,
    /// CR, monCR, eCR or moneCR.
    #[arg(long, default_value = "CR")]
    variant: Variant,
    /// Play on G° (a loop at every vertex).
    #[arg(long)]
    looped: bool,
    /// Verify this strategy file instead of solving.
    #[arg(long)]
    verify: Option<PathBuf>,
    /// Write Cop's strategy here when Cop wins.
    #[arg(long)]
    strategy_out: Option<PathBuf>,
}

#[derive(Args)]
struct MonotonizeArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    cops: usize,
    #[arg(long)]
    rounds: usize,
    /// Strategy for the edge game on G°; solved for when absent.
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Write the exactification steps as JSON lines.
    #[arg(long)]
    audit: Option<PathBuf>,
    /// Emit the exact pre-tree-decomposition as DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct HomArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    target: String,
    /// Per-vertex counts for a pattern with one label.
    #[arg(long)]
    profile: bool,
}

#[derive(Subcommand)]
enum QgCmd {
    /// Product of two quantum graphs.
    Product { a: PathBuf, b: PathBuf },
    /// Polynomial in q̂ that is 1 on --plus values and 0 on --minus values.
    Interpolate {
        qg: PathBuf,
        #[arg(long, value_delimiter = ',')]
        plus: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        minus: Vec<i64>,
    },
    /// Quantum graph whose hom value is the indicator of a formula on n-vertex graphs.
    FromFormula {
        formula: String,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        guarded: bool,
    },
    /// hom(q̂, target).
    Hom {
        qg: PathBuf,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Truth of a formula; free variable i reads the vertex labelled i.
    Eval {
        formula: String,
        #[arg(long)]
        graph: String,
    },
    /// Formula expressing "at least m homomorphisms" from the graph of a
    /// construction tree, read from --ct or built for --graph.
    FromCt {
        #[arg(long, conflicts_with = "graph")]
        ct: Option<PathBuf>,
        #[arg(long, requires_all = ["k", "q"])]
        graph: Option<String>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short)]
        q: Option<usize>,
        #[arg(short)]
        m: u128,
        #[arg(long)]
        guarded: bool,
    },
}

#[derive(Args)]
struct CfiArgs {
    #[arg(long)]
    graph: String,
    /// Twisted vertices; defaults to the pair (∅, {0}).
    #[arg(long, value_delimiter = ',')]
    twist: Option<Vec<usize>>,
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tkq,
    Guarded,
    TwTd,
}

#[derive(Subcommand)]
enum EquivCmd {
    /// Bijective k-pebble game with q rounds.
    Pebble {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        q: usize,
    },
    /// Hom counts over an enumerated family.
    Hom {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        q: usize,
        #[arg(long, value_enum, default_value = "tkq")]
        family: FamilyArg,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Guarded profiles with a vertex bijection.
    Gc {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Rows.
    #[arg(long)]
    h: usize,
    /// Columns.
    #[arg(long)]
    l: usize,
    /// Solve the game at the lower bound and verify the explicit strategy.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    q: usize,
}

struct Report {
    text: String,
    json: Value,
    positive: bool,
}

impl Report {
    fn new(positive: bool, text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            positive,
        }
    }
}

type Res<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn builtin(spec: &str) -> Option<LabelledGraph> {
    let (name, arg) = spec.split_once(':')?;
    let num = |s: &str| s.parse::<usize>().ok();
    Some(match name {
        "path" => LabelledGraph::path(num(arg)?),
        "cycle" => LabelledGraph::cycle(num(arg)?),
        "complete" => LabelledGraph::complete(num(arg)?),
        "empty" => LabelledGraph::empty(num(arg)?),
        "grid" => {
            let (h, l) = arg.split_once('x')?;
            LabelledGraph::grid(num(h)?, num(l)?)
        }
        _ => return None,
    })
}

fn load_graph(spec: &str) -> Res<LabelledGraph> {
    if !Path::new(spec).exists() {
        if let Some(g) = builtin(spec) {
            return Ok(g);
        }
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    parse_graph(&text).map_err(|e| format!("{spec}: {e}"))
}

fn load_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(out: &Option<PathBuf>, body: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(()),
    }
}

fn td_json(td: &TreeDecomposition) -> Value {
    json!({ "decomposition": td, "width": td.width(), "depth": td.depth() })
}

fn run_membership(a: &MembershipArgs) -> Res<Report> {
    let g = load_graph(&a.graph)?;
    Ok(match membership(&g, a.k, a.q).map_err(err)? {
        Membership::In { ct, td } => Report::new(
            true,
            format!(
                "in T^{}_{}: construction tree with {} labels and elimination depth {}; tree-decomposition of width {} and depth {}",
                a.k,
                a.q,
                ct.label_bound(),
                ct.elimination_depth(),
                td.width(),
                td.depth()
            ),
            json!({ "member": true, "k": a.k, "q": a.q, "construction_tree": ct, "tree_decomposition": td_json(&td) }),
        ),
        Membership::Out(cert) => Report::new(
            false,
            format!("not in T^{}_{}: Robber survives {} rounds against {} cops", a.k, a.q, cert.rounds(), a.k),
            json!({ "member": false, "k": a.k, "q": a.q }),
        ),
    })
}

enum Witness {
    Td(TreeDecomposition),
    Ct(ConstructionTree),
    Pfc(PebbleForestCover),
}

fn emit(
    g: &LabelledGraph,
    w: &Witness,
    kind: Kind,
    k: usize,
    q: usize,
    dot: bool,
) -> Res<(String, Value)> {
    let td = match w {
        Witness::Td(td) => td.clone(),
        Witness::Ct(ct) => ct_to_td(ct).map_err(err)?,
        Witness::Pfc(p) => pfc_to_td(g, p).map_err(err)?,
    };
    let ko = |td: &TreeDecomposition| (td.width() + 1).max(0) as usize;
    Ok(match kind {
        Kind::Td => {
            let td = if let Witness::Td(_) = w {
                td
            } else {
                drop_empty_bags(&td)
            };
            validate_td(g, &td).map_err(err)?;
            (if dot { td.to_dot() } else { String::new() }, td_json(&td))
        }
        Kind::Ct => {
            let ct = match w {
                Witness::Ct(ct) => ct.clone(),
                _ => td_to_ct(g, &td, k.max(ko(&td)), q.max(td.depth())).map_err(err)?,
            };
            validate_ct(&ct, Some(g)).map_err(err)?;
            let j = json!({ "construction_tree": ct, "labels": ct.label_bound(), "elimination_depth": ct.elimination_depth() });
            (if dot { ct.to_dot() } else { String::new() }, j)
        }
        Kind::Pfc => {
            let p = match w {
                Witness::Pfc(p) => p.clone(),
                _ => td_to_pfc(g, &td).map_err(err)?,
            };
            validate_pfc(g, &p).map_err(err)?;
            let caps: Vec<String> = (0..g.n())
                .map(|v| format!("{v} / pebble {}", p.pebble[v]))
                .collect();
            let j = json!({ "pebble_forest_cover": p, "pebbles": p.pebbles_used(), "depth": p.depth() });
            (
                if dot {
                    deepwide::io::tree_to_dot(&p.parent, &caps)
                } else {
                    String::new()
                },
                j,
            )
        }
        Kind::Ptd => {
            let ptd = td_to_exact_ptd(g, &td).map_err(err)?;
            let gl = g.with_loops().map_err(err)?;
            let ix = EdgeIndex::new(&gl).map_err(err)?;
            let j = json!({ "pre_tree_decomposition": ptd.to_json(&ix), "width": ptd.width(), "depth": ptd.depth() });
            (if dot { ptd.to_dot(&ix) } else { String::new() }, j)
        }
    })
}

fn run_decompose(a: &DecomposeArgs) -> Res<Report> {
    let g = load_graph(&a.graph)?.without_labels();
    match membership(&g, a.k, a.q).map_err(err)? {
        Membership::Out(_) => Ok(Report::new(
            false,
            format!("not in T^{}_{}", a.k, a.q),
            json!({ "member": false }),
        )),
        Membership::In { ct, td } => {
            let w = if let Kind::Ct = a.kind {
                Witness::Ct(ct)
            } else {
                Witness::Td(td)
            };
            let (dot, j) = emit(&g, &w, a.kind, a.k, a.q, a.dot)?;
            let body = if a.dot {
                dot
            } else {
                serde_json::to_string_pretty(&j).map_err(err)?
            };
            write_out(&a.out, &body)?;
            Ok(Report::new(
                true,
                if a.out.is_some() { String::new() } else { body },
                j,
            ))
        }
    }
}

fn run_convert(a: &ConvertArgs) -> Res<Report> {
    let g = load_graph(&a.graph)?.without_labels();
    let v = load_json(&a.input)?;
    // accept both the bare witness and the wrapped form written by `decompose`
    let pick = |key: &str| v.get(key).cloned().unwrap_or_else(|| v.clone());
    let w = match a.from {
        Kind::Td => Witness::Td(serde_json::from_value(pick("decomposition")).map_err(err)?),
        Kind::Ct => Witness::Ct(serde_json::from_value(pick("construction_tree")).map_err(err)?),
        Kind::Pfc => {
            Witness::Pfc(serde_json::from_value(pick("pebble_forest_cover")).map_err(err)?)
        }
        Kind::Ptd => {
            let gl = g.with_loops().map_err(err)?;
            let ix = EdgeIndex::new(&gl).map_err(err)?;
            let ptd = deepwide::pretree::PreTreeDecomposition::from_json(
                &ix,
                &pick("pre_tree_decomposition"),
            )
            .map_err(err)?;
            Witness::Td(exact_ptd_to_td(&gl, &ptd).map_err(err)?)
        }
    };
    match &w {
        Witness::Td(td) => validate_td(&g, td).map_err(err)?,
        Witness::Ct(ct) => validate_ct(ct, Some(&g)).map_err(err)?,
        Witness::Pfc(p) => validate_pfc(&g, p).map_err(err)?,
    }
    let (dot, j) = emit(&g, &w, a.to, a.k.unwrap_or(0), a.q.unwrap_or(0), a.dot)?;
    let body = if a.dot {
        dot
    } else {
        serde_json::to_string_pretty(&j).map_err(err)?
    };
    write_out(&a.out, &body)?;
    Ok(Report::new(
        true,
        if a.out.is_some() { String::new() } else { body },
        j,
    ))
}

fn run_game(a: &GameArgs) -> Res<Report> {
    let mut g = load_graph(&a.graph)?.without_labels();
    let board = if a.looped {
        Board::Looped
    } else {
        Board::Plain
    };
    if a.looped && !g.has_loops() {
        g = g.with_loops().map_err(err)?;
    }
    if let Some(p) = &a.verify {
        let sigma = CopStrategy::from_json(&g, &load_json(p)?).map_err(err)?;
        return Ok(
            match verify_strategy(&g, &sigma, a.cops, a.rounds, a.variant, board) {
                Ok(()) => Report::new(true, "strategy wins", json!({ "verified": true })),
                Err(e) => Report::new(
                    false,
                    format!("strategy fails: {e}"),
                    json!({ "verified": false, "reason": e.to_string() }),
                ),
            },
        );
    }
    Ok(
        match solve_on(&g, a.cops, a.rounds, a.variant, board).map_err(err)? {
            Outcome::CopWins(s) => {
                if let Some(p) = &a.strategy_out {
                    write_out(
                        &Some(p.clone()),
                        &serde_json::to_string_pretty(&s.to_json()).map_err(err)?,
                    )?;
                }
                Report::new(
                    true,
                    format!("Cop wins ({} positions in the strategy)", s.len()),
                    json!({ "winner": "Cop", "strategy": s.to_json() }),
                )
            }
            Outcome::RobberWins(mut cert) => {
                let start = cert.initial();
                Report::new(
                    false,
                    format!("Robber wins, starting in {:?}", bits::to_vec(start)),
                    json!({ "winner": "Robber", "start": bits::to_vec(start) }),
                )
            }
        },
    )
}

fn run_monotonize(a: &MonotonizeArgs) -> Res<Report> {
    let g = load_graph(&a.graph)?.without_labels();
    let gl = if g.has_loops() {
        g.clone()
    } else {
        g.with_loops().map_err(err)?
    };
    let sigma = match &a.strategy {
        Some(p) => CopStrategy::from_json(&gl, &load_json(p)?).map_err(err)?,
        None => match solve_on(&gl, a.cops, a.rounds, Variant::ECr, Board::Looped).map_err(err)? {
            Outcome::CopWins(s) => s,
            Outcome::RobberWins(_) => {
                return Ok(Report::new(
                    false,
                    "Robber wins; nothing to monotonize",
                    json!({ "winner": "Robber" }),
                ))
            }
        },
    };
    let st = strategy_tree(&gl, &sigma).map_err(err)?;
    let ix = EdgeIndex::new(&gl).map_err(err)?;
    let inexact = st.ptd.inexact_edges(&ix).len();
    let (exact, steps) = exactify_with_audit(&gl, &st.ptd).map_err(err)?;
    if let Some(p) = &a.audit {
        write_out(&Some(p.clone()), &audit_jsonl(&steps))?;
    }
    let td = drop_empty_bags(&exact_ptd_to_td(&gl, &exact).map_err(err)?);
    let j = json!({
        "strategy_tree": { "width": st.ptd.width(), "depth": st.ptd.depth(), "inexact_edges": inexact },
        "exact": exact.to_json(&ix),
        "exact_width": exact.width(),
        "exact_depth": exact.depth(),
        "tree_decomposition": td_json(&td),
    });
    let text = if a.dot {
        exact.to_dot(&ix)
    } else {
        format!(
            "strategy tree: width {}, depth {}, {} inexact edges\nexact: width {}, depth {}\ntree-decomposition: width {}, depth {}",
            st.ptd.width(),
            st.ptd.depth(),
            inexact,
            exact.width(),
            exact.depth(),
            td.width(),
            td.depth()
        )
    };
    Ok(Report::new(true, text, j))
}

fn run_hom(a: &HomArgs) -> Res<Report> {
    let f = load_graph(&a.pattern)?;
    let g = load_graph(&a.target)?;
    if a.profile {
        let p = hom_profile(&f, &g).map_err(err)?;
        let text = p.iter().map(u128::to_string).collect::<Vec<_>>().join(" ");
        let j = json!({ "profile": p.iter().map(u128::to_string).collect::<Vec<_>>() });
        return Ok(Report::new(true, text, j));
    }
    let c = hom_count(&f, &g).map_err(err)?;
    Ok(Report::new(
        true,
        c.to_string(),
        json!({ "hom": c.to_string() }),
    ))
}

fn load_qg(p: &Path) -> Res<QuantumGraph> {
    QuantumGraph::from_json(&load_json(p)?).map_err(err)
}

fn qg_report(q: &QuantumGraph) -> Report {
    let j = q.to_json();
    Report::new(
        true,
        serde_json::to_string_pretty(&j).unwrap_or_default(),
        json!({ "terms": j }),
    )
}

fn run_qg(c: &QgCmd) -> Res<Report> {
    Ok(match c {
        QgCmd::Product { a, b } => qg_report(&load_qg(a)?.product(&load_qg(b)?)),
        QgCmd::Interpolate { qg, plus, minus } => {
            let r = |xs: &[i64]| {
                xs.iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect::<Vec<_>>()
            };
            qg_report(&interpolate(&load_qg(qg)?, &r(plus), &r(minus)).map_err(err)?)
        }
        QgCmd::FromFormula {
            formula,
            n,
            guarded,
        } => {
            let f = parse_formula(formula).map_err(err)?;
            let mut b = QgBuilder::new(*n).map_err(err)?;
            let q = if *guarded {
                b.model_guarded(&f)
            } else {
                b.model(&f)
            }
            .map_err(err)?;
            qg_report(&q)
        }
        QgCmd::Hom { qg, target } => {
            let v = load_qg(qg)?.hom(&load_graph(target)?).map_err(err)?;
            Report::new(true, v.to_string(), json!({ "hom": v.to_string() }))
        }
    })
}

fn run_formula(c: &FormulaCmd) -> Res<Report> {
    match c {
        FormulaCmd::Eval { formula, graph } => {
            let f = parse_formula(formula).map_err(err)?;
            let b = evaluate(&load_graph(graph)?, &f).map_err(err)?;
            Ok(Report::new(b, b.to_string(), json!({ "holds": b })))
        }
        FormulaCmd::FromCt {
            ct,
            graph,
            k,
            q,
            m,
            guarded,
        } => {
            let tree: ConstructionTree = match (ct, graph) {
                (Some(p), _) => {
                    let v = load_json(p)?;
                    serde_json::from_value(v.get("construction_tree").cloned().unwrap_or(v))
                        .map_err(err)?
                }
                (None, Some(g)) => {
                    match membership(&load_graph(g)?, k.unwrap_or(0), q.unwrap_or(0))
                        .map_err(err)?
                    {
                        Membership::In { ct, .. } => ct,
                        Membership::Out(_) => return Err("graph is not in T^k_q".into()),
                    }
                }
                (None, None) => return Err("give --ct or --graph".into()),
            };
            let f = if *guarded {
                guarded_formula_from_ct(&tree, *m)
            } else {
                formula_from_ct(&tree, *m)
            }
            .map_err(err)?;
            let s = f.to_string();
            Ok(Report::new(
                true,
                s.clone(),
                json!({ "formula": s, "qr": deepwide::logic::qr(&f) }),
            ))
        }
    }
}

fn run_cfi(a: &CfiArgs) -> Res<Report> {
    let g = load_graph(&a.graph)?.without_labels();
    let show = |h: &LabelledGraph| {
        if a.dot {
            graph_to_dot(h)
        } else {
            write_graph(h)
        }
    };
    match &a.twist {
        Some(t) => {
            let c = cfi(&g, bits::from_iter(t.iter().copied())).map_err(err)?;
            let names: Vec<String> = c
                .vertices
                .iter()
                .map(|&(v, s)| format!("({v}, {:?})", bits::to_vec(s)))
                .collect();
            Ok(Report::new(
                true,
                show(&c.graph),
                json!({ "graph": c.graph, "vertices": names }),
            ))
        }
        None => {
            let (g0, g1) = cfi_pair(&g).map_err(err)?;
            Ok(Report::new(
                true,
                format!("{}\n{}", show(&g0), show(&g1)),
                json!({ "g0": g0, "g1": g1, "order": g0.n() }),
            ))
        }
    }
}

fn run_equiv(c: &EquivCmd) -> Res<Report> {
    match c {
        EquivCmd::Pebble { g, h, k, q } => {
            let d = bijective_pebble_game(&load_graph(g)?, &load_graph(h)?, *k, *q, &[]).map_err(err)?.duplicator_wins();
            let who = if d { "Duplicator" } else { "Spoiler" };
            Ok(Report::new(d, format!("{who} wins"), json!({ "winner": who, "k": k, "q": q })))
        }
        EquivCmd::Hom { g, h, k, q, family, max_n } => {
            let kind = match family {
                FamilyArg::Tkq => FamilyKind::Tkq,
                FamilyArg::Guarded => FamilyKind::Guarded,
                FamilyArg::TwTd => FamilyKind::TwTd,
            };
            let fam = enumerate_family(kind, *k, *q, *max_n).map_err(err)?;
            Ok(match hom_indistinguishable(&load_graph(g)?, &load_graph(h)?, &fam).map_err(err)? {
                HomComparison::IndistinguishableUpTo { max_n, checked } => Report::new(
                    true,
                    format!("indistinguishable by all {checked} members on at most {max_n} vertices"),
                    json!({ "indistinguishable": true, "max_n": max_n, "checked": checked }),
                ),
                HomComparison::Distinguished { witness, hom_g, hom_h } => Report::new(
                    false,
                    format!("distinguished: {hom_g} vs {hom_h} homomorphisms from\n{}", write_graph(&witness)),
                    json!({ "indistinguishable": false, "witness": witness, "hom_g": hom_g.to_string(), "hom_h": hom_h.to_string() }),
                ),
            })
        }
        EquivCmd::Gc { g, h, k, q, max_n } => {
            Ok(match gc_equivalent(&load_graph(g)?, &load_graph(h)?, *k, *q, *max_n).map_err(err)? {
                GcVerdict::EquivalentUpTo { max_n, members, bijection } => Report::new(
                    true,
                    format!("equivalent up to {max_n} vertices ({members} rooted members), bijection {bijection:?}"),
                    json!({ "equivalent_up_to": max_n, "members": members, "bijection": bijection }),
                ),
                GcVerdict::Refuted(r) => {
                    let (text, j) = match r {
                        GcRefutation::Sizes { g, h } => {
                            (format!("refuted: {g} vs {h} vertices"), json!({ "sizes": [g, h] }))
                        }
                        GcRefutation::Witness { f, profile_g, profile_h } => (
                            format!("refuted by profiles {profile_g:?} vs {profile_h:?} of\n{}", write_graph(&f)),
                            json!({ "witness": f, "profile_g": profile_g.iter().map(u128::to_string).collect::<Vec<_>>(),
                                    "profile_h": profile_h.iter().map(u128::to_string).collect::<Vec<_>>() }),
                        ),
                        GcRefutation::Profiles => {
                            ("refuted: joint profiles admit no bijection".to_string(), json!({ "profiles": true }))
                        }
                    };
                    Report::new(false, text, json!({ "refuted": j }))
                }
            })
        }
    }
}

fn run_grid(a: &GridArgs) -> Res<Report> {
    let (lo, hi) = (grid_lower_bound(a.h, a.l), grid_upper_bound(a.h, a.l));
    let mut j = json!({ "h": a.h, "l": a.l, "cops": a.h + 1, "robber_survives": lo, "cop_wins_within": hi });
    let mut text = format!(
        "grid {}x{} with {} cops: Robber survives {lo} rounds; Cop wins within {hi}",
        a.h,
        a.l,
        a.h + 1
    );
    let mut ok = true;
    if a.check {
        let g = LabelledGraph::grid(a.h, a.l);
        let robber = !solve_on(&g, a.h + 1, lo, Variant::Cr, Board::Plain)
            .map_err(err)?
            .cop_wins();
        let sigma = grid_cop_strategy(a.h, a.l).map_err(err)?;
        let verified = verify_strategy(&g, &sigma, a.h + 1, hi, Variant::Cr, Board::Plain);
        ok = robber && verified.is_ok();
        text.push_str(&format!(
            "\nsolver at {lo} rounds: {}\nexplicit strategy: {}",
            if robber { "Robber wins" } else { "Cop wins" },
            match &verified {
                Ok(()) => "verified".to_string(),
                Err(e) => e.to_string(),
            }
        ));
        j["robber_wins_at_lower_bound"] = json!(robber);
        j["strategy_verified"] = json!(verified.is_ok());
    }
    Ok(Report::new(ok, text, j))
}

fn run_separate(a: &SeparateArgs) -> Res<Report> {
    let r = separation_experiment(a.k, a.q).map_err(err)?;
    let Some(w) = r.witness else {
        return Ok(Report::new(
            true,
            format!(
                "no witness: T^{}_{} equals TW_{} ∩ TD_{}",
                a.k,
                a.q,
                a.k as isize - 1,
                a.q
            ),
            json!({ "k": a.k, "q": a.q, "witness": null }),
        ));
    };
    let dup = match w.duplicator_wins {
        Some(true) => "Duplicator wins",
        Some(false) => "Spoiler wins",
        None => "not played (CFI pair above the cap)",
    };
    let text = format!(
        "witness F ({} vertices, {} edges)\n  Robber wins CR^{}_{}(F): {}\n  tw(F) = {}, td(F) = {}\n  CFI pair: {} + {} vertices\n  bijective {}-pebble game, {} rounds: {}\n  hom(F, G0) = {}\n  hom(F, G1) = {}",
        w.graph.n(),
        w.graph.m(),
        a.k,
        a.q,
        w.robber_wins,
        w.treewidth,
        w.treedepth,
        w.cfi_order,
        w.cfi_order,
        a.k,
        a.q,
        dup,
        w.hom_g0,
        w.hom_g1
    );
    let complete = w.robber_wins
        && w.in_tw_td(a.k, a.q)
        && w.duplicator_wins != Some(false)
        && w.hom_g0 != w.hom_g1;
    let j = json!({
        "k": a.k, "q": a.q,
        "witness": w.graph,
        "robber_wins": w.robber_wins,
        "treewidth": w.treewidth,
        "treedepth": w.treedepth,
        "cfi_order": w.cfi_order,
        "duplicator_wins": w.duplicator_wins,
        "hom_g0": w.hom_g0.to_string(),
        "hom_g1": w.hom_g1.to_string(),
    });
    Ok(Report::new(complete, text, j))
}

fn run(cli: &Cli) -> Res<Report> {
    match &cli.cmd {
        Cmd::Membership(a) => run_membership(a),
        Cmd::Decompose(a) => run_decompose(a),
        Cmd::Convert(a) => run_convert(a),
        Cmd::Game(a) => run_game(a),
        Cmd::Monotonize(a) => run_monotonize(a),
        Cmd::Hom(a) => run_hom(a),
        Cmd::Qg(c) => run_qg(c),
        Cmd::Formula(c) => run_formula(c),
        Cmd::Cfi(a) => run_cfi(a),
        Cmd::Equiv(c) => run_equiv(c),
        Cmd::GridBounds(a) => run_grid(a),
        Cmd::Separate(a) => run_separate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&r.json).unwrap_or_default()
            } else {
                r.text
            };
            if !body.is_empty() {
                // a closed pipe (`| head`) is not an error
                let _ = writeln!(std::io::stdout().lock(), "{body}");
            }
            ExitCode::from(if r.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

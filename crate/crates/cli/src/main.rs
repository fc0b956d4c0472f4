mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nimh_core::audit::{audit_k_color, audit_two_color, is_reducible, kst_reducibility, AuditReport};
use nimh_core::constructions::{extremal_two_coloring, pentagon_three_coloring, permuted_overlay_coloring, DEFAULT_RETRY_CAP};
use nimh_core::{
    edge_from_index, f_exact, f_heuristic, nim_edges, BipartitePattern, EdgeColoring, Error, Result, SearchReport, TuranConfig,
    TuranRecord, TuranSolver,
};

use render::{render, Format};

#[derive(Parser, Debug)]
#[command(name = "nimh", version, about = "NIM edges, Turán numbers, constructions and decomposition audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Persistent Turán cache file.
    #[arg(long, global = true, env = "NIMH_CACHE")]
    cache: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug)]
struct Limits {
    /// Largest n solved exactly by enumeration for patterns with a cycle.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    cyclic_ceiling: Option<u64>,
    /// Largest n solved exactly by enumeration for forests.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    acyclic_ceiling: Option<u64>,
    /// Largest part size for exact one-sided bipartite numbers.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    star_ceiling: Option<u64>,
    /// Search node budget for exact Turán computations.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Turán number ex(n, H) with extremal witnesses in graph6.
    Ex {
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        pattern: PatternArg,
    },
    /// One-sided bipartite number ex*(m, n, H - w) for the reduced pattern.
    Exstar {
        #[arg(long, value_parser = vertex_count)]
        m: usize,
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        pattern: PatternArg,
        /// Put the Y side of H - w into the m-part instead.
        #[arg(long)]
        flip: bool,
    },
    /// Maximum number of NIM edges over k-colorings of K_n.
    F {
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=16))]
        k: u8,
        /// Exhaustive search (small n only).
        #[arg(long)]
        exact: bool,
        /// Move budget for the heuristic search.
        #[arg(long, default_value_t = 20_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// NIM edges of a coloring file.
    Nim {
        #[arg(long)]
        coloring: PathBuf,
        #[command(flatten)]
        pattern: PatternArg,
        /// List the NIM edges.
        #[arg(long)]
        list: bool,
    },
    /// Explicit colorings.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Star-decomposition audit of a 2-coloring.
    Audit2 {
        #[command(flatten)]
        audit: AuditArgs,
    },
    /// Star-decomposition audit of a k-coloring.
    Auditk {
        #[command(flatten)]
        audit: AuditArgs,
    },
    /// Reducibility verdict for a pattern or for K_{s,t}.
    Reduce {
        #[arg(long, required_unless_present = "kst", conflicts_with = "kst")]
        pattern: Option<String>,
        /// `s,t` with 1 <= s <= t.
        #[arg(long)]
        kst: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Construction {
    /// Red on an extremal H-free graph, blue elsewhere.
    Extremal {
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        pattern: PatternArg,
        #[command(flatten)]
        save: SaveArg,
    },
    /// k - 1 randomly relabeled extremal graphs, the rest in color k.
    Overlay {
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=16))]
        k: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRY_CAP)]
        retry_cap: usize,
        #[command(flatten)]
        save: SaveArg,
    },
    /// Blow-up of two complementary 5-cycles; green inside the parts.
    Pentagon {
        #[arg(long, value_parser = vertex_count)]
        n: usize,
        #[command(flatten)]
        save: SaveArg,
    },
}

#[derive(Args, Debug)]
struct PatternArg {
    /// Family name (c4, k3, k3,3, theta2,3) or a descriptor file.
    #[arg(long)]
    pattern: String,
}

#[derive(Args, Debug)]
struct SaveArg {
    /// Also write the coloring in coloring format to this file.
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[command(flatten)]
    pattern: PatternArg,
    /// Include S, the stars and the class members.
    #[arg(long)]
    dump: bool,
}

fn vertex_count(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n > nimh_core::graph::MAX_VERTICES {
        return Err(format!("at most {} vertices", nimh_core::graph::MAX_VERTICES));
    }
    Ok(n)
}

fn load_pattern(arg: &PatternArg) -> Result<BipartitePattern> {
    let path = Path::new(&arg.pattern);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        BipartitePattern::parse(&text)
    } else {
        BipartitePattern::parse(&arg.pattern)
    }
}

fn load_coloring(path: &Path) -> Result<EdgeColoring> {
    EdgeColoring::from_text(&std::fs::read_to_string(path)?)
}

fn solver(cli: &Cli) -> Result<TuranSolver> {
    let mut cfg = TuranConfig::default();
    let l = &cli.limits;
    if let Some(v) = l.cyclic_ceiling {
        cfg.cyclic_ceiling = v as usize;
    }
    if let Some(v) = l.acyclic_ceiling {
        cfg.acyclic_ceiling = v as usize;
    }
    if let Some(v) = l.star_ceiling {
        cfg.star_ceiling = v as usize;
    }
    if let Some(v) = l.node_budget {
        cfg.node_budget = v;
    }
    match &cli.cache {
        Some(path) => TuranSolver::with_cache_file(cfg, path),
        None => Ok(TuranSolver::new(cfg)),
    }
}

fn turan_report(r: &TuranRecord, pattern: &str) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "pattern": pattern,
        "fingerprint": r.fingerprint,
        "m": r.m,
        "n": r.n,
        "value": r.value,
        "exact": r.exact,
        "witnesses": r.witnesses.iter().map(|g| g.to_graph6()).collect::<Vec<_>>(),
        "witnesses_complete": r.witnesses_complete,
    })
}

fn coloring_report(c: &EdgeColoring, h: Option<&BipartitePattern>) -> Value {
    let mut v = json!({ "n": c.n(), "k": c.k(), "coloring": c.to_text() });
    if let Some(h) = h {
        let r = nim_edges(c, h);
        v["pattern"] = json!(h.name());
        v["nim_total"] = json!(r.total);
        v["nim_per_color"] = json!(r.per_color);
    }
    v
}

fn search_report(r: &SearchReport) -> Value {
    json!({
        "n": r.n,
        "k": r.k,
        "pattern": r.pattern,
        "best": r.best,
        "mode": r.mode,
        "stats": r.stats,
        "colorings": r.colorings.iter().map(|c| c.to_text()).collect::<Vec<_>>(),
    })
}

fn audit_report(r: &AuditReport, dump: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    if let Some(map) = v.as_object_mut() {
        if !dump {
            map.remove("decomposition");
        }
        if let Some(c) = &r.counterexample {
            map.insert("counterexample".into(), json!(c.to_text()));
        }
    }
    v
}

fn save(arg: &SaveArg, c: &EdgeColoring) -> Result<()> {
    if let Some(path) = &arg.save {
        std::fs::write(path, c.to_text())?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Ex { n, pattern } => {
            let h = load_pattern(pattern)?;
            let r = solver(cli)?.ex(*n, h.forbidden())?;
            Ok(turan_report(&r, h.name()))
        }
        Command::Exstar { m, n, pattern, flip } => {
            let h = load_pattern(pattern)?;
            let reduced = h.require_reduced()?;
            let oriented = if *flip { reduced.flipped() } else { reduced.clone() };
            let r = solver(cli)?.ex_star(*m, *n, &oriented)?;
            let mut v = turan_report(&r, h.name());
            v["flipped"] = json!(flip);
            Ok(v)
        }
        Command::F { n, pattern, k, exact, budget, seed } => {
            let h = load_pattern(pattern)?;
            let r = if *exact {
                f_exact(*n, &h, *k)?
            } else {
                f_heuristic(*n, &h, *k, *budget, *seed, &solver(cli)?)?
            };
            Ok(search_report(&r))
        }
        Command::Nim { coloring, pattern, list } => {
            let h = load_pattern(pattern)?;
            let c = load_coloring(coloring)?;
            let r = nim_edges(&c, &h);
            let mut v = json!({
                "n": c.n(),
                "k": c.k(),
                "pattern": h.name(),
                "nim_total": r.total,
                "nim_per_color": r.per_color,
            });
            if *list {
                let edges: Vec<Value> = r
                    .flags
                    .iter()
                    .enumerate()
                    .filter(|&(_, &f)| f)
                    .map(|(idx, _)| {
                        let (a, b) = edge_from_index(c.n(), idx);
                        json!({ "u": a, "v": b, "color": c.color_at(idx) })
                    })
                    .collect();
                v["nim_edges"] = json!(edges);
            }
            Ok(v)
        }
        Command::Construct { which } => match which {
            Construction::Extremal { n, pattern, save: s } => {
                let h = load_pattern(pattern)?;
                let c = extremal_two_coloring(*n, &h, &solver(cli)?)?;
                save(s, &c)?;
                let mut v = coloring_report(&c, Some(&h));
                v["construction"] = json!("extremal");
                Ok(v)
            }
            Construction::Overlay { n, pattern, k, seed, retry_cap, save: s } => {
                let h = load_pattern(pattern)?;
                let (c, cert) = permuted_overlay_coloring(*n, &h, *k, *seed, *retry_cap, &solver(cli)?)?;
                save(s, &c)?;
                let mut v = coloring_report(&c, Some(&h));
                v["construction"] = json!("overlay");
                v["seed"] = json!(seed);
                v["certificate"] = serde_json::to_value(&cert).expect("certificates serialize");
                Ok(v)
            }
            Construction::Pentagon { n, save: s } => {
                let c = pentagon_three_coloring(*n)?;
                save(s, &c)?;
                let k3 = BipartitePattern::parse("k3")?;
                let mut v = coloring_report(&c, Some(&k3));
                v["construction"] = json!("pentagon");
                Ok(v)
            }
        },
        Command::Audit2 { audit } => {
            let h = load_pattern(&audit.pattern)?;
            let c = load_coloring(&audit.coloring)?;
            Ok(audit_report(&audit_two_color(&c, &h, &solver(cli)?)?, audit.dump))
        }
        Command::Auditk { audit } => {
            let h = load_pattern(&audit.pattern)?;
            let c = load_coloring(&audit.coloring)?;
            Ok(audit_report(&audit_k_color(&c, &h, &solver(cli)?)?, audit.dump))
        }
        Command::Reduce { pattern, kst } => {
            if let Some(spec) = kst {
                let (s, t) = spec
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Error::InvalidInput(format!("--kst expects s,t, got {spec:?}")))?;
                let verdict = kst_reducibility(s, t)?;
                return Ok(json!({ "s": s, "t": t, "verdict": verdict, "reducible": verdict.is_reducible() }));
            }
            let h = load_pattern(&PatternArg {
                pattern: pattern.clone().expect("clap requires one of the two"),
            })?;
            let verdict = is_reducible(&h)?;
            let mut v = serde_json::to_value(&verdict).expect("verdicts serialize");
            v["pattern"] = json!(h.name());
            v["reducible"] = json!(verdict.is_reducible());
            Ok(v)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("reason=invalid-input");
            }
            return ExitCode::from(code);
        }
    };
    let outcome = run(&cli).and_then(|value| {
        let text = render(&value, cli.format);
        match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(Error::from),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("reason={}", e.reason_code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

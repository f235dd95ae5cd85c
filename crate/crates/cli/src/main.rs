//! `uso`: build, check, realize and benchmark Matoušek-type USOs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use uso_core::random_facet::{stats_to_csv, CSV_HEADER};
use uso_core::{
    build_matousek, extract_influence_graph, find_forbidden, global_sink, is_uso, realize,
    run_trials, Branching, Error, Family, InfluenceGraph, Orientation,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "uso", version, about = "Matoušek-type unique sink orientations")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file (directory for `realize`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Matoušek USO of an influence graph.
    Build {
        /// Graph JSON: a file path or inline `{...}`.
        input: Option<String>,
        /// Generate the graph from a family instead of reading it.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Report USO status, Matoušek type and realizability of an orientation.
    Check {
        /// Orientation JSON: a file path or inline `{...}`.
        input: String,
    },
    /// Emit a verified cyclic extension and exact P-LCP for a graph.
    Realize {
        input: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run Random Facet trials on a benchmark family.
    Bench {
        #[arg(long, default_value = "path")]
        family: String,
        /// Dimensions: `4`, `4..12` (inclusive) or `4,8,12`.
        #[arg(long, default_value = "4..12")]
        n: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
    /// Exhaustive small-n suites over all DAGs and branchings.
    Enumerate {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=5))]
        n: u64,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| fail(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| {
        // semantic errors from validation carry no position of their own
        let at = if e.line() == 0 || e.to_string().contains(" at line ") {
            String::new()
        } else {
            format!(" at line {} column {}", e.line(), e.column())
        };
        fail(format!("invalid {what} JSON: {e}{at}"))
    })
}

fn graph_input(input: Option<&str>, family: Option<&str>, n: Option<usize>) -> Result<InfluenceGraph, Failure> {
    match (input, family) {
        (Some(arg), None) => read_json(arg, "influence graph"),
        (None, Some(name)) => {
            let family: Family = name.parse()?;
            let n = n.ok_or_else(|| fail("--family needs --n"))?;
            Ok(family.graph(n)?)
        }
        (Some(_), Some(_)) => Err(fail("give either an input graph or --family, not both")),
        (None, None) => Err(fail("missing input graph (path, inline JSON, or --family with --n)")),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    fail(format!("format {format:?} is not supported by `{cmd}`").to_lowercase())
}

fn outmap_table(o: &Orientation) -> String {
    let mut s = String::new();
    for v in o.vertices() {
        let _ = writeln!(s, "{v} -> {}", o.outmap(v));
    }
    s
}

fn cmd_build(cli: &Cli, g: InfluenceGraph) -> CmdResult {
    if let Some(w) = find_forbidden(&g) {
        eprintln!("warning: not realizable ({w}); witness {}", w.to_json());
    }
    let o = build_matousek(&g);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => o.to_json(),
        Format::Dot => g.to_dot(),
        Format::Text => outmap_table(&o),
        f @ Format::Csv => return Err(unsupported("build", f)),
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_check(cli: &Cli, o: Orientation) -> CmdResult {
    let uso = is_uso(&o)?;
    let graph = if uso { extract_influence_graph(&o).ok() } else { None };
    let witness = graph.as_ref().and_then(find_forbidden);
    let sink = if uso { Some(global_sink(&o)?) } else { None };
    let yes = |b: bool| if b { "yes" } else { "no" };

    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut line = format!("USO: {}; Matoušek: {}", yes(uso), yes(graph.is_some()));
            if graph.is_some() {
                match &witness {
                    None => line.push_str("; realizable: yes"),
                    Some(w) => line.push_str(&format!("; realizable: no ({w})")),
                }
            }
            if let Some(g) = &graph {
                let _ = write!(line, "\ninfluence graph: {}", g.to_json());
            }
            if let Some(s) = sink {
                let _ = write!(line, "\nsink: {s}");
            }
            line
        }
        Format::Json => json!({
            "uso": uso,
            "matousek": graph.is_some(),
            "influence_graph": graph.as_ref().map(|g| serde_json::to_value(g).expect("graph serializes")),
            "realizable": graph.as_ref().map(|_| witness.is_none()),
            "witness": witness.as_ref().map(|w| serde_json::to_value(w).expect("witness serializes")),
            "sink": sink.map(|s| s.to_vec()),
        })
        .to_string(),
        Format::Dot => match &graph {
            Some(g) => g.to_dot(),
            None => return Err(fail("no influence graph: orientation is not of Matoušek type")),
        },
        f @ Format::Csv => return Err(unsupported("check", f)),
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_realize(cli: &Cli, g: InfluenceGraph) -> CmdResult {
    let r = match realize(&g) {
        Err(Error::NotRealizable(w)) => {
            println!("{}", w.to_json());
            return Err(Failure { code: 3, message: format!("not realizable: {w}") });
        }
        other => other?,
    };
    if !r.verify(&g)? {
        // nothing is written when the round trip disagrees
        return Err(fail("round-trip: MISMATCH between P-LCP orientation and Matoušek USO"));
    }
    if !matches!(cli.format.unwrap_or(Format::Json), Format::Json) {
        return Err(unsupported("realize", cli.format.expect("checked above")));
    }
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| fail(format!("cannot create {}: {e}", dir.display())))?;
            emit(Some(&dir.join("extension.json")), &r.extension.to_json())?;
            emit(Some(&dir.join("plcp.json")), &r.instance.to_json())?;
            println!("round-trip: exact match");
            println!("wrote {} and {}", dir.join("extension.json").display(), dir.join("plcp.json").display());
        }
        None => {
            eprintln!("round-trip: exact match");
            let both = json!({
                "extension": serde_json::to_value(&r.extension).expect("extension serializes"),
                "plcp": serde_json::to_value(&r.instance).expect("instance serializes"),
            });
            println!("{both}");
        }
    }
    Ok(())
}

fn parse_range(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || fail(format!("bad --n value {text:?}: use 4, 4..12 or 4,8,12"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let ns: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        (num(a)?..=num(b)?).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ns.is_empty() {
        return Err(bad());
    }
    Ok(ns)
}

fn cmd_bench(cli: &Cli, family: &str, n: &str, trials: u64) -> CmdResult {
    let family: Family = family.parse()?;
    let ns = parse_range(n)?;
    let stats = run_trials(family, &ns, trials, cli.seed)?;
    let wrong: u64 = stats.iter().map(|s| s.trials - s.correct).sum();
    if wrong > 0 {
        return Err(fail(format!("{wrong} trials returned a wrong sink")));
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => stats_to_csv(&stats),
        Format::Json => serde_json::to_string(&stats).expect("stats serialize"),
        Format::Text => {
            let mut s = format!("{}\n", CSV_HEADER.replace(',', "\t"));
            for t in &stats {
                let _ = writeln!(s, "{}\t{}\t{}\t{}\t{:.2}\t{:.2}\t{}\t{}", t.family, t.n, t.trials, t.seed, t.mean, t.stddev, t.min, t.max);
            }
            s
        }
        f @ Format::Dot => return Err(unsupported("bench", f)),
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_enumerate(cli: &Cli, max_n: usize) -> CmdResult {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let graphs = InfluenceGraph::enumerate_acyclic(n)?;
        let mut usos = 0;
        let mut realizable = 0;
        for g in &graphs {
            usos += usize::from(is_uso(&build_matousek(g))?);
            realizable += usize::from(find_forbidden(g).is_none());
        }
        let branchings = Branching::enumerate(n)?;
        let mut verified = 0;
        for b in &branchings {
            let g = b.transitive_closure();
            verified += usize::from(realize(&g)?.verify(&g)?);
        }
        rows.push(json!({
            "n": n,
            "dags": graphs.len(),
            "usos": usos,
            "realizable": realizable,
            "branchings": branchings.len(),
            "verified_realizations": verified,
        }));
    }
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => serde_json::Value::Array(rows).to_string(),
        Format::Csv | Format::Text => {
            let sep = if cli.format == Some(Format::Csv) { "," } else { "\t" };
            let cols = ["n", "dags", "usos", "realizable", "branchings", "verified_realizations"];
            let mut s = cols.join(sep) + "\n";
            for r in &rows {
                let cells: Vec<String> = cols.iter().map(|c| r[c].to_string()).collect();
                s += &(cells.join(sep) + "\n");
            }
            s
        }
        f @ Format::Dot => return Err(unsupported("enumerate", f)),
    };
    emit(cli.out.as_deref(), &text)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Build { input, family, n } => {
            let g = graph_input(input.as_deref(), family.as_deref(), *n)?;
            cmd_build(cli, g)
        }
        Command::Check { input } => cmd_check(cli, read_json(input, "orientation")?),
        Command::Realize { input, family, n } => {
            let g = graph_input(input.as_deref(), family.as_deref(), *n)?;
            cmd_realize(cli, g)
        }
        Command::Bench { family, n, trials } => cmd_bench(cli, family, n, *trials),
        Command::Enumerate { n } => cmd_enumerate(cli, *n as usize),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("uso {VERSION} seed={}", cli.seed);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_range;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4").ok(), Some(vec![4]));
        assert_eq!(parse_range("4..7").ok(), Some(vec![4, 5, 6, 7]));
        assert_eq!(parse_range("4..=5").ok(), Some(vec![4, 5]));
        assert_eq!(parse_range("4, 8,12").ok(), Some(vec![4, 8, 12]));
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("a").is_err());
    }
}

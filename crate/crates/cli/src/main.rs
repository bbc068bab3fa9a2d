//! `tripoem`: generate, resolve, validate, scaffold and export triple systems
//! and the poems built on them.
//!
//! Exit codes: 0 success, 1 a check failed (poem invalid, no resolution),
//! 2 usage, input or I/O error.

use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use tripoem_core::design::{
    construct_sts, find_resolution, find_resolvable_sts, ResolutionOutcome, SearchBudget,
    DEFAULT_NODE_LIMIT,
};
use tripoem_core::graph::{export_graph, to_decomposition, ExportFormat};
use tripoem_core::interchange::{default_labels, SystemDocument};
use tripoem_core::poem::{
    parse_poem, scaffold, validate_poem, KeywordMap, PoemRules, Variant, SCAFFOLD_ATTEMPTS,
};

#[derive(Parser)]
#[command(
    name = "tripoem",
    version,
    about = "Steiner triple systems and triple poems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Steiner triple system and print it as JSON.
    Generate {
        /// Number of points; inferred from --keywords when omitted.
        #[arg(long, short = 'u')]
        order: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated point labels.
        #[arg(long)]
        keywords: Option<String>,
        /// Also find a resolution and include its parallel classes.
        #[arg(long)]
        resolvable: bool,
        #[arg(long, short = 'o', default_value = "-")]
        output: String,
    },
    /// Partition a system's triples into parallel classes.
    Resolve {
        #[arg(default_value = "-")]
        input: String,
        /// Search node limit.
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        budget: u64,
        #[arg(long, short = 'o', default_value = "-")]
        output: String,
    },
    /// Check a .poem file.
    Validate {
        #[arg(default_value = "-")]
        input: String,
        /// Extra rules to enforce, e.g. chain_last_to_first.
        #[arg(long)]
        rules: Option<String>,
        /// JSON report (default when stdout is not a terminal).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Human-readable report (default on a terminal).
        #[arg(long)]
        text: bool,
    },
    /// Write a keyword-only .poem skeleton.
    Scaffold {
        /// Comma-separated keywords.
        #[arg(long)]
        keywords: String,
        #[arg(long, default_value = "relaxed")]
        variant: Variant,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        title: Option<String>,
        #[arg(long, short = 'o', default_value = "-")]
        output: String,
    },
    /// Render a system (JSON) or a poem's triples as a triangle decomposition.
    Export {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, short = 'f')]
        format: ExportFormat,
        #[arg(long, short = 'o', default_value = "-")]
        output: String,
    },
    /// Run the composition HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        /// Keep sessions here; in memory only when omitted.
        #[arg(long)]
        session_dir: Option<PathBuf>,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

fn split_keywords(list: &str) -> Vec<String> {
    list.split(',')
        .map(|w| w.trim().to_owned())
        .filter(|w| !w.is_empty())
        .collect()
}

fn generate(
    order: Option<u32>,
    seed: u64,
    keywords: Option<String>,
    resolvable: bool,
    output: &str,
) -> Result<ExitCode> {
    let labels = keywords.map(|k| split_keywords(&k));
    let u = match (order, &labels) {
        (Some(u), Some(l)) if l.len() != u as usize => {
            bail!("--order {u} but {} keywords given", l.len())
        }
        (Some(u), _) => u,
        (None, Some(l)) => l.len() as u32,
        (None, None) => bail!("give --order or --keywords"),
    };
    let labels = match labels {
        Some(l) => KeywordMap::new(&l)?.words().to_vec(),
        None => default_labels(u),
    };
    let doc = if resolvable {
        let (resolution, _) =
            find_resolvable_sts(u, seed, SCAFFOLD_ATTEMPTS, SearchBudget::default())?;
        SystemDocument::from_resolution(&resolution, &labels)
    } else {
        SystemDocument::from_system(&construct_sts(u, seed)?, &labels)
    };
    write_output(output, &doc.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn resolve(input: &str, budget: u64, output: &str) -> Result<ExitCode> {
    let loaded = SystemDocument::parse(&read_input(input)?)?;
    match find_resolution(&loaded.system, SearchBudget { node_limit: budget })? {
        ResolutionOutcome::Resolved(resolution) => {
            write_output(
                output,
                &SystemDocument::from_resolution(&resolution, &loaded.points).to_json(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        ResolutionOutcome::NotResolvable { nodes, reason } => {
            eprintln!("not resolvable: {reason} ({nodes} nodes searched)");
            Ok(ExitCode::from(1))
        }
    }
}

fn validate(input: &str, rules: Option<String>, json: bool, text: bool) -> Result<ExitCode> {
    let mut poem = parse_poem(&read_input(input)?).with_context(|| format!("parsing {input}"))?;
    if let Some(rules) = rules {
        let extra = PoemRules::parse_list(&rules).map_err(anyhow::Error::msg)?;
        poem.rules = poem.rules.union(extra);
    }
    let report = validate_poem(&poem);
    let as_json = json || (!text && !io::stdout().is_terminal());
    write_output(
        "-",
        &if as_json {
            report.to_json()
        } else {
            report.to_text()
        },
    )?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn scaffold_cmd(
    keywords: &str,
    variant: Variant,
    seed: u64,
    title: Option<String>,
    output: &str,
) -> Result<ExitCode> {
    let keywords = KeywordMap::new(&split_keywords(keywords))?;
    let mut poem = scaffold(&keywords, variant, seed)?;
    poem.title = title;
    write_output(output, &poem.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn export(input: &str, format: ExportFormat, output: &str) -> Result<ExitCode> {
    let text = read_input(input)?;
    let (system, labels) = if text.trim_start().starts_with('{') {
        let loaded = SystemDocument::parse(&text)?;
        (loaded.system, loaded.points)
    } else {
        let poem = parse_poem(&text).with_context(|| format!("parsing {input}"))?;
        let report = validate_poem(&poem);
        (
            report.derived_system().clone(),
            poem.keywords.words().to_vec(),
        )
    };
    let decomp = to_decomposition(&system, &labels)?;
    write_output(output, &export_graph(&decomp, format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn serve(listen: SocketAddr, session_dir: Option<PathBuf>) -> Result<ExitCode> {
    let runtime = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{listen}");
    runtime.block_on(tripoem_service::serve(listen, session_dir))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            order,
            seed,
            keywords,
            resolvable,
            output,
        } => generate(order, seed, keywords, resolvable, &output),
        Command::Resolve {
            input,
            budget,
            output,
        } => resolve(&input, budget, &output),
        Command::Validate {
            input,
            rules,
            json,
            text,
        } => validate(&input, rules, json, text),
        Command::Scaffold {
            keywords,
            variant,
            seed,
            title,
            output,
        } => scaffold_cmd(&keywords, variant, seed, title, &output),
        Command::Export {
            input,
            format,
            output,
        } => export(&input, format, &output),
        Command::Serve {
            listen,
            session_dir,
        } => serve(listen, session_dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use quivers::catalog::ReferenceCatalog;
use quivers::classify;
use quivers::format;
use quivers::mutclass::{self, Caps, EnumerateOptions};
use quivers::patterns;
use quivers::report::{self, Page};
use quivers::{Error, Quiver};

/// Quiver mutation, invariants, mutation classes and classification.
#[derive(Parser)]
#[command(name = "quivers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a mutation sequence and print the result.
    Mutate {
        /// Comma-separated 1-based vertices, applied left to right.
        #[arg(short = 'k', value_delimiter = ',', required = true, value_parser = parse_vertex)]
        sequence: Vec<usize>,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Print ranks, coranks and radical dimensions.
    Invariants {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// List double edges, induced cycles, basic subquivers and any
    /// certificate of infinite mutation type.
    Patterns {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the mutation class up to relabeling.
    Class {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100_000)]
        max_size: usize,
        #[arg(long, default_value_t = 3)]
        weight_abort: u64,
        /// Write the class as JSON lines into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Worker threads for parallel enumeration.
        #[arg(long)]
        threads: Option<usize>,
        /// Include members from this position (with --limit).
        #[arg(long, default_value_t = 0)]
        offset: usize,
        /// Include this many members in --json output.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Decide surface type or exceptional type.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Cache directory for reference classes.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Reference catalog maintenance.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Enumerate and cache every reference class.
    Build {
        #[arg(long)]
        dir: PathBuf,
        /// Further seeds to cache, such as A5 or D6.
        #[arg(long, value_delimiter = ',')]
        extra: Vec<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Quiver file in the text or JSON format; `-` reads stdin.
    file: Option<PathBuf>,
    /// Quiver given on the command line.
    #[arg(long)]
    inline: Option<String>,
}

impl Input {
    fn read(&self) -> Result<Quiver, Error> {
        let text = match (&self.file, &self.inline) {
            (_, Some(text)) => text.clone(),
            (Some(path), None) if path.as_os_str() == "-" => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            }
            (Some(path), None) => fs::read_to_string(path)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
            (None, None) => unreachable!("clap requires one input"),
        };
        format::parse_any(&text)
    }

    fn stem(&self) -> String {
        self.file
            .as_deref()
            .and_then(Path::file_stem)
            .and_then(|s| s.to_str())
            .filter(|s| *s != "-")
            .unwrap_or("class")
            .to_owned()
    }
}

fn parse_vertex(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("vertices are numbered from 1".into()),
        Ok(k) => Ok(k),
        Err(e) => Err(e.to_string()),
    }
}

fn to_zero_based(sequence: &[usize], n: usize) -> Result<Vec<usize>, Error> {
    sequence
        .iter()
        .map(|&k| {
            if k > n {
                Err(Error::VertexOutOfRange { vertex: k - 1, n })
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

fn set(vertices: &[usize]) -> String {
    let parts: Vec<String> = vertices.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn invariants_text(q: &Quiver) -> Result<String, Error> {
    let r = report::analyze(q)?;
    let mut out = String::new();
    writeln!(out, "n: {}", r.n).unwrap();
    writeln!(out, "connected: {}", r.connected).unwrap();
    writeln!(out, "max_weight: {}", r.max_weight).unwrap();
    writeln!(out, "rank_Z: {}", r.rank_z).unwrap();
    writeln!(out, "corank_Z: {}", r.corank_z).unwrap();
    writeln!(out, "corank_GF2: {}", r.corank_gf2).unwrap();
    writeln!(out, "dim_V00: {}", r.dim_v00).unwrap();
    writeln!(out, "quotient_dim: {}", r.quotient_dim).unwrap();
    Ok(out)
}

fn patterns_text(q: &Quiver) -> Result<String, Error> {
    let mut out = String::new();
    let doubles = patterns::double_edges(q);
    if doubles.is_empty() {
        writeln!(out, "double edges: none").unwrap();
    }
    for d in doubles {
        writeln!(out, "double edge {}", set(&d.vertices)).unwrap();
    }
    for c in patterns::cycles(q)? {
        let path: Vec<String> = c.order.iter().map(|v| (v + 1).to_string()).collect();
        let kind = if c.oriented { "oriented" } else { "non-oriented" };
        writeln!(out, "cycle {} ({kind})", path.join(" ")).unwrap();
    }
    for b in patterns::basic_subquivers(q)? {
        writeln!(out, "{} {}", b.kind, set(&b.vertices)).unwrap();
    }
    match patterns::infinite_certificate(q)? {
        Some(c) => {
            let sets: Vec<String> = c.witness.iter().map(|w| set(w)).collect();
            writeln!(out, "infinite: {:?} on {}: {}", c.clause, sets.join(" "), c.detail).unwrap();
        }
        None => writeln!(out, "infinite: no certificate").unwrap(),
    }
    Ok(out)
}

fn open_catalog(dir: Option<&Path>) -> Result<ReferenceCatalog, Error> {
    match dir {
        Some(d) => ReferenceCatalog::with_cache_dir(d),
        None => Ok(ReferenceCatalog::new()),
    }
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Mutate {
            sequence,
            input,
            json,
        } => {
            let q = input.read()?;
            let ks = to_zero_based(&sequence, q.n())?;
            let out = q.mutate_sequence(&ks)?;
            Ok(if json {
                format::to_json(&out) + "\n"
            } else {
                format::to_text(&out)
            })
        }
        Command::Invariants { input, json } => {
            let q = input.read()?;
            if json {
                Ok(report::to_json(&report::analyze(&q)?) + "\n")
            } else {
                invariants_text(&q)
            }
        }
        Command::Patterns { input, json } => {
            let q = input.read()?;
            if json {
                Ok(report::to_json(&report::analyze(&q)?) + "\n")
            } else {
                patterns_text(&q)
            }
        }
        Command::Class {
            input,
            max_size,
            weight_abort,
            dump,
            threads,
            offset,
            limit,
            json,
        } => {
            let q = input.read()?;
            let caps = Caps {
                max_size,
                weight_abort,
            };
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .map_err(|e| Error::InvalidCaps(e.to_string()))?;
            }
            if let Some(dir) = dump {
                let class = mutclass::enumerate_class_with(
                    &q,
                    &EnumerateOptions {
                        caps,
                        parallel: threads.is_some(),
                        ..EnumerateOptions::default()
                    },
                )?;
                fs::create_dir_all(&dir)?;
                let path = dir.join(format!("{}.class.jsonl", input.stem()));
                let file = io::BufWriter::new(fs::File::create(&path)?);
                mutclass::write_dump(&class, None, None, file)?;
            }
            let page = limit.map(|limit| Page { offset, limit });
            let r = report::class(&q, caps, page)?;
            if json {
                Ok(report::to_json(&r) + "\n")
            } else {
                let mut out = format!("size: {}\nstatus: {:?}\n", r.size, r.status);
                if !r.connected {
                    out.push_str("note: quiver is disconnected\n");
                }
                if let Some(w) = &r.witness {
                    writeln!(out, "witness: {}", report::to_json(w)).unwrap();
                }
                Ok(out)
            }
        }
        Command::Classify {
            input,
            catalog,
            json,
        } => {
            let q = input.read()?;
            let cat = open_catalog(catalog.as_deref())?;
            let c = classify::classify_quiver(&q, &cat)?;
            if json {
                Ok(report::to_json(&c) + "\n")
            } else {
                let mut out = format!("{}\n", c.verdict);
                for e in &c.evidence {
                    writeln!(out, "  {}", report::to_json(e)).unwrap();
                }
                Ok(out)
            }
        }
        Command::Catalog {
            action: CatalogAction::Build { dir, extra },
        } => {
            let cat = ReferenceCatalog::with_cache_dir(&dir)?;
            let extra: Vec<&str> = extra.iter().map(String::as_str).collect();
            let mut out = String::new();
            for (name, size) in cat.build(&extra)? {
                writeln!(out, "{name} {size}").unwrap();
            }
            Ok(out)
        }
        Command::Serve {
            port,
            host,
            catalog,
        } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("bad address {host}:{port}: {e}"),
                })?;
            let cat = Arc::new(open_catalog(catalog.as_deref())?);
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?;
            eprintln!("listening on http://{addr}/api/v1");
            runtime.block_on(quivers_service::serve(addr, cat))?;
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

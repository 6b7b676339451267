use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand};
use hybridls_core::syntax::LineIndex;
use hybridls_core::view::{list_views, reach_tree, render, ViewId, DEFAULT_REACH_DEPTH};
use hybridls_core::{format, layout, parse, validate, Diagnostic, Hub, LayoutConfig, Model};
use log::{error, info};

use hybridls::server;
use hybridls::shared::Shared;
use hybridls::svg::render_svg;

#[derive(Parser)]
#[command(name = "hybridls", version, about = "Hybrid text/graph language server for RT-lite models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate files, printing one line per diagnostic.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print files in canonical form.
    Fmt {
        /// Rewrite files in place.
        #[arg(long, conflicts_with = "check")]
        write: bool,
        /// Exit with status 3 when a file is not canonical.
        #[arg(long)]
        check: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Lay out one view and write it as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        view: String,
        #[arg(long)]
        out: PathBuf,
        /// Unfolding depth for reachability trees.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// List the views a model offers.
    Views { file: PathBuf },
    /// Run the language server.
    Serve {
        /// Speak the textual protocol on stdin/stdout.
        #[arg(long, conflicts_with = "text_port")]
        stdio: bool,
        #[arg(long, default_value_t = 7071)]
        text_port: u16,
        #[arg(long, default_value_t = 7072)]
        graph_port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory of static web client files served on the graph port.
        #[arg(long)]
        client_dir: Option<PathBuf>,
    },
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const ENV: u8 = 2;
const NOT_CANONICAL: u8 = 3;

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ENV
    })
}

fn print_diagnostics(path: &Path, text: &str, diags: &[Diagnostic]) {
    let index = LineIndex::new(text);
    for d in diags {
        let (line, col) = index.line_col(d.span.start);
        println!("{}:{line}:{col}: {} {}", path.display(), d.code.as_str(), d.message);
    }
}

/// Parses `path`, printing diagnostics when it does not parse.
fn load(path: &Path) -> Result<Model, u8> {
    let text = read(path)?;
    let parsed = parse(&text);
    match parsed.model {
        Some(m) => Ok(m),
        None => {
            print_diagnostics(path, &text, &parsed.diagnostics);
            Err(FAILED)
        }
    }
}

fn check(files: &[PathBuf]) -> u8 {
    let mut status = OK;
    for path in files {
        let text = match read(path) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let parsed = parse(&text);
        let mut diags = parsed.diagnostics;
        if let Some(model) = &parsed.model {
            diags.extend(validate(model, parsed.spans.as_ref()));
        }
        print_diagnostics(path, &text, &diags);
        if diags.iter().any(Diagnostic::is_error) {
            status = FAILED;
        }
    }
    status
}

fn fmt(files: &[PathBuf], write: bool, check: bool) -> u8 {
    let mut status = OK;
    for path in files {
        let text = match read(path) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let canonical = match format(&text) {
            Ok(c) => c,
            Err(diags) => {
                print_diagnostics(path, &text, &diags);
                return FAILED;
            }
        };
        if check {
            if canonical != text {
                println!("{}", path.display());
                status = NOT_CANONICAL;
            }
        } else if write {
            if canonical != text {
                if let Err(e) = std::fs::write(path, canonical) {
                    eprintln!("{}: {e}", path.display());
                    return ENV;
                }
            }
        } else {
            print!("{canonical}");
        }
    }
    status
}

fn render_cmd(file: &Path, view: &str, out: &Path, depth: Option<usize>) -> u8 {
    let model = match load(file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let print_views = || {
        eprintln!("available views:");
        for v in list_views(&model) {
            eprintln!("  {}", v.view_id);
        }
    };
    let Ok(view) = view.parse::<ViewId>() else {
        eprintln!("unknown view {view:?}");
        print_views();
        return FAILED;
    };
    let graph = match &view {
        ViewId::ReachTree(q) => reach_tree(&model, q, depth.unwrap_or(DEFAULT_REACH_DEPTH)),
        _ => render(&model, &view),
    };
    let graph = match graph {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            print_views();
            return FAILED;
        }
    };
    let svg = render_svg(&layout(&graph, &LayoutConfig::default()));
    match std::fs::write(out, svg) {
        Ok(()) => OK,
        Err(e) => {
            eprintln!("{}: {e}", out.display());
            ENV
        }
    }
}

fn views(file: &Path) -> u8 {
    match load(file) {
        Ok(model) => {
            for v in list_views(&model) {
                println!("{}", v.view_id);
            }
            OK
        }
        Err(code) => code,
    }
}

fn bind(host: &str, port: u16) -> Result<TcpListener, u8> {
    TcpListener::bind((host, port)).map_err(|e| {
        error!("cannot bind {host}:{port}: {e}");
        ENV
    })
}

fn serve(stdio: bool, text_port: u16, graph_port: u16, host: &str, client_dir: Option<PathBuf>) -> u8 {
    if let Some(dir) = &client_dir {
        if !dir.is_dir() {
            error!("client directory {} does not exist", dir.display());
            return ENV;
        }
    }
    let shared = Shared::new(Hub::new(LayoutConfig::default()));
    let graph = match bind(host, graph_port) {
        Ok(l) => l,
        Err(code) => return code,
    };
    info!("graphical endpoint on ws://{}", graph.local_addr().map(|a| a.to_string()).unwrap_or_default());
    if stdio {
        let s = shared.clone();
        thread::spawn(move || server::serve_http(s, graph, client_dir));
        info!("textual endpoint on stdio");
        server::serve_lsp_stream(shared, std::io::stdin(), std::io::stdout());
        return OK;
    }
    let text = match bind(host, text_port) {
        Ok(l) => l,
        Err(code) => return code,
    };
    info!("textual endpoint on {}", text.local_addr().map(|a| a.to_string()).unwrap_or_default());
    let s = shared.clone();
    thread::spawn(move || server::serve_lsp_tcp(s, text));
    server::serve_http(shared, graph, client_dir);
    OK
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HYBRIDLS_LOG", "info")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { files } => check(&files),
        Command::Fmt { write, check, files } => fmt(&files, write, check),
        Command::Render { file, view, out, depth } => render_cmd(&file, &view, &out, depth),
        Command::Views { file } => views(&file),
        Command::Serve { stdio, text_port, graph_port, host, client_dir } => {
            serve(stdio, text_port, graph_port, &host, client_dir)
        }
    };
    ExitCode::from(code)
}

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use gcorners_cli::{parse, run, CliError, Command, Document, Located, Options};

/// Exact computations on monoids, local models and map germs of manifolds
/// with generalized corners.
#[derive(Debug, Parser)]
#[command(name = "gcorners", version)]
struct Args {
    /// One of: monoid-check, monoid-dual, monoid-faces, monoid-fibre,
    /// monoid-pushout, model-corners, model-boundary, model-is-corners,
    /// germ-classify, trans-check, trans-fibre, trans-corner-formula,
    /// corpus-verify
    command: Command,

    /// Input document; stdin when absent or "-"
    input: Option<PathBuf>,

    /// Word-problem bound for presented monoids
    #[arg(long, default_value_t = gcorners_cli::run::DEFAULT_BOUND)]
    bound: usize,

    /// Corner codimension, or boundary depth for model-boundary
    #[arg(long, alias = "depth")]
    codim: Option<usize>,

    /// Only process the block (or corpus entry) with this name
    #[arg(long)]
    name: Option<String>,

    /// Indentation of the JSON report; 0 prints it on one line
    #[arg(long, default_value_t = 2)]
    json_indent: usize,

    /// Suppress the report and timing; only the exit status is meaningful
    #[arg(long)]
    quiet: bool,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    let res = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map(|t| text = t),
        _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
    };
    res.map_err(|e| {
        let src = path.map(|p| p.display().to_string()).unwrap_or_else(|| "-".into());
        CliError::Input(vec![Located::new("", &format!("cannot read {src}: {e}"))])
    })?;
    Ok(text)
}

fn render(v: &serde_json::Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("values serialize");
    String::from_utf8(out).expect("json is utf-8")
}

fn execute(args: &Args) -> Result<serde_json::Value, CliError> {
    let opts = Options { bound: args.bound, codim: args.codim, name: args.name.clone() };
    let doc = if args.command == Command::CorpusVerify {
        Document::default()
    } else {
        parse(&read_input(args.input.as_ref())?)?
    };
    run(args.command, &doc, &opts)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let start = Instant::now();
    let result = execute(&args);
    let code = match result {
        Ok(report) => {
            if !args.quiet {
                println!("{}", render(&report, args.json_indent));
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if !args.quiet {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(code as u8)
}

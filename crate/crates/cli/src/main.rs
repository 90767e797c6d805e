//! `fanic`: fan ingestion, barycentric subdivision, intersection cohomology
//! Betti tables, theorem checks and the built-in corpus.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fanic::cohomology::{with_jobs, Assembly};
use fanic::harness::{self, CheckOptions, Status};
use fanic::io::{read_fan, read_perversity, ConeMapDocument, DocumentError, FanDocument, FORMAT};
use fanic::{corpus, Error, Fan, GemObject};

#[derive(Parser)]
#[command(name = "fanic", version, about = "Exact combinatorial intersection cohomology of rational polyhedral fans")]
struct Cli {
    /// Worker threads for rank computations (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, f-vector, completeness and simpliciality of a fan.
    Info { fan: PathBuf },
    /// Betti table of Γ(ic_p) for a perversity.
    Betti {
        fan: PathBuf,
        /// `top`, `middle`, `bottom`, or a perversity document (path).
        #[arg(long, default_value = "middle")]
        perversity: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Runs one named check, or all of them; reports are JSON lines.
    Check {
        fan: PathBuf,
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Restrict per-ray checks to this ray index.
        #[arg(long)]
        ray: Option<usize>,
    },
    /// Lists the registered checks.
    Checks,
    /// Writes the barycentric subdivision and its cone map.
    Subdivide {
        fan: PathBuf,
        #[arg(long, required = true)]
        barycentric: bool,
        /// Output fan document.
        #[arg(short, long)]
        output: PathBuf,
        /// Output cone-map document (default: `<output stem>.map.json`).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Cohomology of one grading slice of Γ(ic_t) of a boundary fan F(π)∖{π}.
    Gslice {
        fan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        ell: i32,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// The built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Names of the corpus fans.
    List,
    /// Writes one fan document per corpus fan into a directory.
    Export { dir: PathBuf },
    /// Prints one corpus fan document.
    Show { name: String },
}

/// An error with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: 2, error: e.into() }
    }
    fn semantic(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: 3, error: e.into() }
    }
    fn io(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: 4, error: e.into() }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Failure {
        if e.is_parse() {
            Failure::usage(e)
        } else {
            Failure::semantic(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnknownCheck(_) => Failure::usage(e),
            _ => Failure::semantic(e),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::io)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(Failure::io)
}

fn load_fan(path: &Path) -> Result<Arc<Fan>, Failure> {
    let text = read_text(path)?;
    let fan = read_fan(&text).map_err(|e| {
        let code = if e.is_parse() { 2 } else { 3 };
        Failure { code, error: anyhow!(e).context(format!("in {}", path.display())) }
    })?;
    Ok(Arc::new(fan))
}

/// `f_0..f_r` without trailing zeros (at least `f_0`).
fn f_vector_text(fan: &Fan) -> String {
    let mut f = fan.f_vector();
    while f.len() > 1 && f.last() == Some(&0) {
        f.pop();
    }
    f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn info(path: &Path) -> Outcome {
    let fan = load_fan(path)?;
    let complete = if fan.is_complete() { "complete" } else { "not complete" };
    let simplicial = if fan.is_simplicial() { "simplicial" } else { "not simplicial" };
    println!("rank {}, f = ({}), {complete}, {simplicial}", fan.rank, f_vector_text(&fan));
    Ok(0)
}

fn print_table(table: &fanic::BettiTable, format: Format) {
    match format {
        Format::Tsv => print!("{}", table.to_tsv()),
        Format::Json => {
            let mut v = table.to_json();
            v["format"] = serde_json::Value::from(FORMAT);
            println!("{v}");
        }
    }
}

fn betti(path: &Path, perversity: &str, format: Format) -> Outcome {
    let fan = load_fan(path)?;
    let source = if fanic::Perversity::by_name(&fan, perversity).is_some() {
        perversity.to_string()
    } else {
        read_text(Path::new(perversity))?
    };
    let p = read_perversity(&fan, &source)?;
    let (ic, _) = GemObject::ic(&fan, &p)?;
    let table = Assembly::gamma(&ic)?.betti()?;
    print_table(&table, format);
    Ok(0)
}

fn check(path: &Path, name: Option<&str>, all: bool, ray: Option<usize>, jobs: usize) -> Outcome {
    let fan = load_fan(path)?;
    let options = CheckOptions { ray, jobs: Some(jobs) };
    let names: Vec<String> = match (name, all) {
        (Some(n), false) => vec![n.to_string()],
        (None, true) => harness::names().into_iter().map(String::from).collect(),
        _ => return Err(Failure::usage(anyhow!("give a check name or --all"))),
    };
    let mut failed = false;
    for n in names {
        let report = harness::check(&n, &fan, &options)?;
        println!("{}", report.to_json_line());
        failed |= report.status == Status::Fail;
    }
    Ok(u8::from(failed))
}

fn subdivide(path: &Path, output: &Path, map: Option<&Path>) -> Outcome {
    let fan = load_fan(path)?;
    let sub = fan.barycentric_subdivision();
    let mut sigma = (*sub.source).clone();
    if let Some(n) = &fan.name {
        sigma = sigma.with_name(&format!("{n}-barycentric"));
    }
    write_text(output, &FanDocument::from_fan(&sigma).to_json())?;
    let map_path = match map {
        Some(m) => m.to_path_buf(),
        None => {
            let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "subdivision".into());
            output.with_file_name(format!("{stem}.map.json"))
        }
    };
    write_text(&map_path, &ConeMapDocument::from_subdivision(&sub).to_json())?;
    Ok(0)
}

fn gslice(path: &Path, ell: i32, format: Format) -> Outcome {
    let fan = load_fan(path)?;
    if fan.as_boundary_fan().is_none() {
        return Err(Error::NotABoundaryFan.into());
    }
    let q = ell - fan.rank as i32;
    let table = Assembly::gamma(&GemObject::ic_top_from_p(&fan))?.betti()?;
    let slice = fanic::BettiTable::from_pairs(table.entries.into_iter().filter(|&((_, qq), _)| qq == q));
    print_table(&slice, format);
    Ok(0)
}

fn corpus_cmd(action: &CorpusAction) -> Outcome {
    match action {
        CorpusAction::List => {
            for n in corpus::names() {
                println!("{n}");
            }
        }
        CorpusAction::Export { dir } => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(Failure::io)?;
            for fan in corpus::corpus() {
                let name = fan.name.clone().unwrap_or_default();
                write_text(&dir.join(format!("{name}.json")), &FanDocument::from_fan(&fan).to_json())?;
            }
        }
        CorpusAction::Show { name } => {
            let fan = corpus::by_name(name).ok_or_else(|| Failure::usage(anyhow!("no corpus fan named {name:?}")))?;
            println!("{}", FanDocument::from_fan(&fan).to_json());
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs;
    match &cli.command {
        Command::Info { fan } => info(fan),
        Command::Betti { fan, perversity, format } => with_jobs(jobs, || betti(fan, perversity, *format)),
        Command::Check { fan, name, all, ray } => check(fan, name.as_deref(), *all, *ray, jobs),
        Command::Checks => {
            for (n, d) in harness::REGISTRY {
                println!("{n}\t{d}");
            }
            Ok(0)
        }
        Command::Subdivide { fan, output, map, .. } => subdivide(fan, output, map.as_deref()),
        Command::Gslice { fan, ell, format } => with_jobs(jobs, || gslice(fan, *ell, *format)),
        Command::Corpus { action } => corpus_cmd(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

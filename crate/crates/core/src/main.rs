use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use readkb::pipeline::{ArticleStats, Outcome, DEFAULT_CLASS};
use readkb::skimmer::prescan_subclasses;
use readkb::{Knowledge, Result};

/// Read encyclopedia articles into a knowledge base and query it.
///
/// Configuration files are taken from the directory in READKB_CONFIG when
/// set, otherwise the built-in copies are used.
#[derive(Parser)]
#[command(name = "readkb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read articles and print per-article counts.
    Ingest {
        #[arg(long, default_value = "diet")]
        topic: String,
        #[arg(long = "article", required = true, num_args = 1..)]
        articles: Vec<PathBuf>,
        /// Knowledge base to extend (if it exists) and write back.
        #[arg(long)]
        kb: Option<PathBuf>,
        /// Also list every sentence with its outcome.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Answer one question.
    Ask {
        question: String,
        #[arg(long)]
        kb: Option<PathBuf>,
        /// Print the explanation steps after the answer.
        #[arg(long)]
        explain: bool,
    },
    /// Answer questions from standard input, one per line.
    Repl {
        #[arg(long)]
        kb: Option<PathBuf>,
    },
    /// Write the canonical dump of a knowledge base.
    Dump {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the structural invariants over a knowledge base.
    Check {
        #[arg(long)]
        kb: PathBuf,
    },
    /// Show the parse and interpretation of one sentence.
    Interpret {
        sentence: String,
        #[arg(long, default_value = DEFAULT_CLASS)]
        class: String,
        #[arg(long)]
        kb: Option<PathBuf>,
    },
}

fn knowledge(kb: Option<&Path>) -> Result<Knowledge> {
    let mut k = Knowledge::load()?;
    if let Some(p) = kb {
        k.load_kb(p)?;
    }
    Ok(k)
}

fn ingest(topic: &str, articles: &[PathBuf], kb: Option<&Path>, verbose: bool) -> Result<()> {
    let mut k = knowledge(kb.filter(|p| p.exists()))?;
    let mut total = ArticleStats {
        article: "total".into(),
        ..Default::default()
    };
    println!("{}", ArticleStats::header());
    for path in articles {
        let report = k.read_article_file(path, topic)?;
        println!("{}", report.stats);
        if verbose {
            for s in &report.sentences {
                let tag = match &s.outcome {
                    Outcome::NotSelected => "skip".to_string(),
                    Outcome::ParseFailed(e) => format!("parse-failed ({e})"),
                    Outcome::InterpretFailed(_, e) => format!("interpret-failed ({e})"),
                    Outcome::Integrated {
                        astructs, derived, ..
                    } => {
                        format!("ok {} derived {}", astructs.join(","), derived.join(","))
                    }
                };
                println!("  {tag}: {}", s.sentence);
            }
        }
        total.absorb(&report.stats);
    }
    if articles.len() > 1 {
        println!("{total}");
    }
    if let Some(p) = kb {
        k.save_kb(p)?;
    }
    Ok(())
}

fn repl(kb: Option<&Path>) -> Result<()> {
    let mut k = knowledge(kb)?;
    let mut explain = false;
    let stdin = std::io::stdin();
    let mut out = std::io::stdout();
    loop {
        print!("> ");
        let _ = out.flush();
        let mut line = String::new();
        if stdin.lock().read_line(&mut line).unwrap_or(0) == 0 {
            break;
        }
        match line.trim() {
            "" => continue,
            ":quit" | ":q" => break,
            ":explain on" => explain = true,
            ":explain off" => explain = false,
            q => {
                let a = k.ask(q);
                println!("{a}");
                if explain {
                    for s in &a.because {
                        println!("  | {s}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest {
            topic,
            articles,
            kb,
            verbose,
        } => ingest(&topic, &articles, kb.as_deref(), verbose)?,
        Command::Ask {
            question,
            kb,
            explain,
        } => {
            let mut k = knowledge(kb.as_deref())?;
            let a = k.ask(&question);
            println!("{a}");
            if explain {
                for s in &a.because {
                    println!("  | {s}");
                }
            }
        }
        Command::Repl { kb } => repl(kb.as_deref())?,
        Command::Dump { kb, out } => {
            let k = knowledge(Some(&kb))?;
            match out {
                Some(p) => k.save_kb(&p)?,
                None => print!("{}", k.ontology.dump()),
            }
        }
        Command::Check { kb } => {
            let k = knowledge(Some(&kb))?;
            let report = k.ontology.check();
            if !report.is_ok() {
                for v in report.violations() {
                    println!("{v}");
                }
                return Ok(ExitCode::FAILURE);
            }
            println!("ok");
        }
        Command::Interpret {
            sentence,
            class,
            kb,
        } => {
            let mut k = knowledge(kb.as_deref())?;
            prescan_subclasses(
                std::slice::from_ref(&sentence),
                &class,
                &mut k.ontology,
                &mut k.lexicon,
            )?;
            let s = k.interpret(&sentence, &class)?;
            println!("{}", s.parse);
            for c in &s.clauses {
                match c {
                    Ok(c) => println!("{c}"),
                    Err(e) => println!("failed: {e}"),
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

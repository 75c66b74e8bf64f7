use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hdlang::encoder::{throughput_probe, DEFAULT_DIM, DEFAULT_N, DEFAULT_SEED};
use hdlang::eval::{accuracy_sweep, evaluate, render_sweep, report_header, sweep_csv};
use hdlang::format::{load_model, save_model};
use hdlang::{EncoderConfig, Error, LabeledCorpus, LanguageModel};

const THROUGHPUT_FLOOR: f64 = 100_000.0;

#[derive(Parser)]
#[command(
    name = "hdlang",
    version,
    about = "Language identification with random-indexing hypervectors"
)]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "HDLANG_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EncoderArgs {
    /// Block size (letters per n-gram)
    #[arg(long, env = "HDLANG_N", default_value_t = DEFAULT_N, value_parser = parse_n)]
    n: usize,

    /// Dimensionality, must be even
    #[arg(long, env = "HDLANG_DIM", default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
    dim: usize,

    #[arg(long, env = "HDLANG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl EncoderArgs {
    fn config(&self) -> EncoderConfig {
        EncoderConfig::new(self.n, self.dim, self.seed).expect("validated by the parser")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a labeled corpus
    Train {
        /// Directory of <lang>.txt files or a lang<TAB>text file
        #[arg(long, env = "HDLANG_CORPUS")]
        corpus: PathBuf,
        #[command(flatten)]
        encoder: EncoderArgs,
        #[arg(long, env = "HDLANG_MODEL")]
        model: PathBuf,
    },
    /// Identify the language of each input line
    Detect {
        #[arg(long, env = "HDLANG_MODEL")]
        model: PathBuf,
        #[arg(long, env = "HDLANG_TOP", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
        /// Input files; standard input when none are given
        inputs: Vec<PathBuf>,
    },
    /// Evaluate a model on a labeled test corpus
    Eval {
        #[arg(long, env = "HDLANG_MODEL")]
        model: PathBuf,
        #[arg(long, env = "HDLANG_TEST")]
        test: PathBuf,
        /// Directory for confusion.csv, confusion.txt and report.txt
        #[arg(long, env = "HDLANG_OUT")]
        out: PathBuf,
    },
    /// Train and evaluate one model per block size
    Sweep {
        #[arg(long, env = "HDLANG_TRAIN")]
        train: PathBuf,
        #[arg(long, env = "HDLANG_TEST")]
        test: PathBuf,
        #[arg(long, env = "HDLANG_N_LIST", value_delimiter = ',', default_value = "1,2,3,4,5", value_parser = parse_n)]
        n_list: Vec<usize>,
        #[arg(long, env = "HDLANG_DIM", default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
        dim: usize,
        #[arg(long, env = "HDLANG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the table as CSV here
        #[arg(long, env = "HDLANG_OUT")]
        out: Option<PathBuf>,
    },
    /// Export pairwise language-vector cosines as CSV
    Similarity {
        #[arg(long, env = "HDLANG_MODEL")]
        model: PathBuf,
        #[arg(long, env = "HDLANG_OUT")]
        out: PathBuf,
    },
    /// Rank the symbols most likely to follow a context
    Query {
        #[arg(long, env = "HDLANG_MODEL")]
        model: PathBuf,
        #[arg(long, env = "HDLANG_LANG")]
        lang: String,
        /// Exactly n-1 symbols; use a literal space for Space
        #[arg(long, env = "HDLANG_CONTEXT")]
        context: String,
        #[arg(long, env = "HDLANG_TOP", default_value_t = 10)]
        top: usize,
    },
    /// Measure streaming encoder throughput
    Bench {
        #[arg(long, env = "HDLANG_DIM", default_value_t = DEFAULT_DIM, value_parser = parse_dim)]
        dim: usize,
        #[arg(long, env = "HDLANG_N", default_value_t = DEFAULT_N, value_parser = parse_n)]
        n: usize,
        #[arg(long, env = "HDLANG_CHARS", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(100_000..))]
        chars: u64,
        #[arg(long, env = "HDLANG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Exit with status 1 below 100,000 chars/s
        #[arg(long = "assert")]
        assert_floor: bool,
    },
}

fn parse_dim(s: &str) -> Result<usize, String> {
    let d: usize = s.parse().map_err(|e| format!("{e}"))?;
    if d < 2 || !d.is_multiple_of(2) {
        return Err(format!(
            "dimensionality must be even and at least 2, got {d}"
        ));
    }
    Ok(d)
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("{e}"))?;
    if n == 0 || n > hdlang::encoder::MAX_N {
        return Err(format!(
            "block size must be in 1..={}, got {n}",
            hdlang::encoder::MAX_N
        ));
    }
    Ok(n)
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("hdlang: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hdlang: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Train {
            corpus,
            encoder,
            model,
        } => train(&corpus, &encoder, &model),
        Command::Detect { model, top, inputs } => detect(&model, top as usize, &inputs),
        Command::Eval { model, test, out } => eval(&model, &test, &out),
        Command::Sweep {
            train,
            test,
            n_list,
            dim,
            seed,
            out,
        } => sweep(&train, &test, &n_list, dim, seed, out.as_deref()),
        Command::Similarity { model, out } => similarity(&model, &out),
        Command::Query {
            model,
            lang,
            context,
            top,
        } => query(&model, &lang, &context, top),
        Command::Bench {
            dim,
            n,
            chars,
            seed,
            assert_floor,
        } => bench(dim, n, chars as usize, seed, assert_floor),
    }
}

fn train(corpus: &Path, args: &EncoderArgs, out: &Path) -> CliResult {
    let start = Instant::now();
    let corpus = LabeledCorpus::load(corpus)?;
    for bad in &corpus.malformed {
        eprintln!(
            "warning: {}:{}: {}",
            bad.path.display(),
            bad.line,
            bad.reason
        );
    }
    let (model, reports) = LanguageModel::build_with_report(corpus.by_language(), args.config())?;
    let elapsed = start.elapsed();
    save_model(&model, out)?;

    let cfg = model.config();
    println!("trained D={} n={} seed={}", cfg.dim, cfg.n, cfg.seed);
    for r in &reports {
        println!(
            "{}\t{} bytes\t{} samples\t{} skipped",
            r.name, r.byte_count, r.samples_used, r.samples_skipped
        );
    }
    println!(
        "{} languages in {:.2}s -> {}",
        reports.len(),
        elapsed.as_secs_f64(),
        out.display()
    );
    Ok(())
}

fn detect(model: &Path, top: usize, inputs: &[PathBuf]) -> CliResult {
    let model = load_model(model)?;
    let mut lines = Vec::new();
    if inputs.is_empty() {
        for line in io::stdin().lock().lines() {
            lines.push(line?);
        }
    } else {
        for path in inputs {
            let bytes = fs::read(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            lines.extend(String::from_utf8_lossy(&bytes).lines().map(str::to_string));
        }
    }
    let lines: Vec<String> = lines.into_iter().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err(CliError::Runtime("no input text".into()));
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut classified = 0usize;
    for (i, line) in lines.iter().enumerate() {
        match model.classify(line) {
            Ok(ranking) => {
                let fields: Vec<String> = ranking
                    .top(top)
                    .iter()
                    .map(|(name, score)| format!("{name}:{score:.6}"))
                    .collect();
                writeln!(out, "{}", fields.join("\t"))?;
                classified += 1;
            }
            Err(e @ Error::TextTooShort { .. }) => {
                eprintln!("warning: input {}: {e}", i + 1);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if classified == 0 {
        return Err(CliError::Runtime(
            "no input text could be classified".into(),
        ));
    }
    Ok(())
}

fn eval(model_path: &Path, test: &Path, out: &Path) -> CliResult {
    let model = load_model(model_path)?;
    let corpus = LabeledCorpus::load(test)?;
    let cm = evaluate(&model, &corpus)?;
    fs::create_dir_all(out)?;
    let mut report = report_header(&model, &corpus, &cm);
    report.push_str("\nper-language accuracy:\n");
    for (name, acc) in cm.per_language_accuracy() {
        match acc {
            Some(a) => report.push_str(&format!("  {name}: {:.2}%\n", a * 100.0)),
            None => report.push_str(&format!("  {name}: -\n")),
        }
    }
    report.push_str("\nconfusion matrix (rows: truth, columns: prediction):\n");
    report.push_str(&cm.render());
    fs::write(out.join("confusion.csv"), cm.to_csv())?;
    fs::write(out.join("confusion.txt"), cm.render())?;
    fs::write(out.join("report.txt"), &report)?;
    print!("{report}");
    Ok(())
}

fn sweep(
    train: &Path,
    test: &Path,
    ns: &[usize],
    dim: usize,
    seed: u64,
    out: Option<&Path>,
) -> CliResult {
    let train_corpus = LabeledCorpus::load(train)?;
    let test_corpus = LabeledCorpus::load(test)?;
    let base = EncoderConfig::new(ns[0], dim, seed)?;
    let start = Instant::now();
    let rows = accuracy_sweep(&train_corpus, &test_corpus, ns, &base)?;
    println!(
        "train: {} ({} samples)",
        train_corpus.describe(),
        train_corpus.len()
    );
    println!(
        "test:  {} ({} samples)",
        test_corpus.describe(),
        test_corpus.len()
    );
    let shared = test_corpus.shared_samples(&train_corpus);
    if shared > 0 {
        println!("warning: {shared} test samples also occur verbatim in training");
    }
    println!(
        "D={dim} seed={seed} ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
    print!("{}", render_sweep(&rows));
    if let Some(path) = out {
        fs::write(path, sweep_csv(&rows))?;
    }
    Ok(())
}

fn similarity(model: &Path, out: &Path) -> CliResult {
    let model = load_model(model)?;
    let matrix = model.similarity_matrix()?;
    fs::write(out, matrix.to_csv())?;
    print!("{}", matrix.render());
    Ok(())
}

fn query(model: &Path, lang: &str, context: &str, top: usize) -> CliResult {
    let model = load_model(model)?;
    let ranking = model.query_next_symbol(lang, context)?;
    for (symbol, score) in ranking.top(top) {
        let shown = if symbol == " " { "<space>" } else { symbol };
        println!("{shown}\t{score:.6}");
    }
    Ok(())
}

fn bench(dim: usize, n: usize, chars: usize, seed: u64, assert_floor: bool) -> CliResult {
    let cfg = EncoderConfig::new(n, dim, seed)?;
    let t = throughput_probe(chars, &cfg)?;
    let rate = t.chars_per_second();
    println!(
        "{} chars in {:.3}s: {:.0} chars/s (D={dim}, n={n})",
        t.chars,
        t.elapsed.as_secs_f64(),
        rate
    );
    if assert_floor && rate < THROUGHPUT_FLOOR {
        return Err(CliError::Runtime(format!(
            "throughput {rate:.0} chars/s is below the {THROUGHPUT_FLOOR:.0} floor"
        )));
    }
    Ok(())
}

//! `wh`: command-line front end for Wiener-Hopf operators on ordered groups.
//!
//! Exit codes: 0 success, 2 bad input or precondition failure, 3 numerical
//! failure. `WH_THREADS` caps the worker pool (0 or unset means automatic).

mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use wh_core::classifier::{
    classify_lambda, hull_and_inclusion_report, is_fredholm, spectrum_grid, GridOptions, SpectrumBox,
};
use wh_core::io::{
    grid_csv, matrix_csv, parse_json, to_json, FactorizationSpec, GridSpec, GroupSpec, HankelSpec, InclusionSpec,
    KernelSpec, LambdaSpec, NormSpec, SymbolSpec, VectorSpec, VerdictSpec,
};
use wh_core::oracle::{factorize, hankel_spectrum, kernel_cokernel, unimodular_invertibility, RationalSymbol};
use wh_core::wiener_hopf::{apply, operator_norm_lower, truncation_matrix, Window};
use wh_core::{Laurent, OrderedGroup, TrigPoly, WhError};

#[derive(Parser, Debug)]
#[command(name = "wh", version, about = "Fredholm theory of Wiener-Hopf operators on Z^r")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SymbolArgs {
    /// Symbol JSON: {"group": ..., "coeffs": [{"exp": [..], "re": f, "im": f}]}
    #[arg(long, conflicts_with = "symbol_file")]
    symbol: Option<String>,
    /// File holding symbol JSON.
    #[arg(long)]
    symbol_file: Option<PathBuf>,
    /// Group descriptor JSON replacing the one inside the symbol.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Write the result here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fredholm verdict and index of W_k.
    Index {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Position of a point lambda relative to the spectrum.
    Classify {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Point as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Dual-grid step for range sampling (default 2*pi/512).
        #[arg(long)]
        grid_step: Option<f64>,
        /// Range tolerance (default L*h).
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Labelled spectrum grid; with --out also writes a CSV next to the JSON.
    Spectrum {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// "re0,re1,im0,im1" (default: sampled bounding box plus a margin).
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: Option<String>,
        /// "nx,ny" or "n".
        #[arg(long, default_value = "200,200")]
        res: String,
        /// Dual-grid step for range sampling (default 2*pi/512).
        #[arg(long)]
        grid_step: Option<f64>,
        /// Also report the range/hull inclusion check on stderr.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Section norms and the certified sup-norm bracket.
    Norm {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Prefix sizes N for rank 1.
        #[arg(long, default_value = "16,32,64,128,256")]
        sizes: String,
        /// Single box window "lo:hi" (coordinates comma separated), any rank.
        #[arg(long, allow_hyphen_values = true)]
        window_box: Option<String>,
        /// Dual-grid step for the sup-norm bracket (default 2*pi/512).
        #[arg(long)]
        grid_step: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Apply W_k to a finitely supported vector.
    Apply {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Vector JSON: {"entries": [{"exp": [..], "re": f, "im": f}]}
        #[arg(long, conflicts_with = "vector_file")]
        vector: Option<String>,
        #[arg(long)]
        vector_file: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Finite section of W_k as CSV.
    Truncate {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// First N elements of X_+ (rank 1).
        #[arg(long, conflicts_with = "window_box")]
        window: Option<usize>,
        /// Box window "lo:hi", e.g. "0,0:3,3".
        #[arg(long, allow_hyphen_values = true)]
        window_box: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Wiener-Hopf factorization of a symbol on Z.
    Factorize {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hankel singular values and Nehari distance of p or p/q on Z.
    Hankel {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Denominator symbol JSON (rank 1).
        #[arg(long)]
        denominator: Option<String>,
        /// Also decide one-sided invertibility for a unimodular symbol.
        #[arg(long)]
        unimodular: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Kernel basis of W_k on Z.
    Kernel {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn configure_threads() -> Result<(), WhError> {
    let Ok(value) = std::env::var("WH_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| WhError::Parse(format!("WH_THREADS={value:?} is not a count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| WhError::Precondition(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, WhError> {
    match command {
        Command::Index { symbol, out } => {
            let (k, g) = load_symbol(&symbol)?;
            emit(&out.out, &to_json(&VerdictSpec::from_verdict(&is_fredholm(&k, &g)?)))?;
        }
        Command::Classify { symbol, lambda, grid_step, tol, out } => {
            let (k, g) = load_symbol(&symbol)?;
            let [re, im] = parse_floats::<2>(&lambda, "--lambda")?;
            let lambda = Complex64::new(re, im);
            let report = classify_lambda(&k, &g, lambda, grid_step, tol)?;
            if report.boundary_warning {
                eprintln!("warning: lambda is within twice the range tolerance of the sampled range");
            }
            emit(&out.out, &to_json(&LambdaSpec::from_report(lambda, &report)))?;
        }
        Command::Spectrum { symbol, bbox, res, grid_step, check, out } => {
            let (k, g) = load_symbol(&symbol)?;
            let (nx, ny) = parse_resolution(&res)?;
            let mut opts = GridOptions::new(nx, ny);
            opts.grid_step = grid_step;
            if let Some(b) = bbox {
                let [a, b, c, d] = parse_floats::<4>(&b, "--box")?;
                opts = opts.with_box(SpectrumBox::new(a, b, c, d)?);
            }
            let grid = spectrum_grid(&k, &g, &opts)?;
            if check {
                let report = hull_and_inclusion_report(&k, &g, &grid)?;
                eprint!("{}", to_json(&InclusionSpec::from(&report)));
            }
            let json = to_json(&GridSpec::from_grid(&grid));
            match &out.out {
                Some(path) => {
                    write_atomic(path, &json)?;
                    write_atomic(&path.with_extension("csv"), &grid_csv(&grid))?;
                }
                None => print!("{json}"),
            }
        }
        Command::Norm { symbol, sizes, window_box, grid_step, out } => {
            let (k, g) = load_symbol(&symbol)?;
            let (sizes, windows) = match window_box {
                Some(spec) => {
                    let w = parse_window_box(&g, &spec)?;
                    (vec![w.len()], vec![w])
                }
                None => {
                    let sizes = parse_list::<usize>(&sizes, "--sizes")?;
                    let windows = sizes.iter().map(|&n| Window::omega(&g, n)).collect::<Result<Vec<_>, _>>()?;
                    (sizes, windows)
                }
            };
            let norms = operator_norm_lower(&k, &windows)?;
            let (lo, hi) = k.certified_sup_norm(grid_step.unwrap_or_else(wh_core::symbol::default_grid_step));
            emit(&out.out, &to_json(&NormSpec { sizes, norms, sup_norm: [lo, hi] }))?;
        }
        Command::Apply { symbol, vector, vector_file, out } => {
            let (k, g) = load_symbol(&symbol)?;
            let text = inline_or_file(vector, vector_file, "--vector")?;
            let v = parse_json::<VectorSpec>(&text)?.build(g)?;
            emit(&out.out, &to_json(&VectorSpec::from_vector(&apply(&k, &v)?)))?;
        }
        Command::Truncate { symbol, window, window_box, out } => {
            let (k, g) = load_symbol(&symbol)?;
            let w = match (window, window_box) {
                (Some(n), None) => Window::omega(&g, n)?,
                (None, Some(spec)) => parse_window_box(&g, &spec)?,
                _ => return Err(WhError::Precondition("give one of --window or --window-box".into())),
            };
            let t = truncation_matrix(&k, &w)?;
            emit(&out.out, &matrix_csv(&t.window, &t.matrix))?;
        }
        Command::Factorize { symbol, out } => {
            let p = load_laurent(&symbol)?;
            let f = factorize(&p)?;
            emit(&out.out, &to_json(&FactorizationSpec::new(&f, &p.roots()?)))?;
        }
        Command::Hankel { symbol, denominator, unimodular, out } => {
            let p = load_laurent(&symbol)?;
            let s = match denominator {
                Some(text) => {
                    let q = Laurent::from_trig(&parse_json::<SymbolSpec>(&text)?.build()?)?;
                    RationalSymbol::new(p, q)?
                }
                None => RationalSymbol::from_laurent(p),
            };
            let spectrum = hankel_spectrum(&s)?;
            let report = if unimodular { Some(unimodular_invertibility(&s)?) } else { None };
            emit(&out.out, &to_json(&HankelSpec::new(&spectrum, report.as_ref())))?;
        }
        Command::Kernel { symbol, out } => {
            let p = load_laurent(&symbol)?;
            emit(&out.out, &to_json(&KernelSpec::from(&kernel_cokernel(&p)?)))?;
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut stdout = std::io::stdout().lock();
            for (name, outcome) in &results {
                let line = match outcome {
                    Ok(()) => format!("PASS {name}"),
                    Err(msg) => format!("FAIL {name}: {msg}"),
                };
                writeln!(stdout, "{line}").map_err(io_error)?;
            }
            let failed = results.iter().filter(|(_, r)| r.is_err()).count();
            writeln!(stdout, "{} passed, {failed} failed", results.len() - failed).map_err(io_error)?;
            if failed > 0 {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn io_error(e: std::io::Error) -> WhError {
    WhError::Precondition(format!("i/o: {e}"))
}

fn inline_or_file(inline: Option<String>, file: Option<PathBuf>, flag: &str) -> Result<String, WhError> {
    match (inline, file) {
        (Some(text), None) => Ok(text),
        (None, Some(path)) => {
            fs::read_to_string(&path).map_err(|e| WhError::Precondition(format!("{}: {e}", path.display())))
        }
        _ => Err(WhError::Precondition(format!("give exactly one of {flag} or {flag}-file"))),
    }
}

fn load_symbol(args: &SymbolArgs) -> Result<(TrigPoly, Arc<OrderedGroup>), WhError> {
    let text = inline_or_file(args.symbol.clone(), args.symbol_file.clone(), "--symbol")?;
    let spec: SymbolSpec = parse_json(&text)?;
    let k = match &args.group {
        Some(g) => spec.build_on(Arc::new(parse_json::<GroupSpec>(g)?.build()?))?,
        None => spec.build()?,
    };
    let g = k.group().clone();
    Ok((k, g))
}

fn load_laurent(args: &SymbolArgs) -> Result<Laurent, WhError> {
    Laurent::from_trig(&load_symbol(args)?.0)
}

fn parse_list<F: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<F>, WhError> {
    s.split(',')
        .map(|t| t.trim().parse::<F>().map_err(|_| WhError::Parse(format!("{flag}: cannot parse {t:?}"))))
        .collect()
}

fn parse_floats<const N: usize>(s: &str, flag: &str) -> Result<[f64; N], WhError> {
    let v = parse_list::<f64>(s, flag)?;
    <[f64; N]>::try_from(v).map_err(|v| WhError::Parse(format!("{flag}: expected {N} numbers, got {}", v.len())))
}

fn parse_resolution(s: &str) -> Result<(usize, usize), WhError> {
    match parse_list::<usize>(s, "--res")?.as_slice() {
        [n] => Ok((*n, *n)),
        [nx, ny] => Ok((*nx, *ny)),
        _ => Err(WhError::Parse("--res: expected \"nx,ny\" or \"n\"".into())),
    }
}

fn parse_window_box(g: &OrderedGroup, s: &str) -> Result<Window, WhError> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| WhError::Parse("--window-box: expected \"lo:hi\"".into()))?;
    Window::boxed(g, parse_list(lo, "--window-box")?, parse_list(hi, "--window-box")?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), WhError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes through a temporary file in the target directory and renames it.
fn write_atomic(path: &Path, text: &str) -> Result<(), WhError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error)?;
    tmp.write_all(text.as_bytes()).map_err(io_error)?;
    tmp.persist(path).map_err(|e| io_error(e.error))?;
    Ok(())
}

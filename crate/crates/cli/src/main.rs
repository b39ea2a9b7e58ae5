//! `bootlab`: command-line front end for the bootstrap-percolation
//! laboratory. Exit codes: 0 success, 2 domain or validation error,
//! 3 convergence failure, 64 unknown subcommand.

mod commands;
mod io;
mod render;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use bootlab_core::Error;
use render::Format;

#[derive(Parser)]
#[command(
    name = "bootlab",
    version,
    about = "Bootstrap-percolation laboratory: exact dynamics, threshold integrals, Monte Carlo"
)]
struct Cli {
    /// Output format (text is a plain rendering of the JSON report)
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sharp-threshold constant for d-dimensional, threshold-r dynamics
    Lambda {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Full triangle of threshold constants for 2 <= r <= d <= dmax
    Table {
        #[arg(long)]
        dmax: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Closure of a seed set (spec: JSON file or inline; cells: file or inline)
    Close {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
        /// none | all-outside | half-low:J | half-high:J (J is a 1-based long axis)
        #[arg(long, default_value = "none")]
        bc: String,
    },
    /// Bounding rectangles of the closure's components
    Span {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
    },
    /// Monte Carlo probability of crossing a rectangle along an axis
    Cross {
        #[arg(long)]
        spec: String,
        /// lo1,lo2:hi1,hi2 over the long axes
        #[arg(long)]
        rect: String,
        #[arg(long)]
        p: f64,
        /// 1-based long axis
        #[arg(long, default_value_t = 1)]
        axis: u32,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo percolation probability
    Prob {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bisect for the density where percolation probability reaches the target
    Pc {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
    },
    /// Monte Carlo probability that the closure's diameter reaches a length
    DiamEvent {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        len: u32,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact no-gap probability for a length-m independent event array
    Lgap {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        u: f64,
    },
    /// Cells joined to x through internally filled components of diameter <= m
    Gamma {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        m: u32,
        /// centre cell, comma-separated 1-based coordinates
        #[arg(long)]
        x: String,
        /// exact mode: seed set (file or inline)
        #[arg(long)]
        cells: Option<String>,
        /// sampled mode: density (needs --trials)
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Validate a two-coloured graph chain and test the crossing event
    Chain {
        #[arg(long)]
        file: String,
    },
    /// Minimum staircase cost between two points (rate g:K)
    Wpath {
        #[arg(long, default_value = "g:1")]
        f: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 200)]
        grid: u32,
    },
    /// Smallest internally spanned rectangle with long side in [L, 2L]
    AlWindow {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
        #[arg(long)]
        l: u32,
    },
    /// Internally filled connected set with diameter in [L, 2L]
    SmallComponent {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
        #[arg(long)]
        l: u32,
    },
    /// Two adjacent empty hyperplanes of a rectangle along an axis
    DoubleGap {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        rect: String,
        #[arg(long)]
        cells: String,
        /// 1-based axis over all long + thick axes
        #[arg(long)]
        axis: u32,
    },
    /// Blocker queries on a slab edge (whole edge, or one slice with --x/--sign)
    Blocked {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
        /// thick-coordinate corner, comma-separated (each 1 or its side)
        #[arg(long)]
        corner: String,
        /// 1-based thick axis of the edge
        #[arg(long)]
        axis: u32,
        /// test the stronger fully-blocked condition
        #[arg(long)]
        full: bool,
        /// thick coordinates of one slice (with --sign)
        #[arg(long)]
        x: Option<String>,
        /// plus | minus
        #[arg(long)]
        sign: Option<String>,
    },
    /// Crossing trichotomy for a slab closure along a thick axis
    Detercross {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        cells: String,
        /// 1-based thick axis
        #[arg(long)]
        axis: u32,
    },
    /// Limiting threshold constant for thresholds growing with dimension
    HighdimLambda {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn configure_threads() -> Result<(), Error> {
    match std::env::var("BOOTLAB_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                Error::domain(format!("BOOTLAB_THREADS = {raw:?} is not a thread count"))
            })?;
            if n == 0 {
                return Err(Error::domain("BOOTLAB_THREADS must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::domain(format!("thread pool: {e}")))
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<render::Output, Error> {
    use commands::*;
    match cmd {
        Cmd::Lambda { d, r, tol } => lambda_cmd(d, r, tol),
        Cmd::Table { dmax, tol } => table_cmd(dmax, tol),
        Cmd::Close { spec, cells, bc } => close_cmd(&spec, &cells, &bc),
        Cmd::Span { spec, cells } => span_cmd(&spec, &cells),
        Cmd::Cross {
            spec,
            rect,
            p,
            axis,
            trials,
            seed,
        } => cross_cmd(&spec, &rect, p, axis, trials, seed),
        Cmd::Prob {
            spec,
            p,
            trials,
            seed,
        } => prob_cmd(&spec, p, trials, seed),
        Cmd::Pc {
            spec,
            trials,
            tol,
            seed,
            target,
        } => pc_cmd(&spec, trials, tol, seed, target),
        Cmd::DiamEvent {
            spec,
            p,
            len,
            trials,
            seed,
        } => diam_event_cmd(&spec, p, len, trials, seed),
        Cmd::Lgap { m, ell, u } => lgap_cmd(m, ell, u),
        Cmd::Gamma {
            spec,
            m,
            x,
            cells,
            p,
            trials,
            seed,
        } => gamma_cmd(&spec, m, &x, cells.as_deref(), p, trials, seed),
        Cmd::Chain { file } => chain_cmd(&file),
        Cmd::Wpath { f, a, b, grid } => wpath_cmd(&f, &a, &b, grid),
        Cmd::AlWindow { spec, cells, l } => al_window_cmd(&spec, &cells, l),
        Cmd::SmallComponent { spec, cells, l } => small_component_cmd(&spec, &cells, l),
        Cmd::DoubleGap {
            spec,
            rect,
            cells,
            axis,
        } => double_gap_cmd(&spec, &rect, &cells, axis),
        Cmd::Blocked {
            spec,
            cells,
            corner,
            axis,
            full,
            x,
            sign,
        } => blocked_cmd(
            &spec,
            &cells,
            &corner,
            axis,
            full,
            x.as_deref(),
            sign.as_deref(),
        ),
        Cmd::Detercross { spec, cells, axis } => detercross_cmd(&spec, &cells, axis),
        Cmd::HighdimLambda { tol } => highdim_cmd(tol),
    }
}

/// Print a report to stdout. A reader that hangs up early (`bootlab ... |
/// head`) closes the pipe mid-write; that is not an error, so exit quietly
/// instead of letting the write macros panic.
fn emit(text: &str) {
    use std::io::{ErrorKind as IoKind, Write};
    let mut out = std::io::stdout().lock();
    let res = writeln!(out, "{text}").and_then(|_| out.flush());
    if let Err(e) = res {
        if e.kind() == IoKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                std::process::exit(0);
            }
            ErrorKind::InvalidSubcommand => {
                eprint!("{e}");
                std::process::exit(64);
            }
            _ => {
                eprint!("{e}");
                std::process::exit(2);
            }
        },
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    match dispatch(cli.cmd) {
        Ok(output) => emit(&output.render(cli.format)),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Convergence { .. } => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

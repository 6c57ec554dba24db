use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use m24_core::cli::{
    coeff_table, decomposition_report, render_coeffs, render_decomposition, resolve_classes, CliError, CoeffKind,
    CoeffOrders, ModuleKind, OutputFormat,
};
use m24_core::group::install_group_data;
use m24_core::verify::{run_suite, Record, Suite, VerifyOptions};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(name = "m24", version, about = "Coefficient tables and verification suites for the M24 twisted forms")]
struct Args {
    /// Group data file to use in place of the embedded one.
    #[arg(long, global = true, value_name = "PATH")]
    group_data: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient tables: eta-inverse, H, Z-disc or siegel.
    Coeffs {
        kind: CoeffKind,
        /// A series label, a comma-separated list, or "all".
        #[arg(long, default_value = "1A")]
        class: String,
        /// Rows for eta-inverse and H; the largest discriminant for Z-disc.
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        order: i64,
        #[arg(long, default_value_t = 4)]
        pmax: i64,
        #[arg(long, default_value_t = 4)]
        qmax: i64,
        /// Keep Siegel coefficients with |l| at most this.
        #[arg(long)]
        ywindow: Option<i64>,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Irreducible decompositions: eta-Fock, K or Khat.
    Decompose {
        module: ModuleKind,
        /// Rows 1..=depth, or discriminants up to depth for Khat.
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        depth: i64,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Runs a verification suite: tables, identities, transforms, rademacher or all.
    Verify {
        suite: Suite,
        #[arg(long, default_value = "all")]
        class: String,
        /// Replaces the residual bound of every numeric check.
        #[arg(long)]
        tolerance: Option<f64>,
        /// q-depth of the whole-window genus checks.
        #[arg(long, default_value_t = 12)]
        order: i64,
        #[arg(long, default_value_t = 6)]
        pmax: i64,
        #[arg(long, default_value_t = 6)]
        qmax: i64,
        /// Extra region width of the character-route comparison.
        #[arg(long, default_value_t = 4)]
        ywindow: i64,
        #[arg(long, default_value_t = 24)]
        seed: u64,
        /// json writes JSON lines; table writes one line per record.
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("m24: {msg}");
    ExitCode::from(code)
}

fn exit_for(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => EXIT_USAGE,
        CliError::Group(_) => EXIT_DATA,
        _ => EXIT_VERIFY,
    }
}

fn render_record(r: &Record, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let mut s = format!("{status} {:<22} {:<5}", r.check, r.class.as_deref().unwrap_or("-"));
            if let Some(x) = r.residual {
                s.push_str(&format!(" residual {x:.3e}"));
            }
            for part in [&r.detail, &r.mismatch].into_iter().flatten() {
                s.push_str(&format!(" [{part}]"));
            }
            s
        }
        OutputFormat::Csv => {
            let f = |o: &Option<String>| o.clone().unwrap_or_default().replace('"', "\"\"");
            format!(
                "{},{},{},{},\"{}\",\"{}\"",
                r.check,
                r.class.as_deref().unwrap_or(""),
                if r.passed() { "pass" } else { "fail" },
                r.residual.map(|x| format!("{x:e}")).unwrap_or_default(),
                f(&r.mismatch),
                f(&r.detail)
            )
        }
        OutputFormat::Json => r.to_json_line(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(path) = &args.group_data {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(EXIT_DATA, format!("{}: {e}", path.display())),
        };
        if let Err(e) = install_group_data(&text) {
            return fail(EXIT_DATA, format!("{}: {e}", path.display()));
        }
    }
    if let Err(e) = m24_core::group::load_group_data() {
        return fail(EXIT_DATA, e);
    }
    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => match std::fs::File::create(p) {
            Ok(f) => Box::new(std::io::BufWriter::new(f)),
            Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", p.display())),
        },
        None => Box::new(std::io::stdout().lock()),
    };
    let code = match args.command {
        Command::Coeffs { kind, class, order, pmax, qmax, ywindow, format } => {
            let orders = CoeffOrders { order, p_max: pmax, q_max: qmax, y_window: ywindow };
            let tables = resolve_classes(&class)
                .and_then(|labels| labels.iter().map(|l| coeff_table(kind, l, orders)).collect::<Result<Vec<_>, _>>());
            match tables {
                Ok(t) => {
                    let _ = sink.write_all(render_coeffs(&t, format).as_bytes());
                    0
                }
                Err(e) => return fail(exit_for(&e), e),
            }
        }
        Command::Decompose { module, depth, format } => match decomposition_report(module, depth) {
            Ok(r) => {
                let _ = sink.write_all(render_decomposition(&r, format).as_bytes());
                for v in &r.violations {
                    eprintln!("m24: verification failure: {v}");
                }
                if r.violations.is_empty() {
                    0
                } else {
                    EXIT_VERIFY
                }
            }
            Err(e) => return fail(exit_for(&e), e),
        },
        Command::Verify { suite, class, tolerance, order, pmax, qmax, ywindow, seed, format } => {
            let classes = match resolve_classes(&class) {
                Ok(c) => c,
                Err(e) => return fail(exit_for(&e), e),
            };
            let opts = VerifyOptions { classes, tolerance, seed, q_depth: order, siegel: (pmax, qmax), y_window: ywindow };
            if format == OutputFormat::Csv {
                let _ = writeln!(sink, "check,class,status,residual,mismatch,detail");
            }
            let records = run_suite(suite, &opts, |r| {
                let _ = writeln!(sink, "{}", render_record(r, format));
                let _ = sink.flush();
            });
            let failed = records.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                eprintln!("m24: {failed} of {} records failed", records.len());
                EXIT_VERIFY
            } else {
                0
            }
        }
    };
    if let Err(e) = sink.flush() {
        return fail(EXIT_USAGE, e);
    }
    ExitCode::from(code)
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use trigdet_cli::report::{to_csv, to_json_lines, Identity, VerificationReport, REPORT_DIGITS};
use trigdet_cli::verify::{self, VerifyOptions};
use trigdet_core::characters::CharacterGroup;
use trigdet_core::error::SpecialError;
use trigdet_core::matrices::{build, determinant, Indexing, MatrixKind, TrigMatrixSpec};
use trigdet_core::special::relative_class_number;

#[derive(Parser)]
#[command(
    name = "trigdet",
    version,
    about = "Verify determinant identities for cotangent/tangent/cosecant/sine/Maillet matrices \
             against Dirichlet L-values, Gauss sums, conductors and relative class numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits (default: auto, max(192, 8n), doubled up to 4096 on demand)
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One JSON object per line
    Json,
    /// CSV with a header row
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one identity at a single n
    Verify {
        /// Identity name (e.g. cot-theorem, tan-theorem, csc-cp, wang-maillet)
        identity: String,
        #[arg(long)]
        n: u64,
    },
    /// Verify an identity for every applicable n in a range
    Scan {
        identity: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Relative class number of the n-th cyclotomic field with supporting data
    Classnumber {
        #[arg(long)]
        n: u64,
    },
    /// List the Dirichlet characters mod n with conductor and parity
    Chars {
        #[arg(long)]
        n: u64,
    },
    /// Build one matrix family member and print its determinant
    Det {
        /// cot | tan | tan-full | csc | sin | maillet-residue | maillet-centered
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u64,
        /// product | inverse-product
        #[arg(long, default_value = "product")]
        indexing: String,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), std::io::Error> {
    match output {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}

fn emit_or_fail(output: &Option<PathBuf>, content: &str) -> Option<ExitCode> {
    if let Err(e) = emit(output, content) {
        eprintln!("error: failed to write output: {e}");
        return Some(ExitCode::from(1));
    }
    None
}

fn render_reports(format: Format, reports: &[VerificationReport]) -> String {
    match format {
        Format::Json => to_json_lines(reports),
        Format::Csv => to_csv(reports),
    }
}

fn parse_identity(s: &str) -> Result<Identity, ExitCode> {
    Identity::parse(s).ok_or_else(|| {
        usage_error(&format!(
            "unknown identity '{s}'; expected one of: {}",
            Identity::ALL.map(|i| i.name()).join(", ")
        ))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = VerifyOptions { precision: cli.precision };
    match cli.command {
        Command::Verify { identity, n } => {
            let identity = match parse_identity(&identity) {
                Ok(i) => i,
                Err(code) => return code,
            };
            if !identity.applicable(n) {
                return usage_error(&format!("identity '{identity}' is not defined at n = {n}"));
            }
            let reports = vec![verify::verify_one(identity, n, &opts)];
            if let Some(code) = emit_or_fail(&cli.output, &render_reports(cli.format, &reports)) {
                return code;
            }
            ExitCode::from(verify::exit_code(&reports) as u8)
        }
        Command::Scan { identity, from, to } => {
            let identity = match parse_identity(&identity) {
                Ok(i) => i,
                Err(code) => return code,
            };
            if from > to {
                return usage_error(&format!("empty range: from = {from} > to = {to}"));
            }
            let reports = verify::scan(identity, from, to, &opts);
            if let Some(code) = emit_or_fail(&cli.output, &render_reports(cli.format, &reports)) {
                return code;
            }
            ExitCode::from(verify::exit_code(&reports) as u8)
        }
        Command::Classnumber { n } => {
            if n < 3 {
                return usage_error("classnumber requires n >= 3");
            }
            if n % 4 == 2 {
                return usage_error(&format!(
                    "n = {n} = 2 mod 4 indexes the same field as n/2 = {}; use that instead",
                    n / 2
                ));
            }
            let ladder: Vec<u32> = match cli.precision {
                Some(p) => vec![p],
                None => {
                    let mut v = Vec::new();
                    let mut p = verify::auto_precision(n);
                    loop {
                        v.push(p);
                        if p >= verify::MAX_PRECISION {
                            break;
                        }
                        p = (p * 2).min(verify::MAX_PRECISION);
                    }
                    v
                }
            };
            let mut last_err = String::new();
            for &p in &ladder {
                match relative_class_number(n, p) {
                    Ok(data) => {
                        let content = match cli.format {
                            Format::Json => {
                                let v = serde_json::json!({
                                    "n": data.n,
                                    "h_minus": data.h_minus.to_string(),
                                    "q": data.q,
                                    "w": data.w,
                                    "conductor_product": data.conductor_product.to_string(),
                                    "l_product_re": data.l_product.re.to_decimal_string(REPORT_DIGITS),
                                    "l_product_im": data.l_product.im.to_decimal_string(REPORT_DIGITS),
                                    "precision_bits": p,
                                });
                                format!("{v}\n")
                            }
                            Format::Csv => format!(
                                "n,h_minus,q,w,conductor_product,l_product_re,l_product_im,precision_bits\n\
                                 {},{},{},{},{},{},{},{}\n",
                                data.n,
                                data.h_minus,
                                data.q,
                                data.w,
                                data.conductor_product,
                                data.l_product.re.to_decimal_string(REPORT_DIGITS),
                                data.l_product.im.to_decimal_string(REPORT_DIGITS),
                                p
                            ),
                        };
                        if let Some(code) = emit_or_fail(&cli.output, &content) {
                            return code;
                        }
                        return ExitCode::SUCCESS;
                    }
                    Err(SpecialError::PrecisionInsufficient { residual, .. }) => {
                        last_err = format!("rounding residual {residual} at {p} bits");
                    }
                    Err(e) => return usage_error(&e.to_string()),
                }
            }
            eprintln!("error: precision exhausted: {last_err}");
            ExitCode::from(3)
        }
        Command::Chars { n } => {
            if n < 1 {
                return usage_error("chars requires n >= 1");
            }
            let group = CharacterGroup::new(n);
            let mut content = String::new();
            if cli.format == Format::Csv {
                content.push_str("label,modulus,exponents,conductor,parity\n");
            }
            for chi in group.all_characters() {
                let exps = chi
                    .exponents()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                match cli.format {
                    Format::Json => {
                        let v = serde_json::json!({
                            "label": chi.label(),
                            "modulus": chi.modulus(),
                            "exponents": chi.exponents(),
                            "conductor": chi.conductor(),
                            "parity": if chi.is_odd() { "odd" } else { "even" },
                        });
                        content.push_str(&format!("{v}\n"));
                    }
                    Format::Csv => {
                        content.push_str(&format!(
                            "\"{}\",{},\"({})\",{},{}\n",
                            chi.label(),
                            chi.modulus(),
                            exps,
                            chi.conductor(),
                            if chi.is_odd() { "odd" } else { "even" }
                        ));
                    }
                }
            }
            if let Some(code) = emit_or_fail(&cli.output, &content) {
                return code;
            }
            ExitCode::SUCCESS
        }
        Command::Det { kind, n, indexing } => {
            let kind = match kind.as_str() {
                "cot" => MatrixKind::Cot,
                "tan" => MatrixKind::Tan,
                "tan-full" => MatrixKind::TanFull,
                "csc" => MatrixKind::Csc,
                "sin" => MatrixKind::Sin,
                "maillet-residue" => MatrixKind::MailletResidue,
                "maillet-centered" => MatrixKind::MailletCentered,
                other => return usage_error(&format!("unknown matrix kind '{other}'")),
            };
            let indexing = match indexing.as_str() {
                "product" => Indexing::Product,
                "inverse-product" => Indexing::InverseProduct,
                other => return usage_error(&format!("unknown indexing '{other}'")),
            };
            let spec = match TrigMatrixSpec::new(kind, n, indexing) {
                Ok(s) => s,
                Err(e) => return usage_error(&e.to_string()),
            };
            let p = cli.precision.unwrap_or_else(|| verify::auto_precision(n));
            let matrix = match build(&spec, p) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            let det = determinant(&matrix);
            let content = match cli.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "kind": kind.name(),
                        "n": n,
                        "indexing": match indexing {
                            Indexing::Product => "product",
                            Indexing::InverseProduct => "inverse-product",
                        },
                        "dim": matrix.dim(),
                        "determinant": det.value.to_decimal_string(REPORT_DIGITS),
                        "error_estimate": det.error.to_decimal_string(REPORT_DIGITS),
                        "precision_bits": p,
                    });
                    format!("{v}\n")
                }
                Format::Csv => format!(
                    "kind,n,indexing,dim,determinant,error_estimate,precision_bits\n\
                     {},{},{},{},{},{},{}\n",
                    kind.name(),
                    n,
                    match indexing {
                        Indexing::Product => "product",
                        Indexing::InverseProduct => "inverse-product",
                    },
                    matrix.dim(),
                    det.value.to_decimal_string(REPORT_DIGITS),
                    det.error.to_decimal_string(REPORT_DIGITS),
                    p
                ),
            };
            if let Some(code) = emit_or_fail(&cli.output, &content) {
                return code;
            }
            ExitCode::SUCCESS
        }
    }
}

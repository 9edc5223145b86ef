use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ffwitness::charsum::{self, WeilAuditConfig};
use ffwitness::construct::{self, AlphaPolicy, ConstructionReport, PipelineParams};
use ffwitness::{nt, Error, FieldOptions, DEFAULT_FIELD_CAP};

const CAP_ENV: &str = "FFWITNESS_CAP";

#[derive(Parser)]
#[command(name = "ffwitness", version, about = "Small sets certified to contain non-d-th powers or primitive elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format; defaults to json for single reports and csv for tables.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Largest field cardinality to construct. FFWITNESS_CAP takes precedence.
    #[arg(long)]
    cap_field: Option<u64>,
    /// Seed for sampled audits.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build S = {alpha - x^t} in F_{q^h} and certify a non-d-th power.
    Construct {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// Exponent; chosen automatically when omitted.
        #[arg(long)]
        t: Option<u64>,
        /// Index of alpha in F_{q^h}; smallest primitive element outside F_q when omitted.
        #[arg(long)]
        alpha: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a saved construction report.
    Verify {
        /// Report JSON; standard input when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// One construction per prime power q in a range.
    Survey {
        #[arg(long, default_value_t = 3)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Sample incomplete character sums and compare with the (mD - 1) sqrt(q) bound.
    AuditWeil {
        /// Base field sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![101u64, 103, 121])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check M(2) < sqrt(q) and tabulate floor(log2(q - 1)) <= M(2).
    AuditBounds {
        #[arg(long, default_value_t = 10_000)]
        q_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Search S = {alpha - x^t} in F_{q^n} for a primitive element.
    Primitive {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Extension degree n.
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long)]
        alpha: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Look for a monic irreducible f over F_{q^k} of degree l with f - f(0) over F_q
    /// and f(0) in no proper subfield.
    MnSearch {
        #[arg(long)]
        q: u64,
        /// Extension degree of the coefficient field over F_q.
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = construct::MN_SEARCH_BUDGET)]
        budget: u64,
        #[command(flatten)]
        common: Common,
    },
    /// For each odd q in range: does every alpha - {a^2 : a != 0} mix squares and non-squares?
    CkCheck {
        #[arg(long, default_value_t = 7)]
        q_min: u64,
        #[arg(long, default_value_t = 49)]
        q_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Roots of x^p - x - a, a a non-square: are all of alpha + F_p non-squares?
    HmCheck {
        #[arg(long)]
        p: u32,
        /// Also search F_{p^k} exhaustively for cosets alpha + F_p of non-squares.
        #[arg(long)]
        search_k: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure classes, mapped onto exit codes 1, 2 and 3.
enum Failure {
    Audit(String),
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_limit() {
            Failure::Cap(e.to_string())
        } else if matches!(e, Error::Internal(_)) {
            Failure::Audit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn field_options(common: &Common) -> Result<FieldOptions, Failure> {
    let cap = match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Input(format!("{CAP_ENV}={v} is not a positive integer")))?,
        Err(_) => common.cap_field.unwrap_or(DEFAULT_FIELD_CAP),
    };
    if cap == 0 {
        return Err(Failure::Input("field cap must be positive".into()));
    }
    Ok(FieldOptions::with_cap(cap))
}

fn open_output(common: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(common: &Common, value: &T) -> Result<(), Failure> {
    let mut out = open_output(common)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn write_rows<T: Serialize>(common: &Common, default: Format, rows: &[T]) -> Result<(), Failure> {
    match common.format.unwrap_or(default) {
        Format::Json => write_json(common, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(open_output(common)?);
            for row in rows {
                w.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn json_only(common: &Common) -> Result<(), Failure> {
    if common.format == Some(Format::Csv) {
        return Err(Failure::Input("this command emits a single JSON document".into()));
    }
    Ok(())
}

fn alpha_policy(alpha: Option<u64>) -> AlphaPolicy {
    alpha.map_or(AlphaPolicy::PrimitiveMinimal, AlphaPolicy::Given)
}

#[derive(Serialize)]
struct BoundsRow {
    q: u64,
    m2: u64,
    sqrt_q: f64,
    floor_log2_q_minus_1: u32,
    below_sqrt: bool,
    log2_claim_holds: bool,
}

#[derive(Serialize)]
struct PrimitiveOutput {
    report: ConstructionReport,
    sum_audit: construct::PrimitiveSumAudit,
}

#[derive(Serialize)]
struct HmOutput {
    check: construct::ArtinSchreierCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<construct::NonsquareCosetSearch>,
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct {
            p,
            k,
            h,
            d,
            t,
            alpha,
            common,
        } => {
            json_only(&common)?;
            let opts = field_options(&common)?;
            let params = PipelineParams {
                t,
                alpha: alpha_policy(alpha),
                ..PipelineParams::new(p, k, h, d)
            };
            let report = construct::construct_pipeline(&params, &opts)?;
            write_json(&common, &report)?;
            Ok(report.verified)
        }
        Command::Verify { input, common } => {
            json_only(&common)?;
            let opts = field_options(&common)?;
            let text = match input {
                Some(path) => std::fs::read_to_string(path)?,
                None => io::read_to_string(io::stdin())?,
            };
            let report: ConstructionReport =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("bad report: {e}")))?;
            let outcome = construct::verify(&report, &opts)?;
            write_json(&common, &outcome)?;
            Ok(outcome.ok)
        }
        Command::Survey {
            q_min,
            q_max,
            h,
            d,
            common,
        } => {
            if q_min > q_max {
                return Err(Failure::Input("empty q range".into()));
            }
            let opts = field_options(&common)?;
            let rows = construct::survey(q_min, q_max, h, d, &opts);
            for row in rows.iter().filter(|r| r.is_hard_failure()) {
                eprintln!("q={}: {}", row.q, row.status);
            }
            write_rows(&common, Format::Csv, &rows)?;
            Ok(!rows.iter().any(|r| r.is_hard_failure()))
        }
        Command::AuditWeil {
            q,
            m,
            max_degree,
            samples,
            common,
        } => {
            let opts = field_options(&common)?;
            let cfg = WeilAuditConfig {
                qs: q,
                m,
                max_degree,
                samples,
                seed: common.seed,
            };
            let audit = charsum::weil_audit(&cfg, &opts)?;
            eprintln!(
                "{} applicable, {} non-trivial, {} failures",
                audit.applicable, audit.nontrivial, audit.failures
            );
            write_rows(&common, Format::Csv, &audit.rows)?;
            Ok(audit.passes())
        }
        Command::AuditBounds { q_max, common } => {
            let audit = nt::m2_bounds_audit(q_max)?;
            match common.format.unwrap_or(Format::Json) {
                Format::Json => write_json(&common, &audit)?,
                Format::Csv => {
                    let rows = nt::prime_powers_in(3, q_max)
                        .into_iter()
                        .filter(|q| q % 2 == 1)
                        .map(|q| {
                            let m2 = nt::m_of_h(q, 2)?;
                            let floor_log2_q_minus_1 = nt::floor_log2(q - 1);
                            Ok(BoundsRow {
                                q,
                                m2,
                                sqrt_q: (q as f64).sqrt(),
                                floor_log2_q_minus_1,
                                below_sqrt: m2 * m2 < q,
                                log2_claim_holds: floor_log2_q_minus_1 as u64 <= m2,
                            })
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    write_rows(&common, Format::Csv, &rows)?;
                }
            }
            Ok(audit.sqrt_violations.is_empty())
        }
        Command::Primitive {
            p,
            k,
            h,
            t,
            alpha,
            common,
        } => {
            json_only(&common)?;
            let opts = field_options(&common)?;
            let params = PipelineParams {
                t: Some(t),
                alpha: alpha_policy(alpha),
                ..PipelineParams::new(p, k, h, 1)
            };
            let report = construct::primitive_set_search(&params, &opts)?;
            let tower = construct::Tower::new(p, k, h, &opts)?;
            let emb = tower.embedding()?;
            let sum_audit = construct::primitive_sum_audit(tower.big.element(report.spec.alpha)?, t, &emb)?;
            let verified = report.verified;
            write_json(&common, &PrimitiveOutput { report, sum_audit })?;
            Ok(verified)
        }
        Command::MnSearch {
            q,
            k,
            l,
            budget,
            common,
        } => {
            json_only(&common)?;
            let opts = field_options(&common)?;
            let result = construct::mn_conjecture_search(q, k, l, budget, &opts)?;
            write_json(&common, &result)?;
            Ok(result.witness.is_some())
        }
        Command::CkCheck { q_min, q_max, common } => {
            let opts = field_options(&common)?;
            let mut rows = Vec::new();
            for q in nt::prime_powers_in(q_min, q_max).into_iter().filter(|q| q % 2 == 1) {
                let (p, k) = nt::prime_power(q).ok_or(Error::NotPrimePower(q))?;
                rows.push(construct::coulter_kosick_check(p as u32, k, &opts)?);
            }
            write_rows(&common, Format::Json, &rows)?;
            Ok(rows.iter().all(|r| r.holds))
        }
        Command::HmCheck { p, search_k, common } => {
            json_only(&common)?;
            let opts = field_options(&common)?;
            let check = construct::hm_artin_schreier_check(p, &opts)?;
            let search = search_k
                .map(|k| construct::nonsquare_coset_search(p, k, &opts))
                .transpose()?;
            let holds = check.holds;
            write_json(&common, &HmOutput { check, search })?;
            Ok(holds)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Audit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

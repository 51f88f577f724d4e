//! `shimura`: command-line access to the shimura-core pipelines.
//!
//! Exit status is 0 on success, 2 on invalid input and 1 when an internal
//! invariant fails.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shimura_core::quaternion::DEFAULT_ZETA_BOUND;
use shimura_core::search::TYPES;
use shimura_core::*;

#[derive(Parser)]
#[command(name = "shimura", version, about = "Shimura surfaces with involutions of the second kind")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Second generalized Bernoulli number of Q(sqrt(d)).
    Bernoulli {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify candidate admissible groups over real quadratic fields.
    Search {
        /// Comma-separated types (multiples of 4 in 12..=36).
        #[arg(long, value_delimiter = ',', default_values_t = TYPES.to_vec())]
        e: Vec<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Admissibility report for an algebra over a real quadratic field.
    Surface {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Split rational primes; both primes above each one ramify.
        #[arg(long, value_delimiter = ',', required = true)]
        ram: Vec<u64>,
        #[command(flatten)]
        subgroup: SubgroupArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Invariants of the quotient by the involution.
    Quotient {
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Genus of a Shimura curve over Q.
    Curve {
        #[arg(long, value_delimiter = ',', required = true)]
        ram: Vec<u64>,
        #[arg(long)]
        index: u64,
    },
    /// Admissibility report for the algebra over a totally real quartic field
    /// ramified only at two real places.
    Quartic {
        /// Coefficients c4,c3,c2,c1,c0 of a monic quartic.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        poly: Vec<i64>,
        /// Squarefree d with Q(sqrt(d)) contained in the field.
        #[arg(long)]
        subfield: i64,
        #[command(flatten)]
        subgroup: SubgroupArg,
        #[arg(long, default_value_t = DEFAULT_ZETA_BOUND)]
        zeta_bound: u64,
        /// Assert that the two ramified real places are swapped by the subfield automorphism.
        #[arg(long)]
        infinite_conjugate_assert: bool,
        /// Field discriminant, when the polynomial discriminant has an index factor.
        #[arg(long)]
        field_disc: Option<i128>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args)]
struct SubgroupArg {
    /// full, or borel|unipotent|principal:<p>[.<i>], where <i> picks the i-th
    /// prime above p (default 0).
    #[arg(long, default_value = "full")]
    subgroup: String,
}

/// Invalid input, reported on stderr with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Out = std::result::Result<(), Usage>;

/// Appends one formatted line to the output buffer.
macro_rules! out {
    ($w:expr, $($arg:tt)*) => {{
        $w.push_str(&format!($($arg)*));
        $w.push('\n');
    }};
}

struct LevelSpec {
    kind: SubgroupKind,
    p: u64,
    position: usize,
}

fn parse_subgroup(s: &str) -> std::result::Result<Option<LevelSpec>, Usage> {
    if s == "full" {
        return Ok(None);
    }
    let bad = || Usage(format!("bad subgroup '{s}': expected full or borel|unipotent|principal:<p>[.<i>]"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let kind = match kind {
        "borel" => SubgroupKind::Borel,
        "unipotent" => SubgroupKind::Unipotent,
        "principal" => SubgroupKind::Principal,
        _ => return Err(bad()),
    };
    let (p, position) = match rest.split_once('.') {
        Some((p, i)) => (p, i.parse().map_err(|_| bad())?),
        None => (rest, 0),
    };
    Ok(Some(LevelSpec { kind, p: p.parse().map_err(|_| bad())?, position }))
}

fn pick<T: Copy>(primes: &[T], spec: &LevelSpec) -> std::result::Result<T, Usage> {
    primes
        .get(spec.position)
        .copied()
        .ok_or_else(|| Usage(format!("there are only {} primes above {}", primes.len(), spec.p)))
}

fn write_csv(w: &mut String, header: &[&str], rows: &[Vec<String>]) -> Out {
    let mut csv = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| Usage(e.to_string());
    csv.write_record(header).map_err(internal)?;
    for r in rows {
        csv.write_record(r).map_err(internal)?;
    }
    let bytes = csv.into_inner().map_err(|e| Usage(e.to_string()))?;
    w.push_str(&String::from_utf8(bytes).expect("CSV fields are UTF-8"));
    Ok(())
}

fn yes_no(c: &Check) -> String {
    format!("{} ({})", if c.ok { "yes" } else { "no" }, c.reason)
}

fn bernoulli(w: &mut String, d: i64, format: Format) -> Out {
    let k = QuadField::new(d)?;
    let b = k.bernoulli2();
    match format {
        Format::Text => out!(w, "{b}"),
        Format::Csv => write_csv(
            w,
            &["d", "D", "B2_num", "B2_den"],
            &[vec![d.to_string(), k.discriminant().to_string(), b.numer().to_string(), b.denom().to_string()]],
        )?,
    }
    Ok(())
}

fn search(w: &mut String, e: &[i64], format: Format) -> Out {
    let rows = run_search(e)?;
    let cmp = compare_to_reference(&rows);
    let reason = |r: &CandidateRow| match &r.status {
        RowStatus::Pruned(why) => why.clone(),
        RowStatus::Candidate => cmp
            .extra
            .iter()
            .find(|(x, _)| x == r)
            .map(|(_, tag)| tag.clone())
            .unwrap_or_else(|| "in reference classification".to_string()),
    };
    match format {
        Format::Csv => {
            let out: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let ram: Vec<String> = r.ram_primes.iter().map(u64::to_string).collect();
                    vec![
                        r.disc.to_string(),
                        r.d.to_string(),
                        r.b2.numer().to_string(),
                        r.b2.denom().to_string(),
                        r.e.to_string(),
                        ram.join(";"),
                        r.index.to_string(),
                        r.status.to_string(),
                        reason(r),
                    ]
                })
                .collect();
            write_csv(w, &["D", "d", "B2_num", "B2_den", "e", "ram_primes", "index", "status", "reason"], &out)
        }
        Format::Text => {
            out!(
                w,
                "{:>4} {:>4} {:>6} {:>3} {:>10} {:>5}  {:<9} reason",
                "D",
                "d",
                "B2",
                "e",
                "ram",
                "index",
                "status"
            );
            for r in &rows {
                let ram: Vec<String> = r.ram_primes.iter().map(u64::to_string).collect();
                out!(
                    w,
                    "{:>4} {:>4} {:>6} {:>3} {:>10} {:>5}  {:<9} {}",
                    r.disc,
                    r.d,
                    r.b2.to_string(),
                    r.e,
                    ram.join(","),
                    r.index,
                    r.status.to_string(),
                    reason(r)
                );
            }
            out!(
                w,
                "summary: {} rows, {} candidates, {} matched, {} missing, {} extra",
                rows.len(),
                rows.iter().filter(|r| r.status == RowStatus::Candidate).count(),
                cmp.matched.len(),
                cmp.missing.len(),
                cmp.extra.len()
            );
            for m in &cmp.missing {
                out!(w, "missing: e = {}, D = {}, ram = {:?}, index = {}", m.e, m.disc, m.ram_primes, m.index);
            }
            Ok(())
        }
    }
}

fn print_report(w: &mut String, r: &AdmissibilityReport, format: Format) -> Out {
    let euler = match (&r.euler.exact, &r.euler.failure) {
        (Some(e), _) => e.to_string(),
        (None, Some(f)) => format!("unrecognized ({f})"),
        (None, None) => "unrecognized".to_string(),
    };
    let type_str = r.admissible_type.map(|e| e.to_string()).unwrap_or_default();
    let pg = r.surface.map(|s| s.pg.to_string()).unwrap_or_default();
    match format {
        Format::Csv => write_csv(
            w,
            &[
                "algebra",
                "subgroup",
                "involution",
                "invariant_order",
                "level_invariance",
                "index",
                "euler",
                "euler_approx",
                "torsion",
                "admissible_type",
                "pg",
            ],
            &[vec![
                r.algebra.clone(),
                r.subgroup.to_string(),
                r.involution.ok.to_string(),
                r.invariant_order.ok.to_string(),
                r.level_invariance.ok.to_string(),
                r.index.to_string(),
                euler,
                format!("{:.12}", r.euler.approx),
                r.torsion.verdict.to_string(),
                type_str,
                pg,
            ]],
        ),
        Format::Text => {
            out!(w, "algebra = {}", r.algebra);
            out!(w, "subgroup = {}", r.subgroup);
            out!(w, "involution = {}", yes_no(&r.involution));
            out!(w, "invariant_order = {}", yes_no(&r.invariant_order));
            out!(w, "level_invariance = {}", yes_no(&r.level_invariance));
            out!(w, "index = {}", r.index);
            out!(w, "euler = {euler}");
            if r.euler.error_bound > 0.0 {
                out!(w, "euler_approx = {:.12} (+ at most {:.3e})", r.euler.approx, r.euler.error_bound);
            }
            out!(w, "torsion = {}", r.torsion.verdict);
            for f in &r.torsion.findings {
                let mut parts: Vec<String> = f.ram_verdicts.iter().map(|(q, v)| format!("{q} {v}")).collect();
                if parts.is_empty() {
                    parts.push("no finite ramification".to_string());
                }
                if let Some(v) = f.level_verdict {
                    parts.push(format!("level {v}"));
                }
                out!(
                    w,
                    "torsion_order_{} = {} in Gamma(1) [{}]",
                    f.order.m,
                    if f.in_gamma1 { "occurs" } else { "absent" },
                    parts.join("; ")
                );
            }
            if let Some(s) = r.surface {
                out!(w, "surface = c1^2 {}, c2 {}, chi {}, p_g {}, q {}", s.c1sq, s.e, s.chi, s.pg, s.q);
            }
            for z in &r.quotients {
                out!(w, "quotient_g{} = {z}", z.g);
            }
            for n in &r.notes {
                out!(w, "note = {n}");
            }
            match (r.admissible_type, r.surface) {
                (Some(e), Some(s)) => out!(w, "ADMISSIBLE of type {e}; p_g(X) = {}", s.pg),
                _ => out!(w, "NOT ADMISSIBLE"),
            }
            Ok(())
        }
    }
}

fn surface(w: &mut String, d: i64, ram: &[u64], subgroup: &str, format: Format) -> Out {
    let k = QuadField::new(d)?;
    let a = QuaternionAlgebraData::over_quadratic_split_primes(k, ram)?;
    let spec = match parse_subgroup(subgroup)? {
        None => SubgroupSpec::full(),
        Some(l) => SubgroupSpec::at(l.kind, pick(&k.primes_above(l.p)?, &l)?),
    };
    print_report(w, &admissibility_report(&a, &spec)?, format)
}

fn quotient(w: &mut String, e: i64, g: Option<i64>, format: Format) -> Out {
    let rows = match g {
        Some(g) => vec![quotient_invariants(e, g)?],
        None => {
            if e <= 0 || e % 4 != 0 {
                return Err(Usage(format!("Euler number {e} must be a positive multiple of 4")));
            }
            quotient_table(e)
        }
    };
    match format {
        Format::Text => {
            if rows.is_empty() {
                out!(w, "no admissible fixed-curve genus for e = {e}");
            }
            for z in &rows {
                if g.is_some() {
                    out!(w, "{z}");
                } else {
                    out!(w, "g = {}: {z}", z.g);
                }
            }
            Ok(())
        }
        Format::Csv => {
            let out: Vec<Vec<String>> = rows
                .iter()
                .map(|z| {
                    vec![
                        e.to_string(),
                        z.g.to_string(),
                        z.ksq.to_string(),
                        z.c2.to_string(),
                        z.pg.to_string(),
                        z.q.to_string(),
                        z.general_type.to_string(),
                    ]
                })
                .collect();
            write_csv(w, &["e", "g", "K2", "c2", "pg", "q", "general_type"], &out)
        }
    }
}

fn curve(w: &mut String, ram: &[u64], index: u64) -> Out {
    let a = QuaternionAlgebraData::over_rationals(ram)?;
    out!(w, "{}", shimura_curve_genus(ram, index)?);
    let orders: Vec<String> = gamma1_torsion_orders(&a).iter().map(u32::to_string).collect();
    out!(w, "torsion orders in Gamma(1): {{{}}}", orders.join(", "));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn quartic(
    w: &mut String,
    poly: &[i64],
    subfield: i64,
    subgroup: &str,
    zeta_bound: u64,
    asserted: bool,
    field_disc: Option<i128>,
    format: Format,
) -> Out {
    let coeffs: [i64; 5] =
        poly.try_into().map_err(|_| Usage(format!("--poly needs 5 coefficients, got {}", poly.len())))?;
    let k = QuarticField::new(coeffs, subfield, field_disc)?;
    let spec = match parse_subgroup(subgroup)? {
        None => SubgroupSpec::full(),
        Some(l) => SubgroupSpec::at(l.kind, pick(&k.primes_above(l.p)?, &l)?),
    };
    if format == Format::Text {
        out!(w, "field = {k}");
        out!(w, "discriminant = {} (polynomial {}, index {})", k.discriminant(), k.poly_discriminant(), k.index());
    }
    let a = QuaternionAlgebraData::over_quartic(k, asserted);
    print_report(w, &admissibility_report_with(&a, &spec, zeta_bound)?, format)
}

fn run(w: &mut String, cli: Cli) -> Out {
    match cli.command {
        Command::Bernoulli { d, format } => bernoulli(w, d, format),
        Command::Search { e, format } => search(w, &e, format),
        Command::Surface { d, ram, subgroup, format } => surface(w, d, &ram, &subgroup.subgroup, format),
        Command::Quotient { e, g, format } => quotient(w, e, g, format),
        Command::Curve { ram, index } => curve(w, &ram, index),
        Command::Quartic { poly, subfield, subgroup, zeta_bound, infinite_conjugate_assert, field_disc, format } => {
            quartic(w, &poly, subfield, &subgroup.subgroup, zeta_bound, infinite_conjugate_assert, field_disc, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut w = String::new();
    match std::panic::catch_unwind(move || run(&mut w, cli).map(|()| w)) {
        Ok(Ok(text)) => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Ok(Err(Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(1),
    }
}

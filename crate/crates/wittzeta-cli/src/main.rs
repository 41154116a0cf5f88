//! Command-line frontend: reproduces the divisor tables and exposes the
//! library computations with text/CSV/JSON output.
//!
//! Exit codes: 0 success, 2 argument or grammar errors, 3 computation
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use wittzeta::densities::{
    convergence_report, density_finite, density_limit_with_degree,
    orthogonal_limit_closed_form, point_count_oracle, LabelScheme,
};
use wittzeta::labeledconf::{theoremb_check, PartitionLambda};
use wittzeta::patterns::{finite_label_criterion, mobius_table, pattern_stats, PatternSet};
use wittzeta::prelambda::zeta_special_value;
use wittzeta::witt::format_sig15;
use wittzeta::zoo::variety;
use wittzeta::{Error, WittDivisor};

#[derive(Parser)]
#[command(
    name = "wittzeta",
    version,
    about = "Exact zeta statistics in the rational Witt ring of a finite field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Limiting divisor of the density of 2-colored configurations in pairs
    /// of effective zero-cycles on the affine line.
    Table1 {
        /// Number of terms (weight horizon)
        #[arg(long, default_value_t = 250)]
        terms: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// The exact density divisor of 2-colored configurations of degree
    /// (d1, d2) on the affine line; with --q also its norms.
    Table2 {
        #[arg(long, default_value_t = 40)]
        d1: u32,
        #[arg(long, default_value_t = 40)]
        d2: u32,
        /// Evaluate Hadamard norm and point-counting seminorm at this q
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Local Möbius function table and convergence criteria of a pattern set.
    Mobius {
        /// Pattern set, e.g. "2,1;1,2"
        #[arg(long)]
        patterns: String,
        /// Base prime power for the criteria
        #[arg(long)]
        q: Option<u64>,
        /// Variety dimension used in the criteria
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Finite-degree density divisor for a variety and label scheme.
    Density {
        #[arg(long)]
        variety: String,
        /// Label scheme: full:<k>, conf:<k>, explicit:<vecs>
        #[arg(long)]
        labels: Option<String>,
        /// Pattern set (labels avoiding these patterns)
        #[arg(long)]
        patterns: Option<String>,
        /// Degree vector, e.g. "40,40"
        #[arg(long)]
        d: String,
        /// Exactness cutoff of the result
        #[arg(long)]
        cutoff: i64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Limiting density divisor in the weight topology.
    Limit {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        labels: Option<String>,
        #[arg(long)]
        patterns: Option<String>,
        /// Weight horizon of the limit
        #[arg(long)]
        cutoff: i64,
        /// Floor on the internal expansion degree (the derived degree is
        /// never lowered)
        #[arg(long)]
        degree: Option<i64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Cross-check the limiting density of an orthogonal pattern set
    /// against its closed form (inverse of a product of zeta special
    /// values).
    #[command(name = "theoremA")]
    TheoremA {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        patterns: String,
        #[arg(long, default_value_t = 40)]
        cutoff: i64,
        /// Floor on the internal expansion degree
        #[arg(long)]
        degree: Option<i64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Labeled-configuration quotients against the alternating limit
    /// divisor.
    #[command(name = "theoremB")]
    TheoremB {
        #[arg(long)]
        variety: String,
        /// Partition, e.g. "2,1,1" (empty for no marked colors)
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Largest number of unmarked points
        #[arg(long, default_value_t = 12)]
        d: u32,
        #[arg(long, default_value_t = 12)]
        cutoff: i64,
        /// q for Hadamard distances
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Zeta divisor of a variety preset, optionally Tate-twisted, or a zeta
    /// special value.
    Zeta {
        #[arg(long)]
        variety: String,
        /// Tate twist: shift all exponents by this amount
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
        /// Compute the special value at this argument instead
        #[arg(long, allow_negative_numbers = true)]
        special: Option<i64>,
        /// Exactness cutoff for the special value
        #[arg(long, default_value_t = 20)]
        cutoff: i64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Convergence diagnostics: finite degrees against the limit.
    Report {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        labels: Option<String>,
        #[arg(long)]
        patterns: Option<String>,
        /// Degrees to compare, e.g. "2;3;4" or "1,1;2,2"
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        cutoff: i64,
        /// Also verify each degree against the point-count oracle at q
        #[arg(long, default_value_t = false)]
        oracle: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = run(cli.command);
    match result {
        Ok(text) => {
            if let Some(path) = &output.out {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cmd: Command) -> (Result<String, Error>, OutputOpts) {
    match cmd {
        Command::Table1 { terms, output } => (cmd_table1(terms, output.format), output),
        Command::Table2 { d1, d2, q, output } => (cmd_table2(d1, d2, q, output.format), output),
        Command::Mobius {
            patterns,
            q,
            dim,
            output,
        } => (cmd_mobius(&patterns, q, dim, output.format), output),
        Command::Density {
            variety,
            labels,
            patterns,
            d,
            cutoff,
            output,
        } => (
            cmd_density(&variety, labels.as_deref(), patterns.as_deref(), &d, cutoff, output.format),
            output,
        ),
        Command::Limit {
            variety,
            labels,
            patterns,
            cutoff,
            degree,
            output,
        } => (
            cmd_limit(&variety, labels.as_deref(), patterns.as_deref(), cutoff, degree, output.format),
            output,
        ),
        Command::TheoremA {
            variety,
            patterns,
            cutoff,
            degree,
            output,
        } => (cmd_theorem_a(&variety, &patterns, cutoff, degree, output.format), output),
        Command::TheoremB {
            variety,
            lambda,
            d,
            cutoff,
            q,
            output,
        } => (
            cmd_theorem_b(&variety, &lambda, d, cutoff, q, output.format),
            output,
        ),
        Command::Zeta {
            variety,
            twist,
            special,
            cutoff,
            output,
        } => (
            cmd_zeta(&variety, twist, special, cutoff, output.format),
            output,
        ),
        Command::Report {
            variety,
            labels,
            patterns,
            d,
            q,
            cutoff,
            oracle,
            output,
        } => (
            cmd_report(
                &variety,
                labels.as_deref(),
                patterns.as_deref(),
                &d,
                q,
                cutoff,
                oracle,
                output.format,
            ),
            output,
        ),
    }
}

fn rational(q: u64) -> Result<BigRational, Error> {
    if q < 2 {
        return Err(Error::Parse(format!("q must be an integer >= 2, got {q}")));
    }
    Ok(BigRational::from_integer(BigInt::from(q)))
}

fn parse_scheme(labels: Option<&str>, patterns: Option<&str>) -> Result<LabelScheme, Error> {
    match (labels, patterns) {
        (Some(_), Some(_)) => Err(Error::Parse(
            "give either --labels or --patterns, not both".into(),
        )),
        (Some(l), None) => LabelScheme::parse(l),
        (None, Some(p)) => Ok(LabelScheme::PatternComplement(PatternSet::parse(p)?)),
        (None, None) => Err(Error::Parse("a label scheme is required: --labels or --patterns".into())),
    }
}

fn parse_degree_vector(s: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad degree entry {x:?}")))
        })
        .collect()
}

fn require_positive_cutoff(cutoff: i64) -> Result<(), Error> {
    if cutoff < 0 {
        return Err(Error::Parse(format!("cutoff must be nonnegative, got {cutoff}")));
    }
    Ok(())
}

/// Rows "i<TAB>coefficient of [q^-i]"; signed decimal integers, no
/// separators, chosen to diff cleanly against table transcriptions.
fn divisor_table(d: &WittDivisor, rows_hint: Option<i64>) -> String {
    let lo = rows_hint.unwrap_or_else(|| -d.min_exp().unwrap_or(0)).max(0);
    let hi = (-d.max_exp().unwrap_or(0)).min(0);
    let mut out = String::from("i\tcoefficient of [q^-i]\n");
    for i in hi..=lo {
        let _ = writeln!(out, "{i}\t{}", d.coeff(-i));
    }
    out
}

fn divisor_csv(d: &WittDivisor, rows_hint: Option<i64>) -> String {
    let lo = rows_hint.unwrap_or_else(|| -d.min_exp().unwrap_or(0)).max(0);
    let hi = (-d.max_exp().unwrap_or(0)).min(0);
    let mut out = String::from("i,coefficient\n");
    for i in hi..=lo {
        let _ = writeln!(out, "{i},{}", d.coeff(-i));
    }
    out
}

fn divisor_json(d: &WittDivisor, extra: serde_json::Value) -> Result<String, Error> {
    let mut v = json!({ "divisor": d });
    if let (Some(obj), Some(add)) = (v.as_object_mut(), extra.as_object()) {
        for (k, val) in add {
            obj.insert(k.clone(), val.clone());
        }
    }
    serde_json::to_string_pretty(&v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Internal(e.to_string()))
}

fn render_divisor(
    d: &WittDivisor,
    format: Format,
    rows_hint: Option<i64>,
    extra: serde_json::Value,
) -> Result<String, Error> {
    match format {
        Format::Text => Ok(divisor_table(d, rows_hint)),
        Format::Csv => Ok(divisor_csv(d, rows_hint)),
        Format::Json => divisor_json(d, extra),
    }
}

fn cmd_table1(terms: u32, format: Format) -> Result<String, Error> {
    let a1 = variety("A1")?;
    let scheme = LabelScheme::FiniteConf { k: 2 };
    let limit = density_limit_with_degree(&a1, &scheme, terms as i64, None)?;
    render_divisor(
        &limit,
        format,
        Some(terms as i64),
        json!({ "command": "table1", "terms": terms }),
    )
}

fn cmd_table2(d1: u32, d2: u32, q: Option<u64>, format: Format) -> Result<String, Error> {
    let a1 = variety("A1")?;
    let scheme = LabelScheme::FiniteConf { k: 2 };
    let cutoff = (d1 + d2) as i64;
    let divisor = density_finite(&a1, &scheme, &[d1, d2], cutoff)?;
    let norms = match q {
        Some(q) => {
            let qr = rational(q)?;
            Some((
                format_sig15(&divisor.hadamard_norm(&qr)?),
                format_sig15(&divisor.pc_seminorm(&qr, 1)?),
            ))
        }
        None => None,
    };
    match format {
        Format::Text => {
            let mut out = divisor_table(&divisor, None);
            if let Some((h, pc)) = norms {
                let _ = writeln!(out, "hadamard_norm\t{h}");
                let _ = writeln!(out, "pc_seminorm_1\t{pc}");
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = divisor_csv(&divisor, None);
            if let Some((h, pc)) = norms {
                let _ = writeln!(out, "hadamard_norm,{h}");
                let _ = writeln!(out, "pc_seminorm_1,{pc}");
            }
            Ok(out)
        }
        Format::Json => {
            let extra = match norms {
                Some((h, pc)) => json!({
                    "command": "table2", "d1": d1, "d2": d2, "q": q,
                    "hadamard_norm": h, "pc_seminorm_1": pc,
                }),
                None => json!({ "command": "table2", "d1": d1, "d2": d2 }),
            };
            divisor_json(&divisor, extra)
        }
    }
}

fn cmd_mobius(patterns: &str, q: Option<u64>, dim: u32, format: Format) -> Result<String, Error> {
    let v = PatternSet::parse(patterns)?;
    let table = mobius_table(&v)?;
    let stats_q = match q {
        Some(q) => Some((q, pattern_stats(&v, &rational(q)?, dim)?)),
        None => None,
    };
    match format {
        Format::Json => {
            let mu: Vec<_> = table
                .nonzero()
                .map(|(n, val)| json!({ "n": n, "mu": val }))
                .collect();
            let mut v_json = json!({
                "command": "mobius",
                "patterns": v.vectors(),
                "dropped_dominated": v.removed_dominated(),
                "orthogonal": v.is_orthogonal(),
                "e": table.min_norm,
                "M": table.mu_abs_sum,
                "poset_size": table.poset_size,
                "mu": mu,
            });
            if let Some((q, s)) = stats_q {
                let obj = v_json.as_object_mut().unwrap();
                obj.insert("q".into(), json!(q));
                obj.insert("dim".into(), json!(dim));
                obj.insert("hadamard_criterion".into(), json!(s.hadamard_criterion));
            }
            serde_json::to_string_pretty(&v_json)
                .map(|mut s| {
                    s.push('\n');
                    s
                })
                .map_err(|e| Error::Internal(e.to_string()))
        }
        _ => {
            let mut out = String::new();
            if !v.removed_dominated().is_empty() {
                let _ = writeln!(
                    out,
                    "warning: dropped dominated patterns {:?}",
                    v.removed_dominated()
                );
            }
            let _ = writeln!(out, "patterns\t{:?}", v.vectors());
            let _ = writeln!(out, "orthogonal\t{}", v.is_orthogonal());
            let _ = writeln!(out, "nondegenerate\ttrue");
            let _ = writeln!(out, "e\t{}", table.min_norm);
            let _ = writeln!(out, "M\t{}", table.mu_abs_sum);
            let _ = writeln!(out, "poset_size\t{}", table.poset_size);
            let _ = writeln!(out, "mu (nonzero):");
            for (n, val) in table.nonzero() {
                let _ = writeln!(out, "mu{n:?}\t{val}");
            }
            if let Some((q, s)) = stats_q {
                let _ = writeln!(
                    out,
                    "criterion M < q^(e*dim)\t{} < {}^{} -> {}",
                    s.mu_abs_sum,
                    q,
                    s.min_norm * dim,
                    s.hadamard_criterion
                );
            }
            Ok(out)
        }
    }
}

fn cmd_density(
    variety_spec: &str,
    labels: Option<&str>,
    patterns: Option<&str>,
    d: &str,
    cutoff: i64,
    format: Format,
) -> Result<String, Error> {
    require_positive_cutoff(cutoff)?;
    let x = variety(variety_spec)?;
    let scheme = parse_scheme(labels, patterns)?;
    let dvec = parse_degree_vector(d)?;
    if dvec.len() != scheme.k() {
        return Err(Error::Parse(format!(
            "degree vector has {} entries but the label scheme has {} colors",
            dvec.len(),
            scheme.k()
        )));
    }
    let divisor = density_finite(&x, &scheme, &dvec, cutoff)?;
    render_divisor(
        &divisor,
        format,
        None,
        json!({ "command": "density", "variety": variety_spec, "d": dvec, "cutoff": cutoff }),
    )
}

fn cmd_limit(
    variety_spec: &str,
    labels: Option<&str>,
    patterns: Option<&str>,
    cutoff: i64,
    degree: Option<i64>,
    format: Format,
) -> Result<String, Error> {
    require_positive_cutoff(cutoff)?;
    let x = variety(variety_spec)?;
    let scheme = parse_scheme(labels, patterns)?;
    let divisor = density_limit_with_degree(&x, &scheme, cutoff, degree)?;
    render_divisor(
        &divisor,
        format,
        Some(cutoff),
        json!({ "command": "limit", "variety": variety_spec, "cutoff": cutoff }),
    )
}

fn cmd_theorem_a(
    variety_spec: &str,
    patterns: &str,
    cutoff: i64,
    degree: Option<i64>,
    format: Format,
) -> Result<String, Error> {
    require_positive_cutoff(cutoff)?;
    let x = variety(variety_spec)?;
    let v = PatternSet::parse(patterns)?;
    let scheme = LabelScheme::PatternComplement(v.clone());
    let lim = density_limit_with_degree(&x, &scheme, cutoff, degree)?;
    let closed = orthogonal_limit_closed_form(&x, &v, cutoff)?;
    let agree = lim == closed;
    match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "command": "theoremA",
            "variety": variety_spec,
            "patterns": v.vectors(),
            "cutoff": cutoff,
            "limit": lim,
            "closed_form": closed,
            "agree": agree,
        }))
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Internal(e.to_string())),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "limit\t{lim}");
            let _ = writeln!(out, "closed_form\t{closed}");
            let _ = writeln!(out, "agree\t{agree}");
            Ok(out)
        }
    }
}

fn cmd_theorem_b(
    variety_spec: &str,
    lambda: &str,
    d_max: u32,
    cutoff: i64,
    q: u64,
    format: Format,
) -> Result<String, Error> {
    require_positive_cutoff(cutoff)?;
    let x = variety(variety_spec)?;
    let lam = PartitionLambda::parse(lambda)?;
    let qr = rational(q)?;
    let (limit, rows) = theoremb_check(&x, &lam, d_max, cutoff, &qr)?;
    match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "command": "theoremB",
            "variety": variety_spec,
            "lambda": lam.parts(),
            "cutoff": cutoff,
            "q": q,
            "limit": limit,
            "rows": rows,
        }))
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Internal(e.to_string())),
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "limit\t{limit}");
            let _ = writeln!(out, "d\tweight_depth\tdepth_cap\thadamard_distance");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    r.d, r.weight_depth, r.depth_cap, r.hadamard_distance
                );
            }
            Ok(out)
        }
    }
}

fn cmd_zeta(
    variety_spec: &str,
    twist: i64,
    special: Option<i64>,
    cutoff: i64,
    format: Format,
) -> Result<String, Error> {
    let x = variety(variety_spec)?;
    let divisor = match special {
        Some(m) => {
            require_positive_cutoff(cutoff)?;
            zeta_special_value(&x, m, cutoff)?.tate_twist(twist)
        }
        None => x.zeta_divisor().tate_twist(twist),
    };
    match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{divisor}");
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("exp,coefficient\n");
            for (e, c) in divisor.iter().rev() {
                let _ = writeln!(out, "{e},{c}");
            }
            Ok(out)
        }
        Format::Json => divisor_json(
            &divisor,
            json!({ "command": "zeta", "variety": variety_spec, "twist": twist }),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_report(
    variety_spec: &str,
    labels: Option<&str>,
    patterns: Option<&str>,
    d: &str,
    q: u64,
    cutoff: i64,
    oracle: bool,
    format: Format,
) -> Result<String, Error> {
    require_positive_cutoff(cutoff)?;
    let x = variety(variety_spec)?;
    let scheme = parse_scheme(labels, patterns)?;
    let degrees: Vec<Vec<u32>> = d
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_degree_vector)
        .collect::<Result<_, _>>()?;
    for dv in &degrees {
        if dv.len() != scheme.k() {
            return Err(Error::Parse(format!(
                "degree vector {dv:?} does not match the {}-color label scheme",
                scheme.k()
            )));
        }
    }
    let qr = rational(q)?;
    let finite_label = match &scheme {
        LabelScheme::FiniteConf { k } => {
            Some((*k, finite_label_criterion(*k, &qr, x.dim())?))
        }
        _ => None,
    };
    let rows = convergence_report(&x, &scheme, &degrees, &qr, cutoff)?;
    let mut oracle_rows = Vec::new();
    if oracle {
        for dv in &degrees {
            let table = wittzeta::densities::zerocycle_series(&x, &scheme, dv)?;
            let class_count = table.coeff(dv)?.ghost(1)?.eval(&qr)?;
            let direct = point_count_oracle(&x, &scheme, dv, q)?;
            oracle_rows.push((dv.clone(), class_count.to_string(), direct.to_string()));
        }
    }
    match format {
        Format::Json => {
            let mut v = json!({
                "command": "report",
                "variety": variety_spec,
                "q": q,
                "cutoff": cutoff,
                "rows": rows,
            });
            if oracle {
                let obj = v.as_object_mut().unwrap();
                let or: Vec<_> = oracle_rows
                    .iter()
                    .map(|(dv, a, b)| json!({ "d": dv, "class_count": a, "oracle_count": b }))
                    .collect();
                obj.insert("oracle".into(), json!(or));
            }
            if let Some((k, ok)) = finite_label {
                let obj = v.as_object_mut().unwrap();
                obj.insert("finite_label_criterion".into(), json!(ok));
                obj.insert("k".into(), json!(k));
            }
            serde_json::to_string_pretty(&v)
                .map(|mut s| {
                    s.push('\n');
                    s
                })
                .map_err(|e| Error::Internal(e.to_string()))
        }
        _ => {
            let mut out =
                String::from("d\thadamard_distance\tweight_depth\tdepth_cap\tpc_gap_1\tpc_gap_2\tpc_gap_3\n");
            for r in &rows {
                let dtxt = r
                    .d
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(
                    out,
                    "{dtxt}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.hadamard_distance,
                    r.weight_depth,
                    r.depth_cap,
                    r.pc_gaps[0],
                    r.pc_gaps[1],
                    r.pc_gaps[2]
                );
            }
            for (dv, a, b) in &oracle_rows {
                let dtxt = dv
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "oracle\t{dtxt}\tclass={a}\tdirect={b}\tmatch={}", a == b);
            }
            if let Some((k, ok)) = finite_label {
                let _ = writeln!(out, "criterion k < q^dim\t{k} < {q}^{} -> {ok}", x.dim());
            }
            Ok(out)
        }
    }
}

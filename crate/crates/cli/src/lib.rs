//! The `sumsetlab` command line.

pub mod cache;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sumsetlab::constructions::{
    build_avoiding_sum_set, build_extremal_incomplete, build_extremal_zsf, build_zero_sum,
    build_zero_sum_nonzero,
};
use sumsetlab::formulas::{c_h_closed_form, predicted_c, predicted_z};
use sumsetlab::search::{
    exact_c, exact_c_unrestricted, exact_z, verify_range_with, CacheKey, EntryStatus, ExactCache,
};
use sumsetlab::{
    enumerate_groups_of_order, ConstructionError, ExactResult, GroupSpec, PredictedValue,
    SearchError, SearchOptions, WitnessReport,
};

use cache::FileCache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_REPRESENTABLE: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;
pub const EXIT_NODE_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "sumsetlab",
    version,
    about = "Weakly incomplete and zero-sum-free sets in finite abelian groups"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Where search results are cached; SUMSETLAB_CACHE takes precedence
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Stop each search after this many nodes
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Always report the lexicographically smallest maximal witness
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predicted value of C_h, Z_h or c_h, optionally with exact search
    Compute {
        #[arg(value_enum)]
        quantity: Quantity,
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        exact: bool,
    },
    /// Build and verify a witness set
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Check every prediction against exhaustive search up to an order
    Verify {
        #[arg(long)]
        max_order: usize,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Values of C_h or Z_h over a range of h
    Table {
        #[arg(value_enum)]
        quantity: TableQuantity,
        #[arg(long)]
        group: GroupSpec,
        /// Inclusive range such as 2..6
        #[arg(long, value_parser = parse_range)]
        h_range: (usize, usize),
        #[arg(long)]
        exact: bool,
    },
    /// List the abelian groups of an order
    Groups {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    #[value(name = "C")]
    BigC,
    #[value(name = "Z")]
    BigZ,
    #[value(name = "c")]
    SmallC,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableQuantity {
    #[value(name = "C")]
    BigC,
    #[value(name = "Z")]
    BigZ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Zsf,
    Incomplete,
    ZeroSum,
    ZeroSumNonzero,
    AvoidSum,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad start in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

/// An error carrying its exit code.
#[derive(Debug)]
struct Exit(i32, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Exit {
    fn from(err: E) -> Self {
        let err = err.into();
        Exit(exit_code_for(&err), err)
    }
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<ConstructionError>() {
        return match e {
            ConstructionError::NotRepresentable { .. }
            | ConstructionError::NoExactPrediction { .. } => EXIT_NOT_REPRESENTABLE,
            ConstructionError::VerificationFailed { .. } => EXIT_VERIFICATION_FAILED,
            _ => EXIT_USAGE,
        };
    }
    if let Some(e) = err.downcast_ref::<SearchError>() {
        return match e {
            SearchError::NodeLimitExceeded { .. } => EXIT_NODE_LIMIT,
            SearchError::WitnessCheckFailed { .. } => EXIT_VERIFICATION_FAILED,
            _ => EXIT_USAGE,
        };
    }
    EXIT_USAGE
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Diagnostics go to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Exit(code, err)) => {
            eprintln!("error: {err:#}");
            code
        }
    }
}

struct RunContext<'a> {
    global: &'a GlobalArgs,
    cache: Option<FileCache>,
}

impl RunContext<'_> {
    fn search_options(&self) -> SearchOptions {
        SearchOptions {
            node_limit: self.global.node_limit,
            thread_count: self.global.threads.max(1),
            deterministic: self.global.deterministic,
            ..SearchOptions::default()
        }
    }

    fn cached_search(
        &self,
        group: &GroupSpec,
        claim: &str,
        h: usize,
        hint: Option<usize>,
        run: impl Fn(&SearchOptions) -> Result<ExactResult, SearchError>,
    ) -> Result<ExactResult, SearchError> {
        let key = CacheKey {
            factors: group.factors().to_vec(),
            claim: claim.to_string(),
            param: h,
        };
        let limit = self.global.node_limit;
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.load(&key, limit)) {
            return Ok(hit);
        }
        let opts = SearchOptions {
            initial_lower_bound: hint,
            ..self.search_options()
        };
        let result = run(&opts)?;
        if let Some(c) = &self.cache {
            c.store(&key, limit, &result);
        }
        Ok(result)
    }
}

fn open_cache(global: &GlobalArgs) -> anyhow::Result<Option<FileCache>> {
    let dir = std::env::var_os("SUMSETLAB_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| global.cache_dir.clone());
    dir.map(|d| {
        FileCache::new(&d).with_context(|| format!("cannot use cache directory {}", d.display()))
    })
    .transpose()
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Exit> {
    let ctx = RunContext {
        global: &cli.global,
        cache: open_cache(&cli.global)?,
    };
    let format = cli.global.format;
    match &cli.command {
        Command::Compute {
            quantity,
            group,
            h,
            exact,
        } => compute(&ctx, out, format, *quantity, group, *h, *exact),
        Command::Construct { kind, group, h, m } => construct(out, format, *kind, group, *h, *m),
        Command::Verify {
            max_order,
            out: path,
        } => verify(&ctx, out, format, *max_order, path.as_ref()),
        Command::Table {
            quantity,
            group,
            h_range,
            exact,
        } => table(&ctx, out, format, *quantity, group, *h_range, *exact),
        Command::Groups { order } => groups(out, format, *order),
    }
}

fn check_fold(group: &GroupSpec, h: usize) -> anyhow::Result<()> {
    if h == 0 || h > group.order() {
        bail!("h must lie in 1..={} for {group}", group.order());
    }
    Ok(())
}

fn status_code(result: &ExactResult) -> i32 {
    if result.is_complete() {
        EXIT_OK
    } else {
        EXIT_NODE_LIMIT
    }
}

fn set_text(group: &GroupSpec, set: &sumsetlab::ElementSet) -> String {
    let items: Vec<String> = set.iter().map(|x| group.format_element(x)).collect();
    format!("{{{}}}", items.join(", "))
}

fn compute(
    ctx: &RunContext<'_>,
    out: &mut dyn Write,
    format: Format,
    quantity: Quantity,
    group: &GroupSpec,
    h: usize,
    exact: bool,
) -> Result<i32, Exit> {
    check_fold(group, h)?;
    let (name, predicted, source) = match quantity {
        Quantity::BigC => {
            let p = predicted_c(group, h)?;
            ("C", p.to_string(), p.source.describe().to_string())
        }
        Quantity::BigZ => {
            let p = predicted_z(group, h)?;
            ("Z", p.to_string(), p.source.describe().to_string())
        }
        Quantity::SmallC => (
            "c",
            c_h_closed_form(group.order(), h).to_string(),
            "divisor formula".to_string(),
        ),
    };
    let result = if exact {
        let hint = match quantity {
            Quantity::BigC => build_extremal_incomplete(group, h).ok().map(|w| w.size()),
            Quantity::BigZ => build_extremal_zsf(group, h).ok().map(|w| w.size()),
            Quantity::SmallC => None,
        };
        Some(ctx.cached_search(group, name, h, hint, |o| match quantity {
            Quantity::BigC => exact_c(group, h, o),
            Quantity::BigZ => exact_z(group, h, o),
            Quantity::SmallC => exact_c_unrestricted(group, h, o),
        })?)
    } else {
        None
    };

    match format {
        Format::Json => {
            let value = json!({
                "group": group.literal(),
                "quantity": name,
                "h": h,
                "predicted": predicted,
                "source": source,
                "exact": result,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        }
        Format::Csv => {
            writeln!(out, "group,quantity,h,predicted,source,exact,status")?;
            let (value, status) = match &result {
                Some(r) => (
                    r.value.to_string(),
                    if r.is_complete() {
                        "complete"
                    } else {
                        "aborted"
                    },
                ),
                None => (String::new(), ""),
            };
            writeln!(
                out,
                "{group},{name},{h},{predicted},\"{source}\",{value},{status}"
            )?;
        }
        Format::Text => {
            writeln!(
                out,
                "{name}_{h}({group}) predicted {predicted} (source: {source})"
            )?;
            if let Some(r) = &result {
                let tag = if r.is_complete() {
                    "exact"
                } else {
                    "best found before node limit"
                };
                writeln!(
                    out,
                    "{tag} {} witness {} ({} nodes)",
                    r.value,
                    set_text(group, &r.witness),
                    r.nodes_explored
                )?;
            }
        }
    }
    Ok(result.as_ref().map_or(EXIT_OK, status_code))
}

fn construct(
    out: &mut dyn Write,
    format: Format,
    kind: Kind,
    group: &GroupSpec,
    h: Option<usize>,
    m: Option<usize>,
) -> Result<i32, Exit> {
    let need = |v: Option<usize>, flag: &str| {
        v.with_context(|| format!("this construction needs --{flag}"))
    };
    let report: WitnessReport = match kind {
        Kind::Zsf => {
            let h = need(h, "h")?;
            check_fold(group, h)?;
            build_extremal_zsf(group, h)?
        }
        Kind::Incomplete => {
            let h = need(h, "h")?;
            check_fold(group, h)?;
            build_extremal_incomplete(group, h)?
        }
        Kind::ZeroSum => build_zero_sum(group, need(m, "m")?)?,
        Kind::ZeroSumNonzero => build_zero_sum_nonzero(group, need(m, "m")?)?,
        Kind::AvoidSum => build_avoiding_sum_set(group, need(m, "m")?)?,
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => {
            writeln!(out, "group,property,size,method,verified,set")?;
            writeln!(
                out,
                "{},{},{},{},{},\"{}\"",
                group,
                report.property,
                report.size(),
                report.method,
                report.verified,
                set_text(group, &report.set)
            )?;
        }
        Format::Text => {
            writeln!(out, "{}", set_text(group, &report.set))?;
            writeln!(
                out,
                "{} set of size {} in {group} ({}, {})",
                report.property,
                report.size(),
                report.method,
                if report.verified {
                    "verified"
                } else {
                    "NOT verified"
                }
            )?;
        }
    }
    Ok(if report.verified {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    })
}

fn verify(
    ctx: &RunContext<'_>,
    out: &mut dyn Write,
    format: Format,
    max_order: usize,
    path: Option<&PathBuf>,
) -> Result<i32, Exit> {
    let cache = ctx.cache.as_ref().map(|c| c as &dyn ExactCache);
    let report = verify_range_with(max_order, &ctx.search_options(), cache)?;
    let (pass, fail, aborted) = (
        report.count(EntryStatus::Pass),
        report.count(EntryStatus::Fail),
        report.count(EntryStatus::Aborted),
    );

    let mut summary = String::new();
    for e in report.failures() {
        let _ = writeln!(
            summary,
            "FAIL {} {} {}: predicted {}, exact {}: {}",
            e.group, e.claim, e.param, e.predicted, e.exact, e.detail
        );
    }
    if fail == 0 && aborted == 0 {
        let _ = writeln!(
            summary,
            "all claims pass ({pass} entries, orders 2..={max_order})"
        );
    } else {
        let _ = writeln!(summary, "{pass} pass, {fail} fail, {aborted} aborted");
    }

    let body = match format {
        Format::Json => report.to_json_lines(),
        Format::Csv => report.to_csv_summary(),
        Format::Text => summary.clone(),
    };
    match path {
        Some(p) => {
            std::fs::write(p, &body).with_context(|| format!("cannot write {}", p.display()))?;
            out.write_all(summary.as_bytes())?;
        }
        None => out.write_all(body.as_bytes())?,
    }
    Ok(if fail > 0 {
        EXIT_VERIFICATION_FAILED
    } else if aborted > 0 {
        EXIT_NODE_LIMIT
    } else {
        EXIT_OK
    })
}

struct Row {
    h: usize,
    predicted: PredictedValue,
    exact: Option<ExactResult>,
}

fn table(
    ctx: &RunContext<'_>,
    out: &mut dyn Write,
    format: Format,
    quantity: TableQuantity,
    group: &GroupSpec,
    (lo, hi): (usize, usize),
    exact: bool,
) -> Result<i32, Exit> {
    if lo == 0 || hi > group.order() {
        return Err(
            anyhow::anyhow!("h range must lie in 1..={} for {group}", group.order()).into(),
        );
    }
    let mut rows = Vec::new();
    for h in lo..=hi {
        let (predicted, built) = match quantity {
            TableQuantity::BigC => (predicted_c(group, h)?, build_extremal_incomplete(group, h)),
            TableQuantity::BigZ => (predicted_z(group, h)?, build_extremal_zsf(group, h)),
        };
        let exact = if exact {
            let hint = built.ok().map(|w| w.size());
            Some(match quantity {
                TableQuantity::BigC => {
                    ctx.cached_search(group, "C", h, hint, |o| exact_c(group, h, o))?
                }
                TableQuantity::BigZ => {
                    ctx.cached_search(group, "Z", h, hint, |o| exact_z(group, h, o))?
                }
            })
        } else {
            None
        };
        rows.push(Row {
            h,
            predicted,
            exact,
        });
    }

    let source = |p: &PredictedValue| {
        if p.exact {
            serde_json::to_value(p.source)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default()
        } else {
            "bounds".to_string()
        }
    };
    let matches = |r: &Row| {
        r.exact
            .as_ref()
            .filter(|e| e.is_complete())
            .map(|e| r.predicted.admits(e.value))
    };
    match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "group": group.literal(),
                        "h": r.h,
                        "predicted": r.predicted.to_string(),
                        "source": source(&r.predicted),
                        "exact": r.exact.as_ref().map(|e| e.value),
                        "complete": r.exact.as_ref().map(|e| e.is_complete()),
                        "match": matches(r),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&items)?)?;
        }
        Format::Csv | Format::Text => {
            writeln!(out, "group,h,predicted,source,exact,match")?;
            for r in &rows {
                let exact = r
                    .exact
                    .as_ref()
                    .map_or(String::new(), |e| e.value.to_string());
                let m = matches(r).map_or(String::new(), |b| b.to_string());
                writeln!(
                    out,
                    "{group},{},{},{},{exact},{m}",
                    r.h,
                    r.predicted,
                    source(&r.predicted)
                )?;
            }
        }
    }
    let code = if rows.iter().any(|r| matches(r) == Some(false)) {
        EXIT_VERIFICATION_FAILED
    } else if rows
        .iter()
        .any(|r| r.exact.as_ref().is_some_and(|e| !e.is_complete()))
    {
        EXIT_NODE_LIMIT
    } else {
        EXIT_OK
    };
    Ok(code)
}

fn groups(out: &mut dyn Write, format: Format, order: usize) -> Result<i32, Exit> {
    let list = enumerate_groups_of_order(order)?;
    match format {
        Format::Json => {
            let items: Vec<_> = list
                .iter()
                .map(|g| {
                    json!({
                        "group": g.literal(),
                        "factors": g.factors(),
                        "exponent": g.exponent(),
                        "rank": g.rank(),
                        "involutions": g.involution_order(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&items)?)?;
        }
        Format::Csv => {
            writeln!(out, "group,factors,exponent,rank,involutions")?;
            for g in &list {
                let factors: Vec<String> = g.factors().iter().map(|d| d.to_string()).collect();
                writeln!(
                    out,
                    "{g},{},{},{},{}",
                    factors.join(" "),
                    g.exponent(),
                    g.rank(),
                    g.involution_order()
                )?;
            }
        }
        Format::Text => {
            for g in &list {
                writeln!(out, "{g}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

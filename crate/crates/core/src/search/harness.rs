//! Cross-checks every prediction and construction against exhaustive search
//! over all groups up to a given order.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_avoiding_sum_set, build_extremal_incomplete, build_extremal_zsf, build_zero_sum,
    build_zero_sum_nonzero, ConstructionError, WitnessReport,
};
use crate::formulas::{
    avoiding_sum_exists, c_h_closed_form, exact_clauses_c, exact_clauses_z, predicted_c,
    predicted_z, zero_sum_exists, zero_sum_nonzero_exists, PredictedValue,
};
use crate::group::{enumerate_groups_of_order, GroupSpec};

use super::{
    avoiding_sum_oracle, exact_c, exact_c_unrestricted, exact_z, max_weak_sidon_with,
    zero_sum_subset_oracle, ExactResult, SearchError, SearchOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `C_h` against its prediction and the extremal construction
    C,
    /// `Z_h` likewise
    Z,
    /// `c_h` against the divisor formula
    #[serde(rename = "c_unrestricted")]
    CUnrestricted,
    ZAtMostC,
    /// `Z_h >= h+1` exactly when an `(h+1)`-set avoids its own sum
    ZBump,
    /// `C_{m-h} = m` whenever `C_{h+1} <= m <= C_h`
    Interpolation,
    /// `c_h` equal across groups of the same order
    OrderInvariance,
    ZeroSumNonzero,
    ZeroSum,
    AvoidSum,
    WeakSidon,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::C => "C",
            Claim::Z => "Z",
            Claim::CUnrestricted => "c",
            Claim::ZAtMostC => "z_at_most_c",
            Claim::ZBump => "z_bump",
            Claim::Interpolation => "interpolation",
            Claim::OrderInvariance => "order_invariance",
            Claim::ZeroSumNonzero => "zero_sum_nonzero",
            Claim::ZeroSum => "zero_sum",
            Claim::AvoidSum => "avoid_sum",
            Claim::WeakSidon => "weak_sidon",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    Fail,
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationEntry {
    pub group: String,
    pub order: usize,
    pub claim: Claim,
    /// `h` or `m`; 0 where the claim has no parameter
    pub param: usize,
    pub predicted: String,
    pub exact: String,
    pub status: EntryStatus,
    /// empty on success; otherwise what went wrong, with witnesses
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_order: usize,
    pub entries: Vec<VerificationEntry>,
}

impl VerificationReport {
    pub fn count(&self, status: EntryStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == EntryStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == EntryStatus::Fail)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entries serialize"));
            out.push('\n');
        }
        out
    }

    /// Per group and claim: how many entries passed, failed, aborted.
    pub fn to_csv_summary(&self) -> String {
        let mut rows: Vec<(usize, &str, Claim, [usize; 3])> = Vec::new();
        for e in &self.entries {
            let slot = match e.status {
                EntryStatus::Pass => 0,
                EntryStatus::Fail => 1,
                EntryStatus::Aborted => 2,
            };
            match rows.iter_mut().find(|r| r.1 == e.group && r.2 == e.claim) {
                Some(r) => r.3[slot] += 1,
                None => {
                    let mut counts = [0; 3];
                    counts[slot] = 1;
                    rows.push((e.order, &e.group, e.claim, counts));
                }
            }
        }
        let mut out = String::from("group,order,claim,entries,pass,fail,aborted\n");
        for (order, group, claim, [p, f, a]) in rows {
            let _ = writeln!(out, "{group},{order},{claim},{},{p},{f},{a}", p + f + a);
        }
        out
    }
}

/// Identifies one cached search result.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub factors: Vec<usize>,
    /// `C`, `Z`, `c` or `weak_sidon`
    pub claim: String,
    pub param: usize,
}

/// Storage for search results, so long sweeps can resume.
pub trait ExactCache: Sync {
    /// A stored result usable under `node_limit`, if any.
    fn load(&self, key: &CacheKey, node_limit: Option<u64>) -> Option<ExactResult>;
    fn store(&self, key: &CacheKey, node_limit: Option<u64>, result: &ExactResult);
}

pub fn verify_range(
    max_order: usize,
    opts: &SearchOptions,
) -> Result<VerificationReport, SearchError> {
    verify_range_with(max_order, opts, None)
}

/// Runs every claim on every group of order `2..=max_order`. Individual
/// searches are sequential; `opts.thread_count` spreads groups and folds over
/// threads instead.
pub fn verify_range_with(
    max_order: usize,
    opts: &SearchOptions,
    cache: Option<&dyn ExactCache>,
) -> Result<VerificationReport, SearchError> {
    if max_order < 2 {
        return Err(SearchError::InvalidOption("max_order must be at least 2"));
    }
    let groups: Vec<GroupSpec> = (2..=max_order)
        .flat_map(|n| enumerate_groups_of_order(n).expect("n >= 2"))
        .collect();
    if opts.node_limit.is_none() && max_order > super::UNBOUNDED_ORDER_LIMIT {
        return Err(SearchError::NodeLimitExceeded { order: max_order });
    }

    let inner = SearchOptions {
        thread_count: 1,
        normalize_translation: false,
        initial_lower_bound: None,
        ..opts.clone()
    };
    let runner = Runner { opts: inner, cache };

    let mut jobs = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        for h in 1..=g.order() {
            jobs.push((gi, Job::Fold(h)));
        }
        jobs.push((gi, Job::Counting));
        jobs.push((gi, Job::Sidon));
    }

    let work = |&(gi, job): &(usize, Job)| -> Result<JobOutput, SearchError> {
        runner.run(&groups[gi], job)
    };
    let outputs: Vec<JobOutput> = if opts.thread_count <= 1 {
        jobs.iter().map(work).collect::<Result<_, _>>()?
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.thread_count)
            .build()
            .expect("thread pool");
        pool.install(|| jobs.par_iter().map(work).collect::<Result<_, _>>())?
    };

    // outputs are in job order: grouped by group, folds ascending
    let mut entries = Vec::new();
    let mut c_values: Vec<Vec<Option<usize>>> = vec![Vec::new(); groups.len()];
    let mut cu_values: Vec<Vec<Option<usize>>> = vec![Vec::new(); groups.len()];
    for ((gi, _), out) in jobs.iter().zip(outputs) {
        if let Some(v) = out.c_value {
            c_values[*gi].push(v);
            cu_values[*gi].push(out.cu_value.flatten());
        }
        entries.extend(out.entries);
    }
    for (gi, g) in groups.iter().enumerate() {
        entries.extend(interpolation_entries(g, &c_values[gi]));
    }
    entries.extend(order_invariance_entries(&groups, &cu_values));
    // stable: by order, then group position, then claim, then parameter
    let position = |name: &str| {
        groups
            .iter()
            .position(|g| g.literal() == name)
            .unwrap_or(usize::MAX)
    };
    entries.sort_by_key(|e| (e.order, position(&e.group), e.claim, e.param));

    Ok(VerificationReport { max_order, entries })
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Fold(usize),
    Counting,
    Sidon,
}

#[derive(Default)]
struct JobOutput {
    entries: Vec<VerificationEntry>,
    /// for fold jobs: `Some(exact C_h)` when complete, `Some(None)` if aborted
    c_value: Option<Option<usize>>,
    cu_value: Option<Option<usize>>,
}

struct Runner<'c> {
    opts: SearchOptions,
    cache: Option<&'c dyn ExactCache>,
}

fn entry(g: &GroupSpec, claim: Claim, param: usize) -> VerificationEntry {
    VerificationEntry {
        group: g.literal(),
        order: g.order(),
        claim,
        param,
        predicted: String::new(),
        exact: String::new(),
        status: EntryStatus::Pass,
        detail: String::new(),
    }
}

fn fail(e: &mut VerificationEntry, why: String) {
    e.status = EntryStatus::Fail;
    if !e.detail.is_empty() {
        e.detail.push_str("; ");
    }
    e.detail.push_str(&why);
}

fn witness_text(r: &ExactResult) -> String {
    format!("{:?}", r.witness.to_vec())
}

impl Runner<'_> {
    fn search(
        &self,
        g: &GroupSpec,
        claim: &str,
        param: usize,
        hint: Option<usize>,
        run: impl Fn(&SearchOptions) -> Result<ExactResult, SearchError>,
    ) -> Result<ExactResult, SearchError> {
        let key = CacheKey {
            factors: g.factors().to_vec(),
            claim: claim.to_string(),
            param,
        };
        if let Some(hit) = self.cache.and_then(|c| c.load(&key, self.opts.node_limit)) {
            if hit.witness.universe() == g.order() {
                return Ok(hit);
            }
        }
        let opts = SearchOptions {
            initial_lower_bound: hint,
            ..self.opts.clone()
        };
        let result = run(&opts)?;
        if let Some(c) = self.cache {
            c.store(&key, self.opts.node_limit, &result);
        }
        Ok(result)
    }

    fn run(&self, g: &GroupSpec, job: Job) -> Result<JobOutput, SearchError> {
        match job {
            Job::Fold(h) => self.fold(g, h),
            Job::Counting => Ok(JobOutput {
                entries: counting_entries(g),
                ..JobOutput::default()
            }),
            Job::Sidon => self.sidon(g),
        }
    }

    fn fold(&self, g: &GroupSpec, h: usize) -> Result<JobOutput, SearchError> {
        let n = g.order();
        let mut out = JobOutput::default();

        let pc = predicted_c(g, h).expect("1 <= h <= n");
        let built_c = build_extremal_incomplete(g, h);
        let hint = hint_from(&built_c, &pc);
        let c = self.search(g, "C", h, hint, |o| exact_c(g, h, o))?;
        out.entries.push(compare_fold(
            g,
            Claim::C,
            h,
            &pc,
            &c,
            exact_clauses_c(g, h).expect("1 <= h <= n"),
            &built_c,
        ));
        out.c_value = Some(c.is_complete().then_some(c.value));

        let pz = predicted_z(g, h).expect("1 <= h <= n");
        let built_z = build_extremal_zsf(g, h);
        let hint = hint_from(&built_z, &pz);
        let z = self.search(g, "Z", h, hint, |o| exact_z(g, h, o))?;
        out.entries.push(compare_fold(
            g,
            Claim::Z,
            h,
            &pz,
            &z,
            exact_clauses_z(g, h).expect("1 <= h <= n"),
            &built_z,
        ));

        let both = c.is_complete() && z.is_complete();
        let mut e = entry(g, Claim::ZAtMostC, h);
        e.predicted = "Z <= C".into();
        e.exact = format!("Z={} C={}", z.value, c.value);
        if !both {
            e.status = EntryStatus::Aborted;
        } else if z.value > c.value {
            fail(
                &mut e,
                format!(
                    "zero-sum-free witness {} is larger than C",
                    witness_text(&z)
                ),
            );
        }
        out.entries.push(e);

        if h < n {
            let mut e = entry(g, Claim::ZBump, h);
            let avoid = avoiding_sum_exists(g, h + 1).expect("1 <= h+1 <= n");
            e.predicted = format!("Z>h: {avoid}");
            e.exact = format!("Z={}", z.value);
            if !z.is_complete() {
                e.status = EntryStatus::Aborted;
            } else if (z.value > h) != avoid {
                fail(
                    &mut e,
                    format!(
                        "Z={} but avoiding_sum_exists(m={}) is {avoid}",
                        z.value,
                        h + 1
                    ),
                );
            }
            out.entries.push(e);
        }

        let cu = self.search(g, "c", h, None, |o| exact_c_unrestricted(g, h, o))?;
        let closed = c_h_closed_form(n, h);
        let mut e = entry(g, Claim::CUnrestricted, h);
        e.predicted = closed.to_string();
        e.exact = cu.value.to_string();
        if !cu.is_complete() {
            e.status = EntryStatus::Aborted;
        } else if cu.value != closed {
            fail(&mut e, format!("search witness {}", witness_text(&cu)));
        }
        out.entries.push(e);
        out.cu_value = Some(cu.is_complete().then_some(cu.value));
        Ok(out)
    }

    fn sidon(&self, g: &GroupSpec) -> Result<JobOutput, SearchError> {
        let n = g.order();
        let s = self.search(g, "weak_sidon", 0, None, |o| max_weak_sidon_with(g, o))?;
        let mut e = entry(g, Claim::WeakSidon, 0);
        e.exact = s.value.to_string();
        // in an elementary abelian 2-group, weakly 4-zero-sum-free = weak Sidon
        let two_group = g.exponent() == 2 && n >= 4;
        if two_group {
            let z4 = self.search(g, "Z", 4, None, |o| exact_z(g, 4, o))?;
            e.predicted = format!("Z_4={}", z4.value);
            if !(s.is_complete() && z4.is_complete()) {
                e.status = EntryStatus::Aborted;
            } else if s.value != z4.value {
                fail(
                    &mut e,
                    format!(
                        "sidon witness {}, Z_4 witness {}",
                        witness_text(&s),
                        witness_text(&z4)
                    ),
                );
            }
        } else {
            e.predicted = "m(m-1)/2 <= n".into();
            if !s.is_complete() {
                e.status = EntryStatus::Aborted;
            }
        }
        if s.value * s.value.saturating_sub(1) / 2 > n {
            fail(
                &mut e,
                format!("witness {} beats the pair-count bound", witness_text(&s)),
            );
        }
        Ok(JobOutput {
            entries: vec![e],
            ..JobOutput::default()
        })
    }
}

fn hint_from(
    built: &Result<WitnessReport, ConstructionError>,
    predicted: &PredictedValue,
) -> Option<usize> {
    match built {
        Ok(w) if w.verified => Some(w.size()),
        _ => Some(predicted.lower),
    }
}

fn compare_fold(
    g: &GroupSpec,
    claim: Claim,
    h: usize,
    predicted: &PredictedValue,
    exact: &ExactResult,
    clauses: Vec<PredictedValue>,
    built: &Result<WitnessReport, ConstructionError>,
) -> VerificationEntry {
    let mut e = entry(g, claim, h);
    e.predicted = format!("{predicted} ({})", predicted.source.describe());
    e.exact = exact.value.to_string();
    if !exact.is_complete() {
        e.status = EntryStatus::Aborted;
        e.detail = format!("node limit hit; best so far {}", witness_text(exact));
    } else if !predicted.admits(exact.value) {
        fail(&mut e, format!("search witness {}", witness_text(exact)));
    }
    for other in &clauses {
        if other.lower != clauses[0].lower {
            fail(
                &mut e,
                format!(
                    "clauses {:?} and {:?} disagree",
                    clauses[0].source, other.source
                ),
            );
        }
    }
    match built {
        Ok(w) => {
            if !w.verified || !w.recheck() {
                fail(
                    &mut e,
                    format!("construction {} fails its property", w.method),
                );
            }
            if Some(w.size()) != predicted.value() {
                fail(
                    &mut e,
                    format!("construction {} has size {}", w.method, w.size()),
                );
            }
        }
        Err(ConstructionError::NoExactPrediction { .. }) if !predicted.exact => {}
        Err(err) => fail(&mut e, format!("construction failed: {err}")),
    }
    e
}

fn counting_entries(g: &GroupSpec) -> Vec<VerificationEntry> {
    let n = g.order();
    let mut entries = Vec::new();
    let mut check = |claim: Claim,
                     m: usize,
                     predicted: bool,
                     oracle: bool,
                     built: Result<WitnessReport, ConstructionError>| {
        let mut e = entry(g, claim, m);
        e.predicted = predicted.to_string();
        e.exact = oracle.to_string();
        if predicted != oracle {
            fail(&mut e, "formula and oracle disagree".into());
        }
        match built {
            Ok(w) if !predicted => fail(
                &mut e,
                format!(
                    "builder produced {:?} for a predicted non-case",
                    w.set.to_vec()
                ),
            ),
            Ok(w) if !w.verified || !w.recheck() || w.size() != m => fail(
                &mut e,
                format!(
                    "builder {} produced a bad set {:?}",
                    w.method,
                    w.set.to_vec()
                ),
            ),
            Ok(_) => {}
            Err(ConstructionError::NotRepresentable { .. }) if !predicted => {}
            Err(err) => fail(&mut e, format!("builder failed: {err}")),
        }
        entries.push(e);
    };
    for m in 1..n {
        check(
            Claim::ZeroSumNonzero,
            m,
            zero_sum_nonzero_exists(g, m).expect("m in range"),
            zero_sum_subset_oracle(g, m, true),
            build_zero_sum_nonzero(g, m),
        );
    }
    for m in 1..=n {
        check(
            Claim::ZeroSum,
            m,
            zero_sum_exists(g, m).expect("m in range"),
            zero_sum_subset_oracle(g, m, false),
            build_zero_sum(g, m),
        );
        check(
            Claim::AvoidSum,
            m,
            avoiding_sum_exists(g, m).expect("m in range"),
            avoiding_sum_oracle(g, m),
            build_avoiding_sum_set(g, m),
        );
    }
    entries
}

/// `c_values[h-1]` is `C_h`, `None` where the search was cut short.
fn interpolation_entries(g: &GroupSpec, c_values: &[Option<usize>]) -> Vec<VerificationEntry> {
    let n = g.order();
    let mut entries = Vec::new();
    for h in 1..n {
        let (Some(hi), Some(lo)) = (c_values[h - 1], c_values[h]) else {
            continue;
        };
        for m in lo.max(h + 1)..=hi {
            let k = m - h;
            if k == 0 || k > n {
                continue;
            }
            let mut e = entry(g, Claim::Interpolation, h);
            e.predicted = format!("C_{k}={m}");
            match c_values[k - 1] {
                Some(v) => {
                    e.exact = format!("C_{k}={v}");
                    if v != m {
                        fail(&mut e, format!("C_{}={lo} <= {m} <= C_{h}={hi}", h + 1));
                    }
                }
                None => e.status = EntryStatus::Aborted,
            }
            entries.push(e);
        }
    }
    entries
}

fn order_invariance_entries(
    groups: &[GroupSpec],
    cu_values: &[Vec<Option<usize>>],
) -> Vec<VerificationEntry> {
    let mut entries = Vec::new();
    let mut start = 0;
    while start < groups.len() {
        let n = groups[start].order();
        let end = start
            + groups[start..]
                .iter()
                .take_while(|g| g.order() == n)
                .count();
        if end - start >= 2 {
            for h in 1..=n {
                let values: Vec<Option<usize>> =
                    (start..end).map(|i| cu_values[i][h - 1]).collect();
                let mut e = entry(&groups[start], Claim::OrderInvariance, h);
                e.predicted = "equal across groups".into();
                e.exact = values
                    .iter()
                    .map(|v| v.map_or("?".into(), |v| v.to_string()))
                    .collect::<Vec<_>>()
                    .join("/");
                if values.iter().any(Option::is_none) {
                    e.status = EntryStatus::Aborted;
                } else if values.windows(2).any(|w| w[0] != w[1]) {
                    fail(
                        &mut e,
                        "c_h differs between groups of the same order".into(),
                    );
                }
                entries.push(e);
            }
        }
        start = end;
    }
    entries
}

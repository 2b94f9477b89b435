//! Batch surveys of parent and altan nullities over patch families.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bec::boundary_edge_code;
use crate::cache::{cache_load_or_invalidate, cache_store, CacheError, CacheKey};
use crate::generators::{convex_specs, par_filter_map_family, Family, GeneratorError, DEFAULT_CAP};
use crate::kernel::{special_vector, verify_iterated_stability, ExcessReport, KernelError, Parity};
use crate::lattice::Polyhex;
use crate::linalg::nullity;
use crate::patch::{altan_of_patch, face_census, parity_check, PatchError, PlanarPatch};
use crate::planar_code::IngestError;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Ingestion(#[from] IngestError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("instance {instance}: {source}")]
    Patch { instance: String, source: PatchError },
    #[error("theorem violation at {instance}: {detail}")]
    Violation {
        instance: String,
        detail: String,
        dump: String,
    },
    #[error("survey produced no instances")]
    EmptyTable,
    #[error("the {0} family is not generated; supply its patches as input")]
    NotGenerated(SurveyFamily),
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error("malformed table: {0}")]
    Table(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurveyFamily {
    Benzenoid,
    Catafused,
    Convex,
    Ingested,
}

impl SurveyFamily {
    pub fn name(self) -> &'static str {
        match self {
            SurveyFamily::Benzenoid => "benzenoid",
            SurveyFamily::Catafused => "catafused",
            SurveyFamily::Convex => "convex",
            SurveyFamily::Ingested => "ingested",
        }
    }

    fn is_benzenoid(self) -> bool {
        self != SurveyFamily::Ingested
    }
}

impl fmt::Display for SurveyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurveyFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "benzenoid" => Ok(SurveyFamily::Benzenoid),
            "catafused" => Ok(SurveyFamily::Catafused),
            "convex" => Ok(SurveyFamily::Convex),
            "ingested" => Ok(SurveyFamily::Ingested),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// One surveyed parent patch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub family: SurveyFamily,
    /// Boundary edge code for benzenoids, record index for ingested patches.
    pub id: String,
    /// Bounded face counts of the parent by length.
    pub faces: BTreeMap<usize, usize>,
    pub order: usize,
    pub h: usize,
    pub h_parity: Parity,
    pub parent_nullity: usize,
    pub altan_nullity: usize,
    /// False when the odd-h shortcut supplied `altan_nullity`.
    pub altan_computed: bool,
    pub excess: i64,
    pub bay: Option<usize>,
}

impl SurveyRecord {
    pub fn size(&self) -> usize {
        self.faces.values().sum()
    }

    pub fn column(&self) -> ColumnKey {
        ColumnKey {
            h_parity: self.h_parity,
            parent_nullity: self.parent_nullity,
            altan_nullity: self.altan_nullity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyOptions {
    pub workers: usize,
    /// Compute altan nullity for odd `h` too.
    pub no_shortcut: bool,
    pub cap: usize,
    /// Percentage of even-`h` instances given the iterated-altan check.
    pub spot_check_percent: u32,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            workers: 1,
            no_shortcut: false,
            cap: DEFAULT_CAP,
            spot_check_percent: 1,
        }
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn violation(id: &str, patch: &PlanarPatch, detail: String) -> SurveyError {
    SurveyError::Violation {
        instance: id.to_string(),
        detail,
        dump: serde_json::to_string(&patch.to_document()).unwrap_or_default(),
    }
}

/// Nullities of a patch and of its altan on the natural attachment set,
/// with every face, bay and parity identity checked on the way.
pub fn evaluate_patch(
    family: SurveyFamily,
    id: &str,
    patch: &PlanarPatch,
    opts: &SurveyOptions,
) -> Result<SurveyRecord, SurveyError> {
    let wrap = |source: PatchError| SurveyError::Patch {
        instance: id.to_string(),
        source,
    };
    let pair = patch.altan_pair().map_err(wrap)?;
    let h = pair.h();
    let h_parity = Parity::of(h);
    let altan = altan_of_patch(patch).map_err(wrap)?;
    face_census(patch, &altan).map_err(|e| violation(id, patch, e.to_string()))?;
    let profile = patch.boundary_profile();
    if family.is_benzenoid() && !profile.satisfies_bay_identity() {
        return Err(violation(id, patch, format!("n22 = {} but b = {}", profile.n22, profile.b)));
    }
    if family == SurveyFamily::Convex && profile.b != 0 {
        return Err(violation(id, patch, format!("convex instance has bay number {}", profile.b)));
    }
    match parity_check(patch) {
        Ok(true) | Err(PatchError::NotBipartite) => {}
        Ok(false) => return Err(violation(id, patch, "nullity parity differs from h".into())),
        Err(e) => return Err(wrap(e)),
    }
    let parent_nullity = nullity(patch.graph());
    let altan_computed = h_parity == Parity::Even || opts.no_shortcut;
    let altan_nullity = if altan_computed {
        nullity(altan.graph())
    } else {
        parent_nullity
    };
    let report = ExcessReport {
        parent_nullity,
        altan_nullity,
        excess: altan_nullity as i64 - parent_nullity as i64,
        h_parity,
    };
    report
        .check_window()
        .map_err(|e| violation(id, patch, e.to_string()))?;
    if h_parity == Parity::Even {
        let next = pair.altan().map_err(|e| wrap(e.into()))?;
        special_vector(&next).map_err(|e| violation(id, patch, e.to_string()))?;
        if fnv1a(id) % 100 < opts.spot_check_percent as u64 {
            match verify_iterated_stability(&pair, 2) {
                Ok(true) => {}
                Ok(false) => return Err(violation(id, patch, "nullity of altan^2 differs".into())),
                Err(e) => return Err(violation(id, patch, e.to_string())),
            }
        }
    }
    Ok(SurveyRecord {
        family,
        id: id.to_string(),
        faces: patch.face_lengths(),
        order: patch.order(),
        h,
        h_parity,
        parent_nullity,
        altan_nullity,
        altan_computed,
        excess: report.excess,
        bay: family.is_benzenoid().then_some(profile.b),
    })
}

/// A benzenoid instance: its canonical boundary code and patch.
pub fn benzenoid_instance(p: &Polyhex) -> Result<(String, PlanarPatch), PatchError> {
    let patch = p.to_patch()?;
    let code = boundary_edge_code(&patch)?.to_string();
    Ok((code, patch))
}

/// Instances of a generated family with `eps` hexagons, in code order.
pub fn family_instances(
    family: SurveyFamily,
    eps: usize,
    cap: usize,
) -> Result<Vec<(String, PlanarPatch)>, SurveyError> {
    let build = |p: &Polyhex| benzenoid_instance(p).map_err(|source| SurveyError::Patch {
        instance: format!("{:?}", p.cells()),
        source,
    });
    let polyhexes = match family {
        SurveyFamily::Benzenoid | SurveyFamily::Catafused => {
            let fam = if family == SurveyFamily::Benzenoid {
                Family::Benzenoid
            } else {
                Family::Catafused
            };
            par_filter_map_family(eps, fam, cap, |p| Some(p.clone()))?
        }
        SurveyFamily::Convex => convex_specs(eps as u64)
            .into_iter()
            .filter(|s| s.hexagons() == eps as u64)
            .map(|s| s.polyhex())
            .collect(),
        SurveyFamily::Ingested => return Err(SurveyError::NotGenerated(family)),
    };
    let mut out: Vec<(String, PlanarPatch)> = polyhexes.par_iter().map(build).collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, SurveyError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SurveyError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn evaluate_all(
    family: SurveyFamily,
    instances: &[(String, PlanarPatch)],
    opts: &SurveyOptions,
) -> Result<Vec<SurveyRecord>, SurveyError> {
    instances
        .par_iter()
        .map(|(id, patch)| evaluate_patch(family, id, patch, opts))
        .collect()
}

/// Result of a survey run.
#[derive(Debug, Clone, PartialEq)]
pub struct Survey {
    pub table: SurveyTable,
    pub records: Vec<SurveyRecord>,
    /// Sizes served from the cache.
    pub cache_hits: usize,
}

/// Surveys a generated family over a range of hexagon counts.
///
/// The catafused family starts at two hexagons: benzene has no fused ring,
/// so its row is left empty.
pub fn run_survey(
    family: SurveyFamily,
    sizes: RangeInclusive<usize>,
    opts: &SurveyOptions,
    cache_dir: Option<&PathBuf>,
) -> Result<Survey, SurveyError> {
    if family == SurveyFamily::Ingested {
        return Err(SurveyError::NotGenerated(family));
    }
    let first = if family == SurveyFamily::Catafused {
        (*sizes.start()).max(2)
    } else {
        (*sizes.start()).max(1)
    };
    in_pool(opts.workers, || {
        let mut records = Vec::new();
        let mut cache_hits = 0;
        for eps in first..=*sizes.end() {
            let instances = family_instances(family, eps, opts.cap)?;
            let ids: Vec<&str> = instances.iter().map(|(id, _)| id.as_str()).collect();
            let key = CacheKey::new(family.name(), eps, &ids);
            if let Some(dir) = cache_dir {
                if let Some(batch) = cache_load_or_invalidate::<Vec<SurveyRecord>>(dir, &key) {
                    cache_hits += 1;
                    records.extend(batch);
                    continue;
                }
            }
            let batch = evaluate_all(family, &instances, opts)?;
            if let Some(dir) = cache_dir {
                cache_store(dir, &key, &batch)?;
            }
            records.extend(batch);
        }
        let table = SurveyTable::from_records(family.name(), &records)?;
        Ok(Survey {
            table,
            records,
            cache_hits,
        })
    })?
}

/// Surveys externally supplied patches under the given ids.
pub fn run_ingested_survey(
    instances: &[(String, PlanarPatch)],
    opts: &SurveyOptions,
) -> Result<Survey, SurveyError> {
    in_pool(opts.workers, || {
        let records = evaluate_all(SurveyFamily::Ingested, instances, opts)?;
        let table = SurveyTable::from_records(SurveyFamily::Ingested.name(), &records)?;
        Ok(Survey {
            table,
            records,
            cache_hits: 0,
        })
    })?
}

/// Which records an extremal search looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalPredicate {
    Excess(i64),
    Jump { parent: usize, altan: usize },
}

impl ExtremalPredicate {
    pub fn matches(&self, r: &SurveyRecord) -> bool {
        match *self {
            ExtremalPredicate::Excess(e) => r.excess == e,
            ExtremalPredicate::Jump { parent, altan } => {
                r.parent_nullity == parent && r.altan_nullity == altan
            }
        }
    }
}

/// All matches at the smallest size in `sizes` that has any, in
/// boundary-code order. Instances are streamed, so large sizes only hold
/// the matches in memory.
pub fn find_extremal(
    family: SurveyFamily,
    predicate: ExtremalPredicate,
    sizes: RangeInclusive<usize>,
    opts: &SurveyOptions,
) -> Result<Vec<SurveyRecord>, SurveyError> {
    in_pool(opts.workers, || {
        for eps in sizes.clone() {
            let mut found: Vec<SurveyRecord> = match family {
                SurveyFamily::Benzenoid | SurveyFamily::Catafused => {
                    let fam = if family == SurveyFamily::Benzenoid {
                        Family::Benzenoid
                    } else {
                        Family::Catafused
                    };
                    let results = par_filter_map_family(eps, fam, opts.cap, |p| {
                        let r = benzenoid_instance(p)
                            .map_err(|source| SurveyError::Patch {
                                instance: format!("{:?}", p.cells()),
                                source,
                            })
                            .and_then(|(id, patch)| evaluate_patch(family, &id, &patch, opts));
                        match r {
                            Ok(rec) if !predicate.matches(&rec) => None,
                            other => Some(other),
                        }
                    })?;
                    results.into_iter().collect::<Result<_, _>>()?
                }
                SurveyFamily::Convex => {
                    let instances = family_instances(family, eps, opts.cap)?;
                    evaluate_all(family, &instances, opts)?
                        .into_iter()
                        .filter(|r| predicate.matches(r))
                        .collect()
                }
                SurveyFamily::Ingested => return Err(SurveyError::NotGenerated(family)),
            };
            if !found.is_empty() {
                found.sort_by(|a, b| a.id.cmp(&b.id));
                return Ok(found);
            }
        }
        Ok(Vec::new())
    })?
}

/// Matches among already evaluated records, at the smallest size with any.
pub fn extremal_in_records(records: &[SurveyRecord], predicate: ExtremalPredicate) -> Vec<SurveyRecord> {
    let mut matches: Vec<SurveyRecord> = records.iter().filter(|r| predicate.matches(r)).cloned().collect();
    if let Some(least) = matches.iter().map(|r| (r.size(), r.faces.clone())).min() {
        matches.retain(|r| (r.size(), r.faces.clone()) == least);
    }
    matches.sort_by(|a, b| a.id.cmp(&b.id));
    matches
}

/// A column of a survey table. Even `h` sorts before odd `h`, then by
/// parent nullity, then by altan nullity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnKey {
    pub h_parity: Parity,
    pub parent_nullity: usize,
    pub altan_nullity: usize,
}

impl ColumnKey {
    pub fn even(parent_nullity: usize, altan_nullity: usize) -> ColumnKey {
        ColumnKey {
            h_parity: Parity::Even,
            parent_nullity,
            altan_nullity,
        }
    }

    pub fn odd(parent_nullity: usize, altan_nullity: usize) -> ColumnKey {
        ColumnKey {
            h_parity: Parity::Odd,
            parent_nullity,
            altan_nullity,
        }
    }

    fn label(&self) -> String {
        let base = format!("{}->{}", self.parent_nullity, self.altan_nullity);
        match self.h_parity {
            Parity::Even => base,
            Parity::Odd => format!("{base} odd h"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCount {
    #[serde(flatten)]
    pub column: ColumnKey,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    /// Bounded face counts by length, e.g. `{6: 5}` for five hexagons.
    pub faces: BTreeMap<usize, usize>,
    pub cells: Vec<CellCount>,
}

impl SurveyRow {
    pub fn total(&self) -> u64 {
        self.cells.iter().map(|c| c.count).sum()
    }
}

/// Counts per face composition and `(h parity, parent nullity, altan nullity)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyTable {
    pub family: String,
    pub rows: Vec<SurveyRow>,
}

/// Row key for `eps` hexagons.
pub fn hexagons(eps: usize) -> BTreeMap<usize, usize> {
    BTreeMap::from([(6, eps)])
}

type Counts = BTreeMap<BTreeMap<usize, usize>, BTreeMap<ColumnKey, u64>>;

impl SurveyTable {
    pub fn from_records(family: &str, records: &[SurveyRecord]) -> Result<SurveyTable, SurveyError> {
        if records.is_empty() {
            return Err(SurveyError::EmptyTable);
        }
        let mut counts = Counts::new();
        for r in records {
            *counts
                .entry(r.faces.clone())
                .or_default()
                .entry(r.column())
                .or_insert(0) += 1;
        }
        Ok(SurveyTable::from_counts(family, counts))
    }

    fn from_counts(family: &str, counts: Counts) -> SurveyTable {
        SurveyTable {
            family: family.to_string(),
            rows: counts
                .into_iter()
                .map(|(faces, cells)| SurveyRow {
                    faces,
                    cells: cells
                        .into_iter()
                        .map(|(column, count)| CellCount { column, count })
                        .collect(),
                })
                .collect(),
        }
    }

    fn counts(&self) -> Counts {
        self.rows
            .iter()
            .map(|r| {
                (
                    r.faces.clone(),
                    r.cells.iter().map(|c| (c.column, c.count)).collect(),
                )
            })
            .collect()
    }

    /// Sum of two tables of the same family.
    pub fn merge(&self, other: &SurveyTable) -> SurveyTable {
        let mut counts = self.counts();
        for (faces, cells) in other.counts() {
            let row = counts.entry(faces).or_default();
            for (col, n) in cells {
                *row.entry(col).or_insert(0) += n;
            }
        }
        SurveyTable::from_counts(&self.family, counts)
    }

    pub fn row(&self, faces: &BTreeMap<usize, usize>) -> Option<&SurveyRow> {
        self.rows.iter().find(|r| &r.faces == faces)
    }

    pub fn count(&self, faces: &BTreeMap<usize, usize>, column: ColumnKey) -> u64 {
        self.row(faces)
            .and_then(|r| r.cells.iter().find(|c| c.column == column))
            .map_or(0, |c| c.count)
    }

    /// Columns present anywhere in the table, in display order.
    pub fn columns(&self) -> Vec<ColumnKey> {
        let mut cols: Vec<ColumnKey> = self
            .rows
            .iter()
            .flat_map(|r| r.cells.iter().map(|c| c.column))
            .collect();
        cols.sort();
        cols.dedup();
        cols
    }

    fn face_lengths(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.rows.iter().flat_map(|r| r.faces.keys().copied()).collect();
        lengths.sort_unstable();
        lengths.dedup();
        lengths
    }

    pub fn from_json(text: &str) -> Result<SurveyTable, SurveyError> {
        serde_json::from_str(text).map_err(|e| SurveyError::Table(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "json" => Ok(TableFormat::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

fn face_name(r: usize) -> String {
    match r {
        5 => "pentagons".into(),
        6 => "hexagons".into(),
        7 => "heptagons".into(),
        r => format!("faces_{r}"),
    }
}

fn render(header: &[String], body: &[Vec<String>], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in body {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        _ => {
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---:|".repeat(header.len())));
            for row in body {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
        }
    }
    out
}

/// Renders a table. Zero cells print as `0` in CSV and blank in Markdown.
pub fn emit_table(table: &SurveyTable, format: TableFormat) -> Result<String, SurveyError> {
    if table.rows.is_empty() {
        return Err(SurveyError::EmptyTable);
    }
    if format == TableFormat::Json {
        return serde_json::to_string_pretty(table)
            .map(|s| s + "\n")
            .map_err(|e| SurveyError::Table(e.to_string()));
    }
    let lengths = table.face_lengths();
    let columns = table.columns();
    let mut header: Vec<String> = lengths.iter().map(|&r| face_name(r)).collect();
    header.extend(columns.iter().map(ColumnKey::label));
    header.push("total".into());
    let blank_zero = format == TableFormat::Markdown;
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| {
            let mut cells: Vec<String> = lengths
                .iter()
                .map(|r| row.faces.get(r).copied().unwrap_or(0).to_string())
                .collect();
            for col in &columns {
                let n = table.count(&row.faces, *col);
                cells.push(if n == 0 && blank_zero { String::new() } else { n.to_string() });
            }
            cells.push(row.total().to_string());
            cells
        })
        .collect();
    Ok(render(&header, &body, format))
}

/// Cumulative convex-benzenoid counts up to a hexagon threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexSummaryRow {
    pub eps: usize,
    pub odd: u64,
    pub even_zero_excess: u64,
    pub zero_to_one: u64,
    pub two_to_three: u64,
    pub other_excess_one: u64,
    pub excess_two: u64,
}

pub fn convex_summary(records: &[SurveyRecord], thresholds: &[usize]) -> Vec<ConvexSummaryRow> {
    thresholds
        .iter()
        .map(|&eps| {
            let mut row = ConvexSummaryRow {
                eps,
                odd: 0,
                even_zero_excess: 0,
                zero_to_one: 0,
                two_to_three: 0,
                other_excess_one: 0,
                excess_two: 0,
            };
            for r in records.iter().filter(|r| r.size() <= eps) {
                match (r.h_parity, r.parent_nullity, r.excess) {
                    (Parity::Odd, _, _) => row.odd += 1,
                    (_, _, 0) => row.even_zero_excess += 1,
                    (_, 0, 1) => row.zero_to_one += 1,
                    (_, 2, 1) => row.two_to_three += 1,
                    (_, _, 1) => row.other_excess_one += 1,
                    _ => row.excess_two += 1,
                }
            }
            row
        })
        .collect()
}

pub fn emit_convex_summary(rows: &[ConvexSummaryRow], format: TableFormat) -> Result<String, SurveyError> {
    if rows.is_empty() {
        return Err(SurveyError::EmptyTable);
    }
    if format == TableFormat::Json {
        return serde_json::to_string_pretty(rows)
            .map(|s| s + "\n")
            .map_err(|e| SurveyError::Table(e.to_string()));
    }
    let header: Vec<String> = [
        "hexagons_at_most",
        "odd_h",
        "even_h_excess_0",
        "0->1",
        "2->3",
        "other_excess_1",
        "excess_2",
    ]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [r.eps as u64, r.odd, r.even_zero_excess, r.zero_to_one, r.two_to_three, r.other_excess_one, r.excess_two]
                .iter()
                .map(u64::to_string)
                .collect()
        })
        .collect();
    Ok(render(&header, &body, format))
}

/// Convenience for tests and tools: the canonical code of a polyhex.
pub fn polyhex_code(p: &Polyhex) -> Result<String, PatchError> {
    benzenoid_instance(p).map(|(code, _)| code)
}

impl From<KernelError> for SurveyError {
    fn from(e: KernelError) -> Self {
        SurveyError::Violation {
            instance: String::new(),
            detail: e.to_string(),
            dump: String::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SurveyOptions {
        SurveyOptions {
            spot_check_percent: 100,
            ..SurveyOptions::default()
        }
    }

    #[test]
    fn benzenoid_row_five() {
        let s = run_survey(SurveyFamily::Benzenoid, 5..=5, &opts(), None).unwrap();
        let row = hexagons(5);
        assert_eq!(s.table.count(&row, ColumnKey::even(0, 1)), 14);
        assert_eq!(s.table.count(&row, ColumnKey::even(0, 2)), 1);
        assert_eq!(s.table.count(&row, ColumnKey::odd(1, 1)), 7);
        assert_eq!(s.table.row(&row).unwrap().total(), 22);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let one = run_survey(SurveyFamily::Benzenoid, 1..=6, &opts(), None).unwrap();
        let four = run_survey(
            SurveyFamily::Benzenoid,
            1..=6,
            &SurveyOptions { workers: 4, ..opts() },
            None,
        )
        .unwrap();
        assert_eq!(one.records, four.records);
        assert_eq!(emit_table(&one.table, TableFormat::Csv).unwrap(), emit_table(&four.table, TableFormat::Csv).unwrap());
    }

    #[test]
    fn no_shortcut_agrees_with_shortcut() {
        let fast = run_survey(SurveyFamily::Benzenoid, 3..=5, &opts(), None).unwrap();
        let slow = run_survey(
            SurveyFamily::Benzenoid,
            3..=5,
            &SurveyOptions { no_shortcut: true, ..opts() },
            None,
        )
        .unwrap();
        assert_eq!(fast.table, slow.table);
        assert!(slow.records.iter().all(|r| r.altan_computed));
    }

    #[test]
    fn catafused_starts_at_two() {
        let s = run_survey(SurveyFamily::Catafused, 1..=5, &opts(), None).unwrap();
        assert!(s.table.row(&hexagons(1)).is_none());
        assert_eq!(s.table.count(&hexagons(5), ColumnKey::even(0, 1)), 11);
        assert_eq!(s.table.count(&hexagons(5), ColumnKey::even(0, 2)), 1);
    }

    #[test]
    fn extremal_excess_two_is_benzo_a_tetracene() {
        let found = find_extremal(SurveyFamily::Benzenoid, ExtremalPredicate::Excess(2), 1..=6, &opts()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].id, "53225221");
    }

    #[test]
    fn json_round_trip_and_empty_error() {
        let s = run_survey(SurveyFamily::Benzenoid, 1..=4, &opts(), None).unwrap();
        let json = emit_table(&s.table, TableFormat::Json).unwrap();
        assert_eq!(SurveyTable::from_json(&json).unwrap(), s.table);
        let empty = SurveyTable { family: "benzenoid".into(), rows: vec![] };
        assert!(matches!(emit_table(&empty, TableFormat::Csv), Err(SurveyError::EmptyTable)));
        assert!(matches!(SurveyTable::from_records("x", &[]), Err(SurveyError::EmptyTable)));
    }

    #[test]
    fn merge_is_order_independent() {
        let a = run_survey(SurveyFamily::Benzenoid, 1..=3, &opts(), None).unwrap().table;
        let b = run_survey(SurveyFamily::Benzenoid, 4..=5, &opts(), None).unwrap().table;
        let all = run_survey(SurveyFamily::Benzenoid, 1..=5, &opts(), None).unwrap().table;
        assert_eq!(a.merge(&b), all);
        assert_eq!(b.merge(&a), all);
    }

    #[test]
    fn cache_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().to_path_buf();
        let first = run_survey(SurveyFamily::Benzenoid, 1..=4, &opts(), Some(&path)).unwrap();
        assert_eq!(first.cache_hits, 0);
        let second = run_survey(SurveyFamily::Benzenoid, 1..=4, &opts(), Some(&path)).unwrap();
        assert_eq!(second.cache_hits, 4);
        assert_eq!(first.records, second.records);
    }

    #[test]
    fn convex_summary_small() {
        let s = run_survey(SurveyFamily::Convex, 1..=10, &opts(), None).unwrap();
        let rows = convex_summary(&s.records, &[10]);
        assert_eq!(
            (rows[0].odd, rows[0].even_zero_excess, rows[0].zero_to_one, rows[0].two_to_three),
            (6, 1, 17, 1)
        );
        assert_eq!(rows[0].excess_two, 0);
    }
}

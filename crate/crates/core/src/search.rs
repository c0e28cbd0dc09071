//! Cover witnesses, their verification, and the record search over curve families.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abgroup::{all_subgroups, subgroup_generated, Subgroup};
use crate::curve::{CurveModel, Place};
use crate::enumerate::{fingerprint_of, Fingerprint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::{enumerate_class_group, ClassGroup};

/// `d (g - 1) + 1`.
pub fn genus_of_cover(d: u64, g: u64) -> u64 {
    d * (g - 1) + 1
}

/// The classes `[P - O]` of all rational places, in place order.
#[derive(Clone, Debug)]
pub struct PlaceImageSet {
    pub base: Place,
    pub entries: Vec<(Place, Vec<i64>)>,
}

impl PlaceImageSet {
    /// Places whose class lies in `g`.
    pub fn split_in(&self, g: &Subgroup) -> Vec<Place> {
        self.entries
            .iter()
            .filter(|(_, v)| g.contains(v).expect("dimensions agree"))
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn vector_of(&self, p: &Place) -> Option<&[i64]> {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, v)| v.as_slice())
    }
}

/// Vectors of `[P - P_first]` for every rational place; images for other
/// base places are differences of these.
fn base_vectors(cg: &ClassGroup) -> Result<Vec<(Place, Vec<i64>)>> {
    let places = cg.model().rational_places();
    let Some(first) = places.first().copied() else {
        return Ok(Vec::new());
    };
    places
        .into_iter()
        .map(|p| {
            let c = cg.class_of_place_difference(&p, &first)?;
            Ok((p, cg.to_vector(&c)?.to_vec()))
        })
        .collect()
}

fn images_from(cg: &ClassGroup, base: &[(Place, Vec<i64>)], o: &Place) -> Result<PlaceImageSet> {
    let s = cg.structure();
    let vo = base
        .iter()
        .find(|(p, _)| p == o)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| {
            Error::Precondition(format!(
                "{} is not a rational place",
                o.label(cg.model().field())
            ))
        })?;
    let neg_o = s.scale(&vo, -1);
    let entries: Vec<(Place, Vec<i64>)> =
        base.iter().map(|(p, v)| (*p, s.add(v, &neg_o))).collect();
    let distinct: HashSet<&Vec<i64>> = entries.iter().map(|(_, v)| v).collect();
    if distinct.len() != entries.len() {
        return Err(Error::Inconsistent(format!(
            "place map not injective on {}",
            cg.model()
        )));
    }
    Ok(PlaceImageSet { base: *o, entries })
}

/// `I_O`: every rational place with its class `[P - O]`.
pub fn images(cg: &ClassGroup, o: &Place) -> Result<PlaceImageSet> {
    images_from(cg, &base_vectors(cg)?, o)
}

/// Existence certificate for an unramified abelian cover of a genus-2 curve.
///
/// `G` is spanned by `subgroup_gens` (coordinates in the class group basis this
/// crate computes) or, when that is absent, by the classes `[P - O]`, `P` in `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub q: u32,
    pub modulus: String,
    pub h: String,
    pub f: String,
    #[serde(rename = "O")]
    pub o: String,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    pub subgroup_gens: Option<Vec<Vec<i64>>>,
    pub d: u64,
    pub genus: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub split_places: Vec<String>,
}

impl CoverWitness {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json_line(line: &str) -> Result<CoverWitness> {
        Ok(serde_json::from_str(line)?)
    }

    pub fn model(&self) -> Result<CurveModel> {
        let k = Field::from_order_and_modulus(self.q, Some(&self.modulus))?;
        CurveModel::from_parts(k, Some(&self.h), &self.f)
    }

    /// Curve text plus base place, used as a compact reference.
    pub fn reference(&self) -> String {
        match self.model() {
            Ok(c) => format!("{c} @ {}", self.o),
            Err(_) => format!("q={}; h={}; f={} @ {}", self.q, self.h, self.f, self.o),
        }
    }
}

fn make_witness(
    cg: &ClassGroup,
    o: &Place,
    gens: Option<Vec<Vec<i64>>>,
    m: &[Place],
    g: &Subgroup,
    split: &[Place],
) -> CoverWitness {
    let c = cg.model();
    let k = c.field();
    let label = |p: &Place| p.label(k);
    CoverWitness {
        q: k.order(),
        modulus: k.modulus_string(),
        h: c.h().format(k),
        f: c.f().format(k),
        o: label(o),
        m: m.iter().map(label).collect(),
        subgroup_gens: gens,
        d: g.index(),
        genus: genus_of_cover(g.index(), 2),
        n: g.index() * split.len() as u64,
        split_places: split.iter().map(label).collect(),
    }
}

/// Witness for `G = <[P - O] : P in M>`; `O` need not be listed in `M`.
pub fn witness_from_places(model: &CurveModel, o: &str, m: &[&str]) -> Result<CoverWitness> {
    let cg = enumerate_class_group(model)?;
    let o = model.place_by_label(o)?;
    let ms: Vec<Place> = m
        .iter()
        .map(|l| model.place_by_label(l))
        .collect::<Result<_>>()?;
    let img = images(&cg, &o)?;
    let vecs: Vec<Vec<i64>> = ms
        .iter()
        .map(|p| img.vector_of(p).unwrap().to_vec())
        .collect();
    let g = subgroup_generated(cg.structure(), &vecs)?;
    let split = img.split_in(&g);
    Ok(make_witness(&cg, &o, None, &ms, &g, &split))
}

/// Filters applied to emitted covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverOptions {
    pub genus_min: u64,
    pub genus_max: u64,
    /// Minimum number `m` of split rational places.
    pub min_split: usize,
    pub min_points: u64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            genus_min: 3,
            genus_max: 50,
            min_split: 2,
            min_points: 0,
        }
    }
}

impl CoverOptions {
    /// Cover degrees `d | h` allowed by the window and reachable with `n1` places.
    fn candidate_degrees(&self, h: u64, n1: u64) -> Vec<u64> {
        (1..=h)
            .filter(|&d| h % d == 0)
            .filter(|&d| (self.genus_min..=self.genus_max).contains(&genus_of_cover(d, 2)))
            .filter(|&d| d * n1 >= self.min_points && n1 >= self.min_split as u64)
            .collect()
    }

    fn accepts(&self, d: u64, m: usize) -> bool {
        let genus = genus_of_cover(d, 2);
        genus >= self.genus_min
            && genus <= self.genus_max
            && m >= self.min_split
            && d * m as u64 >= self.min_points
    }
}

/// Subgroups of `cg` whose index is a candidate degree.
fn candidate_subgroups(cg: &ClassGroup, opts: &CoverOptions, n1: u64) -> Result<Vec<Subgroup>> {
    let degrees = opts.candidate_degrees(cg.order(), n1);
    if degrees.is_empty() {
        return Ok(Vec::new());
    }
    Ok(all_subgroups(cg.structure())?
        .into_iter()
        .filter(|g| degrees.contains(&g.index()))
        .collect())
}

/// Every `(O, G)` cover of the model passing `opts`, ordered by base place then subgroup.
pub fn covers_for_curve(model: &CurveModel, opts: &CoverOptions) -> Result<Vec<CoverWitness>> {
    let places = model.rational_places();
    if places.is_empty() {
        return Ok(Vec::new());
    }
    let cg = enumerate_class_group(model)?;
    covers_with_group(&cg, opts)
}

/// [`covers_for_curve`] for an already computed class group.
pub fn covers_with_group(cg: &ClassGroup, opts: &CoverOptions) -> Result<Vec<CoverWitness>> {
    let base = base_vectors(cg)?;
    let subgroups = candidate_subgroups(cg, opts, base.len() as u64)?;
    let mut out = Vec::new();
    for (o, _) in &base {
        let img = images_from(cg, &base, o)?;
        for g in &subgroups {
            let split = img.split_in(g);
            if opts.accepts(g.index(), split.len()) {
                out.push(make_witness(cg, o, Some(g.generators()), &split, g, &split));
            }
        }
    }
    Ok(out)
}

/// Outcome of re-deriving a witness: empty `mismatches` means it holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            f.write_str("ok")
        } else {
            f.write_str(&self.mismatches.join("; "))
        }
    }
}

/// Recomputes the class group, `G`, its index and the split places, and
/// compares every stated field.
pub fn verify_witness(w: &CoverWitness) -> Result<VerifyReport> {
    let model = w.model()?;
    let k = model.field();
    let mut bad = Vec::new();
    let check = |bad: &mut Vec<String>, name: &str, stated: String, actual: String| {
        if stated != actual {
            bad.push(format!("{name}: stated {stated}, recomputed {actual}"));
        }
    };
    // canonical spellings
    check(&mut bad, "h", w.h.clone(), model.h().format(k));
    check(&mut bad, "f", w.f.clone(), model.f().format(k));
    let cg = enumerate_class_group(&model)?;
    let o = model.place_by_label(&w.o)?;
    let ms: Vec<Place> =
        w.m.iter()
            .map(|l| model.place_by_label(l))
            .collect::<Result<_>>()?;
    let img = images(&cg, &o)?;
    let g = match &w.subgroup_gens {
        Some(gens) => subgroup_generated(cg.structure(), gens)?,
        None => {
            let vecs: Vec<Vec<i64>> = ms
                .iter()
                .map(|p| img.vector_of(p).unwrap().to_vec())
                .collect();
            subgroup_generated(cg.structure(), &vecs)?
        }
    };
    let split = img.split_in(&g);
    for p in &ms {
        if !split.contains(p) {
            bad.push(format!("M: {} does not split", p.label(k)));
        }
    }
    let split_labels: Vec<String> = split.iter().map(|p| p.label(k)).collect();
    let d = g.index();
    check(&mut bad, "d", w.d.to_string(), d.to_string());
    check(
        &mut bad,
        "genus",
        w.genus.to_string(),
        genus_of_cover(d, 2).to_string(),
    );
    check(
        &mut bad,
        "N",
        w.n.to_string(),
        (d * split.len() as u64).to_string(),
    );
    let canon = |v: &[String]| -> Result<Vec<String>> {
        v.iter()
            .map(|l| Ok(model.place_by_label(l)?.label(k)))
            .collect()
    };
    check(
        &mut bad,
        "split_places",
        canon(&w.split_places)?.join(","),
        split_labels.join(","),
    );
    Ok(VerifyReport { mismatches: bad })
}

/// Known lower and upper bounds for `N_q(g)`.
#[derive(Clone, Debug, Default)]
pub struct BoundsTable {
    rows: BTreeMap<(u32, u64), (Option<u64>, Option<u64>)>,
}

#[derive(Debug, Deserialize)]
struct BoundsRow {
    q: u32,
    genus: u64,
    lower: Option<u64>,
    upper: Option<u64>,
}

impl BoundsTable {
    /// Reads CSV with header `q,genus,lower,upper`; empty cells are unknown.
    pub fn from_csv_str(text: &str) -> Result<BoundsTable> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if header != ["q", "genus", "lower", "upper"] {
            return Err(Error::Parse(format!(
                "bounds header must be q,genus,lower,upper, got {}",
                header.join(",")
            )));
        }
        let mut rows = BTreeMap::new();
        for rec in rdr.deserialize() {
            let r: BoundsRow = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if let (Some(lo), Some(up)) = (r.lower, r.upper) {
                if lo > up {
                    return Err(Error::Parse(format!(
                        "q={} genus={}: lower {lo} > upper {up}",
                        r.q, r.genus
                    )));
                }
            }
            rows.insert((r.q, r.genus), (r.lower, r.upper));
        }
        Ok(BoundsTable { rows })
    }

    pub fn from_path(path: &Path) -> Result<BoundsTable> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    /// `None` when there is no row for `(q, genus)`.
    pub fn get(&self, q: u32, genus: u64) -> Option<(Option<u64>, Option<u64>)> {
        self.rows.get(&(q, genus)).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ImprovesLowerBound,
    MeetsManyPointsCriterion,
    Ordinary,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::ImprovesLowerBound => "improves_lower_bound",
            Classification::MeetsManyPointsCriterion => "meets_many_points_criterion",
            Classification::Ordinary => "ordinary",
        })
    }
}

/// `N > b / sqrt(2)`, as `2 N^2 > b^2`.
pub fn meets_many_points(n: u64, upper: u64) -> bool {
    2 * (n as u128).pow(2) > (upper as u128).pow(2)
}

/// Classifies `N` at `(q, genus)`; `None` when the table has no row.
pub fn classify(bounds: &BoundsTable, q: u32, genus: u64, n: u64) -> Option<Classification> {
    let (lower, upper) = bounds.get(q, genus)?;
    Some(match (lower, upper) {
        (Some(lo), _) if n > lo => Classification::ImprovesLowerBound,
        (_, Some(up)) if meets_many_points(n, up) => Classification::MeetsManyPointsCriterion,
        _ => Classification::Ordinary,
    })
}

/// Best witness per genus. Ties in `N` go to the lexicographically smaller
/// JSON line, so merging is order independent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordLedger {
    best: BTreeMap<u64, (CoverWitness, String)>,
}

/// One classified ledger row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub genus: u64,
    pub best_n: u64,
    pub classification: Classification,
    pub witness: CoverWitness,
}

impl RecordLedger {
    pub fn new() -> RecordLedger {
        RecordLedger::default()
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_empty()
    }

    pub fn len(&self) -> usize {
        self.best.len()
    }

    pub fn best_n(&self, genus: u64) -> Option<u64> {
        self.best.get(&genus).map(|(w, _)| w.n)
    }

    pub fn get(&self, genus: u64) -> Option<&CoverWitness> {
        self.best.get(&genus).map(|(w, _)| w)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &CoverWitness> {
        self.best.values().map(|(w, _)| w)
    }

    /// Whether a witness of this genus and `N` could enter the ledger.
    fn could_take(&self, genus: u64, n: u64) -> bool {
        self.best_n(genus).map_or(true, |b| n >= b)
    }

    pub fn offer(&mut self, w: CoverWitness) {
        let line = w.to_json_line();
        self.offer_keyed(w, line);
    }

    fn offer_keyed(&mut self, w: CoverWitness, line: String) {
        match self.best.get(&w.genus) {
            Some((cur, cur_line))
                if (cur.n, std::cmp::Reverse(cur_line)) >= (w.n, std::cmp::Reverse(&line)) => {}
            _ => {
                self.best.insert(w.genus, (w, line));
            }
        }
    }

    pub fn merge(&mut self, other: RecordLedger) {
        for (_, (w, line)) in other.best {
            self.offer_keyed(w, line);
        }
    }

    /// Rows with classifications; genera missing from `bounds` are logged and
    /// classified ordinary.
    pub fn rows(&self, bounds: &BoundsTable) -> Vec<LedgerRow> {
        self.best
            .iter()
            .map(|(&genus, (w, _))| {
                let classification = classify(bounds, w.q, genus, w.n).unwrap_or_else(|| {
                    log::warn!("no bounds row for q={} genus={genus}", w.q);
                    Classification::Ordinary
                });
                LedgerRow {
                    genus,
                    best_n: w.n,
                    classification,
                    witness: w.clone(),
                }
            })
            .collect()
    }

    /// TSV with header `genus best_N classification witness_ref` (tab-separated).
    pub fn report_tsv(&self, bounds: &BoundsTable) -> String {
        let mut out = String::from("genus\tbest_N\tclassification\twitness_ref\n");
        for r in self.rows(bounds) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.genus,
                r.best_n,
                r.classification,
                r.witness.reference()
            ));
        }
        out
    }
}

/// Search-wide settings.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub covers: CoverOptions,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Skip curves whose fingerprint was already seen (may conflate
    /// non-isomorphic curves; off by default).
    pub dedup: bool,
    /// Curves handed to the pool at a time.
    pub chunk: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            covers: CoverOptions::default(),
            workers: 0,
            dedup: false,
            chunk: 2048,
        }
    }
}

/// Folds the best covers of one curve into `ledger`, materializing only
/// witnesses that can enter it.
pub fn fold_curve(
    ledger: &mut RecordLedger,
    model: &CurveModel,
    opts: &CoverOptions,
) -> Result<()> {
    let places = model.rational_places();
    let n1 = places.len() as u64;
    if n1 == 0 || n1 < opts.min_split as u64 {
        return Ok(());
    }
    // cheap rejection before the class group is built
    if opts.candidate_degrees(model.class_number()?, n1).is_empty() {
        return Ok(());
    }
    let cg = enumerate_class_group(model)?;
    fold_group(ledger, &cg, opts)
}

fn fold_group(ledger: &mut RecordLedger, cg: &ClassGroup, opts: &CoverOptions) -> Result<()> {
    let base = base_vectors(cg)?;
    let subgroups = candidate_subgroups(cg, opts, base.len() as u64)?;
    for (o, _) in &base {
        let img = images_from(cg, &base, o)?;
        for g in &subgroups {
            let m = img
                .entries
                .iter()
                .filter(|(_, v)| g.contains(v).unwrap())
                .count();
            if !opts.accepts(g.index(), m) {
                continue;
            }
            let genus = genus_of_cover(g.index(), 2);
            if ledger.could_take(genus, g.index() * m as u64) {
                let split = img.split_in(g);
                ledger.offer(make_witness(cg, o, Some(g.generators()), &split, g, &split));
            }
        }
    }
    Ok(())
}

/// Runs the cover search over a curve stream in parallel.
///
/// Each worker folds a private ledger; ledgers merge at chunk boundaries.
/// The result does not depend on the worker count.
pub fn run_search<I>(curves: I, opts: &SearchOptions) -> Result<RecordLedger>
where
    I: IntoIterator<Item = CurveModel>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let mut iter = curves.into_iter();
    let mut ledger = RecordLedger::new();
    let mut seen: HashSet<Fingerprint> = HashSet::new();
    let done = AtomicU64::new(0);
    let chunk = opts.chunk.max(1);
    loop {
        let batch: Vec<CurveModel> = iter.by_ref().take(chunk).collect();
        if batch.is_empty() {
            break;
        }
        let part = pool.install(|| -> Result<RecordLedger> {
            if opts.dedup {
                let groups: Vec<Option<ClassGroup>> = batch
                    .par_iter()
                    .map(|c| {
                        if c.rational_places().is_empty() {
                            Ok(None)
                        } else {
                            enumerate_class_group(c).map(Some)
                        }
                    })
                    .collect::<Result<_>>()?;
                // first occurrence in stream order wins
                let fresh: Vec<ClassGroup> = groups
                    .into_iter()
                    .flatten()
                    .filter(|cg| seen.insert(fingerprint_of(cg)))
                    .collect();
                fresh
                    .par_iter()
                    .try_fold(RecordLedger::new, |mut l, cg| {
                        fold_group(&mut l, cg, &opts.covers).map(|_| l)
                    })
                    .try_reduce(RecordLedger::new, |mut a, b| {
                        a.merge(b);
                        Ok(a)
                    })
            } else {
                batch
                    .par_iter()
                    .try_fold(RecordLedger::new, |mut l, c| {
                        fold_curve(&mut l, c, &opts.covers).map(|_| l)
                    })
                    .try_reduce(RecordLedger::new, |mut a, b| {
                        a.merge(b);
                        Ok(a)
                    })
            }
        })?;
        ledger.merge(part);
        let n = done.fetch_add(batch.len() as u64, Ordering::Relaxed) + batch.len() as u64;
        log::info!("{n} curves processed, {} genera recorded", ledger.len());
    }
    Ok(ledger)
}

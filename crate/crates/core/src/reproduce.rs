//! End-to-end reproduction checks for the worked examples and record covers.

use std::time::Instant;

use crate::abgroup::subgroup_generated;
use crate::curve::CurveModel;
use crate::enumerate::{enumerate_curves, CurveFamilySpec, FamilyMode};
use crate::error::Result;
use crate::field::Field;
use crate::fixtures;
use crate::jacobian::enumerate_class_group;
use crate::search::{
    classify, covers_for_curve, images, run_search, verify_witness, witness_from_places,
    BoundsTable, Classification, CoverOptions, CoverWitness, SearchOptions,
};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    /// `PASS <name> (<secs>s) <detail>`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "{tag}\t{}\t{:.2}s\t{}",
            self.name, self.seconds, self.detail
        )
    }
}

/// Expected `(q, genus, N)` of the record covers; F_16 g=49 and F_5 g=9 have two generating sets each.
pub const RECORDS: [(u32, u64, u64); 10] = [
    (16, 8, 63),
    (16, 49, 240),
    (16, 49, 240),
    (9, 18, 68),
    (9, 32, 93),
    (9, 38, 111),
    (5, 7, 24),
    (5, 9, 32),
    (5, 9, 32),
    (5, 12, 33),
];

type Outcome = std::result::Result<String, String>;

fn expect_eq<T: PartialEq + std::fmt::Debug>(
    what: &str,
    got: T,
    want: T,
) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn example1() -> Outcome {
    let c = CurveModel::parse("q=2; h=x; f=x^5+x^3+x^2+x").map_err(e)?;
    expect_eq("N1", c.count_points_ext(1).map_err(e)?, 4)?;
    expect_eq("deg-2 places", c.places_of_degree(2).map_err(e)?, 2)?;
    let cg = enumerate_class_group(&c).map_err(e)?;
    expect_eq("h", cg.order(), 10)?;
    let inf = c.place_by_label("P_inf").map_err(e)?;
    let img = images(&cg, &inf).map_err(e)?;
    let a = img
        .vector_of(&c.place_by_label("P_{0}").map_err(e)?)
        .unwrap()
        .to_vec();
    let g = subgroup_generated(cg.structure(), &[a]).map_err(e)?;
    expect_eq("order of [P_0 - P_inf]", g.order(), 2)?;
    let opts = CoverOptions {
        genus_min: 1,
        genus_max: 100,
        min_split: 0,
        min_points: 0,
    };
    let covers = covers_for_curve(&c, &opts).map_err(e)?;
    let gens = g.generators();
    for w in &covers {
        verify(w)?;
        if w.subgroup_gens.as_ref() == Some(&gens) {
            let want = if w.o == "P_inf" || w.o == "P_{0}" {
                10
            } else {
                5
            };
            expect_eq(
                &format!("(d, genus, N) at O={}", w.o),
                (w.d, w.genus, w.n),
                (5, 6, want),
            )?;
        }
        if w.d == 10 {
            expect_eq(
                &format!("trivial subgroup at O={}", w.o),
                (w.genus, w.n),
                (11, 10),
            )?;
        }
    }
    Ok(format!("{}; {} covers", cg.summary(), covers.len()))
}

fn example2() -> Outcome {
    let c = CurveModel::parse("q=5; f=x^5-x^3+x").map_err(e)?;
    let cg = enumerate_class_group(&c).map_err(e)?;
    expect_eq(
        "invariant factors",
        cg.invariant_factors().to_vec(),
        vec![8, 8],
    )?;
    let o = c.place_by_label("P_{0}").map_err(e)?;
    let img = images(&cg, &o).map_err(e)?;
    let vec_of = |l: &str| -> std::result::Result<Vec<i64>, String> {
        Ok(img
            .vector_of(&c.place_by_label(l).map_err(e)?)
            .unwrap()
            .to_vec())
    };
    let gens = vec![vec_of("P_inf")?, vec_of("P_{4,3}")?, vec_of("P_{4,2}")?];
    let g = subgroup_generated(cg.structure(), &gens).map_err(e)?;
    expect_eq("index", g.index(), 8)?;
    let w = witness_from_places(&c, "P_{0}", &["P_inf", "P_{4,3}", "P_{4,2}"]).map_err(e)?;
    expect_eq("(d, genus, N)", (w.d, w.genus, w.n), (8, 9, 32))?;
    verify(&w)?;
    Ok(format!("{}; index-8 subgroup holds 4 places", cg.summary()))
}

fn verify(w: &CoverWitness) -> std::result::Result<(), String> {
    let r = verify_witness(w).map_err(e)?;
    if !r.ok() {
        return Err(format!("{}: {r}", w.reference()));
    }
    let line = w.to_json_line();
    let back = CoverWitness::from_json_line(&line).map_err(e)?;
    expect_eq("re-serialized witness", back.to_json_line(), line)
}

fn record(w: &CoverWitness, want: (u32, u64, u64)) -> Outcome {
    verify(w)?;
    expect_eq("(q, genus, N)", (w.q, w.genus, w.n), want)?;
    expect_eq("d", w.d, want.1 - 1)?;
    Ok(format!("d={} genus={} N={}", w.d, w.genus, w.n))
}

fn search_q5(bounds: &BoundsTable) -> Outcome {
    let k = Field::with_order(5).map_err(e)?;
    let spec = CurveFamilySpec::new(k, FamilyMode::OddCharAll);
    let opts = SearchOptions {
        covers: CoverOptions {
            genus_min: 3,
            genus_max: 13,
            ..Default::default()
        },
        ..Default::default()
    };
    let ledger = run_search(enumerate_curves(&spec).map_err(e)?, &opts).map_err(e)?;
    let mut parts = Vec::new();
    for (genus, target) in [(7, 24), (9, 32), (12, 33)] {
        let n = ledger.best_n(genus).unwrap_or(0);
        if n < target {
            return Err(format!("genus {genus}: best N {n} < {target}"));
        }
        expect_eq(
            &format!("classification at genus {genus}"),
            classify(bounds, 5, genus, n),
            Some(Classification::ImprovesLowerBound),
        )?;
        verify(ledger.get(genus).unwrap())?;
        parts.push(format!("g{genus}:N={n}"));
    }
    Ok(parts.join(" "))
}

fn spot_checks(q: u32, bounds: &BoundsTable) -> Outcome {
    let rows: Vec<_> = fixtures::table_spotchecks()
        .into_iter()
        .filter(|r| r.q == q)
        .collect();
    let first = rows.first().ok_or("no spot-check rows")?;
    let k = Field::with_order(q).map_err(e)?;
    let mode: FamilyMode = first.family.parse().map_err(e)?;
    let spec = CurveFamilySpec::new(k, mode).sampled(first.sample, first.seed);
    let gmin = rows.iter().map(|r| r.genus).min().unwrap();
    let gmax = rows.iter().map(|r| r.genus).max().unwrap();
    let min_points = rows.iter().map(|r| r.target).min().unwrap();
    let opts = SearchOptions {
        covers: CoverOptions {
            genus_min: gmin,
            genus_max: gmax,
            min_points,
            ..Default::default()
        },
        ..Default::default()
    };
    let ledger = run_search(enumerate_curves(&spec).map_err(e)?, &opts).map_err(e)?;
    let mut parts = Vec::new();
    for r in &rows {
        let n = ledger.best_n(r.genus).unwrap_or(0);
        if n < r.target {
            return Err(format!("genus {}: best N {n} < {}", r.genus, r.target));
        }
        expect_eq(
            &format!("classification at genus {}", r.genus),
            classify(bounds, q, r.genus, n),
            Some(Classification::MeetsManyPointsCriterion),
        )?;
        verify(ledger.get(r.genus).unwrap())?;
        parts.push(format!("g{}:N={n}", r.genus));
    }
    Ok(format!(
        "{} (sample {} seed {})",
        parts.join(" "),
        first.sample,
        first.seed
    ))
}

fn timed(name: String, f: impl FnOnce() -> Outcome) -> CheckResult {
    let t = Instant::now();
    let out = f();
    let seconds = t.elapsed().as_secs_f64();
    match out {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
            seconds,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
            seconds,
        },
    }
}

/// Runs every check whose name contains `only` (all when `None`), using the
/// given record witnesses text (one JSON object per line).
pub fn run_checks(
    only: Option<&str>,
    records_text: &str,
    bounds: &BoundsTable,
) -> Result<Vec<CheckResult>> {
    let wanted = |name: &str| only.map_or(true, |o| name.contains(o));
    let mut out = Vec::new();
    if wanted("example1-q2") {
        out.push(timed("example1-q2".into(), example1));
    }
    if wanted("example2-q5") {
        out.push(timed("example2-q5".into(), example2));
    }
    let lines: Vec<&str> = records_text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .collect();
    for (i, want) in RECORDS.iter().enumerate() {
        let name = format!("record-q{}-g{}-{}", want.0, want.1, i + 1);
        if !wanted(&name) {
            continue;
        }
        out.push(timed(name, || {
            let line = lines.get(i).ok_or("missing fixture line")?;
            let w = CoverWitness::from_json_line(line).map_err(e)?;
            record(&w, *want)
        }));
    }
    if wanted("search-q5") {
        out.push(timed("search-q5".into(), || search_q5(bounds)));
    }
    for q in [7, 11, 13] {
        let name = format!("table-q{q}");
        if wanted(&name) {
            out.push(timed(name, || spot_checks(q, bounds)));
        }
    }
    Ok(out)
}

use manypts::fixtures;
use manypts::search::{classify, meets_many_points};
use manypts::*;

fn example1() -> CurveModel {
    CurveModel::parse("q=2; h=x; f=x^5+x^3+x^2+x").unwrap()
}

fn wide() -> CoverOptions {
    CoverOptions {
        genus_min: 1,
        genus_max: 1000,
        min_split: 0,
        min_points: 0,
    }
}

#[test]
fn cover_genus_formula() {
    assert_eq!(genus_of_cover(5, 2), 6);
    assert_eq!(genus_of_cover(1, 7), 7);
    assert_eq!(genus_of_cover(48, 2), 49);
}

#[test]
fn example1_images() {
    let c = example1();
    let cg = enumerate_class_group(&c).unwrap();
    let inf = c.place_by_label("P_inf").unwrap();
    let img = images(&cg, &inf).unwrap();
    assert_eq!(img.entries.len(), 4);
    let s = cg.structure();
    assert!(img.vector_of(&inf).unwrap().iter().all(|&x| x == 0));
    let a = img.vector_of(&c.place_by_label("P_{0}").unwrap()).unwrap();
    assert!(a.iter().any(|&x| x != 0));
    assert!(s.scale(a, 2).iter().all(|&x| x == 0));
}

#[test]
fn example1_covers() {
    let c = example1();
    let covers = covers_for_curve(&c, &wide()).unwrap();
    // 4 base places x 4 subgroups of Z/10
    assert_eq!(covers.len(), 16);
    for w in &covers {
        assert_eq!(w.genus, w.d + 1);
        match w.d {
            5 if w.o == "P_inf" || w.o == "P_{0}" => assert_eq!(w.n, 10),
            5 => assert_eq!(w.n, 5, "{w:?}"),
            10 => assert_eq!(w.n, 10),
            1 => assert_eq!(w.n, 4),
            _ => {}
        }
        assert!(verify_witness(w).unwrap().ok());
    }
    let w = witness_from_places(&c, "P_inf", &["P_inf", "P_{0}"]).unwrap();
    assert_eq!((w.d, w.genus, w.n), (5, 6, 10));
}

#[test]
fn base_place_changes_points_not_degree() {
    let c = CurveModel::parse("q=5; f=x^5-x^3+x").unwrap();
    let covers = covers_for_curve(&c, &wide()).unwrap();
    let mut by_gens = std::collections::HashMap::new();
    for w in &covers {
        by_gens
            .entry(w.subgroup_gens.clone())
            .or_insert_with(Vec::new)
            .push(w.d);
    }
    for ds in by_gens.values() {
        assert!(ds.iter().all(|&d| d == ds[0]));
    }
    // the full group reproduces the base curve
    for w in covers.iter().filter(|w| w.d == 1) {
        assert_eq!(w.n, 10);
    }
}

#[test]
fn default_options_filter() {
    let c = CurveModel::parse("q=5; f=x^5-x^3+x").unwrap();
    for w in covers_for_curve(&c, &CoverOptions::default()).unwrap() {
        assert!(w.genus >= 3 && w.genus <= 50);
        assert!(w.split_places.len() >= 2);
    }
}

#[test]
fn witness_checks() {
    let c = CurveModel::parse("q=5; f=x^5-x^3+x").unwrap();
    let w = witness_from_places(&c, "P_{0}", &["P_inf", "P_{0}", "P_{1,1}", "P_{1,4}"]).unwrap();
    assert_eq!((w.d, w.genus, w.n), (8, 9, 32));
    assert!(verify_witness(&w).unwrap().ok());
    let mut bad = w.clone();
    bad.n = 33;
    let r = verify_witness(&bad).unwrap();
    assert!(!r.ok());
    assert_eq!(
        r.mismatches,
        vec!["N: stated 33, recomputed 32".to_string()]
    );
    let mut bad = w.clone();
    bad.split_places.pop();
    assert!(!verify_witness(&bad).unwrap().ok());

    let c9 = CurveModel::parse("q=9; f=x^5+a^6*x^3+a^6*x^2+a^3*x").unwrap();
    let w = witness_from_places(&c9, "P_inf", &["P_inf", "P_{0}", "P_{1}", "P_{a}"]).unwrap();
    assert_eq!((w.d, w.n), (17, 68));
    assert!(verify_witness(&w).unwrap().ok());
    assert!(CoverWitness::from_json_line("{\"q\": 5}").is_err());
}

#[test]
fn record_fixture_verifies() {
    let ws = fixtures::record_witnesses().unwrap();
    assert_eq!(ws.len(), 10);
    for w in &ws {
        let r = verify_witness(w).unwrap();
        assert!(r.ok(), "{}: {r}", w.reference());
        assert_eq!(
            w.to_json_line(),
            CoverWitness::from_json_line(&w.to_json_line())
                .unwrap()
                .to_json_line()
        );
    }
    let lines: Vec<&str> = fixtures::RECORD_WITNESSES.lines().collect();
    for (w, l) in ws.iter().zip(lines) {
        assert_eq!(w.to_json_line(), l);
    }
}

#[test]
fn bounds_and_classification() {
    let b = fixtures::bounds();
    assert_eq!(b.get(5, 9), Some((Some(26), Some(32))));
    assert_eq!(b.get(13, 5), Some((None, Some(44))));
    assert_eq!(b.get(13, 4), None);
    assert_eq!(
        classify(&b, 5, 9, 32),
        Some(Classification::ImprovesLowerBound)
    );
    assert_eq!(
        classify(&b, 5, 9, 26),
        Some(Classification::MeetsManyPointsCriterion)
    );
    assert_eq!(classify(&b, 5, 9, 22), Some(Classification::Ordinary));
    assert_eq!(
        classify(&b, 13, 5, 40),
        Some(Classification::MeetsManyPointsCriterion)
    );
    // 2 * 31^2 = 1922 < 44^2 = 1936
    assert_eq!(classify(&b, 13, 5, 31), Some(Classification::Ordinary));
    assert!(meets_many_points(32, 44) && !meets_many_points(31, 44));
    assert!(BoundsTable::from_csv_str("q,g,lower,upper\n").is_err());
    assert!(BoundsTable::from_csv_str("q,genus,lower,upper\n5,3,10,9\n").is_err());
    assert!(BoundsTable::from_csv_str("q,genus,lower,upper\n5,3,,\n")
        .unwrap()
        .get(5, 3)
        .is_some());
}

fn ledger_of(ws: &[CoverWitness]) -> RecordLedger {
    let mut l = RecordLedger::new();
    for w in ws {
        l.offer(w.clone());
    }
    l
}

#[test]
fn ledger_merge_laws() {
    let mut all = Vec::new();
    for t in [
        "q=5; f=x^5-x^3+x",
        "q=5; f=x^5+x^2+4*x",
        "q=5; f=x^5+x^4+3*x^2+1",
        "q=3; f=x^5+2*x+1",
    ] {
        all.extend(covers_for_curve(&CurveModel::parse(t).unwrap(), &wide()).unwrap());
    }
    let parts: Vec<Vec<CoverWitness>> = (0..3)
        .map(|i| all.iter().skip(i).step_by(3).cloned().collect())
        .collect();
    let (a, b, c) = (
        ledger_of(&parts[0]),
        ledger_of(&parts[1]),
        ledger_of(&parts[2]),
    );
    let merge = |x: &RecordLedger, y: &RecordLedger| {
        let mut z = x.clone();
        z.merge(y.clone());
        z
    };
    assert_eq!(merge(&a, &b), merge(&b, &a));
    assert_eq!(merge(&merge(&a, &b), &c), merge(&a, &merge(&b, &c)));
    assert_eq!(merge(&a, &a), a);
    assert_eq!(merge(&merge(&a, &b), &c), ledger_of(&all));
    let mut rev = all.clone();
    rev.reverse();
    assert_eq!(ledger_of(&rev), ledger_of(&all));
}

#[test]
fn search_over_lists() {
    assert!(run_search(Vec::new(), &SearchOptions::default())
        .unwrap()
        .is_empty());
    let curves: Vec<CurveModel> = [
        "q=5; f=x^5-x^3+x",
        "q=5; f=x^5+x^2+4*x",
        "q=5; f=x^5+x^4+3*x^2+1",
    ]
    .iter()
    .map(|t| CurveModel::parse(t).unwrap())
    .collect();
    let opts = SearchOptions {
        covers: CoverOptions {
            genus_min: 3,
            genus_max: 13,
            ..Default::default()
        },
        ..Default::default()
    };
    let l1 = run_search(
        curves.clone(),
        &SearchOptions {
            workers: 1,
            chunk: 1,
            ..opts.clone()
        },
    )
    .unwrap();
    let l4 = run_search(
        curves.clone(),
        &SearchOptions {
            workers: 4,
            ..opts.clone()
        },
    )
    .unwrap();
    assert_eq!(l1, l4);
    assert_eq!(l1.best_n(7), Some(24));
    assert_eq!(l1.best_n(9), Some(32));
    assert_eq!(l1.best_n(12), Some(33));
    let dedup = run_search(
        curves,
        &SearchOptions {
            dedup: true,
            ..opts
        },
    )
    .unwrap();
    assert_eq!(dedup.best_n(9), Some(32));
    let report = l1.report_tsv(&fixtures::bounds());
    assert!(report.starts_with("genus\tbest_N\tclassification\twitness_ref\n"));
    assert!(report.contains("\n9\t32\timproves_lower_bound\tq=5; f=x^5+4*x^3+x @ "));
    for w in l1.witnesses() {
        assert!(verify_witness(w).unwrap().ok());
    }
}

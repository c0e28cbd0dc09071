use criterion::{black_box, criterion_group, criterion_main, Criterion};
use manypts::{
    enumerate_class_group, enumerate_curves, run_search, CoverOptions, CurveFamilySpec, CurveModel,
    FamilyMode, Field, SearchOptions,
};

fn class_groups(c: &mut Criterion) {
    for src in [
        "q=5; f=x^5-x^3+x",
        "q=9; f=x^5+x+a",
        "q=16; h=x; f=x^5+a*x^3+x",
        "q=13; f=2*x^6+x^3+1",
    ] {
        let Ok(model) = CurveModel::parse(src) else {
            continue;
        };
        if !model.validate_genus2().unwrap_or(false) {
            continue;
        }
        c.bench_function(&format!("class group {src}"), |b| {
            b.iter(|| enumerate_class_group(black_box(&model)).unwrap().order())
        });
    }
}

fn search_f3(c: &mut Criterion) {
    let k = Field::with_order(3).unwrap();
    let spec = CurveFamilySpec::new(k, FamilyMode::OddCharAll);
    let opts = SearchOptions {
        covers: CoverOptions {
            genus_min: 3,
            genus_max: 10,
            ..Default::default()
        },
        workers: 1,
        ..Default::default()
    };
    c.bench_function("search F_3 genus 3..10", |b| {
        b.iter(|| {
            run_search(enumerate_curves(&spec).unwrap(), &opts)
                .unwrap()
                .best_n(5)
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = class_groups, search_f3
}
criterion_main!(benches);

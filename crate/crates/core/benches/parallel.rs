//! Sequential versus rayon execution of the enumeration-heavy operations.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use galois_embed::embed::projectivity_scan;
use galois_embed::freeprod::{separating_quotient_search, FreeProduct};
use galois_embed::group::catalog::{by_name, catalog_up_to};
use galois_embed::group::{enumerate_homs_filtered, subgroup_generated};
use galois_embed::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn homs(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_homs");
    let g = by_name("D4").unwrap();
    let h = by_name("C2xD4").unwrap();
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, h.name()), &mode, |b, &mode| {
            b.iter(|| enumerate_homs_filtered(&g, &h, &|_, _| true, mode).len())
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("projectivity_scan");
    group.sample_size(10);
    let g = by_name("C2^2").unwrap();
    let parts = vec![subgroup_generated(&g, &[1]).unwrap()];
    let catalog = catalog_up_to(8);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| projectivity_scan(&g, &parts, &catalog, false, 5, mode).unwrap().instances)
        });
    }
    group.finish();
}

fn separation(c: &mut Criterion) {
    let mut group = c.benchmark_group("separating_quotient_search");
    let pres = FreeProduct::new(vec![by_name("C2").unwrap(), by_name("C3").unwrap()]).unwrap();
    let w = pres.multiply(&pres.letter(0, 1).unwrap(), &pres.letter(1, 1).unwrap());
    let w = pres.multiply(&w, &w);
    let catalog = catalog_up_to(24);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| separating_quotient_search(&pres, black_box(&w), &catalog, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, homs, scan, separation);
criterion_main!(benches);

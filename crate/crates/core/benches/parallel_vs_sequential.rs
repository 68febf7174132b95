use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use emtkit::cats::{colimit, default_probes, limit, verify_universal, CategoryTag, Diagram};
use emtkit::exec::map_slice;
use emtkit::gen::{rng, small_emt, small_space};
use emtkit::spaces::{enumerate_homs, lip_sup_oracle, recovered_distance};
use emtkit::{Config, Exec, HomKind, Space};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn config(exec: Exec) -> Config {
    Config { exec, ..Config::default() }
}

fn enumerate(c: &mut Criterion) {
    let src = small_space(&mut rng(1), 5);
    let dst = small_space(&mut rng(2), 5);
    let mut group = c.benchmark_group("enumerate_homs");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "5x5"), |b| {
            b.iter(|| enumerate_homs(HomKind::Any, &src, &dst, &config(exec)).unwrap())
        });
    }
    group.finish();
}

fn universal(c: &mut Criterion) {
    let objects = vec![Arc::new(small_emt(&mut rng(3), 2)), Arc::new(small_emt(&mut rng(4), 2))];
    let d = Diagram::discrete(CategoryTag::Emt, objects).unwrap();
    let probes = default_probes(CategoryTag::Emt);
    let mut group = c.benchmark_group("verify_universal");
    for (name, exec) in MODES {
        let cfg = config(exec);
        let (lim, colim) = (limit(&d, &cfg).unwrap(), colimit(&d, &cfg).unwrap());
        group.bench_function(BenchmarkId::new(name, "product"), |b| {
            b.iter(|| verify_universal(&d, &lim, &probes, &cfg).unwrap())
        });
        group.bench_function(BenchmarkId::new(name, "coproduct"), |b| {
            b.iter(|| verify_universal(&d, &colim, &probes, &cfg).unwrap())
        });
    }
    group.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let spaces: Vec<Space> = (0..64).map(|i| small_space(&mut rng(100 + i), 3)).collect();
    let mut group = c.benchmark_group("oracle_sweep");
    group.sample_size(20);
    for (name, exec) in MODES {
        let cfg = config(exec);
        group.bench_function(BenchmarkId::new(name, "64x3"), |b| {
            b.iter(|| {
                map_slice(exec, &spaces, |s| {
                    let r = recovered_distance(s);
                    (0..s.len())
                        .flat_map(|x| (0..s.len()).map(move |y| (x, y)))
                        .all(|(x, y)| lip_sup_oracle(s, x, y, &cfg.caps).unwrap() == *r.get(x, y))
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, enumerate, universal, oracle_sweep);
criterion_main!(benches);

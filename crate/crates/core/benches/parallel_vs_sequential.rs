//! The same workloads on a one-thread rayon pool and on the default pool.
//! Built with `--no-default-features` both sides run the sequential fallback.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPool;

use twk_core::cohomology::{hom_cohomology, p1_line_bundle, projective_line};
use twk_core::random::{self, Backend, Params};
use twk_core::totalization::{mc_check_tot, twisted_to_tot};
use twk_core::twisted::{mc_check_tw, tw_mor_diff, TwPerfComplex};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

fn objects(backend: Backend, seed: u64) -> (TwPerfComplex, TwPerfComplex) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let p = Params { max_opens: 4, amplitude: 3, max_rank: 3, density: 0.6 };
    let cover = random::cover_with_opens(&mut r, backend, 4, 1.0);
    let t = random::random_tw(&mut r, &cover, &p).unwrap();
    let u = random::random_tw(&mut r, &cover, &p).unwrap();
    (t, u)
}

fn bench(c: &mut Criterion) {
    let pools = pools();
    let mut g = c.benchmark_group("parallel_vs_sequential");
    g.sample_size(10);

    for backend in [Backend::Rationals, Backend::Laurent] {
        let (t, u) = objects(backend, 17);
        let mut r = ChaCha8Rng::seed_from_u64(18);
        let theta = random::random_cochain(&mut r, t.site(), t.locals(), u.locals(), 0, 3, 0.6);
        for (label, pool) in &pools {
            g.bench_function(BenchmarkId::new(format!("mc_check_tw/{}", backend.name()), label), |b| {
                b.iter(|| pool.install(|| black_box(mc_check_tw(black_box(&t)))))
            });
            g.bench_function(BenchmarkId::new(format!("tw_mor_diff/{}", backend.name()), label), |b| {
                b.iter(|| pool.install(|| black_box(tw_mor_diff(&t, &u, black_box(&theta)).unwrap())))
            });
        }
    }

    let (t, _) = objects(Backend::F101, 19);
    let tot = twisted_to_tot(&t).unwrap();
    for (label, pool) in &pools {
        g.bench_function(BenchmarkId::new("mc_check_tot/F101", label), |b| {
            b.iter(|| pool.install(|| black_box(mc_check_tot(black_box(&tot)))))
        });
    }

    let p1 = projective_line();
    let (o, o12) = (p1_line_bundle(&p1, 0), p1_line_bundle(&p1, 12));
    for (label, pool) in &pools {
        g.bench_function(BenchmarkId::new("hom_cohomology/O(12)", label), |b| {
            b.iter(|| pool.install(|| black_box(hom_cohomology(&o, &o12, 0..=1, None).unwrap())))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);

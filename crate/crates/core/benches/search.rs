use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use masonabc::search::random::random_factored_list;
use masonabc::search::{brute_force_bounds, fermat_search, FermatSpace, SearchSpace};
use masonabc::sumsystem::divisor_chain;
use masonabc::{CycloField, Exec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bounds_catalog(c: &mut Criterion) {
    let space = SearchSpace::integers(3, 1, -2..=2);
    let mut group = c.benchmark_group("brute_force_bounds");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| brute_force_bounds(&space, exec).expect("within budget"))
        });
    }
    group.finish();
}

fn fermat(c: &mut Criterion) {
    let space = FermatSpace::integers([3, 3, 3], 2, -2..=2);
    let mut group = c.benchmark_group("fermat_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fermat_search(&space, exec).expect("within budget"))
        });
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let field = CycloField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lists: Vec<_> = (0..8).map(|_| random_factored_list(&mut rng, &field, 8)).collect();
    let mut group = c.benchmark_group("divisor_chain");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for fs in &lists {
                    divisor_chain(fs, exec).expect("nonzero terms");
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bounds_catalog, fermat, chains);
criterion_main!(benches);

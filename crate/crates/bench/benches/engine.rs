use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use chorec_bench::projectable_corpus;
use chorec_core::recfun::compiled;
use chorec_core::sem::{enabled_redexes, execute};
use chorec_core::sp::net_execute;
use chorec_core::{amend, check_correspondence, epp, implement_function, Mode, ProcState, RecFun};

fn run_add(c: &mut Criterion) {
    let mut group = c.benchmark_group("add");
    for mode in [Mode::Choreography, Mode::Network, Mode::Parallel] {
        for n in [4u64, 16] {
            group.bench_with_input(BenchmarkId::new(mode.to_string(), n), &n, |b, &n| {
                b.iter(|| implement_function(&RecFun::add(), &[n.into(), n.into()], 1_000_000, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn run_sub(c: &mut Criterion) {
    let f = RecFun::sub();
    let chor = compiled(&f, Mode::Choreography).unwrap();
    let state = chorec_bench::inputs(&[6, 2]);
    c.bench_function("sub/execute", |b| b.iter(|| execute(black_box(&chor), &state, 1_000_000)));
    let net = epp(&chor, &state).unwrap();
    c.bench_function("sub/net_execute", |b| b.iter(|| net_execute(black_box(&net), 1_000_000)));
}

fn projection(c: &mut Criterion) {
    let corpus = projectable_corpus(7, 100);
    let raw: Vec<_> = corpus.iter().map(|c| c.strip_annotations()).collect();
    c.bench_function("amend/100", |b| b.iter(|| raw.iter().map(amend).count()));
    c.bench_function("epp/100", |b| b.iter(|| corpus.iter().filter(|c| epp(c, &ProcState::new()).is_ok()).count()));
    c.bench_function("enabled_redexes/100", |b| {
        b.iter(|| corpus.iter().map(|c| enabled_redexes(black_box(c)).len()).sum::<usize>())
    });
}

fn correspondence(c: &mut Criterion) {
    let corpus = projectable_corpus(11, 20);
    c.bench_function("check_correspondence/20", |b| {
        b.iter(|| corpus.iter().filter(|c| check_correspondence(c, &ProcState::new(), 20, 1_000).unwrap().passed()).count())
    });
}

criterion_group!(benches, run_add, run_sub, projection, correspondence);
criterion_main!(benches);

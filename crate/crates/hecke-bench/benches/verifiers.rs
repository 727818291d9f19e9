use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hecke::metaplectic::{scattering_dictionary_check, verify_cover};
use hecke::rmatrix::{check_pybe, r_affine, tensor_bernstein_weights, tensor_schema_instance};
use hecke::schema::generic_instance;
use hecke::whittaker::{idempotent_apply, whittaker_schema_instance};
use hecke::{CartanType, GaussOrientation, RMatrixSpec, TensorSchemaOptions};
use hecke_bench::{cartan, covers};

fn schema_relations(c: &mut Criterion) {
    let mut g = c.benchmark_group("schema");
    g.sample_size(10);
    for t in [CartanType::A(2), CartanType::C2, CartanType::G2] {
        let inst = generic_instance(cartan(t)).unwrap();
        g.bench_with_input(BenchmarkId::new("generic relations", t), &inst, |b, inst| b.iter(|| inst.check_relations()));
        let dat = cartan(t);
        let wh = whittaker_schema_instance(dat.clone());
        g.bench_with_input(BenchmarkId::new("whittaker verify", t), &wh, |b, inst| b.iter(|| inst.verify(&dat.lattice_basis)));
    }
    g.finish();
}

fn casselman_shalika(c: &mut Criterion) {
    let mut g = c.benchmark_group("casselman-shalika");
    for (t, lambda) in [(CartanType::A(2), vec![2, 1, 0]), (CartanType::C2, vec![2, 1]), (CartanType::G2, vec![2, -1, -1])] {
        let dat = cartan(t);
        g.bench_function(BenchmarkId::new("idempotent", t), |b| b.iter(|| idempotent_apply(dat.clone(), black_box(&lambda)).unwrap()));
    }
    g.finish();
}

fn r_matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("r-matrix");
    g.sample_size(10);
    for n in [2, 3] {
        let spec = RMatrixSpec::symbolic(n);
        g.bench_function(BenchmarkId::new("parametrized YBE", n), |b| b.iter(|| check_pybe("R", |x| r_affine(&spec, x), &spec.ctx)));
    }
    let inst = tensor_schema_instance(2, 3, TensorSchemaOptions::default()).unwrap();
    let weights = tensor_bernstein_weights(&inst);
    g.bench_function("tensor schema n=2 r=3", |b| b.iter(|| inst.verify(&weights)));
    g.finish();
}

fn metaplectic(c: &mut Criterion) {
    let mut g = c.benchmark_group("metaplectic");
    g.sample_size(10);
    for (name, d) in covers() {
        g.bench_function(BenchmarkId::new("verify cover", &name), |b| b.iter(|| verify_cover(&d).unwrap()));
        g.bench_function(BenchmarkId::new("met-dz", &name), |b| b.iter(|| d.met_dz_report(2).unwrap()));
    }
    for (r, n) in [(2, 2), (2, 3), (3, 2)] {
        g.bench_function(BenchmarkId::new("dictionary", format!("r={r} n={n}")), |b| {
            b.iter(|| scattering_dictionary_check(r, n, GaussOrientation::Standard).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, schema_relations, casselman_shalika, r_matrices, metaplectic);
criterion_main!(benches);

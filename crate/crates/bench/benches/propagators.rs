use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dampjc_bench::{initial_state, standard};
use dampjc_core::oracle::{expm_propagate, rk4_master};
use dampjc_core::propagators::{
    exp_commutator_closed_form, exp_itx_closed_form, exp_ty_closed_form,
};
use dampjc_core::{IntegrationPlan, ZassenhausOrder, ZassenhausPropagator};

fn factors(c: &mut Criterion) {
    let mut g = c.benchmark_group("factor_build");
    for dim in [6, 12, 24] {
        let p = standard(dim);
        g.bench_with_input(BenchmarkId::new("unitary", dim), &p, |b, p| {
            b.iter(|| exp_itx_closed_form(p, black_box(0.5)))
        });
        g.bench_with_input(BenchmarkId::new("dissipative", dim), &p, |b, p| {
            b.iter(|| exp_ty_closed_form(p, black_box(0.5)))
        });
        g.bench_with_input(BenchmarkId::new("commutator", dim), &p, |b, p| {
            b.iter(|| exp_commutator_closed_form(p, black_box(0.5)))
        });
    }
    g.finish();
}

fn propagation(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagate_t1");
    for dim in [6, 12] {
        let p = standard(dim);
        let rho = initial_state(dim);
        let v = rho.to_vectorized();
        for order in [ZassenhausOrder::Two, ZassenhausOrder::Three] {
            let prop = ZassenhausPropagator::new(&p, 1.0, order).unwrap();
            g.bench_with_input(
                BenchmarkId::new(format!("zassenhaus{}_apply", order.as_u8()), dim),
                &v,
                |b, v| b.iter(|| prop.propagate(v)),
            );
        }
        g.bench_with_input(
            BenchmarkId::new("zassenhaus2_build_and_apply", dim),
            &v,
            |b, v| {
                b.iter(|| {
                    ZassenhausPropagator::new(&p, 1.0, ZassenhausOrder::Two)
                        .unwrap()
                        .propagate(v)
                })
            },
        );
        let plan = IntegrationPlan::endpoints(1.0, 200).unwrap();
        g.bench_with_input(BenchmarkId::new("rk4_200_steps", dim), &rho, |b, rho| {
            b.iter(|| rk4_master(&p, rho, &plan))
        });
    }
    g.sample_size(10);
    for dim in [6, 8] {
        let p = standard(dim);
        let v = initial_state(dim).to_vectorized();
        g.bench_with_input(BenchmarkId::new("expm_oracle", dim), &v, |b, v| {
            b.iter(|| expm_propagate(&p, v, 1.0))
        });
    }
    g.finish();
}

criterion_group!(benches, factors, propagation);
criterion_main!(benches);

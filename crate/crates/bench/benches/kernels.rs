use criterion::{black_box, criterion_group, criterion_main, Criterion};

use colorpoincare_core::grassmann::{normal_order, Sweep};
use colorpoincare_core::representation::Representation;
use colorpoincare_core::superalgebra::build_four_component;
use colorpoincare_core::{parse_expr, CliffordData, CouplingConfig, Family, Generator, GradingConfig, Multivector};

fn grassmann(c: &mut Criterion) {
    let grading = GradingConfig::new(0).unwrap();
    let word: Vec<Generator> =
        [Family::EtaBar, Family::ThetaBarB, Family::ThetaG, Family::Eta, Family::ThetaR, Family::ThetaBarR]
            .iter()
            .enumerate()
            .map(|(i, f)| Generator::new(&grading, *f, 1 + (i as u32 % 2)))
            .collect();
    c.bench_function("normal_order/six_generators", |b| b.iter(|| normal_order(black_box(&word), Sweep::LeftToRight)));

    let a = parse_expr(&grading, "(1 + q*th_r[1] + th_g[1]*thb_b[2])*(eta[1] - z8*thb_r[2] + 2)").unwrap();
    let b: Multivector = parse_expr(&grading, "(th_b[1] + q^-1*etab[2])*(1 - th_r[2]*thb_g[1] + eta[3])").unwrap();
    c.bench_function("multivector/product", |bench| bench.iter(|| black_box(&a).mul(black_box(&b))));
}

fn algebra(c: &mut Criterion) {
    let grading = GradingConfig::new(0).unwrap();
    let f = grading.field();
    let cd = CliffordData::frozen(f);
    let coupling = CouplingConfig::new(f);
    let sc = build_four_component(&coupling, &cd, grading).unwrap();
    let subset: Vec<usize> = (0..sc.len()).step_by(6).collect();
    c.bench_function("jacobi/every_sixth_basis_element", |b| {
        b.iter(|| sc.jacobi_report_on(black_box(&subset), "jacobi subset"))
    });

    let rep = Representation::for_algebra(&sc, &cd, &coupling).unwrap();
    let (x, y) = (rep.gamma(10), rep.gamma(20));
    c.bench_function("sparse/100x100_product", |b| b.iter(|| black_box(x).mul(black_box(y))));
}

criterion_group!(benches, grassmann, algebra);
criterion_main!(benches);

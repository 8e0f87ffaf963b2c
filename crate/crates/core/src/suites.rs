//! The verification suites run by `verify`. Each returns one report per
//! check; a suite passes when all of its reports do.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clifford::CliffordData;
use crate::expr::parse_expr;
use crate::grading::{in_scope_degrees, Classification, Degree, GradingConfig, GradingError};
use crate::grassmann::{normal_order, Family, Generator, Multivector, Sweep};
use crate::report::{Failure, Report};
use crate::representation::{
    correction_ladder, degree_consistency_report, homogeneity_report, BlockLayout, Representation, RepresentationError,
};
use crate::scalar::Scalar;
use crate::superalgebra::{build, build_four_component, AlgebraError, CouplingConfig, Formulation};
use crate::supergroup::{self, nilpotency_report, GroupOptions, GroupSuite, Supergroup};
use crate::superspace::{self, ActionSuite, DerivativeRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Epsilon,
    Grassmann,
    Algebra,
    Representation,
    Supergroup,
    Superspace,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Epsilon, Suite::Grassmann, Suite::Algebra, Suite::Representation, Suite::Supergroup, Suite::Superspace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Epsilon => "epsilon",
            Suite::Grassmann => "grassmann",
            Suite::Algebra => "algebra",
            Suite::Representation => "representation",
            Suite::Supergroup => "supergroup",
            Suite::Superspace => "superspace",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub grading: GradingConfig,
    pub formulation: Formulation,
    pub coupling: CouplingConfig,
    pub seed: u64,
    /// Sample count for the group and superspace suites; the ε and
    /// Grassmann suites draw ten times as many.
    pub samples: usize,
    /// Corrupts one input of the ε and Grassmann suites, to exercise the
    /// failure path.
    pub inject_fault: bool,
}

impl SuiteConfig {
    pub fn new(n: u32) -> Result<SuiteConfig, SuiteError> {
        let grading = GradingConfig::new(n)?;
        Ok(SuiteConfig {
            grading,
            formulation: Formulation::Four,
            coupling: CouplingConfig::new(grading.field()),
            seed: 1,
            samples: 100,
            inject_fault: false,
        })
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn stamp(&self, report: Report) -> Report {
        report.with_config("seed", self.seed).with_config("n", self.grading.n())
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let reports = match suite {
        Suite::Epsilon => vec![epsilon_report(cfg), classification_report(cfg)],
        Suite::Grassmann => grassmann_reports(cfg),
        Suite::Algebra => algebra_reports(cfg)?,
        Suite::Representation => representation_reports(cfg)?,
        Suite::Supergroup => supergroup_reports(cfg)?,
        Suite::Superspace => superspace_reports(cfg)?,
    };
    let prefix = format!("{}.", suite.name());
    Ok(reports
        .into_iter()
        .map(|mut r| {
            if !r.check.starts_with(&prefix) {
                r.check = format!("{prefix}{}", r.check.replace(' ', "_"));
            }
            cfg.stamp(r)
        })
        .collect())
}

// ---------------------------------------------------------------- epsilon

fn random_degree(rng: &mut ChaCha8Rng) -> Degree {
    Degree::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5))
}

/// Normalization, self-factor and both bicharacter laws: exhaustive over
/// the in-scope degrees, then on random lattice pairs and triples.
pub fn epsilon_report(cfg: &SuiteConfig) -> Report {
    let g = cfg.grading;
    let field = g.field();
    let one = field.one();
    let eps = |x: Degree, y: Degree| -> Scalar {
        let e = g.epsilon(x, y);
        if cfg.inject_fault {
            e.mul(&field.q_pow(g.reduce(x).r as i64))
        } else {
            e
        }
    };
    let mut report = Report::new("epsilon.axioms").with_config("fault_injected", cfg.inject_fault);
    let check_pair = |report: &mut Report, x: Degree, y: Degree| {
        let prod = eps(x, y).mul(&eps(y, x));
        report.check(prod == one, || Failure {
            context: format!("normalization at ({}, {})", x.label(), y.label()),
            lhs: prod.to_string(),
            rhs: "1".into(),
        });
        if prod != one {
            report.tally("normalization", 1);
        }
    };
    let check_self = |report: &mut Report, x: Degree| {
        let s = eps(x, x);
        let ok = s == one || s == one.neg();
        report.check(ok, || Failure {
            context: format!("self-factor at {}", x.label()),
            lhs: s.to_string(),
            rhs: "±1".into(),
        });
        if !ok {
            report.tally("self-factor", 1);
        }
    };
    let check_triple = |report: &mut Report, x: Degree, y: Degree, z: Degree| {
        let left = eps(g.add(x, y), z);
        let left_rhs = eps(x, z).mul(&eps(y, z));
        report.check(left == left_rhs, || Failure {
            context: format!("first-slot bicharacter at ({}, {}; {})", x.label(), y.label(), z.label()),
            lhs: left.to_string(),
            rhs: left_rhs.to_string(),
        });
        if left != left_rhs {
            report.tally("bicharacter, first slot", 1);
        }
        let right = eps(x, g.add(y, z));
        let right_rhs = eps(x, y).mul(&eps(x, z));
        report.check(right == right_rhs, || Failure {
            context: format!("second-slot bicharacter at ({}; {}, {})", x.label(), y.label(), z.label()),
            lhs: right.to_string(),
            rhs: right_rhs.to_string(),
        });
        if right != right_rhs {
            report.tally("bicharacter, second slot", 1);
        }
    };
    let mut degrees: Vec<Degree> = in_scope_degrees().into_iter().map(|d| g.reduce(d)).collect();
    degrees.sort();
    degrees.dedup();
    for &x in &degrees {
        check_self(&mut report, x);
        for &y in &degrees {
            check_pair(&mut report, x, y);
            for &z in &degrees {
                check_triple(&mut report, x, y, z);
            }
        }
    }
    let mut rng = cfg.rng(11);
    let draws = 10 * cfg.samples;
    for _ in 0..draws {
        let (x, y, z) =
            (g.reduce(random_degree(&mut rng)), g.reduce(random_degree(&mut rng)), g.reduce(random_degree(&mut rng)));
        check_self(&mut report, x);
        check_pair(&mut report, x, y);
        check_triple(&mut report, x, y, z);
    }
    report.with_config("in_scope_degrees", degrees.len()).with_config("random_draws", draws)
}

/// A product of generators split into the building blocks of the
/// classification list, or `None` when no split exists.
fn classify_by_list(degrees: &[Degree]) -> Option<Classification> {
    const FERMIONS: [&[Degree]; 4] = [
        &[Degree::WHITE],
        &[Degree::ANTIWHITE],
        &[Degree::RED, Degree::GREEN, Degree::BLUE],
        &[Degree::ANTIRED, Degree::ANTIGREEN, Degree::ANTIBLUE],
    ];
    const BOSONS: [&[Degree]; 3] =
        [&[Degree::RED, Degree::ANTIRED], &[Degree::GREEN, Degree::ANTIGREEN], &[Degree::BLUE, Degree::ANTIBLUE]];
    fn remove(rest: &[Degree], atom: &[Degree]) -> Option<Vec<Degree>> {
        let mut left = rest.to_vec();
        for d in atom {
            let k = left.iter().position(|x| x == d)?;
            left.remove(k);
        }
        Some(left)
    }
    // parity of fermionic building blocks, if a split exists
    fn split(rest: &[Degree]) -> Option<bool> {
        let Some(first) = rest.first() else { return Some(false) };
        let atoms = FERMIONS.iter().map(|a| (a, true)).chain(BOSONS.iter().map(|a| (a, false)));
        for (atom, odd) in atoms {
            if !atom.contains(first) {
                continue;
            }
            if let Some(parity) = remove(rest, atom).and_then(|left| split(&left)) {
                return Some(parity ^ odd);
            }
        }
        None
    }
    split(degrees).map(|odd| if odd { Classification::Fermionic } else { Classification::Bosonic })
}

/// `classify` against the fermion/boson list on every product of at most
/// three generators, and against direct ε evaluation on [−2, 2]³.
pub fn classification_report(cfg: &SuiteConfig) -> Report {
    let mut report = Report::new("epsilon.classification");
    let lattice = GradingConfig::new(0).expect("Z^3 grading");
    let gens = lattice.generator_degrees();
    let mut words: Vec<Vec<Degree>> = Vec::new();
    for a in 0..8 {
        words.push(vec![gens[a]]);
        for b in a..8 {
            words.push(vec![gens[a], gens[b]]);
            for c in b..8 {
                words.push(vec![gens[a], gens[b], gens[c]]);
            }
        }
    }
    for w in &words {
        let total = w.iter().fold(Degree::ZERO, |acc, &d| acc + d);
        let expected = classify_by_list(w).unwrap_or(Classification::Exotic);
        let got = lattice.classify(total);
        report.check(got == expected, || Failure {
            context: format!("product of degrees {}", w.iter().map(|d| d.label()).collect::<Vec<_>>().join(" ")),
            lhs: format!("{got:?}"),
            rhs: format!("{expected:?}"),
        });
    }
    let g = if cfg.grading.n() == 0 { cfg.grading } else { lattice };
    for r in -2..=2 {
        for gg in -2..=2 {
            for b in -2..=2 {
                let d = Degree::new(r, gg, b);
                let (fast, slow) = (g.classify(d), g.classify_by_evaluation(d));
                report.check(fast == slow, || Failure {
                    context: format!("degree {}", d.label()),
                    lhs: format!("{fast:?}"),
                    rhs: format!("{slow:?}"),
                });
            }
        }
    }
    report.with_config("products", words.len())
}

// -------------------------------------------------------------- grassmann

/// The commutation rules displayed for the generators, each written as an
/// expression that must normalize to zero.
pub fn displayed_rules(fault: bool) -> Vec<(&'static str, String)> {
    let mut rules = Vec::new();
    for e in ["eta[1]*eta[2] + eta[2]*eta[1]", "etab[1]*etab[2] + etab[2]*etab[1]", "eta[1]*etab[2] + etab[2]*eta[1]"] {
        rules.push(("eta anticommutation", e.to_string()));
    }
    let q = if fault { "q^-1" } else { "q" };
    for (a, b) in [("r", "g"), ("g", "b"), ("b", "r")] {
        rules.push(("theta q-commutation", format!("th_{a}[1]*th_{b}[1] - {q}*th_{b}[1]*th_{a}[1]")));
        rules.push(("theta-bar q-commutation", format!("thb_{a}[1]*thb_{b}[1] - {q}*thb_{b}[1]*thb_{a}[1]")));
    }
    let thetas = ["th_r", "th_g", "th_b", "thb_r", "thb_g", "thb_b"];
    for t in thetas {
        rules.push(("same-color anticommutation", format!("{t}[1]*{t}[2] + {t}[2]*{t}[1]")));
        for e in ["eta", "etab"] {
            rules.push(("theta-eta anticommutation", format!("{t}[1]*{e}[1] + {e}[1]*{t}[1]")));
        }
    }
    for fam in Family::GENERATOR_FAMILIES {
        rules.push(("nilpotency", format!("{}[1]^2", fam.name())));
    }
    rules
}

fn generator_pool(g: &GradingConfig) -> Vec<Generator> {
    Family::GENERATOR_FAMILIES.iter().flat_map(|&f| (1..=2).map(move |i| Generator::new(g, f, i))).collect()
}

fn random_scalar(rng: &mut ChaCha8Rng, g: &GradingConfig) -> Scalar {
    let f = g.field();
    let c = f.frac(rng.gen_range(-3..=3i64).max(1) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=2));
    c.mul(&f.q_pow(rng.gen_range(-1..=1))).mul(&f.zeta8(rng.gen_range(0..8)))
}

fn random_word(rng: &mut ChaCha8Rng, pool: &[Generator], max_len: usize) -> Vec<Generator> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *pool.choose(rng).expect("pool")).collect()
}

fn random_multivector(rng: &mut ChaCha8Rng, g: &GradingConfig, pool: &[Generator]) -> Multivector {
    let mut out = Multivector::zero(g.field());
    for _ in 0..rng.gen_range(1..=3) {
        let w = random_word(rng, pool, 4);
        out.add_assign(&Multivector::from_word(g.field(), random_scalar(rng, g), &w));
    }
    out
}

/// A nonzero homogeneous element: a word, plus optionally the same word
/// times a degree-zero pair.
fn random_homogeneous(rng: &mut ChaCha8Rng, g: &GradingConfig, pool: &[Generator]) -> (Multivector, Degree) {
    let f = g.field();
    loop {
        let w = random_word(rng, pool, 3);
        let mut out = Multivector::from_word(f, random_scalar(rng, g), &w);
        if out.is_zero() {
            continue;
        }
        if rng.gen_bool(0.5) {
            let pair = [(Family::ThetaR, Family::ThetaBarR), (Family::Eta, Family::EtaBar)][rng.gen_range(0..2)];
            let mut w2 = w.clone();
            w2.push(Generator::new(g, pair.0, 3));
            w2.push(Generator::new(g, pair.1, 3));
            out.add_assign(&Multivector::from_word(f, random_scalar(rng, g), &w2));
        }
        let d = w.iter().fold(Degree::ZERO, |acc, x| g.add(acc, x.degree));
        return (out, d);
    }
}

pub fn grassmann_reports(cfg: &SuiteConfig) -> Vec<Report> {
    let g = cfg.grading;
    let f = g.field();
    let pool = generator_pool(&g);
    let draws = 10 * cfg.samples;
    let mut out = Vec::new();

    let mut rules = Report::new("grassmann.displayed_rules").with_config("fault_injected", cfg.inject_fault);
    for (family, text) in displayed_rules(cfg.inject_fault) {
        match parse_expr(&g, &text) {
            Ok(v) => {
                rules.check(v.is_zero(), || Failure {
                    context: format!("{family}: {text}"),
                    lhs: v.to_string(),
                    rhs: "0".into(),
                });
                if !v.is_zero() {
                    rules.tally(family, 1);
                }
            }
            Err(e) => rules.fail(format!("{family}: {text}"), e.to_string(), "parsed"),
        }
    }
    out.push(rules);

    let mut rng = cfg.rng(21);
    let mut assoc = Report::new("grassmann.associativity");
    for _ in 0..draws {
        let (a, b, c) = (
            random_multivector(&mut rng, &g, &pool),
            random_multivector(&mut rng, &g, &pool),
            random_multivector(&mut rng, &g, &pool),
        );
        let (l, r) = (a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assoc.check(l == r, || Failure { context: format!("({a})({b})({c})"), lhs: l.to_string(), rhs: r.to_string() });
    }
    out.push(assoc);

    let mut comm = Report::new("grassmann.epsilon_commutativity");
    for _ in 0..draws {
        let ((a, da), (b, db)) = (random_homogeneous(&mut rng, &g, &pool), random_homogeneous(&mut rng, &g, &pool));
        let (l, r) = (a.mul(&b), b.mul(&a).scale(&g.epsilon(da, db)));
        comm.check(l == r, || Failure { context: format!("a={a}, b={b}"), lhs: l.to_string(), rhs: r.to_string() });
    }
    out.push(comm);

    // For the kernel derivative, ∂_i∂_j = ε(d_j, d_i)∂_j∂_i follows from its
    // defining rule; the form with the arguments the other way round is
    // counted alongside.
    let mut exchange = Report::new("grassmann.derivative_exchange");
    let mut stated_form_failures = 0u64;
    for _ in 0..draws {
        let (x, y) = (*pool.choose(&mut rng).unwrap(), *pool.choose(&mut rng).unwrap());
        let base = random_multivector(&mut rng, &g, &pool);
        let phi = base
            .add(&Multivector::from_word(f, random_scalar(&mut rng, &g), &[x, y]))
            .add(&Multivector::from_word(f, random_scalar(&mut rng, &g), &[y, pool[rng.gen_range(0..pool.len())], x]));
        let xy = phi.derivative(&y).derivative(&x);
        let yx = phi.derivative(&x).derivative(&y);
        let rhs = yx.scale(&g.epsilon(y.degree, x.degree));
        exchange.check(xy == rhs, || Failure {
            context: format!("d/d{x} d/d{y} on {phi}"),
            lhs: xy.to_string(),
            rhs: rhs.to_string(),
        });
        if xy != yx.scale(&g.epsilon(x.degree, y.degree)) {
            stated_form_failures += 1;
        }
    }
    out.push(exchange.with_config("arguments_swapped_failures", stated_form_failures));

    // The stated Leibniz rule for the kernel derivative. It cannot hold on
    // the algebra once ε takes q values: applied to gh and to ε(d_g,d_h)hg
    // it gives results differing by ε(d_g,d_h)².
    let mut leibniz = Report::new("grassmann.leibniz");
    for _ in 0..draws {
        let x = *pool.choose(&mut rng).unwrap();
        let xm = Multivector::generator(f, x);
        let (a, _) = random_homogeneous(&mut rng, &g, &pool);
        let b = random_multivector(&mut rng, &g, &pool);
        // make x occur in both factors
        let (a, b) = (a.add(&xm.mul(&a)), b.add(&b.mul(&xm)));
        let lhs = a.mul(&b).derivative(&x);
        let rhs = leibniz_rhs(&a, &b, &x, &g);
        leibniz.check(lhs == rhs, || Failure {
            context: format!("d/d{x} of ({a})({b})"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    out.push(leibniz);

    // The move-to-front derivative is well defined on the algebra; it obeys
    // the exchange law ∂_i∂_j = ε(d_i, d_j)∂_j∂_i and the Leibniz rule with
    // ε(d_f, d_x).
    let graded = |phi: &Multivector, y: &Generator| superspace::derivative(phi, y, DerivativeRule::Graded);
    let mut moved = Report::new("grassmann.move_to_front_derivative");
    for _ in 0..draws {
        let (x, y) = (*pool.choose(&mut rng).unwrap(), *pool.choose(&mut rng).unwrap());
        let xm = Multivector::generator(f, x);
        let phi = random_multivector(&mut rng, &g, &pool)
            .add(&Multivector::from_word(f, random_scalar(&mut rng, &g), &[x, y]))
            .add(&Multivector::from_word(f, random_scalar(&mut rng, &g), &[y, pool[rng.gen_range(0..pool.len())], x]));
        let xy = graded(&graded(&phi, &y), &x);
        let yx = graded(&graded(&phi, &x), &y).scale(&g.epsilon(x.degree, y.degree));
        moved.check(xy == yx, || Failure {
            context: format!("exchange of d/d{x}, d/d{y} on {phi}"),
            lhs: xy.to_string(),
            rhs: yx.to_string(),
        });
        let (a, _) = random_homogeneous(&mut rng, &g, &pool);
        let b = random_multivector(&mut rng, &g, &pool);
        let (a, b) = (a.add(&xm.mul(&a)), b.add(&b.mul(&xm)));
        let lhs = graded(&a.mul(&b), &x);
        let mut rhs = Multivector::zero(f);
        for (m, c) in a.terms() {
            let part = Multivector::from_word(f, c.clone(), m.word());
            let eps = g.epsilon(m.degree(&g), x.degree);
            rhs.add_assign(&graded(&part, &x).mul(&b).add(&part.mul(&graded(&b, &x)).scale(&eps)));
        }
        moved.check(lhs == rhs, || Failure {
            context: format!("Leibniz for d/d{x} of ({a})({b})"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    out.push(moved);

    let mut adjoint = Report::new("grassmann.adjoint");
    for _ in 0..draws {
        let (a, b) = (random_multivector(&mut rng, &g, &pool), random_multivector(&mut rng, &g, &pool));
        let c = random_scalar(&mut rng, &g);
        let twice = a.adjoint().adjoint();
        adjoint.check(twice == a, || Failure {
            context: format!("(({a})#)#"),
            lhs: twice.to_string(),
            rhs: a.to_string(),
        });
        let (l, r) = (a.mul(&b).adjoint(), b.adjoint().mul(&a.adjoint()));
        adjoint.check(l == r, || Failure { context: format!("(({a})({b}))#"), lhs: l.to_string(), rhs: r.to_string() });
        let (l, r) = (a.scale(&c).adjoint(), a.adjoint().scale(&c.conj()));
        adjoint.check(l == r, || Failure { context: format!("(({c})({a}))#"), lhs: l.to_string(), rhs: r.to_string() });
    }
    out.push(adjoint);

    let mut confluence = Report::new("grassmann.normal_form_confluence");
    for _ in 0..draws {
        let w = random_word(&mut rng, &pool, 6);
        let (l, r) = (normal_order(&w, Sweep::LeftToRight), normal_order(&w, Sweep::RightToLeft));
        confluence.check(l == r, || Failure {
            context: w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("*"),
            lhs: format!("{l:?}"),
            rhs: format!("{r:?}"),
        });
    }
    out.push(confluence);
    out.into_iter().map(|r| r.with_config("samples", draws)).collect()
}

/// (∂a)b + ε(d_x, d_a) a ∂b, summed over the homogeneous terms of a.
fn leibniz_rhs(a: &Multivector, b: &Multivector, x: &Generator, g: &GradingConfig) -> Multivector {
    let f = g.field();
    let mut out = Multivector::zero(f);
    for (m, c) in a.terms() {
        let part = Multivector::from_word(f, c.clone(), m.word());
        let d = m.degree(g);
        out.add_assign(&part.derivative(x).mul(b).add(&part.mul(&b.derivative(x)).scale(&g.epsilon(x.degree, d))));
    }
    out
}

// ---------------------------------------------------------------- algebra

pub fn algebra_reports(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let cd = CliffordData::frozen(cfg.grading.field());
    let sc = build(cfg.formulation, &cfg.coupling, &cd, cfg.grading)?;
    let label = cd.convention.label();
    let formulation = format!("{:?}", cfg.formulation).to_lowercase();
    Ok([sc.antisymmetry_report(), sc.grading_report(), sc.jacobi_report()]
        .into_iter()
        .map(|r| r.with_config("formulation", formulation.clone()).with_config("convention", label.clone()))
        .collect())
}

fn four_component(cfg: &SuiteConfig) -> Result<(crate::superalgebra::StructureConstants, Representation), SuiteError> {
    let cd = CliffordData::frozen(cfg.grading.field());
    let sc = build_four_component(&cfg.coupling, &cd, cfg.grading)?;
    let rep = Representation::for_algebra(&sc, &cd, &cfg.coupling)?;
    Ok((sc, rep))
}

// --------------------------------------------------------- representation

/// Layout consistency, homogeneity, and the homomorphism check in residual
/// mode: the printed construction is scored, then the correction ladder is
/// applied; the report passes when the ladder ends at zero failing pairs,
/// i.e. every residual is localized to a table-level cause. The printed
/// residuals are kept as ranked tallies per block cell.
pub fn representation_reports(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let (_, rep) = four_component(cfg)?;
    let mut out = vec![degree_consistency_report(&BlockLayout::standard()), homogeneity_report(&rep)];
    let steps = correction_ladder(&cfg.grading, &cfg.coupling, &crate::clifford::Convention::FROZEN)?;
    let ladder: Vec<usize> = steps.iter().map(|s| s.report.failures.len()).collect();
    let printed = &steps[0].report;
    let mut residual = Report::new("representation.homomorphism (residual mode)")
        .with_config("ladder", serde_json::json!(ladder))
        .with_config("printed_failures", printed.failures.len());
    residual.cases = printed.cases;
    residual.tallies = printed.tallies.clone();
    for s in &steps {
        residual.note(format!("{}: {} failing pairs", s.label, s.report.failures.len()));
    }
    let last = steps.last().expect("ladder has steps");
    for f in &last.report.failures {
        residual.fail(format!("unlocalized: {}", f.context), f.lhs.clone(), f.rhs.clone());
    }
    out.push(residual);
    Ok(out)
}

// ------------------------------------------------------------- supergroup

pub fn supergroup_reports(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    let (_, rep) = four_component(cfg)?;
    let group = Supergroup::new(&rep, GroupOptions::default());
    let suite = GroupSuite { group, seed: cfg.seed, samples: cfg.samples, budget: 6 };
    Ok(vec![
        suite.fidelity_report(),
        suite.inverse_report(),
        suite.associativity_report(),
        nilpotency_report(&suite.group),
        supergroup::dimension_audit(),
    ])
}

// ------------------------------------------------------------- superspace

pub fn superspace_reports(cfg: &SuiteConfig) -> Result<Vec<Report>, SuiteError> {
    if cfg.grading.n() != 0 {
        return Err(SuiteError::Unsupported("the superspace suite is defined over Z^3 (n = 0)".into()));
    }
    let (sc, rep) = four_component(cfg)?;
    let group = Supergroup::new(&rep, GroupOptions::default());
    let mut out = vec![superspace::dimension_audit(cfg.grading.field()), superspace::special_cases_report(&group)];
    let suite = ActionSuite { group, seed: cfg.seed, samples: cfg.samples, budget: 4 };
    out.push(suite.associativity_report());
    out.push(suite.identity_report());
    out.push(suite.inverse_report());
    out.push(superspace::frozen_operator_bracket_report(&sc, &rep));
    Ok(out)
}

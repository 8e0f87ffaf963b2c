//! Acceptance run: one PASS/FAIL line per criterion, followed by indented
//! detail lines naming every failing report. Exits 1 when any criterion
//! fails.

use std::time::{Duration, Instant};

use colorpoincare_cli::{run_with, EXIT_FAIL, EXIT_PASS};
use colorpoincare_core::suites::{classification_report, epsilon_report, grassmann_reports};
use colorpoincare_core::superalgebra::convention_search;
use colorpoincare_core::{
    parse_expr, run_suite, Convention, ConventionSpace, Formulation, GradingConfig, Report, Suite, SuiteConfig,
    ROUND_TRIP_CORPUS,
};

struct Outcome {
    passed: bool,
    details: Vec<String>,
}

impl Outcome {
    fn from_reports(reports: &[Report]) -> Outcome {
        let mut details = Vec::new();
        for r in reports.iter().filter(|r| !r.passed()) {
            let n = r.config.get("n").map(|n| format!(" (n={n})")).unwrap_or_default();
            details.push(format!("{}{n}: {} of {} cases failed", r.check, r.failures.len(), r.cases));
        }
        Outcome { passed: details.is_empty(), details }
    }

    fn and(mut self, other: Outcome) -> Outcome {
        self.passed &= other.passed;
        self.details.extend(other.details);
        self
    }

    fn require(mut self, ok: bool, what: impl Into<String>) -> Outcome {
        if !ok {
            self.passed = false;
            self.details.push(what.into());
        }
        self
    }
}

fn config(n: u32) -> SuiteConfig {
    SuiteConfig::new(n).expect("grading")
}

fn suite(s: Suite, cfg: &SuiteConfig) -> Vec<Report> {
    run_suite(s, cfg).unwrap_or_else(|e| panic!("{} suite: {e}", s.name()))
}

fn cli(args: &[&str]) -> i32 {
    let argv = std::iter::once("colorpoincare").chain(args.iter().copied());
    run_with(argv, &mut Vec::new(), &mut Vec::new())
}

fn epsilon_axioms() -> Outcome {
    let reports: Vec<Report> = [0, 3].into_iter().map(|n| epsilon_report(&config(n)).with_config("n", n)).collect();
    Outcome::from_reports(&reports)
}

fn grassmann_kernel() -> Outcome {
    Outcome::from_reports(&grassmann_reports(&config(0)))
}

fn classification() -> Outcome {
    Outcome::from_reports(&[classification_report(&config(0))])
}

fn jacobi() -> Outcome {
    let four = config(0);
    let outcome = convention_search(&ConventionSpace::default(), four.grading, &four.coupling, true);
    let chosen = outcome.two_component.first().map(|(c, _)| *c).or(outcome.passing.first().copied());
    let mut two = config(0);
    two.formulation = Formulation::Two;
    Outcome::from_reports(&suite(Suite::Algebra, &four))
        .and(Outcome::from_reports(&suite(Suite::Algebra, &two)))
        .require(chosen == Some(Convention::FROZEN), "convention search does not land on the built-in convention")
}

fn representation() -> Outcome {
    Outcome::from_reports(&suite(Suite::Representation, &config(0)))
}

fn supergroup() -> Outcome {
    Outcome::from_reports(&suite(Suite::Supergroup, &config(0)))
}

fn superspace() -> Outcome {
    Outcome::from_reports(&suite(Suite::Superspace, &config(0)))
}

fn command_line() -> Outcome {
    let all = cli(&["verify", "all"]);
    let faults: Vec<(&str, i32)> =
        ["epsilon", "grassmann"].iter().map(|s| (*s, cli(&["verify", s, "--inject-fault"]))).collect();
    let mut round_trip = Vec::new();
    for n in [0, 3] {
        let grading = GradingConfig::new(n).expect("grading");
        for text in ROUND_TRIP_CORPUS {
            let value = parse_expr(&grading, text).expect("corpus parses");
            if parse_expr(&grading, &value.to_string()).ok().as_ref() != Some(&value) {
                round_trip.push(format!("n={n}: {text} rendered as {value}"));
            }
        }
    }
    let mut out = Outcome { passed: true, details: Vec::new() }
        .require(all == EXIT_PASS, format!("verify all exited {all}"))
        .require(round_trip.is_empty(), format!("round trip: {}", round_trip.join("; ")));
    for (s, code) in faults {
        out = out.require(code == EXIT_FAIL, format!("verify {s} --inject-fault exited {code}"));
    }
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("commutation factor axioms", epsilon_axioms),
        ("Grassmann kernel", grassmann_kernel),
        ("classification", classification),
        ("Jacobi identity", jacobi),
        ("matrix representation", representation),
        ("supergroup", supergroup),
        ("superspace", superspace),
        ("command line", command_line),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took: Duration = start.elapsed();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("CRITERION {}: {verdict} ({name}, {:.2}s)", i + 1, took.as_secs_f64());
        for d in &outcome.details {
            println!("    {d}");
        }
        all &= outcome.passed;
    }
    if !all {
        std::process::exit(1);
    }
}

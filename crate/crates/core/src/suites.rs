//! Named verification suites. Each suite drives the checks of one module
//! and returns a single [`Report`]; `all` concatenates every suite.

use std::time::Instant;

use num_traits::One;

use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::repr::{baxter_check, rep_check, rep_pi_a, rep_pi_cd, rep_rho};
use crate::rmatrix::{
    verify_braid_with, verify_intertwining, verify_perk_schultz, verify_quasitriangular,
    verify_specialized,
};
use crate::scalars::Rational;
use crate::superalg::Letter;
use crate::{dsl, hopf, pairing};

pub const SUITES: &[&str] = &[
    "perk-schultz",
    "specialized",
    "braid",
    "intertwine",
    "quasitriangular",
    "pairing",
    "hopf",
    "baxter",
    "drinfeld-coproduct",
    "fixtures",
    "representations",
    "dsl",
];

pub type Chain = Vec<(Rational, Rational)>;

/// Knobs shared by all suites. `None` means the suite's own default.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub order: Option<i64>,
    pub seed: u64,
    pub samples: Option<usize>,
    /// `(c, d)` parameter sets for `π_{c,d}`.
    pub params: Vec<(Rational, Rational)>,
    /// Spectral parameter of `π_a`.
    pub a: Rational,
    pub chains: Vec<Chain>,
    /// Largest letter index for pairing and generator sweeps.
    pub index_bound: Option<i64>,
    /// Drop the Koszul sign of the flip in the braid suite.
    pub unsigned_flip: bool,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            order: None,
            seed: 0,
            samples: None,
            params: vec![(rat(2, 1), rat(3, 1)), (rat(3, 1), rat(5, 1))],
            a: Rational::one(),
            chains: vec![
                vec![(rat(2, 1), rat(3, 1))],
                vec![(rat(2, 1), rat(3, 1)), (rat(3, 1), rat(5, 1))],
            ],
            index_bound: None,
            unsigned_flip: false,
        }
    }
}

impl SuiteOptions {
    fn validate(&self) -> Result<()> {
        if self.order.is_some_and(|n| n < 0) {
            return Err(Error::Invalid("order must be nonnegative".into()));
        }
        if self.index_bound.is_some_and(|n| n < 0) {
            return Err(Error::Invalid("index bound must be nonnegative".into()));
        }
        if self.chains.iter().any(|c| c.is_empty()) {
            return Err(Error::Invalid("chains must be nonempty".into()));
        }
        Ok(())
    }

    fn order_or(&self, n: i64) -> i64 {
        self.order.unwrap_or(n)
    }
}

/// The generators the intertwining suite runs on.
pub fn intertwining_generators() -> Vec<Letter> {
    vec![
        Letter::K1(1),
        Letter::K2(1),
        Letter::E(-1),
        Letter::E(0),
        Letter::E(1),
        Letter::F(0),
        Letter::F(1),
        Letter::H(1),
        Letter::H(2),
    ]
}

fn with_error(name: &str, order: i64, r: Result<Report>) -> Report {
    r.unwrap_or_else(|e| {
        let mut report = Report::new(name, order);
        report.push(Check::error("setup", e.to_string()));
        report
    })
}

fn perk_schultz(o: &SuiteOptions) -> Report {
    verify_perk_schultz(o.order_or(8))
}

fn specialized(o: &SuiteOptions) -> Report {
    let n = o.order_or(8);
    let mut report = Report::new("specialized", n);
    for (c, d) in &o.params {
        report.absorb(&format!("({c},{d}) "), verify_specialized(c, d, n));
    }
    report
}

fn braid(o: &SuiteOptions) -> Report {
    verify_braid_with(!o.unsigned_flip)
}

fn intertwine(o: &SuiteOptions) -> Report {
    let n = o.order_or(6);
    with_error(
        "intertwine",
        n,
        (|| {
            let gens = intertwining_generators();
            let mut report = Report::new("intertwine", n);
            let rho = rep_rho();
            report.absorb("(rho,rho) ", verify_intertwining(&rho, &rho, &gens, n));
            let (c1, d1) = (rat(2, 1), rat(3, 1));
            let (c2, d2) = (rat(5, 1), rat(7, 1));
            let (l, r) = (rep_pi_cd(&c1, &d1)?, rep_pi_cd(&c2, &d2)?);
            report.absorb(
                &format!("({},{}) ", l.name(), r.name()),
                verify_intertwining(&l, &r, &gens, n),
            );
            Ok(report)
        })(),
    )
}

fn quasitriangular(o: &SuiteOptions) -> Report {
    let n = o.order_or(5);
    with_error(
        "quasitriangular",
        n,
        (|| {
            let a = rep_pi_a(&o.a)?;
            let b = rep_pi_cd(&rat(2, 1), &rat(3, 1))?;
            let c = rep_pi_cd(&rat(5, 1), &rat(7, 1))?;
            Ok(verify_quasitriangular(&a, &b, &c, n))
        })(),
    )
}

fn pairing_suite(o: &SuiteOptions) -> Report {
    let bound = o.index_bound.unwrap_or(3);
    let window = o.order_or(4);
    let mut report = Report::new("pairing", window).param("index_bound", bound);
    report.absorb(
        "closed = oracle: ",
        pairing::check_closed_vs_oracle(bound, 3),
    );
    report.absorb("currents: ", pairing::check_current_pairings(window));
    report.absorb("cartan lemma: ", pairing::check_cartan_lemma(bound, 3));
    report
}

fn hopf_suite(o: &SuiteOptions) -> Report {
    hopf::check_hopf(o.index_bound.unwrap_or(5), o.samples.unwrap_or(200), o.seed)
}

fn baxter(o: &SuiteOptions) -> Report {
    let n = o.order_or(8);
    let mut report = Report::new("baxter", n).param("a", o.a.to_string());
    for chain in &o.chains {
        let label = chain
            .iter()
            .map(|(c, d)| format!("({c},{d})"))
            .collect::<Vec<_>>()
            .join(";");
        report.absorb(&format!("[{label}] "), baxter_check(&o.a, chain, n, true));
        let control = baxter_check(&o.a, chain, n, false);
        let name = format!("[{label}] unnormalized blocks exceed the bound (control)");
        report.push(match control.failures().next() {
            Some(c) => Check::note(
                name,
                format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
            ),
            None => Check::fail(name, "unnormalized blocks also satisfy the bound"),
        });
    }
    report
}

fn drinfeld(o: &SuiteOptions) -> Report {
    let mut letters = Vec::new();
    for s in 1..=3 {
        letters.extend([Letter::H(s), Letter::H(-s), Letter::C(s), Letter::C(-s)]);
    }
    for n in -1..=1 {
        letters.extend([Letter::E(n), Letter::F(n)]);
    }
    hopf::check_drinfeld(&letters, o.order_or(4))
}

fn fixtures(o: &SuiteOptions) -> Report {
    hopf::check_fixtures(o.order_or(6), &[-2, 0, 1, 3], o.index_bound.unwrap_or(5))
}

fn representations(o: &SuiteOptions) -> Report {
    let bound = o.index_bound.unwrap_or(4);
    with_error(
        "representations",
        bound,
        (|| {
            let mut reps = vec![rep_rho(), rep_pi_a(&rat(1, 1))?, rep_pi_a(&rat(2, 1))?];
            for (c, d) in [(2, 3), (3, 5), (5, 7)] {
                reps.push(rep_pi_cd(&rat(c, 1), &rat(d, 1))?);
            }
            let mut report = Report::new("representations", bound);
            for r in &reps {
                report.absorb(&format!("{} ", r.name()), rep_check(r, bound));
            }
            Ok(report)
        })(),
    )
}

fn dsl_suite(o: &SuiteOptions) -> Report {
    dsl::check_round_trip(o.samples.unwrap_or(100), o.seed)
}

/// Runs the suite called `name` (one of [`SUITES`] or `all`).
pub fn run_suite(name: &str, options: &SuiteOptions) -> Result<Report> {
    options.validate()?;
    let start = Instant::now();
    let mut report = match name {
        "perk-schultz" => perk_schultz(options),
        "specialized" => specialized(options),
        "braid" => braid(options),
        "intertwine" => intertwine(options),
        "quasitriangular" => quasitriangular(options),
        "pairing" => pairing_suite(options),
        "hopf" => hopf_suite(options),
        "baxter" => baxter(options),
        "drinfeld-coproduct" => drinfeld(options),
        "fixtures" => fixtures(options),
        "representations" => representations(options),
        "dsl" => dsl_suite(options),
        "all" => {
            let mut all = Report::new("all", options.order.unwrap_or(-1));
            for s in SUITES {
                all.absorb(&format!("{s}: "), run_suite(s, options)?);
            }
            all
        }
        _ => {
            return Err(Error::Invalid(format!(
                "unknown suite {name}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteOptions {
        SuiteOptions {
            order: Some(2),
            samples: Some(5),
            index_bound: Some(1),
            ..Default::default()
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &SuiteOptions::default()).is_err());
        let bad = SuiteOptions {
            order: Some(-1),
            ..Default::default()
        };
        assert!(run_suite("braid", &bad).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for name in [
            "perk-schultz",
            "specialized",
            "braid",
            "hopf",
            "fixtures",
            "drinfeld-coproduct",
            "dsl",
            "pairing",
        ] {
            let r = run_suite(name, &quick()).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            assert!(!r.checks.is_empty(), "{name}");
        }
    }

    #[test]
    fn inverted_braid_sign_fails_with_witness() {
        let o = SuiteOptions {
            unsigned_flip: true,
            ..Default::default()
        };
        let r = run_suite("braid", &o).unwrap();
        assert!(!r.passed());
        assert!(r
            .failures()
            .all(|c| c.witness.as_deref().is_some_and(|w| w.contains("residual"))));
    }

    #[test]
    fn seeded_reports_are_stable() {
        let a = run_suite("hopf", &quick()).unwrap();
        let b = run_suite("hopf", &quick()).unwrap();
        let strip = |r: &Report| serde_json::to_value(&r.checks).unwrap();
        assert_eq!(strip(&a), strip(&b));
    }
}

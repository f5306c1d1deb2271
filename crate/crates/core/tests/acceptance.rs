//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Every scenario runs once with default parameters and the default seed.
//! A criterion passes when each of its claims passed, the claim's recorded
//! bound equals the criterion tolerance, and the scenario finished inside the
//! runtime budget.

use std::collections::{BTreeMap, BTreeSet};

use gaugelab::params::ParamMap;
use gaugelab::scenarios::{self, Outcome, Status, DEFAULT_SEED};

#[derive(Clone, Copy, Debug)]
enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

struct Criterion {
    title: &'static str,
    budget_seconds: f64,
    claims: &'static [(&'static str, &'static str, Bound)],
}

use Bound::*;

const CRITERIA: &[Criterion] = &[
    Criterion {
        title: "Yang operator identity and bound-state contrast",
        budget_seconds: 10.0,
        claims: &[
            ("yang_failure", "yang-free-identity", AtMost(1e-14)),
            ("yang_failure", "hamiltonian-bound-count", AtLeast(3.0)),
            ("yang_failure", "yang-bound-count", AtMost(0.0)),
        ],
    },
    Criterion {
        title: "temporal-gauge Yang spectrum equals the free spectrum",
        budget_seconds: 60.0,
        claims: &[("yang_failure", "temporal-gauge-free-spectrum", AtMost(1e-9))],
    },
    Criterion {
        title: "Hamiltonian non-invariance and energy by separation",
        budget_seconds: 30.0,
        claims: &[
            ("hamiltonian_noninvariance", "constant-gauge-shift", AtMost(1e-12)),
            ("hamiltonian_noninvariance", "separation-constant-gauge", AtMost(1e-9)),
            ("hamiltonian_noninvariance", "separation-temporal-gauge", AtMost(1e-9)),
        ],
    },
    Criterion {
        title: "gauge covariance of the wave operator",
        budget_seconds: 180.0,
        claims: &[
            ("evolution_covariance", "schrodinger-covariance", AtMost(1e-6)),
            ("evolution_covariance", "dirac-covariance", AtMost(1e-6)),
            ("evolution_covariance", "schrodinger-dt-order", Within(1.8, 2.2)),
            ("evolution_covariance", "dirac-dt-order", Within(1.8, 2.2)),
        ],
    },
    Criterion {
        title: "momentum expectation shift law",
        budget_seconds: 30.0,
        claims: &[("hamiltonian_noninvariance", "momentum-shift-order", Within(1.8, 2.2))],
    },
    Criterion {
        title: "kinetic momentum commutator",
        budget_seconds: 10.0,
        claims: &[
            ("kinetic_momentum_commutator", "linear-potential-exact", AtMost(1e-12)),
            ("kinetic_momentum_commutator", "smooth-potential-order", Within(1.8, 2.2)),
        ],
    },
    Criterion {
        title: "Helmholtz decomposition",
        budget_seconds: 10.0,
        claims: &[
            ("helmholtz_decomposition", "reconstruction", AtMost(1e-12)),
            ("helmholtz_decomposition", "phys-divergence-free", AtMost(1e-10)),
            ("helmholtz_decomposition", "pure-curl-free", AtMost(1e-10)),
            ("helmholtz_decomposition", "physical-part-invariance", AtMost(1e-10)),
            ("helmholtz_decomposition", "pure-part-transformation", AtMost(1e-10)),
        ],
    },
    Criterion {
        title: "physical energy operator",
        budget_seconds: 120.0,
        claims: &[
            ("chen_invariance", "chen-spectrum-invariance", AtMost(1e-9)),
            ("chen_invariance", "chen-static-consistency", AtMost(1e-9)),
        ],
    },
    Criterion {
        title: "static gauge spectral invariance",
        budget_seconds: 120.0,
        claims: &[("landau_gauge_pair", "static-gauge-spectral-invariance", AtMost(1e-9))],
    },
    Criterion {
        title: "stationary-state phase",
        budget_seconds: 60.0,
        claims: &[
            ("stationary_phase", "overlap-modulus", AtMost(1e-10)),
            ("stationary_phase", "phase-rate", AtMost(1e-10)),
            ("stationary_phase", "transformed-modulus", AtMost(1e-10)),
        ],
    },
];

const ANCHORS: &[&str] = &[
    "yang-operator-reduces-to-free-kinetic",
    "soft-coulomb-bound-levels",
    "temporal-gauge-unitary-map",
    "hamiltonian-spectrum-gauge-dependent",
    "energy-by-separation",
    "canonical-momentum-expectation-shift",
    "wave-operator-gauge-covariance",
    "probability-density-gauge-invariance",
    "crank-nicolson-unitarity",
    "kinetic-momentum-commutator",
    "pure-physical-split",
    "split-transformation-law",
    "physical-energy-operator",
    "physical-energy-operator-static-limit",
    "static-gauge-unitary-equivalence",
    "stationary-state-separation",
    "transformed-stationary-state",
];

fn bound_matches(bound: Bound, lower: Option<f64>, upper: Option<f64>) -> bool {
    match bound {
        AtMost(u) => lower.is_none() && upper == Some(u),
        AtLeast(l) => lower == Some(l) && upper.is_none(),
        Within(l, u) => lower == Some(l) && upper == Some(u),
    }
}

fn evaluate(c: &Criterion, runs: &BTreeMap<&str, Outcome>) -> Result<String, String> {
    let mut shown = Vec::new();
    let mut problems = Vec::new();
    for (scenario, id, bound) in c.claims {
        let outcome = &runs[scenario];
        let Some(claim) = outcome.report.claim(id) else {
            problems.push(format!("{scenario}/{id} missing"));
            continue;
        };
        let measured = claim.measured.map_or("-".into(), |m| format!("{m:.3e}"));
        shown.push(format!("{id}={measured}"));
        if claim.status != Status::Pass {
            problems.push(format!("{id} is {:?} ({measured})", claim.status));
        }
        if !bound_matches(*bound, claim.lower, claim.upper) {
            problems.push(format!("{id} bound {:?}/{:?}, expected {bound:?}", claim.lower, claim.upper));
        }
        if outcome.wall_seconds > c.budget_seconds {
            problems.push(format!("{scenario} took {:.1} s > {} s", outcome.wall_seconds, c.budget_seconds));
        }
    }
    if problems.is_empty() {
        Ok(shown.join(" "))
    } else {
        Err(problems.join("; "))
    }
}

#[test]
fn acceptance_criteria() {
    let params = ParamMap::new();
    let mut runs = BTreeMap::new();
    for s in scenarios::registry() {
        let outcome = scenarios::run(s.name(), &params, DEFAULT_SEED).unwrap_or_else(|e| panic!("{}: {e}", s.name()));
        runs.insert(s.name(), outcome);
    }

    let mut failed = 0;
    for (k, c) in CRITERIA.iter().enumerate() {
        match evaluate(c, &runs) {
            Ok(detail) => println!("criterion {:2}: PASS  {}  [{detail}]", k + 1, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {:2}: FAIL  {}  [{why}]", k + 1, c.title);
            }
        }
    }
    for (name, o) in &runs {
        println!("  {name}: {:.1} s", o.wall_seconds);
    }

    let mut seen = BTreeSet::new();
    for o in runs.values() {
        for claim in &o.report.claims {
            assert!(
                ANCHORS.contains(&claim.anchor.as_str()),
                "{}: claim {} has unlisted anchor {}",
                o.report.scenario,
                claim.id,
                claim.anchor
            );
            seen.insert(claim.anchor.clone());
        }
    }
    let missing: Vec<_> = ANCHORS.iter().filter(|a| !seen.contains(**a)).collect();
    assert!(missing.is_empty(), "anchors without a claim: {missing:?}");
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}

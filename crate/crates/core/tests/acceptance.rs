//! Acceptance suite: one PASS/FAIL line per criterion. Every check is exact except the
//! floating-point polynomial oracle, whose relative tolerance is pinned at 1e-9. Runtime
//! limits are the stated targets, measured on the current machine.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tight_design::arith::Rational;
use tight_design::construct::{build_design, WeightedPointSet};
use tight_design::design::{strength_oracles, FLOAT_TOLERANCE};
use tight_design::lattice::{alternate_anchors, canonical_anchors, FinckePohstEnumerator};
use tight_design::report::VerificationReport;
use tight_design::verify::{
    compute_tensor, verify_anchor_independence, verify_coherent, verify_construction, verify_design, verify_sphere,
    verify_unique, VerifyOptions,
};

const PINNED_FLOAT_TOLERANCE: f64 = 1e-9;
const SEED: u64 = 1;

struct Criterion {
    number: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Whether every claim whose id starts with one of `prefixes` passes (and at least one exists).
fn claims_pass(report: &VerificationReport, prefixes: &[&str]) -> (bool, String) {
    let selected: Vec<_> = report.claims.iter().filter(|c| prefixes.iter().any(|p| c.claim.starts_with(p))).collect();
    let failed: Vec<_> = selected.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect();
    let detail = if failed.is_empty() {
        format!("{} claims", selected.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    (!selected.is_empty() && failed.is_empty(), detail)
}

fn mutated(x: &WeightedPointSet) -> WeightedPointSet {
    let l = &x.layers[0].points;
    let mirror = l[1].sub(&l[2]).sub(&l[3].scale(&Rational::frac(1, 3)));
    x.with_point_reflected(0, 0, &mirror).expect("mirror is nonzero")
}

fn main() -> ExitCode {
    let (a, b) = canonical_anchors();
    let opts = VerifyOptions { seed: SEED, float_oracle: true };
    let mut out = Vec::new();

    let (design, build_time) = timed(|| build_design(&a, &b).expect("construction"));
    let (construction, shell_time) = timed(|| verify_construction(&FinckePohstEnumerator, &a, &b, &design));
    let (ok, detail) = claims_pass(&construction, &["construction/"]);
    let limit = Duration::from_secs(120);
    out.push(Criterion {
        number: 1,
        name: "construction counts",
        pass: ok && build_time + shell_time < limit,
        detail: format!("{detail}; {:.1?} (limit {limit:?})", build_time + shell_time),
    });

    let hist = design.frame().expect("frame").pair_histogram();
    let (design_report, design_time) = timed(|| verify_design(&design, &hist, &opts));
    let (ok, detail) = claims_pass(&design_report, &["parameters/"]);
    out.push(Criterion { number: 2, name: "parameter reproduction", pass: ok, detail });

    let (ok, detail) = claims_pass(&design_report, &["strength/"]);
    let limit = Duration::from_secs(600);
    out.push(Criterion {
        number: 3,
        name: "design strength",
        pass: ok && design_time < limit,
        detail: format!("{detail}; {design_time:.1?} (limit {limit:?})"),
    });

    let sphere = verify_sphere(&design, &hist, &a, &b);
    let (ok_layers, d1) = claims_pass(&design_report, &["spherical/"]);
    let (ok_z, d2) = claims_pass(&sphere, &["z/", "y/cardinality", "y/antipodal-pairs"]);
    out.push(Criterion { number: 4, name: "spherical strengths", pass: ok_layers && ok_z, detail: format!("{d1}; {d2}") });

    let (coherent, tensor) = verify_coherent(&design);
    let (ok, detail) = claims_pass(&coherent, &["coherent/"]);
    out.push(Criterion { number: 5, name: "coherent configuration", pass: ok, detail });

    let ((unique, _), unique_time) = timed(|| verify_unique(&design, &a, &b));
    let (ok, detail) = claims_pass(&unique, &["unique/", "twin/"]);
    let limit = Duration::from_secs(1800);
    out.push(Criterion {
        number: 6,
        name: "uniqueness",
        pass: ok && unique_time < limit,
        detail: format!("{detail}; {unique_time:.1?} (limit {limit:?})"),
    });

    let (ok, detail) = claims_pass(&sphere, &["y/projection-equals-inner-layer", "y/antipodal"]);
    out.push(Criterion { number: 7, name: "cross-construction identity", pass: ok, detail });

    let (c, d) = alternate_anchors();
    let other = build_design(&c, &d).expect("alternate construction");
    let other_hist = other.frame().expect("frame").pair_histogram();
    let anchors = verify_anchor_independence((&hist, &tensor), (&other_hist, &compute_tensor(&other)));
    let (ok, detail) = claims_pass(&anchors, &["anchors/"]);
    out.push(Criterion { number: 8, name: "anchor independence", pass: ok, detail });

    let bad = mutated(&design);
    let mut verdicts = Vec::new();
    let mut agree = FLOAT_TOLERANCE == PINNED_FLOAT_TOLERANCE;
    for oracle in strength_oracles().create_all() {
        let good = oracle.check(&design, 6, SEED).map(|v| v.pass).unwrap_or(false);
        let broken = oracle.check(&bad, 6, SEED).map(|v| v.pass).unwrap_or(true);
        agree &= good && !broken;
        verdicts.push(format!("{}: X {}, mutated {}", oracle.name(), good, broken));
    }
    out.push(Criterion {
        number: 9,
        name: "oracle agreement",
        pass: agree,
        detail: format!("{}; tolerance {FLOAT_TOLERANCE:e}", verdicts.join("; ")),
    });

    let mut all = true;
    for c in &out {
        println!("{} criterion {} ({}): {}", if c.pass { "PASS" } else { "FAIL" }, c.number, c.name, c.detail);
        all &= c.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

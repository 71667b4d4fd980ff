//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nachbin_core::approximation::{dieudonne_sequence, sw_approximate};
use nachbin_core::order::enumerate;
use nachbin_core::plus::roundtrip_pq;
use nachbin_core::proximity::{check_axioms, is_nachbin, r2_carrier};
use nachbin_core::rational::inv_pow2;
use nachbin_core::sampling::Sampler;
use nachbin_core::sbal::{check_skeleton_axioms, envelope_ops, envelope_umt, EnvelopeOp, EnvelopeValue, SbalMorphism};
use nachbin_core::spectrum::{enumerate_adjunction, eta, induced_order, phi};
use nachbin_core::*;

const CRITERION_1_BUDGET: Duration = Duration::from_secs(60);
const AXIOM_SUITE_BUDGET: Duration = Duration::from_secs(30);
const PHI_PAIRS: usize = 1_000;
const AXIOM_SAMPLES: usize = 10_000;
const SW_INSTANCES: usize = 100;
const SW_EPSILONS: [(i64, i64); 3] = [(1, 8), (1, 64), (1, 1024)];
const DIEUDONNE_INSTANCES: usize = 100;
const DIEUDONNE_STEPS: usize = 20;
const ENVELOPE_PAIRS: usize = 1_000;
const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn posets_up_to(n: usize) -> Vec<FinitePoset> {
    enumerate::posets_up_to(n)
}

fn label_set(p: &FinitePoset) -> String {
    format!("{:?}", p.labeled_pairs())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let instances = posets_up_to(4);
    // isomorphism classes of posets on 1..=4 points
    let expected = 1 + 2 + 5 + 16;
    let mut failures = Vec::new();
    for p in &instances {
        let e = eta(p).expect("eta runs");
        if !e.is_order_isomorphism() {
            failures.push(label_set(p));
        }
    }
    let took = start.elapsed();
    outcome(
        failures.is_empty() && instances.len() == expected && took < CRITERION_1_BUDGET,
        format!("{} posets, {} failures, {:.2?}", instances.len(), failures.len(), took),
    )
}

fn criterion_2() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    let mut held = 0;
    for (k, p) in posets_up_to(4).iter().enumerate() {
        let s = SbalSkeleton::monotone(p);
        let oracle = ProximityOracle::from_skeleton(s.clone());
        let algebra = SubalgebraPartition::discrete(p.labels().clone());
        let spec = induced_order(&algebra, &oracle).expect("induced order");
        let target = spec.proximity();
        let mut sampler = Sampler::new(SEED ^ k as u64);
        for i in 0..PHI_PAIRS {
            let a = sampler.function(p.labels());
            // every other pair is made proximal, or nearly so, by construction
            let b = match i % 3 {
                0 => sampler.function(p.labels()),
                1 => s.envelope(&a, Direction::Upper).unwrap().shift(&sampler.nonneg_scalar()),
                _ => {
                    let w = s.envelope(&a, Direction::Upper).unwrap();
                    let mut v = w.values().to_vec();
                    let j = i % v.len();
                    v[j] -= rat(1, 8);
                    RationalFn::new(p.labels().clone(), v).unwrap()
                }
            };
            let lhs = oracle.decide(&a, &b).unwrap();
            let pa = phi(&algebra, spec.carrier(), &a).unwrap();
            let pb = phi(&algebra, spec.carrier(), &b).unwrap();
            let rhs = target.decide(&pa, &pb).unwrap();
            checked += 1;
            held += lhs as usize;
            failures += (lhs != rhs) as usize;
        }
    }
    outcome(failures == 0, format!("{checked} pairs ({held} proximal), {failures} failures"))
}

fn criterion_3() -> Outcome {
    let algebra = SubalgebraPartition::discrete(r2_carrier());
    let oracle = ProximityOracle::r2();
    let spec = induced_order(&algebra, &oracle).expect("induced order");
    let both = spec.order.leq(0, 1) && spec.order.leq(1, 0);
    let nach = is_nachbin(&algebra, &oracle).expect("nachbin test");
    // exact instance: the two ideals M_1, M_2 of R^2
    let labels_ok = spec.carrier().iter().map(String::as_str).eq(["M_1", "M_2"]);
    outcome(both && !nach && labels_ok, format!("M_1 <= M_2: {}, M_2 <= M_1: {}, nachbin: {nach}", spec.order.leq(0, 1), spec.order.leq(1, 0)))
}

fn skeleton_corpus() -> Vec<(String, SbalSkeleton)> {
    let mut out: Vec<(String, SbalSkeleton)> =
        posets_up_to(3).iter().map(|p| (format!("monotone{:?}", p.labeled_pairs()), SbalSkeleton::monotone(p))).collect();
    out.push(("constants[3]".into(), SbalSkeleton::constants(carrier(&["x", "y", "z"]))));
    let q = QuasiOrder::from_pairs(&["x1", "x2", "x3"], &[("x1", "x2"), ("x2", "x3"), ("x3", "x2")]).unwrap();
    out.push(("quasi[x1<x2~x3]".into(), SbalSkeleton::new(q)));
    out
}

fn criterion_4_suites() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut slowest = Duration::ZERO;
    let mut oracles: Vec<(String, ProximityOracle)> = vec![("r2".into(), ProximityOracle::r2())];
    for (name, s) in skeleton_corpus() {
        let start = Instant::now();
        let r = check_skeleton_axioms(&s, AXIOM_SAMPLES, SEED);
        slowest = slowest.max(start.elapsed());
        if !r.all_passed() {
            pass = false;
            notes.push(format!("{name}: skeleton axioms {:?}", r.outcomes.iter().filter(|o| !o.passed()).map(|o| &o.axiom).collect::<Vec<_>>()));
        }
        oracles.push((name, ProximityOracle::from_skeleton(s)));
    }
    for (name, o) in &oracles {
        let start = Instant::now();
        let r = check_axioms(o, AXIOM_SAMPLES, SEED, false);
        slowest = slowest.max(start.elapsed());
        if !r.all_passed() {
            pass = false;
            notes.push(format!("{name}: proximity axioms {:?}", r.outcomes.iter().filter(|o| !o.passed()).map(|o| &o.axiom).collect::<Vec<_>>()));
        }
    }
    pass &= slowest < AXIOM_SUITE_BUDGET;
    outcome(pass, format!("{} oracles, {} skeletons, slowest suite {:.2?} {}", oracles.len(), oracles.len() - 1, slowest, notes.join("; ")))
}

fn criterion_4_p11() -> Outcome {
    let mut missing = Vec::new();
    let mut found = 0;
    for (name, s) in skeleton_corpus().into_iter().filter(|(_, s)| !s.is_full()) {
        let r = check_axioms(&ProximityOracle::from_skeleton(s), AXIOM_SAMPLES, SEED, true);
        match r.outcome("P11").and_then(|o| o.counterexample.as_ref()) {
            Some(_) => found += 1,
            None => missing.push(name),
        }
    }
    outcome(missing.is_empty(), format!("P11 counterexample on {found} non-full skeletons; none on {missing:?}"))
}

fn criterion_5() -> Outcome {
    let mut sampler = Sampler::new(SEED);
    let mut failures = Vec::new();
    let mut family = 0;
    for i in 0..SW_INSTANCES {
        let n = 1 + i % 5;
        let p = sampler.poset(n);
        let s = SbalSkeleton::monotone(&p);
        let f = sampler.monotone_function(p.as_quasi());
        let (num, den) = SW_EPSILONS[i % SW_EPSILONS.len()];
        let eps = rat(num, den);
        let cert = sw_approximate(&f, &s, &eps).expect("valid instance");
        family += cert.family_size();
        // independent re-check of the headline contract
        let contract = s.contains(&cert.a) && f.distance(&cert.a) <= eps;
        if let Err(why) = cert.verify(&s).and_then(|_| if contract { Ok(()) } else { Err("contract".into()) }) {
            failures.push(format!("#{i}: {why}"));
        }
    }
    outcome(failures.is_empty(), format!("{SW_INSTANCES} instances, {family} family members, failures {failures:?}"))
}

fn criterion_6() -> Outcome {
    let mut sampler = Sampler::new(SEED + 6);
    let mut failures = Vec::new();
    for i in 0..DIEUDONNE_INSTANCES {
        let (oracle, f, g) = if i % 5 == 4 {
            let c = r2_carrier();
            let f = sampler.function(&c);
            let top = f.max_value().unwrap().clone();
            let g = sampler.nonneg_function(&c).shift(&top);
            (ProximityOracle::r2(), f, g)
        } else {
            let p = sampler.poset(1 + i % 5);
            let s = SbalSkeleton::monotone(&p);
            let f = sampler.function(p.labels());
            let g = &s.envelope(&f, Direction::Upper).unwrap() + &sampler.nonneg_function(p.labels());
            (ProximityOracle::from_skeleton(s), f, g)
        };
        let tr = dieudonne_sequence(&f, &g, &oracle, DIEUDONNE_STEPS).expect("proximal pair");
        // restate the inequalities independently of the trace's own flags
        for n in 1..=DIEUDONNE_STEPS {
            let a = &tr.terms[n];
            let prev = &tr.terms[n - 1];
            let lower = f.shift(&-inv_pow2(n as u32));
            let d = inv_pow2(n as u32 - 1);
            let ok4 = lower.le(a) && a.le(&g);
            let ok5 = prev.shift(&-&d).le(a) && a.le(&prev.shift(&d));
            let step = a.distance(prev) <= d;
            let member = oracle.skeleton_membership(a).unwrap();
            if !(ok4 && ok5 && step && member && tr.bounds_ok[n - 1]) {
                failures.push(format!("#{i} step {n}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{DIEUDONNE_INSTANCES} pairs x {DIEUDONNE_STEPS} steps, failures {failures:?}"))
}

fn concrete(p: &RationalFn, q: &RationalFn, op: &EnvelopeOp) -> EnvelopeValue2 {
    match op {
        EnvelopeOp::Add => EnvelopeValue2::Fn(p + q),
        EnvelopeOp::Mul => EnvelopeValue2::Fn(p * q),
        EnvelopeOp::Join => EnvelopeValue2::Fn(p.join(q)),
        EnvelopeOp::Meet => EnvelopeValue2::Fn(p.meet(q)),
        EnvelopeOp::Leq => EnvelopeValue2::Bool(p.le(q)),
        EnvelopeOp::Scalar(r) => EnvelopeValue2::Fn(p.scale(r)),
    }
}

#[derive(PartialEq, Debug)]
enum EnvelopeValue2 {
    Fn(RationalFn),
    Bool(bool),
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut compared = 0;
    for (k, (name, s)) in skeleton_corpus().into_iter().enumerate() {
        let mut sampler = Sampler::new(SEED + 7 + k as u64);
        let n = s.carrier().len();
        let map: Vec<usize> = (0..n).map(|j| (j * 2 + 1) % n).collect();
        let morphisms = vec![
            SbalMorphism::inclusion(s.clone()),
            SbalMorphism::evaluation(s.clone(), n - 1).expect("evaluation"),
            SbalMorphism::pullback(s.clone(), carrier(&["u", "v", "w", "t"][..n.min(4)]), map[..n.min(4)].to_vec()).expect("pullback"),
        ];
        for i in 0..ENVELOPE_PAIRS {
            let mut pair = || {
                let a = sampler.monotone_function(s.quasi_order());
                let b = sampler.monotone_function(s.quasi_order());
                EnvelopePair::new(a, b).unwrap()
            };
            let (p, q) = (pair(), pair());
            let r = sampler.scalar();
            for op in [EnvelopeOp::Add, EnvelopeOp::Mul, EnvelopeOp::Join, EnvelopeOp::Meet, EnvelopeOp::Leq, EnvelopeOp::Scalar(r)] {
                for alpha in &morphisms {
                    let (ep, eq) = (envelope_umt(alpha, &p).unwrap(), envelope_umt(alpha, &q).unwrap());
                    let via_pairs = match envelope_ops(&p, &q, &op).unwrap() {
                        EnvelopeValue::Pair(v) => EnvelopeValue2::Fn(envelope_umt(alpha, &v).unwrap()),
                        EnvelopeValue::Bool(b) => EnvelopeValue2::Bool(b),
                    };
                    // order is only reflected by the injective inclusion
                    let expected = match (&op, std::ptr::eq(alpha, &morphisms[0])) {
                        (EnvelopeOp::Leq, false) => continue,
                        _ => concrete(&ep, &eq, &op),
                    };
                    compared += 1;
                    if via_pairs != expected {
                        failures.push(format!("{name} #{i} {op:?}"));
                    }
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{compared} comparisons, failures {:?}", &failures[..failures.len().min(5)]))
}

fn criterion_8() -> Outcome {
    let posets = posets_up_to(3);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for x in &posets {
        for y in &posets {
            let r = enumerate_adjunction(x, &SbalSkeleton::monotone(y)).expect("small instance");
            // brute-force count of monotone maps X -> Y
            let brute = enumerate::all_maps(x.len(), y.len()).into_iter().filter(|m| x.is_monotone_map(y.as_quasi(), m)).count();
            pairs += 1;
            if !r.passed() || r.space_homs != brute || r.algebra_homs != brute {
                failures.push(format!("X={:?} Y={:?}: {r:?}", x.labeled_pairs(), y.labeled_pairs()));
            }
        }
    }
    let c2 = FinitePoset::chain(2);
    let self_case = enumerate_adjunction(&c2, &SbalSkeleton::monotone(&c2)).unwrap();
    let self_ok = self_case.space_homs == 3 && self_case.algebra_homs == 3;
    outcome(failures.is_empty() && self_ok, format!("{pairs} pairs, 2-chain self count {}, failures {failures:?}", self_case.algebra_homs))
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut points = 0;
    for p in posets_up_to(3) {
        let r = roundtrip_pq(&SbalSkeleton::monotone(&p), 4, 2, 0, SEED).expect("round trip");
        points += r.grid_points;
        if !r.passed() {
            failures.push(format!("{:?}: {:?}", p.labeled_pairs(), r.mismatch));
        }
    }
    outcome(failures.is_empty(), format!("{points} grid points, failures {failures:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 duality round trip", criterion_1),
        ("2 phi reflects proximity", criterion_2),
        ("3 r2 counterexample", criterion_3),
        ("4 axiom suites", criterion_4_suites),
        ("4 P11 counterexample on every non-full skeleton", criterion_4_p11),
        ("5 Stone-Weierstrass certificates", criterion_5),
        ("6 Dieudonne traces", criterion_6),
        ("7 envelope algebra", criterion_7),
        ("8 adjunction bijection", criterion_8),
        ("9 P/Q round trips", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        println!("criterion {name}: {} ({}; {:.2?})", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed());
        failed += !o.pass as usize;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

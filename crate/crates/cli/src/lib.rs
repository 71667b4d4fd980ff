//! Command-line front end for `nachbin-core`.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with the full report text, so the binary and the tests share
//! one code path. Exit codes: 0 when every check passes, 1 when a check
//! fails (a counterexample is printed), 2 on malformed input.

pub mod docs;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nachbin_core::approximation::{
    closed_iff_skeleton_closed, dieudonne_sequence_with, sw_approximate, ApproximantStream, ConstantStream, PerturbedStream,
};
use nachbin_core::fnalg::same_carrier;
use nachbin_core::order::ValidatedOrder;
use nachbin_core::plus::{check_plus_axioms, positive_cone, roundtrip_pq};
use nachbin_core::proximity::{check_axioms, is_nachbin, r2_carrier, OracleKind};
use nachbin_core::rational::{format_rational, parse_rational};
use nachbin_core::report::{AxiomReport, Counterexample};
use nachbin_core::sampling::Sampler;
use nachbin_core::sbal::{check_skeleton_axioms, concrete_envelope};
use nachbin_core::spectrum::{enumerate_adjunction, eta, induced_order, phi, spectrum};
use nachbin_core::{
    Direction, Error, FinitePoset, ProximityOracle, QuasiOrder, RationalFn, SbalSkeleton, SubalgebraPartition,
};
use serde_json::{json, Value};

use crate::docs::{load, AlgebraDoc, FunctionDoc, PosetDoc, SkeletonDoc};

/// Failure to even start a check.
#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "nachbin", version, about = "Exact finite-scale Gelfand-Nachbin duality checks")]
pub struct Cli {
    /// Seed for all sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random samples per check
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Expect the induced order to fail antisymmetry
    #[arg(long, global = true)]
    pub expect_quasi: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Subject {
    /// Poset document; its monotone functions form the skeleton
    #[arg(long)]
    pub poset: Option<PathBuf>,
    /// Skeleton document
    #[arg(long)]
    pub skeleton: Option<PathBuf>,
    /// Built-in oracle instead of a skeleton
    #[arg(long, value_enum)]
    pub oracle: Option<BuiltinOracle>,
    /// Closed sub-algebra document (defaults to the skeleton's envelope)
    #[arg(long)]
    pub algebra: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinOracle {
    R2,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionArg {
    Upper,
    Lower,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate input documents
    Validate {
        #[command(flatten)]
        subject: Subject,
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Monotone envelope of a function
    Envelope {
        #[command(flatten)]
        subject: Subject,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_enum, default_value = "upper")]
        direction: DirectionArg,
    },
    /// Decide a ≺ b
    Prox {
        #[command(flatten)]
        subject: Subject,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Sampled proximity and skeleton axiom suites
    Axioms {
        #[command(flatten)]
        subject: Subject,
        /// Also check P11 and P12
        #[arg(long)]
        devries: bool,
    },
    /// Maximal ideals of the algebra
    Spectrum {
        #[command(flatten)]
        subject: Subject,
    },
    /// Order induced on the spectrum by the proximity
    InducedOrder {
        #[command(flatten)]
        subject: Subject,
    },
    /// η is an order isomorphism and φ preserves and reflects ≺
    Roundtrip {
        #[command(flatten)]
        subject: Subject,
    },
    /// Approximate a monotone function by a skeleton member
    SwApprox {
        #[command(flatten)]
        subject: Subject,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Interpolate a skeleton member between f and g
    Dieudonne {
        #[command(flatten)]
        subject: Subject,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Feed the perturbed stream (f - 1/n, g + 1/n) instead of (f, g)
        #[arg(long)]
        perturbed: bool,
    },
    /// Enumerate both hom-sets of the adjunction for a space X
    Adjunction {
        #[command(flatten)]
        subject: Subject,
        /// Poset document for the space X
        #[arg(long)]
        space: PathBuf,
    },
    /// Positive-cone round trips
    PqRoundtrip {
        #[command(flatten)]
        subject: Subject,
    },
}

/// Accumulated output of one command.
struct Report {
    code: i32,
    text: Vec<String>,
    json: serde_json::Map<String, Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut json = serde_json::Map::new();
        json.insert("command".into(), json!(command));
        Self { code: 0, text: Vec::new(), json }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.into(), v);
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.line(format!("check {name}: {}", if ok { "pass" } else { "FAIL" }));
        if !ok {
            self.code = 1;
        }
    }

    /// Records the first counterexample; later ones are ignored.
    fn counterexample(&mut self, v: Value) {
        if !self.json.contains_key("counterexample") {
            self.line(format!("counterexample: {v}"));
            self.json.insert("counterexample".into(), v);
        }
        self.code = 1;
    }

    fn render(mut self) -> String {
        self.json.insert("status".into(), json!(if self.code == 0 { "pass" } else { "fail" }));
        let mut out = self.text.join("\n");
        out.push('\n');
        out.push_str(&serde_json::to_string_pretty(&Value::Object(self.json)).expect("json"));
        out.push('\n');
        out
    }
}

/// Resolved subject: an oracle with its algebra.
struct Instance {
    oracle: ProximityOracle,
    algebra: SubalgebraPartition,
    poset: Option<FinitePoset>,
}

fn load_order(path: &PathBuf, require_antisymmetry: bool) -> Result<ValidatedOrder, CliError> {
    load::<PosetDoc>(path)?.to_order(require_antisymmetry)
}

fn instance(s: &Subject, allow_quasi: bool) -> Result<Instance, CliError> {
    let given = [s.poset.is_some(), s.skeleton.is_some(), s.oracle.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(CliError::Input("give exactly one of --poset, --skeleton, --oracle".into()));
    }
    let (oracle, poset) = if s.oracle == Some(BuiltinOracle::R2) {
        (ProximityOracle::r2(), None)
    } else if let Some(p) = &s.skeleton {
        (ProximityOracle::from_skeleton(load::<SkeletonDoc>(p)?.to_skeleton()?), None)
    } else {
        let path = s.poset.as_ref().expect("counted above");
        match load_order(path, !allow_quasi)? {
            ValidatedOrder::Poset(p) => (ProximityOracle::from_skeleton(SbalSkeleton::monotone(&p)), Some(p)),
            ValidatedOrder::Quasi(q) => {
                let p = FinitePoset::try_from_quasi(q.clone()).ok();
                (ProximityOracle::from_skeleton(SbalSkeleton::new(q)), p)
            }
        }
    };
    let algebra = match &s.algebra {
        Some(path) => {
            let a = load::<AlgebraDoc>(path)?.to_partition()?;
            if !same_carrier(a.carrier(), oracle.carrier()) {
                return Err(CliError::Input("algebra carrier differs from the subject's".into()));
            }
            a
        }
        None if oracle.kind() == OracleKind::R2 => SubalgebraPartition::discrete(r2_carrier()),
        None => concrete_envelope(oracle.skeleton()),
    };
    Ok(Instance { oracle, algebra, poset })
}

/// Loads a function and reorders it to the subject's carrier.
fn load_fn(path: &PathBuf, inst: &Instance) -> Result<RationalFn, CliError> {
    let f = load::<FunctionDoc>(path)?.to_fn()?;
    let target = inst.oracle.carrier();
    if f.len() != target.len() {
        return Err(CliError::Input(format!("{}: carrier differs from the subject's", path.display())));
    }
    let entries: Vec<(String, _)> = f.carrier().iter().cloned().zip(f.values().iter().cloned()).collect();
    RationalFn::from_labeled(target.clone(), entries)
        .map_err(|e| CliError::Input(format!("{}: carrier differs from the subject's ({e})", path.display())))
}

fn fn_json(f: &RationalFn) -> Value {
    serde_json::to_value(FunctionDoc::from_fn(f)).expect("json")
}

fn order_json(q: &QuasiOrder) -> Value {
    serde_json::to_value(PosetDoc::from_order(q)).expect("json")
}

fn axiom_section(rep: &mut Report, ar: &AxiomReport, seed: u64, command: &str) {
    for o in &ar.outcomes {
        rep.check(&format!("{} {}", ar.subject, o.axiom), o.passed());
        if let Some(ce) = &o.counterexample {
            rep.counterexample(rerun(command, seed, o.axiom.as_str(), ce));
        }
    }
}

fn rerun(command: &str, seed: u64, check: &str, ce: &Counterexample) -> Value {
    json!({"command": command, "check": check, "seed": seed, "sample": ce.sample, "bindings": ce.bindings})
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (seed, samples) = (cli.seed, cli.samples);
    match &cli.command {
        Command::Validate { subject, function } => {
            let mut rep = Report::new("validate");
            if let Some(p) = &subject.poset {
                let doc = load::<PosetDoc>(p)?;
                let q = doc.to_order(false)?.quasi().clone();
                rep.set("document", order_json(&q));
                match q.antisymmetry_violation() {
                    Some((x, y)) if !cli.expect_quasi => {
                        rep.check("antisymmetry", false);
                        rep.counterexample(json!({"command": "validate", "check": "antisymmetry", "x": q.labels()[x], "y": q.labels()[y]}));
                    }
                    v => rep.check(if v.is_some() { "quasi-order" } else { "antisymmetry" }, true),
                }
            }
            if let Some(p) = &subject.skeleton {
                let s = load::<SkeletonDoc>(p)?.to_skeleton()?;
                rep.line(format!("skeleton on {} points", s.carrier().len()));
                rep.set("skeleton", order_json(s.quasi_order()));
            }
            if let Some(p) = &subject.algebra {
                let a = load::<AlgebraDoc>(p)?.to_partition()?;
                rep.line(format!("algebra with {} blocks", a.block_count()));
            }
            if let Some(p) = function {
                let f = load::<FunctionDoc>(p)?.to_fn()?;
                rep.set("function", fn_json(&f));
            }
            rep.line("documents valid");
            Ok(rep)
        }
        Command::Envelope { subject, function, direction } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let f = load_fn(function, &inst)?;
            let dir = match direction {
                DirectionArg::Upper => Direction::Upper,
                DirectionArg::Lower => Direction::Lower,
            };
            let e = inst.oracle.skeleton().envelope(&f, dir)?;
            let mut rep = Report::new("envelope");
            rep.line(format!("envelope: {e}"));
            rep.set("envelope", fn_json(&e));
            Ok(rep)
        }
        Command::Prox { subject, a, b } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let (fa, fb) = (load_fn(a, &inst)?, load_fn(b, &inst)?);
            let w = inst.oracle.prox_decide(&fa, &fb)?;
            let mut rep = Report::new("prox");
            rep.line(format!("{} : a ≺ b is {}", inst.oracle.name(), w.is_some()));
            rep.set("holds", json!(w.is_some()));
            if let Some(w) = w {
                rep.set("witness", fn_json(&w));
            }
            Ok(rep)
        }
        Command::Axioms { subject, devries } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let mut rep = Report::new("axioms");
            let pr = check_axioms(&inst.oracle, samples, seed, *devries);
            axiom_section(&mut rep, &pr, seed, "axioms");
            let mut reports = vec![serde_json::to_value(&pr).expect("json")];
            if inst.oracle.kind() == OracleKind::Skeleton {
                let sr = check_skeleton_axioms(inst.oracle.skeleton(), samples, seed);
                axiom_section(&mut rep, &sr, seed, "axioms");
                reports.push(serde_json::to_value(&sr).expect("json"));
            }
            rep.set("reports", Value::Array(reports));
            Ok(rep)
        }
        Command::Spectrum { subject } => {
            let inst = instance(subject, false)?;
            let ideals = spectrum(&inst.algebra);
            let mut rep = Report::new("spectrum");
            for m in &ideals {
                let pts: Vec<&str> = m.block.iter().map(|&i| inst.algebra.carrier()[i].as_str()).collect();
                rep.line(format!("{}: vanishing on {}", m.label, pts.join(",")));
            }
            rep.set("ideals", json!(ideals.iter().map(|m| &m.label).collect::<Vec<_>>()));
            Ok(rep)
        }
        Command::InducedOrder { subject } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let spec = induced_order(&inst.algebra, &inst.oracle)?;
            let nach = is_nachbin(&inst.algebra, &inst.oracle)?;
            let mut rep = Report::new("induced-order");
            for (x, y) in spec.order.pairs().filter(|(x, y)| x != y) {
                rep.line(format!("{} <= {}", spec.carrier()[x], spec.carrier()[y]));
            }
            rep.set("order", order_json(&spec.order));
            rep.set("nachbin", json!(nach));
            rep.line(format!("nachbin: {nach}"));
            match (spec.order.antisymmetry_violation(), cli.expect_quasi) {
                (Some(_), true) => {
                    rep.line("order fails antisymmetry (expected)");
                    rep.check("expected quasi-order", true);
                }
                (Some((x, y)), false) => {
                    rep.line("order fails antisymmetry");
                    rep.check("antisymmetry", false);
                    rep.counterexample(json!({"command": "induced-order", "check": "antisymmetry", "x": spec.carrier()[x], "y": spec.carrier()[y]}));
                }
                (None, true) => {
                    rep.check("expected quasi-order", false);
                    rep.counterexample(json!({"command": "induced-order", "check": "expected quasi-order", "order": order_json(&spec.order)}));
                }
                (None, false) => rep.check("antisymmetry", true),
            }
            Ok(rep)
        }
        Command::Roundtrip { subject } => {
            let inst = instance(subject, false)?;
            let poset = inst.poset.clone().ok_or_else(|| CliError::Input("roundtrip needs --poset".into()))?;
            let mut rep = Report::new("roundtrip");
            let e = eta(&poset)?;
            rep.check("eta order isomorphism", e.is_order_isomorphism());
            if !e.is_order_isomorphism() {
                rep.counterexample(json!({"command": "roundtrip", "check": "eta", "map": e.map}));
            }
            let spec = &e.spectrum;
            let target = spec.proximity();
            let mut failures = 0;
            let mut sampler = Sampler::new(seed);
            for i in 0..samples {
                let a = sampler.function(poset.labels());
                let b = if i % 2 == 0 {
                    sampler.function(poset.labels())
                } else {
                    let w = inst.oracle.skeleton().envelope(&a, Direction::Upper)?;
                    w.shift(&sampler.nonneg_scalar())
                };
                let lhs = inst.oracle.decide(&a, &b)?;
                let rhs = target.decide(&phi(&inst.algebra, spec.carrier(), &a)?, &phi(&inst.algebra, spec.carrier(), &b)?)?;
                if lhs != rhs {
                    failures += 1;
                    rep.counterexample(json!({"command": "roundtrip", "check": "phi", "seed": seed, "sample": i, "a": a.to_string(), "b": b.to_string()}));
                }
            }
            rep.check("phi preserves and reflects proximity", failures == 0);
            rep.set("pairs", json!(samples));
            Ok(rep)
        }
        Command::SwApprox { subject, function, eps } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let f = load_fn(function, &inst)?;
            let eps = parse_rational(eps)?;
            let cert = sw_approximate(&f, inst.oracle.skeleton(), &eps)?;
            let mut rep = Report::new("sw-approx");
            rep.line(format!("approximant: {}", cert.a));
            rep.line(format!("error: {} (epsilon {})", cert.error(), eps));
            rep.line(format!("family size: {}", cert.family_size()));
            let verified = cert.verify(inst.oracle.skeleton());
            rep.check("certificate", verified.is_ok());
            if let Err(why) = verified {
                rep.counterexample(json!({"command": "sw-approx", "check": "certificate", "reason": why, "f": f.to_string()}));
            }
            rep.set("approximant", fn_json(&cert.a));
            rep.set("error", json!(format_rational(&cert.error())));
            rep.set("family_size", json!(cert.family_size()));
            rep.set("cover", json!(cert.cover));
            Ok(rep)
        }
        Command::Dieudonne { subject, f, g, steps, perturbed } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let (ff, gg) = (load_fn(f, &inst)?, load_fn(g, &inst)?);
            let stream: Box<dyn ApproximantStream> = if *perturbed {
                Box::new(PerturbedStream { f: ff.clone(), g: gg.clone() })
            } else {
                Box::new(ConstantStream { f: ff.clone(), g: gg.clone() })
            };
            let mut rep = Report::new("dieudonne");
            match dieudonne_sequence_with(&ff, &gg, &inst.oracle, (*steps).max(1), stream.as_ref()) {
                Err(Error::NoApproximantWithinTolerance(why)) => {
                    rep.check("proximal input", false);
                    rep.counterexample(json!({"command": "dieudonne", "check": "claim", "reason": why, "f": ff.to_string(), "g": gg.to_string()}));
                }
                Err(e) => return Err(e.into()),
                Ok(tr) => {
                    for (n, ok) in tr.bounds_ok.iter().enumerate() {
                        if !ok {
                            rep.counterexample(json!({"command": "dieudonne", "check": "bounds", "step": n + 1, "term": tr.terms[n + 1].to_string()}));
                        }
                    }
                    rep.check("step bounds", tr.all_bounds_ok());
                    let last = tr.terms.last().expect("nonempty");
                    rep.line(format!("a_{}: {}", tr.terms.len() - 1, last));
                    rep.line(format!("limit witness: {}", tr.limit));
                    rep.set("last", fn_json(last));
                    rep.set("limit", fn_json(&tr.limit));
                    rep.set("step_distance", json!(tr.step_distance.iter().map(format_rational).collect::<Vec<_>>()));
                }
            }
            Ok(rep)
        }
        Command::Adjunction { subject, space } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let x = FinitePoset::try_from_quasi(load_order(space, true)?.quasi().clone())?;
            let r = enumerate_adjunction(&x, inst.oracle.skeleton())?;
            let mut rep = Report::new("adjunction");
            rep.line(format!("monotone maps X -> X_A: {}", r.space_homs));
            rep.line(format!("proximity morphisms A -> C(X): {}", r.algebra_homs));
            rep.check("theta bijective", r.bijective && r.space_homs == r.algebra_homs);
            rep.check("theta natural", r.natural);
            if let Some(why) = &r.failure {
                rep.counterexample(json!({"command": "adjunction", "reason": why}));
            }
            rep.set("result", serde_json::to_value(&r).expect("json"));
            Ok(rep)
        }
        Command::PqRoundtrip { subject } => {
            let inst = instance(subject, cli.expect_quasi)?;
            let s = inst.oracle.skeleton();
            let mut rep = Report::new("pq-roundtrip");
            let r = roundtrip_pq(s, 4, 2, samples, seed)?;
            rep.line(format!("grid points: {}", r.grid_points));
            rep.check("QP and PQ membership", r.passed());
            if let Some(m) = &r.mismatch {
                rep.counterexample(json!({"command": "pq-roundtrip", "side": m.side, "function": m.function, "expected": m.expected}));
            }
            let ar = check_plus_axioms(&positive_cone(s), samples, seed);
            axiom_section(&mut rep, &ar, seed, "pq-roundtrip");
            let closed = closed_iff_skeleton_closed(&inst.algebra, &inst.oracle, samples.min(200), seed);
            rep.check("closedness agrees", closed.agree);
            rep.set("roundtrip", serde_json::to_value(&r).expect("json"));
            rep.set("closedness", serde_json::to_value(&closed).expect("json"));
            Ok(rep)
        }
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match catch_unwind(AssertUnwindSafe(|| execute(&cli))) {
        Ok(Ok(rep)) => (rep.code, rep.render()),
        Ok(Err(e)) => (2, format!("{e}\n")),
        Err(_) => (2, "input error: internal failure while processing input\n".into()),
    }
}

use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand};
use dtc_core::bounds::{
    cup_length_kernel, diagonal_fn, fn_kernel_generators, sphere_bundle_lower_bound, tower_euler_height, verify_witness_fn,
    default_partition, BoundsError, MAX_BUDGET,
};
use dtc_core::gcring::RingError;
use dtc_core::measures::{lp_distance_with_precision, product_measure, Euclidean, FiniteMeasure, MeasureError, Weight, DEFAULT_LP_PRECISION};
use dtc_core::navplan::{
    check_equivariance, check_lp_continuity, circle_navigate, embed_rotation, hopf_fiber_deviation, hopf_parametrized_navigate,
    perturb_projective, random_hopf_fiber, random_so, random_unit_vector, rpn_navigate, NavError, PathPlan, ProjectivePoint,
};
use dtc_core::presentations::{
    build_fn_fiber_product, build_sphere_bundle_tower, from_name, parse_base, FadellNeuwirthSpec, PresentationError,
    SphereBundleTowerSpec,
};
use dtc_core::rational::{self, Rational};
use dtc_core::RingPresentation;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::knowledge::{self, ComplexityRecord, KnowledgeError, SphereAction};

/// Version tag carried by every JSON document the tool prints.
pub const SCHEMA: &str = "dtc-cli/1";
/// Directory searched for `<name>.json` presentation documents.
pub const CATALOG_ENV: &str = "DTC_CATALOG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dtc", version, about = "Certified lower bounds and distributed navigation planners for sequential parametrized topological complexity")]
pub struct Cli {
    /// Accepted for compatibility; output is always JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add the provenance tags behind the answer under `citations`.
    #[arg(long, global = true)]
    pub cite: bool,
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Normal forms, Poincaré series and confluence of ring presentations.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Cohomological lower-bound certificates.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Closed-form complexity values with provenance.
    #[command(subcommand)]
    Value(ValueCmd),
    /// Distributed navigation planners and their verifiers.
    #[command(subcommand)]
    Nav(NavCmd),
    /// Finitely supported measures.
    #[command(subcommand)]
    Measure(MeasureCmd),
}

#[derive(Args, Debug)]
pub struct RingArg {
    /// Catalog name (`conf:d=3,k=4`, `fn:d=2,m=2,n=1,r=2`, `sb:base=cp2,q=3,r=2`,
    /// `cp:n=2`, `sphere:k=3`, `pt`), a presentation JSON file, or a name
    /// found as `<name>.json` under $DTC_CATALOG.
    #[arg(long)]
    pub ring: String,
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    NormalForm {
        #[command(flatten)]
        ring: RingArg,
        /// Polynomial such as `w_1_3*w_2_3 - 1/2 w_1_2`.
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    Poincare {
        #[command(flatten)]
        ring: RingArg,
        /// Defaults to the top nonzero degree when the ring is finite, else 16.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    Confluence {
        #[command(flatten)]
        ring: RingArg,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FnArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
}

impl FnArgs {
    fn spec(&self) -> Result<FadellNeuwirthSpec, CliError> {
        Ok(FadellNeuwirthSpec::new(self.d, self.m, self.n, self.r)?)
    }
}

#[derive(Subcommand, Debug)]
pub enum BoundCmd {
    /// Zero-divisor product certificate for the Fadell–Neuwirth fiber product.
    Fn(FnArgs),
    /// Height certificate for the fiberwise sphere bundle of `η ⊕ ε`.
    SphereBundle {
        /// `pt`, `cp<n>`, `s<k>` or a product such as `cp2xs3`.
        #[arg(long, default_value = "cp2")]
        base: String,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long)]
        r: u32,
        /// Euler class of `η`; defaults to the hyperplane class `a` when `q = 3`.
        #[arg(long, allow_hyphen_values = true)]
        euler: Option<String>,
        /// `r - 1` exponents summing to the height; defaults to `h, 0, ..., 0`.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<u32>>,
    },
    /// Bounded search for the longest nonzero product of kernel generators.
    CupLength {
        #[command(flatten)]
        fibration: FnArgs,
        #[arg(long, default_value_t = 8)]
        budget: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum ValueCmd {
    Fn(FnArgs),
    So3 {
        #[arg(long)]
        r: u32,
    },
    Spheres {
        /// Sphere dimensions `n_1,...,n_m`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<u32>,
        #[arg(long)]
        r: u32,
        /// Involution indices `p_1,...,p_m`; omit for the antipodal action.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u32>>,
    },
    Associate {
        /// `dTC_{G,r}` of the fiber.
        #[arg(long)]
        dtc: u64,
    },
    Threshold {
        #[arg(long)]
        r: u32,
    },
    Hopf {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum NavCmd {
    /// Two-rotation plan between lines; inputs are normalized.
    Rpn {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        y: Vec<f64>,
    },
    /// Sequential plan on the circle through points given by angle.
    Circle {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        angles: Vec<f64>,
    },
    /// Plan on a Hopf fiber through unit quaternions `w,x,y,z`, or through
    /// `--random` seeded points on a random fiber.
    Hopf {
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, conflicts_with = "points")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lévy–Prokhorov continuity probe of the projective planner.
    Continuity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        bases: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        scale: f64,
        #[arg(long, default_value_t = 10.0)]
        ceiling: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// `SO(n)`-equivariance check of the projective planner on random inputs.
    Equivariance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        groups: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Lévy–Prokhorov distance between two measure files.
    Lp {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LP_PRECISION)]
        precision: f64,
    },
    /// Product measure of two measure files.
    Product { mu: PathBuf, nu: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    Argument(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(_) => EXIT_ARGUMENT,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Argument(_) => "argument",
            CliError::Validation(_) => "validation",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Argument(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::NonConfluent(_) => CliError::Validation(e.to_string()),
            _ => CliError::Argument(e.to_string()),
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::NonConfluent(_) | PresentationError::PoincareMismatch { .. } => {
                CliError::Validation(e.to_string())
            }
            PresentationError::Ring(r) => r.into(),
            _ => CliError::Argument(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Argument(e.to_string())
        }
    }
}

impl From<KnowledgeError> for CliError {
    fn from(e: KnowledgeError) -> Self {
        match e {
            KnowledgeError::Bounds(b) => b.into(),
            KnowledgeError::Inconsistent(m) => CliError::Validation(m),
            KnowledgeError::OutOfRange(m) => CliError::Argument(m),
        }
    }
}

impl From<NavError> for CliError {
    fn from(e: NavError) -> Self {
        CliError::Argument(e.to_string())
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        CliError::Argument(e.to_string())
    }
}

/// A successful command result. `failed` marks a completed check whose
/// outcome is negative (exit code 3 with the full report printed).
pub struct Output {
    pub result: Value,
    pub tags: Vec<String>,
    pub failed: bool,
}

impl Output {
    fn ok(result: Value, tags: Vec<String>) -> Self {
        Self { result, tags, failed: false }
    }
}

fn command_name(g: &Group) -> String {
    let (group, sub) = match g {
        Group::Ring(c) => ("ring", match c {
            RingCmd::NormalForm { .. } => "normal-form",
            RingCmd::Poincare { .. } => "poincare",
            RingCmd::Confluence { .. } => "confluence",
        }),
        Group::Bound(c) => ("bound", match c {
            BoundCmd::Fn(_) => "fn",
            BoundCmd::SphereBundle { .. } => "sphere-bundle",
            BoundCmd::CupLength { .. } => "cup-length",
        }),
        Group::Value(c) => ("value", match c {
            ValueCmd::Fn(_) => "fn",
            ValueCmd::So3 { .. } => "so3",
            ValueCmd::Spheres { .. } => "spheres",
            ValueCmd::Associate { .. } => "associate",
            ValueCmd::Threshold { .. } => "threshold",
            ValueCmd::Hopf { .. } => "hopf",
        }),
        Group::Nav(c) => ("nav", match c {
            NavCmd::Rpn { .. } => "rpn",
            NavCmd::Circle { .. } => "circle",
            NavCmd::Hopf { .. } => "hopf",
            NavCmd::Continuity { .. } => "continuity",
            NavCmd::Equivariance { .. } => "equivariance",
        }),
        Group::Measure(c) => ("measure", match c {
            MeasureCmd::Lp { .. } => "lp",
            MeasureCmd::Product { .. } => "product",
        }),
    };
    format!("{group} {sub}")
}

/// Parses `args` (including the program name), executes the command and
/// returns the exit code with the text meant for standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => {
                    let doc = json!({
                        "schema": SCHEMA,
                        "error": { "kind": "argument", "message": e.render().to_string() },
                    });
                    (EXIT_ARGUMENT, pretty(&doc))
                }
            };
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli.command) {
        Ok(out) => {
            let mut doc = json!({ "schema": SCHEMA, "command": name, "result": out.result });
            if cli.cite {
                let mut tags = out.tags;
                tags.dedup();
                doc["citations"] = json!(tags);
            }
            (if out.failed { EXIT_VALIDATION } else { EXIT_OK }, pretty(&doc))
        }
        Err(e) => {
            let doc = json!({
                "schema": SCHEMA,
                "command": name,
                "error": { "kind": e.kind(), "message": e.message() },
            });
            (e.exit_code(), pretty(&doc))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

pub fn execute(g: &Group) -> Result<Output, CliError> {
    match g {
        Group::Ring(c) => ring(c),
        Group::Bound(c) => bound(c),
        Group::Value(c) => value(c),
        Group::Nav(c) => nav(c),
        Group::Measure(c) => measure(c),
    }
}

const ENGINE_TAG: &str = "computed:graded-rewriting";

/// File path, then `$DTC_CATALOG/<name>.json`, then the built-in catalog.
pub fn resolve_ring(name: &str) -> Result<RingPresentation, CliError> {
    let load = |path: &FsPath| -> Result<RingPresentation, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Argument(format!("cannot read {}: {e}", path.display())))?;
        Ok(RingPresentation::from_json(&text)?.with_name(name))
    };
    let direct = FsPath::new(name);
    if name.ends_with(".json") && direct.is_file() {
        return load(direct);
    }
    if let Ok(dir) = std::env::var(CATALOG_ENV) {
        let candidate = FsPath::new(&dir).join(format!("{name}.json"));
        if candidate.is_file() {
            return load(&candidate);
        }
    }
    Ok(from_name(name)?)
}

fn ring(c: &RingCmd) -> Result<Output, CliError> {
    let tags = vec![ENGINE_TAG.to_string()];
    match c {
        RingCmd::NormalForm { ring, expr } => {
            let p = resolve_ring(&ring.ring)?;
            let e = p.parse(expr)?;
            let nf = p.normal_form(&e)?;
            Ok(Output::ok(
                json!({
                    "ring": ring.ring,
                    "input": expr,
                    "normal_form": p.display(&nf),
                    "terms": p.element_doc(&nf),
                    "is_zero": nf.is_zero(),
                }),
                tags,
            ))
        }
        RingCmd::Poincare { ring, max_degree } => {
            let p = resolve_ring(&ring.ring)?;
            let max = match (max_degree, p.degree_ceiling()) {
                (Some(m), _) => *m,
                (None, Some(c)) => p.top_degree(c)?.unwrap_or(0),
                (None, None) => 16,
            };
            let series = p.poincare_series(max)?;
            Ok(Output::ok(json!({ "ring": ring.ring, "max_degree": max, "series": series }), tags))
        }
        RingCmd::Confluence { ring } => {
            let p = resolve_ring(&ring.ring)?;
            let report = p.check_confluence();
            Ok(Output {
                failed: !report.passed(),
                result: json!({ "ring": ring.ring, "confluent": report.passed(), "report": report }),
                tags,
            })
        }
    }
}

fn bound(c: &BoundCmd) -> Result<Output, CliError> {
    match c {
        BoundCmd::Fn(a) => {
            let spec = a.spec()?;
            if spec.r < 2 {
                return Err(CliError::Argument("r must be at least 2".into()));
            }
            let cert = verify_witness_fn(&spec)?;
            let diagonal = diagonal_fn(&spec)?;
            cert.verify(&diagonal)?;
            let doc = cert.to_doc(&diagonal.source);
            let tag = doc.ref_tag.clone();
            Ok(Output::ok(
                json!({
                    "fibration": spec,
                    "certificate": doc,
                    "bound": cert.implied_lower_bound,
                    "verified": true,
                }),
                vec![tag],
            ))
        }
        BoundCmd::SphereBundle { base, q, r, euler, partition } => {
            let base_ring = parse_base(base)?;
            let e = match euler {
                Some(expr) => base_ring.parse(expr)?,
                None if *q == 3 && base_ring.has_generator("a") => base_ring.generator("a")?,
                None => base_ring.zero(),
            };
            let spec = SphereBundleTowerSpec::new(base_ring, e, *q, *r)?;
            let h = tower_euler_height(&spec)?;
            let b = partition.clone().unwrap_or_else(|| default_partition(h, *r));
            let cert = sphere_bundle_lower_bound(&spec, &b)?;
            let tower = build_sphere_bundle_tower(&spec)?;
            let doc = cert.to_doc(&tower.presentation);
            let tag = doc.ref_tag.clone();
            Ok(Output::ok(
                json!({
                    "base": base,
                    "q": q,
                    "r": r,
                    "euler_height": h,
                    "partition": b,
                    "certificate": doc,
                    "bound": cert.implied_lower_bound,
                }),
                vec![tag],
            ))
        }
        BoundCmd::CupLength { fibration, budget } => {
            let spec = fibration.spec()?;
            if *budget > MAX_BUDGET {
                return Err(CliError::Argument(format!("budget {budget} exceeds {MAX_BUDGET}")));
            }
            let p = build_fn_fiber_product(&spec)?;
            let diagonal = diagonal_fn(&spec)?;
            let gens = fn_kernel_generators(&spec, &p)?;
            let found = cup_length_kernel(&p, &diagonal, &gens, *budget)?;
            let doc = found.certificate.as_ref().map(|c| c.to_doc(&p));
            Ok(Output::ok(
                json!({
                    "fibration": spec,
                    "budget": budget,
                    "length": found.length,
                    "saturated": found.length == *budget,
                    "kernel_generators": gens.iter().map(|g| p.display(g)).collect::<Vec<_>>(),
                    "indices": found.indices,
                    "certificate": doc,
                }),
                vec!["search:kernel-cup-length".into()],
            ))
        }
    }
}

fn record_output(rec: ComplexityRecord) -> Output {
    let tags = rec.tags();
    Output::ok(serde_json::to_value(&rec).expect("records serialize"), tags)
}

fn value(c: &ValueCmd) -> Result<Output, CliError> {
    match c {
        ValueCmd::Fn(a) => Ok(record_output(knowledge::value_fadell_neuwirth(a.d, a.m, a.n, a.r)?)),
        ValueCmd::So3 { r } => Ok(record_output(knowledge::value_so3_bundle(*r)?)),
        ValueCmd::Spheres { dims, r, p } => {
            let action = match p {
                Some(ps) => SphereAction::General(ps.clone()),
                None => SphereAction::Antipodal,
            };
            Ok(record_output(knowledge::value_product_spheres(dims, *r, &action)?))
        }
        ValueCmd::Associate { dtc } => Ok(record_output(knowledge::value_associate_record(*dtc)?)),
        ValueCmd::Threshold { r } => {
            let v = knowledge::value_son_threshold_json(*r)?;
            let tags = v["provenance"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|p| p["tag"].as_str().map(String::from))
                .collect();
            Ok(Output::ok(v, tags))
        }
        ValueCmd::Hopf { n, r } => {
            let rec = knowledge::value_hopf(*n, *r)?;
            let mut out = record_output(rec);
            if *r == 2 {
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                let pts = random_hopf_fiber(2, &mut rng);
                let plan = hopf_parametrized_navigate(&pts)?;
                out.result["demonstration"] = json!({
                    "planner": "nav hopf",
                    "support_size": plan.support_size(),
                    "fiber_deviation": hopf_fiber_deviation(&plan),
                    "checkpoint_error": plan.max_checkpoint_error(),
                });
                out.tags.push("navigation:hopf-parametrized".into());
            }
            Ok(out)
        }
    }
}

fn plan_json(plan: &PathPlan) -> Value {
    json!({
        "support_size": plan.support_size(),
        "weights": plan.weights(),
        "checkpoint_error": plan.max_checkpoint_error(),
        "mass_error": plan.mass_error(),
        "plan": plan.to_json(),
    })
}

fn parse_vector(s: &str) -> Result<DVector<f64>, CliError> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    v.map(DVector::from_vec).map_err(|_| CliError::Argument(format!("cannot parse vector `{s}`")))
}

fn nav(c: &NavCmd) -> Result<Output, CliError> {
    match c {
        NavCmd::Rpn { x, y } => {
            let px = ProjectivePoint::from_vector(DVector::from_column_slice(x))?;
            let py = ProjectivePoint::from_vector(DVector::from_column_slice(y))?;
            let plan = rpn_navigate(&px, &py)?;
            Ok(Output::ok(plan_json(&plan), vec!["navigation:projective-two-rotation".into()]))
        }
        NavCmd::Circle { angles } => {
            let pts: Vec<_> = angles.iter().map(|t| DVector::from_vec(vec![t.cos(), t.sin()])).collect();
            let plan = circle_navigate(&pts)?;
            Ok(Output::ok(plan_json(&plan), vec!["navigation:circle-two-arc".into()]))
        }
        NavCmd::Hopf { points, random, seed } => {
            let pts = match random {
                Some(k) => random_hopf_fiber(*k, &mut ChaCha8Rng::seed_from_u64(*seed)),
                None => points.iter().map(|s| parse_vector(s)).collect::<Result<_, _>>()?,
            };
            let plan = hopf_parametrized_navigate(&pts)?;
            let mut v = plan_json(&plan);
            v["fiber_deviation"] = json!(hopf_fiber_deviation(&plan));
            Ok(Output::ok(v, vec!["navigation:hopf-parametrized".into()]))
        }
        NavCmd::Continuity { n, bases, samples, scale, ceiling, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let base: Vec<(ProjectivePoint, ProjectivePoint)> = (0..*bases)
                .map(|_| {
                    let x = ProjectivePoint::from_vector(random_unit_vector(n + 1, &mut rng))?;
                    let y = ProjectivePoint::from_vector(random_unit_vector(n + 1, &mut rng))?;
                    Ok((x, y))
                })
                .collect::<Result<_, NavError>>()?;
            let report = check_lp_continuity(
                |(x, y): &(ProjectivePoint, ProjectivePoint)| rpn_navigate(x, y),
                &base,
                |(x, y): &(ProjectivePoint, ProjectivePoint), s, rng: &mut ChaCha8Rng| {
                    let (x2, dx) = perturb_projective(x, s, rng);
                    let (y2, dy) = perturb_projective(y, s, rng);
                    ((x2, y2), dx.max(dy))
                },
                *scale,
                *samples,
                *ceiling,
                |(x, y)| json!([x.representative().as_slice(), y.representative().as_slice()]),
                &mut rng,
            )?;
            Ok(Output {
                failed: !report.passed(),
                result: json!({ "n": n, "ceiling": ceiling, "passed": report.passed(), "report": report }),
                tags: vec!["navigation:projective-two-rotation".into()],
            })
        }
        NavCmd::Equivariance { n, pairs, groups, tol, seed } => {
            if *n < 1 {
                return Err(CliError::Argument("n must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let gs: Vec<_> = (0..*groups).map(|_| embed_rotation(&random_so(*n, &mut rng))).collect();
            let samples: Vec<_> = (0..*pairs)
                .map(|_| {
                    Ok((
                        ProjectivePoint::from_vector(random_unit_vector(n + 1, &mut rng))?,
                        ProjectivePoint::from_vector(random_unit_vector(n + 1, &mut rng))?,
                    ))
                })
                .collect::<Result<_, NavError>>()?;
            let report = check_equivariance(rpn_navigate, &gs, &samples, *tol)?;
            Ok(Output {
                failed: !report.passed(),
                result: json!({ "n": n, "tolerance": tol, "passed": report.passed(), "report": report }),
                tags: vec!["navigation:projective-two-rotation".into()],
            })
        }
    }
}

/// A measure file: `[{"point": <number or array>, "weight": <number or "p/q">}]`.
/// All weights must be numbers (floating mode) or all strings (exact mode).
pub enum MeasureFile {
    Float(FiniteMeasure<Vec<f64>, f64>),
    Exact(FiniteMeasure<Vec<f64>, Rational>),
}

fn point_of(v: &Value) -> Option<Vec<f64>> {
    match v {
        Value::Number(x) => x.as_f64().map(|x| vec![x]),
        Value::Array(xs) => xs.iter().map(Value::as_f64).collect(),
        _ => None,
    }
}

pub fn parse_measure(text: &str) -> Result<MeasureFile, CliError> {
    let bad = |m: &str| CliError::Argument(format!("malformed measure: {m}"));
    let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let atoms = v.as_array().ok_or_else(|| bad("expected an array of atoms"))?;
    let mut points = Vec::with_capacity(atoms.len());
    for a in atoms {
        let p = point_of(&a["point"]).ok_or_else(|| bad("`point` must be a number or an array of numbers"))?;
        points.push(p);
    }
    if atoms.iter().all(|a| a["weight"].is_string()) {
        let ws = atoms
            .iter()
            .map(|a| rational::parse(a["weight"].as_str().unwrap_or_default()).ok_or_else(|| bad("weight is not p/q")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MeasureFile::Exact(FiniteMeasure::new(points.into_iter().zip(ws).collect(), &Euclidean)?))
    } else if atoms.iter().all(|a| a["weight"].is_number()) {
        let ws: Vec<f64> = atoms.iter().map(|a| a["weight"].as_f64().unwrap_or(f64::NAN)).collect();
        Ok(MeasureFile::Float(FiniteMeasure::new(points.into_iter().zip(ws).collect(), &Euclidean)?))
    } else {
        Err(bad("weights must be all numbers or all \"p/q\" strings"))
    }
}

fn read_measure(path: &FsPath) -> Result<MeasureFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Argument(format!("cannot read {}: {e}", path.display())))?;
    parse_measure(&text)
}

fn product_json<W: Weight>(mu: &FiniteMeasure<Vec<f64>, W>, nu: &FiniteMeasure<Vec<f64>, W>) -> Value {
    let prod = product_measure(mu, nu);
    json!({
        "support_size": prod.support_size(),
        "measure": prod.to_json(|(p, q)| json!([p, q])),
    })
}

fn measure(c: &MeasureCmd) -> Result<Output, CliError> {
    let tags = vec!["measures:finite-support".to_string()];
    match c {
        MeasureCmd::Lp { mu, nu, precision } => {
            if !(*precision > 0.0 && *precision < 1.0) {
                return Err(CliError::Argument(format!("precision {precision} must lie in (0, 1)")));
            }
            let d = match (read_measure(mu)?, read_measure(nu)?) {
                (MeasureFile::Float(a), MeasureFile::Float(b)) => lp_distance_with_precision(&a, &b, &Euclidean, *precision)?,
                (MeasureFile::Exact(a), MeasureFile::Exact(b)) => lp_distance_with_precision(&a, &b, &Euclidean, *precision)?,
                _ => return Err(CliError::Argument("both measures must use the same weight mode".into())),
            };
            Ok(Output::ok(json!({ "distance": d, "precision": precision }), tags))
        }
        MeasureCmd::Product { mu, nu } => {
            let v = match (read_measure(mu)?, read_measure(nu)?) {
                (MeasureFile::Float(a), MeasureFile::Float(b)) => product_json(&a, &b),
                (MeasureFile::Exact(a), MeasureFile::Exact(b)) => product_json(&a, &b),
                _ => return Err(CliError::Argument("both measures must use the same weight mode".into())),
            };
            Ok(Output::ok(v, tags))
        }
    }
}

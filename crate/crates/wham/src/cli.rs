//! Command-line dispatch. Every command reads its inputs, runs one
//! check or construction, and emits a single JSON verdict document on
//! standard output; diagnostics such as timing go to standard error.
//! Exit code 0 means the property holds (or the construction
//! succeeded), 1 means it fails and a witness is embedded in the
//! document, 2 means the input or invocation was invalid.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::gf::{Field, FieldElement};
use crate::instance::{
    emit_instance, format_rat, parse_classes, parse_instance, InstanceDoc,
};
use crate::linalg::{subspaces, Matrix, ProjectivePoint, Side};
use crate::wspace::{CodeMatrix, Rat, WeightedSpace};
use crate::{cwc, extension, identities, sampling, Error};

#[derive(Debug, Parser)]
#[command(
    name = "wham",
    version,
    about = "Exact checks for weighted Hamming spaces: isometry extension and constant-weight codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the unique-decomposition property of the weights on the H and K coordinate sets
    Udp(UdpArgs),
    /// Decide whether the `left` and `right` maps give every input vector the same weight
    LocalEquiv(LocalEquivArgs),
    /// Extend a locally equivalent `left`/`right` pair to a monomial isometry Q with right = left·Q
    Extend(ExtendArgs),
    /// Decide whether every weight-preserving map between subspaces extends to a full isometry
    Mep(UdpArgs),
    /// Construct an isometry carrying the single `left` row to the single `right` row
    Transit(ExtendArgs),
    /// Constant-weight code checks and constructions
    Cwc(CwcArgs),
    /// Re-verify the four counting identities on seeded random instances
    VerifyIdentities(VerifyArgs),
    /// Print a Gaussian binomial coefficient
    Qbinom(QbinomArgs),
}

#[derive(Debug, Args)]
pub struct UdpArgs {
    /// Instance file
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Projective,
    Bruteforce,
    Both,
}

#[derive(Debug, Args)]
pub struct LocalEquivArgs {
    /// Instance file with `left` and `right` matrices
    #[arg(long)]
    pub instance: PathBuf,
    /// Which criterion to run
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Enumeration budget for the brute-force criterion
    #[arg(long, default_value_t = crate::DEFAULT_ENUM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    /// Instance file with `left` and `right` matrices
    #[arg(long)]
    pub instance: PathBuf,
    /// Also write the constructed document to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CwcArgs {
    #[command(subcommand)]
    pub command: CwcCommand,
}

#[derive(Debug, Subcommand)]
pub enum CwcCommand {
    /// Decide whether the `generator` code gives every nonzero codeword the same weight
    Check {
        /// Instance file with a `generator` matrix
        #[arg(long)]
        instance: PathBuf,
        /// Enumeration budget for the brute-force cross-check
        #[arg(long, default_value_t = crate::DEFAULT_ENUM_CAP)]
        cap: u64,
    },
    /// Emit an instance whose columns list every projective point r times with unit weights
    Simplex {
        /// Field order (a prime power up to 256)
        #[arg(long)]
        q: u64,
        /// Input dimension
        #[arg(long)]
        k: usize,
        /// Copies of each projective point
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Also write the constructed instance to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a weighted constant-weight instance from per-point weight classes
    Build {
        /// Classes file: field, k, and one weight class per projective point
        #[arg(long)]
        classes: PathBuf,
        /// Also write the constructed instance to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Optional explicit instance checked before the random sweep
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Number of random instances
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Seed for the random sweep
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Enumeration budget per identity check
    #[arg(long, default_value_t = crate::DEFAULT_ENUM_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct QbinomArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub q: u64,
}

/// The final document plus the process exit code.
pub struct Outcome {
    pub document: Value,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    let (name, result) = match &cli.command {
        Command::Udp(a) => ("udp", cmd_udp(a)),
        Command::LocalEquiv(a) => ("local-equiv", cmd_local_equiv(a)),
        Command::Extend(a) => ("extend", cmd_extend(a)),
        Command::Mep(a) => ("mep", cmd_mep(a)),
        Command::Transit(a) => ("transit", cmd_transit(a)),
        Command::Cwc(c) => match &c.command {
            CwcCommand::Check { instance, cap } => ("cwc check", cmd_cwc_check(instance, *cap)),
            CwcCommand::Simplex { q, k, r, out } => {
                ("cwc simplex", cmd_cwc_simplex(*q, *k, *r, out.as_deref()))
            }
            CwcCommand::Build { classes, out } => {
                ("cwc build", cmd_cwc_build(classes, out.as_deref()))
            }
        },
        Command::VerifyIdentities(a) => ("verify-identities", cmd_verify_identities(a)),
        Command::Qbinom(a) => ("qbinom", cmd_qbinom(a)),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            document: verdict(name, "error", vec![("error", json!(e.to_string()))]),
            exit_code: 2,
        },
    }
}

fn verdict(command: &str, status: &str, fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    map.insert("status".into(), json!(status));
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn holds(command: &str, fields: Vec<(&str, Value)>) -> Outcome {
    Outcome {
        document: verdict(command, "holds", fields),
        exit_code: 0,
    }
}

fn fails(command: &str, witness: Value, fields: Vec<(&str, Value)>) -> Outcome {
    let mut all = fields;
    all.push(("witness", witness));
    Outcome {
        document: verdict(command, "fails", all),
        exit_code: 1,
    }
}

fn rat_value(r: &Rat) -> Value {
    json!(format_rat(r))
}

fn rats_value(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat_value).collect())
}

fn vector_value(v: &[FieldElement]) -> Value {
    json!(v.iter().map(|e| e.index()).collect::<Vec<u16>>())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(m.row_iter().map(vector_value).collect())
}

fn point_value(p: &ProjectivePoint) -> Value {
    vector_value(p.rep())
}

fn labels_value(space: &WeightedSpace, indices: &[usize]) -> Value {
    json!(indices.iter().map(|&i| space.label(i)).collect::<Vec<&str>>())
}

fn instance_value(doc: &InstanceDoc) -> Value {
    serde_json::from_str(&emit_instance(doc)).expect("emitted documents are valid JSON")
}

/// A ready-to-run instance that reproduces a failure when fed back in.
fn replay_value(command: &str, doc: &InstanceDoc) -> Value {
    json!({
        "command": command,
        "instance": instance_value(doc),
    })
}

fn isometry_value(iso: &extension::MonomialIsometry, doc: &InstanceDoc) -> Value {
    json!({
        "perm": iso.perm(),
        "scalars": iso.scalars().iter().map(|e| e.index()).collect::<Vec<u16>>(),
        "perm_labels": iso
            .perm()
            .iter()
            .enumerate()
            .map(|(i, &j)| [doc.space.label(i), doc.space.label(j)])
            .collect::<Vec<_>>(),
        "matrix": matrix_value(&iso.matrix(&doc.field)),
    })
}

fn write_out(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)
        .map_err(|e| Error::Instance(format!("cannot write {}: {e}", path.display())))
}

fn udp_counterexample_value(
    doc: &InstanceDoc,
    cx: &extension::UdpCounterexample,
) -> Value {
    let mut replay_doc = InstanceDoc::from_parts(&doc.field, &doc.space);
    replay_doc.set_h = Some(cx.subset_h.clone());
    replay_doc.set_k = Some(cx.subset_k.clone());
    json!({
        "subset_h": labels_value(&doc.space, &cx.subset_h),
        "subset_k": labels_value(&doc.space, &cx.subset_k),
        "sum": rat_value(&cx.sum),
        "multiset_h": rats_value(&cx.multiset_h),
        "multiset_k": rats_value(&cx.multiset_k),
        "replay": replay_value("udp", &replay_doc),
    })
}

fn cmd_udp(a: &UdpArgs) -> Result<Outcome, Error> {
    let doc = parse_instance(&a.instance)?;
    let h = doc.h_or_all();
    let k = doc.k_or_all();
    let report = extension::udp_check(&h, &k, &doc.space)?;
    let sets = vec![
        ("h_labels", labels_value(&doc.space, &h)),
        ("k_labels", labels_value(&doc.space, &k)),
    ];
    if report.holds {
        Ok(holds("udp", sets))
    } else {
        let cx = report.counterexample.expect("failing report carries one");
        Ok(fails("udp", udp_counterexample_value(&doc, &cx), sets))
    }
}

fn gamma_witness_value(doc: &InstanceDoc, w: &extension::GammaWitness) -> Result<Value, Error> {
    let l = doc.left_code()?;
    let m = doc.right_code()?;
    let mut replay_doc = InstanceDoc::from_parts(&doc.field, &doc.space);
    replay_doc.left = Some(Matrix::from_rows(&doc.field, &[l.encode(&w.gamma)])?);
    replay_doc.right = Some(Matrix::from_rows(&doc.field, &[m.encode(&w.gamma)])?);
    Ok(json!({
        "gamma": vector_value(&w.gamma),
        "wt_left": rat_value(&w.wt_left),
        "wt_right": rat_value(&w.wt_right),
        "replay": replay_value("local-equiv", &replay_doc),
    }))
}

fn point_witness_value(w: &extension::PointWitness) -> Value {
    json!({
        "point": point_value(&w.point),
        "sum_left": rat_value(&w.sum_left),
        "sum_right": rat_value(&w.sum_right),
    })
}

fn cmd_local_equiv(a: &LocalEquivArgs) -> Result<Outcome, Error> {
    let doc = parse_instance(&a.instance)?;
    let l = doc.left_code()?;
    let m = doc.right_code()?;
    let projective = match a.method {
        Method::Projective | Method::Both => Some(extension::locally_equivalent_projective(&l, &m)?),
        Method::Bruteforce => None,
    };
    let bruteforce = match a.method {
        Method::Bruteforce | Method::Both => {
            Some(extension::locally_equivalent_bruteforce(&l, &m, a.cap)?)
        }
        Method::Projective => None,
    };
    if let (Some(p), Some(b)) = (&projective, &bruteforce) {
        if p.holds != b.holds {
            return Err(Error::Unsupported(
                "internal error: the two criteria disagreed".into(),
            ));
        }
    }
    let all_hold = projective.as_ref().map_or(true, |p| p.holds)
        && bruteforce.as_ref().map_or(true, |b| b.holds);
    let method_field = (
        "method",
        json!(match a.method {
            Method::Projective => "projective",
            Method::Bruteforce => "bruteforce",
            Method::Both => "both",
        }),
    );
    let criteria = (
        "criteria",
        json!({
            "projective": projective.as_ref().map(|p| p.holds),
            "bruteforce": bruteforce.as_ref().map(|b| b.holds),
        }),
    );
    if all_hold {
        return Ok(holds("local-equiv", vec![method_field, criteria]));
    }
    let mut witness = Map::new();
    if let Some(w) = projective.as_ref().and_then(|p| p.witness.as_ref()) {
        witness.insert("point".into(), point_witness_value(w));
    }
    if let Some(w) = bruteforce.as_ref().and_then(|b| b.witness.as_ref()) {
        witness.insert("gamma".into(), gamma_witness_value(&doc, w)?);
    }
    Ok(fails(
        "local-equiv",
        Value::Object(witness),
        vec![method_field, criteria],
    ))
}

fn cmd_extend(a: &ExtendArgs) -> Result<Outcome, Error> {
    let doc = parse_instance(&a.instance)?;
    let l = doc.left_code()?;
    let m = doc.right_code()?;
    match extension::extend_to_isometry(&l, &m) {
        Ok(iso) => {
            let payload = isometry_value(&iso, &doc);
            if let Some(out) = &a.out {
                let mut text =
                    serde_json::to_string_pretty(&payload).expect("document serializes");
                text.push('\n');
                write_out(out, &text)?;
            }
            Ok(holds("extend", vec![("isometry", payload)]))
        }
        Err(Error::NotLocallyEquivalent) => {
            let proj = extension::locally_equivalent_projective(&l, &m)?;
            let w = proj
                .witness
                .expect("inequivalent maps yield a point witness");
            Ok(fails("extend", point_witness_value(&w), vec![]))
        }
        Err(e) => Err(e),
    }
}

fn cmd_mep(a: &UdpArgs) -> Result<Outcome, Error> {
    let doc = parse_instance(&a.instance)?;
    let report = extension::mep_check(&doc.space)?;
    if report.holds {
        return Ok(holds("mep", vec![]));
    }
    let w = report.witness.expect("failing report carries one");
    let cx = report
        .udp
        .counterexample
        .expect("failing report carries one");
    let witness = json!({
        "alpha": vector_value(&w.alpha),
        "beta": vector_value(&w.beta),
        "alpha_support": labels_value(&doc.space, &doc.space.supp_indices(&w.alpha)),
        "beta_support": labels_value(&doc.space, &doc.space.supp_indices(&w.beta)),
        "wt": rat_value(&doc.space.wt(&w.alpha)),
        "decomposition": udp_counterexample_value(&doc, &cx),
    });
    Ok(fails("mep", witness, vec![]))
}

fn one_row(m: &Option<Matrix>, name: &str) -> Result<Vec<FieldElement>, Error> {
    let Some(m) = m else {
        return Err(Error::Instance(format!(
            "this command requires a 1-row `{name}` matrix"
        )));
    };
    if m.rows() != 1 {
        return Err(Error::Instance(format!(
            "`{name}` must have exactly one row, got {}",
            m.rows()
        )));
    }
    Ok(m.row(0).to_vec())
}

fn cmd_transit(a: &ExtendArgs) -> Result<Outcome, Error> {
    let doc = parse_instance(&a.instance)?;
    let alpha = one_row(&doc.left, "left")?;
    let beta = one_row(&doc.right, "right")?;
    match extension::transitivity_map(&doc.space, &doc.field, &alpha, &beta) {
        Ok(iso) => {
            let image = iso.apply(&doc.field, &alpha);
            let payload = isometry_value(&iso, &doc);
            if let Some(out) = &a.out {
                let mut text =
                    serde_json::to_string_pretty(&payload).expect("document serializes");
                text.push('\n');
                write_out(out, &text)?;
            }
            Ok(holds(
                "transit",
                vec![("isometry", payload), ("image_of_left", vector_value(&image))],
            ))
        }
        Err(Error::NotLocallyEquivalent) => {
            let mut replay_doc = InstanceDoc::from_parts(&doc.field, &doc.space);
            replay_doc.left = doc.left.clone();
            replay_doc.right = doc.right.clone();
            let witness = json!({
                "wt_left": rat_value(&doc.space.wt(&alpha)),
                "wt_right": rat_value(&doc.space.wt(&beta)),
                "replay": replay_value("local-equiv", &replay_doc),
            });
            Ok(fails("transit", witness, vec![]))
        }
        Err(e) => Err(e),
    }
}

fn cmd_cwc_check(path: &Path, cap: u64) -> Result<Outcome, Error> {
    let doc = parse_instance(path)?;
    let g = doc.generator_code()?;
    let sigma = cwc::sigma_check(&g)?;
    let multiset = cwc::multiset_condition_check(&g)?;
    let q = g.field().q() as u128;
    let within_cap = crate::linalg::pow_u128(q, g.k() as u32) <= cap as u128;
    let brute = if within_cap {
        Some(cwc::is_constant_weight_bruteforce(&g, cap)?)
    } else {
        None
    };
    if let Some(b) = &brute {
        if b.is_constant != sigma.is_constant {
            return Err(Error::Unsupported(
                "internal error: the two criteria disagreed".into(),
            ));
        }
    }

    let fields = vec![
        ("is_constant", json!(sigma.is_constant)),
        (
            "sigma",
            sigma.sigma.as_ref().map_or(Value::Null, rat_value),
        ),
        (
            "codeword_weight",
            sigma.sigma.as_ref().map_or(Value::Null, |s| {
                rat_value(&cwc::subspace_weight_formula(
                    g.k(),
                    1,
                    s,
                    g.field().q() as u64,
                ))
            }),
        ),
        (
            "per_point",
            Value::Array(
                sigma
                    .per_point
                    .iter()
                    .map(|(p, s)| json!({"point": point_value(p), "sum": rat_value(s)}))
                    .collect(),
            ),
        ),
        (
            "multiset_condition",
            json!({
                "holds": multiset.holds,
                "witness": multiset.witness.as_ref().map(|w| json!({
                    "point_a": point_value(&w.point_a),
                    "point_b": point_value(&w.point_b),
                    "weight": rat_value(&w.weight),
                    "count_a": w.count_a,
                    "count_b": w.count_b,
                })),
            }),
        ),
        (
            "bruteforce",
            brute.as_ref().map_or(Value::Null, |b| {
                json!({
                    "is_constant": b.is_constant,
                    "weight": b.weight.as_ref().map(format_rat),
                })
            }),
        ),
    ];
    if sigma.is_constant {
        return Ok(holds("cwc check", fields));
    }

    let mut witness = Map::new();
    if let Some(vp) = &sigma.violating_point {
        let vp_sum = sigma
            .per_point
            .iter()
            .find(|(p, _)| p == vp)
            .map(|(_, s)| s.clone())
            .expect("violating point appears in the per-point table");
        let (p0, s0) = &sigma.per_point[0];
        witness.insert(
            "point".into(),
            json!({
                "point": point_value(vp),
                "sum": rat_value(&vp_sum),
                "reference_point": point_value(p0),
                "reference_sum": rat_value(s0),
            }),
        );
    }
    if let Some(w) = brute.as_ref().and_then(|b| b.witness.as_ref()) {
        let mut replay_doc = InstanceDoc::from_parts(&doc.field, &doc.space);
        replay_doc.left = Some(Matrix::from_rows(&doc.field, &[g.encode(&w.gamma1)])?);
        replay_doc.right = Some(Matrix::from_rows(&doc.field, &[g.encode(&w.gamma2)])?);
        witness.insert(
            "codewords".into(),
            json!({
                "gamma1": vector_value(&w.gamma1),
                "wt1": rat_value(&w.wt1),
                "gamma2": vector_value(&w.gamma2),
                "wt2": rat_value(&w.wt2),
                "replay": replay_value("local-equiv", &replay_doc),
            }),
        );
    }
    Ok(fails("cwc check", Value::Object(witness), fields))
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    let mut m = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn constructed_outcome(
    command: &'static str,
    code: &CodeMatrix,
    description: String,
    out: Option<&Path>,
) -> Result<Outcome, Error> {
    let sigma = cwc::sigma_check(code)?;
    let s = sigma
        .sigma
        .as_ref()
        .expect("constructions produce constant-weight codes");
    let mut doc = InstanceDoc::from_parts(code.field(), code.space());
    doc.description = Some(description);
    doc.generator = Some(code.grid().clone());
    let text = emit_instance(&doc);
    if let Some(path) = out {
        write_out(path, &text)?;
    }
    Ok(holds(
        command,
        vec![
            ("instance", instance_value(&doc)),
            ("sigma", rat_value(s)),
            (
                "codeword_weight",
                rat_value(&cwc::subspace_weight_formula(
                    code.k(),
                    1,
                    s,
                    code.field().q() as u64,
                )),
            ),
        ],
    ))
}

fn cmd_cwc_simplex(q: u64, k: usize, r: usize, out: Option<&Path>) -> Result<Outcome, Error> {
    let (p, m) = prime_power(q)
        .ok_or_else(|| Error::Instance(format!("q = {q} is not a prime power")))?;
    let field = Arc::new(Field::new(p, m, None)?);
    let code = cwc::simplex_generator(&field, k, r)?;
    constructed_outcome(
        "cwc simplex",
        &code,
        format!("{r}-fold simplex columns over GF({q}), k = {k}"),
        out,
    )
}

fn cmd_cwc_build(classes: &Path, out: Option<&Path>) -> Result<Outcome, Error> {
    let cdoc = parse_classes(classes)?;
    let code = cwc::weighted_constant_builder(&cdoc.field, cdoc.k, &cdoc.classes)?;
    let description = cdoc.description.clone().unwrap_or_else(|| {
        format!(
            "constant-weight code from per-point weight classes, q = {}, k = {}",
            cdoc.field.q(),
            cdoc.k
        )
    });
    constructed_outcome("cwc build", &code, description, out)
}

struct IdentityTally {
    instances: u64,
    checks: u64,
    failures: u64,
}

impl IdentityTally {
    fn new() -> IdentityTally {
        IdentityTally {
            instances: 0,
            checks: 0,
            failures: 0,
        }
    }

    fn value(&self) -> Value {
        json!({
            "instances": self.instances,
            "checks": self.checks,
            "failures": self.failures,
        })
    }
}

struct IdentitySweep {
    cap: u64,
    vector_sum: IdentityTally,
    superspace_sum: IdentityTally,
    dual_route: IdentityTally,
    sigma_point_sum: IdentityTally,
    first_failure: Option<Value>,
}

impl IdentitySweep {
    fn new(cap: u64) -> IdentitySweep {
        IdentitySweep {
            cap,
            vector_sum: IdentityTally::new(),
            superspace_sum: IdentityTally::new(),
            dual_route: IdentityTally::new(),
            sigma_point_sum: IdentityTally::new(),
            first_failure: None,
        }
    }

    fn record(
        &mut self,
        identity: &str,
        code: &CodeMatrix,
        origin: &Value,
        check: &identities::IdentityCheck,
        params: Value,
    ) -> bool {
        if check.holds() {
            return true;
        }
        if self.first_failure.is_none() {
            let mut doc = InstanceDoc::from_parts(code.field(), code.space());
            doc.generator = Some(code.grid().clone());
            self.first_failure = Some(json!({
                "identity": identity,
                "origin": origin,
                "params": params,
                "lhs": rat_value(&check.lhs),
                "rhs": rat_value(&check.rhs),
                "instance": instance_value(&doc),
            }));
        }
        false
    }

    fn run_instance(&mut self, code: &CodeMatrix, origin: &Value) -> Result<(), Error> {
        let field = code.field();
        let k = code.k();

        self.vector_sum.instances += 1;
        for m in 0..=k {
            for b in subspaces(field, k, m, self.cap)? {
                let check = identities::weight_sum_over_subspace(code, &b, self.cap)?;
                self.vector_sum.checks += 1;
                if !self.record(
                    "vector_weight_sum",
                    code,
                    origin,
                    &check,
                    json!({"dim": m, "basis": matrix_value(b.basis())}),
                ) {
                    self.vector_sum.failures += 1;
                }
            }
        }

        self.superspace_sum.instances += 1;
        for adim in 0..k {
            for a in subspaces(field, k, adim, self.cap)? {
                for m in adim + 1..=k {
                    let check = identities::superspace_weight_sum(code, &a, m, self.cap)?;
                    self.superspace_sum.checks += 1;
                    if !self.record(
                        "superspace_weight_sum",
                        code,
                        origin,
                        &check,
                        json!({"dim_a": adim, "basis_a": matrix_value(a.basis()), "dim_b": m}),
                    ) {
                        self.superspace_sum.failures += 1;
                    }
                }
            }
        }

        self.dual_route.instances += 1;
        for m in 0..=k {
            for u in subspaces(field, k, m, self.cap)? {
                let check = identities::image_weight_via_dual(code, &u);
                self.dual_route.checks += 1;
                if !self.record(
                    "dual_route_weight",
                    code,
                    origin,
                    &check,
                    json!({"dim": m, "basis": matrix_value(u.basis())}),
                ) {
                    self.dual_route.failures += 1;
                }
            }
        }

        // applies only to full-rank constant-weight generators
        match cwc::sigma_check(code) {
            Err(Error::RankDeficient) => {}
            Err(e) => return Err(e),
            Ok(report) if !report.is_constant => {}
            Ok(_) => {
                self.sigma_point_sum.instances += 1;
                for m in 0..=k {
                    for u in subspaces(field, k, m, self.cap)? {
                        let u = u.with_side(Side::Column);
                        let check = identities::constant_column_weight_sum(code, &u)?;
                        self.sigma_point_sum.checks += 1;
                        if !self.record(
                            "sigma_point_sum",
                            code,
                            origin,
                            &check,
                            json!({"dim": m, "basis": matrix_value(u.basis())}),
                        ) {
                            self.sigma_point_sum.failures += 1;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn cmd_verify_identities(a: &VerifyArgs) -> Result<Outcome, Error> {
    let mut sweep = IdentitySweep::new(a.cap);

    if let Some(path) = &a.instance {
        let doc = parse_instance(path)?;
        let code = if doc.generator.is_some() {
            doc.generator_code()?
        } else {
            doc.left_code()?
        };
        sweep.run_instance(&code, &json!("explicit instance"))?;
    }

    let mut rng = sampling::rng(a.seed);
    for trial in 0..a.trials {
        let inst = sampling::random_code_instance(&mut rng, 3, 6);
        sweep.run_instance(&inst.code, &json!(format!("trial {trial}")))?;
    }

    let fields = vec![
        ("seed", json!(a.seed)),
        ("trials", json!(a.trials)),
        (
            "identities",
            json!({
                "vector_weight_sum": sweep.vector_sum.value(),
                "superspace_weight_sum": sweep.superspace_sum.value(),
                "dual_route_weight": sweep.dual_route.value(),
                "sigma_point_sum": sweep.sigma_point_sum.value(),
            }),
        ),
    ];
    match sweep.first_failure {
        None => Ok(holds("verify-identities", fields)),
        Some(witness) => Ok(fails("verify-identities", witness, fields)),
    }
}

fn cmd_qbinom(a: &QbinomArgs) -> Result<Outcome, Error> {
    if a.q < 2 {
        return Err(Error::Instance(format!(
            "q = {} must be at least 2",
            a.q
        )));
    }
    let value = crate::linalg::qbinom(a.n, a.r, a.q);
    Ok(holds(
        "qbinom",
        vec![
            ("n", json!(a.n)),
            ("r", json!(a.r)),
            ("q", json!(a.q)),
            ("value", json!(value.to_string())),
        ],
    ))
}

/// Render the final document exactly as the process prints it.
pub fn render(outcome: &Outcome) -> String {
    let mut text =
        serde_json::to_string_pretty(&outcome.document).expect("document serializes");
    text.push('\n');
    text
}

//! One function per command.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stablin::catalog::{bundle, run_bundle, section_obstruction, BUNDLE_NAMES, CATALOG_SEED};
use stablin::cohomology::{h1, h2, is_coflabby, is_flabby, tate, torus_h, SweepReport};
use stablin::groups::{subgroups, FiniteGroup};
use stablin::lattice::{
    find_equivariant_section, perm_recognize, splitting_iso, stably_perm_search, stably_perm_verify, verify_iso,
    GLattice, GMap, PermCertificate, PermLattice, PermVerdict, PermWitness, StablyPermCertificate,
    StablySearchOptions, StablySearchOutcome, DEFAULT_STABLY_RANK_BOUND,
};
use stablin::linalg::FinAbGroup;
use stablin::obstructions::{
    amitsur_span, extend_lift, lifting_obstruction, relation_images, search_cox_lift, verify_cox_lift, CoxLift,
    CoxLiftOutcome, SignedPerm,
};
use stablin::poly::{random_rational, MultiPoly, DEFAULT_SAMPLES};

use crate::input::{
    matrix, matrix_rows, parse_document, signed_perm, CertificateInput, Context, PermLatticeInput, SignedPermInput,
    TaskInput,
};
use crate::{deadline, Cli, CliError, Command, Outcome, Status};

/// Default coordinate bound of the permuted-basis search.
pub const DEFAULT_PERM_BOUND: u32 = 2;

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Catalog { name } = &cli.command {
        return catalog(cli, name.as_deref());
    }
    let ctx = load(cli)?;
    match &cli.command {
        Command::Info => info(&ctx),
        Command::H1 | Command::H2 | Command::Tate | Command::TorusH => group_tasks(cli, &ctx),
        Command::Coflabby | Command::Flabby => sweep_tasks(cli, &ctx),
        Command::PermCheck => perm_check(cli, &ctx),
        Command::StablyPerm => stably_perm(cli, &ctx),
        Command::VerifyCert => verify_cert(&ctx),
        Command::Split => split(&ctx),
        Command::LiftCheck => lift_check(cli, &ctx),
        Command::CoxLift => cox_lift(&ctx),
        Command::PolyVerify => poly_verify(cli, &ctx),
        Command::Twist => twist(cli, &ctx),
        Command::Catalog { .. } => unreachable!("handled above"),
    }
}

fn load(cli: &Cli) -> Result<Context, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} needs --input FILE", cli.command.name())))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Context::new(parse_document(&text)?, cli.max_order)
}

fn number(b: &BigInt) -> Value {
    b.to_u64().map_or_else(|| Value::String(b.to_string()), Value::from)
}

pub fn group_json(g: &FinAbGroup) -> Value {
    json!({
        "invariant_factors": g.invariant_factors().iter().map(number).collect::<Vec<_>>(),
        "free_rank": g.free_rank(),
        "text": g.to_string(),
    })
}

fn labels(group: &FiniteGroup, elements: &[usize]) -> Vec<String> {
    elements.iter().map(|&x| group.label(x)).collect()
}

fn normalized(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase()
}

/// Compares an optional expectation with the rendered result.
fn expectation(task: &TaskInput, rendered: &str) -> (Status, Value) {
    match &task.expect {
        None => (Status::Holds, Value::Null),
        Some(e) => {
            let matched = normalized(e) == normalized(rendered);
            let status = if matched { Status::Holds } else { Status::Fails };
            (status, json!({ "expected": e, "matched": matched }))
        }
    }
}

fn tasks_for(cli: &Cli, ctx: &Context) -> Vec<TaskInput> {
    let op = cli.command.name();
    let listed: Vec<TaskInput> = ctx.doc.tasks.iter().filter(|t| t.op == op).cloned().collect();
    if listed.is_empty() {
        vec![TaskInput {
            op: op.into(),
            lattice: cli.lattice.clone(),
            map: None,
            degree: cli.degree,
            modulus: cli.modulus,
            expect: None,
        }]
    } else {
        listed
    }
}

fn info(ctx: &Context) -> Result<Outcome, CliError> {
    let g = &ctx.group;
    let classes = subgroups(g)?.representatives().len();
    let abelianization = g.order() / g.commutator_subgroup().len();
    let mut out = Outcome::new(Status::Holds);
    out.lines.push(format!(
        "group {}: order {}, {} subgroup classes, abelianization of order {}",
        g.name(),
        g.order(),
        classes,
        abelianization
    ));
    out.results.push(json!({
        "group": {
            "name": g.name(),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "generators": labels(g, g.generators()),
            "subgroup_classes": classes,
            "abelianization_order": abelianization,
        }
    }));
    for l in &ctx.doc.lattices {
        let (m, _) = ctx.build_lattice(l)?;
        let traces: Vec<Value> = m.traces().iter().map(|t| Value::String(t.to_string())).collect();
        let fixed = stablin::cohomology::h0(&m).free_rank();
        out.lines.push(format!("lattice {}: rank {}, invariants of rank {}", l.name, m.rank(), fixed));
        out.results.push(json!({
            "lattice": l.name,
            "rank": m.rank(),
            "invariant_rank": fixed,
            "traces": traces,
        }));
    }
    Ok(out)
}

fn group_tasks(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Status::Holds);
    for task in tasks_for(cli, ctx) {
        let (name, m) = ctx.lattice(task.lattice.as_deref())?;
        let (label, group) = match cli.command {
            Command::H1 => ("H^1".to_string(), h1(&m)),
            Command::H2 => {
                let modulus = task.modulus.or(cli.modulus).unwrap_or(0);
                let label = if modulus == 0 { "H^2".to_string() } else { format!("H^2 mod {modulus}") };
                (label, h2(&m, modulus)?)
            }
            Command::Tate => {
                let d = task
                    .degree
                    .or(cli.degree)
                    .ok_or_else(|| CliError::Usage("tate needs --degree -1 or 0".into()))?;
                (format!("Tate H^{d}"), tate(&m, d)?)
            }
            _ => {
                let d = task.degree.or(cli.degree).unwrap_or(1);
                let d = usize::try_from(d).map_err(|_| CliError::Usage(format!("bad torus degree {d}")))?;
                (format!("torus H^{d}"), torus_h(d, &m)?)
            }
        };
        let (status, expect) = expectation(&task, &group.to_string());
        out.status = out.status.and(status);
        out.lines.push(format!("{label}({}, {name}) = {group}", ctx.group.name()));
        out.results.push(json!({
            "op": task.op,
            "lattice": name,
            "degree": task.degree.or(cli.degree),
            "group": group_json(&group),
            "expectation": expect,
        }));
    }
    Ok(out)
}

fn sweep_json(group: &FiniteGroup, r: &SweepReport) -> Value {
    json!({
        "holds": r.holds,
        "witnesses": r.witnesses.iter().map(|w| json!({
            "subgroup_order": w.subgroup.len(),
            "subgroup": labels(group, &w.subgroup),
            "group": group_json(&w.group),
        })).collect::<Vec<_>>(),
    })
}

fn sweep_tasks(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Status::Holds);
    for task in tasks_for(cli, ctx) {
        let (name, m) = ctx.lattice(task.lattice.as_deref())?;
        let r = match cli.command {
            Command::Coflabby => is_coflabby(&m)?,
            _ => is_flabby(&m)?,
        };
        let (status, expect) = match &task.expect {
            Some(_) => expectation(&task, &r.holds.to_string()),
            None if r.holds => (Status::Holds, Value::Null),
            None => (Status::Fails, Value::Null),
        };
        out.status = out.status.and(status);
        out.lines.push(format!("{} {name}: {}", cli.command.name(), r.holds));
        for w in &r.witnesses {
            out.lines.push(format!("  subgroup of order {}: {}", w.subgroup.len(), w.group));
        }
        let mut v = sweep_json(&ctx.group, &r);
        v["op"] = json!(task.op);
        v["lattice"] = json!(name);
        v["expectation"] = expect;
        out.results.push(v);
    }
    Ok(out)
}

fn witness_json(group: &FiniteGroup, w: &PermWitness) -> Value {
    match w {
        PermWitness::NegativeTrace { element, trace } => json!({
            "kind": "negative-trace", "element": group.label(*element), "trace": trace.to_string(),
        }),
        PermWitness::H1 { subgroup, group: h } => json!({
            "kind": "h1", "subgroup": labels(group, subgroup), "group": group_json(h),
        }),
        PermWitness::TateMinus1 { subgroup, group: h } => json!({
            "kind": "tate-1", "subgroup": labels(group, subgroup), "group": group_json(h),
        }),
    }
}

/// The document with its tasks dropped and the certificate attached: a
/// self-contained input for `verify-cert`.
fn certificate_document(ctx: &Context, cert: CertificateInput) -> Value {
    let mut doc = ctx.doc.clone();
    doc.tasks.clear();
    doc.certificate = Some(cert);
    serde_json::to_value(&doc).expect("document serializes")
}

fn perm_cert_input(lattice: &str, c: &PermCertificate) -> CertificateInput {
    CertificateInput::Permutation {
        lattice: lattice.into(),
        basis: matrix_rows(&c.basis),
        perms: c.generator_perms.iter().map(|p| p.images().to_vec()).collect(),
    }
}

fn perm_check(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let (name, m) = ctx.lattice(cli.lattice.as_deref())?;
    let bound = cli.bound.unwrap_or(DEFAULT_PERM_BOUND);
    let coflabby = is_coflabby(&m)?;
    let flabby = is_flabby(&m)?;
    let verdict = perm_recognize(&m, bound, deadline(cli)?)?;
    let mut out = Outcome::new(Status::Holds);
    let mut result = json!({
        "lattice": name,
        "bound": bound,
        "coflabby": sweep_json(&ctx.group, &coflabby),
        "flabby": sweep_json(&ctx.group, &flabby),
    });
    match verdict {
        PermVerdict::Yes(cert) => {
            out.lines.push(format!("{name} is a permutation lattice; basis {}", cert.basis));
            result["verdict"] = json!("permutation");
            out.certificate = Some(certificate_document(ctx, perm_cert_input(&name, &cert)));
        }
        PermVerdict::No(w) => {
            out.status = Status::Fails;
            out.lines.push(format!("{name} is not a permutation lattice"));
            for sw in &coflabby.witnesses {
                out.lines.push(format!("  coflabby witness: H^1 on a subgroup of order {} is {}", sw.subgroup.len(), sw.group));
            }
            for sw in &flabby.witnesses {
                out.lines.push(format!("  flabby witness: Tate H^-1 on a subgroup of order {} is {}", sw.subgroup.len(), sw.group));
            }
            result["verdict"] = json!("not-permutation");
            result["witness"] = witness_json(&ctx.group, &w);
        }
        PermVerdict::Inconclusive => {
            out.status = Status::Inconclusive;
            out.lines.push(format!("no permuted basis of {name} with coordinates in [-{bound}, {bound}]"));
            result["verdict"] = json!("inconclusive");
        }
    }
    out.results.push(result);
    Ok(out)
}

fn perm_lattice_input(pl: &PermLattice) -> PermLatticeInput {
    PermLatticeInput {
        rank: pl.lattice.rank(),
        generators: pl.lattice.generator_matrices().iter().map(matrix_rows).collect(),
        basis: matrix_rows(&pl.cert.basis),
        perms: pl.cert.generator_perms.iter().map(|p| p.images().to_vec()).collect(),
    }
}

fn stably_perm(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let (name, m) = ctx.lattice(cli.lattice.as_deref())?;
    let options = StablySearchOptions {
        rank_bound: cli.bound.map_or(DEFAULT_STABLY_RANK_BOUND, |b| b as usize),
        deadline: deadline(cli)?,
        ..StablySearchOptions::default()
    };
    let mut out = Outcome::new(Status::Holds);
    let mut result = json!({ "lattice": name, "rank_bound": options.rank_bound });
    match stably_perm_search(&m, &options)? {
        StablySearchOutcome::Found(c) => {
            out.lines.push(format!(
                "{name} + P{} = Q{} with iso {}",
                c.p.lattice.rank(),
                c.q.lattice.rank(),
                c.iso
            ));
            result["verdict"] = json!("stably-permutation");
            let cert = CertificateInput::StablyPermutation {
                lattice: name.clone(),
                p: perm_lattice_input(&c.p),
                q: perm_lattice_input(&c.q),
                iso: matrix_rows(&c.iso),
            };
            out.certificate = Some(certificate_document(ctx, cert));
        }
        StablySearchOutcome::Obstructed(w) => {
            out.status = Status::Fails;
            out.lines.push(format!("{name} is not stably permutation"));
            result["verdict"] = json!("obstructed");
            result["witness"] = witness_json(&ctx.group, &w);
        }
        StablySearchOutcome::NotFound => {
            out.status = Status::Inconclusive;
            out.lines.push(format!("no certificate for {name} within added rank {}", options.rank_bound));
            result["verdict"] = json!("inconclusive");
        }
    }
    out.results.push(result);
    Ok(out)
}

fn perm_lattice(ctx: &Context, p: &PermLatticeInput) -> Result<PermLattice, CliError> {
    let lattice = if p.rank == 0 || ctx.group.generators().is_empty() {
        GLattice::trivial(ctx.group.clone(), p.rank)
    } else {
        let mats = p.generators.iter().map(|m| matrix(m)).collect::<Result<Vec<_>, _>>()?;
        stablin::lattice::make_lattice(ctx.group.clone(), mats)?
    };
    let cert = PermCertificate {
        basis: if p.rank == 0 { stablin::linalg::IntMatrix::zeros(0, 0) } else { matrix(&p.basis)? },
        generator_perms: p
            .perms
            .iter()
            .map(|q| stablin::groups::Permutation::new(q.clone()))
            .collect::<stablin::Result<Vec<_>>>()?,
    };
    Ok(PermLattice { lattice, cert })
}

fn cox_lift_input(lifts: &[SignedPerm]) -> CertificateInput {
    CertificateInput::CoxLift {
        generators: lifts
            .iter()
            .map(|l| SignedPermInput {
                images: l.perm.images().to_vec(),
                signs: l.signs.clone(),
            })
            .collect(),
    }
}

fn verify_cert(ctx: &Context) -> Result<Outcome, CliError> {
    let cert = ctx
        .doc
        .certificate
        .as_ref()
        .ok_or_else(|| CliError::Schema("document has no certificate".into()))?;
    let (kind, valid, detail) = match cert {
        CertificateInput::Permutation { lattice, basis, perms } => {
            let (_, m) = ctx.lattice(Some(lattice))?;
            let c = PermCertificate {
                basis: matrix(basis)?,
                generator_perms: perms
                    .iter()
                    .map(|q| stablin::groups::Permutation::new(q.clone()))
                    .collect::<stablin::Result<Vec<_>>>()?,
            };
            ("permutation", c.validate(&m), format!("basis {}", c.basis))
        }
        CertificateInput::StablyPermutation { lattice, p, q, iso } => {
            let (_, m) = ctx.lattice(Some(lattice))?;
            let c = StablyPermCertificate {
                m,
                p: perm_lattice(ctx, p)?,
                q: perm_lattice(ctx, q)?,
                iso: matrix(iso)?,
            };
            ("stably-permutation", stably_perm_verify(&c), format!("iso {}", c.iso))
        }
        CertificateInput::Section { map, section } => {
            let (_, pi) = ctx.map(Some(map))?;
            let s = GMap {
                source: pi.target.clone(),
                target: pi.source.clone(),
                matrix: matrix(section)?,
            };
            let shaped = s.matrix.rows() == pi.source.rank() && s.matrix.cols() == pi.target.rank();
            let valid = shaped
                && s.is_equivariant()
                && pi.matrix.mul(&s.matrix).is_identity()
                && splitting_iso(&pi, &s).map(|iso| verify_iso(&iso)).unwrap_or(false);
            ("section", valid, format!("section {}", s.matrix))
        }
        CertificateInput::CoxLift { generators } => {
            let cox = ctx.cox()?;
            let specs = ctx.lift_specs(&cox)?;
            let gens = generators.iter().map(signed_perm).collect::<Result<Vec<_>, _>>()?;
            let valid = match extend_lift(&ctx.group, &gens) {
                Some(element_lifts) => verify_cox_lift(
                    &cox,
                    &ctx.group,
                    &specs,
                    &CoxLift {
                        generator_lifts: gens.clone(),
                        element_lifts,
                    },
                )?,
                None => false,
            };
            let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            ("cox-lift", valid, shown.join("; "))
        }
    };
    let mut out = Outcome::new(if valid { Status::Holds } else { Status::Fails });
    out.lines.push(format!("{kind} certificate: {}", if valid { "valid" } else { "INVALID" }));
    out.lines.push(format!("  {detail}"));
    out.results.push(json!({ "kind": kind, "valid": valid }));
    Ok(out)
}

fn split(ctx: &Context) -> Result<Outcome, CliError> {
    let task_map = ctx.doc.tasks.iter().find(|t| t.op == "split").and_then(|t| t.map.clone());
    let (name, pi) = ctx.map(task_map.as_deref())?;
    let mut out = Outcome::new(Status::Holds);
    match find_equivariant_section(&pi)? {
        Some(s) => {
            let iso = splitting_iso(&pi, &s)?;
            let verified = verify_iso(&iso);
            if !verified {
                out.status = Status::Fails;
            }
            out.lines.push(format!("{name} splits: section {}", s.matrix));
            out.lines.push(format!("  splitting iso {} verified: {verified}", iso.matrix));
            out.results.push(json!({
                "map": name,
                "splits": true,
                "section": matrix_rows(&s.matrix),
                "splitting_iso": matrix_rows(&iso.matrix),
                "iso_verified": verified,
            }));
            out.certificate = Some(certificate_document(
                ctx,
                CertificateInput::Section {
                    map: name,
                    section: matrix_rows(&s.matrix),
                },
            ));
        }
        None => {
            out.status = Status::Fails;
            let witness = section_obstruction(&pi)?;
            out.lines.push(format!("{name} has no equivariant section"));
            if let Some(w) = &witness {
                out.lines.push(format!("  {w}"));
            }
            out.results.push(json!({ "map": name, "splits": false, "witness": witness }));
        }
    }
    Ok(out)
}

fn lift_check(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let actions = ctx.projective_actions(cli.modulus)?;
    let mut out = Outcome::new(Status::Holds);
    let mut reports = Vec::new();
    for (name, action) in &actions {
        let r = lifting_obstruction(action)?;
        if !r.trivial {
            out.status = Status::Fails;
        }
        out.lines.push(format!(
            "{name}: {} (class order {}, scalars mod {})",
            if r.trivial { "lifts" } else { "obstructed" },
            r.class_order,
            r.modulus
        ));
        out.results.push(json!({
            "action": name,
            "modulus": r.modulus,
            "decision_modulus": r.decision_modulus,
            "cocycle": r.cocycle,
            "trivial": r.trivial,
            "class_order": r.class_order,
            "trivializing_cochain": r.trivializing_cochain,
        }));
        reports.push(r);
    }
    match amitsur_span(&reports) {
        Ok(span) => {
            out.lines.push(format!("span of the classes: {span}"));
            out.results.push(json!({ "span": group_json(&span) }));
        }
        Err(e) => out.results.push(json!({ "span": Value::Null, "note": e.to_string() })),
    }
    Ok(out)
}

fn cox_lift(ctx: &Context) -> Result<Outcome, CliError> {
    let cox = ctx.cox()?;
    let specs = ctx.lift_specs(&cox)?;
    let mut out = Outcome::new(Status::Holds);
    match search_cox_lift(&cox, &ctx.group, &specs)? {
        CoxLiftOutcome::Found(lift) => {
            for (i, l) in lift.generator_lifts.iter().enumerate() {
                let images = relation_images(&cox, l)?.unwrap_or_default();
                out.lines.push(format!("generator {}: {l}", ctx.group.label(ctx.group.generators()[i])));
                out.results.push(json!({
                    "generator": ctx.group.label(ctx.group.generators()[i]),
                    "images": l.perm.images(),
                    "signs": l.signs,
                    "relation_images": images.iter().map(|(j, s)| json!([j, s])).collect::<Vec<_>>(),
                }));
            }
            out.certificate = Some(certificate_document(ctx, cox_lift_input(&lift.generator_lifts)));
        }
        CoxLiftOutcome::NoneInClass { examined } => {
            out.status = Status::Fails;
            out.lines.push(format!("no signed-permutation lift ({examined} candidates examined)"));
            out.results.push(json!({ "found": false, "examined": examined }));
        }
    }
    Ok(out)
}

fn poly_verify(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let polys = ctx
        .doc
        .polynomials
        .as_ref()
        .ok_or_else(|| CliError::Schema("document has no polynomials section".into()))?;
    let seed = cli.seed.unwrap_or(CATALOG_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::new(Status::Holds);
    for id in &polys.identities {
        let lhs = MultiPoly::parse(&id.lhs, &polys.vars)?;
        let rhs = MultiPoly::parse(&id.rhs, &polys.vars)?;
        // unmapped variables stay fixed
        let images = polys
            .vars
            .iter()
            .map(|v| match id.map.as_ref().and_then(|m| m.get(v)) {
                Some(text) => MultiPoly::parse(text, &polys.vars),
                None => MultiPoly::var(&polys.vars, v),
            })
            .collect::<stablin::Result<Vec<_>>>()?;
        let diff = lhs.compose(&images)?.sub(&rhs.compose(&images)?)?;
        let exact = diff.is_zero();
        // evaluate the images first, then both sides: no expansion involved
        let mut failures = 0usize;
        for _ in 0..DEFAULT_SAMPLES {
            let point: Vec<BigRational> = polys.vars.iter().map(|_| random_rational(&mut rng)).collect();
            let values = images.iter().map(|p| p.evaluate(&point)).collect::<stablin::Result<Vec<_>>>()?;
            if lhs.evaluate(&values)? != rhs.evaluate(&values)? {
                failures += 1;
            }
        }
        if !exact {
            out.status = Status::Fails;
        }
        out.lines.push(format!(
            "{}: {} ({}/{} sampled points agree)",
            id.name,
            if exact { "holds" } else { "FAILS" },
            DEFAULT_SAMPLES - failures,
            DEFAULT_SAMPLES
        ));
        out.results.push(json!({
            "identity": id.name,
            "exact": exact,
            "difference": diff.to_string(),
            "samples": DEFAULT_SAMPLES,
            "sample_failures": failures,
            "seed": seed,
        }));
    }
    Ok(out)
}

// h2 is skipped (None) above the resolution cap
fn invariants(m: &GLattice) -> Result<BTreeMap<&'static str, Option<FinAbGroup>>, CliError> {
    let h2 = match h2(m, 0) {
        Ok(g) => Some(g),
        Err(stablin::Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(BTreeMap::from([
        ("h1", Some(h1(m))),
        ("h2", h2),
        ("tate-1", Some(tate(m, -1)?)),
        ("tate0", Some(tate(m, 0)?)),
    ]))
}

fn twist(cli: &Cli, ctx: &Context) -> Result<Outcome, CliError> {
    let (name, m) = ctx.lattice(cli.lattice.as_deref())?;
    let (a, inner) = ctx.automorphism()?;
    let twisted = m.twist(&a)?;
    let before = invariants(&m)?;
    let after = invariants(&twisted)?;
    let mut out = Outcome::new(Status::Holds);
    let mut rows = Vec::new();
    for (k, g) in &before {
        let (Some(g), Some(h)) = (g, &after[k]) else {
            out.lines.push(format!("{k}: skipped (group too large)"));
            rows.push(json!({ "invariant": k, "skipped": true }));
            continue;
        };
        let same = g == h;
        if !same {
            out.status = Status::Fails;
        }
        out.lines.push(format!("{k}: {g} -> {h}"));
        rows.push(json!({ "invariant": k, "before": group_json(g), "after": group_json(h), "same": same }));
    }
    let coflabby = (is_coflabby(&m)?.holds, is_coflabby(&twisted)?.holds);
    if coflabby.0 != coflabby.1 {
        out.status = Status::Fails;
    }
    let mut result = json!({ "lattice": name, "invariants": rows, "coflabby": [coflabby.0, coflabby.1] });
    if let Some(CertificateInput::StablyPermutation { lattice, p, q, iso }) = &ctx.doc.certificate {
        if *lattice == name {
            let c = StablyPermCertificate {
                m: m.clone(),
                p: perm_lattice(ctx, p)?,
                q: perm_lattice(ctx, q)?,
                iso: matrix(iso)?,
            };
            let verdicts = (stably_perm_verify(&c), stably_perm_verify(&c.twist(&a)?));
            if verdicts.0 != verdicts.1 {
                out.status = Status::Fails;
            }
            out.lines.push(format!("stably permutation: {} -> {}", verdicts.0, verdicts.1));
            result["stably_permutation"] = json!([verdicts.0, verdicts.1]);
        }
    }
    if let Some(g) = inner {
        // rho(g) or its inverse intertwines m with its conjugate twist
        let candidates = [g, ctx.group.inv(g)];
        let found = candidates.iter().find_map(|&x| {
            GMap::new(m.clone(), twisted.clone(), m.rho(x).clone())
                .ok()
                .filter(verify_iso)
                .map(|f| (x, f))
        });
        match found {
            Some((x, f)) => {
                out.lines.push(format!("intertwiner rho({}) = {}", ctx.group.label(x), f.matrix));
                result["intertwiner"] = json!({ "element": ctx.group.label(x), "matrix": matrix_rows(&f.matrix) });
            }
            None => {
                out.status = Status::Fails;
                result["intertwiner"] = Value::Null;
            }
        }
    }
    out.results.push(result);
    Ok(out)
}

fn catalog(cli: &Cli, name: Option<&str>) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Status::Holds);
    let Some(name) = name else {
        for n in BUNDLE_NAMES {
            let b = bundle(n)?;
            out.lines.push(format!("{n}: group of order {}, {} facts", b.group.order(), b.facts.len()));
            out.results.push(json!({ "bundle": n, "order": b.group.order(), "facts": b.facts.len() }));
        }
        return Ok(out);
    };
    let mut b = bundle(name)?;
    if let Some(seed) = cli.seed {
        b.reseed(seed);
    }
    let report = run_bundle(&b);
    if !report.all_passed() {
        out.status = Status::Fails;
    }
    for r in &report.results {
        out.lines.push(format!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.claim));
        if !r.passed {
            if let Some(w) = &r.witness {
                out.lines.push(format!("  {w}"));
            }
        }
        out.results.push(json!({
            "fact": r.name,
            "claim": r.claim,
            "passed": r.passed,
            "computed": r.computed,
            "witness": r.witness,
        }));
    }
    Ok(out)
}

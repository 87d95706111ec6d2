//! End-to-end acceptance suite: one PASS/FAIL line per criterion.
//!
//! Two criteria are known not to hold as stated: the dP6 sequence has no
//! integral equivariant section, and the stated quadric cofactor is wrong.
//! The run succeeds when exactly those fail.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use stablin::catalog::{self, bundle, run_bundle, BundleReport, CATALOG_SEED};
use stablin::cohomology::{h1, h2, is_coflabby, is_flabby, tate};
use stablin::groups::{conjugation_automorphism, named_group, subgroups, FiniteGroup, GroupHom, GroupSpec, Permutation, Subgroup};
use stablin::lattice::{
    coset_lattice, find_equivariant_section, make_lattice, preserves_form, splitting_iso, stably_perm_verify, verify_iso,
    GLattice, GMap,
};
use stablin::linalg::{FinAbGroup, IntMatrix};
use stablin::obstructions::{
    amitsur_span, induces_torus_action, lifting_obstruction, search_cox_lift, verify_cox_lift, CoxLiftOutcome, TorusAction,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict, Duration);

const KNOWN_FAILURES: [usize; 2] = [1, 4];

fn lib<T>(r: stablin::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(named_group(&GroupSpec::parse(name).unwrap()).unwrap())
}

fn fact<'a>(report: &'a BundleReport, name: &str) -> Result<&'a catalog::FactResult, String> {
    report
        .results
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| format!("no fact {name} in {}", report.bundle))
}

// ------------------------------------------------------------ criterion 1

fn dp6_splitting() -> Verdict {
    let b = lib(bundle("dp6"))?;
    let pi = lib(b.map("projection"))?;
    match lib(find_equivariant_section(pi))? {
        Some(s) => {
            ensure(pi.matrix.mul(&s.matrix).is_identity(), "pi * s is not the identity")?;
            let iso = lib(splitting_iso(pi, &s))?;
            ensure(verify_iso(&iso), "assembled isomorphism does not verify")?;
            Ok("section found and Z^6 = M + Pic verified".into())
        }
        None => {
            let why = lib(catalog::section_obstruction(pi))?.unwrap_or_default();
            Err(format!("no integral equivariant section: {why}"))
        }
    }
}

// ------------------------------------------------------------ criterion 2

fn dp5_certificate() -> Verdict {
    let basis = catalog::seven_vector_basis();
    ensure(basis.determinant().abs().is_one(), "seven-vector basis is not unimodular")?;
    let m = lib(catalog::dp5_lattice())?;
    let cert = lib(catalog::dp5_certificate(&m))?;
    // the basis carries the permutation action on Q to the action on M + P
    let sum = lib(m.direct_sum(&cert.p.lattice))?;
    lib(GMap::new(cert.q.lattice.clone(), sum, basis.clone()))?;
    ensure(stably_perm_verify(&cert), "stably_perm_verify rejected the certificate")?;
    let cremona = catalog::cremona_matrix();
    ensure(cremona.mul(&cremona).is_identity(), "Cremona matrix is not an involution")?;

    let s = m.generator_matrices();
    let id = IntMatrix::identity(5);
    let order_is = |a: &IntMatrix, k: usize| {
        let mut p = id.clone();
        for i in 1..=k {
            p = p.mul(a);
            if p.is_identity() {
                return i == k;
            }
        }
        false
    };
    for i in 0..s.len() {
        ensure(order_is(&s[i], 2), format!("generator {} is not an involution", i + 1))?;
        for j in i + 1..s.len() {
            let k = if j == i + 1 { 3 } else { 2 };
            ensure(order_is(&s[i].mul(&s[j]), k), format!("(s{} s{}) does not have order {k}", i + 1, j + 1))?;
        }
    }
    let distinct: BTreeSet<Vec<Vec<BigInt>>> = m.action().iter().map(IntMatrix::to_rows).collect();
    ensure(distinct.len() == 120, format!("action has {} distinct matrices", distinct.len()))?;
    let form = IntMatrix::diagonal(&[1, -1, -1, -1, -1].map(BigInt::from));
    ensure(lib(preserves_form(&m, &form))?, "form diag(1,-1,-1,-1,-1) not preserved")?;
    Ok("unimodular, equivariant, verified; Coxeter relations and the form hold".into())
}

// ------------------------------------------------------------ criterion 3

fn p1_obstructions() -> Verdict {
    let (klein, s3) = lib(catalog::p1_actions())?;
    let k = lib(lifting_obstruction(&klein))?;
    ensure(!k.trivial && k.class_order == 2, format!("Klein class order {}", k.class_order))?;
    let span = lib(amitsur_span(std::slice::from_ref(&k)))?;
    ensure(span == FinAbGroup::cyclic(2), format!("span {span}"))?;
    let s = lib(lifting_obstruction(&s3))?;
    ensure(s.trivial && s.class_order == 1, "S3 class is not trivial")?;
    Ok(format!("Klein class of order 2 (decided mod {}), span {span}; S3 trivial", k.decision_modulus))
}

// ------------------------------------------------------------ criterion 4

fn polynomial_identities() -> Verdict {
    let dp6 = run_bundle(&lib(bundle("dp6"))?);
    let g2 = run_bundle(&lib(bundle("weyl-g2"))?);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (label, report, name) in [
        ("a", &dp6, "chart-relation"),
        ("b", &g2, "plucker-reassignment"),
        ("c", &g2, "quadric"),
        ("d", &g2, "plucker-1234"),
        ("d", &g2, "plucker-1235"),
    ] {
        let r = fact(report, name)?;
        let mut ok = r.passed;
        if label == "d" {
            ok &= r.computed.starts_with("25/25") && r.computed.contains(&CATALOG_SEED.to_string());
        }
        if !ok {
            let shown = match r.computed.char_indices().nth(72) {
                Some((cut, _)) => format!("{} ...", &r.computed[..cut]),
                None => r.computed.clone(),
            };
            failures.push(format!("({label}) {name}: {shown}"));
        }
        notes.push(format!("({label}) {}", if ok { "ok" } else { "FAIL" }));
    }
    let corrected = fact(&g2, "quadric-corrected")?;
    if failures.is_empty() {
        Ok(notes.join(" "))
    } else {
        Err(format!(
            "{}; the corrected cofactor {} the identity",
            failures.join("; "),
            if corrected.passed { "does satisfy" } else { "does not satisfy either" }
        ))
    }
}

// ------------------------------------------------------------ criterion 5

fn dp6_s4_lift() -> Verdict {
    let (cox, g, specs) = lib(catalog::dp6_s4_lift_problem())?;
    let lift = match lib(search_cox_lift(&cox, &g, &specs))? {
        CoxLiftOutcome::Found(l) => l,
        CoxLiftOutcome::NoneInClass { examined } => return Err(format!("no lift after {examined} assignments")),
    };
    ensure(lib(verify_cox_lift(&cox, &g, &specs, &lift))?, "lift does not re-verify")?;
    // x1 x2 x3 = 1 on the torus, so compare induced actions rather than exponents
    let translation = |signs: Vec<i8>| TorusAction {
        exponents: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        signs,
    };
    let klein: Vec<usize> = ["(1,3)(2,4)", "(1,2)(3,4)", "(1,4)(2,3)"]
        .iter()
        .map(|c| g.find_permutation(&Permutation::from_cycles(c, 4).unwrap()).expect("element of S4"))
        .collect();
    for (name, signs) in [("iota1", vec![-1, 1, -1]), ("iota2", vec![-1, -1, 1])] {
        let t = translation(signs);
        let by = klein.iter().find(|&&x| induces_torus_action(&cox, &lift.element_lifts[x], &t));
        ensure(by.is_some(), format!("{name} {:?} is not induced by the Klein subgroup", t.signs))?;
    }
    ensure(
        induces_torus_action(&cox, &lift.generator_lifts[2], &translation(vec![-1, 1, -1])),
        "(1,3)(2,4) does not induce iota1",
    )?;

    // relators: powers of generators and every Cayley-graph relation
    let ngens = g.generators().len();
    let inverse_word = |w: &[usize]| -> Vec<usize> {
        w.iter()
            .rev()
            .flat_map(|&s| std::iter::repeat_n(s, g.element_order(g.generators()[s]) - 1))
            .collect()
    };
    let mut relators: Vec<Vec<usize>> = (0..ngens)
        .map(|s| vec![s; g.element_order(g.generators()[s])])
        .collect();
    for x in g.elements() {
        for (s, &gen) in g.generators().iter().enumerate() {
            let mut w = g.word(x);
            w.push(s);
            w.extend(inverse_word(&g.word(g.mul(x, gen))));
            relators.push(w);
        }
    }
    let point: Vec<BigRational> = (2..8).map(|k| BigRational::new(BigInt::from(k * k + 1), BigInt::from(k))).collect();
    for w in &relators {
        let t = lift.along_word(w);
        ensure(t.is_identity() && t.apply(&point) == point, format!("relator {w:?} gives {t:?}"))?;
    }
    let signs: Vec<String> = lift
        .generator_lifts
        .iter()
        .map(|l| l.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect())
        .collect();
    Ok(format!("lift [{}]; {} relators compose to the identity", signs.join(", "), relators.len()))
}

// ------------------------------------------------------------ criterion 6

const SWEEP_GROUPS: [&str; 9] = ["C2", "C3", "C4", "klein", "C6", "S3", "D4", "S4", "S3 x S2"];

fn permutation_sweep() -> Verdict {
    let mut checked = 0;
    for name in SWEEP_GROUPS {
        let g = group(name);
        let reps: Vec<Subgroup> = lib(subgroups(&g))?.representatives().into_iter().cloned().collect();
        for k in &reps {
            let (m, _) = coset_lattice(&g, k);
            for h in &reps {
                let r = lib(m.restrict(h))?;
                let (a, b) = (h1(&r), lib(tate(&r, -1))?);
                ensure(
                    a.is_trivial() && b.is_trivial(),
                    format!("{name}: Z[G/K] with |K| = {} over |H| = {}: h1 {a}, tate-1 {b}", k.order(), h.order()),
                )?;
                checked += 1;
            }
            ensure(lib(is_coflabby(&m))?.holds, format!("{name}: Z[G/K] not coflabby, |K| = {}", k.order()))?;
            ensure(lib(is_flabby(&m))?.holds, format!("{name}: Z[G/K] not flabby, |K| = {}", k.order()))?;
        }
    }
    Ok(format!("{checked} restrictions of coset lattices over {} groups", SWEEP_GROUPS.len()))
}

// ------------------------------------------------------------ criterion 7
//
// Brute-force oracles, independent of the resolution and Smith forms.
// Groups are compared through |A[d]| for every d up to the group order,
// which determines a finite abelian group.

fn torsion_counts(a: &FinAbGroup, up_to: u64) -> Vec<u64> {
    assert_eq!(a.free_rank(), 0);
    (1..=up_to)
        .map(|d| a.invariant_factors().iter().map(|n| n.to_u64().unwrap().gcd(&d)).product())
        .collect()
}

fn vectors(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn act(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    m.mul_vec(&v).iter().map(|x| x.to_i64().unwrap()).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(k: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| k * x).collect()
}

/// Crossed homomorphisms `f(gh) = f(g) + g f(h)` with generator values in a
/// box, as their values on all elements.
fn crossed_homs(m: &GLattice, bound: i64) -> Vec<Vec<Vec<i64>>> {
    let g = m.group();
    let (n, r) = (g.order(), m.rank());
    let mut out = Vec::new();
    for values in vectors(r * g.generators().len(), bound) {
        let gen_value = |s: usize| values[s * r..(s + 1) * r].to_vec();
        let mut f = vec![vec![0; r]; n];
        for (x, parent, s) in g.spanning_tree() {
            f[x] = add(&f[parent], &act(m.rho(parent), &gen_value(s)));
        }
        let ok = g
            .elements()
            .all(|x| g.elements().all(|y| f[g.mul(x, y)] == add(&f[x], &act(m.rho(x), &f[y]))));
        if ok {
            out.push(f);
        }
    }
    out
}

/// `|H^1[d]|` by counting cocycle classes with `d f` a coboundary.
fn h1_oracle(m: &GLattice, bound: i64) -> Vec<u64> {
    let g = m.group();
    let coboundaries: BTreeSet<Vec<Vec<i64>>> = vectors(m.rank(), 2 * bound)
        .into_iter()
        .map(|v| g.elements().map(|x| add(&act(m.rho(x), &v), &scale(-1, &v))).collect())
        .collect();
    let is_coboundary = |f: &Vec<Vec<i64>>| coboundaries.contains(f);
    let mut classes: Vec<Vec<Vec<i64>>> = Vec::new();
    for f in crossed_homs(m, bound) {
        let known = classes.iter().any(|c| {
            let diff: Vec<Vec<i64>> = f.iter().zip(c).map(|(a, b)| add(a, &scale(-1, b))).collect();
            is_coboundary(&diff)
        });
        if !known {
            classes.push(f);
        }
    }
    (1..=g.order() as i64)
        .map(|d| {
            classes
                .iter()
                .filter(|c| is_coboundary(&c.iter().map(|v| scale(d, v)).collect()))
                .count() as u64
        })
        .collect()
}

/// `|H^-1[d]|` for `ker N / I_G M` by enumeration in a box.
fn tate_minus_one_oracle(m: &GLattice, bound: i64) -> Vec<u64> {
    let g = m.group();
    let norm = m.norm_matrix();
    let augmentation: BTreeSet<Vec<i64>> = {
        // sums of (g - 1) w over generators, w in a box
        let mut reach: BTreeSet<Vec<i64>> = [vec![0; m.rank()]].into();
        for &s in g.generators() {
            let step: Vec<Vec<i64>> = vectors(m.rank(), 2 * bound)
                .into_iter()
                .map(|w| add(&act(m.rho(s), &w), &scale(-1, &w)))
                .collect();
            reach = reach.iter().flat_map(|a| step.iter().map(move |b| add(a, b))).collect();
        }
        reach
    };
    let kernel: Vec<Vec<i64>> = vectors(m.rank(), bound)
        .into_iter()
        .filter(|v| act(&norm, v).iter().all(|&x| x == 0))
        .collect();
    let mut classes: Vec<Vec<i64>> = Vec::new();
    for v in kernel {
        if !classes.iter().any(|c| augmentation.contains(&add(&v, &scale(-1, c)))) {
            classes.push(v);
        }
    }
    (1..=g.order() as i64)
        .map(|d| classes.iter().filter(|c| augmentation.contains(&scale(d, c))).count() as u64)
        .collect()
}

/// `H^2(G, Z) = Hom(G, Q/Z) = Hom(G, Z/|G|)`: homomorphisms enumerated on
/// generators and checked on the whole multiplication table.
fn h2_trivial_oracle(g: &FiniteGroup) -> Vec<u64> {
    let n = g.order() as u64;
    let k = g.generators().len();
    let mut homs = Vec::new();
    for code in 0..n.pow(k as u32) {
        let values: Vec<u64> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
        let mut f = vec![0u64; g.order()];
        for (x, parent, s) in g.spanning_tree() {
            f[x] = (f[parent] + values[s]) % n;
        }
        if g.elements().all(|x| g.elements().all(|y| f[g.mul(x, y)] == (f[x] + f[y]) % n)) {
            homs.push(f);
        }
    }
    (1..=n)
        .map(|d| homs.iter().filter(|f| f.iter().all(|&v| v * d % n == 0)).count() as u64)
        .collect()
}

/// `|H^2(G, Z/q)|` from normalized 2-cocycles and coboundaries.
fn h2_mod_oracle(g: &FiniteGroup, q: u64) -> u64 {
    let n = g.order();
    let e = g.identity();
    let others: Vec<usize> = g.elements().filter(|&x| x != e).collect();
    let cells: Vec<(usize, usize)> = others.iter().flat_map(|&a| others.iter().map(move |&b| (a, b))).collect();
    let mut cocycles = 0u64;
    for code in 0..q.pow(cells.len() as u32) {
        let mut c = vec![0u64; n * n];
        for (i, &(a, b)) in cells.iter().enumerate() {
            c[a * n + b] = code / q.pow(i as u32) % q;
        }
        let ok = g.elements().all(|x| {
            g.elements().all(|y| {
                g.elements().all(|z| {
                    (c[y * n + z] + c[x * n + g.mul(y, z)]) % q == (c[g.mul(x, y) * n + z] + c[x * n + y]) % q
                })
            })
        });
        cocycles += ok as u64;
    }
    let mut boundaries = BTreeSet::new();
    for code in 0..q.pow(others.len() as u32) {
        let mut b = vec![0u64; n];
        for (i, &x) in others.iter().enumerate() {
            b[x] = code / q.pow(i as u32) % q;
        }
        let db: Vec<u64> = (0..n * n).map(|i| (b[i / n] + b[i % n] + q - b[g.mul(i / n, i % n)]) % q).collect();
        boundaries.insert(db);
    }
    cocycles / boundaries.len() as u64
}

fn cohomology_oracles() -> Verdict {
    let c2 = group("C2");
    let sign = lib(make_lattice(c2.clone(), vec![IntMatrix::from_rows(&[vec![-1]])]))?;
    let z2 = torsion_counts(&FinAbGroup::cyclic(2), 2);
    let computed = torsion_counts(&h1(&sign), 2);
    ensure(computed == z2 && h1_oracle(&sign, 3) == z2, "h1(C2, sign) is not Z/2")?;
    let computed = torsion_counts(&lib(tate(&sign, -1))?, 2);
    ensure(computed == z2 && tate_minus_one_oracle(&sign, 3) == z2, "tate(C2, sign, -1) is not Z/2")?;
    // a rank-two case where the oracle and the code must agree on something nontrivial
    let skew = lib(make_lattice(c2.clone(), vec![IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])]))?;
    ensure(h1_oracle(&skew, 2) == torsion_counts(&h1(&skew), 2), "h1(C2, Z[C2]) disagrees")?;
    ensure(
        tate_minus_one_oracle(&skew, 2) == torsion_counts(&lib(tate(&skew, -1))?, 2),
        "tate(C2, Z[C2], -1) disagrees",
    )?;

    let mut summary = Vec::new();
    for name in ["C2", "C3", "klein", "S3"] {
        let g = group(name);
        let n = g.order() as u64;
        let trivial = GLattice::trivial(g.clone(), 1);
        let computed = lib(h2(&trivial, 0))?;
        let oracle = h2_trivial_oracle(&g);
        ensure(torsion_counts(&computed, n) == oracle, format!("h2({name}, Z) = {computed} disagrees with Hom(G, Q/Z)"))?;
        // the dual of the abelianization has the same torsion counts
        let commutator = g.commutator_subgroup().len() as u64;
        ensure(oracle[n as usize - 1] == n / commutator, format!("|Hom({name}, Q/Z)| is not |G^ab|"))?;
        if name == "C2" {
            ensure(computed == FinAbGroup::cyclic(2), "h2(C2, Z) is not Z/2")?;
        }
        summary.push(format!("h2({name}, Z) = {computed}"));
    }
    for (name, q) in [("C2", 2), ("C3", 3), ("klein", 2)] {
        let g = group(name);
        let computed = lib(h2(&GLattice::trivial(g.clone(), 1), q))?;
        let order = computed.torsion_order().to_u64().unwrap();
        let oracle = h2_mod_oracle(&g, q);
        ensure(order == oracle, format!("|H^2({name}, Z/{q})|: {order} vs oracle {oracle}"))?;
    }
    Ok(summary.join(", "))
}

// ------------------------------------------------------------ criterion 8

fn a5_twist() -> Verdict {
    let m = lib(catalog::dp5_lattice())?;
    let cert = lib(catalog::dp5_certificate(&m))?;
    let s5 = m.group().clone();
    let el = |c: &str| s5.find_permutation(&Permutation::from_cycles(c, 5).unwrap()).unwrap();
    let a5 = Subgroup::from_generators(&s5, &[el("(1,2,3)"), el("(1,2,3,4,5)")]);
    ensure(a5.order() == 60, "A5 has the wrong order")?;
    let restricted = lib(m.restrict(&a5))?;
    let (_, embedding) = lib(a5.to_group(&s5))?;
    let local = restricted.group().clone();
    let twist = lib(conjugation_automorphism(&s5, &a5, &local, &embedding, el("(1,2)")))?;
    // outer: no element of A5 conjugates the same way
    let inner = local.elements().any(|h| local.elements().all(|x| local.conjugate(x, h) == twist.image(x)));
    ensure(!inner, "the transposition induces an inner automorphism")?;
    let twisted = lib(restricted.twist(&twist))?;
    let invariants = |l: &GLattice| -> Result<Vec<FinAbGroup>, String> {
        Ok(vec![h1(l), lib(h2(l, 0))?, lib(tate(l, -1))?, lib(tate(l, 0))?])
    };
    let (before, after) = (invariants(&restricted)?, invariants(&twisted)?);
    ensure(before == after, format!("invariants change: {before:?} -> {after:?}"))?;
    let restricted_cert = lib(cert.restrict(&a5))?;
    ensure(stably_perm_verify(&restricted_cert), "restricted certificate fails")?;
    ensure(stably_perm_verify(&lib(restricted_cert.twist(&twist))?), "twisted certificate fails")?;

    for c in ["(1,2,3)", "(1,2)(3,4)", "(1,2,3,4,5)"] {
        let x = embedding.iter().position(|&y| y == el(c)).unwrap();
        let inner_twisted = lib(restricted.twist(&GroupHom::inner(&local, x)))?;
        let found = [restricted.rho(x), restricted.rho(local.inv(x))].into_iter().any(|f| {
            GMap::new(restricted.clone(), inner_twisted.clone(), f.clone()).is_ok_and(|map| verify_iso(&map))
        });
        ensure(found, format!("no intertwiner for conjugation by {c}"))?;
    }
    let names = ["h1", "h2", "tate-1", "tate0"];
    let shown: Vec<String> = names.iter().zip(&before).map(|(n, g)| format!("{n} {g}")).collect();
    Ok(format!("{}; certificates verify; inner intertwiners found", shown.join(", ")))
}

// ------------------------------------------------------------ criterion 9

fn round_trip() -> Verdict {
    for (command, file, extra) in common::EMITTERS {
        let (code, report) = common::run_json(&[command], file, extra);
        ensure(code == 0, format!("{command} on {file} exited {code}"))?;
        let (code, _) = common::reverify(&report);
        ensure(code == 0, format!("{command} certificate does not re-verify"))?;
    }
    for (command, file, extra) in common::DETERMINISTIC {
        ensure(
            common::run_raw(command, file, extra) == common::run_raw(command, file, extra),
            format!("{command:?} output differs between runs"),
        )?;
    }
    Ok(format!(
        "{} certificates re-verified, {} commands byte-identical",
        common::EMITTERS.len(),
        common::DETERMINISTIC.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("dP6 splitting", dp6_splitting, Duration::from_secs(1)),
        ("dP5 certificate", dp5_certificate, Duration::from_secs(1)),
        ("projective obstructions", p1_obstructions, Duration::from_secs(1)),
        ("polynomial identities", polynomial_identities, Duration::from_secs(2)),
        ("dP6 S4 Cox lift", dp6_s4_lift, Duration::from_secs(5)),
        ("permutation vanishing sweep", permutation_sweep, Duration::from_secs(60)),
        ("cohomology oracles", cohomology_oracles, Duration::from_secs(30)),
        ("twist invariance", a5_twist, Duration::from_secs(30)),
        ("round trip and determinism", round_trip, Duration::from_secs(10)),
    ];
    let mut failed = BTreeSet::new();
    let mut slow = Vec::new();
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed();
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {n} {tag} {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
        if verdict.is_err() {
            failed.insert(n);
        }
        if elapsed > *budget {
            slow.push(format!("criterion {n} took {:.1}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs()));
        }
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.into();
    println!("failed: {failed:?}; known not to hold as stated: {known:?}");
    for s in &slow {
        // debug builds are slower than the budgets assume
        println!("note: {s}");
    }
    if failed != known {
        eprintln!("unexpected acceptance result");
        std::process::exit(1);
    }
}

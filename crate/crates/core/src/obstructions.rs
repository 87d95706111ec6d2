//! Scalar lifting obstructions of projective actions and signed-monomial
//! lifts of group actions to Cox rings.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{roots_of_unity_order, CycloMatrix};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Permutation};
use crate::linalg::{int, solve_linear, FinAbGroup, IntMatrix};
use crate::poly::{CoxSpec, MultiPoly};

/// A group acting projectively, with one fixed linear lift per element.
#[derive(Clone, Debug)]
pub struct ProjectiveAction {
    group: Arc<FiniteGroup>,
    lifts: Vec<CycloMatrix>,
    modulus: u64,
    // scalar(g, h) as an exponent of a primitive modulus-th root, at g * n + h
    scalars: Vec<u64>,
}

impl ProjectiveAction {
    /// Extends generator lifts along the spanning tree. `modulus` defaults to
    /// `lcm(lcm(m, 2), 2 |G|)`.
    pub fn from_generator_lifts(
        group: Arc<FiniteGroup>,
        generator_lifts: Vec<CycloMatrix>,
        modulus: Option<u64>,
    ) -> Result<Self> {
        if generator_lifts.len() != group.generators().len() {
            return Err(Error::Dimension(format!(
                "{} lifts for {} generators",
                generator_lifts.len(),
                group.generators().len()
            )));
        }
        let first = generator_lifts
            .first()
            .ok_or_else(|| Error::Invalid("group without generators".into()))?;
        let mut lifts = vec![CycloMatrix::identity(first.conductor(), first.size())?; group.order()];
        for (x, parent, s) in group.spanning_tree() {
            lifts[x] = lifts[parent].mul(&generator_lifts[s])?;
        }
        Self::from_element_lifts(group, lifts, modulus)
    }

    pub fn from_element_lifts(
        group: Arc<FiniteGroup>,
        lifts: Vec<CycloMatrix>,
        modulus: Option<u64>,
    ) -> Result<Self> {
        let n = group.order();
        if lifts.len() != n {
            return Err(Error::Dimension(format!("{} lifts for a group of order {n}", lifts.len())));
        }
        let m = lifts[0].conductor();
        let size = lifts[0].size();
        if lifts.iter().any(|l| l.conductor() != m || l.size() != size) {
            return Err(Error::Dimension("lifts of different size or conductor".into()));
        }
        for (g, l) in lifts.iter().enumerate() {
            if l.determinant()?.is_zero() {
                return Err(Error::Invalid(format!("lift of element {g} is singular")));
            }
        }
        let roots = roots_of_unity_order(m);
        let modulus = modulus.unwrap_or_else(|| roots.lcm(&(2 * n as u64)));
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        let mut scalars = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let lhs = lifts[g].mul(&lifts[h])?;
                let c = lhs.scalar_ratio(&lifts[group.mul(g, h)])?.ok_or_else(|| {
                    Error::Invalid(format!("lift({g}) lift({h}) is not a scalar multiple of lift(gh)"))
                })?;
                let k = c.root_of_unity_log().ok_or_else(|| {
                    Error::Invalid(format!("scalar {c} at ({g}, {h}) is not a root of unity"))
                })?;
                // c has order roots / gcd(k, roots); re-express in mu_modulus
                let order = roots / k.gcd(&roots);
                if modulus % order != 0 {
                    return Err(Error::Invalid(format!(
                        "scalar at ({g}, {h}) has order {order}, not dividing {modulus}"
                    )));
                }
                scalars.push((k / (roots / order)) * (modulus / order) % modulus);
            }
        }
        Ok(ProjectiveAction {
            group,
            lifts,
            modulus,
            scalars,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lifts(&self) -> &[CycloMatrix] {
        &self.lifts
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `scalar(g, h)` as an element of `Z/modulus`.
    pub fn scalar(&self, g: usize, h: usize) -> u64 {
        self.scalars[g * self.group.order() + h]
    }
}

/// Class of a projective action in `H^2(G, Z/m')`, decided up to the kernel
/// coming from characters of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// `m'`: the cocycle takes values in `Z/m'`.
    pub modulus: u64,
    /// `c(g, h)` at index `g * |G| + h`.
    pub cocycle: Vec<u64>,
    pub trivial: bool,
    pub class_order: u64,
    /// Modulus `m' |G|` at which triviality is decided.
    pub decision_modulus: u64,
    /// `b` with `|G| c = db` in `Z/(m' |G|)`, when trivial.
    pub trivializing_cochain: Option<Vec<u64>>,
}

impl ObstructionReport {
    pub fn group_order(&self) -> usize {
        (self.cocycle.len() as f64).sqrt().round() as usize
    }
}

/// Computes the scalar cocycle and decides whether it is a coboundary.
///
/// A class in `H^2(G, Z/m')` vanishes in `H^2(G, k^*)` exactly when `|G| c`
/// is a coboundary in `Z/(m' |G|)`, so the decision is made there.
pub fn lifting_obstruction(p: &ProjectiveAction) -> Result<ObstructionReport> {
    let group = &p.group;
    let n = group.order();
    let m = p.modulus;
    let cocycle: Vec<u64> = p.scalars.clone();
    let c = |g: usize, h: usize| cocycle[g * n + h];
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                let lhs = (c(g, h) + c(group.mul(g, h), k)) % m;
                let rhs = (c(h, k) + c(g, group.mul(h, k))) % m;
                if lhs != rhs {
                    return Err(Error::Invalid(format!("cocycle identity fails at ({g}, {h}, {k})")));
                }
            }
        }
    }
    let decision = m * n as u64;
    let big = BigInt::from(decision);
    let mut d = IntMatrix::zeros(n * n, n);
    for g in 0..n {
        for h in 0..n {
            let row = g * n + h;
            let gh = group.mul(g, h);
            let add = |d: &mut IntMatrix, col: usize, v: i64| {
                let cur = d.get(row, col).clone();
                d.set(row, col, cur + v);
            };
            add(&mut d, g, 1);
            add(&mut d, h, 1);
            add(&mut d, gh, -1);
        }
    }
    let rhs = |k: u64| -> Vec<BigInt> { cocycle.iter().map(|&x| BigInt::from(k * x * n as u64 % decision)).collect() };
    let cochain = solve_linear(&d, &rhs(1), &big)?;
    let mut class_order = 1;
    if cochain.is_none() {
        class_order = (2..=n as u64)
            .find(|&k| matches!(solve_linear(&d, &rhs(k), &big), Ok(Some(_))))
            .ok_or_else(|| Error::Invalid("class order exceeds the group order".into()))?;
    }
    let trivializing_cochain = cochain.map(|b| {
        b.iter()
            .map(|x| x.mod_floor(&big).to_u64().expect("reduced residue"))
            .collect::<Vec<u64>>()
    });
    if let Some(b) = &trivializing_cochain {
        for g in 0..n {
            for h in 0..n {
                let db = (b[g] + b[h] + decision - b[group.mul(g, h)]) % decision;
                if db != c(g, h) * n as u64 % decision {
                    return Err(Error::Invalid("trivializing cochain failed verification".into()));
                }
            }
        }
    }
    Ok(ObstructionReport {
        modulus: m,
        cocycle,
        trivial: trivializing_cochain.is_some(),
        class_order,
        decision_modulus: decision,
        trivializing_cochain,
    })
}

/// Cyclic group generated by the classes of the given reports.
pub fn amitsur_span(reports: &[ObstructionReport]) -> Result<FinAbGroup> {
    if let Some(first) = reports.first() {
        if let Some(r) = reports.iter().find(|r| r.modulus != first.modulus) {
            return Err(Error::Invalid(format!(
                "modulus mismatch: {} and {}",
                first.modulus, r.modulus
            )));
        }
    }
    let order = reports.iter().fold(1u64, |acc, r| acc.lcm(&r.class_order));
    Ok(FinAbGroup::cyclic(order))
}

/// `v -> w` with `w[perm(j)] = signs[j] * v[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub perm: Permutation,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn new(perm: Permutation, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != perm.degree() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::Invalid("sign vector must have one entry of +-1 per variable".into()));
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: Permutation::identity(n),
            signs: vec![1; n],
        }
    }

    pub fn degree(&self) -> usize {
        self.signs.len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm {
            perm: self.perm.compose(&other.perm),
            signs: (0..other.degree())
                .map(|j| self.signs[other.perm.apply(j)] * other.signs[j])
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.signs.iter().all(|&s| s == 1)
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut w = vec![BigRational::zero(); v.len()];
        for (j, x) in v.iter().enumerate() {
            w[self.perm.apply(j)] = if self.signs[j] == 1 { x.clone() } else { -x };
        }
        w
    }

    /// `p ∘ self`: variable `k` becomes `signs[j] * var_j` with `perm(j) = k`.
    pub fn pullback(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let vars = p.vars().to_vec();
        if vars.len() != self.degree() {
            return Err(Error::Dimension("polynomial arity differs from the permutation degree".into()));
        }
        let inv = self.perm.inverse();
        let images = (0..vars.len())
            .map(|k| {
                let j = inv.apply(k);
                let v = MultiPoly::var(&vars, &vars[j])?;
                Ok(if self.signs[j] == 1 { v } else { v.neg() })
            })
            .collect::<Result<Vec<_>>>()?;
        p.compose(&images)
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: String = self.signs.iter().map(|&s| if s == 1 { '+' } else { '-' }).collect();
        write!(f, "{} [{}]", self.perm.cycle_string(), signs)
    }
}

/// Action on torus coordinates: `x_i ∘ L = signs[i] * prod_l x_l^exponents[i][l]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    pub exponents: Vec<Vec<i64>>,
    pub signs: Vec<i8>,
}

/// The torus action induced by a signed permutation, if the coordinates are
/// carried to Laurent monomials in the coordinates.
pub fn induced_torus_action(cox: &CoxSpec, lift: &SignedPerm) -> Result<Option<TorusAction>> {
    let coords = &cox.torus_coordinates;
    let nvars = cox.variables.len();
    let t = coords.len();
    let basis = IntMatrix::from_columns(
        nvars,
        &coords.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>(),
    );
    let mut exponents = Vec::with_capacity(t);
    let mut signs = Vec::with_capacity(t);
    for c in coords {
        let (e, sign) = pulled_coordinate(c, lift);
        let rhs: Vec<BigInt> = e.iter().map(|&x| int(x)).collect();
        let Some(a) = solve_linear(&basis, &rhs, &BigInt::zero())? else {
            return Ok(None);
        };
        exponents.push(a.iter().map(|x| x.to_i64().expect("small exponent")).collect());
        signs.push(sign);
    }
    Ok(Some(TorusAction { exponents, signs }))
}

// exponent vector and sign of x ∘ L for a Laurent monomial x
fn pulled_coordinate(c: &[i64], lift: &SignedPerm) -> (Vec<i64>, i8) {
    let mut e = vec![0; c.len()];
    let mut sign = 1i8;
    for j in 0..c.len() {
        let exp = c[lift.perm.apply(j)];
        e[j] = exp;
        if exp.rem_euclid(2) == 1 {
            sign *= lift.signs[j];
        }
    }
    (e, sign)
}

/// Whether `lift` induces `required` on the torus coordinates.
pub fn induces_torus_action(cox: &CoxSpec, lift: &SignedPerm, required: &TorusAction) -> bool {
    let coords = &cox.torus_coordinates;
    if required.exponents.len() != coords.len() || required.signs.len() != coords.len() {
        return false;
    }
    coords.iter().enumerate().all(|(i, c)| {
        let (e, sign) = pulled_coordinate(c, lift);
        let target: Vec<i64> = (0..c.len())
            .map(|v| (0..coords.len()).map(|l| required.exponents[i][l] * coords[l][v]).sum())
            .collect();
        e == target && sign == required.signs[i]
    })
}

/// For each relation, the index and sign of the relation it is carried to.
pub fn relation_images(cox: &CoxSpec, lift: &SignedPerm) -> Result<Option<Vec<(usize, i8)>>> {
    let mut out = Vec::with_capacity(cox.relations.len());
    for r in &cox.relations {
        let image = lift.pullback(r)?;
        let found = cox.relations.iter().enumerate().find_map(|(k, s)| {
            if *s == image {
                Some((k, 1))
            } else if s.neg() == image {
                Some((k, -1))
            } else {
                None
            }
        });
        match found {
            Some(f) => out.push(f),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Constraints on the lift of one group generator.
#[derive(Clone, Debug)]
pub struct GeneratorLiftSpec {
    pub permutation: Permutation,
    /// Fixed signs, or `None` to search all sign vectors.
    pub signs: Option<Vec<i8>>,
    pub torus_action: Option<TorusAction>,
    /// Variables allowed to change sign; `None` allows all.
    pub sign_support: Option<Vec<bool>>,
}

/// A lift of a group action to affine space by signed permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxLift {
    pub generator_lifts: Vec<SignedPerm>,
    /// One transformation per group element.
    pub element_lifts: Vec<SignedPerm>,
}

impl CoxLift {
    /// Composes generator lifts along a word in generator positions.
    pub fn along_word(&self, word: &[usize]) -> SignedPerm {
        let n = self.generator_lifts.first().map_or(0, SignedPerm::degree);
        word.iter()
            .fold(SignedPerm::identity(n), |acc, &s| acc.compose(&self.generator_lifts[s]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoxLiftOutcome {
    Found(CoxLift),
    /// No lift in the signed-permutation class; `examined` complete
    /// assignments were rejected.
    NoneInClass { examined: u64 },
}

/// Extends generator lifts along the spanning tree and checks every Cayley
/// edge; returns the element lifts when the assignment is a homomorphism.
pub fn extend_lift(group: &FiniteGroup, generator_lifts: &[SignedPerm]) -> Option<Vec<SignedPerm>> {
    let n = generator_lifts.first()?.degree();
    let mut lifts = vec![SignedPerm::identity(n); group.order()];
    for (x, parent, s) in group.spanning_tree() {
        lifts[x] = lifts[parent].compose(&generator_lifts[s]);
    }
    for x in group.elements() {
        for (s, &g) in group.generators().iter().enumerate() {
            if lifts[x].compose(&generator_lifts[s]) != lifts[group.mul(x, g)] {
                return None;
            }
        }
    }
    Some(lifts)
}

fn generator_candidates(cox: &CoxSpec, spec: &GeneratorLiftSpec) -> Result<Vec<SignedPerm>> {
    let n = cox.variables.len();
    if spec.permutation.degree() != n {
        return Err(Error::Dimension(format!(
            "permutation on {} points for {n} variables",
            spec.permutation.degree()
        )));
    }
    if n > 24 {
        return Err(Error::Invalid("sign search limited to 24 variables".into()));
    }
    let sign_vectors: Vec<Vec<i8>> = match &spec.signs {
        Some(s) => vec![s.clone()],
        // lexicographic with + before -, first variable most significant
        None => (0u32..1 << n)
            .map(|bits| (0..n).map(|j| if bits >> (n - 1 - j) & 1 == 1 { -1 } else { 1 }).collect())
            .collect(),
    };
    if spec.sign_support.as_ref().is_some_and(|m| m.len() != n) {
        return Err(Error::Dimension("sign support of wrong length".into()));
    }
    let mut out = Vec::new();
    for signs in sign_vectors {
        if let Some(mask) = &spec.sign_support {
            if signs.iter().zip(mask).any(|(&s, &free)| s == -1 && !free) {
                continue;
            }
        }
        let lift = SignedPerm::new(spec.permutation.clone(), signs)?;
        if let Some(req) = &spec.torus_action {
            if !induces_torus_action(cox, &lift, req) {
                continue;
            }
        }
        if relation_images(cox, &lift)?.is_none() {
            continue;
        }
        out.push(lift);
    }
    Ok(out)
}

/// Searches signed-permutation lifts, generator by generator in the given
/// order and sign vectors lexicographically; returns the first lift that is a
/// homomorphism, preserves the relations up to sign and induces the required
/// torus actions.
pub fn search_cox_lift(
    cox: &CoxSpec,
    group: &FiniteGroup,
    generators: &[GeneratorLiftSpec],
) -> Result<CoxLiftOutcome> {
    if generators.len() != group.generators().len() {
        return Err(Error::Dimension(format!(
            "{} lift specifications for {} generators",
            generators.len(),
            group.generators().len()
        )));
    }
    let candidates = generators
        .iter()
        .map(|g| generator_candidates(cox, g))
        .collect::<Result<Vec<_>>>()?;
    let mut examined = 0u64;
    let mut choice = vec![0usize; candidates.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(CoxLiftOutcome::NoneInClass { examined });
    }
    loop {
        examined += 1;
        let gens: Vec<SignedPerm> = choice.iter().zip(&candidates).map(|(&i, c)| c[i].clone()).collect();
        if let Some(element_lifts) = extend_lift(group, &gens) {
            return Ok(CoxLiftOutcome::Found(CoxLift {
                generator_lifts: gens,
                element_lifts,
            }));
        }
        // odometer, last generator fastest
        let mut pos = candidates.len();
        loop {
            if pos == 0 {
                return Ok(CoxLiftOutcome::NoneInClass { examined });
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Re-verifies a lift against the group and the per-generator constraints.
pub fn verify_cox_lift(
    cox: &CoxSpec,
    group: &FiniteGroup,
    generators: &[GeneratorLiftSpec],
    lift: &CoxLift,
) -> Result<bool> {
    if lift.generator_lifts.len() != generators.len() || generators.len() != group.generators().len() {
        return Ok(false);
    }
    for (l, spec) in lift.generator_lifts.iter().zip(generators) {
        if l.perm != spec.permutation || spec.signs.as_ref().is_some_and(|s| *s != l.signs) {
            return Ok(false);
        }
        if let Some(mask) = &spec.sign_support {
            if l.signs.iter().zip(mask).any(|(&s, &free)| s == -1 && !free) {
                return Ok(false);
            }
        }
        if spec.torus_action.as_ref().is_some_and(|req| !induces_torus_action(cox, l, req)) {
            return Ok(false);
        }
        if relation_images(cox, l)?.is_none() {
            return Ok(false);
        }
    }
    Ok(extend_lift(group, &lift.generator_lifts).is_some_and(|e| e == lift.element_lifts))
}

/// Whether the signed permutation normalizes the grading torus: the weights
/// are carried along by an integer linear map.
pub fn normalizes_torus(cox: &CoxSpec, lift: &SignedPerm) -> Result<bool> {
    let n = cox.variables.len();
    let r = cox.torus_rank();
    // Phi with Phi(w_j) = w_{perm(j)} for all j, solved row by row
    let w = IntMatrix::from_columns(
        r,
        &cox.weights.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>(),
    );
    let wt = w.transpose();
    for row in 0..r {
        let rhs: Vec<BigInt> = (0..n).map(|j| int(cox.weights[lift.perm.apply(j)][row])).collect();
        if solve_linear(&wt, &rhs, &BigInt::zero())?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclo;
    use crate::groups::{named_group, GroupSpec};
    use crate::poly::MonomialMap;

    fn klein() -> Arc<FiniteGroup> {
        Arc::new(named_group(&GroupSpec::parse("C2xC2").unwrap()).unwrap())
    }

    #[test]
    fn klein_projective_action_is_obstructed() {
        let a = CycloMatrix::from_ints(12, &[vec![0, 1], vec![1, 0]]).unwrap();
        let b = CycloMatrix::from_ints(12, &[vec![-1, 0], vec![0, 1]]).unwrap();
        let p = ProjectiveAction::from_generator_lifts(klein(), vec![a, b], None).unwrap();
        assert_eq!(p.modulus(), 24);
        let r = lifting_obstruction(&p).unwrap();
        assert!(!r.trivial);
        assert_eq!(r.class_order, 2);
        assert_eq!(amitsur_span(&[r]).unwrap(), FinAbGroup::cyclic(2));
    }

    #[test]
    fn rescaled_lifts_keep_the_class() {
        let g = klein();
        let a = CycloMatrix::from_ints(12, &[vec![0, 1], vec![1, 0]]).unwrap();
        let b = CycloMatrix::from_ints(12, &[vec![-1, 0], vec![0, 1]]).unwrap();
        let p = ProjectiveAction::from_generator_lifts(g.clone(), vec![a, b], None).unwrap();
        let scaled: Vec<CycloMatrix> = p
            .lifts()
            .iter()
            .enumerate()
            .map(|(i, l)| l.scale(&Cyclo::zeta_pow(12, 5 * i as i64 + 1).unwrap()).unwrap())
            .collect();
        let q = ProjectiveAction::from_element_lifts(g, scaled, None).unwrap();
        let (r1, r2) = (lifting_obstruction(&p).unwrap(), lifting_obstruction(&q).unwrap());
        assert_ne!(r1.cocycle, r2.cocycle);
        assert_eq!((r1.trivial, r1.class_order), (r2.trivial, r2.class_order));
    }

    #[test]
    fn span_orders() {
        let mk = |order| ObstructionReport {
            modulus: 12,
            cocycle: vec![0],
            trivial: order == 1,
            class_order: order,
            decision_modulus: 12,
            trivializing_cochain: None,
        };
        assert_eq!(amitsur_span(&[mk(2), mk(3)]).unwrap(), FinAbGroup::cyclic(6));
        assert!(amitsur_span(&[mk(1)]).unwrap().is_trivial());
        let mut other = mk(2);
        other.modulus = 24;
        assert!(amitsur_span(&[mk(2), other]).is_err());
    }

    #[test]
    fn signed_perm_composition() {
        let a = SignedPerm::new(Permutation::new(vec![1, 0, 2]).unwrap(), vec![1, -1, 1]).unwrap();
        let b = SignedPerm::new(Permutation::new(vec![0, 2, 1]).unwrap(), vec![-1, 1, 1]).unwrap();
        let v: Vec<BigRational> = [2, 3, 5].iter().map(|&x| BigRational::from_integer(int(x))).collect();
        assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
        assert!(!a.compose(&a).is_identity());
        let vars = ["x", "y", "z"];
        let p = MultiPoly::parse("x*y^2 + z", &vars).unwrap();
        let at_image = p.evaluate(&a.apply(&v)).unwrap();
        assert_eq!(a.pullback(&p).unwrap().evaluate(&v).unwrap(), at_image);
    }

    #[test]
    fn projective_line_has_no_signed_lift() {
        let vars = ["x", "y"];
        let cox = CoxSpec::new(
            vars.iter().map(|s| s.to_string()).collect(),
            vec![vec![1], vec![1]],
            vec![],
            MonomialMap::identity(&vars),
            vec![vec![1, -1]],
        )
        .unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let specs = vec![
            GeneratorLiftSpec {
                permutation: swap,
                signs: None,
                torus_action: Some(TorusAction {
                    exponents: vec![vec![-1]],
                    signs: vec![1],
                }),
                sign_support: None,
            },
            GeneratorLiftSpec {
                permutation: Permutation::identity(2),
                signs: None,
                torus_action: Some(TorusAction {
                    exponents: vec![vec![1]],
                    signs: vec![-1],
                }),
                sign_support: None,
            },
        ];
        let out = search_cox_lift(&cox, &klein(), &specs).unwrap();
        assert_eq!(out, CoxLiftOutcome::NoneInClass { examined: 4 });
    }
}

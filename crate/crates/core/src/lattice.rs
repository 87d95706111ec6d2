//! G-lattices: free abelian groups of finite rank with an action of a finite
//! group by unimodular matrices, and the maps, splittings and permutation
//! certificates built on them.
//!
//! The action is stored for every group element (matrices act on column
//! vectors), so `rho(g) * rho(h) == rho(g * h)`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cohomology;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupHom, Permutation, Subgroup};
use crate::linalg::{self, FinAbGroup, IntMatrix};

/// A lattice of rank `rank` with a validated action of `group`.
#[derive(Clone, Debug)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl PartialEq for GLattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && *self.group == *other.group && self.action == other.action
    }
}

impl GLattice {
    /// Builds a lattice from one matrix per group generator.
    pub fn new(group: Arc<FiniteGroup>, generator_matrices: Vec<IntMatrix>) -> Result<Self> {
        make_lattice(group, generator_matrices)
    }

    /// Builds a lattice from a matrix for every element, validating it.
    pub fn from_elements(group: Arc<FiniteGroup>, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Dimension(format!(
                "{} matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let gens: Vec<IntMatrix> = group.generators().iter().map(|&g| action[g].clone()).collect();
        let lattice = make_lattice_with_rank(group, rank, gens)?;
        if lattice.action != action {
            return Err(Error::NotAnAction("element matrices disagree with the generated action".into()));
        }
        Ok(lattice)
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let action = vec![IntMatrix::identity(rank); group.order()];
        GLattice { group, rank, action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rho(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn generator_matrices(&self) -> Vec<IntMatrix> {
        self.group.generators().iter().map(|&g| self.action[g].clone()).collect()
    }

    pub fn traces(&self) -> Vec<BigInt> {
        self.action.iter().map(IntMatrix::trace).collect()
    }

    /// Sum of all `rho(g)`.
    pub fn norm_matrix(&self) -> IntMatrix {
        self.action
            .iter()
            .fold(IntMatrix::zeros(self.rank, self.rank), |acc, m| acc.add(m))
    }

    pub fn dual(&self) -> GLattice {
        derive_lattice(self, &DeriveOp::Dual).expect("dual never fails")
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        derive_lattice(self, &DeriveOp::DirectSum(other.clone()))
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<GLattice> {
        derive_lattice(self, &DeriveOp::Restrict(sub.clone()))
    }

    pub fn twist(&self, automorphism: &GroupHom) -> Result<GLattice> {
        derive_lattice(self, &DeriveOp::Twist(automorphism.clone()))
    }
}

fn make_lattice_with_rank(
    group: Arc<FiniteGroup>,
    rank: usize,
    generator_matrices: Vec<IntMatrix>,
) -> Result<GLattice> {
    if generator_matrices.len() != group.generators().len() {
        return Err(Error::Dimension(format!(
            "{} matrices for {} generators",
            generator_matrices.len(),
            group.generators().len()
        )));
    }
    for m in &generator_matrices {
        if m.rows() != rank || m.cols() != rank {
            return Err(Error::Dimension(format!(
                "generator matrix is {}x{}, expected {rank}x{rank}",
                m.rows(),
                m.cols()
            )));
        }
        let det = m.determinant();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
    }
    let mut action = vec![IntMatrix::zeros(0, 0); group.order()];
    action[group.identity()] = IntMatrix::identity(rank);
    for (x, parent, s) in group.spanning_tree() {
        action[x] = action[parent].mul(&generator_matrices[s]);
    }
    for x in group.elements() {
        for (s, &g) in group.generators().iter().enumerate() {
            if action[x].mul(&generator_matrices[s]) != action[group.mul(x, g)] {
                return Err(Error::RelationViolated(x, g));
            }
        }
    }
    Ok(GLattice { group, rank, action })
}

/// Builds a G-lattice from generator matrices, checking unimodularity and
/// every relation of the group (all Cayley-graph edges).
pub fn make_lattice(group: Arc<FiniteGroup>, generator_matrices: Vec<IntMatrix>) -> Result<GLattice> {
    let rank = generator_matrices.first().map_or(0, IntMatrix::rows);
    if generator_matrices.is_empty() {
        // the trivial group: rank is ambiguous without matrices
        return Ok(GLattice::trivial(group, 0));
    }
    make_lattice_with_rank(group, rank, generator_matrices)
}

/// A basis of a lattice permuted by the group.
#[derive(Clone, Debug, PartialEq)]
pub struct PermCertificate {
    /// Basis vectors as the columns of a unimodular matrix.
    pub basis: IntMatrix,
    /// The permutation of the basis induced by each group generator.
    pub generator_perms: Vec<Permutation>,
}

impl PermCertificate {
    pub fn standard(lattice: &GLattice) -> Option<Self> {
        let basis = IntMatrix::identity(lattice.rank());
        let perms = lattice
            .generator_matrices()
            .iter()
            .map(|m| induced_permutation(m, &basis))
            .collect::<Option<Vec<_>>>()?;
        Some(PermCertificate {
            basis,
            generator_perms: perms,
        })
    }

    /// Checks that the basis is unimodular and that each generator maps basis
    /// vector `i` to basis vector `perm(i)`.
    pub fn validate(&self, lattice: &GLattice) -> bool {
        if self.basis.rows() != lattice.rank()
            || self.basis.cols() != lattice.rank()
            || !self.basis.is_unimodular()
            || self.generator_perms.len() != lattice.group().generators().len()
        {
            return false;
        }
        let mats = lattice.generator_matrices();
        self.generator_perms.iter().zip(&mats).all(|(p, m)| {
            p.degree() == lattice.rank() && {
                let image = m.mul(&self.basis);
                (0..lattice.rank()).all(|i| image.column(i) == self.basis.column(p.apply(i)))
            }
        })
    }
}

/// The permutation of the columns of `basis` induced by `m`, if `m` permutes
/// them.
pub fn induced_permutation(m: &IntMatrix, basis: &IntMatrix) -> Option<Permutation> {
    let cols = basis.columns();
    let index: HashMap<&Vec<BigInt>, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let image = m.mul(basis);
    let perm: Option<Vec<usize>> = (0..basis.cols()).map(|i| index.get(&image.column(i)).copied()).collect();
    Permutation::new(perm?).ok()
}

/// Permutation lattice for an action of the group's generators on
/// `points` points (images per generator).
pub fn permutation_lattice(
    group: Arc<FiniteGroup>,
    points: usize,
    generator_actions: &[Permutation],
) -> Result<(GLattice, PermCertificate)> {
    if generator_actions.len() != group.generators().len() {
        return Err(Error::Dimension(format!(
            "{} permutations for {} generators",
            generator_actions.len(),
            group.generators().len()
        )));
    }
    if let Some(p) = generator_actions.iter().find(|p| p.degree() != points) {
        return Err(Error::NotAnAction(format!("{p} does not act on {points} points")));
    }
    let mats: Vec<IntMatrix> = generator_actions.iter().map(permutation_matrix).collect();
    let lattice = make_lattice_with_rank(group, points, mats)
        .map_err(|e| Error::NotAnAction(e.to_string()))?;
    let cert = PermCertificate {
        basis: IntMatrix::identity(points),
        generator_perms: generator_actions.to_vec(),
    };
    Ok((lattice, cert))
}

/// Matrix sending `e_i` to `e_{p(i)}`.
pub fn permutation_matrix(p: &Permutation) -> IntMatrix {
    let n = p.degree();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set(p.apply(i), i, BigInt::one());
    }
    m
}

/// `Z[G/H]` with basis the left cosets of `sub`, ordered by least element.
pub fn coset_lattice(group: &Arc<FiniteGroup>, sub: &Subgroup) -> (GLattice, PermCertificate) {
    let cosets = sub.left_cosets(group);
    let mut which = vec![0usize; group.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            which[x] = i;
        }
    }
    let perms: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|&g| {
            Permutation::new(cosets.iter().map(|c| which[group.mul(g, c[0])]).collect())
                .expect("coset action is a permutation")
        })
        .collect();
    permutation_lattice(group.clone(), cosets.len(), &perms).expect("coset action is valid")
}

/// The regular lattice `Z[G]`.
pub fn regular_lattice(group: &Arc<FiniteGroup>) -> (GLattice, PermCertificate) {
    let trivial = Subgroup::from_generators(group, &[]);
    coset_lattice(group, &trivial)
}

/// Derived-lattice operations.
#[derive(Clone, Debug)]
pub enum DeriveOp {
    Dual,
    DirectSum(GLattice),
    Restrict(Subgroup),
    Twist(GroupHom),
}

pub fn derive_lattice(m: &GLattice, op: &DeriveOp) -> Result<GLattice> {
    match op {
        DeriveOp::Dual => {
            // rho*(g) = rho(g^{-1})^T
            let action = m
                .group
                .elements()
                .map(|g| m.action[m.group.inv(g)].transpose())
                .collect();
            Ok(GLattice {
                group: m.group.clone(),
                rank: m.rank,
                action,
            })
        }
        DeriveOp::DirectSum(other) => {
            if *other.group != *m.group {
                return Err(Error::GroupMismatch("direct sum over different groups".into()));
            }
            let action = m
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| a.block_diag(b))
                .collect();
            Ok(GLattice {
                group: m.group.clone(),
                rank: m.rank + other.rank,
                action,
            })
        }
        DeriveOp::Restrict(sub) => {
            if sub.elements().iter().any(|&x| x >= m.group.order()) {
                return Err(Error::GroupMismatch("subgroup is not in the lattice's group".into()));
            }
            let (h, embedding) = sub.to_group(&m.group)?;
            let action = embedding.iter().map(|&x| m.action[x].clone()).collect();
            Ok(GLattice {
                group: Arc::new(h),
                rank: m.rank,
                action,
            })
        }
        DeriveOp::Twist(a) => {
            if **a.source() != *m.group || **a.target() != *m.group {
                return Err(Error::GroupMismatch("automorphism of another group".into()));
            }
            let action = m.group.elements().map(|g| m.action[a.image(g)].clone()).collect();
            Ok(GLattice {
                group: m.group.clone(),
                rank: m.rank,
                action,
            })
        }
    }
}

/// Saturated basis of the invariant sublattice `M^G`, as columns.
pub fn invariants_sublattice(m: &GLattice) -> IntMatrix {
    let id = IntMatrix::identity(m.rank);
    let mut stacked = IntMatrix::zeros(0, m.rank);
    for g in m.generator_matrices() {
        stacked = stacked.vstack(&g.sub(&id));
    }
    linalg::kernel_basis(&stacked)
}

/// An equivariant map between lattices over the same group.
#[derive(Clone, Debug)]
pub struct GMap {
    pub source: GLattice,
    pub target: GLattice,
    pub matrix: IntMatrix,
}

impl GMap {
    /// Validates equivariance on the generators.
    pub fn new(source: GLattice, target: GLattice, matrix: IntMatrix) -> Result<Self> {
        if *source.group != *target.group {
            return Err(Error::GroupMismatch("map between lattices over different groups".into()));
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(Error::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank,
                source.rank
            )));
        }
        if let Some(g) = equivariance_failure(&source, &target, &matrix) {
            return Err(Error::NotEquivariant(format!("fails for generator {}", source.group.label(g))));
        }
        Ok(GMap { source, target, matrix })
    }

    pub fn is_equivariant(&self) -> bool {
        equivariance_failure(&self.source, &self.target, &self.matrix).is_none()
    }

    pub fn compose(&self, first: &GMap) -> GMap {
        GMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        }
    }
}

fn equivariance_failure(source: &GLattice, target: &GLattice, matrix: &IntMatrix) -> Option<usize> {
    source
        .group
        .generators()
        .iter()
        .copied()
        .find(|&g| matrix.mul(&source.action[g]) != target.action[g].mul(matrix))
}

/// Integer basis of `Hom_G(m, n)`, as matrices `n.rank x m.rank`.
pub fn equivariant_homs(m: &GLattice, n: &GLattice) -> Result<Vec<IntMatrix>> {
    if *m.group != *n.group {
        return Err(Error::GroupMismatch("homs between lattices over different groups".into()));
    }
    let (r, s) = (m.rank, n.rank);
    if r == 0 || s == 0 {
        return Ok(Vec::new());
    }
    // unknown X (s x r) in row-major order: x[i*r + j]
    let gens = m.group.generators();
    let mut system = IntMatrix::zeros(gens.len() * s * r, s * r);
    for (t, &g) in gens.iter().enumerate() {
        let a = &m.action[g];
        let b = &n.action[g];
        // (X a - b X)_{ij} = sum_k X_ik a_kj - sum_k b_ik X_kj
        for i in 0..s {
            for j in 0..r {
                let row = t * s * r + i * r + j;
                for k in 0..r {
                    let v = system.get(row, i * r + k) + a.get(k, j);
                    system.set(row, i * r + k, v);
                }
                for k in 0..s {
                    let v = system.get(row, k * r + j) - b.get(i, k);
                    system.set(row, k * r + j, v);
                }
            }
        }
    }
    let kernel = linalg::kernel_basis(&system);
    Ok(kernel
        .columns()
        .into_iter()
        .map(|c| IntMatrix::new(s, r, c).expect("sizes agree"))
        .collect())
}

/// True iff `f` is equivariant with determinant `±1`.
pub fn verify_iso(f: &GMap) -> bool {
    f.matrix.is_square() && f.matrix.is_unimodular() && f.is_equivariant()
}

/// Looks for an equivariant section `s` of a surjection `pi` (`pi * s = 1`).
///
/// The decision is exact: `pi * (sum c_i h_i) = 1` is solved over the
/// integers in the coordinates of a basis `h_i` of `Hom_G(target, source)`.
pub fn find_equivariant_section(pi: &GMap) -> Result<Option<GMap>> {
    if !pi.is_equivariant() {
        return Err(Error::NotEquivariant("projection".into()));
    }
    if !linalg::cokernel_structure(&pi.matrix).is_trivial() {
        return Err(Error::NotSurjective);
    }
    let c = pi.target.rank;
    let homs = equivariant_homs(&pi.target, &pi.source)?;
    if c == 0 {
        return Ok(Some(GMap {
            source: pi.target.clone(),
            target: pi.source.clone(),
            matrix: IntMatrix::zeros(pi.source.rank, 0),
        }));
    }
    let columns: Vec<Vec<BigInt>> = homs.iter().map(|h| pi.matrix.mul(h).entries().to_vec()).collect();
    let system = IntMatrix::from_columns(c * c, &columns);
    let rhs = IntMatrix::identity(c).entries().to_vec();
    let Some(coeffs) = linalg::solve_linear(&system, &rhs, &BigInt::zero())? else {
        return Ok(None);
    };
    let mut s = IntMatrix::zeros(pi.source.rank, c);
    for (h, k) in homs.iter().zip(&coeffs) {
        s = s.add(&h.scale(k));
    }
    debug_assert!(pi.matrix.mul(&s).is_identity());
    Ok(Some(GMap::new(pi.target.clone(), pi.source.clone(), s)?))
}

/// The kernel of an equivariant map as a G-lattice, with its basis in the
/// source coordinates.
pub fn kernel_lattice(pi: &GMap) -> Result<(GLattice, IntMatrix)> {
    let basis = linalg::kernel_basis(&pi.matrix);
    let action = pi
        .source
        .action
        .iter()
        .map(|a| linalg::coordinates_in(&basis, &a.mul(&basis)))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        GLattice {
            group: pi.source.group.clone(),
            rank: basis.cols(),
            action,
        },
        basis,
    ))
}

/// The image of an equivariant map as a G-lattice, with its basis in the
/// target coordinates.
pub fn image_lattice(f: &GMap) -> Result<(GLattice, IntMatrix)> {
    let basis = linalg::image_basis(&f.matrix);
    let action = f
        .target
        .action
        .iter()
        .map(|a| linalg::coordinates_in(&basis, &a.mul(&basis)))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        GLattice {
            group: f.target.group.clone(),
            rank: basis.cols(),
            action,
        },
        basis,
    ))
}

/// Given a section `s` of `pi`, the isomorphism `ker(pi) + target -> source`,
/// `(k, c) -> k + s(c)`.
pub fn splitting_iso(pi: &GMap, section: &GMap) -> Result<GMap> {
    let (kernel, basis) = kernel_lattice(pi)?;
    let sum = kernel.direct_sum(&pi.target)?;
    GMap::new(sum, pi.source.clone(), basis.hstack(&section.matrix))
}

/// True iff `rho(g)^T * gram * rho(g) == gram` for every group element.
pub fn preserves_form(m: &GLattice, gram: &IntMatrix) -> Result<bool> {
    Ok(form_violation(m, gram)?.is_none())
}

/// The first element (in index order) not preserving `gram`.
pub fn form_violation(m: &GLattice, gram: &IntMatrix) -> Result<Option<usize>> {
    if gram.rows() != m.rank || gram.cols() != m.rank {
        return Err(Error::Dimension(format!(
            "gram matrix is {}x{}, lattice rank {}",
            gram.rows(),
            gram.cols(),
            m.rank
        )));
    }
    if *gram != gram.transpose() {
        return Err(Error::Invalid("gram matrix is not symmetric".into()));
    }
    Ok(m
        .group
        .elements()
        .find(|&g| m.action[g].transpose().mul(gram).mul(&m.action[g]) != *gram))
}

/// Evidence that a lattice is not a permutation lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum PermWitness {
    /// A permutation lattice has nonnegative traces (fixed-point counts).
    NegativeTrace { element: usize, trace: BigInt },
    /// Nonvanishing `H^1(H, M)` for the subgroup with these elements.
    H1 { subgroup: Vec<usize>, group: FinAbGroup },
    /// Nonvanishing Tate `H^-1(H, M)`.
    TateMinus1 { subgroup: Vec<usize>, group: FinAbGroup },
}

#[derive(Clone, Debug, PartialEq)]
pub enum PermVerdict {
    Yes(PermCertificate),
    No(PermWitness),
    Inconclusive,
}

/// Obstruction scan shared by the recognizers: negative traces, then
/// coflabby and flabby sweeps over subgroup class representatives.
pub fn permutation_obstruction(m: &GLattice) -> Result<Option<PermWitness>> {
    if let Some(g) = m.group.elements().find(|&g| m.action[g].trace().is_negative()) {
        return Ok(Some(PermWitness::NegativeTrace {
            element: g,
            trace: m.action[g].trace(),
        }));
    }
    let cof = cohomology::is_coflabby(m)?;
    if let Some(w) = cof.witnesses.first() {
        return Ok(Some(PermWitness::H1 {
            subgroup: w.subgroup.clone(),
            group: w.group.clone(),
        }));
    }
    let fl = cohomology::is_flabby(m)?;
    if let Some(w) = fl.witnesses.first() {
        return Ok(Some(PermWitness::TateMinus1 {
            subgroup: w.subgroup.clone(),
            group: w.group.clone(),
        }));
    }
    Ok(None)
}

struct Orbit {
    vectors: Vec<Vec<BigInt>>,
    // fixed-vector count per group element
    character: Vec<usize>,
}

/// Bounded search for a permuted basis with coordinates in `[-bound, bound]`.
pub fn perm_recognize(m: &GLattice, bound: u32, deadline: Option<Instant>) -> Result<PermVerdict> {
    if bound < 1 {
        return Err(Error::Invalid("coordinate bound must be at least 1".into()));
    }
    if let Some(cert) = PermCertificate::standard(m) {
        return Ok(PermVerdict::Yes(cert));
    }
    if let Some(w) = permutation_obstruction(m)? {
        return Ok(PermVerdict::No(w));
    }
    match search_permuted_basis(m, bound, deadline)? {
        Some(cert) => Ok(PermVerdict::Yes(cert)),
        None => Ok(PermVerdict::Inconclusive),
    }
}

fn search_permuted_basis(m: &GLattice, bound: u32, deadline: Option<Instant>) -> Result<Option<PermCertificate>> {
    let r = m.rank;
    if r == 0 {
        return Ok(Some(PermCertificate {
            basis: IntMatrix::zeros(0, 0),
            generator_perms: vec![Permutation::identity(0); m.group.generators().len()],
        }));
    }
    let target: Vec<usize> = m
        .traces()
        .iter()
        .map(|t| t.try_into().unwrap_or(usize::MAX))
        .collect();
    let b = bound as i64;
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut coords = vec![-b; r];
    loop {
        check_deadline(deadline)?;
        let v: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_one() && !seen.contains(&v) {
            let mut orbit: Vec<Vec<BigInt>> = Vec::new();
            let mut set: HashSet<Vec<BigInt>> = HashSet::new();
            for a in &m.action {
                let w = a.mul_vec(&v);
                if set.insert(w.clone()) {
                    orbit.push(w);
                }
            }
            for w in &orbit {
                seen.insert(w.clone());
            }
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            if orbit.len() <= r && !set.contains(&neg) {
                let character = m
                    .action
                    .iter()
                    .map(|a| orbit.iter().filter(|w| a.mul_vec(w) == **w).count())
                    .collect();
                orbit.sort();
                orbits.push(Orbit { vectors: orbit, character });
            }
        }
        // odometer
        let mut i = 0;
        while i < r && coords[i] == b {
            coords[i] = -b;
            i += 1;
        }
        if i == r {
            break;
        }
        coords[i] += 1;
    }
    // characters of a permuted basis add up to the trace character
    orbits.retain(|o| o.character.iter().zip(&target).all(|(c, t)| c <= t));
    let mut chosen: Vec<usize> = Vec::new();
    let mut remaining = target.clone();
    let found = cover(&orbits, 0, &mut remaining, &mut chosen, r, deadline)?;
    let Some(chosen) = found else {
        return Ok(None);
    };
    let cols: Vec<Vec<BigInt>> = chosen.iter().flat_map(|&i| orbits[i].vectors.clone()).collect();
    let basis = IntMatrix::from_columns(r, &cols);
    let perms = m
        .generator_matrices()
        .iter()
        .map(|g| induced_permutation(g, &basis))
        .collect::<Option<Vec<_>>>()
        .expect("orbits are permuted");
    Ok(Some(PermCertificate {
        basis,
        generator_perms: perms,
    }))
}

fn cover(
    orbits: &[Orbit],
    start: usize,
    remaining: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    rank: usize,
    deadline: Option<Instant>,
) -> Result<Option<Vec<usize>>> {
    check_deadline(deadline)?;
    if remaining.iter().all(|&x| x == 0) {
        let cols: Vec<Vec<BigInt>> = chosen.iter().flat_map(|&i| orbits[i].vectors.clone()).collect();
        if cols.len() == rank && IntMatrix::from_columns(rank, &cols).is_unimodular() {
            return Ok(Some(chosen.clone()));
        }
        return Ok(None);
    }
    for i in start..orbits.len() {
        let o = &orbits[i];
        if o.character.iter().zip(remaining.iter()).any(|(c, r)| c > r) {
            continue;
        }
        // linear independence of the partial basis
        let mut cols: Vec<Vec<BigInt>> = chosen.iter().flat_map(|&j| orbits[j].vectors.clone()).collect();
        cols.extend(o.vectors.iter().cloned());
        let partial = IntMatrix::from_columns(rank, &cols);
        if linalg::image_basis(&partial).cols() != cols.len() {
            continue;
        }
        for (r, c) in remaining.iter_mut().zip(&o.character) {
            *r -= c;
        }
        chosen.push(i);
        let res = cover(orbits, i + 1, remaining, chosen, rank, deadline)?;
        chosen.pop();
        for (r, c) in remaining.iter_mut().zip(&o.character) {
            *r += c;
        }
        if res.is_some() {
            return Ok(res);
        }
    }
    Ok(None)
}

pub(crate) fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(d) if Instant::now() > d => Err(Error::Deadline),
        _ => Ok(()),
    }
}

/// A permutation lattice together with its certificate.
#[derive(Clone, Debug)]
pub struct PermLattice {
    pub lattice: GLattice,
    pub cert: PermCertificate,
}

/// Certificate that `m + p ≅ q` with `p`, `q` permutation lattices.
#[derive(Clone, Debug)]
pub struct StablyPermCertificate {
    pub m: GLattice,
    pub p: PermLattice,
    pub q: PermLattice,
    /// Isomorphism `m + p -> q`.
    pub iso: IntMatrix,
}

impl StablyPermCertificate {
    pub fn twist(&self, a: &GroupHom) -> Result<Self> {
        Ok(StablyPermCertificate {
            m: self.m.twist(a)?,
            p: PermLattice {
                lattice: self.p.lattice.twist(a)?,
                cert: twist_perm_cert(&self.p, a)?,
            },
            q: PermLattice {
                lattice: self.q.lattice.twist(a)?,
                cert: twist_perm_cert(&self.q, a)?,
            },
            iso: self.iso.clone(),
        })
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        let restrict_perm = |pl: &PermLattice| -> Result<PermLattice> {
            let lattice = pl.lattice.restrict(sub)?;
            let perms = lattice
                .generator_matrices()
                .iter()
                .map(|g| induced_permutation(g, &pl.cert.basis))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Invalid("restricted basis is not permuted".into()))?;
            Ok(PermLattice {
                lattice,
                cert: PermCertificate {
                    basis: pl.cert.basis.clone(),
                    generator_perms: perms,
                },
            })
        };
        Ok(StablyPermCertificate {
            m: self.m.restrict(sub)?,
            p: restrict_perm(&self.p)?,
            q: restrict_perm(&self.q)?,
            iso: self.iso.clone(),
        })
    }
}

fn twist_perm_cert(pl: &PermLattice, a: &GroupHom) -> Result<PermCertificate> {
    let twisted = pl.lattice.twist(a)?;
    let perms = twisted
        .generator_matrices()
        .iter()
        .map(|g| induced_permutation(g, &pl.cert.basis))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invalid("twisted basis is not permuted".into()))?;
    Ok(PermCertificate {
        basis: pl.cert.basis.clone(),
        generator_perms: perms,
    })
}

/// Checks both permutation certificates and that the iso is an equivariant
/// unimodular map `m + p -> q`.
pub fn stably_perm_verify(c: &StablyPermCertificate) -> bool {
    if !c.p.cert.validate(&c.p.lattice) || !c.q.cert.validate(&c.q.lattice) {
        return false;
    }
    let Ok(sum) = c.m.direct_sum(&c.p.lattice) else {
        return false;
    };
    if c.iso.rows() != c.q.lattice.rank() || c.iso.cols() != sum.rank() {
        return false;
    }
    if *sum.group() != *c.q.lattice.group() {
        return false;
    }
    verify_iso(&GMap {
        source: sum,
        target: c.q.lattice.clone(),
        matrix: c.iso.clone(),
    })
}

/// Options for the bounded stably-permutation search.
#[derive(Clone, Debug)]
pub struct StablySearchOptions {
    /// Maximum rank of the added permutation lattice `p`.
    pub rank_bound: usize,
    /// Coefficients of the hom-basis combinations range over `[-c, c]`.
    pub coefficient_bound: i64,
    pub deadline: Option<Instant>,
}

impl Default for StablySearchOptions {
    fn default() -> Self {
        StablySearchOptions {
            rank_bound: DEFAULT_STABLY_RANK_BOUND,
            coefficient_bound: 3,
            deadline: None,
        }
    }
}

/// Largest permitted added rank.
pub const DEFAULT_STABLY_RANK_BOUND: usize = 8;

/// Outcome of the bounded search. `NotFound` is not a proof of anything
/// unless `obstruction` is present.
#[derive(Clone, Debug)]
pub enum StablySearchOutcome {
    Found(StablyPermCertificate),
    Obstructed(PermWitness),
    NotFound,
}

/// Bounded search for `m + p ≅ q` with `p`, `q` sums of coset lattices.
pub fn stably_perm_search(m: &GLattice, options: &StablySearchOptions) -> Result<StablySearchOutcome> {
    if options.rank_bound > DEFAULT_STABLY_RANK_BOUND {
        return Err(Error::Invalid(format!(
            "rank bound {} exceeds the maximum {}",
            options.rank_bound, DEFAULT_STABLY_RANK_BOUND
        )));
    }
    let group = m.group.clone();
    // stably permutation lattices are flabby and coflabby; a negative trace
    // does not rule anything out here
    let cof = cohomology::is_coflabby(m)?;
    if let Some(w) = cof.witnesses.first() {
        return Ok(StablySearchOutcome::Obstructed(PermWitness::H1 {
            subgroup: w.subgroup.clone(),
            group: w.group.clone(),
        }));
    }
    let fl = cohomology::is_flabby(m)?;
    if let Some(w) = fl.witnesses.first() {
        return Ok(StablySearchOutcome::Obstructed(PermWitness::TateMinus1 {
            subgroup: w.subgroup.clone(),
            group: w.group.clone(),
        }));
    }
    let lat = crate::groups::subgroups(&group)?;
    let reps: Vec<Subgroup> = lat.representatives().into_iter().cloned().collect();
    let blocks: Vec<(GLattice, PermCertificate)> = reps.iter().map(|h| coset_lattice(&group, h)).collect();
    let m_traces = m.traces();
    for p_rank in 0..=options.rank_bound {
        for p_parts in multisets_with_rank(&blocks, p_rank) {
            let p = assemble_perm(&group, &blocks, &p_parts)?;
            let q_rank = m.rank + p_rank;
            let want: Vec<BigInt> = m_traces.iter().zip(p.lattice.traces()).map(|(a, b)| a + b).collect();
            for q_parts in multisets_with_rank(&blocks, q_rank) {
                check_deadline(options.deadline)?;
                let q = assemble_perm(&group, &blocks, &q_parts)?;
                if q.lattice.traces() != want {
                    continue;
                }
                let source = m.direct_sum(&p.lattice)?;
                if let Some(iso) = search_unimodular_hom(&source, &q.lattice, options)? {
                    return Ok(StablySearchOutcome::Found(StablyPermCertificate {
                        m: m.clone(),
                        p,
                        q,
                        iso,
                    }));
                }
            }
        }
    }
    Ok(StablySearchOutcome::NotFound)
}

fn assemble_perm(group: &Arc<FiniteGroup>, blocks: &[(GLattice, PermCertificate)], parts: &[usize]) -> Result<PermLattice> {
    let mut lattice = GLattice::trivial(group.clone(), 0);
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); group.generators().len()];
    for &i in parts {
        let offset = lattice.rank();
        lattice = lattice.direct_sum(&blocks[i].0)?;
        for (s, p) in blocks[i].1.generator_perms.iter().enumerate() {
            perms[s].extend(p.images().iter().map(|&x| x + offset));
        }
    }
    let cert = PermCertificate {
        basis: IntMatrix::identity(lattice.rank()),
        generator_perms: perms
            .into_iter()
            .map(|p| Permutation::new(p).expect("block permutations"))
            .collect(),
    };
    Ok(PermLattice { lattice, cert })
}

/// Multisets of block indices (non-decreasing sequences) with total rank.
fn multisets_with_rank(blocks: &[(GLattice, PermCertificate)], rank: usize) -> Vec<Vec<usize>> {
    fn rec(
        blocks: &[(GLattice, PermCertificate)],
        start: usize,
        remaining: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..blocks.len() {
            let r = blocks[i].0.rank();
            if r <= remaining {
                cur.push(i);
                rec(blocks, i, remaining - r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(blocks, 0, rank, &mut Vec::new(), &mut out);
    out
}

/// Searches `Hom_G(source, target)` for a unimodular element among the
/// combinations of a hom basis with bounded coefficients, smallest L1 norm
/// first.
fn search_unimodular_hom(
    source: &GLattice,
    target: &GLattice,
    options: &StablySearchOptions,
) -> Result<Option<IntMatrix>> {
    let homs = equivariant_homs(source, target)?;
    let n = source.rank();
    if n == 0 {
        return Ok(Some(IntMatrix::zeros(0, 0)));
    }
    if homs.is_empty() {
        return Ok(None);
    }
    let d = homs.len();
    let c = options.coefficient_bound;
    let max_norm = (c as usize) * d;
    let mut coeffs = vec![0i64; d];
    for norm in 1..=max_norm {
        let mut found = None;
        enumerate_norm(&mut coeffs, 0, norm as i64, c, &mut |cs| {
            if found.is_some() {
                return Ok(());
            }
            check_deadline(options.deadline)?;
            let mut mat = IntMatrix::zeros(n, n);
            for (h, &k) in homs.iter().zip(cs) {
                if k != 0 {
                    mat = mat.add(&h.scale(&BigInt::from(k)));
                }
            }
            if mat.determinant().abs().is_one() {
                found = Some(mat);
            }
            Ok(())
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Calls `f` on every vector with entries in `[-c, c]` and L1 norm exactly
/// `norm`, in a fixed order.
fn enumerate_norm(
    coeffs: &mut [i64],
    pos: usize,
    norm: i64,
    c: i64,
    f: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if pos == coeffs.len() {
        if norm == 0 {
            f(coeffs)?;
        }
        return Ok(());
    }
    let slots_left = (coeffs.len() - pos - 1) as i64;
    for a in 0..=norm.min(c) {
        if norm - a > slots_left * c {
            continue;
        }
        let signs: &[i64] = if a == 0 { &[1] } else { &[1, -1] };
        for &s in signs {
            coeffs[pos] = s * a;
            enumerate_norm(coeffs, pos + 1, norm - a, c, f)?;
        }
    }
    coeffs[pos] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{named_group, GroupSpec};

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(named_group(&GroupSpec::parse(spec).unwrap()).unwrap())
    }

    pub(crate) fn sign_c2() -> GLattice {
        GLattice::new(group("C2"), vec![IntMatrix::from_rows(&[vec![-1]])]).unwrap()
    }

    #[test]
    fn make_lattice_examples() {
        let s = sign_c2();
        assert_eq!(s.rank(), 1);
        assert!(matches!(
            GLattice::new(group("C2"), vec![IntMatrix::from_rows(&[vec![2]])]),
            Err(Error::NotUnimodular(_))
        ));
        // C3 generator sent to -1 violates g^3 = 1
        assert!(matches!(
            GLattice::new(group("C3"), vec![IntMatrix::from_rows(&[vec![-1]])]),
            Err(Error::RelationViolated(..))
        ));
    }

    #[test]
    fn regular_lattice_traces() {
        let g = group("S3");
        let (z, cert) = regular_lattice(&g);
        assert!(cert.validate(&z));
        for x in g.elements() {
            let t = z.rho(x).trace();
            if x == g.identity() {
                assert_eq!(t, BigInt::from(6));
            } else {
                assert!(t.is_zero());
            }
        }
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(invariants_sublattice(&sign_c2()).cols(), 0);
        let g = group("S3");
        let (z, _) = regular_lattice(&g);
        let inv = invariants_sublattice(&z);
        assert_eq!(inv.cols(), 1);
        let v = inv.column(0);
        assert!(v.iter().all(|x| x == &v[0]) && v[0].abs().is_one());
    }

    #[test]
    fn dual_is_involutive() {
        let g = group("S3");
        let m = GLattice::new(
            g.clone(),
            vec![
                IntMatrix::from_rows(&[vec![-1, 1], vec![0, 1]]),
                IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]),
            ],
        );
        // S3 = <(1,2), (1,2,3)> on the sum-zero lattice, basis e1-e2, e2-e3
        let m = m.unwrap();
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn section_examples() {
        let g = group("C2");
        let (z, _) = regular_lattice(&g);
        let sign = sign_c2();
        // Z[C2] -> sign, e_1 -> 1, e_sigma -> -1
        let pi = GMap::new(z, sign, IntMatrix::from_rows(&[vec![1, -1]])).unwrap();
        assert!(find_equivariant_section(&pi).unwrap().is_none());
        let m = sign_c2();
        let id = GMap::new(m.clone(), m, IntMatrix::identity(1)).unwrap();
        let s = find_equivariant_section(&id).unwrap().unwrap();
        assert!(s.matrix.is_identity());
    }

    #[test]
    fn form_examples() {
        let m = sign_c2();
        assert!(preserves_form(&m, &IntMatrix::from_rows(&[vec![1]])).unwrap());
        let t = GLattice::trivial(group("S3"), 2);
        assert!(preserves_form(&t, &IntMatrix::from_rows(&[vec![3, 1], vec![1, 5]])).unwrap());
        assert!(preserves_form(&t, &IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn hom_examples() {
        let m = sign_c2();
        let t = GLattice::trivial(group("C2"), 1);
        assert!(equivariant_homs(&m, &t).unwrap().is_empty());
        let g = group("S3");
        let (z, _) = regular_lattice(&g);
        let (perm3, _) = coset_lattice(&g, &Subgroup::from_generators(&g, &[g.generators()[0]]));
        assert_eq!(equivariant_homs(&z, &perm3).unwrap().len(), 3);
    }

    #[test]
    fn multiset_enumeration() {
        let g = group("C2");
        let blocks = vec![
            (GLattice::trivial(g.clone(), 1), PermCertificate::standard(&GLattice::trivial(g.clone(), 1)).unwrap()),
            regular_lattice(&g),
        ];
        // rank 2: {1,1} and {2}
        assert_eq!(multisets_with_rank(&blocks, 2).len(), 2);
        assert_eq!(multisets_with_rank(&blocks, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn norm_enumeration_counts() {
        let mut coeffs = vec![0i64; 3];
        let mut count = 0;
        enumerate_norm(&mut coeffs, 0, 2, 3, &mut |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        // vectors in Z^3 with L1 norm 2: 3*2 (one entry ±2) + 3*4 (two ±1)
        assert_eq!(count, 18);
    }
}

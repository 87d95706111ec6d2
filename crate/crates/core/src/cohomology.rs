//! Group cohomology of G-lattices.
//!
//! `H^1` is computed from crossed homomorphisms on the Cayley graph. Higher
//! degrees use a small free `Z[G]`-resolution whose modules are spanned by
//! translates of a few generators, so the cochain complexes have size
//! `rank(M) * (number of generators)` rather than `|G|^n`. Normalized bar
//! cochains are kept for explicit cocycles (connecting maps) and as a
//! cross-check on small groups.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{self, FiniteGroup, Subgroup};
use crate::lattice::{GLattice, GMap};
use crate::linalg::{self, FinAbGroup, IntMatrix, LatticeBuilder};

/// Largest group order accepted by the resolution engine.
pub const MAX_RESOLUTION_ORDER: usize = 60;
/// Largest group order accepted for normalized bar cochains of degree 2.
pub const MAX_BAR_ORDER: usize = 24;

/// `H^0(G, M) = M^G`, as a free abelian group.
pub fn h0(m: &GLattice) -> FinAbGroup {
    FinAbGroup::free(crate::lattice::invariants_sublattice(m).cols())
}

/// Crossed-homomorphism data: `f(x) = F_x * (f(s_1), ..., f(s_k))`.
struct CrossedHoms {
    // kernel of the cocycle conditions, in the stacked generator values
    cocycles: IntMatrix,
    // coboundaries d m: f(s) = (rho(s) - 1) m
    coboundary: IntMatrix,
}

fn crossed_homs(m: &GLattice) -> CrossedHoms {
    let g = m.group();
    let r = m.rank();
    let k = g.generators().len();
    let n = k * r;
    // F_x as r x n matrices
    let mut f: Vec<Option<IntMatrix>> = vec![None; g.order()];
    f[g.identity()] = Some(IntMatrix::zeros(r, n));
    let selector = |s: usize| -> IntMatrix {
        let mut e = IntMatrix::zeros(r, n);
        for i in 0..r {
            e.set(i, s * r + i, BigInt::one());
        }
        e
    };
    let selectors: Vec<IntMatrix> = (0..k).map(selector).collect();
    // f(x s) = f(x) + x f(s)
    let step = |x: usize, fx: &IntMatrix, s: usize| fx.add(&m.rho(x).mul(&selectors[s]));
    let mut tree = vec![false; g.order() * k];
    for (x, parent, s) in g.spanning_tree() {
        let fp = f[parent].clone().expect("parent before child");
        f[x] = Some(step(parent, &fp, s));
        tree[parent * k + s] = true;
    }
    let mut constraints = IntMatrix::zeros(0, n);
    for x in g.elements() {
        for (s, &gen) in g.generators().iter().enumerate() {
            if tree[x * k + s] {
                continue;
            }
            let fx = f[x].as_ref().expect("all elements reached");
            let lhs = step(x, fx, s);
            let diff = lhs.sub(f[g.mul(x, gen)].as_ref().expect("all elements reached"));
            if !diff.is_zero() {
                constraints = constraints.vstack(&diff);
            }
        }
    }
    let cocycles = linalg::kernel_basis(&constraints);
    let id = IntMatrix::identity(r);
    let mut coboundary = IntMatrix::zeros(0, r);
    for &gen in g.generators() {
        coboundary = coboundary.vstack(&m.rho(gen).sub(&id));
    }
    CrossedHoms { cocycles, coboundary }
}

/// `H^1(G, M)` as crossed homomorphisms modulo principal ones.
pub fn h1(m: &GLattice) -> FinAbGroup {
    if m.rank() == 0 || m.group().generators().is_empty() {
        return FinAbGroup::trivial();
    }
    let ch = crossed_homs(m);
    let result = linalg::quotient_structure(&ch.cocycles, &ch.coboundary)
        .expect("coboundaries are cocycles");
    assert_eq!(result.free_rank(), 0, "H^1 of a finite group is torsion");
    result
}

/// A free `Z[G]`-resolution `... -> F_2 -> F_1 -> F_0 = Z[G] -> Z`.
///
/// Elements of `F_n = Z[G]^{k_n}` are vectors of length `k_n * |G|` with
/// index `i * |G| + g` for the coefficient of `g e_i`.
#[derive(Clone, Debug)]
pub struct Resolution {
    group: Arc<FiniteGroup>,
    ranks: Vec<usize>,
    // boundary_images[n - 1][j] = d_n(e_j), an element of F_{n-1}
    boundary_images: Vec<Vec<Vec<BigInt>>>,
}

impl Resolution {
    /// Builds the resolution up to `F_length`.
    pub fn new(group: Arc<FiniteGroup>, length: usize) -> Result<Self> {
        if group.order() > MAX_RESOLUTION_ORDER {
            return Err(Error::CapExceeded {
                order: group.order(),
                cap: MAX_RESOLUTION_ORDER,
            });
        }
        let mut res = Resolution {
            group,
            ranks: vec![1],
            boundary_images: Vec::new(),
        };
        while res.length() < length {
            res.extend();
        }
        Ok(res)
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn translate(&self, h: usize, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.group.order();
        let mut w = vec![BigInt::zero(); v.len()];
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (i, g) = (idx / n, idx % n);
                w[i * n + self.group.mul(h, g)] = c.clone();
            }
        }
        w
    }

    /// The Z-matrix of `d_n: F_n -> F_{n-1}`, columns indexed by `j * |G| + h`
    /// for the basis element `h e_j`.
    pub fn boundary_matrix(&self, n: usize) -> IntMatrix {
        assert!(n >= 1 && n <= self.length());
        let order = self.group.order();
        let mut cols = Vec::with_capacity(self.ranks[n] * order);
        for img in &self.boundary_images[n - 1] {
            for h in self.group.elements() {
                cols.push(self.translate(h, img));
            }
        }
        IntMatrix::from_columns(self.ranks[n - 1] * order, &cols)
    }

    fn extend(&mut self) {
        let n = self.length() + 1;
        let order = self.group.order();
        let g = self.group.clone();
        let candidates: Vec<Vec<BigInt>> = if n == 1 {
            // d_1(e_s) = s - 1
            g.generators()
                .iter()
                .map(|&s| {
                    let mut v = vec![BigInt::zero(); order];
                    v[s] += 1;
                    v[g.identity()] -= 1;
                    v
                })
                .collect()
        } else if n == 2 {
            fundamental_cycles(&g)
        } else {
            let d = self.boundary_matrix(n - 1);
            let mut cols = linalg::kernel_basis(&d).columns();
            cols.sort_by_key(|c| c.iter().map(|x| x.abs()).sum::<BigInt>());
            cols
        };
        let dim = self.ranks[n - 1] * order;
        let mut builder = LatticeBuilder::new(dim);
        let mut images = Vec::new();
        for c in candidates {
            if n == 1 || !builder.contains(&c) {
                for h in g.elements() {
                    builder.insert(&self.translate(h, &c));
                }
                images.push(c);
            }
        }
        self.ranks.push(images.len());
        self.boundary_images.push(images);
    }

    /// Cochain differential `delta^n: Hom_G(F_{n-1}, M) -> Hom_G(F_n, M)`,
    /// a `(k_n r) x (k_{n-1} r)` matrix.
    pub fn cochain_differential(&self, m: &GLattice, n: usize) -> IntMatrix {
        assert!(n >= 1 && n <= self.length());
        let r = m.rank();
        let order = self.group.order();
        let mut out = IntMatrix::zeros(self.ranks[n] * r, self.ranks[n - 1] * r);
        for (j, img) in self.boundary_images[n - 1].iter().enumerate() {
            for (idx, c) in img.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, g) = (idx / order, idx % order);
                let block = m.rho(g);
                for a in 0..r {
                    for b in 0..r {
                        let e = block.get(a, b);
                        if !e.is_zero() {
                            let v = out.get(j * r + a, i * r + b) + c * e;
                            out.set(j * r + a, i * r + b, v);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Fundamental cycles of the Cayley graph: a Z-basis of `ker d_1`.
fn fundamental_cycles(g: &FiniteGroup) -> Vec<Vec<BigInt>> {
    let order = g.order();
    let k = g.generators().len();
    // path[y] = sum of tree edges from the identity to y
    let mut path: Vec<Vec<BigInt>> = vec![Vec::new(); order];
    path[g.identity()] = vec![BigInt::zero(); k * order];
    let mut tree = vec![false; k * order];
    for (x, parent, s) in g.spanning_tree() {
        let mut p = path[parent].clone();
        p[s * order + parent] += 1;
        path[x] = p;
        tree[s * order + parent] = true;
    }
    let mut cycles = Vec::new();
    for (s, &gen) in g.generators().iter().enumerate() {
        for x in g.elements() {
            if tree[s * order + x] {
                continue;
            }
            let mut z: Vec<BigInt> = path[x].iter().zip(&path[g.mul(x, gen)]).map(|(a, b)| a - b).collect();
            z[s * order + x] += 1;
            cycles.push(z);
        }
    }
    cycles.sort_by_key(|c| c.iter().map(|x| x.abs()).sum::<BigInt>());
    cycles
}

/// `H^n(G, M)` for `n >= 1`, or `H^n(G, M / modulus M)` when `modulus > 0`,
/// from a free resolution.
pub fn cohomology(m: &GLattice, n: usize, modulus: u64) -> Result<FinAbGroup> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let res = Resolution::new(m.group().clone(), n + 1)?;
    cohomology_with(&res, m, n, modulus)
}

/// As [`cohomology`], reusing a resolution of length at least `n + 1`.
pub fn cohomology_with(res: &Resolution, m: &GLattice, n: usize, modulus: u64) -> Result<FinAbGroup> {
    if **res.group() != **m.group() {
        return Err(Error::GroupMismatch("resolution over another group".into()));
    }
    if res.length() < n + 1 {
        return Err(Error::Invalid(format!("resolution too short for degree {n}")));
    }
    let d_in = res.cochain_differential(m, n);
    let d_out = res.cochain_differential(m, n + 1);
    let result = complex_cohomology(&d_in, &d_out, modulus)?;
    if modulus == 0 {
        assert_eq!(result.free_rank(), 0, "positive-degree cohomology is torsion");
    }
    Ok(result)
}

/// Homology at the middle of `C -d_in-> C' -d_out-> C''`, over `Z` or with
/// coefficients reduced mod `modulus`.
pub fn complex_cohomology(d_in: &IntMatrix, d_out: &IntMatrix, modulus: u64) -> Result<FinAbGroup> {
    let dim = d_in.rows();
    if d_out.cols() != dim {
        return Err(Error::Dimension("differentials do not compose".into()));
    }
    if dim == 0 {
        return Ok(FinAbGroup::trivial());
    }
    if modulus == 0 {
        let z = linalg::kernel_basis(d_out);
        return linalg::quotient_structure(&z, d_in);
    }
    let md = BigInt::from(modulus);
    // cocycles mod m: x with d_out x in m Z^{rows}
    let aug = d_out.hstack(&IntMatrix::identity(d_out.rows()).scale(&md));
    let kernel = linalg::kernel_basis(&aug);
    let projected = kernel.row_slice(0, dim);
    let z = linalg::image_basis(&projected.hstack(&IntMatrix::identity(dim).scale(&md)));
    let b = d_in.hstack(&IntMatrix::identity(dim).scale(&md));
    linalg::quotient_structure(&z, &b)
}

/// `H^2(G, M)` (`modulus == 0`) or `H^2(G, M / modulus M)`.
pub fn h2(m: &GLattice, modulus: u64) -> Result<FinAbGroup> {
    cohomology(m, 2, modulus)
}

/// Tate cohomology in degree `-1` or `0`.
pub fn tate(m: &GLattice, degree: i32) -> Result<FinAbGroup> {
    let r = m.rank();
    if r == 0 {
        return Ok(FinAbGroup::trivial());
    }
    let norm = m.norm_matrix();
    match degree {
        0 => {
            let inv = crate::lattice::invariants_sublattice(m);
            linalg::quotient_structure(&inv, &norm)
        }
        -1 => {
            let ker = linalg::kernel_basis(&norm);
            let id = IntMatrix::identity(r);
            let mut aug = IntMatrix::zeros(r, 0);
            for g in m.group().elements() {
                aug = aug.hstack(&m.rho(g).sub(&id));
            }
            linalg::quotient_structure(&ker, &aug)
        }
        _ => Err(Error::Invalid(format!("Tate degree {degree} is not -1 or 0"))),
    }
}

/// A subgroup (by element set) where a vanishing condition fails.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupWitness {
    pub subgroup: Vec<usize>,
    pub group: FinAbGroup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub holds: bool,
    pub witnesses: Vec<SubgroupWitness>,
}

fn sweep<F>(m: &GLattice, probe: F) -> Result<SweepReport>
where
    F: Fn(&GLattice) -> Result<FinAbGroup> + Sync,
{
    let lattice = groups::subgroups(m.group())?;
    let reps: Vec<&Subgroup> = lattice.representatives();
    let results: Vec<Result<Option<SubgroupWitness>>> = reps
        .par_iter()
        .map(|h| {
            let restricted = m.restrict(h)?;
            let group = probe(&restricted)?;
            Ok((!group.is_trivial()).then(|| SubgroupWitness {
                subgroup: h.elements().to_vec(),
                group,
            }))
        })
        .collect();
    let mut witnesses = Vec::new();
    for r in results {
        if let Some(w) = r? {
            witnesses.push(w);
        }
    }
    Ok(SweepReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// `H^1(H, M) = 0` for every subgroup `H` (up to conjugacy).
pub fn is_coflabby(m: &GLattice) -> Result<SweepReport> {
    sweep(m, |l| Ok(h1(l)))
}

/// Tate `H^-1(H, M) = 0` for every subgroup `H` (up to conjugacy).
pub fn is_flabby(m: &GLattice) -> Result<SweepReport> {
    sweep(m, |l| tate(l, -1))
}

/// `H^i(G, T)` for the torus with character lattice `m`, via
/// `H^i(G, N ⊗ k^*) = H^{i+1}(G, N)` with `N = dual(m)` (k^* divisible,
/// characteristic zero).
pub fn torus_h(i: usize, m: &GLattice) -> Result<FinAbGroup> {
    if !(1..=2).contains(&i) {
        return Err(Error::Invalid(format!("torus cohomology degree {i} is not 1 or 2")));
    }
    if i == 2 && m.group().order() > MAX_BAR_ORDER {
        return Err(Error::CapExceeded {
            order: m.group().order(),
            cap: MAX_BAR_ORDER,
        });
    }
    cohomology(&m.dual(), i + 1, 0)
}

/// Normalized bar cochains: `C^k` holds functions on k-tuples of
/// non-identity elements, flattened with the last argument varying fastest,
/// each value a vector of length `rank(M)`.
#[derive(Clone, Debug)]
pub struct BarComplex {
    lattice: GLattice,
    // non-identity elements in index order
    nonidentity: Vec<usize>,
    position: Vec<Option<usize>>,
}

/// `C^{k-1} -> C^k -> C^{k+1}` of the normalized bar complex.
#[derive(Clone, Debug)]
pub struct CochainComplexSlice {
    pub degree: usize,
    pub boundary_in: IntMatrix,
    pub boundary_out: IntMatrix,
}

impl CochainComplexSlice {
    pub fn cohomology(&self, modulus: u64) -> Result<FinAbGroup> {
        complex_cohomology(&self.boundary_in, &self.boundary_out, modulus)
    }
}

impl BarComplex {
    pub fn new(m: &GLattice) -> Result<Self> {
        let g = m.group();
        if g.order() > MAX_BAR_ORDER {
            return Err(Error::CapExceeded {
                order: g.order(),
                cap: MAX_BAR_ORDER,
            });
        }
        let nonidentity: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
        let mut position = vec![None; g.order()];
        for (i, &x) in nonidentity.iter().enumerate() {
            position[x] = Some(i);
        }
        Ok(BarComplex {
            lattice: m.clone(),
            nonidentity,
            position,
        })
    }

    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    /// Number of integer coordinates of `C^k`.
    pub fn dimension(&self, k: usize) -> usize {
        self.nonidentity.len().pow(k as u32) * self.lattice.rank()
    }

    fn tuple_index(&self, tuple: &[usize]) -> Option<usize> {
        let q = self.nonidentity.len();
        tuple
            .iter()
            .try_fold(0usize, |acc, &x| self.position[x].map(|p| acc * q + p))
    }

    fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.nonidentity.iter().map(move |&x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// The differential `d^k: C^k -> C^{k+1}`.
    pub fn differential(&self, k: usize) -> IntMatrix {
        let g = self.lattice.group();
        let r = self.lattice.rank();
        let mut d = IntMatrix::zeros(self.dimension(k + 1), self.dimension(k));
        for (row_block, t) in self.tuples(k + 1).iter().enumerate() {
            let mut add_term = |sign: i64, action: Option<usize>, args: &[usize]| {
                let Some(col_block) = self.tuple_index(args) else {
                    return;
                };
                for a in 0..r {
                    for b in 0..r {
                        let coeff = match action {
                            Some(x) => self.lattice.rho(x).get(a, b).clone(),
                            None if a == b => BigInt::one(),
                            None => continue,
                        };
                        if coeff.is_zero() {
                            continue;
                        }
                        let (i, j) = (row_block * r + a, col_block * r + b);
                        let v = d.get(i, j) + coeff * sign;
                        d.set(i, j, v);
                    }
                }
            };
            // g_0 f(g_1..g_k)
            add_term(1, Some(t[0]), &t[1..]);
            for i in 1..=k {
                let mut args: Vec<usize> = t[..i - 1].to_vec();
                args.push(g.mul(t[i - 1], t[i]));
                args.extend_from_slice(&t[i + 1..]);
                add_term(if i % 2 == 1 { -1 } else { 1 }, None, &args);
            }
            add_term(if (k + 1) % 2 == 1 { -1 } else { 1 }, None, &t[..k]);
        }
        d
    }

    pub fn slice(&self, degree: usize) -> Result<CochainComplexSlice> {
        if degree == 0 {
            return Err(Error::Invalid("slices start in degree 1".into()));
        }
        Ok(CochainComplexSlice {
            degree,
            boundary_in: self.differential(degree - 1),
            boundary_out: self.differential(degree),
        })
    }

    /// Flattens a function on k-tuples (given on all of `G^k`) to a
    /// normalized cochain, checking that it vanishes on degenerate tuples.
    pub fn normalize(&self, k: usize, values: &dyn Fn(&[usize]) -> Vec<BigInt>) -> Result<Vec<BigInt>> {
        let g = self.lattice.group();
        let r = self.lattice.rank();
        let mut out = Vec::with_capacity(self.dimension(k));
        for t in self.tuples(k) {
            let v = values(&t);
            if v.len() != r {
                return Err(Error::Dimension("cochain value of wrong length".into()));
            }
            out.extend(v);
        }
        // degenerate tuples must carry zero
        let mut degenerate = vec![Vec::new()];
        for _ in 0..k {
            degenerate = degenerate
                .into_iter()
                .flat_map(|t: Vec<usize>| {
                    g.elements().map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        for t in degenerate.iter().filter(|t| t.contains(&g.identity())) {
            if values(t).iter().any(|x| !x.is_zero()) {
                return Err(Error::Invalid("cochain is not normalized".into()));
            }
        }
        Ok(out)
    }

    /// Value of a flattened cochain at a tuple (zero on degenerate tuples).
    pub fn value(&self, cochain: &[BigInt], tuple: &[usize]) -> Vec<BigInt> {
        let r = self.lattice.rank();
        match self.tuple_index(tuple) {
            Some(i) => cochain[i * r..(i + 1) * r].to_vec(),
            None => vec![BigInt::zero(); r],
        }
    }

    /// Decides whether a cochain of degree `k >= 1` is a coboundary, over
    /// `Z` or mod `modulus`.
    pub fn is_coboundary(&self, k: usize, cochain: &[BigInt], modulus: u64) -> Result<bool> {
        let d = self.differential(k - 1);
        Ok(linalg::solve_linear(&d, cochain, &BigInt::from(modulus))?.is_some())
    }

    /// Order of the class of a cocycle in `H^k`, searching multiples up to
    /// `bound`; `None` if no multiple up to the bound is a coboundary.
    pub fn class_order(&self, k: usize, cocycle: &[BigInt], modulus: u64, bound: u64) -> Result<Option<u64>> {
        let d = self.differential(k - 1);
        let md = BigInt::from(modulus);
        let form = linalg::snf(&d);
        for n in 1..=bound {
            let scaled: Vec<BigInt> = cocycle.iter().map(|x| x * n).collect();
            if form.solve(&scaled, &md).is_some() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

/// A short exact sequence `0 -> A -i-> B -p-> C -> 0` of G-lattices.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub inclusion: GMap,
    pub projection: GMap,
}

impl ShortExactSequence {
    pub fn new(inclusion: GMap, projection: GMap) -> Result<Self> {
        if inclusion.target.rank() != projection.source.rank() {
            return Err(Error::NotExact("middle terms differ".into()));
        }
        if !projection.matrix.mul(&inclusion.matrix).is_zero() {
            return Err(Error::NotExact("composite is not zero".into()));
        }
        if !linalg::cokernel_structure(&projection.matrix).is_trivial() {
            return Err(Error::NotExact("projection is not surjective".into()));
        }
        // i must be injective with saturated image equal to ker p
        let ker = linalg::kernel_basis(&projection.matrix);
        if linalg::image_basis(&inclusion.matrix).cols() != inclusion.source.rank()
            || ker.cols() != inclusion.source.rank()
            || !linalg::cokernel_structure(&linalg::coordinates_in(&ker, &inclusion.matrix)?).is_trivial()
        {
            return Err(Error::NotExact("image of the inclusion is not the kernel".into()));
        }
        Ok(ShortExactSequence { inclusion, projection })
    }
}

/// Explicit cocycle value chooser for lifting through the projection.
pub type LiftAdjust<'a> = &'a dyn Fn(usize) -> Vec<BigInt>;

/// The connecting map `H^1(G, C) -> H^2(G, A)` on explicit cocycles.
///
/// `cocycle[g]` is the value of a 1-cocycle at `g`. Each value is lifted to
/// `B` by an integer solve, then `adjust(g)` (an element of `ker p`, in `B`
/// coordinates) is added to vary the set-theoretic lift. The result is the
/// normalized 2-cocycle with values in `A`.
pub fn connecting_delta(
    ses: &ShortExactSequence,
    cocycle: &[Vec<BigInt>],
    adjust: Option<LiftAdjust<'_>>,
) -> Result<Vec<BigInt>> {
    let p = &ses.projection;
    let i = &ses.inclusion;
    let g = p.source.group().clone();
    if cocycle.len() != g.order() {
        return Err(Error::Dimension("one cocycle value per group element".into()));
    }
    let zero = BigInt::zero();
    let mut lift: Vec<Vec<BigInt>> = Vec::with_capacity(g.order());
    for x in g.elements() {
        if x == g.identity() {
            if cocycle[x].iter().any(|c| !c.is_zero()) {
                return Err(Error::Invalid("1-cocycle must vanish at the identity".into()));
            }
            lift.push(vec![BigInt::zero(); p.source.rank()]);
            continue;
        }
        let mut b = linalg::solve_linear(&p.matrix, &cocycle[x], &zero)?.ok_or(Error::NotSurjective)?;
        if let Some(f) = adjust {
            let extra = f(x);
            if !p.matrix.mul_vec(&extra).iter().all(Zero::is_zero) {
                return Err(Error::Invalid("lift adjustment is not in the kernel".into()));
            }
            b = b.iter().zip(&extra).map(|(u, v)| u + v).collect();
        }
        lift.push(b);
    }
    let bar = BarComplex::new(&i.source)?;
    let form = linalg::snf(&i.matrix);
    let values = |t: &[usize]| -> Vec<BigInt> {
        let (x, y) = (t[0], t[1]);
        // (dF)(x, y) = x F(y) - F(xy) + F(x)
        let xf = p.source.rho(x).mul_vec(&lift[y]);
        let v: Vec<BigInt> = xf
            .iter()
            .zip(&lift[g.mul(x, y)])
            .zip(&lift[x])
            .map(|((a, b), c)| a - b + c)
            .collect();
        form.solve(&v, &zero).unwrap_or_default()
    };
    // every value must lie in i(A)
    for x in g.elements() {
        for y in g.elements() {
            let xf = p.source.rho(x).mul_vec(&lift[y]);
            let v: Vec<BigInt> = xf
                .iter()
                .zip(&lift[g.mul(x, y)])
                .zip(&lift[x])
                .map(|((a, b), c)| a - b + c)
                .collect();
            if form.solve(&v, &zero).is_none() {
                return Err(Error::Invalid("input is not a 1-cocycle".into()));
            }
        }
    }
    bar.normalize(2, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{named_group, GroupSpec};
    use crate::lattice::{coset_lattice, regular_lattice};

    fn group(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(named_group(&GroupSpec::parse(spec).unwrap()).unwrap())
    }

    fn sign_c2() -> GLattice {
        GLattice::new(group("C2"), vec![IntMatrix::from_rows(&[vec![-1]])]).unwrap()
    }

    fn factors(a: &FinAbGroup) -> Vec<u64> {
        a.factors_u64()
    }

    #[test]
    fn h1_examples() {
        assert_eq!(factors(&h1(&sign_c2())), vec![2]);
        let g = group("S3");
        assert!(h1(&regular_lattice(&g).0).is_trivial());
        assert!(h1(&GLattice::trivial(g, 1)).is_trivial());
    }

    #[test]
    fn h1_agrees_with_resolution() {
        for spec in ["C2", "C4", "klein", "S3", "D4"] {
            let g = group(spec);
            let lat = groups::subgroups(&g).unwrap();
            for h in lat.representatives() {
                let (m, _) = coset_lattice(&g, h);
                let m = m.direct_sum(&sign_like(&g)).unwrap();
                assert_eq!(h1(&m), cohomology(&m, 1, 0).unwrap(), "{spec}");
            }
        }
    }

    // the sign-of-the-first-generator lattice when it is a homomorphism, else trivial
    fn sign_like(g: &Arc<FiniteGroup>) -> GLattice {
        let mats: Vec<IntMatrix> = (0..g.generators().len())
            .map(|i| IntMatrix::from_rows(&[vec![if i == 0 { -1 } else { 1 }]]))
            .collect();
        GLattice::new(g.clone(), mats).unwrap_or_else(|_| GLattice::trivial(g.clone(), 1))
    }

    #[test]
    fn h2_examples() {
        let c2 = group("C2");
        assert_eq!(factors(&h2(&GLattice::trivial(c2.clone(), 1), 0).unwrap()), vec![2]);
        assert!(h2(&regular_lattice(&c2).0, 0).unwrap().is_trivial());
        let k = group("klein");
        assert_eq!(factors(&h2(&GLattice::trivial(k, 1), 2).unwrap()), vec![2, 2, 2]);
    }

    #[test]
    fn h2_agrees_with_bar() {
        for spec in ["C2", "C3", "klein", "S3"] {
            let g = group(spec);
            for m in [GLattice::trivial(g.clone(), 1), sign_like(&g)] {
                let bar = BarComplex::new(&m).unwrap();
                let slice = bar.slice(2).unwrap();
                assert!(slice.boundary_out.mul(&slice.boundary_in).is_zero());
                assert_eq!(slice.cohomology(0).unwrap(), h2(&m, 0).unwrap(), "{spec}");
                assert_eq!(slice.cohomology(3).unwrap(), h2(&m, 3).unwrap(), "{spec}");
            }
        }
    }

    #[test]
    fn tate_examples() {
        let c2 = group("C2");
        assert_eq!(factors(&tate(&GLattice::trivial(c2, 1), 0).unwrap()), vec![2]);
        assert_eq!(factors(&tate(&sign_c2(), -1).unwrap()), vec![2]);
        let g = group("S3");
        assert!(tate(&regular_lattice(&g).0, -1).unwrap().is_trivial());
    }

    #[test]
    fn sweep_examples() {
        let s = sign_c2();
        let cof = is_coflabby(&s).unwrap();
        assert!(!cof.holds);
        assert_eq!(cof.witnesses[0].subgroup.len(), 2);
        assert!(!is_flabby(&s).unwrap().holds);
        let g = group("S3");
        assert!(is_coflabby(&GLattice::trivial(g.clone(), 1)).unwrap().holds);
        assert!(is_flabby(&GLattice::trivial(g, 0)).unwrap().holds);
    }

    #[test]
    fn torus_examples() {
        assert!(torus_h(1, &sign_c2()).unwrap().is_trivial());
        let c2 = group("C2");
        assert_eq!(factors(&torus_h(1, &GLattice::trivial(c2.clone(), 1)).unwrap()), vec![2]);
        assert!(torus_h(1, &regular_lattice(&c2).0).unwrap().is_trivial());
    }

    #[test]
    fn connecting_map_sign_sequence() {
        // 0 -> Z -> Z[C2] -> sign -> 0
        let c2 = group("C2");
        let (z, _) = regular_lattice(&c2);
        let triv = GLattice::trivial(c2.clone(), 1);
        let sign = sign_c2();
        let i = GMap::new(triv, z.clone(), IntMatrix::from_rows(&[vec![1], vec![1]])).unwrap();
        let p = GMap::new(z, sign, IntMatrix::from_rows(&[vec![1, -1]])).unwrap();
        let ses = ShortExactSequence::new(i.clone(), p).unwrap();
        let sigma = 1 - c2.identity();
        let mut cocycle = vec![vec![BigInt::zero()]; 2];
        cocycle[sigma] = vec![BigInt::one()];
        let c = connecting_delta(&ses, &cocycle, None).unwrap();
        let bar = BarComplex::new(&i.source).unwrap();
        assert_eq!(bar.class_order(2, &c, 0, 4).unwrap(), Some(2));
        // another lift gives the same class
        let adjust = |_: usize| vec![BigInt::from(3), BigInt::from(3)];
        let c2_ = connecting_delta(&ses, &cocycle, Some(&adjust)).unwrap();
        let diff: Vec<BigInt> = c.iter().zip(&c2_).map(|(a, b)| a - b).collect();
        assert!(bar.is_coboundary(2, &diff, 0).unwrap());
        // zero class
        let zero = vec![vec![BigInt::zero()]; 2];
        let cz = connecting_delta(&ses, &zero, None).unwrap();
        assert!(bar.is_coboundary(2, &cz, 0).unwrap());
    }
}

//! Input documents: serde schema and conversion into library objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use stablin::cyclo::{Cyclo, CycloMatrix};
use stablin::groups::{
    close_generators_capped, conjugation_automorphism, named_group, outer_twist, FiniteGroup, GroupHom, GroupSpec,
    Permutation, Subgroup,
};
use stablin::lattice::{coset_lattice, make_lattice, GLattice, GMap, PermCertificate};
use stablin::linalg::IntMatrix;
use stablin::obstructions::{GeneratorLiftSpec, ProjectiveAction, SignedPerm, TorusAction};
use stablin::poly::{CoxSpec, MonomialMap, MultiPoly};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub group: GroupInput,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattices: Vec<LatticeInput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomials: Option<PolynomialsInput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub projective: Vec<ProjectiveInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cox: Option<CoxInput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lift: Vec<LiftSpecInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateInput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskInput>,
}

/// Either `name` or `degree` with `generators` in cycle notation.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

/// Either `rank` with one matrix per group generator, or `cosets`: a list of
/// subgroups (by generators) whose coset lattices are summed.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeInput {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosets: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapInput {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialsInput {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityInput>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityInput {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    /// Substitution `var -> polynomial` applied to both sides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
}

/// Generator matrices over `Q(zeta_conductor)`; entries are polynomials in `z`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectiveInput {
    pub name: String,
    pub conductor: u32,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CoxInput {
    pub vars: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub relations: Vec<String>,
    /// Torus coordinates as Laurent exponent vectors over `vars`.
    #[serde(default)]
    pub torus: Vec<Vec<i64>>,
}

/// Constraints on the lift of one group generator.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpecInput {
    /// Cycle notation on the Cox variables, numbered from 1.
    pub permutation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_support: Option<Vec<bool>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TorusInput {
    pub exponents: Vec<Vec<i64>>,
    pub signs: Vec<i8>,
}

/// An automorphism: generator images, or conjugation by an element.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwistInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_by: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CertificateInput {
    /// Columns of `basis` are permuted by the generators as in `perms`.
    Permutation {
        lattice: String,
        basis: Vec<Vec<i64>>,
        perms: Vec<Vec<usize>>,
    },
    /// `iso: lattice + p -> q`, with permuted bases of `p` and `q`.
    StablyPermutation {
        lattice: String,
        p: PermLatticeInput,
        q: PermLatticeInput,
        iso: Vec<Vec<i64>>,
    },
    /// `map * section = 1`.
    Section { map: String, section: Vec<Vec<i64>> },
    /// Signed permutation lifts of the generators, checked against `lift`.
    CoxLift { generators: Vec<SignedPermInput> },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PermLatticeInput {
    pub rank: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
    pub basis: Vec<Vec<i64>>,
    pub perms: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SignedPermInput {
    /// Images of `0..n`.
    pub images: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TaskInput {
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Expected result as rendered text, e.g. `Z/2` or `true`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
}

pub fn matrix(rows: &[Vec<i64>]) -> Result<IntMatrix, CliError> {
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(CliError::Schema("ragged matrix".into()));
        }
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Ok(IntMatrix::try_from_rows(&big)?)
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("entries fit in i64")
}

/// A parsed document with its group built.
pub struct Context {
    pub doc: InputDocument,
    pub group: Arc<FiniteGroup>,
}

impl Context {
    pub fn new(doc: InputDocument, max_order: usize) -> Result<Self, CliError> {
        let group = Arc::new(build_group(&doc.group, max_order)?);
        Ok(Context { doc, group })
    }

    pub fn element(&self, cycles: &str) -> Result<usize, CliError> {
        let labels = self
            .group
            .labels()
            .ok_or_else(|| CliError::Schema("group has no permutation labels".into()))?;
        let degree = labels.first().map_or(1, Permutation::degree);
        let p = Permutation::from_cycles(cycles, degree)?;
        self.group
            .find_permutation(&p)
            .ok_or_else(|| CliError::Schema(format!("{cycles} is not an element of the group")))
    }

    pub fn lattice(&self, name: Option<&str>) -> Result<(String, GLattice), CliError> {
        let input = match name {
            Some(n) => self
                .doc
                .lattices
                .iter()
                .find(|l| l.name == n)
                .ok_or_else(|| CliError::Schema(format!("no lattice named {n}")))?,
            None => self
                .doc
                .lattices
                .first()
                .ok_or_else(|| CliError::Schema("document has no lattices".into()))?,
        };
        Ok((input.name.clone(), self.build_lattice(input)?.0))
    }

    /// The lattice and, for coset data, its permuted basis.
    pub fn build_lattice(&self, input: &LatticeInput) -> Result<(GLattice, Option<PermCertificate>), CliError> {
        match (&input.generators, &input.cosets) {
            (Some(gens), None) => {
                let mats = gens.iter().map(|m| matrix(m)).collect::<Result<Vec<_>, _>>()?;
                if let Some(r) = input.rank {
                    if mats.iter().any(|m| m.rows() != r || m.cols() != r) {
                        return Err(CliError::Schema(format!("lattice {} has matrices of the wrong size", input.name)));
                    }
                }
                if self.group.generators().is_empty() {
                    let r = input.rank.ok_or_else(|| CliError::Schema("trivial group needs a rank".into()))?;
                    return Ok((GLattice::trivial(self.group.clone(), r), None));
                }
                Ok((make_lattice(self.group.clone(), mats)?, None))
            }
            (None, Some(subs)) => {
                let mut parts = Vec::new();
                for gens in subs {
                    let elems = gens.iter().map(|c| self.element(c)).collect::<Result<Vec<_>, _>>()?;
                    let sub = Subgroup::from_generators(&self.group, &elems);
                    parts.push(coset_lattice(&self.group, &sub));
                }
                let mut iter = parts.into_iter();
                let (mut lattice, mut cert) =
                    iter.next().ok_or_else(|| CliError::Schema("empty coset list".into()))?;
                for (l, c) in iter {
                    let offset = lattice.rank();
                    lattice = lattice.direct_sum(&l)?;
                    let perms = cert
                        .generator_perms
                        .iter()
                        .zip(&c.generator_perms)
                        .map(|(a, b)| {
                            let mut images = a.images().to_vec();
                            images.extend(b.images().iter().map(|&i| i + offset));
                            Permutation::new(images)
                        })
                        .collect::<stablin::Result<Vec<_>>>()?;
                    cert = PermCertificate {
                        basis: cert.basis.block_diag(&c.basis),
                        generator_perms: perms,
                    };
                }
                Ok((lattice, Some(cert)))
            }
            _ => Err(CliError::Schema(format!(
                "lattice {} needs exactly one of generators or cosets",
                input.name
            ))),
        }
    }

    pub fn map(&self, name: Option<&str>) -> Result<(String, GMap), CliError> {
        let input = match name {
            Some(n) => self
                .doc
                .maps
                .iter()
                .find(|m| m.name == n)
                .ok_or_else(|| CliError::Schema(format!("no map named {n}")))?,
            None => self
                .doc
                .maps
                .first()
                .ok_or_else(|| CliError::Schema("document has no maps".into()))?,
        };
        let (_, source) = self.lattice(Some(&input.source))?;
        let (_, target) = self.lattice(Some(&input.target))?;
        Ok((input.name.clone(), GMap::new(source, target, matrix(&input.matrix)?)?))
    }

    pub fn projective_actions(&self, modulus: Option<u64>) -> Result<Vec<(String, ProjectiveAction)>, CliError> {
        if self.doc.projective.is_empty() {
            return Err(CliError::Schema("document has no projective actions".into()));
        }
        self.doc
            .projective
            .iter()
            .map(|p| {
                let gens = p
                    .generators
                    .iter()
                    .map(|m| cyclo_matrix(p.conductor, m))
                    .collect::<Result<Vec<_>, _>>()?;
                let action =
                    ProjectiveAction::from_generator_lifts(self.group.clone(), gens, modulus.or(p.modulus))?;
                Ok((p.name.clone(), action))
            })
            .collect()
    }

    pub fn cox(&self) -> Result<CoxSpec, CliError> {
        let c = self
            .doc
            .cox
            .as_ref()
            .ok_or_else(|| CliError::Schema("document has no cox section".into()))?;
        let relations = c
            .relations
            .iter()
            .map(|r| MultiPoly::parse(r, &c.vars))
            .collect::<stablin::Result<Vec<_>>>()?;
        Ok(CoxSpec::new(
            c.vars.clone(),
            c.weights.clone(),
            relations,
            MonomialMap::identity(&c.vars),
            c.torus.clone(),
        )?)
    }

    pub fn lift_specs(&self, cox: &CoxSpec) -> Result<Vec<GeneratorLiftSpec>, CliError> {
        let n = cox.variables.len();
        self.doc
            .lift
            .iter()
            .map(|s| {
                Ok(GeneratorLiftSpec {
                    permutation: Permutation::from_cycles(&s.permutation, n)?,
                    signs: s.signs.clone(),
                    torus_action: s.torus.as_ref().map(|t| TorusAction {
                        exponents: t.exponents.clone(),
                        signs: t.signs.clone(),
                    }),
                    sign_support: s.sign_support.clone(),
                })
            })
            .collect()
    }

    pub fn automorphism(&self) -> Result<(GroupHom, Option<usize>), CliError> {
        let t = self
            .doc
            .twist
            .as_ref()
            .ok_or_else(|| CliError::Schema("document has no twist section".into()))?;
        match (&t.images, &t.conjugate_by) {
            (Some(images), None) => {
                let imgs = images.iter().map(|c| self.element(c)).collect::<Result<Vec<_>, _>>()?;
                Ok((outer_twist(&self.group, &imgs)?, None))
            }
            (None, Some(c)) => {
                let g = self.element(c)?;
                let whole = Subgroup::whole(&self.group);
                let embedding: Vec<usize> = self.group.elements().collect();
                let hom = conjugation_automorphism(&self.group, &whole, &self.group, &embedding, g)?;
                Ok((hom, Some(g)))
            }
            _ => Err(CliError::Schema("twist needs exactly one of images or conjugate_by".into())),
        }
    }
}

fn build_group(g: &GroupInput, max_order: usize) -> Result<FiniteGroup, CliError> {
    match (&g.name, g.degree, &g.generators) {
        (Some(name), None, None) => {
            let spec = GroupSpec::parse(name)?;
            let order = spec.order().unwrap_or(usize::MAX);
            if order > max_order {
                return Err(CliError::Core(stablin::Error::CapExceeded { order, cap: max_order }));
            }
            Ok(named_group(&spec)?)
        }
        (None, Some(degree), Some(gens)) => {
            let perms = gens
                .iter()
                .map(|c| Permutation::from_cycles(c, degree))
                .collect::<stablin::Result<Vec<_>>>()?;
            Ok(close_generators_capped(degree, &perms, max_order)?)
        }
        _ => Err(CliError::Schema("group needs a name, or a degree with generators".into())),
    }
}

/// Parses a polynomial in `z` into `Q(zeta_m)`.
pub fn cyclo(m: u32, text: &str) -> Result<Cyclo, CliError> {
    let p = MultiPoly::parse(text, &["z"])?;
    let degree = p.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] += c;
    }
    Ok(Cyclo::from_coefficients(m, coeffs)?)
}

fn cyclo_matrix(m: u32, rows: &[Vec<String>]) -> Result<CycloMatrix, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Schema("projective generator is not square".into()));
    }
    let entries = rows.iter().flatten().map(|t| cyclo(m, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(CycloMatrix::new(m, n, entries)?)
}

pub fn signed_perm(input: &SignedPermInput) -> Result<SignedPerm, CliError> {
    Ok(SignedPerm::new(Permutation::new(input.images.clone())?, input.signs.clone())?)
}

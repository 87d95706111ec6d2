use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use stablin::cohomology::{h1, h2, tate};
use stablin::cyclo::{Cyclo, CycloMatrix};
use stablin::groups::{named_group, FiniteGroup, GroupSpec};
use stablin::lattice::{make_lattice, GLattice};
use stablin::linalg::{snf, IntMatrix};
use stablin::obstructions::{lifting_obstruction, ProjectiveAction};
use stablin::poly::{MonomialMap, MultiPoly};

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(named_group(&GroupSpec::parse(name).unwrap()).unwrap())
}

fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |xs| {
            IntMatrix::new(r, c, xs.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
        let mut p = MultiPoly::zero(&VARS);
        for (c, a, b, d) in terms {
            let m = MultiPoly::monomial(&VARS, BigRational::from_integer(c.into()), vec![a, b, d]).unwrap();
            p = p.add(&m).unwrap();
        }
        p
    })
}

// C2-lattices built from small blocks
fn c2_block() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop_oneof![
        Just(vec![vec![1]]),
        Just(vec![vec![-1]]),
        Just(vec![vec![0, 1], vec![1, 0]]),
    ]
}

fn block_sum(blocks: &[Vec<Vec<i64>>]) -> IntMatrix {
    blocks
        .iter()
        .map(|b| IntMatrix::from_rows(b))
        .reduce(|a, b| a.block_diag(&b))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_is_an_equivalence(a in small_matrix(4)) {
        let f = snf(&a);
        prop_assert!(f.u.is_unimodular());
        prop_assert!(f.v.is_unimodular());
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.s.clone());
        let d = f.diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j || i >= f.rank() {
                    prop_assert!(f.s.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn smith_diagonal_is_invariant_under_unimodular_change(a in small_matrix(3), k in -4i64..=4) {
        // elementary row and column operations
        let r = a.rows();
        let c = a.cols();
        let mut left = IntMatrix::identity(r);
        if r > 1 {
            left.set(0, r - 1, BigInt::from(k));
        }
        let mut right = IntMatrix::identity(c);
        if c > 1 {
            right.set(c - 1, 0, BigInt::from(-k));
        }
        prop_assert_eq!(snf(&left.mul(&a).mul(&right)).diagonal(), snf(&a).diagonal());
    }

    #[test]
    fn polynomial_ring_axioms(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        let distributed = p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(p.mul(&q.add(&r).unwrap()).unwrap(), distributed);
        prop_assert!(p.sub(&p).unwrap().is_zero());
        prop_assert_eq!(p.mul(&MultiPoly::one(&VARS)).unwrap(), p.clone());
    }

    #[test]
    fn substitution_is_multiplicative(p in small_poly(), q in small_poly(), shift in 0usize..3) {
        let images: Vec<String> = (0..3).map(|i| format!("{}*{}", VARS[(i + shift) % 3], VARS[(i + 1) % 3])).collect();
        let pairs: Vec<(&str, &str)> = VARS.iter().zip(&images).map(|(v, s)| (*v, s.as_str())).collect();
        let map = MonomialMap::parse(&pairs, &VARS).unwrap();
        let pq = p.mul(&q).unwrap().substitute(&map).unwrap();
        prop_assert_eq!(pq, p.substitute(&map).unwrap().mul(&q.substitute(&map).unwrap()).unwrap());
        let sum = p.add(&q).unwrap().substitute(&map).unwrap();
        prop_assert_eq!(sum, p.substitute(&map).unwrap().add(&q.substitute(&map).unwrap()).unwrap());
    }

    #[test]
    fn evaluation_respects_products(p in small_poly(), q in small_poly(), pt in prop::collection::vec(-6i64..=6, 3)) {
        let point: Vec<BigRational> = pt.into_iter().map(|x| BigRational::from_integer(x.into())).collect();
        let lhs = p.mul(&q).unwrap().evaluate(&point).unwrap();
        prop_assert_eq!(lhs, p.evaluate(&point).unwrap() * q.evaluate(&point).unwrap());
    }

    #[test]
    fn cohomology_is_additive(a in prop::collection::vec(c2_block(), 1..3), b in prop::collection::vec(c2_block(), 1..3)) {
        let g = group("C2");
        let m = make_lattice(g.clone(), vec![block_sum(&a)]).unwrap();
        let n = make_lattice(g.clone(), vec![block_sum(&b)]).unwrap();
        let s = m.direct_sum(&n).unwrap();
        prop_assert_eq!(h1(&s), h1(&m).direct_sum(&h1(&n)));
        prop_assert_eq!(h2(&s, 0).unwrap(), h2(&m, 0).unwrap().direct_sum(&h2(&n, 0).unwrap()));
        for degree in [-1, 0] {
            prop_assert_eq!(tate(&s, degree).unwrap(), tate(&m, degree).unwrap().direct_sum(&tate(&n, degree).unwrap()));
        }
    }

    #[test]
    fn cyclic_projective_actions_lift(n in 2usize..7, k in 0i64..12, c in 1i64..12) {
        // diag(1, n-th root) rescaled by an arbitrary root of unity
        let g = group(&format!("C{n}"));
        let m = 12 * n as u32;
        let step = (m as i64) / n as i64;
        let gen = CycloMatrix::new(m, 2, vec![
            Cyclo::zeta_pow(m, c).unwrap(),
            Cyclo::zero(m).unwrap(),
            Cyclo::zero(m).unwrap(),
            Cyclo::zeta_pow(m, c + step * k).unwrap(),
        ]).unwrap();
        let p = ProjectiveAction::from_generator_lifts(g, vec![gen], None).unwrap();
        let r = lifting_obstruction(&p).unwrap();
        prop_assert!(r.trivial);
        prop_assert_eq!(r.class_order, 1);
    }

    #[test]
    fn obstruction_class_ignores_rescaling(ks in prop::collection::vec(0i64..24, 4)) {
        let g = group("C2xC2");
        let a = CycloMatrix::from_ints(12, &[vec![0, 1], vec![1, 0]]).unwrap();
        let b = CycloMatrix::from_ints(12, &[vec![-1, 0], vec![0, 1]]).unwrap();
        let p = ProjectiveAction::from_generator_lifts(g.clone(), vec![a, b], None).unwrap();
        let scaled: Vec<CycloMatrix> = p
            .lifts()
            .iter()
            .zip(&ks)
            .map(|(l, &k)| l.scale(&Cyclo::zeta_pow(12, k).unwrap()).unwrap())
            .collect();
        let q = ProjectiveAction::from_element_lifts(g, scaled, None).unwrap();
        let (r1, r2) = (lifting_obstruction(&p).unwrap(), lifting_obstruction(&q).unwrap());
        prop_assert_eq!((r1.trivial, r1.class_order), (r2.trivial, r2.class_order));
        prop_assert_eq!(r2.class_order, 2);
    }
}

#[test]
fn cyclotomic_inverse_roundtrip() {
    let m = 15;
    let mut x = Cyclo::from_int(m, 2).unwrap();
    for k in [1, 4, 7] {
        x = x.add(&Cyclo::zeta_pow(m, k).unwrap()).unwrap();
    }
    let inv = x.inverse().unwrap();
    assert!(x.mul(&inv).unwrap().is_one());
}

#[test]
fn trivial_lattice_h2_is_dual_abelianization() {
    let g = group("S3");
    let m = GLattice::trivial(g, 1);
    assert_eq!(h2(&m, 0).unwrap().factors_u64(), vec![2]);
}

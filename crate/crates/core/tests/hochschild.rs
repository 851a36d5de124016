mod common;

use common::*;
use formality_core::ainfty::*;
use formality_core::error::Error;
use formality_core::exactlin::{Field, Matrix, Scalar, Vector};
use formality_core::hochschild::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cochain(a: &AInftyStructure, total_degree: i64, arities: std::ops::RangeInclusive<usize>, seed: u64) -> Cochain {
    let s = a.space();
    let f = s.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Cochain::new(total_degree);
    for d in arities {
        for t in s.composable_tuples(d, &|_| true) {
            for o in s.outputs_for(&t, total_degree - d as i64) {
                if rng.gen_bool(0.4) {
                    c.component_mut(d).add_term(&t, o, &f.from_i64(rng.gen_range(-3..=3)));
                }
            }
        }
    }
    c.prune();
    c
}

#[test]
fn differential_agrees_with_dense_expansion() {
    let a = transport(&exterior(Field::Rational), &{
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        random_diffeo(exterior(Field::Rational).space_arc().clone(), &RandomDiffeoOptions::default(), 6, &mut rng).unwrap()
    })
    .unwrap();
    let b = random_cochain(&a, 1, 0..=3, 9);
    let db = differential(a.space(), a.mu(), &b, 4);
    for d in 0..=4 {
        for (t, r) in dense_delta_field(&a, &b, d) {
            let got = db.get(&t).cloned().unwrap_or_default();
            let expect: Vector = r.into_iter().enumerate().map(|(i, c)| (i as u32, c)).collect();
            assert_eq!(got, expect, "tuple {t:?}");
        }
    }
}

#[test]
fn delta_squared_vanishes() {
    let a = exterior(Field::Rational);
    for deg in 0..=2 {
        let c = random_cochain(&a, deg, 0..=3, 11 + deg as u64);
        let dd = differential(a.space(), a.mu(), &differential(a.space(), a.mu(), &c, 5), 5);
        assert!(dd.is_zero(), "degree {deg}");
    }
    assert!(differential(a.space(), a.mu(), &Cochain::new(1), 5).is_zero());
}

#[test]
fn euler_field_is_a_cocycle_and_scales_by_degree() {
    let a = exterior(Field::Rational);
    let e = euler_field(a.space());
    assert_eq!(e.get(&[0]), None);
    assert_eq!(e.get(&[3]), Some(&Vector::basis(3, q(2))));
    assert!(differential(a.space(), a.mu(), &e, 6).is_zero());
}

#[test]
fn euler_coefficient_on_higher_products() {
    // (δe)^d = (d - 2) μ^d on the μ³ example
    let a = mu3_example();
    let de = differential(a.space(), a.mu(), &euler_field(a.space()), 5);
    assert_eq!(de.restricted(|d| d == 3), a.mu().restricted(|d| d == 3));
}

#[test]
fn formal_algebra_recovers_euler_field() {
    let a = exterior(Field::Rational);
    let c = FieldConstraints::new(euler_map(a.space()), 2..=10, 6);
    let (b, rep) = find_nc_field(&a, &c).unwrap();
    assert!(b.certified);
    assert_eq!(b.field, euler_field(a.space()));
    assert_eq!(rep.unknowns, 0);
    assert!(purity_check(&a, &b.field).is_ok());
}

#[test]
fn transported_algebra_has_field_linear_below_k() {
    let base = exterior(Field::Rational);
    for k in 2..=3usize {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let phi = random_diffeo(
            base.space_arc().clone(),
            &RandomDiffeoOptions { arities: k..=k, density: 0.6, ..Default::default() },
            6,
            &mut rng,
        )
        .unwrap();
        let a = transport(&base, &phi).unwrap();
        for mode in [SearchMode::Full, SearchMode::Local] {
            let c = FieldConstraints::new(euler_map(a.space()), 2..k, 6).with_mode(mode);
            let (b, rep) = find_nc_field(&a, &c).unwrap();
            assert!(b.certified);
            assert!(purity_check(&a, &b.field).is_ok());
            assert!((2..k).all(|s| b.field.component(s).is_none()));
            if mode == SearchMode::Full {
                assert!(rep.affine_dim.is_some());
            }
        }
        // pushforward of the Euler field is another pure cocycle
        let pushed = pushforward(&phi, &euler_field(base.space()), 6).unwrap();
        assert!(certify_field(&a, pushed.clone(), 6).is_ok());
        assert!(purity_check(&a, &pushed).is_ok());
    }
}

#[test]
fn purity_rejects_scaled_euler() {
    let a = exterior(Field::Rational);
    let twice = euler_field(a.space()).scaled(&q(2));
    match purity_check(&a, &twice) {
        Err(PurityFailure::LinearPart(diffs)) => assert_eq!(diffs.len(), 3),
        other => panic!("unexpected {other:?}"),
    }
}

/// Dense oracle: unknowns are all `b^s` coefficients for `2 ≤ s < n`, rows every
/// coefficient of `(δb)^d`, `d ≤ n`, assembled by evaluating `δ` on single-entry cochains.
fn dense_field_system(a: &AInftyStructure, n: usize) -> (usize, bool, usize) {
    let s = a.space();
    let f = s.field();
    let e = euler_field(s);
    let mut cols: Vec<Cochain> = Vec::new();
    for d in 2..n {
        for t in s.composable_tuples(d, &|_| true) {
            for o in s.outputs_for(&t, 1 - d as i64) {
                let mut c = Cochain::new(1);
                c.component_mut(d).add_term(&t, o, &f.one());
                cols.push(c);
            }
        }
    }
    let flatten = |c: &Cochain| -> Vec<Scalar> {
        let mut v = Vec::new();
        for d in 0..=n {
            for (_, r) in dense_delta_field(a, c, d) {
                v.extend(r);
            }
        }
        v
    };
    let rhs: Vec<Scalar> = flatten(&e).into_iter().map(|x| -x).collect();
    let col_vals: Vec<Vec<Scalar>> = cols.iter().map(flatten).collect();
    let rows = rhs.len();
    let m = cols.len();
    let mut aug = Matrix::zeros(f, rows, m + 1);
    let mut plain = Matrix::zeros(f, rows, m);
    for (j, cv) in col_vals.iter().enumerate() {
        for (i, x) in cv.iter().enumerate() {
            aug.set(i, j, x.clone());
            plain.set(i, j, x.clone());
        }
    }
    for (i, x) in rhs.iter().enumerate() {
        aug.set(i, m, x.clone());
    }
    let r = plain.rank();
    (m, aug.rank() == r, m - r)
}

#[test]
fn mu3_example_has_no_pure_field_and_dense_oracle_agrees() {
    let a = mu3_example().with_max_arity(4).unwrap();
    let c = FieldConstraints::new(euler_map(a.space()), [], 4);
    let found = find_nc_field(&a, &c);
    let (_, consistent, _) = dense_field_system(&a, 4);
    assert!(!consistent);
    assert!(matches!(found, Err(Error::NoSolution(_))));
    let local = find_nc_field(&a, &c.clone().with_mode(SearchMode::Local));
    assert!(matches!(local, Err(Error::NoSolution(_))));
}

#[test]
fn full_search_dimension_matches_dense_oracle() {
    let base = exterior(Field::Rational);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let phi = random_diffeo(base.space_arc().clone(), &RandomDiffeoOptions::default(), 4, &mut rng).unwrap();
    let a = transport(&base.with_max_arity(4).unwrap(), &phi).unwrap();
    let (b, rep) = find_nc_field(&a, &FieldConstraints::new(euler_map(a.space()), [], 4)).unwrap();
    let (unknowns, consistent, affine) = dense_field_system(&a, 4);
    assert!(consistent);
    assert_eq!(rep.unknowns, unknowns);
    assert_eq!(rep.affine_dim, Some(affine));
    for d in 0..=4 {
        assert!(dense_delta_field(&a, &b.field, d).iter().all(|(_, r)| r.iter().all(|x| x.is_zero())));
    }
}

#[test]
fn prime_field_euler_uses_residues() {
    let a = exterior(Field::Prime(2));
    let e = euler_map(a.space());
    // degree 2 reduces to 0 mod 2
    assert_eq!(e.get(&[3]), None);
    assert_eq!(e.get(&[1]), Some(&Vector::basis(1, Field::Prime(2).one())));
}

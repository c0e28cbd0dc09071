use std::collections::HashSet;

use manypts::{
    enumerate_class_group, normalize_model, CurveModel, Fe, Field, InfinityType, Jacobian, Poly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_model(k: &Field, rng: &mut ChaCha8Rng) -> Option<CurveModel> {
    let q = k.order();
    let mut rand_poly =
        |deg: usize| Poly::from_coeffs((0..=deg).map(|_| Fe(rng.gen_range(0..q))).collect());
    let (h, f) = if k.characteristic() == 2 {
        (rand_poly(3), rand_poly(6))
    } else {
        (Poly::zero(), rand_poly(6))
    };
    let c = CurveModel::new_unchecked(k.clone(), h, f);
    c.validate_genus2().ok()?.then_some(c)
}

/// Group axioms on random triples, on the model as given unless it needs the y-shift.
fn check_direct(c: &CurveModel, rng: &mut ChaCha8Rng) {
    let jac = match Jacobian::new(c) {
        Ok(j) => j,
        Err(_) => Jacobian::new(&normalize_model(c).unwrap().model).unwrap(),
    };
    let c = jac.model();
    let els = jac.enumerate();
    assert_eq!(els.len() as u64, c.class_number().unwrap(), "{c}");
    let set: HashSet<_> = els.iter().cloned().collect();
    let id = jac.identity();
    assert!(set.contains(&id));
    for _ in 0..40 {
        let a = &els[rng.gen_range(0..els.len())];
        let b = &els[rng.gen_range(0..els.len())];
        let e = &els[rng.gen_range(0..els.len())];
        assert!(jac.is_valid(a), "{c}: {a:?}");
        let ab = jac.add(a, b);
        assert!(set.contains(&ab), "{c}: {a:?} + {b:?} = {ab:?}");
        assert_eq!(ab, jac.add(b, a), "{c}");
        assert_eq!(jac.add(&ab, e), jac.add(a, &jac.add(b, e)), "{c}");
        assert_eq!(jac.add(a, &id), *a);
        assert_eq!(jac.add(a, &jac.neg(a)), id, "{c}: {a:?}");
        assert_eq!(jac.mul(a, els.len() as i64), id, "{c}");
    }
    // Abel-Jacobi: P -> [P - O] is injective on rational places (genus > 0)
    let places = c.rational_places();
    if let Some(o) = places.first() {
        if jac.infinity_type() != InfinityType::Inert || !o.is_infinite() {
            let imgs: HashSet<_> = places
                .iter()
                .map(|p| jac.place_difference(p, o).unwrap())
                .collect();
            assert_eq!(imgs.len(), places.len(), "{c}");
        }
    }
}

#[test]
fn random_models_satisfy_group_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut seen = [0usize; 3];
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let k = Field::with_order(q).unwrap();
        let mut done = 0;
        while done < 60 {
            let Some(c) = random_model(&k, &mut rng) else {
                continue;
            };
            seen[c.infinity_type() as usize] += 1;
            check_direct(&c, &mut rng);
            done += 1;
        }
    }
    assert!(seen.iter().all(|&n| n > 30), "{seen:?}");
}

#[test]
fn structure_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [3u32, 4, 5, 7] {
        let k = Field::with_order(q).unwrap();
        let mut done = 0;
        while done < 25 {
            let Some(c) = random_model(&k, &mut rng) else {
                continue;
            };
            let cg = enumerate_class_group(&c).unwrap();
            let jac = cg.jacobian();
            let els = cg.elements();
            for _ in 0..50 {
                let a = &els[rng.gen_range(0..els.len())];
                let b = &els[rng.gen_range(0..els.len())];
                let s = cg.structure();
                let want = s.add(cg.to_vector(a).unwrap(), cg.to_vector(b).unwrap());
                assert_eq!(
                    cg.to_vector(&jac.add(a, b)).unwrap(),
                    want.as_slice(),
                    "{c}"
                );
            }
            let gens: Vec<Vec<i64>> = cg
                .generators()
                .iter()
                .map(|g| cg.to_vector(g).unwrap().to_vec())
                .collect();
            for (i, g) in gens.iter().enumerate() {
                assert!(g.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
            }
            // place differences agree between the input model and its normal form
            let places = c.rational_places();
            if places.len() >= 2 {
                let o = &places[0];
                let imgs: HashSet<_> = places
                    .iter()
                    .map(|p| cg.class_of_place_difference(p, o).unwrap())
                    .collect();
                assert_eq!(imgs.len(), places.len(), "{c}");
            }
            done += 1;
        }
    }
}

use arrcore::fixtures;
use arrcore::os::{OSAlgebra, OSElement};
use arrcore::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_element(rng: &mut ChaCha8Rng, alg: &OSAlgebra, p: usize) -> OSElement {
    let v: Vec<Scalar> = (0..alg.dim(p)).map(|_| Scalar::int(rng.gen_range(-3..=3))).collect();
    alg.from_vector(p, &v)
}

#[test]
fn associative_and_graded_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for arr in fixtures::all() {
        let alg = OSAlgebra::new(&arr);
        let top = alg.top_degree();
        for _ in 0..100 {
            let (p, q, s) = (rng.gen_range(0..=top), rng.gen_range(0..=top), rng.gen_range(0..=top));
            let x = random_element(&mut rng, &alg, p);
            let y = random_element(&mut rng, &alg, q);
            let z = random_element(&mut rng, &alg, s);
            let left = alg.multiply(&alg.multiply(&x, &y), &z);
            let right = alg.multiply(&x, &alg.multiply(&y, &z));
            assert_eq!(left, right);
            let sign = Scalar::int(if p * q % 2 == 1 { -1 } else { 1 });
            assert_eq!(alg.multiply(&x, &y), alg.multiply(&y, &x).scale(&sign));
        }
    }
}

#[test]
fn generators_square_to_zero_and_vectors_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let alg = OSAlgebra::new(&fixtures::braid());
    for j in 1..=alg.n() {
        let g = OSElement::generator(j);
        assert!(alg.multiply(&g, &g).is_zero());
    }
    for p in 0..=alg.top_degree() {
        let x = random_element(&mut rng, &alg, p);
        assert_eq!(alg.from_vector(p, &alg.to_vector(&x, p)), x);
    }
}

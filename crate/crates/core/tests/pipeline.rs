use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uniserial::lie::format::{parse_representation, render_representation};
use uniserial::lie::{
    build_char_zero, classify, is_isomorphic, Generator, ModuleSpecCharZero, SolvableAlgebra, SpecSpace,
};
use uniserial::normal::extract_normal_form;
use uniserial::{Field, Matrix};

// every spec, hidden behind a random change of basis, comes back to the same
// invariants and normal form
#[test]
fn scrambled_modules_normalize_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, m, weights) in [
        (2, 4, &[(1, 1), (0, 1)][..]),
        (3, 4, &[(1, 1)][..]),
        (5, 3, &[(1, 1), (2, 1)][..]),
    ] {
        let field = Field::prime(p).unwrap();
        let g = SolvableAlgebra::from_i64(field, weights).unwrap();
        let space = SpecSpace::new(&g, m).unwrap();
        for index in 0..space.size() {
            let rep = space.spec(&space.point(index)).build(&g).unwrap();
            let scrambled = rep
                .conjugate_by(&Matrix::random_invertible(field, m, &mut rng))
                .unwrap();
            assert_eq!(classify(&scrambled).unwrap(), classify(&rep).unwrap());
            let (a, b) = (
                extract_normal_form(&rep).unwrap(),
                extract_normal_form(&scrambled).unwrap(),
            );
            assert_eq!(a.y, b.y);
            assert_eq!(a.operator_polys, b.operator_polys);
            let back = scrambled.conjugate_by(&b.basis_change).unwrap();
            assert_eq!(back.x(), &b.x_matrix());
            assert!(is_isomorphic(&rep, &scrambled).unwrap());
        }
    }
}

#[test]
fn text_round_trip_preserves_invariants() {
    let field = Field::RATIONALS;
    let g = SolvableAlgebra::from_i64(field, &[(1, 1), (0, 1), (2, 1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = ModuleSpecCharZero {
        m: 4,
        alpha: field.fraction(2, 3).unwrap(),
        v: Generator::U {
            weight: g.weight_index(&field.one()).unwrap(),
            slot: 0,
        },
        functionals: vec![
            vec![field.one()],
            vec![field.from_i64(-4)],
            vec![field.fraction(1, 7).unwrap()],
        ],
    };
    let rep = build_char_zero(&spec, &g).unwrap();
    let scrambled = rep
        .conjugate_by(&Matrix::random_invertible(field, 4, &mut rng))
        .unwrap();
    let parsed = parse_representation(&render_representation(&scrambled)).unwrap();
    assert_eq!(parsed, scrambled);
    assert_eq!(classify(&parsed).unwrap(), classify(&rep).unwrap());
}

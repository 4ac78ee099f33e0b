//! The unipotent group `G = {I + f(J)}` acting by conjugation on
//! `𝒴 = D + J F[J]`, where `D = diag(α, α-1, ..., α-(m-1))`.
//!
//! Everything here is coefficient arithmetic in `F[J]`. Matrices are only
//! built by [`act`], which conjugates explicitly and is the cross-check for
//! the symbolic routes ([`conjugate_d_by_unipotent`], [`push_forward_coeffs`],
//! [`canonicalize`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::jordan::TruncPoly;
use crate::matrix::Matrix;

/// `D + sum_{k>=1} c_k J^k`, stored as `(α, c_1, ..., c_{m-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassY {
    alpha: Scalar,
    c: Vec<Scalar>,
}

impl ClassY {
    pub fn new(alpha: Scalar, c: Vec<Scalar>) -> Result<ClassY> {
        let field = alpha.field();
        if let Some(bad) = c.iter().find(|s| s.field() != field) {
            return Err(Error::MixedFields(field, bad.field()));
        }
        Ok(ClassY { alpha, c })
    }

    /// `D` itself.
    pub fn diagonal(alpha: Scalar, m: usize) -> ClassY {
        assert!(m >= 1);
        let zero = alpha.field().zero();
        ClassY {
            alpha,
            c: vec![zero; m - 1],
        }
    }

    /// `D + f(J)` for constant-free `f`.
    pub fn from_offset(alpha: Scalar, f: &TruncPoly) -> Result<ClassY> {
        if !f.is_constant_free() {
            return Err(Error::ConstantTermPresent);
        }
        ClassY::new(alpha, f.coeffs()[1..].to_vec())
    }

    /// Reads `Y` back from a matrix, failing with [`Error::NotInCentralizer`]
    /// when `Y - D` is not in `J F[J]`.
    pub fn from_matrix(y: &Matrix) -> Result<ClassY> {
        let m = y.rows();
        let alpha = y.get(0, 0).clone();
        let d = Matrix::shifted_diagonal(m, &alpha);
        let f = TruncPoly::centralizer_decompose(&y.checked_sub(&d)?, m)?;
        ClassY::from_offset(alpha, &f)
    }

    pub fn field(&self) -> Field {
        self.alpha.field()
    }

    pub fn m(&self) -> usize {
        self.c.len() + 1
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    /// `(c_1, ..., c_{m-1})`.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    /// The constant-free `f` with `Y = D + f(J)`.
    pub fn offset(&self) -> TruncPoly {
        let mut coeffs = vec![self.field().zero()];
        coeffs.extend_from_slice(&self.c);
        TruncPoly::new(self.field(), coeffs).expect("nonempty")
    }

    pub fn to_matrix(&self) -> Matrix {
        &Matrix::shifted_diagonal(self.m(), &self.alpha) + &self.offset().eval_on_jordan()
    }

    /// Element of `D + F[J^p]J`: `c_k = 0` whenever `p ∤ k`. In characteristic
    /// 0 (or when `p >= m`) only `D` qualifies.
    pub fn is_canonical(&self) -> bool {
        let p = self.field().characteristic() as usize;
        self.c
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || (p != 0 && (i + 1) % p == 0))
    }

    /// `alpha; c_1,...,c_{m-1}`.
    pub fn render(&self) -> String {
        let cs: Vec<String> = self.c.iter().map(ToString::to_string).collect();
        format!("{}; {}", self.alpha, cs.join(","))
    }

    pub fn parse(field: Field, text: &str) -> Result<ClassY> {
        let (alpha, rest) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected 'alpha; c_1,...', got {text:?}")))?;
        let alpha = field.parse_scalar(alpha)?;
        let rest = rest.trim();
        let c = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|s| field.parse_scalar(s))
                .collect::<Result<Vec<_>>>()?
        };
        ClassY::new(alpha, c)
    }

    /// Field header line followed by [`ClassY::render`].
    pub fn to_text(&self) -> String {
        format!("F={}\n{}\n", self.field(), self.render())
    }

    pub fn from_text(text: &str) -> Result<ClassY> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing field header".into()))?;
        let field: Field = header.parse()?;
        let body = lines.next().ok_or_else(|| Error::Parse("missing class line".into()))?;
        ClassY::parse(field, body)
    }
}

impl fmt::Display for ClassY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `I + f(J)` with `f` constant-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnipotentUnit {
    poly: TruncPoly,
}

impl UnipotentUnit {
    pub fn new(poly: TruncPoly) -> Result<UnipotentUnit> {
        if !poly.coeff(0).is_one() {
            return Err(Error::NotUnipotentUnit);
        }
        Ok(UnipotentUnit { poly })
    }

    pub fn identity(field: Field, m: usize) -> UnipotentUnit {
        UnipotentUnit {
            poly: TruncPoly::one(field, m),
        }
    }

    /// `(I - a_1 J)(I - a_2 J^2)...(I - a_{m-1} J^{m-1})`.
    pub fn from_factors(field: Field, a: &[Scalar]) -> UnipotentUnit {
        let m = a.len() + 1;
        let mut acc = TruncPoly::one(field, m);
        for (i, ad) in a.iter().enumerate() {
            if ad.is_zero() {
                continue;
            }
            let factor = &TruncPoly::one(field, m) - &TruncPoly::monomial(field, m, i + 1).scale(ad);
            acc = &acc * &factor;
        }
        UnipotentUnit { poly: acc }
    }

    pub fn poly(&self) -> &TruncPoly {
        &self.poly
    }

    pub fn m(&self) -> usize {
        self.poly.m()
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn to_matrix(&self) -> Matrix {
        self.poly.eval_on_jordan()
    }

    pub fn compose(&self, other: &UnipotentUnit) -> UnipotentUnit {
        UnipotentUnit {
            poly: &self.poly * &other.poly,
        }
    }

    pub fn inverse(&self) -> UnipotentUnit {
        UnipotentUnit {
            poly: self.poly.unipotent_inverse().expect("constant term is 1"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.poly == TruncPoly::one(self.field(), self.m())
    }

    /// Every element of `G` over a prime field, `p^{m-1}` of them.
    pub fn all(field: Field, m: usize) -> Option<Vec<UnipotentUnit>> {
        let elems: Vec<Scalar> = field.elements()?.collect();
        let p = elems.len();
        let count = p.checked_pow(m as u32 - 1)?;
        Some(
            (0..count)
                .map(|mut code| {
                    let mut coeffs = vec![field.one()];
                    for _ in 1..m {
                        coeffs.push(elems[code % p].clone());
                        code /= p;
                    }
                    UnipotentUnit {
                        poly: TruncPoly::new(field, coeffs).expect("nonempty"),
                    }
                })
                .collect(),
        )
    }
}

fn check_size(t: &UnipotentUnit, y: &ClassY) -> Result<()> {
    if t.m() != y.m() {
        return Err(Error::DimensionMismatch(format!(
            "unit of order {} acting on class of order {}",
            t.m(),
            y.m()
        )));
    }
    if t.field() != y.field() {
        return Err(Error::MixedFields(t.field(), y.field()));
    }
    Ok(())
}

/// `T^{-1} Y T`, computed with explicit matrices. The result is read back as
/// a [`ClassY`], so closure of `𝒴` under `G` is checked on every call.
pub fn act(t: &UnipotentUnit, y: &ClassY) -> Result<ClassY> {
    check_size(t, y)?;
    let tm = t.to_matrix();
    let conj = tm.inverse()?.checked_mul(&y.to_matrix())?.checked_mul(&tm)?;
    let out = ClassY::from_matrix(&conj)?;
    debug_assert_eq!(out.alpha(), y.alpha());
    Ok(out)
}

/// `(I - g(J))^{-1} D (I - g(J)) = D - (I + g + ... + g^{m-1}) g'(J) J`,
/// evaluated in `F[J]` without forming any matrix.
pub fn conjugate_d_by_unipotent(alpha: &Scalar, g: &TruncPoly) -> Result<ClassY> {
    if !g.is_constant_free() {
        return Err(Error::ConstantTermPresent);
    }
    let field = g.field();
    let m = g.m();
    let mut geometric = TruncPoly::one(field, m);
    let mut power = TruncPoly::one(field, m);
    for _ in 1..m {
        power = &power * g;
        geometric = &geometric + &power;
    }
    let correction = (&geometric * &g.formal_derivative()).shift_up();
    ClassY::from_offset(alpha.clone(), &-&correction)
}

/// `b_k = sum_{d | k} d a_d^{k/d}` for `1 <= k < m`, so that conjugating `D`
/// by `T = prod_d (I - a_d J^d)` gives `D - sum_k b_k J^k`.
pub fn push_forward_coeffs(field: Field, a: &[Scalar]) -> Vec<Scalar> {
    (1..=a.len())
        .map(|k| {
            (1..=k).filter(|d| k % d == 0).fold(field.zero(), |acc, d| {
                let term = &field.from_u64(d as u64) * &a[d - 1].pow((k / d) as u64);
                acc + term
            })
        })
        .collect()
}

/// The unique `(a_1, ..., a_{m-1})` with
/// `T = (I - a_1 J)(I - a_2 J^2)...(I - a_{m-1} J^{m-1})`, peeled off degree
/// by degree.
pub fn factor_unipotent(t: &UnipotentUnit) -> Vec<Scalar> {
    let field = t.field();
    let m = t.m();
    let mut rest = t.poly.clone();
    let mut a = Vec::with_capacity(m.saturating_sub(1));
    for d in 1..m {
        // rest = 1 + O(X^d) here
        let ad = -rest.coeff(d);
        if !ad.is_zero() {
            let factor = &TruncPoly::one(field, m) - &TruncPoly::monomial(field, m, d).scale(&ad);
            rest = &rest * &factor.unipotent_inverse().expect("unit");
        }
        a.push(ad);
    }
    debug_assert_eq!(rest, TruncPoly::one(field, m));
    a
}

/// Generators `I + J^{pk}` of the common stabilizer of every `Y ∈ 𝒴`; empty
/// in characteristic 0 or when `p >= m`.
pub fn stabilizer_basis(field: Field, m: usize) -> Vec<UnipotentUnit> {
    let p = field.characteristic() as usize;
    if p == 0 {
        return Vec::new();
    }
    (p..m)
        .step_by(p)
        .map(|k| UnipotentUnit {
            poly: &TruncPoly::one(field, m) + &TruncPoly::monomial(field, m, k),
        })
        .collect()
}

/// Transporter factors `a` taking `Y` to its canonical representative.
///
/// For `d` coprime to `p` (every `d` in characteristic 0), in increasing
/// order, `a_d` is chosen so that `b_d = c_d`; the rest stay 0, their terms
/// `d a_d^{k/d}` vanish anyway.
pub fn canonical_factors(y: &ClassY) -> Vec<Scalar> {
    let field = y.field();
    let p = field.characteristic() as usize;
    let n = y.c.len();
    let mut a = vec![field.zero(); n];
    for k in 1..=n {
        if p != 0 && k % p == 0 {
            continue;
        }
        let partial = (1..k).filter(|d| k % d == 0).fold(field.zero(), |acc, d| {
            acc + &field.from_u64(d as u64) * &a[d - 1].pow((k / d) as u64)
        });
        let kk = field.from_u64(k as u64);
        a[k - 1] = (&y.c[k - 1] - &partial).checked_div(&kk).expect("k is a unit");
    }
    a
}

/// `(Y_can, T)` with `act(T, Y) = Y_can` and `Y_can ∈ D + F[J^p]J`
/// (`Y_can = D` in characteristic 0 or when `p >= m`).
pub fn canonicalize(y: &ClassY, p: u64) -> Result<(ClassY, UnipotentUnit)> {
    let field = y.field();
    if field.characteristic() != p {
        return Err(Error::CharacteristicMismatch {
            expected: field.characteristic(),
            got: p,
        });
    }
    let a = canonical_factors(y);
    let b = push_forward_coeffs(field, &a);
    let c = y.c.iter().zip(&b).map(|(c, b)| c - b).collect();
    let can = ClassY {
        alpha: y.alpha.clone(),
        c,
    };
    debug_assert!(can.is_canonical());
    Ok((can, UnipotentUnit::from_factors(field, &a)))
}

/// Whether two canonical representatives label different `G`-orbits.
pub fn orbits_distinct(y1: &ClassY, y2: &ClassY, p: u64) -> Result<bool> {
    for y in [y1, y2] {
        if y.field().characteristic() != p {
            return Err(Error::CharacteristicMismatch {
                expected: y.field().characteristic(),
                got: p,
            });
        }
        if !y.is_canonical() {
            return Err(Error::NotCanonical);
        }
    }
    Ok(y1 != y2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::RATIONALS;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn ints(field: Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| field.from_i64(x)).collect()
    }

    fn class(field: Field, alpha: i64, c: &[i64]) -> ClassY {
        ClassY::new(field.from_i64(alpha), ints(field, c)).unwrap()
    }

    fn unit(field: Field, coeffs: &[i64]) -> UnipotentUnit {
        UnipotentUnit::new(TruncPoly::from_i64(field, coeffs)).unwrap()
    }

    #[test]
    fn act_examples() {
        let y = class(Q, 2, &[1, 0, 3]);
        assert_eq!(act(&UnipotentUnit::identity(Q, 4), &y).unwrap(), y);
        let d = ClassY::diagonal(Q.zero(), 4);
        let t = unit(Q, &[1, -1, 0, 0]);
        assert_eq!(act(&t, &d).unwrap(), class(Q, 0, &[-1, -1, -1]));
        assert!(act(&UnipotentUnit::identity(Q, 3), &d).is_err());
    }

    #[test]
    fn conj_formula_examples() {
        let zero = Q.zero();
        assert_eq!(
            conjugate_d_by_unipotent(&zero, &TruncPoly::zero(Q, 4)).unwrap(),
            ClassY::diagonal(zero.clone(), 4)
        );
        assert_eq!(
            conjugate_d_by_unipotent(&zero, &TruncPoly::monomial(Q, 4, 1)).unwrap(),
            class(Q, 0, &[-1, -1, -1])
        );
        let f2 = f(2);
        assert_eq!(
            conjugate_d_by_unipotent(&f2.zero(), &TruncPoly::monomial(f2, 4, 2)).unwrap(),
            ClassY::diagonal(f2.zero(), 4)
        );
        assert_eq!(
            conjugate_d_by_unipotent(&zero, &TruncPoly::one(Q, 4)),
            Err(Error::ConstantTermPresent)
        );
    }

    #[test]
    fn push_forward_examples() {
        assert_eq!(push_forward_coeffs(Q, &ints(Q, &[1, 0, 0])), ints(Q, &[1, 1, 1]));
        assert_eq!(push_forward_coeffs(Q, &ints(Q, &[0, 0, 0])), ints(Q, &[0, 0, 0]));
        let f2 = f(2);
        assert_eq!(push_forward_coeffs(f2, &ints(f2, &[1, 1, 1])), ints(f2, &[1, 1, 0]));
    }

    #[test]
    fn push_forward_matches_matrix_conjugation() {
        // direct conjugation of D by the factored T, exhaustive over F_2, m = 5
        let f2 = f(2);
        let d = ClassY::diagonal(f2.zero(), 5);
        for code in 0..16u32 {
            let a: Vec<Scalar> = (0..4).map(|i| f2.from_u64(((code >> i) & 1) as u64)).collect();
            let t = UnipotentUnit::from_factors(f2, &a);
            let got = act(&t, &d).unwrap();
            let b = push_forward_coeffs(f2, &a);
            let expected: Vec<Scalar> = b.iter().map(|x| -x).collect();
            assert_eq!(got.coeffs(), &expected[..]);
        }
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factor_unipotent(&UnipotentUnit::identity(Q, 3)), ints(Q, &[0, 0]));
        assert_eq!(factor_unipotent(&unit(Q, &[1, -1, 0])), ints(Q, &[1, 0]));
        let t = unit(Q, &[1, 1, 0]);
        let a = factor_unipotent(&t);
        assert_eq!(a, ints(Q, &[-1, 0]));
        assert_eq!(UnipotentUnit::from_factors(Q, &a), t);
    }

    #[test]
    fn stabilizers() {
        assert!(stabilizer_basis(Q, 4).is_empty());
        assert!(stabilizer_basis(f(5), 4).is_empty());
        let f2 = f(2);
        assert_eq!(stabilizer_basis(f2, 4), vec![unit(f2, &[1, 0, 1, 0])]);
        assert_eq!(stabilizer_basis(f2, 6).len(), 2);
    }

    #[test]
    fn stabilizer_by_exhaustion() {
        let f2 = f(2);
        let d = ClassY::diagonal(f2.zero(), 4);
        let fixers: Vec<UnipotentUnit> = UnipotentUnit::all(f2, 4)
            .unwrap()
            .into_iter()
            .filter(|t| act(t, &d).unwrap() == d)
            .collect();
        assert_eq!(fixers, vec![UnipotentUnit::identity(f2, 4), unit(f2, &[1, 0, 1, 0])]);
    }

    #[test]
    fn canonical_examples() {
        for field in [Q, f(2), f(3)] {
            let d = ClassY::diagonal(field.one(), 4);
            let (can, t) = canonicalize(&d, field.characteristic()).unwrap();
            assert_eq!(can, d);
            assert!(t.is_identity());
        }
        let y = class(Q, 3, &[2, -1, 5]);
        let (can, t) = canonicalize(&y, 0).unwrap();
        assert_eq!(can, ClassY::diagonal(Q.from_i64(3), 4));
        assert_eq!(act(&t, &y).unwrap(), can);

        let f2 = f(2);
        let y = class(f2, 0, &[1, 0, 0]);
        let (can, t) = canonicalize(&y, 2).unwrap();
        assert_eq!(can, class(f2, 0, &[0, 1, 0]));
        let expected_t = &TruncPoly::from_i64(f2, &[1, 1, 0, 0]) * &TruncPoly::from_i64(f2, &[1, 0, 0, 1]);
        assert_eq!(t.poly(), &expected_t);
        assert_eq!(canonical_factors(&y), ints(f2, &[1, 0, 1]));
        assert_eq!(act(&t, &y).unwrap(), can);
        assert_eq!(
            canonicalize(&y, 3),
            Err(Error::CharacteristicMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn orbit_distinctness() {
        let f2 = f(2);
        let d = ClassY::diagonal(f2.zero(), 4);
        let dj2 = class(f2, 0, &[0, 1, 0]);
        assert!(orbits_distinct(&d, &dj2, 2).unwrap());
        assert!(!orbits_distinct(&dj2, &dj2, 2).unwrap());
        assert_eq!(
            orbits_distinct(&d, &class(f2, 0, &[1, 0, 0]), 2),
            Err(Error::NotCanonical)
        );
    }

    #[test]
    fn text_format() {
        let y = class(f(5), 2, &[1, 0, 4]);
        assert_eq!(y.to_text(), "F=5\n2; 1,0,4\n");
        assert_eq!(ClassY::from_text(&y.to_text()).unwrap(), y);
        let single = ClassY::diagonal(Q.from_i64(7), 1);
        assert_eq!(ClassY::from_text(&single.to_text()).unwrap(), single);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn case() -> impl Strategy<Value = (Field, usize, u64)> {
            (
                prop_oneof![Just(Q), Just(f(2)), Just(f(3)), Just(f(5))],
                1usize..=6,
                any::<u64>(),
            )
        }

        fn random_unit(field: Field, m: usize, rng: &mut ChaCha8Rng) -> UnipotentUnit {
            let mut p = TruncPoly::random(field, m, rng);
            p.set_coeff(0, field.one());
            UnipotentUnit::new(p).unwrap()
        }

        fn random_class(field: Field, m: usize, rng: &mut ChaCha8Rng) -> ClassY {
            ClassY::from_offset(field.random(rng), &TruncPoly::random_constant_free(field, m, rng)).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn action_axioms((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let y = random_class(field, m, &mut rng);
                let s = random_unit(field, m, &mut rng);
                let t = random_unit(field, m, &mut rng);
                prop_assert_eq!(act(&UnipotentUnit::identity(field, m), &y).unwrap(), y.clone());
                prop_assert_eq!(act(&t, &act(&s, &y).unwrap()).unwrap(), act(&s.compose(&t), &y).unwrap());
            }

            #[test]
            fn canonicalize_transports_and_is_idempotent((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let y = random_class(field, m, &mut rng);
                let p = field.characteristic();
                let (can, t) = canonicalize(&y, p).unwrap();
                prop_assert!(can.is_canonical());
                prop_assert_eq!(act(&t, &y).unwrap(), can.clone());
                let (again, t2) = canonicalize(&can, p).unwrap();
                prop_assert_eq!(again, can);
                prop_assert!(t2.is_identity());
            }

            #[test]
            fn canonicalize_is_orbit_invariant((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let y = random_class(field, m, &mut rng);
                let s = random_unit(field, m, &mut rng);
                let p = field.characteristic();
                prop_assert_eq!(
                    canonicalize(&y, p).unwrap().0,
                    canonicalize(&act(&s, &y).unwrap(), p).unwrap().0
                );
            }

            #[test]
            fn factorization_recomposes((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let t = random_unit(field, m, &mut rng);
                let a = factor_unipotent(&t);
                prop_assert_eq!(UnipotentUnit::from_factors(field, &a), t);
            }

            #[test]
            fn class_text_roundtrip((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let y = random_class(field, m, &mut rng);
                prop_assert_eq!(ClassY::from_text(&y.to_text()).unwrap(), y);
            }
        }
    }
}

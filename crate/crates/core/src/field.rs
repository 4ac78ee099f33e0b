//! Exact scalars over a prime field `F_p` or the rationals.
//!
//! Every [`Scalar`] carries its [`Field`]. Arithmetic operators panic when the
//! fields differ or when dividing by zero; the `checked_*` methods report the
//! same conditions as [`Error`] values instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum FieldRepr {
    Prime(u32),
    Rationals,
}

/// Descriptor of the ground field: `F_p` for a prime `p`, or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field(FieldRepr);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    PrimeField,
    Rationals,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub const RATIONALS: Field = Field(FieldRepr::Rationals);

    /// `F_p`; primes are limited to 32 bits so products fit in `u64`.
    pub fn prime(p: u64) -> Result<Field> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(FieldRepr::Prime(p as u32)))
    }

    pub fn kind(&self) -> FieldKind {
        match self.0 {
            FieldRepr::Prime(_) => FieldKind::PrimeField,
            FieldRepr::Rationals => FieldKind::Rationals,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.0 {
            FieldRepr::Prime(p) => p as u64,
            FieldRepr::Rationals => 0,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0, FieldRepr::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// Image of an integer under the canonical map `Z -> F`.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.0 {
            FieldRepr::Prime(p) => {
                let v = n.rem_euclid(p as i64) as u32;
                Scalar(Repr::Mod { p, v })
            }
            FieldRepr::Rationals => Scalar(Repr::Rat(BigRational::from_integer(n.into()))),
        }
    }

    pub fn from_u64(&self, n: u64) -> Scalar {
        match self.0 {
            FieldRepr::Prime(p) => Scalar(Repr::Mod {
                p,
                v: (n % p as u64) as u32,
            }),
            FieldRepr::Rationals => Scalar(Repr::Rat(BigRational::from_integer(n.into()))),
        }
    }

    /// `num / den` in this field. Fails on a zero denominator, including a
    /// denominator divisible by `p`.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// All elements in residue order, for prime fields only.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar> + Clone> {
        match self.0 {
            FieldRepr::Prime(p) => Some((0..p).map(move |v| Scalar(Repr::Mod { p, v }))),
            FieldRepr::Rationals => None,
        }
    }

    /// Number of elements of a prime field, `None` for `Q`.
    pub fn order(&self) -> Option<u64> {
        match self.0 {
            FieldRepr::Prime(p) => Some(p as u64),
            FieldRepr::Rationals => None,
        }
    }

    /// Uniform element of `F_p`; over `Q` a small fraction with numerator in
    /// `[-9, 9]` and denominator in `[1, 5]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self.0 {
            FieldRepr::Prime(p) => Scalar(Repr::Mod {
                p,
                v: rng.random_range(0..p),
            }),
            FieldRepr::Rationals => {
                let num: i64 = rng.random_range(-9..=9);
                let den: i64 = rng.random_range(1..=5);
                Scalar(Repr::Rat(BigRational::new(num.into(), den.into())))
            }
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar {s:?} for {self}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        match self.0 {
            FieldRepr::Prime(p) => {
                let reduce = |n: &BigInt| n.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits in u32");
                let n = Scalar(Repr::Mod { p, v: reduce(&num) });
                let d = Scalar(Repr::Mod { p, v: reduce(&den) });
                n.checked_div(&d)
            }
            FieldRepr::Rationals => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(Repr::Rat(BigRational::new(num, den))))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            FieldRepr::Prime(p) => write!(f, "{p}"),
            FieldRepr::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `p`, `F_p`, `Fp` and `F=p` / `F=Q` header forms.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let s = s.strip_prefix("F=").unwrap_or(s);
        if s == "Q" || s == "0" {
            return Ok(Field::RATIONALS);
        }
        let digits = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')).unwrap_or(s);
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("bad field {s:?}")))?;
        Field::prime(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Mod { p: u32, v: u32 },
    Rat(BigRational),
}

/// An exact field element. Prime-field values are canonical residues in
/// `[0, p)`; rationals are kept in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self.0 {
            Repr::Mod { p, .. } => Field(FieldRepr::Prime(p)),
            Repr::Rat(_) => Field::RATIONALS,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Mod { v, .. } => *v == 0,
            Repr::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Mod { v, .. } => *v == 1,
            Repr::Rat(r) => r.is_one(),
        }
    }

    /// Residue `v` in `[0, p)` for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match self.0 {
            Repr::Mod { v, .. } => Some(v),
            Repr::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Mod { .. } => None,
        }
    }

    /// The integer `i` with `0 <= i < bound` whose image is `self`, if any.
    /// Over `F_p` the bound is capped at `p`, so any residue below the bound
    /// qualifies.
    pub fn as_small_integer(&self, bound: u64) -> Option<u64> {
        match &self.0 {
            Repr::Mod { v, .. } => ((*v as u64) < bound).then_some(*v as u64),
            Repr::Rat(r) => {
                if !r.is_integer() || r.is_negative() {
                    return None;
                }
                r.to_integer().to_u64().filter(|&i| i < bound)
            }
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::MixedFields(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Mod { p, v }, Repr::Mod { v: w, .. }) => Scalar(Repr::Mod {
                p: *p,
                v: ((*v as u64 + *w as u64) % *p as u64) as u32,
            }),
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a + b)),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Mod { p, v }, Repr::Mod { v: w, .. }) => Scalar(Repr::Mod {
                p: *p,
                v: ((*v as u64 * *w as u64) % *p as u64) as u32,
            }),
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a * b)),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Mod { p, v } => Scalar(Repr::Mod {
                p: *p,
                v: mod_pow(*v as u64, *p as u64 - 2, *p as u64) as u32,
            }),
            Repr::Rat(r) => Scalar(Repr::Rat(r.recip())),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Mod { p, v } => Scalar(Repr::Mod {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            }),
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Total order used for deterministic choices: residue order over `F_p`,
    /// `(numerator, denominator)` lexicographic over `Q`.
    pub fn field_cmp(&self, other: &Scalar) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Mod { v, .. }, Repr::Mod { v: w, .. }) => v.cmp(w),
            (Repr::Rat(a), Repr::Rat(b)) => (a.numer(), a.denom()).cmp(&(b.numer(), b.denom())),
            (Repr::Mod { .. }, Repr::Rat(_)) => Ordering::Less,
            (Repr::Rat(_), Repr::Mod { .. }) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field_cmp(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Mod { v, .. } => write!(f, "{v}"),
            Repr::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(s) => s,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn small_examples() {
        let f5 = f(5);
        assert_eq!(f5.from_i64(3) * f5.from_i64(4), f5.from_i64(2));
        let f7 = f(7);
        assert_eq!(f7.from_i64(3).inv().unwrap(), f7.from_i64(5));
        let q = Field::RATIONALS;
        let sum = q.fraction(1, 2).unwrap() + q.fraction(1, 3).unwrap();
        assert_eq!(sum, q.fraction(5, 6).unwrap());
        assert_eq!(sum.to_string(), "5/6");
    }

    #[test]
    fn characteristics() {
        assert_eq!(Field::RATIONALS.characteristic(), 0);
        assert_eq!(f(2).characteristic(), 2);
        assert_eq!(f(7).characteristic(), 7);
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn errors() {
        let a = f(5).one();
        let b = f(7).one();
        assert_eq!(a.checked_add(&b), Err(Error::MixedFields(f(5), f(7))));
        assert_eq!(a.checked_div(&f(5).zero()), Err(Error::DivisionByZero));
        assert_eq!(Field::RATIONALS.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(f(5).parse_scalar("1/5"), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverses_exhaustive() {
        for p in [2, 3, 5, 7, 11, 13] {
            let fp = f(p);
            for a in fp.elements().unwrap().skip(1) {
                assert!((a.inv().unwrap() * &a).is_one());
            }
        }
    }

    #[test]
    fn characteristic_kills_multiples() {
        for p in [2u64, 3, 5, 7] {
            let fp = f(p);
            for a in fp.elements().unwrap() {
                assert!((fp.from_u64(p) * a).is_zero());
            }
        }
    }

    #[test]
    fn parse_and_render() {
        let q = Field::RATIONALS;
        for s in ["0", "-3", "7/2", "-1/6"] {
            assert_eq!(q.parse_scalar(s).unwrap().to_string(), s);
        }
        assert_eq!(q.parse_scalar("4/2").unwrap().to_string(), "2");
        assert_eq!(f(7).parse_scalar("-1").unwrap().to_string(), "6");
        assert_eq!(f(7).parse_scalar("1/2").unwrap().to_string(), "4");
        assert_eq!("F=Q".parse::<Field>().unwrap(), q);
        assert_eq!("F_5".parse::<Field>().unwrap(), f(5));
        assert_eq!("F=3".parse::<Field>().unwrap(), f(3));
    }

    #[test]
    fn small_integer_lift() {
        assert_eq!(f(5).from_i64(3).as_small_integer(4), Some(3));
        assert_eq!(f(5).from_i64(3).as_small_integer(3), None);
        let q = Field::RATIONALS;
        assert_eq!(q.from_i64(2).as_small_integer(3), Some(2));
        assert_eq!(q.fraction(1, 2).unwrap().as_small_integer(3), None);
        assert_eq!(q.from_i64(-1).as_small_integer(3), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar(field: Field) -> impl Strategy<Value = Scalar> {
            match field.order() {
                Some(p) => (0..p).prop_map(move |v| field.from_u64(v)).boxed(),
                None => (-50i64..50, 1i64..20)
                    .prop_map(move |(n, d)| field.fraction(n, d).unwrap())
                    .boxed(),
            }
        }

        fn fields() -> impl Strategy<Value = Field> {
            prop_oneof![Just(Field::RATIONALS), Just(f(2)), Just(f(3)), Just(f(5)), Just(f(101)),]
        }

        fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
            fields().prop_flat_map(|fld| (scalar(fld), scalar(fld), scalar(fld)))
        }

        proptest! {
            #[test]
            fn ring_axioms((a, b, c) in triple()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert!((&a - &a).is_zero());
                if !a.is_zero() {
                    prop_assert!((&a * &a.inv().unwrap()).is_one());
                }
            }

            #[test]
            fn render_parse_roundtrip((a, _, _) in triple()) {
                prop_assert_eq!(a.field().parse_scalar(&a.to_string()).unwrap(), a);
            }
        }
    }
}

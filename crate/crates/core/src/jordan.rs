//! The algebra `F[J]`, `J = J_m(0)`, as polynomials truncated at degree `m`.
//!
//! `F[J]` is the full centralizer of `J` in `gl(m)`, so every operator that
//! commutes with `J` has a unique [`TruncPoly`] representative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// `sum_k c_k J^k` for `k < m`; `J^m = 0` is built into every product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TruncPoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<TruncPoly> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch("truncation order must be >= 1".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::MixedFields(field, bad.field()));
        }
        Ok(TruncPoly { field, coeffs })
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> TruncPoly {
        TruncPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect()).expect("nonempty coefficient list")
    }

    pub fn zero(field: Field, m: usize) -> TruncPoly {
        assert!(m >= 1);
        TruncPoly {
            field,
            coeffs: vec![field.zero(); m],
        }
    }

    pub fn one(field: Field, m: usize) -> TruncPoly {
        TruncPoly::monomial(field, m, 0)
    }

    /// `X^k`, which is zero once `k >= m`.
    pub fn monomial(field: Field, m: usize, k: usize) -> TruncPoly {
        let mut p = TruncPoly::zero(field, m);
        if k < m {
            p.coeffs[k] = field.one();
        }
        p
    }

    pub fn random<R: Rng + ?Sized>(field: Field, m: usize, rng: &mut R) -> TruncPoly {
        TruncPoly {
            field,
            coeffs: (0..m).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn random_constant_free<R: Rng + ?Sized>(field: Field, m: usize, rng: &mut R) -> TruncPoly {
        let mut p = TruncPoly::random(field, m, rng);
        p.coeffs[0] = field.zero();
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Truncation order.
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        assert_eq!(c.field(), self.field);
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_constant_free(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
    }

    fn check(&self, other: &TruncPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field, other.field));
        }
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch(format!(
                "truncation orders {} and {}",
                self.m(),
                other.m()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        Ok(TruncPoly {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        Ok(TruncPoly {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Product modulo `X^m`.
    pub fn checked_mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        let m = self.m();
        let mut out = TruncPoly::zero(self.field, m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..m - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> TruncPoly {
        TruncPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> TruncPoly {
        let mut base = self.clone();
        let mut acc = TruncPoly::one(self.field, self.m());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplication by `X` (that is, by `J`), dropping the top coefficient.
    pub fn shift_up(&self) -> TruncPoly {
        let mut coeffs = vec![self.field.zero()];
        coeffs.extend_from_slice(&self.coeffs[..self.m() - 1]);
        TruncPoly {
            field: self.field,
            coeffs,
        }
    }

    /// The matrix `sum_k c_k J_m(0)^k`: upper triangular Toeplitz with
    /// `c_{j-i}` at `(i, j)`.
    pub fn eval_on_jordan(&self) -> Matrix {
        Matrix::from_fn(self.field, self.m(), self.m(), |i, j| {
            if j >= i {
                self.coeffs[j - i].clone()
            } else {
                self.field.zero()
            }
        })
    }

    /// Horner evaluation `sum_k c_k A^k` at an arbitrary square matrix.
    pub fn eval_at(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let id = Matrix::identity(self.field, n);
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(self.field, n, n), |acc, c| &(&acc * a) + &id.scale(c))
    }

    /// Coefficients of `q(Z) = p(Z + s)`, a plain change of variable (no
    /// truncation is involved since the degree stays below `m`).
    pub fn taylor_shift(&self, s: &Scalar) -> TruncPoly {
        let m = self.m();
        let mut out = vec![self.field.zero(); m];
        // Horner with (Z + s): acc <- acc * (Z + s) + c
        for c in self.coeffs.iter().rev() {
            let mut next = vec![self.field.zero(); m];
            for k in 0..m {
                if out[k].is_zero() {
                    continue;
                }
                next[k] = &next[k] + &(&out[k] * s);
                if k + 1 < m {
                    next[k + 1] = &next[k + 1] + &out[k];
                }
            }
            next[0] = &next[0] + c;
            out = next;
        }
        TruncPoly {
            field: self.field,
            coeffs: out,
        }
    }

    /// `g'`, with coefficient `(k+1) c_{k+1}` at `k`; in characteristic `p`
    /// the terms with `p | k+1` vanish.
    pub fn formal_derivative(&self) -> TruncPoly {
        let m = self.m();
        let coeffs = (0..m)
            .map(|k| {
                if k + 1 < m {
                    &self.field.from_u64(k as u64 + 1) * &self.coeffs[k + 1]
                } else {
                    self.field.zero()
                }
            })
            .collect();
        TruncPoly {
            field: self.field,
            coeffs,
        }
    }

    /// Reads `A` as an element of `F[J]` from its top row; fails with
    /// [`Error::NotInCentralizer`] when `[A, J] != 0`.
    pub fn centralizer_decompose(a: &Matrix, m: usize) -> Result<TruncPoly> {
        if !a.is_square() || a.rows() != m {
            return Err(Error::DimensionMismatch(format!("expected {m}x{m} matrix")));
        }
        let j = Matrix::jordan_block(m, &a.field().zero());
        if !a.commutator(&j)?.is_zero() {
            return Err(Error::NotInCentralizer);
        }
        TruncPoly::new(a.field(), a.row(0).to_vec())
    }

    /// Inverse of a unit with constant term 1, by the recurrence
    /// `b_k = -sum_{j=1..k} c_j b_{k-j}`.
    pub fn unipotent_inverse(&self) -> Result<TruncPoly> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NotUnipotentUnit);
        }
        let m = self.m();
        let mut inv = vec![self.field.one()];
        for k in 1..m {
            let mut acc = self.field.zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &inv[k - j]);
                }
            }
            inv.push(-acc);
        }
        Ok(TruncPoly {
            field: self.field,
            coeffs: inv,
        })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(field: Field, text: &str) -> Result<TruncPoly> {
        let coeffs = text
            .split(',')
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        TruncPoly::new(field, coeffs)
    }
}

/// Exponents `k < m` spanning the eigenvalue-`i` eigenspace of `ad D` on
/// `F[J]`: `k ≡ i (mod p)` in characteristic `p`, just `k = i` in
/// characteristic 0.
pub fn eigen_exponents(i: usize, m: usize, p: u64) -> Result<Vec<usize>> {
    if p == 0 {
        if i >= m {
            return Err(Error::IndexOutOfRange(format!("weight {i} with m = {m}")));
        }
        return Ok(vec![i]);
    }
    if i as u64 >= p {
        return Err(Error::IndexOutOfRange(format!("weight {i} with p = {p}")));
    }
    Ok((i..m).step_by(p as usize).collect())
}

/// Monomial basis of the `ad D`-eigenspace of eigenvalue `i` inside `F[J]`.
/// For `i = 0` the constant monomial is included, since `[D, I] = 0`.
pub fn ad_d_eigenspace(field: Field, i: usize, m: usize) -> Result<Vec<TruncPoly>> {
    Ok(eigen_exponents(i, m, field.characteristic())?
        .into_iter()
        .map(|k| TruncPoly::monomial(field, m, k))
        .collect())
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

macro_rules! polyop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&TruncPoly> for &TruncPoly {
            type Output = TruncPoly;
            fn $method(self, rhs: &TruncPoly) -> TruncPoly {
                match self.$checked(rhs) {
                    Ok(p) => p,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<TruncPoly> for TruncPoly {
            type Output = TruncPoly;
            fn $method(self, rhs: TruncPoly) -> TruncPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

polyop!(Add, add, checked_add);
polyop!(Sub, sub, checked_sub);
polyop!(Mul, mul, checked_mul);

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        self.scale(&-self.field.one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    const Q: Field = Field::RATIONALS;

    #[test]
    fn truncated_products() {
        let x = TruncPoly::monomial(Q, 3, 1);
        let x2 = TruncPoly::monomial(Q, 3, 2);
        assert!((&x * &x2).is_zero());
        let one_plus_x = TruncPoly::from_i64(Q, &[1, 1, 0]);
        assert_eq!(
            one_plus_x.eval_on_jordan(),
            &Matrix::identity(Q, 3) + &Matrix::jordan_block(3, &Q.zero())
        );
        let f2 = f(2);
        let a = TruncPoly::from_i64(f2, &[1, 1, 0, 0]);
        assert_eq!(&a * &a, TruncPoly::from_i64(f2, &[1, 0, 1, 0]));
        assert!(a.checked_mul(&TruncPoly::one(f2, 3)).is_err());
    }

    #[test]
    fn eval_matches_powers_of_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [Q, f(2), f(5)] {
            for m in 1..=6 {
                let g = TruncPoly::random(field, m, &mut rng);
                let j = Matrix::jordan_block(m, &field.zero());
                let mut acc = Matrix::zeros(field, m, m);
                for (k, c) in g.coeffs().iter().enumerate() {
                    acc = &acc + &j.pow(k as u64).scale(c);
                }
                assert_eq!(g.eval_on_jordan(), acc);
                assert_eq!(g.eval_at(&j), acc);
            }
        }
    }

    #[test]
    fn derivatives() {
        assert_eq!(
            TruncPoly::monomial(Q, 4, 3).formal_derivative(),
            TruncPoly::from_i64(Q, &[0, 0, 3, 0])
        );
        let f2 = f(2);
        assert!(TruncPoly::monomial(f2, 4, 2).formal_derivative().is_zero());
        let f3 = f(3);
        assert_eq!(
            TruncPoly::from_i64(f3, &[0, 1, 0, 1]).formal_derivative(),
            TruncPoly::one(f3, 4)
        );
    }

    #[test]
    fn centralizer() {
        let j = Matrix::jordan_block(3, &Q.zero());
        assert_eq!(
            TruncPoly::centralizer_decompose(&j.pow(2), 3).unwrap(),
            TruncPoly::from_i64(Q, &[0, 0, 1])
        );
        assert_eq!(
            TruncPoly::centralizer_decompose(&Matrix::identity(Q, 4), 4).unwrap(),
            TruncPoly::one(Q, 4)
        );
        assert_eq!(
            TruncPoly::centralizer_decompose(&Matrix::shifted_diagonal(3, &Q.zero()), 3),
            Err(Error::NotInCentralizer)
        );
    }

    #[test]
    fn unipotent_inverses() {
        assert_eq!(
            TruncPoly::from_i64(Q, &[1, -1, 0]).unipotent_inverse().unwrap(),
            TruncPoly::from_i64(Q, &[1, 1, 1])
        );
        for m in 1..=5 {
            assert_eq!(TruncPoly::one(Q, m).unipotent_inverse().unwrap(), TruncPoly::one(Q, m));
        }
        let f2 = f(2);
        let g = TruncPoly::from_i64(f2, &[1, 1, 0, 0]);
        let inv = g.unipotent_inverse().unwrap();
        assert_eq!(inv, TruncPoly::from_i64(f2, &[1, 1, 1, 1]));
        assert_eq!(&g * &inv, TruncPoly::one(f2, 4));
        assert_eq!(
            TruncPoly::from_i64(Q, &[2, 1]).unipotent_inverse(),
            Err(Error::NotUnipotentUnit)
        );
    }

    #[test]
    fn eigenspaces() {
        let f2 = f(2);
        let exps = |fld: Field, i, m| -> Vec<usize> {
            ad_d_eigenspace(fld, i, m)
                .unwrap()
                .iter()
                .map(|p| p.support().next().unwrap())
                .collect()
        };
        assert_eq!(exps(f2, 1, 6), vec![1, 3, 5]);
        assert_eq!(exps(Q, 2, 4), vec![2]);
        assert_eq!(exps(f2, 0, 5), vec![0, 2, 4]);
        assert!(ad_d_eigenspace(f2, 2, 6).is_err());
        assert!(ad_d_eigenspace(Q, 4, 4).is_err());
    }

    #[test]
    fn eigenspaces_are_eigenspaces() {
        // [D, J^k] = k J^k, checked by matrices
        for field in [f(2), f(3), f(5)] {
            let p = field.characteristic() as usize;
            for m in 1..=8 {
                let d = Matrix::shifted_diagonal(m, &field.from_i64(1));
                for i in 0..p {
                    for g in ad_d_eigenspace(field, i, m).unwrap() {
                        let gm = g.eval_on_jordan();
                        assert_eq!(d.commutator(&gm).unwrap(), gm.scale(&field.from_u64(i as u64)));
                    }
                    if i < m && p < m {
                        assert_eq!(ad_d_eigenspace(field, i, m).unwrap().len(), (m - 1 - i) / p + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn taylor_shift_matches_matrix_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in [Q, f(3), f(7)] {
            for m in 1..=5 {
                let p = TruncPoly::random(field, m, &mut rng);
                let s = field.random(&mut rng);
                let a = Matrix::random(field, m, m, &mut rng);
                let shifted = &a + &Matrix::identity(field, m).scale(&s);
                assert_eq!(p.taylor_shift(&s).eval_at(&a), p.eval_at(&shifted));
            }
        }
    }

    #[test]
    fn text_format() {
        let p = TruncPoly::from_i64(Q, &[1, 0, -2]);
        assert_eq!(p.to_text(), "1,0,-2");
        assert_eq!(TruncPoly::parse(Q, "1, 0, -2").unwrap(), p);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn case() -> impl Strategy<Value = (Field, usize, u64)> {
            (
                prop_oneof![Just(Q), Just(f(2)), Just(f(3)), Just(f(5))],
                1usize..=8,
                any::<u64>(),
            )
        }

        proptest! {
            #[test]
            fn derivative_identity((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = TruncPoly::random(field, m, &mut rng);
                let alpha = field.random(&mut rng);
                let d = Matrix::shifted_diagonal(m, &alpha);
                let j = Matrix::jordan_block(m, &field.zero());
                let lhs = d.commutator(&g.eval_on_jordan()).unwrap();
                let rhs = &g.formal_derivative().eval_on_jordan() * &j;
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn centralizer_roundtrip((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = TruncPoly::random(field, m, &mut rng);
                prop_assert_eq!(TruncPoly::centralizer_decompose(&g.eval_on_jordan(), m).unwrap(), g);
            }

            #[test]
            fn inverse_is_inverse((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut g = TruncPoly::random(field, m, &mut rng);
                g.set_coeff(0, field.one());
                let inv = g.unipotent_inverse().unwrap();
                prop_assert_eq!(&g * &inv, TruncPoly::one(field, m));
                prop_assert_eq!(inv.unipotent_inverse().unwrap(), g);
            }

            #[test]
            fn text_roundtrip((field, m, seed) in case()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let g = TruncPoly::random(field, m, &mut rng);
                prop_assert_eq!(TruncPoly::parse(field, &g.to_text()).unwrap(), g);
            }
        }
    }
}

//! The Lie algebra `g = <x> ⋉ a` with `ad x` diagonal on the abelian ideal
//! `a`, its matrix representations, and the predicates used to vet them.

mod build;
mod census;
mod classify;
pub mod format;
mod iso;

pub use build::{build_char_p, build_char_zero, ModuleSpec, ModuleSpecCharP, ModuleSpecCharZero};
pub use census::{enumerate, Census, CensusConfig, CensusEntry, Param, SpecSpace};
pub use classify::{classify, classify_with, multiplicity_bound, ClassInvariants, WeightData};
pub use iso::{intertwiners, is_isomorphic, is_isomorphic_with, IsoSearch};

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{invariant_subspace_lattice, is_chain, Matrix};

/// A basis vector of `g`: `x`, or slot `slot` (0-based) of the eigenspace
/// `weights[weight]` of `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X,
    U { weight: usize, slot: usize },
}

/// `g = <x> ⋉ a` given by the eigenvalues of `ad x` on `a` and their
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolvableAlgebra {
    field: Field,
    weights: Vec<(Scalar, usize)>,
    zero: Scalar,
}

impl SolvableAlgebra {
    pub fn new(field: Field, weights: Vec<(Scalar, usize)>) -> Result<SolvableAlgebra> {
        for (i, (d, dim)) in weights.iter().enumerate() {
            if d.field() != field {
                return Err(Error::MixedFields(field, d.field()));
            }
            if *dim == 0 {
                return Err(Error::DimensionMismatch(format!("weight {d} has dimension 0")));
            }
            if weights[..i].iter().any(|(e, _)| e == d) {
                return Err(Error::DimensionMismatch(format!("weight {d} listed twice")));
            }
        }
        if weights.is_empty() {
            return Err(Error::DimensionMismatch("a must be nonzero".into()));
        }
        Ok(SolvableAlgebra {
            field,
            weights,
            zero: field.zero(),
        })
    }

    /// Shorthand for small integer weights.
    pub fn from_i64(field: Field, weights: &[(i64, usize)]) -> Result<SolvableAlgebra> {
        SolvableAlgebra::new(field, weights.iter().map(|&(d, n)| (field.from_i64(d), n)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn weights(&self) -> &[(Scalar, usize)] {
        &self.weights
    }

    pub fn weight_index(&self, delta: &Scalar) -> Option<usize> {
        self.weights.iter().position(|(d, _)| d == delta)
    }

    pub fn dim_a(&self) -> usize {
        self.weights.iter().map(|(_, n)| n).sum()
    }

    /// `x` first, then the basis of `a` in weight order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = vec![Generator::X];
        out.extend(self.a_generators());
        out
    }

    pub fn a_generators(&self) -> Vec<Generator> {
        self.weights
            .iter()
            .enumerate()
            .flat_map(|(w, (_, n))| (0..*n).map(move |slot| Generator::U { weight: w, slot }))
            .collect()
    }

    pub fn slots(&self, weight: usize) -> impl Iterator<Item = Generator> {
        (0..self.weights[weight].1).map(move |slot| Generator::U { weight, slot })
    }

    /// Eigenvalue of `ad x` on `g` (zero for `x`).
    pub fn delta(&self, g: Generator) -> &Scalar {
        match g {
            Generator::X => &self.zero,
            Generator::U { weight, .. } => &self.weights[weight].0,
        }
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::X => true,
            Generator::U { weight, slot } => self.weights.get(weight).is_some_and(|(_, n)| slot < *n),
        }
    }

    /// `x` or `u[δ,t]` with `t` counted from 1.
    pub fn label(&self, g: Generator) -> String {
        match g {
            Generator::X => "x".into(),
            Generator::U { weight, slot } => format!("u[{},{}]", self.weights[weight].0, slot + 1),
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<Generator> {
        let s = s.trim();
        if s == "x" {
            return Ok(Generator::X);
        }
        let bad = || Error::Parse(format!("bad generator label {s:?}"));
        let inner = s.strip_prefix("u[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (d, t) = inner.rsplit_once(',').ok_or_else(bad)?;
        let delta = self.field.parse_scalar(d)?;
        let t: usize = t.trim().parse().map_err(|_| bad())?;
        let weight = self
            .weight_index(&delta)
            .ok_or_else(|| Error::Parse(format!("{delta} is not a weight")))?;
        let g = Generator::U {
            weight,
            slot: t.wrapping_sub(1),
        };
        if t == 0 || !self.contains(g) {
            return Err(Error::Parse(format!("slot {t} out of range in {s:?}")));
        }
        Ok(g)
    }

    /// `δ:dim` pairs separated by commas.
    pub fn weights_text(&self) -> String {
        let parts: Vec<String> = self.weights.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        parts.join(", ")
    }

    pub fn parse_weights(field: Field, text: &str) -> Result<SolvableAlgebra> {
        let mut weights = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, n) = part
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected 'delta:dim', got {part:?}")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad dimension in {part:?}")))?;
            weights.push((field.parse_scalar(d)?, n));
        }
        SolvableAlgebra::new(field, weights)
    }
}

impl fmt::Display for SolvableAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F={} weights={}", self.field, self.weights_text())
    }
}

/// Basis vectors `u[δ,t]` with `δ != 0`, which span `[g, g]`.
pub fn derived_subalgebra(g: &SolvableAlgebra) -> Vec<Generator> {
    g.a_generators()
        .into_iter()
        .filter(|u| !g.delta(*u).is_zero())
        .collect()
}

/// Images of the basis of `g` as `dim x dim` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    algebra: SolvableAlgebra,
    dim: usize,
    x: Matrix,
    a: Vec<Vec<Matrix>>,
}

impl Representation {
    /// `a[w][t]` is the image of `u[δ_w, t+1]`.
    pub fn new(algebra: SolvableAlgebra, x: Matrix, a: Vec<Vec<Matrix>>) -> Result<Representation> {
        let dim = x.rows();
        let field = algebra.field();
        if a.len() != algebra.weights.len() || a.iter().zip(&algebra.weights).any(|(imgs, (_, n))| imgs.len() != *n) {
            return Err(Error::DimensionMismatch(
                "image count does not match the algebra".into(),
            ));
        }
        for m in std::iter::once(&x).chain(a.iter().flatten()) {
            if m.field() != field {
                return Err(Error::MixedFields(field, m.field()));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!("expected {dim}x{dim} images")));
            }
        }
        Ok(Representation { algebra, dim, x, a })
    }

    pub fn zero(algebra: SolvableAlgebra, dim: usize) -> Representation {
        let z = Matrix::zeros(algebra.field(), dim, dim);
        let a = algebra.weights.iter().map(|(_, n)| vec![z.clone(); *n]).collect();
        Representation { algebra, dim, x: z, a }
    }

    pub fn algebra(&self) -> &SolvableAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn image(&self, g: Generator) -> &Matrix {
        match g {
            Generator::X => &self.x,
            Generator::U { weight, slot } => &self.a[weight][slot],
        }
    }

    /// Replaces one image. Shape is checked, bracket relations are not.
    pub fn set_image(&mut self, g: Generator, m: Matrix) -> Result<()> {
        if !self.algebra.contains(g) {
            return Err(Error::IndexOutOfRange(format!("{g:?}")));
        }
        if m.field() != self.field() {
            return Err(Error::MixedFields(self.field(), m.field()));
        }
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!("expected {0}x{0} image", self.dim)));
        }
        match g {
            Generator::X => self.x = m,
            Generator::U { weight, slot } => self.a[weight][slot] = m,
        }
        Ok(())
    }

    /// Images in [`SolvableAlgebra::generators`] order.
    pub fn images(&self) -> Vec<Matrix> {
        std::iter::once(&self.x)
            .chain(self.a.iter().flatten())
            .cloned()
            .collect()
    }

    /// The same module in the basis given by the columns of `q`:
    /// every image becomes `q^{-1} R(z) q`.
    pub fn conjugate_by(&self, q: &Matrix) -> Result<Representation> {
        let q_inv = q.inverse()?;
        let conj = |m: &Matrix| q_inv.checked_mul(m)?.checked_mul(q);
        Ok(Representation {
            algebra: self.algebra.clone(),
            dim: self.dim,
            x: conj(&self.x)?,
            a: self
                .a
                .iter()
                .map(|imgs| imgs.iter().map(conj).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        })
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.algebra != other.algebra {
            return Err(Error::DimensionMismatch("direct sum over different algebras".into()));
        }
        let n = self.dim + other.dim;
        let field = self.field();
        let block = |a: &Matrix, b: &Matrix| {
            Matrix::from_fn(field, n, n, |i, j| {
                if i < self.dim && j < self.dim {
                    a.get(i, j).clone()
                } else if i >= self.dim && j >= self.dim {
                    b.get(i - self.dim, j - self.dim).clone()
                } else {
                    field.zero()
                }
            })
        };
        Ok(Representation {
            algebra: self.algebra.clone(),
            dim: n,
            x: block(&self.x, &other.x),
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(p, q)| p.iter().zip(q).map(|(a, b)| block(a, b)).collect())
                .collect(),
        })
    }

    /// `[R(x), R(u)] = δ R(u)` on `a(δ)` and `[R(u), R(u')] = 0` on `a`.
    pub fn verify_representation(&self) -> bool {
        let gens = self.algebra.a_generators();
        let bracket_ok = gens.iter().all(|u| {
            let img = self.image(*u);
            self.x
                .commutator(img)
                .is_ok_and(|c| c == img.scale(self.algebra.delta(*u)))
        });
        bracket_ok
            && gens.iter().enumerate().all(|(i, u)| {
                gens[i + 1..]
                    .iter()
                    .all(|w| self.image(*u).commutator(self.image(*w)).is_ok_and(|c| c.is_zero()))
            })
    }

    /// `[g, g]` acts by nilpotent operators.
    pub fn is_admissible(&self) -> bool {
        derived_subalgebra(&self.algebra)
            .iter()
            .all(|u| self.image(*u).is_nilpotent())
    }

    pub fn annihilated_by_derived(&self) -> bool {
        derived_subalgebra(&self.algebra)
            .iter()
            .all(|u| self.image(*u).is_zero())
    }

    /// Invariant subspaces of all images form a chain. Exponential; needs a
    /// prime field and a subspace count within `budget`.
    pub fn is_uniserial_module(&self, budget: u128) -> Result<bool> {
        Ok(is_chain(&invariant_subspace_lattice(&self.images(), budget)?))
    }

    /// No nonzero element of `g` acts as zero.
    pub fn is_faithful(&self) -> bool {
        let images = self.images();
        let cols: Vec<Vec<Scalar>> = images.iter().map(|m| m.entries().to_vec()).collect();
        Matrix::from_columns(self.field(), &cols)
            .map(|m| m.rank() == images.len())
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DEFAULT_SUBSPACE_BUDGET;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn derived_examples() {
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(1, 1)]).unwrap();
        assert_eq!(derived_subalgebra(&g), vec![Generator::U { weight: 0, slot: 0 }]);
        let g = SolvableAlgebra::from_i64(q, &[(0, 2)]).unwrap();
        assert!(derived_subalgebra(&g).is_empty());
        let g = SolvableAlgebra::from_i64(q, &[(0, 1), (1, 1), (2, 1)]).unwrap();
        let labels: Vec<String> = derived_subalgebra(&g).iter().map(|u| g.label(*u)).collect();
        assert_eq!(labels, vec!["u[1,1]", "u[2,1]"]);
    }

    #[test]
    fn algebra_validation_and_labels() {
        let q = Field::RATIONALS;
        assert!(SolvableAlgebra::from_i64(q, &[(1, 1), (1, 2)]).is_err());
        assert!(SolvableAlgebra::from_i64(q, &[]).is_err());
        let g = SolvableAlgebra::parse_weights(q, "0:1, 1/2:2").unwrap();
        assert_eq!(g.weights_text(), "0:1, 1/2:2");
        assert_eq!(g.dim_a(), 3);
        let u = g.parse_label("u[1/2,2]").unwrap();
        assert_eq!(u, Generator::U { weight: 1, slot: 1 });
        assert_eq!(g.label(u), "u[1/2,2]");
        assert_eq!(g.delta(Generator::X), &q.zero());
        assert!(g.parse_label("u[1/2,3]").is_err());
        assert!(g.parse_label("u[1/2,0]").is_err());
        assert!(g.parse_label("u[5,1]").is_err());
    }

    #[test]
    fn predicates_on_trivial_modules() {
        let f2 = f(2);
        let g = SolvableAlgebra::from_i64(f2, &[(1, 1)]).unwrap();
        let zero = Representation::zero(g.clone(), 1);
        assert!(zero.verify_representation());
        assert!(zero.is_admissible());
        assert!(zero.annihilated_by_derived());
        assert!(!zero.is_faithful());
        let sum = zero.direct_sum(&zero).unwrap();
        assert!(!sum.is_uniserial_module(DEFAULT_SUBSPACE_BUDGET).unwrap());

        let abelian = SolvableAlgebra::from_i64(f2, &[(0, 1)]).unwrap();
        let id = Matrix::identity(f2, 2);
        let r = Representation::new(abelian, Matrix::zeros(f2, 2, 2), vec![vec![id]]).unwrap();
        assert!(r.is_admissible());
        assert!(r.annihilated_by_derived());
    }

    #[test]
    fn non_admissible() {
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(1, 1)]).unwrap();
        let mut r = Representation::zero(g, 2);
        r.set_image(Generator::U { weight: 0, slot: 0 }, Matrix::identity(q, 2))
            .unwrap();
        assert!(!r.is_admissible());
        assert!(!r.verify_representation());
    }

    #[test]
    fn shape_checks() {
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(1, 2)]).unwrap();
        let z = Matrix::zeros(q, 2, 2);
        assert!(Representation::new(g.clone(), z.clone(), vec![vec![z.clone()]]).is_err());
        assert!(Representation::new(g, z.clone(), vec![vec![z.clone(), Matrix::zeros(q, 3, 3)]]).is_err());
    }
}

//! Explicit uniserial modules from functional or map data.

use super::{Generator, Representation, SolvableAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::jordan::{eigen_exponents, TruncPoly};
use crate::matrix::Matrix;
use crate::orbit::ClassY;

/// Data for characteristic 0 or `p >= m`: `x ↦ D`, `u ↦ f_i(u) J^i` on
/// integer weights `0 <= i < m`, every other weight acting as zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleSpecCharZero {
    pub m: usize,
    pub alpha: Scalar,
    pub v: Generator,
    /// `functionals[w][t]` is the value on `u[δ_w, t+1]`.
    pub functionals: Vec<Vec<Scalar>>,
}

/// Data for characteristic `p < m`: `x ↦ Y` canonical and `u ↦ g_i(u)`,
/// a polynomial supported on exponents `k ≡ i (mod p)`, `k >= i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleSpecCharP {
    pub y: ClassY,
    pub v: Generator,
    /// `maps[w][t]` is the image of `u[δ_w, t+1]` in `F[J]`.
    pub maps: Vec<Vec<TruncPoly>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleSpec {
    CharZero(ModuleSpecCharZero),
    CharP(ModuleSpecCharP),
}

impl ModuleSpec {
    pub fn m(&self) -> usize {
        match self {
            ModuleSpec::CharZero(s) => s.m,
            ModuleSpec::CharP(s) => s.y.m(),
        }
    }

    pub fn alpha(&self) -> &Scalar {
        match self {
            ModuleSpec::CharZero(s) => &s.alpha,
            ModuleSpec::CharP(s) => s.y.alpha(),
        }
    }

    pub fn v(&self) -> Generator {
        match self {
            ModuleSpec::CharZero(s) => s.v,
            ModuleSpec::CharP(s) => s.v,
        }
    }

    pub fn build(&self, g: &SolvableAlgebra) -> Result<Representation> {
        match self {
            ModuleSpec::CharZero(s) => build_char_zero(s, g),
            ModuleSpec::CharP(s) => build_char_p(s, g),
        }
    }

    /// Whether characteristic and `m` call for the char-0 data shape.
    pub fn char_zero_regime(field: Field, m: usize) -> bool {
        let p = field.characteristic();
        p == 0 || p >= m as u64
    }
}

fn check_v(g: &SolvableAlgebra, v: Generator) -> Result<usize> {
    let one = g.field().one();
    let w1 = g.weight_index(&one).ok_or(Error::MissingWeightOne)?;
    match v {
        Generator::U { weight, .. } if weight == w1 && g.contains(v) => Ok(w1),
        _ => Err(Error::FunctionalNormalization(format!(
            "v = {v:?} is not a basis vector of a(1)"
        ))),
    }
}

fn check_shape<T>(g: &SolvableAlgebra, data: &[Vec<T>], what: &str) -> Result<()> {
    if data.len() != g.weights().len() || data.iter().zip(g.weights()).any(|(d, (_, n))| d.len() != *n) {
        return Err(Error::DimensionMismatch(format!("{what} do not match the weights")));
    }
    Ok(())
}

pub fn build_char_zero(spec: &ModuleSpecCharZero, g: &SolvableAlgebra) -> Result<Representation> {
    let field = g.field();
    let m = spec.m;
    let p = field.characteristic();
    if p != 0 && p < m as u64 {
        return Err(Error::CharacteristicViolation(format!(
            "characteristic {p} is below m = {m}"
        )));
    }
    if m < 2 {
        return Err(Error::DimensionMismatch("m must be at least 2".into()));
    }
    if spec.alpha.field() != field {
        return Err(Error::MixedFields(field, spec.alpha.field()));
    }
    check_v(g, spec.v)?;
    check_shape(g, &spec.functionals, "functionals")?;
    if let Some(bad) = spec.functionals.iter().flatten().find(|s| s.field() != field) {
        return Err(Error::MixedFields(field, bad.field()));
    }
    let Generator::U { weight, slot } = spec.v else {
        unreachable!("checked above")
    };
    if !spec.functionals[weight][slot].is_one() {
        return Err(Error::FunctionalNormalization(format!(
            "f(v) = {}, expected 1",
            spec.functionals[weight][slot]
        )));
    }

    let j = Matrix::jordan_block(m, &field.zero());
    let mut a = Vec::with_capacity(g.weights().len());
    for ((delta, _), fs) in g.weights().iter().zip(&spec.functionals) {
        let images = match delta.as_small_integer(m as u64) {
            Some(i) => {
                let ji = j.pow(i);
                fs.iter().map(|c| ji.scale(c)).collect()
            }
            None => {
                if fs.iter().any(|c| !c.is_zero()) {
                    return Err(Error::MapRangeViolation(format!(
                        "weight {delta} lies outside 0..{m} and must act as zero"
                    )));
                }
                vec![Matrix::zeros(field, m, m); fs.len()]
            }
        };
        a.push(images);
    }
    Representation::new(g.clone(), Matrix::shifted_diagonal(m, &spec.alpha), a)
}

pub fn build_char_p(spec: &ModuleSpecCharP, g: &SolvableAlgebra) -> Result<Representation> {
    let field = g.field();
    let m = spec.y.m();
    let p = field.characteristic();
    if p == 0 || p >= m as u64 {
        return Err(Error::CharacteristicViolation(format!(
            "characteristic {p} with m = {m} needs the char-0 construction"
        )));
    }
    if spec.y.field() != field {
        return Err(Error::MixedFields(field, spec.y.field()));
    }
    if !spec.y.is_canonical() {
        return Err(Error::NotCanonicalY);
    }
    check_v(g, spec.v)?;
    check_shape(g, &spec.maps, "maps")?;
    for ((delta, _), polys) in g.weights().iter().zip(&spec.maps) {
        let i = delta.residue().expect("prime field") as usize;
        let allowed = eigen_exponents(i, m, p)?;
        for poly in polys {
            if poly.field() != field {
                return Err(Error::MixedFields(field, poly.field()));
            }
            if poly.m() != m {
                return Err(Error::DimensionMismatch(format!(
                    "map of order {} with m = {m}",
                    poly.m()
                )));
            }
            if let Some(k) = poly.support().find(|k| !allowed.contains(k)) {
                return Err(Error::MapRangeViolation(format!("weight {delta} maps onto J^{k}")));
            }
        }
    }
    let Generator::U { weight, slot } = spec.v else {
        unreachable!("checked above")
    };
    if spec.maps[weight][slot] != TruncPoly::monomial(field, m, 1) {
        return Err(Error::FunctionalNormalization(format!(
            "v maps to {}, expected J",
            spec.maps[weight][slot]
        )));
    }
    let a = spec
        .maps
        .iter()
        .map(|polys| polys.iter().map(TruncPoly::eval_on_jordan).collect())
        .collect();
    let rep = Representation::new(g.clone(), spec.y.to_matrix(), a)?;
    if !rep.verify_representation() {
        return Err(Error::NotRepresentation);
    }
    Ok(rep)
}

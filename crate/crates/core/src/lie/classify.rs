//! Complete isomorphism invariants read off the normal form.

use std::fmt::Write as _;

use super::{Generator, Representation, SolvableAlgebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::jordan::eigen_exponents;
use crate::matrix::{Matrix, Subspace, DEFAULT_SUBSPACE_BUDGET};
use crate::normal::extract_normal_form_with;
use crate::orbit::ClassY;

/// What one eigenspace `a(δ)` contributes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightData {
    pub weight: usize,
    /// `δ` times the recorded rescaling of `x`.
    pub scaled_delta: Scalar,
    /// Kernel of `a(δ) -> F[J]`, in slot coordinates.
    pub annihilator: Subspace,
    /// Exponents of the monomials `J^k` that may occur.
    pub exponents: Vec<usize>,
    /// Per slot, the coefficients on `exponents`. Empty when `a(δ)` acts
    /// trivially.
    pub coefficients: Vec<Vec<Scalar>>,
}

impl WeightData {
    pub fn is_active(&self) -> bool {
        !self.coefficients.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassInvariants {
    pub m: usize,
    /// Eigenvalue of the rescaled `x` on the socle.
    pub alpha: Scalar,
    pub x_scale: Scalar,
    pub v: Generator,
    /// Rescaled eigenvalues of the weights acting nontrivially, ascending.
    pub active: Vec<Scalar>,
    pub canonical_y: ClassY,
    pub weights: Vec<WeightData>,
}

impl ClassInvariants {
    pub fn annihilator(&self, weight: usize) -> &Subspace {
        &self.weights[weight].annihilator
    }

    /// Stable `key = value` report.
    pub fn to_text(&self, g: &SolvableAlgebra) -> String {
        let mut out = String::new();
        let active: Vec<String> = self.active.iter().map(ToString::to_string).collect();
        writeln!(out, "m = {}", self.m).unwrap();
        writeln!(out, "alpha = {}", self.alpha).unwrap();
        writeln!(out, "x_scale = {}", self.x_scale).unwrap();
        writeln!(out, "v = {}", g.label(self.v)).unwrap();
        writeln!(out, "active = {}", active.join(",")).unwrap();
        writeln!(out, "canonical_y = {}", self.canonical_y.render()).unwrap();
        for w in &self.weights {
            let delta = &g.weights()[w.weight].0;
            let basis: Vec<String> = w
                .annihilator
                .basis()
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                .collect();
            writeln!(
                out,
                "annihilator {delta} = dim {} [{}]",
                w.annihilator.dim(),
                basis.join(";")
            )
            .unwrap();
            if w.is_active() {
                let exps: Vec<String> = w.exponents.iter().map(ToString::to_string).collect();
                let rows: Vec<String> = w
                    .coefficients
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                writeln!(out, "data {delta} = J^[{}] {}", exps.join(","), rows.join(";")).unwrap();
            }
        }
        out
    }
}

/// `floor((m - (i+1))/p) + 1`, for `0 <= i < p <= m`.
pub fn multiplicity_bound(i: usize, m: usize, p: usize) -> Result<usize> {
    if !(i < p && p <= m) {
        return Err(Error::IndexOutOfRange(format!(
            "need 0 <= i < p <= m, got i={i} p={p} m={m}"
        )));
    }
    Ok((m - (i + 1)) / p + 1)
}

pub fn classify(rep: &Representation) -> Result<ClassInvariants> {
    classify_with(rep, DEFAULT_SUBSPACE_BUDGET)
}

pub fn classify_with(rep: &Representation, budget: u128) -> Result<ClassInvariants> {
    let nf = extract_normal_form_with(rep, budget)?;
    let g = rep.algebra();
    let field = g.field();
    let m = nf.m;
    let p = field.characteristic();
    let hyperplane_regime = p == 0 || p >= m as u64;

    let mut weights = Vec::with_capacity(g.weights().len());
    let mut active = Vec::new();
    for (w, (delta, n)) in g.weights().iter().enumerate() {
        let polys: Vec<_> = g
            .slots(w)
            .map(|u| nf.poly(u).expect("every generator has a poly").clone())
            .collect();
        let cols: Vec<Vec<Scalar>> = polys.iter().map(|q| q.coeffs().to_vec()).collect();
        let kernel = Matrix::from_columns(field, &cols)?.nullspace();
        let annihilator = Subspace::span(field, *n, &kernel)?;
        let scaled_delta = delta * &nf.x_scale;
        let is_active = polys.iter().any(|q| !q.is_zero());

        let (exponents, coefficients) = if is_active {
            let i = scaled_delta
                .as_small_integer(if p == 0 { m as u64 } else { p })
                .ok_or_else(|| Error::MapRangeViolation(format!("rescaled weight {scaled_delta} acts nontrivially")))?;
            let exps = eigen_exponents(i as usize, m, if hyperplane_regime { 0 } else { p })
                .map_err(|_| Error::MapRangeViolation(format!("rescaled weight {i} exceeds m = {m}")))?;
            for q in &polys {
                if let Some(k) = q.support().find(|k| !exps.contains(k)) {
                    return Err(Error::MapRangeViolation(format!("weight {delta} acts through J^{k}")));
                }
            }
            if hyperplane_regime && n - annihilator.dim() > 1 {
                return Err(Error::HyperplaneViolation(format!(
                    "annihilator of weight {delta} has codimension {}",
                    n - annihilator.dim()
                )));
            }
            active.push(scaled_delta.clone());
            let coeffs = polys
                .iter()
                .map(|q| exps.iter().map(|&k| q.coeff(k)).collect())
                .collect();
            (exps, coeffs)
        } else {
            (Vec::new(), Vec::new())
        };
        weights.push(WeightData {
            weight: w,
            scaled_delta,
            annihilator,
            exponents,
            coefficients,
        });
    }
    active.sort();
    Ok(ClassInvariants {
        m,
        alpha: nf.alpha,
        x_scale: nf.x_scale,
        v: nf.v,
        active,
        canonical_y: nf.y,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::jordan::TruncPoly;
    use crate::lie::{build_char_p, build_char_zero, ModuleSpecCharP, ModuleSpecCharZero};

    fn u(weight: usize, slot: usize) -> Generator {
        Generator::U { weight, slot }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(multiplicity_bound(1, 6, 2).unwrap(), 3);
        assert_eq!(multiplicity_bound(0, 4, 2).unwrap(), 2);
        for p in [2, 3, 5, 7] {
            assert_eq!(multiplicity_bound(p - 1, p + 1, p).unwrap(), 1);
        }
        assert!(multiplicity_bound(2, 4, 2).is_err());
        assert!(multiplicity_bound(0, 2, 3).is_err());
    }

    #[test]
    fn bound_matches_eigenspace_dimension() {
        for p in [2usize, 3, 5] {
            for m in p..=8 {
                for i in 0..p {
                    let f = Field::prime(p as u64).unwrap();
                    let dim = crate::jordan::ad_d_eigenspace(f, i, m).unwrap().len();
                    assert_eq!(multiplicity_bound(i, m, p).unwrap(), dim);
                }
            }
        }
    }

    #[test]
    fn char_zero_round_trip() {
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(1, 1)]).unwrap();
        let spec = ModuleSpecCharZero {
            m: 3,
            alpha: q.from_i64(2),
            v: u(0, 0),
            functionals: vec![vec![q.one()]],
        };
        let inv = classify(&build_char_zero(&spec, &g).unwrap()).unwrap();
        assert_eq!(inv.m, 3);
        assert_eq!(inv.alpha, q.from_i64(2));
        assert_eq!(inv.active, vec![q.one()]);
        assert_eq!(inv.canonical_y, ClassY::diagonal(q.from_i64(2), 3));
    }

    #[test]
    fn char_p_round_trip() {
        let f2 = Field::prime(2).unwrap();
        let g = SolvableAlgebra::from_i64(f2, &[(1, 1)]).unwrap();
        let y = ClassY::parse(f2, "0; 0,1,0").unwrap();
        let spec = ModuleSpecCharP {
            y: y.clone(),
            v: u(0, 0),
            maps: vec![vec![TruncPoly::monomial(f2, 4, 1)]],
        };
        let inv = classify(&build_char_p(&spec, &g).unwrap()).unwrap();
        assert_eq!(inv.canonical_y, y);
    }

    #[test]
    fn hyperplane_annihilator() {
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(1, 2)]).unwrap();
        let spec = ModuleSpecCharZero {
            m: 3,
            alpha: q.zero(),
            v: u(0, 0),
            functionals: vec![vec![q.one(), q.zero()]],
        };
        let inv = classify(&build_char_zero(&spec, &g).unwrap()).unwrap();
        let w = inv.annihilator(0);
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&[q.zero(), q.one()]));
        assert!(inv.to_text(&g).contains("annihilator 1 = dim 1 [0,1]"));
    }

    #[test]
    fn rescaled_weights() {
        // x acting by 2D makes v a weight-2 vector; rescaling brings it back
        let q = Field::RATIONALS;
        let g = SolvableAlgebra::from_i64(q, &[(2, 1), (4, 1)]).unwrap();
        let d = Matrix::shifted_diagonal(3, &q.one()).scale(&q.from_i64(2));
        let j = Matrix::jordan_block(3, &q.zero());
        let r = Representation::new(g, d, vec![vec![j.clone()], vec![j.pow(2).scale(&q.from_i64(3))]]).unwrap();
        let inv = classify(&r).unwrap();
        assert_eq!(inv.x_scale, q.fraction(1, 2).unwrap());
        assert_eq!(inv.alpha, q.one());
        assert_eq!(inv.active, vec![q.one(), q.from_i64(2)]);
        assert_eq!(inv.weights[1].coefficients, vec![vec![q.from_i64(3)]]);
    }
}

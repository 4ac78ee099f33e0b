//! Exhaustive enumeration of module data over a prime field, with pairwise
//! isomorphism certificates.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{
    classify_with, is_isomorphic_with, ClassInvariants, Generator, IsoSearch, ModuleSpec, ModuleSpecCharP,
    ModuleSpecCharZero, Representation, SolvableAlgebra,
};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::jordan::{eigen_exponents, TruncPoly};
use crate::matrix::DEFAULT_SUBSPACE_BUDGET;
use crate::orbit::ClassY;
use crate::par::{filter_map_range, map_slice, Execution};

/// One free coordinate of the data space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Alpha,
    /// Coefficient of `J^k` in `Y - D`.
    Y(usize),
    /// Functional value (char 0) or coefficient of `J^exponent` (char p) on
    /// `u[δ_weight, slot+1]`.
    Coeff {
        weight: usize,
        slot: usize,
        exponent: usize,
    },
}

/// All data for fixed `(F_p, m, g)` with `v = u[1,1]`, as a grid over
/// [`Param`] coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecSpace {
    algebra: SolvableAlgebra,
    m: usize,
    v: Generator,
    params: Vec<Param>,
}

impl SpecSpace {
    pub fn new(algebra: &SolvableAlgebra, m: usize) -> Result<SpecSpace> {
        let field = algebra.field();
        let p = field.order().ok_or(Error::UnsupportedField(field))?;
        if m < 2 {
            return Err(Error::DimensionMismatch("m must be at least 2".into()));
        }
        let w1 = algebra.weight_index(&field.one()).ok_or(Error::MissingWeightOne)?;
        let v = Generator::U { weight: w1, slot: 0 };
        let char_zero = ModuleSpec::char_zero_regime(field, m);
        let mut params = vec![Param::Alpha];
        if !char_zero {
            params.extend((1..m).filter(|k| (*k as u64).is_multiple_of(p)).map(Param::Y));
        }
        for (w, (delta, n)) in algebra.weights().iter().enumerate() {
            let i = delta.residue().expect("prime field") as usize;
            let exps = if char_zero {
                if i < m {
                    vec![i]
                } else {
                    Vec::new()
                }
            } else {
                eigen_exponents(i, m, p)?
            };
            for slot in 0..*n {
                if (Generator::U { weight: w, slot }) == v {
                    continue;
                }
                params.extend(exps.iter().map(|&exponent| Param::Coeff {
                    weight: w,
                    slot,
                    exponent,
                }));
            }
        }
        Ok(SpecSpace {
            algebra: algebra.clone(),
            m,
            v,
            params,
        })
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn algebra(&self) -> &SolvableAlgebra {
        &self.algebra
    }

    /// Number of points, saturating.
    pub fn size(&self) -> u128 {
        let p = self.algebra.field().order().expect("prime field") as u128;
        (0..self.params.len()).fold(1u128, |acc, _| acc.saturating_mul(p))
    }

    /// The point whose base-`p` digits, lowest first, are the coordinates.
    pub fn point(&self, mut index: u128) -> Vec<Scalar> {
        let field = self.algebra.field();
        let p = field.order().expect("prime field") as u128;
        self.params
            .iter()
            .map(|_| {
                let d = index % p;
                index /= p;
                field.from_u64(d as u64)
            })
            .collect()
    }

    pub fn spec(&self, values: &[Scalar]) -> ModuleSpec {
        assert_eq!(values.len(), self.params.len());
        let field = self.algebra.field();
        let m = self.m;
        let mut alpha = field.zero();
        let mut yc = vec![field.zero(); m - 1];
        let mut coeff = HashMap::new();
        for (param, val) in self.params.iter().zip(values) {
            match *param {
                Param::Alpha => alpha = val.clone(),
                Param::Y(k) => yc[k - 1] = val.clone(),
                Param::Coeff { weight, slot, exponent } => {
                    coeff.insert((weight, slot, exponent), val.clone());
                }
            }
        }
        let Generator::U { weight: vw, slot: vs } = self.v else {
            unreachable!()
        };
        let weights = self.algebra.weights();
        if ModuleSpec::char_zero_regime(field, m) {
            let functionals = weights
                .iter()
                .enumerate()
                .map(|(w, (delta, n))| {
                    (0..*n)
                        .map(|t| {
                            if (w, t) == (vw, vs) {
                                return field.one();
                            }
                            let i = delta.residue().expect("prime field") as usize;
                            coeff.get(&(w, t, i)).cloned().unwrap_or_else(|| field.zero())
                        })
                        .collect()
                })
                .collect();
            ModuleSpec::CharZero(ModuleSpecCharZero {
                m,
                alpha,
                v: self.v,
                functionals,
            })
        } else {
            let maps = weights
                .iter()
                .enumerate()
                .map(|(w, (_, n))| {
                    (0..*n)
                        .map(|t| {
                            if (w, t) == (vw, vs) {
                                return TruncPoly::monomial(field, m, 1);
                            }
                            let mut q = TruncPoly::zero(field, m);
                            for k in 0..m {
                                if let Some(c) = coeff.get(&(w, t, k)) {
                                    q.set_coeff(k, c.clone());
                                }
                            }
                            q
                        })
                        .collect()
                })
                .collect();
            ModuleSpec::CharP(ModuleSpecCharP {
                y: ClassY::new(alpha, yc).expect("one field"),
                v: self.v,
                maps,
            })
        }
    }

    /// Every point differing from `values` in exactly one coordinate.
    pub fn mutations(&self, values: &[Scalar]) -> Vec<(Param, Vec<Scalar>)> {
        let field = self.algebra.field();
        let mut out = Vec::new();
        for (i, param) in self.params.iter().enumerate() {
            for e in field.elements().expect("prime field") {
                if e != values[i] {
                    let mut mutated = values.to_vec();
                    mutated[i] = e;
                    out.push((*param, mutated));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    /// Largest spec space accepted.
    pub limit: u128,
    pub subspace_budget: u128,
    pub iso: IsoSearch,
    pub exec: Execution,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            limit: 4096,
            subspace_budget: DEFAULT_SUBSPACE_BUDGET,
            iso: IsoSearch::default(),
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub spec: ModuleSpec,
    pub rep: Representation,
    pub invariants: ClassInvariants,
    pub faithful: bool,
}

/// Every module of a spec space, the pairwise isomorphism matrix and the
/// induced buckets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub algebra: SolvableAlgebra,
    pub m: usize,
    pub entries: Vec<CensusEntry>,
    pub iso: Vec<Vec<bool>>,
    /// `buckets[i]` is the least index isomorphic to entry `i`.
    pub buckets: Vec<usize>,
}

impl Census {
    pub fn bucket_count(&self) -> usize {
        self.buckets.iter().enumerate().filter(|(i, b)| i == *b).count()
    }

    pub fn distinct_invariants(&self) -> usize {
        let mut seen: Vec<&ClassInvariants> = Vec::new();
        for e in &self.entries {
            if !seen.contains(&&e.invariants) {
                seen.push(&e.invariants);
            }
        }
        seen.len()
    }

    /// The isomorphism matrix is an equivalence relation whose classes are
    /// exactly the fibres of the invariants.
    pub fn is_consistent(&self) -> bool {
        let n = self.entries.len();
        let equivalence = (0..n).all(|i| {
            self.iso[i][i]
                && (0..n)
                    .all(|j| self.iso[i][j] == self.iso[j][i] && self.iso[i][j] == (self.buckets[i] == self.buckets[j]))
        });
        let matches_invariants = (0..n)
            .all(|i| (0..n).all(|j| self.iso[i][j] == (self.entries[i].invariants == self.entries[j].invariants)));
        equivalence && matches_invariants && self.bucket_count() == self.distinct_invariants()
    }

    pub fn to_text(&self) -> String {
        let g = &self.algebra;
        let mut out = String::new();
        writeln!(out, "field = {}", g.field()).unwrap();
        writeln!(out, "m = {}", self.m).unwrap();
        writeln!(out, "weights = {}", g.weights_text()).unwrap();
        writeln!(out, "specs = {}", self.entries.len()).unwrap();
        writeln!(out, "buckets = {}", self.bucket_count()).unwrap();
        writeln!(out, "distinct_invariants = {}", self.distinct_invariants()).unwrap();
        writeln!(out, "consistent = {}", self.is_consistent()).unwrap();
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(out).unwrap();
            writeln!(out, "[spec {i}] bucket = {} faithful = {}", self.buckets[i], e.faithful).unwrap();
            out.push_str(&super::format::render_spec_body(g, &e.spec));
            for line in e.invariants.to_text(g).lines() {
                writeln!(out, "inv {line}").unwrap();
            }
        }
        writeln!(out).unwrap();
        writeln!(out, "[iso]").unwrap();
        for row in &self.iso {
            let s: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(out, "{s}").unwrap();
        }
        out
    }
}

pub fn enumerate(algebra: &SolvableAlgebra, m: usize, cfg: &CensusConfig) -> Result<Census> {
    let space = SpecSpace::new(algebra, m)?;
    let size = space.size();
    if size > cfg.limit {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget: cfg.limit,
        });
    }
    let specs: Vec<ModuleSpec> = (0..size).map(|i| space.spec(&space.point(i))).collect();
    let entries = map_slice(cfg.exec, &specs, |spec| -> Result<CensusEntry> {
        let rep = spec.build(algebra)?;
        let invariants = classify_with(&rep, cfg.subspace_budget)?;
        Ok(CensusEntry {
            spec: spec.clone(),
            faithful: rep.is_faithful(),
            rep,
            invariants,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let n = entries.len();
    let pairs = (n * n) as u64;
    let verdicts = filter_map_range(cfg.exec, pairs, |idx| {
        let (i, j) = ((idx / n as u64) as usize, (idx % n as u64) as usize);
        (i <= j).then(|| (i, j, is_isomorphic_with(&entries[i].rep, &entries[j].rep, &cfg.iso)))
    });
    let mut iso = vec![vec![false; n]; n];
    for (i, j, v) in verdicts {
        let v = v?;
        iso[i][j] = v;
        iso[j][i] = v;
    }
    let buckets = (0..n).map(|i| (0..=i).find(|&j| iso[i][j]).unwrap_or(i)).collect();
    Ok(Census {
        algebra: algebra.clone(),
        m,
        entries,
        iso,
        buckets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn space_shapes() {
        let g = SolvableAlgebra::from_i64(f(2), &[(1, 1)]).unwrap();
        let s = SpecSpace::new(&g, 3).unwrap();
        assert_eq!(s.params(), &[Param::Alpha, Param::Y(2)]);
        let g = SolvableAlgebra::from_i64(f(2), &[(1, 2)]).unwrap();
        let s = SpecSpace::new(&g, 4).unwrap();
        assert_eq!(s.size(), 2u128.pow(4));
        let g = SolvableAlgebra::from_i64(f(3), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(SpecSpace::new(&g, 2).unwrap().size(), 9);
        let g = SolvableAlgebra::from_i64(f(3), &[(0, 1)]).unwrap();
        assert_eq!(SpecSpace::new(&g, 2), Err(Error::MissingWeightOne));
        let gq = SolvableAlgebra::from_i64(Field::RATIONALS, &[(1, 1)]).unwrap();
        assert!(matches!(SpecSpace::new(&gq, 2), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn small_census() {
        let g = SolvableAlgebra::from_i64(f(2), &[(1, 1)]).unwrap();
        let c = enumerate(&g, 3, &CensusConfig::default()).unwrap();
        assert_eq!(c.entries.len(), 4);
        assert_eq!(c.bucket_count(), 4);
        assert!(c.is_consistent());
        let text = c.to_text();
        assert!(text.contains("consistent = true"));
    }

    #[test]
    fn census_limit() {
        let g = SolvableAlgebra::from_i64(f(2), &[(1, 2)]).unwrap();
        let cfg = CensusConfig {
            limit: 8,
            ..CensusConfig::default()
        };
        assert_eq!(
            enumerate(&g, 4, &cfg).map(|c| c.entries.len()),
            Err(Error::BudgetExceeded { needed: 16, budget: 8 })
        );
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = SolvableAlgebra::from_i64(f(3), &[(0, 1), (1, 1)]).unwrap();
        let run = |exec| {
            let cfg = CensusConfig {
                exec,
                iso: IsoSearch {
                    exec,
                    ..IsoSearch::default()
                },
                ..CensusConfig::default()
            };
            enumerate(&g, 2, &cfg).unwrap()
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}

use super::{rref, Matrix};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::par::{self, Execution};

/// Default cap on the number of candidate subspaces enumerated by
/// [`invariant_subspace_lattice`].
pub const DEFAULT_SUBSPACE_BUDGET: u128 = 1_000_000;

/// A subspace of `F^n` stored by its reduced row echelon basis, so equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let basis = Matrix::identity(field, ambient).to_rows();
        Subspace {
            field,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let mut rows = vectors.to_vec();
        let pivots = rref(&mut rows);
        Ok(Subspace {
            field,
            ambient,
            basis: rows,
            pivots,
        })
    }

    /// Span of the first `k` standard basis vectors.
    pub fn coordinate_flag(field: Field, ambient: usize, k: usize) -> Subspace {
        let mut basis = Matrix::identity(field, ambient).to_rows();
        basis.truncate(k);
        Subspace {
            field,
            ambient,
            basis,
            pivots: (0..k).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rest = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if rest[pc].is_zero() {
                continue;
            }
            let c = rest[pc].clone();
            for (r, b) in rest.iter_mut().zip(row) {
                if !b.is_zero() {
                    *r = &*r - &(&c * b);
                }
            }
        }
        rest.iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn is_invariant_under(&self, a: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&a.mul_vec(v)))
    }
}

/// Totally ordered by inclusion.
pub fn is_chain(subspaces: &[Subspace]) -> bool {
    subspaces.iter().enumerate().all(|(i, a)| {
        subspaces[i + 1..]
            .iter()
            .all(|b| a.is_subspace_of(b) || b.is_subspace_of(a))
    })
}

fn gaussian_binomial(p: u128, n: usize, k: usize) -> Option<u128> {
    // [n choose k]_p = prod_{i<k} (p^{n-i} - 1) / (p^{i+1} - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(p.checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul(p.checked_pow((i + 1) as u32)? - 1)?;
    }
    Some(num / den)
}

/// Number of subspaces of `F_p^n`, saturating at `u128::MAX`.
pub fn subspace_count(p: u64, n: usize) -> u128 {
    (0..=n)
        .map(|k| gaussian_binomial(p as u128, n, k).unwrap_or(u128::MAX))
        .fold(0u128, |acc, c| acc.saturating_add(c))
}

struct Schubert {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    offset: u64,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every subspace invariant under all members of `family`, over a prime field.
///
/// Candidates are enumerated by echelon shape (dimension, pivot columns, free
/// entries), and the result comes back in that order.
pub fn invariant_subspace_lattice(family: &[Matrix], budget: u128) -> Result<Vec<Subspace>> {
    invariant_subspace_lattice_with(family, budget, Execution::default())
}

pub fn invariant_subspace_lattice_with(family: &[Matrix], budget: u128, exec: Execution) -> Result<Vec<Subspace>> {
    let first = family
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty family".into()))?;
    let field = first.field();
    let n = first.rows();
    if family
        .iter()
        .any(|a| !a.is_square() || a.rows() != n || a.field() != field)
    {
        return Err(Error::DimensionMismatch(
            "family members differ in shape or field".into(),
        ));
    }
    let Some(p) = field.order() else {
        return Err(Error::UnsupportedField(field));
    };
    let needed = subspace_count(p, n);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let mut shapes = Vec::new();
    let mut total: u64 = 0;
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    (pc + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let count = p.pow(free.len() as u32);
            shapes.push(Schubert {
                pivots,
                free,
                offset: total,
            });
            total += count;
        }
    }

    let elems: Vec<Scalar> = field.elements().expect("prime field").collect();
    Ok(par::filter_map_range(exec, total, |idx| {
        let s = shapes.partition_point(|s| s.offset <= idx) - 1;
        let shape = &shapes[s];
        let mut code = idx - shape.offset;
        let mut basis: Vec<Vec<Scalar>> = shape
            .pivots
            .iter()
            .map(|&pc| {
                let mut row = vec![field.zero(); n];
                row[pc] = field.one();
                row
            })
            .collect();
        for &(r, c) in &shape.free {
            basis[r][c] = elems[(code % p) as usize].clone();
            code /= p;
        }
        let w = Subspace {
            field,
            ambient: n,
            basis,
            pivots: shape.pivots.clone(),
        };
        family.iter().all(|a| w.is_invariant_under(a)).then_some(w)
    }))
}
